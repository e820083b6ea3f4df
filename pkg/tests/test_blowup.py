import itertools
import random

import pytest

from grouprem.blowup import (
    ArcId,
    blowup_for_system,
    build_cycle_blowup,
    build_system_blowup,
    copy_to_solution,
    count_copies,
    iter_copies,
    solution_to_copies,
    to_dot,
)
from grouprem.catalog import product_pair_system, theta_graph, theta_tree
from grouprem.counting import count_solutions, enumerate_solutions
from grouprem.cycles import ColoredDigraph, spanning_trees
from grouprem.errors import ContractViolation, InvalidParameter, SizeLimitError
from grouprem.groups import ElementSet, make_cyclic, make_dihedral, make_symmetric
from grouprem.systems import SingleEquation, parse_system

from conftest import random_set, small_groups


def test_cycle_blowup_shape_z3():
    z3 = make_cyclic(3)
    full = ElementSet.full(3)
    b = build_cycle_blowup(z3, [full, full], 0)
    assert b.vertex_count == 6 and b.arc_count == 18
    assert count_copies(b) == 9


def test_theta_blowup_full_sets():
    z5 = make_cyclic(5)
    full = ElementSet.full(5)
    b = build_system_blowup(z5, [full] * 5, theta_graph(), product_pair_system())
    assert b.vertex_count == 20 and b.arc_count == 125
    assert count_copies(b) == 5 * 125


@pytest.mark.parametrize("group", small_groups(), ids=lambda g: g.name)
def test_copies_equal_n_times_solutions_single(group, rng):
    for _ in range(3):
        m = rng.randint(2, 4)
        sets = [random_set(rng, group.order, 0.6) for _ in range(m)]
        g = rng.randrange(group.order)
        b = build_cycle_blowup(group, sets, g)
        assert count_copies(b) == group.order * count_solutions(group, sets, SingleEquation(m, g))


@pytest.mark.parametrize("group", small_groups(), ids=lambda g: g.name)
def test_copies_equal_n_times_solutions_theta(group, rng):
    for _ in range(3):
        sets = [random_set(rng, group.order, 0.6) for _ in range(5)]
        b = build_system_blowup(group, sets, theta_graph(), product_pair_system())
        assert count_copies(b) == group.order * count_solutions(group, sets, product_pair_system())


def test_copies_are_arc_disjoint_and_roundtrip(rng):
    g = make_dihedral(3)
    sets = [random_set(rng, 6, 0.7) for _ in range(5)]
    sys = product_pair_system()
    b = build_system_blowup(g, sets, theta_graph(), sys)
    for sol in enumerate_solutions(g, sets, sys):
        # the N copies generated by one solution share no arc
        seen = set()
        for z in range(g.order):
            copy = solution_to_copies(sol, z, b)
            assert copy_to_solution(copy, b) == sol
            for tree in spanning_trees(theta_graph()):
                assert solution_to_copies(sol, z, b, tree) == copy
            arcs = {(a.color, a.label, a.tail) for a in _arcs(copy, b)}
            assert not arcs & seen
            seen |= arcs
    assert {(c.phi, c.labels) for c in iter_copies(b)} == {
        (solution_to_copies(s, z, b).phi, s) for s in enumerate_solutions(g, sets, sys) for z in range(g.order)
    }


def _arcs(copy, b):
    from grouprem.blowup import copy_arcs

    return copy_arcs(copy, b)


def test_cycle_copy_vertex_map():
    z4 = make_cyclic(4)
    sets = [ElementSet.full(4)] * 3
    b = build_cycle_blowup(z4, sets, 0)
    copy = solution_to_copies((1, 1, 2), 0, b)
    assert copy.phi == (0, 1, 2)
    assert copy_to_solution(copy, b) == (1, 1, 2)


def test_cycle_with_nontrivial_rhs_in_nonabelian_group(rng):
    s3 = make_symmetric(3)
    for g in range(6):
        sets = [random_set(rng, 6, 0.7) for _ in range(3)]
        b = build_cycle_blowup(s3, sets, g)
        copies = list(iter_copies(b))
        assert len(copies) == 6 * count_solutions(s3, sets, SingleEquation(3, g))
        for c in copies:
            copy_to_solution(c, b)


def test_non_solution_is_rejected():
    z5 = make_cyclic(5)
    b = build_cycle_blowup(z5, [ElementSet.full(5)] * 3, 0)
    with pytest.raises(ContractViolation):
        solution_to_copies((1, 1, 1), 0, b)


def test_removed_arcs_kill_copies():
    z3 = make_cyclic(3)
    full = ElementSet.full(3)
    b = build_cycle_blowup(z3, [full, full], 0)
    # dropping every arc of color 0 with label 1 kills the 3 solutions using x1 = 1
    cut = b.without(ArcId(0, 1, t) for t in range(3))
    assert cut.arc_count == 15
    assert count_copies(cut) == 6
    copy = solution_to_copies((1, 2), 0, b)
    with pytest.raises(ContractViolation):
        copy_to_solution(copy, cut)


def test_arc_code_roundtrip():
    b = build_cycle_blowup(make_cyclic(4), [ElementSet.full(4)] * 3, 1)
    for arc, _, _ in b.arcs():
        assert b.decode_arc(b.arc_code(arc)) == arc


def test_size_guard():
    z = make_cyclic(50)
    with pytest.raises(SizeLimitError):
        build_cycle_blowup(z, [ElementSet.full(50)] * 3, 0, max_arcs=1000)


def test_set_count_mismatch():
    with pytest.raises(InvalidParameter):
        build_system_blowup(make_cyclic(3), [ElementSet.full(3)] * 4, theta_graph(), product_pair_system())


def test_dot_export():
    b = build_cycle_blowup(make_cyclic(2), [ElementSet.full(2)] * 2, 0)
    dot = to_dot(b)
    assert dot.startswith("digraph") and dot.count("->") == b.arc_count


def test_blowup_for_system_searches_graph():
    z6 = make_cyclic(6)
    sys = parse_system("x1 + x2 - x3 = 0")
    sets = [ElementSet.full(6)] * 3
    b = blowup_for_system(z6, sets, sys)
    assert count_copies(b) == 6 * 36


def test_order_two_gap_runs_below_n_times_solutions():
    """Over Z2 x Z2 the bowtie does not represent its figure-eight vectors.

    Every copy still yields a solution, so copies never exceed N x solutions,
    but solutions that do not close up both triangles have no copy at all.
    """
    from grouprem.catalog import bowtie_graph, bowtie_vectors
    from grouprem.groups import make_direct_product
    from grouprem.systems import AbelianSystem

    z2 = make_cyclic(2)
    group = make_direct_product(z2, z2)
    sys = AbelianSystem(tuple(bowtie_vectors()))
    strict = 0
    for mask in range(16):
        s = ElementSet.of([x for x in range(4) if mask >> x & 1], 4)
        copies = count_copies(build_system_blowup(group, [s] * 6, bowtie_graph(), sys))
        target = 4 * count_solutions(group, [s] * 6, sys)
        assert copies <= target
        strict += copies < target
    assert strict == 14
