import itertools

import pytest

from grouprem.blowup import ArcId, build_cycle_blowup, build_system_blowup, count_copies
from grouprem.catalog import product_pair_system, theta_graph
from grouprem.counting import count_solutions, enumerate_solutions
from grouprem.errors import ContractViolation, SizeLimitError
from grouprem.groups import ElementSet, make_cyclic, make_dihedral
from grouprem.removal import (
    CSV_COLUMNS,
    METHOD_LABEL,
    exact_min_removal,
    greedy_arc_hitting_set,
    pigeonhole_reduce,
    random_arc_hitting_set,
    records_to_csv,
    removal_experiment,
    run_pipeline,
)
from grouprem.systems import SingleEquation, parse_system

from conftest import random_set, small_groups


def brute_min_removal(group, sets, sys):
    """Smallest total removal by trying every subset of (set index, element) pairs."""
    pool = [(i, a) for i, s in enumerate(sets) for a in s]
    sols = [frozenset(enumerate(s)) for s in enumerate_solutions(group, sets, sys)]
    for size in range(len(pool) + 1):
        for cut in itertools.combinations(pool, size):
            cs = set(cut)
            if all(s & cs for s in sols):
                return size
    return None


def test_greedy_on_z3():
    z3 = make_cyclic(3)
    b = build_cycle_blowup(z3, [ElementSet.full(3)] * 2, 0)
    e = greedy_arc_hitting_set(b)
    assert len(e) == 9
    assert count_copies(b.without(e)) == 0
    report = pigeonhole_reduce(e, b)
    assert report.residual == 0
    assert report.method == METHOD_LABEL


@pytest.mark.parametrize("group", small_groups()[1:], ids=lambda g: g.name)
def test_pipeline_sound_on_random_instances(group, rng):
    for _ in range(3):
        sets = [random_set(rng, group.order, 0.5) for _ in range(5)]
        b = build_system_blowup(group, sets, theta_graph(), product_pair_system())
        for e in (greedy_arc_hitting_set(b), random_arc_hitting_set(b, seed=rng.randrange(1 << 30), extra=3)):
            assert count_copies(b.without(e)) == 0
            rep = pigeonhole_reduce(e, b)
            assert rep.residual == 0
            for removed in rep.removed:
                assert len(removed) * group.order <= 5 * len(e)


def test_pigeonhole_rejects_non_hitting_set():
    b = build_cycle_blowup(make_cyclic(3), [ElementSet.full(3)] * 2, 0)
    with pytest.raises(ContractViolation):
        pigeonhole_reduce(frozenset([ArcId(0, 0, 0)]), b)
    with pytest.raises(ContractViolation):
        pigeonhole_reduce(frozenset([ArcId(0, 5, 0)]), b)


def test_exact_matches_brute_force(rng):
    z5 = make_cyclic(5)
    assert exact_min_removal(z5, [ElementSet.of([1], 5), ElementSet.of([4], 5)], SingleEquation(2, 0)).total == 1
    assert exact_min_removal(make_cyclic(2), [ElementSet.full(2)] * 2, SingleEquation(2, 0)).total == 2
    for _ in range(12):
        g = rng.choice([make_cyclic(4), make_cyclic(5), make_dihedral(3)])
        m = rng.randint(2, 3)
        sets = [random_set(rng, g.order, 0.5) for _ in range(m)]
        sys = SingleEquation(m, rng.randrange(g.order))
        res = exact_min_removal(g, sets, sys)
        assert res.optimal
        assert res.total == brute_min_removal(g, sets, sys)
        reduced = [s.difference(b.members) for s, b in zip(sets, res.removed)]
        assert count_solutions(g, reduced, sys) == 0


def test_exact_never_beats_pipeline(rng):
    z7 = make_cyclic(7)
    sys = parse_system("x1 + x2 - x3 = 0")
    for _ in range(6):
        sets = [random_set(rng, 7, 0.5) for _ in range(3)]
        from grouprem.blowup import blowup_for_system

        rep = run_pipeline(blowup_for_system(z7, sets, sys))
        assert exact_min_removal(z7, sets, sys).total <= rep.total_removed


def test_exact_cap():
    with pytest.raises(SizeLimitError):
        exact_min_removal(make_cyclic(30), [ElementSet.full(30)] * 2, SingleEquation(2, 0))


def test_node_budget_returns_valid_cover():
    z6 = make_cyclic(6)
    sets = [ElementSet.full(6)] * 3
    res = exact_min_removal(z6, sets, SingleEquation(3, 0), node_budget=3)
    reduced = [s.difference(b.members) for s, b in zip(sets, res.removed)]
    assert count_solutions(z6, reduced, SingleEquation(3, 0)) == 0
    assert res.lower_bound <= res.total


def test_experiment_sweep_is_reproducible():
    cfg = {"family": "cyclic", "sizes": [5, 8], "densities": [0.4], "system": "x1 + x2 - x3 = 0", "trials": 2, "seed": 3}
    a, b = removal_experiment(cfg), removal_experiment(cfg)
    assert a == b and len(a) == 4
    csv_text = records_to_csv(a)
    assert csv_text.splitlines()[0].split(",") == CSV_COLUMNS
    for r in a:
        assert r["residual"] == 0
        if r["oracle_removed_fraction"] is not None:
            assert r["oracle_removed_fraction"] <= r["pipeline_removed_fraction"]


def test_experiment_parallel_matches_serial():
    cfg = {"family": "dihedral", "sizes": [3, 4], "densities": [0.5], "system": "x1 x2 x4^-1 x3^-1 = 1; x1 x2 x5^-1 = 1", "trials": 2, "seed": 9}
    assert removal_experiment(cfg, jobs=2) == removal_experiment(cfg, jobs=1)
