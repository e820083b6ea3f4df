"""Blow-up graphs: the base graph H inflated over a group G.

Vertex ``(g, u)`` of the blow-up (g a group element, u a base vertex) is
packed as ``g * h + u``.  For every base arc ``u -> v`` of color i, every
``g`` in G and every label ``a`` in ``A_i`` there is an arc
``(g, u) -> (g * a * s_i, v)`` labeled ``[a, i]``.  The right multiplier
``s_i`` is the identity except on the closing arc of the single-equation
cycle, where it is ``rhs^-1``.

Arcs are identified by ``(color, label, tail element)``; two arcs may join
the same pair of vertices with different labels.  Arcs are never
materialised: membership is a lookup in a per-color ``N x N`` mask indexed
by ``[tail element, label]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .counting import _check_group, _check_sets, eval_word, is_solution
from .cycles import (
    ColoredDigraph,
    SpanningTree,
    bfs_tree,
    directed_cycle,
    search_representation,
    search_strong_representation,
    tree_order,
    tree_parents,
    walk_vertices,
)
from .errors import ContractViolation, InvalidParameter, RepresentationNotFound, SizeLimitError
from .groups import ElementSet, GroupTable
from .systems import OrderedSystem, SingleEquation, System

MAX_ARCS = 10**7
DOT_MAX_VERTICES = 100


class ArcId(NamedTuple):
    color: int
    label: int
    tail: int  # group element of the tail vertex; the base vertex is fixed by the color


@dataclass(frozen=True, eq=False)
class BlowupGraph:
    group: GroupTable
    sets: tuple[ElementSet, ...]
    base: ColoredDigraph
    shifts: tuple[int, ...]
    system: System | None = None
    removed: frozenset[ArcId] = frozenset()
    _allowed: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = self.group.order
        allowed = []
        for c, s in enumerate(self.sets):
            mask = np.zeros((n, n), dtype=bool)
            mask[:, s.array()] = True
            allowed.append(mask)
        for arc in self.removed:
            allowed[arc.color][arc.tail, arc.label] = False
        for mask in allowed:
            mask.flags.writeable = False
        object.__setattr__(self, "_allowed", tuple(allowed))

    @property
    def N(self) -> int:
        return self.group.order

    @property
    def h(self) -> int:
        return self.base.h

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def vertex_count(self) -> int:
        return self.h * self.N

    @property
    def full_arc_count(self) -> int:
        return self.N * sum(len(s) for s in self.sets)

    @property
    def arc_count(self) -> int:
        return self.full_arc_count - len(self.removed)

    def vertex(self, g: int, u: int) -> int:
        return g * self.h + u

    def has_arc(self, arc: ArcId) -> bool:
        return bool(self._allowed[arc.color][arc.tail, arc.label])

    def head(self, arc: ArcId) -> int:
        """Group element of the head vertex of ``arc``."""
        t = self.group.table
        return int(t[t[arc.tail, arc.label], self.shifts[arc.color]])

    def arcs(self) -> Iterator[tuple[ArcId, int, int]]:
        """(arc id, tail vertex, head vertex) for every present arc."""
        for c, (u, v) in enumerate(self.base.arcs):
            for a in self.sets[c].members:
                for g in range(self.N):
                    arc = ArcId(c, a, g)
                    if self.has_arc(arc):
                        yield arc, self.vertex(g, u), self.vertex(self.head(arc), v)

    def label_count(self, color: int, label: int) -> int:
        return int(self._allowed[color][:, label].sum())

    def without(self, arcs: Iterable[ArcId]) -> "BlowupGraph":
        arcs = frozenset(ArcId(*a) for a in arcs)
        for arc in arcs:
            if not (0 <= arc.color < self.m and 0 <= arc.tail < self.N) or arc.label not in self.sets[arc.color]:
                raise InvalidParameter(f"{arc} is not an arc of this blow-up")
        return BlowupGraph(self.group, self.sets, self.base, self.shifts, self.system, self.removed | arcs)

    def arc_code(self, arc: ArcId) -> int:
        n = self.N
        return (arc.color * n + arc.label) * n + arc.tail

    def decode_arc(self, code: int) -> ArcId:
        n = self.N
        code = int(code)
        return ArcId(code // (n * n), (code // n) % n, code % n)


def _guard(group: GroupTable, sets: Sequence[ElementSet], max_arcs: int):
    arcs = group.order * sum(len(s) for s in sets)
    if arcs > max_arcs:
        raise SizeLimitError(f"blow-up would have {arcs} arcs, cap is {max_arcs}")


def build_cycle_blowup(group: GroupTable, sets: Sequence[ElementSet], g: int, max_arcs: int = MAX_ARCS) -> BlowupGraph:
    """Layered blow-up of the directed m-cycle for ``x_1 ... x_m = g``.

    Layer i (base vertex i-1) is joined to layer i+1 by ``x -> x a``; the
    closing arcs from layer m to layer 1 are ``x -> x a g^-1``.
    """
    m = len(sets)
    if m < 2:
        raise InvalidParameter("cycle blow-up needs at least 2 sets")
    sys = SingleEquation(m, g)
    _check_group(group, sys)
    _check_sets(group, sets, m)
    _guard(group, sets, max_arcs)
    shifts = [group.identity] * m
    shifts[-1] = group.inv(g)
    return BlowupGraph(group, tuple(sets), directed_cycle(m), tuple(shifts), sys)


def build_system_blowup(
    group: GroupTable,
    sets: Sequence[ElementSet],
    base: ColoredDigraph,
    system: System | None = None,
    max_arcs: int = MAX_ARCS,
) -> BlowupGraph:
    """Blow-up of ``base`` by ``sets``: arcs ``(g, u) -> (g a, v)`` for each color-i arc and a in A_i."""
    _check_sets(group, sets, base.m)
    if system is not None:
        if system.m != base.m:
            raise InvalidParameter(f"system has {system.m} variables, base graph has {base.m} arcs")
        _check_group(group, system)
    _guard(group, sets, max_arcs)
    return BlowupGraph(group, tuple(sets), base, (group.identity,) * base.m, system)


@dataclass(frozen=True)
class ColoredCopy:
    """A color-preserving copy of the base graph: base vertex u sits at ``(phi[u], u)``."""

    phi: tuple[int, ...]
    labels: tuple[int, ...]


def copy_arcs(copy: ColoredCopy, blowup: BlowupGraph) -> list[ArcId]:
    return [ArcId(c, copy.labels[c], copy.phi[u]) for c, (u, _) in enumerate(blowup.base.arcs)]


def solution_to_copies(solution: Sequence[int], z: int, blowup: BlowupGraph, tree: SpanningTree | None = None) -> ColoredCopy:
    """The copy generated by ``solution`` with the tree root placed on element ``z``.

    Values are pushed outward along ``tree`` (default: BFS tree from vertex
    0); every remaining arc is then required to close up.
    """
    sol = tuple(int(x) for x in solution)
    if blowup.system is None:
        raise InvalidParameter("blow-up carries no system")
    if len(sol) != blowup.m or not is_solution(blowup.group, blowup.system, sol):
        raise ContractViolation(f"{sol} is not a solution of the system")
    for c, x in enumerate(sol):
        if x not in blowup.sets[c]:
            raise ContractViolation(f"x{c + 1} = {x} is not in its set")
    if not 0 <= z < blowup.N:
        raise InvalidParameter(f"{z} is not a group element")
    grp = blowup.group
    tree = tree or bfs_tree(blowup.base)
    parents = tree_parents(blowup.base, tree)
    phi: dict[int, int] = {tree.root: z}
    for v in tree_order(blowup.base, tree):
        if v == tree.root:
            continue
        p, c, sign = parents[v]
        s = blowup.shifts[c]
        if sign == 1:
            phi[v] = grp.mul(grp.mul(phi[p], sol[c]), s)
        else:
            phi[v] = grp.mul(grp.mul(phi[p], grp.inv(s)), grp.inv(sol[c]))
    copy = ColoredCopy(tuple(phi[u] for u in range(blowup.h)), sol)
    for arc, (u, v) in zip(copy_arcs(copy, blowup), blowup.base.arcs):
        if blowup.head(arc) != copy.phi[v]:
            raise ContractViolation(
                f"solution {sol} does not close up along arc x{arc.color + 1}; "
                "the base graph does not represent the system"
            )
        if not blowup.has_arc(arc):
            raise ContractViolation(f"copy uses removed arc {arc}")
    return copy


def copy_to_solution(copy: ColoredCopy, blowup: BlowupGraph) -> tuple[int, ...]:
    """Read the labels off a copy and check that they solve the system."""
    grp = blowup.group
    if len(copy.phi) != blowup.h or len(copy.labels) != blowup.m:
        raise ContractViolation("copy has the wrong shape")
    for arc, (u, v) in zip(copy_arcs(copy, blowup), blowup.base.arcs):
        if not blowup.has_arc(arc) or blowup.head(arc) != copy.phi[v]:
            raise ContractViolation(f"{arc} is not an arc of the copy")
    sol = copy.labels
    sys = blowup.system
    if isinstance(sys, SingleEquation):
        z = copy.phi[0]
        closed = grp.mul(grp.product([z, *sol]), grp.inv(sys.rhs))
        if closed != z:
            raise ContractViolation("cycle labels do not return to the starting vertex")
    elif isinstance(sys, OrderedSystem):
        for word in sys.words:
            path = walk_vertices(blowup.base, word)
            value = eval_word(grp, word, sol)
            if path is not None and path[0] == path[-1]:
                # each step x^e equals phi(prev)^-1 phi(next), so the product telescopes
                steps = [grp.mul(grp.inv(copy.phi[a]), copy.phi[b]) for a, b in zip(path, path[1:])]
                if grp.product(steps) != value or value != grp.identity:
                    raise ContractViolation("telescoping product along the word is not the identity")
    if sys is not None and not is_solution(grp, sys, sol):
        raise ContractViolation(f"copy labels {sol} do not solve the system")
    return sol


def _extend(blowup: BlowupGraph, phi: np.ndarray, v: int, p: int, c: int, sign: int) -> np.ndarray:
    t = blowup.group.int_table()
    inv = blowup.group.inverse
    labels = blowup.sets[c].array()
    s = blowup.shifts[c]
    allowed = blowup._allowed[c]
    pv = phi[:, p]
    if sign == 1:
        new = t[t[pv[:, None], labels[None, :]], s]
        ok = allowed[pv[:, None], labels[None, :]]
    else:
        new = t[t[pv, inv[s]][:, None], inv[labels][None, :]]
        ok = allowed[new, labels[None, :]]
    rows, cols = np.nonzero(ok)
    out = phi[rows].copy()
    out[:, v] = new[rows, cols]
    return out


def _closing_filter(blowup: BlowupGraph, phi: np.ndarray, c: int) -> np.ndarray:
    t = blowup.group.int_table()
    inv = blowup.group.inverse
    u, v = blowup.base.arcs[c]
    a = t[t[inv[phi[:, u]], phi[:, v]], inv[blowup.shifts[c]]]
    return phi[blowup._allowed[c][phi[:, u], a]]


def iter_copy_blocks(blowup: BlowupGraph, roots: Iterable[int] | None = None) -> Iterator[np.ndarray]:
    """Arrays of copies (one row of phi values per copy), one block per root value.

    Assignments are extended layer by layer along a BFS tree from base
    vertex 0; a non-tree arc is checked as soon as both its endpoints are
    placed.  Nothing here consults the system, so the count is an
    independent check on the solution counters.
    """
    base = blowup.base
    tree = bfs_tree(base)
    parents = tree_parents(base, tree)
    order = tree_order(base, tree)
    placed_at = {v: i for i, v in enumerate(order)}
    closing: dict[int, list[int]] = {}
    for c, (u, v) in enumerate(base.arcs):
        if c not in tree.arcs:
            closing.setdefault(order[max(placed_at[u], placed_at[v])], []).append(c)
    for z in range(blowup.N) if roots is None else roots:
        phi = np.full((1, base.h), -1, dtype=np.int64)
        phi[0, tree.root] = z
        for v in order:
            if v != tree.root:
                p, c, sign = parents[v]
                phi = _extend(blowup, phi, v, p, c, sign)
            for c in closing.get(v, ()):
                phi = _closing_filter(blowup, phi, c)
            if len(phi) == 0:
                break
        yield phi


def count_copies(blowup: BlowupGraph) -> int:
    """Number of color-preserving copies of the base graph in the blow-up."""
    return sum(len(block) for block in iter_copy_blocks(blowup))


def copy_labels(blowup: BlowupGraph, phi: np.ndarray) -> np.ndarray:
    """Label matrix (copies x colors) for a block of phi rows."""
    t = blowup.group.int_table()
    inv = blowup.group.inverse
    cols = []
    for c, (u, v) in enumerate(blowup.base.arcs):
        cols.append(t[t[inv[phi[:, u]], phi[:, v]], inv[blowup.shifts[c]]])
    return np.stack(cols, axis=1) if cols else np.zeros((len(phi), 0), dtype=np.int64)


def copy_arc_codes(blowup: BlowupGraph) -> np.ndarray:
    """Every copy as a row of its m arc codes (see :meth:`BlowupGraph.arc_code`)."""
    n = blowup.N
    blocks = []
    for phi in iter_copy_blocks(blowup):
        if len(phi) == 0:
            continue
        labels = copy_labels(blowup, phi)
        tails = phi[:, [u for u, _ in blowup.base.arcs]]
        colors = np.arange(blowup.m, dtype=np.int64)[None, :]
        blocks.append((colors * n + labels) * n + tails)
    if not blocks:
        return np.zeros((0, blowup.m), dtype=np.int64)
    return np.concatenate(blocks)


def iter_copies(blowup: BlowupGraph) -> Iterator[ColoredCopy]:
    for phi in iter_copy_blocks(blowup):
        if len(phi) == 0:
            continue
        for row, labels in zip(phi.tolist(), copy_labels(blowup, phi).tolist()):
            yield ColoredCopy(tuple(row), tuple(labels))


def to_dot(blowup: BlowupGraph) -> str:
    """Graphviz source for small blow-ups; edges are labeled ``[a,i]`` with 1-based i."""
    if blowup.vertex_count > DOT_MAX_VERTICES:
        raise SizeLimitError(f"DOT export limited to {DOT_MAX_VERTICES} vertices")
    lines = ["digraph blowup {"]
    for g in range(blowup.N):
        for u in range(blowup.h):
            lines.append(f'  v{blowup.vertex(g, u)} [label="({g},{u})"];')
    for arc, tail, head in blowup.arcs():
        lines.append(f'  v{tail} -> v{head} [label="[{arc.label},{arc.color + 1}]"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def blowup_for_system(
    group: GroupTable,
    sets: Sequence[ElementSet],
    sys: System,
    graph: ColoredDigraph | None = None,
    max_vertices: int = 12,
    max_arcs: int = MAX_ARCS,
) -> BlowupGraph:
    """Blow-up matching ``sys``: the layered cycle for a single equation,
    otherwise over ``graph`` or a representation found by search
    (a strong one for ordered systems)."""
    if isinstance(sys, SingleEquation):
        return build_cycle_blowup(group, sets, sys.rhs, max_arcs=max_arcs)
    if graph is None:
        if isinstance(sys, OrderedSystem):
            found = search_strong_representation(sys, max_vertices)
            graph = found[0] if found else None
        else:
            graph = search_representation(sys, max_vertices)
        if graph is None:
            raise RepresentationNotFound("no graph representation within the search caps")
    return build_system_blowup(group, sets, graph, sys, max_arcs=max_arcs)
