"""Cycle spaces of arc-colored digraphs and representability of systems.

A :class:`ColoredDigraph` has exactly one arc per color and colors are the
variable indices of an equation system, so cycle vectors, equation vectors
and incidence-matrix columns all share the same coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ContractViolation, InvalidParameter, SizeLimitError
from .linalg import bareiss_det, matvec, rank, submatrix
from .systems import AbelianSystem, OrderedSystem, System, characteristic_vectors

MAX_SEARCH_ARCS = 10


@dataclass(frozen=True)
class ColoredDigraph:
    """Weakly connected loopless multi-digraph; ``arcs[c] = (tail, head)`` is the arc of color c."""

    vertex_count: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        arcs = tuple((int(t), int(h)) for t, h in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        h = self.vertex_count
        if h < 1:
            raise InvalidParameter("graph needs at least one vertex")
        for c, (t, hd) in enumerate(arcs):
            if not (0 <= t < h and 0 <= hd < h):
                raise InvalidParameter(f"arc of color {c} has an endpoint outside [0, {h})")
            if t == hd:
                raise InvalidParameter(f"arc of color {c} is a self-loop")
        if _components(h, arcs) != 1:
            raise InvalidParameter("graph must be weakly connected")

    @classmethod
    def from_triples(cls, vertex_count: int, triples: Sequence[tuple[int, int, int]]) -> "ColoredDigraph":
        """Build from (tail, head, color) triples; colors must be a permutation of 0..m-1."""
        colors = sorted(c for _, _, c in triples)
        if colors != list(range(len(triples))):
            raise InvalidParameter("each color 0..m-1 must label exactly one arc")
        arcs = [None] * len(triples)
        for t, h, c in triples:
            arcs[c] = (t, h)
        return cls(vertex_count, tuple(arcs))

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def h(self) -> int:
        return self.vertex_count

    @property
    def cycle_space_dim(self) -> int:
        return self.m - self.h + 1

    def to_json(self):
        return {
            "vertices": self.vertex_count,
            "arcs": [{"tail": t, "head": h, "color": c} for c, (t, h) in enumerate(self.arcs)],
        }

    @classmethod
    def from_json(cls, obj) -> "ColoredDigraph":
        try:
            triples = [(a["tail"], a["head"], a.get("color", i)) for i, a in enumerate(obj["arcs"])]
            return cls.from_triples(int(obj["vertices"]), triples)
        except (KeyError, TypeError) as exc:
            raise InvalidParameter(f"malformed graph JSON: {exc}") from exc


def _components(h, arcs) -> int:
    parent = list(range(h))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = h
    for t, hd in arcs:
        a, b = find(t), find(hd)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps


@dataclass(frozen=True)
class SpanningTree:
    """Colors of the tree arcs plus a root vertex."""

    arcs: frozenset[int]
    root: int = 0

    @classmethod
    def of(cls, graph: ColoredDigraph, colors, root: int = 0) -> "SpanningTree":
        colors = frozenset(int(c) for c in colors)
        if any(not 0 <= c < graph.m for c in colors):
            raise InvalidParameter("tree arc color out of range")
        if len(colors) != graph.h - 1:
            raise InvalidParameter(f"spanning tree needs {graph.h - 1} arcs, got {len(colors)}")
        if _components(graph.h, [graph.arcs[c] for c in colors]) != 1:
            raise InvalidParameter("tree arcs contain a cycle")
        if not 0 <= root < graph.h:
            raise InvalidParameter("root out of range")
        return cls(colors, root)


def bfs_tree(graph: ColoredDigraph, root: int = 0) -> SpanningTree:
    """Breadth-first spanning tree, scanning arcs in color order."""
    seen = {root}
    frontier = [root]
    chosen = []
    while frontier:
        nxt = []
        for v in frontier:
            for c, (t, h) in enumerate(graph.arcs):
                if v in (t, h):
                    w = h if t == v else t
                    if w not in seen:
                        seen.add(w)
                        chosen.append(c)
                        nxt.append(w)
        frontier = nxt
    return SpanningTree(frozenset(chosen), root)


def spanning_trees(graph: ColoredDigraph, root: int = 0) -> Iterator[SpanningTree]:
    for colors in itertools.combinations(range(graph.m), graph.h - 1):
        if _components(graph.h, [graph.arcs[c] for c in colors]) == 1:
            yield SpanningTree(frozenset(colors), root)


def tree_parents(graph: ColoredDigraph, tree: SpanningTree) -> dict[int, tuple[int, int, int]]:
    """Map each non-root vertex to (parent, color, +1 if the arc points parent->child else -1)."""
    parents: dict[int, tuple[int, int, int]] = {}
    seen = {tree.root}
    frontier = [tree.root]
    while frontier:
        nxt = []
        for v in frontier:
            for c in sorted(tree.arcs):
                t, h = graph.arcs[c]
                if t == v and h not in seen:
                    parents[h] = (v, c, 1)
                elif h == v and t not in seen:
                    parents[t] = (v, c, -1)
                else:
                    continue
                w = h if t == v else t
                seen.add(w)
                nxt.append(w)
        frontier = nxt
    return parents


def tree_order(graph: ColoredDigraph, tree: SpanningTree) -> list[int]:
    """Vertices in BFS order from the root (parents before children)."""
    parents = tree_parents(graph, tree)
    depth = {tree.root: 0}

    def d(v):
        if v not in depth:
            depth[v] = d(parents[v][0]) + 1
        return depth[v]

    return sorted(range(graph.h), key=lambda v: (d(v), v))


def incidence_matrix(graph: ColoredDigraph) -> list[list[int]]:
    """h x m matrix; the column of arc (u, v) has -1 in row u and +1 in row v."""
    mat = [[0] * graph.m for _ in range(graph.h)]
    for c, (t, h) in enumerate(graph.arcs):
        mat[t][c] -= 1
        mat[h][c] += 1
    return mat


def fundamental_cycles(graph: ColoredDigraph, tree: SpanningTree) -> list[tuple[int, ...]]:
    """One cycle vector per non-tree arc (ascending color), +1 on that arc."""
    parents = tree_parents(graph, tree)

    def to_root(v):
        vec = [0] * graph.m
        while v != tree.root:
            p, c, sign = parents[v]
            # stepping child -> parent runs against the arc when it points parent -> child
            vec[c] -= sign
            v = p
        return vec

    out = []
    for c in range(graph.m):
        if c in tree.arcs:
            continue
        t, h = graph.arcs[c]
        up_h, up_t = to_root(h), to_root(t)
        vec = [a - b for a, b in zip(up_h, up_t)]
        vec[c] += 1
        out.append(tuple(vec))
    return out


def in_cycle_space(v: Sequence[int], graph: ColoredDigraph) -> bool:
    if len(v) != graph.m:
        raise InvalidParameter(f"vector has length {len(v)}, graph has {graph.m} arcs")
    return not any(matvec(incidence_matrix(graph), v))


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome with a reason code when negative."""

    ok: bool
    reason: str | None = None
    determinant: int | None = None

    def __bool__(self):
        return self.ok


def integrally_generates(vectors: Sequence[Sequence[int]], graph: ColoredDigraph) -> Verdict:
    """Do ``vectors`` form an integral basis of the cycle space of ``graph``?

    Checks membership, then independence with the right count, then the
    determinant on the non-tree columns of a BFS tree.  That minor equals
    the determinant of the change of basis to the fundamental cycles, so
    ``|det| == 1`` is exactly unimodularity.
    """
    vectors = [list(v) for v in vectors]
    for v in vectors:
        if not in_cycle_space(v, graph):
            return Verdict(False, "not-in-space")
    dim = graph.cycle_space_dim
    if len(vectors) != dim or (vectors and rank(vectors) != dim):
        return Verdict(False, "wrong-rank")
    if not vectors:
        return Verdict(True, determinant=1)
    tree = bfs_tree(graph)
    cols = [c for c in range(graph.m) if c not in tree.arcs]
    det = bareiss_det(submatrix(vectors, cols))
    if abs(det) != 1:
        return Verdict(False, "bad-determinant", det)
    return Verdict(True, determinant=det)


def _check_colors(graph: ColoredDigraph, sys: System):
    if graph.m != sys.m:
        raise InvalidParameter(f"graph has {graph.m} arcs but the system has {sys.m} variables")


def is_graph_representation(graph: ColoredDigraph, sys: System) -> Verdict:
    _check_colors(graph, sys)
    return integrally_generates(characteristic_vectors(sys), graph)


def walk_vertices(graph: ColoredDigraph, word) -> list[int] | None:
    """Vertices visited when following ``word`` through ``graph``, or None if it is not a walk.

    An exponent of +1 crosses the arc tail -> head, -1 crosses it head -> tail.
    """
    v0, e0 = word[0]
    t, h = graph.arcs[v0]
    cur = t if e0 == 1 else h
    path = [cur]
    for v, e in word:
        t, h = graph.arcs[v]
        src, dst = (t, h) if e == 1 else (h, t)
        if cur != src:
            return None
        cur = dst
        path.append(cur)
    return path


def is_strong_representation(graph: ColoredDigraph, tree: SpanningTree, sys: OrderedSystem) -> Verdict:
    """Do the equation words trace, in order, exactly the fundamental cycles of ``tree``?

    Each word must be a closed walk in ``graph`` whose cycle vector is one
    of the fundamental cycles (either orientation), and the equations must
    use every fundamental cycle exactly once.
    """
    _check_colors(graph, sys)
    if len(tree.arcs) != graph.h - 1:
        raise InvalidParameter("tree does not span the graph")
    fund = fundamental_cycles(graph, tree)
    if len(fund) != sys.k:
        return Verdict(False, "wrong-rank")
    lookup = {}
    for idx, vec in enumerate(fund):
        lookup[vec] = idx
        lookup[tuple(-x for x in vec)] = idx
    used = set()
    for word, vec in zip(sys.words, characteristic_vectors(sys)):
        path = walk_vertices(graph, word)
        if path is None or path[0] != path[-1]:
            return Verdict(False, "not-closed-walk")
        idx = lookup.get(tuple(vec))
        if idx is None:
            return Verdict(False, "not-fundamental")
        if idx in used:
            return Verdict(False, "not-fundamental")
        used.add(idx)
    vecs = characteristic_vectors(sys)
    for i, row in enumerate(vecs):
        private = [j for j, e in enumerate(row) if e and all(vecs[o][j] == 0 for o in range(len(vecs)) if o != i)]
        if not private:
            raise ContractViolation(f"equation {i + 1} has no private variable")
    return Verdict(True)


def iter_representations(sys: AbelianSystem, max_vertices: int, max_arcs: int = MAX_SEARCH_ARCS) -> Iterator[ColoredDigraph]:
    """All graph representations on m - k + 1 vertices, canonically labeled.

    Arcs are assigned in color order with endpoints in lexicographic order;
    a vertex label may only be used once every smaller label has been
    used.  A branch is cut when some equation's vertex imbalance can no
    longer be cancelled by its unassigned arcs.
    """
    rows = characteristic_vectors(sys)
    m, k = sys.m, sys.k
    if m > max_arcs:
        raise SizeLimitError(f"representation search capped at {max_arcs} arcs, system has {m}")
    h = m - k + 1
    if h < 2 or h > max_vertices:
        return
    support_left = [[sum(1 for j in range(c, m) if row[j]) for c in range(m + 1)] for row in rows]
    imbalance = [[0] * h for _ in rows]
    arcs: list[tuple[int, int]] = []

    def apply(c, t, hd, sign):
        for i, row in enumerate(rows):
            e = row[c]
            if e:
                imbalance[i][t] -= sign * e
                imbalance[i][hd] += sign * e

    def feasible(c):
        return all(
            sum(abs(x) for x in imbalance[i]) <= 2 * support_left[i][c + 1]
            for i in range(len(rows))
        )

    def rec(c, used):
        if c == m:
            if used != h:
                return
            graph = ColoredDigraph(h, tuple(arcs)) if _components(h, arcs) == 1 else None
            if graph is not None and integrally_generates(rows, graph):
                yield graph
            return
        if h - used > 2 * (m - c):
            return
        for t in range(min(used + 1, h)):
            used_t = max(used, t + 1)
            for hd in range(min(used_t + 1, h)):
                if hd == t:
                    continue
                apply(c, t, hd, 1)
                if feasible(c):
                    arcs.append((t, hd))
                    yield from rec(c + 1, max(used_t, hd + 1))
                    arcs.pop()
                apply(c, t, hd, -1)

    yield from rec(0, 0)


def search_representation(sys: System, max_vertices: int, max_arcs: int = MAX_SEARCH_ARCS) -> ColoredDigraph | None:
    """First graph representation found by :func:`iter_representations`, or None."""
    if max_vertices < 2:
        raise InvalidParameter("max_vertices must be at least 2")
    abel = sys if isinstance(sys, AbelianSystem) else AbelianSystem(tuple(tuple(r) for r in characteristic_vectors(sys)))
    return next(iter_representations(abel, max_vertices, max_arcs), None)


def search_strong_representation(sys: OrderedSystem, max_vertices: int, max_arcs: int = MAX_SEARCH_ARCS):
    """First (graph, tree) pair strongly representing ``sys``, or None."""
    if max_vertices < 2:
        raise InvalidParameter("max_vertices must be at least 2")
    abel = AbelianSystem(tuple(tuple(r) for r in characteristic_vectors(sys)))
    for graph in iter_representations(abel, max_vertices, max_arcs):
        for tree in spanning_trees(graph):
            if is_strong_representation(graph, tree, sys):
                return graph, tree
    return None


def directed_cycle(m: int) -> ColoredDigraph:
    """The directed m-cycle 0 -> 1 -> ... -> m-1 -> 0, arc i colored i."""
    if m < 2:
        raise InvalidParameter("a directed cycle needs at least 2 arcs")
    return ColoredDigraph(m, tuple((i, (i + 1) % m) for i in range(m)))
