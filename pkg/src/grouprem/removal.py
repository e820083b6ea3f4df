"""From an arc set that kills every copy to element sets that kill every solution.

The pipeline is: enumerate the copies of the base graph in the blow-up,
choose arcs hitting all of them (greedy here, in place of a regularity
argument), then drop from ``A_i`` every label ``a`` carried by at least
``N/m`` chosen arcs of color i.  Because each solution yields ``N``
arc-disjoint copies, some label of every surviving solution must reach
that threshold, so the reduced sets have no solutions left.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blowup import ArcId, BlowupGraph, blowup_for_system, copy_arc_codes, count_copies
from .counting import count_solutions, enumerate_solutions
from .cycles import ColoredDigraph
from .errors import ConfigError, ContractViolation, GroupRemError, SizeLimitError
from .groups import ElementSet, GroupTable, group_from_descriptor
from .rng import SplitMix64, derive_seed
from .systems import System, parse_system_json

log = logging.getLogger(__name__)

METHOD_LABEL = "exact hitting set (non-regularity)"
MAX_COPIES = 5_000_000
EXACT_MAX_ELEMENTS = 40
EXACT_NODE_BUDGET = 200_000


def _copy_matrix(blowup: BlowupGraph, max_copies: int) -> np.ndarray:
    total = count_copies(blowup)
    if total > max_copies:
        raise SizeLimitError(f"{total} copies exceed the enumeration cap {max_copies}")
    return copy_arc_codes(blowup)


def _verify_hits(blowup: BlowupGraph, arcs: frozenset[ArcId]):
    left = count_copies(blowup.without(arcs))
    if left:
        raise ContractViolation(f"arc set misses {left} copies")


def greedy_arc_hitting_set(blowup: BlowupGraph, max_copies: int = MAX_COPIES) -> frozenset[ArcId]:
    """Arcs whose removal leaves no copy of the base graph.

    Repeatedly takes the arc on the most surviving copies; ties go to the
    smallest (color, label, tail).
    """
    codes = _copy_matrix(blowup, max_copies)
    if len(codes) == 0:
        return frozenset()
    uniq, inv = np.unique(codes, return_inverse=True)
    inv = inv.reshape(codes.shape)
    counts = np.bincount(inv.ravel(), minlength=len(uniq))
    flat_order = np.argsort(inv.ravel(), kind="stable")
    copies_of = np.split(flat_order // codes.shape[1], np.cumsum(counts)[:-1])
    alive = np.ones(len(codes), dtype=bool)
    chosen = []
    while True:
        # uniq is sorted, so argmax's first hit is the lexicographically smallest arc
        j = int(np.argmax(counts))
        if counts[j] == 0:
            break
        chosen.append(int(uniq[j]))
        hit = copies_of[j][alive[copies_of[j]]]
        alive[hit] = False
        np.subtract.at(counts, inv[hit].ravel(), 1)
    result = frozenset(blowup.decode_arc(c) for c in chosen)
    _verify_hits(blowup, result)
    return result


def random_arc_hitting_set(blowup: BlowupGraph, seed: int, extra: int = 0, max_copies: int = MAX_COPIES) -> frozenset[ArcId]:
    """A random arc set hitting every copy, plus ``extra`` random arcs.

    Copies are visited in random order and any copy not yet hit contributes
    one of its arcs at random.  Serves as an adversarial input to
    :func:`pigeonhole_reduce`.
    """
    rng = SplitMix64(seed)
    codes = _copy_matrix(blowup, max_copies)
    order = list(range(len(codes)))
    rng.shuffle(order)
    chosen: set[int] = set()
    for i in order:
        row = codes[i].tolist()
        if not chosen.intersection(row):
            chosen.add(row[rng.randbelow(len(row))])
    all_arcs = [arc for arc, _, _ in blowup.arcs()]
    for _ in range(min(extra, len(all_arcs))):
        chosen.add(blowup.arc_code(all_arcs[rng.randbelow(len(all_arcs))]))
    result = frozenset(blowup.decode_arc(c) for c in chosen)
    _verify_hits(blowup, result)
    return result


@dataclass
class RemovalReport:
    e_size: int
    original: tuple[ElementSet, ...]
    removed: tuple[ElementSet, ...]
    reduced: tuple[ElementSet, ...]
    residual: int
    threshold: str
    method: str = METHOD_LABEL
    seconds: float = field(default=0.0, compare=False)

    @property
    def total_removed(self) -> int:
        return sum(len(b) for b in self.removed)

    def to_json(self) -> dict:
        """Report as plain data; timing is left out so output is reproducible."""
        return {
            "method": self.method,
            "E_size": self.e_size,
            "threshold": self.threshold,
            "removed": [list(b.members) for b in self.removed],
            "reduced": [list(a.members) for a in self.reduced],
            "removed_total": self.total_removed,
            "residual": self.residual,
        }


def pigeonhole_reduce(e: frozenset[ArcId], blowup: BlowupGraph, m: int | None = None, strict: bool = True) -> RemovalReport:
    """Drop every label carried by at least N/m arcs of ``e`` and recount.

    ``e`` must hit every copy.  With ``strict`` the per-set bound
    ``|B_i| <= m |E| / N`` and a zero residual count are enforced; the
    residual is always recounted from the reduced sets, never inferred.
    """
    start = time.perf_counter()
    m = blowup.m if m is None else m
    n = blowup.N
    e = frozenset(ArcId(*a) for a in e)
    for arc in e:
        if not (0 <= arc.color < blowup.m and 0 <= arc.tail < n) or arc.label not in blowup.sets[arc.color]:
            raise ContractViolation(f"{arc} is not an arc of the blow-up")
    _verify_hits(blowup, e)
    per_label = [dict() for _ in range(blowup.m)]
    for arc in e:
        per_label[arc.color][arc.label] = per_label[arc.color].get(arc.label, 0) + 1
    removed, reduced = [], []
    for c, a_set in enumerate(blowup.sets):
        # exact form of count >= N/m
        b = ElementSet(tuple(a for a in a_set.members if per_label[c].get(a, 0) * m >= n), n)
        if len(b) * n > m * len(e):
            raise ContractViolation(f"|B_{c + 1}| = {len(b)} exceeds m|E|/N = {m * len(e) / n}")
        removed.append(b)
        reduced.append(a_set.difference(b.members))
    residual = count_solutions(blowup.group, reduced, blowup.system)
    if strict and residual:
        raise ContractViolation(f"{residual} solutions survive the reduction")
    return RemovalReport(
        e_size=len(e),
        original=tuple(blowup.sets),
        removed=tuple(removed),
        reduced=tuple(reduced),
        residual=residual,
        threshold=f"count * {m} >= {n}",
        seconds=time.perf_counter() - start,
    )


def run_pipeline(blowup: BlowupGraph, max_copies: int = MAX_COPIES) -> RemovalReport:
    start = time.perf_counter()
    e = greedy_arc_hitting_set(blowup, max_copies)
    report = pigeonhole_reduce(e, blowup)
    report.seconds = time.perf_counter() - start
    return report


@dataclass
class MinRemoval:
    removed: tuple[ElementSet, ...]
    total: int
    optimal: bool
    lower_bound: int

    def to_json(self) -> dict:
        return {
            "removed": [list(b.members) for b in self.removed],
            "total": self.total,
            "optimal": self.optimal,
            "lower_bound": self.lower_bound,
        }


def _packing_bound(edges: list[frozenset]) -> int:
    """Size of a greedy family of pairwise disjoint edges; each needs its own cover vertex."""
    used: set = set()
    size = 0
    for e in sorted(edges, key=len):
        if used.isdisjoint(e):
            used |= e
            size += 1
    return size


def _greedy_cover(edges: list[frozenset]) -> list:
    remaining = list(edges)
    cover = []
    while remaining:
        deg: dict = {}
        for e in remaining:
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        v = min(deg, key=lambda x: (-deg[x], x))
        cover.append(v)
        remaining = [e for e in remaining if v not in e]
    return cover


def exact_min_removal(
    group: GroupTable,
    sets: Sequence[ElementSet],
    sys: System,
    max_elements: int = EXACT_MAX_ELEMENTS,
    node_budget: int = EXACT_NODE_BUDGET,
) -> MinRemoval:
    """Fewest elements (summed over all sets) whose removal kills every solution.

    Minimum vertex cover of the solution hypergraph, whose vertices are the
    pairs (set index, element) and whose edges are the solutions.  Branch
    and bound with a greedy upper bound and a disjoint-edge packing lower
    bound.  If the node budget runs out the best cover found is returned
    with ``optimal=False``.
    """
    total_size = sum(len(s) for s in sets)
    if total_size > max_elements:
        raise SizeLimitError(f"exact removal capped at {max_elements} elements, instance has {total_size}")
    edges = sorted({frozenset(enumerate(sol)) for sol in enumerate_solutions(group, sets, sys)}, key=sorted)
    root_lb = _packing_bound(edges)
    best = _greedy_cover(edges)
    nodes = 0
    exhausted = False

    def solve(live: list[frozenset], chosen: list):
        nonlocal best, nodes, exhausted
        nodes += 1
        if nodes > node_budget:
            exhausted = True
            return
        if not live:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + _packing_bound(live) >= len(best):
            return
        pivot = min(live, key=len)
        deg: dict = {}
        for e in live:
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        banned: set = set()
        for v in sorted(pivot, key=lambda x: (-deg[x], x)):
            # earlier siblings already covered the case "v_j in the cover"
            nxt = [e - banned for e in live if v not in e]
            if all(nxt_e for nxt_e in nxt):
                solve(nxt, chosen + [v])
            banned.add(v)
            if exhausted:
                return

    solve(edges, [])
    n = group.order
    removed = tuple(ElementSet.of((a for i, a in best if i == c), n) for c in range(len(sets)))
    reduced = [s.difference(b.members) for s, b in zip(sets, removed)]
    if count_solutions(group, reduced, sys):
        raise ContractViolation("exact removal left a solution behind")
    total = len(best)
    return MinRemoval(removed, total, not exhausted, total if not exhausted else root_lb)


# -- experiment sweeps ---------------------------------------------------------

CSV_COLUMNS = [
    "group", "N", "m", "k", "density", "delta",
    "pipeline_removed_fraction", "oracle_removed_fraction",
    "residual", "E_size", "seed", "trial",
]


@dataclass
class ExperimentConfig:
    family: str
    sizes: list[int]
    densities: list[float]
    system: object
    trials: int = 1
    seed: int = 0
    graph: dict | None = None
    oracle_cap: int = EXACT_MAX_ELEMENTS
    max_copies: int = MAX_COPIES

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        try:
            densities = obj.get("densities", [obj["density"]] if "density" in obj else None)
            if densities is None:
                raise ConfigError("config needs 'density' or 'densities'")
            cfg = cls(
                family=obj["family"],
                sizes=[int(x) for x in obj["sizes"]],
                densities=[float(d) for d in densities],
                system=obj["system"],
                trials=int(obj.get("trials", 1)),
                seed=int(obj.get("seed", 0)),
                graph=obj.get("graph"),
                oracle_cap=int(obj.get("oracle_cap", EXACT_MAX_ELEMENTS)),
                max_copies=int(obj.get("max_copies", MAX_COPIES)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad experiment config: {exc!r}") from exc
        if cfg.family not in ("cyclic", "dihedral", "symmetric"):
            raise ConfigError(f"unknown family {cfg.family!r}")
        if cfg.trials < 1 or not cfg.sizes:
            raise ConfigError("need at least one size and one trial")
        if any(not 0.0 <= d <= 1.0 for d in cfg.densities):
            raise ConfigError("densities must lie in [0, 1]")
        try:
            parse_system_json(cfg.system)
        except GroupRemError as exc:
            raise ConfigError(f"bad system in config: {exc}") from exc
        return cfg


def _trial(args) -> dict:
    cfg, n, di, density, trial = args
    group = group_from_descriptor({"type": cfg.family, "n": n})
    sys = parse_system_json(cfg.system)
    graph = ColoredDigraph.from_json(cfg.graph) if cfg.graph else None
    seed = derive_seed(cfg.seed, n, di, trial)
    rng = SplitMix64(seed)
    N = group.order
    sets = [ElementSet.of(rng.subset(N, density), N) for _ in range(sys.m)]
    solutions = count_solutions(group, sets, sys)
    blowup = blowup_for_system(group, sets, sys, graph)
    report = run_pipeline(blowup, cfg.max_copies)
    denom = sys.m * N
    oracle = None
    if sum(len(s) for s in sets) <= cfg.oracle_cap:
        oracle = exact_min_removal(group, sets, sys, max_elements=cfg.oracle_cap).total / denom
    return {
        "group": group.name,
        "N": N,
        "m": sys.m,
        "k": sys.k,
        "density": density,
        "delta": solutions / N ** (sys.m - sys.k),
        "pipeline_removed_fraction": report.total_removed / denom,
        "oracle_removed_fraction": oracle,
        "residual": report.residual,
        "E_size": report.e_size,
        "seed": cfg.seed,
        "trial": trial,
    }


def removal_experiment(config: ExperimentConfig | dict, jobs: int = 1) -> list[dict]:
    """One record per (size, density, trial); identical for any ``jobs``.

    Removal fractions are total removed elements over ``m * N``; the oracle
    column is None when the instance exceeds the exact-search cap.
    """
    cfg = config if isinstance(config, ExperimentConfig) else ExperimentConfig.from_json(config)
    tasks = [
        (cfg, n, di, d, t)
        for n in cfg.sizes
        for di, d in enumerate(cfg.densities)
        for t in range(cfg.trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_trial, tasks))
    return [_trial(t) for t in tasks]


def records_to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: ("" if r[k] is None else r[k]) for k in CSV_COLUMNS})
    return buf.getvalue()
