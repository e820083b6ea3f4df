"""Product-free sets, small doubling and commuting pairs via ``x1 x2 = x3 x4 = x5``.

Each application feeds five sets into the removal pipeline over the theta
graph, then certifies the resulting property by direct enumeration on
the reduced sets.  When several variables share one input set, the reduced
set is the intersection of their reductions, so it loses at most the
union of the removed elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .blowup import build_system_blowup
from .catalog import product_pair_system, theta_graph, theta_tree
from .counting import corollary_statistic
from .cycles import is_strong_representation
from .groups import ElementSet, GroupTable
from .removal import RemovalReport, run_pipeline


@lru_cache(maxsize=None)
def _validated_base():
    graph, tree, sys = theta_graph(), theta_tree(), product_pair_system()
    verdict = is_strong_representation(graph, tree, sys)
    if not verdict:
        raise RuntimeError(f"theta graph failed its strong-representation self-check: {verdict.reason}")
    return graph, sys


@dataclass
class ApplicationResult:
    statistic: int
    removed: dict[str, ElementSet]
    certificate: dict
    report: RemovalReport | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "statistic": self.statistic,
            "removed": {k: list(v.members) for k, v in self.removed.items()},
            "certificate": self.certificate,
            "E_size": self.report.e_size if self.report else 0,
        }


def _pipeline(group: GroupTable, five: list[ElementSet]) -> tuple[int, list[ElementSet], RemovalReport | None]:
    graph, sys = _validated_base()
    stat = corollary_statistic(group, *five)
    if stat == 0:
        return 0, list(five), None
    report = run_pipeline(build_system_blowup(group, five, graph, sys))
    return stat, list(report.reduced), report


def _product_set(group: GroupTable, a: ElementSet, b: ElementSet) -> set[int]:
    t = group.table
    return {int(t[x, y]) for x in a for y in b}


def product_free_removal(group: GroupTable, a: ElementSet, e: ElementSet) -> ApplicationResult:
    """Shrink A and E until no product of two elements of A lands in E."""
    stat, red, report = _pipeline(group, [a, a, a, a, e])
    a_red = red[0].intersection(red[1]).intersection(red[2]).intersection(red[3])
    e_red = red[4]
    hits = sorted(_product_set(group, a_red, a_red) & set(e_red.members))
    return ApplicationResult(
        statistic=stat,
        removed={"A": a.difference(a_red.members), "E": e.difference(e_red.members)},
        certificate={
            "property": "product-free",
            "holds": not hits,
            "A_reduced": list(a_red.members),
            "E_reduced": list(e_red.members),
            "products_in_E": hits,
        },
        report=report,
    )


def small_doubling_removal(group: GroupTable, a: ElementSet) -> ApplicationResult:
    """Run with E = G minus A and report |A'A'| against |A'|."""
    e = a.complement()
    stat, red, report = _pipeline(group, [a, a, a, a, e])
    a_red = red[0].intersection(red[1]).intersection(red[2]).intersection(red[3])
    e_red = red[4]
    square = _product_set(group, a_red, a_red)
    allowed = set(a.members) | (set(e.members) - set(e_red.members))
    return ApplicationResult(
        statistic=stat,
        removed={"A": a.difference(a_red.members), "E": e.difference(e_red.members)},
        certificate={
            "property": "small-doubling",
            "A_reduced_size": len(a_red),
            "square_size": len(square),
            "excess": len(square) - len(a_red),
            "square_within_A_and_removed_E": square <= allowed,
        },
        report=report,
    )


def commuting_pairs_removal(group: GroupTable, a: ElementSet, b: ElementSet) -> ApplicationResult:
    """Run with (A, B, B, A, G) and report |A'B' & B'A'|."""
    full = ElementSet.full(group.order)
    stat, red, report = _pipeline(group, [a, b, b, a, full])
    a_red = red[0].intersection(red[3])
    b_red = red[1].intersection(red[2])
    common = _product_set(group, a_red, b_red) & _product_set(group, b_red, a_red)
    e_removed = full.difference(red[4].members)
    return ApplicationResult(
        statistic=stat,
        removed={"A": a.difference(a_red.members), "B": b.difference(b_red.members), "E": e_removed},
        certificate={
            "property": "commuting-pairs",
            "AB_cap_BA_size": len(common),
            "E_removed_size": len(e_removed),
            "bounded_by_removed_E": len(common) <= len(e_removed),
        },
        report=report,
    )
