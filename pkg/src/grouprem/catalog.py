"""Named small graphs and systems used throughout the tests and applications."""

from __future__ import annotations

from .cycles import ColoredDigraph, SpanningTree
from .systems import OrderedSystem, parse_system

# vertices of the theta graph
LEFT, TOP, BOTTOM, RIGHT = 0, 1, 2, 3


def theta_graph() -> ColoredDigraph:
    """Three internally disjoint paths LEFT -> RIGHT: x1 x2 via TOP, x3 x4 via BOTTOM, x5 direct."""
    return ColoredDigraph(
        4,
        (
            (LEFT, TOP),  # x1
            (TOP, RIGHT),  # x2
            (LEFT, BOTTOM),  # x3
            (BOTTOM, RIGHT),  # x4
            (LEFT, RIGHT),  # x5
        ),
    )


def theta_tree() -> SpanningTree:
    """Tree {x1, x2, x3}; its fundamental cycles are the two words of :func:`product_pair_system`."""
    return SpanningTree.of(theta_graph(), (0, 1, 2), root=LEFT)


def product_pair_system() -> OrderedSystem:
    """``x1 x2 = x3 x4 = x5`` written as two words equal to 1."""
    return parse_system("x1 x2 x4^-1 x3^-1 = 1; x1 x2 x5^-1 = 1")


def bowtie_graph() -> ColoredDigraph:
    """Two directed triangles sharing vertex 0: e0 e1 e2 and e3 e4 e5."""
    return ColoredDigraph(5, ((0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)))


def bowtie_vectors() -> list[tuple[int, ...]]:
    """The figure-eight cycles e0..e5 and e0 e1 e2 e5^-1 e4^-1 e3^-1.

    They span the cycle space of :func:`bowtie_graph` over the rationals
    but not over the integers: each triangle is half their sum/difference.
    """
    return [(1, 1, 1, 1, 1, 1), (1, 1, 1, -1, -1, -1)]
