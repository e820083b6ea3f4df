"""Exact solution counts for equations and systems over finite groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidParameter
from .groups import ElementSet, GroupTable
from .systems import AbelianSystem, SingleEquation, System


def _check_sets(group: GroupTable, sets: Sequence[ElementSet], m: int):
    if len(sets) != m:
        raise InvalidParameter(f"expected {m} sets, got {len(sets)}")
    for s in sets:
        if s.group_order != group.order:
            raise InvalidParameter("set and group orders differ")


def _check_group(group: GroupTable, sys: System):
    if isinstance(sys, AbelianSystem) and not group.is_abelian:
        raise InvalidParameter(f"abelian system over non-abelian group {group.name}")
    if isinstance(sys, SingleEquation) and not 0 <= sys.rhs < group.order:
        raise InvalidParameter(f"right-hand side g{sys.rhs} is not an element of {group.name}")


def eval_word(group: GroupTable, word, xs: Sequence[int]) -> int:
    acc = group.identity
    for v, e in word:
        x = xs[v] if e == 1 else int(group.inverse[xs[v]])
        acc = int(group.table[acc, x])
    return acc


def is_solution(group: GroupTable, sys: System, xs: Sequence[int]) -> bool:
    _check_group(group, sys)
    if len(xs) != sys.m:
        return False
    return all(eval_word(group, w, xs) == rhs for w, rhs in sys.equations(group))


def count_solutions_single(group: GroupTable, sets: Sequence[ElementSet], g: int, method: str = "convolution") -> int:
    """Number of tuples with ``x_1 x_2 ... x_m = g`` and ``x_i`` in ``sets[i]``.

    ``method="naive"`` enumerates every tuple and is kept as the oracle.
    """
    m = len(sets)
    if m < 2:
        raise InvalidParameter("a single equation needs at least 2 sets")
    _check_sets(group, sets, m)
    if method == "naive":
        t = group.table
        count = 0
        for xs in itertools.product(*(s.members for s in sets)):
            acc = group.identity
            for x in xs:
                acc = t[acc, x]
            count += acc == g
        return int(count)
    if method != "convolution":
        raise InvalidParameter(f"unknown method {method!r}")
    t = group.int_table()
    # f[y] = number of prefixes multiplying to y
    f = sets[0].mask().astype(np.int64)
    for s in sets[1:]:
        nxt = np.zeros_like(f)
        for a in s.members:
            nxt[t[:, a]] += f
        f = nxt
    return int(f[g])


def _plan(sys: System, group: GroupTable):
    """Static evaluation order: branch on a variable, force, or check an equation."""
    eqs = sys.equations(group)
    assigned: set[int] = set()
    done: set[int] = set()
    plan = []
    while True:
        progress = True
        while progress:
            progress = False
            for i, (w, _) in enumerate(eqs):
                if i in done:
                    continue
                free = [v for v, _ in w if v not in assigned]
                if len(free) == 0:
                    plan.append(("check", i))
                    done.add(i)
                    progress = True
                elif len(free) == 1:
                    plan.append(("force", free[0], i))
                    assigned.add(free[0])
                    done.add(i)
                    progress = True
        if len(assigned) == sys.m:
            break
        v = min(set(range(sys.m)) - assigned)
        plan.append(("branch", v))
        assigned.add(v)
    return eqs, plan


def enumerate_solutions(group: GroupTable, sets: Sequence[ElementSet], sys: System) -> Iterator[tuple[int, ...]]:
    """All solutions with ``x_i`` in ``sets[i]``, by backtracking with forcing.

    An equation with one unassigned variable determines it, so only the
    branch variables are enumerated.  Words are evaluated left to right.
    """
    _check_group(group, sys)
    _check_sets(group, sets, sys.m)
    eqs, plan = _plan(sys, group)
    t, inv = group.table, group.inverse
    masks = [s.mask() for s in sets]
    xs = [0] * sys.m

    def rec(step):
        if step == len(plan):
            yield tuple(xs)
            return
        op = plan[step]
        if op[0] == "branch":
            v = op[1]
            for a in sets[v].members:
                xs[v] = a
                yield from rec(step + 1)
        elif op[0] == "force":
            _, v, i = op
            word, rhs = eqs[i]
            pos = next(j for j, (u, _) in enumerate(word) if u == v)
            prefix = eval_word(group, word[:pos], xs)
            suffix = eval_word(group, word[pos + 1 :], xs)
            # prefix * x^e * suffix = rhs
            xe = int(t[t[inv[prefix], rhs], inv[suffix]])
            x = xe if word[pos][1] == 1 else int(inv[xe])
            if masks[v][x]:
                xs[v] = x
                yield from rec(step + 1)
        else:
            word, rhs = eqs[op[1]]
            if eval_word(group, word, xs) == rhs:
                yield from rec(step + 1)

    yield from rec(0)


def count_solutions_system(group: GroupTable, sets: Sequence[ElementSet], sys: System, method: str = "backtrack") -> int:
    """Exact solution count; ``method="naive"`` checks all ``prod |A_i|`` tuples."""
    _check_group(group, sys)
    _check_sets(group, sets, sys.m)
    if method == "naive":
        return sum(1 for xs in itertools.product(*(s.members for s in sets)) if is_solution(group, sys, xs))
    if method != "backtrack":
        raise InvalidParameter(f"unknown method {method!r}")
    return sum(1 for _ in enumerate_solutions(group, sets, sys))


def count_solutions(group: GroupTable, sets: Sequence[ElementSet], sys: System) -> int:
    """Dispatch to the fastest exact counter for ``sys``."""
    if isinstance(sys, SingleEquation):
        _check_group(group, sys)
        _check_sets(group, sets, sys.m)
        return count_solutions_single(group, sets, sys.rhs)
    return count_solutions_system(group, sets, sys)


@dataclass(frozen=True, eq=False)
class RepresentationFunction:
    values: np.ndarray
    provenance: str = ""

    def __getitem__(self, g):
        return int(self.values[g])

    def total(self) -> int:
        return int(self.values.sum())


def representation_function(group: GroupTable, a: ElementSet, b: ElementSet, provenance: str = "r_{A,B}") -> RepresentationFunction:
    """``r(g) = #{(x, y) in A x B : x y = g}``."""
    _check_sets(group, [a, b], 2)
    vals = np.zeros(group.order, dtype=np.int64)
    if len(a) and len(b):
        prods = group.int_table()[np.ix_(a.array(), b.array())]
        vals = np.bincount(prods.ravel(), minlength=group.order).astype(np.int64)
    vals.flags.writeable = False
    return RepresentationFunction(vals, provenance)


def corollary_statistic(group: GroupTable, a: ElementSet, b: ElementSet, c: ElementSet, d: ElementSet, e: ElementSet) -> int:
    """Unnormalised ``sum over g in E of r_{A,B}(g) r_{C,D}(g)``.

    Equals the number of solutions of ``x1 x2 = x3 x4 = x5`` with the five
    variables drawn from A, B, C, D, E.
    """
    rab = representation_function(group, a, b).values
    rcd = representation_function(group, c, d).values
    idx = e.array()
    return int((rab[idx] * rcd[idx]).sum())
