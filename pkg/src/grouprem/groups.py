"""Finite groups stored as dense multiplication tables.

Elements are the integers ``0..N-1``; ``table[i, j]`` is the index of the
product ``g_i * g_j``.  Every other module in the package talks about group
elements through these indices only.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameter, SizeLimitError

log = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 4096


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group given by its Cayley table.

    Construct through :meth:`from_table` or one of the ``make_*`` helpers;
    identity, inverses and the abelian flag are derived from the table.
    """

    table: np.ndarray
    name: str = "G"
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False, repr=False)
    is_abelian: bool = field(init=False)

    def __post_init__(self):
        t = np.asarray(self.table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidParameter(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise InvalidParameter("table entries must lie in [0, N)")
        t = _freeze(t.astype(np.min_scalar_type(n - 1), copy=True))
        ident = _find_identity(t)
        if ident is None:
            raise InvalidParameter("table has no two-sided identity")
        inv = np.empty(n, dtype=np.int64)
        for i in range(n):
            hits = np.flatnonzero(t[i] == ident)
            if len(hits) != 1 or t[hits[0], i] != ident:
                raise InvalidParameter(f"element {i} has no two-sided inverse")
            inv[i] = hits[0]
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "identity", int(ident))
        object.__setattr__(self, "inverse", _freeze(inv))
        object.__setattr__(self, "is_abelian", bool(np.array_equal(t, t.T)))
        object.__setattr__(self, "_wide", _freeze(t.astype(np.int64)))

    @classmethod
    def from_table(cls, rows, name="G") -> "GroupTable":
        return cls(np.asarray(rows, dtype=np.int64), name=name)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, elements: Iterable[int]) -> int:
        acc = self.identity
        for e in elements:
            acc = int(self.table[acc, e])
        return acc

    def power(self, a: int, e: int) -> int:
        """``a**e`` for small integer exponents (negative allowed)."""
        if e < 0:
            a, e = self.inv(a), -e
        acc = self.identity
        for _ in range(e):
            acc = int(self.table[acc, a])
        return acc

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def int_table(self) -> np.ndarray:
        """Table widened to int64, safe for index arithmetic (read-only, cached)."""
        return self._wide

    def __repr__(self):
        return f"GroupTable({self.name}, order={self.order}, abelian={self.is_abelian})"


def _find_identity(t: np.ndarray):
    n = t.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
            return e
    return None


@dataclass(frozen=True)
class ElementSet:
    """A subset of a group of order ``group_order``, as sorted indices."""

    members: tuple[int, ...]
    group_order: int

    def __post_init__(self):
        ms = tuple(int(x) for x in self.members)
        if any(b <= a for a, b in zip(ms, ms[1:])):
            raise InvalidParameter("ElementSet members must be strictly ascending")
        if ms and (ms[0] < 0 or ms[-1] >= self.group_order):
            raise InvalidParameter(f"ElementSet members must lie in [0, {self.group_order})")
        object.__setattr__(self, "members", ms)

    @classmethod
    def of(cls, members: Iterable[int], group_order: int) -> "ElementSet":
        return cls(tuple(sorted(set(int(x) for x in members))), group_order)

    @classmethod
    def full(cls, group_order: int) -> "ElementSet":
        return cls(tuple(range(group_order)), group_order)

    @classmethod
    def empty(cls, group_order: int) -> "ElementSet":
        return cls((), group_order)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        return x in self.members

    def mask(self) -> np.ndarray:
        m = np.zeros(self.group_order, dtype=bool)
        m[list(self.members)] = True
        return m

    def array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def difference(self, other: Iterable[int]) -> "ElementSet":
        drop = set(other)
        return ElementSet(tuple(x for x in self.members if x not in drop), self.group_order)

    def intersection(self, other: Iterable[int]) -> "ElementSet":
        keep = set(other)
        return ElementSet(tuple(x for x in self.members if x in keep), self.group_order)

    def complement(self) -> "ElementSet":
        s = set(self.members)
        return ElementSet(tuple(x for x in range(self.group_order) if x not in s), self.group_order)


def make_cyclic(n: int) -> GroupTable:
    if n < 1:
        raise InvalidParameter(f"cyclic group order must be >= 1, got {n}")
    ar = np.arange(n)
    return GroupTable((ar[:, None] + ar[None, :]) % n, name=f"Z_{n}")


def make_direct_product(g1: GroupTable, g2: GroupTable, max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Direct product; the pair ``(a, b)`` is encoded as ``a * N2 + b``."""
    n1, n2 = g1.order, g2.order
    if n1 * n2 > max_order:
        raise SizeLimitError(f"product order {n1 * n2} exceeds cap {max_order}")
    t1, t2 = g1.int_table(), g2.int_table()
    a = np.arange(n1 * n2)
    hi, lo = a // n2, a % n2
    table = t1[hi[:, None], hi[None, :]] * n2 + t2[lo[:, None], lo[None, :]]
    return GroupTable(table, name=f"{g1.name}x{g2.name}")


def make_dihedral(n: int) -> GroupTable:
    """Dihedral group of order 2n.

    Index ``k + n*e`` stands for ``r**k s**e``; ``s r s = r**-1``.
    """
    if n < 3:
        raise InvalidParameter(f"dihedral parameter must be >= 3, got {n}")
    idx = np.arange(2 * n)
    k, e = idx % n, idx // n
    sign = np.where(e == 1, -1, 1)
    rot = (k[:, None] + sign[:, None] * k[None, :]) % n
    ref = (e[:, None] + e[None, :]) % 2
    return GroupTable(rot + n * ref, name=f"D_{n}")


def make_symmetric(n: int) -> GroupTable:
    """Symmetric group on n points.

    Elements are permutations of ``range(n)`` indexed by lexicographic rank
    (rank 0 is the identity).  The product composes right to left:
    ``(p*q)[x] = p[q[x]]``.
    """
    if not 1 <= n <= 6:
        raise InvalidParameter(f"symmetric group degree must be in [1, 6], got {n}")
    perms = list(itertools.permutations(range(n)))
    rank = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    table = np.empty((size, size), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = rank[tuple(p[x] for x in q)]
    return GroupTable(table, name=f"S_{n}")


def symmetric_permutation(n: int, index: int) -> tuple[int, ...]:
    """The permutation carrying lexicographic rank ``index`` in S_n."""
    return list(itertools.permutations(range(n)))[index]


def symmetric_index(perm: Sequence[int]) -> int:
    return list(itertools.permutations(range(len(perm)))).index(tuple(perm))


def find_axiom_violation(table) -> str | None:
    """Describe the first group-axiom violation in ``table``, or None."""
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        return f"closure: table is not a non-empty square array (shape {t.shape})"
    n = t.shape[0]
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        i, j = bad[0]
        return f"closure: table[{i}][{j}] = {t[i, j]} outside [0, {n})"
    # (ab)c == a(bc) for all triples, one slab of a at a time
    for a in range(n):
        lhs = t[t[a][:, None], np.arange(n)[None, :]]
        rhs = t[a][t]
        diff = np.argwhere(lhs != rhs)
        if len(diff):
            b, c = diff[0]
            return f"associativity: ({a}*{b})*{c} != {a}*({b}*{c})"
    e = _find_identity(t)
    if e is None:
        return "identity: no two-sided identity element"
    for i in range(n):
        hits = np.flatnonzero(t[i] == e)
        if not any(t[j, i] == e for j in hits):
            return f"inverse: element {i} has no two-sided inverse"
    return None


def verify_group_axioms(t) -> bool:
    """Full check of closure, associativity, identity and inverses.

    Accepts a GroupTable or any square array-like.  The first violation
    found is logged at WARNING level.
    """
    raw = t.table if isinstance(t, GroupTable) else t
    problem = find_axiom_violation(raw)
    if problem is not None:
        log.warning("group axioms violated: %s", problem)
        return False
    return True


def group_from_descriptor(desc, max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Build a group from its JSON descriptor, e.g. ``{"type": "cyclic", "n": 12}``."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise InvalidParameter(f"group descriptor must be an object with a 'type', got {desc!r}")
    kind = desc["type"]
    if kind == "cyclic":
        grp = make_cyclic(int(desc["n"]))
    elif kind == "dihedral":
        grp = make_dihedral(int(desc["n"]))
    elif kind == "symmetric":
        grp = make_symmetric(int(desc["n"]))
    elif kind == "product":
        factors = desc.get("factors") or []
        if not factors:
            raise InvalidParameter("product descriptor needs a non-empty 'factors' list")
        grp = group_from_descriptor(factors[0], max_order)
        for f in factors[1:]:
            grp = make_direct_product(grp, group_from_descriptor(f, max_order), max_order)
    elif kind == "table":
        rows = desc.get("table")
        problem = find_axiom_violation(rows)
        if problem is not None:
            raise InvalidParameter(f"table descriptor is not a group: {problem}")
        grp = GroupTable.from_table(rows, name=desc.get("name", "G"))
    else:
        raise InvalidParameter(f"unknown group type {kind!r}")
    if grp.order > max_order:
        raise SizeLimitError(f"group order {grp.order} exceeds cap {max_order}")
    return grp
