"""Equation systems over groups and their text syntax.

Three shapes are supported:

* ``AbelianSystem``  -- rows of coefficients in {-1, 0, 1}, right-hand side 0
  (``x1 + x2 - x3 = 0``);
* ``OrderedSystem``  -- words in the variables with exponents +-1, right-hand
  side 1, evaluated left to right (``x1 x2 x4^-1 x3^-1 = 1``);
* ``SingleEquation`` -- ``x1 x2 ... xm = g`` for a fixed group element g
  (``x1 x2 x3 = g4``).

Variables are written 1-based and stored 0-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import IndependenceError, InvalidParameter, SystemSyntaxError
from .linalg import first_dependent_row, rank

Word = tuple[tuple[int, int], ...]


def _check_rows(rows, m):
    if m < 2:
        raise InvalidParameter(f"a system needs at least 2 variables, got {m}")
    if not rows:
        raise InvalidParameter("a system needs at least one equation")
    for i, r in enumerate(rows):
        if len(r) != m:
            raise InvalidParameter(f"row {i + 1} has length {len(r)}, expected {m}")
        if any(x not in (-1, 0, 1) for x in r):
            raise InvalidParameter(f"row {i + 1} has a coefficient outside {{-1, 0, 1}}")
    unused = [j for j in range(m) if all(r[j] == 0 for r in rows)]
    if unused:
        raise InvalidParameter(f"variable x{unused[0] + 1} appears in no equation")
    dep = first_dependent_row(rows)
    if dep is not None:
        raise IndependenceError(
            f"equation {dep + 1} is a rational combination of the earlier equations", dep
        )


@dataclass(frozen=True)
class AbelianSystem:
    epsilon: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.epsilon)
        object.__setattr__(self, "epsilon", rows)
        _check_rows(rows, len(rows[0]) if rows else 0)

    @property
    def k(self) -> int:
        return len(self.epsilon)

    @property
    def m(self) -> int:
        return len(self.epsilon[0])

    def equations(self, group=None):
        """(word, rhs) pairs; for abelian groups word order is immaterial."""
        ident = 0 if group is None else group.identity
        return [
            (tuple((j, e) for j, e in enumerate(row) if e != 0), ident)
            for row in self.epsilon
        ]


@dataclass(frozen=True)
class OrderedSystem:
    words: tuple[Word, ...]
    m: int

    def __post_init__(self):
        words = tuple(tuple((int(v), int(e)) for v, e in w) for w in self.words)
        object.__setattr__(self, "words", words)
        for i, w in enumerate(words):
            if not w:
                raise InvalidParameter(f"equation {i + 1} is empty")
            seen = set()
            for v, e in w:
                if e not in (-1, 1):
                    raise InvalidParameter(f"equation {i + 1}: exponent {e} not in {{-1, 1}}")
                if not 0 <= v < self.m:
                    raise InvalidParameter(f"equation {i + 1}: variable index {v} out of range")
                if v in seen:
                    raise InvalidParameter(f"equation {i + 1}: variable x{v + 1} repeated")
                seen.add(v)
        _check_rows(self._vectors(), self.m)

    def _vectors(self):
        rows = []
        for w in self.words:
            row = [0] * self.m
            for v, e in w:
                row[v] = e
            rows.append(row)
        return rows

    @property
    def k(self) -> int:
        return len(self.words)

    def equations(self, group=None):
        ident = 0 if group is None else group.identity
        return [(w, ident) for w in self.words]


@dataclass(frozen=True)
class SingleEquation:
    """``x_1 x_2 ... x_m = rhs``."""

    m: int
    rhs: int

    def __post_init__(self):
        if self.m < 2:
            raise InvalidParameter(f"single equation needs m >= 2, got {self.m}")
        if self.rhs < 0:
            raise InvalidParameter("rhs must be an element index")

    @property
    def k(self) -> int:
        return 1

    def equations(self, group=None):
        return [(tuple((j, 1) for j in range(self.m)), self.rhs)]


System = Union[AbelianSystem, OrderedSystem, SingleEquation]


def characteristic_vectors(sys: System) -> list[list[int]]:
    """Row i holds the exponent of each variable in equation i."""
    if isinstance(sys, AbelianSystem):
        return [list(r) for r in sys.epsilon]
    if isinstance(sys, OrderedSystem):
        return sys._vectors()
    return [[1] * sys.m]


def as_abelian(sys: System) -> AbelianSystem:
    """The system with word order forgotten."""
    return AbelianSystem(tuple(tuple(r) for r in characteristic_vectors(sys)))


# -- text syntax --------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<sep>[;\n])"
    r"|x(?P<var>\d+)(?:\^(?P<exp>[+-]?\d+))?"
    r"|(?P<plus>\+)|(?P<minus>-)|(?P<eq>=)"
    r"|g(?P<g>\d+)"
    r"|(?P<num>\d+)"
)


@dataclass
class _Tok:
    kind: str
    value: int | None
    exp: int | None
    line: int
    col: int


def _tokenize(text: str) -> list[list[_Tok]]:
    equations: list[list[_Tok]] = [[]]
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if mt is None:
            raise SystemSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = mt.lastgroup
        if kind == "exp":
            kind = "var"
        if kind == "sep":
            equations.append([])
            if mt.group() == "\n":
                line += 1
                line_start = mt.end()
        elif kind != "ws":
            if kind == "var":
                exp = mt.group("exp")
                equations[-1].append(_Tok("var", int(mt.group("var")), None if exp is None else int(exp), line, col))
            elif kind == "g":
                equations[-1].append(_Tok("g", int(mt.group("g")), None, line, col))
            elif kind == "num":
                equations[-1].append(_Tok("num", int(mt.group("num")), None, line, col))
            else:
                equations[-1].append(_Tok(kind, None, None, line, col))
        pos = mt.end()
    return [eq for eq in equations if eq]


def _parse_equation(toks: list[_Tok]):
    eqs = [i for i, t in enumerate(toks) if t.kind == "eq"]
    if len(eqs) != 1:
        t = toks[eqs[1]] if len(eqs) > 1 else toks[-1]
        raise SystemSyntaxError("each equation needs exactly one '='", t.line, t.col)
    lhs, rhs = toks[: eqs[0]], toks[eqs[0] + 1 :]
    if not lhs:
        t = toks[eqs[0]]
        raise SystemSyntaxError("empty left-hand side", t.line, t.col)
    if len(rhs) != 1:
        t = rhs[1] if rhs else toks[eqs[0]]
        raise SystemSyntaxError("right-hand side must be 0, 1 or g<index>", t.line, t.col)
    r = rhs[0]
    if r.kind == "num" and r.value == 0:
        kind = "abelian"
    elif r.kind == "num" and r.value == 1:
        kind = "ordered"
    elif r.kind == "g":
        kind = "single"
    else:
        raise SystemSyntaxError("right-hand side must be 0, 1 or g<index>", r.line, r.col)

    word: list[tuple[int, int, _Tok]] = []
    if kind == "abelian":
        pending, first = None, True
        for t in lhs:
            if t.kind in ("plus", "minus"):
                if pending is not None:
                    raise SystemSyntaxError("doubled sign", t.line, t.col)
                pending = -1 if t.kind == "minus" else 1
            elif t.kind == "var":
                if pending is None and not first:
                    raise SystemSyntaxError("missing '+' or '-' between terms", t.line, t.col)
                if t.exp is not None:
                    raise SystemSyntaxError("exponents are not allowed in '= 0' equations", t.line, t.col)
                word.append((t.value, pending or 1, t))
                pending, first = None, False
            else:
                raise SystemSyntaxError("unexpected token", t.line, t.col)
        if pending is not None:
            t = lhs[-1]
            raise SystemSyntaxError("dangling sign", t.line, t.col)
    else:
        for t in lhs:
            if t.kind != "var":
                raise SystemSyntaxError(
                    "only variables (optionally ^-1) may appear in a product word", t.line, t.col
                )
            e = 1 if t.exp is None else t.exp
            if e not in (-1, 1):
                raise SystemSyntaxError("exponent must be 1 or -1", t.line, t.col)
            word.append((t.value, e, t))
    for v, _, t in word:
        if v < 1:
            raise SystemSyntaxError("variables are numbered from x1", t.line, t.col)
    seen = set()
    for v, _, t in word:
        if v in seen:
            raise SystemSyntaxError(f"variable x{v} repeated in one equation", t.line, t.col)
        seen.add(v)
    return kind, [(v - 1, e) for v, e, _ in word], r


def parse_system(text: str) -> System:
    """Parse the text syntax described in the module docstring."""
    eq_tokens = _tokenize(text)
    if not eq_tokens:
        raise SystemSyntaxError("no equations", 1, 1)
    parsed = [_parse_equation(toks) for toks in eq_tokens]
    kind = parsed[0][0]
    for toks, p in zip(eq_tokens, parsed):
        if p[0] != kind:
            raise SystemSyntaxError("cannot mix '= 0', '= 1' and '= g' equations", toks[0].line, toks[0].col)
    m = max(v for _, word, _ in parsed for v, _ in word) + 1

    if kind == "single":
        if len(parsed) != 1:
            t = eq_tokens[1][0]
            raise SystemSyntaxError("a '= g' equation must stand alone", t.line, t.col)
        _, word, rhs = parsed[0]
        if word != [(j, 1) for j in range(len(word))]:
            t = eq_tokens[0][0]
            raise SystemSyntaxError("'= g' equations must read x1 x2 ... xm", t.line, t.col)
        return SingleEquation(m=len(word), rhs=rhs.value)
    if kind == "abelian":
        rows = []
        for _, word, _ in parsed:
            row = [0] * m
            for v, e in word:
                row[v] = e
            rows.append(tuple(row))
        return AbelianSystem(tuple(rows))
    return OrderedSystem(tuple(tuple(word) for _, word, _ in parsed), m)


def _fmt_var(v: int, e: int) -> str:
    return f"x{v + 1}" if e == 1 else f"x{v + 1}^-1"


def format_system(sys: System) -> str:
    """Inverse of :func:`parse_system` (up to whitespace)."""
    if isinstance(sys, SingleEquation):
        return " ".join(f"x{j + 1}" for j in range(sys.m)) + f" = g{sys.rhs}"
    if isinstance(sys, OrderedSystem):
        return "; ".join(" ".join(_fmt_var(v, e) for v, e in w) + " = 1" for w in sys.words)
    out = []
    for row in sys.epsilon:
        parts = []
        for j, e in enumerate(row):
            if e == 0:
                continue
            if not parts:
                parts.append(f"x{j + 1}" if e == 1 else f"-x{j + 1}")
            else:
                parts.append(f"+ x{j + 1}" if e == 1 else f"- x{j + 1}")
        out.append(" ".join(parts) + " = 0")
    return "; ".join(out)


def _var_index(name) -> int:
    if isinstance(name, int):
        return name - 1
    mt = re.fullmatch(r"x(\d+)", str(name))
    if not mt or int(mt.group(1)) < 1:
        raise InvalidParameter(f"bad variable name {name!r}")
    return int(mt.group(1)) - 1


def parse_system_json(obj) -> System:
    """JSON form: ``{"abelian": rows}``, ``{"ordered": words}`` or ``{"single": {"m": 3, "g": 0}}``.

    A plain string is parsed with :func:`parse_system`.
    """
    if isinstance(obj, str):
        return parse_system(obj)
    if not isinstance(obj, dict):
        raise InvalidParameter(f"cannot read a system from {obj!r}")
    if "abelian" in obj:
        return AbelianSystem(tuple(tuple(r) for r in obj["abelian"]))
    if "ordered" in obj:
        words = [[(_var_index(v), int(e)) for v, e in w] for w in obj["ordered"]]
        m = obj.get("m") or max(v for w in words for v, _ in w) + 1
        return OrderedSystem(tuple(tuple(w) for w in words), int(m))
    if "single" in obj:
        s = obj["single"]
        return SingleEquation(m=int(s["m"]), rhs=int(s.get("g", 0)))
    raise InvalidParameter("system object needs one of 'abelian', 'ordered', 'single'")


def system_to_json(sys: System):
    if isinstance(sys, AbelianSystem):
        return {"abelian": [list(r) for r in sys.epsilon]}
    if isinstance(sys, OrderedSystem):
        return {"ordered": [[[f"x{v + 1}", e] for v, e in w] for w in sys.words], "m": sys.m}
    return {"single": {"m": sys.m, "g": sys.rhs}}


def system_rank(sys: System) -> int:
    return rank(characteristic_vectors(sys))
