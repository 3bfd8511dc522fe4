"""Bigraded arithmetic over F2[t, r] and homogeneous matrices.

``t`` stands for tau in bidegree (0,1) and ``r`` for rho in bidegree (1,1).
Every bidegree holds at most one monomial, so a homogeneous element is a
single monomial and a homogeneous vector is determined by its support.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .gf2 import F2Matrix


class BiDegree(NamedTuple):
    s: int
    w: int

    def __add__(self, other) -> "BiDegree":  # type: ignore[override]
        return BiDegree(self.s + other[0], self.w + other[1])

    def __sub__(self, other) -> "BiDegree":
        return BiDegree(self.s - other[0], self.w - other[1])

    def __neg__(self) -> "BiDegree":
        return BiDegree(-self.s, -self.w)

    def __str__(self) -> str:
        return f"({self.s},{self.w})"


ZERO_DEGREE = BiDegree(0, 0)


class Monomial(NamedTuple):
    """``t^t * r^r``; the zero element is represented by ``None`` at call sites."""

    t: int
    r: int

    @property
    def degree(self) -> BiDegree:
        return BiDegree(self.r, self.t + self.r)

    def __mul__(self, other) -> "Monomial":  # type: ignore[override]
        return Monomial(self.t + other[0], self.r + other[1])

    def divides(self, other: "Monomial") -> bool:
        return self.t <= other.t and self.r <= other.r

    def __truediv__(self, other) -> "Monomial":
        return Monomial(self.t - other[0], self.r - other[1])

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial(max(self.t, other.t), max(self.r, other.r))

    def __str__(self) -> str:
        return format_monomial(self) or "1"


ONE = Monomial(0, 0)
TAU = Monomial(1, 0)
RHO = Monomial(0, 1)


def format_monomial(m: Monomial) -> str:
    """Text form used by the file formats: ``t^2r``, ``t``, ``r^3``; empty for 1."""
    out = ""
    for sym, e in (("t", m.t), ("r", m.r)):
        if e == 1:
            out += sym
        elif e > 1:
            out += f"{sym}^{e}"
    return out


class AlgebraLevel(enum.Enum):
    R = "R"
    C = "C"
    CLASSICAL = "classical"

    @property
    def rank(self) -> int:
        return {"R": 0, "C": 1, "classical": 2}[self.value]

    def allows(self, m: Monomial) -> bool:
        if self is AlgebraLevel.R:
            return True
        if self is AlgebraLevel.C:
            return m.r == 0
        return m.t == 0 and m.r == 0

    def steps_to(self, target: "AlgebraLevel") -> List["AlgebraLevel"]:
        """Intermediate levels passed through when base changing to ``target``."""
        if target.rank < self.rank:
            raise ValueError(f"cannot base change from {self.value} up to {target.value}")
        order = [AlgebraLevel.R, AlgebraLevel.C, AlgebraLevel.CLASSICAL]
        return order[self.rank + 1 : target.rank + 1]

    @classmethod
    def parse(cls, text: str) -> "AlgebraLevel":
        key = text.strip()
        for lvl in cls:
            if key.lower() == lvl.value.lower():
                return lvl
        raise ValueError(f"unknown level {text!r}")


def monomial_for_degree(d: Sequence[int], level: AlgebraLevel = AlgebraLevel.R) -> Optional[Monomial]:
    s, w = d[0], d[1]
    if s < 0 or w < s:
        return None
    m = Monomial(w - s, s)
    return m if level.allows(m) else None


Column = Tuple[Tuple[int, Monomial], ...]


class HomogeneityError(ValueError):
    pass


def _accumulate(acc: Dict[int, Monomial], i: int, m: Monomial) -> None:
    prev = acc.get(i)
    if prev is None:
        acc[i] = m
    elif prev == m:
        del acc[i]
    else:
        raise HomogeneityError(f"entry {i} mixes monomials {prev} and {m}")


@dataclass(frozen=True)
class GradedMatrix:
    """Matrix of a homogeneous F2[t,r]-linear map between free modules.

    Column ``j`` is the image of the ``j``-th domain generator; rows index
    codomain generators. A nonzero entry ``(i, j)`` has bidegree
    ``col_degrees[j] + shift - row_degrees[i]``.
    """

    row_degrees: Tuple[BiDegree, ...]
    col_degrees: Tuple[BiDegree, ...]
    shift: BiDegree
    columns: Tuple[Column, ...]

    @classmethod
    def build(
        cls,
        row_degrees: Iterable[Sequence[int]],
        col_degrees: Iterable[Sequence[int]],
        shift: Sequence[int],
        columns: Iterable[Mapping[int, Monomial]],
    ) -> "GradedMatrix":
        rows = tuple(BiDegree(*d) for d in row_degrees)
        cols = tuple(BiDegree(*d) for d in col_degrees)
        data = tuple(tuple(sorted((i, Monomial(*m)) for i, m in c.items())) for c in columns)
        if len(data) != len(cols):
            raise ValueError(f"{len(data)} columns given for {len(cols)} column degrees")
        for c in data:
            for i, _ in c:
                if not 0 <= i < len(rows):
                    raise ValueError(f"row index {i} out of range")
        return cls(rows, cols, BiDegree(*shift), data)

    @classmethod
    def from_entries(
        cls,
        row_degrees: Sequence[Sequence[int]],
        col_degrees: Sequence[Sequence[int]],
        shift: Sequence[int],
        entries: Mapping[Tuple[int, int], Monomial],
    ) -> "GradedMatrix":
        cols: List[Dict[int, Monomial]] = [{} for _ in col_degrees]
        for (i, j), m in entries.items():
            if m is not None:
                cols[j][i] = m
        return cls.build(row_degrees, col_degrees, shift, cols)

    @classmethod
    def identity(cls, degrees: Sequence[Sequence[int]]) -> "GradedMatrix":
        return cls.build(degrees, degrees, ZERO_DEGREE, [{j: ONE} for j in range(len(degrees))])

    @classmethod
    def zero(cls, row_degrees, col_degrees, shift=ZERO_DEGREE) -> "GradedMatrix":
        return cls.build(row_degrees, col_degrees, shift, [{} for _ in col_degrees])

    @property
    def nrows(self) -> int:
        return len(self.row_degrees)

    @property
    def ncols(self) -> int:
        return len(self.col_degrees)

    def entry(self, i: int, j: int) -> Optional[Monomial]:
        for r, m in self.columns[j]:
            if r == i:
                return m
        return None

    def entries(self) -> Iterable[Tuple[int, int, Monomial]]:
        for j, col in enumerate(self.columns):
            for i, m in col:
                yield i, j, m

    def expected_degree(self, i: int, j: int) -> BiDegree:
        return self.col_degrees[j] + self.shift - self.row_degrees[i]

    def inhomogeneous_entries(self) -> List[Tuple[int, int, Monomial]]:
        return [(i, j, m) for i, j, m in self.entries() if m.degree != self.expected_degree(i, j)]

    def is_homogeneous(self) -> bool:
        return not self.inhomogeneous_entries()

    def is_zero(self) -> bool:
        return not any(self.columns)

    @cached_property
    def masks(self) -> Tuple[int, ...]:
        """Column supports as bitmasks over rows."""
        out = []
        for col in self.columns:
            m = 0
            for i, _ in col:
                m |= 1 << i
            out.append(m)
        return tuple(out)

    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        """``self ∘ other``."""
        if self.col_degrees != other.row_degrees:
            raise ValueError("degree mismatch in composition")
        cols = []
        for ocol in other.columns:
            acc: Dict[int, Monomial] = {}
            for k, m in ocol:
                for i, e in self.columns[k]:
                    _accumulate(acc, i, e * m)
            cols.append(acc)
        return GradedMatrix.build(self.row_degrees, other.col_degrees, self.shift + other.shift, cols)

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        if (self.row_degrees, self.col_degrees) != (other.row_degrees, other.col_degrees):
            raise ValueError("shape mismatch in sum")
        if self.shift != other.shift and not (self.is_zero() or other.is_zero()):
            raise HomogeneityError(f"summing maps of degrees {self.shift} and {other.shift}")
        shift = other.shift if self.is_zero() else self.shift
        cols = []
        for a, b in zip(self.columns, other.columns):
            acc = dict(a)
            for i, m in b:
                _accumulate(acc, i, m)
            cols.append(acc)
        return GradedMatrix.build(self.row_degrees, self.col_degrees, shift, cols)

    def scale(self, m: Monomial) -> "GradedMatrix":
        cols = [{i: e * m for i, e in col} for col in self.columns]
        return GradedMatrix.build(self.row_degrees, self.col_degrees, self.shift + m.degree, cols)

    def base_change(self, level: AlgebraLevel) -> "GradedMatrix":
        cols = [{i: e for i, e in col if level.allows(e)} for col in self.columns]
        return GradedMatrix.build(self.row_degrees, self.col_degrees, self.shift, cols)

    def dual_transpose(self) -> "GradedMatrix":
        """Transpose between the dual free modules (negated generator degrees)."""
        cols: List[Dict[int, Monomial]] = [{} for _ in self.row_degrees]
        for i, j, m in self.entries():
            cols[i][j] = m
        return GradedMatrix.build(
            [-d for d in self.col_degrees], [-d for d in self.row_degrees], self.shift, cols
        )

    def with_shift(self, shift: Sequence[int]) -> "GradedMatrix":
        return GradedMatrix(self.row_degrees, self.col_degrees, BiDegree(*shift), self.columns)

    def shifted(self, d: Sequence[int]) -> "GradedMatrix":
        """Same entries with every row and column degree moved by ``d``."""
        return GradedMatrix(
            tuple(r + d for r in self.row_degrees),
            tuple(c + d for c in self.col_degrees),
            self.shift,
            self.columns,
        )

    def select_columns(self, idx: Sequence[int]) -> "GradedMatrix":
        return GradedMatrix(
            self.row_degrees, tuple(self.col_degrees[j] for j in idx), self.shift,
            tuple(self.columns[j] for j in idx),
        )

    def to_dense(self) -> List[List[Optional[Monomial]]]:
        out: List[List[Optional[Monomial]]] = [[None] * self.ncols for _ in range(self.nrows)]
        for i, j, m in self.entries():
            out[i][j] = m
        return out


def matrix_compose(f: GradedMatrix, g: GradedMatrix) -> GradedMatrix:
    return f.compose(g)


def component(degrees: Sequence[BiDegree], d: Sequence[int], level: AlgebraLevel = AlgebraLevel.R) -> List[int]:
    """Generators contributing to bidegree ``d`` of the free module on ``degrees``."""
    ds, dw = d[0], d[1]
    out = []
    for j, g in enumerate(degrees):
        if monomial_for_degree((ds - g[0], dw - g[1]), level) is not None:
            out.append(j)
    return out


def degreewise_realize(f: GradedMatrix, d: Sequence[int], level: AlgebraLevel = AlgebraLevel.R) -> F2Matrix:
    """F2 matrix of ``f`` from the bidegree-``d`` part of its domain to the
    bidegree ``d + shift`` part of its codomain."""
    d = BiDegree(*d)
    dom = component(f.col_degrees, d, level)
    cod = component(f.row_degrees, d + f.shift, level)
    pos = {i: k for k, i in enumerate(cod)}
    cols = []
    for j in dom:
        mask = 0
        for i, _ in f.columns[j]:
            if i not in pos:
                raise HomogeneityError(f"entry ({i},{j}) leaves the bidegree {d + f.shift} component")
            mask |= 1 << pos[i]
        cols.append(mask)
    return F2Matrix.from_columns(len(cod), cols)


@dataclass(frozen=True)
class HilbertWindow:
    lo: BiDegree
    hi: BiDegree
    dims: Dict[BiDegree, int] = field(hash=False)

    def __getitem__(self, d: Sequence[int]) -> int:
        return self.dims[BiDegree(*d)]

    def total(self) -> int:
        return sum(self.dims.values())


def hilbert_window(
    degrees: Sequence[Sequence[int]],
    lo: Sequence[int],
    hi: Sequence[int],
    level: AlgebraLevel = AlgebraLevel.R,
) -> HilbertWindow:
    """Degreewise F2-dimensions of a free module inside the box ``lo..hi`` (inclusive)."""
    lo, hi = BiDegree(*lo), BiDegree(*hi)
    gens = [BiDegree(*g) for g in degrees]
    dims = {}
    for s in range(lo.s, hi.s + 1):
        for w in range(lo.w, hi.w + 1):
            dims[BiDegree(s, w)] = len(component(gens, (s, w), level))
    return HilbertWindow(lo, hi, dims)


def window_degrees(lo: Sequence[int], hi: Sequence[int]) -> List[BiDegree]:
    return [BiDegree(s, w) for s in range(lo[0], hi[0] + 1) for w in range(lo[1], hi[1] + 1)]


from .syzygy import syzygy_basis  # noqa: E402  (re-export; syzygy depends on the types above)

__all__ = [
    "AlgebraLevel", "BiDegree", "GradedMatrix", "HilbertWindow", "HomogeneityError", "Monomial",
    "ONE", "RHO", "TAU", "ZERO_DEGREE", "component", "degreewise_realize", "format_monomial",
    "hilbert_window", "matrix_compose", "monomial_for_degree", "syzygy_basis", "window_degrees",
]
