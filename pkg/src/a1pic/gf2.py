"""GF(2) linear algebra on bit-packed integer vectors.

A vector is a Python ``int`` whose bit ``i`` is the ``i``-th coordinate.
Gaussian elimination is the only rank / kernel / solve routine here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple


class Echelon:
    """Incrementally built row-echelon basis.

    Every stored row has a distinct leading (highest) bit. Each row carries
    a ``combo`` mask recording which inserted vectors it is a sum of, so the
    basis can express members of its span in terms of the inputs.
    """

    __slots__ = ("_rows", "_count")

    def __init__(self) -> None:
        self._rows: dict[int, Tuple[int, int]] = {}
        self._count = 0

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: int) -> Tuple[int, int]:
        """Return ``(residue, combo)`` after reducing ``vec`` by the basis."""
        combo = 0
        rows = self._rows
        while vec:
            top = vec.bit_length() - 1
            hit = rows.get(top)
            if hit is None:
                break
            vec ^= hit[0]
            combo ^= hit[1]
        return vec, combo

    def add(self, vec: int) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        tag = 1 << self._count
        self._count += 1
        residue, combo = self.reduce(vec)
        if not residue:
            return False
        self._rows[residue.bit_length() - 1] = (residue, combo ^ tag)
        return True

    def contains(self, vec: int) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec: int) -> Optional[int]:
        """Mask of inserted vectors summing to ``vec``, or None."""
        residue, combo = self.reduce(vec)
        return None if residue else combo


def rank(vectors: Iterable[int]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def kernel(columns: Sequence[int]) -> List[int]:
    """Basis of ``{x : sum_j x_j * columns[j] = 0}`` as masks over column indices."""
    rows: dict[int, Tuple[int, int]] = {}
    out: List[int] = []
    for j, col in enumerate(columns):
        vec, combo = col, 1 << j
        while vec:
            top = vec.bit_length() - 1
            hit = rows.get(top)
            if hit is None:
                rows[top] = (vec, combo)
                break
            vec ^= hit[0]
            combo ^= hit[1]
        else:
            out.append(combo)
    return out


def solve(columns: Sequence[int], target: int) -> Optional[int]:
    """A mask ``x`` with ``sum_j x_j * columns[j] == target``, or None."""
    ech = Echelon()
    for c in columns:
        ech.add(c)
    return ech.express(target)


def apply(columns: Sequence[int], x: int) -> int:
    out = 0
    j = 0
    while x:
        if x & 1:
            out ^= columns[j]
        x >>= 1
        j += 1
    return out


def bits(mask: int) -> List[int]:
    """Indices of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def reduced_basis(vectors: Iterable[int]) -> dict[int, int]:
    """Reduced row echelon form as ``{pivot_bit: row}``; pivots appear in one row only."""
    piv: dict[int, int] = {}
    for v in vectors:
        for p, row in piv.items():
            if (v >> p) & 1:
                v ^= row
        if not v:
            continue
        p = v.bit_length() - 1
        for q in list(piv):
            if (piv[q] >> p) & 1:
                piv[q] ^= v
        piv[p] = v
    return piv


@dataclass(frozen=True)
class F2Matrix:
    """Dense F2 matrix with bit-packed rows."""

    nrows: int
    ncols: int
    rows: Tuple[int, ...]

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[int]) -> "F2Matrix":
        rows = [0] * nrows
        for j, col in enumerate(columns):
            for i in bits(col):
                rows[i] |= 1 << j
        return cls(nrows, len(columns), tuple(rows))

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "F2Matrix":
        ncols = len(data[0]) if data else 0
        rows = tuple(sum((b & 1) << j for j, b in enumerate(r)) for r in data)
        return cls(len(data), ncols, rows)

    def columns(self) -> List[int]:
        cols = [0] * self.ncols
        for i, row in enumerate(self.rows):
            for j in bits(row):
                cols[j] |= 1 << i
        return cols

    def to_lists(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.ncols} vs {other.nrows}")
        rows = []
        for r in self.rows:
            acc = 0
            for k in bits(r):
                acc ^= other.rows[k]
            rows.append(acc)
        return F2Matrix(self.nrows, other.ncols, tuple(rows))

    def rank(self) -> int:
        return rank(self.rows)

    def is_zero(self) -> bool:
        return not any(self.rows)
