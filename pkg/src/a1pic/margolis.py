"""Classical-level computations over A(1)^R/(r,t).

Modules here are plain bigraded F2-vector spaces with Sq1 and Sq2 acting by
sparse 0/1 matrices. Margolis homology ``H(M; a) = ker a / im a`` is taken
for ``a`` in {Q0 = Sq1, Q1 = Sq1Sq2 + Sq2Sq1, Sq2}.
"""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeff import AlgebraLevel, BiDegree
from .gf2 import Echelon, bits, kernel, rank, reduced_basis

SparseColumns = Tuple[Tuple[int, ...], ...]


class MargolisOperator(enum.Enum):
    Q0 = "Q0"
    Q1 = "Q1"
    SQ2 = "Sq2"

    @property
    def degree(self) -> BiDegree:
        return {"Q0": BiDegree(1, 0), "Q1": BiDegree(3, 1), "Sq2": BiDegree(2, 1)}[self.value]

    @classmethod
    def parse(cls, text: str) -> "MargolisOperator":
        for op in cls:
            if op.value.lower() == text.strip().lower():
                return op
        raise ValueError(f"unknown Margolis operator {text!r}; expected Q0, Q1 or Sq2")


ALL_OPERATORS = (MargolisOperator.Q0, MargolisOperator.Q1, MargolisOperator.SQ2)


def _xor_compose(outer: SparseColumns, inner: SparseColumns) -> SparseColumns:
    out = []
    for col in inner:
        acc: set = set()
        for k in col:
            acc.symmetric_difference_update(outer[k])
        out.append(tuple(sorted(acc)))
    return tuple(out)


def _xor_add(a: SparseColumns, b: SparseColumns) -> SparseColumns:
    return tuple(tuple(sorted(set(x).symmetric_difference(y))) for x, y in zip(a, b))


@dataclass(frozen=True)
class F2Module:
    labels: Tuple[str, ...]
    degrees: Tuple[BiDegree, ...]
    a1: SparseColumns
    a2: SparseColumns

    @classmethod
    def from_fg(cls, module) -> "F2Module":
        """Classical base change of an ``FgModule`` (any level)."""
        m = module.base_change(AlgebraLevel.CLASSICAL) if module.level is not AlgebraLevel.CLASSICAL else module
        a1 = tuple(tuple(i for i, _ in col) for col in m.act1.columns)
        a2 = tuple(tuple(i for i, _ in col) for col in m.act2.columns)
        return cls(m.labels, m.degrees, a1, a2)

    @classmethod
    def from_masks(cls, labels, degrees, a1: Sequence[int], a2: Sequence[int]) -> "F2Module":
        return cls(tuple(labels), tuple(BiDegree(*d) for d in degrees),
                   tuple(tuple(bits(c)) for c in a1), tuple(tuple(bits(c)) for c in a2))

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @cached_property
    def blocks(self) -> Dict[BiDegree, List[int]]:
        out: Dict[BiDegree, List[int]] = defaultdict(list)
        for i, d in enumerate(self.degrees):
            out[d].append(i)
        return dict(out)

    @cached_property
    def local(self) -> Tuple[int, ...]:
        pos = [0] * len(self.degrees)
        for idx in self.blocks.values():
            for k, i in enumerate(idx):
                pos[i] = k
        return tuple(pos)

    def operator(self, alpha: MargolisOperator) -> SparseColumns:
        if alpha is MargolisOperator.Q0:
            return self.a1
        if alpha is MargolisOperator.SQ2:
            return self.a2
        return self._q1

    @cached_property
    def _q1(self) -> SparseColumns:
        return _xor_add(_xor_compose(self.a1, self.a2), _xor_compose(self.a2, self.a1))

    def relation_failures(self) -> List[str]:
        out = []
        if any(_xor_compose(self.a1, self.a1)):
            out.append("Sq1 Sq1")
        if any(_xor_compose(self.a2, self.a2)):
            out.append("Sq2 Sq2")
        a12 = _xor_compose(self.a1, self.a2)
        a21 = _xor_compose(self.a2, self.a1)
        if any(_xor_add(_xor_compose(a12, a12), _xor_compose(a21, a21))):
            out.append("Sq1Sq2Sq1Sq2 + Sq2Sq1Sq2Sq1")
        return out

    def local_mask(self, indices: Iterable[int], d: BiDegree) -> int:
        """Bitmask in the bidegree-``d`` block; every index must lie in that block."""
        mask = 0
        for i in indices:
            if self.degrees[i] != d:
                raise ValueError(f"element {self.labels[i]} is not in bidegree {d}")
            mask ^= 1 << self.local[i]
        return mask

    def block_columns(self, cols: SparseColumns, d: BiDegree, shift: BiDegree) -> List[int]:
        """Columns of ``cols`` restricted to the block at ``d``, as masks in the block at ``d+shift``."""
        target = d + shift
        return [self.local_mask(cols[j], target) for j in self.blocks.get(d, ())]


@dataclass(frozen=True)
class MargolisHomology:
    operator: MargolisOperator
    dims: Dict[BiDegree, int]

    @property
    def dimension(self) -> int:
        return sum(self.dims.values())

    @property
    def generators(self) -> Tuple[BiDegree, ...]:
        out = []
        for d in sorted(self.dims):
            out.extend([d] * self.dims[d])
        return tuple(out)


def _block_ranks(M: F2Module, cols: SparseColumns, shift: BiDegree) -> Dict[BiDegree, int]:
    return {d: rank(M.block_columns(cols, d, shift)) for d in M.blocks}


def margolis_homology(M: F2Module, alpha: MargolisOperator) -> MargolisHomology:
    cols = M.operator(alpha)
    if any(_xor_compose(cols, cols)):
        raise ValueError(f"{alpha.value} does not square to zero on this module")
    shift = alpha.degree
    ranks = _block_ranks(M, cols, shift)
    dims = {}
    for d, idx in M.blocks.items():
        h = len(idx) - ranks[d] - ranks.get(d - shift, 0)
        if h:
            dims[d] = h
    return MargolisHomology(alpha, dims)


def induces_isomorphism(
    f_columns: SparseColumns, M: F2Module, N: F2Module, alpha: MargolisOperator
) -> bool:
    """Whether a degree-preserving map ``M -> N`` induces an isomorphism on ``H(-; alpha)``."""
    am, an = M.operator(alpha), N.operator(alpha)
    shift = alpha.degree
    for d in set(M.blocks) | set(N.blocks):
        m_idx = M.blocks.get(d, [])
        ker_m = kernel(M.block_columns(am, d, shift)) if m_idx else []
        im_m = rank(M.block_columns(am, d - shift, shift)) if (d - shift) in M.blocks else 0
        h_m = len(ker_m) - im_m
        ech = Echelon()
        if d in N.blocks:
            ker_n = len(kernel(N.block_columns(an, d, shift)))
            for v in (N.block_columns(an, d - shift, shift) if (d - shift) in N.blocks else []):
                ech.add(v)
            h_n = ker_n - len(ech)
        else:
            h_n = 0
        if h_m != h_n:
            return False
        if not h_m:
            continue
        base = len(ech)
        for combo in ker_m:
            image: set = set()
            for k in bits(combo):
                image.symmetric_difference_update(f_columns[m_idx[k]])
            ech.add(N.local_mask(image, d))
        if len(ech) - base != h_m:
            return False
    return True


# ---------------------------------------------------------------- D8 check

_D8_RELATORS = (
    ((1,), (1,)),
    ((2,), (2,)),
)


def check_d8_presentation(alg) -> bool:
    """Whether the classical algebra is F2<Sq1,Sq2>/(Sq1Sq1, Sq2Sq2, (Sq1Sq2)^2 + (Sq2Sq1)^2).

    An 8-dimensional algebra generated by 1 under Sq1, Sq2 in which the three
    relators act as zero is a quotient of the 8-dimensional presented algebra,
    hence isomorphic to it.
    """
    from .algebra import evaluate_relation, word_matrix
    from .coeff import ONE

    if alg.level is not AlgebraLevel.CLASSICAL:
        raise ValueError("check_d8_presentation expects the classical base change")
    if len(alg.labels) != 8:
        return False
    acts, degrees = alg.acts(), alg.degrees
    relators = [
        ((ONE, (1, 1)),),
        ((ONE, (2, 2)),),
        ((ONE, (1, 2, 1, 2)), (ONE, (2, 1, 2, 1))),
    ]
    try:
        for rel in relators:
            if not evaluate_relation(acts, rel, degrees).is_zero():
                return False
    except ValueError:
        return False
    ech = Echelon()
    for w in alg.words:
        col = word_matrix(acts, w, degrees).columns[0]
        mask = 0
        for i, _ in col:
            mask |= 1 << i
        ech.add(mask)
    return len(ech) == 8


# ---------------------------------------------------------------- freeness oracle

class SearchLimitExceeded(RuntimeError):
    pass


def _apply_word(a: Dict[int, Sequence[int]], word: Sequence[int], v: int) -> int:
    for op in reversed(word):
        cols = a[op]
        out = 0
        for i in bits(v):
            out ^= cols[i]
        v = out
    return v


def brute_force_free(M: F2Module, cap: int = 32, budget: int = 100_000) -> bool:
    """Decide freeness over A(1)^R/(r,t) by splitting off free cyclic summands.

    Independent of Margolis homology: repeatedly pick a homogeneous vector
    outside the radical whose orbit under the 8 basis words is 8-dimensional,
    quotient by that orbit, and recurse, backtracking over all choices.
    """
    from .algebra import load_algebra

    if M.dimension > cap:
        raise ValueError(f"module of dimension {M.dimension} exceeds the oracle cap {cap}")
    if M.dimension % 8:
        return False
    words = load_algebra(AlgebraLevel.CLASSICAL).words
    a1 = [sum(1 << i for i in c) for c in M.a1]
    a2 = [sum(1 << i for i in c) for c in M.a2]
    counter = [budget]
    return _split(list(M.degrees), a1, a2, words, counter)


def _split(degrees: List[BiDegree], a1: List[int], a2: List[int], words, counter: List[int]) -> bool:
    n = len(degrees)
    if n == 0:
        return True
    counter[0] -= 1
    if counter[0] < 0:
        raise SearchLimitExceeded("free-basis search budget exhausted")
    acts = {1: a1, 2: a2}
    rad = Echelon()
    for c in a1 + a2:
        rad.add(c)
    blocks: Dict[BiDegree, List[int]] = defaultdict(list)
    for i, d in enumerate(degrees):
        blocks[d].append(i)
    seen = set()
    for d in sorted(blocks):
        idx = blocks[d]
        for sel in range(1, 1 << len(idx)):
            v = 0
            for k in bits(sel):
                v |= 1 << idx[k]
            if rad.contains(v):
                continue
            orbit = [_apply_word(acts, w, v) for w in words]
            if rank(orbit) != 8:
                continue
            basis = reduced_basis(orbit)
            key = frozenset(basis.values())
            if key in seen:
                continue
            seen.add(key)
            q_deg, q1, q2 = _quotient(degrees, a1, a2, basis)
            if _split(q_deg, q1, q2, words, counter):
                return True
    return False


def _quotient(degrees, a1, a2, basis: Dict[int, int]):
    keep = [i for i in range(len(degrees)) if i not in basis]
    pos = {i: k for k, i in enumerate(keep)}

    def project(v: int) -> int:
        for p, row in basis.items():
            if (v >> p) & 1:
                v ^= row
        out = 0
        for i in bits(v):
            out |= 1 << pos[i]
        return out

    return [degrees[i] for i in keep], [project(a1[i]) for i in keep], [project(a2[i]) for i in keep]
