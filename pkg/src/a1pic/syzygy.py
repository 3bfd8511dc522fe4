"""Certified kernels of homogeneous maps between free F2[t,r]-modules.

The kernel of ``f: F -> G`` is read off a Groebner basis of the module
generated by the graph vectors ``(f(e_j), e_j)`` in ``G ⊕ F`` under a
position-over-term order that ranks every ``G`` position above every ``F``
position. Basis elements with vanishing ``G`` part generate ``ker f``.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

from .coeff import AlgebraLevel, BiDegree, GradedMatrix, Monomial, ONE, monomial_for_degree
from .gf2 import Echelon

Vector = Dict[int, Monomial]


def _scaled_add(target: Vector, vec: Vector, q: Monomial) -> None:
    for p, m in vec.items():
        mq = m * q
        cur = target.get(p)
        if cur is None:
            target[p] = mq
        elif cur == mq:
            del target[p]
        else:  # pragma: no cover - impossible for homogeneous input
            raise ArithmeticError(f"inhomogeneous cancellation at position {p}")


class _Groebner:
    def __init__(self, posdeg: Sequence[BiDegree]):
        self.posdeg = posdeg
        self.vectors: List[Vector] = []
        self.degrees: List[BiDegree] = []
        self.leads: List[Tuple[int, Monomial]] = []
        self.by_pos: Dict[int, List[int]] = defaultdict(list)

    def reduce(self, v: Vector) -> Vector:
        while v:
            p = min(v)
            m = v[p]
            for k in self.by_pos.get(p, ()):
                lead = self.leads[k][1]
                if lead.divides(m):
                    _scaled_add(v, self.vectors[k], m / lead)
                    break
            else:
                return v
        return v

    def run(self, inputs: Sequence[Tuple[BiDegree, Vector]]) -> None:
        counter = itertools.count()
        queue: list = []
        for deg, vec in inputs:
            if vec:
                heapq.heappush(queue, ((deg.w, deg.s), next(counter), deg, dict(vec), None))
        while queue:
            _, _, deg, vec, pair = heapq.heappop(queue)
            if pair is not None:
                a, b = pair
                (p, ma), (_, mb) = self.leads[a], self.leads[b]
                l = ma.lcm(mb)
                vec = {}
                _scaled_add(vec, self.vectors[a], l / ma)
                _scaled_add(vec, self.vectors[b], l / mb)
            vec = self.reduce(vec)
            if not vec:
                continue
            p = min(vec)
            idx = len(self.vectors)
            self.vectors.append(vec)
            self.degrees.append(deg)
            self.leads.append((p, vec[p]))
            for k in self.by_pos[p]:
                l = self.leads[k][1].lcm(vec[p])
                pdeg = self.posdeg[p] + l.degree
                heapq.heappush(queue, ((pdeg.w, pdeg.s), next(counter), pdeg, None, (k, idx)))
            self.by_pos[p].append(idx)


def groebner_kernel(f: GradedMatrix) -> List[Tuple[BiDegree, Vector]]:
    """Groebner basis of ``ker f`` as ``(degree, {domain index: monomial})`` pairs."""
    m = f.nrows
    posdeg = [d - f.shift for d in f.row_degrees] + list(f.col_degrees)
    inputs = []
    for j, col in enumerate(f.columns):
        vec: Vector = {i: e for i, e in col}
        vec[m + j] = ONE
        inputs.append((f.col_degrees[j], vec))
    gb = _Groebner(posdeg)
    gb.run(inputs)
    out = []
    for deg, vec, (p, _) in zip(gb.degrees, gb.vectors, gb.leads):
        if p >= m:
            out.append((deg, {q - m: e for q, e in vec.items()}))
    return out


def minimal_generators(
    gens: Sequence[Tuple[BiDegree, Vector]],
    level: AlgebraLevel = AlgebraLevel.R,
) -> List[Tuple[BiDegree, Vector]]:
    """Drop generators lying in the submodule spanned by earlier (lower weight) ones."""
    order = sorted(range(len(gens)), key=lambda k: (gens[k][0].w, gens[k][0].s, k))
    kept: List[Tuple[BiDegree, Vector, int]] = []
    for k in order:
        deg, vec = gens[k]
        mask = 0
        for p in vec:
            mask |= 1 << p
        ech = Echelon()
        for kdeg, _, kmask in kept:
            if monomial_for_degree(deg - kdeg, level) is not None:
                ech.add(kmask)
        if not ech.contains(mask):
            kept.append((deg, vec, mask))
    return [(d, v) for d, v, _ in kept]


def syzygy_basis(f: GradedMatrix, level: AlgebraLevel = AlgebraLevel.R) -> GradedMatrix:
    """Minimal homogeneous basis of ``ker f``, one generator per column.

    The kernel of a map of graded free modules over F2[t,r] is free, so the
    minimal generators returned here are independent.
    """
    gens = minimal_generators(groebner_kernel(f), level)
    return GradedMatrix.build(
        f.col_degrees, [d for d, _ in gens], (0, 0), [v for _, v in gens]
    )
