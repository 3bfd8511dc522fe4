"""A deterministic corpus of small modules for property checks."""

from __future__ import annotations

import random
from typing import List, Optional

from .coeff import AlgebraLevel, BiDegree, monomial_for_degree
from .modcat import (
    FgModule,
    NotSplitError,
    Vector,
    aug_ideal,
    aug_ideal_inv,
    cokernel,
    direct_sum,
    dual,
    free,
    joker,
    kernel,
    map_from_free,
    regular,
    shift,
    tensor,
    unit,
)

MAX_CLASSICAL_DIMENSION = 32


def random_vector(M: FgModule, d: BiDegree, rng: random.Random) -> Vector:
    """A random homogeneous element of ``M`` in bidegree ``d`` (possibly zero)."""
    vec = {}
    for i, g in enumerate(M.degrees):
        m = monomial_for_degree(d - g, M.level)
        if m is not None and rng.random() < 0.5:
            vec[i] = m
    return vec


def random_free_map_kernel(M: FgModule, rng: random.Random, ngens: int = 1) -> Optional[FgModule]:
    """Kernel of a random map from a small free module into ``M``."""
    degrees = [rng.choice(M.degrees) for _ in range(ngens)]
    degrees = [(d.s + rng.choice((0, 0, 1)), d.w + rng.choice((0, 0, 1))) for d in degrees]
    F = free(degrees, M.level)
    f = map_from_free(F, M, [random_vector(M, BiDegree(*d), rng) for d in degrees])
    K = kernel(f)[0]
    return K if 0 < K.rank <= MAX_CLASSICAL_DIMENSION else None


def random_free_map_cokernel(M: FgModule, rng: random.Random) -> Optional[FgModule]:
    d = rng.choice(M.degrees)
    d = BiDegree(d.s + rng.choice((0, 1, 2)), d.w + rng.choice((0, 1)))
    F = free([d], M.level)
    f = map_from_free(F, M, [random_vector(M, d, rng)])
    try:
        C = cokernel(f)[0]
    except NotSplitError:
        return None
    return C if 0 < C.rank <= MAX_CLASSICAL_DIMENSION else None


def building_blocks(level: AlgebraLevel = AlgebraLevel.R) -> List[FgModule]:
    A = regular(level)
    J = joker(level)
    I = aug_ideal(level)
    quotient = cokernel(map_from_free(free([(1, 0)], level), A, [{A.labels.index("Sq1"): monomial_for_degree(BiDegree(0, 0))}]))[0]
    return [
        unit(level),
        shift(unit(level), 1, 0),
        shift(unit(level), 0, 1),
        shift(unit(level), -2, 1),
        A,
        shift(A, 1, 1),
        J,
        dual(J),
        shift(J, 2, 0),
        I,
        aug_ideal_inv(level),
        shift(I, -1, 0),
        quotient.renamed("A/A·Sq1"),
        tensor(J, dual(J)),
        tensor(A, direct_sum(unit(level), shift(unit(level), 1, 0))),
    ]


def corpus(seed: int = 20240601, size: int = 60, level: AlgebraLevel = AlgebraLevel.R) -> List[FgModule]:
    """Building blocks, their small sums and tensors, and random kernels/cokernels."""
    rng = random.Random(seed)
    blocks = building_blocks(level)
    out = list(blocks)
    small = [b for b in blocks if b.rank <= 8]
    while len(out) < size:
        kind = rng.randrange(4)
        a, b = rng.choice(small), rng.choice(small)
        if kind == 0:
            a, b = rng.choice(out), rng.choice(out)
            M = direct_sum(a, b)
        elif kind == 1:
            if a.rank * b.rank > MAX_CLASSICAL_DIMENSION:
                continue
            M = tensor(a, b)
        elif kind == 2:
            M = random_free_map_kernel(rng.choice(out), rng, ngens=rng.choice((1, 1, 2)))
        else:
            M = random_free_map_cokernel(rng.choice(out), rng)
        if M is None or M.rank > MAX_CLASSICAL_DIMENSION:
            continue
        out.append(M.renamed(f"C{len(out)}"))
    return out


def invertible_corpus(level: AlgebraLevel = AlgebraLevel.R) -> List[FgModule]:
    J, I = joker(level), aug_ideal(level)
    one = unit(level)
    return [
        one,
        shift(one, 1, 0),
        shift(one, 0, -1),
        J,
        dual(J),
        I,
        aug_ideal_inv(level),
        shift(J, 1, 1),
        shift(I, 0, 2),
    ]
