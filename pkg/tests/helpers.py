"""Independent oracles shared by the tests (dense numpy, no library linear algebra)."""

import random

import numpy as np

from a1pic.coeff import AlgebraLevel, BiDegree, GradedMatrix, monomial_for_degree


def rank_mod2(rows) -> int:
    a = np.array(rows, dtype=np.uint8) % 2
    if a.size == 0:
        return 0
    a = a.copy()
    r = 0
    nrows, ncols = a.shape
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(nrows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == nrows:
            break
    return r


def mask_to_row(mask: int, n: int):
    return [(mask >> i) & 1 for i in range(n)]


def random_degrees(rng: random.Random, n: int, spread: int = 3):
    return [BiDegree(rng.randint(0, spread), rng.randint(0, spread)) for _ in range(n)]


def random_graded_matrix(rng: random.Random, rows, cols, shift=(0, 0), density=0.6,
                         level=AlgebraLevel.R) -> GradedMatrix:
    entries = {}
    for j, dj in enumerate(cols):
        for i, di in enumerate(rows):
            m = monomial_for_degree(BiDegree(*dj) + BiDegree(*shift) - BiDegree(*di), level)
            if m is not None and rng.random() < density:
                entries[(i, j)] = m
    return GradedMatrix.from_entries(rows, cols, shift, entries)


def dense_classical(module):
    """Dense 0/1 arrays of Sq1 and Sq2 on the classical base change (column = image)."""
    from a1pic.coeff import AlgebraLevel as L

    m = module.base_change(L.CLASSICAL) if module.level is not L.CLASSICAL else module
    n = m.rank
    out = []
    for act in (m.act1, m.act2):
        a = np.zeros((n, n), dtype=np.uint8)
        for j, col in enumerate(act.columns):
            for i, _ in col:
                a[i, j] = 1
        out.append(a)
    return out


def dense_homology_dimension(a: np.ndarray) -> int:
    """dim ker a - dim im a = n - 2 rank(a) for a square-zero matrix."""
    return a.shape[0] - 2 * rank_mod2(a)
