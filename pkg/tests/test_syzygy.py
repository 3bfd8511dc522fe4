import random

from hypothesis import given, settings, strategies as st

from a1pic.algebra import load_algebra
from a1pic.coeff import (
    ONE, RHO, TAU, AlgebraLevel, BiDegree, GradedMatrix, degreewise_realize, monomial_for_degree,
    window_degrees,
)
from a1pic.gf2 import rank
from a1pic.syzygy import groebner_kernel, syzygy_basis
from helpers import random_degrees, random_graded_matrix, rank_mod2, mask_to_row


def span_of_generators_at(gens: GradedMatrix, d, level=AlgebraLevel.R):
    """Bitmasks (over the domain component at d) of m * g for every kernel generator g."""
    from a1pic.coeff import component

    dom = component(gens.row_degrees, d, level)
    pos = {i: k for k, i in enumerate(dom)}
    out = []
    for k, col in enumerate(gens.columns):
        if monomial_for_degree(BiDegree(*d) - gens.col_degrees[k], level) is None:
            continue
        mask = 0
        for i, _ in col:
            mask |= 1 << pos[i]
        out.append(mask)
    return out


def brute_kernel_dim(f, d):
    m = degreewise_realize(f, d)
    return m.ncols - m.rank()


def check_against_window(f, lo=(0, 0), hi=(8, 8)):
    K = syzygy_basis(f)
    assert f.compose(K).is_zero()
    for d in window_degrees(lo, hi):
        span = span_of_generators_at(K, d)
        real = degreewise_realize(f, d)
        real_cols = real.columns()
        # every generator multiple is a kernel vector, and together they span the kernel
        for v in span:
            acc = 0
            for j in range(real.ncols):
                if (v >> j) & 1:
                    acc ^= real_cols[j]
            assert acc == 0
        assert rank(span) == brute_kernel_dim(f, d), d
    return K


def test_koszul_syzygy():
    f = GradedMatrix.from_entries([(0, 0)], [(0, 1), (1, 1)], (0, 0), {(0, 0): TAU, (0, 1): RHO})
    K = syzygy_basis(f)
    assert K.ncols == 1
    assert dict(K.columns[0]) == {0: RHO, 1: TAU}
    assert K.col_degrees == (BiDegree(1, 2),)


def test_identity_has_no_syzygies():
    assert syzygy_basis(GradedMatrix.identity([(0, 0), (1, 3)])).ncols == 0


def test_counit_kernel_degrees():
    alg = load_algebra()
    K = check_against_window(alg.counit)
    assert sorted(K.col_degrees) == sorted(alg.degrees[1:])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_random_kernels_match_brute_force(seed):
    rng = random.Random(seed)
    rows = random_degrees(rng, rng.randint(1, 8))
    cols = random_degrees(rng, rng.randint(1, 8))
    f = random_graded_matrix(rng, rows, cols, density=rng.choice((0.3, 0.6, 0.9)))
    K = check_against_window(f, hi=(7, 9))
    # free rank: kernel rank = domain rank - rank over the fraction field; the
    # latter is the F2 rank of the support pattern (entries are units times monomials)
    support = [mask_to_row(m, f.nrows) for m in f.masks] or [[0]]
    assert K.ncols == f.ncols - rank_mod2(support)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_kernel_generators_are_minimal(seed):
    rng = random.Random(seed)
    f = random_graded_matrix(rng, random_degrees(rng, 4), random_degrees(rng, 6), density=0.5)
    K = syzygy_basis(f)
    # no generator is in the span of the others' multiples in its own degree
    for k, d in enumerate(K.col_degrees):
        others = GradedMatrix(K.row_degrees, K.col_degrees[:k] + K.col_degrees[k + 1:], K.shift,
                              K.columns[:k] + K.columns[k + 1:])
        span = span_of_generators_at(others, d)
        own = span_of_generators_at(K.select_columns([k]), d)[0]
        assert rank(span + [own]) == rank(span) + 1


def test_groebner_kernel_contains_generators():
    f = GradedMatrix.from_entries([(0, 0)], [(0, 1), (1, 1), (1, 2)], (0, 0),
                                  {(0, 0): TAU, (0, 1): RHO, (0, 2): TAU * RHO})
    gb = groebner_kernel(f)
    assert gb
    K = check_against_window(f)
    assert K.ncols == 2
