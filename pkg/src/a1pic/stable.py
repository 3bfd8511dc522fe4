"""Stable module category: covers, loops, Margolis deciders, Picard coordinates."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .coeff import AlgebraLevel, BiDegree, Monomial, ONE, ZERO_DEGREE, monomial_for_degree
from .gf2 import Echelon, kernel as f2_kernel
from .margolis import (
    ALL_OPERATORS,
    F2Module,
    MargolisHomology,
    MargolisOperator,
    induces_isomorphism,
    margolis_homology,
)
from .modcat import (
    FgModule,
    ModuleMap,
    Vector,
    direct_sum,
    dual,
    factor_through,
    free,
    hstack_maps,
    kernel,
    lift_through,
    map_from_free,
    swap_map,
    tensor,
    unit,
    vector_mask,
)


class PicardCoordinate(NamedTuple):
    s: int
    w: int
    k: int
    j: int

    def __add__(self, other):  # componentwise, not tuple concatenation
        return PicardCoordinate(*(a + b for a, b in zip(self, other)))

    def __neg__(self):
        return PicardCoordinate(*(-a for a in self))

    def to_dict(self) -> Dict[str, int]:
        return self._asdict()


@dataclass(frozen=True)
class MargolisSignature:
    homologies: Tuple[MargolisHomology, ...]

    def __getitem__(self, alpha: MargolisOperator) -> MargolisHomology:
        for h in self.homologies:
            if h.operator is alpha:
                return h
        raise KeyError(alpha)

    @property
    def dimensions(self) -> Tuple[int, ...]:
        return tuple(h.dimension for h in self.homologies)

    def phi(self) -> Tuple[int, ...]:
        """Generator bidegrees of the three one-dimensional homologies, flattened."""
        if self.dimensions != (1, 1, 1):
            raise NotInvertibleError(f"Margolis dimensions {self.dimensions} are not all 1")
        out: List[int] = []
        for h in self.homologies:
            out.extend(h.generators[0])
        return tuple(out)

    def to_dict(self) -> Dict[str, object]:
        return {
            h.operator.value: {
                "dimension": h.dimension,
                "generators": [list(d) for d in h.generators],
            }
            for h in self.homologies
        }


class NotInvertibleError(ValueError):
    pass


class LatticeError(ArithmeticError):
    """A Margolis degree vector outside the span of the four Picard generators."""


# ---------------------------------------------------------------- covers and loops

def projective_cover(M: FgModule) -> Tuple[FgModule, ModuleMap]:
    """Minimal free cover: one free generator per basis element of the radical quotient.

    Within each bidegree the earliest generators of ``M`` not already in the
    radical are chosen, which makes the cover deterministic.
    """
    C = F2Module.from_fg(M)
    rad: Dict[BiDegree, Echelon] = {}
    for cols, shift in ((C.a1, BiDegree(1, 0)), (C.a2, BiDegree(2, 1))):
        for j, col in enumerate(cols):
            if col:
                rad.setdefault(C.degrees[j] + shift, Echelon()).add(sum(1 << i for i in col))
    picked = []
    for i, d in enumerate(C.degrees):
        if rad.setdefault(d, Echelon()).add(1 << i):
            picked.append(i)
    P = free([M.degrees[i] for i in picked], M.level, names=[M.labels[i] for i in picked])
    p = map_from_free(P, M, [{i: ONE} for i in picked])
    return P.renamed(f"P({M.name})"), p


def loop(M: FgModule, k: int = 1) -> FgModule:
    """``Ω^k M``; negative powers are ``D Ω^{-k} D M``."""
    if k == 0:
        return M
    if k < 0:
        return dual(loop(dual(M), -k)).renamed(f"Ω^{k}{M.name}")
    out = M
    for _ in range(k):
        P, p = projective_cover(out)
        out = kernel(p)[0]
    return out.renamed(f"Ω^{k}{M.name}" if k > 1 else f"Ω{M.name}")


# ---------------------------------------------------------------- deciders

def margolis_signature(M: FgModule) -> MargolisSignature:
    C = F2Module.from_fg(M)
    return MargolisSignature(tuple(margolis_homology(C, a) for a in ALL_OPERATORS))


def is_free(M: FgModule) -> bool:
    return margolis_signature(M).dimensions == (0, 0, 0)


def is_invertible(M: FgModule) -> bool:
    return margolis_signature(M).dimensions == (1, 1, 1)


def stably_equivalent(f: ModuleMap) -> bool:
    """Whether ``f`` induces isomorphisms on all three classical Margolis homologies."""
    problems = f.linearity_failures()
    if problems:
        raise ValueError("not a module map: " + "; ".join(problems))
    src, tgt = F2Module.from_fg(f.source), F2Module.from_fg(f.target)
    mat = f.matrix.base_change(AlgebraLevel.CLASSICAL)
    cols = tuple(tuple(i for i, _ in col) for col in mat.columns)
    return all(induces_isomorphism(cols, src, tgt, a) for a in ALL_OPERATORS)


def eval_map(M: FgModule) -> ModuleMap:
    """The pairing ``DM ⊗ M -> 1``."""
    src = tensor(dual(M), M)
    n = M.rank
    cols = [{0: ONE} if a == b else {} for a in range(n) for b in range(n)]
    return ModuleMap.from_columns(src, unit(M.level), cols)


def coeval_swap_eval(M: FgModule) -> ModuleMap:
    """The pairing ``M ⊗ DM -> 1`` (evaluation precomposed with the symmetry)."""
    return eval_map(M).compose(swap_map(M, dual(M)))


# ---------------------------------------------------------------- hom search

def hom_basis(M: FgModule, N: FgModule) -> List[ModuleMap]:
    """An F2-basis of degree-preserving A-linear maps ``M -> N``."""
    if M.level is not N.level:
        raise ValueError("level mismatch")
    lvl = M.level
    unknowns = [
        (i, j, m)
        for j, dj in enumerate(M.degrees)
        for i, di in enumerate(N.degrees)
        if (m := monomial_for_degree(dj - di, lvl)) is not None
    ]
    slot = {(i, j): u for u, (i, j, _) in enumerate(unknowns)}
    eq_index: Dict[Tuple[int, int, int], int] = {}

    def eq(op, i, j):
        return eq_index.setdefault((op, i, j), len(eq_index))

    cols = [0] * len(unknowns)
    for op in (1, 2):
        am, an = M.act(op), N.act(op)
        # (f ∘ op)(e_j): f applied to op(e_j)
        for j, col in enumerate(am.columns):
            for k, _ in col:
                for i in range(N.rank):
                    u = slot.get((i, k))
                    if u is not None:
                        cols[u] ^= 1 << eq(op, i, j)
        # (op ∘ f)(e_j)
        for k, col in enumerate(an.columns):
            for i, _ in col:
                for j in range(M.rank):
                    u = slot.get((k, j))
                    if u is not None:
                        cols[u] ^= 1 << eq(op, i, j)
    out = []
    for combo in f2_kernel(cols):
        entries: List[Vector] = [{} for _ in range(M.rank)]
        for u in range(len(unknowns)):
            if (combo >> u) & 1:
                i, j, m = unknowns[u]
                entries[j][i] = m
        out.append(ModuleMap.from_columns(M, N, entries))
    return out


def find_stable_equivalence(M: FgModule, N: FgModule, limit: int = 4096) -> Optional[ModuleMap]:
    """Search ``Hom(M, N)`` for an explicit stable equivalence, sums of basis maps first by size."""
    basis = hom_basis(M, N)
    if not basis:
        return None
    from itertools import combinations

    tried = 0
    for r in range(1, len(basis) + 1):
        for combo in combinations(basis, r):
            tried += 1
            if tried > limit:
                return None
            mat = combo[0].matrix
            for g in combo[1:]:
                mat = mat + g.matrix
            f = ModuleMap(M, N, mat)
            if stably_equivalent(f):
                return f
    return None


# ---------------------------------------------------------------- Schanuel

def padded_cover(M: FgModule, extra: Sequence[Sequence[int]]) -> ModuleMap:
    """Minimal cover plus free summands in the ``extra`` bidegrees, each sent to a fixed element."""
    P, p = projective_cover(M)
    F = free(extra, M.level, names=[f"y{k}" for k in range(len(extra))])
    images = []
    for d in extra:
        d = BiDegree(*d)
        vec = {}
        for i, g in enumerate(M.degrees):
            m = monomial_for_degree(d - g, M.level)
            if m is not None:
                vec[i] = m
        images.append(vec)
    q = map_from_free(F, M, images)
    return hstack_maps(direct_sum(P, F), [p, q])


def schanuel_comparison(M: FgModule, extra: Sequence[Sequence[int]]) -> ModuleMap:
    """Comparison map ``ker(P -> M) -> ker(P' -> M)`` induced by lifting the minimal cover."""
    P, p = projective_cover(M)
    pp = padded_cover(M, extra)
    s = lift_through(p, pp)
    if pp.compose(s).matrix != p.matrix:
        raise ArithmeticError("lift does not commute with the covers")
    K, inc = kernel(p)
    K2, inc2 = kernel(pp)
    return factor_through(s.compose(inc), inc2)


# ---------------------------------------------------------------- Picard classification

GENERATOR_NAMES = ("sigma_s", "sigma_w", "aug_ideal", "joker")


def compute_phi_reference(level: AlgebraLevel = AlgebraLevel.R) -> Dict[str, List[int]]:
    """φ on the four Picard generators, recomputed from the constructors."""
    from .modcat import standard

    return {n: list(margolis_signature(standard(n, level=level)).phi()) for n in GENERATOR_NAMES}


@lru_cache(maxsize=None)
def phi_reference() -> Dict[str, Tuple[int, ...]]:
    raw = json.loads(resources.files("a1pic").joinpath("data/phi_reference.json").read_text("utf-8"))
    return {n: tuple(raw[n]) for n in GENERATOR_NAMES}


def reference_matrix() -> np.ndarray:
    ref = phi_reference()
    return np.array([ref[n] for n in GENERATOR_NAMES], dtype=np.int64).T


def classify_phi(phi: Sequence[int]) -> PicardCoordinate:
    A = reference_matrix()
    if np.linalg.matrix_rank(A) != 4:
        raise LatticeError("reference table does not have rank 4")
    b = np.asarray(phi, dtype=np.int64)
    x, *_ = np.linalg.lstsq(A.astype(float), b.astype(float), rcond=None)
    xi = np.rint(x).astype(np.int64)
    if not np.array_equal(A @ xi, b):
        raise LatticeError(f"φ = {tuple(int(v) for v in b)} has no integral solution on the Picard generators")
    return PicardCoordinate(*(int(v) for v in xi))


def picard_classify(M: FgModule) -> PicardCoordinate:
    sig = margolis_signature(M)
    if sig.dimensions != (1, 1, 1):
        raise NotInvertibleError(f"{M.name} is not stably invertible (Margolis dimensions {sig.dimensions})")
    return classify_phi(sig.phi())
