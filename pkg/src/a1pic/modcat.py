"""Finitely generated M2-free A(1)-modules and the maps between them."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import (
    OPERATOR_DEGREES,
    AlgebraPresentation,
    evaluate_relation,
    format_relation,
    load_algebra,
    tensor_actions,
    word_matrix,
)
from .coeff import (
    AlgebraLevel,
    BiDegree,
    GradedMatrix,
    HomogeneityError,
    Monomial,
    ONE,
    ZERO_DEGREE,
    _accumulate,
    monomial_for_degree,
)
from .gf2 import Echelon, bits
from .report import ValidationReport
from .syzygy import syzygy_basis
from .textfmt import (
    ParseError,
    check_label,
    column_of,
    format_rhs,
    logical_lines,
    parse_degree,
    parse_rhs,
)

Vector = Dict[int, Monomial]


@dataclass(frozen=True)
class FgModule:
    level: AlgebraLevel
    labels: Tuple[str, ...]
    degrees: Tuple[BiDegree, ...]
    act1: GradedMatrix
    act2: GradedMatrix
    name: str = field(default="M", compare=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def generators(self) -> List[Tuple[str, BiDegree]]:
        return list(zip(self.labels, self.degrees))

    def acts(self) -> Dict[int, GradedMatrix]:
        return {1: self.act1, 2: self.act2}

    def act(self, op: int) -> GradedMatrix:
        return self.act1 if op == 1 else self.act2

    def word_matrix(self, word: Sequence[int]) -> GradedMatrix:
        return word_matrix(self.acts(), tuple(word), self.degrees)

    def algebra(self) -> AlgebraPresentation:
        return load_algebra(self.level)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def relabel(self, labels: Sequence[str]) -> "FgModule":
        labels = tuple(labels)
        if len(labels) != self.rank or len(set(labels)) != len(labels):
            raise ValueError("relabeling must be a bijection onto distinct labels")
        return replace(self, labels=labels)

    def renamed(self, name: str) -> "FgModule":
        return replace(self, name=name)

    def base_change(self, to: AlgebraLevel) -> "FgModule":
        return base_change(self, to)

    def __repr__(self) -> str:
        return f"FgModule({self.name!r}, level={self.level.value}, rank={self.rank})"


def make_module(
    level: AlgebraLevel,
    generators: Sequence[Tuple[str, Sequence[int]]],
    sq1: Mapping[str, Sequence[Tuple[Monomial, str]]] = (),
    sq2: Mapping[str, Sequence[Tuple[Monomial, str]]] = (),
    name: str = "M",
) -> FgModule:
    """Build a module from label-level action data, e.g. ``{"g0": [(ONE, "g1")]}``."""
    labels = tuple(l for l, _ in generators)
    degrees = tuple(BiDegree(*d) for _, d in generators)
    index = {l: i for i, l in enumerate(labels)}
    mats = []
    for op, table in ((1, dict(sq1)), (2, dict(sq2))):
        cols: List[Vector] = [{} for _ in labels]
        for src, terms in table.items():
            for c, tgt in terms:
                _accumulate(cols[index[src]], index[tgt], Monomial(*c))
        mats.append(GradedMatrix.build(degrees, degrees, OPERATOR_DEGREES[op], cols))
    return FgModule(level, labels, degrees, mats[0], mats[1], name)


@dataclass(frozen=True)
class ModuleMap:
    source: FgModule
    target: FgModule
    matrix: GradedMatrix

    def linearity_failures(self) -> List[str]:
        out = []
        if self.matrix.row_degrees != self.target.degrees or self.matrix.col_degrees != self.source.degrees:
            return ["matrix shape does not match source/target generators"]
        if self.matrix.shift != ZERO_DEGREE:
            return [f"map has degree {self.matrix.shift}"]
        for i, j, m in self.matrix.inhomogeneous_entries():
            out.append(f"inhomogeneous entry {self.target.labels[i]} <- {self.source.labels[j]}")
        if out:
            return out
        for op in (1, 2):
            lhs = self.matrix.compose(self.source.act(op))
            rhs = self.target.act(op).compose(self.matrix)
            diff = lhs + rhs
            for j, col in enumerate(diff.columns):
                if col:
                    out.append(f"sq{op} not preserved on {self.source.labels[j]}")
                    break
        return out

    def is_valid(self) -> bool:
        return not self.linearity_failures()

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        return ModuleMap(other.source, self.target, self.matrix.compose(other.matrix))

    def base_change(self, to: AlgebraLevel) -> "ModuleMap":
        return ModuleMap(base_change(self.source, to), base_change(self.target, to), self.matrix.base_change(to))

    @classmethod
    def identity(cls, M: FgModule) -> "ModuleMap":
        return cls(M, M, GradedMatrix.identity(M.degrees))

    @classmethod
    def from_columns(cls, source: FgModule, target: FgModule, columns: Sequence[Vector]) -> "ModuleMap":
        return cls(source, target, GradedMatrix.build(target.degrees, source.degrees, ZERO_DEGREE, columns))


# ---------------------------------------------------------------- text format

def parse_module(text: str, level: Optional[AlgebraLevel] = None) -> FgModule:
    """Parse the line-oriented module format.

    ``level`` overrides a ``level`` directive in the file; files without
    either are read at level R.
    """
    name = "M"
    file_level: Optional[AlgebraLevel] = None
    gens: List[Tuple[str, BiDegree]] = []
    seen: Dict[str, int] = {}
    actions: Dict[int, Dict[str, Tuple[int, str, List[Tuple[Monomial, str]]]]] = {1: {}, 2: {}}
    for n, line in logical_lines(text):
        head, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        if head == "module":
            name = rest or name
        elif head == "level":
            try:
                file_level = AlgebraLevel.parse(rest)
            except ValueError as exc:
                raise ParseError(str(exc), n, column_of(line, rest)) from None
        elif head == "gen":
            parts = rest.split(None, 1)
            if len(parts) != 2:
                raise ParseError("expected 'gen <label> (<s>,<w>)'", n, len(line) + 1)
            label = check_label(parts[0], n, line)
            if label in seen:
                raise ParseError(f"duplicate generator {label!r}", n, column_of(line, label))
            seen[label] = len(gens)
            gens.append((label, parse_degree(parts[1], n, line)))
        elif head in ("sq1", "sq2"):
            lhs, eq, rhs = rest.partition("=")
            if not eq:
                raise ParseError("expected '='", n, len(line) + 1)
            op = int(head[2])
            src = check_label(lhs.strip(), n, line)
            if src in actions[op]:
                raise ParseError(f"second {head} line for {src!r}", n, column_of(line, src))
            actions[op][src] = (n, line, parse_rhs(rhs, n, line))
        else:
            raise ParseError(f"unknown directive {head!r}", n, column_of(line, head))

    lvl = level or file_level or AlgebraLevel.R
    labels = tuple(l for l, _ in gens)
    degrees = tuple(d for _, d in gens)
    mats = []
    for op in (1, 2):
        cols: List[Vector] = [{} for _ in gens]
        for src, (n, line, terms) in actions[op].items():
            if src not in seen:
                raise ParseError(f"unknown generator {src!r}", n, column_of(line, src))
            j = seen[src]
            rhs_at = line.index("=") + 1
            for coeff, tgt in terms:
                tcol = line.find(tgt, rhs_at) + 1
                if tgt not in seen:
                    raise ParseError(f"unknown generator {tgt!r}", n, tcol)
                i = seen[tgt]
                want = degrees[j] + OPERATOR_DEGREES[op] - degrees[i]
                if coeff.degree != want:
                    raise ParseError(
                        f"sq{op} {src} -> {tgt}: coefficient has bidegree {coeff.degree}, "
                        f"homogeneity requires {want}", n, tcol)
                if not lvl.allows(coeff):
                    raise ParseError(f"coefficient {coeff} is not defined at level {lvl.value}", n, tcol)
                try:
                    _accumulate(cols[j], i, coeff)
                except HomogeneityError as exc:
                    raise ParseError(str(exc), n, tcol) from None
        mats.append(GradedMatrix.build(degrees, degrees, OPERATOR_DEGREES[op], cols))
    return FgModule(lvl, labels, degrees, mats[0], mats[1], name)


def serialize_module(M: FgModule) -> str:
    lines = [f"module {M.name}"]
    if M.level is not AlgebraLevel.R:
        lines.append(f"level {M.level.value}")
    for label, d in M.generators:
        lines.append(f"gen {label} ({d.s},{d.w})")
    for op in (1, 2):
        for j, col in enumerate(M.act(op).columns):
            if col:
                terms = [(m, M.labels[i]) for i, m in col]
                lines.append(f"sq{op} {M.labels[j]} = {format_rhs(terms)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- validation

def validate_module(M: FgModule) -> ValidationReport:
    rep = ValidationReport(f"module {M.name} [{M.level.value}]")
    rep.add("labels-unique", len(set(M.labels)) == len(M.labels), "repeated generator label")
    shape_ok = all(
        M.act(op).row_degrees == M.degrees and M.act(op).col_degrees == M.degrees
        and M.act(op).shift == OPERATOR_DEGREES[op] for op in (1, 2)
    )
    rep.add("shape", shape_ok, "action matrices do not match the generator list")
    if not shape_ok:
        return rep
    bad = []
    for op in (1, 2):
        for i, j, m in M.act(op).inhomogeneous_entries():
            bad.append(f"sq{op} {M.labels[j]} -> {m} {M.labels[i]}")
    rep.add("homogeneity", not bad, "; ".join(bad[:3]))
    illegal = [
        f"sq{op} {M.labels[j]}: {m}" for op in (1, 2) for i, j, m in M.act(op).entries() if not M.level.allows(m)
    ]
    rep.add("coefficients", not illegal, "; ".join(illegal[:3]))
    if bad or illegal:
        return rep
    alg = M.algebra()
    fails = []
    for rel in alg.relations:
        val = evaluate_relation(M.acts(), rel, M.degrees)
        for j, col in enumerate(val.columns):
            if col:
                fails.append(f"{format_relation(rel)} nonzero on {M.labels[j]}")
                break
    rep.add("relations", not fails, "; ".join(fails))
    return rep


# ---------------------------------------------------------------- constructions

def _same_level(*modules: FgModule) -> AlgebraLevel:
    levels = {m.level for m in modules}
    if len(levels) != 1:
        raise ValueError(f"level mismatch: {sorted(l.value for l in levels)}")
    return levels.pop()


def _unique(labels: Sequence[str]) -> Tuple[str, ...]:
    out, seen = [], set()
    for l in labels:
        while l in seen:
            l = l + "'"
        seen.add(l)
        out.append(l)
    return tuple(out)


def _block_diag(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    n = a.nrows
    cols = [dict(c) for c in a.columns] + [{i + n: m for i, m in c} for c in b.columns]
    return GradedMatrix.build(a.row_degrees + b.row_degrees, a.col_degrees + b.col_degrees, a.shift, cols)


def direct_sum(M: FgModule, N: FgModule) -> FgModule:
    lvl = _same_level(M, N)
    return FgModule(
        lvl, _unique(M.labels + N.labels), M.degrees + N.degrees,
        _block_diag(M.act1, N.act1), _block_diag(M.act2, N.act2), f"{M.name}+{N.name}",
    )


def direct_sum_all(modules: Sequence[FgModule]) -> FgModule:
    out = modules[0]
    for m in modules[1:]:
        out = direct_sum(out, m)
    return out


def shift(M: FgModule, s: int, w: int) -> FgModule:
    d = BiDegree(s, w)
    name = M.name if (s, w) == (0, 0) else f"S^({s},{w}){M.name}"
    return FgModule(M.level, M.labels, tuple(g + d for g in M.degrees), M.act1.shifted(d), M.act2.shifted(d), name)


def _wrap(label: str) -> str:
    return f"({label})" if "⊗" in label else label


def tensor(M: FgModule, N: FgModule) -> FgModule:
    lvl = _same_level(M, N)
    cartan = load_algebra(lvl).cartan
    degrees, acts = tensor_actions(M.acts(), M.degrees, N.acts(), N.degrees, cartan)
    labels = tuple(f"{_wrap(a)}⊗{_wrap(b)}" for a in M.labels for b in N.labels)
    return FgModule(lvl, _unique(labels), degrees, acts[1], acts[2], f"{_wrap(M.name)}⊗{_wrap(N.name)}")


def tensor_power(M: FgModule, n: int) -> FgModule:
    if n < 1:
        raise ValueError("tensor_power needs n >= 1")
    out = M
    for _ in range(n - 1):
        out = tensor(out, M)
    return out.renamed(f"{M.name}^{n}")


def _dual_label(label: str) -> str:
    if label.startswith("(") and label.endswith(")*"):
        return label[1:-2]
    if label.endswith("*") and "⊗" not in label:
        return label[:-1]
    return f"({label})*" if "⊗" in label else f"{label}*"


class DualError(ValueError):
    pass


def dual(M: FgModule) -> FgModule:
    """The dual module, with actions solved from the evaluation pairing.

    For each operator in turn the Cartan expansion of ``op(φ ⊗ m)`` must pair
    to zero; the single ``op ⊗ 1`` term isolates the unknown action on the
    dual, and all other terms involve actions already determined.
    """
    cartan = load_algebra(M.level).cartan
    ddeg = tuple(-d for d in M.degrees)
    dacts: Dict[int, GradedMatrix] = {}
    for op in (1, 2):
        terms = cartan.terms(op)
        pivots = [t for t in terms if t[1] == (op,) and t[2] == ()]
        if pivots != [(ONE, (op,), ())]:
            raise DualError(f"Cartan table for sq{op} has no unit {op}⊗1 term")
        total = GradedMatrix.zero(ddeg, ddeg, OPERATOR_DEGREES[op])
        for c, l, r in terms:
            if (l, r) == ((op,), ()):
                continue
            if any(o not in dacts for o in l):
                raise DualError(f"sq{op} Cartan term needs the not-yet-solved action of {l} on the dual")
            left = word_matrix(dacts, l, ddeg)
            right_t = M.word_matrix(r).dual_transpose()
            total = total + right_t.compose(left).scale(c)
        dacts[op] = total.with_shift(OPERATOR_DEGREES[op])
    labels = tuple(_dual_label(l) for l in M.labels)
    if len(set(labels)) != len(labels):
        labels = tuple(f"{l}*" for l in M.labels)
    return FgModule(M.level, labels, ddeg, dacts[1], dacts[2], f"D{_wrap(M.name)}")


def base_change(M: FgModule, to: AlgebraLevel) -> FgModule:
    steps = M.level.steps_to(to)
    if not steps:
        return M
    return FgModule(to, M.labels, M.degrees, M.act1.base_change(to), M.act2.base_change(to), f"{M.name}/{to.value}")


# ---------------------------------------------------------------- degreewise solving

def apply_matrix(mat: GradedMatrix, vec: Mapping[int, Monomial]) -> Vector:
    acc: Vector = {}
    for k, m in vec.items():
        for i, e in mat.columns[k]:
            _accumulate(acc, i, e * m)
    return acc


def vector_mask(vec: Mapping[int, Monomial]) -> int:
    mask = 0
    for i in vec:
        mask |= 1 << i
    return mask


class _Span:
    """Degreewise solver for ``vec = Σ c_k · gen_k`` with monomial coefficients."""

    def __init__(self, gen_degrees: Sequence[BiDegree], gen_masks: Sequence[int], level: AlgebraLevel):
        self.degrees = gen_degrees
        self.masks = gen_masks
        self.level = level
        self._cache: Dict[BiDegree, Tuple[List[int], Echelon]] = {}

    def _at(self, d: BiDegree):
        hit = self._cache.get(d)
        if hit is None:
            idx = [k for k, g in enumerate(self.degrees) if monomial_for_degree(d - g, self.level) is not None]
            ech = Echelon()
            for k in idx:
                ech.add(self.masks[k])
            hit = self._cache[d] = (idx, ech)
        return hit

    def express(self, mask: int, d: BiDegree) -> Optional[Vector]:
        idx, ech = self._at(d)
        combo = ech.express(mask)
        if combo is None:
            return None
        return {idx[b]: monomial_for_degree(d - self.degrees[idx[b]], self.level) for b in bits(combo)}


def _vector_degree(vec: Mapping[int, Monomial], degrees: Sequence[BiDegree]) -> BiDegree:
    i, m = next(iter(vec.items()))
    return degrees[i] + m.degree


class NotSplitError(ValueError):
    pass


def submodule_from_generators(
    ambient: FgModule, gens: GradedMatrix, name: str, labels: Sequence[str]
) -> Tuple[FgModule, ModuleMap]:
    """A-submodule with the given free coefficient basis (columns of ``gens``)."""
    span = _Span(gens.col_degrees, gens.masks, ambient.level)
    acts = []
    for op in (1, 2):
        images = ambient.act(op).compose(gens)
        cols = []
        for j, col in enumerate(images.columns):
            vec = dict(col)
            if not vec:
                cols.append({})
                continue
            sol = span.express(vector_mask(vec), gens.col_degrees[j] + OPERATOR_DEGREES[op])
            if sol is None:
                raise ValueError(f"sq{op} of generator {labels[j]} leaves the submodule")
            cols.append(sol)
        acts.append(GradedMatrix.build(gens.col_degrees, gens.col_degrees, OPERATOR_DEGREES[op], cols))
    K = FgModule(ambient.level, tuple(labels), gens.col_degrees, acts[0], acts[1], name)
    return K, ModuleMap(K, ambient, gens)


def kernel(f: ModuleMap) -> Tuple[FgModule, ModuleMap]:
    """Kernel of an A-linear map with its inclusion into the source."""
    lvl = f.source.level
    gens = syzygy_basis(f.matrix, lvl)
    labels = []
    for k, col in enumerate(gens.columns):
        if len(col) == 1 and col[0][1] == ONE:
            labels.append(f.source.labels[col[0][0]])
        else:
            labels.append(f"k{k}")
    return submodule_from_generators(f.source, gens, f"ker({f.source.name}->{f.target.name})", _unique(labels))


def cokernel(f: ModuleMap) -> Tuple[FgModule, ModuleMap]:
    """Cokernel of a map whose image is a coefficient-direct summand of the target.

    The target generators complementing the image at the classical level are
    taken as the cokernel basis; a certified kernel computation confirms that
    they stay independent of the image over F2[t,r]. Otherwise the cokernel
    is not coefficient-free and ``NotSplitError`` is raised.
    """
    N, lvl = f.target, f.target.level
    classical = f.matrix.base_change(AlgebraLevel.CLASSICAL)
    by_deg: Dict[BiDegree, Echelon] = {}
    for j, col in enumerate(classical.columns):
        d = f.source.degrees[j]
        by_deg.setdefault(d, Echelon()).add(vector_mask(dict(col)))
    picked = []
    for i, d in enumerate(N.degrees):
        ech = by_deg.setdefault(d, Echelon())
        if ech.add(1 << i):
            picked.append(i)
    # (y, c) -> f(y) + Σ c_p e_p must have kernel inside the source summand.
    cols = [dict(c) for c in f.matrix.columns] + [{i: ONE} for i in picked]
    both = GradedMatrix.build(N.degrees, f.source.degrees + tuple(N.degrees[i] for i in picked), ZERO_DEGREE, cols)
    nsrc = f.source.rank
    for col in syzygy_basis(both, lvl).columns:
        if any(k >= nsrc for k, _ in col):
            raise NotSplitError("image is not a coefficient-direct summand; cokernel is not M2-free")
    span = _Span(both.col_degrees, both.masks, lvl)
    cdeg = tuple(N.degrees[i] for i in picked)
    pos = {k + nsrc: p for p, k in enumerate(range(len(picked)))}

    def project(vec: Vector) -> Vector:
        if not vec:
            return {}
        sol = span.express(vector_mask(vec), _vector_degree(vec, N.degrees))
        if sol is None:  # pragma: no cover - excluded by the surjectivity of `both`
            raise NotSplitError("target element outside image + complement")
        return {pos[k]: m for k, m in sol.items() if k >= nsrc}

    proj_cols = [project({i: ONE}) for i in range(N.rank)]
    proj = GradedMatrix.build(cdeg, N.degrees, ZERO_DEGREE, proj_cols)
    acts = []
    for op in (1, 2):
        cols = [project(dict(N.act(op).columns[i])) for i in picked]
        acts.append(GradedMatrix.build(cdeg, cdeg, OPERATOR_DEGREES[op], cols))
    C = FgModule(lvl, tuple(N.labels[i] for i in picked), cdeg, acts[0], acts[1], f"coker({f.source.name}->{N.name})")
    return C, ModuleMap(N, C, proj)


# ---------------------------------------------------------------- standard modules

def unit(level: AlgebraLevel = AlgebraLevel.R) -> FgModule:
    return make_module(level, [("1", (0, 0))], name="1")


def regular(level: AlgebraLevel = AlgebraLevel.R) -> FgModule:
    alg = load_algebra(level)
    return FgModule(level, alg.labels, alg.degrees, alg.lmul1, alg.lmul2, "A")


def free(degrees: Sequence[Sequence[int]], level: AlgebraLevel = AlgebraLevel.R, names: Optional[Sequence[str]] = None) -> FgModule:
    """Free module on generators in the given bidegrees; generator ``k`` sits at index ``8k``.

    A generator named ``"1"`` (the default for a single generator) keeps the
    bare algebra labels.
    """
    A = regular(level)
    if names is None:
        names = ["1"] if len(degrees) == 1 else [f"x{k}" for k in range(len(degrees))]
    parts = []
    for name, d in zip(names, degrees):
        part = shift(A, *d)
        parts.append(part.relabel([b if name == "1" else f"{b}·{name}" for b in A.labels]))
    if not parts:
        return FgModule(level, (), (), GradedMatrix.zero((), (), OPERATOR_DEGREES[1]),
                        GradedMatrix.zero((), (), OPERATOR_DEGREES[2]), "0")
    return direct_sum_all(parts).renamed(f"F{len(parts)}")


def zero_module(level: AlgebraLevel = AlgebraLevel.R) -> FgModule:
    return free([], level)


def joker(level: AlgebraLevel = AlgebraLevel.R) -> FgModule:
    """The cyclic module A/A·Sq3 on the basis 1, Sq1, Sq2, Sq2Sq1, Sq1Sq2Sq1."""
    t = Monomial(1, 0) if level is not AlgebraLevel.CLASSICAL else None
    sq2 = {"1": [(ONE, "Sq2")], "Sq1": [(ONE, "Sq2Sq1")]}
    if t is not None:
        sq2["Sq2"] = [(t, "Sq1Sq2Sq1")]
    return make_module(
        level,
        [("1", (0, 0)), ("Sq1", (1, 0)), ("Sq2", (2, 1)), ("Sq2Sq1", (3, 1)), ("Sq1Sq2Sq1", (4, 1))],
        sq1={"1": [(ONE, "Sq1")], "Sq2Sq1": [(ONE, "Sq1Sq2Sq1")]},
        sq2=sq2,
        name="J",
    )


def counit_map(level: AlgebraLevel = AlgebraLevel.R) -> ModuleMap:
    return ModuleMap(regular(level), unit(level), load_algebra(level).counit)


def aug_ideal(level: AlgebraLevel = AlgebraLevel.R) -> FgModule:
    return kernel(counit_map(level))[0].renamed("I")


def aug_ideal_inv(level: AlgebraLevel = AlgebraLevel.R) -> FgModule:
    return dual(aug_ideal(level)).renamed("DI")


def standard(name: str, degrees: Optional[Sequence[Sequence[int]]] = None, level: AlgebraLevel = AlgebraLevel.R) -> FgModule:
    key = name.lower()
    if key == "unit":
        return unit(level)
    if key == "sigma_s":
        return shift(unit(level), 1, 0).renamed("Σs")
    if key == "sigma_w":
        return shift(unit(level), 0, 1).renamed("Σw")
    if key == "joker":
        return joker(level)
    if key == "aug_ideal":
        return aug_ideal(level)
    if key == "aug_ideal_inv":
        return aug_ideal_inv(level)
    if key == "regular":
        return regular(level)
    if key == "free":
        return free(degrees or [(0, 0)], level)
    raise KeyError(f"unknown standard module {name!r}")


# ---------------------------------------------------------------- maps

def map_from_free(P: FgModule, target: FgModule, images: Sequence[Vector]) -> ModuleMap:
    """A-linear map out of ``free(...)`` sending free generator ``k`` to ``images[k]``."""
    alg = load_algebra(P.level)
    if P.rank != 8 * len(images):
        raise ValueError("map_from_free expects one image per free generator")
    words = [target.word_matrix(w) for w in alg.words]
    cols = []
    for vec in images:
        for wm in words:
            cols.append(apply_matrix(wm, vec))
    return ModuleMap.from_columns(P, target, cols)


def swap_map(M: FgModule, N: FgModule) -> ModuleMap:
    """The symmetry ``M ⊗ N -> N ⊗ M``."""
    src, tgt = tensor(M, N), tensor(N, M)
    nm, nn = M.rank, N.rank
    cols = [{j * nm + i: ONE} for i in range(nm) for j in range(nn)]
    return ModuleMap.from_columns(src, tgt, cols)


def hstack_maps(source: FgModule, maps: Sequence[ModuleMap]) -> ModuleMap:
    """``(f_1, ..., f_n): ⊕ source_i -> target`` for maps sharing a target."""
    cols = []
    for f in maps:
        cols.extend(dict(c) for c in f.matrix.columns)
    return ModuleMap.from_columns(source, maps[0].target, cols)


def factor_through(f: ModuleMap, inclusion: ModuleMap) -> ModuleMap:
    """Given ``f: X -> Y`` landing in the image of ``inclusion: K -> Y``, return ``X -> K``."""
    K, Y = inclusion.source, inclusion.target
    span = _Span(K.degrees, inclusion.matrix.masks, K.level)
    cols = []
    for j, col in enumerate(f.matrix.columns):
        vec = dict(col)
        if not vec:
            cols.append({})
            continue
        sol = span.express(vector_mask(vec), f.source.degrees[j])
        if sol is None:
            raise ValueError(f"image of {f.source.labels[j]} is not in the submodule")
        cols.append(sol)
    return ModuleMap.from_columns(f.source, K, cols)


def lift_through(g: ModuleMap, surjection: ModuleMap) -> ModuleMap:
    """Lift ``g: P -> M`` (``P`` built by ``free``) along a surjection ``P' -> M``."""
    P = g.source
    span = _Span(surjection.source.degrees, surjection.matrix.masks, P.level)
    images = []
    for k in range(P.rank // 8):
        vec = dict(g.matrix.columns[8 * k])
        if not vec:
            images.append({})
            continue
        sol = span.express(vector_mask(vec), P.degrees[8 * k])
        if sol is None:
            raise ValueError("map to lift through is not surjective")
        images.append(sol)
    return map_from_free(P, surjection.source, images)
