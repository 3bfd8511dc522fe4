"""A(1) over M2^R and its base changes, loaded from versioned dataset files."""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .coeff import (
    AlgebraLevel,
    BiDegree,
    GradedMatrix,
    HomogeneityError,
    Monomial,
    ONE,
    ZERO_DEGREE,
    _accumulate,
    format_monomial,
    monomial_for_degree,
)
from .report import ValidationReport
from .textfmt import (
    ParseError,
    check_label,
    column_of,
    format_word,
    logical_lines,
    parse_degree,
    parse_rhs,
    parse_word,
    parse_word_term,
    split_terms,
)

DATA_ENV = "A1PIC_DATA"
DATASETS = {
    AlgebraLevel.R: "a1r.alg",
    AlgebraLevel.C: "a1c.alg",
    AlgebraLevel.CLASSICAL: "a1.alg",
}
OPERATOR_DEGREES: Dict[int, BiDegree] = {1: BiDegree(1, 0), 2: BiDegree(2, 1)}

Word = Tuple[int, ...]
Relation = Tuple[Tuple[Monomial, Word], ...]
CartanTerm = Tuple[Monomial, Word, Word]


def word_degree(word: Word) -> BiDegree:
    d = ZERO_DEGREE
    for op in word:
        d = d + OPERATOR_DEGREES[op]
    return d


def word_matrix(acts: Mapping[int, GradedMatrix], word: Word, degrees: Sequence[BiDegree]) -> GradedMatrix:
    """Matrix of ``Sq^{w0} ∘ Sq^{w1} ∘ ...`` (rightmost letter acts first)."""
    out = GradedMatrix.identity(degrees)
    for op in reversed(word):
        out = acts[op].compose(out)
    return out


def evaluate_relation(acts: Mapping[int, GradedMatrix], relation: Relation, degrees: Sequence[BiDegree]) -> GradedMatrix:
    total = GradedMatrix.zero(degrees, degrees)
    for coeff, word in relation:
        total = total + word_matrix(acts, word, degrees).scale(coeff)
    return total


def format_relation(relation: Relation) -> str:
    parts = []
    for c, w in relation:
        m = format_monomial(c)
        parts.append(f"{m} {format_word(w)}" if m else format_word(w))
    return " + ".join(parts)


@dataclass(frozen=True)
class CartanTable:
    """Action of Sq1, Sq2 on a tensor product: ``op(m⊗n) = Σ c·(L m)⊗(R n)``."""

    sq1: Tuple[CartanTerm, ...]
    sq2: Tuple[CartanTerm, ...]

    def terms(self, op: int) -> Tuple[CartanTerm, ...]:
        return self.sq1 if op == 1 else self.sq2

    def base_change(self, level: AlgebraLevel) -> "CartanTable":
        keep = lambda ts: tuple(t for t in ts if level.allows(t[0]))
        return CartanTable(keep(self.sq1), keep(self.sq2))

    def normalized(self) -> "CartanTable":
        return CartanTable(tuple(sorted(self.sq1)), tuple(sorted(self.sq2)))

    def __str__(self) -> str:
        lines = []
        for op in (1, 2):
            terms = []
            for c, l, r in self.terms(op):
                m = format_monomial(c)
                body = f"{format_word(l)} | {format_word(r)}"
                terms.append(f"{m} {body}" if m else body)
            lines.append(f"cartan sq{op} = " + " + ".join(terms))
        return "\n".join(lines)


class CartanError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraPresentation:
    level: AlgebraLevel
    labels: Tuple[str, ...]
    degrees: Tuple[BiDegree, ...]
    words: Tuple[Word, ...]
    lmul1: GradedMatrix
    lmul2: GradedMatrix
    counit: GradedMatrix
    relations: Tuple[Relation, ...]
    cartan: CartanTable
    name: str = field(default="A(1)", compare=False)

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def acts(self) -> Dict[int, GradedMatrix]:
        return {1: self.lmul1, 2: self.lmul2}

    def lmul(self, op: int) -> GradedMatrix:
        return self.lmul1 if op == 1 else self.lmul2

    def word_matrix(self, word: Word) -> GradedMatrix:
        return word_matrix(self.acts(), word, self.degrees)

    def index(self, label: str) -> int:
        return self.labels.index(label)


# ---------------------------------------------------------------- parsing

def parse_algebra(text: str) -> AlgebraPresentation:
    name = "A(1)"
    level = AlgebraLevel.R
    labels: List[str] = []
    degrees: List[BiDegree] = []
    words: List[Word] = []
    actions: Dict[int, Dict[str, List[Tuple[Monomial, str, int, str]]]] = {1: {}, 2: {}}
    counit_label: Optional[Tuple[str, int, str]] = None
    relations: List[Relation] = []
    cartan: Dict[int, List[CartanTerm]] = {}

    for n, line in logical_lines(text):
        head, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        if head == "algebra":
            name = rest or name
        elif head == "level":
            try:
                level = AlgebraLevel.parse(rest)
            except ValueError as exc:
                raise ParseError(str(exc), n, column_of(line, rest)) from None
        elif head == "basis":
            lhs, eq, wtext = rest.partition("=")
            parts = lhs.split(None, 1)
            if len(parts) != 2:
                raise ParseError("expected 'basis <label> (<s>,<w>) [= <word>]'", n)
            label = check_label(parts[0], n, line)
            if label in labels:
                raise ParseError(f"duplicate basis label {label!r}", n, column_of(line, label))
            labels.append(label)
            degrees.append(parse_degree(parts[1], n, line))
            words.append(parse_word(wtext.split(), n, line) if eq else ())
        elif head in ("sq1", "sq2"):
            lhs, eq, rhs = rest.partition("=")
            if not eq:
                raise ParseError("expected '='", n, len(line) + 1)
            op = int(head[2])
            src = check_label(lhs.strip(), n, line)
            if src in actions[op]:
                raise ParseError(f"duplicate {head} line for {src!r}", n, 1)
            actions[op][src] = [(c, l, n, line) for c, l in parse_rhs(rhs, n, line)]
        elif head == "counit":
            counit_label = (check_label(rest, n, line), n, line)
        elif head == "relation":
            terms = []
            for part in split_terms(rest):
                coeff, toks = parse_word_term(part, n, line)
                terms.append((coeff, parse_word(toks, n, line)))
            relations.append(tuple(terms))
        elif head == "cartan":
            lhs, eq, rhs = rest.partition("=")
            op = {"sq1": 1, "sq2": 2}.get(lhs.strip())
            if op is None or not eq:
                raise ParseError("expected 'cartan sq1|sq2 = ...'", n, column_of(line, lhs.strip() or "cartan"))
            terms = []
            for part in split_terms(rhs):
                left, bar, right = part.partition("|")
                if not bar:
                    raise ParseError(f"cartan term {part!r} lacks '|'", n, column_of(line, part))
                coeff, ltoks = parse_word_term(left, n, line)
                terms.append((coeff, parse_word(ltoks, n, line), parse_word(right.split(), n, line)))
            cartan[op] = terms
        else:
            raise ParseError(f"unknown directive {head!r}", n, column_of(line, head))

    index = {l: i for i, l in enumerate(labels)}

    def lookup(label: str, n: int, line: str) -> int:
        if label not in index:
            raise ParseError(f"unknown basis label {label!r}", n, column_of(line, label))
        return index[label]

    mats = {}
    for op in (1, 2):
        cols: List[Dict[int, Monomial]] = [{} for _ in labels]
        for src, terms in actions[op].items():
            n0 = terms[0][2] if terms else 0
            j = index.get(src)
            if j is None:
                raise ParseError(f"unknown basis label {src!r}", n0, 1)
            for c, l, n, line in terms:
                i = lookup(l, n, line)
                try:
                    _accumulate(cols[j], i, c)
                except HomogeneityError:
                    raise ParseError(f"repeated target {l!r} with different coefficients", n, column_of(line, l)) from None
        mats[op] = GradedMatrix.build(degrees, degrees, OPERATOR_DEGREES[op], cols)
    if counit_label is None:
        raise ParseError("missing 'counit' line", 0)
    ci = lookup(*counit_label)
    counit = GradedMatrix.build([ZERO_DEGREE], degrees, ZERO_DEGREE, [{0: ONE} if j == ci else {} for j in range(len(labels))])
    if 1 not in cartan or 2 not in cartan:
        raise ParseError("missing cartan line for sq1 or sq2", 0)
    return AlgebraPresentation(
        level=level,
        labels=tuple(labels),
        degrees=tuple(degrees),
        words=tuple(words),
        lmul1=mats[1],
        lmul2=mats[2],
        counit=counit,
        relations=tuple(relations),
        cartan=CartanTable(tuple(cartan[1]), tuple(cartan[2])),
        name=name,
    )


def dataset_path(level: AlgebraLevel) -> Path:
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override) / DATASETS[level]
    return Path(str(resources.files("a1pic") / "data" / DATASETS[level]))


class AlgebraValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


@functools.lru_cache(maxsize=None)
def _load(path: str) -> AlgebraPresentation:
    with open(path, encoding="utf-8") as fh:
        alg = parse_algebra(fh.read())
    report = validate_algebra(alg)
    if not report.ok:
        raise AlgebraValidationError(report)
    return alg


def load_algebra(level: AlgebraLevel = AlgebraLevel.R) -> AlgebraPresentation:
    path = dataset_path(level)
    if not path.exists():
        raise FileNotFoundError(f"algebra dataset missing: {path}")
    alg = _load(str(path))
    if alg.level is not level:
        raise ValueError(f"{path} declares level {alg.level.value}, expected {level.value}")
    return alg


# ---------------------------------------------------------------- validation

def _first_nonzero(mat: GradedMatrix, labels: Sequence[str]) -> str:
    for j, col in enumerate(mat.columns):
        if col:
            return f"nonzero on basis element {labels[j]}"
    return ""


def validate_algebra(alg: AlgebraPresentation) -> ValidationReport:
    from .margolis import check_d8_presentation

    rep = ValidationReport(f"algebra {alg.name} [{alg.level.value}]")
    labels, degrees = alg.labels, alg.degrees
    n = len(labels)
    rep.add("rank-8", n == 8, f"basis has {n} elements")

    bad = []
    for name, mat, shift in (("sq1", alg.lmul1, OPERATOR_DEGREES[1]), ("sq2", alg.lmul2, OPERATOR_DEGREES[2]), ("counit", alg.counit, ZERO_DEGREE)):
        if mat.shift != shift:
            bad.append(f"{name} has degree {mat.shift}")
        for i, j, m in mat.inhomogeneous_entries():
            row = "1" if name == "counit" else labels[i]
            bad.append(f"{name} {labels[j]} -> {format_monomial(m) or '1'} {row}")
        for i, j, m in mat.entries():
            if not alg.level.allows(m):
                bad.append(f"{name} {labels[j]}: coefficient {m} not defined at level {alg.level.value}")
    rep.add("homogeneity", not bad, "; ".join(bad[:3]))
    if bad or n == 0:
        return rep

    acts = alg.acts()
    words_ok, witness = True, ""
    if degrees[0] != ZERO_DEGREE or alg.words[0] != ():
        words_ok, witness = False, "first basis element must be 1 in degree (0,0)"
    else:
        for k, w in enumerate(alg.words):
            col = word_matrix(acts, w, degrees).columns[0]
            if col != ((k, ONE),):
                words_ok, witness = False, f"word {format_word(w)} applied to 1 does not give {labels[k]}"
                break
    rep.add("basis-words", words_ok, witness)

    if words_ok:
        L = [word_matrix(acts, w, degrees) for w in alg.words]
        assoc_ok, witness = True, ""
        for x in range(n):
            for y in range(n):
                prod = L[x].columns[y]
                rhs = GradedMatrix.zero(degrees, degrees, degrees[x] + degrees[y] - degrees[0])
                for k, c in prod:
                    rhs = rhs + L[k].scale(c)
                lhs = L[x].compose(L[y])
                if lhs.columns != rhs.columns:
                    assoc_ok, witness = False, f"({labels[x]}*{labels[y]}) fails associativity"
                    break
            if not assoc_ok:
                break
        rep.add("associativity", assoc_ok, witness)

    rel_bad = []
    for rel in alg.relations:
        try:
            val = evaluate_relation(acts, rel, degrees)
        except HomogeneityError as exc:
            rel_bad.append(f"{format_relation(rel)}: {exc}")
            continue
        if not val.is_zero():
            rel_bad.append(f"{format_relation(rel)} {_first_nonzero(val, labels)}")
    rep.add("relations", not rel_bad, "; ".join(rel_bad))

    unit_col = alg.counit.columns
    counit_ok = unit_col[0] == ((0, ONE),) and not any(unit_col[1:])
    aug_ok = all(alg.counit.compose(m).is_zero() for m in acts.values())
    rep.add("counit", counit_ok and aug_ok, "counit is not the projection onto 1 killing Sq1, Sq2")

    if alg.level is not AlgebraLevel.CLASSICAL:
        tau_arrows = [(i, j) for i, j, m in alg.lmul2.entries() if m.t > 0]
        rep.add("fig1-tau-arrow", len(tau_arrows) == 1, f"{len(tau_arrows)} tau-multiple Sq2 arrows")

    cart_bad = []
    for op in (1, 2):
        for c, l, r in alg.cartan.terms(op):
            if c.degree + word_degree(l) + word_degree(r) != OPERATOR_DEGREES[op]:
                cart_bad.append(f"sq{op} term {format_monomial(c)} {format_word(l)}|{format_word(r)}")
    rep.add("cartan-homogeneous", not cart_bad, "; ".join(cart_bad))

    if rep.ok:
        classical = _drop_to(alg, AlgebraLevel.CLASSICAL)
        rep.add("d8-presentation", check_d8_presentation(classical), "classical base change is not F2[D8]")
        try:
            derived = derive_cartan(alg)
            rep.add("cartan-derived", derived.normalized() == alg.cartan.normalized(),
                    f"dataset table differs from derived table:\n{derived}")
        except CartanError as exc:
            rep.add("cartan-derived", False, str(exc))
    return rep


# ---------------------------------------------------------------- base change

def _drop_to(alg: AlgebraPresentation, to: AlgebraLevel) -> AlgebraPresentation:
    rels = []
    for rel in alg.relations:
        kept = tuple((c, w) for c, w in rel if to.allows(c))
        if kept:
            rels.append(kept)
    return replace(
        alg,
        level=to,
        lmul1=alg.lmul1.base_change(to),
        lmul2=alg.lmul2.base_change(to),
        counit=alg.counit.base_change(to),
        relations=tuple(rels),
        cartan=alg.cartan.base_change(to),
        name=f"{alg.name}/{to.value}",
    )


def base_change_algebra(alg: AlgebraPresentation, to: AlgebraLevel) -> AlgebraPresentation:
    """Set r (then t) to zero in every structure constant; the result is revalidated."""
    steps = alg.level.steps_to(to)
    for lvl in steps:
        alg = _drop_to(alg, lvl)
    if steps:
        report = validate_algebra(alg)
        if not report.ok:
            raise AlgebraValidationError(report)
    return alg


# ---------------------------------------------------------------- Cartan table

_SHORT_WORDS: Tuple[Word, ...] = ((), (1,), (2,))


def tensor_actions(
    m_acts: Mapping[int, GradedMatrix],
    m_degrees: Sequence[BiDegree],
    n_acts: Mapping[int, GradedMatrix],
    n_degrees: Sequence[BiDegree],
    cartan: CartanTable,
) -> Tuple[Tuple[BiDegree, ...], Dict[int, GradedMatrix]]:
    """Generator degrees and Sq1/Sq2 matrices of ``M ⊗ N`` (pairs in row-major order)."""
    degrees = tuple(a + b for a in m_degrees for b in n_degrees)
    nn = len(n_degrees)
    cache_m: Dict[Word, GradedMatrix] = {}
    cache_n: Dict[Word, GradedMatrix] = {}
    out = {}
    for op in (1, 2):
        terms = []
        for c, l, r in cartan.terms(op):
            if l not in cache_m:
                cache_m[l] = word_matrix(m_acts, l, m_degrees)
            if r not in cache_n:
                cache_n[r] = word_matrix(n_acts, r, n_degrees)
            terms.append((c, cache_m[l].columns, cache_n[r].columns))
        cols = []
        for i in range(len(m_degrees)):
            for j in range(nn):
                acc: Dict[int, Monomial] = {}
                for c, lcols, rcols in terms:
                    rcol = rcols[j]
                    for i2, a in lcols[i]:
                        ca = c * a
                        base = i2 * nn
                        for j2, b in rcol:
                            _accumulate(acc, base + j2, ca * b)
                cols.append(acc)
        out[op] = GradedMatrix.build(degrees, degrees, OPERATOR_DEGREES[op], cols)
    return degrees, out


def cartan_candidates(op: int, level: AlgebraLevel) -> List[CartanTerm]:
    """All terms ``c·L⊗R`` homogeneous of the degree of ``Sq^op`` with L, R in {1, Sq1, Sq2}."""
    out = []
    for l in _SHORT_WORDS:
        for r in _SHORT_WORDS:
            c = monomial_for_degree(OPERATOR_DEGREES[op] - word_degree(l) - word_degree(r), level)
            if c is not None:
                out.append((c, l, r))
    return sorted(out)


def _counit_law(table: CartanTable) -> bool:
    for op in (1, 2):
        terms = table.terms(op)
        left_unit = [t for t in terms if t[1] == ()]
        right_unit = [t for t in terms if t[2] == ()]
        if left_unit != [(ONE, (), (op,))] or right_unit != [(ONE, (op,), ())]:
            return False
    return True


def _relations_on_square(alg: AlgebraPresentation, table: CartanTable) -> bool:
    degrees, acts = tensor_actions(alg.acts(), alg.degrees, alg.acts(), alg.degrees, table)
    for rel in alg.relations:
        try:
            if not evaluate_relation(acts, rel, degrees).is_zero():
                return False
        except HomogeneityError:
            return False
    return True


def _coassociative(alg: AlgebraPresentation, table: CartanTable) -> bool:
    a, d = alg.acts(), alg.degrees
    d2, acts2 = tensor_actions(a, d, a, d, table)
    left = tensor_actions(acts2, d2, a, d, table)
    right = tensor_actions(a, d, acts2, d2, table)
    return left == right


def _subsets(items: Sequence[CartanTerm]):
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield tuple(combo)


def derive_cartan(alg: AlgebraPresentation) -> CartanTable:
    """Find the unique homogeneous Cartan table compatible with the algebra.

    Every subset of the candidate terms is tried; a table survives when the
    unit module is a tensor unit (counit law), every relation acts as zero on
    the tensor square of the regular module, and both bracketings of the
    triple tensor product agree.
    """
    survivors = []
    for s1 in _subsets(cartan_candidates(1, alg.level)):
        for s2 in _subsets(cartan_candidates(2, alg.level)):
            table = CartanTable(s1, s2)
            if not _counit_law(table):
                continue
            if not _relations_on_square(alg, table):
                continue
            if not _coassociative(alg, table):
                continue
            survivors.append(table)
    if len(survivors) != 1:
        raise CartanError(f"{len(survivors)} Cartan tables survive for {alg.name}; multiplication data is inconsistent")
    return survivors[0]
