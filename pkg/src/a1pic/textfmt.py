"""Token-level grammar shared by module files and algebra dataset files.

A term is ``[t^a][r^b] <label>``; a right-hand side is ``0`` or terms joined
by ``+``. Exponent 1 may omit ``^1``. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from typing import Iterator, List, Optional, Tuple

from .coeff import BiDegree, Monomial, ONE

_COEFF = re.compile(r"^(?:t(?:\^(\d+))?)?(?:r(?:\^(\d+))?)?$")
_DEGREE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")
_LABEL = re.compile(r"^[^\s=+#|,]+$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


def logical_lines(text: str) -> Iterator[Tuple[int, str]]:
    """Yield ``(line_number, content)`` with comments and blank lines removed."""
    for n, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if content.strip():
            yield n, content


def column_of(line: str, fragment: str) -> int:
    idx = line.find(fragment)
    return idx + 1 if idx >= 0 else 1


def parse_coefficient(token: str) -> Optional[Monomial]:
    if not token:
        return None
    m = _COEFF.match(token)
    if not m:
        return None
    t = 0 if "t" not in token else int(m.group(1) or 1)
    r = 0 if "r" not in token else int(m.group(2) or 1)
    return Monomial(t, r)


def parse_degree(text: str, line_no: int, line: str) -> BiDegree:
    m = _DEGREE.match(text.strip())
    if not m:
        raise ParseError(f"expected bidegree '(s,w)', got {text.strip()!r}", line_no, column_of(line, text.strip()))
    return BiDegree(int(m.group(1)), int(m.group(2)))


def check_label(label: str, line_no: int, line: str) -> str:
    if not label or not _LABEL.match(label) or label == "0":
        raise ParseError(f"invalid label {label!r}", line_no, column_of(line, label) if label else 1)
    return label


def split_terms(rhs: str) -> List[str]:
    return [part.strip() for part in rhs.split("+")]


def parse_rhs(rhs: str, line_no: int, line: str) -> List[Tuple[Monomial, str]]:
    """Parse ``0`` or ``term + term ...`` into ``(coefficient, label)`` pairs."""
    rhs = rhs.strip()
    if rhs == "0":
        return []
    if not rhs:
        raise ParseError("empty right-hand side", line_no, len(line) + 1)
    out = []
    for part in split_terms(rhs):
        tokens = part.split()
        if len(tokens) == 1:
            out.append((ONE, check_label(tokens[0], line_no, line)))
        elif len(tokens) == 2:
            coeff = parse_coefficient(tokens[0])
            if coeff is None:
                raise ParseError(f"bad coefficient {tokens[0]!r}", line_no, column_of(line, tokens[0]))
            out.append((coeff, check_label(tokens[1], line_no, line)))
        else:
            raise ParseError(f"malformed term {part!r}", line_no, column_of(line, part) if part else 1)
    return out


def format_term(coeff: Monomial, label: str) -> str:
    from .coeff import format_monomial

    c = format_monomial(coeff)
    return f"{c} {label}" if c else label


def format_rhs(terms: List[Tuple[Monomial, str]]) -> str:
    if not terms:
        return "0"
    return " + ".join(format_term(c, l) for c, l in terms)


_OPS = {"sq1": 1, "sq2": 2}


def parse_word(tokens: List[str], line_no: int, line: str) -> Tuple[int, ...]:
    """``sq1 sq2`` -> ``(1, 2)``; ``1`` is the empty word."""
    if tokens == ["1"]:
        return ()
    word = []
    for tok in tokens:
        if tok not in _OPS:
            raise ParseError(f"expected sq1 or sq2, got {tok!r}", line_no, column_of(line, tok))
        word.append(_OPS[tok])
    return tuple(word)


def format_word(word: Tuple[int, ...]) -> str:
    return " ".join(f"sq{i}" for i in word) if word else "1"


def parse_word_term(part: str, line_no: int, line: str) -> Tuple[Monomial, List[str]]:
    """Split an optional leading coefficient off a word-valued term."""
    tokens = part.split()
    if not tokens:
        raise ParseError("empty term", line_no, len(line) + 1)
    coeff = parse_coefficient(tokens[0]) if len(tokens) > 1 else None
    if coeff is not None and tokens[0] not in _OPS:
        return coeff, tokens[1:]
    return ONE, tokens
