"""Command-line interface: ``a1pic <command> [options] FILE...``.

Every command prints a JSON report (sorted keys) on stdout. Module files can
be given by path or as ``std:<name>`` for a built-in module (unit, sigma_s,
sigma_w, joker, aug_ideal, aug_ideal_inv, regular).

Exit codes: 0 ok, 2 invalid input, 3 mathematical inconsistency, 4 I/O,
5 module not stably invertible (classify).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .coeff import AlgebraLevel
from .margolis import ALL_OPERATORS, F2Module, MargolisOperator, margolis_homology
from .modcat import (
    FgModule,
    base_change,
    direct_sum,
    dual,
    parse_module,
    serialize_module,
    shift,
    standard,
    tensor,
    validate_module,
)
from .stable import (
    LatticeError,
    NotInvertibleError,
    eval_map,
    is_free,
    is_invertible,
    loop,
    margolis_signature,
    picard_classify,
    stably_equivalent,
)
from .textfmt import ParseError

EXIT_OK, EXIT_INVALID, EXIT_INCONSISTENT, EXIT_IO, EXIT_NOT_INVERTIBLE = 0, 2, 3, 4, 5
STATUS = {
    EXIT_OK: "ok",
    EXIT_INVALID: "invalid-input",
    EXIT_INCONSISTENT: "inconsistency",
    EXIT_IO: "io-error",
    EXIT_NOT_INVERTIBLE: "not-invertible",
}


class CliFailure(Exception):
    def __init__(self, code: int, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


def _read(source: str, level: Optional[AlgebraLevel]):
    if source.startswith("std:"):
        try:
            M = standard(source[4:], level=level or AlgebraLevel.R)
        except KeyError as exc:
            raise CliFailure(EXIT_INVALID, str(exc.args[0])) from None
        text = serialize_module(M)
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliFailure(EXIT_IO, f"{source}: {exc.strerror or exc}") from None
        try:
            M = parse_module(text, level)
        except ParseError as exc:
            raise CliFailure(EXIT_INVALID, f"{source}: {exc}", {"line": exc.line, "col": exc.col}) from None
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return M, {"path": source, "sha256": digest}


def _checked(M: FgModule, source: str) -> FgModule:
    rep = validate_module(M)
    if not rep.ok:
        raise CliFailure(EXIT_INVALID, f"{source}: module does not validate", {"validation": rep.to_dict()})
    return M


def _module_result(M: FgModule, out: Optional[str]) -> dict:
    text = serialize_module(M)
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliFailure(EXIT_IO, f"{out}: {exc.strerror or exc}") from None
    return {
        "generators": M.rank,
        "level": M.level.value,
        "module": text,
        "output": out,
        "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="a1pic", description="Stable A(1)^R-module computations.")
    parser.add_argument("--level", choices=["R", "C", "classical"], help="read inputs at this level")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, nargs=1, help=None):
        p = sub.add_parser(name, help=help)
        p.add_argument("files", nargs=nargs, metavar="FILE")
        return p

    add("validate", help="parse and check a module file")
    for name, n in (("tensor", 2), ("sum", 2), ("dual", 1)):
        add(name, n).add_argument("-o", "--output")
    p = add("shift")
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--w", type=int, default=0)
    p.add_argument("-o", "--output")
    p = add("basechange")
    p.add_argument("--to", required=True, choices=["C", "classical"])
    p.add_argument("-o", "--output")
    p = add("loop")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("-o", "--output")
    add("margolis").add_argument("--alpha", choices=["Q0", "Q1", "Sq2"])
    add("free")
    add("invertible")
    add("classify")
    add("eval")
    return parser


def run(args: argparse.Namespace) -> dict:
    level = AlgebraLevel.parse(args.level) if args.level else None
    loaded = [_read(f, level) for f in args.files]
    inputs = [info for _, info in loaded]
    mods = [M for M, _ in loaded]
    cmd = args.command
    report = validate_module(mods[0])
    if cmd == "validate":
        if not report.ok:
            raise CliFailure(EXIT_INVALID, "module does not validate", {"inputs": inputs, "validation": report.to_dict()})
        return {"inputs": inputs, "result": report.to_dict()}
    mods = [_checked(M, f) for M, f in zip(mods, args.files)]
    M = mods[0]
    try:
        if cmd == "tensor":
            result = _module_result(tensor(mods[0], mods[1]), args.output)
        elif cmd == "sum":
            result = _module_result(direct_sum(mods[0], mods[1]), args.output)
        elif cmd == "dual":
            result = _module_result(dual(M), args.output)
        elif cmd == "shift":
            result = _module_result(shift(M, args.s, args.w), args.output)
        elif cmd == "basechange":
            result = _module_result(base_change(M, AlgebraLevel.parse(args.to)), args.output)
        elif cmd == "loop":
            result = _module_result(loop(M, args.k), args.output)
        elif cmd == "margolis":
            C = F2Module.from_fg(M)
            ops = [MargolisOperator.parse(args.alpha)] if args.alpha else list(ALL_OPERATORS)
            result = {}
            for a in ops:
                h = margolis_homology(C, a)
                result[a.value] = {"dimension": h.dimension, "generators": [list(d) for d in h.generators]}
        elif cmd == "free":
            result = {"free": is_free(M), "signature": margolis_signature(M).to_dict()}
        elif cmd == "invertible":
            result = {"invertible": is_invertible(M), "signature": margolis_signature(M).to_dict()}
        elif cmd == "classify":
            result = picard_classify(M).to_dict()
        elif cmd == "eval":
            f = eval_map(M)
            result = {"source_generators": f.source.rank, "stably_equivalent": stably_equivalent(f)}
        else:  # pragma: no cover - argparse restricts the choices
            raise CliFailure(EXIT_INVALID, f"unknown command {cmd}")
    except NotInvertibleError as exc:
        raise CliFailure(EXIT_NOT_INVERTIBLE, str(exc), {"inputs": inputs}) from None
    except LatticeError as exc:
        raise CliFailure(EXIT_INCONSISTENT, str(exc), {"inputs": inputs}) from None
    except ValueError as exc:
        raise CliFailure(EXIT_INVALID, str(exc), {"inputs": inputs}) from None
    return {"inputs": inputs, "result": result}


def render(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    echo: List[str] = [args.command] + list(args.files)
    try:
        body = run(args)
        code = EXIT_OK
    except CliFailure as exc:
        code = exc.code
        body = dict(exc.payload)
        body["error"] = str(exc)
    body["command"] = " ".join(echo)
    body["status"] = STATUS[code]
    print(render(body))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
