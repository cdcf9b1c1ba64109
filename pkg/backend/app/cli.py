"""
Command Line Interface - Batch front end for normal forms, reduction, modules and verification
Text or JSON on stdout, structured logs on stderr.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, List, Optional

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import AlgebraError
from app.core.logging import configure_logging, get_logger
from app.models.algebra import AlphabetChoice, ModulePayload, OutputFormat, hw_out, report_out, rule_out
from app.services import modules
from app.services.expression_parser import parse_expr
from app.services.laurent import QValue
from app.services.ncpoly import Alphabet, Gen
from app.services.presentation import (
    ReductionOrder,
    enumerate_allowed,
    pbw_normal_form,
    reduce,
    rule_table,
)
from app.services.uq_oracle import RewriteStrategy, normalize
from app.services.verification import SuiteBounds, SuiteName, run_suite_sync

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


class _Output:
    def __init__(self, fmt: OutputFormat, stream=None):
        self.fmt = OutputFormat(fmt)
        self.stream = stream or sys.stdout

    @property
    def json(self) -> bool:
        return self.fmt == OutputFormat.JSON

    def emit(self, text: str, payload: Any) -> None:
        if self.json:
            self.stream.write(json.dumps(payload, indent=2) + "\n")
        else:
            self.stream.write(text + "\n")


def _read_expression(value: Optional[str]) -> str:
    if value is None or value == "-":
        return sys.stdin.read().strip()
    return value


def _q(args: argparse.Namespace) -> Optional[QValue]:
    text = args.q if args.q is not None else settings.DEFAULT_Q
    return QValue.parse(text) if text else None


# Commands


def cmd_normalize(args: argparse.Namespace, out: _Output) -> int:
    source = _read_expression(args.expr)
    alphabet = None if args.alphabet == AlphabetChoice.AUTO.value else Alphabet(args.alphabet)
    p = parse_expr(source, alphabet)
    if p.alphabet == Alphabet.U:
        form = normalize(p, RewriteStrategy(args.strategy))
    else:
        form = pbw_normal_form(p)
    out.emit(str(form), {"input": source, "text": str(form), "terms": form.to_json()})
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace, out: _Output) -> int:
    source = _read_expression(args.expr)
    result = reduce(parse_expr(source, Alphabet.A), ReductionOrder(args.order))
    out.emit(str(result), {"input": source, "text": str(result), "terms": result.to_json()})
    return EXIT_OK


def cmd_rules(args: argparse.Namespace, out: _Output) -> int:
    rules = [rule_out(s) for s in rule_table(check=args.check)]
    lines = []
    for r in rules:
        marks = " [swap]" if r.swap else ""
        if r.verified is not None:
            marks += " [sound]" if r.verified else " [UNSOUND]"
        lines.append(f"{r.rule_id}  {r.lhs} -> {r.rhs}{marks}")
    out.emit("\n".join(lines), [r.model_dump() for r in rules])
    return EXIT_OK if all(r.verified is not False for r in rules) else EXIT_CHECK_FAILED


def cmd_enumerate(args: argparse.Namespace, out: _Output) -> int:
    words = [w.text() for w in enumerate_allowed(args.max_len)]
    out.emit("\n".join(words), {"max_len": args.max_len, "count": len(words), "words": words})
    return EXIT_OK


def _module_for(d: int, eps: Optional[int], gen: Gen, q: Optional[QValue]) -> modules.ModuleRep:
    if eps is None:
        if gen.alphabet == Alphabet.U:
            raise AlgebraError(f"{gen.value} acts on L(d, eps); pass --eps")
        return modules.build_L(d, q)
    m = modules.build_L_eps(d, eps, q)
    return m if gen.alphabet == Alphabet.U else modules.restrict(m)


def cmd_module(args: argparse.Namespace, out: _Output) -> int:
    gen = Gen.from_name(args.gen)
    q = _q(args)
    matrix = modules.matrix_to_json(_module_for(args.d, args.eps, gen, q).matrix(gen))
    text = "\n".join("[" + ", ".join(row) + "]" for row in matrix)
    out.emit(text, {"d": args.d, "gen": gen.value, "eps": args.eps,
                    "q": None if q is None else str(q), "matrix": matrix})
    return EXIT_OK


def _load_payload(path: str) -> Any:
    raw = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise AlgebraError(f"input is not valid JSON: {e.msg}", line=e.lineno) from e


def cmd_classify(args: argparse.Namespace, out: _Output) -> int:
    payload = ModulePayload.model_validate(_load_payload(args.input))
    q = _q(args)
    if q is None and payload.q is not None:
        q = QValue.parse(payload.q)
    m = modules.module_from_payload(payload.dim, payload.actions, q)
    result = modules.classify(m)
    data = hw_out(result.hw, result.verified)
    text = "\n".join([
        f"d = {data.d}",
        f"lambda = {data.lam}",
        "alpha = " + ", ".join(data.alpha),
        f"isomorphic to L({data.d}): {'yes' if result.verified else 'no'}",
    ])
    out.emit(text, data.model_dump(by_alias=True))
    return EXIT_OK if result.verified else EXIT_CHECK_FAILED


def cmd_verify(args: argparse.Namespace, out: _Output) -> int:
    bounds = SuiteBounds.from_settings(args.max_len, args.max_d, _q(args))
    report = run_suite_sync(args.suite, bounds)
    data = report_out(report)
    lines = []
    for r in data.results:
        line = f"{r.status.upper():8} {r.check_id:40} {r.location}"
        if r.witness:
            line += f"\n         witness: {r.witness}"
        if r.literal:
            line += f"\n         literal: {r.literal}\n         corrected: {r.corrected}"
        lines.append(line)
    counts = data.counts
    lines.append(f"{data.suite}: {counts['pass']} passed, {counts['fail']} failed, "
                 f"{counts['flagged']} flagged in {data.elapsed}s")
    out.emit("\n".join(lines), data.model_dump())
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_serve(args: argparse.Namespace, out: _Output) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, reload=args.reload,
                log_level=settings.LOG_LEVEL.lower())
    return EXIT_OK


# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    common.add_argument("--q", default=None, help="rational q for numeric mode, e.g. 2 or 3/2")

    parser = argparse.ArgumentParser(prog="equitable", description=settings.DESCRIPTION)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="PBW normal form in x^r y^s z^t")
    p.add_argument("expr", nargs="?", help="expression; '-' or omitted reads stdin")
    p.add_argument("--alphabet", choices=[a.value for a in AlphabetChoice], default=AlphabetChoice.AUTO.value)
    p.add_argument("--strategy", choices=[s.value for s in RewriteStrategy],
                   default=RewriteStrategy.INSERTION.value)
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("reduce", parents=[common], help="normal form over allowed words")
    p.add_argument("expr", nargs="?")
    p.add_argument("--order", choices=[o.value for o in ReductionOrder], default=ReductionOrder.LEFTMOST.value)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("rules", parents=[common], help="the 21 reduction rules")
    p.add_argument("--check", action="store_true", help="verify each rule against the oracle")
    p.set_defaults(handler=cmd_rules)

    p = sub.add_parser("enumerate", parents=[common], help="allowed words up to a length")
    p.add_argument("--max-len", type=int, default=2)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("module", parents=[common], help="action matrix of one generator")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=int, choices=[1, -1], default=None)
    p.add_argument("--gen", required=True, help="x, y, z or nx, ny, nz, x2, y2, z2")
    p.set_defaults(handler=cmd_module)

    p = sub.add_parser("classify", parents=[common], help="highest-weight data of a module given as JSON")
    p.add_argument("--input", default="-", help="JSON file {dim, actions, q?}; '-' reads stdin")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=[s.value for s in SuiteName], default=SuiteName.ALL.value)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--max-d", type=int, default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP API")
    p.add_argument("--host", default=settings.HOST)
    p.add_argument("--port", type=int, default=settings.PORT)
    p.add_argument("--reload", action="store_true")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    configure_logging(settings, stream=sys.stderr)
    args = build_parser().parse_args(argv)
    out = _Output(args.format, stdout)
    handler: Callable[[argparse.Namespace, _Output], int] = args.handler
    try:
        return handler(args, out)
    except ValidationError as e:
        logger.debug("invalid input", command=args.command, errors=e.error_count())
        sys.stderr.write(f"error: invalid input: {e}\n")
        return EXIT_ERROR
    except (AlgebraError, ValueError) as e:
        logger.debug("command failed", command=args.command, error=str(e))
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
    except (OSError, KeyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
