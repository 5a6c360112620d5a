"""The vk command line tool.

Subcommands: analyze (agreement / contextuality reports), infer (project a
knowledgebase combination onto a query), list-builtins, and verify (re-check
an emitted report against its input). Exit codes: 0 for a completed analysis
regardless of verdict, 2 for unusable input, 3 for capability or resource
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from .algebra import Knowledgebase
from .builtins import BUILTINS, builtin
from .contextuality import EmpiricalModel
from .core import NONNEG_RATIONAL, enumerate_assignments
from .documents import (
    CSPDocumentPayload,
    ParsedInput,
    canonical_json,
    document_for,
    format_rational,
    parse_document_text,
)
from .errors import (
    ArgumentError,
    CapabilityError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    ValkitError,
)
from .inference import InferenceProblem, cell_limit_from_env, run_solver
from .logic import csp_to_knowledgebase
from .potentials import Potential
from .relations import Relation
from .reports import build_report, verify_report

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _load_input(source: str) -> tuple[ParsedInput, str]:
    """Resolve a path or builtin:NAME into a parsed input plus its content hash."""
    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        payload = builtin(name)
        document = document_for(payload)
        kind = document["kind"]
        parsed = ParsedInput(kind, payload, document)
        digest = hashlib.sha256(canonical_json(document).encode("utf-8")).hexdigest()
        return parsed, digest
    try:
        with open(source, "rb") as handle:
            raw = handle.read()
    except OSError as err:
        raise ParseError(f"cannot read {source}: {err.strerror}") from None
    parsed = parse_document_text(raw.decode("utf-8"))
    return parsed, hashlib.sha256(raw).hexdigest()


def _human_analysis(doc: dict) -> list[str]:
    lines = []
    analysis = doc["analysis"]
    if "no-signalling" in analysis:
        lines.append(f"no-signalling: {analysis['no-signalling']['verdict']}")
        if analysis.get("class") is None:
            lines.append("class: not classified (signalling model)")
            return lines
        lines.append(f"class: {analysis['class']}")
        strong = analysis["strong"]["contextual"]
        logical = analysis["logical"]["contextual"]
        lines.append(f"strongly contextual: {'yes' if strong else 'no'}")
        lines.append(f"logically contextual: {'yes' if logical else 'no'}")
        if analysis.get("probabilistic") is not None:
            pc = analysis["probabilistic"]["contextual"]
            lines.append(f"probabilistically contextual: {'yes' if pc else 'no'}")
        lines.append(f"gamma size: {analysis['gamma']['size']}")
    else:
        local = analysis["local"]["verdict"]
        lines.append(f"local agreement: {local}")
        if local == "fail":
            lines.append(f"  disagreeing pair: {analysis['local']['pair']}")
        g = analysis["global"]
        if g["verdict"] == "agree":
            lines.append("global agreement: agree")
        elif "witness-index" in g:
            lines.append(f"global agreement: disagree (witness member {g['witness-index']})")
        else:
            lines.append("global agreement: disagree (infeasibility certificate)")
        complete = analysis["complete-disagreement"]
        lines.append(f"complete disagreement: {'yes' if complete else 'no'}")
    return lines


def cmd_analyze(args) -> int:
    parsed, digest = _load_input(args.source)
    cell_limit = args.limit if args.limit is not None else cell_limit_from_env()
    started = time.perf_counter()
    report = build_report(args.source, digest, parsed, method=args.method, cell_limit=cell_limit)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    if args.json:
        sys.stdout.write(canonical_json(report))
    else:
        print(f"source: {args.source}")
        print(f"kind: {parsed.kind}")
        for line in _human_analysis(report):
            print(line)
        print(f"time: {elapsed_ms:.1f} ms")
    return EXIT_OK


def _infer_knowledgebase(parsed: ParsedInput) -> Knowledgebase:
    if isinstance(parsed.payload, EmpiricalModel):
        return parsed.payload.knowledgebase()
    if isinstance(parsed.payload, CSPDocumentPayload):
        return csp_to_knowledgebase(parsed.payload.csp, parsed.payload.covers)
    return parsed.payload


def cmd_infer(args) -> int:
    parsed, _ = _load_input(args.source)
    kb = _infer_knowledgebase(parsed)
    query = frozenset(name.strip() for name in args.query.split(",") if name.strip())
    cell_limit = args.limit if args.limit is not None else cell_limit_from_env()
    order = None
    if args.order:
        order = tuple(name.strip() for name in args.order.split(","))
    problem = InferenceProblem(kb, query)
    result = run_solver(problem, method=args.method, cell_limit=cell_limit, order=order)
    names = sorted(query)
    if args.json:
        if isinstance(result, Relation):
            payload = {
                "query": names,
                "type": "relation",
                "tuples": [list(t.values_in(names)) for t in result.sorted_tuples()],
            }
        else:
            payload = {
                "query": names,
                "type": "potential",
                "values": {
                    ",".join(a.values_in(names)): _format_value(result, a)
                    for a in enumerate_assignments(result.domain, kb.universe)
                },
            }
        sys.stdout.write(canonical_json(payload))
        return EXIT_OK
    print(f"query: {','.join(names)}")
    if isinstance(result, Relation):
        print(f"tuples: {len(result.tuples)}")
        for t in result.sorted_tuples():
            print("  " + ",".join(t.values_in(names)))
    else:
        for a in enumerate_assignments(result.domain, kb.universe):
            print(f"  {','.join(a.values_in(names))} -> {_format_value(result, a)}")
    return EXIT_OK


def _format_value(potential: Potential, assignment) -> int | str:
    value = potential.table[assignment]
    if potential.semiring == NONNEG_RATIONAL:
        return format_rational(Fraction(value))
    return int(value)


def cmd_list_builtins(args) -> int:
    for spec in BUILTINS:
        if args.describe:
            print(f"{spec.name:12} {spec.kind:16} {spec.summary}")
        else:
            print(spec.name)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.report, "rb") as handle:
            raw = handle.read()
    except OSError as err:
        raise ParseError(f"cannot read {args.report}: {err.strerror}") from None
    try:
        report = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid report JSON: {err.msg}", line=err.lineno, column=err.colno) from None
    if not isinstance(report, dict):
        raise ParseError("report must be a JSON object")
    parsed, digest = _load_input(args.source)
    problems = verify_report(report, parsed, digest)
    if problems:
        for problem in problems:
            print(f"FAIL: {problem}", file=sys.stderr)
        return 1
    print(f"ok: report verifies against {args.source}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vk",
        description="Agreement and contextuality analysis for valuation-algebra knowledgebases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="classify a model or knowledgebase and emit a report")
    analyze.add_argument("source", help="input file or builtin:NAME (see list-builtins)")
    analyze.add_argument("--json", action="store_true", help="emit the machine-readable report")
    analyze.add_argument("--method", choices=("fusion", "naive"), default="fusion")
    analyze.add_argument("--limit", type=int, default=None, help="intermediate-table cell limit")
    analyze.set_defaults(func=cmd_analyze)

    infer = sub.add_parser("infer", help="project the combined knowledgebase onto a query")
    infer.add_argument("source", help="input file or builtin:NAME")
    infer.add_argument("--query", required=True, help="comma-separated query variables")
    infer.add_argument("--method", choices=("fusion", "naive"), default="fusion")
    infer.add_argument("--order", default=None, help="comma-separated elimination order (fusion only)")
    infer.add_argument("--limit", type=int, default=None, help="intermediate-table cell limit")
    infer.add_argument("--json", action="store_true")
    infer.set_defaults(func=cmd_infer)

    listing = sub.add_parser("list-builtins", help="list the built-in models and knowledgebases")
    listing.add_argument("--describe", action="store_true")
    listing.set_defaults(func=cmd_list_builtins)

    verify = sub.add_parser("verify", help="re-check a report against its input")
    verify.add_argument("report", help="report JSON produced by analyze --json")
    verify.add_argument("source", help="the input file or builtin:NAME the report was produced from")
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as err:
        print(f"error: {err.message}{err.location()}", file=sys.stderr)
        return EXIT_INPUT
    except (CapabilityError, ResourceLimitError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ArgumentError, PreconditionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ValkitError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
