"""Command-line front end.

Every subcommand is a thin client over the service handlers, so the HTTP
surface and the terminal surface cannot drift apart.  Exit codes: 1 for
unreadable input (bad JSON, missing files, bad usage), 2 for schema or
order-axiom violations and failed preconditions, 3 for a tripped
enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .io import DocumentError, to_dot
from .itree import DEFAULT_MAX_ENUM, EnumerationCapError
from .poset import OrderViolationError
from .service.app import (
    _to_poset,
    handle_census,
    handle_decompose,
    handle_gadget,
    handle_intervals,
    handle_priority,
    handle_separate,
    handle_validate,
)
from .service.models import (
    CensusRequest,
    DecomposeRequest,
    GadgetMeta,
    GadgetRequest,
    IntervalsRequest,
    PosetDoc,
    PriorityRequest,
    PriorityRule,
    SeparateRequest,
    ValidateRequest,
)

FAMILIES = (
    "range-strong",
    "sep",
    "two-chain",
    "truefalse",
    "omega-omegastar",
    "antichain-ext",
    "wkl",
)


class _Parser(argparse.ArgumentParser):
    # usage problems are parse errors: exit 1, not argparse's default 2
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_code_on_error(message))

    def exit_code_on_error(self, message: str) -> int:
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return 1


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_document(path: str) -> dict:
    doc = json.loads(_read_text(path))
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    return doc


def _poset_doc(doc: dict) -> PosetDoc:
    known = {k: v for k, v in doc.items() if k in ("elements", "leq", "closed")}
    try:
        return PosetDoc(**known)
    except ValueError as err:
        raise DocumentError(str(err)) from None


def _csv_ids(text: str) -> list[int]:
    text = text.strip().lstrip("[").rstrip("]").strip()
    if not text:
        return []
    return [int(tok) for tok in text.split(",")]


def _emit(obj: object) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_validate(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    resp = handle_validate(ValidateRequest(poset=_poset_doc(doc)))
    if not resp.valid:
        v = resp.violation
        if args.format == "json":
            _emit(resp.model_dump(exclude_none=True))
        else:
            print(f"invalid: {v.axiom} witness {tuple(v.witness)}")
        return 2
    if args.format == "json":
        _emit(resp.model_dump(exclude_none=True))
    elif args.format == "dot":
        sys.stdout.write(to_dot(_to_poset(_poset_doc(doc))))
    else:
        print(f"valid: {resp.n} elements")
        print(f"ids: {' '.join(map(str, resp.ids))}")
        print(f"maximal: {' '.join(map(str, resp.maximal))}")
        print(f"minimal: {' '.join(map(str, resp.minimal))}")
    return 0


def cmd_intervals(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    cap = args.max_enum
    if cap is None:
        env = os.environ.get("POSETS_MAX_ENUM")
        cap = int(env) if env else DEFAULT_MAX_ENUM
    mode = "enumerate" if args.enumerate else "count"
    resp = handle_intervals(
        IntervalsRequest(poset=_poset_doc(doc), mode=mode, max_enum=cap)
    )
    if args.format == "json":
        _emit(resp.model_dump(exclude_none=True))
    elif mode == "count":
        print(resp.count)
    else:
        for ival in resp.intervals:
            print(" ".join(map(str, ival)))
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    meta = doc.get("gadget")
    req = DecomposeRequest(
        poset=_poset_doc(doc),
        gadget=None if meta is None else GadgetMeta(**meta),
    )
    resp = handle_decompose(req)
    if args.format == "json":
        _emit(resp.model_dump(exclude_none=True))
        return 0
    print(f"witness: {' '.join(map(str, resp.witness))}")
    for part in resp.parts:
        print(f"part: {' '.join(map(str, part))}")
    if resp.decoder is not None:
        if resp.decoded is not None:
            print(f"decoded: {' '.join(map(str, resp.decoded))}")
        for k in sorted(resp.decoder):
            print(f"decoder {k}: {resp.decoder[k]}")
    return 0


def cmd_separate(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    req = SeparateRequest(
        poset=_poset_doc(doc),
        a=_csv_ids(args.a),
        b=_csv_ids(args.b),
        depth=args.depth,
    )
    resp = handle_separate(req)
    if args.format == "json":
        _emit(resp.model_dump(exclude_none=True))
        return 0
    print(f"interval: {' '.join(map(str, resp.interval))}")
    if resp.tree is not None:
        print(f"tree: {''.join(map(str, resp.tree))}")
    return 0


def cmd_gadget(args: argparse.Namespace) -> int:
    req = GadgetRequest(
        family=args.family,
        f=_csv_ids(args.f),
        g=None if args.g is None else _csv_ids(args.g),
        horizon=args.n,
        copies=args.copies,
    )
    resp = handle_gadget(req)
    if args.format == "dot":
        sys.stdout.write(to_dot(_to_poset(_poset_doc(resp.document))))
    elif args.format == "text":
        print(f"family: {resp.family}")
        print(f"horizon: {resp.horizon}")
        print(f"elements: {len(resp.document['elements'])}")
        for name in sorted(resp.roles, key=resp.roles.get):
            print(f"role {name}: {resp.roles[name]}")
    else:
        _emit(resp.document)
    return 0


def cmd_priority(args: argparse.Namespace) -> int:
    rules = None
    if args.ev_file is not None:
        raw = json.loads(_read_text(args.ev_file))
        items = raw.get("rules", []) if isinstance(raw, dict) else raw
        rules = [PriorityRule(**item) for item in items]
    req = PriorityRequest(
        horizon=args.horizon,
        stages=args.stages,
        rules=rules,
        slice_size=args.slice,
    )
    resp = handle_priority(req)
    if args.format == "json":
        _emit(resp.model_dump())
        return 0
    t = resp.transcript
    print(f"horizon: {t['horizon']}")
    print(f"stages: {t['final_stage']}")
    print(f"activations: {len(t['activations'])}")
    for a in t["activations"]:
        print(
            f"  witness {a['witness']} stage {a['stage']} {a['polarity']}"
            f" (requirement {a['requirement']})"
        )
    v = resp.verify
    print(f"axioms: {'pass' if v['axioms']['pass'] else 'FAIL'}")
    print(f"x antichain: {'pass' if v['x_antichain']['pass'] else 'FAIL'}")
    print(f"log properties: {'pass' if v['properties']['pass'] else 'FAIL'}")
    print(f"verify: {'pass' if v['all_pass'] else 'FAIL'}")
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    req = CensusRequest(
        max_n=args.max_n,
        factorization=not args.no_factorization,
        restriction=not args.no_restriction,
        random_count=args.random,
        seed=args.seed,
    )
    resp = handle_census(req)
    if args.format == "json":
        _emit(resp.report)
        return 0
    report = resp.report
    cols = ["n", "classes", "decomposition_violations"]
    if not args.no_factorization:
        cols.append("factorization_violations")
    if not args.no_restriction:
        cols.append("restriction_violations")
    header = {"n": "n", "classes": "classes", "decomposition_violations": "decomp",
              "factorization_violations": "factor", "restriction_violations": "restrict"}
    print("  ".join(f"{header[c]:>8}" for c in cols))
    for row in report["rows"]:
        print("  ".join(f"{row[c]:>8}" for c in cols))
    if "random" in report:
        r = report["random"]
        print(
            f"random: {r['count']} posets, sizes {r['sizes'][0]}-{r['sizes'][1]},"
            f" seed {r['seed']}, decomposition violations {r['decomposition_violations']}"
        )
    print(f"total violations: {report['total_violations']}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="downsets", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser, default: str = "text") -> None:
        p.add_argument("--format", choices=("json", "dot", "text"), default=default)

    p = sub.add_parser("validate", help="check a poset document against the order axioms")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("intervals", help="count or list the initial intervals")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--enumerate", action="store_true")
    p.add_argument("--max-enum", type=int, default=None)
    add_format(p)
    p.set_defaults(fn=cmd_intervals)

    p = sub.add_parser("decompose", help="ideal decomposition; decodes gadget documents")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("separate", help="least initial interval containing A avoiding B")
    p.add_argument("file")
    p.add_argument("a", help="comma-separated ids")
    p.add_argument("b", nargs="?", default="", help="comma-separated ids")
    p.add_argument("--depth", type=int, default=None)
    add_format(p)
    p.set_defaults(fn=cmd_separate)

    p = sub.add_parser("gadget", help="build an encoding instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--f", default="", help="comma-separated injective values")
    p.add_argument("--g", default=None, help="second table for sep and wkl")
    p.add_argument("--n", type=int, default=None, help="horizon override")
    p.add_argument("--copies", action="store_true")
    add_format(p, default="json")
    p.set_defaults(fn=cmd_gadget)

    p = sub.add_parser("priority", help="run the finite-injury simulator")
    p.add_argument("horizon", type=int)
    p.add_argument("stages", type=int)
    p.add_argument("ev_file", nargs="?", default=None, help="evaluator rules JSON")
    p.add_argument("--slice", type=int, default=None, help="verification slice size")
    add_format(p)
    p.set_defaults(fn=cmd_priority)

    p = sub.add_parser("census", help="identity sweep over all small posets")
    p.add_argument("max_n", type=int)
    p.add_argument("--random", type=int, default=0, help="extra random posets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-factorization", action="store_true")
    p.add_argument("--no-restriction", action="store_true")
    add_format(p)
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "format", None) == "dot" and args.fn not in (cmd_validate, cmd_gadget):
        print("downsets: error: --format dot applies to validate and gadget", file=sys.stderr)
        return 1
    try:
        return args.fn(args)
    except json.JSONDecodeError as err:
        print(f"downsets: parse error: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"downsets: {err}", file=sys.stderr)
        return 1
    except DocumentError as err:
        print(f"downsets: document error: {err}", file=sys.stderr)
        return 2
    except OrderViolationError as err:
        print(
            f"downsets: order violation: {err.axiom} witness {tuple(err.witness)}",
            file=sys.stderr,
        )
        return 2
    except EnumerationCapError as err:
        print(f"downsets: {err}", file=sys.stderr)
        return 3
    except (ValueError, RuntimeError) as err:
        print(f"downsets: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
