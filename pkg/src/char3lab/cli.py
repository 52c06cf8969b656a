"""Command-line front end: run audits, compute permanents both ways,
search bearing points, and build fields.

JSON goes to stdout (or a --json file); the human summary goes to stderr.
Exit codes: 0 = all requested MUST-PASS checks ok, 1 = a MUST-PASS identity
failed, 2 = usage error. Theorem findings (fail verdicts on non-MUST-PASS
identities) never change the exit code; they are the audit's subject matter.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import Char3Error
from .field import FieldSpec, make_field
from .linalg import matrix_from_record, matrix_to_record


def _parse_field(text: str) -> FieldSpec:
    """Accept `3^q` (deterministic lex-smallest modulus) or the full
    `3^q/[c0,...,1]` spec text."""
    if "/" in text:
        return FieldSpec.parse(text)
    base, _, q = text.partition("^")
    if base != "3" or not q.isdigit():
        raise ValueError(f"bad field spec {text!r}; expected 3^q")
    return make_field(int(q))


def _parse_dims(text: str | None) -> dict:
    """`n=3,m=2` -> {"n": 3, "m": 2}."""
    dims = {}
    if not text:
        return dims
    for part in text.split(","):
        key, _, val = part.partition("=")
        if not key or not val or not val.lstrip("-").isdigit():
            raise ValueError(f"bad dims entry {part!r}; expected name=int")
        dims[key.strip()] = int(val)
    return dims


def _emit(payload: dict, json_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if json_path:
        with open(json_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _summary(line: str) -> None:
    print(line, file=sys.stderr)


def _cmd_check(args) -> int:
    from .audit import check_identity, replay_witness
    from .audit.catalog import CATALOG

    if args.witness:
        with open(args.witness) as fh:
            rec = json.load(fh)
        identity_id = args.id or rec.get("identity_id")
        if identity_id is None:
            _summary("check --witness: no --id given and the witness file "
                     "carries no identity_id")
            return 2
        witness = rec.get("witness", rec)
        verdict = replay_witness(identity_id, witness,
                                 dims=_parse_dims(args.dims))
        verdicts = [verdict]
    else:
        if not args.id:
            _summary("check: --id is required (or --witness)")
            return 2
        if args.id not in CATALOG:
            _summary(f"check: unknown identity {args.id!r}; known: "
                     + ", ".join(sorted(CATALOG)))
            return 2
        spec = _parse_field(args.field)
        dims = _parse_dims(args.dims)
        verdicts = [check_identity(args.id, dims=dims, spec=spec,
                                   seed=f"{args.seed}:{trial}")
                    for trial in range(args.trials)]
    payload = {"schema_version": 1, "verdicts": [v.to_dict() for v in verdicts]}
    _emit(payload, args.json)
    statuses = [v.status for v in verdicts]
    _summary(f"check {verdicts[0].identity_id}: "
             + ", ".join(f"{s}={statuses.count(s)}"
                         for s in sorted(set(statuses))))
    if any(v.must_pass and v.status != "pass" for v in verdicts):
        return 1
    return 0


def _cmd_check_all(args) -> int:
    from .audit import audit_run, default_plan

    if args.plan:
        with open(args.plan) as fh:
            raw = json.load(fh)
        plan = [(e["id"], e.get("dims", {}), e.get("trials", 1)) for e in raw]
    else:
        plan = default_plan()
    fields = [_parse_field(f) for f in args.field] if args.field else None
    report = audit_run(plan=plan, fields=fields, seed=args.seed)
    text = report.to_json()
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    tallies = report.tallies()
    _summary("check-all: " + ", ".join(f"{k}={v}" for k, v in
                                       sorted(tallies.items()) if v)
             + f"; must_pass_ok={report.must_pass_ok()}")
    return 0 if report.must_pass_ok() else 1


def _cmd_permanent(args) -> int:
    from .linalg import permanent_naive, permanent_ryser

    with open(args.input) as fh:
        rec = json.load(fh)
    m = matrix_from_record(rec)
    payload = {"schema_version": 1, "input": matrix_to_record(m),
               "method": args.method}
    if args.method == "ryser":
        value = permanent_ryser(m)
        payload["value"] = value.text()
    elif args.method == "naive":
        value = permanent_naive(m)
        payload["value"] = value.text()
    else:
        from .audit import permanent_via_paper
        try:
            value, trace = permanent_via_paper(
                m, seed=args.seed, definitional=args.definitional)
            payload["value"] = value.text()
            payload["trace"] = trace
        except Char3Error as exc:
            value = None
            payload["pipeline_error"] = f"{type(exc).__name__}: {exc}"
    if args.compare:
        oracle = permanent_ryser(m)
        payload["oracle"] = oracle.text()
        payload["verdict"] = {
            "status": "pass" if (value is not None and value == oracle)
            else "fail",
            "lhs": payload.get("value"),
            "rhs": oracle.text(),
        }
    _emit(payload, args.json)
    if "value" in payload:
        _summary(f"permanent[{args.method}] = {payload['value']}"
                 + (f" (oracle {payload['oracle']}, "
                    f"{payload['verdict']['status']})" if args.compare else ""))
    else:
        _summary(f"permanent[{args.method}]: {payload['pipeline_error']}")
    return 0


def _cmd_bearing(args) -> int:
    from .errors import NotFound
    from .neighbour import bearing_search

    spec = _parse_field(args.field)
    try:
        point = bearing_search(args.n, args.m, spec, strategy=args.strategy,
                               seed=args.seed, budget=args.budget)
        payload = {"schema_version": 1, "found": True,
                   "bearing": point.to_record()}
        _summary(f"bearing: found (jacobian_rank={point.jacobian_rank})")
    except (NotFound, Char3Error) as exc:
        payload = {"schema_version": 1, "found": False,
                   "error": f"{type(exc).__name__}: {exc}"}
        _summary(f"bearing: {payload['error']}")
    _emit(payload, args.json)
    return 0


def _cmd_field(args) -> int:
    spec = make_field(args.make)
    payload = {"schema_version": 1, "field": spec.text(),
               "modulus": list(spec.modulus)}
    _emit(payload, args.json)
    _summary(f"field 3^{args.make}: {spec.text()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="char3lab",
        description="Exact audit laboratory for characteristic-3 permanent "
                    "identities")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("check", help="audit one identity")
    p.add_argument("--id")
    p.add_argument("--dims", help="comma-separated name=int overrides")
    p.add_argument("--field", default="3^4")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", default="0")
    p.add_argument("--json", help="write the verdict JSON to this file")
    p.add_argument("--witness", help="replay a serialized fail witness file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("check-all", help="audit the whole catalog")
    p.add_argument("--plan", help="JSON plan file: [{id, dims, trials}, ...]")
    p.add_argument("--field", action="append",
                   help="field spec (repeatable); default GF(9) and GF(81)")
    p.add_argument("--seed", default="0")
    p.add_argument("--json", help="write the report JSON to this file")
    p.set_defaults(func=_cmd_check_all)

    p = sub.add_parser("permanent", help="compute a permanent from a matrix file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["ryser", "naive", "paper"],
                   default="ryser")
    p.add_argument("--compare", action="store_true",
                   help="also run the Ryser oracle and print a verdict")
    p.add_argument("--definitional", action="store_true",
                   help="pipeline: use the exponential reference evaluator")
    p.add_argument("--seed", default="0")
    p.add_argument("--json", help="write the result JSON to this file")
    p.set_defaults(func=_cmd_permanent)

    p = sub.add_parser("bearing", help="search for a constrained-region point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--field", default="3^4")
    p.add_argument("--strategy", choices=["structured", "random"],
                   default="random")
    p.add_argument("--seed", default="0")
    p.add_argument("--budget", type=int)
    p.add_argument("--json", help="write the result JSON to this file")
    p.set_defaults(func=_cmd_bearing)

    p = sub.add_parser("field", help="print the deterministic field modulus")
    p.add_argument("--make", type=int, required=True)
    p.add_argument("--json", help="write the result JSON to this file")
    p.set_defaults(func=_cmd_field)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        _summary(f"error: {exc}")
        return 2


def main() -> None:  # console-script entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
