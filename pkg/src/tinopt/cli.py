"""``tin-opt`` command line: JSON documents in, one JSON result document out.

Every result has the shape ``{"status": "ok"|"error", "payload": {...},
"diagnostics": [...]}``. Any result can be fed back where a spec, tuple or
allocation document is expected; the loaders unwrap ``payload``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, TextIO

from .evaluate import DEFAULT_P_GRID, achieved_gdof, finite_p_report, oracle_membership_scan
from .netmodel import (
    EXAMPLE_DOC,
    InstanceTooLarge,
    NetworkSpec,
    SpecError,
    allocation_to_doc,
    format_rational,
    load_json,
    parse_allocation,
    parse_spec,
    parse_tuple,
    to_rational,
    tuple_to_doc,
)
from .potential import Feasible, decide_feasibility
from .powerctl import InfeasibleAggregate, UncertifiedAllocation, allocate, best_states, natural_pi
from .region import enumerate_region, is_member, remove_redundant
from .tincheck import check_tin_optimality, check_tin_optimality_bruteforce

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


@dataclass
class CommandResult:
    status: str
    payload: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    exit_code: int = EXIT_OK
    # argparse already wrote usage or help text; nothing to print
    silent: bool = False

    def to_json(self) -> str:
        doc = {"status": self.status, "payload": self.payload, "diagnostics": self.diagnostics}
        return json.dumps(doc, indent=2, sort_keys=True)


class DomainError(Exception):
    def __init__(self, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.payload = payload or {}


class _Inputs:
    def __init__(self, stdin: TextIO):
        self.stdin = stdin
        self.stdin_used = False

    def read(self, path: str) -> Any:
        if path == "-":
            if self.stdin_used:
                raise SpecError("standard input can only be used for one argument")
            self.stdin_used = True
            text = self.stdin.read()
        else:
            try:
                with open(path) as fh:
                    text = fh.read()
            except OSError as exc:
                raise SpecError(f"cannot read {path}: {exc.strerror}") from None
        try:
            doc = load_json(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: not valid JSON ({exc})") from None
        # accept a previous command's result document
        if isinstance(doc, dict) and "payload" in doc and "status" in doc:
            doc = doc["payload"]
        return doc


def _load_spec(inputs: _Inputs, path: str, natural: bool = False) -> NetworkSpec:
    doc = inputs.read(path)
    if isinstance(doc, dict) and "spec" in doc and "alpha" not in doc:
        doc = doc["spec"]
    spec = parse_spec(doc)
    return spec.with_pi(natural_pi(spec)) if natural else spec


def _load_tuple(inputs: _Inputs, spec: NetworkSpec, path: str):
    doc = inputs.read(path)
    if isinstance(doc, dict) and "tuple" in doc:
        doc = doc["tuple"]
    return parse_tuple(spec, doc)


def _load_allocation(inputs: _Inputs, spec: NetworkSpec, path: str):
    doc = inputs.read(path)
    if isinstance(doc, dict) and "allocation" in doc:
        doc = doc["allocation"]
    return parse_allocation(spec, doc)


def _float(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_example(args, inputs) -> dict:
    return json.loads(json.dumps(EXAMPLE_DOC))


def cmd_check(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec)
    verdict = check_tin_optimality(spec)
    out = {"holds": verdict.holds, "witness": verdict.witness.to_doc() if verdict.witness else None}
    if args.bruteforce:
        brute = check_tin_optimality_bruteforce(spec)
        out["bruteforce"] = {"holds": brute.holds, "mixed_states": spec.states ** spec.users,
                             "agrees": brute == verdict}
    return out


def cmd_pi(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec)
    return {"pi": natural_pi(spec)}


def cmd_region(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec, args.natural_pi)
    ineqs = enumerate_region(spec)
    if not args.raw:
        ineqs = remove_redundant(ineqs)
    out = {
        "minimal": not args.raw,
        "count": len(ineqs),
        "variables": [{"user": k + 1, "order": m + 1} for k, m in spec.variables()],
        "inequalities": [q.to_doc() for q in ineqs],
    }
    if args.check:
        t = _load_tuple(inputs, spec, args.check)
        ok, bad = is_member(ineqs, t, spec)
        out["membership"] = {"member": ok, "violated": bad.to_doc() if bad else None}
    return out


def cmd_member(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec, args.natural_pi)
    t = _load_tuple(inputs, spec, args.tuple)
    ok, bad = is_member(remove_redundant(enumerate_region(spec)), t, spec)
    return {"member": ok, "violated": bad.to_doc() if bad else None}


def cmd_feasible(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec, args.natural_pi)
    t = _load_tuple(inputs, spec, args.tuple)
    verdict = decide_feasibility(spec, t)
    if isinstance(verdict, Feasible):
        return {"feasible": True, "allocation": allocation_to_doc(verdict.allocation)}
    return {"feasible": False, "circuit": verdict.circuit.to_doc()}


def cmd_allocate(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec, args.natural_pi)
    t = _load_tuple(inputs, spec, args.tuple)
    aux = [m + 1 for m in best_states(spec)]
    try:
        alloc = allocate(spec, t)
    except InfeasibleAggregate as exc:
        raise DomainError(str(exc), {"auxiliary_states": aux, "circuit": exc.circuit.to_doc()}) from None
    except UncertifiedAllocation as exc:
        raise DomainError(str(exc), {"auxiliary_states": aux}) from None
    return {
        "auxiliary_states": aux,
        "allocation": allocation_to_doc(alloc),
        "achieved": tuple_to_doc(spec, achieved_gdof(spec, alloc)),
    }


def cmd_evaluate(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec, args.natural_pi)
    alloc = _load_allocation(inputs, spec, args.alloc)
    try:
        grid = [float(p) for p in args.p.split(",")] if args.p else list(DEFAULT_P_GRID)
    except ValueError:
        raise SpecError(f"--p expects a comma separated list of numbers, got {args.p!r}") from None
    try:
        reports = finite_p_report(spec, alloc, grid, scaling=args.scaling)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    achieved = achieved_gdof(spec, alloc)
    variables = spec.variables()
    out_reports = []
    for rep in reports:
        out_reports.append({
            "P": _float(rep.P),
            "rate": [[_float(v) for v in row] for row in rep.rate],
            "normalized": [[_float(v) for v in row] for row in rep.normalized],
            "normalized_vars": [_float(rep.normalized[k][m]) for k, m in variables],
            "sinr": [{"user": k + 1, "order": m + 1,
                      "states": {str(s + 1): _float(v) for s, v in sorted(states.items())}}
                     for (k, m), states in sorted(rep.sinr.items())],
        })
    return {"achieved": tuple_to_doc(spec, achieved), "ordered": alloc.is_ordered(),
            "scaling": args.scaling, "reports": out_reports}


def cmd_oracle(args, inputs) -> dict:
    spec = _load_spec(inputs, args.spec, args.natural_pi)
    step = to_rational(args.step, "--step")
    if step <= 0:
        raise SpecError("must be positive", "--step")
    result = oracle_membership_scan(spec, step, cap=args.cap, seed=args.seed)

    def rec_doc(rec):
        return {"vars": [format_rational(v) for v in rec.values], "member": rec.member,
                "feasible": rec.feasible, "certified": rec.certified}

    return {
        "step": format_rational(step),
        "grid_size": result.grid_size,
        "points": len(result.records),
        "feasible": result.n_feasible,
        "disagreements": [rec_doc(r) for r in result.disagreements],
        "uncertified": [rec_doc(r) for r in result.uncertified],
    }


_DOCUMENTS = {"spec": "network", "tuple": "GDoF tuple", "alloc": "power allocation"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tin-opt",
        description="GDoF region, TIN-optimality and power allocation for multi-state interference networks.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def add(name, func, help_text, *files, natural=True):
        p = sub.add_parser(name, help=help_text)
        for f in files:
            p.add_argument(f, help=f"{_DOCUMENTS[f]} document ('-' for stdin)")
        if natural:
            p.add_argument("--natural-pi", action="store_true",
                           help="replace the document's decoding thresholds by the capability ranking")
        p.set_defaults(func=func)
        return p

    add("example", cmd_example, "print the built-in 3-user, 2-state example network", natural=False)
    p = add("check", cmd_check, "TIN-optimality verdict", "spec", natural=False)
    p.add_argument("--bruteforce", action="store_true", help="also enumerate every mixed state")
    add("pi", cmd_pi, "capability-ranked decoding thresholds", "spec", natural=False)
    p = add("region", cmd_region, "GDoF region inequalities", "spec")
    p.add_argument("--raw", action="store_true", help="skip redundancy removal")
    p.add_argument("--check", metavar="TUPLE", help="also test membership of a tuple document")
    add("member", cmd_member, "region membership of a GDoF tuple", "spec", "tuple")
    add("feasible", cmd_feasible, "potential-graph feasibility with certificate", "spec", "tuple")
    add("allocate", cmd_allocate, "power allocation via the auxiliary best-state network", "spec", "tuple")
    p = add("evaluate", cmd_evaluate, "achieved GDoF and finite-power rates of an allocation", "spec", "alloc")
    p.add_argument("--p", help="comma separated nominal powers (default 1e4,1e6,1e8,1e10)")
    p.add_argument("--scaling", choices=["minimal", "uniform"], default="minimal",
                   help="per-user power back-off at finite P")
    p = add("oracle", cmd_oracle, "grid scan comparing region membership and feasibility", "spec")
    p.add_argument("--step", default="0.5")
    p.add_argument("--cap", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv: Sequence[str], stdin: Optional[TextIO] = None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT
        status = "ok" if code == 0 else "error"
        return CommandResult(status, {}, ["invalid command line; see tin-opt --help"] if code else [],
                             code, silent=True)
    inputs = _Inputs(stdin if stdin is not None else sys.stdin)
    files = [getattr(args, name, None) for name in ("spec", "tuple", "alloc", "check")]
    if files.count("-") > 1:
        return CommandResult("error", {}, ["standard input can only be used for one argument"], EXIT_INPUT)
    try:
        payload = args.func(args, inputs)
    except (SpecError, InstanceTooLarge) as exc:
        return CommandResult("error", {}, [str(exc)], EXIT_INPUT)
    except DomainError as exc:
        return CommandResult("error", exc.payload, [str(exc)], EXIT_DOMAIN)
    return CommandResult("ok", payload, [])


def main(argv: Optional[Sequence[str]] = None) -> None:
    result = run(sys.argv[1:] if argv is None else argv)
    if not result.silent:
        if result.status == "error":
            print(f"tin-opt: {result.diagnostics[0]}", file=sys.stderr)
        print(result.to_json())
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
