"""Command-line interface: validate, compile, simulate, oracle, report.

Inputs are network document paths; the bundled fixture ids (``oil4`` and
friends) are accepted as shorthand. Exit codes: 0 success, 1 validation or
acceptance failure, 2 usage error, 3 internal error. All output is
deterministic for a given seed, taken from --seed, then the QBN_SEED
environment variable, then 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import fixtures
from .circuit import CircuitError, budget, gate_census, to_qasm
from .compiler import CompileOptions, compile_network
from .network import ParseError, ValidationError, parse_network
from .oracle import exact_marginal
from .simulate import RunReport, exact_node_marginals, run_experiment

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


def _load_network(spec: str):
    path = Path(spec)
    if not path.exists() and spec in fixtures.FIXTURE_IDS:
        path = fixtures.fixture_path(spec)
    if not path.exists():
        raise UsageError(f"no such file or fixture: {spec}")
    return parse_network(path.read_text())


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QBN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"QBN_SEED must be an integer, got {env!r}")
    return 0


def _emit(args, text: str, structured: str) -> None:
    """Print per --format; --out additionally stores the structured form."""
    chosen = structured if args.format == "structured" else text
    print(chosen, end="" if chosen.endswith("\n") else "\n")
    if args.out:
        Path(args.out).write_text(structured)


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def cmd_validate(args) -> int:
    try:
        _load_network(args.network)
    except ValidationError as exc:
        for msg in exc.violations:
            print(f"invalid: {msg}", file=sys.stderr)
        return EXIT_FAIL
    print("ok")
    return EXIT_OK


def _marginal_table(rows) -> str:
    lines = [f"{'Value':<12} {'Probability':>11}"]
    for row in rows:
        for st in row["states"]:
            lines.append(f"{row['name'] + '=' + st['state']:<12} {st['p']:>11.4f}")
    return "\n".join(lines) + "\n"


def cmd_oracle(args) -> int:
    bn = _load_network(args.network)
    rows = []
    for node in bn.nodes:
        probs = exact_marginal(bn, node.name)
        rows.append({"name": node.name,
                     "states": [{"state": s, "p": float(p)} for s, p in zip(node.states, probs)]})
    _emit(args, _marginal_table(rows), json.dumps({"nodes": rows}, indent=2) + "\n")
    return EXIT_OK


def cmd_compile(args) -> int:
    bn = _load_network(args.network)
    circuit = compile_network(bn, CompileOptions(lowering_level=args.level))
    plan = budget(bn)
    census = gate_census(circuit)
    print(f"qubits: {plan.total} ({plan.node_qubits} node + {plan.ancilla_qubits} ancilla)")
    print("gates: " + ", ".join(f"{k}={v}" for k, v in sorted(census.items()) if v))
    if args.out:
        Path(args.out).write_text(to_qasm(circuit))
        print(f"wrote {args.out}")
    return EXIT_OK


def _report(bn, args, seed: int) -> RunReport:
    circuit = compile_network(bn, CompileOptions(lowering_level=args.level))
    return run_experiment(circuit, runs=args.runs, shots=args.shots, alpha=args.alpha, seed=seed)


def cmd_simulate(args) -> int:
    bn = _load_network(args.network)
    seed = _resolve_seed(args)
    if args.exact:
        circuit = compile_network(bn, CompileOptions(lowering_level=args.level))
        margs = exact_node_marginals(circuit)
        rows = [{"name": n,
                 "states": [{"state": s, "p": float(p)}
                            for s, p in zip(circuit.state_labels[n], est.probabilities)]}
                for n, est in margs.items()]
        _emit(args, _marginal_table(rows), json.dumps({"nodes": rows}, indent=2) + "\n")
        return EXIT_OK
    if args.runs < 2:
        raise UsageError("--runs must be at least 2 (confidence intervals need a spread)")
    report = _report(bn, args, seed)
    label = f"{int((1 - args.alpha) * 100)}% CI"
    lines = [f"{'Value':<12} {'Mean':>8} {'SD':>8} {label:>20}"]
    for est in report.estimates:
        ci = f"[{_fmt(est.ci_low)}, {_fmt(est.ci_high)}]"
        lines.append(f"{est.node + '=' + est.state:<12} {_fmt(est.mean):>8} {_fmt(est.sd):>8} {ci:>20}")
    _emit(args, "\n".join(lines) + "\n", report.to_json() + "\n")
    return EXIT_OK


def cmd_report(args) -> int:
    bn = _load_network(args.network)
    seed = _resolve_seed(args)
    if args.runs < 2:
        raise UsageError("--runs must be at least 2 (confidence intervals need a spread)")
    report = _report(bn, args, seed)
    exact = {node.name: exact_marginal(bn, node.name) for node in bn.nodes}
    state_index = {node.name: {s: i for i, s in enumerate(node.states)} for node in bn.nodes}

    all_covered = True
    rows = []
    for est in report.estimates:
        reference = float(exact[est.node][state_index[est.node][est.state]])
        covered = est.ci_low <= reference <= est.ci_high
        all_covered = all_covered and covered
        rows.append((est, reference, covered))

    doc = {
        "runs": report.runs, "shots": report.shots, "alpha": report.alpha,
        "seed": report.base_seed, "generator": report.generator,
        "pass": all_covered,
        "states": [
            {"node": est.node, "state": est.state, "exact": ref,
             "mean": est.mean, "sd": est.sd, "ci": [est.ci_low, est.ci_high],
             "covered": covered}
            for est, ref, covered in rows
        ],
    }
    label = f"{int((1 - args.alpha) * 100)}% CI"
    lines = [f"{'Value':<12} {'Exact':>8} {'Mean':>8} {'SD':>8} {label:>20}  {'Covered'}"]
    for est, ref, covered in rows:
        ci = f"[{_fmt(est.ci_low)}, {_fmt(est.ci_high)}]"
        lines.append(f"{est.node + '=' + est.state:<12} {_fmt(ref):>8} {_fmt(est.mean):>8} "
                     f"{_fmt(est.sd):>8} {ci:>20}  {'yes' if covered else 'NO'}")
    lines.append("result: " + ("pass" if all_covered else "fail"))
    _emit(args, "\n".join(lines) + "\n", json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if all_covered else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbnc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, sampling=True, level=True):
        p.add_argument("network", help="network document path or bundled fixture id")
        if level:
            p.add_argument("--level", choices=["mcry", "elementary", "full"], default="elementary")
        p.add_argument("--out", default=None, help="write output to this path")
        p.add_argument("--format", choices=["text", "structured"], default="text")
        if sampling:
            p.add_argument("--shots", type=int, default=8192)
            p.add_argument("--runs", type=int, default=10)
            p.add_argument("--alpha", type=float, default=0.05)
            p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("validate", help="check a network document")
    p.add_argument("network")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="exact marginals by classical enumeration")
    add_common(p, sampling=False, level=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compile", help="compile to a circuit; print budget and gate census")
    add_common(p, sampling=False)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="compile, sample, and report marginal estimates")
    add_common(p)
    p.add_argument("--exact", action="store_true", help="statevector marginals, no sampling")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="compare sampled estimates against exact inference")
    add_common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, CircuitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
