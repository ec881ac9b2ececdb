"""Command-line front end: ``qlr gen | solve | bench | gadget | version``.

Exit codes: 0 success, 1 bound violation or failed validation/certificate,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import DEFAULT_DELTAS, SUITES, resolve_threads, run_suite
from .core import Instance, InstanceError, evaluate, feasibility, validate_instance
from .evc import solve_evc
from .exact import EigenSolverError, OracleCapError, ground_energy
from .gadgets import TIMInstance, gadget_convergence
from .generate import GRAPH_SHAPES, PRNG_NAME, PSI_FORMS, random_instance
from .io import dumps, instance_to_json, load_instance, state_to_json, write_json
from .localratio import certify, solve_lr

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class CLIError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _delta_list(text: str | None):
    if not text:
        return list(DEFAULT_DELTAS)
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise CLIError(f"bad --delta-list {text!r}") from exc
    if not vals or any(v <= 0 for v in vals):
        raise CLIError("--delta-list needs positive values")
    return vals


# --- commands -----------------------------------------------------------------------


def cmd_gen(args) -> int:
    if not 0 < args.density <= 1:
        raise CLIError("--density must lie in (0, 1]")
    if args.n < 1:
        raise CLIError("--n must be at least 1")
    try:
        inst = random_instance(args.kind, args.n, args.density, args.seed, args.index,
                               psi=args.psi, shape=args.graph, diagonal=args.diagonal)
    except ValueError as exc:
        raise CLIError(str(exc)) from exc
    _emit(dumps(instance_to_json(inst)), args.out)
    return EXIT_OK


def _load(path: str):
    try:
        return load_instance(path)
    except FileNotFoundError as exc:
        raise CLIError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: invalid JSON ({exc})") from exc


def _run_exact(inst: Instance, report: dict) -> float | None:
    try:
        rep = ground_energy(inst)
    except (OracleCapError, EigenSolverError) as exc:
        report["exact_error"] = str(exc)
        return None
    report["spectrum"] = rep.to_json()
    if rep.infeasible:
        report["exact_error"] = "no feasible state"
        return None
    report["exact"] = rep.ground
    return rep.ground


def cmd_solve(args) -> int:
    inst = _load(args.input)
    if isinstance(inst, TIMInstance):
        raise CLIError("kind/algo mismatch: tim instances are handled by the gadget command")
    val = validate_instance(inst)
    if not val.ok:
        sys.stderr.write("invalid instance:\n" + "".join(f"  {m}\n" for m in val.issues))
        return EXIT_VIOLATION
    report: dict = {"algo": args.algo, "kind": inst.kind}
    status = EXIT_OK
    if args.algo == "lr":
        if inst.kind not in ("tvc", "pcvc"):
            raise CLIError(f"kind/algo mismatch: lr does not apply to {inst.kind} instances")
        state, cert = solve_lr(inst)
        energy = evaluate(inst, state)
        report.update(energy=energy, state=state_to_json(state.bloch), certificate=cert.to_json())
        report["feasible"] = feasibility(inst, state, args.tol)
        if args.certify:
            cr = certify(inst, state, cert, tol=args.tol)
            report["certify"] = cr.to_json()
            if not cr.ok:
                status = EXIT_VIOLATION
    elif args.algo == "evc":
        if inst.kind != "evc":
            raise CLIError(f"kind/algo mismatch: evc solver does not apply to {inst.kind} instances")
        if args.certify:
            raise CLIError("--certify applies to the lr algorithm only")
        res = solve_evc(inst)
        energy = res.energy
        report.update(res.to_json())
    else:
        if args.certify:
            raise CLIError("--certify applies to the lr algorithm only")
        energy = _run_exact(inst, report)
        if energy is None:
            _emit(dumps(report), args.out)
            return EXIT_VIOLATION
        report["energy"] = energy
    if args.exact and args.algo != "exact":
        exact = _run_exact(inst, report)
        if exact is not None and exact > 1e-12:
            report["ratio"] = energy / exact
    _emit(dumps(report), args.out)
    return status


def cmd_bench(args) -> int:
    threads = resolve_threads(args.threads)
    res = run_suite(args.suite, args.trials, args.seed, threads, _delta_list(args.delta_list))
    _emit(res.to_csv(), args.out)
    if args.timings:
        Path(args.timings).write_text(res.timings_csv(), encoding="utf-8")
    summ = res.summary()
    sys.stderr.write(dumps(summ, indent=None))
    for f in res.failures:
        sys.stderr.write(f"violation: {f}\n")
    return EXIT_OK if res.ok else EXIT_VIOLATION


def cmd_gadget(args) -> int:
    if args.input:
        tim = _load(args.input)
        if not isinstance(tim, TIMInstance):
            raise CLIError("gadget sweep needs a tim instance")
    else:
        tim = TIMInstance(2, ((0, 1),), (1.0,), (-0.5, -0.5))
    rep = gadget_convergence(tim, _delta_list(args.delta_list), args.k, resolve_threads(args.threads))
    if args.json:
        write_json(rep.to_json(), args.json)
    _emit(rep.to_csv(), args.out)
    return EXIT_OK if rep.monotone() else EXIT_VIOLATION


def cmd_version(args) -> int:
    sys.stdout.write(f"qlr {__version__}\nprng {PRNG_NAME}\n")
    return EXIT_OK


# --- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qlr", description="Local-ratio and exact solvers for constrained 2-local Hamiltonians.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded random instance")
    g.add_argument("--kind", choices=("tvc", "pcvc", "evc"), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--density", type=float, default=0.3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--index", type=int, default=0, help="PRNG stream index")
    g.add_argument("--psi", choices=PSI_FORMS, default=None, help="evc constraint state")
    g.add_argument("--graph", choices=GRAPH_SHAPES, default="any")
    g.add_argument("--diagonal", action="store_true", help="use |1><1| projectors")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--input", required=True)
    s.add_argument("--algo", choices=("lr", "exact", "evc"), default="lr")
    s.add_argument("--exact", action="store_true", help="also run the exact oracle and report the ratio")
    s.add_argument("--certify", action="store_true", help="re-check the local-ratio certificate")
    s.add_argument("--tol", type=float, default=1e-9, help="feasibility tolerance")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark suite and write CSV")
    b.add_argument("--suite", choices=SUITES, required=True)
    b.add_argument("--trials", type=int, default=None)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--delta-list", default=None, help="comma-separated Delta values (gadget-sweep)")
    b.add_argument("--timings", default=None, help="write per-row wall times to this CSV")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("gadget", help="TIM gadget gap-convergence sweep (CSV)")
    d.add_argument("--input", default=None, help="tim instance JSON (default: 2-qubit example)")
    d.add_argument("--delta-list", default=None)
    d.add_argument("--k", type=int, default=4)
    d.add_argument("--threads", type=int, default=1)
    d.add_argument("--json", default=None, help="also write the report as JSON")
    d.add_argument("--out")
    d.set_defaults(func=cmd_gadget)

    v = sub.add_parser("version", help="print version and PRNG")
    v.set_defaults(func=cmd_version)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, InstanceError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
