"""Command-line front end: audit, anneal, compare, sample, purescan.

All randomness flows from --seed; outputs are byte-identical across reruns
and worker counts. Exit status 2 is reserved for a mathematical
counterexample (a triangle violation or a negative annealed defect).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import anneal as anneal_mod
from . import audit as audit_mod
from . import divergences as div
from .errors import DimMismatch, InvalidConfig, ParseError, QjsdError
from .states import StateSampler, linear_entropy, read_state_file, write_state_file

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 2
EXIT_USAGE = 64
EXIT_DATA = 65

log = logging.getLogger("qjsd")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _schedule_from(args, n_params: int) -> anneal_mod.AnnealSchedule:
    sched = anneal_mod.AnnealSchedule.defaults_for(n_params)
    overrides = {}
    if args.t_initial is not None:
        overrides["t_initial"] = args.t_initial
    if args.t_final is not None:
        overrides["t_final"] = args.t_final
    if args.cooling_ratio is not None:
        overrides["cooling_ratio"] = args.cooling_ratio
    if args.steps_per_temp is not None:
        overrides["steps_per_temperature"] = args.steps_per_temp
    if args.proposal_scale is not None:
        overrides["proposal_scale_ratio"] = args.proposal_scale
    if overrides:
        sched = anneal_mod.AnnealSchedule(
            steps_per_temperature=overrides.get("steps_per_temperature", sched.steps_per_temperature),
            t_initial=overrides.get("t_initial", sched.t_initial),
            t_final=overrides.get("t_final", sched.t_final),
            cooling_ratio=overrides.get("cooling_ratio", sched.cooling_ratio),
            proposal_scale_ratio=overrides.get("proposal_scale_ratio", sched.proposal_scale_ratio),
        )
    return sched.validate()


def cmd_audit(args) -> int:
    report = audit_mod.run_audit(
        dim=args.dim,
        samples=args.samples,
        seed=args.seed,
        bin_width=args.bin_width,
        tail_max=args.tail_max,
        tolerance=args.tolerance,
        mixedness_floor=args.mixedness_floor,
        workers=args.workers,
    )
    prefix = args.out or f"audit_dim{args.dim}_seed{args.seed}"
    audit_mod.write_histogram_csv(report.histogram, prefix + ".csv")
    with open(prefix + ".json", "w", encoding="utf-8") as fh:
        fh.write(_dump(audit_mod.report_to_dict(report)))
    print(
        f"audit dim={args.dim} samples={args.samples} seed={args.seed}: "
        f"violations={report.violations} min_defect={report.min_defect:.6g}"
    )
    if report.violations:
        print("TRIANGLE INEQUALITY VIOLATED; counterexample seeds are in the report", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_anneal(args) -> int:
    n_params = 6 * args.dim * args.dim
    schedule = _schedule_from(args, n_params)
    result = anneal_mod.run_anneal(
        objective=args.objective,
        dim=args.dim,
        schedule=schedule,
        seed=args.seed,
        restarts=args.restarts,
        workers=args.workers,
    )
    out = args.out or f"anneal_dim{args.dim}_seed{args.seed}.json"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_dump(anneal_mod.result_to_dict(result)))
    print(
        f"anneal dim={args.dim} objective={args.objective} seed={args.seed}: "
        f"best_objective={result.best_objective:.6g}"
    )
    if result.best_objective < -1e-9:
        print("NEGATIVE DEFECT FOUND; decoded states are in the result file", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_compare(args) -> int:
    rho = read_state_file(args.state_a)
    sigma = read_state_file(args.state_b)
    if rho.shape != sigma.shape:
        raise DimMismatch(f"state dimensions {rho.shape[0]} and {sigma.shape[0]} differ")
    table = {
        "qjsd": div.qjsd(rho, sigma),
        "qjsd_spectral": div.qjsd_spectral(rho, sigma),
        "qjsd_sqrt": div.qjsd_sqrt(rho, sigma),
        "hilbert_schmidt": div.hilbert_schmidt_distance(rho, sigma),
        "fidelity": div.fidelity(rho, sigma),
        "d_h_closed_form": div.d_h_closed_form(rho, sigma),
        "djs1_lower_bound": div.djs1_lower_bound(rho, sigma, restarts=args.restarts, seed=args.seed),
    }
    pure_cut = 1.0 - 1e-10
    if 1.0 - linear_entropy(rho) > pure_cut and 1.0 - linear_entropy(sigma) > pure_cut:
        psi = np.linalg.eigh(rho)[1][:, -1]
        phi = np.linalg.eigh(sigma)[1][:, -1]
        table["wootters"] = div.wootters_distance(psi, phi)
    sys.stdout.write(_dump(table))
    return EXIT_OK


def cmd_sample(args) -> int:
    sampler = StateSampler(args.dim, args.seed, args.mixedness_floor)
    prefix = args.out or "state"
    for i in range(args.samples):
        write_state_file(sampler.state(), f"{prefix}_{i:05d}.json")
    print(f"wrote {args.samples} state files with prefix {prefix!r}")
    return EXIT_OK


def cmd_purescan(args) -> int:
    res = div.pure_triangle_scan(args.grid_steps, args.x_steps)
    sys.stdout.write(
        _dump(
            {
                "min_g": res.min_g,
                "x": res.x,
                "y": res.y,
                "z": res.z,
                "a": [res.a.real, res.a.imag],
                "b": [res.b.real, res.b.imag],
                "grid_steps": args.grid_steps,
                "x_steps": args.x_steps,
            }
        )
    )
    return EXIT_OK if res.min_g >= -1e-12 else EXIT_COUNTEREXAMPLE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qjsd",
        description="Quantum Jensen-Shannon distances: compute, audit, anneal.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("audit", help="Monte Carlo triangle-inequality audit")
    a.add_argument("--dim", type=int, required=True)
    a.add_argument("--samples", type=int, required=True)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--bin-width", type=float, default=0.002)
    a.add_argument("--tail-max", type=float, default=0.2)
    a.add_argument("--tolerance", type=float, default=1e-9)
    a.add_argument("--mixedness-floor", type=float, default=None)
    a.add_argument("--out", help="output prefix for <out>.csv and <out>.json")
    a.set_defaults(func=cmd_audit)

    n = sub.add_parser("anneal", help="simulated-annealing defect minimization")
    n.add_argument("--dim", type=int, required=True)
    n.add_argument("--objective", choices=("single", "symmetrized"), default="single")
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--restarts", type=int, default=1)
    n.add_argument("--workers", type=int, default=1)
    n.add_argument("--t-initial", type=float, default=None)
    n.add_argument("--t-final", type=float, default=None)
    n.add_argument("--cooling-ratio", type=float, default=None)
    n.add_argument("--steps-per-temp", type=int, default=None)
    n.add_argument("--proposal-scale", type=float, default=None)
    n.add_argument("--out", help="output path for the result JSON")
    n.set_defaults(func=cmd_anneal)

    c = sub.add_parser("compare", help="distance table for two state files")
    c.add_argument("state_a")
    c.add_argument("state_b")
    c.add_argument("--restarts", type=int, default=8, help="random bases for the measured-JSD bound")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_compare)

    s = sub.add_parser("sample", help="draw random states to files")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mixedness-floor", type=float, default=None)
    s.add_argument("--out", help="output filename prefix")
    s.set_defaults(func=cmd_sample)

    g = sub.add_parser("purescan", help="grid scan of the pure-state triangle defect")
    g.add_argument("--grid-steps", type=int, default=25)
    g.add_argument("--x-steps", type=int, default=20)
    g.set_defaults(func=cmd_purescan)

    return p


def main(argv=None) -> int:
    level = os.environ.get("QJSD_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for counterexamples
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except InvalidConfig as exc:
        parser.print_usage(sys.stderr)
        print(f"qjsd: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DimMismatch) as exc:
        print(f"qjsd: {exc}", file=sys.stderr)
        return EXIT_DATA
    except QjsdError as exc:
        print(f"qjsd: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qjsd: i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
