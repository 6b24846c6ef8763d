"""Command-line interface: runs, verification suites, and experiments.

Every command is deterministic given its full flag set; no environment
variables are consulted.  All flags are long-named.  File outputs are written
atomically so interrupted runs never leave truncated CSVs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import engine, experiments, fileio, oracle, spectral, verification
from .errors import ParameterError
from .grids import build_grid
from .initial import DiracCombData, RegularData, convert_fg, gaussian_mover, initialize
from .medium import (
    compute_weights,
    constant_medium,
    ramp_medium,
    random_step_medium,
    sample_medium,
)


@dataclass(frozen=True)
class Scenario:
    """A fully specified run: grid, one medium spec, one data spec, mode, outputs."""

    a: float
    b: float
    n: int
    T: float
    medium_kind: str | None
    medium_file: str | None
    data_kind: str | None
    data_file: str | None
    mode: str
    out: str
    out_format: str
    seed: int | None

    def __post_init__(self):
        if (self.medium_kind is None) == (self.medium_file is None):
            raise ParameterError("exactly one of --medium / --medium-file must be given")
        if (self.data_kind is None) == (self.data_file is None):
            raise ParameterError("exactly one of --data / --data-file must be given")
        if self.medium_kind == "random-step" and self.seed is None:
            raise ParameterError("--medium random-step requires --seed")


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=np.float64))


def _build_medium(args):
    if args.medium_file is not None:
        path = Path(args.medium_file)
        if not path.exists():
            raise ParameterError(f"medium file not found: {path}")
        return fileio.read_medium_csv(path)
    if args.medium == "constant":
        return constant_medium(args.zeta)
    if args.medium == "ramp":
        return ramp_medium()
    if args.medium == "random-step":
        return random_step_medium(args.seed, args.jumps, args.lo, args.hi)
    raise ParameterError(f"unknown medium {args.medium!r}")


def _build_data(args, medium, grid, temporal):
    if args.data_file is not None:
        path = Path(args.data_file)
        if not path.exists():
            raise ParameterError(f"data file not found: {path}")
        return fileio.read_initial_csv(path)
    if args.data == "zero":
        return RegularData(alpha=_zero, beta=_zero)
    if args.data == "gaussian":
        mover = gaussian_mover(args.amplitude, args.decay, args.center)
        if args.direction == "right":
            return RegularData(alpha=mover, beta=_zero)
        return RegularData(alpha=_zero, beta=mover)
    if args.data == "bump-at-rest":
        # displacement bump with zero velocity: exercises the (f, g) conversion
        return convert_fg(
            gaussian_mover(args.amplitude, args.decay, args.center), _zero, medium, grid, temporal
        )
    if args.data == "dirac":
        pair = [(args.position, args.amplitude)]
        if args.direction == "right":
            return DiracCombData.from_positions(grid, right=pair)
        return DiracCombData.from_positions(grid, left=pair)
    raise ParameterError(f"unknown data source {args.data!r}")


def cmd_run(args) -> int:
    scenario = Scenario(
        a=args.a, b=args.b, n=args.n, T=args.T,
        medium_kind=args.medium, medium_file=args.medium_file,
        data_kind=args.data, data_file=args.data_file,
        mode=args.mode, out=args.out, out_format=args.out_format, seed=args.seed,
    )
    grid, temporal = build_grid(scenario.a, scenario.b, scenario.n, scenario.T)
    medium = _build_medium(args)
    weights = compute_weights(sample_medium(medium, grid))
    data = _build_data(args, medium, grid, temporal)

    is_comb = isinstance(data, DiracCombData)
    if scenario.mode == "dirac" and not is_comb:
        raise ParameterError("dirac mode needs Dirac data (--data dirac or a comb data file)")
    if scenario.mode == "regular" and is_comb:
        raise ParameterError("regular mode cannot consume Dirac data; use --mode dirac")

    if scenario.mode == "dirac":
        field = engine.run_dirac(data, weights, grid, temporal, record=args.record)
    else:
        state = initialize(data, grid, temporal)
        field = engine.run(state, weights, grid, temporal, record=args.record)

    fileio.write_solution_csv(scenario.out, field, layout=scenario.out_format)
    print(f"delta={fileio.fmt(grid.delta)}")
    print(f"m={temporal.m}")
    print(f"t_m={fileio.fmt(temporal.times[-1])}")
    print(f"wrote {scenario.out}")
    return 0


def cmd_verify(args) -> int:
    if args.n > 256:
        raise ParameterError(f"--n must stay within the dense limit 256, got {args.n}")

    if args.corrupt_weight is not None:
        # deliberately out-of-range weight: the bundle builder must refuse it
        r = np.zeros(args.n)
        r[args.corrupt_weight] = 1.5
        spectral.build_bundle(r)
        raise AssertionError("corrupted weight was not rejected")

    if args.dump_matrix or args.dump_ledger:
        rng = np.random.default_rng(args.seed)
        weights = verification.random_weights(rng, args.n)
        if args.dump_matrix:
            fileio.write_matrix_csv(args.dump_matrix, spectral.build_bundle(weights).A)
            print(f"wrote {args.dump_matrix}")
        if args.dump_ledger:
            grid, temporal = build_grid(0.0, 1.0, args.n, 2.0 + 0.5 / args.n)
            comb = verification.random_comb(rng, args.n, temporal.m)
            rows: list = []
            oracle.trace_dirac_exact(comb, weights, grid, temporal, ledger_out=rows)
            fileio.write_ledger_csv(args.dump_ledger, rows)
            print(f"wrote {args.dump_ledger}")

    if args.trials == 0:
        print("warning: --trials 0 makes every suite vacuously pass")
    results = verification.run_suites(n=args.n, trials=args.trials, seed=args.seed)
    failed = False
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        extra = f" ({res.detail})" if res.detail else ""
        print(f"{status} {res.name}: worst residual {res.residual:.3e} vs tolerance {res.tolerance:.3e}{extra}")
        failed = failed or not res.passed
    return 1 if failed else 0


def _experiment_ramp(args) -> int:
    outdir = Path(args.outdir)
    before, after, separation = experiments.ramp_experiment(args.p)
    fileio.write_params(
        outdir / "params.txt",
        {"experiment": "ramp", "p": args.p, "a": experiments.RAMP_DOMAIN[0],
         "b": experiments.RAMP_DOMAIN[1], "T": experiments.RAMP_HORIZON,
         "source": experiments.RAMP_SOURCE},
    )
    fileio.write_snapshot_csv(outdir / "before.csv", before)
    fileio.write_snapshot_csv(outdir / "after.csv", after)
    singular_nodes = int(np.count_nonzero(after.singular))
    print(f"singular nodes at t={after.t}: {singular_nodes}")
    print(f"wrote {outdir}/before.csv and {outdir}/after.csv")
    return 0


def _experiment_convergence(args) -> int:
    outdir = Path(args.outdir)
    report = experiments.convergence_study(args.pmin, args.pmax, args.pref)
    fileio.write_params(
        outdir / "params.txt",
        {"experiment": "convergence", "pmin": args.pmin, "pmax": args.pmax, "pref": args.pref},
    )
    fileio.write_convergence_csv(outdir / "convergence.csv", report)
    print(f"fitted slope: {report.slope:.4f}")
    print(f"fitted constant: {report.constant:.4f}")
    print(f"mean E(n)*n: {report.mean_en_product:.4f}")
    print(f"wrote {outdir}/convergence.csv")
    return 0


def _experiment_oscillatory(args) -> int:
    outdir = Path(args.outdir)
    snaps = experiments.oscillatory_experiment(args.seed, args.shift, n=args.n)
    fileio.write_params(
        outdir / "params.txt",
        {"experiment": "oscillatory", "seed": args.seed, "shift": args.shift, "n": args.n,
         "T": experiments.oscillatory_horizon(args.shift)},
    )
    for name, snap in zip(("before", "during", "after"), snaps):
        fileio.write_snapshot_csv(outdir / f"{name}.csv", snap)
    print(f"final-time max adjacent jump: {experiments.adjacent_jump(snaps[-1].u):.6f}")
    print(f"wrote {outdir}/before.csv, during.csv, after.csv")
    return 0


def _experiment_perf(args) -> int:
    outdir = Path(args.outdir)
    n_values = [int(part) for part in args.n.split(",")]
    backends = ["compiled", "python"] if args.backend == "both" else [args.backend]
    rows = []
    for backend in backends:
        resolved = engine.active_backend() if backend == "auto" else backend
        for n, seconds in experiments.performance_probe(n_values, T=args.T, backend=backend):
            rows.append((n, seconds, resolved))
    fileio.write_params(
        outdir / "params.txt",
        {"experiment": "perf", "n": args.n, "T": args.T, "backend": args.backend},
    )
    fileio.write_timings_csv(outdir / "timings.csv", rows)
    for n, seconds, backend in rows:
        print(f"n={n:>8} backend={backend:<8} {seconds:.6f} s")
    if args.backend == "both":
        by_n = {}
        for n, seconds, backend in rows:
            by_n.setdefault(n, {})[backend] = seconds
        for n, pair in sorted(by_n.items()):
            if len(pair) == 2:
                print(f"n={n:>8} python/compiled speedup: {pair['python'] / pair['compiled']:.2f}x")
    print(f"wrote {outdir}/timings.csv")
    return 0


def cmd_experiment(args) -> int:
    handler = {
        "ramp": _experiment_ramp,
        "convergence": _experiment_convergence,
        "oscillatory": _experiment_oscillatory,
        "perf": _experiment_perf,
    }[args.experiment]
    return handler(args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavescatter",
        description="Scattering-based solver for the 1D variable-coefficient wave equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve one scenario and export the field")
    run.add_argument("--a", type=float, required=True, help="left domain endpoint")
    run.add_argument("--b", type=float, required=True, help="right domain endpoint")
    run.add_argument("--n", type=int, required=True, help="number of grid cells")
    run.add_argument("--T", type=float, required=True, help="time horizon")
    med = run.add_mutually_exclusive_group(required=True)
    med.add_argument("--medium", choices=("constant", "ramp", "random-step"), help="built-in medium")
    med.add_argument("--medium-file", help="breakpoint CSV with header x,zeta")
    run.add_argument("--zeta", type=float, default=1.0, help="impedance of the constant medium (default 1)")
    run.add_argument("--seed", type=int, default=None, help="seed for the random-step medium")
    run.add_argument("--jumps", type=int, default=40, help="jump count for random-step (default 40)")
    run.add_argument("--lo", type=float, default=1.0, help="left end of the jump window (default 1)")
    run.add_argument("--hi", type=float, default=10.0, help="right end of the jump window (default 10)")
    dat = run.add_mutually_exclusive_group(required=True)
    dat.add_argument("--data", choices=("gaussian", "dirac", "bump-at-rest", "zero"), help="built-in source")
    dat.add_argument("--data-file", help="CSV with header x,alpha,beta or offset,c,d")
    run.add_argument("--amplitude", type=float, default=2.0, help="source amplitude (default 2)")
    run.add_argument("--decay", type=float, default=0.05, help="gaussian decay rate (default 0.05)")
    run.add_argument("--center", type=float, default=-10.0, help="gaussian centre (default -10)")
    run.add_argument("--position", type=float, default=-5.0, help="dirac atom position (default -5)")
    run.add_argument("--direction", choices=("right", "left"), default="right",
                     help="mover direction for gaussian/dirac sources (default right)")
    run.add_argument("--mode", choices=("regular", "dirac"), required=True)
    run.add_argument("--record", choices=("all", "final"), default="all",
                     help="which time rows to keep (default all)")
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--out-format", choices=("long", "dense"), default="long",
                     help="long rows k,t,j,x,u or a dense matrix (default long)")
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="run the randomized verification suites")
    verify.add_argument("--n", type=int, default=16, help="grid cells per trial (default 16, max 256)")
    verify.add_argument("--trials", type=int, default=100, help="trials per suite (default 100)")
    verify.add_argument("--seed", type=int, default=0, help="seed for all trial draws (default 0)")
    verify.add_argument("--dump-matrix", default=None, help="also write the dense step matrix CSV here")
    verify.add_argument("--dump-ledger", default=None, help="also write a tracer ledger CSV here")
    verify.add_argument("--corrupt-weight", type=int, default=None,
                        help="inject an out-of-range weight at this index (failure-path check)")
    verify.set_defaults(func=cmd_verify)

    experiment = sub.add_parser("experiment", help="reproduce the replication experiments")
    esub = experiment.add_subparsers(dest="experiment", required=True)

    ramp = esub.add_parser("ramp", help="Dirac impulse through the smooth ramp")
    ramp.add_argument("--p", type=int, default=10, help="resolution exponent, n = 2^p (default 10)")
    ramp.add_argument("--outdir", required=True)
    ramp.set_defaults(func=cmd_experiment)

    conv = esub.add_parser("convergence", help="waveform error vs resolution for the ramp")
    conv.add_argument("--pmin", type=int, default=7)
    conv.add_argument("--pmax", type=int, default=12)
    conv.add_argument("--pref", type=int, default=14, help="reference exponent (default 14)")
    conv.add_argument("--outdir", required=True)
    conv.set_defaults(func=cmd_experiment)

    osc = esub.add_parser("oscillatory", help="Gaussian through a 40-jump random medium")
    osc.add_argument("--seed", type=int, default=7)
    osc.add_argument("--shift", type=float, default=0.0,
                     help="source shift; 0 starts left of the jumps, 15 inside them (default 0)")
    osc.add_argument("--n", type=int, default=4096)
    osc.add_argument("--outdir", required=True)
    osc.set_defaults(func=cmd_experiment)

    perf = esub.add_parser("perf", help="wall-time scaling of the stepping loop")
    perf.add_argument("--n", default="1024,2048,4096,8192", help="comma-separated resolutions")
    perf.add_argument("--T", type=float, default=20.0)
    perf.add_argument("--backend", choices=("auto", "compiled", "python", "both"), default="auto")
    perf.add_argument("--outdir", required=True)
    perf.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
