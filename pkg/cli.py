"""
Command-line front end.

    python cli.py law --law mp --lambda 2 --moments 8
    python cli.py pyramid --k 4
    python cli.py jacobi --input measure.csv --steps 5
    python cli.py recover --input moments.csv --k 1
    python cli.py experiment --figure 3 --m 400 --n 1200 --mu 5 --seed 1

Exit codes: 0 success, 2 invalid arguments or parameters, 3 moments that no
measure has, 4 Lanczos breakdown or a numerical pole.
"""
from typing import Dict, List, Optional
import argparse
import logging
import os
import sys

import numpy as np
import pandas as pd

from combinatorics.wachter_pyramid import pyramid_edge_notes, wachter_moment_exact, wachter_pyramid
from config import config
from jacobi.bordered import BorderedJacobi, to_bordered
from jacobi.lanczos import LanczosBreakdown, lanczos_discrete, moments_to_jacobi
from jacobi.measures import DiscretizedMeasure, MomentRealizabilityError, MomentSequence, discretize_law
from laws.level_density import LawSpec, density, free_cumulant, jacobi_params, moment, support
from laws.transforms import cauchy_transform
from recover.continued_fraction import ContinuedFractionPole
from recover.density_recovery import recover_density
from rmt_experiment import ExperimentConfig, run_figure2, run_figure3, run_figure4
from serialization import read_json, write_csv, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNREALIZABLE = 3
EXIT_BREAKDOWN = 4


def exit_code_for(error: Exception) -> int:
    if isinstance(error, MomentRealizabilityError):
        return EXIT_UNREALIZABLE
    if isinstance(error, (LanczosBreakdown, ContinuedFractionPole)):
        return EXIT_BREAKDOWN
    return EXIT_INVALID


def _bandwidth(value: str):
    if value == "auto":
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be a number or 'auto', got {value!r}")


def _add_law_args(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--law", required=required, choices=["wigner", "mp", "km", "wachter"],
                        help="Level density law")
    parser.add_argument("--lambda", dest="lam", type=float, help="Marchenko-Pastur ratio, >= 1")
    parser.add_argument("--v", type=float, help="Kesten-McKay degree, >= 2")
    parser.add_argument("--a", type=float, help="Wachter parameter a, >= 1")
    parser.add_argument("--b", type=float, help="Wachter parameter b, >= 1")


def _add_io_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", default=config.OUTPUT_DIR, help="Output directory")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="Output encoding")


def _law_from_args(args) -> LawSpec:
    return LawSpec.from_name(args.law, lam=args.lam, v=args.v, a=args.a, b=args.b)


def _write_tables(tables: Dict[str, pd.DataFrame], stem: str, args, extra: Optional[Dict] = None) -> List[str]:
    """One CSV per table, or a single JSON document holding every table as columns"""
    path = os.path.join(args.output, stem)
    if args.format == "json":
        payload = {name: {column: frame[column].to_numpy() for column in frame.columns}
                   for name, frame in tables.items()}
        payload.update(extra or {})
        return [write_json(payload, path + ".json")]
    paths = [write_csv(frame, f"{path}_{name}.csv") for name, frame in tables.items()]
    if extra:
        paths.append(write_json(extra, path + ".json"))
    return paths


def _jacobi_frame(alphas, betas) -> pd.DataFrame:
    return pd.DataFrame({"n": np.arange(len(alphas)), "alpha": alphas, "beta": betas})


def cmd_law(args) -> int:
    law = _law_from_args(args)
    params = jacobi_params(law)
    stem = f"law_{law.kind.value}"
    logger.info(f"Evaluating {law.label}")

    jacobi_table = _jacobi_frame(list(params.boundary_alpha) + [params.tail_alpha],
                                 list(params.boundary_beta) + [params.tail_beta])
    if args.jacobi:
        _write_tables({"jacobi": jacobi_table}, stem, args)
        return EXIT_OK

    interval = support(law)
    x = interval.lo + (np.arange(args.grid) + 0.5) * interval.width / args.grid
    z = x + 0.5j
    g = np.array([cauchy_transform(law, point) for point in z])
    tables = {
        "density": pd.DataFrame({"x": x, "density": density(law, x)}),
        "moments": pd.DataFrame({"moment": [moment(law, n) for n in range(args.moments)]}),
        "cumulants": pd.DataFrame({"n": np.arange(1, args.moments + 1),
                                   "cumulant": [free_cumulant(law, n) for n in range(1, args.moments + 1)]}),
        "jacobi": jacobi_table,
        "cauchy": pd.DataFrame({"z_re": z.real, "z_im": z.imag, "g_re": g.real, "g_im": g.imag}),
    }
    _write_tables(tables, stem, args,
                  {"law": law.kind.value, "parameters": law.parameters,
                   "support": {"lo": interval.lo, "hi": interval.hi}})
    return EXIT_OK


def cmd_pyramid(args) -> int:
    if args.k < 1:
        raise ValueError(f"--k must be positive, got {args.k}")
    triangle = wachter_pyramid(args.k)
    numerator, power = wachter_moment_exact(args.k)
    notes = pyramid_edge_notes(triangle)
    path = os.path.join(args.output, f"pyramid_{args.k}")
    if args.format == "csv":
        frame = pd.DataFrame([(r, c, value) for r, row in enumerate(triangle.as_strings())
                              for c, value in enumerate(row)], columns=["row", "position", "coefficient"])
        write_csv(frame, path + ".csv")
    else:
        write_json({"moment_index": args.k, "rows": triangle.as_strings(),
                    "denominator_power": power, "numerator_terms": len(numerator.terms()),
                    "notes": notes}, path + ".json")
    return EXIT_OK


def _load_input(path: str):
    """A `moment` column means moments, `x,w` columns mean a measure"""
    columns = list(pd.read_csv(path, nrows=0).columns)
    if "moment" in columns:
        return MomentSequence.from_csv(path)
    if "x" in columns and "w" in columns:
        return DiscretizedMeasure.from_csv(path)
    raise ValueError(f"{path}: expected a 'moment' column or 'x,w' columns, found {columns}")


def _jacobi_from_source(args, steps: int):
    if args.input:
        source = _load_input(args.input)
    else:
        source = discretize_law(_law_from_args(args))
    if isinstance(source, MomentSequence):
        return moments_to_jacobi(source, steps)
    return lanczos_discrete(source, steps)


def cmd_jacobi(args) -> int:
    alphas, betas = _jacobi_from_source(args, args.steps)
    _write_tables({"jacobi": _jacobi_frame(alphas, betas)}, f"jacobi_{args.steps}", args)
    return EXIT_OK


def _load_jacobi(path: str) -> BorderedJacobi:
    """Bordered Jacobi parameters from a JSON file, bare or under a "jacobi" key as in earlier outputs"""
    payload = read_json(path)
    data = payload.get("jacobi", payload) if isinstance(payload, dict) else None
    try:
        return BorderedJacobi.from_dict(data)
    except (KeyError, TypeError):
        raise ValueError(f"{path}: expected boundary_alpha, boundary_beta, tail_alpha and tail_beta")


def cmd_recover(args) -> int:
    if args.input and args.input.endswith(".json"):
        j = _load_jacobi(args.input)
    elif args.input:
        source = _load_input(args.input)
        steps = args.steps or (args.k + 1 if args.k is not None else config.DEFAULT_LANCZOS_STEPS)
        if isinstance(source, MomentSequence):
            steps = min(steps, source.order // 2)
            alphas, betas = moments_to_jacobi(source, steps)
        else:
            alphas, betas = lanczos_discrete(source, steps)
        if args.k is not None and args.k >= len(alphas):
            raise LanczosBreakdown(len(alphas), alphas, betas,
                                   f"only {len(alphas)} parameter pairs available for k={args.k}")
        j = to_bordered(alphas, betas, k=args.k)
    else:
        j = jacobi_params(_law_from_args(args))

    recovered = recover_density(j, args.grid)
    extra = recovered.sidecar()
    extra["jacobi"] = j.to_dict()
    _write_tables({"density": recovered.to_frame()}, "recovered", args, extra)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        seed=args.seed,
        m=args.m,
        n=args.n,
        mu_shift=args.mu,
        bandwidth=args.bandwidth,
        lanczos_steps=args.steps or config.DEFAULT_LANCZOS_STEPS,
        grid_size=args.grid or config.KDE_GRID_POINTS,
        moment_count=args.moments,
        diagnostic_steps=args.diagnostic_steps,
    )
    cfg.validate()
    if args.figure == 2:
        report = run_figure2(args.seed, args.k if args.k is not None else 5, args.grid)
    elif args.figure == 3:
        report = run_figure3(cfg)
    else:
        report = run_figure4(cfg)
    report.write(args.output)
    if report.failure is not None:
        return exit_code_for(report.failure)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Bordered-Toeplitz Jacobi toolkit for random matrix laws")
    subparsers = parser.add_subparsers(dest="command", required=True)

    law = subparsers.add_parser("law", help="Density, moments, cumulants, Jacobi parameters of a law")
    _add_law_args(law, required=True)
    _add_io_args(law)
    law.add_argument("--moments", type=int, default=10, help="Number of moments and cumulants")
    law.add_argument("--grid", type=int, default=200, help="Density sample points")
    law.add_argument("--jacobi", action="store_true", help="Write only the Jacobi parameters")
    law.set_defaults(handler=cmd_law)

    pyramid = subparsers.add_parser("pyramid", help="Wachter moment coefficient triangle")
    pyramid.add_argument("--k", type=int, required=True, help="Moment index")
    pyramid.add_argument("--output", default=config.OUTPUT_DIR, help="Output directory")
    pyramid.add_argument("--format", choices=["csv", "json"], default="json", help="Output encoding")
    pyramid.set_defaults(handler=cmd_pyramid)

    for name, handler, help_text in (("jacobi", cmd_jacobi, "Jacobi parameters of a measure or moments"),
                                     ("recover", cmd_recover, "Recover a density from Jacobi parameters")):
        sub = subparsers.add_parser(name, help=help_text)
        source = sub.add_mutually_exclusive_group(required=True)
        input_help = "CSV with a 'moment' column or 'x,w' columns"
        if name == "recover":
            input_help += ", or a JSON file of bordered Jacobi parameters"
        source.add_argument("--input", help=input_help)
        source.add_argument("--law", choices=["wigner", "mp", "km", "wachter"], help="Level density law")
        sub.add_argument("--lambda", dest="lam", type=float)
        sub.add_argument("--v", type=float)
        sub.add_argument("--a", type=float)
        sub.add_argument("--b", type=float)
        _add_io_args(sub)
        sub.set_defaults(handler=handler)
    subparsers.choices["jacobi"].add_argument("--steps", type=int, default=config.DEFAULT_LANCZOS_STEPS)
    subparsers.choices["recover"].add_argument("--steps", type=int, help="Parameter pairs to compute")
    subparsers.choices["recover"].add_argument("--k", type=int, help="Boundary length; trimmed if omitted")
    subparsers.choices["recover"].add_argument("--grid", type=int, default=config.RECOVERY_GRID_POINTS)

    experiment = subparsers.add_parser("experiment", help="Rerun one of the numerical experiments")
    experiment.add_argument("--figure", type=int, choices=[2, 3, 4], required=True)
    experiment.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    experiment.add_argument("--k", type=int, help="Boundary length for experiment 2")
    experiment.add_argument("--m", type=int, default=400)
    experiment.add_argument("--n", type=int, default=1200)
    experiment.add_argument("--mu", type=float, default=5.0)
    experiment.add_argument("--bandwidth", type=_bandwidth, default="auto")
    experiment.add_argument("--steps", type=int, help="Lanczos steps for experiment 3")
    experiment.add_argument("--grid", type=int, help="Grid points")
    experiment.add_argument("--moments", type=int, default=config.DEFAULT_MOMENT_COUNT)
    experiment.add_argument("--diagnostic-steps", type=int, default=config.DEFAULT_DIAGNOSTIC_STEPS,
                            help="Lanczos steps behind the Toeplitz distance of experiment 3")
    experiment.add_argument("--output", default=config.OUTPUT_DIR, help="Output directory")
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=config.LOG_LEVEL)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK

    try:
        config.validate()
        return args.handler(args)
    except (MomentRealizabilityError, LanczosBreakdown, ContinuedFractionPole, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
