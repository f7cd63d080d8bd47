from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import sampling, testfns
from .bench import METHODS, fit_by_method, reduction_threshold, run_bench, write_bench
from .common import capture_all_exceptions, parse_list, read_points, read_samples, save_json, to_json, write_points
from .config import EnvSettings, PathSettings, Settings
from .exceptions import ConfigurationError, DomainError, NonConvergenceError
from .lcurve import lcurve
from .logger import setup_logger
from .models import load_model, save_model
from .objects import Box

__all__ = ["main", "build_parser"]

logger = logging.getLogger(__name__)


def _settings(args: argparse.Namespace) -> Settings:
    settings = PathSettings(args.config) if args.config else EnvSettings()
    return settings.validate()


def _domain(args: argparse.Namespace) -> Box | None:
    if getattr(args, "function", None):
        fn = testfns.get(args.function)
        if getattr(args, "domain", None) and Box.parse(args.domain) != fn.domain:
            raise ConfigurationError(f"--domain {args.domain} contradicts the domain {fn.domain} of {fn.id}")
        return fn.domain
    if getattr(args, "domain", None):
        return Box.parse(args.domain)
    return None


@capture_all_exceptions
def cmd_sample(args: argparse.Namespace) -> int:
    _settings(args)

    domain = _domain(args)
    if domain is None:
        if not args.dim:
            raise ConfigurationError("Give --function, --domain or --dim")
        domain = Box.unit(args.dim)
    elif args.dim and args.dim != domain.n:
        raise ConfigurationError(f"--dim {args.dim} does not match the {domain.n} coordinates of the domain")

    points = sampling.design_points(args.strategy, domain, args.M, args.N, args.seed)
    values = testfns.get(args.function)(points) if args.function else None

    write_points(args.out, points, values)
    logger.info("Wrote %d %s points to %s", points.shape[0], args.strategy, args.out)
    return 0


@capture_all_exceptions
def cmd_fit(args: argparse.Namespace) -> int:
    settings = _settings(args)
    samples = read_samples(args.input, _domain(args))

    seed = settings.seed if args.seed is None else args.seed
    if args.epsilon:
        samples = samples.with_values(sampling.add_noise(samples.values, args.epsilon, seed))
    if args.eta is not None:
        settings.eta = args.eta
    elif args.epsilon:
        settings.eta = reduction_threshold(args.epsilon, settings)

    if args.tau is not None:
        settings.tau = args.tau
    if args.sigma is not None:
        settings.sigma = args.sigma
    settings.validate()

    model, report = fit_by_method(args.method, samples, args.M, args.N, settings, seed=seed)

    save_model(model, args.out)
    if args.report:
        save_json(report, args.report)
    else:
        sys.stderr.write(to_json(report) + "\n")

    logger.info("Fitted a (%d, %d) %s model to %d points, saved to %s", model.M, model.N, args.method, samples.K, args.out)
    if report.converged is False:
        logger.error("The pole-free fit stopped after %d iterations without a certified denominator", report.sip_iterations)
        return NonConvergenceError.exit_code
    return 0


@capture_all_exceptions
def cmd_eval(args: argparse.Namespace) -> int:
    _settings(args)
    model = load_model(args.model)
    points = read_points(args.input)
    if points.shape[1] != model.n:
        raise DomainError(f"The model takes {model.n} coordinates, {args.input} has {points.shape[1]}")

    write_points(args.out, points, model(points), value_name="r")
    return 0


@capture_all_exceptions
def cmd_bench(args: argparse.Namespace) -> int:
    settings = _settings(args)
    functions = parse_list(args.functions)
    methods = parse_list(args.methods)
    unknown = sorted(set(methods) - set(METHODS))
    if unknown:
        raise ConfigurationError(f"Unknown method(s) {unknown}; choose from {', '.join(METHODS)}")
    for function in functions:
        testfns.get(function)

    rows, summary = run_bench(
        functions,
        methods,
        parse_list(args.epsilons, float),
        parse_list(args.seeds, int),
        parse_list(args.t, float),
        args.M,
        args.N,
        settings,
    )
    row_file, summary_file = write_bench(rows, summary, args.out)
    logger.info("Wrote %d rows to %s and the summary to %s", len(rows), row_file, summary_file)
    return 0


@capture_all_exceptions
def cmd_lcurve(args: argparse.Namespace) -> int:
    settings = _settings(args)
    samples = read_samples(args.input, _domain(args))
    sigmas = parse_list(args.sigmas, float)
    tau = settings.tau if args.tau is None else args.tau

    curve, sigma = lcurve(samples, args.M, args.N, sigmas, tau)
    curve["corner"] = curve["sigma"] == sigma
    curve.to_csv(Path(args.out), index=False)
    print(f"corner sigma = {sigma!r}")
    return 0


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML settings file (RATFIT_* environment variables otherwise)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")


def _degrees(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--M", type=int, default=5, help="numerator degree")
    parser.add_argument("--N", type=int, default=5, help="denominator degree")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratfit", description="Multivariate rational approximation of scattered data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="generate a sample design")
    _common(p)
    _degrees(p)
    p.add_argument("--strategy", choices=["lhs", "dlhd"], default="dlhd")
    p.add_argument("--function", help="catalog id; adds an f column")
    p.add_argument("--dim", type=int)
    p.add_argument("--domain", help="lo:hi[,lo:hi...]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("fit", help="fit a model to a sample file")
    _common(p)
    _degrees(p)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--function", help="catalog id whose domain to use")
    p.add_argument("--domain", help="lo:hi[,lo:hi...]; the bounding box of the points otherwise")
    p.add_argument("--eta", type=float, help="degree reduction threshold")
    p.add_argument("--epsilon", type=float, default=0.0, help="relative noise added to the values before fitting")
    p.add_argument("--tau", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write the fit report here instead of stderr")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("eval", help="evaluate a saved model")
    _common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("bench", help="run a benchmark grid over catalog functions")
    _common(p)
    _degrees(p)
    p.add_argument("--functions", required=True)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--epsilons", default="0")
    p.add_argument("--seeds", default="0,1,2,3,4")
    p.add_argument("--t", default="1e2,1e3")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("lcurve", help="sweep the regularization weight of the pole-free relaxation")
    _common(p)
    _degrees(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--function", help="catalog id whose domain to use")
    p.add_argument("--domain", help="lo:hi[,lo:hi...]")
    p.add_argument("--sigmas", default="1e-4,1e-3,1e-2,1e-1,1,1e1")
    p.add_argument("--tau", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_lcurve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        setup_logger(logging.DEBUG)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
