import argparse
import logging
import sys
from typing import List, Optional
from . import version
from .api import load_grid, run_grid, data_label
from .dataobj import (ScenarioConfig, ChainConfig, ImputationPosture, StatKind, Alternative,
                      read_dataset, write_dataset, write_truth, write_results)
from .dataobj.reference import PREDICTIVENESS
from .error import FrtppError, ValidationError
from .frt import frt_pp_pvalue, model_based_pvalue, permutation_pvalue
from .helper import colored, message, status, sidecar_path
from .model import generate, TraceRecorder
from .report import FigureSpec, FIGURES, report
from .stats import derive_stream

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

GRID_HELP = """\
grid file (flat TOML), every key optional:
  predictiveness = ["none", "medium", "high"]
  eta_c0 = [-3, -2, -1, -0.5, 0, 0.5, 1, 2, 3]
  hypotheses = ["H0", "H1"]          # H1 uses tau = tau_alternative
  methods = ["m1-stat", "m2-disc", "model", "model_x", "itt", "known_c-disc"]
  misspecified = false
  replications = 200
  iterations = 1000
  burn_in = 500
  alpha_level = 0.05
  workers = 1
  n = 500
  n_t = 250
  eta_n = 0.0
  tau_alternative = 0.5
  outcome_variance = 1.0
  mean_prior_variance = 10.0
  ig_shape = 0.1
  ig_rate = 0.1
  seed = 0
  complier_share = 0.30               # optional, recalibrates every probit intercept
"""


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1"""
    def error(self, message_: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message_}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="frtpp", description=(
        "Fisher randomization tests with posterior predictive p-values for "
        "randomized experiments with one-sided noncompliance."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {version}")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for chain diagnostics")
    commands = parser.add_subparsers(dest="command", metavar="{generate,test,simulate,report}",
                                     parser_class=ArgumentParser)
    commands.required = True

    gen = commands.add_parser("generate", help="simulate one dataset and its truth sidecar")
    gen.add_argument("--out", required=True, help="dataset CSV (z,d,y,x); truth goes to <out>.truth.csv")
    gen.add_argument("--seed", type=int, required=True, help="base seed")
    gen.add_argument("--rep", type=int, default=0, help="replication index (default: 0)")
    gen.add_argument("--n", type=int, default=500, help="units (default: 500)")
    gen.add_argument("--n-t", type=int, default=250, help="treated units (default: 250)")
    gen.add_argument("--predictiveness", choices=list(PREDICTIVENESS), default="none",
                     help="covariate predictiveness of compliance (default: none)")
    gen.add_argument("--eta-c0", type=float, default=0.0, help="control-complier mean (default: 0)")
    gen.add_argument("--eta-n", type=float, default=0.0, help="never-taker mean (default: 0)")
    gen.add_argument("--tau", type=float, default=0.0, help="complier effect (default: 0)")
    gen.add_argument("--outcome-variance", type=float, default=1.0, help="(default: 1)")
    gen.add_argument("--complier-share", type=float,
                     help="move the probit intercept to this marginal complier share")

    test = commands.add_parser("test", help="p-value for one dataset")
    test.add_argument("--data", required=True, help="dataset CSV with columns z,d,y[,x]")
    test.add_argument("--method", choices=["m1", "m2", "m3", "m4"], default="m2",
                      help="imputation posture: m1 null, m2 free, m3 null+x, m4 free+x (default: m2)")
    test.add_argument("--kind", choices=[k.value for k in StatKind], default="disc",
                      help="stat (IV), disc (discrepancy), itt or model (default: disc)")
    test.add_argument("--iterations", type=int, default=1000, help="Gibbs sweeps (default: 1000)")
    test.add_argument("--burn-in", type=int, default=500, help="discarded sweeps (default: 500)")
    test.add_argument("--seed", type=int, default=0, help="base seed (default: 0)")
    test.add_argument("--alpha", type=float, default=0.05, help="level of the logged decision (default: 0.05)")
    test.add_argument("--two-sided", action="store_true", help="two-sided instead of positive alternative")
    test.add_argument("--misspecified", action="store_true", help="impose eta_c1 = eta_n when imputing")
    test.add_argument("--trace", help="write the chain trace CSV here")

    sim = commands.add_parser("simulate", help="run a simulation grid",
                              epilog=GRID_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sim.add_argument("--grid", required=True, help="grid file, see below")
    sim.add_argument("--seed", type=int, required=True, help="base seed, overrides the grid file")
    sim.add_argument("--out", required=True, help="results CSV")
    sim.add_argument("--workers", type=int, help="worker processes, overrides the grid file")
    sim.add_argument("--checkpoint", help="JSON lines file to resume from and append to")
    sim.add_argument("--paper-scale", action="store_true",
                     help="2000 replications, 2000 sweeps, 1000 burn-in")

    rep = commands.add_parser("report", help="table and SVG from a results CSV")
    rep.add_argument("--in", dest="results", required=True, help="results CSV of simulate")
    rep.add_argument("--figure", choices=list(FIGURES), required=True)
    rep.add_argument("--out", required=True, help="SVG file")
    rep.add_argument("--table", help="write the text table here instead of stdout")
    rep.add_argument("--series", help="comma separated method families, all must be present")
    rep.add_argument("--alpha", type=float, default=0.05, help="reference line (default: 0.05)")
    return parser


def _generate(args) -> int:
    scenario = ScenarioConfig(n=args.n, n_t=args.n_t, predictiveness=args.predictiveness,
                              eta_n=args.eta_n, eta_c0=args.eta_c0, tau=args.tau,
                              outcome_variance=args.outcome_variance,
                              complier_share=args.complier_share)
    data, truth = generate(scenario, derive_stream(args.seed, data_label(scenario, args.rep)))
    write_dataset(data, args.out)
    write_truth(truth, sidecar_path(args.out, "truth"))
    logger.info("wrote %s and its truth sidecar", args.out)
    return EXIT_OK


def _test(args) -> int:
    data = read_dataset(args.data).require_both_arms()
    kind = StatKind(args.kind)
    chain = ChainConfig(args.iterations, args.burn_in, args.seed)
    posture = ImputationPosture.from_method(args.method, args.misspecified)
    alternative = Alternative.TWO_SIDED if args.two_sided else Alternative.GREATER
    stream = derive_stream(args.seed, f"test/{args.method}-{kind.value}/chain")

    recorder = TraceRecorder(data) if args.trace else None
    if kind is StatKind.ITT:
        if recorder is not None:
            raise ValidationError(["trace: the itt test runs no chain"], context="test")
        result = permutation_pvalue(data.y, data.d, data.z, kind, chain.retained, stream, alternative)
    elif kind is StatKind.MODEL:
        result = model_based_pvalue(data, posture, chain, stream, alternative=alternative,
                                    observer=recorder)
    else:
        result = frt_pp_pvalue(data, posture, kind, chain, stream, alternative=alternative,
                               observer=recorder)

    if recorder is not None:
        recorder.write(args.trace)
    message(f"{result.p_value:.6f},{kind.value},{args.method},{result.degenerate_draws}\n", io="stdout")
    logger.info("reject at %.3f: %s", args.alpha, result.reject(args.alpha))
    if result.estimate is not None:
        logger.info("posterior mean of eta_c1 - eta_c0: %.4f", result.estimate)
    return EXIT_OK


def _simulate(args) -> int:
    grid = load_grid(args.grid).evolve(seed=args.seed)
    if args.workers is not None:
        grid = grid.evolve(workers=args.workers)
    if args.paper_scale:
        grid = grid.paper_scale()
    with status(f"Running {len(grid.scenarios())} scenarios x {len(grid.methods)} methods"):
        summaries = run_grid(grid, checkpoint=args.checkpoint)
    write_results(summaries, args.out)
    failed = sum(s.failures for s in summaries)
    if failed:
        message(colored(f"{failed} replications failed, see the log\n", color="yellow"))
    return EXIT_OK


def _report(args) -> int:
    spec = FigureSpec.named(args.figure, alpha_level=args.alpha)
    if args.series is not None:
        spec = spec.with_series([s.strip() for s in args.series.split(",") if s.strip()])
    rendered = report(args.results, spec)
    rendered.write(args.out, args.table)
    if args.table is None:
        message(rendered.table, io="stdout")
    return EXIT_OK


_COMMANDS = {"generate": _generate, "test": _test, "simulate": _simulate, "report": _report}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else EXIT_INVALID

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as err:
        message(colored(f"invalid input: {err}\n", color="red"))
        return EXIT_INVALID
    except (FrtppError, OSError) as err:
        message(colored(f"failed: {err}\n", color="red"))
        return EXIT_RUNTIME
