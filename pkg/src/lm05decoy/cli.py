"""Command-line entry point: ``lm05decoy {bounds,predict,simulate,plan}``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Sequence

from .bounds import analyze
from .channel import infinite_decoy_rate, predict_stats
from .core import ChannelPoint, DeviceParams, DomainError, InsufficientDataError, IntensitySet
from .montecarlo import (
    KEY,
    PULSE_RATE_HZ,
    SIGNAL,
    MCConfig,
    estimate_stats,
    simulate_run,
    true_tagged_stats,
)
from .planner import InsecureError, max_secure_loss, optimal_infinite_mu, optimize_intensities
from .tables import (
    RunManifest,
    TableParseError,
    file_digest,
    fmt,
    parse_measured_table,
    write_bounds_table,
)

log = logging.getLogger("lm05decoy")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTE = 2
EXIT_INSECURE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _device_args() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("device")
    g.add_argument("--eta-bob", type=float, default=0.072, help="internal transmittance incl. detector (default 0.072)")
    g.add_argument("--e-det", type=float, default=0.045, help="detector error probability (default 0.045)")
    g.add_argument("--y0", type=float, default=3.52e-6, help="background yield per pulse (default 3.52e-6)")
    g.add_argument("--e0", type=float, default=0.5, help="background error probability (default 0.5)")
    g.add_argument("--f-ec", type=float, default=1.22, help="error-correction inefficiency (default 1.22)")
    return p


def _params(args: argparse.Namespace) -> DeviceParams:
    return DeviceParams(eta_bob=args.eta_bob, e_detector=args.e_det, y0=args.y0, e0=args.e0, f_ec=args.f_ec)


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False)


def _write_manifest(out: Path, manifest: RunManifest) -> None:
    out.with_name(out.name + ".manifest.json").write_text(_dump(manifest.to_dict()) + "\n", encoding="utf-8")


# -- bounds -------------------------------------------------------------------


def run_bounds(args: argparse.Namespace) -> int:
    params = DeviceParams(f_ec=args.f_ec, e0=args.e0)
    intensities = IntensitySet(args.mu, args.nu)
    rows = parse_measured_table(args.input)
    results = []
    for point, stats in rows:
        result = analyze(stats, intensities, params)
        if result.insecure:
            log.warning("%.2f dB: effective gain bound is zero, point marked insecure", point.loss_db)
        results.append((point.loss_db, result))
    out = Path(args.out)
    write_bounds_table(out, results)
    _write_manifest(
        out,
        RunManifest(
            "bounds",
            {"mu": args.mu, "nu": args.nu, "f_ec": args.f_ec, "e0": args.e0, "input": str(args.input)},
            input_digests={str(args.input): file_digest(args.input)},
        ),
    )
    if args.svg:
        from .plotting import plot_rate_vs_loss

        losses = [loss for loss, _ in results]
        plot_rate_vs_loss(
            args.svg,
            losses,
            {},
            points={
                "effective gain bound": (losses, [r.q12_l for _, r in results]),
                "key rate bound": (losses, [r.r_l for _, r in results]),
            },
            ylabel="per pulse",
        )
    return EXIT_OK


# -- predict ------------------------------------------------------------------

PREDICT_HEADER = ["loss_db", "q_mu", "e_mu", "q_nu", "e_nu", "r_l", "r_inf", "r_l_per_second"]


def loss_grid(lo: float, hi: float, step: float) -> list[float]:
    if lo < 0 or hi < lo or step <= 0:
        raise UsageError(f"invalid loss range: min={lo}, max={hi}, step={step}")
    count = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + k * step, 12) for k in range(count + 1)]


def run_predict(args: argparse.Namespace) -> int:
    losses = loss_grid(args.loss_min, args.loss_max, args.loss_step)
    params = _params(args)
    intensities = IntensitySet(args.mu, args.nu)
    records = []
    for loss in losses:
        point = ChannelPoint(loss)
        pred = predict_stats(params, point, intensities)
        r_l = analyze(pred.as_measured(), intensities, params).r_l
        r_inf = infinite_decoy_rate(params, point, intensities.mu)
        records.append((loss, pred, r_l, r_inf))

    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(PREDICT_HEADER) + "\n")
        for loss, p, r_l, r_inf in records:
            values = (loss, p.q_mu, p.e_mu, p.q_nu, p.e_nu, r_l, r_inf, r_l * args.pulse_rate)
            fh.write(",".join(fmt(v) for v in values) + "\n")

    parameters = {**params.to_dict(), **intensities.to_dict(), "loss_min": args.loss_min,
                  "loss_max": args.loss_max, "loss_step": args.loss_step, "pulse_rate_hz": args.pulse_rate}
    digests = {}
    if args.measured:
        parameters["measured"] = str(args.measured)
        digests[str(args.measured)] = file_digest(args.measured)
    _write_manifest(out, RunManifest("predict", parameters, input_digests=digests))

    if args.svg:
        from .plotting import plot_rate_vs_loss

        points = None
        if args.measured:
            rows = parse_measured_table(args.measured)
            points = {
                "measured (weak+vacuum bound)": (
                    [pt.loss_db for pt, _ in rows],
                    [analyze(s, intensities, params).r_l for _, s in rows],
                )
            }
        plot_rate_vs_loss(
            args.svg,
            losses,
            {
                f"weak+vacuum (mu={intensities.mu}, nu={intensities.nu})": [r[2] for r in records],
                f"infinite decoy (mu={intensities.mu})": [r[3] for r in records],
            },
            points=points,
        )
    return EXIT_OK


# -- simulate -----------------------------------------------------------------


def simulation_report(config: MCConfig, workers: int = 1) -> dict:
    """Run the Monte Carlo and assemble the JSON report (without manifest)."""
    tallies = simulate_run(config, workers=workers)
    report: dict = {"config": config.to_dict(), "tallies": tallies.to_dict()}
    try:
        stats = estimate_stats(tallies)
        report["estimated_stats"] = stats.to_dict()
    except (InsufficientDataError, DomainError) as exc:
        report["estimated_stats"] = {"error": str(exc)}
        stats = None
    try:
        q12, e12 = true_tagged_stats(tallies)
        n_sig = tallies.pulses_sent(SIGNAL)
        clicks12 = int(tallies.clicks[KEY, SIGNAL, 1:3].sum())
        sigma_q = math.sqrt(q12 * (1 - q12) / n_sig)
        sigma_e = math.sqrt(e12 * (1 - e12) / clicks12)
        report["true_tagged"] = {"q12": q12, "e12": e12, "sigma_q12": sigma_q, "sigma_e12": sigma_e}
    except InsufficientDataError as exc:
        report["true_tagged"] = {"error": str(exc)}
        q12 = None

    bounds = None
    if stats is not None:
        try:
            bounds = analyze(stats, config.intensities, config.params)
            report["bounds"] = bounds.to_dict()
        except DomainError as exc:
            report["bounds"] = {"error": str(exc)}
    else:
        report["bounds"] = {"error": "no statistics"}

    if bounds is not None and q12 is not None:
        tt = report["true_tagged"]
        report["sandwich"] = {
            "q12": "pass" if bounds.q12_l <= tt["q12"] + 3 * tt["sigma_q12"] else "fail",
            "eps12": "pass" if bounds.eps12_u >= tt["e12"] - 3 * tt["sigma_e12"] else "fail",
        }
    else:
        report["sandwich"] = {"q12": "undetermined", "eps12": "undetermined"}
    return report


def run_simulate(args: argparse.Namespace) -> int:
    if args.pulses < 1:
        raise UsageError("--pulses must be at least 1")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    config = MCConfig(
        params=_params(args),
        channel=ChannelPoint(args.loss),
        intensities=IntensitySet(args.mu, args.nu),
        n_pulses=args.pulses,
        seed=args.seed,
        control_mode_prob=args.control_prob,
        pulse_rate_hz=args.pulse_rate,
        block_size=args.block_size,
    )
    report = simulation_report(config, workers=args.workers)
    # worker count is excluded: it cannot change the result
    report["manifest"] = RunManifest("simulate", config.to_dict(), seeds=[config.seed]).to_dict()
    Path(args.out).write_text(_dump(report) + "\n", encoding="utf-8")
    return EXIT_OK


# -- plan ---------------------------------------------------------------------


def run_plan(args: argparse.Namespace) -> int:
    params = _params(args)
    if args.maxloss:
        intensities = IntensitySet(args.mu, args.nu)
        try:
            wv = max_secure_loss(params, intensities, "weak-vacuum")
        except InsecureError as exc:
            print(f"insecure everywhere: {exc}")
            print(_dump({"secure": False, "max_secure_loss_db": None}))
            return EXIT_INSECURE
        inf = max_secure_loss(params, intensities, "infinite")
        inf_opt = max_secure_loss(params, intensities, "infinite-optimal")
        print(f"max secure loss, weak+vacuum (mu={intensities.mu}, nu={intensities.nu}): {wv:.2f} dB")
        print(f"max secure loss, infinite decoy (mu={intensities.mu}): {inf:.2f} dB")
        print(f"max secure loss, infinite decoy (optimal mu): {inf_opt:.2f} dB")
        print(_dump({
            "secure": True,
            "max_secure_loss_db": wv,
            "infinite_decoy_db": inf,
            "infinite_decoy_optimal_db": inf_opt,
            "intensities": intensities.to_dict(),
        }))
        return EXIT_OK

    point = ChannelPoint(args.loss)
    plan = optimize_intensities(params, point)
    mu_inf, r_inf = optimal_infinite_mu(params, point)
    if not plan.secure:
        print(f"insecure everywhere at {point.loss_db} dB (best rate {plan.best_rate:.4e})")
        print(_dump({**plan.to_dict(), "loss_db": point.loss_db}))
        return EXIT_INSECURE
    print(f"loss {point.loss_db} dB: best mu={plan.best_mu:.3f}, nu={plan.best_nu:.3f}, "
          f"rate={plan.best_rate:.4e} per pulse ({plan.evaluations} evaluations)")
    print(f"infinite decoy: best mu={mu_inf:.3f}, rate={r_inf:.4e} per pulse")
    print(_dump({**plan.to_dict(), "loss_db": point.loss_db,
                 "infinite_decoy": {"mu": mu_inf, "rate": r_inf}}))
    return EXIT_OK


# -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lm05decoy", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    device = _device_args()

    p = sub.add_parser("bounds", help="decoy-state bounds for a measured table")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--mu", required=True, type=float)
    p.add_argument("--nu", required=True, type=float)
    p.add_argument("--f-ec", type=float, default=1.22)
    p.add_argument("--e0", type=float, default=0.5)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--svg", type=Path, help="also draw the bounds against loss")
    p.set_defaults(func=run_bounds)

    p = sub.add_parser("predict", parents=[device], help="loss sweep of predicted key rates")
    p.add_argument("--mu", type=float, default=0.31)
    p.add_argument("--nu", type=float, default=0.13)
    p.add_argument("--loss-min", type=float, default=0.0)
    p.add_argument("--loss-max", type=float, default=14.0)
    p.add_argument("--loss-step", type=float, default=0.5)
    p.add_argument("--pulse-rate", type=float, default=PULSE_RATE_HZ, help="pulses per second for the derived per-second column")
    p.add_argument("--measured", type=Path, help="measured table to overlay on the figure")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--svg", type=Path, help="figure path (.svg, .png or .pdf)")
    p.set_defaults(func=run_predict)

    p = sub.add_parser("simulate", parents=[device], help="pulse-level Monte Carlo with bound validation")
    p.add_argument("--pulses", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--loss", type=float, required=True)
    p.add_argument("--mu", type=float, default=0.31)
    p.add_argument("--nu", type=float, default=0.13)
    p.add_argument("--control-prob", type=float, default=0.5)
    p.add_argument("--pulse-rate", type=float, default=PULSE_RATE_HZ)
    p.add_argument("--block-size", type=int, default=1 << 20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("plan", parents=[device], help="optimal intensities or maximum secure loss")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--loss", type=float)
    which.add_argument("--maxloss", action="store_true")
    p.add_argument("--mu", type=float, default=0.31)
    p.add_argument("--nu", type=float, default=0.13)
    p.set_defaults(func=run_plan)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lm05decoy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TableParseError, DomainError, OSError) as exc:
        # DomainError here means a parameter value outside its valid range
        print(f"lm05decoy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InsecureError as exc:
        print(f"lm05decoy: insecure: {exc}", file=sys.stderr)
        return EXIT_INSECURE
    except (ArithmeticError, ValueError) as exc:
        print(f"lm05decoy: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
