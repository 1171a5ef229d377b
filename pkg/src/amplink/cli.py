"""Command-line front end.

Subcommands:

    se          spectral efficiencies of one link, amplified and not
    optimize    run one gain-selection problem (segs|egs|regs|homodyne-egs)
    sweep       evaluate a (L, K, n) grid from a JSON spec file
    continuous  on-off amplification optimum in the continuous limit
    baudscan    rate-vs-baud curves and the quantum-limit crossover
    hadamard    noiseless Hadamard-receiver rates for a list of orders

Exit codes: 0 on success, 1 for invalid input, 2 for I/O failures.
Per-cell solver non-convergence is reported in the output, never via the
exit code.  All output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import __version__
from .baudrate import (
    ossr_rate_limit,
    quantum_limit_crossover,
    rate_hadamard,
    scan_baud_rates,
)
from .continuum import onoff_se_and_energy, shannon_se_continuous, solve_onoff
from .link import GainProfile, LinkConfig, max_gain, propagate
from .optimize import (
    EnergyModel,
    OptimizationResult,
    maximize_holevo_se,
    maximize_shannon_se,
    minimize_energy,
    minimize_energy_homodyne,
)
from .rates import holevo_se, homodyne_se, shannon_se
from .sweep import SweepSpec, render, run_sweep
from .units import photon_flux as power_to_flux


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want exit code 1
        raise _UsageError(message)


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"cannot write output to {path!r}: {exc}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise _UsageError(f"expected a comma-separated number list, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    values = _float_list(text)
    out = []
    for v in values:
        if int(v) != v:
            raise _UsageError(f"expected integers, got {v}")
        out.append(int(v))
    return out


def _add_link_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, required=True, help="attenuation coefficient [1/km]")
    parser.add_argument("--length", type=float, required=True, help="link length [km]")
    parser.add_argument("--segments", type=int, required=True, help="number of fiber segments K")
    parser.add_argument("--photons", type=float, required=True, help="photons per pulse at the transmitter")


def _link_from_args(args: argparse.Namespace) -> LinkConfig:
    return LinkConfig(args.alpha, args.length, args.segments, args.photons)


def _result_record(problem: str, config: LinkConfig, result: OptimizationResult) -> dict:
    return {
        "problem": problem,
        "alpha": config.alpha,
        "L_km": config.length_km,
        "K": config.segments,
        "n": config.photons,
        "gains": list(result.gains.gains),
        "se_achieved": result.se_achieved,
        "se_target": result.se_target,
        "energy": result.energy,
        "energy_exact": result.energy_exact,
        "baseline_energy": result.baseline_energy,
        "savings_fraction": result.savings_fraction,
        "savings_pct": 100.0 * result.savings_fraction,
        "converged": result.converged,
        "iterations": result.iterations,
        "status": result.status,
    }


def _cmd_se(args: argparse.Namespace) -> int:
    config = _link_from_args(args)
    n = config.photons
    off = propagate(config, GainProfile.off(config.segments))
    full = propagate(config, GainProfile.fully_amplified(config))
    noamp_shannon = shannon_se(off, n)
    record = {
        "alpha": config.alpha,
        "L_km": config.length_km,
        "K": config.segments,
        "n": n,
        "eta": config.eta,
        "max_gain": max_gain(config),
        "unamplified": {
            "shannon": noamp_shannon,
            "holevo": holevo_se(off, n),
            "homodyne": homodyne_se(off, n),
        },
        "fully_amplified": {
            "shannon": shannon_se(full, n),
            "holevo": holevo_se(full, n),
            "homodyne": homodyne_se(full, n),
        },
        "AE": (shannon_se(full, n) / noamp_shannon) if noamp_shannon > 0 else math.inf,
    }
    _write_text(json.dumps(record, indent=2) + "\n", args.output)
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    config = _link_from_args(args)
    if args.problem == "segs":
        result = maximize_holevo_se(config)
    elif args.problem == "egs":
        result = minimize_energy(config, target_se=args.target_se, model=EnergyModel.EXACT)
    elif args.problem == "regs":
        result = minimize_energy(config, target_se=args.target_se, model=EnergyModel.RELAXED)
    else:  # homodyne-egs
        result = minimize_energy_homodyne(config, target_se=args.target_se)
    record = _result_record(args.problem, config, result)
    if args.problem == "segs":
        record["se_shannon_op"] = maximize_shannon_se(config).se_achieved
    _write_text(json.dumps(record, indent=2) + "\n", args.output)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    data: dict = {}
    if args.spec is not None:
        try:
            with open(args.spec, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise OSError(f"cannot read sweep spec {args.spec!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise _UsageError(f"sweep spec {args.spec!r} is not valid JSON: {exc}") from exc
    # flags override file values
    if args.alpha is not None:
        data["alpha"] = args.alpha
    if args.lengths is not None:
        data["L_values"] = _float_list(args.lengths)
    if args.segments is not None:
        data["K_values"] = _int_list(args.segments)
    if args.photons is not None:
        data["n_values"] = _float_list(args.photons)
    if args.problems is not None:
        data["problems"] = [p.strip() for p in args.problems.split(",") if p.strip()]
    if args.output is not None:
        data["output_path"] = args.output
    if args.format is not None:
        data["format"] = args.format
    try:
        spec = SweepSpec.from_mapping(data)
    except (TypeError, ValueError) as exc:
        raise _UsageError(str(exc)) from exc
    cells = run_sweep(spec, workers=args.workers)
    _write_text(render(cells, spec.format), spec.output_path)
    return 0


def _cmd_continuous(args: argparse.Namespace) -> int:
    lengths = _float_list(args.lengths)
    if not lengths:
        raise _UsageError("--lengths must name at least one length")
    if args.curve_points:
        rows = []
        for length in sorted(lengths):
            for j in range(args.curve_points):
                gamma = j / (args.curve_points - 1) if args.curve_points > 1 else 1.0
                se, cost = onoff_se_and_energy(args.alpha, length, args.photon_cap, gamma)
                rows.append({
                    "L_km": length,
                    "gamma": gamma,
                    "amplified_km": gamma * length,
                    "se_ojdr": se,
                    "se_shannon_target": shannon_se_continuous(args.alpha, length, args.photon_cap),
                    "energy": cost,
                })
    else:
        rows = []
        for length in sorted(lengths):
            solved = solve_onoff(args.alpha, length, args.photon_cap)
            rows.append({
                "L_km": length,
                "n_opt": solved.point.photons,
                "gamma_opt": solved.point.amplified_fraction,
                "amplified_km": solved.point.amplified_fraction * length,
                "energy": solved.energy,
                "baseline_energy": solved.baseline_energy,
                "savings_pct": 100.0 * solved.savings_fraction,
                "se": solved.se,
                "target_se": solved.target_se,
            })
    _write_text(_render_records(rows, args.format), args.output)
    return 0


def _resolve_flux(args: argparse.Namespace) -> float:
    if args.photon_flux is not None:
        return args.photon_flux
    if args.power_w is not None:
        return power_to_flux(args.power_w, args.wavelength)
    raise _UsageError("give either --photon-flux or --power-w")


def _resolve_tau(args: argparse.Namespace) -> float:
    if args.tau is not None:
        return args.tau
    if args.length is not None:
        if args.alpha is None:
            raise _UsageError("--length needs --alpha to compute the attenuation")
        return math.exp(-args.alpha * args.length)
    raise _UsageError("give either --tau or --alpha with --length")


def _cmd_baudscan(args: argparse.Namespace) -> int:
    flux = _resolve_flux(args)
    tau = _resolve_tau(args)
    if args.points < 2:
        raise _UsageError("--points must be at least 2")
    if not 0 < args.baud_min < args.baud_max:
        raise _UsageError("need 0 < --baud-min < --baud-max")
    noise_is_flux = args.noise_flux is not None
    noise = args.noise_flux if noise_is_flux else args.noise
    lo, hi = math.log(args.baud_min), math.log(args.baud_max)
    points = [math.exp(lo + (hi - lo) * j / (args.points - 1)) for j in range(args.points)]
    scan = scan_baud_rates(flux, tau, noise, points, noise_is_flux=noise_is_flux)
    per_pulse_noise = 0.0 if noise_is_flux else noise
    crossover = quantum_limit_crossover(flux, tau, per_pulse_noise)
    rows = [
        {"baud": b, "rate_ossr_bps": so, "rate_ojdr_bps": sj}
        for b, so, sj in zip(scan.baud_points, scan.rates_ossr, scan.rates_ojdr)
    ]
    if args.format == "json":
        record = {
            "photon_flux": flux,
            "tau": tau,
            "noise": noise,
            "noise_is_flux": noise_is_flux,
            "ossr_rate_limit": ossr_rate_limit(flux, tau, per_pulse_noise),
            "crossover_baud": crossover,
            "points": rows,
        }
        _write_text(json.dumps(record, indent=2) + "\n", args.output)
    else:
        _write_text(_render_records(rows, "csv"), args.output)
        limit = ossr_rate_limit(flux, tau, per_pulse_noise)
        sys.stderr.write(f"ossr_rate_limit_bps={_fmt(limit)}\n")
        sys.stderr.write(
            "crossover_baud=" + (_fmt(crossover) if crossover is not None else "none") + "\n"
        )
    return 0


def _cmd_hadamard(args: argparse.Namespace) -> int:
    flux = _resolve_flux(args)
    tau = _resolve_tau(args)
    orders = _int_list(args.orders)
    rows = [
        {"order": k, "rate_bps": rate_hadamard(flux, tau, args.baud, k)}
        for k in orders
    ]
    _write_text(_render_records(rows, args.format), args.output)
    return 0


def _render_records(rows: Sequence[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(list(rows), indent=2) + "\n"
    if not rows:
        return "\n"
    columns = list(rows[0].keys())
    lines = [",".join(columns)]
    for row in rows:
        rendered = []
        for c in columns:
            v = row[c]
            if isinstance(v, bool):
                rendered.append("true" if v else "false")
            elif isinstance(v, int):
                rendered.append(str(v))
            elif v is None:
                rendered.append("")
            else:
                rendered.append(_fmt(v))
        lines.append(",".join(rendered))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amplink", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"amplink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_se = sub.add_parser("se", help="spectral efficiencies of one link")
    _add_link_args(p_se)
    p_se.add_argument("--output", help="write JSON here instead of stdout")
    p_se.set_defaults(func=_cmd_se)

    p_opt = sub.add_parser("optimize", help="run one gain-selection problem")
    _add_link_args(p_opt)
    p_opt.add_argument("--problem", required=True,
                       choices=["segs", "egs", "regs", "homodyne-egs"])
    p_opt.add_argument("--target-se", type=float, default=None,
                       help="SE the solution must reach [bits/pulse]; "
                            "default: best heterodyne SE of the link")
    p_opt.add_argument("--output", help="write JSON here instead of stdout")
    p_opt.set_defaults(func=_cmd_optimize)

    p_sweep = sub.add_parser("sweep", help="evaluate a (L, K, n) grid")
    p_sweep.add_argument("--spec", help="JSON file with the sweep spec")
    p_sweep.add_argument("--alpha", type=float, default=None)
    p_sweep.add_argument("--lengths", help="comma list of lengths [km]")
    p_sweep.add_argument("--segments", help="comma list of segment counts")
    p_sweep.add_argument("--photons", help="comma list of photon numbers")
    p_sweep.add_argument("--problems", help="comma list from segs,egs,regs,homodyne-egs")
    p_sweep.add_argument("--output", help="output path (overrides spec)")
    p_sweep.add_argument("--format", choices=["csv", "json"], default=None)
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="parallel worker processes (output is identical)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cont = sub.add_parser("continuous", help="continuous-limit on-off optimum")
    p_cont.add_argument("--alpha", type=float, required=True)
    p_cont.add_argument("--lengths", required=True, help="comma list of lengths [km]")
    p_cont.add_argument("--photon-cap", type=float, required=True,
                        help="photon number cap of the heterodyne baseline")
    p_cont.add_argument("--curve-points", type=int, default=0,
                        help="emit an SE/energy curve over the amplified "
                             "fraction instead of solving")
    p_cont.add_argument("--format", choices=["csv", "json"], default="csv")
    p_cont.add_argument("--output", help="output path instead of stdout")
    p_cont.set_defaults(func=_cmd_continuous)

    for name, helptext in (("baudscan", "rate-vs-baud curves and crossover"),
                           ("hadamard", "Hadamard-receiver rates")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--photon-flux", type=float, default=None,
                       help="photons per second at the transmitter")
        p.add_argument("--power-w", type=float, default=None,
                       help="transmitter power [W]; alternative to --photon-flux")
        p.add_argument("--wavelength", type=float, default=1550e-9,
                       help="carrier wavelength [m], used with --power-w")
        p.add_argument("--tau", type=float, default=None,
                       help="end-to-end attenuation in [0, 1]")
        p.add_argument("--alpha", type=float, default=None,
                       help="attenuation coefficient [1/km]; alternative to --tau")
        p.add_argument("--length", type=float, default=None, help="link length [km]")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--output", help="output path instead of stdout")
        if name == "baudscan":
            p.add_argument("--noise", type=float, default=0.0,
                           help="thermal noise photons per pulse")
            p.add_argument("--noise-flux", type=float, default=None,
                           help="thermal noise photons per second (overrides --noise)")
            p.add_argument("--baud-min", type=float, default=1e9)
            p.add_argument("--baud-max", type=float, default=1e15)
            p.add_argument("--points", type=int, default=121)
            p.set_defaults(func=_cmd_baudscan)
        else:
            p.add_argument("--baud", type=float, required=True, help="baud-rate [pulses/s]")
            p.add_argument("--orders", default="4,8,16,32",
                           help="comma list of Hadamard orders (powers of two)")
            p.set_defaults(func=_cmd_hadamard)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
