"""Command-line entry point.

Subcommands: capacity, region, gaussian, code, simulate, experiment.
Scalar results go to stdout as JSON; sweeps and traces are CSV.  All numbers
print in shortest round-trip form, so re-parsing reproduces them bit-exactly.
Exit codes: 0 success, 1 domain error (single-line diagnostic), 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from .capacity import region_boundary, secrecy_capacity
from .channel import ChannelParams
from .experiment import (
    REPORT_COLUMNS,
    ExperimentConfig,
    report_row,
    run_sweep,
)
from .gaussian import GaussianParams, gaussian_cs_bounds_finite, gaussian_cs_infinite, n_tilde
from .pointprocess import Waveform, sample_conditional_poisson
from .wyner import build_code, pairwise_overlap_fraction

SEED_ENV_VAR = "POISSON_WIRETAP_SEED"
_LN2 = math.log(2.0)


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _fmt(x) -> str:
    return repr(float(x))


def _emit_json(obj: dict) -> None:
    # json keeps float repr, so output round-trips bit-exactly
    print(json.dumps(obj))


def _add_channel_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--a-y", type=float, help="legitimate channel gain")
    sub.add_argument("--lambda-y", type=float, help="legitimate dark current")
    sub.add_argument("--a-z", type=float, help="eavesdropper channel gain")
    sub.add_argument("--lambda-z", type=float, help="eavesdropper dark current")
    sub.add_argument("--params", metavar="FILE",
                     help="JSON file with keys a_y, lambda_y, a_z, lambda_z")


def _channel_params(args) -> ChannelParams:
    if args.params is not None:
        with open(args.params) as fh:
            return ChannelParams.from_dict(json.load(fh))
    flags = (args.a_y, args.lambda_y, args.a_z, args.lambda_z)
    if any(v is None for v in flags):
        raise SystemExit2("all of --a-y --lambda-y --a-z --lambda-z (or --params) are required")
    return ChannelParams(*flags)


class SystemExit2(Exception):
    """Usage error detected after argparse; maps to exit status 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-wiretap",
        description="Secrecy capacity and coding experiments for the degraded "
        "Poisson wiretap channel",
        epilog=f"Default seed is 0; override with --seed or {SEED_ENV_VAR}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="secrecy capacity and optimal duty cycle")
    _add_channel_flags(cap)
    cap.add_argument("--tol", type=float, default=1e-12, help="solver tolerance")
    cap.add_argument("--bits", action="store_true", help="report rates in bits")

    reg = sub.add_parser("region", help="rate-equivocation boundary sweep")
    _add_channel_flags(reg)
    reg.add_argument("--grid", type=int, default=101, help="number of duty-cycle points")
    reg.add_argument("--out", metavar="FILE", help="CSV destination (default stdout)")
    reg.add_argument("--figure", metavar="FILE", help="also render the boundary figure")
    reg.add_argument("--bits", action="store_true", help="report rates in bits")

    gau = sub.add_parser("gaussian", help="wideband Gaussian wiretap baseline")
    gau.add_argument("--power", type=float, required=True)
    gau.add_argument("--n1", type=float, required=True)
    gau.add_argument("--n2", type=float, required=True)
    gau.add_argument("--bandwidth", type=float, help="also report finite-B bounds")
    gau.add_argument("--bits", action="store_true", help="report rates in bits")

    cod = sub.add_parser("code", help="constant-weight codebook statistics")
    cod.add_argument("--m", type=int, required=True, help="number of codewords")
    cod.add_argument("--k", type=int, required=True, help="ones per column")
    cod.add_argument("--t", type=float, required=True, help="horizon")
    cod.add_argument("--dump", metavar="FILE", help="write the bit matrix as 0/1 rows")

    sim = sub.add_parser("simulate", help="sample arrival traces for a waveform")
    sim.add_argument("--waveform", metavar="FILE", required=True,
                     help="JSON file with keys horizon, breakpoints, values")
    sim.add_argument("--a", type=float, required=True, help="channel gain")
    sim.add_argument("--lambda", type=float, required=True, dest="lam", help="dark current")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--realizations", type=int, default=1)
    sim.add_argument("--out", metavar="FILE",
                     help="trace CSV; multiple realizations get _NNN suffixes")

    exp = sub.add_parser("experiment", help="run a sweep of coding experiments")
    exp.add_argument("--config", metavar="FILE", required=True,
                     help="JSON config object or list of objects")
    exp.add_argument("--out", metavar="FILE", help="CSV destination (default stdout)")
    exp.add_argument("--seed", type=int, default=None,
                     help="master seed for rows without their own")
    exp.add_argument("--figure", metavar="FILE", help="also render the sweep figure")

    return parser


def _cmd_capacity(args) -> int:
    p = _channel_params(args)
    res = secrecy_capacity(p, tol=args.tol)
    scale = 1.0 / _LN2 if args.bits else 1.0
    _emit_json(
        {
            "alpha_star": res.alpha_star,
            "c_s": res.c_s * scale,
            "c_main": res.c_main * scale,
            "c_eaves": res.c_eaves * scale,
            "units": "bits/unit time" if args.bits else "nats/unit time",
        }
    )
    return 0


def _cmd_region(args) -> int:
    p = _channel_params(args)
    points = region_boundary(p, args.grid)
    scale = 1.0 / _LN2 if args.bits else 1.0
    lines = ["alpha,r_max,rd_max"]
    lines += [
        f"{_fmt(pt.alpha)},{_fmt(pt.r_max * scale)},{_fmt(pt.rd_max * scale)}"
        for pt in points
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.figure:
        from .capacity import RegionPoint
        from .figures import save_region_figure

        shown = [RegionPoint(pt.alpha, pt.r_max * scale, pt.rd_max * scale) for pt in points]
        save_region_figure(
            shown, args.figure,
            ylabel="bits / unit time" if args.bits else "nats / unit time",
        )
    return 0


def _cmd_gaussian(args) -> int:
    g = GaussianParams(args.power, args.n1, args.n2)
    scale = 1.0 / _LN2 if args.bits else 1.0
    out = {
        "n_tilde": n_tilde(g),
        "cs_infinite": gaussian_cs_infinite(g) * scale,
    }
    if args.bandwidth is not None:
        lower, upper = gaussian_cs_bounds_finite(g, args.bandwidth)
        out["lower"] = lower * scale
        out["upper"] = upper * scale
    out["units"] = "bits/unit time" if args.bits else "nats/unit time"
    _emit_json(out)
    return 0


def _cmd_code(args) -> int:
    code = build_code(args.m, args.k, args.t)
    _emit_json(
        {
            "m_rows": code.m_rows,
            "k_ones": code.k_ones,
            "horizon": code.horizon,
            "n_cols": code.n_cols,
            "slot_len": code.slot_len,
            "duty_cycle": code.k_ones / code.m_rows,
            "pairwise_overlap": pairwise_overlap_fraction(code, 0, 1),
        }
    )
    if args.dump:
        with open(args.dump, "w") as fh:
            for m in range(code.m_rows):
                fh.write("".join("1" if v else "0" for v in code.row_mask(m)) + "\n")
    return 0


def _trace_path(base: str, index: int, total: int) -> str:
    if total == 1:
        return base
    root, ext = os.path.splitext(base)
    return f"{root}_{index:03d}{ext or '.csv'}"


def _cmd_simulate(args) -> int:
    with open(args.waveform) as fh:
        wave = Waveform.from_dict(json.load(fh))
    seed = args.seed if args.seed is not None else _default_seed()
    if args.realizations < 1:
        raise SystemExit2("--realizations must be at least 1")
    if args.out is None and args.realizations > 1:
        raise SystemExit2("--out is required for multiple realizations")
    import numpy as np

    streams = np.random.SeedSequence(seed).spawn(args.realizations)
    for i, ss in enumerate(streams):
        proc = sample_conditional_poisson(wave, args.a, args.lam, np.random.Generator(np.random.Philox(ss)))
        text = "time\n" + "".join(_fmt(t) + "\n" for t in proc.times)
        if args.out:
            with open(_trace_path(args.out, i, args.realizations), "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return 0


def _experiment_config(entry: dict, index: int, master_seed: int) -> ExperimentConfig:
    params = ChannelParams.from_dict(entry)
    return ExperimentConfig(
        params=params,
        m_rows=int(entry["m"]),
        k_ones=int(entry["k"]),
        horizon=float(entry["t"]),
        n_messages=int(entry["n_messages"]),
        trials=int(entry["trials"]),
        seed=int(entry.get("seed", master_seed + index)),
        epsilon=float(entry.get("epsilon", 1e-6)),
    )


def _cmd_experiment(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    entries = raw if isinstance(raw, list) else [raw]
    master = args.seed if args.seed is not None else _default_seed()
    configs = [_experiment_config(e, i, master) for i, e in enumerate(entries)]
    reports = run_sweep(configs)

    rows = [report_row(r) for r in reports]
    for row in rows:
        for key, value in row.items():
            if isinstance(value, float):
                row[key] = _fmt(value)
    dest = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(dest, fieldnames=REPORT_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            dest.close()
    if args.figure:
        from .figures import save_experiment_figure

        save_experiment_figure(reports, args.figure)
    return 0


_HANDLERS = {
    "capacity": _cmd_capacity,
    "region": _cmd_region,
    "gaussian": _cmd_gaussian,
    "code": _cmd_code,
    "simulate": _cmd_simulate,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except SystemExit2 as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
