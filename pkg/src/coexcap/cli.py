"""Command-line interface: reproduction tables, sweeps, simulations, optimizer.

Outputs are deterministic for a given command line, configuration file and
seed, so re-running a command produces byte-identical files.  The default
simulation seed can be overridden with the COEXCAP_SEED environment
variable or the --seed flag.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys

from . import tables
from .errors import CoexcapError, ConfigError
from .params import load_preset, profile_from_text
from .sharing import best_dma
from .sim import DEFAULT_SEED, SimConfig, run_simulation
from .tables import SweepSpec, scenario_for

SEED_ENV_VAR = "COEXCAP_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def _emit(columns, rows, fmt: str, out_path: str | None, header_lines=()):
    if fmt == "csv":
        buf = io.StringIO()
        for line in header_lines:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])
        text = buf.getvalue()
    else:
        records = [dict(zip(columns, row)) for row in rows]
        payload = {"meta": list(header_lines), "rows": records}
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_table(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    columns, rows = tables.build_table(args.table_id, seed=seed,
                                       payload_bytes=args.payload)
    header = [f"seed = {seed}"] if args.table_id in (9, 10) else []
    _emit(columns, rows, args.format, args.out, header)
    return 0


def cmd_sweep(args) -> int:
    if args.curve == "usage":
        columns, rows = tables.usage_curve_rows(args.windows)
    elif args.curve == "dtm-window-efficiency":
        columns, rows = tables.window_efficiency_rows(
            args.windows, bandwidth_mhz=args.bandwidth[0], payload_bytes=args.payload)
    else:
        try:
            spec = SweepSpec(bandwidths=tuple(args.bandwidth),
                             ratios=tuple(args.ratio),
                             classes=tuple(args.laa_class),
                             payloads=(args.payload,),
                             regimes=tuple(args.regimes),
                             t_wifi_us=args.t_wifi,
                             output_format=args.format)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        columns, rows = tables.sweep_rows(spec)
        _emit(columns, rows, spec.output_format, args.out)
        return 0
    _emit(columns, rows, args.format, args.out)
    return 0


def _sim_config_from_file(path: str, seed_override: int | None,
                          trace: bool) -> SimConfig:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    if not cp.has_section("simulation"):
        raise ConfigError("config file needs a [simulation] section")
    section = cp["simulation"]
    kwargs = {
        "mode": section.get("mode", "dfm"),
        "bandwidth_mhz": section.getint("bandwidth_mhz", 80),
        "payload_bytes": section.getint("payload_bytes", fallback=None),
        "warmup_us": section.getfloat("warmup_us", 100_000.0),
        "measure_us": section.getfloat("measure_us", 10_000_000.0),
        "beacon_bytes": section.getint("beacon_bytes", 300),
        "collect_trace": trace,
    }
    if section.get("beacon_interval_us") is not None:
        kwargs["beacon_interval_us"] = section.getfloat("beacon_interval_us")
    for key in ("t_wifi_us", "t_laa_us"):
        if section.get(key) is not None:
            kwargs[key] = section.getfloat(key)
    if seed_override is not None:
        kwargs["seed"] = seed_override
    elif section.get("seed") is not None:
        kwargs["seed"] = section.getint("seed")
    else:
        kwargs["seed"] = default_seed()
    for section_name, kwarg in (("wifi", "wifi"), ("laa", "laa")):
        if cp.has_section(section_name):
            body = cp[section_name]
            if body.get("preset"):
                kwargs[kwarg] = load_preset(body["preset"])
            else:
                text = f"[{section_name}]\n" + "\n".join(
                    f"{k} = {v}" for k, v in body.items())
                kwargs[kwarg] = profile_from_text(text)
        elif section.get(f"{section_name}_preset"):
            kwargs[kwarg] = load_preset(section.get(f"{section_name}_preset"))
    try:
        return SimConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid simulation config: {exc}") from exc


def cmd_simulate(args) -> int:
    config = _sim_config_from_file(args.config, args.seed, args.trace is not None)
    result = run_simulation(config)
    record = result.to_dict()
    columns = list(record)
    _emit(columns, [[record[c] for c in columns]], args.format, args.out,
          header_lines=[f"seed = {config.seed}", f"mode = {config.mode}"])
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(result.trace))
            if result.trace:
                fh.write("\n")
    return 0


def cmd_optimize(args) -> int:
    scenario = scenario_for(args.bandwidth[0], args.laa_class[0], args.payload)
    pick = best_dma(args.bandwidth[0], args.ratio[0], scenario, alpha=args.alpha)
    columns = ["approach", "c_w_mbps", "c_l_mbps", "aggregated_mbps",
               "recommended", "feasible"]
    rows = [["dtm", round(pick.dtm.c_w_mbps, 2), round(pick.dtm.c_l_mbps, 2),
             round(pick.dtm.aggregated_mbps, 2),
             pick.recommendation == "dtm", True]]
    if pick.dfm is not None:
        rows.append(["dfm", round(pick.dfm.c_w_mbps, 2), round(pick.dfm.c_l_mbps, 2),
                     round(pick.dfm.aggregated_mbps, 2),
                     pick.recommendation == "dfm", True])
    else:
        rows.append(["dfm", 0.0, 0.0, 0.0, False, False])
    header = [f"recommendation = {pick.recommendation}",
              f"alpha = {args.alpha:g}"]
    if pick.tie:
        header.append("tie = true")
    _emit(columns, rows, args.format, args.out, header)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coexcap",
        description="Capacity models and MAC simulation for unlicensed-channel sharing")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--payload", type=int, default=1500)
        p.add_argument("--bandwidth", type=int, nargs="+", default=[80])
        p.add_argument("--ratio", type=float, nargs="+", default=[0.25, 0.5, 0.75])
        p.add_argument("--class", dest="laa_class", type=int, nargs="+",
                       choices=(1, 4), default=[1])

    p_table = sub.add_parser("table", help="emit one of the built-in result tables")
    p_table.add_argument("table_id", type=int, choices=tables.TABLE_IDS)
    add_common(p_table)
    p_table.set_defaults(func=cmd_table)

    p_sweep = sub.add_parser("sweep", help="capacity grid over the sharing design space")
    add_common(p_sweep)
    p_sweep.add_argument("--regimes", nargs="+", default=["coex", "dtm", "dfm"],
                         choices=("coex", "dtm", "dfm", "nc"))
    p_sweep.add_argument("--t-wifi", type=float, default=None,
                         help="fix the Wi-Fi window (us) instead of splitting 10 ms")
    p_sweep.add_argument("--curve", choices=("usage", "dtm-window-efficiency"),
                         default=None, help="emit a curve instead of the grid")
    p_sweep.add_argument("--windows", type=float, nargs="+",
                         default=[1000, 2000, 5940, 10000, 20000, 50000],
                         help="window lengths (us) for curve mode")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="run one seeded simulation from a config file")
    p_sim.add_argument("config", help="structured text config ([simulation] section)")
    add_common(p_sim)
    p_sim.add_argument("--trace", default=None,
                       help="also write the frame trace to this path")
    p_sim.set_defaults(func=cmd_simulate)

    p_opt = sub.add_parser("optimize", help="recommend the better sharing approach")
    add_common(p_opt)
    p_opt.add_argument("--alpha", type=float, default=0.5)
    p_opt.set_defaults(func=cmd_optimize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CoexcapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
