"""Builders for the capacity summary tables and figure-style sweeps.

Each builder returns (column_names, rows) with plain Python values so the
CLI can serialize them to CSV or JSON.  Numeric comparisons against
reference values live in the test suite, not here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import sharing
from .coex import CoexScenario, capacity_no_coex, coexistence_throughputs
from .errors import InfeasiblePartitionError
from .params import DEFAULT_RATE_TABLE, laa_class1, laa_class4, wifi_default
from .sharing import (DtmSchedule, best_dma, dfm_capacities, dfm_partition,
                      dtm_capacities, effective_channel_usage, windowed_capacity)
from .sim import DEFAULT_SEED, SimConfig, run_simulation

WIFI_BANDWIDTHS = (20, 40, 80, 160)
SHARING_RATIOS = (0.25, 0.50, 0.75)
TABLE_IDS = (1, 6, 7, 8, 9, 10)

_LAA_PROFILES = {1: laa_class1, 4: laa_class4}


def scenario_for(bandwidth_mhz: int, laa_class: int = 1, payload_bytes: int = 1500,
                 n_w: int = 1, n_l: int = 1) -> CoexScenario:
    wifi = replace(wifi_default(), payload_bytes=payload_bytes)
    return CoexScenario(wifi=wifi, laa=_LAA_PROFILES[laa_class](),
                        bandwidth_mhz=bandwidth_mhz, n_w=n_w, n_l=n_l)


def table1_rows():
    columns = ["bandwidth_mhz", "wifi_rate_mbps", "laa_rate_mbps"]
    rows = []
    widths = sorted(set(DEFAULT_RATE_TABLE.wifi_rates)
                    | set(DEFAULT_RATE_TABLE.laa_rates))
    for bw in widths:
        rows.append([bw,
                     DEFAULT_RATE_TABLE.wifi_rates.get(bw, ""),
                     DEFAULT_RATE_TABLE.laa_rates.get(bw, "")])
    return columns, rows


def wifi_nc_capacity(bandwidth_mhz: int, payload_bytes: int) -> float:
    return capacity_no_coex("wifi", scenario_for(bandwidth_mhz, 1, payload_bytes))


def table6_rows(payload_bytes: int = 1500):
    columns = ["bandwidth_mhz", "c_w_nc_mbps", "c_w_nc_mbps_per_mhz"]
    rows = []
    for bw in WIFI_BANDWIDTHS:
        cap = wifi_nc_capacity(bw, payload_bytes)
        rows.append([bw, round(cap, 2), round(cap / bw, 2)])
    return columns, rows


def table7_rows():
    return table6_rows(payload_bytes=15_000)


def table8_rows(payload_bytes: int = 1500, combined_window_us: float = 10_000.0,
                bandwidths=WIFI_BANDWIDTHS):
    """Best sharing approach per bandwidth and ratio, both priority classes.

    Emits one row per (bandwidth, ratio); capacities are reported under the
    recommended approach of the class-1 configuration, mirroring the
    summary-table convention.  Rows where the frequency split is infeasible
    are flagged, with the time split recommended by default.
    """
    columns = ["bandwidth_mhz", "wifi_ratio", "c_w_mbps", "c_l_class1_mbps",
               "c_l_class4_mbps", "best_dma", "dfm_feasible"]
    rows = []
    for bw in bandwidths:
        for ratio in SHARING_RATIOS:
            picks = {}
            for cls in (1, 4):
                picks[cls] = best_dma(bw, ratio, scenario_for(bw, cls, payload_bytes),
                                      combined_window_us=combined_window_us)
            label = picks[1].recommendation
            reports = {cls: (picks[cls].dtm if label == "dtm" else picks[cls].dfm)
                       for cls in (1, 4)}
            rows.append([bw, ratio,
                         round(reports[1].c_w_mbps, 2),
                         round(reports[1].c_l_mbps, 2),
                         round(reports[4].c_l_mbps, 2),
                         label.upper(),
                         picks[1].dfm_feasible])
    return columns, rows


def table9_rows(seed: int = DEFAULT_SEED, payload_bytes: int = 1500,
                measure_us: float = 10_000_000.0):
    columns = ["bandwidth_mhz", "analytical_mbps", "simulated_mbps"]
    rows = []
    for bw in WIFI_BANDWIDTHS:
        sim = run_simulation(SimConfig(seed=seed, mode="dfm", bandwidth_mhz=bw,
                                       payload_bytes=payload_bytes,
                                       measure_us=measure_us))
        rows.append([bw, round(wifi_nc_capacity(bw, payload_bytes), 2),
                     round(sim.wifi_throughput_mbps, 2)])
    return columns, rows


def dtm_analytical_capacity(bandwidth_mhz: int, ratio: float,
                            t_wifi_us: float = 5000.0,
                            payload_bytes: int = 1500) -> float:
    """Wi-Fi capacity in time-split operation, fixed Wi-Fi window, given ratio."""
    t_laa = t_wifi_us * (1.0 - ratio) / ratio
    schedule = DtmSchedule(t_wifi_us, t_laa)
    report = dtm_capacities(schedule, scenario_for(bandwidth_mhz, 1, payload_bytes))
    return report.c_w_mbps


def table10_rows(seed: int = DEFAULT_SEED, t_wifi_us: float = 5000.0,
                 payload_bytes: int = 1500, measure_us: float = 10_000_000.0):
    columns = ["bandwidth_mhz", "wifi_ratio", "analytical_mbps", "simulated_mbps"]
    rows = []
    for bw in WIFI_BANDWIDTHS:
        for ratio in SHARING_RATIOS:
            t_laa = t_wifi_us * (1.0 - ratio) / ratio
            sim = run_simulation(SimConfig(seed=seed, mode="dtm", bandwidth_mhz=bw,
                                           payload_bytes=payload_bytes,
                                           t_wifi_us=t_wifi_us, t_laa_us=t_laa,
                                           measure_us=measure_us))
            rows.append([bw, ratio,
                         round(dtm_analytical_capacity(bw, ratio, t_wifi_us,
                                                       payload_bytes), 2),
                         round(sim.wifi_throughput_mbps, 2)])
    return columns, rows


def build_table(table_id: int, seed: int = DEFAULT_SEED, payload_bytes: int = 1500,
                measure_us: float = 10_000_000.0):
    if table_id == 1:
        return table1_rows()
    if table_id == 6:
        return table6_rows(payload_bytes)
    if table_id == 7:
        return table7_rows()
    if table_id == 8:
        return table8_rows(payload_bytes)
    if table_id == 9:
        return table9_rows(seed, payload_bytes, measure_us)
    if table_id == 10:
        return table10_rows(seed, payload_bytes=payload_bytes, measure_us=measure_us)
    raise ValueError(f"unsupported table id {table_id} (supported: {TABLE_IDS})")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for capacity sweeps over the sharing design space."""

    bandwidths: tuple[int, ...] = (80,)
    ratios: tuple[float, ...] = SHARING_RATIOS
    classes: tuple[int, ...] = (1,)
    payloads: tuple[int, ...] = (1500,)
    regimes: tuple[str, ...] = ("coex", "dtm", "dfm", "nc")
    combined_window_us: float = 10_000.0
    t_wifi_us: float | None = None     # fixed Wi-Fi window instead of combined split
    output_format: str = "csv"

    def __post_init__(self):
        if not (self.bandwidths and self.ratios and self.classes and self.payloads
                and self.regimes):
            raise ValueError("sweep axes must be non-empty")
        bad = set(self.regimes) - {"coex", "dtm", "dfm", "nc"}
        if bad:
            raise ValueError(f"unknown regimes {sorted(bad)}")
        if any(not 0.0 < r <= 1.0 for r in self.ratios):
            raise ValueError("sharing ratios must be in (0, 1]")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")


def sweep_rows(spec: SweepSpec):
    """One row per grid point and regime; infeasible points are flagged."""
    columns = ["bandwidth_mhz", "wifi_ratio", "laa_class", "payload_bytes",
               "regime", "c_w_mbps", "c_l_mbps", "aggregated_mbps", "feasible"]
    rows = []
    for bw in spec.bandwidths:
        for payload in spec.payloads:
            for cls in spec.classes:
                scenario = scenario_for(bw, cls, payload)
                for ratio in spec.ratios:
                    for regime in spec.regimes:
                        rows.append(_sweep_point(scenario, bw, ratio, cls,
                                                 payload, regime, spec))
    return columns, rows


def _sweep_point(scenario, bw, ratio, cls, payload, regime, spec):
    if regime == "coex":
        c_w, c_l = coexistence_throughputs(scenario)
        return [bw, ratio, cls, payload, regime,
                round(c_w, 2), round(c_l, 2), round(c_w + c_l, 2), True]
    if regime == "nc":
        c_w = capacity_no_coex("wifi", scenario)
        c_l = capacity_no_coex("laa", scenario)
        return [bw, ratio, cls, payload, regime,
                round(c_w, 2), round(c_l, 2), round(c_w + c_l, 2), True]
    if regime == "dtm":
        if spec.t_wifi_us is not None:
            t_w = spec.t_wifi_us
            t_l = t_w * (1.0 - ratio) / ratio
        else:
            t_w = spec.combined_window_us * ratio
            t_l = spec.combined_window_us - t_w
        report = dtm_capacities(DtmSchedule(t_w, t_l), scenario)
    else:
        try:
            report = dfm_capacities(dfm_partition(bw, ratio), scenario)
        except InfeasiblePartitionError:
            return [bw, ratio, cls, payload, regime, 0.0, 0.0, 0.0, False]
    return [bw, ratio, cls, payload, regime,
            round(report.c_w_mbps, 2), round(report.c_l_mbps, 2),
            round(report.aggregated_mbps, 2), True]


def usage_curve_rows(combined_windows_us):
    """Effective channel usage versus combined window length."""
    columns = ["combined_window_us", "effective_usage"]
    return columns, [[w, round(effective_channel_usage(w), 6)]
                     for w in combined_windows_us]


def window_efficiency_rows(windows_us, bandwidth_mhz: int = 80,
                           payload_bytes: int = 1500):
    """Windowed-to-unconstrained capacity ratio per RAT and window length.

    The denominator is the no-coexistence capacity scaled by the share of
    the period the RAT owns, i.e. the capacity if windows were enlarged to
    finish every pending burst.
    """
    columns = ["window_us", "rat", "laa_class", "efficiency"]
    rows = []
    for window in windows_us:
        period = 2 * window + sharing.DEFAULT_DOWNTIME_US
        share = window / period
        scen1 = scenario_for(bandwidth_mhz, 1, payload_bytes)
        windowed_w = windowed_capacity("wifi", window, scen1) * share
        ideal_w = capacity_no_coex("wifi", scen1) * share
        rows.append([window, "wifi", "", round(windowed_w / ideal_w, 6)])
        for cls in (1, 4):
            scen = scenario_for(bandwidth_mhz, cls, payload_bytes)
            windowed_l = windowed_capacity("laa", window, scen) * share
            ideal_l = capacity_no_coex("laa", scen) * share
            rows.append([window, "laa", cls, round(windowed_l / ideal_l, 6)])
    return columns, rows
