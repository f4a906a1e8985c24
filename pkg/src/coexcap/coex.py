"""Saturation-throughput model for Wi-Fi and LAA contending on one channel.

Couples two per-technology backoff chains through collision and
countdown-blocking probabilities, solves the resulting fixed point, and
turns the equilibrium into event probabilities, mean slot duration and
per-technology throughput.  The no-coexistence capacity is the same model
with the other technology zeroed out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import params
from .errors import ConvergenceError, DegenerateBlockingError, EmptyBurstError
from .params import (DEFAULT_RATE_TABLE, LaaClassProfile, WifiMacProfile,
                     contention_window, max_mpdus_per_burst)


@dataclass(frozen=True)
class CoexScenario:
    """Full input to the analytical model for one channel configuration."""

    wifi: WifiMacProfile
    laa: LaaClassProfile
    bandwidth_mhz: int
    n_w: int = 1
    n_l: int = 1
    p_fc: float = 1.0          # 1.0 once bursts are long A-MPDUs
    aifs_n: int = 2
    wifi_rate_mbps: float | None = None
    laa_rate_mbps: float | None = None

    def __post_init__(self):
        if self.n_w < 0 or self.n_l < 0 or self.n_w + self.n_l < 1:
            raise ValueError("need at least one transmitter")
        if not 0.0 <= self.p_fc <= 1.0:
            raise ValueError("p_fc must be a probability")
        if self.wifi_rate_mbps is None:
            object.__setattr__(self, "wifi_rate_mbps",
                               DEFAULT_RATE_TABLE.wifi_rate(self.bandwidth_mhz))
        if self.laa_rate_mbps is None:
            object.__setattr__(self, "laa_rate_mbps",
                               DEFAULT_RATE_TABLE.laa_rate(self.bandwidth_mhz))

    @property
    def payload_bytes(self) -> int:
        return self.wifi.payload_bytes

    @property
    def cca_min(self) -> int:
        return min(self.aifs_n, self.laa.defer_slots)

    def mpdus_per_burst(self, duration_cap_us: float | None = None) -> int:
        cap = self.wifi.max_ppdu_us if duration_cap_us is None else duration_cap_us
        return max_mpdus_per_burst(self.wifi, self.wifi_rate_mbps, cap)


@dataclass(frozen=True)
class Equilibrium:
    tau_w: float
    tau_l: float
    pc_w: float
    pc_l: float
    pb_w: float
    pb_l: float
    residual: float
    iterations: int

    def to_dict(self) -> dict:
        return {"tau_w": self.tau_w, "tau_l": self.tau_l,
                "pc_w": self.pc_w, "pc_l": self.pc_l,
                "pb_w": self.pb_w, "pb_l": self.pb_l,
                "residual": self.residual, "iterations": self.iterations}


@dataclass(frozen=True)
class EventProbs:
    """Disjoint outcomes of one generalized backoff slot; they sum to 1."""

    p_idle: float
    ps_w: float
    ps_l: float
    pc_ww: float
    pc_ll: float
    pc_wl: float

    def total(self) -> float:
        return (self.p_idle + self.ps_w + self.ps_l
                + self.pc_ww + self.pc_ll + self.pc_wl)

    def to_dict(self) -> dict:
        return {"p_idle": self.p_idle, "ps_w": self.ps_w, "ps_l": self.ps_l,
                "pc_ww": self.pc_ww, "pc_ll": self.pc_ll, "pc_wl": self.pc_wl}


@dataclass(frozen=True)
class BurstDurations:
    """Event durations in us; LAA collisions and successes last the same."""

    ts_w: float
    tc_w: float
    ts_l: float
    tc_l: float
    t_tail_pad_data: float = 0.0
    t_tail_pad_ba: float = 0.0


# ---------------------------------------------------------------------------
# burst durations
# ---------------------------------------------------------------------------

def _tail_pad_us(psdu_bits: float, rate_mbps: float, symbol_us: float) -> float:
    """Extra airtime to finish the PSDU on an OFDM symbol boundary (0 if disabled)."""
    if symbol_us <= 0.0:
        return 0.0
    raw = psdu_bits / rate_mbps
    return params.padded_airtime_us(int(psdu_bits), rate_mbps, symbol_us) - raw


def _resolve_n_mpdus(scenario: CoexScenario, n_mpdus: int | None,
                     duration_cap_us: float | None) -> int:
    n = scenario.mpdus_per_burst(duration_cap_us) if n_mpdus is None else n_mpdus
    if n <= 0:
        raise EmptyBurstError("no MPDU fits the active duration cap")
    return n


def wifi_success_duration(scenario: CoexScenario, n_mpdus: int | None = None,
                          duration_cap_us: float | None = None) -> float:
    """Channel time of a successful Wi-Fi burst: defer, data PPDU, block-ACK exchange."""
    w = scenario.wifi
    n = _resolve_n_mpdus(scenario, n_mpdus, duration_cap_us)
    psdu_bits = n * w.subframe_bytes * 8
    ba_bits = w.block_ack_bytes * 8
    return (w.difs_us + w.phy_header_us
            + psdu_bits / scenario.wifi_rate_mbps
            + _tail_pad_us(psdu_bits, scenario.wifi_rate_mbps, w.pad_symbol_us)
            + w.sifs_us + w.ba_phy_header_us
            + ba_bits / w.basic_rate_mbps
            + _tail_pad_us(ba_bits, w.basic_rate_mbps, w.pad_symbol_us))


def wifi_collision_duration(scenario: CoexScenario, n_mpdus: int | None = None,
                            duration_cap_us: float | None = None) -> float:
    """Channel time of a collided Wi-Fi burst: the ACK never arrives."""
    w = scenario.wifi
    n = _resolve_n_mpdus(scenario, n_mpdus, duration_cap_us)
    psdu_bits = n * w.subframe_bytes * 8
    return (w.difs_us + w.phy_header_us
            + psdu_bits / scenario.wifi_rate_mbps
            + _tail_pad_us(psdu_bits, scenario.wifi_rate_mbps, w.pad_symbol_us)
            + w.ack_timeout_us)


def laa_burst_duration(profile: LaaClassProfile, shared: bool = False,
                       txop_us: float | None = None) -> float:
    """Slot-alignment wait plus the burst; identical for success and collision."""
    txop = profile.txop_us(shared) if txop_us is None else txop_us
    return profile.gamma_us + txop


def burst_durations(scenario: CoexScenario, wifi_cap_us: float | None = None,
                    laa_txop_us: float | None = None,
                    shared: bool = False) -> BurstDurations:
    w = scenario.wifi
    n = _resolve_n_mpdus(scenario, None, wifi_cap_us)
    psdu_bits = n * w.subframe_bytes * 8
    laa_dur = laa_burst_duration(scenario.laa, shared, laa_txop_us)
    return BurstDurations(
        ts_w=wifi_success_duration(scenario, n),
        tc_w=wifi_collision_duration(scenario, n),
        ts_l=laa_dur,
        tc_l=laa_dur,
        t_tail_pad_data=_tail_pad_us(psdu_bits, scenario.wifi_rate_mbps, w.pad_symbol_us),
        t_tail_pad_ba=_tail_pad_us(w.block_ack_bytes * 8, w.basic_rate_mbps, w.pad_symbol_us),
    )


# ---------------------------------------------------------------------------
# backoff chain and coupling
# ---------------------------------------------------------------------------

def backoff_root_probability(profile, pc: float, pb: float) -> float:
    """Stationary probability of the stage-0, counter-0 chain state."""
    if pb >= 1.0:
        raise DegenerateBlockingError("blocking probability of 1 stalls the countdown")
    total = 0.0
    for r in range(profile.max_retries + 1):
        cw = contention_window(profile, r)
        total += pc ** r * (1.0 + (2.0 + (1.0 - pb) * (cw - 1)) / (2.0 * (1.0 - pb)))
    return 1.0 / total


def transmission_probability(b00: float, pc: float, max_retries: int) -> float:
    """Probability of transmitting in a randomly chosen slot."""
    return b00 * sum(pc ** r for r in range(max_retries + 1))


def _pow_n(base: float, n: int) -> float:
    # (1 - tau)**(n - 1) with n = 0 only ever occurs alongside tau = 0
    if n <= 0:
        return 1.0
    return base ** n


def coupling_step(tau_w: float, tau_l: float, scenario: CoexScenario):
    """Collision and countdown-blocking probabilities given both transmit rates."""
    n_w, n_l = scenario.n_w, scenario.n_l
    quiet_w_peers = _pow_n(1.0 - tau_w, n_w - 1)   # no other Wi-Fi node
    quiet_w_all = _pow_n(1.0 - tau_w, n_w)
    quiet_l_peers = _pow_n(1.0 - tau_l, n_l - 1)
    quiet_l_all = _pow_n(1.0 - tau_l, n_l)
    p_fc = scenario.p_fc

    pc_w = 1.0 - quiet_l_all * quiet_w_peers
    pc_l = 1.0 - ((1.0 - p_fc) + p_fc * quiet_w_all) * quiet_l_peers
    exp_w = scenario.aifs_n - scenario.cca_min + 1
    exp_l = scenario.laa.defer_slots - scenario.cca_min + 1
    pb_w = 1.0 - (quiet_l_all * quiet_w_peers) ** exp_w
    pb_l = 1.0 - (quiet_w_all * quiet_l_peers) ** exp_l
    return pc_w, pc_l, pb_w, pb_l


def _tau_pair(pc_w, pc_l, pb_w, pb_l, scenario):
    if scenario.n_w > 0:
        b_w = backoff_root_probability(scenario.wifi, pc_w, pb_w)
        tau_w = transmission_probability(b_w, pc_w, scenario.wifi.max_retries)
    else:
        tau_w = 0.0
    if scenario.n_l > 0:
        b_l = backoff_root_probability(scenario.laa, pc_l, pb_l)
        tau_l = transmission_probability(b_l, pc_l, scenario.laa.max_retries)
    else:
        tau_l = 0.0
    return tau_w, tau_l


def solve_equilibrium(scenario: CoexScenario, tol: float = 1e-10,
                      max_iterations: int = 10_000,
                      damping: float = 0.5) -> Equilibrium:
    """Damped Picard iteration on (tau_w, tau_l); deterministic for a scenario."""
    tau_w = 0.05 if scenario.n_w else 0.0
    tau_l = 0.05 if scenario.n_l else 0.0
    residual = math.inf
    for iteration in range(1, max_iterations + 1):
        pc_w, pc_l, pb_w, pb_l = coupling_step(tau_w, tau_l, scenario)
        new_w, new_l = _tau_pair(pc_w, pc_l, pb_w, pb_l, scenario)
        residual = max(abs(new_w - tau_w), abs(new_l - tau_l))
        if residual <= tol:
            pc_w, pc_l, pb_w, pb_l = coupling_step(new_w, new_l, scenario)
            return Equilibrium(new_w, new_l, pc_w, pc_l, pb_w, pb_l,
                               residual, iteration)
        tau_w += damping * (new_w - tau_w)
        tau_l += damping * (new_l - tau_l)
    raise ConvergenceError(
        f"no fixed point after {max_iterations} iterations (residual {residual:.3e})",
        residual=residual, iterations=max_iterations)


def event_probabilities(eq: Equilibrium, scenario: CoexScenario) -> EventProbs:
    """Per-slot outcome probabilities; an exhaustive disjoint partition."""
    n_w, n_l = scenario.n_w, scenario.n_l
    tau_w, tau_l = eq.tau_w, eq.tau_l
    quiet_w = _pow_n(1.0 - tau_w, n_w)
    quiet_l = _pow_n(1.0 - tau_l, n_l)
    single_w = n_w * tau_w * _pow_n(1.0 - tau_w, n_w - 1) if n_w else 0.0
    single_l = n_l * tau_l * _pow_n(1.0 - tau_l, n_l - 1) if n_l else 0.0
    return EventProbs(
        p_idle=quiet_w * quiet_l,
        ps_w=single_w * quiet_l,
        ps_l=single_l * quiet_w,
        pc_ww=quiet_l * (1.0 - quiet_w - single_w),
        pc_ll=quiet_w * (1.0 - quiet_l - single_l),
        pc_wl=(1.0 - quiet_w) * (1.0 - quiet_l),
    )


def mean_slot_duration(probs: EventProbs, dur: BurstDurations, slot_us: float) -> float:
    """Expected duration of a generalized contention slot."""
    return (probs.ps_w * dur.ts_w + probs.ps_l * dur.ts_l
            + probs.pc_ww * dur.tc_w + probs.pc_ll * dur.tc_l
            + probs.pc_wl * max(dur.tc_w, dur.tc_l)
            + probs.p_idle * slot_us)


LAA_EFFICIENCY = 13.0 / 14.0   # control-overhead discount, applied as given


def wifi_throughput(eq: Equilibrium, scenario: CoexScenario,
                    durations: BurstDurations | None = None,
                    wifi_cap_us: float | None = None,
                    shared: bool = False) -> float:
    """Mean Wi-Fi payload bits per us of generalized slot (= Mbps)."""
    n = scenario.mpdus_per_burst(wifi_cap_us)
    if n == 0:
        return 0.0
    dur = durations or burst_durations(scenario, wifi_cap_us, shared=shared)
    probs = event_probabilities(eq, scenario)
    t_cs = mean_slot_duration(probs, dur, scenario.wifi.slot_us)
    return probs.ps_w * n * scenario.payload_bytes * 8 / t_cs


def laa_throughput(eq: Equilibrium, scenario: CoexScenario,
                   durations: BurstDurations | None = None,
                   laa_txop_us: float | None = None,
                   shared: bool = False) -> float:
    """Mean LAA payload rate; whole trailing slots survive a cross-RAT collision."""
    txop = scenario.laa.txop_us(shared) if laa_txop_us is None else laa_txop_us
    if txop <= 0:
        return 0.0
    try:
        dur = durations or burst_durations(scenario, laa_txop_us=txop, shared=shared)
    except EmptyBurstError:
        # no Wi-Fi burst exists; only the LAA legs of the durations matter
        laa_dur = laa_burst_duration(scenario.laa, shared, txop)
        dur = BurstDurations(ts_w=0.0, tc_w=0.0, ts_l=laa_dur, tc_l=laa_dur)
    probs = event_probabilities(eq, scenario)
    t_cs = mean_slot_duration(probs, dur, scenario.wifi.slot_us)
    slot = scenario.laa.laa_slot_us
    surviving = math.floor(max(0.0, dur.tc_l - dur.tc_w) / slot) * slot
    delivered = probs.ps_l * txop + probs.pc_wl * surviving
    return LAA_EFFICIENCY * scenario.laa_rate_mbps * delivered / t_cs


def coexistence_throughputs(scenario: CoexScenario) -> tuple[float, float]:
    """(Th_w, Th_l) for direct coexistence on the shared channel."""
    eq = solve_equilibrium(scenario)
    dur = burst_durations(scenario, shared=False)
    return (wifi_throughput(eq, scenario, dur),
            laa_throughput(eq, scenario, dur))


def capacity_no_coex(rat: str, scenario: CoexScenario,
                     tx_duration_cap_us: float | None = None) -> float:
    """Capacity of one RAT operating alone, bursts truncated to the cap.

    Wi-Fi truncates by aggregating fewer MPDUs; LAA truncates its burst
    bound.  Returns 0 when nothing fits the cap.
    """
    kind = rat.lower()
    if kind in ("wifi", "w"):
        alone = replace(scenario, n_w=1, n_l=0)
        cap = alone.wifi.max_ppdu_us if tx_duration_cap_us is None else tx_duration_cap_us
        if alone.mpdus_per_burst(cap) == 0:
            return 0.0
        eq = solve_equilibrium(alone)
        return wifi_throughput(eq, alone, wifi_cap_us=cap, shared=True)
    if kind in ("laa", "l"):
        alone = replace(scenario, n_w=0, n_l=1)
        txop = alone.laa.txop_us(shared=True)
        if tx_duration_cap_us is not None:
            txop = min(txop, tx_duration_cap_us)
        if txop <= 0:
            return 0.0
        eq = solve_equilibrium(alone)
        return laa_throughput(eq, alone, laa_txop_us=txop, shared=True)
    raise ValueError(f"unknown RAT {rat!r}")
