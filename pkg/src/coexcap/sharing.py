"""Window and partition arithmetic for coordinated channel sharing.

Time multiplexing (DTM) silences Wi-Fi with a CTS-to-self while scheduled
bursts use the whole channel; frequency multiplexing (DFM) splits the
channel into standard-width subchannels.  This module prices both: the
CTS downtime, window bounds, windowed capacities, partition capacities,
and the recommendation of the better approach for a configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .coex import CoexScenario, capacity_no_coex
from .errors import InfeasiblePartitionError, InvalidWindowError
from .params import (DEFAULT_RATE_TABLE, LaaClassProfile, WifiMacProfile,
                     ampdu_limit_bytes, max_mpdus_per_burst)

#: One CTS frame reserves at most this long (16-bit duration field, us).
MAX_CTS_RESERVATION_US = 32_767.0

#: Admissible durations of a burst-terminating partial subframe (us).
PARTIAL_SUBFRAME_US = (0.0, 214.29, 428.57, 500.0, 642.86,
                       714.29, 785.71, 857.14, 1000.0)

BITS_PER_SYMBOL_FACTOR = 4.0   # OFDM symbol time in us; rate * 4 = bits/symbol
_CTS_PSDU_BITS = 16 + 112 + 6  # service + CTS frame + tail


def cts_downtime(basic_rate_mbps: float = 6.0) -> float:
    """Channel downtime of one Wi-Fi-to-scheduled handover (SIFS + CTS airtime).

    The CTS is sent at the basic rate with a non-HT preamble; its PSDU is
    padded to whole OFDM symbols.  At 6 Mbps this is exactly 60 us.
    """
    if basic_rate_mbps <= 0:
        raise ValueError("basic_rate_mbps must be positive")
    sifs = 16.0
    preamble = 10 * 0.8 + 2 * 4.0
    header = 4.0
    bits_per_symbol = basic_rate_mbps * BITS_PER_SYMBOL_FACTOR
    psdu = math.ceil(_CTS_PSDU_BITS / bits_per_symbol) * 4.0
    return sifs + preamble + header + psdu


DEFAULT_DOWNTIME_US = cts_downtime(6.0)   # 60 us


def cts_airtime(basic_rate_mbps: float = 6.0) -> float:
    """CTS frame airtime alone, without the SIFS wait (44 us at 6 Mbps)."""
    return cts_downtime(basic_rate_mbps) - 16.0


def effective_channel_usage(combined_window_us: float,
                            downtime_us: float = DEFAULT_DOWNTIME_US) -> float:
    """Fraction of time the channel carries traffic under time multiplexing."""
    if combined_window_us <= 0:
        raise InvalidWindowError("combined window must be positive")
    return combined_window_us / (combined_window_us + downtime_us)


# ---------------------------------------------------------------------------
# window bounds and access times
# ---------------------------------------------------------------------------

def wifi_window_bounds(profile: WifiMacProfile, t_wifi_us: float,
                       data_rate_mbps: float,
                       mpdu_length_bytes: int | None = None) -> tuple[float, float]:
    """(min, max) effective length of a Wi-Fi transmission window.

    The minimum guarantees one worst-case channel access; the maximum adds
    the longest transmission that can start just before the window closes.
    """
    t_min = profile.difs_us + profile.cw_min * profile.slot_us
    if t_wifi_us < t_min:
        raise InvalidWindowError(
            f"window {t_wifi_us} us is below the guaranteed-access minimum {t_min} us")
    mpdu = profile.mpdu_bytes if mpdu_length_bytes is None else mpdu_length_bytes
    burst_bytes = ampdu_limit_bytes(profile.ampdu_exp, mpdu)
    longest_tx = min(profile.max_ppdu_us,
                     profile.phy_header_us + burst_bytes * 8 / data_rate_mbps)
    t_block_ack = profile.block_ack_bytes * 8 / profile.basic_rate_mbps
    return t_min, t_wifi_us + longest_tx + profile.sifs_us + t_block_ack


def laa_window_length(gamma_prime_us: float = 250.0, n_slots: int = 0,
                      partial_k_us: float = 0.0) -> float:
    """Length of a scheduled window: alignment wait + whole slots + partial subframe.

    The alignment wait defaults to its expectation, half a scheduled slot.
    """
    if n_slots < 0:
        raise InvalidWindowError("slot count must be non-negative")
    if gamma_prime_us < 0:
        raise InvalidWindowError("alignment wait must be non-negative")
    if not any(abs(partial_k_us - k) <= 0.01 for k in PARTIAL_SUBFRAME_US):
        raise InvalidWindowError(
            f"{partial_k_us} us is not an admissible partial-subframe duration")
    return gamma_prime_us + n_slots * 500.0 + partial_k_us


@dataclass(frozen=True)
class ChannelAccessTime:
    """Mean uncontended wait before a transmitter occupies an idle medium."""

    t_cax_us: float

    def __post_init__(self):
        if self.t_cax_us <= 0:
            raise ValueError("access time must be positive")


def wifi_access_time(profile: WifiMacProfile) -> ChannelAccessTime:
    """DIFS plus the mean backoff countdown."""
    return ChannelAccessTime(profile.difs_us
                             + profile.slot_us * (profile.cw_min - 1) / 2.0)


def laa_access_time(profile: LaaClassProfile) -> ChannelAccessTime:
    """Defer, mean backoff, and the mean wait for the next slot boundary."""
    return ChannelAccessTime(profile.defer_total_us
                             + profile.slot_us * (profile.cw_min - 1) / 2.0
                             + profile.gamma_us)


# ---------------------------------------------------------------------------
# windowed (DTM) capacities
# ---------------------------------------------------------------------------

def _wifi_full_burst_ppdu_us(scenario: CoexScenario) -> float:
    """Duration of the largest data PPDU the profile allows at the scenario rate."""
    w = scenario.wifi
    n = max_mpdus_per_burst(w, scenario.wifi_rate_mbps, w.max_ppdu_us)
    return w.phy_header_us + n * w.subframe_bytes * 8 / scenario.wifi_rate_mbps


def windowed_capacity_from(window_us: float, txop_us: float, t_cax_us: float,
                           capacity_fn) -> float:
    """Core windowed-capacity arithmetic with an injectable burst pricer.

    Whole access-plus-burst periods contribute the full burst capacity;
    the window remainder contributes a burst truncated to the time left
    after one more channel access.  ``capacity_fn(cap_us)`` prices a burst
    bound in Mbps.
    """
    if window_us <= 0:
        return 0.0
    period = txop_us + t_cax_us
    full = math.floor(window_us / period)
    remainder = window_us - full * period
    capacity = full * (period / window_us) * capacity_fn(txop_us)
    tail_cap = max(0.0, remainder - t_cax_us)
    if tail_cap > 0.0:
        capacity += (remainder / window_us) * capacity_fn(tail_cap)
    return capacity


def windowed_capacity(rat: str, window_us: float, scenario: CoexScenario) -> float:
    """Capacity of one RAT whose bursts must fit inside a recurring window."""
    kind = rat.lower()
    if kind in ("wifi", "w"):
        txop = _wifi_full_burst_ppdu_us(scenario)
        t_cax = wifi_access_time(scenario.wifi).t_cax_us
    elif kind in ("laa", "l"):
        txop = scenario.laa.txop_us(shared=True)
        t_cax = laa_access_time(scenario.laa).t_cax_us
    else:
        raise ValueError(f"unknown RAT {rat!r}")
    return windowed_capacity_from(window_us, txop, t_cax,
                                  lambda cap: capacity_no_coex(rat, scenario, cap))


@dataclass(frozen=True)
class DtmSchedule:
    """A pair of alternating transmission windows plus the handover downtime."""

    t_wifi_us: float
    t_laa_us: float
    t_downtime_us: float = DEFAULT_DOWNTIME_US

    def __post_init__(self):
        if self.t_wifi_us < 0 or self.t_laa_us < 0:
            raise InvalidWindowError("window lengths must be non-negative")
        if self.t_wifi_us == 0 and self.t_laa_us == 0:
            raise InvalidWindowError("at least one window must be positive")

    @property
    def sharing_ratio(self) -> float:
        return self.t_wifi_us / (self.t_wifi_us + self.t_laa_us)

    @property
    def period_us(self) -> float:
        return self.t_wifi_us + self.t_laa_us + self.t_downtime_us

    @property
    def reservations(self) -> int:
        """CTS frames needed to hold the scheduled window (chained if > 32.767 ms)."""
        if self.t_laa_us == 0:
            return 0
        return math.ceil(self.t_laa_us / MAX_CTS_RESERVATION_US)


@dataclass(frozen=True)
class CapacityReport:
    """Per-RAT capacities of one configuration under one sharing regime."""

    regime: str                      # coexistence | dtm | dfm | nc
    c_w_mbps: float
    c_l_mbps: float
    alpha: float = 0.5
    bandwidth_mhz: int | None = None
    wifi_ratio: float | None = None
    laa_class: int | None = None
    payload_bytes: int | None = None
    feasible: bool = True
    note: str = ""

    @property
    def aggregated_mbps(self) -> float:
        # equal priorities report the plain sum; otherwise the weighted utility
        if self.alpha == 0.5:
            return self.c_w_mbps + self.c_l_mbps
        return self.utility

    @property
    def utility(self) -> float:
        return self.alpha * self.c_w_mbps + (1.0 - self.alpha) * self.c_l_mbps

    def to_dict(self) -> dict:
        return {"regime": self.regime, "c_w_mbps": self.c_w_mbps,
                "c_l_mbps": self.c_l_mbps, "aggregated_mbps": self.aggregated_mbps,
                "alpha": self.alpha, "bandwidth_mhz": self.bandwidth_mhz,
                "wifi_ratio": self.wifi_ratio, "laa_class": self.laa_class,
                "payload_bytes": self.payload_bytes, "feasible": self.feasible,
                "note": self.note}


def dtm_capacities(schedule: DtmSchedule, scenario: CoexScenario,
                   alpha: float = 0.5) -> CapacityReport:
    """Windowed capacities scaled by each technology's share of the period."""
    period = schedule.period_us
    c_w = (windowed_capacity("wifi", schedule.t_wifi_us, scenario)
           * schedule.t_wifi_us / period) if schedule.t_wifi_us else 0.0
    c_l = (windowed_capacity("laa", schedule.t_laa_us, scenario)
           * schedule.t_laa_us / period) if schedule.t_laa_us else 0.0
    return CapacityReport("dtm", c_w, c_l, alpha,
                          bandwidth_mhz=scenario.bandwidth_mhz,
                          wifi_ratio=schedule.sharing_ratio,
                          laa_class=scenario.laa.laa_class,
                          payload_bytes=scenario.payload_bytes)


# ---------------------------------------------------------------------------
# frequency partitions (DFM)
# ---------------------------------------------------------------------------

STANDARD_WIFI_WIDTHS = (160, 80, 40, 20)


@dataclass(frozen=True)
class DfmPartition:
    """A frequency split: Wi-Fi subchannels plus 20 MHz scheduled carriers."""

    wifi_subchannels: tuple[int, ...]
    laa_carriers: int
    channel_bandwidth_mhz: int = field(default=0)

    def __post_init__(self):
        if any(w not in STANDARD_WIFI_WIDTHS for w in self.wifi_subchannels):
            raise InfeasiblePartitionError("non-standard Wi-Fi subchannel width")
        if self.laa_carriers < 0:
            raise InfeasiblePartitionError("negative carrier count")
        total = sum(self.wifi_subchannels) + 20 * self.laa_carriers
        if self.channel_bandwidth_mhz == 0:
            object.__setattr__(self, "channel_bandwidth_mhz", total)
        elif total != self.channel_bandwidth_mhz:
            raise InfeasiblePartitionError(
                f"partition covers {total} MHz of a {self.channel_bandwidth_mhz} MHz channel")

    @property
    def laa_bandwidth_mhz(self) -> int:
        return 20 * self.laa_carriers


def dfm_partition(channel_bw_mhz: int, wifi_ratio: float) -> DfmPartition:
    """Greedy largest-first split of the Wi-Fi share into standard widths."""
    share = channel_bw_mhz * wifi_ratio
    share_mhz = round(share)
    if abs(share - share_mhz) > 1e-6 or share_mhz % 20:
        raise InfeasiblePartitionError(
            f"{wifi_ratio:.0%} of {channel_bw_mhz} MHz is not a multiple of 20 MHz")
    if share_mhz < 20:
        raise InfeasiblePartitionError("Wi-Fi cannot operate below 20 MHz")
    if share_mhz > channel_bw_mhz:
        raise InfeasiblePartitionError("Wi-Fi share exceeds the channel")
    widths = []
    left = share_mhz
    for width in STANDARD_WIFI_WIDTHS:
        while left >= width:
            widths.append(width)
            left -= width
    return DfmPartition(tuple(widths), (channel_bw_mhz - share_mhz) // 20,
                        channel_bw_mhz)


def dfm_capacities(partition: DfmPartition, scenario: CoexScenario,
                   alpha: float = 0.5) -> CapacityReport:
    """Independent no-coexistence capacities of each side of the split."""
    c_w = 0.0
    for width in partition.wifi_subchannels:
        sub = replace(scenario, bandwidth_mhz=width,
                      wifi_rate_mbps=DEFAULT_RATE_TABLE.wifi_rate(width),
                      laa_rate_mbps=scenario.laa_rate_mbps)
        c_w += capacity_no_coex("wifi", sub)
    if partition.laa_carriers:
        laa_bw = partition.laa_bandwidth_mhz
        sub = replace(scenario, bandwidth_mhz=laa_bw,
                      wifi_rate_mbps=scenario.wifi_rate_mbps,
                      laa_rate_mbps=DEFAULT_RATE_TABLE.laa_rate(laa_bw))
        c_l = capacity_no_coex("laa", sub)
    else:
        c_l = 0.0
    wifi_share = sum(partition.wifi_subchannels) / partition.channel_bandwidth_mhz
    return CapacityReport("dfm", c_w, c_l, alpha,
                          bandwidth_mhz=partition.channel_bandwidth_mhz,
                          wifi_ratio=wifi_share,
                          laa_class=scenario.laa.laa_class,
                          payload_bytes=scenario.payload_bytes)


# ---------------------------------------------------------------------------
# best-approach recommendation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BestDmaResult:
    recommendation: str            # "dtm" or "dfm"
    dtm: CapacityReport
    dfm: CapacityReport | None
    dfm_feasible: bool
    tie: bool = False


def pick_best(dtm_utility: float, dfm_utility: float | None) -> tuple[str, bool]:
    """Argmax with a deterministic tie-break to the more predictable split."""
    if dfm_utility is None:
        return "dtm", False
    if math.isclose(dtm_utility, dfm_utility, rel_tol=1e-12, abs_tol=1e-12):
        return "dfm", True
    return ("dtm", False) if dtm_utility > dfm_utility else ("dfm", False)


def best_dma(channel_bw_mhz: int, wifi_ratio: float, scenario: CoexScenario,
             alpha: float = 0.5, combined_window_us: float = 10_000.0) -> BestDmaResult:
    """Recommend the sharing approach that maximizes the weighted capacity."""
    t_wifi = combined_window_us * wifi_ratio
    schedule = DtmSchedule(t_wifi, combined_window_us - t_wifi)
    dtm = dtm_capacities(schedule, scenario, alpha)
    try:
        partition = dfm_partition(channel_bw_mhz, wifi_ratio)
    except InfeasiblePartitionError:
        return BestDmaResult("dtm", dtm, None, dfm_feasible=False)
    dfm = dfm_capacities(partition, scenario, alpha)
    label, tie = pick_best(dtm.utility, dfm.utility)
    return BestDmaResult(label, dtm, dfm, dfm_feasible=True, tie=tie)
