"""PHY/MAC parameter sets, peak-rate tables, and burst-size arithmetic.

All durations are float microseconds (Mbps and bits/us are numerically the
same unit), all sizes are bytes.  Profiles are immutable after construction
and every function here is pure.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field

from .errors import ConfigError, UnsupportedBandwidthError

AMPDU_HARD_LIMIT_MPDUS = 64      # block ACK window
AMPDU_MAX_EXP = 7
OFDM_SYMBOL_US = 4.0             # symbol duration used for pad alignment
SERVICE_BITS = 16                # PLCP service field
TAIL_BITS = 6


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class WifiMacProfile:
    """802.11ac MAC/PHY parameters for a downlink A-MPDU transmitter.

    Defaults are the standard VHT values used throughout the evaluation;
    ``difs_us`` is derived from ``sifs_us + aifsn * slot_us`` when omitted.
    """

    slot_us: float = 9.0
    aifsn: int = 2
    sifs_us: float = 16.0
    difs_us: float | None = None
    cw_min: int = 16                 # window size; counters drawn from [0, CW-1]
    cw_max: int = 1024
    max_retries: int = 7
    basic_rate_mbps: float = 6.0
    max_ppdu_us: float = 5484.0      # VHT PPDU duration bound
    ampdu_exp: int = 7
    max_mpdus: int = 64
    phy_header_us: float = 40.0
    delimiter_bytes: int = 4
    mac_header_bytes: int = 34
    llc_header_bytes: int = 8
    payload_bytes: int = 1500
    block_ack_bytes: int = 32
    ack_timeout_us: float = 50.0
    beacon_interval_us: float = 102_400.0   # simulator only
    # Accounting refinements, disabled (0.0) in the published capacity model:
    # a separate preamble on the block-ACK leg and OFDM-symbol pad rounding.
    ba_phy_header_us: float = 0.0
    pad_symbol_us: float = 0.0

    def __post_init__(self):
        if self.difs_us is None:
            object.__setattr__(self, "difs_us", self.sifs_us + self.aifsn * self.slot_us)
        if abs(self.difs_us - (self.sifs_us + self.aifsn * self.slot_us)) > 1e-9:
            raise ValueError("difs_us must equal sifs_us + aifsn * slot_us")
        if not (_is_power_of_two(self.cw_min) and _is_power_of_two(self.cw_max)):
            raise ValueError("contention windows must be powers of two")
        if self.cw_min > self.cw_max:
            raise ValueError("cw_min must not exceed cw_max")
        if not 0 <= self.ampdu_exp <= AMPDU_MAX_EXP:
            raise ValueError("ampdu_exp out of [0, 7]")
        if not 0 < self.max_mpdus <= AMPDU_HARD_LIMIT_MPDUS:
            raise ValueError("max_mpdus out of (0, 64]")
        for name in ("slot_us", "sifs_us", "basic_rate_mbps", "max_ppdu_us",
                     "phy_header_us", "payload_bytes", "block_ack_bytes",
                     "ack_timeout_us", "mac_header_bytes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def mpdu_bytes(self) -> int:
        """MPDU without its delimiter: MAC + LLC headers + payload."""
        return self.mac_header_bytes + self.llc_header_bytes + self.payload_bytes

    @property
    def subframe_bytes(self) -> int:
        """One A-MPDU subframe: delimiter + MPDU."""
        return self.delimiter_bytes + self.mpdu_bytes


@dataclass(frozen=True)
class LaaClassProfile:
    """LAA LBT parameters for one channel-access priority class."""

    laa_class: int
    defer_slots: int                 # m_l
    cw_min: int
    cw_max: int
    max_retries: int
    txop_coex_us: float              # burst bound while contending with Wi-Fi
    txop_shared_us: float            # burst bound under exclusive operation
    slot_us: float = 9.0
    defer_base_us: float = 16.0      # T_f
    defer_total_us: float | None = None
    laa_slot_us: float = 500.0
    gamma_us: float | None = None    # mean wait to the next slot boundary
    per_carrier_rate_mbps: float | None = None
    multichannel_cca: str = "type-a2"    # single CCA counter for all carriers

    def __post_init__(self):
        if self.defer_total_us is None:
            object.__setattr__(
                self, "defer_total_us",
                self.defer_base_us + self.defer_slots * self.slot_us)
        if abs(self.defer_total_us
               - (self.defer_base_us + self.defer_slots * self.slot_us)) > 1e-9:
            raise ValueError("defer_total_us must equal defer_base_us + defer_slots * slot_us")
        if self.gamma_us is None:
            object.__setattr__(self, "gamma_us", self.laa_slot_us / 2.0)
        if abs(self.gamma_us - self.laa_slot_us / 2.0) > 1e-9:
            raise ValueError("gamma_us must equal laa_slot_us / 2")
        if self.cw_min > self.cw_max:
            raise ValueError("cw_min must not exceed cw_max")
        if self.multichannel_cca not in ("type-a1", "type-a2", "type-b"):
            raise ValueError("unknown multichannel CCA type")
        if self.per_carrier_rate_mbps is None:
            object.__setattr__(self, "per_carrier_rate_mbps",
                               DEFAULT_RATE_TABLE.laa_slope_mbps())

    def txop_us(self, shared: bool) -> float:
        """Burst bound for the operating regime (exclusive windows use the larger one)."""
        return self.txop_shared_us if shared else self.txop_coex_us


@dataclass(frozen=True)
class PhyRateTable:
    """Peak physical data rates (Mbps) per channel bandwidth (MHz)."""

    wifi_rates: dict = field(default_factory=lambda: {
        20: 86.7, 40: 200.0, 80: 433.3, 160: 866.7})
    laa_rates: dict = field(default_factory=lambda: {
        20: 75.4, 40: 150.8, 60: 226.1, 80: 301.5, 100: 376.9})

    def wifi_rate(self, bandwidth_mhz: int) -> float:
        try:
            return self.wifi_rates[bandwidth_mhz]
        except KeyError:
            raise UnsupportedBandwidthError(
                f"no Wi-Fi rate for {bandwidth_mhz} MHz "
                f"(supported: {sorted(self.wifi_rates)})") from None

    def laa_slope_mbps(self) -> float:
        # least-squares per-carrier rate through the origin
        pts = [(bw // 20, rate) for bw, rate in self.laa_rates.items()]
        return sum(n * r for n, r in pts) / sum(n * n for n, _ in pts)

    def laa_rate(self, bandwidth_mhz: int) -> float:
        if bandwidth_mhz <= 0 or bandwidth_mhz % 20:
            raise UnsupportedBandwidthError(
                f"LAA bandwidth must be a positive multiple of 20 MHz, got {bandwidth_mhz}")
        if bandwidth_mhz in self.laa_rates:
            return self.laa_rates[bandwidth_mhz]
        return (bandwidth_mhz // 20) * self.laa_slope_mbps()


DEFAULT_RATE_TABLE = PhyRateTable()


def peak_phy_rate(rat: str, bandwidth_mhz: int,
                  table: PhyRateTable = DEFAULT_RATE_TABLE) -> float:
    """Peak PHY rate in Mbps for ``rat`` ("wifi" or "laa") at the given width."""
    kind = rat.lower()
    if kind in ("wifi", "w"):
        return table.wifi_rate(bandwidth_mhz)
    if kind in ("laa", "l"):
        return table.laa_rate(bandwidth_mhz)
    raise ValueError(f"unknown RAT {rat!r}")


def contention_window(profile, stage: int) -> int:
    """Window size at retransmission stage ``stage``: min(cw_min * 2**stage, cw_max)."""
    if stage < 0:
        raise ValueError("stage must be non-negative")
    # cap the shift so huge stages cannot overflow before the clamp
    grown = profile.cw_min << min(stage, 32)
    return min(grown, profile.cw_max)


def ampdu_limit_bytes(ampdu_exp: int, mpdu_length_bytes: int) -> int:
    """Aggregated burst size bound: min(2**(13+exp) - 1, 64 * (mpdu + 4 B delimiter))."""
    if not 0 <= ampdu_exp <= AMPDU_MAX_EXP:
        raise ValueError("ampdu_exp out of [0, 7]")
    if mpdu_length_bytes <= 0:
        raise ValueError("mpdu_length_bytes must be positive")
    return min(2 ** (13 + ampdu_exp) - 1,
               AMPDU_HARD_LIMIT_MPDUS * (mpdu_length_bytes + 4))


def max_mpdus_per_burst(profile: WifiMacProfile, data_rate_mbps: float,
                        duration_cap_us: float) -> int:
    """Largest MPDU count whose PPDU satisfies the byte and airtime bounds.

    The airtime bound is phy_header + N * subframe_bits / rate <=
    min(max_ppdu_us, duration_cap_us); the byte bound comes from
    :func:`ampdu_limit_bytes`.  Returns 0 when a single MPDU does not fit.
    """
    if data_rate_mbps <= 0:
        raise ValueError("data_rate_mbps must be positive")
    if duration_cap_us <= 0:
        return 0
    cap = min(profile.max_ppdu_us, duration_cap_us)
    airtime_per_mpdu = profile.subframe_bytes * 8 / data_rate_mbps
    budget = cap - profile.phy_header_us
    if budget < 0:
        return 0
    by_airtime = int(budget / airtime_per_mpdu + 1e-9)
    limit = ampdu_limit_bytes(profile.ampdu_exp, profile.mpdu_bytes)
    by_bytes = limit // profile.subframe_bytes
    return max(0, min(profile.max_mpdus, by_airtime, by_bytes))


def padded_airtime_us(psdu_bits: int, rate_mbps: float,
                      symbol_us: float = OFDM_SYMBOL_US) -> float:
    """PSDU airtime rounded up to whole OFDM symbols, incl. service/tail bits."""
    bits_per_symbol = rate_mbps * symbol_us
    symbols = math.ceil((SERVICE_BITS + psdu_bits + TAIL_BITS) / bits_per_symbol)
    return symbols * symbol_us


# ---------------------------------------------------------------------------
# presets and key/value serialization
# ---------------------------------------------------------------------------

def wifi_default() -> WifiMacProfile:
    return WifiMacProfile()


def laa_class1() -> LaaClassProfile:
    return LaaClassProfile(laa_class=1, defer_slots=1, cw_min=4, cw_max=16,
                           max_retries=6, txop_coex_us=2000.0, txop_shared_us=2000.0)


def laa_class4() -> LaaClassProfile:
    return LaaClassProfile(laa_class=4, defer_slots=7, cw_min=16, cw_max=1024,
                           max_retries=10, txop_coex_us=8000.0, txop_shared_us=10_000.0)


#: Named presets accepted anywhere a profile can be configured.
PRESETS = {
    "table2-wifi": wifi_default,
    "table3-laa": laa_class1,      # common LAA timing, class-1 contention
    "table4-class1": laa_class1,
    "table5-class4": laa_class4,
    "wifi-default": wifi_default,
    "laa-class1": laa_class1,
    "laa-class4": laa_class4,
}


def load_preset(name: str):
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r} (choose from {sorted(PRESETS)})") from None


_SKIP_KEYS = {"multichannel_cca"}


def profile_to_text(profile) -> str:
    """Serialize a profile to a ``key = value`` section ([wifi] or [laa])."""
    section = "wifi" if isinstance(profile, WifiMacProfile) else "laa"
    cp = configparser.ConfigParser()
    cp[section] = {}
    for f in profile.__dataclass_fields__:
        value = getattr(profile, f)
        cp[section][f] = str(value)
    out = io.StringIO()
    cp.write(out)
    return out.getvalue()


def _coerce(field_type: str, raw: str):
    raw = raw.strip()
    if field_type == "int":
        return int(raw)
    if field_type == "float" or field_type.startswith("float"):
        return float(raw)
    return raw


def profile_from_text(text: str):
    """Parse a profile serialized by :func:`profile_to_text`."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"bad profile text: {exc}") from exc
    if cp.has_section("wifi"):
        cls, section = WifiMacProfile, "wifi"
    elif cp.has_section("laa"):
        cls, section = LaaClassProfile, "laa"
    else:
        raise ConfigError("expected a [wifi] or [laa] section")
    kwargs = {}
    for key, raw in cp[section].items():
        if key not in cls.__dataclass_fields__:
            raise ConfigError(f"unknown {section} parameter {key!r}")
        if key in _SKIP_KEYS:
            kwargs[key] = raw.strip()
            continue
        kwargs[key] = _coerce(cls.__dataclass_fields__[key].type, raw)
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {section} profile: {exc}") from exc

