"""Seeded discrete-event simulator for a one-AP/one-station downlink BSS.

The AP runs saturated downlink A-MPDU traffic with DCF channel access and
block acknowledgments.  In frequency-split (DFM) mode it simply owns its
subchannel; in time-split (DTM) mode it packs bursts into recurring Wi-Fi
windows, silences the BSS with a CTS-to-self whose duration field covers
the scheduled window, and accounts the deterministic scheduled-burst
airtime inside that window.

Unlike the analytical capacity model, transmitted PSDUs are padded to
whole OFDM symbols and beacons are transmitted, so measured throughput
sits slightly below the analytical capacity.  The event clock is integer
nanoseconds; identical configurations (including the seed) produce
identical results and traces.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError
from .params import (DEFAULT_RATE_TABLE, LaaClassProfile, WifiMacProfile,
                     laa_class1, max_mpdus_per_burst, padded_airtime_us)
from .sharing import MAX_CTS_RESERVATION_US, cts_airtime

DEFAULT_SEED = 12345

_NS = 1000  # ns per us


def _ns(us: float) -> int:
    return round(us * _NS)


# Event kinds in tie-break priority order: control traffic before data.
_KIND_PRIORITY = {
    "window-boundary": 0,
    "cts-due": 1,
    "nav-expiry": 2,
    "beacon-due": 3,
    "backoff-expiry": 4,
    "tx-end": 5,
    "ack-end": 6,
    "laa-burst-end": 7,
}


@dataclass(frozen=True, order=True)
class SimEvent:
    """One scheduled occurrence; the queue orders by time, then kind priority."""

    time_ns: int
    priority: int
    seq: int
    kind: str = field(compare=False)
    payload: tuple = field(compare=False, default=())


@dataclass(frozen=True)
class SimConfig:
    seed: int = DEFAULT_SEED
    mode: str = "dfm"                      # "dfm" or "dtm"
    bandwidth_mhz: int = 80
    wifi: WifiMacProfile = field(default_factory=WifiMacProfile)
    laa: LaaClassProfile = field(default_factory=laa_class1)
    payload_bytes: int | None = None
    t_wifi_us: float | None = None         # DTM only
    t_laa_us: float | None = None          # DTM only
    warmup_us: float = 100_000.0           # association + ARP, excluded
    measure_us: float = 10_000_000.0
    beacon_interval_us: float | None = None
    beacon_bytes: int = 300
    collect_trace: bool = False
    inject_delayed_ack_us: float | None = None   # test hook: fakes an uplink overrun

    def __post_init__(self):
        if self.mode not in ("dfm", "dtm"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.measure_us <= 0:
            raise ConfigError("measure_us must be positive")
        if self.mode == "dtm" and (self.t_wifi_us is None or self.t_laa_us is None):
            raise ConfigError("dtm mode needs t_wifi_us and t_laa_us")
        if self.payload_bytes is not None:
            object.__setattr__(self, "wifi",
                               replace(self.wifi, payload_bytes=self.payload_bytes))
        if self.beacon_interval_us is None:
            object.__setattr__(self, "beacon_interval_us",
                               self.wifi.beacon_interval_us)


@dataclass(frozen=True)
class SimCounts:
    transmissions: int
    cts_sent: int
    beacons: int
    window_overruns: int


@dataclass(frozen=True)
class SimResult:
    wifi_throughput_mbps: float
    laa_airtime_throughput_mbps: float
    counts: SimCounts
    seed: int
    measure_us: float
    nav_total_us: float = 0.0
    wifi_window_us: float = 0.0
    trace: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        return {"wifi_throughput_mbps": self.wifi_throughput_mbps,
                "laa_airtime_throughput_mbps": self.laa_airtime_throughput_mbps,
                "transmissions": self.counts.transmissions,
                "cts_sent": self.counts.cts_sent,
                "beacons": self.counts.beacons,
                "window_overruns": self.counts.window_overruns,
                "nav_total_us": self.nav_total_us,
                "wifi_window_us": self.wifi_window_us,
                "measure_us": self.measure_us,
                "seed": self.seed}


def next_cts_instant(busy_until_us: float, window_end_us: float,
                     sifs_us: float = 16.0) -> tuple[float, bool]:
    """When the AP may send the channel-reservation CTS, and whether the
    window overran.

    The AP predicts acknowledgment completions and never preempts them, so
    the CTS goes out one SIFS after the later of the window boundary and
    the last in-flight exchange.
    """
    overrun = busy_until_us > window_end_us
    return max(window_end_us, busy_until_us) + sifs_us, overrun


def laa_burst_layout(t_laa_us: float, txop_us: float,
                     laa_slot_us: float = 500.0) -> list[tuple[int, int]]:
    """Deterministic packing of scheduled bursts into a window.

    Bursts are whole slots, at most one TXOP long, with one slot misused
    between consecutive bursts.  Returns (offset_ns, duration_ns) pairs.
    """
    window = _ns(t_laa_us)
    txop = _ns(txop_us)
    slot = _ns(laa_slot_us)
    out = []
    pos = 0
    while window - pos >= slot:
        burst = min(txop, (window - pos) // slot * slot)
        out.append((pos, burst))
        pos += burst + slot
    return out


def laa_window_airtime(t_laa_us: float, profile: LaaClassProfile,
                       rate_mbps: float, period_us: float) -> float:
    """Scheduled-side payload rate contributed by one window per period (Mbps)."""
    airtime_ns = sum(d for _, d in laa_burst_layout(
        t_laa_us, profile.txop_us(shared=True), profile.laa_slot_us))
    return (13.0 / 14.0) * rate_mbps * (airtime_ns / _NS) / period_us


class _Simulation:
    """Sequential event loop for one run; see module docstring for the model."""

    def __init__(self, config: SimConfig):
        self.cfg = config
        w = config.wifi
        self.wifi = w
        self.rate = DEFAULT_RATE_TABLE.wifi_rate(config.bandwidth_mhz)
        self.laa_rate = DEFAULT_RATE_TABLE.laa_rate(config.bandwidth_mhz)
        self.n_full = max_mpdus_per_burst(w, self.rate, w.max_ppdu_us)

        self.difs_ns = _ns(w.difs_us)
        self.sifs_ns = _ns(w.sifs_us)
        self.slot_ns = _ns(w.slot_us)
        self.ba_air_ns = _ns(padded_airtime_us(w.block_ack_bytes * 8, w.basic_rate_mbps))
        self.cts_air_ns = _ns(cts_airtime(w.basic_rate_mbps))
        # beacons go out at the basic rate behind a non-HT preamble
        self.beacon_air_ns = _ns(20.0 + padded_airtime_us(config.beacon_bytes * 8,
                                                          w.basic_rate_mbps))
        self._data_air_cache: dict[int, int] = {}

        self.rng = np.random.Generator(np.random.Philox(key=[config.seed, 0]))

        self.m0 = _ns(config.warmup_us)
        self.m1 = self.m0 + _ns(config.measure_us)
        self.windowed = config.mode == "dtm" and config.t_laa_us > 0
        self.t_wifi_ns = _ns(config.t_wifi_us) if config.t_wifi_us is not None else 0
        self.t_laa_ns = _ns(config.t_laa_us) if config.t_laa_us is not None else 0

        self.heap: list[SimEvent] = []
        self._seq = 0
        self.window_end = math.inf
        self.counter: int | None = None
        self.busy_until = 0
        self.beacon_pending = False
        self.bits = 0
        self.laa_airtime_ns = 0
        self.nav_total_ns = 0
        self.window_ns = 0
        self.tx = self.cts = self.beacons = self.overruns = 0
        self.overrun_injected = config.inject_delayed_ack_us is None
        self.trace: list[str] = []

    # -- plumbing ----------------------------------------------------------

    def _push(self, time_ns: int, kind: str, payload: tuple = ()):
        self._seq += 1
        heapq.heappush(self.heap, SimEvent(time_ns, _KIND_PRIORITY[kind],
                                           self._seq, kind, payload))

    def _log(self, t_ns: int, node: str, kind: str, dur_ns: int, outcome: str):
        if self.cfg.collect_trace:
            self.trace.append(f"{t_ns / _NS:.3f}\t{node}\t{kind}\t"
                              f"{dur_ns / _NS:.3f}\t{outcome}")

    def _data_air_ns(self, n: int) -> int:
        cached = self._data_air_cache.get(n)
        if cached is None:
            psdu_bits = n * self.wifi.subframe_bytes * 8
            cached = _ns(self.wifi.phy_header_us
                         + padded_airtime_us(psdu_bits, self.rate))
            self._data_air_cache[n] = cached
        return cached

    def _exchange_ns(self, n: int) -> int:
        return self._data_air_ns(n) + self.sifs_ns + self.ba_air_ns

    def _fit_mpdus(self, room_ns: float) -> int:
        n = self.n_full
        while n > 0 and self._exchange_ns(n) > room_ns:
            n -= 1
        return n

    # -- handlers ----------------------------------------------------------

    def _start_access(self, t_ns: int):
        if self.counter is None:
            self.counter = int(self.rng.integers(0, self.wifi.cw_min))
        ready = t_ns + self.difs_ns + self.counter * self.slot_ns
        if ready >= self.window_end:
            usable = max(0, int(self.window_end - t_ns - self.difs_ns) // self.slot_ns)
            self.counter -= min(self.counter, usable)
            return
        self._push(ready, "backoff-expiry")

    def _on_backoff_expiry(self, t_ns: int):
        self.counter = None
        room = self.window_end - t_ns
        if self.beacon_pending:
            if self.beacon_air_ns <= room:
                self._push(t_ns + self.beacon_air_ns, "tx-end", ("beacon",))
            else:
                self.counter = 0
            return
        n = self._fit_mpdus(room)
        if n == 0:
            self.counter = 0
            return
        self._push(t_ns + self._data_air_ns(n), "tx-end", ("data", n))

    def _on_tx_end(self, t_ns: int, payload: tuple):
        if payload[0] == "beacon":
            self.beacons += 1
            self.beacon_pending = False
            self.busy_until = t_ns
            self._log(t_ns - self.beacon_air_ns, "ap", "beacon",
                      self.beacon_air_ns, "ok")
            self._start_access(t_ns)
            return
        n = payload[1]
        self._log(t_ns - self._data_air_ns(n), "ap", "data", self._data_air_ns(n), "ok")
        self._push(t_ns + self.sifs_ns + self.ba_air_ns, "ack-end", (n,))

    def _on_ack_end(self, t_ns: int, payload: tuple):
        n = payload[0]
        self.busy_until = t_ns
        self.tx += 1
        if self.m0 <= t_ns <= self.m1:
            self.bits += n * self.wifi.payload_bytes * 8
        self._log(t_ns - self.ba_air_ns, "sta", "block-ack", self.ba_air_ns, "ok")
        self._start_access(t_ns)

    def _on_beacon_due(self, t_ns: int):
        self.beacon_pending = True
        self._push(t_ns + _ns(self.cfg.beacon_interval_us), "beacon-due")

    def _begin_wifi_window(self, t_ns: int):
        self.window_end = t_ns + self.t_wifi_ns
        lo, hi = max(t_ns, self.m0), min(self.window_end, self.m1)
        self.window_ns += max(0, int(hi - lo))
        self._push(int(self.window_end), "window-boundary")
        self._start_access(t_ns)

    def _on_window_boundary(self, t_ns: int):
        if not self.overrun_injected:
            self.busy_until = t_ns + _ns(self.cfg.inject_delayed_ack_us)
            self.overrun_injected = True
        cts_us, overrun = next_cts_instant(self.busy_until / _NS, t_ns / _NS,
                                           self.wifi.sifs_us)
        if overrun:
            self.overruns += 1
        self._push(_ns(cts_us), "cts-due")

    def _on_cts_due(self, t_ns: int):
        self._log(t_ns, "ap", "cts", self.cts_air_ns, "ok")
        self.cts += math.ceil(self.t_laa_ns / _ns(MAX_CTS_RESERVATION_US))
        laa_start = t_ns + self.cts_air_ns
        self.nav_total_ns += self.t_laa_ns
        for offset, dur in laa_burst_layout(self.t_laa_ns / _NS,
                                            self.cfg.laa.txop_us(shared=True),
                                            self.cfg.laa.laa_slot_us):
            start = laa_start + offset
            # scheduled bursts are deterministic once reserved; account the
            # measured share now, the end event exists for the trace only
            lo, hi = max(start, self.m0), min(start + dur, self.m1)
            self.laa_airtime_ns += max(0, hi - lo)
            self._push(start + dur, "laa-burst-end", (start, dur))
        self._push(laa_start + self.t_laa_ns, "nav-expiry")

    def _on_laa_burst_end(self, t_ns: int, payload: tuple):
        start, dur = payload
        self._log(start, "enb", "laa-burst", dur, "ok")

    def _on_nav_expiry(self, t_ns: int):
        self._begin_wifi_window(t_ns)

    # -- top level ----------------------------------------------------------

    def _warmup_frames(self):
        for t_us, node, kind, dur_us in ((5000, "sta", "assoc-req", 60),
                                         (5100, "ap", "assoc-resp", 60),
                                         (10000, "sta", "arp", 50),
                                         (10100, "ap", "arp", 50)):
            if _ns(t_us) < self.m0:
                self._log(_ns(t_us), node, kind, _ns(dur_us), "ok")

    def run(self) -> SimResult:
        self._warmup_frames()
        self._push(_ns(self.cfg.beacon_interval_us), "beacon-due")
        if self.windowed:
            self._begin_wifi_window(self.m0)
        else:
            self.window_end = math.inf
            self.window_ns = self.m1 - self.m0
            self._start_access(self.m0)

        handlers = {
            "window-boundary": self._on_window_boundary,
            "cts-due": self._on_cts_due,
            "nav-expiry": self._on_nav_expiry,
            "beacon-due": self._on_beacon_due,
            "backoff-expiry": self._on_backoff_expiry,
        }
        while self.heap:
            event = heapq.heappop(self.heap)
            if event.time_ns > self.m1:
                break
            if event.kind == "tx-end":
                self._on_tx_end(event.time_ns, event.payload)
            elif event.kind == "ack-end":
                self._on_ack_end(event.time_ns, event.payload)
            elif event.kind == "laa-burst-end":
                self._on_laa_burst_end(event.time_ns, event.payload)
            else:
                handlers[event.kind](event.time_ns)

        measure_us = self.cfg.measure_us
        return SimResult(
            wifi_throughput_mbps=self.bits / measure_us,
            laa_airtime_throughput_mbps=(13.0 / 14.0) * self.laa_rate
            * (self.laa_airtime_ns / _NS) / measure_us,
            counts=SimCounts(self.tx, self.cts, self.beacons, self.overruns),
            seed=self.cfg.seed,
            measure_us=measure_us,
            nav_total_us=self.nav_total_ns / _NS,
            wifi_window_us=self.window_ns / _NS,
            trace=tuple(self.trace) if self.cfg.collect_trace else None,
        )


def run_dfm_simulation(config: SimConfig) -> SimResult:
    """Saturated downlink on an exclusively allocated bandwidth."""
    if config.mode != "dfm":
        raise ConfigError("config is not in dfm mode")
    return _Simulation(config).run()


def run_dtm_simulation(config: SimConfig) -> SimResult:
    """Alternating Wi-Fi and scheduled windows with CTS-to-self handovers."""
    if config.mode != "dtm":
        raise ConfigError("config is not in dtm mode")
    return _Simulation(config).run()


def run_simulation(config: SimConfig) -> SimResult:
    return _Simulation(config).run()
