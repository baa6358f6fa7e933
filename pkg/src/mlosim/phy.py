"""MCS/bandwidth rate math, frame airtime, and the per-link collision-domain medium."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import partial

from .engine import Engine

# OFDM numerology: 12.8 us symbol + 0.8 us guard interval, one spatial stream.
SYMBOL_NS = 13_600
PREAMBLE_NS = 40_000
MAC_HEADER_BYTES = 36

# Data subcarriers per channel width (MHz).
DATA_SUBCARRIERS = {20: 234, 40: 468, 80: 980}

# Acknowledgements ride the lowest mandatory rate: preamble plus one symbol.
ACK_AIRTIME_NS = PREAMBLE_NS + SYMBOL_NS


@dataclass(frozen=True, slots=True)
class McsEntry:
    index: int
    modulation: str
    bits_per_subcarrier: int
    coding_rate: Fraction


MCS_TABLE: dict[int, McsEntry] = {
    0: McsEntry(0, "BPSK", 1, Fraction(1, 2)),
    1: McsEntry(1, "QPSK", 2, Fraction(1, 2)),
    2: McsEntry(2, "QPSK", 2, Fraction(3, 4)),
    3: McsEntry(3, "16-QAM", 4, Fraction(1, 2)),
    4: McsEntry(4, "16-QAM", 4, Fraction(3, 4)),
    5: McsEntry(5, "64-QAM", 6, Fraction(2, 3)),
    6: McsEntry(6, "64-QAM", 6, Fraction(3, 4)),
    7: McsEntry(7, "64-QAM", 6, Fraction(5, 6)),
    8: McsEntry(8, "256-QAM", 8, Fraction(3, 4)),
    9: McsEntry(9, "256-QAM", 8, Fraction(5, 6)),
    10: McsEntry(10, "1024-QAM", 10, Fraction(3, 4)),
    11: McsEntry(11, "1024-QAM", 10, Fraction(5, 6)),
}


@dataclass(frozen=True, slots=True)
class LinkConfig:
    link_id: int
    width_mhz: int
    mcs: McsEntry

    def __post_init__(self) -> None:
        if self.width_mhz not in DATA_SUBCARRIERS:
            raise ValueError(f"unsupported channel width: {self.width_mhz} MHz")


def bits_per_symbol(mcs: McsEntry, width_mhz: int) -> Fraction:
    if width_mhz not in DATA_SUBCARRIERS:
        raise ValueError(f"unsupported channel width: {width_mhz} MHz")
    return DATA_SUBCARRIERS[width_mhz] * mcs.bits_per_subcarrier * mcs.coding_rate


def data_rate(mcs: McsEntry, width_mhz: int) -> float:
    """PHY rate in bits per microsecond (numerically equal to Mbps)."""
    return float(bits_per_symbol(mcs, width_mhz) / Fraction(SYMBOL_NS, 1000))


def frame_airtime(payload_bytes: int, link: LinkConfig) -> int:
    """Airtime in ticks of one data frame: preamble plus whole OFDM symbols."""
    if payload_bytes <= 0:
        raise ValueError("payload must be positive")
    bits = (payload_bytes + MAC_HEADER_BYTES) * 8
    per_symbol = bits_per_symbol(link.mcs, link.width_mhz)
    symbols = -(-Fraction(bits) // per_symbol)  # exact ceiling division
    return PREAMBLE_NS + int(symbols) * SYMBOL_NS


@dataclass(slots=True)
class Transmission:
    owner: object
    start: int
    end: int
    ack_hold_ns: int
    collided: bool = False


class Medium:
    """Single collision domain for one link.

    Every device hears every other one: two transmissions overlap only when
    they start on the same tick (carrier sensing forbids joining a frame that
    is already in flight), and any overlap marks all participants collided.
    After a successful frame the medium stays occupied for SIFS plus the ACK,
    which is how the responder's acknowledgement blocks contenders.
    """

    def __init__(self, engine: Engine, link_id: int, collect_trace: bool = False) -> None:
        self.engine = engine
        self.link_id = link_id
        self._active: list[Transmission] = []
        self._listeners: list = []
        self.trace: list[tuple[int, int, int, str]] | None = [] if collect_trace else None

    def register(self, listener) -> None:
        """Listener gets on_medium_busy(t) / on_medium_idle(t) callbacks."""
        self._listeners.append(listener)

    @property
    def busy(self) -> bool:
        return bool(self._active)

    def carrier_sense(self) -> str:
        return "busy" if self._active else "idle"

    def begin_tx(self, owner, airtime_ns: int, ack_hold_ns: int = 0) -> Transmission:
        now = self.engine.now()
        for tx in self._active:
            if tx.owner is owner:
                raise RuntimeError(
                    f"device {getattr(owner, 'owner_id', owner)} already transmitting on link {self.link_id}"
                )
            if tx.start < now:
                raise RuntimeError(
                    f"begin_tx at {now} ns against a frame in flight since {tx.start} ns"
                )
        tx = Transmission(owner, now, now + airtime_ns, ack_hold_ns)
        if self._active:
            # Same-tick starts: every participant of the overlap is collided.
            tx.collided = True
            for other in self._active:
                other.collided = True
        was_idle = not self._active
        self._active.append(tx)
        self.engine.schedule(tx.end, partial(self._decide, tx))
        if was_idle:
            for listener in self._listeners:
                listener.on_medium_busy(now)
        return tx

    def _decide(self, tx: Transmission) -> None:
        outcome = "collided" if tx.collided else "success"
        if self.trace is not None:
            self.trace.append((tx.start, tx.end, getattr(tx.owner, "owner_id", -1), outcome))
        if outcome == "success" and tx.ack_hold_ns:
            # Keep the medium occupied through SIFS + ACK of this exchange.
            self.engine.schedule(tx.end + tx.ack_hold_ns, partial(self._release, tx))
        else:
            self._release(tx)
        on_tx_end = getattr(tx.owner, "on_tx_end", None)
        if on_tx_end is not None:
            on_tx_end(outcome, self.engine.now())

    def _release(self, tx: Transmission) -> None:
        self._active.remove(tx)
        if not self._active:
            now = self.engine.now()
            for listener in self._listeners:
                listener.on_medium_idle(now)
