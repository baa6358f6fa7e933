"""Station models: single-link stations, dual-radio MLDs, single-radio MLDs, interferers."""

from __future__ import annotations

from collections import deque
from enum import Enum

from .engine import Engine, us
from .mac import DcfState, MacParams, Phase
from .phy import LinkConfig, Medium
from .traffic_metrics import PacketRecord

QUEUE_CAP = 500
SWITCH_DELAY_US = 128


class DeviceMode(Enum):
    SLO = "slo"      # legacy operation, link 1 only
    STR = "str"      # independent radio per link, both links concurrently
    EMLSR = "emlsr"  # listens on both links, transmits on one at a time
    SLD = "sld"      # single-link interferer


class Device:
    """One traffic source with a bounded FIFO queue feeding per-link DCF state.

    STR and EMLSR devices share a single queue between both links: whichever
    link frees up first pulls the next head-of-line packet. EMLSR adds the
    single-radio constraint: while one link is mid-exchange (switching,
    transmitting, or waiting for the ACK) the other link's countdown freezes
    and receives no new packet.
    """

    def __init__(
        self,
        engine: Engine,
        device_id: int,
        mode: DeviceMode,
        links: dict[int, tuple[Medium, LinkConfig]],
        payload_bytes: int,
        params: MacParams | None = None,
        switch_delay_ns: int = us(SWITCH_DELAY_US),
        queue_cap: int = QUEUE_CAP,
    ) -> None:
        if mode is DeviceMode.SLO and set(links) != {1}:
            raise ValueError("SLO binds to link 1 only")
        if mode in (DeviceMode.STR, DeviceMode.EMLSR) and len(links) != 2:
            raise ValueError(f"{mode.value} binds to both links")
        if mode is DeviceMode.SLD and len(links) != 1:
            raise ValueError("SLD binds to exactly one link")

        self.engine = engine
        self.device_id = device_id
        self.mode = mode
        self.payload_bytes = payload_bytes
        self.switch_delay_ns = switch_delay_ns
        self.queue_cap = queue_cap
        self.queue: deque[PacketRecord] = deque()

        params = params or MacParams()
        self.dcf: dict[int, DcfState] = {}
        for link_id in sorted(links):
            medium, link_cfg = links[link_id]
            rng = engine.stream(device_id, link_id, "backoff")
            self.dcf[link_id] = DcfState(engine, medium, link_cfg, params, rng, self, link_id)

        # EMLSR radio state.
        self.active_link: int | None = None
        self.in_exchange = False

        # Accounting.
        self.generated = 0
        self.dropped_queue = 0
        self.dropped_retry = 0
        self.delivered: list[PacketRecord] = []
        self._packet_seq = 0
        self._qlen_acc = 0      # integral of queue length over time, for Little's law
        self._qlen_last = 0

    # -- traffic -------------------------------------------------------------

    def on_arrival(self, now: int) -> None:
        self.generated += 1
        if len(self.queue) >= self.queue_cap:
            self.dropped_queue += 1
            return
        self._packet_seq += 1
        record = PacketRecord(
            packet_id=self._packet_seq,
            device_id=self.device_id,
            size_bytes=self.payload_bytes,
            enqueue_ns=now,
        )
        self._qlen_integrate(now)
        self.queue.append(record)
        self._dispatch(now)

    def _qlen_integrate(self, now: int) -> None:
        self._qlen_acc += len(self.queue) * (now - self._qlen_last)
        self._qlen_last = now

    def mean_queue_length(self, end_ns: int) -> float:
        if end_ns <= 0:
            return 0.0
        return (self._qlen_acc + len(self.queue) * (end_ns - self._qlen_last)) / end_ns

    def _dispatch(self, now: int) -> None:
        """Feed idle links from the shared queue, lowest link id first."""
        if self.mode is DeviceMode.EMLSR and self.in_exchange:
            return
        for link_id in self.dcf:
            if not self.queue:
                return
            dcf = self.dcf[link_id]
            if dcf.phase is Phase.IDLE:
                self._qlen_integrate(now)
                record = self.queue.popleft()
                dcf.start_access(record, now)

    def dispatch_head(self, link_id: int, now: int) -> PacketRecord | None:
        """Pop the next queued packet onto one link (explicit single-link form)."""
        dcf = self.dcf[link_id]
        if not self.queue or dcf.phase is not Phase.IDLE:
            return None
        if self.mode is DeviceMode.EMLSR and self.in_exchange:
            return None
        self._qlen_integrate(now)
        record = self.queue.popleft()
        dcf.start_access(record, now)
        return record

    # -- DCF hooks -----------------------------------------------------------

    def on_backoff_zero(self, dcf: DcfState) -> tuple[str, int]:
        """Decide what a finished countdown does: transmit, switch first, or redraw."""
        if self.mode is not DeviceMode.EMLSR:
            return ("transmit", 0)
        now = self.engine.now()
        for other in self.dcf.values():
            if other is dcf:
                continue
            if other.phase in (Phase.TX, Phase.WAIT_ACK):
                return ("redraw", 0)
            # Both links exhausting backoff on the same tick: lower link wins.
            if other.pending_expiry() == now and other.link_id < dcf.link_id:
                return ("redraw", 0)
        if self.in_exchange:
            return ("redraw", 0)
        self.in_exchange = True
        for other in self.dcf.values():
            if other is not dcf:
                other.freeze_radio(now)
        lead_in = 0 if self.active_link in (None, dcf.link_id) else self.switch_delay_ns
        self.active_link = dcf.link_id
        return ("transmit", lead_in)

    def on_exchange_end(self, dcf: DcfState, now: int) -> None:
        if self.mode is DeviceMode.EMLSR and self.in_exchange:
            self._end_exchange(now)

    def _end_exchange(self, now: int) -> None:
        self.in_exchange = False
        for other in self.dcf.values():
            if other.frozen_radio:
                other.unfreeze_radio(now)
        self._dispatch(now)

    def packet_finished(self, dcf: DcfState, packet: PacketRecord, delivered: bool, now: int) -> None:
        if delivered:
            self.delivered.append(packet)
        else:
            self.dropped_retry += 1
        self._dispatch(now)

    # -- reporting -----------------------------------------------------------

    @property
    def is_interferer(self) -> bool:
        return self.mode is DeviceMode.SLD

    def delivered_payload_bits(self) -> int:
        return sum(r.size_bytes for r in self.delivered) * 8

    def sld_link(self) -> int | None:
        if self.mode is DeviceMode.SLD:
            return next(iter(self.dcf))
        return None


class PoissonSource:
    """Feeds a device with exponentially spaced arrivals at a fixed rate."""

    def __init__(self, engine: Engine, device: Device, rate_pkt_per_us: float) -> None:
        if rate_pkt_per_us <= 0:
            raise ValueError("arrival rate must be positive")
        self.engine = engine
        self.device = device
        self.mean_gap_us = 1.0 / rate_pkt_per_us
        self.rng = engine.stream(device.device_id, "arrivals")

    def start(self) -> None:
        self._schedule_next()

    def _schedule_next(self) -> None:
        gap_ns = max(1, round(self.rng.exponential(self.mean_gap_us) * 1000))
        self.engine.schedule_in(gap_ns, self._fire)

    def _fire(self) -> None:
        self.device.on_arrival(self.engine.now())
        self._schedule_next()


def make_interferers(
    engine: Engine,
    n1: int,
    n2: int,
    media: dict[int, Medium],
    link_cfgs: dict[int, LinkConfig],
    payload_bytes: int,
    first_id: int,
    params: MacParams | None = None,
) -> list[Device]:
    """n1 single-link devices bound to link 1 and n2 bound to link 2."""
    if n1 < 0 or n2 < 0:
        raise ValueError("interferer counts must be non-negative")
    devices = []
    next_id = first_id
    for link_id, count in ((1, n1), (2, n2)):
        for _ in range(count):
            dev = Device(
                engine,
                next_id,
                DeviceMode.SLD,
                {link_id: (media[link_id], link_cfgs[link_id])},
                payload_bytes,
                params=params,
            )
            devices.append(dev)
            next_id += 1
    return devices
