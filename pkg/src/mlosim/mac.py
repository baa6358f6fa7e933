"""CSMA/CA contention per (transmitter, link): spacings, exponential backoff, retries, ACK."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import partial

from .engine import Engine, RngStream
from .phy import ACK_AIRTIME_NS, LinkConfig, Medium, frame_airtime

SLOT_NS = 9_000
SIFS_NS = 16_000
DIFS_NS = SIFS_NS + 2 * SLOT_NS  # 34 us
CW_MIN = 15
CW_MAX = 1023
RETRY_LIMIT = 7


@dataclass(frozen=True, slots=True)
class MacParams:
    slot_ns: int = SLOT_NS
    sifs_ns: int = SIFS_NS
    difs_ns: int = DIFS_NS
    cw_min: int = CW_MIN
    cw_max: int = CW_MAX
    retry_limit: int = RETRY_LIMIT

    @property
    def ack_hold_ns(self) -> int:
        return self.sifs_ns + ACK_AIRTIME_NS


class Phase(Enum):
    IDLE = "idle"
    CONTEND = "contend"  # waiting out DIFS or counting down backoff slots
    TX = "transmitting"  # holding the channel (includes any radio-switch lead-in)
    WAIT_ACK = "wait-ack"


class DcfState:
    """Backoff engine for one transmitter on one link.

    The countdown is event-driven: when armed, a single expiry event is
    scheduled at ready + remaining*slot, where ready = arm_time + DIFS. A
    busy medium invalidates the expiry and credits the whole slots that
    elapsed before the interruption; the countdown re-arms one DIFS after the
    medium goes idle again. An expiry landing exactly on the tick another
    frame starts stays valid: both stations exhausted their backoff in the
    same slot and their frames collide.
    """

    def __init__(
        self,
        engine: Engine,
        medium: Medium,
        link_cfg: LinkConfig,
        params: MacParams,
        rng: RngStream,
        device,
        link_id: int,
    ) -> None:
        self.engine = engine
        self.medium = medium
        self.link_cfg = link_cfg
        self.params = params
        self.rng = rng
        self.device = device
        self.link_id = link_id
        self.owner_id = device.device_id

        self.phase = Phase.IDLE
        self.cw = params.cw_min
        self.backoff_remaining = 0
        self.retries = 0
        self.packet = None
        self.frame_ns = 0

        self.frozen_radio = False   # single-radio owner busy on another link
        self._armed = False
        self._ready = 0             # tick the countdown (re)starts after DIFS
        self._gen = 0               # invalidates stale expiry events

        medium.register(self)

    # -- channel access -----------------------------------------------------

    def start_access(self, packet, now: int) -> None:
        """Bind the head-of-line packet and start seeking the channel."""
        assert self.phase is Phase.IDLE
        packet.access_start_ns = now  # recorded once, retries keep it
        self.packet = packet
        self.frame_ns = frame_airtime(packet.size_bytes, self.link_cfg)
        self.retries = 0
        self.backoff_remaining = self.rng.uniform_int(0, self.cw)
        self.phase = Phase.CONTEND
        self.try_arm(now)

    def try_arm(self, now: int) -> None:
        if self._armed or self.frozen_radio or self.medium.busy:
            return
        self._ready = now + self.params.difs_ns
        self._gen += 1
        expiry = self._ready + self.backoff_remaining * self.params.slot_ns
        self.engine.schedule(expiry, partial(self._on_expiry, self._gen))
        self._armed = True

    def pending_expiry(self) -> int | None:
        if not self._armed:
            return None
        return self._ready + self.backoff_remaining * self.params.slot_ns

    def _consume_elapsed(self, t: int) -> None:
        """Credit whole idle slots counted down before an interruption at t."""
        if t > self._ready:
            elapsed = (t - self._ready) // self.params.slot_ns
            self.backoff_remaining -= min(elapsed, self.backoff_remaining)

    def _invalidate(self) -> None:
        self._gen += 1
        self._armed = False

    # -- medium callbacks ----------------------------------------------------

    def on_medium_busy(self, t: int) -> None:
        if self.phase is Phase.CONTEND and self._armed:
            expiry = self.pending_expiry()
            if expiry > t:
                self._consume_elapsed(t)
                self._invalidate()
            # expiry == t: same-slot finish, the pending event stays valid
            # and the resulting same-tick start collides.

    def on_medium_idle(self, t: int) -> None:
        if self.phase is Phase.CONTEND and not self._armed and not self.frozen_radio:
            self.try_arm(t)

    # -- single-radio freeze (EMLSR) ------------------------------------------

    def freeze_radio(self, t: int) -> None:
        self.frozen_radio = True
        if self.phase is Phase.CONTEND and self._armed:
            if self.pending_expiry() == t:
                # Lost a same-tick tie against the owner's other link: redraw.
                self.backoff_remaining = self.rng.uniform_int(0, self.cw)
            else:
                self._consume_elapsed(t)
            self._invalidate()

    def unfreeze_radio(self, t: int) -> None:
        self.frozen_radio = False
        if self.phase is Phase.CONTEND:
            self.try_arm(t)

    # -- transmission --------------------------------------------------------

    def _on_expiry(self, gen: int) -> None:
        if gen != self._gen or self.phase is not Phase.CONTEND:
            return
        self._armed = False
        self.backoff_remaining = 0
        now = self.engine.now()
        action, lead_in_ns = self.device.on_backoff_zero(self)
        if action == "transmit":
            self._begin_tx(lead_in_ns)
        else:  # denied: redraw from the current window and re-contend
            self.backoff_remaining = self.rng.uniform_int(0, self.cw)
            self.try_arm(now)

    def _begin_tx(self, lead_in_ns: int = 0) -> None:
        # A radio switch holds the channel before the frame airs, so the whole
        # exchange occupies lead_in + frame and the ACK follows as usual.
        self.phase = Phase.TX
        self.medium.begin_tx(self, lead_in_ns + self.frame_ns, self.params.ack_hold_ns)

    def on_tx_end(self, outcome: str, t: int) -> None:
        if outcome == "success":
            self.phase = Phase.WAIT_ACK
            self.engine.schedule(t + self.params.ack_hold_ns, self._ack_done)
            return
        # Collision: binary exponential backoff, bounded retries.
        self.cw = min(2 * self.cw + 1, self.params.cw_max)
        self.retries += 1
        if self.retries > self.params.retry_limit:
            packet = self.packet
            packet.outcome = "dropped-retry"
            self._reset_after_packet()
            self.device.on_exchange_end(self, t)
            self.device.packet_finished(self, packet, delivered=False, now=t)
        else:
            self.phase = Phase.CONTEND
            self.backoff_remaining = self.rng.uniform_int(0, self.cw)
            self.device.on_exchange_end(self, t)
            self.try_arm(t)

    def _ack_done(self) -> None:
        now = self.engine.now()
        packet = self.packet
        packet.delivered_ns = now
        packet.outcome = "delivered"
        self._reset_after_packet()
        self.device.on_exchange_end(self, now)
        self.device.packet_finished(self, packet, delivered=True, now=now)

    def _reset_after_packet(self) -> None:
        self.packet = None
        self.cw = self.params.cw_min
        self.retries = 0
        self.backoff_remaining = 0
        self.phase = Phase.IDLE
