"""Deterministic discrete-event core: virtual clock, event queue, seeded RNG streams."""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass, field
from typing import Callable

# All simulation time is integer nanoseconds; every protocol constant used in
# this package converts exactly, so ties are exact and runs are reproducible.
US = 1_000
MS = 1_000_000
SECOND = 1_000_000_000


def us(value: float) -> int:
    """Microseconds to integer ticks."""
    return round(value * US)


class SchedulingError(RuntimeError):
    """An event was scheduled before the current clock (programming fault)."""


@dataclass(order=True, slots=True)
class Event:
    time: int
    seq: int
    action: Callable[[], None] = field(compare=False)
    cancelled: bool = field(default=False, compare=False)


class RngStream:
    """Reproducible pseudo-random stream derived from (seed, stream-id).

    Two streams built from the same (seed, stream-id) yield identical draw
    sequences; distinct stream-ids are statistically independent, so adding an
    entity never perturbs another entity's randomness.
    """

    __slots__ = ("seed", "stream_id", "_rng")

    def __init__(self, seed: int, stream_id: tuple) -> None:
        self.seed = seed
        self.stream_id = stream_id
        digest = hashlib.sha256(repr((seed, stream_id)).encode("utf-8")).digest()
        self._rng = random.Random(int.from_bytes(digest[:16], "big"))

    def uniform_int(self, lo: int, hi: int) -> int:
        if lo > hi:
            raise ValueError(f"empty draw range [{lo}, {hi}]")
        return self._rng.randint(lo, hi)

    def exponential(self, mean: float) -> float:
        return self._rng.expovariate(1.0 / mean)


def draw_uniform(stream: RngStream, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi], reproducible per stream."""
    return stream.uniform_int(lo, hi)


class Engine:
    """Single-threaded event scheduler with an integer-nanosecond clock.

    Events dispatch in (time, insertion-seq) order, so simultaneous events run
    in the order they were scheduled. One engine owns one simulation.
    """

    def __init__(self, seed: int = 1) -> None:
        self.seed = seed
        self._clock = 0
        self._seq = 0
        self._heap: list[Event] = []

    def now(self) -> int:
        return self._clock

    def schedule(self, time: int, action: Callable[[], None]) -> Event:
        if time < self._clock:
            raise SchedulingError(
                f"cannot schedule at {time} ns, clock already at {self._clock} ns"
            )
        event = Event(time, self._seq, action)
        self._seq += 1
        heapq.heappush(self._heap, event)
        return event

    def schedule_in(self, delay: int, action: Callable[[], None]) -> Event:
        return self.schedule(self._clock + delay, action)

    def cancel(self, event: Event) -> None:
        """Tombstone an event; it is skipped at dispatch time."""
        event.cancelled = True

    def run_until(self, end: int) -> int:
        """Dispatch every event with time <= end, then park the clock at end."""
        heap = self._heap
        while heap and heap[0].time <= end:
            event = heapq.heappop(heap)
            if event.cancelled:
                continue
            self._clock = event.time
            event.action()
        if self._clock < end:
            self._clock = end
        return self._clock

    def stream(self, *stream_id) -> RngStream:
        """Stream bound to this engine's seed, keyed by (entity, purpose)."""
        return RngStream(self.seed, stream_id)
