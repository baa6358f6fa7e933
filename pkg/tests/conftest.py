"""Shared builders for MAC- and device-level test harnesses."""

from __future__ import annotations

from mlosim.devices import Device, DeviceMode
from mlosim.engine import Engine
from mlosim.mac import MacParams
from mlosim.phy import LinkConfig, MCS_TABLE, Medium


class FakeStream:
    """Scripted draw sequence standing in for a backoff RNG."""

    def __init__(self, values, fill: int = 0):
        self.values = list(values)
        self.fill = fill

    def uniform_int(self, lo: int, hi: int) -> int:
        if self.values:
            return self.values.pop(0)
        return self.fill


def make_link(link_id: int = 1, width: int = 20, mcs: int = 6) -> LinkConfig:
    return LinkConfig(link_id, width, MCS_TABLE[mcs])


def single_link_setup(n_devices: int, seed: int = 1, mcs: int = 6, width: int = 20,
                      queue_cap: int = 10**6, collect_trace: bool = True):
    """n single-link stations sharing one medium, queues empty."""
    engine = Engine(seed=seed)
    medium = Medium(engine, 1, collect_trace=collect_trace)
    link = make_link(1, width, mcs)
    devices = [
        Device(engine, i + 1, DeviceMode.SLD, {1: (medium, link)}, 1500,
               MacParams(), queue_cap=queue_cap)
        for i in range(n_devices)
    ]
    return engine, medium, devices


def prefill(device: Device, count: int, at: int = 0) -> None:
    for _ in range(count):
        device.on_arrival(at)


def dual_link_setup(mode: DeviceMode, n_devices: int = 1, seed: int = 1,
                    mcs1: int = 6, mcs2: int = 6, width1: int = 20, width2: int = 20,
                    queue_cap: int = 10**6, switch_delay_ns: int = 128_000):
    engine = Engine(seed=seed)
    media = {1: Medium(engine, 1, collect_trace=True), 2: Medium(engine, 2, collect_trace=True)}
    links = {1: make_link(1, width1, mcs1), 2: make_link(2, width2, mcs2)}
    devices = [
        Device(engine, i + 1, mode,
               {1: (media[1], links[1]), 2: (media[2], links[2])},
               1500, MacParams(), switch_delay_ns=switch_delay_ns, queue_cap=queue_cap)
        for i in range(n_devices)
    ]
    return engine, media, devices
