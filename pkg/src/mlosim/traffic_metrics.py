"""Per-packet timestamping and aggregation into throughput/delay summary rows."""

from __future__ import annotations

from dataclasses import dataclass, fields
from statistics import fmean

from .engine import MS, SECOND, RngStream


@dataclass(frozen=True, slots=True)
class TrafficConfig:
    lambda_pkt_per_us: float
    payload_bytes: int = 1500

    def __post_init__(self) -> None:
        if self.lambda_pkt_per_us <= 0:
            raise ValueError("lambda must be positive")
        if self.payload_bytes <= 0:
            raise ValueError("payload must be positive")


def next_arrival_gap(cfg: TrafficConfig, stream: RngStream) -> int:
    """Exponential inter-arrival gap in ticks with mean 1/lambda; always > 0."""
    return max(1, round(stream.exponential(1.0 / cfg.lambda_pkt_per_us) * 1000))


def offered_load(cfg: TrafficConfig, n_stations: int) -> float:
    """Aggregate offered load in Mbps (lambda is per station, per microsecond)."""
    return cfg.lambda_pkt_per_us * cfg.payload_bytes * 8 * n_stations


@dataclass(slots=True)
class PacketRecord:
    packet_id: int
    device_id: int
    size_bytes: int
    enqueue_ns: int
    access_start_ns: int = -1
    delivered_ns: int = -1
    outcome: str = "pending"  # delivered | dropped-retry (queue drops are counted, not recorded)

    @property
    def queuing_delay_ns(self) -> int:
        return self.access_start_ns - self.enqueue_ns

    @property
    def access_delay_ns(self) -> int:
        return self.delivered_ns - self.access_start_ns

    @property
    def e2e_delay_ns(self) -> int:
        return self.delivered_ns - self.enqueue_ns


@dataclass(slots=True)
class SummaryRow:
    scenario: str
    mode: str
    lambda_: float
    offered_mbps: float
    thpt_mbps: float
    thpt_mld_mbps: float
    thpt_sld1_mbps: float
    thpt_sld2_mbps: float
    qdelay_ms: float | None
    adelay_ms: float | None
    e2e_ms: float | None
    drop_rate: float
    delivered: int
    duration_s: float
    seed: int


CSV_COLUMNS = [f.name.rstrip("_") for f in fields(SummaryRow)]
CSV_HEADER = ",".join(CSV_COLUMNS)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def row_to_csv(row: SummaryRow) -> str:
    cells = [
        row.scenario,
        row.mode,
        f"{row.lambda_:.10g}",
        _fmt(row.offered_mbps),
        _fmt(row.thpt_mbps),
        _fmt(row.thpt_mld_mbps),
        _fmt(row.thpt_sld1_mbps),
        _fmt(row.thpt_sld2_mbps),
        _fmt(row.qdelay_ms),
        _fmt(row.adelay_ms),
        _fmt(row.e2e_ms),
        _fmt(row.drop_rate),
        str(row.delivered),
        f"{row.duration_s:.10g}",
        str(row.seed),
    ]
    return ",".join(cells)


def write_csv(path, rows: list[SummaryRow]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row_to_csv(row) + "\n")


@dataclass(slots=True)
class DelayStats:
    thpt_mbps: float
    qdelay_ms: float | None
    adelay_ms: float | None
    e2e_ms: float | None
    delivered: int


def summarize_packets(records: list[PacketRecord], duration_ns: int) -> DelayStats:
    """Throughput and mean delays over the delivered packets of one class."""
    if duration_ns <= 0:
        raise ValueError("duration must be positive")
    delivered = [r for r in records if r.outcome == "delivered"]
    bits = sum(r.size_bytes for r in delivered) * 8
    thpt = bits * SECOND / duration_ns / 1e6
    if not delivered:
        return DelayStats(0.0, None, None, None, 0)
    qdelay = fmean(r.queuing_delay_ns for r in delivered) / MS
    adelay = fmean(r.access_delay_ns for r in delivered) / MS
    e2e = fmean(r.e2e_delay_ns for r in delivered) / MS
    return DelayStats(thpt, qdelay, adelay, e2e, len(delivered))


def record_and_aggregate(
    records: list[PacketRecord],
    duration_ns: int,
    generated: int | None = None,
    queue_dropped: int = 0,
) -> tuple[DelayStats, float]:
    """DelayStats plus the drop rate over everything the sources generated."""
    stats = summarize_packets(records, duration_ns)
    if generated is None:
        generated = len(records) + queue_dropped
    dropped = queue_dropped + sum(1 for r in records if r.outcome == "dropped-retry")
    drop_rate = dropped / generated if generated else 0.0
    return stats, drop_rate
