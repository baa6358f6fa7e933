"""Figure manifest and rendering for simulator sweep CSVs."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

# Wire format produced by the simulator's sweep command.
CSV_COLUMNS = [
    "scenario", "mode", "lambda", "offered_mbps", "thpt_mbps", "thpt_mld_mbps",
    "thpt_sld1_mbps", "thpt_sld2_mbps", "qdelay_ms", "adelay_ms", "e2e_ms",
    "drop_rate", "delivered", "duration_s", "seed",
]

MODE_LABELS = {"slo": "SLO", "str": "STR", "emlsr": "EMLSR"}


class PlotError(RuntimeError):
    """Input data cannot be rendered (missing rows, schema mismatch, ...)."""


@dataclass(frozen=True, slots=True)
class FigureSpec:
    fig_id: int
    slug: str
    title: str
    scenario_prefix: str
    modes: tuple[str, ...]
    y_column: str
    y_label: str
    log_x: bool = True
    log_y: bool = False

    def __post_init__(self) -> None:
        if self.y_column not in CSV_COLUMNS:
            raise PlotError(f"figure {self.fig_id}: unknown column {self.y_column!r}")


def _delay_block(first_id: int, family: str, prefix: str, modes: tuple[str, ...]):
    labels = (
        ("thpt", "thpt_mbps", "Throughput (Mbps)", False),
        ("qdelay", "qdelay_ms", "Mean queuing delay (ms)", True),
        ("adelay", "adelay_ms", "Mean access delay (ms)", True),
        ("e2e", "e2e_ms", "Mean end-to-end delay (ms)", True),
    )
    specs = []
    for offset, (tag, column, ylabel, log_y) in enumerate(labels):
        specs.append(FigureSpec(
            first_id + offset, f"{family}-{tag}", f"{family} {tag} vs offered load",
            prefix, modes, column, ylabel, log_y=log_y,
        ))
    return specs


def manifest() -> list[FigureSpec]:
    specs: list[FigureSpec] = []
    specs += _delay_block(1, "base", "base", ("slo", "str", "emlsr"))
    for offset, mode in enumerate(("slo", "str", "emlsr")):
        specs.append(FigureSpec(
            5 + offset, f"network-size-{mode}",
            f"{MODE_LABELS[mode]} throughput vs network size",
            "network-size:", (mode,), "thpt_mbps", "Throughput (Mbps)",
        ))
    specs += _delay_block(8, "varied-mcs", "varied-mcs:", ("str", "emlsr"))
    specs += _delay_block(12, "varied-bw", "varied-bw:", ("str", "emlsr"))
    for offset, mode in enumerate(("str", "emlsr")):
        specs.append(FigureSpec(
            16 + offset, f"interference-asym-{mode}",
            f"{MODE_LABELS[mode]} MLD throughput under asymmetric interference",
            "interference-asym:", (mode,), "thpt_mld_mbps", "MLD throughput (Mbps)",
        ))
    specs.append(FigureSpec(
        18, "interference-sym-mld",
        "MLD throughput under symmetric interference",
        "interference-sym:", ("str", "emlsr"), "thpt_mld_mbps", "MLD throughput (Mbps)",
    ))
    assert len(specs) == 18 and [s.fig_id for s in specs] == list(range(1, 19))
    return specs


def load_csv_dir(csv_dir: str | Path) -> list[dict]:
    """Rows from every CSV in the directory, schema-checked against the wire format."""
    paths = sorted(Path(csv_dir).glob("*.csv"))
    if not paths:
        raise PlotError(f"no CSV files in {csv_dir}")
    rows: list[dict] = []
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise PlotError(f"{path.name}: empty CSV")
            for want, got in zip(CSV_COLUMNS, header + [None] * len(CSV_COLUMNS)):
                if want != got:
                    raise PlotError(f"{path.name}: schema mismatch at column {want!r}")
            if len(header) != len(CSV_COLUMNS):
                raise PlotError(f"{path.name}: schema mismatch at column {header[len(CSV_COLUMNS)]!r}")
            body = [dict(zip(CSV_COLUMNS, cells)) for cells in reader]
        if not body:
            raise PlotError(f"{path.name}: no data rows")
        rows.extend(body)
    return rows


@dataclass(slots=True)
class RenderInfo:
    fig_id: int
    path: str
    n_traces: int
    log_x: bool
    log_y: bool


def _trace_key(row: dict) -> str:
    scenario = row["scenario"]
    variant = scenario.split(":", 1)[1] if ":" in scenario else ""
    mode = MODE_LABELS.get(row["mode"], row["mode"])
    return f"{mode} {variant}".strip()


def render(spec: FigureSpec, rows: list[dict], out_dir: str | Path) -> RenderInfo:
    """One PNG per figure; traces sorted by label, empty metric cells skipped."""
    selected = [
        r for r in rows
        if r["scenario"].startswith(spec.scenario_prefix) and r["mode"] in spec.modes
    ]
    if not selected:
        raise PlotError(f"figure {spec.fig_id} ({spec.slug}): filter selected no rows")

    traces: dict[str, list[tuple[float, float]]] = {}
    for row in selected:
        cell = row[spec.y_column]
        if cell == "":
            continue  # nothing delivered at this load point
        traces.setdefault(_trace_key(row), []).append((float(row["lambda"]), float(cell)))
    if not traces:
        raise PlotError(f"figure {spec.fig_id} ({spec.slug}): no plottable values")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label in sorted(traces):
        points = sorted(traces[label])
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o",
                markersize=3, linewidth=1.2, label=label)
    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("Offered load, packet rate per station (pkt/us)")
    ax.set_ylabel(spec.y_label)
    ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()

    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(str(out_dir), f"fig{spec.fig_id:02d}-{spec.slug}.png")
    fig.savefig(out_path, dpi=110, metadata={"Software": "plotkit"})
    plt.close(fig)
    return RenderInfo(spec.fig_id, out_path, len(traces), spec.log_x, spec.log_y)


def render_figures(csv_dir: str | Path, out_dir: str | Path,
                   fig_ids: list[int] | None = None) -> list[RenderInfo]:
    rows = load_csv_dir(csv_dir)
    specs = manifest()
    if fig_ids is not None:
        known = {s.fig_id for s in specs}
        unknown = sorted(set(fig_ids) - known)
        if unknown:
            raise PlotError(f"unknown figure ids: {unknown}")
        specs = [s for s in specs if s.fig_id in fig_ids]
    return [render(spec, rows, out_dir) for spec in specs]
