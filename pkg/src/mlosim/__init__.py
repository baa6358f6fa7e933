"""Discrete-event simulator for Wi-Fi 7 multi-link channel access."""

from .engine import Engine, Event, RngStream, draw_uniform
from .scenarios import (
    ConfigError,
    Preset,
    ScenarioConfig,
    ScenarioResult,
    lambda_grid,
    preset,
    preset_names,
    run_scenario,
    sweep,
)
from .traffic_metrics import CSV_COLUMNS, CSV_HEADER, PacketRecord, SummaryRow

__version__ = "0.1.0"

__all__ = [
    "CSV_COLUMNS",
    "CSV_HEADER",
    "ConfigError",
    "Engine",
    "Event",
    "PacketRecord",
    "Preset",
    "RngStream",
    "ScenarioConfig",
    "ScenarioResult",
    "SummaryRow",
    "draw_uniform",
    "lambda_grid",
    "preset",
    "preset_names",
    "run_scenario",
    "sweep",
    "__version__",
]
