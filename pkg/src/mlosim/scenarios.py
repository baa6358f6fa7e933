"""Experiment configuration, presets, the scenario runner, and sweep execution."""

from __future__ import annotations

import concurrent.futures
import hashlib
import os
from dataclasses import dataclass, field, replace

from .devices import Device, DeviceMode, PoissonSource, make_interferers
from .engine import Engine, SECOND, us
from .mac import MacParams
from .phy import DATA_SUBCARRIERS, LinkConfig, MCS_TABLE, Medium
from .traffic_metrics import (
    SummaryRow,
    TrafficConfig,
    offered_load,
    summarize_packets,
    write_csv,
)

MODES = ("slo", "str", "emlsr")


class ConfigError(ValueError):
    """Invalid scenario configuration; rejected before any simulation starts."""


@dataclass(slots=True)
class ScenarioConfig:
    mode: str = "slo"
    n_stations: int = 5
    n_sld_link1: int = 0
    n_sld_link2: int = 0
    mcs1: int = 6
    mcs2: int = 6
    width1: int = 20
    width2: int = 20
    lam: float = 1e-2
    lambda_sld: float | None = None  # defaults to lam
    payload_bytes: int = 1500
    duration_s: float = 10.0
    seed: int = 1
    switch_delay_us: float = 128.0
    scenario: str = "custom"

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n_stations < 1:
            raise ConfigError("nStations must be >= 1")
        if self.n_sld_link1 < 0 or self.n_sld_link2 < 0:
            raise ConfigError("SLD counts must be >= 0")
        for name, mcs in (("mcs1", self.mcs1), ("mcs2", self.mcs2)):
            if mcs not in MCS_TABLE:
                raise ConfigError(f"{name} must be in 0..11, got {mcs}")
        for name, width in (("width1", self.width1), ("width2", self.width2)):
            if width not in DATA_SUBCARRIERS:
                raise ConfigError(f"{name} must be one of {sorted(DATA_SUBCARRIERS)}, got {width}")
        if self.lam <= 0:
            raise ConfigError("lambda must be > 0")
        if self.lambda_sld is not None and self.lambda_sld <= 0:
            raise ConfigError("lambdaSld must be > 0")
        if self.payload_bytes <= 0:
            raise ConfigError("payload must be > 0")
        if self.duration_s <= 0:
            raise ConfigError("duration must be > 0")
        if self.switch_delay_us < 0:
            raise ConfigError("switchDelayUs must be >= 0")

    @property
    def sld_rate(self) -> float:
        return self.lambda_sld if self.lambda_sld is not None else self.lam


@dataclass(slots=True)
class ScenarioResult:
    row: SummaryRow
    devices: list[Device]
    media: dict[int, Medium]
    engine: Engine


def run_scenario(cfg: ScenarioConfig, collect_trace: bool = False) -> ScenarioResult:
    """Build the network, run it for the configured duration, aggregate one row.

    Deterministic in (cfg, seed): per-entity RNG streams are derived from the
    seed and stable device ids, and event ties break by insertion order.
    """
    cfg.validate()
    engine = Engine(seed=cfg.seed)
    media = {k: Medium(engine, k, collect_trace=collect_trace) for k in (1, 2)}
    link_cfgs = {
        1: LinkConfig(1, cfg.width1, MCS_TABLE[cfg.mcs1]),
        2: LinkConfig(2, cfg.width2, MCS_TABLE[cfg.mcs2]),
    }
    params = MacParams()
    switch_ns = us(cfg.switch_delay_us)

    mode = DeviceMode(cfg.mode)
    devices: list[Device] = []
    for i in range(cfg.n_stations):
        if mode is DeviceMode.SLO:
            links = {1: (media[1], link_cfgs[1])}
        else:
            links = {1: (media[1], link_cfgs[1]), 2: (media[2], link_cfgs[2])}
        devices.append(
            Device(engine, i + 1, mode, links, cfg.payload_bytes, params, switch_ns)
        )
    devices += make_interferers(
        engine,
        cfg.n_sld_link1,
        cfg.n_sld_link2,
        media,
        link_cfgs,
        cfg.payload_bytes,
        first_id=cfg.n_stations + 1,
        params=params,
    )

    for dev in devices:
        rate = cfg.sld_rate if dev.is_interferer else cfg.lam
        PoissonSource(engine, dev, rate).start()

    duration_ns = round(cfg.duration_s * SECOND)
    engine.run_until(duration_ns)

    row = _build_row(cfg, devices, duration_ns)
    return ScenarioResult(row, devices, media, engine)


def _build_row(cfg: ScenarioConfig, devices: list[Device], duration_ns: int) -> SummaryRow:
    mld = [d for d in devices if not d.is_interferer]
    sld1 = [d for d in devices if d.is_interferer and d.sld_link() == 1]
    sld2 = [d for d in devices if d.is_interferer and d.sld_link() == 2]

    mld_records = [r for d in mld for r in d.delivered]
    stats = summarize_packets(mld_records, duration_ns)
    mld_generated = sum(d.generated for d in mld)
    dropped = sum(d.dropped_queue + d.dropped_retry for d in mld)
    drop_rate = dropped / mld_generated if mld_generated else 0.0

    def class_thpt(devs: list[Device]) -> float:
        bits = sum(d.delivered_payload_bits() for d in devs)
        return bits * SECOND / duration_ns / 1e6

    thpt_mld = class_thpt(mld)
    thpt_s1 = class_thpt(sld1)
    thpt_s2 = class_thpt(sld2)
    traffic = TrafficConfig(cfg.lam, cfg.payload_bytes)
    return SummaryRow(
        scenario=cfg.scenario,
        mode=cfg.mode,
        lambda_=cfg.lam,
        offered_mbps=offered_load(traffic, cfg.n_stations),
        thpt_mbps=thpt_mld + thpt_s1 + thpt_s2,
        thpt_mld_mbps=thpt_mld,
        thpt_sld1_mbps=thpt_s1,
        thpt_sld2_mbps=thpt_s2,
        qdelay_ms=stats.qdelay_ms,
        adelay_ms=stats.adelay_ms,
        e2e_ms=stats.e2e_ms,
        drop_rate=drop_rate,
        delivered=stats.delivered,
        duration_s=cfg.duration_s,
        seed=cfg.seed,
    )


# -- sweep grids ---------------------------------------------------------------


def lambda_grid(exp_lo: float = -5.0, exp_hi: float = -1.0, exp_step: float = 0.25) -> list[float]:
    if exp_lo > exp_hi or exp_step <= 0:
        raise ConfigError("bad sweep exponent range")
    n = round((exp_hi - exp_lo) / exp_step)
    return [10.0 ** (exp_lo + i * exp_step) for i in range(n + 1)]


@dataclass(slots=True)
class RunSpec:
    cfg: ScenarioConfig
    # The CSV lambda/offered columns reflect the swept quantity, which for the
    # single-MLD presets is the interferer load rather than the MLD's own rate.
    lambda_value: float
    offered_mbps: float


@dataclass(slots=True)
class Preset:
    name: str
    runs: list[RunSpec] = field(default_factory=list)


def _derived_seed(base_seed: int, run_index: int) -> int:
    digest = hashlib.sha256(f"mlosim-run:{base_seed}:{run_index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


NETWORK_SIZES = (5, 10, 15, 20, 25, 30)
MCS_SWEEP = (2, 4, 6, 8)
WIDTH_SWEEP = (20, 40, 80)
SLD_COUNTS = (5, 10, 15, 20)
SINGLE_MLD_LAMBDA = 1e-2  # keeps the lone MLD saturated while interference varies


def preset(name: str, base_seed: int = 1, duration_s: float = 10.0) -> Preset:
    """Fully populated run grid for one experiment family."""
    builders = {
        "base": _preset_base,
        "network-size": _preset_network_size,
        "varied-mcs": _preset_varied_mcs,
        "varied-bw": _preset_varied_bw,
        "interference-asym": _preset_interference_asym,
        "interference-sym": _preset_interference_sym,
        "single-mld-str": _preset_single_mld_str,
        "single-mld-emlsr": _preset_single_mld_emlsr,
    }
    if name not in builders:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(sorted(builders))}")
    runs = builders[name](duration_s)
    for index, spec in enumerate(runs):
        spec.cfg.seed = _derived_seed(base_seed, index)
    return Preset(name, runs)


def preset_names() -> list[str]:
    return [
        "base",
        "network-size",
        "varied-mcs",
        "varied-bw",
        "interference-asym",
        "interference-sym",
        "single-mld-str",
        "single-mld-emlsr",
    ]


def _spec(cfg: ScenarioConfig) -> RunSpec:
    traffic = TrafficConfig(cfg.lam, cfg.payload_bytes)
    return RunSpec(cfg, cfg.lam, offered_load(traffic, cfg.n_stations))


def _preset_base(duration_s: float) -> list[RunSpec]:
    runs = []
    for mode in MODES:
        for lam in lambda_grid():
            runs.append(_spec(ScenarioConfig(
                mode=mode, n_stations=5, lam=lam, duration_s=duration_s, scenario="base",
            )))
    return runs


def _preset_network_size(duration_s: float) -> list[RunSpec]:
    runs = []
    for mode in MODES:
        for size in NETWORK_SIZES:
            for lam in lambda_grid():
                runs.append(_spec(ScenarioConfig(
                    mode=mode, n_stations=size, lam=lam, duration_s=duration_s,
                    scenario=f"network-size:n={size}",
                )))
    return runs


def _preset_varied_mcs(duration_s: float) -> list[RunSpec]:
    runs = []
    for mode in ("str", "emlsr"):
        for mcs1 in MCS_SWEEP:
            for lam in lambda_grid():
                runs.append(_spec(ScenarioConfig(
                    mode=mode, n_stations=5, mcs1=mcs1, mcs2=6, width1=20, width2=20,
                    lam=lam, duration_s=duration_s, scenario=f"varied-mcs:mcs1={mcs1}",
                )))
    return runs


def _preset_varied_bw(duration_s: float) -> list[RunSpec]:
    runs = []
    for mode in ("str", "emlsr"):
        for width1 in WIDTH_SWEEP:
            for lam in lambda_grid():
                runs.append(_spec(ScenarioConfig(
                    mode=mode, n_stations=5, mcs1=6, mcs2=6, width1=width1, width2=20,
                    lam=lam, duration_s=duration_s, scenario=f"varied-bw:width1={width1}",
                )))
    return runs


def _preset_interference_asym(duration_s: float) -> list[RunSpec]:
    runs = []
    for mode in ("str", "emlsr"):
        for label, n1, n2 in (("none", 0, 0), ("link1", 1, 0), ("link2", 0, 1)):
            for lam in lambda_grid():
                runs.append(_spec(ScenarioConfig(
                    mode=mode, n_stations=5, n_sld_link1=n1, n_sld_link2=n2,
                    lam=lam, duration_s=duration_s,
                    scenario=f"interference-asym:sld={label}",
                )))
    return runs


def _preset_interference_sym(duration_s: float) -> list[RunSpec]:
    runs = []
    for mode in ("str", "emlsr"):
        for count in SLD_COUNTS:
            for lam in lambda_grid():
                runs.append(_spec(ScenarioConfig(
                    mode=mode, n_stations=5, n_sld_link1=count, n_sld_link2=count,
                    lam=lam, duration_s=duration_s,
                    scenario=f"interference-sym:k={count}",
                )))
    return runs


def _single_mld_runs(mode: str, duration_s: float) -> list[RunSpec]:
    # One saturated MLD; the swept variable is the symmetric interferer load.
    runs = []
    for count in SLD_COUNTS:
        for lam_sld in lambda_grid(-5.0, -2.0, 1.0):
            cfg = ScenarioConfig(
                mode=mode, n_stations=1, n_sld_link1=count, n_sld_link2=count,
                lam=SINGLE_MLD_LAMBDA, lambda_sld=lam_sld, duration_s=duration_s,
                scenario=f"single-mld-{mode}:k={count}",
            )
            traffic = TrafficConfig(lam_sld, cfg.payload_bytes)
            runs.append(RunSpec(cfg, lam_sld, offered_load(traffic, 2 * count)))
    return runs


def _preset_single_mld_str(duration_s: float) -> list[RunSpec]:
    return _single_mld_runs("str", duration_s)


def _preset_single_mld_emlsr(duration_s: float) -> list[RunSpec]:
    return _single_mld_runs("emlsr", duration_s)


# -- sweep execution -------------------------------------------------------------


def _run_spec_row(spec: RunSpec) -> SummaryRow:
    row = run_scenario(spec.cfg).row
    row.lambda_ = spec.lambda_value
    row.offered_mbps = spec.offered_mbps
    return row


def sweep_rows(pre: Preset, jobs: int = 1) -> list[SummaryRow]:
    """Run every grid point; execution may be parallel, output order is fixed."""
    if jobs <= 1:
        return [_run_spec_row(spec) for spec in pre.runs]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_spec_row, pre.runs, chunksize=1))


def sweep(
    preset_name: str,
    out_path: str,
    base_seed: int = 1,
    duration_s: float = 10.0,
    jobs: int = 1,
) -> str:
    """Run one preset family and write its CSV; returns the file written."""
    pre = preset(preset_name, base_seed=base_seed, duration_s=duration_s)
    rows = sweep_rows(pre, jobs=jobs)
    if out_path.endswith(".csv"):
        target = out_path
        parent = os.path.dirname(out_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
    else:
        os.makedirs(out_path, exist_ok=True)
        target = os.path.join(out_path, f"{preset_name}.csv")
    write_csv(target, rows)
    return target


# -- config file round-trip -------------------------------------------------------

CONFIG_KEYS = {
    "mode": ("mode", str),
    "nStations": ("n_stations", int),
    "nSldLink1": ("n_sld_link1", int),
    "nSldLink2": ("n_sld_link2", int),
    "mcs1": ("mcs1", int),
    "mcs2": ("mcs2", int),
    "width1": ("width1", int),
    "width2": ("width2", int),
    "lambda": ("lam", float),
    "lambdaSld": ("lambda_sld", float),
    "payload": ("payload_bytes", int),
    "duration": ("duration_s", float),
    "seed": ("seed", int),
    "switchDelayUs": ("switch_delay_us", float),
}


def parse_config_text(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Flat key=value lines using the CLI flag names; later lines win."""
    cfg = replace(base) if base is not None else ScenarioConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        attr, cast = CONFIG_KEYS[key]
        try:
            setattr(cfg, attr, cast(value) if cast is not str else value.lower())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    cfg.validate()
    return cfg


def serialize_config(cfg: ScenarioConfig) -> str:
    """Canonical key=value form; parse(serialize(cfg)) == cfg."""
    lines = []
    for key, (attr, _) in CONFIG_KEYS.items():
        value = getattr(cfg, attr)
        if value is None:
            continue
        if isinstance(value, float):
            value = f"{value:.10g}"
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"
