"""Synthetic sweep directories matching the simulator's CSV wire format."""

from __future__ import annotations

import pytest

HEADER = (
    "scenario,mode,lambda,offered_mbps,thpt_mbps,thpt_mld_mbps,"
    "thpt_sld1_mbps,thpt_sld2_mbps,qdelay_ms,adelay_ms,e2e_ms,"
    "drop_rate,delivered,duration_s,seed"
)

LAMBDAS = [10 ** (-5 + 0.25 * i) for i in range(17)]
SLD_LAMBDAS = [1e-5, 1e-4, 1e-3, 1e-2]
CAPACITY = {"slo": 31.0, "str": 63.0, "emlsr": 54.0}


def fake_row(scenario, mode, lam, n_stations=5, cap_scale=1.0, starve=False):
    offered = lam * 1500 * 8 * n_stations
    cap = CAPACITY[mode] * cap_scale
    thpt = min(offered, cap) * (1 + 0.01 * ((hash((scenario, mode, lam)) % 7) - 3) / 100)
    if starve:
        # Zero delivered at this load point: delay cells are empty.
        return f"{scenario},{mode},{lam:.10g},{offered:.6f},0.000000,0.000000,0.000000,0.000000,,,,1.000000,0,1,1"
    qdelay = 0.05 + 500 * min(1.0, offered / cap) ** 3
    adelay = 0.4 + 1.5 * min(1.0, offered / cap)
    e2e = qdelay + adelay
    sld = 0.3 if "interference" in scenario else 0.0
    return (
        f"{scenario},{mode},{lam:.10g},{offered:.6f},{thpt:.6f},{thpt:.6f},"
        f"{sld:.6f},{sld:.6f},{qdelay:.6f},{adelay:.6f},{e2e:.6f},"
        f"0.100000,1234,1,1"
    )


def write_sweep_dir(root):
    files = {}
    files["base.csv"] = [
        fake_row("base", mode, lam, starve=(lam == LAMBDAS[0] and mode == "slo"))
        for mode in ("slo", "str", "emlsr") for lam in LAMBDAS
    ]
    files["network-size.csv"] = [
        fake_row(f"network-size:n={n}", mode, lam, n_stations=n, cap_scale=1 - n / 200)
        for mode in ("slo", "str", "emlsr") for n in (5, 10, 15, 20, 25, 30) for lam in LAMBDAS
    ]
    files["varied-mcs.csv"] = [
        fake_row(f"varied-mcs:mcs1={m}", mode, lam, cap_scale=0.5 + m / 16)
        for mode in ("str", "emlsr") for m in (2, 4, 6, 8) for lam in LAMBDAS
    ]
    files["varied-bw.csv"] = [
        fake_row(f"varied-bw:width1={w}", mode, lam, cap_scale=0.8 + w / 200)
        for mode in ("str", "emlsr") for w in (20, 40, 80) for lam in LAMBDAS
    ]
    files["interference-asym.csv"] = [
        fake_row(f"interference-asym:sld={tag}", mode, lam, cap_scale=0.9)
        for mode in ("str", "emlsr") for tag in ("none", "link1", "link2") for lam in LAMBDAS
    ]
    files["interference-sym.csv"] = [
        fake_row(f"interference-sym:k={k}", mode, lam, cap_scale=1 - k / 50)
        for mode in ("str", "emlsr") for k in (5, 10, 15, 20) for lam in LAMBDAS
    ]
    for mode in ("str", "emlsr"):
        files[f"single-mld-{mode}.csv"] = [
            fake_row(f"single-mld-{mode}:k={k}", mode, lam, n_stations=2 * k, cap_scale=0.4)
            for k in (5, 10, 15, 20) for lam in SLD_LAMBDAS
        ]
    for name, rows in files.items():
        (root / name).write_text(HEADER + "\n" + "\n".join(rows) + "\n")
    return root


@pytest.fixture
def sweep_dir(tmp_path):
    d = tmp_path / "results"
    d.mkdir()
    return write_sweep_dir(d)
