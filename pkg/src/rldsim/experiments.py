"""Scenario suites, PE sweeps and DDR-vs-RLDRAM comparisons."""

from __future__ import annotations

from . import bounds, ddr3, rldram3
from .controllers import make_controller
from .mapping import Layout
from .oracle import oracle_latency
from .request import Op
from .scenarios import run_scenario, variability_window
from .simulate import simulate
from .timing import ConfigError
from .workload import GeneratorParams, Pattern, Trace, generate

SUITES = {"ddr3": ddr3, "rldram3": rldram3}


def scenario_latencies(device_name: str, params=None, oracle: bool = False) -> dict[str, int]:
    """Access latency of every scenario in the device's suite, keyed by scenario id."""
    try:
        suite = SUITES[device_name]
    except KeyError:
        raise ConfigError(f"no scenario suite for {device_name!r}") from None
    out = {}
    for sid, scenario in suite.SCENARIOS.items():
        device = suite.scenario_device(scenario, params)
        out[sid] = oracle_latency(device, scenario) if oracle else run_scenario(device, scenario).latency
    return out


def suite_vw(latencies: dict[str, int]) -> float:
    return variability_window(latencies.values())


ADVERSARIAL = {Layout.SHARE: Pattern.SAME_BANK, Layout.PARTITION: Pattern.ALTERNATING}


def adversarial_trace(layout: Layout, pes: int, rounds: int = 1) -> Trace:
    """All PEs issue at cycle 0: one bank for sharing, alternating W/R on own banks for partitioning."""
    return generate(GeneratorParams(ADVERSARIAL[layout], pes, pes * rounds))


def observed_wcl(trace: Trace, controller: str, layout: Layout, pes: int, ranks: int = 1,
                 op: Op | None = None) -> int:
    """Largest total latency in one run, optionally over requests of one kind only."""
    result = simulate(trace, make_controller(controller, pes, layout, ranks=ranks))
    if result.violations:
        raise RuntimeError(f"{controller}: timing violations {result.violations[:3]}")
    return max(r.total_latency for r in result.records if op is None or r.op is op)


def sweep(max_pes: int, min_pes: int = 1, op: Op = Op.READ) -> list[dict]:
    """Per-N RLDC bounds and observed worst cases for both stacks under adversarial traces."""
    rows = []
    for n in range(min_pes, max_pes + 1):
        row = {"pes": n}
        for layout in Layout:
            trace = adversarial_trace(layout, n)
            row[f"rldc_{layout.value}_bound"] = bounds.wcl(layout, n, op)
            row[f"rldc_{layout.value}_observed"] = observed_wcl(trace, "rldc", layout, n, op=op)
            row[f"ddr_{layout.value}_observed"] = observed_wcl(trace, "ddr-close-page", layout, n, op=op)
        rows.append(row)
    for prev, row in zip(rows, rows[1:]):
        for layout in ("share", "partition"):
            rldc = row[f"rldc_{layout}_bound"] - prev[f"rldc_{layout}_bound"]
            ddr = row[f"ddr_{layout}_observed"] - prev[f"ddr_{layout}_observed"]
            row[f"{layout}_growth_rldc_lt_ddr"] = rldc < ddr
    return rows


SWEEP_COLUMNS = (
    "pes", "rldc_share_bound", "rldc_share_observed", "ddr_share_observed",
    "rldc_partition_bound", "rldc_partition_observed", "ddr_partition_observed",
    "share_growth_rldc_lt_ddr", "partition_growth_rldc_lt_ddr",
)


def compare(trace: Trace, layout: Layout, pes: int, ranks: int = 1) -> tuple[list[dict], dict]:
    """Run one trace through both stacks; returns a metric table and the raw results."""
    results = {
        "ddr3": simulate(trace, make_controller("ddr-close-page", pes, layout, ranks=ranks)),
        "rldram3": simulate(trace, make_controller("rldc", pes, layout)),
    }
    table = []
    summaries = {k: bounds.summarize(r.records) for k, r in results.items()}
    for metric, get in (
        ("max_total_cycles", lambda s: s.total.max),
        ("min_total_cycles", lambda s: s.total.min),
        ("mean_total_cycles", lambda s: round(s.total.mean, 3)),
        ("max_access_cycles", lambda s: s.access.max),
        ("observed_vw_percent", lambda s: round(s.vw_percent, 1)),
    ):
        d, r = get(summaries["ddr3"]), get(summaries["rldram3"])
        table.append({"metric": metric, "ddr3": d, "rldram3": r,
                      "ratio": round(d / r, 3) if r else float("nan")})
    return table, results
