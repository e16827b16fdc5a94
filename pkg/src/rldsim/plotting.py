"""Matplotlib figures written next to the CSV/JSON reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}

# keep PNG bytes reproducible across runs
_METADATA = {"Software": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, metadata=_METADATA)
    plt.close(fig)


def scenario_chart(device_name: str, latencies: dict, path, clock_period_ns: float = 1.5):
    ids = list(latencies)
    values = [latencies[i] for i in ids]
    best, worst = min(values), max(values)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(3.0, 0.35 * len(ids) + 1.5), 2.6))
        colors = ["tab:green" if v == best else "tab:red" if v == worst else "tab:gray" for v in values]
        ax.bar(ids, values, color=colors)
        for x, v in zip(ids, values):
            ax.annotate(str(v), (x, v), ha="center", va="bottom", fontsize=7)
        ax.set_xlabel("scenario")
        ax.set_ylabel("access latency (cycles)")
        vw = (worst - best) / best * 100
        ax.set_title(f"{device_name}: BCL {best} / WCL {worst} cycles, VW {vw:.1f}%")
        sec = ax.secondary_yaxis("right", functions=(lambda c: c * clock_period_ns,
                                                     lambda n: n / clock_period_ns))
        sec.set_ylabel("ns")
        _save(fig, path)


def sweep_chart(rows: list[dict], path):
    pes = [r["pes"] for r in rows]
    series = [
        ("rldc_share_bound", "RLDC share (bound)", "tab:blue", "-"),
        ("rldc_partition_bound", "RLDC partition (bound)", "tab:orange", "-"),
        ("ddr_share_observed", "DDR close-page share (observed)", "tab:blue", "--"),
        ("ddr_partition_observed", "DDR close-page partition (observed)", "tab:orange", "--"),
    ]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 3.0))
        for key, label, color, ls in series:
            ax.plot(pes, [r[key] for r in rows], ls, color=color, marker="o", ms=3, label=label)
        ax.set_xlabel("number of PEs")
        ax.set_ylabel("worst-case total latency (cycles)")
        ax.set_xticks(pes)
        ax.legend(frameon=False)
        _save(fig, path)


def latency_histogram(records, path, bound=None, title=""):
    totals = [r.total_latency for r in records]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 2.6))
        lo, hi = min(totals), max(totals)
        ax.hist(totals, bins=range(lo, hi + 2), color="tab:gray", align="left")
        if bound is not None:
            ax.axvline(bound, color="tab:red", ls="--", lw=1, label=f"bound {bound}")
            ax.legend(frameon=False)
        ax.set_xlabel("total latency (cycles)")
        ax.set_ylabel("requests")
        if title:
            ax.set_title(title)
        _save(fig, path)


def compare_chart(table: list[dict], path):
    metrics = [row["metric"] for row in table]
    x = range(len(metrics))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 2.6))
        ax.bar([i - 0.2 for i in x], [row["ddr3"] for row in table], width=0.4, label="ddr3 close-page")
        ax.bar([i + 0.2 for i in x], [row["rldram3"] for row in table], width=0.4, label="rldram3 RLDC")
        ax.set_xticks(list(x))
        ax.set_xticklabels(metrics, rotation=20)
        ax.legend(frameon=False)
        _save(fig, path)
