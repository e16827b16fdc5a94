"""Analytical latency bounds for RLDC and summaries of simulated latencies.

All bound arithmetic is exact (integers and :class:`fractions.Fraction`);
rounding happens only when a value is reported.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .device import DeviceConfig, rldram3
from .mapping import Layout
from .request import LatencyRecord, Op

_RLDRAM3 = rldram3()


def _tcl(op: Op, device: DeviceConfig) -> int:
    return device.tRL if op is Op.READ else device.tWL


def _check_pes(n: int) -> None:
    if n < 1:
        raise ValueError(f"need at least one PE, got {n}")


def _switches(n: int, device: DeviceConfig) -> int:
    """Worst-case bus-turnaround delay accumulated over n - 1 interferers."""
    burst = device.burst_cycles
    w_to_r = device.tWL - device.tRL + burst
    r_to_w = device.tRL - device.tWL + burst
    return -(-(n - 1) // 2) * w_to_r + (n - 1) // 2 * r_to_w


def wcl_share(n: int, op: Op = Op.READ, device: DeviceConfig = _RLDRAM3) -> int:
    """Worst-case total latency with all PEs sharing all banks."""
    _check_pes(n)
    return (n - 1) * device.params["tRC"] + _tcl(op, device)


def wcl_part(n: int, op: Op = Op.READ, device: DeviceConfig = _RLDRAM3) -> int:
    """Worst-case total latency with banks partitioned among PEs.

    Exact for even ``n``. For odd ``n`` an order with two same-kind
    interferers in a row can finish one cycle later than this closed form.
    """
    _check_pes(n)
    if n > device.total_banks:
        raise ValueError(f"{n} PEs cannot partition {device.total_banks} banks")
    return _switches(n, device) + _tcl(op, device)


def bcl(op: Op = Op.READ, device: DeviceConfig = _RLDRAM3) -> int:
    """Best-case total latency; the same for both layouts."""
    return _tcl(op, device)


def vw(worst, best) -> Fraction:
    """Percentage increase from best to worst case."""
    if best <= 0:
        raise ValueError("best-case latency must be positive")
    return Fraction(worst - best) / Fraction(best) * 100


def vw_share(n: int, op: Op = Op.READ, device: DeviceConfig = _RLDRAM3) -> Fraction:
    _check_pes(n)
    return Fraction((n - 1) * device.params["tRC"], _tcl(op, device)) * 100


def vw_part(n: int, op: Op = Op.READ, device: DeviceConfig = _RLDRAM3) -> Fraction:
    _check_pes(n)
    if n > device.total_banks:
        raise ValueError(f"{n} PEs cannot partition {device.total_banks} banks")
    return Fraction(_switches(n, device) * 100, _tcl(op, device))


def wcl(layout: Layout, n: int, op: Op = Op.READ, device: DeviceConfig = _RLDRAM3) -> int:
    return wcl_share(n, op, device) if layout is Layout.SHARE else wcl_part(n, op, device)


@dataclass(frozen=True)
class BoundReport:
    device: str
    controller: str
    layout: str
    pes: int
    kind: str
    wcl_cycles: int
    bcl_cycles: int
    vw: Fraction
    clock_period_ns: float

    @property
    def vw_percent(self) -> float:
        return round(float(self.vw), 1)

    @property
    def wcl_ns(self) -> float:
        return self.wcl_cycles * self.clock_period_ns

    @property
    def bcl_ns(self) -> float:
        return self.bcl_cycles * self.clock_period_ns

    def to_json(self) -> dict:
        return {
            "device": self.device,
            "controller": self.controller,
            "layout": self.layout,
            "pes": self.pes,
            "kind": self.kind,
            "wcl_cycles": self.wcl_cycles,
            "bcl_cycles": self.bcl_cycles,
            "vw_percent": self.vw_percent,
            "wcl_ns": self.wcl_ns,
            "bcl_ns": self.bcl_ns,
        }


def bound_report(layout: Layout, n: int, op: Op = Op.READ,
                 device: DeviceConfig = _RLDRAM3) -> BoundReport:
    worst = wcl(layout, n, op, device)
    best = bcl(op, device)
    return BoundReport(device.name, "rldc", layout.value, n, "read" if op is Op.READ else "write",
                       worst, best, vw(worst, best), device.clock_period_ns)


@dataclass
class LatencyStats:
    min: int
    max: int
    mean: float

    @classmethod
    def of(cls, values: list[int]) -> "LatencyStats":
        return cls(min(values), max(values), statistics.fmean(values))


@dataclass
class RunSummary:
    count: int
    total: LatencyStats
    access: LatencyStats
    vw_percent: float
    per_pe: dict = field(default_factory=dict)
    exceedances: list = field(default_factory=list)

    def to_json(self, clock_period_ns: float) -> dict:
        def stats(s: LatencyStats) -> dict:
            return {"min_cycles": s.min, "max_cycles": s.max, "mean_cycles": round(s.mean, 3),
                    "min_ns": s.min * clock_period_ns, "max_ns": s.max * clock_period_ns}

        return {
            "requests": self.count,
            "max_total_cycles": self.total.max,
            "min_total_cycles": self.total.min,
            "total_latency": stats(self.total),
            "access_latency": stats(self.access),
            "observed_vw_percent": round(self.vw_percent, 1),
            "per_pe": {str(pe): {"total_latency": stats(t), "access_latency": stats(a)}
                       for pe, (t, a) in sorted(self.per_pe.items())},
            "bound_exceedances": len(self.exceedances),
            "exceeding_requests": list(self.exceedances),
        }


def summarize(records: Iterable[LatencyRecord], pe_filter: Optional[Iterable[int]] = None,
              bound: Optional[Callable[[LatencyRecord], int]] = None) -> RunSummary:
    """Min/max/mean and observed variability window over completed records.

    ``bound`` maps a record to its analytical worst case; records above it
    are listed in :attr:`RunSummary.exceedances`.
    """
    wanted = None if pe_filter is None else set(pe_filter)
    recs = [r for r in records if wanted is None or r.pe in wanted]
    if not recs:
        raise ValueError("no records to summarize")
    totals = [r.total_latency for r in recs]
    per_pe = {}
    for pe in sorted({r.pe for r in recs}):
        mine = [r for r in recs if r.pe == pe]
        per_pe[pe] = (LatencyStats.of([r.total_latency for r in mine]),
                      LatencyStats.of([r.access_latency for r in mine]))
    exceed = []
    if bound is not None:
        exceed = [r.request_id for r in recs if r.total_latency > bound(r)]
    return RunSummary(
        count=len(recs),
        total=LatencyStats.of(totals),
        access=LatencyStats.of([r.access_latency for r in recs]),
        vw_percent=float(vw(max(totals), min(totals))),
        per_pe=per_pe,
        exceedances=exceed,
    )
