"""PE-level memory requests and their per-request latency records."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional


class Op(enum.Enum):
    READ = "R"
    WRITE = "W"

    @classmethod
    def parse(cls, text: str) -> "Op":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"op must be R or W, got {text!r}") from None


@dataclass(frozen=True)
class Request:
    id: int
    pe: int
    op: Op
    address: int
    arrival: int = 0


@dataclass
class LatencyRecord:
    request_id: int
    pe: int
    op: Op
    arrival: int
    head_of_queue: Optional[int] = None
    issue: Optional[int] = None
    data_start: Optional[int] = None
    bank: Optional[int] = None

    @property
    def access_latency(self) -> int:
        """Head of the PE queue to start of data transfer."""
        return self.data_start - self.head_of_queue

    @property
    def total_latency(self) -> int:
        """Arrival at the controller to start of data transfer."""
        return self.data_start - self.arrival

    @property
    def complete(self) -> bool:
        return self.data_start is not None


RECORD_COLUMNS = (
    "request_id", "pe", "op", "bank", "arrival", "head_of_queue", "issue",
    "data_start", "access_latency", "total_latency", "total_latency_ns",
)


def record_row(rec: LatencyRecord, clock_period_ns: float) -> list:
    return [
        rec.request_id, rec.pe, rec.op.value, rec.bank, rec.arrival, rec.head_of_queue,
        rec.issue, rec.data_start, rec.access_latency, rec.total_latency,
        f"{rec.total_latency * clock_period_ns:.1f}",
    ]
