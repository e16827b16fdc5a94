"""Traces: data model, deterministic synthetic generators and file I/O.

File format::

    #device=rldram3 mode=closed-loop pes=4 gap=0
    120,2,R,0x0004F2A0

In closed-loop mode a PE's next request is released ``gap`` cycles after the
data of its previous request starts (and never before its own arrival field),
so each PE has at most one outstanding request.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .device import load_device
from .request import Op, Request

CLOSED_LOOP = "closed-loop"
OPEN_LOOP = "open-loop"
MODES = (CLOSED_LOOP, OPEN_LOOP)


class TraceParseError(ValueError):
    def __init__(self, path, lineno: int, field_name: str, message: str):
        super().__init__(f"{path}:{lineno}: {field_name}: {message}")
        self.lineno = lineno
        self.field = field_name


@dataclass
class Trace:
    device: str
    pes: int
    requests: list[Request] = field(default_factory=list)
    mode: str = CLOSED_LOOP
    gap: int = 0

    @property
    def closed_loop(self) -> bool:
        return self.mode == CLOSED_LOOP

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown trace mode {self.mode!r}")
        last = None
        for req in self.requests:
            if not 0 <= req.pe < self.pes:
                raise ValueError(f"request {req.id}: pe {req.pe} outside [0, {self.pes})")
            if last is not None and req.arrival < last:
                raise ValueError(f"request {req.id}: arrival {req.arrival} decreases")
            last = req.arrival


class Pattern(enum.Enum):
    UNIFORM = "uniform"
    ROW_LOCALITY = "row-locality"
    SAME_BANK = "same-bank"
    ALTERNATING = "alternating"


@dataclass(frozen=True)
class GeneratorParams:
    pattern: Pattern
    pes: int
    length: int
    gap: int = 0
    seed: int = 0
    hit_ratio: float = 0.35
    spacing: int = 2
    read_fraction: float = 0.5
    device: str = "rldram3"
    ranks: int = 1
    mode: str = CLOSED_LOOP

    def __post_init__(self):
        if not 0.0 <= self.hit_ratio <= 1.0:
            raise ValueError(f"hit_ratio must lie in [0, 1], got {self.hit_ratio}")
        if not 0.0 <= self.read_fraction <= 1.0:
            raise ValueError(f"read_fraction must lie in [0, 1], got {self.read_fraction}")
        if self.pes < 1 or self.length < 0 or self.gap < 0 or self.spacing < 0:
            raise ValueError("pes must be >= 1; length, gap and spacing must be >= 0")
        if self.mode not in MODES:
            raise ValueError(f"unknown trace mode {self.mode!r}")


def generate(params: GeneratorParams) -> Trace:
    device = load_device(params.device, ranks=params.ranks)
    layout = device.layout
    rng = np.random.default_rng(params.seed)
    trace = Trace(device.name, params.pes, mode=params.mode, gap=params.gap)
    n_rows = 1 << layout.row_bits
    n_cols = 1 << layout.column_bits
    n_banks = 1 << layout.bank_bits
    n_ranks = 1 << layout.rank_bits

    if params.pattern in (Pattern.SAME_BANK, Pattern.ALTERNATING):
        for i in range(params.length):
            pe = i % params.pes
            if params.pattern is Pattern.SAME_BANK:
                op, address = Op.READ, 0
            else:
                # the last PE in round-robin order reads; W/R alternate backwards from it
                op = Op.READ if (params.pes - 1 - pe) % 2 == 0 else Op.WRITE
                address = layout.compose(bank=pe % n_banks)
            trace.requests.append(Request(i, pe, op, address, 0))
        return trace

    arrival = 0
    last_row: dict[tuple[int, int], int] = {}
    for i in range(params.length):
        arrival += int(rng.integers(0, params.spacing + 1))
        pe = int(rng.integers(params.pes))
        op = Op.READ if rng.random() < params.read_fraction else Op.WRITE
        rank = int(rng.integers(n_ranks))
        bank = int(rng.integers(n_banks))
        column = int(rng.integers(n_cols))
        row = int(rng.integers(n_rows))
        if params.pattern is Pattern.ROW_LOCALITY:
            prev = last_row.get((rank, bank))
            if prev is not None:
                if rng.random() < params.hit_ratio:
                    row = prev
                else:
                    row = (prev + 1 + int(rng.integers(n_rows - 1))) % n_rows
            last_row[(rank, bank)] = row
        address = layout.compose(rank, bank, row, column)
        trace.requests.append(Request(i, pe, op, address, arrival))
    return trace


def row_hit_fraction(trace: Trace, layout) -> float:
    """Fraction of requests hitting the row last used in their bank field."""
    last: dict[tuple[int, int], int] = {}
    hits = seen = 0
    for req in trace.requests:
        rank, bank, row, _ = layout.fields(req.address)
        prev = last.get((rank, bank))
        if prev is not None:
            seen += 1
            hits += prev == row
        last[(rank, bank)] = row
    return hits / seen if seen else 0.0


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"not an integer: {text!r}") from None


def _hex(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise ValueError(f"not hexadecimal: {text!r}") from None


_FIELD_PARSERS = (_int, _int, Op.parse, _hex)


def format_header(trace: Trace) -> str:
    return f"#device={trace.device} mode={trace.mode} pes={trace.pes} gap={trace.gap}"


def write_trace(trace: Trace, path) -> None:
    lines = [format_header(trace)]
    lines += [f"{r.arrival},{r.pe},{r.op.value},0x{r.address:08X}" for r in trace.requests]
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path) -> Trace:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise TraceParseError(path, 1, "header", "expected '#device=<name> mode=<m> pes=<N>'")
    header = {}
    for item in lines[0][1:].split():
        key, sep, value = item.partition("=")
        if not sep:
            raise TraceParseError(path, 1, "header", f"malformed item {item!r}")
        header[key] = value
    for key in ("device", "mode", "pes"):
        if key not in header:
            raise TraceParseError(path, 1, key, "missing from header")
    if header["mode"] not in MODES:
        raise TraceParseError(path, 1, "mode", f"unknown mode {header['mode']!r}")
    try:
        pes = int(header["pes"])
        gap = int(header.get("gap", 0))
    except ValueError as exc:
        raise TraceParseError(path, 1, "header", str(exc)) from None
    trace = Trace(header["device"], pes, mode=header["mode"], gap=gap)

    names = ("arrival_cycle", "pe", "op", "address_hex")
    last_arrival = None
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) > len(names):
            raise TraceParseError(path, lineno, "line", f"expected {len(names)} fields, got {len(parts)}")
        values = []
        for name, parse, text in zip(names, _FIELD_PARSERS, parts):
            try:
                values.append(parse(text))
            except ValueError as exc:
                raise TraceParseError(path, lineno, name, str(exc)) from None
        if len(values) < len(names):
            raise TraceParseError(path, lineno, names[len(values)], "missing field")
        arrival, pe, op, address = values
        if arrival < 0 or (last_arrival is not None and arrival < last_arrival):
            raise TraceParseError(path, lineno, names[0], "arrival cycles must be non-decreasing")
        if not 0 <= pe < pes:
            raise TraceParseError(path, lineno, names[1], f"pe {pe} outside [0, {pes})")
        last_arrival = arrival
        trace.requests.append(Request(len(trace.requests), pe, op, address, arrival))
    return trace
