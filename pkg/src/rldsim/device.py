"""Device descriptions: rule tables, geometry and address layout.

Built-in defaults carry the DDR3-1600 and RLDRAM3-1600 constraint values.
Either table can be overridden from a plain-text file of ``name = cycles``
lines (``#`` starts a comment).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .timing import Anchor, Command, CommandKind, ConfigError, Scope, TimingRule

PRE, ACT, RD, WR = CommandKind.PRE, CommandKind.ACT, CommandKind.RD, CommandKind.WR

DDR3_1600 = {
    "tRCD": 10,
    "tCCD": 4,
    "tRL": 10,
    "tRP": 10,
    "tWL": 9,
    "tRTW": 6,
    "tRTP": 5,
    "tWTR": 5,
    "tWR": 10,
    "tRAS": 24,
    "tRC": 34,
    "tRRD": 4,
    "BL": 8,
    "tRTRS": 1,
}

RLDRAM3_1600 = {
    "tRC": 6,
    "tWL": 14,
    "tRL": 13,
    "BL": 8,
}

CLOCK_PERIOD_NS = 1.5


@dataclass(frozen=True)
class AddressLayout:
    """Bit widths, LSB first: offset | column | bank | rank | row."""

    offset_bits: int
    column_bits: int
    bank_bits: int
    rank_bits: int
    row_bits: int

    def fields(self, address: int) -> tuple[int, int, int, int]:
        """Split ``address`` into (rank, bank, row, column) fields."""
        if address < 0 or address >= 1 << self.total_bits:
            raise ConfigError(f"address {address:#x} outside {self.total_bits}-bit space")
        a = address >> self.offset_bits
        column = a & ((1 << self.column_bits) - 1)
        a >>= self.column_bits
        bank = a & ((1 << self.bank_bits) - 1)
        a >>= self.bank_bits
        rank = a & ((1 << self.rank_bits) - 1)
        a >>= self.rank_bits
        row = a & ((1 << self.row_bits) - 1)
        return rank, bank, row, column

    def compose(self, rank: int = 0, bank: int = 0, row: int = 0, column: int = 0) -> int:
        a = row
        a = (a << self.rank_bits) | rank
        a = (a << self.bank_bits) | bank
        a = (a << self.column_bits) | column
        return a << self.offset_bits

    @property
    def total_bits(self) -> int:
        return self.offset_bits + self.column_bits + self.bank_bits + self.rank_bits + self.row_bits


@dataclass(frozen=True)
class DeviceConfig:
    name: str
    params: Mapping[str, int]
    rules: tuple[TimingRule, ...]
    command_kinds: frozenset
    ranks: int
    banks_per_rank: int
    rows_per_bank: int
    layout: AddressLayout
    clock_period_ns: float = CLOCK_PERIOD_NS
    rank_switch: int = 0

    @property
    def tRL(self) -> int:
        return self.params["tRL"]

    @property
    def tWL(self) -> int:
        return self.params["tWL"]

    @property
    def burst_cycles(self) -> int:
        return self.params["BL"] // 2

    @property
    def total_banks(self) -> int:
        return self.ranks * self.banks_per_rank

    @property
    def explicit_rows(self) -> bool:
        return ACT in self.command_kinds

    def ns(self, cycles) -> float:
        return float(cycles) * self.clock_period_ns

    def data_interval(self, cmd: Command, issue: int) -> tuple[int, int]:
        if cmd.kind is RD:
            start = issue + self.tRL
        elif cmd.kind is WR:
            start = issue + self.tWL
        else:
            raise ValueError(f"{cmd.kind.value} does not transfer data")
        return start, start + self.burst_cycles

    def max_constraint_span(self) -> int:
        """Longest distance (in issue cycles) over which two commands can interact."""
        latest = max(self.tRL, self.tWL) + self.burst_cycles
        span = latest + self.rank_switch
        for rule in self.rules:
            reach = rule.min_cycles
            if rule.anchor is Anchor.DATA_END:
                reach += latest
            span = max(span, reach)
        return span


def ddr3_rules(p: Mapping[str, int]) -> tuple[TimingRule, ...]:
    burst = p["BL"] // 2
    # cross-rank column spacing follows from bursts needing a tRTRS gap
    rd_rd_rank = burst + p["tRTRS"]
    wr_rd_rank = p["tWL"] + burst + p["tRTRS"] - p["tRL"]
    rd_wr_rank = p["tRL"] + burst + p["tRTRS"] - p["tWL"]
    rules = [
        TimingRule("tRCD", ACT, RD, Scope.SAME_BANK, p["tRCD"]),
        TimingRule("tRCD", ACT, WR, Scope.SAME_BANK, p["tRCD"]),
        TimingRule("tCCD", RD, RD, Scope.SAME_RANK, p["tCCD"]),
        TimingRule("tCCD", WR, WR, Scope.SAME_RANK, p["tCCD"]),
        TimingRule("tRP", PRE, ACT, Scope.SAME_BANK, p["tRP"]),
        TimingRule("tRTW", RD, WR, Scope.SAME_RANK, p["tRTW"]),
        TimingRule("tRTP", RD, PRE, Scope.SAME_BANK, p["tRTP"]),
        TimingRule("tWTR", WR, RD, Scope.SAME_RANK, p["tWTR"], Anchor.DATA_END),
        TimingRule("tWR", WR, PRE, Scope.SAME_BANK, p["tWR"], Anchor.DATA_END),
        TimingRule("tRAS", ACT, PRE, Scope.SAME_BANK, p["tRAS"]),
        TimingRule("tRC", ACT, ACT, Scope.SAME_BANK, p["tRC"]),
        TimingRule("tRRD", ACT, ACT, Scope.SAME_RANK, p["tRRD"]),
    ]
    for name, a, b, cycles in (("tRTRS:R-R", RD, RD, rd_rd_rank), ("tRTRS:W-W", WR, WR, rd_rd_rank),
                               ("tRTRS:W-R", WR, RD, wr_rd_rank), ("tRTRS:R-W", RD, WR, rd_wr_rank)):
        # a non-positive spacing means the data bus never binds this pair
        if cycles > 0:
            rules.append(TimingRule(name, a, b, Scope.DIFF_RANK, cycles))
    return tuple(rules)


def rldram3_rules(p: Mapping[str, int]) -> tuple[TimingRule, ...]:
    burst = p["BL"] // 2
    rules = [TimingRule("tRC", a, b, Scope.SAME_BANK, p["tRC"]) for a in (RD, WR) for b in (RD, WR)]
    rules += [
        TimingRule("BL/2", RD, RD, Scope.ANY_BANK, burst),
        TimingRule("BL/2", WR, WR, Scope.ANY_BANK, burst),
        TimingRule("R-to-W", RD, WR, Scope.ANY_BANK, p["tRL"] - p["tWL"] + burst),
        TimingRule("W-to-R", WR, RD, Scope.ANY_BANK, p["tWL"] - p["tRL"] + burst),
    ]
    return tuple(rules)


def ddr3(ranks: int = 1, params: Optional[Mapping[str, int]] = None) -> DeviceConfig:
    if ranks not in (1, 2, 4):
        raise ConfigError("DDR3 supports 1, 2 or 4 ranks")
    p = {**DDR3_1600, **(params or {})}
    rank_bits = (ranks - 1).bit_length()
    return DeviceConfig(
        name="ddr3",
        params=p,
        rules=ddr3_rules(p),
        command_kinds=frozenset(CommandKind),
        ranks=ranks,
        banks_per_rank=8,
        rows_per_bank=1 << 15,
        layout=AddressLayout(offset_bits=6, column_bits=7, bank_bits=3, rank_bits=rank_bits, row_bits=15),
        rank_switch=p["tRTRS"],
    )


def rldram3(params: Optional[Mapping[str, int]] = None) -> DeviceConfig:
    p = {**RLDRAM3_1600, **(params or {})}
    return DeviceConfig(
        name="rldram3",
        params=p,
        rules=rldram3_rules(p),
        command_kinds=frozenset({RD, WR}),
        ranks=1,
        banks_per_rank=16,
        rows_per_bank=1 << 13,
        layout=AddressLayout(offset_bits=5, column_bits=8, bank_bits=4, rank_bits=0, row_bits=13),
    )


def parse_timing_file(path) -> dict[str, int]:
    params = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'name = cycles'")
        try:
            params[key.strip()] = int(value.strip())
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: {key.strip()} is not an integer") from None
    return params


def load_device(name: str, ranks: int = 1, timing_file=None) -> DeviceConfig:
    overrides = parse_timing_file(timing_file) if timing_file else None
    if name == "ddr3":
        unknown = set(overrides or ()) - set(DDR3_1600)
        builder = lambda: ddr3(ranks, overrides)  # noqa: E731
    elif name == "rldram3":
        if ranks != 1:
            raise ConfigError("rldram3 has no rank dimension")
        unknown = set(overrides or ()) - set(RLDRAM3_1600)
        builder = lambda: rldram3(overrides)  # noqa: E731
    else:
        raise ConfigError(f"unknown device {name!r}")
    if unknown:
        raise ConfigError(f"unknown {name} constraint(s): {', '.join(sorted(unknown))}")
    return builder()
