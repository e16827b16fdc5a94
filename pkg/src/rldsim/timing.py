"""Command kinds, timing rules and the constraint-counter timing checker.

Both device models share this machinery. A device is described by a flat
table of :class:`TimingRule` entries; the :class:`TimingChecker` keeps one
earliest-legal-cycle counter per (rule, scope key) and answers
``earliest_issue`` queries against them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional


class CommandKind(enum.Enum):
    PRE = "PRE"
    ACT = "ACT"
    RD = "RD"
    WR = "WR"

    @property
    def is_column(self) -> bool:
        return self in (CommandKind.RD, CommandKind.WR)


class Scope(enum.Enum):
    SAME_BANK = "same-bank"
    SAME_RANK = "same-rank"
    DIFF_RANK = "diff-rank"
    ANY_BANK = "any-bank"


class Anchor(enum.Enum):
    ISSUE = "issue"
    DATA_END = "data-end"


class ConfigError(ValueError):
    """Invalid device, geometry or controller configuration."""


class TimingViolation(RuntimeError):
    """A command was committed before the timing rules allow it."""


@dataclass(frozen=True)
class Command:
    kind: CommandKind
    rank: int = 0
    bank: int = 0
    row: int = 0
    column: int = 0
    request_id: Optional[Hashable] = None

    def __str__(self) -> str:
        return f"{self.kind.value}(r{self.rank} b{self.bank} row{self.row})"


@dataclass(frozen=True)
class TimingRule:
    name: str
    from_kind: CommandKind
    to_kind: CommandKind
    scope: Scope
    min_cycles: int
    anchor: Anchor = Anchor.ISSUE

    def __post_init__(self):
        if self.min_cycles <= 0:
            raise ConfigError(f"rule {self.name}: min_cycles must be > 0")

    def applies(self, first: Command, second: Command) -> bool:
        """True if this rule constrains ``second`` issued after ``first``."""
        if first.kind is not self.from_kind or second.kind is not self.to_kind:
            return False
        if self.scope is Scope.SAME_BANK:
            return first.rank == second.rank and first.bank == second.bank
        if self.scope is Scope.SAME_RANK:
            return first.rank == second.rank
        if self.scope is Scope.DIFF_RANK:
            return first.rank != second.rank
        return True


class TimingChecker:
    """Per-run constraint counters for one device.

    Commits must happen in strictly increasing cycle order (one command per
    cycle on the command bus).
    """

    # data intervals older than this (relative to the last commit) can no
    # longer collide with a new burst
    _BUS_HORIZON = 256

    def __init__(self, device):
        self.device = device
        self._by_from: dict[CommandKind, list[tuple[int, TimingRule]]] = {k: [] for k in CommandKind}
        self._by_to: dict[CommandKind, list[tuple[int, TimingRule]]] = {k: [] for k in CommandKind}
        for i, rule in enumerate(device.rules):
            self._by_from[rule.from_kind].append((i, rule))
            self._by_to[rule.to_kind].append((i, rule))
        self.counters: dict[tuple, int] = {}
        self.bus: list[tuple[int, int, int]] = []  # (start, end, rank)
        self.last_issue: Optional[int] = None

    def _key(self, idx: int, rule: TimingRule, cmd: Command) -> tuple:
        if rule.scope is Scope.SAME_BANK:
            return (idx, cmd.rank, cmd.bank)
        if rule.scope in (Scope.SAME_RANK, Scope.DIFF_RANK):
            return (idx, cmd.rank)
        return (idx,)

    def _validate(self, cmd: Command) -> None:
        dev = self.device
        if cmd.kind not in dev.command_kinds:
            raise ConfigError(f"{dev.name} does not accept {cmd.kind.value} commands")
        if not (0 <= cmd.rank < dev.ranks and 0 <= cmd.bank < dev.banks_per_rank):
            raise ConfigError(f"{cmd} outside {dev.name} geometry")

    def rule_bound(self, cmd: Command) -> int:
        """Earliest cycle allowed by the rule counters alone."""
        bound = None
        for idx, rule in self._by_to[cmd.kind]:
            if rule.scope is Scope.DIFF_RANK:
                for other in range(self.device.ranks):
                    if other == cmd.rank:
                        continue
                    value = self.counters.get((idx, other))
                    if value is not None and (bound is None or value > bound):
                        bound = value
                continue
            value = self.counters.get(self._key(idx, rule, cmd))
            if value is not None and (bound is None or value > bound):
                bound = value
        return bound

    def _bus_conflict(self, start: int, end: int, rank: int) -> bool:
        gap = self.device.rank_switch
        for s, e, r in self.bus:
            pad = gap if r != rank else 0
            if start < e + pad and s < end + pad:
                return True
        return False

    def earliest_issue(self, cmd: Command, now: int) -> int:
        self._validate(cmd)
        t = now
        if self.last_issue is not None:
            t = max(t, self.last_issue + 1)
        bound = self.rule_bound(cmd)
        if bound is not None:
            t = max(t, bound)
        if cmd.kind.is_column:
            while True:
                start, end = self.device.data_interval(cmd, t)
                if not self._bus_conflict(start, end, cmd.rank):
                    break
                t += 1
        return t

    def commit(self, cmd: Command, t: int) -> None:
        legal = self.earliest_issue(cmd, t)
        if legal != t:
            raise TimingViolation(f"{cmd} committed at {t}, earliest legal cycle is {legal}")
        dev = self.device
        data_end = None
        if cmd.kind.is_column:
            start, data_end = dev.data_interval(cmd, t)
            self.bus.append((start, data_end, cmd.rank))
            horizon = t - self._BUS_HORIZON
            if self.bus[0][1] < horizon:
                self.bus = [iv for iv in self.bus if iv[1] >= horizon]
        for idx, rule in self._by_from[cmd.kind]:
            base = data_end if rule.anchor is Anchor.DATA_END else t
            key = self._key(idx, rule, cmd)
            value = base + rule.min_cycles
            if value > self.counters.get(key, value - 1):
                self.counters[key] = value
        self.last_issue = t

    def snapshot(self) -> tuple:
        return (tuple(sorted(self.counters.items())), tuple(self.bus), self.last_issue)


def check_schedule(device, schedule: Iterable[tuple[Command, int]],
                   initial_rows: Optional[dict] = None) -> list[str]:
    """Brute-force replay of a committed schedule against the raw rule table.

    Returns a list of human-readable violations (empty means clean). Every
    pair of commands closer than the longest constraint span is tested
    against every rule; data bursts are tested pairwise for overlap and
    rank-switch gaps. For devices with explicit row management the per-bank
    PRE/ACT/RD/WR protocol is replayed as well.
    """
    items = sorted(schedule, key=lambda ct: ct[1])
    violations = []
    span = device.max_constraint_span()
    for j, (second, t2) in enumerate(items):
        i = j - 1
        while i >= 0 and t2 - items[i][1] <= span:
            first, t1 = items[i]
            if t1 == t2:
                violations.append(f"{first} and {second} both issued at {t1}")
            for rule in device.rules:
                if not rule.applies(first, second):
                    continue
                base = t1
                if rule.anchor is Anchor.DATA_END:
                    base = device.data_interval(first, t1)[1]
                if t2 - base < rule.min_cycles:
                    violations.append(
                        f"{rule.name}: {first}@{t1} -> {second}@{t2} "
                        f"needs {rule.min_cycles}, got {t2 - base}")
            i -= 1

    bursts = [(device.data_interval(c, t), c, t) for c, t in items if c.kind.is_column]
    bursts.sort(key=lambda b: b[0][0])
    for j in range(len(bursts)):
        (s2, e2), c2, t2 = bursts[j]
        for i in range(j - 1, -1, -1):
            (s1, e1), c1, t1 = bursts[i]
            if s2 - s1 > span:
                break
            gap = device.rank_switch if c1.rank != c2.rank else 0
            if s2 < e1 + gap and s1 < e2 + gap:
                violations.append(f"data bus: {c1}@{t1} [{s1},{e1}) vs {c2}@{t2} [{s2},{e2})")

    if CommandKind.ACT in device.command_kinds:
        rows = dict(initial_rows or {})
        for cmd, t in items:
            key = (cmd.rank, cmd.bank)
            open_row = rows.get(key)
            if cmd.kind is CommandKind.ACT:
                if open_row is not None:
                    violations.append(f"ACT to open bank {key} at {t}")
                rows[key] = cmd.row
            elif cmd.kind is CommandKind.PRE:
                if open_row is None:
                    violations.append(f"PRE to precharged bank {key} at {t}")
                rows[key] = None
            elif open_row != cmd.row:
                violations.append(f"{cmd} at {t} but bank {key} holds row {open_row}")
    return violations
