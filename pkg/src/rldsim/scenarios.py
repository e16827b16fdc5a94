"""Two-request access scenarios measured with the timing engine.

The previous request's first command is committed at cycle -1 and the
considered request reaches the head of the queue at cycle 0. Both requests
are then scheduled cycle by cycle: one command per cycle, the older request
first, and a request never overtakes an older one on the same bank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .timing import Command, CommandKind, TimingChecker

HORIZON = 512


@dataclass(frozen=True)
class Scenario:
    id: str
    description: str
    initial_rows: Mapping[tuple[int, int], int]
    previous: tuple[Command, ...]
    considered: tuple[Command, ...]
    ranks: int = 1


@dataclass
class ScenarioResult:
    id: str
    latency: int
    schedule: list = field(default_factory=list)


def _protocol_ok(rows: dict, cmd: Command) -> bool:
    open_row = rows.get((cmd.rank, cmd.bank))
    if cmd.kind is CommandKind.ACT:
        return open_row is None
    if cmd.kind is CommandKind.PRE:
        return open_row is not None
    return open_row == cmd.row


def _apply(rows: dict, cmd: Command) -> None:
    if cmd.kind is CommandKind.ACT:
        rows[(cmd.rank, cmd.bank)] = cmd.row
    elif cmd.kind is CommandKind.PRE:
        rows[(cmd.rank, cmd.bank)] = None


def run_scenario(device, scenario: Scenario) -> ScenarioResult:
    checker = TimingChecker(device)
    rows = dict(scenario.initial_rows)
    track_rows = device.explicit_rows
    schedule = []

    def issue(cmd, t):
        checker.commit(cmd, t)
        if track_rows:
            _apply(rows, cmd)
        schedule.append((cmd, t))

    previous = list(scenario.previous)
    if previous:
        issue(previous.pop(0), -1)
    considered = list(scenario.considered)

    for t in range(HORIZON):
        candidates = []
        if previous:
            candidates.append(previous[0])
        if considered:
            cmd = considered[0]
            blocked = any((p.rank, p.bank) == (cmd.rank, cmd.bank) for p in previous)
            if not blocked:
                candidates.append(cmd)
        for cmd in candidates:
            if track_rows and not _protocol_ok(rows, cmd):
                continue
            if checker.earliest_issue(cmd, t) == t:
                issue(cmd, t)
                (previous if previous and cmd is previous[0] else considered).pop(0)
                break
        if not considered:
            start, _ = device.data_interval(scenario.considered[-1], schedule[-1][1])
            return ScenarioResult(scenario.id, start, schedule)
    raise RuntimeError(f"scenario {scenario.id} did not finish within {HORIZON} cycles")


def variability_window(latencies) -> float:
    best, worst = min(latencies), max(latencies)
    return (worst - best) / best * 100
