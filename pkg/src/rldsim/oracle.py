"""Exhaustive earliest-issue oracle for the access scenarios.

Independent of :class:`~rldsim.timing.TimingChecker`: legality is decided by
replaying candidate schedules through the pairwise :func:`check_schedule`
against the raw rule table, and the considered request's issue cycles are
enumerated rather than computed.
"""

from __future__ import annotations

from .scenarios import Scenario
from .timing import Anchor, check_schedule


def _pairwise_ok(device, schedule) -> bool:
    """Rule and bus checks only; adding commands never clears these violations."""
    ordered = sorted(schedule, key=lambda ct: ct[1])
    for j, (second, t2) in enumerate(ordered):
        for first, t1 in ordered[:j]:
            if t1 == t2:
                return False
            for rule in device.rules:
                if not rule.applies(first, second):
                    continue
                base = t1
                if rule.anchor is Anchor.DATA_END:
                    base = device.data_interval(first, t1)[1]
                if t2 - base < rule.min_cycles:
                    return False
    bursts = [(device.data_interval(c, t), c.rank) for c, t in schedule if c.kind.is_column]
    for j, ((s2, e2), r2) in enumerate(bursts):
        for (s1, e1), r1 in bursts[:j]:
            gap = device.rank_switch if r1 != r2 else 0
            if s2 < e1 + gap and s1 < e2 + gap:
                return False
    return True


def previous_schedule(device, scenario: Scenario, horizon: int = 256) -> list:
    """The previous request issued as early as possible, first command at -1."""
    if not scenario.previous:
        return []
    schedule = [(scenario.previous[0], -1)]
    for cmd in scenario.previous[1:]:
        t = schedule[-1][1] + 1
        while not (_pairwise_ok(device, schedule + [(cmd, t)])
                   and not check_schedule(device, schedule + [(cmd, t)], scenario.initial_rows)):
            t += 1
            if t > horizon:
                raise RuntimeError(f"previous request of {scenario.id} unschedulable")
        schedule.append((cmd, t))
    return schedule


def oracle_latency(device, scenario: Scenario, horizon: int = 160) -> int:
    """Minimum data-start cycle of the considered request over all legal schedules."""
    base = previous_schedule(device, scenario)
    cmds = scenario.considered
    last = cmds[-1]
    offset = device.data_interval(last, 0)[0]
    best = [None]

    def search(k, partial, after):
        for t in range(after, horizon + 1):
            if best[0] is not None and t + offset >= best[0]:
                return
            trial = partial + [(cmds[k], t)]
            if not _pairwise_ok(device, base + trial):
                continue
            if k + 1 < len(cmds):
                search(k + 1, trial, t + 1)
            elif not check_schedule(device, base + trial, scenario.initial_rows):
                best[0] = t + offset
                return

    search(0, [], 0)
    if best[0] is None:
        raise RuntimeError(f"no legal schedule for scenario {scenario.id} within {horizon} cycles")
    return best[0]
