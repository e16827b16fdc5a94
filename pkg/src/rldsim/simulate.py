"""Trace-driven simulation loop."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .timing import check_schedule
from .workload import Trace


DATA_START = "data-start"
DATA_END = "data-end"


class ClosedLoopViolation(RuntimeError):
    """A PE had two requests outstanding in a closed-loop run."""


@dataclass
class SimulationResult:
    device: object
    controller: str
    layout: str
    pes: int
    records: list
    schedule: list
    cycles: int
    violations: list = field(default_factory=list)


def simulate(trace: Trace, controller, check: bool = True, max_cycles: int = 10_000_000,
             release_on: str = DATA_START) -> SimulationResult:
    """Drive ``controller`` cycle by cycle until every request in ``trace`` has its data.

    In closed-loop mode a PE's next request is released ``trace.gap`` cycles after
    the previous one's data starts (or ends, with ``release_on=DATA_END``).
    Idle stretches are skipped. With ``check`` the committed schedule is replayed
    through the brute-force rule checker afterwards.
    """
    if release_on not in (DATA_START, DATA_END):
        raise ValueError(f"release_on must be {DATA_START!r} or {DATA_END!r}")
    trace.validate()
    tail = controller.device.burst_cycles if release_on == DATA_END else 0
    if trace.pes > controller.pes:
        raise ValueError(f"trace has {trace.pes} PEs, controller {controller.pes}")
    by_pe = [deque() for _ in range(controller.pes)]
    for req in trace.requests:
        by_pe[req.pe].append(req)
    closed = trace.closed_loop
    # closed loop: cycle at which the PE's next request may be released, None while outstanding
    ready_at = [pe_q[0].arrival if pe_q else None for pe_q in by_pe]
    outstanding = [None] * controller.pes
    open_queue = deque(trace.requests)
    remaining = len(trace.requests)
    now = 0

    def release(now):
        if not closed:
            while open_queue and open_queue[0].arrival <= now:
                controller.enqueue(open_queue.popleft(), now)
            return
        for pe, queue in enumerate(by_pe):
            if queue and ready_at[pe] is not None and ready_at[pe] <= now:
                if outstanding[pe] is not None or controller.queues[pe]:
                    raise ClosedLoopViolation(f"PE {pe} already has request {outstanding[pe]} in flight")
                req = queue.popleft()
                controller.enqueue(req, now)
                outstanding[pe] = req.id
                ready_at[pe] = None

    def next_release():
        if not closed:
            return open_queue[0].arrival if open_queue else None
        pending = [t for t in ready_at if t is not None]
        return min(pending) if pending else None

    while True:
        release(now)
        cmd = controller.tick(now)
        if cmd is not None and cmd.kind.is_column:
            remaining -= 1
            rec = controller.records[cmd.request_id]
            if closed:
                pe = rec.pe
                outstanding[pe] = None
                if by_pe[pe]:
                    ready_at[pe] = max(by_pe[pe][0].arrival, rec.data_start + tail + trace.gap)
        if remaining == 0 and controller.idle:
            break
        now += 1
        if controller.idle:
            upcoming = next_release()
            if upcoming is None:
                if remaining:
                    raise RuntimeError("requests left but none can be released")
                break
            now = max(now, upcoming)
        if now > max_cycles:
            raise RuntimeError(f"simulation exceeded {max_cycles} cycles")

    records = [controller.records[r.id] for r in trace.requests]
    violations = check_schedule(controller.device, controller.schedule) if check else []
    return SimulationResult(controller.device, controller.name, controller.layout.value,
                            controller.pes, records, controller.schedule, now, violations)
