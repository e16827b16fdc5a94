from __future__ import annotations

from collections import deque
from typing import Optional

from ..mapping import Layout, check_layout, map_address
from ..request import LatencyRecord, Request
from ..timing import Command, ConfigError, TimingChecker

SLOT = "slot"
WORK_CONSERVING = "work-conserving"


class QueuedRequest:
    __slots__ = ("request", "record", "rank", "bank", "row", "column")

    def __init__(self, request, record, rank, bank, row, column):
        self.request = request
        self.record = record
        self.rank = rank
        self.bank = bank
        self.row = row
        self.column = column


class PerPEController:
    """Per-PE FIFO queues in front of a round-robin arbiter.

    Subclasses implement :meth:`tick`; everything issued goes through the
    shared timing checker and is appended to :attr:`schedule`.
    """

    name = "base"

    def __init__(self, device, pes: int, layout: Layout = Layout.SHARE, arbitration: str = SLOT):
        check_layout(device, layout, pes)
        if arbitration not in (SLOT, WORK_CONSERVING):
            raise ConfigError(f"unknown arbitration {arbitration!r}")
        self.arbitration = arbitration
        self.device = device
        self.pes = pes
        self.layout = layout
        self.checker = TimingChecker(device)
        self.queues = [deque() for _ in range(pes)]
        self.records: dict[int, LatencyRecord] = {}
        self.schedule: list[tuple[Command, int]] = []
        self.pointer = 0

    def enqueue(self, request: Request, now: int) -> None:
        if not 0 <= request.pe < self.pes:
            raise ValueError(f"request {request.id} from PE {request.pe}, controller has {self.pes}")
        rank, bank, row, column = map_address(self.device, request.address, self.layout,
                                              request.pe, self.pes)
        record = LatencyRecord(request.id, request.pe, request.op, arrival=now,
                               bank=rank * self.device.banks_per_rank + bank)
        queue = self.queues[request.pe]
        if not queue:
            record.head_of_queue = now
        queue.append(QueuedRequest(request, record, rank, bank, row, column))
        self.records[request.id] = record

    def _dequeue(self, pe: int, now: int) -> QueuedRequest:
        queue = self.queues[pe]
        head = queue.popleft()
        if queue:
            queue[0].record.head_of_queue = max(queue[0].record.arrival, now + 1)
        return head

    def scan_order(self):
        return [(self.pointer + k) % self.pes for k in range(self.pes)]

    def _commit(self, cmd: Command, now: int) -> None:
        self.checker.commit(cmd, now)
        self.schedule.append((cmd, now))

    @property
    def queued(self) -> int:
        return sum(len(q) for q in self.queues)

    @property
    def idle(self) -> bool:
        return self.queued == 0

    def tick(self, now: int) -> Optional[Command]:
        raise NotImplementedError
