"""Predictable RLDRAM controller: per-PE queues, RR arbiter, timing checker."""

from __future__ import annotations

from typing import Optional

from ..mapping import Layout
from ..rldram3 import to_command
from ..timing import Command, CommandKind, ConfigError
from .base import SLOT, WORK_CONSERVING, PerPEController

SAME_CYCLE = "same-cycle"
ONE_PER_CYCLE = "one-per-cycle"


class RLDC(PerPEController):
    """Round-robin over PE queue heads, gated by the timing checker.

    ``scan="same-cycle"`` walks the queues from the RR pointer within one
    cycle. Empty queues are always passed over. Under the default ``slot``
    arbitration the first non-empty queue holds the grant until its head is
    timing-ready; ``work-conserving`` lets a ready head further along go
    first. The pointer moves just past whichever PE was served.

    ``scan="one-per-cycle"`` polls only the PE at the pointer and advances the
    pointer every cycle, served or not.
    """

    name = "rldc"

    def __init__(self, device, pes: int, layout: Layout = Layout.SHARE, scan: str = SAME_CYCLE,
                 arbitration: str = SLOT):
        if device.explicit_rows:
            raise ConfigError("rldc drives rldram3 only")
        if scan not in (SAME_CYCLE, ONE_PER_CYCLE):
            raise ConfigError(f"unknown scan mode {scan!r}")
        super().__init__(device, pes, layout, arbitration)
        self.scan = scan

    def _try_issue(self, pe: int, now: int) -> Optional[Command]:
        head = self.queues[pe][0]
        cmd = to_command(head.request.op, head.bank, head.row, head.column, head.request.id)
        if self.checker.earliest_issue(cmd, now) != now:
            return None
        self._commit(cmd, now)
        self._dequeue(pe, now)
        head.record.issue = now
        head.record.data_start = now + (self.device.tRL if cmd.kind is CommandKind.RD
                                        else self.device.tWL)
        return cmd

    def tick(self, now: int) -> Optional[Command]:
        if self.scan == ONE_PER_CYCLE:
            pe = self.pointer
            self.pointer = (pe + 1) % self.pes
            return self._try_issue(pe, now) if self.queues[pe] else None
        for pe in self.scan_order():
            if not self.queues[pe]:
                continue
            cmd = self._try_issue(pe, now)
            if cmd is not None:
                self.pointer = (pe + 1) % self.pes
                return cmd
            if self.arbitration == SLOT:
                return None
        return None
