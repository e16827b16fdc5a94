"""Close-page round-robin DDR3 controller used as a comparison baseline.

Every request runs as a non-preemptible ACT, RD/WR, PRE bundle, so banks
always return to the precharged state. Bundles of different requests may
pipeline on different banks, but column commands keep grant order. This is a generic baseline, not a model of any
published predictable DDR controller.
"""

from __future__ import annotations

from typing import Optional

from ..ddr3 import BankState, RowClass, decompose
from ..mapping import Layout
from ..timing import Command, CommandKind, ConfigError
from .base import SLOT, PerPEController


class ClosePageDDR(PerPEController):
    name = "ddr-close-page"

    def __init__(self, device, pes: int, layout: Layout = Layout.SHARE, arbitration: str = SLOT):
        if not device.explicit_rows:
            raise ConfigError("ddr-close-page drives ddr3 only")
        super().__init__(device, pes, layout, arbitration)
        self.banks = {(r, b): BankState() for r in range(device.ranks)
                      for b in range(device.banks_per_rank)}
        self.bundles: list[tuple] = []  # (record, remaining commands), oldest first

    @property
    def idle(self) -> bool:
        return not self.bundles and self.queued == 0

    def _busy(self, rank: int, bank: int) -> bool:
        return any(cmds[0].rank == rank and cmds[0].bank == bank for _, cmds in self.bundles)

    def _try(self, cmd: Command, now: int) -> bool:
        state = self.banks[(cmd.rank, cmd.bank)]
        if not state.allows(cmd) or self.checker.earliest_issue(cmd, now) != now:
            return False
        self._commit(cmd, now)
        state.apply(cmd)
        return True

    def tick(self, now: int) -> Optional[Command]:
        column_waiting = False
        for i, (record, cmds) in enumerate(self.bundles):
            cmd = cmds[0]
            # RD/WR leave in grant order; ACT and PRE may overtake
            if cmd.kind.is_column and column_waiting:
                continue
            if not self._try(cmd, now):
                column_waiting |= cmd.kind.is_column
                continue
            cmds.pop(0)
            if cmd.kind in (CommandKind.RD, CommandKind.WR):
                record.data_start = now + (self.device.tRL if cmd.kind is CommandKind.RD
                                           else self.device.tWL)
            if not cmds:
                del self.bundles[i]
            return cmd

        for pe in self.scan_order():
            if not self.queues[pe]:
                continue
            head = self.queues[pe][0]
            cmds = decompose(head.request.op, head.rank, head.bank, head.row, head.column,
                             RowClass.CLOSED, head.request.id)
            cmds.append(Command(CommandKind.PRE, head.rank, head.bank, head.row, head.column,
                                head.request.id))
            if self._busy(head.rank, head.bank) or not self._try(cmds[0], now):
                if self.arbitration == SLOT:
                    return None
                continue
            self._dequeue(pe, now)
            head.record.issue = now
            self.bundles.append((head.record, cmds[1:]))
            self.pointer = (pe + 1) % self.pes
            return cmds[0]
        return None
