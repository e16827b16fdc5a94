"""DDR3-1600 row-buffer model and the two-request access scenario suite."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .device import ddr3
from .request import Op
from .scenarios import Scenario
from .timing import Command, CommandKind


class RowClass(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"
    CONFLICT = "conflict"


@dataclass
class BankState:
    open_row: Optional[int] = None

    @property
    def precharged(self) -> bool:
        return self.open_row is None

    def allows(self, cmd: Command) -> bool:
        if cmd.kind is CommandKind.ACT:
            return self.open_row is None
        if cmd.kind is CommandKind.PRE:
            return self.open_row is not None
        return self.open_row == cmd.row

    def apply(self, cmd: Command) -> None:
        if not self.allows(cmd):
            raise RuntimeError(f"{cmd} illegal with open row {self.open_row}")
        if cmd.kind is CommandKind.ACT:
            self.open_row = cmd.row
        elif cmd.kind is CommandKind.PRE:
            self.open_row = None


def classify(bank: BankState, row: int) -> RowClass:
    if bank.open_row is None:
        return RowClass.CLOSED
    if bank.open_row == row:
        return RowClass.OPEN
    return RowClass.CONFLICT


def decompose(op: Op, rank: int, bank: int, row: int, column: int, row_class: RowClass,
              request_id=None) -> list[Command]:
    """Commands needed to serve one request given its row-buffer class."""
    kinds = [CommandKind.RD if op is Op.READ else CommandKind.WR]
    if row_class is not RowClass.OPEN:
        kinds.insert(0, CommandKind.ACT)
    if row_class is RowClass.CONFLICT:
        kinds.insert(0, CommandKind.PRE)
    return [Command(k, rank, bank, row, column, request_id) for k in kinds]


def _cmds(op, rank, bank, row, cls, rid):
    return tuple(decompose(op, rank, bank, row, 0, cls, rid))


R, W = Op.READ, Op.WRITE
OPEN, CLOSED, CONFLICT = RowClass.OPEN, RowClass.CLOSED, RowClass.CONFLICT

# considered request is always a read to rank 0, bank 0, row 1
_TARGET_OPEN = _cmds(R, 0, 0, 1, OPEN, 1)
_TARGET_CLOSED = _cmds(R, 0, 0, 1, CLOSED, 1)
_TARGET_CONFLICT = _cmds(R, 0, 0, 1, CONFLICT, 1)

SCENARIOS = {
    s.id: s for s in (
        Scenario("a", "open row, no pending constraints", {(0, 0): 1}, (), _TARGET_OPEN),
        Scenario("b", "open row after R0 to another rank", {(0, 0): 1, (1, 0): 0},
                 _cmds(R, 1, 0, 0, OPEN, 0), _TARGET_OPEN, ranks=2),
        Scenario("c", "open row after W0 to another rank", {(0, 0): 1, (1, 0): 0},
                 _cmds(W, 1, 0, 0, OPEN, 0), _TARGET_OPEN, ranks=2),
        Scenario("d", "open row after R0 to the same rank", {(0, 0): 1, (0, 1): 0},
                 _cmds(R, 0, 1, 0, OPEN, 0), _TARGET_OPEN),
        Scenario("e", "open row after W0 to the same rank", {(0, 0): 1, (0, 1): 0},
                 _cmds(W, 0, 1, 0, OPEN, 0), _TARGET_OPEN),
        Scenario("f", "closed row, no pending constraints", {}, (), _TARGET_CLOSED),
        Scenario("g", "closed row after A0/R0 to another rank", {},
                 _cmds(R, 1, 0, 0, CLOSED, 0), _TARGET_CLOSED, ranks=2),
        Scenario("h", "closed row after A0/W0 to another rank", {},
                 _cmds(W, 1, 0, 0, CLOSED, 0), _TARGET_CLOSED, ranks=2),
        Scenario("i", "closed row after A0/R0 to another bank, same rank", {},
                 _cmds(R, 0, 1, 0, CLOSED, 0), _TARGET_CLOSED),
        Scenario("j", "closed row after A0/W0 to another bank, same rank", {},
                 _cmds(W, 0, 1, 0, CLOSED, 0), _TARGET_CLOSED),
        Scenario("k", "conflict row, no pending constraints", {(0, 0): 0}, (), _TARGET_CONFLICT),
        Scenario("l", "conflict row one cycle after A0 of a read to the same bank", {},
                 _cmds(R, 0, 0, 0, CLOSED, 0), _TARGET_CONFLICT),
        Scenario("m", "conflict row one cycle after A0 of a write to the same bank", {},
                 _cmds(W, 0, 0, 0, CLOSED, 0), _TARGET_CONFLICT),
        Scenario("n", "conflict row one cycle after P0 of a read to the same bank", {(0, 0): 2},
                 _cmds(R, 0, 0, 0, CONFLICT, 0), _TARGET_CONFLICT),
        Scenario("o", "conflict row one cycle after P0 of a write to the same bank", {(0, 0): 2},
                 _cmds(W, 0, 0, 0, CONFLICT, 0), _TARGET_CONFLICT),
    )
}


def scenario_device(scenario: Scenario, params=None):
    return ddr3(ranks=scenario.ranks, params=params)
