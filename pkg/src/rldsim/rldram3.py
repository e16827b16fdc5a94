"""RLDRAM3-1600 request mapping and access scenario suite.

Row management happens inside the device, so every request maps to exactly
one RD or WR command.
"""

from __future__ import annotations

from .device import rldram3
from .request import Op
from .scenarios import Scenario
from .timing import Command, CommandKind


def to_command(op: Op, bank: int, row: int = 0, column: int = 0, request_id=None) -> Command:
    kind = CommandKind.RD if op is Op.READ else CommandKind.WR
    return Command(kind, 0, bank, row, column, request_id)


def _one(op, bank, rid):
    return (to_command(op, bank, 0, 0, rid),)


R, W = Op.READ, Op.WRITE

SCENARIOS = {
    s.id: s for s in (
        Scenario("a", "read, no pending constraints", {}, (), _one(R, 0, 1)),
        Scenario("b", "write, no pending constraints", {}, (), _one(W, 0, 1)),
        Scenario("c", "read after R0 to another bank", {}, _one(R, 1, 0), _one(R, 0, 1)),
        Scenario("d", "write after R0 to another bank", {}, _one(R, 1, 0), _one(W, 0, 1)),
        Scenario("e", "read after W0 to another bank", {}, _one(W, 1, 0), _one(R, 0, 1)),
        Scenario("f", "write after W0 to another bank", {}, _one(W, 1, 0), _one(W, 0, 1)),
        Scenario("g", "read after a command to the same bank", {}, _one(R, 0, 0), _one(R, 0, 1)),
        Scenario("h", "write after a command to the same bank", {}, _one(W, 0, 0), _one(W, 0, 1)),
    )
}


def scenario_device(scenario: Scenario, params=None):
    return rldram3(params)
