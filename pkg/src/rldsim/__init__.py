"""Cycle-level DDR3 / RLDRAM3 timing simulator with a predictable RLDRAM controller."""

__version__ = "0.1.0"
