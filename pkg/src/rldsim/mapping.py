"""Address mapping with bank-sharing or bank-partitioning layouts."""

from __future__ import annotations

import enum

from .timing import ConfigError


class Layout(enum.Enum):
    SHARE = "share"
    PARTITION = "partition"


def check_layout(device, layout: Layout, pes: int) -> None:
    if pes < 1:
        raise ConfigError("need at least one PE")
    if layout is Layout.PARTITION and pes > device.total_banks:
        raise ConfigError(f"partitioning {device.total_banks} banks needs pes <= banks, got {pes}")


def map_address(device, address: int, layout: Layout, pe: int, pes: int) -> tuple[int, int, int, int]:
    """Resolve ``address`` issued by ``pe`` to (rank, bank, row, column).

    Share mode uses the address bank field as is. Partition mode gives each PE
    ``total_banks // pes`` consecutive banks and folds the bank field into them;
    leftover banks stay unused.
    """
    check_layout(device, layout, pes)
    rank, bank, row, column = device.layout.fields(address)
    rank %= device.ranks
    flat = rank * device.banks_per_rank + bank
    if layout is Layout.PARTITION:
        per_pe = device.total_banks // pes
        flat = pe * per_pe + flat % per_pe
    return flat // device.banks_per_rank, flat % device.banks_per_rank, row, column


def banks_of(device, layout: Layout, pe: int, pes: int) -> set[int]:
    """Flat bank indices ``pe`` may touch."""
    check_layout(device, layout, pes)
    if layout is Layout.SHARE:
        return set(range(device.total_banks))
    per_pe = device.total_banks // pes
    return set(range(pe * per_pe, (pe + 1) * per_pe))
