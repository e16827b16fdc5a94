from ..device import load_device
from ..mapping import Layout
from ..timing import ConfigError
from .base import PerPEController
from .ddr_close_page import ClosePageDDR
from .rldc import ONE_PER_CYCLE, RLDC, SAME_CYCLE

CONTROLLERS = {"rldc": (RLDC, "rldram3"), "ddr-close-page": (ClosePageDDR, "ddr3")}


def make_controller(controller: str, pes: int, layout: Layout, device=None, ranks: int = 1, **kw):
    """Build a controller; ``device`` defaults to the built-in pairing."""
    try:
        cls, device_name = CONTROLLERS[controller]
    except KeyError:
        raise ConfigError(f"unknown controller {controller!r}") from None
    if device is None:
        device = load_device(device_name, ranks=ranks)
    elif device.name != device_name:
        raise ConfigError(f"{controller} pairs with {device_name}, not {device.name}")
    return cls(device, pes, layout, **kw)


__all__ = ["CONTROLLERS", "ClosePageDDR", "ONE_PER_CYCLE", "PerPEController", "RLDC", "SAME_CYCLE",
           "make_controller"]
