from ._errors import ScatterChainError
from ._version import __version__
from .config import config
from .control import check_admissible, control_disk, empty_system, follow_path, plan_exit_path
from .dynamics import SystemState, simulate
from .geometry import Chain, build_cell, illuminate, is_one_controllable

__all__ = [
    "__version__",
    "ScatterChainError",
    "config",
    "Chain",
    "SystemState",
    "build_cell",
    "illuminate",
    "is_one_controllable",
    "simulate",
    "check_admissible",
    "control_disk",
    "empty_system",
    "follow_path",
    "plan_exit_path",
]
