from .io import (
    load_command_log,
    load_grid,
    load_trajectory,
    save_cloud,
    save_command_log,
    save_grid,
    save_trajectory,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .runner import RunResult, replay, run_scenario
from .session import SimSession

__all__ = [
    "load_command_log",
    "load_grid",
    "load_trajectory",
    "save_cloud",
    "save_command_log",
    "save_grid",
    "save_trajectory",
    "Scenario",
    "ScenarioError",
    "load_scenario",
    "RunResult",
    "replay",
    "run_scenario",
    "SimSession",
]
