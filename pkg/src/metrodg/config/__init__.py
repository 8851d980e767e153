from .scenario import (
    CapacitySetting,
    ScenarioConfig,
    load_inputs,
    parse_capacity,
    parse_horizon,
    scenario_from_dict,
)
from .settings import (
    AppConfig,
    load_app_config,
    parse_bool,
    resolve_config_path,
    save_app_config,
)

__all__ = [
    "AppConfig",
    "CapacitySetting",
    "ScenarioConfig",
    "load_app_config",
    "load_inputs",
    "parse_bool",
    "parse_capacity",
    "parse_horizon",
    "resolve_config_path",
    "save_app_config",
    "scenario_from_dict",
]
