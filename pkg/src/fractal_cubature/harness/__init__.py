"""Configuration, gallery, experiments, output and CLI."""

from .config import FractalConfig, System, build_system, config_from_dict, load_system, parse_config
from .experiments import ExperimentResult, converge_h, converge_p, reference_value
from .gallery import core_systems, gallery
from .integrands import helmholtz_integrand
from .output import emit

__all__ = [
    "ExperimentResult",
    "FractalConfig",
    "System",
    "build_system",
    "config_from_dict",
    "converge_h",
    "converge_p",
    "core_systems",
    "emit",
    "gallery",
    "helmholtz_integrand",
    "load_system",
    "parse_config",
    "reference_value",
]
