# Copyright (c) 2026 mcspeedup developers, MIT License
"""
mcspeedup: multicore speedup under synchronization and communication.

Amdahl's law extended with the synchronization and connectivity
intensities of a workload, four baseline models, core-size optimizers
and a cycle-level simulator of a symmetric multicore.
"""

__version__ = "0.1.0"
"""str: Package version."""

from .modeling import *
from .baselines import *
from .optimizing import *
from .workloads import *
from .simulating import *
from .configuring import ConfigError, load_config
from . import modeling
from . import baselines
from . import optimizing
from . import workloads
from . import simulating
from . import configuring
from . import saving

__all__ = [
    "ModelDomainError",
    "SolverError",
    "SimulationError",
    "ConfigError",
    "Topology",
    "PowerLaw",
    "WorkloadModel",
    "ChipBudget",
    "PerformanceLaw",
    "SpeedupCurve",
    "speedup",
    "speedup_sym",
    "speedup_asym",
    "optimal_r_numeric",
    "asymptotic_limit",
    "advise_schedule",
    "SimConfig",
    "run_serial",
    "run_parallel",
    "speedup_curve_sim",
    "load_config",
]
