# Copyright (c) 2026 mcspeedup developers, MIT License
import matplotlib
import pytest
from hypothesis import settings

from mcspeedup.simulating import speedup_curve_sim

matplotlib.use("Agg")

settings.register_profile("mcspeedup", deadline=None, max_examples=60)
settings.load_profile("mcspeedup")

REFERENCE_FS = (0.5, 0.95, 0.99, 0.999)
POW2_RS = tuple(2 ** k for k in range(9))


@pytest.fixture
def reference_fs():
    return REFERENCE_FS


@pytest.fixture
def pow2_rs():
    return POW2_RS


@pytest.fixture(scope="session")
def sweeps():
    """Simulated sweeps at N = n = 256, one per workload."""
    return {name: speedup_curve_sim(name, 256) for name in ("black-scholes", "fft", "dmm")}
