# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Speedup models of symmetric and asymmetric multicores.

A chip offers ``n`` base core equivalents (BCE). A symmetric multicore
spends them on ``n/r`` identical cores of size ``r``; an asymmetric one
on a single ``r``-sized core plus ``n - r`` 1-BCE cores. A core of size
``r`` runs at :class:`PerformanceLaw` ``r**0.5`` (Pollack's rule).

Besides the parallelizable fraction ``f``, the speedup is damped by two
workload intensities, both relative to the serial execution time:

*   the connectivity intensity ``f1(nc)``, inter-core communication,
    which is spread over the ``nc`` cores;
*   the synchronization intensity ``f2(nc)``, the transfer of data
    between the sequential memory and the private memories of the
    parallel cores, which is not.

Both are :class:`PowerLaw` functions of the core count ``nc``.

All evaluation functions accept scalar or :class:`numpy.ndarray` core
sizes; the result has the shape of the broadcast inputs.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelDomainError",
    "SolverError",
    "SimulationError",
    "Topology",
    "PowerLaw",
    "WorkloadModel",
    "ChipBudget",
    "PerformanceLaw",
    "SpeedupCurve",
    "POLLACK",
    "perf_seq",
    "perf_par",
    "parallel_factor",
    "amdahl_speedup",
    "extended_amdahl",
    "speedup_generic",
    "speedup_sym",
    "speedup_asym",
    "speedup",
]


class ModelDomainError(ValueError):
    """An argument lies outside the domain of a model or type."""


class SolverError(RuntimeError):
    """A numeric search could not be carried out."""


class SimulationError(RuntimeError):
    """A simulated run is infeasible or produced a wrong result."""


class Topology(str, enum.Enum):
    """Multicore organization."""

    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"

    def __str__(self):
        return self.value


def _check(condition, message):
    if not np.all(condition):
        raise ModelDomainError(message)


@dataclass(frozen=True)
class PowerLaw:
    """
    Intensity scaling with the core count, ``coeff * nc**exponent``.

    Parameters
    ----------
    coeff : float
        Intensity at ``nc = 1``, nonnegative.
    exponent : float, default 0
        Scaling exponent in the core count (``p`` for connectivity,
        ``q`` for synchronization).
    """

    coeff: float
    exponent: float = 0.0

    def __post_init__(self):
        _check(np.isfinite(self.coeff), f"coeff must be finite, got {self.coeff}")
        _check(np.isfinite(self.exponent), f"exponent must be finite, got {self.exponent}")
        _check(self.coeff >= 0, f"coeff must be nonnegative, got {self.coeff}")

    def __call__(self, nc):
        return self.evaluate(nc)

    def evaluate(self, nc):
        """Intensity at core count ``nc >= 1``."""
        nc = np.asarray(nc, dtype=float)
        _check(nc >= 1, "core count must be at least 1")
        value = self.coeff * nc ** self.exponent
        return value if value.ndim else float(value)

    @property
    def is_zero(self):
        return self.coeff == 0

    def __str__(self):
        return f"{self.coeff:g}*nc^{self.exponent:g}"


ZERO = PowerLaw(0.0)


@dataclass(frozen=True)
class WorkloadModel:
    """
    Parallelizable fraction plus intensity power laws of a workload.

    Parameters
    ----------
    f : float
        Parallelizable fraction, in ``[0, 1]``.
    conn : PowerLaw, default zero
        Connectivity intensity ``f1(nc)``.
    sync : PowerLaw, default zero
        Synchronization intensity ``f2(nc)``.
    """

    f: float
    conn: PowerLaw = ZERO
    sync: PowerLaw = ZERO

    def __post_init__(self):
        _check(0 <= self.f <= 1, f"f must lie in [0, 1], got {self.f}")

    def intensities(self, nc):
        """Returns ``(f1(nc), f2(nc))``."""
        return self.conn(nc), self.sync(nc)


@dataclass(frozen=True)
class ChipBudget:
    """
    Chip resources ``n`` and core size ``r``, both in BCE units.

    ``r`` may be an array of core sizes sharing the same budget.
    """

    n: float
    r: float

    def __post_init__(self):
        _check(self.n >= 1, f"n must be at least 1 BCE, got {self.n}")
        _check(np.asarray(self.r) >= 1, "core size r must be at least 1 BCE")
        _check(np.asarray(self.r) <= self.n, f"core size r must not exceed n={self.n}")

    def cores(self, topology=Topology.SYMMETRIC):
        """Core count ``nc``: ``n/r`` (symmetric) or ``n - r + 1`` (asymmetric)."""
        r = np.asarray(self.r, dtype=float)
        if Topology(topology) is Topology.SYMMETRIC:
            nc = self.n / r
        else:
            nc = self.n - r + 1
        return nc if nc.ndim else float(nc)


@dataclass(frozen=True)
class PerformanceLaw:
    """
    Performance of an ``r``-sized core, ``r**exponent``.

    Parameters
    ----------
    exponent : float, default 0.5
        Pollack's rule exponent, in ``(0, 1]``.
    """

    exponent: float = 0.5

    def __post_init__(self):
        _check(0 < self.exponent <= 1, f"exponent must lie in (0, 1], got {self.exponent}")

    def __call__(self, r):
        return perf_seq(r, self)


POLLACK = PerformanceLaw()
"""PerformanceLaw: Square-root law, the default everywhere."""


@dataclass(frozen=True)
class SpeedupCurve:
    """
    Ordered samples of a speedup (or intensity, or core size) series.

    Parameters
    ----------
    label : str
        Series name, ``<model>__<parameter>=<value>`` by convention.
    x : numpy.ndarray
        Abscissa, strictly increasing.
    r : numpy.ndarray
        Core size of each sample.
    nc : numpy.ndarray
        Core count of each sample.
    value : numpy.ndarray
        Series values, finite.
    axis : str, default 'r'
        Name of the abscissa: 'r', 'f' or 'q'.
    """

    label: str
    x: np.ndarray
    r: np.ndarray
    nc: np.ndarray
    value: np.ndarray
    axis: str = "r"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        arrays = [np.array(a, dtype=float, ndmin=1) for a in self.arrays]
        if len({a.shape for a in arrays}) != 1:
            raise ModelDomainError(f"series '{self.label}' has mismatched sample arrays")
        for name, a in zip(("x", "r", "nc", "value"), arrays):
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        message = f"series '{self.label}' is not strictly ordered by {self.axis}"
        _check(np.diff(self.x) > 0, message)
        _check(np.isfinite(self.value), f"series '{self.label}' has non-finite values")

    @property
    def arrays(self):
        return self.x, self.r, self.nc, self.value

    def __len__(self):
        return len(self.x)

    def peak(self):
        """Returns the ``(x, value)`` sample of maximum value."""
        i = int(np.argmax(self.value))
        return float(self.x[i]), float(self.value[i])


def _scalar(a):
    a = np.asarray(a)
    return a if a.ndim else float(a)


def perf_seq(r, law=POLLACK):
    """
    Performance of an ``r``-sized core, relative to a 1-BCE core.

    Parameters
    ----------
    r : float or array_like
        Core size, at least 1.
    law : PerformanceLaw, default :data:`POLLACK`

    Returns
    -------
    float or numpy.ndarray
        ``r**law.exponent``.
    """
    r = np.asarray(r, dtype=float)
    _check(r >= 1, "core size r must be at least 1 BCE")
    return _scalar(r ** law.exponent)


def perf_par(n, r, topology=Topology.SYMMETRIC, law=POLLACK):
    """
    Performance of the cores added for the parallel phase.

    ``(n - r)/r * perf_seq(r)`` for a symmetric and ``n - r`` for an
    asymmetric multicore; zero once the whole budget is one core.
    """
    budget = ChipBudget(n, r)
    r = np.asarray(budget.r, dtype=float)
    if Topology(topology) is Topology.SYMMETRIC:
        perf = (n - r) / r * perf_seq(r, law)
    else:
        perf = n - r
    return _scalar(perf)


def parallel_factor(n, r, law=POLLACK):
    """
    Parallel speedup factor of an asymmetric multicore.

    Ratio of the parallel throughput (the big core plus ``n - r`` small
    ones) to the big core's performance, ``(perf(r) + n - r)/perf(r)``.
    """
    budget = ChipBudget(n, r)
    perf = perf_seq(budget.r, law)
    return _scalar((perf + n - np.asarray(r, dtype=float)) / perf)


def amdahl_speedup(f, nc):
    """Amdahl's law, ``1/(1 - f + f/nc)``."""
    _check(0 <= f <= 1, f"f must lie in [0, 1], got {f}")
    nc = np.asarray(nc, dtype=float)
    _check(nc >= 1, "core count must be at least 1")
    return _scalar(1 / (1 - f + f / nc))


def extended_amdahl(f, nc, workload):
    """
    Amdahl's law damped by synchronization and communication.

    Parameters
    ----------
    f : float
        Parallelizable fraction.
    nc : float or array_like
        Core count, at least 1.
    workload : WorkloadModel
        Supplies the intensity power laws; its own ``f`` is ignored.

    Returns
    -------
    float or numpy.ndarray
        ``1/(1 - f + f/nc + f1(nc)/nc + f2(nc))``.
    """
    _check(0 <= f <= 1, f"f must lie in [0, 1], got {f}")
    nc = np.asarray(nc, dtype=float)
    _check(nc >= 1, "core count must be at least 1")
    f1, f2 = workload.intensities(nc)
    return _scalar(1 / (1 - f + f / nc + f1 / nc + f2))


def speedup_generic(budget, f, topology=Topology.SYMMETRIC, law=POLLACK):
    """
    Speedup with the sequential core joining the parallel phase.

    ``1/((1 - f)/perf(r) + f/(perf(r) + perf_par(n, r)))``. For either
    topology this is Hill and Marty's speedup, so it coincides with
    :func:`speedup` at zero intensities.
    """
    _check(0 <= f <= 1, f"f must lie in [0, 1], got {f}")
    perf = perf_seq(budget.r, law)
    par = perf_par(budget.n, budget.r, topology, law)
    return _scalar(1 / ((1 - f) / perf + f / (perf + par)))


def speedup_sym(budget, workload, law=POLLACK):
    """
    Speedup of a symmetric multicore relative to one BCE core.

    Parameters
    ----------
    budget : ChipBudget
        ``nc = n/r`` cores of size ``r``.
    workload : WorkloadModel
    law : PerformanceLaw, default :data:`POLLACK`

    Returns
    -------
    float or numpy.ndarray
        ``perf(r)/((1 - f) + f/nc + f1(nc)/nc + f2(nc))``. With zero
        intensities this is Hill and Marty's symmetric speedup.
    """
    f = workload.f
    nc = np.asarray(budget.cores(Topology.SYMMETRIC))
    f1, f2 = workload.intensities(nc)
    perf = perf_seq(budget.r, law)
    return _scalar(perf / ((1 - f) + f / nc + f1 / nc + f2))


def speedup_asym(budget, workload, law=POLLACK):
    """
    Speedup of an asymmetric multicore relative to one BCE core.

    The parallel phase runs ``parallel_factor(n, r)`` times faster than
    the big core; communication is spread over ``nc = n - r + 1`` cores.
    """
    f = workload.f
    nc = np.asarray(budget.cores(Topology.ASYMMETRIC))
    f1, f2 = workload.intensities(nc)
    perf = perf_seq(budget.r, law)
    s = parallel_factor(budget.n, budget.r, law)
    return _scalar(perf / ((1 - f) + f / s + f1 / nc + f2))


def speedup(budget, workload, topology=Topology.SYMMETRIC, law=POLLACK):
    """Dispatches to :func:`speedup_sym` or :func:`speedup_asym`."""
    if Topology(topology) is Topology.SYMMETRIC:
        return speedup_sym(budget, workload, law)
    return speedup_asym(budget, workload, law)
