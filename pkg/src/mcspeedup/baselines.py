# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Baseline multicore speedup models.

Four established models, recast over the same ``(n, r, f)`` grid as
:mod:`mcspeedup.modeling` so that all of them can be compared directly:

*   Hill and Marty, :func:`hm_speedup`;
*   Cassidy and Andreou, :func:`cassidy_speedup` (symmetric only), a
    delay cost accounting for L2 cache and external memory accesses;
*   Eyerman and Eeckhout, :func:`ee_speedup`, critical sections in the
    parallel fraction;
*   Gunther's universal scalability law, :func:`gunther_sym_speedup`
    (symmetric only).

Core performance follows the square-root law throughout. The constants
of Cassidy's model are not published alongside the area mapping used
here, so :class:`CassidyParams` ships placeholder defaults; see its
docstring.
"""

from dataclasses import dataclass
from logging import getLogger

import numpy as np

from .modeling import ModelDomainError, Topology, perf_seq

__all__ = [
    "CassidyParams",
    "EEParams",
    "GuntherParams",
    "hm_speedup",
    "cassidy_cost",
    "cassidy_speedup",
    "ee_speedup",
    "gunther_par_speedup",
    "gunther_sym_speedup",
]

logger = getLogger(__package__)

FRACTION_TOLERANCE = 1.0e-9
"""float: Tolerance on fractions that must add up to one."""


def _check(condition, message):
    if not condition:
        raise ModelDomainError(message)


def _check_fraction(f):
    _check(0 <= f <= 1, f"f must lie in [0, 1], got {f}")


def _scalar(a):
    a = np.asarray(a)
    return a if a.ndim else float(a)


@dataclass(frozen=True)
class CassidyParams:
    """
    Constants of Cassidy's delay cost.

    The defaults of ``g0``, ``beta``, ``k``, ``d1`` and ``d2`` are
    placeholders, not published values; only ``fp = 0.66`` and
    ``fc = 0.34`` are part of the comparison setup.

    Parameters
    ----------
    fp : float, default 0.66
        Fraction of a core's area taken by the processor, in ``(0, 1]``.
    fc : float, default ``1 - fp``
        Fraction taken by the L2 cache.
    g0 : float, default 0.9
        Fraction of instructions served by the L1 cache.
    beta : float, default 1
        Processor area performance constant.
    k : float, default 0.5
        Cache miss area constant.
    d1 : float, default 10
        L2 access time, in cycles.
    d2 : float, default 100
        External memory access time, in cycles.
    """

    fp: float = 0.66
    fc: float = None
    g0: float = 0.9
    beta: float = 1.0
    k: float = 0.5
    d1: float = 10.0
    d2: float = 100.0

    def __post_init__(self):
        if self.fc is None:
            object.__setattr__(self, "fc", 1 - self.fp)
        _check(0 < self.fp <= 1, f"fp must lie in (0, 1], got {self.fp}")
        _check(0 <= self.fc < 1, f"fc must lie in [0, 1), got {self.fc}")
        _check(abs(self.fp + self.fc - 1) <= FRACTION_TOLERANCE, "fp + fc must equal 1")
        _check(0 <= self.g0 <= 1, f"g0 must lie in [0, 1], got {self.g0}")
        _check(self.beta > 0 and self.k > 0, "beta and k must be positive")
        _check(0 < self.d1 <= self.d2, "access times must satisfy 0 < d1 <= d2")


@dataclass(frozen=True)
class EEParams:
    """
    Fractions and probabilities of the critical section model.

    Parameters
    ----------
    f_seq : float
        Sequential fraction.
    f_par_cs : float
        Parallel fraction containing critical sections.
    f_par_ncs : float
        Parallel fraction free of synchronization.
    p_cnt : float
        Contention probability.
    p_cs : float
        Critical section probability.
    """

    f_seq: float
    f_par_cs: float
    f_par_ncs: float
    p_cnt: float = 0.1
    p_cs: float = 0.1

    def __post_init__(self):
        for name in ("f_seq", "f_par_cs", "f_par_ncs", "p_cnt", "p_cs"):
            value = getattr(self, name)
            _check(0 <= value <= 1, f"{name} must lie in [0, 1], got {value}")
        total = self.f_seq + self.f_par_cs + self.f_par_ncs
        _check(abs(total - 1) <= FRACTION_TOLERANCE, f"fractions must add up to 1, got {total}")

    @classmethod
    def from_fraction(cls, f, cs_share=0.1, p_cnt=0.1, p_cs=0.1):
        """
        Comparison setup: ``f_seq = f``, the rest split by ``cs_share``.

        As in the five-model comparison, ``f`` is taken verbatim as the
        sequential fraction, so the parallel fraction is ``1 - f``.
        """
        _check_fraction(f)
        _check(0 <= cs_share <= 1, f"cs_share must lie in [0, 1], got {cs_share}")
        rest = 1 - f
        return cls(f, cs_share * rest, (1 - cs_share) * rest, p_cnt, p_cs)

    @classmethod
    def from_parallel_fraction(cls, f, cs_share=0.1, p_cnt=0.1, p_cs=0.1):
        """Splits the parallelizable fraction ``f`` by ``cs_share``."""
        _check_fraction(f)
        return cls(1 - f, cs_share * f, (1 - cs_share) * f, p_cnt, p_cs)


@dataclass(frozen=True)
class GuntherParams:
    """Contention ``alpha`` and coherency ``beta_c`` coefficients."""

    alpha: float = 0.001
    beta_c: float = 0.001

    def __post_init__(self):
        _check(self.alpha >= 0, f"alpha must be nonnegative, got {self.alpha}")
        _check(self.beta_c >= 0, f"beta_c must be nonnegative, got {self.beta_c}")


def hm_speedup(budget, f, topology=Topology.SYMMETRIC):
    """
    Hill and Marty's speedup relative to one BCE core.

    Parameters
    ----------
    budget : ChipBudget
    f : float
        Parallelizable fraction.
    topology : Topology, default symmetric

    Returns
    -------
    float or numpy.ndarray
        ``sqrt(r)/((1 - f) + f*r/n)`` (symmetric) or
        ``sqrt(r)/((1 - f) + f*sqrt(r)/(sqrt(r) + n - r))`` (asymmetric).
    """
    _check_fraction(f)
    n = budget.n
    r = np.asarray(budget.r, dtype=float)
    perf = perf_seq(r)
    if Topology(topology) is Topology.SYMMETRIC:
        return _scalar(perf / ((1 - f) + f * r / n))
    return _scalar(perf / ((1 - f) + f * perf / (perf + n - r)))


def _miss_fraction(budget, params):
    area = params.fc * np.asarray(budget.r, dtype=float)
    with np.errstate(divide="ignore"):
        miss = params.k * area ** -0.5
    if np.any(miss > 1):
        logger.warning(
            f"Cassidy miss fraction k*A_L2^-1/2 exceeds 1 for r={budget.r}, clamped"
        )
    return np.clip(miss, 0, 1)


def cassidy_cost(budget, f, params=CassidyParams()):
    """
    Cassidy's delay cost ``J_D`` of a symmetric multicore.

    Processor and L2 areas are ``fp*r`` and ``fc*r``, the core count is
    ``n/r``. The L2 miss fraction ``k*A_L2**-0.5`` is a probability and
    is clamped to ``[0, 1]`` (a warning is logged when this happens).

    Returns
    -------
    float or numpy.ndarray
        The delay cost, in units of a 1-BCE core's delay.
    """
    _check_fraction(f)
    r = np.asarray(budget.r, dtype=float)
    nc = budget.n / r
    miss = _miss_fraction(budget, params)
    g0 = params.g0
    delay = g0 * params.beta * (params.fp * r) ** -0.5
    if g0 < 1:
        delay = delay + (1 - g0) * ((1 - miss) * params.d1 + miss * params.d2)
    return _scalar((1 - f + f / nc) * delay)


def cassidy_speedup(budget, f, params=CassidyParams()):
    """Cassidy's symmetric speedup, ``1/J_D``."""
    return _scalar(1 / np.asarray(cassidy_cost(budget, f, params)))


def _ee_times(budget, params, topology):
    r = np.asarray(budget.r, dtype=float)
    n = budget.n
    perf = perf_seq(r)
    cs, ncs = params.f_par_cs, params.f_par_ncs
    p_cnt, p_cs = params.p_cnt, params.p_cs
    serialized_avg = cs * p_cnt * p_cs / perf
    serialized_slw = cs * p_cnt / perf
    spread_avg = cs * (1 - p_cnt * p_cs) + ncs
    spread_slw = cs * (1 - p_cnt) + ncs
    if Topology(topology) is Topology.SYMMETRIC:
        t_avg = serialized_avg + r * spread_avg / (n * perf)
        t_slw = serialized_slw + r * spread_slw / (2 * n * perf)
    else:
        t_avg = serialized_avg + spread_avg / (perf + n - r)
        t_slw = serialized_slw + spread_slw / (2 * (perf + n - r))
    return t_avg, t_slw


def ee_speedup(budget, params, topology=Topology.SYMMETRIC):
    """
    Eyerman and Eeckhout's speedup relative to one BCE core.

    The parallel phase lasts the longer of the average-thread time
    ``T_avg`` and the slowest-thread time ``T_slw``; the serialized
    share of critical sections runs on an ``r``-sized core.

    Returns
    -------
    float or numpy.ndarray
        ``1/(f_seq/sqrt(r) + max(T_avg, T_slw))``.
    """
    t_avg, t_slw = _ee_times(budget, params, topology)
    perf = perf_seq(budget.r)
    return _scalar(1 / (params.f_seq / perf + np.maximum(t_avg, t_slw)))


def gunther_par_speedup(nc, params=GuntherParams()):
    """Universal scalability law, ``nc/(1 + alpha*(nc - 1) + beta_c*nc*(nc - 1))``."""
    nc = np.asarray(nc, dtype=float)
    _check(np.all(nc >= 1), "core count must be at least 1")
    return _scalar(nc / (1 + params.alpha * (nc - 1) + params.beta_c * nc * (nc - 1)))


def gunther_sym_speedup(budget, f, params=GuntherParams()):
    """
    Gunther's symmetric speedup relative to one BCE core.

    ``1/((1 - f)/sqrt(r) + f/(sqrt(r)*S_par(n/r)))`` with ``S_par`` the
    universal scalability law over the ``n/r`` cores.
    """
    _check_fraction(f)
    r = np.asarray(budget.r, dtype=float)
    perf = perf_seq(r)
    par = gunther_par_speedup(budget.n / r, params)
    return _scalar(1 / ((1 - f) / perf + f / (perf * par)))
