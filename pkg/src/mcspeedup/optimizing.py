# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Optimal core sizes, asymptotic limits and scheduling advice.

The only free variable of a multicore with a fixed budget ``n`` is the
core size ``r``. :func:`optimal_r_hm_sym` gives Hill and Marty's
closed-form optimum; every other model is searched numerically by
:func:`optimal_r_numeric`, a log-spaced grid followed by golden-section
refinement. Model handles, callables mapping ``r`` to the speedup with
everything else bound, are built by :meth:`ModelSuite.handle`.

:func:`asymptotic_limit` classifies the speedup reached as the core count
grows without bound, the sweeps reproduce the maximum-speedup and
optimal-core-size studies, and :func:`advise_schedule` decides whether a
workload is better off on the parallel cores or on a single big core.
"""

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from logging import getLogger

import numpy as np

from .baselines import (
    CassidyParams,
    EEParams,
    GuntherParams,
    cassidy_speedup,
    ee_speedup,
    gunther_sym_speedup,
    hm_speedup,
)
from .modeling import (
    POLLACK,
    ZERO,
    ChipBudget,
    ModelDomainError,
    PowerLaw,
    SolverError,
    SpeedupCurve,
    Topology,
    WorkloadModel,
    perf_seq,
    speedup,
)

__all__ = [
    "MODELS",
    "Regime",
    "OptimumResult",
    "LimitResult",
    "ScheduleAdvice",
    "IntensityPreset",
    "ModelSuite",
    "golden_section_search",
    "optimal_r_hm_sym",
    "optimal_r_numeric",
    "asymptotic_limit",
    "sweep_max_speedup_vs_sync",
    "sweep_optimal_r_vs_f",
    "advise_schedule",
]

logger = getLogger(__package__)

MODELS = ("ours", "hill-marty", "cassidy", "eyerman-eeckhout", "gunther")
"""tuple of str: Names of the comparable speedup models."""

SYMMETRIC_ONLY = frozenset({"cassidy", "gunther"})
"""frozenset of str: Models without an asymmetric form."""

GRID_SIZE = 512
"""int: Samples of the coarse log-spaced grid of :func:`optimal_r_numeric`."""

RTOL = 1.0e-6
"""float: Relative tolerance on ``r`` of the golden-section refinement."""

MAX_STEPS = 200
"""int: Evaluation budget of :func:`golden_section_search`."""

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARED = (3 - math.sqrt(5)) / 2


class Regime(str, enum.Enum):
    """Asymptotic behaviour of the speedup as the core count grows."""

    AMDAHL_BOUND = "amdahl_bound"
    CONSTANT_OVERHEAD = "constant_overhead"
    VANISHING = "vanishing"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OptimumResult:
    """
    Optimal core size of a model.

    Parameters
    ----------
    r_opt : float
        Optimal core size, in ``[1, n]``.
    speedup_max : float
        Speedup at ``r_opt``.
    clamped : bool
        Whether ``r_opt`` sits on a boundary of ``[1, n]``.
    r_divisor : int or None
        Divisor of ``n`` closest to ``r_opt`` (None for non-integer ``n``).
    """

    r_opt: float
    speedup_max: float
    clamped: bool
    r_divisor: int = None


@dataclass(frozen=True)
class LimitResult:
    """Speedup limit for infinitely many cores; ``math.inf`` when unbounded."""

    limit_value: float
    regime: Regime


@dataclass(frozen=True)
class ScheduleAdvice:
    """
    Where to run the parallelizable part of a workload.

    Parameters
    ----------
    decision : {'parallel', 'sequential'}
    recommended_r : float
        Core size to use.
    recommended_cores : int
        Number of cores to use.
    expected_speedup : float
        Model speedup of the recommended configuration.
    """

    decision: str
    recommended_r: float
    recommended_cores: int
    expected_speedup: float


@dataclass(frozen=True)
class IntensityPreset:
    """A labelled pair of intensity power laws."""

    label: str
    conn: PowerLaw = ZERO
    sync: PowerLaw = ZERO

    def workload(self, f):
        return WorkloadModel(f, self.conn, self.sync)


@dataclass(frozen=True)
class ModelSuite:
    """
    Parameters of all comparable models.

    Parameters
    ----------
    conn, sync : PowerLaw, default zero
        Intensities of our model.
    law : PerformanceLaw, default :data:`~mcspeedup.modeling.POLLACK`
        Core performance of our model (the baselines use the square root).
    cassidy : CassidyParams
    gunther : GuntherParams
    ee_cs_share, ee_p_cnt, ee_p_cs : float, default 0.1
        Eyerman-Eeckhout setup, see :meth:`EEParams.from_fraction`.
    """

    conn: PowerLaw = ZERO
    sync: PowerLaw = ZERO
    law: object = POLLACK
    cassidy: CassidyParams = field(default_factory=CassidyParams)
    gunther: GuntherParams = field(default_factory=GuntherParams)
    ee_cs_share: float = 0.1
    ee_p_cnt: float = 0.1
    ee_p_cs: float = 0.1

    def workload(self, f):
        return WorkloadModel(f, self.conn, self.sync)

    def handle(self, name, n, f, topology=Topology.SYMMETRIC):
        """
        Speedup of model ``name`` as a function of the core size.

        Parameters
        ----------
        name : str
            One of :data:`MODELS`.
        n : float
            Chip budget, in BCE.
        f : float
            Parallelizable fraction (sequential fraction for
            'eyerman-eeckhout', see :meth:`EEParams.from_fraction`).
        topology : Topology, default symmetric

        Returns
        -------
        callable
            Maps scalar or array ``r`` to the speedup.
        """
        topology = Topology(topology)
        if name not in MODELS:
            raise ModelDomainError(f"Unknown model '{name}', expected one of {MODELS}")
        if name in SYMMETRIC_ONLY and topology is Topology.ASYMMETRIC:
            raise ModelDomainError(f"Model '{name}' has no asymmetric form")

        if name == "ours":
            workload = self.workload(f)
            return lambda r: speedup(ChipBudget(n, r), workload, topology, self.law)
        if name == "hill-marty":
            return lambda r: hm_speedup(ChipBudget(n, r), f, topology)
        if name == "cassidy":
            return lambda r: cassidy_speedup(ChipBudget(n, r), f, self.cassidy)
        if name == "gunther":
            return lambda r: gunther_sym_speedup(ChipBudget(n, r), f, self.gunther)
        params = EEParams.from_fraction(f, self.ee_cs_share, self.ee_p_cnt, self.ee_p_cs)
        return lambda r: ee_speedup(ChipBudget(n, r), params, topology)


def _cores(n, r, topology):
    return ChipBudget(n, r).cores(topology)


def nearest_divisor(n, r):
    """Divisor of the integer ``n`` closest to ``r``, None if ``n`` is not integral."""
    if n != int(n):
        return None
    n = int(n)
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    return min(divisors, key=lambda d: abs(d - r))


def golden_section_search(func, a, b, tol=1.0e-5, max_steps=MAX_STEPS):
    """
    Brackets the minimum of a unimodal function.

    Evaluations are reused between iterations, one new evaluation per
    step.

    Parameters
    ----------
    func : callable
        Function of one float.
    a, b : float
        Search interval.
    tol : float, default 1e-5
        Absolute width of the returned bracket.
    max_steps : int, default :data:`MAX_STEPS`
        Evaluation budget; the search stops early with a wider bracket
        once it is spent.

    Returns
    -------
    tuple[float]
        Interval ``(c, d)`` containing the minimum, ``d - c <= tol`` unless
        the budget ran out.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    if steps > max_steps:
        logger.warning(f"Golden-section search stopped after {max_steps} of {steps} steps")
        steps = max_steps
    c = a + INV_PHI_SQUARED * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)
    for _ in range(steps - 1):
        h *= INV_PHI
        if yc < yd:
            b, d, yd = d, c, yc
            c = a + INV_PHI_SQUARED * h
            yc = func(c)
        else:
            a, c, yc = c, d, yd
            d = a + INV_PHI * h
            yd = func(d)
    logger.debug(f"Golden-section search converged in {steps} steps")
    return (a, d) if yc < yd else (c, b)


def optimal_r_hm_sym(n, f):
    """
    Hill and Marty's optimal symmetric core size, ``n*(1 - f)/f``.

    The closed form is clamped to ``[1, n]``; ``f = 0`` yields the
    largest core.

    Returns
    -------
    OptimumResult
    """
    if not 0 <= f <= 1:
        raise ModelDomainError(f"f must lie in [0, 1], got {f}")
    if n < 1:
        raise ModelDomainError(f"n must be at least 1 BCE, got {n}")
    raw = math.inf if f == 0 else n * (1 - f) / f
    r = min(max(raw, 1.0), float(n))
    return OptimumResult(
        r_opt=r,
        speedup_max=hm_speedup(ChipBudget(n, r), f),
        clamped=not 1 < raw < n,
        r_divisor=nearest_divisor(n, r),
    )


def _evaluate(model, r):
    value = float(model(r))
    if not math.isfinite(value):
        raise SolverError(f"Model value {value} is not finite at r={r:.10g}")
    return value


def optimal_r_numeric(model, n, grid_size=GRID_SIZE, rtol=RTOL):
    """
    Maximizes a speedup-vs-core-size curve over ``[1, n]``.

    Parameters
    ----------
    model : callable
        Model handle, see :meth:`ModelSuite.handle`.
    n : float
        Chip budget, in BCE.
    grid_size : int, default :data:`GRID_SIZE`
        Number of log-spaced coarse samples, at least 512.
    rtol : float, default :data:`RTOL`
        Relative tolerance on ``r`` of the refinement.

    Returns
    -------
    OptimumResult

    Raises
    ------
    SolverError
        If the model is not finite somewhere on the grid.
    """
    if grid_size < GRID_SIZE:
        raise ModelDomainError(f"grid_size must be at least {GRID_SIZE}, got {grid_size}")
    if n < 1:
        raise ModelDomainError(f"n must be at least 1 BCE, got {n}")
    if n == 1:
        return OptimumResult(1.0, _evaluate(model, 1.0), True, 1)

    grid = np.geomspace(1.0, float(n), grid_size)
    grid[0], grid[-1] = 1.0, float(n)
    values = np.asarray(model(grid), dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        i = bad[0]
        raise SolverError(f"Model value {values[i]} is not finite at r={grid[i]:.10g}")

    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_size - 1)]
    c, d = golden_section_search(lambda r: -_evaluate(model, r), lo, hi, tol=rtol * hi)
    r_opt = (c + d) / 2
    best = _evaluate(model, r_opt)
    if values[i] > best:
        r_opt, best = float(grid[i]), float(values[i])
    clamped = r_opt <= 1.0 or r_opt >= n
    logger.debug(f"Optimal core size {r_opt:.6g} of {n} BCE, speedup {best:.6g}")
    return OptimumResult(float(r_opt), best, bool(clamped), nearest_divisor(n, r_opt))


def asymptotic_limit(f, conn, sync):
    """
    Speedup limit as the core count grows without bound.

    With ``f1 = f1'*nc**p`` and ``f2 = f2'*nc**q`` the communication term
    ``f1/nc`` vanishes for ``p < 1``, tends to ``f1'`` for ``p = 1`` and
    diverges for ``p > 1``; the synchronization term vanishes for
    ``q < 0``, tends to ``f2'`` for ``q = 0`` and diverges for ``q > 0``.
    Mixed exponents combine the two terms additively (beyond the three
    corner cases usually quoted), any divergent term drives the speedup
    to zero, and an identically zero intensity never contributes.

    Parameters
    ----------
    f : float
        Parallelizable fraction.
    conn, sync : PowerLaw
        Connectivity and synchronization intensities.

    Returns
    -------
    LimitResult
    """
    if not 0 <= f <= 1:
        raise ModelDomainError(f"f must lie in [0, 1], got {f}")
    conn_live = not conn.is_zero
    sync_live = not sync.is_zero
    if (conn_live and conn.exponent > 1) or (sync_live and sync.exponent > 0):
        return LimitResult(0.0, Regime.VANISHING)

    overhead = 0.0
    if conn_live and conn.exponent == 1:
        overhead += conn.coeff
    if sync_live and sync.exponent == 0:
        overhead += sync.coeff
    if overhead == 0:
        value = math.inf if f == 1 else 1 / (1 - f)
        return LimitResult(value, Regime.AMDAHL_BOUND)
    return LimitResult(1 / (1 - f + overhead), Regime.CONSTANT_OVERHEAD)


def _map(func, items, workers=None):
    """Maps in input order, on a thread pool when ``workers > 1``."""
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _hm_optimum(n, f, topology, grid_size, rtol):
    if Topology(topology) is Topology.SYMMETRIC:
        return optimal_r_hm_sym(n, f)
    handle = ModelSuite().handle("hill-marty", n, f, topology)
    return optimal_r_numeric(handle, n, grid_size, rtol)


def _format(value):
    return f"{value:g}"


def sweep_max_speedup_vs_sync(
    n,
    fs,
    qs,
    sync_coeff=0.01,
    topology=Topology.SYMMETRIC,
    law=POLLACK,
    grid_size=GRID_SIZE,
    rtol=RTOL,
    workers=None,
):
    """
    Maximum speedup versus the synchronization exponent ``q``.

    For each ``f``, our model with ``f1 = 0`` and ``f2 = sync_coeff *
    nc**q`` is optimized over ``r`` separately at every ``q``; the Hill
    and Marty optimum is reported alongside as a constant series.

    Parameters
    ----------
    n : float
        Chip budget, in BCE.
    fs : iterable[float]
        Parallelizable fractions.
    qs : iterable[float]
        Synchronization exponents, strictly increasing.
    sync_coeff : float, default 0.01
        Synchronization coefficient ``f2'``.
    topology : Topology, default symmetric
    law : PerformanceLaw, default square root
    grid_size, rtol :
        See :func:`optimal_r_numeric`.
    workers : int, optional
        Evaluate the ``q`` samples on a thread pool of this size.

    Returns
    -------
    list[SpeedupCurve]
        Pairs of ``ours__f=<f>`` and ``hill-marty__f=<f>`` series, ``x = q``.
    """
    qs = np.asarray(list(qs), dtype=float)
    curves = []
    for f in fs:
        def optimum(q, f=f):
            suite = ModelSuite(sync=PowerLaw(sync_coeff, q), law=law)
            return optimal_r_numeric(suite.handle("ours", n, f, topology), n, grid_size, rtol)

        results = _map(optimum, qs, workers)
        r = np.array([res.r_opt for res in results])
        curves.append(
            SpeedupCurve(
                f"ours__f={_format(f)}",
                qs,
                r,
                _cores(n, r, topology),
                [res.speedup_max for res in results],
                axis="q",
            )
        )
        ref = _hm_optimum(n, f, topology, grid_size, rtol)
        r = np.full(qs.shape, ref.r_opt)
        curves.append(
            SpeedupCurve(
                f"hill-marty__f={_format(f)}",
                qs,
                r,
                _cores(n, r, topology),
                np.full(qs.shape, ref.speedup_max),
                axis="q",
            )
        )
        logger.info(f"Swept {len(qs)} synchronization exponents at f={_format(f)}")
    return curves


def sweep_optimal_r_vs_f(
    n,
    fs,
    presets,
    topology=Topology.SYMMETRIC,
    law=POLLACK,
    grid_size=GRID_SIZE,
    rtol=RTOL,
    workers=None,
):
    """
    Optimal core size versus the parallelizable fraction.

    Parameters
    ----------
    n : float
        Chip budget, in BCE.
    fs : iterable[float]
        Parallelizable fractions, strictly increasing.
    presets : iterable[IntensityPreset]
        Intensity settings of our model, one series each.
    topology : Topology, default symmetric
    law, grid_size, rtol, workers :
        See :func:`sweep_max_speedup_vs_sync`.

    Returns
    -------
    list[SpeedupCurve]
        The ``hill-marty`` reference followed by one ``ours__<label>``
        series per preset; ``x = f``, values are optimal core sizes and
        ``meta['speedup_max']`` holds the corresponding speedups.
    """
    fs = np.asarray(list(fs), dtype=float)

    def series(label, results):
        r = np.array([res.r_opt for res in results])
        return SpeedupCurve(
            label,
            fs,
            r,
            _cores(n, r, topology),
            r,
            axis="f",
            meta={"speedup_max": np.array([res.speedup_max for res in results])},
        )

    reference = _map(lambda f: _hm_optimum(n, f, topology, grid_size, rtol), fs, workers)
    curves = [series("hill-marty", reference)]
    for preset in presets:
        def optimum(f, preset=preset):
            suite = ModelSuite(conn=preset.conn, sync=preset.sync, law=law)
            return optimal_r_numeric(suite.handle("ours", n, f, topology), n, grid_size, rtol)

        curves.append(series(f"ours__{preset.label}", _map(optimum, fs, workers)))
        logger.info(f"Swept {len(fs)} parallel fractions for preset {preset.label}")
    return curves


def advise_schedule(
    n,
    workload,
    topology=Topology.SYMMETRIC,
    law=POLLACK,
    grid_size=GRID_SIZE,
    rtol=RTOL,
):
    """
    Parallel cores or a single big core?

    The best parallel configuration of our model is compared with running
    everything on one ``n``-BCE core, which needs neither synchronization
    nor communication and so achieves ``perf(n)``. Ties go to the single
    core.

    Parameters
    ----------
    n : float
        Chip budget, in BCE.
    workload : WorkloadModel
    topology : Topology, default symmetric
    law : PerformanceLaw, default square root
    grid_size, rtol :
        See :func:`optimal_r_numeric`.

    Returns
    -------
    ScheduleAdvice
    """
    suite = ModelSuite(conn=workload.conn, sync=workload.sync, law=law)
    best = optimal_r_numeric(suite.handle("ours", n, workload.f, topology), n, grid_size, rtol)
    single = perf_seq(n, law)
    if best.speedup_max > single:
        cores = max(1, int(_cores(n, best.r_opt, topology)))
        advice = ScheduleAdvice("parallel", best.r_opt, cores, best.speedup_max)
    else:
        advice = ScheduleAdvice("sequential", float(n), 1, single)
    logger.debug(
        f"Parallel optimum {best.speedup_max:.6g} at r={best.r_opt:.6g}, "
        f"single core {single:.6g}: {advice.decision}"
    )
    return advice
