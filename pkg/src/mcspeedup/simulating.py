# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Cycle-level simulation of a symmetric multicore.

The simulated chip spends ``n`` BCE on ``nc = n/r`` cores of size ``r``.
Each core owns a private memory; a last-level shared memory holds the
inputs and collects the results of a parallel section. A run goes
through the following phases, one after the other:

*   ``sync_down``, inputs are copied from the shared memory to the
    private memories through a single channel;
*   ``compute`` bursts, separated by barriers;
*   ``comm`` steps, permutations of data blocks through the inter-core
    switch, each complete when its slowest participant is done;
*   ``sync_up``, results are copied back to the shared memory.

Every instruction, element transfers included, runs at the core's
performance ``r**perf_exponent``: a burst of ``W`` operations costs
``ceil(W/perf)`` cycles. A single core (``r = n``) keeps its data in
place, so nothing is synchronized nor exchanged.

The serial reference runs on one 1-BCE core; comparing the element
counts actually moved against it yields the measured synchronization
and connectivity intensities.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from logging import getLogger

import numpy as np

from .modeling import (
    ChipBudget,
    ModelDomainError,
    PerformanceLaw,
    PowerLaw,
    SimulationError,
    SpeedupCurve,
    WorkloadModel,
    speedup_sym,
)
from .workloads import SEED, get_workload

__all__ = [
    "PHASES",
    "SimConfig",
    "PhaseTrace",
    "SimReport",
    "SimRun",
    "SimSweep",
    "Multicore",
    "simulate",
    "run_serial",
    "run_parallel",
    "measure_intensities",
    "speedup_curve_sim",
    "divisors",
    "trace_table",
]

logger = getLogger(__package__)

PHASES = ("seq", "sync_down", "compute", "comm", "sync_up")
"""tuple of str: Execution phases, in trace order."""

TRACE_COLUMNS = ("phase", "start_cycle", "end_cycle", "core_id", "elements_moved")


def _ceil(x):
    # exact quotients must not round up on representation error
    nearest = round(x)
    if abs(x - nearest) <= 1e-9 * max(1.0, abs(x)):
        return int(nearest)
    return math.ceil(x)


def _size(payload):
    if isinstance(payload, (tuple, list)):
        return sum(_size(p) for p in payload)
    return int(np.size(payload))


def _copy(payload):
    if isinstance(payload, (tuple, list)):
        return type(payload)(_copy(p) for p in payload)
    return np.array(payload, copy=True)


@dataclass(frozen=True)
class SimConfig:
    """
    Simulated machine and task.

    Parameters
    ----------
    task_size : int
        Workload size ``N``.
    total_bce : int, default ``task_size``
        Chip resources ``n``.
    core_size : int, default 1
        Core size ``r``, a divisor of ``n``.
    perf_exponent : float, default 0.5
    transfer_cost : int, default 1
        Cycles per transferred element on a 1-BCE core.
    hop_cost : int, default 1
        Cycles per traversal of the switch.
    """

    task_size: int
    total_bce: int = None
    core_size: int = 1
    perf_exponent: float = 0.5
    transfer_cost: int = 1
    hop_cost: int = 1

    def __post_init__(self):
        if self.total_bce is None:
            object.__setattr__(self, "total_bce", self.task_size)
        N, n, r = self.task_size, self.total_bce, self.core_size
        for name, value in (("task_size", N), ("total_bce", n), ("core_size", r)):
            if int(value) != value or value < 1:
                raise ModelDomainError(f"{name} must be a positive integer, got {value}")
        if n % r:
            raise ModelDomainError(f"core size {r} does not divide n={n}")
        if n // r > N:
            raise ModelDomainError(f"{n // r} cores would idle on a task of size {N}")
        PerformanceLaw(self.perf_exponent)
        if self.transfer_cost < 0 or self.hop_cost < 0:
            raise ModelDomainError("transfer and hop costs must be nonnegative")

    @property
    def cores(self):
        """Core count ``nc = n/r``."""
        return self.total_bce // self.core_size

    @property
    def perf(self):
        return self.core_size ** self.perf_exponent


@dataclass(frozen=True)
class PhaseTrace:
    """Cycles spent in each phase of a run."""

    t_seq: int = 0
    t_sync_down: int = 0
    t_compute: int = 0
    t_comm: int = 0
    t_sync_up: int = 0

    def __post_init__(self):
        if any(getattr(self, f.name) < 0 for f in fields(self)):
            raise ModelDomainError("phase times must be nonnegative")

    @property
    def tmc(self):
        """Total cycles."""
        return sum(getattr(self, f.name) for f in fields(self))


@dataclass(frozen=True)
class SimReport:
    """
    Measurements of one simulated run.

    ``ts_serial_equiv`` and ``tc_serial_equiv`` are the element counts
    moved through the synchronization channel and the switch, times the
    transfer cost, as a 1-BCE core would take to move them.
    """

    t1_serial: int
    tmc: int
    ts_serial_equiv: float
    tc_serial_equiv: float
    f1_measured: float
    f2_measured: float
    speedup: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SimRun:
    """A simulated run with its trace, events and functional output."""

    workload: str
    config: SimConfig
    report: SimReport
    trace: PhaseTrace
    moved_sync: int
    moved_comm: int
    error: float
    output: np.ndarray = field(repr=False, compare=False)
    events: tuple = field(default=(), repr=False, compare=False)


class Multicore:
    """
    A symmetric multicore advancing a global cycle counter.

    The machine is driven by a workload schedule, one call per phase.
    Calls are not reentrant.

    Parameters
    ----------
    config : SimConfig
    record : bool, default True
        Whether to keep per-core trace events.
    """

    def __init__(self, config, record=True):
        self.config = config
        self.nc = config.cores
        self.perf = config.perf
        self.record = record
        self.cycle = 0
        self.phases = dict.fromkeys(PHASES, 0)
        self.moved = {"sync": 0, "comm": 0}
        self.events = []

    def __repr__(self):
        return f"Multicore(nc={self.nc}, r={self.config.core_size}, cycle={self.cycle})"

    def cycles(self, ops):
        """Cycles to execute ``ops`` 1-BCE operations on one core."""
        return _ceil(ops / self.perf) if ops else 0

    def _advance(self, phase, duration):
        self.phases[phase] += duration
        self.cycle += duration
        logger.debug(f"{phase}: {duration} cycles, now at {self.cycle}")

    def _event(self, phase, start, end, core, elements=0):
        if self.record:
            self.events.append((phase, start, end, core, elements))

    def sequential(self, ops):
        """Charges ``ops`` operations to the sequential core."""
        duration = self.cycles(ops)
        self._event("seq", self.cycle, self.cycle + duration, 0)
        self._advance("seq", duration)

    def _synchronize(self, phase, shares):
        if len(shares) != self.nc:
            raise SimulationError(f"{phase} expects {self.nc} shares, got {len(shares)}")
        copies = [_copy(share) for share in shares]
        if self.nc == 1:
            return copies
        # one channel, cores served in order
        cost = self.config.transfer_cost
        start, moved = self.cycle, 0
        for core, share in enumerate(shares):
            elements = _size(share)
            end = self.cycle + self.cycles((moved + elements) * cost)
            self._event(phase, start, end, core, elements)
            moved += elements
            start = end
        self.moved["sync"] += moved
        self._advance(phase, self.cycles(moved * cost))
        return copies

    def sync_down(self, shares):
        """Copies one input share per core to the private memories."""
        return self._synchronize("sync_down", shares)

    def sync_up(self, shares):
        """Copies one result share per core back to the shared memory."""
        return self._synchronize("sync_up", shares)

    def compute(self, ops_per_core):
        """A compute burst on every core, followed by a barrier."""
        durations = [self.cycles(ops) for ops in ops_per_core]
        for core, duration in enumerate(durations):
            self._event("compute", self.cycle, self.cycle + duration, core)
        self._advance("compute", max(durations, default=0))

    def exchange(self, messages):
        """
        A barrier-synchronized permutation step through the switch.

        Parameters
        ----------
        messages : list[list[tuple]]
            ``(destination, tag, payload)`` triples sent by each core.

        Returns
        -------
        list[dict]
            Payloads received by each core, by tag.
        """
        if len(messages) != self.nc:
            raise SimulationError(f"exchange expects {self.nc} outboxes, got {len(messages)}")
        inbox = [{} for _ in range(self.nc)]
        durations = []
        for core, outbox in enumerate(messages):
            sent = 0
            for dest, tag, payload in outbox:
                if tag in inbox[dest]:
                    raise SimulationError(f"core {dest} receives '{tag}' twice")
                inbox[dest][tag] = _copy(payload)
                sent += _size(payload)
            duration = self.cycles(sent * self.config.transfer_cost) + self.config.hop_cost
            durations.append(duration)
            self._event("comm", self.cycle, self.cycle + duration, core, sent)
            self.moved["comm"] += sent
        self._advance("comm", max(durations, default=0))
        return inbox

    @property
    def trace(self):
        return PhaseTrace(*(self.phases[phase] for phase in PHASES))


def run_serial(workload, N, seed=SEED, data=None):
    """
    Runs a workload on a single 1-BCE core.

    Parameters
    ----------
    workload : str or WorkloadSpec
    N : int
        Task size.
    seed : int, default :data:`~mcspeedup.workloads.SEED`
        Input generator seed, unused if ``data`` is given.
    data : optional
        Workload input.

    Returns
    -------
    tuple
        The serial cycle count and the reference output.
    """
    spec = get_workload(workload)
    spec.check_size(N)
    if data is None:
        data = spec.generate(N, seed)
    machine = Multicore(SimConfig(N, total_bce=1, core_size=1), record=False)
    output = spec.serial(data, machine.sequential)
    t1 = machine.trace.tmc
    if t1 != spec.serial_cycles(N):
        raise SimulationError(
            f"{spec.name} serial run took {t1} cycles, expected {spec.serial_cycles(N)}"
        )
    return t1, output


def simulate(workload, config, seed=SEED, data=None):
    """
    Runs a workload on the multicore described by ``config``.

    The parallel output is checked against the serial reference and the
    elements moved against the declared volumes.

    Returns
    -------
    SimRun

    Raises
    ------
    :class:`~mcspeedup.modeling.SimulationError`
        If the partition is infeasible or the run fails its checks.
    """
    spec = get_workload(workload)
    N, nc = config.task_size, config.cores
    spec.check_size(N)
    if not spec.feasible(N, nc):
        raise SimulationError(f"{spec.name} of size {N} cannot be laid out on {nc} cores")
    if data is None:
        data = spec.generate(N, seed)
    t1, reference = run_serial(spec, N, data=data)

    machine = Multicore(config)
    output = spec.parallel(data, machine)
    error = spec.error(output, reference)
    if not error <= spec.tolerance:
        raise SimulationError(
            f"{spec.name} on {nc} cores deviates by {error:g} from the serial result"
        )
    declared = spec.declared_volumes(N, nc)
    moved = (machine.moved["sync"], machine.moved["comm"])
    if moved != declared:
        raise SimulationError(f"{spec.name} moved {moved} elements, declared {declared}")

    trace = machine.trace
    ts = moved[0] * config.transfer_cost
    tc = moved[1] * config.transfer_cost
    report = SimReport(
        t1_serial=t1,
        tmc=trace.tmc,
        ts_serial_equiv=ts,
        tc_serial_equiv=tc,
        f1_measured=tc / t1,
        f2_measured=ts / t1,
        speedup=t1 / trace.tmc,
    )
    logger.debug(
        f"{spec.name} r={config.core_size}: moved {moved[0]} + {moved[1]} {spec.element}s, "
        f"{report}"
    )
    return SimRun(spec.name, config, report, trace, *moved, error, output, tuple(machine.events))


def run_parallel(workload, config, seed=SEED, data=None):
    """Simulated run of ``workload`` on ``config``, see :func:`simulate`."""
    return simulate(workload, config, seed, data).report


def measure_intensities(report):
    """
    Connectivity and synchronization intensities of a run.

    Returns
    -------
    tuple[float]
        ``(tc_serial_equiv/t1_serial, ts_serial_equiv/t1_serial)``.
    """
    if report.t1_serial == 0:
        raise ModelDomainError("serial time is zero, intensities are undefined")
    return (
        report.tc_serial_equiv / report.t1_serial,
        report.ts_serial_equiv / report.t1_serial,
    )


def divisors(n):
    """Divisors of ``n``, in increasing order."""
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class SimSweep:
    """
    Simulated runs over core sizes, with their series.

    Attributes
    ----------
    runs : tuple[SimRun]
    speedup, f1, f2 : SpeedupCurve
        Measured series.
    overlay : SpeedupCurve
        Symmetric model speedup with ``f = 1`` and the measured
        intensities, as constant power laws at each sample.
    """

    workload: str
    runs: tuple
    speedup: SpeedupCurve
    f1: SpeedupCurve
    f2: SpeedupCurve
    overlay: SpeedupCurve

    @property
    def curves(self):
        return self.speedup, self.f1, self.f2, self.overlay


def speedup_curve_sim(
    workload,
    N=256,
    rs=None,
    n=None,
    perf_exponent=0.5,
    transfer_cost=1,
    hop_cost=1,
    seed=SEED,
    workers=None,
):
    """
    Simulates a workload over a range of core sizes.

    Core sizes whose core count the workload cannot be laid out on are
    skipped with a warning.

    Parameters
    ----------
    workload : str or WorkloadSpec
    N : int, default 256
    rs : list[int], default all divisors of ``n``
    n : int, default ``N``
    perf_exponent, transfer_cost, hop_cost :
        See :class:`SimConfig`.
    seed : int, default :data:`~mcspeedup.workloads.SEED`
    workers : int, optional
        Thread pool size; runs are independent.

    Returns
    -------
    SimSweep
    """
    spec = get_workload(workload)
    n = N if n is None else n
    rs = divisors(n) if rs is None else sorted(set(rs))
    configs = []
    for r in rs:
        config = SimConfig(N, n, r, perf_exponent, transfer_cost, hop_cost)
        if spec.feasible(N, config.cores):
            configs.append(config)
        else:
            logger.warning(f"Skipped {spec.name} at r={r}: no layout on {config.cores} cores")
    if not configs:
        raise SimulationError(f"{spec.name} has no feasible core size among {rs}")

    data = spec.generate(N, seed)
    with ThreadPoolExecutor(workers) as pool:
        runs = tuple(pool.map(lambda c: simulate(spec, c, data=data), configs))

    r = np.array([run.config.core_size for run in runs], dtype=float)
    nc = n / r
    law = PerformanceLaw(perf_exponent)
    overlay = [
        speedup_sym(
            ChipBudget(n, run.config.core_size),
            WorkloadModel(1.0, PowerLaw(run.report.f1_measured), PowerLaw(run.report.f2_measured)),
            law,
        )
        for run in runs
    ]

    def curve(kind, values):
        return SpeedupCurve(f"{spec.name}__{kind}", r, r, nc, values, meta={"N": N})

    return SimSweep(
        spec.name,
        runs,
        curve("speedup", [run.report.speedup for run in runs]),
        curve("f1", [run.report.f1_measured for run in runs]),
        curve("f2", [run.report.f2_measured for run in runs]),
        curve("model", overlay),
    )


def trace_table(run):
    """Returns the CSV header and the trace events of a run."""
    return list(TRACE_COLUMNS), [list(event) for event in run.events]
