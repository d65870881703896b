# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Instrumented workloads for the multicore simulator.

Three kernels spanning the range of synchronization intensities:

====================  ===================  ==========================
workload              serial cycles        elements synchronized
====================  ===================  ==========================
``black-scholes``     ``560 N``            ``8 N`` (6 in, 2 out)
``fft``               ``5 N log2 N``       ``2 N`` (complex samples)
``dmm``               ``2 N**1.5``         ``3 N`` (two inputs, one output)
====================  ===================  ==========================

Each :class:`WorkloadSpec` provides a serial reference, a schedule of
the same computation over ``nc`` cores of a
:class:`~mcspeedup.simulating.Multicore`, and the volumes it declares to
move through the synchronization channel and the inter-core switch.
Cycle charges are calibrated on the serial totals; the arithmetic is
carried out for real alongside, in double precision, so that parallel
results can be checked against the serial ones.

Inputs are pseudo-random but reproducible, drawn from
:func:`numpy.random.default_rng` seeded with :data:`SEED` unless told
otherwise.
"""

import abc
import math
from dataclasses import dataclass, replace
from logging import getLogger
from pathlib import Path

import numpy as np

from .modeling import ModelDomainError

__all__ = [
    "SEED",
    "OptionPair",
    "WorkloadSpec",
    "BlackScholes",
    "FFT",
    "DenseMatMul",
    "WORKLOADS",
    "get_workload",
    "cnd",
    "price_options",
    "black_scholes_serial",
    "fft_serial",
    "dmm_serial",
    "declared_volumes",
    "save_inputs",
    "load_inputs",
]

logger = getLogger(__package__)

SEED = 2013
"""int: Default seed of the workload input generators."""

OPTION_FIELDS = ("spot", "strike", "expiry", "rate", "volatility", "dividend_yield")
PRICE_FIELDS = ("call_price", "put_price")

# Abramowitz & Stegun 26.2.17, absolute error below 7.5e-8
CND_P = 0.2316419
CND_A = (0.31938153, -0.356563782, 1.781477937, -1.821255978, 1.330274429)
RSQRT2PI = 0.39894228040143267793994605993438


def _is_power_of_two(n):
    return n >= 1 and n & (n - 1) == 0


def _isqrt_exact(n):
    root = math.isqrt(n)
    return root if root * root == n else None


def _charge(charge, ops):
    if charge is not None:
        charge(ops)


def cnd(d):
    """
    Cumulative standard normal distribution.

    Polynomial approximation with absolute error below ``1e-7``;
    ``cnd(-d) == 1 - cnd(d)`` holds to rounding for nonzero ``d``.
    """
    d = np.asarray(d, dtype=float)
    k = 1.0 / (1.0 + CND_P * np.abs(d))
    poly = k * (CND_A[0] + k * (CND_A[1] + k * (CND_A[2] + k * (CND_A[3] + k * CND_A[4]))))
    tail = RSQRT2PI * np.exp(-0.5 * d * d) * poly
    return np.where(d > 0, 1.0 - tail, tail)


@dataclass(frozen=True)
class OptionPair:
    """
    A European call and put sharing their contract terms.

    ``spot``, ``strike``, ``expiry`` and ``volatility`` must be positive,
    ``rate`` and ``dividend_yield`` nonnegative. Prices are None until
    computed.
    """

    spot: float
    strike: float
    expiry: float
    rate: float
    volatility: float
    dividend_yield: float = 0.0
    call_price: float = None
    put_price: float = None

    def __post_init__(self):
        for name in ("spot", "strike", "expiry", "volatility"):
            if not getattr(self, name) > 0:
                raise ModelDomainError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("rate", "dividend_yield"):
            if not getattr(self, name) >= 0:
                raise ModelDomainError(f"{name} must be nonnegative, got {getattr(self, name)}")

    @property
    def terms(self):
        return tuple(getattr(self, name) for name in OPTION_FIELDS)

    def parity_gap(self):
        """Deviation from put-call parity of the priced pair."""
        forward = self.spot * math.exp(-self.dividend_yield * self.expiry)
        discounted = self.strike * math.exp(-self.rate * self.expiry)
        return (self.call_price - self.put_price) - (forward - discounted)


def price_options(spot, strike, expiry, rate, volatility, dividend_yield=0.0):
    """
    Black-Scholes prices of European calls and puts.

    Parameters
    ----------
    spot, strike, expiry, rate, volatility, dividend_yield : array_like
        Contract terms, broadcast together.

    Returns
    -------
    tuple[numpy.ndarray]
        Call and put prices.
    """
    terms = (spot, strike, expiry, rate, volatility, dividend_yield)
    s, x, t, r, v, q = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in terms))
    sqrt_t = np.sqrt(t)
    d1 = (np.log(s / x) + (r - q + 0.5 * v * v) * t) / (v * sqrt_t)
    d2 = d1 - v * sqrt_t
    forward = s * np.exp(-q * t)
    discounted = x * np.exp(-r * t)
    n1, n2 = cnd(d1), cnd(d2)
    call = forward * n1 - discounted * n2
    put = discounted * (1.0 - n2) - forward * (1.0 - n1)
    return call, put


def black_scholes_serial(pairs, charge=None):
    """
    Prices a list of option pairs.

    Parameters
    ----------
    pairs : list[OptionPair]
    charge : callable, optional
        Receives the cycle charge, :attr:`BlackScholes.OPS_PER_PAIR` per pair.

    Returns
    -------
    list[OptionPair]
        Copies of the input with prices filled in.
    """
    if not pairs:
        return []
    terms = np.array([pair.terms for pair in pairs], dtype=float)
    call, put = price_options(*terms.T)
    _charge(charge, BlackScholes.OPS_PER_PAIR * len(pairs))
    return [
        replace(pair, call_price=float(c), put_price=float(p))
        for pair, c, p in zip(pairs, call, put)
    ]


def _twiddles(m):
    half = m // 2
    return np.exp(-2j * np.pi * np.arange(half) / m)


def _bit_reversal(n):
    bits = n.bit_length() - 1
    index = np.arange(n)
    reversed_ = np.zeros(n, dtype=int)
    for b in range(bits):
        reversed_ |= ((index >> b) & 1) << (bits - 1 - b)
    return reversed_


def _local_stages(x, first, last):
    """Radix-2 stages ``first..last`` (inclusive, span ``2**s``) of a bit-reversed block."""
    for s in range(first, last + 1):
        m = 1 << s
        half = m // 2
        blocks = x.reshape(-1, m)
        u = blocks[:, :half]
        v = blocks[:, half:] * _twiddles(m)
        x = np.concatenate((u + v, u - v), axis=1).reshape(-1)
    return x


def fft_serial(samples, charge=None):
    """
    Radix-2 decimation-in-time FFT.

    Parameters
    ----------
    samples : array_like
        ``N`` complex samples, ``N`` a power of two.
    charge : callable, optional
        Receives :attr:`FFT.OPS_PER_POINT` ``* N`` cycles per stage.

    Returns
    -------
    numpy.ndarray
        The discrete Fourier transform, in natural order.
    """
    x = np.asarray(samples, dtype=complex).reshape(-1)
    n = x.size
    if not _is_power_of_two(n):
        raise ModelDomainError(f"FFT size must be a power of two, got {n}")
    x = x[_bit_reversal(n)]
    for s in range(1, n.bit_length()):
        x = _local_stages(x, s, s)
        _charge(charge, FFT.OPS_PER_POINT * n)
    return x


def dmm_serial(a, b, charge=None):
    """
    Dense product of two square matrices.

    Parameters
    ----------
    a, b : array_like
        Square matrices of equal shape.
    charge : callable, optional
        Receives :attr:`DenseMatMul.OPS_PER_MAC` cycles per multiply-accumulate.

    Returns
    -------
    numpy.ndarray
        ``a @ b``, accumulated one inner index at a time.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ModelDomainError(
            f"Expected square matrices of equal shape, got {a.shape} and {b.shape}"
        )
    m = a.shape[0]
    c = np.zeros((m, m))
    for k in range(m):
        c += np.outer(a[:, k], b[k, :])
    _charge(charge, DenseMatMul.OPS_PER_MAC * m ** 3)
    return c


class WorkloadSpec(abc.ABC):
    """
    A simulated workload.

    Attributes
    ----------
    name : str
        Identifier.
    comm_pattern : {'none', 'butterfly', 'cannon-shift'}
        Permutations used on the inter-core switch.
    element : str
        The datum counted as one transferred element.
    tolerance : float
        Maximum :meth:`error` of a parallel result.
    """

    name = None
    comm_pattern = "none"
    element = "real scalar"
    tolerance = 1.0e-9

    def __repr__(self):
        return f"{type(self).__name__}()"

    @abc.abstractmethod
    def check_size(self, N):
        """Raises :class:`~mcspeedup.modeling.ModelDomainError` on unsupported ``N``."""

    @abc.abstractmethod
    def serial_cycles(self, N):
        """Closed-form serial execution time on a 1-BCE core."""

    @abc.abstractmethod
    def sync_elements(self, N):
        """Elements moved by the synchronization channel, down plus up."""

    @abc.abstractmethod
    def comm_elements(self, N, nc):
        """Elements moved through the switch on ``nc > 1`` cores."""

    @abc.abstractmethod
    def feasible(self, N, nc):
        """Whether the schedule can be laid out on ``nc`` cores."""

    @abc.abstractmethod
    def partition(self, N, nc):
        """Per-core data assignment."""

    @abc.abstractmethod
    def generate(self, N, seed=SEED):
        """Reproducible input data of size ``N``."""

    @abc.abstractmethod
    def serial(self, data, charge=None):
        """Serial reference output, charging cycles to ``charge``."""

    @abc.abstractmethod
    def parallel(self, data, machine):
        """Runs the parallel schedule on ``machine`` and returns the output."""

    @abc.abstractmethod
    def error(self, output, reference):
        """Discrepancy of an output from the reference."""

    def declared_volumes(self, N, nc):
        """
        Elements to be moved on ``nc`` cores.

        Returns
        -------
        tuple[int]
            Synchronization and communication element counts; both zero
            on a single core, which keeps its data in place.
        """
        self.check_size(N)
        if nc == 1:
            return 0, 0
        return self.sync_elements(N), self.comm_elements(N, nc)

    def arithmetic_intensity(self, N):
        """Serial cycles per synchronized element."""
        return self.serial_cycles(N) / self.sync_elements(N)

    @abc.abstractmethod
    def to_table(self, data):
        """
        Returns the CSV header and one row per record.

        ``data`` is either the input of the workload or the output of
        :meth:`serial`/:meth:`parallel`; the header tells them apart.
        """

    @abc.abstractmethod
    def from_table(self, header, table):
        """Inverse of :meth:`to_table`."""


class BlackScholes(WorkloadSpec):
    """Black-Scholes pricing of ``N`` independent call/put pairs."""

    name = "black-scholes"
    comm_pattern = "none"
    element = "real scalar"
    tolerance = 1.0e-9

    OPS_PER_PAIR = 560
    """int: Cycles charged per priced pair."""

    LAYOUTS = (PRICE_FIELDS, OPTION_FIELDS, OPTION_FIELDS + PRICE_FIELDS)
    """tuple: CSV column sets of prices, option pairs, and both."""

    def check_size(self, N):
        if N < 1:
            raise ModelDomainError(f"Need at least one option pair, got {N}")

    def serial_cycles(self, N):
        return self.OPS_PER_PAIR * N

    def sync_elements(self, N):
        return (len(OPTION_FIELDS) + len(PRICE_FIELDS)) * N

    def comm_elements(self, N, nc):
        return 0

    def feasible(self, N, nc):
        return 1 <= nc <= N

    def partition(self, N, nc):
        return np.array_split(np.arange(N), nc)

    def generate(self, N, seed=SEED):
        self.check_size(N)
        rng = np.random.default_rng(seed)
        columns = [
            rng.uniform(5.0, 30.0, N),
            rng.uniform(1.0, 100.0, N),
            rng.uniform(0.25, 10.0, N),
            rng.uniform(0.01, 0.05, N),
            rng.uniform(0.1, 0.5, N),
            rng.uniform(0.0, 0.03, N),
        ]
        return np.column_stack(columns)

    def serial(self, data, charge=None):
        call, put = price_options(*np.asarray(data).T)
        _charge(charge, self.OPS_PER_PAIR * len(data))
        return np.column_stack((call, put))

    def parallel(self, data, machine):
        parts = self.partition(len(data), machine.nc)
        local = machine.sync_down([data[idx] for idx in parts])
        machine.compute([self.OPS_PER_PAIR * len(terms) for terms in local])
        prices = [np.column_stack(price_options(*terms.T)) for terms in local]
        return np.concatenate(machine.sync_up(prices))

    def error(self, output, reference):
        return float(np.max(np.abs(np.asarray(output) - np.asarray(reference))))

    def to_table(self, data):
        data = np.asarray(data, dtype=float)
        for header in self.LAYOUTS:
            if data.ndim == 2 and data.shape[1] == len(header):
                return list(header), data
        raise ModelDomainError(f"Cannot tabulate Black-Scholes data of shape {data.shape}")

    def from_table(self, header, table):
        if tuple(header) not in self.LAYOUTS:
            raise ModelDomainError(f"Unknown Black-Scholes columns {list(header)}")
        return np.asarray(table, dtype=float)

    def pairs(self, data):
        """The option pairs of a data table."""
        return [OptionPair(*row[: len(OPTION_FIELDS)]) for row in np.asarray(data)]


class FFT(WorkloadSpec):
    """
    ``N``-point radix-2 FFT.

    Samples are scattered over the cores in bit-reversed order, one
    contiguous block each. The first ``log2(N/nc)`` stages are local, each
    of the last ``log2(nc)`` stages swaps blocks between partner cores
    through the switch (butterfly permutation).
    """

    name = "fft"
    comm_pattern = "butterfly"
    element = "complex sample"
    tolerance = 1.0e-3

    OPS_PER_POINT = 5
    """int: Cycles charged per sample and stage."""

    def check_size(self, N):
        if not _is_power_of_two(N):
            raise ModelDomainError(f"FFT size must be a power of two, got {N}")

    def serial_cycles(self, N):
        return self.OPS_PER_POINT * N * int(math.log2(N))

    def sync_elements(self, N):
        return 2 * N

    def comm_elements(self, N, nc):
        return N * int(math.log2(nc))

    def feasible(self, N, nc):
        return _is_power_of_two(nc) and nc <= N

    def partition(self, N, nc):
        return np.split(_bit_reversal(N), nc)

    def generate(self, N, seed=SEED):
        self.check_size(N)
        rng = np.random.default_rng(seed)
        return rng.standard_normal(N) + 1j * rng.standard_normal(N)

    def serial(self, data, charge=None):
        return fft_serial(data, charge)

    def parallel(self, data, machine):
        data = np.asarray(data, dtype=complex)
        N, nc = data.size, machine.nc
        block = N // nc
        local_stages = int(math.log2(block))
        blocks = machine.sync_down([data[idx] for idx in self.partition(N, nc)])
        blocks = [_local_stages(x, 1, local_stages) for x in blocks]
        machine.compute([self.OPS_PER_POINT * block * local_stages] * nc)

        owned = [np.arange(k * block, (k + 1) * block) for k in range(nc)]
        for s in range(local_stages + 1, int(math.log2(N)) + 1):
            half = 1 << (s - 1)
            stride = half // block
            inbox = machine.exchange([[(k ^ stride, "x", blocks[k])] for k in range(nc)])
            w = _twiddles(1 << s)
            for k in range(nc):
                mine, theirs = blocks[k], inbox[k]["x"]
                t = w[owned[k] % half]
                if k & stride:
                    blocks[k] = theirs - t * mine
                else:
                    blocks[k] = mine + t * theirs
            machine.compute([self.OPS_PER_POINT * block] * nc)
        return np.concatenate(machine.sync_up(blocks))

    def error(self, output, reference):
        reference = np.asarray(reference)
        return float(np.linalg.norm(np.asarray(output) - reference) / np.linalg.norm(reference))

    def to_table(self, data):
        data = np.asarray(data, dtype=complex)
        table = np.column_stack((np.arange(data.size), data.real, data.imag))
        return ["index", "real", "imag"], table

    def from_table(self, header, table):
        table = np.asarray(table, dtype=float)
        order = np.argsort(table[:, 0], kind="stable")
        return table[order, 1] + 1j * table[order, 2]


class DenseMatMul(WorkloadSpec):
    """
    Product of two ``sqrt(N) x sqrt(N)`` matrices, ``N`` elements each.

    The parallel schedule is Cannon's algorithm on a ``q x q`` core grid
    (``nc = q**2``): an alignment permutation followed by ``q - 1``
    cyclic shifts of the A blocks along rows and the B blocks along
    columns, a block multiply-accumulate after each.
    """

    name = "dmm"
    comm_pattern = "cannon-shift"
    element = "real scalar"
    tolerance = 1.0e-5

    OPS_PER_MAC = 2
    """int: Cycles charged per multiply-accumulate."""

    def check_size(self, N):
        if N < 1 or _isqrt_exact(N) is None:
            raise ModelDomainError(f"Matrix element count must be a perfect square, got {N}")

    def serial_cycles(self, N):
        m = _isqrt_exact(N)
        return self.OPS_PER_MAC * m ** 3

    def sync_elements(self, N):
        return 3 * N

    def comm_elements(self, N, nc):
        return 2 * N * _isqrt_exact(nc)

    def feasible(self, N, nc):
        q = _isqrt_exact(nc)
        return q is not None and _isqrt_exact(N) % q == 0

    def partition(self, N, nc):
        m, q = _isqrt_exact(N), _isqrt_exact(nc)
        b = m // q
        return [
            (slice(i * b, (i + 1) * b), slice(j * b, (j + 1) * b))
            for i in range(q)
            for j in range(q)
        ]

    def generate(self, N, seed=SEED):
        self.check_size(N)
        m = _isqrt_exact(N)
        rng = np.random.default_rng(seed)
        return rng.uniform(-1.0, 1.0, (2, m, m))

    def serial(self, data, charge=None):
        a, b = data
        return dmm_serial(a, b, charge)

    def parallel(self, data, machine):
        a, b = np.asarray(data, dtype=float)
        N, nc = a.size, machine.nc
        q = _isqrt_exact(nc)
        blocks = self.partition(N, nc)
        local = machine.sync_down([(a[rows, cols], b[rows, cols]) for rows, cols in blocks])
        a_blk = [blk[0] for blk in local]
        b_blk = [blk[1] for blk in local]
        c_blk = [np.zeros_like(blk) for blk in a_blk]
        bsize = a_blk[0].shape[0]

        def core(i, j):
            return (i % q) * q + j % q

        for step in range(q):
            if q > 1:
                # alignment first, then unit shifts left (A) and up (B)
                shift = (lambda i, j: (i, j - i, i - j, j)) if step == 0 else (
                    lambda i, j: (i, j - 1, i - 1, j)
                )
                messages = []
                for k in range(nc):
                    i, j = divmod(k, q)
                    ai, aj, bi, bj = shift(i, j)
                    messages.append([(core(ai, aj), "a", a_blk[k]), (core(bi, bj), "b", b_blk[k])])
                inbox = machine.exchange(messages)
                a_blk = [box["a"] for box in inbox]
                b_blk = [box["b"] for box in inbox]
            for k in range(nc):
                c_blk[k] = c_blk[k] + a_blk[k] @ b_blk[k]
            machine.compute([self.OPS_PER_MAC * bsize ** 3] * nc)

        c = np.empty_like(a)
        for (rows, cols), blk in zip(blocks, machine.sync_up(c_blk)):
            c[rows, cols] = blk
        return c

    def error(self, output, reference):
        return float(np.max(np.abs(np.asarray(output) - np.asarray(reference))))

    def to_table(self, data):
        # inputs stack A and B, the output is the product alone
        data = np.asarray(data, dtype=float)
        if data.ndim not in (2, 3):
            raise ModelDomainError(f"Cannot tabulate matrices of shape {data.shape}")
        index = np.indices(data.shape).reshape(data.ndim, -1).T
        header = ["matrix", "row", "col"][3 - data.ndim :] + ["value"]
        return header, np.column_stack((index, data.ravel()))

    def from_table(self, header, table):
        table = np.asarray(table, dtype=float)
        ndim = len(header) - 1
        index = table[:, :ndim].astype(int)
        data = np.zeros(tuple(index.max(axis=0) + 1))
        data[tuple(index.T)] = table[:, ndim]
        return data


WORKLOADS = {spec.name: spec for spec in (BlackScholes(), FFT(), DenseMatMul())}
"""dict: Registered workloads by name."""


def get_workload(name):
    """Looks up a workload by name (or passes a :class:`WorkloadSpec` through)."""
    if isinstance(name, WorkloadSpec):
        return name
    try:
        return WORKLOADS[name]
    except KeyError:
        raise ModelDomainError(
            f"Unknown workload '{name}', expected one of {sorted(WORKLOADS)}"
        ) from None


def declared_volumes(spec, N, nc):
    """Synchronization and communication elements of ``spec`` on ``nc`` cores."""
    return get_workload(spec).declared_volumes(N, nc)


def save_inputs(spec, data, dest):
    """
    Writes workload inputs or outputs to CSV, one record per line.

    Returns
    -------
    :class:`pathlib.Path`
        The destination path.
    """
    spec = get_workload(spec)
    header, table = spec.to_table(data)
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(dest, table, delimiter=",", header=",".join(header), comments="", fmt="%.17g")
    logger.info(f"Wrote {len(table)} {spec.name} records to {dest.resolve()}")
    return dest


def load_inputs(spec, src):
    """Reads workload data written by :func:`save_inputs`."""
    spec = get_workload(spec)
    with open(src) as f:
        header = f.readline().strip().split(",")
    table = np.loadtxt(src, delimiter=",", skiprows=1, ndmin=2)
    return spec.from_table(header, table)
