# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Experiment configuration.

Experiments are described by JSON documents. :func:`load_config`
accepts the same kind of specification as a style sheet list: a preset
name (see :data:`PRESETS`), a dict, a path to a JSON file, or a list of
those, later entries overriding earlier ones block by block.

Keys not in the schema are rejected at every level; when the offending
document is a file, the error carries its line number. Every block is
converted into the types of the module that owns it, so invalid
parameters surface before any computation.

Top-level keys (all optional, defaults in :data:`DEFAULTS`):

``n``
    Chip budget, in BCE.
``topology``
    ``"symmetric"`` or ``"asymmetric"``.
``perf_exponent``
    Core performance exponent.
``models``
    Subset of ``ours``, ``hill-marty``, ``cassidy``,
    ``eyerman-eeckhout``, ``gunther``.
``f``
    List of parallelizable fractions, or ``{"min", "max", "num"}``.
``r``
    List of core sizes, or ``{"min", "max", "num", "spacing"}`` with
    spacing ``"log"`` or ``"linear"``; ``max`` defaults to ``n``.
``conn``, ``sync``
    Intensity power laws ``{"coeff", "exponent"}`` of our model.
``cassidy``, ``gunther``, ``eyerman_eeckhout``
    Baseline parameters ``{"fp", "fc", "g0", "beta", "k", "d1", "d2"}``,
    ``{"alpha", "beta"}`` and ``{"cs_share", "p_cnt", "p_cs"}``.
``optimal``
    ``{"sweep", "f", "q", "sync_coeff", "presets", "grid_size", "rtol",
    "workers"}``, with ``sweep`` either ``"sync"`` or ``"f"`` and
    presets ``[{"label", "conn", "sync"}]``.
``simulate``
    ``{"workloads", "N", "n", "transfer_cost", "hop_cost", "seed",
    "trace"}``.
"""

import copy
import json
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from logging import getLogger
from pathlib import Path

import numpy as np

from .baselines import CassidyParams, EEParams, GuntherParams
from .modeling import ZERO, ChipBudget, ModelDomainError, PerformanceLaw, PowerLaw, Topology
from .optimizing import GRID_SIZE, MODELS, RTOL, SYMMETRIC_ONLY, IntensityPreset, ModelSuite
from .workloads import SEED, WORKLOADS, get_workload

__all__ = [
    "ConfigError",
    "PRESETS",
    "DEFAULTS",
    "ExperimentConfig",
    "OptimalConfig",
    "SimulateConfig",
    "load_config",
]

logger = getLogger(__package__)


class ConfigError(ValueError):
    """
    An invalid experiment configuration.

    Parameters
    ----------
    message : str
    source : str, optional
        Name of the offending document.
    line : int, optional
        Line of the offending key in ``source``.
    """

    def __init__(self, message, source=None, line=None):
        super().__init__(message)
        self.message = message
        self.source = source
        self.line = line

    def __str__(self):
        if self.source is None:
            return self.message
        if self.line is None:
            return f"{self.source}: {self.message}"
        return f"{self.source}:{self.line}: {self.message}"


_LAW = {"coeff": None, "exponent": None}
_RANGE = {"min": None, "max": None, "num": None, "spacing": None}

SCHEMA = {
    "n": None,
    "topology": None,
    "perf_exponent": None,
    "models": None,
    "f": _RANGE,
    "r": _RANGE,
    "conn": _LAW,
    "sync": _LAW,
    "cassidy": dict.fromkeys(("fp", "fc", "g0", "beta", "k", "d1", "d2")),
    "gunther": {"alpha": None, "beta": None},
    "eyerman_eeckhout": {"cs_share": None, "p_cnt": None, "p_cs": None},
    "optimal": {
        "sweep": None,
        "f": _RANGE,
        "q": _RANGE,
        "sync_coeff": None,
        "presets": [{"label": None, "conn": _LAW, "sync": _LAW}],
        "grid_size": None,
        "rtol": None,
        "workers": None,
    },
    "simulate": dict.fromkeys(
        ("workloads", "N", "n", "transfer_cost", "hop_cost", "seed", "trace")
    ),
}
"""dict: Accepted keys; nested dicts describe blocks, one-item lists lists of blocks."""

DEFAULTS = {
    "n": 256,
    "topology": "symmetric",
    "perf_exponent": 0.5,
    "models": ["ours", "hill-marty"],
    "f": [0.5, 0.95, 0.99, 0.999],
    "r": {"min": 1, "max": None, "num": 65, "spacing": "log"},
    "conn": {"coeff": 0.0, "exponent": 0.0},
    "sync": {"coeff": 0.0, "exponent": 0.0},
    "cassidy": {"fp": 0.66, "fc": 0.34},
    "gunther": {"alpha": 0.001, "beta": 0.001},
    "eyerman_eeckhout": {"cs_share": 0.1, "p_cnt": 0.1, "p_cs": 0.1},
    "optimal": {
        "sweep": "sync",
        "f": None,
        "q": {"min": -2.0, "max": 1.0, "num": 31},
        "sync_coeff": 0.01,
        "presets": [],
        "grid_size": GRID_SIZE,
        "rtol": RTOL,
        "workers": None,
    },
    "simulate": {
        "workloads": sorted(WORKLOADS),
        "N": 256,
        "n": None,
        "transfer_cost": 1,
        "hop_cost": 1,
        "seed": SEED,
        "trace": False,
    },
}
"""dict: Configuration every experiment starts from."""

_COMPARISON = {
    "n": 256,
    "f": [0.5, 0.95, 0.99, 0.999],
    "r": {"min": 1, "max": 256, "num": 65, "spacing": "log"},
    "conn": {"coeff": 0.001, "exponent": 0.5},
    "sync": {"coeff": 0.01, "exponent": 0.0},
}


def _family(kind, exponents):
    other = "sync" if kind == "conn" else "conn"
    fixed = {"coeff": 0.01, "exponent": 0.0} if kind == "conn" else {"coeff": 0.0}
    name = "f1" if kind == "conn" else "f2"
    return [
        {
            "label": f"{name}=0.001*nc^{e:g}",
            kind: {"coeff": 0.001, "exponent": e},
            other: fixed,
        }
        for e in exponents
    ]


# intensities the simulator measures on N = 256; the FFT connectivity
# law passes through its values on 16 and 256 cores
_WORKLOAD = {
    "n": 256,
    "topology": "symmetric",
    "models": ["ours", "hill-marty"],
    "f": [0.99, 0.999, 1.0],
}

PRESETS = {
    "fig6": dict(
        _COMPARISON,
        topology="symmetric",
        models=list(MODELS),
    ),
    "fig7": dict(
        _COMPARISON,
        topology="asymmetric",
        models=["ours", "hill-marty", "eyerman-eeckhout"],
    ),
    "fig8": {"simulate": {"workloads": ["black-scholes", "fft", "dmm"], "N": 256}},
    "fig9": {"simulate": {"workloads": ["black-scholes", "fft", "dmm"], "N": 256}},
    "fig10": {
        "n": 256,
        "topology": "symmetric",
        "f": [0.5, 0.9, 0.99, 0.999],
        "optimal": {"sweep": "sync", "sync_coeff": 0.01, "q": {"min": -2, "max": 1, "num": 61}},
    },
    "fig11": {
        "n": 256,
        "topology": "asymmetric",
        "f": [0.5, 0.9, 0.99, 0.999],
        "optimal": {"sweep": "sync", "sync_coeff": 0.01, "q": {"min": -2, "max": 1, "num": 61}},
    },
    "fig12": {
        "n": 256,
        "topology": "symmetric",
        "optimal": {
            "sweep": "f",
            "f": {"min": 0.5, "max": 0.999, "num": 100},
            "presets": _family("conn", (0.5, 0.75, 1.0)),
        },
    },
    "fig13": {
        "n": 256,
        "topology": "symmetric",
        "optimal": {
            "sweep": "f",
            "f": {"min": 0.5, "max": 0.999, "num": 100},
            "presets": _family("sync", (0.5, 0.75, 1.0)),
        },
    },
    "black-scholes": dict(_WORKLOAD, sync={"coeff": 1 / 70}),
    "fft": dict(_WORKLOAD, conn={"coeff": 0.05, "exponent": 0.25}, sync={"coeff": 0.05}),
    "dmm": dict(_WORKLOAD, conn={"coeff": 0.0625, "exponent": 0.5}, sync={"coeff": 0.09375}),
}
"""dict: Built-in experiments, one per reproduced figure or workload."""

PRESET_DESCRIPTIONS = {
    "fig6": "speedup of the symmetric multicore versus core size, five models",
    "fig7": "speedup of the asymmetric multicore versus sequential core size",
    "fig8": "simulated speedup versus core size, with the model overlay",
    "fig9": "simulated connectivity intensity versus core size",
    "fig10": "maximum symmetric speedup versus synchronization exponent",
    "fig11": "maximum asymmetric speedup versus synchronization exponent",
    "fig12": "optimal symmetric core size versus f, connectivity families",
    "fig13": "optimal symmetric core size versus f, synchronization families",
    "black-scholes": "model speedup of Black-Scholes pricing, which never communicates",
    "fft": "model speedup of the radix-2 FFT",
    "dmm": "model speedup of dense matrix multiplication",
}
"""dict: One-line description of each preset."""


def _line(text, key, pos=0):
    """Line and offset of the first ``"key":`` at or after ``pos``."""
    if text is None:
        return None, pos
    match = re.compile(rf'"{re.escape(key)}"\s*:').search(text, pos)
    if match is None:
        return None, pos
    return text.count("\n", 0, match.start()) + 1, match.end()


def _check_keys(block, schema, source, text, prefix="", pos=0, lines=None):
    """
    Rejects unknown keys; returns the offset after the last key seen.

    Keys are located in document order, so a nested key never stands in
    for a later top-level one. The line of each key of ``block`` is
    stored in ``lines`` when given.
    """
    end = pos
    for key, value in block.items():
        line, key_end = _line(text, key, end)
        if lines is not None:
            lines[key] = line
        if key not in schema:
            raise ConfigError(f"unknown key '{prefix}{key}'", source, line)
        end = max(end, key_end)
        sub = schema[key]
        if isinstance(sub, dict) and isinstance(value, dict):
            end = _check_keys(value, sub, source, text, f"{prefix}{key}.", end)
        elif isinstance(sub, list) and isinstance(value, list):
            for item in value:
                if not isinstance(item, dict):
                    raise ConfigError(f"'{prefix}{key}' must list objects", source, line)
                end = _check_keys(item, sub[0], source, text, f"{prefix}{key}[].", end)
        elif sub is not None and value is not None and not isinstance(value, (dict, list)):
            # ranges also accept a bare list, laws never a scalar
            if sub is _LAW or not isinstance(value, (int, float)):
                raise ConfigError(f"'{prefix}{key}' must be an object", source, line)
    return end


def _merge(base, update):
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _read(spec):
    """Returns ``(document, source name, text)`` of one specification entry."""
    if isinstance(spec, dict):
        return spec, "<dict>", None
    if isinstance(spec, str) and spec in PRESETS:
        return PRESETS[spec], f"<preset {spec}>", None
    path = Path(spec).expanduser()
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror}", str(spec)) from None
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, str(spec), e.lineno) from None
    if not isinstance(document, dict):
        raise ConfigError("config must be a JSON object", str(spec), 1)
    return document, str(spec), text


@contextmanager
def _block(origins, key):
    """Reports conversion errors at the line that set ``key``."""
    try:
        yield
    except ConfigError:
        raise
    except (ModelDomainError, TypeError, ValueError, KeyError) as e:
        source, line = origins.get(key, (None, None))
        message = str(e) if not isinstance(e, KeyError) else f"missing {e}"
        raise ConfigError(f"{key}: {message}", source, line) from None


def _values(spec, spacing="linear"):
    if isinstance(spec, (int, float)):
        return np.array([float(spec)])
    if isinstance(spec, list):
        if not spec:
            raise ModelDomainError("empty list")
        return np.array(spec, dtype=float)
    num = int(spec["num"])
    if num < 1:
        raise ModelDomainError(f"num must be positive, got {num}")
    spacing = spec.get("spacing") or spacing
    if spacing == "log":
        return np.geomspace(spec["min"], spec["max"], num)
    if spacing == "linear":
        return np.linspace(spec["min"], spec["max"], num)
    raise ModelDomainError(f"unknown spacing '{spacing}', expected 'log' or 'linear'")


def _increasing(values, name):
    if np.any(np.diff(values) <= 0):
        raise ModelDomainError(f"{name} values must be strictly increasing")
    return values


def _law(spec):
    if spec is None:
        return ZERO
    return PowerLaw(float(spec.get("coeff", 0.0)), float(spec.get("exponent", 0.0)))


@dataclass(frozen=True)
class OptimalConfig:
    """Settings of the ``optimal`` command."""

    sweep: str
    fs: np.ndarray
    qs: np.ndarray
    sync_coeff: float
    presets: tuple
    grid_size: int
    rtol: float
    workers: int = None


@dataclass(frozen=True)
class SimulateConfig:
    """Settings of the ``simulate`` command."""

    workloads: tuple
    N: int
    n: int
    transfer_cost: int
    hop_cost: int
    seed: int
    trace: bool


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A validated experiment.

    Attributes
    ----------
    n : float
        Chip budget, in BCE.
    topology : Topology
    law : PerformanceLaw
    models : tuple[str]
    fs : numpy.ndarray
        Parallelizable fractions.
    rs : numpy.ndarray
        Core sizes, strictly increasing.
    suite : ModelSuite
        Intensities and baseline parameters.
    optimal : OptimalConfig
    simulate : SimulateConfig
    sources : tuple[str]
        Documents the experiment was merged from.
    """

    n: float
    topology: Topology
    law: PerformanceLaw
    models: tuple
    fs: np.ndarray
    rs: np.ndarray
    suite: ModelSuite
    optimal: OptimalConfig
    simulate: SimulateConfig
    sources: tuple = field(default=(), compare=False)

    @classmethod
    def from_dict(cls, config, origins=None, sources=()):
        """Converts a merged configuration, see :func:`load_config`."""
        origins = origins or {}

        with _block(origins, "n"):
            n = float(config["n"])
            ChipBudget(n, 1)
        with _block(origins, "topology"):
            topology = Topology(config["topology"])
        with _block(origins, "perf_exponent"):
            law = PerformanceLaw(float(config["perf_exponent"]))
        with _block(origins, "models"):
            models = tuple(config["models"])
            for name in models:
                if name not in MODELS:
                    raise ModelDomainError(f"unknown model '{name}', expected one of {MODELS}")
                if name in SYMMETRIC_ONLY and topology is Topology.ASYMMETRIC:
                    raise ModelDomainError(f"model '{name}' has no asymmetric form")
        with _block(origins, "f"):
            fs = _values(config["f"])
            for f in fs:
                if not 0 <= f <= 1:
                    raise ModelDomainError(f"f must lie in [0, 1], got {f:g}")
        with _block(origins, "r"):
            spec = config["r"]
            if isinstance(spec, dict):
                spec = dict(spec, max=spec.get("max") or n)
            rs = _increasing(_values(spec, "log"), "r")
            ChipBudget(n, rs)
        with _block(origins, "conn"):
            conn = _law(config["conn"])
        with _block(origins, "sync"):
            sync = _law(config["sync"])
        with _block(origins, "cassidy"):
            cassidy = CassidyParams(**config["cassidy"])
        with _block(origins, "gunther"):
            gunther = config["gunther"]
            gunther = GuntherParams(gunther.get("alpha", 0.0), gunther.get("beta", 0.0))
        with _block(origins, "eyerman_eeckhout"):
            ee = config["eyerman_eeckhout"]
            EEParams.from_fraction(0.5, **ee)
        suite = ModelSuite(
            conn, sync, law, cassidy, gunther, ee["cs_share"], ee["p_cnt"], ee["p_cs"]
        )

        with _block(origins, "optimal"):
            block = config["optimal"]
            if block["sweep"] not in ("sync", "f"):
                raise ModelDomainError(f"sweep must be 'sync' or 'f', got '{block['sweep']}'")
            ofs = fs if block.get("f") is None else _values(block["f"])
            if block["sweep"] == "f":
                _increasing(ofs, "f")
            presets = tuple(
                IntensityPreset(
                    p.get("label") or f"f1={_law(p.get('conn'))};f2={_law(p.get('sync'))}",
                    _law(p.get("conn")),
                    _law(p.get("sync")),
                )
                for p in block["presets"]
            )
            workers = block.get("workers")
            if workers is not None and (type(workers) is not int or workers < 1):
                raise ModelDomainError(f"workers must be a positive integer, got {workers!r}")
            optimal = OptimalConfig(
                block["sweep"],
                ofs,
                _increasing(_values(block["q"]), "q"),
                float(block["sync_coeff"]),
                presets,
                int(block["grid_size"]),
                float(block["rtol"]),
                workers,
            )
            if optimal.grid_size < GRID_SIZE or not optimal.rtol > 0:
                raise ModelDomainError(
                    f"grid_size must be at least {GRID_SIZE} and rtol positive"
                )

        with _block(origins, "simulate"):
            block = config["simulate"]
            workloads = tuple(get_workload(name).name for name in block["workloads"])
            N = int(block["N"])
            for name in workloads:
                get_workload(name).check_size(N)
            simulate = SimulateConfig(
                workloads,
                N,
                int(block.get("n") or N),
                int(block["transfer_cost"]),
                int(block["hop_cost"]),
                int(block["seed"]),
                bool(block["trace"]),
            )

        return cls(n, topology, law, models, fs, rs, suite, optimal, simulate, tuple(sources))


def load_config(spec=()):
    """
    Loads and validates an experiment configuration.

    Parameters
    ----------
    spec : str, dict, path-like or list
        A preset name, a configuration dict, the path of a JSON file, or
        a list of those applied in order over :data:`DEFAULTS`.

    Returns
    -------
    ExperimentConfig

    Raises
    ------
    ConfigError
        Naming the document, and line when known, of the first problem.
    """
    if isinstance(spec, (str, dict, Path)):
        spec = [spec]
    merged = copy.deepcopy(DEFAULTS)
    origins, sources = {}, []
    for entry in spec:
        document, source, text = _read(entry)
        lines = {}
        _check_keys(document, SCHEMA, source, text, lines=lines)
        for key in document:
            origins[key] = (source, lines[key])
        merged = _merge(merged, document)
        sources.append(source)
        logger.debug(f"Merged configuration {source}")
    return ExperimentConfig.from_dict(merged, origins, sources)
