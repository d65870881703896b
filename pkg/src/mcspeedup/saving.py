# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Saving datasets, records and figures to file.

Every artifact is written below the output directory set by
:func:`out_dir` (the CWD by default); relative destinations are anchored
there. Datasets are CSV files, records JSON files. Floats are written
with :data:`FLOAT_DIGITS` significant digits, so that the same
experiment always produces byte-identical files.

`Reproducibility` extends to figures: when the CWD is in a `git
<https://git-scm.com/>`_ repository, :func:`save_fig` stores the commit
hash of HEAD in the "Creator" metadata of the saved figure (see
:data:`SUPPORTED_FORMATS`).
"""

import csv
import json
import math
from contextlib import contextmanager
from logging import getLogger
from pathlib import Path
from subprocess import run

import numpy as np

__all__ = ["out_dir", "save_table", "save_curves", "save_json", "save_fig"]

logger = getLogger(__package__)

FLOAT_DIGITS = 10
"""int: Significant digits of written floats."""

SUPPORTED_FORMATS = {"eps", "ps", "svg", "pdf", "png"}
"""set of str: File formats storing the git revision."""

_out_dir = [Path(".")]


def _resolve_path(path=None):
    """
    Resolves an absolute or relative path.

    User constructs are expanded and the current output directory is
    used as anchor.
    """
    return _out_dir[-1] / Path(path or ".").expanduser()


@contextmanager
def out_dir(dest):
    """
    A context manager for temporarily changing the output directory.

    Parameters
    ----------
    dest : str or path-like
        The new output directory. If a relative path, the current output
        directory is taken as anchor.
    """
    _out_dir.append(_resolve_path(dest))
    try:
        yield _out_dir[-1]
    finally:
        _out_dir.pop()


def _prepare(dest, suffix):
    dest = _resolve_path(dest)
    if not dest.suffix:
        dest = dest.with_suffix(suffix)
    dest.parent.mkdir(parents=True, exist_ok=True)
    return dest


def format_value(value):
    """Fixed-precision text of a CSV cell."""
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{FLOAT_DIGITS}g}"
    return str(value)


def save_table(header, rows, dest):
    """
    Writes rows of values to a CSV file.

    Parameters
    ----------
    header : list[str]
        Column names.
    rows : iterable[iterable]
        One sequence of values per line.
    dest : str or path-like
        Destination file; ``.csv`` is appended when there is no suffix.

    Returns
    -------
    :class:`pathlib.Path`
        The destination path.
    """
    dest = _prepare(dest, ".csv")
    with open(dest, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([format_value(v) for v in row] for row in rows)
    logger.info(f"Wrote dataset {dest.stem} to {dest.resolve()}")
    return dest


def save_curves(curves, dest):
    """
    Writes series sharing an abscissa to a CSV file.

    The first column holds the abscissa (named after the series axis),
    followed by the core count when the abscissa is the core size, and
    one column per series label.

    Parameters
    ----------
    curves : list[SpeedupCurve]
        Series sampled at the same abscissae.
    dest : str or path-like

    Returns
    -------
    :class:`pathlib.Path`
        The destination path.
    """
    if not curves:
        raise ValueError("No series to save.")
    first = curves[0]
    for curve in curves[1:]:
        if curve.axis != first.axis or not np.array_equal(curve.x, first.x):
            raise ValueError(f"Series '{curve.label}' is not sampled like '{first.label}'.")
    header = [first.axis]
    columns = [first.x]
    if first.axis == "r":
        header.append("nc")
        columns.append(first.nc)
    header += [curve.label for curve in curves]
    columns += [curve.value for curve in curves]
    return save_table(header, zip(*columns), dest)


def _round(obj):
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"Cannot write non-finite value {obj}.")
        return float(f"{float(obj):.{FLOAT_DIGITS}g}")
    return obj


def dumps(obj):
    """JSON text of a record, floats rounded, keys sorted."""
    return json.dumps(_round(obj), indent=2, sort_keys=True)


def save_json(obj, dest):
    """
    Writes a record to a JSON file.

    Returns
    -------
    :class:`pathlib.Path`
        The destination path.
    """
    dest = _prepare(dest, ".json")
    with open(dest, "w", newline="\n") as f:
        f.write(dumps(obj) + "\n")
    logger.info(f"Wrote record {dest.stem} to {dest.resolve()}")
    return dest


def git_revision():
    """Commit hash of HEAD, or an empty string outside a repository."""
    try:
        result = run(["git", "rev-parse", "HEAD"], capture_output=True, text=True)
    except FileNotFoundError:
        return ""
    return result.stdout.strip()


def save_fig(fig, dest=None, close=True, **savefig_kw):
    """
    Saves a figure and, optionally, closes it.

    If the CWD is in a git repository, attempts to store the commit hash
    of HEAD in the "Creator" metadata of the file.

    Parameters
    ----------
    fig : :class:`~matplotlib.figure.Figure`
        The figure to be saved.
    dest : str or path-like, default the figure label
        The destination file name (path without extension). If a
        relative path, the output directory is taken as anchor. The file
        format can be specified via ``savefig_kw['format']`` and
        defaults to ``rcParams["savefig.format"]``.
    close : bool, default True
        Whether to call :func:`matplotlib.pyplot.close` on the figure
        after saving.
    **savefig_kw :
        Keyword arguments for :meth:`~matplotlib.figure.Figure.savefig`.

    Returns
    -------
    :class:`pathlib.Path`
        The destination path, with extension.
    """
    import matplotlib as mpl

    fmt = savefig_kw.setdefault("format", mpl.rcParams["savefig.format"])
    dest = Path(dest or fig.get_label())
    dest = _resolve_path(dest).with_suffix(f"{dest.suffix}.{fmt}")
    dest.parent.mkdir(parents=True, exist_ok=True)

    git_rev = git_revision()
    if git_rev and fmt in SUPPORTED_FORMATS:
        metadata = savefig_kw.setdefault("metadata", {})
        metadata.setdefault("Creator", git_rev)

    fig.savefig(dest, **savefig_kw)
    logger.info(f"Plotted figure {fig.get_label() or fig.number} to {dest.resolve()}")

    if close:
        import matplotlib.pyplot as plt

        logger.debug(f"Closed figure {fig.get_label() or fig.number}")
        plt.close(fig)

    return dest
