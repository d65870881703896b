# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Rendering datasets as figures.

Figures are optional: every command writes its CSV datasets first, and
``--plot`` additionally renders them. Panels are laid out one per
parallelizable fraction (or per workload) and labelled via
:func:`enum_axes`; :func:`fig_size` gives figure sizes in units of
``rcParams["figure.figsize"]``.
"""

from collections import defaultdict
from itertools import count
from string import ascii_lowercase

import matplotlib as mpl
import numpy as np

__all__ = ["fig_size", "enum_axes", "plot_panels", "plot_sweep"]

AXIS_LABELS = {
    "r": "core size $r$ [BCE]",
    "f": "parallelizable fraction $f$",
    "q": "synchronization exponent $q$",
}
"""dict: Axis labels by abscissa name."""


def fig_size(width=None, height=None, ratio=0.618):
    """
    Converts ``rcParams["figure.figsize"]`` units to inches.

    Parameters
    ----------
    width : float, default :obj:`height / ratio`
        Figure width as a fraction of its ``rcParams["figure.figsize"]`` value.
    height : float, default :obj:`width * ratio`
        Figure height as a fraction of its ``rcParams["figure.figsize"]`` value.
    ratio : float, default golden ratio ``0.618``
        Height to width ratio, ignored if both size values are given.

    Returns
    -------
    tuple[float]
        Figure width and height, in inches.
    """
    w, h = mpl.rcParams["figure.figsize"]
    if width:
        width *= w
    if height:
        height *= h
    width = width or height / ratio
    height = height or width * ratio
    return width, height


def enum_axes(axs, loc="title", fmt="({})", enum="letters", **kw):
    """
    Labels subfigures (axes).

    Parameters
    ----------
    axs : iterable[matplotlib.axes.Axes]
        Axes to be labelled.
    loc : str, default 'title'
        Label location, 'title' or a valid loc for
        :class:`matplotlib.offsetbox.AnchoredText`.
    fmt : str, default '({})'
        Label format string.
    enum : str or iterable, default 'letters'
        Provides the labels via iteration. Special values:
        ('letters' | 'numbers') for (alphabetic | numeric) enumeration.
    **kw :
        Keyword arguments for the label artist.

    Returns
    -------
    list
        The added labels.
    """
    from matplotlib.offsetbox import AnchoredText

    axs = np.asanyarray(axs)

    if enum == "letters":
        enum = ascii_lowercase
    elif enum == "numbers":
        enum = count(start=1)

    if loc == "title":
        def artist(ax, lbl):
            return ax.set_title(lbl, **kw)
    else:
        kw.setdefault("frameon", False)
        kw.setdefault("borderpad", 0)

        def artist(ax, lbl):
            return ax.add_artist(AnchoredText(lbl, loc, **kw))

    return [artist(ax, fmt.format(e)) for ax, e in zip(axs.flat, enum)]


def _split(label):
    """``'<series>__<panel>'`` into its series and panel parts."""
    series, _, panel = label.partition("__")
    return series, panel


def plot_panels(curves, label, ylabel="speedup", by="panel", logy=False):
    """
    Plots series in panels.

    Parameters
    ----------
    curves : list[SpeedupCurve]
        Series labelled ``<series>__<panel>``.
    label : str
        Figure label (the default file name of :func:`~.saving.save_fig`).
    ylabel : str, default 'speedup'
    by : {"panel", "series", None}, default "panel"
        Which label part selects the panel; the other names the line.
        None draws every series in one panel.
    logy : bool, default False

    Returns
    -------
    :class:`~matplotlib.figure.Figure`
    """
    import matplotlib.pyplot as plt

    groups = defaultdict(list)
    for curve in curves:
        series, panel = _split(curve.label)
        if by is None:
            key, name = "", curve.label
        elif by == "panel":
            key, name = panel, series
        else:
            key, name = series, panel
        groups[key].append((name, curve))

    ncols = min(len(groups), 2)
    nrows = -(-len(groups) // ncols)
    fig, axs = plt.subplots(
        nrows,
        ncols,
        num=label,
        squeeze=False,
        figsize=fig_size(width=0.5 * ncols, ratio=0.75 * nrows / ncols),
        constrained_layout=True,
    )
    for ax, (key, members) in zip(axs.flat, groups.items()):
        for name, curve in members:
            ax.plot(curve.x, curve.value, label=name)
        ax.set_xlabel(AXIS_LABELS.get(curve.axis, curve.axis))
        ax.set_ylabel(ylabel)
        if curve.axis == "r":
            ax.set_xscale("log", base=2)
        if logy:
            ax.set_yscale("log")
        ax.legend(title=key or None, fontsize="small")
    for ax in axs.flat[len(groups):]:
        ax.set_visible(False)
    enum_axes(axs.flat[: len(groups)])
    return fig


def plot_sweep(sweep):
    """
    Plots a simulated sweep: speedup with the model overlay, and the
    measured connectivity intensity.

    Returns
    -------
    :class:`~matplotlib.figure.Figure`
    """
    import matplotlib.pyplot as plt

    fig, (left, right) = plt.subplots(
        1,
        2,
        num=f"sim_{sweep.workload}",
        figsize=fig_size(width=1.0, ratio=0.4),
        constrained_layout=True,
    )
    left.plot(sweep.speedup.x, sweep.speedup.value, "o-", label="simulated")
    left.plot(sweep.overlay.x, sweep.overlay.value, "k-", label="model")
    left.set_ylabel("speedup")
    left.legend(title=sweep.workload)
    right.plot(sweep.f1.x, sweep.f1.value, "o-")
    right.set_ylabel("connectivity intensity $f_1$")
    for ax in (left, right):
        ax.set_xscale("log", base=2)
        ax.set_xlabel(AXIS_LABELS["r"])
    enum_axes([left, right])
    return fig
