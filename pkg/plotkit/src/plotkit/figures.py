"""Figure analogs regenerated from simulation CSVs.

Five figure ids are supported: ``modes`` (sinusoidal coupling profiles),
``coupling_matrices`` (per-mode heatmaps), ``walk`` (four averaged walk
distributions), ``heat`` (per-element occupation color maps over log time,
one panel per model), and ``shuttle`` (stacked optical-then-mechanical
population traces with drive-on regions shaded).  Rendering is a pure
function of the CSV bytes and the spec: the canvas is fixed, text is
rendered as paths, and no timestamps are embedded, so repeated runs are
byte-identical.
"""

from __future__ import annotations

import glob
import os
from dataclasses import dataclass, field

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from . import csvdata  # noqa: E402
from .csvdata import PlotDataError  # noqa: E402

FIGURE_IDS = ("modes", "coupling_matrices", "walk", "heat", "shuttle")

#: rc settings shared by every figure; part of the determinism contract
_RC = {
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "svg.fonttype": "path",
    "svg.hashsalt": "plotkit",
}

_WALK_VARIANTS = ("none", "phase", "transmissivity", "classical")


@dataclass(frozen=True)
class FigureSpec:
    """What to render: figure id, input directory, output path, and style."""

    figure: str
    input_dir: str
    output: str
    fmt: str = "png"
    log_time: bool = True
    trace_offset: float = 1.1

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise PlotDataError(f"figure must be one of {FIGURE_IDS}, got {self.figure!r}")
        if self.fmt not in ("png", "svg"):
            raise PlotDataError(f"format must be png or svg, got {self.fmt!r}")


@dataclass
class RenderResult:
    """Structural summary of a rendered figure, for tests and tooling."""

    path: str
    figure: str
    panel_count: int
    trace_counts: list[int] = field(default_factory=list)
    shaded_spans: list[tuple[float, float]] = field(default_factory=list)


def _save(fig, spec: FigureSpec) -> str:
    out = spec.output
    if not out.endswith("." + spec.fmt):
        out = f"{out}.{spec.fmt}"
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    metadata = {"Date": None} if spec.fmt == "svg" else None
    fig.savefig(out, format=spec.fmt, metadata=metadata)
    plt.close(fig)
    return out


def _unique_in_order(items):
    seen = []
    for key, value in items:
        if not any(np.array_equal(value, v) for _, v in seen):
            seen.append((key, value))
    return seen


def _render_modes(spec: FigureSpec) -> RenderResult:
    data = csvdata.read_modes(os.path.join(spec.input_dir, "modes.csv"))
    distinct = _unique_in_order(sorted(data.profiles.items()))
    fig, ax = plt.subplots(figsize=(4.2, 2.8))
    markers = ["s", "o", "^", "D", "v", "P", "*"]
    for k, (l, prof) in enumerate(distinct):
        j = np.arange(1, prof.size + 1)
        ax.plot(j, prof, marker=markers[k % len(markers)], ms=4, lw=1.0, label=f"mode {l}")
    ax.axhline(0.0, color="0.8", lw=0.6, zorder=0)
    ax.set_xlabel("element")
    ax.set_ylabel("coupling")
    ax.set_xticks(np.arange(1, len(distinct[0][1]) + 1))
    ax.legend(frameon=False, fontsize=7)
    fig.tight_layout()
    out = _save(fig, spec)
    return RenderResult(path=out, figure="modes", panel_count=1,
                        trace_counts=[len(distinct)])


def _render_coupling_matrices(spec: FigureSpec) -> RenderResult:
    paths = sorted(glob.glob(os.path.join(spec.input_dir, "coupling_matrix_l*.csv")))
    if not paths:
        raise PlotDataError(f"no coupling_matrix_l*.csv in {spec.input_dir}")
    mats = _unique_in_order([(p, csvdata.read_matrix(p)) for p in paths])
    fig, axes = plt.subplots(1, len(mats), figsize=(1.9 * len(mats), 2.1))
    axes = np.atleast_1d(axes)
    vmax = max(np.abs(m).max() for _, m in mats)
    for ax, (path, M) in zip(axes, mats):
        ax.imshow(M, cmap="coolwarm", vmin=-vmax, vmax=vmax,
                  origin="upper", interpolation="nearest")
        label = os.path.basename(path).removeprefix("coupling_matrix_").removesuffix(".csv")
        ax.set_title(label, fontsize=8)
        ax.set_xticks([])
        ax.set_yticks([])
    fig.tight_layout()
    out = _save(fig, spec)
    return RenderResult(path=out, figure="coupling_matrices", panel_count=len(mats),
                        trace_counts=[1] * len(mats))


def _render_walk(spec: FigureSpec) -> RenderResult:
    dists = {v: csvdata.read_distribution(os.path.join(spec.input_dir, f"walk_{v}.csv"))
             for v in _WALK_VARIANTS}
    fig, axes = plt.subplots(2, 2, figsize=(5.4, 3.8), sharex=True)
    for ax, variant in zip(axes.ravel(), _WALK_VARIANTS):
        pops = dists[variant]
        ax.bar(np.arange(1, pops.size + 1), pops, width=0.8, color="#3b6ea5")
        ax.set_title(variant, fontsize=8)
        ax.set_ylim(0, 1.05 * max(p.max() for p in dists.values()))
    for ax in axes[1]:
        ax.set_xlabel("element")
    for ax in axes[:, 0]:
        ax.set_ylabel("population")
    fig.tight_layout()
    out = _save(fig, spec)
    return RenderResult(path=out, figure="walk", panel_count=4,
                        trace_counts=[1, 1, 1, 1])


def _render_heat(spec: FigureSpec) -> RenderResult:
    paths = [os.path.join(spec.input_dir, name)
             for name in ("heat_optical.csv", "heat_nearest_neighbor.csv")
             if os.path.exists(os.path.join(spec.input_dir, name))]
    if not paths:
        raise PlotDataError(f"no heat_*.csv in {spec.input_dir}")
    series = [(p, csvdata.read_heat(p)) for p in paths]
    fig, axes = plt.subplots(len(series), 1, figsize=(4.6, 2.1 * len(series)))
    axes = np.atleast_1d(axes)
    vmin = min(s.occupations.min() for _, s in series)
    vmax = max(s.occupations.max() for _, s in series)
    for ax, (path, s) in zip(axes, series):
        mesh = ax.pcolormesh(s.times, np.arange(1, s.occupations.shape[1] + 1),
                             s.occupations.T, cmap="magma", vmin=vmin, vmax=vmax,
                             shading="nearest")
        if spec.log_time:
            ax.set_xscale("log")
        ax.set_ylabel("element")
        ax.set_title(os.path.basename(path).removesuffix(".csv"), fontsize=8)
        fig.colorbar(mesh, ax=ax, label="occupation")
    axes[-1].set_xlabel("time")
    fig.tight_layout()
    out = _save(fig, spec)
    return RenderResult(path=out, figure="heat", panel_count=len(series),
                        trace_counts=[s.occupations.shape[1] for _, s in series])


def _render_shuttle(spec: FigureSpec) -> RenderResult:
    traj = csvdata.read_shuttle(os.path.join(spec.input_dir, "shuttle_unitary.csv"))
    sched = csvdata.read_schedule(os.path.join(spec.input_dir, "shuttle_schedule.csv"))
    n_opt = traj.optical.shape[1]
    n_mech = traj.mechanical.shape[1]
    fig, ax = plt.subplots(figsize=(5.0, 0.55 * (n_opt + n_mech) + 1.2))
    shaded = []
    for (t0, t1), g_abs in zip(sched.spans, sched.g_abs):
        if np.any(g_abs > 0.0):
            ax.axvspan(t0, t1, color="#f2d8a7", alpha=0.6, lw=0)
            shaded.append((float(t0), float(t1)))
    offset = spec.trace_offset
    level = 0.0
    yticks, ylabels = [], []
    for l in range(n_opt):
        ax.plot(traj.times, traj.optical[:, l] + level, color="#b3432b", lw=1.0)
        yticks.append(level)
        ylabels.append(f"opt {l + 1}")
        level += offset
    for j in range(n_mech):
        ax.plot(traj.times, traj.mechanical[:, j] + level, color="#2b5eb3", lw=1.0)
        yticks.append(level)
        ylabels.append(f"mech {j + 1}")
        level += offset
    ax.set_yticks(yticks)
    ax.set_yticklabels(ylabels, fontsize=7)
    ax.set_xlabel("time")
    ax.set_xlim(traj.times[0], traj.times[-1])
    fig.tight_layout()
    out = _save(fig, spec)
    return RenderResult(path=out, figure="shuttle", panel_count=1,
                        trace_counts=[n_opt + n_mech], shaded_spans=shaded)


_RENDERERS = {
    "modes": _render_modes,
    "coupling_matrices": _render_coupling_matrices,
    "walk": _render_walk,
    "heat": _render_heat,
    "shuttle": _render_shuttle,
}


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure id from its CSVs; returns the structural summary.

    Raises :class:`PlotDataError` before touching the output file when any
    input is missing or malformed.
    """
    with matplotlib.rc_context(_RC):
        return _RENDERERS[spec.figure](spec)
