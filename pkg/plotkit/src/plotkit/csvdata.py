"""Strict readers for the simulation CSV artifacts.

Each reader checks the header against the declared schema and refuses empty
or malformed tables, so figure rendering never starts from bad input.  No
quantity is ever derived beyond reshaping: every number plotted downstream
exists verbatim in a CSV cell.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np


class PlotDataError(ValueError):
    """Input CSV is missing, malformed, or does not match its schema."""


def _read_table(path: str, expected_header: list[str] | None = None,
                prefix_header: list[str] | None = None):
    if not os.path.exists(path):
        raise PlotDataError(f"input CSV does not exist: {path}")
    with open(path, "r", newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotDataError(f"{path}: file is empty") from None
        rows = list(reader)
    if expected_header is not None and header != expected_header:
        raise PlotDataError(f"{path}: header {header} does not match {expected_header}")
    if prefix_header is not None and header[: len(prefix_header)] != prefix_header:
        raise PlotDataError(f"{path}: header {header} does not start with {prefix_header}")
    if not rows:
        raise PlotDataError(f"{path}: no data rows")
    try:
        data = np.array([[float(x) for x in row] for row in rows])
    except ValueError as exc:
        raise PlotDataError(f"{path}: non-numeric cell ({exc})") from exc
    if data.shape[1] != len(header):
        raise PlotDataError(f"{path}: ragged rows")
    return header, data


@dataclass(frozen=True)
class ModeProfiles:
    """Long-format mode profiles keyed by mode index."""

    profiles: dict  # l -> (N,) array


def read_modes(path: str) -> ModeProfiles:
    _, data = _read_table(path, expected_header=["l", "j", "epsilon"])
    profiles = {}
    for l in sorted(set(int(v) for v in data[:, 0])):
        sub = data[data[:, 0] == l]
        order = np.argsort(sub[:, 1])
        profiles[l] = sub[order, 2]
    sizes = {v.size for v in profiles.values()}
    if len(sizes) != 1:
        raise PlotDataError(f"{path}: modes have inconsistent element counts")
    return ModeProfiles(profiles=profiles)


def read_matrix(path: str) -> np.ndarray:
    _, data = _read_table(path, expected_header=["j", "jprime", "value"])
    n = int(data[:, 0].max())
    if data.shape[0] != n * n or int(data[:, 1].max()) != n:
        raise PlotDataError(f"{path}: not a dense {n} x {n} matrix table")
    M = np.full((n, n), np.nan)
    for j, jp, v in data:
        M[int(j) - 1, int(jp) - 1] = v
    if np.isnan(M).any():
        raise PlotDataError(f"{path}: missing matrix entries")
    return M


def read_distribution(path: str) -> np.ndarray:
    _, data = _read_table(path, expected_header=["element", "population"])
    order = np.argsort(data[:, 0])
    return data[order, 1]


@dataclass(frozen=True)
class HeatSeries:
    times: np.ndarray  # (S,)
    occupations: np.ndarray  # (S, N)


def read_heat(path: str) -> HeatSeries:
    _, data = _read_table(path, expected_header=["time", "element", "occupation"])
    times = np.unique(data[:, 0])
    elements = np.unique(data[:, 1]).astype(int)
    N = elements.size
    if data.shape[0] != times.size * N:
        raise PlotDataError(f"{path}: not a dense time x element table")
    occ = np.empty((times.size, N))
    t_index = {t: i for i, t in enumerate(times)}
    for t, j, v in data:
        occ[t_index[t], int(j) - 1] = v
    return HeatSeries(times=times, occupations=occ)


@dataclass(frozen=True)
class ShuttleTrajectory:
    times: np.ndarray  # (S,)
    optical: np.ndarray  # (S, N-1)
    mechanical: np.ndarray  # (S, N)


def read_shuttle(path: str) -> ShuttleTrajectory:
    header, data = _read_table(path, prefix_header=["time", "segment", "switch_ok"])
    opt_cols = [i for i, h in enumerate(header) if h.startswith("opt_")]
    mech_cols = [i for i, h in enumerate(header) if h.startswith("mech_")]
    if not opt_cols or not mech_cols or len(mech_cols) != len(opt_cols) + 1:
        raise PlotDataError(f"{path}: expected opt_* and mech_* population columns")
    return ShuttleTrajectory(times=data[:, 0], optical=data[:, opt_cols],
                             mechanical=data[:, mech_cols])


@dataclass(frozen=True)
class ScheduleSpans:
    """Segment time spans and per-mode drive magnitudes."""

    spans: np.ndarray  # (K, 2) start/end
    g_abs: np.ndarray  # (K, N-1)


def read_schedule(path: str) -> ScheduleSpans:
    header, data = _read_table(path, prefix_header=["segment", "t_start", "t_end"])
    if not all(h.startswith("g_abs_") for h in header[3:]) or len(header) <= 3:
        raise PlotDataError(f"{path}: expected g_abs_* columns")
    return ScheduleSpans(spans=data[:, 1:3], g_abs=data[:, 3:])
