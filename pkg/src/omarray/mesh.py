"""Triangular mesh decomposition of unitaries into two-mode elements.

Any N x N unitary factors into N(N-1)/2 beamsplitters acting on adjacent
modes followed by one phase shifter per mode (Reck-style triangular scheme).
A :class:`BeamSplitter` with mixing angle ``theta`` and relative phase
``phi`` on modes (i, i+1) acts as the 2 x 2 block

    [[exp(i phi) cos(theta), -exp(i phi) sin(theta)],
     [sin(theta),             cos(theta)]],

i.e. a real rotation followed by a phase on the upper output arm; a real
rotation is a single beamsplitter with ``phi = 0``.  ``reck_compose``
multiplies element matrices in list order (``elements[0]`` is the leftmost
factor, hence the last applied to an input vector).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ContractError, ParameterError

_ZERO_TOL = 1e-14


@dataclass(frozen=True)
class BeamSplitter:
    """Adjacent-mode mixer: modes (i, j=i+1), angle ``theta``, phase ``phi``."""

    i: int
    j: int
    theta: float
    phi: float

    def __post_init__(self):
        if self.j != self.i + 1 or self.i < 0:
            raise ParameterError(f"beamsplitter modes must be adjacent, got ({self.i}, {self.j})")

    def block(self) -> np.ndarray:
        c, s = np.cos(self.theta), np.sin(self.theta)
        ph = np.exp(1j * self.phi)
        return np.array([[ph * c, -ph * s], [s, c]])


@dataclass(frozen=True)
class PhaseShifter:
    """Single-mode phase ``exp(i phase)`` on mode ``i``."""

    i: int
    phase: float

    def __post_init__(self):
        if self.i < 0:
            raise ParameterError(f"mode index must be >= 0, got {self.i}")


MeshElement = Union[BeamSplitter, PhaseShifter]


@dataclass
class MeshNetwork:
    """Ordered beamsplitters and phase shifters representing a unitary."""

    size: int
    elements: list[MeshElement] = field(default_factory=list)

    def beamsplitters(self) -> list[BeamSplitter]:
        return [e for e in self.elements if isinstance(e, BeamSplitter)]

    def phase_shifters(self) -> list[PhaseShifter]:
        return [e for e in self.elements if isinstance(e, PhaseShifter)]

    def with_thetas(self, thetas) -> "MeshNetwork":
        """Copy of the mesh with beamsplitter angles replaced in order."""
        thetas = np.asarray(thetas, dtype=float)
        if thetas.shape != (len(self.beamsplitters()),):
            raise ParameterError("theta vector length must match beamsplitter count")
        out, k = [], 0
        for e in self.elements:
            if isinstance(e, BeamSplitter):
                out.append(BeamSplitter(e.i, e.j, float(thetas[k]), e.phi))
                k += 1
            else:
                out.append(e)
        return MeshNetwork(self.size, out)


def reck_decompose(U: np.ndarray, tol: float = 1e-8) -> MeshNetwork:
    """Factor a unitary into a triangular mesh.

    The lower triangle is nulled column by column (bottom row upward) by
    inverse beamsplitter blocks applied from the left; the residue is a
    diagonal of unit-modulus phases emitted as trailing phase shifters.  The
    identity yields the canonical all-zero mesh, and the output always
    contains exactly N(N-1)/2 beamsplitters followed by N phase shifters.

    Raises :class:`ContractError` when ``max|U^dag U - I| >= tol``.
    """
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ParameterError(f"input must be a square matrix, got shape {U.shape}")
    n = U.shape[0]
    defect = np.max(np.abs(U.conj().T @ U - np.eye(n)))
    if defect >= tol:
        raise ContractError(f"input is not unitary: max|U^dag U - I| = {defect:.3e} >= {tol:g}")
    W = U.copy()
    elements: list[MeshElement] = []
    for m in range(n - 1):
        for row in range(n - 1, m, -1):
            i = row - 1
            a, b = W[i, m], W[row, m]
            if abs(b) <= _ZERO_TOL:
                theta, phi = 0.0, 0.0
            else:
                theta = np.arctan2(abs(b), abs(a))
                phi = float(np.angle(a) - np.angle(b)) if abs(a) > _ZERO_TOL else 0.0
                phi = float(np.mod(phi + np.pi, 2.0 * np.pi) - np.pi)  # wrap to [-pi, pi)
            elements.append(BeamSplitter(i, row, float(theta), phi))
            c, s = np.cos(theta), np.sin(theta)
            em = np.exp(-1j * phi)
            inv = np.array([[c * em, s], [-s * em, c]])
            W[[i, row], :] = inv @ W[[i, row], :]
    for i in range(n):
        phase = float(np.angle(W[i, i]))
        if abs(phase) < _ZERO_TOL:
            phase = 0.0
        elements.append(PhaseShifter(i, phase))
    return MeshNetwork(n, elements)


def reck_compose(mesh: MeshNetwork) -> np.ndarray:
    """Multiply the element matrices in list order."""
    n = mesh.size
    U = np.eye(n, dtype=complex)
    for e in mesh.elements:
        if isinstance(e, BeamSplitter):
            if e.j >= n:
                raise ParameterError(f"element modes ({e.i}, {e.j}) exceed mesh size {n}")
            U[:, [e.i, e.j]] = U[:, [e.i, e.j]] @ e.block()
        elif isinstance(e, PhaseShifter):
            if e.i >= n:
                raise ParameterError(f"element mode {e.i} exceeds mesh size {n}")
            U[:, e.i] *= np.exp(1j * e.phase)
        else:
            raise ParameterError(f"unknown mesh element {e!r}")
    return U
