"""Validated physical configuration of the array.

All quantities are expressed in units of the mechanical frequency, which is
therefore fixed to 1.  The sign convention for the optical detunings puts the
cooling (beam-splitter) sideband at ``delta = -1``: the effective optical
oscillation frequency entering the quadratic model is ``-delta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of an N-element array with N-1 driven optical modes.

    Parameters
    ----------
    N:
        Number of mechanical elements (>= 2).
    gamma:
        Mechanical amplitude decay rate (>= 0).  Occupations relax at 2*gamma.
    kappa:
        Optical amplitude decay rate per mode (> 0).
    delta:
        N-1 optical detunings; ``-1`` is the red (cooling) sideband.
    g:
        N-1 complex drive-enhanced coupling amplitudes (mean optical field
        already absorbed).
    nbar:
        N mechanical bath mean occupations (>= 0).
    omega:
        Mechanical frequency; fixed to 1 (the unit of frequency).
    """

    N: int
    gamma: float
    kappa: float
    delta: np.ndarray
    g: np.ndarray
    nbar: np.ndarray
    omega: float = field(default=1.0)

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise ParameterError(f"N must be an integer >= 2, got {self.N}")
        if self.omega != 1.0:
            raise ParameterError("omega is the unit of frequency and must be 1")
        if not self.gamma >= 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if not self.kappa > 0:
            raise ParameterError(f"kappa must be > 0, got {self.kappa}")
        delta = np.asarray(self.delta, dtype=float)
        g = np.asarray(self.g, dtype=complex)
        nbar = np.asarray(self.nbar, dtype=float)
        if delta.shape != (self.N - 1,):
            raise ParameterError(f"delta must have length N-1={self.N - 1}")
        if g.shape != (self.N - 1,):
            raise ParameterError(f"g must have length N-1={self.N - 1}")
        if nbar.shape != (self.N,):
            raise ParameterError(f"nbar must have length N={self.N}")
        if np.any(nbar < 0):
            raise ParameterError("bath occupations must be >= 0")
        if not (np.all(np.isfinite(delta)) and np.all(np.isfinite(g)) and np.all(np.isfinite(nbar))):
            raise ParameterError("parameters must be finite")
        object.__setattr__(self, "delta", _readonly(delta))
        object.__setattr__(self, "g", _readonly(g))
        object.__setattr__(self, "nbar", _readonly(nbar))

    def with_g(self, g) -> "SystemParams":
        """Copy with a different coupling-amplitude vector."""
        return SystemParams(N=self.N, gamma=self.gamma, kappa=self.kappa,
                            delta=np.asarray(self.delta), g=g, nbar=np.asarray(self.nbar))

    def with_nbar(self, nbar) -> "SystemParams":
        """Copy with different bath occupations."""
        return SystemParams(N=self.N, gamma=self.gamma, kappa=self.kappa,
                            delta=np.asarray(self.delta), g=np.asarray(self.g), nbar=nbar)
