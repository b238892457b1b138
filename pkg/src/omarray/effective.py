"""Effective phonon-phonon dynamics after elimination of fast optical modes.

When the optical decay dominates (|g| << omega << kappa) each optical mode
mediates an interaction beta_l * epsilon_l epsilon_l^T between the mechanical
elements.  In the completed mode basis the resulting propagator is diagonal,

    <b(t)> = P^T exp(-i beta t) P <b(0)>,

with the beta vector padded to length N and entries above l0 absorbed into
their symmetric partners.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AdiabaticRegimeWarning, ParameterError
from .modes import CouplingBasis, independent_mode_count
from .params import SystemParams, _readonly


def beta_coefficient(g: complex, delta: float, kappa: float, omega: float = 1.0) -> float:
    """Mediated coupling strength of one optical mode.

        beta = 2|g|^2 delta (delta^2 - omega^2 + kappa^2)
               / [(delta^2 - omega^2 - kappa^2)^2 + (2 delta kappa)^2]

    Emits :class:`AdiabaticRegimeWarning` outside |g| <= 0.3 omega or
    kappa < 3 omega; the closed form stays total for kappa > 0.
    """
    if not kappa > 0:
        raise ParameterError(f"kappa must be > 0, got {kappa}")
    if abs(g) > 0.3 * omega or kappa < 3.0 * omega:
        warnings.warn(
            f"parameters |g|={abs(g):.3g}, kappa={kappa:.3g} are outside the "
            "adiabatic regime |g| << omega << kappa; the coefficient may not "
            "describe the full dynamics",
            AdiabaticRegimeWarning,
            stacklevel=2,
        )
    num = 2.0 * abs(g) ** 2 * delta * (delta**2 - omega**2 + kappa**2)
    den = (delta**2 - omega**2 - kappa**2) ** 2 + (2.0 * delta * kappa) ** 2
    return num / den


@dataclass(frozen=True)
class BetaSpectrum:
    """Mediated coupling strengths, padded to length N with zeros above l0."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ParameterError("beta spectrum must be a vector of length N >= 2")
        l0 = independent_mode_count(v.size)
        if np.any(v[l0:] != 0.0):
            raise ParameterError(f"beta entries above l0={l0} must be exactly zero")
        object.__setattr__(self, "values", _readonly(v))

    @property
    def N(self) -> int:
        return self.values.size


def beta_spectrum(params: SystemParams, basis: CouplingBasis) -> BetaSpectrum:
    """Per-mode beta values with l > l0 entries absorbed into their partners.

    Modes l and N-l share the same coupling profile, so their betas add; for
    even N the l = N/2 mode is its own partner and is used as-is.
    """
    if params.N != basis.N:
        raise ParameterError(f"params N={params.N} does not match basis N={basis.N}")
    N = params.N
    raw = np.array([
        beta_coefficient(params.g[l - 1], params.delta[l - 1], params.kappa, params.omega)
        for l in range(1, N)
    ])
    values = np.zeros(N)
    for l in range(1, basis.l0 + 1):
        values[l - 1] = raw[l - 1]
        partner = N - l
        if partner != l and partner <= N - 1:
            values[l - 1] += raw[partner - 1]
    return BetaSpectrum(values)


def effective_hamiltonian(basis: CouplingBasis, beta: BetaSpectrum) -> np.ndarray:
    """Real symmetric N x N phonon-hopping Hamiltonian P^T diag(beta) P."""
    if beta.N != basis.N:
        raise ParameterError(f"beta length {beta.N} does not match basis N={basis.N}")
    H = basis.P.T @ (beta.values[:, None] * basis.P)
    return 0.5 * (H + H.T)


def propagator(basis: CouplingBasis, beta: BetaSpectrum, t: float) -> np.ndarray:
    """Unitary amplitude propagator P^T diag(exp(-i beta t)) P."""
    if beta.N != basis.N:
        raise ParameterError(f"beta length {beta.N} does not match basis N={basis.N}")
    if not np.isfinite(t):
        raise ParameterError(f"time must be finite, got {t}")
    phases = np.exp(-1j * beta.values * t)
    return basis.P.T @ (phases[:, None] * basis.P.astype(complex))
