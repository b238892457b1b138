"""Collective mode structure of a periodic array.

The optomechanical coupling of optical mode ``l`` across the N mechanical
elements follows the unit-norm sinusoidal profile

    epsilon_{l,j}  ~  sin(2*pi*l*(j - 1/2) / N),      j = 1..N,

which is symmetric under l -> N-l, so only l0 = ceil((N-1)/2) of the N-1
profiles are linearly independent.  Completing these rows to an orthonormal
basis yields the similarity matrix P used by the bad-cavity propagator.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import ContractError, ParameterError
from .params import SystemParams, _readonly

#: residual norm below which a completion candidate is considered dependent
RANK_TOL = 1e-8


def independent_mode_count(N: int) -> int:
    """Number of linearly independent coupling profiles, ceil((N-1)/2)."""
    return ceil((N - 1) / 2)


def coupling_vector(N: int, l: int) -> np.ndarray:
    """Unit-norm coupling profile of optical mode ``l`` (1 <= l <= N-1).

    The global sign is fixed by making the first nonzero entry positive.
    """
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N}")
    if not isinstance(l, (int, np.integer)) or not 1 <= l <= N - 1:
        raise ParameterError(f"mode index l must satisfy 1 <= l <= N-1, got {l}")
    if l > N - l:
        # profiles l and N-l are identical; mirror so the equality is exact
        l = N - l
    j = np.arange(1, N + 1)
    v = np.sin(2.0 * np.pi * l * (j - 0.5) / N)
    v /= np.linalg.norm(v)
    first = np.flatnonzero(np.abs(v) > 1e-12)[0]
    if v[first] < 0:
        v = -v
    return v


def coupling_matrix(epsilon_l: np.ndarray) -> np.ndarray:
    """Rank-1 projector ``epsilon_l epsilon_l^T`` describing mode-l flow."""
    v = np.asarray(epsilon_l, dtype=float)
    if v.ndim != 1:
        raise ParameterError("coupling vector must be one-dimensional")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ContractError(f"coupling vector must have unit norm, got {np.linalg.norm(v)!r}")
    return np.outer(v, v)


@dataclass(frozen=True)
class CouplingBasis:
    """Coupling profiles and their completion to an orthonormal basis.

    ``epsilon`` holds all N-1 profiles as rows; the first ``l0`` rows of the
    orthogonal matrix ``P`` equal ``epsilon[0:l0]`` and the remaining rows are
    a deterministic delocalized completion.
    """

    N: int
    epsilon: np.ndarray  # (N-1, N)
    l0: int
    P: np.ndarray  # (N, N)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _readonly(np.asarray(self.epsilon, dtype=float)))
        object.__setattr__(self, "P", _readonly(np.asarray(self.P, dtype=float)))


def build_basis(N: int) -> CouplingBasis:
    """Construct the coupling profiles and the completed similarity matrix.

    Completion rows are obtained by Gram-Schmidt over the cosine family
    ``cos(2*pi*m*(j - 1/2)/N)`` for m = 0, 1, 2, ... in index order, skipping
    candidates whose residual norm falls below ``RANK_TOL``.  The cosine
    family is the natural orthogonal complement of the sinusoidal profiles;
    unlike standard basis vectors it is delocalized, which keeps
    phase-randomized walk averages free of spurious structure tied to the
    completion.  Each completed row has its first nonzero entry positive.
    """
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N}")
    l0 = independent_mode_count(N)
    epsilon = np.array([coupling_vector(N, l) for l in range(1, N)])
    rows = [epsilon[l - 1] for l in range(1, l0 + 1)]
    j = np.arange(1, N + 1)
    m = 0
    while len(rows) < N:
        if m > N:
            raise ContractError("basis completion failed; candidate family exhausted")
        cand = np.cos(2.0 * np.pi * m * (j - 0.5) / N)
        m += 1
        for r in rows:
            cand = cand - (r @ cand) * r
        nrm = np.linalg.norm(cand)
        if nrm < RANK_TOL:
            continue
        cand = cand / nrm
        first = np.flatnonzero(np.abs(cand) > 1e-12)[0]
        if cand[first] < 0:
            cand = -cand
        rows.append(cand)
    P = np.array(rows)
    if np.max(np.abs(P @ P.T - np.eye(N))) > 1e-12:
        raise ContractError("completed basis is not orthonormal to 1e-12")
    return CouplingBasis(N=int(N), epsilon=epsilon, l0=l0, P=P)


@dataclass(frozen=True)
class LambdaMatrix:
    """Coupling matrix ``i * conj(g_l) * epsilon_{l,j}`` ((N-1) x N)."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _readonly(np.asarray(self.entries, dtype=complex)))

    @property
    def N(self) -> int:
        return self.entries.shape[1]


def lambda_from_g(g, basis: CouplingBasis) -> LambdaMatrix:
    """Build the excitation-exchange matrix from a raw amplitude vector."""
    g = np.asarray(g, dtype=complex)
    if g.shape != (basis.N - 1,):
        raise ParameterError(f"g must have length N-1={basis.N - 1}, got {g.shape}")
    return LambdaMatrix(1j * np.conj(g)[:, None] * basis.epsilon)


def lambda_matrix(params: SystemParams, basis: CouplingBasis) -> LambdaMatrix:
    """Excitation-exchange matrix for the configured drive amplitudes."""
    if params.N != basis.N:
        raise ParameterError(f"params N={params.N} does not match basis N={basis.N}")
    return lambda_from_g(params.g, basis)
