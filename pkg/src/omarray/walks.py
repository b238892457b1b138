"""Seeded Monte-Carlo phonon walks through the mediated-coupling network.

One walk step applies the bad-cavity propagator P^T diag(e^{-i beta t}) P to
a unit coherent amplitude injected at one element.  Randomness enters in two
ways: ``phase`` adds i.i.d. Gaussian offsets to each of the N diagonal
phases, while ``transmissivity`` adds i.i.d. Gaussian offsets to every
beamsplitter angle in the triangular mesh of P (the perturbed P is composed
once per realization and used together with its own transpose, so the step
stays unitary).  Averages are bit-reproducible for a fixed master seed:
realization k draws from the counter-derived stream ``stream_rng(seed, k)``
and reductions run in a fixed order regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .effective import BetaSpectrum
from .errors import IntegrationError, ParameterError
from .mesh import reck_decompose
from .modes import CouplingBasis
from .params import _readonly
from .seeding import stream_rng

_RANDOMIZATIONS = ("none", "phase", "transmissivity")
_CHUNK = 1024
_SUM_TOL = 1e-9


@dataclass(frozen=True)
class WalkConfig:
    """Parameters of one walk experiment (element indices are 1-based)."""

    N: int
    source: int
    active_mode: int
    time: float
    randomization: str = "none"
    sigma: float = 0.0
    realizations: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.N < 2:
            raise ParameterError(f"N must be >= 2, got {self.N}")
        if not 1 <= self.source <= self.N:
            raise ParameterError(f"source must be in 1..{self.N}, got {self.source}")
        if not 1 <= self.active_mode <= self.N - 1:
            raise ParameterError(f"active_mode must be in 1..{self.N - 1}, got {self.active_mode}")
        if self.randomization not in _RANDOMIZATIONS:
            raise ParameterError(f"randomization must be one of {_RANDOMIZATIONS}, got {self.randomization!r}")
        if self.sigma < 0:
            raise ParameterError(f"sigma must be >= 0, got {self.sigma}")
        if self.realizations < 1:
            raise ParameterError(f"realizations must be >= 1, got {self.realizations}")
        if not np.isfinite(self.time):
            raise ParameterError(f"time must be finite, got {self.time}")


@dataclass(frozen=True)
class WalkResult:
    """Averaged population distribution plus the per-realization store."""

    mean: np.ndarray  # (N,)
    realizations: np.ndarray  # (R, N)

    def __post_init__(self):
        object.__setattr__(self, "mean", _readonly(np.asarray(self.mean, dtype=float)))
        object.__setattr__(self, "realizations", _readonly(np.asarray(self.realizations, dtype=float)))


def _phase_vector(config: WalkConfig, beta: BetaSpectrum) -> np.ndarray:
    """Accumulated diagonal phases beta_l * t for the configured time.

    ``config.time`` is measured in units of 1/beta_{active}; the absolute
    time is time/beta_active, so the active mode always accrues exactly
    ``config.time`` radians.
    """
    if beta.N != config.N:
        raise ParameterError(f"beta length {beta.N} does not match config N={config.N}")
    b_active = beta.values[config.active_mode - 1]
    if b_active == 0.0:
        raise ParameterError(f"active_mode {config.active_mode} has beta = 0")
    t_abs = config.time / b_active
    return beta.values * t_abs


def _mesh_arrays(basis: CouplingBasis):
    """Mesh of P reduced to plain arrays for batched recomposition.

    P is real orthogonal, so every mesh phase is 0 or pi and recomposition
    stays in real arithmetic: the beamsplitter block is
    [[sgn*c, -sgn*s], [s, c]] with sgn = cos(phi), and the trailing phase
    shifters are signs cos(psi).
    """
    mesh = reck_decompose(np.asarray(basis.P, dtype=complex))
    bs = mesh.beamsplitters()
    idx = np.array([e.i for e in bs], dtype=int)
    theta = np.array([e.theta for e in bs])
    sgn = np.cos(np.array([e.phi for e in bs]))
    psi_sgn = np.cos(np.array([e.phase for e in mesh.phase_shifters()]))
    if np.max(np.abs(np.abs(sgn) - 1.0)) > 1e-12 or np.max(np.abs(np.abs(psi_sgn) - 1.0)) > 1e-12:
        raise IntegrationError("mesh of P is not real; cannot perturb angles in real arithmetic")
    return idx, theta, np.round(sgn), np.round(psi_sgn)


def _compose_batch(idx, thetas, sgn, psi_sgn, N) -> np.ndarray:
    """Compose perturbed copies of P for a batch of angle vectors.

    ``thetas`` has shape (R, K); returns (R, N, N) real orthogonal matrices.
    """
    R = thetas.shape[0]
    M = np.broadcast_to(np.eye(N), (R, N, N)).copy()
    c = np.cos(thetas)
    s = np.sin(thetas)
    for k in range(idx.size):
        i = idx[k]
        blk = np.empty((R, 2, 2))
        blk[:, 0, 0] = sgn[k] * c[:, k]
        blk[:, 0, 1] = -sgn[k] * s[:, k]
        blk[:, 1, 0] = s[:, k]
        blk[:, 1, 1] = c[:, k]
        M[:, :, i:i + 2] = M[:, :, i:i + 2] @ blk
    M *= psi_sgn[None, None, :]
    return M


def _check_conservation(pops: np.ndarray):
    worst = np.max(np.abs(pops.sum(axis=1) - 1.0))
    if worst > _SUM_TOL:
        raise IntegrationError(f"population not conserved: worst deviation {worst:.3e}")


def run_walk(config: WalkConfig, basis: CouplingBasis, beta: BetaSpectrum,
             threads: int = 1) -> WalkResult:
    """Monte-Carlo walk of a unit amplitude injected at ``config.source``.

    Returns the mean population distribution over realizations together with
    the per-realization populations.  With ``sigma = 0`` both randomized
    modes reproduce ``randomization='none'`` exactly.
    """
    if basis.N != config.N:
        raise ParameterError(f"basis N={basis.N} does not match config N={config.N}")
    phases = _phase_vector(config, beta)
    N, R = config.N, config.realizations
    src = config.source - 1
    e_src = np.zeros(N)
    e_src[src] = 1.0
    pops = np.empty((R, N))

    # sigma = 0 must reproduce the unrandomized walk bit for bit
    if config.randomization == "none" or config.sigma == 0.0:
        v = basis.P @ e_src
        amp = basis.P.T @ (np.exp(-1j * phases) * v)
        pops[:] = np.abs(amp) ** 2
    elif config.randomization == "phase":
        v = basis.P @ e_src

        def work_phase(lo, hi):
            offs = np.empty((hi - lo, N))
            for k in range(lo, hi):
                offs[k - lo] = stream_rng(config.seed, k).normal(0.0, config.sigma, size=N)
            amps = (np.exp(1j * (-phases[None, :] + offs)) * v[None, :]) @ basis.P
            pops[lo:hi] = np.abs(amps) ** 2

        _run_chunks(work_phase, R, threads)
    else:  # transmissivity
        idx, theta0, sgn, psi_sgn = _mesh_arrays(basis)

        def work_trans(lo, hi):
            offs = np.empty((hi - lo, idx.size))
            for k in range(lo, hi):
                offs[k - lo] = stream_rng(config.seed, k).normal(0.0, config.sigma, size=idx.size)
            M = _compose_batch(idx, theta0[None, :] + offs, sgn, psi_sgn, N)
            w = np.exp(-1j * phases)[None, :] * M[:, :, src]
            amps = np.einsum("rlj,rl->rj", M, w)
            pops[lo:hi] = np.abs(amps) ** 2

        _run_chunks(work_trans, R, threads)

    _check_conservation(pops)
    return WalkResult(mean=pops.mean(axis=0), realizations=pops)


def _run_chunks(work, total: int, threads: int):
    bounds = [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]
    if threads <= 1 or len(bounds) == 1:
        for lo, hi in bounds:
            work(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda b: work(*b), bounds))


def _classical_populations(U: np.ndarray, src: int) -> np.ndarray:
    """Propagate populations through the mesh of U with coherences dropped.

    The full propagator is decomposed into its triangular mesh and the
    population vector is pushed through the squared magnitudes of each
    2 x 2 element, in operational order (the last list element acts first).
    Phase shifters leave populations unchanged.  At t = 0 the mesh is the
    canonical all-zero one and the input distribution is returned unchanged.
    """
    mesh = reck_decompose(U)
    pop = np.zeros(U.shape[0])
    pop[src] = 1.0
    for el in reversed(mesh.beamsplitters()):
        c2 = np.cos(el.theta) ** 2
        s2 = 1.0 - c2
        pi, pj = pop[el.i], pop[el.j]
        pop[el.i] = c2 * pi + s2 * pj
        pop[el.j] = s2 * pi + c2 * pj
    return pop


def run_classical_walk(config: WalkConfig, basis: CouplingBasis, beta: BetaSpectrum) -> WalkResult:
    """Walk with inter-mode coherences discarded after each mesh element.

    Each realization builds the (possibly randomized) one-step propagator
    exactly as :func:`run_walk`, then transports populations classically
    through its mesh decomposition instead of amplitudes through the matrix.
    """
    if basis.N != config.N:
        raise ParameterError(f"basis N={basis.N} does not match config N={config.N}")
    phases = _phase_vector(config, beta)
    N, R = config.N, config.realizations
    src = config.source - 1
    pops = np.empty((R, N))

    if config.randomization == "none" or config.sigma == 0.0:
        U = basis.P.T @ (np.exp(-1j * phases)[:, None] * basis.P.astype(complex))
        pops[:] = _classical_populations(U, src)
    elif config.randomization == "phase":
        for k in range(R):
            offs = stream_rng(config.seed, k).normal(0.0, config.sigma, size=N)
            U = basis.P.T @ (np.exp(1j * (-phases + offs))[:, None] * basis.P.astype(complex))
            pops[k] = _classical_populations(U, src)
    else:
        idx, theta0, sgn, psi_sgn = _mesh_arrays(basis)
        for k in range(R):
            offs = stream_rng(config.seed, k).normal(0.0, config.sigma, size=idx.size)
            Pk = _compose_batch(idx, (theta0 + offs)[None, :], sgn, psi_sgn, N)[0]
            U = Pk.T @ (np.exp(-1j * phases)[:, None] * Pk.astype(complex))
            pops[k] = _classical_populations(U, src)

    _check_conservation(pops)
    return WalkResult(mean=pops.mean(axis=0), realizations=pops)
