"""Coherent single-excitation dynamics in the good-cavity regime.

With every optical mode tuned to the red sideband and fast-rotating terms
dropped, the excitation-conserving exchange Hamiltonian restricted to the
single-excitation subspace acts on a (2N-1)-vector of probability amplitudes
whose first N-1 entries are the optical modes and last N the mechanical
elements.  Writing Lambda = [i conj(g_l) eps_{l,j}], the propagator takes the
block form

    U(t) = [[cos(t sqrt(L L^dag)),            -L sin(t sqrt(L^dag L)) / sqrt(L^dag L)],
            [(L sin(t sqrt(L^dag L)) / sqrt(L^dag L))^dag,  cos(t sqrt(L^dag L))]]

evaluated spectrally; sin(x)/x is taken as the entire sinc function so a
singular Gram matrix needs no explicit pseudoinverse (the two prescriptions
agree on the support of Lambda and the sinc extends continuously off it).
Piecewise-constant amplitude schedules concatenate such propagators, with
switching intended at instants when no excitation resides in the optics.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh, expm

from .errors import ContractError, GoodCavityWarning, ParameterError
from .gaussian import CovarianceState, build_drift_diffusion, evolve_covariance, occupations
from .modes import CouplingBasis, LambdaMatrix, build_basis, lambda_from_g
from .params import SystemParams, _readonly

#: optical population below which an instantaneous amplitude switch is valid
SWITCH_TOL = 1e-6

_NORM_TOL = 1e-10


@dataclass(frozen=True)
class AmplitudeState:
    """Single-excitation amplitudes: N-1 optical entries then N mechanical."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size < 3 or a.size % 2 == 0:
            raise ParameterError("amplitude vector must have odd length 2N-1 >= 3")
        object.__setattr__(self, "amplitudes", _readonly(a))

    @property
    def N(self) -> int:
        return (self.amplitudes.size + 1) // 2

    def optical_populations(self) -> np.ndarray:
        return np.abs(self.amplitudes[: self.N - 1]) ** 2

    def mechanical_populations(self) -> np.ndarray:
        return np.abs(self.amplitudes[self.N - 1:]) ** 2


def phonon_state(N: int, element: int) -> AmplitudeState:
    """Unit excitation on one mechanical element (1-based), optics empty."""
    if not 1 <= element <= N:
        raise ParameterError(f"element must be in 1..{N}, got {element}")
    a = np.zeros(2 * N - 1, dtype=complex)
    a[N - 1 + element - 1] = 1.0
    return AmplitudeState(a)


@dataclass(frozen=True)
class Segment:
    """One piecewise-constant stretch of coupling amplitudes."""

    g: np.ndarray
    duration: float

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        if g.ndim != 1:
            raise ParameterError("segment g must be a vector of length N-1")
        if not (np.isfinite(self.duration) and self.duration >= 0):
            raise ParameterError(f"duration must be finite and >= 0, got {self.duration}")
        object.__setattr__(self, "g", _readonly(g))


@dataclass(frozen=True)
class Schedule:
    """Ordered segments; switch times are the cumulative durations."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ParameterError("schedule must contain at least one segment")
        n = {s.g.size for s in segs}
        if len(n) != 1:
            raise ParameterError("all segments must share the same number of optical modes")
        object.__setattr__(self, "segments", segs)

    @property
    def N(self) -> int:
        return self.segments[0].g.size + 1

    def switch_times(self) -> np.ndarray:
        return np.cumsum([s.duration for s in self.segments])


def _spectral_blocks(lam: LambdaMatrix):
    L = np.asarray(lam.entries)
    M2 = L.conj().T @ L
    M1 = L @ L.conj().T
    w2, V2 = eigh(0.5 * (M2 + M2.conj().T))
    w1, V1 = eigh(0.5 * (M1 + M1.conj().T))
    for w in (w1, w2):
        if np.any(w < -1e-12):
            raise ContractError(f"Gram matrix has eigenvalue {w.min():.3e} below -1e-12")
    return L, np.sqrt(np.clip(w1, 0.0, None)), V1, np.sqrt(np.clip(w2, 0.0, None)), V2


def _assemble(L, s1, V1, s2, V2, t: float) -> np.ndarray:
    u11 = (V1 * np.cos(t * s1)) @ V1.conj().T
    u22 = (V2 * np.cos(t * s2)) @ V2.conj().T
    sinc = t * np.sinc(t * s2 / np.pi)
    u12 = -L @ ((V2 * sinc) @ V2.conj().T)
    n_opt, n_mech = L.shape
    U = np.empty((n_opt + n_mech, n_opt + n_mech), dtype=complex)
    U[:n_opt, :n_opt] = u11
    U[:n_opt, n_opt:] = u12
    U[n_opt:, :n_opt] = -u12.conj().T
    U[n_opt:, n_opt:] = u22
    return U


def evolution_matrix(lam: LambdaMatrix, t: float) -> np.ndarray:
    """Closed-form single-excitation propagator for constant amplitudes."""
    if not np.isfinite(t):
        raise ParameterError(f"time must be finite, got {t}")
    return _assemble(*_spectral_blocks(lam), t)


def generator_oracle(lam: LambdaMatrix, t: float) -> np.ndarray:
    """Dense exponential of the exchange generator; test oracle only.

    The generator has blocks [[0, -Lambda], [Lambda^dag, 0]] in the
    (optical, mechanical) ordering and is exponentiated by
    scaling-and-squaring, independently of the spectral route.
    """
    L = np.asarray(lam.entries)
    n_opt, n_mech = L.shape
    G = np.zeros((n_opt + n_mech, n_opt + n_mech), dtype=complex)
    G[:n_opt, n_opt:] = -L
    G[n_opt:, :n_opt] = L.conj().T
    return expm(t * G)


@dataclass(frozen=True)
class ScheduleResult:
    """Sampled trajectory plus per-switch validity flags."""

    times: np.ndarray  # (T,)
    amplitudes: np.ndarray  # (T, 2N-1)
    segment_index: np.ndarray  # (T,)
    switch_times: np.ndarray  # (K,)
    switch_optical_population: np.ndarray  # (K,)
    switch_valid: np.ndarray  # (K,) bool

    def __post_init__(self):
        for name in ("times", "amplitudes", "segment_index", "switch_times",
                     "switch_optical_population", "switch_valid"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name))))


def run_schedule(schedule: Schedule, initial: AmplitudeState, times,
                 basis: CouplingBasis | None = None) -> ScheduleResult:
    """Evolve an initial single-excitation state through a switching schedule.

    ``times`` are absolute sample instants (strictly increasing, >= 0); times
    beyond the final switch continue under the last segment's amplitudes.  A
    validity flag is emitted for every segment boundary, true when the total
    optical population there is below ``SWITCH_TOL``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ParameterError("times must be a nonempty 1-d grid")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ParameterError("times must be strictly increasing and start at >= 0")
    if schedule.N != initial.N:
        raise ParameterError(f"schedule N={schedule.N} does not match state N={initial.N}")
    nrm = np.linalg.norm(initial.amplitudes)
    if abs(nrm - 1.0) > _NORM_TOL:
        raise ContractError(f"initial state must be normalized, |norm - 1| = {abs(nrm - 1.0):.3e}")
    if basis is None:
        basis = build_basis(schedule.N)

    blocks = [_spectral_blocks(lambda_from_g(seg.g, basis)) for seg in schedule.segments]
    tau = schedule.switch_times()
    starts = np.concatenate([[0.0], tau[:-1]])

    # state at the start of each segment, and validity at each boundary
    psi_starts = [initial.amplitudes.astype(complex)]
    switch_pop = np.empty(tau.size)
    for k, seg in enumerate(schedule.segments):
        psi_end = _assemble(*blocks[k], seg.duration) @ psi_starts[k]
        switch_pop[k] = float(np.sum(np.abs(psi_end[: schedule.N - 1]) ** 2))
        psi_starts.append(psi_end)

    n_seg = len(schedule.segments)
    amps = np.empty((times.size, 2 * schedule.N - 1), dtype=complex)
    seg_idx = np.empty(times.size, dtype=int)
    for i, t in enumerate(times):
        k = int(np.searchsorted(tau, t, side="right"))
        if k >= n_seg:
            k = n_seg - 1
        amps[i] = _assemble(*blocks[k], t - starts[k]) @ psi_starts[k]
        seg_idx[i] = k
        drift = abs(np.linalg.norm(amps[i]) - 1.0)
        if drift > _NORM_TOL:
            raise ContractError(f"norm drifted by {drift:.3e} at t={t}")
    return ScheduleResult(times=times, amplitudes=amps, segment_index=seg_idx,
                          switch_times=tau, switch_optical_population=switch_pop,
                          switch_valid=switch_pop < SWITCH_TOL)


def kappa_switch_amplitude(alpha0: complex, kappa0: float, kappa1: float, delta: float) -> complex:
    """Input amplitude after a linewidth step that keeps the cavity field constant.

    Matching the piecewise steady states sqrt(2 kappa) alpha_in / (i delta - kappa)
    across the step gives alpha1 = alpha0 sqrt(kappa0/kappa1) (i delta - kappa1)
    / (i delta - kappa0); with this choice the intracavity amplitude is
    time-independent once transients have decayed.
    """
    if not (kappa0 > 0 and kappa1 > 0):
        raise ParameterError(f"kappa values must be > 0, got {kappa0}, {kappa1}")
    return alpha0 * np.sqrt(kappa0 / kappa1) * (1j * delta - kappa1) / (1j * delta - kappa0)


@dataclass(frozen=True)
class DissipativeReport:
    """Full-moment populations vs the unitary single-excitation prediction."""

    times: np.ndarray  # (T,)
    predicted: np.ndarray  # (T, N) unitary mechanical populations
    measured: np.ndarray  # (T, N) full-model mechanical occupations
    deviation: np.ndarray  # (T,) max-abs deviation per sample
    max_deviation: float
    counter_rotating_amplitude: float
    counter_rotating_flag: bool

    def __post_init__(self):
        for name in ("times", "predicted", "measured", "deviation"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name), dtype=float)))


#: spectral amplitude (population units) above ~1.5 omega that flags
#: counter-rotating content
_CR_THRESHOLD = 1e-2
_CR_CUTOFF = 1.5


def dissipative_check(schedule: Schedule, initial_element: int, params: SystemParams,
                      samples: int = 400) -> DissipativeReport:
    """Validate a shuttling schedule against the dissipative full model.

    The full quadratic model starts from single-excitation second moments
    (variance 3/2 per quadrature on the initial phonon's mode, vacuum
    elsewhere) and evolves piecewise with the schedule's amplitudes; its
    mechanical occupations are compared sample-by-sample against the unitary
    prediction.  Higher-frequency (counter-rotating) content in the measured
    populations beyond the rotating-wave band is reported as a spectral
    amplitude and flag.
    """
    if params.kappa >= 0.3 * params.omega:
        warnings.warn(
            f"kappa={params.kappa:.3g} is not << omega; the unitary picture "
            "is expected to break down", GoodCavityWarning, stacklevel=2)
    if schedule.N != params.N:
        raise ParameterError(f"schedule N={schedule.N} does not match params N={params.N}")
    N = params.N
    total = float(schedule.switch_times()[-1])
    if total <= 0:
        raise ParameterError("schedule must have positive total duration")
    times = np.linspace(0.0, total, samples)

    basis = build_basis(N)
    unit = run_schedule(schedule, phonon_state(N, initial_element), times, basis=basis)
    predicted = np.abs(unit.amplitudes[:, N - 1:]) ** 2

    dim = 2 * (2 * N - 1)
    V = np.eye(dim) * 0.5
    j0 = initial_element - 1
    V[2 * j0, 2 * j0] = 1.5
    V[2 * j0 + 1, 2 * j0 + 1] = 1.5
    state = CovarianceState(V=V, mean=np.zeros(dim))

    measured = np.empty((times.size, N))
    tau = schedule.switch_times()
    starts = np.concatenate([[0.0], tau[:-1]])
    for k, seg in enumerate(schedule.segments):
        dd = build_drift_diffusion(params.with_g(seg.g), basis, model="optical")
        lo, hi = starts[k], tau[k]
        mask = (times >= lo - 1e-12) & (times <= hi + 1e-12) if k < len(schedule.segments) - 1 \
            else (times >= lo - 1e-12)
        local = np.unique(np.concatenate([(times[mask] - lo), [hi - lo]]))
        local = local[local >= 0]
        if local[0] > 0:
            local = np.concatenate([[0.0], local])
        states = evolve_covariance(dd, state, local[1:]) if local.size > 1 else []
        lookup = dict(zip(np.round(local[1:], 12), states))
        lookup[0.0] = state
        for i in np.flatnonzero(mask):
            measured[i] = occupations(lookup[np.round(times[i] - lo, 12)], count=N)
        state = states[-1] if states else state

    deviation = np.max(np.abs(measured - predicted), axis=1)
    cr_amp = _counter_rotating_amplitude(times, measured, params.omega)
    return DissipativeReport(times=times, predicted=predicted, measured=measured,
                             deviation=deviation, max_deviation=float(deviation.max()),
                             counter_rotating_amplitude=cr_amp,
                             counter_rotating_flag=cr_amp > _CR_THRESHOLD)


def _counter_rotating_amplitude(times, series, omega: float) -> float:
    """Largest spectral amplitude above the rotating-wave band (~1.5 omega)."""
    dt = times[1] - times[0]
    freqs = 2.0 * np.pi * np.fft.rfftfreq(times.size, d=dt)
    detrended = series - series.mean(axis=0, keepdims=True)
    spec = np.abs(np.fft.rfft(detrended, axis=0)) * (2.0 / times.size)
    high = freqs > _CR_CUTOFF * omega
    if not high.any():
        return 0.0
    return float(spec[high, :].max())
