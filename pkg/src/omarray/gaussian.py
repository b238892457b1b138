"""Exact first/second-moment dynamics of the linearized open system.

Quadrature layout: the N mechanical modes come first, then the N-1 optical
modes (dropped in the nearest-neighbor model); each mode contributes the
pair (x, p) with x = (b + b^dag)/sqrt(2) and p = (b - b^dag)/(i sqrt(2)),
so the vacuum variance is 1/2 per quadrature and a thermal state of
occupation n has variance n + 1/2.

The quadratic Hamiltonian is (1/2) r^T G r with per-mode frequency omega for
the mechanics and -delta_l for the optics (red sideband at delta = -1), plus
the bilinear coupling 2 eps_{l,j} [Re(g_l) X_l + Im(g_l) P_l] x_j.  Amplitude
damping -gamma (mechanical) and -kappa (optical) sits on the drift diagonal;
the diffusion matrix carries gamma (2 nbar_j + 1) per mechanical quadrature
and kappa per optical quadrature (vacuum input).  Moments then evolve as

    d<r>/dt = A <r>,      dV/dt = A V + V A^T + D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .effective import beta_coefficient
from .errors import InstabilityError, IntegrationError, ParameterError
from .modes import CouplingBasis, build_basis, coupling_vector
from .params import SystemParams, _readonly

#: slowest decay (in units of omega) below which the exponential-formula
#: path is abandoned for direct high-order integration
HURWITZ_MARGIN = 1e-7

_LYAP_RTOL = 1e-9


@dataclass(frozen=True)
class DriftDiffusion:
    """Drift matrix A and symmetric PSD diffusion matrix D plus mode layout."""

    A: np.ndarray
    D: np.ndarray
    n_mech: int
    n_opt: int

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        D = np.asarray(self.D, dtype=float)
        dim = 2 * (self.n_mech + self.n_opt)
        if A.shape != (dim, dim) or D.shape != (dim, dim):
            raise ParameterError(f"A and D must be {dim} x {dim} for the declared layout")
        if np.max(np.abs(D - D.T)) > 1e-12:
            raise ParameterError("diffusion matrix must be symmetric")
        if np.min(np.linalg.eigvalsh(0.5 * (D + D.T))) < -1e-12:
            raise ParameterError("diffusion matrix must be positive semidefinite")
        object.__setattr__(self, "A", _readonly(A))
        object.__setattr__(self, "D", _readonly(0.5 * (D + D.T)))

    @property
    def dim(self) -> int:
        return 2 * (self.n_mech + self.n_opt)


@dataclass(frozen=True)
class CovarianceState:
    """Symmetric second-moment matrix and mean vector."""

    V: np.ndarray
    mean: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        mean = np.asarray(self.mean, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise ParameterError("V must be square")
        if mean.shape != (V.shape[0],):
            raise ParameterError("mean length must match V")
        if np.max(np.abs(V - V.T)) > 1e-9 * max(1.0, np.max(np.abs(V))):
            raise ParameterError("V must be symmetric")
        object.__setattr__(self, "V", _readonly(0.5 * (V + V.T)))
        object.__setattr__(self, "mean", _readonly(mean))

    @property
    def n_modes(self) -> int:
        return self.V.shape[0] // 2


def symplectic_defect(state: CovarianceState) -> float:
    """Most negative eigenvalue of V + (i/2) Sigma; physical states give >= ~0."""
    n = state.n_modes
    sigma = np.zeros((2 * n, 2 * n))
    for m in range(n):
        sigma[2 * m, 2 * m + 1] = 1.0
        sigma[2 * m + 1, 2 * m] = -1.0
    eigs = np.linalg.eigvalsh(state.V + 0.5j * sigma)
    return float(eigs.min())


def thermal_covariance(occupations, n_opt: int = 0) -> CovarianceState:
    """Product state: thermal mechanics at the given occupations, vacuum optics."""
    occupations = np.asarray(occupations, dtype=float)
    n_modes = occupations.size + n_opt
    diag = np.full(2 * n_modes, 0.5)
    for j, n in enumerate(occupations):
        diag[2 * j] = n + 0.5
        diag[2 * j + 1] = n + 0.5
    return CovarianceState(V=np.diag(diag), mean=np.zeros(2 * n_modes))


def build_drift_diffusion(params: SystemParams, basis: CouplingBasis,
                          model: str = "optical", nn_strength: float = 0.3) -> DriftDiffusion:
    """Drift/diffusion matrices for the full optical model or the NN baseline.

    ``model='optical'`` realizes the full quadratic Hamiltonian with all
    N-1 optical modes.  ``model='nearest_neighbor'`` drops the optics and
    couples adjacent elements with the excitation-conserving hopping
    ``nn_strength * (x_j x_{j+1} + p_j p_{j+1})``, the direct-conduction
    baseline; a uniform-temperature thermal product state is then exactly
    stationary, so occupation changes reflect genuine transport.
    """
    if params.N != basis.N:
        raise ParameterError(f"params N={params.N} does not match basis N={basis.N}")
    N = params.N
    if model == "optical":
        n_mech, n_opt = N, N - 1
    elif model == "nearest_neighbor":
        n_mech, n_opt = N, 0
    else:
        raise ParameterError(f"model must be 'optical' or 'nearest_neighbor', got {model!r}")

    n_modes = n_mech + n_opt
    dim = 2 * n_modes
    G = np.zeros((dim, dim))
    for j in range(N):
        G[2 * j, 2 * j] = params.omega
        G[2 * j + 1, 2 * j + 1] = params.omega
    damp = np.zeros(dim)
    damp[: 2 * N] = params.gamma
    D = np.zeros(dim)
    for j in range(N):
        D[2 * j] = D[2 * j + 1] = params.gamma * (2.0 * params.nbar[j] + 1.0)

    if model == "optical":
        for l in range(N - 1):
            X = 2 * (N + l)
            G[X, X] = -params.delta[l]
            G[X + 1, X + 1] = -params.delta[l]
            damp[X] = damp[X + 1] = params.kappa
            D[X] = D[X + 1] = params.kappa
            for j in range(N):
                c = 2.0 * basis.epsilon[l, j]
                G[2 * j, X] += c * params.g[l].real
                G[X, 2 * j] += c * params.g[l].real
                G[2 * j, X + 1] += c * params.g[l].imag
                G[X + 1, 2 * j] += c * params.g[l].imag
    else:
        for j in range(N - 1):
            G[2 * j, 2 * (j + 1)] += nn_strength
            G[2 * (j + 1), 2 * j] += nn_strength
            G[2 * j + 1, 2 * (j + 1) + 1] += nn_strength
            G[2 * (j + 1) + 1, 2 * j + 1] += nn_strength

    omega_sym = np.zeros((dim, dim))
    for m in range(n_modes):
        omega_sym[2 * m, 2 * m + 1] = 1.0
        omega_sym[2 * m + 1, 2 * m] = -1.0
    A = omega_sym @ G - np.diag(damp)
    return DriftDiffusion(A=A, D=np.diag(D), n_mech=n_mech, n_opt=n_opt)


def _hurwitz_margin(A: np.ndarray):
    eigs = np.linalg.eigvals(A)
    worst = eigs[np.argmax(eigs.real)]
    return -worst.real, worst


def steady_state(dd: DriftDiffusion) -> CovarianceState:
    """Unique steady covariance, from the dense vectorized Lyapunov system.

    Solves (I (x) A + A (x) I) vec(V) = -vec(D) by direct dense LU (row-major
    vec), symmetrizes, and verifies the residual against ``_LYAP_RTOL``.
    Raises :class:`InstabilityError` when A is not Hurwitz.
    """
    margin, worst = _hurwitz_margin(dd.A)
    if margin < 1e-12:
        raise InstabilityError(
            f"drift matrix is not Hurwitz: eigenvalue {worst} has real part >= -1e-12")
    n = dd.dim
    K = np.kron(np.eye(n), dd.A) + np.kron(dd.A, np.eye(n))
    v = np.linalg.solve(K, -dd.D.flatten())
    V = v.reshape(n, n)
    V = 0.5 * (V + V.T)
    res = np.max(np.abs(dd.A @ V + V @ dd.A.T + dd.D))
    if res >= _LYAP_RTOL * max(np.max(np.abs(dd.D)), 1e-300):
        raise IntegrationError(f"Lyapunov residual {res:.3e} exceeds tolerance")
    return CovarianceState(V=V, mean=np.zeros(n))


def evolve_covariance(dd: DriftDiffusion, v0: CovarianceState, times) -> list[CovarianceState]:
    """Moments at the requested sample times.

    For a comfortably Hurwitz drift (slowest decay above ``HURWITZ_MARGIN``)
    the evolution is evaluated exactly as
    ``V(t) = e^{At} (V0 - Vss) e^{A^T t} + Vss``; otherwise the moment ODEs
    are integrated with DOP853 at relative tolerance 1e-9.  Means evolve as
    ``e^{At} mean(0)`` in both paths.
    """
    from scipy.linalg import expm

    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ParameterError("times must be a nonempty 1-d grid")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ParameterError("times must be strictly increasing and start at >= 0")
    if v0.V.shape[0] != dd.dim:
        raise ParameterError(f"state dimension {v0.V.shape[0]} does not match system {dd.dim}")

    margin, _ = _hurwitz_margin(dd.A)
    out = []
    if margin > HURWITZ_MARGIN:
        vss = steady_state(dd)
        dv = v0.V - vss.V
        for t in times:
            E = expm(dd.A * t)
            V = E @ dv @ E.T + vss.V
            out.append(CovarianceState(V=0.5 * (V + V.T), mean=E @ v0.mean))
        return out

    n = dd.dim

    def rhs(_t, y):
        V = y[: n * n].reshape(n, n)
        dV = dd.A @ V + V @ dd.A.T + dd.D
        dm = dd.A @ y[n * n:]
        return np.concatenate([dV.ravel(), dm])

    y0 = np.concatenate([v0.V.ravel(), v0.mean])
    t0 = 0.0
    tf = float(times[-1])
    sol = solve_ivp(rhs, (t0, tf if tf > t0 else t0 + 1e-12), y0, method="DOP853",
                    t_eval=times, rtol=1e-9, atol=1e-12 * max(1.0, np.max(np.abs(v0.V))))
    if not sol.success:
        raise IntegrationError(f"moment integration failed: {sol.message}")
    for k in range(times.size):
        V = sol.y[: n * n, k].reshape(n, n)
        out.append(CovarianceState(V=0.5 * (V + V.T), mean=sol.y[n * n:, k]))
    return out


def occupations(state: CovarianceState, count: int | None = None) -> np.ndarray:
    """Mean excitation number per mode, n = (V_xx + V_pp + mx^2 + mp^2)/2 - 1/2.

    Modes follow the layout order (mechanics first); ``count`` truncates to
    the first modes, e.g. the N mechanical elements.
    """
    n_modes = state.n_modes if count is None else count
    out = np.empty(n_modes)
    for m in range(n_modes):
        x, p = 2 * m, 2 * m + 1
        out[m] = 0.5 * (state.V[x, x] + state.V[p, p]
                        + state.mean[x] ** 2 + state.mean[p] ** 2) - 0.5
    return out


@dataclass(frozen=True)
class HeatResult:
    """Occupation time series of a heat-diffusion run."""

    times: np.ndarray  # (S,)
    occupations: np.ndarray  # (S, N)
    model: str
    hot_element: int
    initial_occupations: np.ndarray  # (N,)
    t_max: float

    def __post_init__(self):
        object.__setattr__(self, "times", _readonly(np.asarray(self.times, dtype=float)))
        object.__setattr__(self, "occupations", _readonly(np.asarray(self.occupations, dtype=float)))
        object.__setattr__(self, "initial_occupations", _readonly(np.asarray(self.initial_occupations, dtype=float)))


def heat_experiment(params: SystemParams, basis: CouplingBasis, hot_element: int,
                    excess: float, model: str = "optical", nn_strength: float = 0.3,
                    t_max: float | None = None, samples: int = 200) -> HeatResult:
    """Occupation time series after heating one bath by ``excess``.

    The bath of ``hot_element`` (1-based) holds ``nbar + excess`` while every
    element starts in thermal equilibrium with its own bath (optics in
    vacuum); the coupling then redistributes the excess.  Samples are
    log-spaced on [1, t_max] with ``t_max`` defaulting to ten times the
    slowest decay time, capped at 1e6.
    """
    if not 1 <= hot_element <= params.N:
        raise ParameterError(f"hot_element must be in 1..{params.N}, got {hot_element}")
    nbar_hot = np.asarray(params.nbar, dtype=float).copy()
    nbar_hot[hot_element - 1] += excess
    params_hot = params.with_nbar(nbar_hot)
    dd = build_drift_diffusion(params_hot, basis, model=model, nn_strength=nn_strength)
    margin, worst = _hurwitz_margin(dd.A)
    if margin < 1e-12:
        raise InstabilityError(
            f"drift matrix is not Hurwitz: eigenvalue {worst} has real part >= -1e-12")
    if t_max is None:
        t_max = min(10.0 / margin, 1e6)
    times = np.logspace(0.0, np.log10(t_max), samples)
    v0 = thermal_covariance(nbar_hot, n_opt=dd.n_opt)
    states = evolve_covariance(dd, v0, times)
    occ = np.array([occupations(s, count=params.N) for s in states])
    return HeatResult(times=times, occupations=occ, model=model,
                      hot_element=hot_element, initial_occupations=nbar_hot, t_max=t_max)


def rise_times(result: HeatResult, threshold: float = 0.05) -> np.ndarray:
    """First time each element exceeds its initial occupation by ``threshold``.

    Linear interpolation between bracketing samples resolves orderings finer
    than the grid; elements that never cross give ``inf``.
    """
    S, N = result.occupations.shape
    out = np.full(N, np.inf)
    for j in range(N):
        series = result.occupations[:, j]
        target = result.initial_occupations[j] + threshold
        above = series > target
        if not above.any():
            continue
        k = int(np.argmax(above))
        if k == 0:
            out[j] = result.times[0]
        else:
            y0, y1 = series[k - 1], series[k]
            frac = (target - y0) / (y1 - y0)
            out[j] = result.times[k - 1] + frac * (result.times[k] - result.times[k - 1])
    return out


@dataclass(frozen=True)
class AdiabaticRates:
    """End results of eliminating one fast optical mode."""

    frequency_shift: float
    cooling: float
    heating: float


def adiabatic_rates(g: complex, delta: float, kappa: float, omega: float = 1.0) -> AdiabaticRates:
    """Frequency shift and cooling/heating rates induced by one optical mode.

    Rates are per amplitude: the mean amplitude of the addressed collective
    mode decays at ``gamma + cooling - heating`` and its occupation at twice
    that.  Red detuning ``delta = -omega`` maximizes ``cooling``.
    """
    if not kappa > 0:
        raise ParameterError(f"kappa must be > 0, got {kappa}")
    g2 = abs(g) ** 2
    num = 2.0 * g2 * delta * (delta**2 - omega**2 + kappa**2)
    den = (delta**2 - omega**2 - kappa**2) ** 2 + (2.0 * delta * kappa) ** 2
    shift = num / den
    cooling = g2 * kappa / ((delta + omega) ** 2 + kappa**2)
    heating = g2 * kappa / ((delta - omega) ** 2 + kappa**2)
    return AdiabaticRates(frequency_shift=shift, cooling=cooling, heating=heating)


@dataclass(frozen=True)
class CrosscheckReport:
    """Fitted full-model bright-mode dynamics vs adiabatic end results.

    ``amplitude_decay_*`` refer to the envelope of the mean amplitude of the
    addressed collective mode; occupation/energy envelopes decay at twice
    these rates.  Discrepancies are relative.
    """

    amplitude_decay_fit: float
    amplitude_decay_predicted: float
    decay_discrepancy: float
    frequency_fit: float
    frequency_predicted: float
    frequency_discrepancy: float
    optical_damping_fit: float
    rates: AdiabaticRates


def _rel_diff(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-12)


def elimination_crosscheck(params: SystemParams, mode: int = 1) -> CrosscheckReport:
    """Fit the full model's bright-mode decay/frequency against adiabatic theory.

    The mean vector is initialized along the x quadrature of the collective
    mode addressed by optical mode ``mode`` and propagated with the full
    drift matrix.  The amplitude envelope is fitted by linear regression of
    ``log |u(t)|`` (u the bright-mode amplitude) and the oscillation
    frequency by the slope of the unwrapped phase.  Predictions are
    ``gamma + cooling - heating`` and ``omega + frequency_shift``.
    """
    if np.any(np.abs(params.g) > 0.05 * params.omega) or params.kappa < 10.0 * params.omega:
        raise ParameterError(
            "elimination crosscheck requires |g| <= 0.05 omega and kappa >= 10 omega")
    N = params.N
    eps = coupling_vector(N, mode)
    basis = build_basis(N)
    dd = build_drift_diffusion(params, basis, model="optical")
    rates = adiabatic_rates(params.g[mode - 1], params.delta[mode - 1], params.kappa, params.omega)
    predicted_decay = params.gamma + rates.cooling - rates.heating
    predicted_freq = params.omega + rates.frequency_shift

    w, S = np.linalg.eig(dd.A)
    mean0 = np.zeros(dd.dim)
    for j in range(N):
        mean0[2 * j] = eps[j]
    coeff = np.linalg.solve(S, mean0)

    def bright_amplitude(ts):
        means = (S @ (np.exp(np.outer(w, ts)) * coeff[:, None])).real
        b = (means[0:2 * N:2] + 1j * means[1:2 * N:2]) / np.sqrt(2.0)
        return eps @ b

    t_env = min(3.0 / max(abs(predicted_decay), 1e-9), 1e8)
    ts_env = np.linspace(0.0, t_env, 400)
    u = bright_amplitude(ts_env)
    good = np.abs(u) > 1e-12
    if good.sum() < 10:
        raise IntegrationError("bright-mode amplitude vanished; decay fit impossible")
    slope = np.polyfit(ts_env[good], np.log(np.abs(u[good])), 1)[0]
    fit_decay = -float(slope)

    ts_f = np.linspace(0.0, 100.0, 4001)
    phase = np.unwrap(np.angle(bright_amplitude(ts_f)))
    fit_freq = -float(np.polyfit(ts_f, phase, 1)[0])

    return CrosscheckReport(
        amplitude_decay_fit=fit_decay,
        amplitude_decay_predicted=predicted_decay,
        decay_discrepancy=_rel_diff(fit_decay, predicted_decay),
        frequency_fit=fit_freq,
        frequency_predicted=predicted_freq,
        frequency_discrepancy=_rel_diff(fit_freq, predicted_freq),
        optical_damping_fit=fit_decay - params.gamma,
        rates=rates,
    )
