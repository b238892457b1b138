"""Self-validation: invariant and oracle checks runnable from the CLI.

``fast`` covers the structural invariants and closed-form oracles in well
under a minute; ``full`` adds the Monte-Carlo walk statistics, the
heat-diffusion contrasts, the dissipative shuttling bound, and the
adiabatic-elimination crosscheck at their demo parameter points.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import effective, excitation, gaussian, mesh, modes, walks
from .params import SystemParams


@dataclass
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    comparison: str = "<"

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: measured={self.value:.6g} "
                f"required {self.comparison} {self.threshold:.6g}")


def _check(name, value, threshold, comparison="<"):
    ops = {"<": lambda a, b: a < b, "<=": lambda a, b: a <= b, ">": lambda a, b: a > b}
    return CheckResult(name, float(value), float(threshold), ops[comparison](value, threshold),
                       comparison)


def _demo_params(N=20) -> SystemParams:
    return SystemParams(N=N, gamma=5e-5, kappa=6.4, delta=[-1.0] * (N - 1),
                        g=[0.3] + [0.0] * (N - 2), nbar=[10.0] * N)


def fast_checks() -> list[CheckResult]:
    out = []
    rng = np.random.default_rng(20240601)

    worst_norm = worst_sym = worst_orth = worst_center = 0.0
    for N in range(2, 21):
        basis = modes.build_basis(N)
        for l in range(1, N):
            worst_norm = max(worst_norm, abs(np.linalg.norm(basis.epsilon[l - 1]) - 1.0))
            worst_sym = max(worst_sym, np.max(np.abs(basis.epsilon[l - 1] - basis.epsilon[N - l - 1])))
        gram = basis.epsilon[: basis.l0] @ basis.epsilon[: basis.l0].T
        worst_orth = max(worst_orth, np.max(np.abs(gram - np.eye(basis.l0))))
        worst_orth = max(worst_orth, np.max(np.abs(basis.P @ basis.P.T - np.eye(N))))
        if N % 2 == 1:
            worst_center = max(worst_center, abs(basis.epsilon[0, (N + 1) // 2 - 1]))
    out.append(_check("mode_profile_norms", worst_norm, 1e-12))
    out.append(_check("mode_profile_symmetry", worst_sym, 1e-12))
    out.append(_check("basis_orthogonality", worst_orth, 1e-10))
    out.append(_check("odd_center_dark", worst_center, 1e-12))

    E = modes.coupling_matrix(modes.coupling_vector(5, 2))
    out.append(_check("coupling_matrix_projector", np.max(np.abs(E @ E - E)), 1e-12))

    beta_val = effective.beta_coefficient(0.3, -1.0, 6.4)
    out.append(_check("beta_closed_form", abs(beta_val - (-2 * 0.09 / 44.96)), 1e-15))

    worst = 0.0
    for _ in range(20):
        N = int(rng.integers(2, 9))
        basis = modes.build_basis(N)
        vals = np.zeros(N)
        vals[: basis.l0] = rng.normal(size=basis.l0)
        beta = effective.BetaSpectrum(vals)
        t = float(rng.uniform(0, 20))
        U = effective.propagator(basis, beta, t)
        H = effective.effective_hamiltonian(basis, beta)
        worst = max(worst, np.max(np.abs(U - expm(-1j * H * t))))
        U1 = effective.propagator(basis, beta, 0.3)
        U2 = effective.propagator(basis, beta, t - 0.3)
        worst = max(worst, np.max(np.abs(U1 @ U2 - U)))
    out.append(_check("propagator_exponential_oracle", worst, 1e-10))

    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 7))
        Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        Q = np.linalg.qr(Z)[0]
        worst = max(worst, np.max(np.abs(mesh.reck_compose(mesh.reck_decompose(Q)) - Q)))
    out.append(_check("mesh_roundtrip", worst, 1e-10))

    worst = worst_block = 0.0
    for _ in range(20):
        N = int(rng.integers(2, 8))
        basis = modes.build_basis(N)
        g = rng.normal(size=N - 1) + 1j * rng.normal(size=N - 1)
        if rng.random() < 0.5:
            g[int(rng.integers(0, N - 1))] = 0.0
        lam = modes.lambda_from_g(g, basis)
        t = float(rng.uniform(0, 8))
        U = excitation.evolution_matrix(lam, t)
        worst = max(worst, np.max(np.abs(U - excitation.generator_oracle(lam, t))))
        worst = max(worst, np.max(np.abs(U.conj().T @ U - np.eye(2 * N - 1))))
        worst_block = max(worst_block, np.max(np.abs(
            U[N - 1:, : N - 1] + U[: N - 1, N - 1:].conj().T)))
    out.append(_check("exchange_propagator_oracle", worst, 1e-8))
    out.append(_check("exchange_block_structure", worst_block, 1e-10))

    basis4 = modes.build_basis(4)
    dark = np.zeros(7, dtype=complex)
    dark[3] = dark[6] = 1 / np.sqrt(2)
    worst = 0.0
    for _ in range(10):
        segs = tuple(excitation.Segment(g=rng.normal(size=3) + 1j * rng.normal(size=3),
                                        duration=float(rng.uniform(0, 5))) for _ in range(3))
        sched = excitation.Schedule(segs)
        res = excitation.run_schedule(sched, excitation.AmplitudeState(dark),
                                      np.array([sum(s.duration for s in segs)]), basis=basis4)
        worst = max(worst, np.max(np.abs(res.amplitudes[-1] - dark)))
    out.append(_check("dark_state_stationary", worst, 1e-10))

    lam2 = modes.lambda_from_g([0.1], modes.build_basis(2))
    U = excitation.evolution_matrix(lam2, np.pi / 0.1)
    swap_err = max(np.max(np.abs(U[1:, 1:] - np.array([[0, 1], [1, 0]]))), abs(U[0, 0] + 1))
    out.append(_check("two_element_swap", swap_err, 1e-10))

    basis = modes.build_basis(8)
    beta = effective.BetaSpectrum(np.concatenate([[0.01], np.zeros(7)]))
    cfg = dict(N=8, source=3, active_mode=1, time=np.pi, realizations=64, seed=7)
    base = walks.run_walk(walks.WalkConfig(**cfg), basis, beta)
    worst = 0.0
    for mode in ("phase", "transmissivity"):
        res = walks.run_walk(walks.WalkConfig(**cfg, randomization=mode, sigma=0.0), basis, beta)
        worst = max(worst, np.max(np.abs(res.mean - base.mean)))
    out.append(_check("zero_sigma_reduces_to_plain_walk", worst, 0.0, "<="))
    out.append(_check("walk_population_conservation",
                      abs(base.realizations.sum(axis=1) - 1.0).max(), 1e-9))

    params = _demo_params(4)
    dd = gaussian.build_drift_diffusion(params, modes.build_basis(4))
    ss = gaussian.steady_state(dd)
    res = np.max(np.abs(dd.A @ ss.V + ss.V @ dd.A.T + dd.D)) / np.max(np.abs(dd.D))
    out.append(_check("lyapunov_residual", res, 1e-9))

    decoupled = SystemParams(N=3, gamma=2e-3, kappa=6.4, delta=[-1.0] * 2,
                             g=[0.0] * 2, nbar=[1.0, 2.0, 3.0])
    dd0 = gaussian.build_drift_diffusion(decoupled, modes.build_basis(3))
    v0 = gaussian.thermal_covariance([5.0, 5.0, 5.0], n_opt=2)
    ts = np.linspace(1.0, 400.0, 7)
    states = gaussian.evolve_covariance(dd0, v0, ts)
    worst = 0.0
    for t, st in zip(ts, states):
        n = gaussian.occupations(st, count=3)
        analytic = decoupled.nbar + (5.0 - decoupled.nbar) * np.exp(-2 * decoupled.gamma * t)
        worst = max(worst, np.max(np.abs(n - analytic)))
    out.append(_check("decoupled_thermal_relaxation", worst, 1e-8))

    rates = gaussian.adiabatic_rates(0.3, -1.0, 6.4)
    out.append(_check("heating_rate_closed_form",
                      abs(rates.heating - 0.09 * 6.4 / 44.96), 1e-15))
    out.append(_check("cooling_rate_red_sideband",
                      abs(rates.cooling - 0.09 / 6.4), 1e-15))

    out.append(_check("kappa_switch_field_constancy", _kappa_switch_defect(), 1e-6))
    return out


def _kappa_switch_defect() -> float:
    """Integrate the driven-cavity mean field across a linewidth step."""
    from scipy.integrate import solve_ivp

    delta, k0, k1 = -1.0, 0.05, 0.4
    alpha0 = 1.0 + 0.3j
    alpha1 = excitation.kappa_switch_amplitude(alpha0, k0, k1, delta)
    tau = 400.0

    def rhs(t, y):
        kap, a_in = (k0, alpha0) if t <= tau else (k1, alpha1)
        a = y[0] + 1j * y[1]
        da = (1j * delta - kap) * a - np.sqrt(2 * kap) * a_in
        return [da.real, da.imag]

    a_ss = np.sqrt(2 * k0) * alpha0 / (1j * delta - k0)
    ts = np.linspace(0.0, 2 * tau, 2001)
    sol = solve_ivp(rhs, (0.0, 2 * tau), [a_ss.real, a_ss.imag], t_eval=ts,
                    rtol=1e-10, atol=1e-12)
    mag = np.hypot(sol.y[0], sol.y[1])
    settled = ts > tau + 10.0 / k1
    return float(np.max(np.abs(mag[settled] - abs(a_ss))))


def full_checks(seed: int = 12345, threads: int = 1) -> list[CheckResult]:
    out = []
    N = 20
    basis = modes.build_basis(N)
    params = _demo_params(N)
    beta = effective.beta_spectrum(params, basis)

    cfg = dict(N=N, source=6, active_mode=1, time=np.pi, seed=seed)
    plain = walks.run_walk(walks.WalkConfig(**cfg, realizations=1), basis, beta)
    eps1 = basis.epsilon[0]
    closed = np.where(np.arange(N) == 5, (1 - 2 * eps1[5] ** 2) ** 2,
                      4 * eps1 ** 2 * eps1[5] ** 2)
    out.append(_check("walk_reflection_profile", np.max(np.abs(plain.mean - closed)), 1e-9))

    phase = walks.run_walk(walks.WalkConfig(**cfg, randomization="phase", sigma=np.pi,
                                            realizations=10000), basis, beta, threads=threads)
    trans = walks.run_walk(walks.WalkConfig(**cfg, randomization="transmissivity", sigma=np.pi,
                                            realizations=10000), basis, beta, threads=threads)
    off = np.arange(N) != 5
    out.append(_check("walk_phase_flattening",
                      np.std(phase.mean[off]) / np.std(plain.mean), 0.25))
    out.append(_check("walk_transmissivity_localization",
                      trans.mean[5] - np.max(trans.mean[off]), 0.0, ">"))

    def entropy(p):
        q = p / p.sum()
        q = q[q > 1e-300]
        return float(-(q * np.log(q)).sum())

    out.append(_check("walk_entropy_ordering",
                      1.0 if entropy(phase.mean) > entropy(plain.mean) > entropy(trans.mean)
                      else 0.0, 0.5, ">"))

    again = walks.run_walk(walks.WalkConfig(**cfg, randomization="phase", sigma=np.pi,
                                            realizations=2000), basis, beta, threads=threads)
    again2 = walks.run_walk(walks.WalkConfig(**cfg, randomization="phase", sigma=np.pi,
                                             realizations=2000), basis, beta, threads=max(2, threads))
    out.append(_check("walk_determinism_across_workers",
                      float(np.max(np.abs(again.mean - again2.mean))), 0.0, "<="))

    flat = gaussian.heat_experiment(params, basis, hot_element=6, excess=0.0)
    out.append(_check("heat_uniform_bath_flatness",
                      np.max(np.abs(flat.occupations - 10.0)) / 10.0, 0.05))

    hot = gaussian.heat_experiment(params, basis, hot_element=6, excess=20.0)
    rts = gaussian.rise_times(hot)
    sel = np.abs(basis.epsilon[0]) > 0.1
    sel[5] = False
    out.append(_check("heat_rise_time_spread", rts[sel].max() / rts[sel].min(), 3.0))

    nn = gaussian.heat_experiment(params, basis, hot_element=6, excess=20.0,
                                  model="nearest_neighbor", nn_strength=0.3)
    rts_nn = gaussian.rise_times(nn)
    dist = np.abs(np.arange(1, N + 1) - 6)
    ok = all(rts_nn[j] < rts_nn[k]
             for j in range(N) for k in range(N)
             if j != 5 and k != 5 and dist[j] < dist[k])
    out.append(_check("heat_conduction_monotone", 1.0 if ok else 0.0, 0.5, ">"))

    sched = excitation.Schedule((excitation.Segment(g=[0.1, 0, 0], duration=2 * np.pi / 0.1),))
    p_ok = SystemParams(N=4, gamma=1e-6, kappa=1e-3, delta=[-1.0] * 3, g=[0.0] * 3,
                        nbar=[0.0] * 4)
    rep = excitation.dissipative_check(sched, 1, p_ok, samples=200)
    out.append(_check("shuttle_dissipative_bound", rep.max_deviation, 0.05))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p_bad = SystemParams(N=4, gamma=1e-6, kappa=0.5, delta=[-1.0] * 3, g=[0.0] * 3,
                             nbar=[0.0] * 4)
        rep_bad = excitation.dissipative_check(sched, 1, p_bad, samples=200)
    out.append(_check("shuttle_dissipative_negative_control", rep_bad.max_deviation, 0.05, ">"))

    cross_params = SystemParams(N=2, gamma=0.0, kappa=20.0, delta=[-1.0], g=[0.02], nbar=[0.0, 0.0])
    rep = gaussian.elimination_crosscheck(cross_params)
    energy_fit = 2.0 * rep.amplitude_decay_fit
    predicted = cross_params.gamma + 2.0 * (rep.rates.cooling - rep.rates.heating)
    out.append(_check("elimination_decay_rate", abs(energy_fit - predicted) / predicted, 0.10))
    return out


def run_validation(level: str = "fast", seed: int = 12345, threads: int = 1) -> list[CheckResult]:
    checks = fast_checks()
    if level == "full":
        checks += full_checks(seed=seed, threads=threads)
    return checks
