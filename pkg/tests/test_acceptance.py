"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import json
from contextlib import contextmanager

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.linalg import expm

import omarray as om
from omarray.cli import main as cli_main


@contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number}: FAIL - {label}")
        raise
    print(f"ACCEPTANCE {number}: PASS - {label}")


@pytest.fixture(scope="module")
def basis20():
    return om.build_basis(20)


@pytest.fixture(scope="module")
def demo_params20():
    return om.SystemParams(N=20, gamma=5e-5, kappa=6.4, delta=[-1.0] * 19,
                           g=[0.3] + [0.0] * 18, nbar=[10.0] * 20)


def test_criterion_1_mode_structure():
    with criterion(1, "mode structure: N=4 half-magnitude profiles, N=6 partner equality"):
        for l in range(1, 4):
            assert np.max(np.abs(np.abs(om.coupling_vector(4, l)) - 0.5)) < 1e-12
        np.testing.assert_array_equal(om.coupling_vector(6, 2), om.coupling_vector(6, 4))
        np.testing.assert_array_equal(om.coupling_vector(6, 1), om.coupling_vector(6, 5))


def test_criterion_2_propagator_oracle():
    with criterion(2, "diagonal propagator equals dense matrix exponential to 1e-10"):
        rng = np.random.default_rng(1002)
        worst = 0.0
        for _ in range(100):
            N = int(rng.integers(2, 13))
            basis = om.build_basis(N)
            vals = np.zeros(N)
            vals[: basis.l0] = rng.normal(size=basis.l0)
            beta = om.BetaSpectrum(vals)
            t = float(rng.uniform(-30.0, 30.0))
            U = om.propagator(basis, beta, t)
            H = om.effective_hamiltonian(basis, beta)
            worst = max(worst, np.max(np.abs(U - expm(-1j * H * t))))
        assert worst < 1e-10


def test_criterion_3_mesh_roundtrip():
    with criterion(3, "mesh decomposition round trip below 1e-10 on 1000 unitaries"):
        rng = np.random.default_rng(1003)
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            q = np.linalg.qr(z)[0]
            worst = max(worst, np.max(np.abs(om.reck_compose(om.reck_decompose(q)) - q)))
        assert worst < 1e-10


def test_criterion_4_walk_reproduction(basis20):
    with criterion(4, "walk: reflection profile, phase flattening, transmissivity "
                      "localization, entropy ordering"):
        beta = om.BetaSpectrum(np.concatenate([[-4.0036e-3], np.zeros(19)]))

        def cfg(**kw):
            base = dict(N=20, source=6, active_mode=1, time=np.pi, seed=20240604)
            base.update(kw)
            return om.WalkConfig(**base)

        plain = om.run_walk(cfg(), basis20, beta)
        eps1 = basis20.epsilon[0]
        closed = 4.0 * eps1**2 * eps1[5] ** 2
        closed[5] = (1.0 - 2.0 * eps1[5] ** 2) ** 2
        off = np.arange(20) != 5
        assert np.max(np.abs(plain.mean[off] - closed[off])) < 1e-9

        phase = om.run_walk(cfg(randomization="phase", sigma=np.pi, realizations=10000),
                            basis20, beta)
        assert np.std(phase.mean[off]) < 0.25 * np.std(plain.mean)

        trans = om.run_walk(cfg(randomization="transmissivity", sigma=np.pi,
                                realizations=10000), basis20, beta)
        assert trans.mean[5] > np.max(trans.mean[off])

        def entropy(p):
            q = p / p.sum()
            q = q[q > 1e-300]
            return -(q * np.log(q)).sum()

        assert entropy(phase.mean) > entropy(plain.mean) > entropy(trans.mean)


def test_criterion_5_heat_steady_state(basis20, demo_params20):
    with criterion(5, "uniform-bath steady occupations within 5% of nbar, "
                      "Lyapunov residual below 1e-9"):
        dd = om.build_drift_diffusion(demo_params20, basis20)
        ss = om.steady_state(dd)
        occ = om.occupations(ss, count=20)
        assert np.max(np.abs(occ - 10.0) / 10.0) < 0.05
        res = np.max(np.abs(dd.A @ ss.V + ss.V @ dd.A.T + dd.D))
        assert res < 1e-9 * np.max(np.abs(dd.D))


def test_criterion_6_simultaneity_vs_conduction(basis20, demo_params20):
    with criterion(6, "optically mediated flow is near-simultaneous; hopping baseline "
                      "conducts outward; central elements least affected"):
        hot = om.heat_experiment(demo_params20, basis20, hot_element=6, excess=20.0)
        rts = om.rise_times(hot)
        sel = np.abs(basis20.epsilon[0]) > 0.1
        sel[5] = False
        assert np.isfinite(rts[sel]).all()
        assert rts[sel].max() / rts[sel].min() < 3.0

        nn = om.heat_experiment(demo_params20, basis20, hot_element=6, excess=20.0,
                                model="nearest_neighbor", nn_strength=0.3)
        rts_nn = om.rise_times(nn)
        dist = np.abs(np.arange(1, 21) - 6)
        for j in range(20):
            for k in range(20):
                if j != 5 and k != 5 and dist[j] < dist[k]:
                    assert rts_nn[j] < rts_nn[k], (j + 1, k + 1)

        # for this even array the edge elements are exactly as dark as the
        # central pair, so "smallest change" is a joint minimum up to a tie
        change = np.abs(hot.occupations[-1] - 10.0)
        change[5] = np.inf
        tie = 1e-3 * change.min() + 1e-12
        assert change[9] <= change.min() + tie
        assert change[10] <= change.min() + tie


def test_criterion_7_exchange_propagator_oracle():
    with criterion(7, "block propagator equals generator exponential to 1e-8, "
                      "unitary to 1e-10, blocks anti-adjoint"):
        rng = np.random.default_rng(1007)
        worst = unit = block = 0.0
        for _ in range(100):
            N = int(rng.integers(2, 9))
            basis = om.build_basis(N)
            g = rng.normal(size=N - 1) + 1j * rng.normal(size=N - 1)
            if rng.random() < 0.5:
                g[int(rng.integers(0, N - 1))] = 0.0
            lam = om.lambda_from_g(g, basis)
            t = float(rng.uniform(0.0, 12.0))
            U = om.evolution_matrix(lam, t)
            worst = max(worst, np.max(np.abs(U - om.generator_oracle(lam, t))))
            unit = max(unit, np.max(np.abs(U.conj().T @ U - np.eye(2 * N - 1))))
            block = max(block, np.max(np.abs(U[N - 1:, : N - 1]
                                             + U[: N - 1, N - 1:].conj().T)))
        assert worst < 1e-8
        assert unit < 1e-10
        assert block < 1e-10


def test_criterion_8_shuttling():
    with criterion(8, "two-element swap, four-element transfer, dark-state invariance"):
        om_r = 0.1
        U2 = om.evolution_matrix(om.lambda_from_g([om_r], om.build_basis(2)), np.pi / om_r)
        assert np.max(np.abs(U2[1:, 1:] - np.array([[0, 1], [1, 0]]))) < 1e-10

        basis4 = om.build_basis(4)
        sched = om.Schedule((om.Segment(g=[om_r, om_r, 0.0], duration=np.pi / om_r),))
        res = om.run_schedule(sched, om.phonon_state(4, 1), np.array([np.pi / om_r]),
                              basis=basis4)
        pops = np.abs(res.amplitudes[0]) ** 2
        assert pops[6] > 0.99
        assert pops[:3].sum() < 1e-6
        assert res.switch_valid.all()

        rng = np.random.default_rng(1008)
        dark = np.zeros(7, dtype=complex)
        dark[3] = dark[6] = 1 / np.sqrt(2.0)
        for _ in range(25):
            segs = tuple(om.Segment(g=rng.normal(size=3) + 1j * rng.normal(size=3),
                                    duration=float(rng.uniform(0.0, 5.0)))
                         for _ in range(3))
            total = sum(s.duration for s in segs)
            out = om.run_schedule(om.Schedule(segs), om.AmplitudeState(dark),
                                  np.array([total]), basis=basis4)
            assert np.max(np.abs(out.amplitudes[0] - dark)) < 1e-10


def test_criterion_9_dissipative_validation():
    with criterion(9, "weak dissipation tracks the unitary prediction within 5%; "
                      "strong cavity decay does not"):
        om_r = 0.1
        sched = om.Schedule((om.Segment(g=[om_r, 0.0, 0.0], duration=2 * np.pi / om_r),))
        good = om.SystemParams(N=4, gamma=1e-6, kappa=1e-3, delta=[-1.0] * 3,
                               g=[0.0] * 3, nbar=[0.0] * 4)
        rep = om.dissipative_check(sched, 1, good, samples=300)
        assert rep.max_deviation < 0.05

        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            bad = om.SystemParams(N=4, gamma=1e-6, kappa=0.5, delta=[-1.0] * 3,
                                  g=[0.0] * 3, nbar=[0.0] * 4)
            rep_bad = om.dissipative_check(sched, 1, bad, samples=300)
        assert rep_bad.max_deviation > 0.05


def test_criterion_10_kappa_switch_matching():
    with criterion(10, "matched input amplitude keeps the cavity field constant "
                       "across a linewidth step"):
        delta, k0, k1, tau = -1.0, 0.05, 0.4, 400.0
        alpha0 = 1.0 + 0.5j
        a_ss = np.sqrt(2 * k0) * alpha0 / (1j * delta - k0)

        def run(alpha1):
            def rhs(t, y):
                kap, a_in = (k0, alpha0) if t <= tau else (k1, alpha1)
                a = y[0] + 1j * y[1]
                da = (1j * delta - kap) * a - np.sqrt(2 * kap) * a_in
                return [da.real, da.imag]

            ts = np.linspace(0.0, 2 * tau, 4001)
            sol = solve_ivp(rhs, (0.0, 2 * tau), [a_ss.real, a_ss.imag], t_eval=ts,
                            rtol=1e-10, atol=1e-12)
            mag = np.hypot(sol.y[0], sol.y[1])
            return np.max(np.abs(mag[ts > tau + 10.0 / k1] - abs(a_ss)))

        matched = om.kappa_switch_amplitude(alpha0, k0, k1, delta)
        assert run(matched) < 1e-6
        assert run(alpha0) > 1e-3


def test_criterion_11_elimination_crosscheck():
    with criterion(11, "full-model mechanical decay matches gamma + 2(cooling - heating) "
                       "within 10%"):
        gamma = 0.0
        params = om.SystemParams(N=2, gamma=gamma, kappa=20.0, delta=[-1.0], g=[0.02],
                                 nbar=[0.0, 0.0])
        rep = om.elimination_crosscheck(params)
        # occupation/energy envelope decays at twice the amplitude envelope rate
        fitted = 2.0 * rep.amplitude_decay_fit
        predicted = gamma + 2.0 * (rep.rates.cooling - rep.rates.heating)
        assert abs(fitted - predicted) / predicted < 0.10


def test_criterion_12_byte_identical_across_threads(tmp_path):
    with criterion(12, "identical (config, seed) gives byte-identical CSVs for "
                       "1, 4, and 8 worker threads"):
        cfg = tmp_path / "walk.json"
        cfg.write_text(json.dumps({"walk": {"realizations": 2000}}))
        blobs = []
        for i, threads in enumerate((1, 4, 8)):
            out = tmp_path / f"run{i}"
            code = cli_main(["walk", "--config", str(cfg), "--out", str(out),
                             "--seed", "31415926", "--threads", str(threads)])
            assert code == 0
            blob = b""
            for variant in ("none", "phase", "transmissivity", "classical"):
                blob += (out / f"walk_{variant}.csv").read_bytes()
            blobs.append(blob)
        assert blobs[0] == blobs[1] == blobs[2]
