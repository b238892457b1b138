import numpy as np
import pytest

from omarray import (BetaSpectrum, ParameterError, WalkConfig, build_basis,
                     run_classical_walk, run_walk)


@pytest.fixture(scope="module")
def basis20():
    return build_basis(20)


@pytest.fixture(scope="module")
def beta20():
    return BetaSpectrum(np.concatenate([[0.01], np.zeros(19)]))


def cfg20(**kw):
    base = dict(N=20, source=6, active_mode=1, time=np.pi)
    base.update(kw)
    return WalkConfig(**base)


class TestPlainWalk:
    def test_zero_time_is_delta_at_source(self, basis20, beta20):
        res = run_walk(cfg20(time=0.0), basis20, beta20)
        expected = np.zeros(20)
        expected[5] = 1.0
        np.testing.assert_allclose(res.mean, expected, atol=1e-12)

    def test_half_period_reflection_profile(self, basis20, beta20):
        # beta_1 t = pi turns the propagator into I - 2 eps_1 eps_1^T
        res = run_walk(cfg20(), basis20, beta20)
        eps1 = basis20.epsilon[0]
        expected = 4.0 * eps1**2 * eps1[5] ** 2
        expected[5] = (1.0 - 2.0 * eps1[5] ** 2) ** 2
        np.testing.assert_allclose(res.mean, expected, atol=1e-9)

    def test_population_conserved(self, basis20, beta20):
        res = run_walk(cfg20(time=1.234), basis20, beta20)
        assert abs(res.realizations.sum() - 1.0) < 1e-9

    def test_negative_beta_active_mode(self, basis20):
        # the demo drive produces a negative beta; the half-period reflection
        # must come out the same because only beta * t enters
        beta_neg = BetaSpectrum(np.concatenate([[-4.0e-3], np.zeros(19)]))
        beta_pos = BetaSpectrum(np.concatenate([[4.0e-3], np.zeros(19)]))
        a = run_walk(cfg20(), basis20, beta_neg)
        b = run_walk(cfg20(), basis20, beta_pos)
        np.testing.assert_allclose(a.mean, b.mean, atol=1e-12)

    def test_zero_active_beta_rejected(self, basis20):
        with pytest.raises(ParameterError):
            run_walk(cfg20(active_mode=2), basis20,
                     BetaSpectrum(np.concatenate([[0.01], np.zeros(19)])))


class TestRandomizedWalks:
    def test_sigma_zero_identical_to_plain(self, basis20, beta20):
        plain = run_walk(cfg20(), basis20, beta20)
        for mode in ("phase", "transmissivity"):
            res = run_walk(cfg20(randomization=mode, sigma=0.0, realizations=4, seed=9),
                           basis20, beta20)
            np.testing.assert_array_equal(res.mean, plain.mean)

    def test_seeded_reproducibility_across_threads(self, basis20, beta20):
        kw = dict(randomization="phase", sigma=np.pi, realizations=1500, seed=77)
        a = run_walk(cfg20(**kw), basis20, beta20, threads=1)
        b = run_walk(cfg20(**kw), basis20, beta20, threads=4)
        np.testing.assert_array_equal(a.mean, b.mean)
        np.testing.assert_array_equal(a.realizations, b.realizations)

    def test_different_seeds_differ(self, basis20, beta20):
        a = run_walk(cfg20(randomization="phase", sigma=np.pi, realizations=100, seed=1),
                     basis20, beta20)
        b = run_walk(cfg20(randomization="phase", sigma=np.pi, realizations=100, seed=2),
                     basis20, beta20)
        assert np.max(np.abs(a.mean - b.mean)) > 0

    def test_per_realization_conservation(self, basis20, beta20):
        for mode in ("phase", "transmissivity"):
            res = run_walk(cfg20(randomization=mode, sigma=np.pi, realizations=300, seed=5),
                           basis20, beta20)
            np.testing.assert_allclose(res.realizations.sum(axis=1), 1.0, atol=1e-9)

    def test_phase_flattens_transmissivity_localizes(self, basis20, beta20):
        plain = run_walk(cfg20(), basis20, beta20)
        phase = run_walk(cfg20(randomization="phase", sigma=np.pi, realizations=2000, seed=3),
                         basis20, beta20)
        trans = run_walk(cfg20(randomization="transmissivity", sigma=np.pi,
                               realizations=2000, seed=4), basis20, beta20)
        off = np.arange(20) != 5
        assert np.std(phase.mean[off]) < 0.25 * np.std(plain.mean)
        assert trans.mean[5] > np.max(trans.mean[off])

    def test_invalid_mode_rejected(self):
        with pytest.raises(ParameterError):
            WalkConfig(N=20, source=6, active_mode=1, time=0.0, randomization="bogus")


class TestClassicalWalk:
    def test_zero_time_is_delta(self, basis20, beta20):
        res = run_classical_walk(cfg20(time=0.0), basis20, beta20)
        expected = np.zeros(20)
        expected[5] = 1.0
        np.testing.assert_allclose(res.mean, expected, atol=1e-12)

    def test_population_conserved(self, basis20, beta20):
        res = run_classical_walk(cfg20(), basis20, beta20)
        assert abs(res.mean.sum() - 1.0) < 1e-10

    def test_less_profile_like_than_coherent(self, basis20, beta20):
        # the coherent off-source populations follow the mode profile almost
        # perfectly; the classical transport does not
        coherent = run_walk(cfg20(), basis20, beta20)
        classical = run_classical_walk(cfg20(), basis20, beta20)
        eps1 = basis20.epsilon[0]
        profile = eps1**2 / np.sum(eps1**2)
        off = np.arange(20) != 5

        def corr(p):
            return np.corrcoef(p[off], profile[off])[0, 1]

        assert corr(coherent.mean) > 0.999
        assert corr(classical.mean) < 0.995
        l1_classical = np.abs(classical.mean - profile).sum()
        l1_coherent = np.abs(coherent.mean - profile).sum()
        assert l1_classical > 1.15 * l1_coherent
