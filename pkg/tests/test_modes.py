import numpy as np
import pytest

from omarray import (ContractError, ParameterError, SystemParams, build_basis,
                     coupling_matrix, coupling_vector, independent_mode_count,
                     lambda_from_g, lambda_matrix)

SQ2 = 1.0 / np.sqrt(2.0)


class TestCouplingVector:
    def test_four_elements_first_mode(self):
        np.testing.assert_allclose(coupling_vector(4, 1), [0.5, 0.5, -0.5, -0.5], atol=1e-15)

    def test_three_elements_first_mode(self):
        # direct evaluation: sin(pi/3), sin(pi), sin(5pi/3), normalized
        np.testing.assert_allclose(coupling_vector(3, 1), [SQ2, 0.0, -SQ2], atol=1e-15)

    def test_two_elements(self):
        np.testing.assert_allclose(coupling_vector(2, 1), [SQ2, -SQ2], atol=1e-15)

    def test_partner_modes_identical(self):
        np.testing.assert_array_equal(coupling_vector(6, 2), coupling_vector(6, 4))
        np.testing.assert_array_equal(coupling_vector(6, 1), coupling_vector(6, 5))

    def test_four_elements_all_half_magnitude(self):
        for l in range(1, 4):
            np.testing.assert_allclose(np.abs(coupling_vector(4, l)), 0.5, atol=1e-12)

    @pytest.mark.parametrize("N", range(2, 21))
    def test_unit_norm_and_symmetry(self, N):
        for l in range(1, N):
            v = coupling_vector(N, l)
            assert abs(np.linalg.norm(v) - 1.0) < 1e-12
            np.testing.assert_allclose(v, coupling_vector(N, N - l), atol=1e-15)

    @pytest.mark.parametrize("N", [3, 5, 7, 9, 11])
    def test_odd_center_element_dark(self, N):
        assert abs(coupling_vector(N, 1)[(N + 1) // 2 - 1]) < 1e-12

    def test_first_nonzero_entry_positive(self):
        for N in range(2, 12):
            for l in range(1, N):
                v = coupling_vector(N, l)
                assert v[np.flatnonzero(np.abs(v) > 1e-12)[0]] > 0

    def test_rejects_bad_indices(self):
        with pytest.raises(ParameterError):
            coupling_vector(1, 1)
        with pytest.raises(ParameterError):
            coupling_vector(5, 0)
        with pytest.raises(ParameterError):
            coupling_vector(5, 5)


class TestCouplingMatrix:
    def test_two_element_outer_product(self):
        E = coupling_matrix(coupling_vector(2, 1))
        np.testing.assert_allclose(E, 0.5 * np.array([[1, -1], [-1, 1]]), atol=1e-15)

    def test_unit_trace_and_projector(self):
        for N, l in [(3, 1), (6, 2), (9, 4), (12, 6)]:
            E = coupling_matrix(coupling_vector(N, l))
            assert abs(np.trace(E) - 1.0) < 1e-12
            assert np.max(np.abs(E @ E - E)) < 1e-12
            np.testing.assert_allclose(E, E.T, atol=1e-15)

    def test_rejects_non_unit_norm(self):
        with pytest.raises(ContractError):
            coupling_matrix(np.array([1.0, 1.0]))


class TestBuildBasis:
    def test_two_element_basis(self):
        b = build_basis(2)
        assert b.l0 == 1
        np.testing.assert_allclose(b.P, [[SQ2, -SQ2], [SQ2, SQ2]], atol=1e-15)

    def test_six_elements_three_independent(self):
        assert build_basis(6).l0 == 3

    @pytest.mark.parametrize("N", range(2, 21))
    def test_orthogonality(self, N):
        b = build_basis(N)
        assert b.l0 == independent_mode_count(N)
        assert np.max(np.abs(b.P @ b.P.T - np.eye(N))) < 1e-12
        assert np.max(np.abs(b.P.T @ b.P - np.eye(N))) < 1e-12
        np.testing.assert_allclose(b.P[: b.l0], b.epsilon[: b.l0], atol=1e-15)

    @pytest.mark.parametrize("N", range(2, 21))
    def test_profile_rows_orthonormal(self, N):
        b = build_basis(N)
        gram = b.epsilon[: b.l0] @ b.epsilon[: b.l0].T
        assert np.max(np.abs(gram - np.eye(b.l0))) < 1e-10


class TestLambdaMatrix:
    def test_zero_amplitudes_give_zero_matrix(self):
        basis = build_basis(5)
        lam = lambda_from_g(np.zeros(4), basis)
        assert np.max(np.abs(lam.entries)) == 0.0

    def test_two_element_row(self):
        basis = build_basis(2)
        omega_r = 0.7
        lam = lambda_from_g([omega_r], basis)
        np.testing.assert_allclose(lam.entries, 1j * omega_r * np.array([[SQ2, -SQ2]]), atol=1e-15)
        gram = lam.entries @ lam.entries.conj().T
        assert abs(gram[0, 0] - omega_r**2) < 1e-14

    def test_singular_values_orthogonal_modes(self):
        basis = build_basis(4)
        lam = lambda_from_g([0.3, 0.3, 0.0], basis)
        sv = np.linalg.svd(lam.entries, compute_uv=False)
        np.testing.assert_allclose(sorted(sv), [0.0, 0.3, 0.3], atol=1e-12)

    def test_params_entry_point_checks_dimensions(self):
        params = SystemParams(N=3, gamma=0.0, kappa=1.0, delta=[-1, -1],
                              g=[0.1, 0.0], nbar=[0, 0, 0])
        lam = lambda_matrix(params, build_basis(3))
        assert lam.entries.shape == (2, 3)
        with pytest.raises(ParameterError):
            lambda_matrix(params, build_basis(4))


class TestSystemParams:
    def test_validation(self):
        with pytest.raises(ParameterError):
            SystemParams(N=1, gamma=0, kappa=1, delta=[], g=[], nbar=[0])
        with pytest.raises(ParameterError):
            SystemParams(N=2, gamma=-1, kappa=1, delta=[-1], g=[0], nbar=[0, 0])
        with pytest.raises(ParameterError):
            SystemParams(N=2, gamma=0, kappa=0, delta=[-1], g=[0], nbar=[0, 0])
        with pytest.raises(ParameterError):
            SystemParams(N=2, gamma=0, kappa=1, delta=[-1, -1], g=[0], nbar=[0, 0])
        with pytest.raises(ParameterError):
            SystemParams(N=2, gamma=0, kappa=1, delta=[-1], g=[0], nbar=[0, -1])

    def test_arrays_are_immutable(self):
        p = SystemParams(N=2, gamma=0, kappa=1, delta=[-1], g=[0.1], nbar=[0, 0])
        with pytest.raises(ValueError):
            p.delta[0] = 5.0
