import numpy as np
import pytest

from omarray import (BeamSplitter, ContractError, MeshNetwork, ParameterError,
                     PhaseShifter, build_basis, reck_compose, reck_decompose)


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestDecompose:
    def test_identity_gives_canonical_zero_mesh(self):
        mesh = reck_decompose(np.eye(4))
        assert len(mesh.beamsplitters()) == 6
        assert len(mesh.phase_shifters()) == 4
        assert all(e.theta == 0.0 and e.phi == 0.0 for e in mesh.beamsplitters())
        assert all(e.phase == 0.0 for e in mesh.phase_shifters())

    def test_real_rotation_single_beamsplitter(self):
        th = 0.7
        R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
        mesh = reck_decompose(R)
        (bs,) = mesh.beamsplitters()
        assert abs(bs.theta - th) < 1e-14
        assert bs.phi == 0.0
        assert all(p.phase == 0.0 for p in mesh.phase_shifters())

    def test_rejects_non_unitary(self):
        with pytest.raises(ContractError):
            reck_decompose(np.array([[1.0, 0.0], [0.0, 1.1]]))

    def test_element_counts_fixed(self):
        rng = np.random.default_rng(3)
        for n in range(2, 8):
            mesh = reck_decompose(random_unitary(n, rng))
            assert len(mesh.beamsplitters()) == n * (n - 1) // 2
            assert len(mesh.phase_shifters()) == n

    def test_real_orthogonal_stays_real(self):
        # the similarity matrix decomposes with phases in {0, pi} only
        for N in (2, 5, 8, 13):
            mesh = reck_decompose(build_basis(N).P.astype(complex))
            for bs in mesh.beamsplitters():
                assert min(abs(bs.phi), abs(abs(bs.phi) - np.pi)) < 1e-12
            for ps in mesh.phase_shifters():
                assert min(abs(ps.phase), abs(abs(ps.phase) - np.pi)) < 1e-12


class TestCompose:
    def test_empty_mesh_is_identity(self):
        np.testing.assert_array_equal(reck_compose(MeshNetwork(3, [])), np.eye(3))

    def test_single_phase_shifter(self):
        U = reck_compose(MeshNetwork(3, [PhaseShifter(1, 0.4)]))
        expected = np.diag([1.0, np.exp(0.4j), 1.0])
        np.testing.assert_allclose(U, expected, atol=1e-15)

    def test_single_beamsplitter_block(self):
        U = reck_compose(MeshNetwork(2, [BeamSplitter(0, 1, 0.3, 0.0)]))
        c, s = np.cos(0.3), np.sin(0.3)
        np.testing.assert_allclose(U, [[c, -s], [s, c]], atol=1e-15)

    def test_composition_is_unitary(self):
        rng = np.random.default_rng(8)
        els = [BeamSplitter(0, 1, rng.uniform(-3, 3), rng.uniform(-3, 3)),
               PhaseShifter(2, 1.1), BeamSplitter(1, 2, 0.5, -0.2)]
        U = reck_compose(MeshNetwork(3, els))
        assert np.max(np.abs(U.conj().T @ U - np.eye(3))) < 1e-12


class TestRoundTrip:
    def test_thousand_random_unitaries(self):
        rng = np.random.default_rng(17)
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            U = random_unitary(n, rng)
            worst = max(worst, np.max(np.abs(reck_compose(reck_decompose(U)) - U)))
        assert worst < 1e-10

    def test_similarity_matrices(self):
        for N in range(2, 16):
            P = build_basis(N).P.astype(complex)
            err = np.max(np.abs(reck_compose(reck_decompose(P)) - P))
            assert err < 1e-12


class TestElements:
    def test_beamsplitter_requires_adjacent_modes(self):
        with pytest.raises(ParameterError):
            BeamSplitter(0, 2, 0.1, 0.0)

    def test_with_thetas_replaces_in_order(self):
        mesh = reck_decompose(build_basis(3).P.astype(complex))
        new = mesh.with_thetas(np.zeros(3))
        assert all(b.theta == 0.0 for b in new.beamsplitters())
        assert [p.phase for p in new.phase_shifters()] == \
               [p.phase for p in mesh.phase_shifters()]
