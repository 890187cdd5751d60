import numpy as np
import pytest

from weakcz import qmath


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, dim):
    g = random_complex(rng, (dim, dim))
    return g + g.conj().T


class TestConventions:
    def test_two_qubit_basis_order(self):
        # |01> = |0>_A |1>_B sits at composite index 1: qubit A is the slow index
        v = qmath.two_qubit_product(qmath.KET_0, qmath.KET_1)
        assert np.allclose(v, [0, 1, 0, 0])
        v = qmath.two_qubit_product(qmath.KET_1, qmath.KET_0)
        assert np.allclose(v, [0, 0, 1, 0])

    def test_tensor_row_major_index(self):
        rng = np.random.default_rng(1)
        a = random_complex(rng, (2, 2))
        b = random_complex(rng, (2, 2))
        ab = qmath.tensor(a, b)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        assert ab[2 * i + k, 2 * j + l] == pytest.approx(a[i, j] * b[k, l])

    def test_choi_index_input_slow(self):
        # operator |in=3, out=2><...| lands at row 4*3 + 2 = 14
        m = qmath.tensor(qmath.ketbra(qmath.basis_state(4, 3)),
                         qmath.ketbra(qmath.basis_state(4, 2)))
        assert m[14, 14] == pytest.approx(1.0)
        assert np.trace(m) == pytest.approx(1.0)


class TestTensor:
    def test_identity_case(self):
        assert np.array_equal(qmath.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_z_with_identity(self):
        assert np.allclose(qmath.tensor(qmath.SIGMA_Z, np.eye(2)),
                           np.diag([1, 1, -1, -1]))

    def test_associativity_exact_on_exact_entries(self):
        rng = np.random.default_rng(2)
        a, b, c = (
            rng.integers(-4, 5, (2, 2)) + 1j * rng.integers(-4, 5, (2, 2))
            for _ in range(3)
        )
        left = qmath.tensor(qmath.tensor(a, b), c)
        right = qmath.tensor(a, qmath.tensor(b, c))
        assert np.array_equal(left, right)

    def test_associativity_within_rounding(self):
        rng = np.random.default_rng(2)
        a, b, c = (random_complex(rng, (2, 2)) for _ in range(3))
        left = qmath.tensor(qmath.tensor(a, b), c)
        right = qmath.tensor(a, qmath.tensor(b, c))
        assert np.allclose(left, right, rtol=1e-15, atol=0.0)


class TestPartialTraceIn:
    def test_product_state_factorization(self):
        rng = np.random.default_rng(3)
        rho = random_hermitian(rng, 4)
        sigma = random_hermitian(rng, 4)
        out = qmath.partial_trace_in(qmath.tensor(rho, sigma))
        assert np.allclose(out, np.trace(rho) * sigma)

    def test_identity(self):
        assert np.allclose(qmath.partial_trace_in(np.eye(16)), 4 * np.eye(4))

    def test_trace_preservation(self):
        rng = np.random.default_rng(4)
        m = random_hermitian(rng, 16)
        assert np.trace(qmath.partial_trace_in(m)) == pytest.approx(np.trace(m))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            qmath.partial_trace_in(np.eye(4))


class TestTranspose:
    def test_diagonal_fixed(self):
        d = np.diag([1.0, 2.0, 3.0]).astype(complex)
        assert np.array_equal(qmath.transpose_in_computational_basis(d), d)

    def test_involution(self):
        rng = np.random.default_rng(5)
        m = random_complex(rng, (4, 4))
        tt = qmath.transpose_in_computational_basis(
            qmath.transpose_in_computational_basis(m))
        assert np.array_equal(tt, m)

    def test_ketbra_transpose(self):
        m = qmath.ketbra(qmath.KET_0, qmath.KET_1)  # |0><1|
        assert np.array_equal(qmath.transpose_in_computational_basis(m),
                              qmath.ketbra(qmath.KET_1, qmath.KET_0))


class TestEigendecomposeHermitian:
    def test_diagonal(self):
        w, _ = qmath.eigendecompose_hermitian(np.diag([1.0, 2.0, 3.0, 4.0]))
        assert np.allclose(w, [1, 2, 3, 4])

    def test_sigma_x(self):
        w, _ = qmath.eigendecompose_hermitian(qmath.SIGMA_X)
        assert np.allclose(w, [-1, 1])

    def test_reconstruction(self):
        rng = np.random.default_rng(6)
        m = random_hermitian(rng, 16)
        w, q = qmath.eigendecompose_hermitian(m)
        rebuilt = (q * w) @ q.conj().T
        assert np.linalg.norm(rebuilt - m) <= 1e-10 * np.linalg.norm(m)
        assert np.max(np.abs(w.imag)) if np.iscomplexobj(w) else 0.0 <= 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            qmath.eigendecompose_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestChecks:
    def test_unitary_and_hermitian(self):
        assert qmath.is_unitary(qmath.SIGMA_Y)
        assert qmath.is_hermitian(qmath.SIGMA_Y)
        assert not qmath.is_unitary(2 * np.eye(2))

    def test_psd(self):
        rng = np.random.default_rng(7)
        g = random_complex(rng, (4, 4))
        assert qmath.is_positive_semidefinite(g @ g.conj().T)
        assert not qmath.is_positive_semidefinite(-np.eye(4))

    def test_normalize(self):
        v = qmath.normalize(np.array([3.0, 4.0]))
        assert qmath.is_normalized(v)
        with pytest.raises(ValueError):
            qmath.normalize(np.zeros(2))
