"""Dense complex linear algebra and small quantum-state utilities.

All matrices are plain ``numpy.ndarray`` with dtype complex128.  The
project-wide index conventions are fixed here and asserted by the test
suite:

* two-qubit computational basis order |00>, |01>, |10>, |11>, with qubit A
  as the slow index (composite index = 2*a + b);
* process (Choi) matrices live on input (x) output, input slow
  (composite index = 4*i_in + i_out);
* tensor products are Kronecker products in row-major order, so the row
  index of the first factor is the slow index.

Dimensions beyond 16 are out of contract; everything here is meant for
2x2, 4x4 and 16x16 matrices.
"""

from __future__ import annotations

import numpy as np

#: Default numerical tolerance for property checks on dims <= 16.
EPS = 1e-9

# Single-qubit kets used throughout: computational, diagonal, circular.
KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
KET_MINUS = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
KET_R = np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0)
KET_L = np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def ket(*amplitudes) -> np.ndarray:
    """Build a complex column vector from amplitudes."""
    return np.asarray(amplitudes, dtype=complex)


def basis_state(dim: int, index: int) -> np.ndarray:
    """Computational basis vector |index> in the given dimension."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def ketbra(a: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    """Outer product |a><b| (|a><a| when b is omitted)."""
    if b is None:
        b = a
    return np.outer(np.asarray(a, dtype=complex), np.conj(b))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor as the slow index.

    (a (x) b)[2i+k, 2j+l] = a[i, j] * b[k, l] for 2x2 factors, and the
    analogous index formula for other shapes.
    """
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def transpose_in_computational_basis(m: np.ndarray) -> np.ndarray:
    """Plain transpose (no conjugation) in the computational basis."""
    return np.array(m, dtype=complex).T.copy()


def partial_trace_in(m: np.ndarray) -> np.ndarray:
    """Trace out the input factor of a 16x16 operator on input (x) output.

    The 16x16 matrix is interpreted with composite index 4*i_in + i_out;
    the returned 4x4 matrix acts on the output two-qubit space.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (16, 16):
        raise ValueError(f"partial_trace_in expects a 16x16 matrix, got {m.shape}")
    return np.einsum("iaib->ab", m.reshape(4, 4, 4, 4))


def is_hermitian(m: np.ndarray, eps: float = EPS) -> bool:
    """Hermitian test: max |m - m^dag| <= eps."""
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= eps)


def is_unitary(m: np.ndarray, eps: float = EPS) -> bool:
    """Unitarity test: max |m^dag m - I| <= eps."""
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= eps)


def is_positive_semidefinite(m: np.ndarray, eps: float = EPS) -> bool:
    """PSD test: Hermitian within eps and all eigenvalues >= -eps."""
    if not is_hermitian(m, eps):
        return False
    w = np.linalg.eigvalsh(0.5 * (m + np.asarray(m).conj().T))
    return bool(w.min() >= -eps)


def eigendecompose_hermitian(m: np.ndarray, eps: float = EPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix Q with eigenvectors
    as columns) such that m = Q diag(w) Q^dag.  Raises ValueError when the
    input is not Hermitian within eps.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, eps):
        dev = np.max(np.abs(m - m.conj().T))
        raise ValueError(f"matrix is not Hermitian within {eps} (deviation {dev:.3e})")
    w, q = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, q


def normalize(state: np.ndarray) -> np.ndarray:
    """Return state / ||state||."""
    state = np.asarray(state, dtype=complex)
    n = np.linalg.norm(state)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return state / n


def is_normalized(state: np.ndarray, eps: float = EPS) -> bool:
    return bool(abs(np.linalg.norm(state) - 1.0) <= eps)


def two_qubit_product(ket_a: np.ndarray, ket_b: np.ndarray) -> np.ndarray:
    """|a>|b> with qubit A as the slow index."""
    return np.kron(np.asarray(ket_a, dtype=complex), np.asarray(ket_b, dtype=complex))
