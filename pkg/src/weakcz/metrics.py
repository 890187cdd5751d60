"""Figures of merit for probabilistic two-qubit operations.

A process matrix chi is a positive semidefinite operator on the 16-dim
input (x) output space (input slow); chi is in general not trace
normalized and Tr[chi] / 4 is the average success probability of the
post-selected operation.

The process fidelity with respect to a reference gate is

    F_chi = Tr[chi chi_ref] / (Tr[chi] Tr[chi_ref])

and the Hofmann construction bounds it from below via average state
fidelities over two mutually unbiased product bases:

    F_chi >= F_1 + F_2 - 1 = F_H,   F_j = sum_k p_jk f_jk / sum_k p_jk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmath
from .qmath import KET_0, KET_1, KET_MINUS, KET_PLUS, two_qubit_product

U_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class ProbeBasis:
    """Four orthonormal two-qubit product states."""

    label: str
    states: tuple[np.ndarray, ...]

    def __post_init__(self):
        resolution = sum(qmath.ketbra(s) for s in self.states)
        if np.max(np.abs(resolution - np.eye(4))) > qmath.EPS:
            raise ValueError(f"probe basis {self.label} does not resolve the identity")


#: A in the computational basis, B in the diagonal basis.
PROBE_BASIS_ZX = ProbeBasis(
    "ZX",
    (
        two_qubit_product(KET_0, KET_PLUS),
        two_qubit_product(KET_0, KET_MINUS),
        two_qubit_product(KET_1, KET_PLUS),
        two_qubit_product(KET_1, KET_MINUS),
    ),
)

#: A in the diagonal basis, B in the computational basis.
PROBE_BASIS_XZ = ProbeBasis(
    "XZ",
    (
        two_qubit_product(KET_PLUS, KET_0),
        two_qubit_product(KET_PLUS, KET_1),
        two_qubit_product(KET_MINUS, KET_0),
        two_qubit_product(KET_MINUS, KET_1),
    ),
)

PROBE_BASES = (PROBE_BASIS_ZX, PROBE_BASIS_XZ)


def _chi_from_diagonal_signs(signs) -> np.ndarray:
    v = np.zeros(16, dtype=complex)
    for j, s in enumerate(signs):
        v[4 * j + j] = s
    return np.outer(v, v.conj())


def chi_cz_reference() -> np.ndarray:
    """Rank-1 process matrix of the ideal CZ gate; Tr = 4."""
    return _chi_from_diagonal_signs([1.0, 1.0, 1.0, -1.0])


def chi_identity_reference() -> np.ndarray:
    """Rank-1 process matrix of the identity gate; Tr = 4."""
    return _chi_from_diagonal_signs([1.0, 1.0, 1.0, 1.0])


def process_fidelity(chi: np.ndarray, ref: np.ndarray) -> float:
    """Normalized overlap Tr[chi ref] / (Tr[chi] Tr[ref]).

    Invariant under positive rescaling of either argument.
    """
    tr_chi = float(np.trace(chi).real)
    tr_ref = float(np.trace(ref).real)
    if tr_chi <= 0.0 or tr_ref <= 0.0:
        raise ValueError("process fidelity is undefined for zero-trace operators")
    return float(np.trace(np.asarray(chi) @ np.asarray(ref)).real / (tr_chi * tr_ref))


def state_fidelity_and_probability(
    chi: np.ndarray, psi: np.ndarray
) -> tuple[float | None, float]:
    """(f, p) for a pure probe state.

    p = Tr[(psi^T (x) I) chi] is the success probability and f the fidelity
    of the normalized output with the ideal CZ output U_CZ|psi>.  When
    p = 0 the fidelity is undefined and reported as None.
    """
    psi = np.asarray(psi, dtype=complex)
    if not qmath.is_normalized(psi):
        raise ValueError("probe state must be normalized")
    proj = qmath.ketbra(psi)
    ideal_out = qmath.ketbra(U_CZ @ psi)
    p = float(np.trace(qmath.tensor(proj.T, np.eye(4)) @ chi).real)
    if p <= 0.0:
        return None, max(p, 0.0)
    f = float(np.trace(qmath.tensor(proj.T, ideal_out) @ chi).real) / p
    return f, p


def average_state_fidelity(chi: np.ndarray, basis: ProbeBasis) -> float:
    """Success-probability-weighted mean output fidelity over a probe basis."""
    weighted = 0.0
    total_p = 0.0
    for psi in basis.states:
        f, p = state_fidelity_and_probability(chi, psi)
        if f is not None:
            weighted += p * f
        total_p += p
    if total_p <= 0.0:
        raise ValueError(f"zero total success probability in probe basis {basis.label}")
    return weighted / total_p


def hofmann_bound(chi: np.ndarray) -> tuple[float, float, float]:
    """(F_H, F_1, F_2) with F_H = F_1 + F_2 - 1.

    F_H may be negative for bad gates; it is deliberately not clamped.
    """
    f1 = average_state_fidelity(chi, PROBE_BASIS_ZX)
    f2 = average_state_fidelity(chi, PROBE_BASIS_XZ)
    return f1 + f2 - 1.0, f1, f2


def average_success_probability(chi: np.ndarray) -> float:
    """Tr[chi] / 4, the basis-independent mean success probability."""
    return float(np.trace(chi).real) / 4.0


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, q = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (q * np.sqrt(np.clip(w, 0.0, None))) @ q.conj().T


def uhlmann_fidelity(chi_a: np.ndarray, chi_b: np.ndarray) -> float:
    """Mixed-state fidelity of the trace-normalized process matrices.

    F = (Tr sqrt(sqrt(a) b sqrt(a)))^2 with a, b = chi / Tr[chi].  Equals 1
    exactly when the normalized operators coincide, which makes it the
    right closure metric for reconstructions of mixed processes: the
    linear overlap of process_fidelity cannot exceed the purity of a
    mixed reference even for a perfect reconstruction.
    """
    tr_a = float(np.trace(chi_a).real)
    tr_b = float(np.trace(chi_b).real)
    if tr_a <= 0.0 or tr_b <= 0.0:
        raise ValueError("fidelity is undefined for zero-trace operators")
    a = np.asarray(chi_a, dtype=complex) / tr_a
    b = np.asarray(chi_b, dtype=complex) / tr_b
    root_a = _psd_sqrt(a)
    f = float(np.trace(_psd_sqrt(root_a @ b @ root_a)).real ** 2)
    return min(f, 1.0)
