"""Conditional CZ gate from a weak controlled-phase interaction.

A weak spin-spin interaction applies U_phi = diag(1, 1, 1, e^{i phi}) to
qubits A and B.  Coupling qubit A to an auxiliary level |2> before and
after the interaction, projecting back onto the qubit subspace and
filtering the |0> amplitude turns this into an exact CZ gate with success
probability P_S = (sin(phi/2) / (1 + |cos(phi/2)|))^2 at the optimal
couplings.

Particle A is modelled with four levels |0>..|3>; level |3> only serves
the projection onto the qubit subspace, so the simulation never populates
it.  Composite states are ordered with the A level as the slow index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError
from . import qmath

N_LEVELS_A = 4
DIM = 2 * N_LEVELS_A


def controlled_phase(phi: float) -> np.ndarray:
    """Two-qubit controlled-phase gate diag(1, 1, 1, e^{i phi})."""
    return np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)]).astype(complex)


def _abs_cos_half(phi: float) -> float:
    # |cos(phi/2)| evaluated as sin((pi - phi)/2) so that phi = pi gives
    # an exact 0.0 instead of the ~6e-17 rounding of cos(pi/2).
    return abs(np.sin((np.pi - phi) / 2.0))


@dataclass(frozen=True)
class SpinProtocolParams:
    """Interaction phase and the two auxiliary-level couplings.

    ``r`` and ``r_tilde`` default to the positive real square roots of
    1 - |t|^2 and 1 - |t_tilde|^2; supply them explicitly (possibly
    complex) to realise phase-shifted couplings.
    """

    phi: float
    t: complex
    t_tilde: complex
    r: complex | None = None
    r_tilde: complex | None = None

    def __post_init__(self):
        if self.r is None:
            object.__setattr__(self, "r", np.sqrt(max(0.0, 1.0 - abs(self.t) ** 2)))
        if self.r_tilde is None:
            object.__setattr__(self, "r_tilde", np.sqrt(max(0.0, 1.0 - abs(self.t_tilde) ** 2)))
        for tv, rv, name in ((self.t, self.r, "t"), (self.t_tilde, self.r_tilde, "t_tilde")):
            if abs(abs(tv) ** 2 + abs(rv) ** 2 - 1.0) > 1e-9:
                raise ValueError(f"|{name}|^2 + |r|^2 must equal 1")


@dataclass(frozen=True)
class EffectiveGate:
    """Diagonal 4x4 post-selected gate and its filter amplitude."""

    matrix: np.ndarray
    eta_a: complex

    @property
    def success_probability(self) -> float:
        return float(abs(self.eta_a) ** 2)


def _coupling_matrix(t: complex, r: complex) -> np.ndarray:
    """Level coupling |1> -> t|1> + r|2>, |2> -> t*|2> - r*|1> on particle A."""
    u = np.eye(N_LEVELS_A, dtype=complex)
    u[1, 1] = t
    u[2, 1] = r
    u[1, 2] = -np.conj(r)
    u[2, 2] = np.conj(t)
    return u


def _lift_a(u_a: np.ndarray) -> np.ndarray:
    return np.kron(u_a, np.eye(2, dtype=complex))


def effective_gate(p: SpinProtocolParams) -> EffectiveGate:
    """Post-selected two-qubit operation V = diag(eta_A, eta_A, eta_A, v11).

    eta_A = t t~ - r r~* is the filter amplitude applied to the first three
    basis states; the |11> entry is e^{i phi} t t~ - r r~*.
    """
    eta_a = p.t * p.t_tilde - p.r * np.conj(p.r_tilde)
    v11 = np.exp(1j * p.phi) * p.t * p.t_tilde - p.r * np.conj(p.r_tilde)
    return EffectiveGate(matrix=np.diag([eta_a, eta_a, eta_a, v11]), eta_a=eta_a)


def run_protocol(state: np.ndarray, p: SpinProtocolParams) -> np.ndarray:
    """Run the full bypass protocol on a normalized two-qubit state.

    Simulates coupling -> interaction -> coupling -> projection -> filter
    step by step in the (4 levels of A) x (qubit B) space and returns the
    unnormalized post-selected two-qubit state; its squared norm is the
    event probability for this input.
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (4,):
        raise ValueError("input must be a two-qubit state vector of length 4")
    if not qmath.is_normalized(state):
        raise ValueError("input state must be normalized")

    full = np.zeros(DIM, dtype=complex)
    full[:4] = state  # A levels 0,1 carry the qubit

    # first coupling of |1>_A and |2>_A
    full = _lift_a(_coupling_matrix(p.t, p.r)) @ full
    # interqubit interaction: phase e^{i phi} on |1>_A |1>_B only
    u_phi = np.eye(DIM, dtype=complex)
    u_phi[3, 3] = np.exp(1j * p.phi)
    full = u_phi @ full
    # second coupling with (t~, r~)
    full = _lift_a(_coupling_matrix(p.t_tilde, p.r_tilde)) @ full

    # projection of particle A onto the qubit subspace
    out = full[:4].copy()
    # |0>_A attenuation filter with amplitude eta_A
    eta_a = p.t * p.t_tilde - p.r * np.conj(p.r_tilde)
    out[0] *= eta_a
    out[1] *= eta_a
    return out


def filter_via_aux_coupling(state: np.ndarray, eta_a: complex) -> np.ndarray:
    """|0>_A attenuation realised by coupling |0>_A to |2>_A and projecting.

    Equivalent to multiplying the |0>_A amplitudes by eta_a; kept as the
    explicit two-step construction so the equivalence can be tested.
    """
    if abs(eta_a) > 1.0 + 1e-12:
        raise ValueError("filter amplitude must satisfy |eta_a| <= 1")
    state = np.asarray(state, dtype=complex)
    full = np.zeros(DIM, dtype=complex)
    full[:4] = state
    u = np.eye(N_LEVELS_A, dtype=complex)
    r_prime = np.sqrt(max(0.0, 1.0 - abs(eta_a) ** 2))
    u[0, 0] = eta_a
    u[2, 0] = r_prime
    u[0, 2] = -r_prime
    u[2, 2] = np.conj(eta_a)
    full = _lift_a(u) @ full
    return full[:4].copy()


@dataclass(frozen=True)
class CZCouplings:
    """Solution of the CZ condition r r~* / (t t~) = (1 + e^{i phi}) / 2.

    With real t and t_tilde the condition needs the second coupling's
    reflection to carry phase -phi/2, physically a phase shift on the
    auxiliary level |2>_A between the interaction and the second coupling.
    ``params`` bakes that phase into r_tilde; applying it makes
    V = eta_A * U_CZ hold exactly.
    """

    phi: float
    t: float
    t_tilde: float
    aux_phase: float
    r_tilde_magnitude: float = field(repr=False, default=0.0)

    @property
    def params(self) -> SpinProtocolParams:
        return SpinProtocolParams(
            phi=self.phi,
            t=self.t,
            t_tilde=self.t_tilde,
            r_tilde=self.r_tilde_magnitude * np.exp(-1j * self.aux_phase),
        )


def solve_cz_condition(phi: float, t: float) -> CZCouplings:
    """Second coupling strength making the protocol an exact CZ gate.

    Solves the magnitude condition r |r~| = t t~ |cos(phi/2)| for t~ and
    reports the auxiliary-level phase shift phi/2 that absorbs the complex
    part of the condition.
    """
    if not 0.0 < phi <= np.pi:
        raise InfeasibleError(f"phi must be in (0, pi], got {phi}")
    if not 0.0 < t <= 1.0:
        raise InfeasibleError(f"t must be in (0, 1], got {t}")
    c = _abs_cos_half(phi)
    r = np.sqrt(max(0.0, 1.0 - t * t))
    if r == 0.0 and c > 0.0:
        raise InfeasibleError(
            f"t = 1 leaves no reflection to satisfy the CZ condition at phi = {phi}; "
            "feasible t range is (0, 1)"
        )
    denom = np.hypot(r, t * c)
    rho = t * c / denom if denom > 0 else 0.0
    t_tilde = r / denom if denom > 0 else 1.0
    if c == 0.0:
        # phi = pi: r r~ = 0, so the second coupling is trivially t~ = 1
        rho, t_tilde = 0.0, 1.0
    return CZCouplings(phi=phi, t=t, t_tilde=float(t_tilde),
                       aux_phase=phi / 2.0, r_tilde_magnitude=float(rho))


@dataclass(frozen=True)
class OptimalCouplings:
    t: float
    t_tilde: float
    p_success: float


def optimal_couplings(phi: float) -> OptimalCouplings:
    """Success-probability-optimal couplings for the CZ condition.

    |t|^2 = |t~|^2 = 1 / (1 + |cos(phi/2)|) and
    P_S = (sin(phi/2) / (1 + |cos(phi/2)|))^2.
    """
    if not 0.0 < phi <= np.pi:
        raise InfeasibleError(
            f"phi must be in (0, pi], got {phi}; the gate is impossible at phi = 0"
        )
    c = _abs_cos_half(phi)
    t = np.sqrt(1.0 / (1.0 + c))
    p_success = (np.sin(phi / 2.0) / (1.0 + c)) ** 2
    return OptimalCouplings(t=float(t), t_tilde=float(t), p_success=float(p_success))
