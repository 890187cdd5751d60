"""Analytic model of the experimental polarization-encoded bypass gate.

The experimental gate couples the vertical rails of the two photons at a
partially polarizing beam splitter with reflectance R = r^2 while the
horizontal rails see a small parasitic reflectance R_H = r_H^2.  Imperfect
two-photon interference with visibility V is modelled as a binary mixture:
with probability q = 2V / (1 + V) the photons are indistinguishable and
interfere, with probability 1 - q they are distinguishable and the
coincidences split into a both-transmitted and a both-reflected class.
The resulting process matrix is

    chi = q chi_I + (1 - q) chi_R + (1 - q) chi_T

with each component the outer product of its amplitude vector.  Applying
chi to an input density matrix follows

    rho_out = Tr_in[(rho_in^T (x) I) chi],    p = Tr[rho_out].

Wave-plate angles are stored in degrees (the external convention) and
mapped to amplitudes via t_j = cos(2 phi_j), r_j = sin(2 phi_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from . import metrics, optical, qmath
from .errors import InfeasibleError

#: Reflectances and visibility measured on the deployed beam splitters.
FIXTURE_R = 0.313
FIXTURE_R_H = 0.019
FIXTURE_VISIBILITY = 0.94

#: Design reflectance of the central coupling.
NOMINAL_R = 1.0 / 3.0

ANGLE_RULE_NOMINAL = "nominal-R"
ANGLE_RULE_MEASURED = "measured-R"
ANGLE_RULES = (ANGLE_RULE_NOMINAL, ANGLE_RULE_MEASURED)


@dataclass(frozen=True)
class SetupParams:
    """Physical parameters of the optical gate.

    R, R_H are intensity reflectances of the central coupling for vertical
    and horizontal polarization; visibility is the two-photon interference
    visibility; the phi_* angles are half-wave-plate rotations in degrees.
    """

    R: float = FIXTURE_R
    R_H: float = FIXTURE_R_H
    visibility: float = FIXTURE_VISIBILITY
    phi_x_deg: float = 0.0
    phi_y_deg: float = 0.0
    phi_a_deg: float = 0.0

    def __post_init__(self):
        for val, name in ((self.R, "R"), (self.R_H, "R_H")):
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val}")
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility must lie in [0, 1], got {self.visibility}")

    @property
    def t(self) -> float:
        return math.sqrt(1.0 - self.R)

    @property
    def r(self) -> float:
        return math.sqrt(self.R)

    @property
    def t_h(self) -> float:
        return math.sqrt(1.0 - self.R_H)

    @property
    def r_h(self) -> float:
        return math.sqrt(self.R_H)

    @property
    def q(self) -> float:
        """Indistinguishability weight 2V / (1 + V)."""
        return 2.0 * self.visibility / (1.0 + self.visibility)

    def waveplates(self) -> tuple[float, float, float, float, float, float]:
        """(t_X, r_X, t_Y, r_Y, t_A, r_A) from the stored angles."""
        t_x, r_x = optical.waveplate_amplitudes(math.radians(self.phi_x_deg))
        t_y, r_y = optical.waveplate_amplitudes(math.radians(self.phi_y_deg))
        t_a, r_a = optical.waveplate_amplitudes(math.radians(self.phi_a_deg))
        return t_x, r_x, t_y, r_y, t_a, r_a


class IndistinguishableCoefficients(NamedTuple):
    beta_00: float
    beta_01: float
    beta_10: float
    beta_11: float
    gamma_11: float
    gamma_10: float


class TransmittedCoefficients(NamedTuple):
    beta_00: float
    beta_01: float
    beta_10: float
    beta_11: float


class ReflectedCoefficients(NamedTuple):
    beta_10: float
    beta_11: float
    gamma_11: float
    gamma_10: float


def coefficients_indistinguishable(p: SetupParams) -> IndistinguishableCoefficients:
    """Basis-state amplitudes when the photons interfere."""
    t, r, t_h, r_h = p.t, p.r, p.t_h, p.r_h
    t_x, r_x, t_y, r_y, t_a, _ = p.waveplates()
    return IndistinguishableCoefficients(
        beta_00=t * t_a * t_h**2,
        beta_01=t * t_a * t_h**2,
        beta_10=t_x * t_y * t_h * t**2 + r_x * r_y * (t_h**2 - r_h**2) * t,
        beta_11=t_x * t_y * t_h * (2.0 * t**2 - 1.0) + r_x * r_y * t_h**2 * t,
        gamma_11=-r_h * t_x * r_y * r * t_h,
        gamma_10=-t * r * r_x * t_y * r_h,
    )


def coefficients_transmitted(p: SetupParams) -> TransmittedCoefficients:
    """Amplitudes for distinguishable photons both transmitted centrally."""
    t, t_h = p.t, p.t_h
    t_x, r_x, t_y, r_y, t_a, _ = p.waveplates()
    beta_0 = t_h**2 * t * t_a
    beta_1 = t_h * t * (t_x * t_y * t + r_x * r_y * t_h)
    return TransmittedCoefficients(beta_00=beta_0, beta_01=beta_0,
                                   beta_10=beta_1, beta_11=beta_1)


def coefficients_reflected(p: SetupParams) -> ReflectedCoefficients:
    """Amplitudes for distinguishable photons both reflected centrally.

    Inputs |00> and |01> produce no coincidence in this class.
    """
    t, r, t_h, r_h = p.t, p.r, p.t_h, p.r_h
    t_x, r_x, t_y, r_y, _, _ = p.waveplates()
    return ReflectedCoefficients(
        beta_10=-(r_h**2) * r_x * r_y * t,
        beta_11=-(r**2) * t_x * t_y * t_h,
        gamma_11=-r_h * t_x * r_y * r * t_h,
        gamma_10=-r * r_x * t_y * r_h * t,
    )


def _chi_vector(entries: dict[tuple[int, int], complex]) -> np.ndarray:
    v = np.zeros(16, dtype=complex)
    for (idx_in, idx_out), amp in entries.items():
        v[4 * idx_in + idx_out] = amp
    return v


def chi_components(p: SetupParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rank-1 process matrices (chi_I, chi_T, chi_R) of the three classes."""
    ci = coefficients_indistinguishable(p)
    ct = coefficients_transmitted(p)
    cr = coefficients_reflected(p)
    v_i = _chi_vector({(0, 0): ci.beta_00, (1, 1): ci.beta_01,
                       (2, 2): ci.beta_10, (3, 3): ci.beta_11,
                       (2, 3): ci.gamma_11, (3, 2): ci.gamma_10})
    v_t = _chi_vector({(0, 0): ct.beta_00, (1, 1): ct.beta_01,
                       (2, 2): ct.beta_10, (3, 3): ct.beta_11})
    v_r = _chi_vector({(2, 2): cr.beta_10, (3, 3): cr.beta_11,
                       (2, 3): cr.gamma_11, (3, 2): cr.gamma_10})
    return (np.outer(v_i, v_i.conj()),
            np.outer(v_t, v_t.conj()),
            np.outer(v_r, v_r.conj()))


def process_matrix(p: SetupParams) -> np.ndarray:
    """Full 16x16 process matrix chi = q chi_I + (1-q)(chi_R + chi_T)."""
    chi_i, chi_t, chi_r = chi_components(p)
    q = p.q
    return q * chi_i + (1.0 - q) * chi_r + (1.0 - q) * chi_t


def apply_process(chi: np.ndarray, rho_in: np.ndarray) -> tuple[np.ndarray, float]:
    """Conditional output state and success probability for a density matrix.

    rho_out = Tr_in[(rho_in^T (x) I) chi] is returned unnormalized;
    p = Tr[rho_out].
    """
    rho_in = np.asarray(rho_in, dtype=complex)
    if rho_in.shape != (4, 4):
        raise ValueError("rho_in must be a 4x4 density matrix")
    if not qmath.is_hermitian(rho_in, 1e-8):
        raise ValueError("rho_in must be Hermitian")
    if abs(np.trace(rho_in).real - 1.0) > 1e-8:
        raise ValueError("rho_in must have unit trace")
    if not qmath.is_positive_semidefinite(rho_in, 1e-8):
        raise ValueError("rho_in must be positive semidefinite")
    rho_out = qmath.partial_trace_in(qmath.tensor(rho_in.T, np.eye(4)) @ np.asarray(chi))
    return rho_out, float(np.trace(rho_out).real)


def _solve_waveplate_angles(phi_x_deg: float, rule_R: float) -> tuple[float, float, bool]:
    """(phi_Y_deg, phi_A_deg, feasible) from the CZ conditions at rule_R.

    Exactly at r_X = 0 (phi_X = 0) the conditions are unsatisfiable for
    rule_R != 2/3; the bypass-off convention phi_Y = 0 with the filter-only
    setting t_A = t is returned and the point is flagged infeasible.  A
    solved point whose ideal success probability vanishes (t_X = 0) is
    likewise flagged.
    """
    t = math.sqrt(1.0 - rule_R)
    t_x, r_x = optical.waveplate_amplitudes(math.radians(phi_x_deg))
    if abs(r_x) < 1e-12:
        if abs(3.0 * rule_R - 2.0) < 1e-12:
            return 0.0, math.degrees(0.5 * math.acos(t * t_x)), True
        return 0.0, math.degrees(0.5 * math.acos(t)), False
    sol = optical.solve_cz_conditions(rule_R, t_x)
    phi_y = math.degrees(0.5 * math.atan2(sol.r_y, sol.t_y))
    phi_a = math.degrees(0.5 * math.acos(min(1.0, max(-1.0, sol.t_a))))
    p_ideal = rule_R**2 * t_x**2 * sol.t_y**2 / 4.0
    return phi_y, phi_a, p_ideal > 1e-12


def cz_parameter_solution(p: SetupParams, rule: str = ANGLE_RULE_NOMINAL) -> SetupParams:
    """Fill phi_Y and phi_A from the CZ conditions for the stored phi_X.

    ``rule`` selects the reflectance the conditions are solved with:
    "nominal-R" uses the design value 1/3, "measured-R" uses p.R.  R, R_H
    and the visibility are left untouched.
    """
    if rule not in ANGLE_RULES:
        raise ValueError(f"unknown angle rule {rule!r}; choose one of {ANGLE_RULES}")
    rule_R = NOMINAL_R if rule == ANGLE_RULE_NOMINAL else p.R
    phi_y, phi_a, feasible = _solve_waveplate_angles(p.phi_x_deg, rule_R)
    if not feasible and abs(p.phi_x_deg) > 1e-12:
        raise InfeasibleError(
            f"CZ conditions are degenerate at phi_X = {p.phi_x_deg} deg"
        )
    return replace(p, phi_y_deg=phi_y, phi_a_deg=phi_a)


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of a phi_X sweep.

    ``feasible`` is False where the CZ conditions cannot be met with
    nonzero success probability; metric fields are then absent (None).
    """

    phi_x_deg: float
    phi_y_deg: float
    phi_a_deg: float
    f_h: float | None
    f_chi: float | None
    p_s: float | None
    feasible: bool


def sweep_phi_x(
    base: SetupParams,
    grid_deg: Sequence[float],
    rule: str = ANGLE_RULE_NOMINAL,
) -> list[SweepRecord]:
    """Evaluate the model over a grid of bypass angles.

    Per grid point the wave-plate angles are solved from the CZ conditions
    under ``rule``, the full process matrix is built with the base R, R_H
    and visibility, and the Hofmann bound, process fidelity and success
    probability are recorded.  Output order equals grid order.
    """
    if rule not in ANGLE_RULES:
        raise ValueError(f"unknown angle rule {rule!r}; choose one of {ANGLE_RULES}")
    if len(grid_deg) == 0:
        raise ValueError("sweep grid must contain at least one angle")
    rule_R = NOMINAL_R if rule == ANGLE_RULE_NOMINAL else base.R
    chi_cz = metrics.chi_cz_reference()
    records = []
    for phi_x in grid_deg:
        phi_y, phi_a, feasible = _solve_waveplate_angles(phi_x, rule_R)
        point = replace(base, phi_x_deg=phi_x, phi_y_deg=phi_y, phi_a_deg=phi_a)
        if feasible:
            chi = process_matrix(point)
            f_h, _, _ = metrics.hofmann_bound(chi)
            f_chi = metrics.process_fidelity(chi, chi_cz)
            p_s = metrics.average_success_probability(chi)
            records.append(SweepRecord(phi_x, phi_y, phi_a, f_h, f_chi, p_s, True))
        else:
            records.append(SweepRecord(phi_x, phi_y, phi_a, None, None, None, False))
    return records
