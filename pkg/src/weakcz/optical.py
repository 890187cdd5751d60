"""Ideal interferometric bypass scheme for a weak beam-splitter coupling.

Two photonic qubits are coupled by a central beam splitter acting on the
rails A1 and B1 (Heisenberg convention a_out = t a - r b, b_out = t b + r a
with t^2 + r^2 = 1, R = r^2).  A bypass mode C is coupled to A1 before
(amplitude t_X) and after (t_Y) the central interaction, and the rails A0
and B0 carry filters t_A, t_B.  Post-selected on one photon per output
rail pair the scheme is diagonal with amplitudes

    w_00 = t_A t_B
    w_01 = t_A t
    w_10 = (t t_X t_Y + r_X r_Y) t_B
    w_11 = (2 t^2 - 1) t_X t_Y + t r_X r_Y

and implements a CZ gate when w_00 = w_01 = w_10 = -w_11.

Sign conventions: t_X, t_Y, r_X are kept non-negative; for R < 2/3 the CZ
condition forces r_X r_Y < 0 and the sign goes into r_Y (physically a
negative wave-plate rotation).  Wave plates map to amplitudes as
t_j = cos(2 phi_j), r_j = sin(2 phi_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InfeasibleError


def waveplate_amplitudes(phi_rad: float) -> tuple[float, float]:
    """(t, r) = (cos 2phi, sin 2phi) for a wave plate rotated by phi."""
    return float(np.cos(2.0 * phi_rad)), float(np.sin(2.0 * phi_rad))


def beam_splitter_heisenberg(t: float) -> np.ndarray:
    """Mode map [[t, -r], [r, t]] with r the positive root of 1 - t^2."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"amplitude transmittance must be in [0, 1], got {t}")
    r = np.sqrt(1.0 - t * t)
    return np.array([[t, -r], [r, t]], dtype=complex)


@dataclass(frozen=True)
class OpticalSchemeParams:
    """Central reflectance, bypass couplings and rail filters.

    ``r_x`` and ``r_y`` default to positive square roots; pass ``r_y``
    explicitly (possibly negative) to select the other branch.
    """

    R: float
    t_x: float
    t_y: float
    t_a: float
    t_b: float
    r_x: float | None = None
    r_y: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.R <= 1.0:
            raise ValueError(f"R must lie in [0, 1], got {self.R}")
        if self.r_x is None:
            object.__setattr__(self, "r_x", float(np.sqrt(max(0.0, 1.0 - self.t_x**2))))
        if self.r_y is None:
            object.__setattr__(self, "r_y", float(np.sqrt(max(0.0, 1.0 - self.t_y**2))))
        for tv, rv, name in ((self.t_x, self.r_x, "t_x"), (self.t_y, self.r_y, "t_y")):
            if abs(tv * tv + rv * rv - 1.0) > 1e-9:
                raise ValueError(f"{name}^2 + r^2 must equal 1")

    @property
    def t(self) -> float:
        return float(np.sqrt(1.0 - self.R))

    @property
    def r(self) -> float:
        return float(np.sqrt(self.R))


class NoBypassAmplitudes(NamedTuple):
    """Conditional basis-state amplitudes of the central coupling alone."""

    bare: tuple[float, float, float, float]      # (1, t, t, t^2 - r^2)
    filtered: tuple[float, float, float, float]  # (T, T, T, 1 - 2R), filters at t


def coincidence_amplitudes_no_bypass(R: float) -> NoBypassAmplitudes:
    """Basis-state amplitudes without the bypass, bare and with filters.

    The filtered tuple assumes the A0/B0 filters share the central
    amplitude transmittance t; at R = 2/3 it becomes (1/3)*diag(1,1,1,-1),
    the standard coincidence-basis CZ gate.
    """
    if not 0.0 <= R <= 1.0:
        raise ValueError(f"R must lie in [0, 1], got {R}")
    T = 1.0 - R
    t = np.sqrt(T)
    bare = (1.0, float(t), float(t), float(T - R))
    filtered = (T, T, T, 1.0 - 2.0 * R)
    return NoBypassAmplitudes(bare=bare, filtered=filtered)


def bypass_amplitudes(p: OpticalSchemeParams) -> tuple[complex, complex, complex, complex]:
    """(w_00, w_01, w_10, w_11) of the full bypass scheme."""
    t = p.t
    w00 = p.t_a * p.t_b
    w01 = p.t_a * t
    w10 = (t * p.t_x * p.t_y + p.r_x * p.r_y) * p.t_b
    w11 = (2.0 * t * t - 1.0) * p.t_x * p.t_y + t * p.r_x * p.r_y
    return (complex(w00), complex(w01), complex(w10), complex(w11))


def solve_cz_conditions(R: float, t_x: float) -> OpticalSchemeParams:
    """Bypass and filter settings that make the scheme an exact CZ gate.

    Solves r_Y / t_Y = (3R - 2) / (2t) * t_X / r_X for the recombination
    coupling and fills t_A = t t_X t_Y + r_X r_Y, t_B = t.  At R = 2/3 the
    right side vanishes and t_Y is free; the convention t_Y = 1 maximizes
    the success probability.
    """
    if not 0.0 < R < 1.0:
        raise InfeasibleError(f"R must lie in (0, 1), got {R}")
    if not 0.0 < t_x <= 1.0:
        raise InfeasibleError(f"t_X must lie in (0, 1], got {t_x}")
    t = np.sqrt(1.0 - R)
    rhs = (3.0 * R - 2.0) / (2.0 * t)
    r_x = np.sqrt(max(0.0, 1.0 - t_x * t_x))
    if r_x == 0.0:
        if abs(rhs) > 1e-12:
            raise InfeasibleError(
                f"t_X = 1 switches the bypass off, which satisfies the CZ condition "
                f"only at R = 2/3 (got R = {R}); choose t_X in (0, 1)"
            )
        t_y, r_y = 1.0, 0.0
    else:
        k = rhs * t_x / r_x  # r_Y / t_Y
        t_y = 1.0 / np.hypot(1.0, k)
        r_y = k * t_y
    t_a = t * t_x * t_y + r_x * r_y
    if not 0.0 <= t_a <= 1.0:
        raise InfeasibleError(
            f"required filter amplitude t_A = {t_a:.6f} is unphysical for "
            f"R = {R}, t_X = {t_x}"
        )
    return OpticalSchemeParams(R=R, t_x=t_x, t_y=float(t_y), t_a=float(t_a),
                               t_b=float(t), r_x=float(r_x), r_y=float(r_y))


class OptimalBypass(NamedTuple):
    t_x: float
    t_y: float
    p_success: float


def optimal_bypass(R: float) -> OptimalBypass:
    """Success-probability-optimal bypass couplings.

    t_X^2 = t_Y^2 = 2t / (2t + |3R - 2|) and P_S = R^2 t_X^2 t_Y^2 / 4.
    """
    if not 0.0 < R < 1.0:
        raise InfeasibleError(f"R must lie in (0, 1), got {R}")
    t = np.sqrt(1.0 - R)
    tx2 = 2.0 * t / (2.0 * t + abs(3.0 * R - 2.0))
    p_success = R * R * tx2 * tx2 / 4.0
    tx = float(np.sqrt(tx2))
    return OptimalBypass(t_x=tx, t_y=tx, p_success=float(p_success))
