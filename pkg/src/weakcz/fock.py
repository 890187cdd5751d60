"""Brute-force two-photon simulation of the bypass interferometers.

Everything here is an independent cross-check of the closed-form gate
amplitudes: the interferometer is a mode network described by a unitary
scattering matrix S with S[m, j] the amplitude for a photon injected into
mode j to exit in mode m, and two-photon states evolve by the exact
bosonic contraction (matrix permanents for 2 photons).

A two-photon state is stored as a symmetric coefficient matrix ``coeff``
with |psi> = sum_jk coeff[j, k] a_j+ a_k+ |0>, which evolves as
coeff -> S coeff S^T.  The physical amplitude on the normalized Fock
state is 2*coeff[m, n] for m != n and sqrt(2)*coeff[m, m] on a doubly
occupied mode.

For distinguishable photons each photon evolves independently (no
symmetrization).  The scattering at the central coupling is split into a
transmitted part (photons stay on their side) and a reflected part
(photons change sides); evolving with either part isolated yields the
both-transmitted and both-reflected coincidence classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imperfections import SetupParams
from .optical import OpticalSchemeParams


@dataclass(frozen=True)
class ModeNetwork:
    """Labelled linear-optical network with a unitary mode map."""

    labels: tuple[str, ...]
    unitary: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        n = len(self.labels)
        if u.shape != (n, n):
            raise ValueError(f"unitary shape {u.shape} does not match {n} modes")
        if np.max(np.abs(u.conj().T @ u - np.eye(n))) > 1e-9:
            raise ValueError("mode map is not unitary")
        object.__setattr__(self, "unitary", u)

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def mode(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class TwoPhotonState:
    """Two indistinguishable photons over n modes."""

    coeff: np.ndarray  # symmetric (n, n) creation-operator coefficients

    @classmethod
    def from_mode_pair(cls, n_modes: int, j: int, k: int) -> "TwoPhotonState":
        coeff = np.zeros((n_modes, n_modes), dtype=complex)
        if j == k:
            coeff[j, j] = 1.0 / np.sqrt(2.0)
        else:
            coeff[j, k] = coeff[k, j] = 0.5
        return cls(coeff)

    def amplitude(self, m: int, n: int) -> complex:
        """Amplitude on the normalized Fock basis state with photons in m, n."""
        if m == n:
            return complex(np.sqrt(2.0) * self.coeff[m, m])
        return complex(2.0 * self.coeff[m, n])

    def norm(self) -> float:
        n_modes = self.coeff.shape[0]
        total = 0.0
        for m in range(n_modes):
            total += abs(self.amplitude(m, m)) ** 2
            for n in range(m + 1, n_modes):
                total += abs(self.amplitude(m, n)) ** 2
        return float(np.sqrt(total))


def evolve_two_photons(net: ModeNetwork, state: TwoPhotonState) -> TwoPhotonState:
    """Exact bosonic evolution of a two-photon state through the network."""
    coeff = np.asarray(state.coeff, dtype=complex)
    if coeff.shape != (net.n_modes, net.n_modes):
        raise ValueError(
            f"state has {coeff.shape[0]} modes, network has {net.n_modes}"
        )
    s = net.unitary
    return TwoPhotonState(s @ coeff @ s.T)


def distinguishable_evolve(net: ModeNetwork, mode_1: int, mode_2: int) -> np.ndarray:
    """Joint amplitudes of two labelled photons evolving independently.

    Returns J with J[m, n] the amplitude for photon 1 to exit in mode m
    and photon 2 in mode n; no bosonic symmetrization is applied.
    """
    s = net.unitary
    return np.outer(s[:, mode_1], s[:, mode_2])


def _embed_pair(n: int, i: int, j: int, block: np.ndarray) -> np.ndarray:
    m = np.eye(n, dtype=complex)
    m[i, i], m[i, j] = block[0, 0], block[0, 1]
    m[j, i], m[j, j] = block[1, 0], block[1, 1]
    return m


def _rotation(t: float, r: float) -> np.ndarray:
    return np.array([[t, -r], [r, t]], dtype=complex)


def _inverse_rotation(t: float, r: float) -> np.ndarray:
    return np.array([[t, r], [-r, t]], dtype=complex)


_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class StagedNetwork:
    """Interferometer factored around its central two-qubit coupling.

    The full scattering matrix is suffix @ (central_transmit +
    central_reflect) @ prefix; the two central parts carry the
    side-preserving and side-swapping scattering amplitudes respectively.
    Rail tuples map logical values (0, 1) to mode indices.
    """

    network: ModeNetwork
    prefix: np.ndarray
    central_transmit: np.ndarray
    central_reflect: np.ndarray
    suffix: np.ndarray
    a_inputs: tuple[int, int]
    b_inputs: tuple[int, int]
    a_rails: tuple[int, int]
    b_rails: tuple[int, int]

    def input_modes(self, basis_index: int) -> tuple[int, int]:
        """(mode of photon A, mode of photon B) for |jk>, index = 2j + k."""
        return self.a_inputs[basis_index >> 1], self.b_inputs[basis_index & 1]


def experiment_network(p: SetupParams) -> StagedNetwork:
    """Polarization-encoded experimental setup as a 9-mode network.

    Modes: A0/A0L the upper interferometer arm and its wave-plate loss
    partner, A1/C the vertical and horizontal lower-arm modes (C is the
    bypass), BV/BH the second photon's polarization modes, L0 the central
    reflection loss of A0, LBV/LBH the output-filter reflection losses.
    The central beam splitter couples (A1, BV) with (t, r) and the
    horizontal pairs (C, BH), (A0, L0) with (t_H, r_H).
    """
    labels = ("A0", "A0L", "A1", "C", "BV", "BH", "L0", "LBV", "LBH")
    n = len(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    t_x, r_x, t_y, r_y, t_a, r_a = p.waveplates()

    prefix = _embed_pair(n, idx["A1"], idx["C"], _rotation(t_x, r_x))

    central_t = np.eye(n, dtype=complex)
    central_r = np.zeros((n, n), dtype=complex)
    for a, b, t, r in (
        (idx["A1"], idx["BV"], p.t, p.r),
        (idx["C"], idx["BH"], p.t_h, p.r_h),
        (idx["A0"], idx["L0"], p.t_h, p.r_h),
    ):
        central_t[a, a] = t
        central_t[b, b] = t
        central_r[a, b] = -r
        central_r[b, a] = r

    suffix = _embed_pair(n, idx["A1"], idx["C"], _inverse_rotation(t_y, r_y))
    suffix = _embed_pair(n, idx["A0"], idx["A0L"], _rotation(t_a, r_a)) @ suffix
    suffix = _embed_pair(n, idx["BV"], idx["BH"], _SWAP) @ suffix
    suffix = _embed_pair(n, idx["BV"], idx["LBV"], _rotation(p.t, p.r)) @ suffix
    suffix = _embed_pair(n, idx["BH"], idx["LBH"], _rotation(p.t_h, p.r_h)) @ suffix

    full = suffix @ (central_t + central_r) @ prefix
    return StagedNetwork(
        network=ModeNetwork(labels, full),
        prefix=prefix,
        central_transmit=central_t,
        central_reflect=central_r,
        suffix=suffix,
        a_inputs=(idx["A0"], idx["A1"]),
        b_inputs=(idx["BH"], idx["BV"]),
        a_rails=(idx["A0"], idx["A1"]),
        b_rails=(idx["BV"], idx["BH"]),
    )


def bypass_network(p: OpticalSchemeParams) -> StagedNetwork:
    """Ideal path-encoded bypass scheme as a 7-mode network."""
    labels = ("A0", "A1", "C", "B0", "B1", "FA", "FB")
    n = len(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    r_a = np.sqrt(max(0.0, 1.0 - p.t_a**2))
    r_b = np.sqrt(max(0.0, 1.0 - p.t_b**2))

    prefix = _embed_pair(n, idx["A1"], idx["C"], _rotation(p.t_x, p.r_x))

    central_t = np.eye(n, dtype=complex)
    central_r = np.zeros((n, n), dtype=complex)
    central_t[idx["A1"], idx["A1"]] = p.t
    central_t[idx["B1"], idx["B1"]] = p.t
    central_r[idx["A1"], idx["B1"]] = -p.r
    central_r[idx["B1"], idx["A1"]] = p.r

    suffix = _embed_pair(n, idx["A1"], idx["C"], _inverse_rotation(p.t_y, p.r_y))
    suffix = _embed_pair(n, idx["A0"], idx["FA"], _rotation(p.t_a, r_a)) @ suffix
    suffix = _embed_pair(n, idx["B0"], idx["FB"], _rotation(p.t_b, r_b)) @ suffix

    full = suffix @ (central_t + central_r) @ prefix
    return StagedNetwork(
        network=ModeNetwork(labels, full),
        prefix=prefix,
        central_transmit=central_t,
        central_reflect=central_r,
        suffix=suffix,
        a_inputs=(idx["A0"], idx["A1"]),
        b_inputs=(idx["B0"], idx["B1"]),
        a_rails=(idx["A0"], idx["A1"]),
        b_rails=(idx["B0"], idx["B1"]),
    )


def postselect_coincidence(
    states: list[TwoPhotonState],
    a_rails: tuple[int, int],
    b_rails: tuple[int, int],
) -> np.ndarray:
    """Conditional 4x4 transformation from four evolved basis inputs.

    ``states`` holds the evolved two-photon states for computational
    inputs |00>, |01>, |10>, |11>; entry [out, in] of the result is the
    coincidence amplitude with one photon in A rail out_A and one in
    B rail out_B.
    """
    if len(states) != 4:
        raise ValueError("need the four computational-basis input states")
    m = np.zeros((4, 4), dtype=complex)
    for col, state in enumerate(states):
        for a_log in (0, 1):
            for b_log in (0, 1):
                m[2 * a_log + b_log, col] = state.amplitude(
                    a_rails[a_log], b_rails[b_log]
                )
    return m


def conditional_map_interfering(staged: StagedNetwork) -> np.ndarray:
    """4x4 conditional map for indistinguishable photons."""
    n = staged.network.n_modes
    states = []
    for basis_index in range(4):
        ma, mb = staged.input_modes(basis_index)
        state = TwoPhotonState.from_mode_pair(n, ma, mb)
        states.append(evolve_two_photons(staged.network, state))
    return postselect_coincidence(states, staged.a_rails, staged.b_rails)


def _class_network(staged: StagedNetwork, central_part: np.ndarray) -> np.ndarray:
    return staged.suffix @ central_part @ staged.prefix


def conditional_map_transmitted(staged: StagedNetwork) -> np.ndarray:
    """4x4 map for distinguishable photons both staying on their side."""
    s = _class_network(staged, staged.central_transmit)
    m = np.zeros((4, 4), dtype=complex)
    for basis_index in range(4):
        ma, mb = staged.input_modes(basis_index)
        joint = np.outer(s[:, ma], s[:, mb])
        for a_log in (0, 1):
            for b_log in (0, 1):
                m[2 * a_log + b_log, basis_index] = joint[
                    staged.a_rails[a_log], staged.b_rails[b_log]
                ]
    return m


def conditional_map_reflected(staged: StagedNetwork) -> np.ndarray:
    """4x4 map for distinguishable photons both changing sides."""
    s = _class_network(staged, staged.central_reflect)
    m = np.zeros((4, 4), dtype=complex)
    for basis_index in range(4):
        ma, mb = staged.input_modes(basis_index)
        joint = np.outer(s[:, ma], s[:, mb])
        # photon A exits in the B rails and vice versa
        for a_log in (0, 1):
            for b_log in (0, 1):
                m[2 * a_log + b_log, basis_index] = joint[
                    staged.b_rails[b_log], staged.a_rails[a_log]
                ]
    return m


def _chi_from_map(m: np.ndarray) -> np.ndarray:
    v = np.zeros(16, dtype=complex)
    for idx_in in range(4):
        for idx_out in range(4):
            v[4 * idx_in + idx_out] = m[idx_out, idx_in]
    return np.outer(v, v.conj())


def process_matrix_oracle(p: SetupParams) -> np.ndarray:
    """Full process matrix assembled from the two-photon simulation.

    Mixes the interfering and distinguishable coincidence classes with the
    visibility weight q; entrywise equal to the closed-form model for all
    parameters.
    """
    staged = experiment_network(p)
    chi_i = _chi_from_map(conditional_map_interfering(staged))
    chi_t = _chi_from_map(conditional_map_transmitted(staged))
    chi_r = _chi_from_map(conditional_map_reflected(staged))
    q = p.q
    return q * chi_i + (1.0 - q) * chi_t + (1.0 - q) * chi_r


def bypass_amplitudes_oracle(
    p: OpticalSchemeParams,
) -> tuple[complex, complex, complex, complex]:
    """(w_00, w_01, w_10, w_11) from the two-photon simulation.

    The ideal scheme is diagonal in the computational basis; a non-diagonal
    simulated map signals an internal inconsistency and raises.
    """
    m = conditional_map_interfering(bypass_network(p))
    off = m - np.diag(np.diag(m))
    if np.max(np.abs(off)) > 1e-9:
        raise AssertionError("ideal bypass network produced a non-diagonal map")
    d = np.diag(m)
    return complex(d[0]), complex(d[1]), complex(d[2]), complex(d[3])
