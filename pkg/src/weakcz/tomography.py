"""Simulated process tomography with maximum-likelihood reconstruction.

Each qubit is prepared in six states {|0>, |1>, |+>, |->, |r>, |l>} and
measured in three bases {|0>,|1>}, {|+>,|->}, {|r>,|l>}, giving
36 product inputs x 9 product bases x 4 outcomes = 1296 count cells.
The expected rate of a cell is Tr[(psi^T (x) P_out) chi] and measured
counts are modelled as independent Poisson draws.

The estimator is an expectation-maximization iteration of the R-rho-R
type adapted to process matrices of trace-nonpreserving (post-selected)
operations: no trace-preservation constraint is imposed, positivity is
maintained by construction, and after each multiplicative update the
matrix is rescaled so the predicted total count matches the observed
total.  A diluted step is substituted whenever the full step would lower
the log-likelihood, which makes the likelihood non-decreasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qmath
from .qmath import KET_0, KET_1, KET_L, KET_MINUS, KET_PLUS, KET_R

SINGLE_QUBIT_INPUTS = (KET_0, KET_1, KET_PLUS, KET_MINUS, KET_R, KET_L)
INPUT_LABELS = ("0", "1", "+", "-", "r", "l")

MEASUREMENT_BASES = ((KET_0, KET_1), (KET_PLUS, KET_MINUS), (KET_R, KET_L))
BASIS_LABELS = ("Z", "X", "Y")

N_INPUTS = len(SINGLE_QUBIT_INPUTS) ** 2          # 36
N_BASES = len(MEASUREMENT_BASES) ** 2             # 9
N_OUTCOMES = 4
N_CELLS = N_INPUTS * N_BASES * N_OUTCOMES         # 1296


@dataclass(frozen=True)
class TomographySettings:
    """Counting scale and seed of a simulated tomography run.

    ``counts_per_setting`` multiplies the per-cell rates (a rate of 1
    corresponds to a certain event, so a perfect gate would produce this
    many counts per input/basis pair).
    """

    counts_per_setting: int = 100000
    seed: int | None = None
    max_iterations: int = 100000
    convergence_tol: float = 1e-10


@dataclass(frozen=True)
class CountRecord:
    input_idx: int
    basis_idx: int
    outcome_idx: int
    count: float

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("counts must be nonnegative")


def _cached_effects() -> np.ndarray:
    """All 1296 effect operators psi^T (x) P_out, shape (36, 9, 4, 16, 16)."""
    inputs = []
    for sa in SINGLE_QUBIT_INPUTS:
        for sb in SINGLE_QUBIT_INPUTS:
            inputs.append(qmath.ketbra(qmath.two_qubit_product(sa, sb)))
    projectors = []
    for ba in MEASUREMENT_BASES:
        for bb in MEASUREMENT_BASES:
            outs = []
            for ka in ba:
                for kb in bb:
                    outs.append(qmath.ketbra(qmath.two_qubit_product(ka, kb)))
            projectors.append(outs)
    effects = np.empty((N_INPUTS, N_BASES, N_OUTCOMES, 16, 16), dtype=complex)
    for i, psi in enumerate(inputs):
        psi_t = psi.T
        for b, outs in enumerate(projectors):
            for o, proj in enumerate(outs):
                effects[i, b, o] = qmath.tensor(psi_t, proj)
    return effects


_EFFECTS: np.ndarray | None = None
_EFFECTS_PINV: np.ndarray | None = None


def effect_operators() -> np.ndarray:
    global _EFFECTS
    if _EFFECTS is None:
        _EFFECTS = _cached_effects()
    return _EFFECTS


def _effects_pinv() -> np.ndarray:
    """Pseudoinverse of the rate map vec(chi) -> rates (full rank 256)."""
    global _EFFECTS_PINV
    if _EFFECTS_PINV is None:
        a = effect_operators().reshape(N_CELLS, 16, 16).transpose(0, 2, 1)
        _EFFECTS_PINV = np.linalg.pinv(a.reshape(N_CELLS, 256))
    return _EFFECTS_PINV


def linear_inversion(rates: np.ndarray) -> np.ndarray:
    """Least-squares process matrix from outcome rates (may be indefinite)."""
    x = _effects_pinv() @ np.asarray(rates, dtype=complex).reshape(N_CELLS)
    chi = x.reshape(16, 16)
    return 0.5 * (chi + chi.conj().T)


def expected_rates(chi: np.ndarray) -> np.ndarray:
    """Outcome rates Tr[(psi^T (x) P) chi], shape (36, 9, 4).

    Per (input, basis) the four outcome rates sum to that input's success
    probability.
    """
    effects = effect_operators().reshape(N_CELLS, 16, 16)
    rates = np.einsum("cij,ji->c", effects, np.asarray(chi, dtype=complex)).real
    return np.clip(rates, 0.0, None).reshape(N_INPUTS, N_BASES, N_OUTCOMES)


def simulate_counts(
    rates: np.ndarray, total_scale: float, seed: int
) -> list[CountRecord]:
    """Poisson counts with mean rate * total_scale; deterministic per seed."""
    rates = np.asarray(rates, dtype=float)
    rng = np.random.default_rng(seed)
    counts = rng.poisson(rates * total_scale)
    records = []
    for i in range(N_INPUTS):
        for b in range(N_BASES):
            for o in range(N_OUTCOMES):
                records.append(CountRecord(i, b, o, int(counts[i, b, o])))
    return records


def records_to_array(records: list[CountRecord]) -> np.ndarray:
    counts = np.zeros((N_INPUTS, N_BASES, N_OUTCOMES), dtype=float)
    for rec in records:
        counts[rec.input_idx, rec.basis_idx, rec.outcome_idx] = rec.count
    return counts


def array_to_records(counts: np.ndarray) -> list[CountRecord]:
    counts = np.asarray(counts)
    return [
        CountRecord(i, b, o, float(counts[i, b, o]))
        for i in range(N_INPUTS)
        for b in range(N_BASES)
        for o in range(N_OUTCOMES)
    ]


@dataclass
class MLEResult:
    chi: np.ndarray
    log_likelihood: float
    iterations: int
    converged: bool
    log_likelihood_trace: list[float] = field(repr=False, default_factory=list)

    @property
    def chi_normalized(self) -> np.ndarray:
        """chi rescaled to Tr = 4 for presentation."""
        return self.chi * (4.0 / np.trace(self.chi).real)


def _log_likelihood(counts: np.ndarray, mu: np.ndarray) -> float:
    mask = counts > 0
    return float(np.sum(counts[mask] * np.log(mu[mask])) - np.sum(mu))


def mle_reconstruct(
    counts: list[CountRecord] | np.ndarray,
    settings: TomographySettings = TomographySettings(),
) -> MLEResult:
    """Maximum-likelihood process matrix from tomography counts.

    ``counts`` is either a list of CountRecord or an array of shape
    (36, 9, 4); non-integral counts are allowed so that exact expected
    rates can be fed through the same code path.
    """
    if isinstance(counts, np.ndarray):
        data = np.asarray(counts, dtype=float)
        if data.shape != (N_INPUTS, N_BASES, N_OUTCOMES):
            raise ValueError(f"counts array must have shape (36, 9, 4), got {data.shape}")
    else:
        data = records_to_array(counts)
    if np.any(data < 0):
        raise ValueError("counts must be nonnegative")
    n_total = float(data.sum())
    if n_total <= 0:
        raise ValueError("cannot reconstruct from all-zero counts")

    scale = float(settings.counts_per_setting)
    effects = effect_operators().reshape(N_CELLS, 16, 16)
    # sum of all effects is g * I (the inputs and projectors both resolve
    # scaled identities), which reduces the extremal equation to R chi R
    g = float(np.trace(sum_effects := np.einsum("cij->ij", effects)).real) / 16.0
    if np.max(np.abs(sum_effects - g * np.eye(16))) > 1e-9:
        raise AssertionError("tomography settings are not balanced")

    flat = data.reshape(N_CELLS)
    # warm start: PSD projection of the linear-inversion estimate; mix in
    # only as much identity as needed to keep every observed cell at a
    # strictly positive predicted rate
    seed = linear_inversion(flat / scale)
    w, q = np.linalg.eigh(seed)
    seed = (q * np.clip(w, 0.0, None)) @ q.conj().T
    target_trace = n_total / (scale * g)
    if np.trace(seed).real <= 0:
        seed = np.eye(16, dtype=complex)
    seed *= target_trace / np.trace(seed).real
    observed = flat > 0
    chi = seed
    mu = scale * np.einsum("cij,ji->c", effects, chi).real
    blend = 1e-12
    while np.any(mu[observed] <= 0.0) and blend <= 1.0:
        chi = (1.0 - blend) * seed + blend * (target_trace / 16.0) * np.eye(16)
        mu = scale * np.einsum("cij,ji->c", effects, chi).real
        blend *= 1e3
    ll = _log_likelihood(flat, mu)
    trace = [ll]
    converged = False
    iterations = 0

    for iterations in range(1, settings.max_iterations + 1):
        weights = np.where(flat > 0, flat / np.maximum(mu, 1e-300), 0.0)
        r_op = np.einsum("c,cij->ij", weights, effects) / g
        r_op = 0.5 * (r_op + r_op.conj().T)

        def step(eps: float) -> tuple[np.ndarray, np.ndarray, float]:
            k = (1.0 - eps) * np.eye(16) + eps * r_op
            cand = k @ chi @ k
            cand = 0.5 * (cand + cand.conj().T)
            cand *= n_total / (scale * g * max(np.trace(cand).real, 1e-300))
            mu_c = scale * np.einsum("cij,ji->c", effects, cand).real
            return cand, mu_c, _log_likelihood(flat, np.maximum(mu_c, 1e-300))

        cand, mu_c, ll_c = step(1.0)
        eps = 0.5
        while ll_c < ll - 1e-12 and eps > 1e-8:
            cand, mu_c, ll_c = step(eps)
            eps *= 0.5
        chi, mu = cand, mu_c
        trace.append(ll_c)
        if abs(ll_c - ll) < settings.convergence_tol * (1.0 + abs(ll_c)):
            ll = ll_c
            converged = True
            break
        ll = ll_c

    return MLEResult(chi=chi, log_likelihood=ll, iterations=iterations,
                     converged=converged, log_likelihood_trace=trace)
