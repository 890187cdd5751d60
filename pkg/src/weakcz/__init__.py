"""Bypass-enhanced controlled-Z gates between weakly coupled qubits.

Library layout:

* :mod:`weakcz.qmath` -- dense complex linear algebra and basis states
* :mod:`weakcz.spin` -- CZ protocol for a weak controlled-phase coupling
* :mod:`weakcz.optical` -- ideal interferometric bypass scheme
* :mod:`weakcz.imperfections` -- analytic model of the experimental gate
* :mod:`weakcz.fock` -- brute-force two-photon simulation (cross-check)
* :mod:`weakcz.metrics` -- process fidelity, Hofmann bound, success rates
* :mod:`weakcz.tomography` -- simulated tomography and ML reconstruction
* :mod:`weakcz.plots` -- figure rendering
* :mod:`weakcz.cli` -- command-line interface
"""

__version__ = "0.1.0"

from .errors import InfeasibleError, OracleMismatchError
from .imperfections import SetupParams, SweepRecord, process_matrix, sweep_phi_x
from .metrics import (
    average_success_probability,
    chi_cz_reference,
    hofmann_bound,
    process_fidelity,
    uhlmann_fidelity,
)
from .optical import OpticalSchemeParams, bypass_amplitudes, optimal_bypass
from .spin import SpinProtocolParams, controlled_phase, optimal_couplings, run_protocol
from .tomography import TomographySettings, expected_rates, mle_reconstruct, simulate_counts

__all__ = [
    "InfeasibleError",
    "OracleMismatchError",
    "OpticalSchemeParams",
    "SetupParams",
    "SpinProtocolParams",
    "SweepRecord",
    "TomographySettings",
    "average_success_probability",
    "bypass_amplitudes",
    "chi_cz_reference",
    "controlled_phase",
    "expected_rates",
    "hofmann_bound",
    "mle_reconstruct",
    "optimal_bypass",
    "optimal_couplings",
    "process_fidelity",
    "process_matrix",
    "run_protocol",
    "simulate_counts",
    "sweep_phi_x",
    "uhlmann_fidelity",
]
