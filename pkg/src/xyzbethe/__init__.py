"""Bethe ansatz solver and spectral verification for the periodic XYZ chain."""

from .elliptic import EllipticContext, bar_ell, ell, ell_prime, theta
from .lattice import (
    ModelParams,
    SpectrumEntry,
    couplings,
    exact_spectrum,
    hamiltonian,
    hamiltonian_from_transfer,
    r_matrix,
    transfer_matrix,
)
from .baesolver import (
    BetheSolution,
    SolverConfig,
    bae_residual,
    canonicalize,
    energy,
    energy_singular,
    multi_start_solve,
    newton_solve,
    singular_bae_residual,
    singular_solve,
    sum_rule,
)
from .tqverify import MatchReport, entireness_check, lambda_tq, match_spectrum
from .xxz import (
    XXZParams,
    XXZSolution,
    asymptotic_beta_check,
    homotopy_correspondence,
    phantom_string,
    xxz_bae_residual,
    xxz_r_matrix,
    xxz_solve,
)
from .expressions import parse_complex

__version__ = "0.1.0"

__all__ = [
    "EllipticContext", "theta", "ell", "ell_prime", "bar_ell",
    "ModelParams", "SpectrumEntry", "couplings", "r_matrix",
    "transfer_matrix", "hamiltonian", "hamiltonian_from_transfer",
    "exact_spectrum",
    "SolverConfig", "BetheSolution", "bae_residual", "singular_bae_residual",
    "sum_rule", "newton_solve", "multi_start_solve", "singular_solve",
    "energy", "energy_singular", "canonicalize",
    "MatchReport", "lambda_tq", "entireness_check", "match_spectrum",
    "XXZParams", "XXZSolution", "xxz_r_matrix", "xxz_bae_residual",
    "xxz_solve", "phantom_string", "asymptotic_beta_check",
    "homotopy_correspondence",
    "parse_complex",
    "__version__",
]
