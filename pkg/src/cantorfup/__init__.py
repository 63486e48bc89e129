"""Discrete fractal uncertainty quantities for Cantor alphabets."""
__version__ = "0.1.0"

from .cantor import Alphabet, IteratedAlphabet, iterate, mu_hat_truncated, nu_hat
from .classify import (ClassificationReport, M2PairFamily, construct_case_prime_power_times_q,
                       construct_case_squarefree, product_form_example, search_dsp,
                       spectral_pairs_in_M2)
from .cyclotomic import IntPolynomial, cyclotomic_poly, mask_polynomial, vanishes_at
from .norms import beta_sequence, build_gram, submatrix_norm, witness_lower_bound
from .omega import OmegaSpec, enumerate_omega, omega_formula
from .pairs import (evaluate_pair, is_distributed_spectral_pair, is_spectral_pair,
                    satisfies_dj_condition, verify_block_structure)

__all__ = [
    "Alphabet",
    "ClassificationReport",
    "IntPolynomial",
    "IteratedAlphabet",
    "M2PairFamily",
    "OmegaSpec",
    "beta_sequence",
    "build_gram",
    "construct_case_prime_power_times_q",
    "construct_case_squarefree",
    "cyclotomic_poly",
    "enumerate_omega",
    "evaluate_pair",
    "is_distributed_spectral_pair",
    "is_spectral_pair",
    "iterate",
    "mask_polynomial",
    "mu_hat_truncated",
    "nu_hat",
    "omega_formula",
    "product_form_example",
    "satisfies_dj_condition",
    "search_dsp",
    "spectral_pairs_in_M2",
    "submatrix_norm",
    "vanishes_at",
    "verify_block_structure",
    "witness_lower_bound",
]
