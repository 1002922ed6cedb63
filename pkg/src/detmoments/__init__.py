"""Exact generating functions for moments of random matrix determinants."""
from .algebra import GaussianRational, MomentPolynomial, Symbol, sym
from .catalog import CatalogEntry, catalog_entry, egf_hermitian, egf_symmetric, egf_wigner, reference_formula
from .ensembles import EnsembleSpec, MomentAssignment, validate_assignment, wigner_lambda_map
from .eulerian import b_series, eulerian_number, eulerian_polynomial, exp_ratio_series
from .oracle import PermutationTable, exact_moment
from .series import EgfSeries, egf_coefficient

__version__ = "0.1.0"
