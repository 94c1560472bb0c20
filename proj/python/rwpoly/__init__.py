"""Sparsifiers for random-walk matrix polynomials."""

from ._core import (
    FactorChain,
    Graph,
    ResistanceOracle,
    RwpolyError,
    Sddm,
    SimilarityReport,
    cli,
    dense_poly,
    dense_sddm_poly,
    enumerate_mass,
    exact_er,
    extra_diagonal,
    gen,
    inv_sqrt_chain,
    linear_similarity_check,
    qth_root_coefficients,
    scalar_inequality_violations,
    schedule,
    similarity_check,
    sparsify_high_degree,
    sparsify_monomial,
    sparsify_poly,
    sparsify_sddm,
)

__version__ = "0.1.0"
