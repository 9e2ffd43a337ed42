//! Exact symbolic engine for algebras of generic traceless 2x2 matrices:
//! sparse multivariate polynomial arithmetic over the rationals, the matrix
//! identity catalog, graded-dimension tables by exact sparse rank, and
//! rational Hilbert series with Gelfand-Kirillov dimension extraction via
//! pole multiplicity at 1.

pub mod error;
pub mod hilbert;
pub mod identities;
pub mod lie;
pub mod matrix;
pub mod poly;
pub mod rank;
pub mod scalar;
pub mod span;

pub use error::{Error, Result};
pub use hilbert::{
    fit_numerator, gkdim_from_series, growth_exponent, parse_series, pole_multiplicity_at_one,
    search_fit, series_divide_by_free_ring, series_product, EstimatorMethod, GrowthEstimate,
    RationalSeries, DEFAULT_FIT_GUARD, DEFAULT_HILBERT_DEPTH,
};
pub use identities::{verify_all, verify_identity, IdentityCheck, IdentityStatus};
pub use lie::{lyndon_brackets, lyndon_words, necklace_count, LieWord};
pub use matrix::{
    commutator, generic_matrix, generic_traceless, generic_traceless_projected, left_normed,
    mat_add, mat_mul, mat_scale, mat_scale_poly, mat_sub, standard_s3, trace,
    traceless_generators, Form, GenericMatrix,
};
pub use poly::{
    coefficient_vector, from_coefficient_vector, monomials_of_degree, Monomial, MultiPoly, VarId,
    VarKind,
};
pub use scalar::{CoeffMode, Scalar};
pub use span::{
    assoc_component_dim, growth_table, lie_component_dim, membership, mixed_trace_component_dim,
    module_check, sandwich_check, trace0_component_dim, trace_component_dim, AlgebraKind, Backend,
    EngineOptions, GrowthRow, GrowthTable, Membership, ModuleCheckReport, SandwichReport,
    SpanElement, SpanningSet, DEFAULT_PRIME,
};
