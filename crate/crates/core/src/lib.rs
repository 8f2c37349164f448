//! Numerical toolkit for ρ-contractions: operator radii, the operator-valued
//! ρ-kernel, Harnack domination certificates, and the classification of the
//! Harnack part of the normalized 5×5 truncated shift.

pub mod error;
pub mod grid;
pub mod harnack;
pub mod kernels;
pub mod operator;
pub mod oracle;
pub mod radii;
pub mod report;
pub mod shift5;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use harnack::{domination_constant, in_zero_part, is_equivalent, DominationCertificate};
pub use kernels::{rho_kernel, KernelEvaluation, KernelEvaluator};
pub use operator::{block_decompose, build_shift, BlockForm, ComplexSquareMatrix, HermitianForm, NullVectorParams};
pub use oracle::{check_polynomial_identity, check_scalar_relations, trace_cross_check, IdentityId, PolyIdentityCheck};
pub use radii::{numerical_radius, operator_norm, rho_radius, spectral_radius, RadiusResult};
pub use report::ConditionEntry;
pub use shift5::{
    check_corollary_conditions, classify, classify_with, family1, family2, reference_family, ConditionId,
    ConditionReport, Family, FamilyTag,
};

pub use num_complex::Complex64;
