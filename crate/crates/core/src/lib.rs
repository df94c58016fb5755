//! Exact cohomological criteria and special Hermitian metrics for compact
//! quotients of Lie groups with invariant complex structures.
//!
//! The pipeline is: parse structure equations ([`structure`]), evaluate them
//! at a parameter assignment, build the double complex of invariant forms
//! ([`complex`]), compute cohomology ([`cohomology`]) and decide the
//! `∂∂̄`-type criteria ([`criteria`]). [`metrics`] checks invariant Hermitian
//! metrics against the same complex.

pub mod cohomology;
pub mod complex;
pub mod criteria;
pub mod error;
pub mod expr;
pub mod exterior;
pub mod linalg;
pub mod metrics;
pub mod random;
pub mod scalar;
pub mod structure;

pub use cohomology::{Cohomology, CohomologyTable, MapRanks};
pub use complex::{load_raw_complex, DoubleComplex};
pub use criteria::{criteria_report, CriteriaReport};
pub use error::{Error, Result};
pub use expr::{parse_assignment, Assignment, CoefExpr, SymbolicForm};
pub use exterior::{basis, BasisForm, Form};
pub use linalg::{Matrix, Subspace};
pub use metrics::{check_metric, check_positive, find_balanced, BalancedSearch, Lcb, MetricReport};
pub use scalar::Scalar;
pub use structure::{parse_manifold, CoframeChange, Structure, StructureEquations, ValidationReport};
