//! Exact max-plus linear algebra over `ℚ ∪ {−∞}`.
//!
//! Entries are [`TropScalar`]s backed by arbitrary-precision rationals, so
//! every reported equality is exact.

pub mod error;
pub mod exp;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod periodicity;
pub mod scalar;
pub mod spectral;

pub mod cli;

pub use error::{Error, ParseError, Result};
pub use exp::{exp_eigenvalue_check, exp_partial_sum, mat_exp, ExpResult};
pub use graph::{
    block_periods, critical_graph, frobenius_normal_form, is_irreducible, max_cycle_mean, period, scc_decompose,
    spectral_data, Digraph, FrobeniusForm, SpectralData,
};
pub use io::{format_matrix, format_vector, parse_matrix, parse_vector};
pub use matrix::TropMatrix;
pub use oracle::{Oracle, OracleConfig};
pub use periodicity::{
    exp_columns_gen_eig, exp_robustness_criterion, gen_eig_order, gen_orders_census, is_quasi_robust, is_robust,
    orbit, ultimate_period, GenEigRecord, OrbitReport, PeriodicityCertificate,
};
pub use scalar::{scalar_exp, scalar_log, trop_factorial, TropScalar};
pub use spectral::{check_eigen, eigenvectors, kleene_star, metric_matrix, EigenBasis};
