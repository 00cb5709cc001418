//! Exact construction of the Veronese determinantal matrix, its 2-minor
//! ideal, the Veronese map `nu_d : P^n -> P^N` with its inverse morphism, and
//! symbolic and finite-field checks that the minors cut out exactly the
//! Veronese image.
//!
//! ```
//! use veronese_core::{Rationals, Veronese, VeroneseContext, parse_point, render_point};
//!
//! let v = Veronese::new(&VeroneseContext::new(1, 3)?)?;
//! let x = parse_point(&Rationals, "[1 : 2]")?;
//! let q = v.eval(&Rationals, &x)?;
//! assert_eq!(render_point(&Rationals, &q), "[1 : 2 : 4 : 8]");
//! assert!(v.is_on_variety(&Rationals, &q)?);
//! assert_eq!(v.inverse_map(&Rationals, &q)?, x);
//! # Ok::<(), veronese_core::Error>(())
//! ```

pub mod certificate;
pub mod error;
pub mod matrix;
pub mod multiindex;
pub mod oracle;
pub mod projective;
pub mod sample;
pub mod veronese;

pub use certificate::{RewriteStep, Step1Certificate, Step1Step, Step3Chain, VerifyFailure};
pub use error::{Error, Result};
pub use matrix::{
    build_matrix, build_matrix_by_columns, minors2, toric_quadrics, Binomial2, MatrixDocument,
    SymbolicMatrix,
};
pub use multiindex::{
    binom, enumerate_monomials, lex_compare, rank, unrank, MultiIndex, VeroneseContext,
};
pub use oracle::{
    brute_force_image, brute_force_variety, check_set_equality, check_toric_equality, Comparison,
    EqualityReport, OracleConfig, DEFAULT_BUDGET,
};
pub use projective::{
    enumerate_projective_points, normalize, parse_point, proj_eq, projective_point_count,
    render_point, Field, PointEnumerator, PrimeField, ProjectivePoint, Rationals,
};
pub use sample::{PointSampler, SampleField};
pub use veronese::{ChartIndex, Veronese};
