//! Numerical toolkit for complex hypercontractivity of the noise operator
//! on the Hamming cube.
//!
//! The crate is organized around one question: for which complex `z` does
//! `||T_z f||_q <= ||f||_p` hold uniformly in the dimension? It provides
//!
//! * [`cube`] — Fourier–Walsh analysis, the noise operator and its spectral
//!   relatives, on cubes of dimension up to 24;
//! * [`lens`] — the admissible domain of `z`, its polar boundary by two
//!   independent routes, and the exterior-angle exponent;
//! * [`margins`] + [`scan`] — signed margins for each inequality in the
//!   chain of lemmas behind the theorem, and parallel grid scans with
//!   refinement that report the worst margin with a witness;
//! * [`oracle`] — brute-force norm-ratio checks and a seeded counterexample
//!   search, plus the tensorization and induction identities that reduce
//!   everything to one dimension;
//! * [`moment`] + [`simplex`] — the extremal multiplier constant as a
//!   minimum-total-variation moment problem, sandwiched between a dual
//!   polynomial bound and a feasible atomic measure.

pub mod cube;
pub mod error;
pub mod lens;
pub mod margins;
pub mod moment;
pub mod oracle;
pub mod report;
pub mod scan;
pub mod simplex;

pub use cube::CubeFunction;
pub use error::{Error, Result};
pub use lens::{admissibility_margin, alpha, boundary_point, is_admissible, LensParams};
pub use moment::{AtomicMeasure, MomentProblem, NormSandwich};
pub use oracle::{norm_ratio, search_violation, SearchConfig};
pub use report::VerificationReport;
