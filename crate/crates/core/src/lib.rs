//! Common fixed points of `psi-(alpha,beta,m)`-contraction pairs.
//!
//! A pair of self-maps `(S, T)` of a metric space is a contraction pair when
//! for all `x, y`
//!
//! ```text
//! psi(d(Sx,Sy)) <= alpha(d(Tx,Ty)) psi(d(Tx,Ty)) + beta(d(Tx,Ty)) psi(m(x,y))
//! m(x,y) = max{ d(Sy,Ty) (1 + d(Sx,Tx)) / (1 + d(Tx,Ty)), d(Tx,Ty) }
//! ```
//!
//! with `psi` an altering distance function and `alpha + beta < 1`. Such a
//! pair with `S(M) ⊆ T(M)` and `T(M)` complete has exactly one point of
//! coincidence, reached by the Jungck iteration `y_n = S x_n = T x_{n+1}`.
//!
//! The crate is organised as:
//!
//! * [`metric`]: finite matrix-backed spaces and Euclidean boxes.
//! * [`expr`]: a small expression language for 1-D maps and control functions.
//! * [`control`]: `psi`, `alpha`, `beta` and their certificates.
//! * [`contraction`]: map pairs and certification of the inequality.
//! * [`solver`]: the Jungck iteration, point-of-coincidence extraction and
//!   crossing-index diagnostics for non-Cauchy sequences.
//! * [`oracle`]: exhaustive ground truth on finite spaces, theorem verdicts and
//!   a seeded fuzzer.
//! * [`instance`], [`cli`], [`demos`]: the JSON file format, the `jungck`
//!   command line, and built-in example instances.
//!
//! ```
//! use jungck::prelude::*;
//!
//! let space = Space::Finite(FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap());
//! let pair = SelfMapPair::tables(vec![0, 0, 1], vec![0, 1, 2]);
//! let triple = ControlTriple::constants(0.6, 0.3);
//!
//! let report = certify_finite(&pair, &triple, space.as_finite().unwrap()).unwrap();
//! assert!(report.certified);
//!
//! let trace = iterate(&pair, &triple, &space, &PointRef::Index(2), IterateOptions::default()).unwrap();
//! assert_eq!(trace.limit, Some(PointRef::Index(0)));
//! ```

pub mod cli;
pub mod contraction;
pub mod control;
pub mod demos;
pub mod expr;
pub mod instance;
pub mod metric;
pub mod oracle;
pub mod solver;

pub mod prelude {
    pub use crate::contraction::{
        certify_finite, certify_sampled, check_inequality_at, m_value, CertificationReport, SelfMap, SelfMapPair,
    };
    pub use crate::control::{
        check_altering_distance, check_control_pair, uniform_grid, ControlTriple, FunctionCertificate,
        FunctionDescriptor,
    };
    pub use crate::expr::Expr;
    pub use crate::metric::{distance, validate_metric, EuclideanDomain, FiniteMetricSpace, PointRef, Space};
    pub use crate::oracle::{generate_instance, verify_theorems, OracleReport, Strategy, TheoremId, Verdict};
    pub use crate::solver::{
        cauchy_crossing_indices, check_inclusion, extract_poc, iterate, lemma_limit_estimates, resolve_t_preimage,
        IterateOptions, IterationTrace,
    };
}
