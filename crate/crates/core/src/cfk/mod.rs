//! Filtered chain complexes over `F_2[U, U^-1]` modelling `CFK^∞`.

mod complex;
pub mod f2;
mod homology;
mod invariants;
mod lan;

use thiserror::Error;

use crate::arith::Rational;

pub use complex::{
    reduce, staircase, Arrow, ArrowJson, CFKComplex, ComplexJson, Generator, ValidationReport,
};
pub use homology::{default_window, homology, homology_total, GradedDims, Region, Translate};
pub use invariants::{
    cycle_supports, d_large_surgery, d_one, filtered_homology, h_infinity_check, min_large_surgery,
    tau, tower_bottom, HInfinityReport, TowerBottom,
};
pub use lan::{check_lan, verify_prop_c, whitehead_double_hfk, Chain, LanReport, PropReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfkError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("arrow {from} -> {to} has negative U-power {u}")]
    NegativePower { from: String, to: String, u: i64 },
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid gaps: {0}")]
    InvalidGaps(String),
    #[error("window {window:?} too small for {region} (needs {needed:?})")]
    WindowTooSmall {
        region: String,
        needed: Option<(i64, i64)>,
        window: Option<(i64, i64)>,
    },
    #[error("complex is not S^3-like: {0}")]
    NotSphereLike(String),
    #[error("surgery coefficient {r} below {min}")]
    SurgeryTooSmall { r: i64, min: i64 },
    #[error("the companion knot must be non-trivial (genus >= 1)")]
    TrivialCompanion,
    #[error("missing H(F(K, {0}))")]
    MissingFiltration(i64),
    #[error("negative rank {value} in Alexander degree {j}, grading {grading}")]
    InconsistentRanks { j: i64, grading: i64, value: i64 },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("expected {expected}, got {got}")]
    ValueMismatch { expected: Rational, got: Rational },
}
