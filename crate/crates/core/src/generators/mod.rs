//! Instance families: SAT reductions, odd-graph and expander gap instances,
//! and seeded random instances.

mod cnf;
mod expander;
mod kneser;
mod random;
mod sat;

use thiserror::Error;

pub use cnf::{normalize_formula, parse_dimacs, CnfFormula, Literal};
pub use expander::{gen_expander, random_regular};
pub use kneser::{gen_kneser, MAX_KNESER_S};
pub use random::gen_random;
pub use sat::{default_big_m, gen_sat, sat_certificate, ReductionMap};

use crate::model::{InstanceError, Weight};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("dimacs line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("variable {0} out of range")]
    VariableOutOfRange(usize),
    #[error("variable {var} repeated in clause {clause}")]
    RepeatedVariable { var: usize, clause: usize },
    #[error("variable {var} occurs {count} times, expected 3")]
    OccurrenceCount { var: usize, count: usize },
    #[error(
        "variable {var} has {negatives} negative occurrences; cannot normalize to exactly one"
    )]
    Unnormalizable { var: usize, negatives: usize },
    #[error("variable {0} does not occur twice positive and once negative")]
    NotNormalized(usize),
    #[error("M = {value} must exceed {floor}")]
    SmallM { value: Weight, floor: Weight },
    #[error("assignment has {found} values, formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("clause {0} is not satisfied")]
    Unsatisfied(usize),
    #[error("{0}")]
    Routing(String),
    #[error("odd-graph parameter s = {0} outside 2..=6")]
    KneserSize(usize),
    #[error("n·d = {n}·{d} is odd")]
    OddDegreeSum { n: usize, d: usize },
    #[error("degree {d} too large for {n} nodes")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("no simple {d}-regular graph on {n} nodes found")]
    RegularGraph { n: usize, d: usize },
    #[error("color size {size} invalid for {nodes} nodes")]
    BadColorSize { size: usize, nodes: usize },
    #[error("invalid random parameters n={n} k={k} color_size={color_size}")]
    RandomParams {
        n: usize,
        k: usize,
        color_size: usize,
    },
    #[error("weight range must be nonempty and nonnegative")]
    WeightRange,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}
