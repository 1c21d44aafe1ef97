use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("permutation {perm:?} is not an ({m},{n})-shuffle")]
    NotAShuffle { perm: Vec<usize>, m: usize, n: usize },
    #[error("block {index} has size zero")]
    EmptyBlock { index: usize },
    #[error("shuffles are not adjacent: {0}")]
    NotAdjacent(String),
    #[error("weight component is infinite-dimensional; a degree cap is required")]
    UnboundedWeightComponent,
    #[error("d^2 != 0 from degree {degree}")]
    DSquareNonzero { degree: usize },
    #[error("not a complex: D_{{i+1}} D_i != 0 at i = {index}")]
    NotAComplex { index: usize },
    #[error("maps[{degree}+1] * maps[{degree}] != 0")]
    NotComposable { degree: usize },
    #[error("denominator factor (1 - s_{a}/s_{b}) opposes the expansion region")]
    NonExpandableFactor { a: usize, b: usize },
    #[error("weight {0:?} is not block-dominant")]
    NotBlockDominant(Vec<i64>),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("certified box too small: {0}")]
    BoxTooSmall(String),
    #[error("u-column cap too small: need at least {needed}")]
    CapTooSmall { needed: usize },
    #[error("decomposition accounting failed: {0}")]
    DecompositionFailure(String),
    #[error("not a morphism of mixed complexes: {0}")]
    NotAMorphism(String),
    #[error("unknown module label: {0}")]
    UnknownLabel(String),
    #[error("H acts nontrivially; not a mixed complex")]
    HNonzero,
    #[error("invalid mixed complex: {relation} fails at degree {degree}")]
    InvalidMixedComplex { relation: &'static str, degree: i64 },
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
