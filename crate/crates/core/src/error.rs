use thiserror::Error;

use crate::point::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("duplicate point {0}")]
    DuplicatePoint(Box<Point>),

    #[error("point set needs at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("vertices are not pairwise distinct")]
    RepeatedVertex,

    #[error("collinear vertex triple")]
    Collinear,

    #[error("identical lines have no isolated intersection")]
    IdenticalLines,

    #[error("similitude with a = 0 is not a group element")]
    NotInvertible,

    #[error("mirror image shares point {0} with the original set")]
    MirrorNotDisjoint(Box<Point>),

    #[error("degenerate mirror line (a = b = 0)")]
    DegenerateLine,

    #[error("cannot place {want} distinct points on a lattice of {available}")]
    LatticeExhausted { want: usize, available: u128 },

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("{max_collinear} of {n} points are collinear, more than half")]
    HypothesisViolation { n: usize, max_collinear: usize },

    #[error("{what} limited to N <= {cap}, got N = {n}")]
    CapExceeded { what: &'static str, cap: usize, n: usize },

    #[error("arrangement invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
