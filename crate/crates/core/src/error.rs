use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polygon size {n} is too small (need n >= 3)")]
    PolygonTooSmall { n: usize },

    #[error("vertex {v} out of range for an {n}-gon")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("({a},{b}) is not a valid diagonal shape for an {n}-gon")]
    InvalidDiagonal { a: usize, b: usize, n: usize },

    #[error("expected {expected} diagonals for an {n}-gon, found {found}")]
    WrongDiagonalCount {
        n: usize,
        expected: usize,
        found: usize,
    },

    #[error("duplicate diagonal ({a},{b})")]
    DuplicateDiagonal { a: usize, b: usize },

    #[error("diagonals ({},{}) and ({},{}) cross", first.0, first.1, second.0, second.1)]
    CrossingDiagonals {
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("({a},{b}) is not a diagonal of the triangulation")]
    NotADiagonal { a: usize, b: usize },

    #[error("degree bound k={k} is unsupported here (need k >= {min})")]
    UnsupportedBound { k: usize, min: usize },

    #[error("max vertex degree {max_degree} exceeds the bound k={k}")]
    DegreeBoundExceeded { max_degree: usize, k: usize },

    #[error("triangulations have different polygon sizes: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("enumeration budget exceeded: n={n} > {max_n} (roughly {estimate} triangulations)")]
    BudgetExceeded { n: usize, max_n: usize, estimate: u128 },

    #[error("triangulation is not a zigzag triangulation")]
    NotZigzag,

    #[error("triangulation is not a fringe triangulation")]
    NotFringe,

    #[error("merge triangle with tip {tip} is not light for k={k}")]
    NotLight { tip: usize, k: usize },

    #[error("inverting this zigzag would push vertex {vertex} to degree {degree} > k={k}")]
    InversionCapViolation {
        vertex: usize,
        degree: usize,
        k: usize,
    },

    #[error("degree cap violated at vertex {vertex}: degree {degree} > k={k}")]
    DegreeCapViolated {
        vertex: usize,
        degree: usize,
        k: usize,
    },

    #[error("flip {index} fails during replay: {source}")]
    ReplayFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("flip {index} removes ({},{}) but the counterpart is ({},{}), not ({},{})",
        removed.0, removed.1, expected.0, expected.1, recorded.0, recorded.1)]
    WrongCounterpart {
        index: usize,
        removed: (usize, usize),
        expected: (usize, usize),
        recorded: (usize, usize),
    },

    #[error("sequence replay ends at a different triangulation than recorded")]
    FinalMismatch,

    #[error("recorded max intermediate degree {recorded} but replay observed {observed}")]
    MaxDegreeMismatch { recorded: usize, observed: usize },

    #[error("{0}")]
    Document(String),
}
