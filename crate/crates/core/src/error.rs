use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series too short: {len} observations, at least {required} required")]
    TooShort { len: usize, required: usize },
    #[error("price at position {index} is not strictly positive ({value})")]
    NonPositivePrice { index: usize, value: f64 },
    #[error("dates are not strictly increasing at position {index}")]
    UnorderedDates { index: usize },
    #[error("dates and prices differ in length ({dates} vs {prices})")]
    DateCountMismatch { dates: usize, prices: usize },
    #[error("invalid synthetic series spec: {0}")]
    InvalidSpec(&'static str),
    #[error("bad node spacing {spacing} for domain width {width}")]
    BadSpacing { spacing: f64, width: f64 },
    #[error("node index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point {x} lies outside the partition domain [{start}, {end}]")]
    OutOfDomain { x: f64, start: f64, end: f64 },
    #[error("node {node} has no sample with positive membership")]
    EmptySupport { node: usize },
    #[error("sample times and values differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
    #[error("bad quadrature spec: {0}")]
    BadQuadratureSpec(&'static str),
    #[error("return series of length {len} is too short for horizon {horizon} (need {required})")]
    SeriesTooShort {
        len: usize,
        horizon: usize,
        required: usize,
    },
    #[error("bad horizon {0}: must be at least 2")]
    BadHorizon(usize),
    #[error("series is already annualized")]
    AlreadyAnnualized,
    #[error("empty series")]
    EmptySeries,
    #[error("theta must be positive and finite, got {0}")]
    BadTheta(f64),
    #[error("bad argument: {0}")]
    BadArgument(&'static str),
    #[error("the two volatility series have no defined index in common")]
    NoOverlap,
    #[error("zero variance in at least one coordinate")]
    DegenerateVariance,
    #[error("at least 2 pairs are required, got {0}")]
    TooFewPairs(usize),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
