//! Historical volatility estimation with the discrete fuzzy transform.
//!
//! The crate is `no_std` and only needs an allocator. It covers:
//!
//! - [`timeseries`]: price and return series, seeded synthetic prices;
//! - [`partition`]: uniform fuzzy partitions with hat or raised-cosine basic
//!   functions;
//! - [`ftransform`]: direct and inverse fuzzy transforms, discrete and
//!   continuous, and the weighted least-squares functional they minimize;
//! - [`volatility`]: the fuzzy-transform deviation `d_t = h_t - b_t`, rolling
//!   standard deviation, theta-deviation and the Luce risk functional;
//! - [`analysis`]: alignment and Pearson correlation of two volatility
//!   series across several horizons.
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod ftransform;
pub mod partition;
pub mod timeseries;
pub mod volatility;

pub use analysis::{
    align, compare, compare_horizon, pearson, pearson_xy, AlignedPairs, CompareOptions, Comparison,
    ComparisonReport, Horizon, HorizonComparison, HorizonRecord,
};
pub use error::{Error, Result};
pub use ftransform::{
    direct_continuous, direct_discrete, error_functional, inverse_discrete, FTransform,
    Normalization, Quadrature, QuadratureRule,
};
pub use partition::{FuzzyPartition, Shape};
pub use timeseries::{
    log_returns, returns, simple_returns, synth_prices, CalendarDay, PriceSeries, ReturnKind,
    ReturnSeries, SynthSpec,
};
pub use volatility::{
    annualize, deviation_upper_bound, deviation_upper_bound_with, ft_volatility, luce_risk,
    rolling_mean, series_partition, std_volatility, theta_deviation, u_function, DeviationBound,
    Estimator, FtVolDecomposition, LuceRiskParams, Method, VolatilitySeries, TRADING_DAYS_PER_YEAR,
};
