//! Exact N-expansion arithmetic, fundamental-interval geometry, dimension
//! bounds for bounded and growing digit sets, a numerical dimension
//! estimator and exhaustive verifiers for the inequalities behind the bounds.
//!
//! The N-expansion of `x` in `(0, 1)` is generated by
//! `T_N(x) = N/x - floor(N/x)` and has digits `e_n >= N`.

pub mod bounds;
pub mod error;
pub mod expansion;
pub mod hp;
pub mod intervals;
pub mod pressure;
pub mod rational;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use expansion::{
    apply_map, check_determinant, check_growth, convergents, digits_of, evaluate, ConvergentPair, DigitWord,
    GrowthBound, NParam, Step,
};
pub use intervals::{
    check_ratio_bounds, check_two_sided_bounds, fundamental_interval, interval_length, telescoping_sum,
    FundamentalInterval, TelescopingSum,
};
pub use rational::{parse_rational, ExactRational};
