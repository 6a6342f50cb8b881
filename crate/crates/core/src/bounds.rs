//! Linear bounds of the form `(a·n + b) / d` on game length.
//!
//! Evaluation is generic over the scalar: use [`crate::Exact`] for exact
//! comparisons and `f64` for report columns. Turn counts are integers, so
//! [`LinearBound::floor`] gives the equivalent integer threshold.

use std::fmt;

use num_traits::{FromPrimitive, Num};
use serde::Serialize;

/// Scalars a bound can be evaluated in.
pub trait Scalar: Num + FromPrimitive + PartialOrd + Copy + fmt::Debug {}

impl<T> Scalar for T where T: Num + FromPrimitive + PartialOrd + Copy + fmt::Debug {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinearBound {
    pub coef: i64,
    pub offset: i64,
    pub denom: i64,
    pub label: &'static str,
}

impl LinearBound {
    pub const fn new(coef: i64, offset: i64, denom: i64, label: &'static str) -> Self {
        LinearBound { coef, offset, denom, label }
    }

    pub fn eval<T: Scalar>(&self, n: usize) -> T {
        let num = T::from_i64(self.coef * n as i64 + self.offset).expect("bound numerator fits");
        num / T::from_i64(self.denom).expect("bound denominator fits")
    }

    /// Largest integer not above the bound.
    pub fn floor(&self, n: usize) -> i64 {
        (self.coef * n as i64 + self.offset).div_euclid(self.denom)
    }

    pub fn admits(&self, n: usize, turns: usize) -> bool {
        turns as i64 <= self.floor(n)
    }

    /// `bound(n) - turns`, in the requested scalar.
    pub fn slack<T: Scalar>(&self, n: usize, turns: usize) -> T {
        self.eval::<T>(n) - T::from_usize(turns).expect("turn count fits")
    }
}

impl fmt::Display for LinearBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label)
    }
}

/// Dominator-start bound for forests without leaves at distance 4.
pub const THREE_FIFTHS: LinearBound = LinearBound::new(3, 0, 5, "3n/5");
/// Staller-start counterpart of [`THREE_FIFTHS`].
pub const THREE_FIFTHS_STALLER: LinearBound = LinearBound::new(3, 1, 5, "(3n+1)/5");
/// Dominator-start bound for every isolate-free forest.
pub const FIVE_EIGHTHS: LinearBound = LinearBound::new(5, 0, 8, "5n/8");
pub const FIVE_EIGHTHS_STALLER: LinearBound = LinearBound::new(5, 2, 8, "(5n+2)/8");
/// Earlier general forest bound, kept for slack comparison.
pub const SEVEN_ELEVENTHS: LinearBound = LinearBound::new(7, 0, 11, "7n/11");
/// Conjectured Staller-start bound for all isolate-free forests.
pub const CONJECTURED_STALLER: LinearBound = LinearBound::new(3, 2, 5, "(3n+2)/5");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    #[test]
    fn floors() {
        assert_eq!(THREE_FIFTHS.floor(5), 3);
        assert_eq!(THREE_FIFTHS.floor(4), 2);
        assert_eq!(FIVE_EIGHTHS.floor(5), 3);
        assert_eq!(FIVE_EIGHTHS_STALLER.floor(2), 1);
        assert_eq!(THREE_FIFTHS_STALLER.floor(3), 2);
        assert_eq!(SEVEN_ELEVENTHS.floor(11), 7);
    }

    #[test]
    fn generic_evaluation_agrees() {
        for n in 0..200 {
            let exact: Exact = FIVE_EIGHTHS.eval(n);
            let float: f64 = FIVE_EIGHTHS.eval(n);
            assert!((float - *exact.numer() as f64 / *exact.denom() as f64).abs() < 1e-12);
            assert_eq!(exact.floor().to_integer(), FIVE_EIGHTHS.floor(n));
        }
        let s: Exact = SEVEN_ELEVENTHS.slack(11, 6);
        assert_eq!(s, Exact::from_integer(1));
    }
}
