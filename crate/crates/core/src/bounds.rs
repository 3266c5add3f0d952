//! Upper bounds on the stretch factor of a c-chain with n vertices and the
//! exponent of the matching lower-bound construction. Logarithms are base 2.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BestBound {
    Logc,
    Linear,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub logc_bound: f64,
    pub linear_bound: f64,
    pub sqrt_bound: f64,
    pub best: BestBound,
    /// Defined for `c > 2`.
    pub lower_exponent: Option<f64>,
}

impl BoundReport {
    pub fn best_value(&self) -> f64 {
        match self.best {
            BestBound::Logc => self.logc_bound,
            BestBound::Linear => self.linear_bound,
            BestBound::Sqrt => self.sqrt_bound,
        }
    }
}

fn check(c: f64, n: u64) -> Result<()> {
    if !(c >= 1.0 && c.is_finite()) || n < 2 {
        return invalid(format!(
            "bounds need c >= 1 and n >= 2, got c = {c}, n = {n}"
        ));
    }
    Ok(())
}

/// `c (n-1)^{log c}`.
pub fn upper_bound_logc(c: f64, n: u64) -> Result<f64> {
    check(c, n)?;
    Ok(c * ((n - 1) as f64).powf(c.log2()))
}

/// `c (n-2) + 1`.
pub fn upper_bound_linear(c: f64, n: u64) -> Result<f64> {
    check(c, n)?;
    Ok(c * (n - 2) as f64 + 1.0)
}

/// `8 (1 + c^2/pi) sqrt(n-1)`, with the explicit constant of the volume argument.
pub fn upper_bound_sqrt(c: f64, n: u64) -> Result<f64> {
    check(c, n)?;
    Ok(8.0 * (1.0 + c * c / PI) * ((n - 1) as f64).sqrt())
}

/// All three bounds; ties resolve in the order logc, linear, sqrt.
pub fn best_upper_bound(c: f64, n: u64) -> Result<BoundReport> {
    let logc_bound = upper_bound_logc(c, n)?;
    let linear_bound = upper_bound_linear(c, n)?;
    let sqrt_bound = upper_bound_sqrt(c, n)?;
    let mut best = BestBound::Logc;
    let mut value = logc_bound;
    if linear_bound < value {
        best = BestBound::Linear;
        value = linear_bound;
    }
    if sqrt_bound < value {
        best = BestBound::Sqrt;
    }
    Ok(BoundReport {
        logc_bound,
        linear_bound,
        sqrt_bound,
        best,
        lower_exponent: lower_bound_exponent(c).ok(),
    })
}

/// Exponent `(1 + log(c-2) - log c)/2` of the lower-bound family.
pub fn lower_bound_exponent(c: f64) -> Result<f64> {
    if !(c > 2.0) {
        return invalid(format!("lower-bound exponent needs c > 2, got {c}"));
    }
    Ok((1.0 + (c - 2.0).log2() - c.log2()) / 2.0)
}
