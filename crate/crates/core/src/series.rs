//! Certified truncation bookkeeping for the series evaluators.

use crate::error::{Error, Result};

/// Budget controlling when a truncated series is accepted.
#[derive(Debug, Clone, Copy)]
pub struct TruncationBudget {
    /// Absolute tolerance on the omitted tail.
    pub abs_tol: f64,
    /// Relative tolerance (against the partial sum) on the omitted tail.
    pub rel_tol: f64,
    /// Hard cap on the number of terms before giving up.
    pub max_terms: usize,
}

impl TruncationBudget {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite() && rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidInput(
                "truncation tolerances must be positive and finite".into(),
            ));
        }
        if max_terms < 8 {
            return Err(Error::InvalidInput("max_terms must be at least 8".into()));
        }
        Ok(Self { abs_tol, rel_tol, max_terms })
    }

    /// Tolerance the tail must reach for a partial sum of magnitude `scale`.
    pub fn goal(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

impl Default for TruncationBudget {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-13, max_terms: 20_000 }
    }
}

/// A computed sum together with a certified bound on the omitted tail.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    /// Upper bound on the absolute value of the truncated tail. Covers
    /// truncation only; f64 summation rounding (a few ulp of `value`) is on
    /// top of this.
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl SeriesValue {
    pub fn exact(value: f64) -> Self {
        Self { value, tail_bound: 0.0, terms_used: 1 }
    }

    /// Combine with another certified value: values add, tails add.
    pub fn add(self, other: SeriesValue) -> SeriesValue {
        SeriesValue {
            value: self.value + other.value,
            tail_bound: self.tail_bound + other.tail_bound,
            terms_used: self.terms_used + other.terms_used,
        }
    }

    pub fn scale(self, c: f64) -> SeriesValue {
        SeriesValue {
            value: c * self.value,
            tail_bound: c.abs() * self.tail_bound,
            terms_used: self.terms_used,
        }
    }
}

/// Bound on `sum_{j>=0} coef * (start+j)^deg * exp(-c (start+j)^2)` by a
/// geometric comparison series anchored at the first term.
///
/// Returns infinity when the geometric ratio has not dropped below 1 yet, in
/// which case the caller must keep summing explicit terms.
pub(crate) fn gaussian_poly_tail(c: f64, start: f64, deg: i32, coef: f64) -> f64 {
    debug_assert!(c > 0.0 && start > 0.0);
    let t0 = coef.abs() * start.powi(deg) * (-c * start * start).exp();
    let ratio = ((start + 1.0) / start).powi(deg) * (-c * (2.0 * start + 1.0)).exp();
    if ratio < 0.995 {
        t0 / (1.0 - ratio)
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_rejects_bad_tolerances() {
        assert!(TruncationBudget::new(0.0, 1e-10, 100).is_err());
        assert!(TruncationBudget::new(1e-10, -1.0, 100).is_err());
        assert!(TruncationBudget::new(1e-10, 1e-10, 4).is_err());
        assert!(TruncationBudget::new(1e-10, 1e-10, 8).is_ok());
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        // sum_{n>=5} n^2 e^{-0.7 n^2} versus the geometric bound
        let c = 0.7;
        let true_tail: f64 = (5..200).map(|n| (n * n) as f64 * (-c * (n * n) as f64).exp()).sum();
        let bound = gaussian_poly_tail(c, 5.0, 2, 1.0);
        assert!(bound >= true_tail);
        assert!(bound < 10.0 * true_tail, "bound should not be wildly loose");
    }
}
