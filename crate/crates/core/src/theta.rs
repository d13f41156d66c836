//! One-dimensional Jacobi theta function
//!
//! ```text
//! theta(X; Y) = sum_{n in Z} exp(-pi n^2 X) exp(2 pi i n Y)
//!             = X^{-1/2} sum_{n in Z} exp(-pi (n-Y)^2 / X)      (Poisson)
//! ```
//!
//! with partial derivatives up to d^2/dX^2 d/dY, evaluated by whichever of the
//! two forms converges faster (direct for X >= 1, Poisson for X < 1), each
//! with a closed-form bound on the truncated tail. Also the envelope sums
//! mu(X), nu(X) and the quotient envelope bounds they control.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::series::{gaussian_poly_tail, SeriesValue, TruncationBudget};

/// Derivative order (dX, dY) of `theta(X;Y)`.
///
/// Supported set: (0,0), (1,0), (0,1), (2,0), (1,1), (2,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivOrder {
    dx: u8,
    dy: u8,
}

impl DerivOrder {
    pub const VALUE: DerivOrder = DerivOrder { dx: 0, dy: 0 };
    pub const DX: DerivOrder = DerivOrder { dx: 1, dy: 0 };
    pub const DY: DerivOrder = DerivOrder { dx: 0, dy: 1 };
    pub const DXX: DerivOrder = DerivOrder { dx: 2, dy: 0 };
    pub const DXY: DerivOrder = DerivOrder { dx: 1, dy: 1 };
    pub const DXXY: DerivOrder = DerivOrder { dx: 2, dy: 1 };

    pub fn new(dx: u8, dy: u8) -> Result<Self> {
        if dx > 2 || dy > 1 {
            return Err(Error::InvalidInput(format!(
                "derivative order ({dx},{dy}) outside supported set"
            )));
        }
        Ok(Self { dx, dy })
    }

    pub fn dx(&self) -> u8 {
        self.dx
    }

    pub fn dy(&self) -> u8 {
        self.dy
    }
}

fn reduce_mod1(y: f64) -> f64 {
    let r = y - y.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// `d^dX/dX^dX d^dY/dY^dY theta(X;Y)` with a certified tail bound.
///
/// Requires X > 0. Y may be any real; the series is 1-periodic in Y.
pub fn theta1(big_x: f64, y: f64, d: DerivOrder, budget: &TruncationBudget) -> Result<SeriesValue> {
    if !(big_x > 0.0) || !big_x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidInput(format!("theta1 needs X > 0 finite, got X={big_x}, Y={y}")));
    }
    let yr = reduce_mod1(y);
    // dY-odd orders vanish identically at the reflection points
    if d.dy == 1 && (yr == 0.0 || yr == 0.5) {
        return Ok(SeriesValue::exact(0.0));
    }
    if big_x >= 1.0 {
        direct_series(big_x, yr, d, budget)
    } else {
        poisson_series(big_x, yr, d, budget)
    }
}

/// Term-wise differentiated direct series. For n >= 1 the term is
/// `c * n^p * trig(2 pi n Y) * exp(-pi n^2 X)` with (c, p, trig) per order.
fn direct_series(
    big_x: f64,
    yr: f64,
    d: DerivOrder,
    budget: &TruncationBudget,
) -> Result<SeriesValue> {
    let (coef, deg, use_sin): (f64, i32, bool) = match (d.dx, d.dy) {
        (0, 0) => (2.0, 0, false),
        (1, 0) => (-2.0 * PI, 2, false),
        (2, 0) => (2.0 * PI * PI, 4, false),
        (0, 1) => (-4.0 * PI, 1, true),
        (1, 1) => (4.0 * PI * PI, 3, true),
        (2, 1) => (-4.0 * PI * PI * PI, 5, true),
        _ => unreachable!(),
    };
    let mut value = if d.dx == 0 && d.dy == 0 { 1.0 } else { 0.0 };
    let mut terms = 1usize;
    let c = PI * big_x;
    for n in 1..=budget.max_terms {
        let nf = n as f64;
        let e = (-c * nf * nf).exp();
        let trig = if use_sin { (2.0 * PI * nf * yr).sin() } else { (2.0 * PI * nf * yr).cos() };
        value += coef * nf.powi(deg) * trig * e;
        terms += 1;
        let tail = gaussian_poly_tail(c, nf + 1.0, deg, coef.abs());
        if tail <= budget.goal(value) {
            return Ok(SeriesValue { value, tail_bound: tail, terms_used: terms });
        }
    }
    Err(Error::BudgetExhausted { context: "theta1 direct series", terms })
}

/// One term of the term-wise differentiated Poisson form, u = n - Y.
fn poisson_term(big_x: f64, u: f64, d: DerivOrder) -> f64 {
    let e = (-PI * u * u / big_x).exp();
    let s = big_x.sqrt();
    // negative half-integer powers of X
    let xm1h = 1.0 / s;
    let xm3h = xm1h / big_x;
    let xm5h = xm3h / big_x;
    let xm7h = xm5h / big_x;
    let xm9h = xm7h / big_x;
    let xm11h = xm9h / big_x;
    let u2 = u * u;
    match (d.dx, d.dy) {
        (0, 0) => xm1h * e,
        (0, 1) => 2.0 * PI * u * xm3h * e,
        (1, 0) => (PI * u2 * xm5h - 0.5 * xm3h) * e,
        (1, 1) => (2.0 * PI * PI * u2 * u * xm7h - 3.0 * PI * u * xm5h) * e,
        (2, 0) => (PI * PI * u2 * u2 * xm9h - 3.0 * PI * u2 * xm7h + 0.75 * xm5h) * e,
        (2, 1) => {
            (2.0 * PI.powi(3) * u2 * u2 * u * xm11h - 10.0 * PI * PI * u2 * u * xm9h
                + 7.5 * PI * u * xm7h)
                * e
        }
        _ => unreachable!(),
    }
}

/// Envelope tail for the Poisson form: both index tails have |u| >= start.
fn poisson_tail(big_x: f64, start: f64, d: DerivOrder) -> f64 {
    let c = PI / big_x;
    let s = big_x.sqrt();
    let xm1h = 1.0 / s;
    let xm3h = xm1h / big_x;
    let xm5h = xm3h / big_x;
    let xm7h = xm5h / big_x;
    let xm9h = xm7h / big_x;
    let xm11h = xm9h / big_x;
    let monomials: &[(f64, i32)] = match (d.dx, d.dy) {
        (0, 0) => &[(1.0, 0)],
        (0, 1) => &[(2.0 * PI, 1)],
        (1, 0) => &[(PI, 2), (0.5, 0)],
        (1, 1) => &[(2.0 * PI * PI, 3), (3.0 * PI, 1)],
        (2, 0) => &[(PI * PI, 4), (3.0 * PI, 2), (0.75, 0)],
        (2, 1) => &[(2.0 * PI.powi(3), 5), (10.0 * PI * PI, 3), (7.5 * PI, 1)],
        _ => unreachable!(),
    };
    let scale = match (d.dx, d.dy) {
        (0, 0) => xm1h,
        (0, 1) => xm3h,
        (1, 0) => xm5h.max(xm3h),
        (1, 1) => xm7h.max(xm5h),
        (2, 0) => xm9h.max(xm7h).max(xm5h),
        (2, 1) => xm11h.max(xm9h).max(xm7h),
        _ => unreachable!(),
    };
    let mut t = 0.0;
    for &(coef, deg) in monomials {
        t += 2.0 * scale * gaussian_poly_tail(c, start, deg, coef);
    }
    t
}

fn poisson_series(
    big_x: f64,
    yr: f64,
    d: DerivOrder,
    budget: &TruncationBudget,
) -> Result<SeriesValue> {
    let mut value = poisson_term(big_x, -yr, d);
    let mut terms = 1usize;
    let mut k = 1i64;
    while terms < budget.max_terms {
        value += poisson_term(big_x, k as f64 - yr, d);
        value += poisson_term(big_x, -(k as f64) - yr, d);
        terms += 2;
        let tail = poisson_tail(big_x, k as f64, d);
        if tail <= budget.goal(value) {
            return Ok(SeriesValue { value, tail_bound: tail, terms_used: terms });
        }
        k += 1;
    }
    Err(Error::BudgetExhausted { context: "theta1 Poisson series", terms })
}

/// `mu(X) = sum_{n>=2} n^2 exp(-pi (n^2-1) X)`, tail below 1e-15 relative.
pub fn mu(big_x: f64) -> f64 {
    envelope_sum(big_x, 2)
}

/// `nu(X) = sum_{n>=2} n^4 exp(-pi (n^2-1) X)`, tail below 1e-15 relative.
pub fn nu(big_x: f64) -> f64 {
    envelope_sum(big_x, 4)
}

fn envelope_sum(big_x: f64, p: i32) -> f64 {
    assert!(big_x > 0.0, "envelope sums need X > 0");
    let mut s = 0.0;
    for n in 2..400 {
        let nf = n as f64;
        let t = nf.powi(p) * (-PI * (nf * nf - 1.0) * big_x).exp();
        s += t;
        if t < 1e-18 * s.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    s
}

/// `sum_{k>=1} k^p sigma_k exp(-pi k^2 X)` with `sigma_k = (-1)^k` when
/// `alternating`, used for the x -> 0, 1/2 limits of the theta quotients.
pub(crate) fn signed_power_sum(p: i32, big_x: f64, alternating: bool) -> f64 {
    let mut s = 0.0;
    for k in 1..400 {
        let kf = k as f64;
        let mut t = kf.powi(p) * (-PI * kf * kf * big_x).exp();
        if alternating && k % 2 == 1 {
            t = -t;
        }
        s += t;
        if t.abs() < 1e-18 * s.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    s
}

/// The quotient-of-derivative envelope bounds from the preliminary lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientKind {
    /// |theta_Y(X;kY)/theta_Y(X;Y)| <= k (1+mu)/(1-mu), X > 1/5
    L2a1,
    /// |theta_Y(X;kY)/theta_Y(X;Y)| <= (k/pi) e^{pi/4X}, X < pi/(pi+2)
    L2a2,
    /// |theta_XY(X;kY)/theta_XY(X;Y)| <= k (1+nu)/(1-nu), X >= 3/10
    L2b1,
    /// |theta_XY(X;kY)/theta_Y(X;Y)| <= k pi (1+nu)/(1-mu), X >= 1/5
    L2b2,
    /// |theta_XY(X;Y)/theta_Y(X;Y)| <= pi (1+nu)/(1+mu), X >= 1/5, k = 1.
    /// Audited with the 1+mu denominator as stated (not corrected to 1-mu).
    L2b3,
    /// |theta_XY(X;Y)/theta_Y(X;Y)| <= (3/2) X^{-1} (1 + pi/(6X)), X <= 1/2
    L2c1,
    /// |theta_XY(X;kY)/theta_Y(X;Y)| <= (3k/2pi) X^{-1} (1 + pi/(6X)) e^{pi/4X}, X <= 1/2
    L2c2,
}

impl QuotientKind {
    pub const ALL: [QuotientKind; 7] = [
        QuotientKind::L2a1,
        QuotientKind::L2a2,
        QuotientKind::L2b1,
        QuotientKind::L2b2,
        QuotientKind::L2b3,
        QuotientKind::L2c1,
        QuotientKind::L2c2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            QuotientKind::L2a1 => "L2a_1",
            QuotientKind::L2a2 => "L2a_2",
            QuotientKind::L2b1 => "L2b_1",
            QuotientKind::L2b2 => "L2b_2",
            QuotientKind::L2b3 => "L2b_3",
            QuotientKind::L2c1 => "L2c_1",
            QuotientKind::L2c2 => "L2c_2",
        }
    }

    fn check_hypothesis(&self, big_x: f64) -> Result<()> {
        let ok = match self {
            QuotientKind::L2a1 => big_x > 0.2,
            QuotientKind::L2a2 => big_x < PI / (PI + 2.0),
            QuotientKind::L2b1 => big_x >= 0.3,
            QuotientKind::L2b2 | QuotientKind::L2b3 => big_x >= 0.2,
            QuotientKind::L2c1 | QuotientKind::L2c2 => big_x <= 0.5 && big_x > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Hypothesis {
                lemma: self.name().into(),
                detail: format!("X = {big_x} outside the stated range"),
            })
        }
    }

    fn bound(&self, big_x: f64, k: u32) -> f64 {
        let kf = k as f64;
        match self {
            QuotientKind::L2a1 => kf * (1.0 + mu(big_x)) / (1.0 - mu(big_x)),
            QuotientKind::L2a2 => kf / PI * (PI / (4.0 * big_x)).exp(),
            QuotientKind::L2b1 => kf * (1.0 + nu(big_x)) / (1.0 - nu(big_x)),
            QuotientKind::L2b2 => kf * PI * (1.0 + nu(big_x)) / (1.0 - mu(big_x)),
            QuotientKind::L2b3 => PI * (1.0 + nu(big_x)) / (1.0 + mu(big_x)),
            QuotientKind::L2c1 => 1.5 / big_x * (1.0 + PI / (6.0 * big_x)),
            QuotientKind::L2c2 => {
                1.5 * kf / PI / big_x * (1.0 + PI / (6.0 * big_x)) * (PI / (4.0 * big_x)).exp()
            }
        }
    }
}

/// Worst observed quotient against the stated bound over a Y grid.
#[derive(Debug, Clone, Copy)]
pub struct QuotientAudit {
    pub kind: QuotientKind,
    pub big_x: f64,
    pub k: u32,
    pub worst: f64,
    pub worst_y: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn quotient_bound_check(
    kind: QuotientKind,
    big_x: f64,
    k: u32,
    y_grid: &[f64],
) -> Result<QuotientAudit> {
    kind.check_hypothesis(big_x)?;
    if k == 0 {
        return Err(Error::InvalidInput("k must be a positive integer".into()));
    }
    if matches!(kind, QuotientKind::L2b3 | QuotientKind::L2c1) && k != 1 {
        return Err(Error::InvalidInput(format!("{} is stated for k = 1 only", kind.name())));
    }
    let budget = TruncationBudget::default();
    let (num_d, den_d) = match kind {
        QuotientKind::L2a1 | QuotientKind::L2a2 => (DerivOrder::DY, DerivOrder::DY),
        QuotientKind::L2b1 => (DerivOrder::DXY, DerivOrder::DXY),
        _ => (DerivOrder::DXY, DerivOrder::DY),
    };
    let mut worst = 0.0f64;
    let mut worst_y = f64::NAN;
    for &y in y_grid {
        let den = theta1(big_x, y, den_d, &budget)?.value;
        if den == 0.0 {
            continue; // exact reflection point; covered by neighbours
        }
        let num = theta1(big_x, k as f64 * y, num_d, &budget)?.value;
        let q = (num / den).abs();
        if q > worst {
            worst = q;
            worst_y = y;
        }
    }
    let bound = kind.bound(big_x, k);
    Ok(QuotientAudit { kind, big_x, k, worst, worst_y, bound, pass: worst <= bound })
}
