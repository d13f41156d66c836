//! Grid audits of the quantitative inequalities the analysis rests on.
//!
//! Each catalogue entry evaluates one stated inequality on a grid over (a
//! truncation of) its stated hypothesis region and reports the worst margin.
//! A report is evidence, not proof; see [`NUMERICAL_CHECK_BANNER`].
//!
//! Axis semantics are per entry: most use (alpha, x, y) literally, while the
//! entries whose regions couple y to alpha interpret the y axis as a scaled
//! coordinate (documented on [`default_grid`]). Grids inset endpoints where
//! the audited expression degenerates to 0/0 (recorded in the defaults).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{
    endpoint_constants, l_value, m_a, m_b, p_a, p_axis_term, p_b, r_n, xa_sum, xb_sum, ya_sum,
    yb_sum, Part,
};
use crate::energy::partials::theta_ratios;
use crate::error::{Error, Result};
use crate::series::TruncationBudget;
use crate::theta::{mu, nu, quotient_bound_check, QuotientKind};

/// Banner attached to every audit report.
pub const NUMERICAL_CHECK_BANNER: &str = "numerical check only: grid evidence, not a proof";

/// One axis of an audit grid; a collapsed axis has `steps == 1`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn range(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v, steps: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo > self.hi {
            return Err(Error::InvalidInput(format!(
                "axis needs finite lo <= hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.steps >= 2 && self.lo == self.hi {
            return Err(Error::InvalidInput("active axis needs lo < hi".into()));
        }
        if self.steps == 0 || (self.steps == 1 && self.lo != self.hi) {
            return Err(Error::InvalidInput("collapsed axis needs steps == 1 and lo == hi".into()));
        }
        Ok(())
    }

    fn scaled(&self, factor: f64) -> Self {
        if self.steps <= 1 {
            *self
        } else {
            Self {
                lo: self.lo,
                hi: self.hi,
                steps: ((self.steps - 1) as f64 * factor).round() as usize + 1,
            }
        }
    }
}

/// Grid over (alpha, x, y); inactive axes are collapsed to a point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub alpha: AxisSpec,
    pub x: AxisSpec,
    pub y: AxisSpec,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.alpha.validate()?;
        self.x.validate()?;
        self.y.validate()
    }

    /// Same ranges at a multiple of the node counts (refinement checks).
    pub fn refined(&self, factor: f64) -> Self {
        Self { alpha: self.alpha.scaled(factor), x: self.x.scaled(factor), y: self.y.scaled(factor) }
    }

    pub fn nodes(&self) -> usize {
        self.alpha.steps * self.x.steps * self.y.steps
    }
}

/// Catalogue of audited inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LemmaId {
    LPositive,
    MainTermGamma,
    Eps1Bound,
    PMajor,
    PError,
    PaPb,
    MaMb,
    RnPositive,
    XRatioMonotone,
    EpsI,
    EpsII,
    AbBound,
    YaNonneg,
    YRatioFloor,
    YRatioMonotone,
    QuotientBounds,
}

impl LemmaId {
    pub const ALL: [LemmaId; 16] = [
        LemmaId::LPositive,
        LemmaId::MainTermGamma,
        LemmaId::Eps1Bound,
        LemmaId::PMajor,
        LemmaId::PError,
        LemmaId::PaPb,
        LemmaId::MaMb,
        LemmaId::RnPositive,
        LemmaId::XRatioMonotone,
        LemmaId::EpsI,
        LemmaId::EpsII,
        LemmaId::AbBound,
        LemmaId::YaNonneg,
        LemmaId::YRatioFloor,
        LemmaId::YRatioMonotone,
        LemmaId::QuotientBounds,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LemmaId::LPositive => "L_positive",
            LemmaId::MainTermGamma => "main_term_gamma",
            LemmaId::Eps1Bound => "eps1_bound",
            LemmaId::PMajor => "P_major",
            LemmaId::PError => "P_error",
            LemmaId::PaPb => "PA_PB",
            LemmaId::MaMb => "MA_MB",
            LemmaId::RnPositive => "Rn_positive",
            LemmaId::XRatioMonotone => "Xratio_monotone",
            LemmaId::EpsI => "eps_I",
            LemmaId::EpsII => "eps_II",
            LemmaId::AbBound => "AB_bound",
            LemmaId::YaNonneg => "Ya_nonneg",
            LemmaId::YRatioFloor => "Yratio_floor",
            LemmaId::YRatioMonotone => "Yratio_monotone",
            LemmaId::QuotientBounds => "quotient_bounds",
        }
    }

    pub fn from_name(s: &str) -> Option<LemmaId> {
        LemmaId::ALL.iter().copied().find(|l| l.name().eq_ignore_ascii_case(s))
    }

    /// Short statement of the audited claim.
    pub fn claim(&self) -> &'static str {
        match self {
            LemmaId::LPositive => "L(a,x,y) > 0 for a >= 1.0923, y >= sqrt(3)/2",
            LemmaId::MainTermGamma => {
                "2 pi y a^2 - a - 2y theta_XY/(-theta_Y) > 0 for a >= 1.092212127"
            }
            LemmaId::Eps1Bound => "eps_1(X) <= 13 exp(-3 pi^2/4) for X >= pi/4",
            LemmaId::PMajor => "P_0 + 2 P_1 > 0.1 on [0.9155730607,1] x [0,1/2] x [2,inf)",
            LemmaId::PError => "sum_{n>=3} 2|P_n| <= 4e-7 on the same box",
            LemmaId::PaPb => "P_A >= 1e-3 and |P_B| <= 1e-6 on the stated box",
            LemmaId::MaMb => "M_A >= 0.1 and |M_B| <= 2e-5 on the stated box",
            LemmaId::RnPositive => "R_n(a,y) > 0 for y/a >= 2, a >= 101/100",
            LemmaId::XRatioMonotone => "d/dy (X_b/X_a) <= 0 on y in [1, 2a], a >= 101/100",
            LemmaId::EpsI => "|eps_I / (dB_a A_a - dA_a B_a)| <= 1/2 on y in [11a/10, 2a]",
            LemmaId::EpsII => "|eps_II / (ddX_b dX_a - ddX_a dX_b)| <= 1/2 on y in [1, 11a/10]",
            LemmaId::AbBound => "(A+C)/(B+D) <= A/B for a >= 1",
            LemmaId::YaNonneg => "Y_a >= 0 on y in [1/2, sqrt(3)/2]",
            LemmaId::YRatioFloor => "(pi a/2)(Y_b/Y_a) >= 11/10 for a >= 6/5",
            LemmaId::YRatioMonotone => "d/dy (Y_b/Y_a) <= 0 for a in [1, 6/5]",
            LemmaId::QuotientBounds => "the theta-quotient envelope bounds (seven kinds)",
        }
    }
}

/// Result of one audit: worst margin over the grid, where the margin is
/// positive when the claim holds at a node.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub lemma: LemmaId,
    pub grid: GridSpec,
    pub min_margin: f64,
    pub worst_point: [f64; 3],
    pub claimed_bound: f64,
    pub pass: bool,
    pub nodes: usize,
}

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Default grid for each catalogue entry.
///
/// Scaled-axis entries: `Rn_positive` reads the y axis as X = y/a;
/// `Xratio_monotone` and `eps_II` read it as the fraction t of [1, 2a] resp.
/// [1, 11a/10]; `eps_I` reads it as s = y/a in [11/10, 2]; `eps1_bound` reads
/// it as the single variable X >= pi/4. `Ya_nonneg`, `Yratio_*` inset the
/// endpoints y = 1/2, sqrt(3)/2 (and `Xratio_monotone`, `eps_II` the endpoint
/// y = 1) by one step, where the audited ratios degenerate to 0/0.
pub fn default_grid(lemma: LemmaId) -> GridSpec {
    match lemma {
        LemmaId::LPositive => GridSpec {
            alpha: AxisSpec::range(1.0923, 3.0, 192),
            x: AxisSpec::range(0.0, 0.5, 51),
            y: AxisSpec::range(SQRT3_2, 4.0, 314),
        },
        LemmaId::MainTermGamma => GridSpec {
            alpha: AxisSpec::range(1.092212127, 3.0, 192),
            x: AxisSpec::range(0.0, 0.5, 51),
            y: AxisSpec::range(SQRT3_2, 4.0, 314),
        },
        LemmaId::Eps1Bound => GridSpec {
            alpha: AxisSpec::point(1.0),
            x: AxisSpec::point(0.0),
            y: AxisSpec::range(PI / 4.0, 8.0, 725),
        },
        LemmaId::PMajor | LemmaId::PError => GridSpec {
            alpha: AxisSpec::range(0.9155730607, 1.0, 43),
            x: AxisSpec::range(0.0, 0.5, 51),
            y: AxisSpec::range(2.0, 6.0, 401),
        },
        LemmaId::PaPb => GridSpec {
            alpha: AxisSpec::range(0.9155730607, 1.0, 101),
            x: AxisSpec::range(0.0, 0.5, 51),
            y: AxisSpec::range(SQRT3_2, 2.0, 113),
        },
        LemmaId::MaMb => GridSpec {
            alpha: AxisSpec::range(0.9155730607, 1.0, 101),
            x: AxisSpec::range(0.0, 0.5, 51),
            y: AxisSpec::range(SQRT3_2, 1.05, 19),
        },
        LemmaId::RnPositive => GridSpec {
            alpha: AxisSpec::range(1.01, 3.0, 200),
            x: AxisSpec::point(0.0),
            y: AxisSpec::range(2.0, 6.0, 401), // X = y/alpha
        },
        LemmaId::XRatioMonotone => GridSpec {
            alpha: AxisSpec::range(1.01, 3.0, 100),
            x: AxisSpec::point(0.0),
            y: AxisSpec::range(0.01, 1.0, 100), // t: y = 1 + t (2a - 1)
        },
        LemmaId::EpsI => GridSpec {
            alpha: AxisSpec::range(1.01, 3.0, 100),
            x: AxisSpec::point(0.0),
            y: AxisSpec::range(1.1, 2.0, 91), // s: y = a s
        },
        LemmaId::EpsII => GridSpec {
            alpha: AxisSpec::range(1.01, 3.0, 100),
            x: AxisSpec::point(0.0),
            y: AxisSpec::range(0.01, 1.0, 100), // t: y = 1 + t (1.1 a - 1)
        },
        LemmaId::AbBound => GridSpec {
            alpha: AxisSpec::range(1.0, 3.0, 2001),
            x: AxisSpec::point(0.0),
            y: AxisSpec::point(1.0),
        },
        LemmaId::YaNonneg => GridSpec {
            alpha: AxisSpec::range(0.5, 1.5, 101),
            x: AxisSpec::point(0.5),
            y: AxisSpec::range(0.5 + 3.7e-4, SQRT3_2 - 3.7e-4, 999),
        },
        LemmaId::YRatioFloor => GridSpec {
            alpha: AxisSpec::range(1.2, 3.0, 181),
            x: AxisSpec::point(0.5),
            y: AxisSpec::range(0.505, SQRT3_2 - 4e-3, 358),
        },
        // alpha = 1 is an exact equality line (Y_b/Y_a is identically
        // 3/(2 pi) there by duality), so the grid starts one step inside
        LemmaId::YRatioMonotone => GridSpec {
            alpha: AxisSpec::range(1.001, 1.2, 21),
            x: AxisSpec::point(0.5),
            y: AxisSpec::range(0.5 + 3.7e-4, SQRT3_2 - 3.7e-4, 366),
        },
        LemmaId::QuotientBounds => GridSpec {
            alpha: AxisSpec::point(0.0),
            x: AxisSpec::point(0.0),
            y: AxisSpec::range(0.002, 0.498, 125), // the Y grid of the quotients
        },
    }
}

fn hypothesis(lemma: LemmaId, grid: &GridSpec) -> Result<()> {
    let tol = 1e-12;
    let fail = |detail: String| Err(Error::Hypothesis { lemma: lemma.name().into(), detail });
    match lemma {
        LemmaId::LPositive => {
            if grid.alpha.lo < 1.0923 - tol {
                return fail(format!("needs alpha >= 1.0923, grid starts at {}", grid.alpha.lo));
            }
            if grid.y.lo < SQRT3_2 - tol {
                return fail(format!("needs y >= sqrt(3)/2, grid starts at {}", grid.y.lo));
            }
        }
        LemmaId::MainTermGamma => {
            if grid.alpha.lo < 1.092212127 - tol {
                return fail(format!("needs alpha >= 1.092212127, grid starts at {}", grid.alpha.lo));
            }
            if grid.y.lo < SQRT3_2 - tol {
                return fail(format!("needs y >= sqrt(3)/2, grid starts at {}", grid.y.lo));
            }
        }
        LemmaId::Eps1Bound => {
            if grid.y.lo < PI / 4.0 - tol {
                return fail(format!("needs X >= pi/4, grid starts at {}", grid.y.lo));
            }
        }
        LemmaId::PMajor | LemmaId::PError => {
            if grid.alpha.lo < 0.9155730607 - tol || grid.alpha.hi > 1.0 + tol {
                return fail("alpha must lie in [0.9155730607, 1]".into());
            }
            if grid.y.lo < 2.0 - tol {
                return fail(format!("needs y >= 2, grid starts at {}", grid.y.lo));
            }
        }
        LemmaId::PaPb => {
            if grid.alpha.lo < 0.9155730607 - tol || grid.alpha.hi > 1.0 + tol {
                return fail("alpha must lie in [0.9155730607, 1]".into());
            }
            if grid.y.lo < SQRT3_2 - tol || grid.y.hi > 2.0 + tol {
                return fail("y must lie in [sqrt(3)/2, 2]".into());
            }
        }
        LemmaId::MaMb => {
            if grid.alpha.lo < 0.9155730607 - tol || grid.alpha.hi > 1.0 + tol {
                return fail("alpha must lie in [0.9155730607, 1]".into());
            }
            if grid.y.lo < SQRT3_2 - tol || grid.y.hi > 1.05 + tol {
                return fail("y must lie in [sqrt(3)/2, 1.05]".into());
            }
        }
        LemmaId::RnPositive => {
            if grid.alpha.lo < 1.01 - tol {
                return fail("needs alpha >= 101/100".into());
            }
            if grid.y.lo < 2.0 - tol {
                return fail("needs X = y/alpha >= 2".into());
            }
        }
        LemmaId::XRatioMonotone | LemmaId::EpsII => {
            if grid.alpha.lo < 1.01 - tol {
                return fail("needs alpha >= 101/100".into());
            }
            if grid.y.lo <= 0.0 || grid.y.hi > 1.0 + tol {
                return fail("scaled coordinate t must lie in (0, 1]".into());
            }
        }
        LemmaId::EpsI => {
            if grid.alpha.lo < 1.01 - tol {
                return fail("needs alpha >= 101/100".into());
            }
            if grid.y.lo < 1.1 - tol || grid.y.hi > 2.0 + tol {
                return fail("scaled coordinate s must lie in [11/10, 2]".into());
            }
        }
        LemmaId::AbBound => {
            if grid.alpha.lo < 1.0 - tol {
                return fail("needs alpha >= 1".into());
            }
        }
        LemmaId::YaNonneg | LemmaId::YRatioMonotone => {
            if grid.y.lo < 0.5 - tol || grid.y.hi > SQRT3_2 + tol {
                return fail("y must lie in [1/2, sqrt(3)/2]".into());
            }
            if lemma == LemmaId::YRatioMonotone && (grid.alpha.lo < 1.0 - tol || grid.alpha.hi > 1.2 + tol)
            {
                return fail("alpha must lie in [1, 6/5]".into());
            }
        }
        LemmaId::YRatioFloor => {
            if grid.alpha.lo < 1.2 - tol {
                return fail("needs alpha >= 6/5".into());
            }
            if grid.y.lo < 0.5 - tol || grid.y.hi > SQRT3_2 + tol {
                return fail("y must lie in [1/2, sqrt(3)/2]".into());
            }
        }
        LemmaId::QuotientBounds => {
            if grid.y.lo <= 0.0 {
                return fail("Y grid must be positive".into());
            }
        }
    }
    Ok(())
}

/// Margin at one node: positive iff the claim holds there.
fn margin_at(lemma: LemmaId, a: f64, x: f64, yc: f64, budget: &TruncationBudget) -> Result<f64> {
    match lemma {
        LemmaId::LPositive => l_value(a, x, yc, budget),
        LemmaId::MainTermGamma => {
            // stated on the closed half fundamental domain; skip box nodes
            // below the unit circle
            if x * x + yc * yc < 1.0 - 1e-12 {
                return Ok(f64::INFINITY);
            }
            let [_, rxy, _] = theta_ratios(yc / a, 1, x, budget)?;
            // theta_XY/(-theta_Y) = -rxy
            Ok(2.0 * PI * yc * a * a - a - 2.0 * yc * (-rxy))
        }
        LemmaId::Eps1Bound => {
            let big_x = yc;
            let eps1 = (nu(big_x) - mu(big_x)) / (1.0 + mu(big_x));
            Ok(13.0 * (-3.0 * PI * PI / 4.0).exp() - eps1)
        }
        LemmaId::PMajor => {
            let p0 = p_axis_term(0, a, x, yc, budget)?;
            let p1 = p_axis_term(1, a, x, yc, budget)?;
            Ok(p0 + 2.0 * p1 - 0.1)
        }
        LemmaId::PError => {
            let mut s = 0.0;
            for n in 3..=8 {
                s += 2.0 * p_axis_term(n, a, x, yc, budget)?.abs();
            }
            Ok(4e-7 - s)
        }
        LemmaId::PaPb => {
            let pa = p_a(a, x, yc);
            let pb = p_b(a, x, yc);
            Ok((pa - 1e-3).min(1e-6 - pb.abs()))
        }
        LemmaId::MaMb => {
            let ma = m_a(a, x, yc, budget)?;
            let mb = m_b(a, x, yc, budget)?;
            Ok((ma - 0.1).min(2e-5 - mb.abs()))
        }
        LemmaId::RnPositive => {
            // y axis carries X = y/alpha; R_n increases in n beyond n = 1
            let y = a * yc;
            let mut worst = f64::INFINITY;
            for n in 0..=2 {
                worst = worst.min(r_n(a, y, n, budget)?);
            }
            Ok(worst)
        }
        LemmaId::XRatioMonotone => {
            let y = 1.0 + yc * (2.0 * a - 1.0);
            let xa = xa_sum(a, y, Part::All, 0);
            let xb = xb_sum(a, y, Part::All, 0);
            let dxa = xa_sum(a, y, Part::All, 1);
            let dxb = xb_sum(a, y, Part::All, 1);
            Ok(-(dxb * xa - dxa * xb) / (xa * xa))
        }
        LemmaId::EpsI => {
            let y = a * yc;
            let aa = xa_sum(a, y, Part::Core, 0);
            let ae = xa_sum(a, y, Part::Ring, 0);
            let ba = xb_sum(a, y, Part::Core, 0);
            let be = xb_sum(a, y, Part::Ring, 0);
            let daa = xa_sum(a, y, Part::Core, 1);
            let dae = xa_sum(a, y, Part::Ring, 1);
            let dba = xb_sum(a, y, Part::Core, 1);
            let dbe = xb_sum(a, y, Part::Ring, 1);
            let eps = (dba * ae + dbe * aa + dbe * ae) - (ba * dae + be * daa + be * dae);
            let major = dba * aa - daa * ba;
            Ok(0.5 - (eps / major).abs())
        }
        LemmaId::EpsII => {
            let y = 1.0 + yc * (1.1 * a - 1.0);
            let daa = xa_sum(a, y, Part::Core, 1);
            let dae = xa_sum(a, y, Part::Ring, 1);
            let dba = xb_sum(a, y, Part::Core, 1);
            let dbe = xb_sum(a, y, Part::Ring, 1);
            let ddaa = xa_sum(a, y, Part::Core, 2);
            let ddae = xa_sum(a, y, Part::Ring, 2);
            let ddba = xb_sum(a, y, Part::Core, 2);
            let ddbe = xb_sum(a, y, Part::Ring, 2);
            let eps = (ddba * dae + ddbe * daa + ddbe * dae) - (dba * ddae + dbe * ddaa + dbe * ddae);
            let denom = (ddba + ddbe) * (daa + dae) - (ddaa + ddae) * (dba + dbe);
            Ok(0.5 - (eps / denom).abs())
        }
        LemmaId::AbBound => {
            let ec = endpoint_constants(a);
            Ok(ec.a / ec.b - (ec.a + ec.c) / (ec.b + ec.d))
        }
        LemmaId::YaNonneg => Ok(ya_sum(a, yc, 0)),
        LemmaId::YRatioFloor => {
            let ya = ya_sum(a, yc, 0);
            let yb = yb_sum(a, yc, 0);
            Ok(PI * a / 2.0 * yb / ya - 1.1)
        }
        LemmaId::YRatioMonotone => {
            // numerator of -d/dy (Y_b/Y_a); same sign, avoids the 1/Y_a^2
            // noise amplification near the degenerate endpoints
            let ya = ya_sum(a, yc, 0);
            let yb = yb_sum(a, yc, 0);
            let dya = ya_sum(a, yc, 1);
            let dyb = yb_sum(a, yc, 1);
            Ok(-(dyb * ya - dya * yb))
        }
        LemmaId::QuotientBounds => unreachable!("handled separately"),
    }
}

/// Runs one catalogue entry on the given grid.
pub fn audit(lemma: LemmaId, grid: &GridSpec) -> Result<AuditReport> {
    grid.validate()?;
    hypothesis(lemma, grid)?;
    if lemma == LemmaId::QuotientBounds {
        return audit_quotients(grid);
    }
    let budget = TruncationBudget::default();
    let alphas = grid.alpha.values();
    let xs = grid.x.values();
    let ys = grid.y.values();
    let mut nodes = Vec::with_capacity(alphas.len() * xs.len() * ys.len());
    for &a in &alphas {
        for &x in &xs {
            for &y in &ys {
                nodes.push([a, x, y]);
            }
        }
    }
    let margins: Result<Vec<f64>> = nodes
        .par_iter()
        .map(|&[a, x, y]| margin_at(lemma, a, x, y, &budget))
        .collect();
    let margins = margins?;
    let mut min_margin = f64::INFINITY;
    let mut worst = [f64::NAN; 3];
    for (node, &m) in nodes.iter().zip(margins.iter()) {
        if m < min_margin {
            min_margin = m;
            worst = *node;
        }
    }
    // report worst point in real coordinates for the scaled axes
    let worst_point = match lemma {
        LemmaId::RnPositive => [worst[0], worst[1], worst[0] * worst[2]],
        LemmaId::XRatioMonotone => [worst[0], worst[1], 1.0 + worst[2] * (2.0 * worst[0] - 1.0)],
        LemmaId::EpsI => [worst[0], worst[1], worst[0] * worst[2]],
        LemmaId::EpsII => [worst[0], worst[1], 1.0 + worst[2] * (1.1 * worst[0] - 1.0)],
        _ => worst,
    };
    Ok(AuditReport {
        lemma,
        grid: *grid,
        min_margin,
        worst_point,
        claimed_bound: claimed_bound(lemma),
        pass: min_margin > 0.0,
        nodes: nodes.len(),
    })
}

fn claimed_bound(lemma: LemmaId) -> f64 {
    match lemma {
        LemmaId::Eps1Bound => 0.007928797236,
        LemmaId::PMajor => 0.1,
        LemmaId::PError => 4e-7,
        LemmaId::PaPb => 1e-3,
        LemmaId::MaMb => 1e-1,
        LemmaId::EpsI | LemmaId::EpsII => 0.5,
        LemmaId::YRatioFloor => 1.1,
        _ => 0.0,
    }
}

/// The seven quotient-envelope bounds, each over its own X defaults and
/// k in {1, 2, 3}; the grid's y axis supplies the Y sample points. Margins
/// are relative: (bound - worst) / bound.
fn audit_quotients(grid: &GridSpec) -> Result<AuditReport> {
    let y_grid = grid.y.values();
    let x_defaults: [(QuotientKind, &[f64]); 7] = [
        (QuotientKind::L2a1, &[0.21, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0]),
        (QuotientKind::L2a2, &[0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]),
        (QuotientKind::L2b1, &[0.3, 0.35, 0.4, 0.5, 0.75, 1.0, 2.0]),
        (QuotientKind::L2b2, &[0.21, 0.3, 0.5, 1.0, 2.0]),
        (QuotientKind::L2b3, &[0.2, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0, 2.0]),
        (QuotientKind::L2c1, &[0.05, 0.1, 0.2, 0.3, 0.4, 0.5]),
        (QuotientKind::L2c2, &[0.05, 0.1, 0.2, 0.3, 0.4, 0.5]),
    ];
    let mut combos = Vec::new();
    for (kind, xs) in x_defaults {
        for &x in xs {
            let ks: &[u32] = if matches!(kind, QuotientKind::L2b3 | QuotientKind::L2c1) {
                &[1]
            } else {
                &[1, 2, 3]
            };
            for &k in ks {
                combos.push((kind, x, k));
            }
        }
    }
    let results: Result<Vec<(f64, f64, f64, f64)>> = combos
        .par_iter()
        .map(|&(kind, x, k)| {
            let audit = quotient_bound_check(kind, x, k, &y_grid)?;
            let rel = (audit.bound - audit.worst) / audit.bound;
            Ok((rel, x, k as f64, audit.worst_y))
        })
        .collect();
    let mut min_margin = f64::INFINITY;
    let mut worst = [f64::NAN; 3];
    for (rel, x, k, wy) in results? {
        if rel < min_margin {
            min_margin = rel;
            worst = [x, k, wy];
        }
    }
    Ok(AuditReport {
        lemma: LemmaId::QuotientBounds,
        grid: *grid,
        min_margin,
        worst_point: worst,
        claimed_bound: 0.0,
        pass: min_margin > 0.0,
        nodes: combos.len() * y_grid.len(),
    })
}

/// Runs a catalogue entry on its default grid.
pub fn audit_default(lemma: LemmaId) -> Result<AuditReport> {
    audit(lemma, &default_grid(lemma))
}

/// Runs every catalogue entry on its default grid, in catalogue order.
pub fn audit_all() -> Result<Vec<AuditReport>> {
    LemmaId::ALL.iter().map(|&l| audit_default(l)).collect()
}
