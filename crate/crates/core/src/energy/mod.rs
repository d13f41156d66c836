//! The lattice energies
//!
//! ```text
//! W_k(a, z) = sum_{(m,n) in Z^2} (|mz+n|^2 / y)^k exp(-pi a |mz+n|^2 / y)
//! ```
//!
//! with k = 0 (theta), k = 1 (M), k = 2, the mixed family
//! `M + gamma theta`, the duality identities that convert small-a problems
//! into large-a ones, analytic partial derivatives of M, and the boundary
//! profile sums on the imaginary axis and the 1/2-axis.

pub(crate) mod partials;
mod profiles;

pub use partials::{l_value, m_partials, MPartial, PartialMethod};
pub use profiles::{
    endpoint_constants, gamma_a_profile, gamma_c_profile, p_a, p_axis_term, p_b, p_mn, r_n,
    xa_sum, xb_sum, ya_approx, ya_sum, yb_approx, yb_sum, EndpointConstants, GammaAProfile,
    GammaCProfile, Part, m_a, m_b,
};

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfplane::{reduce_to_fundamental, HalfPlanePoint};
use crate::series::{gaussian_poly_tail, SeriesValue, TruncationBudget};
use crate::theta::{theta1, DerivOrder};

/// Evaluation route for the lattice sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Plain double sum over a certified index box.
    Direct,
    /// One-dimensional theta reduction (k = 0, 1 only).
    Reduced1d,
}

/// The weight family `(r^2)^k + gamma` selecting theta (k=0), M (k=1),
/// W_2 (k=2), or the mixtures `M + gamma theta` (k=1, gamma > 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSpec {
    k: u8,
    gamma: f64,
}

impl PotentialSpec {
    pub fn theta() -> Self {
        Self { k: 0, gamma: 0.0 }
    }

    pub fn m() -> Self {
        Self { k: 1, gamma: 0.0 }
    }

    pub fn w2() -> Self {
        Self { k: 2, gamma: 0.0 }
    }

    /// The `(|P|^2 + gamma) e^{-pi a |P|^2}` family.
    pub fn m_plus_gamma(gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidInput(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(Self { k: 1, gamma })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Record of one energy evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EnergyEval {
    pub alpha: f64,
    pub z: HalfPlanePoint,
    pub value: SeriesValue,
    pub method: Method,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// Smallest eigenvalue of the unimodular Gram form
/// `q(m,n) = |mz+n|^2 / y`, so that `q(m,n) >= lambda (m^2+n^2)`.
pub(crate) fn gram_lambda_min(z: &HalfPlanePoint) -> f64 {
    let (x, y) = (z.x(), z.y());
    let tr = (x * x + y * y + 1.0) / y; // determinant is exactly 1
    0.5 * (tr - (tr * tr - 4.0).max(0.0).sqrt())
}

/// Ground-truth oracle: plain double sum over |m|, |n| <= radius with no
/// acceleration or reduction. Used by tests to pin the fast evaluators.
pub fn w_sum_bruteforce(k: u8, alpha: f64, z: &HalfPlanePoint, radius: i64) -> f64 {
    assert!(radius >= 1, "radius must be >= 1");
    let (x, y) = (z.x(), z.y());
    let mut sum = 0.0;
    for m in -radius..=radius {
        for n in -radius..=radius {
            let mf = m as f64;
            let nf = n as f64;
            let q = ((mf * x + nf) * (mf * x + nf) + mf * mf * y * y) / y;
            let w = match k {
                0 => 1.0,
                1 => q,
                _ => q * q,
            };
            sum += w * (-PI * alpha * q).exp();
        }
    }
    sum
}

/// Direct double sum over a certified index box at the reduced point.
///
/// All three weights are invariant under the extended modular group, so the
/// argument is reduced first; this keeps the box small for every input.
fn direct_sum(k: u8, alpha: f64, z: &HalfPlanePoint, budget: &TruncationBudget) -> Result<SeriesValue> {
    let (zr, _) = reduce_to_fundamental(*z)?;
    let lambda = gram_lambda_min(&zr);
    let c = PI * alpha * lambda;
    let deg = 2 * k as i32 + 1;
    // grow the box until the ring tail closes; terms on ring s satisfy
    // q >= lambda s^2 and number 8s, so the tail is
    // sum_{s > S} 8 s (lambda s^2)^k e^{-pi a lambda s^2}
    let mut s_max = 3usize;
    let tail = loop {
        let sf = (s_max + 1) as f64;
        // need q^k e^{-pi a q} decreasing beyond the ring, i.e. q >= k/(pi a)
        let monotone_ok = lambda * sf * sf >= k as f64 / (PI * alpha);
        let t = 8.0 * lambda.powi(k as i32) * gaussian_poly_tail(c, sf, deg, 1.0);
        if monotone_ok && t <= budget.abs_tol {
            break t;
        }
        s_max += 1;
        if (2 * s_max + 1) * (2 * s_max + 1) > budget.max_terms {
            return Err(Error::BudgetExhausted {
                context: "direct lattice sum",
                terms: (2 * s_max + 1) * (2 * s_max + 1),
            });
        }
    };
    let (x, y) = (zr.x(), zr.y());
    let r = s_max as i64;
    let mut sum = 0.0;
    for m in -r..=r {
        for n in -r..=r {
            let mf = m as f64;
            let nf = n as f64;
            let q = ((mf * x + nf) * (mf * x + nf) + mf * mf * y * y) / y;
            let w = match k {
                0 => 1.0,
                1 => q,
                _ => q * q,
            };
            sum += w * (-PI * alpha * q).exp();
        }
    }
    Ok(SeriesValue { value: sum, tail_bound: tail, terms_used: (2 * s_max as usize + 1).pow(2) })
}

/// One-dimensional reduction
/// `theta(a,z) = sqrt(y/a) sum_n e^{-pi a y n^2} theta1(y/a; n x)`, and the
/// term-wise a-derivative of the same form for M.
fn reduced_sum(k: u8, alpha: f64, z: &HalfPlanePoint, budget: &TruncationBudget) -> Result<SeriesValue> {
    debug_assert!(k <= 1);
    let (zr, _) = reduce_to_fundamental(*z)?;
    let (x, y) = (zr.x(), zr.y());
    let big_x = y / alpha;
    let inner_budget = TruncationBudget {
        abs_tol: (budget.abs_tol * 1e-2).max(1e-18),
        rel_tol: budget.rel_tol * 1e-2,
        max_terms: budget.max_terms,
    };
    let pref = big_x.sqrt();
    // row weight for M: (1/(2 pi a) + y n^2) theta + (y / (pi a^2)) theta_X
    let c0 = 1.0 / (2.0 * PI * alpha);
    let c1 = y / (PI * alpha * alpha);
    // |theta(X;Y)| <= theta(X;0), |theta_X(X;Y)| <= -theta_X(X;0)
    let b0 = theta1(big_x, 0.0, DerivOrder::VALUE, &inner_budget)?;
    let b1 = theta1(big_x, 0.0, DerivOrder::DX, &inner_budget)?;
    let row = |n: f64| -> Result<(f64, f64)> {
        let t = theta1(big_x, n * x, DerivOrder::VALUE, &inner_budget)?;
        if k == 0 {
            Ok((t.value, t.tail_bound))
        } else {
            let tx = theta1(big_x, n * x, DerivOrder::DX, &inner_budget)?;
            Ok((
                (c0 + y * n * n) * t.value + c1 * tx.value,
                (c0 + y * n * n) * t.tail_bound + c1 * tx.tail_bound,
            ))
        }
    };
    let cy = PI * alpha * y;
    let (v0, t0) = row(0.0)?;
    let mut value = v0;
    let mut inner_tails = t0;
    let mut terms = 1usize;
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let e = (-cy * nf * nf).exp();
        let (v, t) = row(nf)?;
        value += 2.0 * e * v;
        inner_tails += 2.0 * e * t;
        terms += 2;
        // outer tail over |n| > N with the theta factors enveloped at Y = 0
        let outer = if k == 0 {
            2.0 * b0.value * gaussian_poly_tail(cy, nf + 1.0, 0, 1.0)
        } else {
            2.0 * (b0.value * gaussian_poly_tail(cy, nf + 1.0, 2, y)
                + b0.value * c0 * gaussian_poly_tail(cy, nf + 1.0, 0, 1.0)
                + b1.value.abs() * c1 * gaussian_poly_tail(cy, nf + 1.0, 0, 1.0))
        };
        if outer <= budget.goal(value) {
            return Ok(SeriesValue {
                value: pref * value,
                tail_bound: pref * (outer + inner_tails),
                terms_used: terms,
            });
        }
        n += 1;
        if terms > budget.max_terms {
            return Err(Error::BudgetExhausted { context: "1D-reduced lattice sum", terms });
        }
    }
}

/// `W_k(a, z)` with a certified tail bound.
///
/// For k <= 1 and a < 0.3 the `Reduced1d` route evaluates through the duality
/// identity at 1/a, where the series converge fast.
pub fn w_sum(
    k: u8,
    alpha: f64,
    z: &HalfPlanePoint,
    budget: &TruncationBudget,
    method: Method,
) -> Result<SeriesValue> {
    check_alpha(alpha)?;
    if k > 2 {
        return Err(Error::InvalidInput(format!("weight power k must be 0, 1, or 2, got {k}")));
    }
    match method {
        Method::Direct => direct_sum(k, alpha, z, budget),
        Method::Reduced1d => {
            if k == 2 {
                return Err(Error::InvalidInput("no 1D reduction is available for k = 2".into()));
            }
            if alpha < 0.3 {
                let beta = 1.0 / alpha;
                if k == 0 {
                    // theta(a, z) = (1/a) theta(1/a, z)
                    Ok(reduced_sum(0, beta, z, budget)?.scale(beta))
                } else {
                    // M(a, z) = (b^2/pi) (theta(b,z) - pi b M(b,z)), b = 1/a
                    let th = reduced_sum(0, beta, z, budget)?;
                    let m = reduced_sum(1, beta, z, budget)?;
                    Ok(th.add(m.scale(-PI * beta)).scale(beta * beta / PI))
                }
            } else {
                reduced_sum(k, alpha, z, budget)
            }
        }
    }
}

/// `W_k + gamma W_0` for the given potential, with the method chosen per
/// weight (1D reduction when available, direct summation for k = 2).
pub fn energy(
    spec: &PotentialSpec,
    alpha: f64,
    z: &HalfPlanePoint,
    budget: &TruncationBudget,
) -> Result<SeriesValue> {
    let method = if spec.k <= 1 { Method::Reduced1d } else { Method::Direct };
    let main = w_sum(spec.k, alpha, z, budget, method)?;
    if spec.gamma == 0.0 {
        Ok(main)
    } else {
        let w0 = w_sum(0, alpha, z, budget, Method::Reduced1d)?;
        Ok(main.add(w0.scale(spec.gamma)))
    }
}

/// Convenience record combining the inputs with the certified value.
pub fn evaluate(
    spec: &PotentialSpec,
    alpha: f64,
    z: &HalfPlanePoint,
    budget: &TruncationBudget,
    method: Method,
) -> Result<EnergyEval> {
    let main = w_sum(spec.k, alpha, z, budget, method)?;
    let value = if spec.gamma == 0.0 {
        main
    } else {
        main.add(w_sum(0, alpha, z, budget, method)?.scale(spec.gamma))
    };
    Ok(EnergyEval { alpha, z: *z, value, method })
}

/// `theta(a,z) - pi a M(a,z)`, the dual gap: equals `(pi/a^2) M(1/a, z)`.
pub fn dual_gap(alpha: f64, z: &HalfPlanePoint, budget: &TruncationBudget) -> Result<f64> {
    check_alpha(alpha)?;
    let th = w_sum(0, alpha, z, budget, Method::Reduced1d)?;
    let m = w_sum(1, alpha, z, budget, Method::Reduced1d)?;
    Ok(th.value - PI * alpha * m.value)
}

/// Evaluates `M(alpha_small, z)` through the duality identity at
/// `1/alpha_small >= 1`, where both series converge fast.
pub fn m_via_duality(alpha_small: f64, z: &HalfPlanePoint, budget: &TruncationBudget) -> Result<f64> {
    if !(alpha_small > 0.0 && alpha_small <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "m_via_duality needs alpha in (0, 1], got {alpha_small}"
        )));
    }
    let beta = 1.0 / alpha_small;
    Ok(beta * beta / PI * dual_gap(beta, z, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: TruncationBudget = TruncationBudget { abs_tol: 1e-14, rel_tol: 1e-13, max_terms: 40_000 };

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn theta_at_square_point() {
        // brute-force oracle with radius 6; increasing the radius to 8 moves
        // the value by less than 1e-15
        let i = HalfPlanePoint::square();
        let r6 = w_sum_bruteforce(0, 1.0, &i, 6);
        let r8 = w_sum_bruteforce(0, 1.0, &i, 8);
        assert!((r6 - r8).abs() < 1e-15);
        assert!((r6 - 1.1803406).abs() < 1e-7);

        for method in [Method::Direct, Method::Reduced1d] {
            let v = w_sum(0, 1.0, &i, &B, method).unwrap();
            assert!((v.value - r8).abs() <= v.tail_bound + 1e-13, "{method:?}");
        }
    }

    #[test]
    fn origin_term_convention() {
        // the (0,0) lattice term contributes 1 for k = 0 and 0 for k >= 1
        let z = pt(0.2, 1.3);
        for k in 0..=2u8 {
            let alone = w_sum_bruteforce(k, 50.0, &z, 1);
            // at huge alpha only the origin survives
            let expected = if k == 0 { 1.0 } else { 0.0 };
            assert!((alone - expected).abs() < 1e-10, "k={k}: {alone}");
        }
    }

    #[test]
    fn fourier_duality_of_theta() {
        for &(a, x, y) in &[(0.7, 0.3, 1.2), (1.4, 0.1, 0.95), (2.3, 0.45, 1.05)] {
            let z = pt(x, y);
            let lhs = w_sum(0, 1.0 / a, &z, &B, Method::Reduced1d).unwrap().value;
            let rhs = a * w_sum(0, a, &z, &B, Method::Reduced1d).unwrap().value;
            assert!((lhs - rhs).abs() < 1e-11 * rhs.abs());
        }
    }

    #[test]
    fn m_at_alpha_one_is_theta_over_two_pi() {
        for &(x, y) in &[(0.0, 1.0), (0.5, 0.9), (0.23, 1.7)] {
            let z = pt(x, y);
            let m = w_sum(1, 1.0, &z, &B, Method::Reduced1d).unwrap().value;
            let th = w_sum(0, 1.0, &z, &B, Method::Reduced1d).unwrap().value;
            assert!((m - th / (2.0 * PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_invariance_of_m() {
        let z = pt(0.2, 1.1);
        let zt = pt(1.2, 1.1);
        let a = w_sum(1, 0.8, &z, &B, Method::Reduced1d).unwrap().value;
        let b = w_sum(1, 0.8, &zt, &B, Method::Reduced1d).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn dual_gap_at_one_is_half_theta() {
        for &(x, y) in &[(0.0, 1.0), (0.4, 1.3)] {
            let z = pt(x, y);
            let g = dual_gap(1.0, &z, &B).unwrap();
            let th = w_sum(0, 1.0, &z, &B, Method::Reduced1d).unwrap().value;
            assert!((g - th / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn duality_route_matches_bruteforce() {
        let i = HalfPlanePoint::square();
        let via = m_via_duality(0.5, &i, &B).unwrap();
        let brute = w_sum_bruteforce(1, 0.5, &i, 12);
        assert!((via - brute).abs() < 1e-9, "{via} vs {brute}");
        // consistency at the joint point alpha = 1
        let z = pt(0.3, 1.4);
        let a = m_via_duality(1.0, &z, &B).unwrap();
        let b = w_sum(1, 1.0, &z, &B, Method::Reduced1d).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn small_alpha_routing_matches_direct() {
        let z = pt(0.1, 1.2);
        for k in [0u8, 1u8] {
            let red = w_sum(k, 0.2, &z, &B, Method::Reduced1d).unwrap();
            let dir = w_sum(k, 0.2, &z, &B, Method::Direct).unwrap();
            assert!(
                (red.value - dir.value).abs() <= red.tail_bound + dir.tail_bound + 1e-11,
                "k={k}: {} vs {}",
                red.value,
                dir.value
            );
        }
    }

    #[test]
    fn gamma_energy_is_linear_combination() {
        let z = pt(0.15, 1.05);
        let spec = PotentialSpec::m_plus_gamma(1.0).unwrap();
        let e = energy(&spec, 1.0, &z, &B).unwrap().value;
        let m = w_sum(1, 1.0, &z, &B, Method::Reduced1d).unwrap().value;
        let th = w_sum(0, 1.0, &z, &B, Method::Reduced1d).unwrap().value;
        assert!((e - (m + th)).abs() < 1e-12);
        assert!(PotentialSpec::m_plus_gamma(-0.5).is_err());
    }

    #[test]
    fn w2_direct_only() {
        assert!(w_sum(2, 1.0, &HalfPlanePoint::square(), &B, Method::Reduced1d).is_err());
        let v = w_sum(2, 1.0, &HalfPlanePoint::square(), &B, Method::Direct).unwrap();
        let brute = w_sum_bruteforce(2, 1.0, &HalfPlanePoint::square(), 10);
        assert!((v.value - brute).abs() <= v.tail_bound + 1e-12);
    }
}
