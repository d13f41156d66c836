//! Analytic partial derivatives of M(a, z) and the boundary factor L.
//!
//! Each expansion is the term-wise derivative of the 1D-reduced sum; the
//! finite-difference route is kept alongside as an independent cross-check.

use std::f64::consts::PI;

use crate::energy::{m_via_duality, profiles, w_sum, Method};
use crate::error::{Error, Result};
use crate::halfplane::HalfPlanePoint;
use crate::series::TruncationBudget;
use crate::theta::{signed_power_sum, theta1, DerivOrder};

/// Which derivative of M to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MPartial {
    Dx,
    Dy,
    /// The radial operator `d^2/dy^2 + (2/y) d/dy` applied to M.
    DyyPlus,
    Dxy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialMethod {
    Expansion,
    FiniteDifference,
}

/// M(a, z) routed through duality for small a; scalar convenience used by the
/// finite-difference paths and the solvers.
pub(crate) fn m_value(alpha: f64, z: &HalfPlanePoint, budget: &TruncationBudget) -> Result<f64> {
    Ok(w_sum(1, alpha, z, budget, Method::Reduced1d)?.value)
}

/// Named partial derivative of M at z.
pub fn m_partials(
    alpha: f64,
    z: &HalfPlanePoint,
    which: MPartial,
    method: PartialMethod,
) -> Result<f64> {
    let budget = TruncationBudget::default();
    match method {
        PartialMethod::Expansion => expansion(alpha, z, which, &budget),
        PartialMethod::FiniteDifference => finite_difference(alpha, z, which, &budget),
    }
}

fn expansion(alpha: f64, z: &HalfPlanePoint, which: MPartial, budget: &TruncationBudget) -> Result<f64> {
    if alpha < 0.3 {
        // route through the duality identity, evaluated at 1/alpha:
        // M(a, .) = (b^2/pi) (theta(b, .) - pi b M(b, .)), b = 1/a
        let beta = 1.0 / alpha;
        let m = expansion(beta, z, which, budget)?;
        let th = theta_partial(beta, z, which, budget)?;
        return Ok(beta * beta / PI * (th - PI * beta * m));
    }
    let (x, y) = (z.x(), z.y());
    let big_x = y / alpha;
    match which {
        MPartial::Dx => {
            // 2 sqrt(y/a) sum_{n>=1} e^{-pi a y n^2}
            //   [ (n/(2 pi a) + y n^3) theta_Y(X; nx) + (y n/(pi a^2)) theta_XY(X; nx) ]
            let pref = 2.0 * big_x.sqrt();
            let mut acc = 0.0;
            for n in 1..=40u32 {
                let nf = n as f64;
                let e = (-PI * alpha * y * nf * nf).exp();
                let ty = theta1(big_x, nf * x, DerivOrder::DY, budget)?.value;
                let txy = theta1(big_x, nf * x, DerivOrder::DXY, budget)?.value;
                let term = e
                    * ((nf / (2.0 * PI * alpha) + y * nf * nf * nf) * ty
                        + y * nf / (PI * alpha * alpha) * txy);
                acc += term;
                if e * nf * nf * nf < 1e-18 && n > 2 {
                    break;
                }
            }
            Ok(pref * acc)
        }
        MPartial::Dy => {
            // (1 / (pi sqrt(X) a^4)) [ P_0 + 2 sum_{n>=1} P_n ]
            let pref = 1.0 / (PI * big_x.sqrt() * alpha.powi(4));
            let mut acc = profiles::p_axis_term(0, alpha, x, y, budget)?;
            for n in 1..=40u32 {
                let t = profiles::p_axis_term(n as i64, alpha, x, y, budget)?;
                acc += 2.0 * t;
                if t.abs() < 1e-18 * acc.abs().max(1e-300) && n > 2 {
                    break;
                }
            }
            Ok(pref * acc)
        }
        MPartial::DyyPlus => {
            // double sum of P_{m,n} over a box sized by the Gaussian decay
            let radius = profiles::box_radius(alpha, z, 3);
            let mut acc = 0.0;
            for m in -radius..=radius {
                for n in -radius..=radius {
                    acc += profiles::p_mn(m, n, alpha, x, y);
                }
            }
            Ok(acc)
        }
        MPartial::Dxy => {
            // (2 / (pi sqrt(X) a^4)) sum_{n>=1} e^{-pi a y n^2} [
            //   (pi a^3 y n^3 + a^2 n / 4 - a^4 pi^2 y^2 n^5) theta_Y(X; nx)
            //   + 2 a y n theta_XY(X; nx) + y^2 n theta_XXY(X; nx) ]
            let pref = 2.0 / (PI * big_x.sqrt() * alpha.powi(4));
            let mut acc = 0.0;
            for n in 1..=40u32 {
                let nf = n as f64;
                let e = (-PI * alpha * y * nf * nf).exp();
                let ty = theta1(big_x, nf * x, DerivOrder::DY, budget)?.value;
                let txy = theta1(big_x, nf * x, DerivOrder::DXY, budget)?.value;
                let txxy = theta1(big_x, nf * x, DerivOrder::DXXY, budget)?.value;
                let poly = PI * alpha.powi(3) * y * nf.powi(3) + alpha * alpha * nf / 4.0
                    - alpha.powi(4) * PI * PI * y * y * nf.powi(5);
                acc += e * (poly * ty + 2.0 * alpha * y * nf * txy + y * y * nf * txxy);
                if e * nf.powi(5) < 1e-18 && n > 2 {
                    break;
                }
            }
            Ok(pref * acc)
        }
    }
}

/// Matching partial of theta, used by the duality rerouting above.
fn theta_partial(alpha: f64, z: &HalfPlanePoint, which: MPartial, budget: &TruncationBudget) -> Result<f64> {
    let (x, y) = (z.x(), z.y());
    let big_x = y / alpha;
    match which {
        MPartial::Dx => {
            // 2 sqrt(X) sum_{n>=1} n e^{-pi a y n^2} theta_Y(X; nx)
            let pref = 2.0 * big_x.sqrt();
            let mut acc = 0.0;
            for n in 1..=40u32 {
                let nf = n as f64;
                let e = (-PI * alpha * y * nf * nf).exp();
                let ty = theta1(big_x, nf * x, DerivOrder::DY, budget)?.value;
                acc += nf * e * ty;
                if e * nf < 1e-18 && n > 2 {
                    break;
                }
            }
            Ok(pref * acc)
        }
        MPartial::Dy => {
            // theta_y = sqrt(X) sum_n e^{-pi a y n^2} [ (1/(2y) - pi a n^2) theta
            //           + (1/a) theta_X ]
            let mut acc = 0.0;
            for n in 0..=40i64 {
                let nf = n as f64;
                let e = (-PI * alpha * y * nf * nf).exp();
                let t = theta1(big_x, nf * x, DerivOrder::VALUE, budget)?.value;
                let tx = theta1(big_x, nf * x, DerivOrder::DX, budget)?.value;
                let row = e * ((0.5 / y - PI * alpha * nf * nf) * t + tx / alpha);
                acc += if n == 0 { row } else { 2.0 * row };
                if e < 1e-18 && n > 2 {
                    break;
                }
            }
            Ok(big_x.sqrt() * acc)
        }
        _ => {
            // the duality reroute is only taken for first-order partials; the
            // second-order forms are evaluated directly at alpha >= 0.3
            Err(Error::InvalidInput("theta partial only implemented for Dx/Dy".into()))
        }
    }
}

fn finite_difference(
    alpha: f64,
    z: &HalfPlanePoint,
    which: MPartial,
    budget: &TruncationBudget,
) -> Result<f64> {
    let (x, y) = (z.x(), z.y());
    let f = |xx: f64, yy: f64| -> Result<f64> {
        let p = HalfPlanePoint::new(xx, yy)?;
        if alpha < 0.3 {
            m_via_duality(alpha, &p, budget)
        } else {
            m_value(alpha, &p, budget)
        }
    };
    match which {
        MPartial::Dx => {
            let h = 1e-5 * x.abs().max(1.0);
            if x + h == x {
                return Err(Error::StepUnderflow { at: x });
            }
            Ok((f(x + h, y)? - f(x - h, y)?) / (2.0 * h))
        }
        MPartial::Dy => {
            let h = 1e-5 * y.max(1.0);
            if y + h == y {
                return Err(Error::StepUnderflow { at: y });
            }
            Ok((f(x, y + h)? - f(x, y - h)?) / (2.0 * h))
        }
        MPartial::DyyPlus => {
            let h = 1e-4 * y.max(1.0);
            if y + h == y {
                return Err(Error::StepUnderflow { at: y });
            }
            let fm = f(x, y - h)?;
            let f0 = f(x, y)?;
            let fp = f(x, y + h)?;
            let dyy = (fp - 2.0 * f0 + fm) / (h * h);
            let dy = (fp - fm) / (2.0 * h);
            Ok(dyy + 2.0 / y * dy)
        }
        MPartial::Dxy => {
            let h = 1e-4;
            if x + h == x || y + h == y {
                return Err(Error::StepUnderflow { at: x.min(y) });
            }
            Ok((f(x + h, y + h)? - f(x + h, y - h)? - f(x - h, y + h)? + f(x - h, y - h)?)
                / (4.0 * h * h))
        }
    }
}

/// The three theta quotients `theta_Y(X; nx) / theta_Y(X; x)`,
/// `theta_XY(X; nx) / theta_Y(X; x)`, `theta_XXY(X; nx) / theta_Y(X; x)`.
///
/// At x = 0 and x = 1/2 both sides vanish; the continuous extensions are
/// computed from the signed power sums `sum_k k^p (+-1)^k e^{-pi k^2 X}`.
pub(crate) fn theta_ratios(big_x: f64, n: u32, x: f64, budget: &TruncationBudget) -> Result<[f64; 3]> {
    // the quotients are even and 1-periodic in x; reduce to [0, 1/2]
    let mut xr = x - x.floor();
    if xr > 0.5 {
        xr = 1.0 - xr;
    }
    let nf = n as f64;
    if xr == 0.0 || xr == 0.5 {
        let at_half = xr == 0.5;
        let q2 = signed_power_sum(2, big_x, at_half);
        let odd = at_half && n % 2 == 1;
        let p2 = signed_power_sum(2, big_x, odd);
        let p4 = signed_power_sum(4, big_x, odd);
        let p6 = signed_power_sum(6, big_x, odd);
        return Ok([nf * p2 / q2, -PI * nf * p4 / q2, PI * PI * nf * p6 / q2]);
    }
    let den = theta1(big_x, xr, DerivOrder::DY, budget)?.value;
    if den == 0.0 {
        return Err(Error::Inconsistent(format!("theta_Y vanished unexpectedly at x={xr}")));
    }
    let ty = theta1(big_x, nf * xr, DerivOrder::DY, budget)?.value;
    let txy = theta1(big_x, nf * xr, DerivOrder::DXY, budget)?.value;
    let txxy = theta1(big_x, nf * xr, DerivOrder::DXXY, budget)?.value;
    Ok([ty / den, txy / den, txxy / den])
}

/// The boundary factor L(a, x, y) in
/// `d/dx (theta - pi a M) = sqrt(y) a^{-3/2} (-theta_Y(y/a; x)) e^{-pi a y} L`,
/// including all n >= 2 correction terms.
pub fn l_value(alpha: f64, x: f64, y: f64, budget: &TruncationBudget) -> Result<f64> {
    if !(alpha > 0.0 && y > 0.0) {
        return Err(Error::InvalidInput(format!("l_value needs alpha, y > 0, got ({alpha}, {y})")));
    }
    let big_x = y / alpha;
    let mut acc = 0.0;
    for n in 1..=40u32 {
        let nf = n as f64;
        let e = (-PI * alpha * y * (nf * nf - 1.0)).exp();
        let [ry, rxy, _] = theta_ratios(big_x, n, x, budget)?;
        // 2 pi y a^2 n^3 rY - 2 y n (theta_XY / -theta_Y) - a n rY
        let term = e
            * (2.0 * PI * y * alpha * alpha * nf.powi(3) * ry + 2.0 * y * nf * rxy
                - alpha * nf * ry);
        acc += term;
        if e * nf.powi(3) < 1e-18 && n >= 3 {
            break;
        }
    }
    Ok(acc)
}
