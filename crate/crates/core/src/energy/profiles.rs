//! Boundary profile sums.
//!
//! On the imaginary axis the y-derivatives of theta and M are carried by
//!
//! ```text
//! X_a = sum (n^2 - m^2/y^2)   e^{-pi a (y n^2 + m^2/y)}
//! X_b = sum (y n^4 - m^4/y^3) e^{-pi a (y n^2 + m^2/y)}
//! ```
//!
//! via `theta_y(a, iy) = -pi a X_a` and
//! `pi a M_y(a, iy) = pi a X_a - (pi a)^2 X_b`; on the 1/2-axis the same
//! roles are played by Y_a, Y_b with the half-integer shift. This module
//! evaluates those sums, their y-derivatives, the dominated/error splits, the
//! endpoint constants A, B, C, D, and the second-order term families P_n,
//! P_{m,n}, M_A, M_B, R_n.

use std::f64::consts::PI;

use serde::Serialize;

use crate::energy::partials::theta_ratios;
use crate::energy::gram_lambda_min;
use crate::error::Result;
use crate::halfplane::HalfPlanePoint;
use crate::series::TruncationBudget;
use crate::theta::{theta1, DerivOrder};

/// Index subset of the double sums: everything, the 8-point core
/// `n^2 + m^2 <= 2`, or its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    All,
    Core,
    Ring,
}

impl Part {
    fn contains(self, n: i64, m: i64) -> bool {
        let core = n * n + m * m <= 2;
        match self {
            Part::All => true,
            Part::Core => core,
            Part::Ring => !core,
        }
    }
}

/// Summation radius such that every omitted term of the profile sums is below
/// 1e-18 after polynomial weights of the given degree.
pub(crate) fn box_radius(alpha: f64, z: &HalfPlanePoint, poly_deg: u32) -> i64 {
    let lambda = gram_lambda_min(z);
    let c = PI * alpha * lambda;
    // e^{-c s^2} s^{2 deg} <= 1e-18 once c s^2 - 2 deg ln s >= 42
    let mut s = 3f64;
    while c * s * s - 2.0 * poly_deg as f64 * s.ln() < 42.0 && s < 600.0 {
        s += 1.0;
    }
    s as i64
}

fn radius_for_axis(alpha: f64, y: f64, poly_deg: u32) -> i64 {
    // exponent pi a (y n^2 + m^2 / y) >= pi a min(y, 1/y) (n^2 + m^2)
    let lambda = y.min(1.0 / y);
    let c = PI * alpha * lambda;
    let mut s = 3f64;
    while c * s * s - 2.0 * poly_deg as f64 * s.ln() < 42.0 && s < 600.0 {
        s += 1.0;
    }
    s as i64
}

/// Term of the X_a family and its first two y-derivatives; `w` is the
/// transverse index (m on the axis, m + n/2 on the 1/2-axis).
fn a_term(n: f64, w: f64, alpha: f64, y: f64, d: u8) -> f64 {
    let u = n * n - w * w / (y * y);
    let v = y * n * n + w * w / y;
    let e = (-PI * alpha * v).exp();
    match d {
        0 => u * e,
        1 => {
            let up = 2.0 * w * w / y.powi(3);
            (up - PI * alpha * u * u) * e
        }
        _ => {
            let up = 2.0 * w * w / y.powi(3);
            let upp = -6.0 * w * w / y.powi(4);
            ((PI * alpha).powi(2) * u.powi(3) - 3.0 * PI * alpha * u * up + upp) * e
        }
    }
}

/// Term of the X_b family and its first two y-derivatives.
fn b_term(n: f64, w: f64, alpha: f64, y: f64, d: u8) -> f64 {
    let u = n * n - w * w / (y * y);
    let v = y * n * n + w * w / y;
    let e = (-PI * alpha * v).exp();
    let g = y * n.powi(4) - w.powi(4) / y.powi(3);
    match d {
        0 => g * e,
        1 => {
            let gp = n.powi(4) + 3.0 * w.powi(4) / y.powi(4);
            (gp - PI * alpha * u * g) * e
        }
        _ => {
            let up = 2.0 * w * w / y.powi(3);
            let gp = n.powi(4) + 3.0 * w.powi(4) / y.powi(4);
            let gpp = -12.0 * w.powi(4) / y.powi(5);
            (gpp - PI * alpha * up * g - 2.0 * PI * alpha * u * gp
                + (PI * alpha).powi(2) * u * u * g)
                * e
        }
    }
}

/// `d^d/dy^d X_a(alpha, y)` restricted to an index subset.
pub fn xa_sum(alpha: f64, y: f64, part: Part, d: u8) -> f64 {
    let r = radius_for_axis(alpha, y, 3 + 2 * d as u32);
    let mut acc = 0.0;
    for n in -r..=r {
        for m in -r..=r {
            if part.contains(n, m) {
                acc += a_term(n as f64, m as f64, alpha, y, d);
            }
        }
    }
    acc
}

/// `d^d/dy^d X_b(alpha, y)` restricted to an index subset.
pub fn xb_sum(alpha: f64, y: f64, part: Part, d: u8) -> f64 {
    let r = radius_for_axis(alpha, y, 4 + 2 * d as u32);
    let mut acc = 0.0;
    for n in -r..=r {
        for m in -r..=r {
            if part.contains(n, m) {
                acc += b_term(n as f64, m as f64, alpha, y, d);
            }
        }
    }
    acc
}

/// `d^d/dy^d Y_a(alpha, y)`: the X_a family with transverse shift m + n/2.
pub fn ya_sum(alpha: f64, y: f64, d: u8) -> f64 {
    let r = radius_for_axis(alpha, y, 3 + 2 * d as u32) + 1;
    let mut acc = 0.0;
    for n in -r..=r {
        for m in -r..=r {
            acc += a_term(n as f64, m as f64 + n as f64 / 2.0, alpha, y, d);
        }
    }
    acc
}

/// `d^d/dy^d Y_b(alpha, y)`.
pub fn yb_sum(alpha: f64, y: f64, d: u8) -> f64 {
    let r = radius_for_axis(alpha, y, 4 + 2 * d as u32) + 1;
    let mut acc = 0.0;
    for n in -r..=r {
        for m in -r..=r {
            acc += b_term(n as f64, m as f64 + n as f64 / 2.0, alpha, y, d);
        }
    }
    acc
}

/// Six-pair approximant of Y_a over `(p, q) in {+-(1,+-1), +-(2,0), +-(0,2)}`
/// in the mod-2 reindexing `p = n, q = 2m + n`.
pub fn ya_approx(alpha: f64, y: f64) -> f64 {
    APPROX_PQ.iter().map(|&(p, q)| {
        let (pf, qf) = (p as f64, q as f64);
        (pf * pf - qf * qf / (4.0 * y * y)) * (-PI * alpha * (pf * pf * y + qf * qf / (4.0 * y))).exp()
    }).sum()
}

/// Six-pair approximant of Y_b.
pub fn yb_approx(alpha: f64, y: f64) -> f64 {
    APPROX_PQ.iter().map(|&(p, q)| {
        let (pf, qf) = (p as f64, q as f64);
        y * (pf.powi(4) - qf.powi(4) / (16.0 * y.powi(4)))
            * (-PI * alpha * (pf * pf * y + qf * qf / (4.0 * y))).exp()
    }).sum()
}

const APPROX_PQ: [(i64, i64); 8] =
    [(1, 1), (1, -1), (-1, 1), (-1, -1), (2, 0), (-2, 0), (0, 2), (0, -2)];

/// Printed closed form of `Y_bp / Y_ap`.
pub fn p_closed_form(alpha: f64, y: f64) -> f64 {
    let e1 = (-PI * alpha * (y - 3.0 / (4.0 * y))).exp();
    let e2 = (-PI * alpha * (4.0 * y - 1.0 / y)).exp();
    let num = 2.0 * y * (1.0 - 1.0 / (16.0 * y.powi(4))) * e1 - 1.0 / y.powi(3) + 16.0 * y * e2;
    let den = 2.0 * (1.0 - 1.0 / (4.0 * y * y)) * e1 - 1.0 / (y * y) + 4.0 * e2;
    num / den
}

/// Profile of the Gamma_a machinery at (alpha, y): the sums, their
/// y-derivatives, and the dominated/error splits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaAProfile {
    pub xa: f64,
    pub xb: f64,
    pub dxa: f64,
    pub dxb: f64,
    pub aa: f64,
    pub ae: f64,
    pub ba: f64,
    pub be: f64,
}

pub fn gamma_a_profile(alpha: f64, y: f64) -> GammaAProfile {
    GammaAProfile {
        xa: xa_sum(alpha, y, Part::All, 0),
        xb: xb_sum(alpha, y, Part::All, 0),
        dxa: xa_sum(alpha, y, Part::All, 1),
        dxb: xb_sum(alpha, y, Part::All, 1),
        aa: xa_sum(alpha, y, Part::Core, 0),
        ae: xa_sum(alpha, y, Part::Ring, 0),
        ba: xb_sum(alpha, y, Part::Core, 0),
        be: xb_sum(alpha, y, Part::Ring, 0),
    }
}

/// Profile of the Gamma_c machinery at (alpha, y).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaCProfile {
    pub ya: f64,
    pub yb: f64,
    pub yap: f64,
    pub ybp: f64,
    pub p_approx: f64,
}

pub fn gamma_c_profile(alpha: f64, y: f64) -> GammaCProfile {
    let yap = ya_approx(alpha, y);
    let ybp = yb_approx(alpha, y);
    GammaCProfile {
        ya: ya_sum(alpha, y, 0),
        yb: yb_sum(alpha, y, 0),
        yap,
        ybp,
        p_approx: p_closed_form(alpha, y),
    }
}

/// Endpoint constants of `d/dy X_a|_{y=1} = -(A+C)` and
/// `d/dy X_b|_{y=1} = -(B+D)`; A and B have closed forms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EndpointConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

pub fn endpoint_constants(alpha: f64) -> EndpointConstants {
    let e = (-PI * alpha).exp();
    let a = 4.0 * e * (PI * alpha - 1.0 - 2.0 * e);
    let b = 4.0 * e * (PI * alpha - 2.0 - 4.0 * e);
    let r = radius_for_axis(alpha, 1.0, 4);
    let mut c = 0.0;
    let mut d = 0.0;
    for n in -r..=r {
        for m in -r..=r {
            if n * n + m * m <= 2 {
                continue;
            }
            let (nf, mf) = (n as f64, m as f64);
            let ee = (-PI * alpha * (nf * nf + mf * mf)).exp();
            c += (PI * alpha * (nf * nf - mf * mf).powi(2) - 2.0 * mf * mf) * ee;
            d += (PI * alpha * (nf.powi(4) - mf.powi(4)) * (nf * nf - mf * mf)
                - (nf.powi(4) + 3.0 * mf.powi(4)))
                * ee;
        }
    }
    EndpointConstants { a, b, c, d }
}

/// Term P_n of the axis expansion of `dM/dy`:
/// `P_n = [2 a y theta_X + y^2 theta_XX - (a^4 pi^2 y^2 n^4 - pi a^3 y n^2
///         - a^2/4) theta](y/a; n x) e^{-pi a y n^2}`.
pub fn p_axis_term(n: i64, alpha: f64, x: f64, y: f64, budget: &TruncationBudget) -> Result<f64> {
    let big_x = y / alpha;
    let nf = n as f64;
    let t = theta1(big_x, nf * x, DerivOrder::VALUE, budget)?.value;
    let tx = theta1(big_x, nf * x, DerivOrder::DX, budget)?.value;
    let txx = theta1(big_x, nf * x, DerivOrder::DXX, budget)?.value;
    let poly = alpha.powi(4) * PI * PI * y * y * nf.powi(4)
        - PI * alpha.powi(3) * y * nf * nf
        - alpha * alpha / 4.0;
    Ok((2.0 * alpha * y * tx + y * y * txx - poly * t) * (-PI * alpha * y * nf * nf).exp())
}

/// Term P_{m,n} of the radial-operator double sum for
/// `(d^2/dy^2 + (2/y) d/dy) M`.
pub fn p_mn(m: i64, n: i64, alpha: f64, x: f64, y: f64) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    let w = mf + nf * x;
    let base = y * nf * nf + w * w / y;
    let u = nf * nf - w * w / (y * y);
    (PI * PI * alpha * alpha * u * u * base + 2.0 * nf * nf / y
        - 2.0 * PI * alpha * u * u
        - 2.0 * PI * alpha / y * nf * nf * base)
        * (-PI * alpha * base).exp()
}

/// Dominated part `P_A = sum_{|m|,|n| <= 2} P_{m,n}`.
pub fn p_a(alpha: f64, x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    for m in -2..=2 {
        for n in -2..=2 {
            acc += p_mn(m, n, alpha, x, y);
        }
    }
    acc
}

/// Error part `P_B = sum_{|m| >= 3 or |n| >= 3} P_{m,n}`.
pub fn p_b(alpha: f64, x: f64, y: f64) -> f64 {
    let z = HalfPlanePoint::new(x.max(1e-9), y).unwrap_or_else(|_| HalfPlanePoint::square());
    let r = box_radius(alpha, &z, 3);
    let mut acc = 0.0;
    for m in -r..=r {
        for n in -r..=r {
            if m.abs() >= 3 || n.abs() >= 3 {
                acc += p_mn(m, n, alpha, x, y);
            }
        }
    }
    acc
}

/// Major part M_A of the factorized `d^2 M / dx dy`.
pub fn m_a(alpha: f64, x: f64, y: f64, budget: &TruncationBudget) -> Result<f64> {
    let big_x = y / alpha;
    let [_, rxy1, rxxy1] = theta_ratios(big_x, 1, x, budget)?;
    let [ry2, rxy2, rxxy2] = theta_ratios(big_x, 2, x, budget)?;
    let main = 2.0 * big_x * (-rxy1) - big_x * big_x * rxxy1
        + (alpha * alpha * PI * PI * y * y - PI * alpha * y - 0.25);
    let corr = ((alpha * alpha * 32.0 * PI * PI * y * y - 8.0 * PI * alpha * y - 0.5) * ry2
        - 4.0 * big_x * rxy2
        - 2.0 * big_x * big_x * rxxy2)
        * (-3.0 * PI * alpha * y).exp();
    Ok(main + corr)
}

/// Error part M_B (the n >= 3 terms).
pub fn m_b(alpha: f64, x: f64, y: f64, budget: &TruncationBudget) -> Result<f64> {
    let big_x = y / alpha;
    let mut acc = 0.0;
    for n in 3..=24u32 {
        let nf = n as f64;
        let e = (-PI * alpha * y * (nf * nf - 1.0)).exp();
        if e * nf.powi(5) < 1e-20 {
            break;
        }
        let [ry, rxy, rxxy] = theta_ratios(big_x, n, x, budget)?;
        acc += ((alpha * alpha * nf.powi(5) * PI * PI * y * y - PI * alpha * y * nf.powi(3)
            - nf / 4.0)
            * ry
            - 2.0 * big_x * nf * rxy
            - big_x * big_x * nf * rxxy)
            * e;
    }
    Ok(acc)
}

/// `R_n(alpha, y)` from the axis expansion of `theta_y - pi a M_y`.
pub fn r_n(alpha: f64, y: f64, n: i64, budget: &TruncationBudget) -> Result<f64> {
    let big_x = y / alpha;
    let nf = n as f64;
    let t = theta1(big_x, 0.0, DerivOrder::VALUE, budget)?.value;
    let tx = theta1(big_x, 0.0, DerivOrder::DX, budget)?.value;
    let txx = theta1(big_x, 0.0, DerivOrder::DXX, budget)?.value;
    Ok(alpha * alpha
        * (PI * PI * nf.powi(4) * alpha * alpha * y * y - 2.0 * PI * alpha * y * nf * nf + 0.25)
        * t
        - alpha * y * tx
        - y * y * txx)
}
