//! Cross-validation of the fast evaluators against independent oracles and
//! the exact identities relating the energies.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latticephase_core::energy::{
    self, dual_gap, m_via_duality, w_sum, w_sum_bruteforce, Method, PotentialSpec,
};
use latticephase_core::halfplane::{apply_move, reduce_to_fundamental, HalfPlanePoint, ModularMove};
use latticephase_core::theta::{theta1, DerivOrder};
use latticephase_core::{SeriesValue, TruncationBudget};

const B: TruncationBudget = TruncationBudget { abs_tol: 1e-14, rel_tol: 1e-13, max_terms: 40_000 };

fn pt(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new(x, y).unwrap()
}

fn sample_z(rng: &mut ChaCha8Rng) -> HalfPlanePoint {
    pt(rng.gen_range(-2.0..2.0), rng.gen_range(0.4..3.0))
}

/// Test-local direct-series oracle for theta1, independent of the adaptive
/// evaluator and its regime switch.
fn theta_direct_oracle(big_x: f64, y: f64, d: DerivOrder, n_terms: u32) -> f64 {
    let yr = y - y.floor(); // exact periodicity, keeps sin(2 pi n yr) exact at 0
    let mut s = if d.dx() == 0 && d.dy() == 0 { 1.0 } else { 0.0 };
    for n in 1..n_terms {
        let nf = n as f64;
        let e = (-PI * nf * nf * big_x).exp();
        let t = if d.dy() == 0 {
            2.0 * (2.0 * PI * nf * yr).cos() * (-PI * nf * nf).powi(d.dx() as i32)
        } else {
            -2.0 * (2.0 * PI * nf) * (2.0 * PI * nf * yr).sin() * (-PI * nf * nf).powi(d.dx() as i32)
        };
        s += t * e;
    }
    s
}

#[test]
fn theta1_matches_the_direct_oracle_across_regimes() {
    let orders = [
        DerivOrder::VALUE,
        DerivOrder::DX,
        DerivOrder::DY,
        DerivOrder::DXX,
        DerivOrder::DXY,
        DerivOrder::DXXY,
    ];
    // log grid over X in [0.05, 20], Y grid in [0, 1]
    for i in 0..=12 {
        let big_x = 0.05 * (20.0f64 / 0.05).powf(i as f64 / 12.0);
        for j in 0..=10 {
            let y = j as f64 / 10.0;
            for d in orders {
                let v = theta1(big_x, y, d, &B).unwrap();
                let oracle = theta_direct_oracle(big_x, y, d, 600);
                assert!(
                    (v.value - oracle).abs() <= v.tail_bound + 1e-12 * (1.0 + oracle.abs()),
                    "X={big_x} Y={y} {d:?}: {} vs oracle {}",
                    v.value,
                    oracle
                );
            }
        }
    }
}

#[test]
fn theta_y_sign_on_the_half_period() {
    // -theta_Y(X; x) >= 0 for x in [0, 1/2]
    for &big_x in &[0.1, 0.3, 0.7, 1.0, 2.5] {
        for i in 0..=50 {
            let x = i as f64 / 100.0;
            let v = theta1(big_x, x, DerivOrder::DY, &B).unwrap().value;
            assert!(-v >= -1e-14, "-theta_Y(X={big_x}; {x}) = {}", -v);
        }
    }
}

#[test]
fn modular_invariance_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let moves = [ModularMove::Translate(1), ModularMove::Translate(-1), ModularMove::Invert, ModularMove::Reflect];
    for _ in 0..50 {
        let z = sample_z(&mut rng);
        let alpha = rng.gen_range(0.4..2.5);
        for k in 0..=2u8 {
            let method = if k == 2 { Method::Direct } else { Method::Reduced1d };
            let base = w_sum(k, alpha, &z, &B, method).unwrap().value;
            for mv in moves {
                let moved = apply_move(mv, z);
                let v = w_sum(k, alpha, &moved, &B, method).unwrap().value;
                assert!(
                    (v - base).abs() <= 1e-10 * base.abs().max(1.0),
                    "k={k} alpha={alpha} move={mv:?}: {v} vs {base}"
                );
            }
        }
    }
}

#[test]
fn oracle_equivalence_on_a_fundamental_grid() {
    // Reduced1D versus the plain double sum with radius from the tail scale
    for &alpha in &[0.5, 1.0, 2.0, 3.0] {
        for i in 0..5 {
            for j in 0..4 {
                let x = i as f64 * 0.125;
                let y = 1.0 + j as f64 * 0.35;
                let z = pt(x, y);
                let radius = (46.0 / (PI * alpha * y.min(1.0 / y) / (1.0 + x * x + y * y) * y)).sqrt().ceil()
                    as i64
                    + 4;
                for k in 0..=1u8 {
                    let fast = w_sum(k, alpha, &z, &B, Method::Reduced1d).unwrap();
                    let brute = w_sum_bruteforce(k, alpha, &z, radius.max(8));
                    assert!(
                        (fast.value - brute).abs() <= 1e-10 * brute.abs().max(1.0),
                        "k={k} alpha={alpha} z=({x},{y}): {} vs {brute}",
                        fast.value
                    );
                }
            }
        }
    }
}

#[test]
fn direct_and_reduced_methods_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let z = sample_z(&mut rng);
        let alpha = rng.gen_range(0.4..2.5);
        for k in 0..=1u8 {
            let a = w_sum(k, alpha, &z, &B, Method::Direct).unwrap();
            let b = w_sum(k, alpha, &z, &B, Method::Reduced1d).unwrap();
            assert!(
                (a.value - b.value).abs() <= a.tail_bound + b.tail_bound + 1e-10,
                "k={k} alpha={alpha}: {} vs {}",
                a.value,
                b.value
            );
        }
    }
}

#[test]
fn duality_identities_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let z = sample_z(&mut rng);
        let alpha = rng.gen_range(0.4..2.5);
        // theta(1/a, z) = a theta(a, z)
        let lhs = w_sum(0, 1.0 / alpha, &z, &B, Method::Reduced1d).unwrap().value;
        let rhs = alpha * w_sum(0, alpha, &z, &B, Method::Reduced1d).unwrap().value;
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs());
        // M(1/a, z) = (a^2/pi)(theta(a,z) - pi a M(a,z))
        let m_dual = w_sum(1, 1.0 / alpha, &z, &B, Method::Reduced1d).unwrap().value;
        let gap = alpha * alpha / PI * dual_gap(alpha, &z, &B).unwrap();
        assert!(
            (m_dual - gap).abs() <= 1e-10 * m_dual.abs().max(1.0),
            "alpha={alpha}: {m_dual} vs {gap}"
        );
    }
}

#[test]
fn alpha_derivative_consistency() {
    // W_1 = -(1/pi) dW_0/da and W_2 = (1/pi^2) d^2W_0/da^2
    let h = 1e-4;
    for &(alpha, x, y) in &[(0.8, 0.2, 1.1), (1.3, 0.45, 0.95), (2.0, 0.0, 1.5)] {
        let z = pt(x, y);
        let w0 = |a: f64| w_sum(0, a, &z, &B, Method::Reduced1d).unwrap().value;
        let w1 = w_sum(1, alpha, &z, &B, Method::Reduced1d).unwrap().value;
        let w2 = w_sum(2, alpha, &z, &B, Method::Direct).unwrap().value;
        let d1 = (w0(alpha + h) - w0(alpha - h)) / (2.0 * h);
        let d2 = (w0(alpha + h) - 2.0 * w0(alpha) + w0(alpha - h)) / (h * h);
        assert!((-d1 / PI - w1).abs() < 1e-6 * w1.abs(), "W1 vs -(1/pi) dW0");
        assert!((d2 / (PI * PI) - w2).abs() < 1e-6 * w2.abs().max(1e-3), "W2 vs (1/pi^2) ddW0");
    }
}

#[test]
fn arc_to_axis_identity() {
    // M(a, u + i sqrt(1-u^2)) = M(a, 1/2 + (i/2) sqrt((1+u)/(1-u)))
    for &alpha in &[0.7, 1.0, 1.6] {
        for i in 0..=10 {
            let u = 0.05 * i as f64;
            let arc = pt(u, (1.0 - u * u).sqrt());
            let axis = pt(0.5, 0.5 * ((1.0 + u) / (1.0 - u)).sqrt());
            let a = w_sum(1, alpha, &arc, &B, Method::Reduced1d).unwrap().value;
            let b = w_sum(1, alpha, &axis, &B, Method::Reduced1d).unwrap().value;
            assert!((a - b).abs() <= 1e-10 * a.abs(), "alpha={alpha} u={u}: {a} vs {b}");
        }
    }
}

#[test]
fn m_small_alpha_duality_oracle() {
    let i = HalfPlanePoint::square();
    let via = m_via_duality(0.5, &i, &B).unwrap();
    let brute = w_sum_bruteforce(1, 0.5, &i, 12);
    assert!((via - brute).abs() < 1e-9);
}

#[test]
fn energy_eval_record_consistency() {
    let spec = PotentialSpec::m();
    let z = pt(0.3, 1.2);
    let a = energy::evaluate(&spec, 0.9, &z, &B, Method::Direct).unwrap();
    let b = energy::evaluate(&spec, 0.9, &z, &B, Method::Reduced1d).unwrap();
    let (va, vb): (SeriesValue, SeriesValue) = (a.value, b.value);
    assert!((va.value - vb.value).abs() <= va.tail_bound + vb.tail_bound + 1e-10);
}

#[test]
fn reduction_handles_boundary_inputs_exactly() {
    // exact-boundary inputs are accepted without perturbation
    let on_arc = pt(0.5, 3f64.sqrt() / 2.0);
    let (r, w) = reduce_to_fundamental(on_arc).unwrap();
    assert!(w.is_empty() && r.dist(&on_arc) == 0.0);
    let on_circle = pt(0.0, 1.0);
    let (r, _) = reduce_to_fundamental(on_circle).unwrap();
    assert_eq!((r.x(), r.y()), (0.0, 1.0));
}
