//! Upper-half-plane geometry: the extended modular group action, reduction to
//! the fundamental domain `{ |z| >= 1, 0 <= Re z <= 1/2 }`, and the maps
//! between strain tensors, shape parameters, and lattice bases.

use serde::Serialize;

use crate::error::{Error, Result};

/// A lattice-shape parameter z = x + iy with y > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "half-plane point needs finite x and y > 0, got ({x}, {y})"
            )));
        }
        Ok(Self { x, y })
    }

    /// The square-lattice shape z = i.
    pub fn square() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    /// The hexagonal-lattice shape z = exp(i pi / 3).
    pub fn hexagonal() -> Self {
        Self { x: 0.5, y: 3f64.sqrt() / 2.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(&self, other: &HalfPlanePoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Generator of the extended modular group acting on the half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModularMove {
    /// z -> z + k
    Translate(i64),
    /// z -> -1/z
    Invert,
    /// z -> -conj(z)
    Reflect,
}

/// Applies one generator. Every move maps the open half-plane into itself.
pub fn apply_move(mv: ModularMove, z: HalfPlanePoint) -> HalfPlanePoint {
    match mv {
        ModularMove::Translate(k) => HalfPlanePoint { x: z.x + k as f64, y: z.y },
        ModularMove::Invert => {
            let d = z.norm_sq();
            HalfPlanePoint { x: -z.x / d, y: z.y / d }
        }
        ModularMove::Reflect => HalfPlanePoint { x: -z.x, y: z.y },
    }
}

/// A recorded sequence of generator moves, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ModularWord {
    pub moves: Vec<ModularMove>,
}

impl ModularWord {
    pub fn apply(&self, z: HalfPlanePoint) -> HalfPlanePoint {
        self.moves.iter().fold(z, |w, &mv| apply_move(mv, w))
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

impl std::fmt::Display for ModularWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.moves.is_empty() {
            return write!(f, "id");
        }
        let mut first = true;
        for mv in &self.moves {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match mv {
                ModularMove::Translate(k) => write!(f, "T({k})")?,
                ModularMove::Invert => write!(f, "S")?,
                ModularMove::Reflect => write!(f, "R")?,
            }
        }
        Ok(())
    }
}

const REDUCE_MOVE_LIMIT: usize = 256;

/// Reduces z into the closed half fundamental domain
/// `|z| >= 1, 0 <= Re z <= 1/2`, recording the moves taken.
///
/// Ties at Re z = +-1/2 resolve to +1/2; exact boundary points (|z| = 1 or
/// x = 1/2) are accepted without perturbation.
pub fn reduce_to_fundamental(z: HalfPlanePoint) -> Result<(HalfPlanePoint, ModularWord)> {
    let mut w = z;
    let mut word = ModularWord::default();
    let mut moves = 0usize;
    loop {
        // translate x into [-1/2, 1/2], preferring +1/2 on ties
        let k = -(w.x - 0.5).ceil();
        if k != 0.0 {
            let mv = ModularMove::Translate(k as i64);
            w = apply_move(mv, w);
            word.moves.push(mv);
            moves += 1;
        }
        // |z| = 1 is accepted as-is; the arc corners sit one ulp inside in
        // floating point, so the test carries the post-condition tolerance
        if w.norm_sq() < 1.0 - 1e-12 {
            w = apply_move(ModularMove::Invert, w);
            word.moves.push(ModularMove::Invert);
            moves += 1;
        } else {
            break;
        }
        if moves > REDUCE_MOVE_LIMIT {
            return Err(Error::ReductionLimit { limit: REDUCE_MOVE_LIMIT });
        }
    }
    if w.x < 0.0 {
        w = apply_move(ModularMove::Reflect, w);
        word.moves.push(ModularMove::Reflect);
    }
    Ok((w, word))
}

/// Symmetric positive-definite strain tensor (c11, c12; c12, c22).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyGreenTensor {
    pub c11: f64,
    pub c12: f64,
    pub c22: f64,
}

impl CauchyGreenTensor {
    pub fn new(c11: f64, c12: f64, c22: f64) -> Result<Self> {
        let t = Self { c11, c12, c22 };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let det = self.c11 * self.c22 - self.c12 * self.c12;
        if !(self.c11 > 0.0 && det > 0.0)
            || !self.c11.is_finite()
            || !self.c12.is_finite()
            || !self.c22.is_finite()
        {
            return Err(Error::InvalidTensor(format!(
                "need c11 > 0 and positive determinant, got c11={}, c12={}, c22={}",
                self.c11, self.c12, self.c22
            )));
        }
        Ok(())
    }
}

/// Maps a strain tensor to its shape parameter
/// `z = (c12 + i sqrt(c11 c22 - c12^2)) / c11`.
///
/// Depends only on the unimodular part: scaling the tensor leaves z fixed.
pub fn cauchy_green_to_point(c: &CauchyGreenTensor) -> Result<HalfPlanePoint> {
    c.validate()?;
    let det = c.c11 * c.c22 - c.c12 * c.c12;
    HalfPlanePoint::new(c.c12 / c.c11, det.sqrt() / c.c11)
}

/// Basis of a plane lattice with prescribed density |det(w1, w2)|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeBasis {
    pub w1: [f64; 2],
    pub w2: [f64; 2],
    pub density: f64,
}

/// Realizes the shape z at density rho: `w1 = sqrt(rho/y) (1, 0)`,
/// `w2 = sqrt(rho/y) (x, y)`.
pub fn point_to_basis(z: HalfPlanePoint, rho: f64) -> Result<LatticeBasis> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidInput(format!("density must be positive, got {rho}")));
    }
    let s = (rho / z.y()).sqrt();
    Ok(LatticeBasis { w1: [s, 0.0], w2: [s * z.x(), s * z.y()], density: rho })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn generator_actions() {
        let i = HalfPlanePoint::square();
        let t = apply_move(ModularMove::Translate(1), i);
        assert_eq!((t.x(), t.y()), (1.0, 1.0));
        let s = apply_move(ModularMove::Invert, i);
        assert!(s.dist(&i) < 1e-15, "i is a fixed point of inversion");
        // the unit circle maps to itself, x negates
        let hexa = HalfPlanePoint::hexagonal();
        let s = apply_move(ModularMove::Invert, hexa);
        assert!((s.x() + 0.5).abs() < 1e-15 && (s.y() - hexa.y()).abs() < 1e-15);
    }

    #[test]
    fn reduce_already_reduced() {
        let (r, w) = reduce_to_fundamental(HalfPlanePoint::square()).unwrap();
        assert!(w.is_empty());
        assert_eq!((r.x(), r.y()), (0.0, 1.0));
    }

    #[test]
    fn reduce_translation_only() {
        let (r, w) = reduce_to_fundamental(pt(5.5, 2.0)).unwrap();
        assert_eq!(w.moves, vec![ModularMove::Translate(-5)]);
        assert!((r.x() - 0.5).abs() < 1e-15 && (r.y() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn reduce_on_unit_circle() {
        // 0.6 + 0.8i lies on |z| = 1 and reduces to 0.5 + i; an exhaustive
        // search over short generator words confirms that endpoint.
        let z = pt(0.6, 0.8);
        let (r, w) = reduce_to_fundamental(z).unwrap();
        assert!(r.dist(&pt(0.5, 1.0)) < 1e-12, "got {r:?}");
        assert!(w.apply(z).dist(&r) < 1e-12, "word must replay to the endpoint");

        // breadth-first over {T(1), T(-1), S, R} words of length <= 5
        let gens =
            [ModularMove::Translate(1), ModularMove::Translate(-1), ModularMove::Invert, ModularMove::Reflect];
        let mut layer = vec![z];
        let mut found = false;
        'outer: for _ in 0..5 {
            let mut next = Vec::new();
            for &p in &layer {
                for &g in &gens {
                    let q = apply_move(g, p);
                    if q.dist(&pt(0.5, 1.0)) < 1e-12 {
                        found = true;
                        break 'outer;
                    }
                    next.push(q);
                }
            }
            layer = next;
        }
        assert!(found, "short-word search must reach 0.5 + i");
    }

    #[test]
    fn reduce_word_replays() {
        let samples =
            [(0.37, 0.21), (-1.93, 0.11), (4.2, 0.013), (0.49999, 0.867), (-0.5, 1.0), (0.5, 0.9)];
        for &(x, y) in &samples {
            let z = pt(x, y);
            let (r, w) = reduce_to_fundamental(z).unwrap();
            assert!(r.norm_sq() >= 1.0 - 1e-12, "|z'| >= 1 for {z:?} -> {r:?}");
            assert!((-1e-12..=0.5 + 1e-12).contains(&r.x()), "x in [0, 1/2] for {z:?} -> {r:?}");
            assert!(w.apply(z).dist(&r) < 1e-12);
        }
    }

    #[test]
    fn tensor_maps() {
        let id = CauchyGreenTensor::new(1.0, 0.0, 1.0).unwrap();
        let z = cauchy_green_to_point(&id).unwrap();
        assert!(z.dist(&HalfPlanePoint::square()) < 1e-15);

        // c11 = c22 = 2 c12 > 0 is the hexagonal branch
        let hexa = CauchyGreenTensor::new(2.0, 1.0, 2.0).unwrap();
        let z = cauchy_green_to_point(&hexa).unwrap();
        assert!(z.dist(&HalfPlanePoint::hexagonal()) < 1e-15);

        // scale invariance
        let scaled = CauchyGreenTensor::new(6.0, 3.0, 6.0).unwrap();
        assert!(cauchy_green_to_point(&scaled).unwrap().dist(&z) < 1e-14);

        assert!(CauchyGreenTensor::new(1.0, 2.0, 1.0).is_err(), "indefinite tensor rejected");
    }

    #[test]
    fn basis_density_and_shape() {
        let b = point_to_basis(HalfPlanePoint::square(), 1.0).unwrap();
        assert_eq!((b.w1, b.w2), ([1.0, 0.0], [0.0, 1.0]));

        let hexa = point_to_basis(HalfPlanePoint::hexagonal(), 1.0).unwrap();
        let s = (2.0 / 3f64.sqrt()).sqrt();
        assert!((hexa.w1[0] - s).abs() < 1e-15);
        assert!((hexa.w2[0] - s * 0.5).abs() < 1e-15);
        assert!((hexa.w2[1] - s * 3f64.sqrt() / 2.0).abs() < 1e-15);

        for &(x, y, rho) in &[(0.3, 1.7, 1.0), (0.0, 1.0, 4.0), (0.5, 0.9, 2.5)] {
            let b = point_to_basis(pt(x, y), rho).unwrap();
            let det = (b.w1[0] * b.w2[1] - b.w1[1] * b.w2[0]).abs();
            assert!((det - rho).abs() <= 1e-12 * rho, "density invariant");
        }
    }
}
