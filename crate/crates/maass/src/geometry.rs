//! Hyperbolic-plane primitives, the modular group action, and closed
//! horocycle sampling.
//!
//! Points live on the Poincaré upper half-plane with the metric |dz|/y.
//! The group is SL(2,Z) acting by linear fractional transformations; its
//! standard fundamental domain {|x| ≤ 1/2, x² + y² ≥ 1} is the Dirichlet
//! domain centred at any point of the imaginary axis above i, which is what
//! the generic pullback uses for cross-checks.

use thiserror::Error;

/// Height of the lowest point of the standard fundamental domain, √3/2.
pub const DOMAIN_FLOOR: f64 = 0.866_025_403_784_438_6;

/// Tolerance for boundary identifications of the fundamental domain.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("point ({x}, {y}) is not in the upper half-plane")]
    NotUpperHalfPlane { x: f64, y: f64 },
    #[error("matrix determinant must be 1, got {det}")]
    NotUnimodular { det: i64 },
    #[error("horocycle height {y} is above the fundamental-domain floor")]
    HorocycleAboveFloor { y: f64 },
    #[error("horocycle needs at least one sample point")]
    EmptyHorocycle,
    #[error("pullback iteration cap exceeded; generators invalid or point degenerate")]
    PullbackStalled,
}

/// A point x + iy with y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UhpPoint {
    pub x: f64,
    pub y: f64,
}

impl UhpPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(GeometryError::NotUpperHalfPlane { x, y });
        }
        Ok(UhpPoint { x, y })
    }

    /// Membership in the closed standard fundamental domain, up to
    /// [`BOUNDARY_TOL`].
    pub fn in_fundamental_domain(&self) -> bool {
        self.x.abs() <= 0.5 + BOUNDARY_TOL && self.x * self.x + self.y * self.y >= 1.0 - BOUNDARY_TOL
    }
}

/// An element of SL(2,Z), kept in the canonical sign: c > 0, or c = 0 and
/// a > 0, so that γ and -γ (which act identically) compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(GeometryError::NotUnimodular { det });
        }
        let mut g = GroupElement { a, b, c, d };
        g.normalize();
        Ok(g)
    }

    fn normalize(&mut self) {
        if self.c < 0 || (self.c == 0 && self.a < 0) {
            self.a = -self.a;
            self.b = -self.b;
            self.c = -self.c;
            self.d = -self.d;
        }
    }

    pub fn identity() -> Self {
        GroupElement { a: 1, b: 0, c: 0, d: 1 }
    }

    /// z ↦ z + 1.
    pub fn translation() -> Self {
        GroupElement { a: 1, b: 1, c: 0, d: 1 }
    }

    /// z ↦ z + n.
    pub fn translation_by(n: i64) -> Self {
        GroupElement { a: 1, b: n, c: 0, d: 1 }
    }

    /// z ↦ -1/z.
    pub fn inversion() -> Self {
        GroupElement { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn inverse(&self) -> Self {
        let mut g = GroupElement { a: self.d, b: -self.b, c: -self.c, d: self.a };
        g.normalize();
        g
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Möbius action (az+b)/(cz+d) in real coordinates. The imaginary part
    /// is y/|cz+d|², positive whenever y is, so this cannot leave the
    /// upper half-plane.
    pub fn apply(&self, z: UhpPoint) -> UhpPoint {
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        let u = c * z.x + d;
        let v = c * z.y;
        let den = u * u + v * v;
        UhpPoint {
            x: ((a * z.x + b) * u + a * c * z.y * z.y) / den,
            y: z.y / den,
        }
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        let mut g = GroupElement {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        };
        g.normalize();
        debug_assert_eq!(g.a * g.d - g.b * g.c, 1);
        g
    }
}

/// Hyperbolic distance, via the cancellation-free form
/// d = 2 asinh( sqrt( ((Δx)² + (Δy)²) / (4 y₁ y₂) ) ).
pub fn hyperbolic_distance(z1: UhpPoint, z2: UhpPoint) -> f64 {
    let dx = z1.x - z2.x;
    let dy = z1.y - z2.y;
    2.0 * ((dx * dx + dy * dy) / (4.0 * z1.y * z2.y)).sqrt().asinh()
}

fn iteration_cap(y: f64) -> usize {
    10 + (y.log2().abs().ceil() as usize) * 64
}

/// Pullback into the standard fundamental domain: reduce x into [-1/2, 1/2],
/// invert while |z| < 1. Returns the reduced point together with the group
/// element mapping the input onto it. Boundary points are accepted as-is
/// (no further mapping once inside the closed domain).
pub fn pullback_modular(z: UhpPoint) -> Result<(UhpPoint, GroupElement), GeometryError> {
    let mut w = z;
    let mut g = GroupElement::identity();
    let cap = iteration_cap(z.y);
    for _ in 0..cap {
        let shift = w.x.round();
        if shift != 0.0 {
            w.x -= shift;
            g = GroupElement::translation_by(-(shift as i64)) * g;
        }
        let norm = w.x * w.x + w.y * w.y;
        if norm < 1.0 - BOUNDARY_TOL {
            w = UhpPoint { x: -w.x / norm, y: w.y / norm };
            g = GroupElement::inversion() * g;
        } else {
            // Recompute from the accumulated word: one exact integer Möbius
            // application instead of the drift of the iteration.
            return Ok((g.apply(z), g));
        }
    }
    Err(GeometryError::PullbackStalled)
}

/// Pullback into the Dirichlet domain centred at `p` for the group generated
/// by `generators`: greedily move to whichever generator image is closest to
/// `p` until no image improves.
pub fn pullback_generic(
    z: UhpPoint,
    generators: &[GroupElement],
    p: UhpPoint,
) -> Result<(UhpPoint, GroupElement), GeometryError> {
    let mut w = z;
    let mut g = GroupElement::identity();
    let cap = iteration_cap(z.y);
    for _ in 0..cap {
        let current = hyperbolic_distance(p, w);
        let mut best: Option<(f64, UhpPoint, GroupElement)> = None;
        for gen in generators {
            for cand in [*gen, gen.inverse()] {
                let image = cand.apply(w);
                let dist = hyperbolic_distance(p, image);
                if best.as_ref().is_none_or(|(d, _, _)| dist < *d) {
                    best = Some((dist, image, cand));
                }
            }
        }
        let (dist, image, step) = best.ok_or(GeometryError::PullbackStalled)?;
        if dist < current {
            w = image;
            g = step * g;
        } else {
            return Ok((g.apply(z), g));
        }
    }
    Err(GeometryError::PullbackStalled)
}

/// Q equidistant points on the closed horocycle at height `y`, on the
/// symmetrised half-interval: x_j = (j - 1/2)/(2Q), j = 1..Q. The even/odd
/// splitting of the forms collapses full-period sums to cosine/sine sums
/// over these points; the half-offset keeps the sine basis away from its
/// zeros at x = 0 and x = 1/2.
#[derive(Debug, Clone)]
pub struct HorocycleSample {
    pub y: f64,
    pub q: usize,
    pub points: Vec<UhpPoint>,
    pub pullbacks: Vec<UhpPoint>,
    pub maps: Vec<GroupElement>,
}

pub fn sample_horocycle(y: f64, q: usize) -> Result<HorocycleSample, GeometryError> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(GeometryError::NotUpperHalfPlane { x: 0.0, y });
    }
    if y >= DOMAIN_FLOOR {
        return Err(GeometryError::HorocycleAboveFloor { y });
    }
    if q == 0 {
        return Err(GeometryError::EmptyHorocycle);
    }
    let mut points = Vec::with_capacity(q);
    let mut pullbacks = Vec::with_capacity(q);
    let mut maps = Vec::with_capacity(q);
    for j in 1..=q {
        let x = (j as f64 - 0.5) / (2.0 * q as f64);
        let z = UhpPoint { x, y };
        let (w, g) = pullback_modular(z)?;
        points.push(z);
        pullbacks.push(w);
        maps.push(g);
    }
    Ok(HorocycleSample { y, q, points, pullbacks, maps })
}
