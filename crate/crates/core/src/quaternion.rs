//! Quaternion arithmetic and the symplectic representation `q = α + jβ`.
//!
//! Hamilton convention: `ij = k`, `jk = i`, `ki = j`. A complex number
//! `c = u + vi` embeds as `u + vi + 0j + 0k`, and moving it across `j`
//! conjugates it: `j c = c̄ j`. Writing `q = w + xi + yj + zk = α + jβ`
//! therefore forces `α = w + xi` and `β = y − zi`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|n|² − 1` accepted for an imaginary unit direction.
pub const DIRECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn split(self) -> SymplecticPair {
        SymplecticPair::from(self)
    }
}

/// Hamilton product.
pub fn mul(q: Quaternion, r: Quaternion) -> Quaternion {
    Quaternion::new(
        q.w * r.w - q.x * r.x - q.y * r.y - q.z * r.z,
        q.w * r.x + q.x * r.w + q.y * r.z - q.z * r.y,
        q.w * r.y - q.x * r.z + q.y * r.w + q.z * r.x,
        q.w * r.z + q.x * r.y - q.y * r.x + q.z * r.w,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, rhs: Quaternion) -> Quaternion {
        mul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

/// The pair `(α, β)` of a quaternion `α + jβ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymplecticPair {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl SymplecticPair {
    pub const ZERO: Self = Self {
        alpha: Complex64::new(0.0, 0.0),
        beta: Complex64::new(0.0, 0.0),
    };

    pub const fn new(alpha: Complex64, beta: Complex64) -> Self {
        Self { alpha, beta }
    }

    pub fn join(self) -> Quaternion {
        Quaternion::new(self.alpha.re, self.alpha.im, self.beta.re, -self.beta.im)
    }

    /// `|α|² + |β|²`, equal to the quaternion norm squared.
    pub fn norm_sqr(self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `max(|α|, |β|)`.
    pub fn max_abs(self) -> f64 {
        self.alpha.norm().max(self.beta.norm())
    }

    /// Right multiplication by a complex number: `(α + jβ)c = αc + j(βc)`.
    pub fn mul_complex(self, c: Complex64) -> Self {
        Self::new(self.alpha * c, self.beta * c)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.alpha * s, self.beta * s)
    }
}

impl From<Quaternion> for SymplecticPair {
    fn from(q: Quaternion) -> Self {
        Self::new(Complex64::new(q.w, q.x), Complex64::new(q.y, -q.z))
    }
}

impl From<SymplecticPair> for Quaternion {
    fn from(p: SymplecticPair) -> Self {
        p.join()
    }
}

impl Add for SymplecticPair {
    type Output = SymplecticPair;

    fn add(self, rhs: SymplecticPair) -> SymplecticPair {
        SymplecticPair::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl Sub for SymplecticPair {
    type Output = SymplecticPair;

    fn sub(self, rhs: SymplecticPair) -> SymplecticPair {
        SymplecticPair::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl Neg for SymplecticPair {
    type Output = SymplecticPair;

    fn neg(self) -> SymplecticPair {
        SymplecticPair::new(-self.alpha, -self.beta)
    }
}

/// An imaginary unit quaternion `n = n1 i + n2 j + n3 k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitImaginaryDirection {
    n1: f64,
    n2: f64,
    n3: f64,
}

impl UnitImaginaryDirection {
    pub fn new(n1: f64, n2: f64, n3: f64) -> Result<Self> {
        let norm_sqr = n1 * n1 + n2 * n2 + n3 * n3;
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > DIRECTION_TOLERANCE {
            return Err(Error::InvalidDirection {
                n1,
                n2,
                n3,
                norm_sqr,
            });
        }
        Ok(Self { n1, n2, n3 })
    }

    /// `n = (cos θ, sin θ cos φ, sin θ sin φ)`; always unit.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            n1: c,
            n2: s * phi.cos(),
            n3: s * phi.sin(),
        }
    }

    pub fn n1(&self) -> f64 {
        self.n1
    }

    pub fn n2(&self) -> f64 {
        self.n2
    }

    pub fn n3(&self) -> f64 {
        self.n3
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.n1, self.n2, self.n3)
    }
}

/// Symplectic components of `n · (α + jβ) · i`.
///
/// Expanding through `(α + jβ) i = i (α − jβ)` and `n i = −n1 + j(n3 + i n2)`:
///
/// ```text
/// α' = −n1 α + (n3 − i n2) β
/// β' = (n3 + i n2) α + n1 β
/// ```
pub fn left_n_right_i(n: UnitImaginaryDirection, c: SymplecticPair) -> SymplecticPair {
    let up = Complex64::new(n.n3, n.n2);
    let down = up.conj();
    SymplecticPair::new(
        -n.n1 * c.alpha + down * c.beta,
        up * c.alpha + n.n1 * c.beta,
    )
}
