//! Transfer matrices for stacks of constant quaternionic-potential segments.
//!
//! Inside a segment the symplectic field obeys `ψ'' = −H ψ` with the 2×2
//! Hermitian interior operator `H = k+² P+ + k−² P−`. Acting on the state
//! `(ψα, ψβ, ψ′α, ψ′β)` the exact propagator over a length `L` is
//!
//! ```text
//! T(L) = Σ±  [  P± cos(k±L)       P± sin(k±L)/k±  ]
//!            [ −P± k± sin(k±L)    P± cos(k±L)     ]
//! ```
//!
//! so the whole stack stays in complex 4×4 algebra.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::model::{self, mode_ratios};
use crate::quaternion::SymplecticPair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub length: f64,
    pub v0: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Segment {
    pub fn new(length: f64, v0: f64, theta: f64, phi: f64) -> Result<Self> {
        let seg = Self {
            length,
            v0,
            theta,
            phi,
        };
        seg.validate()?;
        Ok(seg)
    }

    /// A potential-free gap.
    pub fn gap(length: f64) -> Result<Self> {
        Self::new(length, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| Err(Error::InvalidParameter { name, value, reason });
        if !(self.length.is_finite() && self.length >= 0.0) {
            return bad("length", self.length, "must be finite and >= 0");
        }
        if !(self.v0.is_finite() && self.v0 >= 0.0) {
            return bad("v0", self.v0, "must be finite and >= 0");
        }
        if !(self.theta.is_finite() && (0.0..=std::f64::consts::PI).contains(&self.theta)) {
            return bad("theta", self.theta, "must lie in [0, pi]");
        }
        if !self.phi.is_finite() {
            return bad("phi", self.phi, "must be finite");
        }
        Ok(())
    }

    pub fn is_free(&self) -> bool {
        self.v0 == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    segments: Vec<Segment>,
    omega0: f64,
}

impl LayerStack {
    pub fn new(segments: Vec<Segment>, omega0: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyStack);
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega0",
                value: omega0,
                reason: "must be finite and > 0",
            });
        }
        for s in &segments {
            s.validate()?;
        }
        Ok(Self { segments, omega0 })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Product of the segment transfers, leftmost segment applied first.
    pub fn transfer(&self) -> Result<TransferMatrix4> {
        self.segments
            .iter()
            .try_fold(TransferMatrix4::identity(), |acc, s| {
                Ok(segment_transfer(s, self.omega0)? * acc)
            })
    }
}

/// Linear map on `(ψα, ψβ, ψ′α, ψ′β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix4(pub [[Complex64; 4]; 4]);

impl TransferMatrix4 {
    pub fn identity() -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        Self(m)
    }

    pub fn apply(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.0;
        let minor = |r: [usize; 3], c: [usize; 3]| {
            m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
                - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
                + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
        };
        let rows = [1, 2, 3];
        let cols = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
        (0..4)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * minor(rows, cols[j])
            })
            .sum()
    }
}

impl Mul for TransferMatrix4 {
    type Output = TransferMatrix4;

    /// `(A * B)` applies `B` first.
    fn mul(self, rhs: TransferMatrix4) -> TransferMatrix4 {
        let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|l| self.0[i][l] * rhs.0[l][j]).sum();
            }
        }
        TransferMatrix4(out)
    }
}

type Block = [[Complex64; 2]; 2];

fn propagator(blocks: &[(Block, f64)], length: f64) -> TransferMatrix4 {
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (p, k) in blocks {
        let (s, c) = (k * length).sin_cos();
        for i in 0..2 {
            for j in 0..2 {
                let e = p[i][j];
                m[i][j] += e * c;
                m[i][j + 2] += e * (s / k);
                m[i + 2][j] -= e * (k * s);
                m[i + 2][j + 2] += e * c;
            }
        }
    }
    TransferMatrix4(m)
}

pub fn segment_transfer(seg: &Segment, omega0: f64) -> Result<TransferMatrix4> {
    seg.validate()?;
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega0",
            value: omega0,
            reason: "must be finite and > 0",
        });
    }
    if seg.length == 0.0 {
        return Ok(TransferMatrix4::identity());
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if seg.is_free() {
        return Ok(propagator(&[([[one, zero], [zero, one]], omega0)], seg.length));
    }
    let d = model::checked_wavenumbers(omega0, seg.v0)?;
    let (plus, minus) = mode_ratios(seg.theta, seg.phi).projectors();
    Ok(propagator(&[(plus, d.k_plus), (minus, d.k_minus)], seg.length))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackScattering {
    pub reflection: SymplecticPair,
    /// Referenced to absolute position: `ψ = t e^{ik0x}` right of the stack.
    pub transmission: SymplecticPair,
}

/// Scatter a unit wave `e^{ik0x}` incident from the left on a stack whose
/// first segment starts at `x = 0`.
pub fn stack_scatter(stack: &LayerStack) -> Result<StackScattering> {
    let k0 = stack.omega0;
    let t = stack.transfer()?;
    let ik = Complex64::new(0.0, k0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let e = Complex64::from_polar(1.0, k0 * stack.total_length());

    let incident = t.apply([one, zero, ik, zero]);
    let refl_a = t.apply([one, zero, -ik, zero]);
    let refl_b = t.apply([zero, one, zero, -ik]);
    let trans_a = [-e, zero, -e * ik, zero];
    let trans_b = [zero, -e, zero, -e * ik];

    let mut rows = [[zero; 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        *row = [refl_a[i], refl_b[i], trans_a[i], trans_b[i]];
    }
    let rhs: Vec<Complex64> = incident.iter().map(|z| -z).collect();
    let sol = linalg::solve(&ComplexMatrix::from_rows(&rows), &rhs)?;
    let x = sol.x;
    Ok(StackScattering {
        reflection: SymplecticPair::new(x[0], x[1]),
        transmission: SymplecticPair::new(x[2], x[3]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingReport {
    /// Stack `[A, gap, B]`.
    pub forward: StackScattering,
    /// Stack `[B, gap, A]`.
    pub reverse: StackScattering,
    /// `| |t_AB|² − |t_BA|² |`.
    pub d_prob: f64,
    /// Max-norm difference of the two transmission pairs.
    pub d_amp: f64,
}

pub fn ordering_asymmetry(
    seg_a: &Segment,
    seg_b: &Segment,
    gap: f64,
    omega0: f64,
) -> Result<OrderingReport> {
    let gap = Segment::gap(gap)?;
    let forward = stack_scatter(&LayerStack::new(vec![*seg_a, gap, *seg_b], omega0)?)?;
    let reverse = stack_scatter(&LayerStack::new(vec![*seg_b, gap, *seg_a], omega0)?)?;
    let d_prob = (forward.transmission.norm_sqr() - reverse.transmission.norm_sqr()).abs();
    let d_amp = (forward.transmission - reverse.transmission).max_abs();
    Ok(OrderingReport {
        forward,
        reverse,
        d_prob,
        d_amp,
    })
}
