//! One rectangular quaternionic barrier `Ṽ(x) = n V0` on `0 ≤ x ≤ a`.
//!
//! Inside the barrier a plane wave `C e^{ikx}` with symplectic components
//! `(Cα, Cβ)` solves the 2×2 system
//!
//! ```text
//! (ω0² + V0² − k² − 2ω0V0 n1) Cα − 2ω0V0 (n3 − i n2) Cβ = 0
//! −2ω0V0 (n3 + i n2) Cα + (ω0² + V0² − k² + 2ω0V0 n1) Cβ = 0
//! ```
//!
//! whose nontrivial solutions sit at `k = ±k±`, `k± = |ω0 ± V0|`, with mode
//! ratios `Cβ/Cα = R± = −(n1 ± 1)/(n3 − i n2)`.
//!
//! `R±` blow up on the complex axis (`sin θ = 0`), but only three regular
//! combinations ever reach the amplitudes:
//!
//! ```text
//! R+/(R+ − R−)    = cos²(θ/2)
//! R−/(R+ − R−)    = −sin²(θ/2)
//! R+R−/(R+ − R−)  = (i/2) sin θ e^{−iφ}
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::{SymplecticPair, UnitImaginaryDirection};

/// `sin θ` at or below which the raw ratios `R±` are refused.
pub const THETA_EPSILON: f64 = 1e-9;

/// Relative threshold (in units of `ω0`) for the degenerate `k− = 0` case.
pub const K_EPSILON_REL: f64 = 1e-9;

/// Physical parameters of a single barrier, natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    pub a: f64,
    pub v0: f64,
    pub omega0: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BarrierSpec {
    pub fn new(a: f64, v0: f64, omega0: f64, theta: f64, phi: f64) -> Result<Self> {
        let spec = Self {
            a,
            v0,
            omega0,
            theta,
            phi,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| Err(Error::InvalidParameter { name, value, reason });
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return bad("omega0", self.omega0, "must be finite and > 0");
        }
        if !(self.a.is_finite() && self.a >= 0.0) {
            return bad("a", self.a, "must be finite and >= 0");
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

    pub fn direction(&self) -> UnitImaginaryDirection {
        UnitImaginaryDirection::from_angles(self.theta, self.phi)
    }

    pub fn wavenumbers(&self) -> DispersionData {
        wavenumbers(self)
    }

    /// Wavenumbers, refusing the degenerate `k− ≈ 0` barrier.
    pub fn checked_wavenumbers(&self) -> Result<DispersionData> {
        checked_wavenumbers(self.omega0, self.v0)
    }

    pub fn mode_ratios(&self) -> ModeRatios {
        mode_ratios(self.theta, self.phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionData {
    pub k0: f64,
    pub k_plus: f64,
    pub k_minus: f64,
}

/// Roots of the interior determinant, `(ω0, |ω0 + V0|, |ω0 − V0|)`.
pub fn wavenumbers(spec: &BarrierSpec) -> DispersionData {
    dispersion(spec.omega0, spec.v0)
}

pub(crate) fn dispersion(omega0: f64, v0: f64) -> DispersionData {
    DispersionData {
        k0: omega0,
        k_plus: (omega0 + v0).abs(),
        k_minus: (omega0 - v0).abs(),
    }
}

pub(crate) fn checked_wavenumbers(omega0: f64, v0: f64) -> Result<DispersionData> {
    let d = dispersion(omega0, v0);
    if d.k_minus < K_EPSILON_REL * omega0 {
        return Err(Error::DegenerateWavenumber {
            k_minus: d.k_minus,
            omega0,
            v0,
        });
    }
    Ok(d)
}

/// Mode ratio data for a direction `(θ, φ)`.
///
/// The raw ratios are only stored when `sin θ > THETA_EPSILON`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRatios {
    raw: Option<(Complex64, Complex64)>,
    sin_theta: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub w_cross: Complex64,
}

impl ModeRatios {
    pub fn r_plus(&self) -> Result<Complex64> {
        self.raw().map(|(p, _)| p)
    }

    pub fn r_minus(&self) -> Result<Complex64> {
        self.raw().map(|(_, m)| m)
    }

    pub fn raw(&self) -> Result<(Complex64, Complex64)> {
        self.raw.ok_or(Error::ComplexLimitDegeneracy {
            sin_theta: self.sin_theta,
        })
    }

    /// Eigenprojectors `(P+, P−)` of the interior operator onto the `k+` and
    /// `k−` modes, written through the regular combinations only.
    pub fn projectors(&self) -> ([[Complex64; 2]; 2], [[Complex64; 2]; 2]) {
        let wp = Complex64::new(self.w_plus, 0.0);
        let wm = Complex64::new(self.w_minus, 0.0);
        let wx = self.w_cross;
        let plus = [[-wm, -wx.conj()], [-wx, wp]];
        let minus = [[wp, wx.conj()], [wx, -wm]];
        (plus, minus)
    }
}

/// `(sin(θ/2), cos(θ/2))`, snapped to the pole values when `|sin θ|` is
/// below `THETA_EPSILON` so the complex sectors are exactly complex.
fn half_angles(theta: f64) -> (f64, f64) {
    if theta.sin().abs() > THETA_EPSILON {
        (0.5 * theta).sin_cos()
    } else if theta.cos() > 0.0 {
        (0.0, 1.0)
    } else {
        (1.0, 0.0)
    }
}

pub fn mode_ratios(theta: f64, phi: f64) -> ModeRatios {
    let n = UnitImaginaryDirection::from_angles(theta, phi);
    let sin_theta = theta.sin();
    let raw = (sin_theta.abs() > THETA_EPSILON).then(|| {
        let den = Complex64::new(n.n3(), -n.n2());
        (-(n.n1() + 1.0) / den, -(n.n1() - 1.0) / den)
    });
    let (sh, ch) = half_angles(theta);
    ModeRatios {
        raw,
        sin_theta,
        w_plus: ch * ch,
        w_minus: -sh * sh,
        w_cross: Complex64::new(0.0, sh * ch) * Complex64::from_polar(1.0, -phi),
    }
}

/// Unit eigenvectors `(u+, u−)` proportional to `(1, R+)` and `(1, R−)`:
/// `u+ = (sin(θ/2), −i e^{−iφ} cos(θ/2))`, `u− = (cos(θ/2), i e^{−iφ} sin(θ/2))`.
///
/// Unlike `(1, R±)` these stay finite and nonzero for every θ.
pub fn mode_basis(theta: f64, phi: f64) -> (SymplecticPair, SymplecticPair) {
    let (sh, ch) = half_angles(theta);
    let phase = Complex64::from_polar(1.0, -phi);
    let i = Complex64::i();
    let plus = SymplecticPair::new(Complex64::new(sh, 0.0), -i * phase * ch);
    let minus = SymplecticPair::new(Complex64::new(ch, 0.0), i * phase * sh);
    (plus, minus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Left,
    Barrier,
    Right,
}

impl Region {
    pub fn of(x: f64, a: f64) -> Self {
        if x < 0.0 {
            Region::Left
        } else if x <= a {
            Region::Barrier
        } else {
            Region::Right
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Left => "left",
            Region::Barrier => "barrier",
            Region::Right => "right",
        }
    }
}

/// The k-independent interior operator `H` with `H C = k² C` for a mode.
pub fn interior_operator(omega0: f64, v0: f64, n: UnitImaginaryDirection) -> [[Complex64; 2]; 2] {
    let diag = omega0 * omega0 + v0 * v0;
    let g = 2.0 * omega0 * v0;
    let up = Complex64::new(n.n3(), n.n2());
    [
        [Complex64::new(diag - g * n.n1(), 0.0), -g * up.conj()],
        [-g * up, Complex64::new(diag + g * n.n1(), 0.0)],
    ]
}

/// The 2×2 mode matrix `H − k²` of the given region.
pub fn mode_matrix(k: f64, spec: &BarrierSpec, region: Region) -> [[Complex64; 2]; 2] {
    let mut m = match region {
        Region::Barrier => interior_operator(spec.omega0, spec.v0, spec.direction()),
        Region::Left | Region::Right => {
            let w2 = Complex64::new(spec.omega0 * spec.omega0, 0.0);
            [[w2, Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), w2]]
        }
    };
    m[0][0] -= k * k;
    m[1][1] -= k * k;
    m
}

/// Euclidean norm of `(H − k²) c`; zero exactly when `(k, c)` is a mode.
pub fn dispersion_residual(k: f64, spec: &BarrierSpec, region: Region, c: SymplecticPair) -> f64 {
    let m = mode_matrix(k, spec, region);
    let ra = m[0][0] * c.alpha + m[0][1] * c.beta;
    let rb = m[1][0] * c.alpha + m[1][1] * c.beta;
    (ra.norm_sqr() + rb.norm_sqr()).sqrt()
}
