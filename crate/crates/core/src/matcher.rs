//! The 8×8 wave-matching system for a single barrier.
//!
//! Continuity of `ψ` and `∂ₓψ` at `x = 0` and `x = a`, split into symplectic
//! components, gives eight complex equations in the unknowns
//! `(C1, C2, D3, D4, D5, D6, C7, C8)`, where `D3..D6` multiply the interior
//! mode vectors. Two choices of mode vectors are supported:
//!
//! * [`SystemForm::RawRatio`]: `(1, R±)`. The matrix is then literally the
//!   printed matching matrix and `D = C`; undefined when `sin θ = 0`.
//! * [`SystemForm::Regularized`]: the unit eigenvectors from
//!   [`model::mode_basis`]. Valid for every θ. `C3..C6` are recovered as the
//!   α-components of the solved interior amplitudes.

use log::{debug, warn};
use num_complex::Complex64;

use crate::amplitudes::Amplitudes;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::model::{self, BarrierSpec, DispersionData, ModeRatios};
use crate::quaternion::SymplecticPair;

/// Accepted relative residual `‖MC − C₀‖∞ / ‖C₀‖∞`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Condition numbers above this are logged as a warning.
pub const CONDITION_WARNING: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemForm {
    RawRatio,
    Regularized,
}

#[derive(Debug, Clone)]
pub struct MatchingSystem {
    pub form: SystemForm,
    pub matrix: ComplexMatrix,
    pub rhs: Vec<Complex64>,
    /// Interior mode vectors `(v+, v−)` the unknowns `D3..D6` multiply.
    pub modes: (SymplecticPair, SymplecticPair),
    pub dispersion: DispersionData,
    pub ratios: ModeRatios,
}

/// Solved amplitudes together with solver diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringAmplitudes {
    pub amplitudes: Amplitudes,
    pub ratios: ModeRatios,
    pub form: SystemForm,
    pub relative_residual: f64,
    pub condition: f64,
    pub refined: bool,
}

impl ScatteringAmplitudes {
    pub fn reflection(&self) -> SymplecticPair {
        self.amplitudes.reflection()
    }

    pub fn transmission(&self) -> SymplecticPair {
        self.amplitudes.transmission()
    }
}

pub fn build_system(spec: &BarrierSpec, form: SystemForm) -> Result<MatchingSystem> {
    spec.validate()?;
    let dispersion = spec.checked_wavenumbers()?;
    let ratios = spec.mode_ratios();
    let modes = match form {
        SystemForm::RawRatio => {
            let (rp, rm) = ratios.raw()?;
            let one = Complex64::new(1.0, 0.0);
            (SymplecticPair::new(one, rp), SymplecticPair::new(one, rm))
        }
        SystemForm::Regularized => model::mode_basis(spec.theta, spec.phi),
    };
    let (matrix, rhs) = assemble(spec.a, &dispersion, modes);
    Ok(MatchingSystem {
        form,
        matrix,
        rhs,
        modes,
        dispersion,
        ratios,
    })
}

fn assemble(
    a: f64,
    d: &DispersionData,
    (vp, vm): (SymplecticPair, SymplecticPair),
) -> (ComplexMatrix, Vec<Complex64>) {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let (k0, kp, km) = (d.k0, d.k_plus, d.k_minus);
    let ep = Complex64::from_polar(1.0, a * kp);
    let ep_inv = Complex64::from_polar(1.0, -a * kp);
    let em = Complex64::from_polar(1.0, a * km);
    let em_inv = Complex64::from_polar(1.0, -a * km);
    let e0 = Complex64::from_polar(1.0, a * k0);

    // Interior columns 3..6 for one symplectic component `pick`.
    let interior = |pick: fn(&SymplecticPair) -> Complex64, at_a: bool, deriv: bool| {
        let (up, um) = (pick(&vp), pick(&vm));
        let (fp, fp_inv, fm, fm_inv) = if at_a {
            (ep, ep_inv, em, em_inv)
        } else {
            (one, one, one, one)
        };
        if deriv {
            [up * fp * kp, -up * fp_inv * kp, um * fm * km, -um * fm_inv * km]
        } else {
            [up * fp, up * fp_inv, um * fm, um * fm_inv]
        }
    };
    let alpha: fn(&SymplecticPair) -> Complex64 = |p| p.alpha;
    let beta: fn(&SymplecticPair) -> Complex64 = |p| p.beta;

    let row = |head: [Complex64; 2], mid: [Complex64; 4], tail: [Complex64; 2]| {
        [head[0], head[1], mid[0], mid[1], mid[2], mid[3], tail[0], tail[1]]
    };
    let neg = |v: [Complex64; 4]| v.map(|z| -z);
    let k0c = Complex64::new(k0, 0.0);

    let rows = [
        row([one, zero], neg(interior(alpha, false, false)), [zero, zero]),
        row([zero, one], neg(interior(beta, false, false)), [zero, zero]),
        row([-k0c, zero], neg(interior(alpha, false, true)), [zero, zero]),
        row([zero, -k0c], neg(interior(beta, false, true)), [zero, zero]),
        row([zero, zero], interior(alpha, true, false), [-e0, zero]),
        row([zero, zero], interior(beta, true, false), [zero, -e0]),
        row([zero, zero], interior(alpha, true, true), [-e0 * k0, zero]),
        row([zero, zero], interior(beta, true, true), [zero, -e0 * k0]),
    ];
    let rhs = vec![-one, zero, -k0c, zero, zero, zero, zero, zero];
    (ComplexMatrix::from_rows(&rows), rhs)
}

pub fn solve(system: &MatchingSystem) -> Result<ScatteringAmplitudes> {
    let sol = linalg::solve(&system.matrix, &system.rhs)?;
    if sol.condition > CONDITION_WARNING {
        warn!("matching system condition number {:.3e}", sol.condition);
    } else {
        debug!("matching system condition number {:.3e}", sol.condition);
    }
    if sol.relative_residual > RESIDUAL_TOLERANCE {
        return Err(Error::InaccurateSolution {
            residual: sol.relative_residual,
        });
    }
    let x = &sol.x;
    let (vp, vm) = system.modes;
    let interior = [
        vp.mul_complex(x[2]),
        vp.mul_complex(x[3]),
        vm.mul_complex(x[4]),
        vm.mul_complex(x[5]),
    ];
    let c = [
        x[0],
        x[1],
        interior[0].alpha,
        interior[1].alpha,
        interior[2].alpha,
        interior[3].alpha,
        x[6],
        x[7],
    ];
    Ok(ScatteringAmplitudes {
        amplitudes: Amplitudes {
            c,
            interior,
            dispersion: system.dispersion,
        },
        ratios: system.ratios,
        form: system.form,
        relative_residual: sol.relative_residual,
        condition: sol.condition,
        refined: sol.refined,
    })
}

/// Build and solve the regularized system.
pub fn solve_barrier(spec: &BarrierSpec) -> Result<ScatteringAmplitudes> {
    solve(&build_system(spec, SystemForm::Regularized)?)
}

pub fn reflection(amps: &Amplitudes) -> SymplecticPair {
    amps.reflection()
}

pub fn transmission(amps: &Amplitudes) -> SymplecticPair {
    amps.transmission()
}

/// Moduli of the eight symplectic matching equations evaluated on `amps`,
/// each written as `lhs − rhs` with the interior amplitudes taken as full
/// symplectic vectors (so the check is regular for every θ).
pub fn matching_residuals(spec: &BarrierSpec, amps: &Amplitudes) -> [f64; 8] {
    let d = &amps.dispersion;
    let (k0, kp, km) = (d.k0, d.k_plus, d.k_minus);
    let [p, q, r, s] = amps.interior;
    let c = &amps.c;
    let a = spec.a;
    let ep = Complex64::from_polar(1.0, a * kp);
    let ep_inv = Complex64::from_polar(1.0, -a * kp);
    let em = Complex64::from_polar(1.0, a * km);
    let em_inv = Complex64::from_polar(1.0, -a * km);
    let e0 = Complex64::from_polar(1.0, a * k0);

    let value_0 = p + q + r + s;
    let slope_0 = p.scale(kp) - q.scale(kp) + r.scale(km) - s.scale(km);
    let value_a = p.mul_complex(ep) + q.mul_complex(ep_inv) + r.mul_complex(em) + s.mul_complex(em_inv);
    let slope_a = p.mul_complex(ep * kp) - q.mul_complex(ep_inv * kp) + r.mul_complex(em * km)
        - s.mul_complex(em_inv * km);

    [
        (1.0 + c[0] - value_0.alpha).norm(),
        (c[1] - value_0.beta).norm(),
        (k0 - c[0] * k0 - slope_0.alpha).norm(),
        (-c[1] * k0 - slope_0.beta).norm(),
        (value_a.alpha - c[6] * e0).norm(),
        (value_a.beta - c[7] * e0).norm(),
        (slope_a.alpha - c[6] * e0 * k0).norm(),
        (slope_a.beta - c[7] * e0 * k0).norm(),
    ]
}

/// Largest matching residual divided by `‖C₀‖∞ = max(1, k0)`.
pub fn relative_matching_residual(spec: &BarrierSpec, amps: &Amplitudes) -> f64 {
    let scale = amps.dispersion.k0.max(1.0);
    matching_residuals(spec, amps).iter().fold(0.0_f64, |m, &r| m.max(r)) / scale
}
