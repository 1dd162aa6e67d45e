//! Analytic single-barrier amplitudes.
//!
//! With `S± = (k±² + k0²) sin(ak±) + 2i k0 k± cos(ak±)` and the regular
//! combinations `w+ = cos²(θ/2)`, `w− = −sin²(θ/2)`, `w× = (i/2) sin θ e^{−iφ}`:
//!
//! ```text
//! ρ± = (k±² − k0²) sin(ak±) / S±        τ± = 2i k± k0 e^{−iak0} / S±
//! C1 = ρ+ w− − ρ− w+                    C2 = (ρ+ − ρ−) w×
//! C7 = τ− w+ − τ+ w−                    C8 = (τ− − τ+) w×
//! ```
//!
//! and the interior coefficients `C3, C4` (`k+` waves, weight `w−`) and
//! `C5, C6` (`k−` waves, weight `w+`). Neither `S±` nor the interior
//! denominators `−(k + k0)² + (k − k0)² e^{2iak}` can vanish for `k, k0 > 0`.

use num_complex::Complex64;

use crate::amplitudes::Amplitudes;
use crate::error::{Error, Result};
use crate::model::{self, BarrierSpec, THETA_EPSILON};
use crate::quaternion::SymplecticPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Exact,
    /// `sin θ ≤ THETA_EPSILON`: the quaternionic couplings vanish.
    ComplexLimit,
    Taylor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormAmplitudes {
    pub amplitudes: Amplitudes,
    pub regime: Regime,
}

pub fn amplitudes_closed(spec: &BarrierSpec) -> Result<ClosedFormAmplitudes> {
    spec.validate()?;
    let d = spec.checked_wavenumbers()?;
    let w = spec.mode_ratios();
    let (k0, kp, km) = (d.k0, d.k_plus, d.k_minus);
    let a = spec.a;
    let i = Complex64::i();

    let s_den = |k: f64| {
        let (s, c) = (a * k).sin_cos();
        Complex64::new((k * k + k0 * k0) * s, 2.0 * k0 * k * c)
    };
    let (sp, sm) = (s_den(kp), s_den(km));
    let rho = |k: f64, s: Complex64| (k * k - k0 * k0) * (a * k).sin() / s;
    let (rho_p, rho_m) = (rho(kp, sp), rho(km, sm));
    let e0 = Complex64::from_polar(1.0, -a * k0);
    let tau = |k: f64, s: Complex64| 2.0 * i * k * k0 * e0 / s;
    let (tau_p, tau_m) = (tau(kp, sp), tau(km, sm));

    // interior prefactors: (forward, backward) for a mode of wavenumber k
    let interior = |k: f64| {
        let e2 = Complex64::from_polar(1.0, 2.0 * a * k);
        let den = -(k + k0).powi(2) + (k - k0).powi(2) * e2;
        (2.0 * k0 * (k + k0) / den, 2.0 * (k - k0) * k0 * e2 / den)
    };
    let (f3, f4) = interior(kp);
    let (f5, f6) = interior(km);
    let (f5, f6) = (-f5, -f6);

    let (wp, wm, wx) = (w.w_plus, w.w_minus, w.w_cross);
    let plus_dir = SymplecticPair::new(wm.into(), wx);
    let minus_dir = SymplecticPair::new(wp.into(), wx);
    let interior_modes = [
        plus_dir.mul_complex(f3),
        plus_dir.mul_complex(f4),
        minus_dir.mul_complex(f5),
        minus_dir.mul_complex(f6),
    ];

    let c = [
        rho_p * wm - rho_m * wp,
        (rho_p - rho_m) * wx,
        interior_modes[0].alpha,
        interior_modes[1].alpha,
        interior_modes[2].alpha,
        interior_modes[3].alpha,
        tau_m * wp - tau_p * wm,
        (tau_m - tau_p) * wx,
    ];
    let regime = if spec.theta.sin().abs() <= THETA_EPSILON {
        Regime::ComplexLimit
    } else {
        Regime::Exact
    };
    Ok(ClosedFormAmplitudes {
        amplitudes: Amplitudes {
            c,
            interior: interior_modes,
            dispersion: d,
        },
        regime,
    })
}

/// Leading-order expansion for `θ ≪ 1` and `a, V0 ≪ ω0`.
///
/// No validity check is made; the interior vectors use `R− ≈ w×/w+` and are
/// only meaningful in the expansion's own regime.
pub fn amplitudes_taylor(spec: &BarrierSpec) -> ClosedFormAmplitudes {
    let (a, v0, w0) = (spec.a, spec.v0, spec.omega0);
    let i = Complex64::i();
    let quat = a * spec.theta * v0 * Complex64::from_polar(1.0, -spec.phi);
    let zero = Complex64::new(0.0, 0.0);
    let c5 = Complex64::new(v0 / (2.0 * w0) + 1.0, 0.0);
    let c6 = -v0 / (2.0 * w0) - i * a * v0;
    let c = [
        -i * a * v0,
        quat,
        zero,
        zero,
        c5,
        c6,
        1.0 - i * a * v0,
        quat,
    ];
    let w = spec.mode_ratios();
    let r_minus = if w.w_plus > 0.0 {
        w.w_cross / w.w_plus
    } else {
        zero
    };
    let interior = [
        SymplecticPair::ZERO,
        SymplecticPair::ZERO,
        SymplecticPair::new(c5, c5 * r_minus),
        SymplecticPair::new(c6, c6 * r_minus),
    ];
    ClosedFormAmplitudes {
        amplitudes: Amplitudes {
            c,
            interior,
            dispersion: model::wavenumbers(spec),
        },
        regime: Regime::Taylor,
    }
}

/// `|C8|² / (|C7|² + |C8|²)`: the share of transmitted intensity carried by
/// the `j` component.
pub fn quaternionic_fraction(amps: &Amplitudes) -> Result<f64> {
    let t = amps.transmission();
    let total = t.norm_sqr();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::UndefinedFraction);
    }
    Ok(t.beta.norm_sqr() / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn free_limit() {
        let spec = BarrierSpec::new(1.3, 0.0, 0.9, 1.0, 0.2).unwrap();
        let amps = amplitudes_closed(&spec).unwrap().amplitudes;
        assert!((amps.c[6] - 1.0).norm() < 1e-14);
        for i in [0, 1, 3, 5, 7] {
            assert!(amps.c[i].norm() < 1e-14);
        }
        assert_eq!(quaternionic_fraction(&amps).unwrap(), 0.0);
    }

    #[test]
    fn complex_limit_flags_and_zeros() {
        let spec = BarrierSpec::new(1.0, 0.3, 1.0, 0.0, 0.0).unwrap();
        let cf = amplitudes_closed(&spec).unwrap();
        assert_eq!(cf.regime, Regime::ComplexLimit);
        let amps = cf.amplitudes;
        assert_eq!(amps.c[1], Complex64::new(0.0, 0.0));
        assert_eq!(amps.c[7], Complex64::new(0.0, 0.0));
        assert!((amps.c[0].norm_sqr() + amps.c[6].norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(quaternionic_fraction(&amps).unwrap(), 0.0);
        // k+ waves vanish, k− waves survive as purely complex
        for m in &amps.interior[..2] {
            assert_eq!(m.norm(), 0.0);
        }
        for m in &amps.interior[2..] {
            assert_eq!(m.beta.norm(), 0.0);
            assert!(m.alpha.norm() > 1e-3);
        }
    }

    #[test]
    fn opposite_pole_is_complex_too() {
        let spec = BarrierSpec::new(1.0, 0.3, 1.0, PI, 0.7).unwrap();
        let amps = amplitudes_closed(&spec).unwrap().amplitudes;
        assert!(amps.c[1].norm() < 1e-15 && amps.c[7].norm() < 1e-15);
        assert!((amps.magnitude_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quaternionic_transmission_at_right_angle() {
        let spec = BarrierSpec::new(1.0, 0.3, 1.0, FRAC_PI_2, 0.0).unwrap();
        let amps = amplitudes_closed(&spec).unwrap().amplitudes;
        let f = quaternionic_fraction(&amps).unwrap();
        assert!(f > 1e-3 && f < 1.0);
    }

    #[test]
    fn taylor_free_limit() {
        let spec = BarrierSpec::new(0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let t = amplitudes_taylor(&spec);
        assert_eq!(t.regime, Regime::Taylor);
        assert_eq!(t.amplitudes.c[6], Complex64::new(1.0, 0.0));
        assert_eq!(t.amplitudes.c[7], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn taylor_quaternionic_transmission() {
        let spec = BarrierSpec::new(1e-3, 1e-3, 1.0, 1e-3, FRAC_PI_4).unwrap();
        let taylor = amplitudes_taylor(&spec).amplitudes.c[7];
        let expected = 1e-9 * Complex64::from_polar(1.0, -FRAC_PI_4);
        assert!((taylor - expected).norm() < 1e-24);
        let exact = amplitudes_closed(&spec).unwrap().amplitudes.c[7];
        assert!((exact - taylor).norm() <= 0.05 * taylor.norm());
    }

    #[test]
    fn zero_transmission_fraction_is_an_error() {
        let spec = BarrierSpec::new(1.0, 0.3, 1.0, 0.5, 0.0).unwrap();
        let mut amps = amplitudes_closed(&spec).unwrap().amplitudes;
        amps.c[6] = Complex64::new(0.0, 0.0);
        amps.c[7] = Complex64::new(0.0, 0.0);
        assert_eq!(quaternionic_fraction(&amps), Err(Error::UndefinedFraction));
    }
}
