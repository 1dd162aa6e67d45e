//! Stationary field `ψ(x)` and `∂ₓψ(x)` of a solved single barrier.
//!
//! The time factor `e^{−iω0t}` is left out throughout.

use num_complex::Complex64;

use crate::amplitudes::Amplitudes;
use crate::error::{Error, Result};
use crate::model::{BarrierSpec, Region};
use crate::quaternion::SymplecticPair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub x: f64,
    pub psi: SymplecticPair,
    pub dpsi: SymplecticPair,
    pub region: Region,
}

fn plane(k: f64, x: f64) -> Complex64 {
    Complex64::from_polar(1.0, k * x)
}

/// `ψ` evaluated with the expression of `region`, whatever side of the
/// boundaries `x` lies on.
pub fn psi_in(region: Region, x: f64, amps: &Amplitudes) -> SymplecticPair {
    let d = &amps.dispersion;
    let c = &amps.c;
    match region {
        Region::Left => {
            let (fwd, back) = (plane(d.k0, x), plane(-d.k0, x));
            SymplecticPair::new(fwd + c[0] * back, c[1] * back)
        }
        Region::Barrier => {
            let [p, q, r, s] = amps.interior;
            p.mul_complex(plane(d.k_plus, x))
                + q.mul_complex(plane(-d.k_plus, x))
                + r.mul_complex(plane(d.k_minus, x))
                + s.mul_complex(plane(-d.k_minus, x))
        }
        Region::Right => SymplecticPair::new(c[6], c[7]).mul_complex(plane(d.k0, x)),
    }
}

pub fn dpsi_in(region: Region, x: f64, amps: &Amplitudes) -> SymplecticPair {
    let d = &amps.dispersion;
    let c = &amps.c;
    let i = Complex64::i();
    match region {
        Region::Left => {
            let fwd = plane(d.k0, x) * i * d.k0;
            let back = plane(-d.k0, x) * i * d.k0;
            SymplecticPair::new(fwd - c[0] * back, -c[1] * back)
        }
        Region::Barrier => {
            let [p, q, r, s] = amps.interior;
            let (kp, km) = (d.k_plus, d.k_minus);
            p.mul_complex(plane(kp, x) * i * kp) - q.mul_complex(plane(-kp, x) * i * kp)
                + r.mul_complex(plane(km, x) * i * km)
                - s.mul_complex(plane(-km, x) * i * km)
        }
        Region::Right => SymplecticPair::new(c[6], c[7]).mul_complex(plane(d.k0, x) * i * d.k0),
    }
}

pub fn psi(x: f64, spec: &BarrierSpec, amps: &Amplitudes) -> SymplecticPair {
    psi_in(Region::of(x, spec.a), x, amps)
}

pub fn dpsi(x: f64, spec: &BarrierSpec, amps: &Amplitudes) -> SymplecticPair {
    dpsi_in(Region::of(x, spec.a), x, amps)
}

/// Max-norm mismatches `(ψ at 0, ψ′ at 0, ψ at a, ψ′ at a)` between the
/// expressions of adjacent regions.
pub fn continuity_residuals(spec: &BarrierSpec, amps: &Amplitudes) -> (f64, f64, f64, f64) {
    let gap = |f: fn(Region, f64, &Amplitudes) -> SymplecticPair, l, r, x| (f(l, x, amps) - f(r, x, amps)).max_abs();
    (
        gap(psi_in, Region::Left, Region::Barrier, 0.0),
        gap(dpsi_in, Region::Left, Region::Barrier, 0.0),
        gap(psi_in, Region::Barrier, Region::Right, spec.a),
        gap(dpsi_in, Region::Barrier, Region::Right, spec.a),
    )
}

/// `n_points` uniform samples on `[x_min, x_max]`, endpoints included.
pub fn sample_field(
    spec: &BarrierSpec,
    amps: &Amplitudes,
    x_min: f64,
    x_max: f64,
    n_points: usize,
) -> Result<Vec<FieldSample>> {
    if n_points < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(Error::InvalidGrid(format!("need finite x_min < x_max, got [{x_min}, {x_max}]")));
    }
    let step = (x_max - x_min) / (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            let x = if i == n_points - 1 { x_max } else { x_min + step * i as f64 };
            let region = Region::of(x, spec.a);
            FieldSample {
                x,
                psi: psi_in(region, x, amps),
                dpsi: dpsi_in(region, x, amps),
                region,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::amplitudes_closed;
    use crate::matcher::solve_barrier;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn free_field_is_a_plane_wave() {
        let spec = BarrierSpec::new(1.0, 0.0, 1.0, 0.8, 0.1).unwrap();
        let amps = amplitudes_closed(&spec).unwrap().amplitudes;
        for &x in &[-3.0, -0.1, 0.0, 0.4, 1.0, 2.5] {
            let p = psi(x, &spec, &amps);
            assert!((p.alpha - Complex64::from_polar(1.0, x)).norm() < 1e-14);
            assert!(p.beta.norm() < 1e-14);
        }
        let (r1, r2, r3, r4) = continuity_residuals(&spec, &amps);
        assert!(r1.max(r2).max(r3).max(r4) <= 1e-14);
    }

    #[test]
    fn solved_field_is_continuous() {
        let spec = BarrierSpec::new(2.2, 0.6, 1.4, 1.1, 0.5).unwrap();
        let amps = solve_barrier(&spec).unwrap().amplitudes;
        let (r1, r2, r3, r4) = continuity_residuals(&spec, &amps);
        let tol = 1e-10 * (1.0 + spec.omega0);
        assert!(r1 <= tol && r2 <= tol && r3 <= tol && r4 <= tol);
    }

    #[test]
    fn perturbed_transmission_breaks_continuity() {
        let spec = BarrierSpec::new(1.0, 0.3, 1.0, FRAC_PI_2, 0.0).unwrap();
        let mut amps = solve_barrier(&spec).unwrap().amplitudes;
        amps.c[6] += 1e-3;
        let (_, _, r3, r4) = continuity_residuals(&spec, &amps);
        assert!(r3 > 1e-4 && r4 > 1e-4);
    }

    #[test]
    fn sampling_grid() {
        let spec = BarrierSpec::new(1.0, 0.3, 1.0, FRAC_PI_2, 0.0).unwrap();
        let amps = solve_barrier(&spec).unwrap().amplitudes;
        let s = sample_field(&spec, &amps, -1.0, 2.0, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].x, s[1].x), (-1.0, 2.0));
        assert_eq!((s[0].region, s[1].region), (Region::Left, Region::Right));
        assert!(s[1].psi.beta.norm() > 1e-3);

        let s = sample_field(&spec, &amps, -1.0, 2.0, 31).unwrap();
        for f in &s {
            assert_eq!(f.region, Region::of(f.x, spec.a));
        }
        assert!(s.iter().any(|f| f.region == Region::Barrier));

        assert!(sample_field(&spec, &amps, -1.0, 2.0, 1).is_err());
        assert!(sample_field(&spec, &amps, 2.0, 2.0, 10).is_err());
        assert!(sample_field(&spec, &amps, f64::NAN, 2.0, 10).is_err());
    }
}
