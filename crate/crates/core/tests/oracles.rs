//! Cross-checks between independent routes to the same quantities.

use std::f64::consts::{FRAC_PI_2, PI};

use quatkg::closedform::{amplitudes_closed, amplitudes_taylor};
use quatkg::matcher::{build_system, relative_matching_residual, solve, solve_barrier, SystemForm};
use quatkg::model::{self, dispersion_residual, mode_matrix, Region};
use quatkg::multilayer::{ordering_asymmetry, segment_transfer, stack_scatter, LayerStack, Segment};
use quatkg::quaternion::left_n_right_i;
use quatkg::wavefield::{continuity_residuals, dpsi_in, psi_in};
use quatkg::{BarrierSpec, Complex64, SymplecticPair, UnitImaginaryDirection};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(rng: &mut ChaCha8Rng, theta_lo: f64, theta_hi: f64) -> BarrierSpec {
    let omega0 = rng.gen_range(0.5..=2.0);
    let v0 = omega0 * rng.gen_range(0.01..=0.9);
    BarrierSpec::new(
        rng.gen_range(0.01..=20.0),
        v0,
        omega0,
        rng.gen_range(theta_lo..=theta_hi),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
    .unwrap()
}

/// Literal transcription of the printed 8×8 matching matrix.
fn printed_matrix(spec: &BarrierSpec) -> [[Complex64; 8]; 8] {
    let n1 = spec.theta.cos();
    let n2 = spec.theta.sin() * spec.phi.cos();
    let n3 = spec.theta.sin() * spec.phi.sin();
    let den = Complex64::new(n3, -n2);
    let rp = -(n1 + 1.0) / den;
    let rm = -(n1 - 1.0) / den;
    let k0 = spec.omega0;
    let kp = (spec.omega0 + spec.v0).abs();
    let km = (spec.omega0 - spec.v0).abs();
    let a = spec.a;
    let e = |k: f64| (Complex64::i() * a * k).exp();
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    [
        [o, z, -o, -o, -o, -o, z, z],
        [z, o, -rp, -rp, -rm, -rm, z, z],
        [r(-k0), z, r(-kp), r(kp), r(-km), r(km), z, z],
        [z, r(-k0), -kp * rp, kp * rp, -km * rm, km * rm, z, z],
        [z, z, e(kp), e(-kp), e(km), e(-km), -e(k0), z],
        [z, z, e(kp) * rp, e(-kp) * rp, e(km) * rm, e(-km) * rm, z, -e(k0)],
        [z, z, e(kp) * kp, -e(-kp) * kp, e(km) * km, -e(-km) * km, -e(k0) * k0, z],
        [z, z, e(kp) * kp * rp, -e(-kp) * kp * rp, e(km) * km * rm, -e(-km) * km * rm, z, -e(k0) * k0],
    ]
}

#[test]
fn raw_system_matches_printed_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 100 {
        let spec = random_spec(&mut rng, 0.0, PI);
        if spec.theta.sin() <= 0.1 {
            continue;
        }
        let sys = build_system(&spec, SystemForm::RawRatio).unwrap();
        let printed = printed_matrix(&spec);
        for (i, row) in printed.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                let got = sys.matrix[(i, j)];
                assert!((got - want).norm() <= 1e-13, "entry ({i},{j}): {got} vs {want}");
            }
        }
        checked += 1;
    }
}

#[test]
fn matcher_agrees_with_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let spec = random_spec(&mut rng, 0.0, PI);
        let lu = solve_barrier(&spec).unwrap().amplitudes;
        let cf = amplitudes_closed(&spec).unwrap().amplitudes;
        let diff = lu.relative_difference(&cf);
        assert!(diff <= 1e-9, "{spec:?}: relative difference {diff:e}");
        for (m, n) in lu.interior.iter().zip(&cf.interior) {
            assert!((*m - *n).max_abs() <= 1e-9 * cf.max_abs().max(1.0));
        }
    }
}

#[test]
fn reference_spec_matches_closed_form() {
    let spec = BarrierSpec::new(1.0, 0.3, 1.0, FRAC_PI_2, 0.0).unwrap();
    let lu = solve(&build_system(&spec, SystemForm::RawRatio).unwrap()).unwrap();
    let cf = amplitudes_closed(&spec).unwrap();
    assert!(lu.amplitudes.relative_difference(&cf.amplitudes) <= 1e-10);
}

#[test]
fn solved_amplitudes_satisfy_matching_and_continuity() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..300 {
        let spec = random_spec(&mut rng, 0.0, PI);
        for amps in [
            solve_barrier(&spec).unwrap().amplitudes,
            amplitudes_closed(&spec).unwrap().amplitudes,
        ] {
            assert!(relative_matching_residual(&spec, &amps) <= 1e-10);
            let (r1, r2, r3, r4) = continuity_residuals(&spec, &amps);
            assert!(r1.max(r2).max(r3).max(r4) <= 1e-10, "{spec:?}");
        }
    }
}

#[test]
fn complex_limit_unitarity_grid() {
    for i in 0..20 {
        for j in 0..20 {
            let a = 0.05 + 0.5 * i as f64;
            let v0 = 0.02 + 0.045 * j as f64;
            let spec = BarrierSpec::new(a, v0, 1.0, 0.0, 0.0).unwrap();
            let amps = solve_barrier(&spec).unwrap().amplitudes;
            assert_eq!(amps.c[1], Complex64::new(0.0, 0.0));
            assert_eq!(amps.c[7], Complex64::new(0.0, 0.0));
            let sum = amps.c[0].norm_sqr() + amps.c[6].norm_sqr();
            assert!((sum - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn theta_continuity_through_complex_axis() {
    for &a in &[0.5, 2.0, 7.5] {
        for &v0 in &[0.1, 0.4, 0.8] {
            for &omega0 in &[0.7, 1.0, 1.6] {
                let at = |theta| solve_barrier(&BarrierSpec::new(a, v0 * omega0, omega0, theta, 0.6).unwrap()).unwrap().amplitudes;
                let (zero, near) = (at(0.0), at(1e-4));
                let diff = zero.c.iter().zip(&near.c).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
                assert!(diff <= 1e-3);
            }
        }
    }
}

#[test]
fn taylor_block_and_second_order_ladder() {
    let phi = 0.9;
    let errors = |s: f64| {
        let spec = BarrierSpec::new(s, s, 1.0, s, phi).unwrap();
        let exact = amplitudes_closed(&spec).unwrap().amplitudes.c;
        let taylor = amplitudes_taylor(&spec).amplitudes.c;
        let scale = taylor.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let abs: Vec<f64> = exact.iter().zip(&taylor).map(|(e, t)| (e - t).norm()).collect();
        let rel: Vec<f64> = abs
            .iter()
            .zip(&taylor)
            .map(|(e, t)| if t.norm() > 0.0 { e / t.norm() } else { e / scale })
            .collect();
        (abs, rel)
    };
    let (e1, rel) = errors(1e-3);
    assert!(rel.iter().all(|&r| r <= 0.05), "{rel:?}");
    let (e2, _) = errors(5e-4);
    let (e3, _) = errors(2.5e-4);
    for i in 0..8 {
        assert!(e1[i] >= 3.0 * e2[i] && e2[i] >= 3.0 * e3[i], "C{}: {} {} {}", i + 1, e1[i], e2[i], e3[i]);
    }
}

#[test]
fn quaternionic_transmission_does_not_decay() {
    let c8 = |a: f64| {
        let spec = BarrierSpec::new(a, 0.3, 1.0, FRAC_PI_2, 0.0).unwrap();
        amplitudes_closed(&spec).unwrap().amplitudes.c[7].norm()
    };
    let near = (1..=5000).map(|i| c8(0.01 * i as f64)).fold(0.0, f64::max);
    let far = (5000..=10000).map(|i| c8(0.01 * i as f64)).fold(0.0, f64::max);
    assert!(far >= 0.5 * near, "near {near}, far {far}");
}

#[test]
fn interior_modes_solve_their_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let spec = random_spec(&mut rng, 0.05, PI - 0.05);
        let d = spec.wavenumbers();
        let (rp, rm) = spec.mode_ratios().raw().unwrap();
        let one = Complex64::new(1.0, 0.0);
        let scale = spec.omega0.powi(2) + spec.v0.powi(2);
        let si = |k: f64, r| dispersion_residual(k, &spec, Region::Barrier, SymplecticPair::new(one, r));
        assert!(si(d.k_plus, rp) <= 1e-12 * scale * (1.0 + rp.norm()));
        assert!(si(d.k_minus, rm) <= 1e-12 * scale * (1.0 + rm.norm()));
        for k in [d.k_plus, d.k_minus] {
            let m = mode_matrix(k, &spec, Region::Barrier);
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let s = (spec.omega0.powi(2) + spec.v0.powi(2) + k * k).powi(2);
            assert!(det.norm() <= 1e-10 * s);
        }
    }
}

/// The interior equation equals `(ω0² + V0² − k²)C − 2ω0V0 n′Ci = 0` for the
/// reflected direction `n′ = (−n1, n2, n3)`, evaluated by Hamilton products.
#[test]
fn interior_equation_against_hamilton_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let spec = random_spec(&mut rng, 0.0, PI);
        let n = spec.direction();
        let reflected = UnitImaginaryDirection::new(-n.n1(), n.n2(), n.n3()).unwrap();
        let c = SymplecticPair::new(
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        let k = rng.gen_range(0.0..3.0);
        let m = mode_matrix(k, &spec, Region::Barrier);
        let direct = SymplecticPair::new(
            m[0][0] * c.alpha + m[0][1] * c.beta,
            m[1][0] * c.alpha + m[1][1] * c.beta,
        );
        let ncj = left_n_right_i(reflected, c);
        let diag = spec.omega0.powi(2) + spec.v0.powi(2) - k * k;
        let route = c.scale(diag) - ncj.scale(2.0 * spec.omega0 * spec.v0);
        assert!((direct - route).max_abs() <= 1e-12 * (1.0 + diag.abs()) * c.norm().max(1.0));
    }
}

#[test]
fn derivative_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let spec = BarrierSpec::new(3.0, 0.35, 1.1, 1.3, 0.4).unwrap();
    let amps = solve_barrier(&spec).unwrap().amplitudes;
    let h = 1e-6;
    for _ in 0..100 {
        let x = rng.gen_range(-4.0..7.0);
        let region = Region::of(x, spec.a);
        let fd = (psi_in(region, x + h, &amps) - psi_in(region, x - h, &amps)).scale(0.5 / h);
        let exact = dpsi_in(region, x, &amps);
        assert!((fd - exact).max_abs() <= 1e-6 * exact.max_abs().max(1e-3));
    }
}

#[test]
fn single_segment_stack_matches_matcher() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..200 {
        let spec = random_spec(&mut rng, 0.0, PI);
        let seg = Segment::new(spec.a, spec.v0, spec.theta, spec.phi).unwrap();
        let out = stack_scatter(&LayerStack::new(vec![seg], spec.omega0).unwrap()).unwrap();
        let amps = solve_barrier(&spec).unwrap().amplitudes;
        assert!((out.reflection - amps.reflection()).max_abs() <= 1e-8);
        assert!((out.transmission - amps.transmission()).max_abs() <= 1e-8);
    }
    // fixed reference barrier
    let seg = Segment::new(1.0, 0.3, FRAC_PI_2, 0.0).unwrap();
    let out = stack_scatter(&LayerStack::new(vec![seg], 1.0).unwrap()).unwrap();
    let amps = solve_barrier(&BarrierSpec::new(1.0, 0.3, 1.0, FRAC_PI_2, 0.0).unwrap()).unwrap();
    assert!((out.transmission - amps.transmission()).max_abs() <= 1e-8);
}

#[test]
fn bisection_and_gap_insertion() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let spec = random_spec(&mut rng, 0.0, PI);
        let whole = Segment::new(spec.a, spec.v0, spec.theta, spec.phi).unwrap();
        let half = Segment { length: 0.5 * spec.a, ..whole };
        let t = segment_transfer(&whole, spec.omega0).unwrap();
        let th = segment_transfer(&half, spec.omega0).unwrap();
        let scale = t.0.iter().flatten().fold(1.0f64, |m, z| m.max(z.norm()));
        assert!((th * th).max_abs_diff(&t) <= 1e-11 * scale);

        let other = Segment::new(1.3, 0.2 * spec.omega0, 0.7, 1.1).unwrap();
        let base = LayerStack::new(vec![whole, other], spec.omega0).unwrap();
        let zero = Segment::gap(0.0).unwrap();
        let reference = stack_scatter(&base).unwrap();
        for layers in [vec![zero, whole, other], vec![whole, zero, other], vec![whole, other, zero]] {
            let out = stack_scatter(&LayerStack::new(layers, spec.omega0).unwrap()).unwrap();
            assert!((out.transmission - reference.transmission).max_abs() <= 1e-13);
            assert!((out.reflection - reference.reflection).max_abs() <= 1e-13);
        }
    }
}

#[test]
fn complex_sector_ordering_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let a = Segment::new(rng.gen_range(0.1..5.0), rng.gen_range(0.0..0.9), 0.0, rng.gen_range(0.0..6.0)).unwrap();
        let b = Segment::new(rng.gen_range(0.1..5.0), rng.gen_range(0.0..0.9), 0.0, rng.gen_range(0.0..6.0)).unwrap();
        let r = ordering_asymmetry(&a, &b, rng.gen_range(0.0..4.0), 1.0).unwrap();
        assert!(r.d_prob <= 1e-12, "{r:?}");
    }
}

#[test]
fn complex_sector_ordering_matches_direct_two_barrier_solve() {
    // direct scalar (α-channel) transfer with the complex-limit wavenumber k− = ω0 − V0
    let scalar = |layers: &[(f64, f64)], k0: f64| {
        let mut m = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
        let mut length = 0.0;
        for &(l, v0) in layers {
            let k = (k0 - v0).abs();
            let (s, c) = (k * l).sin_cos();
            let t = [[Complex64::new(c, 0.0), Complex64::new(s / k, 0.0)], [Complex64::new(-k * s, 0.0), Complex64::new(c, 0.0)]];
            let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = t[i][0] * m[0][j] + t[i][1] * m[1][j];
                }
            }
            m = out;
            length += l;
        }
        // ψ(0) = 1 + r, ψ'(0) = ik0(1 − r); ψ(L) = t e^{ik0L}, ψ'(L) = ik0 t e^{ik0L}
        let ik = Complex64::new(0.0, k0);
        let e = Complex64::from_polar(1.0, k0 * length);
        // unknowns r, t from two linear equations
        let a11 = m[0][0] - m[0][1] * ik;
        let a21 = m[1][0] - m[1][1] * ik;
        let b1 = -(m[0][0] + m[0][1] * ik);
        let b2 = -(m[1][0] + m[1][1] * ik);
        let (a12, a22) = (-e, -e * ik);
        let det = a11 * a22 - a12 * a21;
        (a11 * b2 - a21 * b1) / det
    };
    let (la, va, lb, vb, gap) = (1.2, 0.25, 0.7, 0.6, 1.5);
    let a = Segment::new(la, va, 0.0, 0.0).unwrap();
    let b = Segment::new(lb, vb, 0.0, 0.0).unwrap();
    let r = ordering_asymmetry(&a, &b, gap, 1.0).unwrap();
    let t_ab = scalar(&[(la, va), (gap, 0.0), (lb, vb)], 1.0);
    let t_ba = scalar(&[(lb, vb), (gap, 0.0), (la, va)], 1.0);
    assert!((r.forward.transmission.alpha - t_ab).norm() <= 1e-12);
    assert!((r.reverse.transmission.alpha - t_ba).norm() <= 1e-12);
    assert!((t_ab.norm_sqr() - t_ba.norm_sqr()).abs() <= 1e-12);
}

#[test]
fn orthogonal_direction_ordering_fixture() {
    let a = Segment::new(1.0, 0.3, FRAC_PI_2, 0.0).unwrap();
    let b = Segment::new(1.0, 0.3, FRAC_PI_2, FRAC_PI_2).unwrap();
    let r = ordering_asymmetry(&a, &b, 2.0, 1.0).unwrap();
    assert!((r.d_prob - 4.974_240_381_301_842e-2).abs() <= 1e-10);
    assert!((r.d_amp - 5.715_361_187_449_248e-2).abs() <= 1e-10);
}

#[test]
fn raw_ratios_refused_near_axis() {
    let spec = BarrierSpec::new(1.0, 0.3, 1.0, 1e-12, 0.0).unwrap();
    assert!(build_system(&spec, SystemForm::RawRatio).is_err());
    assert!(model::mode_ratios(1e-12, 0.0).r_minus().is_err());
}
