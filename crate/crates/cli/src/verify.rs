//! The acceptance suite behind `quatkg verify`.
//!
//! Every check compares a solver path with an independent evaluation at a
//! fixed tolerance. Random specs come from seeded ChaCha streams, so a run is
//! reproducible.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatkg::closedform::{amplitudes_closed, amplitudes_taylor};
use quatkg::matcher::{build_system, relative_matching_residual, solve_barrier, SystemForm};
use quatkg::multilayer::{ordering_asymmetry, segment_transfer, stack_scatter, LayerStack, Segment};
use quatkg::wavefield::continuity_residuals;
use quatkg::{BarrierSpec, Complex64};

use crate::commands::{cmd_sweep, SweepOptions};
use crate::config::{OutputFormat, SpecParams};
use crate::error::CliError;

/// Recorded transmission asymmetry of the orthogonal-direction pair.
pub const ORTHOGONAL_FIXTURE_D_PROB: f64 = 4.974_240_381_301_842e-2;
pub const ORTHOGONAL_FIXTURE_D_AMP: f64 = 5.715_361_187_449_248e-2;

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Smaller samples; the whole suite runs in a few seconds.
    pub quick: bool,
    /// Added to the matcher's C7 in the equivalence check. Test hook.
    pub perturbation: f64,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type Outcome = Result<(bool, String), CliError>;

fn random_spec(rng: &mut ChaCha8Rng) -> BarrierSpec {
    let omega0 = rng.gen_range(0.5..=2.0);
    let v0 = omega0 * rng.gen_range(0.001..=0.9);
    BarrierSpec {
        a: rng.gen_range(0.001..=20.0),
        v0,
        omega0,
        theta: rng.gen_range(0.0..=PI),
        phi: rng.gen_range(0.0..TAU),
    }
}

fn max_norm(zs: &[Complex64]) -> f64 {
    zs.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn oracle_equivalence(opts: &VerifyOptions) -> Outcome {
    let n = if opts.quick { 200 } else { 1000 };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let spec = random_spec(&mut rng);
        let mut lu = solve_barrier(&spec)?.amplitudes;
        lu.c[6] += opts.perturbation;
        let cf = amplitudes_closed(&spec)?.amplitudes;
        worst = worst.max(lu.relative_difference(&cf));
    }
    let t = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-9 && t < 5.0,
        format!("{n} specs, max rel diff {worst:.3e} (<= 1e-9), {t:.2}s (< 5s)"),
    ))
}

fn back_substitution(opts: &VerifyOptions) -> Outcome {
    let n = if opts.quick { 100 } else { 500 };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_match, mut worst_cont) = (0.0_f64, 0.0_f64);
    for _ in 0..n {
        let spec = random_spec(&mut rng);
        let amps = solve_barrier(&spec)?.amplitudes;
        worst_match = worst_match.max(relative_matching_residual(&spec, &amps));
        let (a, b, c, d) = continuity_residuals(&spec, &amps);
        worst_cont = worst_cont.max(a.max(b).max(c).max(d));
    }
    Ok((
        worst_match <= 1e-10 && worst_cont <= 1e-10,
        format!("{n} specs, matching {worst_match:.3e}, continuity {worst_cont:.3e} (<= 1e-10)"),
    ))
}

fn complex_limit(_: &VerifyOptions) -> Outcome {
    let zero = Complex64::new(0.0, 0.0);
    let mut worst = 0.0_f64;
    let mut exact_zero = true;
    for i in 0..20 {
        for j in 0..20 {
            let a = 0.1 + 0.5 * i as f64;
            let v0 = 0.01 + 0.045 * j as f64;
            let amps = solve_barrier(&BarrierSpec::new(a, v0, 1.0, 0.0, 0.0)?)?.amplitudes;
            exact_zero &= amps.c[1] == zero && amps.c[7] == zero;
            worst = worst.max((amps.c[0].norm_sqr() + amps.c[6].norm_sqr() - 1.0).abs());
        }
    }
    Ok((
        exact_zero && worst <= 1e-12,
        format!("20x20 grid, c2 = c8 = 0: {exact_zero}, max | |c1|^2+|c7|^2-1 | {worst:.3e} (<= 1e-12)"),
    ))
}

fn taylor_regime(_: &VerifyOptions) -> Outcome {
    let phi = 0.7;
    let errors = |s: f64| -> Result<(Vec<f64>, Vec<f64>), CliError> {
        let spec = BarrierSpec::new(s, s, 1.0, s, phi)?;
        let exact = amplitudes_closed(&spec)?.amplitudes.c;
        let series = amplitudes_taylor(&spec).amplitudes.c;
        let scale = max_norm(&series);
        let abs: Vec<f64> = exact.iter().zip(&series).map(|(e, t)| (e - t).norm()).collect();
        // zero expansion terms are judged against the expansion's scale
        let rel = abs
            .iter()
            .zip(&series)
            .map(|(e, t)| e / if t.norm() > 0.0 { t.norm() } else { scale })
            .collect();
        Ok((abs, rel))
    };
    let (e1, rel) = errors(1e-3)?;
    let (e2, _) = errors(5e-4)?;
    let worst_rel = rel.iter().fold(0.0_f64, |m, &r| m.max(r));
    let worst_ratio = e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| if *b > 0.0 { a / b } else { f64::INFINITY })
        .fold(f64::INFINITY, f64::min);
    Ok((
        worst_rel <= 0.05 && worst_ratio >= 3.0,
        format!("max rel err {worst_rel:.3e} (<= 5%), min halving ratio {worst_ratio:.2} (>= 3)"),
    ))
}

fn no_damping(_: &VerifyOptions) -> Outcome {
    let start = Instant::now();
    let c8 = |a: f64| -> Result<f64, CliError> {
        let spec = BarrierSpec::new(a, 0.3, 1.0, FRAC_PI_2, 0.0)?;
        Ok(amplitudes_closed(&spec)?.amplitudes.c[7].norm())
    };
    let (mut near, mut far) = (0.0_f64, 0.0_f64);
    for i in 1..=5000 {
        near = near.max(c8(0.01 * i as f64)?);
    }
    for i in 5000..=10000 {
        far = far.max(c8(0.01 * i as f64)?);
    }
    let t = start.elapsed().as_secs_f64();
    Ok((
        far >= 0.5 * near && t < 2.0,
        format!("max |c8| on (0,50] {near:.6}, on [50,100] {far:.6}, {t:.2}s (< 2s)"),
    ))
}

fn transfer_oracle(opts: &VerifyOptions) -> Outcome {
    let n = if opts.quick { 50 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut single, mut bisect, mut insert) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..n {
        let spec = random_spec(&mut rng);
        let seg = Segment::new(spec.a, spec.v0, spec.theta, spec.phi)?;
        let stack = stack_scatter(&LayerStack::new(vec![seg], spec.omega0)?)?;
        let amps = solve_barrier(&spec)?.amplitudes;
        single = single
            .max((stack.reflection - amps.reflection()).max_abs())
            .max((stack.transmission - amps.transmission()).max_abs());

        let half = Segment { length: 0.5 * spec.a, ..seg };
        let whole = segment_transfer(&seg, spec.omega0)?;
        let halves = segment_transfer(&half, spec.omega0)?;
        let scale = whole.0.iter().flatten().fold(1.0_f64, |m, z| m.max(z.norm()));
        bisect = bisect.max((halves * halves).max_abs_diff(&whole) / scale);

        let other = Segment::new(rng.gen_range(0.1..5.0), 0.25 * spec.omega0, 1.1, 0.4)?;
        let base = stack_scatter(&LayerStack::new(vec![seg, other], spec.omega0)?)?;
        let gapped = stack_scatter(&LayerStack::new(vec![seg, Segment::gap(0.0)?, other], spec.omega0)?)?;
        insert = insert
            .max((base.reflection - gapped.reflection).max_abs())
            .max((base.transmission - gapped.transmission).max_abs());
    }
    Ok((
        single <= 1e-8 && bisect <= 1e-11 && insert <= 1e-13,
        format!(
            "{n} specs, single {single:.3e} (<= 1e-8), bisection {bisect:.3e} (<= 1e-11), zero gap {insert:.3e} (<= 1e-13)"
        ),
    ))
}

fn ordering_sanity(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut identical = 0.0_f64;
    let mut complex = 0.0_f64;
    for _ in 0..30 {
        let seg = Segment::new(rng.gen_range(0.1..5.0), rng.gen_range(0.0..0.9), rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU))?;
        let r = ordering_asymmetry(&seg, &seg, rng.gen_range(0.0..4.0), 1.0)?;
        identical = identical.max(r.d_prob).max(r.d_amp);

        let a = Segment::new(rng.gen_range(0.1..5.0), rng.gen_range(0.0..0.9), 0.0, rng.gen_range(0.0..TAU))?;
        let b = Segment::new(rng.gen_range(0.1..5.0), rng.gen_range(0.0..0.9), 0.0, rng.gen_range(0.0..TAU))?;
        complex = complex.max(ordering_asymmetry(&a, &b, rng.gen_range(0.0..4.0), 1.0)?.d_prob);
    }
    let a = Segment::new(1.0, 0.3, FRAC_PI_2, 0.0)?;
    let b = Segment::new(1.0, 0.3, FRAC_PI_2, FRAC_PI_2)?;
    let fixture = ordering_asymmetry(&a, &b, 2.0, 1.0)?;
    let drift = (fixture.d_prob - ORTHOGONAL_FIXTURE_D_PROB)
        .abs()
        .max((fixture.d_amp - ORTHOGONAL_FIXTURE_D_AMP).abs());
    Ok((
        identical <= 1e-13 && complex <= 1e-12 && drift <= 1e-10,
        format!(
            "identical {identical:.3e} (<= 1e-13), complex d_prob {complex:.3e} (<= 1e-12), fixture drift {drift:.3e} (<= 1e-10)"
        ),
    ))
}

/// The printed matching matrix, entry by entry, from `(1, R±)` mode vectors.
fn printed_matrix(spec: &BarrierSpec) -> [[Complex64; 8]; 8] {
    let (st, ct) = spec.theta.sin_cos();
    let (n1, n2, n3) = (ct, st * spec.phi.cos(), st * spec.phi.sin());
    let den = Complex64::new(n3, -n2);
    let rp = -(n1 + 1.0) / den;
    let rm = -(n1 - 1.0) / den;
    let k0 = spec.omega0;
    let kp = (spec.omega0 + spec.v0).abs();
    let km = (spec.omega0 - spec.v0).abs();
    let e = |k: f64| Complex64::from_polar(1.0, spec.a * k);
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

fn matrix_fidelity(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0_f64;
    let mut checked = 0;
    while checked < 100 {
        let spec = random_spec(&mut rng);
        if spec.theta.sin() <= 0.1 {
            continue;
        }
        let sys = build_system(&spec, SystemForm::RawRatio)?;
        for (i, row) in printed_matrix(&spec).iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                worst = worst.max((sys.matrix[(i, j)] - want).norm());
            }
        }
        checked += 1;
    }
    Ok((worst <= 1e-13, format!("100 specs, max entry diff {worst:.3e} (<= 1e-13)")))
}

fn determinism(opts: &VerifyOptions) -> Outcome {
    let step = if opts.quick { PI / 40.0 } else { PI / 200.0 };
    let sweep = SweepOptions {
        params: SpecParams::default(),
        sweeps: vec![
            format!("theta:0:{PI}:{step}").parse()?,
            "a:0.5:10:0.5".parse()?,
        ],
        format: OutputFormat::Csv,
        threads: Some(8),
    };
    let first = cmd_sweep(&sweep)?;
    let second = cmd_sweep(&sweep)?;
    let rows = first.lines().count().saturating_sub(1);
    Ok((
        first == second,
        format!("{rows} rows, 8 threads, outputs identical: {}", first == second),
    ))
}

type Check = fn(&VerifyOptions) -> Outcome;

const CHECKS: [(&str, Check); 9] = [
    ("closed form vs linear solve", oracle_equivalence),
    ("back-substitution and continuity", back_substitution),
    ("complex limit", complex_limit),
    ("small-parameter expansion", taylor_regime),
    ("no damping of quaternionic transmission", no_damping),
    ("transfer-matrix oracle", transfer_oracle),
    ("ordering sanity", ordering_sanity),
    ("matching matrix fidelity", matrix_fidelity),
    ("sweep determinism", determinism),
];

pub fn run_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let start = Instant::now();
            let (passed, detail) = match check(opts) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            let elapsed = start.elapsed();
            log::info!("check {} ({name}) finished in {elapsed:?}", i + 1);
            CheckResult {
                id: i + 1,
                name,
                passed,
                detail,
                elapsed,
            }
        })
        .collect()
}

pub fn render(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        let _ = writeln!(
            s,
            "[{}] {}. {}: {} ({:.2}s)",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail,
            r.elapsed.as_secs_f64()
        );
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "{passed}/{} checks passed", results.len());
    s
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}
