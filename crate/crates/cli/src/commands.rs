//! Subcommand implementations. Each returns the rendered output so callers
//! decide where it goes.

use std::fmt::Write as _;

use rayon::prelude::*;

use quatkg::closedform::{amplitudes_closed, quaternionic_fraction};
use quatkg::matcher::solve_barrier;
use quatkg::multilayer::{ordering_asymmetry, Segment, StackScattering};
use quatkg::wavefield::{continuity_residuals, sample_field};
use quatkg::{Amplitudes, Complex64};

use crate::config::{OutputFormat, Param, SpecParams, SweepRange, MAX_SWEEPS};
use crate::error::CliError;
use crate::output::{fmt_num, json_document, record_to_json, Cell, Record, Table};

/// Largest number of grid points a sweep may produce.
pub const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub params: SpecParams,
    pub format: OutputFormat,
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub params: SpecParams,
    pub sweeps: Vec<SweepRange>,
    pub format: OutputFormat,
    /// Worker threads; `None` uses one per core.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct FieldOptions {
    pub params: SpecParams,
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub format: OutputFormat,
}

#[derive(Debug, Clone)]
pub struct OrderingOptions {
    pub first: Segment,
    pub second: Segment,
    pub gap: f64,
    pub omega0: f64,
    pub format: OutputFormat,
}

/// Both solutions of one barrier plus the derived diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct SolveReport {
    pub params: SpecParams,
    pub matcher: Amplitudes,
    pub closed: Amplitudes,
    pub max_relative_difference: f64,
    /// `(ψ(0), ∂ψ(0), ψ(a), ∂ψ(a))` jumps of the matcher solution.
    pub continuity: (f64, f64, f64, f64),
    pub quaternionic_fraction: f64,
    pub magnitude_sum: f64,
}

pub fn solve_report(params: &SpecParams) -> Result<SolveReport, CliError> {
    let spec = params.to_spec()?;
    let matcher = solve_barrier(&spec)?.amplitudes;
    let closed = amplitudes_closed(&spec)?.amplitudes;
    Ok(SolveReport {
        params: *params,
        matcher,
        closed,
        max_relative_difference: matcher.relative_difference(&closed),
        continuity: continuity_residuals(&spec, &matcher),
        quaternionic_fraction: quaternionic_fraction(&closed)?,
        magnitude_sum: closed.magnitude_sum(),
    })
}

fn coefficient_table(r: &SolveReport) -> Table {
    let mut t = Table::new([
        "coefficient",
        "matcher_re",
        "matcher_im",
        "closed_re",
        "closed_im",
        "abs_difference",
    ]);
    for i in 0..8 {
        let (m, c) = (r.matcher.c[i], r.closed.c[i]);
        t.push(vec![
            format!("c{}", i + 1).into(),
            m.re.into(),
            m.im.into(),
            c.re.into(),
            c.im.into(),
            (m - c).norm().into(),
        ]);
    }
    t
}

fn solve_summary(r: &SolveReport) -> Record {
    let (p0, d0, pa, da) = r.continuity;
    vec![
        ("max_relative_difference".into(), r.max_relative_difference.into()),
        ("continuity_psi_0".into(), p0.into()),
        ("continuity_dpsi_0".into(), d0.into()),
        ("continuity_psi_a".into(), pa.into()),
        ("continuity_dpsi_a".into(), da.into()),
        ("quaternionic_fraction".into(), r.quaternionic_fraction.into()),
        ("magnitude_sum".into(), r.magnitude_sum.into()),
    ]
}

pub fn cmd_solve(opts: &SolveOptions) -> Result<String, CliError> {
    let r = solve_report(&opts.params)?;
    let table = coefficient_table(&r);
    match opts.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => Ok(json_document(
            &opts.params.record(),
            &table,
            vec![("summary", record_to_json(&solve_summary(&r)))],
        )),
        OutputFormat::Text => Ok(solve_text(&r)),
    }
}

fn complex_str(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", fmt_num(z.re), fmt_num(z.im.abs()))
}

fn solve_text(r: &SolveReport) -> String {
    let p = &r.params;
    let d = r.closed.dispersion;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "barrier: a = {}, v0 = {}, omega0 = {}, theta = {}, phi = {}",
        fmt_num(p.a),
        fmt_num(p.v0),
        fmt_num(p.omega0),
        fmt_num(p.theta),
        fmt_num(p.phi)
    );
    let _ = writeln!(
        s,
        "wavenumbers: k0 = {}, k_plus = {}, k_minus = {}",
        fmt_num(d.k0),
        fmt_num(d.k_plus),
        fmt_num(d.k_minus)
    );
    let _ = writeln!(s);
    for i in 0..8 {
        let _ = writeln!(s, "c{} matcher = {}", i + 1, complex_str(r.matcher.c[i]));
        let _ = writeln!(s, "c{} closed  = {}", i + 1, complex_str(r.closed.c[i]));
    }
    let _ = writeln!(s);
    for (k, v) in solve_summary(r) {
        let _ = writeln!(s, "{k} = {}", v.render());
    }
    s
}

fn grid(sweeps: &[SweepRange]) -> Result<Vec<Vec<f64>>, CliError> {
    if sweeps.is_empty() || sweeps.len() > MAX_SWEEPS {
        return Err(CliError::Invalid(format!(
            "sweep needs 1 to {MAX_SWEEPS} --sweep ranges, got {}",
            sweeps.len()
        )));
    }
    if sweeps.len() == 2 && sweeps[0].param == sweeps[1].param {
        return Err(CliError::Invalid(format!("parameter {} swept twice", sweeps[0].param)));
    }
    let axes: Vec<Vec<f64>> = sweeps
        .iter()
        .map(|s| s.validate().map(|_| s.values()))
        .collect::<Result<_, _>>()?;
    let total = axes.iter().try_fold(1usize, |n, a| n.checked_mul(a.len()));
    if total.is_none_or(|n| n > MAX_GRID_POINTS) {
        return Err(CliError::Invalid(format!("sweep grid exceeds {MAX_GRID_POINTS} points")));
    }
    // first range outermost
    let mut points = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

fn sweep_row(params: &SpecParams, swept: &[Param], values: &[f64]) -> Result<Vec<Cell>, CliError> {
    let mut p = *params;
    for (&param, &v) in swept.iter().zip(values) {
        p.set(param, v);
    }
    let spec = p.to_spec()?;
    let amps = amplitudes_closed(&spec)?.amplitudes;
    let mut row: Vec<Cell> = values.iter().map(|&v| Cell::Num(v)).collect();
    for i in [0, 1, 6, 7] {
        row.push(amps.c[i].norm().into());
    }
    row.push(quaternionic_fraction(&amps)?.into());
    Ok(row)
}

pub fn sweep_table(opts: &SweepOptions) -> Result<Table, CliError> {
    let points = grid(&opts.sweeps)?;
    let swept: Vec<Param> = opts.sweeps.iter().map(|s| s.param).collect();
    let mut columns: Vec<String> = swept.iter().map(|p| p.name().to_string()).collect();
    columns.extend(["abs_c1", "abs_c2", "abs_c7", "abs_c8", "quaternionic_fraction"].map(String::from));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Failure(format!("cannot start worker pool: {e}")))?;
    // indexed collect keeps grid order whatever the completion order
    let rows: Vec<Vec<Cell>> = pool.install(|| {
        points
            .par_iter()
            .map(|v| sweep_row(&opts.params, &swept, v))
            .collect::<Result<_, _>>()
    })?;
    log::debug!("sweep evaluated {} grid points", rows.len());
    Ok(Table { columns, rows })
}

fn sweep_config(opts: &SweepOptions) -> Record {
    let mut rec = opts.params.record();
    for s in &opts.sweeps {
        rec.retain(|(k, _)| k != s.param.name());
    }
    for (i, s) in opts.sweeps.iter().enumerate() {
        rec.push((format!("sweep{}", i + 1), Cell::Text(s.param.name().into())));
        rec.push((format!("sweep{}_start", i + 1), s.start.into()));
        rec.push((format!("sweep{}_stop", i + 1), s.stop.into()));
        rec.push((format!("sweep{}_step", i + 1), s.step.into()));
    }
    rec
}

fn render_table(table: &Table, config: &Record, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => Ok(json_document(config, table, Vec::new())),
        OutputFormat::Csv | OutputFormat::Text => table.to_csv(),
    }
}

pub fn cmd_sweep(opts: &SweepOptions) -> Result<String, CliError> {
    let table = sweep_table(opts)?;
    render_table(&table, &sweep_config(opts), opts.format)
}

pub fn field_table(opts: &FieldOptions) -> Result<Table, CliError> {
    let spec = opts.params.to_spec()?;
    let amps = solve_barrier(&spec)?.amplitudes;
    let samples = sample_field(&spec, &amps, opts.x_min, opts.x_max, opts.points)?;
    let mut t = Table::new([
        "x",
        "re_psi_alpha",
        "im_psi_alpha",
        "re_psi_beta",
        "im_psi_beta",
        "abs_psi",
        "region",
    ]);
    for s in samples {
        t.push(vec![
            s.x.into(),
            s.psi.alpha.re.into(),
            s.psi.alpha.im.into(),
            s.psi.beta.re.into(),
            s.psi.beta.im.into(),
            s.psi.norm().into(),
            s.region.as_str().into(),
        ]);
    }
    Ok(t)
}

pub fn cmd_field(opts: &FieldOptions) -> Result<String, CliError> {
    let table = field_table(opts)?;
    let mut config = opts.params.record();
    config.push(("xmin".into(), opts.x_min.into()));
    config.push(("xmax".into(), opts.x_max.into()));
    config.push(("points".into(), Cell::Int(opts.points as u64)));
    render_table(&table, &config, opts.format)
}

fn segment_record(prefix: &str, s: &Segment) -> Record {
    vec![
        (format!("{prefix}_length"), s.length.into()),
        (format!("{prefix}_v0"), s.v0.into()),
        (format!("{prefix}_theta"), s.theta.into()),
        (format!("{prefix}_phi"), s.phi.into()),
    ]
}

pub fn cmd_ordering(opts: &OrderingOptions) -> Result<String, CliError> {
    let r = ordering_asymmetry(&opts.first, &opts.second, opts.gap, opts.omega0)?;
    let mut table = Table::new([
        "ordering",
        "re_t_alpha",
        "im_t_alpha",
        "re_t_beta",
        "im_t_beta",
        "transmission_probability",
        "d_prob",
        "d_amp",
    ]);
    let row = |name: &str, s: &StackScattering| -> Vec<Cell> {
        let t = s.transmission;
        vec![
            name.into(),
            t.alpha.re.into(),
            t.alpha.im.into(),
            t.beta.re.into(),
            t.beta.im.into(),
            t.norm_sqr().into(),
            r.d_prob.into(),
            r.d_amp.into(),
        ]
    };
    table.push(row("a_gap_b", &r.forward));
    table.push(row("b_gap_a", &r.reverse));

    let mut config = segment_record("a", &opts.first);
    config.extend(segment_record("b", &opts.second));
    config.push(("gap".into(), opts.gap.into()));
    config.push(("omega0".into(), opts.omega0.into()));

    match opts.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => {
            let summary: Record = vec![("d_prob".into(), r.d_prob.into()), ("d_amp".into(), r.d_amp.into())];
            Ok(json_document(&config, &table, vec![("summary", record_to_json(&summary))]))
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for (name, sc) in [("a_gap_b", &r.forward), ("b_gap_a", &r.reverse)] {
                let t = sc.transmission;
                let _ = writeln!(s, "{name}: t_alpha = {}", complex_str(t.alpha));
                let _ = writeln!(s, "{name}: t_beta  = {}", complex_str(t.beta));
                let _ = writeln!(s, "{name}: |t|^2   = {}", fmt_num(t.norm_sqr()));
            }
            let _ = writeln!(s, "d_prob = {}", fmt_num(r.d_prob));
            let _ = writeln!(s, "d_amp = {}", fmt_num(r.d_amp));
            Ok(s)
        }
    }
}
