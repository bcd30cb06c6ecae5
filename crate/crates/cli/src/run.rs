use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wps_core::asymptotics::{
    divisor_asymptotic, fundamental_volume, monte_carlo_volume, theorem_a_breakdown, theorem_b_asymptotic,
    theorem_b_constant, AsymptoticForm, ProductMode, UnitLatticeFrame,
};
use wps_core::enumeration::{count, sweep, CountOptions, CountQuery, Method, OpenConstraint};
use wps_core::number_field::{make_field, FieldData, FieldKind};
use wps_core::weighted_space::{anticanonical_divisor, canonicalize, parse_point, size_value, DivisorClass, Weight};
use wps_core::Error;

use crate::manifest::{Command, RunManifest};

/// Failure of a command, with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Core(Error::Invariant(_)) | CliError::Mismatch(_) => 4,
            CliError::Core(_) | CliError::Input(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(Error::BudgetExceeded { required, limit }) => write!(
                f,
                "budget exceeded: about {required} lattice visits needed, limit is {limit} (raise it with --budget {required})"
            ),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) => write!(f, "{s}"),
            CliError::Mismatch(s) => write!(f, "replay mismatch: {s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormReport {
    pub c: f64,
    pub alpha: String,
    pub beta: u32,
}

impl From<&AsymptoticForm> for FormReport {
    fn from(f: &AsymptoticForm) -> Self {
        FormReport {
            c: f.c,
            alpha: f.alpha.to_string(),
            beta: f.beta,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorConstant {
    pub weight: Vec<u64>,
    pub class_number: u64,
    pub zeta_argument: u64,
    pub zeta: f64,
    pub zeta_error: f64,
    pub disc_factor: f64,
    pub r_over_w: f64,
    pub weight_factor: f64,
    pub constant: f64,
    pub constant_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantReport {
    pub value: f64,
    pub error: f64,
    pub mode: Option<String>,
    pub form: FormReport,
    pub factors: Vec<FactorConstant>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountReport {
    pub count: u64,
    pub per_class: Vec<u64>,
    pub work: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub count: u64,
    pub predicted: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub form: FormReport,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McReport {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub z: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeReport {
    pub r1: u32,
    pub r2: u32,
    pub regulator: f64,
    pub closed_form: f64,
    pub mc: Option<McReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointReport {
    pub canonical: String,
    pub coords: Vec<String>,
    pub class_index: usize,
    pub content: String,
    pub size: f64,
    pub size_exact: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Constant(ConstantReport),
    Count(CountReport),
    Sweep(SweepReport),
    Volume(VolumeReport),
    Point(PointReport),
}

fn field_of(m: &RunManifest) -> CliResult<FieldData> {
    Ok(make_field(FieldKind::from_str(&m.field)?)?)
}

pub fn weights_of(m: &RunManifest) -> CliResult<Vec<Weight>> {
    if m.weights.is_empty() {
        return Err(CliError::Input("--weights is required".into()));
    }
    m.weights
        .iter()
        .map(|w| {
            if m.allow_ill_formed {
                Weight::jointly_coprime(w.clone())
            } else {
                Weight::new(w.clone())
            }
            .map_err(CliError::from)
        })
        .collect()
}

fn divisor_of(m: &RunManifest, weights: &[Weight]) -> CliResult<DivisorClass> {
    Ok(match &m.divisor {
        Some(d) => DivisorClass::new(d.clone())?,
        None if weights.len() == 1 => DivisorClass::single(1)?,
        None => anticanonical_divisor(weights),
    })
}

fn mode_of(m: &RunManifest) -> CliResult<ProductMode> {
    Ok(match &m.mode {
        Some(s) => ProductMode::from_str(s)?,
        None => ProductMode::default(),
    })
}

fn options_of(m: &RunManifest) -> CountOptions {
    CountOptions {
        budget: m.budget,
        threads: m.threads,
    }
}

fn query_of(m: &RunManifest, field: &FieldData, weights: &[Weight], bound: f64) -> CliResult<CountQuery> {
    let divisor = divisor_of(m, weights)?;
    let mut q = if weights.len() == 1 {
        CountQuery::single(field.clone(), weights[0].clone(), bound)
    } else {
        CountQuery::product(field.clone(), weights.to_vec(), bound)
    }
    .with_divisor(divisor);
    if let Some(o) = &m.open {
        q = q.with_open(OpenConstraint::from_str(o)?);
    }
    if let Some(method) = &m.method {
        q = q.with_method(Method::from_str(method)?);
    }
    Ok(q)
}

/// The asymptotic the counts are compared against.
fn predicted_form(m: &RunManifest, field: &FieldData, weights: &[Weight]) -> CliResult<AsymptoticForm> {
    let divisor = divisor_of(m, weights)?;
    if weights.len() > 1 && divisor == anticanonical_divisor(weights) {
        return Ok(theorem_b_asymptotic(field, weights, mode_of(m)?, m.tolerance)?);
    }
    Ok(divisor_asymptotic(field, weights, &divisor, m.tolerance)?)
}

fn to_u64(n: u128) -> CliResult<u64> {
    u64::try_from(n).map_err(|_| CliError::Input(format!("count {n} does not fit in 64 bits")))
}

pub fn execute(m: &RunManifest) -> CliResult<Report> {
    match m.command {
        Command::Constant => constant(m),
        Command::Count => count_cmd(m),
        Command::Sweep => sweep_cmd(m),
        Command::Volume => volume(m),
        Command::Point => point(m),
    }
}

fn constant(m: &RunManifest) -> CliResult<Report> {
    let field = field_of(m)?;
    let weights = weights_of(m)?;
    let divisor = divisor_of(m, &weights)?;
    let factors = weights
        .iter()
        .map(|w| {
            let b = theorem_a_breakdown(&field, w, m.tolerance)?;
            Ok(FactorConstant {
                weight: w.entries().to_vec(),
                class_number: b.class_number,
                zeta_argument: b.zeta_argument,
                zeta: b.zeta.value,
                zeta_error: b.zeta.error,
                disc_factor: b.disc_factor,
                r_over_w: b.r_over_w,
                weight_factor: b.weight_factor,
                constant: b.constant.value,
                constant_error: b.constant.error,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let anticanonical = weights.len() > 1 && divisor == anticanonical_divisor(&weights);
    let (value, error, mode, form) = if anticanonical {
        let mode = mode_of(m)?;
        let c = theorem_b_constant(&field, &weights, mode, m.tolerance)?;
        let form = theorem_b_asymptotic(&field, &weights, mode, m.tolerance)?;
        (c.value, c.error, Some(mode.to_string()), form)
    } else {
        let form = divisor_asymptotic(&field, &weights, &divisor, m.tolerance)?;
        let error = factors.iter().map(|f| f.constant_error / f.constant).sum::<f64>() * form.c;
        (form.c, error, None, form)
    };
    Ok(Report::Constant(ConstantReport {
        value,
        error,
        mode,
        form: FormReport::from(&form),
        factors,
    }))
}

fn count_cmd(m: &RunManifest) -> CliResult<Report> {
    let field = field_of(m)?;
    let weights = weights_of(m)?;
    let bound = m.bound.ok_or_else(|| CliError::Input("--T is required".into()))?;
    let r = count(&query_of(m, &field, &weights, bound)?, &options_of(m))?;
    Ok(Report::Count(CountReport {
        count: to_u64(r.count)?,
        per_class: r.per_class.iter().map(|&c| to_u64(c)).collect::<CliResult<_>>()?,
        work: to_u64(r.work.min(u64::MAX as u128))?,
    }))
}

fn sweep_cmd(m: &RunManifest) -> CliResult<Report> {
    let field = field_of(m)?;
    let weights = weights_of(m)?;
    let grid = m.grid.ok_or_else(|| CliError::Input("--grid is required".into()))?;
    let form = predicted_form(m, &field, &weights)?;
    let series = sweep(&query_of(m, &field, &weights, grid.start)?, &grid, &options_of(m))?;
    let rows = series
        .rows
        .iter()
        .map(|(t, r)| {
            let predicted = form.eval(*t);
            Ok(SweepRow {
                t: *t,
                count: to_u64(r.count)?,
                predicted,
                ratio: (predicted > 0.0).then(|| r.count as f64 / predicted),
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(Report::Sweep(SweepReport {
        form: FormReport::from(&form),
        rows,
    }))
}

fn volume(m: &RunManifest) -> CliResult<Report> {
    let weights = weights_of(m)?;
    if weights.len() != 1 {
        return Err(CliError::Input("volume takes a single weight".into()));
    }
    let weight = &weights[0];
    let (r1, r2, regulator) = match m.frame {
        Some(f) => (f.r1, f.r2, f.regulator),
        None => {
            let f = field_of(m)?;
            (f.r1(), f.r2(), f.regulator())
        }
    };
    let closed_form = fundamental_volume(r1, r2, regulator, weight)?;
    let mc = match m.samples {
        None => None,
        Some(samples) => {
            let seed = m
                .seed
                .ok_or_else(|| CliError::Input("a Monte-Carlo run needs an explicit seed".into()))?;
            let frame = UnitLatticeFrame::new(r1, r2, regulator)?;
            let est = monte_carlo_volume(&frame, weight, samples, seed)?;
            Some(McReport {
                estimate: est.estimate,
                stderr: est.stderr,
                samples,
                hits: est.hits,
                seed,
                z: (est.stderr > 0.0).then(|| (est.estimate - closed_form) / est.stderr),
            })
        }
    };
    Ok(Report::Volume(VolumeReport {
        r1,
        r2,
        regulator,
        closed_form,
        mc,
    }))
}

fn point(m: &RunManifest) -> CliResult<Report> {
    let field = field_of(m)?;
    let weights = weights_of(m)?;
    if weights.len() != 1 {
        return Err(CliError::Input("point takes a single weight".into()));
    }
    let text = m.point.as_deref().ok_or_else(|| CliError::Input("--coords is required".into()))?;
    let x = parse_point(text)?;
    let p = canonicalize(&x, &weights[0], &field)?;
    let s = size_value(&p);
    Ok(Report::Point(PointReport {
        canonical: p.to_string(),
        coords: p.coords().iter().map(|c| c.to_string()).collect(),
        class_index: p.class_index(),
        content: p.content().to_string(),
        size: s.to_f64(),
        size_exact: s.to_string(),
    }))
}

/// Human-readable rendering; sweeps render as CSV.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Constant(c) => {
            let _ = writeln!(out, "constant: {} ± {:.3e}", c.value, c.error);
            let _ = writeln!(out, "asymptotic: {}·T^{}·(log T)^{}", c.form.c, c.form.alpha, c.form.beta);
            if let Some(mode) = &c.mode {
                let _ = writeln!(out, "mode: {mode}");
            }
            for f in &c.factors {
                let w: Vec<String> = f.weight.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "factor ({}):", w.join(","));
                let _ = writeln!(out, "  h = {}", f.class_number);
                let _ = writeln!(out, "  zeta_k({}) = {} ± {:.3e}", f.zeta_argument, f.zeta, f.zeta_error);
                let _ = writeln!(out, "  (2^(r1+r2) pi^r2 / sqrt(D))^m = {}", f.disc_factor);
                let _ = writeln!(out, "  R/w = {}", f.r_over_w);
                let _ = writeln!(out, "  |W|^(r1+r2-1) = {}", f.weight_factor);
                let _ = writeln!(out, "  C = {} ± {:.3e}", f.constant, f.constant_error);
            }
        }
        Report::Count(c) => {
            let _ = writeln!(out, "count: {}", c.count);
        }
        Report::Sweep(s) => out = sweep_csv(s),
        Report::Volume(v) => {
            let _ = writeln!(out, "closed form: {}", v.closed_form);
            if let Some(mc) = &v.mc {
                let _ = writeln!(out, "estimate: {}", mc.estimate);
                let _ = writeln!(out, "stderr: {}", mc.stderr);
                match mc.z {
                    Some(z) => {
                        let _ = writeln!(out, "z-score: {z:.3}");
                    }
                    None => {
                        let _ = writeln!(out, "z-score: n/a (zero variance)");
                    }
                }
            }
        }
        Report::Point(p) => {
            let _ = writeln!(out, "canonical: {}", p.canonical);
            let _ = writeln!(out, "class: {}", p.class_index);
            let _ = writeln!(out, "content: {}", p.content);
            let _ = writeln!(out, "size: {} = {}", p.size_exact, p.size);
        }
    }
    out
}

pub fn sweep_csv(s: &SweepReport) -> String {
    let mut out = String::from("T,count,predicted,ratio\n");
    for r in &s.rows {
        let ratio = r.ratio.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", r.t, r.count, r.predicted, ratio);
    }
    out
}
