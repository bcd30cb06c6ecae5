//! Exact counting of rational points of bounded size on weighted projective
//! spaces over ℚ and imaginary quadratic fields, on their open subsets
//! `{xᵢ ≠ 0}`, and on products with respect to `Size_D`.

mod direct;
mod lattice;
mod product;
mod setup;
mod sieve;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number_field::FieldData;
use crate::weighted_space::{DivisorClass, SizeBound, Weight};
use product::{count_product_recursive, Budget, Factor};
use setup::class_setups;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Counting algorithm for a single weighted space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Enumerate primitive tuples, last coordinate in closed form.
    #[default]
    Direct,
    /// Möbius inversion over integral ideals.
    MoebiusSieve,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "moebius" | "moebius-sieve" => Ok(Method::MoebiusSieve),
            _ => Err(Error::InvalidInput(format!(
                "unknown method `{s}` (expected direct or moebius)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::MoebiusSieve => "moebius",
        })
    }
}

/// Restrict to the open subset where one coordinate is nonzero. Indices are
/// zero-based; the text form `x2!=0` (or `x2.1!=0` for factor 2 of a
/// product) is one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpenConstraint {
    pub factor: usize,
    pub coord: usize,
}

impl OpenConstraint {
    pub fn coord(coord: usize) -> Self {
        OpenConstraint { factor: 0, coord }
    }
}

impl FromStr for OpenConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse open constraint `{s}` (expected e.g. x1!=0)"));
        let body = s
            .trim()
            .strip_prefix('x')
            .and_then(|r| r.strip_suffix("!=0"))
            .ok_or_else(bad)?;
        let one_based = |t: &str| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(bad()),
            }
        };
        match body.split_once('.') {
            Some((f, c)) => Ok(OpenConstraint {
                factor: one_based(f)?,
                coord: one_based(c)?,
            }),
            None => Ok(OpenConstraint::coord(one_based(body)?)),
        }
    }
}

impl fmt::Display for OpenConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factor == 0 {
            write!(f, "x{}!=0", self.coord + 1)
        } else {
            write!(f, "x{}.{}!=0", self.factor + 1, self.coord + 1)
        }
    }
}

/// Execution limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximum estimated lattice visits.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }
}

/// What to count: points of `P(W₁) × … × P(W_k)` with `Size_D <= T`.
#[derive(Debug, Clone)]
pub struct CountQuery {
    pub field: FieldData,
    pub weights: Vec<Weight>,
    pub divisor: DivisorClass,
    pub bound: f64,
    pub open: Option<OpenConstraint>,
    pub method: Method,
}

impl CountQuery {
    /// Single weighted space with `Size <= T`.
    pub fn single(field: FieldData, weight: Weight, bound: f64) -> Self {
        CountQuery {
            field,
            weights: vec![weight],
            divisor: DivisorClass::single(1).expect("(1) is effective"),
            bound,
            open: None,
            method: Method::Direct,
        }
    }

    /// Product with the anticanonical size.
    pub fn product(field: FieldData, weights: Vec<Weight>, bound: f64) -> Self {
        let divisor = DivisorClass::anticanonical(&weights);
        CountQuery {
            field,
            weights,
            divisor,
            bound,
            open: None,
            method: Method::Direct,
        }
    }

    pub fn with_open(mut self, open: OpenConstraint) -> Self {
        self.open = Some(open);
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_divisor(mut self, divisor: DivisorClass) -> Self {
        self.divisor = divisor;
        self
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidInput("no weights given".into()));
        }
        if self.divisor.len() != self.weights.len() {
            return Err(Error::ArityMismatch {
                expected: self.weights.len(),
                got: self.divisor.len(),
            });
        }
        if let Some(i) = self.divisor.entries().iter().position(|&a| a == 0) {
            return Err(Error::InvalidInput(format!(
                "divisor coefficient of factor {} is 0, so infinitely many points have bounded size",
                i + 1
            )));
        }
        if let Some(o) = self.open {
            let ok = self.weights.get(o.factor).is_some_and(|w| o.coord < w.m());
            if !ok {
                return Err(Error::InvalidInput(format!("open constraint {o} is out of range")));
            }
        }
        SizeBound::new(self.bound)?;
        Ok(())
    }
}

/// An exact count with its split over ideal classes.
#[derive(Debug, Clone)]
pub struct CountResult {
    pub query: CountQuery,
    pub count: u128,
    /// Counts per ideal class; empty for products.
    pub per_class: Vec<u128>,
    /// Estimated lattice visits.
    pub work: u128,
    pub wall_time: Duration,
}

/// Counts at a geometric grid of bounds.
#[derive(Debug, Clone)]
pub struct CountSeries {
    pub rows: Vec<(f64, CountResult)>,
}

/// Geometric grid `T₀, T₀·r, T₀·r², … <= T_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub ratio: f64,
}

impl Grid {
    pub fn new(start: f64, end: f64, ratio: f64) -> Result<Self> {
        if !(start > 0.0 && end >= start && ratio > 1.0 && end.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid needs 0 < T0 <= Tmax and ratio > 1, got {start}:{end}:{ratio}"
            )));
        }
        Ok(Grid { start, end, ratio })
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0i32;
        loop {
            let t = self.start * self.ratio.powi(k);
            // tolerate rounding at the top end
            if t > self.end * (1.0 + 1e-12) {
                break;
            }
            out.push(t.min(self.end.max(t)));
            k += 1;
        }
        out
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `T0:Tmax:ratio`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse grid `{s}` (expected T0:Tmax:ratio)")))?;
        match parts[..] {
            [a, b, r] => Grid::new(a, b, r),
            _ => Err(Error::InvalidInput(format!("grid `{s}` needs three fields T0:Tmax:ratio"))),
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Per-class counts of points with `Size <= bound` on one weighted space.
fn count_single_classes(
    field: &FieldData,
    weight: &Weight,
    bound: &SizeBound,
    open: Option<usize>,
    method: Method,
    budget: &mut Budget,
) -> Result<Vec<u128>> {
    let setups = class_setups(field, weight, bound);
    let cost: u128 = setups
        .iter()
        .map(|s| match method {
            Method::Direct => direct::class_cost(s),
            Method::MoebiusSieve => sieve::class_cost(field, s),
        })
        .fold(0u128, u128::saturating_add);
    budget.charge(cost)?;
    setups
        .iter()
        .map(|s| match method {
            Method::Direct => direct::count_class(field, s, open),
            Method::MoebiusSieve => sieve::count_class(field, s, open),
        })
        .collect()
}

/// Exact count on one weighted space under an exact bound, split by class.
pub fn count_with_bound(
    field: &FieldData,
    weight: &Weight,
    bound: &SizeBound,
    open: Option<usize>,
    method: Method,
    options: &CountOptions,
) -> Result<Vec<u128>> {
    if open.is_some_and(|c| c >= weight.m()) {
        return Err(Error::InvalidInput(format!("coordinate {open:?} out of range")));
    }
    let mut budget = Budget::new(options.budget);
    with_threads(options.threads, || {
        count_single_classes(field, weight, bound, open, method, &mut budget)
    })?
}

/// Run a query.
pub fn count(query: &CountQuery, options: &CountOptions) -> Result<CountResult> {
    query.validate()?;
    let start = Instant::now();
    let bound = SizeBound::new(query.bound)?;
    let mut budget = Budget::new(options.budget);
    let field = &query.field;
    let method = query.method;
    let (count, per_class) = with_threads(options.threads, || -> Result<(u128, Vec<u128>)> {
        if query.weights.len() == 1 {
            let e = query.divisor.entries()[0];
            let open = query.open.map(|o| o.coord);
            let per_class = count_single_classes(field, &query.weights[0], &bound.root(e), open, method, &mut budget)?;
            return Ok((per_class.iter().sum(), per_class));
        }
        let mut factors: Vec<Factor> = query
            .weights
            .iter()
            .zip(query.divisor.entries())
            .enumerate()
            .map(|(k, (w, &a))| Factor {
                weight: w.clone(),
                a,
                open: query.open.filter(|o| o.factor == k).map(|o| o.coord),
            })
            .collect();
        // the factor with the most points (largest |W|/a) is counted last, in
        // closed form; the others are enumerated
        factors.sort_by(|x, y| {
            let lhs = x.weight.total() as u128 * y.a as u128;
            let rhs = y.weight.total() as u128 * x.a as u128;
            lhs.cmp(&rhs)
        });
        let single = |w: &Weight, b: &SizeBound, open: Option<usize>, budget: &mut Budget| -> Result<u128> {
            Ok(count_single_classes(field, w, b, open, method, budget)?.iter().sum())
        };
        let total = count_product_recursive(field, &factors, &bound, &mut budget, &single)?;
        Ok((total, Vec::new()))
    })??;
    Ok(CountResult {
        query: query.clone(),
        count,
        per_class,
        work: budget.used,
        wall_time: start.elapsed(),
    })
}

/// Points of `P(W)(ℚ)` with `Size <= T`, optionally with coordinate `open`
/// (zero-based) nonzero.
pub fn count_points_rational(weight: &Weight, bound: f64, open: Option<usize>, options: &CountOptions) -> Result<CountResult> {
    let mut q = CountQuery::single(FieldData::rational(), weight.clone(), bound);
    q.open = open.map(OpenConstraint::coord);
    count(&q, options)
}

/// Points of `P(W)(k)` with `Size <= T` over an imaginary quadratic field,
/// split by the class of the weighted content.
pub fn count_points_quadratic(field: &FieldData, weight: &Weight, bound: f64, options: &CountOptions) -> Result<CountResult> {
    if field.kind().is_rational() {
        return Err(Error::InvalidInput("expected an imaginary quadratic field".into()));
    }
    count(&CountQuery::single(field.clone(), weight.clone(), bound), options)
}

/// Points of `Π P(Wᵢ)(k)` with `Size_D <= T`.
pub fn count_product(
    field: &FieldData,
    weights: &[Weight],
    divisor: &DivisorClass,
    bound: f64,
    options: &CountOptions,
) -> Result<CountResult> {
    let q = CountQuery::product(field.clone(), weights.to_vec(), bound).with_divisor(divisor.clone());
    count(&q, options)
}

/// The same count as the direct engine, by Möbius inversion over ideals.
pub fn count_moebius_sieve(field: &FieldData, weight: &Weight, bound: f64, options: &CountOptions) -> Result<CountResult> {
    let q = CountQuery::single(field.clone(), weight.clone(), bound).with_method(Method::MoebiusSieve);
    count(&q, options)
}

/// Run the query at every grid point.
pub fn sweep(template: &CountQuery, grid: &Grid, options: &CountOptions) -> Result<CountSeries> {
    let mut rows = Vec::new();
    for t in grid.values() {
        let r = count(&template.clone().with_bound(t), options)?;
        if let Some((_, prev)) = rows.last() {
            let prev: &CountResult = prev;
            if prev.count > r.count {
                return Err(Error::Invariant(format!(
                    "count decreased from {} to {} as T grew to {t}",
                    prev.count, r.count
                )));
            }
        }
        rows.push((t, r));
    }
    Ok(CountSeries { rows })
}
