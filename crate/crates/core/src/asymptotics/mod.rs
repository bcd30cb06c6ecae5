//! Leading constants of the size-counting asymptotics, the composition rule
//! for counting functions on products, and convergence diagnostics.

mod volume;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::enumeration::CountSeries;
use crate::error::{Error, Result};
use crate::number_field::{dedekind_zeta_with_error, FieldData};
use crate::weighted_space::{DivisorClass, Exponent, Weight};

pub use volume::{fundamental_volume, monte_carlo_volume, UnitLatticeFrame, VolumeEstimate, MIN_SAMPLES};

/// `C·T^α·(log T)^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticForm {
    pub c: f64,
    pub alpha: Exponent,
    pub beta: u32,
}

impl AsymptoticForm {
    pub fn new(c: f64, alpha: Exponent, beta: u32) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("leading constant must be positive, got {c}")));
        }
        if alpha <= Ratio::from_integer(0) {
            return Err(Error::InvalidInput(format!("exponent must be positive, got {alpha}")));
        }
        Ok(AsymptoticForm { c, alpha, beta })
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().expect("small ratio")
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.c * t.powf(self.alpha_f64()) * t.ln().powi(self.beta as i32)
    }
}

impl fmt::Display for AsymptoticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·T^{}", self.c, self.alpha)?;
        if self.beta > 0 {
            write!(f, "·(log T)^{}", self.beta)?;
        }
        Ok(())
    }
}

/// A value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// The factors entering the single-space constant, for display.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantBreakdown {
    pub class_number: u64,
    pub zeta: Estimate,
    pub zeta_argument: u64,
    /// `(2^{r₁+r₂} π^{r₂} / √D)^m`
    pub disc_factor: f64,
    pub r_over_w: f64,
    /// `|W|^{r₁+r₂−1}`
    pub weight_factor: f64,
    pub constant: Estimate,
}

fn rounding(x: f64) -> f64 {
    16.0 * f64::EPSILON * x.abs()
}

/// `h/ζ_k(|W|) · (2^{r₁+r₂}π^{r₂}/√D)^m · R/w · |W|^{r₁+r₂−1}` with every factor.
pub fn theorem_a_breakdown(field: &FieldData, weight: &Weight, tol: f64) -> Result<ConstantBreakdown> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance);
    }
    let s = weight.total();
    if s < 2 {
        return Err(Error::UnsupportedZetaArgument(s));
    }
    let (r1, r2) = (field.r1() as i32, field.r2() as i32);
    let h = field.class_number() as u64;
    let disc_factor = (2f64.powi(r1 + r2) * PI.powi(r2) / (field.disc() as f64).sqrt()).powi(weight.m() as i32);
    let r_over_w = field.regulator() / field.w() as f64;
    let weight_factor = (s as f64).powi(r1 + r2 - 1);
    let k = h as f64 * disc_factor * r_over_w * weight_factor;
    // dC/dζ = −K/ζ² and ζ >= 1, so a ζ error of tol/(2K) keeps C within tol
    let z = dedekind_zeta_with_error(field, s, (tol / (2.0 * k)).min(1e-3))?;
    let value = k / z.value;
    let error = k * z.error / (z.value * (z.value - z.error)) + rounding(value);
    Ok(ConstantBreakdown {
        class_number: h,
        zeta: Estimate {
            value: z.value,
            error: z.error,
        },
        zeta_argument: s,
        disc_factor,
        r_over_w,
        weight_factor,
        constant: Estimate { value, error },
    })
}

/// Leading constant of the count of points of `P(W)` with `Size <= T`.
pub fn theorem_a_constant(field: &FieldData, weight: &Weight, tol: f64) -> Result<Estimate> {
    Ok(theorem_a_breakdown(field, weight, tol)?.constant)
}

/// `C·T^{|W|/e}`, the predicted count with `Size^e <= T`.
pub fn predicted_count(field: &FieldData, weight: &Weight, e: u64, t: f64, tol: f64) -> Result<f64> {
    if e == 0 {
        return Err(Error::InvalidInput("exponent e must be at least 1".into()));
    }
    if t <= 0.0 {
        return Ok(0.0);
    }
    let c = theorem_a_constant(field, weight, tol)?.value;
    Ok(c * t.powf(weight.total() as f64 / e as f64))
}

/// Leading term of `N(X × Y, T)` from those of `X` and `Y`, for the product
/// size `Size_X·Size_Y`.
pub fn combine_asymptotics(x: &AsymptoticForm, y: &AsymptoticForm) -> Result<AsymptoticForm> {
    if x.alpha < y.alpha || y.beta != 0 {
        return Err(Error::CompositionOrder);
    }
    if x.alpha == y.alpha {
        AsymptoticForm::new(x.c * y.c * x.alpha_f64() / (x.beta + 1) as f64, x.alpha, x.beta + 1)
    } else {
        let gap = (x.alpha - y.alpha).to_f64().expect("small ratio");
        AsymptoticForm::new(x.c * y.c * y.alpha_f64() / gap, x.alpha, x.beta)
    }
}

/// Which denominator to use for the anticanonical product constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductMode {
    /// The closed formula with `k!` in the denominator.
    AsPrinted,
    /// Iterated composition of the factor asymptotics, giving `(k−1)!`.
    #[default]
    LemmaDerived,
}

impl FromStr for ProductMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "as-printed" => Ok(ProductMode::AsPrinted),
            "lemma-derived" => Ok(ProductMode::LemmaDerived),
            other => Err(Error::InvalidInput(format!(
                "unknown mode {other:?} (expected as-printed or lemma-derived)"
            ))),
        }
    }
}

impl fmt::Display for ProductMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductMode::AsPrinted => "as-printed",
            ProductMode::LemmaDerived => "lemma-derived",
        })
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn nonempty(weights: &[Weight]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidInput("need at least one factor".into()));
    }
    Ok(())
}

/// Leading constant for the anticanonical count on `Π P(Wᵢ)`.
pub fn theorem_b_constant(field: &FieldData, weights: &[Weight], mode: ProductMode, tol: f64) -> Result<Estimate> {
    nonempty(weights)?;
    let k = weights.len();
    let per_tol = tol / (2.0 * k as f64);
    match mode {
        ProductMode::AsPrinted => {
            let (r1, r2) = (field.r1() as i32, field.r2() as i32);
            let h = field.class_number() as f64;
            let m_total: i32 = weights.iter().map(|w| w.m() as i32).sum();
            let mut value = h.powi(k as i32) / factorial(k)
                * (2f64.powi(r1 + r2) * PI.powi(r2) / (field.disc() as f64).sqrt()).powi(m_total)
                * (field.regulator() / field.w() as f64).powi(k as i32);
            let mut rel = 0.0;
            for w in weights {
                let b = theorem_a_breakdown(field, w, per_tol)?;
                value *= b.weight_factor / b.zeta.value;
                rel += b.zeta.error / (b.zeta.value - b.zeta.error);
            }
            Ok(Estimate {
                value,
                error: value * rel * (1.0 + rel) + rounding(value),
            })
        }
        ProductMode::LemmaDerived => {
            let form = theorem_b_form(field, weights, tol)?;
            let mut rel = 0.0;
            for w in weights {
                let c = theorem_a_constant(field, w, per_tol)?;
                rel += c.error / (c.value - c.error);
            }
            Ok(Estimate {
                value: form.c,
                error: form.c * rel * (1.0 + rel) + rounding(form.c),
            })
        }
    }
}

/// The anticanonical product asymptotic `C·T·(log T)^{k−1}` for either mode.
pub fn theorem_b_asymptotic(field: &FieldData, weights: &[Weight], mode: ProductMode, tol: f64) -> Result<AsymptoticForm> {
    let c = theorem_b_constant(field, weights, mode, tol)?.value;
    AsymptoticForm::new(c, Ratio::from_integer(1), weights.len() as u32 - 1)
}

/// Iterated composition of the per-factor forms `(Cᵢ, 1, 0)`.
fn theorem_b_form(field: &FieldData, weights: &[Weight], tol: f64) -> Result<AsymptoticForm> {
    let per_tol = tol / (2.0 * weights.len() as f64);
    let forms = weights
        .iter()
        .map(|w| AsymptoticForm::new(theorem_a_constant(field, w, per_tol)?.value, Ratio::from_integer(1), 0))
        .collect::<Result<Vec<_>>>()?;
    fold_forms(forms)
}

fn fold_forms(mut forms: Vec<AsymptoticForm>) -> Result<AsymptoticForm> {
    forms.sort_by_key(|f| std::cmp::Reverse(f.alpha));
    let mut it = forms.into_iter();
    let first = it.next().ok_or_else(|| Error::InvalidInput("need at least one factor".into()))?;
    it.try_fold(first, |acc, f| combine_asymptotics(&acc, &f))
}

/// Asymptotic of the count with `Π Size(xᵢ)^{aᵢ} <= T`.
pub fn divisor_asymptotic(
    field: &FieldData,
    weights: &[Weight],
    divisor: &DivisorClass,
    tol: f64,
) -> Result<AsymptoticForm> {
    nonempty(weights)?;
    if divisor.len() != weights.len() {
        return Err(Error::ArityMismatch {
            expected: weights.len(),
            got: divisor.len(),
        });
    }
    if divisor.entries().contains(&0) {
        return Err(Error::InvalidInput(
            "divisor coefficients must be positive for a finite count".into(),
        ));
    }
    let per_tol = tol / (2.0 * weights.len() as f64);
    let forms = weights
        .iter()
        .zip(divisor.entries())
        .map(|(w, &a)| {
            let c = theorem_a_constant(field, w, per_tol)?.value;
            AsymptoticForm::new(c, Ratio::new(w.total() as i64, a as i64), 0)
        })
        .collect::<Result<Vec<_>>>()?;
    fold_forms(forms)
}

/// Convergence diagnostics of a count series against a predicted form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    /// `(T, count / (C·T^α·(log T)^β))`
    pub ratios: Vec<(f64, f64)>,
    /// Least-squares slope of `count/T^α` against `(log T)^β`, when `β >= 1`.
    pub slope: Option<f64>,
}

pub fn fit_series(series: &CountSeries, form: &AsymptoticForm) -> Result<SeriesFit> {
    let points: Vec<(f64, f64)> = series.rows.iter().map(|(t, r)| (*t, r.count as f64)).collect();
    fit_points(&points, form)
}

/// [`fit_series`] on bare `(T, count)` pairs.
pub fn fit_points(points: &[(f64, f64)], form: &AsymptoticForm) -> Result<SeriesFit> {
    if points.is_empty() {
        return Err(Error::InvalidInput("series is empty".into()));
    }
    let ratios = points.iter().map(|&(t, n)| (t, n / form.eval(t))).collect();
    let slope = if form.beta >= 1 && points.len() >= 2 {
        let xs: Vec<f64> = points.iter().map(|&(t, _)| t.ln().powi(form.beta as i32)).collect();
        let ys: Vec<f64> = points.iter().map(|&(t, n)| n / t.powf(form.alpha_f64())).collect();
        let k = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    } else {
        None
    };
    Ok(SeriesFit { ratios, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn form(c: f64, a: i64, beta: u32) -> AsymptoticForm {
        AsymptoticForm::new(c, Ratio::from_integer(a), beta).unwrap()
    }

    #[test]
    fn rational_constants() {
        let q = FieldData::rational();
        let c = theorem_a_constant(&q, &w("1,1"), 1e-12).unwrap();
        assert!((c.value - 12.0 / (PI * PI)).abs() < 1e-12);
        assert!(c.error < 1e-12);
        let c = theorem_a_constant(&q, &w("1,1,2"), 1e-12).unwrap();
        assert!((c.value - 360.0 / PI.powi(4)).abs() < 1e-11);
        assert_eq!(
            theorem_a_constant(&q, &Weight::jointly_coprime(vec![1]).unwrap(), 1e-9),
            Err(Error::UnsupportedZetaArgument(1))
        );
    }

    #[test]
    fn gaussian_constant() {
        let qi = FieldData::imag_quadratic(1).unwrap();
        let c = theorem_a_constant(&qi, &w("1,1"), 1e-10).unwrap();
        let expected = PI * PI / (4.0 * 1.5067030099229863);
        assert!((c.value - expected).abs() < 1e-10, "{}", c.value);
        assert!(c.error <= 1e-10);
    }

    #[test]
    fn predictions() {
        let q = FieldData::rational();
        let p = predicted_count(&q, &w("1,1"), 1, 100.0, 1e-12).unwrap();
        assert!((p - 1.2e5 / (PI * PI)).abs() < 1e-7);
        let p = predicted_count(&q, &w("1,1,2"), 4, 1000.0, 1e-12).unwrap();
        assert!((p - 3.6e5 / PI.powi(4)).abs() < 1e-8);
        assert_eq!(predicted_count(&q, &w("1,1"), 1, 0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn composition_cases() {
        assert_eq!(combine_asymptotics(&form(1.0, 2, 0), &form(1.0, 2, 0)).unwrap(), form(2.0, 2, 1));
        assert_eq!(combine_asymptotics(&form(1.0, 3, 0), &form(1.0, 1, 0)).unwrap(), form(0.5, 3, 0));
        assert_eq!(
            combine_asymptotics(&form(1.0, 1, 0), &form(1.0, 3, 0)),
            Err(Error::CompositionOrder)
        );
        assert_eq!(
            combine_asymptotics(&form(1.0, 1, 0), &form(1.0, 1, 1)),
            Err(Error::CompositionOrder)
        );
        let c = 12.0 / (PI * PI);
        let p = combine_asymptotics(&form(c, 1, 0), &form(c, 1, 0)).unwrap();
        assert!((p.c - 144.0 / PI.powi(4)).abs() < 1e-12);
    }

    #[test]
    fn folding_identical_forms() {
        for k in 1..=5usize {
            let f = fold_forms(vec![form(1.3, 1, 0); k]).unwrap();
            assert_eq!((f.alpha, f.beta), (Ratio::from_integer(1), k as u32 - 1));
            assert!((f.c - 1.3f64.powi(k as i32) / factorial(k - 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn product_modes() {
        let q = FieldData::rational();
        let p1 = [w("1,1"), w("1,1")];
        let a = theorem_b_constant(&q, &p1, ProductMode::AsPrinted, 1e-12).unwrap();
        let b = theorem_b_constant(&q, &p1, ProductMode::LemmaDerived, 1e-12).unwrap();
        assert!((a.value - 72.0 / PI.powi(4)).abs() < 1e-11);
        assert!((b.value - 144.0 / PI.powi(4)).abs() < 1e-11);
        for k in 1..=5 {
            let ws: Vec<Weight> = [w("1,1"), w("1,1,2"), w("1,2,3"), w("1,1,1"), w("1,1,3")]
                .into_iter()
                .take(k)
                .collect();
            let a = theorem_b_constant(&q, &ws, ProductMode::AsPrinted, 1e-12).unwrap().value;
            let b = theorem_b_constant(&q, &ws, ProductMode::LemmaDerived, 1e-12).unwrap().value;
            assert!((a * k as f64 - b).abs() < 1e-10 * b, "k={k}");
            let f = theorem_b_asymptotic(&q, &ws, ProductMode::AsPrinted, 1e-12).unwrap();
            assert_eq!(f.beta, k as u32 - 1);
        }
        let single = theorem_b_constant(&q, &[w("1,1,2")], ProductMode::AsPrinted, 1e-12).unwrap();
        let a = theorem_a_constant(&q, &w("1,1,2"), 1e-12).unwrap();
        assert!((single.value - a.value).abs() < 1e-12);
    }

    #[test]
    fn divisor_forms() {
        let q = FieldData::rational();
        let c = 12.0 / (PI * PI);
        let f = divisor_asymptotic(&q, &[w("1,1")], &DivisorClass::new(vec![3]).unwrap(), 1e-12).unwrap();
        assert_eq!((f.alpha, f.beta), (Ratio::new(2, 3), 0));
        let f = divisor_asymptotic(&q, &[w("1,1"), w("1,1")], &DivisorClass::new(vec![2, 2]).unwrap(), 1e-12).unwrap();
        assert_eq!((f.alpha, f.beta), (Ratio::from_integer(1), 1));
        assert!((f.c - 144.0 / PI.powi(4)).abs() < 1e-11);
        let f = divisor_asymptotic(&q, &[w("1,1"), w("1,1")], &DivisorClass::new(vec![1, 2]).unwrap(), 1e-12).unwrap();
        assert_eq!((f.alpha, f.beta), (Ratio::from_integer(2), 0));
        assert!((f.c - c * c).abs() < 1e-11);
    }

    #[test]
    fn fitting() {
        let f = form(2.0, 1, 1);
        let pts: Vec<(f64, f64)> = [10.0f64, 100.0, 1000.0].iter().map(|&t| (t, f.eval(t) + 3.0 * t)).collect();
        let fit = fit_points(&pts, &f).unwrap();
        assert!((fit.slope.unwrap() - 2.0).abs() < 1e-9);
        assert!(fit.ratios.iter().all(|&(_, r)| r > 1.0));
        assert!(fit_points(&[], &f).is_err());
        assert_eq!(fit_points(&pts, &form(1.0, 1, 0)).unwrap().slope, None);
    }
}
