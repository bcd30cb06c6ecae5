use super::{FieldData, FieldKind};
use crate::arith::kronecker;
use crate::error::{Error, Result};

/// A real value with a rigorous absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: f64,
    pub error: f64,
}

/// B_2, B_4, …, B_16
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Below this the f64 summation noise dominates and no bound is promised.
const MIN_TOLERANCE: f64 = 1e-13;

/// Riemann ζ(s) for integer `s >= 2` by Euler–Maclaurin summation.
///
/// The remainder after the last correction term is bounded by the first
/// omitted term for real `s`.
pub fn riemann_zeta(s: u64) -> Result<ZetaValue> {
    if s < 2 {
        return Err(Error::UnsupportedZetaArgument(s));
    }
    let s = s as f64;
    let n = 12.0f64;
    let mut sum = 0.0;
    for k in (1..12).rev() {
        sum += (k as f64).powf(-s);
    }
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s(s+1)…(s+2k−2) / (2k)! · N^{−s−2k+1}
    let mut coeff = s / 2.0 * n.powf(-s - 1.0);
    let mut last = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = k as f64 + 1.0;
        if k > 1.0 {
            coeff *= (s + 2.0 * k - 3.0) * (s + 2.0 * k - 2.0) / ((2.0 * k - 1.0) * (2.0 * k)) / (n * n);
        }
        last = b * coeff;
        sum += last;
    }
    let rounding = 4.0 * f64::EPSILON * sum;
    Ok(ZetaValue {
        value: sum,
        error: last.abs() + rounding,
    })
}

/// L(s, χ) for the Kronecker character χ(n) = (−D / n) of an imaginary
/// quadratic discriminant, truncated with an Abel-summation tail bound
/// `2·S·(M+1)^{−s}` where `S` bounds the character partial sums.
pub fn dirichlet_l(abs_disc: u64, s: u64, tol: f64) -> Result<ZetaValue> {
    if s < 2 {
        return Err(Error::UnsupportedZetaArgument(s));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance);
    }
    let tol = tol.max(MIN_TOLERANCE);
    let period = abs_disc as usize;
    let disc = -(abs_disc as i128);
    let chi: Vec<i8> = (0..period)
        .map(|r| if r == 0 { 0 } else { kronecker(disc, r as u128) })
        .collect();
    let mut partial = 0i64;
    let mut max_partial = 0i64;
    for &c in &chi[1..] {
        partial += c as i64;
        max_partial = max_partial.max(partial.abs());
    }
    let sup = max_partial.max(1) as f64;
    let s_f = s as f64;
    // tail ≤ 2·S·(M+1)^{−s} ≤ tol/2
    let m = ((4.0 * sup / tol).powf(1.0 / s_f)).ceil() as u64;
    // Neumaier summation, small terms first
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in (1..=m).rev() {
        let c = chi[(k % abs_disc) as usize];
        if c == 0 {
            continue;
        }
        let term = c as f64 * (k as f64).powf(-s_f);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    let value = sum + comp;
    let tail = 2.0 * sup * ((m + 1) as f64).powf(-s_f);
    Ok(ZetaValue {
        value,
        error: tail + 8.0 * f64::EPSILON * value.abs(),
    })
}

/// ζ_k(s) with its error bound; for ℚ(√−d) it is ζ(s)·L(s, χ_D).
pub fn dedekind_zeta_with_error(field: &FieldData, s: u64, tol: f64) -> Result<ZetaValue> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance);
    }
    let z = riemann_zeta(s)?;
    match field.kind() {
        FieldKind::Rational => Ok(z),
        FieldKind::ImagQuadratic { .. } => {
            let l = dirichlet_l(field.disc(), s, tol / 4.0)?;
            let value = z.value * l.value;
            let error = z.value * l.error + l.value.abs() * z.error + z.error * l.error;
            Ok(ZetaValue { value, error })
        }
    }
}

/// ζ_k(s) to within `tol` (`s >= 2`).
pub fn dedekind_zeta(field: &FieldData, s: u64, tol: f64) -> Result<f64> {
    let z = dedekind_zeta_with_error(field, s, tol)?;
    if z.error > tol.max(MIN_TOLERANCE * 4.0) {
        return Err(Error::Invariant(format!(
            "zeta error bound {} exceeds requested tolerance {tol}",
            z.error
        )));
    }
    Ok(z.value)
}
