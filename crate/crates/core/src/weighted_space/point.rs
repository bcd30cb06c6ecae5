use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use super::bound::{Exponent, SizeBound, SizeValue};
use super::weight::{DivisorClass, Weight};
use crate::arith::factor_with_bound;
use crate::error::{Error, Result};
use crate::number_field::{
    element_valuation, FieldData, FieldElement, FieldKind, IdealRep, Valuation,
    DEFAULT_FACTOR_BOUND,
};

/// A rational point of `P(W)` stored as its canonical representative.
///
/// The coordinates lie in `𝔄^{w₁} × … × 𝔄^{w_m}` where `𝔄` is the fixed
/// representative of the class of the weighted content, the content is
/// exactly `𝔄`, and the tuple is the distinguished member of its orbit
/// under the roots of unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WpsPoint {
    kind: FieldKind,
    weight: Weight,
    coords: Vec<FieldElement>,
    class_index: usize,
    content: IdealRep,
}

impl WpsPoint {
    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Index of the ideal class of the weighted content.
    pub fn class_index(&self) -> usize {
        self.class_index
    }

    /// The weighted content `𝔉` of the stored coordinates.
    pub fn content(&self) -> &IdealRep {
        &self.content
    }
}

impl fmt::Display for WpsPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// A point of `P(W₁) × … × P(W_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductPoint {
    factors: Vec<WpsPoint>,
}

impl ProductPoint {
    pub fn new(factors: Vec<WpsPoint>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a product needs at least one factor".into()));
        }
        if factors.iter().any(|p| p.kind != factors[0].kind) {
            return Err(Error::InvalidInput("factors lie over different fields".into()));
        }
        Ok(ProductPoint { factors })
    }

    pub fn factors(&self) -> &[WpsPoint] {
        &self.factors
    }
}

fn check_tuple(x: &[FieldElement], w: &Weight) -> Result<()> {
    if x.len() != w.m() {
        return Err(Error::ArityMismatch {
            expected: w.m(),
            got: x.len(),
        });
    }
    if x.iter().all(FieldElement::is_zero) {
        return Err(Error::ZeroPoint);
    }
    Ok(())
}

/// `a_*x = (a^{w₁}x₁, …, a^{w_m}x_m)`.
pub fn weighted_action(a: &FieldElement, x: &[FieldElement], w: &Weight, kind: FieldKind) -> Result<Vec<FieldElement>> {
    x.iter()
        .zip(w.entries())
        .map(|(xi, &wi)| Ok(a.pow(wi as i64, kind)?.mul(xi, kind)))
        .collect()
}

/// Rational primes at which some coordinate could have nonzero weighted
/// valuation: those dividing a denominator or the norm of the first nonzero
/// numerator.
fn candidate_primes(x: &[FieldElement], kind: FieldKind) -> Result<Vec<u128>> {
    let first = x.iter().find(|c| !c.is_zero()).expect("checked nonzero");
    let num = FieldElement::integral(first.a(), first.b());
    let mut ns: Vec<u128> = vec![num.norm(kind).numer().unsigned_abs()];
    ns.extend(x.iter().map(|c| c.den() as u128));
    let mut primes = Vec::new();
    for n in ns {
        let f = factor_with_bound(n, DEFAULT_FACTOR_BOUND).ok_or(Error::FactorBoundExceeded(n))?;
        primes.extend(f.into_iter().map(|(p, _)| p));
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// The weighted content `𝔉(x)`: the prime `𝔭` appears with exponent
/// `min ⌊v_𝔭(xᵢ)/wᵢ⌋` over the nonzero coordinates.
pub fn weighted_content(x: &[FieldElement], w: &Weight, field: &FieldData) -> Result<IdealRep> {
    check_tuple(x, w)?;
    let kind = field.kind();
    let mut acc = IdealRep::unit(kind);
    for p in candidate_primes(x, kind)? {
        for prime in field.primes_above(p) {
            let e = x
                .iter()
                .zip(w.entries())
                .filter_map(|(xi, &wi)| match element_valuation(field, xi, &prime) {
                    Valuation::Finite(v) => Some(v.div_euclid(wi as i64)),
                    Valuation::Infinite => None,
                })
                .min()
                .expect("some coordinate is nonzero");
            if e != 0 {
                acc = acc.mul(&prime.ideal.pow(e, kind), kind);
            }
        }
    }
    Ok(acc)
}

/// `H_∞(x) = max |xᵢ|_v^{1/wᵢ}` at the single archimedean place, with
/// `|x|_v = |x|²` when the place is complex.
pub fn h_infinity(x: &[FieldElement], w: &Weight, kind: FieldKind) -> Result<f64> {
    check_tuple(x, w)?;
    Ok(x.iter()
        .zip(w.entries())
        .map(|(xi, &wi)| xi.abs_v(kind).powf(1.0 / wi as f64))
        .fold(0.0, f64::max))
}

/// Bring `x` to the canonical representative of its orbit.
pub fn canonicalize(x: &[FieldElement], w: &Weight, field: &FieldData) -> Result<WpsPoint> {
    let kind = field.kind();
    let content = weighted_content(x, w, field)?;
    let class_index = field.class_index(&content);
    let rep = field.class_reps()[class_index].clone();
    let quotient = content.mul(&rep.inverse(kind), kind);
    let lambda = field.principal_generator(&quotient).ok_or_else(|| {
        Error::Invariant(format!("{quotient} should be principal"))
    })?;
    let y = weighted_action(&lambda.inv(kind)?, x, w, kind)?;
    let coords = unit_canonical(y, w, field)?;
    Ok(WpsPoint {
        kind,
        weight: w.clone(),
        coords,
        class_index,
        content: rep,
    })
}

/// Pick the distinguished tuple among the unit multiples `ζ_*y`.
fn unit_canonical(y: Vec<FieldElement>, w: &Weight, field: &FieldData) -> Result<Vec<FieldElement>> {
    let kind = field.kind();
    if kind.is_rational() {
        let flip = y
            .iter()
            .zip(w.entries())
            .find(|(c, &wi)| wi % 2 == 1 && !c.is_zero())
            .is_some_and(|(c, _)| c.a() < 0);
        return Ok(if flip {
            y.iter()
                .zip(w.entries())
                .map(|(c, &wi)| if wi % 2 == 1 { c.neg() } else { *c })
                .collect()
        } else {
            y
        });
    }
    let mut best = y.clone();
    for zeta in &field.roots_of_unity()[1..] {
        let cand = weighted_action(zeta, &y, w, kind)?;
        if lex_tuple_cmp(&cand, &best) == Ordering::Less {
            best = cand;
        }
    }
    Ok(best)
}

fn lex_tuple_cmp(a: &[FieldElement], b: &[FieldElement]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.lex_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Parse `"4,8,16"` or `"1+2w,0,3"` into coordinates.
pub fn parse_point(s: &str) -> Result<Vec<FieldElement>> {
    s.split(',').map(FieldElement::parse).collect()
}

/// Integer `|y|` (over ℚ) or `N(y)` (quadratic) of an integral coordinate.
fn abs_v_int(y: &FieldElement, kind: FieldKind) -> u128 {
    debug_assert!(y.is_integral());
    match kind {
        FieldKind::Rational => y.a().unsigned_abs(),
        FieldKind::ImagQuadratic { .. } => y.norm(kind).numer().unsigned_abs(),
    }
}

/// Index of a coordinate maximizing `|yᵢ|_v^{1/wᵢ}`, comparing exactly.
fn dominant_coordinate(values: &[u128], w: &[u64]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        // a^{1/u} < b^{1/v}  ⇔  a^v < b^u
        let lhs = BigUint::from(values[best]).pow(w[i] as u32);
        let rhs = BigUint::from(values[i]).pow(w[best] as u32);
        if lhs < rhs {
            best = i;
        }
    }
    best
}

/// The size of a canonical point as an exact algebraic number.
pub fn size_value(p: &WpsPoint) -> SizeValue {
    let values: Vec<u128> = p.coords.iter().map(|y| abs_v_int(y, p.kind)).collect();
    let i = dominant_coordinate(&values, p.weight.entries());
    let norm = p.content.integral_norm() as u128;
    SizeValue::root_of_int(values[i], p.weight.entries()[i]).mul(&SizeValue::inverse_of_int(norm))
}

/// `Size(P) = H_∞(x) / N(𝔉(x))`.
pub fn size(p: &WpsPoint) -> f64 {
    size_value(p).to_f64()
}

/// Exact test `Size(P) <= T`.
pub fn size_at_most(p: &WpsPoint, bound: &SizeBound) -> bool {
    bound.admits_size(&size_value(p))
}

/// `Size_D(P) = Π Size(Pᵢ)^{aᵢ}` as an exact value.
pub fn size_divisor_value(p: &ProductPoint, d: &DivisorClass) -> Result<SizeValue> {
    if p.factors.len() != d.len() {
        return Err(Error::ArityMismatch {
            expected: d.len(),
            got: p.factors.len(),
        });
    }
    Ok(p.factors
        .iter()
        .zip(d.entries())
        .fold(SizeValue::one(), |acc, (f, &a)| {
            acc.mul(&size_value(f).pow(Exponent::from_integer(a as i64)))
        }))
}

pub fn size_divisor(p: &ProductPoint, d: &DivisorClass) -> Result<f64> {
    Ok(size_divisor_value(p, d)?.to_f64())
}

/// Rational helper for tests and callers building points from integers.
pub fn int_tuple(xs: &[i128]) -> Vec<FieldElement> {
    xs.iter().map(|&x| FieldElement::from_int(x)).collect()
}

#[cfg(test)]
fn ratio(n: i128, d: i128) -> FieldElement {
    FieldElement::from_ratio(num_rational::Ratio::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        Weight::jointly_coprime(s.split(',').map(|x| x.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn content_examples() {
        let q = FieldData::rational();
        let c = weighted_content(&int_tuple(&[4, 8, 16]), &w("1,1,2"), &q).unwrap();
        assert_eq!(c, IdealRep::from_int(4, FieldKind::Rational));
        let c = weighted_content(&int_tuple(&[5, 5, 5]), &w("1,1,2"), &q).unwrap();
        assert!(c.is_unit());
        let c = weighted_content(&int_tuple(&[1, 0, 0]), &w("1,1,2"), &q).unwrap();
        assert!(c.is_unit());
        assert_eq!(
            weighted_content(&int_tuple(&[0, 0]), &w("1,1"), &q),
            Err(Error::ZeroPoint)
        );
        // fractional input: (1/2, 1/4) on P(1,2) has content (1/2)
        let x = vec![ratio(1, 2), ratio(1, 4)];
        let c = weighted_content(&x, &w("1,2"), &q).unwrap();
        assert_eq!(c, IdealRep::Rational { num: 1, den: 2 });
    }

    #[test]
    fn h_infinity_examples() {
        let q = FieldKind::Rational;
        assert_eq!(h_infinity(&int_tuple(&[3, 4]), &w("1,1"), q).unwrap(), 4.0);
        assert_eq!(h_infinity(&int_tuple(&[2, 2, 2]), &w("1,1,2"), q).unwrap(), 2.0);
        let qi = FieldKind::ImagQuadratic { d: 1 };
        let x = vec![FieldElement::integral(1, 1), FieldElement::from_int(2)];
        assert!((h_infinity(&x, &w("1,2"), qi).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_examples() {
        let q = FieldData::rational();
        let p = canonicalize(&int_tuple(&[4, 8, 16]), &w("1,1,2"), &q).unwrap();
        assert_eq!(p.coords(), int_tuple(&[1, 2, 1]).as_slice());
        assert_eq!(size(&p), 2.0);
        let p = canonicalize(&int_tuple(&[-3, 5]), &w("1,1"), &q).unwrap();
        assert_eq!(p.coords(), int_tuple(&[3, -5]).as_slice());
        let p = canonicalize(&int_tuple(&[0, 0, -7]), &w("1,1,2"), &q).unwrap();
        assert_eq!(p.coords(), int_tuple(&[0, 0, -7]).as_slice());
        let p = canonicalize(&int_tuple(&[5, 5, 5]), &w("1,1,2"), &q).unwrap();
        assert_eq!(size(&p), 5.0);
        assert_eq!(p.to_string(), "[5:5:5]");
    }

    #[test]
    fn size_divisor_example() {
        let q = FieldData::rational();
        let p1 = canonicalize(&int_tuple(&[3, 4]), &w("1,1"), &q).unwrap();
        let p2 = canonicalize(&int_tuple(&[1, 2]), &w("1,1"), &q).unwrap();
        let pp = ProductPoint::new(vec![p1, p2]).unwrap();
        let d = DivisorClass::new(vec![2, 2]).unwrap();
        assert_eq!(size_divisor(&pp, &d).unwrap(), 64.0);
        assert!(size_divisor(&pp, &DivisorClass::new(vec![1]).unwrap()).is_err());
    }

    #[test]
    fn gaussian_points() {
        let f = FieldData::imag_quadratic(1).unwrap();
        let kind = f.kind();
        // (2, 2i) = (1+i)_*(1-i, 1+i): content (1+i)
        let x = vec![FieldElement::from_int(2), FieldElement::integral(0, 2)];
        let p = canonicalize(&x, &w("1,1"), &f).unwrap();
        assert!(p.content().is_unit());
        let units: Vec<_> = f.roots_of_unity().to_vec();
        assert!(units.iter().any(|u| {
            weighted_action(u, &[FieldElement::integral(1, 0), FieldElement::integral(0, 1)], &w("1,1"), kind)
                .unwrap()
                == p.coords()
        }));
        assert_eq!(size(&p), 1.0);
    }

    #[test]
    fn non_principal_content() {
        let f = FieldData::imag_quadratic(5).unwrap();
        // (2, 1+√−5) generates the non-principal prime above 2
        let x = vec![FieldElement::from_int(2), FieldElement::integral(1, 1)];
        let p = canonicalize(&x, &w("1,1"), &f).unwrap();
        assert_eq!(p.class_index(), 1);
        assert_eq!(p.content().integral_norm(), 2);
        // H_∞ = max(4, 6) = 6, N(𝔉) = 2
        assert!((size(&p) - 3.0).abs() < 1e-12);
        assert_eq!(canonicalize(p.coords(), &w("1,1"), &f).unwrap(), p);
    }
}
