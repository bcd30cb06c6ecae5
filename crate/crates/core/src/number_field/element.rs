use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::FieldKind;
use crate::error::{Error, Result};

/// Exact element `(a + b·ω) / den` of ℚ or of an imaginary quadratic field,
/// where ω is the standard generator of the maximal order.
///
/// Always normalized: `den > 0` and `gcd(a, b, den) = 1`. Over ℚ, `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    a: i128,
    b: i128,
    den: i128,
}

impl FieldElement {
    pub fn new(a: i128, b: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = den.signum();
        let (a, b, den) = (a * sign, b * sign, den * sign);
        let g = a.gcd(&b).gcd(&den);
        FieldElement {
            a: a / g,
            b: b / g,
            den: den / g,
        }
    }

    pub fn integral(a: i128, b: i128) -> Self {
        FieldElement { a, b, den: 1 }
    }

    pub fn from_int(n: i128) -> Self {
        FieldElement { a: n, b: 0, den: 1 }
    }

    pub fn from_ratio(q: Ratio<i128>) -> Self {
        FieldElement::new(*q.numer(), 0, *q.denom())
    }

    pub fn zero() -> Self {
        FieldElement::from_int(0)
    }

    pub fn one() -> Self {
        FieldElement::from_int(1)
    }

    /// The generator ω itself.
    pub fn omega() -> Self {
        FieldElement::integral(0, 1)
    }

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    /// Coefficient of 1, as an exact rational.
    pub fn rational_part(&self) -> Ratio<i128> {
        Ratio::new(self.a, self.den)
    }

    /// Coefficient of ω, as an exact rational.
    pub fn omega_part(&self) -> Ratio<i128> {
        Ratio::new(self.b, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            a: -self.a,
            b: -self.b,
            den: self.den,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        FieldElement::new(
            self.a * o.den + o.a * self.den,
            self.b * o.den + o.b * self.den,
            self.den * o.den,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self, kind: FieldKind) -> Self {
        let (t, n) = kind.omega_poly();
        let (a, b) = mul_integral((self.a, self.b), (o.a, o.b), t, n);
        FieldElement::new(a, b, self.den * o.den)
    }

    pub fn scale_int(&self, k: i128) -> Self {
        FieldElement::new(self.a * k, self.b * k, self.den)
    }

    /// Galois conjugate (identity over ℚ).
    pub fn conj(&self, kind: FieldKind) -> Self {
        let (t, _) = kind.omega_poly();
        FieldElement::new(self.a + t * self.b, -self.b, self.den)
    }

    /// Field norm down to ℚ; over ℚ this is the element itself.
    pub fn norm(&self, kind: FieldKind) -> Ratio<i128> {
        match kind {
            FieldKind::Rational => self.rational_part(),
            FieldKind::ImagQuadratic { .. } => {
                let (t, n) = kind.omega_poly();
                Ratio::new(
                    norm_integral((self.a, self.b), t, n),
                    self.den * self.den,
                )
            }
        }
    }

    pub fn inv(&self, kind: FieldKind) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPoint);
        }
        match kind {
            FieldKind::Rational => Ok(FieldElement::new(self.den, 0, self.a)),
            FieldKind::ImagQuadratic { .. } => {
                // x⁻¹ = conj(x) / N(x)
                let (t, n) = kind.omega_poly();
                let num_norm = norm_integral((self.a, self.b), t, n);
                let c = FieldElement::integral(self.a + t * self.b, -self.b);
                Ok(FieldElement::new(c.a * self.den, c.b * self.den, num_norm))
            }
        }
    }

    /// `self^e` for any integer `e` (negative powers invert).
    pub fn pow(&self, e: i64, kind: FieldKind) -> Result<Self> {
        let base = if e < 0 { self.inv(kind)? } else { *self };
        let mut acc = FieldElement::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq, kind);
            }
            sq = sq.mul(&sq, kind);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Complex embedding `(re, im)`, with ω = √−d or (1 + √−d)/2.
    pub fn to_complex(&self, kind: FieldKind) -> (f64, f64) {
        let den = self.den as f64;
        match kind {
            FieldKind::Rational => (self.a as f64 / den, 0.0),
            FieldKind::ImagQuadratic { d } => {
                let s = (d as f64).sqrt();
                let (t, _) = kind.omega_poly();
                if t == 0 {
                    (self.a as f64 / den, self.b as f64 * s / den)
                } else {
                    (
                        (self.a as f64 + self.b as f64 / 2.0) / den,
                        self.b as f64 * s / 2.0 / den,
                    )
                }
            }
        }
    }

    /// Normalized archimedean absolute value: `|x|` at a real place,
    /// `|x|²` at the complex place.
    pub fn abs_v(&self, kind: FieldKind) -> f64 {
        match kind {
            FieldKind::Rational => (self.a as f64 / self.den as f64).abs(),
            FieldKind::ImagQuadratic { .. } => {
                let q = self.norm(kind);
                *q.numer() as f64 / *q.denom() as f64
            }
        }
    }

    /// Total order by (rational part, ω-part).
    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        self.rational_part()
            .cmp(&o.rational_part())
            .then_with(|| self.omega_part().cmp(&o.omega_part()))
    }

    /// Parse literals such as `3`, `-1/2`, `1+2w`, `-w`, `3/4-5/7w`. Over
    /// ℚ(i) the letter `i` is accepted as an alias for ω.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::InvalidInput("empty coordinate".into()));
        }
        let bad = || Error::InvalidInput(format!("cannot parse coordinate `{s}`"));
        // split into signed terms
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = FieldElement::zero();
        for term in terms {
            let (body, is_omega) = match term.strip_suffix(['w', 'i']) {
                Some(rest) => (rest.trim_end_matches('*').to_string(), true),
                None => (term.clone(), false),
            };
            let body = match body.as_str() {
                "" | "+" => "1".to_string(),
                "-" => "-1".to_string(),
                other => other.to_string(),
            };
            let q = parse_ratio(&body).ok_or_else(bad)?;
            let e = if is_omega {
                FieldElement::new(0, *q.numer(), *q.denom())
            } else {
                FieldElement::from_ratio(q)
            };
            acc = acc.add(&e);
        }
        Ok(acc)
    }
}

fn parse_ratio(s: &str) -> Option<Ratio<i128>> {
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Ratio::new(n.parse().ok()?, d))
        }
        None => Some(Ratio::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rational_part();
        let w = self.omega_part();
        let show = |q: Ratio<i128>| {
            if q.is_integer() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        };
        match (r == Ratio::from_integer(0), w == Ratio::from_integer(0)) {
            (_, true) => write!(f, "{}", show(r)),
            (true, false) => write!(f, "{}w", show(w)),
            (false, false) => {
                if w > Ratio::from_integer(0) {
                    write!(f, "{}+{}w", show(r), show(w))
                } else {
                    write!(f, "{}{}w", show(r), show(w))
                }
            }
        }
    }
}

/// Product of integral elements given by coordinates in the basis (1, ω),
/// with ω² = t·ω − n.
pub(crate) fn mul_integral(x: (i128, i128), y: (i128, i128), t: i128, n: i128) -> (i128, i128) {
    let bb = x.1 * y.1;
    (x.0 * y.0 - n * bb, x.0 * y.1 + x.1 * y.0 + t * bb)
}

pub(crate) fn norm_integral(x: (i128, i128), t: i128, n: i128) -> i128 {
    x.0 * x.0 + t * x.0 * x.1 + n * x.1 * x.1
}

#[cfg(test)]
mod tests {
    use super::*;

    const QI: FieldKind = FieldKind::ImagQuadratic { d: 1 };
    const Q3: FieldKind = FieldKind::ImagQuadratic { d: 3 };

    #[test]
    fn gaussian_arithmetic() {
        let x = FieldElement::integral(1, 1); // 1 + i
        assert_eq!(x.mul(&x, QI), FieldElement::integral(0, 2));
        assert_eq!(x.norm(QI), Ratio::from_integer(2));
        let inv = x.inv(QI).unwrap();
        assert_eq!(inv.mul(&x, QI), FieldElement::one());
        assert_eq!(inv, FieldElement::new(1, -1, 2));
    }

    #[test]
    fn eisenstein_omega_is_a_sixth_root_of_unity() {
        let w = FieldElement::omega();
        assert_eq!(w.pow(6, Q3).unwrap(), FieldElement::one());
        assert_ne!(w.pow(3, Q3).unwrap(), FieldElement::one());
        assert_eq!(w.norm(Q3), Ratio::from_integer(1));
        let (re, im) = w.to_complex(Q3);
        assert!((re - 0.5).abs() < 1e-15 && (im - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn parsing_literals() {
        assert_eq!(FieldElement::parse("1+2w").unwrap(), FieldElement::integral(1, 2));
        assert_eq!(FieldElement::parse("-w").unwrap(), FieldElement::integral(0, -1));
        assert_eq!(FieldElement::parse("3/4-5/2w").unwrap(), FieldElement::new(3, -10, 4));
        assert_eq!(FieldElement::parse("-7").unwrap(), FieldElement::from_int(-7));
        assert_eq!(FieldElement::parse("1+i").unwrap(), FieldElement::integral(1, 1));
        assert!(FieldElement::parse("1/0").is_err());
        assert!(FieldElement::parse("abc").is_err());
    }

    #[test]
    fn display_roundtrips_through_parse() {
        for e in [
            FieldElement::new(3, -10, 4),
            FieldElement::integral(0, 5),
            FieldElement::from_int(-2),
            FieldElement::new(-1, 1, 3),
        ] {
            assert_eq!(FieldElement::parse(&e.to_string()).unwrap(), e);
        }
    }
}
