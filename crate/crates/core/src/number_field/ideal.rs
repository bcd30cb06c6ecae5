use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::element::{mul_integral, FieldElement};
use super::FieldKind;
use crate::arith::ext_gcd;

/// A nonzero fractional ideal in normal form.
///
/// Over ℚ the ideal is `(num/den)·ℤ` with a positive reduced generator.
/// Over an imaginary quadratic field it is `(1/den)·M` where `M` is the
/// integral ℤ-module with Hermite basis `a` and `b + c·ω`
/// (`a, c > 0`, `0 <= b < a`, `c | a`, `c | b`) and `den` is the least
/// positive integer making `den·I` integral. Equal ideals have equal fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdealRep {
    Rational { num: i128, den: i128 },
    Quadratic { den: i128, a: i128, b: i128, c: i128 },
}

/// Hermite normal form `(a, b, c)` of the rank-2 lattice spanned by the
/// given coordinate vectors in the basis (1, ω).
pub(crate) fn hnf2(vectors: &[(i128, i128)]) -> (i128, i128, i128) {
    let mut pivot = (0i128, 0i128);
    let mut g = 0i128;
    for &(x, y) in vectors {
        if y == 0 {
            g = g.gcd(&x);
            continue;
        }
        let (d, s, t) = ext_gcd(pivot.1, y);
        let other = (y / d) * pivot.0 - (pivot.1 / d) * x;
        pivot = (s * pivot.0 + t * x, d);
        g = g.gcd(&other);
    }
    assert!(g != 0 && pivot.1 != 0, "lattice is not of full rank");
    let a = g.abs();
    (a, pivot.0.rem_euclid(a), pivot.1)
}

impl IdealRep {
    pub fn unit(kind: FieldKind) -> Self {
        match kind {
            FieldKind::Rational => IdealRep::Rational { num: 1, den: 1 },
            FieldKind::ImagQuadratic { .. } => IdealRep::Quadratic {
                den: 1,
                a: 1,
                b: 0,
                c: 1,
            },
        }
    }

    /// The ideal `(1/den)·M` with `M` spanned by `vectors`.
    pub(crate) fn from_vectors(vectors: &[(i128, i128)], den: i128) -> Self {
        let (a, b, c) = hnf2(vectors);
        Self::normalized_quadratic(den, a, b, c)
    }

    /// Integral quadratic ideal from an already-reduced Hermite basis.
    pub(crate) fn from_hnf(a: i128, b: i128, c: i128) -> Self {
        Self::normalized_quadratic(1, a, b, c)
    }

    fn normalized_quadratic(den: i128, a: i128, b: i128, c: i128) -> Self {
        let k = a.gcd(&b).gcd(&c).gcd(&den);
        let s = den.signum();
        IdealRep::Quadratic {
            den: den / k * s,
            a: a / k,
            b: b / k,
            c: c / k,
        }
    }

    /// Principal ideal `(x)`, `x != 0`.
    pub fn principal(x: &FieldElement, kind: FieldKind) -> Self {
        assert!(!x.is_zero(), "principal ideal of zero");
        match kind {
            FieldKind::Rational => {
                let q = x.rational_part();
                IdealRep::Rational {
                    num: q.numer().abs(),
                    den: *q.denom(),
                }
            }
            FieldKind::ImagQuadratic { .. } => {
                let (t, n) = kind.omega_poly();
                let v = (x.a(), x.b());
                let vw = mul_integral(v, (0, 1), t, n);
                IdealRep::from_vectors(&[v, vw], x.den())
            }
        }
    }

    pub fn from_int(k: i128, kind: FieldKind) -> Self {
        IdealRep::principal(&FieldElement::from_int(k), kind)
    }

    pub fn norm(&self) -> Ratio<i128> {
        match *self {
            IdealRep::Rational { num, den } => Ratio::new(num, den),
            IdealRep::Quadratic { den, a, c, .. } => Ratio::new(a * c, den * den),
        }
    }

    /// Norm of an integral ideal as an integer.
    pub fn integral_norm(&self) -> i128 {
        let n = self.norm();
        assert!(n.is_integer(), "integral_norm on a fractional ideal");
        *n.numer()
    }

    pub fn is_integral(&self) -> bool {
        match *self {
            IdealRep::Rational { den, .. } | IdealRep::Quadratic { den, .. } => den == 1,
        }
    }

    pub fn is_unit(&self) -> bool {
        match *self {
            IdealRep::Rational { num, den } => num == 1 && den == 1,
            IdealRep::Quadratic { den, a, b, c } => den == 1 && a == 1 && b == 0 && c == 1,
        }
    }

    /// Hermite data `(den, a, b, c)` of a quadratic ideal.
    pub fn hnf(&self) -> Option<(i128, i128, i128, i128)> {
        match *self {
            IdealRep::Quadratic { den, a, b, c } => Some((den, a, b, c)),
            IdealRep::Rational { .. } => None,
        }
    }

    /// A ℤ-basis (a single generator over ℚ).
    pub fn generators(&self) -> Vec<FieldElement> {
        match *self {
            IdealRep::Rational { num, den } => vec![FieldElement::new(num, 0, den)],
            IdealRep::Quadratic { den, a, b, c } => {
                vec![FieldElement::new(a, 0, den), FieldElement::new(b, c, den)]
            }
        }
    }

    pub fn mul(&self, other: &Self, kind: FieldKind) -> Self {
        match (self, other) {
            (IdealRep::Rational { num: n1, den: d1 }, IdealRep::Rational { num: n2, den: d2 }) => {
                let q = Ratio::new(n1 * n2, d1 * d2);
                IdealRep::Rational {
                    num: *q.numer(),
                    den: *q.denom(),
                }
            }
            (
                IdealRep::Quadratic { den: d1, a: a1, b: b1, c: c1 },
                IdealRep::Quadratic { den: d2, a: a2, b: b2, c: c2 },
            ) => {
                let (t, n) = kind.omega_poly();
                let g1 = [(*a1, 0), (*b1, *c1)];
                let g2 = [(*a2, 0), (*b2, *c2)];
                let mut v = Vec::with_capacity(4);
                for x in g1 {
                    for y in g2 {
                        v.push(mul_integral(x, y, t, n));
                    }
                }
                IdealRep::from_vectors(&v, d1 * d2)
            }
            _ => panic!("mixing ideals of different fields"),
        }
    }

    /// Multiply by a nonzero rational scalar.
    pub fn scale(&self, q: Ratio<i128>) -> Self {
        assert!(*q.numer() != 0);
        let (p, r) = (q.numer().abs(), *q.denom());
        match *self {
            IdealRep::Rational { num, den } => {
                let q = Ratio::new(num * p, den * r);
                IdealRep::Rational {
                    num: *q.numer(),
                    den: *q.denom(),
                }
            }
            IdealRep::Quadratic { den, a, b, c } => {
                Self::normalized_quadratic(den * r, a * p, b * p, c * p)
            }
        }
    }

    pub fn conj(&self, kind: FieldKind) -> Self {
        match *self {
            IdealRep::Rational { .. } => self.clone(),
            IdealRep::Quadratic { den, a, b, c } => {
                let (t, _) = kind.omega_poly();
                IdealRep::from_vectors(&[(a, 0), (b + t * c, -c)], den)
            }
        }
    }

    pub fn inverse(&self, kind: FieldKind) -> Self {
        match *self {
            IdealRep::Rational { num, den } => IdealRep::Rational { num: den, den: num },
            IdealRep::Quadratic { den, a, b, c } => {
                // M⁻¹ = conj(M) / N(M)
                let m = IdealRep::from_hnf(a, b, c);
                m.conj(kind).scale(Ratio::new(den, a * c))
            }
        }
    }

    pub fn pow(&self, e: i64, kind: FieldKind) -> Self {
        let base = if e < 0 { self.inverse(kind) } else { self.clone() };
        let mut acc = IdealRep::unit(kind);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base, kind);
        }
        acc
    }

    /// Membership `x ∈ I`.
    pub fn contains(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        match *self {
            IdealRep::Rational { num, den } => {
                // x / (num/den) ∈ ℤ
                x.is_rational() && (x.a() * den) % (x.den() * num) == 0
            }
            IdealRep::Quadratic { den, a, b, c } => {
                let (u, v, xd) = (x.a() * den, x.b() * den, x.den());
                if u % xd != 0 || v % xd != 0 {
                    return false;
                }
                lattice_contains((a, b, c), (u / xd, v / xd))
            }
        }
    }

    /// Containment `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Self) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// Whether this (integral) ideal divides `other`, i.e. `other ⊆ self`.
    pub fn divides(&self, other: &Self) -> bool {
        self.contains_ideal(other)
    }
}

/// Whether the integral vector `(u, v)` lies in the lattice with Hermite
/// basis `(a, 0), (b, c)`.
pub(crate) fn lattice_contains((a, b, c): (i128, i128, i128), (u, v): (i128, i128)) -> bool {
    if v % c != 0 {
        return false;
    }
    (u - (v / c) * b) % a == 0
}

impl fmt::Display for IdealRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IdealRep::Rational { num, den: 1 } => write!(f, "({num})"),
            IdealRep::Rational { num, den } => write!(f, "({num}/{den})"),
            IdealRep::Quadratic { den, a, b, c } => {
                let second = FieldElement::integral(b, c);
                if den == 1 {
                    write!(f, "[{a}, {second}]")
                } else {
                    write!(f, "[{a}, {second}]/{den}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QI: FieldKind = FieldKind::ImagQuadratic { d: 1 };
    const Q5: FieldKind = FieldKind::ImagQuadratic { d: 5 };

    #[test]
    fn hnf_of_principal_ideals() {
        // (3) in ℤ[i]
        let three = IdealRep::from_int(3, QI);
        assert_eq!(three, IdealRep::from_hnf(3, 0, 3));
        assert_eq!(three.norm(), Ratio::from_integer(9));
        // (1+i) has index 2
        let p = IdealRep::principal(&FieldElement::integral(1, 1), QI);
        assert_eq!(p.norm(), Ratio::from_integer(2));
        assert_eq!(p, IdealRep::from_hnf(2, 1, 1));
    }

    #[test]
    fn two_ramifies_in_z_sqrt_minus_5() {
        let p2 = IdealRep::from_vectors(&[(2, 0), (1, 1)], 1);
        assert_eq!(p2.norm(), Ratio::from_integer(2));
        assert_eq!(p2.mul(&p2, Q5), IdealRep::from_int(2, Q5));
    }

    #[test]
    fn inverse_and_scaling() {
        let p2 = IdealRep::from_hnf(2, 1, 1);
        let inv = p2.inverse(Q5);
        assert!(!inv.is_integral());
        assert!(p2.mul(&inv, Q5).is_unit());
        let half = IdealRep::from_int(2, QI).inverse(QI);
        assert_eq!(half.norm(), Ratio::new(1, 4));
        assert!(half.contains(&FieldElement::new(1, 1, 2)));
        assert!(!half.contains(&FieldElement::new(1, 1, 4)));
    }

    #[test]
    fn rational_ideals() {
        let six = IdealRep::from_int(-6, FieldKind::Rational);
        assert_eq!(six, IdealRep::Rational { num: 6, den: 1 });
        assert!(six.contains(&FieldElement::from_int(12)));
        assert!(!six.contains(&FieldElement::from_int(9)));
        assert!(IdealRep::from_int(2, FieldKind::Rational).divides(&six));
    }
}
