//! Arithmetic kernel for ℚ and imaginary quadratic fields ℚ(√−d): exact
//! elements, ideals in Hermite normal form, class groups from reduced
//! binary quadratic forms, prime factorization of ideals, the ideal Möbius
//! function and Dedekind zeta values.

mod element;
pub mod forms;
mod ideal;
mod zeta;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub use element::FieldElement;
pub use ideal::IdealRep;
pub use zeta::{dedekind_zeta, dedekind_zeta_with_error, dirichlet_l, riemann_zeta, ZetaValue};

use crate::arith::{self, factor_with_bound, kronecker, sqrt_mod_prime};
use crate::error::{Error, Result};
use element::norm_integral;

/// Default trial-division bound for factoring ideal norms.
pub const DEFAULT_FACTOR_BOUND: u128 = 1_000_000;

/// Which field: ℚ, or ℚ(√−d) for a squarefree `d > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Rational,
    ImagQuadratic { d: u64 },
}

impl FieldKind {
    /// `(t, n)` with ω² = t·ω − n. Over ℚ this is `(0, 0)` and unused.
    pub fn omega_poly(&self) -> (i128, i128) {
        match *self {
            FieldKind::Rational => (0, 0),
            FieldKind::ImagQuadratic { d } if d % 4 == 3 => (1, (1 + d as i128) / 4),
            FieldKind::ImagQuadratic { d } => (0, d as i128),
        }
    }

    /// Absolute value of the discriminant.
    pub fn abs_disc(&self) -> u64 {
        match *self {
            FieldKind::Rational => 1,
            FieldKind::ImagQuadratic { d } if d % 4 == 3 => d,
            FieldKind::ImagQuadratic { d } => 4 * d,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            FieldKind::Rational => 1,
            FieldKind::ImagQuadratic { .. } => 2,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldKind::Rational)
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::ImagQuadratic { d: 1 } => write!(f, "Q(i)"),
            FieldKind::ImagQuadratic { d } => write!(f, "Q(sqrt(-{d}))"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    /// Accepts `Q`, `Q(i)`, `Q(sqrt(-5))`, `Q(sqrt-5)` or a bare negative
    /// integer `-5`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("unrecognized field `{s}`"));
        if matches!(t.as_str(), "Q" | "q" | "QQ") {
            return Ok(FieldKind::Rational);
        }
        if matches!(t.as_str(), "Q(i)" | "q(i)") {
            return Ok(FieldKind::ImagQuadratic { d: 1 });
        }
        let inner = t
            .strip_prefix("Q(sqrt")
            .or_else(|| t.strip_prefix("q(sqrt"))
            .and_then(|r| r.strip_suffix(')'))
            .map(|r| r.trim_start_matches('(').trim_end_matches(')').to_string())
            .unwrap_or(t.clone());
        let v: i64 = inner.parse().map_err(|_| bad())?;
        if v >= 0 {
            return Err(Error::InvalidInput(format!(
                "only imaginary quadratic fields are supported, got `{s}`"
            )));
        }
        Ok(FieldKind::ImagQuadratic { d: v.unsigned_abs() })
    }
}

/// A prime ideal together with the rational prime below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub ideal: IdealRep,
    pub p: u128,
    /// Residue degree: the norm is `p^residue_degree`.
    pub residue_degree: u32,
    pub ramification: u32,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u128 {
        self.p.pow(self.residue_degree)
    }
}

/// Valuation of an element at a prime; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

/// Arithmetic invariants of a supported field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldData {
    kind: FieldKind,
    disc: u64,
    r1: u32,
    r2: u32,
    w: u32,
    regulator: f64,
    class_reps: Vec<IdealRep>,
    class_forms: Vec<forms::Form>,
    roots_of_unity: Vec<FieldElement>,
}

/// Build the invariants of ℚ or ℚ(√−d).
pub fn make_field(kind: FieldKind) -> Result<FieldData> {
    match kind {
        FieldKind::Rational => Ok(FieldData {
            kind,
            disc: 1,
            r1: 1,
            r2: 0,
            w: 2,
            regulator: 1.0,
            class_reps: vec![IdealRep::unit(kind)],
            class_forms: vec![],
            roots_of_unity: vec![FieldElement::one(), FieldElement::from_int(-1)],
        }),
        FieldKind::ImagQuadratic { d } => {
            if d == 0 || !arith::is_squarefree(d) {
                return Err(Error::NotSquarefree(d));
            }
            let disc = kind.abs_disc();
            let class_forms = forms::reduced_forms(disc as i128);
            let class_reps = class_forms
                .iter()
                .map(|&f| forms::form_ideal(f, kind))
                .collect();
            let (w, generator) = match d {
                1 | 3 => (if d == 1 { 4 } else { 6 }, FieldElement::omega()),
                _ => (2, FieldElement::from_int(-1)),
            };
            let mut roots = Vec::with_capacity(w as usize);
            let mut acc = FieldElement::one();
            for _ in 0..w {
                roots.push(acc);
                acc = acc.mul(&generator, kind);
            }
            debug_assert_eq!(acc, FieldElement::one());
            Ok(FieldData {
                kind,
                disc,
                r1: 0,
                r2: 1,
                w,
                regulator: 1.0,
                class_reps,
                class_forms,
                roots_of_unity: roots,
            })
        }
    }
}

impl FieldData {
    pub fn rational() -> Self {
        make_field(FieldKind::Rational).expect("ℚ is always valid")
    }

    pub fn imag_quadratic(d: u64) -> Result<Self> {
        make_field(FieldKind::ImagQuadratic { d })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// |D_k|.
    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn r1(&self) -> u32 {
        self.r1
    }

    pub fn r2(&self) -> u32 {
        self.r2
    }

    pub fn degree(&self) -> u32 {
        self.r1 + 2 * self.r2
    }

    pub fn class_number(&self) -> usize {
        self.class_reps.len()
    }

    /// Number of roots of unity.
    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn regulator(&self) -> f64 {
        self.regulator
    }

    /// One integral ideal of least norm per class; index 0 is the unit ideal.
    pub fn class_reps(&self) -> &[IdealRep] {
        &self.class_reps
    }

    /// Roots of unity as consecutive powers `ζ⁰, ζ¹, …` of a generator.
    pub fn roots_of_unity(&self) -> &[FieldElement] {
        &self.roots_of_unity
    }

    /// Index into [`class_reps`](Self::class_reps) of the class of `ideal`.
    pub fn class_index(&self, ideal: &IdealRep) -> usize {
        if self.kind.is_rational() {
            return 0;
        }
        let f = forms::reduce(forms::ideal_form(ideal, self.kind));
        self.class_forms
            .iter()
            .position(|&g| g == f)
            .expect("every reduced form of the discriminant is a class rep")
    }

    /// A generator of `ideal` if it is principal.
    pub fn principal_generator(&self, ideal: &IdealRep) -> Option<FieldElement> {
        match *ideal {
            IdealRep::Rational { num, den } => Some(FieldElement::new(num, 0, den)),
            IdealRep::Quadratic { den, a, b, c } => {
                let (t, n) = self.kind.omega_poly();
                let v = shortest_vector((a, 0), (b, c), t, n);
                (norm_integral(v, t, n) == a * c).then(|| FieldElement::new(v.0, v.1, den))
            }
        }
    }

    /// The prime ideals above the rational prime `p`.
    pub fn primes_above(&self, p: u128) -> Vec<PrimeIdeal> {
        let kind = self.kind;
        if kind.is_rational() {
            return vec![PrimeIdeal {
                ideal: IdealRep::from_int(p as i128, kind),
                p,
                residue_degree: 1,
                ramification: 1,
            }];
        }
        let (t, n) = kind.omega_poly();
        let symbol = kronecker(-(self.disc as i128), p);
        if symbol == -1 {
            return vec![PrimeIdeal {
                ideal: IdealRep::from_int(p as i128, kind),
                p,
                residue_degree: 2,
                ramification: 1,
            }];
        }
        let roots = omega_roots_mod(t, n, p);
        let prime_for = |r: u128| PrimeIdeal {
            ideal: IdealRep::from_vectors(&[(p as i128, 0), (-(r as i128), 1)], 1),
            p,
            residue_degree: 1,
            ramification: if symbol == 0 { 2 } else { 1 },
        };
        if symbol == 0 {
            vec![prime_for(roots[0])]
        } else {
            debug_assert_eq!(roots.len(), 2);
            roots.into_iter().map(prime_for).collect()
        }
    }
}

/// Roots of x² − t·x + n modulo the prime `p`, sorted.
fn omega_roots_mod(t: i128, n: i128, p: u128) -> Vec<u128> {
    let pi = p as i128;
    if p == 2 {
        return (0..2u128)
            .filter(|&x| {
                let x = x as i128;
                (x * x - t * x + n).rem_euclid(2) == 0
            })
            .collect();
    }
    let disc = (t * t - 4 * n).rem_euclid(pi) as u128;
    let s = sqrt_mod_prime(disc, p).expect("split or ramified prime has a root") as i128;
    let inv2 = (pi + 1) / 2;
    let mut roots: Vec<u128> = [(t + s), (t - s)]
        .iter()
        .map(|&x| (x.rem_euclid(pi) * inv2).rem_euclid(pi) as u128)
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Lagrange reduction of a 2-dimensional lattice under the norm form; returns
/// a shortest nonzero vector.
fn shortest_vector(
    mut v1: (i128, i128),
    mut v2: (i128, i128),
    t: i128,
    n: i128,
) -> (i128, i128) {
    let norm = |v: (i128, i128)| norm_integral(v, t, n);
    // 2·B(x, y) = N(x + y) − N(x) − N(y)
    let bil2 = |x: (i128, i128), y: (i128, i128)| 2 * x.0 * y.0 + t * (x.0 * y.1 + x.1 * y.0) + 2 * n * x.1 * y.1;
    if norm(v2) < norm(v1) {
        std::mem::swap(&mut v1, &mut v2);
    }
    loop {
        let n1 = norm(v1);
        let mu = Integer::div_floor(&(bil2(v1, v2) + n1), &(2 * n1));
        v2 = (v2.0 - mu * v1.0, v2.1 - mu * v1.1);
        if norm(v2) >= n1 {
            return v1;
        }
        std::mem::swap(&mut v1, &mut v2);
    }
}

/// Norm of an ideal.
pub fn ideal_norm(ideal: &IdealRep) -> num_rational::Ratio<i128> {
    ideal.norm()
}

/// Exponent of the prime in the fractional ideal.
pub fn ideal_valuation(field: &FieldData, ideal: &IdealRep, prime: &PrimeIdeal) -> i64 {
    let kind = field.kind;
    let den = match *ideal {
        IdealRep::Rational { num, den } => {
            let p = prime.p as i128;
            let v = |mut x: i128| {
                let mut k = 0i64;
                while x % p == 0 {
                    x /= p;
                    k += 1;
                }
                k
            };
            return v(num) - v(den);
        }
        IdealRep::Quadratic { den, .. } => den,
    };
    let integral = ideal.scale(num_rational::Ratio::from_integer(den));
    let den_part = if den == 1 {
        0
    } else {
        arith::valuation(den as u128, prime.p) as i64 * prime.ramification as i64
    };
    let integral_norm = integral.integral_norm() as u128;
    let max_k = arith::valuation(integral_norm, prime.p) as i64;
    let mut k = 0i64;
    let mut power = prime.ideal.clone();
    while k < max_k && power.contains_ideal(&integral) {
        k += 1;
        power = power.mul(&prime.ideal, kind);
    }
    k - den_part
}

/// Exponent of the prime in the principal ideal `(x)`.
pub fn element_valuation(field: &FieldData, x: &FieldElement, prime: &PrimeIdeal) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(ideal_valuation(
        field,
        &IdealRep::principal(x, field.kind),
        prime,
    ))
}

/// Prime factorization of an integral ideal, primes ordered by the rational
/// prime below them.
pub fn factor_ideal(field: &FieldData, ideal: &IdealRep) -> Result<Vec<(PrimeIdeal, u32)>> {
    factor_ideal_with_bound(field, ideal, DEFAULT_FACTOR_BOUND)
}

pub fn factor_ideal_with_bound(
    field: &FieldData,
    ideal: &IdealRep,
    bound: u128,
) -> Result<Vec<(PrimeIdeal, u32)>> {
    if !ideal.is_integral() {
        return Err(Error::NotIntegral);
    }
    let norm = ideal.integral_norm() as u128;
    let rational_factors = factor_with_bound(norm, bound).ok_or(Error::FactorBoundExceeded(norm))?;
    let mut out = Vec::new();
    for (p, e) in rational_factors {
        for prime in field.primes_above(p) {
            let v = ideal_valuation(field, ideal, &prime);
            if v > 0 {
                out.push((prime, v as u32));
            }
        }
        debug_assert!({
            let total: u32 = out
                .iter()
                .filter(|(q, _)| q.p == p)
                .map(|(q, k)| q.residue_degree * k)
                .sum();
            total == e
        });
    }
    Ok(out)
}

/// Ideal Möbius function on integral ideals.
pub fn moebius_ideal(field: &FieldData, ideal: &IdealRep) -> Result<i8> {
    let factors = factor_ideal(field, ideal)?;
    if factors.iter().any(|&(_, e)| e >= 2) {
        return Ok(0);
    }
    Ok(if factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Every integral ideal of norm at most `max_norm`, found by scanning Hermite
/// bases directly (no factoring involved).
pub fn integral_ideals_up_to(field: &FieldData, max_norm: u64) -> Vec<IdealRep> {
    let kind = field.kind;
    let max = max_norm as i128;
    if kind.is_rational() {
        return (1..=max).map(|g| IdealRep::from_int(g, kind)).collect();
    }
    let (t, n) = kind.omega_poly();
    let mut out = Vec::new();
    for a in 1..=max {
        for c in 1..=a {
            if a % c != 0 || a * c > max {
                continue;
            }
            for b in (0..a).step_by(c as usize) {
                // closed under multiplication by ω
                if (c * n + (b / c + t) * b) % a == 0 {
                    out.push(IdealRep::from_hnf(a, b, c));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn qi() -> FieldData {
        FieldData::imag_quadratic(1).unwrap()
    }

    fn q5() -> FieldData {
        FieldData::imag_quadratic(5).unwrap()
    }

    #[test]
    fn rational_invariants() {
        let f = FieldData::rational();
        assert_eq!((f.disc(), f.r1(), f.r2(), f.class_number(), f.w()), (1, 1, 0, 1, 2));
        assert_eq!(f.regulator(), 1.0);
    }

    #[test]
    fn gaussian_invariants() {
        let f = qi();
        assert_eq!((f.disc(), f.r1(), f.r2(), f.class_number(), f.w()), (4, 0, 1, 1, 4));
        assert!(f.class_reps()[0].is_unit());
    }

    #[test]
    fn sqrt_minus_five_has_class_number_two() {
        let f = q5();
        assert_eq!(f.disc(), 20);
        assert_eq!(f.class_number(), 2);
        let reps = f.class_reps();
        assert!(reps[0].is_unit());
        assert_eq!(reps[1], IdealRep::from_hnf(2, 1, 1));
        assert_eq!(f.class_index(&reps[1]), 1);
        assert!(f.principal_generator(&reps[1]).is_none());
    }

    #[test]
    fn roots_of_unity_counts() {
        for (d, w) in [(1, 4), (2, 2), (3, 6), (5, 2), (7, 2)] {
            let f = FieldData::imag_quadratic(d).unwrap();
            assert_eq!(f.w(), w);
            assert_eq!(f.roots_of_unity().len(), w as usize);
            for u in f.roots_of_unity() {
                assert_eq!(u.pow(w as i64, f.kind()).unwrap(), FieldElement::one());
            }
        }
    }

    #[test]
    fn non_squarefree_rejected() {
        assert_eq!(FieldData::imag_quadratic(4), Err(Error::NotSquarefree(4)));
        assert_eq!(FieldData::imag_quadratic(12), Err(Error::NotSquarefree(12)));
    }

    #[test]
    fn ideal_norm_examples() {
        let f = q5();
        assert_eq!(ideal_norm(&IdealRep::unit(f.kind())), Ratio::from_integer(1));
        assert_eq!(ideal_norm(&IdealRep::from_hnf(2, 1, 1)), Ratio::from_integer(2));
        assert_eq!(ideal_norm(&IdealRep::from_int(3, FieldKind::ImagQuadratic { d: 1 })), Ratio::from_integer(9));
    }

    #[test]
    fn factor_six_in_gaussian_integers() {
        let f = qi();
        let six = IdealRep::from_int(6, f.kind());
        let factors = factor_ideal(&f, &six).unwrap();
        let summary: Vec<_> = factors.iter().map(|(p, e)| (p.p, p.residue_degree, *e)).collect();
        // (1+i)² · (3), 3 inert
        assert_eq!(summary, vec![(2, 1, 2), (3, 2, 1)]);
        assert_eq!(
            factors[0].0.ideal,
            IdealRep::principal(&FieldElement::integral(1, 1), f.kind())
        );
    }

    #[test]
    fn two_ramifies_for_d5() {
        let f = q5();
        let factors = factor_ideal(&f, &IdealRep::from_int(2, f.kind())).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.ideal, IdealRep::from_hnf(2, 1, 1));
        assert_eq!(factors[0].1, 2);
    }

    #[test]
    fn unit_ideal_has_no_factors() {
        assert!(factor_ideal(&qi(), &IdealRep::unit(qi().kind())).unwrap().is_empty());
        assert_eq!(moebius_ideal(&qi(), &IdealRep::unit(qi().kind())).unwrap(), 1);
    }

    #[test]
    fn moebius_examples() {
        let f = qi();
        let sq = IdealRep::principal(&FieldElement::integral(0, 2), f.kind()); // (1+i)²
        assert_eq!(moebius_ideal(&f, &sq).unwrap(), 0);
        let q = FieldData::rational();
        assert_eq!(moebius_ideal(&q, &IdealRep::from_int(6, q.kind())).unwrap(), 1);
        assert_eq!(moebius_ideal(&q, &IdealRep::from_int(30, q.kind())).unwrap(), -1);
    }

    #[test]
    fn factoring_respects_the_bound() {
        let q = FieldData::rational();
        let big = IdealRep::from_int(1009 * 1013, q.kind());
        assert_eq!(
            factor_ideal_with_bound(&q, &big, 1000),
            Err(Error::FactorBoundExceeded(1009 * 1013))
        );
        assert_eq!(factor_ideal(&q, &big).unwrap().len(), 2);
    }

    #[test]
    fn valuations() {
        let f = qi();
        let p = &factor_ideal(&f, &IdealRep::from_int(2, f.kind())).unwrap()[0].0;
        let x = FieldElement::new(4, 4, 3); // (4+4i)/3 = 4(1+i)/3
        assert_eq!(element_valuation(&f, &x, p), Valuation::Finite(5));
        let y = FieldElement::new(1, 0, 2);
        assert_eq!(element_valuation(&f, &y, p), Valuation::Finite(-2));
        assert_eq!(element_valuation(&f, &FieldElement::zero(), p), Valuation::Infinite);
    }

    #[test]
    fn split_primes_are_conjugate() {
        let f = qi();
        let above5 = f.primes_above(5);
        assert_eq!(above5.len(), 2);
        assert_eq!(above5[0].ideal.conj(f.kind()), above5[1].ideal);
        assert_eq!(above5[0].ideal.mul(&above5[1].ideal, f.kind()), IdealRep::from_int(5, f.kind()));
        // 7 is inert in ℤ[i]
        assert_eq!(f.primes_above(7)[0].residue_degree, 2);
        // 2 splits in ℚ(√−7) because −7 ≡ 1 mod 8
        let f7 = FieldData::imag_quadratic(7).unwrap();
        assert_eq!(f7.primes_above(2).len(), 2);
    }

    #[test]
    fn principal_generators() {
        let f = qi();
        let x = FieldElement::integral(3, -2);
        let i = IdealRep::principal(&x, f.kind());
        let g = f.principal_generator(&i).unwrap();
        assert_eq!(IdealRep::principal(&g, f.kind()), i);
        let frac = i.scale(Ratio::new(1, 7));
        let g = f.principal_generator(&frac).unwrap();
        assert_eq!(IdealRep::principal(&g, f.kind()), frac);
    }

    #[test]
    fn field_string_parsing() {
        assert_eq!("Q".parse::<FieldKind>().unwrap(), FieldKind::Rational);
        assert_eq!("Q(i)".parse::<FieldKind>().unwrap(), FieldKind::ImagQuadratic { d: 1 });
        assert_eq!("Q(sqrt(-5))".parse::<FieldKind>().unwrap(), FieldKind::ImagQuadratic { d: 5 });
        assert_eq!("Q(sqrt-5)".parse::<FieldKind>().unwrap(), FieldKind::ImagQuadratic { d: 5 });
        assert_eq!("-23".parse::<FieldKind>().unwrap(), FieldKind::ImagQuadratic { d: 23 });
        assert!("Q(sqrt(2))".parse::<FieldKind>().is_err());
        for k in [FieldKind::Rational, FieldKind::ImagQuadratic { d: 1 }, FieldKind::ImagQuadratic { d: 15 }] {
            assert_eq!(k.to_string().parse::<FieldKind>().unwrap(), k);
        }
    }
}
