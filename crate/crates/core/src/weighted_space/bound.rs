//! Exact arithmetic on sizes and size bounds.
//!
//! Sizes of canonical points are algebraic numbers of the form
//! `Π pⱼ^{qⱼ}` with rational exponents, and bounds arising from roots and
//! quotients of a user bound `T` have the form `T^e · Π bⱼ^{qⱼ}`. Both are
//! kept symbolically so that ties `Size = T` are decided exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factor_with_bound, isqrt};
use crate::error::{Error, Result};

pub type Exponent = Ratio<i64>;

/// An exact positive real `Π pⱼ^{qⱼ}` over distinct primes `pⱼ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SizeValue {
    factors: Vec<(u128, Exponent)>,
}

fn factor_exactly(n: u128) -> Vec<(u128, u32)> {
    factor_with_bound(n, isqrt(n) + 1).expect("bound covers √n")
}

impl SizeValue {
    pub fn one() -> Self {
        SizeValue::default()
    }

    /// `n^{1/root}` for a positive integer `n`.
    pub fn root_of_int(n: u128, root: u64) -> Self {
        assert!(n >= 1 && root >= 1);
        let factors = factor_exactly(n)
            .into_iter()
            .map(|(p, e)| (p, Exponent::new(e as i64, root as i64)))
            .collect();
        SizeValue { factors }
    }

    /// `n^{-1}` for a positive integer `n`.
    pub fn inverse_of_int(n: u128) -> Self {
        SizeValue::root_of_int(n, 1).pow(Exponent::from_integer(-1))
    }

    pub fn factors(&self) -> &[(u128, Exponent)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<u128, Exponent> = self.factors.iter().cloned().collect();
        for &(p, q) in &other.factors {
            *map.entry(p).or_insert_with(Exponent::zero) += q;
        }
        SizeValue {
            factors: map.into_iter().filter(|(_, q)| !q.is_zero()).collect(),
        }
    }

    pub fn pow(&self, r: Exponent) -> Self {
        if r.is_zero() {
            return SizeValue::one();
        }
        SizeValue {
            factors: self.factors.iter().map(|&(p, q)| (p, q * r)).collect(),
        }
    }

    pub fn ln(&self) -> f64 {
        self.factors
            .iter()
            .map(|&(p, q)| ratio_f64(q) * (p as f64).ln())
            .sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|&(p, q)| (p as f64).powf(ratio_f64(q)))
            .product()
    }
}

impl fmt::Display for SizeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, q)| {
                if q.is_one() {
                    p.to_string()
                } else {
                    format!("{p}^({q})")
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

fn ratio_f64(q: Exponent) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// An exact bound `t^e · Π bⱼ^{qⱼ}` where `t` is the exact value of a
/// positive double.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeBound {
    t: f64,
    t_exp: Exponent,
    factors: BTreeMap<u128, Exponent>,
}

impl SizeBound {
    pub fn new(t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bound T must be positive and finite, got {t}"
            )));
        }
        Ok(SizeBound {
            t,
            t_exp: Exponent::one(),
            factors: BTreeMap::new(),
        })
    }

    /// The user-supplied `t`.
    pub fn base(&self) -> f64 {
        self.t
    }

    pub fn ln(&self) -> f64 {
        ratio_f64(self.t_exp) * self.t.ln()
            + self
                .factors
                .iter()
                .map(|(&b, &q)| ratio_f64(q) * (b as f64).ln())
                .sum::<f64>()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    pub fn pow(&self, r: Exponent) -> Self {
        assert!(r > Exponent::zero(), "bounds are raised to positive powers only");
        SizeBound {
            t: self.t,
            t_exp: self.t_exp * r,
            factors: self.factors.iter().map(|(&b, &q)| (b, q * r)).collect(),
        }
    }

    /// `V^{1/e}`.
    pub fn root(&self, e: u64) -> Self {
        self.pow(Exponent::new(1, e as i64))
    }

    /// `V · base^exp`.
    pub fn times_power(&self, base: u128, exp: Exponent) -> Self {
        let mut out = self.clone();
        if base != 1 && !exp.is_zero() {
            for (p, e) in factor_exactly(base) {
                let entry = out.factors.entry(p).or_insert_with(Exponent::zero);
                *entry += exp * e as i64;
                if entry.is_zero() {
                    out.factors.remove(&p);
                }
            }
        }
        out
    }

    /// `V / s^a`.
    pub fn divided_by(&self, s: &SizeValue, a: u64) -> Self {
        let mut out = self.clone();
        for &(p, q) in s.factors() {
            let entry = out.factors.entry(p).or_insert_with(Exponent::zero);
            *entry -= q * a as i64;
            if entry.is_zero() {
                out.factors.remove(&p);
            }
        }
        out
    }

    /// Exact test `n <= V^r` for `r > 0`.
    pub fn admits(&self, n: u128, r: Exponent) -> bool {
        if n == 0 {
            return true;
        }
        let t_e = self.t_exp * r;
        let exps: Vec<(u128, Exponent)> = self.factors.iter().map(|(&b, &q)| (b, q * r)).collect();
        let l = exps
            .iter()
            .fold(*t_e.denom(), |acc, (_, q)| acc.lcm(q.denom()));
        let lhs = BigRational::from_integer(BigInt::from(n)).pow(to_i32(l));
        let t = BigRational::from_float(self.t).expect("finite");
        let mut rhs = t.pow(to_i32(*(t_e * l).numer()));
        for (b, q) in exps {
            rhs *= BigRational::from_integer(BigInt::from(b)).pow(to_i32(*(q * l).numer()));
        }
        lhs <= rhs
    }

    /// Exact `floor(V^r)` for `r > 0`.
    pub fn floor_pow(&self, r: Exponent) -> u128 {
        let x = (ratio_f64(r) * self.ln()).exp();
        assert!(x < 1e36, "bound {x} is out of range");
        let nearest = x.round();
        let slack = 1e-9 * x.max(1.0);
        if x < 1e15 && (x - nearest).abs() > slack {
            return x.floor() as u128;
        }
        // Decide exactly within an interval that surely contains the answer.
        let mut lo = ((x - slack).floor() - 1.0).max(0.0) as u128;
        let mut hi = (x + slack).ceil() as u128 + 1;
        debug_assert!(self.admits(lo, r) && !self.admits(hi, r));
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.admits(mid, r) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Exact test `s <= V`.
    pub fn admits_size(&self, s: &SizeValue) -> bool {
        self.divided_by(s, 1).admits(1, Exponent::one())
    }
}

fn to_i32(k: i64) -> i32 {
    k.to_i32().expect("exponent fits in i32")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    #[test]
    fn floor_pow_on_exact_ties() {
        let b = SizeBound::new(1000.0).unwrap();
        assert_eq!(b.floor_pow(q(1, 3)), 10);
        assert_eq!(b.floor_pow(q(2, 3)), 100);
        assert_eq!(b.floor_pow(q(1, 1)), 1000);
        assert_eq!(b.floor_pow(q(1, 2)), 31);
        let b = SizeBound::new(4.0).unwrap().root(2);
        assert_eq!(b.floor_pow(q(1, 1)), 2);
        assert_eq!(b.floor_pow(q(2, 1)), 4);
        let b = SizeBound::new(2.0).unwrap().root(2);
        assert_eq!(b.floor_pow(q(2, 1)), 2);
        assert_eq!(b.floor_pow(q(4, 1)), 4);
    }

    #[test]
    fn divided_bounds_are_exact() {
        // (10^6 / 7²)^{1/2} = 1000/7
        let b = SizeBound::new(1e6)
            .unwrap()
            .divided_by(&SizeValue::root_of_int(7, 1), 2)
            .root(2);
        assert_eq!(b.floor_pow(q(1, 1)), 142);
        assert_eq!(b.floor_pow(q(2, 1)), 20408);
        // (10^6 / 8²)^{1/2} = 125 exactly
        let b = SizeBound::new(1e6)
            .unwrap()
            .divided_by(&SizeValue::root_of_int(8, 1), 2)
            .root(2);
        assert_eq!(b.floor_pow(q(1, 1)), 125);
        assert!(b.admits(125, q(1, 1)) && !b.admits(126, q(1, 1)));
    }

    #[test]
    fn size_values_multiply() {
        let s = SizeValue::root_of_int(12, 2);
        assert!((s.to_f64() - 12f64.sqrt()).abs() < 1e-12);
        let t = s.pow(q(2, 1)).mul(&SizeValue::inverse_of_int(12));
        assert!(t.is_one());
        assert_eq!(SizeValue::root_of_int(4, 2), SizeValue::root_of_int(2, 1));
    }

    #[test]
    fn admits_sizes_with_ties() {
        let b = SizeBound::new(2.0).unwrap();
        assert!(b.admits_size(&SizeValue::root_of_int(4, 2)));
        assert!(b.admits_size(&SizeValue::root_of_int(8, 3)));
        assert!(!b.admits_size(&SizeValue::root_of_int(9, 3)));
        let b = SizeBound::new(0.5).unwrap();
        assert!(b.admits_size(&SizeValue::inverse_of_int(2)));
        assert!(!b.admits_size(&SizeValue::one()));
    }

    #[test]
    fn non_dyadic_doubles_use_their_exact_value() {
        // 0.1 as a double is slightly above 1/10
        let b = SizeBound::new(0.1).unwrap();
        assert!(b.admits_size(&SizeValue::inverse_of_int(10)));
        assert_eq!(SizeBound::new(2.9999999999999996).unwrap().floor_pow(q(1, 1)), 2);
    }
}
