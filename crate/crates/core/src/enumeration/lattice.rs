//! Lattice points of integral ideals inside norm balls.

use crate::arith::{isqrt, SpfTable};
use crate::number_field::{FieldData, FieldKind, IdealRep, PrimeIdeal};

/// An integral ideal as a sublattice of the ring of integers: `a·ℤ` over ℚ
/// (`c = 0`), or the lattice with Hermite basis `a`, `b + c·ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Lattice {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

/// Integral element `x + y·ω` as raw coordinates.
pub(crate) type Point = (i128, i128);

impl Lattice {
    pub fn of(ideal: &IdealRep) -> Self {
        match *ideal {
            IdealRep::Rational { num, den } => {
                assert_eq!(den, 1, "integral ideal expected");
                Lattice { a: num, b: 0, c: 0 }
            }
            IdealRep::Quadratic { den, a, b, c } => {
                assert_eq!(den, 1, "integral ideal expected");
                Lattice { a, b, c }
            }
        }
    }

    pub fn contains(&self, (x, y): Point) -> bool {
        if self.c == 0 {
            return y == 0 && x % self.a == 0;
        }
        if y % self.c != 0 {
            return false;
        }
        (x - (y / self.c) * self.b) % self.a == 0
    }
}

/// Shape of the norm form `x² + t·xy + n·y²` of the ring of integers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NormForm {
    pub rational: bool,
    pub t: i128,
    pub n: i128,
}

impl NormForm {
    pub fn of(kind: FieldKind) -> Self {
        let (t, n) = kind.omega_poly();
        NormForm {
            rational: kind.is_rational(),
            t,
            n,
        }
    }

    /// `|x|` over ℚ, `N(x + yω)` otherwise.
    pub fn abs_v(&self, (x, y): Point) -> u128 {
        if self.rational {
            x.unsigned_abs()
        } else {
            (x * x + self.t * x * y + self.n * y * y) as u128
        }
    }

    /// |disc| = 4n − t².
    fn disc(&self) -> i128 {
        4 * self.n - self.t * self.t
    }

    /// Range of `x` with `(x, y)` in the lattice row and `abs_v <= bound`,
    /// as the first admissible value and the number of admissible values.
    fn row(&self, l: &Lattice, v: i128, bound: u128) -> Option<(i128, i128)> {
        let y = v * l.c;
        let rest = 4 * bound as i128 - self.disc() * y * y;
        if rest < 0 {
            return None;
        }
        let r = isqrt(rest as u128) as i128;
        // |2x + t·y| <= r
        let lo = (-r - self.t * y + 1).div_euclid(2);
        let hi = (r - self.t * y).div_euclid(2);
        let residue = (v * l.b).rem_euclid(l.a);
        let first = lo + (residue - lo).rem_euclid(l.a);
        if first > hi {
            return Some((first, 0));
        }
        Some((first, (hi - first) / l.a + 1))
    }

    fn max_row(&self, l: &Lattice, bound: u128) -> i128 {
        // D·(v·c)² <= 4·bound
        isqrt(4 * bound / (self.disc() as u128 * (l.c * l.c) as u128)) as i128
    }

    /// Number of lattice points (zero included) with `abs_v <= bound`.
    pub fn count(&self, l: &Lattice, bound: u128) -> u128 {
        if self.rational {
            return 2 * (bound / l.a as u128) + 1;
        }
        let vmax = self.max_row(l, bound);
        (-vmax..=vmax)
            .filter_map(|v| self.row(l, v, bound))
            .map(|(_, k)| k as u128)
            .sum()
    }

    /// All lattice points with `abs_v <= bound`, zero first.
    pub fn points(&self, l: &Lattice, bound: u128) -> Vec<Point> {
        let mut out = vec![(0, 0)];
        if self.rational {
            let k = (bound / l.a as u128) as i128;
            for j in 1..=k {
                out.push((j * l.a, 0));
                out.push((-j * l.a, 0));
            }
            return out;
        }
        let vmax = self.max_row(l, bound);
        for v in -vmax..=vmax {
            if let Some((first, k)) = self.row(l, v, bound) {
                for s in 0..k {
                    let p = (first + s * l.a, v * l.c);
                    if p != (0, 0) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

/// All prime ideals of norm at most `limit`, ordered by norm.
pub(crate) fn prime_ideals_up_to(field: &FieldData, limit: u128) -> Vec<PrimeIdeal> {
    if limit < 2 {
        return Vec::new();
    }
    let table = SpfTable::new(limit as usize);
    let mut out: Vec<PrimeIdeal> = table
        .primes_up_to(limit)
        .flat_map(|p| field.primes_above(p))
        .filter(|q| q.norm() <= limit)
        .collect();
    out.sort_by_key(|q| q.norm());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(form: &NormForm, l: &Lattice, bound: u128) -> u128 {
        let r = 2 * bound as i128 + 2;
        let mut k = 0;
        for x in -r..=r {
            for y in -r..=r {
                if form.abs_v((x, y)) <= bound && l.contains((x, y)) {
                    k += 1;
                }
            }
        }
        k
    }

    #[test]
    fn counts_match_brute_force() {
        for d in [1u64, 2, 3, 5, 7, 15] {
            let field = FieldData::imag_quadratic(d).unwrap();
            let kind = field.kind();
            let form = NormForm::of(kind);
            let mut ideals = vec![IdealRep::unit(kind), IdealRep::from_int(2, kind)];
            ideals.extend(field.class_reps().iter().cloned());
            ideals.extend(prime_ideals_up_to(&field, 7).into_iter().map(|q| q.ideal));
            for ideal in ideals {
                let l = Lattice::of(&ideal);
                for bound in [0u128, 1, 2, 5, 10, 23] {
                    let c = form.count(&l, bound);
                    assert_eq!(c, brute_count(&form, &l, bound), "d={d} {ideal} B={bound}");
                    let pts = form.points(&l, bound);
                    assert_eq!(pts.len() as u128, c);
                    assert!(pts.iter().all(|&p| l.contains(p) && form.abs_v(p) <= bound));
                }
            }
        }
    }

    #[test]
    fn rational_lattices() {
        let form = NormForm::of(FieldKind::Rational);
        let l = Lattice::of(&IdealRep::from_int(3, FieldKind::Rational));
        assert_eq!(form.count(&l, 10), 7);
        assert_eq!(form.points(&l, 10).len(), 7);
    }

    #[test]
    fn gaussian_primes() {
        let field = FieldData::imag_quadratic(1).unwrap();
        let norms: Vec<u128> = prime_ideals_up_to(&field, 13).iter().map(|q| q.norm()).collect();
        assert_eq!(norms, vec![2, 5, 5, 9, 13, 13]);
    }
}
