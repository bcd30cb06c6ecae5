//! Per-class data shared by the counting engines.

use std::collections::HashMap;

use super::lattice::{prime_ideals_up_to, Lattice, NormForm, Point};
use crate::arith::{factor_with_bound, gcd_u64, iroot, isqrt, totient, divisors, SpfTable};
use crate::number_field::{FieldData, IdealRep, PrimeIdeal};
use crate::weighted_space::{Exponent, SizeBound, Weight};

/// Everything needed to count tuples for one ideal class representative `𝔄`
/// under a bound `V`: coordinate `i` ranges over `𝔄^{wᵢ}` with
/// `abs_v <= Bᵢ = ⌊(V·N𝔄)^{wᵢ}⌋`.
#[derive(Debug, Clone)]
pub(crate) struct ClassSetup {
    pub form: NormForm,
    pub rep: IdealRep,
    pub norm: u128,
    pub weights: Vec<u64>,
    pub bounds: Vec<u128>,
    pub lattices: Vec<Lattice>,
    /// Number of roots of unity.
    pub w: u64,
}

pub(crate) fn class_setups(field: &FieldData, weight: &Weight, bound: &SizeBound) -> Vec<ClassSetup> {
    let kind = field.kind();
    field
        .class_reps()
        .iter()
        .map(|rep| {
            let norm = rep.integral_norm() as u128;
            let scaled = bound.times_power(norm, Exponent::from_integer(1));
            let weights = weight.entries().to_vec();
            ClassSetup {
                form: NormForm::of(kind),
                rep: rep.clone(),
                norm,
                bounds: weights
                    .iter()
                    .map(|&wi| scaled.floor_pow(Exponent::from_integer(wi as i64)))
                    .collect(),
                lattices: weights
                    .iter()
                    .map(|&wi| Lattice::of(&rep.pow(wi as i64, kind)))
                    .collect(),
                weights,
                w: field.w() as u64,
            }
        })
        .collect()
}

impl ClassSetup {
    pub fn m(&self) -> usize {
        self.weights.len()
    }

    /// Lattice points per coordinate (zero included).
    pub fn coord_count(&self, i: usize) -> u128 {
        self.form.count(&self.lattices[i], self.bounds[i])
    }

    /// Largest `N𝔅` such that `(𝔄𝔅)^{wᵢ}` has a nonzero point within `Bᵢ`.
    pub fn max_cofactor_norm(&self, i: usize) -> u128 {
        iroot(self.bounds[i], self.weights[i] as u32) / self.norm
    }

    /// Burnside data: for each order `o | w`, the number `φ(o)` of roots of
    /// unity of that order and the coordinates they leave free (`o | wᵢ`).
    pub fn unit_strata(&self) -> Vec<(u64, Vec<usize>)> {
        divisors(self.w)
            .into_iter()
            .map(|o| {
                let support = (0..self.m()).filter(|&i| self.weights[i].is_multiple_of(o)).collect();
                (totient(o), support)
            })
            .collect()
    }

    /// Size of the stabilizer in the roots of unity of a tuple whose nonzero
    /// coordinates have the given weights.
    pub fn stabilizer(&self, nonzero_weights: impl Iterator<Item = u64>) -> u64 {
        let g = nonzero_weights.fold(0, gcd_u64);
        gcd_u64(self.w, g)
    }
}

/// A prime `𝔭` with the lattices `(𝔄𝔭)^{wᵢ}`.
#[derive(Debug, Clone)]
pub(crate) struct PrimeData {
    pub prime: PrimeIdeal,
    pub lattices: Vec<Lattice>,
}

/// Finds the primes `𝔭` for which a tuple lies in `Π (𝔄𝔭)^{wᵢ}`; caches
/// per-prime lattices. One finder per worker.
pub(crate) struct PrimeFinder<'a> {
    field: &'a FieldData,
    setup: &'a ClassSetup,
    spf: Option<&'a SpfTable>,
    cache: HashMap<u128, Vec<PrimeData>>,
}

impl<'a> PrimeFinder<'a> {
    pub fn new(field: &'a FieldData, setup: &'a ClassSetup, spf: Option<&'a SpfTable>) -> Self {
        PrimeFinder {
            field,
            setup,
            spf,
            cache: HashMap::new(),
        }
    }

    pub fn prime_data(&mut self, p: u128) -> &[PrimeData] {
        let (field, setup) = (self.field, self.setup);
        self.cache.entry(p).or_insert_with(|| {
            let kind = field.kind();
            field
                .primes_above(p)
                .into_iter()
                .map(|prime| {
                    let shifted = setup.rep.mul(&prime.ideal, kind);
                    let lattices = setup
                        .weights
                        .iter()
                        .map(|&wi| Lattice::of(&shifted.pow(wi as i64, kind)))
                        .collect();
                    PrimeData { prime, lattices }
                })
                .collect()
        })
    }

    /// Primes dividing the weighted content of the nonzero coordinates
    /// `(i, uᵢ)` beyond `𝔄`.
    pub fn dividing_primes(&mut self, coords: &[(usize, Point)]) -> Vec<PrimeData> {
        let setup = self.setup;
        // 𝔭^{wᵢ} | uᵢ·𝔄^{-wᵢ} forces p | N(uᵢ)/N𝔄^{wᵢ}
        let mut g = 0u128;
        for &(i, u) in coords {
            let reduced = setup.form.abs_v(u) / setup.norm.pow(setup.weights[i] as u32);
            g = num_integer::Integer::gcd(&g, &reduced);
            if g == 1 {
                return Vec::new();
            }
        }
        let primes: Vec<u128> = match self.spf {
            Some(t) if g <= t.limit() => t.factor(g).into_iter().map(|(p, _)| p).collect(),
            _ => factor_with_bound(g, isqrt(g) + 1)
                .expect("bound covers √g")
                .into_iter()
                .map(|(p, _)| p)
                .collect(),
        };
        let mut out = Vec::new();
        for p in primes {
            for data in self.prime_data(p) {
                if coords.iter().all(|&(i, u)| data.lattices[i].contains(u)) {
                    out.push(data.clone());
                }
            }
        }
        out.sort_by_key(|d| d.prime.norm());
        out
    }
}

/// `Σ_{S ⊆ primes} (−1)^{|S|} (L((𝔄·Π_S 𝔭)^{w_j}, B_j) − 1)`, i.e. the
/// number of nonzero `y ∈ 𝔄^{w_j}` within the bound that avoid every
/// `(𝔄𝔭)^{w_j}`. Subsets whose lattice has no nonzero point are pruned;
/// `primes` must be sorted by norm.
pub(crate) fn avoiding_count(
    field: &FieldData,
    setup: &ClassSetup,
    j: usize,
    primes: &[PrimeData],
    counts: &mut HashMap<IdealRep, u128>,
) -> i128 {
    let limit = setup.max_cofactor_norm(j);
    let mut total = 0i128;
    if setup.form.rational {
        let (b, wj) = (setup.bounds[j], setup.weights[j] as u32);
        let mut stack: Vec<(usize, u128, i128)> = vec![(0, 1, 1)];
        while let Some((start, g, sign)) = stack.pop() {
            total += sign * 2 * (b / g.pow(wj)) as i128;
            for (k, data) in primes.iter().enumerate().skip(start) {
                let n = g * data.prime.p;
                if n > limit {
                    break;
                }
                stack.push((k + 1, n, -sign));
            }
        }
        return total;
    }
    let mut stack: Vec<(usize, IdealRep, u128, i128)> = vec![(0, setup.rep.clone(), 1, 1)];
    let kind = field.kind();
    while let Some((start, ideal, norm, sign)) = stack.pop() {
        let l = *counts.entry(ideal.clone()).or_insert_with(|| {
            let lattice = Lattice::of(&ideal.pow(setup.weights[j] as i64, kind));
            setup.form.count(&lattice, setup.bounds[j])
        });
        total += sign * (l as i128 - 1);
        for (k, data) in primes.iter().enumerate().skip(start) {
            let n = norm * data.prime.norm();
            if n > limit {
                break;
            }
            stack.push((k + 1, ideal.mul(&data.prime.ideal, kind), n, -sign));
        }
    }
    total
}

/// All prime ideals that can divide a nonzero cofactor for coordinate `j`.
pub(crate) fn all_cofactor_primes(field: &FieldData, setup: &ClassSetup, j: usize) -> Vec<PrimeData> {
    let kind = field.kind();
    prime_ideals_up_to(field, setup.max_cofactor_norm(j))
        .into_iter()
        .map(|prime| {
            let shifted = setup.rep.mul(&prime.ideal, kind);
            let lattices = setup
                .weights
                .iter()
                .map(|&wi| Lattice::of(&shifted.pow(wi as i64, kind)))
                .collect();
            PrimeData { prime, lattices }
        })
        .collect()
}
