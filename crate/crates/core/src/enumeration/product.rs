//! Size histograms of a single factor and the factor-recursive count on
//! products.

use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::lattice::Point;
use super::setup::{class_setups, ClassSetup, PrimeFinder};
use crate::arith::SpfTable;
use crate::error::{Error, Result};
use crate::number_field::FieldData;
use crate::weighted_space::{SizeBound, SizeValue, Weight};

/// Exact comparison `a^{1/u} < b^{1/v}`.
fn root_less(a: u128, u: u64, b: u128, v: u64) -> bool {
    match (a.checked_pow(v as u32), b.checked_pow(u as u32)) {
        (Some(x), Some(y)) => x < y,
        _ => BigUint::from(a).pow(v as u32) < BigUint::from(b).pow(u as u32),
    }
}

/// Lattice visits needed to build a histogram.
pub(crate) fn histogram_cost(setups: &[ClassSetup]) -> u128 {
    setups
        .iter()
        .map(|s| {
            (0..s.m())
                .map(|i| s.coord_count(i))
                .fold(1u128, |acc, c| acc.saturating_mul(c))
        })
        .sum()
}

/// Number of points of each size among the points with `Size <= bound`,
/// found by enumerating every tuple. Orbits are weighted by stabilizer
/// size so that each contributes exactly one.
pub(crate) fn size_histogram(
    field: &FieldData,
    weight: &Weight,
    bound: &SizeBound,
    open: Option<usize>,
) -> Vec<(SizeValue, u128)> {
    let mut merged: HashMap<SizeValue, u128> = HashMap::new();
    for setup in class_setups(field, weight, bound) {
        for ((n, wi), weighted) in class_histogram(field, &setup, open) {
            let size = SizeValue::root_of_int(n, wi).mul(&SizeValue::inverse_of_int(setup.norm));
            *merged.entry(size).or_insert(0) += weighted;
        }
    }
    let w = field.w() as u128;
    let mut out: Vec<(SizeValue, u128)> = merged
        .into_iter()
        .map(|(s, c)| {
            debug_assert_eq!(c % w, 0);
            (s, c / w)
        })
        .collect();
    out.sort_by(|a, b| a.0.ln().total_cmp(&b.0.ln()));
    out
}

/// Map from the dominant `(abs_v, weight)` pair to the stabilizer-weighted
/// number of tuples.
fn class_histogram(field: &FieldData, setup: &ClassSetup, open: Option<usize>) -> HashMap<(u128, u64), u128> {
    let pts: Vec<Vec<Point>> = (0..setup.m())
        .map(|i| {
            let mut p = setup.form.points(&setup.lattices[i], setup.bounds[i]);
            if open == Some(i) {
                p.remove(0);
            }
            p
        })
        .collect();
    let spf_limit = setup.bounds.iter().copied().max().unwrap_or(2).clamp(2, 50_000_000);
    let spf = SpfTable::new(spf_limit as usize);
    pts[0]
        .par_iter()
        .fold(
            || (PrimeFinder::new(field, setup, Some(&spf)), HashMap::new(), Vec::new()),
            |(mut finder, mut hist, mut tuple), &u0| {
                tuple.clear();
                if u0 != (0, 0) {
                    tuple.push((0usize, u0));
                }
                walk(setup, &pts, 1, &mut tuple, &mut finder, &mut hist);
                (finder, hist, tuple)
            },
        )
        .map(|(_, hist, _)| hist)
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}

fn walk(
    setup: &ClassSetup,
    pts: &[Vec<Point>],
    depth: usize,
    tuple: &mut Vec<(usize, Point)>,
    finder: &mut PrimeFinder<'_>,
    hist: &mut HashMap<(u128, u64), u128>,
) {
    if depth == pts.len() {
        if tuple.is_empty() || !finder.dividing_primes(tuple).is_empty() {
            return;
        }
        let mut best: Option<(u128, u64)> = None;
        for &(i, u) in tuple.iter() {
            let cand = (setup.form.abs_v(u), setup.weights[i]);
            if best.is_none_or(|b| root_less(b.0, b.1, cand.0, cand.1)) {
                best = Some(cand);
            }
        }
        let stab = setup.stabilizer(tuple.iter().map(|&(i, _)| setup.weights[i]));
        *hist.entry(best.expect("nonempty")).or_insert(0) += stab as u128;
        return;
    }
    for &u in &pts[depth] {
        let pushed = u != (0, 0);
        if pushed {
            tuple.push((depth, u));
        }
        walk(setup, pts, depth + 1, tuple, finder, hist);
        if pushed {
            tuple.pop();
        }
    }
}

/// One factor of a product count: its weight, divisor coefficient and
/// optional open constraint.
#[derive(Debug, Clone)]
pub(crate) struct Factor {
    pub weight: Weight,
    pub a: u64,
    pub open: Option<usize>,
}

/// Count of product points with `Π Size(xᵢ)^{aᵢ} <= bound`. The last factor
/// is counted by `single`; the others are enumerated into size histograms.
pub(crate) fn count_product_recursive(
    field: &FieldData,
    factors: &[Factor],
    bound: &SizeBound,
    budget: &mut Budget,
    single: &dyn Fn(&Weight, &SizeBound, Option<usize>, &mut Budget) -> Result<u128>,
) -> Result<u128> {
    let (first, rest) = factors.split_first().expect("nonempty");
    let own = bound.root(first.a);
    if rest.is_empty() {
        return single(&first.weight, &own, first.open, budget);
    }
    // every point has Size >= 1, so the outer factor alone is bounded by V^{1/a}
    if own.to_f64() < 1.0 - 1e-9 {
        return Ok(0);
    }
    budget.charge(histogram_cost(&class_setups(field, &first.weight, &own)))?;
    let hist = size_histogram(field, &first.weight, &own, first.open);
    let mut total = 0u128;
    for (size, n) in hist {
        let remaining = bound.divided_by(&size, first.a);
        if remaining.to_f64() < 1.0 - 1e-9 {
            continue;
        }
        total += n * count_product_recursive(field, rest, &remaining, budget, single)?;
    }
    Ok(total)
}

/// Running total of lattice visits against the configured cap.
#[derive(Debug, Clone)]
pub(crate) struct Budget {
    pub used: u128,
    pub limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    pub fn charge(&mut self, cost: u128) -> Result<()> {
        self.used = self.used.saturating_add(cost);
        if self.used > self.limit as u128 {
            return Err(Error::BudgetExceeded {
                required: self.used,
                limit: self.limit,
            });
        }
        Ok(())
    }
}
