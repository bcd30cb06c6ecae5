//! Direct count of primitive tuples: all coordinates but one are enumerated,
//! the remaining one is counted in closed form by inclusion–exclusion over
//! the primes dividing the enumerated part, and the unit quotient is taken
//! with Burnside's lemma.

use std::collections::HashMap;

use rayon::prelude::*;

use super::lattice::Point;
use super::setup::{all_cofactor_primes, avoiding_count, ClassSetup, PrimeFinder};
use crate::arith::SpfTable;
use crate::error::{Error, Result};
use crate::number_field::FieldData;

/// Largest factor table built for the enumerated coordinates.
const SPF_LIMIT: u128 = 50_000_000;

/// The tuples counted with all coordinates outside `support` set to zero.
struct Pass<'a> {
    field: &'a FieldData,
    setup: &'a ClassSetup,
    /// Coordinate counted in closed form.
    inner: usize,
    /// Enumerated coordinates with their lattice points.
    outer: Vec<(usize, Vec<Point>)>,
    open: Option<usize>,
}

/// Estimated lattice visits for counting one class.
pub(crate) fn class_cost(setup: &ClassSetup) -> u128 {
    setup
        .unit_strata()
        .iter()
        .map(|(_, support)| support_cost(setup, support))
        .sum()
}

fn support_cost(setup: &ClassSetup, support: &[usize]) -> u128 {
    let Some(inner) = pick_inner(setup, support) else {
        return 0;
    };
    let outer: u128 = support
        .iter()
        .filter(|&&i| i != inner)
        .map(|&i| setup.coord_count(i))
        .fold(1u128, |acc, c| acc.saturating_mul(c));
    outer.saturating_add(setup.max_cofactor_norm(inner))
}

fn pick_inner(setup: &ClassSetup, support: &[usize]) -> Option<usize> {
    support.iter().copied().max_by_key(|&i| (setup.coord_count(i), i))
}

/// Number of unit orbits of tuples in `Π 𝔄^{wᵢ}` with exact weighted
/// content `𝔄` inside the class bounds; `open` forces a coordinate nonzero.
pub(crate) fn count_class(field: &FieldData, setup: &ClassSetup, open: Option<usize>) -> Result<u128> {
    let mut memo: HashMap<Vec<usize>, i128> = HashMap::new();
    let mut weighted = 0i128;
    for (phi, support) in setup.unit_strata() {
        let c = match memo.get(&support) {
            Some(&c) => c,
            None => {
                let c = count_support(field, setup, &support, open);
                memo.insert(support, c);
                c
            }
        };
        weighted += phi as i128 * c;
    }
    let w = setup.w as i128;
    if weighted % w != 0 || weighted < 0 {
        return Err(Error::Invariant(format!(
            "orbit sum {weighted} is not a nonnegative multiple of {w}"
        )));
    }
    Ok((weighted / w) as u128)
}

/// Tuples (not orbits) supported on `support`.
fn count_support(field: &FieldData, setup: &ClassSetup, support: &[usize], open: Option<usize>) -> i128 {
    if open.is_some_and(|c| !support.contains(&c)) {
        return 0;
    }
    let Some(inner) = pick_inner(setup, support) else {
        return 0;
    };
    let outer = support
        .iter()
        .filter(|&&i| i != inner)
        .map(|&i| {
            let mut pts = setup.form.points(&setup.lattices[i], setup.bounds[i]);
            if open == Some(i) {
                pts.remove(0);
            }
            (i, pts)
        })
        .collect();
    let pass = Pass {
        field,
        setup,
        inner,
        outer,
        open,
    };
    pass.run()
}

impl Pass<'_> {
    fn run(&self) -> i128 {
        let mut total = 0i128;
        let zero_outer_allowed = self.open.is_none() || self.open == Some(self.inner);
        if zero_outer_allowed {
            // only the inner coordinate is nonzero
            let primes = all_cofactor_primes(self.field, self.setup, self.inner);
            total += avoiding_count(self.field, self.setup, self.inner, &primes, &mut HashMap::new());
        }
        if self.outer.is_empty() {
            return total;
        }
        let spf_limit = self
            .outer
            .iter()
            .map(|&(i, _)| self.setup.bounds[i])
            .max()
            .unwrap_or(0)
            .min(SPF_LIMIT);
        let spf = SpfTable::new(spf_limit.max(2) as usize);
        let (first_idx, first_pts) = &self.outer[0];
        total += first_pts
            .par_iter()
            .map_init(
                || Worker {
                    finder: PrimeFinder::new(self.field, self.setup, Some(&spf)),
                    counts: HashMap::new(),
                    tuple: Vec::with_capacity(self.outer.len()),
                },
                |worker, &u0| {
                    worker.tuple.clear();
                    if u0 != (0, 0) {
                        worker.tuple.push((*first_idx, u0));
                    }
                    self.descend(worker, 1)
                },
            )
            .sum::<i128>();
        total
    }

    fn descend(&self, worker: &mut Worker<'_>, depth: usize) -> i128 {
        if depth == self.outer.len() {
            return self.leaf(worker);
        }
        let (idx, pts) = &self.outer[depth];
        let mut sum = 0i128;
        for &u in pts {
            let pushed = u != (0, 0);
            if pushed {
                worker.tuple.push((*idx, u));
            }
            sum += self.descend(worker, depth + 1);
            if pushed {
                worker.tuple.pop();
            }
        }
        sum
    }

    fn leaf(&self, worker: &mut Worker<'_>) -> i128 {
        if worker.tuple.is_empty() {
            return 0;
        }
        let primes = worker.finder.dividing_primes(&worker.tuple);
        let mut c = avoiding_count(self.field, self.setup, self.inner, &primes, &mut worker.counts);
        if primes.is_empty() && self.open != Some(self.inner) {
            c += 1;
        }
        c
    }
}

struct Worker<'a> {
    finder: PrimeFinder<'a>,
    counts: HashMap<crate::number_field::IdealRep, u128>,
    tuple: Vec<(usize, Point)>,
}
