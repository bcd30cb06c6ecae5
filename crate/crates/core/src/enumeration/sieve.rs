//! Möbius inversion over integral ideals: tuples with exact content `𝔄` are
//! counted as `Σ μ(𝔅)·#{tuples in Π (𝔄𝔅)^{wᵢ}}`, independently of the
//! per-tuple prime detection used by the direct engine.

use super::lattice::Lattice;
use super::setup::ClassSetup;
use crate::error::{Error, Result};
use crate::number_field::{integral_ideals_up_to, moebius_ideal, FieldData};

/// Ideals scanned by the sieve for one class.
pub(crate) fn class_cost(field: &FieldData, setup: &ClassSetup) -> u128 {
    let x = max_norm(setup);
    if field.kind().is_rational() {
        x
    } else {
        x.saturating_mul(x)
    }
}

fn max_norm(setup: &ClassSetup) -> u128 {
    (0..setup.m())
        .map(|i| setup.max_cofactor_norm(i))
        .max()
        .unwrap_or(0)
}

pub(crate) fn count_class(field: &FieldData, setup: &ClassSetup, open: Option<usize>) -> Result<u128> {
    let kind = field.kind();
    let strata = setup.unit_strata();
    let x = max_norm(setup);
    let mut weighted = 0i128;
    for b in integral_ideals_up_to(field, x as u64) {
        let mu = moebius_ideal(field, &b)?;
        if mu == 0 {
            continue;
        }
        let shifted = setup.rep.mul(&b, kind);
        let counts: Vec<i128> = setup
            .weights
            .iter()
            .zip(&setup.bounds)
            .map(|(&wi, &bi)| {
                let l = Lattice::of(&shifted.pow(wi as i64, kind));
                setup.form.count(&l, bi) as i128
            })
            .collect();
        let mut term = 0i128;
        for (phi, support) in &strata {
            // tuples supported on `support`, not all zero (or with the open
            // coordinate nonzero)
            let fixed = match open {
                Some(c) if !support.contains(&c) => 0,
                Some(c) => (counts[c] - 1) * support.iter().filter(|&&i| i != c).map(|&i| counts[i]).product::<i128>(),
                None => support.iter().map(|&i| counts[i]).product::<i128>() - 1,
            };
            term += *phi as i128 * fixed;
        }
        weighted += mu as i128 * term;
    }
    let w = setup.w as i128;
    if weighted % w != 0 || weighted < 0 {
        return Err(Error::Invariant(format!(
            "sieved orbit sum {weighted} is not a nonnegative multiple of {w}"
        )));
    }
    Ok((weighted / w) as u128)
}
