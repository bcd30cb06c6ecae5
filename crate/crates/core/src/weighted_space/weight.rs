use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weight vector `W = (w₁, …, w_m)`.
///
/// [`Weight::new`] demands well-formedness. [`Weight::jointly_coprime`] also
/// admits weights such as `(1,2)` whose entries are only coprime as a whole;
/// the orbit description of rational points, and hence all counting, needs
/// nothing more.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    entries: Vec<u64>,
    total: u64,
    w_min: u64,
}

/// Whether every `(m−1)`-subset of the entries is coprime. For `m = 1`
/// the single entry must be 1.
pub fn is_well_formed(entries: &[u64]) -> Result<bool> {
    validate_entries(entries)?;
    Ok(ill_formed_subset(entries).is_none())
}

fn validate_entries(entries: &[u64]) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::EmptyWeight);
    }
    if entries.contains(&0) {
        return Err(Error::NonPositiveWeight(entries.to_vec()));
    }
    Ok(())
}

/// First `(m−1)`-subset with a nontrivial gcd, with that gcd.
fn ill_formed_subset(entries: &[u64]) -> Option<(Vec<u64>, u64)> {
    if entries.len() == 1 {
        return (entries[0] != 1).then(|| (entries.to_vec(), entries[0]));
    }
    (0..entries.len()).rev().find_map(|skip| {
        let subset: Vec<u64> = entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &w)| w)
            .collect();
        let g = subset.iter().fold(0u64, |acc, &w| acc.gcd(&w));
        (g != 1).then_some((subset, g))
    })
}

impl Weight {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        validate_entries(&entries)?;
        if let Some((subset, gcd)) = ill_formed_subset(&entries) {
            return Err(Error::NotWellFormed {
                weights: entries,
                subset,
                gcd,
            });
        }
        Ok(Weight::from_checked(entries))
    }

    /// Accept any weight whose entries have gcd 1.
    pub fn jointly_coprime(entries: Vec<u64>) -> Result<Self> {
        validate_entries(&entries)?;
        let gcd = entries.iter().fold(0u64, |acc, &w| acc.gcd(&w));
        if gcd != 1 {
            return Err(Error::NotWellFormed {
                subset: entries.clone(),
                weights: entries,
                gcd,
            });
        }
        Ok(Weight::from_checked(entries))
    }

    fn from_checked(entries: Vec<u64>) -> Self {
        let total = entries.iter().sum();
        let w_min = *entries.iter().min().expect("nonempty");
        Weight {
            entries,
            total,
            w_min,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        ill_formed_subset(&self.entries).is_none()
    }

    /// The weight `(1, …, 1)` of ordinary projective `n`-space.
    pub fn projective(n: usize) -> Self {
        Weight::new(vec![1; n + 1]).expect("all-ones weight is well-formed")
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    /// |W| = Σ wᵢ.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn w_min(&self) -> u64 {
        self.w_min
    }

    pub fn w_max(&self) -> u64 {
        *self.entries.iter().max().expect("nonempty")
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// `"1,1,2"`.
    fn from_str(s: &str) -> Result<Self> {
        Weight::new(parse_u64_list(s)?)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("`{t}` is not a nonnegative integer in `{s}`")))
        })
        .collect()
}

/// Parse `"1,1:1,2,3"` into one weight per `:`-separated factor.
pub fn parse_weight_list(s: &str) -> Result<Vec<Weight>> {
    s.split(':').map(Weight::from_str).collect()
}

/// Effective divisor class `(a₁, …, a_k)` on a product of weighted spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct DivisorClass {
    a: Vec<u64>,
}

impl DivisorClass {
    pub fn new(a: Vec<u64>) -> Result<Self> {
        if a.is_empty() || a.iter().all(|&x| x == 0) {
            return Err(Error::InvalidInput(format!(
                "divisor class {a:?} is not effective (needs a positive entry)"
            )));
        }
        Ok(DivisorClass { a })
    }

    /// `(|W₁|, …, |W_k|)`.
    pub fn anticanonical(weights: &[Weight]) -> Self {
        DivisorClass {
            a: weights.iter().map(Weight::total).collect(),
        }
    }

    pub fn single(e: u64) -> Result<Self> {
        DivisorClass::new(vec![e])
    }

    pub fn entries(&self) -> &[u64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

impl TryFrom<Vec<u64>> for DivisorClass {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        DivisorClass::new(v)
    }
}

impl From<DivisorClass> for Vec<u64> {
    fn from(d: DivisorClass) -> Vec<u64> {
        d.a
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DivisorClass::new(parse_u64_list(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formedness_examples() {
        assert!(is_well_formed(&[1, 1, 2]).unwrap());
        assert!(!is_well_formed(&[2, 2, 3]).unwrap());
        assert!(is_well_formed(&[2, 3, 5]).unwrap());
        assert!(is_well_formed(&[1]).unwrap());
        assert!(!is_well_formed(&[2]).unwrap());
        assert!(!is_well_formed(&[1, 2]).unwrap());
        assert!(is_well_formed(&[1, 1]).unwrap());
        assert!(!is_well_formed(&[6, 10, 15]).unwrap());
        assert!(!is_well_formed(&[1, 2, 4]).unwrap());
        assert_eq!(is_well_formed(&[]), Err(Error::EmptyWeight));
    }

    #[test]
    fn error_names_the_offending_subset() {
        match Weight::new(vec![2, 2, 3]) {
            Err(Error::NotWellFormed { subset, gcd, .. }) => {
                assert_eq!(subset, vec![2, 2]);
                assert_eq!(gcd, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cached_totals() {
        let w: Weight = "1,2,3".parse().unwrap();
        assert_eq!((w.m(), w.total(), w.w_min(), w.w_max()), (3, 6, 1, 3));
        assert_eq!(w.to_string(), "(1,2,3)");
        assert!("1,,2".parse::<Weight>().is_err());
        assert!("1,0".parse::<Weight>().is_err());
    }

    #[test]
    fn weight_lists_and_divisors() {
        let ws = parse_weight_list("1,1:1,2,3").unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(DivisorClass::anticanonical(&ws).entries(), &[2, 6]);
        assert!(DivisorClass::new(vec![0, 0]).is_err());
        assert!(DivisorClass::new(vec![0, 1]).is_ok());
    }

    #[test]
    fn jointly_coprime_weights() {
        let w = Weight::jointly_coprime(vec![1, 2]).unwrap();
        assert!(!w.is_well_formed());
        assert_eq!(w.total(), 3);
        assert!(Weight::jointly_coprime(vec![2, 4]).is_err());
        assert!(Weight::new(vec![1, 2]).is_err());
    }
}
