//! Volume of the fundamental domain `𝔅_W(1)` of the weighted unit ball
//! modulo units: the closed form, and a Monte-Carlo estimate used as an
//! independent check of it.
//!
//! For unit rank at most one the region is sampled from a box. Write
//! `ρ_v = max_i |Z_{v,i}|_v^{1/wᵢ}`, `a = log ρ₁`, `b = log ρ₂`. The domain
//! conditions are `a + b <= 0` and `0 <= (N₂a − N₁b)/N < R`. Since
//! `−b >= a`, the second gives `N·a < N·R`, so `ρ₁ < e^R`; and `b > 0` would
//! force `a > 0 > −a >= b`, so `ρ₂ <= 1`. Hence `|Z_{1,i}|_{v₁} <= e^{R·wᵢ}`
//! and `|Z_{2,i}|_{v₂} <= 1`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number_field::FieldData;
use crate::weighted_space::Weight;

/// Samples per chunk; each chunk has its own random stream, so results do
/// not depend on the number of workers.
const CHUNK: u64 = 1 << 16;

pub const MIN_SAMPLES: u64 = 10_000;

/// `2^{m·r₁} π^{m·r₂} R |W|^{r₁+r₂−1}`.
pub fn fundamental_volume(r1: u32, r2: u32, regulator: f64, weight: &Weight) -> Result<f64> {
    if r1 + r2 == 0 {
        return Err(Error::InvalidInput("need at least one archimedean place".into()));
    }
    if !(regulator > 0.0 && regulator.is_finite()) {
        return Err(Error::InvalidInput(format!("regulator must be positive, got {regulator}")));
    }
    let m = weight.m() as i32;
    Ok(2f64.powi(m * r1 as i32)
        * PI.powi(m * r2 as i32)
        * regulator
        * (weight.total() as f64).powi(r1 as i32 + r2 as i32 - 1))
}

/// Logarithmic embedding data for a field with unit rank `r₁ + r₂ − 1 <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitLatticeFrame {
    pub r1: u32,
    pub r2: u32,
    pub regulator: f64,
    /// Local degrees `N_v`: real places first, then complex ones.
    pub local_degrees: Vec<u32>,
    /// Log vectors of the fundamental units, in the trace-zero hyperplane.
    pub units: Vec<Vec<f64>>,
}

impl UnitLatticeFrame {
    pub fn new(r1: u32, r2: u32, regulator: f64) -> Result<Self> {
        if r1 + r2 == 0 {
            return Err(Error::InvalidInput("need at least one archimedean place".into()));
        }
        let rank = r1 + r2 - 1;
        if rank > 1 {
            return Err(Error::UnsupportedRank(rank));
        }
        if !(regulator > 0.0 && regulator.is_finite()) {
            return Err(Error::InvalidInput(format!("regulator must be positive, got {regulator}")));
        }
        let local_degrees: Vec<u32> = (0..r1).map(|_| 1).chain((0..r2).map(|_| 2)).collect();
        let units = if rank == 1 {
            vec![vec![regulator, -regulator]]
        } else {
            Vec::new()
        };
        Ok(UnitLatticeFrame {
            r1,
            r2,
            regulator,
            local_degrees,
            units,
        })
    }

    pub fn of_field(field: &FieldData) -> Result<Self> {
        UnitLatticeFrame::new(field.r1(), field.r2(), field.regulator())
    }

    pub fn rank(&self) -> usize {
        self.units.len()
    }

    pub fn degree(&self) -> u32 {
        self.local_degrees.iter().sum()
    }

    /// Projection onto the trace-zero hyperplane along `(N_v)`.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        let shift = y.iter().sum::<f64>() / self.degree() as f64;
        y.iter()
            .zip(&self.local_degrees)
            .map(|(yv, &nv)| yv - shift * nv as f64)
            .collect()
    }

    /// Dual functional `ǔ_j` on the hyperplane.
    pub fn dual(&self, j: usize, y: &[f64]) -> f64 {
        assert!(j < self.rank());
        y[0] / self.units[j][0]
    }

    /// Whether a log vector projects into the fundamental parallelotope.
    pub fn in_domain(&self, y: &[f64]) -> bool {
        let p = self.project(y);
        (0..self.rank()).all(|j| {
            let c = self.dual(j, &p);
            (0.0..1.0).contains(&c)
        })
    }

    /// Per-place caps on `ρ_v` (see the module notes).
    fn rho_caps(&self) -> Vec<f64> {
        match self.rank() {
            0 => vec![1.0],
            _ => vec![self.regulator.exp(), 1.0],
        }
    }
}

/// Monte-Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
    pub box_volume: f64,
}

/// Estimate the volume of `{Z : Π_v ρ_v <= 1, pr(η(Z)) ∈ F}` by uniform
/// sampling of a box containing it.
pub fn monte_carlo_volume(frame: &UnitLatticeFrame, weight: &Weight, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let w = weight.entries();
    let caps = frame.rho_caps();
    // half-widths of the sampling box per place and coordinate; a complex
    // coordinate is sampled in a square
    let half: Vec<Vec<f64>> = caps
        .iter()
        .zip(&frame.local_degrees)
        .map(|(&cap, &nv)| w.iter().map(|&wi| cap.powf(wi as f64 / nv as f64)).collect())
        .collect();
    let box_volume: f64 = half
        .iter()
        .zip(&frame.local_degrees)
        .map(|(hs, &nv)| hs.iter().map(|h| (2.0 * h).powi(nv as i32)).product::<f64>())
        .product();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let n = CHUNK.min(samples - k * CHUNK);
            let mut logs = vec![0.0; frame.local_degrees.len()];
            let mut hits = 0u64;
            for _ in 0..n {
                for (v, (&nv, hs)) in frame.local_degrees.iter().zip(&half).enumerate() {
                    let mut rho = 0.0f64;
                    for (&wi, &h) in w.iter().zip(hs) {
                        let abs_v = if nv == 1 {
                            rng.gen_range(-h..h).abs()
                        } else {
                            let (x, y) = (rng.gen_range(-h..h), rng.gen_range(-h..h));
                            x * x + y * y
                        };
                        rho = rho.max(abs_v.powf(1.0 / wi as f64));
                    }
                    logs[v] = rho.ln();
                }
                if logs.iter().sum::<f64>() <= 0.0 && frame.in_domain(&logs) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        estimate: box_volume * p,
        stderr: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        hits,
        box_volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        Weight::jointly_coprime(s.split(',').map(|x| x.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(fundamental_volume(1, 0, 1.0, &w("1,1,2")).unwrap(), 8.0);
        assert!((fundamental_volume(0, 1, 1.0, &w("1,1")).unwrap() - PI * PI).abs() < 1e-12);
        let r = (1.0 + 2f64.sqrt()).ln();
        assert!((fundamental_volume(2, 0, r, &w("1,2")).unwrap() - 48.0 * r).abs() < 1e-12);
    }

    #[test]
    fn dual_basis() {
        let f = UnitLatticeFrame::new(2, 0, 0.75).unwrap();
        assert!((f.dual(0, &f.units[0]) - 1.0).abs() < 1e-12);
        let p = f.project(&[1.0, 1.0]);
        assert!(p.iter().all(|x| x.abs() < 1e-12));
        assert_eq!(UnitLatticeFrame::new(3, 0, 1.0), Err(Error::UnsupportedRank(2)));
    }

    #[test]
    fn full_box_when_rank_is_zero() {
        let f = UnitLatticeFrame::new(1, 0, 1.0).unwrap();
        let v = monte_carlo_volume(&f, &w("1,1,2"), 20_000, 7).unwrap();
        assert_eq!(v.hits, 20_000);
        assert_eq!(v.estimate, 8.0);
        assert!(monte_carlo_volume(&f, &w("1,1"), 100, 7).is_err());
    }
}
