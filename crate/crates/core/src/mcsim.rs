//! Monte Carlo check of analytic expected distortions.
//!
//! Draws use xoshiro256++ (state update `t = s1 << 17`, output
//! `rotl(s0 + s3, 23) + s0`, rotation `rotl(s3, 45)`) seeded from a 64-bit
//! seed through SplitMix64 (increment `0x9E3779B97F4A7C15`, multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`). Uniforms are the top 53
//! bits of each output scaled by `2^-53`.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::channel::DistortionTable;
use crate::error::{Error, Result};
use crate::estimator::EstimatorTable;
use crate::prob::{JointDistribution, Variable};

/// I.i.d. draws from a joint, stored as flat tensor indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub n: usize,
    pub seed: u64,
    variables: Vec<Variable>,
    dims: Vec<usize>,
    cells: Vec<usize>,
}

impl SampleBatch {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    /// Flat index of each draw in the source tensor.
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Draw `i` as one symbol index per variable.
    pub fn draw(&self, i: usize) -> Vec<usize> {
        let mut flat = self.cells[i];
        let mut idx = vec![0; self.dims.len()];
        for (slot, &d) in idx.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        idx
    }

    fn axis(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

/// Inverse-CDF sampling over the flattened tensor.
pub fn sample_joint(joint: &JointDistribution, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let mut acc = 0.0;
    let cdf: Vec<f64> = joint
        .weights()
        .iter()
        .map(|&w| {
            acc += w;
            acc
        })
        .collect();
    let last = joint
        .weights()
        .iter()
        .rposition(|&w| w > 0.0)
        .ok_or_else(|| Error::InvalidDistribution("joint has no mass".into()))?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let cells = (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect();
    Ok(SampleBatch {
        n,
        seed,
        variables: joint.variables().to_vec(),
        dims: joint.dims().to_vec(),
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Empirical {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

/// Sample mean of `d_k(S_k, est(c))` over a batch and its standard error.
pub fn empirical_distortion(
    batch: &SampleBatch,
    est: &EstimatorTable,
    d: &DistortionTable,
) -> Result<Empirical> {
    let k = est.user();
    let s_axis = batch.axis(k.state())?;
    let mut c_axes = Vec::new();
    for v in est.conditioning() {
        let a = batch.axis(&v.name)?;
        if batch.variables[a].alphabet != v.alphabet {
            return Err(Error::Shape {
                what: format!("alphabet of {}", v.name),
                expected: v.size(),
                found: batch.variables[a].size(),
            });
        }
        c_axes.push(a);
    }
    let dist = d.user(k);
    let (mut sum, mut sq) = (0.0, 0.0);
    let mut tuple = vec![0; c_axes.len()];
    for i in 0..batch.n {
        let draw = batch.draw(i);
        for (t, &a) in tuple.iter_mut().zip(&c_axes) {
            *t = draw[a];
        }
        let x = dist.d(draw[s_axis], est.estimate(&tuple));
        sum += x;
        sq += x * x;
    }
    let n = batch.n as f64;
    let mean = sum / n;
    let var = if batch.n > 1 {
        ((sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(Empirical {
        mean,
        std_error: (var / n).sqrt(),
        n: batch.n,
    })
}
