//! Symbol-wise Bayes state estimators and their expected distortions.

use std::fmt::Write as _;

use crate::channel::names::U0;
use crate::channel::{DistortionTable, User};
use crate::error::{Error, Result};
use crate::prob::{Alphabet, JointDistribution, Variable};

/// Relative margin below which two expected costs count as tied.
const TIE_TOL: f64 = 1e-12;

/// `(X_k, Z_k, U_k̄, V_k̄)`: the observations of transmitter `k`.
pub fn default_conditioning(k: User) -> Vec<&'static str> {
    let o = k.other();
    vec![k.input(), k.feedback(), o.common(), o.compression()]
}

/// [`default_conditioning`] plus the cooperative codeword `U0`.
pub fn extended_conditioning(k: User) -> Vec<&'static str> {
    let mut c = vec![U0];
    c.extend(default_conditioning(k));
    c
}

/// Map from conditioning tuple to reconstruction symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorTable {
    user: User,
    conditioning: Vec<Variable>,
    reconstruction: Alphabet,
    /// Row-major over `conditioning`; entries index `reconstruction`.
    table: Vec<usize>,
}

impl EstimatorTable {
    pub fn user(&self) -> User {
        self.user
    }

    pub fn conditioning(&self) -> &[Variable] {
        &self.conditioning
    }

    pub fn conditioning_names(&self) -> Vec<&str> {
        self.conditioning.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn reconstruction(&self) -> &Alphabet {
        &self.reconstruction
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    fn flat(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.conditioning)
            .fold(0, |acc, (&i, v)| acc * v.size() + i)
    }

    /// Reconstruction index for a conditioning tuple.
    pub fn estimate(&self, tuple: &[usize]) -> usize {
        self.table[self.flat(tuple)]
    }

    /// Replaces the entry for one conditioning tuple.
    pub fn with_entry(mut self, tuple: &[usize], s_hat: usize) -> Result<Self> {
        if s_hat >= self.reconstruction.size() {
            return Err(Error::Domain(format!(
                "reconstruction index {s_hat} out of range"
            )));
        }
        let f = self.flat(tuple);
        self.table[f] = s_hat;
        Ok(self)
    }

    /// CSV with one column per conditioning variable plus the estimate.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for v in &self.conditioning {
            let _ = write!(out, "{},", v.name);
        }
        let _ = writeln!(out, "{}hat", self.user.state());
        let mut idx = vec![0usize; self.conditioning.len()];
        for &est in &self.table {
            for (v, &i) in self.conditioning.iter().zip(&idx) {
                let _ = write!(out, "{},", v.alphabet.symbols()[i]);
            }
            let _ = writeln!(out, "{}", self.reconstruction.symbols()[est]);
            for ax in (0..idx.len()).rev() {
                idx[ax] += 1;
                if idx[ax] < self.conditioning[ax].size() {
                    break;
                }
                idx[ax] = 0;
            }
        }
        out
    }
}

fn user_marginal(
    joint: &JointDistribution,
    k: User,
    d: &DistortionTable,
    conditioning: &[&str],
) -> Result<JointDistribution> {
    let state = k.state();
    if conditioning.contains(&state) {
        return Err(Error::Precondition(format!(
            "conditioning set must not contain the estimated state {state}"
        )));
    }
    let n_states = joint.variable(state)?.size();
    let rows = d.user(k).matrix.len();
    if rows != n_states {
        return Err(Error::Configuration(format!(
            "distortion table for user {} has {rows} rows, state alphabet has {n_states}",
            k.number()
        )));
    }
    let mut keep: Vec<&str> = conditioning.to_vec();
    keep.push(state);
    joint.marginalize_ordered(&keep)
}

/// Minimizes `sum_s P(S_k = s | c) d_k(s, ŝ)` for every conditioning tuple
/// `c`. Ties and zero-probability tuples go to the lowest-index symbol.
pub fn optimal_estimator(
    joint: &JointDistribution,
    k: User,
    d: &DistortionTable,
    conditioning: &[&str],
) -> Result<EstimatorTable> {
    let marg = user_marginal(joint, k, d, conditioning)?;
    let dist = d.user(k);
    let n_s = marg.dims()[conditioning.len()];
    let n_hat = dist.reconstruction.size();
    let n_c = marg.len() / n_s;
    let w = marg.weights();
    let mut table = Vec::with_capacity(n_c);
    for c in 0..n_c {
        let row = &w[c * n_s..(c + 1) * n_s];
        let mut best = 0usize;
        let mut best_cost = f64::INFINITY;
        for s_hat in 0..n_hat {
            let cost: f64 = row
                .iter()
                .enumerate()
                .map(|(s, p)| p * dist.d(s, s_hat))
                .sum();
            if s_hat == 0 || cost < best_cost - TIE_TOL * best_cost.abs().max(f64::MIN_POSITIVE) {
                best = s_hat;
                best_cost = cost;
            }
        }
        table.push(best);
    }
    Ok(EstimatorTable {
        user: k,
        conditioning: marg.variables()[..conditioning.len()].to_vec(),
        reconstruction: dist.reconstruction.clone(),
        table,
    })
}

/// `E[d_k(S_k, est(C))]` under `joint`.
pub fn expected_distortion(
    joint: &JointDistribution,
    est: &EstimatorTable,
    d: &DistortionTable,
) -> Result<f64> {
    let names = est.conditioning_names();
    for (v, name) in est.conditioning.iter().zip(&names) {
        if joint.variable(name)?.alphabet != v.alphabet {
            return Err(Error::Shape {
                what: format!("alphabet of {name}"),
                expected: v.size(),
                found: joint.variable(name)?.size(),
            });
        }
    }
    let marg = user_marginal(joint, est.user, d, &names)?;
    let dist = d.user(est.user);
    let n_s = marg.dims()[names.len()];
    let w = marg.weights();
    let mut total = 0.0;
    for (c, &s_hat) in est.table.iter().enumerate() {
        for s in 0..n_s {
            total += w[c * n_s + s] * dist.d(s, s_hat);
        }
    }
    Ok(total)
}

/// Optimal distortion with the default conditioning set.
pub fn min_expected_distortion(
    joint: &JointDistribution,
    k: User,
    d: &DistortionTable,
    conditioning: &[&str],
) -> Result<f64> {
    let est = optimal_estimator(joint, k, d, conditioning)?;
    expected_distortion(joint, &est, d)
}

/// Closed form `q p_s (1 - p_s)` of the transmitter-2 distortion when
/// transmitter 1 forwards `1{Y'=1}` losslessly and `X2 = 1`.
pub fn min_distortion_formula_example2(q: f64, p_s: f64) -> f64 {
    q * p_s * (1.0 - p_s)
}
