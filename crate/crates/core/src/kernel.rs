//! Conditional probability tables `P(outputs | inputs)`.

use crate::error::{Error, Result};
use crate::prob::{Variable, NORMALIZATION_TOL};

/// Dense conditional pmf, row-major over `(inputs..., outputs...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    inputs: Vec<Variable>,
    outputs: Vec<Variable>,
    weights: Vec<f64>,
    in_len: usize,
    out_len: usize,
}

fn cell_len(vars: &[Variable]) -> usize {
    vars.iter().map(Variable::size).product()
}

fn unflatten(vars: &[Variable], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; vars.len()];
    for (slot, v) in idx.iter_mut().zip(vars).rev() {
        *slot = flat % v.size();
        flat /= v.size();
    }
    idx
}

fn flatten(vars: &[Variable], idx: &[usize]) -> usize {
    idx.iter()
        .zip(vars)
        .fold(0, |acc, (&i, v)| acc * v.size() + i)
}

impl Kernel {
    pub fn new(inputs: Vec<Variable>, outputs: Vec<Variable>, weights: Vec<f64>) -> Result<Self> {
        let in_len = cell_len(&inputs);
        let out_len = cell_len(&outputs);
        if weights.len() != in_len * out_len {
            let name = outputs
                .iter()
                .map(|v| v.name.as_str())
                .collect::<Vec<_>>()
                .join("");
            return Err(Error::Shape {
                what: format!("kernel P({name}|...)"),
                expected: in_len * out_len,
                found: weights.len(),
            });
        }
        let k = Self {
            inputs,
            outputs,
            weights,
            in_len,
            out_len,
        };
        k.check()?;
        Ok(k)
    }

    /// Builds a kernel from a function of (input index, output index).
    pub fn from_fn(
        inputs: Vec<Variable>,
        outputs: Vec<Variable>,
        f: impl Fn(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let in_len = cell_len(&inputs);
        let out_len = cell_len(&outputs);
        let mut weights = Vec::with_capacity(in_len * out_len);
        for i in 0..in_len {
            let ii = unflatten(&inputs, i);
            for o in 0..out_len {
                weights.push(f(&ii, &unflatten(&outputs, o)));
            }
        }
        Self::new(inputs, outputs, weights)
    }

    /// Kernel putting all mass on `f(input)`.
    pub fn deterministic(
        inputs: Vec<Variable>,
        outputs: Vec<Variable>,
        f: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        Self::from_fn(inputs, outputs, |i, o| if f(i) == o { 1.0 } else { 0.0 })
    }

    fn check(&self) -> Result<()> {
        for i in 0..self.in_len {
            let slice = self.slice(i);
            if let Some(bad) = slice.iter().find(|w| !w.is_finite() || **w < 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "kernel entry {bad} at {}",
                    self.describe_input(i)
                )));
            }
            let sum: f64 = slice.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::Normalization {
                    context: format!("kernel slice at {}", self.describe_input(i)),
                    sum,
                });
            }
        }
        Ok(())
    }

    /// Human-readable conditioning cell, e.g. `(S1=0, S2=1)`.
    pub fn describe_input(&self, flat: usize) -> String {
        let idx = unflatten(&self.inputs, flat);
        let parts: Vec<String> = self
            .inputs
            .iter()
            .zip(idx)
            .map(|(v, i)| format!("{}={}", v.name, v.alphabet.symbols()[i]))
            .collect();
        format!("({})", parts.join(", "))
    }

    pub fn inputs(&self) -> &[Variable] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Variable] {
        &self.outputs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn in_len(&self) -> usize {
        self.in_len
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    pub fn input_flat(&self, idx: &[usize]) -> usize {
        flatten(&self.inputs, idx)
    }

    pub fn output_flat(&self, idx: &[usize]) -> usize {
        flatten(&self.outputs, idx)
    }

    pub fn slice(&self, input_flat: usize) -> &[f64] {
        &self.weights[input_flat * self.out_len..(input_flat + 1) * self.out_len]
    }

    pub fn prob(&self, input: &[usize], output: &[usize]) -> f64 {
        self.weights[self.input_flat(input) * self.out_len + self.output_flat(output)]
    }

    /// True when every slice is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0 || w == 1.0)
    }
}
