//! Dense probability tensors over named finite variables.
//!
//! Every tensor is stored row-major in the declaration order of its
//! variables, first variable slowest-varying. Information measures are in
//! bits.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a valid distribution.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Mutual-information values in `[-MI_CLAMP, 0)` are reported as zero.
pub const MI_CLAMP: f64 = 1e-10;

/// A finite, ordered alphabet of labelled symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    name: String,
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(name: &str, symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet {
                name: name.to_string(),
                reason: "alphabet must contain at least one symbol".into(),
            });
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet {
                    name: name.to_string(),
                    reason: format!("symbol `{s}` appears twice"),
                });
            }
        }
        Ok(Self {
            name: name.to_string(),
            symbols,
        })
    }

    /// Alphabet `{0, 1, ..., size-1}` labelled by decimal digits.
    pub fn range(name: &str, size: usize) -> Self {
        assert!(size >= 1, "alphabet `{name}` must be non-empty");
        Self {
            name: name.to_string(),
            symbols: (0..size).map(|i| i.to_string()).collect(),
        }
    }

    pub fn binary(name: &str) -> Self {
        Self::range(name, 2)
    }

    pub fn singleton(name: &str, symbol: &str) -> Self {
        Self {
            name: name.to_string(),
            symbols: vec![symbol.to_string()],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn renamed(&self, name: &str) -> Self {
        Self {
            name: name.to_string(),
            symbols: self.symbols.clone(),
        }
    }
}

/// A named random variable with its alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub alphabet: Alphabet,
}

impl Variable {
    pub fn new(name: &str, alphabet: Alphabet) -> Self {
        Self {
            name: name.to_string(),
            alphabet,
        }
    }

    pub fn size(&self) -> usize {
        self.alphabet.size()
    }
}

/// Findings of [`JointDistribution::validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Flat indices and values of negative entries.
    pub negative: Vec<(usize, f64)>,
    /// Flat indices of NaN or infinite entries.
    pub non_finite: Vec<usize>,
    /// `1 - sum`, meaningful when `normalization_error` is set.
    pub deficit: f64,
    pub normalization_error: bool,
}

impl Diagnostics {
    pub fn of(weights: &[f64]) -> Self {
        let mut d = Diagnostics::default();
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                d.non_finite.push(i);
                continue;
            }
            if w < 0.0 {
                d.negative.push((i, w));
            }
            sum += w;
        }
        d.deficit = 1.0 - sum;
        d.normalization_error = d.deficit.abs() > NORMALIZATION_TOL;
        d
    }

    pub fn is_clean(&self) -> bool {
        self.negative.is_empty() && self.non_finite.is_empty() && !self.normalization_error
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "ok");
        }
        let mut parts = Vec::new();
        if !self.negative.is_empty() {
            let idx: Vec<String> = self
                .negative
                .iter()
                .map(|(i, w)| format!("{i} ({w:e})"))
                .collect();
            parts.push(format!("negative entries at {}", idx.join(", ")));
        }
        if !self.non_finite.is_empty() {
            parts.push(format!("non-finite entries at {:?}", self.non_finite));
        }
        if self.normalization_error {
            parts.push(format!("normalization deficit {}", self.deficit));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Labelled dense probability tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    vars: Vec<Variable>,
    dims: Vec<usize>,
    weights: Vec<f64>,
}

impl JointDistribution {
    /// Builds a tensor checking only shape and name uniqueness.
    pub fn from_raw(vars: Vec<Variable>, weights: Vec<f64>) -> Result<Self> {
        if vars.len() > 64 {
            return Err(Error::Configuration(format!(
                "at most 64 variables supported, got {}",
                vars.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let dims: Vec<usize> = vars.iter().map(Variable::size).collect();
        let expected: usize = dims.iter().product();
        if expected != weights.len() {
            return Err(Error::Shape {
                what: "joint distribution weights".into(),
                expected,
                found: weights.len(),
            });
        }
        Ok(Self {
            vars,
            dims,
            weights,
        })
    }

    /// Builds a validated distribution: non-negative, finite, normalized.
    pub fn new(vars: Vec<Variable>, weights: Vec<f64>) -> Result<Self> {
        let joint = Self::from_raw(vars, weights)?;
        let diag = joint.validate();
        if !diag.is_clean() {
            return Err(Error::InvalidDistribution(diag.to_string()));
        }
        Ok(joint)
    }

    /// Distribution over a single variable.
    pub fn single(name: &str, alphabet: Alphabet, pmf: Vec<f64>) -> Result<Self> {
        Self::new(vec![Variable::new(name, alphabet)], pmf)
    }

    pub fn validate(&self) -> Diagnostics {
        Diagnostics::of(&self.weights)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn axis(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn variable(&self, name: &str) -> Result<&Variable> {
        Ok(&self.vars[self.axis(name)?])
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v.name == name)
    }

    /// Row-major flat offset of a multi-index.
    pub fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        index
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Multi-index of a row-major flat offset.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (slot, &d) in idx.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        idx
    }

    pub fn prob(&self, index: &[usize]) -> f64 {
        self.weights[self.flat_index(index)]
    }

    /// Probability of the event `name_i = symbol_i` for all listed pairs.
    pub fn prob_of(&self, event: &[(&str, &str)]) -> Result<f64> {
        let names: Vec<&str> = event.iter().map(|(n, _)| *n).collect();
        let marg = self.marginalize_ordered(&names)?;
        let mut idx = Vec::with_capacity(event.len());
        for (v, (_, sym)) in marg.vars.iter().zip(event) {
            idx.push(
                v.alphabet
                    .index_of(sym)
                    .ok_or_else(|| Error::Name(format!("{}={sym}", v.name)))?,
            );
        }
        Ok(marg.prob(&idx))
    }

    fn axes_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut axes = Vec::with_capacity(names.len());
        for n in names {
            let a = self.axis(n)?;
            if axes.contains(&a) {
                return Err(Error::DuplicateVariable(n.to_string()));
            }
            axes.push(a);
        }
        Ok(axes)
    }

    /// Sums out every variable not in `keep`. The result lists the kept
    /// variables in this distribution's order; an empty `keep` yields the
    /// zero-variable scalar holding the total mass.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointDistribution> {
        let mut axes = self.axes_of(keep)?;
        axes.sort_unstable();
        Ok(self.marginal_over_axes(&axes))
    }

    /// Like [`marginalize`](Self::marginalize) but lists the kept variables
    /// in the order given.
    pub fn marginalize_ordered(&self, keep: &[&str]) -> Result<JointDistribution> {
        let axes = self.axes_of(keep)?;
        Ok(self.marginal_over_axes(&axes))
    }

    fn marginal_over_axes(&self, axes: &[usize]) -> JointDistribution {
        let (dims, weights) = project_sum(&self.dims, &self.weights, axes);
        JointDistribution {
            vars: axes.iter().map(|&a| self.vars[a].clone()).collect(),
            dims,
            weights,
        }
    }

    fn disjoint_masks(&self, sets: &[&[&str]]) -> Result<Vec<u64>> {
        let mut seen = 0u64;
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            let mut m = 0u64;
            for n in *set {
                let bit = 1u64 << self.axis(n)?;
                if seen & bit != 0 {
                    return Err(Error::OverlappingSets(n.to_string()));
                }
                seen |= bit;
                m |= bit;
            }
            masks.push(m);
        }
        Ok(masks)
    }

    /// `I(A;B|C)` in bits. `c` may be empty.
    pub fn conditional_mutual_information(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        InfoCache::new(self).cmi(a, b, c)
    }

    pub fn mutual_information(&self, a: &[&str], b: &[&str]) -> Result<f64> {
        self.conditional_mutual_information(a, b, &[])
    }

    /// `H(A|C)` in bits.
    pub fn entropy(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        InfoCache::new(self).entropy(a, given)
    }
}

/// Sums a row-major tensor onto `axes` (output in the order given).
pub(crate) fn project_sum(dims: &[usize], weights: &[f64], axes: &[usize]) -> (Vec<usize>, Vec<f64>) {
    let out_dims: Vec<usize> = axes.iter().map(|&a| dims[a]).collect();
    let out_len: usize = out_dims.iter().product();
    let mut out = vec![0.0; out_len];
    let map = index_map(dims, axes);
    for (w, &o) in weights.iter().zip(&map) {
        out[o] += *w;
    }
    (out_dims, out)
}

/// For every cell of a tensor with `dims`, its flat offset in the
/// projection onto `axes` (projection laid out in the order of `axes`).
pub(crate) fn index_map(dims: &[usize], axes: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let len: usize = dims.iter().product();
    let mut contrib = vec![0usize; n];
    let mut stride = 1;
    for &a in axes.iter().rev() {
        contrib[a] = stride;
        stride *= dims[a];
    }
    let mut out = Vec::with_capacity(len);
    if n == 0 {
        out.push(0);
        return out;
    }
    let mut coord = vec![0usize; n];
    let mut off = 0usize;
    let last = n - 1;
    let inner = dims[last];
    let inner_step = contrib[last];
    loop {
        for i in 0..inner {
            out.push(off + i * inner_step);
        }
        // advance the odometer over all but the innermost axis
        let mut ax = last;
        loop {
            if ax == 0 {
                return out;
            }
            ax -= 1;
            coord[ax] += 1;
            off += contrib[ax];
            if coord[ax] < dims[ax] {
                break;
            }
            off -= contrib[ax] * coord[ax];
            coord[ax] = 0;
        }
    }
}

fn mask_axes(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1u64 << i) != 0).collect()
}

fn xlogx_sum(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

#[derive(Debug)]
struct Marginal {
    dims: Vec<usize>,
    weights: Vec<f64>,
}

/// Memoizes marginals of one joint so that many information terms over the
/// same distribution share the expensive summations.
///
/// Marginals are keyed by variable bitmask and always laid out in the
/// joint's variable order.
pub struct InfoCache<'a> {
    joint: &'a JointDistribution,
    marginals: RefCell<HashMap<u64, std::rc::Rc<Marginal>>>,
}

impl<'a> InfoCache<'a> {
    pub fn new(joint: &'a JointDistribution) -> Self {
        Self {
            joint,
            marginals: RefCell::new(HashMap::new()),
        }
    }

    pub fn joint(&self) -> &JointDistribution {
        self.joint
    }

    fn full_mask(&self) -> u64 {
        let n = self.joint.vars.len();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    fn marginal(&self, mask: u64) -> std::rc::Rc<Marginal> {
        if let Some(m) = self.marginals.borrow().get(&mask) {
            return m.clone();
        }
        // project from the smallest cached superset, else from the joint
        let source = {
            let cache = self.marginals.borrow();
            cache
                .iter()
                .filter(|(&k, _)| k & mask == mask)
                .min_by_key(|(&k, m)| (m.weights.len(), k))
                .map(|(&k, m)| (k, m.clone()))
        };
        let result = match source {
            Some((src_mask, src)) if src.weights.len() < self.joint.len() => {
                let src_axes = mask_axes(src_mask);
                let local: Vec<usize> = mask_axes(mask)
                    .iter()
                    .map(|a| src_axes.iter().position(|b| b == a).unwrap())
                    .collect();
                let (dims, weights) = project_sum(&src.dims, &src.weights, &local);
                Marginal { dims, weights }
            }
            _ => {
                if mask == self.full_mask() {
                    Marginal {
                        dims: self.joint.dims.clone(),
                        weights: self.joint.weights.clone(),
                    }
                } else {
                    let (dims, weights) =
                        project_sum(&self.joint.dims, &self.joint.weights, &mask_axes(mask));
                    Marginal { dims, weights }
                }
            }
        };
        let rc = std::rc::Rc::new(result);
        self.marginals.borrow_mut().insert(mask, rc.clone());
        rc
    }

    fn joint_entropy_mask(&self, mask: u64) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        xlogx_sum(&self.marginal(mask).weights)
    }

    /// `H(A|C)` in bits.
    pub fn entropy(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        let m = self.joint.disjoint_masks(&[a, given])?;
        let h = self.joint_entropy_mask(m[0] | m[1]) - self.joint_entropy_mask(m[1]);
        Ok(if h < 0.0 && h > -MI_CLAMP { 0.0 } else { h })
    }

    /// `I(A;B|C)` in bits, by direct summation over the `(A,B,C)` marginal.
    pub fn cmi(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        let m = self.joint.disjoint_masks(&[a, b, c])?;
        let (ma, mb, mc) = (m[0], m[1], m[2]);
        if ma == 0 || mb == 0 {
            return Ok(0.0);
        }
        let abc = self.marginal(ma | mb | mc);
        let ac = self.marginal(ma | mc);
        let bc = self.marginal(mb | mc);
        let cm = self.marginal(mc);

        let abc_axes = mask_axes(ma | mb | mc);
        let local = |mask: u64| -> Vec<usize> {
            abc_axes
                .iter()
                .enumerate()
                .filter(|(_, &ax)| mask & (1u64 << ax) != 0)
                .map(|(i, _)| i)
                .collect()
        };
        let to_ac = index_map(&abc.dims, &local(ma | mc));
        let to_bc = index_map(&abc.dims, &local(mb | mc));
        let to_c = index_map(&abc.dims, &local(mc));

        let mut total = 0.0;
        for (i, &p) in abc.weights.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            let pac = ac.weights[to_ac[i]];
            let pbc = bc.weights[to_bc[i]];
            let pc = cm.weights[to_c[i]];
            if pac <= 0.0 || pbc <= 0.0 {
                return Err(Error::InternalConsistency(format!(
                    "positive joint mass {p:e} over a zero-mass marginal cell"
                )));
            }
            total += p * ((p * pc) / (pac * pbc)).log2();
        }
        if total < 0.0 && total >= -MI_CLAMP {
            total = 0.0;
        }
        Ok(total)
    }
}
