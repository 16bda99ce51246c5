//! Coding-scheme distributions and assembly of the full single-letter joint
//!
//! `P_{U0} P_{U1|U0} P_{U2|U0} P_{X1|U0U1} P_{X2|U0U2} P_{S1S2}
//!  P_{YZ1Z2|S1S2X1X2} P_{V1|U0U2X1Z1} P_{V2|U0U1X2Z2}`.

use rand::Rng;

use crate::channel::names::*;
use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::prob::{Alphabet, JointDistribution, Variable};

/// The seven conditional pmfs defining a coding scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub p_u0: Kernel,
    pub p_u1: Kernel,
    pub p_u2: Kernel,
    pub p_x1: Kernel,
    pub p_x2: Kernel,
    pub p_v1: Kernel,
    pub p_v2: Kernel,
}

fn names_of(vars: &[Variable]) -> Vec<&str> {
    vars.iter().map(|v| v.name.as_str()).collect()
}

fn check_signature(k: &Kernel, inputs: &[&str], output: &str) -> Result<()> {
    let outs = names_of(k.outputs());
    if names_of(k.inputs()) != inputs || outs != [output] {
        return Err(Error::Configuration(format!(
            "kernel for {output} must be P({output}|{}), got P({}|{})",
            inputs.join(""),
            outs.join(""),
            names_of(k.inputs()).join("")
        )));
    }
    Ok(())
}

impl SchemeSpec {
    /// Checks kernel signatures and that every shared variable uses one
    /// alphabet throughout.
    pub fn new(
        p_u0: Kernel,
        p_u1: Kernel,
        p_u2: Kernel,
        p_x1: Kernel,
        p_x2: Kernel,
        p_v1: Kernel,
        p_v2: Kernel,
    ) -> Result<Self> {
        check_signature(&p_u0, &[], U0)?;
        check_signature(&p_u1, &[U0], U1)?;
        check_signature(&p_u2, &[U0], U2)?;
        check_signature(&p_x1, &[U0, U1], X1)?;
        check_signature(&p_x2, &[U0, U2], X2)?;
        check_signature(&p_v1, &[U0, U2, X1, Z1], V1)?;
        check_signature(&p_v2, &[U0, U1, X2, Z2], V2)?;
        let s = Self {
            p_u0,
            p_u1,
            p_u2,
            p_x1,
            p_x2,
            p_v1,
            p_v2,
        };
        let mut seen: Vec<&Variable> = Vec::new();
        for k in s.kernels() {
            for v in k.inputs().iter().chain(k.outputs()) {
                match seen.iter().find(|w| w.name == v.name) {
                    Some(w) if w.alphabet.symbols() != v.alphabet.symbols() => {
                        return Err(Error::Shape {
                            what: format!("alphabet of {}", v.name),
                            expected: w.size(),
                            found: v.size(),
                        });
                    }
                    Some(_) => {}
                    None => seen.push(v),
                }
            }
        }
        Ok(s)
    }

    pub fn kernels(&self) -> [&Kernel; 7] {
        [
            &self.p_u0, &self.p_u1, &self.p_u2, &self.p_x1, &self.p_x2, &self.p_v1, &self.p_v2,
        ]
    }

    pub fn variable(&self, name: &str) -> Result<&Variable> {
        self.kernels()
            .into_iter()
            .flat_map(|k| k.inputs().iter().chain(k.outputs()))
            .find(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn alphabet(&self, name: &str) -> Result<&Alphabet> {
        Ok(&self.variable(name)?.alphabet)
    }

    /// True when both compression variables are singletons.
    pub fn has_constant_v(&self) -> bool {
        self.p_v1.outputs()[0].size() == 1 && self.p_v2.outputs()[0].size() == 1
    }
}

/// Replaces `V1`, `V2` by singleton variables. Idempotent.
pub fn constant_v_scheme(scheme: &SchemeSpec) -> SchemeSpec {
    let constant = |k: &Kernel, name: &str| {
        let out = Variable::new(name, Alphabet::singleton(name, "0"));
        Kernel::from_fn(k.inputs().to_vec(), vec![out], |_, _| 1.0)
            .expect("a point mass is a valid kernel")
    };
    SchemeSpec {
        p_v1: constant(&scheme.p_v1, V1),
        p_v2: constant(&scheme.p_v2, V2),
        ..scheme.clone()
    }
}

fn check_alphabet(channel: &ChannelSpec, scheme: &SchemeSpec, name: &str) -> Result<()> {
    let a = channel.alphabet(name)?;
    let b = scheme.alphabet(name)?;
    if a.symbols() != b.symbols() {
        return Err(Error::Shape {
            what: format!("alphabet of {name}"),
            expected: a.size(),
            found: b.size(),
        });
    }
    Ok(())
}

/// Builds the joint over `(U0,U1,U2,X1,X2,S1,S2,Y,Z1,Z2,V1,V2)`.
pub fn assemble_joint(channel: &ChannelSpec, scheme: &SchemeSpec) -> Result<JointDistribution> {
    for name in [X1, X2, Z1, Z2] {
        check_alphabet(channel, scheme, name)?;
    }
    let vars: Vec<Variable> = JOINT_ORDER
        .iter()
        .map(|n| match *n {
            S1 | S2 | Y => channel.variable(n).cloned(),
            Z1 | Z2 => channel.variable(n).cloned(),
            _ => scheme.variable(n).cloned(),
        })
        .collect::<Result<_>>()?;
    let d: Vec<usize> = vars.iter().map(Variable::size).collect();
    let (n_u0, n_u1, n_u2, n_x1, n_x2) = (d[0], d[1], d[2], d[3], d[4]);
    let (n_s1, n_s2, n_y, n_z1, n_z2, n_v1, n_v2) = (d[5], d[6], d[7], d[8], d[9], d[10], d[11]);

    let state = channel.state_pmf();
    let ker = channel.kernel();
    let total: usize = d.iter().product();
    let mut w = Vec::with_capacity(total);
    let s = scheme;
    for u0 in 0..n_u0 {
        let p0 = s.p_u0.weights()[u0];
        for u1 in 0..n_u1 {
            let p1 = p0 * s.p_u1.prob(&[u0], &[u1]);
            for u2 in 0..n_u2 {
                let p2 = p1 * s.p_u2.prob(&[u0], &[u2]);
                for x1 in 0..n_x1 {
                    let p3 = p2 * s.p_x1.prob(&[u0, u1], &[x1]);
                    for x2 in 0..n_x2 {
                        let p4 = p3 * s.p_x2.prob(&[u0, u2], &[x2]);
                        for s1 in 0..n_s1 {
                            for s2 in 0..n_s2 {
                                let p5 = p4 * state.prob(&[s1, s2]);
                                let slice = ker.slice(ker.input_flat(&[s1, s2, x1, x2]));
                                let mut o = 0;
                                for _y in 0..n_y {
                                    for z1 in 0..n_z1 {
                                        let v1s = s.p_v1.slice(s.p_v1.input_flat(&[u0, u2, x1, z1]));
                                        for z2 in 0..n_z2 {
                                            let p6 = p5 * slice[o];
                                            o += 1;
                                            let v2s =
                                                s.p_v2.slice(s.p_v2.input_flat(&[u0, u1, x2, z2]));
                                            for v1 in 0..n_v1 {
                                                let p7 = p6 * v1s[v1];
                                                for v2 in 0..n_v2 {
                                                    w.push(p7 * v2s[v2]);
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    JointDistribution::new(vars, w)
}

/// Parameters of the binary auxiliary family used for the additive
/// example: `X_k = U_k xor Xi_k` and the erasure compression of `Z1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2SchemeParams {
    /// `P(U0 = 1)`
    pub p_u0: f64,
    /// `P(U1 = 1 | U0 = u)` for `u = 0, 1`
    pub p_u1: [f64; 2],
    /// `P(U2 = 1 | U0 = u)`
    pub p_u2: [f64; 2],
    /// `P(Xi1 = 1)`
    pub xi1: f64,
    /// `P(Xi2 = 1)`
    pub xi2: f64,
    /// `P(E = 1)`: probability that `V1` is erased.
    pub e: f64,
}

impl Example2SchemeParams {
    pub const LEN: usize = 8;

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.p_u0, self.p_u1[0], self.p_u1[1], self.p_u2[0], self.p_u2[1], self.xi1, self.xi2,
            self.e,
        ]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self {
            p_u0: a[0],
            p_u1: [a[1], a[2]],
            p_u2: [a[3], a[4]],
            xi1: a[5],
            xi2: a[6],
            e: a[7],
        }
    }

    pub const FIELD_NAMES: [&'static str; 8] = [
        "p_u0", "p_u1_given_0", "p_u1_given_1", "p_u2_given_0", "p_u2_given_1", "xi1", "xi2", "e",
    ];

    pub fn validate(&self) -> Result<()> {
        for (name, v) in Self::FIELD_NAMES.iter().zip(self.to_array()) {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} must lie in [0,1], got {v}")));
            }
        }
        Ok(())
    }

    /// Deterministic inputs `X1 = x1`, `X2 = x2` with erased `V1`.
    pub fn deterministic_inputs(x1: u8, x2: u8) -> Self {
        Self {
            p_u0: 0.0,
            p_u1: [f64::from(x1); 2],
            p_u2: [f64::from(x2); 2],
            xi1: 0.0,
            xi2: 0.0,
            e: 1.0,
        }
    }

    /// `U1 = X1 ~ Ber(q)`, `X2 = 1`, never-erased `V1`.
    pub fn compression_min_distortion(q: f64) -> Self {
        Self {
            p_u0: 0.0,
            p_u1: [q; 2],
            p_u2: [1.0; 2],
            xi1: 0.0,
            xi2: 0.0,
            e: 0.0,
        }
    }

    /// Marginal `P(X1 = 1)`.
    pub fn p_x1(&self) -> f64 {
        let pu1 = (1.0 - self.p_u0) * self.p_u1[0] + self.p_u0 * self.p_u1[1];
        pu1 * (1.0 - self.xi1) + (1.0 - pu1) * self.xi1
    }
}

fn bernoulli(p: f64, v: usize) -> f64 {
    if v == 1 {
        p
    } else {
        1.0 - p
    }
}

/// Scheme of the binary family on the additive channel. `V1 = 1{Z1 = 1}`
/// unless erased (`"?"`), `V2` constant.
pub fn build_example2_scheme(params: &Example2SchemeParams, channel: &ChannelSpec) -> Result<SchemeSpec> {
    params.validate()?;
    let z1 = channel.variable(Z1)?.clone();
    if z1.size() != 3 {
        return Err(Error::Shape {
            what: "Z1 alphabet (expected the three-letter Y' alphabet)".into(),
            expected: 3,
            found: z1.size(),
        });
    }
    let z2 = channel.variable(Z2)?.clone();
    let x1 = channel.variable(X1)?.clone();
    let x2 = channel.variable(X2)?.clone();
    if x1.size() != 2 || x2.size() != 2 {
        return Err(Error::Shape {
            what: "binary channel inputs".into(),
            expected: 2,
            found: x1.size().max(x2.size()),
        });
    }
    let u0 = Variable::new(U0, Alphabet::binary(U0));
    let u1 = Variable::new(U1, Alphabet::binary(U1));
    let u2 = Variable::new(U2, Alphabet::binary(U2));
    let v1 = Variable::new(V1, Alphabet::new(V1, ["0", "1", "?"])?);
    let v2 = Variable::new(V2, Alphabet::singleton(V2, "0"));
    let p = *params;
    let e = p.e;
    let one_idx = z1
        .alphabet
        .index_of("1")
        .ok_or_else(|| Error::Name("Z1=1".into()))?;

    let flip = |xi: f64| move |i: &[usize], o: &[usize]| if o[0] == i[1] { 1.0 - xi } else { xi };
    SchemeSpec::new(
        Kernel::from_fn(vec![], vec![u0.clone()], |_, o| bernoulli(p.p_u0, o[0]))?,
        Kernel::from_fn(vec![u0.clone()], vec![u1.clone()], |i, o| {
            bernoulli(p.p_u1[i[0]], o[0])
        })?,
        Kernel::from_fn(vec![u0.clone()], vec![u2.clone()], |i, o| {
            bernoulli(p.p_u2[i[0]], o[0])
        })?,
        Kernel::from_fn(vec![u0.clone(), u1.clone()], vec![x1.clone()], flip(p.xi1))?,
        Kernel::from_fn(vec![u0.clone(), u2.clone()], vec![x2.clone()], flip(p.xi2))?,
        Kernel::from_fn(vec![u0.clone(), u2, x1, z1], vec![v1], |i, o| {
            let indicator = usize::from(i[3] == one_idx);
            match o[0] {
                2 => e,
                v if v == indicator => 1.0 - e,
                _ => 0.0,
            }
        })?,
        Kernel::from_fn(vec![u0, u1, x2, z2], vec![v2], |_, _| 1.0)?,
    )
}

fn uniform_kernel_like(inputs: Vec<Variable>, output: Variable) -> Result<Kernel> {
    let n = output.size() as f64;
    Kernel::from_fn(inputs, vec![output], |_, _| 1.0 / n)
}

/// Scheme with singleton auxiliaries `U0,U1,U2,V1,V2` and independent
/// inputs with the given pmfs.
pub fn product_input_scheme(channel: &ChannelSpec, p_x1: &[f64], p_x2: &[f64]) -> Result<SchemeSpec> {
    let single = |n: &str| Variable::new(n, Alphabet::singleton(n, "0"));
    let (u0, u1, u2) = (single(U0), single(U1), single(U2));
    let x1 = channel.variable(X1)?.clone();
    let x2 = channel.variable(X2)?.clone();
    let z1 = channel.variable(Z1)?.clone();
    let z2 = channel.variable(Z2)?.clone();
    SchemeSpec::new(
        uniform_kernel_like(vec![], u0.clone())?,
        uniform_kernel_like(vec![u0.clone()], u1.clone())?,
        uniform_kernel_like(vec![u0.clone()], u2.clone())?,
        Kernel::new(vec![u0.clone(), u1.clone()], vec![x1.clone()], p_x1.to_vec())?,
        Kernel::new(vec![u0.clone(), u2.clone()], vec![x2.clone()], p_x2.to_vec())?,
        uniform_kernel_like(vec![u0.clone(), u2, x1, z1], single(V1))?,
        uniform_kernel_like(vec![u0, u1, x2, z2], single(V2))?,
    )
}

/// Zero-distortion scheme for the binary channel with feedback
/// `(Z1, Z2) = (S2, X1)`: `X1 = U1 ~ Ber(1/2)` carries the compression
/// index, `X2 = 1`, `V1 = Z1` and `V2` constant.
pub fn example1_copy_scheme(channel: &ChannelSpec) -> Result<SchemeSpec> {
    let single = |n: &str| Variable::new(n, Alphabet::singleton(n, "0"));
    let (u0, u2, v2) = (single(U0), single(U2), single(V2));
    let u1 = Variable::new(U1, Alphabet::binary(U1));
    let x1 = channel.variable(X1)?.clone();
    let x2 = channel.variable(X2)?.clone();
    let z1 = channel.variable(Z1)?.clone();
    let z2 = channel.variable(Z2)?.clone();
    let v1 = Variable::new(V1, z1.alphabet.renamed(V1));
    let one = x2
        .alphabet
        .index_of("1")
        .ok_or_else(|| Error::Name("X2 has no symbol 1".into()))?;
    SchemeSpec::new(
        uniform_kernel_like(vec![], u0.clone())?,
        uniform_kernel_like(vec![u0.clone()], u1.clone())?,
        uniform_kernel_like(vec![u0.clone()], u2.clone())?,
        Kernel::deterministic(vec![u0.clone(), u1.clone()], vec![x1.clone()], |i| vec![i[1]])?,
        Kernel::deterministic(vec![u0.clone(), u2.clone()], vec![x2.clone()], |_| vec![one])?,
        Kernel::deterministic(vec![u0.clone(), u2, x1, z1], vec![v1], |i| vec![i[3]])?,
        uniform_kernel_like(vec![u0, u1, x2, z2], v2)?,
    )
}

/// Sizes of the auxiliary alphabets for [`random_scheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuxSizes {
    pub u0: usize,
    pub u1: usize,
    pub u2: usize,
    pub v1: usize,
    pub v2: usize,
}

impl Default for AuxSizes {
    fn default() -> Self {
        Self {
            u0: 2,
            u1: 2,
            u2: 2,
            v1: 2,
            v2: 2,
        }
    }
}

pub(crate) fn random_pmf<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    // occasional exact zeros keep boundary cases in the sample
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if n > 1 && rng.random_bool(0.1) {
                0.0
            } else {
                -rng.random::<f64>().max(1e-300).ln()
            }
        })
        .collect();
    let mut s: f64 = w.iter().sum();
    if s == 0.0 {
        w[0] = 1.0;
        s = 1.0;
    }
    w.iter_mut().for_each(|x| *x /= s);
    // repair rounding so the slice sums to one within tolerance
    let err: f64 = 1.0 - w.iter().sum::<f64>();
    let imax = (0..n).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
    w[imax] += err;
    w
}

fn random_kernel<R: Rng + ?Sized>(rng: &mut R, inputs: Vec<Variable>, output: Variable) -> Result<Kernel> {
    let in_len: usize = inputs.iter().map(Variable::size).product();
    let n = output.size();
    let w = (0..in_len).flat_map(|_| random_pmf(rng, n)).collect();
    Kernel::new(inputs, vec![output], w)
}

/// Draws every scheme kernel uniformly from the simplex (with sporadic
/// zeros).
pub fn random_scheme<R: Rng + ?Sized>(rng: &mut R, channel: &ChannelSpec, sizes: AuxSizes) -> Result<SchemeSpec> {
    let u0 = Variable::new(U0, Alphabet::range(U0, sizes.u0));
    let u1 = Variable::new(U1, Alphabet::range(U1, sizes.u1));
    let u2 = Variable::new(U2, Alphabet::range(U2, sizes.u2));
    let v1 = Variable::new(V1, Alphabet::range(V1, sizes.v1));
    let v2 = Variable::new(V2, Alphabet::range(V2, sizes.v2));
    let x1 = channel.variable(X1)?.clone();
    let x2 = channel.variable(X2)?.clone();
    let z1 = channel.variable(Z1)?.clone();
    let z2 = channel.variable(Z2)?.clone();
    SchemeSpec::new(
        random_kernel(rng, vec![], u0.clone())?,
        random_kernel(rng, vec![u0.clone()], u1.clone())?,
        random_kernel(rng, vec![u0.clone()], u2.clone())?,
        random_kernel(rng, vec![u0.clone(), u1.clone()], x1.clone())?,
        random_kernel(rng, vec![u0.clone(), u2.clone()], x2.clone())?,
        random_kernel(rng, vec![u0.clone(), u2, x1, z1], v1)?,
        random_kernel(rng, vec![u0, u1, x2, z2], v2)?,
    )
}
