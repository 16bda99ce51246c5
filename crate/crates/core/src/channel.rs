//! The memoryless state-dependent MAC: state pmf, channel kernel and
//! per-user distortion measures, plus builders for the two worked examples.

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::prob::{Alphabet, JointDistribution, Variable};

/// Canonical variable names shared by every module.
pub mod names {
    pub const U0: &str = "U0";
    pub const U1: &str = "U1";
    pub const U2: &str = "U2";
    pub const X1: &str = "X1";
    pub const X2: &str = "X2";
    pub const S1: &str = "S1";
    pub const S2: &str = "S2";
    pub const Y: &str = "Y";
    pub const Z1: &str = "Z1";
    pub const Z2: &str = "Z2";
    pub const V1: &str = "V1";
    pub const V2: &str = "V2";

    /// Variable order of an assembled scheme joint.
    pub const JOINT_ORDER: [&str; 12] = [U0, U1, U2, X1, X2, S1, S2, Y, Z1, Z2, V1, V2];
}

use names::*;

/// One of the two transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum User {
    Tx1,
    Tx2,
}

impl User {
    pub fn other(self) -> User {
        match self {
            User::Tx1 => User::Tx2,
            User::Tx2 => User::Tx1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            User::Tx1 => 0,
            User::Tx2 => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(k: u8) -> Result<User> {
        match k {
            1 => Ok(User::Tx1),
            2 => Ok(User::Tx2),
            _ => Err(Error::Domain(format!("user must be 1 or 2, got {k}"))),
        }
    }

    pub fn state(self) -> &'static str {
        [S1, S2][self.index()]
    }

    pub fn input(self) -> &'static str {
        [X1, X2][self.index()]
    }

    pub fn feedback(self) -> &'static str {
        [Z1, Z2][self.index()]
    }

    pub fn common(self) -> &'static str {
        [U1, U2][self.index()]
    }

    pub fn compression(self) -> &'static str {
        [V1, V2][self.index()]
    }
}

/// Distortion matrix `d_k(s, ŝ)` of one user.
#[derive(Debug, Clone, PartialEq)]
pub struct UserDistortion {
    pub reconstruction: Alphabet,
    /// `matrix[s][ŝ]`
    pub matrix: Vec<Vec<f64>>,
}

impl UserDistortion {
    pub fn new(reconstruction: Alphabet, matrix: Vec<Vec<f64>>) -> Result<Self> {
        for row in &matrix {
            if row.len() != reconstruction.size() {
                return Err(Error::Shape {
                    what: format!("distortion row over {}", reconstruction.name()),
                    expected: reconstruction.size(),
                    found: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|d| !d.is_finite() || **d < 0.0) {
                return Err(Error::Domain(format!(
                    "distortion entries must be finite and non-negative, got {bad}"
                )));
            }
        }
        Ok(Self {
            reconstruction,
            matrix,
        })
    }

    /// `d(s, ŝ) = 1{s != ŝ}` with `Ŝ = S`.
    pub fn hamming(state: &Alphabet) -> Self {
        let n = state.size();
        let matrix = (0..n)
            .map(|s| (0..n).map(|r| if s == r { 0.0 } else { 1.0 }).collect())
            .collect();
        Self {
            reconstruction: state.renamed(&format!("{}hat", state.name())),
            matrix,
        }
    }

    pub fn d(&self, s: usize, s_hat: usize) -> f64 {
        self.matrix[s][s_hat]
    }

    pub fn max(&self) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn is_hamming(&self) -> bool {
        self.matrix.len() == self.reconstruction.size()
            && self.matrix.iter().enumerate().all(|(s, row)| {
                row.iter()
                    .enumerate()
                    .all(|(r, &d)| d == if s == r { 0.0 } else { 1.0 })
            })
    }
}

/// Distortion measures of both users.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionTable {
    users: [UserDistortion; 2],
}

impl DistortionTable {
    pub fn new(d1: UserDistortion, d2: UserDistortion) -> Self {
        Self { users: [d1, d2] }
    }

    pub fn hamming(s1: &Alphabet, s2: &Alphabet) -> Self {
        Self::new(UserDistortion::hamming(s1), UserDistortion::hamming(s2))
    }

    pub fn user(&self, k: User) -> &UserDistortion {
        &self.users[k.index()]
    }
}

/// State pmf `P_{S1 S2}` and kernel `P_{Y Z1 Z2 | S1 S2 X1 X2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    state_pmf: JointDistribution,
    kernel: Kernel,
    distortion: DistortionTable,
}

fn expect_names(vars: &[Variable], expected: &[&str], what: &str) -> Result<()> {
    let got: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
    if got != expected {
        return Err(Error::Configuration(format!(
            "{what} must range over {expected:?}, got {got:?}"
        )));
    }
    Ok(())
}

impl ChannelSpec {
    pub fn new(state_pmf: JointDistribution, kernel: Kernel, distortion: DistortionTable) -> Result<Self> {
        expect_names(state_pmf.variables(), &[S1, S2], "state pmf")?;
        expect_names(kernel.inputs(), &[S1, S2, X1, X2], "channel kernel inputs")?;
        expect_names(kernel.outputs(), &[Y, Z1, Z2], "channel kernel outputs")?;
        for (a, b) in state_pmf.variables().iter().zip(kernel.inputs()) {
            if a.alphabet.symbols() != b.alphabet.symbols() {
                return Err(Error::Configuration(format!(
                    "state alphabet of {} differs between state pmf and kernel",
                    a.name
                )));
            }
        }
        let diag = state_pmf.validate();
        if !diag.is_clean() {
            return Err(Error::InvalidDistribution(format!("state pmf: {diag}")));
        }
        for k in [User::Tx1, User::Tx2] {
            let rows = distortion.user(k).matrix.len();
            let expected = state_pmf.variables()[k.index()].size();
            if rows != expected {
                return Err(Error::Shape {
                    what: format!("distortion matrix rows for user {}", k.number()),
                    expected,
                    found: rows,
                });
            }
        }
        Ok(Self {
            state_pmf,
            kernel,
            distortion,
        })
    }

    pub fn state_pmf(&self) -> &JointDistribution {
        &self.state_pmf
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn distortion(&self) -> &DistortionTable {
        &self.distortion
    }

    pub fn with_distortion(mut self, distortion: DistortionTable) -> Result<Self> {
        self.distortion = distortion;
        Self::new(self.state_pmf, self.kernel, self.distortion)
    }

    pub fn variable(&self, name: &str) -> Result<&Variable> {
        self.kernel
            .inputs()
            .iter()
            .chain(self.kernel.outputs())
            .find(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn alphabet(&self, name: &str) -> Result<&Alphabet> {
        Ok(&self.variable(name)?.alphabet)
    }

    /// Channel whose receiver output is `(Y, S1, S2)`, i.e. the receiver
    /// observes both states perfectly. Output labels are `y|s1|s2`.
    pub fn with_receiver_csi(&self) -> Result<Self> {
        let [s1, s2, x1, x2] = [0, 1, 2, 3].map(|i| self.kernel.inputs()[i].clone());
        let [y, z1, z2] = [0, 1, 2].map(|i| self.kernel.outputs()[i].clone());
        let mut labels = Vec::new();
        for ys in y.alphabet.symbols() {
            for a in s1.alphabet.symbols() {
                for b in s2.alphabet.symbols() {
                    labels.push(format!("{ys}|{a}|{b}"));
                }
            }
        }
        let (n1, n2) = (s1.size(), s2.size());
        let y_csi = Variable::new(Y, Alphabet::new(Y, labels)?);
        let kernel = Kernel::from_fn(
            vec![s1, s2, x1, x2],
            vec![y_csi, z1, z2],
            |i, o| {
                let (yi, rest) = (o[0] / (n1 * n2), o[0] % (n1 * n2));
                let (a, b) = (rest / n2, rest % n2);
                if a != i[0] || b != i[1] {
                    return 0.0;
                }
                self.kernel.prob(i, &[yi, o[1], o[2]])
            },
        )?;
        Self::new(self.state_pmf.clone(), kernel, self.distortion.clone())
    }

    /// Joint of states and outputs for fixed inputs, used by tests and
    /// diagnostics.
    pub fn output_pmf(&self, x1: usize, x2: usize) -> Result<JointDistribution> {
        let ins = self.kernel.inputs();
        let outs = self.kernel.outputs();
        let mut vars = vec![ins[0].clone(), ins[1].clone()];
        vars.extend(outs.iter().cloned());
        let mut w = Vec::with_capacity(self.state_pmf.len() * self.kernel.out_len());
        for s1 in 0..ins[0].size() {
            for s2 in 0..ins[1].size() {
                let ps = self.state_pmf.prob(&[s1, s2]);
                let flat = self.kernel.input_flat(&[s1, s2, x1, x2]);
                w.extend(self.kernel.slice(flat).iter().map(|p| ps * p));
            }
        }
        JointDistribution::new(vars, w)
    }
}

fn check_open_unit(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in (0,1), got {p}")))
    }
}

/// Binary channel `Y = S2·X2`, `(Z1, Z2) = (S2, X1)` with `S2 ~ Ber(p_s)`
/// and constant `S1 = 0`.
pub fn example1(p_s: f64) -> Result<ChannelSpec> {
    check_open_unit("p_s", p_s)?;
    let s1 = Variable::new(S1, Alphabet::singleton(S1, "0"));
    let s2 = Variable::new(S2, Alphabet::binary(S2));
    let state = JointDistribution::new(vec![s1.clone(), s2.clone()], vec![1.0 - p_s, p_s])?;
    let kernel = Kernel::deterministic(
        vec![
            s1.clone(),
            s2.clone(),
            Variable::new(X1, Alphabet::binary(X1)),
            Variable::new(X2, Alphabet::binary(X2)),
        ],
        vec![
            Variable::new(Y, Alphabet::binary(Y)),
            Variable::new(Z1, Alphabet::binary(Z1)),
            Variable::new(Z2, Alphabet::binary(Z2)),
        ],
        |i| {
            let (s2, x1, x2) = (i[1], i[2], i[3]);
            vec![s2 * x2, s2, x1]
        },
    )?;
    ChannelSpec::new(
        state,
        kernel,
        DistortionTable::hamming(&s1.alphabet, &s2.alphabet),
    )
}

/// Additive channel `Y' = S1·X1 + S2·X2`, `Z1 = Y'`, `Z2 = Y' + B` with
/// `B ~ Ber(t)`, i.i.d. `S1, S2 ~ Ber(p_s)` and receiver output
/// `Y = (Y', S1, S2)`.
pub fn example2(p_s: f64, t: f64) -> Result<ChannelSpec> {
    check_open_unit("p_s", p_s)?;
    check_open_unit("t", t)?;
    let s1 = Variable::new(S1, Alphabet::binary(S1));
    let s2 = Variable::new(S2, Alphabet::binary(S2));
    let ber = |v: usize| if v == 1 { p_s } else { 1.0 - p_s };
    let state_w = (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .map(|(a, b)| ber(a) * ber(b))
        .collect();
    let state = JointDistribution::new(vec![s1.clone(), s2.clone()], state_w)?;
    let kernel = Kernel::from_fn(
        vec![
            s1.clone(),
            s2.clone(),
            Variable::new(X1, Alphabet::binary(X1)),
            Variable::new(X2, Alphabet::binary(X2)),
        ],
        vec![
            Variable::new(Y, Alphabet::range(Y, 3)),
            Variable::new(Z1, Alphabet::range(Z1, 3)),
            Variable::new(Z2, Alphabet::range(Z2, 4)),
        ],
        |i, o| {
            let y = i[0] * i[2] + i[1] * i[3];
            if o[0] != y || o[1] != y {
                return 0.0;
            }
            if o[2] == y {
                1.0 - t
            } else if o[2] == y + 1 {
                t
            } else {
                0.0
            }
        },
    )?;
    let base = ChannelSpec::new(
        state,
        kernel,
        DistortionTable::hamming(&s1.alphabet, &s2.alphabet),
    )?;
    base.with_receiver_csi()
}

/// Alphabet sizes for [`random_channel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelSizes {
    pub s1: usize,
    pub s2: usize,
    pub x1: usize,
    pub x2: usize,
    pub y: usize,
    pub z1: usize,
    pub z2: usize,
}

impl ChannelSizes {
    pub fn binary() -> Self {
        Self {
            s1: 2,
            s2: 2,
            x1: 2,
            x2: 2,
            y: 2,
            z1: 2,
            z2: 2,
        }
    }
}

/// Channel with a random state pmf and random kernel slices, Hamming
/// distortion on both states.
pub fn random_channel<R: rand::Rng + ?Sized>(rng: &mut R, sizes: ChannelSizes) -> Result<ChannelSpec> {
    use crate::scheme::random_pmf;
    let var = |n: &str, k: usize| Variable::new(n, Alphabet::range(n, k));
    let s1 = var(S1, sizes.s1);
    let s2 = var(S2, sizes.s2);
    let state = JointDistribution::new(
        vec![s1.clone(), s2.clone()],
        random_pmf(rng, sizes.s1 * sizes.s2),
    )?;
    let in_len = sizes.s1 * sizes.s2 * sizes.x1 * sizes.x2;
    let out_len = sizes.y * sizes.z1 * sizes.z2;
    let w = (0..in_len).flat_map(|_| random_pmf(rng, out_len)).collect();
    let kernel = Kernel::new(
        vec![s1.clone(), s2.clone(), var(X1, sizes.x1), var(X2, sizes.x2)],
        vec![var(Y, sizes.y), var(Z1, sizes.z1), var(Z2, sizes.z2)],
        w,
    )?;
    ChannelSpec::new(
        state,
        kernel,
        DistortionTable::hamming(&s1.alphabet, &s2.alphabet),
    )
}
