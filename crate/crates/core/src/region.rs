//! Information terms of a scheme and the achievable rate regions they
//! define.
//!
//! The region is reported in closed form: one linear inequality in
//! `(R1, R2)` per argument of every minimum, plus a list of feasibility
//! conditions that involve no rates. Nonnegativity of both rates is
//! implicit.

use std::fmt::Write as _;
use std::ops::{Add, Index, Sub};

use crate::channel::names::*;
use crate::error::{Error, Result};
use crate::prob::{InfoCache, JointDistribution};

/// Slack used when strict inequalities are read as their closure.
pub const CLOSURE_SLACK: f64 = 1e-9;

/// Tolerance on the structural dominance facts between information terms.
pub const DOMINANCE_TOL: f64 = 1e-9;

/// Pairs `(j, l)` with `I_j >= I_l` on every joint of the scheme family.
pub const DOMINANCES: [(usize, usize); 6] = [(1, 5), (2, 6), (7, 9), (13, 11), (12, 10), (7, 8)];

/// The sixteen scalars `I0..I15` (bits) from which the rate region is
/// assembled. With `U = (U0, U1, U2)`:
///
/// | term | definition |
/// |---|---|
/// | I0 | I(V1;X1X2Y\|U) + I(V2;X1X2YV1\|U) |
/// | I1 | I(V1;X1Z1\|U) |
/// | I2 | I(V2;X2Z2\|U) |
/// | I3 | I(U1;X2Z2\|U0U2) |
/// | I4 | I(U2;X1Z1\|U0U1) |
/// | I5 | I(V1;X2Z2\|U) |
/// | I6 | I(V2;X1Z1\|U) |
/// | I7 | I(X1X2;YV1V2\|U) |
/// | I8 | I(X1;YV1V2\|UX2) |
/// | I9 | I(X2;YV1V2\|UX1) |
/// | I10 | I(X1;Y\|U0X2) |
/// | I11 | I(X2;Y\|U0X1) |
/// | I12 | I(X1X2;Y\|U0U2) |
/// | I13 | I(X1X2;Y\|U0U1) |
/// | I14 | I(X1X2;Y\|U0) |
/// | I15 | I(X1X2;Y) |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoTerms(pub [f64; 16]);

impl Index<usize> for InfoTerms {
    type Output = f64;
    fn index(&self, j: usize) -> &f64 {
        &self.0[j]
    }
}

impl InfoTerms {
    /// Dominance facts violated by more than `tol`, as `(j, l, I_l - I_j)`.
    pub fn dominance_violations(&self, tol: f64) -> Vec<(usize, usize, f64)> {
        DOMINANCES
            .iter()
            .filter(|&&(j, l)| self[l] - self[j] > tol)
            .map(|&(j, l)| (j, l, self[l] - self[j]))
            .collect()
    }
}

const U: [&str; 3] = [U0, U1, U2];

fn with_u(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = U.to_vec();
    v.extend_from_slice(extra);
    v
}

/// Evaluates `I0..I15` on an assembled scheme joint and checks the
/// dominance facts that the Markov structure of the scheme guarantees.
pub fn compute_info_terms(joint: &JointDistribution) -> Result<InfoTerms> {
    let terms = compute_info_terms_unchecked(joint)?;
    if let Some((j, l, by)) = terms.dominance_violations(DOMINANCE_TOL).first() {
        return Err(Error::InternalConsistency(format!(
            "I{j} >= I{l} violated by {by:e}; the joint does not follow the scheme factorization"
        )));
    }
    Ok(terms)
}

/// [`compute_info_terms`] without the dominance check.
pub fn compute_info_terms_unchecked(joint: &JointDistribution) -> Result<InfoTerms> {
    for n in JOINT_ORDER {
        joint.axis(n)?;
    }
    let c = InfoCache::new(joint);
    let u = U.to_vec();
    let i0 = c.cmi(&[V1], &[X1, X2, Y], &u)? + c.cmi(&[V2], &[X1, X2, Y, V1], &u)?;
    let t = [
        i0,
        c.cmi(&[V1], &[X1, Z1], &u)?,
        c.cmi(&[V2], &[X2, Z2], &u)?,
        c.cmi(&[U1], &[X2, Z2], &[U0, U2])?,
        c.cmi(&[U2], &[X1, Z1], &[U0, U1])?,
        c.cmi(&[V1], &[X2, Z2], &u)?,
        c.cmi(&[V2], &[X1, Z1], &u)?,
        c.cmi(&[X1, X2], &[Y, V1, V2], &u)?,
        c.cmi(&[X1], &[Y, V1, V2], &with_u(&[X2]))?,
        c.cmi(&[X2], &[Y, V1, V2], &with_u(&[X1]))?,
        c.cmi(&[X1], &[Y], &[U0, X2])?,
        c.cmi(&[X2], &[Y], &[U0, X1])?,
        c.cmi(&[X1, X2], &[Y], &[U0, U2])?,
        c.cmi(&[X1, X2], &[Y], &[U0, U1])?,
        c.cmi(&[X1, X2], &[Y], &[U0])?,
        c.cmi(&[X1, X2], &[Y], &[])?,
    ];
    Ok(InfoTerms(t))
}

/// `a1·R1 + a2·R2 <= rhs` (or `<` when strict).
#[derive(Debug, Clone, PartialEq)]
pub struct RateInequality {
    pub a1: u8,
    pub a2: u8,
    pub rhs: f64,
    pub strict: bool,
    pub label: String,
}

/// A rate-free condition `lhs > rhs`, stored as its signed slack.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityCondition {
    pub name: String,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionDescription {
    pub inequalities: Vec<RateInequality>,
    pub feasibility: Vec<FeasibilityCondition>,
}

/// One region constraint before numeric evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicBound<T> {
    pub a1: u8,
    pub a2: u8,
    pub rhs: T,
    pub label: &'static str,
}

/// A feasibility condition `lhs > rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicCondition<T> {
    pub lhs: T,
    pub rhs: T,
    pub label: &'static str,
}

/// The projected rate region written over any ordered field, so that the
/// floating-point evaluator and the exact rational check share one
/// transcription.
pub fn region_constraints<T>(i: &[T; 16]) -> (Vec<SymbolicBound<T>>, Vec<SymbolicCondition<T>>)
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    let g = |j: usize| i[j].clone();
    // the four shared sum-rate style arguments
    let i12_adj = g(12) + g(0) - g(1);
    let i13_adj = g(13) + g(0) - g(2);
    let i14_adj = g(14) + g(0) - g(1) - g(2);
    let base1 = g(3) + g(5) - g(1);
    let base2 = g(4) + g(6) - g(2);
    let base_sum = base2.clone() + base1.clone();

    let b = |a1: u8, a2: u8, rhs: T, label: &'static str| SymbolicBound { a1, a2, rhs, label };
    let bounds = vec![
        b(1, 0, base1.clone() + g(8), "R1: I3+I5-I1+I8"),
        b(1, 0, base1.clone() + g(10) + g(0) - g(1), "R1: I3+I5-I1+I10+I0-I1"),
        b(1, 0, base1.clone() + i13_adj.clone(), "R1: I3+I5-I1+I13+I0-I2"),
        b(1, 0, base1 + i14_adj.clone(), "R1: I3+I5-I1+I14+I0-I1-I2"),
        b(0, 1, base2.clone() + g(9), "R2: I4+I6-I2+I9"),
        b(0, 1, base2.clone() + g(11) + g(0) - g(2), "R2: I4+I6-I2+I11+I0-I2"),
        b(0, 1, base2.clone() + i12_adj.clone(), "R2: I4+I6-I2+I12+I0-I1"),
        b(0, 1, base2 + i14_adj.clone(), "R2: I4+I6-I2+I14+I0-I1-I2"),
        b(1, 1, base_sum.clone() + g(7), "R1+R2: base+I7"),
        b(1, 1, base_sum.clone() + i12_adj, "R1+R2: base+I12+I0-I1"),
        b(1, 1, base_sum.clone() + i13_adj, "R1+R2: base+I13+I0-I2"),
        b(1, 1, base_sum + i14_adj, "R1+R2: base+I14+I0-I1-I2"),
        b(1, 1, g(15) + g(0) - g(1) - g(2), "R1+R2: I15+I0-I1-I2"),
    ];
    let c = |lhs: T, rhs: T, label: &'static str| SymbolicCondition { lhs, rhs, label };
    let conditions = vec![
        c(g(3) + g(5), g(1), "I3+I5 > I1"),
        c(g(4) + g(6), g(2), "I4+I6 > I2"),
        c(g(14) + g(0), g(1) + g(2), "I14+I0 > I1+I2"),
        c(g(10) + g(0), g(1), "I10+I0 > I1"),
        c(g(11) + g(0), g(2), "I11+I0 > I2"),
    ];
    (bounds, conditions)
}

/// Rate region of the full scheme (with compression) from `I0..I15`.
pub fn theorem_region(info: &InfoTerms) -> RegionDescription {
    let (bounds, conditions) = region_constraints(&info.0);
    RegionDescription {
        inequalities: bounds
            .into_iter()
            .map(|b| RateInequality {
                a1: b.a1,
                a2: b.a2,
                rhs: b.rhs,
                strict: true,
                label: b.label.to_string(),
            })
            .collect(),
        feasibility: conditions
            .into_iter()
            .map(|c| FeasibilityCondition {
                name: c.label.to_string(),
                slack: c.lhs - c.rhs,
            })
            .collect(),
    }
}

/// The same region transcribed term by term from the single-letter
/// inequalities, with composite terms evaluated directly on the joint
/// rather than through `I0..I15`.
pub fn transcription_region(joint: &JointDistribution) -> Result<RegionDescription> {
    let c = InfoCache::new(joint);
    let u = U.to_vec();
    let comp = c.cmi(&[V1], &[X1, X2, Y], &u)? + c.cmi(&[V2], &[X1, X2, Y, V1], &u)?;
    // I(V_k; X_k Z_k | U)
    let own = [c.cmi(&[V1], &[X1, Z1], &u)?, c.cmi(&[V2], &[X2, Z2], &u)?];
    let mut ineq = Vec::new();
    let mut feas = Vec::new();
    let mut base = [0.0; 2];
    for k in 0..2 {
        let (xk, xo) = ([X1, X2][k], [X1, X2][1 - k]);
        let (zo, uk, uo) = ([Z1, Z2][1 - k], [U1, U2][k], [U1, U2][1 - k]);
        let vk = [V1, V2][k];
        let common = c.cmi(&[uk], &[xo, zo], &[U0, uo])?;
        let cross = c.cmi(&[vk], &[xo, zo], &u)?;
        base[k] = common + cross - own[k];
        let args = [
            c.cmi(&[xk], &[Y], &[U0, xo])? + comp - own[k],
            c.cmi(&[X1, X2], &[Y], &[U0, uk])? + comp - own[1 - k],
            c.cmi(&[X1, X2], &[Y], &[U0])? + comp - own[0] - own[1],
            c.cmi(&[xk], &[Y, V1, V2], &with_u(&[xo]))?,
        ];
        for (n, a) in args.iter().enumerate() {
            ineq.push(RateInequality {
                a1: u8::from(k == 0),
                a2: u8::from(k == 1),
                rhs: base[k] + a,
                strict: false,
                label: format!("R{}: arg {}", k + 1, n + 1),
            });
        }
        feas.push(FeasibilityCondition {
            name: format!("compression decodable at Tx{}", 2 - k),
            slack: common + cross - own[k],
        });
    }
    let sum_args = [
        c.cmi(&[X1, X2], &[Y], &[U0, U2])? + comp - own[0],
        c.cmi(&[X1, X2], &[Y], &[U0, U1])? + comp - own[1],
        c.cmi(&[X1, X2], &[Y], &[U0])? + comp - own[0] - own[1],
        c.cmi(&[X1, X2], &[Y, V1, V2], &u)?,
    ];
    for (n, a) in sum_args.iter().enumerate() {
        ineq.push(RateInequality {
            a1: 1,
            a2: 1,
            rhs: base[0] + base[1] + a,
            strict: false,
            label: format!("R1+R2: arg {}", n + 1),
        });
    }
    let i_xy = c.cmi(&[X1, X2], &[Y], &[])?;
    ineq.push(RateInequality {
        a1: 1,
        a2: 1,
        rhs: i_xy + comp - own[0] - own[1],
        strict: false,
        label: "R1+R2: I(X1X2;Y)".into(),
    });
    feas.push(FeasibilityCondition {
        name: "joint compression decodable at Rx".into(),
        slack: c.cmi(&[X1, X2], &[Y], &[U0])? + comp - own[0] - own[1],
    });
    for k in 0..2 {
        let (xk, xo) = ([X1, X2][k], [X1, X2][1 - k]);
        feas.push(FeasibilityCondition {
            name: format!("compression {} decodable at Rx", k + 1),
            slack: c.cmi(&[xk], &[Y], &[U0, xo])? + comp - own[k],
        });
    }
    Ok(RegionDescription {
        inequalities: ineq,
        feasibility: feas,
    })
}

/// Region without compression (`V1`, `V2` constant), evaluated directly.
pub fn corollary_region(joint: &JointDistribution) -> Result<RegionDescription> {
    for v in [V1, V2] {
        if joint.variable(v)?.size() != 1 {
            return Err(Error::Precondition(format!(
                "{v} must be constant for the no-compression region"
            )));
        }
    }
    let c = InfoCache::new(joint);
    let mut ineq = Vec::new();
    for k in 0..2 {
        let (xk, xo, uk) = ([X1, X2][k], [X1, X2][1 - k], [U1, U2][k]);
        let zo = [Z1, Z2][1 - k];
        let rhs = c.cmi(&[xk], &[Y], &[xo, uk, U0])? + c.cmi(&[uk], &[zo], &[xo, U0])?;
        ineq.push(RateInequality {
            a1: u8::from(k == 0),
            a2: u8::from(k == 1),
            rhs,
            strict: false,
            label: format!("R{}", k + 1),
        });
    }
    ineq.push(RateInequality {
        a1: 1,
        a2: 1,
        rhs: c.cmi(&[X1, X2], &[Y], &[])?,
        strict: false,
        label: "R1+R2: I(X1X2;Y)".into(),
    });
    ineq.push(RateInequality {
        a1: 1,
        a2: 1,
        rhs: c.cmi(&[X1, X2], &[Y], &U)? + c.cmi(&[U1], &[Z2], &[X2, U0])?
            + c.cmi(&[U2], &[Z1], &[X1, U0])?,
        strict: false,
        label: "R1+R2: cooperative".into(),
    });
    Ok(RegionDescription {
        inequalities: ineq,
        feasibility: Vec::new(),
    })
}

/// Membership of `(r1, r2)`. With `closure`, strict inequalities are
/// relaxed to `<=` with [`CLOSURE_SLACK`]; otherwise strict ones are
/// enforced strictly.
pub fn point_feasible(region: &RegionDescription, r1: f64, r2: f64, closure: bool) -> bool {
    region.contains(r1, r2, closure)
}

impl RegionDescription {
    pub fn conditions_hold(&self, closure: bool) -> bool {
        self.feasibility.iter().all(|f| {
            if closure {
                f.slack >= -CLOSURE_SLACK
            } else {
                f.slack > 0.0
            }
        })
    }

    pub fn contains(&self, r1: f64, r2: f64, closure: bool) -> bool {
        if r1 < 0.0 || r2 < 0.0 || !self.conditions_hold(closure) {
            return false;
        }
        self.inequalities.iter().all(|q| {
            let lhs = f64::from(q.a1) * r1 + f64::from(q.a2) * r2;
            if closure {
                lhs <= q.rhs + CLOSURE_SLACK
            } else if q.strict {
                lhs < q.rhs
            } else {
                lhs <= q.rhs
            }
        })
    }

    /// Tightest bounds on `R1`, `R2` and `R1 + R2`.
    pub fn tightest(&self) -> (f64, f64, f64) {
        let mut t = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        for q in &self.inequalities {
            match (q.a1, q.a2) {
                (1, 0) => t.0 = t.0.min(q.rhs),
                (0, 1) => t.1 = t.1.min(q.rhs),
                (1, 1) => t.2 = t.2.min(q.rhs),
                _ => {}
            }
        }
        t
    }

    /// Empty under closure semantics.
    pub fn is_empty(&self) -> bool {
        !self.contains(0.0, 0.0, true)
    }

    /// Largest `R1 + R2` in the (closed) region, or `None` if it is empty.
    pub fn max_sum_rate(&self) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        let (a, b, c) = self.tightest();
        Some((a.max(0.0) + b.max(0.0)).min(c).max(0.0))
    }

    /// Corner points of the closed region, counter-clockwise from the
    /// origin. Empty when the region is.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        if self.is_empty() {
            return Vec::new();
        }
        let (a, b, c) = self.tightest();
        let (a, b, c) = (a.max(0.0), b.max(0.0), c.max(0.0));
        let mut pts = vec![(0.0, 0.0), (a.min(c), 0.0)];
        if a < c {
            pts.push((a, b.min(c - a)));
        }
        if b < c {
            pts.push((a.min(c - b), b));
        }
        pts.push((0.0, b.min(c)));
        pts.dedup();
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        pts
    }

    /// CSV with columns `a1,a2,rhs_bits,strict`, then feasibility rows as
    /// `0,0,-slack,strict` (a condition holds iff `0 <= slack`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a1,a2,rhs_bits,strict\n");
        for q in &self.inequalities {
            let _ = writeln!(out, "{},{},{:.12e},{}", q.a1, q.a2, q.rhs, q.strict);
        }
        for f in &self.feasibility {
            let _ = writeln!(out, "0,0,{:.12e},true", f.slack);
        }
        out
    }

    pub fn vertices_csv(&self) -> String {
        let mut out = String::from("r1,r2\n");
        for (x, y) in self.vertices() {
            let _ = writeln!(out, "{x:.12},{y:.12}");
        }
        out
    }
}
