//! Exact-rational Fourier–Motzkin elimination over named variables.
//!
//! Used to check that projecting the auxiliary-rate system onto `(R1, R2)`
//! reproduces the closed-form region of [`crate::region`].

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::region::{region_constraints, InfoTerms, RegionDescription};

/// Information terms are rounded to multiples of `2^-RATIONAL_BITS`.
pub const RATIONAL_BITS: i32 = 40;

pub const R1: &str = "R1";
pub const R2: &str = "R2";
pub const R1P: &str = "R1p";
pub const R2P: &str = "R2p";
pub const R1V: &str = "R1v";
pub const R2V: &str = "R2v";

/// Elimination order used for the auxiliary-rate system.
pub const PAPER_ORDER: [&str; 4] = [R1V, R2V, R1P, R2P];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Lt => Relation::Gt,
            Relation::Ge => Relation::Le,
            Relation::Gt => Relation::Lt,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

/// `coeffs · x  rel  bound`. Stored inequalities always use `<=` or `<`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub bound: BigRational,
}

impl Inequality {
    fn normalized(mut self) -> Self {
        if matches!(self.rel, Relation::Ge | Relation::Gt) {
            for c in &mut self.coeffs {
                *c = -c.clone();
            }
            self.bound = -self.bound;
            self.rel = self.rel.flipped();
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn holds(&self, x: &[BigRational], closure: bool) -> bool {
        let lhs: BigRational = self
            .coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| c * v)
            .sum();
        match self.rel {
            Relation::Lt if !closure => lhs < self.bound,
            Relation::Gt if !closure => lhs > self.bound,
            Relation::Le | Relation::Lt => lhs <= self.bound,
            Relation::Ge | Relation::Gt => lhs >= self.bound,
        }
    }

    /// Scale so the first nonzero coefficient has magnitude one.
    fn scaled(&self) -> Inequality {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => {
                let s = lead.abs();
                Inequality {
                    coeffs: self.coeffs.iter().map(|c| c / &s).collect(),
                    rel: self.rel,
                    bound: &self.bound / &s,
                }
            }
            None => self.clone(),
        }
    }
}

/// Outcome of adding a constant inequality.
enum Constant {
    True,
    /// `0 < 0`: empty strictly, nonempty under closure.
    Boundary,
    False,
}

fn classify_constant(ineq: &Inequality) -> Constant {
    let b = &ineq.bound;
    if b.is_positive() || (b.is_zero() && ineq.rel == Relation::Le) {
        Constant::True
    } else if b.is_zero() {
        Constant::Boundary
    } else {
        Constant::False
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RationalLinearSystem {
    variables: Vec<String>,
    inequalities: Vec<Inequality>,
    infeasible: bool,
}

impl RationalLinearSystem {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Self {
        Self {
            variables: variables.into_iter().map(Into::into).collect(),
            inequalities: Vec::new(),
            infeasible: false,
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    /// Set when a constant inequality `0 <= b` with `b < 0` was derived.
    pub fn is_infeasible(&self) -> bool {
        self.infeasible
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Adds `sum terms  rel  bound`. Constant inequalities are dropped when
    /// true and flag the system infeasible when false.
    pub fn add(
        &mut self,
        terms: &[(&str, BigRational)],
        rel: Relation,
        bound: BigRational,
    ) -> Result<()> {
        let mut coeffs = vec![BigRational::zero(); self.variables.len()];
        for (name, c) in terms {
            let i = self.index_of(name)?;
            coeffs[i] += c;
        }
        self.push(Inequality { coeffs, rel, bound });
        Ok(())
    }

    /// Same as [`add`](Self::add) with integer coefficients.
    pub fn add_int(&mut self, terms: &[(&str, i64)], rel: Relation, bound: BigRational) -> Result<()> {
        let t: Vec<(&str, BigRational)> = terms
            .iter()
            .map(|&(n, c)| (n, BigRational::from_integer(c.into())))
            .collect();
        self.add(&t, rel, bound)
    }

    fn push(&mut self, ineq: Inequality) {
        debug_assert_eq!(ineq.coeffs.len(), self.variables.len());
        let ineq = ineq.normalized();
        if ineq.is_constant() {
            match classify_constant(&ineq) {
                Constant::True => return,
                Constant::False => {
                    self.infeasible = true;
                    return;
                }
                Constant::Boundary => {}
            }
        }
        self.inequalities.push(ineq);
    }

    /// Adds `delta` to the bound of one stored row. Used to build negative
    /// controls for equivalence checks.
    pub fn shift_bound(&mut self, row: usize, delta: &BigRational) -> Result<()> {
        let n = self.inequalities.len();
        let q = self.inequalities.get_mut(row).ok_or_else(|| Error::Shape {
            what: "row index".into(),
            expected: n,
            found: row,
        })?;
        q.bound += delta;
        Ok(())
    }

    /// Membership of a point given in variable order.
    pub fn contains(&self, x: &[BigRational], closure: bool) -> bool {
        !self.infeasible && self.inequalities.iter().all(|q| q.holds(x, closure))
    }

    /// Membership of a point given by name; every variable must be listed.
    pub fn contains_named(&self, point: &[(&str, BigRational)], closure: bool) -> Result<bool> {
        let mut x = vec![None; self.variables.len()];
        for (n, v) in point {
            x[self.index_of(n)?] = Some(v.clone());
        }
        let x: Option<Vec<BigRational>> = x.into_iter().collect();
        let x = x.ok_or_else(|| Error::Precondition("point must assign every variable".into()))?;
        Ok(self.contains(&x, closure))
    }

    /// Drops exact duplicates and, among inequalities with proportional
    /// coefficient vectors, keeps only the tightest.
    pub fn prune(&mut self) {
        let mut best: HashMap<Vec<BigRational>, usize> = HashMap::new();
        let mut kept: Vec<Inequality> = Vec::new();
        for q in self.inequalities.drain(..) {
            let s = q.scaled();
            match best.get(&s.coeffs) {
                Some(&i) => {
                    let cur = &kept[i];
                    let tighter = s.bound < cur.bound
                        || (s.bound == cur.bound && s.rel.is_strict() && !cur.rel.is_strict());
                    if tighter {
                        kept[i] = s;
                    }
                }
                None => {
                    best.insert(s.coeffs.clone(), kept.len());
                    kept.push(s);
                }
            }
        }
        self.inequalities = kept;
    }

    fn involving(&self, var: usize) -> usize {
        self.inequalities
            .iter()
            .filter(|q| !q.coeffs[var].is_zero())
            .count()
    }

    /// Removes `var` by pairing every lower bound with every upper bound.
    /// The variable stays in the variable list with zero coefficients; use
    /// [`project`] to drop columns.
    pub fn eliminate(&self, var: &str) -> Result<RationalLinearSystem> {
        let v = self.index_of(var)?;
        let mut out = RationalLinearSystem {
            variables: self.variables.clone(),
            inequalities: Vec::new(),
            infeasible: self.infeasible,
        };
        let (mut upper, mut lower) = (Vec::new(), Vec::new());
        for q in &self.inequalities {
            let c = &q.coeffs[v];
            if c.is_positive() {
                upper.push(q);
            } else if c.is_negative() {
                lower.push(q);
            } else {
                out.inequalities.push(q.clone());
            }
        }
        for u in &upper {
            for l in &lower {
                let (cu, cl) = (u.coeffs[v].clone(), -l.coeffs[v].clone());
                let coeffs = u
                    .coeffs
                    .iter()
                    .zip(&l.coeffs)
                    .map(|(a, b)| a * &cl + b * &cu)
                    .collect::<Vec<_>>();
                let strict = u.rel.is_strict() || l.rel.is_strict();
                let mut q = Inequality {
                    coeffs,
                    rel: if strict { Relation::Lt } else { Relation::Le },
                    bound: &u.bound * &cl + &l.bound * &cu,
                };
                q.coeffs[v] = BigRational::zero();
                out.push(q);
            }
        }
        out.prune();
        Ok(out)
    }

    /// One inequality per line: `c1*R1 + c2*R2 + ... <rel> q`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        if self.infeasible {
            s.push_str("# infeasible\n");
        }
        for q in &self.inequalities {
            let terms: Vec<String> = q
                .coeffs
                .iter()
                .zip(&self.variables)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, n)| format!("{c}*{n}"))
                .collect();
            let lhs = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            };
            s.push_str(&format!("{lhs} {} {}\n", q.rel, q.bound));
        }
        s
    }

    fn drop_columns(&self, keep: &[usize]) -> RationalLinearSystem {
        let mut out = RationalLinearSystem {
            variables: keep.iter().map(|&i| self.variables[i].clone()).collect(),
            inequalities: Vec::new(),
            infeasible: self.infeasible,
        };
        for q in &self.inequalities {
            out.push(Inequality {
                coeffs: keep.iter().map(|&i| q.coeffs[i].clone()).collect(),
                rel: q.rel,
                bound: q.bound.clone(),
            });
        }
        out
    }
}

impl fmt::Display for RationalLinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// A projection together with the intermediate systems, which allow
/// feasible points of the shadow to be lifted back.
#[derive(Debug, Clone)]
pub struct Projection {
    pub system: RationalLinearSystem,
    /// `(eliminated variable, system just before its elimination)`.
    pub history: Vec<(String, RationalLinearSystem)>,
    original_variables: Vec<String>,
}

/// Projects onto `keep` (columns ordered as in the original system).
pub fn project(system: &RationalLinearSystem, keep: &[&str]) -> Result<RationalLinearSystem> {
    Ok(project_with_history(system, keep)?.system)
}

pub fn project_with_history(system: &RationalLinearSystem, keep: &[&str]) -> Result<Projection> {
    for k in keep {
        system.index_of(k)?;
    }
    let mut todo: Vec<String> = system
        .variables
        .iter()
        .filter(|v| !keep.contains(&v.as_str()))
        .cloned()
        .collect();
    let paper = todo.iter().all(|v| PAPER_ORDER.contains(&v.as_str()));
    if paper {
        todo.sort_by_key(|v| PAPER_ORDER.iter().position(|p| p == v));
    }
    let mut cur = system.clone();
    cur.prune();
    let mut history = Vec::new();
    while !todo.is_empty() {
        let pick = if paper {
            0
        } else {
            (0..todo.len())
                .min_by_key(|&i| cur.involving(cur.index_of(&todo[i]).unwrap_or(0)))
                .unwrap_or(0)
        };
        let var = todo.remove(pick);
        let next = cur.eliminate(&var)?;
        history.push((var, std::mem::replace(&mut cur, next)));
    }
    let cols: Vec<usize> = (0..system.variables.len())
        .filter(|&i| keep.contains(&system.variables[i].as_str()))
        .collect();
    Ok(Projection {
        system: cur.drop_columns(&cols),
        history,
        original_variables: system.variables.clone(),
    })
}

impl Projection {
    /// Extends a point of the projected system (closure semantics) to a
    /// point of the original system by choosing each eliminated variable
    /// inside its feasible interval, last-eliminated first.
    pub fn extend_point(&self, kept: &[BigRational]) -> Option<Vec<BigRational>> {
        if !self.system.contains(kept, true) {
            return None;
        }
        let n = self.original_variables.len();
        let mut x: Vec<Option<BigRational>> = vec![None; n];
        for (name, v) in self.system.variables.iter().zip(kept) {
            let i = self.original_variables.iter().position(|o| o == name)?;
            x[i] = Some(v.clone());
        }
        for (var, sys) in self.history.iter().rev() {
            let vi = sys.index_of(var).ok()?;
            let mut lo: Option<BigRational> = None;
            let mut hi: Option<BigRational> = None;
            for q in &sys.inequalities {
                let a = &q.coeffs[vi];
                if a.is_zero() {
                    continue;
                }
                let mut rest = q.bound.clone();
                for (j, c) in q.coeffs.iter().enumerate() {
                    if j != vi && !c.is_zero() {
                        rest -= c * x[j].as_ref()?;
                    }
                }
                let t = rest / a;
                if a.is_positive() {
                    hi = Some(hi.map_or(t.clone(), |h| h.min(t)));
                } else {
                    lo = Some(lo.map_or(t.clone(), |l| l.max(t)));
                }
            }
            let val = match (lo, hi) {
                (Some(l), Some(h)) if l > h => return None,
                (Some(l), Some(h)) => (l + h) / BigRational::from_integer(2.into()),
                (Some(l), None) => l + BigRational::one(),
                (None, Some(h)) => h - BigRational::one(),
                (None, None) => BigRational::zero(),
            };
            x[vi] = Some(val);
        }
        x.into_iter().collect()
    }
}

/// Rounds `x` to the nearest multiple of `2^-40`.
pub fn rationalize(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("cannot rationalize {x}")));
    }
    let scaled = (x * 2f64.powi(RATIONAL_BITS)).round();
    let num = BigInt::from(scaled as i128);
    Ok(BigRational::new(num, BigInt::one() << RATIONAL_BITS))
}

pub fn rationalize_terms(info: &InfoTerms) -> Result<[BigRational; 16]> {
    let v: Vec<BigRational> = info.0.iter().map(|&x| rationalize(x)).collect::<Result<_>>()?;
    Ok(v.try_into().expect("sixteen terms"))
}

/// A floating-point region as a rational system over `(R1, R2)`, with
/// every right-hand side and feasibility slack rationalized.
pub fn region_system(region: &RegionDescription) -> Result<RationalLinearSystem> {
    let mut s = RationalLinearSystem::new([R1, R2]);
    for q in &region.inequalities {
        let rel = if q.strict { Relation::Lt } else { Relation::Le };
        s.add_int(&[(R1, i64::from(q.a1)), (R2, i64::from(q.a2))], rel, rationalize(q.rhs)?)?;
    }
    for f in &region.feasibility {
        s.add_int(&[], Relation::Lt, rationalize(f.slack)?)?;
    }
    for v in [R1, R2] {
        s.add_int(&[(v, 1)], Relation::Ge, int(0))?;
    }
    Ok(s)
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// The auxiliary-rate system in `(R1, R2, R1p, R2p, R1v, R2v)`, with the
/// common-message rates written as `Rk - Rkp`.
pub fn build_subrates_system(i: &[BigRational; 16]) -> RationalLinearSystem {
    use Relation::*;
    let mut s = RationalLinearSystem::new([R1, R2, R1P, R2P, R1V, R2V]);
    let g = |j: usize| i[j].clone();
    let rows: Vec<(Vec<(&str, i64)>, Relation, BigRational)> = vec![
        (vec![(R1V, 1)], Gt, g(1)),
        (vec![(R2V, 1)], Gt, g(2)),
        (vec![(R2V, 1), (R1, 1), (R1P, -1)], Lt, g(2) + g(3)),
        (vec![(R1V, 1), (R2, 1), (R2P, -1)], Lt, g(1) + g(4)),
        (vec![(R1V, 1), (R2V, 1), (R1, 1), (R1P, -1)], Lt, g(2) + g(3) + g(5)),
        (vec![(R1V, 1), (R2V, 1), (R2, 1), (R2P, -1)], Lt, g(1) + g(4) + g(6)),
        (vec![(R1P, 1), (R2P, 1)], Lt, g(7)),
        (vec![(R1P, 1)], Lt, g(8)),
        (vec![(R2P, 1)], Lt, g(9)),
        (vec![(R1V, 1), (R1P, 1)], Lt, g(10) + g(0)),
        (vec![(R2V, 1), (R2P, 1)], Lt, g(11) + g(0)),
        (vec![(R1V, 1), (R1P, 1), (R2P, 1)], Lt, g(12) + g(0)),
        (vec![(R2V, 1), (R1P, 1), (R2P, 1)], Lt, g(13) + g(0)),
        (vec![(R1V, 1), (R1P, 1), (R2V, 1), (R2P, 1)], Lt, g(14) + g(0)),
        (vec![(R1V, 1), (R1, 1), (R2V, 1), (R2, 1)], Lt, g(15) + g(0)),
        (vec![(R1P, 1)], Ge, int(0)),
        (vec![(R2P, 1)], Ge, int(0)),
        (vec![(R1, 1), (R1P, -1)], Ge, int(0)),
        (vec![(R2, 1), (R2P, -1)], Ge, int(0)),
        (vec![(R1V, 1)], Ge, int(0)),
        (vec![(R2V, 1)], Ge, int(0)),
        (vec![(R1, 1)], Ge, int(0)),
        (vec![(R2, 1)], Ge, int(0)),
    ];
    for (terms, rel, b) in rows {
        s.add_int(&terms, rel, b).expect("names are the system's own");
    }
    s
}

/// The closed-form region over `(R1, R2)` as a rational system.
pub fn theorem_system(i: &[BigRational; 16]) -> RationalLinearSystem {
    let mut s = RationalLinearSystem::new([R1, R2]);
    let (bounds, conditions) = region_constraints(i);
    for b in bounds {
        s.add_int(&[(R1, i64::from(b.a1)), (R2, i64::from(b.a2))], Relation::Lt, b.rhs)
            .expect("fixed names");
    }
    for c in conditions {
        s.add_int(&[], Relation::Lt, c.lhs - c.rhs).expect("no names");
    }
    for v in [R1, R2] {
        s.add_int(&[(v, 1)], Relation::Ge, int(0)).expect("fixed names");
    }
    s
}

/// Projection of [`build_subrates_system`] onto `(R1, R2)`.
pub fn projected_region(i: &[BigRational; 16]) -> RationalLinearSystem {
    project(&build_subrates_system(i), &[R1, R2]).expect("fixed names")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Equivalence {
    Equivalent { points_checked: usize },
    /// First point where exactly one system contains the point.
    Counterexample {
        point: Vec<BigRational>,
        in_first: bool,
    },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

/// Compares membership under closure on a `grid^d` lattice spanning `bx`
/// (inclusive) followed by `samples` pseudo-random dyadic points in `bx`.
pub fn systems_equivalent(
    a: &RationalLinearSystem,
    b: &RationalLinearSystem,
    bx: &[(BigRational, BigRational)],
    grid: usize,
    samples: usize,
    seed: u64,
) -> Result<Equivalence> {
    if a.variables != b.variables {
        return Err(Error::Precondition(format!(
            "variable lists differ: {:?} vs {:?}",
            a.variables, b.variables
        )));
    }
    if bx.len() != a.variables.len() {
        return Err(Error::Shape {
            what: "box".into(),
            expected: a.variables.len(),
            found: bx.len(),
        });
    }
    let d = bx.len();
    let check = |p: Vec<BigRational>| -> Option<Equivalence> {
        let (ia, ib) = (a.contains(&p, true), b.contains(&p, true));
        (ia != ib).then_some(Equivalence::Counterexample {
            point: p,
            in_first: ia,
        })
    };
    let mut count = 0;
    if grid > 0 && d > 0 {
        let steps = (grid.max(2) - 1) as i64;
        let total = grid.pow(d as u32);
        for flat in 0..total {
            let mut f = flat;
            let mut p = Vec::with_capacity(d);
            for (lo, hi) in bx {
                let k = (f % grid) as i64;
                f /= grid;
                p.push(lo + (hi - lo) * BigRational::new(k.into(), steps.into()));
            }
            count += 1;
            if let Some(c) = check(p) {
                return Ok(c);
            }
        }
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let den = BigRational::from_integer(BigInt::one() << 20);
    for _ in 0..samples {
        let p = bx
            .iter()
            .map(|(lo, hi)| {
                let k: u32 = rng.random_range(0..=(1 << 20));
                lo + (hi - lo) * BigRational::from_integer(k.into()) / &den
            })
            .collect();
        count += 1;
        if let Some(c) = check(p) {
            return Ok(c);
        }
    }
    Ok(Equivalence::Equivalent {
        points_checked: count,
    })
}

/// Box `[0, m]^2` with `m` a little beyond the loosest single-rate bound
/// of a 2-variable system over `(R1, R2)`.
pub fn rate_box(sys: &RationalLinearSystem) -> Vec<(BigRational, BigRational)> {
    let mut m = BigRational::zero();
    for q in &sys.inequalities {
        if q.coeffs.iter().all(|c| !c.is_negative()) && q.bound > m {
            m = q.bound.clone();
        }
    }
    let hi = m * BigRational::new(5.into(), 4.into()) + BigRational::new(1.into(), 64.into());
    vec![(BigRational::zero(), hi.clone()), (BigRational::zero(), hi)]
}
