//! Sum-rate versus distortion frontiers obtained by searching over
//! scheme parameters.
//!
//! Every evaluated scheme yields a pair `(D2, best sum-rate)`; a frontier
//! point for the bound `d` is the best sum-rate among evaluated schemes
//! with `D2 <= d`. Reported values are therefore lower bounds on the true
//! frontier.
//!
//! The search for the binary family runs in three phases that share one
//! evaluation cache:
//!
//! 1. a seed set: every vertex of `{0, 1/2, 1}^n` plus quasi-random
//!    (Halton) points;
//! 2. a distortion descent: compass search minimizing `D2` among feasible
//!    schemes, started from the lowest-distortion distinct schemes and from
//!    the best scheme of each stratum of `(P(U0=1), P(Xi1=1), P(Xi2=1),
//!    P(E=1))` over `{0, interior, 1}`, so that the start of the frontier
//!    is located;
//! 3. for each bound, ascending, a compass search maximizing the sum-rate
//!    subject to `D2 <= bound`, warm-started from the best known schemes.
//!
//! Compass steps shrink `1/16 -> 1/64 -> 1/256`, i.e. the coarse grid of
//! step `1/16` followed by two 4x refinements.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::channel::{example2, names::*, ChannelSpec, User};
use crate::error::{Error, Result};
use crate::estimator::{default_conditioning, min_expected_distortion};
use crate::prob::InfoCache;
use crate::region::{compute_info_terms, CLOSURE_SLACK, corollary_region, theorem_region, FeasibilityCondition};
use crate::scheme::{assemble_joint, build_example2_scheme, constant_v_scheme, Example2SchemeParams, SchemeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontierMode {
    /// Full scheme with compression.
    Theorem,
    /// Constant compression variables.
    Corollary,
}

impl FrontierMode {
    pub fn name(self) -> &'static str {
        match self {
            FrontierMode::Theorem => "theorem",
            FrontierMode::Corollary => "corollary",
        }
    }
}

/// Result of evaluating one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub d2: f64,
    /// Largest sum-rate of the closed region; `None` when it is empty.
    pub sum_rate: Option<f64>,
    pub slacks: Vec<FeasibilityCondition>,
}

/// Evaluates a scheme: transmitter-2 distortion with the default
/// conditioning set and the best sum-rate of the matching region.
pub fn evaluate_scheme(channel: &ChannelSpec, scheme: &SchemeSpec, mode: FrontierMode) -> Result<Evaluation> {
    let scheme = match mode {
        FrontierMode::Theorem => scheme.clone(),
        FrontierMode::Corollary => constant_v_scheme(scheme),
    };
    let joint = assemble_joint(channel, &scheme)?;
    let d2 = min_expected_distortion(&joint, User::Tx2, channel.distortion(), &default_conditioning(User::Tx2))?;
    let region = match mode {
        FrontierMode::Theorem => theorem_region(&compute_info_terms(&joint)?),
        FrontierMode::Corollary => corollary_region(&joint)?,
    };
    Ok(Evaluation {
        d2,
        sum_rate: region.max_sum_rate(),
        slacks: region.feasibility,
    })
}

pub fn evaluate_example2(channel: &ChannelSpec, params: &Example2SchemeParams, mode: FrontierMode) -> Result<Evaluation> {
    let mut p = *params;
    if mode == FrontierMode::Corollary {
        p.e = 1.0;
    }
    evaluate_scheme(channel, &build_example2_scheme(&p, channel)?, mode)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    pub d2_bound: f64,
    /// 0 when no feasible scheme was found.
    pub best_sum_rate: f64,
    pub feasible: bool,
    /// Distortion actually achieved by the argmax scheme.
    pub d2_achieved: Option<f64>,
    /// Parameters of the argmax scheme (family-specific).
    pub argmax_params: Option<Vec<f64>>,
    pub feasibility_slacks: Vec<FeasibilityCondition>,
    /// Set when the point was raised to the value of a smaller bound.
    pub monotonized: bool,
    /// Schemes evaluated for this bound (cumulative cache size for the
    /// binary family, sampler draws for the generic search).
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    pub mode: FrontierMode,
    pub param_names: Vec<String>,
    pub points: Vec<FrontierPoint>,
    pub evaluations: usize,
}

/// Decimal rendering with at most 12 significant digits.
pub fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // 12 significant digits, trailing zeros trimmed
    let s = format!("{:.*e}", 11, x);
    let v: f64 = s.parse().unwrap_or(x);
    let mut out = format!("{v}");
    if out.contains('e') {
        out = s;
    }
    out
}

impl Frontier {
    /// Columns: `d2_bound,best_sum_rate,feasible,d2_achieved,monotonized`
    /// followed by one column per scheme parameter.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d2_bound,best_sum_rate,feasible,d2_achieved,monotonized");
        for n in &self.param_names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for p in &self.points {
            let _ = write!(
                out,
                "{},{},{},{},{}",
                sig(p.d2_bound),
                sig(p.best_sum_rate),
                p.feasible,
                p.d2_achieved.map(sig).unwrap_or_default(),
                p.monotonized
            );
            match &p.argmax_params {
                Some(v) => v.iter().for_each(|x| {
                    let _ = write!(out, ",{}", sig(*x));
                }),
                None => self.param_names.iter().for_each(|_| out.push(',')),
            }
            out.push('\n');
        }
        out
    }

    /// First bound with a feasible scheme.
    pub fn start(&self) -> Option<f64> {
        self.points.iter().find(|p| p.feasible).map(|p| p.d2_bound)
    }

    pub fn value_at(&self, d2: f64) -> Option<f64> {
        self.points
            .iter()
            .filter(|p| p.d2_bound <= d2 + 1e-12)
            .last()
            .map(|p| p.best_sum_rate)
    }
}

/// Search effort for the binary family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Quasi-random seed points in addition to the `{0,1/2,1}` lattice.
    pub seeds: usize,
    /// Compass-step denominators, coarse to fine.
    pub steps: [u32; 3],
    /// Cap on compass moves per bound and step size.
    pub max_moves: usize,
    /// Best known schemes used as warm starts for each bound.
    pub starts: usize,
    /// Distinct low-distortion schemes the distortion descent starts from.
    pub descent_starts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            seeds: 512,
            steps: [16, 64, 256],
            max_moves: 40,
            starts: 2,
            descent_starts: 24,
        }
    }
}

/// `a:b:step`, inclusive of `b` up to rounding.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Configuration(format!("grid `{spec}` must look like start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (a, b, step) = (v[0], v[1], v[2]);
    if !(step > 0.0) || b < a || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| {
        let x = a + step * i as f64;
        // snap to 12 significant digits so 0.01 + 3*0.005 prints as 0.025
        sig(x).parse().unwrap_or(x)
    }).collect())
}

fn halton(index: usize, base: usize) -> f64 {
    let (mut f, mut r, mut i) = (1.0, 0.0, index);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Parameters on the lattice of the finest step, used as cache keys.
type Key = [u32; 8];

const FINE: u32 = 1024;

fn key_of(x: &[f64; 8]) -> Key {
    x.map(|v| (v.clamp(0.0, 1.0) * f64::from(FINE)).round() as u32)
}

fn params_of(k: &Key) -> [f64; 8] {
    k.map(|v| f64::from(v) / f64::from(FINE))
}

struct Searcher<'a> {
    channel: &'a ChannelSpec,
    mode: FrontierMode,
    /// Coordinates being searched (corollary mode ignores `e`).
    dims: Vec<usize>,
    cache: HashMap<Key, Option<(f64, f64)>>,
    /// Insertion order of `cache`, for deterministic scans.
    order: Vec<Key>,
}

impl<'a> Searcher<'a> {
    fn new(channel: &'a ChannelSpec, mode: FrontierMode) -> Self {
        let dims = match mode {
            FrontierMode::Theorem => (0..8).collect(),
            FrontierMode::Corollary => (0..7).collect(),
        };
        Self {
            channel,
            mode,
            dims,
            cache: HashMap::new(),
            order: Vec::new(),
        }
    }

    fn normalize(&self, mut k: Key) -> Key {
        if self.mode == FrontierMode::Corollary {
            k[7] = FINE;
        }
        k
    }

    /// `(d2, sum_rate)` for feasible schemes.
    fn eval(&mut self, k: Key) -> Result<Option<(f64, f64)>> {
        let k = self.normalize(k);
        if let Some(v) = self.cache.get(&k) {
            return Ok(*v);
        }
        let p = Example2SchemeParams::from_array(params_of(&k));
        let ev = evaluate_example2(self.channel, &p, self.mode)?;
        let v = ev.sum_rate.map(|s| (ev.d2, s));
        self.cache.insert(k, v);
        self.order.push(k);
        Ok(v)
    }

    fn feasible(&self) -> impl Iterator<Item = (Key, f64, f64)> + '_ {
        self.order
            .iter()
            .filter_map(|k| self.cache[k].map(|(d, s)| (*k, d, s)))
    }

    fn neighbours(&self, k: &Key, step: u32) -> Vec<Key> {
        let mut out = Vec::with_capacity(2 * self.dims.len());
        for &i in &self.dims {
            if k[i] >= step {
                let mut n = *k;
                n[i] -= step;
                out.push(n);
            }
            if k[i] + step <= FINE {
                let mut n = *k;
                n[i] += step;
                out.push(n);
            }
        }
        out
    }

    fn seed(&mut self, budget: &SearchBudget) -> Result<()> {
        let n = self.dims.len();
        for flat in 0..3usize.pow(n as u32) {
            let mut k = [FINE; 8];
            let mut f = flat;
            for &i in &self.dims {
                k[i] = (f % 3) as u32 * FINE / 2;
                f /= 3;
            }
            self.eval(k)?;
        }
        for j in 1..=budget.seeds {
            let mut x = [1.0; 8];
            for (slot, &i) in self.dims.iter().enumerate() {
                x[i] = halton(j, PRIMES[slot]);
            }
            // snap to the coarse grid so compass moves stay on lattice
            let coarse = FINE / budget.steps[0];
            let k = key_of(&x).map(|v| (v + coarse / 2) / coarse * coarse);
            self.eval(k)?;
        }
        Ok(())
    }

    /// Compass search from `start` maximizing `score` over feasible keys.
    fn compass(
        &mut self,
        start: Key,
        budget: &SearchBudget,
        score: impl Fn(f64, f64) -> Option<f64>,
    ) -> Result<Key> {
        let mut best = start;
        let mut best_score = match self.eval(start)? {
            Some((d, s)) => score(d, s).unwrap_or(f64::NEG_INFINITY),
            None => f64::NEG_INFINITY,
        };
        for &den in &budget.steps {
            let step = FINE / den;
            for _ in 0..budget.max_moves {
                let mut improved = false;
                for n in self.neighbours(&best, step) {
                    if let Some((d, s)) = self.eval(n)? {
                        if let Some(v) = score(d, s) {
                            if v > best_score + 1e-12 {
                                best = n;
                                best_score = v;
                                improved = true;
                            }
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
        }
        Ok(best)
    }

    fn best_under(&self, bound: f64, take: usize) -> Vec<Key> {
        let mut v: Vec<(Key, f64, f64)> = self.feasible().filter(|(_, d, _)| *d <= bound).collect();
        v.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.1.total_cmp(&b.1)).then(a.0.cmp(&b.0)));
        v.into_iter().take(take).map(|(k, _, _)| k).collect()
    }
}

/// Traces the frontier of the binary family on the additive example
/// channel with receiver state information. Theorem mode also runs the
/// corollary search and uses its schemes as warm starts, since erasing
/// the compression (`e = 1`) turns a corollary scheme into a theorem one.
pub fn trace_frontier_example2(
    p_s: f64,
    t: f64,
    d2_grid: &[f64],
    budget: &SearchBudget,
    mode: FrontierMode,
) -> Result<Frontier> {
    match mode {
        FrontierMode::Corollary => search_example2(p_s, t, d2_grid, budget, mode, &[]),
        FrontierMode::Theorem => Ok(trace_frontier_example2_both(p_s, t, d2_grid, budget)?.0),
    }
}

/// Theorem and corollary frontiers on one grid, `(theorem, corollary)`.
pub fn trace_frontier_example2_both(
    p_s: f64,
    t: f64,
    d2_grid: &[f64],
    budget: &SearchBudget,
) -> Result<(Frontier, Frontier)> {
    let corollary = search_example2(p_s, t, d2_grid, budget, FrontierMode::Corollary, &[])?;
    let warm: Vec<Key> = corollary
        .points
        .iter()
        .filter_map(|p| p.argmax_params.as_deref())
        .filter_map(|v| <[f64; 8]>::try_from(v).ok())
        .map(|a| key_of(&a))
        .collect();
    let theorem = search_example2(p_s, t, d2_grid, budget, FrontierMode::Theorem, &warm)?;
    Ok((theorem, corollary))
}

fn search_example2(
    p_s: f64,
    t: f64,
    d2_grid: &[f64],
    budget: &SearchBudget,
    mode: FrontierMode,
    warm: &[Key],
) -> Result<Frontier> {
    let channel = example2(p_s, t)?;
    check_grid(d2_grid)?;
    if budget.seeds == 0 && budget.max_moves == 0 {
        return Err(Error::Configuration("search budget must be at least 1".into()));
    }
    let mut s = Searcher::new(&channel, mode);
    s.seed(budget)?;
    for k in warm {
        s.eval(*k)?;
    }

    // distortion descent from distinct low-distortion feasible schemes;
    // schemes with identical (D2, sum-rate) are treated as duplicates
    let mut low: Vec<(Key, f64, f64)> = s.feasible().collect();
    low.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut seen = std::collections::HashSet::new();
    let mut starts: Vec<Key> = low
        .iter()
        .filter(|(_, d, r)| seen.insert((d.to_bits(), r.to_bits())))
        .take(budget.descent_starts.max(1))
        .map(|(k, _, _)| *k)
        .collect();
    // plus the lowest-distortion scheme of every stratum of
    // (P(U0=1), P(Xi1=1), P(Xi2=1), P(E=1)) in {0, interior, 1}^4, so that
    // structurally different families (e.g. with and without compression)
    // each get a descent
    let class = |v: u32| match v {
        0 => 0,
        FINE => 2,
        _ => 1,
    };
    let mut strata = std::collections::HashSet::new();
    for (k, _, _) in &low {
        if strata.insert([0, 5, 6, 7].map(|i| class(k[i]))) && !starts.contains(k) {
            starts.push(*k);
        }
    }
    for k in starts {
        s.compass(k, budget, |d, _| Some(-d))?;
    }

    let mut points = Vec::with_capacity(d2_grid.len());
    let mut prev: Vec<Key> = Vec::new();
    for &bound in d2_grid {
        let mut starts = s.best_under(bound, budget.starts.max(1));
        for k in &prev {
            if !starts.contains(k) {
                starts.push(*k);
            }
        }
        for k in starts {
            s.compass(k, budget, |d, r| (d <= bound).then_some(r))?;
        }
        let best = s.best_under(bound, 1);
        prev = best.clone();
        points.push(match best.first() {
            Some(k) => {
                let p = params_of(k);
                let ev = evaluate_example2(&channel, &Example2SchemeParams::from_array(p), mode)?;
                FrontierPoint {
                    d2_bound: bound,
                    best_sum_rate: ev.sum_rate.unwrap_or(0.0),
                    feasible: true,
                    d2_achieved: Some(ev.d2),
                    argmax_params: Some(p.to_vec()),
                    feasibility_slacks: ev.slacks,
                    monotonized: false,
                    samples: s.cache.len(),
                }
            }
            None => infeasible_point(bound, s.cache.len()),
        });
    }
    let mut f = Frontier {
        mode,
        param_names: Example2SchemeParams::FIELD_NAMES.iter().map(|s| s.to_string()).collect(),
        points,
        evaluations: s.cache.len(),
    };
    monotonize(&mut f);
    certify_example2(&channel, &f)?;
    Ok(f)
}

fn infeasible_point(bound: f64, samples: usize) -> FrontierPoint {
    FrontierPoint {
        d2_bound: bound,
        best_sum_rate: 0.0,
        feasible: false,
        d2_achieved: None,
        argmax_params: None,
        feasibility_slacks: Vec::new(),
        monotonized: false,
        samples,
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Configuration("distortion grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Configuration("distortion grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Raises every point to the best value at any smaller bound: a scheme
/// feasible at `d` is feasible at every `d' > d`.
pub fn monotonize(f: &mut Frontier) {
    for i in 1..f.points.len() {
        let (head, tail) = f.points.split_at_mut(i);
        let prev = &head[i - 1];
        let cur = &mut tail[0];
        let better = prev.feasible && (!cur.feasible || prev.best_sum_rate > cur.best_sum_rate);
        if better {
            log::info!(
                "{} frontier: D2 <= {} raised from {} to {} (scheme of D2 <= {})",
                f.mode.name(),
                cur.d2_bound,
                cur.best_sum_rate,
                prev.best_sum_rate,
                prev.d2_bound
            );
            let (bound, samples) = (cur.d2_bound, cur.samples);
            *cur = FrontierPoint {
                d2_bound: bound,
                samples,
                monotonized: true,
                ..prev.clone()
            };
        }
    }
}

fn certify_example2(channel: &ChannelSpec, f: &Frontier) -> Result<()> {
    for p in f.points.iter().filter(|p| p.feasible) {
        let a: [f64; 8] = p
            .argmax_params
            .as_deref()
            .and_then(|v| v.try_into().ok())
            .ok_or_else(|| Error::InternalConsistency("feasible point without parameters".into()))?;
        let ev = evaluate_example2(channel, &Example2SchemeParams::from_array(a), f.mode)?;
        certify(p, &ev)?;
    }
    Ok(())
}

fn certify(p: &FrontierPoint, ev: &Evaluation) -> Result<()> {
    let ok = ev.sum_rate == Some(p.best_sum_rate) && ev.d2 <= p.d2_bound && Some(ev.d2) == p.d2_achieved;
    if ok {
        Ok(())
    } else {
        Err(Error::InternalConsistency(format!(
            "frontier point at D2 <= {} does not re-evaluate to its reported value",
            p.d2_bound
        )))
    }
}

/// Random-restart frontier for arbitrary channels: `budget` schemes are
/// drawn from `sampler` with a xoshiro256++ generator seeded by `seed`.
pub fn trace_frontier_generic<F>(
    channel: &ChannelSpec,
    mut sampler: F,
    d2_grid: &[f64],
    budget: usize,
    seed: u64,
    mode: FrontierMode,
) -> Result<Frontier>
where
    F: FnMut(&mut Xoshiro256PlusPlus) -> Result<SchemeSpec>,
{
    check_grid(d2_grid)?;
    if budget == 0 {
        return Err(Error::Configuration("budget must be at least 1".into()));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut evaluated: Vec<(SchemeSpec, Evaluation)> = Vec::with_capacity(budget);
    for _ in 0..budget {
        let scheme = sampler(&mut rng)?;
        let ev = evaluate_scheme(channel, &scheme, mode)?;
        evaluated.push((scheme, ev));
    }
    let mut points = Vec::with_capacity(d2_grid.len());
    for &bound in d2_grid {
        let best = evaluated
            .iter()
            .enumerate()
            .filter(|(_, (_, e))| e.d2 <= bound && e.sum_rate.is_some())
            .max_by(|a, b| {
                let (sa, sb) = (a.1 .1.sum_rate.unwrap(), b.1 .1.sum_rate.unwrap());
                // earliest draw wins ties
                sa.total_cmp(&sb).then(b.0.cmp(&a.0))
            });
        points.push(match best {
            Some((i, (scheme, ev))) => {
                let again = evaluate_scheme(channel, scheme, mode)?;
                let p = FrontierPoint {
                    d2_bound: bound,
                    best_sum_rate: ev.sum_rate.unwrap_or(0.0),
                    feasible: true,
                    d2_achieved: Some(ev.d2),
                    argmax_params: Some(vec![i as f64]),
                    feasibility_slacks: ev.slacks.clone(),
                    monotonized: false,
                    samples: budget,
                };
                certify(&p, &again)?;
                p
            }
            None => infeasible_point(bound, budget),
        });
    }
    let mut f = Frontier {
        mode,
        param_names: vec!["sample_index".into()],
        points,
        evaluations: budget,
    };
    monotonize(&mut f);
    Ok(f)
}

/// Both readings of the permissibility condition on the input of
/// transmitter 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Eq9Report {
    /// `I(X1;Z2|X2) - I(V1;Y|Z1)`, evaluated exactly as printed.
    pub literal_slack: f64,
    /// Signed slacks of the region's feasibility conditions.
    pub theorem_slacks: Vec<FeasibilityCondition>,
}

impl Eq9Report {
    pub fn min_theorem_slack(&self) -> f64 {
        self.theorem_slacks
            .iter()
            .map(|f| f.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn eq9_feasibility_check(params: &Example2SchemeParams, channel: &ChannelSpec) -> Result<Eq9Report> {
    let joint = assemble_joint(channel, &build_example2_scheme(params, channel)?)?;
    let c = InfoCache::new(&joint);
    let literal_slack = c.cmi(&[X1], &[Z2], &[X2])? - c.cmi(&[V1], &[Y], &[Z1])?;
    let region = theorem_region(&compute_info_terms(&joint)?);
    Ok(Eq9Report {
        literal_slack,
        theorem_slacks: region.feasibility,
    })
}

/// Smallest `q = P(X1 = 1)` in `[lo, hi]` for which the compression
/// scheme `U1 = X1 ~ Ber(q)`, `X2 = 1`, `V1 = 1{Z1 = 1}` satisfies every
/// feasibility condition (closure semantics), located by bisection on the
/// minimum slack.
/// Requires the slack to be negative at `lo` and nonnegative at `hi`.
pub fn eq9_threshold(channel: &ChannelSpec, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let slack = |q: f64| -> Result<f64> {
        Ok(eq9_feasibility_check(&Example2SchemeParams::compression_min_distortion(q), channel)?
            .min_theorem_slack()
            + CLOSURE_SLACK)
    };
    let (mut a, mut b) = (lo, hi);
    if slack(a)? >= 0.0 || slack(b)? < 0.0 {
        return Err(Error::Precondition(format!(
            "feasibility slack does not change sign on [{lo}, {hi}]"
        )));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if slack(m)? >= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0.01:0.08:0.005").unwrap();
        assert_eq!(g.len(), 15);
        assert_eq!(g[3], 0.025);
        assert_eq!(*g.last().unwrap(), 0.08);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn sig_digits() {
        assert_eq!(sig(0.02), "0.02");
        assert_eq!(sig(0.009000000000000001), "0.009");
        assert_eq!(sig(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn erased_compression_has_nonnegative_slacks() {
        let ch = example2(0.9, 0.2).unwrap();
        let mut p = Example2SchemeParams::compression_min_distortion(0.3);
        p.e = 1.0;
        let r = eq9_feasibility_check(&p, &ch).unwrap();
        assert!(r.min_theorem_slack() >= 0.0);
        assert!(r.literal_slack >= 0.0);
    }

    #[test]
    fn monotonization_is_flagged() {
        let pt = |d: f64, s: f64| FrontierPoint {
            d2_bound: d,
            best_sum_rate: s,
            feasible: true,
            d2_achieved: Some(d),
            argmax_params: Some(vec![s]),
            feasibility_slacks: vec![],
            monotonized: false,
            samples: 1,
        };
        let mut f = Frontier {
            mode: FrontierMode::Theorem,
            param_names: vec!["x".into()],
            points: vec![pt(0.1, 1.0), pt(0.2, 0.5), pt(0.3, 2.0)],
            evaluations: 3,
        };
        monotonize(&mut f);
        assert!(f.points[1].monotonized);
        assert_eq!(f.points[1].best_sum_rate, 1.0);
        assert_eq!(f.points[1].d2_bound, 0.2);
        assert!(!f.points[2].monotonized);
    }
}
