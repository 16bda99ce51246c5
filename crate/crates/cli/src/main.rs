//! `isac`: evaluate rate regions, trace sum-rate/distortion frontiers,
//! verify the rate-splitting projection and cross-check distortions by
//! simulation.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use thiserror::Error;

use isac_region::channel::{example1, example2, random_channel, ChannelSizes};
use isac_region::estimator::{
    default_conditioning, expected_distortion, extended_conditioning, min_expected_distortion,
    optimal_estimator,
};
use isac_region::fme::{
    projected_region, rate_box, rationalize_terms, systems_equivalent, theorem_system, to_f64, Equivalence,
};
use isac_region::frontier::{
    parse_grid, sig, trace_frontier_example2, trace_frontier_example2_both, trace_frontier_generic, Frontier,
    FrontierMode, SearchBudget,
};
use isac_region::io::{load_channel, load_scheme};
use isac_region::mcsim::{empirical_distortion, sample_joint};
use isac_region::region::{compute_info_terms, corollary_region, theorem_region, RegionDescription};
use isac_region::scheme::{
    build_example2_scheme, example1_copy_scheme, product_input_scheme, random_scheme, AuxSizes,
};
use isac_region::{assemble_joint, constant_v_scheme, ChannelSpec, Example2SchemeParams, SchemeSpec, User};

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Model(#[from] isac_region::Error),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "isac", version, about = "Rate-distortion regions of state-dependent MACs with generalized feedback")]
struct Cli {
    /// Log search progress to stderr (-v info, -vv debug)
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Information terms, rate region and distortions of one scheme
    EvaluateRegion(EvaluateArgs),
    /// Best sum-rate for each transmitter-2 distortion bound.
    ///
    /// CSV columns: d2_bound, best_sum_rate, feasible, d2_achieved,
    /// monotonized, then one column per scheme parameter (Example 2: p_u0,
    /// p_u1_given_0, p_u1_given_1, p_u2_given_0, p_u2_given_1, xi1, xi2, e).
    /// Numbers carry 12 significant digits.
    TraceFrontier(FrontierArgs),
    /// Check the projected rate-splitting system against the closed-form region
    VerifyFme(VerifyArgs),
    /// Monte Carlo estimate of a distortion against its analytic value
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// Binary channel Y = S2·X2 with feedback (Z1, Z2) = (S2, X1)
    #[arg(long, conflicts_with_all = ["example2", "channel"])]
    example1: bool,
    /// Additive channel with noisy feedback at transmitter 2 (the default)
    #[arg(long, conflicts_with = "channel")]
    example2: bool,
    /// Channel document (JSON)
    #[arg(long, value_name = "FILE")]
    channel: Option<PathBuf>,
    /// State probability P(S = 1)
    #[arg(long, default_value_t = 0.9)]
    ps: f64,
    /// Feedback noise probability of the additive channel
    #[arg(long, default_value_t = 0.2)]
    t: f64,
}

#[derive(Debug, Clone)]
enum ChannelChoice {
    Example1,
    Example2,
    File,
}

impl ChannelArgs {
    fn load(&self) -> Result<(ChannelChoice, ChannelSpec)> {
        if self.example1 {
            Ok((ChannelChoice::Example1, example1(self.ps)?))
        } else if let Some(path) = &self.channel {
            Ok((ChannelChoice::File, load_channel(&read(path)?)?))
        } else {
            Ok((ChannelChoice::Example2, example2(self.ps, self.t)?))
        }
    }

    fn describe(&self) -> String {
        if self.example1 {
            format!("example 1 (p_s = {})", self.ps)
        } else if let Some(path) = &self.channel {
            path.display().to_string()
        } else {
            format!("example 2 (p_s = {}, t = {})", self.ps, self.t)
        }
    }
}

#[derive(Debug, Args)]
struct SchemeArgs {
    /// Built-in scheme (v1-copy, corollary-min, compression, product) or a
    /// scheme document (JSON)
    #[arg(long, value_name = "NAME|FILE")]
    scheme: Option<String>,
    /// P(X1 = 1) of the compression scheme
    #[arg(long, default_value_t = 0.1)]
    q: f64,
    /// Eight comma-separated parameters of the binary family on Example 2
    #[arg(long, value_name = "P,P,...", conflicts_with = "scheme")]
    params: Option<String>,
    /// Deterministic inputs X1 = 0, X2 = 1 without compression
    #[arg(long, conflicts_with_all = ["scheme", "params"])]
    corollary_min_d2: bool,
}

impl SchemeArgs {
    fn build(&self, choice: &ChannelChoice, channel: &ChannelSpec) -> Result<SchemeSpec> {
        if self.corollary_min_d2 {
            return self.named("corollary-min", channel);
        }
        if let Some(p) = &self.params {
            let v: Vec<f64> = p
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| CliError::Usage(format!("--params: {e}")))?;
            let a: [f64; 8] = v
                .try_into()
                .map_err(|v: Vec<f64>| CliError::Usage(format!("--params needs 8 values, got {}", v.len())))?;
            return Ok(build_example2_scheme(&Example2SchemeParams::from_array(a), channel)?);
        }
        match (&self.scheme, choice) {
            (Some(s), _) => self.named(s, channel),
            (None, ChannelChoice::Example1) => self.named("v1-copy", channel),
            (None, ChannelChoice::Example2) => self.named("compression", channel),
            (None, ChannelChoice::File) => Err(CliError::Usage("--scheme is required with --channel".into())),
        }
    }

    fn named(&self, name: &str, channel: &ChannelSpec) -> Result<SchemeSpec> {
        Ok(match name {
            "v1-copy" => example1_copy_scheme(channel)?,
            "corollary-min" => constant_v_scheme(&build_example2_scheme(
                &Example2SchemeParams::deterministic_inputs(0, 1),
                channel,
            )?),
            "compression" => build_example2_scheme(&Example2SchemeParams::compression_min_distortion(self.q), channel)?,
            "product" => {
                let n1 = channel.alphabet(isac_region::names::X1)?.size();
                let n2 = channel.alphabet(isac_region::names::X2)?.size();
                product_input_scheme(channel, &vec![1.0 / n1 as f64; n1], &vec![1.0 / n2 as f64; n2])?
            }
            path => load_scheme(&read(Path::new(path))?, channel)?,
        })
    }
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Drop the compression auxiliaries and use the region without them
    #[arg(long)]
    corollary: bool,
    /// Write the inequalities as CSV (a1,a2,rhs_bits,strict)
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Write the region's vertices as CSV
    #[arg(long, value_name = "FILE")]
    vertices: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Theorem,
    Corollary,
    Both,
}

#[derive(Debug, Args)]
struct FrontierArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Which region to search over
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Distortion bounds as start:stop:step (inclusive)
    #[arg(long, default_value = "0.001:0.09:0.001")]
    d2_grid: String,
    /// Output prefix; writes PREFIX-theorem.csv and/or PREFIX-corollary.csv
    /// instead of printing
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
    /// Quasi-random seed points of the Example-2 search
    #[arg(long, default_value_t = 512)]
    seeds: usize,
    /// Random schemes drawn for channels other than Example 2
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    /// Seed of the search
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Number of random schemes
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Seed of the scheme and point generators
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Draw a fresh random binary channel for every instance
    #[arg(long)]
    random_channel: bool,
    /// Singleton auxiliaries with random input distributions
    #[arg(long)]
    singleton: bool,
    /// Lattice points per axis
    #[arg(long, default_value_t = 100)]
    grid: usize,
    /// Random rational points after the lattice
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Shift the projected R1 >= 0 row to R1 >= 1/64 (negative control)
    #[arg(long, hide = true)]
    perturb: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConditioningArg {
    /// (X_k, Z_k, U_other, V_other)
    Default,
    /// The default set plus U0
    Extended,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Strip the compression auxiliaries before estimating
    #[arg(long, default_value_t = false)]
    corollary: bool,
    /// Samples per run
    #[arg(short, long, default_value_t = 100_000)]
    n: usize,
    /// Seed of the first run
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Transmitter whose state is estimated
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    user: u8,
    #[arg(long, value_enum, default_value_t = ConditioningArg::Default)]
    conditioning: ConditioningArg,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let out = match cli.command {
        Command::EvaluateRegion(a) => evaluate(&a),
        Command::TraceFrontier(a) => frontier(&a),
        Command::VerifyFme(a) => verify(&a),
        Command::Simulate(a) => simulate(&a),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn region_report(region: &RegionDescription) -> String {
    let mut s = String::new();
    for q in &region.inequalities {
        let lhs = match (q.a1, q.a2) {
            (1, 0) => "R1",
            (0, 1) => "R2",
            _ => "R1 + R2",
        };
        let rel = if q.strict { "<" } else { "<=" };
        let _ = writeln!(s, "  {lhs:<8}{rel:<3}{:>16}   {}", sig(q.rhs), q.label);
    }
    if !region.feasibility.is_empty() {
        s.push_str("feasibility conditions (slack > 0)\n");
        for f in &region.feasibility {
            let _ = writeln!(s, "  {:<32}{:>16}", f.name, sig(f.slack));
        }
    }
    s
}

fn evaluate(a: &EvaluateArgs) -> Result<ExitCode> {
    let (choice, channel) = a.channel.load()?;
    let mut scheme = a.scheme.build(&choice, &channel)?;
    let corollary = a.corollary || a.scheme.corollary_min_d2;
    if corollary {
        scheme = constant_v_scheme(&scheme);
    }
    let joint = assemble_joint(&channel, &scheme)?;
    let info = compute_info_terms(&joint)?;
    let region = if corollary {
        corollary_region(&joint)?
    } else {
        theorem_region(&info)
    };
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", a.channel.describe());
    let _ = writeln!(out, "region: {}", if corollary { "without compression" } else { "with compression" });
    out.push_str("information terms (bits)\n");
    for (j, v) in info.0.iter().enumerate() {
        let _ = writeln!(out, "  I{j:<3}{:>16}", sig(*v));
    }
    out.push_str("rate inequalities\n");
    out.push_str(&region_report(&region));
    out.push_str("distortions\n");
    for k in [User::Tx1, User::Tx2] {
        for cond in [default_conditioning(k), extended_conditioning(k)] {
            let d = min_expected_distortion(&joint, k, channel.distortion(), &cond)?;
            let _ = writeln!(out, "  D{} | {:<18}= {}", k.number(), cond.join(","), sig(d));
        }
    }
    let d2 = min_expected_distortion(&joint, User::Tx2, channel.distortion(), &default_conditioning(User::Tx2))?;
    let _ = writeln!(out, "D2 = {}", sig(d2));
    match region.max_sum_rate() {
        Some(r) => {
            let _ = writeln!(out, "max sum-rate = {}", sig(r));
        }
        None => out.push_str("max sum-rate = none (region empty)\n"),
    }
    print!("{out}");
    if let Some(p) = &a.csv {
        write(p, &region.to_csv())?;
    }
    if let Some(p) = &a.vertices {
        write(p, &region.vertices_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn frontier(a: &FrontierArgs) -> Result<ExitCode> {
    let (choice, channel) = a.channel.load()?;
    let grid = parse_grid(&a.d2_grid)?;
    let modes: Vec<FrontierMode> = match a.mode {
        ModeArg::Theorem => vec![FrontierMode::Theorem],
        ModeArg::Corollary => vec![FrontierMode::Corollary],
        ModeArg::Both => vec![FrontierMode::Theorem, FrontierMode::Corollary],
    };
    let frontiers: Vec<Frontier> = match choice {
        ChannelChoice::Example2 => {
            let budget = SearchBudget {
                seeds: a.seeds,
                ..SearchBudget::default()
            };
            if a.mode == ModeArg::Both {
                let (t, c) = trace_frontier_example2_both(a.channel.ps, a.channel.t, &grid, &budget)?;
                vec![t, c]
            } else {
                vec![trace_frontier_example2(a.channel.ps, a.channel.t, &grid, &budget, modes[0])?]
            }
        }
        ChannelChoice::Example1 => modes
            .iter()
            .map(|&m| {
                // V1 either copies the state feedback or is constant
                let copy = example1_copy_scheme(&channel)?;
                let plain = constant_v_scheme(&copy);
                let sampler = |rng: &mut Xoshiro256PlusPlus| {
                    Ok(if rng.random_bool(0.5) { copy.clone() } else { plain.clone() })
                };
                trace_frontier_generic(&channel, sampler, &grid, a.budget, a.seed, m)
            })
            .collect::<isac_region::Result<_>>()?,
        ChannelChoice::File => modes
            .iter()
            .map(|&m| {
                let sampler = |rng: &mut Xoshiro256PlusPlus| random_scheme(rng, &channel, AuxSizes::default());
                trace_frontier_generic(&channel, sampler, &grid, a.budget, a.seed, m)
            })
            .collect::<isac_region::Result<_>>()?,
    };
    for f in &frontiers {
        let start = f.start().map(sig).unwrap_or_else(|| "none".into());
        let top = f.points.last().filter(|p| p.feasible).map(|p| sig(p.best_sum_rate));
        eprintln!(
            "{}: starts at D2 = {start}, best sum-rate {} ({} evaluations)",
            f.mode.name(),
            top.unwrap_or_else(|| "none".into()),
            f.evaluations
        );
        match &a.out {
            Some(prefix) => {
                let mut name = prefix.as_os_str().to_owned();
                name.push(format!("-{}.csv", f.mode.name()));
                write(Path::new(&name), &f.to_csv())?;
            }
            None => {
                println!("# {}", f.mode.name());
                print!("{}", f.to_csv());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: &VerifyArgs) -> Result<ExitCode> {
    if a.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let (choice, base) = a.channel.load()?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(a.seed);
    let mut passed = 0;
    for i in 0..a.count {
        let channel = if a.random_channel {
            random_channel(&mut rng, ChannelSizes::binary())?
        } else {
            base.clone()
        };
        let scheme = if a.singleton {
            let n1 = channel.alphabet(isac_region::names::X1)?.size();
            let n2 = channel.alphabet(isac_region::names::X2)?.size();
            let pmf = |rng: &mut Xoshiro256PlusPlus, n: usize| {
                let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect::<Vec<f64>>()
            };
            let (p1, p2) = (pmf(&mut rng, n1), pmf(&mut rng, n2));
            product_input_scheme(&channel, &p1, &p2)?
        } else if matches!(choice, ChannelChoice::Example2) && !a.random_channel {
            let mut p: [f64; 8] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
            // every other instance without compression, so that many
            // regions are nonempty
            if i % 2 == 0 {
                p[7] = 1.0;
            }
            build_example2_scheme(&Example2SchemeParams::from_array(p), &channel)?
        } else {
            let v = if i % 2 == 0 { 1 } else { 2 };
            random_scheme(&mut rng, &channel, AuxSizes { v1: v, v2: v, ..AuxSizes::default() })?
        };
        let joint = assemble_joint(&channel, &scheme)?;
        let info = compute_info_terms(&joint)?;
        let sum_rate = theorem_region(&info)
            .max_sum_rate()
            .map_or_else(|| "empty region".to_string(), |r| format!("max sum-rate {}", sig(r)));
        let terms = rationalize_terms(&info)?;
        let closed = theorem_system(&terms);
        let mut shadow = projected_region(&terms);
        if a.perturb {
            perturb(&mut shadow)?;
        }
        match systems_equivalent(&shadow, &closed, &rate_box(&closed), a.grid, a.samples, a.seed.wrapping_add(i as u64))? {
            Equivalence::Equivalent { points_checked } => {
                passed += 1;
                println!("instance {i}: equivalent ({points_checked} points, {sum_rate})");
            }
            Equivalence::Counterexample { point, in_first } => {
                println!(
                    "instance {i}: counterexample at (R1, R2) = ({}, {}) = ({}, {}); in projection: {in_first}, in closed form: {} ({sum_rate})",
                    point[0],
                    point[1],
                    sig(to_f64(&point[0])),
                    sig(to_f64(&point[1])),
                    !in_first
                );
            }
        }
    }
    println!("{passed}/{} equivalent", a.count);
    Ok(if passed == a.count { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn perturb(sys: &mut isac_region::fme::RationalLinearSystem) -> Result<()> {
    // stored rows are normalized to `c·x <= b`; R1 >= 0 reads -R1 <= 0
    let minus_one = -BigRational::from_integer(1.into());
    let zero = BigRational::from_integer(0.into());
    let row = sys
        .inequalities()
        .iter()
        .position(|q| q.coeffs == [minus_one.clone(), zero.clone()] && q.bound == zero)
        .ok_or_else(|| CliError::Usage("projection has no R1 >= 0 row to perturb".into()))?;
    sys.shift_bound(row, &BigRational::new((-1).into(), 64.into()))?;
    Ok(())
}

fn simulate(a: &SimulateArgs) -> Result<ExitCode> {
    if a.n == 0 || a.runs == 0 {
        return Err(CliError::Usage("--n and --runs must be at least 1".into()));
    }
    let (choice, channel) = a.channel.load()?;
    let mut scheme = a.scheme.build(&choice, &channel)?;
    if a.corollary || a.scheme.corollary_min_d2 {
        scheme = constant_v_scheme(&scheme);
    }
    let joint = assemble_joint(&channel, &scheme)?;
    let k = User::from_number(a.user)?;
    let cond = match a.conditioning {
        ConditioningArg::Default => default_conditioning(k),
        ConditioningArg::Extended => extended_conditioning(k),
    };
    let est = optimal_estimator(&joint, k, channel.distortion(), &cond)?;
    let exact = expected_distortion(&joint, &est, channel.distortion())?;
    println!("D{} | {}: analytic {}", a.user, cond.join(","), sig(exact));
    println!("run,seed,n,empirical,std_error,z");
    let mut within = 0;
    for r in 0..a.runs {
        let seed = a.seed.wrapping_add(r);
        let e = empirical_distortion(&sample_joint(&joint, a.n, seed)?, &est, channel.distortion())?;
        let z = if e.std_error > 0.0 {
            (e.mean - exact) / e.std_error
        } else if e.mean == exact {
            0.0
        } else {
            f64::INFINITY
        };
        if z.abs() <= 3.0 {
            within += 1;
        }
        println!("{r},{seed},{},{},{},{}", e.n, sig(e.mean), sig(e.std_error), sig(z));
    }
    println!("{within}/{} runs within 3 standard errors", a.runs);
    Ok(ExitCode::SUCCESS)
}
