//! Python bindings: channels, schemes, joint distributions, regions,
//! frontiers, projection checks and Monte Carlo runs.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use isac_region::channel::{example1, example2};
use isac_region::estimator::{default_conditioning, expected_distortion, min_expected_distortion, optimal_estimator};
use isac_region::fme::{projected_region, rate_box, rationalize_terms, systems_equivalent, theorem_system};
use isac_region::frontier::{parse_grid, trace_frontier_example2, trace_frontier_example2_both, FrontierMode, SearchBudget};
use isac_region::io::{load_channel, load_scheme, save_channel, save_scheme};
use isac_region::mcsim::{empirical_distortion, sample_joint};
use isac_region::region::{compute_info_terms, corollary_region, theorem_region, RegionDescription};
use isac_region::scheme::{build_example2_scheme, example1_copy_scheme};
use isac_region::{
    assemble_joint, constant_v_scheme, Alphabet, ChannelSpec, Example2SchemeParams, JointDistribution, SchemeSpec,
    User, Variable,
};

fn err(e: isac_region::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn user(k: u8) -> PyResult<User> {
    User::from_number(k).map_err(err)
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[pyclass(name = "Channel", frozen)]
struct PyChannel {
    inner: ChannelSpec,
}

#[pymethods]
impl PyChannel {
    /// Binary channel Y = S2·X2 with feedback (Z1, Z2) = (S2, X1).
    #[staticmethod]
    fn example1(p_s: f64) -> PyResult<Self> {
        Ok(Self { inner: example1(p_s).map_err(err)? })
    }

    /// Additive channel with noisy feedback at transmitter 2.
    #[staticmethod]
    #[pyo3(signature = (p_s=0.9, t=0.2))]
    fn example2(p_s: f64, t: f64) -> PyResult<Self> {
        Ok(Self { inner: example2(p_s, t).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: load_channel(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        save_channel(&self.inner)
    }
}

#[pyclass(name = "Scheme", frozen)]
struct PyScheme {
    inner: SchemeSpec,
}

#[pymethods]
impl PyScheme {
    /// Binary family on the additive channel from its eight parameters
    /// (p_u0, p_u1|0, p_u1|1, p_u2|0, p_u2|1, xi1, xi2, e).
    #[staticmethod]
    fn example2(channel: &PyChannel, params: [f64; 8]) -> PyResult<Self> {
        let p = Example2SchemeParams::from_array(params);
        Ok(Self { inner: build_example2_scheme(&p, &channel.inner).map_err(err)? })
    }

    /// X1 ~ Ber(q) forwarded losslessly through V1, X2 = 1.
    #[staticmethod]
    fn compression(channel: &PyChannel, q: f64) -> PyResult<Self> {
        let p = Example2SchemeParams::compression_min_distortion(q);
        Ok(Self { inner: build_example2_scheme(&p, &channel.inner).map_err(err)? })
    }

    /// X1 = 0, X2 = 1 with constant V1, V2.
    #[staticmethod]
    fn corollary_min(channel: &PyChannel) -> PyResult<Self> {
        let p = Example2SchemeParams::deterministic_inputs(0, 1);
        let s = build_example2_scheme(&p, &channel.inner).map_err(err)?;
        Ok(Self { inner: constant_v_scheme(&s) })
    }

    /// V1 copies the state feedback Z1 on the binary channel.
    #[staticmethod]
    fn example1_copy(channel: &PyChannel) -> PyResult<Self> {
        Ok(Self { inner: example1_copy_scheme(&channel.inner).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str, channel: &PyChannel) -> PyResult<Self> {
        Ok(Self { inner: load_scheme(text, &channel.inner).map_err(err)? })
    }

    fn to_json(&self) -> String {
        save_scheme(&self.inner)
    }

    /// The same scheme with V1, V2 replaced by constants.
    fn constant_v(&self) -> Self {
        Self { inner: constant_v_scheme(&self.inner) }
    }
}

#[pyclass(name = "Joint", frozen)]
struct PyJoint {
    inner: JointDistribution,
}

#[pymethods]
impl PyJoint {
    /// Joint pmf over named variables with symbols 0..size, weights in
    /// row-major order (last variable fastest).
    #[new]
    fn new(names: Vec<String>, sizes: Vec<usize>, weights: Vec<f64>) -> PyResult<Self> {
        if names.len() != sizes.len() {
            return Err(PyValueError::new_err("names and sizes differ in length"));
        }
        let vars = names
            .iter()
            .zip(&sizes)
            .map(|(n, &k)| Variable::new(n, Alphabet::range(n, k)))
            .collect();
        Ok(Self { inner: JointDistribution::new(vars, weights).map_err(err)? })
    }

    /// Joint of all scheme and channel variables.
    #[staticmethod]
    fn assemble(channel: &PyChannel, scheme: &PyScheme) -> PyResult<Self> {
        Ok(Self { inner: assemble_joint(&channel.inner, &scheme.inner).map_err(err)? })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.variables().iter().map(|v| v.name.clone()).collect()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    /// I(A;B|C) in bits.
    #[pyo3(signature = (a, b, c=Vec::new()))]
    fn cmi(&self, a: Vec<String>, b: Vec<String>, c: Vec<String>) -> PyResult<f64> {
        self.inner
            .conditional_mutual_information(&strs(&a), &strs(&b), &strs(&c))
            .map_err(err)
    }

    /// H(A|C) in bits.
    #[pyo3(signature = (a, given=Vec::new()))]
    fn entropy(&self, a: Vec<String>, given: Vec<String>) -> PyResult<f64> {
        self.inner.entropy(&strs(&a), &strs(&given)).map_err(err)
    }

    fn marginalize(&self, keep: Vec<String>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.marginalize(&strs(&keep)).map_err(err)? })
    }

    /// The sixteen information terms I0..I15 of an assembled joint.
    fn info_terms(&self) -> PyResult<Vec<f64>> {
        Ok(compute_info_terms(&self.inner).map_err(err)?.0.to_vec())
    }
}

#[pyclass(name = "Region", frozen)]
struct PyRegion {
    inner: RegionDescription,
}

#[pymethods]
impl PyRegion {
    /// Rows `(a1, a2, rhs_bits, strict, label)` of `a1 R1 + a2 R2 < rhs`.
    #[getter]
    fn inequalities(&self) -> Vec<(u8, u8, f64, bool, String)> {
        self.inner
            .inequalities
            .iter()
            .map(|q| (q.a1, q.a2, q.rhs, q.strict, q.label.clone()))
            .collect()
    }

    /// `(name, slack)` of every rate-free condition; each needs slack > 0.
    #[getter]
    fn feasibility(&self) -> Vec<(String, f64)> {
        self.inner
            .feasibility
            .iter()
            .map(|f| (f.name.clone(), f.slack))
            .collect()
    }

    #[getter]
    fn max_sum_rate(&self) -> Option<f64> {
        self.inner.max_sum_rate()
    }

    fn vertices(&self) -> Vec<(f64, f64)> {
        self.inner.vertices()
    }

    #[pyo3(signature = (r1, r2, closure=true))]
    fn contains(&self, r1: f64, r2: f64, closure: bool) -> bool {
        self.inner.contains(r1, r2, closure)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

/// Rate region of a scheme; with `corollary` the compression auxiliaries
/// are dropped first.
#[pyfunction]
#[pyo3(signature = (channel, scheme, corollary=false))]
fn region(channel: &PyChannel, scheme: &PyScheme, corollary: bool) -> PyResult<PyRegion> {
    let inner = if corollary {
        let j = assemble_joint(&channel.inner, &constant_v_scheme(&scheme.inner)).map_err(err)?;
        corollary_region(&j).map_err(err)?
    } else {
        let j = assemble_joint(&channel.inner, &scheme.inner).map_err(err)?;
        theorem_region(&compute_info_terms(&j).map_err(err)?)
    };
    Ok(PyRegion { inner })
}

/// Minimum expected distortion of transmitter `user` given `conditioning`
/// (default: its own input and feedback plus the other's auxiliaries).
#[pyfunction]
#[pyo3(signature = (channel, scheme, user=2, conditioning=None))]
fn distortion(channel: &PyChannel, scheme: &PyScheme, user: u8, conditioning: Option<Vec<String>>) -> PyResult<f64> {
    let k = self::user(user)?;
    let j = assemble_joint(&channel.inner, &scheme.inner).map_err(err)?;
    let cond = conditioning.unwrap_or_else(|| default_conditioning(k).into_iter().map(String::from).collect());
    min_expected_distortion(&j, k, channel.inner.distortion(), &strs(&cond)).map_err(err)
}

/// Frontier of the additive example as `(d2_bound, best_sum_rate,
/// feasible)` rows, per mode (`"theorem"`, `"corollary"` or `"both"`).
#[pyfunction]
#[pyo3(signature = (p_s=0.9, t=0.2, grid="0.001:0.09:0.001", mode="both", seeds=512))]
fn trace_frontier(
    p_s: f64,
    t: f64,
    grid: &str,
    mode: &str,
    seeds: usize,
) -> PyResult<Vec<(String, Vec<(f64, f64, bool)>)>> {
    let grid = parse_grid(grid).map_err(err)?;
    let budget = SearchBudget { seeds, ..SearchBudget::default() };
    let fronts = match mode {
        "both" => {
            let (a, b) = trace_frontier_example2_both(p_s, t, &grid, &budget).map_err(err)?;
            vec![a, b]
        }
        "theorem" => vec![trace_frontier_example2(p_s, t, &grid, &budget, FrontierMode::Theorem).map_err(err)?],
        "corollary" => vec![trace_frontier_example2(p_s, t, &grid, &budget, FrontierMode::Corollary).map_err(err)?],
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    Ok(fronts
        .into_iter()
        .map(|f| {
            let rows = f.points.iter().map(|p| (p.d2_bound, p.best_sum_rate, p.feasible)).collect();
            (f.mode.name().to_string(), rows)
        })
        .collect())
}

/// Whether the exact projection of the rate-splitting system agrees with
/// the closed-form region on a `grid x grid` lattice plus random points.
#[pyfunction]
#[pyo3(signature = (channel, scheme, grid=100, samples=1000, seed=0))]
fn verify_fme(channel: &PyChannel, scheme: &PyScheme, grid: usize, samples: usize, seed: u64) -> PyResult<bool> {
    let j = assemble_joint(&channel.inner, &scheme.inner).map_err(err)?;
    let q = rationalize_terms(&compute_info_terms(&j).map_err(err)?).map_err(err)?;
    let closed = theorem_system(&q);
    let eq = systems_equivalent(&projected_region(&q), &closed, &rate_box(&closed), grid, samples, seed).map_err(err)?;
    Ok(eq.is_equivalent())
}

/// `(analytic, empirical_mean, std_error)` of the optimal distortion of
/// transmitter `user` over `n` draws.
#[pyfunction]
#[pyo3(signature = (channel, scheme, n=100_000, seed=0, user=2))]
fn simulate(channel: &PyChannel, scheme: &PyScheme, n: usize, seed: u64, user: u8) -> PyResult<(f64, f64, f64)> {
    let k = self::user(user)?;
    let d = channel.inner.distortion();
    let j = assemble_joint(&channel.inner, &scheme.inner).map_err(err)?;
    let est = optimal_estimator(&j, k, d, &default_conditioning(k)).map_err(err)?;
    let exact = expected_distortion(&j, &est, d).map_err(err)?;
    let e = empirical_distortion(&sample_joint(&j, n, seed).map_err(err)?, &est, d).map_err(err)?;
    Ok((exact, e.mean, e.std_error))
}

#[pymodule]
fn pyisac(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannel>()?;
    m.add_class::<PyScheme>()?;
    m.add_class::<PyJoint>()?;
    m.add_class::<PyRegion>()?;
    m.add_function(wrap_pyfunction!(region, m)?)?;
    m.add_function(wrap_pyfunction!(distortion, m)?)?;
    m.add_function(wrap_pyfunction!(trace_frontier, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fme, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
