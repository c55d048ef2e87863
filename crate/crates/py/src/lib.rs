//! Python bindings. Build with `maturin develop -m crates/py/Cargo.toml`.

use ::galph_core as core;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Non-decreasing group sizes over descending-probability ranks.
#[pyclass(name = "GroupingPlan", module = "galph", frozen)]
struct PyPlan(core::GroupingPlan);

#[pymethods]
impl PyPlan {
    #[new]
    fn new(sizes: Vec<u64>) -> PyResult<Self> {
        core::GroupingPlan::new(sizes).map(PyPlan).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(PyPlan).map_err(err)
    }

    #[getter]
    fn sizes(&self) -> Vec<u64> {
        self.0.sizes().to_vec()
    }

    #[getter]
    fn num_groups(&self) -> usize {
        self.0.num_groups()
    }

    #[getter]
    fn coverage(&self) -> u64 {
        self.0.coverage()
    }

    #[getter]
    fn is_pow2(&self) -> bool {
        self.0.is_pow2()
    }

    #[getter]
    fn delta(&self) -> Option<f64> {
        self.0.delta()
    }

    /// Zero-based group of a 1-based rank.
    fn group_of_rank(&self, rank: u64) -> PyResult<usize> {
        self.0.group_of_rank(rank).map_err(err)
    }

    fn worst_case_redundancy(&self) -> f64 {
        self.0.worst_case_redundancy()
    }

    fn __len__(&self) -> usize {
        self.0.num_groups()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("GroupingPlan({:?})", self.0.sizes())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0.sizes() == other.0.sizes()
    }
}

/// Minimal plan with worst-case redundancy at most `delta`.
#[pyfunction]
#[pyo3(signature = (n, delta, pow2 = false))]
fn optimal_grouping(n: u64, delta: f64, pow2: bool) -> PyResult<PyPlan> {
    core::optimal_grouping(n, delta, pow2)
        .map(PyPlan)
        .map_err(err)
}

/// Plan from the closed-form size rule.
#[pyfunction]
fn theorem3_grouping(n: u64, delta: f64) -> PyResult<PyPlan> {
    core::theorem3_grouping(n, delta).map(PyPlan).map_err(err)
}

#[pyfunction]
fn worst_case_redundancy(plan: &PyPlan) -> f64 {
    core::worst_case_redundancy(&plan.0)
}

/// Worst case found by evaluating every extreme point over `n` letters.
#[pyfunction]
fn oracle_worst_case_redundancy(plan: &PyPlan, n: usize) -> PyResult<f64> {
    core::oracle_worst_case_redundancy(&plan.0, n).map_err(err)
}

/// Redundancy of grouping `probs` (sorted non-increasing, summing to 1).
#[pyfunction]
fn grouping_redundancy(probs: Vec<f64>, plan: &PyPlan) -> PyResult<f64> {
    let p = core::OrderedDistribution::new(probs).map_err(err)?;
    core::grouping_redundancy(&p, &plan.0).map_err(err)
}

#[pyfunction]
fn composed_redundancy_bound(coder_bound: f64, grouping_delta: f64) -> f64 {
    core::composed_redundancy_bound(coder_bound, grouping_delta)
}

/// Letters kept sorted by count with constant-time updates.
#[pyclass(name = "FrequencyOrder", module = "galph")]
struct PyFrequencyOrder(core::FrequencyOrder);

#[pymethods]
impl PyFrequencyOrder {
    #[new]
    #[pyo3(signature = (n, max_count = core::model::DEFAULT_MAX_COUNT))]
    fn new(n: usize, max_count: u32) -> PyResult<Self> {
        core::FrequencyOrder::new(n, max_count)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (counts, max_count = core::model::DEFAULT_MAX_COUNT))]
    fn from_counts(counts: Vec<u32>, max_count: u32) -> PyResult<Self> {
        core::FrequencyOrder::from_counts(counts, max_count)
            .map(Self)
            .map_err(err)
    }

    fn increment(&mut self, letter: usize) -> PyResult<usize> {
        self.0.increment(letter).map_err(err)
    }

    fn decrement(&mut self, letter: usize) -> PyResult<usize> {
        self.0.decrement(letter).map_err(err)
    }

    #[getter]
    fn counts(&self) -> Vec<u32> {
        self.0.counts().to_vec()
    }

    #[getter]
    fn sorted(&self) -> Vec<u32> {
        self.0.sorted().to_vec()
    }

    #[getter]
    fn inverse(&self) -> Vec<u32> {
        self.0.inverse().to_vec()
    }

    #[getter]
    fn op_count(&self) -> u64 {
        self.0.op_count()
    }

    /// 1-based descending rank of `letter`.
    fn rank_of(&self, letter: usize) -> PyResult<usize> {
        self.0.rank_of(letter).map_err(err)
    }

    fn letter_at_rank(&self, rank: usize) -> PyResult<usize> {
        self.0.letter_at_rank(rank).map_err(err)
    }

    fn dump(&self) -> String {
        self.0.dump()
    }

    fn validate(&self) -> PyResult<()> {
        self.0.validate().map_err(PyValueError::new_err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Codes `symbols` into a self-describing container.
#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (symbols, alphabet, mode = "grouped", delta = 0.08, pow2 = false, c = "1", max_count = core::model::DEFAULT_MAX_COUNT))]
fn compress<'py>(
    py: Python<'py>,
    symbols: Vec<u32>,
    alphabet: u32,
    mode: &str,
    delta: f64,
    pow2: bool,
    c: &str,
    max_count: u32,
) -> PyResult<Bound<'py, PyBytes>> {
    let mode: core::Mode = mode.parse().map_err(err)?;
    let plan = match mode {
        core::Mode::Plain => None,
        core::Mode::Grouped => {
            Some(core::optimal_grouping(alphabet as u64, delta, pow2).map_err(err)?)
        }
        core::Mode::Huffman => {
            Some(core::optimal_grouping(alphabet as u64, delta, true).map_err(err)?)
        }
    };
    let config = core::CodecConfig {
        mode,
        alphabet,
        model: core::ModelConfig {
            smoothing: c.parse().map_err(err)?,
            max_count,
            full_width: false,
        },
        plan,
    };
    let packed = py
        .detach(|| core::compress(&symbols, &config))
        .map_err(err)?;
    Ok(PyBytes::new(py, &packed))
}

#[pyfunction]
fn decompress(py: Python<'_>, data: &[u8]) -> PyResult<Vec<u32>> {
    py.detach(|| core::decompress(data)).map_err(err)
}

/// Seeded i.i.d. letters from `zipf:<alpha>`, `geom:<q>` or `uniform`.
#[pyfunction]
fn generate(source: &str, n: usize, length: usize, seed: u64) -> PyResult<Vec<u32>> {
    let s: core::Source = source.parse().map_err(err)?;
    s.generate(n, length, seed).map_err(err)
}

#[pymodule]
fn galph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPlan>()?;
    m.add_class::<PyFrequencyOrder>()?;
    m.add_function(wrap_pyfunction!(optimal_grouping, m)?)?;
    m.add_function(wrap_pyfunction!(theorem3_grouping, m)?)?;
    m.add_function(wrap_pyfunction!(worst_case_redundancy, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_worst_case_redundancy, m)?)?;
    m.add_function(wrap_pyfunction!(grouping_redundancy, m)?)?;
    m.add_function(wrap_pyfunction!(composed_redundancy_bound, m)?)?;
    m.add_function(wrap_pyfunction!(compress, m)?)?;
    m.add_function(wrap_pyfunction!(decompress, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
