//! Python bindings. Structured values cross the boundary as plain dicts and
//! lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use sfr_kit::codec::{self, SerializeMode, Task, TaskSchema};
use sfr_kit::data::{self, PromptMode};
use sfr_kit::eval::{self, CharTokens, EvalRecord, TokenCounter, WhitespaceTokens};
use sfr_kit::grpo::{self, CandidateGroup, DEFAULT_EPSILON};
use sfr_kit::reward::{self, SfrConfig};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(value_err)
}

#[pyclass(name = "Schema", module = "sfr_kit", frozen)]
struct PySchema {
    inner: TaskSchema,
}

#[pymethods]
impl PySchema {
    #[new]
    #[pyo3(signature = (task, labels, roles = None))]
    fn new(task: &str, labels: Vec<String>, roles: Option<Vec<String>>) -> PyResult<Self> {
        let task: Task = task.parse().map_err(value_err)?;
        let inner = TaskSchema::new(task, labels, roles.unwrap_or_default()).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: TaskSchema::from_json(text).map_err(value_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(value_err)
    }

    #[getter]
    fn task(&self) -> &'static str {
        self.inner.task.as_str()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    #[getter]
    fn roles(&self) -> Vec<String> {
        self.inner.roles.clone()
    }

    fn __repr__(&self) -> String {
        format!("Schema({}, {:?})", self.inner.task, self.inner.labels)
    }
}

#[pyclass(name = "Config", module = "sfr_kit", frozen)]
struct PyConfig {
    inner: SfrConfig,
}

#[pymethods]
impl PyConfig {
    /// Defaults, optionally overridden by a (partial) config dict.
    #[new]
    #[pyo3(signature = (overrides = None))]
    fn new(overrides: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let mut inner = SfrConfig::default();
        if let Some(o) = overrides {
            let value: serde_json::Value = from_py(o)?;
            inner = inner.with_overrides(&value).map_err(value_err)?;
        }
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: SfrConfig::from_json(text).map_err(value_err)?,
        })
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner)
    }

    #[getter]
    fn clip_to_unit(&self) -> bool {
        self.inner.clip_to_unit
    }
}

fn config_or_default(config: Option<&PyConfig>) -> SfrConfig {
    config.map(|c| c.inner).unwrap_or_default()
}

/// Returns `{"status", "output", "issues"}`.
#[pyfunction]
#[pyo3(signature = (text, schema, strict = false))]
fn parse<'py>(py: Python<'py>, text: &str, schema: &PySchema, strict: bool) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &codec::parse(text, &schema.inner, strict))
}

/// Canonical text of `text` re-serialized in full or concise form.
#[pyfunction]
#[pyo3(signature = (text, schema, concise = false))]
fn serialize(text: &str, schema: &PySchema, concise: bool) -> PyResult<String> {
    let report = codec::parse(text, &schema.inner, true);
    if report.is_failed() {
        return Err(value_err(format!("unparseable output: {:?}", report.issues)));
    }
    let mode = if concise {
        SerializeMode::Concise
    } else {
        SerializeMode::Full
    };
    Ok(codec::serialize(&report.output, &schema.inner, mode))
}

#[pyfunction]
fn extract_units<'py>(py: Python<'py>, text: &str, schema: &PySchema) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &codec::extract_units(&codec::parse(text, &schema.inner, false).output))
}

#[pyfunction]
fn check_grounding(source: &str, text: &str, schema: &PySchema) -> Vec<String> {
    codec::check_grounding(source, &codec::parse(text, &schema.inner, false).output)
}

/// Reward breakdown dict for one prediction.
#[pyfunction]
#[pyo3(signature = (gold, pred, schema, config = None))]
fn score<'py>(
    py: Python<'py>,
    gold: &str,
    pred: &str,
    schema: &PySchema,
    config: Option<&PyConfig>,
) -> PyResult<Bound<'py, PyAny>> {
    let breakdown = reward::score(gold, pred, &schema.inner, &config_or_default(config)).map_err(value_err)?;
    to_py(py, &breakdown)
}

#[pyfunction]
#[pyo3(signature = (rewards, epsilon = DEFAULT_EPSILON))]
fn group_advantages(rewards: Vec<f64>, epsilon: f64) -> Vec<f64> {
    grpo::group_advantages(&rewards, epsilon)
}

/// `(rewards, advantages)` for the candidates of one input.
#[pyfunction]
#[pyo3(signature = (gold, candidates, schema, config = None, example_id = String::new()))]
fn score_group(
    py: Python<'_>,
    gold: String,
    candidates: Vec<String>,
    schema: &PySchema,
    config: Option<&PyConfig>,
    example_id: String,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let cfg = config_or_default(config);
    let group = CandidateGroup::new(example_id, schema.inner.task, gold, candidates);
    let scored = py
        .detach(|| grpo::score_group(group, &schema.inner, &cfg))
        .map_err(value_err)?;
    Ok((scored.rewards, scored.advantages))
}

#[pyfunction]
fn streamline(target: &str, schema: &PySchema) -> PyResult<String> {
    data::streamline(target, &schema.inner).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (schema, input, mode = "cm"))]
fn render_prompt(schema: &PySchema, input: &str, mode: &str) -> PyResult<String> {
    let mode = match mode {
        "cm" => PromptMode::Cm,
        "sa" => PromptMode::Sa,
        other => return Err(value_err(format!("unknown prompt mode `{other}`"))),
    };
    Ok(data::render_prompt(&schema.inner, input, mode))
}

#[pyfunction]
fn allocate(weights: Vec<f64>, total: usize) -> PyResult<Vec<usize>> {
    data::allocate(&weights, total).map_err(value_err)
}

/// `metric` is one of `micro`, `trigger`, `argument`; records are `{id, gold, pred}` dicts.
#[pyfunction]
#[pyo3(signature = (records, schema, metric = "micro"))]
fn evaluate<'py>(
    py: Python<'py>,
    records: &Bound<'py, PyAny>,
    schema: &PySchema,
    metric: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let records: Vec<EvalRecord> = from_py(records)?;
    let report = match metric {
        "micro" => eval::micro_f1(&records, &schema.inner),
        "trigger" => eval::trigger_f1(&records, &schema.inner),
        "argument" => eval::argument_f1(&records, &schema.inner),
        other => return Err(value_err(format!("unknown metric `{other}`"))),
    }
    .map_err(value_err)?;
    to_py(py, &report)
}

#[pyfunction]
fn exact_acc<'py>(py: Python<'py>, records: &Bound<'py, PyAny>, slots: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let records: Vec<EvalRecord> = from_py(records)?;
    to_py(py, &eval::exact_acc(&records, &slots).map_err(value_err)?)
}

#[pyfunction]
#[pyo3(signature = (texts, tokenizer = "whitespace"))]
fn length_buckets<'py>(py: Python<'py>, texts: Vec<String>, tokenizer: &str) -> PyResult<Bound<'py, PyAny>> {
    let counter: &dyn TokenCounter = match tokenizer {
        "whitespace" => &WhitespaceTokens,
        "chars" => &CharTokens,
        other => return Err(value_err(format!("unknown tokenizer `{other}`"))),
    };
    to_py(py, &eval::length_buckets(&texts, counter).map_err(value_err)?)
}

#[pyfunction]
fn default_phase_plan<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &grpo::default_phase_plan())
}

#[pymodule]
#[pyo3(name = "sfr_kit")]
pub fn sfr_kit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySchema>()?;
    m.add_class::<PyConfig>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(serialize, m)?)?;
    m.add_function(wrap_pyfunction!(extract_units, m)?)?;
    m.add_function(wrap_pyfunction!(check_grounding, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(group_advantages, m)?)?;
    m.add_function(wrap_pyfunction!(score_group, m)?)?;
    m.add_function(wrap_pyfunction!(streamline, m)?)?;
    m.add_function(wrap_pyfunction!(render_prompt, m)?)?;
    m.add_function(wrap_pyfunction!(allocate, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(exact_acc, m)?)?;
    m.add_function(wrap_pyfunction!(length_buckets, m)?)?;
    m.add_function(wrap_pyfunction!(default_phase_plan, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
