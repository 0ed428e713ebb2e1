//! Python bindings. Weights and thresholds cross the boundary as exact
//! fraction strings (`"23/2"`); thresholds are also accepted as `int`,
//! `float` or `fractions.Fraction`.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;
use surveynet::analyze::edge_betweenness as run_edge_betweenness;
use surveynet::project::{KernelOptions, PairKernel, ScoreDenominator};
use surveynet::rational::{format_rational, parse_rational};
use surveynet::render::{fr_layout, from_graphml, ColorScheme};
use surveynet::{
    binarize, connected_components, girvan_newman as run_girvan_newman, load_survey,
    profile_census, project_attitudes, project_participants, renormalize,
    select_threshold as run_select_threshold, EdgeFilter, MissingPolicy, PairSource,
    ProjectionGraph, Rational, ResponseMatrix, SurveySchema,
};

create_exception!(surveynet_py, SurveynetError, PyException);

fn err(e: surveynet::Error) -> PyErr {
    SurveynetError::new_err(format!("{}: {e}", e.kind()))
}

fn to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, to_py(py, v)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn serialized(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| SurveynetError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// A threshold or fraction given as `str`, `int`, `float` or `Fraction`.
fn rational_arg(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = value.extract::<String>() {
        return parse_rational(&s).map_err(err);
    }
    if let (Ok(n), Ok(d)) = (value.getattr("numerator"), value.getattr("denominator")) {
        if let (Ok(n), Ok(d)) = (n.extract::<i64>(), d.extract::<i64>()) {
            return Ok(Rational::new(n, d));
        }
    }
    if let Ok(f) = value.extract::<f64>() {
        return parse_rational(&format!("{f}")).map_err(err);
    }
    Err(SurveynetError::new_err("expected a number, fraction or string"))
}

/// Survey responses: participants × items ordinal codes.
#[pyclass(module = "surveynet_py", frozen)]
pub struct Survey {
    inner: ResponseMatrix,
}

#[pymethods]
impl Survey {
    /// Loads a CSV against a JSON schema file. `missing` is `"drop"` or `"keep"`.
    #[staticmethod]
    #[pyo3(signature = (csv_path, schema_path, missing = "drop"))]
    fn load(csv_path: &str, schema_path: &str, missing: &str) -> PyResult<Self> {
        let schema = SurveySchema::from_path(schema_path).map_err(err)?;
        let policy = match missing {
            "drop" => MissingPolicy::DropParticipant,
            "keep" => MissingPolicy::KeepPairwise,
            other => return Err(SurveynetError::new_err(format!("unknown missing policy `{other}`"))),
        };
        let (inner, _) = load_survey(csv_path, &schema, policy).map_err(err)?;
        Ok(Survey { inner })
    }

    /// Builds a survey from code rows (`None` for missing answers).
    #[staticmethod]
    fn from_codes(scales: Vec<u32>, rows: Vec<Vec<Option<u32>>>) -> PyResult<Self> {
        Ok(Survey {
            inner: ResponseMatrix::from_codes(&scales, &rows).map_err(err)?,
        })
    }

    #[getter]
    fn n_participants(&self) -> usize {
        self.inner.n_participants()
    }

    #[getter]
    fn n_items(&self) -> usize {
        self.inner.n_items()
    }

    #[getter]
    fn participants(&self) -> Vec<String> {
        self.inner.participants().to_vec()
    }

    #[getter]
    fn items(&self) -> Vec<(String, u32)> {
        self.inner.items().iter().map(|i| (i.id.clone(), i.scale)).collect()
    }

    fn scale_summary(&self) -> String {
        self.inner.scale_summary()
    }

    fn code(&self, participant: usize, item: usize) -> PyResult<Option<u32>> {
        if participant >= self.inner.n_participants() || item >= self.inner.n_items() {
            return Err(pyo3::exceptions::PyIndexError::new_err("index out of range"));
        }
        Ok(self.inner.code(participant, item))
    }

    /// Rows of normalized values in `[-1, 1]` as fraction strings.
    fn normalized(&self) -> Vec<Vec<Option<String>>> {
        let norm = renormalize(&self.inner);
        (0..norm.n_participants())
            .map(|p| norm.row(p).iter().map(|v| v.map(|v| format_rational(&v))).collect())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Survey(N={}, m={}, scales: {})",
            self.inner.n_participants(),
            self.inner.n_items(),
            self.inner.scale_summary()
        )
    }
}

/// A projection graph (participants or items).
#[pyclass(module = "surveynet_py", frozen)]
pub struct Graph {
    inner: ProjectionGraph,
}

#[pymethods]
impl Graph {
    #[staticmethod]
    fn from_graphml(text: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: from_graphml(text).map_err(err)?.graph,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn n_nodes(&self) -> usize {
        self.inner.n_nodes()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.inner.n_edges()
    }

    #[getter]
    fn threshold_used(&self) -> String {
        format_rational(&self.inner.threshold_used)
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.inner.nodes().iter().map(|n| n.id.clone()).collect()
    }

    fn node_attributes(&self, id: &str) -> PyResult<BTreeMap<String, String>> {
        let i = self
            .inner
            .index_of(id)
            .ok_or_else(|| pyo3::exceptions::PyKeyError::new_err(id.to_string()))?;
        Ok(self.inner.nodes()[i].attributes.clone())
    }

    /// `(u, v, weight, sign, style)` per edge.
    fn edges(&self) -> Vec<(String, String, String, &'static str, &'static str)> {
        self.inner
            .edges()
            .iter()
            .map(|e| {
                (
                    self.inner.node_id(e.u).to_string(),
                    self.inner.node_id(e.v).to_string(),
                    format_rational(&e.weight),
                    e.sign.as_str(),
                    e.style.as_str(),
                )
            })
            .collect()
    }

    fn to_graphml(&self) -> String {
        surveynet::render::to_graphml(&self.inner, None)
    }

    fn to_dot(&self) -> String {
        surveynet::render::to_dot(&self.inner, None)
    }

    fn to_edgelist(&self) -> String {
        surveynet::render::to_edgelist(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(kind={}, nodes={}, edges={}, threshold={})",
            self.inner.kind,
            self.inner.n_nodes(),
            self.inner.n_edges(),
            format_rational(&self.inner.threshold_used)
        )
    }
}

fn kernel(survey: &Survey, mode: &str, neutral_agrees: bool, rescale: bool) -> PyResult<PairKernel> {
    let options = KernelOptions {
        neutral_agrees,
        score_denominator: if rescale {
            ScoreDenominator::RescaleToItems
        } else {
            ScoreDenominator::CoAnswered
        },
    };
    let x = &survey.inner;
    match mode {
        "exact" => PairKernel::exact(x),
        "score" => PairKernel::score(&renormalize(x), options),
        "binarized" => PairKernel::binarized(&binarize(&renormalize(x)), options),
        other => return Err(SurveynetError::new_err(format!("unknown mode `{other}`"))),
    }
    .map_err(err)
}

/// Weight of one participant pair as a fraction string.
#[pyfunction]
#[pyo3(signature = (survey, u, v, mode = "exact", neutral_agrees = true, rescale = false))]
fn pair_weight(survey: &Survey, u: usize, v: usize, mode: &str, neutral_agrees: bool, rescale: bool) -> PyResult<String> {
    let n = survey.inner.n_participants();
    if u >= n || v >= n || u == v {
        return Err(pyo3::exceptions::PyIndexError::new_err("need two distinct participants"));
    }
    let k = kernel(survey, mode, neutral_agrees, rescale)?;
    Ok(format_rational(&k.weight(u, v)))
}

/// Highest agreement level with a giant component of `target_fraction`.
#[pyfunction]
#[pyo3(signature = (survey, mode = "exact", target_fraction = None))]
fn select_threshold(py: Python<'_>, survey: &Survey, mode: &str, target_fraction: Option<&Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
    let target = target_fraction.map(rational_arg).transpose()?.unwrap_or(Rational::new(1, 2));
    let k = kernel(survey, mode, true, false)?;
    let sel = py.detach(|| run_select_threshold(&k, target)).map_err(err)?;
    serialized(py, &sel)
}

/// Participant projection. `threshold` may be `"auto"`.
#[pyfunction]
#[pyo3(signature = (survey, threshold, mode = "exact", target_fraction = None, negative_threshold = None, neutral_agrees = true, rescale = false))]
#[allow(clippy::too_many_arguments)]
fn project(
    survey: &Survey,
    threshold: &Bound<'_, PyAny>,
    mode: &str,
    target_fraction: Option<&Bound<'_, PyAny>>,
    negative_threshold: Option<&Bound<'_, PyAny>>,
    neutral_agrees: bool,
    rescale: bool,
) -> PyResult<Graph> {
    let k = kernel(survey, mode, neutral_agrees, rescale)?;
    let threshold = if threshold.extract::<String>().is_ok_and(|s| s == "auto") {
        let target = target_fraction.map(rational_arg).transpose()?.unwrap_or(Rational::new(1, 2));
        run_select_threshold(&k, target).map_err(err)?.chosen_threshold
    } else {
        rational_arg(threshold)?
    };
    let negative = negative_threshold.map(rational_arg).transpose()?;
    Ok(Graph {
        inner: project_participants(&k, threshold, negative).map_err(err)?,
    })
}

/// Item co-endorsement graph (dual positive/negative edges, or signed).
#[pyfunction]
#[pyo3(signature = (survey, signed = false))]
fn attitudes(survey: &Survey, signed: bool) -> PyResult<Graph> {
    let att = project_attitudes(&renormalize(&survey.inner)).map_err(err)?;
    let inner = if signed { att.to_signed_graph() } else { att.to_graph() }.map_err(err)?;
    Ok(Graph { inner })
}

#[pyfunction]
fn components(graph: &Graph) -> Vec<Vec<String>> {
    connected_components(&graph.inner, EdgeFilter::PositiveOnly).components
}

#[pyfunction]
fn edge_betweenness(graph: &Graph) -> BTreeMap<(String, String), f64> {
    run_edge_betweenness(&graph.inner)
}

#[pyfunction]
#[pyo3(signature = (graph, target_components = 2, max_removed_fraction = None))]
fn girvan_newman(py: Python<'_>, graph: &Graph, target_components: usize, max_removed_fraction: Option<&Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
    let budget = max_removed_fraction.map(rational_arg).transpose()?.unwrap_or(Rational::from_integer(1));
    let report = py
        .detach(|| run_girvan_newman(&graph.inner, target_components, budget))
        .map_err(err)?;
    serialized(py, &report)
}

#[pyfunction]
fn census(py: Python<'_>, survey: &Survey) -> PyResult<Py<PyAny>> {
    let c = profile_census(&binarize(&renormalize(&survey.inner))).map_err(err)?;
    serialized(py, &c)
}

/// Node id → `(x, y)`.
#[pyfunction]
#[pyo3(signature = (graph, seed = 1, iterations = 500))]
fn layout(graph: &Graph, seed: u64, iterations: usize) -> BTreeMap<String, (f64, f64)> {
    let l = fr_layout(&graph.inner, seed, iterations);
    l.ids.into_iter().zip(l.positions).map(|(id, [x, y])| (id, (x, y))).collect()
}

/// SVG drawing; with `color_attribute` and no `colors`, `D` is blue, `R`
/// red and anything else yellow.
#[pyfunction]
#[pyo3(signature = (graph, seed = 1, iterations = 500, color_attribute = None, colors = None, default_color = None))]
fn render_svg(
    graph: &Graph,
    seed: u64,
    iterations: usize,
    color_attribute: Option<String>,
    colors: Option<BTreeMap<String, String>>,
    default_color: Option<String>,
) -> PyResult<String> {
    let mut scheme = match &color_attribute {
        Some(attr) => ColorScheme::party(attr),
        None => ColorScheme::default(),
    };
    if let Some(colors) = colors {
        scheme.colors = colors;
    }
    if let Some(c) = default_color {
        scheme.default_color = c;
    }
    let l = fr_layout(&graph.inner, seed, iterations);
    surveynet::render_svg(&graph.inner, &l, &scheme).map_err(err)
}

#[pyfunction]
fn render_bipartite_svg(survey: &Survey) -> String {
    surveynet::render_bipartite_svg(&renormalize(&survey.inner))
}

#[pymodule]
pub fn surveynet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SurveynetError", m.py().get_type::<SurveynetError>())?;
    m.add_class::<Survey>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(pair_weight, m)?)?;
    m.add_function(wrap_pyfunction!(select_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(attitudes, m)?)?;
    m.add_function(wrap_pyfunction!(components, m)?)?;
    m.add_function(wrap_pyfunction!(edge_betweenness, m)?)?;
    m.add_function(wrap_pyfunction!(girvan_newman, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(layout, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    m.add_function(wrap_pyfunction!(render_bipartite_svg, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
