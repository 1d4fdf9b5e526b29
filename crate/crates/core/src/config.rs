//! JSON problem configuration.
//!
//! ```json
//! {
//!   "graph": "klein16",
//!   "coefficients": { "uniform": 0.1 },
//!   "initial": { "f0": { "7": 16 }, "f1": { "9": 16 } },
//!   "steps": 100
//! }
//! ```
//!
//! `graph` is a catalog name or `{ "points": N, "edges": [[u, v], ...] }`.
//! `coefficients` is `{ "uniform": w }`, `{ "dense": [[...], ...] }` or
//! `{ "sparse": [[p, k, c], ...] }` (unlisted entries are zero). `class`
//! is `"wave"` (default) or `"hyperbolic"`. `boundary` maps points to a
//! constant or to one value per step.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogError};
use crate::graph::{Graph, GraphError, PointFunction};
use crate::solver::{
    uniform_scheme, validate_scheme, BoundaryCondition, Prescription, ProblemSpec, Scheme,
    SchemeClass, SchemeError, SolverError,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid scheme: {0}")]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Problem(#[from] SolverError),
    #[error("sparse entry ({p}, {k}) is outside the {n}x{n} array")]
    SparseIndex { p: usize, k: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphConfig {
    Catalog(String),
    Inline {
        points: usize,
        #[serde(default)]
        edges: Vec<(usize, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum CoefficientsConfig {
    Uniform(f64),
    Dense(Vec<Vec<f64>>),
    Sparse(Vec<(usize, usize, f64)>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassConfig {
    #[default]
    Wave,
    Hyperbolic,
}

impl From<ClassConfig> for SchemeClass {
    fn from(c: ClassConfig) -> Self {
        match c {
            ClassConfig::Wave => SchemeClass::Wave,
            ClassConfig::Hyperbolic => SchemeClass::Hyperbolic,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default)]
    pub f0: BTreeMap<usize, f64>,
    #[serde(default)]
    pub f1: BTreeMap<usize, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundaryValue {
    Constant(f64),
    Sequence(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub graph: GraphConfig,
    pub coefficients: CoefficientsConfig,
    #[serde(default)]
    pub class: ClassConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub boundary: BTreeMap<usize, BoundaryValue>,
    pub steps: usize,
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn build_graph(&self) -> Result<Graph, ConfigError> {
        Ok(match &self.graph {
            GraphConfig::Catalog(name) => catalog::catalog_graph(name)?,
            GraphConfig::Inline { points, edges } => Graph::from_edges(*points, edges)?,
        })
    }

    pub fn build_scheme(&self, graph: Arc<Graph>) -> Result<Scheme, ConfigError> {
        let class = SchemeClass::from(self.class);
        let n = graph.n_points();
        Ok(match &self.coefficients {
            CoefficientsConfig::Uniform(w) => uniform_scheme(graph, *w)?,
            CoefficientsConfig::Dense(rows) => validate_scheme(graph, rows, class)?,
            CoefficientsConfig::Sparse(entries) => {
                let mut rows = vec![vec![0.0; n]; n];
                for &(p, k, c) in entries {
                    if p >= n || k >= n {
                        return Err(ConfigError::SparseIndex { p, k, n });
                    }
                    rows[p][k] = c;
                }
                validate_scheme(graph, &rows, class)?
            }
        })
    }

    pub fn build_problem(&self) -> Result<ProblemSpec, ConfigError> {
        let graph = Arc::new(self.build_graph()?);
        let n = graph.n_points();
        let scheme = Arc::new(self.build_scheme(graph)?);
        let sparse = |m: &BTreeMap<usize, f64>| {
            let entries: Vec<(usize, f64)> = m.iter().map(|(&p, &x)| (p, x)).collect();
            PointFunction::from_sparse(n, &entries)
        };
        let boundary = self
            .boundary
            .iter()
            .map(|(&point, v)| BoundaryCondition {
                point,
                values: match v {
                    BoundaryValue::Constant(x) => Prescription::Constant(*x),
                    BoundaryValue::Sequence(xs) => Prescription::Sequence(xs.clone()),
                },
            })
            .collect();
        Ok(ProblemSpec::new(
            scheme,
            sparse(&self.initial.f0)?,
            sparse(&self.initial.f1)?,
            boundary,
            self.steps,
        )?)
    }
}
