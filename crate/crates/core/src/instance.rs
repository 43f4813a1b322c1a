//! JSON instance files.
//!
//! ```json
//! {
//!   "space":    {"kind": "finite", "labels": ["a", "b"], "matrix": [[0, 1], [1, 0]]},
//!   "maps":     {"S": ["a", "a"], "T": ["a", "b"]},
//!   "controls": {"psi": {"family": "identity", "params": []},
//!                "alpha": {"family": "constant", "params": [0.5]},
//!                "beta": {"expr": "0.25"}},
//!   "solver":   {"x0": "b", "tol": 1e-10, "max_iter": 10000}
//! }
//! ```
//!
//! Continuous spaces use `{"kind": "interval", "lower": 0, "upper": 1}` with
//! expression maps in `x` (plus an optional `"T_inverse"`), or
//! `{"kind": "box", "lower": [..], "upper": [..]}` with
//! `{"affine": {"matrix": [[..]], "offset": [..]}}` maps.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contraction::{MapError, SelfMap, SelfMapPair};
use crate::control::{ControlTriple, DescriptorError, DescriptorSpec, FunctionDescriptor};
use crate::expr::{Expr, ParseError};
use crate::metric::{EuclideanDomain, FiniteMetricSpace, MetricError, PointRef, Space};
use crate::solver::{IterateOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing section `{0}`")]
    MissingSection(&'static str),
    #[error("space: {0}")]
    Metric(#[from] MetricError),
    #[error("{field}: {source}")]
    Expr {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{field}: {source}")]
    Descriptor {
        field: &'static str,
        #[source]
        source: DescriptorError,
    },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Finite { labels: Vec<String>, matrix: Vec<Vec<f64>> },
    Interval { lower: f64, upper: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Labels(Vec<String>),
    Expr(String),
    Affine { affine: AffineSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsSpec {
    #[serde(rename = "S")]
    pub s: MapSpec,
    #[serde(rename = "T")]
    pub t: MapSpec,
    #[serde(rename = "T_inverse", default, skip_serializing_if = "Option::is_none")]
    pub t_inverse: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlsSpec {
    pub psi: DescriptorSpec,
    pub alpha: DescriptorSpec,
    pub beta: DescriptorSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Label(String),
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<MapsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controls: Option<ControlsSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| InstanceError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    /// Builds the space; finite matrices must satisfy the metric axioms.
    pub fn space(&self) -> Result<Space, InstanceError> {
        Ok(match &self.space {
            SpaceSpec::Finite { labels, matrix } => {
                Space::Finite(FiniteMetricSpace::new(labels.clone(), matrix.clone())?)
            }
            SpaceSpec::Interval { lower, upper } => Space::Euclidean(EuclideanDomain::interval(*lower, *upper)?),
            SpaceSpec::Box { lower, upper } => Space::Euclidean(EuclideanDomain::new(lower.clone(), upper.clone())?),
        })
    }

    pub fn pair(&self, space: &Space) -> Result<SelfMapPair, InstanceError> {
        let maps = self.maps.as_ref().ok_or(InstanceError::MissingSection("maps"))?;
        let build = |field: &'static str, spec: &MapSpec| -> Result<SelfMap, InstanceError> {
            match (spec, space) {
                (MapSpec::Labels(labels), Space::Finite(f)) => labels
                    .iter()
                    .map(|l| f.index_of(l).ok_or_else(|| InstanceError::UnknownLabel(l.clone())))
                    .collect::<Result<Vec<_>, _>>()
                    .map(SelfMap::Table),
                (MapSpec::Expr(text), Space::Euclidean(_)) => {
                    Expr::map(text).map(SelfMap::Expr).map_err(|source| InstanceError::Expr { field, source })
                }
                (MapSpec::Affine { affine }, Space::Euclidean(_)) => {
                    Ok(SelfMap::Affine { matrix: affine.matrix.clone(), offset: affine.offset.clone() })
                }
                _ => Err(InstanceError::Mismatch(format!("map {field} does not fit the space kind"))),
            }
        };
        let mut pair = SelfMapPair::new(build("S", &maps.s)?, build("T", &maps.t)?);
        if let Some(inv) = &maps.t_inverse {
            pair.t_inverse = Some(Expr::map(inv).map_err(|source| InstanceError::Expr { field: "T_inverse", source })?);
        }
        pair.validate(space)?;
        Ok(pair)
    }

    pub fn triple(&self) -> Result<ControlTriple, InstanceError> {
        let c = self.controls.as_ref().ok_or(InstanceError::MissingSection("controls"))?;
        let get = |field: &'static str, spec: &DescriptorSpec| {
            FunctionDescriptor::from_spec(spec).map_err(|source| InstanceError::Descriptor { field, source })
        };
        Ok(ControlTriple::new(get("psi", &c.psi)?, get("alpha", &c.alpha)?, get("beta", &c.beta)?))
    }

    pub fn iterate_options(&self) -> IterateOptions {
        IterateOptions {
            tol: self.solver.tol.unwrap_or(DEFAULT_TOL),
            max_iter: self.solver.max_iter.unwrap_or(DEFAULT_MAX_ITER),
        }
    }

    /// Start point from the solver section, or the first point / lower corner.
    pub fn x0(&self, space: &Space) -> Result<PointRef, InstanceError> {
        match &self.solver.x0 {
            Some(spec) => resolve_point(spec, space),
            None => Ok(match space {
                Space::Finite(_) => PointRef::Index(0),
                Space::Euclidean(d) => PointRef::Coords(d.lower().to_vec()),
            }),
        }
    }

    /// Serializable form of a finite instance.
    pub fn finite(space: &FiniteMetricSpace, pair: &SelfMapPair, triple: &ControlTriple) -> Self {
        let labels = |table: &[usize]| MapSpec::Labels(table.iter().map(|&i| space.label(i).to_string()).collect());
        let (s, t) = pair.finite_tables().expect("finite instance has table maps");
        InstanceFile {
            space: SpaceSpec::Finite { labels: space.labels().to_vec(), matrix: space.matrix().to_vec() },
            maps: Some(MapsSpec { s: labels(s), t: labels(t), t_inverse: None }),
            controls: Some(controls_spec(triple)),
            solver: SolverSpec { x0: Some(PointSpec::Label(space.label(0).to_string())), tol: None, max_iter: None },
        }
    }
}

pub fn controls_spec(triple: &ControlTriple) -> ControlsSpec {
    ControlsSpec { psi: triple.psi.to_spec(), alpha: triple.alpha.to_spec(), beta: triple.beta.to_spec() }
}

/// Reads a point: a label on finite spaces, a number or vector on boxes.
pub fn resolve_point(spec: &PointSpec, space: &Space) -> Result<PointRef, InstanceError> {
    let p = match (spec, space) {
        (PointSpec::Label(l), Space::Finite(f)) => {
            PointRef::Index(f.index_of(l).ok_or_else(|| InstanceError::UnknownLabel(l.clone()))?)
        }
        (PointSpec::Scalar(v), Space::Euclidean(_)) => PointRef::scalar(*v),
        (PointSpec::Vector(v), Space::Euclidean(_)) => PointRef::Coords(v.clone()),
        _ => return Err(InstanceError::Mismatch(format!("start point {spec:?} does not fit the space"))),
    };
    space.check(&p)?;
    Ok(p)
}

/// Parses a command-line point: a label, a number, or comma-separated coordinates.
pub fn parse_point_arg(text: &str, space: &Space) -> Result<PointRef, InstanceError> {
    let spec = match space {
        Space::Finite(_) => PointSpec::Label(text.to_string()),
        Space::Euclidean(_) => {
            let coords = text
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| InstanceError::Mismatch(format!("bad coordinate in {text:?}: {e}")))?;
            PointSpec::Vector(coords)
        }
    };
    resolve_point(&spec, space)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FINITE: &str = r#"{
        "space": {"kind": "finite", "labels": ["a", "b", "c"], "matrix": [[0,1,3],[1,0,2],[3,2,0]]},
        "maps": {"S": ["a", "a", "b"], "T": ["a", "b", "c"]},
        "controls": {"psi": {"family": "identity", "params": []},
                     "alpha": {"family": "constant", "params": [0.6]},
                     "beta": {"expr": "0.3"}},
        "solver": {"x0": "c"}
    }"#;

    #[test]
    fn finite_instance_loads() {
        let f = InstanceFile::from_json(FINITE).unwrap();
        let space = f.space().unwrap();
        let pair = f.pair(&space).unwrap();
        assert_eq!(pair.finite_tables().unwrap(), (&[0, 0, 1][..], &[0, 1, 2][..]));
        assert_eq!(f.x0(&space).unwrap(), PointRef::Index(2));
        assert!(f.triple().is_ok());
    }

    #[test]
    fn finite_export_round_trips() {
        let f = InstanceFile::from_json(FINITE).unwrap();
        let space = f.space().unwrap();
        let again = InstanceFile::finite(space.as_finite().unwrap(), &f.pair(&space).unwrap(), &f.triple().unwrap());
        let back = InstanceFile::from_json(&again.to_json()).unwrap();
        assert_eq!(back, again);
        assert_eq!(back.pair(&space).unwrap(), f.pair(&space).unwrap());
    }

    #[test]
    fn continuous_instance_loads() {
        let f = InstanceFile::from_json(
            r#"{"space": {"kind": "interval", "lower": 0, "upper": 1},
                "maps": {"S": "x/4", "T": "x/2", "T_inverse": "2*x"},
                "controls": {"psi": {"family": "identity"}, "alpha": {"family": "constant", "params": [0.6]},
                             "beta": {"family": "constant", "params": [0.1]}},
                "solver": {"x0": 1.0, "tol": 1e-10}}"#,
        )
        .unwrap();
        let space = f.space().unwrap();
        let pair = f.pair(&space).unwrap();
        assert!(pair.t_inverse.is_some());
        assert_eq!(f.x0(&space).unwrap(), PointRef::scalar(1.0));
        assert_eq!(f.iterate_options().max_iter, DEFAULT_MAX_ITER);
    }

    #[test]
    fn input_errors() {
        let bad_label = FINITE.replace(r#""S": ["a", "a", "b"]"#, r#""S": ["a", "a", "z"]"#);
        let f = InstanceFile::from_json(&bad_label).unwrap();
        assert!(matches!(f.pair(&f.space().unwrap()), Err(InstanceError::UnknownLabel(_))));

        let no_maps = r#"{"space": {"kind": "interval", "lower": 0, "upper": 1}}"#;
        let f = InstanceFile::from_json(no_maps).unwrap();
        assert!(matches!(f.pair(&f.space().unwrap()), Err(InstanceError::MissingSection("maps"))));
        assert!(matches!(f.triple(), Err(InstanceError::MissingSection("controls"))));

        let bad_expr = r#"{"space": {"kind": "interval", "lower": 0, "upper": 1}, "maps": {"S": "x/", "T": "x"}}"#;
        let f = InstanceFile::from_json(bad_expr).unwrap();
        assert!(matches!(f.pair(&f.space().unwrap()), Err(InstanceError::Expr { field: "S", .. })));

        assert!(InstanceFile::from_json(r#"{"space": {"kind": "torus"}}"#).is_err());
        let asym = FINITE.replace("[1,0,2]", "[2,0,2]");
        assert!(matches!(InstanceFile::from_json(&asym).unwrap().space(), Err(InstanceError::Metric(_))));
    }

    #[test]
    fn point_arguments() {
        let space = Space::Euclidean(EuclideanDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap());
        assert_eq!(parse_point_arg("0.5, 0.25", &space).unwrap(), PointRef::Coords(vec![0.5, 0.25]));
        assert!(parse_point_arg("2, 0", &space).is_err());
        assert!(parse_point_arg("x", &space).is_err());
    }
}
