//! JSON formats for split structures and for vertex-based Clifford data.
//!
//! ```json
//! {"graph": {...}, "n": 4,
//!  "edges": [{"h": {"lorentz": [[...]]}, "gamma_plus": {"vector": [1,0,0,0]}, "delta": "1/2"}]}
//! ```
//!
//! `h` is `{"spinor": matrix}` or `{"lorentz": rows}` and defaults to the identity.
//! A gamma is `{"vector": v}`, `{"vector": v, "axial": w}` or `{"matrix": m}`.
//! Real entries may be numbers or rational strings. An absent `gamma_minus` is derived from
//! the real structure, and an absent `delta` falls back to the graph weight.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{build_split, compatible_gamma_minus, MvsEdge, SplitDiracStructure};
use crate::clifford::{build_clifford, CliffordRep};
use crate::error::{Error, Result};
use crate::graphs::{rational_to_f64, GraphFile, RationalText, WeightedDigraph};
use crate::io::{operator_from_json, MatrixJson};
use crate::linalg::{identity, Operator};

/// A real number, as a JSON number or a rational string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn value(&self) -> Result<f64> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Text(s) => Ok(rational_to_f64(&crate::graphs::parse_rational(s)?)),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TransportSpec {
    Spinor(MatrixJson),
    Lorentz(Vec<Vec<Scalar>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GammaSpec {
    Matrix {
        matrix: MatrixJson,
    },
    Axial {
        vector: Vec<Scalar>,
        axial: Vec<Scalar>,
    },
    Vector {
        vector: Vec<Scalar>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitEdgeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<TransportSpec>,
    pub gamma_plus: GammaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_minus: Option<GammaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<RationalText>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitFile {
    pub graph: GraphFile,
    pub n: usize,
    pub edges: Vec<SplitEdgeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MvsEdgeFile {
    /// `γ_e` at the target.
    pub gamma: GammaSpec,
    /// `γ_ē` at the source.
    pub gamma_reverse: GammaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hol: Option<TransportSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<RationalText>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MvsFile {
    pub graph: GraphFile,
    pub n: usize,
    pub edges: Vec<MvsEdgeFile>,
}

fn at(pointer: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Schema { .. } => e,
        other => Error::Schema { pointer: pointer.clone(), message: other.to_string() },
    }
}

fn reals(v: &[Scalar], n: usize, pointer: &str) -> Result<Vec<f64>> {
    if v.len() != n {
        return Err(Error::Schema { pointer: pointer.into(), message: format!("expected {n} components, found {}", v.len()) });
    }
    v.iter().map(Scalar::value).collect::<Result<_>>().map_err(at(pointer.into()))
}

fn gamma(rep: &CliffordRep, spec: &GammaSpec, pointer: &str) -> Result<Operator> {
    match spec {
        GammaSpec::Matrix { matrix } => {
            let m = operator_from_json(matrix, &format!("{pointer}/matrix"))?;
            if m.nrows() != rep.dim() {
                return Err(Error::Schema {
                    pointer: format!("{pointer}/matrix"),
                    message: format!("expected a {0}×{0} matrix", rep.dim()),
                });
            }
            Ok(m)
        }
        GammaSpec::Vector { vector } => Ok(rep.vector(&reals(vector, rep.n(), &format!("{pointer}/vector"))?)),
        GammaSpec::Axial { vector, axial } => Ok(rep.vector_axial(
            &reals(vector, rep.n(), &format!("{pointer}/vector"))?,
            &reals(axial, rep.n(), &format!("{pointer}/axial"))?,
        )),
    }
}

fn transport(rep: &CliffordRep, spec: Option<&TransportSpec>, pointer: &str) -> Result<Operator> {
    match spec {
        None => Ok(identity(rep.dim())),
        Some(TransportSpec::Spinor(m)) => {
            let h = operator_from_json(m, &format!("{pointer}/spinor"))?;
            if h.nrows() != rep.dim() {
                return Err(Error::Schema {
                    pointer: format!("{pointer}/spinor"),
                    message: format!("expected a {0}×{0} matrix", rep.dim()),
                });
            }
            Ok(h)
        }
        Some(TransportSpec::Lorentz(rows)) => {
            let p = format!("{pointer}/lorentz");
            let n = rep.n();
            if rows.len() != n {
                return Err(Error::Schema { pointer: p, message: format!("expected {n} rows") });
            }
            let values = rows
                .iter()
                .enumerate()
                .map(|(r, row)| reals(row, n, &format!("{p}/{r}")))
                .collect::<Result<Vec<_>>>()?;
            let lambda = DMatrix::from_fn(n, n, |r, k| values[r][k]);
            rep.spin_lift(&lambda).map_err(at(p))
        }
    }
}

fn clifford_for(n: usize) -> Result<CliffordRep> {
    build_clifford(n).map_err(at("/n".into()))
}

fn edge_count_matches(g: &WeightedDigraph, found: usize) -> Result<()> {
    if found != g.edge_count() {
        return Err(Error::Schema {
            pointer: "/edges".into(),
            message: format!("{found} entries for {} graph edges", g.edge_count()),
        });
    }
    Ok(())
}

fn length(g: &WeightedDigraph, e: usize, spec: Option<&RationalText>, pointer: String) -> Result<f64> {
    match spec {
        None => Ok(g.weight(e)),
        Some(t) => Ok(rational_to_f64(&t.parse().map_err(at(pointer))?)),
    }
}

impl SplitFile {
    pub fn into_structure(self) -> Result<SplitDiracStructure> {
        let g = self.graph.into_graph().map_err(|e| match e {
            Error::Schema { pointer, message } => Error::Schema { pointer: format!("/graph{pointer}"), message },
            other => other,
        })?;
        edge_count_matches(&g, self.edges.len())?;
        let rep = clifford_for(self.n)?;
        let (mut hs, mut plus, mut minus, mut delta) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (k, e) in self.edges.iter().enumerate() {
            let base = format!("/edges/{k}");
            let h = transport(&rep, e.h.as_ref(), &format!("{base}/h"))?;
            let gp = gamma(&rep, &e.gamma_plus, &format!("{base}/gamma_plus"))?;
            let gm = match &e.gamma_minus {
                Some(spec) => gamma(&rep, spec, &format!("{base}/gamma_minus"))?,
                None => compatible_gamma_minus(&rep, &h, &gp).map_err(at(format!("{base}/h")))?,
            };
            delta.push(length(&g, k, e.delta.as_ref(), format!("{base}/delta"))?);
            hs.push(h);
            plus.push(gp);
            minus.push(gm);
        }
        build_split(&g, &rep, hs, plus, minus, Some(delta))
    }
}

impl MvsFile {
    pub fn into_parts(self) -> Result<(WeightedDigraph, CliffordRep, Vec<MvsEdge>)> {
        let g = self.graph.into_graph()?;
        edge_count_matches(&g, self.edges.len())?;
        let rep = clifford_for(self.n)?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let base = format!("/edges/{k}");
                Ok(MvsEdge {
                    gamma_target: gamma(&rep, &e.gamma, &format!("{base}/gamma"))?,
                    gamma_source: gamma(&rep, &e.gamma_reverse, &format!("{base}/gamma_reverse"))?,
                    hol: transport(&rep, e.hol.as_ref(), &format!("{base}/hol"))?,
                    length: length(&g, k, e.length.as_ref(), format!("{base}/length"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((g, rep, edges))
    }
}
