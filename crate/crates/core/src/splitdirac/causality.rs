//! Stable causality of four-dimensional split structures.
//!
//! Each edge is classified from the chiral parts of `γ_e^+ = ρ(v) + χρ(w)`. A potential
//! `f + hχ` then has to satisfy one pair of strict linear inequalities per edge, which is
//! decided exactly by Fourier–Motzkin elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::fm::{strict_feasibility, Feasibility};
use super::{vector_of, SplitDiracStructure};
use crate::error::{Error, Result};
use crate::graphs::{format_rational, rational_to_f64, Acyclicity, Edge, Side, WeightedDigraph};
use crate::linalg::{c, commutator, identity, Operator, PREDICATE_TOL};

const MAX_ROWS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCausalType {
    TimelikeFuture,
    TimelikePast,
    SigmaPlus,
    SigmaMinus,
    Other,
}

impl EdgeCausalType {
    pub fn is_timelike(self) -> bool {
        matches!(self, EdgeCausalType::TimelikeFuture | EdgeCausalType::TimelikePast)
    }

    /// Signs `(a, b)` such that the edge requires `a·δf + b·σh > 0` and `a·δf − b·σh > 0`
    /// (timelike), or `b·σh + a·δf > 0` and `b·σh − a·δf > 0` (σ types).
    fn constraints(self) -> Option<[(i64, i64); 2]> {
        match self {
            EdgeCausalType::TimelikeFuture => Some([(1, 1), (1, -1)]),
            EdgeCausalType::TimelikePast => Some([(-1, 1), (-1, -1)]),
            EdgeCausalType::SigmaPlus => Some([(1, 1), (-1, 1)]),
            EdgeCausalType::SigmaMinus => Some([(1, -1), (-1, -1)]),
            EdgeCausalType::Other => None,
        }
    }
}

fn serialize_rationals<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
}

/// One strict inequality `Σ coeffs·(f, h) > 0`, variables ordered `f_0 … f_{n−1}, h_0 … h_{n−1}`.
#[derive(Debug, Clone, Serialize)]
pub struct StrictRow {
    pub edge: String,
    pub inequality: String,
    #[serde(serialize_with = "serialize_rationals")]
    pub coeffs: Vec<BigRational>,
}

/// `f + hχ` with rational values per vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalPotential {
    #[serde(serialize_with = "serialize_rationals")]
    pub f: Vec<BigRational>,
    #[serde(serialize_with = "serialize_rationals")]
    pub h: Vec<BigRational>,
}

impl CausalPotential {
    pub fn from_integers(f: &[i64], h: &[i64]) -> Self {
        let q = |x: &i64| BigRational::from_integer(BigInt::from(*x));
        CausalPotential { f: f.iter().map(q).collect(), h: h.iter().map(q).collect() }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfeasibilityCertificate {
    /// Nonnegative integer multipliers, indexed into the system rows, whose combination vanishes.
    Farkas { multipliers: Vec<(usize, String)> },
    /// A vectorial edge whose `γ_e^+` is not timelike.
    NonTimelikeVectorialEdge { edge: String },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict")]
pub enum N4Verdict {
    StablyCausal { potential: CausalPotential },
    NotStablyCausal { certificate: InfeasibilityCertificate },
    Indeterminate { reason: String },
}

/// Outcome of [`n4_stable_causality`].
#[derive(Debug, Clone, Serialize)]
pub struct N4Report {
    pub types: Vec<EdgeCausalType>,
    pub vectorial: bool,
    pub rows: Vec<StrictRow>,
    pub verdict: N4Verdict,
    /// For vectorial structures: a closed path of timelike edges run forward in time.
    pub timelike_loop: Option<Vec<usize>>,
    /// For vectorial structures: whether the verdict agrees with the absence of timelike loops.
    pub agrees_with_loop_criterion: Option<bool>,
}

impl N4Report {
    pub fn is_stably_causal(&self) -> Option<bool> {
        match self.verdict {
            N4Verdict::StablyCausal { .. } => Some(true),
            N4Verdict::NotStablyCausal { .. } => Some(false),
            N4Verdict::Indeterminate { .. } => None,
        }
    }
}

fn classify(s: &SplitDiracStructure, g: &Operator, tol: f64) -> EdgeCausalType {
    let rep = s.rep();
    let (v, w, residual) = rep.axial_decomposition(g);
    let scale = crate::linalg::fro(g).max(1.0);
    let real = v.iter().chain(&w).all(|z| z.im.abs() <= tol * scale);
    if residual > tol * scale || !real {
        return EdgeCausalType::Other;
    }
    let sum: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a.re + b.re).collect();
    let diff: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a.re - b.re).collect();
    match (rep.cone_sign(&sum, tol), rep.cone_sign(&diff, tol)) {
        (Some(1), Some(1)) => EdgeCausalType::TimelikeFuture,
        (Some(-1), Some(-1)) => EdgeCausalType::TimelikePast,
        (Some(1), Some(-1)) => EdgeCausalType::SigmaPlus,
        (Some(-1), Some(1)) => EdgeCausalType::SigmaMinus,
        _ => EdgeCausalType::Other,
    }
}

fn require_n4(s: &SplitDiracStructure) -> Result<()> {
    if s.n() != 4 {
        return Err(Error::InvalidInput(format!("causal classification needs n = 4, found n = {}", s.n())));
    }
    Ok(())
}

/// Causal type of every edge, read from `γ_e^+`.
pub fn classify_edges(s: &SplitDiracStructure, tol: Option<f64>) -> Result<Vec<EdgeCausalType>> {
    require_n4(s)?;
    let tol = tol.unwrap_or(PREDICATE_TOL);
    Ok(s.gamma_plus().iter().map(|g| classify(s, g, tol)).collect())
}

fn system(g: &WeightedDigraph, types: &[EdgeCausalType]) -> Vec<StrictRow> {
    let n = g.vertex_count();
    let mut rows = Vec::new();
    for (e, t) in types.iter().enumerate() {
        let Some(pairs) = t.constraints() else { continue };
        let (tail, head) = (g.endpoint(e, Side::Minus), g.endpoint(e, Side::Plus));
        for (a, b) in pairs {
            let mut coeffs = vec![BigRational::zero(); 2 * n];
            let q = |x: i64| BigRational::from_integer(BigInt::from(x));
            coeffs[head] += q(a);
            coeffs[tail] -= q(a);
            coeffs[n + head] += q(b);
            coeffs[n + tail] += q(b);
            let term = |k: i64, name: &str| match k {
                1 => format!("+{name}"),
                _ => format!("-{name}"),
            };
            rows.push(StrictRow {
                edge: g.edge_label(e),
                inequality: format!("{}{} > 0", term(a, "δf"), term(b, "σh")),
                coeffs,
            });
        }
    }
    rows
}

/// Edgewise exact check of a potential against the classification.
pub fn verify_potential(g: &WeightedDigraph, types: &[EdgeCausalType], p: &CausalPotential) -> Vec<bool> {
    let n = g.vertex_count();
    let x: Vec<BigRational> = p.f.iter().chain(&p.h).cloned().collect();
    let rows = system(g, types);
    (0..g.edge_count())
        .map(|e| {
            if types[e] == EdgeCausalType::Other {
                return false;
            }
            let label = g.edge_label(e);
            x.len() == 2 * n
                && rows
                    .iter()
                    .filter(|r| r.edge == label)
                    .all(|r| r.coeffs.iter().zip(&x).map(|(a, b)| a * b).sum::<BigRational>().is_positive())
        })
        .collect()
}

/// Timelike edges directed forward in time, or `None` if some edge is not timelike.
fn time_directed(g: &WeightedDigraph, types: &[EdgeCausalType]) -> Option<WeightedDigraph> {
    let mut edges = Vec::new();
    for (e, t) in types.iter().enumerate() {
        let edge = &g.edges()[e];
        let (src, dst) = match t {
            EdgeCausalType::TimelikeFuture => (edge.src, edge.dst),
            EdgeCausalType::TimelikePast => (edge.dst, edge.src),
            _ => return None,
        };
        edges.push(Edge { src, dst, weight: BigRational::one(), phase: None, label: None });
    }
    WeightedDigraph::new(g.vertices().to_vec(), edges).ok()
}

/// Decides stable causality of an `n = 4` split structure.
///
/// Structures with an edge of no definite type are indeterminate, except vectorial ones,
/// which are then not stably causal.
pub fn n4_stable_causality(s: &SplitDiracStructure, tol: Option<f64>) -> Result<N4Report> {
    let types = classify_edges(s, tol)?;
    let g = s.graph();
    let t = tol.unwrap_or(PREDICATE_TOL);
    let vectorial = s.gamma_plus().iter().all(|x| vector_of(s.rep(), x, t).is_some());
    let rows = system(g, &types);

    let timelike_loop = if vectorial {
        time_directed(g, &types).and_then(|d| match d.acyclicity_witness() {
            Acyclicity::Cyclic(c) => Some(c),
            Acyclicity::Acyclic(_) => None,
        })
    } else {
        None
    };

    let verdict = if let Some(e) = types.iter().position(|t| *t == EdgeCausalType::Other) {
        if vectorial {
            N4Verdict::NotStablyCausal { certificate: InfeasibilityCertificate::NonTimelikeVectorialEdge { edge: g.edge_label(e) } }
        } else {
            N4Verdict::Indeterminate { reason: format!("edge {} has no definite causal type", g.edge_label(e)) }
        }
    } else {
        let a: Vec<Vec<BigRational>> = rows.iter().map(|r| r.coeffs.clone()).collect();
        match strict_feasibility(&a, 2 * g.vertex_count(), MAX_ROWS)? {
            Feasibility::Feasible(x) => {
                let n = g.vertex_count();
                N4Verdict::StablyCausal { potential: CausalPotential { f: x[..n].to_vec(), h: x[n..].to_vec() } }
            }
            Feasibility::Infeasible(y) => N4Verdict::NotStablyCausal {
                certificate: InfeasibilityCertificate::Farkas {
                    multipliers: y.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, format_rational(v))).collect(),
                },
            },
        }
    };
    let agrees = vectorial.then(|| {
        let expected = types.iter().all(|t| t.is_timelike()) && timelike_loop.is_none();
        matches!(verdict, N4Verdict::StablyCausal { .. }) == expected
    });
    Ok(N4Report { types, vectorial, rows, verdict, timelike_loop, agrees_with_loop_criterion: agrees })
}

/// `scale·[D, π(f + hχ)]`.
pub fn potential_form(s: &SplitDiracStructure, p: &CausalPotential, scale: Complex64) -> Result<Operator> {
    let n = s.graph().vertex_count();
    if p.f.len() != n || p.h.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.f.len().min(p.h.len()) });
    }
    let d = s.rep().dim();
    let section: Vec<Operator> = (0..n)
        .map(|v| identity(d) * c(rational_to_f64(&p.f[v]), 0.0) + s.rep().chi() * c(rational_to_f64(&p.h[v]), 0.0))
        .collect();
    Ok(commutator(&s.dirac(), &s.section_operator(&section)) * scale)
}
