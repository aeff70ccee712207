//! Comparison with the vertex-based discrete Dirac operator built from Clifford data and a
//! holonomy on each edge.
//!
//! `D̃ψ(v) = i Σ_{t(e)=v} (2l_e)⁻¹ γ_e Hol(e) ψ(s(e)) + i Σ_{s(e)=v} (2l_e)⁻¹ γ_ē Hol(e)⁻¹ ψ(t(e))`.

use num_complex::Complex64;
use serde::Serialize;

use super::{build_split, SplitDiracStructure};
use crate::clifford::CliffordRep;
use crate::error::{Error, Result};
use crate::graphs::{Side, WeightedDigraph};
use crate::linalg::{c, fro, identity, inverse, Operator, PREDICATE_TOL};

/// Data of one edge: `γ_e` at the target, `γ_ē` at the source, `Hol(e): S_{s(e)} → S_{t(e)}`.
#[derive(Debug, Clone)]
pub struct MvsEdge {
    pub gamma_target: Operator,
    pub gamma_source: Operator,
    pub hol: Operator,
    pub length: f64,
}

fn check_edges(g: &WeightedDigraph, rep: &CliffordRep, edges: &[MvsEdge]) -> Result<()> {
    if edges.len() != g.edge_count() {
        return Err(Error::DimensionMismatch { expected: g.edge_count(), found: edges.len() });
    }
    let d = rep.dim();
    for (k, e) in edges.iter().enumerate() {
        for m in [&e.gamma_target, &e.gamma_source, &e.hol] {
            if m.shape() != (d, d) {
                return Err(Error::DimensionMismatch { expected: d, found: m.nrows() });
            }
        }
        if !(e.length.is_finite() && e.length > 0.0) {
            return Err(Error::InvalidInput(format!("length of edge {k} must be positive")));
        }
    }
    Ok(())
}

/// `D̃` on `⊕_v S_v`, vertex blocks in vertex order.
pub fn build_mvs_dirac(g: &WeightedDigraph, rep: &CliffordRep, edges: &[MvsEdge]) -> Result<Operator> {
    check_edges(g, rep, edges)?;
    let d = rep.dim();
    let mut out = Operator::zeros(g.vertex_count() * d, g.vertex_count() * d);
    for (k, e) in edges.iter().enumerate() {
        let (s, t) = (g.endpoint(k, Side::Minus), g.endpoint(k, Side::Plus));
        let w = c(0.0, 0.5 / e.length);
        let back = inverse(&e.hol).ok_or_else(|| Error::Singular(format!("holonomy of edge {}", g.edge_label(k))))?;
        let forward = &e.gamma_target * &e.hol * w;
        let backward = &e.gamma_source * back * w;
        let mut block = out.view_mut((t * d, s * d), (d, d));
        block += forward;
        let mut block = out.view_mut((s * d, t * d), (d, d));
        block += backward;
    }
    Ok(out)
}

/// The split structure with `γ^+ = γ_e`, `γ^- = −γ_ē`, `δ = l`, `h^+ = Hol(e)`.
pub fn split_from_mvs(g: &WeightedDigraph, rep: &CliffordRep, edges: &[MvsEdge]) -> Result<SplitDiracStructure> {
    check_edges(g, rep, edges)?;
    build_split(
        g,
        rep,
        edges.iter().map(|e| e.hol.clone()).collect(),
        edges.iter().map(|e| e.gamma_target.clone()).collect(),
        edges.iter().map(|e| -e.gamma_source.clone()).collect(),
        Some(edges.iter().map(|e| e.length).collect()),
    )
}

/// `i(φ)(e,+) = φ(t(e))`, `i(φ)(e,−) = φ(s(e))`.
pub fn graph_embedding(s: &SplitDiracStructure) -> Operator {
    let d = s.rep().dim();
    let g = s.graph();
    let mut out = Operator::zeros(s.dim(), g.vertex_count() * d);
    for e in 0..g.edge_count() {
        for side in [Side::Minus, Side::Plus] {
            let v = g.endpoint(e, side);
            out.view_mut((s.offset(e, side), v * d), (d, d)).copy_from(&identity(d));
        }
    }
    out
}

/// Average over the split vertices sitting at each vertex.
pub fn averaging_projection(s: &SplitDiracStructure) -> Operator {
    let d = s.rep().dim();
    let g = s.graph();
    let degrees = g.degrees();
    let mut out = Operator::zeros(g.vertex_count() * d, s.dim());
    for e in 0..g.edge_count() {
        for side in [Side::Minus, Side::Plus] {
            let v = g.endpoint(e, side);
            let block = identity(d) * c(1.0 / degrees[v] as f64, 0.0);
            out.view_mut((v * d, s.offset(e, side)), (d, d)).copy_from(&block);
        }
    }
    out
}

/// Scalar relating `(Π∘D∘i)` to `D̃` at one vertex.
#[derive(Debug, Clone, Serialize)]
pub struct VertexFactor {
    pub vertex: String,
    pub degree: usize,
    /// Least-squares `k_v` in `(Π D i)_v = k_v D̃_v`, as `[re, im]`; absent when `D̃_v = 0`.
    pub factor: Option<[f64; 2]>,
    /// `‖(Π D i)_v − k_v D̃_v‖ / ‖(Π D i)_v‖`.
    pub residual: f64,
}

/// Outcome of [`check_commuting_diagram`].
#[derive(Debug, Clone, Serialize)]
pub struct MvsReport {
    pub vertices: Vec<VertexFactor>,
    /// Every vertex has a factor, with residual within tolerance, and all factors agree.
    pub uniform: bool,
    /// The common factor when uniform.
    pub factor: Option<[f64; 2]>,
    /// Largest entry of `Π D i − K D̃` with `K_v = −i d_v/2`.
    pub stated_residual: f64,
    pub matches_stated: bool,
    /// Largest entry of `D̃ − K (Π D i)` with `K_v = −i d_v/2`.
    pub inverse_residual: f64,
    pub inverse_holds: bool,
    /// `‖Π∘i − 1‖`.
    pub retraction_residual: f64,
}

fn max_entry(a: &Operator) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Computes `Π∘D∘i` for the split structure and compares it with `D̃` vertex by vertex.
pub fn check_commuting_diagram(s: &SplitDiracStructure, dtilde: &Operator, tol: Option<f64>) -> Result<MvsReport> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let d = s.rep().dim();
    let g = s.graph();
    let nv = g.vertex_count() * d;
    if dtilde.shape() != (nv, nv) {
        return Err(Error::DimensionMismatch { expected: nv, found: dtilde.nrows() });
    }
    let emb = graph_embedding(s);
    let proj = averaging_projection(s);
    let lhs = &proj * s.dirac() * &emb;
    let degrees = g.degrees();

    let mut vertices = Vec::new();
    let mut stated = Operator::zeros(nv, nv);
    for (v, &degree) in degrees.iter().enumerate() {
        let l = lhs.rows(v * d, d).into_owned();
        let r = dtilde.rows(v * d, d).into_owned();
        let rr: f64 = r.iter().map(|z| z.norm_sqr()).sum();
        let (factor, residual) = if rr <= tol * tol {
            (None, if fro(&l) <= tol { 0.0 } else { f64::INFINITY })
        } else {
            let k: Complex64 = r.iter().zip(l.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>() / rr;
            let res = fro(&(&l - &r * k)) / fro(&l).max(f64::MIN_POSITIVE);
            (Some(k), res)
        };
        let kv = c(0.0, -(degree as f64) / 2.0);
        stated.view_mut((v * d, v * d), (d, d)).copy_from(&(identity(d) * kv));
        vertices.push(VertexFactor {
            vertex: g.label(v).to_string(),
            degree,
            factor: factor.map(|k| [k.re, k.im]),
            residual,
        });
    }
    let factors: Vec<Complex64> = vertices.iter().filter_map(|x| x.factor.map(|f| c(f[0], f[1]))).collect();
    let uniform = factors.len() == vertices.len()
        && vertices.iter().all(|x| x.residual <= tol)
        && factors.windows(2).all(|w| (w[0] - w[1]).norm() <= tol);
    let stated_residual = max_entry(&(&lhs - &stated * dtilde));
    let inverse_residual = max_entry(&(dtilde - &stated * &lhs));
    Ok(MvsReport {
        uniform,
        factor: uniform.then(|| [factors[0].re, factors[0].im]),
        vertices,
        stated_residual,
        matches_stated: stated_residual <= tol,
        inverse_residual,
        inverse_holds: inverse_residual <= tol,
        retraction_residual: fro(&(&proj * &emb - identity(nv))),
    })
}
