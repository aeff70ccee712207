//! The split Dirac structure: spinors on the split graph, transported along edges by a
//! discrete connection `h_e^±`, with Dirac operator `(DF)(e,±) = ∓δ_e⁻¹ γ_e^± h_e^± F(e,∓)`.
//!
//! All vertices share one Clifford representation. Basis order on `K` is the block of
//! `(e,−)` followed by the block of `(e,+)` for each edge in turn.

mod causality;
mod fm;
mod json;
mod mvs;

pub use causality::{
    classify_edges, n4_stable_causality, potential_form, verify_potential, CausalPotential, EdgeCausalType,
    InfeasibilityCertificate, N4Report, N4Verdict, StrictRow,
};
pub use fm::{certifies, strict_feasibility, Feasibility};
pub use json::{GammaSpec, MvsEdgeFile, MvsFile, SplitEdgeFile, SplitFile, TransportSpec};
pub use mvs::{
    averaging_projection, build_mvs_dirac, check_commuting_diagram, graph_embedding, split_from_mvs, MvsEdge,
    MvsReport, VertexFactor,
};

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::clifford::{is_proper_orthochronous, CliffordRep, Signature};
use crate::error::{Error, Result};
use crate::graphs::{Side, WeightedDigraph};
use crate::kreinlin::{is_krein_positive, krein_adjoint, AntilinearOperator, KreinSpace};
use crate::linalg::{c, fro, identity, inverse, real_null_space, zeros, Operator, PREDICATE_TOL};
use crate::spectral::{
    check_reconstructibility, mismatch, verify_axioms, verify_time_orientation, AlgebraRep, AxiomReport,
    SpectralSpacetime, TimeOrientationForm,
};

#[derive(Debug, Clone)]
pub struct SplitDiracStructure {
    graph: WeightedDigraph,
    rep: CliffordRep,
    h_plus: Vec<Operator>,
    h_minus: Vec<Operator>,
    gamma_plus: Vec<Operator>,
    gamma_minus: Vec<Operator>,
    delta: Vec<f64>,
}

/// Assembles a split Dirac structure. `delta` defaults to the graph weights.
pub fn build_split(
    graph: &WeightedDigraph,
    rep: &CliffordRep,
    h_plus: Vec<Operator>,
    gamma_plus: Vec<Operator>,
    gamma_minus: Vec<Operator>,
    delta: Option<Vec<f64>>,
) -> Result<SplitDiracStructure> {
    let m = graph.edge_count();
    if m == 0 {
        return Err(Error::InvalidInput("the graph has no edges".into()));
    }
    let delta = delta.unwrap_or_else(|| (0..m).map(|e| graph.weight(e)).collect());
    for (what, found) in [("h_plus", h_plus.len()), ("gamma_plus", gamma_plus.len()), ("gamma_minus", gamma_minus.len()), ("delta", delta.len())] {
        if found != m {
            return Err(Error::InvalidInput(format!("{what} has {found} entries for {m} edges")));
        }
    }
    let d = rep.dim();
    for op in h_plus.iter().chain(&gamma_plus).chain(&gamma_minus) {
        if op.shape() != (d, d) {
            return Err(Error::DimensionMismatch { expected: d, found: op.nrows() });
        }
    }
    if let Some(k) = delta.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::InvalidInput(format!("weight of edge {k} must be positive")));
    }
    let h_minus = h_plus
        .iter()
        .enumerate()
        .map(|(e, h)| inverse(h).ok_or_else(|| Error::Singular(format!("transport on edge {}", graph.edge_label(e)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SplitDiracStructure { graph: graph.clone(), rep: rep.clone(), h_plus, h_minus, gamma_plus, gamma_minus, delta })
}

/// The `γ_e^-` compatible with the real structure for a given `γ_e^+`:
/// `γ_e^- = −h_e^- J γ_e^+ J⁻¹ h_e^+`.
pub fn compatible_gamma_minus(rep: &CliffordRep, h_plus: &Operator, gamma_plus: &Operator) -> Result<Operator> {
    let hm = inverse(h_plus).ok_or_else(|| Error::Singular("spinor transport".into()))?;
    Ok(-(hm * rep.real().conjugate(gamma_plus)? * h_plus))
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Minus => 0,
        Side::Plus => 1,
    }
}

/// A per-edge condition of the structure theorem.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeCondition {
    pub name: String,
    pub edge: String,
    pub passed: bool,
    pub residual: f64,
}

impl EdgeCondition {
    fn new(name: &str, edge: String, residual: f64, tol: f64) -> Self {
        EdgeCondition { name: name.into(), edge, passed: residual <= tol, residual }
    }
}

fn serialize_lorentz<S: Serializer>(m: &[Option<DMatrix<f64>>], s: S) -> std::result::Result<S::Ok, S::Error> {
    m.iter()
        .map(|x| x.as_ref().map(real_rows))
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Rows of a real matrix, for JSON output.
pub fn real_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| m[(r, k)]).collect()).collect()
}

/// Properties of the discrete connection, each with its per-edge residuals.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionReport {
    pub metric: bool,
    pub spin_preserving: bool,
    pub orientation_preserving: bool,
    pub clifford: bool,
    pub conditions: Vec<EdgeCondition>,
    /// `Λ_e` with `h_e^+ ρ(v) h_e^- = ρ(Λ_e v)`, when the connection is Clifford on `e`.
    #[serde(serialize_with = "serialize_lorentz")]
    pub levi_civita: Vec<Option<DMatrix<f64>>>,
    /// Whether each available `Λ_e` is proper orthochronous.
    pub proper_orthochronous: Vec<Option<bool>>,
}

/// Report of the structure theorem check.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem6Report {
    pub conditions: Vec<EdgeCondition>,
    pub connection: ConnectionReport,
    pub vectorial: bool,
    pub complete: bool,
    /// Axiom verification of the assembled structure, when its Krein form is valid.
    pub axioms: Option<AxiomReport>,
    pub passed: bool,
}

impl Theorem6Report {
    /// Names of failed conditions, as `name@edge`.
    pub fn failures(&self) -> Vec<String> {
        self.conditions
            .iter()
            .chain(&self.connection.conditions)
            .filter(|c| !c.passed)
            .map(|c| format!("{}@{}", c.name, c.edge))
            .collect()
    }

    /// Distinct names of failed conditions.
    pub fn failed_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .conditions
            .iter()
            .chain(&self.connection.conditions)
            .filter(|c| !c.passed)
            .map(|c| c.name.clone())
            .collect();
        names.sort();
        names.dedup();
        names
    }
}

/// A loop at the base point with its spinor and vector holonomy.
#[derive(Debug, Clone, Serialize)]
pub struct HolonomyGenerator {
    pub path: Vec<usize>,
    #[serde(serialize_with = "crate::io::serialize_operator")]
    pub spinor: Operator,
    #[serde(serialize_with = "serialize_real")]
    pub lorentz: DMatrix<f64>,
    pub residual: f64,
}

fn serialize_real<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    real_rows(m).serialize(s)
}

/// Verdict of [`check_reconstructible_split`].
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict")]
pub enum SplitReconstruction {
    Reconstructible {
        /// Parallel future timelike field, one vector per vertex, when one exists.
        field: Option<Vec<Vec<f64>>>,
        #[serde(serialize_with = "crate::io::serialize_operator")]
        form: Operator,
        /// Operator-level worst residual of `βπ(a)×β⁻¹ ∈ π(𝒜)` for the returned form.
        operator_residual: f64,
        cross_validated: bool,
    },
    NotReconstructible {
        reason: String,
        /// Operator-level residuals for the probe forms tried, all expected to be large.
        probe_residuals: Vec<f64>,
        cross_validated: bool,
    },
}

impl SplitReconstruction {
    pub fn is_reconstructible(&self) -> bool {
        matches!(self, SplitReconstruction::Reconstructible { .. })
    }

    pub fn cross_validated(&self) -> bool {
        match self {
            SplitReconstruction::Reconstructible { cross_validated, .. }
            | SplitReconstruction::NotReconstructible { cross_validated, .. } => *cross_validated,
        }
    }
}

impl SplitDiracStructure {
    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn rep(&self) -> &CliffordRep {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn h_plus(&self) -> &[Operator] {
        &self.h_plus
    }

    pub fn h_minus(&self) -> &[Operator] {
        &self.h_minus
    }

    pub fn gamma_plus(&self) -> &[Operator] {
        &self.gamma_plus
    }

    pub fn gamma_minus(&self) -> &[Operator] {
        &self.gamma_minus
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    /// Dimension of `K`: `2|E|·2^{n/2}`.
    pub fn dim(&self) -> usize {
        2 * self.graph.edge_count() * self.rep.dim()
    }

    /// First index of the spinor block at `(e, side)`.
    pub fn offset(&self, e: usize, side: Side) -> usize {
        (2 * e + side_index(side)) * self.rep.dim()
    }

    /// `h_e^±`, the transport into the `side` end of `e`.
    pub fn transport_into(&self, e: usize, side: Side) -> &Operator {
        match side {
            Side::Plus => &self.h_plus[e],
            Side::Minus => &self.h_minus[e],
        }
    }

    fn gamma(&self, e: usize, side: Side) -> &Operator {
        match side {
            Side::Plus => &self.gamma_plus[e],
            Side::Minus => &self.gamma_minus[e],
        }
    }

    /// Places `block(e, side)` at row block `(e, side)`, column block `(e, opposite)`.
    fn off_diagonal(&self, block: impl Fn(usize, Side) -> Operator) -> Operator {
        let d = self.rep.dim();
        let mut out = zeros(self.dim());
        for e in 0..self.graph.edge_count() {
            for side in [Side::Minus, Side::Plus] {
                let b = block(e, side);
                out.view_mut((self.offset(e, side), self.offset(e, side.opposite())), (d, d)).copy_from(&b);
            }
        }
        out
    }

    fn block_diagonal(&self, block: impl Fn(usize, Side) -> Operator) -> Operator {
        let d = self.rep.dim();
        let mut out = zeros(self.dim());
        for e in 0..self.graph.edge_count() {
            for side in [Side::Minus, Side::Plus] {
                let o = self.offset(e, side);
                out.view_mut((o, o), (d, d)).copy_from(&block(e, side));
            }
        }
        out
    }

    /// Gram matrix of `(F,G) = Σ_e (F(e,+), h_e^+G(e,−)) + (F(e,−), h_e^-G(e,+))`.
    pub fn krein_matrix(&self) -> Operator {
        let j = self.rep.krein().j();
        self.off_diagonal(|e, side| j * self.transport_into(e, side))
    }

    pub fn dirac(&self) -> Operator {
        self.off_diagonal(|e, side| {
            self.gamma(e, side) * self.transport_into(e, side) * c(-side.sign() / self.delta[e], 0.0)
        })
    }

    pub fn chi(&self) -> Operator {
        self.block_diagonal(|_, _| self.rep.chi().clone())
    }

    /// `(JF)(e,±) = h_e^± J_{e∓} F(e,∓)`.
    pub fn real(&self) -> AntilinearOperator {
        let m = self.rep.real().matrix();
        AntilinearOperator::new(self.off_diagonal(|e, side| self.transport_into(e, side) * m))
    }

    /// `π(a)` for a section given by one spinor-space operator per vertex.
    pub fn section_operator(&self, a: &[Operator]) -> Operator {
        self.block_diagonal(|e, side| a[self.graph.endpoint(e, side)].clone())
    }

    /// Even Clifford sections, one basis element per vertex and even monomial.
    pub fn algebra(&self) -> Result<AlgebraRep> {
        let even = self.rep.even_basis();
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        let d = self.rep.dim();
        for v in 0..self.graph.vertex_count() {
            for (set, b) in &even {
                let mut a = vec![zeros(d); self.graph.vertex_count()];
                a[v] = b.clone();
                basis.push(self.section_operator(&a));
                let name: String = set.iter().map(|k| format!("e{k}")).collect();
                labels.push(format!("{}:{}", self.graph.label(v), if name.is_empty() { "1".into() } else { name }));
            }
        }
        AlgebraRep::assume_closed(basis, labels)
    }

    /// The assembled spacetime; fails when the Krein form is not hermitian.
    pub fn spacetime(&self) -> Result<SpectralSpacetime> {
        SpectralSpacetime::new(
            KreinSpace::new(self.krein_matrix())?,
            self.algebra()?,
            self.dirac(),
            self.real(),
            self.chi(),
            Signature::Antilorentzian,
            self.rep.signs().ko_dim_mod8,
        )
    }

    /// Transport `h_P` along a vertex path.
    pub fn transport(&self, path: &[usize]) -> Result<Operator> {
        let mut h = identity(self.rep.dim());
        for (e, s) in self.graph.path_edges(path)? {
            let step = if s > 0 { &self.h_plus[e] } else { &self.h_minus[e] };
            h = step * h;
        }
        Ok(h)
    }

    /// A route between two vertices through the spanning forest.
    pub fn route(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        let a = self.graph.tree_path_from_root(from);
        let b = self.graph.tree_path_from_root(to);
        if a[0] != b[0] {
            return Err(Error::Disconnected("a route between vertices".into()));
        }
        let common = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
        let mut path: Vec<usize> = a[common - 1..].iter().rev().copied().collect();
        path.extend_from_slice(&b[common..]);
        Ok(path)
    }

    /// `(βF)(e,±) = Γ_e^± h_e^± F(e,∓)` for given `Γ_e^-`, with `Γ_e^+ = −h_e^+ J Γ_e^- J⁻¹ h_e^-`.
    pub fn assemble_orientation_form(&self, gamma_minus: &[Operator]) -> Result<Operator> {
        if gamma_minus.len() != self.graph.edge_count() {
            return Err(Error::DimensionMismatch { expected: self.graph.edge_count(), found: gamma_minus.len() });
        }
        let plus = gamma_minus
            .iter()
            .enumerate()
            .map(|(e, g)| Ok(-(&self.h_plus[e] * self.rep.real().conjugate(g)? * &self.h_minus[e])))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.off_diagonal(|e, side| match side {
            Side::Plus => &plus[e] * &self.h_plus[e],
            Side::Minus => &gamma_minus[e] * &self.h_minus[e],
        }))
    }
}

/// Metric, spin, orientation and Clifford properties of the connection.
pub fn connection_properties(s: &SplitDiracStructure, tol: Option<f64>) -> ConnectionReport {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let rep = &s.rep;
    let j = rep.krein().j();
    let m = rep.real().matrix();
    let chi = rep.chi();
    let mut conditions = Vec::new();
    let mut levi_civita = Vec::new();
    let mut proper = Vec::new();
    let (mut metric, mut spin, mut orient, mut clifford) = (true, true, true, true);
    for (e, h) in s.h_plus.iter().enumerate() {
        let label = s.graph.edge_label(e);
        let checks = [
            EdgeCondition::new("metric", label.clone(), mismatch(&(h.adjoint() * j * h), j), tol),
            EdgeCondition::new("spin", label.clone(), mismatch(&(h * m), &(m * h.map(|z| z.conj()))), tol),
            EdgeCondition::new("orientation", label.clone(), mismatch(&(chi * h), &(h * chi)), tol),
        ];
        metric &= checks[0].passed;
        spin &= checks[1].passed;
        orient &= checks[2].passed;
        conditions.extend(checks);
        let (lambda, residual) = match rep.lorentz_of(h) {
            Ok(x) => x,
            Err(_) => (DMatrix::zeros(rep.n(), rep.n()), f64::INFINITY),
        };
        let cond = EdgeCondition::new("clifford", label, residual, tol);
        clifford &= cond.passed;
        if cond.passed {
            proper.push(Some(is_proper_orthochronous(&lambda, 1e-8)));
            levi_civita.push(Some(lambda));
        } else {
            proper.push(None);
            levi_civita.push(None);
        }
        conditions.push(cond);
    }
    ConnectionReport {
        metric,
        spin_preserving: spin,
        orientation_preserving: orient,
        clifford,
        conditions,
        levi_civita,
        proper_orthochronous: proper,
    }
}

/// Real vector `v` with `γ = ρ(v)`, if `γ` is a vector.
fn vector_of(rep: &CliffordRep, g: &Operator, tol: f64) -> Option<Vec<f64>> {
    let (coeffs, residual) = rep.vector_part(g);
    let scale = fro(g).max(1.0);
    let real = coeffs.iter().all(|z| z.im.abs() <= tol * scale);
    (residual <= tol * scale && real && fro(g) > tol).then(|| coeffs.iter().map(|z| z.re).collect())
}

fn rank(vectors: &[Vec<f64>], n: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(vectors.len(), n, |r, k| vectors[r][k]);
    n - real_null_space(&m, 1e-9).len()
}

/// The conditions of the structure theorem, edge by edge, then the axioms of the assembled
/// structure with the predicted signs `ε̃ = ε`, `ε̃'' = ε''`.
pub fn verify_theorem6(s: &SplitDiracStructure, tol: Option<f64>) -> Result<Theorem6Report> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let rep = &s.rep;
    let d = rep.dim();
    let chi = rep.chi();
    let id = identity(d);
    let left = (&id - chi) * c(0.5, 0.0);
    let right = (&id + chi) * c(0.5, 0.0);
    let mut conditions = Vec::new();
    for e in 0..s.graph.edge_count() {
        let label = s.graph.edge_label(e);
        for side in [Side::Minus, Side::Plus] {
            let g = s.gamma(e, side);
            let at = format!("{label}{}", if side == Side::Plus { "+" } else { "-" });
            conditions.push(EdgeCondition::new("selfadjoint", at.clone(), mismatch(&krein_adjoint(g, rep.krein())?, g), tol));
            let odd = fro(&(chi * g + g * chi)) / fro(g).max(1.0);
            conditions.push(EdgeCondition::new("odd", at.clone(), odd, tol));
            let scale = fro(g).max(f64::MIN_POSITIVE);
            let weakest = (fro(&(g * &left)) / scale).min(fro(&(g * &right)) / scale);
            conditions.push(EdgeCondition {
                name: "nonvanishing".into(),
                edge: at,
                passed: weakest > tol,
                residual: weakest,
            });
        }
        let (hp, hm) = (&s.h_plus[e], &s.h_minus[e]);
        let jg_plus = rep.real().conjugate(&s.gamma_plus[e])?;
        let jg_minus = rep.real().conjugate(&s.gamma_minus[e])?;
        let r_plus = mismatch(&jg_plus, &-(hp * &s.gamma_minus[e] * hm));
        let r_minus = mismatch(&jg_minus, &-(hm * &s.gamma_plus[e] * hp));
        conditions.push(EdgeCondition::new("j_compatibility", label, r_plus.max(r_minus), tol));
    }
    let connection = connection_properties(s, Some(tol));

    let mut vectors: Vec<Vec<Vec<f64>>> = vec![Vec::new(); s.graph.vertex_count()];
    let mut vectorial = true;
    for e in 0..s.graph.edge_count() {
        for side in [Side::Minus, Side::Plus] {
            match vector_of(rep, s.gamma(e, side), tol) {
                Some(v) => vectors[s.graph.endpoint(e, side)].push(v),
                None => vectorial = false,
            }
        }
    }
    let complete = vectorial && vectors.iter().all(|vs| rank(vs, rep.n()) == rep.n());

    let axioms = match s.spacetime() {
        Ok(st) => Some(verify_axioms(&st, Some(tol))?),
        Err(_) => None,
    };
    let passed = conditions.iter().chain(&connection.conditions).all(|c| c.passed)
        && axioms.as_ref().is_some_and(|a| a.passed);
    Ok(Theorem6Report { conditions, connection, vectorial, complete, axioms, passed })
}

/// Builds the positive form from Krein-positive, `J`-imaginary `Γ_e^-` and certifies it.
pub fn orientation_form_family(
    s: &SplitDiracStructure,
    gamma_minus: &[Operator],
    tol: Option<f64>,
) -> Result<(TimeOrientationForm, crate::spectral::TimeOrientationReport)> {
    let t = tol.unwrap_or(PREDICATE_TOL);
    for (e, g) in gamma_minus.iter().enumerate() {
        if !is_krein_positive(g, s.rep.krein(), Some(t)) {
            return Err(Error::InvalidInput(format!("Γ on edge {} is not Krein-positive", s.graph.edge_label(e))));
        }
        if mismatch(&s.rep.real().conjugate(g)?, &-g) > t {
            return Err(Error::InvalidInput(format!("Γ on edge {} is not J-imaginary", s.graph.edge_label(e))));
        }
    }
    let form = TimeOrientationForm::new(s.assemble_orientation_form(gamma_minus)?);
    let report = verify_time_orientation(&s.spacetime()?, &form, tol)?;
    Ok((form, report))
}

/// One generator per fundamental cycle, transported to `basepoint`.
pub fn holonomy_generators(s: &SplitDiracStructure, basepoint: usize) -> Result<Vec<HolonomyGenerator>> {
    if !s.graph.is_connected() {
        return Err(Error::Disconnected("holonomy".into()));
    }
    if basepoint >= s.graph.vertex_count() {
        return Err(Error::UnknownVertex(basepoint.to_string()));
    }
    let mut out = Vec::new();
    for cycle in s.graph.fundamental_cycles() {
        let start = cycle.vertices[0];
        let mut path = s.route(basepoint, start)?;
        path.extend_from_slice(&cycle.vertices[1..]);
        let back = s.route(start, basepoint)?;
        path.extend_from_slice(&back[1..]);
        let spinor = s.transport(&path)?;
        let (lorentz, residual) = s.rep.lorentz_of(&spinor)?;
        out.push(HolonomyGenerator { path, spinor, lorentz, residual });
    }
    Ok(out)
}

/// Common fixed subspace of the generators, as orthonormal columns.
fn fixed_subspace(n: usize, generators: &[HolonomyGenerator]) -> DMatrix<f64> {
    if generators.is_empty() {
        return DMatrix::identity(n, n);
    }
    let mut stacked = DMatrix::zeros(n * generators.len(), n);
    for (k, g) in generators.iter().enumerate() {
        let block = &g.lorentz - DMatrix::identity(n, n);
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&block);
    }
    let kernel = real_null_space(&stacked, 1e-9);
    let mut basis = DMatrix::zeros(n, kernel.len());
    for (k, v) in kernel.iter().enumerate() {
        basis.set_column(k, v);
    }
    basis
}

/// A future timelike vector in the span of `basis`, maximizing `g(u,u)` on its unit sphere.
fn timelike_in(rep: &CliffordRep, basis: &DMatrix<f64>) -> Option<Vec<f64>> {
    if basis.ncols() == 0 {
        return None;
    }
    let eta = crate::clifford::minkowski(rep.n());
    let restricted = basis.transpose() * &eta * basis;
    let eig = restricted.symmetric_eigen();
    let (k, top) = eig.eigenvalues.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (k, x)| if *x > b.1 { (k, *x) } else { b });
    if top <= 1e-9 {
        return None;
    }
    let u = basis * eig.eigenvectors.column(k);
    let norm = rep.metric(u.as_slice(), u.as_slice()).sqrt();
    let mut u: Vec<f64> = u.iter().map(|x| x / norm).collect();
    match rep.cone_sign(&u, 1e-9) {
        Some(1) => {}
        Some(_) => u.iter_mut().for_each(|x| *x = -*x),
        None => return None,
    }
    Some(u)
}

fn apply(lambda: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (lambda * nalgebra::DVector::from_column_slice(v)).iter().copied().collect()
}

/// Reconstructibility through parallel timelike vector fields.
///
/// For `n = 2` the structure is always reconstructible. For `n > 2` with a Clifford
/// connection it is reconstructible iff the holonomy group fixes a timelike vector; the
/// verdict is cross-validated by the operator-level check on the returned or probe forms.
pub fn check_reconstructible_split(s: &SplitDiracStructure, tol: Option<f64>) -> Result<SplitReconstruction> {
    let tol_v = tol.unwrap_or(PREDICATE_TOL);
    let n = s.rep.n();
    let connection = connection_properties(s, tol);
    if n > 2 && !connection.clifford {
        return Err(Error::CriterionUnavailable("the connection is not Clifford, so the holonomy criterion does not apply".into()));
    }
    let st = s.spacetime()?;
    let base = s.graph.tree_path_from_root(0)[0];
    let generators = if connection.clifford { holonomy_generators(s, base)? } else { Vec::new() };
    let fixed = if connection.clifford { timelike_in(&s.rep, &fixed_subspace(n, &generators)) } else { None };

    let field = match &fixed {
        Some(u0) => Some(
            (0..s.graph.vertex_count())
                .map(|v| {
                    let (lambda, _) = s.rep.lorentz_of(&s.transport(&s.route(base, v)?)?)?;
                    Ok(apply(&lambda, u0))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let e0: Vec<f64> = (0..n).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect();
    let residual_for = |gammas: Vec<Operator>| -> Result<f64> {
        let beta = s.assemble_orientation_form(&gammas)?;
        Ok(check_reconstructibility(&st, &TimeOrientationForm::new(beta), tol)?.worst_residual)
    };

    if let Some(field) = field {
        let gammas: Vec<Operator> = s.graph.edges().iter().map(|e| s.rep.vector(&field[e.src])).collect();
        let form = s.assemble_orientation_form(&gammas)?;
        let r = check_reconstructibility(&st, &TimeOrientationForm::new(form.clone()), tol)?;
        return Ok(SplitReconstruction::Reconstructible {
            field: Some(field),
            form,
            operator_residual: r.worst_residual,
            cross_validated: r.reconstructible,
        });
    }
    if n == 2 {
        let gammas = vec![s.rep.vector(&e0); s.graph.edge_count()];
        let form = s.assemble_orientation_form(&gammas)?;
        let r = check_reconstructibility(&st, &TimeOrientationForm::new(form.clone()), tol)?;
        return Ok(SplitReconstruction::Reconstructible {
            field: None,
            form,
            operator_residual: r.worst_residual,
            cross_validated: r.reconstructible,
        });
    }
    // Probes: the constant field e₀, and e₀ transported along the spanning forest.
    let constant = vec![s.rep.vector(&e0); s.graph.edge_count()];
    let transported = s
        .graph
        .edges()
        .iter()
        .map(|e| {
            let (lambda, _) = s.rep.lorentz_of(&s.transport(&s.route(base, e.src)?)?)?;
            Ok(s.rep.vector(&apply(&lambda, &e0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let probe_residuals = vec![residual_for(constant)?, residual_for(transported)?];
    let cross_validated = probe_residuals.iter().all(|r| *r > tol_v);
    Ok(SplitReconstruction::NotReconstructible {
        reason: format!(
            "the holonomy group ({} generator{}) fixes no timelike vector",
            generators.len(),
            if generators.len() == 1 { "" } else { "s" }
        ),
        probe_residuals,
        cross_validated,
    })
}

/// The structure with `n = 0`: one-dimensional fibres, `h = γ = 1`, `χ_{e^±} = ±1`,
/// `J_{e^±} = ±c.c.`; the Krein form pairs `(e,−)` with `(e,+)`.
pub fn degenerate_split_spacetime(g: &WeightedDigraph) -> Result<SpectralSpacetime> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::InvalidInput("the graph has no edges".into()));
    }
    let d = 2 * m;
    let (mut j, mut dirac, mut chi, mut real) = (zeros(d), zeros(d), zeros(d), zeros(d));
    for e in 0..m {
        let (lo, hi) = (2 * e, 2 * e + 1);
        let w = 1.0 / g.weight(e);
        j[(lo, hi)] = c(1.0, 0.0);
        j[(hi, lo)] = c(1.0, 0.0);
        dirac[(hi, lo)] = c(-w, 0.0);
        dirac[(lo, hi)] = c(w, 0.0);
        chi[(lo, lo)] = c(-1.0, 0.0);
        chi[(hi, hi)] = c(1.0, 0.0);
        real[(hi, lo)] = c(-1.0, 0.0);
        real[(lo, hi)] = c(1.0, 0.0);
    }
    SpectralSpacetime::new(
        KreinSpace::new(j)?,
        crate::canonical::vertex_algebra(g)?,
        dirac,
        AntilinearOperator::new(real),
        chi,
        Signature::Antilorentzian,
        2,
    )
}

/// The unit `ρ(e₀)`-type probe: `Γ_e^- = ρ(u)` on every edge.
pub fn constant_gammas(s: &SplitDiracStructure, u: &[f64]) -> Vec<Operator> {
    vec![s.rep.vector(u); s.graph.edge_count()]
}

#[cfg(test)]
mod tests;
