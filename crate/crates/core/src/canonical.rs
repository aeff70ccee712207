//! The canonical spectral triple of a weighted graph and the canonical antilorentzian
//! spacetime of an oriented weighted graph, both acting on functions on the split graph.
//!
//! Basis order is `(e,−), (e,+)` for each edge `e` in turn, `e⁻` being the source.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::clifford::Signature;
use crate::error::{Error, Result};
use crate::graphs::{rational_to_f64, Acyclicity, Distance, WeightedDigraph};
use crate::kreinlin::{AntilinearOperator, KreinSpace};
use crate::linalg::{c, commutator, fro, op_norm, relative, zeros, Operator, I, PREDICATE_TOL};
use crate::spectral::{
    mismatch, verify_time_orientation, AlgebraRep, SpectralSpacetime, SpectralTriple, TimeOrientationForm,
};
use crate::wick::{to_antilorentzian, WickCertificate, WickError};

/// Canonical triple of a weighted graph; edge directions only fix the labels `e±`.
#[derive(Debug, Clone)]
pub struct CanonicalTriple {
    pub graph: WeightedDigraph,
    pub phases: Vec<f64>,
    pub triple: SpectralTriple,
}

/// Canonical antilorentzian spacetime of an oriented weighted graph, with its form `ω`.
#[derive(Debug, Clone)]
pub struct CanonicalSpacetime {
    pub graph: WeightedDigraph,
    pub phases: Vec<f64>,
    pub spacetime: SpectralSpacetime,
    pub omega: Operator,
}

fn phases_for(g: &WeightedDigraph, theta: Option<&[f64]>, default: f64) -> Result<Vec<f64>> {
    match theta {
        Some(t) if t.len() != g.edge_count() => {
            Err(Error::DimensionMismatch { expected: g.edge_count(), found: t.len() })
        }
        Some(t) => Ok(t.to_vec()),
        None => Ok(g.edges().iter().map(|e| e.phase.unwrap_or(default)).collect()),
    }
}

fn require_edges(g: &WeightedDigraph) -> Result<()> {
    if g.edge_count() == 0 {
        return Err(Error::InvalidInput("the graph has no edges, the split graph is empty".into()));
    }
    Ok(())
}

/// `π(a)` for a function `a` on the vertices.
pub fn function_operator(g: &WeightedDigraph, a: &[Complex64]) -> Operator {
    let mut out = zeros(2 * g.edge_count());
    for (k, e) in g.edges().iter().enumerate() {
        out[(2 * k, 2 * k)] = a[e.src];
        out[(2 * k + 1, 2 * k + 1)] = a[e.dst];
    }
    out
}

/// The algebra of functions on the vertices, one indicator per vertex.
pub fn vertex_algebra(g: &WeightedDigraph) -> Result<AlgebraRep> {
    require_edges(g)?;
    let n = g.vertex_count();
    let basis = (0..n)
        .map(|v| {
            let mut a = vec![c(0.0, 0.0); n];
            a[v] = c(1.0, 0.0);
            function_operator(g, &a)
        })
        .collect();
    AlgebraRep::assume_closed(basis, g.vertices().to_vec())
}

fn triple_blocks(g: &WeightedDigraph, phases: &[f64]) -> (Operator, Operator, Operator) {
    let d = 2 * g.edge_count();
    let (mut dirac, mut chi, mut real) = (zeros(d), zeros(d), zeros(d));
    for (k, p) in phases.iter().enumerate() {
        let w = 1.0 / g.weight(k);
        let z = Complex64::from_polar(1.0, *p);
        let (m, q) = (2 * k, 2 * k + 1);
        dirac[(m, q)] = z * w;
        dirac[(q, m)] = z.conj() * w;
        chi[(m, m)] = c(-1.0, 0.0);
        chi[(q, q)] = c(1.0, 0.0);
        real[(m, m)] = z;
        real[(q, q)] = z.conj();
    }
    (dirac, chi, real)
}

/// The canonical triple: `D` is `(1/δ)[[0,e^{iθ}],[e^{−iθ},0]]` on each edge block,
/// `χ = diag(−1,1)`, `J = diag(e^{iθ}, e^{−iθ})∘c.c.`; KO dimension 0.
/// Phases come from `theta`, else from the edges, else default to 0.
pub fn build_canonical_triple(g: &WeightedDigraph, theta: Option<&[f64]>) -> Result<CanonicalTriple> {
    let phases = phases_for(g, theta, 0.0)?;
    let algebra = vertex_algebra(g)?;
    let (dirac, chi, real) = triple_blocks(g, &phases);
    let d = dirac.nrows();
    let triple = SpectralTriple::new(KreinSpace::hilbert(d), algebra, dirac, AntilinearOperator::new(real), chi, 0)?;
    Ok(CanonicalTriple { graph: g.clone(), phases, triple })
}

/// `⊕_e σ_e [[0, i e^{iθ_e}], [−i e^{−iθ_e}, 0]]`.
pub fn distinguished_form(phases: &[f64], sigma: &[i8]) -> Operator {
    let mut out = zeros(2 * phases.len());
    for (k, p) in phases.iter().enumerate() {
        let s = f64::from(sigma.get(k).copied().unwrap_or(1));
        let z = Complex64::from_polar(s, *p);
        out[(2 * k, 2 * k + 1)] = I * z;
        out[(2 * k + 1, 2 * k)] = -I * z.conj();
    }
    out
}

fn sign_vector(g: &WeightedDigraph, sigma: Option<&[i8]>) -> Result<Vec<i8>> {
    match sigma {
        None => Ok(vec![1; g.edge_count()]),
        Some(s) if s.len() != g.edge_count() => Err(Error::DimensionMismatch { expected: g.edge_count(), found: s.len() }),
        Some(s) if s.iter().any(|x| *x != 1 && *x != -1) => Err(Error::InvalidInput("signs must be ±1".into())),
        Some(s) => Ok(s.to_vec()),
    }
}

impl CanonicalTriple {
    pub fn dirac(&self) -> &Operator {
        &self.triple.dirac
    }

    /// The distinguished 1-form with signs `σ` (all `+1` by default).
    pub fn distinguished_form(&self, sigma: Option<&[i8]>) -> Result<Operator> {
        Ok(distinguished_form(&self.phases, &sign_vector(&self.graph, sigma)?))
    }

    /// Wick rotation along the distinguished form; the resulting orientation is the
    /// graph's with the edges of sign `−1` reversed.
    pub fn wick_rotate(&self, sigma: Option<&[i8]>) -> std::result::Result<(SpectralSpacetime, WickCertificate), WickError> {
        let omega = self.distinguished_form(sigma)?;
        to_antilorentzian(&self.triple, &omega, None)
    }

    /// The graph oriented by the signs `σ`.
    pub fn oriented_graph(&self, sigma: Option<&[i8]>) -> Result<WeightedDigraph> {
        let s = sign_vector(&self.graph, sigma)?;
        let flips: Vec<usize> = (0..s.len()).filter(|&k| s[k] < 0).collect();
        Ok(self.graph.with_reversed(&flips))
    }

    /// `sup_e |a(e⁺) − a(e⁻)| / δ_e`, the closed form of `‖[D, π(a)]‖`.
    pub fn lipschitz_constant(&self, a: &[Complex64]) -> f64 {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| (a[e.dst] - a[e.src]).norm() / self.graph.weight(k))
            .fold(0.0, f64::max)
    }
}

/// Connes' distance `sup{|a(i) − a(j)| : ‖[D,π(a)]‖ ≤ 1}` over real functions `a`.
///
/// The constraint `‖[D,π(a)]‖ ≤ 1` is the difference system `|a(e⁺) − a(e⁻)| ≤ δ_e`,
/// whose optimum is a shortest path value in the bidirected constraint graph; it is
/// computed exactly by Bellman-Ford.
pub fn connes_distance(t: &CanonicalTriple, i: usize, j: usize) -> Result<Distance> {
    let g = &t.graph;
    let n = g.vertex_count();
    for v in [i, j] {
        if v >= n {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let mut bound: Vec<Option<BigRational>> = vec![None; n];
    bound[i] = Some(BigRational::zero());
    for _ in 0..n {
        let mut changed = false;
        for e in g.edges() {
            for (u, v) in [(e.src, e.dst), (e.dst, e.src)] {
                if let Some(bu) = bound[u].clone() {
                    let cand = bu + &e.weight;
                    if bound[v].as_ref().is_none_or(|bv| cand < *bv) {
                        bound[v] = Some(cand);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(bound[j].clone().map_or(Distance::Infinite, Distance::Finite))
}

/// Canonical spacetime of an oriented weighted graph: the Wick rotation of the canonical
/// triple along the distinguished form with all signs `+1`, written out directly.
/// `(.,.) = ⟨., ω .⟩`, `D = −iD_triple`, `J = ωJ_triple`, `χ = −χ_triple`, KO dimension 2.
/// Phases come from `theta`, else from the edges, else default to `−π/2`.
pub fn build_canonical_spacetime(g: &WeightedDigraph, theta: Option<&[f64]>) -> Result<CanonicalSpacetime> {
    let phases = phases_for(g, theta, -FRAC_PI_2)?;
    let algebra = vertex_algebra(g)?;
    let (dirac_t, chi_t, real_t) = triple_blocks(g, &phases);
    let omega = distinguished_form(&phases, &vec![1; phases.len()]);
    let spacetime = SpectralSpacetime::new(
        KreinSpace::new(omega.clone())?,
        algebra,
        dirac_t * c(0.0, -1.0),
        AntilinearOperator::new(&omega * real_t),
        -chi_t,
        Signature::Antilorentzian,
        2,
    )?;
    Ok(CanonicalSpacetime { graph: g.clone(), phases, spacetime, omega })
}

/// Outcome of [`morera_exactness`].
#[derive(Debug, Clone, Serialize)]
pub struct MoreraReport {
    pub exact: bool,
    /// Integral over each fundamental cycle, with the cycle's vertex path.
    pub cycle_integrals: Vec<(Vec<usize>, f64)>,
    /// Potential obtained by integrating along a spanning forest, zero at each root.
    pub potential: Option<Vec<f64>>,
    /// `‖β − i[D, π(i f)]‖`, relative.
    pub potential_residual: Option<f64>,
}

/// Verdict of [`stable_causality_canonical`].
#[derive(Debug, Clone)]
pub enum CanonicalCausality {
    StablyCausal { potential: Vec<f64>, beta: Operator },
    NotStablyCausal { cycle: Vec<usize> },
}

impl CanonicalSpacetime {
    pub fn dim(&self) -> usize {
        self.spacetime.dim()
    }

    /// `⊕_e x_e ω_e`, positive iff every `x_e > 0`.
    pub fn orientation_form(&self, x: &[f64]) -> Operator {
        let mut out = self.omega.clone();
        for (k, xe) in x.iter().enumerate() {
            for (r, q) in [(2 * k, 2 * k + 1), (2 * k + 1, 2 * k)] {
                out[(r, q)] *= c(*xe, 0.0);
            }
        }
        out
    }

    /// `i[D, π(i f)] = ⊕_e (Δf_e/δ_e) ω_e`, the exact form of a real potential.
    pub fn exact_form(&self, f: &[f64]) -> Operator {
        let p: Vec<Complex64> = f.iter().map(|x| c(0.0, *x)).collect();
        commutator(&self.spacetime.dirac, &function_operator(&self.graph, &p)) * I
    }

    /// Coefficients `x_e` of `β = ⊕ x_e ω_e`; errors when `β` lies outside this family.
    pub fn edge_coefficients(&self, beta: &Operator) -> Result<Vec<f64>> {
        if beta.shape() != self.omega.shape() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: beta.nrows() });
        }
        let x: Vec<f64> = (0..self.graph.edge_count())
            .map(|k| (beta[(2 * k, 2 * k + 1)] / self.omega[(2 * k, 2 * k + 1)]).re)
            .collect();
        let rebuilt = self.orientation_form(&x);
        let r = relative(fro(&(beta - rebuilt)), op_norm(beta));
        if r > PREDICATE_TOL {
            return Err(Error::InvalidInput(format!(
                "form is not a real combination of the edge forms (residual {r:.3e})"
            )));
        }
        Ok(x)
    }

    /// `∫_P β = Σ ε_{i,i+1} x_e δ_e`, with `ε = +1` along the graph orientation.
    pub fn path_integral(&self, beta: &Operator, path: &[usize]) -> Result<f64> {
        let x = self.edge_coefficients(beta)?;
        self.integrate(&x, path)
    }

    fn integrate(&self, x: &[f64], path: &[usize]) -> Result<f64> {
        Ok(self
            .graph
            .path_edges(path)?
            .into_iter()
            .map(|(e, s)| f64::from(s) * x[e] * self.graph.weight(e))
            .sum())
    }

    /// Exact iff every fundamental cycle integral vanishes; then the potential is
    /// rebuilt along a spanning forest and `β = i[D, π(i f)]` is cross-checked.
    pub fn morera_exactness(&self, beta: &Operator, tol: Option<f64>) -> Result<MoreraReport> {
        let tol = tol.unwrap_or(1e-10);
        let x = self.edge_coefficients(beta)?;
        let scale: f64 = x.iter().zip(0..).map(|(xe, k)| (xe * self.graph.weight(k)).abs()).fold(1.0, f64::max);
        let mut cycle_integrals = Vec::new();
        let mut exact = true;
        for cyc in self.graph.fundamental_cycles() {
            let value = self.integrate(&x, &cyc.vertices)?;
            exact &= value.abs() <= tol * scale;
            cycle_integrals.push((cyc.vertices, value));
        }
        if !exact {
            return Ok(MoreraReport { exact, cycle_integrals, potential: None, potential_residual: None });
        }
        let potential = (0..self.graph.vertex_count())
            .map(|v| self.integrate(&x, &self.graph.tree_path_from_root(v)))
            .collect::<Result<Vec<f64>>>()?;
        let residual = mismatch(&self.exact_form(&potential), beta);
        Ok(MoreraReport {
            exact: residual <= tol.max(PREDICATE_TOL),
            cycle_integrals,
            potential: Some(potential),
            potential_residual: Some(residual),
        })
    }
}

/// Stably causal iff the orientation is acyclic. The acyclic case returns the
/// topological rank as time function with its exact positive form; the cyclic case
/// returns a directed cycle, on which every positive form integrates to a positive
/// number and so cannot be exact.
pub fn stable_causality_canonical(s: &CanonicalSpacetime) -> Result<CanonicalCausality> {
    match s.graph.acyclicity_witness() {
        Acyclicity::Acyclic(order) => {
            let mut f = vec![0.0; s.graph.vertex_count()];
            for (rank, v) in order.iter().enumerate() {
                f[*v] = rank as f64;
            }
            let beta = s.exact_form(&f);
            let delta: Vec<Complex64> = f.iter().map(|x| c(0.0, *x)).collect();
            let report = verify_time_orientation(&s.spacetime, &TimeOrientationForm::exact(beta.clone(), delta), None)?;
            if !report.passed {
                return Err(Error::HypothesisViolated(format!(
                    "time function failed verification: {}",
                    report.failures().join(", ")
                )));
            }
            Ok(CanonicalCausality::StablyCausal { potential: f, beta })
        }
        Acyclicity::Cyclic(cycle) => Ok(CanonicalCausality::NotStablyCausal { cycle }),
    }
}

/// Distance as a float for reporting.
pub fn distance_value(d: &Distance) -> f64 {
    match d {
        Distance::Finite(r) => rational_to_f64(r),
        Distance::Infinite => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::parse_rational;
    use crate::linalg::{from_real_rows, from_rows, identity};
    use crate::spectral::{
        build_c2_spacetime, check_reconstructibility, is_krein_star_closed, order_conditions,
        unitary_equivalence_check, verify_axioms,
    };
    use crate::wick::to_euclidean;
    use proptest::prelude::*;

    fn single(w: &str) -> WeightedDigraph {
        WeightedDigraph::from_labels(&["1", "2"], &[("1", "2", w)]).unwrap()
    }

    fn fig1() -> WeightedDigraph {
        WeightedDigraph::from_labels(
            &["1", "2", "3", "4"],
            &[("1", "2", "1"), ("2", "3", "2"), ("3", "4", "1/2"), ("4", "1", "3"), ("1", "3", "5/4")],
        )
        .unwrap()
    }

    #[test]
    fn triple_examples() {
        let t = build_canonical_triple(&single("2"), None).unwrap();
        let report = verify_axioms(&t.triple, None).unwrap();
        assert!(report.passed, "{:?}", report.failures());
        assert!(fro(&(t.dirac() - from_real_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]))) < 1e-15);
        let t = build_canonical_triple(&fig1(), Some(&[0.1, 0.2, -0.4, 1.0, 2.0])).unwrap();
        assert_eq!(t.triple.dim(), 10);
        assert!(verify_axioms(&t.triple, None).unwrap().passed);
        let constant = function_operator(&t.graph, &[c(3.0, 1.0); 4]);
        assert!(fro(&commutator(t.dirac(), &constant)) < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let t = build_canonical_triple(&single("7/3"), None).unwrap();
        assert_eq!(connes_distance(&t, 0, 1).unwrap(), Distance::Finite(parse_rational("7/3").unwrap()));
        let tri = WeightedDigraph::from_labels(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "1"), ("a", "c", "3")]).unwrap();
        let t = build_canonical_triple(&tri, None).unwrap();
        assert_eq!(connes_distance(&t, 0, 2).unwrap(), Distance::Finite(parse_rational("2").unwrap()));
        assert!(connes_distance(&t, 0, 9).is_err());
    }

    #[test]
    fn spacetime_of_any_graph_verifies_with_its_form() {
        for g in [single("1"), fig1()] {
            let s = build_canonical_spacetime(&g, None).unwrap();
            let report = verify_axioms(&s.spacetime, None).unwrap();
            assert!(report.passed, "{:?}", report.failures());
            let f = TimeOrientationForm::new(s.omega.clone());
            assert!(verify_time_orientation(&s.spacetime, &f, None).unwrap().passed);
            assert!(check_reconstructibility(&s.spacetime, &f, None).unwrap().reconstructible);
            // A single edge carries all of ℂ², closed under ×; larger graphs are not.
            assert_eq!(is_krein_star_closed(&s.spacetime, None).unwrap().closed, g.edge_count() == 1);
        }
    }

    #[test]
    fn spacetime_is_the_wick_image_of_the_triple() {
        let g = fig1();
        let t = build_canonical_triple(&g, Some(&[0.3, -1.0, 0.0, 2.0, 0.5])).unwrap();
        let (rot, cert) = t.wick_rotate(None).unwrap();
        assert!(cert.valid());
        let s = build_canonical_spacetime(&g, Some(&t.phases)).unwrap();
        assert!(fro(&(&rot.dirac - &s.spacetime.dirac)) < 1e-12);
        assert!(fro(&(rot.space.j() - s.spacetime.space.j())) < 1e-12);
        assert!(fro(&(rot.real.matrix() - s.spacetime.real.matrix())) < 1e-12);
        assert!(fro(&(&rot.chi - &s.spacetime.chi)) < 1e-12);
        let (back, _) = to_euclidean(&s.spacetime, &TimeOrientationForm::new(s.omega.clone()), None).unwrap();
        assert!(fro(&(&back.dirac - t.dirac())) < 1e-12);
        assert!(fro(&(back.real.matrix() - t.triple.real.matrix())) < 1e-12);
    }

    #[test]
    fn single_edge_matches_the_two_point_spacetime() {
        let delta = 2.0;
        let s = build_canonical_spacetime(&single("2"), None).unwrap();
        let target = build_c2_spacetime(1.0 / delta, -FRAC_PI_2, 1.0).unwrap();
        let u = from_rows(&[vec![c(0.0, 0.0), I], vec![c(-1.0, 0.0), c(0.0, 0.0)]]);
        let report = unitary_equivalence_check(
            &s.spacetime,
            &target,
            &u,
            &[TimeOrientationForm::new(s.omega.clone())],
            None,
        )
        .unwrap();
        assert!(report.passed, "{:?}", report.violated());
        // Literally equal to the θ = 0 member up to the sign of χ and the phase of J.
        let c2 = build_c2_spacetime(-1.0 / delta, 0.0, 1.0).unwrap();
        assert!(fro(&(s.spacetime.space.j() - c2.space.j())) < 1e-15);
        assert!(fro(&(&s.spacetime.dirac - &c2.dirac)) < 1e-15);
        assert!(fro(&(&s.spacetime.chi + &c2.chi)) < 1e-15);
        assert!(fro(&(s.spacetime.real.matrix() - c2.real.matrix() * c(0.0, -1.0))) < 1e-15);
    }

    #[test]
    fn phases_are_unitarily_irrelevant() {
        let g = fig1();
        let a = [0.0, 0.4, -1.2, 2.0, 0.7];
        let b = [1.0, -0.3, 0.2, 0.0, -2.5];
        let sa = build_canonical_spacetime(&g, Some(&a)).unwrap();
        let sb = build_canonical_spacetime(&g, Some(&b)).unwrap();
        let mut u = identity(10);
        for k in 0..5 {
            let phi = b[k] - a[k];
            u[(2 * k, 2 * k)] = Complex64::from_polar(1.0, phi / 2.0);
            u[(2 * k + 1, 2 * k + 1)] = Complex64::from_polar(1.0, -phi / 2.0);
        }
        let forms = [TimeOrientationForm::new(sa.omega.clone())];
        assert!(unitary_equivalence_check(&sa.spacetime, &sb.spacetime, &u, &forms, None).unwrap().passed);
    }

    #[test]
    fn reversing_one_edge_is_a_relabeling_up_to_grading() {
        let g = fig1();
        let theta = [0.3, -1.0, 0.8, 2.0, 0.5];
        let t = build_canonical_triple(&g, Some(&theta)).unwrap();
        let sigma = [1, 1, -1, 1, 1];
        let (rotated, _) = t.wick_rotate(Some(&sigma)).unwrap();
        let r = build_canonical_spacetime(&t.oriented_graph(Some(&sigma)).unwrap(), Some(&theta)).unwrap();
        let mut u = identity(10);
        let p = Complex64::from_polar(1.0, theta[2]);
        u[(4, 4)] = c(0.0, 0.0);
        u[(5, 5)] = c(0.0, 0.0);
        u[(4, 5)] = p;
        u[(5, 4)] = p.conj();
        let omega = t.distinguished_form(Some(&sigma)).unwrap();
        let report =
            unitary_equivalence_check(&rotated, &r.spacetime, &u, &[TimeOrientationForm::new(omega)], None).unwrap();
        // χ is tied to the labels e±, so relabeling flips it on the reversed block.
        assert_eq!(report.violated(), vec!["chi"]);
        let mut twisted = r.spacetime.chi.clone();
        twisted[(4, 4)] = -twisted[(4, 4)];
        twisted[(5, 5)] = -twisted[(5, 5)];
        assert!(fro(&(&u * &rotated.chi * u.adjoint() - twisted)) < 1e-12);
        // Without the relabeling the two orientations are told apart by the Krein form.
        let s = build_canonical_spacetime(&g, Some(&theta)).unwrap();
        let report = unitary_equivalence_check(&s.spacetime, &r.spacetime, &u, &[], None).unwrap();
        assert!(report.violated().contains(&"krein_unitary"));
    }

    #[test]
    fn figure_two_integrals_and_causality() {
        let right = WeightedDigraph::from_labels(
            &["1", "2", "3", "4"],
            &[("1", "2", "1"), ("2", "4", "1"), ("3", "4", "1"), ("1", "4", "1"), ("1", "3", "1")],
        )
        .unwrap();
        let s = build_canonical_spacetime(&right, None).unwrap();
        let cycle = [0, 3, 2, 0];
        assert!((s.path_integral(&s.omega, &cycle).unwrap() + 1.0).abs() < 1e-12);
        assert!(!s.morera_exactness(&s.omega, None).unwrap().exact);
        match stable_causality_canonical(&s).unwrap() {
            CanonicalCausality::StablyCausal { potential, .. } => assert_eq!(potential, vec![0.0, 1.0, 2.0, 3.0]),
            other => panic!("{other:?}"),
        }
        let left = WeightedDigraph::from_labels(
            &["1", "2", "3", "4"],
            &[("1", "2", "1"), ("2", "4", "1"), ("4", "3", "1"), ("3", "1", "1"), ("1", "4", "1")],
        )
        .unwrap();
        let s = build_canonical_spacetime(&left, None).unwrap();
        match stable_causality_canonical(&s).unwrap() {
            CanonicalCausality::NotStablyCausal { cycle } => assert_eq!(cycle, vec![0, 3, 2, 0]),
            other => panic!("{other:?}"),
        }
        assert_eq!(s.path_integral(&s.omega, &[1]).unwrap(), 0.0);
        assert!(s.path_integral(&s.omega, &[0, 2, 1]).is_err());
    }

    #[test]
    fn order_one_fails_and_potential_is_not_star_compatible() {
        let g = WeightedDigraph::from_labels(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "2")]).unwrap();
        let s = build_canonical_spacetime(&g, None).unwrap();
        let CanonicalCausality::StablyCausal { potential, beta } = stable_causality_canonical(&s).unwrap() else {
            panic!("path graphs are acyclic");
        };
        let report = order_conditions(&s.spacetime, std::slice::from_ref(&beta), None).unwrap();
        assert!(!report.order_one && report.order_one_residual > 1e-6);
        let delta: Vec<Complex64> = potential.iter().map(|x| c(0.0, *x)).collect();
        assert!(crate::spectral::star_beta_mismatch(&s.spacetime, &beta, &delta).unwrap() > 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn commutator_norm_is_the_lipschitz_constant(
            seed in any::<u64>(),
            values in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 8),
        ) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = crate::generate::random_connected_graph(&mut rng, 6, 4);
            let t = build_canonical_triple(&g, None).unwrap();
            let a: Vec<Complex64> = values.iter().take(g.vertex_count()).map(|(x, y)| c(*x, *y)).collect();
            let norm = op_norm(&commutator(t.dirac(), &function_operator(&g, &a)));
            prop_assert!((norm - t.lipschitz_constant(&a)).abs() < 1e-10 * norm.max(1.0));
        }

        #[test]
        fn krein_closure_happens_exactly_for_matchings(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = crate::generate::random_graph(&mut rng, 6, 6);
            prop_assume!(g.edge_count() > 0);
            let s = build_canonical_spacetime(&g, None).unwrap();
            let closure = is_krein_star_closed(&s.spacetime, None).unwrap();
            let matching = g.degrees().iter().all(|d| *d <= 1);
            prop_assert_eq!(closure.closed, matching);
            if !matching {
                prop_assert!(closure.worst_residual > 1e-6);
            }
        }

        #[test]
        fn positive_forms_are_those_with_positive_coefficients(
            x in proptest::collection::vec(prop_oneof![-3.0..-0.1f64, 0.1..3.0f64], 5),
        ) {
            let s = build_canonical_spacetime(&fig1(), None).unwrap();
            let beta = s.orientation_form(&x);
            let report = verify_time_orientation(&s.spacetime, &TimeOrientationForm::new(beta), None).unwrap();
            prop_assert_eq!(report.passed, x.iter().all(|v| *v > 0.0));
        }

        #[test]
        fn exact_forms_recover_their_potential(f in proptest::collection::vec(-4.0..4.0f64, 4)) {
            let s = build_canonical_spacetime(&fig1(), None).unwrap();
            let beta = s.exact_form(&f);
            let report = s.morera_exactness(&beta, None).unwrap();
            prop_assert!(report.exact);
            let p = report.potential.unwrap();
            for v in 0..4 {
                prop_assert!(((p[v] - p[0]) - (f[v] - f[0])).abs() < 1e-10);
            }
            let delta = crate::spectral::is_exact(&s.spacetime, &beta, None);
            prop_assert!(delta.is_some());
        }
    }
}
