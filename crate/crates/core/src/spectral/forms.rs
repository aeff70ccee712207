use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{mismatch, AlgebraRep, Check, SpectralSpacetime, TimeOrientationForm};
use crate::clifford::Signature;
use crate::error::Result;
use crate::kreinlin::{beta_gram, krein_adjoint, star_beta_adjoint};
use crate::linalg::{
    self, commutator, fro, hermitian_eigen, is_hermitian, op_norm, real_null_space, relative,
    solve_in_span, Operator, Span, I, PREDICATE_TOL,
};

/// A basis of `Ω¹_D(𝒜, π)`, the span of all `π(a)[D, π(b)]`.
///
/// Membership is decided on the union of the supports of the generators, which keeps
/// the block-sparse forms of graph structures cheap.
#[derive(Debug, Clone)]
pub struct OneFormBasis {
    pub basis: Vec<Operator>,
    support: Vec<usize>,
    mask: Vec<bool>,
    span: Span,
}

impl OneFormBasis {
    fn build(generators: Vec<Operator>, tol: f64) -> Self {
        let len = generators.first().map_or(0, |g| g.len());
        let mut mask = vec![false; len];
        for g in &generators {
            for (k, z) in g.iter().enumerate() {
                if z.norm() > 0.0 {
                    mask[k] = true;
                }
            }
        }
        let support: Vec<usize> = (0..len).filter(|&k| mask[k]).collect();
        let mut span = Span::new(support.len(), 1);
        let mut basis = Vec::new();
        for g in generators {
            if span.dim() == support.len() {
                break;
            }
            if span.push(&compress(&g, &support), tol) {
                basis.push(g);
            }
        }
        OneFormBasis { basis, support, mask, span }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Frobenius distance from `op` to the span.
    pub fn distance(&self, op: &Operator) -> f64 {
        let inside = self.span.distance(&compress(op, &self.support));
        let outside: f64 = op
            .iter()
            .zip(&self.mask)
            .filter(|(_, inside)| !**inside)
            .map(|(z, _)| z.norm_sqr())
            .sum();
        (inside.powi(2) + outside).sqrt()
    }

    /// Distance relative to the spectral norm of `op` (zero for the zero operator).
    pub fn relative_distance(&self, op: &Operator) -> f64 {
        let d = self.distance(op);
        if d == 0.0 {
            0.0
        } else {
            d / op_norm(op).max(f64::MIN_POSITIVE)
        }
    }

    pub fn contains(&self, op: &Operator, tol: f64) -> bool {
        self.relative_distance(op) <= tol
    }

    /// Worst relative distance of `π(a)ω` and `ωπ(a)` to the span.
    pub fn bimodule_residual(&self, algebra: &AlgebraRep) -> f64 {
        let mut worst: f64 = 0.0;
        for a in algebra.basis() {
            for w in &self.basis {
                worst = worst.max(self.relative_distance(&(a * w)));
                worst = worst.max(self.relative_distance(&(w * a)));
            }
        }
        worst
    }
}

fn compress(op: &Operator, support: &[usize]) -> Operator {
    let s = op.as_slice();
    DMatrix::from_iterator(support.len(), 1, support.iter().map(|&k| s[k]))
}

/// `Ω¹_D` for the structure's own Dirac operator.
pub fn one_form_basis(s: &SpectralSpacetime) -> OneFormBasis {
    one_form_basis_with(&s.algebra, &s.dirac)
}

/// `Ω¹_D` for an arbitrary Dirac operator on the same algebra.
pub fn one_form_basis_with(algebra: &AlgebraRep, dirac: &Operator) -> OneFormBasis {
    let derivations: Vec<Operator> = algebra.basis().iter().map(|b| commutator(dirac, b)).collect();
    let mut generators = Vec::new();
    for a in algebra.basis() {
        for db in &derivations {
            generators.push(a * db);
        }
    }
    OneFormBasis::build(generators, PREDICATE_TOL)
}

/// Real basis of the 1-forms that are self-adjoint for the structure's product and
/// imaginary for its real structure (`JωJ⁻¹ = −ω`).
pub fn imaginary_selfadjoint_forms(s: &SpectralSpacetime) -> Result<Vec<Operator>> {
    let forms = one_form_basis(s);
    let m = forms.basis.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let d = s.dim();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(2 * m);
    for b in &forms.basis {
        for z in [Complex64::new(1.0, 0.0), I] {
            let w = b * z;
            let sa = krein_adjoint(&w, &s.space)? - &w;
            let im = s.real.conjugate(&w)? + &w;
            let mut col = Vec::with_capacity(4 * d * d);
            for x in sa.iter().chain(im.iter()) {
                col.push(x.re);
                col.push(x.im);
            }
            columns.push(col);
        }
    }
    let rows = columns[0].len();
    let a = DMatrix::from_fn(rows, 2 * m, |r, k| columns[k][r]);
    let kernel = real_null_space(&a, 1e-10);
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut out = linalg::zeros(d);
            for (k, b) in forms.basis.iter().enumerate() {
                out += b * Complex64::new(v[2 * k], v[2 * k + 1]);
            }
            out
        })
        .collect())
}

/// Outcome of [`verify_time_orientation`].
#[derive(Debug, Clone, Serialize)]
pub struct TimeOrientationReport {
    pub checks: Vec<Check>,
    /// Smallest eigenvalue of the Gram matrix of `⟨.,.⟩_β`, if it is hermitian.
    pub positivity_margin: Option<f64>,
    /// `β² = 1`.
    pub normalized: bool,
    pub passed: bool,
}

impl TimeOrientationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Gram matrix of `⟨.,.⟩_β`: `jβ⁻¹`, or `jβ⁻¹χ` for the Lorentzian signature.
pub(crate) fn orientation_gram(s: &SpectralSpacetime, beta: &Operator) -> Option<Operator> {
    let g = beta_gram(beta, &s.space).ok()?;
    Some(if s.signature == Signature::Lorentzian { g * &s.chi } else { g })
}

fn positivity(s: &SpectralSpacetime, beta: &Operator, tol: f64) -> (bool, Option<f64>) {
    let Some(g) = orientation_gram(s, beta) else {
        return (false, None);
    };
    if !is_hermitian(&g, tol) {
        return (false, None);
    }
    let (values, _) = hermitian_eigen(&g);
    let margin = values[0];
    (margin > tol * op_norm(&g).max(1.0), Some(margin))
}

/// Checks that `β` is a positive time-orientation 1-form: a Krein self-adjoint, imaginary
/// element of `Ω¹_D` whose associated product is positive definite. Also reports
/// normalization and, when a potential is supplied, `β = i[D, π(δ)]`.
pub fn verify_time_orientation(
    s: &SpectralSpacetime,
    form: &TimeOrientationForm,
    tol: Option<f64>,
) -> Result<TimeOrientationReport> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let beta = &form.beta;
    let mut checks = Vec::new();
    let forms = one_form_basis(s);
    checks.push(Check::at_most("one_form", forms.relative_distance(beta), tol));
    checks.push(Check::at_most("selfadjoint", mismatch(&krein_adjoint(beta, &s.space)?, beta), tol));
    match s.real.conjugate(beta) {
        Ok(jbj) => checks.push(Check::at_most("imaginary", mismatch(&jbj, &-beta), tol)),
        Err(_) => checks.push(Check::flag("imaginary", false, f64::INFINITY)),
    }
    let (positive, margin) = positivity(s, beta, tol);
    checks.push(Check::flag("positive", positive, margin.unwrap_or(f64::NAN)));
    if let Some(delta) = &form.potential {
        let exact = commutator(&s.dirac, &s.algebra.element(delta)) * I;
        checks.push(Check::at_most("potential", mismatch(&exact, beta), tol));
    }
    let id = linalg::identity(s.dim());
    let normalized = mismatch(&(beta * beta), &id) <= tol;
    let passed = checks.iter().all(|c| c.passed);
    Ok(TimeOrientationReport { checks, positivity_margin: margin, normalized, passed })
}

/// Solves `i[D, π(δ)] = β` for `δ` in the algebra; `None` when no solution exists.
pub fn is_exact(s: &SpectralSpacetime, beta: &Operator, tol: Option<f64>) -> Option<Vec<Complex64>> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let ops: Vec<Operator> = s.algebra.basis().iter().map(|b| commutator(&s.dirac, b) * I).collect();
    let (coeffs, residual) = solve_in_span(&ops, beta);
    (relative(residual, fro(beta)) <= tol).then_some(coeffs)
}

/// Outcome of [`check_reconstructibility`].
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructibilityReport {
    pub faithful: bool,
    /// Worst relative distance of `βπ(a)×β⁻¹` to `π(𝒜)` over basis elements.
    pub worst_residual: f64,
    pub reconstructible: bool,
}

/// Checks that `π` is faithful and that `π(𝒜)` is stable under `a ↦ βπ(a)×β⁻¹`.
pub fn check_reconstructibility(
    s: &SpectralSpacetime,
    form: &TimeOrientationForm,
    tol: Option<f64>,
) -> Result<ReconstructibilityReport> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let faithful = s.algebra.is_faithful();
    let mut worst: f64 = 0.0;
    for a in s.algebra.basis() {
        let image = star_beta_adjoint(a, &form.beta, &s.space)?;
        worst = worst.max(s.algebra.span().relative_distance(&image));
    }
    Ok(ReconstructibilityReport { faithful, worst_residual: worst, reconstructible: faithful && worst <= tol })
}

/// Outcome of [`order_conditions`].
#[derive(Debug, Clone, Serialize)]
pub struct OrderReport {
    /// Worst `‖[π(a), π°(b)]‖` relative to `‖π(a)‖‖π°(b)‖`.
    pub order_zero_residual: f64,
    /// Worst `‖[[D, π(a)], π°(b)]‖` relative to `‖[D,π(a)]‖‖π°(b)‖`.
    pub order_one_residual: f64,
    pub order_zero: bool,
    pub order_one: bool,
    /// Whether `π°(a) = π(a)` on every basis element.
    pub right_equals_left: bool,
    /// For each supplied form, worst relative `‖[β, π(a)]‖`.
    pub form_commutators: Vec<f64>,
}

/// The right representation `π°(a) = J π(a)× J⁻¹` on each basis element.
pub fn right_representation(s: &SpectralSpacetime) -> Result<Vec<Operator>> {
    s.algebra
        .basis()
        .iter()
        .map(|a| s.real.conjugate(&krein_adjoint(a, &s.space)?))
        .collect()
}

fn scaled_commutator(x: &Operator, y: &Operator) -> f64 {
    relative(fro(&commutator(x, y)), fro(x) * fro(y))
}

/// Order-zero and order-one conditions, and commutation of the supplied forms with `π(𝒜)`.
pub fn order_conditions(s: &SpectralSpacetime, forms: &[Operator], tol: Option<f64>) -> Result<OrderReport> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let right = right_representation(s)?;
    let mut zero: f64 = 0.0;
    let mut one: f64 = 0.0;
    let mut same = true;
    for a in s.algebra.basis() {
        let da = commutator(&s.dirac, a);
        for b in &right {
            zero = zero.max(scaled_commutator(a, b));
            one = one.max(scaled_commutator(&da, b));
        }
    }
    for (a, b) in s.algebra.basis().iter().zip(&right) {
        same &= mismatch(b, a) <= tol;
    }
    let form_commutators = forms
        .iter()
        .map(|beta| s.algebra.basis().iter().map(|a| scaled_commutator(beta, a)).fold(0.0, f64::max))
        .collect();
    Ok(OrderReport {
        order_zero_residual: zero,
        order_one_residual: one,
        order_zero: zero <= tol,
        order_one: one <= tol,
        right_equals_left: same,
        form_commutators,
    })
}

/// Whether `π(𝒜)` is closed under the Krein adjoint.
#[derive(Debug, Clone, Serialize)]
pub struct StarClosure {
    pub closed: bool,
    pub worst_residual: f64,
    /// Index of the basis element whose adjoint is furthest from the algebra.
    pub witness: Option<usize>,
}

pub fn is_krein_star_closed(s: &SpectralSpacetime, tol: Option<f64>) -> Result<StarClosure> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let mut worst: f64 = 0.0;
    let mut witness = None;
    for (k, a) in s.algebra.basis().iter().enumerate() {
        let r = s.algebra.span().relative_distance(&krein_adjoint(a, &s.space)?);
        if r > worst {
            worst = r;
            witness = Some(k);
        }
    }
    let closed = worst <= tol;
    Ok(StarClosure { closed, worst_residual: worst, witness: if closed { None } else { witness } })
}

/// Relative size of `π(δ)^{*β} − π(δ)×`; the two can never agree for an exact positive form.
pub fn star_beta_mismatch(s: &SpectralSpacetime, beta: &Operator, delta: &[Complex64]) -> Result<f64> {
    let p = s.algebra.element(delta);
    let star = star_beta_adjoint(&p, beta, &s.space)?;
    let cross = krein_adjoint(&p, &s.space)?;
    Ok(fro(&(star - &cross)) / fro(&cross).max(f64::MIN_POSITIVE))
}
