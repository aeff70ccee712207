//! Linear algebra over finite Krein spaces.
//!
//! A Krein space here is `ℂⁿ` with the hermitian form `(x, y) = ⟨x, j y⟩` for an
//! invertible hermitian matrix `j`. Antilinear maps `x ↦ m·conj(x)` get their own type
//! so that composition rules can never be confused with linear ones.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, commutator, fro, hermitian_eigen, identity, inverse, is_hermitian, op_norm, relative,
    Operator, PREDICATE_TOL,
};

/// `ℂⁿ` equipped with the form `(x, y) = ⟨x, j y⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinSpace {
    j: Operator,
    j_inv: Operator,
}

impl KreinSpace {
    /// Validates that `j` is square, hermitian and invertible.
    pub fn new(j: Operator) -> Result<Self> {
        if j.nrows() != j.ncols() {
            return Err(Error::DimensionMismatch { expected: j.nrows(), found: j.ncols() });
        }
        if !is_hermitian(&j, PREDICATE_TOL) {
            return Err(Error::InvalidInput("Krein form j is not hermitian".into()));
        }
        let j_inv = inverse(&j).ok_or_else(|| Error::Singular("Krein form j".into()))?;
        Ok(KreinSpace { j, j_inv })
    }

    /// The Hilbert space case `j = 1`.
    pub fn hilbert(n: usize) -> Self {
        KreinSpace { j: identity(n), j_inv: identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn j(&self) -> &Operator {
        &self.j
    }

    pub fn j_inv(&self) -> &Operator {
        &self.j_inv
    }

    /// `(x, y) = x† j y`.
    pub fn product(&self, x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
        (x.adjoint() * &self.j * y)[(0, 0)]
    }

    /// True when the form itself is positive definite (a Hilbert space in disguise).
    pub fn is_positive_definite(&self) -> bool {
        linalg::min_eigenvalue(&self.j) > PREDICATE_TOL * op_norm(&self.j).max(1.0)
    }

    fn check(&self, a: &Operator) -> Result<()> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.nrows() });
        }
        Ok(())
    }
}

/// Antilinear operator `x ↦ m·conj(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    m: Operator,
}

impl AntilinearOperator {
    pub fn new(m: Operator) -> Self {
        AntilinearOperator { m }
    }

    /// Plain complex conjugation on `ℂⁿ`.
    pub fn conjugation(n: usize) -> Self {
        AntilinearOperator { m: identity(n) }
    }

    pub fn matrix(&self) -> &Operator {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        &self.m * x.map(|z| z.conj())
    }

    /// `self ∘ other` for two antilinear maps, which is linear with matrix `m₁·conj(m₂)`.
    pub fn compose(&self, other: &AntilinearOperator) -> Operator {
        &self.m * other.m.map(|z| z.conj())
    }

    /// `self ∘ self`.
    pub fn square(&self) -> Operator {
        self.compose(self)
    }

    /// `a ∘ self` for linear `a`.
    pub fn after_linear(&self, a: &Operator) -> AntilinearOperator {
        AntilinearOperator { m: a * &self.m }
    }

    /// `self ∘ a` for linear `a`.
    pub fn before_linear(&self, a: &Operator) -> AntilinearOperator {
        AntilinearOperator { m: &self.m * a.map(|z| z.conj()) }
    }

    /// Inverse map, with matrix `conj(m⁻¹)`.
    pub fn inverse(&self) -> Option<AntilinearOperator> {
        inverse(&self.m).map(|mi| AntilinearOperator { m: mi.map(|z| z.conj()) })
    }

    /// `J a J⁻¹ = m·conj(a)·m⁻¹`, a linear operator.
    pub fn conjugate(&self, a: &Operator) -> Result<Operator> {
        let mi = inverse(&self.m).ok_or_else(|| Error::Singular("antilinear operator".into()))?;
        Ok(&self.m * a.map(|z| z.conj()) * mi)
    }

    pub fn scaled(&self, z: Complex64) -> AntilinearOperator {
        AntilinearOperator { m: &self.m * z }
    }
}

/// Krein adjoint `A× = j⁻¹ A† j`.
pub fn krein_adjoint(a: &Operator, k: &KreinSpace) -> Result<Operator> {
    k.check(a)?;
    Ok(&k.j_inv * a.adjoint() * &k.j)
}

/// Krein adjoint of an antilinear map, defined by `(Jx, y) = conj((x, J×y))`.
/// Its matrix is `j⁻¹ mᵀ conj(j)`.
pub fn antilinear_adjoint(op: &AntilinearOperator, k: &KreinSpace) -> Result<AntilinearOperator> {
    k.check(&op.m)?;
    Ok(AntilinearOperator { m: &k.j_inv * op.m.transpose() * k.j.map(|z| z.conj()) })
}

/// Smallest eigenvalue of `j·B` when it is hermitian, `None` otherwise.
pub fn krein_positivity_margin(b: &Operator, k: &KreinSpace, tol: Option<f64>) -> Option<f64> {
    if k.check(b).is_err() {
        return None;
    }
    let jb = &k.j * b;
    if !is_hermitian(&jb, tol.unwrap_or(PREDICATE_TOL)) {
        return None;
    }
    let (values, _) = hermitian_eigen(&jb);
    values.first().copied()
}

/// True iff `(., B .)` is positive definite, i.e. `j·B` hermitian with positive spectrum.
pub fn is_krein_positive(b: &Operator, k: &KreinSpace, tol: Option<f64>) -> bool {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    match krein_positivity_margin(b, k, Some(tol)) {
        Some(m) => m > tol * op_norm(&(&k.j * b)).max(1.0),
        None => false,
    }
}

/// The β-twisted adjoint `A^{*β} = β A× β⁻¹`.
pub fn star_beta_adjoint(a: &Operator, beta: &Operator, k: &KreinSpace) -> Result<Operator> {
    k.check(beta)?;
    let bi = inverse(beta).ok_or_else(|| Error::Singular("β".into()))?;
    Ok(beta * krein_adjoint(a, k)? * bi)
}

/// Gram matrix `j β⁻¹` of the product `⟨x, y⟩_β = (x, β⁻¹ y)`.
pub fn beta_gram(beta: &Operator, k: &KreinSpace) -> Result<Operator> {
    k.check(beta)?;
    let bi = inverse(beta).ok_or_else(|| Error::Singular("β".into()))?;
    Ok(&k.j * bi)
}

/// Outcome of checking the nilpotency lemma on a pair satisfying `[[A,B],A] = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobsonReport {
    /// `‖[A,B]^n‖` relative to `‖[A,B]‖^n`, with `n` the dimension.
    pub power_residual: f64,
    /// Largest `|tr(C^k)|`, `k = 1..n`, for the normalised commutator `C`.
    pub max_trace: f64,
    pub nilpotent: bool,
}

/// Checks that `[A,B]` is nilpotent when `[[A,B],A] = 0`, reporting the trace identities
/// `tr([A,B]^k) = 0` that drive the argument.
pub fn jacobson_nilpotency(a: &Operator, b: &Operator, tol: Option<f64>) -> Result<JacobsonReport> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.nrows() });
    }
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let n = a.nrows();
    let comm = commutator(a, b);
    let hyp = commutator(&comm, a);
    let scale = op_norm(a).powi(2) * op_norm(b);
    if relative(fro(&hyp), scale) > tol {
        return Err(Error::HypothesisViolated("[[A,B],A] ≠ 0".into()));
    }
    let cn = op_norm(&comm);
    if cn <= tol * scale.max(1.0) {
        return Ok(JacobsonReport { power_residual: 0.0, max_trace: 0.0, nilpotent: true });
    }
    let c = &comm / Complex64::new(cn, 0.0);
    let mut power = identity(n);
    let mut max_trace: f64 = 0.0;
    for _ in 0..n {
        power = &power * &c;
        max_trace = max_trace.max(power.trace().norm());
    }
    let power_residual = fro(&power);
    Ok(JacobsonReport {
        power_residual,
        max_trace,
        nilpotent: power_residual <= tol * (n as f64) && max_trace <= tol * (n as f64),
    })
}

/// The contradiction behind the corollary: if `[[D,δ],δ] = 0` the form `β = i[D,δ]`
/// is nilpotent, so it cannot also be Krein-positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobsonContradiction {
    pub hypothesis_holds: bool,
    pub beta_positive: bool,
    pub contradiction: bool,
}

pub fn jacobson_contradiction(
    dirac: &Operator,
    delta: &Operator,
    k: &KreinSpace,
    tol: Option<f64>,
) -> Result<JacobsonContradiction> {
    let beta = commutator(dirac, delta) * linalg::I;
    let hypothesis_holds = jacobson_nilpotency(delta, dirac, tol).is_ok();
    let beta_positive = is_krein_positive(&beta, k, tol);
    Ok(JacobsonContradiction {
        hypothesis_holds,
        beta_positive,
        contradiction: hypothesis_holds && beta_positive,
    })
}
