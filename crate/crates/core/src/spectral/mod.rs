//! Spectral spacetimes and spectral triples as concrete matrix data, with verifiers for
//! every finite axiom and for the conditions placed on time-orientation forms.

mod axioms;
mod c2;
mod equivalence;
mod forms;

pub use axioms::{verify_axioms, AxiomReport, MeasuredSigns};
pub use c2::{build_c2_spacetime, c2_commuting_branch, c2_positive_form, s0_triple, s6_triple};
pub use equivalence::{unitary_equivalence_check, EquivalenceReport};
pub use forms::{
    check_reconstructibility, imaginary_selfadjoint_forms, is_exact, is_krein_star_closed,
    one_form_basis, one_form_basis_with, order_conditions, right_representation, star_beta_mismatch,
    verify_time_orientation, OneFormBasis, OrderReport, ReconstructibilityReport, StarClosure,
    TimeOrientationReport,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::Signature;
use crate::error::{Error, Result};
use crate::kreinlin::{AntilinearOperator, KreinSpace};
use crate::linalg::{self, fro, identity, Operator, Span, PREDICATE_TOL};

/// A named pass/fail check with the residual that decided it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

impl Check {
    /// Passes when `residual ≤ tol`.
    pub fn at_most(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check { name: name.into(), passed: residual <= tol, residual }
    }

    pub fn flag(name: impl Into<String>, passed: bool, residual: f64) -> Self {
        Check { name: name.into(), passed, residual }
    }
}

/// Relative residual `‖a − b‖ / max(1, ‖b‖)`.
pub fn mismatch(a: &Operator, b: &Operator) -> f64 {
    linalg::relative(fro(&(a - b)), fro(b))
}

/// The image `π(𝒜)` of an algebra given by a basis of operators.
#[derive(Debug, Clone)]
pub struct AlgebraRep {
    basis: Vec<Operator>,
    labels: Vec<String>,
    span: Span,
}

impl AlgebraRep {
    /// Validates shapes, that the unit lies in the span and that the span is closed
    /// under multiplication.
    pub fn new(basis: Vec<Operator>, labels: Vec<String>) -> Result<Self> {
        let rep = Self::assume_closed(basis, labels)?;
        let unit = rep.unit_residual();
        if unit > PREDICATE_TOL {
            return Err(Error::InvalidInput(format!("algebra does not contain the unit (residual {unit:.3e})")));
        }
        let closure = rep.closure_residual();
        if closure > PREDICATE_TOL {
            return Err(Error::InvalidInput(format!(
                "algebra basis is not closed under products (residual {closure:.3e})"
            )));
        }
        Ok(rep)
    }

    /// Skips the closure and unit checks; for constructors whose block structure
    /// guarantees both.
    pub fn assume_closed(basis: Vec<Operator>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(Error::InvalidInput("empty algebra basis".into()));
        };
        let d = first.nrows();
        for op in &basis {
            if op.shape() != (d, d) {
                return Err(Error::DimensionMismatch { expected: d, found: op.nrows() });
            }
        }
        if labels.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: labels.len() });
        }
        let span = Span::of(&basis, PREDICATE_TOL);
        Ok(AlgebraRep { basis, labels, span })
    }

    /// The scalars `ℂ·1`.
    pub fn scalars(d: usize) -> Self {
        Self::assume_closed(vec![identity(d)], vec!["1".into()]).expect("nonempty basis")
    }

    pub fn basis(&self) -> &[Operator] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Dimension of the space the algebra acts on.
    pub fn rep_dim(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    /// A faithful representation is one whose basis images are linearly independent.
    pub fn is_faithful(&self) -> bool {
        self.span.dim() == self.basis.len()
    }

    /// `π(a)` for coefficients `a` against the basis.
    pub fn element(&self, coeffs: &[Complex64]) -> Operator {
        let mut out = linalg::zeros(self.rep_dim());
        for (b, x) in self.basis.iter().zip(coeffs) {
            out += b * *x;
        }
        out
    }

    pub fn contains(&self, op: &Operator, tol: f64) -> bool {
        self.span.contains(op, tol)
    }

    pub fn unit_residual(&self) -> f64 {
        self.span.relative_distance(&identity(self.rep_dim()))
    }

    /// Worst relative distance of a product of two basis elements to the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            for b in &self.basis {
                worst = worst.max(self.span.relative_distance(&(a * b)));
            }
        }
        worst
    }
}

/// An even spectral spacetime (antilorentzian or Lorentzian) given by matrices.
#[derive(Debug, Clone)]
pub struct SpectralSpacetime {
    pub space: KreinSpace,
    pub algebra: AlgebraRep,
    pub dirac: Operator,
    pub real: AntilinearOperator,
    pub chi: Operator,
    pub signature: Signature,
    pub ko_dim: u8,
}

impl SpectralSpacetime {
    pub fn new(
        space: KreinSpace,
        algebra: AlgebraRep,
        dirac: Operator,
        real: AntilinearOperator,
        chi: Operator,
        signature: Signature,
        ko_dim: u8,
    ) -> Result<Self> {
        let d = space.dim();
        for (what, found) in [
            ("algebra", algebra.rep_dim()),
            ("dirac", dirac.nrows()),
            ("real", real.dim()),
            ("chi", chi.nrows()),
        ] {
            if found != d {
                return Err(Error::InvalidInput(format!("{what} has dimension {found}, space has {d}")));
            }
        }
        if !dirac.is_square() || !chi.is_square() || !real.matrix().is_square() {
            return Err(Error::InvalidInput("operators must be square".into()));
        }
        Ok(SpectralSpacetime { space, algebra, dirac, real, chi, signature, ko_dim: ko_dim % 8 })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Same data with a different claimed KO dimension.
    pub fn with_ko_dim(&self, ko_dim: u8) -> Self {
        SpectralSpacetime { ko_dim: ko_dim % 8, ..self.clone() }
    }
}

/// A real even spectral triple: the space carries a positive definite product.
#[derive(Debug, Clone)]
pub struct SpectralTriple(SpectralSpacetime);

impl SpectralTriple {
    pub fn new(
        space: KreinSpace,
        algebra: AlgebraRep,
        dirac: Operator,
        real: AntilinearOperator,
        chi: Operator,
        ko_dim: u8,
    ) -> Result<Self> {
        if !space.is_positive_definite() {
            return Err(Error::InvalidInput("a spectral triple needs a positive definite scalar product".into()));
        }
        Ok(SpectralTriple(SpectralSpacetime::new(space, algebra, dirac, real, chi, Signature::Euclidean, ko_dim)?))
    }

    pub fn structure(&self) -> &SpectralSpacetime {
        &self.0
    }

    pub fn into_structure(self) -> SpectralSpacetime {
        self.0
    }
}

impl std::ops::Deref for SpectralTriple {
    type Target = SpectralSpacetime;
    fn deref(&self) -> &SpectralSpacetime {
        &self.0
    }
}

/// A candidate time-orientation form, with an optional potential `δ` (coefficients against
/// the algebra basis) claimed to satisfy `β = i[D, π(δ)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeOrientationForm {
    pub beta: Operator,
    pub potential: Option<Vec<Complex64>>,
}

impl TimeOrientationForm {
    pub fn new(beta: Operator) -> Self {
        TimeOrientationForm { beta, potential: None }
    }

    pub fn exact(beta: Operator, potential: Vec<Complex64>) -> Self {
        TimeOrientationForm { beta, potential: Some(potential) }
    }
}
