//! Wick rotation between antilorentzian spectral spacetimes with a normalized
//! orientation form and real even spectral triples with a distinguished 1-form.
//!
//! The two directions use `D_β = (1+i)/2·D + (1−i)/2·βDβ` and
//! `D_ω = (1−i)/2·D + (1+i)/2·ωDω`, which are exact inverses of each other.

use serde::Serialize;
use thiserror::Error;

use crate::clifford::{wick_ko, Signature};
use crate::error::Error as CoreError;
use crate::kreinlin::{krein_adjoint, AntilinearOperator, KreinSpace};
use crate::linalg::{c, hermitian_eigen, identity, Operator, PREDICATE_TOL};
use crate::spectral::{
    check_reconstructibility, imaginary_selfadjoint_forms, mismatch, one_form_basis, one_form_basis_with,
    verify_time_orientation, SpectralSpacetime, SpectralTriple, TimeOrientationForm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToEuclidean,
    ToAntilorentzian,
}

/// Record of the conditions checked on the form driving a rotation.
#[derive(Debug, Clone, Serialize)]
pub struct WickCertificate {
    pub direction: Direction,
    #[serde(serialize_with = "crate::io::serialize_operator")]
    pub form: Operator,
    pub normalized: bool,
    pub imaginary: bool,
    /// `ω ∈ Ω¹_{D_ω}` (or `β ∈ Ω¹_{D_β}` for the Euclidean direction).
    pub membership: bool,
}

impl WickCertificate {
    pub fn valid(&self) -> bool {
        self.normalized && self.imaginary && self.membership
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WickError {
    #[error("the form is not normalized (β² ≠ 1, residual {0:.3e})")]
    NotNormalized(f64),
    #[error("the spacetime is not reconstructible for this form (residual {0:.3e})")]
    NotReconstructible(f64),
    #[error("not a positive time-orientation form: {0}")]
    NotAnOrientation(String),
    #[error("the form is not self-adjoint (residual {0:.3e})")]
    NotSelfAdjoint(f64),
    #[error("the form is not a 1-form of the triple (residual {0:.3e})")]
    NotAOneForm(f64),
    #[error("the form fails the rotation conditions: {}", .0.join(", "))]
    FailsNec12(Vec<String>),
    #[error("Wick rotation is only defined for antilorentzian spacetimes, got {0}")]
    UnsupportedSignature(Signature),
    #[error(transparent)]
    Core(#[from] CoreError),
}

fn rotate_dirac(dirac: &Operator, form: &Operator, towards_euclidean: bool) -> Operator {
    let (a, b) = if towards_euclidean { (c(0.5, 0.5), c(0.5, -0.5)) } else { (c(0.5, -0.5), c(0.5, 0.5)) };
    dirac * a + form * dirac * form * b
}

/// Wick rotation of an antilorentzian spacetime along a normalized, reconstructible
/// positive time-orientation form `β`.
pub fn to_euclidean(
    s: &SpectralSpacetime,
    form: &TimeOrientationForm,
    tol: Option<f64>,
) -> Result<(SpectralTriple, WickCertificate), WickError> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    if s.signature != Signature::Antilorentzian {
        return Err(WickError::UnsupportedSignature(s.signature));
    }
    let beta = &form.beta;
    let orientation = verify_time_orientation(s, form, Some(tol))?;
    if !orientation.passed {
        return Err(WickError::NotAnOrientation(orientation.failures().join(", ")));
    }
    let square = mismatch(&(beta * beta), &identity(s.dim()));
    if square > tol {
        return Err(WickError::NotNormalized(square));
    }
    let recon = check_reconstructibility(s, form, Some(tol))?;
    if !recon.reconstructible {
        return Err(WickError::NotReconstructible(recon.worst_residual));
    }
    // β⁻¹ = β once β² = 1 is certified.
    let gram = s.space.j() * beta;
    let gram = (&gram + gram.adjoint()) * c(0.5, 0.0);
    let dirac = rotate_dirac(&s.dirac, beta, true);
    let real = s.real.after_linear(beta);
    let chi = -&s.chi;
    let membership = one_form_basis_with(&s.algebra, &dirac).contains(beta, tol);
    let triple = SpectralTriple::new(KreinSpace::new(gram)?, s.algebra.clone(), dirac, real, chi, wick_ko(s.ko_dim))?;
    let cert = WickCertificate {
        direction: Direction::ToEuclidean,
        form: beta.clone(),
        normalized: true,
        imaginary: true,
        membership,
    };
    Ok((triple, cert))
}

/// Wick rotation of a real even spectral triple along a self-adjoint 1-form `ω`.
pub fn to_antilorentzian(
    t: &SpectralTriple,
    omega: &Operator,
    tol: Option<f64>,
) -> Result<(SpectralSpacetime, WickCertificate), WickError> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let forms = one_form_basis(t);
    let distance = forms.relative_distance(omega);
    if distance > tol {
        return Err(WickError::NotAOneForm(distance));
    }
    let sa = mismatch(&krein_adjoint(omega, &t.space)?, omega);
    if sa > tol {
        return Err(WickError::NotSelfAdjoint(sa));
    }
    let imaginary = mismatch(&t.real.conjugate(omega).map_err(WickError::from)?, &-omega) <= tol;
    let normalized = mismatch(&(omega * omega), &identity(t.dim())) <= tol;
    let dirac = rotate_dirac(&t.dirac, omega, false);
    let membership = one_form_basis_with(&t.algebra, &dirac).contains(omega, tol);
    let mut failed = Vec::new();
    if !imaginary {
        failed.push("imaginary".to_string());
    }
    if !normalized {
        failed.push("normalized".to_string());
    }
    if !membership {
        failed.push("membership".to_string());
    }
    if !failed.is_empty() {
        return Err(WickError::FailsNec12(failed));
    }
    let j = t.space.j() * omega;
    let j = (&j + j.adjoint()) * c(0.5, 0.0);
    let real: AntilinearOperator = t.real.after_linear(omega);
    let s = SpectralSpacetime::new(
        KreinSpace::new(j)?,
        t.algebra.clone(),
        dirac,
        real,
        -&t.chi,
        Signature::Antilorentzian,
        wick_ko(t.ko_dim),
    )?;
    let cert = WickCertificate {
        direction: Direction::ToAntilorentzian,
        form: omega.clone(),
        normalized,
        imaginary,
        membership,
    };
    Ok((s, cert))
}

/// Result of [`find_distinguished_form`].
#[derive(Debug, Clone)]
pub enum DistinguishedForm {
    Found(Operator, WickCertificate),
    /// No self-adjoint 1-form is imaginary except zero, so none can square to one.
    ProvedNone,
    /// The bounded search found nothing; existence is not excluded.
    NoneFound,
}

/// Involution `sign(ω)` of a hermitian-for-`G` operator, `None` when singular.
fn sign_of(omega: &Operator, gram: &Operator) -> Option<Operator> {
    // G ω is hermitian; diagonalise ω in a G-orthonormal frame.
    let (gv, gvec) = hermitian_eigen(gram);
    let half = &gvec * Operator::from_diagonal(&nalgebra::DVector::from_iterator(gv.len(), gv.iter().map(|x| c(x.sqrt(), 0.0)))) * gvec.adjoint();
    let half_inv = crate::linalg::inverse(&half)?;
    let sym = &half * omega * &half_inv;
    let (values, vecs) = hermitian_eigen(&sym);
    let scale = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if values.iter().any(|x| x.abs() <= 1e-8 * scale.max(f64::MIN_POSITIVE)) {
        return None;
    }
    let signs = nalgebra::DVector::from_iterator(values.len(), values.iter().map(|x| c(x.signum(), 0.0)));
    Some(half_inv * (&vecs * Operator::from_diagonal(&signs) * vecs.adjoint()) * half)
}

/// Searches the self-adjoint imaginary 1-forms of `t` for one satisfying the rotation
/// conditions. Candidates are the sign involutions of each basis element and of
/// all `±1` combinations of up to eight basis elements.
pub fn find_distinguished_form(t: &SpectralTriple, tol: Option<f64>) -> Result<DistinguishedForm, WickError> {
    let basis = imaginary_selfadjoint_forms(t)?;
    if basis.is_empty() {
        return Ok(DistinguishedForm::ProvedNone);
    }
    let mut candidates: Vec<Operator> = Vec::new();
    let m = basis.len().min(8);
    for mask in 0u32..(1 << m) {
        let mut w = basis[0].clone() * c(0.0, 0.0);
        for (k, b) in basis.iter().take(m).enumerate() {
            let s = if mask & (1 << k) != 0 { -1.0 } else { 1.0 };
            w += b * c(s, 0.0);
        }
        candidates.push(w);
    }
    candidates.extend(basis.iter().cloned());
    for w in candidates {
        let Some(omega) = sign_of(&w, t.space.j()) else {
            continue;
        };
        if let Ok((_, cert)) = to_antilorentzian(t, &omega, tol) {
            return Ok(DistinguishedForm::Found(omega, cert));
        }
    }
    Ok(DistinguishedForm::NoneFound)
}
