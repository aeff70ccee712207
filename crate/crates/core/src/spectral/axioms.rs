use serde::Serialize;

use super::{mismatch, Check, SpectralSpacetime};
use crate::clifford::{ko_signs, measure_signs, KoSignEntry, Signature};
use crate::error::Result;
use crate::kreinlin::{antilinear_adjoint, krein_adjoint};
use crate::linalg::{c, commutator, fro, identity, relative, PREDICATE_TOL};

/// Signs read off the real structure, `None` where `J² = ±1` (etc.) fails outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasuredSigns {
    pub epsilon: Option<i8>,
    pub epsilon2: Option<i8>,
    pub kappa: Option<i8>,
}

/// Outcome of [`verify_axioms`].
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub signature: Signature,
    pub ko_dim: u8,
    pub expected: KoSignEntry,
    pub measured: MeasuredSigns,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl AxiomReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    /// Largest residual among passing checks.
    pub fn worst_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Checks the finite axioms of an even spectral spacetime (or, for the Euclidean
/// signature, of a real even spectral triple) against the sign table at the claimed
/// KO dimension.
///
/// For antilorentzian and Lorentzian signatures the chirality must be Krein
/// anti-self-adjoint; for Euclidean triples it must be self-adjoint.
pub fn verify_axioms(s: &SpectralSpacetime, tol: Option<f64>) -> Result<AxiomReport> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    let expected = ko_signs(s.signature, s.ko_dim)?;
    let k = &s.space;
    let d = s.dim();
    let id = identity(d);
    let (dirac, chi, real) = (&s.dirac, &s.chi, &s.real);
    let mut checks = Vec::new();

    checks.push(Check::at_most("dirac_selfadjoint", mismatch(&krein_adjoint(dirac, k)?, dirac), tol));
    checks.push(Check::at_most("chi_involution", mismatch(&(chi * chi), &id), tol));
    let chi_alg = s
        .algebra
        .basis()
        .iter()
        .map(|a| relative(fro(&commutator(a, chi)), fro(a)))
        .fold(0.0, f64::max);
    checks.push(Check::at_most("chi_commutes_with_algebra", chi_alg, tol));
    checks.push(Check::at_most(
        "chi_anticommutes_with_dirac",
        relative(fro(&(chi * dirac + dirac * chi)), fro(dirac)),
        tol,
    ));
    let chi_x = krein_adjoint(chi, k)?;
    let chi_sign = if s.signature == Signature::Euclidean { 1.0 } else { -1.0 };
    checks.push(Check::at_most("chi_adjoint", mismatch(&chi_x, &(chi * c(chi_sign, 0.0))), tol));

    let eps = c(f64::from(expected.epsilon), 0.0);
    checks.push(Check::at_most("j_squared", mismatch(&real.square(), &(&id * eps)), tol));
    match real.conjugate(dirac) {
        Ok(jdj) => checks.push(Check::at_most("j_commutes_with_dirac", mismatch(&jdj, dirac), tol)),
        Err(_) => checks.push(Check::flag("j_commutes_with_dirac", false, f64::INFINITY)),
    }
    match real.conjugate(chi) {
        Ok(jcj) => {
            let e2 = c(f64::from(expected.epsilon2), 0.0);
            checks.push(Check::at_most("j_chi", mismatch(&jcj, &(chi * e2)), tol));
        }
        Err(_) => checks.push(Check::flag("j_chi", false, f64::INFINITY)),
    }
    let kappa = c(f64::from(expected.kappa), 0.0);
    let jxj = antilinear_adjoint(real, k)?.compose(real);
    checks.push(Check::at_most("j_adjoint", mismatch(&jxj, &(&id * kappa)), tol));

    let (epsilon, epsilon2, kappa) = measure_signs(real, chi, k, tol.max(1e-9));
    let passed = checks.iter().all(|c| c.passed);
    Ok(AxiomReport {
        signature: s.signature,
        ko_dim: s.ko_dim,
        expected,
        measured: MeasuredSigns { epsilon, epsilon2, kappa },
        checks,
        passed,
    })
}
