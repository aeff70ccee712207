use serde::Serialize;

use super::{mismatch, verify_time_orientation, Check, SpectralSpacetime, TimeOrientationForm};
use crate::error::{Error, Result};
use crate::linalg::{inverse, PREDICATE_TOL};

/// Outcome of [`unitary_equivalence_check`].
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl EquivalenceReport {
    pub fn violated(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Checks that `U` is a Krein unitary from `s1` to `s2` intertwining the algebras (as
/// sets), `D`, `J` and `χ`, and that it sends each sampled positive form of `s1` to a
/// positive form of `s2`.
pub fn unitary_equivalence_check(
    s1: &SpectralSpacetime,
    s2: &SpectralSpacetime,
    u: &crate::linalg::Operator,
    forms: &[TimeOrientationForm],
    tol: Option<f64>,
) -> Result<EquivalenceReport> {
    let tol = tol.unwrap_or(PREDICATE_TOL);
    if s1.dim() != s2.dim() || u.nrows() != s1.dim() || !u.is_square() {
        return Err(Error::DimensionMismatch { expected: s1.dim(), found: u.nrows() });
    }
    let ui = inverse(u).ok_or_else(|| Error::Singular("U".into()))?;
    let conj = |a: &crate::linalg::Operator| u * a * &ui;
    let mut checks = Vec::new();

    checks.push(Check::at_most("krein_unitary", mismatch(&(u.adjoint() * s2.space.j() * u), s1.space.j()), tol));
    let forward = s1
        .algebra
        .basis()
        .iter()
        .map(|a| s2.algebra.span().relative_distance(&conj(a)))
        .fold(0.0, f64::max);
    let same_dim = s1.algebra.span().dim() == s2.algebra.span().dim();
    checks.push(Check::flag("algebra", same_dim && forward <= tol, forward));
    checks.push(Check::at_most("dirac", mismatch(&conj(&s1.dirac), &s2.dirac), tol));
    let real = u * s1.real.matrix() * ui.map(|z| z.conj());
    checks.push(Check::at_most("real", mismatch(&real, s2.real.matrix()), tol));
    checks.push(Check::at_most("chi", mismatch(&conj(&s1.chi), &s2.chi), tol));
    if !forms.is_empty() {
        let mut all = true;
        for f in forms {
            let image = TimeOrientationForm::new(conj(&f.beta));
            all &= verify_time_orientation(s2, &image, Some(tol))?.passed;
        }
        checks.push(Check::flag("forms", all, 0.0));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(EquivalenceReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag, identity};
    use crate::spectral::{build_c2_spacetime, c2_positive_form};
    use num_complex::Complex64;

    #[test]
    fn identity_is_an_equivalence() {
        let s = build_c2_spacetime(1.0, 0.0, 1.0).unwrap();
        let f = TimeOrientationForm::new(c2_positive_form(0.0, 1.0, 1.0));
        assert!(unitary_equivalence_check(&s, &s, &identity(2), &[f], None).unwrap().passed);
    }

    #[test]
    fn phase_rotation_removes_theta() {
        let theta = 1.1;
        let s1 = build_c2_spacetime(0.8, theta, 2.0).unwrap();
        let s0 = build_c2_spacetime(0.8, 0.0, 2.0).unwrap();
        let u = diag(&[Complex64::from_polar(1.0, theta / 2.0), Complex64::from_polar(1.0, -theta / 2.0)]);
        let f = TimeOrientationForm::new(c2_positive_form(0.0, 1.0, 1.0));
        let report = unitary_equivalence_check(&s0, &s1, &u, &[f], None).unwrap();
        assert!(report.passed, "{:?}", report.violated());
    }

    #[test]
    fn perturbed_unitary_names_the_broken_relations() {
        let s = build_c2_spacetime(1.0, 0.0, 1.0).unwrap();
        let u = diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let report = unitary_equivalence_check(&s, &s, &u, &[], None).unwrap();
        assert!(!report.passed);
        assert!(report.violated().contains(&"krein_unitary"));
        assert!(report.violated().contains(&"dirac"));
    }
}
