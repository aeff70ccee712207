use super::{AlgebraRep, SpectralSpacetime, SpectralTriple};
use crate::clifford::Signature;
use crate::error::{Error, Result};
use crate::kreinlin::{AntilinearOperator, KreinSpace};
use crate::linalg::{c, diag, from_real_rows, from_rows, Operator, ONE, ZERO};
use num_complex::Complex64;

fn diagonal_algebra() -> AlgebraRep {
    AlgebraRep::assume_closed(
        vec![diag(&[ONE, ZERO]), diag(&[ZERO, ONE])],
        vec!["e1".into(), "e2".into()],
    )
    .expect("nonempty basis")
}

/// The antilorentzian spacetime with algebra `ℂ²`, unique up to unitary equivalence:
/// `j = r[[0,e^{iθ}],[e^{-iθ},0]]`, `D = b[[0,e^{iθ}],[-e^{-iθ},0]]`, `χ = diag(-1,1)`,
/// `J = [[0,-1],[1,0]]∘c.c.`, KO dimension 2.
pub fn build_c2_spacetime(b: f64, theta: f64, r: f64) -> Result<SpectralSpacetime> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidInput("b must be a nonzero real number".into()));
    }
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    let p = Complex64::from_polar(1.0, theta);
    let j = from_rows(&[vec![ZERO, p * r], vec![p.conj() * r, ZERO]]);
    let dirac = from_rows(&[vec![ZERO, p * b], vec![-p.conj() * b, ZERO]]);
    let chi = diag(&[c(-1.0, 0.0), ONE]);
    let real = AntilinearOperator::new(from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]));
    SpectralSpacetime::new(KreinSpace::new(j)?, diagonal_algebra(), dirac, real, chi, Signature::Antilorentzian, 2)
}

/// The 1-form `[[0, λe^{iθ}],[μe^{-iθ}, 0]]` on the `ℂ²` spacetime with phase `θ`.
/// It is a positive time-orientation form iff `λ = μ` has the sign of `r`.
pub fn c2_positive_form(theta: f64, lambda: f64, mu: f64) -> Operator {
    let p = Complex64::from_polar(1.0, theta);
    from_rows(&[vec![ZERO, p * lambda], vec![p.conj() * mu, ZERO]])
}

/// The `ε'' = +1` candidate: same data as [`build_c2_spacetime`] at `θ = 0` but with
/// `J = e^{ik}∘c.c.`, which commutes with every self-adjoint 1-form.
pub fn c2_commuting_branch(b: f64, r: f64, k: f64) -> Result<SpectralSpacetime> {
    let s = build_c2_spacetime(b, 0.0, r)?;
    let real = AntilinearOperator::new(diag(&[Complex64::from_polar(1.0, k); 2]));
    SpectralSpacetime::new(s.space, s.algebra, s.dirac, real, s.chi, Signature::Antilorentzian, 0)
}

fn two_point_triple(b: f64, real: Operator, ko: u8) -> Result<SpectralTriple> {
    let dirac = from_real_rows(&[vec![0.0, b], vec![b, 0.0]]);
    let chi = diag(&[ONE, c(-1.0, 0.0)]);
    SpectralTriple::new(KreinSpace::hilbert(2), diagonal_algebra(), dirac, AntilinearOperator::new(real), chi, ko)
}

/// `S⁰`: `D = b[[0,1],[1,0]]`, `χ = diag(1,-1)`, `J = c.c.`, KO dimension 0.
pub fn s0_triple(b: f64) -> Result<SpectralTriple> {
    two_point_triple(b, crate::linalg::identity(2), 0)
}

/// `S⁶`: as `S⁰` but with `J = [[0,1],[1,0]]∘c.c.`, KO dimension 6.
pub fn s6_triple(b: f64) -> Result<SpectralTriple> {
    two_point_triple(b, from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]), 6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kreinlin::{antilinear_adjoint, is_krein_positive, krein_adjoint};
    use crate::linalg::{fro, identity, I};
    use crate::spectral::{
        check_reconstructibility, imaginary_selfadjoint_forms, is_exact, one_form_basis, order_conditions,
        verify_axioms, verify_time_orientation, TimeOrientationForm,
    };
    use proptest::prelude::*;

    #[test]
    fn family_passes_at_ko_two_and_fails_elsewhere() {
        let s = build_c2_spacetime(1.0, 0.0, 1.0).unwrap();
        let report = verify_axioms(&s, None).unwrap();
        assert!(report.passed, "{:?}", report.failures());
        assert_eq!((report.expected.epsilon, report.expected.epsilon2, report.expected.kappa), (-1, -1, -1));
        assert!(!verify_axioms(&s.with_ko_dim(0), None).unwrap().passed);
        assert!(verify_axioms(&s.with_ko_dim(3), None).is_err());
    }

    #[test]
    fn adjoint_swaps_and_conjugates() {
        let s = build_c2_spacetime(2.0, 0.7, 3.0).unwrap();
        let a = diag(&[c(1.0, 2.0), c(-3.0, 0.5)]);
        let ax = krein_adjoint(&a, &s.space).unwrap();
        assert!(fro(&(ax - diag(&[c(-3.0, -0.5), c(1.0, -2.0)]))) < 1e-12);
        let jx = antilinear_adjoint(&s.real, &s.space).unwrap();
        assert!(fro(&(jx.compose(&s.real) + identity(2))) < 1e-12);
    }

    #[test]
    fn one_forms_are_off_diagonal_or_singular() {
        let s = build_c2_spacetime(1.5, 0.3, 1.0).unwrap();
        let forms = one_form_basis(&s);
        assert_eq!(forms.dim(), 2);
        assert!(forms.contains(&from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]), 1e-10));
        assert!(forms.bimodule_residual(&s.algebra) < 1e-10);
        let degenerate = SpectralSpacetime { dirac: from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]), ..s };
        let forms = one_form_basis(&degenerate);
        for w in &forms.basis {
            assert!(w.determinant().norm() < 1e-12);
        }
    }

    #[test]
    fn positive_forms_need_lambda_equal_mu_with_sign_of_r() {
        let s = build_c2_spacetime(1.0, 0.4, 2.0).unwrap();
        let good = verify_time_orientation(&s, &TimeOrientationForm::new(c2_positive_form(0.4, 0.5, 0.5)), None).unwrap();
        assert!(good.passed, "{:?}", good.checks);
        let skew = verify_time_orientation(&s, &TimeOrientationForm::new(c2_positive_form(0.4, 0.5, 2.0)), None).unwrap();
        assert_eq!(skew.failures(), vec!["imaginary"]);
        let negative = verify_time_orientation(&s, &TimeOrientationForm::new(c2_positive_form(0.4, -1.0, -1.0)), None).unwrap();
        assert_eq!(negative.failures(), vec!["positive"]);
        let unit = verify_time_orientation(&s, &TimeOrientationForm::new(identity(2)), None).unwrap();
        assert!(!unit.passed);
        assert!(unit.failures().contains(&"one_form"));
        assert!(unit.failures().contains(&"imaginary"));
    }

    #[test]
    fn exactness_needs_imaginary_potential() {
        let (b, theta, lambda) = (2.0, -0.9, 0.75);
        let s = build_c2_spacetime(b, theta, 1.0).unwrap();
        let delta = is_exact(&s, &c2_positive_form(theta, lambda, lambda), None).unwrap();
        let diff = delta[1] - delta[0];
        assert!(diff.re.abs() < 1e-12);
        assert!((diff - (-I * lambda / b)).norm() < 1e-12);
        assert!(is_exact(&s, &c2_positive_form(theta, lambda, 2.0 * lambda), None).is_none());
        let zero = is_exact(&s, &crate::linalg::zeros(2), None).unwrap();
        assert!(zero.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn order_zero_holds_and_order_one_fails() {
        let s = build_c2_spacetime(1.0, 0.0, 1.0).unwrap();
        let beta = c2_positive_form(0.0, 1.0, 1.0);
        let report = order_conditions(&s, &[beta], None).unwrap();
        assert!(report.order_zero && report.right_equals_left);
        assert!(!report.order_one && report.order_one_residual > 1e-6);
        assert!(report.form_commutators[0] > 1e-6);
        let scalars = SpectralSpacetime { algebra: AlgebraRep::scalars(2), ..s };
        let report = order_conditions(&scalars, &[], None).unwrap();
        assert!(report.order_zero && report.order_one);
    }

    #[test]
    fn commuting_branch_has_no_imaginary_forms() {
        let s = c2_commuting_branch(1.0, 1.0, 0.3).unwrap();
        assert!(imaginary_selfadjoint_forms(&s).unwrap().is_empty());
        let main = build_c2_spacetime(1.0, 0.0, 1.0).unwrap();
        assert_eq!(imaginary_selfadjoint_forms(&main).unwrap().len(), 1);
    }

    #[test]
    fn two_point_triples_verify() {
        for (t, ko) in [(s0_triple(1.0).unwrap(), 0), (s6_triple(2.0).unwrap(), 6)] {
            let report = verify_axioms(&t, None).unwrap();
            assert!(report.passed, "{:?}", report.failures());
            assert_eq!(t.ko_dim, ko);
        }
        assert!(imaginary_selfadjoint_forms(&s6_triple(1.0).unwrap()).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn every_admissible_form_is_positive_exact_and_reconstructible(
            b in prop_oneof![-3.0..-0.2f64, 0.2..3.0f64],
            theta in -3.0..3.0f64,
            r in 0.2..4.0f64,
            lambda in 0.1..5.0f64,
        ) {
            let s = build_c2_spacetime(b, theta, r).unwrap();
            prop_assert!(verify_axioms(&s, None).unwrap().passed);
            let beta = c2_positive_form(theta, lambda, lambda);
            prop_assert!(is_krein_positive(&beta, &s.space, None));
            prop_assert!(verify_time_orientation(&s, &TimeOrientationForm::new(beta.clone()), None).unwrap().passed);
            prop_assert!(is_exact(&s, &beta, None).is_some());
            prop_assert!(check_reconstructibility(&s, &TimeOrientationForm::new(beta), None).unwrap().reconstructible);
        }
    }
}
