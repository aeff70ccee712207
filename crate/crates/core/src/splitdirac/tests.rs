use super::*;
use crate::canonical::build_canonical_spacetime;
use crate::clifford::{boost, build_clifford, rotation};
use crate::fixtures;
use crate::generate::{random_connected_graph, random_spin_structure, rng};
use crate::graphs::parse_rational;
use crate::linalg::from_real_rows;
use crate::spectral::unitary_equivalence_check;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn single_edge(n: usize, h: Operator, plus: Operator) -> SplitDiracStructure {
    let g = WeightedDigraph::from_labels(&["1", "2"], &[("1", "2", "1/2")]).unwrap();
    let rep = build_clifford(n).unwrap();
    let minus = compatible_gamma_minus(&rep, &h, &plus).unwrap();
    build_split(&g, &rep, vec![h], vec![plus], vec![minus], None).unwrap()
}

fn e0(n: usize) -> Vec<f64> {
    (0..n).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect()
}

#[test]
fn single_edge_satisfies_the_structure_theorem() {
    for n in [2, 4] {
        let s = single_edge(n, identity(1 << (n / 2)), build_clifford(n).unwrap().vector(&e0(n)));
        let report = verify_theorem6(&s, None).unwrap();
        assert!(report.passed, "n={n}: {:?}", report.failures());
        assert!(report.vectorial);
        assert!(!report.complete || n == 2);
        let axioms = report.axioms.unwrap();
        assert_eq!(axioms.ko_dim, s.rep().signs().ko_dim_mod8);
    }
    let s = fixtures::split(fixtures::SPLIT_SINGLE_EDGE).unwrap();
    assert!(verify_theorem6(&s, None).unwrap().passed);
}

#[test]
fn construction_errors() {
    let g = WeightedDigraph::from_labels(&["1", "2"], &[("1", "2", "1")]).unwrap();
    let rep = build_clifford(2).unwrap();
    let g0 = rep.vector(&e0(2));
    let singular = zeros(2);
    assert!(matches!(
        build_split(&g, &rep, vec![singular], vec![g0.clone()], vec![g0.clone()], None),
        Err(Error::Singular(_))
    ));
    assert!(build_split(&g, &rep, vec![identity(4)], vec![g0.clone()], vec![g0.clone()], None).is_err());
    assert!(build_split(&g, &rep, vec![], vec![g0.clone()], vec![g0], None).is_err());
}

#[test]
fn connection_properties_on_fixtures() {
    let s = single_edge(4, identity(4), build_clifford(4).unwrap().vector(&e0(4)));
    let flat = connection_properties(&s, None);
    assert!(flat.metric && flat.spin_preserving && flat.orientation_preserving && flat.clifford);
    assert!((flat.levi_civita[0].as_ref().unwrap() - DMatrix::identity(4, 4)).norm() < 1e-12);

    let s = fixtures::split(fixtures::BOOST_TRIANGLE).unwrap();
    let report = connection_properties(&s, None);
    assert!(report.metric && report.spin_preserving && report.orientation_preserving && report.clifford);
    let expected = from_real_rows(&[
        vec![1.25, 0.75, 0.0, 0.0],
        vec![0.75, 1.25, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ])
    .map(|z| z.re);
    assert!((report.levi_civita[0].as_ref().unwrap() - expected).norm() < 1e-12);
    assert_eq!(report.proper_orthochronous, vec![Some(true); 3]);

    let s = single_edge(2, identity(2) * c(2.0, 0.0), build_clifford(2).unwrap().vector(&e0(2)));
    assert!(!connection_properties(&s, None).metric);
}

#[test]
fn each_mutation_is_named() {
    let rep = build_clifford(4).unwrap();
    let v = rep.vector(&e0(4));
    let id = identity(4);
    let names = |s: &SplitDiracStructure| verify_theorem6(s, None).unwrap().failed_names();

    let rescaled = {
        let mut s = single_edge(4, id.clone(), v.clone());
        s.h_plus[0] = &id * c(2.0, 0.0);
        s.h_minus[0] = &id * c(0.5, 0.0);
        s
    };
    assert!(names(&rescaled).contains(&"metric".to_string()));

    let phase = Complex64::from_polar(1.0, 0.7);
    let s = single_edge(4, &id * phase, v.clone());
    let n = names(&s);
    assert!(n.contains(&"spin".to_string()) && !n.contains(&"metric".to_string()), "{n:?}");

    let s = single_edge(4, &rep.gamma()[0] * c(0.0, 1.0), v.clone());
    let n = names(&s);
    assert_eq!(n, vec!["orientation".to_string()]);

    let s = single_edge(4, id.clone(), id.clone());
    let report = verify_theorem6(&s, None).unwrap();
    assert!(report.failed_names().contains(&"odd".to_string()));
    let st = s.spacetime().unwrap();
    assert!(fro(&(&st.chi * &st.dirac + &st.dirac * &st.chi)) > 1e-6);

    let mut s = single_edge(4, id.clone(), v.clone());
    s.gamma_minus[0] = -s.gamma_minus[0].clone();
    assert_eq!(names(&s), vec!["j_compatibility".to_string()]);

    let left = (&id - rep.chi()) * c(0.5, 0.0);
    let s = single_edge(4, id.clone(), &v * &left);
    assert!(names(&s).contains(&"nonvanishing".to_string()));
}

#[test]
fn random_spin_connections_pass() {
    let mut r = rng(61);
    for k in 0..8 {
        let n = if k % 2 == 0 { 2 } else { 4 };
        let s = random_spin_structure(&mut r, n, 3 + k % 2);
        let report = verify_theorem6(&s, None).unwrap();
        assert!(report.passed, "n={n}: {:?}", report.failures());
        let signs = report.axioms.as_ref().unwrap();
        assert_eq!(signs.ko_dim, s.rep().signs().ko_dim_mod8);
        for gen in holonomy_generators(&s, 0).unwrap() {
            assert!(is_proper_orthochronous(&gen.lorentz, 1e-8));
        }
    }
}

#[test]
fn holonomy_of_fixtures() {
    let tree = fixtures::split(fixtures::SPLIT_SINGLE_EDGE).unwrap();
    assert!(holonomy_generators(&tree, 0).unwrap().is_empty());

    let s = fixtures::split(fixtures::BOOST_TRIANGLE).unwrap();
    let gens = holonomy_generators(&s, 0).unwrap();
    assert_eq!(gens.len(), 1);
    let lambda = s.rep().lorentz_of(&s.h_plus()[0]).unwrap().0;
    let reversed = crate::clifford::minkowski(4) * lambda.transpose() * crate::clifford::minkowski(4);
    let g = &gens[0].lorentz;
    assert!((g - &lambda).norm() < 1e-12 || (g - &reversed).norm() < 1e-12, "{g}");

    // A square with a diagonal: two independent loops, checked against products of edge transports.
    let g = WeightedDigraph::from_labels(
        &["a", "b", "c", "d"],
        &[("a", "b", "1"), ("b", "c", "1"), ("c", "d", "1"), ("d", "a", "1"), ("a", "c", "1")],
    )
    .unwrap();
    let rep = build_clifford(4).unwrap();
    let hb = rep.spin_lift(&boost(4, 1, 0.4)).unwrap();
    let hr = rep.spin_lift(&rotation(4, 2, 3, 0.9)).unwrap();
    let hs = vec![hb.clone(), identity(4), hr.clone(), identity(4), identity(4)];
    let gp = vec![rep.vector(&e0(4)); 5];
    let gm: Vec<Operator> = hs.iter().zip(&gp).map(|(h, x)| compatible_gamma_minus(&rep, h, x).unwrap()).collect();
    let s = build_split(&g, &rep, hs, gp, gm, None).unwrap();
    let gens = holonomy_generators(&s, 0).unwrap();
    assert_eq!(gens.len(), 2);
    for gen in &gens {
        let mut direct = identity(4);
        for w in gen.path.windows(2) {
            let (e, sign) = g.edge_between(w[0], w[1]).unwrap();
            let step = if sign > 0 { s.h_plus()[e].clone() } else { inverse(&s.h_plus()[e]).unwrap() };
            direct = step * direct;
        }
        assert!(fro(&(&direct - &gen.spinor)) < 1e-12);
        assert_eq!(gen.path.first(), gen.path.last());
    }
    let disconnected = WeightedDigraph::from_labels(&["a", "b", "c", "d"], &[("a", "b", "1"), ("c", "d", "1")]).unwrap();
    let s = build_split(&disconnected, &rep, vec![identity(4); 2], vec![rep.vector(&e0(4)); 2], vec![rep.vector(&e0(4)); 2], None).unwrap();
    assert!(matches!(holonomy_generators(&s, 0), Err(Error::Disconnected(_))));
}

#[test]
fn reconstructibility_of_the_triangles() {
    let s = fixtures::split(fixtures::BOOST_TRIANGLE).unwrap();
    let verdict = check_reconstructible_split(&s, None).unwrap();
    assert!(!verdict.is_reconstructible() && verdict.cross_validated(), "{verdict:?}");

    let s = fixtures::split(fixtures::ROTATION_TRIANGLE).unwrap();
    match check_reconstructible_split(&s, None).unwrap() {
        SplitReconstruction::Reconstructible { field: Some(field), cross_validated, operator_residual, .. } => {
            assert!(cross_validated, "{operator_residual}");
            for u in &field {
                assert!((u[0] - 1.0).abs() < 1e-12 && u[1..].iter().all(|x| x.abs() < 1e-12), "{u:?}");
            }
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn flat_and_two_dimensional_structures_reconstruct() {
    let s = single_edge(4, identity(4), build_clifford(4).unwrap().vector(&e0(4)));
    match check_reconstructible_split(&s, None).unwrap() {
        SplitReconstruction::Reconstructible { field: Some(f), cross_validated: true, .. } => {
            assert!(f.iter().all(|u| (u[0] - 1.0).abs() < 1e-12));
        }
        other => panic!("{other:?}"),
    }
    let mut r = rng(62);
    for _ in 0..5 {
        let s = random_spin_structure(&mut r, 2, 4);
        let v = check_reconstructible_split(&s, None).unwrap();
        assert!(v.is_reconstructible() && v.cross_validated(), "{v:?}");
    }
    let mut s = single_edge(4, identity(4), build_clifford(4).unwrap().vector(&e0(4)));
    s.h_plus[0] = &s.h_plus[0] * c(2.0, 0.0);
    s.h_minus[0] = &s.h_minus[0] * c(0.5, 0.0);
    s.h_plus[0][(0, 1)] = c(1.0, 0.0);
    s.h_minus[0] = inverse(&s.h_plus[0]).unwrap();
    assert!(matches!(check_reconstructible_split(&s, None), Err(Error::CriterionUnavailable(_)) | Err(Error::InvalidInput(_))));
}

#[test]
fn orientation_forms_from_timelike_data() {
    let s = fixtures::split(fixtures::BOOST_TRIANGLE).unwrap();
    let (_, report) = orientation_form_family(&s, &constant_gammas(&s, &e0(4)), None).unwrap();
    assert!(report.passed, "{:?}", report.failures());
    let tilted = [1.5, 0.3, -0.8, 0.2];
    assert!(orientation_form_family(&s, &constant_gammas(&s, &tilted), None).unwrap().1.passed);
    let spacelike = [0.0, 1.0, 0.0, 0.0];
    assert!(orientation_form_family(&s, &constant_gammas(&s, &spacelike), None).is_err());
    let beta = s.assemble_orientation_form(&constant_gammas(&s, &spacelike)).unwrap();
    let report = verify_time_orientation(&s.spacetime().unwrap(), &TimeOrientationForm::new(beta), None).unwrap();
    assert!(!report.check("positive").unwrap().passed);
}

#[test]
fn mixed_square_is_certified_infeasible() {
    let s = fixtures::split(fixtures::MIXED4).unwrap();
    let report = n4_stable_causality(&s, None).unwrap();
    use EdgeCausalType::*;
    assert_eq!(report.types, vec![TimelikeFuture, TimelikeFuture, SigmaPlus, SigmaPlus]);
    let N4Verdict::NotStablyCausal { certificate: InfeasibilityCertificate::Farkas { multipliers } } = &report.verdict else {
        panic!("{:?}", report.verdict);
    };
    let rows: Vec<Vec<_>> = report.rows.iter().map(|r| r.coeffs.clone()).collect();
    let mut y = vec![num_rational::BigRational::from_integer(0.into()); rows.len()];
    for (k, v) in multipliers {
        y[*k] = parse_rational(v).unwrap();
    }
    assert!(certifies(&rows, &y));
    assert_eq!(report.agrees_with_loop_criterion, None);
}

#[test]
fn figsc_is_stably_causal() {
    let s = fixtures::split(fixtures::FIGSC).unwrap();
    let report = n4_stable_causality(&s, None).unwrap();
    let paper = fixtures::potential(fixtures::FIGSC_POTENTIAL).unwrap();
    assert!(verify_potential(s.graph(), &report.types, &paper).iter().all(|x| *x));
    let N4Verdict::StablyCausal { potential } = &report.verdict else { panic!("{:?}", report.verdict) };
    assert!(verify_potential(s.graph(), &report.types, potential).iter().all(|x| *x));
    let mut broken = paper.clone();
    broken.h[0] = parse_rational("1").unwrap();
    assert!(!verify_potential(s.graph(), &report.types, &broken).iter().all(|x| *x));
}

#[test]
fn potential_forms_are_positive() {
    let s = fixtures::split(fixtures::FIGSC).unwrap();
    let st = s.spacetime().unwrap();
    let paper = fixtures::potential(fixtures::FIGSC_POTENTIAL).unwrap();
    let mut passing = Vec::new();
    for (name, z) in [("1", c(1.0, 0.0)), ("-1", c(-1.0, 0.0)), ("i", c(0.0, 1.0)), ("-i", c(0.0, -1.0))] {
        let beta = potential_form(&s, &paper, z).unwrap();
        let r = verify_time_orientation(&st, &TimeOrientationForm::new(beta), None).unwrap();
        if r.passed {
            passing.push(name);
        }
    }
    assert_eq!(passing, vec!["1"]);
    let N4Verdict::StablyCausal { potential } = n4_stable_causality(&s, None).unwrap().verdict else { panic!() };
    let beta = potential_form(&s, &potential, c(1.0, 0.0)).unwrap();
    assert!(verify_time_orientation(&st, &TimeOrientationForm::new(beta), None).unwrap().passed);
}

#[test]
fn vectorial_verdicts_follow_timelike_loops() {
    let mut r = rng(63);
    let rep = build_clifford(4).unwrap();
    for _ in 0..12 {
        let size = r.random_range(2..=5);
        let g = random_connected_graph(&mut r, size, 2);
        let gp: Vec<Operator> = (0..g.edge_count())
            .map(|_| {
                let t = if r.random_bool(0.5) { 1.0 } else { -1.0 };
                let space = if r.random_bool(0.15) { 2.0 } else { 0.3 };
                rep.vector(&[t, space * r.random_range(-1.0..1.0), 0.2, 0.0])
            })
            .collect();
        let gm: Vec<Operator> = gp.iter().map(|x| compatible_gamma_minus(&rep, &identity(4), x).unwrap()).collect();
        let s = build_split(&g, &rep, vec![identity(4); g.edge_count()], gp, gm, None).unwrap();
        let report = n4_stable_causality(&s, None).unwrap();
        assert_eq!(report.agrees_with_loop_criterion, Some(true), "{report:?}");
        if let Some(c) = &report.timelike_loop {
            assert!(matches!(report.verdict, N4Verdict::NotStablyCausal { .. }));
            assert_eq!(c.first(), c.last());
        }
    }
}

#[test]
fn mvs_comparison() {
    let (g, rep, edges) = fixtures::mvs(fixtures::MVS_FLAT).unwrap().into_parts().unwrap();
    let dt = build_mvs_dirac(&g, &rep, &edges).unwrap();
    let j = crate::linalg::kron(&identity(g.vertex_count()), rep.krein().j());
    let space = KreinSpace::new(j).unwrap();
    assert!(mismatch(&krein_adjoint(&dt, &space).unwrap(), &dt) < 1e-12);
    assert!(fro(&(&dt - dt.adjoint())) > 1e-6);
    let s = split_from_mvs(&g, &rep, &edges).unwrap();
    let report = check_commuting_diagram(&s, &dt, None).unwrap();
    assert!(report.uniform);
    let k = report.factor.unwrap();
    assert!((k[0]).abs() < 1e-12 && (k[1] - 1.0).abs() < 1e-12, "{k:?}");
    assert!(!report.matches_stated && report.inverse_holds);
    assert!(report.retraction_residual < 1e-12);
    let emb = graph_embedding(&s);
    let proj = averaging_projection(&s);
    let p = &emb * &proj;
    assert!(fro(&(&p * &p - &p)) < 1e-12);

    let (g, rep, edges) = fixtures::mvs(fixtures::MVS_NONREGULAR).unwrap().into_parts().unwrap();
    let dt = build_mvs_dirac(&g, &rep, &edges).unwrap();
    let s = split_from_mvs(&g, &rep, &edges).unwrap();
    let report = check_commuting_diagram(&s, &dt, None).unwrap();
    assert!(!report.uniform);
    let factors: Vec<[f64; 2]> = report.vertices.iter().map(|v| v.factor.unwrap()).collect();
    assert!((factors[0][1] - 2.0).abs() < 1e-12 && (factors[1][1] - 1.0).abs() < 1e-12);
    assert!(report.inverse_holds);
}

#[test]
fn mvs_edge_cases() {
    let g = WeightedDigraph::from_labels(&["a", "b"], &[("a", "b", "1")]).unwrap();
    let rep = build_clifford(2).unwrap();
    let zero = MvsEdge { gamma_target: zeros(2), gamma_source: zeros(2), hol: identity(2), length: 1.0 };
    let dt = build_mvs_dirac(&g, &rep, std::slice::from_ref(&zero)).unwrap();
    assert_eq!(fro(&dt), 0.0);
    let s = build_split(&g, &rep, vec![identity(2)], vec![zeros(2)], vec![zeros(2)], None).unwrap();
    let report = check_commuting_diagram(&s, &dt, None).unwrap();
    assert!(report.vertices.iter().all(|v| v.factor.is_none() && v.residual == 0.0));
    assert!(report.matches_stated);

    let v = rep.vector(&e0(2));
    let edge = MvsEdge { gamma_target: v.clone(), gamma_source: -v.clone(), hol: identity(2), length: 2.0 };
    let dt = build_mvs_dirac(&g, &rep, &[edge]).unwrap();
    assert!(fro(&dt.view((0, 0), (2, 2)).into_owned()) == 0.0 && fro(&dt.view((2, 2), (2, 2)).into_owned()) == 0.0);
    assert!((dt.view((2, 0), (2, 2)).into_owned() - &v * c(0.0, 0.25)).norm() < 1e-15);
    assert!(check_commuting_diagram(&s, &zeros(2), None).is_err());
    assert!(build_mvs_dirac(&g, &rep, &[]).is_err());
}

#[test]
fn degenerate_structure_is_the_reversed_canonical_spacetime() {
    let g = fixtures::graph(fixtures::FIG1).unwrap();
    let s = degenerate_split_spacetime(&g).unwrap();
    assert!(crate::spectral::verify_axioms(&s, None).unwrap().passed);
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let canonical = build_canonical_spacetime(&g.with_reversed(&all), None).unwrap();
    let p = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let mut u = zeros(2 * g.edge_count());
    for e in 0..g.edge_count() {
        u[(2 * e, 2 * e + 1)] = p;
        u[(2 * e + 1, 2 * e)] = p;
    }
    let report = unitary_equivalence_check(&s, &canonical.spacetime, &u, &[], None).unwrap();
    assert!(report.passed, "{:?}", report.violated());
}

#[test]
fn json_schema_errors_point_at_the_field() {
    let bad = fixtures::BOOST_TRIANGLE.replacen("\"5/4\"", "\"x\"", 1);
    match fixtures::split(&bad) {
        Err(Error::Schema { pointer, .. }) => assert!(pointer.starts_with("/edges/0/h"), "{pointer}"),
        other => panic!("expected a schema error, got ok = {}", other.is_ok()),
    }
    match fixtures::split(&fixtures::MIXED4.replacen("\"n\": 4", "\"n\": 3", 1)) {
        Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/n"),
        other => panic!("expected a schema error, got ok = {}", other.is_ok()),
    }
    match fixtures::split(&fixtures::MIXED4.replacen("\"axial\"", "\"axal\"", 1)) {
        Err(Error::Schema { pointer, .. }) => assert!(pointer.starts_with("/edges/2"), "{pointer}"),
        other => panic!("expected a schema error, got ok = {}", other.is_ok()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn theorem_six_passes_imply_axioms(seed in 0u64..1000, n in prop_oneof![Just(2usize), Just(4usize)]) {
        let mut r = rng(seed + 1000);
        let s = random_spin_structure(&mut r, n, 3);
        let report = verify_theorem6(&s, None).unwrap();
        prop_assert!(report.passed);
        prop_assert!(report.axioms.unwrap().passed);
    }

    #[test]
    fn projection_retracts_the_embedding(seed in 0u64..1000) {
        let mut r = rng(seed + 2000);
        let s = random_spin_structure(&mut r, 2, 4);
        let emb = graph_embedding(&s);
        let proj = averaging_projection(&s);
        prop_assert!(fro(&(&proj * &emb - identity(proj.nrows()))) < 1e-12);
    }
}
