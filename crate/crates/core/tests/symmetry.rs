use proptest::prelude::*;

use spheredesign::optimal::{basis_pattern_design, DEFAULT_RUNS};
use spheredesign::polyhedra;
use spheredesign::symmetry::{
    apply_to_design, detect_point_group_with, label_orbits, CandidateAction, PointGroupOptions,
    SymmetryOperation,
};
use spheredesign::*;

fn design_strategy(runs: usize) -> impl Strategy<Value = ExactDesign> {
    prop::collection::vec(0usize..27, runs).prop_map(ExactDesign::new)
}

fn preserves(points: &[UnitPoint3], g: &SymmetryOperation, tol: f64) -> bool {
    points.iter().all(|p| {
        let q = g.apply_point(p);
        points.iter().any(|r| r.distance_inf(&q) <= tol)
    })
}

#[test]
fn detected_operations_are_symmetries() {
    let mut mix = polyhedra::octahedron();
    mix.extend(polyhedra::cube());
    let sets = [
        polyhedra::tetrahedron(),
        polyhedra::icosahedron(),
        polyhedra::truncated_icosahedron(),
        polyhedra::dodecahedron(),
        mix,
    ];
    for pts in sets {
        let g = detect_point_group(&pts, 1e-6).unwrap();
        for op in &g.ops {
            assert!(
                preserves(&pts, op, 1e-6),
                "{} operation {op} is not a symmetry",
                g.label
            );
        }
        let distinct = g
            .ops
            .iter()
            .enumerate()
            .all(|(i, a)| g.ops[..i].iter().all(|b| a.distance(b) > 1e-6));
        assert!(distinct);
    }
}

#[test]
fn buckyball_is_icosahedral() {
    let g = detect_point_group(&polyhedra::truncated_icosahedron(), 1e-6).unwrap();
    assert_eq!(g.label.to_string(), "Ih");
    assert_eq!(g.order(), 120);
}

#[test]
fn rotated_sets_keep_their_group() {
    let r = SymmetryOperation::rotation([0.3, -0.7, 0.2], 1.234);
    let ico: Vec<UnitPoint3> = polyhedra::icosahedron()
        .iter()
        .map(|p| r.apply_point(p))
        .collect();
    assert_eq!(
        detect_point_group(&ico, 1e-6).unwrap().label.to_string(),
        "Ih"
    );
    let tet: Vec<UnitPoint3> = polyhedra::tetrahedron()
        .iter()
        .map(|p| r.apply_point(p))
        .collect();
    assert_eq!(
        detect_point_group(&tet, 1e-6).unwrap().label.to_string(),
        "Td"
    );
}

#[test]
fn pentagonal_antiprism_with_poles() {
    // 12 points: poles plus two staggered rings
    let z: f64 = 1.0 / 5f64.sqrt();
    let r = (1.0 - z * z).sqrt();
    let mut pts = vec![
        UnitPoint3::new(0.0, 0.0, 1.0).unwrap(),
        UnitPoint3::new(0.0, 0.0, -1.0).unwrap(),
    ];
    for k in 0..5 {
        let a = std::f64::consts::TAU * k as f64 / 5.0;
        let b = a + std::f64::consts::PI / 5.0;
        pts.push(UnitPoint3::new(r * a.cos(), r * a.sin(), z).unwrap());
        pts.push(UnitPoint3::new(r * b.cos(), r * b.sin(), -z).unwrap());
    }
    // this is the icosahedron in a polar orientation
    assert_eq!(
        detect_point_group(&pts, 1e-6).unwrap().label.to_string(),
        "Ih"
    );

    // move the rings off the icosahedral latitude
    let z: f64 = 0.3;
    let r = (1.0 - z * z).sqrt();
    pts.truncate(2);
    for k in 0..5 {
        let a = std::f64::consts::TAU * k as f64 / 5.0;
        let b = a + std::f64::consts::PI / 5.0;
        pts.push(UnitPoint3::new(r * a.cos(), r * a.sin(), z).unwrap());
        pts.push(UnitPoint3::new(r * b.cos(), r * b.sin(), -z).unwrap());
    }
    let g = detect_point_group(&pts, 1e-6).unwrap();
    assert_eq!(g.label.to_string(), "D5d");
    assert_eq!(g.order(), 20);
    let labels = label_orbits(&pts, &g.ops, 1e-6);
    assert_eq!(labels[..2], [1, 1]);
    assert!(labels[2..].iter().all(|&l| l == 2));
}

#[test]
fn weighted_orbits_split_by_weight() {
    let pts = polyhedra::cube();
    let w: Vec<f64> = pts
        .iter()
        .map(|p| if p.x3() > 0.0 { 0.1 } else { 0.15 })
        .collect();
    let g = detect_point_group_with(&pts, Some(&w), PointGroupOptions::default()).unwrap();
    assert_eq!(g.label.to_string(), "C4v");
    let labels = label_orbits(&pts, &g.ops, 1e-6);
    assert_eq!(
        labels
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .len(),
        2
    );
}

#[test]
fn ds_optimum_class() {
    // the two-centre D_S optimum found by the search and its orbit
    let prob = DesignProblem::ball27();
    let out = exchange_search(&prob, CriterionKind::Ds, 400, 3);
    let best: Vec<ExactDesign> = out.best(1e-9).into_iter().map(|(d, _)| d.clone()).collect();
    let act = CandidateAction::octahedral_ball27();
    let orbit = act.orbit(&best[0]);
    assert_eq!(orbit.len(), 8);
    assert_eq!(act.stabilizer(&best[0]).len(), 6);
    let v = prob.ds_criterion(&best[0]);
    for d in &orbit {
        assert!(prob.ds_criterion(d).rel_diff(&v) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbit_stabilizer(d in design_strategy(DEFAULT_RUNS)) {
        let act = CandidateAction::octahedral_ball27();
        prop_assert_eq!(act.orbit(&d).len() * act.stabilizer(&d).len(), 48);
    }

    #[test]
    fn isomorphism_is_an_equivalence(d in design_strategy(8), i in 0usize..48, j in 0usize..48) {
        let act = CandidateAction::octahedral_ball27();
        let c = CandidateSet::ball27();
        let g = act.ops()[i];
        let h = act.ops()[j];
        let e = apply_to_design(&g, &d, &c).unwrap();
        let f = apply_to_design(&h, &e, &c).unwrap();
        prop_assert!(act.isomorphism(&d, &d).is_some());
        let w = act.isomorphism(&d, &e).unwrap();
        prop_assert_eq!(apply_to_design(&w, &d, &c).unwrap(), e.clone());
        let back = w.inverse();
        prop_assert_eq!(apply_to_design(&back, &e, &c).unwrap(), d.clone());
        let w2 = act.isomorphism(&e, &f).unwrap();
        prop_assert_eq!(apply_to_design(&w2.compose(&w), &d, &c).unwrap(), f);
    }

    #[test]
    fn criteria_constant_on_orbits(d in design_strategy(DEFAULT_RUNS), i in 0usize..48) {
        let prob = DesignProblem::ball27();
        let act = CandidateAction::octahedral_ball27();
        let e = apply_to_design(&act.ops()[i], &d, prob.candidates()).unwrap();
        for kind in [CriterionKind::Ds, CriterionKind::Dps] {
            let (a, b) = (prob.criterion(kind, &d), prob.criterion(kind, &e));
            prop_assert_eq!(a.is_finite(), b.is_finite());
            if a.is_finite() {
                prop_assert!(a.rel_diff(&b) < 1e-10, "{:?}: {} vs {}", kind, a.value, b.value);
            }
        }
    }

    #[test]
    fn pattern_classes_partition(k in 0usize..9, j in 0usize..9) {
        let act = CandidateAction::rotations_ball27();
        let a = basis_pattern_design(1, &[k]);
        let b = basis_pattern_design(1, &[j]);
        prop_assert_eq!(act.isomorphism(&a, &b).is_some(), k == j);
    }
}
