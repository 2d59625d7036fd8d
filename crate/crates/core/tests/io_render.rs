use std::io::Write;

use proptest::prelude::*;

use spheredesign::design::{save_native, to_native_string};
use spheredesign::polyhedra;
use spheredesign::stereogram::{FillStyle, Primitive, LABEL_ALLOWANCE};
use spheredesign::*;

#[test]
fn sloane_file_with_one_coordinate_per_line() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for p in polyhedra::icosahedron() {
        for x in p.coords() {
            writeln!(f, "{x:.15}").unwrap();
        }
    }
    let d = load_point_file(f.path(), PointFormat::SloanePlain).unwrap();
    assert_eq!(d.len(), 12);
    assert!(check_t_design(&d, 5, 1e-9).unwrap().passed);
}

#[test]
fn graef_file_and_parse_errors() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for p in polyhedra::octahedron() {
        let [x, y, z] = p.coords();
        writeln!(f, "{x} {y} {z} 0.1666666666666667").unwrap();
    }
    let d = load_point_file(f.path(), PointFormat::GraefWeighted).unwrap();
    assert!(check_t_design(&d, 3, 1e-9).unwrap().passed);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "1 0 0 0.5\n0 1 0").unwrap();
    match load_point_file(bad.path(), PointFormat::GraefWeighted) {
        Err(Error::Parse { line, path, .. }) => {
            assert_eq!(line, 2);
            assert_eq!(path, bad.path());
        }
        other => panic!("{other:?}"),
    }
    assert!(load_point_file("/nonexistent/file", PointFormat::SloanePlain).is_err());
}

#[test]
fn native_round_trip() {
    let d = build_subset_design(&NamedDesign::EOptimal.coefficients()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eopt.txt");
    save_native(&d, &path).unwrap();
    let back = load_point_file(&path, PointFormat::Native).unwrap();
    assert_eq!(to_native_string(&back), to_native_string(&d));
    assert_eq!(back.orbit_labels(), d.orbit_labels());
    assert!((back.center_weight() - 9.0 / 17.0).abs() < 1e-15);
}

#[test]
fn svg_is_written_identically() {
    let d = build_subset_design(&NamedDesign::BoxBehnken.coefficients()).unwrap();
    let opts = RenderOptions {
        polar_net: true,
        directions: vec!["001".parse().unwrap()],
        ..RenderOptions::default()
    };
    let a = render_svg(&build_scene(&d, &opts).unwrap(), &opts);
    let b = render_svg(&build_scene(&d, &opts).unwrap(), &opts);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains(">[001]</text>"));
    assert_eq!(text.matches("<polyline").count(), 12);
}

fn unit_point() -> impl Strategy<Value = UnitPoint3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(a, b, c)| a * a + b * b + c * c > 1e-3)
        .prop_map(|(a, b, c)| UnitPoint3::from_vector([a, b, c]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marks_follow_hemispheres_and_weights(
        pts in prop::collection::vec(unit_point(), 2..16),
        raw in prop::collection::vec(0.05..1.0f64, 16),
    ) {
        let n = pts.len();
        let total: f64 = raw[..n].iter().sum();
        let w: Vec<f64> = raw[..n].iter().map(|x| x / total).collect();
        let Ok(d) = SphericalDesign::weighted(pts, w.clone(), 0.0) else {
            return Ok(());
        };
        let opts = RenderOptions { weight_areas: true, polar_net: true, ..RenderOptions::default() };
        let scene = build_scene(&d, &opts).unwrap();
        let mut radii = Vec::new();
        for (p, mark) in d.points().iter().zip(scene.points()) {
            let Primitive::PointMark { point, fill, radius_px, .. } = mark else {
                panic!("expected a mark");
            };
            prop_assert_eq!(*fill, FillStyle::of(p.hemisphere()));
            prop_assert!(point.radius() <= 1.0 + 1e-12);
            radii.push(*radius_px);
        }
        for i in 0..n {
            for j in 0..n {
                let want = (w[i] / w[j]).sqrt();
                prop_assert!((radii[i] / radii[j] - want).abs() <= 1e-9 * want);
            }
        }
        for p in scene.primitives() {
            if let Primitive::Label { anchor, .. } = p {
                prop_assert!(anchor.0.hypot(anchor.1) <= 1.0 + LABEL_ALLOWANCE);
            }
        }
    }
}
