use std::f64::consts::PI;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{rngs::StdRng, SeedableRng};
use sphtile::canonical::*;
use sphtile::catalog::*;
use sphtile::geometry::representative_angles;
use sphtile::io::{from_json, to_json, TilingDocument, SCHEMA};
use sphtile::mesh::*;
use sphtile::vertex::{Corner, VertexType};
use sphtile::Error;

fn vt(s: &str) -> VertexType {
    s.parse().unwrap()
}

fn catalog(max_c: u32) -> Vec<FamilyId> {
    let mut ids = vec![
        FamilyId::Cube,
        FamilyId::Fusion1,
        FamilyId::Fusion2,
        FamilyId::QuadSubdivision,
        FamilyId::Sporadic1,
        FamilyId::Sporadic2,
    ];
    ids.extend((2..=max_c).map(FamilyId::EarthMap));
    ids
}

#[test]
fn every_builder_verifies() {
    for id in catalog(10) {
        let t = build(&id).unwrap();
        let a = representative_angles(&id).unwrap();
        let report = verify(&t, &a);
        assert!(report.all_passed(), "{id}:\n{report}");
        assert!(t.stats().is_consistent(), "{id}");
        // total area from the angle values alone
        let s = t.stats();
        let area = s.n_square as f64 * a.square_area() + s.n_rhombus as f64 * a.rhombus_area();
        assert!((area - 4.0 * PI).abs() < 1e-9, "{id}: area {area}");
    }
}

#[test]
fn tile_counts() {
    let expect = |id: &FamilyId| match id {
        FamilyId::Cube => (2, 4),
        FamilyId::Fusion1 | FamilyId::Fusion2 => (6, 16),
        FamilyId::QuadSubdivision => (6, 24),
        FamilyId::Sporadic1 | FamilyId::Sporadic2 => (10, 4),
        FamilyId::EarthMap(c) => (2, 4 * (2 * c - 1)),
    };
    for id in catalog(10) {
        let t = build(&id).unwrap();
        let (s, r) = expect(&id);
        assert_eq!(t.count_kind(FaceKind::Square) as u32, s, "{id}");
        assert_eq!(t.count_kind(FaceKind::Rhombus) as u32, r, "{id}");
        assert_eq!(id.tile_counts(), (s, r));
        assert_eq!(id.face_count(), s + r);
    }
}

#[test]
fn realized_vertex_sets() {
    let cases: Vec<(FamilyId, Vec<&str>)> = vec![
        (FamilyId::Cube, vec!["a b c"]),
        (FamilyId::Fusion1, vec!["a b^2", "a b c^2"]),
        (FamilyId::Fusion2, vec!["a b^2", "a b c^2"]),
        (FamilyId::QuadSubdivision, vec!["b^3", "a b c^2"]),
        (FamilyId::Sporadic1, vec!["a^2 b", "a^3 c"]),
        (FamilyId::Sporadic2, vec!["a^2 b", "a^3 c"]),
    ];
    for (id, want) in cases {
        let t = build(&id).unwrap();
        let got: Vec<VertexType> = realized_avc(&t).entries.into_iter().collect();
        let mut want: Vec<VertexType> = want.iter().map(|s| vt(s)).collect();
        want.sort();
        assert_eq!(got, want, "{id}");
    }
    for c in 2..=10 {
        let t = build(&FamilyId::EarthMap(c)).unwrap();
        let got: Vec<VertexType> = realized_avc(&t).entries.into_iter().collect();
        let mut want = vec![vt("b^2 c"), VertexType::new(1, 1, c)];
        want.sort();
        assert_eq!(got, want, "c = {c}");
    }
}

#[test]
fn fusion_vertex_multiplicities() {
    for id in [FamilyId::Fusion1, FamilyId::Fusion2] {
        let m = build(&id).unwrap().vertex_multiplicities();
        assert_eq!(m[&vt("a b c^2")], 16, "{id}");
        assert_eq!(m[&vt("a b^2")], 8, "{id}");
    }
}

#[test]
fn timezone_strip_shape() {
    for c in 2..=6 {
        let s = timezone_strip(c).unwrap();
        assert_eq!(s.faces.len() as u32, 2 * c - 1);
    }
    assert!(timezone_strip(1).is_err());
}

#[test]
fn family_ids_round_trip() {
    for id in catalog(4) {
        assert_eq!(id.to_string().parse::<FamilyId>().unwrap(), id);
    }
    for bad in ["earth-map:1", "earth-map:x", "fusion:3", "dodecahedron"] {
        assert!(bad.parse::<FamilyId>().is_err(), "{bad}");
    }
}

#[test]
fn fusion_tilings_are_distinct() {
    let f1 = build(&FamilyId::Fusion1).unwrap();
    let f2 = build(&FamilyId::Fusion2).unwrap();
    assert!(!is_isomorphic(&f1, &f2, true));
    assert!(!is_isomorphic(&f1, &f2, false));
    assert_ne!(canonical_code(&f1), canonical_code(&f2));
}

#[test]
fn alternative_grouping_is_the_same_tiling() {
    let a = triangular_fusion(&FUSION_1).unwrap();
    let b = triangular_fusion(&FUSION_1_ALT).unwrap();
    assert_ne!(FUSION_1.to_vec(), FUSION_1_ALT.to_vec());
    assert!(is_isomorphic(&a, &b, true));
    assert_eq!(canonical_code(&a), canonical_code(&b));
}

#[test]
fn snub_cube_matchings_fall_into_two_classes() {
    let matchings = snub_cube_fusions();
    assert_eq!(matchings.len(), 9);
    let mut classes: Vec<(Vec<u8>, usize)> = Vec::new();
    for m in &matchings {
        let code = canonical_code(&triangular_fusion(m).unwrap());
        match classes.iter_mut().find(|(c, _)| *c == code) {
            Some((_, n)) => *n += 1,
            None => classes.push((code, 1)),
        }
    }
    let mut sizes: Vec<usize> = classes.iter().map(|c| c.1).collect();
    sizes.sort();
    assert_eq!(sizes, vec![3, 6]);
    let f1 = canonical_code(&build(&FamilyId::Fusion1).unwrap());
    let f2 = canonical_code(&build(&FamilyId::Fusion2).unwrap());
    assert!(classes.iter().any(|(c, n)| *c == f1 && *n == 3));
    assert!(classes.iter().any(|(c, n)| *c == f2 && *n == 6));
}

#[test]
fn chirality() {
    for id in catalog(4) {
        let t = build(&id).unwrap();
        let m = t.mirrored();
        assert_eq!(canonical_code(&t), canonical_code(&m), "{id}");
        assert_eq!(
            is_chiral(&t),
            oriented_code(&t) != oriented_code(&m),
            "{id}"
        );
    }
    assert!(!is_chiral(&build(&FamilyId::Sporadic1).unwrap()));
}

#[test]
fn canonical_form_is_stable() {
    for id in catalog(4) {
        let t = build(&id).unwrap();
        let c = canonical_form(&t);
        assert_eq!(canonical_code(&c), canonical_code(&t), "{id}");
        assert_eq!(canonical_form(&c), c, "{id}");
        assert_eq!(canonical_form(&t.mirrored()), c, "{id}");
    }
}

/// Renumbers half-edges, faces and vertices by random permutations.
fn relabel(t: &Tiling, seed: u64) -> Tiling {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut ph: Vec<usize> = (0..t.half_edges().len()).collect();
    let mut pf: Vec<usize> = (0..t.face_count()).collect();
    let mut pv: Vec<usize> = (0..t.vertex_count()).collect();
    ph.shuffle(&mut rng);
    pf.shuffle(&mut rng);
    pv.shuffle(&mut rng);
    let mut hes = vec![*t.half_edge(0); ph.len()];
    for (h, he) in t.half_edges().iter().enumerate() {
        hes[ph[h]] = HalfEdge {
            twin: ph[he.twin],
            next: ph[he.next],
            face: pf[he.face],
            origin: pv[he.origin],
            corner: he.corner,
        };
    }
    let mut faces = vec![t.faces()[0]; pf.len()];
    for (f, face) in t.faces().iter().enumerate() {
        faces[pf[f]] = Face {
            kind: face.kind,
            half_edge: ph[face.half_edge],
        };
    }
    Tiling::from_parts(hes, faces, t.vertex_count()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_code_ignores_numbering(which in 0usize..9, seed in any::<u64>()) {
        let t = build(&catalog(4)[which]).unwrap();
        let r = relabel(&t, seed);
        prop_assert_eq!(canonical_code(&r), canonical_code(&t));
        prop_assert!(is_isomorphic(&t, &r, false));
        prop_assert_eq!(canonical_form(&r), canonical_form(&t));
    }

    #[test]
    fn json_round_trip_after_relabel(which in 0usize..9, seed in any::<u64>()) {
        let t = relabel(&build(&catalog(4)[which]).unwrap(), seed);
        let back = from_json(&to_json(&t)).unwrap();
        prop_assert_eq!(back, t);
    }
}

fn doc(id: FamilyId) -> TilingDocument {
    TilingDocument::from_tiling(&build(&id).unwrap())
}

fn load(d: &TilingDocument) -> Result<Tiling, Error> {
    from_json(&serde_json::to_string(d).unwrap())
}

#[test]
fn corrupted_documents() {
    let mut d = doc(FamilyId::Sporadic2);
    d.schema = "sphtile-tiling/0".into();
    assert!(matches!(load(&d), Err(Error::Document(_))));

    let mut d = doc(FamilyId::Sporadic2);
    d.twins.pop();
    assert!(matches!(load(&d), Err(Error::Document(_))));

    // twin pair joining half-edges whose endpoints do not match
    let mut d = doc(FamilyId::Sporadic2);
    let (a, b) = (d.twins[0], d.twins[1]);
    d.twins[0] = [a[0], b[1]];
    d.twins[1] = [b[0], a[1]];
    assert!(matches!(load(&d), Err(Error::Structural(_))));

    let mut d = doc(FamilyId::Sporadic2);
    d.faces[0].vertices[1] = d.vertex_count + 5;
    assert!(load(&d).is_err());

    let mut d = doc(FamilyId::Cube);
    d.faces[0].half_edges[0] = 10_000;
    assert!(matches!(load(&d), Err(Error::Document(_))));

    let text = serde_json::to_string(&doc(FamilyId::Cube)).unwrap();
    let extra = text.replacen("\"schema\"", "\"colour\":\"red\",\"schema\"", 1);
    assert!(matches!(from_json(&extra), Err(Error::Json(_))));
    assert!(matches!(from_json("{"), Err(Error::Json(_))));
    assert_eq!(doc(FamilyId::Cube).schema, SCHEMA);
}

#[test]
fn relabeled_corner_fails_verification() {
    let mut d = doc(FamilyId::Fusion2);
    let f = d
        .faces
        .iter()
        .position(|r| r.kind == FaceKind::Rhombus)
        .unwrap();
    d.faces[f].corners[0] = Corner::Alpha;
    let t = load(&d).unwrap();
    let a = representative_angles(&FamilyId::Fusion2).unwrap();
    let report = verify(&t, &a);
    assert!(!report.all_passed());
    assert!(!report.check("corner_labels").unwrap().passed);
}

#[test]
fn wrong_angles_fail_verification() {
    let t = build(&FamilyId::Sporadic1).unwrap();
    let a = representative_angles(&FamilyId::Fusion1).unwrap();
    let report = verify(&t, &a);
    assert!(!report.check("vertex_angle_sums").unwrap().passed);
    assert!(!report.check("total_area").unwrap().passed);
    assert!(report.check("euler").unwrap().passed);
}

#[test]
fn structural_rejections() {
    // two squares glued along all four edges: every vertex has degree 2
    let faces = [
        FaceSpec::square([0, 1, 2, 3]),
        FaceSpec::square([3, 2, 1, 0]),
    ];
    assert!(matches!(
        Tiling::from_faces(&faces),
        Err(StructuralError::LowDegree { .. })
    ));
    // one face alone
    assert!(Tiling::from_faces(&[FaceSpec::square([0, 1, 2, 3])]).is_err());
    // repeated vertex inside a face
    let mut faces: Vec<FaceSpec> = build(&FamilyId::Cube).unwrap().face_specs();
    faces[0].vertices[2] = faces[0].vertices[0];
    assert!(Tiling::from_faces(&faces).is_err());
    // inconsistent orientation
    let mut faces: Vec<FaceSpec> = build(&FamilyId::Cube).unwrap().face_specs();
    faces[1] = faces[1].reversed();
    assert!(Tiling::from_faces(&faces).is_err());
}
