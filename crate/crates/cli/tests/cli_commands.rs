use std::path::Path;
use std::process::{Command, Output};

use fairkit::aesthetics::{ScoreSheet, CRITERIA_COUNT};
use fairkit::geom::{CurveSpec, Dim, Vec3, DEFAULT_JOIN_TOLERANCE};
use fairkit::hermite::HermiteData;
use fairkit::spirals::{SpiralFamily, SpiralSpec};
use fairkit::surfaudit::SurfacePatch;
use fairkit_cli::document::{curve_entity, parse_document, serialize_document, Diagnostic, Document, Entity, Payload};
use proptest::prelude::*;
use serde_json::Value;

const DOC: &str = r#"{
  "format": "fairkit/1",
  "entities": [
    {"id": "h", "kind": "hermite", "p0": [0, 0], "p1": [4, 0], "d0": [0.6, 0.8], "d1": [0.6, -0.8]},
    {"id": "arch", "kind": "bezier", "points": [[0, 0], [1, 1.3333333333333333], [3, 1.3333333333333333], [4, 0]]},
    {"id": "cl", "kind": "spiral", "family": "clothoid", "scale": 1, "s0": 0.5, "s1": 2},
    {"id": "a", "kind": "patch", "points": [[[0, 0, 0], [0, 1, 0], [0, 2, 0]], [[1, 0, 0.2], [1, 1, 0.3], [1, 2, 0.1]], [[2, 0, 0], [2, 1, 0.1], [2, 2, 0]]]},
    {"id": "b", "kind": "patch", "points": [[[2, 0, 0], [2, 1, 0.1], [2, 2, 0]], [[3, 0, -0.2], [3, 1, -0.1], [3, 2, -0.2]], [[4, 0, 0], [4, 1, 0], [4, 2, 0]]]}
  ]
}
"#;

fn fairkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairkit")).current_dir(dir).args(args).output().unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("doc.json"), DOC).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_reports_every_curve_in_id_order() {
    let dir = setup();
    let out = fairkit(dir.path(), &["analyze", "doc.json", "--json", "-", "--csv", "comb.csv", "--svg", "comb.svg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ids: Vec<&str> = v["curves"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["arch", "cl"]);
    assert_eq!(v["curves"][1]["report"]["extrema_count"], 0);
    let csv = std::fs::read_to_string(dir.path().join("comb.csv")).unwrap();
    assert!(csv.starts_with("id,s,t,x,y,z,kappa,comb_x,comb_y,comb_z\n"));
    assert!(std::fs::read_to_string(dir.path().join("comb.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn compare_ranks_generated_candidates() {
    let dir = setup();
    let out = fairkit(dir.path(), &["compare", "doc.json", "--hermite", "h", "arch", "--candidates", "cubic,quintic", "--json", "-"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mut ranking: Vec<&str> = v["result"]["ranking"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    ranking.sort();
    assert_eq!(ranking, ["arch", "cubic", "quintic"]);
}

#[test]
fn compare_refuses_mismatched_data_unless_overridden() {
    let dir = setup();
    let out = fairkit(dir.path(), &["compare", "doc.json", "--hermite", "h", "cl"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CommonDataViolation"));
    let out = fairkit(dir.path(), &["compare", "doc.json", "--hermite", "h", "cl", "--override-common-data"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("overridden"));
}

#[test]
fn generate_appends_a_spiral() {
    let dir = setup();
    let out = fairkit(dir.path(), &["generate", "doc.json", "lac", "log_aesthetic:alpha=2,c0=1,c1=0.5,s0=0,s1=1,theta0=0.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = parse_document(&std::fs::read_to_string(dir.path().join("doc.json")).unwrap()).unwrap();
    assert_eq!(doc.get("lac").unwrap().payload.kind(), "spiral");
    let out = fairkit(dir.path(), &["lcg", "doc.json", "lac", "--json", "-"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["fit"]["slope"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn generate_creates_a_missing_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = fairkit(dir.path(), &["generate", "new.json", "s", "superspiral:a=0.5,b=1,c=2,kappa0=1,s0=0,s1=2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("new.json")).unwrap();
    assert_eq!(parse_document(&text).unwrap().entities.len(), 1);
}

#[test]
fn lcg_writes_csv() {
    let dir = setup();
    let out = fairkit(dir.path(), &["lcg", "doc.json", "cl", "--csv", "lcg.csv", "--samples", "50"]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("lcg.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
    assert_eq!(csv.lines().next(), Some("s,kappa,x_log_rho,y_log_measure"));
}

#[test]
fn zebra_audits_the_patch_joint() {
    let dir = setup();
    let out = fairkit(dir.path(), &["zebra", "doc.json", "--a", "a", "--b", "b", "--view", "0,-1,1", "--stations", "9", "--csv", "z.csv", "--json", "-"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["audit"]["stations"].as_array().unwrap().len(), 9);
    assert_eq!(std::fs::read_to_string(dir.path().join("z.csv")).unwrap().lines().count(), 10);
}

#[test]
fn elastica_beats_the_cubic() {
    let dir = setup();
    let out = fairkit(dir.path(), &["elastica", "doc.json", "--hermite", "h", "--nodes", "24", "--json", "-"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["fit"]["energy"].as_f64().unwrap() <= v["cubic_energy"].as_f64().unwrap());
    assert_eq!(v["fit"]["polyline"].as_array().unwrap().len(), 24);
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = setup();
    for args in [
        vec!["analyze", "doc.json", "nope"],
        vec!["analyze", "missing.json"],
        vec!["lcg", "doc.json", "h"],
        vec!["ravf", "doc.json", "--svg", "x.svg"],
        vec!["zebra", "doc.json", "--a", "a", "--b", "b", "--edge-a", "w1"],
        vec!["compare", "doc.json", "--hermite", "h", "--candidates", "septic"],
        vec!["generate", "doc.json", "x", "clothoid:scale=1"],
        vec!["bogus"],
    ] {
        assert_eq!(fairkit(dir.path(), &args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn document_errors_exit_with_1_and_list_every_problem() {
    let dir = tempfile::tempdir().unwrap();
    let bad = r#"{"format": "fairkit/1", "entities": [
        {"id": "x", "kind": "bezier", "points": [[0, 0], [1, "a"]]},
        {"id": "y", "kind": "blob"}]}"#;
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = fairkit(dir.path(), &["analyze", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("points[1][1]") && err.contains("blob"), "{err}");
}

#[test]
fn selftest_passes_with_fixed_seed() {
    let out = Command::new(env!("CARGO_BIN_EXE_fairkit")).args(["selftest", "--count", "4"]).env("FAIRKIT_SEED", "3").output().unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(stdout(&out).matches("PASS").count(), 4);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = setup();
    for args in [
        vec!["analyze", "doc.json", "--json", "r.json", "--csv", "r.csv", "--svg", "r.svg"],
        vec!["zebra", "doc.json", "--a", "a", "--b", "b", "--json", "r.json", "--csv", "r.csv", "--svg", "r.svg"],
    ] {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let out = fairkit(dir.path(), &args);
            assert!(out.status.success());
            let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
            runs.push((out.stdout, read("r.json"), read("r.csv"), read("r.svg")));
        }
        assert_eq!(runs[0], runs[1], "{args:?}");
    }
}

#[test]
fn duplicate_ids_are_rejected() {
    let text = r#"{"format": "fairkit/1", "entities": [
        {"id": "p", "kind": "polyline", "points": [[0, 0], [1, 0]]},
        {"id": "p", "kind": "polyline", "points": [[0, 0], [2, 0]]}]}"#;
    let err = parse_document(text).unwrap_err();
    assert!(err.diagnostics.iter().any(|d| matches!(d, Diagnostic::DuplicateId { id } if id == "p")));
}

fn round_trips(doc: &Document) -> Result<(), TestCaseError> {
    let first = serialize_document(doc);
    let parsed = parse_document(&first).map_err(|e| TestCaseError::fail(format!("{e}\n{first}")))?;
    prop_assert_eq!(&serialize_document(&parsed), &first);
    Ok(())
}

fn single(id: &str, spec: CurveSpec) -> Option<Document> {
    let mut doc = Document::default();
    doc.push(curve_entity(id, spec, DEFAULT_JOIN_TOLERANCE).ok()?).ok()?;
    Some(doc)
}

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3f64..1e3, -1.0f64..1.0, (-1e-6f64..1e-6)]
}

fn planar_points(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec3>> {
    prop::collection::vec((coord(), coord()), n).prop_map(|v| v.into_iter().map(|(x, y)| Vec3::xy(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bezier_round_trip(points in planar_points(2..7), w in prop::option::of(prop::collection::vec(0.1f64..5.0, 7))) {
        let weights = w.map(|w| w[..points.len()].to_vec());
        if let Some(doc) = single("c", CurveSpec::Bezier { dim: Dim::Two, points, weights }) {
            round_trips(&doc)?;
        }
    }

    #[test]
    fn spatial_polyline_round_trip(p in prop::collection::vec((coord(), coord(), coord()), 2..10)) {
        let points = p.into_iter().map(|(x, y, z)| Vec3::new(x, y, z)).collect();
        if let Some(doc) = single("poly", CurveSpec::Polyline { dim: Dim::Three, points }) {
            round_trips(&doc)?;
        }
    }

    #[test]
    fn bspline_round_trip(points in planar_points(4..9), cut in 0.05f64..0.95) {
        let n = points.len();
        let mut knots = vec![0.0; 4];
        for i in 1..n - 3 {
            knots.push(cut * i as f64 / (n - 3) as f64);
        }
        knots.extend([1.0; 4]);
        if let Some(doc) = single("s", CurveSpec::BSpline { dim: Dim::Two, degree: 3, knots, points, weights: None }) {
            round_trips(&doc)?;
        }
    }

    #[test]
    fn piecewise_round_trip(a in planar_points(2..5), b in planar_points(2..5)) {
        let mut b = b;
        b[0] = *a.last().unwrap();
        let segs = vec![
            CurveSpec::Bezier { dim: Dim::Two, points: a, weights: None },
            CurveSpec::Polyline { dim: Dim::Two, points: b },
        ];
        if let Some(doc) = single("pw", CurveSpec::Piecewise { segments: segs }) {
            round_trips(&doc)?;
        }
    }

    #[test]
    fn spiral_round_trip(
        kind in 0usize..3, p in 0.3f64..2.0, q in 0.1f64..1.0, s1 in 0.2f64..1.5,
        ox in coord(), oy in coord(), theta0 in -3.0f64..3.0,
    ) {
        let family = match kind {
            0 => SpiralFamily::Clothoid { scale: p },
            1 => SpiralFamily::LogAesthetic { alpha: p - 1.0, c0: 1.0, c1: q },
            _ => SpiralFamily::Superspiral { a: p, b: q, c: q + p, kappa0: 1.0 + q },
        };
        let spec = SpiralSpec { family, s0: 0.0, s1, origin: (ox, oy), theta0 };
        if let Some(doc) = single("sp", CurveSpec::Spiral(spec)) {
            round_trips(&doc)?;
        }
    }

    #[test]
    fn hermite_patch_scores_round_trip(
        p in planar_points(2..3), a0 in -3.0f64..3.0, a1 in -3.0f64..3.0,
        k in prop::option::of(coord()),
        z in prop::collection::vec(coord(), 12),
        scores in prop::array::uniform11(-3i32..=3),
        rater in "[a-z]{1,8}",
    ) {
        let mut doc = Document::default();
        let h = HermiteData::new(Dim::Two, p[0], p[1] + Vec3::xy(5e3, 0.0), Vec3::from_angle(a0), Vec3::from_angle(a1), k, None).unwrap();
        doc.push(Entity { id: "h".into(), payload: Payload::Hermite(h) }).unwrap();
        let net = (0..3).map(|i| (0..4).map(|j| Vec3::new(i as f64, j as f64, z[4 * i + j])).collect()).collect();
        doc.push(Entity { id: "patch".into(), payload: Payload::Patch(SurfacePatch::new(net, None).unwrap()) }).unwrap();
        let sheet = ScoreSheet { rater, subject: "h".into(), scores };
        prop_assert_eq!(sheet.scores.len(), CRITERIA_COUNT);
        doc.push(Entity { id: "sheet".into(), payload: Payload::Scores(sheet) }).unwrap();
        round_trips(&doc)?;
    }
}
