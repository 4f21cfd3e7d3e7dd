//! Seeded consistency checks over random fixtures.

use fairkit::aesthetics::{ravf, ScoreSheet, CRITERIA_COUNT};
use fairkit::diffgeom::curvature;
use fairkit::fairness::find_curvature_extrema;
use fairkit::geom::{Curve, CurveSpec, Dim, ParametricCurve, Vec3};
use fairkit::hermite::HermiteData;
use fairkit::spirals::{SpiralFamily, SpiralSpec};
use fairkit::surfaudit::{audit_joint, AuditTolerances, BoundarySpec, SurfacePatch, Verdict, DEFAULT_STATIONS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::Output;
use crate::document::{curve_entity, parse_document, serialize_document, Document, Entity, Payload};

const ORACLE_SAMPLES: usize = 100_000;

struct Check {
    name: &'static str,
    passed: usize,
    total: usize,
    first_failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, passed: 0, total: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(detail());
        }
    }

    fn ok(&self) -> bool {
        self.passed == self.total
    }
}

pub fn random_bezier(rng: &mut impl Rng, degree: usize) -> Curve {
    let pts = (0..=degree).map(|i| Vec3::xy(i as f64 + rng.gen_range(-0.4..0.4), rng.gen_range(-1.5..1.5))).collect();
    Curve::bezier(pts, Dim::Two).expect("random control points are distinct")
}

/// Interior extrema of sampled signed curvature.
pub fn sampled_extrema(c: &Curve, n: usize) -> usize {
    let (lo, hi) = c.domain();
    let k: Vec<f64> = (0..=n).map(|i| curvature(c, lo + (hi - lo) * i as f64 / n as f64).unwrap_or(f64::NAN)).collect();
    let mut last = 0i8;
    let mut count = 0;
    for w in k.windows(2) {
        let d = w[1] - w[0];
        let s = if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn random_height_patch(rng: &mut impl Rng) -> SurfacePatch {
    let net = (0..4)
        .map(|i| (0..4).map(|j| Vec3::new(i as f64 / 3.0, j as f64 / 3.0, rng.gen_range(-0.3..0.3))).collect())
        .collect();
    SurfacePatch::new(net, None).expect("height field is regular")
}

fn random_sheet(rng: &mut impl Rng) -> ScoreSheet {
    let mut scores = [0i32; CRITERIA_COUNT];
    for s in scores.iter_mut() {
        *s = rng.gen_range(-3..=3);
    }
    ScoreSheet { rater: "r".into(), subject: "s".into(), scores }
}

fn random_document(rng: &mut impl Rng) -> Document {
    let mut doc = Document::default();
    let mut r = || rng.gen_range(-1.0..1.0f64) * 10f64.powi(rng.gen_range(-3..4));
    let pts: Vec<Vec3> = (0..4).map(|i| Vec3::xy(i as f64 + 0.1 * r(), r())).collect();
    let spec = CurveSpec::Bezier { dim: Dim::Two, points: pts, weights: None };
    doc.push(curve_entity("b", spec, doc.join_tolerance()).expect("bezier")).expect("fresh id");
    let a = 0.5 + r().abs().min(4.5);
    let spiral = SpiralSpec {
        family: SpiralFamily::Clothoid { scale: a },
        s0: 0.0,
        s1: 1.0 + r().abs().min(3.0),
        origin: (r(), r()),
        theta0: r().clamp(-3.0, 3.0),
    };
    doc.push(curve_entity("c", CurveSpec::Spiral(spiral), doc.join_tolerance()).expect("clothoid")).expect("fresh id");
    let h = HermiteData::new(
        Dim::Two,
        Vec3::xy(r(), r()),
        Vec3::xy(r() + 20.0, r()),
        Vec3::from_angle(r().clamp(-1.0, 1.0)),
        Vec3::from_angle(r().clamp(-1.0, 1.0)),
        None,
        None,
    )
    .expect("unit tangents");
    doc.push(Entity { id: "h".into(), payload: Payload::Hermite(h) }).expect("fresh id");
    doc
}

/// Runs `count` fixtures per check from `seed`.
pub fn selftest(count: usize, seed: u64) -> Output {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut extrema = Check::new("curvature extrema agree with dense sampling");
    for i in 0..count {
        let c = random_bezier(&mut rng, if i % 2 == 0 { 3 } else { 5 });
        let found = find_curvature_extrema(&c, fairkit::fairness::DEFAULT_ROOT_TOL).map(|e| e.len());
        let oracle = sampled_extrema(&c, ORACLE_SAMPLES);
        extrema.record(found.as_ref().ok() == Some(&oracle), || format!("fixture {i}: found {found:?}, sampled {oracle}"));
    }
    checks.push(extrema);

    let mut subdivision = Check::new("subdivided patches meet with G2");
    for i in 0..count {
        let p = random_height_patch(&mut rng);
        let t = rng.gen_range(0.2..0.8);
        let verdict = p
            .split_u(t)
            .map_err(|e| e.to_string())
            .and_then(|(a, b)| {
                audit_joint(&a, &b, BoundarySpec::default(), Vec3::new(1.0, 1.0, 1.0), DEFAULT_STATIONS, &AuditTolerances::default())
                    .map_err(|e| e.to_string())
            })
            .map(|a| a.verdict);
        subdivision.record(verdict == Ok(Verdict::G2), || format!("fixture {i}: {verdict:?}"));
    }
    checks.push(subdivision);

    let mut antisym = Check::new("RAVF of negated scores is negated");
    for i in 0..count {
        let s = random_sheet(&mut rng);
        let (a, b) = (ravf(&s), ravf(&s.negated()));
        antisym.record(a == -b, || format!("fixture {i}: {a} vs {b}"));
    }
    checks.push(antisym);

    let mut round_trip = Check::new("documents survive serialize and parse");
    for i in 0..count {
        let doc = random_document(&mut rng);
        let text = serialize_document(&doc);
        let again = parse_document(&text).map(|d| serialize_document(&d));
        round_trip.record(again.as_deref() == Ok(text.as_str()), || format!("fixture {i}: {again:?}"));
    }
    checks.push(round_trip);

    let mut human = format!("selftest seed {seed}, {count} fixtures per check\n");
    let mut results = Vec::new();
    for c in &checks {
        human.push_str(&format!("{} {} ({}/{})\n", if c.ok() { "PASS" } else { "FAIL" }, c.name, c.passed, c.total));
        if let Some(f) = &c.first_failure {
            human.push_str(&format!("  first failure: {f}\n"));
        }
        results.push(json!({"check": c.name, "passed": c.passed, "total": c.total, "ok": c.ok(), "first_failure": c.first_failure}));
    }
    Output {
        human,
        machine: json!({"command": "selftest", "seed": seed, "count": count, "checks": results}),
        failed: checks.iter().any(|c| !c.ok()),
        ..Default::default()
    }
}
