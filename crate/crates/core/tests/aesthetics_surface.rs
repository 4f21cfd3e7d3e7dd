use fairkit::aesthetics::{aggregate, ravf, validate_sheet, Criterion, ScoreSheet, CRITERIA_COUNT};
use fairkit::geom::{SimilarityTransform, Vec3};
use fairkit::surfaudit::{audit_joint, AuditTolerances, BoundarySpec, SurfacePatch, Verdict, DEFAULT_STATIONS};
use proptest::prelude::*;

fn sheet(scores: [i32; CRITERIA_COUNT]) -> ScoreSheet {
    ScoreSheet { rater: "r".into(), subject: "c".into(), scores }
}

/// Nearest integer to the mean, by float rounding. An odd count of
/// integers never averages to an exact half, so this is exact here.
fn rounded_mean(scores: &[i32]) -> i32 {
    (scores.iter().sum::<i32>() as f64 / scores.len() as f64).round() as i32
}

fn arb_scores() -> impl Strategy<Value = [i32; CRITERIA_COUNT]> {
    prop::array::uniform11(-3i32..=3)
}

/// Bicubic height field over the unit square scaled by `w`.
fn height_patch(z: &[f64], w: f64) -> SurfacePatch {
    let net = (0..4)
        .map(|i| (0..4).map(|j| Vec3::new(w * i as f64 / 3.0, w * j as f64 / 3.0, z[4 * i + j])).collect())
        .collect();
    SurfacePatch::new(net, None).unwrap()
}

/// Moves the third row of `p` off its plane, which keeps position and
/// tangent plane along `u = 0` but changes curvature across it.
fn bend(p: &SurfacePatch, dz: f64) -> SurfacePatch {
    let mut net = p.points().to_vec();
    for q in net[2].iter_mut() {
        q.z += dz;
    }
    SurfacePatch::new(net, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ravf_is_the_rounded_mean(s in arb_scores()) {
        let r = ravf(&sheet(s));
        prop_assert_eq!(r, rounded_mean(&s));
        prop_assert!((-3..=3).contains(&r));
        prop_assert_eq!(ravf(&sheet(s).negated()), -r);
    }

    #[test]
    fn raising_a_score_never_lowers_ravf(s in arb_scores(), k in 0usize..CRITERIA_COUNT) {
        prop_assume!(s[k] < 3);
        let mut up = s;
        up[k] += 1;
        prop_assert!(ravf(&sheet(up)) >= ravf(&sheet(s)));
    }

    #[test]
    fn single_sheet_aggregate_matches_ravf(s in arb_scores()) {
        let a = aggregate(&[sheet(s)]).unwrap();
        prop_assert_eq!(a.ravf, ravf(&sheet(s)));
        prop_assert_eq!(a.raters, 1);
        for (m, v) in a.criterion_means.iter().zip(s) {
            prop_assert_eq!(*m, v as f64);
        }
    }

    #[test]
    fn aggregate_rounds_the_pooled_mean(sheets in prop::collection::vec(arb_scores(), 1..6)) {
        let all: Vec<ScoreSheet> = sheets.iter().map(|s| sheet(*s)).collect();
        let pooled: Vec<i32> = sheets.iter().flatten().copied().collect();
        let a = aggregate(&all).unwrap();
        // 11 m scores can average to an exact half only for even m
        let exact = pooled.iter().sum::<i32>() as f64 / pooled.len() as f64;
        prop_assert!((a.ravf as f64 - exact).abs() <= 0.5);
        if (exact.fract().abs() - 0.5).abs() > 1e-9 {
            prop_assert_eq!(a.ravf, exact.round() as i32);
        } else {
            prop_assert_eq!(a.ravf as f64, exact + 0.5 * exact.signum());
        }
    }

    #[test]
    fn validated_sheet_keeps_scores(s in arb_scores()) {
        let raw: Vec<(String, f64)> = Criterion::ALL.iter().zip(s).map(|(c, v)| (c.name().to_string(), v as f64)).collect();
        let parsed = validate_sheet("a", "b", &raw).unwrap();
        prop_assert_eq!(parsed.scores, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdivision_joints_are_g2(z in prop::collection::vec(-0.5f64..0.5, 16), t in 0.2f64..0.8) {
        let (a, b) = height_patch(&z, 1.0).split_u(t).unwrap();
        let audit = audit_joint(&a, &b, BoundarySpec::default(), Vec3::new(0.3, 0.2, 1.0), DEFAULT_STATIONS, &AuditTolerances::default())
            .unwrap();
        prop_assert_eq!(audit.verdict, Verdict::G2);
        prop_assert!(audit.max_zebra_kink < 1e-6, "kink {}", audit.max_zebra_kink);
    }

    #[test]
    fn bent_joints_are_g1(z in prop::collection::vec(-0.5f64..0.5, 16), t in 0.2f64..0.8, dz in 0.2f64..0.6) {
        let (a, b) = height_patch(&z, 1.0).split_u(t).unwrap();
        let audit = audit_joint(&a, &bend(&b, dz), BoundarySpec::default(), Vec3::new(0.3, 0.2, 1.0), DEFAULT_STATIONS, &AuditTolerances::default())
            .unwrap();
        prop_assert_eq!(audit.verdict, Verdict::G1);
        prop_assert!(audit.max_curvature_gap > 1e-3);
    }

    #[test]
    fn audit_is_invariant_under_rigid_motion(
        z in prop::collection::vec(-0.5f64..0.5, 16),
        t in 0.2f64..0.8,
        dz in 0.0f64..0.5,
        axis in (-1.0f64..1.0, -1.0f64..1.0, 0.1f64..1.0),
        angle in -3.0f64..3.0,
        shift in (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0),
    ) {
        let (a, b) = height_patch(&z, 1.0).split_u(t).unwrap();
        let b = bend(&b, dz);
        let view = Vec3::new(0.3, 0.2, 1.0);
        let tr = SimilarityTransform::axis_angle(Vec3::new(axis.0, axis.1, axis.2), angle, Vec3::new(shift.0, shift.1, shift.2), 1.0)
            .unwrap();
        let tols = AuditTolerances::default();
        let base = audit_joint(&a, &b, BoundarySpec::default(), view, DEFAULT_STATIONS, &tols).unwrap();
        let moved = audit_joint(
            &a.map_points(|p| tr.apply_point(p)).unwrap(),
            &b.map_points(|p| tr.apply_point(p)).unwrap(),
            BoundarySpec::default(),
            tr.rotate(view),
            DEFAULT_STATIONS,
            &tols,
        )
        .unwrap();
        prop_assert_eq!(moved.verdict, base.verdict);
        for (x, y) in moved.stations.iter().zip(&base.stations) {
            prop_assert!((x.zebra_a - y.zebra_a).abs() < 1e-9);
            prop_assert!((x.zebra_kink - y.zebra_kink).abs() < 1e-6);
            for k in 0..3 {
                prop_assert!((x.curvature_gaps[k] - y.curvature_gaps[k]).abs() <= 1e-6 * y.curvature_gaps[k].max(1.0));
            }
        }
    }
}
