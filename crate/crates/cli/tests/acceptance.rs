//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::process::Command;
use std::time::Instant;

use fairkit::aesthetics::{ravf, ScoreSheet, CRITERIA_COUNT};
use fairkit::comparator::{compare, CompareConfig, ComparisonResult, Stage};
use fairkit::diffgeom::{curvature, curvature_rate, sample_profile};
use fairkit::fairness::{bending_energy, find_curvature_extrema, fit_line, DEFAULT_ENERGY_TOL, DEFAULT_ROOT_TOL};
use fairkit::geom::{Curve, CurveSpec, Dim, ParametricCurve, Side, SimilarityTransform, Vec3, DEFAULT_JOIN_TOLERANCE};
use fairkit::hermite::{cubic_candidate, fit_minimum_energy_curve, quintic_candidate, HermiteData};
use fairkit::spirals::{fresnel, gauss_kronrod, generate_spiral, hyp2f1, SpiralFamily, SpiralSpec, DEFAULT_SPIRAL_TOL};
use fairkit::surfaudit::{audit_joint, AuditTolerances, BoundarySpec, SurfacePatch, Verdict, DEFAULT_STATIONS};
use fairkit_cli::document::{curve_entity, parse_document, serialize_document, Document, Entity, Payload};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn spiral(family: SpiralFamily, s0: f64, s1: f64) -> Curve {
    Curve::Spiral(Box::new(generate_spiral(&SpiralSpec::new(family, s0, s1), DEFAULT_SPIRAL_TOL).unwrap()))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn analytic_oracles() -> Outcome {
    let quarter = |k: usize| {
        let a = k as f64 * FRAC_PI_2;
        let (p0, p2) = (Vec3::from_angle(a), Vec3::from_angle(a + FRAC_PI_2));
        Curve::rational_bezier(vec![p0, p0 + p2, p2], vec![1.0, FRAC_1_SQRT_2, 1.0], Dim::Two).unwrap()
    };
    let circle = Curve::piecewise((0..4).map(quarter).collect(), DEFAULT_JOIN_TOLERANCE).unwrap();
    let (lo, hi) = circle.domain();
    let mut worst: f64 = 0.0;
    for i in 0..=1000 {
        worst = worst.max((curvature(&circle, lo + (hi - lo) * i as f64 / 1000.0).unwrap() - 1.0).abs());
    }
    ensure!(worst < 1e-9, "circle curvature error {worst:e}");
    let e = bending_energy(&circle, DEFAULT_ENERGY_TOL).unwrap();
    ensure!(rel(e, 2.0 * PI) < 1e-8, "circle energy {e}");
    let line = Curve::bezier(vec![Vec3::xy(0.0, 0.0), Vec3::xy(0.5, 1.0), Vec3::xy(2.0, 4.0)], Dim::Two).unwrap();
    let el = bending_energy(&line, DEFAULT_ENERGY_TOL).unwrap();
    ensure!(el < 1e-12, "line energy {el:e}");
    let ec = bending_energy(&spiral(SpiralFamily::Clothoid { scale: 1.0 }, 0.0, 1.0), DEFAULT_ENERGY_TOL).unwrap();
    ensure!(rel(ec, 1.0 / 3.0) < 1e-8, "clothoid energy {ec}");
    Ok(format!("max |kappa - 1| = {worst:.1e}, circle energy rel err {:.1e}, clothoid rel err {:.1e}", rel(e, 2.0 * PI), rel(ec, 1.0 / 3.0)))
}

fn clothoid_linearity() -> Outcome {
    let c = spiral(SpiralFamily::Clothoid { scale: 1.0 }, 0.0, 2.0);
    let (lo, hi) = c.domain();
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let r = curvature_rate(&c, lo + (hi - lo) * i as f64 / 999.0).unwrap();
        worst = worst.max(rel(r, 1.0));
    }
    ensure!(worst < 1e-6, "dkappa/ds deviates by {worst:e}");
    // secant slopes of sampled (s, kappa) must agree too
    let prof = sample_profile(&c, 1000).unwrap();
    let mut secant: f64 = 0.0;
    for w in prof.samples.windows(2) {
        secant = secant.max(rel((w[1].kappa - w[0].kappa) / (w[1].s - w[0].s), 1.0));
    }
    ensure!(secant < 1e-6, "secant slope deviates by {secant:e}");
    let n = find_curvature_extrema(&c, DEFAULT_ROOT_TOL).unwrap().len();
    ensure!(n == 0, "{n} extrema");
    Ok(format!("max rel deviation {worst:.1e} (rate), {secant:.1e} (secant); 0 extrema"))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * i as f64);
    }
    acc * h / 3.0
}

fn special_functions() -> Outcome {
    let h = hyp2f1(1.0, 1.0, 2.0, 0.5).map_err(|e| e.to_string())?;
    ensure!((h - 2.0 * 2f64.ln()).abs() < 1e-10, "hyp2f1(1,1;2;0.5) = {h}");
    let mut fres: f64 = 0.0;
    for i in 1..=100 {
        let x = 0.1 * i as f64;
        let n = 2 * ((4000.0 * x * x).ceil() as usize).max(200);
        let c = simpson(|u| (FRAC_PI_2 * u * u).cos(), 0.0, x, n);
        let s = simpson(|u| (FRAC_PI_2 * u * u).sin(), 0.0, x, n);
        let (fc, fs) = fresnel(x);
        fres = fres.max((fc - c).abs()).max((fs - s).abs());
    }
    ensure!(fres < 1e-8, "fresnel differs from quadrature by {fres:e}");
    let r = gauss_kronrod(f64::exp, 0.0, 1.0, 1e-10);
    let e1 = std::f64::consts::E - 1.0;
    ensure!(r.converged && (r.value - e1).abs() <= 1e-10, "integral of exp: {} (err {:e})", r.value, (r.value - e1).abs());
    type Case = (fn(f64) -> f64, f64, f64, f64);
    let family: [Case; 6] = [
        (f64::exp, 0.0, 1.0, e1),
        (|x| x.powi(12), -1.0, 1.0, 2.0 / 13.0),
        (|x| (25.0 * x).sin(), 0.0, 1.5, (1.0 - (37.5f64).cos()) / 25.0),
        (|x| (x + 0.02).sqrt(), 0.0, 2.0, 2.0 / 3.0 * (2.02f64.powf(1.5) - 0.02f64.powf(1.5))),
        (|x| 1.0 / (1.0 + 50.0 * x * x), -2.0, 2.0, 2.0 * (2.0 * 50f64.sqrt()).atan() / 50f64.sqrt()),
        (|x| (-x).exp() * x.cos(), 0.0, 4.0, 0.5 * (1.0 + (-4.0f64).exp() * (4.0f64.sin() - 4.0f64.cos()))),
    ];
    for &(f, a, b, exact) in &family {
        for tol in [1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
            let r = gauss_kronrod(f, a, b, tol);
            let err = (r.value - exact).abs();
            ensure!(r.error_estimate >= err, "estimate {:e} below true error {err:e} on [{a}, {b}], tol {tol:e}", r.error_estimate);
        }
    }
    Ok(format!("hyp2f1 err {:.1e}, max fresnel err {fres:.1e}, GK estimates bound true errors", (h - 2.0 * 2f64.ln()).abs()))
}

/// Gauss series after the Pfaff transformation, which converges for all `s >= 0`.
fn superspiral_kappa(a: f64, b: f64, c: f64, kappa0: f64, s: f64) -> f64 {
    let w = s / (1.0 + s);
    let (mut term, mut sum) = (1.0f64, 0.0f64);
    for k in 0..10_000 {
        sum += term;
        let k = k as f64;
        term *= (a + k) * (c - b + k) / ((c + k) * (k + 1.0)) * w;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    kappa0 * (1.0 + s).powf(-a) * sum
}

fn superspiral_monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_oracle: f64 = 0.0;
    for set in 0..20 {
        let a = rng.gen_range(0.2..3.0);
        let b = rng.gen_range(0.1..2.0);
        let c = b + rng.gen_range(0.1..3.0);
        let kappa0 = rng.gen_range(0.5..3.0);
        let sp = spiral(SpiralFamily::Superspiral { a, b, c, kappa0 }, 0.0, 3.0);
        let n = 200;
        let k: Vec<f64> = (0..=n).map(|i| curvature(&sp, 3.0 * i as f64 / n as f64).unwrap()).collect();
        for (i, &ki) in k.iter().enumerate() {
            let o = superspiral_kappa(a, b, c, kappa0, 3.0 * i as f64 / n as f64);
            worst_oracle = worst_oracle.max(rel(ki, o));
        }
        ensure!(worst_oracle < 1e-9, "set {set}: curvature differs from series oracle by {worst_oracle:e}");
        ensure!(k.iter().all(|&x| x > 0.0), "set {set} (a={a}, b={b}, c={c}): non-positive curvature");
        let mut diff = k.clone();
        for order in 1..=3 {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
            let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
            let slack = 1e-13 * kappa0 * (1u32 << order) as f64;
            ensure!(
                diff.iter().all(|d| sign * d >= -slack),
                "set {set} (a={a}, b={b}, c={c}): order-{order} differences change sign"
            );
        }
        let e = find_curvature_extrema(&sp, DEFAULT_ROOT_TOL).unwrap().len();
        ensure!(e == 0, "set {set}: {e} extrema");
    }
    Ok(format!("20 sets, completely monotone to order 3, max rel err vs series oracle {worst_oracle:.1e}"))
}

/// Signed curvature of a planar Bézier by de Casteljau on its hodographs.
fn bezier_kappa(p: &[(f64, f64)], t: f64) -> f64 {
    fn casteljau(q: &[(f64, f64)], t: f64) -> (f64, f64) {
        let mut w = q.to_vec();
        for r in 1..w.len() {
            for i in 0..w.len() - r {
                w[i] = ((1.0 - t) * w[i].0 + t * w[i + 1].0, (1.0 - t) * w[i].1 + t * w[i + 1].1);
            }
        }
        w[0]
    }
    let n = p.len() - 1;
    let d1: Vec<_> = p.windows(2).map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1)).collect();
    let d2: Vec<_> = d1.windows(2).map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1)).collect();
    let (x1, y1) = casteljau(&d1, t);
    let (x2, y2) = casteljau(&d2, t);
    let (n1, n2) = (n as f64, (n * (n - 1)) as f64);
    n1 * n2 * (x1 * y2 - y1 * x2) / (n1 * n1 * (x1 * x1 + y1 * y1)).powf(1.5)
}

fn direction_changes(k: &[f64]) -> usize {
    let (mut count, mut last) = (0, 0.0f64);
    for w in k.windows(2) {
        let d = w[1] - w[0];
        if d == 0.0 {
            continue;
        }
        if last != 0.0 && d.signum() != last.signum() {
            count += 1;
        }
        last = d;
    }
    count
}

fn extrema_vs_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total = 0;
    for trial in 0..100 {
        let degree = if trial % 2 == 0 { 3 } else { 5 };
        let p: Vec<(f64, f64)> = (0..=degree).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let c = Curve::bezier(p.iter().map(|&(x, y)| Vec3::xy(x, y)).collect(), Dim::Two).unwrap();
        let found = find_curvature_extrema(&c, DEFAULT_ROOT_TOL).map_err(|e| format!("trial {trial}: {e}"))?.len();
        let k: Vec<f64> = (0..=100_000).map(|i| bezier_kappa(&p, i as f64 / 1e5)).collect();
        let oracle = direction_changes(&k);
        ensure!(found == oracle, "trial {trial} (degree {degree}): root finder {found}, oracle {oracle}, points {p:?}");
        total += found;
    }
    Ok(format!("100/100 agree ({total} extrema in total)"))
}

fn end_data(c: &Curve, with_curvature: bool) -> HermiteData {
    let (lo, hi) = c.domain();
    let a = c.derivatives_at(lo, 2, Side::Right).unwrap();
    let b = c.derivatives_at(hi, 2, Side::Left).unwrap();
    let k = |d: &[Vec3]| d[1].cross_z(d[2]) / d[1].norm().powi(3);
    let (k0, k1) = if with_curvature { (Some(k(&a)), Some(k(&b))) } else { (None, None) };
    HermiteData::from_directions(Dim::Two, a[0], b[0], a[1], b[1], k0, k1).unwrap()
}

/// Inflected clothoid arc plus a cubic and a quintic on its end data.
fn s_shape() -> (HermiteData, Vec<(String, Curve)>) {
    let clothoid = spiral(SpiralFamily::Clothoid { scale: 1.0 }, -0.5, 1.2);
    let g1 = end_data(&clothoid, false);
    let cubic = cubic_candidate(&g1).unwrap();
    let (quintic, _) = quintic_candidate(&end_data(&clothoid, true)).unwrap();
    (g1, vec![("cubic".into(), cubic), ("quintic".into(), quintic), ("clothoid".into(), clothoid)])
}

/// A C2 cubic spline and a C4 quintic spline on the same arch data.
fn order_pair() -> (HermiteData, Vec<(String, Curve)>) {
    let p = Vec3::xy;
    let c3 = Curve::bspline(
        3,
        vec![0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0, 1.0],
        vec![p(0.0, 0.0), p(0.3, 0.3), p(1.0, 0.8), p(1.7, 0.3), p(2.0, 0.0)],
        Dim::Two,
    )
    .unwrap();
    let c5 = Curve::bspline(
        5,
        vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        vec![p(0.0, 0.0), p(0.15, 0.15), p(0.4, 0.4), p(1.0, 0.7), p(1.6, 0.4), p(1.85, 0.15), p(2.0, 0.0)],
        Dim::Two,
    )
    .unwrap();
    let d = |a: f64| Vec3::xy(FRAC_1_SQRT_2, a * FRAC_1_SQRT_2);
    let h = HermiteData::new(Dim::Two, p(0.0, 0.0), p(2.0, 0.0), d(1.0), d(-1.0), None, None).unwrap();
    (h, vec![("spline3".into(), c3), ("spline5".into(), c5)])
}

fn rejected_at(r: &ComparisonResult, stage: Stage) -> Vec<String> {
    r.stages.iter().filter(|s| s.stage == stage).flat_map(|s| s.rejected.iter().map(|j| j.id.clone())).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn comparator_conformance() -> Outcome {
    let cfg = CompareConfig::default();
    let (hs, s) = s_shape();
    let oracle: Vec<usize> = s[..2].iter().map(|(_, c)| direction_changes(&sample_kappa(c))).collect();
    ensure!(oracle[0] > oracle[1], "S fixture oracle extrema {oracle:?}");
    let rs = compare(&s, &hs, &cfg).map_err(|e| e.to_string())?;
    ensure!(rejected_at(&rs, Stage::Extrema) == ["cubic"], "S fixture extrema-stage rejections {:?}", rejected_at(&rs, Stage::Extrema));
    let (ho, o) = order_pair();
    let ro = compare(&o, &ho, &cfg).map_err(|e| e.to_string())?;
    ensure!(rejected_at(&ro, Stage::Extrema).is_empty(), "order fixture rejected at extrema stage");
    ensure!(rejected_at(&ro, Stage::Smoothness) == ["spline3"], "order fixture smoothness rejections {:?}", rejected_at(&ro, Stage::Smoothness));

    for (h, cands, base) in [(&hs, &s, &rs), (&ho, &o, &ro)] {
        for perm in permutations(cands.len()) {
            let shuffled: Vec<(String, Curve)> = perm.iter().map(|&i| cands[i].clone()).collect();
            let r = compare(&shuffled, h, &cfg).map_err(|e| e.to_string())?;
            ensure!(r.ranking == base.ranking, "permutation {perm:?} ranks {:?}", r.ranking);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..100 {
        let tr = SimilarityTransform::planar(rng.gen_range(-PI..PI), (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)), 10f64.powf(rng.gen_range(-1.5..1.5)))
            .unwrap();
        for (h, cands, base) in [(&hs, &s, &rs), (&ho, &o, &ro)] {
            let moved: Vec<(String, Curve)> = cands.iter().map(|(id, c)| (id.clone(), c.transform(&tr).unwrap())).collect();
            let r = compare(&moved, &h.transform(&tr), &cfg).map_err(|e| format!("transform {i}: {e}"))?;
            ensure!(r.ranking == base.ranking, "transform {i}: ranking {:?} vs {:?}", r.ranking, base.ranking);
        }
    }
    Ok(format!("S: {:?}, orders: {:?}; stable under all permutations and 100 similarities", rs.ranking, ro.ranking))
}

fn sample_kappa(c: &Curve) -> Vec<f64> {
    let (lo, hi) = c.domain();
    (0..=100_000)
        .map(|i| {
            let side = if i == 100_000 { Side::Left } else { Side::Right };
            let d = c.derivatives_at(lo + (hi - lo) * i as f64 / 1e5, 2, side).unwrap();
            d[1].cross_z(d[2]) / d[1].norm().powi(3)
        })
        .collect()
}

fn elastica() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut rms_log = Vec::new();
    for i in 0..20 {
        let p1 = Vec3::from_angle(rng.gen_range(-0.5..0.5)) * rng.gen_range(0.5..2.0);
        let (a0, a1) = (rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2));
        let h = HermiteData::new(Dim::Two, Vec3::ZERO, p1, Vec3::from_angle(a0), Vec3::from_angle(a1), None, None).unwrap();
        let fit = fit_minimum_energy_curve(&h, 32, 20_000, 1e-10).map_err(|e| format!("fixture {i}: {e}"))?;
        ensure!(fit.energy_trace.windows(2).all(|w| w[1] <= w[0]), "fixture {i}: energy increased");
        let cubic = bending_energy(&cubic_candidate(&h).unwrap(), DEFAULT_ENERGY_TOL).unwrap();
        ensure!(fit.energy <= cubic, "fixture {i}: elastica {} above cubic {cubic}", fit.energy);
        let turning = (h.d0.angle_to(p1) + h.d1.angle_to(p1)).abs();
        if turning < 1.0 {
            let k = fit.discrete_curvature();
            let (xs, ys): (Vec<f64>, Vec<f64>) = k.iter().copied().unzip();
            let line = fit_line(&xs, &ys);
            let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - line.intercept - line.slope * x).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
            let range = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ys.iter().cloned().fold(f64::INFINITY, f64::min);
            if range > 0.0 {
                rms_log.push(rms / range);
            }
        }
    }
    let soft_ok = rms_log.iter().filter(|r| **r < 0.05).count();
    Ok(format!(
        "20/20 monotone and below the cubic; linear-fit RMS < 5% of kappa range on {soft_ok}/{} moderate fixtures (soft, logged)",
        rms_log.len()
    ))
}

fn height_patch(rng: &mut ChaCha8Rng) -> SurfacePatch {
    let net = (0..4)
        .map(|i| (0..4).map(|j| Vec3::new(i as f64 / 3.0, j as f64 / 3.0, rng.gen_range(-0.3..0.3))).collect())
        .collect();
    SurfacePatch::new(net, None).unwrap()
}

fn zebra_audit() -> Outcome {
    let tol = AuditTolerances::default();
    let view = Vec3::new(0.3, -0.4, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut g2_max: f64 = 0.0;
    let mut g1_min = f64::INFINITY;
    for seed in 0..50 {
        let p = height_patch(&mut rng);
        let (a, b) = p.split_u(rng.gen_range(0.2..0.8)).unwrap();
        let audit = audit_joint(&a, &b, BoundarySpec::default(), view, DEFAULT_STATIONS, &tol).map_err(|e| e.to_string())?;
        ensure!(audit.verdict == Verdict::G2, "subdivision seed {seed}: verdict {}", audit.verdict);
        ensure!(audit.max_zebra_kink < 1e-6, "subdivision seed {seed}: kink {:e}", audit.max_zebra_kink);
        g2_max = g2_max.max(audit.max_zebra_kink);

        // moving b's third row keeps position and tangent plane but not curvature
        let mut net = b.points().to_vec();
        let dz = rng.gen_range(0.15..0.4) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        for q in net[2].iter_mut() {
            q.z += dz;
        }
        let bent = SurfacePatch::new(net, None).unwrap();
        let audit = audit_joint(&a, &bent, BoundarySpec::default(), view, DEFAULT_STATIONS, &tol).map_err(|e| e.to_string())?;
        ensure!(audit.verdict == Verdict::G1, "G1 seed {seed}: verdict {}", audit.verdict);
        g1_min = g1_min.min(audit.max_zebra_kink);
    }
    ensure!(g1_min >= 10.0 * g2_max, "G1 kink {g1_min:e} not 10x the G2 maximum {g2_max:e}");
    Ok(format!("50/50 G2 with max kink {g2_max:.1e} rad; G1 fixtures min kink {g1_min:.2e} rad"))
}

/// Rounded mean by integer arithmetic, halves away from zero.
fn ravf_oracle(scores: &[i32]) -> i32 {
    let (sum, n) = (scores.iter().sum::<i32>(), scores.len() as i32);
    sum.signum() * ((2 * sum.abs() + n) / (2 * n))
}

fn ravf_levels() -> Outcome {
    let sheet = |scores| ScoreSheet { rater: "r".into(), subject: "s".into(), scores };
    ensure!(ravf(&sheet([0; CRITERIA_COUNT])) == 0, "all-zero sheet");
    ensure!(ravf(&sheet([1; CRITERIA_COUNT])) == 1, "all-one sheet");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..1000 {
        let mut scores = [0; CRITERIA_COUNT];
        scores.iter_mut().for_each(|s| *s = rng.gen_range(-3..=3));
        let s = sheet(scores);
        ensure!(ravf(&s.negated()) == -ravf(&s), "sheet {i}: not antisymmetric");
        ensure!(ravf(&s) == ravf_oracle(&scores), "sheet {i}: {} vs oracle {}", ravf(&s), ravf_oracle(&scores));
    }
    Ok("levels 0 and 1 reproduced; 1000/1000 antisymmetric and equal to the integer oracle".into())
}

fn every_kind_document() -> Document {
    let p = Vec3::xy;
    let mut doc = Document::default();
    let add = |id: &str, spec: CurveSpec, doc: &mut Document| doc.push(curve_entity(id, spec, DEFAULT_JOIN_TOLERANCE).unwrap()).unwrap();
    let bez = CurveSpec::Bezier { dim: Dim::Two, points: vec![p(0.0, 0.0), p(0.1, 1.0 / 3.0), p(2.0, 0.7)], weights: None };
    add("bez", bez.clone(), &mut doc);
    add(
        "rat",
        CurveSpec::Bezier { dim: Dim::Three, points: vec![Vec3::new(1.0, 0.0, 0.5), Vec3::new(1.0, 1.0, 0.25), Vec3::new(0.0, 1.0, 0.0)], weights: Some(vec![1.0, 0.7, 1.0]) },
        &mut doc,
    );
    add(
        "bsp",
        CurveSpec::BSpline {
            dim: Dim::Two,
            degree: 3,
            knots: vec![0.0, 0.0, 0.0, 0.0, 0.4, 1.0, 1.0, 1.0, 1.0],
            points: vec![p(0.0, 0.0), p(1.0, 2.0), p(2.0, -1.0), p(3.0, 0.3), p(4.0, 0.0)],
            weights: None,
        },
        &mut doc,
    );
    add("poly", CurveSpec::Polyline { dim: Dim::Two, points: vec![p(0.0, 0.0), p(1.0, 0.1), p(1.5, 1e-7)] }, &mut doc);
    let tail = CurveSpec::Bezier { dim: Dim::Two, points: vec![p(2.0, 0.7), p(3.0, 1.0)], weights: None };
    add("pw", CurveSpec::Piecewise { segments: vec![bez, tail] }, &mut doc);
    let fams = [
        SpiralFamily::Clothoid { scale: 1.25 },
        SpiralFamily::LogAesthetic { alpha: 0.5, c0: 1.0, c1: 0.3 },
        SpiralFamily::Superspiral { a: 0.5, b: 1.0, c: 2.5, kappa0: 1.5 },
    ];
    for (i, family) in fams.into_iter().enumerate() {
        let spec = SpiralSpec { family, s0: 0.1, s1: 1.3, origin: (0.5, -2.0), theta0: 0.3 };
        add(&format!("spiral{i}"), CurveSpec::Spiral(spec), &mut doc);
    }
    let h = HermiteData::new(Dim::Two, p(0.0, 0.0), p(3.0, 0.0), Vec3::from_angle(0.4), Vec3::from_angle(-0.4), Some(0.1), None).unwrap();
    doc.push(Entity { id: "h".into(), payload: Payload::Hermite(h) }).unwrap();
    let g1 = HermiteData::new(Dim::Two, p(0.0, 0.0), p(3.0, 0.0), Vec3::from_angle(0.4), Vec3::from_angle(-0.4), None, None).unwrap();
    doc.push(Entity { id: "g1".into(), payload: Payload::Hermite(g1) }).unwrap();
    let net = (0..3).map(|i| (0..4).map(|j| Vec3::new(i as f64, j as f64, 0.1 * (i * j) as f64)).collect()).collect();
    doc.push(Entity { id: "patch".into(), payload: Payload::Patch(SurfacePatch::new(net, None).unwrap()) }).unwrap();
    let mut scores = [0; CRITERIA_COUNT];
    scores.iter_mut().enumerate().for_each(|(i, s)| *s = i as i32 % 7 - 3);
    doc.push(Entity { id: "sheet".into(), payload: Payload::Scores(ScoreSheet { rater: "ana".into(), subject: "bez".into(), scores }) }).unwrap();
    doc
}

fn cli_round_trip() -> Outcome {
    let doc = every_kind_document();
    let kinds: Vec<&str> = doc.entities.iter().map(|e| e.payload.kind()).collect();
    for k in ["bezier", "bspline", "piecewise", "polyline", "spiral", "hermite", "patch", "scores"] {
        ensure!(kinds.contains(&k), "fixture lacks {k}");
    }
    let first = serialize_document(&doc);
    let second = serialize_document(&parse_document(&first).map_err(|e| e.to_string())?);
    ensure!(first == second, "serialize . parse . serialize changed the bytes");

    let dir = std::env::temp_dir().join(format!("fairkit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("doc.json");
    std::fs::write(&path, &first).map_err(|e| e.to_string())?;
    let runs = [
        vec!["analyze", "--json", "-"],
        vec!["compare", "--json", "-", "--hermite", "g1", "--candidates", "cubic,quintic"],
        vec!["ravf"],
    ];
    for args in &runs {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_fairkit")).arg(args[0]).arg(&path).args(&args[1..]).output().map_err(|e| e.to_string())?;
            ensure!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
            outputs.push(out.stdout);
        }
        ensure!(outputs[0] == outputs[1], "{args:?}: report bytes differ between runs");
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} entities of {} kinds byte-identical; {} commands deterministic", doc.entities.len(), 8, runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("analytic curvature and energy oracles", analytic_oracles),
        ("clothoid curvature is linear", clothoid_linearity),
        ("special functions", special_functions),
        ("superspiral monotonicity", superspiral_monotonicity),
        ("extrema count vs brute force", extrema_vs_brute_force),
        ("comparator conformance", comparator_conformance),
        ("elastica", elastica),
        ("zebra and G2 audit", zebra_audit),
        ("RAVF", ravf_levels),
        ("CLI round trip and determinism", cli_round_trip),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/10 passed in {:.1} s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
