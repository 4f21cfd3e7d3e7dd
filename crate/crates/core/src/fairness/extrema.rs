use serde::Serialize;

use super::FairnessError;
use crate::diffgeom::{arc_jet_scaled, ArcLengthTable};
use crate::geom::{ParametricCurve, Side};

/// Default bisection tolerance on the parameter, relative to the domain width.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Extrema closer than this fraction of the total arclength are merged.
pub const MERGE_FRACTION: f64 = 1e-6;

const SAMPLES_PER_PIECE: usize = 2048;
const NOISE_LEVEL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureExtremum {
    pub t: f64,
    pub s: f64,
    pub kappa: f64,
    pub kind: ExtremumKind,
}

/// Sampled `dkappa/ds` over one smooth piece.
struct RateSamples {
    t: Vec<f64>,
    rate: Vec<f64>,
    /// Rates with magnitude at or below this are treated as zero.
    noise: Vec<f64>,
}

pub(crate) struct RateScan {
    pieces: Vec<RateSamples>,
    pub(crate) kappa_abs_max: f64,
}

pub(crate) fn rate_at<C: ParametricCurve + ?Sized>(c: &C, t: f64, side: Side, scale: f64) -> Result<f64, FairnessError> {
    Ok(arc_jet_scaled(c, t, side, scale)?.curvature_derivatives()[1])
}

pub(crate) fn scan<C: ParametricCurve + ?Sized>(c: &C, total_length: f64) -> Result<RateScan, FairnessError> {
    let scale = c.scale();
    let l = total_length.max(f64::MIN_POSITIVE);
    let mut pieces = Vec::new();
    let mut kmax: f64 = 0.0;
    for (a, b) in c.smooth_pieces() {
        let n = SAMPLES_PER_PIECE;
        let mut t = Vec::with_capacity(n + 1);
        let mut rate = Vec::with_capacity(n + 1);
        let mut noise = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let ti = if i == n { b } else { a + (b - a) * i as f64 / n as f64 };
            let side = if i == n { Side::Left } else { Side::Right };
            let k = arc_jet_scaled(c, ti, side, scale)?.curvature_derivatives();
            let ka = k[0].abs();
            kmax = kmax.max(ka);
            t.push(ti);
            rate.push(k[1]);
            // local so that a curvature spike elsewhere cannot mask small wiggles here
            noise.push(NOISE_LEVEL * (ka * ka).max(ka / l).max(1.0 / (l * l)));
        }
        pieces.push(RateSamples { t, rate, noise });
    }
    Ok(RateScan { pieces, kappa_abs_max: kmax })
}

fn sign(v: f64, noise: f64) -> i8 {
    if v > noise {
        1
    } else if v < -noise {
        -1
    } else {
        0
    }
}

/// Minimizes `f` on `[a, b]` by golden-section search; returns `(x, f(x))`.
pub(crate) fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Sign-change brackets `(t_lo, t_hi, sign_lo)` of the rate within each piece.
///
/// Besides sign changes between samples, every local minimum of `|rate|`
/// is probed for a pair of close roots that the grid would straddle.
fn brackets<C: ParametricCurve + ?Sized>(
    c: &C,
    scan: &RateScan,
    scale: f64,
) -> Result<Vec<(f64, f64, i8)>, FairnessError> {
    let mut out = Vec::new();
    // sign changes between consecutive non-negligible samples, also across
    // breakpoints so that an extremum sitting on a joint is bracketed
    let mut last: Option<(f64, i8)> = None;
    for p in &scan.pieces {
        let n = p.t.len();
        for i in 0..n {
            let s = sign(p.rate[i], p.noise[i]);
            if s == 0 {
                continue;
            }
            if let Some((tj, sj)) = last {
                if sj != s {
                    out.push((tj, p.t[i], sj));
                }
            }
            last = Some((p.t[i], s));
        }
        // hidden root pairs near local minima of |rate|
        for i in 1..n.saturating_sub(1) {
            let (l, m, r) = (p.rate[i - 1], p.rate[i], p.rate[i + 1]);
            let noise = p.noise[i];
            let s = sign(m, noise);
            if s == 0 || sign(l, p.noise[i - 1]) != s || sign(r, p.noise[i + 1]) != s {
                continue;
            }
            let sf = s as f64;
            // a genuine dip bends the sample sequence; flat noisy rates do not
            if !(m.abs() <= l.abs() && m.abs() <= r.abs()) || !(sf * (l + r - 2.0 * m) > 1e-6 * m.abs()) {
                continue;
            }
            let probe = |t: f64| rate_at(c, t, Side::Right, scale).map(|v| sf * v).unwrap_or(f64::INFINITY);
            let (tm, fm) = golden_min(probe, p.t[i - 1], p.t[i + 1], 60);
            if fm < -noise {
                out.push((p.t[i - 1], tm, s));
                out.push((tm, p.t[i + 1], -s));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

fn bisect<C: ParametricCurve + ?Sized>(
    c: &C,
    mut lo: f64,
    mut hi: f64,
    sign_lo: i8,
    tol: f64,
    scale: f64,
) -> Result<f64, FairnessError> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let v = rate_at(c, mid, Side::Right, scale)?;
        if (v > 0.0) == (sign_lo > 0) && v != 0.0 {
            lo = mid;
        } else if v == 0.0 {
            return Ok(mid);
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Interior extrema of curvature, including those that fall on a breakpoint.
///
/// `tol` is the bisection tolerance relative to the domain width.
pub fn find_curvature_extrema<C: ParametricCurve + ?Sized>(
    c: &C,
    tol: f64,
) -> Result<Vec<CurvatureExtremum>, FairnessError> {
    let table = ArcLengthTable::new(c);
    let scan = scan(c, table.total())?;
    extrema_from_scan(c, &scan, &table, tol)
}

pub(crate) fn extrema_from_scan<C: ParametricCurve + ?Sized>(
    c: &C,
    scan: &RateScan,
    table: &ArcLengthTable,
    tol: f64,
) -> Result<Vec<CurvatureExtremum>, FairnessError> {
    let scale = c.scale();
    let (lo, hi) = c.domain();
    let abs_tol = tol.max(f64::EPSILON) * (hi - lo);
    let merge = MERGE_FRACTION * table.total();
    let mut out: Vec<CurvatureExtremum> = Vec::new();
    for (a, b, s0) in brackets(c, scan, scale)? {
        let t = bisect(c, a, b, s0, abs_tol, scale)?;
        if t <= lo || t >= hi {
            continue;
        }
        let s = table.length_at(c, t);
        let kind = if s0 > 0 { ExtremumKind::Max } else { ExtremumKind::Min };
        if let Some(prev) = out.last() {
            if (s - prev.s).abs() <= merge {
                // a max/min pair this close is a flat point, not two extrema
                if prev.kind != kind {
                    out.pop();
                }
                continue;
            }
        }
        let kappa = arc_jet_scaled(c, t, Side::Right, scale)?.curvature();
        out.push(CurvatureExtremum { t, s, kappa, kind });
    }
    Ok(out)
}

/// Whether `dkappa/ds` keeps one sign over the whole domain; constant
/// curvature counts as monotone.
pub fn is_curvature_monotone<C: ParametricCurve + ?Sized>(c: &C, _tol: f64) -> Result<bool, FairnessError> {
    let table = ArcLengthTable::new(c);
    let scan = scan(c, table.total())?;
    monotone_from_scan(c, &scan)
}

pub(crate) fn monotone_from_scan<C: ParametricCurve + ?Sized>(c: &C, scan: &RateScan) -> Result<bool, FairnessError> {
    let mut seen = 0i8;
    for p in &scan.pieces {
        for (&r, &noise) in p.rate.iter().zip(&p.noise) {
            let s = sign(r, noise);
            if s != 0 {
                if seen != 0 && s != seen {
                    return Ok(false);
                }
                seen = s;
            }
        }
    }
    Ok(brackets(c, scan, c.scale())?.is_empty())
}
