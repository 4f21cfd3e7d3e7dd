//! Staged lexicographic ranking of candidate curves built on common end data.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::aesthetics::{aggregate, AestheticsError, ScoreSheet};
use crate::diffgeom::curvature;
use crate::fairness::{bending_energy, find_curvature_extrema, smoothness_order, FairnessConfig, Smoothness};
use crate::geom::{Curve, ParametricCurve, Side};
use crate::hermite::HermiteData;

/// Relative energy difference treated as a tie.
pub const ENERGY_TIE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComparatorError {
    #[error("no candidate curves given")]
    EmptyCandidateSet,
    #[error("candidate id '{0}' appears more than once")]
    DuplicateId(String),
    #[error("candidates do not share the Hermite data: {}", describe(.0))]
    CommonDataViolation(Vec<CommonDataDiagnostic>),
    #[error(transparent)]
    Aesthetics(#[from] AestheticsError),
}

fn describe(d: &[CommonDataDiagnostic]) -> String {
    d.iter()
        .map(|x| format!("{} {} gap {:e} > {:e}", x.id, x.quantity, x.gap, x.tolerance))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Position gaps are relative to the chord, curvature gaps are `|dk| * chord`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommonDataTolerances {
    pub position: f64,
    pub angle: f64,
    pub curvature: f64,
}

impl Default for CommonDataTolerances {
    fn default() -> Self {
        CommonDataTolerances { position: 1e-8, angle: 1e-8, curvature: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommonDataDiagnostic {
    pub id: String,
    pub quantity: &'static str,
    pub gap: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommonDataCheck {
    pub ok: bool,
    /// "G1" for points and tangents only, "G2" when end curvatures were checked too.
    pub level: &'static str,
    pub diagnostics: Vec<CommonDataDiagnostic>,
}

fn end_gaps(c: &Curve, h: &HermiteData) -> Result<Vec<(&'static str, f64)>, String> {
    let (lo, hi) = c.domain();
    let a = c.derivatives_at(lo, 1, Side::Right).map_err(|e| e.to_string())?;
    let b = c.derivatives_at(hi, 1, Side::Left).map_err(|e| e.to_string())?;
    let chord = h.chord();
    let angle = |v: crate::geom::Vec3, d| v.normalize().map_or(std::f64::consts::PI, |u| u.angle_to(d));
    let mut gaps = vec![
        ("start point", a[0].distance(h.p0) / chord),
        ("end point", b[0].distance(h.p1) / chord),
        ("start tangent", angle(a[1], h.d0)),
        ("end tangent", angle(b[1], h.d1)),
    ];
    if let Some(k0) = h.k0 {
        let k = curvature(c, lo).map_err(|e| e.to_string())?;
        gaps.push(("start curvature", (k - k0).abs() * chord));
    }
    if let Some(k1) = h.k1 {
        let k = curvature(c, hi).map_err(|e| e.to_string())?;
        gaps.push(("end curvature", (k - k1).abs() * chord));
    }
    Ok(gaps)
}

/// Whether every curve starts and ends on the data of `h`.
pub fn verify_common_data(
    curves: &[(String, Curve)],
    h: &HermiteData,
    tols: &CommonDataTolerances,
) -> Result<CommonDataCheck, ComparatorError> {
    if curves.is_empty() {
        return Err(ComparatorError::EmptyCandidateSet);
    }
    let mut diagnostics = Vec::new();
    for (id, c) in curves {
        match end_gaps(c, h) {
            Ok(gaps) => {
                for (quantity, gap) in gaps {
                    let tolerance = match quantity {
                        "start point" | "end point" => tols.position,
                        "start tangent" | "end tangent" => tols.angle,
                        _ => tols.curvature,
                    };
                    if !(gap <= tolerance) {
                        diagnostics.push(CommonDataDiagnostic { id: id.clone(), quantity, gap, tolerance });
                    }
                }
            }
            Err(_) => diagnostics.push(CommonDataDiagnostic {
                id: id.clone(),
                quantity: "end data",
                gap: f64::NAN,
                tolerance: 0.0,
            }),
        }
    }
    Ok(CommonDataCheck {
        ok: diagnostics.is_empty(),
        level: if h.has_curvature() { "G2" } else { "G1" },
        diagnostics,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Extrema,
    Smoothness,
    Energy,
    Aesthetics,
    /// Not a ranking stage: candidates whose metrics could not be computed.
    Metrics,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Extrema => "extrema",
            Stage::Smoothness => "smoothness",
            Stage::Energy => "energy",
            Stage::Aesthetics => "aesthetics",
            Stage::Metrics => "metrics",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum StageValue {
    Count(usize),
    Order(Smoothness),
    Energy(f64),
    Ravf(i32),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rejection {
    pub id: String,
    pub stage: Stage,
    pub reason: String,
    pub value: Option<StageValue>,
    pub best: Option<StageValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub before: Vec<String>,
    pub after: Vec<String>,
    pub rejected: Vec<Rejection>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateMetrics {
    pub id: String,
    pub extrema_count: usize,
    pub smoothness_order: Smoothness,
    pub energy: f64,
    pub ravf: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonResult {
    pub ranking: Vec<String>,
    pub stages: Vec<StageRecord>,
    pub ties: Vec<Vec<String>>,
    pub metrics: Vec<CandidateMetrics>,
    pub errors: Vec<Rejection>,
    pub common_data: CommonDataCheck,
    /// Set when the common-data check failed and was overridden.
    pub common_data_overridden: bool,
    pub tie_break: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareConfig {
    pub fairness: FairnessConfig,
    pub common: CommonDataTolerances,
    pub energy_tie_tol: f64,
    pub override_common_data: bool,
    /// Score sheets by subject id; the aesthetics stage runs only when non-empty.
    pub sheets: BTreeMap<String, Vec<ScoreSheet>>,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            fairness: FairnessConfig::default(),
            common: CommonDataTolerances::default(),
            energy_tie_tol: ENERGY_TIE_TOL,
            override_common_data: false,
            sheets: BTreeMap::new(),
        }
    }
}

fn metrics_of(id: &str, c: &Curve, cfg: &FairnessConfig) -> Result<CandidateMetrics, String> {
    let extrema = find_curvature_extrema(c, cfg.root_tol).map_err(|e| e.to_string())?;
    let energy = bending_energy(c, cfg.energy_tol).map_err(|e| e.to_string())?;
    Ok(CandidateMetrics {
        id: id.to_string(),
        extrema_count: extrema.len(),
        smoothness_order: smoothness_order(c, &cfg.continuity),
        energy,
        ravf: None,
    })
}

/// Runs one stage: `key` orders candidates (smaller is better), `keep`
/// decides survival against the best key.
fn run_stage<K: PartialOrd + Copy>(
    stage: Stage,
    survivors: &mut Vec<CandidateMetrics>,
    key: impl Fn(&CandidateMetrics) -> K,
    keep: impl Fn(K, K) -> bool,
    value: impl Fn(&CandidateMetrics) -> Option<StageValue>,
    reason: impl Fn(&CandidateMetrics, &CandidateMetrics) -> String,
) -> StageRecord {
    let before: Vec<String> = survivors.iter().map(|m| m.id.clone()).collect();
    survivors.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal).then(a.id.cmp(&b.id)));
    let best = survivors[0].clone();
    let (kept, dropped): (Vec<_>, Vec<_>) = survivors.drain(..).partition(|m| keep(key(m), key(&best)));
    *survivors = kept;
    let rejected = dropped
        .iter()
        .map(|m| Rejection { id: m.id.clone(), stage, reason: reason(m, &best), value: value(m), best: value(&best) })
        .collect();
    StageRecord { stage, before, after: survivors.iter().map(|m| m.id.clone()).collect(), rejected }
}

/// Ranks candidates by extrema count, then smoothness order, then bending
/// energy, then (when sheets are supplied) aggregated RAVF.
///
/// Every candidate is ranked: survivors first, then candidates rejected at
/// later stages ahead of those rejected earlier, then those whose metrics
/// failed. Ties within a stage are broken by id.
pub fn compare(curves: &[(String, Curve)], h: &HermiteData, cfg: &CompareConfig) -> Result<ComparisonResult, ComparatorError> {
    let mut ids = BTreeSet::new();
    for (id, _) in curves {
        if !ids.insert(id.as_str()) {
            return Err(ComparatorError::DuplicateId(id.clone()));
        }
    }
    let common = verify_common_data(curves, h, &cfg.common)?;
    if !common.ok && !cfg.override_common_data {
        return Err(ComparatorError::CommonDataViolation(common.diagnostics));
    }

    let computed: Vec<Result<CandidateMetrics, String>> =
        curves.par_iter().map(|(id, c)| metrics_of(id, c, &cfg.fairness)).collect();
    let mut survivors = Vec::new();
    let mut errors = Vec::new();
    for ((id, _), m) in curves.iter().zip(computed) {
        match m {
            Ok(mut m) => {
                if let Some(sheets) = cfg.sheets.get(id) {
                    m.ravf = Some(aggregate(sheets)?.ravf);
                }
                survivors.push(m);
            }
            Err(reason) => errors.push(Rejection {
                id: id.clone(),
                stage: Stage::Metrics,
                reason,
                value: None,
                best: None,
            }),
        }
    }
    errors.sort_by(|a, b| a.id.cmp(&b.id));
    let metrics_table = {
        let mut v = survivors.clone();
        v.sort_by(|a, b| a.id.cmp(&b.id));
        v
    };

    let mut stages = Vec::new();
    if !survivors.is_empty() {
        stages.push(run_stage(
            Stage::Extrema,
            &mut survivors,
            |m| m.extrema_count,
            |k, best| k <= best,
            |m| Some(StageValue::Count(m.extrema_count)),
            |m, b| format!("{} curvature extrema > {}", m.extrema_count, b.extrema_count),
        ));
        stages.push(run_stage(
            Stage::Smoothness,
            &mut survivors,
            |m| std::cmp::Reverse(m.smoothness_order),
            |k, best| k <= best,
            |m| Some(StageValue::Order(m.smoothness_order)),
            |m, b| format!("smoothness order {} < {}", m.smoothness_order, b.smoothness_order),
        ));
        let tie = cfg.energy_tie_tol;
        stages.push(run_stage(
            Stage::Energy,
            &mut survivors,
            |m| m.energy,
            move |e, best| e - best <= tie * best.abs().max(f64::MIN_POSITIVE),
            |m| Some(StageValue::Energy(m.energy)),
            |m, b| format!("bending energy {:e} exceeds {:e}", m.energy, b.energy),
        ));
        if !cfg.sheets.is_empty() {
            stages.push(run_stage(
                Stage::Aesthetics,
                &mut survivors,
                |m| std::cmp::Reverse(m.ravf.unwrap_or(i32::MIN)),
                |k, best| k <= best,
                |m| m.ravf.map(StageValue::Ravf),
                |m, b| match m.ravf {
                    Some(r) => format!("RAVF {} < {}", r, b.ravf.unwrap_or(i32::MIN)),
                    None => "no score sheets".to_string(),
                },
            ));
        }
    }

    let mut ranking: Vec<String> = survivors.iter().map(|m| m.id.clone()).collect();
    for record in stages.iter().rev() {
        ranking.extend(record.rejected.iter().map(|r| r.id.clone()));
    }
    ranking.extend(errors.iter().map(|r| r.id.clone()));
    let ties = if survivors.len() > 1 { vec![survivors.iter().map(|m| m.id.clone()).collect()] } else { Vec::new() };

    Ok(ComparisonResult {
        ranking,
        stages,
        ties,
        metrics: metrics_table,
        errors,
        common_data_overridden: !common.ok,
        common_data: common,
        tie_break: "candidate id",
    })
}
