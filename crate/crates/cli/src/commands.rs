use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use fairkit::aesthetics::{aggregate, ravf, ScoreSheet};
use fairkit::comparator::{compare, CommonDataTolerances, CompareConfig, ComparatorError, ComparisonResult};
use fairkit::diffgeom::{arc_jet, sample_profile};
use fairkit::fairness::{bending_energy, fairness_report, lcg, FairnessConfig, FairnessReport};
use fairkit::geom::{Curve, CurveSpec, ParametricCurve, Side, Vec3};
use fairkit::hermite::{cubic_candidate, fit_minimum_energy_curve, hermite_candidates, CandidateKind, HermiteData};
use fairkit::surfaudit::{
    audit_joint, zebra_value, AuditTolerances, BoundarySpec, Edge, SurfacePatch, DEFAULT_BANDS, DEFAULT_STATIONS,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cli::{Cli, Command, Outputs, Overrides};
use crate::document::{
    curve_entity, entity_value, parse_document_with, serialize_document, spiral_from_fields, Document, DocumentError,
    Payload,
};
use crate::format::{human, machine_json};
use crate::plot::{Plot, Table};
use crate::selftest::selftest;

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_ELASTICA_TOL: f64 = 1e-10;
pub const DEFAULT_VIEW: [f64; 3] = [1.0, 1.0, 1.0];

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 1 for problems with the data, 2 for problems with the invocation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn domain(m: impl ToString) -> CliError {
    CliError::Domain(m.to_string())
}

/// Everything a command produces; nothing is written until [`emit`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Output {
    pub human: String,
    pub machine: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
    /// Document text and where it goes.
    pub document: Option<(PathBuf, String)>,
    /// Set when a self-test check failed.
    pub failed: bool,
}

/// Effective tolerances after applying flags over settings over defaults.
#[derive(Clone, Debug)]
pub struct Config {
    pub fairness: FairnessConfig,
    pub common: CommonDataTolerances,
    pub audit: AuditTolerances,
    pub elastica_tol: f64,
    pub samples: usize,
    pub stations: usize,
    pub bands: usize,
    pub view: Vec3,
}

fn pick(flag: Option<f64>, setting: Option<f64>, default: f64, name: &str) -> Result<f64, CliError> {
    let v = flag.or(setting).unwrap_or(default);
    if !(v.is_finite() && v > 0.0) {
        return Err(usage(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(v)
}

pub fn resolve_config(doc: &Document, ov: &Overrides) -> Result<Config, CliError> {
    let s = &doc.settings;
    let mut fairness = FairnessConfig::default();
    let common = CommonDataTolerances::default();
    let audit = AuditTolerances::default();
    fairness.root_tol = pick(ov.tol_root, s.root_tol, fairness.root_tol, "root tolerance")?;
    fairness.energy_tol = pick(ov.tol_energy, s.energy_tol, fairness.energy_tol, "energy tolerance")?;
    let position = ov.tol_position.or(s.position_tol);
    let angle = ov.tol_angle.or(s.angle_tol);
    let curvature = ov.tol_curvature.or(s.curvature_tol);
    fairness.continuity.position = pick(position, None, fairness.continuity.position, "position tolerance")?;
    fairness.continuity.tangent_angle = pick(angle, None, fairness.continuity.tangent_angle, "angle tolerance")?;
    fairness.continuity.curvature = pick(curvature, None, fairness.continuity.curvature, "curvature tolerance")?;
    let samples = s.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples < 2 {
        return Err(usage("samples must be at least 2"));
    }
    fairness.lcg_samples = samples;
    let view = s.view.unwrap_or(DEFAULT_VIEW);
    Ok(Config {
        fairness,
        common: CommonDataTolerances {
            position: pick(position, None, common.position, "position tolerance")?,
            angle: pick(angle, None, common.angle, "angle tolerance")?,
            curvature: pick(curvature, None, common.curvature, "curvature tolerance")?,
        },
        audit: AuditTolerances {
            position: pick(position, None, audit.position, "position tolerance")?,
            normal_angle: pick(angle, None, audit.normal_angle, "angle tolerance")?,
            curvature: pick(curvature, None, audit.curvature, "curvature tolerance")?,
        },
        elastica_tol: pick(ov.tol_elastica, s.elastica_tol, DEFAULT_ELASTICA_TOL, "elastica tolerance")?,
        samples,
        stations: s.stations.unwrap_or(DEFAULT_STATIONS),
        bands: s.bands.unwrap_or(DEFAULT_BANDS),
        view: Vec3::new(view[0], view[1], view[2]),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load(path: &Path, ov: &Overrides) -> Result<Document, CliError> {
    Ok(parse_document_with(&read(path)?, ov.tol_join)?)
}

fn lookup<'a>(doc: &'a Document, id: &str) -> Result<&'a Payload, CliError> {
    doc.get(id).map(|e| &e.payload).ok_or_else(|| usage(format!("no entity '{id}' in the document")))
}

fn wrong_kind(id: &str, p: &Payload, wanted: &str) -> CliError {
    usage(format!("entity '{id}' is a {}, expected {wanted}", p.kind()))
}

fn curve_of<'a>(doc: &'a Document, id: &str) -> Result<&'a Curve, CliError> {
    match lookup(doc, id)? {
        Payload::Curve { curve, .. } => Ok(curve),
        p => Err(wrong_kind(id, p, "a curve")),
    }
}

fn hermite_of<'a>(doc: &'a Document, id: &str) -> Result<&'a HermiteData, CliError> {
    match lookup(doc, id)? {
        Payload::Hermite(h) => Ok(h),
        p => Err(wrong_kind(id, p, "hermite data")),
    }
}

fn patch_of<'a>(doc: &'a Document, id: &str) -> Result<&'a SurfacePatch, CliError> {
    match lookup(doc, id)? {
        Payload::Patch(p) => Ok(p),
        p => Err(wrong_kind(id, p, "a patch")),
    }
}

fn sheet_of<'a>(doc: &'a Document, id: &str) -> Result<&'a ScoreSheet, CliError> {
    match lookup(doc, id)? {
        Payload::Scores(s) => Ok(s),
        p => Err(wrong_kind(id, p, "a score sheet")),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Points on `c` uniform in its parameter, projected to the xy plane.
fn trace(c: &Curve, n: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = c.domain();
    (0..=n)
        .filter_map(|i| c.eval(lo + (hi - lo) * i as f64 / n as f64).ok())
        .map(|p| (p.x, p.y))
        .collect()
}

/// Which plot outputs a command can produce: (csv, svg).
fn plot_support(cmd: &Command) -> (bool, bool) {
    match cmd {
        Command::Analyze { .. } | Command::Compare { .. } | Command::Lcg { .. } | Command::Zebra { .. } => (true, true),
        Command::Elastica { .. } => (true, true),
        Command::Ravf { .. } => (true, false),
        Command::Generate { .. } | Command::Selftest { .. } => (false, false),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Analyze { .. } => "analyze",
        Command::Compare { .. } => "compare",
        Command::Generate { .. } => "generate",
        Command::Lcg { .. } => "lcg",
        Command::Zebra { .. } => "zebra",
        Command::Ravf { .. } => "ravf",
        Command::Elastica { .. } => "elastica",
        Command::Selftest { .. } => "selftest",
    }
}

/// Runs the parsed command line, reading input files but writing nothing.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let (csv, svg) = plot_support(&cli.command);
    let name = command_name(&cli.command);
    if cli.outputs.csv.is_some() && !csv {
        return Err(usage(format!("'{name}' has no CSV output")));
    }
    if cli.outputs.svg.is_some() && !svg {
        return Err(usage(format!("'{name}' has no SVG output")));
    }
    match &cli.command {
        Command::Selftest { count } => {
            let seed = match std::env::var("FAIRKIT_SEED") {
                Ok(s) => s.trim().parse::<u64>().map_err(|_| usage(format!("FAIRKIT_SEED must be an unsigned integer, got '{s}'")))?,
                Err(_) => 0,
            };
            Ok(selftest(*count, seed))
        }
        Command::Generate { document, id, spec, output } => {
            let doc = if document.exists() { load(document, &cli.overrides)? } else { Document::default() };
            let target = output.clone().unwrap_or_else(|| document.clone());
            generate(doc, id, spec, &target)
        }
        cmd => {
            let path = match cmd {
                Command::Analyze { document, .. }
                | Command::Compare { document, .. }
                | Command::Lcg { document, .. }
                | Command::Zebra { document, .. }
                | Command::Ravf { document, .. }
                | Command::Elastica { document, .. } => document,
                _ => unreachable!("handled above"),
            };
            let doc = load(path, &cli.overrides)?;
            run_on(cmd, &doc, &cli.overrides)
        }
    }
}

/// Runs a command that reads an already parsed document.
pub fn run_on(cmd: &Command, doc: &Document, ov: &Overrides) -> Result<Output, CliError> {
    let mut cfg = resolve_config(doc, ov)?;
    match cmd {
        Command::Analyze { ids, samples, .. } => {
            if let Some(n) = samples {
                cfg.samples = *n;
            }
            analyze(doc, ids, &cfg)
        }
        Command::Compare { hermite, ids, candidates, override_common_data, .. } => {
            compare_cmd(doc, hermite, ids, candidates, *override_common_data, &cfg)
        }
        Command::Lcg { id, samples, .. } => lcg_cmd(doc, id, samples.unwrap_or(cfg.samples)),
        Command::Zebra { a, b, edge_a, edge_b, reversed, view, stations, bands, .. } => {
            let edge = |s: &str| Edge::parse(s).ok_or_else(|| usage(format!("unknown edge '{s}', expected u0, u1, v0 or v1")));
            let boundary = BoundarySpec { a: edge(edge_a)?, b: edge(edge_b)?, reversed: *reversed };
            if let Some(v) = view {
                if v.len() != 3 || !v.iter().all(|x| x.is_finite()) {
                    return Err(usage("--view takes three finite numbers x,y,z"));
                }
                cfg.view = Vec3::new(v[0], v[1], v[2]);
            }
            cfg.stations = stations.unwrap_or(cfg.stations);
            cfg.bands = bands.unwrap_or(cfg.bands);
            zebra(doc, a, b, boundary, &cfg)
        }
        Command::Ravf { ids, .. } => ravf_cmd(doc, ids),
        Command::Elastica { hermite, nodes, max_iters, .. } => elastica(doc, hermite, *nodes, *max_iters, &cfg),
        Command::Generate { .. } | Command::Selftest { .. } => Err(usage("command does not read a document")),
    }
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m
}

fn analyze(doc: &Document, ids: &[String], cfg: &Config) -> Result<Output, CliError> {
    let mut targets: Vec<(&str, &Curve)> = if ids.is_empty() {
        doc.entities
            .iter()
            .filter_map(|e| match &e.payload {
                Payload::Curve { curve, .. } => Some((e.id.as_str(), curve)),
                _ => None,
            })
            .collect()
    } else {
        ids.iter().map(|id| Ok((id.as_str(), curve_of(doc, id)?))).collect::<Result<_, CliError>>()?
    };
    targets.sort_by(|a, b| a.0.cmp(b.0));
    targets.dedup_by(|a, b| a.0 == b.0);
    if targets.is_empty() {
        return Err(usage("no curves to analyze"));
    }
    let reports: Vec<Result<FairnessReport, String>> =
        targets.par_iter().map(|(_, c)| fairness_report(*c, &cfg.fairness).map_err(|e| e.to_string())).collect();

    let mut machine = header("analyze");
    let mut curves = Vec::new();
    let mut text = String::new();
    let mut table = Table::new(&["id", "s", "t", "x", "y", "z", "kappa", "comb_x", "comb_y", "comb_z"]);
    let mut plot = Plot::new("curvature comb", "x", "y").geometric();
    for (k, ((id, curve), report)) in targets.iter().zip(reports).enumerate() {
        let report = report.map_err(|e| domain(format!("curve '{id}': {e}")))?;
        curves.push(json!({"id": id, "kind": kind_of(doc, id), "report": to_value(&report)}));
        text.push_str(&describe_report(id, kind_of(doc, id), &report));

        let profile = sample_profile(*curve, cfg.samples).map_err(|e| domain(format!("curve '{id}': {e}")))?;
        // teeth point away from the centre of curvature, longest one a fifth of the length
        let comb = if report.kappa_max > 0.0 { 0.2 * report.arc_length / report.kappa_max } else { 0.0 };
        let mut tips = Vec::with_capacity(profile.len());
        for (i, p) in profile.samples.iter().enumerate() {
            let side = if i + 1 == profile.len() { Side::Left } else { Side::Right };
            let jet = arc_jet(*curve, p.t, side).map_err(|e| domain(format!("curve '{id}': {e}")))?;
            let (pt, tip) = (jet.point(), jet.point() - jet.derivs[2] * comb);
            table.row(Some(id), &[Some(p.s), Some(p.t), Some(pt.x), Some(pt.y), Some(pt.z), Some(p.kappa), Some(tip.x), Some(tip.y), Some(tip.z)]);
            plot.stroke(k, vec![(pt.x, pt.y), (tip.x, tip.y)]);
            tips.push((tip.x, tip.y));
        }
        plot.series(id, k, trace(curve, 400));
        plot.stroke(k, tips);
    }
    machine.insert("curves".into(), Value::Array(curves));
    Ok(Output { human: text, machine: Value::Object(machine), csv: Some(table.to_csv()), svg: Some(plot.to_svg()), ..Default::default() })
}

fn kind_of<'a>(doc: &'a Document, id: &str) -> &'a str {
    doc.get(id).map(|e| e.payload.kind()).unwrap_or("?")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn describe_report(id: &str, kind: &str, r: &FairnessReport) -> String {
    let mut s = format!("{id} ({kind})\n");
    let mut line = |k: &str, v: String| s.push_str(&format!("  {k:<22}{v}\n"));
    line("arc length", human(r.arc_length));
    line("curvature extrema", r.extrema_count.to_string());
    line("monotone curvature", yes_no(r.monotone_curvature).into());
    line("smoothness order", r.smoothness_order.to_string());
    line("max |kappa|", human(r.kappa_max));
    line("max |dkappa/ds|", human(r.kappa_rate_max));
    line("bending energy", format!("{}{}", human(r.energy), if r.energy_converged { "" } else { " (not converged)" }));
    match &r.lcg_fit {
        Some(f) => line("LCG slope", format!("{} (r^2 {})", human(f.slope), human(f.r_squared))),
        None => line("LCG slope", "n/a".into()),
    }
    for e in &r.extrema {
        let kind = match e.kind {
            fairkit::fairness::ExtremumKind::Max => "max",
            fairkit::fairness::ExtremumKind::Min => "min",
        };
        line("extremum", format!("{kind} at s = {}, kappa = {}", human(e.s), human(e.kappa)));
    }
    s
}

fn compare_cmd(
    doc: &Document,
    hermite: &str,
    ids: &[String],
    candidates: &[String],
    override_common_data: bool,
    cfg: &Config,
) -> Result<Output, CliError> {
    let h = hermite_of(doc, hermite)?;
    let mut cands: Vec<(String, Curve)> =
        ids.iter().map(|id| Ok((id.clone(), curve_of(doc, id)?.clone()))).collect::<Result<_, CliError>>()?;
    let mut generated = Vec::new();
    for name in candidates {
        let kind = CandidateKind::parse(name)
            .ok_or_else(|| usage(format!("unknown candidate '{name}', expected cubic, quintic or quadratic_bezier")))?;
        if cands.iter().any(|(id, _)| id == name) {
            return Err(usage(format!("generated candidate '{name}' clashes with a curve id")));
        }
        let c = hermite_candidates(h, &[kind]).map_err(|e| domain(format!("{name}: {e}")))?.remove(0);
        generated.push(json!({"id": name, "flags": to_value(&c.flags)}));
        cands.push((name.clone(), c.curve));
    }
    if cands.is_empty() {
        return Err(usage("no candidates: give curve ids or --candidates"));
    }
    let mut sheets: BTreeMap<String, Vec<ScoreSheet>> = BTreeMap::new();
    for e in &doc.entities {
        if let Payload::Scores(s) = &e.payload {
            if cands.iter().any(|(id, _)| *id == s.subject) {
                sheets.entry(s.subject.clone()).or_default().push(s.clone());
            }
        }
    }
    let ccfg = CompareConfig {
        fairness: cfg.fairness,
        common: cfg.common,
        override_common_data,
        sheets,
        ..CompareConfig::default()
    };
    let result = compare(&cands, h, &ccfg).map_err(|e| match e {
        ComparatorError::CommonDataViolation(d) => {
            let lines: Vec<String> = d
                .iter()
                .map(|x| format!("  candidate '{}': {} gap {} exceeds {}", x.id, x.quantity, human(x.gap), human(x.tolerance)))
                .collect();
            domain(format!("CommonDataViolation: candidates do not share the Hermite data '{hermite}'\n{}", lines.join("\n")))
        }
        other => domain(other),
    })?;

    let mut machine = header("compare");
    machine.insert("hermite".into(), json!(hermite));
    machine.insert("generated".into(), Value::Array(generated));
    machine.insert("result".into(), to_value(&result));

    let mut table = Table::new(&["id", "rank", "extrema_count", "smoothness_order", "energy", "ravf"]);
    for (rank, id) in result.ranking.iter().enumerate() {
        let m = result.metrics.iter().find(|m| &m.id == id);
        let smooth = m.map(|m| match m.smoothness_order {
            fairkit::fairness::Smoothness::Order(k) => k as f64,
            fairkit::fairness::Smoothness::Analytic => f64::INFINITY,
        });
        table.row(
            Some(id),
            &[
                Some((rank + 1) as f64),
                m.map(|m| m.extrema_count as f64),
                smooth,
                m.map(|m| m.energy),
                m.and_then(|m| m.ravf.map(f64::from)),
            ],
        );
    }
    let mut plot = Plot::new(&format!("candidates for {hermite}"), "x", "y").geometric();
    for (k, id) in result.ranking.iter().enumerate() {
        if let Some((_, c)) = cands.iter().find(|(i, _)| i == id) {
            plot.series(&format!("{}. {id}", k + 1), k, trace(c, 400));
        }
    }
    Ok(Output {
        human: describe_comparison(hermite, &result),
        machine: Value::Object(machine),
        csv: Some(table.to_csv()),
        svg: Some(plot.to_svg()),
        ..Default::default()
    })
}

fn describe_comparison(hermite: &str, r: &ComparisonResult) -> String {
    let mut s = format!(
        "common data {}: {}{}\n",
        hermite,
        r.common_data.level,
        if r.common_data.ok {
            " ok"
        } else if r.common_data_overridden {
            " violated (overridden)"
        } else {
            " violated"
        }
    );
    s.push_str("ranking (ties broken by candidate id)\n");
    for (k, id) in r.ranking.iter().enumerate() {
        let why = r
            .stages
            .iter()
            .flat_map(|st| st.rejected.iter())
            .chain(r.errors.iter())
            .find(|j| &j.id == id)
            .map(|j| format!("  rejected at {}: {}", j.stage.name(), j.reason))
            .unwrap_or_default();
        s.push_str(&format!("  {}. {id}{why}\n", k + 1));
    }
    s.push_str("metrics\n");
    for m in &r.metrics {
        s.push_str(&format!(
            "  {:<16} extrema {:<4} smoothness {:<10} energy {}{}\n",
            m.id,
            m.extrema_count,
            m.smoothness_order.to_string(),
            human(m.energy),
            m.ravf.map(|v| format!("  ravf {v}")).unwrap_or_default()
        ));
    }
    for t in &r.ties {
        s.push_str(&format!("tie: {}\n", t.join(", ")));
    }
    s
}

/// Parses `family:key=value,...` into spiral fields.
fn parse_spiral_arg(spec: &str) -> Result<Map<String, Value>, CliError> {
    let (family, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut fields = Map::new();
    fields.insert("family".into(), json!(family.trim()));
    let (mut ox, mut oy) = (None, None);
    for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| usage(format!("expected key=value, got '{part}'")))?;
        let v: f64 = v.trim().parse().map_err(|_| usage(format!("'{}' is not a number", v.trim())))?;
        match k.trim() {
            "origin_x" => ox = Some(v),
            "origin_y" => oy = Some(v),
            key => {
                if fields.insert(key.to_string(), json!(v)).is_some() {
                    return Err(usage(format!("'{key}' given twice")));
                }
            }
        }
    }
    if ox.is_some() || oy.is_some() {
        fields.insert("origin".into(), json!([ox.unwrap_or(0.0), oy.unwrap_or(0.0)]));
    }
    Ok(fields)
}

fn generate(mut doc: Document, id: &str, spec: &str, target: &Path) -> Result<Output, CliError> {
    let fields = parse_spiral_arg(spec)?;
    let spiral = spiral_from_fields(fields).map_err(|e| usage(format!("spiral spec: {e}")))?;
    let entity = curve_entity(id, CurveSpec::Spiral(spiral), doc.join_tolerance()).map_err(domain)?;
    let value = entity_value(&entity);
    let kind = match spiral.family {
        fairkit::spirals::SpiralFamily::Clothoid { .. } => "clothoid",
        fairkit::spirals::SpiralFamily::LogAesthetic { .. } => "log-aesthetic curve",
        fairkit::spirals::SpiralFamily::Superspiral { .. } => "superspiral",
    };
    doc.push(entity).map_err(|_| usage(format!("id '{id}' already exists in the document")))?;
    let mut machine = header("generate");
    machine.insert("entity".into(), value);
    Ok(Output {
        human: format!(
            "added {kind} '{id}' over s in [{}, {}] to {}\n",
            human(spiral.s0),
            human(spiral.s1),
            target.display()
        ),
        machine: Value::Object(machine),
        document: Some((target.to_path_buf(), serialize_document(&doc))),
        ..Default::default()
    })
}

fn lcg_cmd(doc: &Document, id: &str, samples: usize) -> Result<Output, CliError> {
    let c = curve_of(doc, id)?;
    let r = lcg(c, samples).map_err(|e| domain(format!("curve '{id}': {e}")))?;
    let mut table = Table::new(&["s", "kappa", "x_log_rho", "y_log_measure"]);
    for p in &r.points {
        table.row(None, &[Some(p.s), Some(p.kappa), Some(p.x), Some(p.y)]);
    }
    let mut plot = Plot::new(&format!("logarithmic curvature graph of {id}"), "log rho", "log |ds / d log rho|");
    plot.series("samples", 0, r.points.iter().map(|p| (p.x, p.y)).collect());
    let (x0, x1) = r.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.x), b.max(p.x)));
    let f = r.fit;
    plot.series("fit", 1, vec![(x0, f.intercept + f.slope * x0), (x1, f.intercept + f.slope * x1)]);
    let mut machine = header("lcg");
    machine.insert("id".into(), json!(id));
    machine.insert("convention".into(), json!(fairkit::fairness::LCG_CONVENTION));
    machine.insert("fit".into(), to_value(&r.fit));
    machine.insert("points".into(), to_value(&r.points));
    let human_text = format!(
        "{id}: LCG over {} samples\n  slope      {}\n  intercept  {}\n  r^2        {}\n  axes       {}\n",
        r.points.len(),
        human(f.slope),
        human(f.intercept),
        human(f.r_squared),
        fairkit::fairness::LCG_CONVENTION
    );
    Ok(Output { human: human_text, machine: Value::Object(machine), csv: Some(table.to_csv()), svg: Some(plot.to_svg()), ..Default::default() })
}

fn edge_uv(e: Edge, t: f64) -> (f64, f64) {
    match e {
        Edge::U0 => (0.0, t),
        Edge::U1 => (1.0, t),
        Edge::V0 => (t, 0.0),
        Edge::V1 => (t, 1.0),
    }
}

fn zebra(doc: &Document, a_id: &str, b_id: &str, boundary: BoundarySpec, cfg: &Config) -> Result<Output, CliError> {
    let (a, b) = (patch_of(doc, a_id)?, patch_of(doc, b_id)?);
    if cfg.bands < 2 {
        return Err(usage("need at least 2 zebra bands"));
    }
    let audit = audit_joint(a, b, boundary, cfg.view, cfg.stations, &cfg.audit).map_err(domain)?;
    let view = cfg.view.normalize().ok_or_else(|| usage("zero view vector"))?;
    let mut table = Table::new(&[
        "t",
        "position_gap",
        "normal_angle",
        "curvature_gap_along",
        "curvature_gap_across",
        "curvature_gap_diagonal",
        "zebra_a",
        "zebra_b",
        "band_a",
        "band_b",
        "zebra_kink",
    ]);
    for st in &audit.stations {
        let (ua, va) = edge_uv(boundary.a, st.t);
        let (ub, vb) = edge_uv(boundary.b, if boundary.reversed { 1.0 - st.t } else { st.t });
        let (_, band_a) = zebra_value(a, ua, va, view, cfg.bands).map_err(domain)?;
        let (_, band_b) = zebra_value(b, ub, vb, view, cfg.bands).map_err(domain)?;
        let g = st.curvature_gaps;
        table.row(
            None,
            &[
                Some(st.t),
                Some(st.position_gap),
                Some(st.normal_angle),
                Some(g[0]),
                Some(g[1]),
                Some(g[2]),
                Some(st.zebra_a),
                Some(st.zebra_b),
                Some(band_a as f64),
                Some(band_b as f64),
                Some(st.zebra_kink),
            ],
        );
    }
    let mut plot = Plot::new(&format!("zebra kink along {a_id} | {b_id}"), "boundary parameter t", "kink angle (rad)");
    plot.series("zebra kink", 1, audit.stations.iter().map(|s| (s.t, s.zebra_kink)).collect());
    plot.series("normal angle", 0, audit.stations.iter().map(|s| (s.t, s.normal_angle)).collect());

    let mut machine = header("zebra");
    machine.insert("a".into(), json!(a_id));
    machine.insert("b".into(), json!(b_id));
    machine.insert("boundary".into(), to_value(&boundary));
    machine.insert("view".into(), json!([view.x, view.y, view.z]));
    machine.insert("bands".into(), json!(cfg.bands));
    machine.insert("audit".into(), to_value(&audit));
    let text = format!(
        "joint {a_id}.{} | {b_id}.{}{} over {} stations\n  verdict             {}\n  max position gap    {}\n  max normal angle    {}\n  max curvature gap   {}\n  max zebra kink      {}\n",
        edge_name(boundary.a),
        edge_name(boundary.b),
        if boundary.reversed { " (reversed)" } else { "" },
        audit.stations.len(),
        audit.verdict,
        human(audit.max_position_gap),
        human(audit.max_normal_angle),
        human(audit.max_curvature_gap),
        human(audit.max_zebra_kink),
    );
    Ok(Output { human: text, machine: Value::Object(machine), csv: Some(table.to_csv()), svg: Some(plot.to_svg()), ..Default::default() })
}

fn edge_name(e: Edge) -> &'static str {
    match e {
        Edge::U0 => "u0",
        Edge::U1 => "u1",
        Edge::V0 => "v0",
        Edge::V1 => "v1",
    }
}

fn ravf_cmd(doc: &Document, ids: &[String]) -> Result<Output, CliError> {
    let picked: Vec<(&str, &ScoreSheet)> = if ids.is_empty() {
        doc.entities
            .iter()
            .filter_map(|e| match &e.payload {
                Payload::Scores(s) => Some((e.id.as_str(), s)),
                _ => None,
            })
            .collect()
    } else {
        ids.iter().map(|id| Ok((id.as_str(), sheet_of(doc, id)?))).collect::<Result<_, CliError>>()?
    };
    if picked.is_empty() {
        return Err(usage("no score sheets"));
    }
    let mut by_subject: BTreeMap<&str, Vec<ScoreSheet>> = BTreeMap::new();
    let mut table = Table::new(&["id", "rater", "subject", "ravf"]);
    let mut sheets = Vec::new();
    let mut text = String::from("sheets\n");
    for (id, s) in &picked {
        let r = ravf(s);
        by_subject.entry(s.subject.as_str()).or_default().push((*s).clone());
        table.push(vec![id.to_string(), s.rater.clone(), s.subject.clone(), r.to_string()]);
        sheets.push(json!({"id": id, "rater": s.rater, "subject": s.subject, "ravf": r}));
        text.push_str(&format!("  {id:<16} rater {:<12} subject {:<12} ravf {r:>2}\n", s.rater, s.subject));
    }
    text.push_str("subjects\n");
    let mut aggregates = Vec::new();
    for (subject, list) in &by_subject {
        let agg = aggregate(list).map_err(domain)?;
        text.push_str(&format!("  {subject:<16} raters {:<4} ravf {:>2}\n", agg.raters, agg.ravf));
        aggregates.push(to_value(&agg));
    }
    text.push_str(&format!("rounding: {}\n", fairkit::aesthetics::ROUNDING_RULE));
    let mut machine = header("ravf");
    machine.insert("sheets".into(), Value::Array(sheets));
    machine.insert("aggregates".into(), Value::Array(aggregates));
    Ok(Output { human: text, machine: Value::Object(machine), csv: Some(table.to_csv()), ..Default::default() })
}

fn elastica(doc: &Document, hermite: &str, nodes: usize, max_iters: usize, cfg: &Config) -> Result<Output, CliError> {
    let h = hermite_of(doc, hermite)?;
    if nodes < 8 {
        return Err(usage("elastica needs at least 8 nodes"));
    }
    let fit = fit_minimum_energy_curve(h, nodes, max_iters, cfg.elastica_tol).map_err(domain)?;
    let cubic = cubic_candidate(h).map_err(domain)?;
    let cubic_energy = bending_energy(&cubic, cfg.fairness.energy_tol).map_err(domain)?;
    let kappa = fit.discrete_curvature();

    let mut table = Table::new(&["i", "x", "y", "z", "s", "kappa"]);
    let mut s = 0.0;
    for (i, p) in fit.polyline.iter().enumerate() {
        if i > 0 {
            s += p.distance(fit.polyline[i - 1]);
        }
        let k = if i == 0 || i + 1 == fit.polyline.len() { None } else { Some(kappa[i - 1].1) };
        table.row(None, &[Some(i as f64), Some(p.x), Some(p.y), Some(p.z), Some(s), k]);
    }
    let mut plot = Plot::new(&format!("minimum-energy curve for {hermite}"), "x", "y").geometric();
    plot.series("elastica", 0, fit.polyline.iter().map(|p| (p.x, p.y)).collect());
    plot.series("cubic", 1, trace(&cubic, 400));

    let mut machine = header("elastica");
    machine.insert("hermite".into(), json!(hermite));
    machine.insert("nodes".into(), json!(nodes));
    machine.insert("tolerance".into(), json!(cfg.elastica_tol));
    machine.insert("cubic_energy".into(), json!(cubic_energy));
    machine.insert("fit".into(), to_value(&fit));
    machine.insert("discrete_curvature".into(), json!(kappa.iter().map(|(s, k)| [*s, *k]).collect::<Vec<_>>()));
    let text = format!(
        "elastica through {hermite} with {nodes} nodes\n  energy          {}\n  cubic energy    {}\n  iterations      {}\n  converged       {}\n",
        human(fit.energy),
        human(cubic_energy),
        fit.iterations,
        yes_no(fit.converged)
    );
    Ok(Output { human: text, machine: Value::Object(machine), csv: Some(table.to_csv()), svg: Some(plot.to_svg()), ..Default::default() })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Writes the human report (or JSON for `--json -`) to `stdout` and the
/// other outputs to their files.
pub fn emit(out: &Output, outputs: &Outputs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let stdout_err = |source| CliError::Io { path: PathBuf::from("<stdout>"), source };
    match &outputs.json {
        Some(p) if p.as_os_str() == "-" => stdout.write_all(machine_json(&out.machine).as_bytes()).map_err(stdout_err)?,
        other => {
            if let Some(p) = other {
                write_file(p, &machine_json(&out.machine))?;
            }
            stdout.write_all(out.human.as_bytes()).map_err(stdout_err)?;
        }
    }
    if let (Some(p), Some(text)) = (&outputs.csv, &out.csv) {
        write_file(p, text)?;
    }
    if let (Some(p), Some(text)) = (&outputs.svg, &out.svg) {
        write_file(p, text)?;
    }
    if let Some((p, text)) = &out.document {
        write_file(p, text)?;
    }
    Ok(())
}
