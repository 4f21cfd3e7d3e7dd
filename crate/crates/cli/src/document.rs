//! The `fairkit/1` JSON document: a list of named curves, Hermite data,
//! surface patches and score sheets, plus optional setting overrides.

use std::collections::HashSet;

use fairkit::aesthetics::{validate_sheet, AestheticsError, Criterion, ScoreSheet, SheetViolation};
use fairkit::geom::{construct_curve, points_from_coords, Curve, CurveSpec, Dim, GeomError, Vec3, DEFAULT_JOIN_TOLERANCE};
use fairkit::hermite::HermiteData;
use fairkit::spirals::{SpiralFamily, SpiralSpec};
use fairkit::surfaudit::SurfacePatch;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const FORMAT: &str = "fairkit/1";

/// Tangent lengths within this of one are taken as already normalized.
const UNIT_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("entity '{id}': unknown kind '{kind}'")]
    UnknownEntityKind { id: String, kind: String },
    #[error("duplicate id '{id}'")]
    DuplicateId { id: String },
    #[error("{}: {message}", location(.id, .path))]
    SchemaViolation { id: String, path: String, message: String },
}

fn location(id: &str, path: &str) -> String {
    let who = if id.is_empty() { "document".to_string() } else { format!("entity '{id}'") };
    if path.is_empty() {
        who
    } else {
        format!("{who} at '{path}'")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("document rejected:\n{}", self.diagnostics.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
pub struct DocumentError {
    pub diagnostics: Vec<Diagnostic>,
}

/// Overrides for tolerances and sampling defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elastica_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bands: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub view: Option<[f64; 3]>,
}

impl Settings {
    fn is_empty(&self) -> bool {
        *self == Settings::default()
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Curve { spec: CurveSpec, curve: Curve },
    Hermite(HermiteData),
    Patch(SurfacePatch),
    Scores(ScoreSheet),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Curve { spec, .. } => curve_kind(spec),
            Payload::Hermite(_) => "hermite",
            Payload::Patch(_) => "patch",
            Payload::Scores(_) => "scores",
        }
    }
}

fn curve_kind(spec: &CurveSpec) -> &'static str {
    match spec {
        CurveSpec::Bezier { .. } => "bezier",
        CurveSpec::BSpline { .. } => "bspline",
        CurveSpec::Piecewise { .. } => "piecewise",
        CurveSpec::Polyline { .. } => "polyline",
        CurveSpec::Spiral(_) => "spiral",
    }
}

#[derive(Clone, Debug)]
pub struct Entity {
    pub id: String,
    pub payload: Payload,
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub settings: Settings,
    pub entities: Vec<Entity>,
}

impl Document {
    pub fn get(&self, id: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.id == id)
    }

    /// Adds an entity, refusing a duplicate id.
    pub fn push(&mut self, entity: Entity) -> Result<(), DocumentError> {
        if self.get(&entity.id).is_some() {
            return Err(DocumentError { diagnostics: vec![Diagnostic::DuplicateId { id: entity.id }] });
        }
        self.entities.push(entity);
        Ok(())
    }

    pub fn join_tolerance(&self) -> f64 {
        self.settings.join_tol.unwrap_or(DEFAULT_JOIN_TOLERANCE)
    }
}

/// A schema problem at `path`, relative to the entity.
struct Violation {
    path: String,
    message: String,
}

fn violation(path: impl Into<String>, message: impl ToString) -> Violation {
    Violation { path: path.into(), message: message.to_string() }
}

fn join_path(prefix: &str, rest: &str) -> String {
    match (prefix.is_empty(), rest.is_empty()) {
        (true, _) => rest.to_string(),
        (false, true) => prefix.to_string(),
        (false, false) if rest.starts_with('[') => format!("{prefix}{rest}"),
        (false, false) => format!("{prefix}.{rest}"),
    }
}

/// Deserializes `value` into `T`, reporting the failing field path.
fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, Violation> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        violation(join_path(prefix, &path), e.inner())
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BezierRaw {
    points: Vec<Vec<f64>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BSplineRaw {
    degree: usize,
    knots: Vec<f64>,
    points: Vec<Vec<f64>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolylineRaw {
    points: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PiecewiseRaw {
    segments: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpiralRaw {
    family: String,
    #[serde(default)]
    scale: Option<f64>,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    c0: Option<f64>,
    #[serde(default)]
    c1: Option<f64>,
    #[serde(default)]
    a: Option<f64>,
    #[serde(default)]
    b: Option<f64>,
    #[serde(default)]
    c: Option<f64>,
    #[serde(default)]
    kappa0: Option<f64>,
    s0: f64,
    s1: f64,
    #[serde(default)]
    origin: Option<[f64; 2]>,
    #[serde(default)]
    theta0: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HermiteRaw {
    p0: Vec<f64>,
    p1: Vec<f64>,
    d0: Vec<f64>,
    d1: Vec<f64>,
    #[serde(default)]
    k0: Option<f64>,
    #[serde(default)]
    k1: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PatchRaw {
    points: Vec<Vec<[f64; 3]>>,
    #[serde(default)]
    weights: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScoresRaw {
    rater: String,
    subject: String,
    scores: Map<String, Value>,
}

/// Best field to blame for a construction error.
fn geom_path(prefix: &str, e: &GeomError) -> String {
    let field = match e {
        GeomError::InvalidKnots(_) => "knots".to_string(),
        GeomError::InvalidJoint { index, .. } => format!("segments[{}]", index + 1),
        GeomError::Spiral(_) => String::new(),
        other if other.to_string().contains("weight") => "weights".to_string(),
        _ => "points".to_string(),
    };
    join_path(prefix, &field)
}

fn coords(rows: &[Vec<f64>], prefix: &str) -> Result<(Dim, Vec<Vec3>), Violation> {
    points_from_coords(rows).map_err(|e| violation(join_path(prefix, "points"), e))
}

fn spiral_spec(raw: SpiralRaw, prefix: &str) -> Result<SpiralSpec, Violation> {
    let params = [
        ("scale", raw.scale),
        ("alpha", raw.alpha),
        ("c0", raw.c0),
        ("c1", raw.c1),
        ("a", raw.a),
        ("b", raw.b),
        ("c", raw.c),
        ("kappa0", raw.kappa0),
    ];
    let wanted: &[&str] = match raw.family.as_str() {
        "clothoid" => &["scale"],
        "log_aesthetic" => &["alpha", "c0", "c1"],
        "superspiral" => &["a", "b", "c", "kappa0"],
        other => return Err(violation(join_path(prefix, "family"), format!("unknown spiral family '{other}'"))),
    };
    for (name, v) in params {
        match (wanted.contains(&name), v) {
            (true, None) => return Err(violation(join_path(prefix, name), format!("missing for family '{}'", raw.family))),
            (false, Some(_)) => {
                return Err(violation(join_path(prefix, name), format!("not a parameter of family '{}'", raw.family)))
            }
            _ => {}
        }
    }
    let get = |name: &str| params.iter().find(|p| p.0 == name).and_then(|p| p.1).unwrap_or(0.0);
    let family = match raw.family.as_str() {
        "clothoid" => SpiralFamily::Clothoid { scale: get("scale") },
        "log_aesthetic" => SpiralFamily::LogAesthetic { alpha: get("alpha"), c0: get("c0"), c1: get("c1") },
        _ => SpiralFamily::Superspiral { a: get("a"), b: get("b"), c: get("c"), kappa0: get("kappa0") },
    };
    let origin = raw.origin.unwrap_or([0.0, 0.0]);
    Ok(SpiralSpec { family, s0: raw.s0, s1: raw.s1, origin: (origin[0], origin[1]), theta0: raw.theta0.unwrap_or(0.0) })
}

fn curve_spec(kind: &str, body: Value, prefix: &str) -> Result<CurveSpec, Violation> {
    Ok(match kind {
        "bezier" => {
            let raw: BezierRaw = typed(body, prefix)?;
            let (dim, points) = coords(&raw.points, prefix)?;
            CurveSpec::Bezier { dim, points, weights: raw.weights }
        }
        "bspline" => {
            let raw: BSplineRaw = typed(body, prefix)?;
            let (dim, points) = coords(&raw.points, prefix)?;
            CurveSpec::BSpline { dim, degree: raw.degree, knots: raw.knots, points, weights: raw.weights }
        }
        "polyline" => {
            let raw: PolylineRaw = typed(body, prefix)?;
            let (dim, points) = coords(&raw.points, prefix)?;
            CurveSpec::Polyline { dim, points }
        }
        "spiral" => CurveSpec::Spiral(spiral_spec(typed(body, prefix)?, prefix)?),
        "piecewise" => {
            let raw: PiecewiseRaw = typed(body, prefix)?;
            let mut segments = Vec::with_capacity(raw.segments.len());
            for (i, seg) in raw.segments.into_iter().enumerate() {
                let at = join_path(prefix, &format!("segments[{i}]"));
                let (kind, rest) = split_kind(seg, &at)?;
                if !CURVE_KINDS.contains(&kind.as_str()) {
                    return Err(violation(join_path(&at, "kind"), format!("'{kind}' is not a curve kind")));
                }
                segments.push(curve_spec(&kind, rest, &at)?);
            }
            CurveSpec::Piecewise { segments }
        }
        _ => unreachable!("caller checks the kind"),
    })
}

const CURVE_KINDS: [&str; 5] = ["bezier", "bspline", "piecewise", "polyline", "spiral"];
const ENTITY_KINDS: [&str; 8] = ["bezier", "bspline", "piecewise", "polyline", "spiral", "hermite", "patch", "scores"];

/// Removes and returns the `kind` tag of an object.
fn split_kind(value: Value, prefix: &str) -> Result<(String, Value), Violation> {
    let Value::Object(mut map) = value else {
        return Err(violation(prefix, "expected an object"));
    };
    match map.remove("kind") {
        Some(Value::String(k)) => Ok((k, Value::Object(map))),
        Some(_) => Err(violation(join_path(prefix, "kind"), "expected a string")),
        None => Err(violation(join_path(prefix, "kind"), "missing field")),
    }
}

fn vector(v: &[f64], path: &str) -> Result<(Dim, Vec3), Violation> {
    match v.len() {
        2 => Ok((Dim::Two, Vec3::xy(v[0], v[1]))),
        3 => Ok((Dim::Three, Vec3::new(v[0], v[1], v[2]))),
        n => Err(violation(path, format!("expected 2 or 3 coordinates, got {n}"))),
    }
}

/// Unit direction; vectors already unit to within rounding are kept as given
/// so that a written document reads back bit for bit.
fn direction(v: Vec3, path: &str) -> Result<Vec3, Violation> {
    let n = v.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(violation(path, "direction must be a nonzero finite vector"));
    }
    Ok(if (n - 1.0).abs() <= UNIT_SLACK { v } else { v / n })
}

fn hermite(raw: HermiteRaw) -> Result<HermiteData, Violation> {
    let (dim, p0) = vector(&raw.p0, "p0")?;
    let mut parts = Vec::new();
    for (name, v) in [("p1", &raw.p1), ("d0", &raw.d0), ("d1", &raw.d1)] {
        let (d, p) = vector(v, name)?;
        if d != dim {
            return Err(violation(name, "dimension differs from p0"));
        }
        parts.push(p);
    }
    let d0 = direction(parts[1], "d0")?;
    let d1 = direction(parts[2], "d1")?;
    HermiteData::new(dim, p0, parts[0], d0, d1, raw.k0, raw.k1).map_err(|e| violation("", e))
}

fn patch(raw: PatchRaw) -> Result<SurfacePatch, Violation> {
    let points = raw.points.iter().map(|r| r.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect()).collect();
    SurfacePatch::new(points, raw.weights).map_err(|e| violation("points", e))
}

fn scores(raw: ScoresRaw) -> Result<ScoreSheet, Vec<Violation>> {
    let mut pairs = Vec::with_capacity(raw.scores.len());
    for (name, v) in &raw.scores {
        match v.as_f64() {
            Some(x) => pairs.push((name.clone(), x)),
            None => return Err(vec![violation(format!("scores.{name}"), "expected a number")]),
        }
    }
    validate_sheet(&raw.rater, &raw.subject, &pairs).map_err(|e| match e {
        AestheticsError::InvalidSheet(list) => list
            .iter()
            .map(|v| {
                let field = match v {
                    SheetViolation::MissingCriterion { criterion }
                    | SheetViolation::DuplicateCriterion { criterion }
                    | SheetViolation::ScoreOutOfRange { criterion, .. }
                    | SheetViolation::NonIntegerScore { criterion, .. } => criterion.name().to_string(),
                    SheetViolation::UnknownCriterion { name } => name.clone(),
                };
                violation(format!("scores.{field}"), v)
            })
            .collect(),
        other => vec![violation("scores", other)],
    })
}

fn entity(kind: &str, body: Value, join_tol: f64) -> Result<Payload, Vec<Violation>> {
    let one = |v: Violation| vec![v];
    Ok(match kind {
        "hermite" => Payload::Hermite(hermite(typed(body, "").map_err(one)?).map_err(one)?),
        "patch" => Payload::Patch(patch(typed(body, "").map_err(one)?).map_err(one)?),
        "scores" => Payload::Scores(scores(typed(body, "").map_err(one)?)?),
        _ => {
            let spec = curve_spec(kind, body, "").map_err(one)?;
            let curve = construct_curve(&spec, join_tol).map_err(|e| one(violation(geom_path("", &e), e)))?;
            Payload::Curve { spec, curve }
        }
    })
}

/// Parses and validates a whole document, collecting every diagnostic.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    parse_document_with(text, None)
}

/// As [`parse_document`], with piecewise joins checked against `join_tol`
/// instead of the document setting.
pub fn parse_document_with(text: &str, join_tol: Option<f64>) -> Result<Document, DocumentError> {
    let fail = |d: Diagnostic| DocumentError { diagnostics: vec![d] };
    let root: Value = serde_json::from_str(text).map_err(|e| {
        fail(Diagnostic::SyntaxError { line: e.line(), column: e.column(), message: e.to_string() })
    })?;
    let doc_violation = |path: &str, message: &str| Diagnostic::SchemaViolation {
        id: String::new(),
        path: path.to_string(),
        message: message.to_string(),
    };
    let Value::Object(mut root) = root else {
        return Err(fail(doc_violation("", "expected an object")));
    };
    match root.remove("format") {
        Some(Value::String(f)) if f == FORMAT => {}
        Some(Value::String(f)) => return Err(fail(doc_violation("format", &format!("unsupported format '{f}', expected '{FORMAT}'")))),
        Some(_) => return Err(fail(doc_violation("format", "expected a string"))),
        None => return Err(fail(doc_violation("format", "missing field"))),
    }
    let settings: Settings = match root.remove("settings") {
        None => Settings::default(),
        Some(v) => typed(v, "settings").map_err(|v| fail(doc_violation(&v.path, &v.message)))?,
    };
    let entities = match root.remove("entities") {
        Some(Value::Array(a)) => a,
        Some(_) => return Err(fail(doc_violation("entities", "expected an array"))),
        None => return Err(fail(doc_violation("entities", "missing field"))),
    };
    if let Some(key) = root.keys().next() {
        return Err(fail(doc_violation(key, "unknown field")));
    }

    let join_tol = join_tol.or(settings.join_tol).unwrap_or(DEFAULT_JOIN_TOLERANCE);
    let mut diagnostics = Vec::new();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(entities.len());
    for (i, value) in entities.into_iter().enumerate() {
        let fallback = format!("entities[{i}]");
        let Value::Object(mut map) = value else {
            diagnostics.push(doc_violation(&fallback, "expected an object"));
            continue;
        };
        let id = match map.remove("id") {
            Some(Value::String(s)) if !s.is_empty() => s,
            _ => {
                diagnostics.push(doc_violation(&format!("{fallback}.id"), "expected a non-empty string"));
                continue;
            }
        };
        if !seen.insert(id.clone()) {
            diagnostics.push(Diagnostic::DuplicateId { id });
            continue;
        }
        let kind = match map.remove("kind") {
            Some(Value::String(s)) => s,
            _ => {
                diagnostics.push(Diagnostic::SchemaViolation { id, path: "kind".into(), message: "expected a string".into() });
                continue;
            }
        };
        if !ENTITY_KINDS.contains(&kind.as_str()) {
            diagnostics.push(Diagnostic::UnknownEntityKind { id, kind });
            continue;
        }
        match entity(&kind, Value::Object(map), join_tol) {
            Ok(payload) => out.push(Entity { id, payload }),
            Err(vs) => diagnostics.extend(vs.into_iter().map(|v| Diagnostic::SchemaViolation {
                id: id.clone(),
                path: v.path,
                message: v.message,
            })),
        }
    }
    if !diagnostics.is_empty() {
        return Err(DocumentError { diagnostics });
    }
    Ok(Document { settings, entities: out })
}

fn coords_value(dim: Dim, p: Vec3) -> Value {
    match dim {
        Dim::Two => json!([p.x, p.y]),
        Dim::Three => json!([p.x, p.y, p.z]),
    }
}

fn points_value(dim: Dim, points: &[Vec3]) -> Value {
    Value::Array(points.iter().map(|&p| coords_value(dim, p)).collect())
}

fn curve_fields(spec: &CurveSpec, map: &mut Map<String, Value>) {
    match spec {
        CurveSpec::Bezier { dim, points, weights } => {
            map.insert("points".into(), points_value(*dim, points));
            if let Some(w) = weights {
                map.insert("weights".into(), json!(w));
            }
        }
        CurveSpec::BSpline { dim, degree, knots, points, weights } => {
            map.insert("degree".into(), json!(degree));
            map.insert("knots".into(), json!(knots));
            map.insert("points".into(), points_value(*dim, points));
            if let Some(w) = weights {
                map.insert("weights".into(), json!(w));
            }
        }
        CurveSpec::Polyline { dim, points } => {
            map.insert("points".into(), points_value(*dim, points));
        }
        CurveSpec::Piecewise { segments } => {
            let segs = segments
                .iter()
                .map(|s| {
                    let mut m = Map::new();
                    m.insert("kind".into(), json!(curve_kind(s)));
                    curve_fields(s, &mut m);
                    Value::Object(m)
                })
                .collect();
            map.insert("segments".into(), Value::Array(segs));
        }
        CurveSpec::Spiral(s) => spiral_fields(s, map),
    }
}

fn spiral_fields(s: &SpiralSpec, map: &mut Map<String, Value>) {
    match s.family {
        SpiralFamily::Clothoid { scale } => {
            map.insert("family".into(), json!("clothoid"));
            map.insert("scale".into(), json!(scale));
        }
        SpiralFamily::LogAesthetic { alpha, c0, c1 } => {
            map.insert("family".into(), json!("log_aesthetic"));
            map.insert("alpha".into(), json!(alpha));
            map.insert("c0".into(), json!(c0));
            map.insert("c1".into(), json!(c1));
        }
        SpiralFamily::Superspiral { a, b, c, kappa0 } => {
            map.insert("family".into(), json!("superspiral"));
            map.insert("a".into(), json!(a));
            map.insert("b".into(), json!(b));
            map.insert("c".into(), json!(c));
            map.insert("kappa0".into(), json!(kappa0));
        }
    }
    map.insert("s0".into(), json!(s.s0));
    map.insert("s1".into(), json!(s.s1));
    map.insert("origin".into(), json!([s.origin.0, s.origin.1]));
    map.insert("theta0".into(), json!(s.theta0));
}

/// JSON form of one entity, fields in a fixed order.
pub fn entity_value(e: &Entity) -> Value {
    let mut map = Map::new();
    map.insert("id".into(), json!(e.id));
    map.insert("kind".into(), json!(e.payload.kind()));
    match &e.payload {
        Payload::Curve { spec, .. } => curve_fields(spec, &mut map),
        Payload::Hermite(h) => {
            for (name, p) in [("p0", h.p0), ("p1", h.p1), ("d0", h.d0), ("d1", h.d1)] {
                map.insert(name.into(), coords_value(h.dim, p));
            }
            if let Some(k) = h.k0 {
                map.insert("k0".into(), json!(k));
            }
            if let Some(k) = h.k1 {
                map.insert("k1".into(), json!(k));
            }
        }
        Payload::Patch(p) => {
            let net: Vec<Value> = p.points().iter().map(|r| points_value(Dim::Three, r)).collect();
            map.insert("points".into(), Value::Array(net));
            if let Some(w) = p.weights() {
                map.insert("weights".into(), json!(w));
            }
        }
        Payload::Scores(s) => {
            map.insert("rater".into(), json!(s.rater));
            map.insert("subject".into(), json!(s.subject));
            let scores: Map<String, Value> = Criterion::ALL.iter().map(|c| (c.name().to_string(), json!(s.score(*c)))).collect();
            map.insert("scores".into(), Value::Object(scores));
        }
    }
    Value::Object(map)
}

/// Canonical text of a document: pretty JSON with shortest round-trip numbers.
pub fn serialize_document(doc: &Document) -> String {
    let mut root = Map::new();
    root.insert("format".into(), json!(FORMAT));
    if !doc.settings.is_empty() {
        root.insert("settings".into(), serde_json::to_value(&doc.settings).expect("settings serialize"));
    }
    root.insert("entities".into(), Value::Array(doc.entities.iter().map(entity_value).collect()));
    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("document serializes");
    text.push('\n');
    text
}

/// Spiral description from the same fields a `spiral` entity carries.
pub fn spiral_from_fields(fields: Map<String, Value>) -> Result<SpiralSpec, String> {
    let to_text = |v: Violation| if v.path.is_empty() { v.message } else { format!("{}: {}", v.path, v.message) };
    spiral_spec(typed(Value::Object(fields), "").map_err(to_text)?, "").map_err(to_text)
}

/// Builds an entity from a curve description, as `generate` does.
pub fn curve_entity(id: &str, spec: CurveSpec, join_tol: f64) -> Result<Entity, GeomError> {
    let curve = construct_curve(&spec, join_tol)?;
    Ok(Entity { id: id.to_string(), payload: Payload::Curve { spec, curve } })
}
