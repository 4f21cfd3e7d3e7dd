//! Technical-aesthetics score sheets and the rounded average value of fairness.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub const CRITERIA_COUNT: usize = 11;
pub const MIN_SCORE: i32 = -3;
pub const MAX_SCORE: i32 = 3;
pub const ROUNDING_RULE: &str = "mean rounded half away from zero";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    ConcisenessIntegrity,
    Expressiveness,
    ProportionalConsistency,
    CompositionalBalance,
    StructuralOrganization,
    Imagery,
    Efficiency,
    Dynamism,
    Scale,
    Plasticity,
    Harmony,
}

impl Criterion {
    pub const ALL: [Criterion; CRITERIA_COUNT] = [
        Criterion::ConcisenessIntegrity,
        Criterion::Expressiveness,
        Criterion::ProportionalConsistency,
        Criterion::CompositionalBalance,
        Criterion::StructuralOrganization,
        Criterion::Imagery,
        Criterion::Efficiency,
        Criterion::Dynamism,
        Criterion::Scale,
        Criterion::Plasticity,
        Criterion::Harmony,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::ConcisenessIntegrity => "conciseness-integrity",
            Criterion::Expressiveness => "expressiveness",
            Criterion::ProportionalConsistency => "proportional-consistency",
            Criterion::CompositionalBalance => "compositional-balance",
            Criterion::StructuralOrganization => "structural-organization",
            Criterion::Imagery => "imagery",
            Criterion::Efficiency => "efficiency",
            Criterion::Dynamism => "dynamism",
            Criterion::Scale => "scale",
            Criterion::Plasticity => "plasticity",
            Criterion::Harmony => "harmony",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(name: &str) -> Option<Criterion> {
        Criterion::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum SheetViolation {
    MissingCriterion { criterion: Criterion },
    UnknownCriterion { name: String },
    DuplicateCriterion { criterion: Criterion },
    ScoreOutOfRange { criterion: Criterion, value: f64 },
    NonIntegerScore { criterion: Criterion, value: f64 },
}

impl fmt::Display for SheetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheetViolation::MissingCriterion { criterion } => write!(f, "missing criterion '{criterion}'"),
            SheetViolation::UnknownCriterion { name } => write!(f, "unknown criterion '{name}'"),
            SheetViolation::DuplicateCriterion { criterion } => write!(f, "criterion '{criterion}' given twice"),
            SheetViolation::ScoreOutOfRange { criterion, value } => {
                write!(f, "score {value} for '{criterion}' is outside [{MIN_SCORE}, {MAX_SCORE}]")
            }
            SheetViolation::NonIntegerScore { criterion, value } => {
                write!(f, "score {value} for '{criterion}' is not an integer")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AestheticsError {
    #[error("invalid score sheet: {}", join(.0))]
    InvalidSheet(Vec<SheetViolation>),
    #[error("no score sheets given")]
    EmptySet,
    #[error("sheets rate different subjects: '{expected}' and '{found}'")]
    MixedSubjects { expected: String, found: String },
}

fn join(v: &[SheetViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One rater's scores for one subject curve, in criterion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScoreSheet {
    pub rater: String,
    pub subject: String,
    pub scores: [i32; CRITERIA_COUNT],
}

impl ScoreSheet {
    pub fn score(&self, c: Criterion) -> i32 {
        self.scores[c.index()]
    }

    pub fn negated(&self) -> ScoreSheet {
        ScoreSheet { scores: self.scores.map(|s| -s), ..self.clone() }
    }
}

/// Checks raw `(criterion name, value)` pairs and reports every problem found.
pub fn validate_sheet(rater: &str, subject: &str, raw: &[(String, f64)]) -> Result<ScoreSheet, AestheticsError> {
    let mut seen: [Option<i32>; CRITERIA_COUNT] = [None; CRITERIA_COUNT];
    let mut violations = Vec::new();
    for (name, value) in raw {
        let Some(criterion) = Criterion::parse(name) else {
            violations.push(SheetViolation::UnknownCriterion { name: name.clone() });
            continue;
        };
        let value = *value;
        if seen[criterion.index()].is_some() {
            violations.push(SheetViolation::DuplicateCriterion { criterion });
            continue;
        }
        if !value.is_finite() || value.fract() != 0.0 {
            violations.push(SheetViolation::NonIntegerScore { criterion, value });
            seen[criterion.index()] = Some(0);
            continue;
        }
        if value < MIN_SCORE as f64 || value > MAX_SCORE as f64 {
            violations.push(SheetViolation::ScoreOutOfRange { criterion, value });
        }
        seen[criterion.index()] = Some(value as i32);
    }
    for c in Criterion::ALL {
        if seen[c.index()].is_none() {
            violations.push(SheetViolation::MissingCriterion { criterion: c });
        }
    }
    if !violations.is_empty() {
        return Err(AestheticsError::InvalidSheet(violations));
    }
    Ok(ScoreSheet { rater: rater.to_string(), subject: subject.to_string(), scores: seen.map(|s| s.unwrap_or(0)) })
}

/// `num / den` rounded half away from zero, for `den > 0`.
fn round_ratio(num: i64, den: i64) -> i32 {
    let q = (2 * num.abs() + den) / (2 * den);
    (num.signum() * q) as i32
}

/// Mean of the eleven scores rounded half away from zero.
pub fn ravf(sheet: &ScoreSheet) -> i32 {
    let sum: i64 = sheet.scores.iter().map(|&s| s as i64).sum();
    round_ratio(sum, CRITERIA_COUNT as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub subject: String,
    pub criterion_means: [f64; CRITERIA_COUNT],
    pub ravf: i32,
    pub raters: usize,
    pub rounding: &'static str,
}

/// Per-criterion means over all raters, then the rounded mean of those means.
///
/// The final rounding is done on the exact rational total, so halves are
/// never misjudged by floating-point error.
pub fn aggregate(sheets: &[ScoreSheet]) -> Result<Aggregate, AestheticsError> {
    let first = sheets.first().ok_or(AestheticsError::EmptySet)?;
    if let Some(s) = sheets.iter().find(|s| s.subject != first.subject) {
        return Err(AestheticsError::MixedSubjects { expected: first.subject.clone(), found: s.subject.clone() });
    }
    let m = sheets.len();
    let mut sums = [0i64; CRITERIA_COUNT];
    for s in sheets {
        for (acc, &v) in sums.iter_mut().zip(s.scores.iter()) {
            *acc += v as i64;
        }
    }
    let total: i64 = sums.iter().sum();
    Ok(Aggregate {
        subject: first.subject.clone(),
        criterion_means: sums.map(|v| v as f64 / m as f64),
        ravf: round_ratio(total, (CRITERIA_COUNT * m) as i64),
        raters: m,
        rounding: ROUNDING_RULE,
    })
}
