//! JSON documents: instances, side-constraint lists and assignments.
//!
//! An instance looks like
//!
//! ```json
//! {"name": "inst_5_4_1", "mode": 2, "m": 4, "n": 5,
//!  "M": [[5, 6, 6, 9, 2], ...], "C": [69, 50, 25, 70],
//!  "gen": {"alpha": 5, "beta": 4, "gamma": 1, "seed": 42,
//!          "m_range": [0, 10], "c_range": [20, 90]}}
//! ```
//!
//! Unknown fields are reported as warnings and otherwise ignored.

use misro_core::{level_mask, Assignment, GenSpec, Instance, Mode, SideConstraint, MAX_LEVEL, MIN_LEVEL};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(#[source] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Invalid(#[from] misro_core::Error),
}

impl JsonError {
    pub fn kind(&self) -> &'static str {
        match self {
            JsonError::Malformed(_) => "json",
            JsonError::Schema(_) => "schema",
            JsonError::Invalid(_) => "invalid-instance",
        }
    }
}

/// A decoded document together with warnings about ignored input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    name: String,
    mode: u8,
    m: usize,
    n: usize,
    #[serde(rename = "M")]
    matrix: Vec<Vec<u32>>,
    #[serde(rename = "C")]
    c: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gen: Option<GenDoc>,
}

#[derive(Serialize, Deserialize)]
struct GenDoc {
    alpha: u32,
    beta: u32,
    gamma: u32,
    seed: u64,
    m_range: [u32; 2],
    c_range: [u32; 2],
}

const INSTANCE_FIELDS: &[&str] = &["name", "mode", "m", "n", "M", "C", "gen"];
const GEN_FIELDS: &[&str] = &["alpha", "beta", "gamma", "seed", "m_range", "c_range"];

fn unknown_fields(value: &Value, known: &[&str], prefix: &str, warnings: &mut Vec<String>) {
    if let Value::Object(map) = value {
        for key in map.keys().filter(|k| !known.contains(&k.as_str())) {
            warnings.push(format!("ignoring unknown field `{prefix}{key}`"));
        }
    }
}

fn decode<T: DeserializeOwned>(value: Value) -> Result<T, JsonError> {
    serde_json::from_value(value).map_err(|e| JsonError::Schema(e.to_string()))
}

pub fn instance_to_json(inst: &Instance) -> String {
    let doc = InstanceDoc {
        name: inst.name.clone(),
        mode: inst.mode.code(),
        m: inst.m,
        n: inst.n,
        matrix: inst.matrix.clone(),
        c: inst.c.clone(),
        gen: inst.gen.as_ref().map(|g| GenDoc {
            alpha: g.alpha,
            beta: g.beta,
            gamma: g.gamma,
            seed: g.seed,
            m_range: [*g.m_range.start(), *g.m_range.end()],
            c_range: [*g.c_range.start(), *g.c_range.end()],
        }),
    };
    let mut out = serde_json::to_string(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn instance_from_json(text: &str) -> Result<Parsed<Instance>, JsonError> {
    let value: Value = serde_json::from_str(text).map_err(JsonError::Malformed)?;
    if !value.is_object() {
        return Err(JsonError::Schema("instance must be a JSON object".into()));
    }
    let mut warnings = Vec::new();
    unknown_fields(&value, INSTANCE_FIELDS, "", &mut warnings);
    if let Some(gen) = value.get("gen") {
        unknown_fields(gen, GEN_FIELDS, "gen.", &mut warnings);
    }
    let doc: InstanceDoc = decode(value)?;
    let mode = Mode::from_code(doc.mode).ok_or_else(|| JsonError::Schema(format!("unknown mode code {}", doc.mode)))?;
    if doc.matrix.len() != doc.m {
        return Err(JsonError::Schema(format!("`m` is {} but `M` has {} rows", doc.m, doc.matrix.len())));
    }
    if let Some((i, row)) = doc.matrix.iter().enumerate().find(|(_, r)| r.len() != doc.n) {
        return Err(JsonError::Schema(format!("`n` is {} but row {} of `M` has {} entries", doc.n, i + 1, row.len())));
    }
    let mut inst = Instance::new(doc.name, mode, doc.matrix, doc.c)?;
    if let Some(g) = doc.gen {
        let spec = GenSpec {
            alpha: g.alpha,
            beta: g.beta,
            gamma: g.gamma,
            mode,
            seed: g.seed,
            m_range: g.m_range[0]..=g.m_range[1],
            c_range: g.c_range[0]..=g.c_range[1],
        };
        spec.check()?;
        inst = inst.with_gen(spec);
    }
    Ok(Parsed { value: inst, warnings })
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SideDoc {
    FixLikelihood { risk: usize, level: u8 },
    FixSeverity { risk: usize, level: u8 },
    RestrictLikelihood { risk: usize, levels: Vec<u8> },
    RestrictSeverity { risk: usize, levels: Vec<u8> },
    MinQuant { risk: usize, value: u32 },
    MaxQuant { risk: usize, value: u32 },
}

fn levels_of(mask: u8) -> Vec<u8> {
    (MIN_LEVEL..=MAX_LEVEL).filter(|l| mask & (1 << (l - 1)) != 0).collect()
}

fn mask_of(levels: &[u8]) -> Result<u8, JsonError> {
    match levels.iter().find(|l| !(MIN_LEVEL..=MAX_LEVEL).contains(l)) {
        Some(l) => Err(JsonError::Schema(format!("level {l} outside [1, 6]"))),
        None => Ok(level_mask(levels.iter().copied())),
    }
}

/// Serializes side constraints as a list of objects tagged by `kind`.
pub fn side_to_json(side: &[SideConstraint]) -> String {
    let docs: Vec<SideDoc> = side
        .iter()
        .map(|c| match *c {
            SideConstraint::FixLikelihood { risk, level } => SideDoc::FixLikelihood { risk, level },
            SideConstraint::FixSeverity { risk, level } => SideDoc::FixSeverity { risk, level },
            SideConstraint::RestrictLikelihood { risk, levels } => {
                SideDoc::RestrictLikelihood { risk, levels: levels_of(levels) }
            }
            SideConstraint::RestrictSeverity { risk, levels } => {
                SideDoc::RestrictSeverity { risk, levels: levels_of(levels) }
            }
            SideConstraint::MinQuant { risk, value } => SideDoc::MinQuant { risk, value },
            SideConstraint::MaxQuant { risk, value } => SideDoc::MaxQuant { risk, value },
        })
        .collect();
    let mut out = serde_json::to_string(&docs).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn side_from_json(text: &str) -> Result<Vec<SideConstraint>, JsonError> {
    let value: Value = serde_json::from_str(text).map_err(JsonError::Malformed)?;
    if !value.is_array() {
        return Err(JsonError::Schema("side constraints must be a JSON array".into()));
    }
    let docs: Vec<SideDoc> = decode(value)?;
    docs.into_iter()
        .map(|d| {
            Ok(match d {
                SideDoc::FixLikelihood { risk, level } => SideConstraint::FixLikelihood { risk, level },
                SideDoc::FixSeverity { risk, level } => SideConstraint::FixSeverity { risk, level },
                SideDoc::RestrictLikelihood { risk, levels } => {
                    SideConstraint::RestrictLikelihood { risk, levels: mask_of(&levels)? }
                }
                SideDoc::RestrictSeverity { risk, levels } => {
                    SideConstraint::RestrictSeverity { risk, levels: mask_of(&levels)? }
                }
                SideDoc::MinQuant { risk, value } => SideConstraint::MinQuant { risk, value },
                SideDoc::MaxQuant { risk, value } => SideConstraint::MaxQuant { risk, value },
            })
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentDoc {
    l: Vec<u8>,
    s: Vec<u8>,
}

/// Serializes the level pairs of an assignment as `{"l": [..], "s": [..]}`.
pub fn assignment_to_json(a: &Assignment) -> String {
    let doc = AssignmentDoc { l: a.likelihood().to_vec(), s: a.severity().to_vec() };
    let mut out = serde_json::to_string(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn assignment_from_json(text: &str, mode: Mode) -> Result<Assignment, JsonError> {
    let value: Value = serde_json::from_str(text).map_err(JsonError::Malformed)?;
    let doc: AssignmentDoc = decode(value)?;
    Ok(Assignment::new(mode, doc.l, doc.s)?)
}
