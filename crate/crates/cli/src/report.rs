//! Structured command reports.

use std::fmt::Write;

use dercat_core::correspondence::Correspondence;
use dercat_core::localization::{Letter, LocalizationResult, Method};
use dercat_core::{FinCat, FunctorData, Marking, Mor, NatTrans};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A mathematical negative; the message names the failed property.
    FailsCocartesian,
    NotCertified,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::FailsCocartesian => 1,
            Status::Error => 2,
            Status::NotCertified => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::FailsCocartesian => "fails_cocartesian",
            Status::NotCertified => "not_certified",
            Status::Error => "error",
        }
    }
}

/// How one localization was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergence {
    pub subject: String,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<Convergence>,
    #[serde(default)]
    pub result: Map<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, status: Status) -> Self {
        Report { command: command.into(), status, message: None, convergence: Vec::new(), result: Map::new() }
    }

    pub fn with_message(mut self, message: impl Into<String>) -> Self {
        self.message = Some(message.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.result.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Plain-text summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "status: {}", self.status.as_str()).unwrap();
        if let Some(m) = &self.message {
            writeln!(out, "message: {m}").unwrap();
        }
        for c in &self.convergence {
            let depth = c.depth.map_or(String::new(), |d| format!(" depth {d}"));
            let verdict = if c.converged { "converged" } else { "not converged" };
            writeln!(out, "localization of {}: {}{depth}, {verdict}", c.subject, c.method).unwrap();
        }
        for (k, v) in &self.result {
            match v {
                Value::String(s) if s.contains('\n') => {
                    writeln!(out, "{k}:").unwrap();
                    for line in s.lines() {
                        writeln!(out, "  {line}").unwrap();
                    }
                }
                Value::String(s) => writeln!(out, "{k}: {s}").unwrap(),
                other => writeln!(out, "{k}: {other}").unwrap(),
            }
        }
        out
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::RightFractions => "right_fractions",
        Method::LeftFractions => "left_fractions",
        Method::Zigzag { .. } => "zigzag",
    }
}

pub fn convergence_of(subject: &str, r: &LocalizationResult) -> Convergence {
    let depth = match r.method() {
        Method::Zigzag { depth } => Some(depth),
        _ => None,
    };
    Convergence { subject: subject.to_string(), method: method_name(r.method()).to_string(), depth, converged: true }
}

pub fn category_json(c: &FinCat, with_composition: bool) -> Value {
    let morphisms: Vec<Value> = c
        .morphisms()
        .map(|m| json!({ "name": c.morphism_name(m), "src": c.object_name(c.src(m)), "tgt": c.object_name(c.tgt(m)) }))
        .collect();
    let mut v = json!({ "objects": c.object_names(), "morphisms": morphisms });
    if with_composition {
        let mut table = Vec::new();
        for g in c.morphisms().filter(|&g| !c.is_identity(g)) {
            for f in c.morphisms().filter(|&f| !c.is_identity(f) && c.tgt(f) == c.src(g)) {
                table.push(Value::String(format!(
                    "{} . {} = {}",
                    c.morphism_name(g),
                    c.morphism_name(f),
                    c.morphism_name(c.compose(g, f))
                )));
            }
        }
        v["composition"] = Value::Array(table);
    }
    v
}

pub fn functor_json(f: &FunctorData) -> Value {
    let (c, d) = (f.source(), f.target());
    let objects: Vec<Value> = c.objects().map(|x| json!([c.object_name(x), d.object_name(f.obj(x))])).collect();
    let morphisms: Vec<Value> = c
        .morphisms()
        .filter(|&m| !c.is_identity(m))
        .map(|m| json!([c.morphism_name(m), d.morphism_name(f.mor(m))]))
        .collect();
    json!({ "objects": objects, "morphisms": morphisms })
}

pub fn nat_json(t: &NatTrans) -> Value {
    let (c, d) = (t.source.source(), t.source.target());
    Value::Array(c.objects().map(|x| json!([c.object_name(x), d.morphism_name(t.component(x))])).collect())
}

pub fn marking_json(w: &Marking) -> Value {
    let c = w.host();
    Value::Array(w.non_isos().map(|m| Value::String(c.morphism_name(m).to_string())).collect())
}

pub fn word_text(c: &FinCat, start: usize, word: &[Letter]) -> String {
    let letters: Vec<&Letter> = word.iter().filter(|l| !matches!(l, Letter::Forward(m) | Letter::Inverse(m) if c.is_identity(*m))).collect();
    if letters.is_empty() {
        return format!("id_{}", c.object_name(start));
    }
    letters
        .into_iter()
        .rev()
        .map(|l| match *l {
            Letter::Forward(m) => c.morphism_name(m).to_string(),
            Letter::Inverse(m) => format!("{}^-1", c.morphism_name(m)),
        })
        .collect::<Vec<_>>()
        .join(".")
}

pub fn certificates_json(r: &LocalizationResult) -> Value {
    let (c, l) = (r.source(), r.localized());
    Value::Array(
        l.morphisms()
            .map(|m| json!([l.morphism_name(m), word_text(c, l.src(m), &r.word(m))]))
            .collect(),
    )
}

pub fn correspondence_json(x: &Correspondence) -> Value {
    let t = x.total();
    let levels: Vec<Value> = (0..=x.base_length())
        .map(|i| Value::Array(x.objects_at(i).iter().map(|&o| Value::String(t.object_name(o).to_string())).collect()))
        .collect();
    json!({ "base_length": x.base_length(), "levels": levels, "total": category_json(t, false) })
}

pub fn lifts_json(x: &Correspondence, lifts: &[Mor]) -> Value {
    let t = x.total();
    Value::Array(lifts.iter().filter(|&&m| m < t.num_morphisms()).map(|&m| json!([t.object_name(t.src(m)), t.morphism_name(m)])).collect())
}
