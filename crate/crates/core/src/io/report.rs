//! Analysis reports in JSON and plain text.
//!
//! The text form is rendered from the JSON value, so both carry the same
//! fields in the same order.

use serde::Serialize;
use serde_json::Value;

use super::text::{format_model, ModelFile};
use crate::analyses::{Answer, BoundReport, Options, Verdict, Witness};
use crate::coverability::{ExtValue, ExtendedVector, KmBranch};
use crate::model::{Configuration, Vass};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub problem: String,
    pub inputs: Inputs,
    pub verdict: Answer,
    pub method: String,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    /// Present when the verdict is unknown.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caps: Option<Caps>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    pub wall_time_ms: f64,
}

impl Serialize for Answer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inputs {
    pub model: String,
    pub init: String,
    /// 1-based components the question is about.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigReport {
    pub state: String,
    /// Decimal strings, or `"omega"`.
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentReport {
    pub transitions: Vec<usize>,
    pub nodes: Vec<ConfigReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessReport {
    Run {
        /// `"input"` or `"derived"`.
        model: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        derived_model: Option<String>,
        transitions: Vec<usize>,
        marks: Vec<usize>,
        configurations: Vec<ConfigReport>,
    },
    Branches {
        model: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        derived_model: Option<String>,
        segments: Vec<SegmentReport>,
    },
    Static {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub depth_cap: usize,
    pub km_cap: usize,
    pub state_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: u32,
    pub k: u32,
    pub absmax_t: String,
    pub absmax_p: String,
    pub pic_t: String,
    pub c1: u32,
    pub c: u32,
    pub g: Vec<String>,
    pub closed_bound_log2: String,
}

impl From<&BoundReport> for BoundsReport {
    fn from(b: &BoundReport) -> Self {
        BoundsReport {
            n: b.params.n,
            k: b.params.k,
            absmax_t: b.params.absmax_t.to_string(),
            absmax_p: b.params.absmax_p.to_string(),
            pic_t: b.params.pic_t.to_string(),
            c1: b.params.c1,
            c: b.params.c,
            g: b.g.clone(),
            closed_bound_log2: b.closed_log2.clone(),
        }
    }
}

fn config(vass: &Vass, c: &Configuration) -> ConfigReport {
    ConfigReport {
        state: vass.state_name(c.state()).to_string(),
        values: c.values().iter().map(ToString::to_string).collect(),
    }
}

fn ext_config(state: &str, v: &ExtendedVector) -> ConfigReport {
    ConfigReport {
        state: state.to_string(),
        values: v
            .0
            .iter()
            .map(|x| match x {
                ExtValue::Finite(k) => k.to_string(),
                ExtValue::Omega => "omega".to_string(),
            })
            .collect(),
    }
}

fn segment(b: &KmBranch) -> SegmentReport {
    SegmentReport {
        transitions: b.labels.clone(),
        nodes: b.nodes.iter().map(|(s, v)| ext_config(s, v)).collect(),
    }
}

fn model_fields(model: &Option<Vass>) -> (String, Option<String>) {
    match model {
        None => ("input".into(), None),
        Some(v) => (
            "derived".into(),
            Some(format_model(&ModelFile {
                vass: v.clone(),
                init: None,
                internal: None,
            })),
        ),
    }
}

impl WitnessReport {
    /// `input` is the analysed model; derived models travel with the witness.
    pub fn new(w: &Witness, input: &Vass) -> Self {
        match w {
            Witness::Run {
                run,
                decomposition,
                model,
            } => {
                let (tag, derived_model) = model_fields(model);
                let on = model.as_ref().unwrap_or(input);
                let configurations = run
                    .configurations(on)
                    .expect("witness runs are valid")
                    .iter()
                    .map(|c| config(on, c))
                    .collect();
                WitnessReport::Run {
                    model: tag,
                    derived_model,
                    transitions: run.path().to_vec(),
                    marks: decomposition.marks.clone(),
                    configurations,
                }
            }
            Witness::Branches { segments, model } => {
                let (tag, derived_model) = model_fields(model);
                WitnessReport::Branches {
                    model: tag,
                    derived_model,
                    segments: segments.iter().map(segment).collect(),
                }
            }
            Witness::Static(reason) => WitnessReport::Static {
                reason: reason.clone(),
            },
        }
    }
}

impl Report {
    pub fn new(problem: &str, inputs: Inputs, verdict: &Verdict, input: &Vass, opts: &Options) -> Self {
        Report {
            problem: problem.to_string(),
            inputs,
            verdict: verdict.answer,
            method: verdict.method.as_str().to_string(),
            note: verdict.note.clone(),
            witness: verdict.witness.as_ref().map(|w| WitnessReport::new(w, input)),
            caps: (verdict.answer == Answer::Unknown).then_some(Caps {
                depth_cap: opts.depth_cap,
                km_cap: opts.km_cap,
                state_cap: opts.state_cap,
            }),
            bounds: verdict.bounds.as_ref().map(BoundsReport::from),
            wall_time_ms: 0.0,
        }
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render(&self.to_json_value(), 0, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("-".into()),
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::String(s) if s.contains('\n') => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  | {line}\n"));
                        }
                    }
                    Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
                        let joined: Vec<String> = items.iter().filter_map(scalar).collect();
                        out.push_str(&format!("{pad}{k}: [{}]\n", joined.join(", ")));
                    }
                    x => match scalar(x) {
                        Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            render(x, depth + 1, out);
                        }
                    },
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(map) if map.len() == 2 && map.contains_key("state") && map.contains_key("values") => {
                        let vals: Vec<String> = map["values"]
                            .as_array()
                            .map(|a| a.iter().filter_map(scalar).collect())
                            .unwrap_or_default();
                        let state = scalar(&map["state"]).unwrap_or_default();
                        out.push_str(&format!("{pad}- {state} ({})\n", vals.join(", ")));
                    }
                    item => match scalar(item) {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            render(item, depth + 1, out);
                        }
                    },
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
