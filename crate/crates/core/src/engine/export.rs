use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MealyAutomaton;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(Self::Dot),
            "json" => Ok(Self::Json),
            other => Err(Error::Unsupported(format!("automaton format {other:?}"))),
        }
    }
}

/// Serialized automaton with rendered states, in BFS discovery order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDoc {
    pub degree: usize,
    pub initial: usize,
    pub states: Vec<String>,
    pub transitions: Vec<Vec<usize>>,
    pub outputs: Vec<Vec<usize>>,
}

impl AutomatonDoc {
    pub fn new<E>(a: &MealyAutomaton<E>, render: impl Fn(&E) -> String) -> Self {
        Self {
            degree: a.degree,
            initial: a.initial(),
            states: a.states.iter().map(render).collect(),
            transitions: a.transitions.clone(),
            outputs: a.outputs.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Graphviz digraph; edge q → δ(q,i) is labeled "i|λ(q,i)".
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
        for (q, name) in self.states.iter().enumerate() {
            let shape = if q == self.initial { ", shape=doublecircle" } else { "" };
            let _ = writeln!(out, "  q{q} [label=\"{}\"{shape}];", escape(name));
        }
        for (q, row) in self.transitions.iter().enumerate() {
            for (i, &t) in row.iter().enumerate() {
                let _ = writeln!(out, "  q{q} -> q{t} [label=\"{i}|{}\"];", self.outputs[q][i]);
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn export_automaton<E>(a: &MealyAutomaton<E>, render: impl Fn(&E) -> String, format: ExportFormat) -> String {
    let doc = AutomatonDoc::new(a, render);
    match format {
        ExportFormat::Dot => doc.to_dot(),
        ExportFormat::Json => doc.to_json(),
    }
}
