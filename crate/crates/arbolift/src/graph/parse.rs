//! Parser for the line-oriented graph file grammar:
//!
//! ```text
//! fold <k>                                      # optional, first
//! vertex <name>
//! edge <src> <tgt> weight <poly-expr> [voltage <perm>]
//! ```
//!
//! `#` starts a comment. A `fold` header makes the file a voltage graph,
//! in which case every edge needs a voltage permutation on {1..k}.

use super::{GraphError, Permutation, VoltageGraph, WeightedDigraph};
use crate::ring::Poly;

/// Result of parsing a graph file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedGraph {
    Weighted(WeightedDigraph),
    Voltage(VoltageGraph),
}

impl ParsedGraph {
    /// The underlying weighted digraph, voltages or not.
    pub fn base(&self) -> &WeightedDigraph {
        match self {
            ParsedGraph::Weighted(g) => g,
            ParsedGraph::Voltage(vg) => vg.base(),
        }
    }

    /// Discards voltages when present.
    pub fn into_base(self) -> WeightedDigraph {
        match self {
            ParsedGraph::Weighted(g) => g,
            ParsedGraph::Voltage(vg) => vg.base().clone(),
        }
    }

    pub fn into_voltage(self) -> Result<VoltageGraph, GraphError> {
        match self {
            ParsedGraph::Weighted(_) => Err(GraphError::NotAVoltageGraph),
            ParsedGraph::Voltage(vg) => Ok(vg),
        }
    }
}

fn err(line: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        reason: reason.into(),
    }
}

pub(super) fn parse(text: &str) -> Result<ParsedGraph, GraphError> {
    let mut graph = WeightedDigraph::new();
    let mut fold: Option<usize> = None;
    let mut voltages: Vec<Option<(Permutation, usize)>> = Vec::new();
    let mut saw_declaration = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(&directive) = tokens.first() else {
            continue;
        };
        match directive {
            "fold" => {
                if fold.is_some() {
                    return Err(err(lineno, "duplicate fold header"));
                }
                if saw_declaration {
                    return Err(err(lineno, "fold header must precede vertex and edge lines"));
                }
                let [_, value] = tokens.as_slice() else {
                    return Err(err(lineno, "expected `fold <k>`"));
                };
                let k: usize = value
                    .parse()
                    .map_err(|_| err(lineno, format!("bad fold count `{value}`")))?;
                if k < 1 {
                    return Err(err(lineno, "fold count must be at least 1"));
                }
                fold = Some(k);
            }
            "vertex" => {
                saw_declaration = true;
                let [_, name] = tokens.as_slice() else {
                    return Err(err(lineno, "expected `vertex <name>`"));
                };
                graph
                    .add_vertex(name)
                    .map_err(|e| err(lineno, e.to_string()))?;
            }
            "edge" => {
                saw_declaration = true;
                if tokens.len() < 5 || tokens[3] != "weight" {
                    return Err(err(
                        lineno,
                        "expected `edge <src> <tgt> weight <expr> [voltage <perm>]`",
                    ));
                }
                let src = graph
                    .vertex_by_name(tokens[1])
                    .ok_or_else(|| err(lineno, format!("unknown vertex `{}`", tokens[1])))?;
                let tgt = graph
                    .vertex_by_name(tokens[2])
                    .ok_or_else(|| err(lineno, format!("unknown vertex `{}`", tokens[2])))?;
                // The voltage clause, when present, is the last two tokens.
                let (weight_tokens, voltage_text) =
                    if tokens.len() >= 7 && tokens[tokens.len() - 2] == "voltage" {
                        (&tokens[4..tokens.len() - 2], Some(tokens[tokens.len() - 1]))
                    } else {
                        (&tokens[4..], None)
                    };
                if weight_tokens.is_empty() {
                    return Err(err(lineno, "missing weight expression"));
                }
                let weight: Poly = weight_tokens
                    .join(" ")
                    .parse()
                    .map_err(|e| err(lineno, format!("bad weight: {e}")))?;
                graph
                    .add_edge(src, tgt, weight)
                    .map_err(|e| err(lineno, e.to_string()))?;
                let voltage = voltage_text
                    .map(Permutation::parse)
                    .transpose()
                    .map_err(|e| err(lineno, e.to_string()))?;
                voltages.push(voltage.map(|p| (p, lineno)));
            }
            other => {
                return Err(err(lineno, format!("unknown directive `{other}`")));
            }
        }
    }

    match fold {
        None => {
            if let Some(pos) = voltages.iter().position(Option::is_some) {
                let (_, lineno) = voltages[pos].as_ref().unwrap();
                return Err(err(*lineno, "voltage given but no fold header"));
            }
            Ok(ParsedGraph::Weighted(graph))
        }
        Some(k) => {
            let mut perms = Vec::with_capacity(voltages.len());
            for (edge, voltage) in voltages.into_iter().enumerate() {
                let Some((perm, lineno)) = voltage else {
                    let e = &graph.edges()[edge];
                    return Err(GraphError::MissingVoltage {
                        edge,
                        src: graph.vertex_name(e.src).to_string(),
                        tgt: graph.vertex_name(e.tgt).to_string(),
                        k,
                    });
                };
                if perm.k() != k {
                    return Err(err(
                        lineno,
                        format!("voltage has {} images but fold is {}", perm.k(), k),
                    ));
                }
                perms.push(perm);
            }
            Ok(ParsedGraph::Voltage(VoltageGraph::new(graph, k, perms)?))
        }
    }
}
