//! File formats: versioned JSON documents, edge lists, DOT.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cli::RunConfig;
use crate::construct::{EdgeTag, GadgetWitness, WallWitness, WeightedMultigraph};
use crate::verify::{ProbeResult, VerificationReport};

/// Version of every JSON document this crate writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("cannot read {path}: {reason}")]
    Read { path: String, reason: String },

    #[error("cannot write {path}: {reason}")]
    Write { path: String, reason: String },

    #[error("{path}: invalid JSON document: {reason}")]
    Json { path: String, reason: String },

    #[error("{path}:{line}: {reason}")]
    Parse { path: String, line: usize, reason: String },

    #[error("{path}: format_version {found} is not supported (expected {expected})")]
    Version { path: String, found: u32, expected: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Gadget(GadgetWitness),
    Wall(WallWitness),
}

impl Witness {
    pub fn graph(&self) -> &WeightedMultigraph {
        match self {
            Witness::Gadget(w) => &w.graph,
            Witness::Wall(w) => &w.graph,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub format_version: u32,
    pub config: RunConfig,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    pub config: RunConfig,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeDocument {
    pub format_version: u32,
    pub config: RunConfig,
    pub result: ProbeResult,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

/// Parses a versioned document, checking the version before the body so a
/// newer file gets a clear message instead of a field error.
pub fn parse_document<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, IoError> {
    let version: VersionProbe = serde_json::from_str(text).map_err(|e| IoError::Json {
        path: origin.into(),
        reason: e.to_string(),
    })?;
    if version.format_version != FORMAT_VERSION {
        return Err(IoError::Version {
            path: origin.into(),
            found: version.format_version,
            expected: FORMAT_VERSION,
        });
    }
    serde_json::from_str(text).map_err(|e| IoError::Json {
        path: origin.into(),
        reason: e.to_string(),
    })
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|e| IoError::Write {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    parse_document(&read_text(path)?, &path.display().to_string())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents always serialize");
    text.push('\n');
    text
}

/// Parses `u v w` lines (1-based vertex ids, positive weights). `#` starts a
/// comment; blank lines are ignored. The vertex count is the largest id, or
/// a `# vertices N` header if larger.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<WeightedMultigraph, IoError> {
    let err = |line: usize, reason: String| IoError::Parse {
        path: origin.into(),
        line,
        reason,
    };
    let mut edges = Vec::new();
    let mut declared = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.trim().strip_prefix("vertices")) {
            if body.trim().is_empty() {
                declared = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(line_no, format!("bad vertex count `{}`", rest.trim())))?;
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 3 {
            return Err(err(line_no, format!("expected `u v w`, found {} fields", fields.len())));
        }
        let id = |s: &str| -> Result<usize, IoError> {
            match s.parse::<usize>() {
                Ok(0) => Err(err(line_no, "vertex ids are 1-based; found 0".into())),
                Ok(v) => Ok(v - 1),
                Err(_) => Err(err(line_no, format!("bad vertex id `{s}`"))),
            }
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let w: u128 = fields[2]
            .parse()
            .map_err(|_| err(line_no, format!("bad weight `{}`", fields[2])))?;
        edges.push((line_no, u, v, w));
    }
    let n = edges
        .iter()
        .map(|&(_, u, v, _)| u.max(v) + 1)
        .max()
        .unwrap_or(0)
        .max(declared);
    let mut g = WeightedMultigraph::with_vertices(n);
    for (line_no, u, v, w) in edges {
        g.add_edge(u, v, w, EdgeTag::Grid).map_err(|e| err(line_no, e.to_string()))?;
    }
    Ok(g)
}

/// Inverse of [`parse_edge_list`].
pub fn to_edge_list(g: &WeightedMultigraph) -> String {
    let mut out = format!("# vertices {}\n", g.vertex_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.weight);
    }
    out
}

/// Graphviz rendering. Grid vertices are pinned at their positions, chords
/// are drawn in red, and non-unit weights become edge labels.
pub fn to_dot(g: &WeightedMultigraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "'"));
    let _ = writeln!(out, "  node [shape=point];");
    for v in 0..g.vertex_count() {
        if let Some(p) = g.label(v) {
            let _ = writeln!(
                out,
                "  {v} [shape=circle, width=0.2, label=\"\", xlabel=\"({},{})\", pos=\"{},{}!\"];",
                p.row,
                p.col,
                p.col,
                -(p.row as i64)
            );
        }
    }
    for e in g.edges() {
        let mut attrs = Vec::new();
        if e.weight != 1 {
            attrs.push(format!("label=\"{}\"", e.weight));
        }
        match e.tag {
            EdgeTag::Chord { index } => {
                attrs.push("color=red".into());
                attrs.push("penwidth=2".into());
                attrs.push(format!("xlabel=\"e{index}\""));
            }
            EdgeTag::GadgetPath { variant, .. } => {
                let color = ["blue", "black", "darkgreen"][(variant + 1) as usize];
                attrs.push(format!("color={color}"));
            }
            EdgeTag::Grid => {}
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {} -- {};", e.u, e.v);
        } else {
            let _ = writeln!(out, "  {} -- {} [{}];", e.u, e.v, attrs.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let text = "# two triangles\n1 2 1\n2 3 1\n3 1 1 # closing\n\n4 5 2\n5 6 2\n6 4 7\n";
        let g = parse_edge_list(text, "t").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 6));
        assert_eq!(g.edge(5).weight, 7);
        let back = parse_edge_list(&to_edge_list(&g), "t").unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let cases = [
            ("1 2 1\n1 2\n", 2, "expected"),
            ("1 2 1\n\n0 1 1\n", 3, "1-based"),
            ("1 1 1\n", 1, "self-loop"),
            ("1 2 0\n", 1, "weight 0"),
            ("1 2 x\n", 1, "bad weight"),
        ];
        for (text, line, needle) in cases {
            match parse_edge_list(text, "g.txt") {
                Err(IoError::Parse { line: l, reason, .. }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(reason.contains(needle), "{reason}");
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn declared_vertices_keep_isolated_ones() {
        let g = parse_edge_list("# vertices 5\n1 2 1\n", "t").unwrap();
        assert_eq!(g.vertex_count(), 5);
    }

    #[test]
    fn version_mismatch_is_reported() {
        let text = r#"{"format_version": 99, "config": {}, "witness": {}}"#;
        assert!(matches!(
            parse_document::<WitnessDocument>(text, "w.json"),
            Err(IoError::Version { found: 99, .. })
        ));
    }

    #[test]
    fn dot_marks_chords() {
        let mut g = WeightedMultigraph::with_vertices(2);
        g.add_edge(0, 1, 5, EdgeTag::Chord { index: 1 }).unwrap();
        let dot = to_dot(&g, "w");
        assert!(dot.contains("0 -- 1 [label=\"5\", color=red"));
        assert!(dot.starts_with("graph \"w\" {"));
    }
}
