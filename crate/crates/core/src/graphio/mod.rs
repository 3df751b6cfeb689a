//! Reading and writing frameworks as DOT, GraphML or JSON, and the answer
//! object format.
//!
//! All three framework writers are canonical: nodes in ascending order,
//! edges in lexicographic order. Parsing the output gives back the same
//! framework.

mod answer;
mod dot;
mod graphml;
mod json;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framework::Framework;

pub use answer::{parse_answer, serialize_answer, AnswerObject, AnswerRecord, AnswerShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Dot,
    Graphml,
    Json,
}

impl GraphFormat {
    pub const ALL: [GraphFormat; 3] = [GraphFormat::Dot, GraphFormat::Graphml, GraphFormat::Json];

    /// Human-readable name as used in problem statements.
    pub fn display_name(self) -> &'static str {
        match self {
            GraphFormat::Dot => "Graphviz DOT",
            GraphFormat::Graphml => "GraphML",
            GraphFormat::Json => "JSON",
        }
    }

    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "dot" | "gv" => Some(GraphFormat::Dot),
            "graphml" | "xml" => Some(GraphFormat::Graphml),
            "json" => Some(GraphFormat::Json),
            _ => None,
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::Dot => "dot",
            GraphFormat::Graphml => "graphml",
            GraphFormat::Json => "json",
        })
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" | "gv" => Ok(GraphFormat::Dot),
            "graphml" => Ok(GraphFormat::Graphml),
            "json" => Ok(GraphFormat::Json),
            _ => Err(format!("unknown format `{s}` (expected dot, graphml or json)")),
        }
    }
}

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

fn at_suffix(at: &Option<Position>) -> String {
    at.map(|p| format!(" at {p}")).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphIoError {
    #[error("empty input")]
    EmptyInput,
    #[error("syntax error at {at}: {message}")]
    Syntax { at: Position, message: String },
    #[error("identifier `{id}`{} is not a non-negative integer", at_suffix(.at))]
    NonIntegerIdentifier { id: String, at: Option<Position> },
    #[error("edge endpoint `{endpoint}` has no node declaration")]
    DanglingEdge { endpoint: String },
    #[error("graph must declare edgedefault=\"directed\"")]
    NotDirected,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("no answer object found")]
    NoAnswerFound,
    #[error("labellings range over different argument sets")]
    MixedFramework,
    #[error("a single-record answer needs exactly one labelling, got {0}")]
    SingleArity(usize),
}

impl GraphIoError {
    pub(crate) fn syntax(at: Position, message: impl Into<String>) -> Self {
        GraphIoError::Syntax {
            at,
            message: message.into(),
        }
    }

    pub fn position(&self) -> Option<Position> {
        match self {
            GraphIoError::Syntax { at, .. } => Some(*at),
            GraphIoError::NonIntegerIdentifier { at, .. } => *at,
            _ => None,
        }
    }
}

pub fn parse_framework(text: &str, format: GraphFormat) -> Result<Framework, GraphIoError> {
    if text.trim().is_empty() {
        return Err(GraphIoError::EmptyInput);
    }
    match format {
        GraphFormat::Dot => dot::parse(text),
        GraphFormat::Graphml => graphml::parse(text),
        GraphFormat::Json => json::parse(text),
    }
}

pub fn serialize_framework(framework: &Framework, format: GraphFormat) -> String {
    match format {
        GraphFormat::Dot => dot::serialize(framework),
        GraphFormat::Graphml => graphml::serialize(framework),
        GraphFormat::Json => json::serialize(framework),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_rejected() {
        for format in GraphFormat::ALL {
            assert_eq!(parse_framework("  \n", format), Err(GraphIoError::EmptyInput));
        }
    }

    #[test]
    fn json_mutual_pair() {
        let f = parse_framework(r#"{"arguments":[1,2],"attacks":[[1,2],[2,1]]}"#, GraphFormat::Json).unwrap();
        assert_eq!(f, Framework::new([1, 2], [(1, 2), (2, 1)]).unwrap());
    }

    #[test]
    fn format_names() {
        for format in GraphFormat::ALL {
            assert_eq!(format.to_string().parse::<GraphFormat>(), Ok(format));
        }
        assert_eq!(GraphFormat::from_path(Path::new("x/af.gv")), Some(GraphFormat::Dot));
        assert_eq!(GraphFormat::from_path(Path::new("af.txt")), None);
    }
}
