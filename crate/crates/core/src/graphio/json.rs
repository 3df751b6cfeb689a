use serde::Serialize;
use serde_json::Value;

use super::dot::parse_identifier;
use super::{GraphIoError, Position};
use crate::framework::{Argument, Framework};

#[derive(Serialize)]
struct FrameworkJson<'a> {
    arguments: &'a [Argument],
    attacks: Vec<[Argument; 2]>,
}

fn identifier(value: &Value) -> Result<Argument, GraphIoError> {
    match value {
        Value::Number(n) => parse_identifier(&n.to_string(), None),
        Value::String(s) => parse_identifier(s, None),
        other => Err(GraphIoError::NonIntegerIdentifier {
            id: other.to_string(),
            at: None,
        }),
    }
}

pub(super) fn parse(text: &str) -> Result<Framework, GraphIoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        GraphIoError::syntax(
            Position {
                line: e.line(),
                column: e.column(),
            },
            e.to_string(),
        )
    })?;
    let Value::Object(map) = value else {
        return Err(GraphIoError::Schema("framework must be a JSON object".into()));
    };
    let array = |key: &str| -> Result<&Vec<Value>, GraphIoError> {
        match map.get(key) {
            Some(Value::Array(items)) => Ok(items),
            Some(_) => Err(GraphIoError::Schema(format!("`{key}` must be an array"))),
            None => Err(GraphIoError::Schema(format!("missing `{key}`"))),
        }
    };
    let arguments = array("arguments")?
        .iter()
        .map(identifier)
        .collect::<Result<Vec<_>, _>>()?;
    let mut attacks = Vec::new();
    for pair in array("attacks")? {
        match pair.as_array().map(Vec::as_slice) {
            Some([a, b]) => attacks.push((identifier(a)?, identifier(b)?)),
            _ => {
                return Err(GraphIoError::Schema(format!(
                    "attack {pair} is not a two-element array"
                )))
            }
        }
    }
    if let Some(&(a, b)) = attacks
        .iter()
        .find(|(a, b)| !arguments.contains(a) || !arguments.contains(b))
    {
        let endpoint = if arguments.contains(&a) { b } else { a };
        return Err(GraphIoError::DanglingEdge {
            endpoint: endpoint.to_string(),
        });
    }
    Ok(Framework::new(arguments, attacks).expect("attack endpoints checked above"))
}

pub(super) fn serialize(framework: &Framework) -> String {
    let body = FrameworkJson {
        arguments: framework.arguments(),
        attacks: framework.attacks().iter().map(|&(a, b)| [a, b]).collect(),
    };
    serde_json::to_string(&body).expect("plain integer arrays always serialize")
}
