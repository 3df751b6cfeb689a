use std::collections::{BTreeMap, BTreeSet};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::dot::parse_identifier;
use super::{GraphIoError, Position};
use crate::framework::{Argument, Framework};

fn position_of(text: &str, offset: u64) -> Position {
    let offset = (offset as usize).min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    Position { line, column }
}

fn attribute(element: &BytesStart<'_>, key: &[u8], text: &str, at: u64) -> Result<Option<String>, GraphIoError> {
    for attr in element.attributes() {
        let attr = attr.map_err(|e| GraphIoError::syntax(position_of(text, at), e.to_string()))?;
        if attr.key.local_name().as_ref() == key {
            let value = attr
                .unescape_value()
                .map_err(|e| GraphIoError::syntax(position_of(text, at), e.to_string()))?;
            return Ok(Some(value.into_owned()));
        }
    }
    Ok(None)
}

fn required(element: &BytesStart<'_>, key: &str, text: &str, at: u64) -> Result<String, GraphIoError> {
    attribute(element, key.as_bytes(), text, at)?.ok_or_else(|| {
        let name = String::from_utf8_lossy(element.local_name().as_ref()).into_owned();
        GraphIoError::syntax(position_of(text, at), format!("<{name}> lacks the `{key}` attribute"))
    })
}

/// Node ids are `n<int>` or a bare `<int>`.
fn node_number(id: &str, at: Position) -> Result<Argument, GraphIoError> {
    let digits = id.strip_prefix('n').unwrap_or(id);
    parse_identifier(digits, Some(at)).map_err(|_| GraphIoError::NonIntegerIdentifier {
        id: id.to_string(),
        at: Some(at),
    })
}

pub(super) fn parse(text: &str) -> Result<Framework, GraphIoError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let mut saw_graph = false;
    let mut nodes: BTreeMap<String, Argument> = BTreeMap::new();
    let mut edges: Vec<(String, String)> = Vec::new();

    loop {
        let event = reader
            .read_event()
            .map_err(|e| GraphIoError::syntax(position_of(text, reader.error_position()), e.to_string()))?;
        let at = reader.buffer_position();
        match event {
            Event::Start(e) | Event::Empty(e) => match e.local_name().as_ref() {
                b"graph" => {
                    let direction = attribute(&e, b"edgedefault", text, at)?;
                    if direction.as_deref() != Some("directed") {
                        return Err(GraphIoError::NotDirected);
                    }
                    saw_graph = true;
                }
                b"node" => {
                    let id = required(&e, "id", text, at)?;
                    let number = node_number(&id, position_of(text, at))?;
                    nodes.insert(id, number);
                }
                b"edge" => {
                    let source = required(&e, "source", text, at)?;
                    let target = required(&e, "target", text, at)?;
                    edges.push((source, target));
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if !saw_graph {
        return Err(GraphIoError::syntax(position_of(text, 0), "no <graph> element found"));
    }

    let mut attacks = BTreeSet::new();
    for (source, target) in &edges {
        let lookup = |id: &String| {
            nodes
                .get(id)
                .copied()
                .ok_or_else(|| GraphIoError::DanglingEdge { endpoint: id.clone() })
        };
        attacks.insert((lookup(source)?, lookup(target)?));
    }
    Ok(Framework::new(nodes.into_values(), attacks).expect("edge endpoints are resolved against declared nodes"))
}

pub(super) fn serialize(framework: &Framework) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n  \
         <graph id=\"AF\" edgedefault=\"directed\">\n",
    );
    for a in framework.arguments() {
        out.push_str(&format!("    <node id=\"n{a}\"/>\n"));
    }
    for (a, b) in framework.attacks() {
        out.push_str(&format!("    <edge source=\"n{a}\" target=\"n{b}\"/>\n"));
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
