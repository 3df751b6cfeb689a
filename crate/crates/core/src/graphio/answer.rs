//! The answer object: one `{"IN":[..],"OUT":[..],"UNDEC":[..]}` record per
//! labelling, lists sorted ascending. A single record is written bare, several
//! as a JSON array.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::GraphIoError;
use crate::framework::{Argument, Framework, Label, Labelling};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnswerRecord {
    #[serde(rename = "IN")]
    pub ins: Vec<Argument>,
    #[serde(rename = "OUT")]
    pub outs: Vec<Argument>,
    #[serde(rename = "UNDEC")]
    pub undecs: Vec<Argument>,
}

impl AnswerRecord {
    pub fn from_labelling(labelling: &Labelling) -> Self {
        Self {
            ins: labelling.with_label(Label::In),
            outs: labelling.with_label(Label::Out),
            undecs: labelling.with_label(Label::Undec),
        }
    }

    pub fn extension(&self) -> BTreeSet<Argument> {
        self.ins.iter().copied().collect()
    }

    pub fn to_labelling(&self) -> Labelling {
        Labelling::from_sets(
            self.ins.iter().copied(),
            self.outs.iter().copied(),
            self.undecs.iter().copied(),
        )
        .expect("answer records hold disjoint lists")
    }
}

/// Whether an answer is written as one bare record or as a list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerShape {
    Single,
    List,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AnswerObject {
    pub labellings: Vec<AnswerRecord>,
}

impl AnswerObject {
    pub fn extensions(&self) -> Vec<BTreeSet<Argument>> {
        self.labellings.iter().map(AnswerRecord::extension).collect()
    }

    /// Checks every record against `framework` and converts it to a labelling.
    pub fn to_labellings(&self, framework: &Framework) -> Result<Vec<Labelling>, GraphIoError> {
        self.labellings
            .iter()
            .map(|r| {
                let l = r.to_labelling();
                if l.is_total_for(framework) {
                    Ok(l)
                } else {
                    Err(GraphIoError::Schema(
                        "answer record does not cover exactly the framework's arguments".into(),
                    ))
                }
            })
            .collect()
    }

    pub fn to_json(&self, shape: AnswerShape) -> Result<String, GraphIoError> {
        match shape {
            AnswerShape::Single => match self.labellings.as_slice() {
                [only] => Ok(serde_json::to_string(only).expect("records always serialize")),
                other => Err(GraphIoError::SingleArity(other.len())),
            },
            AnswerShape::List => Ok(serde_json::to_string(&self.labellings).expect("records always serialize")),
        }
    }
}

/// Writes labellings as an answer object.
pub fn serialize_answer(labellings: &[Labelling], shape: AnswerShape) -> Result<String, GraphIoError> {
    if let Some(first) = labellings.first() {
        let args: Vec<Argument> = first.arguments().collect();
        if labellings[1..].iter().any(|l| !l.arguments().eq(args.iter().copied())) {
            return Err(GraphIoError::MixedFramework);
        }
    }
    let answer = AnswerObject {
        labellings: labellings.iter().map(AnswerRecord::from_labelling).collect(),
    };
    answer.to_json(shape)
}

enum Candidate {
    Answer(AnswerObject),
    /// Looks like an answer but breaks the schema.
    Malformed(String),
    Unrelated,
}

const KEYS: [&str; 3] = ["IN", "OUT", "UNDEC"];

fn sorted_ids(value: &Value, key: &str) -> Result<Vec<Argument>, String> {
    let items = value.as_array().ok_or_else(|| format!("`{key}` must be an array"))?;
    let mut ids = items
        .iter()
        .map(|v| {
            v.as_u64()
                .and_then(|x| Argument::try_from(x).ok())
                .ok_or_else(|| format!("`{key}` holds a non-integer entry {v}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

fn record(value: &Value) -> Result<AnswerRecord, String> {
    let map = value.as_object().ok_or("labelling record must be an object")?;
    let get = |key: &str| {
        map.get(key)
            .ok_or_else(|| format!("record lacks `{key}`"))
            .and_then(|v| sorted_ids(v, key))
    };
    let r = AnswerRecord {
        ins: get("IN")?,
        outs: get("OUT")?,
        undecs: get("UNDEC")?,
    };
    let mut seen = BTreeSet::new();
    for a in r.ins.iter().chain(&r.outs).chain(&r.undecs) {
        if !seen.insert(*a) {
            return Err(format!("argument {a} appears in more than one set"));
        }
    }
    Ok(r)
}

fn mentions_keys(value: &Value) -> bool {
    value
        .as_object()
        .is_some_and(|m| KEYS.iter().any(|k| m.contains_key(*k)))
}

fn classify(value: &Value) -> Candidate {
    match value {
        Value::Object(_) if mentions_keys(value) => match record(value) {
            Ok(r) => Candidate::Answer(AnswerObject { labellings: vec![r] }),
            Err(e) => Candidate::Malformed(e),
        },
        Value::Array(items) if items.is_empty() => Candidate::Answer(AnswerObject::default()),
        Value::Array(items) if items.iter().any(mentions_keys) => {
            match items.iter().map(record).collect::<Result<Vec<_>, _>>() {
                Ok(labellings) => Candidate::Answer(AnswerObject { labellings }),
                Err(e) => Candidate::Malformed(e),
            }
        }
        _ => Candidate::Unrelated,
    }
}

/// Extracts the last answer object embedded in free text.
///
/// Prose, code fences and other JSON around the answer are skipped. JSON
/// values unrelated to the schema are searched for nested answers.
pub fn parse_answer(text: &str) -> Result<AnswerObject, GraphIoError> {
    let mut last: Option<AnswerObject> = None;
    let mut malformed: Option<String> = None;
    let mut i = 0;
    while i < text.len() {
        let Some(offset) = text[i..].find(['{', '[']) else {
            break;
        };
        let start = i + offset;
        let mut stream = serde_json::Deserializer::from_str(&text[start..]).into_iter::<Value>();
        match stream.next() {
            Some(Ok(value)) => {
                let end = start + stream.byte_offset();
                match classify(&value) {
                    Candidate::Answer(answer) => {
                        last = Some(answer);
                        malformed = None;
                        i = end;
                    }
                    Candidate::Malformed(reason) => {
                        malformed = Some(reason);
                        i = end;
                    }
                    Candidate::Unrelated => i = start + 1,
                }
            }
            _ => i = start + 1,
        }
    }
    match (last, malformed) {
        (Some(answer), _) => Ok(answer),
        (None, Some(reason)) => Err(GraphIoError::Schema(reason)),
        (None, None) => Err(GraphIoError::NoAnswerFound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_grounded() -> Labelling {
        Labelling::from_sets([1, 3], [2], []).unwrap()
    }

    #[test]
    fn single_record_text() {
        assert_eq!(
            serialize_answer(&[chain_grounded()], AnswerShape::Single).unwrap(),
            r#"{"IN":[1,3],"OUT":[2],"UNDEC":[]}"#
        );
        let cycle = Labelling::from_sets([], [], [1, 2, 3]).unwrap();
        assert_eq!(
            serialize_answer(&[cycle], AnswerShape::Single).unwrap(),
            r#"{"IN":[],"OUT":[],"UNDEC":[1,2,3]}"#
        );
    }

    #[test]
    fn list_text_and_arity() {
        let pair = [
            Labelling::from_sets([], [], [1, 2]).unwrap(),
            Labelling::from_sets([1], [2], []).unwrap(),
            Labelling::from_sets([2], [1], []).unwrap(),
        ];
        assert_eq!(
            serialize_answer(&pair, AnswerShape::List).unwrap(),
            r#"[{"IN":[],"OUT":[],"UNDEC":[1,2]},{"IN":[1],"OUT":[2],"UNDEC":[]},{"IN":[2],"OUT":[1],"UNDEC":[]}]"#
        );
        assert_eq!(serialize_answer(&[], AnswerShape::List).unwrap(), "[]");
        assert_eq!(
            serialize_answer(&pair, AnswerShape::Single),
            Err(GraphIoError::SingleArity(3))
        );
    }

    #[test]
    fn mixed_frameworks_rejected() {
        let other = Labelling::from_sets([1], [], []).unwrap();
        assert_eq!(
            serialize_answer(&[chain_grounded(), other], AnswerShape::List),
            Err(GraphIoError::MixedFramework)
        );
    }

    #[test]
    fn extracts_embedded_record() {
        let text = r#"...therefore the answer is {"IN":[1,3],"OUT":[2],"UNDEC":[]}"#;
        let answer = parse_answer(text).unwrap();
        assert_eq!(answer.labellings, vec![AnswerRecord::from_labelling(&chain_grounded())]);
    }

    #[test]
    fn takes_last_candidate() {
        let text =
            "first {\"IN\":[1],\"OUT\":[],\"UNDEC\":[2]} then\n```json\n{\"IN\":[3,1],\"OUT\":[2],\"UNDEC\":[]}\n```";
        let answer = parse_answer(text).unwrap();
        assert_eq!(answer.labellings[0].ins, vec![1, 3]);
    }

    #[test]
    fn finds_answer_nested_in_other_json() {
        let text = r#"{"answer": [{"IN":[0],"OUT":[1],"UNDEC":[]}], "confidence": 0.9}"#;
        let answer = parse_answer(text).unwrap();
        assert_eq!(answer.labellings.len(), 1);
    }

    #[test]
    fn absent_and_malformed() {
        assert_eq!(parse_answer("no idea"), Err(GraphIoError::NoAnswerFound));
        assert_eq!(parse_answer("{not json"), Err(GraphIoError::NoAnswerFound));
        assert!(matches!(
            parse_answer(r#"{"IN":[1],"OUT":[2]}"#),
            Err(GraphIoError::Schema(_))
        ));
        assert!(matches!(
            parse_answer(r#"{"IN":[1],"OUT":[1],"UNDEC":[]}"#),
            Err(GraphIoError::Schema(_))
        ));
    }

    #[test]
    fn validation_against_framework() {
        let f = Framework::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap();
        let ok = parse_answer(r#"{"IN":[1,3],"OUT":[2],"UNDEC":[]}"#).unwrap();
        assert_eq!(ok.to_labellings(&f).unwrap(), vec![chain_grounded()]);
        let short = parse_answer(r#"{"IN":[1],"OUT":[2],"UNDEC":[]}"#).unwrap();
        assert!(short.to_labellings(&f).is_err());
    }
}
