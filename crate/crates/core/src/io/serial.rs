//! The `kspace-v1` structural document format.
//!
//! Knots, homotopy expressions and validation reports are wrapped in a
//! version-tagged envelope; `H1Result` serializes bare as
//! `{"rank": r, "torsion": [d, ...]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{SchemaError, ValidationReport};
use crate::expr::HomotopyExpr;
use crate::group::fp::H1Result;
use crate::knot::KnotTree;

pub const FORMAT: &str = "kspace-v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Knot(KnotTree),
    Expr(HomotopyExpr),
    H1(H1Result),
    Report(ValidationReport),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: String,
    kind: String,
    value: Value,
}

pub fn serialize_knot(tree: &KnotTree) -> Value {
    envelope("knot", serde_json::to_value(tree).expect("tree serializes"))
}

pub fn serialize_expr(expr: &HomotopyExpr) -> Value {
    envelope("expr", serde_json::to_value(expr).expect("expr serializes"))
}

pub fn serialize_h1(h: &H1Result) -> Value {
    serde_json::to_value(h).expect("h1 serializes")
}

pub fn serialize_report(report: &ValidationReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            serde_json::json!({
                "path": v.path,
                "message": v.message,
                "flattening": v.flattening,
            })
        })
        .collect();
    envelope("report", serde_json::json!({ "violations": violations }))
}

fn envelope(kind: &str, value: Value) -> Value {
    serde_json::json!({
        "format": FORMAT,
        "kind": kind,
        "value": value,
    })
}

pub fn deserialize(doc: &Value) -> Result<Document, SchemaError> {
    if let Some(obj) = doc.as_object() {
        if obj.contains_key("rank") && obj.contains_key("torsion") {
            let h: H1Result = serde_json::from_value(doc.clone())
                .map_err(|e| SchemaError(format!("bad h1 document: {}", e)))?;
            return Ok(Document::H1(h));
        }
    }
    let env: Envelope = serde_json::from_value(doc.clone())
        .map_err(|e| SchemaError(format!("not a kspace document: {}", e)))?;
    if env.format != FORMAT {
        return Err(SchemaError(format!(
            "unsupported format `{}` (expected `{}`)",
            env.format, FORMAT
        )));
    }
    match env.kind.as_str() {
        "knot" => {
            let t: KnotTree = serde_json::from_value(env.value)
                .map_err(|e| SchemaError(format!("bad knot value: {}", e)))?;
            Ok(Document::Knot(t))
        }
        "expr" => {
            let e: HomotopyExpr = serde_json::from_value(env.value)
                .map_err(|e| SchemaError(format!("bad expr value: {}", e)))?;
            Ok(Document::Expr(e))
        }
        "report" => {
            let violations = env
                .value
                .get("violations")
                .and_then(Value::as_array)
                .ok_or_else(|| SchemaError("report document without violations".into()))?;
            let mut out = Vec::new();
            for v in violations {
                out.push(crate::error::Violation {
                    path: v
                        .get("path")
                        .and_then(Value::as_str)
                        .ok_or_else(|| SchemaError("violation without path".into()))?
                        .to_string(),
                    message: v
                        .get("message")
                        .and_then(Value::as_str)
                        .ok_or_else(|| SchemaError("violation without message".into()))?
                        .to_string(),
                    flattening: v.get("flattening").and_then(Value::as_bool).unwrap_or(false),
                });
            }
            Ok(Document::Report(ValidationReport { violations: out }))
        }
        other => Err(SchemaError(format!("unknown document kind `{}`", other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::Catalog;

    #[test]
    fn h1_serializes_bare() {
        let h = H1Result::new(2, vec![2, 2]);
        assert_eq!(
            serde_json::to_string(&serialize_h1(&h)).unwrap(),
            r#"{"rank":2,"torsion":[2,2]}"#
        );
        match deserialize(&serialize_h1(&h)).unwrap() {
            Document::H1(back) => {
                assert_eq!((back.rank, back.torsion), (2, vec![2, 2]));
            }
            other => panic!("expected h1, got {:?}", other),
        }
    }

    #[test]
    fn knot_round_trip() {
        let kgl = Catalog::get_kgl("borromean").unwrap();
        let t = KnotTree::splice(
            kgl,
            vec![KnotTree::hyp("fig8", true), KnotTree::torus(2, 3)],
        );
        let doc = serialize_knot(&t);
        assert_eq!(doc["format"], FORMAT);
        match deserialize(&doc).unwrap() {
            Document::Knot(back) => assert_eq!(back, t),
            other => panic!("expected knot, got {:?}", other),
        }
    }

    #[test]
    fn marker_survives_round_trip() {
        let kgl = Catalog::get_kgl("stoimenow2").unwrap();
        let t = crate::symmetry::invert_class(&KnotTree::splice(
            kgl,
            vec![KnotTree::torus(2, 3), KnotTree::torus(2, 5)],
        ));
        match deserialize(&serialize_knot(&t)).unwrap() {
            Document::Knot(back) => assert_eq!(back, t),
            other => panic!("expected knot, got {:?}", other),
        }
    }

    #[test]
    fn rejects_unknown_formats() {
        let doc = serde_json::json!({"format": "kspace-v0", "kind": "knot", "value": {}});
        assert!(deserialize(&doc).is_err());
        let doc = serde_json::json!({"format": FORMAT, "kind": "mystery", "value": {}});
        assert!(deserialize(&doc).is_err());
    }
}
