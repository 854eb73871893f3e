//! JSON Schemas for the document kinds.

use serde_json::{json, Value};

fn rational() -> Value {
    json!({
        "type": "string",
        "pattern": "^(inf|[0-9]+(/[0-9]*[1-9][0-9]*)?)$",
        "description": "nonnegative rational p/q or integer, or inf"
    })
}

fn space() -> Value {
    json!({
        "type": "object",
        "required": ["points", "d"],
        "additionalProperties": false,
        "properties": {
            "points": { "type": "array", "minItems": 1, "items": { "type": "string" } },
            "d": { "type": "array", "items": { "type": "array", "items": { "$ref": "#/$defs/rational" } } }
        }
    })
}

fn label_map() -> Value {
    json!({ "type": "object", "additionalProperties": { "type": "string" } })
}

fn pairs() -> Value {
    json!({
        "type": "array",
        "items": { "type": "array", "items": { "type": "string" }, "minItems": 2, "maxItems": 2 }
    })
}

fn arrow() -> Value {
    json!({
        "type": "object",
        "required": ["dom", "map"],
        "additionalProperties": false,
        "properties": { "dom": { "$ref": "#/$defs/space" }, "map": { "$ref": "#/$defs/labelMap" } }
    })
}

fn object(kind: &str, required: &[&str], props: Value) -> Value {
    let mut props = props;
    props["kind"] = json!({ "const": kind });
    let mut req = vec!["kind"];
    req.extend_from_slice(required);
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": kind,
        "type": "object",
        "required": req,
        "additionalProperties": kind == "result",
        "properties": props,
        "$defs": {
            "rational": rational(),
            "space": space(),
            "labelMap": label_map(),
            "pairs": pairs(),
            "arrow": arrow()
        }
    })
}

/// The schema of one document kind, or `None` for an unknown kind.
pub fn schema(kind: &str) -> Option<Value> {
    let sp = json!({ "$ref": "#/$defs/space" });
    let lm = json!({ "$ref": "#/$defs/labelMap" });
    let family = json!({ "total": sp, "base": sp, "projection": lm, "embedding": lm });
    let s = match kind {
        "space" => {
            let s = space();
            object("space", &["points", "d"], s["properties"].clone())
        }
        "morphism" => object("morphism", &["dom", "cod", "map"], json!({ "dom": sp, "cod": sp, "map": lm })),
        "covering" => object(
            "covering",
            &["base", "legs"],
            json!({ "base": sp, "legs": { "type": "array", "minItems": 1, "items": { "$ref": "#/$defs/arrow" } } }),
        ),
        "descent" => object(
            "descent",
            &["base", "covering", "charts", "transitions"],
            json!({
                "base": sp,
                "covering": { "type": "array", "items": { "$ref": "#/$defs/arrow" } },
                "charts": { "type": "array", "items": { "$ref": "#/$defs/arrow" } },
                "transitions": {
                    "type": "object",
                    "propertyNames": { "pattern": "^[0-9]+,[0-9]+$" },
                    "additionalProperties": { "$ref": "#/$defs/pairs" }
                }
            }),
        ),
        "correspondence" => object(
            "correspondence",
            &["left", "right", "pairs"],
            json!({ "left": sp, "right": sp, "pairs": { "$ref": "#/$defs/pairs" } }),
        ),
        "family" => object("family", &["total", "base", "projection"], family),
        "pointed-family" => {
            let mut props = family;
            props["sections"] = json!({ "type": "array", "items": lm });
            object("pointed-family", &["total", "base", "projection", "sections"], props)
        }
        "gluing" => object(
            "gluing",
            &["spaces", "identify"],
            json!({
                "spaces": { "type": "array", "minItems": 1, "items": sp },
                "identify": {
                    "type": "array",
                    "items": {
                        "type": "array", "minItems": 2, "maxItems": 2,
                        "items": {
                            "type": "array", "minItems": 2, "maxItems": 2,
                            "prefixItems": [{ "type": "integer", "minimum": 0 }, { "type": "string" }]
                        }
                    }
                }
            }),
        ),
        "result" => object("result", &["op"], json!({ "op": { "type": "string" }, "ok": { "type": "boolean" } })),
        _ => return None,
    };
    Some(s)
}
