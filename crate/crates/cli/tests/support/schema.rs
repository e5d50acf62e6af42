//! Validator for the JSON Schema subset used by `schemas/nexp.schema.json`:
//! `type`, `enum`, `const`, `properties`, `required`,
//! `additionalProperties: false`, `items`, `minItems`, `minimum`, `maximum`
//! and local `$ref`s. Unsupported keywords panic.

use serde_json::Value;

const ANNOTATIONS: &[&str] = &["$schema", "title", "description", "$defs"];

pub struct Schema {
    root: Value,
}

impl Schema {
    pub fn load() -> Self {
        let text = include_str!("../../schemas/nexp.schema.json");
        Schema {
            root: serde_json::from_str(text).expect("schema parses"),
        }
    }

    /// Errors from validating `value` against `#/$defs/{name}`.
    pub fn check(&self, name: &str, value: &Value) -> Vec<String> {
        let mut errors = Vec::new();
        self.validate(&self.definition(name), value, "$", &mut errors);
        errors
    }

    pub fn assert_valid(&self, name: &str, value: &Value) {
        let errors = self.check(name, value);
        assert!(errors.is_empty(), "{name}: {errors:#?}\n{value:#}");
    }

    fn definition(&self, name: &str) -> Value {
        self.root["$defs"]
            .get(name)
            .unwrap_or_else(|| panic!("no definition {name}"))
            .clone()
    }

    fn validate(&self, schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
        let rules = schema.as_object().expect("schema nodes are objects");
        if let Some(target) = rules.get("$ref") {
            let name = target
                .as_str()
                .and_then(|t| t.strip_prefix("#/$defs/"))
                .expect("local $ref");
            self.validate(&self.definition(name), value, path, errors);
        }
        for (key, rule) in rules {
            match key.as_str() {
                "$ref" => {}
                "type" => {
                    let allowed: Vec<&str> = match rule {
                        Value::String(t) => vec![t.as_str()],
                        Value::Array(ts) => ts.iter().filter_map(Value::as_str).collect(),
                        _ => panic!("bad type rule"),
                    };
                    if !allowed.iter().any(|t| has_type(value, t)) {
                        errors.push(format!("{path}: expected {allowed:?}, got {value}"));
                    }
                }
                "enum" => {
                    if !rule.as_array().expect("enum list").contains(value) {
                        errors.push(format!("{path}: {value} not in {rule}"));
                    }
                }
                "const" => {
                    if rule != value {
                        errors.push(format!("{path}: {value} != {rule}"));
                    }
                }
                "minimum" | "maximum" => {
                    if let (Some(v), Some(bound)) = (value.as_f64(), rule.as_f64()) {
                        let ok = if key == "minimum" { v >= bound } else { v <= bound };
                        if !ok {
                            errors.push(format!("{path}: {v} violates {key} {bound}"));
                        }
                    }
                }
                "required" => {
                    if let Some(obj) = value.as_object() {
                        for field in rule.as_array().expect("required list") {
                            let field = field.as_str().expect("field name");
                            if !obj.contains_key(field) {
                                errors.push(format!("{path}: missing {field}"));
                            }
                        }
                    }
                }
                "properties" => {
                    if let Some(obj) = value.as_object() {
                        for (field, sub) in rule.as_object().expect("property map") {
                            if let Some(v) = obj.get(field) {
                                self.validate(sub, v, &format!("{path}.{field}"), errors);
                            }
                        }
                    }
                }
                "additionalProperties" => {
                    assert_eq!(rule, &Value::Bool(false), "only additionalProperties: false");
                    let known = rules.get("properties").and_then(Value::as_object);
                    if let Some(obj) = value.as_object() {
                        for field in obj.keys() {
                            if !known.is_some_and(|k| k.contains_key(field)) {
                                errors.push(format!("{path}: unexpected field {field}"));
                            }
                        }
                    }
                }
                "items" => {
                    if let Some(items) = value.as_array() {
                        for (i, v) in items.iter().enumerate() {
                            self.validate(rule, v, &format!("{path}[{i}]"), errors);
                        }
                    }
                }
                "minItems" => {
                    if let Some(items) = value.as_array() {
                        let min = rule.as_u64().expect("minItems count") as usize;
                        if items.len() < min {
                            errors.push(format!("{path}: {} items, need {min}", items.len()));
                        }
                    }
                }
                other if ANNOTATIONS.contains(&other) => {}
                other => panic!("unsupported schema keyword {other}"),
            }
        }
    }
}

fn has_type(value: &Value, t: &str) -> bool {
    match t {
        "null" => value.is_null(),
        "boolean" => value.is_boolean(),
        "string" => value.is_string(),
        "array" => value.is_array(),
        "object" => value.is_object(),
        "number" => value.is_number(),
        "integer" => value.is_u64() || value.is_i64() || value.as_f64().is_some_and(|v| v.fract() == 0.0),
        _ => panic!("unknown type {t}"),
    }
}
