//! CSV and plain-text projections of a JSON result.

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `(path, value)` for every leaf.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    go(&key(k), x, out);
                }
            }
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
                out.push((
                    prefix.to_string(),
                    a.iter().map(scalar).collect::<Vec<_>>().join(" "),
                ));
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    go(&key(&i.to_string()), x, out);
                }
            }
            _ => out.push((prefix.to_string(), scalar(v))),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

pub fn write_rows(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).unwrap();
    for r in rows {
        w.write_record(r).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// An array of objects becomes one row per element; anything else becomes
/// `key,value` rows.
pub fn csv(v: &Value) -> String {
    if let Value::Array(items) = v {
        if let Some(Value::Object(first)) = items.first() {
            let header: Vec<String> = first.keys().cloned().collect();
            let rows: Vec<Vec<String>> = items
                .iter()
                .map(|it| {
                    let flat: Vec<(String, String)> = flatten(it);
                    header
                        .iter()
                        .map(|h| {
                            flat.iter()
                                .filter(|(k, _)| k == h || k.starts_with(&format!("{h}.")))
                                .map(|(_, x)| x.as_str())
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .collect()
                })
                .collect();
            return write_rows(&header, &rows);
        }
    }
    let rows: Vec<Vec<String>> = flatten(v).into_iter().map(|(k, x)| vec![k, x]).collect();
    write_rows(&["key".into(), "value".into()], &rows)
}

pub fn pretty(v: &Value) -> String {
    let flat = flatten(v);
    let width = flat
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    for (k, x) in flat {
        s.push_str(&format!("{k:<width$}  {x}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_and_key_value() {
        let t = csv(&json!([{"a": 1, "b": "x,y"}, {"a": 2, "b": "z"}]));
        assert_eq!(t, "a,b\n1,\"x,y\"\n2,z\n");
        let kv = csv(&json!({"n": 3, "m": {"k": [1, 2]}}));
        assert_eq!(kv, "key,value\nm.k,1 2\nn,3\n");
    }
}
