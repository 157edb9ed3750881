use std::path::PathBuf;
use std::process::Command;

use omval_cli::{run, EXIT_INVALID, EXIT_OK};
use omval_core::{rational_from_str, RatPoly, LEAF_SCHEMA};
use regex::Regex;
use serde_json::Value;

fn omval(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("omval").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = omval(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn factor_reports_eisenstein_leaf() {
    let doc = json(&["factor", "-p", "2", "x^3+2", "--json"]);
    let leaves = doc["leaves"].as_array().unwrap();
    assert_eq!(leaves.len(), 1);
    assert_eq!((&leaves[0]["e"], &leaves[0]["f"], &leaves[0]["depth"]), (&Value::from(3), &Value::from(1), &Value::from(0)));
}

#[test]
fn equivalence_message() {
    let (code, out, _) = omval(&["equiv", "-p", "2", "x^2+2", "x^2+4*x+2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "equivalent (v_F(G)=5/2 > delta0=1)\n");
    let (_, out, _) = omval(&["equiv", "-p", "2", "x^2+2", "x^2+2*x+4"]);
    assert_eq!(out, "not equivalent (v_F(G)=1 <= delta0=1)\n");
    let (_, out, _) = omval(&["equiv", "-p", "2", "x^2+2", "x^3+2"]);
    assert_eq!(out, "not equivalent (degrees 2 and 3 differ)\n");
}

#[test]
fn value_prints_exact_fractions() {
    let (code, out, _) = omval(&["value", "-p", "2", "x^2+2", "x"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "1/2\n"));
    let (_, out, _) = omval(&["value", "-p", "2", "x^2+2", "(x^2+2)*(x+1)"]);
    assert_eq!(out, "inf\n");
}

#[test]
fn invalid_inputs_exit_with_two() {
    let cases: [(&[&str], &str); 6] = [
        (&["factor", "-p", "2", "x^2"], "input is not squarefree"),
        (&["factor", "-p", "2", "2*x^2+1"], "input is not monic"),
        (&["factor", "-p", "2", "x^2+1/3"], "non-integer coefficients"),
        (&["factor", "-p", "6", "x^2+1"], "6 is not prime"),
        (&["factor", "-p", "2", "x^2+*x"], "parse error at line 1, column 5"),
        (&["equiv", "-p", "2", "x^2-1", "x^2+2"], "first polynomial x^2-1 is reducible over Q_2"),
    ];
    for (args, msg) in cases {
        let (code, _, err) = omval(args);
        assert_eq!(code, EXIT_INVALID, "{args:?}");
        assert!(err.contains(msg), "{args:?}: {err}");
    }
    let (code, _, _) = omval(&["factor"]);
    assert_eq!(code, EXIT_INVALID);
    let (code, out, _) = omval(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("factor"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_omval");
    let ok = Command::new(bin).args(["factor", "-p", "5", "x^2+1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["factor", "-p", "2", "x^2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("input is not squarefree"));
}

#[test]
fn output_is_reproducible_across_seeds_and_jobs() {
    let polys = ["x^4+2*x^3+3*x^2+2*x-1", "x^2+1", "(x^2+2)*(x^2+10)", "x^6+2*x^3+8+x", "x^5-x+9"];
    let mut base = vec!["factor", "-p", "3", "--json"];
    base.extend(polys);
    let (_, reference, _) = omval(&base);
    for extra in [&["--seed", "7"][..], &["--jobs", "4"], &["--jobs", "3", "--seed", "99"]] {
        let mut args = base.clone();
        args.extend(extra);
        assert_eq!(omval(&args).1, reference, "{extra:?}");
    }
    let docs: Vec<Value> = serde_json::from_str(&reference).unwrap();
    let order: Vec<String> = docs.iter().map(|d| d["polynomial"].as_str().unwrap().to_string()).collect();
    let expect: Vec<String> = polys.iter().map(|p| RatPoly::parse(p).unwrap().to_string()).collect();
    assert_eq!(order, expect);
}

#[test]
fn printed_polynomials_reparse() {
    let doc = json(&["factor", "-p", "2", "--json", "x^4+2*x^3+3*x^2+2*x-1", "x^6-3*x^3+1/1*x+17", "x^3-x+3"]);
    for d in doc.as_array().unwrap() {
        for leaf in d["leaves"].as_array().unwrap() {
            let mut polys = vec![leaf["phi"].as_str().unwrap()];
            polys.extend(leaf["frame"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()));
            for p in polys {
                assert_eq!(RatPoly::parse(p).unwrap().to_string(), p);
            }
        }
    }
}

/// Validates `value` against the subset of JSON Schema used by the leaf schema.
fn validate(schema: &Value, root: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").expect("local reference");
        return validate(&root["$defs"][name], root, value, path);
    }
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().map(|v| v.as_str().unwrap()).collect(),
            _ => panic!("bad type in schema"),
        };
        let ok = types.iter().any(|t| match *t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            other => panic!("unsupported type {other}"),
        });
        if !ok {
            return Err(format!("{path}: expected {types:?}, got {value}"));
        }
    }
    if let (Some(min), Some(n)) = (schema.get("minimum").and_then(Value::as_i64), value.as_i64()) {
        if n < min {
            return Err(format!("{path}: {n} < {min}"));
        }
    }
    if let (Some(pat), Some(s)) = (schema.get("pattern").and_then(Value::as_str), value.as_str()) {
        if !Regex::new(pat).unwrap().is_match(s) {
            return Err(format!("{path}: {s:?} does not match {pat}"));
        }
    }
    if let Some(obj) = value.as_object() {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !obj.contains_key(key.as_str().unwrap()) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, v) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => validate(sub, root, v, &format!("{path}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(items, root, v, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

#[test]
fn leaves_conform_to_the_schema() {
    let schema: Value = serde_json::from_str(LEAF_SCHEMA).unwrap();
    let doc = json(&[
        "factor", "-p", "2", "--json", "x^4+2*x^3+3*x^2+2*x-1", "x^2+1", "x^3-x+6", "(x^2+2)*(x^2+10)", "x^8+2",
    ]);
    let mut count = 0;
    for d in doc.as_array().unwrap() {
        for leaf in d["leaves"].as_array().unwrap() {
            validate(&schema, &schema, leaf, "leaf").unwrap();
            // fraction strings are printed in lowest terms
            let mut fracs: Vec<&str> = leaf["slopes"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
            fracs.extend(["okutsu_bound", "weight"].iter().filter_map(|k| leaf[*k].as_str()));
            for f in fracs {
                assert_eq!(rational_from_str(f).unwrap().to_string(), f);
            }
            count += 1;
        }
    }
    assert!(count >= 6);
    // a leaf with a stray key is rejected
    let mut bad = doc[0]["leaves"][0].clone();
    bad["extra"] = Value::from(1);
    assert!(validate(&schema, &schema, &bad, "leaf").is_err());
}

#[test]
fn polygon_from_a_chain_file() {
    let chain = write_tmp("gauss2.json", r#"{"prime": 2, "levels": [{"phi": "x", "gamma": "0"}]}"#);
    let chain = chain.to_str().unwrap();
    let doc = json(&["polygon", "--chain", chain, "--json", "x^6+2*x^3+8"]);
    assert_eq!(doc["vertices"], serde_json::json!([[0, "3"], [3, "1"], [6, "0"]]));
    assert_eq!(doc["slopes"], serde_json::json!(["-2/3", "-1/3"]));
    let (code, out, _) = omval(&["polygon", "--chain", chain, "x^6+2*x^3+8"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("vertices: [(0, 3), (3, 1), (6, 0)]"));
    let plot = out.split_once("length = 6\n").unwrap().1;
    assert_eq!(plot.matches('*').count(), 3);
    let (code, _, err) = omval(&["polygon", "--chain", chain, "--phi", "x^2+1", "x"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("not a key polynomial"));
}

#[test]
fn residual_from_a_chain_file() {
    let chain = write_tmp("dz1.json", r#"{"prime": 2, "levels": [{"phi": "x", "gamma": "1"}]}"#);
    let doc = json(&["residual", "--chain", chain.to_str().unwrap(), "--json", "x^2+2*x+4"]);
    assert_eq!(doc["residual"], "y^2+y+1");
    assert_eq!((doc["s"].as_u64(), doc["degree"].as_u64()), (Some(0), Some(2)));
    let bad = write_tmp("bad.json", "{\"prime\": 2,\n \"levels\": [{\"phi\": \"x\", \"gamma\": 1}]}");
    let (code, _, err) = omval(&["residual", "--chain", bad.to_str().unwrap(), "x"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn precision_refines_approximations() {
    let doc = json(&["factor", "-p", "5", "--json", "--precision", "7", "x^2+1"]);
    for leaf in doc["leaves"].as_array().unwrap() {
        let v = rational_from_str(leaf["certified_value"].as_str().unwrap()).unwrap();
        assert!(v > rational_from_str("7").unwrap());
    }
}
