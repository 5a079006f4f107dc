//! JSON documents: parsing with JSON-pointer error locations, and canonical
//! serialization (sorted keys, compact, every matrix entry a string).

use serde_json::{json, Map, Value};

use crate::complexes::{BoundedComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Scalar};
use crate::gralg::{Algebra, FlagData, GradedMap, GradedModule, ModuleComplex};
use crate::periodic::PeriodicComplex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Complex(BoundedComplex),
    Periodic(PeriodicComplex),
    GradedModule(GradedModule),
    ChainMap(ChainMap),
    Flag(FlagData),
    ModuleComplex(ModuleComplex),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Complex(_) => "complex",
            Document::Periodic(_) => "periodic",
            Document::GradedModule(_) => "graded-module",
            Document::ChainMap(_) => "chain-map",
            Document::Flag(_) => "flag",
            Document::ModuleComplex(_) => "module-complex",
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Document::Complex(x) => x.field(),
            Document::Periodic(p) => p.field(),
            Document::GradedModule(m) => m.field(),
            Document::ChainMap(f) => f.field(),
            Document::Flag(f) => f.field(),
            Document::ModuleComplex(mc) => mc.field(),
        }
    }
}

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema { pointer: if pointer.is_empty() { "/".into() } else { pointer.into() }, message: message.into() }
}

/// Attaches `pointer` to errors that carry no location of their own.
fn at<T>(pointer: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Schema { .. } | Error::NotPrime(_) | Error::ModulusOutOfRange(_) => e,
        other => schema(pointer, other.to_string()),
    })
}

fn child(pointer: &str, key: impl std::fmt::Display) -> String {
    format!("{pointer}/{key}")
}

fn object<'a>(v: &'a Value, pointer: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| schema(pointer, "expected an object"))?;
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(&child(pointer, key), "unknown field"));
        }
    }
    for key in allowed {
        if !map.contains_key(*key) {
            return Err(schema(pointer, format!("missing field {key:?}")));
        }
    }
    Ok(map)
}

fn array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(pointer, "expected an array"))
}

fn sized_array<'a>(v: &'a Value, pointer: &str, len: usize) -> Result<&'a Vec<Value>> {
    let a = array(v, pointer)?;
    if a.len() != len {
        return Err(schema(pointer, format!("expected {len} elements, found {}", a.len())));
    }
    Ok(a)
}

fn int(v: &Value, pointer: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| schema(pointer, "expected an integer"))
}

fn count(v: &Value, pointer: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(pointer, "expected a nonnegative integer"))
}

fn counts(v: &Value, pointer: &str) -> Result<Vec<usize>> {
    array(v, pointer)?.iter().enumerate().map(|(k, x)| count(x, &child(pointer, k))).collect()
}

fn parse_field(v: &Value, pointer: &str) -> Result<Field> {
    match v {
        Value::String(s) if s == "Q" => Ok(Field::Rationals),
        Value::Object(_) => {
            let map = object(v, pointer, &["fp"])?;
            let p = map["fp"].as_u64().ok_or_else(|| schema(&child(pointer, "fp"), "expected a positive integer"))?;
            Field::fp(p)
        }
        _ => Err(schema(pointer, "expected \"Q\" or {\"fp\": p}")),
    }
}

fn field_json(field: Field) -> Value {
    match field {
        Field::Rationals => json!("Q"),
        Field::Prime(p) => json!({ "fp": p.get() }),
    }
}

fn parse_entry(v: &Value, pointer: &str, field: Field) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse_scalar(s).map_err(|e| schema(pointer, e.to_string())),
        Value::Number(_) => Ok(field.from_i64(int(v, pointer)?)),
        _ => Err(schema(pointer, "expected a string or integer entry")),
    }
}

/// A matrix as a list of rows; the shape is fixed by context.
fn parse_matrix(v: &Value, pointer: &str, field: Field, rows: usize, cols: usize) -> Result<Matrix> {
    let row_values = sized_array(v, pointer, rows)?;
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in row_values.iter().enumerate() {
        let rp = child(pointer, i);
        for (j, e) in sized_array(row, &rp, cols)?.iter().enumerate() {
            entries.push(parse_entry(e, &child(&rp, j), field)?);
        }
    }
    at(pointer, Matrix::from_scalars(field, rows, cols, entries))
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m.entry_string(i, j))).collect())).collect())
}

fn matrices_json(ms: &[Matrix]) -> Value {
    Value::Array(ms.iter().map(matrix_json).collect())
}

fn parse_complex_body(map: &Map<String, Value>, pointer: &str, field: Field) -> Result<BoundedComplex> {
    let lo = int(&map["lo"], &child(pointer, "lo"))?;
    let dims = counts(&map["dims"], &child(pointer, "dims"))?;
    let dp = child(pointer, "diffs");
    let diffs = sized_array(&map["diffs"], &dp, dims.len().saturating_sub(1))?
        .iter()
        .enumerate()
        .map(|(k, m)| parse_matrix(m, &child(&dp, k), field, dims[k + 1], dims[k]))
        .collect::<Result<Vec<_>>>()?;
    at(pointer, BoundedComplex::new(field, lo, dims, diffs))
}

fn complex_body(x: &BoundedComplex) -> Map<String, Value> {
    let diffs: Vec<Matrix> = (x.lo()..x.hi()).map(|i| x.diff(i)).collect();
    let mut m = Map::new();
    m.insert("lo".into(), json!(x.lo()));
    m.insert("dims".into(), json!(x.dims()));
    m.insert("diffs".into(), matrices_json(&diffs));
    m
}

fn parse_algebra(v: &Value, pointer: &str) -> Result<Algebra> {
    let map = v.as_object().ok_or_else(|| schema(pointer, "expected {\"poly\": c} or {\"ext\": c}"))?;
    match map.iter().next() {
        Some((k, c)) if map.len() == 1 && (k == "poly" || k == "ext") => {
            let c = count(c, &child(pointer, k))?;
            Ok(if k == "poly" { Algebra::Poly(c) } else { Algebra::Ext(c) })
        }
        _ => Err(schema(pointer, "expected {\"poly\": c} or {\"ext\": c}")),
    }
}

fn algebra_json(a: Algebra) -> Value {
    match a {
        Algebra::Poly(c) => json!({ "poly": c }),
        Algebra::Ext(c) => json!({ "ext": c }),
    }
}

fn parse_window(v: &Value, pointer: &str) -> Result<(i64, i64)> {
    let a = sized_array(v, pointer, 2)?;
    let (lo, hi) = (int(&a[0], &child(pointer, 0))?, int(&a[1], &child(pointer, 1))?);
    if lo > hi {
        return Err(schema(pointer, "window must satisfy lo <= hi"));
    }
    Ok((lo, hi))
}

const MODULE_KEYS: [&str; 4] = ["algebra", "window", "dims", "actions"];

fn parse_module_body(map: &Map<String, Value>, pointer: &str, field: Field) -> Result<GradedModule> {
    let algebra = parse_algebra(&map["algebra"], &child(pointer, "algebra"))?;
    let (lo, hi) = parse_window(&map["window"], &child(pointer, "window"))?;
    let dp = child(pointer, "dims");
    let dims = counts(&map["dims"], &dp)?;
    if dims.len() as i64 != hi - lo + 1 {
        return Err(schema(&dp, format!("expected {} dimensions for the window", hi - lo + 1)));
    }
    let dim = |d: i64| if (lo..=hi).contains(&d) { dims[(d - lo) as usize] } else { 0 };
    let ap = child(pointer, "actions");
    let actions = sized_array(&map["actions"], &ap, algebra.generators())?
        .iter()
        .enumerate()
        .map(|(j, per_degree)| {
            let jp = child(&ap, j);
            sized_array(per_degree, &jp, dims.len())?
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let d = lo + k as i64;
                    parse_matrix(m, &child(&jp, k), field, dim(d + algebra.generator_degree()), dim(d))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    at(pointer, GradedModule::new(field, algebra, lo, dims, actions))
}

fn module_body(m: &GradedModule) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("algebra".into(), algebra_json(m.algebra()));
    out.insert("window".into(), json!([m.lo(), m.hi()]));
    out.insert("dims".into(), json!(m.dims()));
    out.insert("actions".into(), Value::Array(m.actions().iter().map(|a| matrices_json(a)).collect()));
    out
}

fn with_header(kind: &str, field: Field, mut body: Map<String, Value>) -> Value {
    body.insert("kind".into(), json!(kind));
    body.insert("field".into(), field_json(field));
    Value::Object(body)
}

fn keys<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut k = vec!["kind", "field"];
    k.extend_from_slice(extra);
    k
}

pub fn to_value(doc: &Document) -> Value {
    let field = doc.field();
    let body = match doc {
        Document::Complex(x) => complex_body(x),
        Document::Periodic(p) => {
            let mut m = Map::new();
            m.insert("n".into(), json!(p.period()));
            m.insert("dims".into(), json!(p.dims()));
            m.insert("diffs".into(), matrices_json(p.diffs()));
            m
        }
        Document::GradedModule(gm) => module_body(gm),
        Document::ChainMap(f) => {
            let mut m = Map::new();
            m.insert("source".into(), Value::Object(complex_body(f.source())));
            m.insert("target".into(), Value::Object(complex_body(f.target())));
            m.insert("components".into(), matrices_json(f.components()));
            m
        }
        Document::Flag(fl) => {
            let mut m = Map::new();
            m.insert("parts".into(), json!(fl.parts()));
            m.insert("blocks".into(), Value::Array(fl.blocks().iter().map(|row| matrices_json(row)).collect()));
            m
        }
        Document::ModuleComplex(mc) => {
            let mut m = Map::new();
            m.insert("lo".into(), json!(mc.lo()));
            m.insert("terms".into(), Value::Array(mc.terms().iter().map(|t| Value::Object(module_body(t))).collect()));
            m.insert(
                "maps".into(),
                Value::Array(mc.maps().iter().map(|f| matrices_json(f.components())).collect()),
            );
            m
        }
    };
    with_header(doc.kind(), field, body)
}

pub fn from_value(v: &Value) -> Result<Document> {
    let top = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    let kind = top.get("kind").and_then(Value::as_str).ok_or_else(|| schema("/kind", "expected a document kind"))?;
    let field_value = top.get("field").ok_or_else(|| schema("", "missing field \"field\""))?;
    let field = parse_field(field_value, "/field")?;
    match kind {
        "complex" => {
            let map = object(v, "", &keys(&["lo", "dims", "diffs"]))?;
            Ok(Document::Complex(parse_complex_body(map, "", field)?))
        }
        "periodic" => {
            let map = object(v, "", &keys(&["n", "dims", "diffs"]))?;
            let n = count(&map["n"], "/n")?;
            if n == 0 {
                return Err(schema("/n", "period must be positive"));
            }
            let dims = counts(&map["dims"], "/dims")?;
            if dims.len() != n {
                return Err(schema("/dims", format!("expected {n} dimensions")));
            }
            let diffs = sized_array(&map["diffs"], "/diffs", n)?
                .iter()
                .enumerate()
                .map(|(r, m)| parse_matrix(m, &format!("/diffs/{r}"), field, dims[(r + 1) % n], dims[r]))
                .collect::<Result<Vec<_>>>()?;
            Ok(Document::Periodic(at("", PeriodicComplex::new(field, n, dims, diffs))?))
        }
        "graded-module" => {
            let map = object(v, "", &keys(&MODULE_KEYS))?;
            Ok(Document::GradedModule(parse_module_body(map, "", field)?))
        }
        "chain-map" => {
            let map = object(v, "", &keys(&["source", "target", "components"]))?;
            let body = |key: &str| -> Result<BoundedComplex> {
                let p = format!("/{key}");
                parse_complex_body(object(&map[key], &p, &["lo", "dims", "diffs"])?, &p, field)
            };
            let (source, target) = (body("source")?, body("target")?);
            let components = sized_array(&map["components"], "/components", source.dims().len())?
                .iter()
                .zip(source.degrees())
                .enumerate()
                .map(|(k, (m, i))| parse_matrix(m, &format!("/components/{k}"), field, target.dim(i), source.dim(i)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Document::ChainMap(at("/components", ChainMap::new(source, target, components))?))
        }
        "flag" => {
            let map = object(v, "", &keys(&["parts", "blocks"]))?;
            let parts = counts(&map["parts"], "/parts")?;
            let blocks = sized_array(&map["blocks"], "/blocks", parts.len())?
                .iter()
                .enumerate()
                .map(|(j, row)| {
                    let rp = format!("/blocks/{j}");
                    sized_array(row, &rp, j)?
                        .iter()
                        .enumerate()
                        .map(|(i, m)| parse_matrix(m, &child(&rp, i), field, parts[i], parts[j]))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Document::Flag(at("", FlagData::new(field, parts, blocks))?))
        }
        "module-complex" => {
            let map = object(v, "", &keys(&["lo", "terms", "maps"]))?;
            let lo = int(&map["lo"], "/lo")?;
            let terms = array(&map["terms"], "/terms")?
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    let p = format!("/terms/{k}");
                    parse_module_body(object(t, &p, &MODULE_KEYS)?, &p, field)
                })
                .collect::<Result<Vec<_>>>()?;
            if terms.is_empty() {
                return Err(schema("/terms", "expected at least one term"));
            }
            let maps = sized_array(&map["maps"], "/maps", terms.len() - 1)?
                .iter()
                .enumerate()
                .map(|(k, per_degree)| {
                    let p = format!("/maps/{k}");
                    let (s, t) = (&terms[k], &terms[k + 1]);
                    let comps = sized_array(per_degree, &p, s.dims().len())?
                        .iter()
                        .zip(s.degrees())
                        .enumerate()
                        .map(|(d, (m, i))| parse_matrix(m, &child(&p, d), field, t.dim(i), s.dim(i)))
                        .collect::<Result<Vec<_>>>()?;
                    at(&p, GradedMap::new(s.clone(), t.clone(), comps))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Document::ModuleComplex(at("", ModuleComplex::new(lo, terms, maps))?))
        }
        other => Err(schema("/kind", format!("unknown document kind {other:?}"))),
    }
}

pub fn parse(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    from_value(&v)
}

/// Canonical text: sorted keys, no insignificant whitespace, one trailing
/// newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn serialize(doc: &Document) -> String {
    canonical(&to_value(doc))
}
