//! JSON interchange for the domain types.
//!
//! Rationals travel as canonical strings `"p/q"`, integers as JSON numbers of
//! arbitrary size, and objects keep a fixed key order so output is
//! byte-deterministic.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::atf::{AtfDiagram, AtfError, Half, Mutation, Node};
use crate::germ::{Equivalence, Germ, GermError, GermInvariants, GermSource, InvariantKind, InvariantValue};
use crate::lattice::{IntMatrix, IntVec, LatticeError, PrimVec};
use crate::markov::MarkovTree;
use crate::polytope::{Facet, PolytopeError, RationalPolytope};
use crate::rational::{format, parse, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Atf(#[from] AtfError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

fn schema(path: &str, message: impl Into<String>) -> JsonError {
    JsonError::Schema { path: path.to_string(), message: message.into() }
}

pub fn parse_value(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

/// Compact single-line rendering.
pub fn to_line(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn int_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

pub fn int_from_json(v: &Value, path: &str) -> Result<BigInt, JsonError> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| schema(path, "expected an integer")),
        _ => Err(schema(path, "expected an integer")),
    }
}

pub fn usize_from_json(v: &Value, path: &str) -> Result<usize, JsonError> {
    v.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(|| schema(path, "expected a non-negative integer"))
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format(q))
}

/// Accepts `"p/q"` strings and plain integers.
pub fn rational_from_json(v: &Value, path: &str) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => Ok(parse(s)?),
        Value::Number(_) => Ok(Rational::from_integer(int_from_json(v, path)?)),
        _ => Err(schema(path, "expected a rational string")),
    }
}

pub fn ints_to_json<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(int_to_json).collect())
}

pub fn vec_to_json(v: &IntVec) -> Value {
    ints_to_json(v.coords())
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

pub fn vec_from_json(v: &Value, path: &str) -> Result<IntVec, JsonError> {
    let coords = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| int_from_json(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntVec::new(coords)?)
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints_to_json(m.row(i))).collect())
}

pub fn polytope_to_json(p: &RationalPolytope) -> Value {
    let facets: Vec<Value> = p
        .facets()
        .iter()
        .map(|f| json!({ "normal": vec_to_json(&f.normal), "offset": rational_to_json(&f.offset) }))
        .collect();
    json!({ "dim": p.dim(), "facets": facets })
}

pub fn polytope_from_json(v: &Value) -> Result<RationalPolytope, JsonError> {
    let dim = usize_from_json(field(v, "dim", "polytope")?, "polytope.dim")?;
    let facets = array(field(v, "facets", "polytope")?, "polytope.facets")?
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = format!("polytope.facets[{i}]");
            let normal = PrimVec::new(vec_from_json(field(f, "normal", &path)?, &format!("{path}.normal"))?)?;
            let offset = rational_from_json(field(f, "offset", &path)?, &format!("{path}.offset"))?;
            Ok(Facet::new(normal, offset))
        })
        .collect::<Result<Vec<_>, JsonError>>()?;
    Ok(RationalPolytope::new(dim, facets)?)
}

fn half_from_json(v: &Value, path: &str) -> Result<Half, JsonError> {
    v.as_str().and_then(Half::from_symbol).ok_or_else(|| schema(path, "expected \"+\" or \"-\""))
}

pub fn diagram_to_json(d: &AtfDiagram) -> Value {
    let nodes: Vec<Value> = d
        .nodes()
        .iter()
        .map(|n| {
            json!({
                "position": [rational_to_json(&n.position[0]), rational_to_json(&n.position[1])],
                "cut": vec_to_json(&n.cut),
                "sheared_half": n.sheared_half.symbol(),
            })
        })
        .collect();
    json!({ "polytope": polytope_to_json(d.polytope()), "nodes": nodes })
}

pub fn diagram_from_json(v: &Value) -> Result<AtfDiagram, JsonError> {
    let polytope = polytope_from_json(field(v, "polytope", "diagram")?)?;
    let nodes = array(field(v, "nodes", "diagram")?, "diagram.nodes")?
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let path = format!("diagram.nodes[{i}]");
            let pos = array(field(n, "position", &path)?, &format!("{path}.position"))?;
            if pos.len() != 2 {
                return Err(schema(&path, "position must have two entries"));
            }
            let position = [
                rational_from_json(&pos[0], &format!("{path}.position[0]"))?,
                rational_from_json(&pos[1], &format!("{path}.position[1]"))?,
            ];
            let cut = PrimVec::new(vec_from_json(field(n, "cut", &path)?, &format!("{path}.cut"))?)?;
            let sheared_half = match n.get("sheared_half") {
                Some(h) => half_from_json(h, &format!("{path}.sheared_half"))?,
                None => Half::Plus,
            };
            Ok(Node { position, cut, sheared_half })
        })
        .collect::<Result<Vec<_>, JsonError>>()?;
    Ok(AtfDiagram::new(polytope, nodes)?)
}

pub fn mutation_to_json(m: &Mutation) -> Value {
    json!({ "w": vec_to_json(&m.w), "sheared_half": m.sheared_half.symbol() })
}

pub fn markov_tree_to_json(t: &MarkovTree) -> Value {
    let nodes: Vec<Value> = t
        .nodes
        .iter()
        .map(|n| json!({ "triple": n.triple.entries(), "parent": n.parent, "slot": n.slot }))
        .collect();
    json!({ "root": [1, 1, 1], "nodes": nodes })
}

pub fn source_to_json(s: &GermSource) -> Value {
    match s {
        GermSource::Upsilon { k, a1, a2 } => {
            json!({ "family": "upsilon", "k": k, "a1": rational_to_json(a1), "a2": rational_to_json(a2) })
        }
        GermSource::Theta { triple, area } => {
            json!({ "family": "theta", "triple": triple, "area": rational_to_json(area) })
        }
    }
}

pub fn source_from_json(v: &Value) -> Result<Option<GermSource>, JsonError> {
    let path = "germ.source";
    match field(v, "family", path)?.as_str() {
        Some("upsilon") => {
            let k = field(v, "k", path)?.as_i64().ok_or_else(|| schema(path, "k must be an integer"))?;
            let a1 = rational_from_json(field(v, "a1", path)?, "germ.source.a1")?;
            let a2 = rational_from_json(field(v, "a2", path)?, "germ.source.a2")?;
            Ok(Some(GermSource::Upsilon { k, a1, a2 }))
        }
        Some("theta") => {
            let t = array(field(v, "triple", path)?, "germ.source.triple")?;
            let entries: Vec<u64> = t.iter().filter_map(Value::as_u64).collect();
            let triple: [u64; 3] =
                entries.try_into().map_err(|_| schema(path, "triple must hold three positive integers"))?;
            let area = rational_from_json(field(v, "area", path)?, "germ.source.area")?;
            Ok(Some(GermSource::Theta { triple, area }))
        }
        _ => Ok(None),
    }
}

pub fn germ_to_json(g: &Germ, source: Option<&GermSource>) -> Value {
    let mut m = Map::new();
    m.insert("constant".into(), rational_to_json(g.constant()));
    m.insert("vectors".into(), Value::Array(g.vectors().iter().map(vec_to_json).collect()));
    if let Some(s) = source {
        m.insert("source".into(), source_to_json(s));
    }
    Value::Object(m)
}

pub fn germ_from_json(v: &Value) -> Result<(Germ, Option<GermSource>), JsonError> {
    let constant = rational_from_json(field(v, "constant", "germ")?, "germ.constant")?;
    let vectors = array(field(v, "vectors", "germ")?, "germ.vectors")?
        .iter()
        .enumerate()
        .map(|(i, x)| vec_from_json(x, &format!("germ.vectors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let source = match v.get("source") {
        Some(s) => source_from_json(s)?,
        None => None,
    };
    Ok((Germ::new(constant, vectors)?, source))
}

pub fn invariants_to_json(inv: &GermInvariants) -> Value {
    json!({
        "constant": rational_to_json(&inv.constant),
        "dim": inv.dim,
        "count": inv.count,
        "pairwise_index": ints_to_json(&inv.pairwise_index),
        "triple_index": ints_to_json(&inv.triple_index),
        "full_index": int_to_json(&inv.full_index),
        "canonical": inv.canonical.as_ref().map(matrix_to_json),
    })
}

pub fn invariant_value_to_json(v: &InvariantValue) -> Value {
    match v {
        InvariantValue::Rational(q) => rational_to_json(q),
        InvariantValue::Count(n) => json!(n),
        InvariantValue::Indices(xs) => ints_to_json(xs),
        InvariantValue::Index(x) => int_to_json(x),
        InvariantValue::Matrix(m) => m.as_ref().map_or(Value::Null, matrix_to_json),
    }
}

/// Comparison report. When the separating invariant comes after the
/// pairwise indices, the (equal) pairwise multisets are reported too.
pub fn equivalence_to_json(
    e: &Equivalence,
    left: &GermInvariants,
    right: &GermInvariants,
    flags: &[&str],
) -> Value {
    let mut m = Map::new();
    match e {
        Equivalence::Equivalent { witness } => {
            m.insert("result".into(), json!("equivalent"));
            m.insert("witness".into(), matrix_to_json(witness.matrix()));
        }
        Equivalence::Inequivalent { invariant, left: l, right: r } => {
            m.insert("result".into(), json!("inequivalent"));
            m.insert("invariant".into(), json!(invariant.name()));
            m.insert("left".into(), invariant_value_to_json(l));
            m.insert("right".into(), invariant_value_to_json(r));
            let later = matches!(
                invariant,
                InvariantKind::TripleIndex | InvariantKind::FullIndex | InvariantKind::CanonicalForm
            );
            if later {
                m.insert(
                    "pairwise_index".into(),
                    json!({
                        "left": ints_to_json(&left.pairwise_index),
                        "right": ints_to_json(&right.pairwise_index),
                    }),
                );
            }
        }
        Equivalence::Undecided => {
            m.insert("result".into(), json!("undecided"));
        }
    }
    if !flags.is_empty() {
        m.insert("flags".into(), json!(flags));
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atf::cp2_diagram;
    use crate::germ::{germ_equivalent, germ_invariants, germ_upsilon};
    use crate::markov::markov_tree;
    use crate::polytope::delta_cp2;
    use crate::rational::int;
    use crate::reduction::UpsilonParams;

    #[test]
    fn polytope_round_trip() {
        let p = delta_cp2();
        let v = polytope_to_json(&p);
        assert_eq!(
            to_line(&v),
            r#"{"dim":2,"facets":[{"normal":[1,0],"offset":"1/3"},{"normal":[0,1],"offset":"1/3"},{"normal":[-1,-1],"offset":"1/3"}]}"#
        );
        assert_eq!(polytope_from_json(&v).unwrap(), p);
    }

    #[test]
    fn diagram_round_trip() {
        let d = cp2_diagram();
        let v = diagram_to_json(&d);
        assert_eq!(diagram_from_json(&v).unwrap(), d);
        let text = to_line(&v);
        assert!(text.contains(r#""position":["-1/6","-1/6"],"cut":[1,1],"sheared_half":"+""#));
    }

    #[test]
    fn germ_round_trip_with_source() {
        let p = UpsilonParams::new(2, int(3), int(1)).unwrap();
        let g = germ_upsilon(&p);
        let src = GermSource::Upsilon { k: 2, a1: int(3), a2: int(1) };
        let v = germ_to_json(&g, Some(&src));
        assert_eq!(
            to_line(&v),
            r#"{"constant":"1","vectors":[[0,0,1],[1,0,-2],[1,2,-2]],"source":{"family":"upsilon","k":2,"a1":"3","a2":"1"}}"#
        );
        assert_eq!(germ_from_json(&v).unwrap(), (g, Some(src)));
    }

    #[test]
    fn big_integers_survive() {
        let n = BigInt::from_str("123456789012345678901234567890").unwrap();
        let v = int_to_json(&n);
        assert_eq!(to_line(&v), "123456789012345678901234567890");
        assert_eq!(int_from_json(&parse_value(&to_line(&v)).unwrap(), "x").unwrap(), n);
    }

    #[test]
    fn compare_report_shape() {
        let g = germ_upsilon(&UpsilonParams::new(2, int(3), int(1)).unwrap());
        let h = germ_upsilon(&UpsilonParams::new(3, int(4), int(1)).unwrap());
        let e = germ_equivalent(&g, &h).unwrap();
        let v = equivalence_to_json(&e, &germ_invariants(&g), &germ_invariants(&h), &[]);
        assert_eq!(to_line(&v), r#"{"result":"inequivalent","invariant":"pairwise_index","left":[1,1,2],"right":[1,1,3]}"#);
    }

    #[test]
    fn tree_shape() {
        let v = markov_tree_to_json(&markov_tree(2).unwrap());
        assert_eq!(
            to_line(&v),
            r#"{"root":[1,1,1],"nodes":[{"triple":[1,1,1],"parent":null,"slot":null},{"triple":[1,1,2],"parent":0,"slot":1}]}"#
        );
    }

    #[test]
    fn schema_errors_name_the_path() {
        let v = parse_value(r#"{"dim":2,"facets":[{"normal":[2,0],"offset":"1"}]}"#).unwrap();
        assert!(matches!(polytope_from_json(&v), Err(JsonError::Lattice(_))));
        let v = parse_value(r#"{"dim":2}"#).unwrap();
        assert!(matches!(polytope_from_json(&v), Err(JsonError::Schema { .. })));
    }
}
