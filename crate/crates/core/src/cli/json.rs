//! JSON documents for trees, topologies and families.
//!
//! Weights are strings holding exact fractions (`"3/2"`) or integers; a
//! decimal string such as `"0.25"` is read exactly. Family subsets are keys
//! of sorted, comma-joined labels.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::family::WeightFamily;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reconstruct::{SimplexDescription, SimplexKind};
use crate::topology::Topology;
use crate::tree::{Label, LabelSubset, LabeledTree, VertexId, WeightedTree};

fn parse_error(what: impl Into<String>) -> Error {
    Error::Parse(what.into())
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| parse_error(format!("missing field \"{key}\"")))
}

fn as_u32(value: &Value, what: &str) -> Result<u32> {
    value
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| parse_error(format!("{what} must be a non-negative integer, got {value}")))
}

fn as_rational(value: &Value, what: &str) -> Result<Rational> {
    match value {
        Value::String(text) => parse_rational(text),
        Value::Number(number) => parse_rational(&number.to_string()),
        _ => Err(parse_error(format!("{what} must be a fraction string, got {value}"))),
    }
}

fn weight(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_error(format!("malformed JSON: {e}")))
}

struct RawTree {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId, Option<Rational>)>,
    labels: Vec<(Label, VertexId)>,
}

fn raw_tree(doc: &Value) -> Result<RawTree> {
    let vertices = field(doc, "vertices")?
        .as_array()
        .ok_or_else(|| parse_error("\"vertices\" must be an array"))?
        .iter()
        .map(|v| as_u32(v, "vertex id").map(VertexId))
        .collect::<Result<Vec<_>>>()?;
    let edges = field(doc, "edges")?
        .as_array()
        .ok_or_else(|| parse_error("\"edges\" must be an array"))?
        .iter()
        .map(|e| {
            let parts = e
                .as_array()
                .filter(|p| p.len() == 2 || p.len() == 3)
                .ok_or_else(|| parse_error(format!("edge must be [u, v] or [u, v, weight], got {e}")))?;
            let u = VertexId(as_u32(&parts[0], "edge endpoint")?);
            let v = VertexId(as_u32(&parts[1], "edge endpoint")?);
            let w = parts.get(2).map(|w| as_rational(w, "edge weight")).transpose()?;
            Ok((u, v, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = field(doc, "labels")?
        .as_object()
        .ok_or_else(|| parse_error("\"labels\" must be an object"))?
        .iter()
        .map(|(key, v)| {
            let label: Label = key
                .parse()
                .map_err(|_| parse_error(format!("label key \"{key}\" is not an integer")))?;
            Ok((label, VertexId(as_u32(v, "labeled vertex")?)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RawTree {
        vertices,
        edges,
        labels,
    })
}

pub fn tree_from_json(doc: &Value) -> Result<WeightedTree> {
    let raw = raw_tree(doc)?;
    let edges = raw
        .edges
        .into_iter()
        .map(|(u, v, w)| w.map(|w| (u, v, w)).ok_or_else(|| parse_error(format!("edge ({u},{v}) has no weight"))))
        .collect::<Result<Vec<_>>>()?;
    WeightedTree::new(raw.vertices, edges, raw.labels)
}

/// Reads a topology; edge weights, when present, are ignored.
pub fn topology_from_json(doc: &Value) -> Result<Topology> {
    let raw = raw_tree(doc)?;
    let tree = LabeledTree::new(raw.vertices, raw.edges.into_iter().map(|(u, v, _)| (u, v)), raw.labels)?;
    Topology::new(tree)
}

fn shape_json(tree: &LabeledTree, weights: Option<&[Rational]>) -> Value {
    let edges: Vec<Value> = tree
        .edges()
        .enumerate()
        .map(|(e, (u, v))| match weights {
            Some(ws) => json!([u.0, v.0, weight(&ws[e])]),
            None => json!([u.0, v.0]),
        })
        .collect();
    let labels: Map<String, Value> = tree.labels().map(|(l, v)| (l.to_string(), json!(v.0))).collect();
    json!({
        "vertices": tree.vertex_ids().iter().map(|v| v.0).collect::<Vec<_>>(),
        "edges": edges,
        "labels": labels,
    })
}

pub fn tree_to_json(tree: &WeightedTree) -> Value {
    shape_json(tree.shape(), Some(tree.weights()))
}

pub fn topology_to_json(topo: &Topology) -> Value {
    shape_json(topo.tree(), None)
}

pub fn family_from_json(doc: &Value) -> Result<WeightFamily> {
    let n = as_u32(field(doc, "n")?, "n")?;
    let k = as_u32(field(doc, "k")?, "k")?;
    let entries = field(doc, "weights")?
        .as_object()
        .ok_or_else(|| parse_error("\"weights\" must be an object"))?
        .iter()
        .map(|(key, value)| {
            let subset = LabelSubset::parse(key).map_err(|e| parse_error(format!("subset key \"{key}\": {e}")))?;
            Ok((subset, as_rational(value, "family entry")?))
        })
        .collect::<Result<Vec<_>>>()?;
    let count = entries.len();
    let map: BTreeMap<LabelSubset, Rational> = entries.into_iter().collect();
    if map.len() != count {
        return Err(parse_error("a subset appears twice"));
    }
    WeightFamily::new(n, k, map)
}

pub fn pairs_json<'a>(entries: impl IntoIterator<Item = (&'a LabelSubset, &'a Rational)>) -> Value {
    Value::Object(entries.into_iter().map(|(s, v)| (s.key(), weight(v))).collect())
}

pub fn family_to_json(fam: &WeightFamily) -> Value {
    json!({
        "n": fam.n(),
        "k": fam.k(),
        "weights": pairs_json(fam.iter()),
    })
}

pub fn moduli_to_json(desc: &SimplexDescription) -> Value {
    let tree = desc.topology.tree();
    let coordinates: Vec<Value> = desc
        .coordinates
        .iter()
        .map(|&e| {
            let (u, v) = tree.edge(e);
            json!([u.0, v.0])
        })
        .collect();
    let mut out = Map::new();
    let kind = match &desc.kind {
        SimplexKind::OpenSumBound { .. } => "open_sum_bound",
        SimplexKind::SumEquality { .. } => "sum_equality",
        SimplexKind::Point => "point",
        SimplexKind::Empty => "empty",
    };
    out.insert("kind".into(), json!(kind));
    out.insert("dimension".into(), json!(desc.dimension()));
    out.insert("coordinates".into(), Value::Array(coordinates));
    match &desc.kind {
        SimplexKind::OpenSumBound { bound } => {
            out.insert("bound".into(), weight(bound));
        }
        SimplexKind::SumEquality { total } => {
            out.insert("total".into(), weight(total));
        }
        _ => {}
    }
    if let Some(formula) = &desc.twig_formula {
        let constants: Map<String, Value> = formula
            .constants
            .iter()
            .map(|(l, a)| (l.to_string(), weight(a)))
            .collect();
        out.insert(
            "twig_formula".into(),
            json!({ "slope": weight(&formula.slope), "constants": constants }),
        );
    }
    Value::Object(out)
}
