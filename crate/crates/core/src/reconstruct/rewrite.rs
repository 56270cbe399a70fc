//! Contracting a non-twig edge into the twigs and its inverse.
//!
//! Both operations act on trees whose labels all sit on leaves. With `r = 1`
//! they leave every `(n-1)`-weight unchanged.

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};
use crate::tree::{Label, VertexId, WeightedTree};

fn require_leaf_labels(tree: &WeightedTree, what: &str) -> Result<()> {
    if !tree.shape().non_leaf_labels().is_empty() {
        return Err(Error::InvalidRewrite(format!("{what} needs every label on a leaf")));
    }
    Ok(())
}

fn check_split(near: usize, far: usize, r: u32) -> Result<()> {
    if near <= r as usize || far <= r as usize {
        return Err(Error::InvalidRewrite(format!(
            "edge splits the labels {near}|{far}; both sides must exceed r = {r}"
        )));
    }
    Ok(())
}

/// Contracts `edge` (weight `y`) and adds `y/(n-r)` to every twig. The
/// endpoint with the smaller id survives.
pub fn r_io(tree: &WeightedTree, edge: (VertexId, VertexId), r: u32) -> Result<WeightedTree> {
    if r < 1 {
        return Err(Error::InvalidRewrite("r must be at least 1".into()));
    }
    require_leaf_labels(tree, "r-IO")?;
    let shape = tree.shape();
    let e = shape
        .edge_index(edge.0, edge.1)
        .ok_or_else(|| Error::InvalidRewrite(format!("({},{}) is not an edge", edge.0, edge.1)))?;
    if shape.is_twig(e) {
        return Err(Error::InvalidRewrite(format!("({},{}) is a twig", edge.0, edge.1)));
    }
    let (near, far) = shape.split_labels(e);
    check_split(near.len(), far.len(), r)?;
    let n = shape.n_labels();
    let (keep, drop) = shape.edge(e);
    let share = tree.weight(e) / int(n as i64 - r as i64);

    let mut edges = Vec::with_capacity(shape.edge_count() - 1);
    for (other, ((u, v), w)) in shape.edges().zip(tree.weights()).enumerate() {
        if other == e {
            continue;
        }
        let u = if u == drop { keep } else { u };
        let v = if v == drop { keep } else { v };
        let w = if shape.is_twig(other) { w + &share } else { w.clone() };
        edges.push((u, v, w));
    }
    WeightedTree::new(
        shape.vertex_ids().iter().copied().filter(|&v| v != drop),
        edges,
        shape.labels(),
    )
}

/// Splits `vertex`: the neighbours in `moved` are reattached to a new vertex
/// joined to `vertex` by an edge of weight `y`, and `y/(n-r)` is taken from
/// every twig. The new vertex gets the next unused id.
pub fn r_oi(
    tree: &WeightedTree,
    vertex: VertexId,
    moved: &[VertexId],
    y: &Rational,
    r: u32,
) -> Result<WeightedTree> {
    if r < 1 {
        return Err(Error::InvalidRewrite("r must be at least 1".into()));
    }
    if y <= &int(0) {
        return Err(Error::InvalidRewrite(format!("new edge weight {} must be positive", format_rational(y))));
    }
    require_leaf_labels(tree, "r-OI")?;
    let shape = tree.shape();
    let neighbors = shape.neighbors(vertex);
    if neighbors.is_empty() {
        return Err(Error::InvalidRewrite(format!("unknown vertex {vertex}")));
    }
    let mut moved: Vec<VertexId> = moved.to_vec();
    moved.sort_unstable();
    moved.dedup();
    if moved.iter().any(|m| !neighbors.contains(m)) {
        return Err(Error::InvalidRewrite(format!("every moved vertex must be a neighbour of {vertex}")));
    }
    if moved.len() < 2 || neighbors.len() - moved.len() < 2 {
        return Err(Error::InvalidRewrite(format!(
            "both sides of the split need at least two neighbours, got {}|{}",
            neighbors.len() - moved.len(),
            moved.len()
        )));
    }
    let fresh = VertexId(shape.vertex_ids().iter().map(|v| v.0).max().expect("nonempty") + 1);
    let n = shape.n_labels();
    let share = y / int(n as i64 - r as i64);

    let mut edges = Vec::with_capacity(shape.edge_count() + 1);
    for (e, ((u, v), w)) in shape.edges().zip(tree.weights()).enumerate() {
        let (u, v) = if u == vertex && moved.contains(&v) {
            (fresh, v)
        } else if v == vertex && moved.contains(&u) {
            (u, fresh)
        } else {
            (u, v)
        };
        let w = if shape.is_twig(e) {
            let reduced = w - &share;
            if reduced <= int(0) {
                return Err(Error::InvalidRewrite(format!(
                    "twig ({u},{v}) of weight {} cannot give up {}",
                    format_rational(w),
                    format_rational(&share)
                )));
            }
            reduced
        } else {
            w.clone()
        };
        edges.push((u, v, w));
    }
    edges.push((vertex, fresh, y.clone()));
    let out = WeightedTree::new(
        shape.vertex_ids().iter().copied().chain([fresh]),
        edges,
        shape.labels(),
    )?;
    let new_edge = out.shape().edge_index(vertex, fresh).expect("edge was added");
    let (near, far) = out.shape().split_labels(new_edge);
    check_split(near.len(), far.len(), r)?;
    Ok(out)
}

/// Labels on the side of `edge` containing its second endpoint; a helper for
/// callers choosing a split.
pub fn far_side_labels(tree: &WeightedTree, edge: (VertexId, VertexId)) -> Option<Vec<Label>> {
    let e = tree.shape().edge_index(edge.0, edge.1)?;
    Some(tree.shape().split_labels(e).1)
}
