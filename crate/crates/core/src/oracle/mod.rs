//! Brute-force ground truth for small instances.
//!
//! Nothing here reuses the closed forms of the rest of the crate: k-weights
//! come from enumerating every connected edge subset, topologies from
//! exhaustive insertion, and realizations from a grid search over exact
//! solutions of the k-weight linear system.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::family::WeightFamily;
use crate::rational::Rational;
use crate::tree::{Label, LabelSubset, WeightedTree};

mod enumerate;
mod realize;

pub use enumerate::{
    enumerate_topologies, enumerate_topologies_with, TopologyCatalog, TopologyConstraint, MAX_CATALOG_LABELS,
};
pub use realize::{
    exhaustive_realizability, exhaustive_realizability_in, exhaustive_realizability_with, Grid, Realization,
};
pub(crate) use realize::{row_reduce, support_system};

pub const MAX_BRUTE_FORCE_EDGES: usize = 16;

/// Bit masks over vertex indices for every edge, and the terminal mask of
/// every label.
struct Masks {
    edge_vertices: Vec<u32>,
    label_vertex: Vec<u32>,
}

fn masks(tree: &WeightedTree) -> Result<Masks> {
    let shape = tree.shape();
    if shape.edge_count() > MAX_BRUTE_FORCE_EDGES {
        return Err(Error::SizeCap(format!(
            "brute force handles at most {MAX_BRUTE_FORCE_EDGES} edges, tree has {}",
            shape.edge_count()
        )));
    }
    let ids = shape.vertex_ids();
    let bit = |v| 1u32 << ids.binary_search(&v).expect("vertex of the tree");
    Ok(Masks {
        edge_vertices: shape.edges().map(|(u, v)| bit(u) | bit(v)).collect(),
        label_vertex: shape.labels().map(|(_, v)| bit(v)).collect(),
    })
}

/// Visits every nonempty edge subset that forms a connected subgraph, with
/// its vertex mask and total weight.
fn for_each_connected(tree: &WeightedTree, masks: &Masks, mut visit: impl FnMut(u32, &Rational)) {
    let e = masks.edge_vertices.len();
    let mut weight = vec![Rational::default(); 1 << e];
    let mut vertices = vec![0u32; 1 << e];
    for subset in 1usize..1 << e {
        let low = subset.trailing_zeros() as usize;
        let rest = subset & (subset - 1);
        weight[subset] = &weight[rest] + tree.weight(low);
        vertices[subset] = vertices[rest] | masks.edge_vertices[low];
        // A forest is connected exactly when it has one more vertex than edges.
        if vertices[subset].count_ones() == subset.count_ones() + 1 {
            visit(vertices[subset], &weight[subset]);
        }
    }
}

/// The least weight of a connected subtree containing every vertex that
/// carries a label of `subset`, by enumeration of all edge subsets.
pub fn brute_force_k_weight(tree: &WeightedTree, subset: &LabelSubset) -> Result<Rational> {
    let masks = masks(tree)?;
    let mut terminals = 0u32;
    for &l in subset.members() {
        let slot = masks
            .label_vertex
            .get((l as usize).wrapping_sub(1))
            .ok_or(Error::UnknownLabel(l))?;
        terminals |= slot;
    }
    if terminals.count_ones() <= 1 {
        return Ok(Rational::default());
    }
    let mut best: Option<Rational> = None;
    for_each_connected(tree, &masks, |vertices, w| {
        if vertices & terminals == terminals && best.as_ref().is_none_or(|b| w < b) {
            best = Some(w.clone());
        }
    });
    Ok(best.expect("the whole tree contains every terminal"))
}

/// Brute-force k-weights of every nonempty label subset at once: each
/// connected subtree bounds the subsets of the labels it touches, and a
/// superset sweep takes the minimum.
pub fn brute_force_all_weights(tree: &WeightedTree) -> Result<BTreeMap<LabelSubset, Rational>> {
    let masks = masks(tree)?;
    let n = masks.label_vertex.len();
    if n > 20 {
        return Err(Error::SizeCap(format!("too many labels for the subset sweep: {n}")));
    }
    let labels_on = |vertices: u32| {
        masks
            .label_vertex
            .iter()
            .enumerate()
            .filter(|(_, &v)| v & vertices != 0)
            .fold(0usize, |acc, (i, _)| acc | 1 << i)
    };
    let mut best: Vec<Option<Rational>> = vec![None; 1 << n];
    for i in 0..n {
        best[1 << i] = Some(Rational::default());
    }
    for_each_connected(tree, &masks, |vertices, w| {
        let slot = &mut best[labels_on(vertices)];
        if slot.as_ref().is_none_or(|b| w < b) {
            *slot = Some(w.clone());
        }
    });
    for i in 0..n {
        for set in 0..1usize << n {
            if set & 1 << i == 0 {
                if let Some(up) = best[set | 1 << i].clone() {
                    if best[set].as_ref().is_none_or(|b| &up < b) {
                        best[set] = Some(up);
                    }
                }
            }
        }
    }
    Ok((1..1usize << n)
        .map(|set| {
            let members = (0..n).filter(|i| set & 1 << i != 0).map(|i| i as Label + 1);
            let subset = LabelSubset::new(members).expect("nonempty subset of [n]");
            (subset, best[set].clone().expect("every subset fits in the whole tree"))
        })
        .collect())
}

/// The size-`k` part of [`brute_force_all_weights`] as a family.
pub fn brute_force_family(tree: &WeightedTree, k: u32) -> Result<WeightFamily> {
    let n = tree.n_labels();
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let entries = brute_force_all_weights(tree)?
        .into_iter()
        .filter(|(s, _)| s.len() == k as usize)
        .collect();
    WeightFamily::new(n, k, entries)
}
