//! Labeled trees with exact positive edge weights and their k-weights.
//!
//! A [`LabeledTree`] is the unweighted shape: opaque vertex ids, edges, and an
//! injective map from the labels `1..=n` onto vertices. Every leaf carries a
//! label; internal vertices may or may not. A [`WeightedTree`] pairs a shape
//! with one strictly positive rational weight per edge.
//!
//! The k-weight of a label subset is the total weight of the smallest
//! connected subtree that contains every vertex carrying one of the labels.
//! In a tree that subtree is unique: it is the union of the paths between the
//! chosen vertices, so an edge belongs to it exactly when both sides of the
//! edge hold at least one chosen vertex.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::WeightFamily;
use crate::rational::{format_rational, is_positive, Rational};

pub type Label = u32;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A nonempty sorted set of labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSubset(Vec<Label>);

impl LabelSubset {
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut members: Vec<Label> = labels.into_iter().collect();
        members.sort_unstable();
        if members.is_empty() {
            return Err(Error::InvalidSubset("empty subset".into()));
        }
        if members[0] == 0 {
            return Err(Error::InvalidSubset("labels start at 1".into()));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("duplicate label in {members:?}")));
        }
        Ok(LabelSubset(members))
    }

    /// `[n]` with label `i` removed.
    pub fn all_but(n: Label, i: Label) -> Self {
        LabelSubset((1..=n).filter(|&l| l != i).collect())
    }

    pub fn members(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn max_label(&self) -> Label {
        *self.0.last().expect("subset is nonempty")
    }

    /// Comma-joined ascending labels, the key used in family files.
    pub fn key(&self) -> String {
        self.0.iter().join(",")
    }

    /// Parses a comma-separated label list.
    pub fn parse(text: &str) -> Result<Self> {
        let labels = text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<Label>()
                    .map_err(|_| Error::Parse(format!("invalid label `{part}` in `{text}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        LabelSubset::new(labels)
    }
}

impl fmt::Display for LabelSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// Unweighted labeled tree. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    ids: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    vertex_label: Vec<Option<Label>>,
    label_vertex: Vec<usize>,
}

impl LabeledTree {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        labels: impl IntoIterator<Item = (Label, VertexId)>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        let mut ids: Vec<VertexId> = vertices.into_iter().collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return bad("duplicate vertex id".into());
        }
        if ids.len() < 2 {
            return bad("a tree needs at least one edge".into());
        }
        let index_of = |id: VertexId| ids.binary_search(&id).ok();

        let mut edge_list = Vec::new();
        for (u, v) in edges {
            let (Some(a), Some(b)) = (index_of(u), index_of(v)) else {
                return bad(format!("edge ({u},{v}) references an unknown vertex"));
            };
            if a == b {
                return bad(format!("self-loop at vertex {u}"));
            }
            edge_list.push((a.min(b), a.max(b)));
        }
        edge_list.sort_unstable();
        if edge_list.windows(2).any(|w| w[0] == w[1]) {
            return bad("duplicate edge".into());
        }
        if edge_list.len() + 1 != ids.len() {
            return bad(format!(
                "{} vertices need {} edges, found {}",
                ids.len(),
                ids.len() - 1,
                edge_list.len()
            ));
        }
        let mut adjacency = vec![Vec::new(); ids.len()];
        for (e, &(a, b)) in edge_list.iter().enumerate() {
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        let mut seen = vec![false; ids.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("edge set is not connected".into());
        }

        let label_map: BTreeMap<Label, VertexId> = {
            let mut map = BTreeMap::new();
            for (label, id) in labels {
                if map.insert(label, id).is_some() {
                    return bad(format!("label {label} assigned twice"));
                }
            }
            map
        };
        let n = label_map.len() as Label;
        if label_map.keys().copied().ne(1..=n) {
            return bad(format!(
                "labels must be exactly 1..={n}, found {:?}",
                label_map.keys().collect::<Vec<_>>()
            ));
        }
        let mut vertex_label = vec![None; ids.len()];
        let mut label_vertex = Vec::with_capacity(label_map.len());
        for (&label, &id) in &label_map {
            let Some(v) = index_of(id) else {
                return bad(format!("label {label} placed on unknown vertex {id}"));
            };
            if vertex_label[v].is_some() {
                return bad(format!("vertex {id} carries two labels"));
            }
            vertex_label[v] = Some(label);
            label_vertex.push(v);
        }
        for (v, adj) in adjacency.iter().enumerate() {
            if adj.len() == 1 && vertex_label[v].is_none() {
                return bad(format!("leaf {} is unlabeled", ids[v]));
            }
        }
        Ok(LabeledTree {
            ids,
            edges: edge_list,
            adjacency,
            vertex_label,
            label_vertex,
        })
    }

    pub fn n_labels(&self) -> Label {
        self.label_vertex.len() as Label
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn edge(&self, e: usize) -> (VertexId, VertexId) {
        let (a, b) = self.edges[e];
        (self.ids[a], self.ids[b])
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.edges.len()).map(|e| self.edge(e))
    }

    pub fn edge_index(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let a = self.index(u)?;
        let b = self.index(v)?;
        self.adjacency[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, e)| e)
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.index(v).map(|i| self.adjacency[i].len())
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.index(v)
            .map(|i| self.adjacency[i].iter().map(|&(w, _)| self.ids[w]).collect())
            .unwrap_or_default()
    }

    pub fn label_of(&self, v: VertexId) -> Option<Label> {
        self.index(v).and_then(|i| self.vertex_label[i])
    }

    pub fn vertex_of(&self, label: Label) -> Option<VertexId> {
        self.label_index(label).map(|i| self.ids[i])
    }

    pub fn labels(&self) -> impl Iterator<Item = (Label, VertexId)> + '_ {
        self.label_vertex
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as Label + 1, self.ids[v]))
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v) == Some(1)
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        (0..self.ids.len())
            .filter(|&v| self.adjacency[v].len() == 1)
            .map(|v| self.ids[v])
            .collect()
    }

    pub fn leaf_labels(&self) -> Vec<Label> {
        self.labels()
            .filter(|&(_, v)| self.is_leaf(v))
            .map(|(l, _)| l)
            .collect()
    }

    pub fn non_leaf_labels(&self) -> Vec<Label> {
        self.labels()
            .filter(|&(_, v)| !self.is_leaf(v))
            .map(|(l, _)| l)
            .collect()
    }

    /// Every degree-2 vertex is labeled.
    pub fn is_reduced(&self) -> bool {
        (0..self.ids.len()).all(|v| self.adjacency[v].len() != 2 || self.vertex_label[v].is_some())
    }

    /// No vertex has degree 2.
    pub fn is_essential(&self) -> bool {
        self.adjacency.iter().all(|adj| adj.len() != 2)
    }

    /// Every edge leaves at most `r` leaves on one of its sides.
    pub fn is_r_pseudostar(&self, r: u32) -> Result<bool> {
        if r < 1 {
            return Err(Error::Precondition("r must be at least 1".into()));
        }
        let leaf_total = self.leaves().len();
        Ok((0..self.edges.len()).all(|e| {
            let side = self.side_of(e);
            let near = (0..self.ids.len())
                .filter(|&v| side[v] && self.adjacency[v].len() == 1)
                .count();
            near.min(leaf_total - near) <= r as usize
        }))
    }

    pub fn is_twig(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        self.adjacency[a].len() == 1 || self.adjacency[b].len() == 1
    }

    /// The edge incident to each leaf, keyed by the leaf's label.
    pub fn twigs(&self) -> BTreeMap<Label, usize> {
        (0..self.ids.len())
            .filter(|&v| self.adjacency[v].len() == 1)
            .map(|v| (self.vertex_label[v].expect("leaves are labeled"), self.adjacency[v][0].1))
            .collect()
    }

    /// Edges with no leaf endpoint, in edge order.
    pub fn non_twig_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| !self.is_twig(e)).collect()
    }

    /// The labels on each side of edge `e`: first the side of its first
    /// endpoint, then the side of its second.
    pub fn split_labels(&self, e: usize) -> (Vec<Label>, Vec<Label>) {
        let side = self.side_of(e);
        let (mut near, mut far) = (Vec::new(), Vec::new());
        for (i, &v) in self.label_vertex.iter().enumerate() {
            if side[v] {
                far.push(i as Label + 1);
            } else {
                near.push(i as Label + 1);
            }
        }
        (near, far)
    }

    /// The centre's label when the tree is a star whose centre is labeled and
    /// every edge is a twig.
    pub fn labeled_center_star(&self) -> Option<Label> {
        let internal: Vec<usize> = (0..self.ids.len())
            .filter(|&v| self.adjacency[v].len() > 1)
            .collect();
        match internal.as_slice() {
            [center] => self.vertex_label[*center],
            _ => None,
        }
    }

    /// Edge indices of the smallest subtree spanning the given labels.
    pub fn steiner_edges(&self, labels: &[Label]) -> Result<Vec<usize>> {
        let terminals = labels
            .iter()
            .map(|&l| self.label_index(l).ok_or(Error::UnknownLabel(l)))
            .collect::<Result<Vec<_>>>()?;
        let Some(&root) = terminals.first() else {
            return Ok(Vec::new());
        };
        let mut is_terminal = vec![false; self.ids.len()];
        for &t in &terminals {
            is_terminal[t] = true;
        }
        let (order, parent) = self.rooted_order(root);
        let mut below = vec![0usize; self.ids.len()];
        let mut chosen = Vec::new();
        for &v in order.iter().rev() {
            if is_terminal[v] {
                below[v] += 1;
            }
            if let Some((p, e)) = parent[v] {
                if below[v] > 0 {
                    chosen.push(e);
                }
                below[p] += below[v];
            }
        }
        chosen.sort_unstable();
        Ok(chosen)
    }

    /// Deterministic string that identifies the tree up to renaming of vertex
    /// ids, keeping labels fixed.
    pub fn canonical_form(&self) -> String {
        self.canonical_code(None)
    }

    pub(crate) fn canonical_code(&self, weights: Option<&[Rational]>) -> String {
        let root = self.label_vertex[0];
        self.encode(root, None, weights)
    }

    /// A copy whose vertex ids are `0..` in canonical preorder, together with
    /// the new index of every old edge.
    pub fn canonically_relabeled(&self, weights: Option<&[Rational]>) -> (LabeledTree, Vec<usize>) {
        let root = self.label_vertex[0];
        let mut order = Vec::with_capacity(self.ids.len());
        self.preorder(root, None, weights, &mut order);
        let mut new_id = vec![0u32; self.ids.len()];
        for (rank, &v) in order.iter().enumerate() {
            new_id[v] = rank as u32;
        }
        let rebuilt = LabeledTree::new(
            (0..self.ids.len() as u32).map(VertexId),
            self.edges
                .iter()
                .map(|&(a, b)| (VertexId(new_id[a]), VertexId(new_id[b]))),
            self.label_vertex
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as Label + 1, VertexId(new_id[v]))),
        )
        .expect("relabeling preserves validity");
        let edge_map = self
            .edges
            .iter()
            .map(|&(a, b)| {
                rebuilt
                    .edge_index(VertexId(new_id[a]), VertexId(new_id[b]))
                    .expect("edge survives relabeling")
            })
            .collect();
        (rebuilt, edge_map)
    }

    fn encode(&self, v: usize, parent: Option<usize>, weights: Option<&[Rational]>) -> String {
        let children = self.child_codes(v, parent, weights);
        let tag = match self.vertex_label[v] {
            Some(l) => l.to_string(),
            None => "*".to_string(),
        };
        format!("({tag}|{})", children.into_iter().map(|(code, _)| code).join(","))
    }

    fn child_codes(
        &self,
        v: usize,
        parent: Option<usize>,
        weights: Option<&[Rational]>,
    ) -> Vec<(String, usize)> {
        let mut children: Vec<(String, usize)> = self.adjacency[v]
            .iter()
            .filter(|&&(w, _)| Some(w) != parent)
            .map(|&(w, e)| {
                let sub = self.encode(w, Some(v), weights);
                let code = match weights {
                    Some(ws) => format!("{}>{sub}", format_rational(&ws[e])),
                    None => sub,
                };
                (code, w)
            })
            .collect();
        children.sort();
        children
    }

    fn preorder(&self, v: usize, parent: Option<usize>, weights: Option<&[Rational]>, out: &mut Vec<usize>) {
        out.push(v);
        for (_, w) in self.child_codes(v, parent, weights) {
            self.preorder(w, Some(v), weights, out);
        }
    }

    /// Vertices in DFS discovery order from `root`, with each vertex's parent
    /// and the connecting edge.
    fn rooted_order(&self, root: usize) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
        let mut order = Vec::with_capacity(self.ids.len());
        let mut parent = vec![None; self.ids.len()];
        let mut visited = vec![false; self.ids.len()];
        let mut stack = vec![root];
        visited[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, e) in &self.adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some((v, e));
                    stack.push(w);
                }
            }
        }
        (order, parent)
    }

    /// Marks the vertices on the second endpoint's side of edge `e`.
    fn side_of(&self, e: usize) -> Vec<bool> {
        let (a, b) = self.edges[e];
        let mut side = vec![false; self.ids.len()];
        side[b] = true;
        let mut stack = vec![b];
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if w != a && !side[w] {
                    side[w] = true;
                    stack.push(w);
                }
            }
        }
        side
    }

    fn index(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    fn label_index(&self, label: Label) -> Option<usize> {
        let slot = (label as usize).checked_sub(1)?;
        self.label_vertex.get(slot).copied()
    }
}

/// A labeled tree with one strictly positive weight per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    shape: LabeledTree,
    weights: Vec<Rational>,
}

impl WeightedTree {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Rational)>,
        labels: impl IntoIterator<Item = (Label, VertexId)>,
    ) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        let shape = LabeledTree::new(
            vertices,
            edges.iter().map(|(u, v, _)| (*u, *v)),
            labels,
        )?;
        let mut weights = vec![Rational::zero(); shape.edge_count()];
        for (u, v, w) in edges {
            let e = shape.edge_index(u, v).expect("edge was validated");
            weights[e] = w;
        }
        WeightedTree::from_shape(shape, weights)
    }

    /// Pairs a shape with weights given in the shape's edge order.
    pub fn from_shape(shape: LabeledTree, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != shape.edge_count() {
            return Err(Error::InvalidTree(format!(
                "{} weights for {} edges",
                weights.len(),
                shape.edge_count()
            )));
        }
        if let Some(e) = weights.iter().position(|w| !is_positive(w)) {
            let (u, v) = shape.edge(e);
            return Err(Error::InvalidTree(format!(
                "edge ({u},{v}) has nonpositive weight {}",
                format_rational(&weights[e])
            )));
        }
        Ok(WeightedTree { shape, weights })
    }

    pub fn shape(&self) -> &LabeledTree {
        &self.shape
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn n_labels(&self) -> Label {
        self.shape.n_labels()
    }

    pub fn weight(&self, e: usize) -> &Rational {
        &self.weights[e]
    }

    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<&Rational> {
        self.shape.edge_index(u, v).map(|e| &self.weights[e])
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (VertexId, VertexId, &Rational)> + '_ {
        self.shape
            .edges()
            .zip(&self.weights)
            .map(|((u, v), w)| (u, v, w))
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Identifies the weighted tree up to renaming of vertex ids.
    pub fn canonical_form(&self) -> String {
        self.shape.canonical_code(Some(&self.weights))
    }

    /// The same tree with vertex ids `0..` in canonical order.
    pub fn canonicalized(&self) -> WeightedTree {
        let (shape, edge_map) = self.shape.canonically_relabeled(Some(&self.weights));
        let mut weights = vec![Rational::zero(); self.weights.len()];
        for (old, &new) in edge_map.iter().enumerate() {
            weights[new] = self.weights[old].clone();
        }
        WeightedTree { shape, weights }
    }
}

/// Total weight of the smallest subtree containing every vertex labeled by
/// `subset`.
pub fn k_weight(tree: &WeightedTree, subset: &LabelSubset) -> Result<Rational> {
    let edges = tree.shape.steiner_edges(subset.members())?;
    Ok(edges.into_iter().map(|e| &tree.weights[e]).sum())
}

/// The k-weights of every size-`k` subset of the tree's labels.
pub fn all_k_weights(tree: &WeightedTree, k: u32) -> Result<WeightFamily> {
    let n = tree.n_labels();
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let entries = (1..=n)
        .combinations(k as usize)
        .map(|labels| {
            let subset = LabelSubset(labels);
            let value = k_weight(tree, &subset)?;
            Ok((subset, value))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    WeightFamily::new(n, k, entries)
}
