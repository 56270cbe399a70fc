//! All reduced labeled topologies on `[n]` up to renaming of vertex ids.
//!
//! Every such tree decomposes uniquely into a leaf-only tree on its leaf
//! labels plus its non-leaf labels, each sitting either on an unlabeled
//! internal vertex or on a degree-2 vertex subdividing an edge. The catalog
//! builds leaf-only trees by leaf insertion and then places the non-leaf
//! labels by the two internal insertions, deduplicating by canonical form.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::topology::Topology;
use crate::tree::{Label, LabeledTree, VertexId};

pub const MAX_CATALOG_LABELS: Label = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopologyConstraint {
    /// Every label on a leaf.
    LeafOnly,
    /// Exactly this many labels on internal vertices.
    NonLeaf(u32),
    Any,
}

#[derive(Clone, Debug)]
pub struct TopologyCatalog {
    pub n_labels: Label,
    pub constraint: TopologyConstraint,
    /// Sorted by canonical form, vertex ids `0..` in canonical order.
    pub items: Vec<Topology>,
}

impl TopologyCatalog {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

pub fn enumerate_topologies(n: Label, constraint: TopologyConstraint) -> Result<TopologyCatalog> {
    enumerate_topologies_with(n, constraint, Exec::default())
}

pub fn enumerate_topologies_with(n: Label, constraint: TopologyConstraint, exec: Exec) -> Result<TopologyCatalog> {
    if n > MAX_CATALOG_LABELS {
        return Err(Error::SizeCap(format!("topology catalogs stop at n = {MAX_CATALOG_LABELS}, got {n}")));
    }
    if n < 2 {
        return Err(Error::Precondition(format!("a topology needs at least 2 labels, got {n}")));
    }
    let counts: Vec<u32> = match constraint {
        TopologyConstraint::LeafOnly => vec![0],
        TopologyConstraint::NonLeaf(m) => vec![m],
        TopologyConstraint::Any => (0..=n - 2).collect(),
    };
    let mut jobs = Vec::new();
    for &m in &counts {
        if m + 2 > n {
            continue;
        }
        for inner in (1..=n).combinations(m as usize) {
            jobs.push(inner);
        }
    }
    let mut bases: BTreeMap<u32, Vec<Draft>> = BTreeMap::new();
    for &m in &counts {
        if m + 2 <= n {
            bases.insert(n - m, leaf_only_drafts(n - m));
        }
    }
    let mut found: Vec<(String, Topology)> = exec.flat_map(&jobs, |inner| {
        let outer: Vec<Label> = (1..=n).filter(|l| !inner.contains(l)).collect();
        let base = &bases[&(outer.len() as u32)];
        let mut level: BTreeMap<String, Draft> = base
            .iter()
            .map(|d| d.relabeled(&outer))
            .map(|d| (d.code(), d))
            .collect();
        for &label in inner {
            let mut next = BTreeMap::new();
            for draft in level.values() {
                for child in draft.internal_insertions(label) {
                    next.entry(child.code()).or_insert(child);
                }
            }
            level = next;
        }
        level
            .into_values()
            .map(|d| {
                let topo = d.into_topology();
                (topo.canonical_form(), topo)
            })
            .collect()
    });
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.dedup_by(|a, b| a.0 == b.0);
    Ok(TopologyCatalog {
        n_labels: n,
        constraint,
        items: found.into_iter().map(|(_, t)| t).collect(),
    })
}

/// Leaf-only topologies on labels `1..=leaves`.
fn leaf_only_drafts(leaves: Label) -> Vec<Draft> {
    let mut level: BTreeMap<String, Draft> = BTreeMap::new();
    let seed = Draft::edge(1, 2);
    level.insert(seed.code(), seed);
    for label in 3..=leaves {
        let mut next = BTreeMap::new();
        for draft in level.values() {
            for child in draft.leaf_insertions(label) {
                next.entry(child.code()).or_insert(child);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// A mutable tree under construction; labels need not be contiguous.
#[derive(Clone, Debug)]
struct Draft {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<Option<Label>>,
}

impl Draft {
    fn edge(a: Label, b: Label) -> Draft {
        Draft {
            adjacency: vec![vec![1], vec![0]],
            labels: vec![Some(a), Some(b)],
        }
    }

    fn add_vertex(&mut self, label: Option<Label>) -> usize {
        self.adjacency.push(Vec::new());
        self.labels.push(label);
        self.adjacency.len() - 1
    }

    fn connect(&mut self, a: usize, b: usize) {
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.adjacency.len())
            .flat_map(|a| self.adjacency[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    /// Puts a new vertex in the middle of edge `(a, b)`.
    fn subdivide(&mut self, a: usize, b: usize, label: Option<Label>) -> usize {
        let middle = self.add_vertex(label);
        for (x, y) in [(a, b), (b, a)] {
            let slot = self.adjacency[x].iter().position(|&v| v == y).expect("edge exists");
            self.adjacency[x][slot] = middle;
        }
        self.adjacency[middle] = vec![a, b];
        middle
    }

    fn is_open_internal(&self, v: usize) -> bool {
        self.adjacency[v].len() >= 3 && self.labels[v].is_none()
    }

    /// A new leaf on an unlabeled internal vertex, or on a new unlabeled
    /// vertex subdividing an edge.
    fn leaf_insertions(&self, label: Label) -> Vec<Draft> {
        let mut out = Vec::new();
        for v in 0..self.adjacency.len() {
            if self.is_open_internal(v) {
                let mut d = self.clone();
                let leaf = d.add_vertex(Some(label));
                d.connect(v, leaf);
                out.push(d);
            }
        }
        for (a, b) in self.edges() {
            let mut d = self.clone();
            let middle = d.subdivide(a, b, None);
            let leaf = d.add_vertex(Some(label));
            d.connect(middle, leaf);
            out.push(d);
        }
        out
    }

    /// The label on an unlabeled internal vertex, or on a new vertex
    /// subdividing an edge.
    fn internal_insertions(&self, label: Label) -> Vec<Draft> {
        let mut out = Vec::new();
        for v in 0..self.adjacency.len() {
            if self.is_open_internal(v) {
                let mut d = self.clone();
                d.labels[v] = Some(label);
                out.push(d);
            }
        }
        for (a, b) in self.edges() {
            let mut d = self.clone();
            d.subdivide(a, b, Some(label));
            out.push(d);
        }
        out
    }

    fn relabeled(&self, targets: &[Label]) -> Draft {
        let mut d = self.clone();
        for l in d.labels.iter_mut().flatten() {
            *l = targets[*l as usize - 1];
        }
        d
    }

    /// Rooted at the smallest label; children sorted by code.
    fn code(&self) -> String {
        let root = (0..self.labels.len())
            .filter(|&v| self.labels[v].is_some())
            .min_by_key(|&v| self.labels[v])
            .expect("drafts carry labels");
        self.encode(root, usize::MAX)
    }

    fn encode(&self, v: usize, parent: usize) -> String {
        let children: Vec<String> = self.adjacency[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| self.encode(w, v))
            .sorted()
            .collect();
        let tag = self.labels[v].map_or_else(|| "*".to_string(), |l| l.to_string());
        format!("({tag}|{})", children.join(","))
    }

    fn into_topology(self) -> Topology {
        let tree = LabeledTree::new(
            (0..self.adjacency.len() as u32).map(VertexId),
            self.edges()
                .into_iter()
                .map(|(a, b)| (VertexId(a as u32), VertexId(b as u32))),
            self.labels
                .iter()
                .enumerate()
                .filter_map(|(v, l)| l.map(|l| (l, VertexId(v as u32)))),
        )
        .expect("insertions keep a valid labeled tree");
        Topology::new(tree)
            .expect("insertions keep the tree reduced")
            .canonicalized()
    }
}
