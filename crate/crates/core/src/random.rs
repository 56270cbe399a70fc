//! Random reduced labeled trees with small rational weights.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::rational::{ratio, Rational};
use crate::tree::{Label, VertexId, WeightedTree};

/// Numerators and denominators of generated weights.
#[derive(Clone, Copy, Debug)]
pub struct WeightRange {
    pub max_numerator: i64,
    pub max_denominator: i64,
}

impl Default for WeightRange {
    fn default() -> Self {
        WeightRange {
            max_numerator: 12,
            max_denominator: 4,
        }
    }
}

impl WeightRange {
    /// Positive integers `1..=max`.
    pub fn integers(max: i64) -> Self {
        WeightRange {
            max_numerator: max,
            max_denominator: 1,
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Rational {
        ratio(
            rng.gen_range(1..=self.max_numerator),
            rng.gen_range(1..=self.max_denominator),
        )
    }
}

struct Builder {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<Option<Label>>,
}

impl Builder {
    fn add(&mut self, label: Option<Label>) -> usize {
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

    fn subdivide(&mut self, (a, b): (usize, usize), label: Option<Label>) -> usize {
        let middle = self.add(label);
        for (x, y) in [(a, b), (b, a)] {
            let slot = self.adjacency[x].iter().position(|&v| v == y).expect("edge exists");
            self.adjacency[x][slot] = middle;
        }
        self.adjacency[middle] = vec![a, b];
        middle
    }

    fn open_internal(&self) -> Vec<usize> {
        (0..self.adjacency.len())
            .filter(|&v| self.adjacency[v].len() >= 3 && self.labels[v].is_none())
            .collect()
    }
}

/// A random reduced tree on `[n]` with exactly `non_leaf` labels on internal
/// vertices. Needs `non_leaf + 2 ≤ n`.
pub fn random_tree(rng: &mut impl Rng, n: Label, non_leaf: u32, weights: WeightRange) -> WeightedTree {
    assert!(n >= 2 && non_leaf + 2 <= n, "need at least two leaf labels");
    let leaves = n - non_leaf;
    let mut b = Builder {
        adjacency: Vec::new(),
        labels: Vec::new(),
    };
    let first = b.add(Some(1));
    let second = b.add(Some(2));
    b.connect(first, second);
    for label in 3..=leaves {
        let open = b.open_internal();
        let edges = b.edges();
        let choice = rng.gen_range(0..open.len() + edges.len());
        let anchor = if choice < open.len() {
            open[choice]
        } else {
            b.subdivide(edges[choice - open.len()], None)
        };
        let leaf = b.add(Some(label));
        b.connect(anchor, leaf);
    }
    for label in leaves + 1..=n {
        let open = b.open_internal();
        let edges = b.edges();
        let choice = rng.gen_range(0..open.len() + edges.len());
        if choice < open.len() {
            b.labels[open[choice]] = Some(label);
        } else {
            b.subdivide(edges[choice - open.len()], Some(label));
        }
    }
    let mut permutation: Vec<Label> = (1..=n).collect();
    permutation.shuffle(rng);
    let edges: Vec<(VertexId, VertexId, Rational)> = b
        .edges()
        .into_iter()
        .map(|(x, y)| (VertexId(x as u32), VertexId(y as u32), weights.sample(rng)))
        .collect();
    WeightedTree::new(
        (0..b.adjacency.len() as u32).map(VertexId),
        edges,
        b.labels
            .iter()
            .enumerate()
            .filter_map(|(v, l)| l.map(|l| (permutation[l as usize - 1], VertexId(v as u32)))),
    )
    .expect("construction yields a valid tree")
}

/// A random reduced tree on `[n]` with a uniformly chosen number of non-leaf
/// labels.
pub fn random_reduced_tree(rng: &mut impl Rng, n: Label, weights: WeightRange) -> WeightedTree {
    let non_leaf = rng.gen_range(0..=n - 2);
    random_tree(rng, n, non_leaf, weights)
}

/// A star on `[n]` whose centre (vertex 0) carries a random label.
pub fn random_labeled_center_star(rng: &mut impl Rng, n: Label, weights: WeightRange) -> WeightedTree {
    assert!(n >= 3, "a labeled-centre star needs n ≥ 3");
    let center = rng.gen_range(1..=n);
    let leaves: Vec<Label> = (1..=n).filter(|&l| l != center).collect();
    WeightedTree::new(
        (0..n).map(VertexId),
        leaves
            .iter()
            .enumerate()
            .map(|(i, _)| (VertexId(0), VertexId(i as u32 + 1), weights.sample(rng)))
            .collect::<Vec<_>>(),
        std::iter::once((center, VertexId(0)))
            .chain(leaves.iter().enumerate().map(|(i, &l)| (l, VertexId(i as u32 + 1)))),
    )
    .expect("a star is a valid tree")
}

/// A star on `[n]` with unlabeled centre 0 and leaf `j` on vertex `j`.
pub fn random_leaf_star(rng: &mut impl Rng, n: Label, weights: WeightRange) -> WeightedTree {
    WeightedTree::new(
        (0..=n).map(VertexId),
        (1..=n)
            .map(|j| (VertexId(0), VertexId(j), weights.sample(rng)))
            .collect::<Vec<_>>(),
        (1..=n).map(|j| (j, VertexId(j))),
    )
    .expect("a star is a valid tree")
}
