//! Trees realizing a given weight family.
//!
//! For an `(n-1)`-family that classifies as all-strict the leaf-only star is
//! canonical, and every other leaf-only realization is obtained from it by
//! moving weight from the twigs onto non-twig edges (see [`moduli`]). A
//! family with exactly one equality is realized only by the star whose centre
//! carries the equality label. A 2-family satisfying the four-point condition
//! determines its tree completely.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{check_four_point, classify_family, FamilyStatus, WeightFamily};
use crate::rational::{format_rational, int, Rational};
use crate::tree::{all_k_weights, Label, VertexId, WeightedTree};

pub mod moduli;
pub mod rewrite;

pub use moduli::{moduli_description, realize_on_topology, SimplexDescription, SimplexKind, TwigFormula};
pub use rewrite::{r_io, r_oi};

/// Twig weights of the leaf-only star with the given `D̂` values.
///
/// On a star with total weight `W`, dropping leaf `j` leaves `W - w_j`, so
/// `D̂_j = W - w_j` and summing over `j` gives `W = Σ D̂ / (n - 1)`. Hence
/// `w_j = (Σ_{k≠j} D̂_k - (n - 2)·D̂_j) / (n - 1)`.
pub fn pseudostar_twig_weights(fam: &WeightFamily) -> Result<BTreeMap<Label, Rational>> {
    let n = fam.n();
    if n < 3 || fam.k() + 1 != n {
        return Err(Error::Precondition("star weights need n ≥ 3 and k = n - 1".into()));
    }
    let hats = fam.hat_values();
    let total: Rational = hats.iter().sum();
    let scale = int(n as i64 - 1);
    let coefficient = int(n as i64 - 2);
    Ok(hats
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let others = &total - d;
            (i as Label + 1, (others - &coefficient * d) / &scale)
        })
        .collect())
}

/// The essential 1-pseudostar (a star with unlabeled centre `0` and leaf `j`
/// on vertex `j`) realizing an all-strict `(n-1)`-family.
pub fn canonical_pseudostar(fam: &WeightFamily) -> Result<WeightedTree> {
    let class = classify_family(fam)?;
    if class.status != FamilyStatus::AllStrict {
        return Err(Error::Classification(format!(
            "the leaf-only star needs all strict inequalities, found {:?}",
            class.status
        )));
    }
    let twigs = pseudostar_twig_weights(fam)?;
    let n = fam.n();
    WeightedTree::new(
        (0..=n).map(VertexId),
        twigs.into_iter().map(|(l, w)| (VertexId(0), VertexId(l), w)),
        (1..=n).map(|l| (l, VertexId(l))),
    )
}

/// The unique tree realizing a family with one equality at `c`: a star whose
/// centre (vertex `0`) carries `c`, with `w(e(c, k)) = D̂_c - D̂_k`.
pub fn reconstruct_equality_star(fam: &WeightFamily) -> Result<WeightedTree> {
    let class = classify_family(fam)?;
    let FamilyStatus::OneEquality { c } = class.status else {
        return Err(Error::Classification(format!(
            "the rigid star needs exactly one equality, found {:?}",
            class.status
        )));
    };
    let n = fam.n();
    let top = fam.hat(c);
    WeightedTree::new(
        (0..=n).filter(|&v| v != c).map(VertexId),
        (1..=n)
            .filter(|&k| k != c)
            .map(|k| (VertexId(0), VertexId(k), top - fam.hat(k))),
        (1..=n).map(|l| (l, VertexId(if l == c { 0 } else { l }))),
    )
}

/// The tree whose 2-weights are `fam`, built by inserting labels one at a
/// time into the tree spanned by the earlier ones.
///
/// Label `x` hangs off the current tree at distance
/// `p = min_{i<j} (D_ix + D_jx - D_ij) / 2`, attached on the path between the
/// minimizing pair at distance `D_ix - p` from `i`. When `p = 0` the label
/// sits on that point of the tree itself. Vertex ids follow creation order.
pub fn reconstruct_from_two_weights(fam: &WeightFamily) -> Result<WeightedTree> {
    if fam.k() != 2 {
        return Err(Error::Precondition(format!("2-weight reconstruction needs k = 2, got k = {}", fam.k())));
    }
    if !check_four_point(fam)? {
        return Err(Error::NotTreelike("the four-point condition fails".into()));
    }
    let n = fam.n();
    let mut arena = Arena::default();
    let first = arena.add_vertex(Some(1));
    let second = arena.add_vertex(Some(2));
    arena.add_edge(first, second, fam.pair(1, 2).clone());
    let mut placed = vec![first, second];

    for x in 3..=n {
        let mut best: Option<(Rational, Label, Label)> = None;
        for i in 1..x {
            for j in i + 1..x {
                let p = (fam.pair(i, x) + fam.pair(j, x) - fam.pair(i, j)) / int(2);
                if best.as_ref().is_none_or(|(q, _, _)| p < *q) {
                    best = Some((p, i, j));
                }
            }
        }
        let (pendant, i, j) = best.expect("at least two labels are placed");
        let offset = fam.pair(i, x) - &pendant;
        let anchor = arena.point_on_path(placed[i as usize - 1], placed[j as usize - 1], &offset)?;
        let vertex = if pendant.is_zero() {
            if arena.labels[anchor].is_some() {
                return Err(Error::NotTreelike(format!("label {x} coincides with an existing label")));
            }
            arena.labels[anchor] = Some(x);
            anchor
        } else {
            let leaf = arena.add_vertex(Some(x));
            arena.add_edge(anchor, leaf, pendant);
            leaf
        };
        placed.push(vertex);
    }

    let tree = arena.into_tree()?;
    let rebuilt = all_k_weights(&tree, 2)?;
    if &rebuilt != fam {
        return Err(Error::NotTreelike("the insertion tree does not reproduce the family".into()));
    }
    Ok(tree)
}

#[derive(Default)]
struct Arena {
    labels: Vec<Option<Label>>,
    adjacency: Vec<Vec<(usize, Rational)>>,
}

impl Arena {
    fn add_vertex(&mut self, label: Option<Label>) -> usize {
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        self.labels.len() - 1
    }

    fn add_edge(&mut self, a: usize, b: usize, w: Rational) {
        self.adjacency[a].push((b, w.clone()));
        self.adjacency[b].push((a, w));
    }

    fn remove_edge(&mut self, a: usize, b: usize) {
        self.adjacency[a].retain(|(v, _)| *v != b);
        self.adjacency[b].retain(|(v, _)| *v != a);
    }

    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.labels.len()];
        parent[from] = from;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for (w, _) in &self.adjacency[v] {
                if parent[*w] == usize::MAX {
                    parent[*w] = v;
                    stack.push(*w);
                }
            }
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    fn weight(&self, a: usize, b: usize) -> Rational {
        self.adjacency[a]
            .iter()
            .find(|(v, _)| *v == b)
            .map(|(_, w)| w.clone())
            .expect("adjacent vertices")
    }

    /// The vertex at distance `offset` from `from` along the path to `to`,
    /// subdividing an edge when the point falls inside it.
    fn point_on_path(&mut self, from: usize, to: usize, offset: &Rational) -> Result<usize> {
        if offset.is_negative() {
            return Err(Error::NotTreelike("negative attachment offset".into()));
        }
        let path = self.path(from, to);
        let mut travelled = Rational::zero();
        for pair in path.windows(2) {
            if &travelled == offset {
                return Ok(pair[0]);
            }
            let (a, b) = (pair[0], pair[1]);
            let w = self.weight(a, b);
            let end = &travelled + &w;
            if &end > offset {
                let near = offset - &travelled;
                let far = &end - offset;
                self.remove_edge(a, b);
                let middle = self.add_vertex(None);
                self.add_edge(a, middle, near);
                self.add_edge(middle, b, far);
                return Ok(middle);
            }
            travelled = end;
        }
        if &travelled == offset {
            return Ok(to);
        }
        Err(Error::NotTreelike(format!(
            "attachment offset {} exceeds the path length",
            format_rational(offset)
        )))
    }

    fn into_tree(self) -> Result<WeightedTree> {
        let mut edges = Vec::new();
        for (a, adj) in self.adjacency.iter().enumerate() {
            for (b, w) in adj {
                if a < *b {
                    edges.push((VertexId(a as u32), VertexId(*b as u32), w.clone()));
                }
            }
        }
        WeightedTree::new(
            (0..self.labels.len() as u32).map(VertexId),
            edges,
            self.labels
                .iter()
                .enumerate()
                .filter_map(|(v, l)| l.map(|l| (l, VertexId(v as u32)))),
        )
    }
}
