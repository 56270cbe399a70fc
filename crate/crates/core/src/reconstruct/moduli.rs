//! The set of positive weights on a fixed topology that realize a given
//! `(n-1)`-family.
//!
//! The non-twig edge weights are free coordinates. The twig weights follow
//! from them through an affine formula
//!
//! ```text
//! w(twig_j) = α_j - slope · Σ_ℓ w(e_ℓ)
//! ```
//!
//! which keeps every `D̂_j` fixed. Depending on the family and topology the
//! coordinates range over an open simplex bounded by their sum, a simplex
//! where their sum is fixed, a single point, or nothing at all.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{classify_family, FamilyStatus, WeightFamily};
use crate::rational::{format_rational, int, Rational};
use crate::reconstruct::pseudostar_twig_weights;
use crate::topology::Topology;
use crate::tree::{Label, WeightedTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexKind {
    /// Every coordinate positive and their sum strictly below `bound`.
    OpenSumBound { bound: Rational },
    /// Every coordinate positive and their sum equal to `total`.
    SumEquality { total: Rational },
    /// No free coordinates: the weights are determined.
    Point,
    /// No positive weight on this topology realizes the family.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwigFormula {
    pub constants: BTreeMap<Label, Rational>,
    pub slope: Rational,
}

impl TwigFormula {
    pub fn evaluate(&self, coordinate_sum: &Rational) -> BTreeMap<Label, Rational> {
        let shift = &self.slope * coordinate_sum;
        self.constants
            .iter()
            .map(|(&l, alpha)| (l, alpha - &shift))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexDescription {
    pub topology: Topology,
    /// Non-twig edge indices of the topology, the coordinate order.
    pub coordinates: Vec<usize>,
    pub kind: SimplexKind,
    /// Absent when the simplex is empty.
    pub twig_formula: Option<TwigFormula>,
}

impl SimplexDescription {
    pub fn dimension(&self) -> Option<usize> {
        match self.kind {
            SimplexKind::OpenSumBound { .. } => Some(self.coordinates.len()),
            SimplexKind::SumEquality { .. } => Some(self.coordinates.len() - 1),
            SimplexKind::Point => Some(0),
            SimplexKind::Empty => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kind == SimplexKind::Empty
    }

    /// Checks that `coords` (one value per coordinate edge, in order) lies in
    /// the open simplex, naming the first violated constraint otherwise.
    pub fn check(&self, coords: &[Rational]) -> Result<()> {
        if self.kind == SimplexKind::Empty {
            return Err(Error::NotTreelike("no positive weight on this topology realizes the family".into()));
        }
        if coords.len() != self.coordinates.len() {
            return Err(Error::Membership(format!(
                "expected {} coordinates, got {}",
                self.coordinates.len(),
                coords.len()
            )));
        }
        for (value, &e) in coords.iter().zip(&self.coordinates) {
            if !value.is_positive() {
                let (u, v) = self.topology.tree().edge(e);
                return Err(Error::Membership(format!(
                    "w({u},{v}) = {} must be positive",
                    format_rational(value)
                )));
            }
        }
        let sum: Rational = coords.iter().sum();
        match &self.kind {
            SimplexKind::OpenSumBound { bound } if &sum >= bound => Err(Error::Membership(format!(
                "coordinate sum {} must be below {}",
                format_rational(&sum),
                format_rational(bound)
            ))),
            SimplexKind::SumEquality { total } if &sum != total => Err(Error::Membership(format!(
                "coordinate sum {} must equal {}",
                format_rational(&sum),
                format_rational(total)
            ))),
            _ => Ok(()),
        }
    }

    /// A point inside the simplex: equal coordinates at `N/(N+1)` of the bound,
    /// or an equal split of the fixed total.
    pub fn interior_point(&self) -> Option<Vec<Rational>> {
        let n = self.coordinates.len();
        match &self.kind {
            SimplexKind::OpenSumBound { bound } => Some(vec![bound / int(n as i64 + 1); n]),
            SimplexKind::SumEquality { total } => Some(vec![total / int(n as i64); n]),
            SimplexKind::Point => Some(Vec::new()),
            SimplexKind::Empty => None,
        }
    }

    /// The weighted tree for the given coordinates.
    pub fn realize(&self, coords: &[Rational]) -> Result<WeightedTree> {
        self.check(coords)?;
        let formula = self.twig_formula.as_ref().expect("nonempty simplex has a twig formula");
        let sum: Rational = coords.iter().sum();
        let twig_values = formula.evaluate(&sum);
        let tree = self.topology.tree();
        let mut weights = vec![Rational::zero(); tree.edge_count()];
        for (value, &e) in coords.iter().zip(&self.coordinates) {
            weights[e] = value.clone();
        }
        for (label, e) in tree.twigs() {
            weights[e] = twig_values[&label].clone();
        }
        WeightedTree::from_shape(tree.clone(), weights)
    }
}

/// Describes the positive weights on `topo` whose `(n-1)`-weights are `fam`.
///
/// * all strict, leaf-only topology: open simplex of dimension `N` with
///   `Σ w(e_ℓ) < (n-1)·min_j w̃_j`, where `w̃` are the star twig weights, or
///   a point when `N = 0`;
/// * all strict, topology whose non-leaf labels are exactly the labels
///   attaining the maximum `D̂`, `N ≥ 1`: simplex of dimension `N - 1` with
///   `Σ w(e_ℓ) = Σ_{leaves} D̂_j - (L-1)·max D̂` and `w(twig_j) = max D̂ - D̂_j`;
/// * one equality at `c`, star with centre `c`: a point;
/// * anything else: empty.
pub fn moduli_description(fam: &WeightFamily, topo: &Topology) -> Result<SimplexDescription> {
    let n = fam.n();
    if topo.n_labels() != n {
        return Err(Error::Precondition(format!(
            "topology has {} labels, family has {n}",
            topo.n_labels()
        )));
    }
    let class = classify_family(fam)?;
    let coordinates = topo.non_twig_edges().to_vec();
    let tree = topo.tree();
    let empty = || SimplexDescription {
        topology: topo.clone(),
        coordinates: coordinates.clone(),
        kind: SimplexKind::Empty,
        twig_formula: None,
    };
    let non_leaf = tree.non_leaf_labels();
    let leaves = tree.leaf_labels();

    let (kind, formula) = match class.status {
        FamilyStatus::Violation { .. } => return Ok(empty()),
        FamilyStatus::OneEquality { c } => {
            if tree.labeled_center_star() != Some(c) {
                return Ok(empty());
            }
            let top = fam.hat(c);
            let constants = leaves.iter().map(|&j| (j, top - fam.hat(j))).collect();
            let slope = Rational::new(1.into(), (leaves.len() as i64 - 1).into());
            (SimplexKind::Point, TwigFormula { constants, slope })
        }
        FamilyStatus::AllStrict if non_leaf.is_empty() => {
            let star = pseudostar_twig_weights(fam)?;
            let smallest = star.values().min().expect("n ≥ 3").clone();
            let formula = TwigFormula {
                constants: star,
                slope: Rational::new(1.into(), (n as i64 - 1).into()),
            };
            if coordinates.is_empty() {
                (SimplexKind::Point, formula)
            } else {
                let bound = smallest * int(n as i64 - 1);
                (SimplexKind::OpenSumBound { bound }, formula)
            }
        }
        FamilyStatus::AllStrict => {
            if non_leaf != class.max_labels() || coordinates.is_empty() {
                return Ok(empty());
            }
            let top = fam.hat(non_leaf[0]);
            let leaf_count = leaves.len() as i64;
            let leaf_sum: Rational = leaves.iter().map(|&j| fam.hat(j)).sum();
            let total = &leaf_sum - top * int(leaf_count - 1);
            let spread = &leaf_sum / int(leaf_count - 1);
            let constants = leaves.iter().map(|&j| (j, &spread - fam.hat(j))).collect();
            let formula = TwigFormula {
                constants,
                slope: Rational::new(1.into(), (leaf_count - 1).into()),
            };
            (SimplexKind::SumEquality { total }, formula)
        }
    };
    Ok(SimplexDescription {
        topology: topo.clone(),
        coordinates,
        kind,
        twig_formula: Some(formula),
    })
}

/// The tree on `topo` with the given non-twig weights (in the order of
/// [`Topology::non_twig_edges`]) and twig weights from the twig formula.
pub fn realize_on_topology(fam: &WeightFamily, topo: &Topology, coords: &[Rational]) -> Result<WeightedTree> {
    let description = moduli_description(fam, topo)?;
    let tree = description.realize(coords)?;
    debug_assert_eq!(
        &crate::tree::all_k_weights(&tree, fam.k()).expect("k is valid"),
        fam,
        "realization of {} on {}",
        coords.iter().map(format_rational).join(","),
        topo.canonical_form()
    );
    Ok(tree)
}
