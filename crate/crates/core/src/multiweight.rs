//! Trading `(n-1)`-weights for 2-weights.
//!
//! A family with one equality at `c` is realized only by the star centred at
//! `c`, so it carries the same information as that star's 2-weights. More
//! generally, when the `k`-weights on a `(k+1)`-subset of `[m]` have one
//! equality, the 2-weights inside the subset are forced and can be added to
//! the family without changing which trees realize it.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::family::{classify_family, FamilyStatus, WeightFamily};
use crate::lp::strictly_positive_solution;
use crate::oracle::{
    enumerate_topologies_with, row_reduce, support_system, TopologyCatalog, TopologyConstraint, MAX_CATALOG_LABELS,
};
use crate::rational::{format_rational, int, Rational};
use crate::reconstruct::{moduli_description, reconstruct_from_two_weights, SimplexKind};
use crate::topology::Topology;
use crate::tree::{all_k_weights, Label, LabelSubset, WeightedTree};

/// An `(n-1)`-family with one equality at `center` and the 2-weights of the
/// star it determines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pub center: Label,
    pub family_nm1: WeightFamily,
    pub family_two: WeightFamily,
}

/// `D_ic = D̂_c - D̂_i` and `D_ij = 2·D̂_c - D̂_i - D̂_j`.
pub fn nm1_to_two(fam: &WeightFamily) -> Result<Correspondence> {
    let class = classify_family(fam)?;
    let FamilyStatus::OneEquality { c } = class.status else {
        return Err(Error::Classification(format!(
            "the correspondence needs exactly one equality, found {:?}",
            class.status
        )));
    };
    let top = fam.hat(c);
    let family_two = WeightFamily::from_pairs(fam.n(), |i, j| {
        if i == c || j == c {
            top - fam.hat(if i == c { j } else { i })
        } else {
            top * int(2) - fam.hat(i) - fam.hat(j)
        }
    })?;
    Ok(Correspondence {
        center: c,
        family_nm1: fam.clone(),
        family_two,
    })
}

/// The label `c` with `D_ij = D_ci + D_cj` for all `i, j ≠ c`, if any. There
/// is at most one: two centres `c, c'` would force `D_cc' = 0`.
pub fn star_center(fam: &WeightFamily) -> Result<Option<Label>> {
    if fam.k() != 2 {
        return Err(Error::Precondition(format!("star centres need k = 2, got k = {}", fam.k())));
    }
    let n = fam.n();
    Ok((1..=n).find(|&c| {
        (1..=n)
            .filter(|&i| i != c)
            .tuple_combinations()
            .all(|(i, j)| fam.pair(i, j) == &(fam.pair(c, i) + fam.pair(c, j)))
    }))
}

/// `D̂_i = Σ_{j≠i,c} D_cj` for `i ≠ c` and `D̂_c = Σ_{j≠c} D_cj`.
pub fn two_to_nm1(fam: &WeightFamily) -> Result<Correspondence> {
    let n = fam.n();
    if n < 3 {
        return Err(Error::Precondition(format!("the correspondence needs n ≥ 3, got {n}")));
    }
    let c = star_center(fam)?
        .ok_or_else(|| Error::Precondition("no label c has D_ij = D_ci + D_cj for all i, j ≠ c".into()))?;
    let spoke_total: Rational = (1..=n).filter(|&j| j != c).map(|j| fam.pair(c, j)).sum();
    let hats: Vec<Rational> = (1..=n)
        .map(|i| if i == c { spoke_total.clone() } else { &spoke_total - fam.pair(c, i) })
        .collect();
    let family_nm1 = WeightFamily::from_hat_values(&hats)?;
    match classify_family(&family_nm1)?.status {
        FamilyStatus::OneEquality { c: found } if found == c => {}
        other => {
            return Err(Error::Classification(format!(
                "derived family should have its equality at {c}, found {other:?}"
            )))
        }
    }
    Ok(Correspondence {
        center: c,
        family_nm1,
        family_two: fam.clone(),
    })
}

/// A `k`-family over `[m]` together with the 2-weights forced on a
/// `(k+1)`-subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedFamily {
    pub base: WeightFamily,
    pub subset: LabelSubset,
    /// The subset element whose omission gives the equality.
    pub distinguished: Label,
    /// One entry per pair of subset elements.
    pub extra_two_weights: BTreeMap<LabelSubset, Rational>,
}

/// Writing `h(a)` for the base entry of the subset without `a`, finds the
/// unique `c` with `(k-1)·h(c) = Σ_{a≠c} h(a)` and adds
/// `D_ac = h(c) - h(a)` and `D_ab = 2·h(c) - h(a) - h(b)`.
pub fn extend_family(base: &WeightFamily, subset: &LabelSubset) -> Result<MixedFamily> {
    let k = base.k();
    if subset.len() != k as usize + 1 || subset.max_label() > base.n() {
        return Err(Error::InvalidSubset(format!(
            "{subset} is not a {}-subset of [{}]",
            k + 1,
            base.n()
        )));
    }
    let members = subset.members();
    let omit = |a: Label| LabelSubset::new(members.iter().copied().filter(|&x| x != a)).expect("k ≥ 2");
    let h: Vec<Rational> = members
        .iter()
        .map(|&a| base.get(&omit(a)).expect("complete family").clone())
        .collect();
    let total: Rational = h.iter().sum();
    let scale = int(k as i64 - 1);
    let equalities: Vec<usize> = (0..h.len()).filter(|&i| &scale * &h[i] == &total - &h[i]).collect();
    let position = match equalities.as_slice() {
        [] => {
            return Err(Error::Precondition(format!(
                "no element of {subset} satisfies (k-1)·D = Σ of the other entries"
            )))
        }
        [p] => *p,
        many => {
            return Err(Error::Classification(format!(
                "several elements of {subset} satisfy the equality: {}",
                many.iter().map(|&p| members[p]).join(",")
            )))
        }
    };
    let c = members[position];
    let top = &h[position];
    let mut extra = BTreeMap::new();
    for (x, y) in (0..members.len()).tuple_combinations() {
        let value = if x == position || y == position {
            top - &h[if x == position { y } else { x }]
        } else {
            top * int(2) - &h[x] - &h[y]
        };
        let pair = LabelSubset::new([members[x], members[y]]).expect("distinct labels");
        if !value.is_positive() {
            return Err(Error::Precondition(format!(
                "derived 2-weight {pair} = {} is not positive",
                format_rational(&value)
            )));
        }
        extra.insert(pair, value);
    }
    Ok(MixedFamily {
        base: base.clone(),
        subset: subset.clone(),
        distinguished: c,
        extra_two_weights: extra,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub distinguished: Label,
    pub base_verdict: bool,
    pub mixed_verdict: bool,
    /// Canonical forms of the topologies carrying a realization, sorted.
    pub base_topologies: Vec<String>,
    pub mixed_topologies: Vec<String>,
    pub base_tree: Option<WeightedTree>,
    pub mixed_tree: Option<WeightedTree>,
    /// Present when both trees exist and agree up to vertex ids.
    pub shared_tree: Option<WeightedTree>,
}

impl EquivalenceReport {
    pub fn verdicts_agree(&self) -> bool {
        self.base_verdict == self.mixed_verdict
    }
}

pub const MAX_LP_LABELS: Label = 6;

/// Decides, by search over every reduced topology on `[m]`, whether the base
/// family and its extension are each positive-treelike.
pub fn mixed_treelike_equivalence(base: &WeightFamily, subset: &LabelSubset) -> Result<EquivalenceReport> {
    let exec = Exec::default();
    let m = base.n();
    if m > MAX_CATALOG_LABELS {
        return Err(Error::SizeCap(format!("equivalence search stops at m = {MAX_CATALOG_LABELS}, got {m}")));
    }
    let catalog = enumerate_topologies_with(m, TopologyConstraint::Any, exec)?;
    mixed_treelike_equivalence_in(base, subset, &catalog, exec)
}

/// As [`mixed_treelike_equivalence`] with a prebuilt catalog covering `[m]`.
pub fn mixed_treelike_equivalence_in(
    base: &WeightFamily,
    subset: &LabelSubset,
    catalog: &TopologyCatalog,
    exec: Exec,
) -> Result<EquivalenceReport> {
    let mixed = extend_family(base, subset)?;
    let m = base.n();
    if catalog.n_labels != m || catalog.constraint != TopologyConstraint::Any {
        return Err(Error::Precondition(format!("need the full catalog on [{m}]")));
    }
    let full = base.k() + 1 == m;
    if !full && m > MAX_LP_LABELS {
        return Err(Error::SizeCap(format!(
            "general-k feasibility search stops at m = {MAX_LP_LABELS}, got {m}"
        )));
    }

    let base_found: Vec<WeightedTree> = if full {
        exec.flat_map(&catalog.items, |topo| moduli_witness(base, topo))
    } else {
        exec.flat_map(&catalog.items, |topo| lp_witness(base.iter(), topo))
    };
    let mixed_found: Vec<WeightedTree> = if full {
        two_weight_witness(&mixed)?.into_iter().collect()
    } else {
        let rows: Vec<(&LabelSubset, &Rational)> = base.iter().chain(mixed.extra_two_weights.iter()).collect();
        exec.flat_map(&catalog.items, |topo| lp_witness(rows.iter().copied(), topo))
    };
    for tree in base_found.iter().chain(&mixed_found) {
        debug_assert_eq!(&all_k_weights(tree, base.k()).expect("valid k"), base);
    }

    let forms = |found: &[WeightedTree]| -> Vec<String> {
        found.iter().map(|t| t.shape().canonical_form()).sorted().dedup().collect()
    };
    let base_tree = base_found.first().cloned();
    let mixed_tree = mixed_found.first().cloned();
    let shared_tree = match (&base_tree, &mixed_tree) {
        (Some(a), Some(b)) if a.canonical_form() == b.canonical_form() => Some(b.canonicalized()),
        _ => None,
    };
    Ok(EquivalenceReport {
        distinguished: mixed.distinguished,
        base_verdict: !base_found.is_empty(),
        mixed_verdict: !mixed_found.is_empty(),
        base_topologies: forms(&base_found),
        mixed_topologies: forms(&mixed_found),
        base_tree,
        mixed_tree,
        shared_tree,
    })
}

/// A realization of an `(m-1)`-family on `topo` from its moduli simplex.
fn moduli_witness(fam: &WeightFamily, topo: &Topology) -> Vec<WeightedTree> {
    let desc = moduli_description(fam, topo).expect("catalog matches the family");
    match (&desc.kind, desc.interior_point()) {
        (SimplexKind::Empty, _) | (_, None) => Vec::new(),
        (_, Some(point)) => vec![desc.realize(&point).expect("interior point lies in the simplex")],
    }
}

/// A strictly positive weighting of `topo` with the given subset weights.
fn lp_witness<'a>(entries: impl IntoIterator<Item = (&'a LabelSubset, &'a Rational)>, topo: &Topology) -> Vec<WeightedTree> {
    let system = support_system(entries, topo);
    let e = topo.tree().edge_count();
    if row_reduce(system.clone(), e).is_none() {
        return Vec::new();
    }
    let (rows, rhs): (Vec<Vec<Rational>>, Vec<Rational>) = system
        .into_iter()
        .map(|mut row| {
            let b = row.pop().expect("augmented row");
            (row, b)
        })
        .unzip();
    strictly_positive_solution(&rows, &rhs)
        .map(|w| WeightedTree::from_shape(topo.tree().clone(), w).expect("positive weights"))
        .into_iter()
        .collect()
}

/// The tree determined by the extra 2-weights when they cover `[m]`, kept
/// only if it also realizes the base family.
fn two_weight_witness(mixed: &MixedFamily) -> Result<Option<WeightedTree>> {
    let m = mixed.base.n();
    let pairs = WeightFamily::new(m, 2, mixed.extra_two_weights.clone())?;
    let tree = match reconstruct_from_two_weights(&pairs) {
        Ok(tree) => tree,
        Err(Error::NotTreelike(_)) => return Ok(None),
        Err(other) => return Err(other),
    };
    if Topology::of(&tree).is_err() {
        return Ok(None);
    }
    let realizes_base = all_k_weights(&tree, mixed.base.k())? == mixed.base;
    Ok(realizes_base.then_some(tree))
}
