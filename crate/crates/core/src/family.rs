//! Families of weights indexed by fixed-size label subsets, and the
//! conditions that decide when such a family comes from a tree.
//!
//! For `k = 2` the relevant conditions are the triangle inequalities and the
//! four-point condition. For `k = n - 1` the family is described by the `n`
//! numbers `D̂_i` (the weight of `[n]` with `i` removed) and everything hinges
//! on comparing `(n - 2)·D̂_i` with the sum of the other `n - 1` entries.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, is_positive, Rational};
use crate::tree::{Label, LabelSubset};

/// A total map from the size-`k` subsets of `[n]` to positive rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFamily {
    n: Label,
    k: u32,
    entries: BTreeMap<LabelSubset, Rational>,
}

impl WeightFamily {
    pub fn new(n: Label, k: u32, entries: BTreeMap<LabelSubset, Rational>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidFamily(format!("n = {n} is below 2")));
        }
        if k < 2 || k > n {
            return Err(Error::KOutOfRange { k, n });
        }
        for (subset, value) in &entries {
            if subset.len() != k as usize || subset.max_label() > n {
                return Err(Error::InvalidFamily(format!(
                    "subset {subset} is not a {k}-subset of [{n}]"
                )));
            }
            if !is_positive(value) {
                return Err(Error::InvalidFamily(format!(
                    "entry {subset} = {} is not positive",
                    format_rational(value)
                )));
            }
        }
        let expected = binomial(n as u64, k as u64);
        if entries.len() as u64 != expected {
            let missing = (1..=n)
                .combinations(k as usize)
                .map(|c| LabelSubset::new(c).expect("combination is a valid subset"))
                .find(|s| !entries.contains_key(s));
            return Err(Error::InvalidFamily(match missing {
                Some(s) => format!("missing entry for {s}"),
                None => format!("expected {expected} entries, found {}", entries.len()),
            }));
        }
        Ok(WeightFamily { n, k, entries })
    }

    /// Builds an `(n-1)`-family from `D̂_1, …, D̂_n`.
    pub fn from_hat_values(values: &[Rational]) -> Result<Self> {
        let n = values.len() as Label;
        if n < 3 {
            return Err(Error::InvalidFamily(format!("n = {n} is below 3")));
        }
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, v)| (LabelSubset::all_but(n, i as Label + 1), v.clone()))
            .collect();
        WeightFamily::new(n, n - 1, entries)
    }

    /// Builds a 2-family from a function on pairs `i < j`.
    pub fn from_pairs(n: Label, mut value: impl FnMut(Label, Label) -> Rational) -> Result<Self> {
        let entries = (1..=n)
            .tuple_combinations()
            .map(|(i, j)| {
                let subset = LabelSubset::new([i, j]).expect("distinct labels");
                (subset, value(i, j))
            })
            .collect();
        WeightFamily::new(n, 2, entries)
    }

    pub fn n(&self) -> Label {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, subset: &LabelSubset) -> Option<&Rational> {
        self.entries.get(subset)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LabelSubset, &Rational)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &BTreeMap<LabelSubset, Rational> {
        &self.entries
    }

    /// `D̂_i`, the entry for `[n]` without `i`. Panics unless `k = n - 1`.
    pub fn hat(&self, i: Label) -> &Rational {
        assert_eq!(self.k + 1, self.n, "hat entries need k = n - 1");
        &self.entries[&LabelSubset::all_but(self.n, i)]
    }

    /// `D̂_1, …, D̂_n` in label order. Panics unless `k = n - 1`.
    pub fn hat_values(&self) -> Vec<Rational> {
        (1..=self.n).map(|i| self.hat(i).clone()).collect()
    }

    /// The entry `D_{ij}`. Panics unless `k = 2`.
    pub fn pair(&self, i: Label, j: Label) -> &Rational {
        assert_eq!(self.k, 2, "pair entries need k = 2");
        &self.entries[&LabelSubset::new([i, j]).expect("distinct labels")]
    }

    fn require_k(&self, k: u32, what: &str) -> Result<()> {
        if self.k != k {
            return Err(Error::Precondition(format!("{what} needs k = {k}, family has k = {}", self.k)));
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `D_{ij} ≤ D_{ik} + D_{jk}` for all distinct `i, j, k`.
pub fn check_triangle(fam: &WeightFamily) -> Result<bool> {
    fam.require_k(2, "the triangle check")?;
    let n = fam.n;
    Ok((1..=n).tuple_combinations().all(|(a, b, c)| {
        let (ab, ac, bc) = (fam.pair(a, b), fam.pair(a, c), fam.pair(b, c));
        ab <= &(ac + bc) && ac <= &(ab + bc) && bc <= &(ab + ac)
    }))
}

/// For every four labels the largest of the three pairings is attained at
/// least twice, and the triangle inequalities hold. With only three labels
/// this reduces to the triangle check.
pub fn check_four_point(fam: &WeightFamily) -> Result<bool> {
    if !check_triangle(fam)? {
        return Ok(false);
    }
    let n = fam.n;
    Ok((1..=n).tuple_combinations().all(|(i, j, h, k)| {
        let mut sums = [
            fam.pair(i, j) + fam.pair(h, k),
            fam.pair(i, h) + fam.pair(j, k),
            fam.pair(i, k) + fam.pair(j, h),
        ];
        sums.sort();
        sums[1] == sums[2]
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyStatus {
    /// `(n-2)·D̂_i < Σ_{j≠i} D̂_j` for every `i`.
    AllStrict,
    /// Equality at exactly one label `c`, strict everywhere else.
    OneEquality { c: Label },
    /// Every label where the inequality fails; when none fails, the two or
    /// more labels where it is an equality.
    Violation { witnesses: Vec<Label> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyClass {
    /// How many of the `D̂_i` attain the maximum.
    pub m_max: u32,
    /// Labels ordered by ascending `D̂_i`, ties by ascending label.
    pub sorted_labels: Vec<Label>,
    pub status: FamilyStatus,
}

impl FamilyClass {
    pub fn is_treelike(&self) -> bool {
        !matches!(self.status, FamilyStatus::Violation { .. })
    }

    /// The labels attaining the maximum `D̂_i`, ascending.
    pub fn max_labels(&self) -> Vec<Label> {
        let mut top: Vec<Label> = self.sorted_labels[self.sorted_labels.len() - self.m_max as usize..].to_vec();
        top.sort_unstable();
        top
    }
}

/// Compares `(n-2)·D̂_i` with `Σ_{j≠i} D̂_j` for every `i` of an
/// `(n-1)`-family.
pub fn classify_family(fam: &WeightFamily) -> Result<FamilyClass> {
    if fam.n < 3 || fam.k + 1 != fam.n {
        return Err(Error::Precondition(format!(
            "classification needs n ≥ 3 and k = n - 1, got n = {}, k = {}",
            fam.n, fam.k
        )));
    }
    let hats = fam.hat_values();
    Ok(classify_hat_values(&hats))
}

/// Classification of `D̂_1, …, D̂_n` given directly, `n ≥ 3`.
pub(crate) fn classify_hat_values(hats: &[Rational]) -> FamilyClass {
    let n = hats.len();
    let total: Rational = hats.iter().sum();
    let coefficient = int(n as i64 - 2);
    let mut exceeding = Vec::new();
    let mut equal = Vec::new();
    for (i, d) in hats.iter().enumerate() {
        let lhs = &coefficient * d;
        let rhs = &total - d;
        if lhs > rhs {
            exceeding.push(i as Label + 1);
        } else if lhs == rhs {
            equal.push(i as Label + 1);
        }
    }
    let status = if !exceeding.is_empty() {
        FamilyStatus::Violation { witnesses: exceeding }
    } else {
        match equal.as_slice() {
            [] => FamilyStatus::AllStrict,
            [c] => FamilyStatus::OneEquality { c: *c },
            _ => FamilyStatus::Violation { witnesses: equal },
        }
    };
    let max = hats.iter().max().cloned().unwrap_or_else(Rational::zero);
    let m_max = hats.iter().filter(|d| **d == max).count() as u32;
    let mut sorted_labels: Vec<Label> = (1..=n as Label).collect();
    sorted_labels.sort_by(|&a, &b| hats[a as usize - 1].cmp(&hats[b as usize - 1]).then(a.cmp(&b)));
    FamilyClass {
        m_max,
        sorted_labels,
        status,
    }
}

/// Realizable by some positive-weighted reduced labeled tree.
pub fn is_positive_treelike(fam: &WeightFamily) -> Result<bool> {
    Ok(classify_family(fam)?.is_treelike())
}

/// Realizable by a positive-weighted tree with every label on a leaf.
pub fn is_positive_leaf_treelike(fam: &WeightFamily) -> Result<bool> {
    Ok(classify_family(fam)?.status == FamilyStatus::AllStrict)
}
