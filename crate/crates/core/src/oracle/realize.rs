//! Every on-grid weighting of every catalog topology that realizes a family.
//!
//! On a fixed topology the k-weights are linear in the edge weights, with a
//! 0/1 row per subset marking the edges of its spanning subtree. The system
//! is solved exactly; each free edge weight then runs over the grid and the
//! dependent weights are kept only when they are positive, on the grid, and
//! no larger than the grid maximum.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::family::WeightFamily;
use crate::rational::{denominator_lcm, format_rational, Rational};
use crate::topology::Topology;
use crate::tree::{LabelSubset, WeightedTree};

use super::enumerate::{enumerate_topologies_with, TopologyCatalog, TopologyConstraint};

pub const MAX_REALIZABILITY_LABELS: u32 = 6;
pub const MAX_GRID_POINTS: u128 = 20_000_000;

/// Edge weights `step, 2·step, …` up to and including `max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub step: Rational,
    pub max: Rational,
}

impl Grid {
    /// Step `1 / (lcm of the family's denominators · refine)`, maximum the
    /// largest entry. No edge of a realization can outweigh an entry, and
    /// exact realizations with compatible denominators land on the grid.
    pub fn compatible(fam: &WeightFamily, refine: u32) -> Grid {
        let lcm = denominator_lcm(fam.iter().map(|(_, v)| v));
        let step = Rational::new(BigInt::one(), lcm * BigInt::from(refine.max(1)));
        let max = fam.iter().map(|(_, v)| v.clone()).max().expect("families are nonempty");
        Grid { step, max }
    }

    fn points(&self) -> Result<i128> {
        let ticks = (&self.max / &self.step).floor().to_integer();
        ticks
            .to_i128()
            .filter(|t| *t >= 1)
            .ok_or_else(|| Error::SizeCap(format!("grid with step {} is unusable", format_rational(&self.step))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub topology: Topology,
    pub tree: WeightedTree,
}

pub fn exhaustive_realizability(fam: &WeightFamily, grid: &Grid) -> Result<Vec<Realization>> {
    exhaustive_realizability_with(fam, grid, Exec::default())
}

pub fn exhaustive_realizability_with(fam: &WeightFamily, grid: &Grid, exec: Exec) -> Result<Vec<Realization>> {
    check_size(fam)?;
    let catalog = enumerate_topologies_with(fam.n(), TopologyConstraint::Any, exec)?;
    exhaustive_realizability_in(fam, grid, &catalog, exec)
}

/// Searches a prebuilt catalog, which must cover `[n]` for the family's `n`.
pub fn exhaustive_realizability_in(
    fam: &WeightFamily,
    grid: &Grid,
    catalog: &TopologyCatalog,
    exec: Exec,
) -> Result<Vec<Realization>> {
    check_size(fam)?;
    if catalog.n_labels != fam.n() {
        return Err(Error::Precondition(format!(
            "catalog has {} labels, family has {}",
            catalog.n_labels,
            fam.n()
        )));
    }
    let per_topology = exec.map(&catalog.items, |topo| search_topology(fam, grid, topo));
    let mut out = Vec::new();
    for found in per_topology {
        out.extend(found?);
    }
    Ok(out)
}

fn check_size(fam: &WeightFamily) -> Result<()> {
    if fam.n() > MAX_REALIZABILITY_LABELS {
        return Err(Error::SizeCap(format!(
            "exhaustive realizability stops at n = {MAX_REALIZABILITY_LABELS}, got {}",
            fam.n()
        )));
    }
    Ok(())
}

/// Reduced row echelon form of `[A | b]`. `None` when inconsistent.
/// Returns the pivot column of each nonzero row.
pub(crate) fn row_reduce(mut rows: Vec<Vec<Rational>>, columns: usize) -> Option<(Vec<Vec<Rational>>, Vec<usize>)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..columns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..=columns {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[columns].is_zero()) {
        return None;
    }
    rows.truncate(r);
    Some((rows, pivots))
}

/// One row `[0/1 per edge | value]` per entry: the edges of the subtree
/// spanning the entry's labels.
pub(crate) fn support_system<'a>(
    entries: impl IntoIterator<Item = (&'a LabelSubset, &'a Rational)>,
    topo: &Topology,
) -> Vec<Vec<Rational>> {
    let tree = topo.tree();
    let e = tree.edge_count();
    entries
        .into_iter()
        .map(|(subset, value)| {
            let mut row = vec![Rational::zero(); e + 1];
            for edge in tree.steiner_edges(subset.members()).expect("labels of the topology") {
                row[edge] = Rational::one();
            }
            row[e] = value.clone();
            row
        })
        .collect()
}

fn to_i128(value: &BigInt) -> Result<i128> {
    value
        .to_i128()
        .ok_or_else(|| Error::SizeCap("grid arithmetic overflows 128 bits".into()))
}

fn search_topology(fam: &WeightFamily, grid: &Grid, topo: &Topology) -> Result<Vec<Realization>> {
    let e = topo.tree().edge_count();
    let Some((rows, pivots)) = row_reduce(support_system(fam.iter(), topo), e) else {
        return Ok(Vec::new());
    };
    let free: Vec<usize> = (0..e).filter(|c| !pivots.contains(c)).collect();
    let ticks = grid.points()?;

    // In units of the step, pivot p equals const_p - Σ_f coef_pf · t_f; scale
    // every row by a common denominator so the search stays in integers.
    let scaled: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| {
            let mut out: Vec<Rational> = free.iter().map(|&f| row[f].clone()).collect();
            out.push(&row[e] / &grid.step);
            out
        })
        .collect();
    let q = denominator_lcm(scaled.iter().flatten());
    let q_int = to_i128(&q)?;
    let q_rat = Rational::from_integer(q.clone());
    let as_int = |r: &Rational| to_i128(&(r * &q_rat).to_integer());
    let constants: Vec<i128> = scaled.iter().map(|row| as_int(&row[free.len()])).collect::<Result<_>>()?;
    let coefficients: Vec<Vec<i128>> = scaled
        .iter()
        .map(|row| row[..free.len()].iter().map(&as_int).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let total = (ticks as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if total > MAX_GRID_POINTS {
        return Err(Error::SizeCap(format!(
            "{total} grid points on topology {} exceed {MAX_GRID_POINTS}",
            topo.canonical_form()
        )));
    }

    let mut found = Vec::new();
    let mut t = vec![1i128; free.len()];
    let mut dependent = vec![0i128; pivots.len()];
    'points: loop {
        let mut ok = true;
        for (p, value) in dependent.iter_mut().enumerate() {
            let v = constants[p] - coefficients[p].iter().zip(&t).map(|(a, x)| a * x).sum::<i128>();
            let (quotient, remainder) = v.div_rem(&q_int);
            if v <= 0 || remainder != 0 || quotient > ticks {
                ok = false;
                break;
            }
            *value = quotient;
        }
        if ok {
            let mut ticks_per_edge = vec![0i128; e];
            for (p, &c) in pivots.iter().enumerate() {
                ticks_per_edge[c] = dependent[p];
            }
            for (f, &c) in free.iter().enumerate() {
                ticks_per_edge[c] = t[f];
            }
            let weights = ticks_per_edge.iter().map(|&x| &grid.step * Rational::from_integer(BigInt::from(x))).collect();
            let tree = WeightedTree::from_shape(topo.tree().clone(), weights)?;
            found.push(Realization {
                topology: topo.clone(),
                tree,
            });
        }
        for slot in t.iter_mut().rev() {
            if *slot < ticks {
                *slot += 1;
                continue 'points;
            }
            *slot = 1;
        }
        break;
    }
    debug_assert!(found.iter().all(|r| r.tree.weights().iter().all(|w| w.is_positive())));
    Ok(found)
}
