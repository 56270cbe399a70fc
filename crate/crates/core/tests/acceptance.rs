//! Acceptance criteria 1 to 10, one line per criterion.
//!
//! Runs without the libtest harness so every verdict is printed. Criteria
//! listed in `EXPECTED_FAILURES` print FAIL without failing the target.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use treeweights::oracle::{brute_force_all_weights, brute_force_family};
use treeweights::random::{random_labeled_center_star, random_leaf_star, random_reduced_tree, random_tree, WeightRange};
use treeweights::rational::{int, ratio};
use treeweights::{
    all_k_weights, brute_force_k_weight, canonical_pseudostar, classify_family, enumerate_topologies,
    exhaustive_realizability_in, extend_family, k_weight, mixed_treelike_equivalence_in, moduli_description, nm1_to_two,
    r_io, r_oi, reconstruct_equality_star, two_to_nm1, Exec, FamilyStatus, Grid, Label, LabelSubset, Rational,
    SimplexKind, Topology, TopologyCatalog, TopologyConstraint, VertexId, WeightFamily, WeightedTree,
};

use common::rng;

/// Criteria expected to print FAIL.
const EXPECTED_FAILURES: &[u32] = &[8];

struct Verdict {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict {
        pass: false,
        detail: detail.into(),
    }
}

fn catalog(n: Label, constraint: TopologyConstraint) -> TopologyCatalog {
    enumerate_topologies(n, constraint).expect("catalog within bounds")
}

fn subsets(n: Label) -> Vec<LabelSubset> {
    (1u32..1 << n)
        .map(|set| LabelSubset::new((0..n).filter(|i| set & 1 << i != 0).map(|i| i + 1)).unwrap())
        .collect()
}

fn weighted(topo: &Topology, weights: Vec<Rational>) -> WeightedTree {
    WeightedTree::from_shape(topo.tree().clone(), weights).expect("positive weights")
}

fn criterion_1() -> Verdict {
    let grid = [ratio(1, 2), int(1), ratio(3, 2), int(2)];
    let mut trees = 0usize;
    let mut comparisons = 0usize;
    for n in 2..=6 {
        let subs = subsets(n);
        for topo in &catalog(n, TopologyConstraint::Any).items {
            let e = topo.tree().edge_count();
            for shift in [0, 1] {
                let weights: Vec<Rational> = (0..e).map(|i| grid[(i * (2 * shift + 1) + shift) % 4].clone()).collect();
                let tree = weighted(topo, weights);
                let brute = brute_force_all_weights(&tree).unwrap();
                for s in &subs {
                    if k_weight(&tree, s).unwrap() != brute[s] {
                        return fail(format!("{s} on {}", tree.canonical_form()));
                    }
                }
                trees += 1;
                comparisons += subs.len();
            }
        }
    }
    let mut rng = rng(1);
    let mut random = 0;
    while random < 1000 {
        let n = rng.gen_range(2..=6);
        let tree = random_reduced_tree(&mut rng, n, WeightRange::default());
        if tree.shape().vertex_count() > 9 {
            continue;
        }
        for s in subsets(n) {
            if k_weight(&tree, &s).unwrap() != brute_force_k_weight(&tree, &s).unwrap() {
                return fail(format!("{s} on random tree {}", tree.canonical_form()));
            }
            comparisons += 1;
        }
        random += 1;
    }
    pass(format!("{trees} grid-weighted catalog trees, {random} random trees, {comparisons} subsets"))
}

/// `count` positive integers, the weights of a random split.
fn parts(rng: &mut impl Rng, count: usize) -> Vec<Rational> {
    (0..count).map(|_| int(rng.gen_range(1..=20))).collect()
}

fn criterion_2() -> Verdict {
    let mut rng = rng(2);
    let mut realized = 0usize;
    let mut rejected = 0usize;
    let mut topologies = 0usize;
    for n in 4..=6 {
        let mut families = Vec::new();
        while families.len() < 4 {
            let tree = random_reduced_tree(&mut rng, n, WeightRange::default());
            let fam = all_k_weights(&tree, n - 1).unwrap();
            if classify_family(&fam).unwrap().status == FamilyStatus::AllStrict {
                families.push(fam);
            }
        }
        let leaf_only = catalog(n, TopologyConstraint::LeafOnly);
        for topo in &leaf_only.items {
            topologies += 1;
            let big_n = topo.non_twig_edges().len();
            for fam in &families {
                let desc = moduli_description(fam, topo).unwrap();
                if desc.dimension() != Some(big_n) {
                    return fail(format!("dimension {:?} instead of {big_n}", desc.dimension()));
                }
                let bound = match &desc.kind {
                    SimplexKind::OpenSumBound { bound } => bound.clone(),
                    SimplexKind::Point if big_n == 0 => {
                        let tree = desc.realize(&[]).unwrap();
                        if &all_k_weights(&tree, n - 1).unwrap() != fam {
                            return fail("star realization differs");
                        }
                        realized += 1;
                        continue;
                    }
                    other => return fail(format!("unexpected kind {other:?}")),
                };
                for _ in 0..50 {
                    let a = parts(&mut rng, big_n + 1);
                    let total: Rational = a.iter().sum();
                    let point: Vec<Rational> = a[1..].iter().map(|x| &bound * x / &total).collect();
                    let tree = desc.realize(&point).unwrap();
                    if &all_k_weights(&tree, n - 1).unwrap() != fam {
                        return fail(format!("interior point of {} does not realize F", topo.canonical_form()));
                    }
                    realized += 1;
                }
                let a = parts(&mut rng, big_n);
                let total: Rational = a.iter().sum();
                let on_bound: Vec<Rational> = a.iter().map(|x| &bound * x / &total).collect();
                let beyond: Vec<Rational> = on_bound.iter().map(|x| x * int(2)).collect();
                let mut on_face = on_bound.iter().map(|x| x / int(2)).collect::<Vec<_>>();
                on_face[0] = Rational::zero();
                for point in [on_bound, beyond, on_face] {
                    if desc.check(&point).is_ok() || desc.realize(&point).is_ok() {
                        return fail(format!("boundary point accepted on {}", topo.canonical_form()));
                    }
                    rejected += 1;
                }
            }
        }
    }
    pass(format!("{topologies} leaf-only topologies, {realized} realizations, {rejected} boundary points rejected"))
}

fn criterion_3() -> Verdict {
    let mut rng = rng(3);
    let mut families = 0usize;
    let mut realized = 0usize;
    let mut empty = 0usize;
    for n in 4..=6 {
        for m in 2..=n - 2 {
            let non_leaf = catalog(n, TopologyConstraint::NonLeaf(m));
            for _ in 0..8 {
                let tree = random_tree(&mut rng, n, m, WeightRange::default());
                let fam = all_k_weights(&tree, n - 1).unwrap();
                let class = classify_family(&fam).unwrap();
                if class.m_max != m || class.status != FamilyStatus::AllStrict {
                    return fail(format!("tree with {m} internal labels classified as {class:?}"));
                }
                let topo = Topology::of(&tree).unwrap();
                let desc = moduli_description(&fam, &topo).unwrap();
                let big_n = desc.coordinates.len();
                let SimplexKind::SumEquality { total } = &desc.kind else {
                    return fail(format!("kind {:?} on the generating topology", desc.kind));
                };
                if desc.dimension() != Some(big_n - 1) {
                    return fail("dimension is not N-1");
                }
                let own: Vec<Rational> = desc.coordinates.iter().map(|&e| tree.weight(e).clone()).collect();
                if &own.iter().sum::<Rational>() != total || desc.check(&own).is_err() {
                    return fail("generating weights miss the sum equality");
                }
                for _ in 0..20 {
                    let a = parts(&mut rng, big_n);
                    let sum: Rational = a.iter().sum();
                    let point: Vec<Rational> = a.iter().map(|x| total * x / &sum).collect();
                    if all_k_weights(&desc.realize(&point).unwrap(), n - 1).unwrap() != fam {
                        return fail("sampled point does not realize F");
                    }
                    realized += 1;
                }
                let max_labels = class.max_labels();
                for other in &non_leaf.items {
                    let d = moduli_description(&fam, other).unwrap();
                    let matches = other.tree().non_leaf_labels() == max_labels;
                    if matches != !d.is_empty() {
                        return fail(format!("wrong emptiness on {}", other.canonical_form()));
                    }
                    if !matches {
                        empty += 1;
                    }
                }
                families += 1;
            }
        }
    }
    pass(format!("{families} families, {realized} sampled realizations, {empty} mismatched topologies empty"))
}

fn criterion_4() -> Verdict {
    let mut rng = rng(4);
    let mut families = 0usize;
    let mut searched = 0usize;
    for n in 3..=6 {
        let all = catalog(n, TopologyConstraint::Any);
        let refine = if n <= 5 { 2 } else { 1 };
        for _ in 0..4 * n {
            let star = random_labeled_center_star(&mut rng, n, WeightRange::integers(3));
            let c = star.shape().labeled_center_star().unwrap();
            let fam = all_k_weights(&star, n - 1).unwrap();
            if classify_family(&fam).unwrap().status != (FamilyStatus::OneEquality { c }) {
                return fail("labeled-centre star not classified as one equality");
            }
            let rebuilt = reconstruct_equality_star(&fam).unwrap();
            if rebuilt.canonical_form() != star.canonical_form() {
                return fail("reconstructed star differs");
            }
            let pairs = nm1_to_two(&fam).unwrap().family_two;
            if all_k_weights(&rebuilt, 2).unwrap() != pairs || all_k_weights(&rebuilt, n - 1).unwrap() != fam {
                return fail("reconstructed weights differ from the predicted ones");
            }
            let found = exhaustive_realizability_in(&fam, &Grid::compatible(&fam, refine), &all, Exec::default()).unwrap();
            searched += all.len();
            match found.as_slice() {
                [only] if only.topology.tree().labeled_center_star() == Some(c)
                    && only.tree.canonical_form() == rebuilt.canonical_form() => {}
                _ => {
                    return fail(format!(
                        "{} realizations found for a family centred at {c}",
                        found.len()
                    ))
                }
            }
            families += 1;
        }
    }
    pass(format!("{families} one-equality families, unique realization among {searched} topology searches"))
}

fn criterion_5() -> Verdict {
    let mut rng = rng(5);
    for _ in 0..200 {
        let n = rng.gen_range(3..=8);
        let star = random_labeled_center_star(&mut rng, n, WeightRange::default());
        let fam = all_k_weights(&star, n - 1).unwrap();
        let pairs = all_k_weights(&star, 2).unwrap();
        let forward = nm1_to_two(&fam).unwrap();
        if forward.family_two != pairs {
            return fail("nm1_to_two differs from the star's 2-weights");
        }
        let back = two_to_nm1(&forward.family_two).unwrap();
        if back.family_nm1 != fam || back.center != forward.center {
            return fail("two_to_nm1 does not invert nm1_to_two");
        }
        let again = nm1_to_two(&two_to_nm1(&pairs).unwrap().family_nm1).unwrap();
        if again.family_two != pairs {
            return fail("nm1_to_two does not invert two_to_nm1");
        }
    }
    pass("200 round trips in both directions")
}

/// A base family with a subset where the equality holds, from a random tree.
fn general_instance(rng: &mut impl Rng, m: Label) -> (WeightFamily, LabelSubset) {
    loop {
        let tree = random_reduced_tree(rng, m, WeightRange::integers(4));
        let k = rng.gen_range(2..=m - 2);
        let fam = all_k_weights(&tree, k).unwrap();
        let found = subsets(m)
            .into_iter()
            .filter(|s| s.len() == k as usize + 1)
            .find(|s| extend_family(&fam, s).is_ok());
        if let Some(subset) = found {
            return (fam, subset);
        }
    }
}

/// The base family with one entry outside the subset's equality raised.
fn perturbed(fam: &WeightFamily, subset: &LabelSubset) -> Option<WeightFamily> {
    let mut entries = fam.entries().clone();
    let key = entries
        .keys()
        .find(|s| !s.members().iter().all(|l| subset.contains(*l)))?
        .clone();
    let raised = &entries[&key] + Rational::one();
    entries.insert(key, raised);
    WeightFamily::new(fam.n(), fam.k(), entries).ok()
}

fn criterion_6() -> Verdict {
    let mut rng = rng(6);
    let mut full = 0usize;
    let mut general = 0usize;
    let mut false_verdicts = 0usize;
    for (m, count) in [(4, 40), (5, 35), (6, 30)] {
        let all = catalog(m, TopologyConstraint::Any);
        let subset = LabelSubset::new(1..=m).unwrap();
        for _ in 0..count {
            let star = random_labeled_center_star(&mut rng, m, WeightRange::default());
            let base = all_k_weights(&star, m - 1).unwrap();
            let report = mixed_treelike_equivalence_in(&base, &subset, &all, Exec::default()).unwrap();
            if !(report.base_verdict && report.mixed_verdict) {
                return fail(format!("verdicts {} / {} on a star family", report.base_verdict, report.mixed_verdict));
            }
            let same = report.shared_tree.as_ref().map(WeightedTree::canonical_form) == Some(star.canonical_form());
            if !same || report.base_topologies != report.mixed_topologies {
                return fail("realizing trees differ");
            }
            full += 1;
        }
    }
    for m in [4, 5] {
        let all = catalog(m, TopologyConstraint::Any);
        for _ in 0..12 {
            let (base, subset) = general_instance(&mut rng, m);
            let candidates = [Some(base.clone()), perturbed(&base, &subset)];
            for fam in candidates.into_iter().flatten() {
                let report = mixed_treelike_equivalence_in(&fam, &subset, &all, Exec::default()).unwrap();
                if !report.verdicts_agree() {
                    return fail(format!("verdicts differ for k = {} on [{m}]", fam.k()));
                }
                if report.mixed_verdict {
                    let tree = report.mixed_tree.as_ref().unwrap();
                    let mixed = extend_family(&fam, &subset).unwrap();
                    let pairs_hold = mixed
                        .extra_two_weights
                        .iter()
                        .all(|(s, v)| &k_weight(tree, s).unwrap() == v);
                    let topologies_nest = report.mixed_topologies.iter().all(|t| report.base_topologies.contains(t));
                    if all_k_weights(tree, fam.k()).unwrap() != fam || !pairs_hold || !topologies_nest {
                        return fail("mixed realization is not a base realization");
                    }
                } else {
                    false_verdicts += 1;
                }
                general += 1;
            }
        }
    }
    pass(format!(
        "{full} instances with k = m-1, {general} with k < m-1 ({false_verdicts} with both verdicts false)"
    ))
}

fn criterion_7() -> Verdict {
    let mut rng = rng(7);
    let mut trees = 0usize;
    let mut edges = 0usize;
    while trees < 500 {
        let n = rng.gen_range(4..=8);
        let tree = random_tree(&mut rng, n, 0, WeightRange::default());
        let shape = tree.shape();
        let admissible: Vec<usize> = shape
            .non_twig_edges()
            .into_iter()
            .filter(|&e| {
                let (a, b) = shape.split_labels(e);
                a.len() > 1 && b.len() > 1
            })
            .collect();
        if admissible.is_empty() {
            continue;
        }
        let fam = all_k_weights(&tree, n - 1).unwrap();
        for e in admissible {
            let (keep, drop) = shape.edge(e);
            let contracted = r_io(&tree, (keep, drop), 1).unwrap();
            if all_k_weights(&contracted, n - 1).unwrap() != fam {
                return fail("contraction changed an (n-1)-weight");
            }
            let moved: Vec<VertexId> = shape.neighbors(drop).into_iter().filter(|&v| v != keep).collect();
            let restored = r_oi(&contracted, keep, &moved, tree.weight(e), 1).unwrap();
            if restored.canonical_form() != tree.canonical_form() {
                return fail("splitting did not restore the tree");
            }
            edges += 1;
        }
        trees += 1;
    }
    pass(format!("{trees} trees, {edges} contractions inverted"))
}

fn criterion_8() -> Verdict {
    let mut rng = rng(8);
    let mut literal_counterexamples = 0usize;
    let mut by_non_leaf: BTreeMap<usize, usize> = BTreeMap::new();
    for t in 0..1000 {
        let n = rng.gen_range(3..=8);
        let tree = if t % 5 == 0 {
            random_labeled_center_star(&mut rng, n, WeightRange::default())
        } else {
            random_reduced_tree(&mut rng, n, WeightRange::default())
        };
        let non_leaf = tree.shape().non_leaf_labels();
        *by_non_leaf.entry(non_leaf.len()).or_default() += 1;
        let class = classify_family(&all_k_weights(&tree, n - 1).unwrap()).unwrap();
        let all_strict = class.status == FamilyStatus::AllStrict;
        let center = tree.shape().labeled_center_star();
        if all_strict != non_leaf.is_empty() {
            literal_counterexamples += 1;
        }
        if non_leaf.is_empty() && !all_strict {
            return fail("leaf-labeled tree is not all strict");
        }
        if all_strict == center.is_some() {
            return fail("all strict does not match 'not a labeled-centre star'");
        }
        let one_equality = matches!(class.status, FamilyStatus::OneEquality { c } if Some(c) == center);
        if one_equality != center.is_some() {
            return fail("one equality does not match the labeled-centre stars");
        }
        if !non_leaf.is_empty() && (class.m_max as usize != non_leaf.len() || class.max_labels() != non_leaf) {
            return fail("M differs from the internal label count");
        }
    }
    let detail = format!(
        "trees by internal label count {by_non_leaf:?}; OneEquality iff labeled-centre star and M = internal \
         label count hold; 'AllStrict iff only leaf-labels' has {literal_counterexamples} counterexamples \
         (AllStrict holds iff the tree is not a labeled-centre star)"
    );
    if literal_counterexamples == 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

/// `(Σ_{k≠j} D̂_k - coefficient·D̂_j) / (n-1)` for every `j`.
fn twig_formula(fam: &WeightFamily, coefficient: i64) -> Vec<Rational> {
    let hats = fam.hat_values();
    let n = hats.len() as i64;
    let total: Rational = hats.iter().sum();
    hats.iter()
        .map(|d| (&total - d - int(coefficient) * d) / int(n - 1))
        .collect()
}

/// Does the star with these twigs reproduce `fam` under the oracle?
fn star_reproduces(fam: &WeightFamily, twigs: &[Rational]) -> bool {
    if twigs.iter().any(|w| !w.is_positive()) {
        return false;
    }
    let n = twigs.len() as u32;
    let star = WeightedTree::new(
        (0..=n).map(VertexId),
        (1..=n).map(|j| (VertexId(0), VertexId(j), twigs[j as usize - 1].clone())).collect::<Vec<_>>(),
        (1..=n).map(|j| (j, VertexId(j))),
    )
    .unwrap();
    &brute_force_family(&star, n - 1).unwrap() == fam
}

fn criterion_9() -> Verdict {
    let mut stars = Vec::new();
    for n in 3..=6u32 {
        for code in 0..3usize.pow(n) {
            let twigs: Vec<Rational> = (0..n).map(|j| int((code / 3usize.pow(j) % 3) as i64 + 1)).collect();
            stars.push(twigs);
        }
    }
    let mut rng = rng(9);
    for n in 3..=6 {
        for _ in 0..30 {
            let star = random_leaf_star(&mut rng, n, WeightRange::default());
            stars.push(star.weights().to_vec());
        }
    }
    let mut variant_failures = 0usize;
    for twigs in &stars {
        let n = twigs.len() as u32;
        let star = WeightedTree::new(
            (0..=n).map(VertexId),
            (1..=n).map(|j| (VertexId(0), VertexId(j), twigs[j as usize - 1].clone())).collect::<Vec<_>>(),
            (1..=n).map(|j| (j, VertexId(j))),
        )
        .unwrap();
        let fam = all_k_weights(&star, n - 1).unwrap();
        let derived = twig_formula(&fam, n as i64 - 2);
        if &derived != twigs || !star_reproduces(&fam, &derived) {
            return fail("derived formula misses the star's twigs");
        }
        let pseudostar = canonical_pseudostar(&fam).unwrap();
        if pseudostar.canonical_form() != star.canonical_form() || brute_force_family(&pseudostar, n - 1).unwrap() != fam
        {
            return fail("canonical_pseudostar differs from the derived star");
        }
        if !star_reproduces(&fam, &twig_formula(&fam, n as i64)) {
            variant_failures += 1;
        }
    }
    if variant_failures == 0 {
        return fail("the -n variant passed every fixture");
    }
    pass(format!(
        "derived formula and canonical_pseudostar agree with the oracle on {} stars; the -n variant fails on {variant_failures}",
        stars.len()
    ))
}

fn criterion_10() -> Verdict {
    let problems = common::check_golden_cases();
    if problems.is_empty() {
        pass(format!("{} golden cases, each byte-identical over two runs", common::GOLDEN_CASES.len()))
    } else {
        fail(problems.join("; "))
    }
}

fn main() {
    let criteria: [(u32, fn() -> Verdict); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let only: Option<u32> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut unexpected = 0;
    for (number, check) in criteria {
        if only.is_some_and(|o| o != number) {
            continue;
        }
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            fail(format!("panicked: {message}"))
        });
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        let expected = !verdict.pass && EXPECTED_FAILURES.contains(&number);
        println!(
            "criterion {number}: {status} [{:.1}s] {}{}",
            start.elapsed().as_secs_f64(),
            verdict.detail,
            if expected { " (known failure)" } else { "" }
        );
        if !verdict.pass && !expected {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
