//! The `treeweights` command line.
//!
//! Every command reads JSON files, writes one pretty-printed JSON document to
//! stdout and exits with 0 on success, 1 on a domain error (the input is well
//! formed but the request cannot be met) and 2 on unreadable or malformed
//! input or arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::family::{check_four_point, check_triangle, classify_family, FamilyStatus, WeightFamily};
use crate::multiweight::{extend_family, mixed_treelike_equivalence, nm1_to_two, two_to_nm1};
use crate::oracle::{brute_force_k_weight, enumerate_topologies, TopologyConstraint};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reconstruct::{
    canonical_pseudostar, moduli_description, r_io, r_oi, realize_on_topology, reconstruct_equality_star,
    reconstruct_from_two_weights,
};
use crate::topology::Topology;
use crate::tree::{all_k_weights, k_weight, LabelSubset, VertexId, WeightedTree};

pub mod json;

use json::{
    family_from_json, family_to_json, moduli_to_json, pairs_json, parse_json, topology_from_json, topology_to_json,
    tree_from_json, tree_to_json,
};

#[derive(Parser, Debug)]
#[command(name = "treeweights", version, about = "Exact k-weights of positive-weighted labeled trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All k-weights of a weighted tree.
    Kweights {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// Classify an (n-1)-family, or test a 2-family for treelikeness.
    Check {
        #[arg(long)]
        family: PathBuf,
    },
    /// Build a tree realizing a family.
    Reconstruct {
        #[arg(long)]
        family: PathBuf,
        /// Realize on this topology instead of the canonical tree.
        #[arg(long)]
        topology: Option<PathBuf>,
        /// Non-twig edge weights, comma separated, in the topology's edge order.
        #[arg(long, requires = "topology", allow_hyphen_values = true)]
        coords: Option<String>,
    },
    /// The simplex of weights on a topology realizing an (n-1)-family.
    Moduli {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        topology: PathBuf,
    },
    /// Convert between an (n-1)-family with one equality and its 2-weights.
    Convert {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
    },
    /// Add the 2-weights forced on a (k+1)-subset.
    Extend {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        subset: String,
        /// Also decide treelikeness of the base and extended families.
        #[arg(long)]
        check: bool,
    },
    /// Contract a non-twig edge, or split a vertex.
    Op(OpArgs),
    /// List every reduced labeled topology on [n].
    Topologies {
        #[arg(long)]
        n: u32,
        /// Number of labels on internal vertices.
        #[arg(long, default_value_t = 0, conflicts_with = "all")]
        nonleaf: u32,
        /// Any number of internal labels.
        #[arg(long)]
        all: bool,
    },
    /// Compare the k-weight of a subset with the brute-force minimum.
    Oracle {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        subset: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    #[value(name = "nm1-to-2")]
    Nm1To2,
    #[value(name = "2-to-nm1")]
    TwoToNm1,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("operation").required(true).args(["contract", "split"]))]
pub struct OpArgs {
    #[arg(long)]
    tree: PathBuf,
    /// Edge to contract, as "u,v".
    #[arg(long)]
    contract: Option<String>,
    /// Vertex and the neighbours moved to the new vertex, as "v:a,b,…".
    #[arg(long, requires = "weight")]
    split: Option<String>,
    /// Weight of the edge created by a split.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    #[arg(long, default_value_t = 1)]
    r: u32,
}

/// Runs the command line on `args` (including the program name), writing the
/// document to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = target.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(doc) => {
            let text = serde_json::to_string_pretty(&doc).expect("documents serialize");
            match writeln!(out, "{text}") {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn read_tree(path: &Path) -> Result<WeightedTree> {
    tree_from_json(&read_json(path)?)
}

fn read_family(path: &Path) -> Result<WeightFamily> {
    family_from_json(&read_json(path)?)
}

fn read_topology(path: &Path) -> Result<Topology> {
    topology_from_json(&read_json(path)?)
}

fn parse_list<T>(text: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|part| item(part.trim())).collect()
}

fn parse_vertex(text: &str) -> Result<VertexId> {
    text.trim()
        .parse()
        .map(VertexId)
        .map_err(|_| Error::Parse(format!("invalid vertex id `{text}`")))
}

fn execute(command: &Command) -> Result<Value> {
    match command {
        Command::Kweights { tree, k } => {
            let tree = read_tree(tree)?;
            Ok(family_to_json(&all_k_weights(&tree, *k)?))
        }
        Command::Check { family } => check(&read_family(family)?),
        Command::Reconstruct {
            family,
            topology,
            coords,
        } => {
            let fam = read_family(family)?;
            let tree = match topology {
                Some(path) => {
                    let topo = read_topology(path)?;
                    let coords = parse_list(coords.as_deref().unwrap_or(""), parse_rational)?;
                    realize_on_topology(&fam, &topo, &coords)?
                }
                None => reconstruct(&fam)?,
            };
            Ok(tree_to_json(&tree))
        }
        Command::Moduli { family, topology } => {
            let fam = read_family(family)?;
            let topo = read_topology(topology)?;
            Ok(moduli_to_json(&moduli_description(&fam, &topo)?))
        }
        Command::Convert { family, direction } => {
            let fam = read_family(family)?;
            let converted = match direction {
                Direction::Nm1To2 => nm1_to_two(&fam)?.family_two,
                Direction::TwoToNm1 => two_to_nm1(&fam)?.family_nm1,
            };
            Ok(family_to_json(&converted))
        }
        Command::Extend { family, subset, check } => {
            let base = read_family(family)?;
            let subset = LabelSubset::parse(subset)?;
            let mixed = extend_family(&base, &subset)?;
            let mut doc = Map::new();
            doc.insert("subset".into(), json!(mixed.subset.members()));
            doc.insert("distinguished".into(), json!(mixed.distinguished));
            doc.insert("two_weights".into(), pairs_json(mixed.extra_two_weights.iter()));
            if *check {
                let report = mixed_treelike_equivalence(&base, &subset)?;
                doc.insert("base_treelike".into(), json!(report.base_verdict));
                doc.insert("mixed_treelike".into(), json!(report.mixed_verdict));
                doc.insert(
                    "tree".into(),
                    report
                        .mixed_tree
                        .as_ref()
                        .map_or(Value::Null, |t| tree_to_json(&t.canonicalized())),
                );
            }
            Ok(Value::Object(doc))
        }
        Command::Op(args) => op(args),
        Command::Topologies { n, nonleaf, all } => {
            let constraint = match (*all, *nonleaf) {
                (true, _) => TopologyConstraint::Any,
                (false, 0) => TopologyConstraint::LeafOnly,
                (false, m) => TopologyConstraint::NonLeaf(m),
            };
            let catalog = enumerate_topologies(*n, constraint)?;
            let name = match constraint {
                TopologyConstraint::LeafOnly => "leaf_only".to_string(),
                TopologyConstraint::NonLeaf(m) => format!("non_leaf:{m}"),
                TopologyConstraint::Any => "any".to_string(),
            };
            Ok(json!({
                "n": n,
                "constraint": name,
                "count": catalog.len(),
                "topologies": catalog.items.iter().map(topology_to_json).collect::<Vec<_>>(),
            }))
        }
        Command::Oracle { tree, subset } => {
            let tree = read_tree(tree)?;
            let subset = LabelSubset::parse(subset)?;
            let fast = k_weight(&tree, &subset)?;
            let brute = brute_force_k_weight(&tree, &subset)?;
            Ok(json!({
                "subset": subset.key(),
                "k_weight": format_rational(&fast),
                "brute_force": format_rational(&brute),
                "agree": fast == brute,
            }))
        }
    }
}

fn check(fam: &WeightFamily) -> Result<Value> {
    if fam.n() >= 3 && fam.k() + 1 == fam.n() {
        let class = classify_family(fam)?;
        let mut doc = Map::new();
        let status = match &class.status {
            FamilyStatus::AllStrict => "all_strict",
            FamilyStatus::OneEquality { .. } => "one_equality",
            FamilyStatus::Violation { .. } => "violation",
        };
        doc.insert("status".into(), json!(status));
        if let FamilyStatus::OneEquality { c } = class.status {
            doc.insert("c".into(), json!(c));
        }
        doc.insert("M".into(), json!(class.m_max));
        doc.insert("sorted_labels".into(), json!(class.sorted_labels));
        if let FamilyStatus::Violation { witnesses } = &class.status {
            doc.insert("witnesses".into(), json!(witnesses));
        }
        doc.insert("treelike".into(), json!(class.is_treelike()));
        return Ok(Value::Object(doc));
    }
    if fam.k() == 2 {
        let triangle = check_triangle(fam)?;
        let four_point = check_four_point(fam)?;
        return Ok(json!({
            "status": if four_point { "treelike" } else { "not_treelike" },
            "triangle": triangle,
            "four_point": four_point,
        }));
    }
    Err(Error::Precondition(format!(
        "checks exist for k = 2 and k = n - 1, family has n = {}, k = {}",
        fam.n(),
        fam.k()
    )))
}

fn reconstruct(fam: &WeightFamily) -> Result<WeightedTree> {
    if fam.n() >= 3 && fam.k() + 1 == fam.n() {
        return match classify_family(fam)?.status {
            FamilyStatus::AllStrict => canonical_pseudostar(fam),
            FamilyStatus::OneEquality { .. } => reconstruct_equality_star(fam),
            FamilyStatus::Violation { witnesses } => Err(Error::NotTreelike(format!(
                "inequality fails at {}",
                witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
            ))),
        };
    }
    if fam.k() == 2 {
        return reconstruct_from_two_weights(fam).map(|t| t.canonicalized());
    }
    Err(Error::Precondition(format!(
        "reconstruction needs k = 2 or k = n - 1, family has n = {}, k = {}",
        fam.n(),
        fam.k()
    )))
}

fn op(args: &OpArgs) -> Result<Value> {
    let tree = read_tree(&args.tree)?;
    let out = if let Some(edge) = &args.contract {
        let ends = parse_list(edge, parse_vertex)?;
        let [u, v] = ends[..] else {
            return Err(Error::Parse(format!("--contract expects \"u,v\", got `{edge}`")));
        };
        r_io(&tree, (u, v), args.r)?
    } else {
        let spec = args.split.as_deref().expect("clap requires one operation");
        let (vertex, moved) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("--split expects \"v:a,b,…\", got `{spec}`")))?;
        let vertex = parse_vertex(vertex)?;
        let moved = parse_list(moved, parse_vertex)?;
        let y: Rational = parse_rational(args.weight.as_deref().expect("clap requires --weight"))?;
        r_oi(&tree, vertex, &moved, &y, args.r)?
    };
    Ok(tree_to_json(&out))
}
