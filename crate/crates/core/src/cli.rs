//! Command-line front end. Every subcommand prints one JSON report.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::correlations::{self, Projector};
use crate::dynamics::{self, ProjectiveDecomposition};
use crate::error::{Error, Result};
use crate::factorization::{self, Groups};
use crate::fixtures;
use crate::io::{self, matrix_to_pairs, vector_to_pairs, StateFile};
use crate::linalg::{self, CVector};
use crate::partition::{self, ClusterDecomposition};
use crate::random;
use crate::schmidt;
use crate::state::AnyState;
use crate::tomography;
use crate::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "qfactor", version, about = "Multipartite quantum state analysis")]
pub struct Cli {
    /// Exit with status 2 when a result carries a numerical-ambiguity flag.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finest uncorrelated cluster decomposition.
    Fucd {
        #[arg(long)]
        input: PathBuf,
        /// Frobenius tolerance; defaults to 1e-9 times the total dimension.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Correlation seen by an event string.
    Seen {
        #[arg(long)]
        input: PathBuf,
        /// Cluster decomposition, e.g. `1,2|3,4`.
        #[arg(long)]
        partition: String,
        /// JSON event list (inline or a file path), one entry per cluster.
        #[arg(long)]
        events: String,
    },
    /// Correlation information in bits.
    Info {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// Schmidt form and partners of a bipartite pure state.
    Schmidt {
        #[arg(long)]
        input: PathBuf,
        /// `left|right`, e.g. `2,3|1,4`.
        #[arg(long)]
        bipartition: String,
        #[arg(long, value_enum)]
        basis: Option<BasisChoice>,
    },
    /// Tomographic round trip with exact probe probabilities.
    Tomo {
        #[arg(long, required = true)]
        roundtrip: bool,
        #[arg(long, conflicts_with_all = ["dims", "seed"])]
        input: Option<PathBuf>,
        /// Subsystem dimensions of a random state, e.g. `2,2,3`.
        #[arg(long, required_unless_present = "input")]
        dims: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Nonselective Lüders measurement and the distant state decomposition.
    Measure {
        #[arg(long)]
        input: PathBuf,
        /// Measured cluster, e.g. `2,3`.
        #[arg(long)]
        subsystem: String,
        /// `z`, `x`, `bell`, or a JSON file of projectors.
        #[arg(long)]
        projectors: String,
    },
    /// Writes a catalog state to a file.
    Fixture {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Product condition over two groups, with a randomized violation search.
    Seevinck {
        #[arg(long)]
        input: PathBuf,
        /// Two groups, e.g. `1,2|3,4`.
        #[arg(long)]
        groups: String,
        #[arg(long, default_value_t = factorization::DEFAULT_SEARCH_BUDGET)]
        search: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    Bell,
    Product,
}

/// A finished report; `ambiguous` drives the `--strict` exit status.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub ambiguous: bool,
}

impl Report {
    fn plain(json: Value) -> Self {
        Self { json, ambiguous: false }
    }
}

fn load(path: &Path) -> Result<AnyState> {
    io::read_state(path)
}

fn read_json_arg(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        Ok(arg.to_string())
    } else {
        Ok(std::fs::read_to_string(arg)?)
    }
}

fn partition_for(text: &str, n: usize) -> Result<ClusterDecomposition> {
    let cd: ClusterDecomposition = text.parse()?;
    if cd.n() != n {
        return Err(Error::InvalidPartition(format!(
            "`{text}` covers {} subsystems, the state has {n}",
            cd.n()
        )));
    }
    Ok(cd)
}

fn one_based(set: &[usize]) -> String {
    set.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(",")
}

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Fucd { input, tol } => fucd(input, *tol),
        Command::Seen { input, partition, events } => seen(input, partition, events),
        Command::Info { input, partition } => info(input, partition),
        Command::Schmidt { input, bipartition, basis } => schmidt_cmd(input, bipartition, *basis),
        Command::Tomo { input, dims, seed, .. } => tomo(input.as_deref(), dims.as_deref(), *seed),
        Command::Measure { input, subsystem, projectors } => measure(input, subsystem, projectors),
        Command::Fixture { name, out } => fixture(name, out),
        Command::Seevinck { input, groups, search, seed, tol } => seevinck(input, groups, *search, *seed, *tol),
    }
}

fn fucd(input: &Path, tol: Option<f64>) -> Result<Report> {
    let rho = load(input)?.density();
    let tol = tol.unwrap_or_else(|| factorization::default_tolerance(rho.dim()));
    let r = factorization::finest_ucd(&rho, tol)?;
    let splits: Vec<Value> = r
        .splits
        .iter()
        .map(|s| json!({"cluster": one_based(&s.cluster), "part": one_based(&s.part), "residual": s.residual}))
        .collect();
    let flags: Vec<Value> = r
        .ambiguous
        .iter()
        .map(|a| {
            json!({
                "cluster": one_based(&a.cluster),
                "part": one_based(&a.part),
                "residual": a.residual,
                "accepted": a.accepted,
            })
        })
        .collect();
    Ok(Report {
        ambiguous: r.is_ambiguous(),
        json: json!({
            "decomposition": r.decomposition.to_string(),
            "tolerance": r.tolerance,
            "residual": r.residual,
            "splits": splits,
            "flags": flags,
        }),
    })
}

fn seen(input: &Path, partition: &str, events: &str) -> Result<Report> {
    let rho = load(input)?.density();
    let cd = partition_for(partition, rho.num_subsystems())?;
    let s = io::parse_event_string(&read_json_arg(events)?)?;
    let report = correlations::seen_correlation(&rho, &cd, &s)?;
    Ok(Report::plain(json!({
        "partition": cd.to_string(),
        "coincidence": report.coincidence,
        "marginal_product": report.marginal_product,
        "seen": report.seen,
        "signed": report.signed,
    })))
}

fn info(input: &Path, partition: &str) -> Result<Report> {
    let rho = load(input)?.density();
    let cd = partition_for(partition, rho.num_subsystems())?;
    let ci = correlations::correlation_information(&rho, &cd)?;
    let clusters: Vec<Value> = cd
        .clusters()
        .iter()
        .zip(&ci.within)
        .map(|(cl, w)| json!({"cluster": one_based(cl), "bits": w}))
        .collect();
    Ok(Report::plain(json!({
        "partition": cd.to_string(),
        "within": clusters,
        "among": ci.among,
        "total": ci.total,
        "unit": "bits",
    })))
}

fn schmidt_cmd(input: &Path, bipartition: &str, basis: Option<BasisChoice>) -> Result<Report> {
    let state = load(input)?;
    let psi = state
        .as_pure()
        .ok_or_else(|| Error::InvalidInput("schmidt needs a state vector input".into()))?;
    let groups = partition::parse_groups(bipartition)?;
    if groups.len() != 2 {
        return Err(Error::InvalidPartition(format!("`{bipartition}` is not a bipartition")));
    }
    let n = psi.num_subsystems();
    ClusterDecomposition::new(n, groups.clone())?;
    let left = &groups[0];
    let form = schmidt::schmidt_decompose(psi, left)?;
    let dl: usize = form.left[0].len();
    let basis_vectors: Vec<CVector> = match basis {
        None => form.left.clone(),
        Some(BasisChoice::Product) => (0..dl).map(|k| linalg::basis_vector(dl, k)).collect(),
        Some(BasisChoice::Bell) => {
            if left.iter().any(|&k| psi.dims()[k] != 2) || left.len() != 2 {
                return Err(Error::InvalidInput("the Bell basis needs a two-qubit left part".into()));
            }
            fixtures::bell_basis().iter().map(|b| b.amplitudes().clone()).collect()
        }
    };
    let partners = schmidt::partners_in_basis(psi, left, &basis_vectors)?;
    let terms: Vec<Value> = basis_vectors
        .iter()
        .zip(&partners)
        .map(|(b, p)| json!({"coefficient": p.coefficient, "left": vector_to_pairs(b), "partner": vector_to_pairs(&p.vector)}))
        .collect();
    let mut sorted_left = left.clone();
    sorted_left.sort_unstable();
    Ok(Report::plain(json!({
        "left": one_based(&sorted_left),
        "right": one_based(&form.right_subsystems),
        "coefficients": form.coefficients,
        "basis": match basis { None => "schmidt", Some(BasisChoice::Bell) => "bell", Some(BasisChoice::Product) => "product" },
        "terms": terms,
    })))
}

fn tomo(input: Option<&Path>, dims: Option<&str>, seed: Option<u64>) -> Result<Report> {
    let rho = match (input, dims) {
        (Some(path), _) => load(path)?.density(),
        (None, Some(d)) => {
            let dims: Vec<usize> = d
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad dimension `{t}`"))))
                .collect::<Result<_>>()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(DEFAULT_SEED));
            random::full_rank_density(&mut rng, &dims)
        }
        (None, None) => return Err(Error::InvalidInput("tomo needs --input or --dims".into())),
    };
    let rt = tomography::round_trip(&rho)?;
    Ok(Report { ambiguous: rt.flagged, json: serde_json::to_value(&rt)? })
}

fn measurement_for(spec: &str, dims: &[usize]) -> Result<ProjectiveDecomposition> {
    match spec {
        "z" => ProjectiveDecomposition::computational(dims),
        "x" => {
            if dims.iter().any(|&d| d != 2) {
                return Err(Error::InvalidInput("the x basis is defined for qubits".into()));
            }
            ProjectiveDecomposition::x_basis(dims.len())
        }
        "bell" => {
            if dims != [2, 2] {
                return Err(Error::InvalidInput("the Bell basis needs a two-qubit cluster".into()));
            }
            ProjectiveDecomposition::bell()
        }
        path => ProjectiveDecomposition::new(io::parse_projector_list(&std::fs::read_to_string(path)?)?),
    }
}

fn measure(input: &Path, subsystem: &str, projectors: &str) -> Result<Report> {
    let rho = load(input)?.density();
    let mut measured = partition::parse_index_list(subsystem)?;
    measured.sort_unstable();
    if let Some(&bad) = measured.iter().find(|&&k| k >= rho.num_subsystems()) {
        return Err(Error::OutOfRange(format!("subsystem {}", bad + 1)));
    }
    let mdims: Vec<usize> = measured.iter().map(|&k| rho.dims()[k]).collect();
    let pd = measurement_for(projectors, &mdims)?;
    let out = dynamics::luders_nonselective(&rho, &measured, &pd)?;
    let dd = dynamics::distant_decomposition(&rho, &measured, &pd)?;
    let outcomes: Vec<Value> = dd
        .outcomes
        .iter()
        .map(|o| json!({"index": o.index, "weight": o.weight, "state": matrix_to_pairs(o.state.matrix())}))
        .collect();
    Ok(Report::plain(json!({
        "measured": one_based(&measured),
        "output": StateFile::from_density(&out),
        "distant": {
            "subsystems": one_based(&dd.distant),
            "outcomes": outcomes,
        },
    })))
}

fn fixture(name: &str, out: &Path) -> Result<Report> {
    let state = fixtures::fixture(name)?;
    io::write_state(&state, out)?;
    Ok(Report::plain(json!({"name": name, "out": out.display().to_string(), "dims": state.dims()})))
}

fn seevinck(input: &Path, groups: &str, budget: usize, seed: u64, tol: f64) -> Result<Report> {
    let rho = load(input)?.density();
    let g = Groups::parse(groups, rho.num_subsystems())?;
    let ids: Vec<Projector> = g.subsystems().iter().map(|&k| Projector::identity(rho.dims()[k])).collect();
    let trivial = factorization::seevinck_condition(&rho, &g, &ids, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let best = factorization::search_seevinck_violation(&rho, &g, budget, tol, &mut rng)?;
    let search = match &best {
        Some(w) => json!({
            "max_deviation": w.check.deviation(),
            "violated": !w.check.holds,
            "lhs": w.check.lhs,
            "rhs": w.check.rhs,
            "witness": if w.check.holds {
                Value::Null
            } else {
                Value::Array(w.events.iter().map(|p| json!(matrix_to_pairs(p.matrix()))).collect())
            },
        }),
        None => Value::Null,
    };
    Ok(Report::plain(json!({
        "groups": groups,
        "tolerance": tol,
        "identity_events": {"lhs": trivial.lhs, "rhs": trivial.rhs, "holds": trivial.holds},
        "budget": budget,
        "seed": seed,
        "search": search,
    })))
}

/// Runs the parsed command and maps the outcome to an exit status:
/// 0 success, 1 validation failure, 2 ambiguity under `--strict`.
pub fn main_with(cli: Cli) -> i32 {
    match run(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable report"));
            if cli.strict && report.ambiguous {
                eprintln!("numerically ambiguous result");
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
