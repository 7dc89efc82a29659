use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use symmkit::audit::audit_conditions;
use symmkit::bench::{format_table, load_instance, parse_placement, run_bench, write_csv, Manifest};
use symmkit::bnb::{format_report, read_tree, solve, write_tree, PrehandleChoice, ShcFlags, SolveConfig, SolveStatus};
use symmkit::domain::{DomainVector, PropStatus};
use symmkit::error::Error;
use symmkit::instance::Instance;
use symmkit::instances::{build_covering, generate_noise, ndb_toy, CoveringParams, MuMode, NoiseParams};
use symmkit::io::{instance_to_json, parse_domains};
use symmkit::lexred::{propagate_lex, LexOrder};
use symmkit::oracle::OracleCaps;
use symmkit::orbitope::{propagate_orbitope, OrbitopeLayout};
use symmkit::perm::Permutation;

const EXIT_PARSE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "symmkit", version, about = "Symmetry handling for integer programs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance (built-in name or JSON file) and print a report.
    Solve(SolveArgs),
    /// Run a single propagator on a box and print the reduced domains.
    Propagate {
        #[command(subcommand)]
        which: PropagateCmd,
    },
    /// Check the correctness conditions on a recorded tree.
    Audit {
        instance: String,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Write a generated instance as JSON.
    Generate {
        #[command(subcommand)]
        which: GenerateCmd,
        /// Output file (stdout if omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark manifest and print aggregated tables.
    Bench {
        manifest: PathBuf,
        /// Per-run CSV side file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    instance: String,
    #[arg(long, default_value = "none")]
    shc: String,
    #[arg(long, default_value = "branching")]
    prehandle: String,
    #[arg(long, default_value = "first")]
    placement: String,
    #[arg(long)]
    no_bound_pruning: bool,
    #[arg(long)]
    isoprune: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, value_name = "PATH")]
    emit_tree: Option<PathBuf>,
}

#[derive(Args)]
struct BoxArgs {
    /// Domains such as "{0} [-1,0] {1} [-1,1]".
    #[arg(long, allow_hyphen_values = true)]
    domains: Option<String>,
    /// File holding the domain string.
    #[arg(long, conflicts_with = "domains")]
    domains_file: Option<PathBuf>,
    /// Take domains from an instance's variable bounds instead.
    #[arg(long, conflicts_with_all = ["domains", "domains_file"])]
    instance: Option<String>,
}

#[derive(Subcommand)]
enum PropagateCmd {
    /// x ⪰ γ(x) for one permutation given in 1-based cycle notation.
    Lexred {
        #[command(flatten)]
        input: BoxArgs,
        #[arg(long)]
        perm: String,
    },
    /// Orbitopal reduction on a row-major p×q matrix.
    Orbitope {
        #[command(flatten)]
        input: BoxArgs,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
}

#[derive(Subcommand)]
enum GenerateCmd {
    Noise {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long = "H", default_value_t = 480.0)]
        h: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "paper")]
        mu_mode: String,
    },
    Covering {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: usize,
    },
    /// The 3×5 binary noise dosage toy.
    NdbDemo,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let parse = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Parse(_) | Error::Json(_))));
            ExitCode::from(if parse { EXIT_PARSE } else { 1 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Propagate { which } => cmd_propagate(which),
        Cmd::Audit { instance, tree } => cmd_audit(&instance, &tree),
        Cmd::Generate { which, output } => cmd_generate(which, output.as_deref()),
        Cmd::Bench { manifest, csv } => cmd_bench(&manifest, csv.as_deref()),
    }
}

fn config_from(args: &SolveArgs) -> anyhow::Result<SolveConfig> {
    let mut shc = ShcFlags::parse(&args.shc)?;
    shc.isoprune |= args.isoprune;
    let mut cfg = SolveConfig::with_shc(shc);
    cfg.prehandle = PrehandleChoice::parse(&args.prehandle)?;
    cfg.placement = parse_placement(&args.placement)?;
    cfg.bound_pruning = !args.no_bound_pruning;
    cfg.seed = args.seed;
    if args.time_limit.is_nan() || args.time_limit <= 0.0 {
        bail!("time limit must be positive");
    }
    cfg.time_limit = Some(Duration::from_secs_f64(args.time_limit));
    cfg.node_limit = args.node_limit;
    cfg.record_tree = args.emit_tree.is_some();
    Ok(cfg)
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<u8> {
    let inst = load_instance(&args.instance, None)?;
    let cfg = config_from(&args)?;
    let res = solve(&inst, &cfg)?;
    print!("{}", format_report(&inst, &cfg, &res));
    if let (Some(path), Some(tree)) = (&args.emit_tree, &res.tree) {
        write_tree(tree, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if res.status == SolveStatus::LimitReached { EXIT_LIMIT } else { 0 })
}

fn read_box(input: &BoxArgs) -> anyhow::Result<DomainVector> {
    if let Some(s) = &input.domains {
        return Ok(parse_domains(s)?);
    }
    if let Some(p) = &input.domains_file {
        let s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        return Ok(parse_domains(&s)?);
    }
    if let Some(name) = &input.instance {
        let inst: Instance = load_instance(name, None)?;
        return Ok(inst.initial_domains());
    }
    bail!("one of --domains, --domains-file or --instance is required")
}

fn print_outcome(before: &DomainVector, after: &DomainVector, status: PropStatus) {
    println!("before: {before}");
    println!("after:  {after}");
    let label = match status {
        PropStatus::Unchanged => "unchanged",
        PropStatus::Reduced => "reduced",
        PropStatus::Infeasible => "infeasible",
    };
    println!("status: {label}");
    for i in after.changed_since(before) {
        println!("x{} ∈ {}", i + 1, after[i]);
    }
}

fn cmd_propagate(which: PropagateCmd) -> anyhow::Result<u8> {
    let (before, after, status) = match which {
        PropagateCmd::Lexred { input, perm } => {
            let d = read_box(&input)?;
            let gamma = Permutation::parse_cycles(d.len(), &perm)?;
            let mut out = d.clone();
            let st = propagate_lex(&LexOrder::identity_order(gamma), &mut out);
            (d, out, st)
        }
        PropagateCmd::Orbitope { input, p, q } => {
            let d = read_box(&input)?;
            if p * q != d.len() {
                bail!("{p}×{q} matrix needs {} domains, got {}", p * q, d.len());
            }
            let mut out = d.clone();
            let st = propagate_orbitope(&OrbitopeLayout::row_major(p, q, 0), &mut out);
            (d, out, st)
        }
    };
    print_outcome(&before, &after, status);
    Ok(0)
}

fn cmd_audit(instance: &str, tree: &Path) -> anyhow::Result<u8> {
    let inst = load_instance(instance, None)?;
    let tree = read_tree(tree).with_context(|| format!("reading {}", tree.display()))?;
    let report = audit_conditions(&tree, &inst, OracleCaps::from_env())?;
    print!("{report}");
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_generate(which: GenerateCmd, output: Option<&Path>) -> anyhow::Result<u8> {
    let inst = match which {
        GenerateCmd::Noise { p, q, h, seed, mu_mode } => {
            let mut params = NoiseParams::new(p, q, seed);
            params.h = h;
            params.mu_mode = MuMode::parse(&mu_mode)?;
            generate_noise(&params)?
        }
        GenerateCmd::Covering { t, v, k, lambda } => build_covering(&CoveringParams { t, v, k, lambda })?,
        GenerateCmd::NdbDemo => ndb_toy(),
    };
    let mut json = instance_to_json(&inst)?;
    json.push('\n');
    match output {
        Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{json}"),
    }
    Ok(0)
}

fn cmd_bench(manifest: &Path, csv: Option<&Path>) -> anyhow::Result<u8> {
    let m = Manifest::read(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let res = run_bench(&m, manifest.parent())?;
    print!("{}", format_table(&res.rows));
    if let Some(p) = csv {
        write_csv(&res.runs, p)?;
    }
    Ok(0)
}
