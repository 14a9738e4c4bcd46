//! `dtlocal`: generate decision tables, solve them, and classify families.
//!
//! Every command prints one JSON document on stdout. Exit codes: 0 success,
//! 1 failed verification or assertion, 2 bad input, 3 resource limit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dtlocal::analysis::{analyze, ReductionScope};
use dtlocal::classify::{local_type, verify_boundary_la_pair, verify_reachability, worstcase_profile, ReachKind};
use dtlocal::family::{FeatureFamily, HalfPlaneFamily};
use dtlocal::solvers::{
    build_reduction_tree, exhaustive_det_oracle, exhaustive_nondet_oracle, min_depth_det, min_depth_nondet,
    min_nodes_det, min_nodes_det_budgeted, min_nodes_nondet, OracleLimits,
};
use dtlocal::{
    canonical_worst_selection, generate, validate, AttributeFamily, DecisionTable, DecisionTree, Error, Labeling,
    SolveMode,
};

#[derive(Parser)]
#[command(name = "dtlocal", version, about = "Decision trees over binary attribute families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    U1,
    U2,
    U3,
    Halfplane,
    Feature,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelingArg {
    Injective,
    Constant,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveArg {
    DetDepth,
    DetNodes,
    DetNodesBudget,
    NondetDepth,
    NondetNodes,
    ReductionTree,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Det,
    Nondet,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Rows,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ld,
    La,
}

#[derive(clap::Args)]
struct FamilyOpts {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Universe bound for u1/u2.
    #[arg(long)]
    bound: Option<u64>,
    /// Grid size for halfplane/feature (defaults: 4 and max(4, n+1)).
    #[arg(long)]
    grid: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the worst-case table of a family at dimension n.
    Gen {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "injective")]
        labeling: LabelingArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one solver on a table.
    Solve {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum)]
        mode: SolveArg,
        #[arg(long)]
        budget: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Structural parameters of a table.
    Analyze {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum, default_value = "rows")]
        reduction: ScopeArg,
    },
    /// Check that a tree solves a table.
    Verify {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Worst-case values for n = 1..=n_max.
    Profile {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Local type of a family at scale n_max.
    Classify {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        n_max: usize,
    },
    /// Whether minimum depth and minimum size are attained together.
    Reach {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Check the per-row subsystem tree against its depth and size bounds.
    Boundary {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        n: usize,
    },
    /// Exhaustive minima for a small table.
    Oracle {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        max_nodes: Option<u32>,
        #[arg(long)]
        max_depth: Option<u32>,
        #[arg(long, default_value_t = 3)]
        max_columns: usize,
        #[arg(long, default_value_t = 8)]
        max_rows: usize,
    },
}

enum Failure {
    Verification(String),
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit(_) => Failure::Resource(e.to_string()),
            Error::InconsistentProfile(_) => Failure::Verification(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn family(opts: &FamilyOpts, n: usize) -> AttributeFamily {
    match opts.family {
        FamilyArg::U1 => AttributeFamily::Threshold { bound: opts.bound },
        FamilyArg::U2 => AttributeFamily::Point { bound: opts.bound },
        FamilyArg::U3 => AttributeFamily::Full,
        FamilyArg::Halfplane => AttributeFamily::HalfPlane(HalfPlaneFamily::grid(opts.grid.unwrap_or(4))),
        FamilyArg::Feature => {
            AttributeFamily::FeatureThreshold(FeatureFamily::grid(opts.grid.unwrap_or((n as i64 + 1).max(4))))
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<DecisionTable, Failure> {
    Ok(DecisionTable::from_json(&read(path)?)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Gen {
            family: opts,
            n,
            labeling,
            output,
        } => {
            let fam = family(&opts, n);
            let selection = canonical_worst_selection(&fam, n)?;
            let labeling = match labeling {
                LabelingArg::Injective => Labeling::Injective,
                LabelingArg::Constant => Labeling::Constant,
            };
            let table = generate(&fam, &selection, &labeling)?;
            match output {
                Some(path) => {
                    write(&path, &table.to_json())?;
                    Ok(json!({
                        "written": path.display().to_string(),
                        "n": table.n(),
                        "rows": table.len(),
                        "selection": selection,
                    }))
                }
                None => Ok(serde_json::from_str(&table.to_json()).expect("table JSON is valid")),
            }
        }
        Command::Solve {
            table,
            mode,
            budget,
            output,
            dot,
        } => {
            let table = load_table(&table)?;
            if mode == SolveArg::DetNodesBudget && budget.is_none() {
                return Err(Failure::Input("--mode det-nodes-budget needs --budget".into()));
            }
            let result = match mode {
                SolveArg::DetDepth => min_depth_det(&table)?,
                SolveArg::DetNodes => min_nodes_det(&table)?,
                SolveArg::DetNodesBudget => min_nodes_det_budgeted(&table, budget.expect("checked"))?,
                SolveArg::NondetDepth => min_depth_nondet(&table)?,
                SolveArg::NondetNodes => min_nodes_nondet(&table)?,
                SolveArg::ReductionTree => build_reduction_tree(&table)?,
            };
            if let Some(tree) = &result.tree {
                if let Some(path) = output {
                    write(&path, &tree.to_json())?;
                }
                if let Some(path) = dot {
                    write(&path, &tree.to_dot())?;
                }
            }
            Ok(to_value(&result))
        }
        Command::Analyze { table, reduction } => {
            let table = load_table(&table)?;
            let scope = match reduction {
                ScopeArg::Rows => ReductionScope::FullRows,
                ScopeArg::All => ReductionScope::AllPartial,
            };
            Ok(to_value(&analyze(&table, scope)?))
        }
        Command::Verify { table, tree, mode } => {
            let table = load_table(&table)?;
            let tree = DecisionTree::from_json(&read(&tree)?)?;
            let mode = match mode {
                ModeArg::Det => SolveMode::Det,
                ModeArg::Nondet => SolveMode::Nondet,
            };
            let report = validate(&tree, &table, mode);
            let value = to_value(&report);
            if report.ok {
                Ok(value)
            } else {
                println!("{}", serde_json::to_string_pretty(&value).expect("valid JSON"));
                Err(Failure::Verification(format!(
                    "tree does not solve the table: {} violation(s)",
                    report.violations.len()
                )))
            }
        }
        Command::Profile {
            family: opts,
            n_max,
            csv,
        } => {
            let profile = worstcase_profile(&family(&opts, n_max), 1..=n_max)?;
            if let Some(path) = csv {
                write(&path, &profile.to_csv())?;
            }
            let problems = profile.violations();
            if problems.is_empty() {
                Ok(to_value(&profile))
            } else {
                println!("{}", serde_json::to_string_pretty(&profile).expect("valid JSON"));
                Err(Failure::Verification(format!(
                    "profile invariants broken: {}",
                    problems.join("; ")
                )))
            }
        }
        Command::Classify { family: opts, n_max } => {
            let profile = worstcase_profile(&family(&opts, n_max), 1..=n_max)?;
            Ok(to_value(&local_type(&profile)?))
        }
        Command::Reach { family: opts, n, kind } => {
            let kind = match kind {
                KindArg::Ld => ReachKind::Ld,
                KindArg::La => ReachKind::La,
            };
            Ok(to_value(&verify_reachability(&family(&opts, n), n, kind)?))
        }
        Command::Boundary { family: opts, n } => {
            let report = verify_boundary_la_pair(&family(&opts, n), n)?;
            if report.ok {
                Ok(to_value(&report))
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("valid JSON"));
                Err(Failure::Verification("reduction tree exceeds its bounds".into()))
            }
        }
        Command::Oracle {
            table,
            max_nodes,
            max_depth,
            max_columns,
            max_rows,
        } => {
            let table = load_table(&table)?;
            let limits = OracleLimits {
                max_columns,
                max_rows,
                max_depth,
                max_nodes,
            };
            let det = exhaustive_det_oracle(&table, &limits)?;
            let nondet = exhaustive_nondet_oracle(&table, &limits)?;
            Ok(json!({ "det": to_value(&det), "nondet": to_value(&nondet) }))
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("DT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Input(format!("DT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot configure {threads} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli.command));
    match outcome {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("valid JSON"));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Verification(m) => (1, m),
                Failure::Input(m) => (2, m),
                Failure::Resource(m) => (3, m),
            };
            eprintln!("dtlocal: {msg}");
            ExitCode::from(code)
        }
    }
}
