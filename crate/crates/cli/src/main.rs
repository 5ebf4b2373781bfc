//! Command-line front end: load and save structures and diagrams, run the
//! validator, amalgamation, oracle queries, independence checks, and the
//! scenario suite.
//!
//! Exit codes: 0 when the requested check passes (or the query is
//! satisfiable), 1 when it fails (or an expected-satisfiable query is
//! not), 2 on usage errors such as malformed files or arguments.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kimlab_core::amalgam::{check_fraisse, strong_amalgam, AmalgamInput, FraisseMode};
use kimlab_core::indep::{indep_star, morley_sequence, GenericSpec, GenericVar, IndepQuery};
use kimlab_core::logic::parse_diagram;
use kimlab_core::oracle::{satisfiable, SatResult};
use kimlab_core::scenarios::{run_all, run_one, ScenarioConfig, SCENARIO_IDS};
use kimlab_core::structure::random_structure;
use kimlab_core::tree::{enumerate, restrict, LevelSet};
use kimlab_core::{ElemId, FinStructure, Report, SortedTuple};

mod out;

#[derive(Parser)]
#[command(
    name = "kimlab",
    about = "Finite selector-function structures: validation, amalgamation, consistency, independence",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tree utilities.
    Tree {
        #[command(subcommand)]
        command: TreeCommand,
    },
    /// Validate a structure file against the selector axioms.
    Validate {
        /// Structure file (.tn).
        file: PathBuf,
    },
    /// Generate a random structure.
    Gen(GenArgs),
    /// Strong amalgamation of two extensions over a common base.
    Amalgamate {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Output file for the amalgam.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Verify the amalgamation-class properties.
    FraisseCheck(FraisseArgs),
    /// Decide satisfiability of a diagram over a base structure.
    Oracle {
        #[arg(long)]
        base: PathBuf,
        /// Diagram file (.qf).
        #[arg(long)]
        diagram: PathBuf,
        /// Write the witness extension here when satisfiable.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the independence relation between two tuples over a base set.
    Indep {
        #[arg(long)]
        ambient: PathBuf,
        /// Space-separated element ids of the left tuple.
        #[arg(long)]
        a: String,
        /// Space-separated element ids of the right tuple.
        #[arg(long)]
        b: String,
        /// Space-separated element ids of the base set.
        #[arg(long, default_value = "")]
        base: String,
    },
    /// Generate a generic sequence from a spec file.
    Morley {
        /// Spec file: `ambient:`, `base:`, and `vars:` lines.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        len: usize,
        /// Write the grown ambient structure here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run verification scenarios.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Enumerate a tree truncation, optionally restricted to a level set.
    Enum {
        #[arg(long)]
        alpha: u32,
        #[arg(long, default_value_t = 2)]
        branch: u32,
        /// Comma-separated levels for the restriction.
        #[arg(long)]
        levels: Option<String>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Number of object elements.
    #[arg(long = "o-count", default_value_t = 4)]
    o_count: usize,
    /// Number of function elements.
    #[arg(long = "f-count", default_value_t = 2)]
    f_count: usize,
    #[arg(long, default_value_t = 2)]
    classes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FraisseArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Size cap for the corpus.
    #[arg(long, default_value_t = 3)]
    cap: usize,
    /// `exhaustive` or `random`.
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Sample count for random mode.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario id or `all`.
    scenario: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Sequence length for dividing checks.
    #[arg(long, default_value_t = 4)]
    len: usize,
    /// Largest array dimension.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Random instances for the amalgamation scenario.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Emit the machine-readable report.
    #[arg(long)]
    json: bool,
    /// Print progress to stderr while scenarios run.
    #[arg(short, long)]
    verbose: bool,
}

/// Environment override for search caps: replaces the corpus cap of
/// `fraisse-check` and bounds the sample counts of `verify`.
fn cap_override() -> Option<usize> {
    std::env::var("KIMLAB_CAP").ok()?.parse().ok()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_structure(path: &Path) -> Result<FinStructure, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    FinStructure::parse_tn(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_ids(text: &str) -> Result<Vec<ElemId>, String> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map(ElemId)
                .map_err(|_| format!("bad element id {t:?}"))
        })
        .collect()
}

fn report_outcome(report: &Report) -> ExitCode {
    print!("{report}");
    if report.pass() {
        println!("PASS");
        ExitCode::SUCCESS
    } else {
        println!("FAIL");
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Tree { command } => match command {
            TreeCommand::Enum {
                alpha,
                branch,
                levels,
            } => {
                if branch == 0 {
                    return Err("branching must be at least 1".to_string());
                }
                let nodes = match levels {
                    None => enumerate(alpha, branch),
                    Some(spec) => {
                        let levels: Vec<u32> = if spec.trim().is_empty() {
                            Vec::new()
                        } else {
                            spec.split(',')
                                .map(|p| {
                                    p.trim()
                                        .parse::<u32>()
                                        .map_err(|_| format!("bad level {p:?}"))
                                })
                                .collect::<Result<_, _>>()?
                        };
                        let w = LevelSet::new(alpha, levels).map_err(|e| e.to_string())?;
                        restrict(alpha, &w, branch)
                    }
                };
                for node in nodes {
                    println!("{node}");
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Validate { file } => {
            let s = load_structure(&file)?;
            Ok(report_outcome(&s.validate()))
        }
        Command::Gen(args) => {
            let s = random_structure(args.n, args.o_count, args.f_count, args.classes, args.seed)
                .map_err(|e| e.to_string())?;
            write_or_print(&args.out, &s.to_tn())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Amalgamate {
            base,
            left,
            right,
            out,
        } => {
            let input = AmalgamInput::new(
                load_structure(&base)?,
                load_structure(&left)?,
                load_structure(&right)?,
            )
            .map_err(|e| e.to_string())?;
            let d = strong_amalgam(&input).map_err(|e| e.to_string())?;
            write_or_print(&out, &d.to_tn())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FraisseCheck(args) => {
            let cap = cap_override().unwrap_or(args.cap);
            let mode = match args.mode.as_str() {
                "exhaustive" => FraisseMode::Exhaustive,
                "random" | "randomized" => FraisseMode::Randomized {
                    samples: args.samples,
                    seed: args.seed,
                },
                other => return Err(format!("unknown mode {other:?}")),
            };
            let report = check_fraisse(args.n, cap, mode).map_err(|e| e.to_string())?;
            Ok(report_outcome(&report))
        }
        Command::Oracle { base, diagram, out } => {
            let base = load_structure(&base)?;
            let text = std::fs::read_to_string(&diagram)
                .map_err(|e| format!("cannot read {}: {e}", diagram.display()))?;
            let d = parse_diagram(&text).map_err(|e| format!("{}: {e}", diagram.display()))?;
            match satisfiable(&base, &d).map_err(|e| e.to_string())? {
                SatResult::Sat(w) => {
                    println!("SAT");
                    for (var, val) in &w.assignment {
                        println!("{var} -> {val}");
                    }
                    match out {
                        Some(path) => std::fs::write(&path, w.extension.to_tn())
                            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                        None => print!("{}", w.extension.to_tn()),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                SatResult::Unsat => {
                    println!("UNSAT");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Indep {
            ambient,
            a,
            b,
            base,
        } => {
            let s = load_structure(&ambient)?;
            let query = IndepQuery {
                a: SortedTuple::new(parse_ids(&a)?),
                b: SortedTuple::new(parse_ids(&b)?),
                over: parse_ids(&base)?.into_iter().collect(),
            };
            let report = indep_star(&s, &query).map_err(|e| e.to_string())?;
            Ok(report_outcome(&report))
        }
        Command::Morley { spec, len, out } => {
            let (ambient, generic) = load_morley_spec(&spec)?;
            let (grown, tuples) =
                morley_sequence(&ambient, &generic, len).map_err(|e| e.to_string())?;
            for (i, t) in tuples.iter().enumerate() {
                println!("b{i} = {t}");
            }
            if let Some(path) = out {
                std::fs::write(&path, grown.to_tn())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let samples = match cap_override() {
                Some(cap) => args.samples.min(cap),
                None => args.samples,
            };
            let cfg = ScenarioConfig {
                seed: args.seed,
                len: args.len,
                m: args.m,
                samples,
            };
            let results = if args.scenario == "all" {
                if args.verbose {
                    let mut results = Vec::new();
                    for id in SCENARIO_IDS {
                        eprintln!("running {id}...");
                        results.push(run_one(id, &cfg).map_err(|e| e.to_string())?);
                    }
                    results
                } else {
                    run_all(&cfg).map_err(|e| e.to_string())?
                }
            } else {
                if !SCENARIO_IDS.contains(&args.scenario.as_str()) {
                    return Err(format!(
                        "unknown scenario {:?}; known: {} or `all`",
                        args.scenario,
                        SCENARIO_IDS.join(", ")
                    ));
                }
                if args.verbose {
                    eprintln!("running {}...", args.scenario);
                }
                vec![run_one(&args.scenario, &cfg).map_err(|e| e.to_string())?]
            };
            let pass = results.iter().all(|r| r.pass());
            if args.json {
                println!("{}", out::render_json(cfg.seed, &results));
            } else {
                for r in &results {
                    println!("== {}", r.scenario);
                    print!("{}", r.report);
                }
                println!("{}", if pass { "PASS" } else { "FAIL" });
            }
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// Morley spec file format:
///
/// ```text
/// # comment
/// ambient: path/to.tn     (relative to the spec file)
/// base: 0 1 2
/// vars: F O O@0
/// ```
///
/// `F` is a fresh function variable, `O` a fresh-class object variable,
/// and `O@<id>` an object variable joining the class of base element
/// `<id>`.
fn load_morley_spec(path: &Path) -> Result<(FinStructure, GenericSpec), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut ambient: Option<FinStructure> = None;
    let mut base: BTreeSet<ElemId> = BTreeSet::new();
    let mut vars: Vec<GenericVar> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        if let Some(rest) = line.strip_prefix("ambient:") {
            let rel = rest.trim();
            let target = path
                .parent()
                .map(|dir| dir.join(rel))
                .unwrap_or_else(|| PathBuf::from(rel));
            ambient = Some(load_structure(&target)?);
        } else if let Some(rest) = line.strip_prefix("base:") {
            base.extend(parse_ids(rest)?);
        } else if let Some(rest) = line.strip_prefix("vars:") {
            for tok in rest.split_whitespace() {
                let var = if tok == "F" {
                    GenericVar::F
                } else if tok == "O" {
                    GenericVar::OFresh
                } else if let Some(id) = tok.strip_prefix("O@") {
                    GenericVar::OInClass(ElemId(
                        id.parse()
                            .map_err(|_| format!("line {lineno}: bad anchor {tok:?}"))?,
                    ))
                } else {
                    return Err(format!("line {lineno}: unknown variable kind {tok:?}"));
                };
                vars.push(var);
            }
        } else {
            return Err(format!("line {lineno}: unrecognized line {line:?}"));
        }
    }
    let ambient = ambient.ok_or("spec file is missing the `ambient:` line")?;
    Ok((ambient, GenericSpec { base, vars }))
}
