//! `cac` — command-line front end for the conflict-avoiding code toolkit.
//!
//! Subcommands bind the library modules one-to-one: `verify` and `double`
//! work on code files, `bound` and `catalog` print the closed-form results,
//! `search` runs the exhaustive oracle, `equi` builds the matching-based
//! optimum for odd lengths, and `simulate` replays or adversarially searches
//! slot offsets.
//!
//! Exit status: 0 on success; 1 when the input was well-formed but the
//! requested property is false (a `verify` miss, a `double` of a
//! non-conflict-avoiding code); 2 on usage or input errors. Payloads go to
//! stdout as JSON (TSV where `--tsv` applies), diagnostics to stderr. Output
//! is byte-deterministic for fixed arguments; work counters change with
//! pruning details across versions, so they appear only under `--stats`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use cac_core::bounds::{self, BoundKind, BoundResult, Quantity};
use cac_core::construct::{build_graph, double_code, m_e_with_witness, ConstructError};
use cac_core::search::{enumerate_equi_classes, max_code, max_code_over, SearchMode};
use cac_core::sim::{simulate, worst_case_sigma, OffsetAssignment, SampleSpec, WorstCaseOptions};
use cac_core::validate::{validate, Code};

#[derive(Parser)]
#[command(
    name = "cac",
    version,
    about = "Conflict-avoiding code toolkit: verify, double, bound, search, simulate"
)]
struct Cli {
    /// Cap on worker threads for parallel work (sampled simulation).
    #[arg(long, global = true, env = "CAC_THREADS")]
    threads: Option<usize>,
    /// Include work counters (search nodes, simulation points) in payloads.
    #[arg(long, global = true)]
    stats: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Plain conflict-avoiding: pairwise disjoint difference sets.
    Cac,
    /// Strong: admissible codewords, pairwise disjoint augmented sets.
    Scac,
}

impl Mode {
    fn search_mode(self) -> SearchMode {
        match self {
            Mode::Cac => SearchMode::Cac,
            Mode::Scac => SearchMode::Scac,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum QuantityArg {
    /// M(L,3), the plain maximum.
    M,
    /// M_S(L,3), the strong maximum (even lengths).
    Ms,
}

impl From<QuantityArg> for Quantity {
    fn from(arg: QuantityArg) -> Quantity {
        match arg {
            QuantityArg::M => Quantity::CacMax,
            QuantityArg::Ms => Quantity::ScacMax,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a code file; exit 0 when the property holds, 1 when it fails.
    Verify {
        /// Property to check.
        #[arg(long, value_enum, default_value_t = Mode::Cac)]
        mode: Mode,
        /// Code JSON file: {"L": 28, "w": 3, "codewords": [[0, 4, 9], ...]}.
        file: PathBuf,
    },
    /// Double a conflict-avoiding code into a strong one of twice the length.
    Double {
        /// Code JSON file; exit 1 if the code is not conflict-avoiding.
        file: PathBuf,
    },
    /// Closed-form bounds and exact values for one length.
    Bound {
        length: u64,
        /// Also list statements whose hypotheses fail at this length.
        #[arg(long)]
        all: bool,
    },
    /// Exhaustive branch-and-bound search for a maximum code.
    Search {
        #[arg(long, value_enum, default_value_t = Mode::Cac)]
        mode: Mode,
        length: usize,
        /// Codeword weight.
        #[arg(long, default_value_t = 3)]
        weight: usize,
        /// Node budget; when exhausted the outcome is marked unproven.
        #[arg(long)]
        budget: Option<u64>,
        /// Restrict to equi-difference codewords {0, g, 2g} (weight 3).
        #[arg(long)]
        equi: bool,
    },
    /// Cycle graph and equi-difference optimum for an odd length.
    Equi {
        /// Odd length, at least 3.
        length: usize,
        /// Dump the cycles as TSV rows (L, cycle index, vertices...).
        #[arg(long)]
        graph: bool,
    },
    /// Replay a slot-offset assignment, or search for worst-case offsets.
    Simulate {
        /// Code JSON file.
        file: PathBuf,
        /// Per-user slot offsets, comma-separated; halves allowed ("1,1.5,3").
        #[arg(long, conflicts_with = "worst_case")]
        offsets: Option<String>,
        /// Minimize one user's surviving packets over interferer offsets.
        #[arg(long)]
        worst_case: bool,
        /// Victim index for --worst-case; omitted = every user in turn.
        #[arg(long, requires = "worst_case")]
        victim: Option<usize>,
        /// Refuse exact worst-case search above this many users.
        #[arg(long, default_value_t = 4, requires = "worst_case")]
        max_users: usize,
        /// Sample this many random assignments instead of exact search.
        #[arg(long, requires_all = ["worst_case", "seed"])]
        samples: Option<u64>,
        /// RNG seed for --samples; required so runs are reproducible.
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
    },
    /// Bound table over a length range.
    Catalog {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Which maximum the table covers.
        #[arg(long, value_enum, default_value_t = QuantityArg::M)]
        quantity: QuantityArg,
        /// Tab-separated columns L, lower, upper, exact, provenance.
        #[arg(long)]
        tsv: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Only the first global-pool build wins; fine for a one-shot binary.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command, cli.stats) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, stats: bool) -> Result<ExitCode, String> {
    match command {
        Command::Verify { mode, file } => {
            let code = read_code(&file)?;
            let report = validate(&code);
            let holds = match mode {
                Mode::Cac => report.is_cac,
                Mode::Scac => report.is_scac,
            };
            emit(&report)?;
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Double { file } => {
            let code = read_code(&file)?;
            match double_code(&code) {
                Ok(doubled) => {
                    emit(&doubled)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(error @ ConstructError::NotConflictAvoiding) => {
                    eprintln!("{error}");
                    Ok(ExitCode::from(1))
                }
                Err(error) => Err(error.to_string()),
            }
        }
        Command::Bound { length, all } => {
            let mut results = vec![bounds::m_cac_exact(length), bounds::ms_exact(length)];
            if let Some(lower) = bounds::doubling_lower(length) {
                results.push(lower);
            }
            results.push(bounds::ms_upper(length));
            results.push(bounds::ms_upper_legacy(length));
            if !all {
                results.retain(BoundResult::is_applicable);
            }
            emit(&results)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            mode,
            length,
            weight,
            budget,
            equi,
        } => {
            let mode = mode.search_mode();
            let outcome = if equi {
                if weight != 3 {
                    return Err(format!("--equi is defined for weight 3, not {weight}"));
                }
                let classes = enumerate_equi_classes(length, mode).map_err(|e| e.to_string())?;
                max_code_over(length, weight, mode, classes, budget)
            } else {
                max_code(length, weight, mode, budget).map_err(|e| e.to_string())?
            };
            emit_with_counters(&outcome, stats)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equi { length, graph } => {
            let cycles = build_graph(length).map_err(|e| e.to_string())?;
            if graph {
                let mut table = String::new();
                for (index, cycle) in cycles.cycles.iter().enumerate() {
                    table.push_str(&format!("{length}\t{index}"));
                    for vertex in cycle {
                        table.push_str(&format!("\t{vertex}"));
                    }
                    table.push('\n');
                }
                put(&table);
                return Ok(ExitCode::SUCCESS);
            }
            let optimum = m_e_with_witness(length).map_err(|e| e.to_string())?;
            emit(&EquiPayload {
                length,
                cycles: cycles.cycles.len(),
                n_odd: cycles.n_odd(),
                m_e: optimum.value,
                witness: optimum.witness,
                leave: optimum.leave.residues,
                tight: optimum.leave.tight,
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            file,
            offsets,
            worst_case,
            victim,
            max_users,
            samples,
            seed,
        } => {
            let code = read_code(&file)?;
            if let Some(text) = offsets {
                let assignment = OffsetAssignment::parse_decimals(code.length(), &text)
                    .map_err(|e| e.to_string())?;
                let report = simulate(&code, &assignment).map_err(|e| e.to_string())?;
                emit(&report)?;
                return Ok(ExitCode::SUCCESS);
            }
            if !worst_case {
                return Err("pass exactly one of --offsets or --worst-case".into());
            }
            let options = WorstCaseOptions {
                max_users,
                sample: samples.map(|count| SampleSpec {
                    count,
                    seed: seed.expect("clap ties --samples to --seed"),
                }),
            };
            if let Some(victim) = victim {
                let outcome =
                    worst_case_sigma(&code, victim, &options).map_err(|e| e.to_string())?;
                emit_with_counters(&outcome, stats)?;
            } else {
                let outcomes = (0..code.size())
                    .map(|v| worst_case_sigma(&code, v, &options))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                emit_with_counters(&outcomes, stats)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog {
            from,
            to,
            quantity,
            tsv,
        } => {
            let rows = bounds::catalog_rows(quantity.into(), from, to);
            if tsv {
                put(&catalog_tsv(&rows));
            } else {
                emit(&rows)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// JSON shape of `equi`: graph statistics plus the optimum and its witness.
#[derive(Serialize)]
struct EquiPayload {
    #[serde(rename = "L")]
    length: usize,
    /// Cycle count of the doubling graph.
    cycles: usize,
    /// Odd cycles, the loop included; each forces one unmatched vertex.
    n_odd: usize,
    m_e: usize,
    witness: Code,
    /// Residues no difference set covers.
    leave: Vec<usize>,
    /// Empty leave: no code of any shape can beat the witness.
    tight: bool,
}

fn read_code(path: &Path) -> Result<Code, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes to stdout, treating a broken pipe (reader such as `head` closed
/// early) as a normal quiet exit rather than a panic.
fn put(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(error) = out.write_all(text.as_bytes()) {
        if error.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {error}");
        std::process::exit(2);
    }
}

fn emit<T: Serialize>(payload: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(payload).map_err(|e| e.to_string())?;
    put(&text);
    put("\n");
    Ok(())
}

/// Emits a payload whose type carries work counters, dropping them unless
/// `--stats` was given so that default output stays comparable across
/// versions (counters move whenever pruning or chunking details change).
fn emit_with_counters<T: Serialize>(payload: &T, stats: bool) -> Result<(), String> {
    let mut value = serde_json::to_value(payload).map_err(|e| e.to_string())?;
    if !stats {
        strip_counters(&mut value);
    }
    let text = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
    put(&text);
    put("\n");
    Ok(())
}

fn strip_counters(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove("nodes_explored");
            map.remove("points_evaluated");
        }
        Value::Array(items) => items.iter_mut().for_each(strip_counters),
        _ => {}
    }
}

/// One row per length: L, lower, upper, exact, provenance. Missing cells
/// print as "-"; provenance is a comma-joined list of statement ids.
fn catalog_tsv(rows: &[BoundResult]) -> String {
    let mut out = String::from("L\tlower\tupper\texact\tprovenance\n");
    for row in rows {
        let cell = |bound: Option<u64>| bound.map_or_else(|| "-".into(), |v| v.to_string());
        let provenance = if row.provenance.is_empty() {
            "-".to_string()
        } else {
            row.provenance
                .iter()
                .map(|p| p.id())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            row.length,
            cell(row.lo),
            cell(row.hi),
            row.kind == BoundKind::Exact,
            provenance
        ));
    }
    out
}
