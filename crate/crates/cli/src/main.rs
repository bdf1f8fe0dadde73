//! `zforge`: compile formulas into zero-forcing circuits and analyze them.
//!
//! Exit codes: 0 success, 1 oracle mismatch, 2 parse error, 3 mode
//! violation, 4 arity or input shape error, 5 limit exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zforge_core::analysis::{
    back_forcing_report_with_limit, evaluate_bits, leakage_analysis_with_limit, oracle_mismatches,
    truth_table_with_limit, Partition, DEFAULT_SWEEP_LIMIT,
};
use zforge_core::boolfn::{parse_bits, BooleanFunction};
use zforge_core::circuit::{compile_formula, compile_monotone, CompileOptions, CompiledCircuit};
use zforge_core::dot::{circuit_to_dot, gadget_to_dot};
use zforge_core::engine::{run_sequential, run_to_fixpoint};
use zforge_core::formula::Mode;
use zforge_core::gadget::{self, search_minimal_gadget, verify_gadget};
use zforge_core::graph::to_canonical_json;
use zforge_core::netlist::{lower_dual_rail, lower_to_netlist, Netlist};
use zforge_core::zfs::{minimum_zero_forcing_set_with_limit, DEFAULT_EXHAUSTIVE_LIMIT};
use zforge_core::{ColoredGraph, Error};

#[derive(Parser)]
#[command(name = "zforge", version, about = "Zero-forcing logic circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Monotone,
    DualRail,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Monotone => Mode::Monotone,
            ModeArg::DualRail => Mode::DualRail,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Dot,
    Netlist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Export {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a formula file (or a netlist JSON file) into a circuit.
    Compile {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "monotone")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
        /// Also write the DOT rendering to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Skip delay balancing.
        #[arg(long)]
        no_balance: bool,
        /// Splice a filter into every gate-to-gate net.
        #[arg(long, conflicts_with = "no_fanout_guard")]
        filters: bool,
        /// Leave COPY outputs unguarded.
        #[arg(long)]
        no_fanout_guard: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply an input to a compiled circuit and print the forcing trace.
    Simulate {
        circuit: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the color-change rule on a graph JSON file.
    Run {
        graph: PathBuf,
        /// Cross-check the fixpoint against a sequential schedule with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the truth table of a compiled circuit.
    Table {
        circuit: PathBuf,
        /// Compare every row with direct evaluation of the source formula.
        #[arg(long)]
        check_oracle: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
        #[arg(long, default_value_t = DEFAULT_SWEEP_LIMIT)]
        limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Per-assignment back-forcing summary.
    Backforce {
        circuit: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SWEEP_LIMIT)]
        limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// What each party can infer from the colors it sees.
    Leakage {
        circuit: PathBuf,
        /// Parties as NAME=var,var (one argument per party).
        #[arg(long, num_args = 1.., required = true)]
        parties: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SWEEP_LIMIT)]
        limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimum zero forcing set of a graph (or gadget) JSON file.
    Minzfs {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export a built-in gadget: and, or, copy, wire, filter, or3.
    Gadget {
        name: String,
        #[arg(long, value_enum, default_value = "json")]
        export: Export,
        /// Delay of a wire gadget.
        #[arg(long, default_value_t = 1)]
        delay: u32,
        /// Print the harness truth-table report instead.
        #[arg(long, conflicts_with = "export")]
        verify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustively search the smallest gadgets for a function: and, or, identity, true.
    Search {
        function: String,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Io(_) => 4,
            Failure::Core(e) => match e {
                Error::Syntax { .. } | Error::Json(_) => 2,
                Error::MonotoneViolation { .. } | Error::NonMonotoneGate(_) => 3,
                Error::LimitExceeded { .. } => 5,
                _ => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) | Failure::Mismatch(m) => m.clone(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Outcome {
    let text = if text.ends_with('\n') {
        text.to_owned()
    } else {
        format!("{text}\n")
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_circuit(path: &Path) -> Result<CompiledCircuit, Failure> {
    Ok(CompiledCircuit::from_json(&read(path)?)?)
}

fn compile(
    file: &Path,
    mode: Mode,
    emit: Emit,
    dot: Option<&Path>,
    options: CompileOptions,
    output: Option<&Path>,
) -> Outcome {
    let text = read(file)?;
    let netlist_input = text.trim_start().starts_with('{');
    if emit == Emit::Netlist {
        let n = if netlist_input {
            Netlist::from_json(&text)?
        } else {
            let ast = zforge_core::formula::parse_formula(&text, mode)?;
            match mode {
                Mode::Monotone => lower_to_netlist(&ast)?,
                Mode::DualRail => lower_dual_rail(std::slice::from_ref(&ast), &ast.variables())?,
            }
        };
        return write(output, &n.to_json()?);
    }
    let circuit = if netlist_input {
        compile_monotone(&Netlist::from_json(&text)?, options)?
    } else {
        compile_formula(&text, mode, options)?
    };
    if let Some(p) = dot {
        write(Some(p), &circuit_to_dot(&circuit))?;
    }
    match emit {
        Emit::Dot => write(output, &circuit_to_dot(&circuit)),
        _ => write(output, &circuit.to_json()?),
    }
}

fn bit_value(bits: &[bool]) -> Value {
    let v: Vec<u8> = bits.iter().map(|&b| u8::from(b)).collect();
    if v.len() == 1 {
        json!(v[0])
    } else {
        json!(v)
    }
}

fn simulate(circuit: &Path, input: &str, output: Option<&Path>) -> Outcome {
    let c = load_circuit(circuit)?;
    let bits = parse_bits(input).ok_or_else(|| Failure::Io(format!("`{input}` is not a bit string")))?;
    let e = evaluate_bits(&c, &bits)?;
    let mut report = serde_json::to_value(e.trace.to_json_model(&c.graph)).map_err(Error::from)?;
    report["output"] = bit_value(&e.outputs);
    let steps: Vec<Value> = e.output_steps.iter().map(|s| json!(s)).collect();
    report["output_step"] = if steps.len() == 1 {
        steps[0].clone()
    } else {
        json!(steps)
    };
    report["expected_output_step"] = json!(c.expected_output_step);
    write(output, &to_canonical_json(&report)?)
}

fn run(graph: &Path, seed: Option<u64>, output: Option<&Path>) -> Outcome {
    let g = ColoredGraph::from_json(&read(graph)?)?;
    let t = run_to_fixpoint(&g);
    if let Some(seed) = seed {
        if run_sequential(&g, seed) != t.final_coloring {
            return Err(Failure::Mismatch(format!(
                "sequential schedule {seed} reached a different coloring"
            )));
        }
    }
    write(output, &to_canonical_json(&t.to_json_model(&g))?)
}

fn table(circuit: &Path, check: bool, format: TableFormat, limit: usize, output: Option<&Path>) -> Outcome {
    let c = load_circuit(circuit)?;
    let t = truth_table_with_limit(&c, limit)?;
    let text = match format {
        TableFormat::Text => t.to_text(),
        TableFormat::Json => t.to_json()?,
    };
    write(output, &text)?;
    if check {
        let bad = oracle_mismatches(&c, &t)?;
        if !bad.is_empty() {
            return Err(Failure::Mismatch(format!("oracle mismatch on {}", bad.join(", "))));
        }
        eprintln!("oracle: {} rows match", t.rows.len());
    }
    Ok(())
}

fn parse_parties(specs: &[String]) -> Result<Partition, Failure> {
    specs
        .iter()
        .map(|s| {
            let (name, vars) = s
                .split_once('=')
                .ok_or_else(|| Error::InvalidPartition(format!("`{s}` is not NAME=var,var")))?;
            let vars = vars
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(String::from)
                .collect();
            Ok((name.trim().to_owned(), vars))
        })
        .collect()
}

fn boolean_function(name: &str) -> Option<BooleanFunction> {
    match name.to_ascii_lowercase().as_str() {
        "and" => Some(BooleanFunction::and2()),
        "or" => Some(BooleanFunction::or2()),
        "identity" => Some(BooleanFunction::identity()),
        "true" => Some(BooleanFunction::constant(true)),
        _ => None,
    }
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Compile {
            file,
            mode,
            emit,
            dot,
            no_balance,
            filters,
            no_fanout_guard,
            output,
        } => {
            let options = CompileOptions {
                balance_delays: !no_balance,
                insert_filters: filters,
                guard_fanout: !no_fanout_guard,
            };
            compile(&file, mode.into(), emit, dot.as_deref(), options, output.as_deref())
        }
        Command::Simulate { circuit, input, output } => simulate(&circuit, &input, output.as_deref()),
        Command::Run { graph, seed, output } => run(&graph, seed, output.as_deref()),
        Command::Table {
            circuit,
            check_oracle,
            format,
            limit,
            output,
        } => table(&circuit, check_oracle, format, limit, output.as_deref()),
        Command::Backforce { circuit, limit, output } => {
            let c = load_circuit(&circuit)?;
            write(
                output.as_deref(),
                &back_forcing_report_with_limit(&c, limit)?.to_json()?,
            )
        }
        Command::Leakage {
            circuit,
            parties,
            limit,
            output,
        } => {
            let c = load_circuit(&circuit)?;
            let p = parse_parties(&parties)?;
            write(
                output.as_deref(),
                &leakage_analysis_with_limit(&c, &p, limit)?.to_json()?,
            )
        }
        Command::Minzfs { graph, limit, output } => {
            let g = ColoredGraph::from_json(&read(&graph)?)?;
            let z = minimum_zero_forcing_set_with_limit(&g, limit)?;
            let set: Vec<&str> = z.iter().map(|&v| g.name(v)).collect();
            write(
                output.as_deref(),
                &to_canonical_json(&json!({"size": z.len(), "set": set}))?,
            )
        }
        Command::Gadget {
            name,
            export,
            delay,
            verify,
            output,
        } => {
            let g = gadget::by_name(&name, delay)
                .ok_or_else(|| Failure::Io(format!("unknown gadget `{name}` (or wire delay 0)")))?;
            if verify {
                let f = match g.name.as_str() {
                    "AND" => BooleanFunction::and2(),
                    "OR" | "OR3" => BooleanFunction::or2(),
                    "COPY" => BooleanFunction::copy2(),
                    _ => BooleanFunction::identity(),
                };
                return write(output.as_deref(), &to_canonical_json(&verify_gadget(&g, &f)?)?);
            }
            match export {
                Export::Json => write(output.as_deref(), &g.to_json()?),
                Export::Dot => write(output.as_deref(), &gadget_to_dot(&g)),
            }
        }
        Command::Search {
            function,
            max_vertices,
            output,
        } => {
            let f = boolean_function(&function).ok_or_else(|| Failure::Io(format!("unknown function `{function}`")))?;
            let s = search_minimal_gadget(&f, max_vertices)?;
            let summary = |g: &zforge_core::gadget::Gadget| serde_json::to_value(g.to_json_model());
            let report = json!({
                "function": f.name,
                "max_vertices": max_vertices,
                "candidates_examined": s.candidates_examined,
                "min_vertices": s.min_vertices(),
                "minimal": s.minimal().map(summary).transpose().map_err(Error::from)?,
                "gadgets": s.gadgets.len(),
                "non_propagating": s.non_propagating.iter().map(summary).collect::<Result<Vec<_>, _>>().map_err(Error::from)?,
            });
            write(output.as_deref(), &to_canonical_json(&report)?)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
