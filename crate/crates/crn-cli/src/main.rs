//! `crn`: decide atomicity classes, answer reachability queries, export
//! configuration graphs, and generate hardness-reduction instances.
//!
//! Exit codes: 0 = yes/success, 1 = no, 2 = error or unknown. stdout
//! carries exactly one JSON verdict object (or DOT/DSL for graph/reduce);
//! diagnostics go to stderr.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigUint;
use serde_json::{json, Value};

use crn_core::composition::{
    explicit_constructibility_report, is_core, is_explicitly_reversibly_constructive,
    is_near_core, associated_composition, elementary_classes_are_singletons, CompositionMap,
};
use crn_core::deciders::{
    decide_primitive_atomic, decide_reachably_atomic, decide_reversibly_reachably_atomic,
    decide_subset_atomic, decide_subset_fixed_atomic, AtomSet, Verdict,
};
use crn_core::reach::{build_config_graph, export_dot, reachable, Reachability, ReachError};
use crn_core::reductions::{bimolecularize, sat_to_crn, tm_to_crn};
use crn_core::textio::{
    format_configuration, graph_json, parse_configuration, parse_network, parse_sat, parse_tm,
    serialize_network, verdict_json,
};
use crn_core::{Answer, Configuration, Network};

const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "crn", version, about = "Chemical reaction network atomicity and reachability tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecideClass {
    Primitive,
    Subset,
    SubsetFixed,
    Reachable,
    RevReachable,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Gate {
    MassConserving,
    ReachableAtomic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComposeCheck {
    NearCore,
    Core,
    Erc,
    Report,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a network; echo its canonical form.
    Parse(InputArg),
    /// Decide an atomicity class.
    Decide {
        #[arg(long, value_enum)]
        class: DecideClass,
        /// Comma-separated atom set (subset-fixed only).
        #[arg(long)]
        atoms: Option<String>,
        /// Per-variable bound for the integer-programming search.
        #[arg(long)]
        ip_bound: Option<u64>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Decide a configuration reachability query.
    Reach {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        max_states: Option<usize>,
        /// Gate required before searching (default: mass-conserving).
        #[arg(long, value_enum, default_value = "mass-conserving")]
        require: Gate,
        #[command(flatten)]
        input: InputArg,
    },
    /// Build a configuration reachability graph (DOT on stdout).
    Graph {
        #[arg(long)]
        from: String,
        #[arg(long)]
        max_states: Option<usize>,
        /// Also write the DOT text to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Emit the JSON graph dump instead of DOT.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        input: InputArg,
    },
    /// Generate hardness-reduction instances (DSL on stdout).
    Reduce {
        #[command(subcommand)]
        kind: ReduceKind,
    },
    /// Composition-map checks.
    Compose {
        #[arg(long, value_enum)]
        check: ComposeCheck,
        /// Composition map JSON file; defaults to the associated
        /// composition of the reachably-atomic witness.
        #[arg(long)]
        map: Option<PathBuf>,
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Subcommand)]
enum ReduceKind {
    /// Monotone 1-in-3 SAT → subset-fixed atomicity instance.
    Sat2crn(InputArg),
    /// Space-bounded TM + input → reachability instance.
    Tm2crn {
        /// Binary input string (may be empty).
        #[arg(long, default_value = "")]
        input_bits: String,
        #[command(flatten)]
        input: InputArg,
    },
    /// Fold reactions into unimolecular/bimolecular form.
    Bimol(InputArg),
}

#[derive(Args)]
struct InputArg {
    /// Input file; `-` or absent reads stdin.
    file: Option<PathBuf>,
}

impl InputArg {
    fn read(&self) -> Result<String, String> {
        match &self.file {
            Some(p) if p.as_os_str() != "-" => {
                fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))
            }
            _ => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| format!("cannot read stdin: {e}"))?;
                Ok(buf)
            }
        }
    }
}

fn max_states_or_env(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("CRN_MAX_STATES")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_MAX_STATES)
}

fn exit_for(answer: Answer) -> u8 {
    match answer {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Unknown => 2,
    }
}

fn load_network(input: &InputArg) -> Result<Network, String> {
    parse_network(&input.read()?).map_err(|e| e.to_string())
}

fn config_arg(text: &str, network: &Network) -> Result<Configuration, String> {
    parse_configuration(text, network).map_err(|e| e.to_string())
}

fn emit_verdict(network: &Network, query: &str, verdict: &Verdict) -> u8 {
    let payload = verdict_json(network, query, verdict);
    println!("{payload}");
    if let Some(case) = verdict.case {
        eprintln!("{query}: {} ({})", verdict.answer.label(), case.label());
    } else {
        eprintln!("{query}: {}", verdict.answer.label());
    }
    exit_for(verdict.answer)
}

fn run_decide(
    class: DecideClass,
    atoms: Option<String>,
    ip_bound: Option<u64>,
    input: InputArg,
) -> Result<u8, String> {
    let network = load_network(&input)?;
    let bound = ip_bound.map(BigUint::from);
    let verdict = match class {
        DecideClass::Primitive => {
            decide_primitive_atomic(&network).map_err(|e| e.to_string())?
        }
        DecideClass::Subset => decide_subset_atomic(&network, bound.as_ref()),
        DecideClass::SubsetFixed => {
            let atoms = atoms.ok_or("--class subset-fixed requires --atoms")?;
            let names: Vec<&str> = atoms.split(',').map(|s| s.trim()).collect();
            let atoms = AtomSet::from_names(&network, &names).map_err(|e| e.to_string())?;
            decide_subset_fixed_atomic(&network, &atoms, bound.as_ref())
                .map_err(|e| e.to_string())?
        }
        DecideClass::Reachable => decide_reachably_atomic(&network),
        DecideClass::RevReachable => decide_reversibly_reachably_atomic(&network),
    };
    let query = match class {
        DecideClass::Primitive => "decide primitive",
        DecideClass::Subset => "decide subset",
        DecideClass::SubsetFixed => "decide subset-fixed",
        DecideClass::Reachable => "decide reachable",
        DecideClass::RevReachable => "decide rev-reachable",
    };
    Ok(emit_verdict(&network, query, &verdict))
}

fn run_reach(
    from: String,
    to: String,
    max_states: Option<usize>,
    require: Gate,
    input: InputArg,
) -> Result<u8, String> {
    let network = load_network(&input)?;
    if require == Gate::ReachableAtomic && !decide_reachably_atomic(&network).is_yes() {
        return Err("network is not reachably atomic (required by --require reachable-atomic)".into());
    }
    let from = config_arg(&from, &network)?;
    let to = config_arg(&to, &network)?;
    let budget = max_states_or_env(max_states);
    let outcome = reachable(&network, &from, &to, budget).map_err(|e| e.to_string())?;
    let (answer, witness, note) = match outcome {
        Reachability::Yes(path) => (Answer::Yes, Some(path), None),
        Reachability::No => (Answer::No, None, None),
        Reachability::Unknown => (
            Answer::Unknown,
            None,
            Some(format!("state budget of {budget} exhausted")),
        ),
    };
    let mut payload = json!({
        "query": "reach",
        "answer": answer.label(),
        "witness": witness.map(|p| json!({ "path": p })).unwrap_or(Value::Null),
        "diagnostics": { "case": Value::Null },
    });
    if let Some(note) = note {
        payload["diagnostics"]["note"] = Value::String(note);
    }
    println!("{payload}");
    eprintln!("reach: {}", answer.label());
    Ok(exit_for(answer))
}

fn run_graph(
    from: String,
    max_states: Option<usize>,
    dot_path: Option<PathBuf>,
    as_json: bool,
    input: InputArg,
) -> Result<u8, String> {
    let network = load_network(&input)?;
    let from = config_arg(&from, &network)?;
    let budget = max_states_or_env(max_states);
    let graph = match build_config_graph(&network, &from, budget) {
        Ok(g) => g,
        Err(ReachError::StateBudgetExceeded { partial, .. }) => {
            eprintln!("graph: state budget of {budget} exceeded; emitting the partial graph");
            *partial
        }
        Err(e) => return Err(e.to_string()),
    };
    let complete = graph.complete;
    let dot = export_dot(&network, &graph);
    if as_json {
        println!("{}", graph_json(&network, &graph));
    } else {
        print!("{dot}");
    }
    if let Some(path) = dot_path {
        fs::write(&path, &dot).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    eprintln!(
        "graph: {} vertices, {} edges{}",
        graph.vertices.len(),
        graph.edges.len(),
        if complete { "" } else { " (incomplete)" }
    );
    Ok(if complete { 0 } else { 2 })
}

fn run_reduce(kind: ReduceKind) -> Result<u8, String> {
    match kind {
        ReduceKind::Sat2crn(input) => {
            let sat = parse_sat(&input.read()?).map_err(|e| e.to_string())?;
            let inst = sat_to_crn(&sat);
            print!("# {}\n", inst.provenance);
            if let Some(atoms) = &inst.atoms {
                let names: Vec<&str> = atoms.species().iter().map(|s| s.name()).collect();
                print!("# atoms: {}\n", names.join(" "));
            }
            print!("{}", serialize_network(&inst.network));
            eprintln!(
                "sat2crn: {} species, {} reactions",
                inst.network.species().len(),
                inst.network.reactions().len()
            );
            Ok(0)
        }
        ReduceKind::Tm2crn { input_bits, input } => {
            let tm = parse_tm(&input.read()?).map_err(|e| e.to_string())?;
            let inst = tm_to_crn(&tm, &input_bits).map_err(|e| e.to_string())?;
            print!("# {}\n", inst.provenance);
            let (c1, c2) = inst.endpoints.as_ref().expect("tm instances carry endpoints");
            print!("# from: {}\n", format_configuration(&inst.network, c1));
            print!("# to: {}\n", format_configuration(&inst.network, c2));
            print!("{}", serialize_network(&inst.network));
            eprintln!(
                "tm2crn: {} species, {} reactions",
                inst.network.species().len(),
                inst.network.reactions().len()
            );
            Ok(0)
        }
        ReduceKind::Bimol(input) => {
            let network = load_network(&input)?;
            let out = bimolecularize(&network);
            print!("{}", serialize_network(&out));
            eprintln!(
                "bimol: {} species, {} reactions",
                out.species().len(),
                out.reactions().len()
            );
            Ok(0)
        }
    }
}

fn run_compose(check: ComposeCheck, map: Option<PathBuf>, input: InputArg) -> Result<u8, String> {
    let network = load_network(&input)?;
    if check == ComposeCheck::Report {
        let report = explicit_constructibility_report(&network);
        println!("{}", report.to_json());
        eprintln!("compose report: {} species", network.species().len());
        return Ok(0);
    }
    let e = match map {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|err| format!("cannot read {}: {err}", path.display()))?;
            let value: Value =
                serde_json::from_str(&text).map_err(|err| format!("bad JSON: {err}"))?;
            CompositionMap::from_json(&value).map_err(|err| err.to_string())?
        }
        None => {
            let v = decide_reachably_atomic(&network);
            match v.witness {
                Some(w) => associated_composition(&network, &w).map_err(|e| e.to_string())?,
                None => {
                    return Err(
                        "network is not reachably atomic; supply a composition with --map".into(),
                    )
                }
            }
        }
    };
    let (query, outcome) = match check {
        ComposeCheck::NearCore => (
            "compose near-core",
            is_near_core(&network, &e).map_err(|err| err.to_string())?,
        ),
        ComposeCheck::Core => (
            "compose core",
            is_core(&network, &e).map_err(|err| err.to_string())?,
        ),
        ComposeCheck::Erc => (
            "compose erc",
            is_explicitly_reversibly_constructive(&network, &e).map_err(|err| err.to_string())?,
        ),
        ComposeCheck::Report => unreachable!(),
    };
    let answer = if outcome.is_yes() { Answer::Yes } else { Answer::No };
    let mut diagnostics = json!({ "case": Value::Null });
    if let Some(reason) = outcome.reason() {
        diagnostics["note"] = Value::String(reason.to_string());
    }
    if check == ComposeCheck::Erc {
        diagnostics["elementary_classes_singleton"] =
            Value::Bool(elementary_classes_are_singletons(&e));
    }
    let payload = json!({
        "query": query,
        "answer": answer.label(),
        "witness": Value::Null,
        "diagnostics": diagnostics,
    });
    println!("{payload}");
    eprintln!("{query}: {}", answer.label());
    Ok(exit_for(answer))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Parse(input) => {
            let network = load_network(&input)?;
            let payload = json!({
                "query": "parse",
                "answer": "yes",
                "witness": {
                    "species": network.species().iter().map(|s| s.name()).collect::<Vec<_>>(),
                    "reactions": network.reactions().len(),
                    "canonical": serialize_network(&network),
                },
                "diagnostics": { "case": Value::Null },
            });
            println!("{payload}");
            eprintln!(
                "parse: {} species, {} reactions",
                network.species().len(),
                network.reactions().len()
            );
            Ok(0)
        }
        Command::Decide {
            class,
            atoms,
            ip_bound,
            input,
        } => run_decide(class, atoms, ip_bound, input),
        Command::Reach {
            from,
            to,
            max_states,
            require,
            input,
        } => run_reach(from, to, max_states, require, input),
        Command::Graph {
            from,
            max_states,
            dot,
            json,
            input,
        } => run_graph(from, max_states, dot, json, input),
        Command::Reduce { kind } => run_reduce(kind),
        Command::Compose { check, map, input } => run_compose(check, map, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
