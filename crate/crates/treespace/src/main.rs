//! Command-line access to the library: indices, fragmentation sequences,
//! clopen constructions, truncated product trees, oracle batteries, and
//! deterministic corpus generation. Exit codes: 0 on success, 1 when a named
//! check fails, 2 on parse or validation errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde_json::json;

use treespace::approx::{approximate, construction_report};
use treespace::check::run_checks;
use treespace::dot::construction_dot;
use treespace::error::Error;
use treespace::fragmentation::{derivation_sequence, TemplateMarking};
use treespace::gen::{gen_presentation, gen_weights, GenConfig};
use treespace::indices::{cb_rank, interval_type, ordinal_index};
use treespace::io::{
    function_from_json, ordinal_json, rational_json, tree_from_json, tree_to_json, Report,
};
use treespace::metric::WeightAssignment;
use treespace::presentation::{cantor_tree, TreePresentation};
use treespace::rat::parse_rat;
use treespace::zippin::Check;

#[derive(Parser)]
#[command(name = "treespace", version, about = "Exact indices and clopen constructions for presented tree spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Ordinal index, interval type, and rank of a tree file.
    Indices { file: PathBuf },
    /// Derivation sequence and fragmentation index at a scale.
    Fragment {
        file: PathBuf,
        #[arg(long)]
        epsilon: String,
        /// Include every marking of the derivation sequence.
        #[arg(long)]
        full_sequence: bool,
    },
    /// Build and verify the tree of basic clopen sets; optionally run the
    /// approximation pipeline on a function file.
    Zippin {
        file: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        function: Option<PathBuf>,
        /// Write the constructed tree as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Emit the depth-D truncated product tree with unit weights.
    Cantor {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every oracle comparison against a tree file.
    Check {
        file: PathBuf,
        #[arg(long)]
        epsilon: String,
        /// Enumeration bound for the brute-force side.
        #[arg(long)]
        copy_bound: Option<usize>,
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// Generate a deterministic random weighted presentation.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[arg(long, default_value_t = 3)]
        max_groups: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_tree(path: &PathBuf) -> Result<(TreePresentation, WeightAssignment), Error> {
    let text = std::fs::read_to_string(path)?;
    tree_from_json(&text)
}

fn marking_paths(p: &TreePresentation, m: &TemplateMarking) -> serde_json::Value {
    json!(m
        .marked_paths(p)
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>())
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            println!("command: {}", report.command);
            println!("results: {}", report.results);
            for c in &report.checks {
                println!("[{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    // returns whether some check failed
    match cli.command {
        Command::Indices { file } => {
            let (p, _w) = load_tree(&file)?;
            let (rank, count) = cb_rank(&p);
            let report = Report {
                command: "indices".into(),
                inputs: json!({"file": file.display().to_string()}),
                results: json!({
                    "o": ordinal_json(&ordinal_index(&p)),
                    "beta": ordinal_json(&interval_type(&p)),
                    "cb_rank": ordinal_json(&rank),
                    "cb_count": serde_json::Value::String(count.to_string()),
                }),
                checks: vec![],
            };
            emit(&report, cli.format);
            Ok(false)
        }
        Command::Fragment {
            file,
            epsilon,
            full_sequence,
        } => {
            let (p, w) = load_tree(&file)?;
            let eps = parse_rat(&epsilon)?;
            if eps <= num_rational::BigRational::from_integer(0.into()) {
                return Err(Error::Validation {
                    what: "epsilon must be strictly positive".into(),
                });
            }
            let full = TemplateMarking::full(&p);
            let seq = derivation_sequence(&p, &w, &eps, &full);
            let emptied = seq.last().unwrap().is_empty();
            let mut results = json!({
                "epsilon": rational_json(&eps),
                "index": if emptied {
                    serde_json::Value::String((seq.len() - 1).to_string())
                } else {
                    serde_json::Value::String("infinite".into())
                },
                "steps": seq.len() - 1,
            });
            if full_sequence {
                results["sequence"] = json!(seq
                    .iter()
                    .enumerate()
                    .map(|(i, m)| json!({"step": i, "marked": marking_paths(&p, m)}))
                    .collect::<Vec<_>>());
            }
            let report = Report {
                command: "fragment".into(),
                inputs: json!({
                    "file": file.display().to_string(),
                    "epsilon": rational_json(&eps),
                }),
                results,
                checks: vec![],
            };
            emit(&report, cli.format);
            Ok(false)
        }
        Command::Zippin {
            file,
            epsilon,
            function,
            dot,
        } => {
            let (p, w) = load_tree(&file)?;
            let eps = parse_rat(&epsilon)?;
            let (ct, pipeline) = match function {
                Some(fpath) => {
                    let text = std::fs::read_to_string(&fpath)?;
                    let g = function_from_json(&text, &p)?;
                    let a = approximate(&p, &w, &g, &eps)?;
                    (a.construction, a.report)
                }
                None => construction_report(&p, &w, &eps)?,
            };
            if let Some(path) = dot {
                std::fs::write(&path, construction_dot(&ct))?;
            }
            let mut results = json!({
                "epsilon": rational_json(&pipeline.epsilon),
                "eta": ordinal_json(&pipeline.eta),
                "lambda": ordinal_json(&pipeline.lambda),
                "n": ordinal_json(&pipeline.n),
                "bound": ordinal_json(&pipeline.bound),
                "o_construction": ordinal_json(&pipeline.o_n),
                "members": ct.node_count,
            });
            if let Some(err) = &pipeline.error {
                results["error"] = rational_json(err);
            }
            if let Some(l) = &pipeline.lipschitz {
                results["lipschitz"] = rational_json(l);
            }
            let report = Report {
                command: "zippin".into(),
                inputs: json!({
                    "file": file.display().to_string(),
                    "epsilon": rational_json(&eps),
                }),
                results,
                checks: pipeline.checks,
            };
            emit(&report, cli.format);
            Ok(report.any_check_failed())
        }
        Command::Cantor { depth, out } => {
            let p = cantor_tree(depth);
            let w = WeightAssignment::weight_one(&p);
            let text = tree_to_json(&p, &w);
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)?;
                    let report = Report {
                        command: "cantor".into(),
                        inputs: json!({"depth": depth}),
                        results: json!({
                            "written": path.display().to_string(),
                            "beta": ordinal_json(&interval_type(&p)),
                        }),
                        checks: vec![],
                    };
                    emit(&report, cli.format);
                }
                None => println!("{text}"),
            }
            Ok(false)
        }
        Command::Check {
            file,
            epsilon,
            copy_bound,
            function,
        } => {
            let (p, w) = load_tree(&file)?;
            let eps = parse_rat(&epsilon)?;
            if eps <= num_rational::BigRational::from_integer(0.into()) {
                return Err(Error::Validation {
                    what: "epsilon must be strictly positive".into(),
                });
            }
            let g = match function {
                Some(fpath) => {
                    let text = std::fs::read_to_string(&fpath)?;
                    Some(function_from_json(&text, &p)?)
                }
                None => None,
            };
            let checks: Vec<Check> = run_checks(&p, &w, &eps, copy_bound, g.as_ref());
            let passed = checks.iter().filter(|c| c.pass).count();
            let report = Report {
                command: "check".into(),
                inputs: json!({
                    "file": file.display().to_string(),
                    "epsilon": rational_json(&eps),
                    "copy_bound": copy_bound,
                }),
                results: json!({"passed": passed, "total": checks.len()}),
                checks,
            };
            emit(&report, cli.format);
            Ok(report.any_check_failed())
        }
        Command::Gen {
            seed,
            max_depth,
            max_groups,
            out,
        } => {
            let cfg = GenConfig {
                max_depth,
                max_groups,
                ..GenConfig::default()
            };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = gen_presentation(&mut rng, &cfg);
            let w = gen_weights(&mut rng, &p, &cfg);
            std::fs::write(&out, tree_to_json(&p, &w))?;
            let report = Report {
                command: "gen".into(),
                inputs: json!({"seed": seed, "max_depth": max_depth, "max_groups": max_groups}),
                results: json!({
                    "written": out.display().to_string(),
                    "nodes": p.template_node_count(),
                    "depth": p.depth(),
                }),
                checks: vec![],
            };
            emit(&report, cli.format);
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::from(0),
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
