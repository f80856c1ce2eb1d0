//! `isc`: command-line front end for the impure-simplicial library.
//!
//! Exit codes: 0 success, 1 semantic errors (invalid model files,
//! unresolvable points, AlreadyDefined, bisimilar points passed to
//! distinguish), 2 usage errors.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use impure_simplicial::bisim::{bisimilar, distinguish, max_bisim};
use impure_simplicial::corpus;
use impure_simplicial::dot::{life_tree_to_dot, model_to_dot};
use impure_simplicial::formula::{parse, parse_with_top_agent, Formula, Fragment, Vocabulary};
use impure_simplicial::kripke::{
    eval_kripke, kappa, life_bisimilar, sigma, PartialEpistemicModel, StateId,
};
use impure_simplicial::lifetree::{
    embed, life_tree, transform, EmbedFailure, EmbedOutcome, LifeTree, OrderingPolicy,
};
use impure_simplicial::model::{Facet, SimplicialModel};
use impure_simplicial::semantics::{eval, modal_equiv_bounded, EquivOutcome};
use impure_simplicial::TruthValue;

const SCHEMA: &str = "isc/1";

#[derive(Parser)]
#[command(name = "isc", version, about = "Model checker for impure simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelPoint {
    /// Path to a simplicial model JSON file.
    #[arg(long)]
    model: String,
    /// Point: a facet alias or a comma-separated vertex list.
    #[arg(long)]
    point: String,
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    left: String,
    #[arg(long)]
    left_point: String,
    #[arg(long)]
    right: String,
    #[arg(long)]
    right_point: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a point of a model.
    Check {
        #[command(flatten)]
        at: ModelPoint,
        #[arg(long)]
        formula: String,
        /// Treat the model file as a Kripke model and the point as a state.
        #[arg(long)]
        kripke: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide bisimilarity of two pointed models.
    Bisim {
        #[command(flatten)]
        pair: Pair,
        /// simplicial (default), life, or standard.
        #[arg(long, default_value = "simplicial")]
        kind: String,
        /// Also print the maximal bisimulation.
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize a formula separating two non-bisimilar points.
    Distinguish {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        json: bool,
    },
    /// Print the life tree of a formula.
    Lifetree {
        #[arg(long)]
        formula: String,
        /// Emit Graphviz DOT instead of the text rendering.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Try to embed a formula's life tree at a point.
    Embed {
        #[command(flatten)]
        at: ModelPoint,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Turn a formula undefined at a point into a defined one.
    Transform {
        #[command(flatten)]
        at: ModelPoint,
        #[arg(long)]
        formula: String,
        /// Comma-separated point references fixing the star ordering.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Translate between model presentations.
    Convert {
        /// kripke, simplicial, or dot.
        #[arg(long)]
        to: String,
        #[arg(long = "in")]
        input: String,
        /// Output path, or - for stdout.
        #[arg(long)]
        out: String,
    },
    /// Work with the built-in example corpus.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Bounded modal-equivalence search between two pointed models.
    Equiv {
        #[command(flatten)]
        pair: Pair,
        /// lminus or lplus.
        #[arg(long)]
        fragment: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        size: usize,
        /// Cap on the number of candidate formulas.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// List all fixture ids.
    List,
    /// Print a fixture's JSON to stdout.
    Emit { id: String },
}

enum CliError {
    Usage(String),
    Semantic(String),
}

impl CliError {
    fn semantic(e: impl std::fmt::Display) -> Self {
        CliError::Semantic(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_model(path: &str) -> Result<SimplicialModel, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Semantic(format!("cannot read {path}: {e}")))?;
    SimplicialModel::from_json(&text)
        .map_err(|e| CliError::Semantic(format!("invalid model {path}: {e}")))
}

fn load_kripke(path: &str) -> Result<PartialEpistemicModel, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Semantic(format!("cannot read {path}: {e}")))?;
    PartialEpistemicModel::from_json(&text)
        .map_err(|e| CliError::Semantic(format!("invalid model {path}: {e}")))
}

fn resolve(m: &SimplicialModel, point: &str) -> Result<Facet, CliError> {
    m.resolve_point(point).map_err(CliError::semantic)
}

fn parse_formula(text: &str) -> Result<Formula, CliError> {
    parse(text).map_err(CliError::semantic)
}

/// Parses with the model's least agent in scope, so the constants
/// `true`/`false` are usable whenever a model fixes the vocabulary.
fn parse_formula_for(
    text: &str,
    agents: &std::collections::BTreeSet<impure_simplicial::AgentId>,
) -> Result<Formula, CliError> {
    match agents.iter().next() {
        Some(a) => parse_with_top_agent(text, a).map_err(CliError::semantic),
        None => parse_formula(text),
    }
}

fn truth_name(v: TruthValue) -> &'static str {
    match v {
        TruthValue::True => "True",
        TruthValue::False => "False",
        TruthValue::Undef => "Undef",
    }
}

fn render_tree(t: &LifeTree) -> String {
    fn rec(t: &LifeTree, node: usize, depth: usize, out: &mut String) {
        let label: Vec<&str> = t.label(node).iter().map(|a| a.as_str()).collect();
        let edge = match t.parent(node) {
            Some((_, a)) => format!("--{a}--> "),
            None => String::new(),
        };
        out.push_str(&format!(
            "{}{}{{{}}}\n",
            "  ".repeat(depth),
            edge,
            label.join(",")
        ));
        for &child in t.children(node) {
            rec(t, child, depth + 1, out);
        }
    }
    let mut out = String::new();
    rec(t, LifeTree::ROOT, 0, &mut out);
    out
}

fn tree_json(t: &LifeTree) -> serde_json::Value {
    let nodes: Vec<_> = (0..t.len())
        .map(|n| {
            json!({
                "label": t.label(n).iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "parent": t.parent(n).map(|(p, a)| json!({"node": p, "edge": a.to_string()})),
            })
        })
        .collect();
    json!(nodes)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Check {
            at,
            formula,
            kripke,
            json,
        } => {
            let value = if kripke {
                let m = load_kripke(&at.model)?;
                let phi = parse_formula_for(&formula, m.agents())?;
                eval_kripke(&m, &StateId::new(at.point.clone()), &phi)
                    .map_err(CliError::semantic)?
            } else {
                let m = load_model(&at.model)?;
                let x = resolve(&m, &at.point)?;
                let phi = parse_formula_for(&formula, m.agents())?;
                eval(&m, &x, &phi).map_err(CliError::semantic)?
            };
            if json {
                println!(
                    "{}",
                    json!({"schema": SCHEMA, "result": truth_name(value)})
                );
            } else {
                println!("{}", truth_name(value));
            }
            Ok(())
        }
        Command::Bisim {
            pair,
            kind,
            explain,
            json,
        } => run_bisim(pair, &kind, explain, json),
        Command::Distinguish { pair, json } => {
            let m = load_model(&pair.left)?;
            let m2 = load_model(&pair.right)?;
            let x = resolve(&m, &pair.left_point)?;
            let x2 = resolve(&m2, &pair.right_point)?;
            let theta = distinguish(&m, &x, &m2, &x2).map_err(CliError::semantic)?;
            let at_left = eval(&m, &x, &theta).map_err(CliError::semantic)?;
            let at_right = eval(&m2, &x2, &theta).map_err(CliError::semantic)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "schema": SCHEMA,
                        "formula": theta.to_string(),
                        "left": truth_name(at_left),
                        "right": truth_name(at_right),
                    })
                );
            } else {
                println!("{theta}");
                println!("left: {}", truth_name(at_left));
                println!("right: {}", truth_name(at_right));
            }
            Ok(())
        }
        Command::Lifetree { formula, dot, json } => {
            let phi = parse_formula(&formula)?;
            let t = life_tree(&phi);
            if dot {
                print!("{}", life_tree_to_dot(&t));
            } else if json {
                println!("{}", json!({"schema": SCHEMA, "tree": tree_json(&t)}));
            } else {
                print!("{}", render_tree(&t));
            }
            Ok(())
        }
        Command::Embed { at, formula, json } => {
            let m = load_model(&at.model)?;
            let x = resolve(&m, &at.point)?;
            let phi = parse_formula_for(&formula, m.agents())?;
            let t = life_tree(&phi);
            let outcome = embed(&m, &x, &t).map_err(CliError::semantic)?;
            match outcome {
                EmbedOutcome::Embedded(e) => {
                    if json {
                        let assignment: Vec<String> =
                            (0..t.len()).map(|n| e.facet_of(n).to_string()).collect();
                        println!(
                            "{}",
                            json!({"schema": SCHEMA, "embeddable": true, "assignment": assignment})
                        );
                    } else {
                        println!("embeddable");
                        for n in 0..t.len() {
                            println!("node {n} -> {}", e.facet_of(n));
                        }
                    }
                }
                EmbedOutcome::NotEmbeddable(failure) => {
                    let reason = match failure {
                        EmbedFailure::RootLabel { agent } => {
                            format!("agent {agent} is dead at the point")
                        }
                        EmbedFailure::Child { edge, subformula } => match subformula {
                            Some(psi) => {
                                format!("no {edge}-adjacent facet defines {psi}")
                            }
                            None => format!("an {edge}-child of the root cannot be placed"),
                        },
                    };
                    if json {
                        println!(
                            "{}",
                            json!({"schema": SCHEMA, "embeddable": false, "reason": reason})
                        );
                    } else {
                        println!("not embeddable: {reason}");
                    }
                }
            }
            Ok(())
        }
        Command::Transform {
            at,
            formula,
            order,
            json,
        } => {
            let m = load_model(&at.model)?;
            let x = resolve(&m, &at.point)?;
            let phi = parse_formula_for(&formula, m.agents())?;
            let policy = match order {
                None => OrderingPolicy::Canonical,
                Some(text) => {
                    let facets: Result<Vec<Facet>, CliError> = text
                        .split(';')
                        .flat_map(|chunk| chunk.split(',').map(str::trim))
                        .filter(|s| !s.is_empty())
                        .map(|p| resolve(&m, p))
                        .collect();
                    OrderingPolicy::Explicit(facets?)
                }
            };
            let out = transform(&m, &x, &phi, &policy).map_err(CliError::semantic)?;
            if json {
                println!("{}", json!({"schema": SCHEMA, "formula": out.to_string()}));
            } else {
                println!("{out}");
            }
            Ok(())
        }
        Command::Convert { to, input, out } => {
            let text = match to.as_str() {
                "kripke" => kappa(&load_model(&input)?).to_json(),
                "simplicial" => sigma(&load_kripke(&input)?).0.to_json(),
                "dot" => model_to_dot(&load_model(&input)?),
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown conversion target `{other}` (expected kripke, simplicial, or dot)"
                    )))
                }
            };
            if out == "-" {
                println!("{text}");
            } else {
                fs::write(&out, text)
                    .map_err(|e| CliError::Semantic(format!("cannot write {out}: {e}")))?;
            }
            Ok(())
        }
        Command::Fixtures { action } => {
            match action {
                FixturesAction::List => {
                    for id in corpus::model_fixture_ids() {
                        println!("{id}\tsimplicial");
                    }
                    for id in corpus::kripke_fixture_ids() {
                        println!("{id}\tkripke");
                    }
                }
                FixturesAction::Emit { id } => {
                    let text = corpus::fixture_json(&id).map_err(CliError::semantic)?;
                    println!("{text}");
                }
            }
            Ok(())
        }
        Command::Equiv {
            pair,
            fragment,
            depth,
            size,
            budget,
            json,
        } => {
            let fragment = match fragment.as_str() {
                "lminus" => Fragment::Lminus,
                "lplus" => Fragment::Lplus,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown fragment `{other}` (expected lminus or lplus)"
                    )))
                }
            };
            let m = load_model(&pair.left)?;
            let m2 = load_model(&pair.right)?;
            let x = resolve(&m, &pair.left_point)?;
            let x2 = resolve(&m2, &pair.right_point)?;
            let vocab = joint_vocabulary(&m, &m2);
            let outcome = modal_equiv_bounded(&m, &x, &m2, &x2, &vocab, depth, size, fragment, budget)
                .map_err(CliError::semantic)?;
            match outcome {
                EquivOutcome::Equal => {
                    if json {
                        println!("{}", json!({"schema": SCHEMA, "equal": true}));
                    } else {
                        println!("equal");
                    }
                }
                EquivOutcome::Witness(theta) => {
                    if json {
                        println!(
                            "{}",
                            json!({"schema": SCHEMA, "equal": false, "witness": theta.to_string()})
                        );
                    } else {
                        println!("witness: {theta}");
                    }
                }
            }
            Ok(())
        }
    }
}

fn joint_vocabulary(m: &SimplicialModel, m2: &SimplicialModel) -> Vocabulary {
    let agents = m.agents().iter().chain(m2.agents()).cloned();
    let atoms = m
        .vertices()
        .values()
        .chain(m2.vertices().values())
        .flat_map(|d| {
            d.atoms
                .iter()
                .map(|p| impure_simplicial::LocalAtom::new(p.clone(), d.agent.clone()))
        });
    Vocabulary::new(agents, atoms)
}

fn run_bisim(pair: Pair, kind: &str, explain: bool, json: bool) -> Result<(), CliError> {
    let mut detail: Vec<String> = Vec::new();
    let related = match kind {
        "simplicial" => {
            let m = load_model(&pair.left)?;
            let m2 = load_model(&pair.right)?;
            let x = resolve(&m, &pair.left_point)?;
            let x2 = resolve(&m2, &pair.right_point)?;
            if explain {
                for (l, r) in max_bisim(&m, &m2).pairs() {
                    detail.push(format!("{l} ~ {r}"));
                }
            }
            bisimilar(&m, &x, &m2, &x2).map_err(CliError::semantic)?
        }
        "life" | "standard" => {
            let m = load_kripke(&pair.left)?;
            let m2 = load_kripke(&pair.right)?;
            let s = StateId::new(pair.left_point.clone());
            let s2 = StateId::new(pair.right_point.clone());
            if explain {
                let rel = match kind {
                    "life" => impure_simplicial::kripke::life_bisim(&m, &m2),
                    _ => impure_simplicial::kripke::standard_bisim(&m, &m2),
                };
                for (l, r) in rel.pairs() {
                    detail.push(format!("{l} ~ {r}"));
                }
            }
            let check = if kind == "life" {
                life_bisimilar(&m, &s, &m2, &s2)
            } else {
                impure_simplicial::kripke::standard_bisimilar(&m, &s, &m2, &s2)
            };
            check.map_err(CliError::semantic)?
        }
        "lminus" => {
            return Err(CliError::Usage(
                "no reasonable notion of bisimulation exists for the aliveness-free \
                 fragment; use --kind life or --kind standard"
                    .to_string(),
            ))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown bisimulation kind `{other}` (expected simplicial, life, or standard)"
            )))
        }
    };
    if json {
        println!(
            "{}",
            json!({"schema": SCHEMA, "kind": kind, "bisimilar": related, "relation": detail})
        );
    } else {
        println!("{}", if related { "bisimilar" } else { "not bisimilar" });
        for line in detail {
            println!("{line}");
        }
    }
    Ok(())
}
