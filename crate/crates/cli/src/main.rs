//! Command line front end for the subgroup calculus.
//!
//! Every subcommand takes the ambient rank through `-r` (words alone do
//! not determine the alphabet when letters are missing), parses words in
//! the `a..z` / `A..Z` syntax, and emits a table, JSON, or DOT rendering.
//! Exit codes: 0 for any computed result including `unknown` verdicts,
//! 2 for user errors, 3 when a partition budget is exceeded.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stallings::automata::{Automaton, Morphism};
use stallings::words::{Endomorphism, Word};
use stallings::{
    algebraic_closure, algebraic_extensions, check_fully_onto, check_into, check_onto,
    expanded_pair, fully_onto_closure, injective_in_basis, is_algebraic, is_free_factor,
    onto_closure, onto_in_basis, random_subgroup, synchronized_fold, Budgets, Error,
    ExtensionLattice, Outcome, Subgroup, Verdict,
};
use std::io::{self, Write};
use std::process::{self, ExitCode};

#[derive(Parser)]
#[command(name = "stallings", version, about = "Subgroup calculus of free groups via Stallings automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Table,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Ff,
    Alg,
    Onto,
    Fonto,
    Into,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosureKind {
    Alg,
    Onto,
    Fonto,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeCheck {
    Semimodular,
    Distributive,
}

#[derive(Args)]
struct Common {
    /// Ambient free group rank (alphabet size)
    #[arg(short, long)]
    rank: usize,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputKind::Table)]
    output: OutputKind,
    /// Cap on worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Composition depth of the basis search
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Ambient letters added when searching fully-onto refutations
    #[arg(long, default_value_t = 1)]
    extra_letters: usize,
    /// Largest admissible Bell number for vertex partition enumeration
    #[arg(long, default_value_t = 1_000_000)]
    bell_cap: u64,
    /// Cap on enumerated bases per alphabet size
    #[arg(long, default_value_t = 600_000)]
    max_bases: u64,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        Budgets {
            depth: self.depth,
            extra_letters: self.extra_letters,
            bell_cap: self.bell_cap,
            max_bases: self.max_bases,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Stallings automaton, canonical basis, and rank of a subgroup
    Stallings {
        #[command(flatten)]
        common: Common,
        /// Generator words
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Decide membership of a word in a subgroup
    Member {
        #[command(flatten)]
        common: Common,
        /// Generators of the subgroup
        #[arg(long, required = true, num_args = 1..)]
        sub: Vec<String>,
        /// Word to test
        #[arg(long)]
        word: String,
    },
    /// All quotients of the subgroup automaton (the fringe)
    Fringe {
        #[command(flatten)]
        common: Common,
        /// Largest admissible Bell number for vertex partition enumeration
        #[arg(long, default_value_t = 1_000_000)]
        bell_cap: u64,
        /// Generator words
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Algebraic extensions of a subgroup
    Ae {
        #[command(flatten)]
        common: Common,
        /// Largest admissible Bell number for vertex partition enumeration
        #[arg(long, default_value_t = 1_000_000)]
        bell_cap: u64,
        /// Generator words
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Closure of an extension pair inside the overgroup
    Closure {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budgets: BudgetArgs,
        /// Which closure to compute
        #[arg(long, value_enum)]
        kind: ClosureKind,
        /// Generators of the subgroup
        #[arg(long, required = true, num_args = 1..)]
        sub: Vec<String>,
        /// Generators of the overgroup
        #[arg(long, required = true, num_args = 1..)]
        over: Vec<String>,
    },
    /// Decide or search an extension property
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budgets: BudgetArgs,
        /// Which property to check
        #[arg(long, value_enum)]
        kind: CheckKind,
        /// Generators of the subgroup
        #[arg(long, required = true, num_args = 1..)]
        sub: Vec<String>,
        /// Generators of the overgroup
        #[arg(long, required = true, num_args = 1..)]
        over: Vec<String>,
        /// Probe a single ambient basis instead of searching
        #[arg(long, num_args = 1..)]
        basis: Option<Vec<String>>,
    },
    /// Fringe lattice of a subgroup with optional structure checks
    Lattice {
        #[command(flatten)]
        common: Common,
        /// Largest admissible Bell number for vertex partition enumeration
        #[arg(long, default_value_t = 1_000_000)]
        bell_cap: u64,
        /// Structural property to report
        #[arg(long, value_enum)]
        check: Option<LatticeCheck>,
        /// Generator words
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Intersection of two subgroups
    Intersect {
        #[command(flatten)]
        common: Common,
        /// Generators of the first subgroup
        #[arg(long, required = true, num_args = 1..)]
        sub: Vec<String>,
        /// Generators of the second subgroup
        #[arg(long, required = true, num_args = 1..)]
        over: Vec<String>,
    },
    /// Subgroup automaton rewritten in another ambient basis
    InBasis {
        #[command(flatten)]
        common: Common,
        /// Generators of the subgroup
        #[arg(long, required = true, num_args = 1..)]
        sub: Vec<String>,
        /// Images of the new basis, one word per letter
        #[arg(long, required = true, num_args = 1..)]
        basis: Vec<String>,
    },
    /// Synchronized folding trace of an extension pair
    Syncfold {
        #[command(flatten)]
        common: Common,
        /// Generators of the subgroup
        #[arg(long, required = true, num_args = 1..)]
        sub: Vec<String>,
        /// Generators of the overgroup
        #[arg(long, required = true, num_args = 1..)]
        over: Vec<String>,
        /// Expand the pair through this basis before folding
        #[arg(long, num_args = 1..)]
        basis: Option<Vec<String>>,
    },
    /// Seeded random subgroup for corpus generation
    RandomSubgroup {
        #[command(flatten)]
        common: Common,
        /// RNG seed; equal seeds give equal subgroups
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_generators: usize,
        #[arg(long, default_value_t = 8)]
        max_length: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(error: Error) -> Failure {
    let code = match error {
        Error::PartitionBudgetExceeded { .. } => 3,
        _ => 2,
    };
    Failure { code, message: error.to_string() }
}

fn user(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn parse_words(texts: &[String]) -> Result<Vec<Word>, Failure> {
    texts.iter().map(|t| t.parse().map_err(fail)).collect()
}

fn subgroup(texts: &[String], rank: usize) -> Result<Subgroup, Failure> {
    Subgroup::new(parse_words(texts)?, rank).map_err(fail)
}

fn basis_endomorphism(texts: &[String]) -> Result<Endomorphism, Failure> {
    let images = parse_words(texts)?;
    Endomorphism::new(images, texts.len()).map_err(fail)
}

fn configure(common: &Common) -> Result<(), Failure> {
    if common.rank == 0 {
        return Err(user("the ambient rank must be positive"));
    }
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(user("the thread cap must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    Ok(())
}

fn words_csv(words: &[Word]) -> String {
    if words.is_empty() {
        return "1".to_string();
    }
    words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
}

fn outcome_name(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::No => "no",
        Outcome::YesCertified => "yes_certified",
        Outcome::Unknown => "unknown",
    }
}

/// One assembled result, rendered on demand. `dot` stays `None` for
/// outputs with no graph to draw.
struct Rendering {
    table: Vec<String>,
    json: Value,
    dot: Option<String>,
}

fn emit(kind: OutputKind, rendering: Rendering) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let written = match kind {
        OutputKind::Table => rendering.table.iter().try_for_each(|line| writeln!(out, "{line}")),
        OutputKind::Json => {
            let pretty = serde_json::to_string_pretty(&rendering.json).expect("serializable");
            writeln!(out, "{pretty}")
        }
        OutputKind::Dot => match rendering.dot {
            Some(dot) => write!(out, "{dot}"),
            None => return Err(user("dot output is not defined for this command")),
        },
    };
    if let Err(error) = written.and_then(|()| out.flush()) {
        // a closed pipe (e.g. piping into `head`) is not a failure
        if error.kind() == io::ErrorKind::BrokenPipe {
            process::exit(0);
        }
        return Err(user(format!("cannot write output: {error}")));
    }
    Ok(())
}

fn automaton_json(graph: &Automaton) -> Value {
    json!({
        "automaton": serde_json::to_value(graph).expect("serializable"),
        "basis": graph.basis().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "rank": graph.rank(),
    })
}

fn automaton_rendering(graph: &Automaton) -> Rendering {
    Rendering {
        table: vec![
            graph.to_string(),
            format!("basis: {}", words_csv(&graph.basis())),
            format!("rank: {}", graph.rank()),
        ],
        json: automaton_json(graph),
        dot: Some(graph.to_dot()),
    }
}

fn member_rendering(members: &[Subgroup]) -> Rendering {
    let table = members
        .iter()
        .map(|m| format!("rank {}: <{}>", m.rank(), words_csv(&m.basis())))
        .collect();
    let json = json!({
        "count": members.len(),
        "members": members.iter().map(|m| serde_json::to_value(m).expect("serializable")).collect::<Vec<_>>(),
    });
    let dot = members.iter().map(|m| m.graph().to_dot()).collect::<Vec<_>>().join("\n");
    Rendering { table, json, dot: Some(dot) }
}

fn verdict_rendering(verdict: &Verdict) -> Rendering {
    let mut table = vec![format!("outcome: {}", outcome_name(verdict.outcome))];
    if let Some(witness) = &verdict.witness_images {
        table.push(format!("witness: {}", words_csv(witness)));
    }
    table.push(format!("depth: {}", verdict.depth));
    if let Some(extra) = verdict.extra_letters {
        table.push(format!("extra letters: {extra}"));
    }
    Rendering {
        table,
        json: serde_json::to_value(verdict).expect("serializable"),
        dot: None,
    }
}

fn bool_rendering(label: &str, value: bool) -> Rendering {
    Rendering {
        table: vec![format!("{label}: {value}")],
        json: json!({ label: value }),
        dot: None,
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Stallings { common, words } => {
            configure(&common)?;
            let sub = subgroup(&words, common.rank)?;
            emit(common.output, automaton_rendering(sub.graph()))
        }
        Command::Member { common, sub, word } => {
            configure(&common)?;
            let h = subgroup(&sub, common.rank)?;
            let w: Word = word.parse().map_err(fail)?;
            emit(common.output, bool_rendering("member", h.contains(&w)))
        }
        Command::Fringe { common, bell_cap, words } => {
            configure(&common)?;
            let h = subgroup(&words, common.rank)?;
            let fringe = h.fringe(bell_cap).map_err(fail)?;
            emit(common.output, member_rendering(&fringe))
        }
        Command::Ae { common, bell_cap, words } => {
            configure(&common)?;
            let h = subgroup(&words, common.rank)?;
            let extensions = algebraic_extensions(&h, bell_cap).map_err(fail)?;
            emit(common.output, member_rendering(&extensions))
        }
        Command::Closure { common, budgets, kind, sub, over } => {
            configure(&common)?;
            let h = subgroup(&sub, common.rank)?;
            let k = subgroup(&over, common.rank)?;
            let budgets = budgets.budgets();
            let (closure, outcome) = match kind {
                ClosureKind::Alg => (algebraic_closure(&h, &k, budgets.bell_cap).map_err(fail)?, None),
                ClosureKind::Onto => {
                    let (c, o) = onto_closure(&h, &k, budgets).map_err(fail)?;
                    (c, Some(o))
                }
                ClosureKind::Fonto => {
                    let (c, o) = fully_onto_closure(&h, &k, budgets).map_err(fail)?;
                    (c, Some(o))
                }
            };
            let mut table = vec![format!("closure: <{}>", words_csv(&closure.basis()))];
            if let Some(outcome) = outcome {
                table.push(format!("outcome: {}", outcome_name(outcome)));
            }
            let json = json!({
                "closure": serde_json::to_value(&closure).expect("serializable"),
                "outcome": outcome.map(outcome_name),
            });
            emit(common.output, Rendering { table, json, dot: None })
        }
        Command::Check { common, budgets, kind, sub, over, basis } => {
            configure(&common)?;
            let h = subgroup(&sub, common.rank)?;
            let k = subgroup(&over, common.rank)?;
            let budgets = budgets.budgets();
            let rendering = match (kind, basis) {
                (CheckKind::Ff, None) => bool_rendering("free_factor", is_free_factor(&h, &k).map_err(fail)?),
                (CheckKind::Alg, None) => {
                    bool_rendering("algebraic", is_algebraic(&h, &k, budgets.bell_cap).map_err(fail)?)
                }
                (CheckKind::Onto | CheckKind::Fonto, Some(texts)) => {
                    let endo = basis_endomorphism(&texts)?;
                    bool_rendering("onto_in_basis", onto_in_basis(&h, &k, &endo).map_err(fail)?)
                }
                (CheckKind::Into, Some(texts)) => {
                    let endo = basis_endomorphism(&texts)?;
                    bool_rendering("injective_in_basis", injective_in_basis(&h, &k, &endo).map_err(fail)?)
                }
                (CheckKind::Onto, None) => verdict_rendering(&check_onto(&h, &k, budgets).map_err(fail)?),
                (CheckKind::Fonto, None) => {
                    verdict_rendering(&check_fully_onto(&h, &k, budgets).map_err(fail)?)
                }
                (CheckKind::Into, None) => verdict_rendering(&check_into(&h, &k, budgets).map_err(fail)?),
                (CheckKind::Ff | CheckKind::Alg, Some(_)) => {
                    return Err(user("--basis applies to the onto, fonto, and into checks only"))
                }
            };
            emit(common.output, rendering)
        }
        Command::Lattice { common, bell_cap, check, words } => {
            configure(&common)?;
            let h = subgroup(&words, common.rank)?;
            let fringe = h.fringe(bell_cap).map_err(fail)?;
            let lattice = ExtensionLattice::new(h, fringe.to_vec()).map_err(fail)?;
            let mut table: Vec<String> = lattice
                .elements()
                .iter()
                .enumerate()
                .map(|(i, m)| format!("element {i}: <{}>", words_csv(&m.basis())))
                .collect();
            let covers = lattice.cover_relations();
            for (lower, upper) in &covers {
                table.push(format!("cover: {lower} < {upper}"));
            }
            let mut json = json!({
                "elements": lattice
                    .elements()
                    .iter()
                    .map(|m| serde_json::to_value(m).expect("serializable"))
                    .collect::<Vec<_>>(),
                "cover_relations": covers,
            });
            match check {
                Some(LatticeCheck::Semimodular) => {
                    let violations = lattice.violations().map_err(fail)?;
                    table.push(format!("semimodular: {}", violations.is_empty()));
                    for (x, y) in &violations {
                        table.push(format!("violation: meet({x}, {y}) covered by {x}, join does not cover {y}"));
                    }
                    json["semimodular"] = json!(violations.is_empty());
                    json["violations"] = json!(violations);
                }
                Some(LatticeCheck::Distributive) => {
                    let distributive = lattice.is_distributive().map_err(fail)?;
                    table.push(format!("distributive: {distributive}"));
                    json["distributive"] = json!(distributive);
                }
                None => {}
            }
            emit(common.output, Rendering { table, json, dot: Some(lattice.hasse_dot()) })
        }
        Command::Intersect { common, sub, over } => {
            configure(&common)?;
            let h = subgroup(&sub, common.rank)?;
            let k = subgroup(&over, common.rank)?;
            emit(common.output, automaton_rendering(h.intersect(&k).graph()))
        }
        Command::InBasis { common, sub, basis } => {
            configure(&common)?;
            let h = subgroup(&sub, common.rank)?;
            let endo = basis_endomorphism(&basis)?;
            let graph = h.in_basis(&endo).map_err(fail)?;
            emit(common.output, automaton_rendering(&graph))
        }
        Command::Syncfold { common, sub, over, basis } => {
            configure(&common)?;
            let h = subgroup(&sub, common.rank)?;
            let k = subgroup(&over, common.rank)?;
            let theta = match basis {
                Some(texts) => expanded_pair(&h, &k, &basis_endomorphism(&texts)?).map_err(fail)?,
                None => Morphism::find(h.graph(), k.graph())
                    .ok_or_else(|| user("the first subgroup is not contained in the second"))?,
            };
            let (folded, trace) = synchronized_fold(&theta);
            let table = vec![
                format!(
                    "onto after steps 0-4: {}",
                    trace.onto_after.map(|b| b.to_string()).join(", ")
                ),
                format!("step 3 removed: {} target, {} source", trace.step3_target_removed, trace.step3_source_removed),
                format!("step 4 removed: {}", trace.step4_removed),
                format!("source {}", folded.source()),
                format!("target {}", folded.target()),
            ];
            let json = json!({
                "trace": serde_json::to_value(&trace).expect("serializable"),
                "source": automaton_json(folded.source()),
                "target": automaton_json(folded.target()),
            });
            let dot = format!("{}\n{}", folded.source().to_dot(), folded.target().to_dot());
            emit(common.output, Rendering { table, json, dot: Some(dot) })
        }
        Command::RandomSubgroup { common, seed, max_generators, max_length } => {
            configure(&common)?;
            if max_generators == 0 || max_length == 0 {
                return Err(user("generator and length bounds must be positive"));
            }
            let sub = random_subgroup(common.rank, max_generators, max_length, seed);
            let table = vec![
                format!("generators: {}", words_csv(sub.generators())),
                format!("basis: {}", words_csv(&sub.basis())),
                format!("rank: {}", sub.rank()),
            ];
            let json = json!({
                "generators": sub.generators().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                "subgroup": serde_json::to_value(&sub).expect("serializable"),
            });
            emit(common.output, Rendering { table, json, dot: Some(sub.graph().to_dot()) })
        }
    }
}
