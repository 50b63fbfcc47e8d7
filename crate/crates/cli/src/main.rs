use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use selfsim::automaton::{contraction_profile, is_bounded, nucleus, MooreAutomaton, NucleusConfig, NucleusResult};
use selfsim::permgroup::{GroupError, QuotientBuilder, QuotientError, SubgroupSpec, DEFAULT_DEGREE_CAP};
use selfsim::suites::{canonical_suite, run_suite, SuiteConfig, SuiteError};
use selfsim::wordproblem::{OrderResult, Solver, SolverConfig, SolverError, Verdict};
use selfsim::words::Word;
use selfsim::wreath::{lift, RecursionTable, Vertex, WreathError};
use selfsim::Ambient;

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Computations in the self-similar group L = <a, b, c, d, x>")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum GroupArg {
    G,
    L,
}

impl From<GroupArg> for Ambient {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::G => Ambient::G,
            GroupArg::L => Ambient::L,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a word is the identity.
    Wp {
        word: String,
        /// Show the level-by-level parity checks and decompositions.
        #[arg(long)]
        trace: bool,
        /// Exit with status 1 when the word is nontrivial.
        #[arg(long)]
        exit_status: bool,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        json: bool,
        /// Highest level for the transitivity checks.
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// One rewriting step, or a portrait to the given depth.
    Decompose {
        word: String,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Action on a level (image list or cycles) or on a single vertex.
    Act {
        word: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long)]
        cycles: bool,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Order of an element.
    Order {
        word: String,
        #[arg(long, default_value_t = 256)]
        cap: u64,
    },
    /// Exponent sum of x.
    Expx { word: String },
    /// Section at a vertex.
    Section {
        word: String,
        #[arg(long)]
        vertex: String,
    },
    /// An element fixing the vertex with the given section there.
    Lift {
        word: String,
        #[arg(long)]
        vertex: String,
    },
    /// Number of elements of word length at most the radius.
    Ball { radius: u64 },
    /// Boundedness of an automaton file.
    Classify { file: PathBuf },
    /// Nucleus of G, L, or the group of an automaton file.
    Nucleus {
        #[arg(long, value_enum, default_value = "l")]
        group: GroupArg,
        #[arg(long)]
        group_file: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        max_candidates: usize,
    },
    /// Exhaustive contraction check on short words.
    Contraction {
        #[arg(long, value_enum, default_value = "l")]
        group: GroupArg,
        #[arg(long)]
        steps: Option<u32>,
        #[arg(long, default_value_t = 8)]
        max_len: u64,
    },
    /// DOT rendering of an automaton file.
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Image of G, L or a named subgroup on a level of the tree.
    Quotient {
        #[arg(long)]
        level: u32,
        /// K, S, R, P, A, Q, X or G2.
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long, value_enum, default_value = "l")]
        group: GroupArg,
        #[arg(long)]
        order: bool,
        #[arg(long)]
        index: bool,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
    },
    /// JSON schema of `verify --json` reports.
    Schema,
}

const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn cap(message: impl ToString) -> Self {
        Failure { code: EXIT_CAP, message: message.to_string() }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::ClosureCap { .. } | SolverError::Wreath(WreathError::LevelCap { .. }) => Failure::cap(e),
            SolverError::WitnessMismatch { .. } => Failure { code: EXIT_FAIL, message: e.to_string() },
            _ => Failure::usage(e),
        }
    }
}

impl From<WreathError> for Failure {
    fn from(e: WreathError) -> Self {
        SolverError::from(e).into()
    }
}

impl From<QuotientError> for Failure {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::Wreath(w) => w.into(),
            QuotientError::Group(GroupError::DegreeCap { .. }) => Failure::cap(e),
            _ => Failure::usage(e),
        }
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::UnknownSuite(_) => Failure::usage(e),
            SuiteError::Solver(s) => s.into(),
            SuiteError::Quotient(q) => q.into(),
        }
    }
}

fn parse_word(text: &str) -> Result<Word, Failure> {
    text.parse().map_err(|e| Failure::usage(format!("cannot parse word {text:?}: {e}")))
}

fn parse_vertex(text: &str) -> Result<Vertex, Failure> {
    text.parse().map_err(Failure::usage)
}

fn read_automaton(path: &PathBuf) -> Result<MooreAutomaton, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    MooreAutomaton::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let table = RecursionTable::l_group();
    match cli.command {
        Command::Wp { word, trace, exit_status } => {
            let w = parse_word(&word)?;
            let mut solver = Solver::new(table, SolverConfig::default());
            let verdict = if trace {
                let t = solver.trace(&w)?;
                for line in &t.lines {
                    println!("{line}");
                }
                t.verdict
            } else {
                solver.decide(&w)?
            };
            match verdict {
                Verdict::Identity => println!("identity"),
                Verdict::Nontrivial { witness } => {
                    println!(
                        "nontrivial\nwitness vertex {}",
                        if witness.is_empty() { "root".to_string() } else { witness.to_string() }
                    )
                }
            }
            let nontrivial = !solver.is_identity(&w)?;
            Ok(if exit_status && nontrivial { EXIT_FAIL } else { 0 })
        }
        Command::Verify { suite, json, levels, seed } => {
            if canonical_suite(&suite).is_none() {
                return Err(Failure::usage(format!("unknown suite {suite}")));
            }
            let mut cfg = SuiteConfig::default();
            if let Some(l) = levels {
                cfg.levels = l;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = run_suite(&suite, &cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
        Command::Decompose { word, depth } => {
            let w = parse_word(&word)?;
            match depth {
                None => println!("{}", table.decompose(&w)?),
                Some(d) => println!("{}", table.portrait(&w, d)?),
            }
            Ok(0)
        }
        Command::Act { word, level, cycles, vertex } => {
            let w = parse_word(&word)?;
            if let Some(v) = vertex {
                println!("{}", table.act_vertex(&w, &parse_vertex(&v)?)?);
                return Ok(0);
            }
            let p = table.act_level(&w, level)?;
            if cycles {
                println!("{p}");
            } else {
                let images: Vec<String> = p.images().iter().map(|i| i.to_string()).collect();
                println!("{}", images.join(" "));
            }
            Ok(0)
        }
        Command::Order { word, cap } => {
            let w = parse_word(&word)?;
            let cfg = SolverConfig { order_cap: cap, ..SolverConfig::default() };
            let result = Solver::new(table, cfg).element_order(&w)?;
            println!("{result}");
            Ok(if matches!(result, OrderResult::Unknown(_)) { EXIT_CAP } else { 0 })
        }
        Command::Expx { word } => {
            println!("{}", parse_word(&word)?.exp_x());
            Ok(0)
        }
        Command::Section { word, vertex } => {
            println!("{}", table.section(&parse_word(&word)?, &parse_vertex(&vertex)?)?);
            Ok(0)
        }
        Command::Lift { word, vertex } => {
            let v = parse_vertex(&vertex)?;
            if v.is_empty() {
                return Err(Failure::usage("lift needs a nonempty vertex"));
            }
            println!("{}", lift(&parse_word(&word)?, &v));
            Ok(0)
        }
        Command::Ball { radius } => {
            println!("{}", Solver::new(table, SolverConfig::default()).ball_size(radius)?);
            Ok(0)
        }
        Command::Classify { file } => {
            print!("{}", is_bounded(&read_automaton(&file)?));
            Ok(0)
        }
        Command::Nucleus { group, group_file, max_candidates } => {
            let t = match group_file {
                Some(path) => read_automaton(&path)?.to_recursion().map_err(Failure::usage)?,
                None => Ambient::from(group).table(),
            };
            let cfg = NucleusConfig { max_candidates, ..NucleusConfig::default() };
            match nucleus(&t, &cfg)? {
                NucleusResult::Nucleus(words) => {
                    println!("{} elements", words.len());
                    for w in words {
                        println!("{w}");
                    }
                    Ok(0)
                }
                NucleusResult::Diverged { candidates } => {
                    Err(Failure::cap(format!("diverged: more than {candidates} candidate elements")))
                }
            }
        }
        Command::Contraction { group, steps, max_len } => {
            let ambient = Ambient::from(group);
            let steps = steps.unwrap_or(match ambient {
                Ambient::L => 3,
                Ambient::G => 1,
            });
            let report = contraction_profile(ambient, steps, max_len);
            print!("{report}");
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
        Command::Dot { file, output } => {
            let dot = read_automaton(&file)?.to_dot();
            match output {
                Some(path) => fs::write(&path, dot).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
        Command::Quotient { level, subgroup, group, order, index, degree_cap } => {
            let ambient = Ambient::from(group);
            let tbl = ambient.table();
            let mut q = QuotientBuilder::with_degree_cap(tbl, degree_cap);
            let spec = match &subgroup {
                Some(name) => {
                    Some(SubgroupSpec::named(name).ok_or_else(|| Failure::usage(format!("unknown subgroup {name}")))?)
                }
                None => None,
            };
            let handle = match &spec {
                Some(s) => q.subgroup(s, level)?,
                None => q.ambient(ambient, level)?,
            };
            if index {
                let Some(s) = &spec else {
                    return Err(Failure::usage("--index needs --subgroup"));
                };
                println!("{}", q.index_in_ambient(s, level)?);
            }
            if order || !index {
                println!("{}", handle.order());
            }
            Ok(0)
        }
        Command::Schema => {
            print!("{REPORT_SCHEMA}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
