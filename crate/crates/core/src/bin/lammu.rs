use std::io::{IsTerminal, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lammu::grammar::{looks_like_judgment, parse_judgment, parse_term, parse_type_any, print_judgment, print_term, print_type};
use lammu::iu_types::{check_derivation, derive, from_certificate, to_certificate, Derivation, IuError, Judgment, SearchBudget};
use lammu::metatheory::{
    demo_erasing_failure, suite_struct_subst, suite_subject_expansion, suite_subject_reduction, suite_term_subst,
    GenConfig, SuiteReport,
};
use lammu::reduction::{normalize, ReductionStrategy, RuleId};
use lammu::simple_types::{check_simple, embed_in_iu, infer_simple, SimpleJudgment};
use lammu::syntax::free_names;

const OK: u8 = 0;
const INVALID: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

const PEIRCE: &str = include_str!("../../certificates/peirce.json");
const DNE: &str = include_str!("../../certificates/dne.json");
const NO_CHOICE: &str = include_str!("../../certificates/no-choice.json");

#[derive(Parser)]
#[command(name = "lammu", version, about = "Workbench for the λμ-calculus and its intersection-union types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term, type or judgment and print it in canonical surface syntax.
    Fmt { input: String },
    /// Reduce a term leftmost-outermost.
    Reduce {
        term: String,
        /// Comma-separated rules among beta, mu, renaming, erasing, eta_mu.
        #[arg(long, default_value = "beta,mu", value_delimiter = ',')]
        rules: Vec<String>,
        /// Maximum number of steps.
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        /// Print every step as `<position> <rule> ~> <term>`.
        #[arg(long)]
        trace: bool,
    },
    /// Check a judgment `Γ |- M : A | Δ` with simple types.
    CheckSimple {
        judgment: String,
        /// Print the derivation as a certificate in the intersection-union system.
        #[arg(long)]
        cert: bool,
    },
    /// Infer the principal simple typing of a term.
    InferSimple { term: String },
    /// Search for an intersection-union derivation of a judgment.
    CheckIu {
        judgment: String,
        #[arg(long, default_value_t = SearchBudget::default().max_depth)]
        depth: usize,
        #[arg(long, default_value_t = SearchBudget::default().max_width)]
        width: usize,
        /// Print the derivation as a certificate.
        #[arg(long)]
        cert: bool,
    },
    /// Check a derivation certificate node by node; `-` or no file reads stdin.
    Verify { file: Option<String> },
    /// Run a metatheory suite and print its report.
    Metatheory {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = GenConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// `default`, `doubled`, or `key=value` pairs among depth, width,
        /// size, universe and steps, separated by commas.
        #[arg(long, default_value = "default")]
        budget: String,
    },
    /// Print a bundled example derivation as a certificate.
    Examples {
        #[arg(value_enum)]
        name: Example,
        /// Print the derivation tree instead of the certificate.
        #[arg(long)]
        tree: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    SubjectReduction,
    SubjectExpansion,
    TermSubst,
    StructSubst,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Peirce,
    Dne,
    NoChoice,
    Erasing,
}

struct Out {
    color: bool,
}

impl Out {
    fn new() -> Self {
        let color = match std::env::var("LAMMU_COLOR").as_deref() {
            Ok("always") => true,
            Ok("never") => false,
            _ => std::io::stderr().is_terminal(),
        };
        Out { color }
    }

    fn paint(&self, s: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn error(&self, code: u8, msg: impl std::fmt::Display) -> u8 {
        eprintln!("{}: {msg}", self.paint("error", "31"));
        code
    }

    fn note(&self, msg: impl std::fmt::Display) {
        eprintln!("{}: {msg}", self.paint("note", "36"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out::new();
    ExitCode::from(run(cli.command, &out))
}

fn judgment(text: &str) -> Result<Judgment, String> {
    let r = parse_judgment(text).map_err(|e| e.to_string())?;
    Ok(Judgment::new(r.gamma, r.term, r.ty, r.delta))
}

fn run(cmd: Command, out: &Out) -> u8 {
    match cmd {
        Command::Fmt { input } => fmt(&input, out),
        Command::Reduce { term, rules, fuel, trace } => reduce(&term, &rules, fuel, trace, out),
        Command::CheckSimple { judgment: text, cert } => {
            let j = match judgment(&text) {
                Ok(j) => SimpleJudgment::new(j.gamma, j.term, j.ty, j.delta),
                Err(e) => return out.error(USAGE, e),
            };
            match check_simple(&j) {
                Ok(d) => {
                    if cert {
                        print!("{}", to_certificate(&embed_in_iu(&d)));
                    } else {
                        print!("{}", d.render());
                    }
                    for a in free_names(&j.term) {
                        out.note(format!("name {a} is free, of type {}", print_type(&j.delta[&a])));
                    }
                    OK
                }
                Err(e) => out.error(INVALID, e),
            }
        }
        Command::InferSimple { term } => match parse_term(&term) {
            Err(e) => out.error(USAGE, e),
            Ok(t) => match infer_simple(&t) {
                Ok(typing) => {
                    println!("{}", typing.judgment());
                    OK
                }
                Err(e) => out.error(INVALID, e),
            },
        },
        Command::CheckIu { judgment: text, depth, width, cert } => {
            let j = match judgment(&text) {
                Ok(j) => j,
                Err(e) => return out.error(USAGE, e),
            };
            let budget = SearchBudget { max_depth: depth, max_width: width, ..SearchBudget::default() };
            match derive(&j, budget) {
                Ok(d) => {
                    if cert {
                        print!("{}", to_certificate(&d));
                    } else {
                        println!("found");
                        print!("{}", d.render());
                    }
                    OK
                }
                Err(IuError::NotFoundWithinBudget) => {
                    println!("not found within budget");
                    BUDGET
                }
                Err(e) => out.error(INVALID, e),
            }
        }
        Command::Verify { file } => verify(file.as_deref(), out),
        Command::Metatheory { suite, seed, cases, budget } => {
            let budget = match parse_budget(&budget) {
                Ok(b) => b,
                Err(e) => return out.error(USAGE, e),
            };
            metatheory(suite, seed, cases, budget, out)
        }
        Command::Examples { name, tree } => examples(name, tree, out),
    }
}

fn fmt(input: &str, out: &Out) -> u8 {
    if looks_like_judgment(input) {
        return match parse_judgment(input) {
            Ok(r) => {
                println!("{}", print_judgment(&r.gamma, &r.term, &r.ty, &r.delta));
                OK
            }
            Err(e) => out.error(USAGE, e),
        };
    }
    match (parse_term(input), parse_type_any(input)) {
        (Ok(t), _) => println!("{}", print_term(&t)),
        (_, Ok(t)) => println!("{}", print_type(&t)),
        (Err(e), Err(_)) => return out.error(USAGE, e),
    }
    OK
}

fn reduce(text: &str, rules: &[String], fuel: usize, trace: bool, out: &Out) -> u8 {
    let term = match parse_term(text) {
        Ok(t) => t,
        Err(e) => return out.error(USAGE, e),
    };
    let enabled: Vec<RuleId> = match rules.iter().map(|r| r.trim().parse()).collect() {
        Ok(v) => v,
        Err(e) => return out.error(USAGE, e),
    };
    let result = normalize(&term, &enabled, ReductionStrategy::LeftmostOutermost, fuel);
    if trace {
        print!("{}", result.to_text());
    }
    println!("{}", result.final_term());
    if result.fuel_exhausted {
        return out.error(BUDGET, format!("no normal form within {fuel} steps"));
    }
    OK
}

fn verify(file: Option<&str>, out: &Out) -> u8 {
    let mut text = String::new();
    let read = match file {
        None | Some("-") => std::io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(path) => std::fs::read_to_string(path).map(|s| text = s),
    };
    if let Err(e) = read {
        return out.error(USAGE, e);
    }
    let d = match from_certificate(&text) {
        Ok(d) => d,
        Err(e) => return out.error(USAGE, e),
    };
    match check_derivation(&d) {
        Ok(()) => {
            println!("valid: {}", d.conclusion);
            OK
        }
        Err(e) => out.error(INVALID, e),
    }
}

fn parse_budget(text: &str) -> Result<SearchBudget, String> {
    match text {
        "default" => return Ok(SearchBudget::default()),
        "doubled" => return Ok(SearchBudget::default().doubled()),
        _ => {}
    }
    let mut b = SearchBudget::default();
    for pair in text.split(',') {
        let (k, v) = pair.split_once('=').ok_or_else(|| format!("expected key=value, found `{pair}`"))?;
        let v: usize = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
        match k.trim() {
            "depth" => b.max_depth = v,
            "width" => b.max_width = v,
            "size" => b.max_type_size = v,
            "universe" => b.max_universe = v,
            "steps" => b.max_steps = v,
            other => return Err(format!("unknown budget key `{other}`")),
        }
    }
    Ok(b)
}

fn metatheory(suite: Suite, seed: u64, cases: usize, budget: SearchBudget, out: &Out) -> u8 {
    let cfg = GenConfig { seed, cases, ..GenConfig::default() };
    out.note(format!("seed {seed}"));
    let rules = RuleId::TYPED;
    let reports: Vec<SuiteReport> = match suite {
        Suite::SubjectReduction => vec![suite_subject_reduction(&cfg, &rules, budget).expect("typed rules")],
        Suite::SubjectExpansion => vec![suite_subject_expansion(&cfg, &rules, budget).expect("typed rules")],
        Suite::TermSubst => vec![suite_term_subst(&cfg, budget)],
        Suite::StructSubst => vec![suite_struct_subst(&cfg, budget)],
        Suite::All => vec![
            suite_subject_reduction(&cfg, &rules, budget).expect("typed rules"),
            suite_subject_expansion(&cfg, &rules, budget).expect("typed rules"),
            suite_term_subst(&cfg, budget),
            suite_struct_subst(&cfg, budget),
        ],
    };
    let mut code = OK;
    for r in &reports {
        print!("{}", r.to_text());
        if !r.passed() {
            code = INVALID;
        }
    }
    code
}

fn show(d: &Derivation, tree: bool) {
    if tree {
        print!("{}", d.render());
    } else {
        print!("{}", to_certificate(d));
    }
}

fn examples(name: Example, tree: bool, out: &Out) -> u8 {
    let golden = match name {
        Example::Peirce => PEIRCE,
        Example::Dne => DNE,
        Example::NoChoice => NO_CHOICE,
        Example::Erasing => {
            let Some(demo) = demo_erasing_failure() else {
                return out.error(INVALID, "no counterexample instance found");
            };
            show(&demo.mu_derivation, tree);
            out.note("this instance is the first one the search found; any instance of the schema would do");
            out.note(format!("erasing step contracts the subject to `{}`", demo.erased_goal.term));
            out.note(format!("not derivable at the doubled budget: {}", demo.erased_goal));
            out.note(format!("derivable for one component: {}", demo.component_derivation.conclusion));
            return OK;
        }
    };
    if tree {
        match from_certificate(golden) {
            Ok(d) => print!("{}", d.render()),
            Err(e) => return out.error(INVALID, e),
        }
    } else {
        print!("{golden}");
    }
    OK
}
