//! Reduction traces: β, structural substitution through μ, and the
//! simplification rules.

use lammu::grammar::parse_term;
use lammu::reduction::{normalize, redexes, ReductionStrategy, RuleId};

fn run(src: &str, rules: &[RuleId], fuel: usize) {
    let t = parse_term(src).unwrap();
    let trace = normalize(&t, rules, ReductionStrategy::LeftmostOutermost, fuel);
    println!("{t}");
    print!("{}", trace.to_text());
    println!("normal form: {} (fuel exhausted: {})\n", trace.final_term(), trace.fuel_exhausted);
}

fn main() {
    run("(\\x. x) y", &RuleId::ALL, 50);
    run("(mu a.[a] f (mu b.[a] z)) u", &[RuleId::Beta, RuleId::Mu], 50);
    run("(\\x. mu a.[a] x (\\y. mu b.[a] y)) (\\k. v)", &[RuleId::Beta, RuleId::Mu, RuleId::Renaming, RuleId::Erasing], 50);
    run("mu a.[b] mu c.[a] x", &[RuleId::Renaming], 50);
    run("(\\x. x x) (\\x. x x)", &RuleId::ALL, 3);

    let t = parse_term("(\\x. x) ((mu a.[a] y) z)").unwrap();
    for (pos, rule) in redexes(&t, &RuleId::ALL) {
        println!("redex {rule} at {pos}");
    }
}
