#![allow(dead_code)]

use std::collections::BTreeSet;
use std::io::Write;

use lammu::syntax::{Name, Term, Var};
use lammu::typelang::{LeftEnv, RightEnv, Type};
use rand::seq::SliceRandom;
use rand::Rng;

pub const VARS: [&str; 4] = ["x", "y", "z", "u"];
pub const NAMES: [&str; 3] = ["a", "b", "c"];
pub const TVARS: [&str; 3] = ["A", "B", "C"];

/// Writes one result line past the test harness's output capture, then
/// fails the test if `ok` is false.
pub fn report(n: usize, title: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout();
    writeln!(out, "criterion {n:>2} {status} {title}: {detail}").unwrap();
    out.flush().unwrap();
    assert!(ok, "criterion {n} ({title}) failed: {detail}");
}

pub fn term<R: Rng>(rng: &mut R, size: usize, with_mu: bool) -> Term {
    let pick = |rng: &mut R, pool: &[&str]| pool.choose(rng).unwrap().to_string();
    if size <= 1 {
        return Term::var(pick(rng, &VARS));
    }
    let choice = rng.gen_range(0..if with_mu { 3 } else { 2 });
    match choice {
        0 => Term::abs(pick(rng, &VARS), term(rng, size - 1, with_mu)),
        1 => {
            let k = rng.gen_range(1..size);
            let left = term(rng, k, with_mu);
            Term::app(left, term(rng, size - k, with_mu))
        }
        _ => Term::mu(pick(rng, &NAMES), pick(rng, &NAMES), term(rng, size - 1, with_mu)),
    }
}

/// A strict intersection-union type; `unions` allows `∪` and `⊥`.
pub fn strict_type<R: Rng>(rng: &mut R, depth: usize, unions: bool) -> Type {
    let var = |rng: &mut R| Type::var(*TVARS.choose(rng).unwrap());
    if depth == 0 {
        return var(rng);
    }
    match rng.gen_range(0..if unions { 4 } else { 3 }) {
        0 => var(rng),
        1 | 2 => Type::arrow(inter_type(rng, depth - 1, unions), strict_type(rng, depth - 1, unions)),
        _ => {
            let n = rng.gen_range(0..=3);
            Type::union((0..n).map(|_| strict_type(rng, depth - 1, unions)).collect())
        }
    }
}

/// An intersection of strict types: `⊤`, a single one, or several.
pub fn inter_type<R: Rng>(rng: &mut R, depth: usize, unions: bool) -> Type {
    match rng.gen_range(0..6) {
        0 => Type::top(),
        1 | 2 => Type::inter((0..rng.gen_range(2..=3)).map(|_| strict_type(rng, depth, unions)).collect()),
        _ => strict_type(rng, depth, unions),
    }
}

pub fn environments<R: Rng>(rng: &mut R, term: &Term) -> (LeftEnv, RightEnv) {
    let vars: BTreeSet<Var> = term.all_vars();
    let names: BTreeSet<Name> = term.all_names();
    let gamma = vars.into_iter().map(|x| (x, inter_type(rng, 2, true))).collect();
    let delta = names.into_iter().map(|a| (a, strict_type(rng, 2, true))).collect();
    (gamma, delta)
}
