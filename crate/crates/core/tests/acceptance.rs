mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use common::report;
use lammu::grammar::{parse_judgment, parse_term, parse_type_any, print_term, print_type};
use lammu::iu_types::{check_derivation, check_strict, derive, from_certificate, Derivation, IuError, Judgment, Rule, SearchBudget};
use lammu::metatheory::{
    demo_erasing_failure, gen_typed_judgment, suite_struct_subst, suite_subject_expansion, suite_subject_reduction,
    suite_term_subst, GenConfig, SuiteReport,
};
use lammu::reduction::{contract, RuleId};
use lammu::simple_types::{check_simple, embed_in_iu, infer_simple, SimpleDerivation, SimpleJudgment};
use lammu::syntax::{alpha_eq, free_names, Name};
use lammu::typelang::{canonicalize, subtype, well_formed, Language, Type};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CERTS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/certificates");

fn lammu(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lammu")).args(args).env("LAMMU_COLOR", "never").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

fn simple(text: &str) -> SimpleJudgment {
    let r = parse_judgment(text).unwrap();
    SimpleJudgment::new(r.gamma, r.term, r.ty, r.delta)
}

fn iu(text: &str) -> Judgment {
    let r = parse_judgment(text).unwrap();
    Judgment::new(r.gamma, r.term, r.ty, r.delta)
}

fn preorder(d: &SimpleDerivation, out: &mut Vec<(String, SimpleJudgment)>) {
    out.push((d.rule.to_string(), d.conclusion.clone()));
    for p in &d.premises {
        preorder(p, out);
    }
}

fn stat(r: &SuiteReport, key: &str) -> usize {
    r.stats.get(key).copied().unwrap_or(0)
}

fn first(v: &[String]) -> String {
    v.first().map(|x| format!(" (first: {x})")).unwrap_or_default()
}

fn within(t: Instant, limit: u64) -> (bool, String) {
    let e = t.elapsed();
    (e < Duration::from_secs(limit), format!("{:.1}s of {limit}s", e.as_secs_f64()))
}

const PEIRCE: &str = "|- \\x. mu a.[a] (x (\\y. mu b.[a] y)) : ((A -> B) -> A) -> A |";

#[test]
fn c01_peirce() {
    let t = Instant::now();
    // The displayed derivation, read top-down; its naming steps `[a]M : ⊥`
    // are folded into the (mu) rule here.
    let display = [
        ("->I", PEIRCE),
        ("mu", "x:(A -> B) -> A |- mu a.[a] (x (\\y. mu b.[a] y)) : A |"),
        ("->E", "x:(A -> B) -> A |- x (\\y. mu b.[a] y) : A | a:A"),
        ("Ax", "x:(A -> B) -> A |- x : (A -> B) -> A | a:A"),
        ("->I", "x:(A -> B) -> A |- \\y. mu b.[a] y : A -> B | a:A"),
        ("mu", "x:(A -> B) -> A, y:A |- mu b.[a] y : B | a:A"),
        ("Ax", "x:(A -> B) -> A, y:A |- y : A | a:A, b:B"),
    ];
    let d = check_simple(&simple(PEIRCE)).expect("accepted");
    let mut nodes = Vec::new();
    preorder(&d, &mut nodes);
    let expected: Vec<(String, SimpleJudgment)> = display.iter().map(|(r, j)| (r.to_string(), simple(j))).collect();
    let node_match = nodes == expected;

    let text = std::fs::read_to_string(format!("{CERTS}/peirce.json")).unwrap();
    let cert = from_certificate(&text).unwrap();
    let cert_ok = check_derivation(&cert).is_ok() && cert == embed_in_iu(&d);
    let (code, _, _) = lammu(&["check-simple", PEIRCE]);
    let (vcode, _, _) = lammu(&["verify", &format!("{CERTS}/peirce.json")]);
    let (fast, time) = within(t, 1);
    let ok = node_match && cert_ok && code == 0 && vcode == 0 && fast;
    report(1, "Peirce", ok, &format!("{} nodes match the display: {node_match}, certificate: {cert_ok}, {time}", nodes.len()));
}

#[test]
fn c02_double_negation() {
    let t = Instant::now();
    let text = "|- \\y. mu a.[b] (y (\\x. mu d.[a] x)) : ((A -> bot) -> bot) -> A | b:bot";
    let j = simple(text);
    let accepted = check_simple(&j).is_ok();
    let free: Vec<Name> = free_names(&j.term).into_iter().collect();
    let free_ok = free == vec![Name::new("b")] && j.delta[&Name::new("b")] == Type::Bottom;
    let (code, _, err) = lammu(&["check-simple", text]);
    let reported = err.contains("name b is free, of type bot");
    let cert = from_certificate(&std::fs::read_to_string(format!("{CERTS}/dne.json")).unwrap()).unwrap();
    let cert_ok = check_derivation(&cert).is_ok();
    let (fast, time) = within(t, 1);
    let ok = accepted && free_ok && code == 0 && reported && cert_ok && fast;
    report(2, "double negation", ok, &format!("accepted: {accepted}, b free of type bot: {free_ok}, reported: {reported}, {time}"));
}

#[test]
fn c03_no_choice() {
    let t = Instant::now();
    let goal = |ty: &str| format!("|- mu d.[d](\\x. mu b.[d] x) : {ty} |");
    let (c_union, out, _) = lammu(&["check-iu", "--depth", "6", &goal("A \\/ (A -> B)")]);
    let found = c_union == 0 && out.starts_with("found");
    let budget = SearchBudget::default().with_depth(6);
    let mut misses = Vec::new();
    for ty in ["A", "A -> B"] {
        let (c, out, _) = lammu(&["check-iu", "--depth", "6", &goal(ty)]);
        let lib = derive(&iu(&goal(ty)), budget);
        misses.push(c == 3 && out.starts_with("not found") && lib == Err(IuError::NotFoundWithinBudget));
    }
    let cert = from_certificate(&std::fs::read_to_string(format!("{CERTS}/no-choice.json")).unwrap()).unwrap();
    let rules = cert.rules();
    let shape = check_derivation(&cert).is_ok()
        && rules == vec![Rule::UnionESelf, Rule::ArrowI, Rule::UnionENamed, Rule::InterE];
    let (fast, time) = within(t, 10);
    let ok = found && misses.iter().all(|&m| m) && shape && fast;
    report(3, "no choice", ok, &format!("union found: {found}, A / A -> B not found: {misses:?}, certificate shape: {shape}, {time}"));
}

fn cfg(cases: usize) -> GenConfig {
    GenConfig { cases, ..GenConfig::default() }
}

#[test]
fn c04_subject_reduction() {
    let t = Instant::now();
    let r = suite_subject_reduction(&cfg(500), &RuleId::TYPED, SearchBudget::default()).unwrap();
    let roots: usize = RuleId::TYPED.iter().map(|rule| stat(&r, &format!("root_{rule}"))).sum();
    let (fast, time) = within(t, 300);
    let ok = r.cases_run == 500 && r.passed() && stat(&r, "root_ok") == roots && fast;
    let summary = r.to_text().lines().last().unwrap().to_string();
    report(4, "subject reduction", ok, &format!("{summary}, root steps rebuilt {}/{roots}, {time}", stat(&r, "root_ok")));
}

#[test]
fn c05_subject_expansion() {
    let t = Instant::now();
    let r = suite_subject_expansion(&cfg(500), &RuleId::TYPED, SearchBudget::default()).unwrap();
    let roots: usize = RuleId::TYPED.iter().map(|rule| stat(&r, &format!("root_{rule}"))).sum();
    let (fast, time) = within(t, 300);
    let ok = r.cases_run == 500 && r.passed() && stat(&r, "root_ok") == roots && fast;
    let summary = r.to_text().lines().last().unwrap().to_string();
    report(5, "subject expansion", ok, &format!("{summary}, root expansions rebuilt {}/{roots}, {time}", stat(&r, "root_ok")));
}

fn substitution_ok(r: &SuiteReport, fast: bool) -> bool {
    let n = r.cases_run;
    n == 300
        && r.passed()
        && stat(r, "forward_ok") == n
        && stat(r, "backward_ok") == n
        && stat(r, "witness_search_found") * 100 >= 95 * n
        && stat(r, "witness_search_missed_at_double") == 0
        && fast
}

#[test]
fn c06_substitution_lemmas() {
    let t = Instant::now();
    let term = suite_term_subst(&cfg(300), SearchBudget::default());
    let (fast_term, time_term) = within(t, 300);
    let t = Instant::now();
    let structural = suite_struct_subst(&cfg(300), SearchBudget::default());
    let (fast_struct, time_struct) = within(t, 300);
    let ok = substitution_ok(&term, fast_term) && substitution_ok(&structural, fast_struct);
    let line = |r: &SuiteReport| {
        format!(
            "found {} + {} at double, missed {}",
            stat(r, "witness_search_found"),
            stat(r, "witness_search_found_at_double"),
            stat(r, "witness_search_missed_at_double")
        )
    };
    report(6, "substitution lemmas", ok, &format!("term: {} ({time_term}); structural: {} ({time_struct})", line(&term), line(&structural)));
}

#[test]
fn c07_erasing_failure() {
    let t = Instant::now();
    let demo = demo_erasing_failure();
    let ok_demo = demo.as_ref().is_some_and(|demo| {
        let m = &demo.mu_derivation.conclusion;
        let e = &demo.erased_goal;
        check_derivation(&demo.mu_derivation).is_ok()
            && check_derivation(&demo.component_derivation).is_ok()
            && contract(&m.term, RuleId::Erasing).as_ref() == Some(&e.term)
            && (m.gamma.clone(), m.ty.clone(), m.delta.clone()) == (e.gamma.clone(), e.ty.clone(), e.delta.clone())
            && derive(e, SearchBudget::default().doubled()).is_err()
    });
    let (fast, time) = within(t, 30);
    let shown = demo.map(|d| format!("{} erases to {}", d.mu_derivation.conclusion, d.erased_goal)).unwrap_or_default();
    report(7, "erasing failure", ok_demo && fast, &format!("{shown}, {time}"));
}

/// Flattened, sorted and syntactically deduplicated, with singleton
/// intersections and unions unwrapped.
fn norm(t: &Type) -> Type {
    let gather = |ps: &[Type], inter: bool| {
        let mut out: Vec<Type> = Vec::new();
        for p in ps.iter().map(norm) {
            match p {
                Type::Inter(qs) if inter => out.extend(qs),
                Type::Union(qs) if !inter => out.extend(qs),
                Type::Bottom if !inter => {}
                other => out.push(other),
            }
        }
        out.sort_by_key(print_type);
        out.dedup();
        out
    };
    match t {
        Type::Var(_) | Type::Bottom => t.clone(),
        Type::Arrow(l, r) => Type::arrow(norm(l), norm(r)),
        Type::Inter(ps) => {
            let mut v = gather(ps, true);
            if v.len() == 1 { v.pop().unwrap() } else { Type::Inter(v) }
        }
        Type::Union(ps) => {
            let mut v = gather(ps, false);
            match v.len() {
                0 => Type::Bottom,
                1 => v.pop().unwrap(),
                _ => Type::Union(v),
            }
        }
    }
}

fn close(t: &Type, out: &mut Vec<Type>) {
    if out.contains(t) {
        return;
    }
    match t {
        Type::Arrow(l, r) => {
            close(l, out);
            close(r, out);
        }
        Type::Inter(ps) | Type::Union(ps) => ps.iter().for_each(|p| close(p, out)),
        _ => {}
    }
    out.push(t.clone());
}

/// The least preorder generated by projection, intersection introduction,
/// injection, union elimination and arrow congruence under ∼, saturated
/// with transitivity over a subterm-closed universe.
fn leq_oracle(u: &[Type]) -> Vec<Vec<bool>> {
    let n = u.len();
    let idx: BTreeMap<&Type, usize> = u.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let parts = |t: &Type| -> Vec<usize> {
        match t {
            Type::Inter(ps) | Type::Union(ps) => ps.iter().map(|p| idx[p]).collect(),
            _ => vec![],
        }
    };
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        if let Type::Inter(_) = &u[i] {
            for p in parts(&u[i]) {
                leq[i][p] = true;
            }
        }
        if let Type::Union(_) = &u[i] {
            for p in parts(&u[i]) {
                leq[p][i] = true;
            }
        }
    }
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] && !leq[i][j] {
                            leq[i][j] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    continue;
                }
                let derived = match (&u[i], &u[j]) {
                    (_, Type::Inter(ps)) => ps.iter().all(|p| leq[i][idx[p]]),
                    (Type::Union(ps), _) => ps.iter().all(|p| leq[idx[p]][j]),
                    (Type::Bottom, _) => true,
                    (Type::Arrow(l1, r1), Type::Arrow(l2, r2)) => {
                        let eq = |a: usize, b: usize| leq[a][b] && leq[b][a];
                        eq(idx[&**l1], idx[&**l2]) && eq(idx[&**r1], idx[&**r2])
                    }
                    _ => false,
                };
                if derived {
                    leq[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return leq;
        }
    }
}

#[test]
fn c08_leq_oracle() {
    let t = Instant::now();
    let (a, b) = (Type::var("A"), Type::var("B"));
    let strict0 = vec![a.clone(), b.clone(), Type::Bottom];
    let mut inter0 = vec![Type::top(), Type::inter(vec![a.clone(), b.clone()])];
    inter0.extend(strict0.clone());
    let mut strict1 = strict0.clone();
    strict1.push(Type::union(vec![a.clone(), b.clone()]));
    for l in &inter0 {
        for r in &strict0 {
            strict1.push(Type::arrow(l.clone(), r.clone()));
        }
    }
    let mut all = strict1.clone();
    for (i, x) in strict1.iter().enumerate() {
        for y in &strict1[i + 1..] {
            all.push(Type::inter(vec![x.clone(), y.clone()]));
            all.push(Type::union(vec![x.clone(), y.clone()]));
        }
    }
    let mut u = Vec::new();
    for ty in all.iter().map(norm).filter(|t| well_formed(t, Language::Iu)) {
        close(&ty, &mut u);
    }
    let canonical = u.iter().filter(|t| canonicalize(t) == **t).count();
    let oracle = leq_oracle(&u);
    let mut disagreements = Vec::new();
    for i in 0..u.len() {
        for j in 0..u.len() {
            if subtype(&u[i], &u[j]) != oracle[i][j] {
                disagreements.push(format!("{} <= {}", u[i], u[j]));
            }
        }
    }
    let (fast, time) = within(t, 60);
    let ok = canonical >= 200 && disagreements.is_empty() && fast;
    let related = oracle.iter().flatten().filter(|&&b| b).count();
    report(
        8,
        "<= oracle",
        ok,
        &format!(
            "{} types ({canonical} canonical), {} pairs of which {related} related, {} disagreements{}, {time}",
            u.len(),
            u.len() * u.len(),
            disagreements.len(),
            first(&disagreements)
        ),
    );
}

fn union_free(t: &Type) -> bool {
    match t {
        Type::Var(_) => true,
        Type::Bottom | Type::Union(_) => false,
        Type::Arrow(l, r) => union_free(l) && union_free(r),
        Type::Inter(ps) => ps.iter().all(union_free),
    }
}

#[test]
fn c09_conservativity() {
    let t = Instant::now();
    let budget = SearchBudget::default();
    let pure = GenConfig { mu_frequency: 0.0, cases: usize::MAX, ..GenConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0;
    let mut positive = 0;
    let mut disagree = Vec::new();
    for (j, _) in gen_typed_judgment(&pure).take(20_000) {
        if compared == 200 {
            break;
        }
        let strict = j.delta.is_empty() && union_free(&j.ty) && j.ty.is_strict() && j.gamma.values().all(union_free);
        if !strict || !j.term.is_pure_lambda() {
            continue;
        }
        compared += 1;
        let other = common::strict_type(&mut rng, 2, false);
        for ty in [j.ty.clone(), other] {
            let in_iu = derive(&j.with_ty(ty.clone()), budget).is_ok();
            let in_strict = check_strict(&j.gamma, &j.term, &ty, budget).is_ok();
            positive += usize::from(in_iu);
            if in_iu != in_strict {
                disagree.push(format!("{} : {ty} (iu {in_iu}, strict {in_strict})", print_term(&j.term)));
            }
        }
    }
    let mut embedded = 0;
    let mut embed_failures = Vec::new();
    for _ in 0..20_000 {
        if embedded == 200 {
            break;
        }
        let size = rand::Rng::gen_range(&mut rng, 3..12);
        let m = common::term(&mut rng, size, true);
        let Ok(typing) = infer_simple(&m) else { continue };
        embedded += 1;
        if let Err(e) = check_derivation(&embed_in_iu(&typing.derivation)) {
            embed_failures.push(format!("{m}: {e}"));
        }
    }
    let (fast, time) = within(t, 120);
    let ok = compared == 200 && disagree.is_empty() && embedded == 200 && embed_failures.is_empty() && fast;
    report(
        9,
        "conservativity",
        ok,
        &format!(
            "{compared} strict judgments x 2 goals ({positive} derivable), {} disagreements{}; {embedded} simple typings embedded, {} rejected{}; {time}",
            disagree.len(),
            first(&disagree),
            embed_failures.len(),
            first(&embed_failures)
        ),
    );
}

#[test]
fn c10_top_typability() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = Vec::new();
    for _ in 0..100 {
        let size = rand::Rng::gen_range(&mut rng, 1..15);
        let m = common::term(&mut rng, size, true);
        let (gamma, delta) = common::environments(&mut rng, &m);
        let j = Judgment::new(gamma, m, Type::top(), delta);
        match derive(&j, SearchBudget::default()) {
            Ok(d) if d.rule == Rule::InterI && d.premises.is_empty() && check_derivation(&d).is_ok() => {}
            other => bad.push(format!("{j}: {:?}", other.map(|d: Derivation| d.rule))),
        }
    }
    let (fast, time) = within(t, 10);
    report(10, "top typability", bad.is_empty() && fast, &format!("100 judgments, {} without a 0-ary (InterI){}, {time}", bad.len(), first(&bad)));
}

#[test]
fn c11_parser_round_trip() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let size = rand::Rng::gen_range(&mut rng, 1..25);
        let m = common::term(&mut rng, size, true);
        match parse_term(&print_term(&m)) {
            Ok(back) if alpha_eq(&back, &m) => {}
            other => bad.push(format!("term {m}: {other:?}")),
        }
    }
    for _ in 0..1000 {
        let ty = common::inter_type(&mut rng, 3, true);
        match parse_type_any(&print_type(&ty)) {
            Ok(back) if canonicalize(&back) == canonicalize(&ty) => {}
            other => bad.push(format!("type {ty}: {other:?}")),
        }
    }
    let (fast, time) = within(t, 30);
    report(11, "parser round trip", bad.is_empty() && fast, &format!("1000 terms, 1000 types, {} failures{}, {time}", bad.len(), first(&bad)));
}
