use super::*;
use crate::grammar::{parse_judgment, parse_term};
use crate::iu_types::Rule;

fn j(s: &str) -> Judgment {
    let r = parse_judgment(s).unwrap();
    Judgment::new(r.gamma, r.term, r.ty, r.delta)
}

fn small(cases: usize) -> GenConfig {
    GenConfig { cases, ..GenConfig::default() }
}

#[test]
fn generated_derivations_check() {
    let mut seen = BTreeSet::new();
    for (jd, d) in gen_typed_judgment(&GenConfig::default()).take(300) {
        check_derivation(&d).unwrap_or_else(|e| panic!("{jd}: {e}"));
        assert_eq!(d.conclusion, jd);
        seen.extend(d.rules());
    }
    for r in [Rule::InterE, Rule::InterI, Rule::ArrowI, Rule::ArrowE, Rule::UnionENamed, Rule::UnionESelf] {
        assert!(seen.contains(&r), "{r} never generated");
    }
}

#[test]
fn generation_is_deterministic() {
    let a: Vec<_> = gen_typed_judgment(&small(1)).take(50).collect();
    let b: Vec<_> = gen_typed_judgment(&small(1)).take(50).collect();
    assert_eq!(a, b);
}

#[test]
fn pure_lambda_without_mu() {
    let cfg = GenConfig { mu_frequency: 0.0, ..GenConfig::default() };
    for (jd, _) in gen_typed_judgment(&cfg).take(200) {
        assert!(jd.term.is_pure_lambda(), "{jd}");
    }
}

#[test]
fn beta_step_rebuilt() {
    let d = derive(&j("z:A |- (\\y. y) z : A |"), SearchBudget::default()).unwrap();
    let r = reduce_root(&d, RuleId::Beta).unwrap();
    check_derivation(&r).unwrap();
    assert_eq!(r.conclusion, j("z:A |- z : A |"));
}

#[test]
fn mu_steps_rebuilt() {
    let budget = SearchBudget::default();
    for s in [
        "f:A -> B, n:A |- (mu a.[a] f) n : B |",
        "f:A -> C, n:A |- (mu a.[b] (mu c.[a] f)) n : C | b:C",
    ] {
        let goal = j(s);
        let d = derive(&goal, budget).unwrap_or_else(|e| panic!("{s}: {e}"));
        let r = reduce_root(&d, RuleId::Mu).unwrap_or_else(|e| panic!("{s}: {e}"));
        check_derivation(&r).unwrap();
        assert_eq!(r.conclusion.term, contract(&goal.term, RuleId::Mu).unwrap());
    }
}

#[test]
fn renaming_step_rebuilt() {
    let goal = j("x:A |- mu a.[a] mu c.[a] x : A |");
    let d = derive(&goal, SearchBudget::default()).unwrap();
    let r = reduce_root(&d, RuleId::Renaming).unwrap();
    check_derivation(&r).unwrap();
    assert_eq!(r.conclusion.term, parse_term("mu a.[a] x").unwrap());
}

#[test]
fn expansions_rebuilt() {
    let budget = SearchBudget::default();
    let d = derive(&j("y:B |- y : B |"), budget).unwrap();
    let m = parse_term("(\\x. x) y").unwrap();
    check_derivation(&expand_root(&d, &m, RuleId::Beta).unwrap()).unwrap();
    let d = derive(&j("f:A -> B, n:A |- mu c.[c] (f n) : B |"), budget).unwrap();
    let m = parse_term("(mu a.[a] f) n").unwrap();
    let e = expand_root(&d, &m, RuleId::Mu).unwrap();
    check_derivation(&e).unwrap();
    assert_eq!(e.conclusion.term, m);
}

#[test]
fn erasing_demo_instance() {
    let demo = demo_erasing_failure().unwrap();
    check_derivation(&demo.mu_derivation).unwrap();
    check_derivation(&demo.component_derivation).unwrap();
    assert_eq!(demo.erased_goal, j("x:A |- x : A \\/ B |"));
}

#[test]
fn empty_union_premise_demo() {
    let demo = demo_empty_union_premise();
    check_derivation(&demo.redex_derivation).unwrap();
    assert!(!demo.constructive_error.is_empty());
    assert_eq!(demo.reduct_search, Err(IuError::NotFoundWithinBudget));
}

#[test]
fn suites_refuse_untyped_rules() {
    let budget = SearchBudget::default();
    assert_eq!(
        suite_subject_reduction(&small(1), &[RuleId::Beta, RuleId::Erasing], budget),
        Err(SuiteError::UnsupportedRule(RuleId::Erasing))
    );
    assert!(suite_subject_expansion(&small(1), &[RuleId::EtaMu], budget).is_err());
}

#[test]
fn small_suites_pass() {
    let budget = SearchBudget::default();
    let cfg = small(40);
    let reports = [
        suite_subject_reduction(&cfg, &RuleId::TYPED, budget).unwrap(),
        suite_subject_expansion(&cfg, &RuleId::TYPED, budget).unwrap(),
        suite_term_subst(&cfg, budget),
        suite_struct_subst(&cfg, budget),
    ];
    for r in &reports {
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.to_text().ends_with(&format!("BUDGET_MISS {}\n", r.budget_misses)));
    }
}
