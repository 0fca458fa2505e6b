//! Property suites for the metatheory of `⊢`: subject reduction, subject
//! expansion and the two substitution lemmas, run over generated typed
//! judgments. Constructive directions rebuild derivations; the remaining
//! directions search for witnesses with [`derive_with`].

mod expansion;
mod generate;
mod preservation;
mod walk;

pub use expansion::{beta_expansion, mu_expansion, renaming_expansion};
pub use generate::{gen_typed_judgment, GenConfig, TypedCases};
pub use preservation::{expand_at, expand_root, reduce_at, reduce_root};
pub use walk::{struct_subst_forward, term_subst_backward, term_subst_forward, StructWitness};

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::iu_types::{
    check_derivation, derive, derive_with, groupings, inter_elim, universe, Derivation, IuError, Judgment,
    SearchBudget,
};
use crate::reduction::{contract, redexes, replace_at, step, subst_structural, subst_term, subterm_at, Position, RuleId};
use crate::syntax::{free_names, free_term_vars, fresh_name, Name, Term, Var};
use crate::typelang::{subtype, LeftEnv, RightEnv, Type};

use generate::{select, Demands, Generator, Scope};
use walk::{as_arrow, merge_parts, struct_extract};

/// One genuine failure: a constructive step that did not produce a valid
/// derivation of the expected judgment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteFailure {
    pub input: String,
    pub stage: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub cases_run: usize,
    pub failures: Vec<SuiteFailure>,
    /// Search directions that found nothing within the budget.
    pub budget_misses: usize,
    pub stats: BTreeMap<String, usize>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            cases_run: 0,
            failures: Vec::new(),
            budget_misses: 0,
            stats: BTreeMap::new(),
        }
    }

    fn count(&mut self, key: &str) {
        *self.stats.entry(key.into()).or_default() += 1;
    }

    fn fail(&mut self, input: String, stage: &str, detail: String) {
        self.failures.push(SuiteFailure { input, stage: stage.into(), detail });
    }

    fn record(&mut self, input: impl Fn() -> String, stage: &str, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => self.count(&format!("{stage}_ok")),
            Err(e) => self.fail(input(), stage, e),
        }
    }

    /// Records a search outcome: a miss at `budget` is retried once at the
    /// doubled budget.
    fn search(&mut self, stage: &str, budget: SearchBudget, run: impl Fn(SearchBudget) -> bool) {
        if run(budget) {
            self.count(&format!("{stage}_found"));
        } else {
            self.budget_misses += 1;
            if run(budget.doubled()) {
                self.count(&format!("{stage}_found_at_double"));
            } else {
                self.count(&format!("{stage}_missed_at_double"));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Statistics and failures, then the summary line
    /// `SUITE <name> RUN <n> FAIL <n> BUDGET_MISS <n>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.stats {
            out.push_str(&format!("stat {k} {v}\n"));
        }
        for f in &self.failures {
            out.push_str(&format!("FAIL {} {} :: {}\n", f.stage, f.input, f.detail));
        }
        out.push_str(&format!(
            "SUITE {} RUN {} FAIL {} BUDGET_MISS {}\n",
            self.suite,
            self.cases_run,
            self.failures.len(),
            self.budget_misses
        ));
        out
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SuiteError {
    #[error("{0} steps do not preserve types; choose among beta, mu and renaming")]
    UnsupportedRule(RuleId),
}

fn supported(rules: &[RuleId]) -> Result<(), SuiteError> {
    match rules.iter().find(|r| matches!(r, RuleId::Erasing | RuleId::EtaMu)) {
        Some(r) => Err(SuiteError::UnsupportedRule(*r)),
        None => Ok(()),
    }
}

/// Checks `d` and that it concludes exactly `expected`.
fn verify(d: &Derivation, expected: &Judgment) -> Result<(), String> {
    check_derivation(d).map_err(|e| e.to_string())?;
    if d.conclusion != *expected {
        return Err(format!("concludes {} instead of {expected}", d.conclusion));
    }
    Ok(())
}

fn strict_parts(d: &Derivation) -> Vec<Derivation> {
    let n = d.conclusion.ty.inter_parts().len();
    if d.conclusion.ty.is_strict() {
        vec![d.clone()]
    } else {
        (1..=n).filter_map(|i| inter_elim(d, i).ok()).collect()
    }
}

fn found(j: &Judgment, budget: SearchBudget, seeds: &[Type]) -> bool {
    derive_with(j, budget, seeds).is_ok_and(|d| check_derivation(&d).is_ok())
}

/// Subject reduction: every one-step reduct of a generated judgment keeps
/// its type. Each step is rebuilt constructively; for one step below the
/// root per case the reduct is also re-derived by search.
pub fn suite_subject_reduction(cfg: &GenConfig, rules: &[RuleId], budget: SearchBudget) -> Result<SuiteReport, SuiteError> {
    supported(rules)?;
    let mut gen = Generator::new(cfg);
    let mut rep = SuiteReport::new("subject_reduction");
    for _ in 0..cfg.cases {
        let (_, d) = gen.next_case();
        rep.cases_run += 1;
        if !d.conclusion.ty.is_strict() {
            rep.count("intersection_conclusions");
        }
        let mut searched = false;
        for dc in strict_parts(&d) {
            let c = &dc.conclusion;
            for (pos, rule) in redexes(&c.term, rules) {
                let reduct = step(&c.term, &pos, rule).expect("listed redex");
                let target = Judgment::new(c.gamma.clone(), reduct, c.ty.clone(), c.delta.clone());
                let stage = if pos.is_root() { "root" } else { "inner" };
                rep.count(&format!("{stage}_{rule}"));
                let outcome = reduce_at(&dc, &pos, rule).and_then(|r| verify(&r, &target));
                rep.record(|| format!("{c} at {pos} by {rule}"), stage, outcome);
                if !pos.is_root() && !searched {
                    searched = true;
                    let seeds = dc.types();
                    rep.search("inner_search", budget, |b| found(&target, b, &seeds));
                }
            }
        }
    }
    Ok(rep)
}

fn synthesize<R: Rng>(rule: RuleId, n: &Term, typed: &BTreeSet<Name>, rng: &mut R) -> Option<Term> {
    match rule {
        RuleId::Beta => beta_expansion(n, rng),
        RuleId::Mu => mu_expansion(n, rng),
        RuleId::Renaming => renaming_expansion(n, typed, rng),
        _ => None,
    }
}

/// Names bound by μ above `path` in `t`.
fn names_above(t: &Term, path: &[usize]) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    let mut cur = t;
    for &i in path {
        if let Term::Mu(a, _, _) = cur {
            out.insert(a.clone());
        }
        cur = cur.children()[i];
    }
    out
}

fn positions(t: &Term, at: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    for (i, c) in t.children().into_iter().enumerate() {
        let mut p = at.clone();
        p.push(i);
        positions(c, p.clone(), out);
        out.push(p);
    }
}

/// Subject expansion: redexes synthesized to contract to a generated
/// subject keep its (strict) type. Root expansions and one expansion below
/// the root per case are rebuilt constructively; the latter is also
/// re-derived by search.
pub fn suite_subject_expansion(cfg: &GenConfig, rules: &[RuleId], budget: SearchBudget) -> Result<SuiteReport, SuiteError> {
    supported(rules)?;
    let mut gen = Generator::new(cfg);
    let mut rep = SuiteReport::new("subject_expansion");
    for _ in 0..cfg.cases {
        let (_, d) = gen.next_case();
        rep.cases_run += 1;
        let mut searched = false;
        for dc in strict_parts(&d) {
            let c = dc.conclusion.clone();
            let typed: BTreeSet<Name> = c.delta.keys().cloned().collect();
            for &rule in rules {
                let Some(m) = synthesize(rule, &c.term, &typed, &mut gen.rng) else { continue };
                rep.count(&format!("root_{rule}"));
                let target = c.with_term(m.clone());
                let outcome = expand_root(&dc, &m, rule).and_then(|r| verify(&r, &target));
                rep.record(|| format!("{c} from {m} by {rule}"), "root", outcome);
            }
            let mut inner = Vec::new();
            positions(&c.term, Vec::new(), &mut inner);
            let Some(path) = inner.choose(&mut gen.rng).cloned() else { continue };
            let sub = subterm_at(&c.term, &Position(path.clone())).expect("listed position").clone();
            let mut typed_here = typed.clone();
            typed_here.extend(names_above(&c.term, &path));
            let mut order = rules.to_vec();
            order.shuffle(&mut gen.rng);
            for rule in order {
                let Some(m) = synthesize(rule, &sub, &typed_here, &mut gen.rng) else { continue };
                let pos = Position(path.clone());
                let target = c.with_term(replace_at(&c.term, &path, m.clone()).expect("listed position"));
                rep.count(&format!("inner_{rule}"));
                let built = expand_at(&dc, &pos, &m, rule);
                let outcome = built.clone().and_then(|r| verify(&r, &target));
                rep.record(|| format!("{c} at {pos} from {m} by {rule}"), "inner", outcome);
                if !searched {
                    searched = true;
                    let seeds = built.map_or_else(|_| dc.types(), |r| r.types());
                    rep.search("inner_search", budget, |b| found(&target, b, &seeds));
                }
                break;
            }
        }
    }
    Ok(rep)
}

fn with<K: Ord + Clone>(env: &BTreeMap<K, Type>, k: &K, t: Type) -> BTreeMap<K, Type> {
    let mut out = env.clone();
    out.insert(k.clone(), t);
    out
}

/// The seeds and their intersection components, then the universe of the
/// seeds.
fn seeded_first(seeds: &[Type], budget: &SearchBudget) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    let direct = seeds.iter().flat_map(|t| std::iter::once(t.clone()).chain(t.inter_parts()));
    for t in direct.chain(universe(seeds, budget, false)) {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// Looks for `C`, an intersection of at most three universe types, with
/// `Γ ⊢ N : C | Δ` and `Γ, x:C ⊢ M : A | Δ`.
fn search_term_witness(target: &Judgment, m: &Term, x: &Var, n: &Term, budget: SearchBudget, seeds: &[Type]) -> Option<Type> {
    let (g, dl) = (&target.gamma, &target.delta);
    let body_ok = |c: &Type| found(&Judgment::new(with(g, x, c.clone()), m.clone(), target.ty.clone(), dl.clone()), budget, seeds);
    if body_ok(&Type::inter_of(vec![])) {
        return Some(Type::inter_of(vec![]));
    }
    let mut atoms: Vec<Type> = Vec::new();
    for t in seeded_first(seeds, &budget) {
        if atoms.len() == 8 {
            break;
        }
        if !found(&Judgment::new(g.clone(), n.clone(), t.clone(), dl.clone()), budget, seeds) {
            continue;
        }
        let k = atoms.len();
        let mut cands = vec![t.clone()];
        for i in 0..k {
            cands.push(Type::inter_of(vec![atoms[i].clone(), t.clone()]));
            for j in i + 1..k {
                cands.push(Type::inter_of(vec![atoms[i].clone(), atoms[j].clone(), t.clone()]));
            }
        }
        if let Some(c) = cands.into_iter().find(|c| body_ok(c)) {
            return Some(c);
        }
        atoms.push(t);
    }
    None
}

/// Term substitution: `Γ ⊢ M[N/x] : A | Δ` iff some `C` has
/// `Γ, x:C ⊢ M : A | Δ` and `Γ ⊢ N : C | Δ`.
pub fn suite_term_subst(cfg: &GenConfig, budget: SearchBudget) -> SuiteReport {
    let mut gen = Generator::new(cfg);
    let mut rep = SuiteReport::new("term_substitution");
    while rep.cases_run < cfg.cases {
        let mut dm = Demands::default();
        let goal = gen.strict_type(2);
        let size = gen.rng.gen_range(1..=cfg.max_term_size.max(1));
        let d1s = gen.gen(&goal, &Scope::default(), size, &mut dm);
        let m = d1s.conclusion.term.clone();
        let free: Vec<Var> = dm.vars.keys().cloned().collect();
        let (x, c) = match free.choose(&mut gen.rng) {
            Some(x) => {
                let parts = dm.vars.remove(x).unwrap();
                (x.clone(), Type::inter_of(parts))
            }
            None => (crate::syntax::fresh_var(&m.all_vars(), &Var::new("x")), gen.arg_type(1)),
        };
        dm.avoid_vars.insert(x.clone());
        let nsize = gen.rng.gen_range(1..=(cfg.max_term_size / 2).max(1));
        let d2s = gen.gen(&c, &Scope::default(), nsize, &mut dm);
        let n = d2s.conclusion.term.clone();
        if free_term_vars(&n).contains(&x) {
            continue;
        }
        rep.cases_run += 1;
        let (gamma, delta) = (dm.gamma(), dm.delta());
        let d1 = gen.finish(&d1s, &with(&gamma, &x, c.clone()), &delta);
        let d2 = gen.finish(&d2s, &gamma, &delta);
        let target = Judgment::new(gamma.clone(), subst_term(&m, &x, &n), goal.clone(), delta.clone());
        let input = || format!("{} with {x} := {n}", d1.conclusion);
        let forward = term_subst_forward(&d1, &x, &d2, &gamma, &delta);
        let r = match forward.and_then(|r| verify(&r, &target).map(|_| r)) {
            Ok(r) => {
                rep.count("forward_ok");
                r
            }
            Err(e) => {
                rep.fail(input(), "forward", e);
                continue;
            }
        };
        let back = term_subst_backward(&r, &m, &x, &n).and_then(|(w, e1, e2)| {
            verify(&e1, &Judgment::new(with(&gamma, &x, w.clone()), m.clone(), goal.clone(), delta.clone()))?;
            verify(&e2, &Judgment::new(gamma.clone(), n.clone(), w, delta.clone()))
        });
        rep.record(input, "backward", back);
        let seeds = r.types();
        rep.search("witness_search", budget, |b| search_term_witness(&target, &m, &x, &n, b, &seeds).is_some());
    }
    rep
}

/// Looks for a grouping `∪Bi` of `γ`'s components and domains `Ai` with
/// `Γ ⊢ M : A | α:∪(Ai→Bi), Δ` and `Γ ⊢ N : Ai | Δ`.
fn search_struct_witness(
    r: &Judgment,
    m: &Term,
    alpha: &Name,
    n: &Term,
    gamma: &Name,
    budget: SearchBudget,
    seeds: &[Type],
) -> Option<Type> {
    let mut base = r.delta.clone();
    let bparts = base.remove(gamma).map(|t| t.union_parts()).unwrap_or_default();
    let bound = Type::union_of(bparts.clone());
    let n_ok = |a: &Type| found(&Judgment::new(r.gamma.clone(), n.clone(), a.clone(), base.clone()), budget, seeds);
    let m_ok = |f: &Type| {
        found(&Judgment::new(r.gamma.clone(), m.clone(), r.ty.clone(), with(&base, alpha, f.clone())), budget, seeds)
    };
    let mut shapes: Vec<Vec<(Type, Type)>> = Vec::new();
    for t in seeds {
        let arrows: Option<Vec<(Type, Type)>> = t.union_parts().iter().map(as_arrow).collect();
        match arrows {
            Some(a) if !a.is_empty() && a.iter().all(|(_, b)| subtype(b, &bound)) && !shapes.contains(&a) => {
                shapes.push(a)
            }
            _ => {}
        }
    }
    shapes.truncate(12);
    let mut combos: Vec<Vec<(Type, Type)>> = shapes.clone();
    for i in 0..shapes.len() {
        for k in i + 1..shapes.len() {
            combos.push(shapes[i].iter().chain(&shapes[k]).cloned().collect());
        }
    }
    for arrows in combos {
        if !arrows.iter().all(|(a, _)| n_ok(a)) {
            continue;
        }
        let mut parts: Vec<Type> = arrows.iter().map(|(a, b)| Type::arrow(a.clone(), b.clone())).collect();
        for p in &bparts {
            if !arrows.iter().any(|(_, b)| subtype(p, b)) {
                parts.push(Type::arrow(Type::top(), p.clone()));
            }
        }
        let f = Type::union_of(parts);
        if m_ok(&f) {
            return Some(f);
        }
    }
    let domains: Vec<Type> = seeded_first(seeds, &budget).into_iter().filter(|t| n_ok(t)).take(8).collect();
    let mut tries = 0;
    for ranges in groupings(&bparts, 3) {
        let k = ranges.len();
        let mut idx = vec![0usize; k];
        loop {
            tries += 1;
            if tries > 300 {
                return None;
            }
            let arrows =
                ranges.iter().zip(&idx).map(|(b, &i)| Type::arrow(domains[i].clone(), b.clone())).collect();
            let f = Type::union_of(arrows);
            if m_ok(&f) {
                return Some(f);
            }
            let mut i = 0;
            while i < k && idx[i] + 1 == domains.len() {
                idx[i] = 0;
                i += 1;
            }
            if i == k || domains.is_empty() {
                break;
            }
            idx[i] += 1;
        }
    }
    None
}

struct StructCase {
    m: Term,
    alpha: Name,
    n: Term,
    d1: Derivation,
    args: Vec<Derivation>,
    gamma_env: LeftEnv,
    delta: RightEnv,
    ranges: Type,
}

fn struct_case(gen: &mut Generator) -> Option<StructCase> {
    let cfg = gen.cfg.clone();
    let mut dm = Demands::default();
    let goal = gen.strict_type(2);
    let size = gen.rng.gen_range(2..=cfg.max_term_size.max(2));
    let d1s = gen.gen(&goal, &Scope::default(), size, &mut dm);
    let cands: Vec<Name> = dm
        .names
        .iter()
        .filter(|(_, ps)| !ps.is_empty() && ps.iter().all(|p| as_arrow(p).is_some()))
        .map(|(a, _)| a.clone())
        .collect();
    let alpha = cands.choose(&mut gen.rng)?.clone();
    let f = Type::union_of(dm.names.remove(&alpha).unwrap());
    dm.avoid_names.insert(alpha.clone());
    let arrows: Vec<(Type, Type)> = f.union_parts().iter().filter_map(as_arrow).collect();
    let mut comps = Vec::new();
    let mut ranges = Vec::new();
    for (a, b) in &arrows {
        merge_parts(&mut comps, a.inter_parts());
        merge_parts(&mut ranges, b.union_parts());
    }
    let nsize = gen.rng.gen_range(1..=(cfg.max_term_size / 2).max(1));
    let ad = gen.gen(&Type::inter_of(comps), &Scope::default(), nsize, &mut dm);
    let n = ad.conclusion.term.clone();
    if free_names(&n).contains(&alpha) {
        return None;
    }
    let (gamma_env, delta) = (dm.gamma(), dm.delta());
    let d1 = gen.finish(&d1s, &gamma_env, &with(&delta, &alpha, f));
    let args = arrows.iter().map(|(a, _)| gen.finish(&select(&ad, a), &gamma_env, &delta)).collect();
    Some(StructCase { m: d1.conclusion.term.clone(), alpha, n, d1, args, gamma_env, delta, ranges: Type::union_of(ranges) })
}

/// Structural substitution: `Γ ⊢ M[N·γ/α] : A | γ:∪Bi, Δ` iff some `Ai`
/// have `Γ ⊢ M : A | α:∪(Ai→Bi), Δ` and `Γ ⊢ N : Ai | Δ`.
pub fn suite_struct_subst(cfg: &GenConfig, budget: SearchBudget) -> SuiteReport {
    let mut gen = Generator::new(cfg);
    let mut rep = SuiteReport::new("structural_substitution");
    while rep.cases_run < cfg.cases {
        let Some(sc) = struct_case(&mut gen) else { continue };
        rep.cases_run += 1;
        let mut taken = sc.m.all_names();
        taken.extend(sc.n.all_names());
        taken.extend(sc.delta.keys().cloned());
        taken.insert(sc.alpha.clone());
        let gamma = fresh_name(&taken, &Name::new("g"));
        let dg = with(&sc.delta, &gamma, sc.ranges.clone());
        let result = subst_structural(&sc.m, &sc.alpha, &sc.n, &gamma).expect("fresh name");
        let target = Judgment::new(sc.gamma_env.clone(), result, sc.d1.conclusion.ty.clone(), dg.clone());
        let input = || format!("{} with {} := {}", sc.d1.conclusion, sc.alpha, sc.n);
        let forward = struct_subst_forward(&sc.d1, &sc.alpha, &sc.n, &gamma, &sc.args, &sc.gamma_env, &dg);
        let r = match forward.and_then(|r| verify(&r, &target).map(|_| r)) {
            Ok(r) => {
                rep.count("forward_ok");
                r
            }
            Err(e) => {
                rep.fail(input(), "forward", e);
                continue;
            }
        };
        let back = struct_extract(&r, &sc.m, &sc.alpha, &sc.n, &sc.delta, vec![], &sc.ranges, false).and_then(|w| {
            let env = with(&sc.delta, &sc.alpha, w.alpha_type.clone());
            verify(&w.derivation, &Judgment::new(sc.gamma_env.clone(), sc.m.clone(), target.ty.clone(), env))?;
            for (arrow, arg) in w.alpha_type.union_parts().iter().zip(&w.args) {
                let (dom, _) = as_arrow(arrow).ok_or("not an arrow")?;
                check_derivation(arg).map_err(|e| e.to_string())?;
                if !crate::typelang::type_equiv(&arg.conclusion.ty, &dom) || arg.conclusion.term != sc.n {
                    return Err(format!("argument derivation concludes {}", arg.conclusion));
                }
            }
            Ok(())
        });
        rep.record(input, "backward", back);
        let seeds = r.types();
        rep.search("witness_search", budget, |b| {
            search_struct_witness(&target, &sc.m, &sc.alpha, &sc.n, &gamma, b, &seeds).is_some()
        });
    }
    rep
}

/// An instance where erasing `μα.[α]M → M` (with `α` not free in `M`)
/// loses a union type.
#[derive(Clone, Debug)]
pub struct ErasingDemo {
    /// Derivation of `Γ ⊢ μα.[α]M : A1∪…∪An`.
    pub mu_derivation: Derivation,
    /// `Γ ⊢ M : A1∪…∪An`, underivable even at the doubled budget.
    pub erased_goal: Judgment,
    /// A derivable `Γ ⊢ M : Aj`, the component `M` actually has.
    pub component_derivation: Derivation,
}

/// Searches small instances `x:T ⊢ μa.[a]x : T∪S` for one where the erased
/// term keeps only a component of the union.
pub fn demo_erasing_failure() -> Option<ErasingDemo> {
    let budget = SearchBudget::default();
    let atoms = ["A", "B", "C"].map(Type::var);
    let mut shapes = atoms.to_vec();
    shapes.push(Type::arrow(atoms[0].clone(), atoms[1].clone()));
    for t in &shapes {
        for s in &atoms {
            if crate::typelang::subtype(s, t) {
                continue;
            }
            let gamma: LeftEnv = [(Var::new("x"), t.clone())].into();
            let m = Term::var("x");
            let mu = Term::mu("a", "a", m.clone());
            let target = Type::union(vec![t.clone(), s.clone()]);
            let j = Judgment::new(gamma.clone(), mu, target.clone(), RightEnv::new());
            let Ok(mu_derivation) = derive(&j, budget) else { continue };
            let erased_goal = j.with_term(m.clone());
            if derive(&erased_goal, budget.doubled()).is_ok() {
                continue;
            }
            let Some(component_derivation) =
                target.union_parts().iter().find_map(|a| derive(&erased_goal.with_ty(a.clone()), budget).ok())
            else {
                continue;
            };
            return Some(ErasingDemo { mu_derivation, erased_goal, component_derivation });
        }
    }
    None
}

/// The μ-step on `(μa.[a](f z)) n` with `f:X→⊥`: the redex is typed
/// through a (∪E) premise of type `⊥`, and the reduct has no type.
#[derive(Clone, Debug)]
pub struct EmptyPremiseDemo {
    pub redex_derivation: Derivation,
    pub reduct_goal: Judgment,
    /// Why the constructive step stops.
    pub constructive_error: String,
    /// Outcome of searching for the reduct at the doubled budget.
    pub reduct_search: Result<Derivation, IuError>,
}

pub fn demo_empty_union_premise() -> EmptyPremiseDemo {
    let x = |s: &str| Type::var(s);
    let gamma: LeftEnv = [
        (Var::new("f"), Type::arrow(x("X"), Type::Bottom)),
        (Var::new("n"), x("Y")),
        (Var::new("z"), x("X")),
    ]
    .into();
    let redex = Term::app(Term::mu("a", "a", Term::app(Term::var("f"), Term::var("z"))), Term::var("n"));
    let j = Judgment::new(gamma, redex.clone(), x("W"), RightEnv::new());
    let budget = SearchBudget::default();
    let redex_derivation = derive(&j, budget).expect("redex is typable");
    let reduct_goal = j.with_term(contract(&redex, RuleId::Mu).expect("μ-redex"));
    let constructive_error = reduce_root(&redex_derivation, RuleId::Mu).err().unwrap_or_default();
    let reduct_search = derive(&reduct_goal, budget.doubled());
    EmptyPremiseDemo { redex_derivation, reduct_goal, constructive_error, reduct_search }
}

#[cfg(test)]
mod tests;
