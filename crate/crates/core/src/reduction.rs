//! Substitutions, the reduction rules and normalization.
//!
//! Rules: `beta` and `mu` are computational; `renaming`, `erasing` and
//! `eta_mu` are simplifications. Reduction is the compatible closure, with
//! redexes addressed by [`Position`]s.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{free_names, free_term_vars, fresh_name, fresh_var, Name, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Beta,
    Mu,
    Renaming,
    Erasing,
    EtaMu,
}

impl RuleId {
    pub const ALL: [RuleId; 5] =
        [RuleId::Beta, RuleId::Mu, RuleId::Renaming, RuleId::Erasing, RuleId::EtaMu];
    /// The rules covered by the typing results.
    pub const TYPED: [RuleId; 3] = [RuleId::Beta, RuleId::Mu, RuleId::Renaming];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Beta => "beta",
            RuleId::Mu => "mu",
            RuleId::Renaming => "renaming",
            RuleId::Erasing => "erasing",
            RuleId::EtaMu => "eta_mu",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// Path of child indices from the root. Abstraction and μ bodies are child
/// 0; an application has its function at 0 and its argument at 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Prefixes this position with `outer`.
    pub fn under(&self, outer: &Position) -> Position {
        Position(outer.0.iter().chain(&self.0).copied().collect())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rest = s.strip_prefix('/').ok_or_else(|| format!("bad position `{s}`"))?;
        if rest.is_empty() {
            return Ok(Position::root());
        }
        rest.split('/')
            .map(|c| c.parse::<usize>().map_err(|_| format!("bad position `{s}`")))
            .collect::<Result<_, _>>()
            .map(Position)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("no {rule} redex at {position}")]
    NotARedex { position: Position, rule: RuleId },
    #[error("position {0} does not address a subterm")]
    InvalidPosition(Position),
    #[error("name {gamma} is not fresh for structural substitution of {alpha}")]
    FreshnessViolation { alpha: Name, gamma: Name },
}

pub fn subterm_at<'a>(term: &'a Term, at: &Position) -> Option<&'a Term> {
    at.0.iter().try_fold(term, |t, &i| t.children().get(i).copied())
}

/// Replaces the subterm at `at` by `new`.
pub fn replace_at(term: &Term, at: &[usize], new: Term) -> Option<Term> {
    let Some((&i, rest)) = at.split_first() else {
        return Some(new);
    };
    Some(match (term, i) {
        (Term::Abs(x, b), 0) => Term::Abs(x.clone(), Box::new(replace_at(b, rest, new)?)),
        (Term::Mu(a, n, b), 0) => Term::Mu(a.clone(), n.clone(), Box::new(replace_at(b, rest, new)?)),
        (Term::App(f, a), 0) => Term::App(Box::new(replace_at(f, rest, new)?), a.clone()),
        (Term::App(f, a), 1) => Term::App(f.clone(), Box::new(replace_at(a, rest, new)?)),
        _ => return None,
    })
}

/// Capture-avoiding `M[N/x]`.
pub fn subst_term(m: &Term, x: &Var, n: &Term) -> Term {
    let fv_n = free_term_vars(n);
    let fn_n = free_names(n);
    subst_term_with(m, x, n, &fv_n, &fn_n)
}

fn subst_term_with(
    m: &Term,
    x: &Var,
    n: &Term,
    fv_n: &BTreeSet<Var>,
    fn_n: &BTreeSet<Name>,
) -> Term {
    match m {
        Term::Var(y) if y == x => n.clone(),
        Term::Var(_) => m.clone(),
        Term::App(f, a) => {
            Term::app(subst_term_with(f, x, n, fv_n, fn_n), subst_term_with(a, x, n, fv_n, fn_n))
        }
        Term::Abs(y, _) if y == x => m.clone(),
        Term::Abs(_, b) if !free_term_vars(b).contains(x) => m.clone(),
        Term::Abs(y, b) => {
            let (y, b) = if fv_n.contains(y) {
                let mut avoid = fv_n.clone();
                avoid.extend(free_term_vars(b));
                avoid.insert(x.clone());
                let y2 = fresh_var(&avoid, y);
                let b2 = subst_term(b, y, &Term::Var(y2.clone()));
                (y2, b2)
            } else {
                (y.clone(), (**b).clone())
            };
            Term::Abs(y, Box::new(subst_term_with(&b, x, n, fv_n, fn_n)))
        }
        Term::Mu(_, _, b) if !free_term_vars(b).contains(x) => m.clone(),
        Term::Mu(a, c, b) => {
            let (a, c, b) = if fn_n.contains(a) {
                let mut avoid = fn_n.clone();
                avoid.extend(free_names(b));
                avoid.insert(c.clone());
                let a2 = fresh_name(&avoid, a);
                let c2 = if c == a { a2.clone() } else { c.clone() };
                (a2.clone(), c2, rename_name(b, a, &a2))
            } else {
                (a.clone(), c.clone(), (**b).clone())
            };
            Term::Mu(a, c, Box::new(subst_term_with(&b, x, n, fv_n, fn_n)))
        }
    }
}

/// `M[β/γ]`: every free named occurrence `[γ]` becomes `[β]`.
pub fn rename_name(m: &Term, gamma: &Name, beta: &Name) -> Term {
    match m {
        Term::Var(_) => m.clone(),
        Term::Abs(x, b) => Term::Abs(x.clone(), Box::new(rename_name(b, gamma, beta))),
        Term::App(f, a) => Term::app(rename_name(f, gamma, beta), rename_name(a, gamma, beta)),
        Term::Mu(d, _, _) if d == gamma => m.clone(),
        Term::Mu(d, e, b) => {
            let (d, e, b) = if d == beta && free_names(m).contains(gamma) {
                let mut avoid = free_names(b);
                avoid.insert(beta.clone());
                avoid.insert(gamma.clone());
                avoid.insert(e.clone());
                let d2 = fresh_name(&avoid, d);
                let e2 = if e == d { d2.clone() } else { e.clone() };
                (d2.clone(), e2, rename_name(b, d, &d2))
            } else {
                (d.clone(), e.clone(), (**b).clone())
            };
            let e = if &e == gamma { beta.clone() } else { e };
            Term::Mu(d, e, Box::new(rename_name(&b, gamma, beta)))
        }
    }
}

/// `M[N·γ/α]`: every free named subterm `[α]P` becomes `[γ](P N)`.
pub fn subst_structural(
    m: &Term,
    alpha: &Name,
    n: &Term,
    gamma: &Name,
) -> Result<Term, ReductionError> {
    if alpha == gamma || free_names(m).contains(gamma) || free_names(n).contains(gamma) {
        return Err(ReductionError::FreshnessViolation { alpha: alpha.clone(), gamma: gamma.clone() });
    }
    let fv_n = free_term_vars(n);
    let fn_n = free_names(n);
    Ok(structural(m, alpha, n, gamma, &fv_n, &fn_n))
}

fn structural(
    m: &Term,
    alpha: &Name,
    n: &Term,
    gamma: &Name,
    fv_n: &BTreeSet<Var>,
    fn_n: &BTreeSet<Name>,
) -> Term {
    let go = |t: &Term| structural(t, alpha, n, gamma, fv_n, fn_n);
    match m {
        Term::Var(_) => m.clone(),
        Term::App(f, a) => Term::app(go(f), go(a)),
        Term::Abs(_, b) if !free_names(b).contains(alpha) => m.clone(),
        Term::Abs(y, b) => {
            if fv_n.contains(y) {
                let mut avoid = fv_n.clone();
                avoid.extend(free_term_vars(b));
                let y2 = fresh_var(&avoid, y);
                let b2 = subst_term(b, y, &Term::Var(y2.clone()));
                Term::Abs(y2, Box::new(go(&b2)))
            } else {
                Term::Abs(y.clone(), Box::new(go(b)))
            }
        }
        Term::Mu(d, _, _) if d == alpha => m.clone(),
        Term::Mu(_, _, _) if !free_names(m).contains(alpha) => m.clone(),
        Term::Mu(d, b, body) => {
            let (d, b, body) = if fn_n.contains(d) || d == gamma {
                let mut avoid = fn_n.clone();
                avoid.extend(free_names(body));
                avoid.insert(gamma.clone());
                avoid.insert(alpha.clone());
                avoid.insert(b.clone());
                let d2 = fresh_name(&avoid, d);
                let b2 = if b == d { d2.clone() } else { b.clone() };
                (d2.clone(), b2, rename_name(body, d, &d2))
            } else {
                (d.clone(), b.clone(), (**body).clone())
            };
            if &b == alpha {
                Term::Mu(d, gamma.clone(), Box::new(Term::app(go(&body), n.clone())))
            } else {
                Term::Mu(d, b, Box::new(go(&body)))
            }
        }
    }
}

fn rule_applies(term: &Term, rule: RuleId) -> bool {
    match (rule, term) {
        (RuleId::Beta, Term::App(f, _)) => matches!(**f, Term::Abs(..)),
        (RuleId::Mu, Term::App(f, _)) => matches!(**f, Term::Mu(..)),
        (RuleId::Renaming, Term::Mu(_, _, b)) => matches!(**b, Term::Mu(..)),
        (RuleId::Erasing, Term::Mu(a, b, body)) => a == b && !free_names(body).contains(a),
        (RuleId::EtaMu, Term::Mu(..)) => true,
        _ => false,
    }
}

/// All redexes of the enabled rules, in leftmost-outermost order.
pub fn redexes(term: &Term, enabled: &[RuleId]) -> Vec<(Position, RuleId)> {
    fn go(t: &Term, enabled: &[RuleId], at: &Position, out: &mut Vec<(Position, RuleId)>) {
        for rule in RuleId::ALL {
            if enabled.contains(&rule) && rule_applies(t, rule) {
                out.push((at.clone(), rule));
            }
        }
        for (i, c) in t.children().into_iter().enumerate() {
            go(c, enabled, &at.child(i), out);
        }
    }
    let mut out = Vec::new();
    go(term, enabled, &Position::root(), &mut out);
    out
}

/// Contracts a redex at the root.
pub fn contract(term: &Term, rule: RuleId) -> Option<Term> {
    if !rule_applies(term, rule) {
        return None;
    }
    Some(match (rule, term) {
        (RuleId::Beta, Term::App(f, n)) => match &**f {
            Term::Abs(x, m) => subst_term(m, x, n),
            _ => unreachable!(),
        },
        (RuleId::Mu, Term::App(f, n)) => match &**f {
            Term::Mu(alpha, beta, m) => named_structural(alpha, beta, m, n, &BTreeSet::new()).0,
            _ => unreachable!(),
        },
        (RuleId::Renaming, Term::Mu(alpha, beta, inner)) => match &**inner {
            Term::Mu(gamma, delta, m) => {
                let delta = if delta == gamma { beta.clone() } else { delta.clone() };
                Term::Mu(alpha.clone(), delta, Box::new(rename_name(m, gamma, beta)))
            }
            _ => unreachable!(),
        },
        (RuleId::Erasing, Term::Mu(_, _, m)) => (**m).clone(),
        (RuleId::EtaMu, Term::Mu(alpha, beta, m)) => {
            let x = fresh_var(&m.all_vars(), &Var::new("x"));
            let arg = Term::Var(x.clone());
            let (body, _) = named_structural(alpha, beta, m, &arg, &BTreeSet::new());
            Term::Abs(x, Box::new(body))
        }
        _ => unreachable!(),
    })
}

/// `μγ.([β]M)[N·γ/α]` for a fresh `γ`; also returns `γ`.
pub fn named_structural(
    alpha: &Name,
    beta: &Name,
    m: &Term,
    n: &Term,
    avoid: &BTreeSet<Name>,
) -> (Term, Name) {
    let mut taken = avoid.clone();
    taken.extend(m.all_names());
    taken.extend(free_names(n));
    taken.insert(alpha.clone());
    taken.insert(beta.clone());
    let gamma = fresh_name(&taken, alpha);
    let body = subst_structural(m, alpha, n, &gamma).expect("gamma chosen fresh");
    let term = if beta == alpha {
        Term::Mu(gamma.clone(), gamma.clone(), Box::new(Term::app(body, n.clone())))
    } else {
        Term::Mu(gamma.clone(), beta.clone(), Box::new(body))
    };
    (term, gamma)
}

pub fn step(term: &Term, at: &Position, rule: RuleId) -> Result<Term, ReductionError> {
    let sub = subterm_at(term, at).ok_or_else(|| ReductionError::InvalidPosition(at.clone()))?;
    let reduced = contract(sub, rule)
        .ok_or_else(|| ReductionError::NotARedex { position: at.clone(), rule })?;
    Ok(replace_at(term, &at.0, reduced).expect("position checked"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub position: Position,
    pub rule: RuleId,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    pub initial: Term,
    pub steps: Vec<TraceStep>,
    pub fuel_exhausted: bool,
}

impl ReductionTrace {
    pub fn final_term(&self) -> &Term {
        self.steps.last().map_or(&self.initial, |s| &s.term)
    }

    /// One line per step: `<position-path> <rule> ~> <printed term>`.
    pub fn to_text(&self) -> String {
        self.steps
            .iter()
            .map(|s| format!("{} {} ~> {}\n", s.position, s.rule, s.term))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReductionStrategy {
    #[default]
    LeftmostOutermost,
}

pub fn normalize(term: &Term, enabled: &[RuleId], strategy: ReductionStrategy, fuel: usize) -> ReductionTrace {
    let ReductionStrategy::LeftmostOutermost = strategy;
    let mut trace = ReductionTrace { initial: term.clone(), steps: Vec::new(), fuel_exhausted: false };
    let mut current = term.clone();
    loop {
        let Some((position, rule)) = redexes(&current, enabled).into_iter().next() else {
            return trace;
        };
        if trace.steps.len() >= fuel {
            trace.fuel_exhausted = true;
            return trace;
        }
        current = step(&current, &position, rule).expect("redex reported");
        trace.steps.push(TraceStep { position, rule, term: current.clone() });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_term;
    use crate::syntax::alpha_eq;
    use proptest::prelude::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    #[test]
    fn subst_term_examples() {
        let big = t("u v");
        assert_eq!(subst_term(&t("\\y.x"), &Var::new("x"), &big), t("\\y.u v"));
        assert_eq!(subst_term(&t("\\y.y"), &Var::new("y"), &big), t("\\y.y"));
        // capture: the bound y must be renamed away from the incoming free y
        let r = subst_term(&t("\\y.x y"), &Var::new("x"), &t("y"));
        assert_eq!(r, t("\\y'.y y'"));
    }

    #[test]
    fn structural_examples() {
        let nn = t("u");
        let g = n("g");
        let a = n("a");
        assert_eq!(subst_structural(&t("x"), &a, &nn, &g).unwrap(), t("x"));
        assert_eq!(subst_structural(&t("mu d.[a] x"), &a, &nn, &g).unwrap(), t("mu d.[g] x u"));
        assert_eq!(subst_structural(&t("mu d.[b] x"), &a, &nn, &g).unwrap(), t("mu d.[b] x"));
        assert!(matches!(
            subst_structural(&t("mu d.[g] x"), &a, &nn, &g),
            Err(ReductionError::FreshnessViolation { .. })
        ));
        assert!(subst_structural(&t("x"), &a, &nn, &a).is_err());
    }

    #[test]
    fn structural_avoids_capture() {
        // N mentions the bound d, so the inner binder must move
        let r = subst_structural(&t("mu d.[a] x"), &n("a"), &t("mu e.[d] y"), &n("g")).unwrap();
        assert!(alpha_eq(&r, &t("mu d'.[g] x (mu e.[d] y)")));
        let r = subst_structural(&t("\\y. mu d.[a] y"), &n("a"), &t("y"), &n("g")).unwrap();
        assert!(alpha_eq(&r, &t("\\z. mu d.[g] z y")));
    }

    #[test]
    fn rename_examples() {
        let (g, b) = (n("g"), n("b"));
        assert_eq!(rename_name(&t("mu d.[g] x"), &g, &b), t("mu d.[b] x"));
        assert_eq!(rename_name(&t("x"), &g, &b), t("x"));
        assert_eq!(rename_name(&t("mu g.[g] x"), &g, &b), t("mu g.[g] x"));
        // a binder named b is renamed so the new [b] is not captured
        let r = rename_name(&t("mu b.[g] mu e.[b] x"), &g, &b);
        assert!(alpha_eq(&r, &t("mu c.[b] mu e.[c] x")));
    }

    #[test]
    fn redex_examples() {
        assert_eq!(redexes(&t("(\\x.x) y"), &[RuleId::Beta]), vec![(Position::root(), RuleId::Beta)]);
        assert_eq!(redexes(&t("(mu a.[a] x) u"), &[RuleId::Mu]), vec![(Position::root(), RuleId::Mu)]);
        assert_eq!(
            redexes(&t("mu a.[b] mu g.[d] x"), &[RuleId::Renaming]),
            vec![(Position::root(), RuleId::Renaming)]
        );
        assert!(redexes(&t("mu a.[a] x (mu b.[a] y)"), &[RuleId::Erasing]).is_empty());
        assert_eq!(redexes(&t("mu a.[a] x"), &[RuleId::Erasing]).len(), 1);
    }

    #[test]
    fn step_examples() {
        let root = Position::root();
        assert_eq!(step(&t("(\\x.x) y"), &root, RuleId::Beta).unwrap(), t("y"));
        let r = step(&t("(mu a.[a] x) u"), &root, RuleId::Mu).unwrap();
        assert!(alpha_eq(&r, &t("mu g.[g] x u")));
        let r = step(&t("mu a.[b] mu g.[d] x"), &root, RuleId::Renaming).unwrap();
        assert_eq!(r, t("mu a.[d] x"));
        let r = step(&t("mu a.[b] mu g.[g] x"), &root, RuleId::Renaming).unwrap();
        assert_eq!(r, t("mu a.[b] x"));
        assert!(matches!(
            step(&t("x"), &root, RuleId::Beta),
            Err(ReductionError::NotARedex { .. })
        ));
        let r = step(&t("mu a.[b] x"), &root, RuleId::EtaMu).unwrap();
        assert!(alpha_eq(&r, &t("\\y. mu g.[b] x")));
        let r = step(&t("mu a.[a] x"), &root, RuleId::EtaMu).unwrap();
        assert!(alpha_eq(&r, &t("\\y. mu g.[g] x y")));
    }

    #[test]
    fn mu_rule_with_different_outer_name() {
        // (μα.[β](x (μδ.[α]y))) N → μγ.[β](x (μδ.[γ](y N)))
        let r = step(&t("(mu a.[b] x (mu d.[a] y)) u"), &Position::root(), RuleId::Mu).unwrap();
        assert!(alpha_eq(&r, &t("mu g.[b] x (mu d.[g] y u)")));
    }

    #[test]
    fn normalize_examples() {
        let tr = normalize(&t("(\\x.x)((\\y.y) z)"), &[RuleId::Beta], ReductionStrategy::default(), 100);
        assert_eq!(tr.steps.len(), 2);
        assert_eq!(tr.final_term(), &t("z"));
        assert!(!tr.fuel_exhausted);
        let tr = normalize(&t("(\\x.x x)(\\x.x x)"), &[RuleId::Beta], ReductionStrategy::default(), 10);
        assert_eq!(tr.steps.len(), 10);
        assert!(tr.fuel_exhausted);
    }

    #[test]
    fn peirce_applied() {
        let term = t("(\\z. mu a.[a] z (\\y. mu b.[a] y)) (\\k.v)");
        let tr = normalize(&term, &RuleId::TYPED, ReductionStrategy::default(), 100);
        assert!(alpha_eq(tr.final_term(), &t("mu a.[a] v")));
        let tr = normalize(&term, &RuleId::ALL[..4], ReductionStrategy::default(), 100);
        assert_eq!(tr.final_term(), &t("v"));
        // each recorded step is reproducible from the previous term
        let mut prev = tr.initial.clone();
        for s in &tr.steps {
            assert_eq!(step(&prev, &s.position, s.rule).unwrap(), s.term);
            prev = s.term.clone();
        }
    }

    #[test]
    fn trace_text() {
        let tr = normalize(&t("(\\x.x) ((\\y.y) z)"), &[RuleId::Beta], ReductionStrategy::default(), 100);
        assert_eq!(tr.to_text(), "/ beta ~> (\\y.y) z\n/ beta ~> z\n");
        assert_eq!("/0/1".parse::<Position>().unwrap(), Position(vec![0, 1]));
        assert_eq!(Position(vec![0, 1]).to_string(), "/0/1");
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(Term::var);
        leaf.prop_recursive(5, 40, 2, |inner| {
            let v = prop_oneof![Just("x"), Just("y"), Just("z")];
            let nm = || prop_oneof![Just("a"), Just("b"), Just("g")];
            prop_oneof![
                (v, inner.clone()).prop_map(|(x, b)| Term::abs(x, b)),
                (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
                (nm(), nm(), inner).prop_map(|(a, b, m)| Term::mu(a, b, m)),
            ]
        })
    }

    fn arb_context() -> impl Strategy<Value = Term> {
        arb_term()
    }

    proptest! {
        #[test]
        fn structural_free_names(m in arb_term(), nn in arb_term()) {
            let a = n("a");
            let g = fresh_name(&m.all_names().union(&nn.all_names()).cloned().collect(), &n("g"));
            let r = subst_structural(&m, &a, &nn, &g).unwrap();
            let mut bound: BTreeSet<Name> = free_names(&m);
            let was_free = bound.remove(&a);
            bound.extend(free_names(&nn));
            if was_free { bound.insert(g.clone()); }
            prop_assert!(free_names(&r).is_subset(&bound));
            prop_assert!(!free_names(&r).contains(&a) || free_names(&nn).contains(&a));
        }

        #[test]
        fn step_is_deterministic(m in arb_term()) {
            for (p, r) in redexes(&m, &RuleId::ALL) {
                let s1 = step(&m, &p, r).unwrap();
                let s2 = step(&m.clone(), &p, r).unwrap();
                prop_assert!(alpha_eq(&s1, &s2));
            }
        }

        #[test]
        fn compatible_closure(m in arb_term(), ctx in arb_context(), pick in 0usize..64) {
            // use some leaf of ctx as the hole
            let holes: Vec<Position> = positions(&ctx).into_iter()
                .filter(|p| matches!(subterm_at(&ctx, p), Some(Term::Var(_)))).collect();
            let hole = &holes[pick % holes.len()];
            let whole = replace_at(&ctx, &hole.0, m.clone()).unwrap();
            for (p, r) in redexes(&m, &RuleId::ALL) {
                let inner = step(&m, &p, r).unwrap();
                let shifted = p.under(hole);
                prop_assert!(redexes(&whole, &[r]).contains(&(shifted.clone(), r)));
                let outer = step(&whole, &shifted, r).unwrap();
                prop_assert_eq!(outer, replace_at(&ctx, &hole.0, inner).unwrap());
            }
        }

        #[test]
        fn erasing_side_condition(m in arb_term()) {
            for (p, r) in redexes(&m, &[RuleId::Erasing]) {
                if let Some(Term::Mu(a, _, body)) = subterm_at(&m, &p) {
                    prop_assert!(!free_names(body).contains(a));
                } else {
                    prop_assert!(false, "erasing redex at non-mu {}", r);
                }
            }
        }
    }

    fn positions(t: &Term) -> Vec<Position> {
        let mut out = vec![Position::root()];
        for (i, c) in t.children().into_iter().enumerate() {
            out.extend(positions(c).into_iter().map(|p| p.under(&Position(vec![i]))));
        }
        out
    }
}
