//! Simple types for λμ: rules Ax, →I, →E and μ, with checking and
//! unification-based inference sharing one constraint engine.
//!
//! The μ rule has two shapes. For `μα.[β]M` with `β ≠ α` the premise is
//! `Γ ⊢ M : B | α:A, β:B, Δ` and the conclusion `Γ ⊢ μα.[β]M : A | β:B, Δ`;
//! for `μα.[α]M` the premise is `Γ ⊢ M : A | α:A, Δ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::print_judgment;
use crate::iu_types::{Derivation, Judgment, Rule, Side};
use crate::syntax::{free_names, free_term_vars, Name, Term, Var};
use crate::typelang::{well_formed, Language, LeftEnv, RightEnv, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleRule {
    Ax,
    ArrowI,
    ArrowE,
    Mu,
}

impl fmt::Display for SimpleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimpleRule::Ax => "Ax",
            SimpleRule::ArrowI => "->I",
            SimpleRule::ArrowE => "->E",
            SimpleRule::Mu => "mu",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleJudgment {
    pub gamma: LeftEnv,
    pub term: Term,
    pub ty: Type,
    pub delta: RightEnv,
}

impl SimpleJudgment {
    pub fn new(gamma: LeftEnv, term: Term, ty: Type, delta: RightEnv) -> Self {
        SimpleJudgment { gamma, term, ty, delta }
    }

    pub fn is_well_formed(&self) -> bool {
        let ok = |t: &Type| well_formed(t, Language::Curry);
        ok(&self.ty) && self.gamma.values().all(ok) && self.delta.values().all(ok)
    }
}

impl fmt::Display for SimpleJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_judgment(&self.gamma, &self.term, &self.ty, &self.delta))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleDerivation {
    pub rule: SimpleRule,
    pub conclusion: SimpleJudgment,
    pub premises: Vec<SimpleDerivation>,
}

impl SimpleDerivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(SimpleDerivation::size).sum::<usize>()
    }

    /// The tree with one conclusion per line, premises indented below.
    pub fn render(&self) -> String {
        fn go(d: &SimpleDerivation, depth: usize, out: &mut String) {
            out.push_str(&format!("{}({}) {}\n", "  ".repeat(depth), d.rule, d.conclusion));
            for p in &d.premises {
                go(p, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureReason {
    Malformed,
    Unbound(String),
    Clash { left: String, right: String },
    Occurs { meta: String, ty: String },
    BottomArrow(String),
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::Malformed => f.write_str("judgment is not well formed for simple types"),
            FailureReason::Unbound(x) => write!(f, "{x} has no type in the environment"),
            FailureReason::Clash { left, right } => write!(f, "cannot unify {left} with {right}"),
            FailureReason::Occurs { meta, ty } => write!(f, "occurs check: {meta} in {ty}"),
            FailureReason::BottomArrow(t) => write!(f, "bot on the left of an arrow in {t}"),
        }
    }
}

/// The first rule that could not be applied, with its judgment printed
/// using `?n` for unsolved unknowns.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("rule ({rule}) fails at `{judgment}`: {reason}")]
pub struct SimpleTypeError {
    pub rule: SimpleRule,
    pub judgment: String,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum UTy {
    Meta(usize),
    Var(String),
    Bot,
    Arrow(Box<UTy>, Box<UTy>),
}

impl UTy {
    fn arrow(a: UTy, b: UTy) -> UTy {
        UTy::Arrow(Box::new(a), Box::new(b))
    }

    fn from_type(t: &Type) -> UTy {
        match t {
            Type::Var(v) => UTy::Var(v.clone()),
            Type::Arrow(a, b) => UTy::arrow(UTy::from_type(a), UTy::from_type(b)),
            _ => UTy::Bot,
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    rule: SimpleRule,
    gamma: BTreeMap<Var, UTy>,
    term: Term,
    ty: UTy,
    delta: BTreeMap<Name, UTy>,
    premises: Vec<Node>,
}

#[derive(Default)]
struct Engine {
    solution: Vec<Option<UTy>>,
}

impl Engine {
    fn fresh(&mut self) -> UTy {
        self.solution.push(None);
        UTy::Meta(self.solution.len() - 1)
    }

    fn shallow(&self, t: &UTy) -> UTy {
        let mut t = t.clone();
        while let UTy::Meta(m) = t {
            match &self.solution[m] {
                Some(s) => t = s.clone(),
                None => break,
            }
        }
        t
    }

    fn resolve(&self, t: &UTy) -> UTy {
        match self.shallow(t) {
            UTy::Arrow(a, b) => UTy::arrow(self.resolve(&a), self.resolve(&b)),
            other => other,
        }
    }

    fn occurs(&self, m: usize, t: &UTy) -> bool {
        match self.shallow(t) {
            UTy::Meta(n) => n == m,
            UTy::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            _ => false,
        }
    }

    fn show(&self, t: &UTy) -> String {
        match self.resolve(t) {
            UTy::Meta(m) => format!("?{m}"),
            UTy::Var(v) => v,
            UTy::Bot => "bot".into(),
            UTy::Arrow(a, b) => {
                let left = match *a {
                    UTy::Arrow(..) => format!("({})", self.show(&a)),
                    _ => self.show(&a),
                };
                format!("{left} -> {}", self.show(&b))
            }
        }
    }

    fn unify(&mut self, a: &UTy, b: &UTy) -> Result<(), FailureReason> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (UTy::Meta(m), UTy::Meta(n)) if m == n => Ok(()),
            (UTy::Meta(m), t) | (t, UTy::Meta(m)) => {
                if self.occurs(*m, t) {
                    return Err(FailureReason::Occurs { meta: format!("?{m}"), ty: self.show(t) });
                }
                self.solution[*m] = Some(t.clone());
                Ok(())
            }
            (UTy::Var(x), UTy::Var(y)) if x == y => Ok(()),
            (UTy::Bot, UTy::Bot) => Ok(()),
            (UTy::Arrow(a1, b1), UTy::Arrow(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ => Err(FailureReason::Clash { left: self.show(&a), right: self.show(&b) }),
        }
    }

    fn show_judgment(
        &self,
        gamma: &BTreeMap<Var, UTy>,
        term: &Term,
        ty: &UTy,
        delta: &BTreeMap<Name, UTy>,
    ) -> String {
        let g: Vec<String> = gamma.iter().map(|(x, t)| format!("{x}:{}", self.show(t))).collect();
        let d: Vec<String> = delta.iter().map(|(a, t)| format!("{a}:{}", self.show(t))).collect();
        let g = if g.is_empty() { String::new() } else { g.join(", ") + " " };
        let d = if d.is_empty() { String::new() } else { format!(" {}", d.join(", ")) };
        format!("{g}|- {term} : {} |{d}", self.show(ty))
    }

    fn fail(
        &self,
        rule: SimpleRule,
        gamma: &BTreeMap<Var, UTy>,
        term: &Term,
        ty: &UTy,
        delta: &BTreeMap<Name, UTy>,
        reason: FailureReason,
    ) -> SimpleTypeError {
        SimpleTypeError { rule, judgment: self.show_judgment(gamma, term, ty, delta), reason }
    }

    /// Builds the derivation of `Γ ⊢ term : ty | Δ`, unifying as it goes.
    fn build(
        &mut self,
        gamma: &BTreeMap<Var, UTy>,
        term: &Term,
        ty: UTy,
        delta: &BTreeMap<Name, UTy>,
    ) -> Result<Node, SimpleTypeError> {
        let node = |rule, premises| Node {
            rule,
            gamma: gamma.clone(),
            term: term.clone(),
            ty: ty.clone(),
            delta: delta.clone(),
            premises,
        };
        match term {
            Term::Var(x) => {
                let Some(tx) = gamma.get(x).cloned() else {
                    let reason = FailureReason::Unbound(x.to_string());
                    return Err(self.fail(SimpleRule::Ax, gamma, term, &ty, delta, reason));
                };
                self.unify(&tx, &ty)
                    .map_err(|r| self.fail(SimpleRule::Ax, gamma, term, &ty, delta, r))?;
                Ok(node(SimpleRule::Ax, vec![]))
            }
            Term::Abs(x, body) => {
                let (a, b) = (self.fresh(), self.fresh());
                self.unify(&UTy::arrow(a.clone(), b.clone()), &ty)
                    .map_err(|r| self.fail(SimpleRule::ArrowI, gamma, term, &ty, delta, r))?;
                let mut inner = gamma.clone();
                inner.insert(x.clone(), a);
                let p = self.build(&inner, body, b, delta)?;
                Ok(node(SimpleRule::ArrowI, vec![p]))
            }
            Term::App(f, arg) => {
                let a = self.fresh();
                let pf = self.build(gamma, f, UTy::arrow(a.clone(), ty.clone()), delta)?;
                let pa = self.build(gamma, arg, a, delta)?;
                Ok(node(SimpleRule::ArrowE, vec![pf, pa]))
            }
            Term::Mu(alpha, beta, body) => {
                let mut inner = delta.clone();
                inner.insert(alpha.clone(), ty.clone());
                let body_ty = if alpha == beta {
                    ty.clone()
                } else {
                    match delta.get(beta) {
                        Some(b) => b.clone(),
                        None => {
                            let reason = FailureReason::Unbound(beta.to_string());
                            return Err(self.fail(SimpleRule::Mu, gamma, term, &ty, delta, reason));
                        }
                    }
                };
                let p = self.build(gamma, body, body_ty, &inner)?;
                Ok(node(SimpleRule::Mu, vec![p]))
            }
        }
    }

    /// Resolves a node, naming leftover unknowns with `name_of`.
    fn finish(&self, node: &Node, name_of: &mut impl FnMut(usize) -> String) -> SimpleDerivation {
        let mut ty = |t: &UTy| self.to_type(t, name_of);
        let conclusion = SimpleJudgment {
            gamma: node.gamma.iter().map(|(k, t)| (k.clone(), ty(t))).collect(),
            term: node.term.clone(),
            ty: ty(&node.ty),
            delta: node.delta.iter().map(|(k, t)| (k.clone(), ty(t))).collect(),
        };
        SimpleDerivation {
            rule: node.rule,
            conclusion,
            premises: node.premises.iter().map(|p| self.finish(p, name_of)).collect(),
        }
    }

    fn to_type(&self, t: &UTy, name_of: &mut impl FnMut(usize) -> String) -> Type {
        match self.resolve(t) {
            UTy::Meta(m) => Type::Var(name_of(m)),
            UTy::Var(v) => Type::Var(v),
            UTy::Bot => Type::Bottom,
            UTy::Arrow(a, b) => Type::arrow(self.to_type(&a, name_of), self.to_type(&b, name_of)),
        }
    }

    fn bottom_arrow(&self, node: &Node) -> Option<(SimpleRule, String, String)> {
        let mut bad = |t: &UTy| has_bottom_left(&self.resolve(t));
        let here = bad(&node.ty) || node.gamma.values().any(&mut bad) || node.delta.values().any(bad);
        if here {
            let j = self.show_judgment(&node.gamma, &node.term, &node.ty, &node.delta);
            return Some((node.rule, j.clone(), j));
        }
        node.premises.iter().find_map(|p| self.bottom_arrow(p))
    }
}

fn has_bottom_left(t: &UTy) -> bool {
    match t {
        UTy::Arrow(a, b) => **a == UTy::Bot || has_bottom_left(a) || has_bottom_left(b),
        _ => false,
    }
}

fn letter_name(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

fn check_bottom(engine: &Engine, root: &Node) -> Result<(), SimpleTypeError> {
    match engine.bottom_arrow(root) {
        Some((rule, judgment, shown)) => Err(SimpleTypeError {
            rule,
            judgment,
            reason: FailureReason::BottomArrow(shown),
        }),
        None => Ok(()),
    }
}

/// Checks `Γ ⊢ M : A | Δ` and returns its derivation. Type variables in the
/// judgment are rigid; intermediate types are solved by unification, and
/// any left unconstrained are given fresh type-variable names.
pub fn check_simple(j: &SimpleJudgment) -> Result<SimpleDerivation, SimpleTypeError> {
    if !j.is_well_formed() {
        return Err(SimpleTypeError {
            rule: SimpleRule::Ax,
            judgment: j.to_string(),
            reason: FailureReason::Malformed,
        });
    }
    let mut engine = Engine::default();
    let gamma: BTreeMap<Var, UTy> = j.gamma.iter().map(|(k, t)| (k.clone(), UTy::from_type(t))).collect();
    let delta: BTreeMap<Name, UTy> = j.delta.iter().map(|(k, t)| (k.clone(), UTy::from_type(t))).collect();
    let root = engine.build(&gamma, &j.term, UTy::from_type(&j.ty), &delta)?;
    check_bottom(&engine, &root)?;
    let mut vars = Vec::new();
    for t in j.gamma.values().chain(j.delta.values()).chain([&j.ty]) {
        t.type_vars(&mut vars);
    }
    let taken: BTreeSet<String> = vars.into_iter().collect();
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut counter = 0;
    let mut name_of = |m: usize| {
        names
            .entry(m)
            .or_insert_with(|| loop {
                let candidate = format!("T{counter}");
                counter += 1;
                if !taken.contains(&candidate) {
                    break candidate;
                }
            })
            .clone()
    };
    Ok(engine.finish(&root, &mut name_of))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleTyping {
    pub gamma: LeftEnv,
    pub ty: Type,
    pub delta: RightEnv,
    pub derivation: SimpleDerivation,
}

impl SimpleTyping {
    pub fn judgment(&self) -> SimpleJudgment {
        self.derivation.conclusion.clone()
    }
}

/// Principal simple typing of `M`: one unknown per free variable, free
/// name and subterm occurrence, solved by first-order unification. Type
/// variables are named `A`, `B`, ... in order of appearance in the type,
/// then in Γ, then in Δ.
pub fn infer_simple(term: &Term) -> Result<SimpleTyping, SimpleTypeError> {
    let mut engine = Engine::default();
    let gamma: BTreeMap<Var, UTy> = free_term_vars(term).into_iter().map(|x| (x, engine.fresh())).collect();
    let delta: BTreeMap<Name, UTy> = free_names(term).into_iter().map(|a| (a, engine.fresh())).collect();
    let ty = engine.fresh();
    let root = engine.build(&gamma, term, ty.clone(), &delta)?;
    check_bottom(&engine, &root)?;
    let mut order: Vec<usize> = Vec::new();
    for t in std::iter::once(&ty).chain(gamma.values()).chain(delta.values()) {
        collect_metas(&engine.resolve(t), &mut order);
    }
    let mut names: BTreeMap<usize, String> =
        order.iter().enumerate().map(|(i, m)| (*m, letter_name(i))).collect();
    let mut next = order.len();
    let mut name_of = |m: usize| {
        names
            .entry(m)
            .or_insert_with(|| {
                next += 1;
                letter_name(next - 1)
            })
            .clone()
    };
    let derivation = engine.finish(&root, &mut name_of);
    Ok(SimpleTyping {
        gamma: derivation.conclusion.gamma.clone(),
        ty: derivation.conclusion.ty.clone(),
        delta: derivation.conclusion.delta.clone(),
        derivation,
    })
}

fn collect_metas(t: &UTy, out: &mut Vec<usize>) {
    match t {
        UTy::Meta(m) if !out.contains(m) => out.push(*m),
        UTy::Arrow(a, b) => {
            collect_metas(a, out);
            collect_metas(b, out);
        }
        _ => {}
    }
}

/// Validates a simple derivation node by node, without unification.
pub fn validate_simple(d: &SimpleDerivation) -> Result<(), String> {
    let c = &d.conclusion;
    let fail = |msg: &str| Err(format!("({}) at `{}`: {msg}", d.rule, c));
    if !c.is_well_formed() {
        return fail("not well formed");
    }
    let same_ctx = |p: &SimpleDerivation| p.conclusion.gamma == c.gamma && p.conclusion.delta == c.delta;
    match (d.rule, &c.term, d.premises.as_slice()) {
        (SimpleRule::Ax, Term::Var(x), []) => {
            if c.gamma.get(x) != Some(&c.ty) {
                return fail("x:A not in Γ");
            }
        }
        (SimpleRule::ArrowI, Term::Abs(x, body), [p]) => {
            let Type::Arrow(a, b) = &c.ty else { return fail("type is not an arrow") };
            let mut g = c.gamma.clone();
            g.insert(x.clone(), (**a).clone());
            let pc = &p.conclusion;
            if pc.gamma != g || pc.term != **body || pc.ty != **b || pc.delta != c.delta {
                return fail("premise does not match");
            }
        }
        (SimpleRule::ArrowE, Term::App(f, arg), [pf, pa]) => {
            let expected = Type::arrow(pa.conclusion.ty.clone(), c.ty.clone());
            if !same_ctx(pf) || !same_ctx(pa) || pf.conclusion.term != **f || pa.conclusion.term != **arg
                || pf.conclusion.ty != expected
            {
                return fail("premises do not match");
            }
        }
        (SimpleRule::Mu, Term::Mu(alpha, beta, body), [p]) => {
            let mut dl = c.delta.clone();
            dl.insert(alpha.clone(), c.ty.clone());
            let body_ty = if alpha == beta { Some(&c.ty) } else { c.delta.get(beta) };
            let pc = &p.conclusion;
            if body_ty != Some(&pc.ty) || pc.gamma != c.gamma || pc.term != **body || pc.delta != dl {
                return fail("premise does not match");
            }
        }
        _ => return fail("rule does not fit the term"),
    }
    d.premises.iter().try_for_each(validate_simple)
}

/// The same derivation in the intersection-union system: (Ax) becomes
/// (∩E) on a one-component assumption, (→E) uses a single arrow and (μ)
/// becomes the matching (∪E) variant with a one-component union.
pub fn embed_in_iu(d: &SimpleDerivation) -> Derivation {
    let c = &d.conclusion;
    let conclusion = Judgment::new(c.gamma.clone(), c.term.clone(), c.ty.clone(), c.delta.clone());
    let premises: Vec<Derivation> = d.premises.iter().map(embed_in_iu).collect();
    let (rule, side) = match (&d.rule, &c.term) {
        (SimpleRule::Ax, _) => (Rule::InterE, Side::Index(1)),
        (SimpleRule::ArrowI, _) => (Rule::ArrowI, Side::None),
        (SimpleRule::ArrowE, _) => (Rule::ArrowE, Side::None),
        (SimpleRule::Mu, Term::Mu(alpha, beta, _)) => {
            let premise = d.premises[0].conclusion.ty.clone();
            if alpha == beta {
                (Rule::UnionESelf, Side::Bound { premise, bound: c.ty.clone() })
            } else {
                (Rule::UnionENamed, Side::Bound { premise, bound: c.delta[beta].clone() })
            }
        }
        (SimpleRule::Mu, _) => unreachable!("validated derivations pair (μ) with μ-terms"),
    };
    Derivation::new(conclusion, rule, side, premises)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_judgment, parse_term, parse_type_any};

    fn judgment(s: &str) -> SimpleJudgment {
        let j = parse_judgment(s).unwrap();
        SimpleJudgment::new(j.gamma, j.term, j.ty, j.delta)
    }

    #[test]
    fn peirce_checks() {
        let j = judgment("|- \\x. mu a.[a] x (\\y. mu b.[a] y) : ((A -> B) -> A) -> A |");
        let d = check_simple(&j).unwrap();
        validate_simple(&d).unwrap();
        crate::iu_types::check_derivation(&embed_in_iu(&d)).unwrap();
        // ->I, mu, ->E, Ax, ->I, mu, Ax
        assert_eq!(d.size(), 7);
        let rules: Vec<SimpleRule> = {
            fn go(d: &SimpleDerivation, out: &mut Vec<SimpleRule>) {
                out.push(d.rule);
                d.premises.iter().for_each(|p| go(p, out));
            }
            let mut v = vec![];
            go(&d, &mut v);
            v
        };
        use SimpleRule::*;
        assert_eq!(rules, vec![ArrowI, Mu, ArrowE, Ax, ArrowI, Mu, Ax]);
        let inner = &d.premises[0].premises[0].premises[1].premises[0];
        assert_eq!(inner.conclusion.to_string(), "x:(A -> B) -> A, y:A |- mu b.[a] y : B | a:A");
    }

    #[test]
    fn double_negation_checks() {
        let j = judgment("|- \\y. mu a.[b] y (\\x. mu d.[a] x) : ((A -> bot) -> bot) -> A | b:bot");
        let d = check_simple(&j).unwrap();
        validate_simple(&d).unwrap();
        assert!(free_names(&j.term).contains(&Name::new("b")));
        crate::iu_types::check_derivation(&embed_in_iu(&d)).unwrap();
    }

    #[test]
    fn identity_rejected_at_ax() {
        let err = check_simple(&judgment("|- \\x.x : A -> B |")).unwrap_err();
        assert_eq!(err.rule, SimpleRule::Ax);
        assert!(matches!(err.reason, FailureReason::Clash { .. }));
    }

    #[test]
    fn bottom_left_of_arrow_rejected() {
        assert!(check_simple(&judgment("|- \\x.x : bot -> bot |")).is_err());
        // the unknown argument type would have to be bot
        let err = check_simple(&judgment("f:A -> A, y:bot |- f ((\\z.z) y) : A |"));
        assert!(err.is_err());
    }

    #[test]
    fn inference_examples() {
        let t = infer_simple(&parse_term("\\x.x").unwrap()).unwrap();
        assert_eq!(t.ty, parse_type_any("A -> A").unwrap());
        let err = infer_simple(&parse_term("\\x.x x").unwrap()).unwrap_err();
        assert!(matches!(err.reason, FailureReason::Occurs { .. }));
        let t = infer_simple(&parse_term("\\x. mu a.[a] x (\\y. mu b.[a] y)").unwrap()).unwrap();
        assert_eq!(t.ty, parse_type_any("((A -> B) -> A) -> A").unwrap());
        check_simple(&t.judgment()).unwrap();
    }

    #[test]
    fn inference_with_free_names() {
        let term = parse_term("\\y. mu a.[b] y (\\x. mu d.[a] x)").unwrap();
        let t = infer_simple(&term).unwrap();
        assert_eq!(t.delta.len(), 1);
        check_simple(&t.judgment()).unwrap();
        validate_simple(&t.derivation).unwrap();
    }

    #[test]
    fn leftover_unknowns_named() {
        let d = check_simple(&judgment("z:C |- (\\y.z) (\\w.w) : C |")).unwrap();
        validate_simple(&d).unwrap();
        assert_eq!(d.premises[1].conclusion.ty, parse_type_any("T0 -> T0").unwrap());
    }
}
