//! The intersection-union type assignment system `⊢` for λμ and the strict
//! intersection system for pure λ-terms.
//!
//! Derivations are explicit trees checked node by node by
//! [`check_derivation`]; [`derive`] and [`check_strict`] search for them
//! within a [`SearchBudget`]. Rules:
//!
//! ```text
//! (∩E)  Γ, x:A1∩…∩An ⊢ x : Ai | Δ
//! (∩I)  Γ ⊢ M : Ai | Δ (all i)          ⟹  Γ ⊢ M : A1∩…∩An | Δ     n ≠ 1
//! (→I)  Γ, x:A ⊢ M : B | Δ              ⟹  Γ ⊢ λx.M : A→B | Δ
//! (→E)  Γ ⊢ M : ∪(Ai→Bi) | Δ,  Γ ⊢ N : Ai | Δ (all i)
//!                                       ⟹  Γ ⊢ MN : B1∪…∪Bn | Δ   n ≥ 1
//! (∪E)  Γ ⊢ M : ∪Bm | β:∪An, α:B, Δ     ⟹  Γ ⊢ μα.[β]M : B | β:∪An, Δ
//!       Γ ⊢ M : ∪Bm | β:∪An, Δ          ⟹  Γ ⊢ μβ.[β]M : ∪An | Δ   ∪Bm ≤ ∪An
//! ```

mod certificate;
mod search;
mod transform;

pub use certificate::{from_certificate, to_certificate, CertificateError};
pub(crate) use search::{groupings, universe};
pub use search::{check_strict, derive, derive_with, invert, InversionCandidate, SearchBudget};
pub use transform::{inter_elim, project, rebase, thin, thin_node, weaken, weaken_node};

use std::fmt;

use thiserror::Error;

use crate::grammar::print_judgment;
use crate::syntax::{free_names, free_term_vars, Term};
use crate::typelang::{
    env_equiv, env_leq_left, env_leq_right, subtype, type_equiv, well_formed, Language, LeftEnv,
    RightEnv, Type,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Judgment {
    pub gamma: LeftEnv,
    pub term: Term,
    pub ty: Type,
    pub delta: RightEnv,
}

impl Judgment {
    pub fn new(gamma: LeftEnv, term: Term, ty: Type, delta: RightEnv) -> Self {
        Judgment { gamma, term, ty, delta }
    }

    pub fn with_ty(&self, ty: Type) -> Judgment {
        Judgment { ty, ..self.clone() }
    }

    pub fn with_term(&self, term: Term) -> Judgment {
        Judgment { term, ..self.clone() }
    }

    /// Types well formed in the iu language; left images are intersections
    /// of strict types, right images strict.
    pub fn well_formedness_error(&self) -> Option<String> {
        if !well_formed(&self.ty, Language::Iu) {
            return Some(format!("type {} is not an iu type", self.ty));
        }
        if let Some((x, t)) = self.gamma.iter().find(|(_, t)| !well_formed(t, Language::Iu)) {
            return Some(format!("{x}:{t} is not an iu type"));
        }
        if let Some((a, t)) =
            self.delta.iter().find(|(_, t)| !(t.is_strict() && well_formed(t, Language::Iu)))
        {
            return Some(format!("{a}:{t} is not a strict iu type"));
        }
        None
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_judgment(&self.gamma, &self.term, &self.ty, &self.delta))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    InterE,
    InterI,
    ArrowI,
    ArrowE,
    UnionENamed,
    UnionESelf,
    Thin,
    Weaken,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::InterE,
        Rule::InterI,
        Rule::ArrowI,
        Rule::ArrowE,
        Rule::UnionENamed,
        Rule::UnionESelf,
        Rule::Thin,
        Rule::Weaken,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::InterE => "InterE",
            Rule::InterI => "InterI",
            Rule::ArrowI => "ArrowI",
            Rule::ArrowE => "ArrowE",
            Rule::UnionENamed => "UnionE_named",
            Rule::UnionESelf => "UnionE_self",
            Rule::Thin => "Thin",
            Rule::Weaken => "Weaken",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rule-specific payload: the (1-based) component index for (∩E), the
/// `≤` pair for (∪E).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    None,
    Index(usize),
    Bound { premise: Type, bound: Type },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub conclusion: Judgment,
    pub rule: Rule,
    pub side: Side,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(conclusion: Judgment, rule: Rule, side: Side, premises: Vec<Derivation>) -> Self {
        Derivation { conclusion, rule, side, premises }
    }

    /// `Γ ⊢ M : ⊤ | Δ` by (∩I) with no premises.
    pub fn top(gamma: LeftEnv, term: Term, delta: RightEnv) -> Self {
        Derivation::new(Judgment::new(gamma, term, Type::top(), delta), Rule::InterI, Side::None, vec![])
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    /// Every type occurring in the derivation's judgments.
    pub fn types(&self) -> Vec<Type> {
        let c = &self.conclusion;
        let mut out: Vec<Type> = c.gamma.values().chain(c.delta.values()).cloned().collect();
        out.push(c.ty.clone());
        for p in &self.premises {
            out.extend(p.types());
        }
        out
    }

    /// One conclusion per line, premises indented below.
    pub fn render(&self) -> String {
        fn go(d: &Derivation, depth: usize, out: &mut String) {
            let side = match &d.side {
                Side::None => String::new(),
                Side::Index(i) => format!(" [{i}]"),
                Side::Bound { premise, bound } => format!(" [{premise} <= {bound}]"),
            };
            out.push_str(&format!("{}({}{side}) {}\n", "  ".repeat(depth), d.rule, d.conclusion));
            for p in &d.premises {
                go(p, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid ({rule}) node at premise path {path:?}, `{judgment}`: {reason}")]
pub struct InvalidNode {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub judgment: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IuError {
    #[error("no derivation found within the search budget")]
    NotFoundWithinBudget,
    #[error("component {index} requested from an intersection of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("cannot transform derivation: {0}")]
    NotAdmissible(String),
    #[error("term contains a mu-abstraction")]
    NotPureLambda,
    #[error("no rule applies to `{0}`")]
    EmptyInversion(String),
    #[error("ill-formed judgment: {0}")]
    IllFormed(String),
}

fn restrict<K: Ord + Clone>(env: &std::collections::BTreeMap<K, Type>, keep: &std::collections::BTreeSet<K>) -> std::collections::BTreeMap<K, Type> {
    env.iter().filter(|(k, _)| keep.contains(k)).map(|(k, t)| (k.clone(), t.clone())).collect()
}

pub fn check_derivation(d: &Derivation) -> Result<(), InvalidNode> {
    check_at(d, &mut Vec::new())
}

fn check_at(d: &Derivation, path: &mut Vec<usize>) -> Result<(), InvalidNode> {
    check_node(d).map_err(|reason| InvalidNode {
        path: path.clone(),
        rule: d.rule,
        judgment: d.conclusion.to_string(),
        reason,
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_at(p, path)?;
        path.pop();
    }
    Ok(())
}

fn check_node(d: &Derivation) -> Result<(), String> {
    let c = &d.conclusion;
    if let Some(e) = c.well_formedness_error() {
        return Err(e);
    }
    let ps = &d.premises;
    let same_envs = |p: &Derivation| env_equiv(&p.conclusion.gamma, &c.gamma) && env_equiv(&p.conclusion.delta, &c.delta);
    let arity = |n: usize| {
        if ps.len() == n {
            Ok(())
        } else {
            Err(format!("expected {n} premises, found {}", ps.len()))
        }
    };
    match d.rule {
        Rule::InterE => {
            arity(0)?;
            let Term::Var(x) = &c.term else { return Err("subject is not a variable".into()) };
            let Some(gx) = c.gamma.get(x) else { return Err(format!("{x} is not in the left environment")) };
            let parts = gx.inter_parts();
            let Side::Index(i) = d.side else { return Err("missing component index".into()) };
            if i == 0 || i > parts.len() {
                return Err(format!("index {i} out of range 1..{}", parts.len()));
            }
            if !type_equiv(&parts[i - 1], &c.ty) {
                return Err(format!("component {i} of {gx} is {}, not {}", parts[i - 1], c.ty));
            }
        }
        Rule::InterI => {
            if ps.len() == 1 {
                return Err("(∩I) needs n ≠ 1 premises".into());
            }
            if !matches!(c.ty, Type::Inter(_)) {
                return Err("conclusion is not an intersection".into());
            }
            let parts = c.ty.inter_parts();
            if parts.len() != ps.len() {
                return Err(format!("{} components but {} premises", parts.len(), ps.len()));
            }
            for (p, part) in ps.iter().zip(&parts) {
                let pc = &p.conclusion;
                if !same_envs(p) || pc.term != c.term {
                    return Err("premises must share environments and subject".into());
                }
                if !pc.ty.is_strict() || !type_equiv(&pc.ty, part) {
                    return Err(format!("premise type {} does not match component {part}", pc.ty));
                }
            }
        }
        Rule::ArrowI => {
            arity(1)?;
            let Term::Abs(x, body) = &c.term else { return Err("subject is not an abstraction".into()) };
            let Type::Arrow(l, r) = strip(&c.ty) else { return Err("type is not an arrow".into()) };
            let pc = &ps[0].conclusion;
            let mut g = c.gamma.clone();
            g.insert(x.clone(), (**l).clone());
            if pc.term != **body || !env_equiv(&pc.gamma, &g) || !env_equiv(&pc.delta, &c.delta) {
                return Err("premise must be the body under Γ, x:A".into());
            }
            if !type_equiv(&pc.ty, r) {
                return Err(format!("premise type {} is not {r}", pc.ty));
            }
        }
        Rule::ArrowE => {
            let Term::App(f, a) = &c.term else { return Err("subject is not an application".into()) };
            if ps.len() < 2 {
                return Err("(→E) needs n ≥ 1 argument premises".into());
            }
            let fun = &ps[0];
            if fun.conclusion.term != **f || !same_envs(fun) {
                return Err("first premise must type the function".into());
            }
            let parts = fun.conclusion.ty.union_parts();
            if parts.len() != ps.len() - 1 {
                return Err(format!("function type has {} components, {} arguments premises", parts.len(), ps.len() - 1));
            }
            let mut ranges = Vec::new();
            for (part, p) in parts.iter().zip(&ps[1..]) {
                let Type::Arrow(dom, ran) = strip(part) else {
                    return Err(format!("component {part} is not an arrow"));
                };
                if p.conclusion.term != **a || !same_envs(p) {
                    return Err("argument premises must type the argument".into());
                }
                if !type_equiv(&p.conclusion.ty, dom) {
                    return Err(format!("argument type {} is not {dom}", p.conclusion.ty));
                }
                ranges.push((**ran).clone());
            }
            let result = Type::union_of(ranges);
            if !type_equiv(&result, &c.ty) {
                return Err(format!("conclusion should be {result}"));
            }
        }
        Rule::UnionENamed | Rule::UnionESelf => {
            arity(1)?;
            let Term::Mu(alpha, beta, body) = &c.term else { return Err("subject is not a mu-abstraction".into()) };
            let pc = &ps[0].conclusion;
            if pc.term != **body || !env_equiv(&pc.gamma, &c.gamma) {
                return Err("premise must be the body under the same Γ".into());
            }
            if !c.ty.is_strict() {
                return Err("conclusion type must be strict".into());
            }
            let bound = if d.rule == Rule::UnionENamed {
                if alpha == beta {
                    return Err("named variant needs α ≠ β".into());
                }
                let Some(b) = c.delta.get(beta) else { return Err(format!("{beta} is not in Δ")) };
                let mut dl = c.delta.clone();
                dl.insert(alpha.clone(), c.ty.clone());
                if !env_equiv(&pc.delta, &dl) {
                    return Err("premise Δ must be Δ, α:B".into());
                }
                b.clone()
            } else {
                if alpha != beta {
                    return Err("self variant needs μβ.[β]".into());
                }
                let mut dl = c.delta.clone();
                dl.insert(beta.clone(), c.ty.clone());
                if !env_equiv(&pc.delta, &dl) {
                    return Err("premise Δ must be β:∪A, Δ".into());
                }
                c.ty.clone()
            };
            if !pc.ty.is_strict() {
                return Err("premise type must be a union of strict types".into());
            }
            if !subtype(&pc.ty, &bound) {
                return Err(format!("side condition {} ≤ {bound} fails", pc.ty));
            }
            if let Side::Bound { premise, bound: b2 } = &d.side {
                if !type_equiv(premise, &pc.ty) || !type_equiv(b2, &bound) {
                    return Err("side payload disagrees with the premise".into());
                }
            }
        }
        Rule::Thin => {
            arity(1)?;
            let pc = &ps[0].conclusion;
            if pc.term != c.term || !type_equiv(&pc.ty, &c.ty) {
                return Err("premise must have the same subject and type".into());
            }
            let g = restrict(&pc.gamma, &free_term_vars(&c.term));
            let dl = restrict(&pc.delta, &free_names(&c.term));
            if !env_equiv(&g, &c.gamma) || !env_equiv(&dl, &c.delta) {
                return Err("environments must be restricted to the free identifiers".into());
            }
        }
        Rule::Weaken => {
            arity(1)?;
            let pc = &ps[0].conclusion;
            if pc.term != c.term || !type_equiv(&pc.ty, &c.ty) {
                return Err("premise must have the same subject and type".into());
            }
            if !env_leq_left(&c.gamma, &pc.gamma) || !env_leq_right(&pc.delta, &c.delta) {
                return Err("needs Γ' ≤ Γ and Δ ≤ Δ'".into());
            }
        }
    }
    Ok(())
}

/// Looks through singleton intersections and unions.
fn strip(ty: &Type) -> &Type {
    match ty {
        Type::Inter(ps) | Type::Union(ps) if ps.len() == 1 => strip(&ps[0]),
        t => t,
    }
}
