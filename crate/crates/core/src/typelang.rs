//! Type expressions for the three type languages, the preorder `≤`, its
//! equivalence `∼`, canonical forms and the orders on environments.
//!
//! One syntax tree covers Curry types with `⊥`, strict intersection types and
//! intersection-union types; [`well_formed`] decides membership in each
//! language. `Inter(vec![])` is `⊤`. `Bottom` is both the Curry constant and
//! the empty union; `Union(vec![])` is accepted and canonicalizes to `Bottom`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::syntax::{Name, Var};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    Bottom,
    Arrow(Box<Type>, Box<Type>),
    Inter(Vec<Type>),
    Union(Vec<Type>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    Curry,
    Strict,
    Iu,
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "curry" => Ok(Language::Curry),
            "strict" => Ok(Language::Strict),
            "iu" => Ok(Language::Iu),
            other => Err(format!("unknown type language `{other}` (expected curry, strict or iu)")),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Curry => "curry",
            Language::Strict => "strict",
            Language::Iu => "iu",
        })
    }
}

impl Type {
    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(left: Type, right: Type) -> Type {
        Type::Arrow(Box::new(left), Box::new(right))
    }

    pub fn top() -> Type {
        Type::Inter(Vec::new())
    }

    pub fn inter(parts: Vec<Type>) -> Type {
        Type::Inter(parts)
    }

    pub fn union(parts: Vec<Type>) -> Type {
        Type::Union(parts)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Type::Inter(ps) if ps.is_empty())
    }

    pub fn is_bottom(&self) -> bool {
        match self {
            Type::Bottom => true,
            Type::Union(ps) => ps.iter().all(Type::is_bottom),
            _ => false,
        }
    }

    /// True for a type that is not a top-level intersection (a singleton
    /// intersection counts as its component).
    pub fn is_strict(&self) -> bool {
        match self {
            Type::Inter(ps) => ps.len() == 1 && ps[0].is_strict(),
            _ => true,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) | Type::Bottom => 1,
            Type::Arrow(l, r) => 1 + l.size() + r.size(),
            Type::Inter(ps) | Type::Union(ps) => 1 + ps.iter().map(Type::size).sum::<usize>(),
        }
    }

    /// Components of an intersection, flattening nested intersections.
    /// A non-intersection is its own single component.
    pub fn inter_parts(&self) -> Vec<Type> {
        match self {
            Type::Inter(ps) => ps.iter().flat_map(Type::inter_parts).collect(),
            other => vec![other.clone()],
        }
    }

    /// Components of a union, flattening nested unions; `⊥` has none.
    pub fn union_parts(&self) -> Vec<Type> {
        match self {
            Type::Union(ps) => ps.iter().flat_map(Type::union_parts).collect(),
            Type::Bottom => Vec::new(),
            Type::Inter(ps) if ps.len() == 1 => ps[0].union_parts(),
            other => vec![other.clone()],
        }
    }

    /// Builds an intersection from components, collapsing the singleton case.
    pub fn inter_of(mut parts: Vec<Type>) -> Type {
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Type::Inter(parts)
        }
    }

    /// Builds a union from components: empty is `⊥`, singleton collapses.
    pub fn union_of(mut parts: Vec<Type>) -> Type {
        match parts.len() {
            0 => Type::Bottom,
            1 => parts.pop().unwrap(),
            _ => Type::Union(parts),
        }
    }

    /// Collects every sub-expression, including the type itself.
    pub fn subterms(&self, out: &mut Vec<Type>) {
        out.push(self.clone());
        match self {
            Type::Var(_) | Type::Bottom => {}
            Type::Arrow(l, r) => {
                l.subterms(out);
                r.subterms(out);
            }
            Type::Inter(ps) | Type::Union(ps) => ps.iter().for_each(|p| p.subterms(out)),
        }
    }

    pub fn type_vars(&self, out: &mut Vec<String>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Type::Bottom => {}
            Type::Arrow(l, r) => {
                l.type_vars(out);
                r.type_vars(out);
            }
            Type::Inter(ps) | Type::Union(ps) => ps.iter().for_each(|p| p.type_vars(out)),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::print_type(self))
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::print_type(self))
    }
}

pub fn well_formed(ty: &Type, language: Language) -> bool {
    match language {
        Language::Curry => curry_type(ty),
        Language::Strict | Language::Iu => inter_type(ty, language),
    }
}

fn curry_type(ty: &Type) -> bool {
    match ty {
        Type::Var(_) | Type::Bottom => true,
        Type::Arrow(l, r) => !l.is_bottom() && curry_type(l) && curry_type(r),
        Type::Inter(_) | Type::Union(_) => false,
    }
}

/// An intersection of strict types (possibly `⊤`, possibly a single one).
fn inter_type(ty: &Type, language: Language) -> bool {
    match ty {
        Type::Inter(ps) => ps.iter().all(|p| inter_type(p, language)),
        other => strict_type(other, language),
    }
}

fn strict_type(ty: &Type, language: Language) -> bool {
    match ty {
        Type::Var(_) => true,
        Type::Arrow(l, r) => inter_type(l, language) && strict_type(r, language),
        Type::Bottom => language == Language::Iu,
        // a union never directly contains an intersection
        Type::Union(ps) => language == Language::Iu && ps.iter().all(|p| strict_type(p, language)),
        Type::Inter(_) => false,
    }
}

/// Decides `a ≤ b` in the least preorder generated by intersection
/// projection/introduction and union injection/elimination, modulo `∼`.
///
/// The generated order is the free bounded lattice over the atoms (type
/// variables and arrows up to `∼`), so the classical syntax-directed decision
/// procedure for free lattices applies.
pub fn subtype(a: &Type, b: &Type) -> bool {
    if let Type::Inter(bs) = b {
        return bs.iter().all(|bi| subtype(a, bi));
    }
    if matches!(a, Type::Union(_) | Type::Bottom) {
        return a.union_parts().iter().all(|ai| subtype(ai, b));
    }
    let b_is_join = matches!(b, Type::Union(_) | Type::Bottom);
    match a {
        Type::Inter(as_) => {
            as_.iter().any(|ai| subtype(ai, b))
                || (b_is_join && b.union_parts().iter().any(|bj| subtype(a, bj)))
        }
        _ if b_is_join => b.union_parts().iter().any(|bj| subtype(a, bj)),
        _ => atom_equiv(a, b),
    }
}

fn atom_equiv(a: &Type, b: &Type) -> bool {
    match (a, b) {
        (Type::Var(x), Type::Var(y)) => x == y,
        (Type::Arrow(l1, r1), Type::Arrow(l2, r2)) => type_equiv(l1, l2) && type_equiv(r1, r2),
        _ => false,
    }
}

pub fn type_equiv(a: &Type, b: &Type) -> bool {
    subtype(a, b) && subtype(b, a)
}

/// Flattens nested intersections and unions, removes `∼`-duplicates and
/// sorts components by printed form.
pub fn canonicalize(ty: &Type) -> Type {
    match ty {
        Type::Var(_) | Type::Bottom => ty.clone(),
        Type::Arrow(l, r) => Type::arrow(canonicalize(l), canonicalize(r)),
        Type::Inter(ps) => {
            let parts = ps.iter().map(canonicalize).flat_map(|p| match p {
                Type::Inter(qs) => qs,
                other => vec![other],
            });
            Type::inter_of(normalize_parts(parts.collect()))
        }
        Type::Union(ps) => {
            let parts = ps.iter().map(canonicalize).flat_map(|p| match p {
                Type::Union(qs) => qs,
                Type::Bottom => vec![],
                other => vec![other],
            });
            Type::union_of(normalize_parts(parts.collect()))
        }
    }
}

fn normalize_parts(parts: Vec<Type>) -> Vec<Type> {
    let mut keyed: Vec<(String, Type)> =
        parts.into_iter().map(|p| (crate::grammar::print_type(&p), p)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<Type> = Vec::with_capacity(keyed.len());
    for (_, p) in keyed {
        if !out.iter().any(|q| type_equiv(q, &p)) {
            out.push(p);
        }
    }
    out
}

/// Left environment: term variables to intersections of strict types.
pub type LeftEnv = BTreeMap<Var, Type>;
/// Right environment: names to strict types (unions allowed).
pub type RightEnv = BTreeMap<Name, Type>;

/// `Γ ≤ Γ'`: every `x:A'` in `Γ'` has `x:A` in `Γ` with `A ≤ A'`.
pub fn env_leq_left(gamma: &LeftEnv, gamma2: &LeftEnv) -> bool {
    gamma2
        .iter()
        .all(|(x, a2)| gamma.get(x).is_some_and(|a| subtype(a, a2)))
}

/// `Δ ≤ Δ'`: every `α:A` in `Δ` has `α:A'` in `Δ'` with `A ≤ A'`.
pub fn env_leq_right(delta: &RightEnv, delta2: &RightEnv) -> bool {
    delta
        .iter()
        .all(|(a, ty)| delta2.get(a).is_some_and(|ty2| subtype(ty, ty2)))
}

/// Same domain, pointwise `∼`.
pub fn env_equiv<K: Ord>(left: &BTreeMap<K, Type>, right: &BTreeMap<K, Type>) -> bool {
    left.len() == right.len()
        && left
            .iter()
            .all(|(k, t)| right.get(k).is_some_and(|t2| type_equiv(t, t2)))
}
