//! Abstract syntax of λμ-terms.
//!
//! Terms use named binders. A μ-abstraction is always fused with its naming
//! construct: `Mu(α, β, M)` stands for `μα.[β]M`, the only shape the grammar
//! admits. Term variables and names live in disjoint namespaces, enforced by
//! the [`Var`] and [`Name`] newtypes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// A term variable (`x`, `y`, ...).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

/// A name, also called a context variable (`α`, `β`, ...).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(String);

macro_rules! ident_newtype {
    ($ty:ident) => {
        impl $ty {
            pub fn new(id: impl Into<String>) -> Self {
                $ty(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<&str> for $ty {
            fn from(s: &str) -> Self {
                $ty(s.to_string())
            }
        }
    };
}

ident_newtype!(Var);
ident_newtype!(Name);

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Abs(Var, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// `μα.[β]M`: binds `α` in `[β]M`.
    Mu(Name, Name, Box<Term>),
}

impl Term {
    pub fn var(x: impl Into<String>) -> Term {
        Term::Var(Var::new(x))
    }

    pub fn abs(x: impl Into<String>, body: Term) -> Term {
        Term::Abs(Var::new(x), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn mu(bound: impl Into<String>, named: impl Into<String>, body: Term) -> Term {
        Term::Mu(Name::new(bound), Name::new(named), Box::new(body))
    }

    /// Left-nested application of `head` to `args`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, b) | Term::Mu(_, _, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) => vec![],
            Term::Abs(_, b) | Term::Mu(_, _, b) => vec![b],
            Term::App(f, a) => vec![f, a],
        }
    }

    pub fn is_pure_lambda(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Abs(_, b) => b.is_pure_lambda(),
            Term::App(f, a) => f.is_pure_lambda() && a.is_pure_lambda(),
            Term::Mu(..) => false,
        }
    }

    /// Every term variable occurring in the term, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        fn go(t: &Term, out: &mut BTreeSet<Var>) {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Abs(x, b) => {
                    out.insert(x.clone());
                    go(b, out);
                }
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Mu(_, _, b) => go(b, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Every name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        fn go(t: &Term, out: &mut BTreeSet<Name>) {
            match t {
                Term::Var(_) => {}
                Term::Abs(_, b) => go(b, out),
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Mu(a, b, body) => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                    go(body, out);
                }
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::print_term(self))
    }
}

pub fn free_term_vars(term: &Term) -> BTreeSet<Var> {
    match term {
        Term::Var(x) => BTreeSet::from([x.clone()]),
        Term::Abs(x, b) => {
            let mut s = free_term_vars(b);
            s.remove(x);
            s
        }
        Term::App(f, a) => {
            let mut s = free_term_vars(f);
            s.extend(free_term_vars(a));
            s
        }
        Term::Mu(_, _, b) => free_term_vars(b),
    }
}

pub fn free_names(term: &Term) -> BTreeSet<Name> {
    match term {
        Term::Var(_) => BTreeSet::new(),
        Term::Abs(_, b) => free_names(b),
        Term::App(f, a) => {
            let mut s = free_names(f);
            s.extend(free_names(a));
            s
        }
        Term::Mu(alpha, beta, b) => {
            let mut s = free_names(b);
            s.insert(beta.clone());
            s.remove(alpha);
            s
        }
    }
}

/// Equality up to consistent renaming of bound variables and bound names.
pub fn alpha_eq(left: &Term, right: &Term) -> bool {
    // Bound identifiers are mapped to the binder depth at which they were
    // introduced; free identifiers compare by spelling.
    struct Scope<'a, K> {
        left: HashMap<&'a K, usize>,
        right: HashMap<&'a K, usize>,
    }

    fn bound_eq<'a, K: Eq + std::hash::Hash>(s: &Scope<'a, K>, l: &'a K, r: &'a K) -> bool {
        match (s.left.get(l), s.right.get(r)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => l == r,
            _ => false,
        }
    }

    fn go<'a>(
        l: &'a Term,
        r: &'a Term,
        vars: &mut Scope<'a, Var>,
        names: &mut Scope<'a, Name>,
        depth: usize,
    ) -> bool {
        match (l, r) {
            (Term::Var(x), Term::Var(y)) => bound_eq(vars, x, y),
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                go(f1, f2, vars, names, depth) && go(a1, a2, vars, names, depth)
            }
            (Term::Abs(x, b1), Term::Abs(y, b2)) => {
                let saved = (vars.left.insert(x, depth), vars.right.insert(y, depth));
                let ok = go(b1, b2, vars, names, depth + 1);
                restore(&mut vars.left, x, saved.0);
                restore(&mut vars.right, y, saved.1);
                ok
            }
            (Term::Mu(a1, n1, b1), Term::Mu(a2, n2, b2)) => {
                let saved = (names.left.insert(a1, depth), names.right.insert(a2, depth));
                let ok = bound_eq(names, n1, n2) && go(b1, b2, vars, names, depth + 1);
                restore(&mut names.left, a1, saved.0);
                restore(&mut names.right, a2, saved.1);
                ok
            }
            _ => false,
        }
    }

    fn restore<'a, K: Eq + std::hash::Hash>(
        map: &mut HashMap<&'a K, usize>,
        key: &'a K,
        old: Option<usize>,
    ) {
        match old {
            Some(v) => {
                map.insert(key, v);
            }
            None => {
                map.remove(key);
            }
        }
    }

    let mut vars = Scope { left: HashMap::new(), right: HashMap::new() };
    let mut names = Scope { left: HashMap::new(), right: HashMap::new() };
    go(left, right, &mut vars, &mut names, 0)
}

/// `C ::= μα.[β]M | C M`
pub fn is_control_structure(term: &Term) -> bool {
    match term {
        Term::Mu(..) => true,
        Term::App(f, _) => is_control_structure(f),
        _ => false,
    }
}

/// First identifier in `hint, hint', hint'', ...` that is not in `avoid`.
pub fn fresh<S: AsRef<str>>(avoid: &BTreeSet<S>, hint: &str) -> String
where
    S: Ord,
{
    let taken = |c: &str| avoid.iter().any(|a| a.as_ref() == c);
    let mut candidate = hint.to_string();
    while taken(&candidate) {
        candidate.push('\'');
    }
    candidate
}

pub fn fresh_var(avoid: &BTreeSet<Var>, hint: &Var) -> Var {
    let avoid: BTreeSet<&str> = avoid.iter().map(Var::as_str).collect();
    Var::new(fresh(&avoid, hint.as_str()))
}

pub fn fresh_name(avoid: &BTreeSet<Name>, hint: &Name) -> Name {
    let avoid: BTreeSet<&str> = avoid.iter().map(Name::as_str).collect();
    Name::new(fresh(&avoid, hint.as_str()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set<T: Ord + Clone>(items: &[T]) -> BTreeSet<T> {
        items.iter().cloned().collect()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(free_term_vars(&Term::var("x")), set(&[Var::from("x")]));
        assert!(free_term_vars(&Term::abs("x", Term::var("x"))).is_empty());
        let t = Term::mu("a", "b", Term::app(Term::var("x"), Term::var("y")));
        assert_eq!(free_term_vars(&t), set(&[Var::from("x"), Var::from("y")]));
    }

    #[test]
    fn free_names_examples() {
        assert_eq!(free_names(&Term::mu("a", "b", Term::var("x"))), set(&[Name::from("b")]));
        assert!(free_names(&Term::mu("a", "a", Term::var("x"))).is_empty());
        // μα.[β](μγ.[α]y): the inner [α] is bound by the outer μα.
        let t = Term::mu("a", "b", Term::mu("g", "a", Term::var("y")));
        assert_eq!(free_names(&t), set(&[Name::from("b")]));
    }

    #[test]
    fn alpha_eq_examples() {
        assert!(alpha_eq(&Term::abs("x", Term::var("x")), &Term::abs("y", Term::var("y"))));
        assert!(alpha_eq(
            &Term::mu("a", "a", Term::var("x")),
            &Term::mu("g", "g", Term::var("x"))
        ));
        assert!(!alpha_eq(
            &Term::mu("a", "b", Term::var("x")),
            &Term::mu("a", "g", Term::var("x"))
        ));
        // free vs bound must not be confused
        assert!(!alpha_eq(&Term::abs("x", Term::var("y")), &Term::abs("y", Term::var("y"))));
        assert!(!alpha_eq(
            &Term::abs("x", Term::abs("y", Term::var("x"))),
            &Term::abs("x", Term::abs("y", Term::var("y")))
        ));
    }

    #[test]
    fn control_structures() {
        let mu = Term::mu("a", "b", Term::var("x"));
        assert!(is_control_structure(&mu));
        assert!(is_control_structure(&Term::app(mu.clone(), Term::var("y"))));
        assert!(!is_control_structure(&Term::abs("x", mu)));
        assert!(!is_control_structure(&Term::var("x")));
    }

    #[test]
    fn fresh_examples() {
        assert_eq!(fresh(&set(&["x"]), "x"), "x'");
        assert_eq!(fresh(&BTreeSet::<&str>::new(), "g"), "g");
        assert_eq!(fresh(&set(&["g", "g'"]), "g"), "g''");
    }
}
