//! Redexes that contract to a given term, for the subject expansion suite.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::reduction::{contract, replace_at, subst_term, subterm_at, Position, RuleId};
use crate::syntax::{alpha_eq, free_names, free_term_vars, fresh_name, fresh_var, Name, Term, Var};

struct Site {
    path: Vec<usize>,
    vars: BTreeSet<Var>,
    names: BTreeSet<Name>,
}

/// Every position with the identifiers bound strictly above it.
fn sites(t: &Term) -> Vec<Site> {
    fn go(t: &Term, path: &mut Vec<usize>, vars: &mut BTreeSet<Var>, names: &mut BTreeSet<Name>, out: &mut Vec<Site>) {
        out.push(Site { path: path.clone(), vars: vars.clone(), names: names.clone() });
        match t {
            Term::Var(_) => {}
            Term::Abs(x, b) => {
                let fresh = vars.insert(x.clone());
                path.push(0);
                go(b, path, vars, names, out);
                path.pop();
                if fresh {
                    vars.remove(x);
                }
            }
            Term::App(f, a) => {
                for (i, c) in [f, a].into_iter().enumerate() {
                    path.push(i);
                    go(c, path, vars, names, out);
                    path.pop();
                }
            }
            Term::Mu(a, _, b) => {
                let fresh = names.insert(a.clone());
                path.push(0);
                go(b, path, vars, names, out);
                path.pop();
                if fresh {
                    names.remove(a);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut BTreeSet::new(), &mut BTreeSet::new(), &mut out);
    out
}

fn at<'a>(t: &'a Term, path: &[usize]) -> &'a Term {
    subterm_at(t, &Position(path.to_vec())).expect("site of the term")
}

/// `q` keeps its meaning when placed at `s`.
fn uncaptured(q: &Term, s: &Site) -> bool {
    free_term_vars(q).is_disjoint(&s.vars) && free_names(q).is_disjoint(&s.names)
}

fn some_var<R: Rng>(t: &Term, rng: &mut R) -> Term {
    let fv: Vec<Var> = free_term_vars(t).into_iter().collect();
    Term::Var(fv.choose(rng).cloned().unwrap_or_else(|| Var::new("z")))
}

/// `(λx.P)Q` with `P[Q/x] = n`: some occurrences of a subterm `Q` are
/// abstracted, or none.
pub fn beta_expansion<R: Rng>(n: &Term, rng: &mut R) -> Option<Term> {
    let x = fresh_var(&n.all_vars(), &Var::new("x"));
    let all = sites(n);
    let eligible: Vec<&Site> = all.iter().filter(|s| uncaptured(at(n, &s.path), s)).collect();
    let (p, q) = if eligible.is_empty() || rng.gen_bool(0.15) {
        (n.clone(), some_var(n, rng))
    } else {
        let chosen = eligible.choose(rng).unwrap();
        let q = at(n, &chosen.path).clone();
        let mut p = n.clone();
        for s in &eligible {
            if at(n, &s.path) == &q && (s.path == chosen.path || rng.gen_bool(0.5)) {
                p = replace_at(&p, &s.path, Term::Var(x.clone()))?;
            }
        }
        (p, q)
    };
    (subst_term(&p, &x, &q) == *n).then(|| Term::app(Term::Abs(x, Box::new(p)), q))
}

/// `(μα.[β]P)Q` contracting to `n = μγ.[β]R` (or `μγ.[γ](R Q)`), where
/// every free `[γ]` in `R` has the form `[γ](X Q)`.
pub fn mu_expansion<R: Rng>(n: &Term, rng: &mut R) -> Option<Term> {
    let Term::Mu(g, b, r) = n else { return None };
    let alpha = fresh_name(&n.all_names(), &Name::new("a"));
    let (body, own_arg) = if g == b {
        match &**r {
            Term::App(r0, q0) => (&**r0, Some((**q0).clone())),
            _ => return None,
        }
    } else {
        (&**r, None)
    };
    let occs: Vec<Site> = sites(body)
        .into_iter()
        .filter(|s| matches!(at(body, &s.path), Term::Mu(d, e, _) if e == g && d != g) && !s.names.contains(g))
        .collect();
    let mut q = own_arg;
    for s in &occs {
        let Term::Mu(_, _, inner) = at(body, &s.path) else { unreachable!() };
        let Term::App(_, qk) = &**inner else { return None };
        match &q {
            None => q = Some((**qk).clone()),
            Some(q0) if q0 != &**qk => return None,
            Some(_) => {}
        }
    }
    let q = q.unwrap_or_else(|| some_var(n, rng));
    if free_names(&q).contains(g) || !occs.iter().all(|s| uncaptured(&q, s)) {
        return None;
    }
    let mut p = body.clone();
    let mut ordered: Vec<&Site> = occs.iter().collect();
    ordered.sort_by_key(|s| std::cmp::Reverse(s.path.len()));
    for s in ordered {
        let Term::Mu(d, _, inner) = at(&p, &s.path) else { return None };
        let Term::App(x, _) = &**inner else { return None };
        let renamed = Term::Mu(d.clone(), alpha.clone(), x.clone());
        p = replace_at(&p, &s.path, renamed)?;
    }
    let named = if g == b { alpha.clone() } else { b.clone() };
    let m = Term::app(Term::Mu(alpha, named, Box::new(p)), q);
    let reduct = contract(&m, RuleId::Mu)?;
    alpha_eq(&reduct, n).then_some(m)
}

/// `μα.[β](μγ.[δ]P)` contracting to `n = μα.[δ']R`: some free `[β]` in
/// `R` become `[γ]`. `typed` lists the names that have a type at `n`.
pub fn renaming_expansion<R: Rng>(n: &Term, typed: &BTreeSet<Name>, rng: &mut R) -> Option<Term> {
    let Term::Mu(a, d2, r) = n else { return None };
    let gamma = fresh_name(&n.all_names(), &Name::new("c"));
    let mut cands: Vec<Name> = typed.iter().cloned().collect();
    cands.push(a.clone());
    let beta = cands.choose(rng).unwrap().clone();
    let mut p = (**r).clone();
    for s in sites(r) {
        let hit = matches!(at(r, &s.path), Term::Mu(d, e, _) if *e == beta && *d != beta) && !s.names.contains(&beta);
        if hit && rng.gen_bool(0.6) {
            let Term::Mu(d, _, x) = at(&p, &s.path).clone() else { unreachable!() };
            p = replace_at(&p, &s.path, Term::Mu(d, gamma.clone(), x))?;
        }
    }
    let delta = if *d2 == beta && rng.gen_bool(0.5) { gamma.clone() } else { d2.clone() };
    let m = Term::Mu(a.clone(), beta, Box::new(Term::Mu(gamma, delta, Box::new(p))));
    (contract(&m, RuleId::Renaming).as_ref() == Some(n)).then_some(m)
}
