//! Subject reduction and subject expansion as derivation transformers.
//!
//! Root steps are rebuilt from the substitution lemmas in [`super::walk`];
//! steps below the root are carried through the surrounding derivation,
//! whose types do not change.

use crate::iu_types::{rebase, Derivation, Judgment, Rule, Side};
use crate::reduction::{contract, replace_at, step, Position, RuleId};
use crate::syntax::Term;
use crate::typelang::{type_equiv, Type};

use super::walk::{
    as_arrow, rebuild, rename_extract, skip, struct_extract, struct_subst_forward, term_subst_backward,
    term_subst_forward,
};

type Res = Result<Derivation, String>;

fn node(d: &Derivation, term: &Term, rule: Rule, side: Side, premises: Vec<Derivation>) -> Derivation {
    Derivation::new(d.conclusion.with_term(term.clone()), rule, side, premises)
}

fn bound_of(d: &Derivation, name: &crate::syntax::Name) -> Result<Type, String> {
    d.conclusion.delta.get(name).cloned().ok_or_else(|| format!("{name} has no type"))
}

/// Turns a derivation of a root redex into one of its contractum, for the
/// rules β, μ and renaming.
pub fn reduce_root(d: &Derivation, rule: RuleId) -> Res {
    let d = skip(d);
    let c = &d.conclusion;
    let reduct = contract(&c.term, rule).ok_or_else(|| format!("{} is not a {rule} redex", c.term))?;
    if d.rule == Rule::InterI {
        let ps = d.premises.iter().map(|p| reduce_root(p, rule)).collect::<Result<_, _>>()?;
        return Ok(node(d, &reduct, Rule::InterI, Side::None, ps));
    }
    match (rule, &c.term) {
        (RuleId::Beta, Term::App(f, _)) => {
            let Term::Abs(x, _) = &**f else { unreachable!() };
            let fun = skip(&d.premises[0]);
            if d.rule != Rule::ArrowE || fun.rule != Rule::ArrowI {
                return Err("a β-redex is typed by (→E) over (→I)".into());
            }
            let mut r = term_subst_forward(&fun.premises[0], x, &d.premises[1], &c.gamma, &c.delta)?;
            r.conclusion.ty = c.ty.clone();
            Ok(r)
        }
        (RuleId::Mu, Term::App(f, n)) => {
            let Term::Mu(alpha, beta, _) = &**f else { unreachable!() };
            let Term::Mu(gamma, _, body) = &reduct else { unreachable!() };
            let fun = skip(&d.premises[0]);
            if d.rule != Rule::ArrowE || !matches!(fun.rule, Rule::UnionENamed | Rule::UnionESelf) {
                return Err("a μ-redex is typed by (→E) over (∪E)".into());
            }
            let prem = skip(&fun.premises[0]);
            let args = &d.premises[1..];
            let mut dt = c.delta.clone();
            dt.insert(gamma.clone(), c.ty.clone());
            if alpha != beta {
                let r = struct_subst_forward(prem, alpha, n, gamma, args, &c.gamma, &dt)?;
                let side = Side::Bound { premise: r.conclusion.ty.clone(), bound: bound_of(d, beta)? };
                return Ok(node(d, &reduct, Rule::UnionENamed, side, vec![r]));
            }
            let r = struct_subst_forward(prem, alpha, n, gamma, args, &c.gamma, &dt)?;
            let parts = r.conclusion.ty.union_parts();
            if parts.is_empty() {
                return Err(format!("premise of {} has type ⊥ and cannot be applied", fun.conclusion.term));
            }
            let arrows = fun.conclusion.ty.union_parts();
            let mut ps = vec![r];
            let mut ranges = Vec::new();
            for part in &parts {
                let (_, ran) = as_arrow(part).ok_or_else(|| format!("{part} is not an arrow"))?;
                let i = arrows
                    .iter()
                    .position(|a| type_equiv(a, part))
                    .ok_or_else(|| format!("no argument for {part}"))?;
                ps.push(rebase(&args[i], &c.gamma, &dt).map_err(|e| e.to_string())?);
                ranges.push(ran);
            }
            let app_ty = Type::union_of(ranges);
            let app = Derivation::new(
                Judgment::new(c.gamma.clone(), (**body).clone(), app_ty.clone(), dt),
                Rule::ArrowE,
                Side::None,
                ps,
            );
            let side = Side::Bound { premise: app_ty, bound: c.ty.clone() };
            Ok(node(d, &reduct, Rule::UnionESelf, side, vec![app]))
        }
        (RuleId::Renaming, Term::Mu(alpha, _, _)) => {
            let Term::Mu(_, delta2, body) = &reduct else { unreachable!() };
            let inner = skip(&d.premises[0]);
            if !matches!(inner.rule, Rule::UnionENamed | Rule::UnionESelf) {
                return Err("a renaming redex is typed by (∪E) over (∪E)".into());
            }
            let r = rebuild(&inner.premises[0], body, &c.gamma, &inner.conclusion.delta)?;
            let (rule, bound) = if alpha == delta2 {
                (Rule::UnionESelf, c.ty.clone())
            } else {
                (Rule::UnionENamed, bound_of(d, delta2)?)
            };
            let side = Side::Bound { premise: r.conclusion.ty.clone(), bound };
            Ok(node(d, &reduct, rule, side, vec![r]))
        }
        _ => Err(format!("{rule} steps are not type-preserving")),
    }
}

/// Rebuilds `d` with the subterm at `path` replaced, applying `at_hole` to
/// each derivation of that subterm. `new_term` is the subject after the
/// replacement.
fn along(d: &Derivation, path: &[usize], new_term: &Term, at_hole: &dyn Fn(&Derivation) -> Res) -> Res {
    if path.is_empty() {
        let r = at_hole(d)?;
        if r.conclusion.term != *new_term {
            return Err(format!("rebuilt {} but expected {new_term}", r.conclusion.term));
        }
        return Ok(r);
    }
    let (i, rest) = (path[0], &path[1..]);
    let child = *new_term.children().get(i).ok_or("position out of range")?;
    let ps = match d.rule {
        Rule::InterI | Rule::Thin | Rule::Weaken => {
            d.premises.iter().map(|p| along(p, path, new_term, at_hole)).collect::<Result<_, _>>()?
        }
        Rule::ArrowI | Rule::UnionENamed | Rule::UnionESelf => vec![along(&d.premises[0], rest, child, at_hole)?],
        Rule::ArrowE if i == 0 => {
            let mut ps = vec![along(&d.premises[0], rest, child, at_hole)?];
            ps.extend(d.premises[1..].iter().cloned());
            ps
        }
        Rule::ArrowE => {
            let mut ps = vec![d.premises[0].clone()];
            for p in &d.premises[1..] {
                ps.push(along(p, rest, child, at_hole)?);
            }
            ps
        }
        Rule::InterE => return Err("a variable has no subterms".into()),
    };
    Ok(node(d, new_term, d.rule, d.side.clone(), ps))
}

/// Subject reduction for one step at any position.
pub fn reduce_at(d: &Derivation, at: &Position, rule: RuleId) -> Res {
    let new_term = step(&d.conclusion.term, at, rule).map_err(|e| e.to_string())?;
    along(d, &at.0, &new_term, &|sub| reduce_root(sub, rule))
}

/// Turns a derivation of `N` into one of `m`, where `m` is a root redex of
/// `rule` contracting to `N` (up to α-conversion for μ).
pub fn expand_root(d: &Derivation, m: &Term, rule: RuleId) -> Res {
    let d = skip(d);
    let c = &d.conclusion;
    if d.rule == Rule::InterI {
        let ps = d.premises.iter().map(|p| expand_root(p, m, rule)).collect::<Result<_, _>>()?;
        return Ok(node(d, m, Rule::InterI, Side::None, ps));
    }
    match (rule, m) {
        (RuleId::Beta, Term::App(f, q)) => {
            let Term::Abs(x, p) = &**f else { return Err(format!("{m} is not a β-redex")) };
            let (witness, body, arg) = term_subst_backward(d, p, x, q)?;
            let fun = Derivation::new(
                Judgment::new(c.gamma.clone(), (**f).clone(), Type::arrow(witness, c.ty.clone()), c.delta.clone()),
                Rule::ArrowI,
                Side::None,
                vec![body],
            );
            Ok(node(d, m, Rule::ArrowE, Side::None, vec![fun, arg]))
        }
        (RuleId::Mu, Term::App(f, q)) => {
            let Term::Mu(alpha, beta, p) = &**f else { return Err(format!("{m} is not a μ-redex")) };
            let src = skip(d.premises.first().ok_or("expected (∪E)")?);
            let (w, rule) = if alpha != beta {
                (struct_extract(src, p, alpha, q, &c.delta, vec![], &c.ty, true)?, Rule::UnionENamed)
            } else {
                if src.rule != Rule::ArrowE {
                    return Err("expected (→E) under the binder".into());
                }
                let fun_src = &src.premises[0];
                let seed = fun_src
                    .conclusion
                    .ty
                    .union_parts()
                    .into_iter()
                    .zip(src.premises[1..].iter().cloned())
                    .collect();
                (struct_extract(fun_src, p, alpha, q, &c.delta, seed, &c.ty, true)?, Rule::UnionESelf)
            };
            let bound = if rule == Rule::UnionESelf { w.alpha_type.clone() } else { bound_of(d, beta)? };
            let side = Side::Bound { premise: w.derivation.conclusion.ty.clone(), bound };
            let fun = Derivation::new(
                Judgment::new(c.gamma.clone(), (**f).clone(), w.alpha_type.clone(), c.delta.clone()),
                rule,
                side,
                vec![w.derivation],
            );
            let mut ps = vec![fun];
            ps.extend(w.args);
            Ok(node(d, m, Rule::ArrowE, Side::None, ps))
        }
        (RuleId::Renaming, Term::Mu(alpha, beta, inner)) => {
            let Term::Mu(gamma, delta, p) = &**inner else { return Err(format!("{m} is not a renaming redex")) };
            let src = skip(d.premises.first().ok_or("expected (∪E)")?);
            let d1 = &src.conclusion.delta;
            let extra = if delta == gamma { src.conclusion.ty.clone() } else { Type::Bottom };
            let (u, body) = rename_extract(src, p, gamma, &extra)?;
            let (irule, ibound) = if delta == gamma {
                (Rule::UnionESelf, u.clone())
            } else {
                (Rule::UnionENamed, d1.get(delta).cloned().ok_or_else(|| format!("{delta} has no type"))?)
            };
            let inner_d = Derivation::new(
                Judgment::new(c.gamma.clone(), (**inner).clone(), u.clone(), d1.clone()),
                irule,
                Side::Bound { premise: body.conclusion.ty.clone(), bound: ibound },
                vec![body],
            );
            let (orule, obound) =
                if alpha == beta { (Rule::UnionESelf, c.ty.clone()) } else { (Rule::UnionENamed, bound_of(d, beta)?) };
            Ok(node(d, m, orule, Side::Bound { premise: u, bound: obound }, vec![inner_d]))
        }
        _ => Err(format!("no {rule} expansion for {m}")),
    }
}

/// Subject expansion at any position: `m` replaces the subterm at `at`.
pub fn expand_at(d: &Derivation, at: &Position, m: &Term, rule: RuleId) -> Res {
    let new_term = replace_at(&d.conclusion.term, &at.0, m.clone()).ok_or("position out of range")?;
    along(d, &at.0, &new_term, &|sub| expand_root(sub, m, rule))
}
