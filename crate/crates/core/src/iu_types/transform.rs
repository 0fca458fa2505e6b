//! Admissible rules as derivation transformers: general (∩E), thinning and
//! weakening.

use std::collections::{BTreeMap, BTreeSet};

use super::{restrict, Derivation, IuError, Judgment, Rule, Side};
use crate::syntax::{free_names, free_term_vars, Name, Term, Var};
use crate::typelang::{env_leq_left, env_leq_right, type_equiv, LeftEnv, RightEnv, Type};

/// From a derivation of `M : A1∩…∩An`, a derivation of `M : Ai` (1-based)
/// with the same environments.
pub fn inter_elim(d: &Derivation, index: usize) -> Result<Derivation, IuError> {
    let parts = d.conclusion.ty.inter_parts();
    if index == 0 || index > parts.len() {
        return Err(IuError::IndexOutOfRange { index, len: parts.len() });
    }
    project(d, &parts[index - 1])
}

/// The premise of `d` typing its subject with `component`, up to `∼`.
pub fn project(d: &Derivation, component: &Type) -> Result<Derivation, IuError> {
    match d.rule {
        Rule::InterI => d
            .premises
            .iter()
            .find(|p| type_equiv(&p.conclusion.ty, component))
            .cloned()
            .ok_or_else(|| IuError::NotAdmissible(format!("no premise of type {component}"))),
        Rule::Thin | Rule::Weaken => {
            let p = project(&d.premises[0], component)?;
            let conclusion = d.conclusion.with_ty(p.conclusion.ty.clone());
            Ok(Derivation::new(conclusion, d.rule, Side::None, vec![p]))
        }
        _ if type_equiv(&d.conclusion.ty, component) => Ok(d.clone()),
        _ => Err(IuError::NotAdmissible(format!("{} is not a component", component))),
    }
}

/// Restricts every environment to the identifiers free in the subject (and
/// those bound above each node).
pub fn thin(d: &Derivation) -> Derivation {
    let term = &d.conclusion.term;
    restrict_all(d, &free_term_vars(term), &free_names(term))
}

/// [`thin`] recorded as an explicit (T) node over `d`.
pub fn thin_node(d: &Derivation) -> Derivation {
    let c = &d.conclusion;
    let conclusion = Judgment::new(
        restrict(&c.gamma, &free_term_vars(&c.term)),
        c.term.clone(),
        c.ty.clone(),
        restrict(&c.delta, &free_names(&c.term)),
    );
    Derivation::new(conclusion, Rule::Thin, Side::None, vec![d.clone()])
}

fn restrict_all(d: &Derivation, vars: &BTreeSet<Var>, names: &BTreeSet<Name>) -> Derivation {
    let c = &d.conclusion;
    let conclusion =
        Judgment::new(restrict(&c.gamma, vars), c.term.clone(), c.ty.clone(), restrict(&c.delta, names));
    let (mut vars2, mut names2) = (vars.clone(), names.clone());
    match (&d.rule, &c.term) {
        (Rule::ArrowI, Term::Abs(x, _)) => {
            vars2.insert(x.clone());
        }
        (Rule::UnionENamed | Rule::UnionESelf, Term::Mu(alpha, _, _)) => {
            names2.insert(alpha.clone());
        }
        _ => {}
    }
    let premises = d.premises.iter().map(|p| restrict_all(p, &vars2, &names2)).collect();
    Derivation::new(conclusion, d.rule, d.side.clone(), premises)
}

/// Moves `d` to environments `Γ' ≤ Γ` and `Δ ≤ Δ'`, rebuilding every node.
///
/// Each (∩E) on a free variable `x` must find its component, up to `∼`,
/// among the components of `Γ'(x)`. When `Γ'(x)` is strictly smaller in
/// `≤` but lacks that component (e.g. `x:⊥` for `x:A`), the rebuilt node
/// does not exist and the result is [`IuError::NotAdmissible`].
pub fn weaken(d: &Derivation, gamma: &LeftEnv, delta: &RightEnv) -> Result<Derivation, IuError> {
    let c = &d.conclusion;
    if !env_leq_left(gamma, &c.gamma) {
        return Err(IuError::PreconditionViolation("left environment is not smaller".into()));
    }
    if !env_leq_right(&c.delta, delta) {
        return Err(IuError::PreconditionViolation("right environment is not larger".into()));
    }
    push(d, gamma, delta)
}

/// (W) recorded as an explicit node over `d`.
pub fn weaken_node(d: &Derivation, gamma: &LeftEnv, delta: &RightEnv) -> Result<Derivation, IuError> {
    let c = &d.conclusion;
    if !env_leq_left(gamma, &c.gamma) || !env_leq_right(&c.delta, delta) {
        return Err(IuError::PreconditionViolation("needs Γ' ≤ Γ and Δ ≤ Δ'".into()));
    }
    let conclusion = Judgment::new(gamma.clone(), c.term.clone(), c.ty.clone(), delta.clone());
    Ok(Derivation::new(conclusion, Rule::Weaken, Side::None, vec![d.clone()]))
}

fn with<K: Ord + Clone>(env: &BTreeMap<K, Type>, k: &K, from: &BTreeMap<K, Type>) -> BTreeMap<K, Type> {
    let mut out = env.clone();
    match from.get(k) {
        Some(t) => out.insert(k.clone(), t.clone()),
        None => out.remove(k),
    };
    out
}

fn push(d: &Derivation, gamma: &LeftEnv, delta: &RightEnv) -> Result<Derivation, IuError> {
    let c = &d.conclusion;
    let conclusion = Judgment::new(gamma.clone(), c.term.clone(), c.ty.clone(), delta.clone());
    let same = |ps: &[Derivation]| ps.iter().map(|p| push(p, gamma, delta)).collect::<Result<Vec<_>, _>>();
    let (side, premises) = match (&d.rule, &c.term) {
        (Rule::Thin | Rule::Weaken, _) => return push(&d.premises[0], gamma, delta),
        (Rule::InterE, Term::Var(x)) => {
            let parts = gamma.get(x).map(Type::inter_parts).unwrap_or_default();
            let Some(i) = parts.iter().position(|p| type_equiv(p, &c.ty)) else {
                return Err(IuError::NotAdmissible(format!(
                    "{x}:{} has no component {}",
                    gamma.get(x).map_or("?".into(), |t| t.to_string()),
                    c.ty
                )));
            };
            (Side::Index(i + 1), vec![])
        }
        (Rule::ArrowI, Term::Abs(x, _)) => {
            let p = &d.premises[0];
            let g = with(gamma, x, &p.conclusion.gamma);
            (Side::None, vec![push(p, &g, delta)?])
        }
        (Rule::UnionENamed | Rule::UnionESelf, Term::Mu(alpha, beta, _)) => {
            let p = &d.premises[0];
            let dl = with(delta, alpha, &p.conclusion.delta);
            let p2 = push(p, gamma, &dl)?;
            let bound = if d.rule == Rule::UnionESelf {
                c.ty.clone()
            } else {
                dl.get(beta).cloned().ok_or_else(|| IuError::NotAdmissible(format!("{beta} has no type")))?
            };
            (Side::Bound { premise: p2.conclusion.ty.clone(), bound }, vec![p2])
        }
        _ => (d.side.clone(), same(&d.premises)?),
    };
    Ok(Derivation::new(conclusion, d.rule, side, premises))
}

/// Thins `d`, then moves it to `gamma` and `delta` without the `≤` checks
/// of [`weaken`]. Every identifier free in the subject must keep a usable
/// type; the caller re-checks the result.
pub fn rebase(d: &Derivation, gamma: &LeftEnv, delta: &RightEnv) -> Result<Derivation, IuError> {
    push(&thin(d), gamma, delta)
}
