//! Rebuilding a derivation along a second term of the same shape. The two
//! terms may differ in bound identifiers and at the holes of the active
//! [`Mode`]; everything else is copied node by node, with environments and
//! side payloads recomputed for the new term.

use std::collections::BTreeMap;

use crate::iu_types::{project, rebase, Derivation, Judgment, Rule, Side};
use crate::reduction::{subst_structural, subst_term};
use crate::syntax::{Name, Term, Var};
use crate::typelang::{subtype, type_equiv, LeftEnv, RightEnv, Type};

pub(crate) type WalkResult = Result<Derivation, String>;

#[derive(Clone, Copy)]
enum Mode<'a> {
    Plain,
    /// Source `x` becomes the argument's subject.
    TermSubst { x: &'a Var, arg: &'a Derivation },
    /// Target `x` stands where the source has the argument.
    TermExtract { x: &'a Var },
    /// Source `[α]P` becomes `[γ](P N)`; arrows of `α` with their arguments.
    StructSubst { alpha: &'a Name, args: &'a [(Type, Derivation)] },
    /// Target `[α]P` stands where the source has `[γ](P N)`.
    StructExtract { alpha: &'a Name },
    /// Records the premises of target nodes named `γ`.
    RenameCollect { gamma: &'a Name },
}

struct Walker<'a> {
    mode: Mode<'a>,
    collecting: bool,
    found: Vec<Derivation>,
}

pub(crate) fn skip(mut d: &Derivation) -> &Derivation {
    while matches!(d.rule, Rule::Thin | Rule::Weaken) {
        d = &d.premises[0];
    }
    d
}

fn with_entry<K: Ord + Clone>(env: &BTreeMap<K, Type>, k: &K, t: Option<&Type>) -> BTreeMap<K, Type> {
    let mut out = env.clone();
    match t {
        Some(t) => out.insert(k.clone(), t.clone()),
        None => out.remove(k),
    };
    out
}

pub(crate) fn as_arrow(t: &Type) -> Option<(Type, Type)> {
    match t {
        Type::Arrow(a, b) => Some(((**a).clone(), (**b).clone())),
        Type::Inter(ps) if ps.len() == 1 => as_arrow(&ps[0]),
        _ => None,
    }
}

/// Appends the components of `more` not already present up to `∼`.
pub(crate) fn merge_parts(into: &mut Vec<Type>, more: impl IntoIterator<Item = Type>) {
    for t in more {
        if !into.iter().any(|u| type_equiv(u, &t)) {
            into.push(t);
        }
    }
}

fn index_of(g: &LeftEnv, x: &Var, ty: &Type) -> Result<usize, String> {
    let parts = g.get(x).map(Type::inter_parts).unwrap_or_default();
    parts
        .iter()
        .position(|p| type_equiv(p, ty))
        .map(|i| i + 1)
        .ok_or_else(|| format!("{x} has no component {ty}"))
}

impl<'a> Walker<'a> {
    fn new(mode: Mode<'a>, collecting: bool) -> Self {
        Walker { mode, collecting, found: Vec::new() }
    }

    fn var_typed(&self, g: &LeftEnv, dl: &RightEnv, x: &Var, ty: &Type) -> WalkResult {
        let j = |t: &Type| Judgment::new(g.clone(), Term::Var(x.clone()), t.clone(), dl.clone());
        if self.collecting {
            return Ok(Derivation::new(j(ty), Rule::InterI, Side::None, vec![]));
        }
        let comps = ty.inter_parts();
        let mut leaves = Vec::new();
        for c in &comps {
            leaves.push(Derivation::new(j(c), Rule::InterE, Side::Index(index_of(g, x, c)?), vec![]));
        }
        if comps.len() == 1 && ty.is_strict() {
            return Ok(leaves.pop().unwrap());
        }
        Ok(Derivation::new(j(ty), Rule::InterI, Side::None, leaves))
    }

    fn bound_of(&self, dl: &RightEnv, b: &Name) -> Result<Type, String> {
        match dl.get(b) {
            Some(t) => Ok(t.clone()),
            None if self.collecting => Ok(Type::Bottom),
            None => Err(format!("{b} has no type")),
        }
    }

    fn walk(&mut self, d: &Derivation, t: &Term, g: &LeftEnv, dl: &RightEnv, shadow: bool) -> WalkResult {
        let d = skip(d);
        let ty = d.conclusion.ty.clone();
        let node = |rule, side, ps| {
            Derivation::new(Judgment::new(g.clone(), t.clone(), ty.clone(), dl.clone()), rule, side, ps)
        };
        let src = &d.conclusion.term;
        if !shadow {
            match self.mode {
                Mode::TermSubst { x, arg } if d.rule == Rule::InterE && matches!(src, Term::Var(z) if z == x) => {
                    let p = project(arg, &ty).map_err(|e| e.to_string())?;
                    let mut r = rebase(&p, g, dl).map_err(|e| e.to_string())?;
                    r.conclusion.ty = ty;
                    return Ok(r);
                }
                Mode::TermExtract { x } if matches!(t, Term::Var(z) if z == x) => {
                    self.found.push(d.clone());
                    return self.var_typed(g, dl, x, &ty);
                }
                Mode::StructSubst { alpha, args } if d.rule == Rule::UnionENamed => {
                    if let Term::Mu(a, b, _) = src {
                        if b == alpha && a != alpha {
                            return self.struct_subst_node(d, t, g, dl, args);
                        }
                    }
                }
                Mode::StructExtract { alpha } if d.rule == Rule::UnionENamed => {
                    if let Term::Mu(a2, b2, _) = t {
                        if b2 == alpha && a2 != alpha {
                            return self.struct_extract_node(d, t, g, dl, alpha);
                        }
                    }
                }
                _ => {}
            }
        }
        match (d.rule, src, t) {
            (Rule::InterI, _, _) => {
                let ps = d.premises.iter().map(|p| self.walk(p, t, g, dl, shadow)).collect::<Result<_, _>>()?;
                Ok(node(Rule::InterI, Side::None, ps))
            }
            (Rule::InterE, _, Term::Var(z)) => Ok(node(Rule::InterE, Side::Index(index_of(g, z, &ty)?), vec![])),
            (Rule::ArrowI, Term::Abs(y, _), Term::Abs(y2, tb)) => {
                let p = skip(&d.premises[0]);
                let g2 = with_entry(g, y2, p.conclusion.gamma.get(y));
                let shadow2 = shadow
                    || matches!(self.mode, Mode::TermSubst { x, .. } if x == y)
                    || matches!(self.mode, Mode::TermExtract { x } if x == y2);
                let p2 = self.walk(p, tb, &g2, dl, shadow2)?;
                Ok(node(Rule::ArrowI, Side::None, vec![p2]))
            }
            (Rule::ArrowE, _, Term::App(tf, ta)) => {
                let mut ps = vec![self.walk(&d.premises[0], tf, g, dl, shadow)?];
                for p in &d.premises[1..] {
                    ps.push(self.walk(p, ta, g, dl, shadow)?);
                }
                Ok(node(Rule::ArrowE, Side::None, ps))
            }
            (Rule::UnionENamed | Rule::UnionESelf, Term::Mu(a, _, _), Term::Mu(a2, b2, tb)) => {
                let p = skip(&d.premises[0]);
                let dl2 = with_entry(dl, a2, p.conclusion.delta.get(a));
                let shadow2 = shadow
                    || matches!(self.mode, Mode::StructSubst { alpha, .. } if alpha == a)
                    || matches!(self.mode, Mode::StructExtract { alpha } if alpha == a2)
                    || matches!(self.mode, Mode::RenameCollect { gamma } if gamma == a2);
                if let Mode::RenameCollect { gamma } = self.mode {
                    if !shadow && b2 == gamma && a2 != gamma {
                        self.found.push(p.clone());
                    }
                }
                let p2 = self.walk(p, tb, g, &dl2, shadow2)?;
                let (rule, bound) =
                    if a2 == b2 { (Rule::UnionESelf, ty.clone()) } else { (Rule::UnionENamed, self.bound_of(dl, b2)?) };
                let side = Side::Bound { premise: p2.conclusion.ty.clone(), bound };
                Ok(node(rule, side, vec![p2]))
            }
            (rule, _, _) => Err(format!("cannot rebuild {rule} over {t}")),
        }
    }

    fn struct_subst_node(
        &mut self,
        d: &Derivation,
        t: &Term,
        g: &LeftEnv,
        dl: &RightEnv,
        args: &[(Type, Derivation)],
    ) -> WalkResult {
        let (Term::Mu(a, _, _), Term::Mu(a2, b2, tb)) = (&d.conclusion.term, t) else {
            return Err(format!("expected a named term, found {t}"));
        };
        let Term::App(tp, _) = &**tb else {
            return Err(format!("expected an application under {a2}"));
        };
        let p = skip(&d.premises[0]);
        let dl2 = with_entry(dl, a2, p.conclusion.delta.get(a));
        let fp = self.walk(p, tp, g, &dl2, false)?;
        let parts = p.conclusion.ty.union_parts();
        if parts.is_empty() {
            return Err(format!("premise of {} has type ⊥ and cannot be applied", d.conclusion.term));
        }
        let mut ps = vec![fp];
        let mut ranges = Vec::new();
        for part in &parts {
            let (_, ran) = as_arrow(part).ok_or_else(|| format!("{part} is not an arrow"))?;
            let (_, arg) = args
                .iter()
                .find(|(arrow, _)| type_equiv(arrow, part))
                .ok_or_else(|| format!("no argument for {part}"))?;
            ps.push(rebase(arg, g, &dl2).map_err(|e| e.to_string())?);
            ranges.push(ran);
        }
        let app_ty = Type::union_of(ranges);
        let app = Derivation::new(Judgment::new(g.clone(), (**tb).clone(), app_ty.clone(), dl2), Rule::ArrowE, Side::None, ps);
        let side = Side::Bound { premise: app_ty, bound: self.bound_of(dl, b2)? };
        Ok(Derivation::new(Judgment::new(g.clone(), t.clone(), d.conclusion.ty.clone(), dl.clone()), Rule::UnionENamed, side, vec![app]))
    }

    fn struct_extract_node(&mut self, d: &Derivation, t: &Term, g: &LeftEnv, dl: &RightEnv, alpha: &Name) -> WalkResult {
        let (Term::Mu(a, _, _), Term::Mu(a2, _, tb)) = (&d.conclusion.term, t) else {
            return Err(format!("expected a named term, found {}", d.conclusion.term));
        };
        let p = skip(&d.premises[0]);
        if p.rule != Rule::ArrowE {
            return Err(format!("expected (→E) under {}", d.conclusion.term));
        }
        self.found.push(p.clone());
        let dl2 = with_entry(dl, a2, p.conclusion.delta.get(a));
        let fp = self.walk(&p.premises[0], tb, g, &dl2, false)?;
        let side = Side::Bound { premise: fp.conclusion.ty.clone(), bound: self.bound_of(dl, alpha)? };
        Ok(Derivation::new(Judgment::new(g.clone(), t.clone(), d.conclusion.ty.clone(), dl.clone()), Rule::UnionENamed, side, vec![fp]))
    }
}

/// Copies `d` onto `t`, which must have the same shape up to bound
/// identifiers, under the environments `g` and `dl`.
pub(crate) fn rebuild(d: &Derivation, t: &Term, g: &LeftEnv, dl: &RightEnv) -> WalkResult {
    Walker::new(Mode::Plain, false).walk(d, t, g, dl, false)
}

/// From `Γ, x:C ⊢ M : A | Δ` and `Γ ⊢ N : C | Δ`, a derivation of
/// `Γ ⊢ M[N/x] : A | Δ` with `Γ` and `Δ` given by `gamma` and `delta`.
pub fn term_subst_forward(
    d1: &Derivation,
    x: &Var,
    d2: &Derivation,
    gamma: &LeftEnv,
    delta: &RightEnv,
) -> WalkResult {
    let target = subst_term(&d1.conclusion.term, x, &d2.conclusion.term);
    Walker::new(Mode::TermSubst { x, arg: d2 }, false).walk(d1, &target, gamma, delta, false)
}

/// Splits derivations of one subject into per-component derivations,
/// rebased to `g` and `dl`, keeping the first of each component up to `∼`.
fn components(found: &[Derivation], g: &LeftEnv, dl: &RightEnv) -> Result<Vec<(Type, Derivation)>, String> {
    let mut out: Vec<(Type, Derivation)> = Vec::new();
    for d in found {
        let d = skip(d);
        let pieces: Vec<&Derivation> =
            if d.conclusion.ty.is_strict() { vec![d] } else { d.premises.iter().collect() };
        for p in pieces {
            let ty = p.conclusion.ty.clone();
            if !out.iter().any(|(u, _)| type_equiv(u, &ty)) {
                out.push((ty, rebase(p, g, dl).map_err(|e| e.to_string())?));
            }
        }
    }
    Ok(out)
}

/// From a derivation of `Γ ⊢ M[N/x] : A | Δ`, the witness `C` with
/// derivations of `Γ, x:C ⊢ M : A | Δ` and `Γ ⊢ N : C | Δ`.
pub fn term_subst_backward(
    d: &Derivation,
    m: &Term,
    x: &Var,
    n: &Term,
) -> Result<(Type, Derivation, Derivation), String> {
    let c = &d.conclusion;
    if subst_term(m, x, n) != c.term {
        return Err(format!("{} is not {m}[{n}/{x}]", c.term));
    }
    let mut g = c.gamma.clone();
    g.insert(x.clone(), Type::top());
    let mut w = Walker::new(Mode::TermExtract { x }, true);
    w.walk(d, m, &g, &c.delta, false)?;
    let comps = components(&w.found, &c.gamma, &c.delta)?;
    let witness = Type::inter_of(comps.iter().map(|(t, _)| t.clone()).collect());
    let arg = if comps.len() == 1 {
        comps.into_iter().next().unwrap().1
    } else {
        let j = Judgment::new(c.gamma.clone(), n.clone(), witness.clone(), c.delta.clone());
        Derivation::new(j, Rule::InterI, Side::None, comps.into_iter().map(|(_, p)| p).collect())
    };
    g.insert(x.clone(), witness.clone());
    let d1 = Walker::new(Mode::TermExtract { x }, false).walk(d, m, &g, &c.delta, false)?;
    Ok((witness, d1, arg))
}

/// From `Γ ⊢ M : C | α:∪(Ai→Bi), Δ'` and derivations of `Γ ⊢ N : Ai | Δ`
/// (one per arrow of `α`, in order), a derivation of
/// `Γ ⊢ M[N·γ/α] : C | Δ` where `delta` gives `γ` a type covering each `Bi`.
pub fn struct_subst_forward(
    d1: &Derivation,
    alpha: &Name,
    n: &Term,
    gamma: &Name,
    args: &[Derivation],
    g: &LeftEnv,
    delta: &RightEnv,
) -> WalkResult {
    let f = d1.conclusion.delta.get(alpha).ok_or_else(|| format!("{alpha} has no type"))?;
    let arrows = f.union_parts();
    if arrows.len() != args.len() {
        return Err(format!("{} arrows but {} arguments", arrows.len(), args.len()));
    }
    let pairs: Vec<(Type, Derivation)> = arrows.into_iter().zip(args.iter().cloned()).collect();
    let target = subst_structural(&d1.conclusion.term, alpha, n, gamma).map_err(|e| e.to_string())?;
    Walker::new(Mode::StructSubst { alpha, args: &pairs }, false).walk(d1, &target, g, delta, false)
}

/// What [`struct_extract`] recovers: the type `∪(Ai→Bi)` of `α`, the
/// derivation of `M` and one derivation of `N : Ai` per arrow.
#[derive(Clone, Debug)]
pub struct StructWitness {
    pub alpha_type: Type,
    pub derivation: Derivation,
    pub args: Vec<Derivation>,
}

/// From a derivation `d` of `M[N·γ/α]`, rebuilds `M` under `base` extended
/// with `α`. Arrows come from `seed` and from the `[γ](P N)` positions;
/// every component of `cover` missing among their ranges is added as
/// `⊤→B`, and `⊤→⊥` if there is no arrow at all and `min_one` is set.
#[allow(clippy::too_many_arguments)]
pub(crate) fn struct_extract(
    d: &Derivation,
    m: &Term,
    alpha: &Name,
    n: &Term,
    base: &RightEnv,
    seed: Vec<(Type, Derivation)>,
    cover: &Type,
    min_one: bool,
) -> Result<StructWitness, String> {
    let g = &d.conclusion.gamma;
    let mut w = Walker::new(Mode::StructExtract { alpha }, true);
    w.walk(d, m, g, &with_entry(base, alpha, None), false)?;
    let mut arrows: Vec<(Type, Derivation)> = Vec::new();
    let mut add = |arrow: Type, arg: Derivation| {
        if !arrows.iter().any(|(u, _)| type_equiv(u, &arrow)) {
            arrows.push((arrow, arg));
        }
    };
    for (arrow, arg) in seed {
        add(widen_range(&arrow, cover), rebase(&arg, g, base).map_err(|e| e.to_string())?);
    }
    for p in &w.found {
        for (arrow, arg) in p.premises[0].conclusion.ty.union_parts().into_iter().zip(&p.premises[1..]) {
            add(widen_range(&arrow, cover), rebase(arg, g, base).map_err(|e| e.to_string())?);
        }
    }
    let mut ranges = Vec::new();
    for (arrow, _) in &arrows {
        let (_, ran) = as_arrow(arrow).ok_or_else(|| format!("{arrow} is not an arrow"))?;
        merge_parts(&mut ranges, ran.union_parts());
    }
    for part in cover.union_parts() {
        if !ranges.iter().any(|r| type_equiv(r, &part)) {
            ranges.push(part.clone());
            arrows.push((Type::arrow(Type::top(), part), Derivation::top(g.clone(), n.clone(), base.clone())));
        }
    }
    if arrows.is_empty() && min_one {
        arrows.push((Type::arrow(Type::top(), Type::Bottom), Derivation::top(g.clone(), n.clone(), base.clone())));
    }
    let alpha_type = Type::union_of(arrows.iter().map(|(a, _)| a.clone()).collect());
    let dl = with_entry(base, alpha, Some(&alpha_type));
    let derivation = Walker::new(Mode::StructExtract { alpha }, false).walk(d, m, g, &dl, false)?;
    Ok(StructWitness { alpha_type, derivation, args: arrows.into_iter().map(|(_, a)| a).collect() })
}

/// Replaces each range component of `arrow` by the first component of
/// `cover` above it, so that the ranges match `cover` up to `∼`.
fn widen_range(arrow: &Type, cover: &Type) -> Type {
    let Some((dom, ran)) = as_arrow(arrow) else { return arrow.clone() };
    let targets = cover.union_parts();
    let mut parts = Vec::new();
    for r in ran.union_parts() {
        let up = targets.iter().find(|t| subtype(&r, t)).cloned().unwrap_or(r);
        merge_parts(&mut parts, [up]);
    }
    Type::arrow(dom, Type::union_of(parts))
}

/// From a derivation `d` of `M[β/γ]`, a derivation of `M` where `γ` gets
/// the union of `extra` and the premise types at the `[γ]` positions.
pub(crate) fn rename_extract(d: &Derivation, m: &Term, gamma: &Name, extra: &Type) -> Result<(Type, Derivation), String> {
    let c = &d.conclusion;
    let mut w = Walker::new(Mode::RenameCollect { gamma }, true);
    w.walk(d, m, &c.gamma, &with_entry(&c.delta, gamma, Some(&Type::Bottom)), false)?;
    let mut parts = extra.union_parts();
    for p in &w.found {
        merge_parts(&mut parts, p.conclusion.ty.union_parts());
    }
    let u = Type::union_of(parts);
    let r = rebuild(d, m, &c.gamma, &with_entry(&c.delta, gamma, Some(&u)))?;
    Ok((u, r))
}
