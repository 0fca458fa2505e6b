//! Inversion and bounded derivation search.

use std::collections::HashMap;

use super::{Derivation, IuError, Judgment, Rule, Side};
use crate::syntax::Term;
use crate::typelang::{canonicalize, type_equiv, well_formed, Language, LeftEnv, RightEnv, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum derivation height.
    pub max_depth: usize,
    /// Maximum number of groups when splitting a union over (→E), and of
    /// components in enumerated intersection witnesses.
    pub max_width: usize,
    /// Size cap for enumerated witness types.
    pub max_type_size: usize,
    /// Number of witness types tried for an unknown (→E) domain.
    pub max_universe: usize,
    /// Number of goals visited before giving up.
    pub max_steps: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_depth: 10, max_width: 2, max_type_size: 7, max_universe: 40, max_steps: 20_000 }
    }
}

impl SearchBudget {
    pub fn with_depth(self, max_depth: usize) -> Self {
        SearchBudget { max_depth, ..self }
    }

    pub fn doubled(self) -> Self {
        SearchBudget {
            max_depth: self.max_depth * 2,
            max_width: self.max_width * 2,
            max_type_size: self.max_type_size * 2,
            max_universe: self.max_universe * 2,
            max_steps: self.max_steps * 2,
        }
    }
}

/// A premise shape forced by the subject's head constructor. Unknown
/// (→E) domains are left for the search to enumerate.
#[derive(Clone, Debug, PartialEq)]
pub enum InversionCandidate {
    InterI { components: Vec<Type> },
    InterE { index: usize },
    ArrowI { premise: Judgment },
    ArrowE { ranges: Vec<Type> },
    UnionENamed { premise: Judgment, bound: Type },
    UnionESelf { premise: Judgment },
}

fn strip(ty: &Type) -> &Type {
    match ty {
        Type::Inter(ps) | Type::Union(ps) if ps.len() == 1 => strip(&ps[0]),
        t => t,
    }
}

fn dedupe(parts: Vec<Type>) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    for p in parts {
        if !out.iter().any(|q| type_equiv(q, &p)) {
            out.push(p);
        }
    }
    out
}

/// Sub-unions of `parts`: non-empty subsets by increasing size, then `⊥`.
fn sub_unions(parts: &[Type]) -> Vec<Type> {
    let k = parts.len().min(6);
    let mut masks: Vec<u32> = (1..(1u32 << k)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut out: Vec<Type> = masks
        .into_iter()
        .map(|m| Type::union_of((0..k).filter(|i| m & (1 << i) != 0).map(|i| parts[i].clone()).collect()))
        .collect();
    out.push(Type::Bottom);
    out
}

/// Set partitions of `parts` into at most `width` non-empty groups.
pub(crate) fn groupings(parts: &[Type], width: usize) -> Vec<Vec<Type>> {
    fn go(i: usize, parts: &[Type], width: usize, cur: &mut Vec<Vec<Type>>, out: &mut Vec<Vec<Vec<Type>>>) {
        if i == parts.len() {
            out.push(cur.clone());
            return;
        }
        for g in 0..cur.len() {
            cur[g].push(parts[i].clone());
            go(i + 1, parts, width, cur, out);
            cur[g].pop();
        }
        if cur.len() < width {
            cur.push(vec![parts[i].clone()]);
            go(i + 1, parts, width, cur, out);
            cur.pop();
        }
    }
    if parts.is_empty() {
        return vec![vec![Type::Bottom]];
    }
    let mut out = Vec::new();
    go(0, parts, width.max(1), &mut Vec::new(), &mut out);
    out.sort_by_key(|g| g.len());
    out.into_iter().map(|g| g.into_iter().map(Type::union_of).collect()).collect()
}

/// Premise shapes for `j`, following the subject's head constructor.
pub fn invert(j: &Judgment, max_width: usize) -> Result<Vec<InversionCandidate>, IuError> {
    let comps = j.ty.inter_parts();
    let mut out = Vec::new();
    if comps.len() != 1 {
        out.push(InversionCandidate::InterI { components: comps });
        return Ok(out);
    }
    let goal = strip(&j.ty);
    match &j.term {
        Term::Var(x) => {
            if let Some(gx) = j.gamma.get(x) {
                for (i, p) in gx.inter_parts().iter().enumerate() {
                    if type_equiv(p, goal) {
                        out.push(InversionCandidate::InterE { index: i + 1 });
                    }
                }
            }
        }
        Term::Abs(x, body) => {
            if let Type::Arrow(l, r) = goal {
                let mut g = j.gamma.clone();
                g.insert(x.clone(), (**l).clone());
                let premise = Judgment::new(g, (**body).clone(), (**r).clone(), j.delta.clone());
                out.push(InversionCandidate::ArrowI { premise });
            }
        }
        Term::App(..) => {
            let parts = dedupe(goal.union_parts());
            for ranges in groupings(&parts, max_width) {
                out.push(InversionCandidate::ArrowE { ranges });
            }
        }
        Term::Mu(alpha, beta, body) if alpha != beta => {
            if let Some(bound) = j.delta.get(beta) {
                let mut dl = j.delta.clone();
                dl.insert(alpha.clone(), goal.clone());
                for u in sub_unions(&dedupe(bound.union_parts())) {
                    let premise = Judgment::new(j.gamma.clone(), (**body).clone(), u, dl.clone());
                    out.push(InversionCandidate::UnionENamed { premise, bound: bound.clone() });
                }
            }
        }
        Term::Mu(beta, _, body) => {
            let mut dl = j.delta.clone();
            dl.insert(beta.clone(), goal.clone());
            for u in sub_unions(&dedupe(goal.union_parts())) {
                let premise = Judgment::new(j.gamma.clone(), (**body).clone(), u, dl.clone());
                out.push(InversionCandidate::UnionESelf { premise });
            }
        }
    }
    if out.is_empty() {
        Err(IuError::EmptyInversion(j.to_string()))
    } else {
        Ok(out)
    }
}

fn contains_union(ty: &Type) -> bool {
    match ty {
        Type::Union(_) | Type::Bottom => true,
        Type::Var(_) => false,
        Type::Arrow(l, r) => contains_union(l) || contains_union(r),
        Type::Inter(ps) => ps.iter().any(contains_union),
    }
}

/// Candidate types for unknown (→E) domains: `⊤`, strict subterms of
/// `seeds`, arrows between them and binary intersections, smallest first.
/// Outside the strict system every subterm of a seed is kept regardless of
/// the size cap.
pub(crate) fn universe(seeds: &[Type], budget: &SearchBudget, strict: bool) -> Vec<Type> {
    let cap = budget.max_type_size;
    let lang = if strict { Language::Strict } else { Language::Iu };
    let admissible = |t: &Type| t.size() <= cap && well_formed(t, lang) && !(strict && contains_union(t));
    let mut atoms: Vec<Type> = Vec::new();
    let push = |t: Type, set: &mut Vec<Type>| {
        let t = canonicalize(&t);
        if !set.contains(&t) {
            set.push(t);
        }
    };
    for seed in seeds {
        let mut subs = Vec::new();
        seed.subterms(&mut subs);
        for s in subs {
            for p in s.inter_parts() {
                let seeded = !strict && well_formed(&p, lang);
                if p.is_strict() && (admissible(&p) || seeded) {
                    push(p, &mut atoms);
                }
            }
        }
    }
    if !strict {
        push(Type::Bottom, &mut atoms);
    }
    let mut doms = vec![Type::top()];
    doms.extend(atoms.iter().cloned());
    let mut strict_types = atoms.clone();
    for d in &doms {
        for r in &atoms {
            let t = Type::arrow(d.clone(), r.clone());
            if admissible(&t) {
                push(t, &mut strict_types);
            }
        }
    }
    let mut all = vec![Type::top()];
    all.extend(strict_types.iter().cloned());
    if budget.max_width >= 2 {
        for (i, a) in strict_types.iter().enumerate() {
            for b in &strict_types[i + 1..] {
                let t = Type::inter(vec![a.clone(), b.clone()]);
                if admissible(&t) && !type_equiv(a, b) {
                    push(t, &mut all);
                }
            }
        }
    }
    all.sort_by_key(|t| (t.size(), crate::grammar::print_type(t)));
    all.truncate(budget.max_universe);
    if !strict {
        let mut pinned = Vec::new();
        for seed in seeds {
            seed.subterms(&mut pinned);
        }
        for t in atoms.into_iter().chain(pinned.iter().map(canonicalize)) {
            if well_formed(&t, lang) && !all.contains(&t) {
                all.push(t);
            }
        }
    }
    all
}

enum Memo {
    Found(Derivation),
    Failed(usize),
}

struct Searcher {
    budget: SearchBudget,
    universe: Vec<Type>,
    memo: HashMap<Judgment, Memo>,
    steps: usize,
}

impl Searcher {
    fn go(&mut self, j: &Judgment, depth: usize) -> Option<Derivation> {
        if depth == 0 || self.steps >= self.budget.max_steps {
            return None;
        }
        self.steps += 1;
        match self.memo.get(j) {
            Some(Memo::Found(d)) if d.depth() <= depth => return Some(d.clone()),
            Some(Memo::Failed(tried)) if *tried >= depth => return None,
            _ => {}
        }
        let found = self.solve(j, depth);
        let entry = match &found {
            Some(d) => Memo::Found(d.clone()),
            None => Memo::Failed(depth),
        };
        self.memo.insert(j.clone(), entry);
        found
    }

    fn solve(&mut self, j: &Judgment, depth: usize) -> Option<Derivation> {
        if let Term::App(..) = &j.term {
            if j.ty.inter_parts().len() == 1 {
                if let Some(d) = self.var_spine(j, depth) {
                    return Some(d);
                }
                if matches!(spine(&j.term).0, Term::Var(_)) {
                    return None;
                }
            }
        }
        let candidates = invert(j, self.budget.max_width).ok()?;
        for cand in candidates {
            let d = match cand {
                InversionCandidate::InterI { components } => {
                    let mut ps = Vec::new();
                    for c in components {
                        match self.go(&j.with_ty(c), depth - 1) {
                            Some(p) => ps.push(p),
                            None => break,
                        }
                    }
                    (ps.len() == j.ty.inter_parts().len())
                        .then(|| Derivation::new(j.clone(), Rule::InterI, Side::None, ps))
                }
                InversionCandidate::InterE { index } => {
                    Some(Derivation::new(j.clone(), Rule::InterE, Side::Index(index), vec![]))
                }
                InversionCandidate::ArrowI { premise } => self
                    .go(&premise, depth - 1)
                    .map(|p| Derivation::new(j.clone(), Rule::ArrowI, Side::None, vec![p])),
                InversionCandidate::UnionENamed { premise, bound } => self.go(&premise, depth - 1).map(|p| {
                    let side = Side::Bound { premise: premise.ty.clone(), bound };
                    Derivation::new(j.clone(), Rule::UnionENamed, side, vec![p])
                }),
                InversionCandidate::UnionESelf { premise } => self.go(&premise, depth - 1).map(|p| {
                    let side = Side::Bound { premise: premise.ty.clone(), bound: j.ty.clone() };
                    Derivation::new(j.clone(), Rule::UnionESelf, side, vec![p])
                }),
                InversionCandidate::ArrowE { ranges } => self.app_with_domains(j, &ranges, depth),
            };
            if d.is_some() {
                return d;
            }
        }
        None
    }

    /// (→E) with the given ranges, enumerating the domains.
    fn app_with_domains(&mut self, j: &Judgment, ranges: &[Type], depth: usize) -> Option<Derivation> {
        let Term::App(f, a) = &j.term else { return None };
        let n = ranges.len();
        let universe = self.universe.clone();
        let mut idx = vec![0usize; n];
        loop {
            let doms: Vec<Type> = idx.iter().map(|&i| universe[i].clone()).collect();
            if let Some(d) = self.try_app(j, f, a, &doms, ranges, depth) {
                return Some(d);
            }
            if self.steps >= self.budget.max_steps {
                return None;
            }
            // odometer over universe^n
            let mut k = 0;
            loop {
                if k == n {
                    return None;
                }
                idx[k] += 1;
                if idx[k] < universe.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn try_app(
        &mut self,
        j: &Judgment,
        f: &Term,
        a: &Term,
        doms: &[Type],
        ranges: &[Type],
        depth: usize,
    ) -> Option<Derivation> {
        let mut args = Vec::new();
        for d in doms {
            args.push(self.go(&Judgment::new(j.gamma.clone(), a.clone(), d.clone(), j.delta.clone()), depth - 1)?);
        }
        let fun_ty = Type::union_of(
            doms.iter().zip(ranges).map(|(d, r)| Type::arrow(d.clone(), r.clone())).collect(),
        );
        let fun = self.go(&Judgment::new(j.gamma.clone(), f.clone(), fun_ty, j.delta.clone()), depth - 1)?;
        let mut ps = vec![fun];
        ps.extend(args);
        Some(Derivation::new(j.clone(), Rule::ArrowE, Side::None, ps))
    }

    /// Applications headed by a variable: the head's type is a component
    /// of its assumption, and each application step is then determined.
    fn var_spine(&mut self, j: &Judgment, depth: usize) -> Option<Derivation> {
        let (head, args) = spine(&j.term);
        let Term::Var(x) = head else { return None };
        let gx = j.gamma.get(x)?;
        if depth <= args.len() {
            return None;
        }
        'parts: for (i, part) in gx.inter_parts().into_iter().enumerate() {
            let head_j = Judgment::new(j.gamma.clone(), head.clone(), part.clone(), j.delta.clone());
            let mut d = Derivation::new(head_j, Rule::InterE, Side::Index(i + 1), vec![]);
            let mut cur = part;
            let mut subject = head.clone();
            for (k, arg) in args.iter().enumerate() {
                let remaining = depth - (args.len() - 1 - k);
                let comps = cur.union_parts();
                if comps.is_empty() {
                    continue 'parts;
                }
                let mut ps = vec![d];
                let mut ranges = Vec::new();
                for c in comps {
                    let Type::Arrow(dom, ran) = strip(&c).clone() else { continue 'parts };
                    let aj = Judgment::new(j.gamma.clone(), (*arg).clone(), *dom, j.delta.clone());
                    let Some(p) = self.go(&aj, remaining - 1) else { continue 'parts };
                    ps.push(p);
                    ranges.push(*ran);
                }
                cur = Type::union_of(ranges);
                subject = Term::app(subject, (*arg).clone());
                let cj = Judgment::new(j.gamma.clone(), subject.clone(), cur.clone(), j.delta.clone());
                d = Derivation::new(cj, Rule::ArrowE, Side::None, ps);
            }
            if type_equiv(&cur, &j.ty) {
                d.conclusion.ty = j.ty.clone();
                return Some(d);
            }
        }
        None
    }
}

fn spine(term: &Term) -> (&Term, Vec<&Term>) {
    let mut args = Vec::new();
    let mut t = term;
    while let Term::App(f, a) = t {
        args.push(&**a);
        t = f;
    }
    args.reverse();
    (t, args)
}

/// Bounded search for a derivation of `j`. Witness types for (→E) domains
/// come from the subterm closure of the judgment's types.
pub fn derive(j: &Judgment, budget: SearchBudget) -> Result<Derivation, IuError> {
    derive_with(j, budget, &[])
}

/// [`derive`] with additional seed types for the witness universe.
pub fn derive_with(j: &Judgment, budget: SearchBudget, extra_seeds: &[Type]) -> Result<Derivation, IuError> {
    if let Some(e) = j.well_formedness_error() {
        return Err(IuError::IllFormed(e));
    }
    let mut seeds: Vec<Type> = j.gamma.values().chain(j.delta.values()).cloned().collect();
    seeds.push(j.ty.clone());
    seeds.extend(extra_seeds.iter().cloned());
    run(j, budget, universe(&seeds, &budget, false))
}

fn run(j: &Judgment, budget: SearchBudget, universe: Vec<Type>) -> Result<Derivation, IuError> {
    let mut s = Searcher { budget, universe, memo: HashMap::new(), steps: 0 };
    s.go(j, budget.max_depth).ok_or(IuError::NotFoundWithinBudget)
}

/// Bounded search in the strict intersection system: pure λ-terms, no
/// unions, no right environment.
pub fn check_strict(gamma: &LeftEnv, term: &Term, ty: &Type, budget: SearchBudget) -> Result<Derivation, IuError> {
    if !term.is_pure_lambda() {
        return Err(IuError::NotPureLambda);
    }
    let strict_ok = |t: &Type| well_formed(t, Language::Strict);
    if !strict_ok(ty) || !gamma.values().all(strict_ok) {
        return Err(IuError::IllFormed("types must be strict intersection types".into()));
    }
    let j = Judgment::new(gamma.clone(), term.clone(), ty.clone(), RightEnv::new());
    let mut seeds: Vec<Type> = gamma.values().cloned().collect();
    seeds.push(ty.clone());
    let strict_budget = SearchBudget { max_width: budget.max_width, ..budget };
    let mut s = Searcher {
        budget: SearchBudget { max_width: 1, ..strict_budget },
        universe: universe(&seeds, &strict_budget, true),
        memo: HashMap::new(),
        steps: 0,
    };
    s.go(&j, budget.max_depth).ok_or(IuError::NotFoundWithinBudget)
}
