//! Random typed judgments. Generation runs goal first: a type is chosen,
//! then a rule able to conclude it, then premises for that rule. Free
//! variables and names collect the types they are used at, and their
//! environments are fixed once the term is complete.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::iu_types::{project, rebase, Derivation, Judgment, Rule, Side};
use crate::syntax::{fresh_var, Name, Term, Var};
use crate::typelang::{type_equiv, LeftEnv, RightEnv, Type};

use super::walk::{as_arrow, merge_parts};

/// Parameters of the generator. Equal configurations give equal output.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on the number of term nodes, ⊤-typed subterms excluded.
    pub max_term_size: usize,
    /// How many μ-names the generator draws from.
    pub name_pool: usize,
    /// How many λ-variables the generator draws from.
    pub var_pool: usize,
    /// Weight of the (∪E) rules relative to the others; 0 gives pure λ-terms.
    pub mu_frequency: f64,
    /// Number of generated cases per suite.
    pub cases: usize,
    /// Lets (∪E) premises have type `⊥`. Off by default: with it, subject
    /// reduction fails on instances like `(μα.[α](f z))N` with `f:X→⊥`.
    pub empty_union_premises: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_term_size: 10,
            name_pool: 3,
            var_pool: 3,
            mu_frequency: 0.3,
            cases: 500,
            empty_union_premises: false,
        }
    }
}

const TYPE_VARS: [&str; 4] = ["A", "B", "C", "D"];
const VAR_BASE: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
const NAME_BASE: [&str; 6] = ["a", "b", "c", "d", "e", "k"];

fn pool<T>(base: &[&str], n: usize, make: fn(String) -> T) -> Vec<T> {
    (0..n.max(1))
        .map(|i| make(if i < base.len() { base[i].to_string() } else { format!("{}{}", base[i % base.len()], i) }))
        .collect()
}

/// Bound identifiers in scope with their types.
#[derive(Clone, Default)]
pub(crate) struct Scope {
    g: LeftEnv,
    dl: RightEnv,
}

/// Types required of free identifiers, and identifiers kept out.
#[derive(Clone, Default)]
pub(crate) struct Demands {
    pub vars: BTreeMap<Var, Vec<Type>>,
    pub names: BTreeMap<Name, Vec<Type>>,
    pub avoid_vars: BTreeSet<Var>,
    pub avoid_names: BTreeSet<Name>,
}

impl Demands {
    pub fn gamma(&self) -> LeftEnv {
        self.vars.iter().map(|(x, ts)| (x.clone(), Type::inter_of(ts.clone()))).collect()
    }

    pub fn delta(&self) -> RightEnv {
        self.names.iter().map(|(a, ts)| (a.clone(), Type::union_of(ts.clone()))).collect()
    }
}

pub(crate) struct Generator {
    pub rng: ChaCha8Rng,
    pub cfg: GenConfig,
    vars: Vec<Var>,
    names: Vec<Name>,
}

fn leaf(sc: &Scope, term: Term, ty: Type, rule: Rule, side: Side, premises: Vec<Derivation>) -> Derivation {
    Derivation::new(Judgment::new(sc.g.clone(), term, ty, sc.dl.clone()), rule, side, premises)
}

/// A derivation of `M : target` from one of `M : ∩ components`, where every
/// component of `target` is among them.
pub(crate) fn select(d: &Derivation, target: &Type) -> Derivation {
    if target.is_strict() {
        return project(d, target).expect("component present");
    }
    let ps = target.inter_parts().iter().map(|c| project(d, c).expect("component present")).collect();
    Derivation::new(d.conclusion.with_ty(target.clone()), Rule::InterI, Side::None, ps)
}

impl Generator {
    pub fn new(cfg: &GenConfig) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg: cfg.clone(),
            vars: pool(&VAR_BASE, cfg.var_pool, Var::new),
            names: pool(&NAME_BASE, cfg.name_pool.max(2), Name::new),
        }
    }

    fn type_var(&mut self) -> Type {
        Type::var(*TYPE_VARS.choose(&mut self.rng).unwrap())
    }

    /// A strict type of nesting depth at most `depth`.
    pub fn strict_type(&mut self, depth: usize) -> Type {
        let r = self.rng.gen_range(0..10);
        if depth == 0 || r < 5 {
            return self.type_var();
        }
        match r {
            5..=7 => Type::arrow(self.arg_type(depth - 1), self.strict_type(depth - 1)),
            8 => {
                let a = self.type_var();
                let b = Type::arrow(self.arg_type(depth - 1), self.type_var());
                Type::union(vec![a, b])
            }
            _ => Type::arrow(self.arg_type(depth - 1), Type::Bottom),
        }
    }

    /// A type for the left of an arrow: strict, `⊤` or a binary intersection.
    pub fn arg_type(&mut self, depth: usize) -> Type {
        match self.rng.gen_range(0..10) {
            0..=5 => self.strict_type(depth),
            6 | 7 => Type::top(),
            _ => {
                let a = self.strict_type(depth);
                let b = self.strict_type(depth);
                if type_equiv(&a, &b) {
                    a
                } else {
                    Type::inter(vec![a, b])
                }
            }
        }
    }

    /// The type of a generated judgment; an intersection now and then.
    pub fn root_type(&mut self) -> Type {
        if self.rng.gen_bool(0.15) {
            let a = self.strict_type(2);
            let b = self.strict_type(2);
            if !type_equiv(&a, &b) {
                return Type::inter(vec![a, b]);
            }
        }
        self.strict_type(2)
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.rng).unwrap().clone()
    }

    fn sub_union(&mut self, parts: &[Type]) -> Type {
        let keep: Vec<Type> = parts.iter().filter(|_| self.rng.gen_bool(0.6)).cloned().collect();
        if keep.is_empty() && !parts.is_empty() {
            return self.pick(parts);
        }
        Type::union_of(keep)
    }

    /// A term with no typing obligations, for `⊤` goals.
    pub fn untyped(&mut self, sc: &Scope, size: usize) -> Term {
        let mut vars: Vec<Var> = sc.g.keys().cloned().collect();
        vars.extend(self.vars.iter().cloned());
        if size <= 1 {
            return Term::Var(self.pick(&vars));
        }
        let mu = self.cfg.mu_frequency > 0.0 && self.rng.gen_bool(self.cfg.mu_frequency.min(1.0) / 2.0);
        if mu {
            let (a, b) = (self.pick(&self.names.clone()), self.pick(&self.names.clone()));
            return Term::Mu(a, b, Box::new(self.untyped(sc, size - 1)));
        }
        if size >= 3 && self.rng.gen_bool(0.5) {
            let k = self.rng.gen_range(1..size - 1);
            return Term::app(self.untyped(sc, k), self.untyped(sc, size - 1 - k));
        }
        let y = self.pick(&self.vars.clone());
        Term::Abs(y, Box::new(self.untyped(sc, size - 1)))
    }

    fn free_var(&mut self, sc: &Scope, dm: &Demands) -> Var {
        let open: Vec<Var> =
            self.vars.iter().filter(|x| !sc.g.contains_key(*x) && !dm.avoid_vars.contains(*x)).cloned().collect();
        if open.is_empty() {
            let mut taken: BTreeSet<Var> = sc.g.keys().cloned().collect();
            taken.extend(dm.avoid_vars.iter().cloned());
            taken.extend(self.vars.iter().cloned());
            return fresh_var(&taken, &Var::new("v"));
        }
        self.pick(&open)
    }

    /// A variable typed with every component of `comps`.
    fn variable(&mut self, comps: &[Type], goal: &Type, sc: &Scope, dm: &mut Demands) -> Derivation {
        let bound: Vec<Var> = sc
            .g
            .iter()
            .filter(|(_, t)| {
                let have = t.inter_parts();
                comps.iter().all(|c| have.iter().any(|h| type_equiv(h, c)))
            })
            .map(|(x, _)| x.clone())
            .collect();
        let x = if !bound.is_empty() && self.rng.gen_bool(0.7) {
            self.pick(&bound)
        } else {
            let x = self.free_var(sc, dm);
            merge_parts(dm.vars.entry(x.clone()).or_default(), comps.iter().cloned());
            x
        };
        let term = Term::Var(x);
        let leaves: Vec<Derivation> = comps
            .iter()
            .map(|c| leaf(sc, term.clone(), c.clone(), Rule::InterE, Side::Index(1), vec![]))
            .collect();
        if goal.is_strict() {
            return leaves.into_iter().next().unwrap();
        }
        leaf(sc, term, goal.clone(), Rule::InterI, Side::None, leaves)
    }

    /// A derivation skeleton for `goal`: environments hold only what is
    /// bound above each node, and side payloads are placeholders until
    /// [`Generator::finish`].
    pub fn gen(&mut self, goal: &Type, sc: &Scope, size: usize, dm: &mut Demands) -> Derivation {
        if !goal.is_strict() {
            let comps = goal.inter_parts();
            if comps.is_empty() {
                let t = self.untyped(sc, size.clamp(1, 4));
                return leaf(sc, t, goal.clone(), Rule::InterI, Side::None, vec![]);
            }
            let arrows: Vec<(Type, Type)> = comps.iter().filter_map(as_arrow).collect();
            let same_left =
                arrows.len() == comps.len() && arrows.iter().all(|(l, _)| type_equiv(l, &arrows[0].0));
            if same_left && size >= 2 && self.rng.gen_bool(0.6) {
                return self.abstraction_for_all(goal, &comps, &arrows, sc, size, dm);
            }
            return self.variable(&comps, goal, sc, dm);
        }
        let arrow = as_arrow(goal);
        let parts = goal.union_parts();
        let can_mu = size >= 2 && self.cfg.mu_frequency > 0.0;
        let mut choices: Vec<(u32, u8)> = vec![(2, 0)];
        if arrow.is_some() && size >= 2 {
            choices.push((5, 1));
        }
        if size >= 3 {
            choices.push((4, 2));
        }
        if can_mu {
            choices.push(((self.cfg.mu_frequency * 12.0).ceil() as u32, 3));
        }
        let total: u32 = choices.iter().map(|c| c.0).sum();
        let mut r = self.rng.gen_range(0..total);
        let mut kind = 0;
        for (w, k) in choices {
            if r < w {
                kind = k;
                break;
            }
            r -= w;
        }
        match kind {
            1 => {
                let (left, right) = arrow.unwrap();
                let y = self.pick(&self.vars.clone());
                let mut sc2 = sc.clone();
                sc2.g.insert(y.clone(), left);
                let body = self.gen(&right, &sc2, size - 1, dm);
                let t = Term::Abs(y, Box::new(body.conclusion.term.clone()));
                leaf(sc, t, goal.clone(), Rule::ArrowI, Side::None, vec![body])
            }
            2 => self.application(goal, &parts, sc, size, dm),
            3 => self.mu(goal, &parts, sc, size, dm).unwrap_or_else(|| self.variable(&[goal.clone()], goal, sc, dm)),
            _ => self.variable(&[goal.clone()], goal, sc, dm),
        }
    }

    fn abstraction_for_all(
        &mut self,
        goal: &Type,
        comps: &[Type],
        arrows: &[(Type, Type)],
        sc: &Scope,
        size: usize,
        dm: &mut Demands,
    ) -> Derivation {
        let y = self.pick(&self.vars.clone());
        let mut sc2 = sc.clone();
        sc2.g.insert(y.clone(), arrows[0].0.clone());
        let mut rights = Vec::new();
        merge_parts(&mut rights, arrows.iter().map(|(_, r)| r.clone()));
        let body = self.gen(&Type::inter_of(rights), &sc2, size - 1, dm);
        let t = Term::Abs(y, Box::new(body.conclusion.term.clone()));
        let ps = comps
            .iter()
            .zip(arrows)
            .map(|(c, (_, r))| leaf(sc, t.clone(), c.clone(), Rule::ArrowI, Side::None, vec![select(&body, r)]))
            .collect();
        leaf(sc, t, goal.clone(), Rule::InterI, Side::None, ps)
    }

    fn application(&mut self, goal: &Type, parts: &[Type], sc: &Scope, size: usize, dm: &mut Demands) -> Derivation {
        let mut distinct = Vec::new();
        merge_parts(&mut distinct, parts.iter().cloned());
        let ranges: Vec<Type> = if distinct.is_empty() {
            vec![Type::Bottom]
        } else {
            let n = if distinct.len() >= 2 && self.rng.gen_bool(0.4) { 2 } else { 1 };
            distinct.shuffle(&mut self.rng);
            let mut groups = vec![Vec::new(); n];
            for (i, p) in distinct.into_iter().enumerate() {
                let g = if i < n { i } else { self.rng.gen_range(0..n) };
                groups[g].push(p);
            }
            groups.into_iter().map(Type::union_of).collect()
        };
        let domains: Vec<Type> = ranges.iter().map(|_| self.arg_type(1)).collect();
        let mut comps = Vec::new();
        for a in &domains {
            merge_parts(&mut comps, a.inter_parts());
        }
        let fun_ty = Type::union_of(domains.iter().zip(&ranges).map(|(a, b)| Type::arrow(a.clone(), b.clone())).collect());
        let fsize = self.rng.gen_range(1..=size - 2);
        let fd = self.gen(&fun_ty, sc, fsize, dm);
        let ad = self.gen(&Type::inter_of(comps), sc, size - 1 - fsize, dm);
        let t = Term::app(fd.conclusion.term.clone(), ad.conclusion.term.clone());
        let mut ps = vec![fd];
        ps.extend(domains.iter().map(|a| select(&ad, a)));
        leaf(sc, t, goal.clone(), Rule::ArrowE, Side::None, ps)
    }

    fn mu(&mut self, goal: &Type, parts: &[Type], sc: &Scope, size: usize, dm: &mut Demands) -> Option<Derivation> {
        let allow_empty = self.cfg.empty_union_premises;
        let names = self.names.clone();
        let bound: Vec<Name> = sc
            .dl
            .iter()
            .filter(|(_, t)| allow_empty || !t.union_parts().is_empty())
            .map(|(a, _)| a.clone())
            .collect();
        let free: Vec<Name> =
            names.iter().filter(|a| !sc.dl.contains_key(*a) && !dm.avoid_names.contains(*a)).cloned().collect();
        let self_ok = allow_empty || !parts.is_empty();
        let named_ok = !bound.is_empty() || !free.is_empty();
        let use_self = self_ok && (!named_ok || self.rng.gen_bool(0.4));
        if !use_self && !named_ok {
            return None;
        }
        if use_self {
            let alpha = self.pick(&names);
            let u = if parts.is_empty() || (allow_empty && self.rng.gen_bool(0.1)) {
                Type::Bottom
            } else {
                self.sub_union(parts)
            };
            let mut sc2 = sc.clone();
            sc2.dl.insert(alpha.clone(), goal.clone());
            let body = self.gen(&u, &sc2, size - 1, dm);
            let t = Term::Mu(alpha.clone(), alpha, Box::new(body.conclusion.term.clone()));
            let side = Side::Bound { premise: u, bound: goal.clone() };
            return Some(leaf(sc, t, goal.clone(), Rule::UnionESelf, side, vec![body]));
        }
        let use_bound = !bound.is_empty() && (free.is_empty() || self.rng.gen_bool(0.5));
        let (beta, u) = if use_bound {
            let beta = self.pick(&bound);
            let bparts = sc.dl[&beta].union_parts();
            let u = if bparts.is_empty() { Type::Bottom } else { self.sub_union(&bparts) };
            (beta, u)
        } else {
            let beta = self.pick(&free);
            let mut u = if self.rng.gen_bool(0.5) {
                Type::arrow(self.arg_type(1), self.strict_type(1))
            } else {
                self.strict_type(1)
            };
            if u.union_parts().is_empty() && !allow_empty {
                u = self.type_var();
            }
            merge_parts(dm.names.entry(beta.clone()).or_default(), u.union_parts());
            (beta, u)
        };
        let others: Vec<Name> = names.iter().filter(|a| **a != beta).cloned().collect();
        let alpha = self.pick(&others);
        let mut sc2 = sc.clone();
        sc2.dl.insert(alpha.clone(), goal.clone());
        let body = self.gen(&u, &sc2, size - 1, dm);
        let t = Term::Mu(alpha, beta, Box::new(body.conclusion.term.clone()));
        let side = Side::Bound { premise: u, bound: Type::top() };
        Some(leaf(sc, t, goal.clone(), Rule::UnionENamed, side, vec![body]))
    }

    /// Fixes the environments of a skeleton and recomputes its payloads.
    pub fn finish(&self, d: &Derivation, gamma: &LeftEnv, delta: &RightEnv) -> Derivation {
        rebase(d, gamma, delta).expect("demands cover every free use")
    }

    /// One typed judgment with its derivation.
    pub fn next_case(&mut self) -> (Judgment, Derivation) {
        let goal = self.root_type();
        let size = self.rng.gen_range(1..=self.cfg.max_term_size.max(1));
        let mut dm = Demands::default();
        let d = self.gen(&goal, &Scope::default(), size, &mut dm);
        let d = self.finish(&d, &dm.gamma(), &dm.delta());
        (d.conclusion.clone(), d)
    }
}

/// The stream of generated judgments for a configuration.
pub struct TypedCases {
    generator: Generator,
}

impl Iterator for TypedCases {
    type Item = (Judgment, Derivation);

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.generator.next_case())
    }
}

/// Deterministic, unbounded stream of derivable judgments with their
/// derivations; every rule of `⊢` except (T) and (W) occurs.
pub fn gen_typed_judgment(cfg: &GenConfig) -> TypedCases {
    TypedCases { generator: Generator::new(cfg) }
}
