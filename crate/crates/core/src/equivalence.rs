//! Language-relative equivalence of pointed models by partition refinement.
//!
//! Depth-0 classes group worlds by their valuation over a fixed variable set.
//! For `Ldot` and `Lplus`, a class at depth `d` splits according to which
//! unions `P` of depth-`d` classes pass the modal test at its members:
//!
//! - `Ldot`: every R1-successor class and every R2-successor class agree on membership in `P`;
//! - `Lplus`: the R1-successor classes lie inside `P`, or no R2-successor class meets `P`.
//!
//! All `2^|K|` unions are enumerated explicitly, so the class count is capped.
//! `Lfull` uses the usual bisimulation-style split on R1 and R2 successor classes.
//!
//! Worlds share a depth-`d` class exactly when they agree on every formula of
//! the language of modal depth at most `d` over the variable set.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::kripke::{disjoint_union, Model, WorldId};
use crate::semantics::{satisfies_at, Evaluator};
use crate::syntax::{Formula, LanguageTag, Rel};

pub const DEFAULT_CLASS_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("{classes} classes at depth {depth} exceeds the cap of {cap}")]
    ClassCap { depth: usize, classes: usize, cap: usize },
    #[error("world index {0} out of range")]
    BadWorld(WorldId),
    #[error("brute-force budget exceeded: {0}")]
    Budget(String),
    #[error("generated formula {0} failed to separate the points")]
    Unverified(String),
}

#[derive(Clone, Copy, Debug)]
pub struct RefineOptions {
    pub max_depth: Option<usize>,
    pub class_cap: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { max_depth: None, class_cap: DEFAULT_CLASS_CAP }
    }
}

/// Result of refinement on one model.
#[derive(Clone, Debug)]
pub struct TypeAssignment {
    pub language: LanguageTag,
    pub varset: Vec<String>,
    /// `partitions[d][w]` is the class of world `w` at depth `d`; classes are
    /// numbered by first occurrence in world order.
    pub partitions: Vec<Vec<usize>>,
    /// Depth at which the partition stopped changing, if reached.
    pub fixpoint: Option<usize>,
    /// Per depth and class: which modal tests hold, as computed from a member.
    signatures: Vec<Vec<Signature>>,
    model: Model,
}

/// For `Ldot`/`Lplus`: one bit per union `P` of the previous classes.
/// For `Lfull`: R1 and R2 successor classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Signature {
    Unions(FixedBitSet),
    Successors(FixedBitSet, FixedBitSet),
}

fn canonical(keys: &[impl Eq + std::hash::Hash + Clone]) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.clone()).or_insert(next)
        })
        .collect()
}

fn class_count(part: &[usize]) -> usize {
    part.iter().max().map_or(0, |m| m + 1)
}

fn bits(m: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

/// Test on unions for one world, given the masks of successor classes.
fn union_test(lang: LanguageTag, a: u32, b: u32, p: u32) -> bool {
    match lang {
        LanguageTag::Lplus => a & !p == 0 || b & p == 0,
        _ => bits(a).all(|i| bits(b).all(|j| (p >> i & 1) == (p >> j & 1))),
    }
}

fn successor_classes(m: &Model, part: &[usize], k: usize, r: Rel, x: WorldId) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(k);
    for y in m.successors(r, x).ones() {
        s.insert(part[y]);
    }
    s
}

fn mask(s: &FixedBitSet) -> u32 {
    s.ones().fold(0, |acc, i| acc | 1 << i)
}

fn signature(m: &Model, lang: LanguageTag, part: &[usize], x: WorldId) -> Signature {
    let k = class_count(part);
    let a = successor_classes(m, part, k, Rel::One, x);
    let b = successor_classes(m, part, k, Rel::Two, x);
    match lang {
        LanguageTag::Ldot | LanguageTag::Lplus => {
            let (am, bm) = (mask(&a), mask(&b));
            let mut bits = FixedBitSet::with_capacity(1 << k);
            for p in 0..(1u32 << k) {
                if union_test(lang, am, bm, p) {
                    bits.insert(p as usize);
                }
            }
            Signature::Unions(bits)
        }
        _ => Signature::Successors(a, b),
    }
}

pub fn refine_types(
    m: &Model,
    lang: LanguageTag,
    varset: &[String],
    opts: RefineOptions,
) -> Result<TypeAssignment, EquivalenceError> {
    let n = m.size();
    let val_keys: Vec<Vec<bool>> =
        (0..n).map(|w| varset.iter().map(|p| m.holds(p, w)).collect()).collect();
    let mut partitions = vec![canonical(&val_keys)];
    let mut signatures = vec![vec![]];
    let mut fixpoint = None;
    let capped = matches!(lang, LanguageTag::Ldot | LanguageTag::Lplus);
    loop {
        let d = partitions.len() - 1;
        let cur = &partitions[d];
        let k = class_count(cur);
        if capped && k > opts.class_cap {
            return Err(EquivalenceError::ClassCap { depth: d, classes: k, cap: opts.class_cap });
        }
        if lang == LanguageTag::Lprop {
            fixpoint = Some(d);
            break;
        }
        if opts.max_depth.is_some_and(|md| d >= md) {
            break;
        }
        let sigs: Vec<Signature> = (0..n).map(|x| signature(m, lang, cur, x)).collect();
        let keys: Vec<(usize, Signature)> =
            cur.iter().copied().zip(sigs.iter().cloned()).collect();
        let next = canonical(&keys);
        if next == *cur {
            fixpoint = Some(d);
            break;
        }
        let mut per_class = vec![None; class_count(&next)];
        for (x, &c) in next.iter().enumerate() {
            if per_class[c].is_none() {
                per_class[c] = Some(sigs[x].clone());
            }
        }
        signatures.push(per_class.into_iter().map(|s| s.expect("nonempty class")).collect());
        partitions.push(next);
    }
    Ok(TypeAssignment {
        language: lang,
        varset: varset.to_vec(),
        partitions,
        fixpoint,
        signatures,
        model: m.clone(),
    })
}

impl TypeAssignment {
    pub fn depth(&self) -> usize {
        self.partitions.len() - 1
    }

    /// Class of `w` at depth `d`, clamped to the last computed depth.
    pub fn class_at(&self, d: usize, w: WorldId) -> usize {
        self.partitions[d.min(self.depth())][w]
    }

    /// Least depth at which the two worlds fall into different classes.
    pub fn separation_depth(&self, x: WorldId, y: WorldId) -> Option<usize> {
        (0..self.partitions.len()).find(|&d| self.partitions[d][x] != self.partitions[d][y])
    }

    fn representative(&self, d: usize, c: usize) -> WorldId {
        self.partitions[d].iter().position(|&k| k == c).expect("class exists")
    }

    fn literal(&self, var: &str, w: WorldId) -> Formula {
        if self.model.holds(var, w) {
            Formula::atom(var)
        } else {
            Formula::neg(Formula::atom(var))
        }
    }

    /// Formula for the union of the given depth-`d` classes.
    fn union_formula(&self, formulas: &[Formula], members: impl Iterator<Item = usize>) -> Formula {
        Formula::disj(members.map(|c| formulas[c].clone()))
    }

    /// A formula of depth `d+1` true at class `c` and false at class `other`,
    /// two depth-`d+1` classes with the same parent. `formulas` are the depth-`d` class formulas.
    fn separating_test(&self, d: usize, formulas: &[Formula], c: usize, other: usize) -> Formula {
        let (sc, so) = (&self.signatures[d + 1][c], &self.signatures[d + 1][other]);
        match (sc, so) {
            (Signature::Unions(a), Signature::Unions(b)) => {
                let p = (0..a.len()).find(|&p| a.contains(p) != b.contains(p)).expect("signatures differ");
                let members = (0..formulas.len()).filter(|i| p >> i & 1 == 1);
                let inner = self.union_formula(formulas, members);
                let test = match self.language {
                    LanguageTag::Lplus => Formula::boxplus(inner),
                    _ => Formula::boxdot(inner),
                };
                if a.contains(p) {
                    test
                } else {
                    Formula::neg(test)
                }
            }
            (Signature::Successors(a1, b1), Signature::Successors(a2, b2)) => {
                let pick = |r: Rel, x: &FixedBitSet, y: &FixedBitSet| {
                    (0..formulas.len()).find(|&e| x.contains(e) != y.contains(e)).map(|e| {
                        let t = Formula::poss(r, formulas[e].clone());
                        if x.contains(e) {
                            t
                        } else {
                            Formula::neg(t)
                        }
                    })
                };
                pick(Rel::One, a1, a2)
                    .or_else(|| pick(Rel::Two, b1, b2))
                    .expect("signatures differ")
            }
            _ => unreachable!("one signature kind per language"),
        }
    }

    /// Characteristic formulas of all classes at depth `d`: each is true at
    /// exactly the worlds of its class in this model.
    pub fn class_formulas(&self, d: usize) -> Vec<Formula> {
        let d = d.min(self.depth());
        let k0 = class_count(&self.partitions[0]);
        let mut formulas: Vec<Formula> = (0..k0)
            .map(|c| {
                let w = self.representative(0, c);
                Formula::conj(self.varset.iter().map(|p| self.literal(p, w)))
            })
            .collect();
        for level in 0..d {
            let next = &self.partitions[level + 1];
            let k = class_count(next);
            let mut out = Vec::with_capacity(k);
            for c in 0..k {
                let w = self.representative(level + 1, c);
                let parent = self.partitions[level][w];
                let mut tests: Vec<Formula> = Vec::new();
                for other in 0..k {
                    let ow = self.representative(level + 1, other);
                    if other == c || self.partitions[level][ow] != parent {
                        continue;
                    }
                    let t = self.separating_test(level, &formulas, c, other);
                    if !tests.contains(&t) {
                        tests.push(t);
                    }
                }
                out.push(Formula::conj(std::iter::once(formulas[parent].clone()).chain(tests)));
            }
            formulas = out;
        }
        formulas
    }

    /// Formula of depth `separation_depth(x, y)` true at `x` and false at `y`.
    pub fn distinguishing(&self, x: WorldId, y: WorldId) -> Option<Formula> {
        let d = self.separation_depth(x, y)?;
        if d == 0 {
            let p = self.varset.iter().find(|p| self.model.holds(p, x) != self.model.holds(p, y))?;
            return Some(self.literal(p, x));
        }
        let formulas = self.class_formulas(d - 1);
        Some(self.separating_test(d - 1, &formulas, self.partitions[d][x], self.partitions[d][y]))
    }
}

/// Verdict on a pair of pointed models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceResult {
    pub equivalent: bool,
    pub separation_depth: Option<usize>,
    /// Number of refinement steps until the partition of the union stabilised.
    pub fixpoint: Option<usize>,
}

fn union_points(
    m1: &Model,
    w1: WorldId,
    m2: &Model,
    w2: WorldId,
) -> Result<(Model, WorldId, WorldId), EquivalenceError> {
    if w1 >= m1.size() {
        return Err(EquivalenceError::BadWorld(w1));
    }
    if w2 >= m2.size() {
        return Err(EquivalenceError::BadWorld(w2));
    }
    Ok((disjoint_union(m1, m2), w1, m1.size() + w2))
}

pub fn equivalent(
    m1: &Model,
    w1: WorldId,
    m2: &Model,
    w2: WorldId,
    lang: LanguageTag,
    varset: &[String],
) -> Result<EquivalenceResult, EquivalenceError> {
    let (u, x, y) = union_points(m1, w1, m2, w2)?;
    let t = refine_types(&u, lang, varset, RefineOptions::default())?;
    let sep = t.separation_depth(x, y);
    Ok(EquivalenceResult { equivalent: sep.is_none(), separation_depth: sep, fixpoint: t.fixpoint })
}

/// A formula of the language true at `(m1, w1)` and false at `(m2, w2)`, of
/// modal depth equal to the separation depth, checked by the model checker.
/// `None` when the points are equivalent.
pub fn distinguishing_formula(
    m1: &Model,
    w1: WorldId,
    m2: &Model,
    w2: WorldId,
    lang: LanguageTag,
    varset: &[String],
) -> Result<Option<Formula>, EquivalenceError> {
    let (u, x, y) = union_points(m1, w1, m2, w2)?;
    let t = refine_types(&u, lang, varset, RefineOptions::default())?;
    let Some(f) = t.distinguishing(x, y) else {
        return Ok(None);
    };
    if !satisfies_at(m1, w1, &f) || satisfies_at(m2, w2, &f) {
        return Err(EquivalenceError::Unverified(f.to_string()));
    }
    Ok(Some(f))
}

// ---------------------------------------------------------------------------
// brute-force oracle

/// Largest number of Boolean cells the oracle will expand.
const BRUTE_CELL_CAP: usize = 12;

/// Agreement of two points on every formula of the language up to `depth`
/// over `varset`, by enumerating formulas modulo equivalence on the union.
///
/// Level 0 is the Boolean closure of the variables. Level `d+1` adds the
/// modal operators of the language applied to every level-`d` formula, then
/// closes again. Each formula is checked by the model checker; formulas with
/// equal truth sets on the union are identified.
pub fn brute_force_equivalent(
    m1: &Model,
    w1: WorldId,
    m2: &Model,
    w2: WorldId,
    lang: LanguageTag,
    varset: &[String],
    depth: usize,
) -> Result<bool, EquivalenceError> {
    if depth > 2 || varset.len() > 2 {
        return Err(EquivalenceError::Budget(format!(
            "depth {depth} with {} variables",
            varset.len()
        )));
    }
    let (u, x, y) = union_points(m1, w1, m2, w2)?;
    let mut eval = Evaluator::new(&u);
    let mut gens: Vec<(Formula, FixedBitSet)> = varset
        .iter()
        .map(|p| {
            let f = Formula::atom(p);
            let s = eval.truth_set(&f);
            (f, s)
        })
        .collect();
    for _ in 0..depth {
        let closure = boolean_closure(&gens, u.size())?;
        let mut next = gens.clone();
        for f in closure {
            for op in operators(lang) {
                let g = op(f.clone());
                let s = eval.truth_set(&g);
                next.push((g, s));
            }
        }
        gens = next;
    }
    Ok(gens.iter().all(|(_, s)| s.contains(x) == s.contains(y)))
}

fn operators(lang: LanguageTag) -> Vec<fn(Formula) -> Formula> {
    match lang {
        LanguageTag::Lprop => vec![],
        LanguageTag::Ldot => vec![Formula::boxdot],
        LanguageTag::Lplus => vec![Formula::boxplus],
        LanguageTag::Lfull => vec![
            |f| Formula::nec(Rel::One, f),
            |f| Formula::nec(Rel::Two, f),
        ],
    }
}

/// One representative formula per element of the Boolean algebra generated
/// by the given truth sets.
fn boolean_closure(
    gens: &[(Formula, FixedBitSet)],
    n: usize,
) -> Result<Vec<Formula>, EquivalenceError> {
    // Cells: worlds grouped by their membership vector over the generators.
    let mut cells: BTreeMap<Vec<bool>, Vec<WorldId>> = BTreeMap::new();
    for w in 0..n {
        cells.entry(gens.iter().map(|(_, s)| s.contains(w)).collect()).or_default().push(w);
    }
    let cells: Vec<Vec<bool>> = cells.into_keys().collect();
    if cells.len() > BRUTE_CELL_CAP {
        return Err(EquivalenceError::Budget(format!("{} cells", cells.len())));
    }
    let literal = |g: usize, positive: bool| {
        if positive {
            gens[g].0.clone()
        } else {
            Formula::neg(gens[g].0.clone())
        }
    };
    // A cell is described by one generator literal per other cell it must exclude.
    let cell_formulas: Vec<Formula> = cells
        .iter()
        .enumerate()
        .map(|(i, ci)| {
            let mut picks: Vec<usize> = cells
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, cj)| (0..gens.len()).find(|&g| ci[g] != cj[g]).expect("cells differ"))
                .collect();
            picks.sort_unstable();
            picks.dedup();
            Formula::conj(picks.into_iter().map(|g| literal(g, ci[g])))
        })
        .collect();
    Ok((0..1usize << cells.len())
        .map(|sel| {
            Formula::disj(
                (0..cells.len()).filter(|i| sel >> i & 1 == 1).map(|i| cell_formulas[i].clone()),
            )
        })
        .collect())
}
