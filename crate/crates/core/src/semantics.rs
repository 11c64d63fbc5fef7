//! Satisfaction and truth sets over finite bimodal models.
//!
//! Truth sets are computed bottom-up in one pass, memoised per subformula.
//! `[.]` uses the two-clause form: the R1-successors all satisfy or the
//! R2-successors all refute, and symmetrically with the roles of the
//! relations swapped. Empty successor sets make the modalities vacuously true.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::kripke::{Model, WorldId};
use crate::syntax::{Formula, Rel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
}

/// A model with a distinguished world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: Model,
    pub point: WorldId,
}

impl PointedModel {
    pub fn new(model: Model, point: WorldId) -> Self {
        PointedModel { model, point }
    }

    pub fn satisfies(&self, f: &Formula) -> bool {
        satisfies_at(&self.model, self.point, f)
    }
}

/// Memoising evaluator bound to one model.
pub struct Evaluator<'m> {
    model: &'m Model,
    memo: HashMap<Formula, FixedBitSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        Evaluator { model, memo: HashMap::new() }
    }

    pub fn truth_set(&mut self, f: &Formula) -> FixedBitSet {
        if let Some(s) = self.memo.get(f) {
            return s.clone();
        }
        let set = self.compute(f);
        self.memo.insert(f.clone(), set.clone());
        set
    }

    fn full(&self) -> FixedBitSet {
        let n = self.model.size();
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(..);
        s
    }

    fn complement(&self, mut s: FixedBitSet) -> FixedBitSet {
        s.toggle_range(..);
        s
    }

    fn compute(&mut self, f: &Formula) -> FixedBitSet {
        let n = self.model.size();
        match f {
            Formula::Atom(p) => self.model.extension(p),
            Formula::Top => self.full(),
            Formula::Bot => FixedBitSet::with_capacity(n),
            Formula::Neg(a) => {
                let s = self.truth_set(a);
                self.complement(s)
            }
            Formula::And(a, b) => {
                let mut s = self.truth_set(a);
                s.intersect_with(&self.truth_set(b));
                s
            }
            Formula::Or(a, b) => {
                let mut s = self.truth_set(a);
                s.union_with(&self.truth_set(b));
                s
            }
            Formula::Imp(a, b) => {
                let mut s = self.truth_set(a);
                s = self.complement(s);
                s.union_with(&self.truth_set(b));
                s
            }
            Formula::Iff(a, b) => {
                let mut s = self.truth_set(a);
                s.symmetric_difference_with(&self.truth_set(b));
                self.complement(s)
            }
            Formula::BoxDot(a) => {
                let t = self.truth_set(a);
                self.pointwise(|m, x| {
                    let (s1, s2) = (m.successors(Rel::One, x), m.successors(Rel::Two, x));
                    let (all1, none1) = (s1.is_subset(&t), s1.is_disjoint(&t));
                    let (all2, none2) = (s2.is_subset(&t), s2.is_disjoint(&t));
                    (all1 || none2) && (none1 || all2)
                })
            }
            Formula::BoxPlus(a) => {
                let t = self.truth_set(a);
                self.pointwise(|m, x| {
                    m.successors(Rel::One, x).is_subset(&t)
                        || m.successors(Rel::Two, x).is_disjoint(&t)
                })
            }
            Formula::Nec(r, a) => {
                let t = self.truth_set(a);
                self.pointwise(|m, x| m.successors(*r, x).is_subset(&t))
            }
            Formula::Poss(r, a) => {
                let t = self.truth_set(a);
                self.pointwise(|m, x| !m.successors(*r, x).is_disjoint(&t))
            }
            Formula::Delta(r, a) => {
                let t = self.truth_set(a);
                self.pointwise(|m, x| {
                    let s = m.successors(*r, x);
                    s.is_subset(&t) || s.is_disjoint(&t)
                })
            }
        }
    }

    fn pointwise(&self, pred: impl Fn(&Model, WorldId) -> bool) -> FixedBitSet {
        let n = self.model.size();
        let mut out = FixedBitSet::with_capacity(n);
        for x in 0..n {
            if pred(self.model, x) {
                out.insert(x);
            }
        }
        out
    }
}

pub fn truth_set(m: &Model, f: &Formula) -> FixedBitSet {
    Evaluator::new(m).truth_set(f)
}

pub fn satisfies_at(m: &Model, w: WorldId, f: &Formula) -> bool {
    truth_set(m, f).contains(w)
}

/// Satisfaction at the world called `world`.
pub fn satisfies(m: &Model, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    let w = m
        .index_of(world)
        .ok_or_else(|| SemanticsError::UnknownWorld(world.to_string()))?;
    Ok(satisfies_at(m, w, f))
}

/// Truth at every world.
pub fn valid_in_model(m: &Model, f: &Formula) -> bool {
    truth_set(m, f).is_full()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{parse_model, strategies as models};
    use crate::syntax::{parse, strategies as formulas, translate_dot_to_plus, LanguageTag};
    use proptest::prelude::*;

    /// Direct reading of the clauses, quantifying over successor pairs.
    fn oracle(m: &Model, x: WorldId, f: &Formula) -> bool {
        let succ = |r: Rel| m.successors(r, x).ones().collect::<Vec<_>>();
        match f {
            Formula::Atom(p) => m.holds(p, x),
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Neg(a) => !oracle(m, x, a),
            Formula::And(a, b) => oracle(m, x, a) && oracle(m, x, b),
            Formula::Or(a, b) => oracle(m, x, a) || oracle(m, x, b),
            Formula::Imp(a, b) => !oracle(m, x, a) || oracle(m, x, b),
            Formula::Iff(a, b) => oracle(m, x, a) == oracle(m, x, b),
            Formula::BoxDot(a) => succ(Rel::One)
                .iter()
                .all(|&t| succ(Rel::Two).iter().all(|&u| oracle(m, t, a) == oracle(m, u, a))),
            Formula::BoxPlus(a) => {
                succ(Rel::One).iter().all(|&t| oracle(m, t, a))
                    || succ(Rel::Two).iter().all(|&u| !oracle(m, u, a))
            }
            Formula::Nec(r, a) => succ(*r).iter().all(|&t| oracle(m, t, a)),
            Formula::Poss(r, a) => succ(*r).iter().any(|&t| oracle(m, t, a)),
            Formula::Delta(r, a) => succ(*r)
                .iter()
                .all(|&t| succ(*r).iter().all(|&u| oracle(m, t, a) == oracle(m, u, a))),
        }
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn asymmetry_of_plus() {
        let m = parse_model("worlds: s t u\nR1: s->t\nR2: s->u\nv: p = t\n").unwrap();
        assert!(satisfies(&m, "s", &f("[+]p")).unwrap());
        assert!(!satisfies(&m, "s", &f("[+]~p")).unwrap());
        assert!(!satisfies(&m, "s", &f("[.]p")).unwrap());
        assert!(satisfies(&m, "t", &f("[.]p & [+]false & [1]false")).unwrap());
        assert_eq!(
            satisfies(&m, "nope", &f("p")),
            Err(SemanticsError::UnknownWorld("nope".into()))
        );
    }

    #[test]
    fn kuhn_model() {
        let m = parse_model("worlds: s t u\nR1: s->s s->u\nR2: s->t\nv: p = u\nv: q = t\n").unwrap();
        assert!(satisfies(&m, "s", &f("[+]p")).unwrap());
        assert!(!satisfies(&m, "s", &f("[+](p | q)")).unwrap());
        assert!(!satisfies(&m, "s", &f("[+](~p | q)")).unwrap());
    }

    #[test]
    fn delta_and_diamonds() {
        let m = parse_model("worlds: s a b\nR1: s->a s->b\nR2: s->a\nv: p = a\n").unwrap();
        assert!(!satisfies(&m, "s", &f("D1 p")).unwrap());
        assert!(satisfies(&m, "s", &f("D2 p")).unwrap());
        assert!(satisfies(&m, "s", &f("<1>p & <1>~p & ~<2>~p")).unwrap());
        assert!(!satisfies(&m, "s", &f("[1]p")).unwrap());
        assert!(satisfies(&m, "s", &f("[2]p")).unwrap());
    }

    proptest! {
        #[test]
        fn matches_pairwise_oracle(
            m in models::model(4, &["p", "q"]),
            f in formulas::formula(LanguageTag::Lfull, &["p", "q"], 4),
        ) {
            let set = truth_set(&m, &f);
            for x in 0..m.size() {
                prop_assert_eq!(set.contains(x), oracle(&m, x, &f));
            }
        }

        #[test]
        fn dot_is_plus_both_ways(
            m in models::model(5, &["p", "q"]),
            f in formulas::formula(LanguageTag::Ldot, &["p", "q"], 3),
        ) {
            let t = translate_dot_to_plus(&f).unwrap();
            prop_assert_eq!(truth_set(&m, &f), truth_set(&m, &t));
        }

        #[test]
        fn dot_agrees_with_its_negation(
            m in models::model(4, &["p"]),
            f in formulas::formula(LanguageTag::Ldot, &["p"], 3),
        ) {
            let a = truth_set(&m, &Formula::boxdot(f.clone()));
            let b = truth_set(&m, &Formula::boxdot(Formula::neg(f)));
            prop_assert_eq!(a, b);
        }
    }
}
