//! Dot-morphisms between models and frames, and a bounded search for them.
//!
//! A map `f: M -> M'` is a dot-morphism when
//!
//! - (Var) `x` and `f(x)` agree on every variable of the chosen set;
//! - (Forth) `x R1 y`, `x R2 z` and `f(y) != f(z)` imply `f(x) R1' f(y)` and `f(x) R2' f(z)`;
//! - (Back) `f(x) R1' y'`, `f(x) R2' z'` and `y' != z'` imply some `y`, `z` with
//!   `x R1 y`, `x R2 z`, `f(y) = y'` and `f(z) = z'`.
//!
//! The frame version drops (Var). Dot-formulas are invariant under such maps.

use std::fmt;

use thiserror::Error;

use crate::kripke::{Frame, Model, WorldId};
use crate::syntax::Rel;

/// Default cap on `|T|^|S|` for `find_morphism`.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown world '{name}'")]
    UnknownWorld { line: usize, name: String },
    #[error("world '{0}' mapped twice")]
    Duplicate(String),
    #[error("world '{0}' has no image")]
    NotTotal(String),
    #[error("map has {got} entries for a source of {want} worlds")]
    WrongSize { got: usize, want: usize },
    #[error("search space {size} exceeds budget {budget}")]
    Budget { size: u128, budget: u64 },
}

/// Total map from source worlds to target worlds, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldMap {
    pub mapping: Vec<WorldId>,
}

impl WorldMap {
    pub fn new(mapping: Vec<WorldId>) -> Self {
        WorldMap { mapping }
    }

    pub fn identity(n: usize) -> Self {
        WorldMap { mapping: (0..n).collect() }
    }

    pub fn apply(&self, x: WorldId) -> WorldId {
        self.mapping[x]
    }

    pub fn is_surjective(&self, target_size: usize) -> bool {
        let mut hit = vec![false; target_size];
        for &y in &self.mapping {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Renders as `x => y` lines in source order.
    pub fn print(&self, src: &Frame, tgt: &Frame) -> String {
        self.mapping
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{} => {}\n", src.world_name(x), tgt.world_name(y)))
            .collect()
    }

    fn check_size(&self, src: &Frame) -> Result<(), MorphismError> {
        if self.mapping.len() != src.size() {
            return Err(MorphismError::WrongSize { got: self.mapping.len(), want: src.size() });
        }
        Ok(())
    }
}

/// Parses `x => y` lines; `#` starts a comment.
pub fn parse_map(text: &str, src: &Frame, tgt: &Frame) -> Result<WorldMap, MorphismError> {
    let mut mapping: Vec<Option<WorldId>> = vec![None; src.size()];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (a, b) = content
            .split_once("=>")
            .ok_or_else(|| MorphismError::Syntax { line, msg: "expected 'x => y'".into() })?;
        let (a, b) = (a.trim(), b.trim());
        let x = src
            .index_of(a)
            .ok_or_else(|| MorphismError::UnknownWorld { line, name: a.to_string() })?;
        let y = tgt
            .index_of(b)
            .ok_or_else(|| MorphismError::UnknownWorld { line, name: b.to_string() })?;
        if mapping[x].replace(y).is_some() {
            return Err(MorphismError::Duplicate(a.to_string()));
        }
    }
    let mapping = mapping
        .into_iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| MorphismError::NotTotal(src.world_name(x).to_string())))
        .collect::<Result<_, _>>()?;
    Ok(WorldMap { mapping })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Var,
    Forth,
    Back,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Var => "Var",
            Condition::Forth => "Forth",
            Condition::Back => "Back",
        })
    }
}

/// First failure of one condition. `worlds` lists `(x)` for Var,
/// `(x, y, z)` in the source for Forth, and `(x, y', z')` with `y'`, `z'` in
/// the target for Back. `var` names the variable for Var.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub worlds: Vec<WorldId>,
    pub var: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub var_ok: bool,
    pub forth_ok: bool,
    pub back_ok: bool,
    pub surjective: bool,
    pub violations: Vec<Violation>,
}

impl MorphismReport {
    pub fn is_morphism(&self) -> bool {
        self.var_ok && self.forth_ok && self.back_ok
    }

    pub fn describe(&self, src: &Frame, tgt: &Frame) -> String {
        let mut out = vec![format!(
            "Var: {}, Forth: {}, Back: {}, surjective: {}",
            ok(self.var_ok),
            ok(self.forth_ok),
            ok(self.back_ok),
            if self.surjective { "yes" } else { "no" }
        )];
        for v in &self.violations {
            let names: Vec<&str> = match v.condition {
                Condition::Back => vec![
                    src.world_name(v.worlds[0]),
                    tgt.world_name(v.worlds[1]),
                    tgt.world_name(v.worlds[2]),
                ],
                _ => v.worlds.iter().map(|&w| src.world_name(w)).collect(),
            };
            let var = v.var.as_ref().map(|p| format!(" on {p}")).unwrap_or_default();
            out.push(format!("{} fails at ({}){var}", v.condition, names.join(",")));
        }
        out.join("\n")
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn first_forth(src: &Frame, tgt: &Frame, f: &WorldMap) -> Option<Violation> {
    for x in 0..src.size() {
        for y in src.successors(Rel::One, x).ones() {
            for z in src.successors(Rel::Two, x).ones() {
                let (fx, fy, fz) = (f.apply(x), f.apply(y), f.apply(z));
                if fy != fz
                    && !(tgt.relation(Rel::One).contains(fx, fy)
                        && tgt.relation(Rel::Two).contains(fx, fz))
                {
                    return Some(Violation { condition: Condition::Forth, worlds: vec![x, y, z], var: None });
                }
            }
        }
    }
    None
}

fn first_back(src: &Frame, tgt: &Frame, f: &WorldMap) -> Option<Violation> {
    for x in 0..src.size() {
        let fx = f.apply(x);
        let img = |r: Rel, w: WorldId| src.successors(r, x).ones().any(|y| f.apply(y) == w);
        for y2 in tgt.successors(Rel::One, fx).ones() {
            for z2 in tgt.successors(Rel::Two, fx).ones() {
                if y2 != z2 && !(img(Rel::One, y2) && img(Rel::Two, z2)) {
                    return Some(Violation { condition: Condition::Back, worlds: vec![x, y2, z2], var: None });
                }
            }
        }
    }
    None
}

fn first_var(src: &Model, tgt: &Model, f: &WorldMap, varset: &[String]) -> Option<Violation> {
    let mut vars = varset.to_vec();
    vars.sort();
    for x in 0..src.size() {
        for p in &vars {
            if src.holds(p, x) != tgt.holds(p, f.apply(x)) {
                return Some(Violation { condition: Condition::Var, worlds: vec![x], var: Some(p.clone()) });
            }
        }
    }
    None
}

fn report(var: Option<Violation>, forth: Option<Violation>, back: Option<Violation>, surjective: bool) -> MorphismReport {
    MorphismReport {
        var_ok: var.is_none(),
        forth_ok: forth.is_none(),
        back_ok: back.is_none(),
        surjective,
        violations: [var, forth, back].into_iter().flatten().collect(),
    }
}

pub fn check_frame_morphism(src: &Frame, tgt: &Frame, f: &WorldMap) -> Result<MorphismReport, MorphismError> {
    f.check_size(src)?;
    Ok(report(None, first_forth(src, tgt, f), first_back(src, tgt, f), f.is_surjective(tgt.size())))
}

pub fn check_model_morphism(
    src: &Model,
    tgt: &Model,
    f: &WorldMap,
    varset: &[String],
) -> Result<MorphismReport, MorphismError> {
    f.check_size(src.frame())?;
    let (sf, tf) = (src.frame(), tgt.frame());
    Ok(report(
        first_var(src, tgt, f, varset),
        first_forth(sf, tf, f),
        first_back(sf, tf, f),
        f.is_surjective(tgt.size()),
    ))
}

/// First map in lexicographic order (image of `w0` most significant) that
/// is a dot-morphism, optionally required to be surjective. With `varset`
/// given, (Var) is checked and used to prune candidates.
pub fn find_morphism(
    src: &Model,
    tgt: &Model,
    varset: Option<&[String]>,
    surjective: bool,
    budget: u64,
) -> Result<Option<WorldMap>, MorphismError> {
    let (s, t) = (src.size(), tgt.size());
    let size = (t as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if size > u128::from(budget) {
        return Err(MorphismError::Budget { size, budget });
    }
    // Candidate images per source world, ascending.
    let cands: Vec<Vec<WorldId>> = (0..s)
        .map(|x| {
            (0..t)
                .filter(|&y| varset.is_none_or(|vs| vs.iter().all(|p| src.holds(p, x) == tgt.holds(p, y))))
                .collect()
        })
        .collect();
    if cands.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut digits = vec![0usize; s];
    loop {
        let f = WorldMap::new((0..s).map(|x| cands[x][digits[x]]).collect());
        let passes = first_forth(src.frame(), tgt.frame(), &f).is_none()
            && first_back(src.frame(), tgt.frame(), &f).is_none()
            && (!surjective || f.is_surjective(t));
        if passes {
            return Ok(Some(f));
        }
        // increment the mixed-radix counter, last digit fastest
        let mut i = s;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < cands[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{parse_model, strategies as models};
    use crate::semantics::satisfies_at;
    use crate::syntax::{strategies as formulas, LanguageTag};
    use proptest::prelude::*;

    fn chain_and_loop() -> (Model, Model) {
        (
            parse_model("worlds: s t u\nR1: s->t t->u\nR2: s->t t->u\n").unwrap(),
            parse_model("worlds: x\nR1: x->x\nR2: x->x\n").unwrap(),
        )
    }

    #[test]
    fn constant_map_onto_loop() {
        let (f, g) = chain_and_loop();
        let map = parse_map("s => x\nt => x # c\n\nu => x\n", f.frame(), g.frame()).unwrap();
        let r = check_frame_morphism(f.frame(), g.frame(), &map).unwrap();
        assert!(r.is_morphism() && r.surjective && r.violations.is_empty());
    }

    #[test]
    fn map_file_errors() {
        let (f, g) = chain_and_loop();
        assert!(matches!(parse_map("s => x\n", f.frame(), g.frame()), Err(MorphismError::NotTotal(_))));
        assert!(matches!(parse_map("s => y\n", f.frame(), g.frame()), Err(MorphismError::UnknownWorld { .. })));
        assert!(matches!(parse_map("s x\n", f.frame(), g.frame()), Err(MorphismError::Syntax { .. })));
        assert!(matches!(
            parse_map("s => x\ns => x\n", f.frame(), g.frame()),
            Err(MorphismError::Duplicate(_))
        ));
    }

    #[test]
    fn violations_carry_least_witness() {
        // Back fails: target has two distinct successors the source cannot reach.
        let src = parse_model("worlds: a\n").unwrap();
        let tgt = parse_model("worlds: x y z\nR1: x->y\nR2: x->z\n").unwrap();
        let r = check_frame_morphism(src.frame(), tgt.frame(), &WorldMap::new(vec![0])).unwrap();
        assert!(!r.back_ok && r.forth_ok && !r.surjective);
        assert_eq!(r.violations[0].worlds, vec![0, 1, 2]);
        // Forth fails: distinct images not related in the target.
        let r = check_frame_morphism(tgt.frame(), src.frame(), &WorldMap::new(vec![0, 0, 0])).unwrap();
        assert!(r.forth_ok);
        let two = parse_model("worlds: a b\n").unwrap();
        let r = check_frame_morphism(tgt.frame(), two.frame(), &WorldMap::new(vec![0, 0, 1])).unwrap();
        assert_eq!(
            r.violations,
            vec![Violation { condition: Condition::Forth, worlds: vec![0, 1, 2], var: None }]
        );
    }

    #[test]
    fn var_condition() {
        let a = parse_model("worlds: a b\nv: p = a\n").unwrap();
        let b = parse_model("worlds: x\nv: p = x\n").unwrap();
        let r = check_model_morphism(&a, &b, &WorldMap::new(vec![0, 0]), &["p".into()]).unwrap();
        assert!(!r.var_ok);
        assert_eq!(r.violations[0].worlds, vec![1]);
        assert!(r.describe(a.frame(), b.frame()).contains("Var fails at (b) on p"));
    }

    #[test]
    fn search_respects_budget_and_order() {
        let (f, g) = chain_and_loop();
        assert_eq!(
            find_morphism(&f, &g, None, true, 10).unwrap(),
            Some(WorldMap::new(vec![0, 0, 0]))
        );
        assert!(matches!(find_morphism(&f, &f, None, false, 26), Err(MorphismError::Budget { .. })));
        // the identity is the lexicographically first surjective self-map here
        assert_eq!(find_morphism(&f, &f, None, true, 27).unwrap(), Some(WorldMap::identity(3)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn found_morphisms_preserve_dot_formulas(
            a in models::model(3, &["p"]),
            b in models::model(2, &["p"]),
            phis in proptest::collection::vec(formulas::formula(LanguageTag::Ldot, &["p"], 3), 4),
        ) {
            let vs = vec!["p".to_string()];
            if let Some(f) = find_morphism(&a, &b, Some(&vs), false, DEFAULT_SEARCH_BUDGET).unwrap() {
                let r = check_model_morphism(&a, &b, &f, &vs).unwrap();
                prop_assert!(r.is_morphism());
                for phi in &phis {
                    for x in 0..a.size() {
                        prop_assert_eq!(satisfies_at(&a, x, phi), satisfies_at(&b, f.apply(x), phi));
                    }
                }
            }
        }

        #[test]
        fn identity_is_a_morphism(a in models::model(4, &["p", "q"])) {
            let vs = vec!["p".to_string(), "q".to_string()];
            let r = check_model_morphism(&a, &a, &WorldMap::identity(a.size()), &vs).unwrap();
            prop_assert!(r.is_morphism() && r.surjective);
        }
    }
}
