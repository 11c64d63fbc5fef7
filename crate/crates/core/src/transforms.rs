//! Model constructions: serialization, symmetric completion, reflexive
//! closure and endpoint reflexivization.
//!
//! Copies of worlds are written `(s,t,i)` and named `s@t@i`. Each construction
//! returns the map from output worlds back to input worlds; valuations are
//! pulled back along that map.

use thiserror::Error;

use crate::kripke::{check_property, Frame, Model, PropertyTag, Witness, WorldId};
use crate::morphisms::{check_model_morphism, MorphismReport, WorldMap};
use crate::syntax::Rel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input is not quasi-symmetric: witness ({}) on R{}{}",
        .0.worlds.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","),
        .0.rels[0].digit(), .0.rels[1].digit())]
    NotQuasiSymmetric(Witness),
}

#[derive(Clone, Debug)]
pub struct TransformResult {
    pub output: Model,
    /// Output world to input world.
    pub map: WorldMap,
    /// Dot-morphism check of `map` over all declared variables.
    pub report: MorphismReport,
}

/// A world of a constructed model: an original, or a copy `(s, t, i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Orig(WorldId),
    Copy(WorldId, WorldId, Rel),
}

fn node_name(m: &Model, n: Node) -> String {
    match n {
        Node::Orig(s) => m.world_name(s).to_string(),
        Node::Copy(s, t, i) => format!("{}@{}@{}", m.world_name(s), m.world_name(t), i.digit()),
    }
}

/// Builds the output model from its node list, edge predicate and back map.
fn assemble(
    input: &Model,
    nodes: &[Node],
    edge: impl Fn(Rel, Node, Node) -> bool,
    back: impl Fn(Node) -> WorldId,
) -> TransformResult {
    let names = nodes.iter().map(|&n| node_name(input, n)).collect();
    let mut frame = Frame::new(names).expect("constructed names are distinct");
    for r in Rel::BOTH {
        for (a, &na) in nodes.iter().enumerate() {
            for (b, &nb) in nodes.iter().enumerate() {
                if edge(r, na, nb) {
                    frame.add_edge(r, a, b);
                }
            }
        }
    }
    let map = WorldMap::new(nodes.iter().map(|&n| back(n)).collect());
    finish(input, frame, map)
}

fn finish(input: &Model, frame: Frame, map: WorldMap) -> TransformResult {
    let mut output = Model::new(frame);
    let vars: Vec<String> = input.declared_vars().map(str::to_string).collect();
    for p in &vars {
        output.declare(p);
        for x in 0..output.size() {
            if input.holds(p, map.apply(x)) {
                output.set_true(p, x);
            }
        }
    }
    let report = check_model_morphism(&output, input, &map, &vars).expect("map is total");
    TransformResult { output, map, report }
}

/// Serial model with a surjective dot-morphism `g` onto the input.
///
/// Worlds with successors under both relations or under neither are kept.
/// A world with successors under only one relation `i` is replaced by copies
/// `(s, t, i)`, one per `i`-successor `t`.
pub fn serialize(m: &Model) -> TransformResult {
    let f = m.frame();
    let e = |r: Rel, s: WorldId| f.relation(r).has_successor(s);
    let keep = |s: WorldId| e(Rel::One, s) == e(Rel::Two, s);
    let mut nodes = Vec::new();
    for s in 0..f.size() {
        if keep(s) {
            nodes.push(Node::Orig(s));
            continue;
        }
        let i = if e(Rel::One, s) { Rel::One } else { Rel::Two };
        nodes.extend(f.successors(i, s).ones().map(|t| Node::Copy(s, t, i)));
    }
    let edge = |r: Rel, a: Node, b: Node| match (a, b) {
        // endpoints get loops
        (Node::Orig(s), Node::Orig(t)) if f.is_endpoint(s) => s == t,
        (Node::Orig(s), Node::Orig(t)) => f.relation(r).contains(s, t),
        (Node::Orig(s), Node::Copy(t, _, _)) => !f.is_endpoint(s) && f.relation(r).contains(s, t),
        (Node::Copy(_, t, _), Node::Orig(u)) => t == u,
        (Node::Copy(_, t, _), Node::Copy(u, _, _)) => t == u,
    };
    let back = |n: Node| match n {
        Node::Orig(s) | Node::Copy(s, _, _) => s,
    };
    assemble(m, &nodes, edge, back)
}

/// Symmetric completion of a quasi-symmetric model, with a surjective
/// dot-morphism `h` onto the input.
///
/// `T_i` holds the worlds that have an `i`-predecessor and no successors.
/// Each edge `s R_i t` with `t` in `T_i` is redirected to a fresh copy
/// `(s, t, i)` that points back at `s`.
pub fn symmetrize(m: &Model) -> Result<TransformResult, TransformError> {
    let pr = check_property(m.frame(), PropertyTag::QuasiSymmetric);
    if let Some(w) = pr.witness {
        return Err(TransformError::NotQuasiSymmetric(w));
    }
    let f = m.frame();
    let n = f.size();
    let has_pred = |r: Rel, t: WorldId| (0..n).any(|s| f.relation(r).contains(s, t));
    let in_t = |r: Rel, t: WorldId| has_pred(r, t) && f.is_endpoint(t);
    let mut nodes: Vec<Node> = (0..n)
        .filter(|&s| !(in_t(Rel::One, s) && in_t(Rel::Two, s)))
        .map(Node::Orig)
        .collect();
    for s in 0..n {
        for i in Rel::BOTH {
            for t in f.successors(i, s).ones() {
                if in_t(i, t) {
                    nodes.push(Node::Copy(s, t, i));
                }
            }
        }
    }
    let edge = |r: Rel, a: Node, b: Node| match (a, b) {
        (Node::Orig(s), Node::Orig(t)) => !in_t(r, t) && f.relation(r).contains(s, t),
        (Node::Orig(s), Node::Copy(s2, _, i)) => i == r && s == s2,
        (Node::Copy(t, _, i), Node::Orig(s)) => i == r && s == t,
        (Node::Copy(..), Node::Copy(..)) => false,
    };
    let back = |n: Node| match n {
        Node::Orig(s) | Node::Copy(_, s, _) => s,
    };
    Ok(assemble(m, &nodes, edge, back))
}

/// Adds a loop at every world under both relations. The identity is reported
/// against the input; it is not a dot-morphism in general.
pub fn reflexive_closure(m: &Model) -> TransformResult {
    let mut frame = m.frame().clone();
    for x in 0..frame.size() {
        frame.add_edge(Rel::One, x, x);
        frame.add_edge(Rel::Two, x, x);
    }
    finish(m, frame, WorldMap::identity(m.size()))
}

/// Adds loops under both relations at worlds with no successors at all.
pub fn reflexivize_endpoints(m: &Model) -> TransformResult {
    let mut frame = m.frame().clone();
    for x in 0..frame.size() {
        if m.frame().is_endpoint(x) {
            frame.add_edge(Rel::One, x, x);
            frame.add_edge(Rel::Two, x, x);
        }
    }
    finish(m, frame, WorldMap::identity(m.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{parse_model, print_model, strategies as models};
    use crate::semantics::{satisfies_at, truth_set};
    use crate::syntax::{parse, strategies as formulas, LanguageTag};
    use proptest::prelude::*;

    const SERIALIZE_IN: &str =
        "worlds: s t u v w\nR1: s->t s->u v->w\nR2: s->t s->v u->v\nv: p = s u\n";

    #[test]
    fn serialization_worked_example() {
        let r = serialize(&parse_model(SERIALIZE_IN).unwrap());
        let expected = parse_model(
            "worlds: s t u@v@2 v@w@1 w\n\
             R1: s->t s->u@v@2 t->t u@v@2->v@w@1 v@w@1->w w->w\n\
             R2: s->t s->v@w@1 t->t u@v@2->v@w@1 v@w@1->w w->w\n\
             v: p = s u@v@2\n",
        )
        .unwrap();
        assert_eq!(print_model(&r.output), print_model(&expected));
        assert_eq!(r.map.mapping, vec![0, 1, 2, 3, 4]);
        assert!(r.report.is_morphism() && r.report.surjective);
        assert!(check_property(r.output.frame(), PropertyTag::Serial).holds);
    }

    #[test]
    fn symmetric_completion_example() {
        let m = parse_model("worlds: s t\nR1: s->t\nv: p = t\n").unwrap();
        let r = symmetrize(&m).unwrap();
        assert_eq!(r.output.frame().worlds(), ["s", "t", "s@t@1"]);
        assert_eq!(
            print_model(&r.output),
            "worlds: s t s@t@1\nR1: s->s@t@1 s@t@1->s\nR2:\nv: p = t s@t@1\n"
        );
        assert_eq!(r.map.mapping, vec![0, 1, 1]);
        assert!(r.report.is_morphism() && r.report.surjective);
    }

    #[test]
    fn symmetrize_rejects_with_witness() {
        let m = parse_model("worlds: a b\nR1: a->b b->b\n").unwrap();
        match symmetrize(&m) {
            Err(TransformError::NotQuasiSymmetric(w)) => assert_eq!(w.worlds, vec![0, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reflexive_closure_changes_dot_truth() {
        let m = parse_model("worlds: w v\nR1: w->v\nv: p = w\n").unwrap();
        let phi = parse("[.]p").unwrap();
        assert!(satisfies_at(&m, 0, &phi));
        let r = reflexive_closure(&m);
        assert!(!satisfies_at(&r.output, 0, &phi));
        assert!(!r.report.is_morphism());
    }

    #[test]
    fn endpoints_get_loops_only_there() {
        let m = parse_model("worlds: a b c\nR1: a->b\nR2: c->a\n").unwrap();
        let r = reflexivize_endpoints(&m);
        assert_eq!(print_model(&r.output), "worlds: a b c\nR1: a->b b->b\nR2: b->b c->a\n");
        assert!(r.report.is_morphism());
    }

    fn quasi_symmetric_model() -> impl Strategy<Value = Model> {
        models::model(4, &["p"]).prop_map(|mut m| {
            // drop offending edges until the property holds
            loop {
                let Some(w) = check_property(m.frame(), PropertyTag::QuasiSymmetric).witness else {
                    return m;
                };
                let (s, t, i) = (w.worlds[0], w.worlds[1], w.rels[0]);
                let frame = m.frame().clone();
                let mut rebuilt = Frame::new(frame.worlds().to_vec()).unwrap();
                for r in Rel::BOTH {
                    for (x, y) in frame.relation(r).pairs() {
                        if !(r == i && x == s && y == t) {
                            rebuilt.add_edge(r, x, y);
                        }
                    }
                }
                let mut next = Model::new(rebuilt);
                for (p, set) in m.valuation() {
                    next.declare(p);
                    for x in set.ones() {
                        next.set_true(p, x);
                    }
                }
                m = next;
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn serialize_is_serial_and_covers(m in models::model(4, &["p", "q"])) {
            let r = serialize(&m);
            prop_assert!(check_property(r.output.frame(), PropertyTag::Serial).holds);
            prop_assert!(r.report.is_morphism());
            prop_assert!(r.report.surjective);
        }

        #[test]
        fn serialize_preserves_dot_truth(
            m in models::model(4, &["p", "q"]),
            phi in formulas::formula(LanguageTag::Ldot, &["p", "q"], 3),
        ) {
            let r = serialize(&m);
            let (a, b) = (truth_set(&m, &phi), truth_set(&r.output, &phi));
            for x in 0..r.output.size() {
                prop_assert_eq!(b.contains(x), a.contains(r.map.apply(x)));
            }
        }

        #[test]
        fn symmetrize_is_symmetric_and_covers(
            m in quasi_symmetric_model(),
            phi in formulas::formula(LanguageTag::Ldot, &["p"], 3),
        ) {
            let r = symmetrize(&m).unwrap();
            prop_assert!(check_property(r.output.frame(), PropertyTag::Symmetric).holds);
            prop_assert!(r.report.is_morphism() && r.report.surjective);
            for x in 0..r.output.size() {
                prop_assert_eq!(satisfies_at(&r.output, x, &phi), satisfies_at(&m, r.map.apply(x), &phi));
            }
        }

        #[test]
        fn endpoint_loops_preserve_dot_truth(
            m in models::model(4, &["p", "q"]),
            phi in formulas::formula(LanguageTag::Ldot, &["p", "q"], 3),
        ) {
            let r = reflexivize_endpoints(&m);
            prop_assert_eq!(truth_set(&m, &phi), truth_set(&r.output, &phi));
        }

        #[test]
        fn closures_are_reflexive(m in models::model(4, &["p"])) {
            prop_assert!(check_property(reflexive_closure(&m).output.frame(), PropertyTag::Reflexive).holds);
        }
    }
}
