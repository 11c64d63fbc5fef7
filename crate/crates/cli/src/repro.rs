//! Replays the fixture corpus against its expected results.

use noncontingency::equivalence::{brute_force_equivalent, distinguishing_formula, equivalent};
use noncontingency::kripke::{check_property, parse_pointed_model, print_model};
use noncontingency::morphisms::{check_frame_morphism, parse_map};
use noncontingency::semantics::satisfies_at;
use noncontingency::transforms::{reflexive_closure, serialize};
use noncontingency::validity::{countermodel_search, valid_on_frame, SearchBudget, SearchOutcome};
use noncontingency::{parse, Formula, LanguageTag, Model, PropertyTag, WorldId};

use crate::fixtures::lookup;

pub const NAMES: [&str; 10] = [
    "prop3.2",
    "prop3.3",
    "prop3.4",
    "sec2-asym",
    "kuhn",
    "prop5.3",
    "serialize-example",
    "refl-closure-cex",
    "wdot4-cex",
    "wdot5-cex",
];

type Check = Result<String, String>;

fn pointed(name: &str) -> Result<(Model, WorldId), String> {
    let text = lookup(name).ok_or_else(|| format!("missing fixture {name}"))?;
    let (m, p) = parse_pointed_model(text).map_err(|e| format!("{name}: {e}"))?;
    Ok((m, p.unwrap_or(0)))
}

fn model(name: &str) -> Result<Model, String> {
    pointed(name).map(|(m, _)| m)
}

fn formula(s: &str) -> Formula {
    parse(s).expect("fixture formulas parse")
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn truth(m: &Model, w: WorldId, f: &str, want: bool) -> Result<(), String> {
    let got = satisfies_at(m, w, &formula(f));
    expect(got == want, || format!("{f} is {got} at {}, expected {want}", m.world_name(w)))
}

/// Runs one fixture; `Ok` carries the one-line summary.
pub fn run_fixture(name: &str) -> Option<Check> {
    Some(match name {
        "prop3.2" | "prop3.3" | "prop3.4" => separation(name),
        "sec2-asym" => asymmetry(),
        "kuhn" => kuhn(),
        "prop5.3" => constant_map(),
        "serialize-example" => serialize_example(),
        "refl-closure-cex" => refl_closure(),
        "wdot4-cex" => weak_axiom("wdot4-cex", "[.]p -> [.][.]p", PropertyTag::Transitive, 4),
        "wdot5-cex" => weak_axiom("wdot5-cex", "~[.]p -> [.]~[.]p", PropertyTag::Euclidean, 2),
        _ => return None,
    })
}

fn separation(name: &str) -> Check {
    let (a, x) = pointed(&format!("{name}-left"))?;
    let (b, y) = pointed(&format!("{name}-right"))?;
    let vars = vec!["p".to_string()];
    let err = |e: noncontingency::equivalence::EquivalenceError| e.to_string();

    let plus = equivalent(&a, x, &b, y, LanguageTag::Lplus, &vars).map_err(err)?;
    expect(plus.separation_depth == Some(1), || {
        format!("L(⊞) separation depth {:?}, expected 1", plus.separation_depth)
    })?;
    let f = distinguishing_formula(&a, x, &b, y, LanguageTag::Lplus, &vars)
        .map_err(err)?
        .ok_or("no distinguishing formula")?;

    let dot = equivalent(&a, x, &b, y, LanguageTag::Ldot, &vars).map_err(err)?;
    expect(dot.equivalent, || "points are not L(⊡)-equivalent".into())?;
    expect(dot.fixpoint.is_some_and(|k| k <= 6), || {
        format!("L(⊡) fixpoint {:?} not within 6 steps", dot.fixpoint)
    })?;

    let brute_plus = brute_force_equivalent(&a, x, &b, y, LanguageTag::Lplus, &vars, 2).map_err(err)?;
    let brute_dot = brute_force_equivalent(&a, x, &b, y, LanguageTag::Ldot, &vars, 2).map_err(err)?;
    expect(!brute_plus && brute_dot, || {
        format!("brute force disagrees: L(⊞) equivalent {brute_plus}, L(⊡) equivalent {brute_dot}")
    })?;
    Ok(format!("L(⊞) distinguishes at depth 1 via {f}; L(⊡)-equivalent at fixpoint"))
}

fn asymmetry() -> Check {
    let (m, s) = pointed("sec2-asym")?;
    truth(&m, s, "[+]p", true)?;
    truth(&m, s, "[+]~p", false)?;
    Ok("[+]p true and [+]~p false at s".into())
}

const KUHN_SCHEMA: &str = "[+]p -> [+](p | q) | [+](~p | q)";

fn kuhn() -> Check {
    let (m, s) = pointed("kuhn")?;
    truth(&m, s, "[+]p", true)?;
    truth(&m, s, "[+](p | q)", false)?;
    truth(&m, s, "[+](~p | q)", false)?;
    truth(&m, s, KUHN_SCHEMA, false)?;
    let found = search(KUHN_SCHEMA, PropertyTag::All, 3)?;
    Ok(format!(
        "[+]p true, [+](p | q) false, [+](~p | q) false at s; search refutes {KUHN_SCHEMA} with {found} worlds"
    ))
}

/// Size of the countermodel the search finds within `max_worlds`.
fn search(f: &str, tag: PropertyTag, max_worlds: usize) -> Result<usize, String> {
    let budget = SearchBudget { max_worlds, ..SearchBudget::default() };
    match countermodel_search(&formula(f), tag, budget).map_err(|e| e.to_string())? {
        SearchOutcome::Countermodel(c) => {
            expect(!c.satisfies(&formula(f)), || "search returned a model of the formula".into())?;
            expect(check_property(c.model.frame(), tag).holds, || format!("countermodel is not {tag}"))?;
            Ok(c.model.size())
        }
        other => Err(format!("search over {tag} up to {max_worlds} worlds found nothing: {other:?}")),
    }
}

const TRANSFER: [&str; 6] = ["[.]p", "[+]p", "[.]p -> p", "p -> [.]p", "[+]~p", "[.][.]p"];

fn constant_map() -> Check {
    let chain = model("prop5.3-chain")?;
    let point = model("prop5.3-loop")?;
    let map = parse_map(lookup("prop5.3.map").ok_or("missing map")?, chain.frame(), point.frame())
        .map_err(|e| e.to_string())?;
    let r = check_frame_morphism(chain.frame(), point.frame(), &map).map_err(|e| e.to_string())?;
    expect(r.is_morphism() && r.surjective, || r.describe(chain.frame(), point.frame()))?;
    for f in TRANSFER {
        let a = valid_on_frame(chain.frame(), &formula(f)).map_err(|e| e.to_string())?.valid;
        let b = valid_on_frame(point.frame(), &formula(f)).map_err(|e| e.to_string())?.valid;
        expect(a == b, || format!("frame validity of {f} differs: {a} vs {b}"))?;
    }
    Ok(format!(
        "constant map is a surjective frame ⊡-morphism; frame validity agrees on {} formulas",
        TRANSFER.len()
    ))
}

fn serialize_example() -> Check {
    let input = model("serialize-example")?;
    let expected = model("serialize-example.expected")?;
    let r = serialize(&input);
    let (got, want) = (print_model(&r.output), print_model(&expected));
    expect(got == want, || format!("serialized model differs:\n{got}expected:\n{want}"))?;
    expect(check_property(r.output.frame(), PropertyTag::Serial).holds, || "output not serial".into())?;
    expect(r.report.is_morphism() && r.report.surjective, || {
        r.report.describe(r.output.frame(), input.frame())
    })?;
    Ok("serialized model matches edge-for-edge; g is a surjective model ⊡-morphism".into())
}

fn refl_closure() -> Check {
    let (m, w) = pointed("refl-closure-cex")?;
    truth(&m, w, "[.]p", true)?;
    let closed = reflexive_closure(&m).output;
    truth(&closed, w, "[.]p", false)?;
    Ok("[.]p true at w, false at w after reflexive closure".into())
}

fn weak_axiom(name: &str, f: &str, tag: PropertyTag, size: usize) -> Check {
    let (m, s) = pointed(name)?;
    expect(m.size() == size, || format!("fixture has {} worlds, expected {size}", m.size()))?;
    expect(check_property(m.frame(), tag).holds, || format!("fixture frame is not {tag}"))?;
    truth(&m, s, f, false)?;
    let found = search(f, tag, 4)?;
    Ok(format!("{tag} model refutes {f} at s; search finds a {found}-world countermodel"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_passes() {
        for name in NAMES {
            let r = run_fixture(name).expect("known fixture");
            assert!(r.is_ok(), "{name}: {r:?}");
        }
        assert!(run_fixture("nope").is_none());
    }

    #[test]
    fn separation_summary_is_exact() {
        assert_eq!(
            run_fixture("prop3.2").unwrap().unwrap(),
            "L(⊞) distinguishes at depth 1 via [+]p; L(⊡)-equivalent at fixpoint"
        );
    }
}
