//! Hilbert-style proof checking for `Kplus`, `Kdot` and the dot extensions.
//!
//! Proof file format:
//!
//! ```text
//! system: Kdot            # Kplus | Kdot | Tdot | Bdot | K4dot | K5dot
//! allow: HDISplus         # optional, Kplus only
//! 1. PC: p | ~p
//! 2. AX EQUdot: [.]p <-> [.]~p
//! 3. MP 1 2: ...          # line 2 must be (line 1 -> this line)
//! 4. REdot 2: ...
//! 5. THM name: ...        # theorem from the library
//! ```
//!
//! Only theorems are proved: there are no premises. Rule conclusions are
//! matched structurally, with no reordering of conjuncts or disjuncts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::kripke::PropertyTag;
use crate::syntax::{language_of, parse, Formula, LanguageTag, SyntaxError};

/// Most atoms `is_tautology` will enumerate.
pub const TAUTOLOGY_ATOM_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemTag {
    Kplus,
    Kdot,
    Tdot,
    Bdot,
    K4dot,
    K5dot,
}

impl SystemTag {
    pub const ALL: [SystemTag; 6] = [
        SystemTag::Kplus,
        SystemTag::Kdot,
        SystemTag::Tdot,
        SystemTag::Bdot,
        SystemTag::K4dot,
        SystemTag::K5dot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemTag::Kplus => "Kplus",
            SystemTag::Kdot => "Kdot",
            SystemTag::Tdot => "Tdot",
            SystemTag::Bdot => "Bdot",
            SystemTag::K4dot => "K4dot",
            SystemTag::K5dot => "K5dot",
        }
    }

    pub fn language(self) -> LanguageTag {
        match self {
            SystemTag::Kplus => LanguageTag::Lplus,
            _ => LanguageTag::Ldot,
        }
    }

    /// Frame class the system is sound for.
    pub fn frame_class(self) -> PropertyTag {
        match self {
            SystemTag::Kplus | SystemTag::Kdot => PropertyTag::All,
            SystemTag::Tdot => PropertyTag::Reflexive,
            SystemTag::Bdot => PropertyTag::Symmetric,
            SystemTag::K4dot => PropertyTag::Qt,
            SystemTag::K5dot => PropertyTag::Qe,
        }
    }

    pub fn axioms(self) -> Vec<AxiomSchema> {
        let names: &[&str] = match self {
            SystemTag::Kplus => &["CONplus", "DISplus"],
            SystemTag::Kdot => &["AxTop", "EQUdot", "CONdot", "DISdot"],
            SystemTag::Tdot => &["AxTop", "EQUdot", "CONdot", "DISdot", "Tdot"],
            SystemTag::Bdot => &["AxTop", "EQUdot", "CONdot", "DISdot", "Bdot"],
            SystemTag::K4dot => &["AxTop", "EQUdot", "CONdot", "DISdot", "A4dot"],
            SystemTag::K5dot => &["AxTop", "EQUdot", "CONdot", "DISdot", "A5dot"],
        };
        names.iter().map(|n| AxiomSchema::named(n).expect("known axiom")).collect()
    }

    fn allows(self, rule: &Justification, hdis: bool) -> bool {
        match rule {
            Justification::Pc | Justification::Ax(_) | Justification::Mp(..) | Justification::Thm(_) => true,
            Justification::ReDot(_) => self != SystemTag::Kplus,
            Justification::RePlus(_) | Justification::RnPlus(_) => self == SystemTag::Kplus,
            Justification::HdisPlus(..) => self == SystemTag::Kplus && hdis,
        }
    }

    /// Whether theorems of `self` may be imported into `other`.
    pub fn included_in(self, other: SystemTag) -> bool {
        self == other || (self == SystemTag::Kdot && other != SystemTag::Kplus)
    }
}

impl fmt::Display for SystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SystemTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SystemTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown system '{s}'"))
    }
}

/// Axiom schema over the metavariables `phi`, `psi`, `chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: &'static str,
    pub pattern: Formula,
}

const SCHEMAS: [(&str, &str); 10] = [
    ("CONplus", "[+]phi & [+]psi -> [+](phi & psi) & [+](phi | psi)"),
    ("DISplus", "[+]phi -> [+](phi | psi) | [+](phi & chi)"),
    ("AxTop", "[.]true"),
    ("EQUdot", "[.]phi <-> [.]~phi"),
    ("CONdot", "[.]phi & [.]psi -> [.](phi & psi)"),
    ("DISdot", "[.]phi -> [.](phi | psi) | [.](~phi | chi)"),
    ("Tdot", "phi -> ([.]phi -> ([.](phi -> psi) -> [.]psi))"),
    ("Bdot", "phi -> [.](([.]phi & [.](phi -> psi) & ~[.]psi) -> chi)"),
    ("A4dot", "[.]phi -> [.]([.]phi | psi)"),
    ("A5dot", "~[.]phi -> [.](~[.]phi | psi)"),
];

impl AxiomSchema {
    pub fn named(name: &str) -> Option<AxiomSchema> {
        SCHEMAS.iter().find(|(n, _)| *n == name).map(|(n, src)| AxiomSchema {
            name: n,
            pattern: parse(src).expect("schema patterns parse"),
        })
    }

    pub fn all() -> Vec<AxiomSchema> {
        SCHEMAS.iter().filter_map(|(n, _)| AxiomSchema::named(n)).collect()
    }
}

pub type Substitution = BTreeMap<String, Formula>;

/// Structural match of `f` against the schema; metavariables bind on first
/// occurrence and later occurrences must agree.
pub fn match_schema(schema: &AxiomSchema, f: &Formula) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    matches(&schema.pattern, f, &mut sigma).then_some(sigma)
}

fn matches(pat: &Formula, f: &Formula, sigma: &mut Substitution) -> bool {
    use Formula::*;
    match (pat, f) {
        (Atom(m), _) => match sigma.get(m) {
            Some(bound) => bound == f,
            None => {
                sigma.insert(m.clone(), f.clone());
                true
            }
        },
        (Top, Top) | (Bot, Bot) => true,
        (Neg(a), Neg(b)) | (BoxDot(a), BoxDot(b)) | (BoxPlus(a), BoxPlus(b)) => matches(a, b, sigma),
        (Nec(r, a), Nec(s, b)) | (Poss(r, a), Poss(s, b)) | (Delta(r, a), Delta(s, b)) => {
            r == s && matches(a, b, sigma)
        }
        (And(a1, a2), And(b1, b2))
        | (Or(a1, a2), Or(b1, b2))
        | (Imp(a1, a2), Imp(b1, b2))
        | (Iff(a1, a2), Iff(b1, b2)) => matches(a1, b1, sigma) && matches(a2, b2, sigma),
        _ => false,
    }
}

/// Replaces metavariables in `pat` by their images.
pub fn substitute(pat: &Formula, sigma: &Substitution) -> Formula {
    use Formula::*;
    let s = |g: &Formula| Box::new(substitute(g, sigma));
    match pat {
        Atom(m) => sigma.get(m).cloned().unwrap_or_else(|| pat.clone()),
        Top | Bot => pat.clone(),
        Neg(a) => Neg(s(a)),
        BoxDot(a) => BoxDot(s(a)),
        BoxPlus(a) => BoxPlus(s(a)),
        Nec(r, a) => Nec(*r, s(a)),
        Poss(r, a) => Poss(*r, s(a)),
        Delta(r, a) => Delta(*r, s(a)),
        And(a, b) => And(s(a), s(b)),
        Or(a, b) => Or(s(a), s(b)),
        Imp(a, b) => Imp(s(a), s(b)),
        Iff(a, b) => Iff(s(a), s(b)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("skeleton has {0} atoms, more than {TAUTOLOGY_ATOM_CAP}")]
    AtomBudget(usize),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {err}")]
    Formula { line: usize, err: SyntaxError },
    #[error("missing 'system:' header")]
    MissingSystem,
    #[error("proof has no lines")]
    Empty,
    #[error("{0}")]
    Io(String),
}

/// Propositional skeleton check: maximal modal subformulas and variables
/// become atoms, then every assignment is tried.
pub fn is_tautology(f: &Formula) -> Result<bool, ProofError> {
    let mut atoms: Vec<&Formula> = Vec::new();
    collect_skeleton_atoms(f, &mut atoms);
    if atoms.len() > TAUTOLOGY_ATOM_CAP {
        return Err(ProofError::AtomBudget(atoms.len()));
    }
    Ok((0..1u32 << atoms.len()).all(|bits| eval_skeleton(f, &atoms, bits)))
}

fn collect_skeleton_atoms<'f>(f: &'f Formula, atoms: &mut Vec<&'f Formula>) {
    if f.is_modal() || matches!(f, Formula::Atom(_)) {
        if !atoms.contains(&f) {
            atoms.push(f);
        }
        return;
    }
    for c in f.children() {
        collect_skeleton_atoms(c, atoms);
    }
}

fn eval_skeleton(f: &Formula, atoms: &[&Formula], bits: u32) -> bool {
    let e = |g: &Formula| eval_skeleton(g, atoms, bits);
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Neg(a) => !e(a),
        Formula::And(a, b) => e(a) && e(b),
        Formula::Or(a, b) => e(a) || e(b),
        Formula::Imp(a, b) => !e(a) || e(b),
        Formula::Iff(a, b) => e(a) == e(b),
        _ => {
            let i = atoms.iter().position(|a| *a == f).expect("collected");
            bits >> i & 1 == 1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Pc,
    Ax(String),
    Mp(usize, usize),
    ReDot(usize),
    RePlus(usize),
    RnPlus(usize),
    HdisPlus(usize, usize),
    Thm(String),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Pc => write!(f, "PC"),
            Justification::Ax(n) => write!(f, "AX {n}"),
            Justification::Mp(i, j) => write!(f, "MP {i} {j}"),
            Justification::ReDot(i) => write!(f, "REdot {i}"),
            Justification::RePlus(i) => write!(f, "REplus {i}"),
            Justification::RnPlus(i) => write!(f, "RNplus {i}"),
            Justification::HdisPlus(i, j) => write!(f, "HDISplus {i} {j}"),
            Justification::Thm(n) => write!(f, "THM {n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub index: usize,
    pub justification: Justification,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub system: SystemTag,
    pub allow_hdis: bool,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// Renders back to the file format.
    pub fn print(&self) -> String {
        let mut out = format!("system: {}\n", self.system);
        if self.allow_hdis {
            out.push_str("allow: HDISplus\n");
        }
        for l in &self.lines {
            out.push_str(&format!("{}. {}: {}\n", l.index, l.justification, l.formula));
        }
        out
    }
}

fn parse_justification(text: &str, line: usize) -> Result<Justification, ProofError> {
    let bad = |msg: &str| ProofError::Syntax { line, msg: msg.to_string() };
    let toks: Vec<&str> = text.split_whitespace().collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("bad line reference '{s}'")));
    Ok(match toks.as_slice() {
        ["PC"] => Justification::Pc,
        ["AX", name] => Justification::Ax(name.to_string()),
        ["THM", name] => Justification::Thm(name.to_string()),
        ["MP", i, j] => Justification::Mp(num(i)?, num(j)?),
        ["HDISplus", i, j] => Justification::HdisPlus(num(i)?, num(j)?),
        ["REdot", i] => Justification::ReDot(num(i)?),
        ["REplus", i] => Justification::RePlus(num(i)?),
        ["RNplus", i] => Justification::RnPlus(num(i)?),
        _ => return Err(bad(&format!("unknown justification '{text}'"))),
    })
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofError> {
    let mut system = None;
    let mut allow_hdis = false;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |msg: &str| ProofError::Syntax { line, msg: msg.to_string() };
        if let Some(rest) = content.strip_prefix("system:") {
            system = Some(rest.trim().parse::<SystemTag>().map_err(|e| bad(&e))?);
            continue;
        }
        if let Some(rest) = content.strip_prefix("allow:") {
            if rest.trim() != "HDISplus" {
                return Err(bad("only 'allow: HDISplus' is recognised"));
            }
            allow_hdis = true;
            continue;
        }
        let (num, rest) = content.split_once('.').ok_or_else(|| bad("expected '<n>. RULE: formula'"))?;
        let index = num.trim().parse::<usize>().map_err(|_| bad("bad line number"))?;
        let (just, formula) = rest.split_once(':').ok_or_else(|| bad("expected ':' before the formula"))?;
        let justification = parse_justification(just.trim(), line)?;
        let formula = parse(formula).map_err(|err| ProofError::Formula { line, err })?;
        lines.push(ProofLine { index, justification, formula });
    }
    let system = system.ok_or(ProofError::MissingSystem)?;
    if lines.is_empty() {
        return Err(ProofError::Empty);
    }
    Ok(Proof { system, allow_hdis, lines })
}

/// Why a line was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("line number does not increase")]
    NotIncreasing,
    #[error("reference to line {0}, which is not an earlier line")]
    BadReference(usize),
    #[error("formula is in {0}, outside the system's language")]
    Language(LanguageTag),
    #[error("rule {0} is not available in this system")]
    RuleNotAllowed(String),
    #[error("not a propositional tautology")]
    NotTautology,
    #[error("{0}")]
    Budget(String),
    #[error("axiom {0} is not part of this system")]
    UnknownAxiom(String),
    #[error("formula is not an instance of {0}")]
    NotInstance(String),
    #[error("cited line is not the implication from the first premise to this line")]
    MpMismatch,
    #[error("premise is not a biconditional")]
    NotBiconditional,
    #[error("conclusion does not match the rule applied to the premise")]
    ConclusionMismatch,
    #[error("premises do not have the shapes a -> b and b -> c")]
    HdisShape,
    #[error("no theorem named {0} in the library")]
    UnknownTheorem(String),
    #[error("theorem {0} was proved in {1}, which is not included in this system")]
    TheoremSystem(String, SystemTag),
    #[error("formula differs from library theorem {0}")]
    TheoremMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofReport {
    pub ok: bool,
    pub first_bad_line: Option<(usize, LineError)>,
}

/// Named theorems available to `THM` lines.
#[derive(Clone, Debug, Default)]
pub struct Library {
    pub theorems: BTreeMap<String, (SystemTag, Formula)>,
    /// Files that failed to parse or check while loading, with the reason.
    pub rejected: Vec<(String, String)>,
}

impl Library {
    pub fn insert(&mut self, name: &str, system: SystemTag, f: Formula) {
        self.theorems.insert(name.to_string(), (system, f));
    }

    /// Loads every `*.proof` in `dir`. Proofs may cite each other; files are
    /// retried until no more can be checked.
    pub fn load_dir(dir: &Path) -> Result<Library, ProofError> {
        let mut pending: Vec<(String, Proof)> = Vec::new();
        let mut lib = Library::default();
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| ProofError::Io(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "proof"))
            .collect();
        paths.sort();
        for p in paths {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let text = std::fs::read_to_string(&p).map_err(|e| ProofError::Io(format!("{}: {e}", p.display())))?;
            match parse_proof(&text) {
                Ok(proof) => pending.push((stem, proof)),
                Err(e) => lib.rejected.push((stem, e.to_string())),
            }
        }
        loop {
            let before = pending.len();
            let mut still = Vec::new();
            for (stem, proof) in pending {
                if check_proof(&proof, &lib).ok {
                    let concl = proof.conclusion().expect("nonempty").clone();
                    lib.insert(&stem, proof.system, concl);
                } else {
                    still.push((stem, proof));
                }
            }
            pending = still;
            if pending.len() == before {
                break;
            }
        }
        for (stem, proof) in pending {
            let why = check_proof(&proof, &lib)
                .first_bad_line
                .map(|(i, e)| format!("line {i}: {e}"))
                .unwrap_or_default();
            lib.rejected.push((stem, why));
        }
        Ok(lib)
    }
}

fn check_line(
    proof: &Proof,
    pos: usize,
    lib: &Library,
    earlier: &BTreeMap<usize, &Formula>,
) -> Result<(), LineError> {
    let line = &proof.lines[pos];
    let sys = proof.system;
    let cur = &line.formula;
    let lang = language_of(cur);
    if !lang.within(sys.language()) {
        return Err(LineError::Language(lang));
    }
    if !sys.allows(&line.justification, proof.allow_hdis) {
        return Err(LineError::RuleNotAllowed(line.justification.to_string()));
    }
    let get = |i: usize| earlier.get(&i).copied().ok_or(LineError::BadReference(i));
    let modal = |f: Formula| match sys {
        SystemTag::Kplus => Formula::boxplus(f),
        _ => Formula::boxdot(f),
    };
    match &line.justification {
        Justification::Pc => match is_tautology(cur) {
            Ok(true) => Ok(()),
            Ok(false) => Err(LineError::NotTautology),
            Err(e) => Err(LineError::Budget(e.to_string())),
        },
        Justification::Ax(name) => {
            let schema = sys
                .axioms()
                .into_iter()
                .find(|s| s.name == name)
                .ok_or_else(|| LineError::UnknownAxiom(name.clone()))?;
            match_schema(&schema, cur).map(|_| ()).ok_or_else(|| LineError::NotInstance(name.clone()))
        }
        Justification::Mp(i, j) => {
            let (a, b) = (get(*i)?, get(*j)?);
            if *b == Formula::imp(a.clone(), cur.clone()) {
                Ok(())
            } else {
                Err(LineError::MpMismatch)
            }
        }
        Justification::ReDot(i) | Justification::RePlus(i) => match get(*i)? {
            Formula::Iff(a, b) => {
                if *cur == Formula::iff(modal((**a).clone()), modal((**b).clone())) {
                    Ok(())
                } else {
                    Err(LineError::ConclusionMismatch)
                }
            }
            _ => Err(LineError::NotBiconditional),
        },
        Justification::RnPlus(i) => {
            let a = get(*i)?;
            let want = Formula::and(Formula::boxplus(a.clone()), Formula::boxplus(Formula::neg(a.clone())));
            if *cur == want {
                Ok(())
            } else {
                Err(LineError::ConclusionMismatch)
            }
        }
        Justification::HdisPlus(i, j) => match (get(*i)?, get(*j)?) {
            (Formula::Imp(a, b1), Formula::Imp(b2, c)) if b1 == b2 => {
                let want = Formula::imp(
                    Formula::boxplus((**b1).clone()),
                    Formula::or(Formula::boxplus((**a).clone()), Formula::boxplus((**c).clone())),
                );
                if *cur == want {
                    Ok(())
                } else {
                    Err(LineError::ConclusionMismatch)
                }
            }
            _ => Err(LineError::HdisShape),
        },
        Justification::Thm(name) => {
            let (tsys, f) = lib
                .theorems
                .get(name)
                .ok_or_else(|| LineError::UnknownTheorem(name.clone()))?;
            if !tsys.included_in(sys) {
                return Err(LineError::TheoremSystem(name.clone(), *tsys));
            }
            if f == cur {
                Ok(())
            } else {
                Err(LineError::TheoremMismatch(name.clone()))
            }
        }
    }
}

/// Checks every line in order and reports the first failure by line number.
pub fn check_proof(proof: &Proof, lib: &Library) -> ProofReport {
    let mut earlier: BTreeMap<usize, &Formula> = BTreeMap::new();
    let mut last = None;
    for (pos, line) in proof.lines.iter().enumerate() {
        let res = if last.is_some_and(|l| line.index <= l) {
            Err(LineError::NotIncreasing)
        } else {
            check_line(proof, pos, lib, &earlier)
        };
        if let Err(e) = res {
            return ProofReport { ok: false, first_bad_line: Some((line.index, e)) };
        }
        earlier.insert(line.index, &line.formula);
        last = Some(line.index);
    }
    ProofReport { ok: true, first_bad_line: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{print, strategies as formulas};
    use proptest::prelude::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn schema(n: &str) -> AxiomSchema {
        AxiomSchema::named(n).unwrap()
    }

    #[test]
    fn schema_matching() {
        let s = match_schema(&schema("EQUdot"), &f("[.](p&q) <-> [.]~(p&q)")).unwrap();
        assert_eq!(s.get("phi"), Some(&f("p & q")));
        let s = match_schema(&schema("DISdot"), &f("[.]p -> [.](p|q) | [.](~p|r)")).unwrap();
        assert_eq!((s["phi"].clone(), s["psi"].clone(), s["chi"].clone()), (f("p"), f("q"), f("r")));
        assert!(match_schema(&schema("CONdot"), &f("[.]p -> [.]p")).is_none());
        // later occurrences must agree with the first binding
        assert!(match_schema(&schema("EQUdot"), &f("[.]p <-> [.]~q")).is_none());
        assert!(match_schema(&schema("AxTop"), &f("[.]true")).is_some());
        assert!(match_schema(&schema("AxTop"), &f("[.]false")).is_none());
    }

    #[test]
    fn tautologies() {
        assert!(is_tautology(&f("[.]p | ~[.]p")).unwrap());
        assert!(!is_tautology(&f("p -> q")).unwrap());
        assert!(is_tautology(&f("([+]p & [+]q) -> [+]p")).unwrap());
        assert!(!is_tautology(&f("[.]p -> [.](p & p)")).unwrap());
        let wide = Formula::disj((0..21).map(|i| f(&format!("p{i}"))));
        assert_eq!(is_tautology(&wide), Err(ProofError::AtomBudget(21)));
    }

    const W4: &str = "system: K4dot
1. AX A4dot: [.]p -> [.]([.]p | false)
2. PC: [.]p | false <-> [.]p
3. REdot 2: [.]([.]p | false) <-> [.][.]p
4. PC: ([.]p -> [.]([.]p | false)) -> (([.]([.]p | false) <-> [.][.]p) -> ([.]p -> [.][.]p))
5. MP 1 4: ([.]([.]p | false) <-> [.][.]p) -> ([.]p -> [.][.]p)
6. MP 3 5: [.]p -> [.][.]p
";

    #[test]
    fn weak_four_from_four() {
        let p = parse_proof(W4).unwrap();
        assert_eq!(check_proof(&p, &Library::default()), ProofReport { ok: true, first_bad_line: None });
        assert_eq!(parse_proof(&p.print()).unwrap(), p);
        // the same script is not a Kdot proof
        let mut k = p.clone();
        k.system = SystemTag::Kdot;
        assert_eq!(
            check_proof(&k, &Library::default()).first_bad_line,
            Some((1, LineError::UnknownAxiom("A4dot".into())))
        );
    }

    #[test]
    fn mutations_are_caught_at_the_right_line() {
        let cases = [
            ("6. MP 3 5:", "6. MP 2 5:", 6, LineError::MpMismatch),
            ("5. MP 1 4:", "5. MP 1 3:", 5, LineError::MpMismatch),
            ("3. REdot 2:", "3. REdot 1:", 3, LineError::NotBiconditional),
            ("6. MP 3 5:", "6. MP 3 7:", 6, LineError::BadReference(7)),
            ("1. AX A4dot:", "1. AX A5dot:", 1, LineError::UnknownAxiom("A5dot".into())),
            ("2. PC:", "2. REplus 1:", 2, LineError::RuleNotAllowed("REplus 1".into())),
        ];
        for (from, to, line, err) in cases {
            let p = parse_proof(&W4.replace(from, to)).unwrap();
            assert_eq!(check_proof(&p, &Library::default()).first_bad_line, Some((line, err)), "{to}");
        }
        let p = parse_proof(&W4.replace("4. PC:", "2. PC:")).unwrap();
        assert_eq!(check_proof(&p, &Library::default()).first_bad_line, Some((2, LineError::NotIncreasing)));
    }

    #[test]
    fn plus_rules() {
        let text = "system: Kplus
1. PC: p | ~p
2. RNplus 1: [+](p | ~p) & [+]~(p | ~p)
3. PC: p <-> ~~p
4. REplus 3: [+]p <-> [+]~~p
5. AX DISplus: [+]p -> [+](p | q) | [+](p & r)
";
        assert!(check_proof(&parse_proof(text).unwrap(), &Library::default()).ok);
        // conjuncts in the other order are rejected
        let swapped = text.replace("2. RNplus 1: [+](p | ~p) & [+]~(p | ~p)", "2. RNplus 1: [+]~(p | ~p) & [+](p | ~p)");
        assert_eq!(
            check_proof(&parse_proof(&swapped).unwrap(), &Library::default()).first_bad_line,
            Some((2, LineError::ConclusionMismatch))
        );
        let dot = text.replace("5. AX DISplus: [+]p -> [+](p | q) | [+](p & r)", "5. PC: [.]p | ~[.]p");
        assert_eq!(
            check_proof(&parse_proof(&dot).unwrap(), &Library::default()).first_bad_line,
            Some((5, LineError::Language(LanguageTag::Ldot)))
        );
    }

    #[test]
    fn hdis_is_opt_in() {
        let body = "1. PC: p & q -> p
2. PC: p -> p | r
3. HDISplus 1 2: [+]p -> [+](p & q) | [+](p | r)
";
        let off = parse_proof(&format!("system: Kplus\n{body}")).unwrap();
        assert!(matches!(
            check_proof(&off, &Library::default()).first_bad_line,
            Some((3, LineError::RuleNotAllowed(_)))
        ));
        let on = parse_proof(&format!("system: Kplus\nallow: HDISplus\n{body}")).unwrap();
        assert!(check_proof(&on, &Library::default()).ok);
        let bad = parse_proof(&format!("system: Kplus\nallow: HDISplus\n{}", body.replace("2. PC: p -> p | r", "2. PC: q -> q | r"))).unwrap();
        assert_eq!(check_proof(&bad, &Library::default()).first_bad_line, Some((3, LineError::HdisShape)));
    }

    #[test]
    fn theorems_from_library() {
        let mut lib = Library::default();
        lib.insert("w4", SystemTag::K4dot, f("[.]p -> [.][.]p"));
        lib.insert("top", SystemTag::Kdot, f("[.]true"));
        let p = parse_proof("system: K4dot\n1. THM w4: [.]p -> [.][.]p\n2. THM top: [.]true\n").unwrap();
        assert!(check_proof(&p, &lib).ok);
        let p = parse_proof("system: Tdot\n1. THM w4: [.]p -> [.][.]p\n").unwrap();
        assert_eq!(
            check_proof(&p, &lib).first_bad_line,
            Some((1, LineError::TheoremSystem("w4".into(), SystemTag::K4dot)))
        );
        let p = parse_proof("system: K4dot\n1. THM w4: [.]q -> [.][.]q\n").unwrap();
        assert_eq!(check_proof(&p, &lib).first_bad_line, Some((1, LineError::TheoremMismatch("w4".into()))));
        let p = parse_proof("system: K4dot\n1. THM nope: p\n").unwrap();
        assert!(matches!(check_proof(&p, &lib).first_bad_line, Some((1, LineError::UnknownTheorem(_)))));
    }

    #[test]
    fn library_directory() {
        let dir = std::env::temp_dir().join(format!("nc-lib-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        // b cites a, so loading must retry
        std::fs::write(dir.join("b.proof"), "system: K4dot\n1. THM a: [.]p -> [.][.]p\n2. PC: ([.]p -> [.][.]p) -> (q -> [.]p -> [.][.]p)\n3. MP 1 2: q -> [.]p -> [.][.]p\n").unwrap();
        std::fs::write(dir.join("a.proof"), W4).unwrap();
        std::fs::write(dir.join("c.proof"), "system: Kdot\n1. PC: p\n").unwrap();
        std::fs::write(dir.join("notes.txt"), "ignored").unwrap();
        let lib = Library::load_dir(&dir).unwrap();
        std::fs::remove_dir_all(&dir).unwrap();
        assert_eq!(lib.theorems.keys().collect::<Vec<_>>(), vec!["a", "b"]);
        assert_eq!(lib.rejected.len(), 1);
        assert_eq!(lib.rejected[0].0, "c");
    }

    #[test]
    fn file_errors() {
        assert_eq!(parse_proof("1. PC: p | ~p\n"), Err(ProofError::MissingSystem));
        assert_eq!(parse_proof("system: Kdot\n"), Err(ProofError::Empty));
        assert!(matches!(parse_proof("system: S5\n"), Err(ProofError::Syntax { line: 1, .. })));
        assert!(matches!(parse_proof("system: Kdot\n1. XX: p\n"), Err(ProofError::Syntax { line: 2, .. })));
        assert!(matches!(parse_proof("system: Kdot\n1. PC: p &\n"), Err(ProofError::Formula { line: 2, .. })));
    }

    proptest! {
        #[test]
        fn matched_substitution_reprints(
            a in formulas::formula(LanguageTag::Ldot, &["p", "q"], 3),
            b in formulas::formula(LanguageTag::Ldot, &["p", "q"], 3),
            c in formulas::formula(LanguageTag::Ldot, &["p", "q"], 3),
        ) {
            for s in AxiomSchema::all() {
                let sigma: Substitution = [("phi", &a), ("psi", &b), ("chi", &c)]
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                let inst = substitute(&s.pattern, &sigma);
                let found = match_schema(&s, &inst).expect("instance matches");
                prop_assert_eq!(print(&substitute(&s.pattern, &found)), print(&inst));
            }
        }
    }
}
