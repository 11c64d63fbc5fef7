//! Formula AST, parser, canonical printer and the dot-to-plus translation.
//!
//! Surface syntax (ASCII):
//!
//! ```text
//! iff   := imp ("<->" imp)*
//! imp   := or ("->" imp)?
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := ("~" | "[.]" | "[+]" | "[1]" | "[2]" | "<1>" | "<2>" | "D1" | "D2") unary | atom
//! atom  := "true" | "false" | ident | "(" iff ")"
//! ident := [a-z][A-Za-z0-9_]*
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// One of the two accessibility relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    One,
    Two,
}

impl Rel {
    pub const BOTH: [Rel; 2] = [Rel::One, Rel::Two];

    pub fn digit(self) -> char {
        match self {
            Rel::One => '1',
            Rel::Two => '2',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Generalized noncontingency.
    BoxDot(Box<Formula>),
    /// Pseudo noncontingency.
    BoxPlus(Box<Formula>),
    /// Plain necessity over one relation.
    Nec(Rel, Box<Formula>),
    /// Plain possibility over one relation.
    Poss(Rel, Box<Formula>),
    /// Unimodal noncontingency over one relation.
    Delta(Rel, Box<Formula>),
}

/// Smallest fragment a formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageTag {
    Lprop,
    Ldot,
    Lplus,
    Lfull,
}

impl LanguageTag {
    /// Join in the lattice `Lprop < Ldot, Lplus < Lfull`.
    pub fn join(self, other: LanguageTag) -> LanguageTag {
        use LanguageTag::*;
        match (self, other) {
            (Lprop, x) | (x, Lprop) => x,
            (a, b) if a == b => a,
            _ => Lfull,
        }
    }

    /// Whether formulas of `self` are also formulas of `other`.
    pub fn within(self, other: LanguageTag) -> bool {
        self.join(other) == other
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LanguageTag::Lprop => "Lprop",
            LanguageTag::Ldot => "Ldot",
            LanguageTag::Lplus => "Lplus",
            LanguageTag::Lfull => "Lfull",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: unexpected {found}, expected one of: {}", expected.join(", "))]
    Unexpected {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("{line}:{col}: unrecognised character {ch:?}")]
    BadChar { line: usize, col: usize, ch: char },
    #[error("formula is not in the dot fragment (found {0})")]
    NotDotFragment(LanguageTag),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn boxdot(f: Formula) -> Formula {
        Formula::BoxDot(Box::new(f))
    }
    pub fn boxplus(f: Formula) -> Formula {
        Formula::BoxPlus(Box::new(f))
    }
    pub fn nec(r: Rel, f: Formula) -> Formula {
        Formula::Nec(r, Box::new(f))
    }
    pub fn poss(r: Rel, f: Formula) -> Formula {
        Formula::Poss(r, Box::new(f))
    }
    pub fn delta(r: Rel, f: Formula) -> Formula {
        Formula::Delta(r, Box::new(f))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    pub fn is_modal(&self) -> bool {
        matches!(
            self,
            Formula::BoxDot(_)
                | Formula::BoxPlus(_)
                | Formula::Nec(..)
                | Formula::Poss(..)
                | Formula::Delta(..)
        )
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => vec![],
            Formula::Neg(a)
            | Formula::BoxDot(a)
            | Formula::BoxPlus(a)
            | Formula::Nec(_, a)
            | Formula::Poss(_, a)
            | Formula::Delta(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }
}

pub fn vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_vars(f, &mut out);
    out
}

fn collect_vars(f: &Formula, out: &mut BTreeSet<String>) {
    if let Formula::Atom(p) = f {
        out.insert(p.clone());
    }
    for c in f.children() {
        collect_vars(c, out);
    }
}

pub fn modal_depth(f: &Formula) -> usize {
    let inner = f.children().into_iter().map(modal_depth).max().unwrap_or(0);
    if f.is_modal() {
        inner + 1
    } else {
        inner
    }
}

pub fn language_of(f: &Formula) -> LanguageTag {
    let own = match f {
        Formula::BoxDot(_) => LanguageTag::Ldot,
        Formula::BoxPlus(_) => LanguageTag::Lplus,
        Formula::Nec(..) | Formula::Poss(..) | Formula::Delta(..) => LanguageTag::Lfull,
        _ => LanguageTag::Lprop,
    };
    f.children()
        .into_iter()
        .fold(own, |acc, c| acc.join(language_of(c)))
}

/// Rewrites every `[.]psi` as `[+]t(psi) & [+]~t(psi)`.
pub fn translate_dot_to_plus(f: &Formula) -> Result<Formula, SyntaxError> {
    let lang = language_of(f);
    if !lang.within(LanguageTag::Ldot) {
        return Err(SyntaxError::NotDotFragment(lang));
    }
    Ok(dot_to_plus(f))
}

fn dot_to_plus(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::Neg(a) => Formula::neg(dot_to_plus(a)),
        Formula::And(a, b) => Formula::and(dot_to_plus(a), dot_to_plus(b)),
        Formula::Or(a, b) => Formula::or(dot_to_plus(a), dot_to_plus(b)),
        Formula::Imp(a, b) => Formula::imp(dot_to_plus(a), dot_to_plus(b)),
        Formula::Iff(a, b) => Formula::iff(dot_to_plus(a), dot_to_plus(b)),
        Formula::BoxDot(a) => {
            let t = dot_to_plus(a);
            Formula::and(Formula::boxplus(t.clone()), Formula::boxplus(Formula::neg(t)))
        }
        // unreachable after the fragment check
        other => other.clone(),
    }
}

// ---------------------------------------------------------------------------
// printing

const PREC_IFF: u8 = 1;
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => PREC_IFF,
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    let unary = |prefix: &str, a: &Formula, out: &mut String| {
        out.push_str(prefix);
        write_at(a, PREC_UNARY, out);
    };
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Top => out.push_str("true"),
        Formula::Bot => out.push_str("false"),
        Formula::Neg(a) => unary("~", a, out),
        Formula::BoxDot(a) => unary("[.]", a, out),
        Formula::BoxPlus(a) => unary("[+]", a, out),
        Formula::Nec(r, a) => unary(&format!("[{}]", r.digit()), a, out),
        Formula::Poss(r, a) => unary(&format!("<{}>", r.digit()), a, out),
        Formula::Delta(r, a) => unary(&format!("D{}", r.digit()), a, out),
        // left-associative
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
            let p = prec(f);
            let op = match f {
                Formula::And(..) => " & ",
                Formula::Or(..) => " | ",
                _ => " <-> ",
            };
            write_at(a, p, out);
            out.push_str(op);
            write_at(b, p + 1, out);
        }
        // right-associative
        Formula::Imp(a, b) => {
            write_at(a, PREC_IMP + 1, out);
            out.push_str(" -> ");
            write_at(b, PREC_IMP, out);
        }
    }
}

/// Canonical rendering; `parse(print(f)) == f`.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// ---------------------------------------------------------------------------
// lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    LParen,
    RParen,
    Tilde,
    BoxDot,
    BoxPlus,
    Nec(Rel),
    Poss(Rel),
    Delta(Rel),
    And,
    Or,
    Imp,
    Iff,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::BoxDot => "'[.]'".into(),
            Tok::BoxPlus => "'[+]'".into(),
            Tok::Nec(r) => format!("'[{}]'", r.digit()),
            Tok::Poss(r) => format!("'<{}>'", r.digit()),
            Tok::Delta(r) => format!("'D{}'", r.digit()),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Imp => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let fixed: &[(&str, Tok)] = &[
            ("<->", Tok::Iff),
            ("[.]", Tok::BoxDot),
            ("[+]", Tok::BoxPlus),
            ("[1]", Tok::Nec(Rel::One)),
            ("[2]", Tok::Nec(Rel::Two)),
            ("<1>", Tok::Poss(Rel::One)),
            ("<2>", Tok::Poss(Rel::Two)),
            ("->", Tok::Imp),
            ("D1", Tok::Delta(Rel::One)),
            ("D2", Tok::Delta(Rel::Two)),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("~", Tok::Tilde),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ];
        if let Some((s, t)) = fixed.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push(Spanned { tok: t.clone(), line, col });
            i += s.len();
            col += s.len();
            continue;
        }
        if c.is_ascii_lowercase() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word.clone()),
            };
            out.push(Spanned { tok, line, col });
            col += i - start;
            continue;
        }
        return Err(SyntaxError::BadChar { line, col, ch: c });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

// ---------------------------------------------------------------------------
// parsing

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const UNARY_START: [&str; 13] = [
    "'~'", "'[.]'", "'[+]'", "'[1]'", "'[2]'", "'<1>'", "'<2>'", "'D1'", "'D2'", "'true'",
    "'false'", "identifier", "'('",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> SyntaxError {
        let s = &self.toks[self.pos];
        SyntaxError::Unexpected {
            line: s.line,
            col: s.col,
            found: s.tok.describe(),
            expected,
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            left = Formula::iff(left, self.imp()?);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            return Ok(Formula::imp(left, self.imp()?));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            left = Formula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Tok::Tilde => Formula::neg,
            Tok::BoxDot => Formula::boxdot,
            Tok::BoxPlus => Formula::boxplus,
            Tok::Nec(Rel::One) => |f| Formula::nec(Rel::One, f),
            Tok::Nec(Rel::Two) => |f| Formula::nec(Rel::Two, f),
            Tok::Poss(Rel::One) => |f| Formula::poss(Rel::One, f),
            Tok::Poss(Rel::Two) => |f| Formula::poss(Rel::Two, f),
            Tok::Delta(Rel::One) => |f| Formula::delta(Rel::One, f),
            Tok::Delta(Rel::Two) => |f| Formula::delta(Rel::Two, f),
            _ => return self.atom(),
        };
        self.bump();
        Ok(wrap(self.unary()?))
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(vec!["')'", "'&'", "'|'", "'->'", "'<->'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(UNARY_START.to_vec())),
        }
    }
}

pub fn parse(src: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(vec!["end of input", "'&'", "'|'", "'->'", "'<->'"]));
    }
    Ok(f)
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    fn leaf(atoms: &'static [&'static str]) -> impl Strategy<Value = Formula> {
        prop_oneof![
            6 => proptest::sample::select(atoms).prop_map(Formula::atom),
            1 => Just(Formula::Top),
            1 => Just(Formula::Bot),
        ]
    }

    pub fn formula(
        lang: LanguageTag,
        atoms: &'static [&'static str],
        depth: u32,
    ) -> BoxedStrategy<Formula> {
        leaf(atoms)
            .prop_recursive(depth, 48, 2, move |inner| {
                let mut opts: Vec<BoxedStrategy<Formula>> = vec![
                    inner.clone().prop_map(Formula::neg).boxed(),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Formula::and(a, b))
                        .boxed(),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Formula::or(a, b))
                        .boxed(),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Formula::imp(a, b))
                        .boxed(),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Formula::iff(a, b))
                        .boxed(),
                ];
                if matches!(lang, LanguageTag::Ldot | LanguageTag::Lfull) {
                    opts.push(inner.clone().prop_map(Formula::boxdot).boxed());
                }
                if matches!(lang, LanguageTag::Lplus | LanguageTag::Lfull) {
                    opts.push(inner.clone().prop_map(Formula::boxplus).boxed());
                }
                if lang == LanguageTag::Lfull {
                    for r in Rel::BOTH {
                        opts.push(inner.clone().prop_map(move |f| Formula::nec(r, f)).boxed());
                        opts.push(inner.clone().prop_map(move |f| Formula::poss(r, f)).boxed());
                        opts.push(inner.clone().prop_map(move |f| Formula::delta(r, f)).boxed());
                    }
                }
                proptest::strategy::Union::new(opts)
            })
            .boxed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn iff_of_boxdots_prints_canonically() {
        let f = Formula::iff(
            Formula::boxdot(Formula::atom("p")),
            Formula::boxdot(Formula::neg(Formula::atom("p"))),
        );
        assert_eq!(print(&f), "[.]p <-> [.]~p");
        assert_eq!(p("[.]p <-> [.]~p"), f);
    }

    #[test]
    fn implication_is_right_associative() {
        let f = p("a -> b -> c");
        assert_eq!(
            f,
            Formula::imp(Formula::atom("a"), Formula::imp(Formula::atom("b"), Formula::atom("c")))
        );
        assert_eq!(print(&p("(a -> b) -> c")), "(a -> b) -> c");
    }

    #[test]
    fn binary_operators_are_left_associative() {
        assert_eq!(print(&p("a & (b & c)")), "a & (b & c)");
        assert_eq!(print(&p("(a & b) & c")), "a & b & c");
        assert_eq!(print(&p("(a <-> b) <-> c")), "a <-> b <-> c");
        assert_eq!(print(&p("a | b & c")), "a | b & c");
        assert_eq!(print(&p("(a | b) & c")), "(a | b) & c");
    }

    #[test]
    fn all_operators_parse() {
        let f = p("D1 p & D2~q | <1>[2]r -> [1]<2>true <-> ~false");
        assert_eq!(language_of(&f), LanguageTag::Lfull);
        assert_eq!(p(&print(&f)), f);
        assert_eq!(p("# leading comment\n[+] p # trailing"), p("[+]p"));
    }

    #[test]
    fn parse_errors_carry_position_and_expectations() {
        match parse("p &\n  & q") {
            Err(SyntaxError::Unexpected { line, col, expected, .. }) => {
                assert_eq!((line, col), (2, 3));
                assert!(expected.contains(&"identifier"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("p $ q"), Err(SyntaxError::BadChar { ch: '$', .. })));
        assert!(parse("(p").is_err());
        assert!(parse("p q").is_err());
        assert!(parse("").is_err());
        assert!(parse("P").is_err());
    }

    #[test]
    fn languages() {
        assert_eq!(language_of(&p("p & ~q")), LanguageTag::Lprop);
        assert_eq!(language_of(&p("[.]p")), LanguageTag::Ldot);
        assert_eq!(language_of(&p("[+]p | q")), LanguageTag::Lplus);
        assert_eq!(language_of(&p("[.]p & [+]p")), LanguageTag::Lfull);
        assert_eq!(language_of(&p("[1]p")), LanguageTag::Lfull);
        assert_eq!(language_of(&p("D2 p")), LanguageTag::Lfull);
    }

    #[test]
    fn depth_and_vars() {
        let f = p("[.]([+]p | q) & r");
        assert_eq!(modal_depth(&f), 2);
        assert_eq!(vars(&f).into_iter().collect::<Vec<_>>(), vec!["p", "q", "r"]);
        assert_eq!(modal_depth(&p("p")), 0);
    }

    #[test]
    fn nested_dot_translates() {
        let t = translate_dot_to_plus(&p("[.][.]p")).unwrap();
        assert_eq!(print(&t), "[+]([+]p & [+]~p) & [+]~([+]p & [+]~p)");
        assert!(matches!(
            translate_dot_to_plus(&p("[+]p")),
            Err(SyntaxError::NotDotFragment(LanguageTag::Lplus))
        ));
        assert_eq!(translate_dot_to_plus(&p("p -> q")).unwrap(), p("p -> q"));
    }

    proptest! {
        #[test]
        fn round_trip(f in strategies::formula(LanguageTag::Lfull, &["p", "q", "r1"], 6)) {
            prop_assert_eq!(parse(&print(&f)).unwrap(), f);
        }

        #[test]
        fn translation_lands_in_plus(f in strategies::formula(LanguageTag::Ldot, &["p", "q"], 5)) {
            let t = translate_dot_to_plus(&f).unwrap();
            prop_assert!(language_of(&t).within(LanguageTag::Lplus));
            prop_assert_eq!(modal_depth(&t), modal_depth(&f));
            prop_assert_eq!(vars(&t), vars(&f));
        }
    }
}
