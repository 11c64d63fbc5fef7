//! Bimodal frames and models, the model file format, frame properties,
//! frame enumeration, disjoint union and DOT export.
//!
//! Model file format:
//!
//! ```text
//! worlds: s t u
//! R1: s->t t->t
//! R2: s->u
//! v: p = t
//! ```
//!
//! `R1`/`R2` lines may repeat and are unioned. Variables not listed have an
//! empty extension. `#` starts a comment. An optional `point: w` line names a
//! distinguished world.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::syntax::Rel;

pub type WorldId = usize;

/// Largest frame size `enumerate_frames` accepts by default.
pub const DEFAULT_ENUM_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: unknown world '{name}'")]
    UnknownWorld { line: usize, name: String },
    #[error("line {line}: duplicate 'worlds:' line")]
    DuplicateWorlds { line: usize },
    #[error("missing 'worlds:' line")]
    MissingWorlds,
    #[error("line {line}: world '{name}' declared twice")]
    DuplicateWorld { line: usize, name: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("a model needs at least one world")]
    Empty,
    #[error("frame size {n} outside 1..={cap}")]
    EnumerationCap { n: usize, cap: usize },
}

/// Successor rows of one relation over a fixed world set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    rows: Vec<FixedBitSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { rows: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (WorldId, WorldId)>) -> Self {
        let mut r = Relation::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, x: WorldId, y: WorldId) {
        self.rows[x].insert(y);
    }

    pub fn contains(&self, x: WorldId, y: WorldId) -> bool {
        self.rows[x].contains(y)
    }

    pub fn successors(&self, x: WorldId) -> &FixedBitSet {
        &self.rows[x]
    }

    pub fn has_successor(&self, x: WorldId) -> bool {
        !self.rows[x].is_clear()
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (WorldId, WorldId)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    worlds: Vec<String>,
    r1: Relation,
    r2: Relation,
}

impl Frame {
    /// Frame with the given world names and no edges.
    pub fn new(worlds: Vec<String>) -> Result<Self, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::Empty);
        }
        for (i, w) in worlds.iter().enumerate() {
            if worlds[..i].contains(w) {
                return Err(ModelError::DuplicateWorld { line: 0, name: w.clone() });
            }
        }
        let n = worlds.len();
        Ok(Frame { worlds, r1: Relation::empty(n), r2: Relation::empty(n) })
    }

    /// Frame on `w0..w{n-1}`.
    pub fn numbered(n: usize) -> Result<Self, ModelError> {
        Frame::new((0..n).map(|i| format!("w{i}")).collect())
    }

    pub fn size(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: WorldId) -> &str {
        &self.worlds[w]
    }

    pub fn index_of(&self, name: &str) -> Option<WorldId> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn relation(&self, r: Rel) -> &Relation {
        match r {
            Rel::One => &self.r1,
            Rel::Two => &self.r2,
        }
    }

    pub fn relation_mut(&mut self, r: Rel) -> &mut Relation {
        match r {
            Rel::One => &mut self.r1,
            Rel::Two => &mut self.r2,
        }
    }

    pub fn r1(&self) -> &Relation {
        &self.r1
    }

    pub fn r2(&self) -> &Relation {
        &self.r2
    }

    pub fn add_edge(&mut self, r: Rel, x: WorldId, y: WorldId) {
        self.relation_mut(r).insert(x, y);
    }

    pub fn successors(&self, r: Rel, x: WorldId) -> &FixedBitSet {
        self.relation(r).successors(x)
    }

    /// Worlds with no successor under either relation.
    pub fn is_endpoint(&self, x: WorldId) -> bool {
        !self.r1.has_successor(x) && !self.r2.has_successor(x)
    }

    /// Number of distinct ordered pairs in `R1 ∪ R2`.
    pub fn edge_count(&self) -> usize {
        (0..self.size())
            .map(|x| {
                let mut row = self.r1.successors(x).clone();
                row.union_with(self.r2.successors(x));
                row.count_ones(..)
            })
            .sum()
    }
}

/// A frame plus a valuation. Every declared variable has an entry, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<String, FixedBitSet>,
}

impl Model {
    pub fn new(frame: Frame) -> Self {
        Model { frame, valuation: BTreeMap::new() }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_mut(&mut self) -> &mut Frame {
        &mut self.frame
    }

    pub fn into_frame(self) -> Frame {
        self.frame
    }

    pub fn size(&self) -> usize {
        self.frame.size()
    }

    pub fn world_name(&self, w: WorldId) -> &str {
        self.frame.world_name(w)
    }

    pub fn index_of(&self, name: &str) -> Option<WorldId> {
        self.frame.index_of(name)
    }

    pub fn successors(&self, r: Rel, x: WorldId) -> &FixedBitSet {
        self.frame.successors(r, x)
    }

    /// Declare `var` with an empty extension if absent.
    pub fn declare(&mut self, var: &str) {
        let n = self.size();
        self.valuation
            .entry(var.to_string())
            .or_insert_with(|| FixedBitSet::with_capacity(n));
    }

    pub fn set_true(&mut self, var: &str, w: WorldId) {
        self.declare(var);
        self.valuation.get_mut(var).expect("declared").insert(w);
    }

    pub fn holds(&self, var: &str, w: WorldId) -> bool {
        self.valuation.get(var).is_some_and(|s| s.contains(w))
    }

    /// Extension of `var`; empty when undeclared.
    pub fn extension(&self, var: &str) -> FixedBitSet {
        self.valuation
            .get(var)
            .cloned()
            .unwrap_or_else(|| FixedBitSet::with_capacity(self.size()))
    }

    pub fn declared_vars(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    pub fn valuation(&self) -> &BTreeMap<String, FixedBitSet> {
        &self.valuation
    }
}

// ---------------------------------------------------------------------------
// file format

/// Parses a model file, returning the optional `point:` world as well.
pub fn parse_pointed_model(text: &str) -> Result<(Model, Option<WorldId>), ModelError> {
    let mut model: Option<Model> = None;
    let mut point = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |msg: &str| ModelError::Syntax { line, msg: msg.to_string() };
        let (key, rest) = content.split_once(':').ok_or_else(|| syntax("expected 'key: ...'"))?;
        let key = key.trim();
        if key == "worlds" {
            if model.is_some() {
                return Err(ModelError::DuplicateWorlds { line });
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            for (j, w) in names.iter().enumerate() {
                if names[..j].contains(w) {
                    return Err(ModelError::DuplicateWorld { line, name: w.clone() });
                }
                if w.contains("->") || w.contains('=') {
                    return Err(syntax("bad world name"));
                }
            }
            if names.is_empty() {
                return Err(ModelError::Empty);
            }
            model = Some(Model::new(Frame::new(names)?));
            continue;
        }
        let m = model.as_mut().ok_or(ModelError::MissingWorlds)?;
        let lookup = |m: &Model, name: &str| {
            m.index_of(name)
                .ok_or_else(|| ModelError::UnknownWorld { line, name: name.to_string() })
        };
        match key {
            "R1" | "R2" => {
                let r = if key == "R1" { Rel::One } else { Rel::Two };
                let spaced = rest.replace("->", " -> ");
                let toks: Vec<&str> = spaced.split_whitespace().collect();
                if !toks.len().is_multiple_of(3) {
                    return Err(syntax("expected pairs of the form x->y"));
                }
                for chunk in toks.chunks(3) {
                    if chunk[1] != "->" {
                        return Err(syntax("expected pairs of the form x->y"));
                    }
                    let x = lookup(m, chunk[0])?;
                    let y = lookup(m, chunk[2])?;
                    m.frame.add_edge(r, x, y);
                }
            }
            "v" => {
                let (var, ws) = rest.split_once('=').ok_or_else(|| syntax("expected 'v: p = w...'"))?;
                let var = var.trim();
                let ok = var.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                    && var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    && var != "true"
                    && var != "false";
                if !ok {
                    return Err(syntax("bad variable name"));
                }
                m.declare(var);
                for w in ws.split_whitespace() {
                    let x = lookup(m, w)?;
                    m.set_true(var, x);
                }
            }
            "point" => {
                let names: Vec<&str> = rest.split_whitespace().collect();
                if names.len() != 1 {
                    return Err(syntax("expected one world after 'point:'"));
                }
                point = Some(lookup(m, names[0])?);
            }
            _ => return Err(syntax(&format!("unknown key '{key}'"))),
        }
    }
    let model = model.ok_or(ModelError::MissingWorlds)?;
    Ok((model, point))
}

pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    parse_pointed_model(text).map(|(m, _)| m)
}

/// Normalised rendering: edges and extensions in world order, variables sorted.
pub fn print_model(m: &Model) -> String {
    let mut out = String::new();
    let f = m.frame();
    writeln!(out, "worlds: {}", f.worlds().join(" ")).unwrap();
    for r in Rel::BOTH {
        let pairs: Vec<String> = f
            .relation(r)
            .pairs()
            .map(|(x, y)| format!("{}->{}", f.world_name(x), f.world_name(y)))
            .collect();
        if pairs.is_empty() {
            writeln!(out, "R{}:", r.digit()).unwrap();
        } else {
            writeln!(out, "R{}: {}", r.digit(), pairs.join(" ")).unwrap();
        }
    }
    for (var, set) in &m.valuation {
        let ws: Vec<&str> = set.ones().map(|w| f.world_name(w)).collect();
        if ws.is_empty() {
            writeln!(out, "v: {var} =").unwrap();
        } else {
            writeln!(out, "v: {var} = {}", ws.join(" ")).unwrap();
        }
    }
    out
}

pub fn print_pointed_model(m: &Model, point: WorldId) -> String {
    let mut out = print_model(m);
    writeln!(out, "point: {}", m.world_name(point)).unwrap();
    out
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_model(self))
    }
}

/// Graphviz rendering. Shared pairs get the label `1,2`.
pub fn to_dot(m: &Model, varset: &[String]) -> String {
    let f = m.frame();
    let mut out = String::from("digraph model {\n");
    for w in 0..f.size() {
        let lits: Vec<String> = varset
            .iter()
            .map(|p| if m.holds(p, w) { p.clone() } else { format!("~{p}") })
            .collect();
        let name = f.world_name(w);
        writeln!(out, "  \"{name}\" [label=\"{name}:{}\"];", lits.join(",")).unwrap();
    }
    for x in 0..f.size() {
        for y in 0..f.size() {
            let label = match (f.r1.contains(x, y), f.r2.contains(x, y)) {
                (true, true) => "1,2",
                (true, false) => "1",
                (false, true) => "2",
                (false, false) => continue,
            };
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{label}\"];",
                f.world_name(x),
                f.world_name(y)
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Disjoint union with worlds renamed `a.<w>` and `b.<w>`.
/// World `w` of `b` becomes index `a.size() + w`.
pub fn disjoint_union(a: &Model, b: &Model) -> Model {
    let names = a
        .frame
        .worlds
        .iter()
        .map(|w| format!("a.{w}"))
        .chain(b.frame.worlds.iter().map(|w| format!("b.{w}")))
        .collect();
    let mut frame = Frame::new(names).expect("prefixed names are distinct");
    let off = a.size();
    for r in Rel::BOTH {
        for (x, y) in a.frame.relation(r).pairs() {
            frame.add_edge(r, x, y);
        }
        for (x, y) in b.frame.relation(r).pairs() {
            frame.add_edge(r, x + off, y + off);
        }
    }
    let mut m = Model::new(frame);
    for (src, shift) in [(a, 0), (b, off)] {
        for (var, set) in &src.valuation {
            m.declare(var);
            for w in set.ones() {
                m.set_true(var, w + shift);
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// frame properties

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyTag {
    Serial,
    Reflexive,
    ReflexiveAny,
    Transitive,
    Symmetric,
    Euclidean,
    QuasiSymmetric,
    Qt,
    Pt,
    Qe,
    Pe,
    All,
}

impl PropertyTag {
    pub const ALL_TAGS: [PropertyTag; 12] = [
        PropertyTag::Serial,
        PropertyTag::Reflexive,
        PropertyTag::ReflexiveAny,
        PropertyTag::Transitive,
        PropertyTag::Symmetric,
        PropertyTag::Euclidean,
        PropertyTag::QuasiSymmetric,
        PropertyTag::Qt,
        PropertyTag::Pt,
        PropertyTag::Qe,
        PropertyTag::Pe,
        PropertyTag::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyTag::Serial => "serial",
            PropertyTag::Reflexive => "reflexive",
            PropertyTag::ReflexiveAny => "reflexive_any",
            PropertyTag::Transitive => "transitive",
            PropertyTag::Symmetric => "symmetric",
            PropertyTag::Euclidean => "euclidean",
            PropertyTag::QuasiSymmetric => "quasi_symmetric",
            PropertyTag::Qt => "qt",
            PropertyTag::Pt => "pt",
            PropertyTag::Qe => "qe",
            PropertyTag::Pe => "pe",
            PropertyTag::All => "all",
        }
    }
}

impl fmt::Display for PropertyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PropertyTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.replace('-', "_");
        PropertyTag::ALL_TAGS
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown frame class '{s}'"))
    }
}

/// Violating tuple of worlds, with the relation indices involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub worlds: Vec<WorldId>,
    pub rels: Vec<Rel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyResult {
    fn from_witness(witness: Option<Witness>) -> Self {
        PropertyResult { holds: witness.is_none(), witness }
    }

    pub fn describe(&self, f: &Frame) -> String {
        match &self.witness {
            None => "holds".into(),
            Some(w) => {
                let names: Vec<&str> = w.worlds.iter().map(|&x| f.world_name(x)).collect();
                let rels: String = w.rels.iter().map(|r| r.digit()).collect();
                format!("fails (witness ({}) on R{rels})", names.join(","))
            }
        }
    }
}

fn first<I: Iterator<Item = Witness>>(mut it: I) -> Option<Witness> {
    it.next()
}

fn worlds2(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

fn worlds3(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

/// Checks `tag` on `f`; on failure returns the least violating tuple
/// (world tuples in lexicographic order, then relation indices).
pub fn check_property(f: &Frame, tag: PropertyTag) -> PropertyResult {
    let n = f.size();
    let r = |i: Rel, x: usize, y: usize| f.relation(i).contains(x, y);
    let pairs_ij = || Rel::BOTH.into_iter().flat_map(|i| Rel::BOTH.map(move |j| (i, j)));
    let w = match tag {
        PropertyTag::All => None,
        PropertyTag::Serial => first((0..n).flat_map(|x| {
            Rel::BOTH
                .into_iter()
                .filter(move |&i| !f.relation(i).has_successor(x))
                .map(move |i| Witness { worlds: vec![x], rels: vec![i] })
        })),
        PropertyTag::Reflexive => first((0..n).flat_map(|x| {
            Rel::BOTH
                .into_iter()
                .filter(move |&i| !r(i, x, x))
                .map(move |i| Witness { worlds: vec![x], rels: vec![i] })
        })),
        PropertyTag::ReflexiveAny => {
            let miss = |i: Rel| (0..n).find(|&x| !r(i, x, x));
            match (miss(Rel::One), miss(Rel::Two)) {
                (Some(a), Some(b)) => Some(Witness { worlds: vec![a, b], rels: vec![Rel::One, Rel::Two] }),
                _ => None,
            }
        }
        PropertyTag::Transitive => first(worlds3(n).flat_map(|(x, y, z)| {
            Rel::BOTH
                .into_iter()
                .filter(move |&i| r(i, x, y) && r(i, y, z) && !r(i, x, z))
                .map(move |i| Witness { worlds: vec![x, y, z], rels: vec![i] })
        })),
        PropertyTag::Symmetric => first(worlds2(n).flat_map(|(x, y)| {
            Rel::BOTH
                .into_iter()
                .filter(move |&i| r(i, x, y) && !r(i, y, x))
                .map(move |i| Witness { worlds: vec![x, y], rels: vec![i] })
        })),
        PropertyTag::Euclidean => first(worlds3(n).flat_map(|(x, y, z)| {
            Rel::BOTH
                .into_iter()
                .filter(move |&i| r(i, x, y) && r(i, x, z) && !r(i, y, z))
                .map(move |i| Witness { worlds: vec![x, y, z], rels: vec![i] })
        })),
        PropertyTag::QuasiSymmetric => first(worlds2(n).flat_map(|(s, t)| {
            pairs_ij()
                .filter(move |&(i, j)| {
                    f.relation(j).has_successor(t) && r(i, s, t) && !r(i, t, s)
                })
                .map(move |(i, j)| Witness { worlds: vec![s, t], rels: vec![i, j] })
        })),
        PropertyTag::Qt => first(worlds3(n).flat_map(|(x, y, z)| {
            pairs_ij()
                .filter(move |&(i, j)| r(i, x, y) && r(j, y, z) && !r(j, x, z))
                .map(move |(i, j)| Witness { worlds: vec![x, y, z], rels: vec![i, j] })
        })),
        PropertyTag::Pt => first(worlds3(n).flat_map(|(x, y, z)| {
            pairs_ij()
                .filter(move |&(i, j)| {
                    r(i, x, y) && r(j, y, z) && !(r(Rel::One, x, z) && r(Rel::Two, x, z))
                })
                .map(move |(i, j)| Witness { worlds: vec![x, y, z], rels: vec![i, j] })
        })),
        PropertyTag::Qe => first(worlds3(n).flat_map(|(x, y, z)| {
            pairs_ij()
                .filter(move |&(i, j)| r(i, x, y) && r(j, x, z) && !r(j, y, z))
                .map(move |(i, j)| Witness { worlds: vec![x, y, z], rels: vec![i, j] })
        })),
        PropertyTag::Pe => first(worlds3(n).flat_map(|(x, y, z)| {
            pairs_ij()
                .filter(move |&(i, j)| {
                    r(i, x, y) && r(j, x, z) && !(r(Rel::One, y, z) && r(Rel::Two, y, z))
                })
                .map(move |(i, j)| Witness { worlds: vec![x, y, z], rels: vec![i, j] })
        })),
    };
    PropertyResult::from_witness(w)
}

// ---------------------------------------------------------------------------
// enumeration over small frames encoded as bitmasks
//
// A relation on n <= 4 worlds is a u32 whose bit x*n+y encodes the pair (x,y).

/// Successor masks of one relation, indexed by world.
pub(crate) fn succ_masks(mask: u32, n: usize) -> [u64; 8] {
    let mut out = [0u64; 8];
    let row = (1u32 << n) - 1;
    for (x, slot) in out.iter_mut().enumerate().take(n) {
        *slot = u64::from((mask >> (x * n)) & row);
    }
    out
}

fn subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

fn single_ok(s: &[u64], n: usize, tag: PropertyTag) -> bool {
    let every = |pred: &dyn Fn(usize) -> bool| (0..n).all(pred);
    let elems = |m: u64| (0..n).filter(move |y| m >> y & 1 == 1);
    match tag {
        PropertyTag::Serial => every(&|x| s[x] != 0),
        PropertyTag::Reflexive => every(&|x| s[x] >> x & 1 == 1),
        PropertyTag::Transitive | PropertyTag::Qt | PropertyTag::Pt => {
            every(&|x| elems(s[x]).all(|y| subset(s[y], s[x])))
        }
        PropertyTag::Symmetric => every(&|x| elems(s[x]).all(|y| s[y] >> x & 1 == 1)),
        PropertyTag::Euclidean | PropertyTag::Qe | PropertyTag::Pe => {
            every(&|x| elems(s[x]).all(|y| subset(s[x], s[y])))
        }
        _ => true,
    }
}

fn joint_ok(a: &[u64], b: &[u64], n: usize, tag: PropertyTag) -> bool {
    let elems = |m: u64| (0..n).filter(move |y| m >> y & 1 == 1);
    let rels = [a, b];
    match tag {
        PropertyTag::ReflexiveAny => {
            single_ok(a, n, PropertyTag::Reflexive) || single_ok(b, n, PropertyTag::Reflexive)
        }
        PropertyTag::QuasiSymmetric => rels.iter().all(|ri| {
            (0..n).all(|s| elems(ri[s]).all(|t| (a[t] | b[t]) == 0 || ri[t] >> s & 1 == 1))
        }),
        PropertyTag::Qt => (0..n).all(|x| {
            elems(a[x] | b[x]).all(|y| subset(a[y], a[x]) && subset(b[y], b[x]))
        }),
        PropertyTag::Pt => (0..n).all(|x| elems(a[x] | b[x]).all(|y| subset(a[y] | b[y], a[x] & b[x]))),
        PropertyTag::Qe => (0..n).all(|x| {
            elems(a[x] | b[x]).all(|y| subset(a[x], a[y]) && subset(b[x], b[y]))
        }),
        PropertyTag::Pe => (0..n).all(|x| elems(a[x] | b[x]).all(|y| subset(a[x] | b[x], a[y] & b[y]))),
        _ => true,
    }
}

/// Relation masks on `n` worlds passing the per-relation part of `tag`, ascending.
pub(crate) fn candidate_relations(n: usize, tag: PropertyTag) -> Vec<u32> {
    let total = 1u64 << (n * n);
    (0..total)
        .map(|m| m as u32)
        .filter(|&m| single_ok(&succ_masks(m, n), n, tag))
        .collect()
}

pub(crate) fn frame_in_class(r1: u32, r2: u32, n: usize, tag: PropertyTag) -> bool {
    let (a, b) = (succ_masks(r1, n), succ_masks(r2, n));
    single_ok(&a, n, tag) && single_ok(&b, n, tag) && joint_ok(&a, &b, n, tag)
}

pub(crate) fn frame_from_masks(r1: u32, r2: u32, n: usize) -> Frame {
    let mut f = Frame::numbered(n).expect("n >= 1");
    for (rel, mask) in [(Rel::One, r1), (Rel::Two, r2)] {
        for x in 0..n {
            for y in 0..n {
                if mask >> (x * n + y) & 1 == 1 {
                    f.add_edge(rel, x, y);
                }
            }
        }
    }
    f
}

/// Frames on `w0..w{n-1}` satisfying `tag`, in lexicographic order of the
/// `(R1, R2)` bitmasks.
pub struct FrameEnumerator {
    n: usize,
    tag: PropertyTag,
    cands: Vec<u32>,
    i: usize,
    j: usize,
}

impl Iterator for FrameEnumerator {
    type Item = Frame;
    fn next(&mut self) -> Option<Frame> {
        while self.i < self.cands.len() {
            let (a, b) = (self.cands[self.i], self.cands[self.j]);
            self.j += 1;
            if self.j == self.cands.len() {
                self.j = 0;
                self.i += 1;
            }
            let (sa, sb) = (succ_masks(a, self.n), succ_masks(b, self.n));
            if joint_ok(&sa, &sb, self.n, self.tag) {
                return Some(frame_from_masks(a, b, self.n));
            }
        }
        None
    }
}

pub fn enumerate_frames(n: usize, tag: PropertyTag) -> Result<FrameEnumerator, ModelError> {
    enumerate_frames_capped(n, tag, DEFAULT_ENUM_CAP)
}

pub fn enumerate_frames_capped(
    n: usize,
    tag: PropertyTag,
    cap: usize,
) -> Result<FrameEnumerator, ModelError> {
    let cap = cap.min(DEFAULT_ENUM_CAP);
    if n == 0 || n > cap {
        return Err(ModelError::EnumerationCap { n, cap });
    }
    Ok(FrameEnumerator { n, tag, cands: candidate_relations(n, tag), i: 0, j: 0 })
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LEFT_M: &str = "worlds: s t u\nR1: s->t t->t u->u\nR2: s->u t->t u->u\nv: p = s t\n";
    const RIGHT_M: &str = "worlds: s t u\nR1: s->t t->t u->u\nR2: s->u t->t u->u\nv: p = s u\n";

    #[test]
    fn parse_and_print() {
        let text = "# comment\nworlds: s t u\nR2: s->u\nR1: t->t s -> t\nR1: u->u\nv: p = t # tail\nv: q =\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.size(), 3);
        assert!(m.frame().r1().contains(0, 1));
        assert!(m.holds("p", 1));
        assert_eq!(m.declared_vars().collect::<Vec<_>>(), vec!["p", "q"]);
        assert_eq!(
            print_model(&m),
            "worlds: s t u\nR1: s->t t->t u->u\nR2: s->u\nv: p = t\nv: q =\n"
        );
        assert_eq!(parse_model(&print_model(&m)).unwrap(), m);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_model("worlds: s\nR1: s->x\n"),
            Err(ModelError::UnknownWorld { line: 2, name: "x".into() })
        );
        assert_eq!(
            parse_model("worlds: s\nworlds: t\n"),
            Err(ModelError::DuplicateWorlds { line: 2 })
        );
        assert_eq!(parse_model("R1: s->s\n"), Err(ModelError::MissingWorlds));
        assert_eq!(parse_model("# nothing\n"), Err(ModelError::MissingWorlds));
        assert!(matches!(parse_model("worlds: s s\n"), Err(ModelError::DuplicateWorld { .. })));
        assert!(matches!(parse_model("worlds: s\nR1: s->\n"), Err(ModelError::Syntax { .. })));
        assert!(matches!(parse_model("worlds: s\nv: P = s\n"), Err(ModelError::Syntax { .. })));
        assert!(matches!(parse_model("worlds: s\nfoo: s\n"), Err(ModelError::Syntax { .. })));
    }

    #[test]
    fn point_line() {
        let (m, p) = parse_pointed_model("worlds: a b\npoint: b\n").unwrap();
        assert_eq!(p, Some(1));
        assert_eq!(print_pointed_model(&m, 1), "worlds: a b\nR1:\nR2:\npoint: b\n");
    }

    #[test]
    fn union_of_expressivity_pair() {
        let u = disjoint_union(&parse_model(LEFT_M).unwrap(), &parse_model(RIGHT_M).unwrap());
        assert_eq!(u.size(), 6);
        assert_eq!(u.frame().edge_count(), 8);
        assert_eq!(u.world_name(3), "b.s");
        assert!(u.holds("p", 3) && u.holds("p", 5) && !u.holds("p", 4));
        assert!(u.frame().r2().contains(3, 5));
    }

    #[test]
    fn dot_labels() {
        let m = parse_model(LEFT_M).unwrap();
        let d = to_dot(&m, &["p".to_string()]);
        assert!(d.starts_with("digraph"));
        assert!(d.contains("\"t\" -> \"t\" [label=\"1,2\"]"));
        assert!(d.contains("\"s\" -> \"t\" [label=\"1\"]"));
        assert!(d.contains("\"s\" -> \"u\" [label=\"2\"]"));
        assert!(d.contains("label=\"u:~p\""));
        assert_eq!(d.matches("->").count(), m.frame().edge_count());
    }

    #[test]
    fn frame_counts() {
        assert_eq!(enumerate_frames(1, PropertyTag::All).unwrap().count(), 4);
        assert_eq!(enumerate_frames(1, PropertyTag::Serial).unwrap().count(), 1);
        assert_eq!(enumerate_frames(2, PropertyTag::All).unwrap().count(), 256);
        assert!(enumerate_frames(5, PropertyTag::All).is_err());
        assert!(enumerate_frames(0, PropertyTag::All).is_err());
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let masks: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> = enumerate_frames(1, PropertyTag::All)
            .unwrap()
            .map(|f| (f.r1().pairs().collect(), f.r2().pairs().collect()))
            .collect();
        assert_eq!(
            masks,
            vec![
                (vec![], vec![]),
                (vec![], vec![(0, 0)]),
                (vec![(0, 0)], vec![]),
                (vec![(0, 0)], vec![(0, 0)])
            ]
        );
    }

    #[test]
    fn enumeration_agrees_with_property_checks() {
        for n in 1..=2 {
            let all: Vec<Frame> = enumerate_frames(n, PropertyTag::All).unwrap().collect();
            for tag in PropertyTag::ALL_TAGS {
                let expected: Vec<&Frame> =
                    all.iter().filter(|f| check_property(f, tag).holds).collect();
                let got: Vec<Frame> = enumerate_frames(n, tag).unwrap().collect();
                assert_eq!(got.iter().collect::<Vec<_>>(), expected, "{tag} at n={n}");
            }
        }
    }

    #[test]
    fn enumeration_agrees_at_three_worlds_for_mixed_classes() {
        // Spot-check the prefiltered classes where joint constraints matter.
        for tag in [PropertyTag::Qt, PropertyTag::Pe, PropertyTag::QuasiSymmetric] {
            let got = enumerate_frames(3, tag).unwrap().count();
            let expected = enumerate_frames(3, PropertyTag::All)
                .unwrap()
                .filter(|f| check_property(f, tag).holds)
                .count();
            assert_eq!(got, expected, "{tag}");
        }
    }

    #[test]
    fn witnesses_are_least() {
        let m = parse_model("worlds: a b c\nR1: a->b b->c\nR2: a->a b->b c->c\n").unwrap();
        let t = check_property(m.frame(), PropertyTag::Transitive);
        assert_eq!(t.witness, Some(Witness { worlds: vec![0, 1, 2], rels: vec![Rel::One] }));
        let r = check_property(m.frame(), PropertyTag::Reflexive);
        assert_eq!(r.witness, Some(Witness { worlds: vec![0], rels: vec![Rel::One] }));
        assert!(check_property(m.frame(), PropertyTag::ReflexiveAny).holds);
        let s = check_property(m.frame(), PropertyTag::Serial);
        assert_eq!(s.witness, Some(Witness { worlds: vec![2], rels: vec![Rel::One] }));
        assert_eq!(s.describe(m.frame()), "fails (witness (c) on R1)");
    }

    #[test]
    fn chain_and_loop_properties() {
        let chain = parse_model("worlds: s t u\nR1: s->t t->u\nR2: s->t t->u\n").unwrap();
        let lp = parse_model("worlds: x\nR1: x->x\nR2: x->x\n").unwrap();
        for tag in [
            PropertyTag::Serial,
            PropertyTag::Reflexive,
            PropertyTag::Transitive,
            PropertyTag::Symmetric,
            PropertyTag::Euclidean,
        ] {
            assert!(check_property(lp.frame(), tag).holds);
            assert!(!check_property(chain.frame(), tag).holds, "{tag}");
        }
    }

    proptest! {
        #[test]
        fn model_round_trip(m in strategies::model(5, &["p", "q"])) {
            prop_assert_eq!(parse_model(&print_model(&m)).unwrap(), m);
        }

        #[test]
        fn class_inclusions(m in strategies::model(4, &[])) {
            let f = m.frame();
            let holds = |t| check_property(f, t).holds;
            if holds(PropertyTag::Pt) { prop_assert!(holds(PropertyTag::Qt)); }
            if holds(PropertyTag::Pe) { prop_assert!(holds(PropertyTag::Qe)); }
            if holds(PropertyTag::Qt) { prop_assert!(holds(PropertyTag::Transitive)); }
            if holds(PropertyTag::Qe) { prop_assert!(holds(PropertyTag::Euclidean)); }
            if holds(PropertyTag::Reflexive) { prop_assert!(holds(PropertyTag::ReflexiveAny)); }
            if holds(PropertyTag::Symmetric) { prop_assert!(holds(PropertyTag::QuasiSymmetric)); }
        }
    }
}
