//! Frame validity and bounded countermodel search.
//!
//! Formulas are compiled to a flat program and evaluated on 64 valuations at
//! once: each `u64` lane is one valuation. A valuation over variables
//! `v_0..v_k` on worlds `0..n` is the integer whose bit `i*n + w` says whether
//! `v_i` holds at `w`, and valuations are visited in increasing order.
//!
//! Frames are visited in lexicographic order of their `(R1, R2)` bitmasks,
//! then valuations, then worlds. "Valid within budget" means every frame of
//! every size up to `max_worlds` was checked; it is not a proof of validity.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::kripke::{
    candidate_relations, frame_from_masks, succ_masks, Frame, Model, PropertyTag, WorldId,
    DEFAULT_ENUM_CAP,
};
use crate::semantics::PointedModel;
use crate::syntax::{vars, Formula, Rel};

/// Largest `|vars| * |worlds|` accepted by `valid_on_frame`.
pub const VALUATION_BITS_CAP: usize = 24;

/// Largest frame `valid_on_frame` handles.
pub const FRAME_SIZE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("{vars} variables on {worlds} worlds exceeds the valuation budget")]
    ValuationBudget { vars: usize, worlds: usize },
    #[error("formula has {got} variables, budget allows {max}")]
    TooManyVars { got: usize, max: usize },
    #[error("frame of {0} worlds exceeds the supported size")]
    FrameTooLarge(usize),
    #[error("max_worlds {0} outside 1..={DEFAULT_ENUM_CAP}")]
    BadWorldBudget(usize),
    #[error("bad budget override '{0}'")]
    BadOverride(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_worlds: usize,
    pub max_vars: usize,
    /// Candidate frames examined per size.
    pub frame_cap: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_worlds: 3, max_vars: 2, frame_cap: 1 << 18 }
    }
}

impl SearchBudget {
    /// Applies `key=value` overrides separated by commas, e.g.
    /// `max_worlds=4,max_vars=3,frame_cap=1000000`.
    pub fn with_overrides(mut self, overrides: &str) -> Result<Self, ValidityError> {
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || ValidityError::BadOverride(item.to_string());
            let (k, v) = item.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "max_worlds" => self.max_worlds = v as usize,
                "max_vars" => self.max_vars = v as usize,
                "frame_cap" => self.frame_cap = v,
                _ => return Err(bad()),
            }
        }
        if self.max_worlds == 0 || self.max_vars == 0 || self.frame_cap == 0 {
            return Err(ValidityError::BadOverride(overrides.to_string()));
        }
        Ok(self)
    }

    /// Defaults, overridden by the `CK_BUDGET` environment variable if set.
    pub fn from_env() -> Result<Self, ValidityError> {
        match std::env::var("CK_BUDGET") {
            Ok(overrides) => SearchBudget::default().with_overrides(&overrides),
            Err(_) => Ok(SearchBudget::default()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Countermodel(PointedModel),
    /// Every frame of the class up to `max_worlds` was checked.
    ValidWithinBudget { max_worlds: usize, frames_checked: u64 },
    /// The frame cap was hit before the class was exhausted.
    Inconclusive { worlds: usize, frames_checked: u64 },
}

impl SearchOutcome {
    pub fn countermodel(&self) -> Option<&PointedModel> {
        match self {
            SearchOutcome::Countermodel(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FrameValidity {
    pub valid: bool,
    /// Least failing valuation with the least failing world under it.
    pub counter: Option<PointedModel>,
}

// ---------------------------------------------------------------------------
// compiled evaluation

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    Top,
    Bot,
    Neg(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Iff(usize, usize),
    BoxDot(usize),
    BoxPlus(usize),
    Nec(Rel, usize),
    Poss(Rel, usize),
    Delta(Rel, usize),
}

struct Program {
    ops: Vec<Op>,
    vars: Vec<String>,
}

impl Program {
    fn compile(f: &Formula) -> Program {
        let vars: Vec<String> = vars(f).into_iter().collect();
        let mut p = Program { ops: Vec::new(), vars };
        let mut seen = HashMap::new();
        p.emit(f, &mut seen);
        p
    }

    fn emit(&mut self, f: &Formula, seen: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = seen.get(f) {
            return i;
        }
        let mut e = |g: &Formula| self.emit(g, seen);
        let op = match f {
            Formula::Atom(p) => Op::Var(self.vars.iter().position(|v| v == p).expect("collected")),
            Formula::Top => Op::Top,
            Formula::Bot => Op::Bot,
            Formula::Neg(a) => Op::Neg(e(a)),
            Formula::And(a, b) => Op::And(e(a), e(b)),
            Formula::Or(a, b) => Op::Or(e(a), e(b)),
            Formula::Imp(a, b) => Op::Imp(e(a), e(b)),
            Formula::Iff(a, b) => Op::Iff(e(a), e(b)),
            Formula::BoxDot(a) => Op::BoxDot(e(a)),
            Formula::BoxPlus(a) => Op::BoxPlus(e(a)),
            Formula::Nec(r, a) => Op::Nec(*r, e(a)),
            Formula::Poss(r, a) => Op::Poss(*r, e(a)),
            Formula::Delta(r, a) => Op::Delta(*r, e(a)),
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        seen.insert(f.clone(), i);
        i
    }

    /// Evaluates the block of valuations `64*block ..` on a frame given by
    /// successor masks, leaving `n` lanes per op in `buf`. Returns the root row.
    fn eval<'b>(&self, n: usize, s1: &[u64], s2: &[u64], block: u64, buf: &'b mut Vec<u64>) -> &'b [u64] {
        const PAT: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        buf.clear();
        buf.resize(self.ops.len() * n, 0);
        for (k, op) in self.ops.iter().enumerate() {
            let (done, rest) = buf.split_at_mut(k * n);
            let row = &mut rest[..n];
            let at = |i: usize, w: usize| done[i * n + w];
            // conjunction of lanes over successors, and over their complements
            let fold = |succ: u64, i: usize| {
                let (mut all, mut none) = (!0u64, !0u64);
                for t in (0..n).filter(|t| succ >> t & 1 == 1) {
                    all &= at(i, t);
                    none &= !at(i, t);
                }
                (all, none)
            };
            let rel = |r: Rel| if r == Rel::One { s1 } else { s2 };
            for (w, slot) in row.iter_mut().enumerate() {
                *slot = match *op {
                    Op::Var(v) => {
                        let bit = v * n + w;
                        if bit < 6 {
                            PAT[bit]
                        } else if block >> (bit - 6) & 1 == 1 {
                            !0
                        } else {
                            0
                        }
                    }
                    Op::Top => !0,
                    Op::Bot => 0,
                    Op::Neg(a) => !at(a, w),
                    Op::And(a, b) => at(a, w) & at(b, w),
                    Op::Or(a, b) => at(a, w) | at(b, w),
                    Op::Imp(a, b) => !at(a, w) | at(b, w),
                    Op::Iff(a, b) => !(at(a, w) ^ at(b, w)),
                    Op::BoxDot(a) => {
                        let (all1, none1) = fold(s1[w], a);
                        let (all2, none2) = fold(s2[w], a);
                        (all1 | none2) & (none1 | all2)
                    }
                    Op::BoxPlus(a) => {
                        let (all1, _) = fold(s1[w], a);
                        let (_, none2) = fold(s2[w], a);
                        all1 | none2
                    }
                    Op::Nec(r, a) => fold(rel(r)[w], a).0,
                    Op::Poss(r, a) => !fold(rel(r)[w], a).1,
                    Op::Delta(r, a) => {
                        let (all, none) = fold(rel(r)[w], a);
                        all | none
                    }
                };
            }
        }
        &buf[(self.ops.len() - 1) * n..]
    }

    /// Least failing `(valuation, world)` on the frame, if any.
    fn first_failure(&self, n: usize, s1: &[u64], s2: &[u64], buf: &mut Vec<u64>) -> Option<(u64, usize)> {
        let bits = self.vars.len() * n;
        let total: u64 = 1 << bits;
        let blocks = total.div_ceil(64);
        let valid = if total >= 64 { !0 } else { (1u64 << total) - 1 };
        for block in 0..blocks {
            let root = self.eval(n, s1, s2, block, buf);
            let fail = root.iter().fold(0u64, |acc, r| acc | !r) & valid;
            if fail != 0 {
                let lane = fail.trailing_zeros();
                let w = (0..n).find(|&w| !root[w] >> lane & 1 == 1).expect("some world fails");
                return Some((block * 64 + u64::from(lane), w));
            }
        }
        None
    }

    fn model(&self, frame: Frame, valuation: u64) -> Model {
        let n = frame.size();
        let mut m = Model::new(frame);
        for (i, v) in self.vars.iter().enumerate() {
            m.declare(v);
            for w in 0..n {
                if valuation >> (i * n + w) & 1 == 1 {
                    m.set_true(v, w);
                }
            }
        }
        m
    }
}

fn frame_masks(f: &Frame) -> (Vec<u64>, Vec<u64>) {
    let row = |r: Rel, x: usize| f.successors(r, x).ones().fold(0u64, |acc, y| acc | 1 << y);
    (
        (0..f.size()).map(|x| row(Rel::One, x)).collect(),
        (0..f.size()).map(|x| row(Rel::Two, x)).collect(),
    )
}

/// Checks `phi` under every valuation of its variables on `frame`.
pub fn valid_on_frame(frame: &Frame, phi: &Formula) -> Result<FrameValidity, ValidityError> {
    let n = frame.size();
    if n > FRAME_SIZE_CAP {
        return Err(ValidityError::FrameTooLarge(n));
    }
    let prog = Program::compile(phi);
    if prog.vars.len() * n > VALUATION_BITS_CAP {
        return Err(ValidityError::ValuationBudget { vars: prog.vars.len(), worlds: n });
    }
    let (s1, s2) = frame_masks(frame);
    let mut buf = Vec::new();
    Ok(match prog.first_failure(n, &s1, &s2, &mut buf) {
        None => FrameValidity { valid: true, counter: None },
        Some((val, w)) => FrameValidity {
            valid: false,
            counter: Some(PointedModel::new(prog.model(frame.clone(), val), w)),
        },
    })
}

/// Outcome of scanning all candidate frames of one size.
enum SizeScan {
    Found(u32, u32, u64, usize),
    Exhausted(u64),
    Truncated(u64),
}

fn scan_size(prog: &Program, n: usize, tag: PropertyTag, cap: u64) -> SizeScan {
    let cands = candidate_relations(n, tag);
    let l = cands.len() as u64;
    let limit = (l * l).min(cap);
    let rows = limit.div_ceil(l);
    let hit = (0..rows)
        .into_par_iter()
        .map_init(Vec::new, |buf, i| {
            let a = cands[i as usize];
            let s1 = succ_masks(a, n);
            let mut in_class = 0u64;
            for j in 0..l.min(limit - i * l) {
                let b = cands[j as usize];
                let s2 = succ_masks(b, n);
                if !crate::kripke::frame_in_class(a, b, n, tag) {
                    continue;
                }
                in_class += 1;
                if let Some((val, w)) = prog.first_failure(n, &s1[..n], &s2[..n], buf) {
                    return Err((a, b, val, w));
                }
            }
            Ok(in_class)
        })
        .try_reduce(|| 0, |x, y| Ok(x + y));
    match hit {
        Err((a, b, val, w)) => SizeScan::Found(a, b, val, w),
        Ok(count) if limit < l * l => SizeScan::Truncated(count),
        Ok(count) => SizeScan::Exhausted(count),
    }
}

/// First countermodel to `phi` over frames of class `tag`, by size, then
/// frame, valuation and world order.
pub fn countermodel_search(
    phi: &Formula,
    tag: PropertyTag,
    budget: SearchBudget,
) -> Result<SearchOutcome, ValidityError> {
    if budget.max_worlds == 0 || budget.max_worlds > DEFAULT_ENUM_CAP {
        return Err(ValidityError::BadWorldBudget(budget.max_worlds));
    }
    let prog = Program::compile(phi);
    if prog.vars.len() > budget.max_vars {
        return Err(ValidityError::TooManyVars { got: prog.vars.len(), max: budget.max_vars });
    }
    let mut checked = 0;
    for n in 1..=budget.max_worlds {
        match scan_size(&prog, n, tag, budget.frame_cap) {
            SizeScan::Found(a, b, val, w) => {
                let m = prog.model(frame_from_masks(a, b, n), val);
                return Ok(SearchOutcome::Countermodel(PointedModel::new(m, w)));
            }
            SizeScan::Exhausted(c) => checked += c,
            SizeScan::Truncated(c) => {
                return Ok(SearchOutcome::Inconclusive { worlds: n, frames_checked: checked + c })
            }
        }
    }
    Ok(SearchOutcome::ValidWithinBudget { max_worlds: budget.max_worlds, frames_checked: checked })
}

/// A pointed model of class `tag` satisfying every premise and refuting `phi`.
pub fn consequence_check(
    premises: &[Formula],
    phi: &Formula,
    tag: PropertyTag,
    budget: SearchBudget,
) -> Result<SearchOutcome, ValidityError> {
    let goal = if premises.is_empty() {
        phi.clone()
    } else {
        Formula::imp(Formula::conj(premises.iter().cloned()), phi.clone())
    };
    countermodel_search(&goal, tag, budget)
}

/// Convenience for callers that only care about the found world.
pub fn countermodel_point(outcome: &SearchOutcome) -> Option<(&Model, WorldId)> {
    outcome.countermodel().map(|p| (&p.model, p.point))
}
