//! Model checking, expressivity analysis, frame constructions, bounded
//! validity search and proof checking for bimodal noncontingency logics.
//!
//! Two operators are central. `[.]phi` (generalized noncontingency) holds at
//! `s` when every R1-successor and every R2-successor of `s` agree on `phi`.
//! `[+]phi` (pseudo noncontingency) holds when all R1-successors satisfy `phi`
//! or all R2-successors refute it.

pub mod equivalence;
pub mod kripke;
pub mod morphisms;
pub mod proofs;
pub mod semantics;
pub mod syntax;
pub mod transforms;
pub mod validity;

pub use kripke::{Frame, Model, PropertyTag, Relation, WorldId};
pub use semantics::PointedModel;
pub use syntax::{parse, Formula, LanguageTag, Rel};
