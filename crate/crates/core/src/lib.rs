//! Finite-structure engine for non-commutative n-ary Γ-semirings and their
//! positional module categories.
//!
//! Every structure here is a finite carrier of dense element indices with
//! explicit operation tables. All verdicts are produced by exhaustive
//! enumeration, and quotients are computed by congruence closure.

pub mod catalog;
pub mod error;
pub mod exact;
pub mod free;
pub mod hom;
pub mod ideal;
pub mod module;
pub mod monoid;
pub mod ops;
pub mod report;
pub mod search;
pub mod semiring;
pub mod tensor;
pub mod tuple;

pub use error::{Error, Result};
pub use exact::{Conflation, QuillenReport};
pub use free::FreeModuleBounded;
pub use hom::HomModule;
pub use ideal::GammaIdeal;
pub use module::{Module, ModuleMorphism, SlotAction};
pub use monoid::{CongruenceRelation, FiniteCommMonoid, TermUniverse};
pub use report::{AxiomReport, Law, Verdict, Witness};
pub use semiring::{GammaSemiring, Limits, ScalarBase, SemiringHom};
