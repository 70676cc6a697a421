//! Finite-level computations for pairs of arithmetic groups with isomorphic
//! profinite completions.
//!
//! The crate builds congruence subgroups of `SL_n` over `Z` and `Z[sqrt d]`
//! from local conditions, reduces them to finite quotients, checks explicit
//! isomorphisms between those quotients, and recomputes the finite
//! invariants that keep the groups themselves apart.

pub mod chevalley;
pub mod congruence;
pub mod exec;
pub mod matgroup;
pub mod methods;
pub mod oracle;
pub mod ring_arith;
pub mod twists;

pub use congruence::{quotient_of, AmbientElement, FiniteQuotientGroup, Level, LocalCondition, SubgroupSpec};
pub use exec::Execution;
pub use matgroup::SLMat;
pub use methods::{method_a_pair, method_b_pair, method_c_pair, obstruction_report, s16_pair, Fault, WitnessBundle};
pub use ring_arith::PrimePlace;
pub use twists::{verify_iso, verify_iso_with, IsoReport, QuotientIso, TwistKind, Verdict};
