//! Orbit and anti-orbit families with their machine checks, monotonicity
//! classification, entropy estimates, surjective-core membership and an
//! exploratory family search.
//!
//! Nothing here reports an orbit number as infinite: a passing check yields
//! "at least c families, certified at depth d".

mod entropy;
mod families;
mod generic;
mod monotone;
mod search;
mod surjective;

pub use entropy::{
    ent_cset_estimate, ent_cset_estimate_mode, ent_set_estimate, Direction, EntropyEstimate,
    EntropyMode,
};
pub use families::{
    family_term, family_terms, family_terms_with, verify_antiorbit, verify_disjoint,
    verify_disjoint_with, verify_orbit, DepthCaps, FamilyScheme, FamilySpec,
};
pub use generic::{generic_family_terms, verify_generic, AffineMap, GenericFamilySpec};
pub use monotone::{
    classify_monotonicity, monotone_a_zero_check, monotone_o_zero_check, strict_o_positive_check,
    Monotonicity, MonotonicityReport,
};
pub use search::{search_families, Candidate, CandidateKind, SearchBudget, SearchResult};
pub use surjective::{surjective_core_membership, CoreMembership};
