//! Saturated k-Sperner systems in the Boolean lattice.
//!
//! Families are stored in *atom representation*: each member is a subset of
//! `m` singleton atoms plus a flag for the homogeneous block `H`. On top of
//! that representation the crate provides
//!
//! * order primitives and the canonical decomposition into antichain layers ([`family`]),
//! * an atom-level saturation verifier and a brute-force oracle on concrete
//!   ground sets ([`saturation`]),
//! * built-in constructions, composition and bootstrapping ([`constructions`]),
//!   and the antichain reduction ([`reduction`]),
//! * numeric upper and lower bounds ([`bounds`], [`erf`]),
//! * bounded exhaustive search with isomorphism rejection ([`search`]).

pub mod bounds;
pub mod constructions;
pub mod erf;
pub mod error;
pub mod family;
pub mod format;
pub mod reduction;
pub mod saturation;
pub mod search;

pub use constructions::{
    bootstrapped, compose, seven56, three_sperner, trivial_construction, CompositionPlan,
};
pub use error::{
    BoundsError, ConstructionError, FamilyError, ParseError, SaturationError, SearchError,
};
pub use family::{is_layered, is_small_layered, Family, LayerDecomposition, Member};
pub use format::{parse_concrete, parse_family, serialize_concrete, serialize_family};
pub use reduction::{reduce_antichain, ReductionTrace};
pub use saturation::{
    brute_force_saturated, expected_hits, find_atoms, instantiate, is_saturated_antichain,
    size_bounds_check, verify_saturated_k_sperner, ConcreteFamily, VerificationReport,
};
pub use search::{canonical_form, search_min, Outcome, SearchBounds, SearchResult};
