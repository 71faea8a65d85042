//! Magic squares over groups: decision procedures, constructions, search,
//! and verification.
//!
//! An n x n square of distinct group elements is magic when its n rows, n
//! columns, and two diagonals all have the same left-to-right product. The
//! crate provides:
//!
//! - group carriers: finitely generated abelian groups in normal form,
//!   finite groups by Cayley table, and semidirect products C_m : C_k
//!   ([`group`]);
//! - square verification, normalization, and the three-element
//!   parametrization of abelian 3x3 magic squares ([`square`]);
//! - explicit witness squares and witness routing by subgroup embedding
//!   ([`constructions`]);
//! - the full characterization of 3-magic finitely generated abelian
//!   groups plus order-only sufficiency rules ([`oracle`]);
//! - an O(|G|^2) abelian fast search, a general backtracking engine, and a
//!   sweep harness that cross-validates oracle against search ([`search`]);
//! - the group-description DSL used by the CLI ([`parser`]) and the wire
//!   formats ([`format`]).

pub mod catalog;
pub mod constructions;
pub mod error;
pub mod format;
pub mod group;
pub mod oracle;
pub mod parser;
pub mod search;
pub mod square;

pub use error::{Error, Result};
pub use group::{
    build_semidirect, build_table_group, AbelianElement, Element, Embedding, FGAbelianSpec,
    Group, Order, PrimaryDecomposition, SemidirectGroup, SemidirectSpec, TableGroup,
};
pub use oracle::{
    decide_3magic_abelian, decide_group, decide_n_magic_bound, decide_table_group,
    nonabelian_sufficient, Rule, Status, Verdict,
};
pub use search::{
    count_squares, search_abelian_3magic, search_general, sweep_crosscheck, OutcomeKind,
    SearchOptions, SearchOutcome, DEFAULT_BUDGET,
};
pub use square::{
    map_square, normalize, parametrized_square, recover_parameters, verify, Parametrization,
    Square, VerificationReport,
};
