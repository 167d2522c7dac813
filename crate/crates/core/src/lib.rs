//! Count-based pruning of lexical type assignments for coordinated
//! sentences in categorial grammars.
//!
//! A polymorphic lexicon assigns many candidate type sequences to a
//! sentence; parsing each one is wasteful. For sentences without
//! coordination, occurrence counting already rules most candidates out:
//! a sequence can only reduce to a basic goal if every basic type
//! balances. A coordinator breaks that arithmetic, because the coordinated
//! material is spelled out twice.
//!
//! This crate restores a usable invariant for strings with a single
//! coordinator. Each side of the coordinator is saturated independently:
//! arguments are matched to heads within the conjunct under linear-order
//! and direction constraints, and the leftovers per basic type are kept in
//! a register of quadruples `<sathead, satarg, freehead, freearg>`. Four
//! inequalities over a pair of registers ([`conjoin::conjoinable`]) are
//! necessary for the coordinated string to be derivable, so pairs that
//! violate them are discarded before parsing.
//!
//! A brute-force AB derivability oracle ([`oracle`]) provides ground truth
//! for testing, and [`report::run_sentence`] wires lexicon, enumeration,
//! filter and oracle into the pipeline behind the `coordcount` CLI.
//!
//! ```
//! use coordcount::{conjoin, occurrence::{saturate, Side}, types::TypeSequence};
//!
//! let left: TypeSequence = "x/y y".parse().unwrap();
//! let right: TypeSequence = "y z\\x".parse().unwrap();
//! let goal = "z".parse().unwrap();
//! let (reg_l, _) = saturate(&left, Side::Left);
//! let (reg_r, _) = saturate(&right, Side::Right);
//! assert!(conjoin::conjoinable(&reg_l, &reg_r, &goal).conjoinable);
//! ```

pub mod conjoin;
pub mod lexicon;
pub mod occurrence;
pub mod oracle;
pub mod report;
pub mod types;

pub use conjoin::{conjoinable, filter_product, FilterStats, PairVerdict};
pub use lexicon::{split_coordination, Assignment, CoordSplit, Lexicon};
pub use occurrence::{saturate, Register, Side, SideVerdict};
pub use oracle::{ab_derive, coord_derive, CoordWitness};
pub use report::{run_sentence, RunReport};
pub use types::{BasicType, CatType, Slash, TypeSequence};
