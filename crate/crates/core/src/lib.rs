//! Coefficient arithmetic for k-tuple ℓ-regular partitions.
//!
//! The generating function of k-tuples of ℓ-regular partitions is the
//! f-quotient `f_ℓ^k / f_1^k`, where `f_d = prod_{i >= 1} (1 - q^(d i))`.
//! This crate expands such quotients exactly or modulo `M`, and checks
//! product identities, Ramanujan-type congruence families, Hecke and Newman
//! recurrences, eta-quotient cusp orders and zero-residue densities against
//! those expansions.
//!
//! * [`series`] truncated power series over `Z` and `Z/MZ`
//! * [`etaq`] f-quotient and theta expansions, identity catalog
//! * [`oracles`] brute-force partition counts used as ground truth
//! * [`numtheory`] quadratic symbols, Ramanujan τ, Hecke and Newman operators
//! * [`modform`] eta-quotient weight, character, cusp orders, B-series
//! * [`congruence`] claim catalog, verification engine, density and discovery
//! * [`cli`] the `regulus` command line

pub mod cli;
pub mod congruence;
pub mod error;
pub mod etaq;
pub mod modform;
pub mod numtheory;
pub mod oracles;
pub mod report;
pub mod series;

pub use error::{Error, Result};
pub use etaq::{expand_f, expand_fquotient, ExpansionCache, FQuotient};
pub use report::{Status, Tag, VerificationReport};
pub use series::{Ring, TruncatedSeries};
