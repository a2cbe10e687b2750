//! Symbolic model of the Reid hierarchy of non-Archimedean Banach spaces.
//!
//! Terms over the field `k`, bounded products (`pi`, `l_inf`) and completed
//! sums (`sigma`, `c0`) are classified into finite-dimensional, pure and
//! mixed classes with ordinal ranks, rewritten to canonical forms, and
//! compared with a three-valued isomorphism verdict.
//!
//! ```
//! use reid_hier::{classify, parse, Descriptor, KappaBound, Kind, Ordinal};
//!
//! let t = parse("c0(w, l_inf(w, k))").unwrap();
//! let d = classify(&t, &KappaBound::AllOrdinals).unwrap();
//! assert_eq!(d, Descriptor::Pure(Kind::Sigma, Ordinal::finite(2)));
//! ```

pub mod canon;
pub mod classify;
pub mod cli;
mod error;
pub mod oracle;
pub mod ordinal;
pub mod parser;
pub mod term;

pub use canon::{canonicalize, decide_iso, CanonicalTerm, IsoDecision, IsoVerdict, Trace};
pub use classify::{classify, descriptor, member_of, rank_profile, rank_reid, ClassQuery, Descriptor, RankProfile};
pub use error::Error;
pub use oracle::{cross_check, enumerate_universe, ClosureReport, UniverseSpec};
pub use ordinal::{Cardinal, KappaBound, Ordinal};
pub use parser::{parse, print, ParseError, SourceSpan};
pub use term::{Group, Kind, Member, Ramp, Term};

/// Version tag carried by every JSON document the CLI emits.
pub const SCHEMA: &str = "reid-hier/1";
