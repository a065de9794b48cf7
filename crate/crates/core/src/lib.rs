//! Exact enumeration of Cayley graphs over `T_8p`, the nonabelian group of
//! order `8p` presented as `<a, b | a^2p = b^8 = e, a^p = b^4, b^-1 a b = a^-1>`.
//!
//! Isomorphism classes of Cayley graphs over `T_8p` are the orbits of
//! `Aut(T_8p)` on inverse-closed connection sets, so every count here is an
//! orbit count. Each closed form is paired with a brute-force
//! route so the two can be compared; see [`report::verify`].

pub mod arith;
pub mod aut;
pub mod domain;
pub mod error;
pub mod group;
pub mod oracle;
pub mod polya;
pub mod report;

pub use arith::{OddPrime, UnitResidue};
pub use aut::{enumerate_aut, Automorphism, Family};
pub use domain::{closed_form_cycle_type, ActionTable, ClassKind, CycleType, Domain, PairClass, Permutation};
pub use error::{Error, Result};
pub use group::{iso_f, GElement, GroupElement};
pub use polya::{
    cycle_index_bruteforce, cycle_index_closed_form, evaluate, n_circulant, n_connected, n_total, CycleIndexPoly,
    Monomial,
};
pub use report::{verify, Check, CountReport, Discrepancy, Level, Status, VerificationReport};
