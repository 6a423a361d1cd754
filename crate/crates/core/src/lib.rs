//! Computational workbench for monogenic left-distributive algebras.
//!
//! * [`laver`]: the finite Laver tables `A_n`/`P_n` and law checks.
//! * [`term`]: words over `1` (and `0`) with `*` and `o`, single
//!   left-distributive rewrites, and replayable witness derivations.
//! * [`word`]: the left-subterm comparison of free-algebra words and the
//!   translation between composition forms and plain words.
//! * [`limit`]: level-wise evaluation, signatures and freeness probes.
//! * [`embed`]: candidate embedding algebras and their two-sorted extension.

pub mod embed;
pub mod fuel;
pub mod laver;
pub mod limit;
pub mod term;
pub mod word;
