//! Exact arithmetic for truncated p-typical Witt vectors over commutative
//! rings (odd p), together with:
//!
//! * the ghost-coordinate model and the universal addition/Frobenius
//!   polynomials ([`univ`], [`witt`]);
//! * a shifted-sequence model of the additive group of Witt vectors, with a
//!   membership decision procedure and projection maps ([`xmodel`]);
//! * a free-group presentation of that model by symbols `V[n]{a}` with an
//!   exact, certificate-producing decision procedure for the relation
//!   subgroup generated by additivity of `a ↦ V[1]{a^p} − p·V[0]{a}` and the
//!   odd-sign relations `V[n]{a} + V[n]{−a}` ([`relations`]);
//! * exact p-power Vandermonde independence tests and the integer point
//!   search they rely on ([`vandermonde`]);
//! * seeded randomized verification suites for all of the above ([`suites`]).
//!
//! Everything is computed exactly: arbitrary-precision integers, residues,
//! and sparse integer polynomials. No operation ever rounds.

pub mod relations;
pub mod ring;
pub mod suites;
pub mod univ;
pub mod vandermonde;
pub mod witt;
pub mod xmodel;
