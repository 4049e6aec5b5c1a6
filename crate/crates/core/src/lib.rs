//! Construction and verification of quasi-twisted (QT) codes obtained by
//! splitting long constacyclic codes into blocks.
//!
//! The layers, bottom to top:
//!
//! - [`galois`]: prime-field arithmetic for GF(2), GF(3), GF(5), GF(7);
//! - [`polyring`]: dense univariate polynomials, factorization of
//!   `x^N - a`, and divisor enumeration;
//! - [`lincode`]: generator matrices and certified minimum-distance
//!   engines (Gray-code exhaustive walk and Brouwer–Zimmermann);
//! - [`qtcore`]: constacyclic shifts, twistulant blocks, the
//!   split/join construction, and the one-generator route with its
//!   designed distance bound;
//! - [`search`]: the seeded, resumable candidate search;
//! - [`workbench`]: tables, fixtures, persisted records, and the CLI.

pub mod galois;
pub mod lincode;
pub mod polyring;
pub mod qtcore;
pub mod search;
pub mod workbench;
