//! Exact-arithmetic verification toolkit for the generalized Fermat equation
//! a² + 3b⁶ = cⁿ.
//!
//! The modules mirror the computable steps of the modular approach:
//!
//! - [`kfield`]: arithmetic in Q(√−3) and its residue fields
//! - [`frey`]: the Frey curve E_{a,b}, its invariants and local data
//! - [`traces`]: point counting and Frobenius traces of reductions
//! - [`newformdb`]: level-972 newform eigenvalue data (fetch, cache, norms)
//! - [`sieve`]: the congruence-criterion sieve over residue pairs
//! - [`descent`]: identities, residue eliminations and point searches for n = 3, 4, 5, 7
//! - [`oracle`]: brute-force search for primitive solutions
//! - [`cli`]: the `fermat3` command-line front end

pub mod arith;
pub mod cli;
pub mod descent;
pub mod kfield;
pub mod newformdb;
pub mod oracle;
pub mod frey;
pub mod mpoly;
pub mod poly;
pub mod sieve;
pub mod traces;
