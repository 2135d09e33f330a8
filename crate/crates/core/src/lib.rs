//! p-ranks of cyclic covers of the projective line over finite fields.
//!
//! Two independent routes compute the p-rank of a trielliptic curve
//! `y^3 = p1(x) p2(x)^2`: the rank of the Frobenius-twisted product of its
//! Cartier matrix ([`cartier`]) and the degree of its L-polynomial reduced
//! mod p ([`zeta`]). The [`moduli`] module holds the combinatorics of inertia
//! types, signatures and p-rank bounds, and [`search`] runs witness searches
//! and scans on top of both routes.

pub mod algebra;
pub mod cartier;
pub mod cli;
pub mod moduli;
pub mod search;
pub mod zeta;
