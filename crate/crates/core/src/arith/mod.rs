//! Integer arithmetic: factorisation, Jacobi symbols, the sign isomorphism
//! `F2 -> {+1, -1}`, sieving of the special family and the nice predicate.

mod nice;
mod prime;
mod sieve;
mod symbol;

pub use nice::{is_n_nice, NiceReport, NiceScale};
pub use prime::{
    factor, is_prime, isqrt_u128, isqrt_u64, mul_mod, pow_mod, sqrt_mod_prime, Factorization,
};
pub use sieve::{
    family_d_element, for_each_family_d, for_each_family_d_in, sieve_family_d, FamilyDElement,
};
pub use symbol::{jacobi, jacobi_big, kronecker, legendre, F2Bit};
