//! Certified class-number divisibility for shifted families of imaginary
//! quadratic fields.
//!
//! The crate builds tuples of radicands `d, d+1, d+4, d+4p^2, ...` with
//! `d = 4(1-4k^n)^n` and checks, by exact class-number computation, that `n`
//! divides the class number of every field `Q(sqrt(d+m))` in the tuple. The
//! supporting pieces are usable on their own:
//!
//! * [`arith`]: factorization, primality, square-free parts, Kronecker symbol.
//! * [`classno`]: reduction and counting of binary quadratic forms.
//! * [`lehmer`]: Lehmer numbers, primitive divisors and the known exceptions.
//! * [`lrn`]: the equation `x^2 + d y^2 = l^z` and the `Q(sqrt(p^2 - l^n))` check.
//! * [`families`]: tuple construction and verification.

pub mod arith;
pub mod classno;
pub mod error;
pub mod families;
pub mod lehmer;
pub mod lrn;
pub mod serde_bigint;

pub use error::{Error, Result};
