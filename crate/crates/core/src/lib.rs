//! Exact arithmetic for maximal orders in definite quaternion algebras over Q,
//! the quaternionic Heisenberg group `Heis_7` with its integral lattice, the
//! counting of rational points of bounded height in it, and a floating-point
//! geometry kernel for the quaternionic hyperbolic plane.
//!
//! The crate is `no_std` (it needs `alloc`). Everything exact lives on top of
//! [`num_rational::BigRational`] or plain `i64` coordinates in an order basis.

#![no_std]
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]
extern crate alloc;

pub mod constants;
pub mod counting;
pub mod error;
pub mod heisenberg;
pub mod hyperbolic;
pub mod lattice;
pub mod order;
pub mod quadrature;
pub mod quat;

pub use error::Error;
pub use heisenberg::{HeisPoint, Triple};
pub use order::{Order, OrderElement};
pub use quat::{Algebra, Quaternion};

/// Exact rational scalar used throughout.
pub type Q = num_rational::BigRational;

/// Parse helper for tests and builtin data: `q(p, r)` is `p/r`.
pub fn q(p: i64, r: i64) -> Q {
    Q::new(p.into(), r.into())
}
