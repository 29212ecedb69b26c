//! Closed-form barriers, sampled inequality certificates and a radially
//! symmetric implicit solver for the p-parabolic equation `∂_t u = Δ_p u` on
//! cusp domains `{|x| < ζ(t), t0 < t < 0}` shrinking to the origin.
//!
//! The crate is `no_std` (it needs `alloc`). IO, file formats and the command
//! line live in the `petrocheck` companion crate.
//!
//! Everything is radial: a field is a function of `(r, t)` with `r = |x|`, and
//! the n-dimensional p-Laplacian is `r^{1-n} ∂_r(r^{n-1} |u_r|^{p-2} u_r)`.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod barriers;
pub mod calculus;
pub mod domains;
mod error;
mod interp;
mod params;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use params::{lambda_of, Params};
