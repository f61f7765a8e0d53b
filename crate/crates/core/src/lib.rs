// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod channels;
pub mod eigenbasis;
pub mod error;
pub mod hankel;
pub mod norms;
pub mod propagator;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
