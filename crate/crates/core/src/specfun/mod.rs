//! Special-function kernels: Bessel J of real order, complex log-Gamma, and
//! Kummer's ₁F₁ on the imaginary axis by two independent routes.

mod bessel;
mod bigfix;
mod gamma;
mod kummer;

pub use bessel::{bessel_j, bessel_j_asymptotic, bessel_j_deriv, bessel_j_pair, bessel_j_series};
pub use gamma::{ln_gamma, log_gamma_complex};
pub use kummer::{kummer_1f1, kummer_imag_sweep, EvalMethod, MethodKind};
