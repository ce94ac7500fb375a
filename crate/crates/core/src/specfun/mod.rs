//! Special functions and quadrature used by the coupling kernels and their
//! oracles.
//!
//! Evaluation zones (argument `x`, per function family):
//!
//! | function     | power series    | intermediate                 | asymptotic   |
//! |--------------|-----------------|------------------------------|--------------|
//! | `J_n`, `Y_n` | `x <= 4`        | Miller recurrence, `4 < x < 25` | `x >= 25` (Hankel) |
//! | `H_0`, `H_1` | `x <= 20`       |                              | `x > 20` (`H - Y` expansion) |

mod bessel;
mod quadrature;
mod struve;

pub use bessel::{bessel_j, bessel_j012, bessel_jy012, bessel_y, bessel_y012};
pub use quadrature::{integrate, integrate_semi_infinite, QuadratureSpec, TailSpec};
pub use struve::{struve_h, struve_h01};
