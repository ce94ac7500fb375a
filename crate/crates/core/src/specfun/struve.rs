//! Struve functions `H_0` and `H_1`.

use super::bessel::bessel_y012;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Above this argument the ascending series loses more than ~1e-10 to
/// cancellation and the `H_n - Y_n` expansion takes over.
const SERIES_MAX: f64 = 20.0;

/// `H_n(x)` for `n` in `0..=1` and `x >= 0`.
pub fn struve_h<T: Real>(order: u32, x: T) -> Result<T> {
    if order > 1 {
        return Err(Error::UnsupportedOrder { function: "struve_h", order });
    }
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::Domain { function: "struve_h", x: x.to_f64_lossy() });
    }
    Ok(struve_h01(x)[order as usize])
}

/// `[H_0(x), H_1(x)]` for `x >= 0`.
pub fn struve_h01<T: Real>(x: T) -> [T; 2] {
    if x <= T::lit(SERIES_MAX) {
        [series(0, x), series(1, x)]
    } else {
        let y = bessel_y012(x);
        [y[0] + difference(0, x), y[1] + difference(1, x)]
    }
}

/// `H_n(x) = Σ_k (-1)^k (x/2)^(2k+n+1) / (Γ(k+3/2) Γ(k+n+3/2))`.
fn series<T: Real>(n: u32, x: T) -> T {
    let half = x / T::lit(2.0);
    let q = -half * half;
    let nu = T::lit(n as f64);
    // Γ(3/2) Γ(n+3/2): π/4 for n = 0, 3π/8 for n = 1
    let gammas = if n == 0 { T::PI() / T::lit(4.0) } else { T::lit(3.0) * T::PI() / T::lit(8.0) };
    let mut term = half.powi(n as i32 + 1) / gammas;
    let mut sum = term;
    let mut k = 0u32;
    loop {
        let kf = T::lit(k as f64);
        term = term * q / ((kf + T::lit(1.5)) * (kf + nu + T::lit(1.5)));
        sum = sum + term;
        k += 1;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(1e-2) || k > 200 {
            break;
        }
    }
    sum
}

/// Large-argument expansion of `H_n(x) - Y_n(x)`:
/// `(1/π) Σ_k Γ(k+1/2) (x/2)^(n-2k-1) / Γ(n+1/2-k)`, summed to its smallest term.
fn difference<T: Real>(n: u32, x: T) -> T {
    let half = x / T::lit(2.0);
    let inv_q = T::one() / (half * half);
    let nu = T::lit(n as f64);
    // Γ(1/2) / Γ(n + 1/2): 1 for n = 0, 2 for n = 1
    let mut coeff = if n == 0 { T::one() } else { T::lit(2.0) };
    let mut power = half.powi(n as i32 - 1);
    let mut sum = coeff * power;
    let mut last = sum.abs();
    for k in 0..200u32 {
        let kf = T::lit(k as f64);
        coeff = coeff * (kf + T::lit(0.5)) * (nu - T::lit(0.5) - kf);
        power = power * inv_q;
        let term = coeff * power;
        if term.abs() >= last {
            break;
        }
        sum = sum + term;
        last = term.abs();
        if last <= T::epsilon() * sum.abs() {
            break;
        }
    }
    sum / T::PI()
}
