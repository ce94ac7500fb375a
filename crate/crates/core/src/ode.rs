//! Adaptive Dormand–Prince 5(4) integrator for complex linear systems.
//!
//! Used as the explicit-time-stepping route against which the spectral
//! propagation is checked.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub initial_step: T,
    pub max_steps: usize,
}

impl<T: Real> Default for StepperSpec<T> {
    fn default() -> Self {
        Self { rel_tol: T::lit(1e-10), abs_tol: T::lit(1e-12), initial_step: T::lit(1e-3), max_steps: 10_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights equal the last row of A; these are 5th minus 4th
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `y' = rhs(t, y)` from `t0` and record the state at each of
/// `times` (ascending, all `>= t0`). Steps are shortened to land on each
/// output time exactly.
pub fn integrate<T, F>(mut rhs: F, t0: T, y0: &[Complex<T>], times: &[T], spec: &StepperSpec<T>) -> Result<Vec<Vec<Complex<T>>>>
where
    T: Real,
    F: FnMut(T, &[Complex<T>], &mut [Complex<T>]),
{
    if !(spec.rel_tol > T::zero()) || !(spec.abs_tol >= T::zero()) || !(spec.initial_step > T::zero()) {
        return Err(Error::Stepper("tolerances and initial step must be positive".into()));
    }
    let mut prev = t0;
    for &t in times {
        if !t.is_finite() || t < prev {
            return Err(Error::Stepper("output times must be finite, ascending and not before t0".into()));
        }
        prev = t;
    }
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<Complex<T>>> = vec![vec![Complex::zero(); n]; 7];
    let mut stage = vec![Complex::zero(); n];
    let mut y_new = vec![Complex::zero(); n];
    let mut t = t0;
    let mut h = spec.initial_step;
    let mut steps = 0usize;
    let mut out = Vec::with_capacity(times.len());
    let mut fsal = false;
    let safety = T::lit(0.9);
    let min_factor = T::lit(0.2);
    let max_factor = T::lit(10.0);

    for &target in times {
        while t < target {
            steps += 1;
            if steps > spec.max_steps {
                return Err(Error::Stepper(format!("exceeded {} steps at t = {:e}", spec.max_steps, t.to_f64_lossy())));
            }
            let remaining = target - t;
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };
            if !fsal {
                rhs(t, &y, &mut k[0]);
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = Complex::zero();
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let a = A[s][j];
                        if a != 0.0 {
                            acc = acc + kj[i] * T::lit(a);
                        }
                    }
                    stage[i] = y[i] + acc * step;
                }
                let ts = t + step * T::lit(C[s]);
                rhs(ts, &stage, &mut k[s]);
            }
            // stage 7 was evaluated at the 5th-order solution
            y_new.copy_from_slice(&stage);
            let mut err = T::zero();
            for i in 0..n {
                let mut e = Complex::zero();
                for (j, kj) in k.iter().enumerate() {
                    if E[j] != 0.0 {
                        e = e + kj[i] * T::lit(E[j]);
                    }
                }
                let e = e * step;
                let sc = spec.abs_tol + spec.rel_tol * y[i].norm().max(y_new[i].norm());
                let r = e.norm() / sc;
                err = err + r * r;
            }
            let err = if n == 0 { T::zero() } else { (err / T::from_usize_lossy(n)).sqrt() };
            if !err.is_finite() {
                return Err(Error::Stepper(format!("non-finite error estimate at t = {:e}", t.to_f64_lossy())));
            }
            let factor = if err == T::zero() {
                max_factor
            } else {
                (safety * err.powf(T::lit(-0.2))).max(min_factor).min(max_factor)
            };
            if err <= T::one() {
                t = if clipped { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                let last = k.pop().expect("seven stages");
                k.insert(0, last);
                fsal = true;
                // a clipped step says nothing about the natural size
                if !clipped || factor < T::one() {
                    h = step * factor;
                }
            } else {
                h = step * factor.min(T::one());
                if h <= T::epsilon() * t.abs().max(T::one()) {
                    return Err(Error::Stepper(format!("step size underflow at t = {:e}", t.to_f64_lossy())));
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
