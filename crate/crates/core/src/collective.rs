//! Coupling matrix, symmetric-state rates, eigen-spectrum of the
//! single-excitation generator and phase-imprinted dynamics.
//!
//! Rates are at the intensity level: `Γ_N` and `Γ_l = -2 Re λ_l`, so one
//! atom gives `Γ_N = Γ_1 = 1`. The generator is the entrywise conjugate
//! `-M*`.

use std::cmp::Ordering;

use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{coupling, ReservoirKind};
use crate::lattice::{AtomSites, Vec2};
use crate::linalg;
use crate::scalar::Real;

/// Default upper bound on `cond₁(S)` accepted by [`evolve`].
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e12;

/// Number of points in the default logarithmic time grid.
pub const DEFAULT_TIME_POINTS: usize = 2000;

fn tolerance<T: Real>(nominal: f64) -> T {
    T::lit(nominal).max(T::epsilon() * T::lit(1e3))
}

/// `M_μν`: `1/2` on the diagonal and `(d + i c)/2` off it.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix<T> {
    kind: ReservoirKind,
    entries: Array2<Complex<T>>,
}

impl<T: Real> CouplingMatrix<T> {
    /// Every entry is evaluated from its own pair geometry, so symmetry is a
    /// property to check rather than an assumption. The waveguide reservoir
    /// needs collinear sites.
    pub fn assemble(sites: &AtomSites<T>, polarization: Vec2<T>, kind: ReservoirKind) -> Result<Self> {
        let n = sites.len();
        if kind == ReservoirKind::OneD && !collinear(sites.positions()) {
            return Err(Error::InvalidLattice("the 1d reservoir needs collinear sites".into()));
        }
        let half = T::lit(0.5);
        let mut entries = Array2::<Complex<T>>::zeros((n, n));
        for mu in 0..n {
            for nu in 0..n {
                entries[[mu, nu]] = if mu == nu {
                    Complex::new(half, T::zero())
                } else {
                    coupling(kind, sites.pair_geometry(mu, nu, polarization)?)?.element()
                };
            }
        }
        Ok(Self { kind, entries })
    }

    pub fn from_entries(kind: ReservoirKind, entries: Array2<Complex<T>>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), actual: entries.ncols() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain { function: "CouplingMatrix::from_entries", x: f64::NAN });
        }
        Ok(Self { kind, entries })
    }

    pub fn kind(&self) -> ReservoirKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> &Array2<Complex<T>> {
        &self.entries
    }

    /// `-M*`.
    pub fn generator(&self) -> Array2<Complex<T>> {
        self.entries.mapv(|z| -z.conj())
    }

    pub fn dissipative(&self) -> Array2<T> {
        self.entries.mapv(|z| z.re)
    }

    /// `max |M_μν - M_νμ|`.
    pub fn symmetry_residual(&self) -> T {
        let n = self.len();
        let mut worst = T::zero();
        for mu in 0..n {
            for nu in mu + 1..n {
                worst = worst.max((self.entries[[mu, nu]] - self.entries[[nu, mu]]).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of `Re M`; non-negative up to roundoff.
    pub fn dissipative_min_eigenvalue(&self) -> T {
        let vals = linalg::symmetric_eigenvalues(&self.dissipative());
        vals.first().copied().unwrap_or_else(T::zero)
    }

    pub fn frobenius(&self) -> T {
        linalg::frobenius(&self.entries)
    }
}

fn collinear<T: Real>(points: &[Vec2<T>]) -> bool {
    let Some(&origin) = points.first() else { return true };
    let Some(far) = points.iter().map(|&p| p - origin).max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal)) else {
        return true;
    };
    let len = far.norm();
    if len == T::zero() {
        return true;
    }
    let axis = Vec2::new(far.x / len, far.z / len);
    let tol = T::lit(1e3) * T::epsilon() * len;
    points.iter().all(|&p| {
        let d = p - origin;
        (d.x * axis.z - d.z * axis.x).abs() <= tol
    })
}

/// Decay constant and frequency shift of the driven symmetric state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollectiveRates<T> {
    pub gamma_n: T,
    pub delta_n: T,
    /// Largest imaginary part left in either sum, relative to its real part
    /// (floored at one).
    pub imag_residue: T,
}

fn drive_phase<T: Real>(drive: Vec2<T>, r: Vec2<T>) -> Complex<T> {
    let (s, c) = drive.dot(r).sin_cos();
    Complex::new(c, s)
}

/// `Γ_N = (2/N) Σ_μν e^{-ik·(r_μ-r_ν)} Re M_μν` and
/// `Δ_N = (2/N) Σ_{μ≠ν} e^{-ik·(r_μ-r_ν)} Im M_μν`.
pub fn symmetric_rates<T: Real>(m: &CouplingMatrix<T>, sites: &AtomSites<T>, drive: Vec2<T>) -> Result<CollectiveRates<T>> {
    let n = m.len();
    if sites.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: sites.len() });
    }
    let phases: Vec<Complex<T>> = sites.positions().iter().map(|&r| drive_phase(drive, r)).collect();
    let mut gamma = Complex::<T>::zero();
    let mut delta = Complex::<T>::zero();
    for mu in 0..n {
        for nu in 0..n {
            let w = phases[mu].conj() * phases[nu];
            let z = m.entries[[mu, nu]];
            gamma = gamma + w * z.re;
            if mu != nu {
                delta = delta + w * z.im;
            }
        }
    }
    let scale = T::lit(2.0) / T::from_usize_lossy(n);
    let gamma = gamma * scale;
    let delta = delta * scale;
    let residue = (gamma.im.abs() / gamma.re.abs().max(T::one())).max(delta.im.abs() / delta.re.abs().max(T::one()));
    Ok(CollectiveRates { gamma_n: gamma.re, delta_n: delta.re, imag_residue: residue })
}

/// Eigen-decomposition of `-M*`, sorted by ascending `Γ_l`, ties by `Im λ_l`.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    pub values: Vec<Complex<T>>,
    /// Right eigenvectors as columns; the largest-magnitude component of each
    /// is real and positive.
    pub vectors: Array2<Complex<T>>,
    pub inverse: Array2<Complex<T>>,
    /// `‖S‖₁ ‖S⁻¹‖₁`.
    pub condition: T,
    /// `‖(-M*)S - SΛ‖_F`.
    pub residual: T,
    /// Frobenius norm of `M`, the scale for `residual`.
    pub scale: T,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Γ_l = -2 Re λ_l`.
    pub fn decay_constants(&self) -> Vec<T> {
        self.values.iter().map(|v| -T::lit(2.0) * v.re).collect()
    }

    pub fn frequencies(&self) -> Vec<T> {
        self.values.iter().map(|v| v.im).collect()
    }
}

pub fn diagonalize<T: Real>(m: &CouplingMatrix<T>) -> Result<Spectrum<T>> {
    let generator = m.generator();
    let eig = linalg::eig(&generator)?;
    let n = eig.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (va, vb) = (eig.values[a], eig.values[b]);
        (-va.re)
            .partial_cmp(&-vb.re)
            .unwrap_or(Ordering::Equal)
            .then(va.im.partial_cmp(&vb.im).unwrap_or(Ordering::Equal))
    });
    let values: Vec<Complex<T>> = order.iter().map(|&i| eig.values[i]).collect();
    let mut vectors = Array2::<Complex<T>>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let column = eig.vectors.column(src);
        let pivot = column
            .iter()
            .copied()
            .fold(Complex::<T>::zero(), |best, z| if z.norm() > best.norm() { z } else { best });
        let phase = if pivot.norm() > T::zero() { pivot.conj() / pivot.norm() } else { Complex::one() };
        for (row, z) in column.iter().enumerate() {
            vectors[[row, col]] = *z * phase;
        }
    }

    let mut lhs = generator.dot(&vectors);
    for (k, lam) in values.iter().enumerate() {
        let mut diff = lhs.column_mut(k);
        for (row, z) in diff.iter_mut().enumerate() {
            *z = *z - vectors[[row, k]] * *lam;
        }
    }
    let residual = linalg::frobenius(&lhs);
    let scale = m.frobenius();
    if !(residual <= tolerance::<T>(1e-9) * scale.max(T::min_positive_value())) {
        return Err(Error::EigenNotConverged { iterations: eig.iterations, residual: residual.to_f64_lossy() });
    }
    let inverse = linalg::inverse(&vectors)?;
    let condition = linalg::norm_one(&vectors) * linalg::norm_one(&inverse);
    Ok(Spectrum { values, vectors, inverse, condition, residual, scale })
}

/// Single-excitation amplitudes `b_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateCoefficients<T> {
    pub amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateCoefficients<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: other.len() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).fold(Complex::zero(), |s, (a, b)| s + a.conj() * *b))
    }
}

/// `b_μ = N^{-1/2} e^{ik·r_μ} e^{2πi m μ/N}` with `μ` 0-based in lattice
/// order. `m` ranges over `0..=N`; `m = N` is the symmetric state `m = 0`.
pub fn phase_imprinted_state<T: Real>(sites: &AtomSites<T>, drive: Vec2<T>, m: usize) -> Result<StateCoefficients<T>> {
    let n = sites.len();
    if m > n {
        return Err(Error::InvalidPhaseIndex { m, n });
    }
    let m = m % n;
    let norm = T::one() / T::from_usize_lossy(n).sqrt();
    let amplitudes = sites
        .positions()
        .iter()
        .enumerate()
        .map(|(mu, &r)| {
            // reduce the winding index first so the angle stays in [0, 2π)
            let k = (m * mu) % n;
            let angle = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n);
            let (s, c) = angle.sin_cos();
            drive_phase(drive, r) * Complex::new(c, s) * norm
        })
        .collect();
    Ok(StateCoefficients { amplitudes })
}

pub fn validate_times<T: Real>(times: &[T]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidTimeGrid("empty time grid".into()));
    }
    let mut prev = T::zero();
    for (i, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < T::zero() {
            return Err(Error::InvalidTimeGrid(format!("time {} at index {} is negative or non-finite", t, i)));
        }
        if i > 0 && t <= prev {
            return Err(Error::InvalidTimeGrid(format!("times not strictly ascending at index {}", i)));
        }
        prev = t;
    }
    Ok(())
}

/// `points` logarithmically spaced times from `start` to `stop` inclusive.
pub fn log_time_grid<T: Real>(start: T, stop: T, points: usize) -> Result<Vec<T>> {
    if !(start > T::zero()) || !(stop > start) || points < 2 {
        return Err(Error::InvalidTimeGrid(format!("log grid needs 0 < start < stop and >= 2 points, got {start}..{stop} x {points}")));
    }
    let (a, b) = (start.ln(), stop.ln());
    let last = T::from_usize_lossy(points - 1);
    let mut grid: Vec<T> = (0..points).map(|i| (a + (b - a) * T::from_usize_lossy(i) / last).exp()).collect();
    grid[0] = start;
    grid[points - 1] = stop;
    Ok(grid)
}

/// `points` evenly spaced times from `start` to `stop` inclusive.
pub fn linear_time_grid<T: Real>(start: T, stop: T, points: usize) -> Result<Vec<T>> {
    if !(start >= T::zero()) || !(stop > start) || points < 2 {
        return Err(Error::InvalidTimeGrid(format!("linear grid needs 0 <= start < stop and >= 2 points, got {start}..{stop} x {points}")));
    }
    let last = T::from_usize_lossy(points - 1);
    Ok((0..points).map(|i| start + (stop - start) * T::from_usize_lossy(i) / last).collect())
}

/// 2000 log-spaced points over `[1e-2, 1e3]`.
pub fn default_time_grid<T: Real>() -> Vec<T> {
    log_time_grid(T::lit(1e-2), T::lit(1e3), DEFAULT_TIME_POINTS).expect("valid default grid")
}

/// Mode weights, amplitude and intensity of an evolved state.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    pub times: Vec<T>,
    /// `w_l = (h†S)_l (S⁻¹h)_l`, in spectrum order.
    pub weights: Vec<Complex<T>>,
    /// `A(t) = Σ_l w_l e^{λ_l t}`.
    pub amplitude: Vec<Complex<T>>,
    pub intensity: Vec<T>,
}

fn check_state<T: Real>(spec: &Spectrum<T>, state: &StateCoefficients<T>, limit: T) -> Result<()> {
    if state.len() != spec.len() {
        return Err(Error::DimensionMismatch { expected: spec.len(), actual: state.len() });
    }
    if !(spec.condition <= limit) {
        return Err(Error::IllConditioned { condition: spec.condition.to_f64_lossy(), limit: limit.to_f64_lossy() });
    }
    Ok(())
}

/// Modal coordinates `S⁻¹ b`.
fn modal<T: Real>(spec: &Spectrum<T>, b: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = spec.len();
    (0..n)
        .map(|l| (0..n).fold(Complex::zero(), |s, mu| s + spec.inverse[[l, mu]] * b[mu]))
        .collect()
}

pub fn mode_weights<T: Real>(spec: &Spectrum<T>, state: &StateCoefficients<T>) -> Result<Vec<Complex<T>>> {
    check_state(spec, state, T::infinity())?;
    let h = &state.amplitudes;
    let n = spec.len();
    let right = modal(spec, h);
    Ok((0..n)
        .map(|l| {
            let left = (0..n).fold(Complex::<T>::zero(), |s, mu| s + h[mu].conj() * spec.vectors[[mu, l]]);
            left * right[l]
        })
        .collect())
}

/// Amplitude `A(t) = ⟨h|b(t)⟩` with `b(0) = h`.
pub fn evolve<T: Real>(spec: &Spectrum<T>, initial: &StateCoefficients<T>, times: &[T], condition_limit: T) -> Result<TimeSeries<T>> {
    check_state(spec, initial, condition_limit)?;
    validate_times(times)?;
    let weights = mode_weights(spec, initial)?;
    let amplitude: Vec<Complex<T>> = times
        .iter()
        .map(|&t| weights.iter().zip(&spec.values).fold(Complex::zero(), |s, (w, lam)| s + *w * (*lam * t).exp()))
        .collect();
    let intensity = amplitude.iter().map(|a| a.norm_sqr()).collect();
    Ok(TimeSeries { times: times.to_vec(), weights, amplitude, intensity })
}

/// Full state `b(t) = S e^{Λt} S⁻¹ b(0)` at each time.
pub fn propagate<T: Real>(spec: &Spectrum<T>, initial: &StateCoefficients<T>, times: &[T], condition_limit: T) -> Result<Vec<StateCoefficients<T>>> {
    check_state(spec, initial, condition_limit)?;
    validate_times(times)?;
    let n = spec.len();
    let c0 = modal(spec, &initial.amplitudes);
    Ok(times
        .iter()
        .map(|&t| {
            let c: Vec<Complex<T>> = c0.iter().zip(&spec.values).map(|(c, lam)| *c * (*lam * t).exp()).collect();
            let amplitudes = (0..n)
                .map(|mu| (0..n).fold(Complex::zero(), |s, l| s + spec.vectors[[mu, l]] * c[l]))
                .collect();
            StateCoefficients { amplitudes }
        })
        .collect())
}

/// First time the intensity falls to `e^{-1}`, interpolated linearly
/// between samples. A grid that starts after zero is extended by the point
/// `(0, 1)`.
pub fn lifetime<T: Real>(ts: &TimeSeries<T>) -> Result<T> {
    let threshold = (-T::one()).exp();
    let mut prev = (T::zero(), T::one());
    for (&t, &i) in ts.times.iter().zip(&ts.intensity) {
        if i <= threshold {
            let (t0, i0) = prev;
            if i0 <= threshold || t == t0 {
                return Ok(t);
            }
            return Ok(t0 + (t - t0) * (i0 - threshold) / (i0 - i));
        }
        prev = (t, i);
    }
    Err(Error::Censored { last_time: prev.0.to_f64_lossy(), last_intensity: prev.1.to_f64_lossy() })
}
