//! Independent numerical checks of the closed forms and of the spectral
//! propagator.
//!
//! Tolerance tiers: `1e-9` for finite-interval quadratures, `1e-5` for
//! principal-value and semi-infinite integrals, `1e-7` for ODE against
//! spectral propagation. A report passes when
//! `|closed - oracle| <= tolerance * max(1, |closed|)`.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::Serialize;

use crate::collective::{propagate, CouplingMatrix, StateCoefficients};
use crate::error::{Error, Result};
use crate::kernels::{
    dissipative3d, f2d, g2d, kernel1d, kernel3d, quadrature_f2d, PairGeometry,
};
use crate::ode::{self, StepperSpec};
use crate::scalar::Real;
use crate::specfun::{bessel_j012, bessel_y, integrate, integrate_semi_infinite, struve_h, QuadratureSpec, TailSpec};

pub const FINITE_TOLERANCE: f64 = 1e-9;
pub const PV_TOLERANCE: f64 = 1e-5;
pub const DYNAMICS_TOLERANCE: f64 = 1e-7;
/// Largest system [`check_dynamics`] accepts by default.
pub const DEFAULT_DYNAMICS_CAP: usize = 64;

/// Which oracle covers each closed form listed in
/// [`crate::kernels::CLOSED_FORMS`].
pub const COVERAGE: &[(&str, &[&str])] = &[
    ("f2d", &["f2d_angular"]),
    ("g2d", &["g2d_pv_reconstruction"]),
    ("dissipative3d", &["gamma3d_sphere"]),
    ("shift3d", &["green3d_re", "green3d_im"]),
    ("kernel1d", &["kk1d"]),
];

/// Closed forms in `names` without an entry in [`COVERAGE`].
pub fn uncovered<'a>(names: &[&'a str]) -> Vec<&'a str> {
    names
        .iter()
        .copied()
        .filter(|n| !COVERAGE.iter().any(|(k, oracles)| k == n && !oracles.is_empty()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport<T> {
    pub identity: String,
    /// `key=value` pairs separated by `;`.
    pub parameters: String,
    pub closed_form: T,
    pub oracle: T,
    pub abs_err: T,
    pub rel_err: T,
    pub tolerance: T,
    pub pass: bool,
    pub diagnostic: Option<String>,
}

impl<T: Real> OracleReport<T> {
    pub fn compare(identity: &str, parameters: String, closed_form: T, oracle: T, tolerance: T) -> Self {
        let abs_err = (closed_form - oracle).abs();
        let rel_err = if closed_form == T::zero() { abs_err } else { abs_err / closed_form.abs() };
        let pass = abs_err <= tolerance * closed_form.abs().max(T::one());
        Self {
            identity: identity.to_string(),
            parameters,
            closed_form,
            oracle,
            abs_err,
            rel_err,
            tolerance,
            pass,
            diagnostic: None,
        }
    }

    /// A report for an oracle that could not be evaluated.
    pub fn failed(identity: &str, parameters: String, closed_form: T, tolerance: T, err: &Error) -> Self {
        Self {
            identity: identity.to_string(),
            parameters,
            closed_form,
            oracle: T::nan(),
            abs_err: T::infinity(),
            rel_err: T::infinity(),
            tolerance,
            pass: false,
            diagnostic: Some(err.to_string()),
        }
    }

    pub fn csv_header() -> [&'static str; 9] {
        ["identity", "parameters", "closed_form", "oracle", "abs_err", "rel_err", "tolerance", "pass", "diagnostic"]
    }

    /// Row in the CLI dialect: reals with 17 significant digits.
    pub fn csv_fields(&self) -> [String; 9] {
        let real = |x: T| format!("{:.16e}", x.to_f64_lossy());
        [
            self.identity.clone(),
            self.parameters.clone(),
            real(self.closed_form),
            real(self.oracle),
            real(self.abs_err),
            real(self.rel_err),
            real(self.tolerance),
            self.pass.to_string(),
            self.diagnostic.clone().unwrap_or_default(),
        ]
    }
}

/// Plain-text table, one line per report.
pub fn render_table<T: Real>(reports: &[OracleReport<T>]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:<22} {:>24} {:>24} {:>10} {:>8}  status",
        "identity", "parameters", "closed form", "oracle", "abs err", "tol"
    );
    for r in reports {
        let _ = write!(
            out,
            "{:<24} {:<22} {:>24.16e} {:>24.16e} {:>10.2e} {:>8.0e}  {}",
            r.identity,
            r.parameters,
            r.closed_form.to_f64_lossy(),
            r.oracle.to_f64_lossy(),
            r.abs_err.to_f64_lossy(),
            r.tolerance.to_f64_lossy(),
            if r.pass { "pass" } else { "FAIL" }
        );
        if let Some(d) = &r.diagnostic {
            let _ = write!(out, " ({d})");
        }
        out.push('\n');
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
    out
}

fn report<T: Real>(identity: &str, params: String, closed: T, oracle: Result<T>, tol: T) -> OracleReport<T> {
    match oracle {
        Ok(v) => OracleReport::compare(identity, params, closed, v, tol),
        Err(e) => OracleReport::failed(identity, params, closed, tol, &e),
    }
}

fn finite_spec<T: Real>() -> QuadratureSpec<T> {
    let tol = T::lit(1e-14).max(T::epsilon() * T::lit(10.0));
    QuadratureSpec::new(tol, tol).with_max_subdivisions(2000)
}

fn pv_spec<T: Real>() -> QuadratureSpec<T> {
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(10.0));
    QuadratureSpec::new(tol, tol).with_max_subdivisions(2000)
}

/// `J_1(x)/x`, continuous at zero.
fn j1_over_x<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-6) {
        T::lit(0.5) - x * x / T::lit(16.0)
    } else {
        bessel_j012(x.abs())[1] / x.abs()
    }
}

/// Angular integrals of `e^{ia cos θ}` times `1`, `cos²θ`, `sin²θ` and
/// `sin θ cos θ` over `[0, 2π]`, real and imaginary parts.
pub fn bessel_identities_at<T: Real>(a: T) -> Vec<OracleReport<T>> {
    let spec = finite_spec::<T>();
    let tol = T::lit(FINITE_TOLERANCE);
    let tau = T::TAU();
    let x = a.abs();
    let [j0, _, j2] = bessel_j012(x);
    let j1x = j1_over_x(x);
    let params = format!("a={}", a);
    type Weight<T> = (&'static str, T, fn(T) -> T);
    let weights: [Weight<T>; 4] = [
        ("angular_exp", tau * j0, |_| T::one()),
        ("angular_cos2", tau * (j1x - j2), |t| t.cos() * t.cos()),
        ("angular_sin2", tau * j1x, |t| t.sin() * t.sin()),
        ("angular_sincos", T::zero(), |t| t.sin() * t.cos()),
    ];
    let mut out = Vec::with_capacity(8);
    for (name, closed, w) in weights {
        let quad = |part: fn(T) -> T| {
            let f = |t: T| w(t) * part(a * t.cos());
            let pi = T::PI();
            Ok(integrate(f, T::zero(), pi, &spec)? + integrate(f, pi, tau, &spec)?)
        };
        out.push(report(&format!("{name}_re"), params.clone(), closed, quad(T::cos), tol));
        out.push(report(&format!("{name}_im"), params.clone(), T::zero(), quad(T::sin), tol));
    }
    out
}

pub fn check_bessel_identities<T: Real>(grid: &[T]) -> Result<Vec<OracleReport<T>>> {
    if grid.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidQuadrature("non-finite point in a-grid".into()));
    }
    Ok(grid.iter().flat_map(|&a| bessel_identities_at(a)).collect())
}

/// The five numerically evaluated principal-value integrals at `b`:
/// `𝒫∫J_0/(a-b)`, `∫J_0/(a+b)`, `𝒫∫J_1/(a(a-b))`, `∫J_1/(a(a+b))` and
/// `𝒫∫J_2[1/(a-b) + 1/(a+b)]`, all over `[0, ∞)`.
pub struct PvIntegrals<T> {
    pub j0_minus: Result<T>,
    pub j0_plus: Result<T>,
    pub j1_minus: Result<T>,
    pub j1_plus: Result<T>,
    pub j2_sum: Result<T>,
}

pub fn pv_integrals<T: Real>(b: T) -> PvIntegrals<T> {
    let tail = TailSpec::default();
    let sing = pv_spec::<T>().with_singularity(b);
    let plain = pv_spec::<T>();
    let j0 = |a: T| bessel_j012(a)[0];
    let j2 = |a: T| bessel_j012(a)[2];
    PvIntegrals {
        j0_minus: integrate_semi_infinite(|a| j0(a) / (a - b), T::zero(), &tail, &sing),
        j0_plus: integrate_semi_infinite(|a| j0(a) / (a + b), T::zero(), &tail, &plain),
        j1_minus: integrate_semi_infinite(|a| j1_over_x(a) / (a - b), T::zero(), &tail, &sing),
        j1_plus: integrate_semi_infinite(|a| j1_over_x(a) / (a + b), T::zero(), &tail, &plain),
        j2_sum: integrate_semi_infinite(|a| j2(a) * T::lit(2.0) * a / ((a - b) * (a + b)), T::zero(), &tail, &sing),
    }
}

fn closed_pv<T: Real>(b: T) -> Result<[T; 5]> {
    let half_pi = T::FRAC_PI_2();
    let pi = T::PI();
    let (y0, y1, y2) = (bessel_y(0, b)?, bessel_y(1, b)?, bessel_y(2, b)?);
    let (h0, h1) = (struve_h(0, b)?, struve_h(1, b)?);
    let two = T::lit(2.0);
    Ok([
        -half_pi * (y0 + h0),
        -half_pi * (y0 - h0),
        -(two + pi * b * (y1 + h1)) / (two * b * b),
        -(two + pi * b * (y1 - h1)) / (two * b * b),
        -T::lit(4.0) / (b * b) - pi * y2,
    ])
}

pub fn pv_identities_at<T: Real>(b: T) -> Result<Vec<OracleReport<T>>> {
    if !(b > T::zero()) || !b.is_finite() {
        return Err(Error::Domain { function: "check_pv_identities", x: b.to_f64_lossy() });
    }
    let closed = closed_pv(b)?;
    let pv = pv_integrals(b);
    let tol = T::lit(PV_TOLERANCE);
    let params = format!("b={}", b);
    let names = ["pv_j0_minus", "pv_j0_plus", "pv_j1_minus", "pv_j1_plus", "pv_j2_sum"];
    let values = [pv.j0_minus, pv.j0_plus, pv.j1_minus, pv.j1_plus, pv.j2_sum];
    Ok(names
        .iter()
        .zip(closed)
        .zip(values)
        .map(|((name, c), v)| report(name, params.clone(), c, v, tol))
        .collect())
}

pub fn check_pv_identities<T: Real>(grid: &[T]) -> Result<Vec<OracleReport<T>>> {
    let mut out = Vec::new();
    for &b in grid {
        out.extend(pv_identities_at(b)?);
    }
    Ok(out)
}

/// `g(ξ) = -(1/π) 𝒫∫_0^∞ f(a) [1/(a-ξ) + 1/(a+ξ)] da`, with the integral
/// assembled from the five numerical principal values.
pub fn pv_reconstruct_g2d<T: Real>(geom: PairGeometry<T>) -> Result<T> {
    let pv = pv_integrals(geom.xi());
    let two = T::lit(2.0);
    let i0 = pv.j0_minus? + pv.j0_plus?;
    let i1 = pv.j1_minus? + pv.j1_plus?;
    let i2 = pv.j2_sum?;
    Ok(-two * (i0 - i1 + geom.c2() * i2) / T::PI())
}

pub fn check_f2d<T: Real>(geom: PairGeometry<T>) -> OracleReport<T> {
    let params = format!("xi={};c2={}", geom.xi(), geom.c2());
    report("f2d_angular", params, f2d(geom), quadrature_f2d(geom, &finite_spec()), T::lit(FINITE_TOLERANCE))
}

pub fn check_g2d<T: Real>(geom: PairGeometry<T>) -> OracleReport<T> {
    let params = format!("xi={};c2={}", geom.xi(), geom.c2());
    let tol = T::lit(PV_TOLERANCE);
    match g2d(geom) {
        Ok(closed) => report("g2d_pv_reconstruction", params, closed, pv_reconstruct_g2d(geom), tol),
        Err(e) => OracleReport::failed("g2d_pv_reconstruction", params, T::nan(), tol, &e),
    }
}

/// `γ = (3/8)∫_{-1}^{1} [2 - (1-u²)(1-c²) - 2u²c²] cos(ξu) du`: the
/// azimuth-averaged sphere integral of `1 - (q̂·p̂)²`.
pub fn sphere_dissipative3d<T: Real>(geom: PairGeometry<T>) -> Result<T> {
    let (xi, c2) = (geom.xi(), geom.c2());
    let one = T::one();
    let two = T::lit(2.0);
    let f = |u: T| (two - (one - u * u) * (one - c2) - two * u * u * c2) * (xi * u).cos();
    // even integrand
    Ok(T::lit(0.75) * integrate(f, T::zero(), one, &finite_spec())?)
}

/// `(3/2) e^{iξ} [-i(1-c²)/ξ + (1-3c²)(1/ξ² + i/ξ³)]`, the transverse free
/// Green tensor contracted with `p̂`; equals `γ + 2iΩ`.
pub fn green3d<T: Real>(geom: PairGeometry<T>) -> Complex<T> {
    let (xi, c2) = (geom.xi(), geom.c2());
    let one = T::one();
    let i = Complex::new(T::zero(), one);
    let (s, c) = xi.sin_cos();
    let phase = Complex::new(c, s);
    let radial = -i * ((one - c2) / xi) + (Complex::new(one / (xi * xi), one / (xi * xi * xi))) * (one - T::lit(3.0) * c2);
    phase * radial * T::lit(1.5)
}

pub fn check_kernel3d<T: Real>(geom: PairGeometry<T>) -> Vec<OracleReport<T>> {
    let params = format!("xi={};c2={}", geom.xi(), geom.c2());
    let fin = T::lit(FINITE_TOLERANCE);
    let mut out = vec![report("gamma3d_sphere", params.clone(), dissipative3d(geom), sphere_dissipative3d(geom), fin)];
    match kernel3d(geom) {
        Ok(k) => {
            let g = green3d(geom);
            out.push(OracleReport::compare("green3d_re", params.clone(), k.dissipative, g.re, fin));
            out.push(OracleReport::compare("green3d_im", params, k.coherent, g.im, fin));
        }
        Err(e) => out.push(OracleReport::failed("green3d_im", params, T::nan(), fin, &e)),
    }
    out
}

/// The waveguide shift as the Hilbert transform of its dissipative part,
/// folded onto the half line:
/// `sin ξ = -(1/π) 𝒫∫_0^∞ cos a [1/(a-ξ) - 1/(a+ξ)] da`.
pub fn check_kernel1d<T: Real>(xi: T) -> OracleReport<T> {
    let tail = TailSpec::default();
    let spec = pv_spec::<T>().with_singularity(xi);
    let two = T::lit(2.0);
    let oracle = integrate_semi_infinite(|a: T| a.cos() * two * xi / ((a - xi) * (a + xi)), T::zero(), &tail, &spec)
        .map(|v| -v / T::PI());
    report("kk1d", format!("xi={}", xi), kernel1d(xi).coherent, oracle, T::lit(PV_TOLERANCE))
}

/// Default grids for the kernel oracles.
pub fn default_a_grid<T: Real>() -> Vec<T> {
    [0.0, 0.5, 1.0, 3.0, -3.0, 7.5, 20.0].iter().map(|&v| T::lit(v)).collect()
}

pub fn default_b_grid<T: Real>() -> Vec<T> {
    [0.5, 1.0, 2.0, 5.0, 10.0].iter().map(|&v| T::lit(v)).collect()
}

/// Every kernel oracle on its default sample.
pub fn check_kernels<T: Real>() -> Result<Vec<OracleReport<T>>> {
    let mut out = Vec::new();
    for xi in [0.1, 1.0, 5.0, 12.0, 40.0] {
        for c2 in [0.0, 0.25, 0.5, 1.0] {
            out.push(check_f2d(PairGeometry::new(T::lit(xi), T::lit(c2))?));
        }
    }
    for xi in [0.5, 2.0, 5.0] {
        for c2 in [0.0, 1.0] {
            out.push(check_g2d(PairGeometry::new(T::lit(xi), T::lit(c2))?));
        }
    }
    for xi in [0.3, 1.0, std::f64::consts::PI, 7.0, 20.0] {
        for c2 in [0.0, 0.5, 1.0] {
            out.extend(check_kernel3d(PairGeometry::new(T::lit(xi), T::lit(c2))?));
        }
    }
    for xi in [0.5, 1.0, 2.0, 5.0] {
        out.push(check_kernel1d(T::lit(xi)));
    }
    Ok(out)
}

/// Sampling and stepper settings for [`check_dynamics`].
#[derive(Debug, Clone, Copy)]
pub struct DynamicsCheck<T> {
    pub samples: usize,
    pub cap: usize,
    pub stepper: StepperSpec<T>,
}

impl<T: Real> Default for DynamicsCheck<T> {
    fn default() -> Self {
        Self { samples: 60, cap: DEFAULT_DYNAMICS_CAP, stepper: StepperSpec::default() }
    }
}

/// Spectral propagation against direct integration of `b' = -M* b` on
/// evenly spaced times over `[0, horizon]`; the reported error is the
/// largest componentwise amplitude difference.
pub fn check_dynamics<T: Real>(
    m: &CouplingMatrix<T>,
    initial: &StateCoefficients<T>,
    horizon: T,
    opts: &DynamicsCheck<T>,
) -> Result<OracleReport<T>> {
    let n = m.len();
    let (samples, cap) = (opts.samples, opts.cap);
    if n > cap {
        return Err(Error::DimensionMismatch { expected: cap, actual: n });
    }
    if initial.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: initial.len() });
    }
    let times = crate::collective::linear_time_grid(T::zero(), horizon, samples.max(2))?;
    let params = format!("n={};horizon={}", n, horizon);
    let tol = T::lit(DYNAMICS_TOLERANCE).max(T::epsilon().sqrt());
    let spectrum = crate::collective::diagonalize(m)?;
    let spectral = propagate(&spectrum, initial, &times, T::infinity())?;
    let generator = m.generator();
    let rhs = |_t: T, y: &[Complex<T>], dy: &mut [Complex<T>]| {
        for (mu, d) in dy.iter_mut().enumerate() {
            *d = y.iter().enumerate().fold(Complex::new(T::zero(), T::zero()), |s, (nu, v)| s + generator[[mu, nu]] * *v);
        }
    };
    let direct = match ode::integrate(rhs, T::zero(), &initial.amplitudes, &times, &opts.stepper) {
        Ok(d) => d,
        Err(e) => return Ok(OracleReport::failed("dynamics_ode", params, T::zero(), tol, &e)),
    };
    let mut worst = T::zero();
    for (a, b) in spectral.iter().zip(&direct) {
        for (x, y) in a.amplitudes.iter().zip(b) {
            worst = worst.max((*x - *y).norm());
        }
    }
    Ok(OracleReport::compare("dynamics_ode", params, T::zero(), worst, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::CLOSED_FORMS;
    use crate::specfun::bessel_j;

    #[test]
    fn coverage_is_complete() {
        assert!(uncovered(CLOSED_FORMS).is_empty());
        let produced: Vec<String> = check_kernels::<f64>().unwrap().into_iter().map(|r| r.identity).collect();
        for (_, oracles) in COVERAGE {
            for o in *oracles {
                assert!(produced.iter().any(|p| p == o), "oracle {o} never runs");
            }
        }
        assert_eq!(uncovered(&["f2d", "mystery"]), vec!["mystery"]);
    }

    #[test]
    fn angular_identities_at_zero_and_three() {
        for r in bessel_identities_at(0.0f64) {
            assert!(r.pass, "{r:?}");
        }
        let rs = bessel_identities_at(3.0f64);
        let cos2 = rs.iter().find(|r| r.identity == "angular_cos2_re").unwrap();
        let j1 = bessel_j(1, 3.0).unwrap();
        let j2 = bessel_j(2, 3.0).unwrap();
        assert!((cos2.closed_form - std::f64::consts::TAU * (j1 / 3.0 - j2)).abs() < 1e-15);
        assert!(rs.iter().all(|r| r.pass));
        assert!(bessel_identities_at(-3.0f64).iter().all(|r| r.pass));
    }

    #[test]
    fn kernel_oracles_pass() {
        let reports = check_kernels::<f64>().unwrap();
        let bad: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "{}", render_table(&reports));
    }

    #[test]
    fn failed_report_marks_failure() {
        let r = OracleReport::failed("x", "a=1".into(), 1.0f64, 1e-9, &Error::Stepper("boom".into()));
        assert!(!r.pass && r.oracle.is_nan());
        assert_eq!(r.csv_fields()[8], Error::Stepper("boom".into()).to_string());
    }

    #[test]
    fn pv_domain_errors() {
        assert!(pv_identities_at(0.0f64).is_err());
        assert!(check_bessel_identities(&[f64::NAN]).is_err());
    }
}
