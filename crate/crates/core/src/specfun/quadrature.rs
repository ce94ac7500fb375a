//! Adaptive Gauss-Kronrod quadrature with principal-value and oscillatory
//! tail support.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Location of a simple pole; the integral is then taken as a Cauchy
    /// principal value.
    pub singularity: Option<T>,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-12),
            max_subdivisions: 1000,
            singularity: None,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn with_singularity(mut self, at: T) -> Self {
        self.singularity = Some(at);
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    fn validate(&self, a: T, b: T) -> Result<()> {
        if !(self.abs_tol > T::zero()) || !(self.rel_tol > T::zero()) {
            return Err(Error::InvalidQuadrature("tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidQuadrature("max_subdivisions must be at least 1".into()));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidQuadrature("bounds must be finite".into()));
        }
        if let Some(s) = self.singularity {
            if !(s > a.min(b) && s < a.max(b)) {
                return Err(Error::InvalidQuadrature(format!(
                    "singularity {s} not strictly inside [{a}, {b}]"
                )));
            }
        }
        Ok(())
    }
}

/// Truncation strategy for integrals to `+∞` with oscillatory integrands.
///
/// The range beyond the start is cut into panels of one half-period; the
/// partial integrals at the last few panel ends are averaged pairwise,
/// `levels` times, which cancels the leading oscillation of the truncated tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSpec<T> {
    pub cutoff: T,
    pub half_period: T,
    pub levels: usize,
}

impl<T: Real> Default for TailSpec<T> {
    fn default() -> Self {
        Self { cutoff: T::lit(1e4), half_period: T::PI(), levels: 4 }
    }
}

/// 21-point Kronrod abscissae (non-negative half) and weights, with the
/// embedded 10-point Gauss weights on the odd entries.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod21<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let center = (a + b) / T::lit(2.0);
    let half = (b - a) / T::lit(2.0);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[10]);
    let mut gauss = T::zero();
    for i in 0..10 {
        let dx = half * T::lit(XGK[i]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + T::lit(WGK[i]) * pair;
        if i % 2 == 1 {
            gauss = gauss + T::lit(WG[i / 2]) * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Panel { a, b, value, error }
}

/// Globally adaptive integration on a finite interval without singularities.
fn adaptive<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let mut panels = vec![kronrod21(f, a, b)];
    loop {
        let total: T = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let err: T = panels.iter().fold(T::zero(), |s, p| s + p.error);
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::QuadratureDiverged {
                subdivisions: panels.len(),
                estimate: total.to_f64_lossy(),
                error: err.to_f64_lossy(),
            });
        }
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty panel list");
        let p = panels[worst];
        let mid = (p.a + p.b) / T::lit(2.0);
        let resolvable = mid > p.a.min(p.b) && mid < p.a.max(p.b);
        if panels.len() >= spec.max_subdivisions || !resolvable {
            return Err(Error::QuadratureDiverged {
                subdivisions: panels.len(),
                estimate: total.to_f64_lossy(),
                error: err.to_f64_lossy(),
            });
        }
        panels[worst] = kronrod21(f, p.a, mid);
        panels.push(kronrod21(f, mid, p.b));
    }
}

/// Integrates `f` over `[a, b]`.
///
/// With `spec.singularity = Some(s)` the result is the principal value
/// `lim_{ε→0} (∫_a^{s-ε} + ∫_{s+ε}^b) f`. The symmetric neighbourhood of `s`
/// is folded onto `u = |x - s|`, the excised integral is evaluated on a
/// geometric sequence of `ε` and Richardson-extrapolated to `ε = 0`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<T> {
    spec.validate(a, b)?;
    match spec.singularity {
        None => adaptive(&f, a, b, spec),
        Some(s) => {
            if b < a {
                let flipped = QuadratureSpec { singularity: Some(s), ..*spec };
                return integrate(f, b, a, &flipped).map(|v| -v);
            }
            principal_value(&f, a, b, s, spec)
        }
    }
}

fn principal_value<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, s: T, spec: &QuadratureSpec<T>) -> Result<T> {
    let reach = (s - a).min(b - s);
    let plain = QuadratureSpec { singularity: None, ..*spec };
    let left = adaptive(f, a, s - reach, &plain)?;
    let right = adaptive(f, s + reach, b, &plain)?;

    let folded = |u: T| f(s + u) + f(s - u);
    // The folded integrand is even and smooth in u, so the excised part
    // ∫_0^ε behaves as c1 ε + c3 ε³ + c5 ε⁵ + ...
    const LEVELS: usize = 5;
    let mut eps = reach * T::lit(1e-2);
    let mut table: Vec<T> = Vec::with_capacity(LEVELS);
    for level in 0..LEVELS {
        let mut value = adaptive(&folded, eps, reach, &plain)?;
        // Neville update on the odd powers of ε with ratio 1/2.
        for (j, previous) in table.iter_mut().enumerate().take(level) {
            let power = T::lit(2f64.powi(2 * j as i32 + 1));
            let improved = (power * value - *previous) / (power - T::one());
            *previous = value;
            value = improved;
        }
        table.push(value);
        eps = eps / T::lit(2.0);
    }
    let centre = table[LEVELS - 1];
    Ok(left + centre + right)
}

/// Integrates `f` over `[a, ∞)` by truncation at `tail.cutoff` with
/// oscillatory-tail averaging. A principal-value pole, when declared in
/// `spec.singularity`, must lie above `a`.
pub fn integrate_semi_infinite<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    tail: &TailSpec<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    if !(tail.half_period > T::zero()) || tail.levels == 0 {
        return Err(Error::InvalidQuadrature("tail half-period and levels must be positive".into()));
    }
    let head_end = match spec.singularity {
        Some(s) => s + (s - a),
        None => a,
    };
    if !(tail.cutoff > head_end + T::lit((tail.levels + 1) as f64) * tail.half_period) {
        return Err(Error::InvalidQuadrature(format!(
            "tail cutoff {} too close to the start of the oscillatory range {}",
            tail.cutoff, head_end
        )));
    }
    let mut total = match spec.singularity {
        Some(_) => integrate(&f, a, head_end, spec)?,
        None => T::zero(),
    };
    let plain = QuadratureSpec { singularity: None, ..*spec };
    let panels = ((tail.cutoff - head_end) / tail.half_period).floor().to_usize().unwrap_or(0);
    let per_panel = QuadratureSpec {
        abs_tol: (spec.abs_tol / T::from_usize_lossy(panels.max(1))).max(T::min_positive_value()),
        ..plain
    };
    let keep = tail.levels + 1;
    let mut partials: Vec<T> = Vec::with_capacity(keep);
    for k in 0..panels {
        let lo = head_end + T::from_usize_lossy(k) * tail.half_period;
        total = total + adaptive(&f, lo, lo + tail.half_period, &per_panel)?;
        if k + keep >= panels {
            partials.push(total);
        }
    }
    for _ in 0..tail.levels {
        partials = partials.windows(2).map(|w| (w[0] + w[1]) / T::lit(2.0)).collect();
    }
    Ok(partials[0])
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::new(1e-13, 1e-13)
    }

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x: f64| x.powi(5) - 3.0 * x, -1.0, 2.0, &spec()).unwrap();
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 4.5)).abs() < 1e-13);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let fwd = integrate(f64::sin, 0.0, 2.0, &spec()).unwrap();
        let back = integrate(f64::sin, 2.0, 0.0, &spec()).unwrap();
        assert!((fwd + back).abs() < 1e-15);
    }

    #[test]
    fn simple_pole_principal_value() {
        // P∫_0^3 dx/(x-1) = ln 2
        let v = integrate(|x: f64| 1.0 / (x - 1.0), 0.0, 3.0, &spec().with_singularity(1.0)).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12, "{v}");
        // P∫_{-1}^{2} e^x/x dx = Ei(2) - Ei(-1)
        let ei2 = 4.954_234_356_001_890;
        let ei_m1 = -0.219_383_934_395_520_3;
        let v = integrate(|x: f64| x.exp() / x, -1.0, 2.0, &spec().with_singularity(0.0)).unwrap();
        assert!((v - (ei2 - ei_m1)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn removable_singularity_reproduces_ordinary_integral() {
        let s = 0.8;
        let f = |x: f64| if x == s { 1.0 } else { (x - s).sin() / (x - s) };
        let pv = integrate(f, 0.0, 3.0, &spec().with_singularity(s)).unwrap();
        let plain = integrate(f, 0.0, 3.0, &spec()).unwrap();
        assert!((pv - plain).abs() < 1e-11, "{pv} vs {plain}");
    }

    #[test]
    fn oscillatory_tail_averaging() {
        // ∫_0^∞ sin x / x dx = π/2; the plain truncation error is ~1/cutoff.
        let f = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
        let v = integrate_semi_infinite(f, 0.0, &TailSpec::default(), &spec()).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-9, "{}", v - PI / 2.0);
    }

    #[test]
    fn rejects_invalid_specs() {
        let bad = QuadratureSpec { abs_tol: 0.0, ..spec() };
        assert!(integrate(f64::sin, 0.0, 1.0, &bad).is_err());
        let bad = spec().with_max_subdivisions(0);
        assert!(integrate(f64::sin, 0.0, 1.0, &bad).is_err());
        let outside = spec().with_singularity(2.0);
        assert!(integrate(f64::sin, 0.0, 1.0, &outside).is_err());
        let edge = spec().with_singularity(1.0);
        assert!(integrate(f64::sin, 0.0, 1.0, &edge).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let tight = spec().with_max_subdivisions(3);
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &tight);
        assert!(matches!(r, Err(Error::QuadratureDiverged { .. })));
    }
}
