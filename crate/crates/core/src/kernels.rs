//! Pairwise RDDI coupling kernels for 1D, 2D and 3D reservoirs.
//!
//! Every kernel returns a [`PairCoupling`] whose matrix element is
//! `J = (dissipative + i·coherent) / 2` in units of the reservoir's
//! single-emitter rate `Γ` (`Γ_2D` for the planar reservoir). For the 2D
//! reservoir the pair is `(f, g)`, for free space `(γ, 2Ω)` and for a
//! waveguide `(cos ξ, sin ξ)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{bessel_j012, bessel_jy012, integrate, QuadratureSpec};

/// Photonic reservoir mediating the interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReservoirKind {
    #[serde(rename = "1d")]
    OneD,
    #[serde(rename = "2d")]
    TwoD,
    #[serde(rename = "3d")]
    ThreeD,
}

impl fmt::Display for ReservoirKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReservoirKind::OneD => "1d",
            ReservoirKind::TwoD => "2d",
            ReservoirKind::ThreeD => "3d",
        })
    }
}

impl FromStr for ReservoirKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1d" | "1" => Ok(ReservoirKind::OneD),
            "2d" | "2" => Ok(ReservoirKind::TwoD),
            "3d" | "3" => Ok(ReservoirKind::ThreeD),
            other => Err(Error::Parse(format!("unknown reservoir kind '{other}' (want 1d, 2d or 3d)"))),
        }
    }
}

/// Dimensionless separation `ξ = k_L |r_μ - r_ν|` and squared projection
/// `c² = (p̂·r̂_μν)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry<T> {
    xi: T,
    c2: T,
}

impl<T: Real> PairGeometry<T> {
    pub fn new(xi: T, c2: T) -> Result<Self> {
        if !(xi >= T::zero()) || !xi.is_finite() {
            return Err(Error::Domain { function: "PairGeometry::xi", x: xi.to_f64_lossy() });
        }
        if !(c2 >= T::zero() && c2 <= T::one()) {
            return Err(Error::Domain { function: "PairGeometry::c2", x: c2.to_f64_lossy() });
        }
        Ok(Self { xi, c2 })
    }

    /// Polarization parallel to the separation.
    pub fn parallel(xi: T) -> Result<Self> {
        Self::new(xi, T::one())
    }

    /// Polarization perpendicular to the separation.
    pub fn perpendicular(xi: T) -> Result<Self> {
        Self::new(xi, T::zero())
    }

    pub fn xi(&self) -> T {
        self.xi
    }

    pub fn c2(&self) -> T {
        self.c2
    }
}

/// Dissipative and coherent parts of a pair coupling, in units of `Γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCoupling<T> {
    pub dissipative: T,
    pub coherent: T,
}

impl<T: Real> PairCoupling<T> {
    /// Matrix element `(dissipative + i coherent) / 2`.
    pub fn element(&self) -> Complex<T> {
        Complex::new(self.dissipative, self.coherent) / T::lit(2.0)
    }
}

/// `f(ξ) = 2[J_0(ξ) - J_1(ξ)/ξ + c² J_2(ξ)]`, with `f(0) = 1`.
pub fn f2d<T: Real>(geom: PairGeometry<T>) -> T {
    let xi = geom.xi;
    if xi == T::zero() {
        return T::one();
    }
    let [j0, j1, j2] = bessel_j012(xi);
    T::lit(2.0) * (j0 - j1 / xi + geom.c2 * j2)
}

/// `g(ξ) = 2Y_0 - 2Y_1/ξ + 2c² Y_2 - 4(1 - 2c²)/(πξ²)`; diverges
/// logarithmically at `ξ = 0`.
///
/// The `1/ξ²` pieces cancel analytically, so roughly `1e-16/ξ²` of absolute
/// accuracy is lost at small separations.
pub fn g2d<T: Real>(geom: PairGeometry<T>) -> Result<T> {
    let xi = geom.xi;
    if xi == T::zero() {
        return Err(Error::Domain { function: "g2d", x: 0.0 });
    }
    let (_, [y0, y1, y2]) = bessel_jy012(xi);
    let two = T::lit(2.0);
    let c2 = geom.c2;
    Ok(two * y0 - two * y1 / xi + two * c2 * y2
        - T::lit(4.0) / (T::PI() * xi * xi) * (T::one() - two * c2))
}

/// 2D planar reservoir coupling `(f, g)`.
pub fn kernel2d<T: Real>(geom: PairGeometry<T>) -> Result<PairCoupling<T>> {
    Ok(PairCoupling { dissipative: f2d(geom), coherent: g2d(geom)? })
}

/// `cos ξ / ξ² - sin ξ / ξ³`, expanded near the origin where the two terms cancel.
fn near_field_dissipative<T: Real>(xi: T) -> T {
    if xi < T::lit(0.5) {
        // Σ_{k≥1} (-1)^k 2k ξ^(2k-2) / (2k+1)!
        let x2 = xi * xi;
        let mut sum = T::zero();
        let mut power = T::one();
        let mut fact = T::lit(6.0); // 3!
        for k in 1..=9u32 {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            sum = sum + sign * T::lit((2 * k) as f64) * power / fact;
            power = power * x2;
            fact = fact * T::lit(((2 * k + 2) * (2 * k + 3)) as f64);
        }
        sum
    } else {
        let (s, c) = xi.sin_cos();
        c / (xi * xi) - s / (xi * xi * xi)
    }
}

fn sinc<T: Real>(xi: T) -> T {
    if xi.abs() < T::lit(1e-4) {
        T::one() - xi * xi / T::lit(6.0)
    } else {
        xi.sin() / xi
    }
}

/// Free-space collective decay rate
/// `γ = (3/2){(1-c²) sin ξ/ξ + (1-3c²)(cos ξ/ξ² - sin ξ/ξ³)}`, with `γ(0) = 1`.
pub fn dissipative3d<T: Real>(geom: PairGeometry<T>) -> T {
    let c2 = geom.c2;
    let one = T::one();
    T::lit(1.5) * ((one - c2) * sinc(geom.xi) + (one - T::lit(3.0) * c2) * near_field_dissipative(geom.xi))
}

/// Free-space collective frequency shift
/// `Ω = (3/4){-(1-c²) cos ξ/ξ + (1-3c²)(sin ξ/ξ² + cos ξ/ξ³)}`; divergent at `ξ = 0`.
pub fn shift3d<T: Real>(geom: PairGeometry<T>) -> Result<T> {
    let xi = geom.xi;
    if xi == T::zero() {
        return Err(Error::Domain { function: "shift3d", x: 0.0 });
    }
    let c2 = geom.c2;
    let one = T::one();
    let (s, c) = xi.sin_cos();
    Ok(T::lit(0.75)
        * (-(one - c2) * c / xi + (one - T::lit(3.0) * c2) * (s / (xi * xi) + c / (xi * xi * xi))))
}

/// Free-space coupling `(γ, 2Ω)`.
pub fn kernel3d<T: Real>(geom: PairGeometry<T>) -> Result<PairCoupling<T>> {
    Ok(PairCoupling { dissipative: dissipative3d(geom), coherent: T::lit(2.0) * shift3d(geom)? })
}

/// Waveguide coupling `(cos ξ, sin ξ)`, i.e. `J = e^{iξ}/2`.
pub fn kernel1d<T: Real>(xi: T) -> PairCoupling<T> {
    let (s, c) = xi.sin_cos();
    PairCoupling { dissipative: c, coherent: s }
}

/// Off-diagonal coupling for any reservoir.
pub fn coupling<T: Real>(kind: ReservoirKind, geom: PairGeometry<T>) -> Result<PairCoupling<T>> {
    match kind {
        ReservoirKind::OneD => Ok(kernel1d(geom.xi)),
        ReservoirKind::TwoD => kernel2d(geom),
        ReservoirKind::ThreeD => kernel3d(geom),
    }
}

/// Angular-average form of the 2D dissipative kernel,
/// `(1/π) ∫_0^{2π} [1 - cos²(θ - θ')] cos(ξ cos θ) dθ` with `cos²θ' = c²`,
/// evaluated by adaptive quadrature. Independent of the Bessel closed form.
pub fn quadrature_f2d<T: Real>(geom: PairGeometry<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let theta_p = geom.c2.sqrt().min(T::one()).acos();
    let (sp, cp) = theta_p.sin_cos();
    let xi = geom.xi;
    let integrand = move |theta: T| {
        let (s, c) = theta.sin_cos();
        let proj = c * cp + s * sp;
        (T::one() - proj * proj) * (xi * c).cos()
    };
    // split at the stationary points of cos θ so each panel is monotone
    let pi = T::PI();
    let half = integrate(integrand, T::zero(), pi, spec)?;
    let other = integrate(integrand, pi, T::lit(2.0) * pi, spec)?;
    Ok((half + other) / pi)
}

/// Names of the closed forms shipped by this module; each must appear in
/// [`crate::oracles::COVERAGE`].
pub const CLOSED_FORMS: &[&str] = &["f2d", "g2d", "dissipative3d", "shift3d", "kernel1d"];

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn geom(xi: f64, c2: f64) -> PairGeometry<f64> {
        PairGeometry::new(xi, c2).unwrap()
    }

    #[test]
    fn f2d_origin_limit() {
        for c2 in [0.0, 0.3, 1.0] {
            assert_eq!(f2d(geom(0.0, c2)), 1.0);
            assert!((f2d(geom(1e-8, c2)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn g2d_rejects_origin() {
        assert!(g2d(geom(0.0, 0.5)).is_err());
    }

    #[test]
    fn near_field_shift_magnitudes() {
        let xi = 2.0 * PI * 0.01;
        let par = g2d(geom(xi, 1.0)).unwrap().abs();
        let perp = g2d(geom(xi, 0.0)).unwrap().abs();
        assert!((par - 2.1).abs() <= 0.15, "{par}");
        assert!((perp - 1.5).abs() <= 0.15, "{perp}");
    }

    #[test]
    fn g2d_small_separation_series() {
        // g = (2/π) ln(ξ/2) + (1 + 2γ - 2c²)/π + O(ξ² ln ξ)
        let gamma = <f64 as Real>::EULER_GAMMA;
        let xi: f64 = 1e-4;
        for c2 in [0.0, 0.5, 1.0] {
            let series = 2.0 / PI * (xi / 2.0).ln() + (1.0 + 2.0 * gamma - 2.0 * c2) / PI;
            let g = g2d(geom(xi, c2)).unwrap();
            assert!((g - series).abs() < 1e-6, "c2={c2}: {g} vs {series}");
        }
    }

    #[test]
    fn free_space_values() {
        assert!((dissipative3d(geom(0.0, 0.4)) - 1.0).abs() < 1e-15);
        assert!((dissipative3d(geom(1e-3, 0.4)) - 1.0).abs() < 1e-6);
        let g = dissipative3d(geom(PI, 1.0));
        assert!((g - 3.0 / (PI * PI)).abs() < 1e-14, "{g}");
        assert!(shift3d(geom(0.0, 0.0)).is_err());
        // series and closed form agree across the switch-over
        let below = dissipative3d(geom(0.5 - 1e-12, 0.2));
        let above = dissipative3d(geom(0.5 + 1e-12, 0.2));
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn free_space_far_field_envelope() {
        // envelope of the c² = 0 rate is (3/2)/ξ
        let peak = |lo: f64| {
            (0..2000)
                .map(|i| lo + 2.0 * PI * i as f64 / 2000.0)
                .map(|xi| dissipative3d(geom(xi, 0.0)).abs() * xi)
                .fold(0.0, f64::max)
        };
        for lo in [200.0, 2000.0] {
            assert!((peak(lo) - 1.5).abs() < 0.02, "{}", peak(lo));
        }
    }

    #[test]
    fn waveguide_kernel() {
        let k0 = kernel1d(0.0);
        assert_eq!((k0.dissipative, k0.coherent), (1.0, 0.0));
        let k = kernel1d(PI / 2.0);
        assert!(k.dissipative.abs() < 1e-15 && (k.coherent - 1.0).abs() < 1e-15);
        let k2 = kernel1d(2.0 * PI);
        assert!((k2.dissipative - 1.0).abs() < 1e-15 && k2.coherent.abs() < 1e-15);
    }

    #[test]
    fn quadrature_oracle_examples() {
        let spec = QuadratureSpec::new(1e-13, 1e-13);
        for c2 in [0.0, 0.5, 1.0] {
            assert!((quadrature_f2d(geom(0.0, c2), &spec).unwrap() - 1.0).abs() < 1e-13);
        }
        for (xi, c2, tol) in [(1.0, 1.0, 1e-9), (5.0, 0.0, 1e-9), (40.0, 0.0, 1e-8)] {
            let q = quadrature_f2d(geom(xi, c2), &spec).unwrap();
            assert!((q - f2d(geom(xi, c2))).abs() < tol, "xi={xi}");
        }
    }

    #[test]
    fn geometry_validation() {
        assert!(PairGeometry::new(-1.0, 0.0).is_err());
        assert!(PairGeometry::new(1.0, 1.5).is_err());
        assert!(PairGeometry::new(1.0, -0.1).is_err());
        assert!(PairGeometry::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn reservoir_kind_parsing() {
        assert_eq!("2D".parse::<ReservoirKind>().unwrap(), ReservoirKind::TwoD);
        assert_eq!("3d".parse::<ReservoirKind>().unwrap(), ReservoirKind::ThreeD);
        assert!("4d".parse::<ReservoirKind>().is_err());
        assert_eq!(ReservoirKind::OneD.to_string(), "1d");
    }

    #[test]
    fn element_convention() {
        let k = PairCoupling { dissipative: 0.4, coherent: -1.2 };
        assert_eq!(k.element(), Complex::new(0.2, -0.6));
    }
}
