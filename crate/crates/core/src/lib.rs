//! Collective spontaneous emission of two-level atoms coupled through
//! resonant dipole-dipole interactions (RDDI).
//!
//! The crate covers the whole single-excitation pipeline:
//!
//! * [`specfun`]: Bessel `J_n`, `Y_n`, Struve `H_n` and adaptive (principal
//!   value) quadrature.
//! * [`kernels`]: closed-form pair couplings for 1D, 2D and 3D reservoirs.
//! * [`lattice`]: rectangular atom arrays and pair geometry.
//! * [`collective`]: coupling matrix, symmetric-state rates, eigen-spectrum
//!   and phase-imprinted dynamics.
//! * [`oracles`]: independent numerical checks of every closed form.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`). Rates are in units
//! of the single-emitter decay constant `Γ`, which is fixed to one; times are
//! in units of `1/Γ`.
//!
//! Rate convention: the collective decay constant `Γ_N` and the eigen-decay
//! constants `Γ_l = -2 Re λ_l` are defined at the intensity level, so a single
//! atom decays as `|A(t)|² = exp(-Γ t)` with `Γ_N = Γ_1 = 1`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` also rejects NaN

pub mod collective;
pub mod error;
pub mod kernels;
pub mod lattice;
pub mod linalg;
pub mod ode;
pub mod oracles;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

/// Single-precision aliases.
pub mod f32 {
    pub type CouplingMatrix = crate::collective::CouplingMatrix<f32>;
    pub type Spectrum = crate::collective::Spectrum<f32>;
    pub type AtomSites = crate::lattice::AtomSites<f32>;
    pub type LatticeSpec = crate::lattice::LatticeSpec<f32>;
    pub type PairGeometry = crate::kernels::PairGeometry<f32>;
}

pub type CouplingMatrix = collective::CouplingMatrix<f64>;
pub type Spectrum = collective::Spectrum<f64>;
pub type StateCoefficients = collective::StateCoefficients<f64>;
pub type TimeSeries = collective::TimeSeries<f64>;
pub type CollectiveRates = collective::CollectiveRates<f64>;
pub type AtomSites = lattice::AtomSites<f64>;
pub type LatticeSpec = lattice::LatticeSpec<f64>;
pub type PairGeometry = kernels::PairGeometry<f64>;
pub type PairCoupling = kernels::PairCoupling<f64>;
pub type QuadratureSpec = specfun::QuadratureSpec<f64>;
pub type OracleReport = oracles::OracleReport<f64>;
pub type Complex = num_complex::Complex<f64>;
