//! Atom positions in the reservoir plane.
//!
//! Coordinates are dimensionless, `(ξ_x, ξ_z) = k_L (x, z)`. Sites of a
//! rectangular array are enumerated in a fixed order; that order fixes the
//! atom label `μ` used by the imprinted winding phase.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::PairGeometry;
use crate::scalar::Real;

/// Default cap on the number of sites in a generated lattice.
pub const DEFAULT_MAX_SITES: usize = 10_000;

/// A vector in the lattice plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub z: T,
}

impl<T: Real> Vec2<T> {
    pub fn new(x: T, z: T) -> Self {
        Self { x, z }
    }

    pub fn x_hat() -> Self {
        Self::new(T::one(), T::zero())
    }

    pub fn z_hat() -> Self {
        Self::new(T::zero(), T::one())
    }

    /// Unit vector at `angle` radians from `x̂` towards `ẑ`.
    pub fn from_angle(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.z * other.z
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.z)
    }

    /// In-plane unit vector orthogonal to `self` (`ẑ ↦ x̂`).
    pub fn perpendicular(self) -> Self {
        Self::new(self.z, -self.x)
    }

    fn is_unit(self) -> bool {
        (self.norm() - T::one()).abs() <= T::lit(1e3) * T::epsilon()
    }
}

impl<T: Real> std::ops::Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.z - rhs.z)
    }
}

/// Enumeration order of rectangular sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IndexOrder {
    /// `μ = i_x N_z + i_z`: z runs fastest.
    #[default]
    #[serde(rename = "z-major")]
    ZMajor,
    /// `μ = i_z N_x + i_x`: x runs fastest.
    #[serde(rename = "x-major")]
    XMajor,
}

impl FromStr for IndexOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z-major" | "z" => Ok(IndexOrder::ZMajor),
            "x-major" | "x" => Ok(IndexOrder::XMajor),
            other => Err(Error::Parse(format!("unknown index order '{other}'"))),
        }
    }
}

/// Rectangular `N_x × N_z` array with drive and polarization directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec<T> {
    pub nx: usize,
    pub nz: usize,
    /// Nearest-neighbour separation `k_L d`.
    pub spacing: T,
    /// Dipole polarization `p̂`.
    pub polarization: Vec2<T>,
    /// Drive direction `k̂_L`.
    pub drive: Vec2<T>,
    pub order: IndexOrder,
    pub max_sites: usize,
}

impl<T: Real> LatticeSpec<T> {
    /// `p̂ = x̂`, `k̂_L = ẑ`, z-major enumeration.
    pub fn new(nx: usize, nz: usize, spacing: T) -> Self {
        Self {
            nx,
            nz,
            spacing,
            polarization: Vec2::x_hat(),
            drive: Vec2::z_hat(),
            order: IndexOrder::ZMajor,
            max_sites: DEFAULT_MAX_SITES,
        }
    }

    pub fn with_drive(mut self, drive: Vec2<T>) -> Self {
        self.drive = drive;
        self
    }

    pub fn with_polarization(mut self, polarization: Vec2<T>) -> Self {
        self.polarization = polarization;
        self
    }

    /// Polarization in the plane, orthogonal to the current drive.
    pub fn with_transverse_polarization(mut self) -> Self {
        self.polarization = self.drive.perpendicular();
        self
    }

    pub fn with_order(mut self, order: IndexOrder) -> Self {
        self.order = order;
        self
    }

    pub fn len(&self) -> usize {
        self.nx.saturating_mul(self.nz)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.nz == 0 {
            return Err(Error::InvalidLattice(format!("empty lattice {}x{}", self.nx, self.nz)));
        }
        let n = self.nx.saturating_mul(self.nz);
        if n > self.max_sites {
            return Err(Error::InvalidLattice(format!(
                "{} sites exceed the limit of {}",
                n, self.max_sites
            )));
        }
        if !(self.spacing > T::zero()) || !self.spacing.is_finite() {
            return Err(Error::InvalidLattice(format!("spacing must be positive, got {}", self.spacing)));
        }
        if !self.polarization.is_unit() || !self.drive.is_unit() {
            return Err(Error::InvalidLattice("polarization and drive must be unit vectors".into()));
        }
        Ok(())
    }

    /// Linear index of grid point `(i_x, i_z)`.
    pub fn index_of(&self, ix: usize, iz: usize) -> usize {
        match self.order {
            IndexOrder::ZMajor => ix * self.nz + iz,
            IndexOrder::XMajor => iz * self.nx + ix,
        }
    }

    /// Grid point of linear index `mu`.
    pub fn grid_of(&self, mu: usize) -> (usize, usize) {
        match self.order {
            IndexOrder::ZMajor => (mu / self.nz, mu % self.nz),
            IndexOrder::XMajor => (mu % self.nx, mu / self.nx),
        }
    }
}

/// Ordered atom positions; the order defines the label `μ` (0-based here,
/// 1-based in text rows).
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSites<T> {
    positions: Vec<Vec2<T>>,
}

impl<T: Real> AtomSites<T> {
    /// Generates `(i_x ξ_s, i_z ξ_s)` in the spec's enumeration order.
    pub fn build(spec: &LatticeSpec<T>) -> Result<Self> {
        spec.validate()?;
        let positions = (0..spec.len())
            .map(|mu| {
                let (ix, iz) = spec.grid_of(mu);
                Vec2::new(T::from_usize_lossy(ix) * spec.spacing, T::from_usize_lossy(iz) * spec.spacing)
            })
            .collect();
        Ok(Self { positions })
    }

    /// Arbitrary site list; positions must be finite and pairwise distinct.
    pub fn from_positions(positions: Vec<Vec2<T>>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidLattice("no sites".into()));
        }
        if positions.iter().any(|p| !p.x.is_finite() || !p.z.is_finite()) {
            return Err(Error::InvalidLattice("non-finite site coordinate".into()));
        }
        for (i, a) in positions.iter().enumerate() {
            for (j, b) in positions.iter().enumerate().skip(i + 1) {
                if a == b {
                    return Err(Error::CoincidentSites(i, j));
                }
            }
        }
        Ok(Self { positions })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec2<T>] {
        &self.positions
    }

    pub fn get(&self, mu: usize) -> Result<Vec2<T>> {
        self.positions
            .get(mu)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: mu, len: self.len() })
    }

    /// `ξ = |r_μ - r_ν|` and `c² = (p̂·r̂_μν)²` for `μ ≠ ν`.
    pub fn pair_geometry(&self, mu: usize, nu: usize, polarization: Vec2<T>) -> Result<PairGeometry<T>> {
        if mu == nu {
            return Err(Error::SamePair(mu));
        }
        let d = self.get(mu)? - self.get(nu)?;
        let xi = d.norm();
        if xi == T::zero() {
            return Err(Error::CoincidentSites(mu.min(nu), mu.max(nu)));
        }
        let proj = polarization.dot(d) / xi;
        PairGeometry::new(xi, (proj * proj).min(T::one()))
    }

    /// Text rows `index, xi_x, xi_z` with 1-based indices.
    pub fn to_text(&self) -> String {
        let mut out = String::from("index,xi_x,xi_z\n");
        for (mu, p) in self.positions.iter().enumerate() {
            let _ = writeln!(out, "{},{:.16e},{:.16e}", mu + 1, p.x, p.z);
        }
        out
    }

    /// Parses rows written by [`AtomSites::to_text`]. A header line and
    /// `#` comments are skipped; indices must run `1..=N` in order.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut positions = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("index") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields", line_no + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)))
            };
            let index: usize = fields[0]
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)))?;
            if index != positions.len() + 1 {
                return Err(Error::Parse(format!(
                    "line {}: index {index} out of sequence",
                    line_no + 1
                )));
            }
            positions.push(Vec2::new(T::lit(parse(fields[1])?), T::lit(parse(fields[2])?)));
        }
        Self::from_positions(positions)
    }

    /// Sites relabelled by `perm`: new site `i` is old site `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: perm.len() });
        }
        let positions = perm.iter().map(|&i| self.get(i)).collect::<Result<Vec<_>>>()?;
        Self::from_positions(positions)
    }
}
