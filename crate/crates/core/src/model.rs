//! Lattice model of the discretized 1+1 dimensional Dirac field.
//!
//! The two-component Dirac field on a line becomes a single staggered chain:
//! even sites carry on-site energy +M, odd sites -M, nearest neighbors are
//! coupled by -J/2, and an external potential Phi(x) is sampled on the sites
//!
//! ```text
//! H = -(J/2) sum_n (c_n^dag c_{n+1} + h.c.) + sum_n (Phi_n + (-1)^n M) n_n
//! ```
//!
//! with sites at x_n = (n - N/2) l so symmetric potentials stay symmetric on
//! the grid. The free dispersion is E(p) = sqrt(M^2 + cos^2(l p)/l^2) over the
//! reduced zone |p| <= pi/(2 l), and the 2x2 momentum kernel
//! [[M, cos(l p)/l], [cos(l p)/l, -M]] is diagonalized by the orthogonal U(p)
//! built from sqrt((E +- M)/2E).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // provides f64 math in no_std builds; inherent std methods win under test
use num_traits::Float;

use crate::{CoreError, Result};

/// Boundary condition of the chain. Only open ends are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
}

/// The staggered tight-binding chain representing the discretized Dirac field.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainModel {
    /// Number of sites N (even, at least 4).
    pub num_sites: usize,
    /// Lattice spacing l in natural units.
    pub spacing: f64,
    /// Staggered mass M (non-negative).
    pub mass: f64,
    /// Hopping strength J; the Hamiltonian prefactor is -J/2.
    pub hopping: f64,
    /// Boundary condition.
    pub boundary: Boundary,
}

impl ChainModel {
    /// Build a chain with the default hopping J = 1/l, which makes the
    /// nearest-neighbor amplitude J/2 = 1/(2 l).
    pub fn new(num_sites: usize, spacing: f64, mass: f64) -> Result<Self> {
        if spacing <= 0.0 || !spacing.is_finite() {
            return Err(CoreError::Config(String::from(
                "chain spacing must be positive and finite",
            )));
        }
        Self::with_hopping(num_sites, spacing, mass, 1.0 / spacing)
    }

    /// Build a chain with an explicit hopping J.
    pub fn with_hopping(num_sites: usize, spacing: f64, mass: f64, hopping: f64) -> Result<Self> {
        if num_sites < 4 || num_sites % 2 != 0 {
            return Err(CoreError::Config(format!(
                "chain needs an even number of at least 4 sites, got {}",
                num_sites
            )));
        }
        if spacing <= 0.0 || !spacing.is_finite() {
            return Err(CoreError::Config(String::from(
                "chain spacing must be positive and finite",
            )));
        }
        if mass < 0.0 || !mass.is_finite() {
            return Err(CoreError::Config(String::from(
                "chain mass must be non-negative and finite",
            )));
        }
        if hopping <= 0.0 || !hopping.is_finite() {
            return Err(CoreError::Config(String::from(
                "chain hopping must be positive and finite",
            )));
        }
        Ok(ChainModel {
            num_sites,
            spacing,
            mass,
            hopping,
            boundary: Boundary::Open,
        })
    }

    /// Position of site n, centered so that x = 0 sits mid-chain.
    pub fn position(&self, n: usize) -> f64 {
        (n as f64 - self.num_sites as f64 / 2.0) * self.spacing
    }

    /// Staggered on-site mass term (+M on even sites, -M on odd sites).
    pub fn staggered_mass(&self, n: usize) -> f64 {
        if n % 2 == 0 {
            self.mass
        } else {
            -self.mass
        }
    }

    /// Edge of the reduced Brillouin zone, pi / (2 l).
    pub fn zone_edge(&self) -> f64 {
        core::f64::consts::FRAC_PI_2 / self.spacing
    }
}

/// External potential shapes sampled onto the chain.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialShape {
    /// No potential.
    Zero,
    /// Attractive Woods-Saxon well Phi(x) = -W / (1 + exp(a (|x| - L))).
    WoodsSaxon { depth: f64, steepness: f64, half_width: f64 },
    /// Single-site potential phi delta_{n,site} / l (lattice delta).
    DeltaSite { strength: f64, site: usize },
    /// Linear potential Phi(x) = E x inside a site window, clamped constant
    /// outside it (Wannier-Stark configuration).
    Linear { field: f64, window: (usize, usize) },
}

/// A potential shape plus the time envelope it is ramped with.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub shape: PotentialShape,
    pub ramp: Option<RampProfile>,
}

impl PotentialSpec {
    pub fn staticly(shape: PotentialShape) -> Self {
        PotentialSpec { shape, ramp: None }
    }

    pub fn ramped(shape: PotentialShape, ramp: RampProfile) -> Self {
        PotentialSpec { shape, ramp: Some(ramp) }
    }
}

/// Shape of the switching envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RampShape {
    /// Piecewise-linear ramp (C0).
    Linear,
    /// Cosine ramp sin^2(pi t / 2 t_on) style, continuously differentiable.
    SmoothCos,
}

/// Time envelope: 0 -> 1 during `t_on`, plateau at 1 for `t_plateau`,
/// 1 -> 0 during `t_off`. The envelope is exactly 0 at t = 0 and at the total
/// duration, and exactly 1 on the plateau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampProfile {
    pub t_on: f64,
    pub t_plateau: f64,
    pub t_off: f64,
    pub shape: RampShape,
}

impl RampProfile {
    pub fn new(t_on: f64, t_plateau: f64, t_off: f64, shape: RampShape) -> Result<Self> {
        if t_on < 0.0 || t_plateau < 0.0 || t_off < 0.0 {
            return Err(CoreError::Config(String::from(
                "ramp durations must be non-negative",
            )));
        }
        Ok(RampProfile { t_on, t_plateau, t_off, shape })
    }

    /// A symmetric cycle of total duration T: quarter ramp up, half plateau,
    /// quarter ramp down, with the smooth cosine shape.
    pub fn smooth_cycle(total: f64) -> Result<Self> {
        if total <= 0.0 {
            return Err(CoreError::Config(String::from(
                "ramp cycle duration must be positive",
            )));
        }
        RampProfile::new(0.25 * total, 0.5 * total, 0.25 * total, RampShape::SmoothCos)
    }

    /// Total duration of the envelope.
    pub fn total(&self) -> f64 {
        self.t_on + self.t_plateau + self.t_off
    }

    /// Envelope value in [0, 1] at time t.
    pub fn envelope(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let t1 = self.t_on;
        let t2 = self.t_on + self.t_plateau;
        let t3 = self.total();
        if t >= t3 {
            return 0.0;
        }
        if t < t1 {
            let u = t / t1;
            match self.shape {
                RampShape::Linear => u,
                RampShape::SmoothCos => {
                    let s = (core::f64::consts::FRAC_PI_2 * u).sin();
                    s * s
                }
            }
        } else if t <= t2 {
            1.0
        } else {
            let u = (t3 - t) / self.t_off;
            match self.shape {
                RampShape::Linear => u,
                RampShape::SmoothCos => {
                    let s = (core::f64::consts::FRAC_PI_2 * u).sin();
                    s * s
                }
            }
        }
    }
}

/// Symmetric tridiagonal operator: the single-particle Hamiltonian of the
/// chain. `diagonal[n] = Phi_n + (-1)^n M`, `off_diagonal[n] = -J/2` couples
/// sites n and n+1.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// y = H x.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diagonal[i] * x[i];
            if i > 0 {
                acc += self.off_diagonal[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off_diagonal[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// Largest row sum, an upper bound on the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        let n = self.len();
        let mut best: f64 = 0.0;
        for i in 0..n {
            let mut row = self.diagonal[i].abs();
            if i > 0 {
                row += self.off_diagonal[i - 1].abs();
            }
            if i + 1 < n {
                row += self.off_diagonal[i].abs();
            }
            best = best.max(row);
        }
        best
    }
}

/// Sample a potential shape on the chain sites, Phi_n = Phi(x_n).
pub fn sample_potential(spec: &PotentialShape, chain: &ChainModel) -> Result<Vec<f64>> {
    let n = chain.num_sites;
    let mut phi = Vec::with_capacity(n);
    match spec {
        PotentialShape::Zero => phi.resize(n, 0.0),
        PotentialShape::WoodsSaxon { depth, steepness, half_width } => {
            if *steepness <= 0.0 || *half_width <= 0.0 {
                return Err(CoreError::Config(String::from(
                    "Woods-Saxon needs positive steepness and half-width",
                )));
            }
            for i in 0..n {
                let x = chain.position(i);
                phi.push(-depth / (1.0 + (steepness * (x.abs() - half_width)).exp()));
            }
        }
        PotentialShape::DeltaSite { strength, site } => {
            if *site >= n {
                return Err(CoreError::Config(format!(
                    "delta site {} outside chain of {} sites",
                    site, n
                )));
            }
            phi.resize(n, 0.0);
            phi[*site] = strength / chain.spacing;
        }
        PotentialShape::Linear { field, window } => {
            let (lo, hi) = *window;
            if lo > hi || hi >= n {
                return Err(CoreError::Config(format!(
                    "linear window ({}, {}) outside chain of {} sites",
                    lo, hi, n
                )));
            }
            let x_lo = chain.position(lo);
            let x_hi = chain.position(hi);
            for i in 0..n {
                let x = chain.position(i).clamp(x_lo, x_hi);
                phi.push(field * x);
            }
        }
    }
    Ok(phi)
}

/// Assemble the single-particle Hamiltonian from the chain and the sampled
/// potential.
pub fn build_hamiltonian(chain: &ChainModel, phi: &[f64]) -> Result<TridiagonalOperator> {
    let n = chain.num_sites;
    if phi.len() != n {
        return Err(CoreError::Config(format!(
            "potential sampled on {} sites but the chain has {}",
            phi.len(),
            n
        )));
    }
    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        diagonal.push(phi[i] + chain.staggered_mass(i));
    }
    let mut off_diagonal = Vec::with_capacity(n - 1);
    off_diagonal.resize(n - 1, -0.5 * chain.hopping);
    Ok(TridiagonalOperator { diagonal, off_diagonal })
}

/// Free dispersion E(p) = sqrt(M^2 + cos^2(l p) / l^2) on the reduced zone.
pub fn free_dispersion(p: f64, mass: f64, spacing: f64) -> f64 {
    let c = (spacing * p).cos();
    (mass * mass + c * c / (spacing * spacing)).sqrt()
}

/// Orthogonal 2x2 transformation diagonalizing the momentum kernel
/// K(p) = [[M, cos(l p)/l], [cos(l p)/l, -M]]:
///
/// ```text
/// U(p) = 1/sqrt(2E) [[ sqrt(E+M), sqrt(E-M)],
///                    [-sqrt(E-M), sqrt(E+M)]]
/// ```
///
/// The rows of U are the +E and -E eigenvectors, so U K U^T = diag(E, -E).
/// Returned row-major as [[u00, u01], [u10, u11]].
pub fn momentum_diagonalizer(p: f64, mass: f64, spacing: f64) -> Result<[[f64; 2]; 2]> {
    let e = free_dispersion(p, mass, spacing);
    let scale = mass.max(1.0 / spacing);
    if e <= 1e-12 * scale {
        return Err(CoreError::Regime(String::from(
            "momentum kernel degenerate: E(p) = 0 (massless zone edge)",
        )));
    }
    let up = ((e + mass) / (2.0 * e)).sqrt();
    let um = ((e - mass).max(0.0) / (2.0 * e)).sqrt();
    Ok([[up, um], [-um, up]])
}
