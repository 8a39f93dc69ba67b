//! Analytic bound-state conditions used as independent references for the
//! lattice solvers.
//!
//! Two exactly solvable potentials are covered.
//!
//! **Smooth square-like well** (Woods-Saxon form). For the continuum
//! two-component problem with potential `-W / (1 + exp(a (|x| - L)))`, a
//! bound state of energy `E` inside the mass gap satisfies a transcendental
//! condition built from Euler beta functions. With
//!
//! ```text
//! s = sqrt(M^2 - E^2) / a,     g = i sqrt((E + W)^2 - M^2) / a,
//! lam = i W / a,
//! ```
//!
//! the matching of the decaying exterior solution to the interior
//! hypergeometric solution across both walls reduces to
//!
//! ```text
//! d = 2 ln B(-2g, g + s - lam) - 2 ln B(2g, -g + s + lam)
//!     - [ 4 g a L + ln((s - g)^2 - lam^2) - ln((s + g)^2 - lam^2) ]
//! ```
//!
//! being a multiple of 2 pi i. The residual scalar combines the real part of
//! `d` with its imaginary part wrapped to `[-pi, pi)`; bound-state energies
//! are its zeros. As the depth `W` grows, the lowest zero walks down through
//! the gap and reaches the lower edge `E = -M` at a finite critical depth,
//! beyond which the level no longer exists as a discrete gap state.
//!
//! **Single-site impurity** (lattice delta). A potential `phi * J` placed on
//! one site of the staggered chain binds exactly one state in the gap. Its
//! energy is the unique in-gap root of the cubic
//!
//! ```text
//! (M - lam) (M^2 + J^2 - lam^2) = phi^2 J^2 (M + lam)
//! ```
//!
//! which is even in `phi`. The sign of `phi` selects which sublattice hosts
//! the dominant weight and hence which band edge the level detaches from:
//! attractive `phi < 0` on a `+M` site pulls a level down from the upper
//! edge, while `phi > 0` pushes one up from the lower edge (energy
//! `-lam_cubic` by the chain's chiral symmetry). The momentum-space profile
//! of the detached state on the upper-edge branch is
//!
//! ```text
//! A(p) = c (lam + M) / D(p),   B(p) = c J cos(l p) / D(p),
//! D(p) = lam^2 - M^2 - J^2 cos^2(l p),
//! ```
//!
//! with `c` fixed by normalization; its zone average obeys `Bbar = 0` and
//! the closed form `I0 = <1/D> = -1 / (sqrt(M^2 - lam^2) sqrt(M^2 + J^2 - lam^2))`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // provides f64 math in no_std builds; inherent std methods win under test
use num_traits::Float;

use crate::cgamma::ln_beta;
use crate::{CoreError, Result};

/// Parameters of the smooth square-like well `-W / (1 + exp(a (|x| - L)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WsParameters {
    /// Well depth `W > 0` (the potential at the center is close to `-W`).
    pub depth: f64,
    /// Wall steepness `a > 0`; the wall width is of order `1/a`.
    pub steepness: f64,
    /// Half-width `L > 0` of the flat interior region.
    pub half_width: f64,
    /// Fermion mass `M > 0` (half the spectral gap).
    pub mass: f64,
}

impl WsParameters {
    /// Validates positivity and finiteness of all parameters
    /// (`depth >= 0` is allowed so that the no-well limit stays callable).
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("depth", self.depth),
            ("steepness", self.steepness),
            ("half_width", self.half_width),
            ("mass", self.mass),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(CoreError::Config(format!(
                    "well parameter {name} must be finite, got {value}"
                )));
            }
        }
        if self.depth < 0.0 {
            return Err(CoreError::Config(format!(
                "well depth must be non-negative, got {}",
                self.depth
            )));
        }
        if self.steepness <= 0.0 || self.half_width <= 0.0 || self.mass <= 0.0 {
            return Err(CoreError::Config(format!(
                "well steepness, half_width and mass must be positive, got a = {}, L = {}, M = {}",
                self.steepness, self.half_width, self.mass
            )));
        }
        Ok(())
    }
}

/// Wraps an angle to the half-open interval `[-pi, pi)`.
fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = (x + PI) % two_pi;
    if y < 0.0 {
        y += two_pi;
    }
    y - PI
}

/// Residual of the bound-state matching condition at gap energy `energy`.
///
/// Zero exactly at bound-state energies. Requires `-M < energy < M`.
/// Returns a numeric error if the underlying special functions overflow or
/// hit a pole (this happens for `depth = 0`, where no bound state exists).
pub fn ws_residual(energy: f64, params: &WsParameters) -> Result<f64> {
    params.validate()?;
    let m = params.mass;
    if !(energy > -m && energy < m) {
        return Err(CoreError::Config(format!(
            "bound-state energy must lie strictly inside the gap (-{m}, {m}), got {energy}"
        )));
    }
    let a = params.steepness;
    let w = params.depth;
    let l = params.half_width;

    // s is real and positive in the gap.
    let s = Complex64::new((m * m - energy * energy).sqrt() / a, 0.0);
    // g = i sqrt((E + W)^2 - M^2) / a with the principal square-root branch:
    // purely imaginary when the interior is propagating, real negative when
    // it is evanescent.
    let gsq = (energy + w) * (energy + w) - m * m;
    let g = if gsq >= 0.0 {
        Complex64::new(0.0, gsq.sqrt() / a)
    } else {
        Complex64::new(-(-gsq).sqrt() / a, 0.0)
    };
    let lam = Complex64::new(0.0, w / a);

    let term_beta = 2.0 * (ln_beta(-2.0 * g, g + s - lam)? - ln_beta(2.0 * g, -g + s + lam)?);
    let ratio = ((s - g) * (s - g) - lam * lam).ln() - ((s + g) * (s + g) - lam * lam).ln();
    let d = term_beta - (4.0 * g * a * l + ratio);
    let residual = d.re + wrap_angle(d.im);
    if !residual.is_finite() {
        return Err(CoreError::Numeric(format!(
            "bound-state residual is not finite at E = {energy} (W = {w})"
        )));
    }
    Ok(residual)
}

/// Number of grid points used to scan the gap for sign changes.
const WS_SCAN_POINTS: usize = 10_000;
/// Bisection refinements per bracketed root.
const WS_BISECT_STEPS: usize = 60;
/// A converged root only counts when the residual magnitude is this small;
/// sign changes caused by the phase wrap carry residuals of order pi and
/// are rejected by this filter.
const WS_ROOT_RESIDUAL_TOL: f64 = 1e-6;
/// Exclusion radius around the spurious branch point at `E = M - W`,
/// where the interior momentum vanishes.
const WS_BRANCH_POINT_RADIUS: f64 = 1e-5;

/// All bound-state energies in the gap, ascending.
///
/// Scans the open interval `(-M, M)` on a uniform grid, brackets sign
/// changes of the residual, refines each by bisection, and keeps roots
/// whose residual is genuinely small and which do not sit on the branch
/// point of the interior momentum. Returns an empty vector when the well
/// binds nothing (for example `depth = 0`).
pub fn solve_ws_bound_states(params: &WsParameters) -> Result<Vec<f64>> {
    params.validate()?;
    let m = params.mass;
    let lo = -m * (1.0 - 1e-9);
    let hi = m * (1.0 - 1e-9);
    let n = WS_SCAN_POINTS;
    let step = (hi - lo) / (n - 1) as f64;

    let eval = |e: f64| -> Option<f64> { ws_residual(e, params).ok() };

    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let e = lo + step * i as f64;
        let r = match eval(e) {
            Some(v) => v,
            None => {
                prev = None;
                continue;
            }
        };
        if let Some((e_prev, r_prev)) = prev {
            if r_prev * r <= 0.0 && r_prev != 0.0 {
                let (mut a, mut b, mut fa) = (e_prev, e, r_prev);
                for _ in 0..WS_BISECT_STEPS {
                    let mid = 0.5 * (a + b);
                    let fm = match eval(mid) {
                        Some(v) => v,
                        None => break,
                    };
                    if fa * fm <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                let root = 0.5 * (a + b);
                let ok_residual = eval(root).map(f64::abs).unwrap_or(f64::INFINITY)
                    < WS_ROOT_RESIDUAL_TOL;
                let off_branch_point =
                    (root - (m - params.depth)).abs() > WS_BRANCH_POINT_RADIUS;
                if ok_residual && off_branch_point {
                    roots.push(root);
                }
            }
        }
        prev = Some((e, r));
    }
    roots.sort_by(|x, y| x.partial_cmp(y).expect("residual roots are finite"));
    Ok(roots)
}

/// Critical depth at which the lowest bound state reaches the lower gap
/// edge `E = -M`.
///
/// Evaluates the matching residual at the probe energy `-M (1 - edge_offset)`
/// and bisects it in the depth over `[depth_lo, depth_hi]`. The bracket must
/// straddle the crossing. Smaller `edge_offset` probes closer to the edge
/// and converges to the true critical depth from below.
pub fn ws_critical_depth(
    steepness: f64,
    half_width: f64,
    mass: f64,
    depth_lo: f64,
    depth_hi: f64,
    edge_offset: f64,
) -> Result<f64> {
    if !(edge_offset > 0.0 && edge_offset < 1.0) {
        return Err(CoreError::Config(format!(
            "edge_offset must lie in (0, 1), got {edge_offset}"
        )));
    }
    if !(depth_lo > 0.0 && depth_hi > depth_lo) {
        return Err(CoreError::Config(format!(
            "invalid depth bracket [{depth_lo}, {depth_hi}]"
        )));
    }
    let probe = -mass * (1.0 - edge_offset);
    let residual_at = |w: f64| -> Result<f64> {
        ws_residual(
            probe,
            &WsParameters {
                depth: w,
                steepness,
                half_width,
                mass,
            },
        )
    };
    let f_lo = residual_at(depth_lo)?;
    let f_hi = residual_at(depth_hi)?;
    if f_lo * f_hi > 0.0 {
        return Err(CoreError::Regime(format!(
            "critical depth is not bracketed by [{depth_lo}, {depth_hi}]: \
             residuals {f_lo} and {f_hi} share a sign"
        )));
    }
    let (mut a, mut b, mut fa) = (depth_lo, depth_hi, f_lo);
    for _ in 0..WS_BISECT_STEPS {
        let mid = 0.5 * (a + b);
        let fm = residual_at(mid)?;
        if fa * fm <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Continuum limit of the single-site impurity level: `M (1 - phi^2) / (1 + phi^2)`.
pub fn continuum_delta_energy(phi: f64, mass: f64) -> f64 {
    mass * (1.0 - phi * phi) / (1.0 + phi * phi)
}

/// Which band edge the impurity level detaches from as `|phi|` grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapBranch {
    /// Level emerges at `+M` and moves downward (`phi <= 0` on a `+M` site).
    FromUpperEdge,
    /// Level emerges at `-M` and moves upward (`phi > 0`, equivalently an
    /// attractive impurity on a `-M` site by chiral symmetry).
    FromLowerEdge,
}

/// In-gap root of the impurity cubic, with its branch label.
///
/// Solves `lam^3 - M lam^2 - (M^2 + J^2 + phi^2 J^2) lam + M (M^2 + J^2 - phi^2 J^2) = 0`
/// by the closed-form trigonometric method for three real roots and keeps
/// the unique root inside the closed gap `[-M, M]`; uniqueness makes this
/// selection identical to tracking the level continuously from `phi = 0`.
/// The signed energy is `+lam` on the upper-edge branch (`phi <= 0`) and
/// `-lam` on the lower-edge branch (`phi > 0`).
pub fn lattice_delta_energy(phi: f64, mass: f64, hopping: f64) -> Result<(f64, GapBranch)> {
    if !phi.is_finite() || !mass.is_finite() || !hopping.is_finite() {
        return Err(CoreError::Config(format!(
            "impurity parameters must be finite, got phi = {phi}, M = {mass}, J = {hopping}"
        )));
    }
    if mass < 0.0 || hopping <= 0.0 {
        return Err(CoreError::Config(format!(
            "impurity cubic requires M >= 0 and J > 0, got M = {mass}, J = {hopping}"
        )));
    }
    let branch = if phi > 0.0 {
        GapBranch::FromLowerEdge
    } else {
        GapBranch::FromUpperEdge
    };
    if phi == 0.0 {
        // The level sits exactly at the upper edge.
        return Ok((mass, branch));
    }
    let (m, j) = (mass, hopping);
    let pj2 = phi * phi * j * j;
    // Cubic lam^3 + c2 lam^2 + c1 lam + c0 = 0.
    let c2 = -m;
    let c1 = -(m * m + j * j + pj2);
    let c0 = m * (m * m + j * j - pj2);
    // Depressed form t^3 + p t + q with lam = t - c2/3.
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    if p >= 0.0 {
        return Err(CoreError::Numeric(format!(
            "impurity cubic lost its three-real-root structure (p = {p})"
        )));
    }
    let amp = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
    let theta = arg.clamp(-1.0, 1.0).acos();
    let shift = -c2 / 3.0;
    let mut in_gap: Option<f64> = None;
    let mut best_excess = f64::INFINITY;
    for k in 0..3 {
        let lam = amp * ((theta - 2.0 * PI * k as f64) / 3.0).cos() + shift;
        let excess = lam.abs() - m;
        if excess < best_excess {
            best_excess = excess;
            in_gap = Some(lam);
        }
    }
    let lam = in_gap.expect("three candidate roots were produced");
    if best_excess > 1e-9 * (m + j) {
        return Err(CoreError::Numeric(format!(
            "no in-gap root of the impurity cubic (closest overshoots the gap by {best_excess})"
        )));
    }
    let energy = match branch {
        GapBranch::FromUpperEdge => lam,
        GapBranch::FromLowerEdge => -lam,
    };
    Ok((energy, branch))
}

/// Momentum-space profile of the single-site impurity state.
#[derive(Debug, Clone)]
pub struct DeltaLatticeSolution {
    /// Signed in-gap energy of the level.
    pub lambda: f64,
    /// Which band edge the level detached from.
    pub branch: GapBranch,
    /// Momentum grid the profile is sampled on (one full period).
    pub p_grid: Vec<f64>,
    /// Upper-component amplitude `A(p)` (weight on `+M` sites).
    pub a_of_p: Vec<f64>,
    /// Lower-component amplitude `B(p)` (weight on `-M` sites).
    pub b_of_p: Vec<f64>,
    /// Zone average of `A(p)`.
    pub abar: f64,
    /// Zone average of `B(p)`.
    pub bbar: f64,
}

/// Uniform momentum grid covering one full lattice period `[-pi/l, pi/l)`.
///
/// The half-open convention makes plain averages over the grid equal to
/// periodic trapezoidal integrals, which converge spectrally for the
/// smooth periodic profiles encountered here.
pub fn delta_full_zone_grid(spacing: f64, n: usize) -> Result<Vec<f64>> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(CoreError::Config(format!(
            "lattice spacing must be positive and finite, got {spacing}"
        )));
    }
    if n < 16 {
        return Err(CoreError::Config(format!(
            "momentum grid needs at least 16 points, got {n}"
        )));
    }
    let period = 2.0 * PI / spacing;
    Ok((0..n)
        .map(|j| -0.5 * period + period * j as f64 / n as f64)
        .collect())
}

/// Computes the in-gap impurity level and its momentum profile on `p_grid`.
///
/// `p_grid` must be a uniform grid covering exactly one full period
/// `2 pi / spacing` (half-open), as produced by [`delta_full_zone_grid`];
/// this is what makes the zone averages below plain arithmetic means.
/// Requires `phi != 0` so that a detached level exists. The returned
/// profile is normalized so the zone average of `A^2 + B^2` is 1, with the
/// overall sign fixed by making the dominant average positive.
pub fn delta_momentum_profile(
    phi: f64,
    mass: f64,
    hopping: f64,
    spacing: f64,
    p_grid: &[f64],
) -> Result<DeltaLatticeSolution> {
    if phi == 0.0 {
        return Err(CoreError::Config(
            "phi = 0 leaves no detached level to profile".into(),
        ));
    }
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(CoreError::Config(format!(
            "lattice spacing must be positive and finite, got {spacing}"
        )));
    }
    let n = p_grid.len();
    if n < 16 {
        return Err(CoreError::Config(format!(
            "momentum grid needs at least 16 points, got {n}"
        )));
    }
    let period = 2.0 * PI / spacing;
    let step = p_grid[1] - p_grid[0];
    for w in p_grid.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step.abs() {
            return Err(CoreError::Config(
                "momentum grid must be uniform".into(),
            ));
        }
    }
    if (step * n as f64 - period).abs() > 1e-6 * period {
        return Err(CoreError::Config(format!(
            "momentum grid must cover one full period {period:.6e} half-open; \
             step * n = {:.6e}",
            step * n as f64
        )));
    }

    let (lambda, branch) = lattice_delta_energy(phi, mass, hopping)?;
    let (m, j) = (mass, hopping);
    let denom: Vec<f64> = p_grid
        .iter()
        .map(|&p| lambda * lambda - m * m - j * j * (spacing * p).cos().powi(2))
        .collect();
    if denom.iter().any(|&d| d == 0.0) {
        return Err(CoreError::Numeric(
            "impurity level sits exactly on a band energy".into(),
        ));
    }
    let (a_raw, b_raw): (Vec<f64>, Vec<f64>) = match branch {
        GapBranch::FromUpperEdge => p_grid
            .iter()
            .zip(&denom)
            .map(|(&p, &d)| ((lambda + m) / d, j * (spacing * p).cos() / d))
            .unzip(),
        GapBranch::FromLowerEdge => p_grid
            .iter()
            .zip(&denom)
            .map(|(&p, &d)| (j * (spacing * p).cos() / d, -(m - lambda) / d))
            .unzip(),
    };
    let mean_sq = a_raw
        .iter()
        .zip(&b_raw)
        .map(|(&a, &b)| a * a + b * b)
        .sum::<f64>()
        / n as f64;
    if !(mean_sq > 0.0) || !mean_sq.is_finite() {
        return Err(CoreError::Numeric(format!(
            "impurity profile normalization failed (mean square {mean_sq})"
        )));
    }
    let mut scale = 1.0 / mean_sq.sqrt();
    // Fix the overall sign via the dominant zone average.
    let dominant_mean = match branch {
        GapBranch::FromUpperEdge => a_raw.iter().sum::<f64>(),
        GapBranch::FromLowerEdge => b_raw.iter().sum::<f64>(),
    };
    if dominant_mean < 0.0 {
        scale = -scale;
    }
    let a_of_p: Vec<f64> = a_raw.iter().map(|&a| scale * a).collect();
    let b_of_p: Vec<f64> = b_raw.iter().map(|&b| scale * b).collect();
    let abar = a_of_p.iter().sum::<f64>() / n as f64;
    let bbar = b_of_p.iter().sum::<f64>() / n as f64;
    Ok(DeltaLatticeSolution {
        lambda,
        branch,
        p_grid: p_grid.to_vec(),
        a_of_p,
        b_of_p,
        abar,
        bbar,
    })
}

/// Closed form of the zone average `<1/D>` with `D = lam^2 - M^2 - J^2 cos^2(l p)`.
pub fn delta_resolvent_average(lambda: f64, mass: f64, hopping: f64) -> f64 {
    let m2 = mass * mass;
    let l2 = lambda * lambda;
    -1.0 / ((m2 - l2).sqrt() * (m2 + hopping * hopping - l2).sqrt())
}
