//! Bound states of the staggered chain and supercriticality tracing.
//!
//! The chain spectrum consists of two quasi-continua, discretized bands
//! filling `(-sqrt(M^2 + J^2), -M]` and `[M, sqrt(M^2 + J^2))`, plus a
//! discrete set of levels inside the gap `(-M, M)` introduced by an
//! attractive potential. As the well depth `W` grows, the lowest gap level
//! `E_0(W)` walks monotonically down through the gap and reaches the lower
//! edge at a finite critical depth; past that point it ceases to exist as a
//! localized eigenvalue and the vacuum decays by pair creation.
//!
//! On a finite open chain the continua are resolved into box states, so an
//! eigenvalue inside the gap window is accepted as a bound state only when
//! it is also spatially localized (small participation ratio and
//! exponentially decaying tails). The critical depth is defined
//! operationally as the last depth with a localized level above
//! `-M + margin`; in the continuum the level first turns into an anti-bound
//! state in an unresolvably narrow window around the edge, so this proxy is
//! the honest lattice statement of the diving point.
//!
//! Near the edges the level detaches and dives parabolically,
//! `E(W) ~ +M + C_+ (W - W_+)^2` after detachment at `W_+` and
//! `E(W) ~ -M + C_- (W - W_-)^2` on approach to the lower edge, with
//! `C_+ < 0` (level curves down from `+M`) and `C_- > 0` (level stays above
//! `-M` while it approaches).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // provides f64 math in no_std builds; inherent std methods win under test
use num_traits::Float;

use crate::eigen::{
    eigh_tridiagonal, eigenvalues_in_window, inverse_iteration_vector, Mat,
};
use crate::model::{build_hamiltonian, sample_potential, ChainModel, PotentialShape, TridiagonalOperator};
use crate::numerics::{fit_line, fit_quadratic};
use crate::{CoreError, Result};

/// Default margin excluding the band edges from the gap window.
pub const DEFAULT_EDGE_MARGIN: f64 = 1e-6;
/// Default margin above the lower edge at which the level counts as dived.
pub const DEFAULT_DIVE_MARGIN: f64 = 1e-3;
/// Default bisection tolerance on the critical strength.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-4;

/// Full eigen-decomposition of a chain Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: Mat,
}

/// A localized in-gap level split into its sublattice components.
#[derive(Debug, Clone)]
pub struct BoundState {
    /// Energy inside the gap.
    pub energy: f64,
    /// Wave-function samples on even sites (the upper spinor component).
    pub psi1: Vec<f64>,
    /// Wave-function samples on odd sites (the lower spinor component).
    pub psi2: Vec<f64>,
    /// Decay length of the exponential tails, in physical units.
    pub localization_length: f64,
    /// Set when the tails have not decayed below 1e-6 of the peak at the
    /// chain ends, meaning the energy still feels the box.
    pub finite_size_limited: bool,
}

/// The lowest gap level as a function of the potential strength.
#[derive(Debug, Clone)]
pub struct CriticalityTrace {
    /// Strengths at which the tracked level exists, ascending.
    pub w_values: Vec<f64>,
    /// Tracked level energy at each entry of `w_values`.
    pub e0_values: Vec<f64>,
    /// Strengths where the level had existed before but is gone.
    pub threshold_crossed: Vec<f64>,
    /// Critical strength, once located by bisection.
    pub w_cr: Option<f64>,
}

/// Parabolic band-edge fits `E(W) ~ +-M + C_pm (W - W_pm)^2`.
#[derive(Debug, Clone, Copy)]
pub struct ParabolicFit {
    /// Curvature at the upper edge (negative: the level curves down).
    pub c_plus: f64,
    /// Detachment strength at the upper edge.
    pub w_plus: f64,
    /// RMS residual of the upper-edge fit.
    pub rms_plus: f64,
    /// Curvature at the lower edge (positive: the level approaches from above).
    pub c_minus: f64,
    /// Strength at which the extrapolated parabola touches the lower edge.
    pub w_minus: f64,
    /// RMS residual of the lower-edge fit.
    pub rms_minus: f64,
}

/// Full symmetric tridiagonal eigen-decomposition with a residual check.
pub fn solve_spectrum(h: &TridiagonalOperator) -> Result<SpectrumResult> {
    let n = h.len();
    if n < 2 {
        return Err(CoreError::Config(format!(
            "spectrum solve needs at least 2 sites, got {n}"
        )));
    }
    let (eigenvalues, eigenvectors) = eigh_tridiagonal(&h.diagonal, &h.off_diagonal)?;
    let scale = h.inf_norm().max(1e-300);
    let mut worst = 0.0_f64;
    let mut x = Vec::new();
    let mut y = alloc::vec![0.0; n];
    for (k, &e) in eigenvalues.iter().enumerate() {
        x.clear();
        x.extend_from_slice(eigenvectors.col(k));
        h.apply(&x, &mut y);
        let mut r2 = 0.0;
        for i in 0..n {
            let r = y[i] - e * x[i];
            r2 += r * r;
        }
        worst = worst.max(r2.sqrt());
    }
    if worst > 1e-10 * scale {
        return Err(CoreError::Numeric(format!(
            "eigen-decomposition residual {worst:.3e} exceeds 1e-10 * |H| = {:.3e}",
            1e-10 * scale
        )));
    }
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Participation ratio `1 / sum v_i^4` of a normalized vector; small for
/// localized states, of order `2N/3` for extended box states.
fn participation_ratio(v: &[f64]) -> f64 {
    let q: f64 = v.iter().map(|&a| a * a * a * a).sum();
    if q > 0.0 {
        1.0 / q
    } else {
        f64::INFINITY
    }
}

/// Per-cell amplitude envelope: `r_m = hypot(v_{2m}, v_{2m+1})`.
fn cell_envelope(v: &[f64]) -> Vec<f64> {
    let cells = v.len() / 2;
    (0..cells)
        .map(|m| {
            let a = v[2 * m];
            let b = if 2 * m + 1 < v.len() { v[2 * m + 1] } else { 0.0 };
            (a * a + b * b).sqrt()
        })
        .collect()
}

/// Fits the exponential decay length of the envelope tails, in physical
/// units. Falls back to the RMS spread when the tails are too short to fit.
fn tail_decay_length(envelope: &[f64], chain: &ChainModel) -> f64 {
    let cells = envelope.len();
    let peak_idx = envelope
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite amplitudes"))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let peak = envelope[peak_idx].max(1e-300);
    let cell_x = |m: usize| chain.position(2 * m);

    let mut lengths = Vec::new();
    for side in 0..2 {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let range: Vec<usize> = if side == 0 {
            ((peak_idx + 2)..cells).collect()
        } else {
            (0..peak_idx.saturating_sub(1)).rev().collect()
        };
        for m in range {
            let r = envelope[m];
            if r > 1e-12 * peak && r < 0.1 * peak {
                xs.push(cell_x(m));
                ys.push((r / peak).ln());
            }
        }
        if xs.len() >= 5 {
            if let Ok(fit) = fit_line(&xs, &ys) {
                let kappa = if side == 0 { -fit.slope } else { fit.slope };
                if kappa > 0.0 && kappa.is_finite() {
                    lengths.push(1.0 / kappa);
                }
            }
        }
    }
    if !lengths.is_empty() {
        return lengths.iter().sum::<f64>() / lengths.len() as f64;
    }
    // RMS spread fallback for states decaying within a couple of cells.
    let norm: f64 = envelope.iter().map(|&r| r * r).sum();
    let mean_x: f64 = envelope
        .iter()
        .enumerate()
        .map(|(m, &r)| cell_x(m) * r * r)
        .sum::<f64>()
        / norm.max(1e-300);
    let var: f64 = envelope
        .iter()
        .enumerate()
        .map(|(m, &r)| (cell_x(m) - mean_x).powi(2) * r * r)
        .sum::<f64>()
        / norm.max(1e-300);
    var.sqrt().max(chain.spacing)
}

/// Converts an in-gap eigenpair into a [`BoundState`] if it is localized;
/// returns `None` for extended (box-continuum) states.
fn classify_state(energy: f64, v: &[f64], chain: &ChainModel) -> Option<BoundState> {
    let n = v.len();
    if participation_ratio(v) >= n as f64 / 4.0 {
        return None;
    }
    let envelope = cell_envelope(v);
    let peak = envelope
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    let cells = envelope.len();
    let edge = envelope[..cells.min(2)]
        .iter()
        .chain(envelope[cells.saturating_sub(2)..].iter())
        .cloned()
        .fold(0.0_f64, f64::max);
    let finite_size_limited = edge >= 1e-6 * peak;
    // The gap physics lives at the dispersion minimum l p = pi/2, so lattice
    // eigenvectors oscillate with the zone-corner carrier i^n. Stripping the
    // per-cell factor (-1)^m recovers the smooth spinor fields whose node
    // structure is physical.
    let psi1: Vec<f64> = v
        .iter()
        .step_by(2)
        .enumerate()
        .map(|(m, &a)| if m % 2 == 0 { a } else { -a })
        .collect();
    let psi2: Vec<f64> = v
        .iter()
        .skip(1)
        .step_by(2)
        .enumerate()
        .map(|(m, &a)| if m % 2 == 0 { a } else { -a })
        .collect();
    Some(BoundState {
        energy,
        psi1,
        psi2,
        localization_length: tail_decay_length(&envelope, chain),
        finite_size_limited,
    })
}

/// Extracts localized in-gap states from a full spectrum.
///
/// Keeps eigenpairs with `|E| < M - edge_margin` that pass the localization
/// test (participation ratio below a quarter of the chain length), sorted by
/// energy. The free chain yields an empty list.
pub fn find_gap_states(
    spectrum: &SpectrumResult,
    chain: &ChainModel,
    edge_margin: f64,
) -> Vec<BoundState> {
    let m = chain.mass;
    let mut out = Vec::new();
    for (k, &e) in spectrum.eigenvalues.iter().enumerate() {
        if e.abs() < m - edge_margin {
            if let Some(b) = classify_state(e, spectrum.eigenvectors.col(k), chain) {
                out.push(b);
            }
        }
    }
    out
}

/// Extracts localized in-gap states directly from a chain and potential,
/// without the full decomposition: bisection on Sturm counts inside the gap
/// window followed by inverse iteration for each level found. Suitable for
/// long chains where the dense path is wasteful.
pub fn find_gap_states_windowed(
    chain: &ChainModel,
    potential: &[f64],
    edge_margin: f64,
) -> Result<Vec<BoundState>> {
    let h = build_hamiltonian(chain, potential)?;
    let m = chain.mass;
    let energies = eigenvalues_in_window(
        &h.diagonal,
        &h.off_diagonal,
        -m + edge_margin,
        m - edge_margin,
        1e-13 * (m + chain.hopping),
    )?;
    let mut out = Vec::new();
    for &e in &energies {
        let v = inverse_iteration_vector(&h.diagonal, &h.off_diagonal, e)?;
        if let Some(b) = classify_state(e, &v, chain) {
            out.push(b);
        }
    }
    Ok(out)
}

/// Lowest eigenvalue inside the gap window, or `None`.
///
/// No localization filter here: the window itself excludes band and box
/// states (which sit at `|E| >= M`), and near the diving point the level's
/// decay length legitimately exceeds any finite box, so a participation-ratio
/// cut would misreport the level as absent.
fn lowest_gap_eigenvalue(
    chain: &ChainModel,
    potential: &[f64],
    edge_margin: f64,
) -> Result<Option<f64>> {
    let h = build_hamiltonian(chain, potential)?;
    let m = chain.mass;
    let energies = eigenvalues_in_window(
        &h.diagonal,
        &h.off_diagonal,
        -m + edge_margin,
        m - edge_margin,
        1e-13 * (m + chain.hopping),
    )?;
    Ok(energies.first().copied())
}

/// All localized gap levels with vectors (ascending), for overlap tracking.
fn gap_states_with_vectors(
    chain: &ChainModel,
    potential: &[f64],
    edge_margin: f64,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let h = build_hamiltonian(chain, potential)?;
    let m = chain.mass;
    let energies = eigenvalues_in_window(
        &h.diagonal,
        &h.off_diagonal,
        -m + edge_margin,
        m - edge_margin,
        1e-13 * (m + chain.hopping),
    )?;
    let mut out = Vec::new();
    for &e in &energies {
        let v = inverse_iteration_vector(&h.diagonal, &h.off_diagonal, e)?;
        if participation_ratio(&v) < v.len() as f64 / 4.0 {
            out.push((e, v));
        }
    }
    Ok(out)
}

fn overlap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum::<f64>().abs()
}

/// Maximum number of grid points adaptive refinement may insert.
const MAX_TRACE_INSERTS: usize = 500;
/// Refinement threshold: adjacent trace points may differ by at most this
/// fraction of the mass.
const TRACE_MAX_STEP_FRACTION: f64 = 0.1;

/// Follows the lowest gap level over an ascending strength grid.
///
/// `family` maps a strength value to the potential shape. The level is
/// picked by lowest energy at its first appearance and by maximal
/// wave-function overlap with the previous step afterwards, which keeps the
/// trace on one physical state through near-degeneracies. Grid intervals
/// where the tracked energy jumps by more than 0.1 M are refined by
/// inserted midpoints. Strengths where the level has vanished after having
/// existed are recorded in `threshold_crossed`.
pub fn trace_bound_state<F>(
    chain: &ChainModel,
    family: F,
    w_grid: &[f64],
) -> Result<CriticalityTrace>
where
    F: Fn(f64) -> PotentialShape,
{
    if w_grid.len() < 2 {
        return Err(CoreError::Config(format!(
            "strength grid needs at least 2 points, got {}",
            w_grid.len()
        )));
    }
    for pair in w_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(CoreError::Config(
                "strength grid must be strictly ascending".into(),
            ));
        }
    }
    if w_grid.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(CoreError::Config(
            "strengths must be finite and non-negative".into(),
        ));
    }

    let mut grid: Vec<f64> = w_grid.to_vec();
    let mut inserted = 0usize;
    loop {
        let trace = trace_once(chain, &family, &grid)?;
        // Refine intervals where the tracked level moved too fast.
        let mut to_insert = Vec::new();
        for i in 1..trace.w_values.len() {
            let de = (trace.e0_values[i] - trace.e0_values[i - 1]).abs();
            let dw = trace.w_values[i] - trace.w_values[i - 1];
            if de > TRACE_MAX_STEP_FRACTION * chain.mass && dw > 1e-9 {
                to_insert.push(0.5 * (trace.w_values[i] + trace.w_values[i - 1]));
            }
        }
        if to_insert.is_empty() {
            return Ok(trace);
        }
        inserted += to_insert.len();
        if inserted > MAX_TRACE_INSERTS {
            return Err(CoreError::Numeric(format!(
                "trace refinement exceeded {MAX_TRACE_INSERTS} inserted points; \
                 the level moves too steeply for the requested grid"
            )));
        }
        grid.extend(to_insert);
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite strengths"));
        grid.dedup();
    }
}

fn trace_once<F>(chain: &ChainModel, family: &F, grid: &[f64]) -> Result<CriticalityTrace>
where
    F: Fn(f64) -> PotentialShape,
{
    let mut w_values = Vec::new();
    let mut e0_values = Vec::new();
    let mut threshold_crossed = Vec::new();
    let mut tracked: Option<Vec<f64>> = None;
    let mut ever_tracked = false;
    for &w in grid {
        let shape = family(w);
        let potential = sample_potential(&shape, chain)?;
        let states = gap_states_with_vectors(chain, &potential, DEFAULT_EDGE_MARGIN)?;
        match &tracked {
            None if !ever_tracked => {
                // Before first detachment: acquire the lowest level once it
                // appears; an empty gap is simply skipped.
                if let Some((e, v)) = states
                    .into_iter()
                    .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"))
                {
                    w_values.push(w);
                    e0_values.push(e);
                    tracked = Some(v);
                    ever_tracked = true;
                }
            }
            None => threshold_crossed.push(w), // level already gone for good
            Some(prev) => {
                if states.is_empty() {
                    threshold_crossed.push(w);
                    tracked = None;
                    continue;
                }
                let last_e = *e0_values.last().expect("tracked implies recorded");
                let min_e = states
                    .iter()
                    .map(|(e, _)| *e)
                    .fold(f64::INFINITY, f64::min);
                let (best, e, v) = states
                    .into_iter()
                    .map(|(e, v)| (overlap(prev, &v), e, v))
                    .max_by(|a, b| a.0.partial_cmp(&b.0).expect("finite overlaps"))
                    .expect("nonempty state list");
                if best < 0.5 {
                    // The tracked level moves only downward; every candidate
                    // sitting clearly above its last position means it has
                    // left the gap (dived, or delocalized over the box right
                    // at the edge), not that tracking is ambiguous.
                    if min_e > last_e + 0.05 * chain.mass {
                        threshold_crossed.push(w);
                        tracked = None;
                        continue;
                    }
                    return Err(CoreError::Numeric(format!(
                        "lost the tracked level at strength {w}: best overlap {best:.3} \
                         (candidate energy {e:.6}, previous {last_e:.6})"
                    )));
                }
                w_values.push(w);
                e0_values.push(e);
                tracked = Some(v);
            }
        }
    }
    Ok(CriticalityTrace {
        w_values,
        e0_values,
        threshold_crossed,
        w_cr: None,
    })
}

/// Locates the critical strength where the tracked level dives through the
/// lower gap edge, by bisection on the predicate "level still present above
/// `-M + dive_margin`".
///
/// The level is considered dived at strength `w` when no localized gap
/// level exists, or the lowest one sits at or below `-M + dive_margin`, or
/// it jumped upward relative to the last known subcritical strength (the
/// tracked level vanished and an unrelated higher level remains; the
/// tracked energy itself is strictly decreasing). On a finite lattice this
/// is the operational proxy for the continuum diving point, where the level
/// first spends an unresolvably narrow interval as an anti-bound state.
///
/// Returns a regime error when the bracket does not straddle the dive, or
/// when the potential family cannot become supercritical at all (a
/// single-site impurity level stays inside the gap at any finite strength).
pub fn find_critical_strength<F>(
    chain: &ChainModel,
    family: F,
    w_lo: f64,
    w_hi: f64,
    dive_margin: f64,
    tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> PotentialShape,
{
    if !(w_hi > w_lo) || !w_lo.is_finite() || !w_hi.is_finite() {
        return Err(CoreError::Config(format!(
            "invalid strength bracket [{w_lo}, {w_hi}]"
        )));
    }
    if !(dive_margin > 0.0 && dive_margin < chain.mass) {
        return Err(CoreError::Config(format!(
            "dive margin must lie in (0, M), got {dive_margin}"
        )));
    }
    if !(tol > 0.0) {
        return Err(CoreError::Config(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    if let PotentialShape::DeltaSite { .. } = family(w_lo) {
        return Err(CoreError::Regime(String::from(
            "a single-site impurity has no critical strength: its level stays \
             inside the gap at any finite strength",
        )));
    }
    let m = chain.mass;
    let floor = -m + dive_margin;

    let lowest = |w: f64| -> Result<Option<f64>> {
        let potential = sample_potential(&family(w), chain)?;
        lowest_gap_eigenvalue(chain, &potential, DEFAULT_EDGE_MARGIN)
    };

    let e_start = match lowest(w_lo)? {
        Some(e) if e > floor => e,
        other => {
            return Err(CoreError::Regime(format!(
                "lower bracket {w_lo} is not subcritical (lowest level {other:?}, \
                 dive floor {floor})"
            )))
        }
    };
    let crossed_hi = match lowest(w_hi)? {
        None => true,
        Some(e) => e <= floor || e > e_start,
    };
    if !crossed_hi {
        return Err(CoreError::Regime(format!(
            "upper bracket {w_hi} has not crossed the dive threshold; \
             supercriticality not reached"
        )));
    }

    let (mut lo, mut hi, mut e_lo) = (w_lo, w_hi, e_start);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match lowest(mid)? {
            Some(e) if e > floor && e <= e_lo => {
                lo = mid;
                e_lo = e;
            }
            // Dived below the floor, vanished, or jumped up to an unrelated
            // higher level: all count as crossed.
            _ => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Least-squares parabolas near both band edges of a criticality trace.
///
/// Uses trace points with energies within `0.05 M` of `+M` (detachment
/// region) and of `-M` (diving region); each window must contain at least
/// five points. The fitted model is `E = +-M + C (W - W_0)^2`.
pub fn fit_parabolic_edges(trace: &CriticalityTrace, mass: f64) -> Result<ParabolicFit> {
    let window = 0.05 * mass;
    let fit_edge = |edge: f64| -> Result<(f64, f64, f64)> {
        let mut ws = Vec::new();
        let mut des = Vec::new();
        for (&w, &e) in trace.w_values.iter().zip(&trace.e0_values) {
            if (e - edge).abs() <= window {
                ws.push(w);
                des.push(e - edge);
            }
        }
        if ws.len() < 5 {
            return Err(CoreError::Config(format!(
                "parabolic fit near E = {edge} needs at least 5 trace points \
                 within {window}, got {}",
                ws.len()
            )));
        }
        let q = fit_quadratic(&ws, &des)?;
        if q.c2 == 0.0 {
            return Err(CoreError::Numeric(
                "degenerate parabolic fit: zero curvature".into(),
            ));
        }
        Ok((q.c2, -q.c1 / (2.0 * q.c2), q.rms_residual))
    };
    let (c_plus, w_plus, rms_plus) = fit_edge(mass)?;
    let (c_minus, w_minus, rms_minus) = fit_edge(-mass)?;
    Ok(ParabolicFit {
        c_plus,
        w_plus,
        rms_plus,
        c_minus,
        w_minus,
        rms_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PotentialShape;
    use crate::oracles::{solve_ws_bound_states, WsParameters};
    use alloc::vec;

    fn ws_family(steepness: f64, half_width: f64) -> impl Fn(f64) -> PotentialShape {
        move |w| PotentialShape::WoodsSaxon {
            depth: w,
            steepness,
            half_width,
        }
    }

    fn ws_potential(chain: &ChainModel, depth: f64) -> Vec<f64> {
        sample_potential(
            &PotentialShape::WoodsSaxon {
                depth,
                steepness: 10.0,
                half_width: 1.0,
            },
            chain,
        )
        .unwrap()
    }

    #[test]
    fn two_site_spectrum_matches_the_closed_form() {
        let h = TridiagonalOperator {
            diagonal: vec![1.0, -1.0],
            off_diagonal: vec![-2.5],
        };
        let s = solve_spectrum(&h).unwrap();
        let expected = (1.0_f64 + 2.5 * 2.5).sqrt();
        assert!((s.eigenvalues[0] + expected).abs() < 1e-12);
        assert!((s.eigenvalues[1] - expected).abs() < 1e-12);
    }

    #[test]
    fn diagonal_hamiltonian_returns_its_diagonal() {
        let h = TridiagonalOperator {
            diagonal: vec![0.3, -1.7, 2.2, 0.0],
            off_diagonal: vec![0.0, 0.0, 0.0],
        };
        let s = solve_spectrum(&h).unwrap();
        let mut d = h.diagonal.clone();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in s.eigenvalues.iter().zip(&d) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn free_chain_band_top_approaches_the_dispersion_maximum() {
        let chain = ChainModel::new(100, 0.1, 1.0).unwrap();
        let pot = vec![0.0; 100];
        let h = build_hamiltonian(&chain, &pot).unwrap();
        let s = solve_spectrum(&h).unwrap();
        let top = s.eigenvalues.last().unwrap();
        let expected = (1.0_f64 + 100.0).sqrt(); // sqrt(M^2 + 1/l^2)
        assert!(
            (top - expected).abs() < 3.0 * expected / 100.0,
            "band top {top} vs {expected}"
        );
    }

    #[test]
    fn free_chain_has_no_gap_states() {
        let chain = ChainModel::new(200, 0.1, 1.0).unwrap();
        let pot = vec![0.0; 200];
        let h = build_hamiltonian(&chain, &pot).unwrap();
        let s = solve_spectrum(&h).unwrap();
        assert!(find_gap_states(&s, &chain, DEFAULT_EDGE_MARGIN).is_empty());
        assert!(find_gap_states_windowed(&chain, &pot, DEFAULT_EDGE_MARGIN)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn well_bound_states_match_the_continuum_condition() {
        let chain = ChainModel::new(800, 0.05, 1.0).unwrap();
        let pot = ws_potential(&chain, 1.0);
        let h = build_hamiltonian(&chain, &pot).unwrap();
        let s = solve_spectrum(&h).unwrap();
        let states = find_gap_states(&s, &chain, DEFAULT_EDGE_MARGIN);
        assert!(!states.is_empty());
        let oracle = solve_ws_bound_states(&WsParameters {
            depth: 1.0,
            steepness: 10.0,
            half_width: 1.0,
            mass: 1.0,
        })
        .unwrap();
        assert_eq!(states.len(), oracle.len());
        for (st, &e_oracle) in states.iter().zip(&oracle) {
            assert!(
                (st.energy - e_oracle).abs() < 0.01,
                "lattice {} vs oracle {}",
                st.energy,
                e_oracle
            );
            // The decay length must match the gap kinematics
            // kappa = sqrt(M^2 - E^2), wherever the box leaves the tails
            // clean enough to fit.
            if !st.finite_size_limited {
                let kappa = (1.0 - st.energy * st.energy).sqrt();
                assert!(
                    (st.localization_length * kappa - 1.0).abs() < 0.3,
                    "xi {} vs 1/kappa {}",
                    st.localization_length,
                    1.0 / kappa
                );
            }
        }
        // The deep level decays well inside the box; the near-edge level
        // (kappa ~ 0.17, tail scale ~ 6) honestly still feels a box of
        // half-width 20 and is flagged.
        assert!(!states[0].finite_size_limited);
        assert!(states[1].finite_size_limited);
    }

    #[test]
    fn windowed_and_dense_extraction_agree() {
        let chain = ChainModel::new(400, 0.05, 1.0).unwrap();
        let pot = ws_potential(&chain, 1.5);
        let h = build_hamiltonian(&chain, &pot).unwrap();
        let dense = find_gap_states(&solve_spectrum(&h).unwrap(), &chain, DEFAULT_EDGE_MARGIN);
        let fast = find_gap_states_windowed(&chain, &pot, DEFAULT_EDGE_MARGIN).unwrap();
        assert_eq!(dense.len(), fast.len());
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a.energy - b.energy).abs() < 1e-9);
        }
    }

    fn sign_changes(values: &[f64]) -> usize {
        let peak = values.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
        let mut count = 0;
        let mut last = 0.0_f64;
        for &v in values {
            if v.abs() < 1e-3 * peak {
                continue; // outside the dominant-amplitude region
            }
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        count
    }

    #[test]
    fn bound_state_components_have_complementary_node_counts() {
        // Deep well; the lowest level sits near -0.37 M and its two
        // sublattice components carry one node and zero nodes.
        let chain = ChainModel::new(800, 0.05, 1.0).unwrap();
        let pot = ws_potential(&chain, 2.0);
        let states = find_gap_states_windowed(&chain, &pot, DEFAULT_EDGE_MARGIN).unwrap();
        let lowest = &states[0];
        assert!((lowest.energy + 0.3677).abs() < 0.01, "E0 {}", lowest.energy);
        let n1 = sign_changes(&lowest.psi1);
        let n2 = sign_changes(&lowest.psi2);
        assert!(
            (n1, n2) == (1, 0) || (n1, n2) == (0, 1),
            "node counts ({n1}, {n2})"
        );
    }

    #[test]
    fn doubling_the_chain_leaves_gap_energies_unchanged() {
        let e1 = {
            let chain = ChainModel::new(800, 0.05, 1.0).unwrap();
            let pot = ws_potential(&chain, 1.0);
            find_gap_states_windowed(&chain, &pot, DEFAULT_EDGE_MARGIN).unwrap()[0].energy
        };
        let e2 = {
            let chain = ChainModel::new(1600, 0.05, 1.0).unwrap();
            let pot = ws_potential(&chain, 1.0);
            find_gap_states_windowed(&chain, &pot, DEFAULT_EDGE_MARGIN).unwrap()[0].energy
        };
        assert!((e1 - e2).abs() < 1e-6, "finite-size shift {}", (e1 - e2).abs());
    }

    #[test]
    fn lattice_energy_converges_to_the_continuum_with_spacing() {
        let oracle = solve_ws_bound_states(&WsParameters {
            depth: 1.0,
            steepness: 10.0,
            half_width: 1.0,
            mass: 1.0,
        })
        .unwrap()[0];
        let mut prev = f64::INFINITY;
        for &(n, l) in &[(200usize, 0.1), (400, 0.05), (1000, 0.02), (2000, 0.01)] {
            let chain = ChainModel::new(n, l, 1.0).unwrap();
            let pot = ws_potential(&chain, 1.0);
            let e = find_gap_states_windowed(&chain, &pot, DEFAULT_EDGE_MARGIN).unwrap()[0].energy;
            let err = (e - oracle).abs();
            assert!(err < prev, "spacing {l}: error {err} did not shrink");
            prev = err;
        }
        assert!(prev < 2e-4);
    }

    #[test]
    fn trace_is_monotone_and_skips_the_empty_well() {
        let chain = ChainModel::new(400, 0.05, 1.0).unwrap();
        let grid: Vec<f64> = (0..15).map(|i| 0.2 * i as f64).collect(); // 0.0 ..= 2.8
        let trace = trace_bound_state(&chain, ws_family(10.0, 1.0), &grid).unwrap();
        assert!(trace.threshold_crossed.is_empty());
        assert!(trace.w_values[0] > 0.0, "empty well produced a state");
        for pair in trace.e0_values.windows(2) {
            assert!(pair[1] < pair[0], "trace not strictly decreasing: {pair:?}");
        }
        // Adaptive refinement keeps adjacent energies close.
        for pair in trace.e0_values.windows(2) {
            assert!((pair[1] - pair[0]).abs() <= 0.1 + 1e-9);
        }
        // The last pre-critical energies dip deep into the lower half gap.
        assert!(*trace.e0_values.last().unwrap() < -0.9);
    }

    #[test]
    fn trace_records_threshold_crossing_past_the_dive() {
        let chain = ChainModel::new(400, 0.05, 1.0).unwrap();
        let grid = vec![2.0, 2.5, 2.8, 3.1, 3.4];
        let trace = trace_bound_state(&chain, ws_family(10.0, 1.0), &grid).unwrap();
        assert!(!trace.threshold_crossed.is_empty());
        assert!(trace.threshold_crossed.iter().all(|&w| w > 2.8));
    }

    #[test]
    fn critical_strength_matches_the_frozen_reference() {
        let chain = ChainModel::new(400, 0.05, 1.0).unwrap();
        let wcr = find_critical_strength(
            &chain,
            ws_family(10.0, 1.0),
            2.0,
            3.2,
            DEFAULT_DIVE_MARGIN,
            DEFAULT_CRITICAL_TOL,
        )
        .unwrap();
        assert!((wcr - 2.862877).abs() < 2e-4, "W_cr {wcr}");
    }

    #[test]
    fn critical_strength_is_invariant_under_mass_rescaling() {
        // Scaling M -> 2M with a -> 2a, L -> L/2, l -> l/2 doubles the
        // Hamiltonian exactly, so W_cr doubles with the dive margin.
        let chain1 = ChainModel::new(400, 0.05, 1.0).unwrap();
        let w1 = find_critical_strength(
            &chain1,
            ws_family(10.0, 1.0),
            2.0,
            3.2,
            1e-3,
            1e-5,
        )
        .unwrap();
        let chain2 = ChainModel::new(400, 0.025, 2.0).unwrap();
        let w2 = find_critical_strength(
            &chain2,
            ws_family(20.0, 0.5),
            4.0,
            6.4,
            2e-3,
            2e-5,
        )
        .unwrap();
        assert!(
            (w2 / 2.0 - w1).abs() < 5e-5,
            "rescaled W_cr {} vs {}",
            w2 / 2.0,
            w1
        );
    }

    #[test]
    fn single_site_impurity_has_no_critical_strength() {
        let chain = ChainModel::new(200, 0.05, 1.0).unwrap();
        let err = find_critical_strength(
            &chain,
            |w| PotentialShape::DeltaSite {
                strength: -w,
                site: 100,
            },
            1.0,
            100.0,
            DEFAULT_DIVE_MARGIN,
            DEFAULT_CRITICAL_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, CoreError::Regime(_)));
    }

    #[test]
    fn unbracketed_dive_is_a_regime_error() {
        let chain = ChainModel::new(200, 0.05, 1.0).unwrap();
        let err = find_critical_strength(
            &chain,
            ws_family(10.0, 1.0),
            0.5,
            1.5,
            DEFAULT_DIVE_MARGIN,
            DEFAULT_CRITICAL_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, CoreError::Regime(_)));
    }

    #[test]
    fn parabolic_fit_recovers_a_synthetic_parabola() {
        let w: Vec<f64> = (0..40).map(|i| 0.9 + 0.01 * i as f64).collect();
        let e_up: Vec<f64> = w.iter().map(|&x| 1.0 - 0.5 * (x - 1.0) * (x - 1.0)).collect();
        // Mirror points near the lower edge: E = -1 + 0.7 (W - 3)^2.
        let w2: Vec<f64> = (0..40).map(|i| 2.8 + 0.004 * i as f64).collect();
        let e_dn: Vec<f64> = w2.iter().map(|&x| -1.0 + 0.7 * (x - 3.0) * (x - 3.0)).collect();
        let trace = CriticalityTrace {
            w_values: w.iter().chain(&w2).copied().collect(),
            e0_values: e_up.iter().chain(&e_dn).copied().collect(),
            threshold_crossed: vec![],
            w_cr: None,
        };
        let fit = fit_parabolic_edges(&trace, 1.0).unwrap();
        assert!((fit.c_plus + 0.5).abs() < 1e-9, "c_plus {}", fit.c_plus);
        assert!((fit.w_plus - 1.0).abs() < 1e-9);
        assert!((fit.c_minus - 0.7).abs() < 1e-9);
        assert!((fit.w_minus - 3.0).abs() < 1e-9);
    }

    #[test]
    fn parabolic_fit_requires_enough_edge_points() {
        let trace = CriticalityTrace {
            w_values: vec![1.0, 1.1, 2.0, 2.1],
            e0_values: vec![0.99, 0.97, -0.97, -0.99],
            threshold_crossed: vec![],
            w_cr: None,
        };
        assert!(fit_parabolic_edges(&trace, 1.0).is_err());
    }

    #[test]
    fn well_trace_fits_parabolic_edges_with_positive_lower_curvature() {
        // Dense sampling near both edges of the real trace; the level
        // detaches from +M curving downward (C_+ < 0) and approaches -M
        // from above (C_- > 0).
        let chain = ChainModel::new(400, 0.05, 1.0).unwrap();
        let mut grid: Vec<f64> = (0..30).map(|i| 0.02 + 0.012 * i as f64).collect();
        grid.extend((0..30).map(|i| 2.70 + 0.0055 * i as f64));
        let trace = trace_bound_state(&chain, ws_family(10.0, 1.0), &grid).unwrap();
        let fit = fit_parabolic_edges(&trace, 1.0).unwrap();
        assert!(fit.c_plus < 0.0, "upper curvature {}", fit.c_plus);
        assert!(fit.c_minus > 0.0, "lower curvature {}", fit.c_minus);
        assert!(fit.rms_plus < 1e-3);
        assert!(fit.rms_minus < 1e-3);
    }
}
