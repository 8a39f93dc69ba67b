//! Time-dependent evolution of the chain and spontaneous pair creation.
//!
//! The single-particle propagator U(T) is advanced with the Crank-Nicolson
//! midpoint rule
//!
//! ```text
//! (1 + i dt/2 H(t_mid)) U_{s+1} = (1 - i dt/2 H(t_mid)) U_s ,
//! ```
//!
//! which is exactly unitary for Hermitian H and second-order accurate in the
//! step size. Each step costs one tridiagonal solve per column, so a full
//! propagator costs O(N^2) per step.
//!
//! Pair creation is read off in the in/out formalism. The potential is
//! switched off at both ends of the pulse, so the free chain Hamiltonian
//! defines in and out vacua; its spectrum splits into positive-energy
//! (particle) and negative-energy (hole) modes, and the transition amplitudes
//!
//! ```text
//! beta[k, q] = <+, k | U(T) | -, q>
//! ```
//!
//! give the expected number of created pairs n = sum |beta|^2. Each particle
//! mode holds at most one fermion, so every row sum of |beta|^2 is bounded by
//! one (Pauli exclusion). A Schmidt (singular value) decomposition of beta
//! identifies the dominant particle-hole channel: when a single supercritical
//! bound level dives into the lower continuum, the first Schmidt weight
//! approaches one, with the particle localized at the well and the partner
//! hole escaping as an extended continuum wave.
//!
//! A uniform force E applied across a window of the chain probes the
//! tunneling exponential of vacuum decay: the pair creation rate falls as
//! exp(-pi M^2 / E), which [`schwinger_scan`] extracts as the slope of
//! ln(rate) against 1/E.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // provides f64 math in no_std builds; inherent std methods win under test
use num_traits::Float;

use crate::eigen::Mat;
use crate::model::{
    build_hamiltonian, sample_potential, ChainModel, PotentialShape, RampProfile, RampShape,
    TridiagonalOperator,
};
use crate::numerics::fit_line;
use crate::spectral::solve_spectrum;
use crate::{CoreError, Result};

/// Safety factor in the default step bound dt <= SAFETY / (|E|_max + |Phi|_max).
pub const STEP_SAFETY: f64 = 0.05;
/// Maximum tolerated deviation of U^dag U from the identity.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Slack allowed on the per-mode occupation bound sum_q |beta[k,q]|^2 <= 1.
pub const PAULI_TOL: f64 = 1e-9;
/// Pair creation rates at or below ten times this floor are excluded from
/// tunneling-slope fits; they sit at the numerical noise level of the scheme.
pub const RATE_FLOOR: f64 = 1e-11;
/// Largest chain the dense exact propagator oracle accepts.
pub const EXACT_PROPAGATOR_MAX_SITES: usize = 64;

/// Dense complex matrix in column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Matrix product self * rhs.
    pub fn matmul(&self, rhs: &CMat) -> Result<CMat> {
        if self.cols != rhs.rows {
            return Err(CoreError::Config(format!(
                "matmul: inner dimensions differ, {} vs {}",
                self.cols, rhs.rows
            )));
        }
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let rcol = rhs.col(j);
            let ocol = out.col_mut(j);
            for (k, &r) in rcol.iter().enumerate() {
                if r == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let scol = self.col(k);
                for (o, &s) in ocol.iter_mut().zip(scol.iter()) {
                    *o += s * r;
                }
            }
        }
        Ok(out)
    }
}

/// Largest stable-by-convention step size for the chain with a given static
/// potential profile: STEP_SAFETY / (sqrt(M^2 + J^2) + max |Phi|). The first
/// term bounds the free spectral radius, the second the potential shift.
pub fn stable_dt(chain: &ChainModel, potential: &[f64]) -> f64 {
    let free_top = (chain.mass * chain.mass + chain.hopping * chain.hopping).sqrt();
    let pot_top = potential.iter().fold(0.0_f64, |m, &p| m.max(p.abs()));
    STEP_SAFETY / (free_top + pot_top)
}

/// Propagator of a time-dependent pulse, with step bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    /// Single-particle propagator U(T) acting on site amplitudes.
    pub propagator: CMat,
    /// Step boundary times 0, dt, 2 dt, ..., T.
    pub times: Vec<f64>,
    /// Largest deviation of any column norm from one.
    pub norm_drift: f64,
}

/// Core Crank-Nicolson driver. The instantaneous Hamiltonian is the free
/// chain plus `envelope(t_mid) * potential` on the diagonal. With
/// `conjugate` set every step uses the complex-conjugated Cayley factor,
/// which composes to the exact inverse of the unconjugated product when the
/// envelope samples are visited in reverse order.
fn evolve_engine(
    chain: &ChainModel,
    potential: &[f64],
    envelope: &dyn Fn(f64) -> f64,
    t_total: f64,
    dt: f64,
    conjugate: bool,
) -> Result<EvolutionResult> {
    let n = chain.num_sites;
    if potential.len() != n {
        return Err(CoreError::Config(format!(
            "potential has {} samples for a chain of {} sites",
            potential.len(),
            n
        )));
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(CoreError::Config(String::from(
            "time step must be positive and finite",
        )));
    }
    if !t_total.is_finite() || t_total < 0.0 {
        return Err(CoreError::Config(String::from(
            "evolution time must be non-negative and finite",
        )));
    }
    let limit = stable_dt(chain, potential);
    if dt > limit * (1.0 + 1e-9) {
        return Err(CoreError::Config(format!(
            "time step {:e} exceeds the stability bound {:e}",
            dt, limit
        )));
    }

    let zeros = vec![0.0; n];
    let free = build_hamiltonian(chain, &zeros)?;

    let mut u = CMat::identity(n);
    let n_steps = if t_total == 0.0 {
        0
    } else {
        (t_total / dt).ceil() as usize
    };
    let dt_star = if n_steps == 0 {
        0.0
    } else {
        t_total / n_steps as f64
    };

    // Scratch for the shared Thomas factors of (1 + c H) and the per-column
    // right-hand side / intermediate solution.
    let mut den = vec![Complex64::new(0.0, 0.0); n];
    let mut cp = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
    let mut diag = vec![0.0; n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];

    let half = 0.5 * dt_star;
    let c = if conjugate {
        Complex64::new(0.0, -half)
    } else {
        Complex64::new(0.0, half)
    };

    for s in 0..n_steps {
        let t_mid = (s as f64 + 0.5) * dt_star;
        let g = envelope(t_mid);
        if !g.is_finite() {
            return Err(CoreError::Numeric(format!(
                "envelope is not finite at t = {}",
                t_mid
            )));
        }
        for i in 0..n {
            diag[i] = free.diagonal[i] + g * potential[i];
        }

        // Factor the tridiagonal (1 + c H): diagonal 1 + c d_i, couplings
        // c o_i with o_i the real hopping entries.
        den[0] = Complex64::new(1.0, 0.0) + c * diag[0];
        for i in 1..n {
            let e_prev = c * free.off_diagonal[i - 1];
            if den[i - 1].norm_sqr() < 1e-24 {
                return Err(CoreError::Numeric(String::from(
                    "Crank-Nicolson factorization hit a vanishing pivot",
                )));
            }
            cp[i - 1] = e_prev / den[i - 1];
            den[i] = Complex64::new(1.0, 0.0) + c * diag[i] - e_prev * cp[i - 1];
        }
        if den[n - 1].norm_sqr() < 1e-24 {
            return Err(CoreError::Numeric(String::from(
                "Crank-Nicolson factorization hit a vanishing pivot",
            )));
        }

        for j in 0..n {
            let col = u.col_mut(j);
            // rhs = (1 - c H) col
            for i in 0..n {
                let mut v = (Complex64::new(1.0, 0.0) - c * diag[i]) * col[i];
                if i > 0 {
                    v -= c * free.off_diagonal[i - 1] * col[i - 1];
                }
                if i + 1 < n {
                    v -= c * free.off_diagonal[i] * col[i + 1];
                }
                rhs[i] = v;
            }
            // Forward substitution into rhs, then back substitution into col.
            rhs[0] /= den[0];
            for i in 1..n {
                let e_prev = c * free.off_diagonal[i - 1];
                rhs[i] = (rhs[i] - e_prev * rhs[i - 1]) / den[i];
            }
            col[n - 1] = rhs[n - 1];
            for i in (0..n - 1).rev() {
                col[i] = rhs[i] - cp[i] * col[i + 1];
            }
        }
    }

    // Unitarity audit: column norms and the full Gram matrix.
    let mut norm_drift = 0.0_f64;
    for j in 0..n {
        let norm = u.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        norm_drift = norm_drift.max((norm - 1.0).abs());
    }
    let mut gram_dev = 0.0_f64;
    for j in 0..n {
        for l in j..n {
            let mut g = Complex64::new(0.0, 0.0);
            let cj = u.col(j);
            let cl = u.col(l);
            for i in 0..n {
                g += cj[i].conj() * cl[i];
            }
            let target = if j == l { 1.0 } else { 0.0 };
            gram_dev = gram_dev.max((g - target).norm());
        }
    }
    if gram_dev > UNITARITY_TOL {
        return Err(CoreError::Numeric(format!(
            "propagator lost unitarity: max |U^dag U - 1| = {:e}",
            gram_dev
        )));
    }

    let times = (0..=n_steps).map(|s| s as f64 * dt_star).collect();
    Ok(EvolutionResult {
        propagator: u,
        times,
        norm_drift,
    })
}

/// Evolve through a full switching cycle of `shape` with envelope `ramp`.
pub fn evolve(
    chain: &ChainModel,
    shape: &PotentialShape,
    ramp: &RampProfile,
    dt: f64,
) -> Result<EvolutionResult> {
    let potential = sample_potential(shape, chain)?;
    evolve_sampled(chain, &potential, ramp, dt)
}

/// Evolve a pre-sampled potential profile through a full envelope cycle.
pub fn evolve_sampled(
    chain: &ChainModel,
    potential: &[f64],
    ramp: &RampProfile,
    dt: f64,
) -> Result<EvolutionResult> {
    let env = |t: f64| ramp.envelope(t);
    evolve_engine(chain, potential, &env, ramp.total(), dt, false)
}

/// Evolve only up to `t_stop` inside the envelope cycle (for example to the
/// end of the plateau, before the switch-off erases the diving resonance).
pub fn evolve_partial(
    chain: &ChainModel,
    shape: &PotentialShape,
    ramp: &RampProfile,
    t_stop: f64,
    dt: f64,
) -> Result<EvolutionResult> {
    if t_stop > ramp.total() * (1.0 + 1e-12) {
        return Err(CoreError::Config(format!(
            "stop time {} exceeds the envelope duration {}",
            t_stop,
            ramp.total()
        )));
    }
    let potential = sample_potential(shape, chain)?;
    let env = |t: f64| ramp.envelope(t);
    evolve_engine(chain, &potential, &env, t_stop, dt, false)
}

/// Evolve with the potential held constant at full strength.
pub fn evolve_static(
    chain: &ChainModel,
    shape: &PotentialShape,
    t_total: f64,
    dt: f64,
) -> Result<EvolutionResult> {
    let potential = sample_potential(shape, chain)?;
    let env = |_t: f64| 1.0;
    evolve_engine(chain, &potential, &env, t_total, dt, false)
}

/// Evolve the time-reversed pulse: the envelope is traversed backwards and
/// every Cayley step is complex conjugated. For matching `ramp`, `dt` the
/// product of this propagator with the forward one telescopes exactly to the
/// identity, which makes it a sharp self-test of the stepping.
pub fn evolve_reversed(
    chain: &ChainModel,
    shape: &PotentialShape,
    ramp: &RampProfile,
    dt: f64,
) -> Result<EvolutionResult> {
    let potential = sample_potential(shape, chain)?;
    let total = ramp.total();
    let env = |t: f64| ramp.envelope(total - t);
    evolve_engine(chain, &potential, &env, total, dt, true)
}

/// Dense propagator e^{-i H t} of a static Hamiltonian through its exact
/// eigendecomposition. Restricted to small chains; it serves as an oracle
/// for the Crank-Nicolson stepper and for statements that hold only in
/// exact arithmetic (such as gauge-shift invariance of pair counts).
pub fn exact_static_propagator(h: &TridiagonalOperator, t_total: f64) -> Result<CMat> {
    let n = h.diagonal.len();
    if n > EXACT_PROPAGATOR_MAX_SITES {
        return Err(CoreError::Config(format!(
            "exact propagator oracle is limited to {} sites, got {}",
            EXACT_PROPAGATOR_MAX_SITES, n
        )));
    }
    if !t_total.is_finite() {
        return Err(CoreError::Config(String::from(
            "evolution time must be finite",
        )));
    }
    let spectrum = solve_spectrum(h)?;
    let mut u = CMat::zeros(n, n);
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, -spectrum.eigenvalues[k] * t_total);
        let vk = spectrum.eigenvectors.col(k);
        for m in 0..n {
            let w = phase * vk[m];
            for i in 0..n {
                let cur = u.get(i, m);
                u.set(i, m, cur + vk[i] * w);
            }
        }
    }
    Ok(u)
}

/// Positive/negative energy eigenmode split of a chain Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct InOutSplit {
    /// Columns are positive-energy eigenvectors, energies ascending.
    pub positive: Mat,
    /// Columns are negative-energy eigenvectors, energies ascending.
    pub negative: Mat,
    pub positive_energies: Vec<f64>,
    pub negative_energies: Vec<f64>,
}

/// Split the spectrum of `h` into negative-energy (filled sea) and
/// positive-energy modes. A mode at zero energy within roundoff of the
/// operator scale has no side to belong to and is rejected.
pub fn in_out_split(h: &TridiagonalOperator) -> Result<InOutSplit> {
    let n = h.diagonal.len();
    let spectrum = solve_spectrum(h)?;
    let mut scale = 0.0_f64;
    for i in 0..n {
        let mut row = h.diagonal[i].abs();
        if i > 0 {
            row += h.off_diagonal[i - 1].abs();
        }
        if i + 1 < n {
            row += h.off_diagonal[i].abs();
        }
        scale = scale.max(row);
    }
    let zero_tol = 1e-12 * scale.max(1e-300);
    let mut neg_cols: Vec<Vec<f64>> = Vec::new();
    let mut pos_cols: Vec<Vec<f64>> = Vec::new();
    let mut neg_e = Vec::new();
    let mut pos_e = Vec::new();
    for k in 0..n {
        let e = spectrum.eigenvalues[k];
        if e.abs() <= zero_tol {
            return Err(CoreError::Numeric(format!(
                "eigenvalue {:e} sits at zero energy; the in/out split is undefined",
                e
            )));
        }
        let v = spectrum.eigenvectors.col(k).to_vec();
        if e < 0.0 {
            neg_e.push(e);
            neg_cols.push(v);
        } else {
            pos_e.push(e);
            pos_cols.push(v);
        }
    }
    if neg_cols.is_empty() || pos_cols.is_empty() {
        return Err(CoreError::Regime(String::from(
            "spectrum does not straddle zero energy; no in/out vacuum exists",
        )));
    }
    Ok(InOutSplit {
        positive: Mat::from_columns(&pos_cols)?,
        negative: Mat::from_columns(&neg_cols)?,
        positive_energies: pos_e,
        negative_energies: neg_e,
    })
}

/// Pair content of a propagator with respect to an in/out split.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCreationResult {
    /// Transition amplitudes beta[k, q] from negative mode q to positive mode k.
    pub beta: CMat,
    /// Expected number of created pairs, sum |beta|^2.
    pub n_pairs: f64,
    /// Indices (k, q) of the largest single amplitude.
    pub dominant_mode: (usize, usize),
    /// First Schmidt weight sigma_1^2 / sum sigma^2 of beta.
    pub dominant_fraction: f64,
    /// Occupation of each positive mode, sum_q |beta[k, q]|^2 (Pauli bounded).
    pub mode_spectrum: Vec<f64>,
}

fn beta_matrix(propagator: &CMat, split: &InOutSplit) -> Result<CMat> {
    let n = propagator.rows();
    if propagator.cols() != n {
        return Err(CoreError::Config(String::from(
            "propagator must be square",
        )));
    }
    if split.positive.rows() != n || split.negative.rows() != n {
        return Err(CoreError::Config(String::from(
            "in/out split does not match the propagator dimension",
        )));
    }
    let np = split.positive.cols();
    let nm = split.negative.cols();
    let mut beta = CMat::zeros(np, nm);
    let mut evolved = vec![Complex64::new(0.0, 0.0); n];
    for q in 0..nm {
        let vq = split.negative.col(q);
        for x in evolved.iter_mut() {
            *x = Complex64::new(0.0, 0.0);
        }
        for (m, &w) in vq.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let ucol = propagator.col(m);
            for (x, &uu) in evolved.iter_mut().zip(ucol.iter()) {
                *x += uu * w;
            }
        }
        for k in 0..np {
            let pk = split.positive.col(k);
            let mut amp = Complex64::new(0.0, 0.0);
            for i in 0..n {
                amp += pk[i] * evolved[i];
            }
            beta.set(k, q, amp);
        }
    }
    Ok(beta)
}

/// Largest eigenvalue of beta^dag beta and its eigenvector, by power
/// iteration with a deterministic start. Returns (sigma_1^2, v_1).
fn dominant_schmidt(beta: &CMat) -> (f64, Vec<Complex64>) {
    let np = beta.rows();
    let nm = beta.cols();
    // Start from the column-norm profile, biased so it cannot be exactly
    // orthogonal to the dominant eigenvector by symmetry.
    let mut v: Vec<Complex64> = (0..nm)
        .map(|q| {
            let colnorm: f64 = (0..np).map(|k| beta.get(k, q).norm_sqr()).sum();
            Complex64::new(colnorm.sqrt() + 1e-6 * (q + 1) as f64 / nm as f64, 0.0)
        })
        .collect();
    let norm0: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm0;
    }
    let mut w = vec![Complex64::new(0.0, 0.0); np];
    let mut y = vec![Complex64::new(0.0, 0.0); nm];
    let mut lambda_prev = -1.0_f64;
    let mut lambda = 0.0_f64;
    for _ in 0..10_000 {
        // w = beta v
        for k in 0..np {
            let mut acc = Complex64::new(0.0, 0.0);
            for q in 0..nm {
                acc += beta.get(k, q) * v[q];
            }
            w[k] = acc;
        }
        // y = beta^dag w
        for q in 0..nm {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..np {
                acc += beta.get(k, q).conj() * w[k];
            }
            y[q] = acc;
        }
        // Rayleigh quotient with the normalized v: lambda = v^dag y.
        lambda = v
            .iter()
            .zip(y.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>();
        let ynorm: f64 = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if ynorm < 1e-300 {
            return (0.0, v);
        }
        for (vi, yi) in v.iter_mut().zip(y.iter()) {
            *vi = yi / ynorm;
        }
        if (lambda - lambda_prev).abs() <= 1e-13 * lambda.abs().max(1e-300) {
            break;
        }
        lambda_prev = lambda;
    }
    (lambda.max(0.0), v)
}

/// Count created pairs in `propagator` relative to the in/out split.
pub fn count_pairs(propagator: &CMat, split: &InOutSplit) -> Result<PairCreationResult> {
    let beta = beta_matrix(propagator, split)?;
    let np = beta.rows();
    let nm = beta.cols();
    let mut mode_spectrum = vec![0.0_f64; np];
    let mut n_pairs = 0.0_f64;
    let mut best = 0.0_f64;
    let mut dominant_mode = (0usize, 0usize);
    for k in 0..np {
        let mut row = 0.0;
        for q in 0..nm {
            let a = beta.get(k, q).norm_sqr();
            row += a;
            if a > best {
                best = a;
                dominant_mode = (k, q);
            }
        }
        if row > 1.0 + PAULI_TOL {
            return Err(CoreError::Numeric(format!(
                "mode occupation {} violates the Pauli bound",
                row
            )));
        }
        mode_spectrum[k] = row;
        n_pairs += row;
    }
    let dominant_fraction = if n_pairs < 1e-20 {
        0.0
    } else {
        let (sigma_sq, _) = dominant_schmidt(&beta);
        (sigma_sq / n_pairs).min(1.0)
    };
    Ok(PairCreationResult {
        beta,
        n_pairs,
        dominant_mode,
        dominant_fraction,
        mode_spectrum,
    })
}

/// Real-space profile of the dominant created pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantPair {
    /// |amplitude|^2 of the particle component per site (sums to one).
    pub particle_density: Vec<f64>,
    /// |amplitude|^2 of the hole component per site (sums to one).
    pub hole_density: Vec<f64>,
    /// Participation ratio of the particle density.
    pub particle_participation: f64,
    /// Participation ratio of the hole density.
    pub hole_participation: f64,
}

fn participation_of_density(density: &[f64]) -> f64 {
    let total: f64 = density.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let inv: f64 = density.iter().map(|&d| (d / total) * (d / total)).sum();
    1.0 / inv
}

/// Extract the first Schmidt channel of the pair amplitude as real-space
/// particle and hole densities. The particle lives in the positive-energy
/// subspace (beta's left singular vector), the hole in the negative-energy
/// subspace (its right singular vector).
pub fn dominant_pair_profile(propagator: &CMat, split: &InOutSplit) -> Result<DominantPair> {
    let beta = beta_matrix(propagator, split)?;
    let (sigma_sq, v1) = dominant_schmidt(&beta);
    if sigma_sq < 1e-24 {
        return Err(CoreError::Regime(String::from(
            "no pairs were created; the dominant channel is undefined",
        )));
    }
    let sigma = sigma_sq.sqrt();
    let np = beta.rows();
    let nm = beta.cols();
    let n = split.positive.rows();
    // u_1 = beta v_1 / sigma_1
    let mut u1 = vec![Complex64::new(0.0, 0.0); np];
    for k in 0..np {
        let mut acc = Complex64::new(0.0, 0.0);
        for q in 0..nm {
            acc += beta.get(k, q) * v1[q];
        }
        u1[k] = acc / sigma;
    }
    let mut particle = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..np {
        let col = split.positive.col(k);
        for i in 0..n {
            particle[i] += col[i] * u1[k];
        }
    }
    let mut hole = vec![Complex64::new(0.0, 0.0); n];
    for q in 0..nm {
        let col = split.negative.col(q);
        for i in 0..n {
            hole[i] += col[i] * v1[q];
        }
    }
    let particle_density: Vec<f64> = particle.iter().map(|z| z.norm_sqr()).collect();
    let hole_density: Vec<f64> = hole.iter().map(|z| z.norm_sqr()).collect();
    let particle_participation = participation_of_density(&particle_density);
    let hole_participation = participation_of_density(&hole_density);
    Ok(DominantPair {
        particle_density,
        hole_density,
        particle_participation,
        hole_participation,
    })
}

/// One duration sample of an adiabaticity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticPoint {
    pub duration: f64,
    pub n_pairs: f64,
    pub dominant_fraction: f64,
}

/// Drive the same potential through symmetric smooth cycles of increasing
/// duration and count the pairs left behind. For a subcritical well the
/// yield vanishes in the adiabatic limit; for a supercritical well it
/// saturates at one pair per dived level, which is the spontaneous,
/// switching-independent signal.
pub fn adiabatic_scan(
    chain: &ChainModel,
    shape: &PotentialShape,
    durations: &[f64],
) -> Result<Vec<AdiabaticPoint>> {
    if durations.is_empty() {
        return Err(CoreError::Config(String::from(
            "adiabatic scan needs at least one duration",
        )));
    }
    for pair in durations.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(CoreError::Config(String::from(
                "durations must be strictly ascending",
            )));
        }
    }
    if !durations[0].is_finite() || durations[0] <= 0.0 {
        return Err(CoreError::Config(String::from(
            "durations must be positive and finite",
        )));
    }
    let potential = sample_potential(shape, chain)?;
    let zeros = vec![0.0; chain.num_sites];
    let free = build_hamiltonian(chain, &zeros)?;
    let split = in_out_split(&free)?;
    let dt = stable_dt(chain, &potential);
    let mut points = Vec::with_capacity(durations.len());
    for &tau in durations {
        let ramp = RampProfile::smooth_cycle(tau)?;
        let evo = evolve_sampled(chain, &potential, &ramp, dt)?;
        let pairs = count_pairs(&evo.propagator, &split)?;
        points.push(AdiabaticPoint {
            duration: tau,
            n_pairs: pairs.n_pairs,
            dominant_fraction: pairs.dominant_fraction,
        });
    }
    Ok(points)
}

/// Tunneling-rate scan over a ladder of field strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwingerScan {
    pub field_values: Vec<f64>,
    /// Pairs created per unit plateau time at each field.
    pub rates: Vec<f64>,
    /// Whether each rate sat above the detection floor and entered the fit.
    pub included: Vec<bool>,
    /// Slope of ln(rate) against 1/E; the tunneling exponential gives -pi M^2.
    pub fit_slope: f64,
    pub fit_intercept: f64,
    pub r_squared: f64,
}

/// Measure the vacuum decay rate under a uniform force E over a site window
/// and fit ln(rate) = slope / E + intercept. Preconditions keep the probe in
/// the tunneling regime: the potential drop across the window must exceed
/// the gap 2M (so pair creation is energetically open) and the field must
/// stay below M^2 / 2 (so the exponential is still large compared to one).
pub fn schwinger_scan(
    chain: &ChainModel,
    field_values: &[f64],
    window: (usize, usize),
    ramp_time: f64,
    plateau_time: f64,
) -> Result<SchwingerScan> {
    if field_values.len() < 3 {
        return Err(CoreError::Config(String::from(
            "field scan needs at least three field strengths",
        )));
    }
    for pair in field_values.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(CoreError::Config(String::from(
                "field strengths must be strictly ascending",
            )));
        }
    }
    if !field_values[0].is_finite() || field_values[0] <= 0.0 {
        return Err(CoreError::Config(String::from(
            "field strengths must be positive and finite",
        )));
    }
    if window.0 >= window.1 || window.1 >= chain.num_sites {
        return Err(CoreError::Config(format!(
            "field window ({}, {}) does not fit a chain of {} sites",
            window.0, window.1, chain.num_sites
        )));
    }
    if !(ramp_time > 0.0) || !(plateau_time > 0.0) {
        return Err(CoreError::Config(String::from(
            "ramp and plateau times must be positive",
        )));
    }
    let m = chain.mass;
    let e_max = *field_values.last().expect("non-empty");
    if e_max > 0.5 * m * m * (1.0 + 1e-12) {
        return Err(CoreError::Regime(format!(
            "field {} exceeds M^2/2 = {}; the weak-field rate law does not apply",
            e_max,
            0.5 * m * m
        )));
    }
    let span = (window.1 - window.0) as f64 * chain.spacing;
    if field_values[0] * span < 2.0 * m {
        return Err(CoreError::Regime(format!(
            "potential drop {} across the window is below the gap {}; no pairs fit",
            field_values[0] * span,
            2.0 * m
        )));
    }

    let zeros = vec![0.0; chain.num_sites];
    let free = build_hamiltonian(chain, &zeros)?;
    let split = in_out_split(&free)?;
    let ramp = RampProfile::new(ramp_time, plateau_time, ramp_time, RampShape::SmoothCos)?;

    let mut rates = Vec::with_capacity(field_values.len());
    for &field in field_values {
        let shape = PotentialShape::Linear { field, window };
        let potential = sample_potential(&shape, chain)?;
        let dt = stable_dt(chain, &potential);
        let evo = evolve_sampled(chain, &potential, &ramp, dt)?;
        let pairs = count_pairs(&evo.propagator, &split)?;
        rates.push(pairs.n_pairs / plateau_time);
    }

    let included: Vec<bool> = rates.iter().map(|&r| r > 10.0 * RATE_FLOOR).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &inc) in included.iter().enumerate() {
        if inc {
            xs.push(1.0 / field_values[i]);
            ys.push(rates[i].ln());
        }
    }
    if xs.len() < 3 {
        return Err(CoreError::Regime(String::from(
            "fewer than three rates sit above the detection floor; cannot fit a slope",
        )));
    }
    let fit = fit_line(&xs, &ys)?;
    Ok(SchwingerScan {
        field_values: field_values.to_vec(),
        rates,
        included,
        fit_slope: fit.slope,
        fit_intercept: fit.intercept,
        r_squared: fit.r_squared,
    })
}

#[cfg(test)]
mod tests {
    extern crate std;

    use super::*;
    use crate::model::RampShape;

    fn ws(depth: f64) -> PotentialShape {
        PotentialShape::WoodsSaxon {
            depth,
            steepness: 10.0,
            half_width: 1.0,
        }
    }

    fn free_split(chain: &ChainModel) -> InOutSplit {
        let zeros = vec![0.0; chain.num_sites];
        let free = build_hamiltonian(chain, &zeros).unwrap();
        in_out_split(&free).unwrap()
    }

    fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.cols(), b.cols());
        let mut worst = 0.0_f64;
        for j in 0..a.cols() {
            for i in 0..a.rows() {
                worst = worst.max((a.get(i, j) - b.get(i, j)).norm());
            }
        }
        worst
    }

    #[test]
    fn zero_duration_returns_identity() {
        let chain = ChainModel::new(20, 0.2, 1.0).unwrap();
        let evo = evolve_static(&chain, &ws(2.0), 0.0, 0.001).unwrap();
        assert_eq!(max_abs_diff(&evo.propagator, &CMat::identity(20)), 0.0);
        assert_eq!(evo.times, vec![0.0]);
        assert_eq!(evo.norm_drift, 0.0);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let chain = ChainModel::new(20, 0.2, 1.0).unwrap();
        // stability bound here: 0.05 / (sqrt(26) + 2) ~ 0.00704
        let err = evolve_static(&chain, &ws(2.0), 1.0, 0.008).unwrap_err();
        assert!(matches!(err, CoreError::Config(_)));
    }

    #[test]
    fn free_evolution_is_diagonal_with_cayley_phases() {
        let chain = ChainModel::new(40, 0.2, 1.0).unwrap();
        let n = chain.num_sites;
        let t_total = 3.0;
        let dt = 0.009;
        let evo = evolve_static(&chain, &PotentialShape::Zero, t_total, dt).unwrap();
        let zeros = vec![0.0; n];
        let free = build_hamiltonian(&chain, &zeros).unwrap();
        let spec = solve_spectrum(&free).unwrap();

        let n_steps = (t_total / dt).ceil() as usize;
        let dt_star = t_total / n_steps as f64;
        // D = V^T U V should be diagonal with the exact per-step Cayley phase
        // theta_k = n_steps * 2 atan(E_k dt/2).
        let mut worst_off = 0.0_f64;
        let mut worst_phase = 0.0_f64;
        for k in 0..n {
            for l in 0..n {
                let mut d = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let vik = spec.eigenvectors.get(i, k);
                    for j in 0..n {
                        d += vik * evo.propagator.get(i, j) * spec.eigenvectors.get(j, l);
                    }
                }
                if k == l {
                    let theta =
                        n_steps as f64 * 2.0 * (spec.eigenvalues[k] * dt_star / 2.0).atan();
                    let expected = Complex64::from_polar(1.0, -theta);
                    worst_phase = worst_phase.max((d - expected).norm());
                } else {
                    worst_off = worst_off.max(d.norm());
                }
            }
        }
        assert!(worst_off < 1e-10, "off-diagonal leakage {}", worst_off);
        assert!(worst_phase < 1e-10, "phase deviation {}", worst_phase);
    }

    #[test]
    fn free_phases_approach_continuum_exponential() {
        let chain = ChainModel::new(12, 0.3, 1.0).unwrap();
        let n = chain.num_sites;
        let t_total = 1.0;
        let evo = evolve_static(&chain, &PotentialShape::Zero, t_total, 2e-5).unwrap();
        let zeros = vec![0.0; n];
        let free = build_hamiltonian(&chain, &zeros).unwrap();
        let spec = solve_spectrum(&free).unwrap();
        let mut worst = 0.0_f64;
        for k in 0..n {
            let mut d = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    d += spec.eigenvectors.get(i, k)
                        * evo.propagator.get(i, j)
                        * spec.eigenvectors.get(j, k);
                }
            }
            let expected = Complex64::from_polar(1.0, -spec.eigenvalues[k] * t_total);
            worst = worst.max((d - expected).norm());
        }
        assert!(worst < 1e-8, "continuum phase deviation {}", worst);
    }

    #[test]
    fn halving_the_step_quarters_the_error() {
        let chain = ChainModel::new(40, 0.2, 1.0).unwrap();
        let ramp = RampProfile::smooth_cycle(4.0).unwrap();
        let u1 = evolve(&chain, &ws(2.0), &ramp, 0.002).unwrap().propagator;
        let u2 = evolve(&chain, &ws(2.0), &ramp, 0.001).unwrap().propagator;
        let u3 = evolve(&chain, &ws(2.0), &ramp, 0.0005).unwrap().propagator;
        let d1 = max_abs_diff(&u1, &u2);
        let d2 = max_abs_diff(&u2, &u3);
        let ratio = d1 / d2;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "Richardson ratio {} outside second-order band",
            ratio
        );
    }

    #[test]
    fn static_well_matches_exact_propagator() {
        let chain = ChainModel::new(32, 0.25, 1.0).unwrap();
        let potential = sample_potential(&ws(1.5), &chain).unwrap();
        let h = build_hamiltonian(&chain, &potential).unwrap();
        let exact = exact_static_propagator(&h, 2.0).unwrap();
        let stepped = evolve_static(&chain, &ws(1.5), 2.0, 1e-4).unwrap();
        let diff = max_abs_diff(&exact, &stepped.propagator);
        assert!(diff < 1e-6, "exact-vs-stepped deviation {}", diff);
    }

    #[test]
    fn exact_propagator_rejects_large_chains() {
        let chain = ChainModel::new(80, 0.2, 1.0).unwrap();
        let zeros = vec![0.0; 80];
        let h = build_hamiltonian(&chain, &zeros).unwrap();
        let err = exact_static_propagator(&h, 1.0).unwrap_err();
        assert!(matches!(err, CoreError::Config(_)));
    }

    #[test]
    fn reversed_evolution_inverts_the_forward_pulse() {
        let chain = ChainModel::new(36, 0.2, 1.0).unwrap();
        let ramp = RampProfile::new(3.0, 0.0, 3.0, RampShape::SmoothCos).unwrap();
        let forward = evolve(&chain, &ws(2.5), &ramp, 0.004).unwrap();
        let backward = evolve_reversed(&chain, &ws(2.5), &ramp, 0.004).unwrap();
        let product = backward.propagator.matmul(&forward.propagator).unwrap();
        let dev = max_abs_diff(&product, &CMat::identity(36));
        assert!(dev < 1e-6, "round trip deviation {}", dev);
    }

    #[test]
    fn gauge_shift_leaves_exact_pair_count_invariant() {
        let chain = ChainModel::new(24, 0.25, 1.0).unwrap();
        let split = free_split(&chain);
        let potential = sample_potential(&ws(1.0), &chain).unwrap();
        let shifted: Vec<f64> = potential.iter().map(|&p| p + 0.7).collect();
        let h1 = build_hamiltonian(&chain, &potential).unwrap();
        let h2 = build_hamiltonian(&chain, &shifted).unwrap();
        let t_total = 2.0;
        let u1 = exact_static_propagator(&h1, t_total).unwrap();
        let u2 = exact_static_propagator(&h2, t_total).unwrap();
        let p1 = count_pairs(&u1, &split).unwrap();
        let p2 = count_pairs(&u2, &split).unwrap();
        assert!(
            (p1.n_pairs - p2.n_pairs).abs() < 1e-10,
            "pair count moved by {} under a constant shift",
            (p1.n_pairs - p2.n_pairs).abs()
        );
        // The shifted propagator is the original times a global phase.
        let phase = Complex64::from_polar(1.0, -0.7 * t_total);
        let mut worst = 0.0_f64;
        for j in 0..24 {
            for i in 0..24 {
                worst = worst.max((u2.get(i, j) - phase * u1.get(i, j)).norm());
            }
        }
        assert!(worst < 1e-9, "global phase relation broken by {}", worst);
    }

    #[test]
    fn gauge_shift_deviation_shrinks_as_dt_squared() {
        // Under Crank-Nicolson a constant shift is only a global phase up to
        // O(dt^2) splitting error, so the pair count moves by a small amount
        // that must shrink by 4x when the step is halved.
        let chain = ChainModel::new(60, 0.2, 1.0).unwrap();
        let split = free_split(&chain);
        let ramp = RampProfile::smooth_cycle(10.0).unwrap();
        let potential = sample_potential(&ws(2.0), &chain).unwrap();
        let shifted: Vec<f64> = potential.iter().map(|&p| p + 0.7).collect();
        let mut devs = Vec::new();
        for &dt in &[0.004, 0.002] {
            let ua = evolve_sampled(&chain, &potential, &ramp, dt).unwrap();
            let ub = evolve_sampled(&chain, &shifted, &ramp, dt).unwrap();
            let na = count_pairs(&ua.propagator, &split).unwrap().n_pairs;
            let nb = count_pairs(&ub.propagator, &split).unwrap().n_pairs;
            devs.push((na - nb).abs());
        }
        assert!(devs[0] < 5e-7, "gauge deviation too large: {}", devs[0]);
        let ratio = devs[0] / devs[1];
        assert!(
            (3.0..=5.0).contains(&ratio),
            "gauge deviation ratio {} is not second order",
            ratio
        );
    }

    #[test]
    fn zero_potential_creates_no_pairs() {
        let chain = ChainModel::new(60, 0.2, 1.0).unwrap();
        let split = free_split(&chain);
        let ramp = RampProfile::smooth_cycle(10.0).unwrap();
        let dt = stable_dt(&chain, &vec![0.0; 60]);
        let evo = evolve(&chain, &PotentialShape::Zero, &ramp, dt).unwrap();
        let pairs = count_pairs(&evo.propagator, &split).unwrap();
        assert!(pairs.n_pairs < 1e-10, "free pulse made {}", pairs.n_pairs);
    }

    #[test]
    fn identity_propagator_creates_no_pairs() {
        let chain = ChainModel::new(30, 0.2, 1.0).unwrap();
        let split = free_split(&chain);
        let pairs = count_pairs(&CMat::identity(30), &split).unwrap();
        assert!(pairs.n_pairs < 1e-15);
        assert_eq!(pairs.dominant_fraction, 0.0);
    }

    #[test]
    fn split_partitions_modes_evenly_and_completely() {
        let chain = ChainModel::new(100, 0.2, 1.0).unwrap();
        let split = free_split(&chain);
        assert_eq!(split.positive.cols(), 50);
        assert_eq!(split.negative.cols(), 50);
        assert!(split
            .positive_energies
            .windows(2)
            .all(|w| w[1] >= w[0]));
        assert!(split
            .negative_energies
            .windows(2)
            .all(|w| w[1] >= w[0]));
        assert!(split.negative_energies.iter().all(|&e| e < 0.0));
        assert!(split.positive_energies.iter().all(|&e| e > 0.0));
        // Completeness: P+ P+^T + P- P-^T = 1.
        let n = 100;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..split.positive.cols() {
                    s += split.positive.get(i, k) * split.positive.get(j, k);
                }
                for q in 0..split.negative.cols() {
                    s += split.negative.get(i, q) * split.negative.get(j, q);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        assert!(worst < 1e-10, "completeness defect {}", worst);
    }

    #[test]
    fn split_matches_dense_diagonalization_on_four_sites() {
        let chain = ChainModel::new(4, 0.5, 1.0).unwrap();
        let zeros = vec![0.0; 4];
        let h = build_hamiltonian(&chain, &zeros).unwrap();
        let split = in_out_split(&h).unwrap();
        assert_eq!(split.positive.cols(), 2);
        assert_eq!(split.negative.cols(), 2);
        // Cross-check the negative projector against a dense solve.
        let mut dense = Mat::zeros(4, 4);
        for i in 0..4 {
            dense.set(i, i, h.diagonal[i]);
        }
        for i in 0..3 {
            dense.set(i, i + 1, h.off_diagonal[i]);
            dense.set(i + 1, i, h.off_diagonal[i]);
        }
        let (evals, evecs) = crate::eigen::eigh_dense(&dense).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut a = 0.0;
                for q in 0..2 {
                    a += split.negative.get(i, q) * split.negative.get(j, q);
                }
                let mut b = 0.0;
                for (k, &e) in evals.iter().enumerate() {
                    if e < 0.0 {
                        b += evecs.get(i, k) * evecs.get(j, k);
                    }
                }
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst < 1e-10, "projector mismatch {}", worst);
    }

    #[test]
    fn split_rejects_zero_energy_mode() {
        // A five-site massless free chain has cos(pi/2) = 0 in its spectrum.
        let h = TridiagonalOperator {
            diagonal: vec![0.0; 5],
            off_diagonal: vec![-0.5; 4],
        };
        let err = in_out_split(&h).unwrap_err();
        assert!(matches!(err, CoreError::Numeric(_)));
    }

    #[test]
    fn supercritical_pulse_creates_one_dominant_pair() {
        let chain = ChainModel::new(150, 0.2, 1.0).unwrap();
        let split = free_split(&chain);
        let potential = sample_potential(&ws(3.5), &chain).unwrap();
        let ramp = RampProfile::smooth_cycle(20.0).unwrap();
        let dt = stable_dt(&chain, &potential);
        let evo = evolve_sampled(&chain, &potential, &ramp, dt).unwrap();
        let pairs = count_pairs(&evo.propagator, &split).unwrap();
        assert!(
            (pairs.n_pairs - 1.015772).abs() < 1e-3,
            "n_pairs = {}",
            pairs.n_pairs
        );
        assert!(
            (pairs.dominant_fraction - 0.973849).abs() < 1e-3,
            "dominant fraction = {}",
            pairs.dominant_fraction
        );
        let top = pairs
            .mode_spectrum
            .iter()
            .fold(0.0_f64, |m, &v| m.max(v));
        assert!(top <= 1.0 + PAULI_TOL);
    }

    #[test]
    fn subcritical_yield_decays_with_duration() {
        let chain = ChainModel::new(150, 0.2, 1.0).unwrap();
        let points = adiabatic_scan(&chain, &ws(1.5), &[10.0, 20.0, 40.0]).unwrap();
        assert_eq!(points.len(), 3);
        assert!(points[0].n_pairs > points[1].n_pairs);
        assert!(points[1].n_pairs > points[2].n_pairs);
        assert!(
            (points[1].n_pairs - 9.9478e-4).abs() / 9.9478e-4 < 0.01,
            "tau=20 yield {}",
            points[1].n_pairs
        );
        assert!(
            (points[2].n_pairs - 8.2764e-5).abs() / 8.2764e-5 < 0.02,
            "tau=40 yield {}",
            points[2].n_pairs
        );
    }

    #[test]
    fn adiabatic_scan_of_nothing_yields_nothing() {
        let chain = ChainModel::new(40, 0.2, 1.0).unwrap();
        let points = adiabatic_scan(&chain, &PotentialShape::Zero, &[5.0, 10.0]).unwrap();
        for p in &points {
            assert!(p.n_pairs < 1e-10);
            assert_eq!(p.dominant_fraction, 0.0);
        }
    }

    #[test]
    fn adiabatic_scan_rejects_unsorted_durations() {
        let chain = ChainModel::new(40, 0.2, 1.0).unwrap();
        let err = adiabatic_scan(&chain, &ws(1.0), &[10.0, 5.0]).unwrap_err();
        assert!(matches!(err, CoreError::Config(_)));
    }

    #[test]
    fn dominant_pair_has_localized_particle_and_extended_hole() {
        let chain = ChainModel::new(150, 0.2, 1.0).unwrap();
        let split = free_split(&chain);
        let ramp = RampProfile::smooth_cycle(40.0).unwrap();
        let potential = sample_potential(&ws(3.5), &chain).unwrap();
        let dt = stable_dt(&chain, &potential);
        // Stop at the end of the plateau, before switch-off.
        let evo = evolve_partial(&chain, &ws(3.5), &ramp, 30.0, dt).unwrap();
        let profile = dominant_pair_profile(&evo.propagator, &split).unwrap();
        assert!(
            profile.particle_participation < 150.0 / 10.0,
            "particle PR {}",
            profile.particle_participation
        );
        assert!(
            profile.hole_participation > 150.0 / 4.0,
            "hole PR {}",
            profile.hole_participation
        );
        let psum: f64 = profile.particle_density.iter().sum();
        let hsum: f64 = profile.hole_density.iter().sum();
        assert!((psum - 1.0).abs() < 1e-8);
        assert!((hsum - 1.0).abs() < 1e-8);
    }

    #[test]
    fn tunneling_rates_fit_the_inverse_field_law() {
        let chain = ChainModel::new(100, 0.2, 1.0).unwrap();
        let scan = schwinger_scan(&chain, &[0.3, 0.4, 0.5], (0, 99), 5.0, 30.0).unwrap();
        assert!(scan.included.iter().all(|&i| i));
        let slope_target = -core::f64::consts::PI;
        assert!(
            (scan.fit_slope - slope_target).abs() < 0.3 * slope_target.abs(),
            "slope {} vs {}",
            scan.fit_slope,
            slope_target
        );
        assert!(scan.r_squared > 0.99, "r^2 = {}", scan.r_squared);
        assert!(
            (scan.rates[2] - 3.0671e-3).abs() / 3.0671e-3 < 0.02,
            "strongest-field rate {}",
            scan.rates[2]
        );
    }

    #[test]
    fn field_scan_rejects_out_of_regime_requests() {
        let chain = ChainModel::new(100, 0.2, 1.0).unwrap();
        // Field above M^2 / 2.
        let err = schwinger_scan(&chain, &[0.3, 0.4, 0.6], (0, 99), 5.0, 30.0).unwrap_err();
        assert!(matches!(err, CoreError::Regime(_)));
        // Window too short for the drop to straddle the gap.
        let err = schwinger_scan(&chain, &[0.3, 0.4, 0.5], (45, 55), 5.0, 30.0).unwrap_err();
        assert!(matches!(err, CoreError::Regime(_)));
        // Unsorted fields are a configuration error.
        let err = schwinger_scan(&chain, &[0.4, 0.3, 0.5], (0, 99), 5.0, 30.0).unwrap_err();
        assert!(matches!(err, CoreError::Config(_)));
    }
}
