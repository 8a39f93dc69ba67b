//! Exact diagonalization of small staggered chains in the many-body Fock
//! space.
//!
//! The single-particle chain lifts to a particle-number-conserving many-body
//! Hamiltonian
//!
//! ```text
//!     H = -J/2 sum_n (c'_n c_{n+1} + h.c.) + sum_n V_n n_n
//!         + sum_{n<m} D_nm n_n n_m,        D_nm = D0 / |n - m|^3,
//! ```
//!
//! acting on a fixed-particle-number sector spanned by occupation bitmasks.
//! Two statistics are supported on the same basis: spinless fermions, whose
//! hopping matrix elements carry the string sign `(-1)^(occupied sites
//! strictly between the hop endpoints)`, and hard-core bosons, realized by
//! basis restriction to at most one particle per site with plain hopping
//! amplitudes. On an open chain the nearest-neighbor hop crosses no
//! intermediate sites, so the string sign is always `+1` and the two builds
//! coincide: the one-dimensional mapping between hard-core bosons and
//! fermions is exact, and their spectra are identical.
//!
//! At half filling the ground state of the staggered chain (`V_n` containing
//! `(-1)^n M`, with `+M` on even sites) is the analogue of the filled Dirac
//! sea: for `M >> J` every odd site holds one particle and the even-site
//! density vanishes. The total even-site density serves as the pair
//! diagnostic - it rises when an attractive well pulls a bound state out of
//! the sea. The dipolar term models the interaction between lattice bosons;
//! its first-order energy shift is `D0` times the pair-resolved expectation
//! `sum 1/|n-m|^3` in the non-interacting ground state.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // provides f64 math in no_std builds; inherent std methods win under test
use num_traits::Float;

use crate::eigen::{eigh_dense, lanczos_lowest, Mat};
use crate::{CoreError, Result};

/// Largest chain length representable by the bitmask basis.
pub const MAX_SITES: usize = 16;
/// Hard cap on the sector dimension.
pub const MAX_DIMENSION: usize = 200_000;
/// Sector dimension up to which dense diagonalization is used.
const DENSE_LIMIT: usize = 1000;
/// Lanczos iteration budget for large sectors.
const LANCZOS_ITERATIONS: usize = 400;
/// Ground states with a smaller excitation gap are treated as degenerate.
const DEGENERACY_GAP: f64 = 1e-10;

/// Occupation-number basis of a fixed-particle-number sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    num_sites: usize,
    num_particles: usize,
    states: Vec<u32>,
}

impl FockBasis {
    /// Enumerate all occupation bitmasks with the given particle count in
    /// ascending integer order.
    pub fn new(num_sites: usize, num_particles: usize) -> Result<Self> {
        if num_sites == 0 || num_sites > MAX_SITES {
            return Err(CoreError::Config(format!(
                "fock basis: site count must be between 1 and {MAX_SITES}"
            )));
        }
        if num_particles > num_sites {
            return Err(CoreError::Config(String::from(
                "fock basis: more particles than sites",
            )));
        }
        let dim = binomial(num_sites, num_particles);
        if dim > MAX_DIMENSION as u64 {
            return Err(CoreError::Config(format!(
                "fock basis: sector dimension {dim} exceeds the cap {MAX_DIMENSION}"
            )));
        }
        let mut states = Vec::with_capacity(dim as usize);
        for mask in 0u32..(1u32 << num_sites) {
            if mask.count_ones() as usize == num_particles {
                states.push(mask);
            }
        }
        Ok(Self {
            num_sites,
            num_particles,
            states,
        })
    }

    /// Half-filled sector of an even-length chain.
    pub fn half_filling(num_sites: usize) -> Result<Self> {
        if num_sites % 2 != 0 {
            return Err(CoreError::Config(String::from(
                "fock basis: half filling needs an even number of sites",
            )));
        }
        Self::new(num_sites, num_sites / 2)
    }

    /// Number of sites in the chain.
    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// Particle number of the sector.
    pub fn num_particles(&self) -> usize {
        self.num_particles
    }

    /// Sector dimension.
    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    /// Bitmask of the `i`-th basis state.
    pub fn state(&self, i: usize) -> u32 {
        self.states[i]
    }

    /// Index of a bitmask within the basis, if it belongs to the sector.
    pub fn position(&self, mask: u32) -> Option<usize> {
        self.states.binary_search(&mask).ok()
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Statistics of the hopping term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoppingKind {
    /// Spinless fermions with string signs on the hops.
    FermiHopping,
    /// Hard-core bosons: same basis, plain hopping amplitudes.
    HardCoreBoseHopping,
}

/// Dipolar density-density interaction `D0 / |n - m|^3` (the exponent is
/// fixed at three by construction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSpec {
    /// Amplitude `D0`; negative values are attractive.
    pub amplitude: f64,
    /// Largest site separation included in the sum.
    pub cutoff: usize,
}

impl InteractionSpec {
    /// Full-range interaction (every site pair included).
    pub fn full(amplitude: f64) -> Self {
        Self {
            amplitude,
            cutoff: usize::MAX,
        }
    }
}

/// Sparse symmetric many-body Hamiltonian over a Fock sector.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyOperator {
    basis: FockBasis,
    kind: HoppingKind,
    diagonal: Vec<f64>,
    /// Off-diagonal entries per row, `(column, amplitude)`.
    rows: Vec<Vec<(usize, f64)>>,
}

impl ManyBodyOperator {
    /// Sector dimension.
    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// Basis the operator acts on.
    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    /// Hopping statistics used in the build.
    pub fn kind(&self) -> HoppingKind {
        self.kind
    }

    /// Matrix-vector product `y = H x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = self.diagonal[i] * x[i];
            for &(j, a) in &self.rows[i] {
                acc += a * x[j];
            }
            *out = acc;
        }
    }

    /// Dense copy of the matrix (guarded by a size limit).
    pub fn to_dense(&self) -> Result<Mat> {
        let dim = self.dimension();
        if dim > 2048 {
            return Err(CoreError::Config(format!(
                "many-body operator: dimension {dim} too large for a dense copy"
            )));
        }
        let mut h = Mat::zeros(dim, dim);
        for i in 0..dim {
            h.set(i, i, self.diagonal[i]);
            for &(j, a) in &self.rows[i] {
                h.set(i, j, a);
            }
        }
        Ok(h)
    }

    /// Largest deviation from symmetry among the stored entries. The build
    /// writes both directions of every hop, so this is exactly zero.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dimension() {
            for &(j, a) in &self.rows[i] {
                let mut mirror = 0.0;
                for &(jj, b) in &self.rows[j] {
                    if jj == i {
                        mirror = b;
                        break;
                    }
                }
                worst = worst.max((a - mirror).abs());
            }
        }
        worst
    }
}

/// Parity sign of the fermionic string between two hop endpoints: `-1` to
/// the number of occupied sites strictly between them.
fn string_sign(mask: u32, a: usize, b: usize) -> f64 {
    let lo = a.min(b);
    let hi = a.max(b);
    if hi - lo <= 1 {
        return 1.0;
    }
    let width = hi - lo - 1;
    let segment = (mask >> (lo + 1)) & ((1u32 << width) - 1);
    if segment.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Assemble the sector Hamiltonian: nearest-neighbor hopping `-J/2` (with
/// fermionic string signs for `FermiHopping`), on-site potential, and an
/// optional dipolar density-density term.
pub fn build_fock_hamiltonian(
    num_sites: usize,
    num_particles: usize,
    hopping: f64,
    potential: &[f64],
    kind: HoppingKind,
    interaction: Option<&InteractionSpec>,
) -> Result<ManyBodyOperator> {
    if potential.len() != num_sites {
        return Err(CoreError::Config(String::from(
            "fock hamiltonian: potential length must equal the site count",
        )));
    }
    if !hopping.is_finite() || potential.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::Config(String::from(
            "fock hamiltonian: hopping and potential must be finite",
        )));
    }
    if let Some(spec) = interaction {
        if !spec.amplitude.is_finite() {
            return Err(CoreError::Config(String::from(
                "fock hamiltonian: interaction amplitude must be finite",
            )));
        }
        if spec.cutoff == 0 {
            return Err(CoreError::Config(String::from(
                "fock hamiltonian: interaction cutoff of zero removes the term; use None",
            )));
        }
    }
    let basis = FockBasis::new(num_sites, num_particles)?;
    let dim = basis.dimension();
    let amp = -0.5 * hopping;
    let mut diagonal = vec![0.0f64; dim];
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
    for i in 0..dim {
        let mask = basis.state(i);
        let mut diag = 0.0;
        for n in 0..num_sites {
            if mask & (1 << n) != 0 {
                diag += potential[n];
            }
        }
        if let Some(spec) = interaction {
            for n in 0..num_sites {
                if mask & (1 << n) == 0 {
                    continue;
                }
                for m in n + 1..num_sites {
                    if mask & (1 << m) == 0 || m - n > spec.cutoff {
                        continue;
                    }
                    let d = (m - n) as f64;
                    diag += spec.amplitude / (d * d * d);
                }
            }
        }
        diagonal[i] = diag;
        for n in 0..num_sites - 1 {
            let pair = 0b11u32 << n;
            let occ = mask & pair;
            if occ == 0 || occ == pair {
                continue;
            }
            let flipped = mask ^ pair;
            let j = basis
                .position(flipped)
                .expect("hop conserves the particle number");
            let sign = match kind {
                HoppingKind::FermiHopping => string_sign(mask, n, n + 1),
                HoppingKind::HardCoreBoseHopping => 1.0,
            };
            rows[i].push((j, amp * sign));
        }
    }
    Ok(ManyBodyOperator {
        basis,
        kind,
        diagonal,
        rows,
    })
}

/// Full sorted spectrum of a small sector (dense diagonalization).
pub fn full_spectrum(op: &ManyBodyOperator) -> Result<Vec<f64>> {
    let h = op.to_dense()?;
    let (vals, _) = eigh_dense(&h)?;
    Ok(vals)
}

/// Largest deviation between the sorted fermionic and hard-core-boson
/// spectra of the same chain. On an open chain the mapping between the two
/// is exact, so the deviation is at the level of eigensolver noise.
pub fn jordan_wigner_equivalence(
    num_sites: usize,
    num_particles: usize,
    hopping: f64,
    potential: &[f64],
) -> Result<f64> {
    let fermi = build_fock_hamiltonian(
        num_sites,
        num_particles,
        hopping,
        potential,
        HoppingKind::FermiHopping,
        None,
    )?;
    let bose = build_fock_hamiltonian(
        num_sites,
        num_particles,
        hopping,
        potential,
        HoppingKind::HardCoreBoseHopping,
        None,
    )?;
    let ef = full_spectrum(&fermi)?;
    let eb = full_spectrum(&bose)?;
    let mut worst = 0.0f64;
    for (a, b) in ef.iter().zip(eb.iter()) {
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Ground-state data of a many-body sector.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    /// Ground energy.
    pub energy: f64,
    /// Excitation gap to the first excited state.
    pub gap: f64,
    /// Per-site densities in the ground state.
    pub densities: Vec<f64>,
    /// Total density on even sites. In the staggered convention the even
    /// sites carry `+M`, so this counts particles lifted out of the sea.
    pub pair_diagnostic: f64,
}

/// Ground state of the sector via dense diagonalization (small sectors) or
/// Lanczos iteration (large ones). A vanishing excitation gap is rejected:
/// occupations of a degenerate ground state are not well defined.
///
/// The Lanczos path resolves the gap from a single Krylov run, which cannot
/// detect an exactly degenerate pair; sectors small enough for the dense
/// path get the strict check.
pub fn ground_state_occupations(op: &ManyBodyOperator) -> Result<GroundState> {
    let dim = op.dimension();
    let num_sites = op.basis().num_sites();
    let (e0, gap, ground) = if dim == 1 {
        (op.diagonal[0], f64::INFINITY, vec![1.0])
    } else if dim <= DENSE_LIMIT {
        let h = op.to_dense()?;
        let (vals, vecs) = eigh_dense(&h)?;
        (vals[0], vals[1] - vals[0], vecs.col(0).to_vec())
    } else {
        let (vals, vecs) = lanczos_lowest(
            dim,
            |x, y| op.apply(x, y),
            2,
            LANCZOS_ITERATIONS.min(dim),
        )?;
        (vals[0], vals[1] - vals[0], vecs.col(0).to_vec())
    };
    if gap <= DEGENERACY_GAP {
        return Err(CoreError::Regime(format!(
            "ground state: degenerate (excitation gap {gap:.3e})"
        )));
    }
    let mut densities = vec![0.0f64; num_sites];
    for (i, &c) in ground.iter().enumerate() {
        let w = c * c;
        let mask = op.basis().state(i);
        for (n, d) in densities.iter_mut().enumerate() {
            if mask & (1 << n) != 0 {
                *d += w;
            }
        }
    }
    let pair_diagnostic = densities.iter().step_by(2).sum();
    Ok(GroundState {
        energy: e0,
        gap,
        densities,
        pair_diagnostic,
    })
}

/// Expectation of the dipolar sum `sum_{n<m} n_n n_m / |n - m|^3` (amplitude
/// one) in a given sector state: the first-order energy shift per unit `D0`.
pub fn dipolar_expectation(basis: &FockBasis, state: &[f64], cutoff: usize) -> f64 {
    let num_sites = basis.num_sites();
    let mut acc = 0.0;
    for (i, &c) in state.iter().enumerate() {
        let w = c * c;
        if w == 0.0 {
            continue;
        }
        let mask = basis.state(i);
        let mut pair_sum = 0.0;
        for n in 0..num_sites {
            if mask & (1 << n) == 0 {
                continue;
            }
            for m in n + 1..num_sites {
                if mask & (1 << m) == 0 || m - n > cutoff {
                    continue;
                }
                let d = (m - n) as f64;
                pair_sum += 1.0 / (d * d * d);
            }
        }
        acc += w * pair_sum;
    }
    acc
}

/// One row of an interaction scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionPoint {
    /// Dipolar amplitude `D0` of this run.
    pub amplitude: f64,
    /// Ground energy at this amplitude.
    pub energy: f64,
    /// Even-site density of the ground state.
    pub pair_diagnostic: f64,
}

/// Ground-state scan over dipolar amplitudes at half filling. Each point is
/// an independent exact diagonalization of the fermionic build.
pub fn interaction_shift_scan(
    num_sites: usize,
    hopping: f64,
    potential: &[f64],
    amplitudes: &[f64],
) -> Result<Vec<InteractionPoint>> {
    if num_sites > 14 {
        return Err(CoreError::Config(String::from(
            "interaction scan: chains longer than 14 sites are too costly",
        )));
    }
    if amplitudes.is_empty() {
        return Err(CoreError::Config(String::from(
            "interaction scan: empty amplitude list",
        )));
    }
    let basis = FockBasis::half_filling(num_sites)?;
    let mut out = Vec::with_capacity(amplitudes.len());
    for &d0 in amplitudes {
        let spec = InteractionSpec::full(d0);
        let op = build_fock_hamiltonian(
            num_sites,
            basis.num_particles(),
            hopping,
            potential,
            HoppingKind::FermiHopping,
            Some(&spec),
        )?;
        let gs = ground_state_occupations(&op)?;
        out.push(InteractionPoint {
            amplitude: d0,
            energy: gs.energy,
            pair_diagnostic: gs.pair_diagnostic,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigvalsh_tridiagonal;

    /// Deterministic pseudo-random stream in [-1, 1].
    struct Lcg(u64);

    impl Lcg {
        fn next_f64(&mut self) -> f64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        }
    }

    /// Single-particle eigenvalues of the open chain with `-J/2` hopping.
    fn single_particle_levels(hopping: f64, potential: &[f64]) -> Vec<f64> {
        let off = vec![-0.5 * hopping; potential.len() - 1];
        eigvalsh_tridiagonal(potential, &off).unwrap()
    }

    /// All sums of `k`-subsets of the given levels, sorted ascending.
    fn subset_sums(levels: &[f64], k: usize) -> Vec<f64> {
        let mut sums = Vec::new();
        let n = levels.len();
        let mut pick = vec![0usize; k];
        fn recurse(
            levels: &[f64],
            k: usize,
            start: usize,
            depth: usize,
            partial: f64,
            pick: &mut [usize],
            sums: &mut Vec<f64>,
        ) {
            if depth == k {
                sums.push(partial);
                return;
            }
            for i in start..=levels.len() - (k - depth) {
                pick[depth] = i;
                recurse(levels, k, i + 1, depth + 1, partial + levels[i], pick, sums);
            }
        }
        if k == 0 {
            sums.push(0.0);
        } else if k <= n {
            recurse(levels, k, 0, 0, 0.0, &mut pick, &mut sums);
        }
        sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sums
    }

    /// Staggered potential `(-1)^n M`, `+M` on even sites.
    fn staggered(num_sites: usize, mass: f64) -> Vec<f64> {
        (0..num_sites)
            .map(|n| if n % 2 == 0 { mass } else { -mass })
            .collect()
    }

    #[test]
    fn two_site_single_particle_matrix_is_closed_form() {
        let op = build_fock_hamiltonian(
            2,
            1,
            1.7,
            &[0.3, -0.4],
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        let h = op.to_dense().unwrap();
        assert_eq!(h.get(0, 0), 0.3);
        assert_eq!(h.get(1, 1), -0.4);
        assert_eq!(h.get(0, 1), -0.85);
        assert_eq!(h.get(1, 0), -0.85);
    }

    #[test]
    fn basis_enumeration_is_ascending_and_complete() {
        let basis = FockBasis::new(6, 3).unwrap();
        assert_eq!(basis.dimension(), 20);
        for i in 1..basis.dimension() {
            assert!(basis.state(i) > basis.state(i - 1));
        }
        for i in 0..basis.dimension() {
            assert_eq!(basis.state(i).count_ones(), 3);
            assert_eq!(basis.position(basis.state(i)), Some(i));
        }
        assert_eq!(basis.position(0b111000_1), None);
        assert!(FockBasis::new(17, 2).is_err());
        assert!(FockBasis::new(4, 5).is_err());
        assert!(FockBasis::half_filling(5).is_err());
    }

    #[test]
    fn string_sign_counts_sites_between_the_endpoints() {
        // Nearest-neighbor hops never cross an occupied site.
        assert_eq!(string_sign(0b1111, 1, 2), 1.0);
        // One occupied site strictly between flips the sign.
        assert_eq!(string_sign(0b0100, 1, 3), -1.0);
        assert_eq!(string_sign(0b0100, 3, 1), -1.0);
        // Two occupied sites between restore it.
        assert_eq!(string_sign(0b0110, 0, 3), 1.0);
        // Endpoint occupations do not contribute.
        assert_eq!(string_sign(0b1001, 0, 3), 1.0);
    }

    #[test]
    fn free_fermion_spectrum_equals_subset_sums() {
        let mut rng = Lcg(0x5eed_1234_abcd_0001);
        for &num_sites in &[4usize, 6, 8, 10] {
            let potential: Vec<f64> = (0..num_sites).map(|_| rng.next_f64()).collect();
            let num_particles = num_sites / 2;
            let op = build_fock_hamiltonian(
                num_sites,
                num_particles,
                1.0,
                &potential,
                HoppingKind::FermiHopping,
                None,
            )
            .unwrap();
            let spectrum = full_spectrum(&op).unwrap();
            let levels = single_particle_levels(1.0, &potential);
            let sums = subset_sums(&levels, num_particles);
            assert_eq!(spectrum.len(), sums.len());
            for (a, b) in spectrum.iter().zip(sums.iter()) {
                assert!((a - b).abs() < 1e-9, "L={num_sites}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn four_site_ground_energy_is_the_sum_of_two_lowest_levels() {
        let op = build_fock_hamiltonian(
            4,
            2,
            1.0,
            &[0.0; 4],
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        let gs = ground_state_occupations(&op).unwrap();
        let levels = single_particle_levels(1.0, &[0.0; 4]);
        assert!((gs.energy - (levels[0] + levels[1])).abs() < 1e-12);
    }

    #[test]
    fn fermion_and_hard_core_boson_spectra_are_identical() {
        let mut rng = Lcg(0xfeed_beef_0042_cafe);
        for &num_sites in &[4usize, 6, 8, 10] {
            for _ in 0..12 {
                let potential: Vec<f64> = (0..num_sites).map(|_| rng.next_f64()).collect();
                let dev =
                    jordan_wigner_equivalence(num_sites, num_sites / 2, 1.0, &potential)
                        .unwrap();
                assert!(dev < 1e-10, "L={num_sites}: {dev}");
            }
        }
    }

    #[test]
    fn deep_staggering_fills_the_lower_sublattice() {
        let hopping = 1.0;
        let mass = 20.0 * hopping;
        let op = build_fock_hamiltonian(
            10,
            5,
            hopping,
            &staggered(10, mass),
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        let gs = ground_state_occupations(&op).unwrap();
        let total: f64 = gs.densities.iter().sum();
        assert!((total - 5.0).abs() < 1e-10);
        for (n, &d) in gs.densities.iter().enumerate() {
            if n % 2 == 0 {
                assert!(d < 0.05, "even site {n}: {d}");
            } else {
                assert!(d > 0.95, "odd site {n}: {d}");
            }
        }
        assert!(gs.pair_diagnostic < 0.25);
    }

    #[test]
    fn symmetric_half_filling_has_uniform_density() {
        let op = build_fock_hamiltonian(
            8,
            4,
            1.0,
            &[0.0; 8],
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        let gs = ground_state_occupations(&op).unwrap();
        assert!(gs.gap > 0.1);
        for &d in &gs.densities {
            assert!((d - 0.5).abs() < 1e-10, "{d}");
        }
    }

    #[test]
    fn degenerate_ground_states_are_rejected() {
        // Two decoupled equal sites, one particle: exact double degeneracy.
        let op = build_fock_hamiltonian(
            2,
            1,
            0.0,
            &[0.7, 0.7],
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        assert!(matches!(
            ground_state_occupations(&op),
            Err(CoreError::Regime(_))
        ));
    }

    #[test]
    fn builds_are_hermitian_and_number_conserving() {
        let spec = InteractionSpec::full(0.3);
        let op = build_fock_hamiltonian(
            8,
            4,
            1.3,
            &staggered(8, 0.9),
            HoppingKind::FermiHopping,
            Some(&spec),
        )
        .unwrap();
        assert_eq!(op.hermiticity_error(), 0.0);
        let np = op.basis().num_particles() as u32;
        for i in 0..op.dimension() {
            for &(j, _) in &op.rows[i] {
                assert!(j < op.dimension());
                assert_eq!(op.basis().state(j).count_ones(), np);
            }
        }
    }

    #[test]
    fn zero_amplitude_interaction_matches_the_noninteracting_build() {
        let spec = InteractionSpec::full(0.0);
        let with = build_fock_hamiltonian(
            8,
            4,
            1.0,
            &staggered(8, 1.0),
            HoppingKind::FermiHopping,
            Some(&spec),
        )
        .unwrap();
        let without = build_fock_hamiltonian(
            8,
            4,
            1.0,
            &staggered(8, 1.0),
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        assert_eq!(with.diagonal, without.diagonal);
        assert_eq!(with.rows, without.rows);
    }

    #[test]
    fn small_interactions_shift_the_energy_at_first_order() {
        let num_sites = 8;
        let potential = staggered(num_sites, 1.0);
        let bare = build_fock_hamiltonian(
            num_sites,
            4,
            1.0,
            &potential,
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        let h = bare.to_dense().unwrap();
        let (vals, vecs) = eigh_dense(&h).unwrap();
        let slope = dipolar_expectation(bare.basis(), vecs.col(0), usize::MAX);
        assert!(slope > 0.0);
        let d0 = 0.02;
        let scan =
            interaction_shift_scan(num_sites, 1.0, &potential, &[-d0, 0.0, d0]).unwrap();
        assert!((scan[1].energy - vals[0]).abs() < 1e-12);
        // Monotone through zero with the first-order slope.
        assert!(scan[0].energy < scan[1].energy && scan[1].energy < scan[2].energy);
        let measured = (scan[2].energy - scan[1].energy) / d0;
        assert!(
            (measured / slope - 1.0).abs() < 0.05,
            "slope {measured} vs {slope}"
        );
    }

    #[test]
    fn interaction_scan_rejects_oversized_chains() {
        assert!(interaction_shift_scan(16, 1.0, &[0.0; 16], &[0.0]).is_err());
        assert!(interaction_shift_scan(8, 1.0, &[0.0; 8], &[]).is_err());
    }

    #[test]
    fn lanczos_sector_reproduces_the_subset_sum_ground_energy() {
        // 14 sites at half filling (dimension 3432) exercises the Lanczos
        // path; the free-fermion ground energy is the sum of the seven
        // lowest single-particle levels.
        let num_sites = 14;
        let potential = staggered(num_sites, 1.0);
        let op = build_fock_hamiltonian(
            num_sites,
            7,
            1.0,
            &potential,
            HoppingKind::FermiHopping,
            None,
        )
        .unwrap();
        assert_eq!(op.dimension(), 3432);
        let gs = ground_state_occupations(&op).unwrap();
        let levels = single_particle_levels(1.0, &potential);
        let exact: f64 = levels[..7].iter().sum();
        assert!((gs.energy - exact).abs() < 1e-8, "{} vs {exact}", gs.energy);
        let total: f64 = gs.densities.iter().sum();
        assert!((total - 7.0).abs() < 1e-8);
    }

    #[test]
    fn supercritical_well_populates_the_upper_channel() {
        // A strong attractive well on a staggered chain pulls weight into
        // the even (+M) sublattice near the well: the lattice analogue of a
        // bound state diving toward the lower continuum.
        let num_sites = 12;
        let hopping = 1.0;
        let mass = 1.0;
        let pair_diag_for = |depth: f64| -> f64 {
            let mut potential = staggered(num_sites, mass);
            for n in 4..8 {
                potential[n] -= depth;
            }
            let op = build_fock_hamiltonian(
                num_sites,
                6,
                hopping,
                &potential,
                HoppingKind::FermiHopping,
                None,
            )
            .unwrap();
            ground_state_occupations(&op).unwrap().pair_diagnostic
        };
        let shallow = pair_diag_for(0.0);
        let medium = pair_diag_for(2.0);
        let deep = pair_diag_for(4.0);
        assert!(medium > shallow, "{medium} vs {shallow}");
        assert!(deep > medium + 0.1, "{deep} vs {medium}");
    }
}
