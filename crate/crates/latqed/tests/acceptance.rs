//! Acceptance suite: nine go/no-go checks covering criticality, the impurity
//! oracle, dispersion convergence, pair-creation semantics, the tunneling
//! rate, band calibration, the cold-atom energy hierarchy, the boson-fermion
//! mapping, and byte determinism.
//!
//! Each test prints one `criterion N (<name>): PASS|FAIL -- <detail>` line
//! before asserting, so a run with `--nocapture` reads as a checklist.
//!
//! Criterion 6 carries a known honest failure: at the reference depth
//! `W0 = 10 E_R` the exact zone-edge gap is 0.745 of the imbalance, 25% off,
//! outside the required 15% band. The test asserts the stated bound anyway
//! and fails; the other two clauses of that criterion hold.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latqed::config::parse_config;
use latqed::scenario::execute;
use latqed_core::bands::{
    check_hierarchy, exact_bloch, wkb_band_solve, BichromaticPotential, PhysicalParams,
};
use latqed_core::dynamics::{count_pairs, evolve, in_out_split, schwinger_scan, stable_dt};
use latqed_core::eigen::eigvalsh_tridiagonal;
use latqed_core::manybody::{
    build_fock_hamiltonian, full_spectrum, jordan_wigner_equivalence, HoppingKind,
};
use latqed_core::model::{
    build_hamiltonian, free_dispersion, sample_potential, ChainModel, PotentialShape, RampProfile,
};
use latqed_core::numerics::fit_line;
use latqed_core::oracles::{lattice_delta_energy, solve_ws_bound_states, WsParameters};
use latqed_core::spectral::{
    find_critical_strength, find_gap_states_windowed, trace_bound_state, DEFAULT_EDGE_MARGIN,
};

fn report(criterion: usize, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion} ({name}): {verdict} -- {detail}");
}

fn ws(depth: f64) -> PotentialShape {
    PotentialShape::WoodsSaxon {
        depth,
        steepness: 10.0,
        half_width: 1.0,
    }
}

/// Criticality: on a 20-wide box at spacing 0.02 the well of steepness 10 and
/// half-width 1 must dive at W_cr = 2.878 +- 0.03, and the continuum
/// matching-equation root must track the lattice level to 0.01 M at every
/// traced strength, all inside a two-minute budget.
#[test]
fn criterion_1_supercritical_well_depth() {
    let started = Instant::now();
    let chain = ChainModel::new(1000, 0.02, 1.0).unwrap();
    let family = |w: f64| ws(w);
    let grid: Vec<f64> = (0..=10).map(|i| 1.2 + 0.2 * i as f64).collect();
    let trace = trace_bound_state(&chain, family, &grid).unwrap();
    let w_last = *trace.w_values.last().unwrap();
    let w_gone = trace
        .threshold_crossed
        .first()
        .copied()
        .expect("the grid should cross the critical depth");
    let w_cr = find_critical_strength(&chain, family, w_last, w_gone, 1e-3, 1e-4).unwrap();

    let mut tracked: Option<f64> = None;
    let mut compared = 0usize;
    let mut max_dev: f64 = 0.0;
    for (&w, &e_lat) in trace.w_values.iter().zip(trace.e0_values.iter()) {
        let params = WsParameters {
            depth: w,
            steepness: 10.0,
            half_width: 1.0,
            mass: 1.0,
        };
        let roots = solve_ws_bound_states(&params).unwrap_or_default();
        let target = tracked.unwrap_or(e_lat);
        let Some(&e_cont) = roots
            .iter()
            .min_by(|a, b| (*a - target).abs().total_cmp(&(*b - target).abs()))
        else {
            continue;
        };
        tracked = Some(e_cont);
        compared += 1;
        max_dev = max_dev.max((e_cont - e_lat).abs());
    }

    let elapsed = started.elapsed().as_secs_f64();
    let depth_ok = (w_cr - 2.878).abs() <= 0.03;
    let oracle_ok = compared == trace.w_values.len() && max_dev <= 0.01;
    let time_ok = elapsed <= 120.0;
    let pass = depth_ok && oracle_ok && time_ok;
    report(
        1,
        "supercritical well depth",
        pass,
        &format!(
            "W_cr = {w_cr:.4} (target 2.878 +- 0.03), oracle max |dE0| = {max_dev:.2e} \
             over {compared}/{} points, {elapsed:.1} s (budget 120 s)",
            trace.w_values.len()
        ),
    );
    assert!(pass, "criticality acceptance failed");
}

/// Impurity oracle: the windowed lattice eigensolver on a 2000-site chain at
/// spacing 0.05 must match the closed-form cubic root to 5e-4 for five
/// strengths, and the cubic root must obey both asymptotic laws.
#[test]
fn criterion_2_impurity_level_oracle() {
    let chain = ChainModel::new(2000, 0.05, 1.0).unwrap();
    let mut max_dev: f64 = 0.0;
    for &phi in &[-0.1, -0.5, -1.0, -2.0, -5.0] {
        let (cubic, _) = lattice_delta_energy(phi, 1.0, chain.hopping).unwrap();
        let shape = PotentialShape::DeltaSite {
            strength: phi,
            site: 1000,
        };
        let potential = sample_potential(&shape, &chain).unwrap();
        let states = find_gap_states_windowed(&chain, &potential, DEFAULT_EDGE_MARGIN).unwrap();
        let lattice = states
            .iter()
            .map(|s| s.energy)
            .min_by(|a, b| (a - cubic).abs().total_cmp(&(b - cubic).abs()))
            .expect("an in-gap impurity level should exist");
        max_dev = max_dev.max((lattice - cubic).abs());
    }

    // Shallow impurities: the level leaves the upper edge as M (1 - 2 phi^2).
    let small: Vec<f64> = vec![-0.02, -0.05, -0.08, -0.1, -0.12, -0.15, -0.2];
    let xs: Vec<f64> = small.iter().map(|p| p * p).collect();
    let ys: Vec<f64> = small
        .iter()
        .map(|&p| lattice_delta_energy(p, 1.0, 20.0).unwrap().0)
        .collect();
    let shallow_fit = fit_line(&xs, &ys).unwrap();

    // Strong impurities: the level approaches -M as -M + 2 M / phi^2.
    let large: Vec<f64> = vec![-4.0, -5.0, -6.0, -8.0, -10.0];
    let xl: Vec<f64> = large.iter().map(|p| 1.0 / (p * p)).collect();
    let yl: Vec<f64> = large
        .iter()
        .map(|&p| lattice_delta_energy(p, 1.0, 20.0).unwrap().0)
        .collect();
    let strong_fit = fit_line(&xl, &yl).unwrap();

    let level_ok = max_dev <= 5e-4;
    let shallow_ok = shallow_fit.r_squared > 0.999 && shallow_fit.slope < 0.0;
    let strong_ok = strong_fit.r_squared > 0.999 && strong_fit.slope > 0.0;
    let pass = level_ok && shallow_ok && strong_ok;
    report(
        2,
        "impurity level oracle",
        pass,
        &format!(
            "max |dlambda| = {max_dev:.2e} (bound 5e-4), shallow fit slope {:.3} r^2 {:.6}, \
             strong fit slope {:.3} r^2 {:.6}",
            shallow_fit.slope, shallow_fit.r_squared, strong_fit.slope, strong_fit.r_squared
        ),
    );
    assert!(pass, "impurity oracle acceptance failed");
}

/// Dispersion: the free chain's extremal eigenvalues must converge to the
/// analytic band edges, the error at least halving when the chain doubles.
#[test]
fn criterion_3_free_dispersion_convergence() {
    let spacing = 0.1;
    let mass = 1.0;
    let errors = |n: usize| -> (f64, f64) {
        let chain = ChainModel::new(n, spacing, mass).unwrap();
        let h = build_hamiltonian(&chain, &vec![0.0; n]).unwrap();
        let evals = eigvalsh_tridiagonal(&h.diagonal, &h.off_diagonal).unwrap();
        let top = free_dispersion(0.0, mass, spacing);
        let edge = free_dispersion(core::f64::consts::PI / (2.0 * spacing), mass, spacing);
        let lam_max = evals.iter().cloned().fold(f64::MIN, f64::max);
        let lam_edge = evals
            .iter()
            .cloned()
            .filter(|&l| l > 0.0)
            .fold(f64::MAX, f64::min);
        ((lam_max - top).abs(), (lam_edge - edge).abs())
    };
    let (top_400, edge_400) = errors(400);
    let (top_800, edge_800) = errors(800);

    let bound_ok = top_400 <= 1.0 / 400.0
        && edge_400 <= 1.0 / 400.0
        && top_800 <= 1.0 / 800.0
        && edge_800 <= 1.0 / 800.0;
    let halving_ok = top_800 <= 0.55 * top_400 && edge_800 <= 0.55 * edge_400;
    let pass = bound_ok && halving_ok;
    report(
        3,
        "free dispersion convergence",
        pass,
        &format!(
            "band-top error {top_400:.2e} -> {top_800:.2e}, edge error \
             {edge_400:.2e} -> {edge_800:.2e} under N doubling"
        ),
    );
    assert!(pass, "dispersion acceptance failed");
}

/// Pair creation: every evolution stays unitary to 1e-8; a subcritical well
/// loses its pair yield monotonically down through 1e-3 as the ramp slows;
/// a supercritical well at W = 3.5 leaves at least half a pair in one
/// dominant mode, and across a ramp-doubling scan the state closes in on
/// exactly one pair in one mode: the yield's distance from 1 contracts over
/// the scan (it oscillates around 1, so per-step monotonicity is not the
/// physics) while the dominant-mode fraction climbs at every doubling.
/// Budget ten minutes.
#[test]
fn criterion_4_pair_creation_semantics() {
    let started = Instant::now();
    let chain = ChainModel::new(100, 0.2, 1.0).unwrap();
    let free = build_hamiltonian(&chain, &vec![0.0; 100]).unwrap();
    let split = in_out_split(&free).unwrap();

    let run = |depth: f64, tau: f64| -> (f64, f64, f64) {
        let shape = ws(depth);
        let potential = sample_potential(&shape, &chain).unwrap();
        let dt = stable_dt(&chain, &potential);
        let ramp = RampProfile::smooth_cycle(tau).unwrap();
        let evo = evolve(&chain, &shape, &ramp, dt).unwrap();
        let pairs = count_pairs(&evo.propagator, &split).unwrap();
        (pairs.n_pairs, pairs.dominant_fraction, evo.norm_drift)
    };

    let mut worst_drift: f64 = 0.0;
    let sub: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0]
        .iter()
        .map(|&tau| {
            let (n, dom, drift) = run(1.5, tau);
            worst_drift = worst_drift.max(drift);
            (n, dom)
        })
        .collect();
    let sup: Vec<(f64, f64)> = [2.5, 5.0, 10.0, 20.0]
        .iter()
        .map(|&tau| {
            let (n, dom, drift) = run(3.5, tau);
            worst_drift = worst_drift.max(drift);
            (n, dom)
        })
        .collect();
    let (n_final, dom_final) = *sup.last().unwrap();

    let unitary_ok = worst_drift <= 1e-8;
    let monotone_ok = sub.windows(2).all(|w| w[1].0 < w[0].0);
    let vanishing_ok = sub.last().unwrap().0 < 1e-3;
    let super_ok = n_final >= 0.5 && dom_final >= 0.90;
    let contraction_ok = (n_final - 1.0).abs() <= (sup[0].0 - 1.0).abs();
    let purity_ok = sup.windows(2).all(|w| w[1].1 > w[0].1);
    let elapsed = started.elapsed().as_secs_f64();
    let time_ok = elapsed <= 600.0;
    let pass = unitary_ok
        && monotone_ok
        && vanishing_ok
        && super_ok
        && contraction_ok
        && purity_ok
        && time_ok;
    report(
        4,
        "pair creation semantics",
        pass,
        &format!(
            "unitarity defect {worst_drift:.1e}; subcritical yield \
             {:.2e} -> {:.2e} monotone = {monotone_ok}; supercritical n = {n_final:.3} \
             dominant = {dom_final:.3}, |n - 1| {:.3} -> {:.3}, mode purity rising = \
             {purity_ok}; {elapsed:.0} s (budget 600 s)",
            sub[0].0,
            sub[3].0,
            (sup[0].0 - 1.0).abs(),
            (n_final - 1.0).abs()
        ),
    );
    assert!(pass, "pair creation acceptance failed");
}

/// Tunneling rate: over fields 0.20 to 0.50 on a 200-site chain the decay
/// rate must fit ln(rate) = slope / E + intercept with r^2 > 0.95 spanning
/// at least a decade, the slope within 30% of -pi M^2.
#[test]
fn criterion_5_tunneling_rate_fit() {
    let chain = ChainModel::new(200, 0.1, 1.0).unwrap();
    let fields: Vec<f64> = vec![0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50];
    let scan = schwinger_scan(&chain, &fields, (0, 199), 10.0, 60.0).unwrap();

    let included: Vec<f64> = scan
        .rates
        .iter()
        .zip(scan.included.iter())
        .filter(|(_, &inc)| inc)
        .map(|(&r, _)| r)
        .collect();
    let decades = if included.is_empty() {
        0.0
    } else {
        let max = included.iter().cloned().fold(f64::MIN, f64::max);
        let min = included.iter().cloned().fold(f64::MAX, f64::min);
        (max / min).log10()
    };
    let target = -core::f64::consts::PI;
    let slope_ok = (scan.fit_slope / target - 1.0).abs() <= 0.30;
    let fit_ok = scan.r_squared > 0.95;
    let span_ok = decades >= 1.0;
    let pass = slope_ok && fit_ok && span_ok;
    report(
        5,
        "tunneling rate fit",
        pass,
        &format!(
            "slope {:.4} vs -pi = {target:.4} ({:+.1}%), r^2 = {:.5}, {decades:.2} decades",
            scan.fit_slope,
            100.0 * (scan.fit_slope / target - 1.0),
            scan.r_squared
        ),
    );
    assert!(pass, "tunneling rate acceptance failed");
}

/// Band calibration at the reference point W0 = 10 E_R, dW = 1 E_R: the
/// zone-edge gap should equal the imbalance within 15% (this is the known
/// honest failure: the measured gap is 25% low), the semiclassical solver
/// must track the exact bands to 20% on the gap and 10% RMS on centered
/// shape, and the gap must grow linearly in dW below 0.2 E_R.
#[test]
fn criterion_6_band_gap_calibration() {
    let pot = BichromaticPotential::new(10.0, 1.0, 1.0).unwrap();
    let edge = exact_bloch(&pot, &[-1.0], 2, 64).unwrap();
    let gap = edge.upper[0] - edge.lower[0];
    let gap_ok = (gap - 1.0).abs() <= 0.15;

    let grid: Vec<f64> = (0..=16).map(|j| -1.0 + 2.0 * j as f64 / 16.0).collect();
    let wkb = wkb_band_solve(&pot, &grid).unwrap();
    let exact = exact_bloch(&pot, &grid, 2, 64).unwrap();
    let gap_ratio = wkb.gap() / exact.gap();
    let bw = exact.bandwidth();
    let centered_rms = |a: &[f64], b: &[f64]| -> f64 {
        let ma = a.iter().sum::<f64>() / a.len() as f64;
        let mb = b.iter().sum::<f64>() / b.len() as f64;
        let ss: f64 = a
            .iter()
            .zip(b.iter())
            .map(|(&x, &y)| ((x - ma) - (y - mb)).powi(2))
            .sum();
        (ss / a.len() as f64).sqrt()
    };
    let rms_lower = centered_rms(&wkb.lower, &exact.lower) / bw;
    let rms_upper = centered_rms(&wkb.upper, &exact.upper) / bw;
    let wkb_ok = (gap_ratio - 1.0).abs() <= 0.20 && rms_lower <= 0.10 && rms_upper <= 0.10;

    let dws = [0.02, 0.05, 0.08, 0.11, 0.14, 0.17, 0.20];
    let gaps: Vec<f64> = dws
        .iter()
        .map(|&dw| {
            let p = BichromaticPotential::new(10.0, dw, 1.0).unwrap();
            let band = exact_bloch(&p, &[-1.0], 2, 64).unwrap();
            band.upper[0] - band.lower[0]
        })
        .collect();
    let fit = fit_line(&dws, &gaps).unwrap();
    let linear_ok = fit.r_squared > 0.999;

    let pass = gap_ok && wkb_ok && linear_ok;
    report(
        6,
        "band gap calibration",
        pass,
        &format!(
            "zone-edge gap/dW = {gap:.4} (needs |gap - 1| <= 0.15, off by {:.1}%); \
             wkb/exact gap ratio {gap_ratio:.4}, centered shape rms {rms_lower:.3}/{rms_upper:.3} \
             of bandwidth; gap-vs-dW r^2 = {:.6}",
            100.0 * (gap - 1.0).abs(),
            fit.r_squared
        ),
    );
    assert!(
        wkb_ok && linear_ok,
        "the semiclassical and linearity clauses must hold"
    );
    assert!(
        gap_ok,
        "zone-edge gap {gap:.10} is {:.1}% away from the imbalance, outside the 15% band \
         (the perturbative gap formula keeps a 25% correction at this depth)",
        100.0 * (gap - 1.0).abs()
    );
}

/// Energy hierarchy at E_R = 7 uK, W0 = 10 uK, dW = 1 uK: the trap quantum
/// must come out at 33.5 +- 1 uK, the mass gap at exactly 500 nK, and the
/// hopping between 4 and 6 uK, with every ordering check passing.
#[test]
fn criterion_7_energy_scale_hierarchy() {
    let phys = PhysicalParams {
        recoil_energy: 7.0,
        primary_depth: 10.0,
        imbalance: 1.0,
        temperature: 0.1,
    };
    let rep = check_hierarchy(&phys, 3.0).unwrap();

    let trap_ok = (rep.trap_quantum - 33.5).abs() <= 1.0
        && (rep.trap_quantum - 4.0 * 70.0f64.sqrt()).abs() <= 0.01;
    let mass_ok = rep.mass_gap == 0.5;
    let hop_ok = (4.0..=6.0).contains(&rep.hopping) && (rep.hopping - 4.1659).abs() <= 1e-3;
    let order_ok = rep.all_pass;
    let pass = trap_ok && mass_ok && hop_ok && order_ok;
    report(
        7,
        "energy scale hierarchy",
        pass,
        &format!(
            "trap quantum {:.3} uK (4 sqrt(70) = {:.3}), mass gap {} uK, hopping {:.4} uK, \
             orderings pass = {}",
            rep.trap_quantum,
            4.0 * 70.0f64.sqrt(),
            rep.mass_gap,
            rep.hopping,
            rep.all_pass
        ),
    );
    assert!(pass, "hierarchy acceptance failed");
}

/// Boson-fermion mapping: across 50 random potentials per chain length the
/// fermion and hard-core-boson spectra must agree to 1e-10, and the free
/// many-body spectrum must equal the subset sums of the one-body levels.
#[test]
fn criterion_8_boson_fermion_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260819);
    let mut worst: f64 = 0.0;
    for &length in &[4usize, 6, 8, 10] {
        for _ in 0..50 {
            let potential: Vec<f64> = (0..length).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect();
            let dev = jordan_wigner_equivalence(length, length / 2, 1.0, &potential).unwrap();
            worst = worst.max(dev);
        }
    }

    let length = 10usize;
    let potential: Vec<f64> = (0..length).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect();
    let op = build_fock_hamiltonian(
        length,
        length / 2,
        1.0,
        &potential,
        HoppingKind::FermiHopping,
        None,
    )
    .unwrap();
    let mut many = full_spectrum(&op).unwrap();
    many.sort_by(f64::total_cmp);
    let off = vec![-0.5; length - 1];
    let levels = eigvalsh_tridiagonal(&potential, &off).unwrap();
    let mut sums: Vec<f64> = (0u32..1 << length)
        .filter(|m| m.count_ones() as usize == length / 2)
        .map(|m| {
            (0..length)
                .filter(|i| (m >> i) & 1 == 1)
                .map(|i| levels[i])
                .sum()
        })
        .collect();
    sums.sort_by(f64::total_cmp);
    let subset_dev = many
        .iter()
        .zip(sums.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let jw_ok = worst <= 1e-10;
    let subset_ok = many.len() == sums.len() && subset_dev <= 1e-9;
    let pass = jw_ok && subset_ok;
    report(
        8,
        "boson fermion equivalence",
        pass,
        &format!(
            "worst spectrum deviation {worst:.1e} over 200 draws; subset-sum deviation \
             {subset_dev:.1e} over {} levels",
            many.len()
        ),
    );
    assert!(pass, "equivalence acceptance failed");
}

/// Determinism: the same configuration must produce byte-identical tables
/// across repeated runs and across worker counts.
#[test]
fn criterion_9_byte_determinism() {
    let configs = [
        "schema_version = 1\nscenario = jw_check\nseed = 11\n\
         [parameters]\nsizes = 4, 6\ndraws = 4\n",
        "schema_version = 1\nscenario = bands\n\
         [parameters]\nprimary_depth = 10.0\nimbalance = 1.0\nn_momenta = 8\n",
        "schema_version = 1\nscenario = adiabatic_scan\n\
         [parameters]\nnum_sites = 32\nspacing = 0.25\nmass = 1.0\ndepth = 1.0\n\
         durations = 0.5, 1.0\n",
    ];
    let mut checked = 0usize;
    for text in &configs {
        let config = parse_config(text).unwrap();
        let base = execute(&config).unwrap();
        let again = execute(&config).unwrap();
        assert_eq!(base.files, again.files, "rerun changed bytes");
        for jobs in [1usize, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .unwrap();
            let pooled = pool.install(|| execute(&config)).unwrap();
            assert_eq!(
                base.files, pooled.files,
                "worker count {jobs} changed bytes"
            );
            checked += 1;
        }
    }
    report(
        9,
        "byte determinism",
        true,
        &format!(
            "{} configurations byte-identical across reruns and {checked} worker-count variations",
            configs.len()
        ),
    );
}
