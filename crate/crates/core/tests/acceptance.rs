//! Acceptance suite: every headline number the workbench must reproduce, one
//! test and one printed PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p boundbell-core --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use boundbell_core::bell::{
    bell_lhs, bell_operator, correlation, index_to_tuple, is_violated, lhv_bound, nbella_spec,
    optimize_settings, sign_b, smolin_settings, wwzb_coefficients, MeasurementSetting,
    SettingFamily,
};
use boundbell_core::commsim::{
    best_classical_success, classical_success_bound, g_explicit, monte_carlo_success,
    monte_carlo_success_with_workers, quantum_exact_success, task_from_sign,
};
use boundbell_core::linalg::BipartitionMask;
use boundbell_core::separability::{entanglement_threshold, ppt_scan};
use boundbell_core::states::{
    ghz, noisy_smolin, separable_decomposition_third, smolin, smolin_pauli, werner, DensityMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

const SQRT2: f64 = std::f64::consts::SQRT_2;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn report(num: usize, what: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {num:02}: {what} ({detail})");
    assert!(ok, "criterion {num:02}: {what} — {detail}");
}

fn random_family(n: usize, rng: &mut impl Rng) -> SettingFamily {
    SettingFamily::new(
        (0..n)
            .map(|_| {
                let mut dir = || {
                    let z: f64 = rng.gen_range(-1.0..=1.0);
                    MeasurementSetting::from_angles(
                        z.acos(),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                };
                (dir(), dir())
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn criterion_01_dual_smolin_construction() {
    let diff = smolin().matrix().max_abs_diff(smolin_pauli().matrix());
    report(
        1,
        "Bell-basis and Pauli-form Smolin constructions agree entrywise",
        diff < 1e-14,
        &format!("max |delta| = {diff:.2e}, tol 1e-14"),
    );
}

#[test]
fn criterion_02_separable_decomposition_at_one_third() {
    let (terms, assembled) = separable_decomposition_third();
    let target = noisy_smolin(1.0 / 3.0).unwrap();
    let diff = assembled.matrix().max_abs_diff(target.matrix());
    let ok = terms.len() == 6 && diff < 1e-14;
    report(
        2,
        "six-term separable mixture equals the p = 1/3 state",
        ok,
        &format!("max |delta| = {diff:.2e}, tol 1e-14"),
    );
}

#[test]
fn criterion_03_bell_violation_scales_with_noise() {
    let settings = smolin_settings();
    let spec = nbella_spec();
    let mut worst = 0.0f64;
    let mut flags_ok = true;
    for p in [0.0, 0.25, FRAC_1_SQRT_2, 0.9, 1.0] {
        let lhs = bell_lhs(&noisy_smolin(p).unwrap(), &settings, &spec).unwrap();
        worst = worst.max((lhs - 2.0 * SQRT2 * p).abs());
        let expected_flag = p > FRAC_1_SQRT_2;
        flags_ok &= is_violated(lhs, spec.classical_bound()) == expected_flag;
    }
    report(
        3,
        "LHS equals 2*sqrt(2)*p and flips the violation flag above 1/sqrt(2)",
        worst < 1e-10 && flags_ok,
        &format!("max |LHS - 2sqrt2 p| = {worst:.2e}, tol 1e-10; flags ok = {flags_ok}"),
    );
}

#[test]
fn criterion_04_operator_ceiling() {
    let spec = nbella_spec();
    let eigs = bell_operator(&smolin_settings(), &spec)
        .unwrap()
        .hermitian_eigenvalues()
        .unwrap();
    let radius = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let at_settings = (radius - 2.0 * SQRT2).abs();

    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let mut excess = f64::NEG_INFINITY;
    for _ in 0..200 {
        let family = random_family(4, &mut rng);
        let eigs = bell_operator(&family, &spec)
            .unwrap()
            .hermitian_eigenvalues()
            .unwrap();
        let r = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        excess = excess.max(r - 2.0 * SQRT2);
    }
    report(
        4,
        "Bell operator spectral radius is 2*sqrt(2) and never exceeds it",
        at_settings < 1e-10 && excess <= 1e-9,
        &format!("|radius - 2sqrt2| = {at_settings:.2e}; worst excess over 200 random families = {excess:.2e}"),
    );
}

#[test]
fn criterion_05_lhv_bounds_by_enumeration() {
    let nbella = lhv_bound(&nbella_spec()).unwrap();
    let wwzb = lhv_bound(&wwzb_coefficients(&sign_b())).unwrap();
    report(
        5,
        "exhaustive 256-strategy enumeration gives bounds 2 and 16",
        nbella == 2.0 && wwzb == 16.0,
        &format!("nbella bound = {nbella}, sign-table bound = {wwzb}"),
    );
}

#[test]
fn criterion_06_ppt_structure_and_threshold() {
    let mut worst_single = 0.0f64;
    let mut worst_pair = 0.0f64;
    let mut signs_ok = true;
    for p in [0.0, 0.2, 1.0 / 3.0, 0.6, 0.9, 1.0] {
        let rho = noisy_smolin(p).unwrap();
        let reports = ppt_scan(&rho).unwrap();
        for r in &reports[..4] {
            worst_single = worst_single.max((r.min_eigenvalue - (1.0 - 3.0 * p) / 16.0).abs());
            signs_ok &= r.is_ppt == (p <= 1.0 / 3.0 + 1e-12);
        }
        for r in &reports[4..] {
            worst_pair = worst_pair.max((r.min_eigenvalue - (1.0 - p) / 16.0).abs());
            signs_ok &= r.is_ppt;
        }
    }
    let mask = BipartitionMask::new(4, &[0]).unwrap();
    let threshold = entanglement_threshold(noisy_smolin, &mask, 0.0, 1.0).unwrap();
    let threshold_err = (threshold - 1.0 / 3.0).abs();
    report(
        6,
        "single cuts follow (1-3p)/16 with threshold 1/3, symmetric cuts stay PPT at (1-p)/16",
        worst_single < 1e-10 && worst_pair < 1e-10 && signs_ok && threshold_err < 1e-8,
        &format!(
            "single dev {worst_single:.2e}, pair dev {worst_pair:.2e}, threshold err {threshold_err:.2e}"
        ),
    );
}

#[test]
fn criterion_07_werner_comparison() {
    let mask = BipartitionMask::new(2, &[0]).unwrap();
    let threshold = entanglement_threshold(werner, &mask, 0.0, 1.0).unwrap();
    let threshold_err = (threshold - 1.0 / 3.0).abs();

    let spec = boundbell_core::bell::chsh_spec();
    let mut worst = 0.0f64;
    for p in [0.8, 1.0] {
        let (_, value) = optimize_settings(&werner(p).unwrap(), &spec, 20, 7).unwrap();
        worst = worst.max((value - 2.0 * SQRT2 * p).abs());
    }
    report(
        7,
        "Werner family: PT threshold 1/3 and optimized CHSH value 2*sqrt(2)*p",
        threshold_err < 1e-8 && worst < 1e-6,
        &format!("threshold err {threshold_err:.2e}; CHSH dev {worst:.2e}, tol 1e-6"),
    );
}

#[test]
fn criterion_08_game_exact_values() {
    let task = task_from_sign(&sign_b(), 16.0).unwrap();
    let bound = classical_success_bound(&task);
    let (best, _) = best_classical_success(&task).unwrap();
    let quantum =
        quantum_exact_success(&noisy_smolin(1.0).unwrap(), &smolin_settings(), &task).unwrap();
    let quantum_err = (quantum - 0.5 * (1.0 + FRAC_1_SQRT_2)).abs();
    report(
        8,
        "classical success is exactly 3/4, quantum success is (1 + 1/sqrt(2))/2",
        bound == 0.75 && best == 0.75 && quantum_err < 1e-12,
        &format!("bound {bound}, enumerated best {best}, quantum err {quantum_err:.2e}"),
    );
}

#[test]
fn criterion_09_game_simulation_reproducibility() {
    let rho = noisy_smolin(1.0).unwrap();
    let settings = smolin_settings();
    let task = task_from_sign(&sign_b(), 16.0).unwrap();
    let trials = 1_000_000;

    let est = monte_carlo_success(&rho, &settings, &task, trials, 42).unwrap();
    let stat_dev = (est.p_hat - 0.853_553_39).abs();
    let stat_ok = stat_dev <= 3.0 * est.std_error;

    let rerun = monte_carlo_success(&rho, &settings, &task, trials, 42).unwrap();
    let mut identical = est == rerun;
    for workers in [2usize, 5] {
        let with_workers =
            monte_carlo_success_with_workers(&rho, &settings, &task, trials, 42, workers).unwrap();
        identical &= est == with_workers;
    }
    report(
        9,
        "10^6 seeded trials hit the quantum value and replay bit-identically",
        stat_ok && identical,
        &format!(
            "p_hat = {:.7}, |dev| = {stat_dev:.2e} vs 3se = {:.2e}, bit-identical = {identical}",
            est.p_hat,
            3.0 * est.std_error
        ),
    );
}

#[test]
fn criterion_10_g_equivalence() {
    let derived = wwzb_coefficients(&sign_b());
    let mut worst = 0.0f64;
    for idx in 0..16 {
        let t = index_to_tuple(4, idx);
        let explicit = g_explicit(&[t[0], t[1], t[2], t[3]]);
        worst = worst.max((explicit - derived.coefficients()[idx]).abs());
    }
    let total = derived.sum_abs();
    report(
        10,
        "explicit trigonometric g equals the sign-function construction",
        worst < 1e-12 && total == 32.0,
        &format!("max |delta| = {worst:.2e}, sum |g| = {total}"),
    );
}

#[test]
fn criterion_11_oracle_equivalence_and_ghz() {
    let mut rng = ChaCha12Rng::seed_from_u64(1111);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let p: f64 = rng.gen_range(0.0..=1.0);
        let rho = noisy_smolin(p).unwrap();
        let family = random_family(4, &mut rng);
        let tuple = index_to_tuple(4, rng.gen_range(0..16));
        let dense = correlation(&rho, &family, &tuple).unwrap();
        let closed: f64 = (0..3)
            .map(|i| {
                tuple
                    .iter()
                    .enumerate()
                    .map(|(j, &k)| family.setting(j, k).direction()[i])
                    .product::<f64>()
            })
            .sum::<f64>()
            * p;
        worst = worst.max((dense - closed).abs());
    }

    let ghz_state = DensityMatrix::from_pure(&ghz(4).unwrap()).unwrap();
    let (_, value) = optimize_settings(&ghz_state, &nbella_spec(), 20, 11).unwrap();
    let ghz_err = (value - 2.0 * SQRT2).abs();
    report(
        11,
        "dense correlations equal the Pauli contraction; GHZ reaches 2*sqrt(2)",
        worst < 1e-12 && ghz_err < 1e-6,
        &format!("500-draw max |delta| = {worst:.2e}; GHZ optimum err {ghz_err:.2e}"),
    );
}
