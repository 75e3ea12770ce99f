//! The distributed communication game built on a correlation Bell inequality.
//!
//! Each of N parties receives a two-bit input (x_i in {1,2}, y_i in {-1,1}),
//! measures the x_i-th observable of its station, broadcasts the single bit
//! e_i = a_i * y_i, and everyone guesses f = y_1...y_N S[g(x)] as the product
//! of the broadcast bits. The x inputs are drawn from Q = |g| / sum|g|; the
//! g table comes from a sign function via the same construction the Bell
//! module uses, so the quantum success probability exceeds every classical
//! protocol exactly when the underlying inequality is violated.
//!
//! Monte Carlo runs are chunked with one RNG stream per fixed-size chunk, so
//! results are bit-identical for a given seed no matter how many worker
//! threads process the chunks.

use crate::bell::{correlation, index_to_tuple, tuple_to_index, BellSpec, SettingFamily, SignFunction};
use crate::error::{Error, Result};
use crate::linalg::{kron_all, DenseMatrix};
use crate::states::DensityMatrix;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Trials per RNG stream in Monte Carlo runs. Fixed so that the trial ->
/// stream assignment never depends on the worker count.
const CHUNK_TRIALS: u64 = 1 << 14;

/// Name recorded in estimates for reproducibility.
const GENERATOR: &str = "chacha12";

/// One communication game: coefficient table, input distribution, and the
/// classical bound of the underlying inequality.
#[derive(Debug, Clone)]
pub struct TaskSpec {
    bell: BellSpec,
    q: Vec<f64>,
}

impl TaskSpec {
    pub fn num_parties(&self) -> usize {
        self.bell.num_parties()
    }

    pub fn bell(&self) -> &BellSpec {
        &self.bell
    }

    pub fn g(&self) -> &[f64] {
        self.bell.coefficients()
    }

    /// Input distribution Q(x) = |g(x)| / sum |g|.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn classical_bound(&self) -> f64 {
        self.bell.classical_bound()
    }

    pub fn sum_abs_g(&self) -> f64 {
        self.bell.sum_abs()
    }

    /// S[g(x)] = g/|g|, with the (never drawn) g = 0 case pinned to +1.
    pub fn sign_of_g(&self, index: usize) -> i8 {
        if self.g()[index] < 0.0 {
            -1
        } else {
            1
        }
    }
}

/// One protocol round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    /// Setting inputs x_i in {1,2}.
    pub x: Vec<u8>,
    /// Random inputs y_i in {-1,1}.
    pub y: Vec<i8>,
    /// Measurement outcomes a_i in {-1,1}.
    pub outcomes: Vec<i8>,
    /// Broadcast bits e_i = a_i * y_i.
    pub broadcast: Vec<i8>,
    /// Shared guess: the product of all broadcast bits and own y_i... i.e.
    /// y_1...y_N a_1...a_N.
    pub guess: i8,
    /// Target f = y_1...y_N S[g(x)].
    pub target: i8,
    pub success: bool,
}

/// Result of a seeded Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessEstimate {
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub std_error: f64,
    pub seed: u64,
    pub generator: &'static str,
}

/// The explicit trigonometric form of the four-party coefficient function;
/// x_4 enters only through the sign of the half-angle offset.
pub fn g_explicit(x: &[u8; 4]) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let [x1, x2, x3, _] = x.map(f64::from);
    let amp = 4.0 * std::f64::consts::SQRT_2;
    let flip = (-1.0f64).powi(x[3] as i32);
    amp * ((x1 - x2) * FRAC_PI_2).cos() * ((1.5 * flip - x3) * FRAC_PI_2).sin()
        + amp * ((x1 + x2) * FRAC_PI_2).cos() * ((1.5 * flip + x3) * FRAC_PI_2).sin()
}

/// Builds the game for a sign function: g from the two-setting inequality
/// construction, Q = |g| / sum|g|, and the supplied classical bound.
pub fn task_from_sign(sign: &SignFunction, classical_bound: f64) -> Result<TaskSpec> {
    let derived = crate::bell::wwzb_coefficients(sign);
    let bell = BellSpec::from_table(
        derived.num_parties(),
        derived.coefficients().to_vec(),
        classical_bound,
    )?;
    let total = bell.sum_abs();
    if total == 0.0 {
        return Err(Error::InvalidState(
            "cannot normalize an all-zero coefficient table".into(),
        ));
    }
    let q = bell.coefficients().iter().map(|g| g.abs() / total).collect();
    Ok(TaskSpec { bell, q })
}

/// Upper bound (1/2)(1 + B / sum|g|) on any classical protocol's success.
pub fn classical_success_bound(task: &TaskSpec) -> f64 {
    0.5 * (1.0 + task.classical_bound() / task.sum_abs_g())
}

/// Deterministic reply table: per party, the answers to x_j = 1 and x_j = 2.
pub type Strategy = Vec<[i8; 2]>;

/// Exhaustive maximum of the classical success probability over all 2^{2N}
/// deterministic reply tables, together with the first maximizer in
/// lexicographic order of the flattened table (+1 before -1).
pub fn best_classical_success(task: &TaskSpec) -> Result<(f64, Strategy)> {
    let n = task.num_parties();
    if n > 5 {
        return Err(Error::ParameterOutOfRange(format!(
            "strategy enumeration capped at 5 parties, got {n}"
        )));
    }
    let size = 1usize << n;
    let mut best = f64::NEG_INFINITY;
    let mut best_strategy = 0usize;
    for packed in 0..(1usize << (2 * n)) {
        let mut success = 0.0f64;
        for x in 0..size {
            let q = task.q()[x];
            if q == 0.0 {
                continue;
            }
            let prod = packed_reply_product(packed, n, x);
            success += q * 0.5 * (1.0 + f64::from(task.sign_of_g(x) as i32 * prod));
        }
        if success > best {
            best = success;
            best_strategy = packed;
        }
    }
    Ok((best, unpack_strategy(best_strategy, n)))
}

/// Reply product prod_j a_j(x_j) for a packed strategy. Packing puts party
/// 1's replies in the most significant bits, reply to x=1 before x=2, with a
/// set bit meaning -1, so ascending packed order is lexicographic order.
fn packed_reply_product(packed: usize, num_parties: usize, x_index: usize) -> i32 {
    let mut parity = 0u32;
    for j in 0..num_parties {
        let choice = (x_index >> (num_parties - 1 - j)) & 1;
        let bit_pos = 2 * (num_parties - 1 - j) + (1 - choice);
        parity += ((packed >> bit_pos) & 1) as u32;
    }
    1 - 2 * ((parity & 1) as i32)
}

fn unpack_strategy(packed: usize, num_parties: usize) -> Strategy {
    (0..num_parties)
        .map(|j| {
            let to_reply = |choice: usize| -> i8 {
                let bit_pos = 2 * (num_parties - 1 - j) + (1 - choice);
                if (packed >> bit_pos) & 1 == 1 {
                    -1
                } else {
                    1
                }
            };
            [to_reply(0), to_reply(1)]
        })
        .collect()
}

/// Exact quantum success probability
/// (1/2)(1 + sum_x g(x) E(x) / sum|g|), with E from the dense-trace
/// correlation function.
pub fn quantum_exact_success(
    rho: &DensityMatrix,
    settings: &SettingFamily,
    task: &TaskSpec,
) -> Result<f64> {
    let n = task.num_parties();
    let mut acc = 0.0f64;
    for (idx, &g) in task.g().iter().enumerate() {
        if g != 0.0 {
            acc += g * correlation(rho, settings, &index_to_tuple(n, idx))?;
        }
    }
    Ok(0.5 * (1.0 + acc / task.sum_abs_g()))
}

/// Born-rule outcome distribution for inputs `x`: the probability of every
/// outcome tuple a in {-1,1}^N under the product projectors
/// (I + a_j n_j . sigma)/2. Index bit convention: party 1 at the MSB, a set
/// bit meaning a_j = -1.
pub fn outcome_distribution(
    rho: &DensityMatrix,
    settings: &SettingFamily,
    x: &[u8],
) -> Result<Vec<f64>> {
    let n = settings.num_parties();
    if rho.num_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "state on {} qubits vs {n} parties",
            rho.num_qubits()
        )));
    }
    tuple_to_index(n, x)?;
    let id = DenseMatrix::identity(2);
    // Per party: projectors onto outcome +1 and -1 of the chosen observable.
    let projectors: Vec<[DenseMatrix; 2]> = x
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let o = crate::bell::observable(settings.setting(j, k));
            [
                id.add(&o).expect("2x2").scale_re(0.5),
                id.sub(&o).expect("2x2").scale_re(0.5),
            ]
        })
        .collect();
    let mut probs = Vec::with_capacity(1 << n);
    for a_idx in 0..(1usize << n) {
        let factors: Vec<DenseMatrix> = (0..n)
            .map(|j| projectors[j][(a_idx >> (n - 1 - j)) & 1].clone())
            .collect();
        let t = rho.matrix().trace_product(&kron_all(&factors))?;
        if t.im.abs() > 1e-12 {
            return Err(Error::NumericalInconsistency(format!(
                "outcome probability has imaginary part {:e}",
                t.im
            )));
        }
        probs.push(t.re);
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-10 || probs.iter().any(|&p| p < -1e-10) {
        return Err(Error::NumericalInconsistency(format!(
            "outcome probabilities sum to {sum}"
        )));
    }
    for p in &mut probs {
        *p = p.max(0.0);
    }
    Ok(probs)
}

/// Samples one outcome tuple by inverse CDF over the exact Born distribution.
pub fn born_sample(
    rho: &DensityMatrix,
    settings: &SettingFamily,
    x: &[u8],
    rng: &mut impl RngCore,
) -> Result<Vec<i8>> {
    let probs = outcome_distribution(rho, settings, x)?;
    let idx = sample_index(&probs, rng);
    Ok(decode_outcomes(idx, x.len()))
}

fn sample_index(probs: &[f64], rng: &mut impl RngCore) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0f64;
    let mut last_supported = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last_supported = i;
        if u < acc {
            return i;
        }
    }
    last_supported
}

fn decode_outcomes(index: usize, n: usize) -> Vec<i8> {
    (0..n)
        .map(|j| if (index >> (n - 1 - j)) & 1 == 1 { -1 } else { 1 })
        .collect()
}

fn sign_product(values: &[i8]) -> i8 {
    let negatives = values.iter().filter(|&&v| v < 0).count();
    if negatives % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Precomputed per-x sampling tables for the game rounds.
struct RoundTables {
    n: usize,
    /// Cumulative Q over the 2^N inputs.
    x_cdf: Vec<f64>,
    /// Born outcome distribution per input index (only for supported x).
    outcome_probs: Vec<Option<Vec<f64>>>,
}

impl RoundTables {
    fn new(rho: &DensityMatrix, settings: &SettingFamily, task: &TaskSpec) -> Result<Self> {
        let n = task.num_parties();
        if settings.num_parties() != n {
            return Err(Error::DimensionMismatch(format!(
                "settings for {} parties vs {n}-party task",
                settings.num_parties()
            )));
        }
        let mut acc = 0.0;
        let x_cdf = task
            .q()
            .iter()
            .map(|q| {
                acc += q;
                acc
            })
            .collect();
        let mut outcome_probs = Vec::with_capacity(1 << n);
        for x_idx in 0..(1usize << n) {
            if task.q()[x_idx] > 0.0 {
                let tuple = index_to_tuple(n, x_idx);
                outcome_probs.push(Some(outcome_distribution(rho, settings, &tuple)?));
            } else {
                outcome_probs.push(None);
            }
        }
        Ok(Self {
            n,
            x_cdf,
            outcome_probs,
        })
    }

    fn sample_x(&self, task: &TaskSpec, rng: &mut impl RngCore) -> usize {
        let u: f64 = rng.gen();
        let mut pick = self.x_cdf.len() - 1;
        for (i, &c) in self.x_cdf.iter().enumerate() {
            if task.q()[i] > 0.0 && u < c {
                pick = i;
                break;
            }
        }
        pick
    }

    /// Draw order per round is fixed: x, then outcomes, then the y bits.
    fn play(&self, task: &TaskSpec, rng: &mut impl RngCore) -> RunRecord {
        let n = self.n;
        let x_idx = self.sample_x(task, rng);
        let probs = self.outcome_probs[x_idx]
            .as_ref()
            .expect("sampled x is supported");
        let a_idx = sample_index(probs, rng);
        let y_bits = (rng.next_u32() as usize) & ((1 << n) - 1);

        let x = index_to_tuple(n, x_idx);
        let outcomes = decode_outcomes(a_idx, n);
        let y = decode_outcomes(y_bits, n);
        let broadcast: Vec<i8> = outcomes.iter().zip(&y).map(|(a, yi)| a * yi).collect();
        let guess = sign_product(&broadcast);
        let target = sign_product(&y) * task.sign_of_g(x_idx);
        let success = guess == target;
        // The y values cancel in guess * target, leaving the outcome parity
        // against S[g(x)]; this must hold on every round.
        assert_eq!(
            guess * target,
            task.sign_of_g(x_idx) * sign_product(&outcomes),
            "round identity violated"
        );
        RunRecord {
            x,
            y,
            outcomes,
            broadcast,
            guess,
            target,
            success,
        }
    }
}

/// Plays a single protocol round with a caller-supplied RNG.
pub fn simulate_round(
    rho: &DensityMatrix,
    settings: &SettingFamily,
    task: &TaskSpec,
    rng: &mut impl RngCore,
) -> Result<RunRecord> {
    Ok(RoundTables::new(rho, settings, task)?.play(task, rng))
}

/// Seeded Monte Carlo estimate of the game's success probability.
pub fn monte_carlo_success(
    rho: &DensityMatrix,
    settings: &SettingFamily,
    task: &TaskSpec,
    trials: u64,
    seed: u64,
) -> Result<SuccessEstimate> {
    monte_carlo_success_with_workers(rho, settings, task, trials, seed, 1)
}

/// As [`monte_carlo_success`], splitting the fixed chunk sequence across
/// `workers` threads. The estimate is bit-identical for every worker count.
pub fn monte_carlo_success_with_workers(
    rho: &DensityMatrix,
    settings: &SettingFamily,
    task: &TaskSpec,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SuccessEstimate> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange("trials must be >= 1".into()));
    }
    if workers == 0 {
        return Err(Error::ParameterOutOfRange("workers must be >= 1".into()));
    }
    let tables = RoundTables::new(rho, settings, task)?;
    let num_chunks = trials.div_ceil(CHUNK_TRIALS);

    let run_chunk = |chunk: u64| -> u64 {
        let lo = chunk * CHUNK_TRIALS;
        let hi = (lo + CHUNK_TRIALS).min(trials);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let mut successes = 0u64;
        for _ in lo..hi {
            if tables.play(task, &mut rng).success {
                successes += 1;
            }
        }
        successes
    };

    let successes: u64 = if workers == 1 {
        (0..num_chunks).map(run_chunk).sum()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let run_chunk = &run_chunk;
                    scope.spawn(move || {
                        (w..num_chunks)
                            .step_by(workers)
                            .map(run_chunk)
                            .sum::<u64>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker")).sum()
        })
    };

    let p_hat = successes as f64 / trials as f64;
    Ok(SuccessEstimate {
        trials,
        successes,
        p_hat,
        std_error: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        seed,
        generator: GENERATOR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{lhv_bound, sign_b, smolin_settings, MeasurementSetting, SettingFamily};
    use crate::states::noisy_smolin;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn sign_b_task() -> TaskSpec {
        task_from_sign(&sign_b(), 16.0).unwrap()
    }

    fn random_family(n: usize, rng: &mut impl Rng) -> SettingFamily {
        let dir = |rng: &mut dyn RngCore| {
            let z: f64 = rng.gen_range(-1.0..=1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            MeasurementSetting::from_angles(z.acos(), phi)
        };
        SettingFamily::new((0..n).map(|_| (dir(rng), dir(rng))).collect()).unwrap()
    }

    #[test]
    fn explicit_g_corner_values() {
        assert!((g_explicit(&[1, 1, 1, 1]) - 8.0).abs() < 1e-12);
        assert!((g_explicit(&[2, 2, 2, 2]) + 8.0).abs() < 1e-12);
        let total: f64 = (0..16)
            .map(|i| {
                let t = index_to_tuple(4, i);
                g_explicit(&[t[0], t[1], t[2], t[3]]).abs()
            })
            .sum();
        assert!((total - 32.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_g_equals_sign_function_construction() {
        let task = sign_b_task();
        for i in 0..16 {
            let t = index_to_tuple(4, i);
            let expect = g_explicit(&[t[0], t[1], t[2], t[3]]);
            assert!(
                (task.g()[i] - expect).abs() < 1e-12,
                "tuple {t:?}: {} vs {expect}",
                task.g()[i]
            );
        }
    }

    #[test]
    fn input_distribution_is_supported_on_four_tuples() {
        let task = sign_b_task();
        assert_eq!(task.q()[tuple_to_index(4, &[1, 1, 1, 1]).unwrap()], 0.25);
        assert_eq!(task.q()[tuple_to_index(4, &[1, 2, 1, 1]).unwrap()], 0.0);
        let total: f64 = task.q().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(task.q().iter().filter(|&&q| q > 0.0).count(), 4);
    }

    #[test]
    fn classical_bound_values() {
        assert_eq!(classical_success_bound(&sign_b_task()), 0.75);
        // Bound saturates at certainty when B = sum|g|.
        let saturated = task_from_sign(&sign_b(), 32.0).unwrap();
        assert_eq!(classical_success_bound(&saturated), 1.0);
    }

    #[test]
    fn enumerated_classical_optimum_matches_bound() {
        let (best, strategy) = best_classical_success(&sign_b_task()).unwrap();
        assert_eq!(best, 0.75);
        assert_eq!(strategy.len(), 4);
        // The parity identity ties the enumeration to the LHV bound.
        let task = sign_b_task();
        let expect = 0.5 * (1.0 + lhv_bound(task.bell()).unwrap() / task.sum_abs_g());
        assert_eq!(best, expect);
    }

    #[test]
    fn classical_enumeration_identity_for_random_signs() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for n in [2usize, 3, 4] {
            for _ in 0..7 {
                let values: Vec<i8> = (0..(1 << n))
                    .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
                    .collect();
                let sign = SignFunction::from_values(n, values).unwrap();
                let task = task_from_sign(&sign, (1u64 << n) as f64).unwrap();
                let (best, _) = best_classical_success(&task).unwrap();
                let expect = 0.5 * (1.0 + lhv_bound(task.bell()).unwrap() / task.sum_abs_g());
                assert!((best - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_task_is_won_outright() {
        // The constant sign function concentrates Q on a single tuple.
        let task = task_from_sign(&SignFunction::constant_plus(2), 4.0).unwrap();
        assert_eq!(task.q().iter().filter(|&&q| q > 0.0).count(), 1);
        let (best, _) = best_classical_success(&task).unwrap();
        assert_eq!(best, 1.0);
    }

    #[test]
    fn exact_quantum_success_values() {
        let task = sign_b_task();
        let s = smolin_settings();
        let p1 = quantum_exact_success(&noisy_smolin(1.0).unwrap(), &s, &task).unwrap();
        assert!((p1 - 0.5 * (1.0 + 1.0 / SQRT2)).abs() < 1e-12);

        let p0 = quantum_exact_success(&noisy_smolin(0.0).unwrap(), &s, &task).unwrap();
        assert!((p0 - 0.5).abs() < 1e-14);

        let pc = quantum_exact_success(&noisy_smolin(1.0 / SQRT2).unwrap(), &s, &task).unwrap();
        assert!((pc - 0.75).abs() < 1e-12);
    }

    #[test]
    fn born_distribution_is_uniform_for_white_noise() {
        let probs = outcome_distribution(
            &noisy_smolin(0.0).unwrap(),
            &smolin_settings(),
            &[1, 1, 1, 1],
        )
        .unwrap();
        for p in probs {
            assert!((p - 1.0 / 16.0).abs() < 1e-14);
        }
    }

    #[test]
    fn born_distributions_normalize_for_random_inputs() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..100 {
            let p: f64 = rng.gen_range(0.0..=1.0);
            let rho = noisy_smolin(p).unwrap();
            let family = random_family(4, &mut rng);
            let x = index_to_tuple(4, rng.gen_range(0..16));
            let probs = outcome_distribution(&rho, &family, &x).unwrap();
            let sum: f64 = probs.iter().sum();
            assert!((sum - 1.0).abs() < 1e-10);
            assert!(probs.iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn sampled_outcome_parity_matches_correlation() {
        let rho = noisy_smolin(1.0).unwrap();
        let s = smolin_settings();
        let x = [1u8, 1, 1, 1];
        let mut rng = ChaCha12Rng::seed_from_u64(5150);
        let trials = 20_000;
        let mut sum = 0i64;
        for _ in 0..trials {
            let a = born_sample(&rho, &s, &x, &mut rng).unwrap();
            sum += i64::from(sign_product(&a));
        }
        let mean = sum as f64 / trials as f64;
        let expect = 1.0 / SQRT2;
        let se = ((1.0 - expect * expect) / trials as f64).sqrt();
        assert!(
            (mean - expect).abs() < 3.0 * se,
            "mean {mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn round_records_are_internally_consistent() {
        let rho = noisy_smolin(0.8).unwrap();
        let s = smolin_settings();
        let task = sign_b_task();
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..200 {
            let r = simulate_round(&rho, &s, &task, &mut rng).unwrap();
            for ((a, y), e) in r.outcomes.iter().zip(&r.y).zip(&r.broadcast) {
                assert_eq!(a * y, *e);
            }
            assert_eq!(r.guess, sign_product(&r.broadcast));
            let x_idx = tuple_to_index(4, &r.x).unwrap();
            assert_eq!(r.target, sign_product(&r.y) * task.sign_of_g(x_idx));
            assert_eq!(r.success, r.guess == r.target);
            assert!(task.q()[x_idx] > 0.0, "unsupported x drawn");
        }
    }

    #[test]
    fn monte_carlo_matches_the_coin_flip_baseline() {
        let est = monte_carlo_success(
            &noisy_smolin(0.0).unwrap(),
            &smolin_settings(),
            &sign_b_task(),
            100_000,
            1,
        )
        .unwrap();
        assert!((est.p_hat - 0.5).abs() < 3.0 * est.std_error);
        assert_eq!(est.generator, "chacha12");
    }

    #[test]
    fn monte_carlo_tracks_the_exact_value() {
        let rho = noisy_smolin(0.9).unwrap();
        let s = smolin_settings();
        let task = sign_b_task();
        let exact = quantum_exact_success(&rho, &s, &task).unwrap();
        for trials in [10_000u64, 100_000, 1_000_000] {
            let est = monte_carlo_success(&rho, &s, &task, trials, 4242).unwrap();
            assert!(
                (est.p_hat - exact).abs() <= 4.0 * est.std_error,
                "trials {trials}: {} vs {exact}",
                est.p_hat
            );
        }
    }

    #[test]
    fn quantum_advantage_iff_bell_violation() {
        let task = sign_b_task();
        let s = smolin_settings();
        let spec = crate::bell::nbella_spec();
        let lhv = lhv_bound(&spec).unwrap();
        let (classical, _) = best_classical_success(&task).unwrap();
        let threshold = 1.0 / SQRT2;
        for p in [0.5, 0.6, threshold - 0.01, threshold + 0.01, 0.8, 1.0] {
            let rho = noisy_smolin(p).unwrap();
            let quantum = quantum_exact_success(&rho, &s, &task).unwrap();
            let lhs = crate::bell::bell_lhs(&rho, &s, &spec).unwrap();
            assert_eq!(
                quantum > classical,
                lhs > lhv,
                "p={p}: success {quantum} vs {classical}, LHS {lhs} vs {lhv}"
            );
        }
    }

    #[test]
    fn monte_carlo_is_reproducible_and_worker_independent() {
        let rho = noisy_smolin(1.0).unwrap();
        let s = smolin_settings();
        let task = sign_b_task();
        let trials = 50_000;
        let a = monte_carlo_success(&rho, &s, &task, trials, 7).unwrap();
        let b = monte_carlo_success(&rho, &s, &task, trials, 7).unwrap();
        assert_eq!(a, b);
        for workers in [2usize, 3, 8] {
            let c =
                monte_carlo_success_with_workers(&rho, &s, &task, trials, 7, workers).unwrap();
            assert_eq!(a, c, "workers = {workers}");
        }
        let other = monte_carlo_success(&rho, &s, &task, trials, 8).unwrap();
        assert_ne!(a.successes, other.successes);
    }

    #[test]
    fn zero_trials_rejected() {
        let r = monte_carlo_success(
            &noisy_smolin(0.5).unwrap(),
            &smolin_settings(),
            &sign_b_task(),
            0,
            1,
        );
        assert!(r.is_err());
    }
}
