//! Two-setting correlation Bell inequalities.
//!
//! Each of N parties measures one of two dichotomic observables n.sigma.
//! A [`BellSpec`] holds the coefficient table g over setting tuples together
//! with the classical bound; the module evaluates quantum correlation
//! functions by dense trace, derives coefficient tables from sign functions,
//! computes local-hidden-variable bounds by exhaustive strategy enumeration,
//! builds the Bell operator for spectral checks, and searches for maximizing
//! measurement settings by seeded random-restart coordinate ascent.
//!
//! Setting tuples carry 1-based labels (k_j in {1, 2}); internally a tuple is
//! packed into a 0-based index with party 1 at the most significant bit.

use crate::error::{Error, Result};
use crate::linalg::{kron_all, pauli, DenseMatrix};
use crate::states::DensityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Imaginary residue accepted when a correlation trace is taken real.
pub const IM_RESIDUE_TOL: f64 = 1e-12;

/// Margin above the classical bound before an LHS value counts as violation.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Improvement threshold at which the setting optimizer stops iterating.
const OPT_VALUE_TOL: f64 = 1e-9;

/// Coordinate-ascent sweeps before the convergence check kicks in.
const OPT_MIN_PASSES: usize = 3;

/// Hard cap on coordinate-ascent sweeps per restart.
const OPT_MAX_PASSES: usize = 100;

/// One measurement direction on the Bloch sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    direction: [f64; 3],
}

impl MeasurementSetting {
    /// Requires a unit vector (within 1e-12).
    pub fn new(direction: [f64; 3]) -> Result<Self> {
        let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "direction norm {norm} is not 1"
            )));
        }
        Ok(Self { direction })
    }

    /// Spherical-angle constructor: (sin t cos p, sin t sin p, cos t).
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            direction: [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ],
        }
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }
}

/// Per-party pair of measurement settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingFamily {
    parties: Vec<(MeasurementSetting, MeasurementSetting)>,
}

impl SettingFamily {
    pub fn new(parties: Vec<(MeasurementSetting, MeasurementSetting)>) -> Result<Self> {
        if parties.len() < 2 {
            return Err(Error::InvalidState(
                "a setting family needs at least two parties".into(),
            ));
        }
        Ok(Self { parties })
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn parties(&self) -> &[(MeasurementSetting, MeasurementSetting)] {
        &self.parties
    }

    /// Setting `k` (1-based) of party `j` (0-based).
    pub fn setting(&self, j: usize, k: u8) -> &MeasurementSetting {
        match k {
            1 => &self.parties[j].0,
            2 => &self.parties[j].1,
            _ => panic!("setting label {k} not in {{1,2}}"),
        }
    }
}

/// A function S: {-1,+1}^N -> {-1,+1}, stored as a full table indexed with
/// s_j = +1 as bit 0 and party 1 at the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SignFunction {
    num_parties: usize,
    values: Vec<i8>,
}

impl SignFunction {
    pub fn from_values(num_parties: usize, values: Vec<i8>) -> Result<Self> {
        if values.len() != 1 << num_parties {
            return Err(Error::DimensionMismatch(format!(
                "sign table length {} != 2^{num_parties}",
                values.len()
            )));
        }
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidState("sign values must be +-1".into()));
        }
        Ok(Self {
            num_parties,
            values,
        })
    }

    pub fn constant_plus(num_parties: usize) -> Self {
        Self {
            num_parties,
            values: vec![1; 1 << num_parties],
        }
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    pub fn value(&self, index: usize) -> i8 {
        self.values[index]
    }
}

/// The four-party sign function that is -1 exactly on
/// (+,+,-,-), (+,-,+,-), (-,+,+,-), (-,-,-,-) and +1 elsewhere,
/// written out as a literal table.
pub fn sign_b() -> SignFunction {
    let mut values = vec![1i8; 16];
    // Bit 1 encodes s_j = -1, party 1 at the MSB.
    for idx in [0b0011, 0b0101, 0b1001, 0b1111] {
        values[idx] = -1;
    }
    SignFunction::from_values(4, values).expect("literal table")
}

/// One inequality: a fully populated coefficient table g over {1,2}^N setting
/// tuples plus the classical bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BellSpec {
    num_parties: usize,
    coefficients: Vec<f64>,
    classical_bound: f64,
}

impl BellSpec {
    pub fn from_table(
        num_parties: usize,
        coefficients: Vec<f64>,
        classical_bound: f64,
    ) -> Result<Self> {
        if coefficients.len() != 1 << num_parties {
            return Err(Error::DimensionMismatch(format!(
                "coefficient table length {} != 2^{num_parties}",
                coefficients.len()
            )));
        }
        if !classical_bound.is_finite() || classical_bound <= 0.0 {
            return Err(Error::InvalidState(
                "classical bound must be positive".into(),
            ));
        }
        if coefficients.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidState("non-finite coefficient".into()));
        }
        Ok(Self {
            num_parties,
            coefficients,
            classical_bound,
        })
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    pub fn classical_bound(&self) -> f64 {
        self.classical_bound
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, tuple: &[u8]) -> Result<f64> {
        Ok(self.coefficients[tuple_to_index(self.num_parties, tuple)?])
    }

    pub fn sum_abs(&self) -> f64 {
        self.coefficients.iter().map(|g| g.abs()).sum()
    }
}

/// Correlation values E(k_1..k_N) over the full tuple grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable {
    num_parties: usize,
    values: Vec<f64>,
}

impl CorrelationTable {
    fn new(num_parties: usize, values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|e| e.abs() > 1.0 + 1e-10) {
            return Err(Error::NumericalInconsistency(format!(
                "correlation {bad} outside [-1, 1]"
            )));
        }
        Ok(Self {
            num_parties,
            values,
        })
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    pub fn value(&self, tuple: &[u8]) -> Result<f64> {
        Ok(self.values[tuple_to_index(self.num_parties, tuple)?])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Packs a 1-based setting tuple into a table index (party 1 at the MSB).
pub fn tuple_to_index(num_parties: usize, tuple: &[u8]) -> Result<usize> {
    if tuple.len() != num_parties {
        return Err(Error::DimensionMismatch(format!(
            "tuple length {} != {num_parties} parties",
            tuple.len()
        )));
    }
    let mut idx = 0usize;
    for &k in tuple {
        if k != 1 && k != 2 {
            return Err(Error::IndexOutOfRange {
                index: k as usize,
                limit: 3,
            });
        }
        idx = (idx << 1) | (k as usize - 1);
    }
    Ok(idx)
}

/// Inverse of [`tuple_to_index`].
pub fn index_to_tuple(num_parties: usize, index: usize) -> Vec<u8> {
    (0..num_parties)
        .map(|j| 1 + ((index >> (num_parties - 1 - j)) & 1) as u8)
        .collect()
}

/// The dichotomic observable n.sigma for a unit direction n. Hermitian with
/// eigenvalues exactly {-1, +1}.
pub fn observable(setting: &MeasurementSetting) -> DenseMatrix {
    let [nx, ny, nz] = setting.direction();
    let mut m = pauli(1).expect("in range").scale_re(nx);
    m = m
        .add(&pauli(2).expect("in range").scale_re(ny))
        .expect("2x2");
    m.add(&pauli(3).expect("in range").scale_re(nz))
        .expect("2x2")
}

fn product_observable(settings: &SettingFamily, tuple: &[u8]) -> DenseMatrix {
    let factors: Vec<DenseMatrix> = tuple
        .iter()
        .enumerate()
        .map(|(j, &k)| observable(settings.setting(j, k)))
        .collect();
    kron_all(&factors)
}

fn check_shapes(rho: &DensityMatrix, settings: &SettingFamily) -> Result<()> {
    if rho.num_qubits() != settings.num_parties() {
        return Err(Error::DimensionMismatch(format!(
            "state on {} qubits vs {} parties",
            rho.num_qubits(),
            settings.num_parties()
        )));
    }
    Ok(())
}

/// Quantum correlation E(k) = Tr[rho O_{k_1} ox ... ox O_{k_N}].
pub fn correlation(rho: &DensityMatrix, settings: &SettingFamily, tuple: &[u8]) -> Result<f64> {
    check_shapes(rho, settings)?;
    tuple_to_index(settings.num_parties(), tuple)?;
    let op = product_observable(settings, tuple);
    let t = rho.matrix().trace_product(&op)?;
    if t.im.abs() >= IM_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(t.im));
    }
    Ok(t.re)
}

/// All 2^N correlations for a state and setting family.
pub fn correlation_table(rho: &DensityMatrix, settings: &SettingFamily) -> Result<CorrelationTable> {
    let n = settings.num_parties();
    let mut values = Vec::with_capacity(1 << n);
    for idx in 0..(1usize << n) {
        values.push(correlation(rho, settings, &index_to_tuple(n, idx))?);
    }
    CorrelationTable::new(n, values)
}

/// Coefficient table g(x) = sum_s S(s) s_1^{x_1-1} ... s_N^{x_N-1}, with the
/// generic classical bound 2^N.
pub fn wwzb_coefficients(sign: &SignFunction) -> BellSpec {
    let n = sign.num_parties();
    let size = 1usize << n;
    let mut coefficients = vec![0.0f64; size];
    for (x, g) in coefficients.iter_mut().enumerate() {
        let mut acc = 0i64;
        for s in 0..size {
            // s_j^{x_j-1} over the parties with x_j = 2 is a parity.
            let parity = ((s & x).count_ones() & 1) as i64;
            acc += sign.value(s) as i64 * (1 - 2 * parity);
        }
        *g = acc as f64;
    }
    BellSpec::from_table(n, coefficients, (size as u64) as f64).expect("valid table")
}

/// The four-party two-setting inequality
/// |E(1,1,1,1) + E(1,1,1,2) + E(2,2,2,1) - E(2,2,2,2)| <= 2,
/// i.e. (1/8) of the sign_b coefficient table with the bound rescaled.
pub fn nbella_spec() -> BellSpec {
    let mut coefficients = vec![0.0f64; 16];
    coefficients[tuple_to_index(4, &[1, 1, 1, 1]).expect("valid")] = 1.0;
    coefficients[tuple_to_index(4, &[1, 1, 1, 2]).expect("valid")] = 1.0;
    coefficients[tuple_to_index(4, &[2, 2, 2, 1]).expect("valid")] = 1.0;
    coefficients[tuple_to_index(4, &[2, 2, 2, 2]).expect("valid")] = -1.0;
    BellSpec::from_table(4, coefficients, 2.0).expect("valid table")
}

/// Standard two-party CHSH inequality |E(1,1)+E(1,2)+E(2,1)-E(2,2)| <= 2.
pub fn chsh_spec() -> BellSpec {
    BellSpec::from_table(2, vec![1.0, 1.0, 1.0, -1.0], 2.0).expect("valid table")
}

/// LHS value sum_k g(k) E(k) for a state under a setting family.
pub fn bell_lhs(rho: &DensityMatrix, settings: &SettingFamily, spec: &BellSpec) -> Result<f64> {
    check_shapes(rho, settings)?;
    if spec.num_parties() != settings.num_parties() {
        return Err(Error::DimensionMismatch(format!(
            "spec for {} parties vs {} settings",
            spec.num_parties(),
            settings.num_parties()
        )));
    }
    let n = spec.num_parties();
    let mut acc = 0.0;
    for (idx, &g) in spec.coefficients().iter().enumerate() {
        if g != 0.0 {
            acc += g * correlation(rho, settings, &index_to_tuple(n, idx))?;
        }
    }
    Ok(acc)
}

/// Whether an LHS value violates a classical bound, with a small margin so
/// that boundary cases (LHS exactly at the bound) do not flip on roundoff.
pub fn is_violated(lhs: f64, classical_bound: f64) -> bool {
    lhs.abs() > classical_bound + VIOLATION_TOL
}

/// Maximum of |sum_k g(k) prod_j a_j(k_j)| over all 2^{2N} deterministic
/// local strategies. Exhaustive, so N is capped at 5.
pub fn lhv_bound(spec: &BellSpec) -> Result<f64> {
    let n = spec.num_parties();
    if n > 5 {
        return Err(Error::ParameterOutOfRange(format!(
            "LHV enumeration capped at 5 parties, got {n}"
        )));
    }
    let mut best = 0.0f64;
    for strategy in 0..(1usize << (2 * n)) {
        let mut value = 0.0f64;
        for (idx, &g) in spec.coefficients().iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            value += g * strategy_product(strategy, n, idx);
        }
        best = best.max(value.abs());
    }
    Ok(best)
}

/// Product of the replies party j gives to setting bit x_j under a packed
/// strategy: two bits per party, bit set means reply -1.
fn strategy_product(strategy: usize, num_parties: usize, tuple_index: usize) -> f64 {
    let mut parity = 0u32;
    for j in 0..num_parties {
        let choice = (tuple_index >> (num_parties - 1 - j)) & 1;
        parity += ((strategy >> (2 * j + choice)) & 1) as u32;
    }
    if parity & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The Bell operator B = sum_k g(k) O_{k_1} ox ... ox O_{k_N}.
pub fn bell_operator(settings: &SettingFamily, spec: &BellSpec) -> Result<DenseMatrix> {
    if spec.num_parties() != settings.num_parties() {
        return Err(Error::DimensionMismatch(format!(
            "spec for {} parties vs {} settings",
            spec.num_parties(),
            settings.num_parties()
        )));
    }
    let n = spec.num_parties();
    let mut acc = DenseMatrix::zeros(1 << n);
    for (idx, &g) in spec.coefficients().iter().enumerate() {
        if g != 0.0 {
            let term = product_observable(settings, &index_to_tuple(n, idx));
            acc = acc.add(&term.scale_re(g))?;
        }
    }
    Ok(acc)
}

/// The observables used for the four-qubit violation: parties 1-3 measure
/// along x or y, party 4 along the diagonals (x+-y)/sqrt(2).
pub fn smolin_settings() -> SettingFamily {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let x = MeasurementSetting::new([1.0, 0.0, 0.0]).expect("unit");
    let y = MeasurementSetting::new([0.0, 1.0, 0.0]).expect("unit");
    let diag_plus = MeasurementSetting::new([h, h, 0.0]).expect("unit");
    let diag_minus = MeasurementSetting::new([h, -h, 0.0]).expect("unit");
    SettingFamily::new(vec![
        (x.clone(), y.clone()),
        (x.clone(), y.clone()),
        (x, y),
        (diag_plus, diag_minus),
    ])
    .expect("four parties")
}

/// CHSH settings maximizing the violation for the Werner family built on
/// |Phi->: party 1 measures y or z, party 2 the diagonals (y+-z)/sqrt(2).
pub fn chsh_settings() -> SettingFamily {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let y = MeasurementSetting::new([0.0, 1.0, 0.0]).expect("unit");
    let z = MeasurementSetting::new([0.0, 0.0, 1.0]).expect("unit");
    let diag_plus = MeasurementSetting::new([0.0, h, h]).expect("unit");
    let diag_minus = MeasurementSetting::new([0.0, h, -h]).expect("unit");
    SettingFamily::new(vec![(y, z), (diag_plus, diag_minus)]).expect("two parties")
}

/// Spherical angles (theta, phi) per setting; the optimizer's search space.
type AngleGrid = Vec<[[f64; 2]; 2]>;

fn family_from_angles(angles: &AngleGrid) -> SettingFamily {
    SettingFamily::new(
        angles
            .iter()
            .map(|party| {
                (
                    MeasurementSetting::from_angles(party[0][0], party[0][1]),
                    MeasurementSetting::from_angles(party[1][0], party[1][1]),
                )
            })
            .collect(),
    )
    .expect("at least two parties")
}

/// Searches for measurement settings maximizing |bell_lhs| by random-restart
/// coordinate ascent over the (theta, phi) angles of every setting, with a
/// golden-section line search per coordinate. Deterministic for a fixed seed.
///
/// Returns the best family found and its |LHS| value. The family is
/// canonicalized so its signed LHS equals the returned value: negating both
/// directions of one party flips the sign of every correlation, so a negative
/// optimum can always be reflected.
pub fn optimize_settings(
    rho: &DensityMatrix,
    spec: &BellSpec,
    restarts: usize,
    seed: u64,
) -> Result<(SettingFamily, f64)> {
    if restarts == 0 {
        return Err(Error::ParameterOutOfRange("restarts must be >= 1".into()));
    }
    let n = spec.num_parties();
    if rho.num_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "state on {} qubits vs {n}-party spec",
            rho.num_qubits()
        )));
    }
    let eval = |angles: &AngleGrid| -> f64 {
        bell_lhs(rho, &family_from_angles(angles), spec)
            .expect("shapes validated")
            .abs()
    };

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best_value = f64::NEG_INFINITY;
    let mut best_angles: Option<AngleGrid> = None;

    for _ in 0..restarts {
        // Uniform directions on the sphere.
        let mut angles: AngleGrid = (0..n)
            .map(|_| {
                let mut pair = [[0.0f64; 2]; 2];
                for setting in &mut pair {
                    let z: f64 = rng.gen_range(-1.0..=1.0);
                    setting[0] = z.acos();
                    setting[1] = rng.gen_range(0.0..std::f64::consts::TAU);
                }
                pair
            })
            .collect();

        let mut value = eval(&angles);
        for pass in 0..OPT_MAX_PASSES {
            let before = value;
            for j in 0..n {
                for s in 0..2 {
                    for axis in 0..2 {
                        let hi = if axis == 0 {
                            std::f64::consts::PI
                        } else {
                            std::f64::consts::TAU
                        };
                        let f = |x: f64| {
                            let mut probe = angles.clone();
                            probe[j][s][axis] = x;
                            eval(&probe)
                        };
                        let (x, fx) = line_search_max(f, 0.0, hi);
                        if fx > value {
                            angles[j][s][axis] = x;
                            value = fx;
                        }
                    }
                }
            }
            if pass + 1 >= OPT_MIN_PASSES && value - before < OPT_VALUE_TOL {
                break;
            }
        }
        if value > best_value {
            best_value = value;
            best_angles = Some(angles);
        }
    }
    let mut family = family_from_angles(&best_angles.expect("at least one restart"));
    if bell_lhs(rho, &family, spec).expect("shapes validated") < 0.0 {
        let [x, y, z] = family.parties[0].0.direction();
        let [u, v, w] = family.parties[0].1.direction();
        family.parties[0] = (
            MeasurementSetting::new([-x, -y, -z]).expect("unit"),
            MeasurementSetting::new([-u, -v, -w]).expect("unit"),
        );
    }
    Ok((family, best_value))
}

/// Coarse grid scan followed by golden-section refinement around the best
/// cell. The objective is a (possibly folded) sinusoid in each coordinate, so
/// the grid pins the right basin and the golden section converges inside it.
fn line_search_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const GRID: usize = 12;
    let mut best_i = 0;
    let mut best_f = f64::NEG_INFINITY;
    for i in 0..=GRID {
        let x = lo + (hi - lo) * i as f64 / GRID as f64;
        let fx = f(x);
        if fx > best_f {
            best_f = fx;
            best_i = i;
        }
    }
    let cell = (hi - lo) / GRID as f64;
    let mut a = (lo + cell * (best_i as f64 - 1.0)).max(lo);
    let mut b = (lo + cell * (best_i as f64 + 1.0)).min(hi);

    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > 1e-7 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fx >= best_f {
        (x, fx)
    } else {
        (lo + cell * best_i as f64, best_f)
    }
}

/// Tr[rho B] evaluated directly; equals [`bell_lhs`] for matching inputs.
pub fn bell_operator_expectation(
    rho: &DensityMatrix,
    settings: &SettingFamily,
    spec: &BellSpec,
) -> Result<f64> {
    let op = bell_operator(settings, spec)?;
    let t = rho.matrix().trace_product(&op)?;
    if t.im.abs() >= IM_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(t.im));
    }
    Ok(t.re)
}
