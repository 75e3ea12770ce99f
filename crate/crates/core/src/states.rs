//! Constructors for every state used by the workbench: the two-qubit Bell
//! basis, the four-qubit Smolin state and its white-noise family, the explicit
//! separable decomposition at the p = 1/3 boundary, two-qubit Werner states,
//! and GHZ states for comparison runs.
//!
//! The Smolin state is built two independent ways: as the Bell-basis mixture
//! (canonical) and as the Pauli-diagonal form (1/16)(I + sum_i sigma_i^{x4}).
//! Keeping both catches tensor-ordering mistakes, which are the likeliest
//! failure mode in this kind of code.

use crate::error::{Error, Result};
use crate::linalg::{kron_all, pauli, DenseMatrix};
use num_complex::Complex64;

/// Norm tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Trace / Hermiticity tolerance for density matrices.
pub const DM_TOL: f64 = 1e-12;

/// A density matrix is accepted as positive semidefinite down to this floor.
pub const PSD_TOL: f64 = -1e-10;

/// Normalized pure state on a 2^n dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state vector norm^2 = {norm_sq}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The projector |psi><psi|.
    pub fn projector(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.dim(), |r, c| {
            self.amplitudes[r] * self.amplitudes[c].conj()
        })
    }
}

/// A quantum state on `num_qubits` qubits. Construction checks the
/// density-matrix invariants: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DenseMatrix,
    num_qubits: usize,
}

impl DensityMatrix {
    pub fn new(matrix: DenseMatrix, num_qubits: usize) -> Result<Self> {
        if matrix.dim() != 1usize << num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "dim {} is not 2^{num_qubits}",
                matrix.dim()
            )));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > DM_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DM_TOL || tr.im.abs() > DM_TOL {
            return Err(Error::InvalidState(format!("trace = {tr}, expected 1")));
        }
        let min_eig = matrix
            .hermitian_eigenvalues()?
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix, num_qubits })
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let dim = psi.dim();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "state dim {dim} is not a power of two"
            )));
        }
        Self::new(psi.projector(), dim.trailing_zeros() as usize)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.matrix.hermitian_eigenvalues()
    }

    /// Tr[rho^2].
    pub fn purity(&self) -> f64 {
        self.matrix
            .matmul(&self.matrix)
            .expect("square")
            .trace()
            .re
    }
}

/// One weighted product term of a separable decomposition.
#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub weight: f64,
    pub factors: Vec<DensityMatrix>,
}

impl ProductTerm {
    /// The weighted tensor product this term contributes.
    pub fn assemble(&self) -> DenseMatrix {
        let factors: Vec<DenseMatrix> =
            self.factors.iter().map(|f| f.matrix().clone()).collect();
        kron_all(&factors).scale_re(self.weight)
    }
}

/// Bell basis state, 1-indexed:
/// |psi_1,2> = (|00> +- |11>)/sqrt(2), |psi_3,4> = (|01> +- |10>)/sqrt(2).
pub fn bell_state(i: usize) -> Result<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match i {
        1 => [h, 0.0, 0.0, h],
        2 => [h, 0.0, 0.0, -h],
        3 => [0.0, h, h, 0.0],
        4 => [0.0, h, -h, 0.0],
        _ => return Err(Error::IndexOutOfRange { index: i, limit: 5 }),
    };
    StateVector::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

/// The four-qubit Smolin state: the equal mixture of |psi_i><psi_i| tensored
/// with itself over the Bell basis, qubit pairing (AB)(CD).
pub fn smolin() -> DensityMatrix {
    let mut acc = DenseMatrix::zeros(16);
    for i in 1..=4 {
        let proj = bell_state(i).expect("index in range").projector();
        acc = acc.add(&proj.kron(&proj)).expect("16x16");
    }
    DensityMatrix::new(acc.scale_re(0.25), 4).expect("valid by construction")
}

/// The Smolin state in its Pauli-diagonal form
/// (1/16)(I + sigma_x^{x4} + sigma_y^{x4} + sigma_z^{x4}).
///
/// Independent of [`smolin`]; the two must agree entrywise.
pub fn smolin_pauli() -> DensityMatrix {
    let mut acc = DenseMatrix::identity(16);
    for i in 1..=3 {
        let s = pauli(i).expect("index in range");
        acc = acc
            .add(&kron_all(&[s.clone(), s.clone(), s.clone(), s]))
            .expect("16x16");
    }
    DensityMatrix::new(acc.scale_re(1.0 / 16.0), 4).expect("valid by construction")
}

/// White-noise mixture (1-p) I/16 + p rho_smolin.
///
/// Spectrum: (1+3p)/16 with multiplicity 4 and (1-p)/16 with multiplicity 12.
pub fn noisy_smolin(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let mixed = DenseMatrix::identity(16).scale_re((1.0 - p) / 16.0);
    let m = mixed.add(&smolin().matrix().scale_re(p)).expect("16x16");
    DensityMatrix::new(m, 4)
}

/// The six-term separable decomposition of the noisy Smolin state at p = 1/3.
///
/// Each term is (1/6) rho_k^(s) tensor rho_k^(s) for k in {x, y, z} and
/// s in {+, -}, where rho_k^(+-) mixes the sigma_k eigenprojectors pairwise:
/// rho_k^(+-) = (P_k^+ ox P_k^+- + P_k^- ox P_k^-+)/2.
///
/// Returns the terms and the assembled four-qubit state, which equals
/// `noisy_smolin(1/3)` entrywise.
pub fn separable_decomposition_third() -> (Vec<ProductTerm>, DensityMatrix) {
    let id = DenseMatrix::identity(2);
    let mut terms = Vec::with_capacity(6);
    for k in 1..=3 {
        let sk = pauli(k).expect("index in range");
        let p_plus = id.add(&sk).expect("2x2").scale_re(0.5);
        let p_minus = id.sub(&sk).expect("2x2").scale_re(0.5);
        for sign in [true, false] {
            let (a, b) = if sign {
                (&p_plus, &p_minus)
            } else {
                (&p_minus, &p_plus)
            };
            // rho_k^(s): pair each eigenprojector with s-matched partner.
            let two_qubit = p_plus
                .kron(a)
                .add(&p_minus.kron(b))
                .expect("4x4")
                .scale_re(0.5);
            let factor = DensityMatrix::new(two_qubit, 2).expect("valid by construction");
            terms.push(ProductTerm {
                weight: 1.0 / 6.0,
                factors: vec![factor.clone(), factor],
            });
        }
    }
    let mut acc = DenseMatrix::zeros(16);
    for t in &terms {
        acc = acc.add(&t.assemble()).expect("16x16");
    }
    let assembled = DensityMatrix::new(acc, 4).expect("valid by construction");
    (terms, assembled)
}

/// Two-qubit Werner state (1-p) I/4 + p |Phi-><Phi-|, with |Phi-> taken as
/// (|00> - |11>)/sqrt(2).
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let proj = bell_state(2).expect("index in range").projector();
    let m = DenseMatrix::identity(4)
        .scale_re((1.0 - p) / 4.0)
        .add(&proj.scale_re(p))
        .expect("4x4");
    DensityMatrix::new(m, 2)
}

/// n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2), 2 <= n <= 6.
pub fn ghz(n: usize) -> Result<StateVector> {
    if !(2..=6).contains(&n) {
        return Err(Error::ParameterOutOfRange(format!(
            "ghz qubit count {n} outside 2..=6"
        )));
    }
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps)
}

fn check_unit_interval(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange(format!(
            "mixing parameter p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}
