//! Dense complex matrix algebra for few-qubit computations.
//!
//! Everything here targets matrices of dimension at most 2^6, so the
//! implementations favor clarity and numerical robustness over asymptotic
//! cleverness: dense row-major storage, exact index arithmetic for tensor
//! operations, and a cyclic Jacobi eigensolver on the real-symmetric
//! embedding of a Hermitian matrix.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Tolerance for accepting a matrix as Hermitian (max entry of |A - A†|).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
const JACOBI_OFF_TOL: f64 = 1e-13;

/// Hard cap on Jacobi sweeps before reporting failure.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix in row-major order. Qubit 0 is the leftmost tensor
/// factor, i.e. the most significant bits of the row/column index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from a closure over (row, col).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Builds a matrix from nested rows, validating shape and finiteness.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "expected {dim} entries per row, got {}",
                    row.len()
                )));
            }
            for &v in row {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::InvalidState("non-finite matrix entry".into()));
                }
                data.push(v);
            }
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r))
    }

    /// Standard matrix product; dimensions must agree.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Tr[self * other] without materializing the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += self.get(r, c) * other.get(c, r);
            }
        }
        Ok(acc)
    }

    /// Kronecker product; the left factor occupies the most significant index
    /// bits of the result.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut out = Self::zeros(dim);
        for ra in 0..da {
            for ca in 0..da {
                let a = self.get(ra, ca);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        out.set(ra * db + rb, ca * db + cb, a * other.get(rb, cb));
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise absolute difference against `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entry of |A - A†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    /// Transposes the tensor indices of the qubits selected by `mask`.
    ///
    /// Pure entry permutation: for each (r, c) the bits of the masked qubits
    /// are swapped between row and column index, so the operation is exact,
    /// involutive, and trace-preserving.
    pub fn partial_transpose(&self, mask: &BipartitionMask) -> Result<Self> {
        let n = mask.num_qubits();
        if self.dim != 1usize << n {
            return Err(Error::DimensionMismatch(format!(
                "matrix dim {} does not match {n} qubits",
                self.dim
            )));
        }
        // Bit positions of the masked qubits within a row/column index
        // (qubit 0 = most significant bit).
        let mut bits = 0usize;
        for &q in mask.transposed_set() {
            bits |= 1 << (n - 1 - q);
        }
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let rs = (r & !bits) | (c & bits);
                let cs = (c & !bits) | (r & bits);
                out.set(r, c, self.get(rs, cs));
            }
        }
        Ok(out)
    }

    /// All eigenvalues of a Hermitian matrix, ascending.
    ///
    /// The input is checked against [`HERMITICITY_TOL`], symmetrized, embedded
    /// as the 2n x 2n real symmetric matrix [[Re, -Im], [Im, Re]], and
    /// diagonalized by cyclic Jacobi rotations. Each eigenvalue of the input
    /// appears twice in the embedding, so every other sorted value is kept.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let dev = self.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let n = self.dim;
        let mut m = vec![0.0f64; 2 * n * 2 * n];
        let idx = |r: usize, c: usize| r * 2 * n + c;
        for r in 0..n {
            for c in 0..n {
                // Symmetrized entry (A + A†)/2 suppresses roundoff drift.
                let a = (self.get(r, c) + self.get(c, r).conj()) * 0.5;
                m[idx(r, c)] = a.re;
                m[idx(r, c + n)] = -a.im;
                m[idx(r + n, c)] = a.im;
                m[idx(r + n, c + n)] = a.re;
            }
        }
        let mut diag = jacobi_eigenvalues(&mut m, 2 * n)?;
        diag.sort_by(f64::total_cmp);
        Ok(diag.into_iter().step_by(2).collect())
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix (row-major,
/// modified in place). Returns the diagonal once the off-diagonal Frobenius
/// norm drops below [`JACOBI_OFF_TOL`].
fn jacobi_eigenvalues(m: &mut [f64], n: usize) -> Result<Vec<f64>> {
    let idx = |r: usize, c: usize| r * n + c;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * m[idx(p, q)] * m[idx(p, q)];
            }
        }
        if off.sqrt() < JACOBI_OFF_TOL {
            return Ok((0..n).map(|i| m[idx(i, i)]).collect());
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle annihilating m[p][q].
                let theta = (m[idx(q, q)] - m[idx(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[idx(k, p)];
                    let mkq = m[idx(k, q)];
                    m[idx(k, p)] = c * mkp - s * mkq;
                    m[idx(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[idx(p, k)];
                    let mqk = m[idx(q, k)];
                    m[idx(p, k)] = c * mpk - s * mqk;
                    m[idx(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    Err(Error::NoConvergence(JACOBI_MAX_SWEEPS))
}

/// Returns the 2x2 identity (i = 0) or Pauli matrix sigma_x, sigma_y, sigma_z
/// (i = 1, 2, 3).
pub fn pauli(i: usize) -> Result<DenseMatrix> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);
    let rows = match i {
        0 => [[one, z], [z, one]],
        1 => [[z, one], [one, z]],
        2 => [[z, -im], [im, z]],
        3 => [[one, z], [z, -one]],
        _ => return Err(Error::IndexOutOfRange { index: i, limit: 4 }),
    };
    let mut m = DenseMatrix::zeros(2);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m.set(r, c, v);
        }
    }
    Ok(m)
}

/// N-fold Kronecker product of single-qubit operators, qubit 0 leftmost.
pub fn kron_all(factors: &[DenseMatrix]) -> DenseMatrix {
    assert!(!factors.is_empty(), "kron_all needs at least one factor");
    let mut out = factors[0].clone();
    for f in &factors[1..] {
        out = out.kron(f);
    }
    out
}

/// A bipartite cut of an n-qubit system, identified by the set of qubit
/// indices whose tensor indices get transposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionMask {
    num_qubits: usize,
    transposed_set: Vec<usize>,
}

impl BipartitionMask {
    /// A proper nonempty subset of {0..num_qubits-1}.
    pub fn new(num_qubits: usize, transposed_set: &[usize]) -> Result<Self> {
        let mut set: Vec<usize> = transposed_set.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.len() != transposed_set.len() {
            return Err(Error::InvalidMask("duplicate qubit index".into()));
        }
        if set.is_empty() || set.len() >= num_qubits {
            return Err(Error::InvalidMask(format!(
                "need a proper nonempty subset of 0..{num_qubits}"
            )));
        }
        if set.iter().any(|&q| q >= num_qubits) {
            return Err(Error::InvalidMask(format!(
                "qubit index beyond 0..{num_qubits}"
            )));
        }
        Ok(Self {
            num_qubits,
            transposed_set: set,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn transposed_set(&self) -> &[usize] {
        &self.transposed_set
    }

    pub fn complement(&self) -> Self {
        let set: Vec<usize> = (0..self.num_qubits)
            .filter(|q| !self.transposed_set.contains(q))
            .collect();
        Self {
            num_qubits: self.num_qubits,
            transposed_set: set,
        }
    }

    /// The same cut keyed by its lexicographically smallest side.
    pub fn canonical(&self) -> Self {
        let comp = self.complement();
        if comp.transposed_set < self.transposed_set {
            comp
        } else {
            self.clone()
        }
    }

    /// Letter label of the transposed side, e.g. "A" or "AB".
    pub fn label(&self) -> String {
        self.transposed_set
            .iter()
            .map(|&q| (b'A' + q as u8) as char)
            .collect()
    }
}
