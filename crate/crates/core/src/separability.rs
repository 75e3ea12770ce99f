//! PPT analysis across bipartite cuts: minimal partial-transpose eigenvalues,
//! full scans over the seven nontrivial four-qubit cuts, and threshold
//! location by bisection on the sign of the minimal eigenvalue.
//!
//! A negative partial-transpose eigenvalue certifies entanglement across the
//! cut; a nonnegative spectrum (PPT) is necessary but not sufficient for
//! separability in general. For the noisy Smolin family the explicit
//! decomposition at p = 1/3 closes that gap, so the threshold found here is
//! the actual separability boundary.

use crate::error::{Error, Result};
use crate::linalg::BipartitionMask;
use crate::states::DensityMatrix;

/// A cut counts as PPT when its minimal eigenvalue is at least -PPT_EIG_TOL,
/// matching the eigensolver's accuracy.
pub const PPT_EIG_TOL: f64 = 1e-10;

/// Bisection stops once the bracket is narrower than this.
pub const THRESHOLD_TOL: f64 = 1e-9;

/// PPT verdict for one bipartite cut.
#[derive(Debug, Clone)]
pub struct CutReport {
    pub mask: BipartitionMask,
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
}

/// Smallest eigenvalue of the partial transpose of `rho` over the masked
/// qubits.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix, mask: &BipartitionMask) -> Result<f64> {
    if mask.num_qubits() != rho.num_qubits() {
        return Err(Error::InvalidMask(format!(
            "mask over {} qubits vs state on {}",
            mask.num_qubits(),
            rho.num_qubits()
        )));
    }
    let eigs = rho
        .matrix()
        .partial_transpose(mask)?
        .hermitian_eigenvalues()?;
    Ok(*eigs.first().expect("nonempty spectrum"))
}

/// Reports on all seven nontrivial bipartitions of a four-qubit state: the
/// four single-qubit cuts and the three symmetric two-qubit cuts, each keyed
/// by its lexicographically smaller side.
pub fn ppt_scan(rho: &DensityMatrix) -> Result<Vec<CutReport>> {
    if rho.num_qubits() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "cut scan needs 4 qubits, state has {}",
            rho.num_qubits()
        )));
    }
    let sides: [&[usize]; 7] = [&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
    sides
        .iter()
        .map(|side| {
            let mask = BipartitionMask::new(4, side)?.canonical();
            let min_eigenvalue = ppt_min_eigenvalue(rho, &mask)?;
            Ok(CutReport {
                mask,
                min_eigenvalue,
                is_ppt: min_eigenvalue >= -PPT_EIG_TOL,
            })
        })
        .collect()
}

/// Locates the parameter where the minimal partial-transpose eigenvalue of
/// `family(p)` changes sign, by bisection on [lo, hi] down to a bracket of
/// width [`THRESHOLD_TOL`]. The eigenvalue signs at `lo` and `hi` must differ.
pub fn entanglement_threshold(
    family: impl Fn(f64) -> Result<DensityMatrix>,
    mask: &BipartitionMask,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let eval = |p: f64| -> Result<f64> { ppt_min_eigenvalue(&family(p)?, mask) };
    let f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    if f_lo * f_hi >= 0.0 {
        return Err(Error::NoSignChange { lo, hi });
    }
    let positive_at_lo = f_lo > 0.0;
    let (mut a, mut b) = (lo, hi);
    while b - a >= THRESHOLD_TOL {
        let mid = 0.5 * (a + b);
        if (eval(mid)? > 0.0) == positive_at_lo {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::states::{noisy_smolin, werner};

    fn single(q: usize) -> BipartitionMask {
        BipartitionMask::new(4, &[q]).unwrap()
    }

    #[test]
    fn single_qubit_cut_closed_form() {
        // PT over one qubit flips the sigma_y^{x4} term, giving the branch
        // (1 - 3p)/16 with multiplicity 4.
        for p in [0.0, 0.2, 1.0 / 3.0, 0.6, 1.0] {
            let rho = noisy_smolin(p).unwrap();
            let min = ppt_min_eigenvalue(&rho, &single(0)).unwrap();
            assert!((min - (1.0 - 3.0 * p) / 16.0).abs() < 1e-10, "p={p}");
        }
        let min = ppt_min_eigenvalue(&noisy_smolin(1.0).unwrap(), &single(0)).unwrap();
        assert!((min + 0.125).abs() < 1e-12);
        let min = ppt_min_eigenvalue(&noisy_smolin(1.0 / 3.0).unwrap(), &single(0)).unwrap();
        assert!(min.abs() < 1e-12);
    }

    #[test]
    fn two_qubit_cut_leaves_the_state_fixed() {
        let mask = BipartitionMask::new(4, &[0, 1]).unwrap();
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.6, 1.0] {
            let rho = noisy_smolin(p).unwrap();
            let pt = rho.matrix().partial_transpose(&mask).unwrap();
            assert!(pt.max_abs_diff(rho.matrix()) < 1e-15);
            let min = ppt_min_eigenvalue(&rho, &mask).unwrap();
            assert!((min - (1.0 - p) / 16.0).abs() < 1e-10, "p={p}");
        }
    }

    #[test]
    fn scan_classifies_cuts_at_full_strength() {
        let reports = ppt_scan(&noisy_smolin(1.0).unwrap()).unwrap();
        assert_eq!(reports.len(), 7);
        for r in &reports[..4] {
            assert!(!r.is_ppt);
            assert!((r.min_eigenvalue + 0.125).abs() < 1e-10, "{}", r.mask.label());
        }
        for r in &reports[4..] {
            assert!(r.is_ppt);
            assert!(r.min_eigenvalue.abs() < 1e-10, "{}", r.mask.label());
        }
    }

    #[test]
    fn scan_is_all_ppt_in_the_separable_region() {
        for r in ppt_scan(&noisy_smolin(0.2).unwrap()).unwrap() {
            assert!(r.is_ppt, "{}", r.mask.label());
        }
    }

    #[test]
    fn scan_of_maximally_mixed_state() {
        let rho = crate::states::DensityMatrix::new(
            DenseMatrix::identity(16).scale_re(1.0 / 16.0),
            4,
        )
        .unwrap();
        for r in ppt_scan(&rho).unwrap() {
            assert!((r.min_eigenvalue - 1.0 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cut_reports_respect_permutation_symmetry() {
        let reports = ppt_scan(&noisy_smolin(0.8).unwrap()).unwrap();
        for r in &reports[1..4] {
            assert!((r.min_eigenvalue - reports[0].min_eigenvalue).abs() < 1e-12);
        }
        for r in &reports[5..] {
            assert!((r.min_eigenvalue - reports[4].min_eigenvalue).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_keeps_unit_trace() {
        let rho = noisy_smolin(0.77).unwrap();
        for r in ppt_scan(&rho).unwrap() {
            let tr = rho
                .matrix()
                .partial_transpose(&r.mask)
                .unwrap()
                .trace();
            assert!((tr.re - 1.0).abs() < 1e-12 && tr.im.abs() < 1e-12);
        }
    }

    #[test]
    fn complementary_cuts_share_a_spectrum() {
        let rho = noisy_smolin(0.9).unwrap();
        for side in [vec![0usize], vec![0, 3]] {
            let mask = BipartitionMask::new(4, &side).unwrap();
            let a = rho
                .matrix()
                .partial_transpose(&mask)
                .unwrap()
                .hermitian_eigenvalues()
                .unwrap();
            let b = rho
                .matrix()
                .partial_transpose(&mask.complement())
                .unwrap()
                .hermitian_eigenvalues()
                .unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bisection_finds_the_smolin_threshold() {
        let t = entanglement_threshold(noisy_smolin, &single(0), 0.0, 1.0).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-8, "threshold {t}");
    }

    #[test]
    fn bisection_finds_the_werner_threshold() {
        let mask = BipartitionMask::new(2, &[0]).unwrap();
        let t = entanglement_threshold(werner, &mask, 0.0, 1.0).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-8, "threshold {t}");
    }

    #[test]
    fn bisection_rejects_sign_preserving_cuts() {
        let mask = BipartitionMask::new(4, &[0, 1]).unwrap();
        let err = entanglement_threshold(noisy_smolin, &mask, 0.0, 1.0);
        assert!(matches!(err, Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn scan_requires_four_qubits() {
        assert!(ppt_scan(&werner(0.5).unwrap()).is_err());
        let mask = BipartitionMask::new(2, &[0]).unwrap();
        assert!(ppt_min_eigenvalue(&noisy_smolin(0.5).unwrap(), &mask).is_err());
    }
}
