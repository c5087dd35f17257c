//! Dense complex linear algebra with explicit rank thresholds.
//!
//! Every rank decision in the crate goes through [`rank_decision`], which
//! records the spectral gap around the cut so borderline cases stay visible.

use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Thresholds used by rank, eigenvalue and relator checks.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Relative rank cut, applied to the largest singular value.
    pub rank_rel_tol: f64,
    /// Absolute tolerance for Hermiticity checks and eigenvalue positivity.
    pub eig_abs_tol: f64,
    /// Max-entry deviation from the identity allowed for relator images.
    pub relator_tol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            rank_rel_tol: 1e-8,
            eig_abs_tol: 1e-10,
            relator_tol: 1e-8,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> Result<()> {
        if self.rank_rel_tol <= 0.0 || self.eig_abs_tol <= 0.0 || self.relator_tol <= 0.0 {
            return Err(Error::Contract(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a thresholded rank computation.
///
/// `spectral_gap` is the ratio between the smallest kept singular value and
/// the largest discarded one (infinite when nothing is discarded or the
/// discarded part is exactly zero). Gaps below ~1e3 mean the integer answer
/// is not well separated from noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankDecision {
    pub rank: usize,
    pub sigma_max: f64,
    pub spectral_gap: f64,
}

fn check_finite(m: &CMatrix) -> Result<()> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry { row, col });
            }
        }
    }
    Ok(())
}

fn check_nonempty(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(())
}

fn singular_values_desc(m: &CMatrix) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Rank with the spectral gap around the cut.
pub fn rank_decision(m: &CMatrix, tol: &ToleranceProfile) -> Result<RankDecision> {
    check_nonempty(m)?;
    check_finite(m)?;
    tol.validate()?;
    let sv = singular_values_desc(m);
    let sigma_max = sv[0];
    if sigma_max == 0.0 {
        return Ok(RankDecision {
            rank: 0,
            sigma_max: 0.0,
            spectral_gap: f64::INFINITY,
        });
    }
    let cut = tol.rank_rel_tol * sigma_max;
    let rank = sv.iter().take_while(|&&s| s > cut).count();
    let spectral_gap = if rank == 0 {
        f64::INFINITY
    } else if rank < sv.len() && sv[rank] > 0.0 {
        sv[rank - 1] / sv[rank]
    } else if rank == sv.len() {
        // nothing discarded; report distance of the smallest kept value to the cut
        sv[rank - 1] / cut
    } else {
        f64::INFINITY
    };
    Ok(RankDecision {
        rank,
        sigma_max,
        spectral_gap,
    })
}

/// Number of singular values above `rank_rel_tol * sigma_max`.
pub fn numerical_rank(m: &CMatrix, tol: &ToleranceProfile) -> Result<usize> {
    Ok(rank_decision(m, tol)?.rank)
}

/// Orthonormal basis of the null space, returned as matrix columns.
///
/// Column count is always `cols - numerical_rank`.
pub fn kernel_basis(m: &CMatrix, tol: &ToleranceProfile) -> Result<CMatrix> {
    check_nonempty(m)?;
    check_finite(m)?;
    tol.validate()?;
    let (rows, cols) = m.shape();
    // The thin SVD of a wide matrix omits the null-space rows of V^H; pad
    // with zero rows so V^H comes back square.
    let padded = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("svd with compute_v");
    let mut sv: Vec<(usize, f64)> = svd.singular_values.iter().copied().enumerate().collect();
    sv.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let sigma_max = sv.first().map(|&(_, s)| s).unwrap_or(0.0);
    let cut = tol.rank_rel_tol * sigma_max;
    let null_rows: Vec<usize> = if sigma_max == 0.0 {
        (0..v_t.nrows()).collect()
    } else {
        sv.iter()
            .filter(|&&(_, s)| s <= cut)
            .map(|&(i, _)| i)
            .collect()
    };
    // rows of V^H with index >= rank, conjugate-transposed into columns
    let mut basis = CMatrix::zeros(cols, null_rows.len());
    for (k, &i) in null_rows.iter().enumerate() {
        for j in 0..cols {
            basis[(j, k)] = v_t[(i, j)].conj();
        }
    }
    Ok(basis)
}

/// Eigenvalues of a Hermitian matrix, ascending, multiplicity-complete.
pub fn hermitian_spectrum(m: &CMatrix, tol: &ToleranceProfile) -> Result<Vec<f64>> {
    check_nonempty(m)?;
    check_finite(m)?;
    tol.validate()?;
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "hermitian_spectrum needs a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            ),
        });
    }
    let mut max_asym = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            max_asym = max_asym.max(d);
        }
    }
    if max_asym > tol.eig_abs_tol {
        return Err(Error::NotHermitian {
            max_asymmetry: max_asym,
            tol: tol.eig_abs_tol,
        });
    }
    // symmetrize so the Hermitian path sees an exactly Hermitian input
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// max |entry| of `m - I`.
pub fn deviation_from_identity(m: &CMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j && i < n {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            dev = dev.max((m[(i, j)] - target).norm());
        }
    }
    dev
}

/// max |entry| of `a - b`.
pub fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut dev = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            dev = dev.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    dev
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_rows(rows: usize, cols: usize, data: &[C64]) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rank_of_identity() {
        let tol = ToleranceProfile::default();
        assert_eq!(numerical_rank(&identity(3), &tol).unwrap(), 3);
    }

    #[test]
    fn rank_of_all_ones() {
        let tol = ToleranceProfile::default();
        let m = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert_eq!(numerical_rank(&m, &tol).unwrap(), 1);
    }

    #[test]
    fn rank_of_zero_matrix() {
        let tol = ToleranceProfile::default();
        let m = CMatrix::zeros(2, 3);
        assert_eq!(numerical_rank(&m, &tol).unwrap(), 0);
        let k = kernel_basis(&m, &tol).unwrap();
        assert_eq!(k.ncols(), 3);
        // orthonormal columns
        let g = k.adjoint() * &k;
        assert!(deviation_from_identity(&g) < 1e-12);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let tol = ToleranceProfile::default();
        let k = kernel_basis(&identity(4), &tol).unwrap();
        assert_eq!(k.ncols(), 0);
    }

    #[test]
    fn kernel_of_rank_one_symmetric() {
        let tol = ToleranceProfile::default();
        let m = CMatrix::from_element(2, 2, c(1.0, 0.0));
        let k = kernel_basis(&m, &tol).unwrap();
        assert_eq!(k.ncols(), 1);
        // column proportional to (1,-1)/sqrt(2)
        let ratio = k[(0, 0)] + k[(1, 0)];
        assert!(ratio.norm() < 1e-12);
        assert!((k.column(0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_entry_rejected() {
        let tol = ToleranceProfile::default();
        let m = CMatrix::from_row_slice(1, 2, &[c(f64::NAN, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            numerical_rank(&m, &tol),
            Err(Error::NonFiniteEntry { .. })
        ));
    }

    #[test]
    fn spectrum_of_diagonal() {
        let tol = ToleranceProfile::default();
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(3.0, 0.0),
            c(1.0, 0.0),
            c(2.0, 0.0),
        ]));
        let s = hermitian_spectrum(&m, &tol).unwrap();
        assert_eq!(s, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn spectrum_of_zero() {
        let tol = ToleranceProfile::default();
        let s = hermitian_spectrum(&CMatrix::zeros(3, 3), &tol).unwrap();
        assert_eq!(s, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn non_hermitian_rejected_with_asymmetry() {
        let tol = ToleranceProfile::default();
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        match hermitian_spectrum(&m, &tol) {
            Err(Error::NotHermitian { max_asymmetry, .. }) => {
                assert!((max_asymmetry - 1.0).abs() < 1e-12)
            }
            other => panic!("expected NotHermitian, got {:?}", other),
        }
    }

    #[test]
    fn rank_plus_nullity_matches_cols() {
        let tol = ToleranceProfile::default();
        let mut state = 0x12345u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for _ in 0..20 {
            let rows = 2 + (next().abs() * 6.0) as usize;
            let cols = 2 + (next().abs() * 6.0) as usize;
            let mut m = CMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m[(i, j)] = c(next(), next());
                }
            }
            let r = numerical_rank(&m, &tol).unwrap();
            let k = kernel_basis(&m, &tol).unwrap();
            assert_eq!(r + k.ncols(), cols);
            // kernel columns annihilated
            if k.ncols() > 0 {
                let prod = &m * &k;
                let sv = rank_decision(&m, &tol).unwrap();
                let bound = tol.rank_rel_tol * sv.sigma_max * (rows as f64);
                for v in prod.iter() {
                    assert!(v.norm() <= bound.max(1e-12));
                }
            }
        }
    }

    #[test]
    fn spectrum_sum_matches_trace() {
        let tol = ToleranceProfile::default();
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(-1.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 0.5),
                c(0.25, 0.0),
                c(4.0, 0.0),
            ],
        );
        let s = hermitian_spectrum(&a, &tol).unwrap();
        let sum: f64 = s.iter().sum();
        let tr = a.trace().re;
        assert!((sum - tr).abs() <= 3.0 * tol.eig_abs_tol.max(1e-12));
    }

    #[test]
    fn deterministic_outputs() {
        let tol = ToleranceProfile::default();
        let m = CMatrix::from_row_slice(
            2,
            3,
            &[
                c(1.0, 2.0),
                c(0.5, 0.0),
                c(0.0, 1.0),
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(3.0, 0.0),
            ],
        );
        let k1 = kernel_basis(&m, &tol).unwrap();
        let k2 = kernel_basis(&m, &tol).unwrap();
        assert_eq!(k1.as_slice(), k2.as_slice());
        let s1 = hermitian_spectrum(&(&m * m.adjoint()), &tol).unwrap();
        let s2 = hermitian_spectrum(&(&m * m.adjoint()), &tol).unwrap();
        assert_eq!(s1, s2);
    }
}
