//! The fiberwise operators T, T* and H on V tensor Lambda^p m*, and the
//! positivity certificate for H.
//!
//! Matrices returned by [`build_t`], [`build_tstar`] and [`build_h_direct`]
//! are written in the monomial basis of V tensored with the fixed
//! increasing-multi-index basis of Lambda^p m*; there the assembly is exact
//! integer arithmetic. [`build_h`] conjugates into the orthonormal basis
//! (monomials scaled by the su(2) weights) where H is Hermitian in the
//! ordinary sense and its spectrum is real.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, CMatrix, CVector, ToleranceProfile, C64};
use crate::reps::{su2_basis, su2_inner_product, sym_power_lie};
use serde::{Deserialize, Serialize};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The fixed su(2) basis X1, X2, X3 and the m-part Y_k = i X_k.
pub struct LieBasis;

impl LieBasis {
    pub fn x(k: usize) -> CMatrix {
        su2_basis()[k].clone()
    }

    pub fn y(k: usize) -> CMatrix {
        su2_basis()[k].clone() * c(0.0, 1.0)
    }
}

/// Action of the fixed basis on a finite-dimensional module, together with
/// the inner-product weights that make the X_k act skew-Hermitianly.
#[derive(Debug, Clone)]
pub struct LieAction {
    pub dim: usize,
    pub label: String,
    x: [CMatrix; 3],
    y: [CMatrix; 3],
    pub weights: Vec<f64>,
}

impl LieAction {
    /// Action on the irreducible module V_n.
    pub fn irreducible(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Contract("LieAction needs n >= 1".into()));
        }
        let xs = su2_basis();
        let mut x = Vec::with_capacity(3);
        let mut y = Vec::with_capacity(3);
        for k in 0..3 {
            x.push(sym_power_lie(n, &xs[k])?);
            y.push(sym_power_lie(n, &(xs[k].clone() * c(0.0, 1.0)))?);
        }
        let form = su2_inner_product(n)?;
        let weights = (0..n).map(|j| form.gram[(j, j)].re).collect();
        Ok(LieAction {
            dim: n,
            label: format!("V{}", n),
            x: [x[0].clone(), x[1].clone(), x[2].clone()],
            y: [y[0].clone(), y[1].clone(), y[2].clone()],
            weights,
        })
    }

    /// Block-diagonal action on a direct sum of irreducibles.
    pub fn direct_sum(parts: &[usize]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Contract("direct_sum needs at least one part".into()));
        }
        let actions: Vec<LieAction> = parts
            .iter()
            .map(|&n| LieAction::irreducible(n))
            .collect::<Result<_>>()?;
        let dim: usize = parts.iter().sum();
        let embed = |pick: &dyn Fn(&LieAction) -> &CMatrix| -> CMatrix {
            let mut m = CMatrix::zeros(dim, dim);
            let mut off = 0;
            for a in &actions {
                m.view_mut((off, off), (a.dim, a.dim)).copy_from(pick(a));
                off += a.dim;
            }
            m
        };
        let x = [
            embed(&|a| &a.x[0]),
            embed(&|a| &a.x[1]),
            embed(&|a| &a.x[2]),
        ];
        let y = [
            embed(&|a| &a.y[0]),
            embed(&|a| &a.y[1]),
            embed(&|a| &a.y[2]),
        ];
        let weights = actions.iter().flat_map(|a| a.weights.clone()).collect();
        let label = parts
            .iter()
            .map(|n| format!("V{}", n))
            .collect::<Vec<_>>()
            .join("+");
        Ok(LieAction {
            dim,
            label,
            x,
            y,
            weights,
        })
    }

    pub fn rho_y(&self, k: usize) -> &CMatrix {
        &self.y[k]
    }

    pub fn rho_x(&self, k: usize) -> &CMatrix {
        &self.x[k]
    }

    /// rho([Y_a, Y_b]) through the exact bracket relations
    /// [Y_i, Y_{i+1}] = -2 X_{i+2} (indices mod 3).
    fn rho_bracket_yy(&self, a: usize, b: usize) -> CMatrix {
        if a == b {
            return CMatrix::zeros(self.dim, self.dim);
        }
        if (a + 1) % 3 == b {
            self.x[(a + 2) % 3].scale(-2.0)
        } else {
            self.x[(b + 2) % 3].scale(2.0)
        }
    }
}

/// Increasing multi-indices over {0,1,2} of length p.
pub fn multi_indices(p: usize) -> Vec<Vec<usize>> {
    match p {
        0 => vec![vec![]],
        1 => vec![vec![0], vec![1], vec![2]],
        2 => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        3 => vec![vec![0, 1, 2]],
        _ => vec![],
    }
}

/// dim of V tensor Lambda^p m*.
pub fn form_dim(action_dim: usize, p: usize) -> usize {
    action_dim * multi_indices(p).len()
}

/// T: V tensor Lambda^p -> Lambda^{p+1}, the alternating sum of rho(Y) actions.
pub fn build_t(action: &LieAction, p: usize) -> Result<CMatrix> {
    if p > 2 {
        return Err(Error::Contract(format!(
            "build_t: degree {} has no target",
            p
        )));
    }
    let d = action.dim;
    let src = multi_indices(p);
    let dst = multi_indices(p + 1);
    let mut m = CMatrix::zeros(d * dst.len(), d * src.len());
    for (ri, idx) in dst.iter().enumerate() {
        for (k, &ik) in idx.iter().enumerate() {
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != ik).collect();
            let ci = src.iter().position(|s| *s == rest).expect("subindex");
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let block = action.rho_y(ik).scale(sign);
            let mut view = m.view_mut((ri * d, ci * d), (d, d));
            view += &block;
        }
    }
    Ok(m)
}

/// T*: V tensor Lambda^p -> Lambda^{p-1}, contraction with rho(Y).
pub fn build_tstar(action: &LieAction, p: usize) -> Result<CMatrix> {
    if p == 0 || p > 3 {
        return Err(Error::Contract(format!(
            "build_tstar: degree {} has no target",
            p
        )));
    }
    let d = action.dim;
    let src = multi_indices(p);
    let dst = multi_indices(p - 1);
    let mut m = CMatrix::zeros(d * dst.len(), d * src.len());
    for (ri, idx) in dst.iter().enumerate() {
        for k in 0..3usize {
            if idx.contains(&k) {
                continue;
            }
            let mut full = idx.clone();
            let pos = full.iter().take_while(|&&x| x < k).count();
            full.insert(pos, k);
            let ci = src.iter().position(|s| *s == full).expect("superindex");
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            let block = action.rho_y(k).scale(sign);
            let mut view = m.view_mut((ri * d, ci * d), (d, d));
            view += &block;
        }
    }
    Ok(m)
}

/// H in degree p per the closed curvature formula (not via T composition):
/// sum_j rho(Y_j)^2 plus the alternating bracket contraction.
pub fn build_h_direct(action: &LieAction, p: usize) -> Result<CMatrix> {
    if p > 3 {
        return Err(Error::Contract(format!(
            "build_h_direct: degree {} out of range",
            p
        )));
    }
    let d = action.dim;
    let idxs = multi_indices(p);
    let mut casimir = CMatrix::zeros(d, d);
    for k in 0..3 {
        casimir += action.rho_y(k) * action.rho_y(k);
    }
    let mut m = CMatrix::zeros(d * idxs.len(), d * idxs.len());
    for (ri, idx) in idxs.iter().enumerate() {
        {
            let mut view = m.view_mut((ri * d, ri * d), (d, d));
            view += &casimir;
        }
        for (k, &ik) in idx.iter().enumerate() {
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != ik).collect();
            for j in 0..3usize {
                if rest.contains(&j) {
                    continue;
                }
                // component alpha_{j, rest}; j = ik contributes nothing since
                // the bracket [Y_ik, Y_ik] vanishes
                if j == ik {
                    continue;
                }
                let mut full = rest.clone();
                let pos = full.iter().take_while(|&&x| x < j).count();
                full.insert(pos, j);
                let ci = idxs.iter().position(|s| *s == full).expect("index");
                let outer = if k % 2 == 0 { 1.0 } else { -1.0 };
                let inner = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let block = action.rho_bracket_yy(ik, j).scale(outer * inner);
                let mut view = m.view_mut((ri * d, ci * d), (d, d));
                view += &block;
            }
        }
    }
    Ok(m)
}

/// Scaling that takes monomial coordinates to orthonormal ones on degree p.
fn orthonormal_scale(action: &LieAction, p: usize) -> (CVector, CVector) {
    let slots = multi_indices(p).len();
    let d = action.dim;
    let mut fwd = CVector::zeros(d * slots);
    let mut bwd = CVector::zeros(d * slots);
    for s in 0..slots {
        for j in 0..d {
            let w = action.weights[j].sqrt();
            fwd[s * d + j] = c(w, 0.0);
            bwd[s * d + j] = c(1.0 / w, 0.0);
        }
    }
    (fwd, bwd)
}

/// Conjugate a degree p_from -> p_to map from the monomial basis into the
/// orthonormal basis.
pub fn orthonormal_map(action: &LieAction, m: &CMatrix, p_from: usize, p_to: usize) -> CMatrix {
    let (fwd_to, _) = orthonormal_scale(action, p_to);
    let (_, bwd_from) = orthonormal_scale(action, p_from);
    let mut out = m.clone();
    for i in 0..out.nrows() {
        for j in 0..out.ncols() {
            out[(i, j)] = fwd_to[i] * m[(i, j)] * bwd_from[j];
        }
    }
    out
}

/// Inner product on V tensor Lambda^p in monomial coordinates.
pub fn form_inner_product(action: &LieAction, p: usize, a: &CVector, b: &CVector) -> C64 {
    let d = action.dim;
    let slots = multi_indices(p).len();
    let mut acc = c(0.0, 0.0);
    for s in 0..slots {
        for j in 0..d {
            acc += a[s * d + j].conj() * b[s * d + j] * c(action.weights[j], 0.0);
        }
    }
    acc
}

/// H on degree p in the orthonormal basis, with its real spectrum.
#[derive(Debug, Clone)]
pub struct WeitzenboeckOperator {
    pub label: String,
    pub dim: usize,
    pub degree: usize,
    pub matrix: CMatrix,
    pub spectrum: Vec<f64>,
}

pub fn build_h(
    action: &LieAction,
    p: usize,
    tol: &ToleranceProfile,
) -> Result<WeitzenboeckOperator> {
    let h = build_h_direct(action, p)?;
    let matrix = orthonormal_map(action, &h, p, p);
    let spectrum = hermitian_spectrum(&matrix, tol)?;
    Ok(WeitzenboeckOperator {
        label: action.label.clone(),
        dim: action.dim,
        degree: p,
        matrix,
        spectrum,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositivityCertificate {
    pub label: String,
    pub degree: usize,
    pub min_eigenvalue: f64,
    pub positive: bool,
}

/// Minimal eigenvalue of H at degree p; positive iff it clears eig_abs_tol.
pub fn positivity_certificate(
    action: &LieAction,
    p: usize,
    tol: &ToleranceProfile,
) -> Result<PositivityCertificate> {
    let op = build_h(action, p, tol)?;
    let min_eigenvalue = op.spectrum.first().copied().unwrap_or(0.0);
    Ok(PositivityCertificate {
        label: action.label.clone(),
        degree: p,
        min_eigenvalue,
        positive: min_eigenvalue > tol.eig_abs_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_entry_diff;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_brackets_are_exact() {
        for i in 0..3usize {
            let xi = LieBasis::x(i);
            let xj = LieBasis::x((i + 1) % 3);
            let bracket = &xi * &xj - &xj * &xi;
            let expect = LieBasis::x((i + 2) % 3).scale(2.0);
            assert_eq!(max_entry_diff(&bracket, &expect), 0.0);
        }
    }

    #[test]
    fn trace_form_orthonormality() {
        // trace form is proportional to the Killing form; the fixed basis is
        // orthonormal for it: tr(X_i X_j) = -2 delta, tr(Y_i Y_j) = 2 delta
        for i in 0..3usize {
            for j in 0..3usize {
                let tx = (LieBasis::x(i) * LieBasis::x(j)).trace();
                let ty = (LieBasis::y(i) * LieBasis::y(j)).trace();
                let expected = if i == j { -2.0 } else { 0.0 };
                assert!((tx - c(expected, 0.0)).norm() < 1e-14);
                assert!((ty + c(expected, 0.0)).norm() < 1e-14);
                let txy = (LieBasis::x(i) * LieBasis::y(j)).trace();
                assert!(txy.re.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn trivial_module_gives_zero_operators() {
        let a = LieAction::irreducible(1).unwrap();
        for p in 0..=2usize {
            assert_eq!(build_t(&a, p).unwrap().norm(), 0.0);
        }
        for p in 1..=3usize {
            assert_eq!(build_tstar(&a, p).unwrap().norm(), 0.0);
        }
        for p in 0..=3usize {
            let op = build_h(&a, p, &ToleranceProfile::default()).unwrap();
            assert!(op.spectrum.iter().all(|&x| x.abs() < 1e-14));
        }
    }

    #[test]
    fn t_at_degree_zero_is_three_stacked_blocks() {
        let a = LieAction::irreducible(2).unwrap();
        let t = build_t(&a, 0).unwrap();
        assert_eq!(t.shape(), (6, 2));
        for k in 0..3usize {
            let block = t.view((2 * k, 0), (2, 2)).clone_owned();
            assert_eq!(max_entry_diff(&block, a.rho_y(k)), 0.0);
        }
    }

    #[test]
    fn degree_zero_block_trace_identity() {
        // trace of T*T at p=0 equals 3 x trace of the identity on V_2
        let a = LieAction::irreducible(2).unwrap();
        let t = orthonormal_map(&a, &build_t(&a, 0).unwrap(), 0, 1);
        let prod = t.adjoint() * &t;
        assert!((prod.trace() - c(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn tstar_is_the_formal_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=6usize {
            let a = LieAction::irreducible(n).unwrap();
            for p in 0..=2usize {
                let t = build_t(&a, p).unwrap();
                let ts = build_tstar(&a, p + 1).unwrap();
                let src = form_dim(n, p);
                let dst = form_dim(n, p + 1);
                for _ in 0..5 {
                    let alpha = CVector::from_fn(src, |_, _| {
                        c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    });
                    let beta = CVector::from_fn(dst, |_, _| {
                        c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    });
                    let lhs = form_inner_product(&a, p + 1, &(&t * &alpha), &beta);
                    let rhs = form_inner_product(&a, p, &alpha, &(&ts * &beta));
                    assert!(
                        (lhs - rhs).norm() <= 1e-10,
                        "n={} p={} residual={}",
                        n,
                        p,
                        (lhs - rhs).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn h_equals_tt_star_plus_t_star_t() {
        for n in 1..=8usize {
            let a = LieAction::irreducible(n).unwrap();
            for p in 0..=3usize {
                let h = build_h_direct(&a, p).unwrap();
                let dim = form_dim(n, p);
                let mut composed = CMatrix::zeros(dim, dim);
                if p <= 2 {
                    let t = build_t(&a, p).unwrap();
                    let ts = build_tstar(&a, p + 1).unwrap();
                    composed += &ts * &t;
                }
                if p >= 1 {
                    let ts = build_tstar(&a, p).unwrap();
                    let t = build_t(&a, p - 1).unwrap();
                    composed += &t * &ts;
                }
                let diff = max_entry_diff(&h, &composed);
                assert!(diff <= 1e-12, "n={} p={} diff={}", n, p, diff);
            }
        }
    }

    #[test]
    fn h_is_hermitian_in_orthonormal_basis() {
        let tol = ToleranceProfile::default();
        for n in [2usize, 4, 7] {
            let a = LieAction::irreducible(n).unwrap();
            for p in 0..=3usize {
                let op = build_h(&a, p, &tol).unwrap();
                let asym = max_entry_diff(&op.matrix, &op.matrix.adjoint());
                assert!(asym <= 1e-10);
            }
        }
    }

    #[test]
    fn degree_symmetry_of_spectra() {
        let tol = ToleranceProfile::default();
        for n in [2usize, 3, 5] {
            let a = LieAction::irreducible(n).unwrap();
            for p in 0..=1usize {
                let s1 = build_h(&a, p, &tol).unwrap().spectrum;
                let s2 = build_h(&a, 3 - p, &tol).unwrap().spectrum;
                assert_eq!(s1.len(), s2.len());
                for (x, y) in s1.iter().zip(s2.iter()) {
                    assert!((x - y).abs() <= 1e-9, "n={} p={} {} vs {}", n, p, x, y);
                }
            }
        }
    }

    #[test]
    fn positivity_on_degrees_one_and_two() {
        let tol = ToleranceProfile::default();
        for n in 2..=10usize {
            let a = LieAction::irreducible(n).unwrap();
            for p in [1usize, 2] {
                let cert = positivity_certificate(&a, p, &tol).unwrap();
                assert!(cert.positive, "n={} p={} min={}", n, p, cert.min_eigenvalue);
                assert!(cert.min_eigenvalue > 1e-10);
            }
        }
        let trivial = LieAction::irreducible(1).unwrap();
        let cert = positivity_certificate(&trivial, 1, &tol).unwrap();
        assert!(!cert.positive);
        assert!(cert.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn adjoined_trivial_factor_gives_three_dimensional_kernel() {
        let tol = ToleranceProfile::default();
        for n in [2usize, 3, 5] {
            let a = LieAction::direct_sum(&[n, 1]).unwrap();
            let op = build_h(&a, 1, &tol).unwrap();
            let zero_count = op.spectrum.iter().filter(|&&x| x.abs() <= 1e-9).count();
            assert_eq!(zero_count, 3, "n={} spectrum={:?}", n, op.spectrum);
        }
    }
}
