//! Symmetric powers, adjoints, invariant forms, lift enumeration and the
//! principal decomposition of sl(n).
//!
//! Basis conventions are frozen here: V_n carries the monomial basis
//! e1^{n-1}, e1^{n-2} e2, ..., e2^{n-1}; sl(n) carries the elementary
//! off-diagonal matrices E_ij in lexicographic order followed by the
//! diagonal differences H_i = E_ii - E_{i+1,i+1}.

use crate::error::{Error, Result};
use crate::gf2::gf2_affine_solutions;
use crate::group::{
    evaluate_word, validate_representation, GroupPresentation, PeripheralKind, PeripheralSystem,
    Representation,
};
use crate::linalg::{numerical_rank, CMatrix, ToleranceProfile, C64};
use rand::Rng;
use std::fmt;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * ((n - i) as f64) / ((i + 1) as f64);
    }
    acc
}

/// Matrix of the induced action of g on Sym^{n-1}(C^2) in the monomial basis.
pub fn sym_power_matrix(n: usize, g: &CMatrix) -> Result<CMatrix> {
    if n < 1 {
        return Err(Error::Contract("sym_power_matrix needs n >= 1".into()));
    }
    if g.nrows() != 2 || g.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            context: format!(
                "sym_power_matrix expects a 2x2 matrix, got {}x{}",
                g.nrows(),
                g.ncols()
            ),
        });
    }
    let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
    if det.norm() < 1e-12 {
        return Err(Error::SingularImage { index: 0 });
    }
    if (det - c(1.0, 0.0)).norm() > 1e-8 {
        log::warn!(
            "sym_power_matrix: det = {} is not 1 within 1e-8; proceeding",
            det
        );
    }
    let (a, b, cc, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let mut m = CMatrix::zeros(n, n);
    // column j: expansion of (a e1 + c e2)^{n-1-j} (b e1 + d e2)^j
    for j in 0..n {
        for p in 0..=(n - 1 - j) {
            for q in 0..=j {
                let coef = binomial(n - 1 - j, p) * binomial(j, q);
                let term = a.powu(p as u32)
                    * cc.powu((n - 1 - j - p) as u32)
                    * b.powu(q as u32)
                    * d.powu((j - q) as u32)
                    * c(coef, 0.0);
                let row = n - 1 - (p + q);
                m[(row, j)] += term;
            }
        }
    }
    Ok(m)
}

/// Derivation action of a traceless 2x2 matrix on the monomial basis:
/// d/dt|_0 of sym_power_matrix(exp(tA)).
pub fn sym_power_lie(n: usize, a: &CMatrix) -> Result<CMatrix> {
    if n < 1 {
        return Err(Error::Contract("sym_power_lie needs n >= 1".into()));
    }
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            context: "sym_power_lie expects a 2x2 matrix".into(),
        });
    }
    let trace = a[(0, 0)] + a[(1, 1)];
    if trace.norm() > 1e-10 {
        return Err(Error::Contract(format!(
            "sym_power_lie needs a traceless input, trace = {}",
            trace
        )));
    }
    let (al, be, ga) = (a[(0, 0)], a[(0, 1)], a[(1, 0)]);
    let mut m = CMatrix::zeros(n, n);
    // product rule on e1^{n-1-j} e2^j with A e1 = al e1 + ga e2,
    // A e2 = be e1 - al e2
    for j in 0..n {
        m[(j, j)] += al * c((n as f64 - 1.0) - 2.0 * j as f64, 0.0);
        if j + 1 < n {
            m[(j + 1, j)] += ga * c((n - 1 - j) as f64, 0.0);
        }
        if j > 0 {
            m[(j - 1, j)] += be * c(j as f64, 0.0);
        }
    }
    Ok(m)
}

/// Fixed basis of sl(n): E_ij (i != j, lexicographic), then H_i.
pub(crate) fn sl_basis(n: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut e = CMatrix::zeros(n, n);
                e[(i, j)] = c(1.0, 0.0);
                basis.push(e);
            }
        }
    }
    for i in 0..n - 1 {
        let mut h = CMatrix::zeros(n, n);
        h[(i, i)] = c(1.0, 0.0);
        h[(i + 1, i + 1)] = c(-1.0, 0.0);
        basis.push(h);
    }
    basis
}

/// Coordinates of a (numerically) traceless matrix in the sl_basis ordering.
pub(crate) fn sl_coords(x: &CMatrix) -> Vec<C64> {
    let n = x.nrows();
    let mut v = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                v.push(x[(i, j)]);
            }
        }
    }
    // diagonal part: partial sums give the H_i coordinates
    let mut acc = c(0.0, 0.0);
    for i in 0..n - 1 {
        acc += x[(i, i)];
        v.push(acc);
    }
    v
}

/// Matrix of X -> g X g^-1 on the fixed sl(n) basis.
pub fn adjoint_matrix(g: &CMatrix) -> Result<CMatrix> {
    let n = g.nrows();
    if n != g.ncols() || n < 2 {
        return Err(Error::DimensionMismatch {
            context: "adjoint_matrix expects a square matrix of size >= 2".into(),
        });
    }
    let gi = g
        .clone()
        .try_inverse()
        .ok_or(Error::SingularImage { index: 0 })?;
    let det = g.determinant();
    if (det - c(1.0, 0.0)).norm() > 1e-8 {
        log::warn!(
            "adjoint_matrix: det = {} is not 1 within 1e-8; proceeding",
            det
        );
    }
    let basis = sl_basis(n);
    let dim = n * n - 1;
    let mut m = CMatrix::zeros(dim, dim);
    for (t, b) in basis.iter().enumerate() {
        let img = g * b * &gi;
        let coords = sl_coords(&img);
        for (r, v) in coords.into_iter().enumerate() {
            m[(r, t)] = v;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Bilinear,
    Hermitian,
}

/// Gram matrix of a pairing on V_n in the monomial basis.
#[derive(Debug, Clone)]
pub struct BilinearForm {
    pub gram: CMatrix,
    pub kind: FormKind,
}

impl BilinearForm {
    /// phi(u, v) for the bilinear kind, <u, v> for the hermitian kind.
    pub fn apply(&self, u: &crate::linalg::CVector, v: &crate::linalg::CVector) -> C64 {
        match self.kind {
            FormKind::Bilinear => (u.transpose() * &self.gram * v)[(0, 0)],
            FormKind::Hermitian => (u.adjoint() * &self.gram * v)[(0, 0)],
        }
    }
}

/// The nondegenerate invariant bilinear pairing on V_n induced by the
/// symplectic form on C^2, normalized by phi(e1^{n-1}, e2^{n-1}) = 1.
pub fn invariant_pairing(n: usize) -> Result<BilinearForm> {
    if n < 1 {
        return Err(Error::Contract("invariant_pairing needs n >= 1".into()));
    }
    let mut gram = CMatrix::zeros(n, n);
    for i in 0..n {
        let j = n - 1 - i;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        gram[(i, j)] = c(sign / binomial(n - 1, i), 0.0);
    }
    Ok(BilinearForm {
        gram,
        kind: FormKind::Bilinear,
    })
}

/// su(2) basis fixed by the construction: X1 diag(i,-i), X2 real rotation,
/// X3 antidiagonal i.
pub fn su2_basis() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]),
    ]
}

/// Diagonal weights making every d rho_n(X_k) skew-Hermitian, found by
/// propagating the skew-Hermiticity constraints from the first monomial
/// (normalized to weight 1). The closed form (inverse binomial weights) is
/// only used as a cross-check in tests, never here.
pub fn su2_inner_product(n: usize) -> Result<BilinearForm> {
    if n < 1 {
        return Err(Error::Contract("su2_inner_product needs n >= 1".into()));
    }
    let actions: Vec<CMatrix> = su2_basis()
        .iter()
        .map(|x| sym_power_lie(n, x))
        .collect::<Result<_>>()?;
    let mut weights = vec![None::<f64>; n];
    weights[0] = Some(1.0);
    // propagate w_j A_ij + conj(A_ji) w_i = 0 along nonzero couplings
    let mut changed = true;
    while changed {
        changed = false;
        for a in &actions {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    if let (Some(wi), None) = (weights[i], weights[j]) {
                        let aij = a[(i, j)];
                        let aji = a[(j, i)];
                        if aij.norm() > 1e-12 && aji.norm() > 1e-12 {
                            // w_i A_ij + conj(A_ji) w_j = 0
                            let wj = -(aij * c(wi, 0.0)) / aji.conj();
                            if wj.im.abs() > 1e-9 * wj.re.abs().max(1.0) {
                                return Err(Error::Contract(
                                    "su2 weight propagation produced a non-real weight".into(),
                                ));
                            }
                            weights[j] = Some(wj.re);
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    let weights: Vec<f64> = weights
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| {
            Error::Contract("su2 weight constraints do not connect all monomials".into())
        })?;
    if weights.iter().any(|&w| w <= 0.0) {
        return Err(Error::Contract("su2 weights must be positive".into()));
    }
    let gram = CMatrix::from_diagonal(&crate::linalg::CVector::from_iterator(
        n,
        weights.iter().map(|&w| c(w, 0.0)),
    ));
    // verify the full constraint set; the residual is the construction's oracle
    let mut residual = 0.0f64;
    for a in &actions {
        let s = &gram * a + a.adjoint() * &gram;
        residual = residual.max(s.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    if residual > 1e-9 {
        return Err(Error::Contract(format!(
            "su2 inner product residual {:.3e} too large",
            residual
        )));
    }
    Ok(BilinearForm {
        gram,
        kind: FormKind::Hermitian,
    })
}

/// A homomorphism pi_1(M) -> Z/2, stored as one bit per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCharacter {
    pub bits: Vec<bool>,
}

impl SignCharacter {
    pub fn trivial(generator_count: usize) -> Self {
        SignCharacter {
            bits: vec![false; generator_count],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn sign(&self, gen: usize) -> f64 {
        if self.bits[gen] {
            -1.0
        } else {
            1.0
        }
    }

    /// Sign on a word: (-1)^(sum of mod-2 exponents over twisted generators).
    pub fn sign_on_word(&self, w: &crate::group::Word) -> f64 {
        let mut parity = false;
        for &(g, _) in w.letters() {
            if self.bits[g] {
                parity = !parity;
            }
        }
        if parity {
            -1.0
        } else {
            1.0
        }
    }

    /// Twist a representation: rho'(x_j) = eps(x_j) rho(x_j).
    pub fn twist(&self, rep: &Representation) -> Result<Representation> {
        let images = rep
            .images
            .iter()
            .enumerate()
            .map(|(i, m)| m.scale(1.0) * c(self.sign(i), 0.0))
            .collect();
        Representation::new(images, &format!("{} twisted by {}", rep.source, self))
    }
}

impl fmt::Display for SignCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '-' } else { '+' })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Lift {
    pub character: SignCharacter,
    pub rep: Representation,
}

/// All sign characters vanishing on the relators, each paired with the
/// twisted representation. The trivial character comes first.
pub fn enumerate_lifts(
    pres: &GroupPresentation,
    base: &Representation,
    tol: &ToleranceProfile,
) -> Result<Vec<Lift>> {
    if base.dim != 2 {
        return Err(Error::Contract(format!(
            "lift enumeration expects a 2-dimensional base, got dim {}",
            base.dim
        )));
    }
    let report = validate_representation(pres, base, tol)?;
    if !report.pass {
        return Err(Error::RelatorCheckFailed {
            context: "lift enumeration base".into(),
            deviation: report.max_deviation(),
        });
    }
    let a = pres.relator_exponents_mod2();
    let rhs = vec![0u8; pres.relators.len()];
    let sols = gf2_affine_solutions(&a, &rhs)?;
    let mut lifts = Vec::with_capacity(sols.len());
    for s in sols {
        let character = SignCharacter {
            bits: s.iter().map(|&b| b == 1).collect(),
        };
        let rep = character.twist(base)?;
        let check = validate_representation(pres, &rep, tol)?;
        if !check.pass {
            return Err(Error::RelatorCheckFailed {
                context: format!("twisted lift {}", character),
                deviation: check.max_deviation(),
            });
        }
        lifts.push(Lift { character, rep });
    }
    Ok(lifts)
}

/// Whether a lift restricted to a torus peripheral has trace +2 on both
/// generator words. Errors on non-parabolic or unclassifiable traces.
pub fn is_positive_lift(rep: &Representation, peripheral: &PeripheralSystem) -> Result<bool> {
    if peripheral.kind != PeripheralKind::Torus {
        return Err(Error::Contract(
            "positivity classification applies to torus peripherals only".into(),
        ));
    }
    let mut positive = true;
    for w in &peripheral.words {
        let t = evaluate_word(rep, w).trace();
        let d_plus = (t - c(2.0, 0.0)).norm();
        let d_minus = (t + c(2.0, 0.0)).norm();
        if d_plus <= 1e-6 {
            continue;
        } else if d_minus <= 1e-6 {
            positive = false;
        } else if d_plus.min(d_minus) > 1e-4 {
            return Err(Error::NotParabolic {
                trace: format!("{}", t),
                deviation: d_plus.min(d_minus),
            });
        } else {
            return Err(Error::AmbiguousTrace {
                trace: format!("{}", t),
            });
        }
    }
    Ok(positive)
}

/// Irreducible dimensions of sl(n) as an SL(2,C)-module under the principal
/// embedding, computed constructively from weight spaces and highest-weight
/// vectors. Returns [2n-1, 2n-3, ..., 3].
pub fn principal_decomposition(n: usize) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::Contract(
            "principal_decomposition needs n >= 2".into(),
        ));
    }
    let tol = ToleranceProfile::default();
    let h2 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    let e2 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let l = sym_power_lie(n, &h2)?;
    let e = sym_power_lie(n, &e2)?;
    let basis = sl_basis(n);
    let dim = n * n - 1;
    // ad_L and ad_E on the sl(n) basis
    let mut ad_l = CMatrix::zeros(dim, dim);
    let mut ad_e = CMatrix::zeros(dim, dim);
    for (t, b) in basis.iter().enumerate() {
        let cl = sl_coords(&(&l * b - b * &l));
        let ce = sl_coords(&(&e * b - b * &e));
        for r in 0..dim {
            ad_l[(r, t)] = cl[r];
            ad_e[(r, t)] = ce[r];
        }
    }
    // weights: ad_L is diagonal on this basis with integer entries
    let mut weights = Vec::with_capacity(dim);
    for t in 0..dim {
        for r in 0..dim {
            if r != t && ad_l[(r, t)].norm() > 1e-9 {
                return Err(Error::Contract(
                    "weight operator unexpectedly non-diagonal on the sl basis".into(),
                ));
            }
        }
        let w = ad_l[(t, t)];
        let wi = w.re.round();
        if (w - c(wi, 0.0)).norm() > 1e-9 {
            return Err(Error::Contract(format!("non-integer weight {}", w)));
        }
        weights.push(wi as i64);
    }
    let mut unique: Vec<i64> = weights.iter().copied().filter(|&w| w >= 0).collect();
    unique.sort_unstable();
    unique.dedup();
    unique.reverse();
    let mut dims = Vec::new();
    for w in unique {
        let idx: Vec<usize> = (0..dim).filter(|&t| weights[t] == w).collect();
        // restriction of ad_E to this weight space
        let mut sub = CMatrix::zeros(dim, idx.len());
        for (ci, &t) in idx.iter().enumerate() {
            for r in 0..dim {
                sub[(r, ci)] = ad_e[(r, t)];
            }
        }
        let rank = numerical_rank(&sub, &tol)?;
        let hw_count = idx.len() - rank;
        for _ in 0..hw_count {
            dims.push((w + 1) as usize);
        }
    }
    dims.sort_unstable_by(|a, b| b.cmp(a));
    let total: usize = dims.iter().sum();
    if total != dim {
        return Err(Error::Contract(format!(
            "principal decomposition sums to {}, expected {}",
            total, dim
        )));
    }
    Ok(dims)
}

/// Composition of a 2-dimensional representation with Sym^{n-1}.
pub fn sym_power_rep(base: &Representation, n: usize) -> Result<Representation> {
    if base.dim != 2 {
        return Err(Error::Contract(format!(
            "sym_power_rep expects a 2-dimensional base, got {}",
            base.dim
        )));
    }
    let images = base
        .images
        .iter()
        .map(|m| sym_power_matrix(n, m))
        .collect::<Result<_>>()?;
    Representation::new(images, &format!("sym:{} of {}", n, base.source))
}

/// Composition with the adjoint representation on sl(dim).
pub fn adjoint_rep(rep: &Representation) -> Result<Representation> {
    let images = rep
        .images
        .iter()
        .map(adjoint_matrix)
        .collect::<Result<_>>()?;
    Representation::new(images, &format!("adj of {}", rep.source))
}

/// Random element of SL(2,C) with entries O(1) and moderate condition
/// number, so high symmetric powers of the sample stay well conditioned.
pub fn random_sl2<R: Rng>(rng: &mut R) -> CMatrix {
    loop {
        let a = c(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        );
        let b = c(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        );
        let cc_ = c(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        );
        if a.norm() < 0.4 {
            continue;
        }
        let d = (c(1.0, 0.0) + b * cc_) / a;
        if d.norm() > 1.5 {
            continue;
        }
        return CMatrix::from_row_slice(2, 2, &[a, b, cc_, d]);
    }
}

/// Max invariance residual of the pairing over `samples` random
/// (g, u, v) triples; deterministic for a fixed seed.
pub fn pairing_invariance_residual(n: usize, samples: usize, seed: u64) -> Result<f64> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let form = invariant_pairing(n)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let g = random_sl2(&mut rng);
        let gn = sym_power_matrix(n, &g)?;
        let u = crate::linalg::CVector::from_fn(n, |_, _| {
            c(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        });
        let v = crate::linalg::CVector::from_fn(n, |_, _| {
            c(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        });
        let lhs = form.apply(&(&gn * &u), &(&gn * &v));
        let rhs = form.apply(&u, &v);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_spectrum, max_entry_diff};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sym1_is_standard_rep() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_sl2(&mut rng);
        let s = sym_power_matrix(2, &g).unwrap();
        assert!(max_entry_diff(&s, &g) < 1e-14);
    }

    #[test]
    fn sym2_of_unipotent_matches_hand_expansion() {
        let g =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = sym_power_matrix(3, &g).unwrap();
        let expect = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ],
        );
        assert!(max_entry_diff(&s, &expect) == 0.0);
    }

    #[test]
    fn sym4_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let g = random_sl2(&mut rng);
            let s = sym_power_matrix(4, &g).unwrap();
            assert!((s.determinant() - c(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn sym_power_is_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 3, 5, 10] {
            let g = random_sl2(&mut rng);
            let h = random_sl2(&mut rng);
            let lhs = sym_power_matrix(n, &(&g * &h)).unwrap();
            let rhs = sym_power_matrix(n, &g).unwrap() * sym_power_matrix(n, &h).unwrap();
            let scale = rhs.norm().max(1.0);
            assert!(max_entry_diff(&lhs, &rhs) <= 1e-9 * scale);
        }
    }

    #[test]
    fn lie_diagonal_weights() {
        let h =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let l = sym_power_lie(3, &h).unwrap();
        let expect = CMatrix::from_diagonal(&crate::linalg::CVector::from_vec(vec![
            c(2.0, 0.0),
            c(0.0, 0.0),
            c(-2.0, 0.0),
        ]));
        assert!(max_entry_diff(&l, &expect) == 0.0);
    }

    #[test]
    fn lie_on_v2_is_identity_functor() {
        let x1 = &su2_basis()[0];
        let l = sym_power_lie(2, x1).unwrap();
        assert!(max_entry_diff(&l, x1) == 0.0);
    }

    #[test]
    fn lie_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        a[(0, 1)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        a[(1, 0)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        a[(1, 1)] = -a[(0, 0)];
        let h = 1e-5;
        for n in [3usize, 5] {
            // exp(hA) to second order is enough for an O(h) check
            let exp_ha = CMatrix::identity(2, 2)
                + a.scale(h)
                + (&a * &a).scale(h * h / 2.0)
                + (&a * &a * &a).scale(h * h * h / 6.0);
            let fd =
                (sym_power_matrix(n, &exp_ha).unwrap() - CMatrix::identity(n, n)).scale(1.0 / h);
            let lie = sym_power_lie(n, &a).unwrap();
            let err = max_entry_diff(&fd, &lie);
            assert!(err < 50.0 * h, "n={} err={}", n, err);
        }
    }

    #[test]
    fn lie_bracket_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [3usize, 4, 6] {
            let mk = |rng: &mut ChaCha8Rng| {
                let mut a = CMatrix::zeros(2, 2);
                a[(0, 0)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                a[(0, 1)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                a[(1, 0)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                a[(1, 1)] = -a[(0, 0)];
                a
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let da = sym_power_lie(n, &a).unwrap();
            let db = sym_power_lie(n, &b).unwrap();
            let lhs = &da * &db - &db * &da;
            let rhs = sym_power_lie(n, &(&a * &b - &b * &a)).unwrap();
            assert!(max_entry_diff(&lhs, &rhs) <= 1e-9 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn non_traceless_rejected() {
        let a = CMatrix::identity(2, 2);
        assert!(sym_power_lie(3, &a).is_err());
    }

    #[test]
    fn adjoint_of_identity() {
        let ad = adjoint_matrix(&CMatrix::identity(3, 3)).unwrap();
        assert!(crate::linalg::deviation_from_identity(&ad) < 1e-14);
    }

    #[test]
    fn adjoint_of_diagonal_eigenvalues() {
        let lam = c(1.7, 0.4);
        let g = CMatrix::from_diagonal(&crate::linalg::CVector::from_vec(vec![
            lam,
            c(1.0, 0.0) / lam,
        ]));
        let ad = adjoint_matrix(&g).unwrap();
        // eigenvalues lambda^2, 1, lambda^-2 read off the diagonal action on E, F, H
        let l2 = lam * lam;
        let mut expected = [l2, c(1.0, 0.0) / l2, c(1.0, 0.0)];
        let mut got = [ad[(0, 0)], ad[(1, 1)], ad[(2, 2)]];
        expected.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        got.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        for (e, g) in expected.iter().zip(got.iter()) {
            assert!((e - g).norm() < 1e-12);
        }
    }

    #[test]
    fn adjoint_functoriality() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let g = random_sl2(&mut rng);
            let s = sym_power_matrix(3, &g).unwrap();
            let si = s.clone().try_inverse().unwrap();
            let prod = adjoint_matrix(&s).unwrap() * adjoint_matrix(&si).unwrap();
            assert!(crate::linalg::deviation_from_identity(&prod) < 1e-10);
        }
    }

    #[test]
    fn adjoint_preserves_killing_form() {
        // K(X,Y) = 2n tr(XY) on sl(n); Ad(g) must preserve tr(XY)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 3;
        let g = sym_power_matrix(n, &random_sl2(&mut rng)).unwrap();
        let ad = adjoint_matrix(&g).unwrap();
        let basis = sl_basis(n);
        let dim = basis.len();
        let mut k0 = CMatrix::zeros(dim, dim);
        let mut k1 = CMatrix::zeros(dim, dim);
        let from_coords = |col: nalgebra::DVectorView<C64>| -> CMatrix {
            // reconstruct matrix from sl coordinates
            let mut m = CMatrix::zeros(n, n);
            let mut idx = 0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        m[(i, j)] = col[idx];
                        idx += 1;
                    }
                }
            }
            let mut prev = c(0.0, 0.0);
            for i in 0..n - 1 {
                let ci = col[idx];
                idx += 1;
                m[(i, i)] = ci - prev;
                prev = ci;
            }
            m[(n - 1, n - 1)] = -prev;
            m
        };
        for s in 0..dim {
            for t in 0..dim {
                k0[(s, t)] = (&basis[s] * &basis[t]).trace();
                let bs = from_coords(ad.column(s));
                let bt = from_coords(ad.column(t));
                k1[(s, t)] = (&bs * &bt).trace();
            }
        }
        assert!(max_entry_diff(&k0, &k1) < 1e-8);
    }

    #[test]
    fn pairing_n2_is_symplectic() {
        let f = invariant_pairing(2).unwrap();
        let expect =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
        assert!(max_entry_diff(&f.gram, &expect) == 0.0);
    }

    #[test]
    fn pairing_invariance_and_nondegeneracy() {
        let tol = ToleranceProfile::default();
        for n in 2..=8usize {
            let f = invariant_pairing(n).unwrap();
            assert_eq!(numerical_rank(&f.gram, &tol).unwrap(), n);
        }
        let res = pairing_invariance_residual(3, 20, 42).unwrap();
        assert!(res < 1e-9, "residual {}", res);
    }

    #[test]
    fn su2_product_examples() {
        let f2 = su2_inner_product(2).unwrap();
        assert!(crate::linalg::deviation_from_identity(&f2.gram) < 1e-14);
        // skew-Hermiticity residual for n = 3
        let f3 = su2_inner_product(3).unwrap();
        for x in su2_basis().iter() {
            let a = sym_power_lie(3, x).unwrap();
            let s = &f3.gram * &a + a.adjoint() * &f3.gram;
            assert!(s.iter().map(|z| z.norm()).fold(0.0, f64::max) <= 1e-10);
        }
        // strictly positive weights, matching the inverse binomial closed form
        for n in 2..=10usize {
            let f = su2_inner_product(n).unwrap();
            for j in 0..n {
                let w = f.gram[(j, j)].re;
                assert!(w > 0.0);
                let closed = 1.0 / binomial(n - 1, j);
                assert!((w - closed).abs() < 1e-9 * closed);
            }
        }
    }

    #[test]
    fn lifts_of_free_group() {
        let pres = GroupPresentation::new("free2", 2, vec![], vec![]).unwrap();
        let base = {
            let a = CMatrix::from_row_slice(
                2,
                2,
                &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)],
            );
            let b = CMatrix::from_row_slice(
                2,
                2,
                &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
            );
            Representation::new(vec![a, b], "free2").unwrap()
        };
        let lifts = enumerate_lifts(&pres, &base, &ToleranceProfile::default()).unwrap();
        assert_eq!(lifts.len(), 4);
        assert!(lifts[0].character.is_trivial());
        assert!(max_entry_diff(&lifts[0].rep.images[0], &base.images[0]) == 0.0);
        // twisting twice returns the original
        for l in &lifts {
            let back = l.character.twist(&l.rep).unwrap();
            for (m1, m2) in back.images.iter().zip(base.images.iter()) {
                assert!(max_entry_diff(m1, m2) == 0.0);
            }
        }
    }

    #[test]
    fn positivity_classification() {
        let per = PeripheralSystem::new(
            PeripheralKind::Torus,
            vec![
                crate::group::parse_word("a", 2).unwrap(),
                crate::group::parse_word("b", 2).unwrap(),
            ],
            vec![false, false],
        )
        .unwrap();
        let u1 =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let u2 =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let rep = Representation::new(vec![u1.clone(), u2.clone()], "torus").unwrap();
        assert!(is_positive_lift(&rep, &per).unwrap());
        let rep_neg = Representation::new(vec![-u1.clone(), u2.clone()], "torus-").unwrap();
        assert!(!is_positive_lift(&rep_neg, &per).unwrap());
        // non-parabolic image is a contract error
        let hyp =
            CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        let rep_bad = Representation::new(vec![hyp, u2], "bad").unwrap();
        assert!(matches!(
            is_positive_lift(&rep_bad, &per),
            Err(Error::NotParabolic { .. })
        ));
    }

    #[test]
    fn principal_decomposition_small() {
        assert_eq!(principal_decomposition(2).unwrap(), vec![3]);
        assert_eq!(principal_decomposition(3).unwrap(), vec![5, 3]);
        for n in 2..=8usize {
            let d = principal_decomposition(n).unwrap();
            assert_eq!(d.iter().sum::<usize>(), n * n - 1);
            // strictly decreasing odd integers ending at 3
            assert_eq!(*d.last().unwrap(), 3);
            for w in d.windows(2) {
                assert_eq!(w[0] - w[1], 2);
            }
            assert!(d.iter().all(|&x| x % 2 == 1));
            assert_eq!(d[0], 2 * n - 1);
        }
    }

    #[test]
    fn hermitian_weights_give_real_h_spectrum() {
        // unrelated sanity: gram-conjugated lie actions are hermitian
        let n = 4;
        let f = su2_inner_product(n).unwrap();
        let x = &su2_basis()[1];
        let y = sym_power_lie(n, &(x * c(0.0, 1.0))).unwrap(); // Y_2 = i X_2
                                                               // G Y = Y^dagger G  (Y is G-Hermitian)
        let lhs = &f.gram * &y;
        let rhs = y.adjoint() * &f.gram;
        assert!(max_entry_diff(&lhs, &rhs) < 1e-12);
        let sqrt_g = CMatrix::from_diagonal(&crate::linalg::CVector::from_iterator(
            n,
            (0..n).map(|j| c(f.gram[(j, j)].re.sqrt(), 0.0)),
        ));
        let sqrt_gi = sqrt_g.clone().try_inverse().unwrap();
        let tilde = &sqrt_g * &y * &sqrt_gi;
        let spec = hermitian_spectrum(&tilde, &ToleranceProfile::default());
        assert!(spec.is_ok());
    }
}
