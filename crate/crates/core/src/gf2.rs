//! Exact linear algebra over GF(2); backs lift enumeration and the mod-2
//! homology checks.

use crate::error::{Error, Result};

/// Dense 0/1 matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u8>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Gf2Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: format!("gf2 row {} has length {}, expected {}", i, row.len(), c),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v & 1);
            }
        }
        Ok(m)
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v & 1;
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for j in 0..self.cols {
            let v = self.get(src, j) ^ self.get(dst, j);
            self.set(dst, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().1.len()
    }

    /// Row-reduce in place; returns (reduced matrix, pivot column per pivot row).
    fn eliminate(mut self) -> (Gf2Matrix, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let mut pivot = None;
            for r in row..self.rows {
                if self.get(r, col) == 1 {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            if p != row {
                for j in 0..self.cols {
                    let a = self.get(row, j);
                    let b = self.get(p, j);
                    self.set(row, j, b);
                    self.set(p, j, a);
                }
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) == 1 {
                    self.xor_row_into(row, r);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (self, pivots)
    }
}

/// Exhaustive solution set of `a x = b` over GF(2).
///
/// Returned as particular solution plus every kernel combination, enumerated
/// in binary-counter order, so for a homogeneous system the zero vector comes
/// first. Empty iff the system is inconsistent.
pub fn gf2_affine_solutions(a: &Gf2Matrix, b: &[u8]) -> Result<Vec<Vec<u8>>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            context: format!("rhs length {} vs {} rows", b.len(), a.rows),
        });
    }
    // augmented elimination
    let mut aug = Gf2Matrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, a.cols, b[i] & 1);
    }
    let (red, pivots) = aug.eliminate();
    // inconsistent iff a pivot lands in the augmented column
    if pivots.contains(&a.cols) {
        return Ok(Vec::new());
    }
    let pivot_cols: Vec<usize> = pivots.clone();
    let free_cols: Vec<usize> = (0..a.cols).filter(|c| !pivot_cols.contains(c)).collect();

    // particular solution: free vars = 0
    let mut particular = vec![0u8; a.cols];
    for (r, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = red.get(r, a.cols);
    }
    // kernel basis: one vector per free column
    let mut kernel: Vec<Vec<u8>> = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![0u8; a.cols];
        v[fc] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = red.get(r, fc);
        }
        kernel.push(v);
    }
    let nullity = kernel.len();
    let count: usize = 1usize
        .checked_shl(nullity as u32)
        .ok_or_else(|| Error::Contract("gf2 solution set too large to enumerate".into()))?;
    let mut out = Vec::with_capacity(count);
    for mask in 0..count {
        let mut v = particular.clone();
        for (k, kv) in kernel.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                for j in 0..a.cols {
                    v[j] ^= kv[j];
                }
            }
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_system_has_all_solutions() {
        let a = Gf2Matrix::zeros(1, 2);
        let sols = gf2_affine_solutions(&a, &[0]).unwrap();
        assert_eq!(sols.len(), 4);
        assert_eq!(sols[0], vec![0, 0]);
    }

    #[test]
    fn identity_system_unique() {
        let a = Gf2Matrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let sols = gf2_affine_solutions(&a, &[1, 0]).unwrap();
        assert_eq!(sols, vec![vec![1, 0]]);
    }

    #[test]
    fn inconsistent_system_empty() {
        let a = Gf2Matrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        let sols = gf2_affine_solutions(&a, &[0, 1]).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn solution_count_is_power_of_two_and_closed() {
        // pseudo-random small systems vs brute force
        let mut state = 0xdeadbeefu64;
        let mut next = move |m: u64| {
            state = state
                .wrapping_mul(2862933555777941757)
                .wrapping_add(3037000493);
            (state >> 29) % m
        };
        for _ in 0..50 {
            let rows = 1 + next(4) as usize;
            let cols = 1 + next(5) as usize;
            let mut a = Gf2Matrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, next(2) as u8);
                }
            }
            let b: Vec<u8> = (0..rows).map(|_| next(2) as u8).collect();
            let sols = gf2_affine_solutions(&a, &b).unwrap();

            // brute-force oracle
            let mut brute = Vec::new();
            for mask in 0..(1usize << cols) {
                let x: Vec<u8> = (0..cols).map(|j| ((mask >> j) & 1) as u8).collect();
                let ok = (0..rows).all(|i| {
                    let mut acc = 0u8;
                    for j in 0..cols {
                        acc ^= a.get(i, j) & x[j];
                    }
                    acc == b[i]
                });
                if ok {
                    brute.push(x);
                }
            }
            let mut s1 = sols.clone();
            let mut s2 = brute.clone();
            s1.sort();
            s2.sort();
            assert_eq!(s1, s2);
            if !sols.is_empty() {
                let nullity = cols - a.rank();
                assert_eq!(sols.len(), 1 << nullity);
                // closed under adding differences of solutions
                let d: Vec<u8> = (0..cols)
                    .map(|j| sols[0][j] ^ sols[sols.len() - 1][j])
                    .collect();
                let shifted: Vec<u8> = (0..cols).map(|j| sols[0][j] ^ d[j]).collect();
                assert!(sols.contains(&shifted));
            }
        }
    }
}
