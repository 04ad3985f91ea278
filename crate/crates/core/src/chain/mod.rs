//! Finite based free ℤ-chain complexes.

mod homology;
mod torsion;

pub use homology::{
    d_of_abelian_group, d_primewise, homology, homology_degree, HomologyGroup, HomologySummary,
};
pub use torsion::{
    alpha_cycle_lift_square, alpha_degree, alpha_from_harmonic, alpha_log_dets, laplacian, rho_2, rho_z, verify_rho_identity, AlphaData,
    AlphaDegree, IntegralTorsion, L2Torsion, RhoIdentityReport,
};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// `C_top → … → C_1 → C_0` with `c_n: C_n → C_{n−1}` stored as a
/// `dims[n−1] × dims[n]` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntChainComplex {
    dims: Vec<usize>,
    differentials: Vec<IntMatrix>,
}

impl IntChainComplex {
    /// Validates shapes and `c_n · c_{n+1} = 0`.
    pub fn new(dims: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(dims, differentials)?;
        c.check_square_zero()?;
        Ok(c)
    }

    fn new_unchecked(dims: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidComplex {
                degree: 0,
                reason: "a complex needs at least degree 0".into(),
            });
        }
        if differentials.len() + 1 != dims.len() {
            return Err(Error::InvalidComplex {
                degree: differentials.len(),
                reason: format!("{} dims but {} differentials", dims.len(), differentials.len()),
            });
        }
        for (k, d) in differentials.iter().enumerate() {
            let n = k + 1;
            if d.shape() != (dims[n - 1], dims[n]) {
                return Err(Error::InvalidComplex {
                    degree: n,
                    reason: format!(
                        "differential is {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        dims[n - 1],
                        dims[n]
                    ),
                });
            }
        }
        Ok(IntChainComplex { dims, differentials })
    }

    fn check_square_zero(&self) -> Result<()> {
        for n in 1..self.top_degree() {
            let p = self.differentials[n - 1].mul(&self.differentials[n])?;
            if !p.is_zero() {
                return Err(Error::InvalidComplex {
                    degree: n + 1,
                    reason: format!("c_{} · c_{} is not zero", n, n + 1),
                });
            }
        }
        Ok(())
    }

    /// `0 → ℤ^d → 0` in degree 0.
    pub fn concentrated(d: usize) -> Self {
        IntChainComplex {
            dims: vec![d],
            differentials: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::concentrated(0)
    }

    /// `0 → ℤ^cols →A ℤ^rows → 0` in degrees `k+1, k`.
    pub fn two_term(a: IntMatrix, k: usize) -> Self {
        let mut dims = vec![0; k];
        dims.push(a.rows());
        dims.push(a.cols());
        let mut diffs: Vec<IntMatrix> = (0..k).map(|n| IntMatrix::zeros(dims[n], dims[n + 1])).collect();
        diffs.push(a);
        IntChainComplex {
            dims,
            differentials: diffs,
        }
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// `c_n` for `1 ≤ n ≤ top`.
    pub fn differential(&self, n: usize) -> Result<&IntMatrix> {
        if n == 0 || n > self.top_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: n,
                top: self.top_degree(),
            });
        }
        Ok(&self.differentials[n - 1])
    }

    /// `c_n` for any `n`, with the zero maps `C_0 → 0` and `0 → C_top` at the ends.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        match self.differential(n) {
            Ok(d) => d.clone(),
            Err(_) => IntMatrix::zeros(self.dim(n.wrapping_sub(1)), self.dim(n)),
        }
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Applies the base change `C'_n = g_n(C_n)`, i.e. `c'_n = g_{n−1} c_n g_n⁻¹`,
    /// given each unimodular `g_n` together with its inverse.
    pub fn conjugate(&self, change: &[(IntMatrix, IntMatrix)]) -> Result<Self> {
        if change.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("one base change per degree".into()));
        }
        let mut diffs = Vec::with_capacity(self.differentials.len());
        for n in 1..=self.top_degree() {
            let d = change[n - 1].0.mul(&self.differentials[n - 1])?.mul(&change[n].1)?;
            diffs.push(d);
        }
        Self::new(self.dims.clone(), diffs)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let top = self.top_degree().max(other.top_degree());
        let dims: Vec<usize> = (0..=top).map(|n| self.dim(n) + other.dim(n)).collect();
        let diffs = (1..=top)
            .map(|n| self.boundary_padded(n).block_diag(&other.boundary_padded(n)))
            .collect();
        IntChainComplex {
            dims,
            differentials: diffs,
        }
    }

    fn boundary_padded(&self, n: usize) -> IntMatrix {
        if n <= self.top_degree() {
            self.differentials[n - 1].clone()
        } else {
            IntMatrix::zeros(self.dim(n - 1), self.dim(n))
        }
    }

    /// Raises every degree by `k`; differentials pick up the sign `(−1)^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut dims = vec![0; k];
        dims.extend_from_slice(&self.dims);
        let mut diffs: Vec<IntMatrix> = (0..k).map(|n| IntMatrix::zeros(dims[n], dims[n + 1])).collect();
        for d in &self.differentials {
            diffs.push(if k.is_multiple_of(2) { d.clone() } else { d.neg() });
        }
        IntChainComplex {
            dims,
            differentials: diffs,
        }
    }

    /// `(C ⊗ D)_n = ⊕_{p+q=n} C_p ⊗ D_q` with `∂(x⊗y) = ∂x⊗y + (−1)^p x⊗∂y`.
    ///
    /// Blocks are ordered by `p`, and inside a block `x_i ⊗ y_j` has index
    /// `i·dim D_q + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let top = self.top_degree() + other.top_degree();
        let block = |n: usize| -> Vec<(usize, usize, usize)> {
            let mut out = Vec::new();
            let mut off = 0;
            for p in 0..=n.min(self.top_degree()) {
                let q = n - p;
                if q > other.top_degree() {
                    continue;
                }
                out.push((p, q, off));
                off += self.dim(p) * other.dim(q);
            }
            out
        };
        let dims: Vec<usize> = (0..=top)
            .map(|n| block(n).iter().map(|&(p, q, _)| self.dim(p) * other.dim(q)).sum())
            .collect();
        let mut diffs = Vec::with_capacity(top);
        for n in 1..=top {
            let mut m = IntMatrix::zeros(dims[n - 1], dims[n]);
            let targets = block(n - 1);
            let offset_of = |p: usize| targets.iter().find(|t| t.0 == p).map(|t| t.2);
            for (p, q, src_off) in block(n) {
                let dq = other.dim(q);
                if p >= 1 {
                    let tgt = offset_of(p - 1).expect("target block exists");
                    let c = &self.differentials[p - 1];
                    let piece = c.kron(&IntMatrix::identity(dq));
                    place(&mut m, &piece, tgt, src_off);
                }
                if q >= 1 {
                    let tgt = offset_of(p).expect("target block exists");
                    let d = &other.differentials[q - 1];
                    let mut piece = IntMatrix::identity(self.dim(p)).kron(d);
                    if p % 2 == 1 {
                        piece = piece.neg();
                    }
                    place(&mut m, &piece, tgt, src_off);
                }
            }
            diffs.push(m);
        }
        IntChainComplex {
            dims,
            differentials: diffs,
        }
    }
}

fn place(m: &mut IntMatrix, piece: &IntMatrix, row_off: usize, col_off: usize) {
    for i in 0..piece.rows() {
        for j in 0..piece.cols() {
            let v = &piece[(i, j)];
            if *v != BigInt::default() {
                m[(row_off + i, col_off + j)] += v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle3() -> IntChainComplex {
        let c = IntMatrix::from_rows(&[[-1, 0, 1], [1, -1, 0], [0, 1, -1]]);
        IntChainComplex::new(vec![3, 3], vec![c]).unwrap()
    }

    #[test]
    fn square_zero_is_enforced() {
        let a = IntMatrix::from_rows(&[[1]]);
        let err = IntChainComplex::new(vec![1, 1, 1], vec![a.clone(), a]).unwrap_err();
        assert!(matches!(err, Error::InvalidComplex { degree: 2, .. }));
        let bad = IntChainComplex::new(vec![1, 2], vec![IntMatrix::zeros(2, 2)]);
        assert!(matches!(bad, Err(Error::InvalidComplex { degree: 1, .. })));
    }

    #[test]
    fn tensor_with_point_is_identity() {
        let c = circle3();
        assert_eq!(c.tensor(&IntChainComplex::concentrated(1)), c);
    }

    #[test]
    fn tensor_of_circles_squares_to_zero() {
        let t = circle3().tensor(&circle3());
        assert_eq!(t.dims(), &[9, 18, 9]);
        IntChainComplex::new(t.dims().to_vec(), t.differentials().to_vec()).unwrap();
    }

    #[test]
    fn shift_and_sum_shapes() {
        let s = IntChainComplex::concentrated(1).shift(1);
        assert_eq!(s.dims(), &[0, 1]);
        let sum = circle3().direct_sum(&s);
        assert_eq!(sum.dims(), &[3, 4]);
    }
}
