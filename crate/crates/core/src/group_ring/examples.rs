//! Example complexes over ℤ[ℤ^m].

use num_bigint::BigInt;
use num_traits::Zero;

use super::complex::LaurentChainComplex;
use super::poly::{LaurentPoly, PolyMatrix};
use crate::error::{Error, Result};
use crate::linalg::{bareiss_determinant, IntMatrix};

/// `0 → ℤ[t^±] →(t−1) ℤ[t^±] → 0`.
pub fn circle_complex() -> LaurentChainComplex {
    torus_complex(1)
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Koszul complex on `x_1 − 1, …, x_m − 1`. Degree `k` has the `k`-subsets of
/// the variables as basis, in lexicographic order, and
/// `∂ e_S = Σ_i (−1)^i (x_{s_i} − 1) e_{S∖s_i}`.
pub fn torus_complex(m: usize) -> LaurentChainComplex {
    let bases: Vec<Vec<Vec<usize>>> = (0..=m).map(|k| subsets(m, k)).collect();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let mut diffs = Vec::with_capacity(m);
    for k in 1..=m {
        let mut d = PolyMatrix::zeros(m, dims[k - 1], dims[k]);
        for (col, s) in bases[k].iter().enumerate() {
            for (i, &v) in s.iter().enumerate() {
                let mut face = s.clone();
                face.remove(i);
                let row = bases[k - 1].iter().position(|f| *f == face).expect("face is a subset");
                let p = LaurentPoly::var_minus_one(m, v);
                d.set(row, col, if i % 2 == 0 { p } else { p.neg() });
            }
        }
        diffs.push(d);
    }
    LaurentChainComplex::new(m, dims, diffs).expect("Koszul complex squares to zero")
}

/// `C ⊗ circle`, the new variable placed last.
pub fn product_with_circle(c: &LaurentChainComplex) -> LaurentChainComplex {
    c.tensor(&circle_complex())
}

/// `0 → ℤ[t^±]^k →(tA − I) ℤ[t^±]^k → 0` for square `A` with `det A ≠ 0`.
pub fn mapping_torus_complex(a: &IntMatrix) -> Result<LaurentChainComplex> {
    if !a.is_square() {
        return Err(Error::NonSquareMatrix {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if bareiss_determinant(a)?.is_zero() {
        return Err(Error::InvalidArgument("mapping torus needs det A ≠ 0".into()));
    }
    let k = a.rows();
    let mut d = PolyMatrix::zeros(1, k, k);
    for i in 0..k {
        for j in 0..k {
            let mut p = LaurentPoly::monomial(vec![1], a[(i, j)].clone());
            if i == j {
                p = p.sub(&LaurentPoly::one(1));
            }
            d.set(i, j, p);
        }
    }
    LaurentChainComplex::new(1, vec![k, k], vec![d])
}

/// `ℤ` in degree 0, `ℤ²` in degree 2, `ℤ` in degree 3 with `c_3 = (1, 1)ᵀ`:
/// simply connected with `H_2 = ℤ`, a stand-in for a simply connected `Y`.
pub fn simply_connected_piece() -> LaurentChainComplex {
    let c1 = PolyMatrix::zeros(0, 1, 0);
    let c2 = PolyMatrix::zeros(0, 0, 2);
    let c3 = PolyMatrix::from_constant(0, &IntMatrix::from_rows(&[[1], [1]]));
    LaurentChainComplex::new(0, vec![1, 0, 2, 1], vec![c1, c2, c3]).expect("valid")
}

/// `S¹ × Y` for the complex of [`simply_connected_piece`].
pub fn s1_cross() -> LaurentChainComplex {
    product_with_circle(&simply_connected_piece())
}

/// `det(A^i − I)`, computed exactly.
pub fn det_power_minus_identity(a: &IntMatrix, i: u32) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NonSquareMatrix {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut p = IntMatrix::identity(a.rows());
    for _ in 0..i {
        p = p.mul(a)?;
    }
    bareiss_determinant(&p.sub(&IntMatrix::identity(a.rows()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::homology;
    use crate::group_ring::{base_change, QuotientSpec};

    #[test]
    fn torus_dims_are_binomial() {
        assert_eq!(torus_complex(3).dims(), &[1, 3, 3, 1]);
        assert_eq!(torus_complex(4).dims(), &[1, 4, 6, 4, 1]);
    }

    #[test]
    fn mapping_torus_torsion() {
        let a = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        let c = mapping_torus_complex(&a).unwrap();
        let qc = base_change(&c, &QuotientSpec::new(vec![2]).unwrap()).unwrap();
        assert_eq!(homology(&qc.complex, &[]).degree(0).torsion_order(), BigInt::from(5));
        let c = mapping_torus_complex(&IntMatrix::from_rows(&[[2]])).unwrap();
        let qc = base_change(&c, &QuotientSpec::new(vec![3]).unwrap()).unwrap();
        assert_eq!(homology(&qc.complex, &[]).degree(0).torsion_order(), BigInt::from(7));
        assert!(matches!(
            mapping_torus_complex(&IntMatrix::zeros(1, 2)),
            Err(Error::NonSquareMatrix { rows: 1, cols: 2 })
        ));
    }

    #[test]
    fn trivial_mapping_torus_is_circle() {
        let c = mapping_torus_complex(&IntMatrix::from_rows(&[[1]])).unwrap();
        assert_eq!(c, circle_complex());
    }

    #[test]
    fn s1_cross_shape() {
        let c = s1_cross();
        assert_eq!(c.num_vars(), 1);
        assert_eq!(c.dims(), &[1, 1, 2, 3, 1]);
    }
}
