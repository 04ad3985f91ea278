//! Fuglede–Kadison determinants over the trivial group.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::det::{bareiss_determinant, gram_of_columns};
use super::lattice::kernel_lattice;
use super::matrix::IntMatrix;
use super::numeric::ln_rational;
use super::smith::smith_with_transforms;
use crate::error::{Error, Result};

/// Product of the nonzero singular values, kept exactly as its square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FKDet {
    pub log_value: f64,
    pub square_exact: BigRational,
}

impl FKDet {
    pub fn from_square(square: BigRational) -> Self {
        assert!(square.is_positive(), "FK determinant square must be positive");
        FKDet {
            log_value: 0.5 * ln_rational(&square),
            square_exact: square,
        }
    }

    pub fn one() -> Self {
        FKDet::from_square(BigRational::one())
    }
}

/// Row indices `I` and column indices `J` with `A[I, J]` nonsingular and
/// `|I| = |J| = rank A`.
pub(crate) fn rank_profile(a: &IntMatrix) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<Vec<BigInt>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
    let mut orig: Vec<usize> = (0..a.rows()).collect();
    let (mut ri, mut cj) = (Vec::new(), Vec::new());
    let mut cur = 0;
    for c in 0..a.cols() {
        if cur == rows.len() {
            break;
        }
        let Some(p) = (cur..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(cur, p);
        orig.swap(cur, p);
        let (head, tail) = rows.split_at_mut(cur + 1);
        let piv = &head[cur];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let (alpha, beta) = (piv[c].clone(), row[c].clone());
            let mut content = BigInt::zero();
            for (x, y) in row.iter_mut().zip(piv.iter()) {
                *x = &alpha * &*x - &beta * y;
                content = content.gcd(x);
            }
            if content > BigInt::one() {
                for x in row.iter_mut() {
                    *x /= &content;
                }
            }
        }
        ri.push(orig[cur]);
        cj.push(c);
        cur += 1;
    }
    ri.sort_unstable();
    (ri, cj)
}

/// Exact FK determinant over the trivial group via the rank factorization
/// `A = A[:, J] · A[I, J]⁻¹ · A[I, :]`.
pub fn fk_determinant(a: &IntMatrix) -> FKDet {
    FKDet::from_square(fk_square(a))
}

pub(crate) fn fk_square(a: &IntMatrix) -> BigRational {
    let (ri, cj) = rank_profile(a);
    if ri.is_empty() {
        return BigRational::one();
    }
    let cols = a.select_columns(&cj);
    let rows = a.select_rows(&ri);
    let core = rows.select_columns(&cj);
    let dc = gram_of_columns(&cols);
    let dr = gram_of_columns(&rows.transpose());
    let d = bareiss_determinant(&core).expect("square block");
    BigRational::new(dc * dr, &d * &d)
}

/// The four quantities of the kernel/cokernel factorization of `det(u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub det_u: FKDet,
    pub det_kernel_inclusion: FKDet,
    pub torsion_order: BigInt,
    pub det_free_projection: FKDet,
}

/// Checks `det(u) = det(j_k) · |tors coker u| · det(pr_c)` exactly on squares
/// together with `1 ≤ factor ≤ det(u)` for each factor.
pub fn fk_factorization_check(a: &IntMatrix) -> Result<FactorizationReport> {
    let det_u = fk_square(a);
    let k = kernel_lattice(a);
    let det_j = BigRational::from(if k.cols() == 0 { BigInt::one() } else { gram_of_columns(&k) });
    let s = smith_with_transforms(a);
    let tors: BigInt = s.nonunit_factors().iter().product();
    let u = s.left_transform.as_ref().expect("transforms requested");
    let free_rows: Vec<usize> = (s.rank..a.rows()).collect();
    let p = u.select_rows(&free_rows);
    let det_p = BigRational::from(if p.rows() == 0 {
        BigInt::one()
    } else {
        gram_of_columns(&p.transpose())
    });
    let tors_sq = BigRational::from(&tors * &tors);
    let rhs = &det_j * &tors_sq * &det_p;
    if rhs != det_u {
        return Err(Error::identity(
            "kernel/cokernel factorization",
            format!("det(u)^2 = {det_u}, product of factors^2 = {rhs}"),
        ));
    }
    let one = BigRational::one();
    for (name, f) in [("det(j_k)", &det_j), ("|tors|", &tors_sq), ("det(pr_c)", &det_p)] {
        if *f < one || *f > det_u {
            return Err(Error::identity(
                "factorization sandwich",
                format!("{name}^2 = {f} outside [1, {det_u}]"),
            ));
        }
    }
    Ok(FactorizationReport {
        det_u: FKDet::from_square(det_u),
        det_kernel_inclusion: FKDet::from_square(det_j),
        torsion_order: tors,
        det_free_projection: FKDet::from_square(det_p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(a: &IntMatrix) -> BigRational {
        fk_determinant(a).square_exact
    }

    fn r(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn frozen_examples() {
        assert_eq!(sq(&IntMatrix::from_rows(&[[7]])), r(49));
        assert_eq!(sq(&IntMatrix::from_rows(&[[1], [1]])), r(2));
        assert_eq!(sq(&IntMatrix::zeros(3, 2)), r(1));
        assert!((fk_determinant(&IntMatrix::from_rows(&[[1], [1]])).log_value - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn factorization_examples() {
        let rep = fk_factorization_check(&IntMatrix::from_rows(&[[2, 0], [0, 3]])).unwrap();
        assert_eq!(rep.det_u.square_exact, r(36));
        assert_eq!(rep.torsion_order, BigInt::from(6));
        assert_eq!(rep.det_kernel_inclusion.square_exact, r(1));
        assert_eq!(rep.det_free_projection.square_exact, r(1));

        let rep = fk_factorization_check(&IntMatrix::from_rows(&[[2, 0]])).unwrap();
        assert_eq!(rep.det_u.square_exact, r(4));
        assert_eq!(rep.torsion_order, BigInt::from(2));

        let rep = fk_factorization_check(&IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!(rep.det_u.square_exact, r(1));
        assert_eq!(rep.torsion_order, BigInt::one());
    }

    #[test]
    fn rank_deficient_factorization() {
        // Rank one: kernel (1,-1) of length sqrt 2, image spanned by (1, 2).
        let a = IntMatrix::from_rows(&[[1, 1], [2, 2]]);
        let rep = fk_factorization_check(&a).unwrap();
        assert_eq!(rep.det_u.square_exact, r(10));
        assert_eq!(rep.det_kernel_inclusion.square_exact, r(2));
        assert_eq!(rep.det_free_projection.square_exact, r(5));
    }
}
