use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::numeric::lcm_all;
use crate::error::{Error, Result};

/// Fraction-free (Bareiss) determinant.
pub fn bareiss_determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NonSquareMatrix {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// `det(AᵀA)` for an integer matrix, i.e. the squared covolume of its columns.
pub fn gram_of_columns(a: &IntMatrix) -> BigInt {
    let g = a.transpose().mul(a).expect("shapes agree");
    bareiss_determinant(&g).expect("square")
}

/// Determinant of the Gram matrix of rational vectors. Empty input gives 1.
pub fn gram_determinant(vectors: &[Vec<BigRational>]) -> Result<BigRational> {
    let Some(first) = vectors.first() else {
        return Ok(BigRational::one());
    };
    let dim = first.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {}",
            dim,
            v.len()
        )));
    }
    let mut scale = BigInt::one();
    let mut cols = Vec::with_capacity(vectors.len());
    for v in vectors {
        let l = lcm_all(v.iter().map(|x| x.denom()));
        cols.push(v.iter().map(|x| x.numer() * (&l / x.denom())).collect::<Vec<_>>());
        scale *= &l * &l;
    }
    let a = IntMatrix::from_columns(dim, &cols);
    Ok(BigRational::new(gram_of_columns(&a), scale))
}

/// Solves `M x = b` over ℚ for nonsingular square `M`.
pub fn solve_rational(m: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigRational>> {
    if !m.is_square() {
        return Err(Error::NonSquareMatrix {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if b.len() != n {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m.row(i).iter().cloned().map(BigRational::from).collect();
            row.push(BigRational::from(b[i].clone()));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or_else(|| Error::DimensionMismatch("singular system".into()))?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..=n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    Ok(a.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}
