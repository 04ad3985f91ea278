//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use homgrow_core::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Laplace expansion along the first row.
pub fn laplace_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * laplace_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn minors(a: &IntMatrix, k: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    for rs in subsets(a.rows(), k) {
        for cs in subsets(a.cols(), k) {
            let sub: Vec<Vec<BigInt>> =
                rs.iter().map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect()).collect();
            out.push(laplace_det(&sub));
        }
    }
    out
}

pub fn gcd_of_minors(a: &IntMatrix, k: usize) -> BigInt {
    minors(a, k).iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Rank as the largest size of a nonvanishing minor.
pub fn minor_rank(a: &IntMatrix) -> usize {
    (1..=a.rows().min(a.cols()))
        .rev()
        .find(|&k| minors(a, k).iter().any(|x| !x.is_zero()))
        .unwrap_or(0)
}

/// Cauchy–Binet: the sum of squared maximal nonvanishing minors.
pub fn cauchy_binet_square(a: &IntMatrix) -> BigInt {
    let k = minor_rank(a);
    if k == 0 {
        return BigInt::one();
    }
    minors(a, k).iter().map(|x| x * x).sum()
}

/// Rank over 𝔽_p by plain Gaussian elimination on machine integers.
pub fn rank_mod_p(a: &IntMatrix, p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = (0..a.rows())
        .map(|i| a.row(i).iter().map(|x| i64::try_from(x.mod_floor(&BigInt::from(p))).unwrap()).collect())
        .collect();
    let inv = |x: i64| -> i64 {
        let mut r = 1;
        for _ in 0..p - 2 {
            r = r * x % p;
        }
        r
    };
    let mut rank = 0;
    for c in 0..a.cols() {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let s = inv(m[rank][c]);
        for x in m[rank].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..a.cols() {
                    m[i][j] = ((m[i][j] - f * m[rank][j]) % p + p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn small_matrix(rows: usize, cols: usize, data: &[i64]) -> IntMatrix {
    IntMatrix::from_entries(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
}

use num_rational::BigRational;

pub fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from).collect()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y)
}

/// Orthogonal projection of `z` onto the complement of the column span of `b`,
/// from the normal equations of the boundary space.
pub fn project_off(b: &IntMatrix, z: &[BigInt]) -> Vec<BigRational> {
    // Keep a maximal independent set of columns.
    let mut keep: Vec<usize> = Vec::new();
    for j in 0..b.cols() {
        let mut trial = keep.clone();
        trial.push(j);
        if homgrow_core::linalg::rank(&b.select_columns(&trial)) == trial.len() {
            keep = trial;
        }
    }
    let cols: Vec<Vec<BigRational>> = keep.iter().map(|&j| to_rational(&b.column(j))).collect();
    let zq = to_rational(z);
    let k = cols.len();
    if k == 0 {
        return zq;
    }
    // Solve (BᵀB) y = Bᵀz by Cramer's rule.
    let g: Vec<Vec<BigRational>> = (0..k).map(|i| (0..k).map(|j| dot(&cols[i], &cols[j])).collect()).collect();
    let rhs: Vec<BigRational> = (0..k).map(|i| dot(&cols[i], &zq)).collect();
    let dg = rational_det(g.clone());
    let y: Vec<BigRational> = (0..k)
        .map(|c| {
            let mut gc = g.clone();
            for i in 0..k {
                gc[i][c] = rhs[i].clone();
            }
            rational_det(gc) / &dg
        })
        .collect();
    let mut out = zq;
    for (c, col) in cols.iter().enumerate() {
        for (o, x) in out.iter_mut().zip(col) {
            *o -= &y[c] * x;
        }
    }
    out
}

pub fn gram_det_oracle(vs: &[Vec<BigRational>]) -> BigRational {
    let g = vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect();
    rational_det(g)
}
