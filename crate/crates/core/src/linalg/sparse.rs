//! Sparse integer elimination for the large, very sparse matrices produced by
//! base change. Dense routines take over once no unit pivot is left.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Sorted `(index, value)` pairs with no stored zeros.
pub(crate) type SparseVec = Vec<(usize, BigInt)>;

pub(crate) fn sparse_rows(a: &IntMatrix) -> Vec<SparseVec> {
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect()
        })
        .collect()
}

pub(crate) fn sparse_cols(a: &IntMatrix) -> Vec<SparseVec> {
    let mut cols: Vec<SparseVec> = vec![Vec::new(); a.cols()];
    for i in 0..a.rows() {
        for (j, x) in a.row(i).iter().enumerate() {
            if !x.is_zero() {
                cols[j].push((i, x.clone()));
            }
        }
    }
    cols
}

pub(crate) fn densify(v: &SparseVec, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub(crate) fn lookup(v: &SparseVec, idx: usize) -> Option<&BigInt> {
    v.binary_search_by_key(&idx, |e| e.0).ok().map(|k| &v[k].1)
}

/// `a + q*b`
pub(crate) fn axpy(a: &SparseVec, q: &BigInt, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(usize::MAX, |e| e.0);
        let kb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, q * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + q * &b[j].1;
            if !v.is_zero() {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Result of eliminating the rows of `Aᵀ` while tracking the row operations.
pub(crate) struct TransposeEchelon {
    pub rank: usize,
    /// Saturated basis of `ker A`, each vector sparse over the columns of A.
    pub kernel: Vec<SparseVec>,
}

/// Row reduction of `[Aᵀ | I]` over ℤ. Rows whose `Aᵀ` part vanishes carry a
/// kernel vector in their identity part; the accumulated transform is
/// unimodular, so those vectors span a saturated lattice.
pub(crate) fn transpose_echelon(a: &IntMatrix, track_kernel: bool) -> TransposeEchelon {
    let m = a.rows();
    let n = a.cols();
    let mut lhs = sparse_cols(a);
    let mut rhs: Vec<SparseVec> = if track_kernel {
        (0..n).map(|j| vec![(j, BigInt::one())]).collect()
    } else {
        vec![Vec::new(); n]
    };
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut kernel_rows = Vec::new();
    for (j, row) in lhs.iter().enumerate() {
        match row.first() {
            Some(&(c, _)) => buckets[c].push(j),
            None => kernel_rows.push(j),
        }
    }
    let mut rank = 0;
    for c in 0..m {
        let mut group = std::mem::take(&mut buckets[c]);
        if group.is_empty() {
            continue;
        }
        loop {
            let p = *group
                .iter()
                .min_by(|&&x, &&y| {
                    let (vx, vy) = (lhs[x][0].1.abs(), lhs[y][0].1.abs());
                    vx.cmp(&vy)
                        .then((lhs[x].len() + rhs[x].len()).cmp(&(lhs[y].len() + rhs[y].len())))
                        .then(x.cmp(&y))
                })
                .expect("nonempty group");
            let pv = lhs[p][0].1.clone();
            let mut remaining = vec![p];
            for &r in &group {
                if r == p {
                    continue;
                }
                let q = -lhs[r][0].1.div_floor(&pv);
                lhs[r] = axpy(&lhs[r], &q, &lhs[p]);
                if track_kernel {
                    rhs[r] = axpy(&rhs[r], &q, &rhs[p]);
                }
                match lhs[r].first() {
                    Some(&(c2, _)) if c2 == c => remaining.push(r),
                    Some(&(c2, _)) => buckets[c2].push(r),
                    None => kernel_rows.push(r),
                }
            }
            if remaining.len() == 1 {
                break;
            }
            group = remaining;
        }
        rank += 1;
    }
    kernel_rows.sort_unstable();
    let kernel = if track_kernel {
        kernel_rows.into_iter().map(|j| std::mem::take(&mut rhs[j])).collect()
    } else {
        Vec::new()
    };
    TransposeEchelon { rank, kernel }
}

/// Eliminates unit pivots. Returns the number of unit invariant factors
/// split off and the dense matrix that remains.
pub(crate) fn eliminate_unit_pivots(a: &IntMatrix) -> (usize, IntMatrix) {
    let mut rows = sparse_rows(a);
    let mut col_index: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.cols()];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_index[*j].insert(i);
        }
    }
    let mut row_alive = vec![true; a.rows()];
    let mut col_alive = vec![true; a.cols()];
    let mut ones = 0;
    let mut progress = true;
    while progress {
        progress = false;
        for c in 0..a.cols() {
            if !col_alive[c] {
                continue;
            }
            let pivot = col_index[c]
                .iter()
                .copied()
                .filter(|&r| lookup(&rows[r], c).is_some_and(|v| v.abs().is_one()))
                .min_by_key(|&r| (rows[r].len(), r));
            let Some(p) = pivot else { continue };
            let pv = lookup(&rows[p], c).cloned().expect("pivot present");
            let others: Vec<usize> = col_index[c].iter().copied().filter(|&r| r != p).collect();
            let prow = std::mem::take(&mut rows[p]);
            for r in others {
                let q = -(lookup(&rows[r], c).expect("indexed entry") * &pv);
                let new = axpy(&rows[r], &q, &prow);
                for (j, _) in &rows[r] {
                    col_index[*j].remove(&r);
                }
                for (j, _) in &new {
                    col_index[*j].insert(r);
                }
                rows[r] = new;
            }
            for (j, _) in &prow {
                col_index[*j].remove(&p);
            }
            row_alive[p] = false;
            col_alive[c] = false;
            ones += 1;
            progress = true;
        }
    }
    let live_rows: Vec<usize> = (0..a.rows()).filter(|&i| row_alive[i]).collect();
    let live_cols: Vec<usize> = (0..a.cols()).filter(|&j| col_alive[j]).collect();
    let mut pos = vec![usize::MAX; a.cols()];
    for (k, &j) in live_cols.iter().enumerate() {
        pos[j] = k;
    }
    let mut rest = IntMatrix::zeros(live_rows.len(), live_cols.len());
    for (ii, &i) in live_rows.iter().enumerate() {
        for (j, v) in &rows[i] {
            debug_assert!(col_alive[*j]);
            rest[(ii, pos[*j])] = v.clone();
        }
    }
    (ones, rest)
}
