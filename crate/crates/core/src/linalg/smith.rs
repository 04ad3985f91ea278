use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::numeric::xgcd;
use super::sparse::eliminate_unit_pivots;

/// Smith normal form `U·A·V = diag(d_1, …, d_k, 0, …)`.
///
/// `invariant_factors` keeps all `k = rank` diagonal entries, units included,
/// so products of leading factors equal the gcds of minors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub left_transform: Option<IntMatrix>,
    pub right_transform: Option<IntMatrix>,
    /// `U⁻¹`, present together with `U`.
    pub left_inverse: Option<IntMatrix>,
}

impl SmithForm {
    /// Factors `d_j ≥ 2`, i.e. the torsion of the cokernel.
    pub fn nonunit_factors(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn diagonal(&self, rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::diagonal(rows, cols, &self.invariant_factors)
    }
}

/// Structure of `coker A = ℤ^rows / im A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokernelStructure {
    pub free_rank: usize,
    /// Chained factors, all ≥ 2.
    pub invariant_factors: Vec<BigInt>,
}

impl CokernelStructure {
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Minimal number of generators.
    pub fn d(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }
}

/// Invariant factors only. Unit pivots are split off sparsely first; the dense
/// algorithm runs on what is left.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (ones, rest) = eliminate_unit_pivots(a);
    let mut factors = vec![BigInt::one(); ones];
    let mut dense = DenseSmith::new(rest, false);
    dense.run();
    factors.extend(dense.factors);
    SmithForm {
        rank: factors.len(),
        invariant_factors: factors,
        left_transform: None,
        right_transform: None,
        left_inverse: None,
    }
}

/// Dense Smith normal form with unimodular `U`, `V` and `U⁻¹`.
pub fn smith_with_transforms(a: &IntMatrix) -> SmithForm {
    let mut dense = DenseSmith::new(a.clone(), true);
    dense.run();
    let (u, u_inv, v) = dense.transforms.expect("requested transforms");
    SmithForm {
        rank: dense.factors.len(),
        invariant_factors: dense.factors,
        left_transform: Some(u),
        right_transform: Some(v),
        left_inverse: Some(u_inv),
    }
}

pub fn cokernel_structure(a: &IntMatrix) -> CokernelStructure {
    let s = smith_normal_form(a);
    CokernelStructure {
        free_rank: a.rows() - s.rank,
        invariant_factors: s.nonunit_factors(),
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    super::sparse::transpose_echelon(a, false).rank
}

struct DenseSmith {
    a: IntMatrix,
    transforms: Option<(IntMatrix, IntMatrix, IntMatrix)>,
    factors: Vec<BigInt>,
}

impl DenseSmith {
    fn new(a: IntMatrix, with_transforms: bool) -> Self {
        let transforms = with_transforms.then(|| {
            (
                IntMatrix::identity(a.rows()),
                IntMatrix::identity(a.rows()),
                IntMatrix::identity(a.cols()),
            )
        });
        DenseSmith {
            a,
            transforms,
            factors: Vec::new(),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some((u, ui, _)) = &mut self.transforms {
            u.swap_rows(i, j);
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some((_, _, v)) = &mut self.transforms {
            v.swap_cols(i, j);
        }
    }

    /// row[dst] += q·row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        if let Some((u, ui, _)) = &mut self.transforms {
            u.add_row_multiple(dst, src, q);
            ui.add_col_multiple(src, dst, &-q);
        }
    }

    /// col[dst] += q·col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        if let Some((_, _, v)) = &mut self.transforms {
            v.add_col_multiple(dst, src, q);
        }
    }

    /// Rows (i, j) ← E·(rows i, j) with `det E = 1` built from Bezout data
    /// making entry (i, c) the gcd and (j, c) zero.
    fn bezout_rows(&mut self, i: usize, j: usize, c: usize) {
        let (a, b) = (self.a[(i, c)].clone(), self.a[(j, c)].clone());
        let (g, s, t) = xgcd(&a, &b);
        let (ag, bg) = (&a / &g, &b / &g);
        let e = [s.clone(), t.clone(), -&bg, ag.clone()];
        let e_inv = [ag, -t, bg, s];
        self.a.combine_rows(i, j, &e);
        if let Some((u, ui, _)) = &mut self.transforms {
            u.combine_rows(i, j, &e);
            ui.combine_cols(i, j, &e_inv);
        }
    }

    /// Columns (i, j) ← (cols i, j)·F making entry (r, i) the gcd and (r, j) zero.
    fn bezout_cols(&mut self, r: usize, i: usize, j: usize) {
        let (a, b) = (self.a[(r, i)].clone(), self.a[(r, j)].clone());
        let (g, s, t) = xgcd(&a, &b);
        let f = [s, -(&b / &g), t, &a / &g];
        self.a.combine_cols(i, j, &f);
        if let Some((_, _, v)) = &mut self.transforms {
            v.combine_cols(i, j, &f);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some((u, ui, _)) = &mut self.transforms {
            u.negate_row(i);
            ui.negate_col(i);
        }
    }

    fn run(&mut self) {
        let (rows, cols) = self.a.shape();
        let mut t = 0;
        while t < rows.min(cols) {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &self.a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                        best = Some((i, j));
                        if x.abs().is_one() {
                            break;
                        }
                    }
                }
                if best.is_some_and(|(bi, bj)| self.a[(bi, bj)].abs().is_one()) {
                    break;
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.a[(i, t)].div_rem(&self.a[(t, t)]);
                    if r.is_zero() {
                        self.add_row(i, t, &-q);
                    } else {
                        self.bezout_rows(t, i, t);
                    }
                }
                for j in t + 1..cols {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.a[(t, j)].div_rem(&self.a[(t, t)]);
                    if r.is_zero() {
                        self.add_col(j, t, &-q);
                    } else {
                        self.bezout_cols(t, t, j);
                        clean = false;
                    }
                }
                if clean || (t + 1..rows).all(|i| self.a[(i, t)].is_zero()) {
                    break;
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        let k = t;
        // Enforce d_i | d_j.
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (self.a[(i, i)].clone(), self.a[(j, j)].clone());
                if b.is_multiple_of(&a) {
                    continue;
                }
                self.add_col(i, j, &BigInt::one());
                let (g, _, t_coef) = xgcd(&a, &b);
                self.bezout_rows(i, j, i);
                let q = &t_coef * &b / &g;
                self.add_col(j, i, &-q);
                debug_assert!(self.a[(i, j)].is_zero() && self.a[(j, i)].is_zero());
                if self.a[(j, j)].is_negative() {
                    self.negate_row(j);
                }
            }
        }
        self.factors = (0..k).map(|i| self.a[(i, i)].clone()).collect();
    }
}
