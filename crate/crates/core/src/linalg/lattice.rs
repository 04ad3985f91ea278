//! Sublattices of ℤ^m: Hermite bases, membership, kernels and subquotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::smith::{cokernel_structure, CokernelStructure};
use super::sparse::{densify, transpose_echelon};
use crate::error::{Error, Result};

/// Column Hermite form of the lattice spanned by the columns of `gens`.
///
/// The basis has pivot rows `p_0 < p_1 < …`, column `j` vanishes above `p_j`,
/// the pivot is positive, and entries left of a pivot lie in `[0, pivot)`.
pub fn hnf_basis(gens: &IntMatrix) -> IntMatrix {
    hnf_with_pivots(gens).0
}

fn hnf_with_pivots(gens: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let m = gens.rows();
    let mut rows: Vec<Vec<BigInt>> = gens.columns();
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut pivots = Vec::new();
    let mut cur = 0;
    for c in 0..m {
        if cur == rows.len() {
            break;
        }
        loop {
            let p = (cur..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&x, &y| rows[x][c].abs().cmp(&rows[y][c].abs()));
            let Some(p) = p else { break };
            rows.swap(cur, p);
            let mut done = true;
            for i in cur + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[cur][c]);
                sub_multiple(&mut rows, i, cur, &q);
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if cur < rows.len() && !rows[cur][c].is_zero() {
            if rows[cur][c].is_negative() {
                for x in rows[cur].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..cur {
                let q = rows[i][c].div_floor(&rows[cur][c]);
                sub_multiple(&mut rows, i, cur, &q);
            }
            pivots.push(c);
            cur += 1;
        }
    }
    rows.truncate(cur);
    (IntMatrix::from_columns(m, &rows), pivots)
}

fn sub_multiple(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// A sublattice of ℤ^ambient in Hermite form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let (basis, pivots) = hnf_with_pivots(gens);
        Lattice { basis, pivots }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice {
            basis: IntMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of `v` in the Hermite basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient());
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (j, &p) in self.pivots.iter().enumerate() {
            let (q, r) = rest[p].div_rem(&self.basis[(p, j)]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for i in p..self.ambient() {
                    let b = &self.basis[(i, j)];
                    if !b.is_zero() {
                        rest[i] -= &q * b;
                    }
                }
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of every column of `m`, as an `rank × m.cols()` matrix.
    pub fn coordinate_matrix(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let cols: Option<Vec<Vec<BigInt>>> =
            (0..m.cols()).map(|j| self.coordinates(&m.column(j))).collect();
        Some(IntMatrix::from_columns(self.rank(), &cols?))
    }

    pub fn contains_columns(&self, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|j| self.contains(&m.column(j)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(&self.basis.hstack(&other.basis).expect("same ambient"))
    }
}

/// Saturated ℤ-basis of `ker A` (as columns), unnormalized. Deterministic.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let e = transpose_echelon(a, true);
    let cols: Vec<Vec<BigInt>> = e.kernel.iter().map(|v| densify(v, a.cols())).collect();
    IntMatrix::from_columns(a.cols(), &cols)
}

/// Saturated ℤ-basis of `ker A` in column Hermite form.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    hnf_basis(&kernel_basis(a))
}

/// Structure of `⟨gens⟩ / ⟨rels⟩`; every relation must lie in the span of `gens`.
pub fn subquotient(gens: &IntMatrix, rels: &IntMatrix) -> Result<CokernelStructure> {
    let lat = Lattice::from_generators(gens);
    let x = lat
        .coordinate_matrix(rels)
        .ok_or_else(|| Error::DimensionMismatch("relations leave the generated lattice".into()))?;
    Ok(cokernel_structure(&x))
}

/// Saturation of the column span of `gens` inside ℤ^rows.
pub fn saturation(gens: &IntMatrix) -> IntMatrix {
    // The saturation is the kernel of the map onto the free part of the cokernel.
    let k = kernel_basis(&gens.transpose());
    kernel_lattice(&k.transpose())
}
