//! Seeded random instances for property checks and the verify suites.

use num_bigint::BigInt;
use rand::Rng;

use crate::chain::IntChainComplex;
use crate::group_ring::{LaurentChainComplex, LaurentPoly, ModuleWithAction, PolyMatrix};
use crate::linalg::IntMatrix;

/// Random integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let entries = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_entries(rows, cols, entries).expect("sized")
}

/// A product of elementary matrices together with its inverse.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut g = IntMatrix::identity(n);
    let mut gi = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            g.negate_row(0);
            gi.negate_col(0);
        }
        return (g, gi);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..6) {
            0 => {
                g.swap_rows(i, j);
                gi.swap_cols(i, j);
            }
            1 => {
                g.negate_row(i);
                gi.negate_col(i);
            }
            _ => {
                let q = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
                g.add_row_multiple(i, j, &q);
                gi.add_col_multiple(j, i, &-q);
            }
        }
    }
    (g, gi)
}

fn elementary_block<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    if rng.gen_bool(0.5) {
        let mut m = IntMatrix::zeros(rows, cols);
        for k in 0..rows.min(cols) {
            if rng.gen_bool(0.8) {
                m[(k, k)] = BigInt::from(rng.gen_range(1..=5));
            }
        }
        m
    } else {
        random_matrix(rng, rows, cols, 5)
    }
}

/// Direct sum of shifted two-term complexes and free summands, conjugated by
/// random unimodular base changes in every degree. Each `dim C_n ≤ max_dim`.
pub fn random_complex<R: Rng>(rng: &mut R, max_dim: usize) -> IntChainComplex {
    let top = rng.gen_range(1..=3);
    let mut c = IntChainComplex::concentrated(0);
    let pieces = rng.gen_range(1..=4);
    for _ in 0..pieces {
        let piece = if rng.gen_bool(0.75) {
            let k = rng.gen_range(0..top);
            let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            IntChainComplex::two_term(elementary_block(rng, a, b), k)
        } else {
            let k = rng.gen_range(0..=top);
            IntChainComplex::concentrated(rng.gen_range(1..=2)).shift(k)
        };
        let next = c.direct_sum(&piece);
        if next.dims().iter().all(|&d| d <= max_dim) {
            c = next;
        }
    }
    if c.top_degree() < top {
        c = c.direct_sum(&IntChainComplex::concentrated(0).shift(top));
    }
    let change: Vec<(IntMatrix, IntMatrix)> = c
        .dims()
        .iter()
        .map(|&d| random_unimodular(rng, d, 2 * d))
        .collect();
    c.conjugate(&change).expect("conjugation preserves the complex")
}

/// `diag(orders)` presentation of `⊕ ℤ/orders[j]`.
pub fn cyclic_presentation(orders: &[u64]) -> IntMatrix {
    let d: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
    IntMatrix::diagonal(orders.len(), orders.len(), &d)
}

fn units_of_order_dividing(k: u64, n: u64) -> Vec<i64> {
    match k {
        0 if n.is_multiple_of(2) => vec![1, -1],
        0 | 1 => vec![1],
        _ => (1..k)
            .filter(|&u| num_integer::gcd(u, k) == 1 && (0..n).fold(1 % k, |acc, _| acc * u % k) == 1)
            .map(|u| u as i64)
            .collect(),
    }
}

/// Random module over `Π ℤ/orders[j]` of rank at most `max_rank`: cyclic
/// pieces `ℤ/k` (or `ℤ` when `allow_free`) with unit actions and unipotent
/// blocks `(x, y) ↦ (x + a·y, y)` on `(ℤ/k)²`, in randomly rebased generators.
pub fn random_module<R: Rng>(rng: &mut R, orders: &[u64], max_rank: usize, allow_free: bool) -> ModuleWithAction {
    let g = orders.len();
    let budget = rng.gen_range(1..=max_rank.max(1));
    let mut pres = IntMatrix::zeros(0, 0);
    let mut acts = vec![IntMatrix::zeros(0, 0); g];
    let mut rank = 0;
    while rank < budget {
        let (block_pres, block_acts) = if budget - rank >= 2 && rng.gen_bool(0.3) {
            let k = [2u64, 3, 4][rng.gen_range(0..3)];
            let blocks: Vec<IntMatrix> = orders
                .iter()
                .map(|&n| {
                    let ok: Vec<i64> = (0..k as i64).filter(|&a| (a as u64 * n).is_multiple_of(k)).collect();
                    IntMatrix::from_rows(&[[1, ok[rng.gen_range(0..ok.len())]], [0, 1]])
                })
                .collect();
            (cyclic_presentation(&[k, k]), blocks)
        } else {
            let choices: &[u64] = if allow_free { &[0, 2, 3, 4, 5, 6, 8, 9] } else { &[2, 3, 4, 5, 6, 8, 9] };
            let k = choices[rng.gen_range(0..choices.len())];
            let blocks: Vec<IntMatrix> = orders
                .iter()
                .map(|&n| {
                    let us = units_of_order_dividing(k, n);
                    IntMatrix::from_rows(&[[us[rng.gen_range(0..us.len())]]])
                })
                .collect();
            (cyclic_presentation(&[k]), blocks)
        };
        rank += block_pres.rows();
        pres = pres.block_diag(&block_pres);
        for (a, b) in acts.iter_mut().zip(&block_acts) {
            *a = a.block_diag(b);
        }
    }
    let m = ModuleWithAction::new(pres, acts, orders.to_vec()).expect("pieces carry valid actions");
    let (u, ui) = random_unimodular(rng, m.num_generators(), 2 * m.num_generators());
    m.rebase(&u, &ui).expect("rebasing preserves validity")
}

fn random_poly<R: Rng>(rng: &mut R, m: usize) -> LaurentPoly {
    let mut p = LaurentPoly::zero(m);
    for _ in 0..rng.gen_range(1..=2) {
        let e: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..=1)).collect();
        p = p.add(&LaurentPoly::monomial(e, rng.gen_range(-2..=2)));
    }
    p
}

fn random_two_term<R: Rng>(rng: &mut R, m: usize) -> LaurentChainComplex {
    let (r, c) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let rows = (0..r).map(|_| (0..c).map(|_| random_poly(rng, m)).collect()).collect();
    let d = PolyMatrix::from_rows(m, rows).expect("rectangular");
    LaurentChainComplex::new(m, vec![r, c], vec![d]).expect("two-term complexes are complexes")
}

/// Random free `ℤ[ℤ^m]`-complex: a two-term complex or, for `m ≥ 1`, the
/// tensor product of two-term complexes over `ℤ[ℤ^k]` and `ℤ[ℤ^{m−k}]`.
pub fn random_laurent_complex<R: Rng>(rng: &mut R, m: usize) -> LaurentChainComplex {
    if m == 0 || rng.gen_bool(0.5) {
        return random_two_term(rng, m);
    }
    let k = rng.gen_range(1..=m);
    random_two_term(rng, k).tensor(&random_two_term(rng, m - k))
}

pub fn is_unimodular_pair(g: &IntMatrix, gi: &IntMatrix) -> bool {
    g.mul(gi).is_ok_and(|p| p == IntMatrix::identity(g.rows()))
        && gi.mul(g).is_ok_and(|p| p == IntMatrix::identity(g.rows()))
}
