//! Homology of finite abelian groups with coefficients in modules with action,
//! nilpotent filtrations, coinvariants and the comparison maps `μ` and `ν`.

mod constants;
mod filtration;
mod nu;

pub use constants::{estimate_constants, EstimateConstants};
pub use filtration::{augmentation_filtration, coinvariants, CoinvariantReport, Filtration};
pub use nu::{
    induced_map, nu_kernel_cokernel, verify_estimate_bounds, DegreeEstimate, EstimateReport, InducedMap, NuReport,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_ring::{regular_representation, LaurentPoly, ModuleWithAction, PolyMatrix, QuotientSpec};
use crate::linalg::{kernel_basis, smith_with_transforms, subquotient, CokernelStructure, IntMatrix};
use crate::IntChainComplex;

/// `⊕ ℤ/d_j` with `d_1 | d_2 | …`, all `d_j ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidArgument("invariant factors must be at least 2".into()));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidArgument(format!("factors {factors:?} are not chained")));
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new() }
    }

    /// Chained form of `Π ℤ/orders[j]`, together with the exponents expressing
    /// each new generator in the old ones: new generator `k` is `Σ_j e[k][j]·t_j`.
    pub fn from_cyclic(orders: &[u64]) -> (Self, Vec<Vec<u64>>) {
        let n = orders.len();
        let diag = IntMatrix::diagonal(n, n, &orders.iter().map(|&o| BigInt::from(o)).collect::<Vec<_>>());
        let s = smith_with_transforms(&diag);
        let ui = s.left_inverse.expect("transforms");
        let mut factors = Vec::new();
        let mut exponents = Vec::new();
        for (i, d) in s.invariant_factors.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            factors.push(d.to_u64().expect("group order fits in u64"));
            exponents.push(
                (0..n)
                    .map(|j| ui[(j, i)].mod_floor(&BigInt::from(orders[j])).to_u64().expect("reduced"))
                    .collect(),
            );
        }
        (FinAbGroup { factors }, exponents)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Minimal number of generators.
    pub fn d(&self) -> usize {
        self.factors.len()
    }
}

/// Tensor product of the periodic resolutions of the cyclic factors.
///
/// Degree `n` has one ℤG-basis vector per weak composition `(k_1, …, k_m)` of
/// `n`, in lexicographic order. On factor `j` the differential lowers `k_j`
/// by one with coefficient `t_j − 1` (odd `k_j`) or the norm element `N_j`
/// (even `k_j`), and sign `(−1)^{k_1+…+k_{j−1}}`.
#[derive(Debug, Clone, Serialize)]
pub struct Resolution {
    pub group: FinAbGroup,
    pub length: usize,
    pub ranks: Vec<usize>,
    pub differentials: Vec<PolyMatrix>,
    compositions: Vec<Vec<Vec<usize>>>,
}

/// Weak compositions of `n` into `m` parts, lexicographically.
pub fn weak_compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in weak_compositions(n - first, m - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `binom(n+m−1, m−1)`, with the trivial-group convention `1, 0, 0, …`.
pub fn resolution_rank(n: usize, m: usize) -> usize {
    if m == 0 {
        usize::from(n == 0)
    } else {
        binomial(n + m - 1, m - 1)
    }
}

fn composition_coefficient(m: usize, j: usize, k: usize, order: u64) -> LaurentPoly {
    if k % 2 == 1 {
        LaurentPoly::var_minus_one(m, j)
    } else {
        let mut p = LaurentPoly::zero(m);
        for s in 0..order as i64 {
            let mut e = vec![0; m];
            e[j] = s;
            p = p.add(&LaurentPoly::monomial(e, 1));
        }
        p
    }
}

pub fn standard_resolution(g: &FinAbGroup, up_to: usize) -> Resolution {
    let m = g.d();
    let compositions: Vec<Vec<Vec<usize>>> = (0..=up_to).map(|n| weak_compositions(n, m)).collect();
    let ranks: Vec<usize> = compositions.iter().map(Vec::len).collect();
    let mut diffs = Vec::with_capacity(up_to);
    for n in 1..=up_to {
        let mut d = PolyMatrix::zeros(m, ranks[n - 1], ranks[n]);
        for (col, kappa) in compositions[n].iter().enumerate() {
            let mut prefix = 0;
            for j in 0..m {
                if kappa[j] >= 1 {
                    let mut face = kappa.clone();
                    face[j] -= 1;
                    let row = compositions[n - 1].binary_search(&face).expect("face is a composition");
                    let mut p = composition_coefficient(m, j, kappa[j], g.factors[j]);
                    if prefix % 2 == 1 {
                        p = p.neg();
                    }
                    d.set(row, col, p);
                }
                prefix += kappa[j];
            }
        }
        diffs.push(d);
    }
    Resolution {
        group: g.clone(),
        length: up_to,
        ranks,
        differentials: diffs,
        compositions,
    }
}

impl Resolution {
    pub fn compositions(&self, n: usize) -> &[Vec<usize>] {
        &self.compositions[n]
    }

    /// The resolution as a ℤ-complex through the regular representation.
    pub fn integer_complex(&self) -> Result<IntChainComplex> {
        let q = QuotientSpec::new(self.group.factors.clone())?;
        let idx = self.group.order() as usize;
        let dims = self.ranks.iter().map(|&r| r * idx).collect();
        let diffs = self.differentials.iter().map(|d| regular_representation(d, &q)).collect();
        IntChainComplex::new(dims, diffs)
    }

    /// Checks `ranks[n] = binom(n+m−1, m−1)` and exactness of the augmented
    /// integer complex below the top degree: `H_0 = ℤ` through the augmentation
    /// and `H_n = 0` for `0 < n < length`, by ranks over ℚ together with the
    /// torsion of each homology group.
    pub fn verify_exactness(&self) -> Result<()> {
        let m = self.group.d();
        for (n, &r) in self.ranks.iter().enumerate() {
            if r != resolution_rank(n, m) {
                return Err(Error::identity("resolution rank", format!("degree {n}: {r}")));
            }
        }
        let c = self.integer_complex()?;
        let h = crate::chain::homology(&c, &[]);
        let h0 = h.degree(0);
        if h0.betti_q != 1 || !h0.invariant_factors.is_empty() {
            return Err(Error::identity("resolution augmentation", "H_0 is not ℤ"));
        }
        for n in 1..self.length {
            if !h.degree(n).is_zero() {
                return Err(Error::identity("resolution exactness", format!("H_{n} ≠ 0")));
            }
        }
        Ok(())
    }
}

/// `H_n(G; M)`, the homology of `M ⊗_{ℤG} F_*`. The action generators of `M`
/// must correspond to the invariant factors of `G`.
pub fn group_homology(g: &FinAbGroup, m: &ModuleWithAction, n: usize) -> Result<CokernelStructure> {
    if m.orders() != g.factors() {
        return Err(Error::IncompatibleAction(format!(
            "module over Π ℤ/{:?} used with group of factors {:?}",
            m.orders(),
            g.factors()
        )));
    }
    Ok(homology_over_cyclic_product(m, n))
}

/// Same as [`group_homology`], for `M` over any product `Π ℤ/orders[j]`
/// (cyclic factors need not be chained).
pub fn homology_over_cyclic_product(m: &ModuleWithAction, n: usize) -> CokernelStructure {
    let m = m.simplify();
    let k = m.orders().len();
    let gens = m.num_generators();
    let compositions: Vec<Vec<Vec<usize>>> = (0..=n + 1).map(|i| weak_compositions(i, k)).collect();
    let aug: Vec<IntMatrix> = (0..k).map(|j| m.augmentation_action(j)).collect();
    let norm: Vec<IntMatrix> = (0..k).map(|j| m.norm_action(j)).collect();
    // ∂_i: M^{r_i} → M^{r_{i−1}} on generators.
    let boundary = |i: usize| -> IntMatrix {
        let (src, tgt) = (&compositions[i], &compositions[i - 1]);
        let mut d = IntMatrix::zeros(tgt.len() * gens, src.len() * gens);
        for (col, kappa) in src.iter().enumerate() {
            let mut prefix = 0;
            for j in 0..k {
                if kappa[j] >= 1 {
                    let mut face = kappa.clone();
                    face[j] -= 1;
                    let row = tgt.binary_search(&face).expect("face is a composition");
                    let block = if kappa[j] % 2 == 1 { &aug[j] } else { &norm[j] };
                    let negate = prefix % 2 == 1;
                    for a in 0..gens {
                        for b in 0..gens {
                            let v = &block[(a, b)];
                            d[(row * gens + a, col * gens + b)] = if negate { -v } else { v.clone() };
                        }
                    }
                }
                prefix += kappa[j];
            }
        }
        d
    };
    let relations = |i: usize| -> IntMatrix {
        let r = if i < compositions.len() { compositions[i].len() } else { 0 };
        let mut p = IntMatrix::zeros(0, 0);
        for _ in 0..r {
            p = p.block_diag(m.presentation());
        }
        p
    };
    let rn = compositions[n].len();
    // Cycles: x with ∂_n x ∈ relations of degree n−1.
    let cycles = if n == 0 {
        IntMatrix::identity(rn * gens)
    } else {
        let dn = boundary(n);
        let rel = relations(n - 1);
        let stacked = dn.hstack(&rel).expect("same rows");
        let k = kernel_basis(&stacked);
        let rows: Vec<usize> = (0..rn * gens).collect();
        k.select_rows(&rows)
    };
    let bound = boundary(n + 1).hstack(&relations(n)).expect("same rows");
    // Relations lie inside the cycles, since the boundaries preserve the lattices.
    let cycles = cycles.hstack(&relations(n)).expect("same rows");
    subquotient(&cycles, &bound).expect("boundaries are cycles")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_weak_compositions() {
        for m in 0..=4 {
            for n in 0..=8 {
                assert_eq!(weak_compositions(n, m).len(), resolution_rank(n, m));
            }
        }
        assert_eq!(resolution_rank(2, 2), 3);
        assert_eq!(weak_compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn resolutions_are_exact() {
        for factors in [vec![], vec![3], vec![2, 2], vec![2, 4]] {
            let g = FinAbGroup::new(factors).unwrap();
            standard_resolution(&g, 4).verify_exactness().unwrap();
        }
    }

    #[test]
    fn cyclic_group_homology_with_trivial_coefficients() {
        for d in [2u64, 3, 6] {
            let g = FinAbGroup::new(vec![d]).unwrap();
            let z = ModuleWithAction::trivial(IntMatrix::zeros(1, 0), vec![d]);
            let h0 = group_homology(&g, &z, 0).unwrap();
            assert_eq!((h0.free_rank, h0.invariant_factors.len()), (1, 0));
            let h1 = group_homology(&g, &z, 1).unwrap();
            assert_eq!(h1.invariant_factors, vec![BigInt::from(d)]);
            assert!(group_homology(&g, &z, 2).unwrap().is_zero());
        }
    }

    #[test]
    fn klein_four_homology() {
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let z = ModuleWithAction::trivial(IntMatrix::zeros(1, 0), vec![2, 2]);
        let two = BigInt::from(2);
        assert_eq!(group_homology(&g, &z, 1).unwrap().invariant_factors, vec![two.clone(); 2]);
        assert_eq!(group_homology(&g, &z, 2).unwrap().invariant_factors, vec![two.clone()]);
        assert_eq!(group_homology(&g, &z, 3).unwrap().invariant_factors, vec![two; 3]);
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let g = FinAbGroup::new(vec![2]).unwrap();
        let z = ModuleWithAction::trivial(IntMatrix::zeros(1, 0), vec![3]);
        assert!(matches!(group_homology(&g, &z, 1), Err(Error::IncompatibleAction(_))));
    }

    #[test]
    fn chained_form_of_cyclic_products() {
        let (g, e) = FinAbGroup::from_cyclic(&[2, 3, 1]);
        assert_eq!(g.factors(), &[6]);
        assert_eq!(e.len(), 1);
        let (g, _) = FinAbGroup::from_cyclic(&[4, 2]);
        assert_eq!(g.factors(), &[2, 4]);
    }
}
