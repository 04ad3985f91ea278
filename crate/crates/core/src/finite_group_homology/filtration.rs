use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use super::FinAbGroup;
use crate::group_ring::ModuleWithAction;
use crate::linalg::{subquotient, CokernelStructure, IntMatrix, Lattice};

/// Position of `M` in the augmentation-ideal series `M ⊇ I·M ⊇ I²·M ⊇ …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub is_nilpotent: bool,
    /// Least `r` with `I^r·M = 0`; `None` when the series stabilizes above zero.
    pub length: Option<usize>,
    /// `I^k·M` for `k = 0, 1, …` until the series stops.
    pub layers: Vec<CokernelStructure>,
}

fn submodule(lat: &Lattice, relations: &IntMatrix) -> CokernelStructure {
    subquotient(lat.basis(), relations).expect("relations lie in every layer")
}

/// Computes the augmentation-ideal nilpotency index. A filtration with
/// trivial quotients of length `r` exists exactly when `I^r·M = 0`.
pub fn augmentation_filtration(m: &ModuleWithAction) -> Filtration {
    let m = m.simplify();
    let s = m.structure();
    if s.invariant_factors.is_empty() {
        // Finite-order unipotent automorphisms of a lattice are trivial.
        let trivial = m.acts_trivially();
        let length = if s.is_zero() {
            Some(0)
        } else if trivial {
            Some(1)
        } else {
            None
        };
        return Filtration {
            is_nilpotent: length.is_some(),
            length,
            layers: vec![s],
        };
    }
    augmentation_series(&m)
}

pub(crate) fn augmentation_series(m: &ModuleWithAction) -> Filtration {
    let g = m.num_generators();
    let relations = m.presentation().clone();
    let rel_lattice = Lattice::from_generators(&relations);
    let aug: Vec<IntMatrix> = (0..m.orders().len()).map(|j| m.augmentation_action(j)).collect();
    let mut current = Lattice::full(g);
    let mut layers = vec![submodule(&current, &relations)];
    loop {
        if current.basis() == rel_lattice.basis() {
            return Filtration {
                is_nilpotent: true,
                length: Some(layers.len() - 1),
                layers,
            };
        }
        let mut gens = relations.clone();
        for a in &aug {
            gens = gens.hstack(&a.mul(current.basis()).expect("square")).expect("same rows");
        }
        let next = Lattice::from_generators(&gens);
        let stalled = next.basis() == current.basis() || (next.rank() == current.rank() && next.rank() > rel_lattice.rank());
        layers.push(submodule(&next, &relations));
        if stalled {
            return Filtration {
                is_nilpotent: false,
                length: None,
                layers,
            };
        }
        current = next;
    }
}

/// Coinvariants `ℤ ⊗_{ℤG} M = M / I·M` and the kernel `I·M` of
/// `μ: M → ℤ ⊗_{ℤG} M`, with the bounds for nilpotent `M` of length `r ≥ 1`:
/// `|ker μ| ≤ |G|^{(r−1)·d(G)·d(M)}` and `d(M) ≤ r·(d(G)+1)^{r−1}·d(ℤ ⊗ M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoinvariantReport {
    pub quotient: CokernelStructure,
    pub ker_mu: CokernelStructure,
    pub ker_mu_order: Option<BigInt>,
    pub filtration: Filtration,
    pub kernel_bound: Option<BigInt>,
    pub generator_bound: Option<BigInt>,
    pub bounds_hold: Option<bool>,
}

pub fn coinvariants(m: &ModuleWithAction) -> CoinvariantReport {
    let m = m.simplify();
    let g = m.num_generators();
    let mut gens = m.presentation().clone();
    let mut image = IntMatrix::zeros(g, 0);
    for j in 0..m.orders().len() {
        let a = m.augmentation_action(j);
        gens = gens.hstack(&a).expect("same rows");
        image = image.hstack(&a).expect("same rows");
    }
    let quotient = crate::linalg::cokernel_structure(&gens);
    let ker_lattice = image.hstack(m.presentation()).expect("same rows");
    let ker_mu = subquotient(&ker_lattice, m.presentation()).expect("relations lie in I·M");
    let ker_mu_order = (ker_mu.free_rank == 0).then(|| ker_mu.torsion_order());
    let filtration = augmentation_filtration(&m);
    let (group, _) = FinAbGroup::from_cyclic(m.orders());
    let dm = m.d();
    let (mut kernel_bound, mut generator_bound, mut bounds_hold) = (None, None, None);
    if let Some(r) = filtration.length.filter(|&r| r >= 1) {
        let kb = Pow::pow(BigInt::from(group.order()), ((r - 1) * group.d() * dm) as u64);
        let gb = BigInt::from(r) * Pow::pow(BigInt::from(group.d() + 1), (r - 1) as u64) * BigInt::from(quotient.d());
        let holds = ker_mu_order.as_ref().is_some_and(|o| *o <= kb) && BigInt::from(dm) <= gb;
        kernel_bound = Some(kb);
        generator_bound = Some(gb);
        bounds_hold = Some(holds);
    }
    CoinvariantReport {
        quotient,
        ker_mu,
        ker_mu_order,
        filtration,
        kernel_bound,
        generator_bound,
        bounds_hold,
    }
}
