use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{estimate_constants, augmentation_filtration, homology_over_cyclic_product, FinAbGroup};
use crate::chain::homology;
use crate::error::{Error, Result};
use crate::group_ring::{ModuleWithAction, QuotientComplex};
use crate::linalg::numeric::ln_bigint;
use crate::linalg::{kernel_basis, subquotient, CokernelStructure, IntMatrix};

/// Kernel and cokernel of a homomorphism between subquotients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedMap {
    pub kernel: CokernelStructure,
    pub cokernel: CokernelStructure,
}

fn order_of(s: &CokernelStructure) -> Option<BigInt> {
    (s.free_rank == 0).then(|| s.torsion_order())
}

impl InducedMap {
    pub fn kernel_order(&self) -> Option<BigInt> {
        order_of(&self.kernel)
    }

    pub fn cokernel_order(&self) -> Option<BigInt> {
        order_of(&self.cokernel)
    }
}

/// The map `⟨Z⟩/⟨B⟩ → ⟨Z′⟩/⟨B′⟩` induced by `f`, which must send `Z` into
/// `⟨Z′⟩` and `B` into `⟨B′⟩`. All lattices are spanned by matrix columns.
pub fn induced_map(
    f: &IntMatrix,
    src_cycles: &IntMatrix,
    src_bounds: &IntMatrix,
    tgt_cycles: &IntMatrix,
    tgt_bounds: &IntMatrix,
) -> Result<InducedMap> {
    let fz = f.mul(src_cycles)?;
    let stacked = fz.hstack(tgt_bounds)?;
    let k = kernel_basis(&stacked);
    let coeff_rows: Vec<usize> = (0..src_cycles.cols()).collect();
    let preimage = src_cycles.mul(&k.select_rows(&coeff_rows))?;
    let kernel = subquotient(&preimage.hstack(src_bounds)?, src_bounds)?;
    let cokernel = subquotient(tgt_cycles, &fz.hstack(tgt_bounds)?)?;
    Ok(InducedMap { kernel, cokernel })
}

/// Drops the action generators of order 1.
fn nontrivial_part(m: &ModuleWithAction) -> ModuleWithAction {
    let keep: Vec<usize> = (0..m.orders().len()).filter(|&j| m.orders()[j] > 1).collect();
    ModuleWithAction::new(
        m.presentation().clone(),
        keep.iter().map(|&j| m.generators_action()[j].clone()).collect(),
        keep.iter().map(|&j| m.orders()[j]).collect(),
    )
    .expect("subset of a valid action")
}

/// `ν_n: ℤ ⊗_{ℤG} H_n(C) → H_n(ℤ ⊗_{ℤG} C)` with the bounds
/// `|ker ν_n| ≤ Π_{p=1}^n |H_{p+1}(G; H_{n−p}(C))|`,
/// `|coker ν_n| ≤ Π_{p=1}^n |H_p(G; H_{n−p}(C))|`, and the matching bound on
/// `|d(ℤ ⊗ H_n(C)) − d(H_n(ℤ ⊗ C))|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NuReport {
    pub degree: usize,
    pub map: InducedMap,
    pub kernel_bound: BigInt,
    pub cokernel_bound: BigInt,
    pub d_difference: usize,
    pub d_bound: usize,
    pub holds: bool,
}

pub fn nu_kernel_cokernel(qc: &QuotientComplex, n: usize) -> Result<NuReport> {
    let c = &qc.complex;
    if n > c.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            top: c.top_degree(),
        });
    }
    let aug = qc.coinvariants();
    let z = kernel_basis(&c.boundary(n));
    let mut src_bounds = c.boundary(n + 1);
    for p in &qc.actions[n] {
        let moved = p.apply_columns(&z).sub(&z)?;
        src_bounds = src_bounds.hstack(&moved)?;
    }
    let zt = kernel_basis(&aug.boundary(n));
    let map = induced_map(&qc.fibre_projection(n), &z, &src_bounds, &zt, &aug.boundary(n + 1))?;
    let d_source = subquotient(&z, &src_bounds)?.d();
    let d_target = subquotient(&zt, &aug.boundary(n + 1))?.d();
    let mut kernel_bound = BigInt::one();
    let mut cokernel_bound = BigInt::one();
    let mut d_bound = 0;
    for p in 1..=n {
        let m = nontrivial_part(&qc.homology_with_action(n - p)?);
        let hp = homology_over_cyclic_product(&m, p);
        let hp1 = homology_over_cyclic_product(&m, p + 1);
        cokernel_bound *= hp.torsion_order();
        kernel_bound *= hp1.torsion_order();
        d_bound += hp.d() + hp1.d();
    }
    let holds = map.kernel_order().is_some_and(|o| o <= kernel_bound)
        && map.cokernel_order().is_some_and(|o| o <= cokernel_bound)
        && d_source.abs_diff(d_target) <= d_bound;
    Ok(NuReport {
        degree: n,
        map,
        kernel_bound,
        cokernel_bound,
        d_difference: d_source.abs_diff(d_target),
        d_bound,
        holds,
    })
}

/// One degree of the comparison between `H_n(C)` and `H_n(ℤ ⊗_{ℤG} C)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeEstimate {
    pub degree: usize,
    pub d_hn: usize,
    pub d_bound: BigInt,
    pub ln_kernel: f64,
    pub ln_cokernel: f64,
    pub ln_bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub r: usize,
    pub group: FinAbGroup,
    pub filtration_lengths: Vec<usize>,
    pub degrees: Vec<DegreeEstimate>,
    pub holds: bool,
}

fn ln_order(s: &CokernelStructure) -> f64 {
    if s.free_rank > 0 {
        f64::INFINITY
    } else {
        ln_bigint(&s.torsion_order())
    }
}

fn pow_or_one(base: usize, e: u64) -> BigInt {
    num_traits::Pow::pow(BigInt::from(base), e)
}

/// Checks, for every `n ≤ d`,
/// `d(H_n(C)) ≤ Σ_p C_0(r,n,p)·d(G)^{C_1(r,n,p)}·d(H_p(ℤ ⊗ C))` and
/// `ln|ker H_n(pr)|, ln|coker H_n(pr)| ≤ Σ_p D_0(r,n,p)·ln|G|·d(G)^{D_1(r,n,p)}·d(H_p(ℤ ⊗ C))`.
///
/// Requires `H_p(C)` nilpotent of filtration length `≤ r` for `p ≤ d`.
pub fn verify_estimate_bounds(qc: &QuotientComplex, r: usize, d: usize) -> Result<EstimateReport> {
    let c = &qc.complex;
    if d > c.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            top: c.top_degree(),
        });
    }
    if r == 0 {
        return Err(Error::InvalidArgument("filtration bound r must be at least 1".into()));
    }
    let mut lengths = Vec::with_capacity(d + 1);
    for p in 0..=d {
        let f = augmentation_filtration(&qc.homology_with_action(p)?);
        match f.length {
            Some(l) if l <= r => lengths.push(l),
            Some(l) => {
                return Err(Error::HypothesisViolated(format!(
                    "H_{p} has filtration length {l} > {r}"
                )))
            }
            None => return Err(Error::HypothesisViolated(format!("H_{p} is not nilpotent"))),
        }
    }
    let (group, _) = FinAbGroup::from_cyclic(qc.quotient.moduli());
    let m = group.d();
    let ln_g = (group.order() as f64).ln();
    let aug = qc.coinvariants();
    let h_aug = homology(&aug, &[]);
    let mut degrees = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let z = kernel_basis(&c.boundary(n));
        let b = c.boundary(n + 1);
        let d_hn = subquotient(&z, &b)?.d();
        let map = induced_map(&qc.fibre_projection(n), &z, &b, &kernel_basis(&aug.boundary(n)), &aug.boundary(n + 1))?;
        let mut d_bound = BigInt::zero();
        let mut ln_weight = BigInt::zero();
        for p in 0..=n {
            let k = estimate_constants(r as u64, n as u64, p as u64)?;
            let dp = BigInt::from(h_aug.degree(p).d_hn);
            d_bound += &k.c0 * pow_or_one(m, k.c1) * &dp;
            ln_weight += &k.d0 * pow_or_one(m, k.d1) * &dp;
        }
        let ln_bound = if ln_weight.is_zero() || ln_g == 0.0 {
            0.0
        } else {
            ln_g * ln_weight.to_f64().unwrap_or(f64::INFINITY)
        };
        let (ln_kernel, ln_cokernel) = (ln_order(&map.kernel), ln_order(&map.cokernel));
        let slack = 1e-9 * ln_bound.abs().max(1.0);
        let holds = BigInt::from(d_hn) <= d_bound && ln_kernel <= ln_bound + slack && ln_cokernel <= ln_bound + slack;
        degrees.push(DegreeEstimate {
            degree: n,
            d_hn,
            d_bound,
            ln_kernel,
            ln_cokernel,
            ln_bound,
            holds,
        });
    }
    let holds = degrees.iter().all(|e| e.holds);
    Ok(EstimateReport {
        r,
        group,
        filtration_lengths: lengths,
        degrees,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::{base_change, circle_complex, torus_complex, QuotientSpec};

    #[test]
    fn nu_on_the_circle() {
        for i in [1u64, 2, 3, 4] {
            let qc = base_change(&circle_complex(), &QuotientSpec::new(vec![i]).unwrap()).unwrap();
            let r0 = nu_kernel_cokernel(&qc, 0).unwrap();
            assert!(r0.map.kernel.is_zero() && r0.map.cokernel.is_zero());
            let r1 = nu_kernel_cokernel(&qc, 1).unwrap();
            assert!(r1.holds);
            // The norm class maps to i times the generator.
            assert!(r1.map.kernel.is_zero());
            assert_eq!(r1.map.cokernel_order(), Some(BigInt::from(i)));
            assert_eq!(r1.cokernel_bound, BigInt::from(i));
        }
    }

    #[test]
    fn estimates_on_circle_and_torus() {
        let qc = base_change(&circle_complex(), &QuotientSpec::new(vec![5]).unwrap()).unwrap();
        assert!(verify_estimate_bounds(&qc, 1, 1).unwrap().holds);
        let qc = base_change(&torus_complex(2), &QuotientSpec::new(vec![2, 2]).unwrap()).unwrap();
        let rep = verify_estimate_bounds(&qc, 1, 2).unwrap();
        assert!(rep.holds, "{rep:?}");
    }
}
