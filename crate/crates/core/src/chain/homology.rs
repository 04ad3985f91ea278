use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::IntChainComplex;
use crate::linalg::numeric::{fsum, ln_bigint};
use crate::linalg::{smith_normal_form, SmithForm};

/// `H_n` of a complex: free rank, chained torsion and derived counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti_q: usize,
    #[serde(with = "crate::linalg::numeric::decimal_vec")]
    pub invariant_factors: Vec<BigInt>,
    pub log_tors: f64,
    pub d_hn: usize,
    pub betti_mod_p: BTreeMap<u64, usize>,
}

impl HomologyGroup {
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_zero(&self) -> bool {
        self.betti_q == 0 && self.invariant_factors.is_empty()
    }

    /// `dim_{𝔽_p}(𝔽_p ⊗ H_n)`, which differs from the mod-p Betti number by
    /// the Tor term coming from `H_{n−1}`.
    pub fn dim_tensor_fp(&self, p: u64) -> usize {
        self.betti_q + count_divisible(&self.invariant_factors, p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub degrees: Vec<HomologyGroup>,
}

impl HomologySummary {
    pub fn degree(&self, n: usize) -> &HomologyGroup {
        &self.degrees[n]
    }
}

/// Minimal number of generators of `ℤ^r ⊕ ⊕ ℤ/d_j` from chained factors;
/// unit factors are ignored.
pub fn d_of_abelian_group(invariant_factors: &[BigInt], free_rank: usize) -> usize {
    free_rank + invariant_factors.iter().filter(|d| !d.is_one()).count()
}

/// `dim_ℚ + max_p s_p` for an arbitrary (not necessarily chained) list of
/// cyclic orders, with `s_p` the number of orders divisible by `p`.
/// Orders are factored by trial division, so they must fit in a `u64`.
pub fn d_primewise(cyclic_orders: &[BigInt], free_rank: usize) -> usize {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for d in cyclic_orders {
        let mut x = d.to_u64().expect("cyclic order fits in u64");
        let mut p = 2;
        while p * p <= x {
            if x % p == 0 {
                *counts.entry(p).or_default() += 1;
                while x % p == 0 {
                    x /= p;
                }
            }
            p += 1;
        }
        if x > 1 {
            *counts.entry(x).or_default() += 1;
        }
    }
    free_rank + counts.values().copied().max().unwrap_or(0)
}

fn count_divisible(factors: &[BigInt], p: u64) -> usize {
    let p = BigInt::from(p);
    factors.iter().filter(|d| d.is_multiple_of(&p)).count()
}

pub(crate) fn smith_forms(c: &IntChainComplex) -> Vec<SmithForm> {
    c.differentials().iter().map(smith_normal_form).collect()
}

/// Homology in every degree. Torsion of `H_n` is read off the non-unit
/// invariant factors of `c_{n+1}`; Betti numbers come from ranks.
pub fn homology(c: &IntChainComplex, primes: &[u64]) -> HomologySummary {
    let forms = smith_forms(c);
    summary_from_smith(c, &forms, primes)
}

pub(crate) fn summary_from_smith(c: &IntChainComplex, forms: &[SmithForm], primes: &[u64]) -> HomologySummary {
    let top = c.top_degree();
    let rank = |n: usize| if n == 0 || n > top { 0 } else { forms[n - 1].rank };
    let tors = |n: usize| -> Vec<BigInt> {
        if n < top {
            forms[n].nonunit_factors()
        } else {
            Vec::new()
        }
    };
    let degrees = (0..=top)
        .map(|n| {
            let betti_q = c.dim(n) - rank(n) - rank(n + 1);
            let factors = tors(n);
            let below = if n == 0 { Vec::new() } else { tors(n - 1) };
            let betti_mod_p = primes
                .iter()
                .map(|&p| (p, betti_q + count_divisible(&factors, p) + count_divisible(&below, p)))
                .collect();
            let log_tors = fsum(factors.iter().map(ln_bigint));
            HomologyGroup {
                degree: n,
                betti_q,
                d_hn: d_of_abelian_group(&factors, betti_q),
                invariant_factors: factors,
                log_tors,
                betti_mod_p,
            }
        })
        .collect();
    HomologySummary { degrees }
}

/// Homology in a single degree without touching the other differentials.
pub fn homology_degree(c: &IntChainComplex, n: usize, primes: &[u64]) -> HomologyGroup {
    let top = c.top_degree();
    let sn = (n >= 1 && n <= top).then(|| smith_normal_form(&c.boundary(n)));
    let sn1 = (n < top).then(|| smith_normal_form(&c.boundary(n + 1)));
    let below = sn.as_ref().map(|s| s.nonunit_factors()).unwrap_or_default();
    let betti_q = c.dim(n) - sn.as_ref().map_or(0, |s| s.rank) - sn1.as_ref().map_or(0, |s| s.rank);
    let factors = sn1.map(|s| s.nonunit_factors()).unwrap_or_default();
    let betti_mod_p = primes
        .iter()
        .map(|&p| (p, betti_q + count_divisible(&factors, p) + count_divisible(&below, p)))
        .collect();
    HomologyGroup {
        degree: n,
        betti_q,
        d_hn: d_of_abelian_group(&factors, betti_q),
        log_tors: fsum(factors.iter().map(ln_bigint)),
        invariant_factors: factors,
        betti_mod_p,
    }
}
