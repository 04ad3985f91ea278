use std::collections::BTreeSet;

use homgrow_core::corpus::random_unimodular;
use homgrow_core::finite_group_homology::*;
use homgrow_core::group_ring::{base_change, circle_complex, LaurentChainComplex, LaurentPoly, ModuleWithAction, PolyMatrix, QuotientSpec};
use homgrow_core::{Error, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: &[&[u64]] = &[
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[8],
    &[12],
    &[16],
    &[2, 2],
    &[2, 4],
    &[2, 6],
    &[2, 8],
    &[3, 3],
    &[4, 4],
    &[2, 2, 2],
    &[2, 2, 4],
];

/// A module `⊕ ℤ/moduli[i]` (0 meaning ℤ) with action matrices acting on
/// coordinates mod `moduli`.
#[derive(Debug, Clone)]
struct Toy {
    moduli: Vec<u64>,
    actions: Vec<Vec<Vec<i64>>>,
    orders: Vec<u64>,
}

fn units_of_order_dividing(k: u64, n: u64) -> Vec<i64> {
    if k == 0 {
        return if n.is_multiple_of(2) { vec![1, -1] } else { vec![1] };
    }
    if k == 1 {
        return vec![1];
    }
    (1..k)
        .filter(|&u| num_integer::gcd(u, k) == 1 && pow_mod(u, n, k) == 1)
        .map(|u| u as i64)
        .collect()
}

fn pow_mod(mut b: u64, mut e: u64, k: u64) -> u64 {
    let mut acc = 1 % k;
    b %= k;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % k;
        }
        b = b * b % k;
        e >>= 1;
    }
    acc
}

/// Random cyclic and Jordan-block pieces with total rank `≤ 3`.
fn random_toy(rng: &mut ChaCha8Rng, orders: &[u64], allow_free: bool) -> Toy {
    let g = orders.len();
    let mut moduli = Vec::new();
    let mut blocks: Vec<Vec<Vec<Vec<i64>>>> = Vec::new();
    let budget = rng.gen_range(1..=3);
    while moduli.len() < budget {
        let room = budget - moduli.len();
        if room >= 2 && rng.gen_bool(0.3) {
            // ℤ/k² with x ↦ (x_1 + a·x_2, x_2), of order k/gcd(a,k).
            let k = [2u64, 3, 4][rng.gen_range(0..3)];
            let shifts: Vec<i64> = orders
                .iter()
                .map(|&n| {
                    let ok: Vec<i64> = (0..k as i64).filter(|&a| (a as u64 * n).is_multiple_of(k)).collect();
                    ok[rng.gen_range(0..ok.len())]
                })
                .collect();
            moduli.extend([k, k]);
            blocks.push(shifts.iter().map(|&a| vec![vec![1, a], vec![0, 1]]).collect());
        } else {
            let choices: &[u64] = if allow_free { &[0, 2, 3, 4, 5, 6, 8, 9] } else { &[2, 3, 4, 5, 6, 8, 9] };
            let k = choices[rng.gen_range(0..choices.len())];
            let units: Vec<i64> = orders
                .iter()
                .map(|&n| {
                    let us = units_of_order_dividing(k, n);
                    us[rng.gen_range(0..us.len())]
                })
                .collect();
            moduli.push(k);
            blocks.push(units.iter().map(|&u| vec![vec![u]]).collect());
        }
    }
    let d = moduli.len();
    let mut actions = vec![vec![vec![0i64; d]; d]; g];
    let mut off = 0;
    for b in &blocks {
        let s = b[0].len();
        for j in 0..g {
            for r in 0..s {
                for c in 0..s {
                    actions[j][off + r][off + c] = b[j][r][c];
                }
            }
        }
        off += s;
    }
    Toy {
        moduli,
        actions,
        orders: orders.to_vec(),
    }
}

fn to_module(t: &Toy) -> ModuleWithAction {
    let d = t.moduli.len();
    let diag: Vec<BigInt> = t.moduli.iter().map(|&k| BigInt::from(k)).collect();
    let pres = IntMatrix::diagonal(d, d, &diag);
    let acts = t.actions.iter().map(|a| IntMatrix::from_rows(a)).collect();
    ModuleWithAction::new(pres, acts, t.orders.clone()).expect("toy actions are valid")
}

fn rebased(rng: &mut ChaCha8Rng, m: &ModuleWithAction) -> ModuleWithAction {
    let (g, gi) = random_unimodular(rng, m.num_generators(), 4);
    m.rebase(&g, &gi).unwrap()
}

// Element-level oracles for finite toys.

type Elt = Vec<u64>;

fn elements(t: &Toy) -> Vec<Elt> {
    let mut out = vec![vec![]];
    for &k in &t.moduli {
        out = out
            .into_iter()
            .flat_map(|v: Elt| {
                (0..k).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn act(t: &Toy, a: &[Vec<i64>], x: &[u64]) -> Elt {
    (0..x.len())
        .map(|r| {
            let k = t.moduli[r] as i64;
            let s: i64 = (0..x.len()).map(|c| a[r][c] * x[c] as i64).sum();
            s.rem_euclid(k) as u64
        })
        .collect()
}

fn add(t: &Toy, x: &[u64], y: &[u64]) -> Elt {
    x.iter().zip(y).zip(&t.moduli).map(|((a, b), k)| (a + b) % k).collect()
}

fn sub(t: &Toy, x: &[u64], y: &[u64]) -> Elt {
    x.iter().zip(y).zip(&t.moduli).map(|((a, b), k)| (a + k - b) % k).collect()
}

fn norm(t: &Toy, j: usize, x: &[u64]) -> Elt {
    let mut acc = vec![0; x.len()];
    let mut cur = x.to_vec();
    for _ in 0..t.orders[j] {
        acc = add(t, &acc, &cur);
        cur = act(t, &t.actions[j], &cur);
    }
    acc
}

fn span(t: &Toy, gens: &BTreeSet<Elt>) -> BTreeSet<Elt> {
    let zero = vec![0; t.moduli.len()];
    let mut set: BTreeSet<Elt> = [zero].into();
    loop {
        let mut next = set.clone();
        for x in &set {
            for g in gens {
                next.insert(add(t, x, g));
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// `|H_n(ℤ/N; M)|` for `n ≥ 1`: `M^G/N·M` in odd degrees, `ker N/(t−1)M` in even.
fn cyclic_homology_order(t: &Toy, n: usize) -> usize {
    let all = elements(t);
    let a = &t.actions[0];
    if n % 2 == 1 {
        let fixed = all.iter().filter(|x| act(t, a, x) == **x).count();
        let image: BTreeSet<Elt> = all.iter().map(|x| norm(t, 0, x)).collect();
        fixed / image.len()
    } else {
        let zero = vec![0; t.moduli.len()];
        let kernel = all.iter().filter(|x| norm(t, 0, x) == zero).count();
        let image: BTreeSet<Elt> = all.iter().map(|x| sub(t, &act(t, a, x), x)).collect();
        kernel / image.len()
    }
}

/// Least `r` with `I^r·M = 0` by iterating images of `t_j − 1`.
fn filtration_length_oracle(t: &Toy) -> Option<usize> {
    let mut layer: BTreeSet<Elt> = elements(t).into_iter().collect();
    let mut r = 0;
    loop {
        if layer.len() == 1 {
            return Some(r);
        }
        let gens: BTreeSet<Elt> = layer
            .iter()
            .flat_map(|x| t.actions.iter().map(move |a| sub(t, &act(t, a, x), x)))
            .collect();
        let next = span(t, &gens);
        if next.len() == layer.len() {
            return None;
        }
        layer = next;
        r += 1;
    }
}

fn order(s: &homgrow_core::linalg::CokernelStructure) -> BigInt {
    assert_eq!(s.free_rank, 0);
    s.torsion_order()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_homology_is_bounded(seed in any::<u64>(), gi in 0..GROUPS.len(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FinAbGroup::new(GROUPS[gi].to_vec()).unwrap();
        let base = to_module(&random_toy(&mut rng, g.factors(), true));
        let m = rebased(&mut rng, &base);
        let h = group_homology(&g, &m, n).unwrap();
        let dn = resolution_rank(n, g.factors().len());
        let dm = m.d();
        prop_assert_eq!(h.free_rank, 0);
        prop_assert!(h.d() <= dn * dm);
        prop_assert!(h.torsion_order() <= Pow::pow(BigInt::from(g.order()), (dn * dm) as u64));
        let go = BigInt::from(g.order());
        for f in &h.invariant_factors {
            prop_assert!((&go % f).is_zero(), "{} does not divide |G|", f);
        }
    }

    #[test]
    fn cyclic_homology_matches_enumeration(seed in any::<u64>(), ni in 0usize..8, n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_toy(&mut rng, GROUPS[ni], false);
        prop_assume!(elements(&t).len() <= 729);
        let g = FinAbGroup::new(GROUPS[ni].to_vec()).unwrap();
        let m = rebased(&mut rng, &to_module(&t));
        let h = group_homology(&g, &m, n).unwrap();
        prop_assert_eq!(order(&h), BigInt::from(cyclic_homology_order(&t, n)));
    }

    #[test]
    fn filtration_matches_enumeration(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_toy(&mut rng, GROUPS[gi], false);
        prop_assume!(elements(&t).len() <= 64);
        let m = rebased(&mut rng, &to_module(&t));
        let f = augmentation_filtration(&m);
        let expected = filtration_length_oracle(&t);
        prop_assert_eq!(f.length, expected);
        prop_assert_eq!(f.is_nilpotent, expected.is_some());
    }

    #[test]
    fn filtration_length_of_sums_is_the_max(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = to_module(&random_toy(&mut rng, GROUPS[gi], true));
        let b = to_module(&random_toy(&mut rng, GROUPS[gi], true));
        let (la, lb) = (augmentation_filtration(&a).length, augmentation_filtration(&b).length);
        let sum = rebased(&mut rng, &a.direct_sum(&b).unwrap());
        let ls = augmentation_filtration(&sum).length;
        match (la, lb) {
            (Some(x), Some(y)) => {
                prop_assert_eq!(ls, Some(x.max(y)));
                prop_assert!(x.max(y) <= x + y);
            }
            _ => prop_assert_eq!(ls, None),
        }
    }

    #[test]
    fn coinvariant_bounds_hold_for_nilpotent_modules(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = to_module(&random_toy(&mut rng, GROUPS[gi], true));
        let m = rebased(&mut rng, &base);
        let rep = coinvariants(&m);
        if let Some(r) = rep.filtration.length.filter(|&r| r >= 1) {
            prop_assert_eq!(rep.bounds_hold, Some(true), "length {} report {:?}", r, rep);
        }
    }

    #[test]
    fn torsion_free_nilpotent_modules_are_trivial(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let orders = GROUPS[gi];
        let d = rng.gen_range(1..=3);
        let signs: Vec<Vec<i64>> = orders
            .iter()
            .map(|&n| (0..d).map(|_| if n % 2 == 0 && rng.gen_bool(0.5) { -1 } else { 1 }).collect())
            .collect();
        let acts = signs
            .iter()
            .map(|s| {
                let rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| if i == j { s[i] } else { 0 }).collect()).collect();
                IntMatrix::from_rows(&rows)
            })
            .collect();
        let m = rebased(&mut rng, &ModuleWithAction::new(IntMatrix::zeros(d, 0), acts, orders.to_vec()).unwrap());
        let f = augmentation_filtration(&m);
        prop_assert_eq!(f.is_nilpotent, m.acts_trivially());
        prop_assert_eq!(f.is_nilpotent, signs.iter().flatten().all(|&s| s == 1));
    }
}

#[test]
fn resolution_rank_table() {
    let binom = |n: u64, k: u64| -> u64 { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
    for m in 1..=4usize {
        for n in 0..=8usize {
            assert_eq!(resolution_rank(n, m) as u64, binom((n + m - 1) as u64, (m - 1) as u64));
        }
    }
    let g = FinAbGroup::new(vec![2, 2]).unwrap();
    assert_eq!(standard_resolution(&g, 2).ranks, vec![1, 2, 3]);
    let g = FinAbGroup::new(vec![7]).unwrap();
    assert!(standard_resolution(&g, 6).ranks.iter().all(|&r| r == 1));
    let t = standard_resolution(&FinAbGroup::trivial(), 3);
    assert_eq!(t.ranks, vec![1, 0, 0, 0]);
    t.verify_exactness().unwrap();
}

#[test]
fn group_homology_rejects_mismatched_actions() {
    let g = FinAbGroup::new(vec![2, 4]).unwrap();
    let m = ModuleWithAction::trivial(IntMatrix::from_rows(&[[3]]), vec![4, 2]);
    assert!(matches!(group_homology(&g, &m, 1), Err(Error::IncompatibleAction(_))));
}

fn z2_on_z4_complex() -> LaurentChainComplex {
    let t = LaurentPoly::var(1, 0);
    let d1 = PolyMatrix::from_rows(1, vec![vec![t.add(&LaurentPoly::one(1)), LaurentPoly::constant(1, 4)]]).unwrap();
    LaurentChainComplex::new(1, vec![1, 2], vec![d1]).unwrap()
}

#[test]
fn nu_examples() {
    let qc = base_change(&circle_complex(), &QuotientSpec::new(vec![1]).unwrap()).unwrap();
    for n in 0..=1 {
        let r = nu_kernel_cokernel(&qc, n).unwrap();
        assert!(r.map.kernel.is_zero() && r.map.cokernel.is_zero() && r.holds);
    }
    // 0 → ℤ[ℤ/2] → ℤ[ℤ/2] → 0 with t − 1: H_1 is the norm ideal.
    let qc = base_change(&circle_complex(), &QuotientSpec::new(vec![2]).unwrap()).unwrap();
    let r = nu_kernel_cokernel(&qc, 1).unwrap();
    assert_eq!(r.map.kernel_order(), Some(BigInt::one()));
    assert_eq!(r.map.cokernel_order(), Some(BigInt::from(2)));
    assert_eq!(r.kernel_bound, BigInt::one());
    assert_eq!(r.cokernel_bound, BigInt::from(2));
    assert!(r.holds);
    let r0 = nu_kernel_cokernel(&qc, 0).unwrap();
    assert!(r0.map.kernel.is_zero() && r0.map.cokernel.is_zero());
}

#[test]
fn estimate_examples() {
    let qc = base_change(&z2_on_z4_complex(), &QuotientSpec::new(vec![2]).unwrap()).unwrap();
    let h0 = qc.homology_with_action(0).unwrap();
    assert_eq!(h0.structure().invariant_factors, vec![BigInt::from(4)]);
    assert_eq!(augmentation_filtration(&h0).length, Some(2));
    assert!(matches!(verify_estimate_bounds(&qc, 1, 0), Err(Error::HypothesisViolated(_))));
    let rep = verify_estimate_bounds(&qc, 2, 0).unwrap();
    let e = &rep.degrees[0];
    assert_eq!(e.d_hn, 1);
    assert_eq!(e.d_bound, BigInt::from(4));
    assert!((e.ln_kernel - 2f64.ln()).abs() < 1e-12);
    assert_eq!(e.ln_cokernel, 0.0);
    assert!((e.ln_bound - 4.0 * 2f64.ln()).abs() < 1e-12);
    assert!(rep.holds);
}
