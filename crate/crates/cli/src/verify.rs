//! Seeded property suites, one per verified identity or bound.

use std::io::Write;

use clap::ValueEnum;
use homgrow_core::chain::{d_of_abelian_group, d_primewise, homology, verify_rho_identity};
use homgrow_core::corpus::{cyclic_presentation, random_complex, random_laurent_complex, random_matrix, random_module};
use homgrow_core::finite_group_homology::{
    augmentation_filtration, coinvariants, group_homology, nu_kernel_cokernel, resolution_rank, standard_resolution,
    verify_estimate_bounds, FinAbGroup,
};
use homgrow_core::group_ring::{base_change, circle_complex, mapping_torus_complex, s1_cross, torus_complex, QuotientSpec};
use homgrow_core::growth::{diagonal_levels, probe_alpha_vanishing, probe_torsion_growth};
use homgrow_core::linalg::{cokernel_structure, fk_factorization_check};
use homgrow_core::{Error, IntMatrix};
use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{emit, CliError, VerifyArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RhoIdentity,
    FkFactorization,
    DLaws,
    GroupHomology,
    Mu,
    Nu,
    Estimate,
    AlphaVanishing,
    TorsionGrowth,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::RhoIdentity,
        Suite::FkFactorization,
        Suite::DLaws,
        Suite::GroupHomology,
        Suite::Mu,
        Suite::Nu,
        Suite::Estimate,
        Suite::AlphaVanishing,
        Suite::TorsionGrowth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RhoIdentity => "rho-identity",
            Suite::FkFactorization => "fk-factorization",
            Suite::DLaws => "d-laws",
            Suite::GroupHomology => "group-homology",
            Suite::Mu => "mu",
            Suite::Nu => "nu",
            Suite::Estimate => "estimate",
            Suite::AlphaVanishing => "alpha-vanishing",
            Suite::TorsionGrowth => "torsion-growth",
        }
    }

    fn default_count(self) -> usize {
        match self {
            Suite::RhoIdentity => 200,
            Suite::FkFactorization => 500,
            Suite::DLaws | Suite::GroupHomology | Suite::Mu => 100,
            Suite::Nu | Suite::Estimate => 60,
            Suite::AlphaVanishing | Suite::TorsionGrowth => 1,
        }
    }
}

/// Thresholds shared by the convergence suites.
#[derive(Debug, Clone, Copy)]
pub struct Thresholds {
    pub alpha_tail: f64,
    pub torsion_tolerance: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            alpha_tail: 5e-3,
            torsion_tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(suite: Suite) -> Self {
        SuiteResult {
            name: suite.name().into(),
            ..SuiteResult::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 10 {
                self.failures.push(what());
            }
        }
    }

    fn outcome<T>(&mut self, r: Result<T, Error>, label: impl FnOnce() -> String, ok: impl FnOnce(&T) -> bool) {
        match r {
            Ok(v) => {
                let good = ok(&v);
                self.check(good, label);
            }
            Err(Error::HypothesisViolated(_)) => self.skipped += 1,
            Err(e) => self.check(false, || format!("{}: {e}", label())),
        }
    }

    pub fn line(&self) -> String {
        format!("{}: {} passed, {} failed, {} skipped", self.name, self.passed, self.failed, self.skipped)
    }
}

/// Runs one suite with `count` instances (or its default) from `seed`.
pub fn run_suite(suite: Suite, count: Option<usize>, seed: u64, t: Thresholds) -> SuiteResult {
    let n = count.unwrap_or(suite.default_count());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9E37_79B9 * (suite as u64 + 1)));
    let mut res = SuiteResult::new(suite);
    match suite {
        Suite::RhoIdentity => rho_identity(&mut rng, n, &mut res),
        Suite::FkFactorization => fk_factorization(&mut rng, n, &mut res),
        Suite::DLaws => d_laws(&mut rng, n, &mut res),
        Suite::GroupHomology => group_homology_bounds(&mut rng, n, &mut res),
        Suite::Mu => mu(&mut rng, n, &mut res),
        Suite::Nu => nu(&mut rng, n, &mut res),
        Suite::Estimate => estimate(&mut rng, n, &mut res),
        Suite::AlphaVanishing => alpha_vanishing(t.alpha_tail, &mut res),
        Suite::TorsionGrowth => torsion_growth(t.torsion_tolerance, &mut res),
    }
    res
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(args.alpha_tail > 0.0 && args.torsion_tolerance > 0.0) {
        return Err(CliError::Input("thresholds must be positive".into()));
    }
    if args.count == Some(0) {
        return Err(CliError::Input("--count must be at least 1".into()));
    }
    let t = Thresholds {
        alpha_tail: args.alpha_tail,
        torsion_tolerance: args.torsion_tolerance,
    };
    let suites: Vec<Suite> = args.suite.map_or(Suite::ALL.to_vec(), |s| vec![s]);
    let mut text = String::new();
    let mut failed = Vec::new();
    for s in suites {
        let r = run_suite(s, args.count, args.seed, t);
        text.push_str(&r.line());
        text.push('\n');
        for f in &r.failures {
            text.push_str(&format!("  {f}\n"));
        }
        if r.failed > 0 {
            failed.push(r.name);
        }
    }
    emit(&args.out, text.as_bytes(), stdout)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn rho_identity(rng: &mut ChaCha8Rng, n: usize, res: &mut SuiteResult) {
    for k in 0..n {
        let c = random_complex(rng, 8);
        res.outcome(verify_rho_identity(&c), || format!("complex {k} dims {:?}", c.dims()), |_| true);
    }
}

fn fk_factorization(rng: &mut ChaCha8Rng, n: usize, res: &mut SuiteResult) {
    for k in 0..n {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = if rng.gen_bool(0.3) {
            // Rank-deficient products exercise nontrivial kernels.
            let inner = rng.gen_range(1..=r.min(c));
            random_matrix(rng, r, inner, 3).mul(&random_matrix(rng, inner, c, 3)).expect("compatible")
        } else {
            random_matrix(rng, r, c, 5)
        };
        res.outcome(fk_factorization_check(&a), || format!("matrix {k} ({r}x{c})"), |_| true);
    }
}

/// Elements of `⊕ ℤ/orders[j]` as mixed-radix indices.
struct FiniteAbelian {
    orders: Vec<u64>,
    size: usize,
}

impl FiniteAbelian {
    fn new(orders: &[u64]) -> Self {
        FiniteAbelian {
            orders: orders.to_vec(),
            size: orders.iter().product::<u64>() as usize,
        }
    }

    fn digits(&self, mut x: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&o| {
                let d = x as u64 % o;
                x /= o as usize;
                d
            })
            .collect()
    }

    fn index(&self, d: &[u64]) -> usize {
        d.iter().zip(&self.orders).rev().fold(0, |acc, (&x, &o)| acc * o as usize + x as usize)
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.digits(x), self.digits(y));
        let s: Vec<u64> = a.iter().zip(&b).zip(&self.orders).map(|((p, q), o)| (p + q) % o).collect();
        self.index(&s)
    }

    /// `⟨S, x⟩` for a subgroup `S` given as a membership vector.
    fn join(&self, s: &[bool], x: usize) -> Vec<bool> {
        let mut out = s.to_vec();
        let members: Vec<usize> = (0..self.size).filter(|&y| s[y]).collect();
        let mut mult = x;
        while !s[mult] {
            for &y in &members {
                out[self.add(y, mult)] = true;
            }
            mult = self.add(mult, x);
        }
        out
    }

    /// Least number of generators, by breadth-first search over the
    /// subgroups generated by `k` elements.
    fn brute_force_d(&self) -> usize {
        let mut zero = vec![false; self.size];
        zero[0] = true;
        let mut layer = std::collections::BTreeSet::from([zero]);
        for k in 0.. {
            if layer.iter().any(|s| s.iter().all(|&b| b)) {
                return k;
            }
            layer = layer.iter().flat_map(|s| (0..self.size).map(move |x| self.join(s, x))).collect();
        }
        unreachable!()
    }
}

fn random_orders(rng: &mut ChaCha8Rng) -> Vec<u64> {
    loop {
        let k = rng.gen_range(1..=4);
        let orders: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=12)).collect();
        if orders.iter().product::<u64>() <= 200 {
            return orders;
        }
    }
}

fn d_laws(rng: &mut ChaCha8Rng, n: usize, res: &mut SuiteResult) {
    for _ in 0..n {
        let orders = random_orders(rng);
        let m = FiniteAbelian::new(&orders);
        let s = cokernel_structure(&cyclic_presentation(&orders));
        let formula = d_of_abelian_group(&s.invariant_factors, s.free_rank);
        let cyclic: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        let brute = m.brute_force_d();
        let log2 = (m.size as f64).log2();
        res.check(
            brute == formula && d_primewise(&cyclic, 0) == formula && formula as f64 <= log2 + 1e-12,
            || format!("orders {orders:?}: search {brute}, formula {formula}"),
        );
    }
    let library = [
        (circle_complex(), vec![vec![1], vec![2], vec![3], vec![6]]),
        (torus_complex(2), vec![vec![2, 2], vec![2, 4], vec![3, 3]]),
        (torus_complex(3), vec![vec![2, 2, 2]]),
        (s1_cross(), vec![vec![1], vec![2], vec![4]]),
        (
            mapping_torus_complex(&IntMatrix::from_rows(&[[2, 1], [1, 1]])).expect("square"),
            vec![vec![1], vec![2], vec![3], vec![5]],
        ),
    ];
    for (c, levels) in library {
        for moduli in levels {
            let q = QuotientSpec::new(moduli.clone()).expect("positive moduli");
            let h = homology(&base_change(&c, &q).expect("matching rank").complex, &[]);
            for g in &h.degrees {
                for p in [2, 3, 5] {
                    let b = g.dim_tensor_fp(p);
                    res.check(
                        g.betti_q <= b && b <= g.d_hn && g.d_hn as f64 <= g.betti_q as f64 + g.log_tors / 2f64.ln() + 1e-9,
                        || format!("sandwich at {moduli:?}, degree {}, p = {p}", g.degree),
                    );
                }
            }
        }
    }
}

const SMALL_GROUPS: &[&[u64]] = &[
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
    &[2, 2, 2, 2],
];

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn group_homology_bounds(rng: &mut ChaCha8Rng, count: usize, res: &mut SuiteResult) {
    for factors in SMALL_GROUPS {
        let g = FinAbGroup::new(factors.to_vec()).expect("chained factors");
        let m = factors.len();
        let resolution = standard_resolution(&g, 4);
        let ranks_ok = (0..=4).all(|n| resolution.ranks[n] as u64 == binom((n + m - 1) as u64, (m - 1) as u64))
            && (0..=4).all(|n| resolution_rank(n, m) == resolution.ranks[n]);
        res.check(ranks_ok && resolution.verify_exactness().is_ok(), || {
            format!("resolution of {factors:?}")
        });
    }
    for _ in 0..count {
        let factors = SMALL_GROUPS[rng.gen_range(0..SMALL_GROUPS.len())];
        let g = FinAbGroup::new(factors.to_vec()).expect("chained factors");
        let module = random_module(rng, factors, 3, true);
        let dm = module.d();
        let n = rng.gen_range(1..=4);
        res.outcome(
            group_homology(&g, &module, n),
            || format!("H_{n}({factors:?}; M) with d(M) = {dm}"),
            |h| {
                let dn = resolution_rank(n, factors.len());
                let order = BigInt::from(g.order());
                h.free_rank == 0
                    && h.invariant_factors.iter().all(|f| (&order % f).is_zero())
                    && h.torsion_order() <= Pow::pow(order.clone(), (dn * dm) as u64)
                    && h.d() <= dn * dm
            },
        );
    }
}

const NILPOTENT_GROUPS: &[&[u64]] = &[&[2], &[4], &[2, 2]];

fn mu(rng: &mut ChaCha8Rng, count: usize, res: &mut SuiteResult) {
    for _ in 0..count {
        let factors = NILPOTENT_GROUPS[rng.gen_range(0..NILPOTENT_GROUPS.len())];
        let module = random_module(rng, factors, 3, false);
        let report = coinvariants(&module);
        match report.bounds_hold {
            Some(ok) => res.check(ok, || format!("μ bounds over {factors:?}: {report:?}")),
            None => res.skipped += 1,
        }
    }
}

fn quotient_of(rng: &mut ChaCha8Rng) -> QuotientSpec {
    let moduli = NILPOTENT_GROUPS[rng.gen_range(0..NILPOTENT_GROUPS.len())].to_vec();
    QuotientSpec::new(moduli).expect("positive moduli")
}

fn nu(rng: &mut ChaCha8Rng, count: usize, res: &mut SuiteResult) {
    for k in 0..count {
        let q = quotient_of(rng);
        let c = random_laurent_complex(rng, q.num_vars());
        let qc = base_change(&c, &q).expect("matching rank");
        for n in 0..=c.top_degree() {
            res.outcome(nu_kernel_cokernel(&qc, n), || format!("ν_{n} on complex {k} over {:?}", q.moduli()), |r| r.holds);
        }
    }
}

fn estimate(rng: &mut ChaCha8Rng, count: usize, res: &mut SuiteResult) {
    for k in 0..count {
        let q = quotient_of(rng);
        let c = random_laurent_complex(rng, q.num_vars());
        let qc = base_change(&c, &q).expect("matching rank");
        let top = c.top_degree();
        let mut r = Some(1);
        for p in 0..=top {
            match (r, qc.homology_with_action(p).map(|h| augmentation_filtration(&h).length)) {
                (Some(cur), Ok(Some(l))) => r = Some(cur.max(l)),
                _ => r = None,
            }
        }
        let Some(r) = r else {
            res.skipped += 1;
            continue;
        };
        res.outcome(
            verify_estimate_bounds(&qc, r, top),
            || format!("estimate on complex {k} over {:?} with r = {r}", q.moduli()),
            |e| e.holds,
        );
    }
}

fn alpha_vanishing(threshold: f64, res: &mut SuiteResult) {
    let towers = [
        (circle_complex(), diagonal_levels(1, &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024])),
        (torus_complex(2), diagonal_levels(2, &[1, 2, 4, 8, 16, 32])),
    ];
    for (c, levels) in towers {
        let levels = levels.expect("positive indices");
        for n in 0..=c.top_degree() {
            res.outcome(
                probe_alpha_vanishing(&c, &levels, n, threshold),
                || format!("α_{n} over ℤ^{}", c.num_vars()),
                |p| p.holds,
            );
        }
    }
}

fn torsion_growth(tolerance: f64, res: &mut SuiteResult) {
    let a = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
    let levels: Vec<u64> = (1..=50).collect();
    match probe_torsion_growth(&a, &levels) {
        Ok(p) => {
            for l in &p.levels {
                res.check(l.exact_match, || format!("cat map level {}: {:?} vs {}", l.i, l.torsion_order, l.oracle_det));
            }
            let last = p.levels.last().expect("nonempty");
            let value = last.ln_tors_per_i.unwrap_or(f64::NAN);
            let target = ((3.0 + 5f64.sqrt()) / 2.0).ln();
            let oracle = last.oracle_per_i.unwrap_or(f64::NAN);
            res.check((value - target).abs() < tolerance && (value - oracle).abs() < tolerance, || {
                format!("cat map at i = 50: {value} vs {target} and {oracle}")
            });
        }
        Err(e) => res.check(false, || format!("cat map: {e}")),
    }
}
