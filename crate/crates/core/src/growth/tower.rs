use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::homology;
use crate::error::{Error, Result};
use crate::group_ring::{base_change, fourier, operator_norm_bound, LaurentChainComplex, QuotientSpec};
use crate::linalg::fk_determinant;
use crate::linalg::numeric::fsum;

/// Invariants of `H_n(C[i])` and of `c_n[i]` at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeInvariants {
    pub degree: usize,
    pub betti_q: usize,
    pub betti_mod_p: BTreeMap<u64, usize>,
    pub d_hn: usize,
    pub ln_tors: f64,
    /// `ln det_FK(c_n[i])`; zero in degree 0.
    pub ln_det_c: f64,
    pub ln_det_alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetMethod {
    Exact,
    Fourier,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub level_index: usize,
    pub moduli: Vec<u64>,
    pub index: u64,
    pub degrees: Vec<DegreeInvariants>,
    pub rho_z: f64,
    pub rho_2: f64,
    /// `ρ^ℤ − ρ^(2) − Σ_n (−1)^n ln det α_n`, over all degrees.
    pub rho_identity_gap: f64,
    pub det_method: DetMethod,
    /// Some `b_n(C[i]; ℚ)` exceeds `b_n(ℤ ⊗_{ℤG} C[i]; ℚ)`, i.e. the deck
    /// group acts nontrivially on rational homology.
    pub degenerate: bool,
}

impl LevelReport {
    pub fn per_index(&self, x: f64) -> f64 {
        x / self.index as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerConfig {
    pub primes: Vec<u64>,
    /// Degrees above this are computed for the torsions but not reported.
    pub max_degree: usize,
    pub jobs: usize,
    /// Levels whose chain modules all have rank at most this use exact
    /// Fuglede–Kadison determinants; larger ones use the character spectrum.
    pub exact_det_max_dim: usize,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig {
            primes: vec![2, 3],
            max_degree: usize::MAX,
            jobs: 1,
            exact_det_max_dim: 96,
        }
    }
}

/// Last value and a tail fit of one normalized sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub quantity: String,
    pub degree: Option<usize>,
    pub last: f64,
    /// Aitken Δ² extrapolation from the last three levels.
    pub tail_fit: f64,
    /// `|a_last − a_prev| < |a_prev − a_prevprev|`, or both differences zero.
    pub cauchy: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TowerReport {
    pub primes: Vec<u64>,
    pub max_degree: usize,
    pub lambda: f64,
    pub levels: Vec<LevelReport>,
    pub limits: Vec<LimitEstimate>,
    /// Every normalized quantity lies in `[−Λ, Λ]`.
    pub within_lambda: bool,
    /// `ln det_FK(c_n[i]) ≥ 0` and `ln |tors H_n(C[i])| ≥ 0` everywhere.
    pub nonnegative: bool,
    pub rho_identity_holds: bool,
}

/// `Λ = 4·Σ_n max(ln K_n, 1)·dim_{ℤG} C_n` with `K_n` the ℓ¹ bound on `‖c_n‖`,
/// and `K_0` contributing the term `1`.
pub fn bound_lambda(c: &LaurentChainComplex) -> f64 {
    let terms = c.dims().iter().enumerate().map(|(n, &dim)| {
        let k = if n == 0 {
            1.0
        } else {
            operator_norm_bound(&c.differentials()[n - 1]).ln().max(1.0)
        };
        k * dim as f64
    });
    4.0 * fsum(terms)
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// All invariants of `C[i]` for one quotient.
pub fn compute_level(
    c: &LaurentChainComplex,
    q: &QuotientSpec,
    level_index: usize,
    config: &TowerConfig,
) -> Result<LevelReport> {
    let qc = base_change(c, q)?;
    let cx = &qc.complex;
    let top = cx.top_degree();
    let h = homology(cx, &config.primes);
    let aug = qc.coinvariants();
    let h_aug = homology(&aug, &[]);
    let mut ranks = vec![0; top + 2];
    for n in (1..=top).rev() {
        ranks[n] = cx.dim(n) - h.degree(n).betti_q - ranks[n + 1];
    }
    let exact = cx.dims().iter().all(|&d| d <= config.exact_det_max_dim);
    let mut ln_det = vec![0.0; top + 1];
    for n in 1..=top {
        ln_det[n] = if exact {
            fk_determinant(cx.differential(n)?).log_value
        } else {
            fourier::log_det(c.differential(n)?, q, ranks[n])
        };
    }
    let degrees: Vec<DegreeInvariants> = (0..=top)
        .map(|n| {
            let g = h.degree(n);
            DegreeInvariants {
                degree: n,
                betti_q: g.betti_q,
                betti_mod_p: g.betti_mod_p.clone(),
                d_hn: g.d_hn,
                ln_tors: g.log_tors,
                ln_det_c: ln_det[n],
                ln_det_alpha: qc.alpha_degree(n, g.betti_q, &aug).log_det_alpha,
            }
        })
        .collect();
    let rho_z = fsum(degrees.iter().map(|d| sign(d.degree) * d.ln_tors));
    let rho_2 = 0.0 - fsum((1..=top).map(|n| sign(n) * ln_det[n]));
    let alpha_sum = fsum(degrees.iter().map(|d| sign(d.degree) * d.ln_det_alpha));
    let degenerate = (0..=top).any(|n| h.degree(n).betti_q != h_aug.degree(n).betti_q);
    let mut degrees = degrees;
    degrees.truncate(config.max_degree.saturating_add(1));
    Ok(LevelReport {
        level_index,
        moduli: q.moduli().to_vec(),
        index: q.index(),
        degrees,
        rho_z,
        rho_2,
        rho_identity_gap: rho_z - rho_2 - alpha_sum,
        det_method: if exact { DetMethod::Exact } else { DetMethod::Fourier },
        degenerate,
    })
}

fn tail(quantity: String, degree: Option<usize>, values: &[f64]) -> LimitEstimate {
    let last = *values.last().expect("levels are nonempty");
    if values.len() < 3 {
        return LimitEstimate {
            quantity,
            degree,
            last,
            tail_fit: last,
            cauchy: None,
        };
    }
    let [a1, a2, a3] = [values[values.len() - 3], values[values.len() - 2], last];
    let (d1, d2) = (a2 - a1, a3 - a2);
    let denom = d2 - d1;
    let fit = a3 - d2 * d2 / denom;
    LimitEstimate {
        quantity,
        degree,
        last,
        tail_fit: if denom != 0.0 && fit.is_finite() { fit } else { a3 },
        cauchy: Some(d2.abs() < d1.abs() || (d1 == 0.0 && d2 == 0.0)),
    }
}

/// Named normalized quantities of one degree, in CSV column order.
pub(crate) fn degree_quantities(level: &LevelReport, d: &DegreeInvariants, primes: &[u64]) -> Vec<(String, f64)> {
    let mut out = vec![("betti_q".to_string(), d.betti_q as f64)];
    for p in primes {
        out.push((format!("betti_p_{p}"), d.betti_mod_p[p] as f64));
    }
    out.push(("d_hn".into(), d.d_hn as f64));
    out.push(("ln_tors".into(), d.ln_tors));
    out.push(("ln_det_c".into(), d.ln_det_c));
    out.push(("ln_det_alpha".into(), d.ln_det_alpha));
    out.into_iter().map(|(k, v)| (k, level.per_index(v))).collect()
}

/// Runs every level of the tower, in parallel over `config.jobs` threads.
/// Results are merged by level index, so the report does not depend on
/// the number of threads.
pub fn run_tower(c: &LaurentChainComplex, levels: &[QuotientSpec], config: &TowerConfig) -> Result<TowerReport> {
    if levels.is_empty() {
        return Err(Error::InvalidArgument("a tower needs at least one level".into()));
    }
    if levels.windows(2).any(|w| w[1].index() <= w[0].index()) {
        return Err(Error::InvalidArgument("tower indices must increase strictly".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let reports: Vec<LevelReport> = pool.install(|| {
        levels
            .par_iter()
            .enumerate()
            .map(|(k, q)| compute_level(c, q, k, config))
            .collect::<Result<Vec<_>>>()
    })?;
    let lambda = bound_lambda(c);
    let max_degree = config.max_degree.min(c.top_degree());
    let mut limits = Vec::new();
    for n in 0..=max_degree {
        let columns: Vec<Vec<(String, f64)>> = reports
            .iter()
            .map(|l| degree_quantities(l, &l.degrees[n], &config.primes))
            .collect();
        for j in 0..columns[0].len() {
            let values: Vec<f64> = columns.iter().map(|c| c[j].1).collect();
            limits.push(tail(columns[0][j].0.clone(), Some(n), &values));
        }
    }
    let rhos: [(&str, fn(&LevelReport) -> f64); 2] = [("rho_z", |l| l.rho_z), ("rho_2", |l| l.rho_2)];
    for (name, f) in rhos {
        let values: Vec<f64> = reports.iter().map(|l| l.per_index(f(l))).collect();
        limits.push(tail(name.into(), None, &values));
    }
    let mut within_lambda = true;
    let mut nonnegative = true;
    let mut rho_identity_holds = true;
    for l in &reports {
        for d in &l.degrees {
            for (_, v) in degree_quantities(l, d, &config.primes) {
                within_lambda &= v.abs() <= lambda;
            }
            nonnegative &= d.ln_det_c >= -1e-9 && d.ln_tors >= 0.0;
        }
        within_lambda &= l.per_index(l.rho_z).abs() <= lambda && l.per_index(l.rho_2).abs() <= lambda;
        let scale = l.rho_z.abs().max(l.rho_2.abs()).max(1.0);
        rho_identity_holds &= l.rho_identity_gap.abs() <= 1e-8 * scale;
    }
    Ok(TowerReport {
        primes: config.primes.clone(),
        max_degree,
        lambda,
        levels: reports,
        limits,
        within_lambda,
        nonnegative,
        rho_identity_holds,
    })
}

/// `(i, …, i)` for each `i`, the default tower over `ℤ^m`.
pub fn diagonal_levels(m: usize, indices: &[u64]) -> Result<Vec<QuotientSpec>> {
    indices.iter().map(|&i| QuotientSpec::uniform(m, i)).collect()
}
