use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::chain::homology_degree;
use crate::error::{Error, Result};
use crate::group_ring::examples::det_power_minus_identity;
use crate::group_ring::{base_change, mapping_torus_complex, LaurentChainComplex, QuotientSpec};
use crate::linalg::numeric::{fsum, ln_bigint};
use crate::IntMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaLevel {
    pub moduli: Vec<u64>,
    pub index: u64,
    /// `|ln det α_n[i]| / [G : G_i]`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaProbe {
    pub degree: usize,
    pub levels: Vec<AlphaLevel>,
    /// The last three values do not increase.
    pub monotone_tail: bool,
    pub final_value: f64,
    pub threshold: f64,
    pub holds: bool,
}

/// Normalized `|ln det α_n|` along a tower, for complexes whose deck action
/// on `ℚ ⊗ H_n(C[i])` is trivial at every level. Triviality is checked by
/// comparing `b_n(C[i])` with `b_n(ℤ ⊗_{ℤG} C[i])`, which agree exactly when
/// the invariants of `ℚ ⊗ H_n(C[i])` are everything.
pub fn probe_alpha_vanishing(
    c: &LaurentChainComplex,
    levels: &[QuotientSpec],
    n: usize,
    threshold: f64,
) -> Result<AlphaProbe> {
    if n > c.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            top: c.top_degree(),
        });
    }
    if levels.is_empty() {
        return Err(Error::InvalidArgument("a tower needs at least one level".into()));
    }
    let mut out = Vec::with_capacity(levels.len());
    for q in levels {
        let qc = base_change(c, q)?;
        let aug = qc.coinvariants();
        let b = homology_degree(&qc.complex, n, &[]).betti_q;
        let b_aug = homology_degree(&aug, n, &[]).betti_q;
        if b != b_aug {
            return Err(Error::HypothesisViolated(format!(
                "deck action on rational H_{n} is nontrivial at moduli {:?}",
                q.moduli()
            )));
        }
        let a = qc.alpha_degree(n, b, &aug);
        out.push(AlphaLevel {
            moduli: q.moduli().to_vec(),
            index: q.index(),
            value: a.log_det_alpha.abs() / q.index() as f64,
        });
    }
    let tail = &out[out.len().saturating_sub(3)..];
    let monotone_tail = tail.windows(2).all(|w| w[1].value <= w[0].value + 1e-12);
    let final_value = out.last().expect("nonempty").value;
    Ok(AlphaProbe {
        degree: n,
        monotone_tail,
        final_value,
        threshold,
        holds: monotone_tail && final_value < threshold,
        levels: out,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionLevel {
    pub i: u64,
    /// `det(A^i − I)`.
    pub oracle_det: BigInt,
    /// `|tors H_0(C[i])|` from the pipeline; `None` on a degenerate level.
    pub torsion_order: Option<BigInt>,
    pub exact_match: bool,
    pub ln_tors_per_i: Option<f64>,
    pub oracle_per_i: Option<f64>,
    pub gap_to_mahler: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionProbe {
    /// `ln M(det(t − A))` from the eigenvalues of `A`.
    pub ln_mahler: f64,
    pub levels: Vec<TorsionLevel>,
    pub degenerate_levels: Vec<u64>,
}

/// `Σ_λ ln max(1, |λ|)` over the eigenvalues of `A`, the logarithmic Mahler
/// measure of its (monic) characteristic polynomial.
pub fn log_mahler_measure(a: &IntMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NonSquareMatrix {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let rows = a.to_f64_rows();
    let m = DMatrix::from_fn(a.rows(), a.cols(), |i, j| rows[i][j]);
    Ok(fsum(m.complex_eigenvalues().iter().map(|z| z.norm().ln().max(0.0))))
}

/// `ln |tors H_0|` of the `i`-fold cyclic covers of the mapping torus of `A`,
/// compared with `ln |det(A^i − I)|` and with the Mahler measure. Levels with
/// `det(A^i − I) = 0` are kept, flagged, and carry no pipeline values.
pub fn probe_torsion_growth(a: &IntMatrix, levels: &[u64]) -> Result<TorsionProbe> {
    let ln_mahler = log_mahler_measure(a)?;
    let c = mapping_torus_complex(a)?;
    let mut out = Vec::with_capacity(levels.len());
    let mut degenerate_levels = Vec::new();
    for &i in levels {
        let e = u32::try_from(i).map_err(|_| Error::InvalidArgument(format!("level {i} too large")))?;
        let oracle_det = det_power_minus_identity(a, e)?;
        if oracle_det.is_zero() {
            degenerate_levels.push(i);
            out.push(TorsionLevel {
                i,
                oracle_det,
                torsion_order: None,
                exact_match: false,
                ln_tors_per_i: None,
                oracle_per_i: None,
                gap_to_mahler: None,
                degenerate: true,
            });
            continue;
        }
        let qc = base_change(&c, &QuotientSpec::new(vec![i])?)?;
        let h0 = homology_degree(&qc.complex, 0, &[]);
        let order = h0.torsion_order();
        let ln_tors = h0.log_tors / i as f64;
        out.push(TorsionLevel {
            i,
            exact_match: h0.betti_q == 0 && order == oracle_det.abs(),
            torsion_order: Some(order),
            ln_tors_per_i: Some(ln_tors),
            oracle_per_i: Some(ln_bigint(&oracle_det.abs()) / i as f64),
            gap_to_mahler: Some((ln_tors - ln_mahler).abs()),
            oracle_det,
            degenerate: false,
        });
    }
    Ok(TorsionProbe {
        ln_mahler,
        levels: out,
        degenerate_levels,
    })
}

/// `DegenerateLevel` for the first flagged level of a probe, if any.
pub fn first_degenerate(probe: &TorsionProbe) -> Option<Error> {
    probe.degenerate_levels.first().map(|&level| Error::DegenerateLevel {
        level,
        reason: "det(A^i − I) = 0".into(),
    })
}
