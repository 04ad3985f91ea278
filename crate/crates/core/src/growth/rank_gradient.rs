use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// First-homology data of a finitely generated group `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupProfile {
    pub b1_q: u64,
    pub b1_fp: u64,
    pub d_h1: u64,
    pub d_h: u64,
}

impl GroupProfile {
    pub fn new(b1_q: u64, b1_fp: u64, d_h1: u64, d_h: u64) -> Result<Self> {
        if !(b1_q <= b1_fp && b1_fp <= d_h1 && d_h1 <= d_h) {
            return Err(Error::InconsistentProfile(format!(
                "need b1(ℚ) ≤ b1(𝔽_p) ≤ d(H_1) ≤ d(H), got ({b1_q}, {b1_fp}, {d_h1}, {d_h})"
            )));
        }
        Ok(GroupProfile { b1_q, b1_fp, d_h1, d_h })
    }
}

/// The subgroup `G_i` of index `i` in `G = ℤ ∗ H`, the preimage of `iℤ`.
/// Then `G_i ≅ ℤ ∗ H ∗ … ∗ H` (`i` copies of `H`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankGradientLevel {
    pub i: u64,
    pub b1_q: u64,
    pub b1_fp: u64,
    pub d_h1: u64,
    pub d_g: u64,
    pub b1_q_per_i: Ratio<u64>,
    pub b1_fp_per_i: Ratio<u64>,
    pub d_h1_per_i: Ratio<u64>,
    /// `(d(G_i) − 1) / i`.
    pub rank_gradient_term: Ratio<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankGradientReport {
    pub profile: GroupProfile,
    pub levels: Vec<RankGradientLevel>,
    pub lim_b1_q: u64,
    pub lim_b1_fp: u64,
    pub lim_d_h1: u64,
    pub rank_gradient: u64,
    /// `lim b1(ℚ)/i < lim b1(𝔽_p)/i < lim d(H_1)/i < RG`.
    pub strict_chain: bool,
}

/// Closed forms for `G = ℤ ∗ H`: `H_1(G_i) = ℤ ⊕ H_1(H)^i` and
/// `d(G_i) = 1 + i·d(H)` by additivity of `d` under free products.
pub fn rank_gradient_example(profile: GroupProfile, levels: &[u64]) -> Result<RankGradientReport> {
    let profile = GroupProfile::new(profile.b1_q, profile.b1_fp, profile.d_h1, profile.d_h)?;
    if levels.contains(&0) {
        return Err(Error::InvalidArgument("indices must be positive".into()));
    }
    let levels = levels
        .iter()
        .map(|&i| {
            let b1_q = 1 + i * profile.b1_q;
            let b1_fp = 1 + i * profile.b1_fp;
            let d_h1 = 1 + i * profile.d_h1;
            let d_g = 1 + i * profile.d_h;
            RankGradientLevel {
                i,
                b1_q,
                b1_fp,
                d_h1,
                d_g,
                b1_q_per_i: Ratio::new(b1_q, i),
                b1_fp_per_i: Ratio::new(b1_fp, i),
                d_h1_per_i: Ratio::new(d_h1, i),
                rank_gradient_term: Ratio::new(d_g - 1, i),
            }
        })
        .collect();
    Ok(RankGradientReport {
        levels,
        lim_b1_q: profile.b1_q,
        lim_b1_fp: profile.b1_fp,
        lim_d_h1: profile.d_h1,
        rank_gradient: profile.d_h,
        strict_chain: profile.b1_q < profile.b1_fp && profile.b1_fp < profile.d_h1 && profile.d_h1 < profile.d_h,
        profile,
    })
}
