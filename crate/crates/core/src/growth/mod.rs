//! Normalized invariants along towers of finite quotients of `ℤ^m`.

mod probes;
mod rank_gradient;
mod report;
mod tower;

pub use probes::{
    first_degenerate, log_mahler_measure, probe_alpha_vanishing, probe_torsion_growth, AlphaLevel, AlphaProbe,
    TorsionLevel, TorsionProbe,
};
pub use rank_gradient::{rank_gradient_example, GroupProfile, RankGradientLevel, RankGradientReport};
pub use tower::{
    bound_lambda, compute_level, diagonal_levels, run_tower, DegreeInvariants, DetMethod, LevelReport,
    LimitEstimate, TowerConfig, TowerReport,
};
