use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// The constants `C_0, C_1, D_0, D_1` at `(r, n, p)`.
///
/// `C_0(r,n,n) = r·2^{r−1}`, `C_1(r,n,n) = r − 1`, and for `p < n`
/// `C_0(r,n,p) = Σ_{i=p}^{n−1} r·2^r·n^{n+1}·C_0(r,i,p)`,
/// `C_1(r,n,p) = n + r + max_{p≤i<n} C_1(r,i,p)`.
///
/// `D_0 = (r−1)·C_0(r,n,p) + Σ_{i=1}^{n−p} n^{n+1}·C_0(r,n−i,p)` and
/// `D_1 = max(1 + C_1(r,n,p), n + 1 + max_i C_1(r,n−i,p))` dominate both the
/// `ker μ` and the `ker ν` / `coker ν` contributions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstimateConstants {
    pub c0: BigInt,
    pub c1: u64,
    pub d0: BigInt,
    pub d1: u64,
}

/// `C_0(r, k, p)` and `C_1(r, k, p)` for `k = p..=n`.
fn c_tables(r: u64, n: u64, p: u64) -> (Vec<BigInt>, Vec<u64>) {
    let mut c0 = vec![BigInt::from(r) * Pow::pow(BigInt::from(2), r - 1)];
    let mut c1 = vec![r - 1];
    for k in p + 1..=n {
        let coef = BigInt::from(r) * Pow::pow(BigInt::from(2), r) * Pow::pow(BigInt::from(k), k + 1);
        let sum: BigInt = c0.iter().map(|c| &coef * c).sum();
        let max = *c1.iter().max().expect("nonempty");
        c0.push(sum);
        c1.push(k + r + max);
    }
    (c0, c1)
}

pub fn estimate_constants(r: u64, n: u64, p: u64) -> Result<EstimateConstants> {
    if r == 0 {
        return Err(Error::InvalidArgument("filtration bound r must be at least 1".into()));
    }
    if p > n {
        return Err(Error::InvalidArgument(format!("need p ≤ n, got p = {p}, n = {n}")));
    }
    let (c0, c1) = c_tables(r, n, p);
    let top = (n - p) as usize;
    let nn = Pow::pow(BigInt::from(n), n + 1);
    let mut d0 = BigInt::from(r - 1) * &c0[top];
    let mut d1 = 1 + c1[top];
    let mut nu_sum = BigInt::zero();
    let mut nu_max = None;
    for i in 1..=top {
        nu_sum += &nn * &c0[top - i];
        nu_max = Some(nu_max.unwrap_or(0).max(c1[top - i]));
    }
    d0 += nu_sum;
    if let Some(mx) = nu_max {
        d1 = d1.max(n + 1 + mx);
    }
    Ok(EstimateConstants {
        c0: c0[top].clone(),
        c1: c1[top],
        d0,
        d1,
    })
}
