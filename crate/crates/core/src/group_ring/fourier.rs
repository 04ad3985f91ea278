//! Floating-point spectra of base-changed differentials through the
//! characters of `Π ℤ/N_j`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::complex::QuotientSpec;
use super::poly::PolyMatrix;
use crate::linalg::numeric::fsum;

/// `d(χ)` for the character `χ(x_j) = exp(2πi·k_j/N_j)`.
pub fn evaluate_at_character(d: &PolyMatrix, q: &QuotientSpec, k: &[i64]) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(d.rows(), d.cols(), Complex64::new(0.0, 0.0));
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let mut z = Complex64::new(0.0, 0.0);
            for (e, c) in d.get(i, j).to_f64_terms() {
                let mut phase = 0.0;
                for ((&x, &kj), &n) in e.iter().zip(k).zip(q.moduli()) {
                    phase += ((x * kj).rem_euclid(n as i64)) as f64 / n as f64;
                }
                z += Complex64::from_polar(c, std::f64::consts::TAU * phase);
            }
            out[(i, j)] = z;
        }
    }
    out
}

/// All singular values of the base change of `d` to `q`, in descending order.
/// The regular representation splits into characters, so these are the
/// singular values of `d(χ)` over all characters `χ`.
pub fn singular_values(d: &PolyMatrix, q: &QuotientSpec) -> Vec<f64> {
    let mut out = Vec::new();
    if d.rows() == 0 || d.cols() == 0 {
        return out;
    }
    for k in q.elements() {
        let m = evaluate_at_character(d, q, &k);
        out.extend(m.singular_values().iter().copied());
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// `ln det_FK` of the base change, given its exact rank: the sum of the logs
/// of the `rank` largest singular values.
pub fn log_det(d: &PolyMatrix, q: &QuotientSpec, rank: usize) -> f64 {
    let s = singular_values(d, q);
    fsum(s.iter().take(rank).map(|x| x.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::examples::circle_complex;

    #[test]
    fn circle_log_det_is_log_index() {
        let c = circle_complex();
        for i in [2u64, 5, 12] {
            let q = QuotientSpec::new(vec![i]).unwrap();
            let v = log_det(c.differential(1).unwrap(), &q, i as usize - 1);
            assert!((v - (i as f64).ln()).abs() < 1e-9);
        }
    }
}
