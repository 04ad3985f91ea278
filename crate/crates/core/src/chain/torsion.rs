//! Integral torsion, L²-torsion over the trivial group and the α_n maps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::homology::smith_forms;
use super::IntChainComplex;
use crate::error::{Error, Result};
use crate::linalg::numeric::{fsum, ln_bigint, ln_rational, rational_pow};
use crate::linalg::sparse::transpose_echelon;
use crate::linalg::{
    bareiss_determinant, fk_determinant, gram_determinant, hnf_basis, kernel_basis, kernel_lattice,
    smith_with_transforms, solve_rational, IntMatrix, Lattice,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralTorsion {
    pub value: f64,
    /// `|tors H_n|` per degree.
    pub torsion_orders: Vec<BigInt>,
    /// `Π_n |tors H_n|^{(−1)^n}`.
    pub exact: BigRational,
}

/// `ρ^ℤ(C) = Σ_n (−1)^n ln |tors H_n(C)|`.
pub fn rho_z(c: &IntChainComplex) -> IntegralTorsion {
    let forms = smith_forms(c);
    let orders: Vec<BigInt> = (0..=c.top_degree())
        .map(|n| {
            forms
                .get(n)
                .map_or_else(BigInt::one, |s| s.invariant_factors.iter().product())
        })
        .collect();
    integral_torsion_from_orders(orders)
}

pub(crate) fn integral_torsion_from_orders(orders: Vec<BigInt>) -> IntegralTorsion {
    let mut value = 0.0;
    let mut exact = BigRational::one();
    for (n, t) in orders.iter().enumerate() {
        let e = if n % 2 == 0 { 1 } else { -1 };
        value += e as f64 * ln_bigint(t);
        exact *= rational_pow(&BigRational::from(t.clone()), e);
    }
    IntegralTorsion {
        value,
        torsion_orders: orders,
        exact,
    }
}

/// `Δ_n = c_nᵀ c_n + c_{n+1} c_{n+1}ᵀ`.
pub fn laplacian(c: &IntChainComplex, n: usize) -> Result<IntMatrix> {
    if n > c.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            top: c.top_degree(),
        });
    }
    let down = c.boundary(n);
    let up = c.boundary(n + 1);
    down.transpose().mul(&down)?.add(&up.mul(&up.transpose())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2Torsion {
    pub value: f64,
    /// `ln det c_n` for `n = 1..=top` (index `n − 1`).
    pub log_det_c: Vec<f64>,
    /// `det(c_n)²` exactly.
    pub squares: Vec<BigRational>,
    /// The same torsion recomputed from Laplacians.
    pub laplacian_value: f64,
}

/// `ρ^(2) = −Σ_{n≥1} (−1)^n ln det c_n`, cross-checked against
/// `−½ Σ_n (−1)^n n ln det Δ_n`.
pub fn rho_2(c: &IntChainComplex) -> Result<L2Torsion> {
    let dets: Vec<_> = c.differentials().iter().map(fk_determinant).collect();
    let value = 0.0 - fsum(dets.iter().enumerate().map(|(k, d)| sign(k + 1) * d.log_value));
    let mut lap = 0.0;
    for n in 1..=c.top_degree() {
        let l = fk_determinant(&laplacian(c, n)?).log_value;
        lap += sign(n) * n as f64 * l;
    }
    let laplacian_value = 0.0 - 0.5 * lap;
    if (value - laplacian_value).abs() > 1e-9 * value.abs().max(1.0) {
        return Err(Error::identity(
            "Laplacian form of the L2-torsion",
            format!("{value} from differentials, {laplacian_value} from Laplacians"),
        ));
    }
    Ok(L2Torsion {
        value,
        log_det_c: dets.iter().map(|d| d.log_value).collect(),
        squares: dets.into_iter().map(|d| d.square_exact).collect(),
        laplacian_value,
    })
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaDegree {
    pub degree: usize,
    pub log_det_alpha: f64,
    pub square_exact: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaData {
    pub degrees: Vec<AlphaDegree>,
}

impl AlphaData {
    /// `Σ_n (−1)^n ln det α_n`.
    pub fn alternating_sum(&self) -> f64 {
        fsum(self.degrees.iter().map(|a| sign(a.degree) * a.log_det_alpha))
    }
}

pub fn alpha_log_dets(c: &IntChainComplex) -> AlphaData {
    AlphaData {
        degrees: (0..=c.top_degree()).map(|n| alpha_degree(c, n)).collect(),
    }
}

/// Integer basis of the harmonic space `ker c_n ∩ ker c_{n+1}ᵀ`.
fn harmonic_basis(c: &IntChainComplex, n: usize) -> IntMatrix {
    let stacked = c
        .boundary(n)
        .vstack(&c.boundary(n + 1).transpose())
        .expect("both act on C_n");
    kernel_basis(&stacked)
}

/// `det(α_n)²` through the harmonic lattice.
///
/// Orthogonal projection onto `ker Δ_n` kills exactly the saturated boundaries,
/// so it maps `ker c_n` onto a lattice isomorphic to `H_n(C)_f`. With an integer
/// harmonic basis `K_h`, the image is `K_h M⁻¹ Λ` where `M = K_hᵀK_h` and
/// `Λ = K_hᵀ(ker c_n)`, whose squared covolume is `det(Λ)² / det M`.
pub fn alpha_degree(c: &IntChainComplex, n: usize) -> AlphaDegree {
    alpha_from_harmonic(c, n, &harmonic_basis(c, n))
}

/// [`alpha_degree`] with a caller-supplied rational basis `kh` of the
/// harmonic space. The result does not depend on the choice of basis.
pub fn alpha_from_harmonic(c: &IntChainComplex, n: usize, kh: &IntMatrix) -> AlphaDegree {
    let h = kh.cols();
    if h == 0 {
        return AlphaDegree {
            degree: n,
            log_det_alpha: 0.0,
            square_exact: BigRational::one(),
        };
    }
    let cycles = transpose_echelon(&c.boundary(n), true).kernel;
    let images: Vec<Vec<BigInt>> = cycles
        .iter()
        .map(|z| {
            (0..h)
                .map(|i| z.iter().map(|(k, v)| &kh[(*k, i)] * v).sum())
                .collect()
        })
        .collect();
    let w = hnf_basis(&IntMatrix::from_columns(h, &images));
    assert_eq!(w.cols(), h, "harmonic projection of the cycles has full rank");
    let det_w: BigInt = (0..h).map(|j| w[(j, j)].clone()).product();
    let m = kh.transpose().mul(kh).expect("shapes agree");
    let det_m = bareiss_determinant(&m).expect("square");
    let square = BigRational::new(&det_w * &det_w, det_m);
    AlphaDegree {
        degree: n,
        log_det_alpha: 0.5 * ln_rational(&square),
        square_exact: square,
    }
}

/// `det(α_n)²` by lifting a Smith basis of `H_n(C)_f` to integer cycles and
/// taking the Gram determinant of their harmonic projections. Slower than
/// [`alpha_degree`]; used as a cross-check.
pub fn alpha_cycle_lift_square(c: &IntChainComplex, n: usize) -> BigRational {
    let kz = kernel_lattice(&c.boundary(n));
    let lattice = Lattice::from_generators(&kz);
    let y = lattice
        .coordinate_matrix(&c.boundary(n + 1))
        .expect("boundaries are cycles");
    let s = smith_with_transforms(&y);
    let ui = s.left_inverse.as_ref().expect("transforms present");
    let free: Vec<usize> = (s.rank..y.rows()).collect();
    let lifts = lattice.basis().mul(&ui.select_columns(&free)).expect("shapes agree");
    if lifts.cols() == 0 {
        return BigRational::one();
    }
    let kh = harmonic_basis(c, n);
    let m = kh.transpose().mul(&kh).expect("shapes agree");
    let projections: Vec<Vec<BigRational>> = (0..lifts.cols())
        .map(|j| {
            let rhs = kh.transpose().mul_vec(&lifts.column(j));
            let y = solve_rational(&m, &rhs).expect("harmonic Gram matrix is nonsingular");
            (0..kh.rows())
                .map(|i| {
                    (0..kh.cols()).fold(BigRational::zero(), |acc, k| {
                        acc + BigRational::from(kh[(i, k)].clone()) * &y[k]
                    })
                })
                .collect()
        })
        .collect();
    gram_determinant(&projections).expect("common dimension")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoIdentityReport {
    pub rho_z: f64,
    pub rho_2: f64,
    pub alpha_alternating_sum: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `exp(2·lhs)` and `exp(2·rhs)` as exact rationals.
    pub lhs_square: BigRational,
    pub rhs_square: BigRational,
}

/// Checks `ρ^ℤ(C) − ρ^(2)(C) = Σ_n (−1)^n ln det α_n`, numerically and on
/// squared exponentials.
pub fn verify_rho_identity(c: &IntChainComplex) -> Result<RhoIdentityReport> {
    let rz = rho_z(c);
    let r2 = rho_2(c)?;
    let alpha = alpha_log_dets(c);
    let mut lhs_square = rational_pow(&rz.exact, 2);
    for (k, sq) in r2.squares.iter().enumerate() {
        lhs_square *= rational_pow(sq, if (k + 1) % 2 == 0 { 1 } else { -1 });
    }
    let mut rhs_square = BigRational::one();
    for a in &alpha.degrees {
        rhs_square *= rational_pow(&a.square_exact, if a.degree % 2 == 0 { 1 } else { -1 });
    }
    let lhs = rz.value - r2.value;
    let rhs = alpha.alternating_sum();
    if (lhs - rhs).abs() > 1e-9 * lhs.abs().max(1.0) || lhs_square != rhs_square {
        return Err(Error::identity(
            "integral versus L2 torsion",
            format!("lhs {lhs} ({lhs_square}), rhs {rhs} ({rhs_square})"),
        ));
    }
    Ok(RhoIdentityReport {
        rho_z: rz.value,
        rho_2: r2.value,
        alpha_alternating_sum: rhs,
        lhs,
        rhs,
        lhs_square,
        rhs_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(i: usize) -> IntChainComplex {
        let mut c = IntMatrix::zeros(i, i);
        for j in 0..i {
            c[(j, j)] -= BigInt::one();
            c[((j + 1) % i, j)] += BigInt::one();
        }
        IntChainComplex::new(vec![i, i], vec![c]).unwrap()
    }

    #[test]
    fn circle_values() {
        for i in [1usize, 2, 3, 5, 8] {
            let c = circle(i);
            let li = (i as f64).ln();
            assert_eq!(rho_z(&c).value, 0.0);
            assert!((rho_2(&c).unwrap().value - li).abs() < 1e-12);
            let a = alpha_log_dets(&c);
            assert!((a.degrees[1].log_det_alpha - 0.5 * li).abs() < 1e-12);
            assert!((a.degrees[0].log_det_alpha + 0.5 * li).abs() < 1e-12);
            for n in 0..2 {
                assert_eq!(alpha_cycle_lift_square(&c, n), a.degrees[n].square_exact);
            }
            let r = verify_rho_identity(&c).unwrap();
            assert!((r.lhs + li).abs() < 1e-12);
        }
    }

    #[test]
    fn multiplication_by_n() {
        let c = IntChainComplex::two_term(IntMatrix::from_rows(&[[5]]), 0);
        assert!((rho_z(&c).value - 5f64.ln()).abs() < 1e-15);
        assert!((rho_2(&c).unwrap().value - 5f64.ln()).abs() < 1e-15);
        let r = verify_rho_identity(&c).unwrap();
        assert!(r.lhs.abs() < 1e-15 && r.rhs == 0.0);
    }

    #[test]
    fn trivial_complexes() {
        let z = IntChainComplex::zero();
        assert_eq!(rho_z(&z).value, 0.0);
        assert_eq!(rho_2(&z).unwrap().value, 0.0);
        let point_in_1 = IntChainComplex::concentrated(1).shift(1);
        assert_eq!(alpha_log_dets(&point_in_1).degrees[1].log_det_alpha, 0.0);
        verify_rho_identity(&point_in_1).unwrap();
    }

    #[test]
    fn laplacian_examples() {
        let l = laplacian(&circle(4), 1).unwrap();
        assert_eq!(l.row(0).to_vec(), [2, -1, 0, -1].map(BigInt::from).to_vec());
        let iso = IntChainComplex::concentrated(2);
        assert!(laplacian(&iso, 0).unwrap().is_zero());
        let c = IntChainComplex::two_term(IntMatrix::from_rows(&[[1], [1]]), 0);
        assert_eq!(laplacian(&c, 0).unwrap(), IntMatrix::from_rows(&[[1, 1], [1, 1]]));
        assert!(laplacian(&c, 2).is_err());
    }
}
