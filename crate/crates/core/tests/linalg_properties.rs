mod common;

use common::*;
use homgrow_core::linalg::*;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-5i64..=5, r * c).prop_map(move |d| small_matrix(r, c, &d))
    })
}

/// Sparse-ish matrices of low rank exercise the degenerate paths.
fn low_rank_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max, 1..=2usize).prop_flat_map(|(r, c, k)| {
        (
            proptest::collection::vec(-3i64..=3, r * k),
            proptest::collection::vec(-3i64..=3, k * c),
        )
            .prop_map(move |(x, y)| small_matrix(r, k, &x).mul(&small_matrix(k, c, &y)).unwrap())
    })
}

fn signed_permutation(n: usize, seed: &[u8]) -> IntMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = seed[i % seed.len()] as usize % (i + 1);
        perm.swap(i, j);
    }
    let mut p = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = if seed[(i + 3) % seed.len()].is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_factors_are_minor_gcd_ratios(a in matrix(6, 6)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.rank, minor_rank(&a));
        let mut prod = BigInt::one();
        for (j, d) in s.invariant_factors.iter().enumerate() {
            prop_assert!(d.is_positive());
            if j > 0 {
                prop_assert!((d % &s.invariant_factors[j - 1]).is_zero());
            }
            prod *= d;
            prop_assert_eq!(&prod, &gcd_of_minors(&a, j + 1));
        }
    }

    #[test]
    fn dense_and_sparse_smith_agree(a in matrix(6, 6)) {
        let s = smith_with_transforms(&a);
        prop_assert_eq!(&s.invariant_factors, &smith_normal_form(&a).invariant_factors);
        let u = s.left_transform.as_ref().unwrap();
        let v = s.right_transform.as_ref().unwrap();
        prop_assert_eq!(u.mul(&a).unwrap().mul(v).unwrap(), s.diagonal(a.rows(), a.cols()));
        prop_assert!(bareiss_determinant(u).unwrap().abs().is_one());
        prop_assert!(bareiss_determinant(v).unwrap().abs().is_one());
        prop_assert_eq!(u.mul(s.left_inverse.as_ref().unwrap()).unwrap(), IntMatrix::identity(a.rows()));
    }

    #[test]
    fn fk_square_is_cauchy_binet(a in matrix(6, 6)) {
        let f = fk_determinant(&a);
        prop_assert_eq!(&f.square_exact, &BigRational::from(cauchy_binet_square(&a)));
        prop_assert!(f.square_exact >= BigRational::one());
        let l = 0.5 * f.square_exact.to_f64().unwrap().ln();
        prop_assert!((f.log_value - l).abs() <= 1e-12 * l.abs().max(1e-300) + 1e-15);
    }

    #[test]
    fn fk_square_matches_eigenvalues(a in matrix(8, 8)) {
        let f = fk_determinant(&a);
        if a.cols() == 0 || a.rows() == 0 {
            prop_assert!(f.square_exact.is_one());
            return Ok(());
        }
        let rows = a.to_f64_rows();
        let m = DMatrix::from_fn(a.rows(), a.cols(), |i, j| rows[i][j]);
        let g = m.transpose() * &m;
        let eig = g.symmetric_eigen().eigenvalues;
        let k = rank(&a);
        let mut vals: Vec<f64> = eig.iter().copied().collect();
        vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let prod: f64 = vals.iter().take(k).product();
        let exact = f.square_exact.to_f64().unwrap();
        prop_assert!((prod - exact).abs() <= 1e-6 * exact, "{} vs {}", prod, exact);
    }

    #[test]
    fn fk_orthogonal_invariance(a in matrix(6, 6), seed in proptest::collection::vec(any::<u8>(), 8)) {
        let p = signed_permutation(a.rows(), &seed);
        let q = signed_permutation(a.cols(), &seed[1..]);
        let b = p.mul(&a).unwrap().mul(&q).unwrap();
        prop_assert_eq!(fk_determinant(&a).square_exact, fk_determinant(&b).square_exact);
    }

    #[test]
    fn factorization_holds(a in matrix(6, 6)) {
        let rep = fk_factorization_check(&a).unwrap();
        prop_assert_eq!(rep.det_u.square_exact, BigRational::from(cauchy_binet_square(&a)));
    }

    #[test]
    fn factorization_holds_low_rank(a in low_rank_matrix(6)) {
        prop_assert!(fk_factorization_check(&a).is_ok());
    }

    #[test]
    fn kernel_is_saturated(a in matrix(6, 6)) {
        let k = kernel_lattice(&a);
        prop_assert_eq!(k.cols(), a.cols() - rank(&a));
        prop_assert!(a.mul(&k).unwrap().is_zero());
        // ℤ^cols / ker is torsion-free.
        let c = cokernel_structure(&k);
        prop_assert!(c.invariant_factors.is_empty());
        prop_assert_eq!(hnf_basis(&k), k);
    }

    #[test]
    fn kernel_of_low_rank(a in low_rank_matrix(6)) {
        let k = kernel_lattice(&a);
        prop_assert!(a.mul(&k).unwrap().is_zero());
        prop_assert!(cokernel_structure(&k).invariant_factors.is_empty());
        prop_assert_eq!(k.cols(), a.cols() - minor_rank(&a));
    }

    #[test]
    fn cokernel_matches_smith(a in matrix(6, 6)) {
        let c = cokernel_structure(&a);
        let s = smith_normal_form(&a);
        prop_assert_eq!(c.free_rank + s.rank, a.rows());
        prop_assert!(c.invariant_factors.iter().all(|d| d > &BigInt::one()));
    }

    #[test]
    fn lattice_coordinates_roundtrip(a in matrix(5, 5), x in proptest::collection::vec(-4i64..=4, 5)) {
        let lat = Lattice::from_generators(&a);
        let comb: Vec<BigInt> = x.iter().take(a.cols()).map(|&v| BigInt::from(v)).collect();
        let comb = if comb.len() < a.cols() { vec![BigInt::zero(); a.cols()] } else { comb };
        let v = a.mul_vec(&comb);
        let c = lat.coordinates(&v);
        prop_assert!(c.is_some());
        prop_assert_eq!(lat.basis().mul_vec(&c.unwrap()), v);
    }
}
