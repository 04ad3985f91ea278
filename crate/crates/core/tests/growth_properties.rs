use homgrow_core::chain::{alpha_degree, homology};
use homgrow_core::group_ring::*;
use homgrow_core::growth::*;
use homgrow_core::linalg::fk_determinant;
use homgrow_core::{Error, IntMatrix};
use num_bigint::BigInt;
use num_traits::Signed;

fn cat_map() -> IntMatrix {
    IntMatrix::from_rows(&[[2, 1], [1, 1]])
}

fn library() -> Vec<(&'static str, LaurentChainComplex, Vec<Vec<u64>>)> {
    vec![
        ("circle", circle_complex(), vec![vec![1], vec![2], vec![3], vec![6]]),
        ("torus2", torus_complex(2), vec![vec![1, 1], vec![2, 2], vec![2, 4], vec![4, 4]]),
        ("torus3", torus_complex(3), vec![vec![1, 1, 1], vec![2, 2, 2], vec![2, 2, 4]]),
        ("s1_cross", s1_cross(), vec![vec![1], vec![2], vec![4], vec![8]]),
        ("cat_map", mapping_torus_complex(&cat_map()).unwrap(), vec![vec![1], vec![2], vec![3], vec![5]]),
        ("z_times_3", mapping_torus_complex(&IntMatrix::from_rows(&[[3]])).unwrap(), vec![vec![1], vec![2], vec![4]]),
        (
            "negation",
            mapping_torus_complex(&IntMatrix::from_rows(&[[-1]])).unwrap(),
            vec![vec![1], vec![2], vec![3], vec![4]],
        ),
    ]
}

fn specs(levels: &[Vec<u64>]) -> Vec<QuotientSpec> {
    levels.iter().map(|m| QuotientSpec::new(m.clone()).unwrap()).collect()
}

#[test]
fn alpha_fast_path_matches_full_harmonic_lattice() {
    for (name, c, levels) in library() {
        for q in specs(&levels) {
            let qc = base_change(&c, &q).unwrap();
            let aug = qc.coinvariants();
            let h = homology(&qc.complex, &[]);
            for n in 0..=c.top_degree() {
                let fast = qc.alpha_degree(n, h.degree(n).betti_q, &aug);
                let full = alpha_degree(&qc.complex, n);
                assert_eq!(fast.square_exact, full.square_exact, "{name} {:?} degree {n}", q.moduli());
            }
        }
    }
}

#[test]
fn fourier_determinants_match_exact_ones() {
    let exact = TowerConfig {
        exact_det_max_dim: usize::MAX,
        ..TowerConfig::default()
    };
    let fourier = TowerConfig {
        exact_det_max_dim: 0,
        ..TowerConfig::default()
    };
    for (name, c, levels) in library() {
        for (k, q) in specs(&levels).iter().enumerate() {
            let a = compute_level(&c, q, k, &exact).unwrap();
            let b = compute_level(&c, q, k, &fourier).unwrap();
            for (x, y) in a.degrees.iter().zip(&b.degrees) {
                let tol = 1e-9 * x.ln_det_c.abs().max(1.0);
                assert!((x.ln_det_c - y.ln_det_c).abs() < tol, "{name} {:?}: {x:?} vs {y:?}", q.moduli());
            }
            assert!((a.rho_2 - b.rho_2).abs() < 1e-8 * a.rho_2.abs().max(1.0));
        }
    }
}

#[test]
fn library_towers_satisfy_the_sandwich() {
    for (name, c, levels) in library() {
        let r = run_tower(&c, &specs(&levels), &TowerConfig::default()).unwrap();
        assert!(r.within_lambda, "{name}");
        assert!(r.nonnegative, "{name}");
        assert!(r.rho_identity_holds, "{name}: {:?}", r.levels.iter().map(|l| l.rho_identity_gap).collect::<Vec<_>>());
        for q in specs(&levels) {
            let h = homology(&base_change(&c, &q).unwrap().complex, &[]);
            for g in &h.degrees {
                for p in [2, 3, 5] {
                    let b = g.dim_tensor_fp(p);
                    assert!(g.betti_q <= b && b <= g.d_hn, "{name} p={p}");
                }
                assert!(g.d_hn as f64 <= g.betti_q as f64 + g.log_tors / 2f64.ln() + 1e-9);
            }
        }
    }
}

#[test]
fn degenerate_levels_are_flagged() {
    // t ↦ −t has b_0 = 1 at even levels only.
    let c = mapping_torus_complex(&IntMatrix::from_rows(&[[-1]])).unwrap();
    let r = run_tower(&c, &specs(&[vec![1], vec![2], vec![3]]), &TowerConfig::default()).unwrap();
    let flags: Vec<bool> = r.levels.iter().map(|l| l.degenerate).collect();
    assert_eq!(flags, vec![false, true, false]);
    assert!(r.csv_records()[2].last().unwrap().contains("degenerate"));
}

#[test]
fn reports_do_not_depend_on_threads() {
    let c = torus_complex(2);
    let levels = diagonal_levels(2, &[1, 2, 3, 4, 6]).unwrap();
    let one = run_tower(&c, &levels, &TowerConfig::default()).unwrap();
    let many = run_tower(
        &c,
        &levels,
        &TowerConfig {
            jobs: 8,
            ..TowerConfig::default()
        },
    )
    .unwrap();
    assert_eq!(one, many);
    assert_eq!(one.csv_records(), many.csv_records());
}

#[test]
fn circle_tower_closed_forms() {
    let levels = diagonal_levels(1, &[1, 2, 4, 8, 16, 32, 64, 128]).unwrap();
    let r = run_tower(&circle_complex(), &levels, &TowerConfig::default()).unwrap();
    assert_eq!(r.lambda, 8.0);
    for l in &r.levels {
        let i = l.index as f64;
        assert_eq!(l.per_index(l.degrees[1].betti_q as f64), 1.0 / i);
        assert!((l.per_index(l.degrees[1].ln_det_c) - i.ln() / i).abs() < 1e-9);
        assert!((l.degrees[1].ln_det_alpha - 0.5 * i.ln()).abs() < 1e-9);
        assert_eq!(l.rho_z, 0.0);
    }
    assert_eq!(r.levels.last().unwrap().det_method, DetMethod::Fourier);
    let b1 = r.limits.iter().find(|e| e.quantity == "betti_q" && e.degree == Some(1)).unwrap();
    assert_eq!(b1.cauchy, Some(true));
    assert!(b1.tail_fit.abs() < 1e-12);
}

#[test]
fn torus_towers_are_torsion_free() {
    let levels = diagonal_levels(2, &[1, 2, 4, 8]).unwrap();
    let r = run_tower(&torus_complex(2), &levels, &TowerConfig::default()).unwrap();
    assert!(r.levels.iter().flat_map(|l| &l.degrees).all(|d| d.ln_tors == 0.0));
}

#[test]
fn torsion_growth_examples() {
    let p = probe_torsion_growth(&cat_map(), &[2, 10, 50]).unwrap();
    assert_eq!(p.levels[0].oracle_det, BigInt::from(-5));
    assert!(p.levels.iter().all(|l| l.exact_match));
    let last = p.levels.last().unwrap();
    assert!((last.ln_tors_per_i.unwrap() - 0.962424).abs() < 1e-4);
    // tr(A^i) − 2 = |det(A^i − I)| for this A.
    let mut pw = IntMatrix::identity(2);
    for _ in 0..50 {
        pw = pw.mul(&cat_map()).unwrap();
    }
    let trace = &pw[(0, 0)] + &pw[(1, 1)] - BigInt::from(2);
    assert_eq!(last.torsion_order.as_ref().unwrap(), &trace);
    let two = probe_torsion_growth(&IntMatrix::from_rows(&[[2]]), &[10]).unwrap();
    assert_eq!(two.levels[0].torsion_order, Some(BigInt::from(1023)));
    assert!((two.levels[0].ln_tors_per_i.unwrap() - (1023f64).ln() / 10.0).abs() < 1e-12);
    assert!((two.ln_mahler - 2f64.ln()).abs() < 1e-12);
    assert!(last.oracle_det.abs() > BigInt::from(0));
}

#[test]
fn alpha_probe_examples() {
    let levels = diagonal_levels(1, &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]).unwrap();
    for n in 0..=1 {
        let p = probe_alpha_vanishing(&circle_complex(), &levels, n, 5e-3).unwrap();
        assert!(p.holds, "degree {n}: {p:?}");
        let i = 1024f64;
        assert!((p.final_value - 0.5 * i.ln() / i).abs() < 1e-12);
    }
    let levels = diagonal_levels(2, &[1, 2, 4, 8, 16]).unwrap();
    let p = probe_alpha_vanishing(&torus_complex(2), &levels, 1, 1e-3).unwrap();
    assert!(p.levels.iter().all(|l| l.value.abs() < 1e-12));
    assert!(p.holds);
    let neg = mapping_torus_complex(&IntMatrix::from_rows(&[[-1]])).unwrap();
    let e = probe_alpha_vanishing(&neg, &diagonal_levels(1, &[1, 2]).unwrap(), 0, 1.0);
    assert!(matches!(e, Err(Error::HypothesisViolated(_))));
}

#[test]
fn rationally_trivial_action_agrees_with_betti_criterion() {
    for (name, c, levels) in library() {
        for q in specs(&levels) {
            let qc = base_change(&c, &q).unwrap();
            let h = homology(&qc.complex, &[]);
            let ha = homology(&qc.coinvariants(), &[]);
            for n in 0..=c.top_degree() {
                let by_betti = h.degree(n).betti_q == ha.degree(n).betti_q;
                assert_eq!(qc.rationally_trivial_action(n), by_betti, "{name} {:?} {n}", q.moduli());
            }
        }
    }
}

#[test]
fn rank_gradient_profiles() {
    let r = rank_gradient_example(GroupProfile::new(0, 1, 2, 3).unwrap(), &[1, 2, 4, 8, 16]).unwrap();
    assert!(r.strict_chain);
    let t = rank_gradient_example(GroupProfile::new(0, 0, 0, 0).unwrap(), &[1, 10]).unwrap();
    assert_eq!((t.lim_b1_q, t.lim_b1_fp, t.lim_d_h1, t.rank_gradient), (0, 0, 0, 0));
    let z = rank_gradient_example(GroupProfile::new(1, 1, 1, 1).unwrap(), &[3]).unwrap();
    assert_eq!((z.lim_b1_q, z.rank_gradient), (1, 1));
    assert!(!z.strict_chain);
}

#[test]
fn exact_determinants_on_small_levels() {
    let qc = base_change(&circle_complex(), &QuotientSpec::new(vec![5]).unwrap()).unwrap();
    let d = fk_determinant(qc.complex.differential(1).unwrap());
    assert!((d.log_value - 5f64.ln()).abs() < 1e-12);
}
