use num_complex::Complex64 as C64;
use proptest::prelude::*;

use orthospec::archforms::{random_specs, run_spec, ComplexPower, IdentityId};
use orthospec::lfactors::{euler, std_eigenvalues, EigenvalueMultiset};
use orthospec::plancherel::density_unnormalized;
use orthospec::quadlat::{discriminant, smith, GramLattice};
use orthospec::rootdata::{eval_hecke, weyl_act, weyl_group, GroupSpec, HeckeSymbol, SatakePoint};
use orthospec::special::{bessel_k, cpow, ln_gamma};

fn cplx() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn even_gram(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (proptest::collection::vec(-3i64..=3, n), proptest::collection::vec(-3i64..=3, n * n)).prop_map(move |(d, off)| {
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            g[i][i] = 2 * d[i];
            for j in 0..i {
                g[i][j] = off[i * n + j];
                g[j][i] = off[i * n + j];
            }
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_splits_inside_the_window(z1 in cplx(), z2 in cplx(), a in cplx()) {
        prop_assume!(z1.norm() > 0.1 && z2.norm() > 0.1);
        if ComplexPower::product_splits(z1, z2) {
            let lhs = cpow(z1 * z2, a);
            let rhs = ComplexPower::split_product(z1, z2, a).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * (1.0 + lhs.norm()));
        } else {
            prop_assert!(ComplexPower::split_product(z1, z2, a).is_err());
        }
    }

    #[test]
    fn k_bessel_even_in_order(nu in cplx(), x in 0.2..8.0f64, y in -1.0..1.0f64) {
        let z = C64::new(x, y * x);
        let a = bessel_k(nu, z).unwrap();
        let b = bessel_k(-nu, z).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300));
    }

    #[test]
    fn gamma_recurrence(z in cplx()) {
        prop_assume!((z - C64::new(0.0, 0.0)).norm() > 0.2 && z.re > -2.5);
        prop_assume!((0..4).all(|k| (z + k as f64).norm() > 0.2));
        let d = (ln_gamma(z + 1.0) - ln_gamma(z) - z.ln()).exp();
        prop_assert!((d - 1.0).norm() < 1e-11);
    }

    #[test]
    fn hecke_symbol_is_weyl_invariant(t in proptest::collection::vec(0.0..6.0f64, 3), c in cplx(), w_idx in 0usize..48) {
        let mut h = HeckeSymbol::constant(3, 3, c);
        h.add_orbit(&[2, 1, 0], C64::new(0.5, -0.2)).unwrap();
        h.add_orbit(&[1, 1, 1], C64::new(-1.0, 0.0)).unwrap();
        let nu = SatakePoint::tempered(3, &t);
        let w = &weyl_group(3, false)[w_idx];
        let a = eval_hecke(&h, &nu).unwrap();
        let b = eval_hecke(&h, &weyl_act(w, &nu).unwrap()).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn density_is_weyl_invariant(t in proptest::collection::vec(0.0..6.0f64, 2), n0 in 0usize..=2, w_idx in 0usize..8) {
        let spec = GroupSpec::new(5, 2, n0);
        let nu = SatakePoint::tempered(5, &t);
        let w = &weyl_group(2, false)[w_idx];
        let a = density_unnormalized(&nu, &spec).unwrap();
        let b = density_unnormalized(&weyl_act(w, &nu).unwrap(), &spec).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn trivial_twist_leaves_the_factor(t in proptest::collection::vec(0.0..4.0f64, 2), s in 0.6..3.0f64) {
        let spec = GroupSpec::new(2, 2, 1);
        let e = std_eigenvalues(&SatakePoint::tempered(2, &t), &spec).unwrap();
        let one = EigenvalueMultiset::new(vec![C64::new(1.0, 0.0)]);
        let a = euler(&e.values, 2, C64::new(s, 0.0)).unwrap();
        let b = euler(&one.tensor(&e).values, 2, C64::new(s, 0.0)).unwrap();
        prop_assert!((a - b).norm() <= 1e-14 * a.norm());
    }

    #[test]
    fn smith_and_direct_sums(g in even_gram(3), h in even_gram(2)) {
        let (Ok(l), Ok(m)) = (GramLattice::from_rows(&g), GramLattice::from_rows(&h)) else { return Ok(()) };
        let prod: num_bigint::BigInt = smith(l.gram()).d.iter().product();
        prop_assert_eq!(num_traits::Signed::abs(&prod), discriminant(&l));
        prop_assert_eq!(discriminant(&l.direct_sum(&m)), discriminant(&l) * discriminant(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn identity_runs_reproduce(seed in 0u64..1000, which in 0usize..5) {
        use IdentityId::*;
        let id = [GaussCosine, SphereMoment, Hypergeom, ByParts, Cell1][which];
        let a = random_specs(id, 2, seed);
        prop_assert_eq!(&a, &random_specs(id, 2, seed));
        for spec in &a {
            let mut r1 = run_spec(spec).unwrap();
            let mut r2 = run_spec(spec).unwrap();
            r1.runtime_ms = 0.0;
            r2.runtime_ms = 0.0;
            prop_assert_eq!(r1, r2);
        }
    }
}
