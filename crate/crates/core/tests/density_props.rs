use latdense::density::experiment::{sample_plane, trial_rng};
use latdense::density::plane::{form, gram_f64, principal_angle_residual, principal_angle_svd, validate_period};
use latdense::density::{check_certificate, is_saturated_snf, perturb_to_saturated, ExperimentConfig};
use latdense::make_standard;
use latdense::orbits::{Kind, Model};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

fn vec_f64(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, len)
}

fn combine(a: &[f64], b: &[f64], s: f64, t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| s * x + t * y).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn principal_angle_methods_agree(
        (x1, x2, y1, y2) in (3usize..9).prop_flat_map(|n| (vec_f64(n), vec_f64(n), vec_f64(n), vec_f64(n))),
    ) {
        let (Ok(a), Ok(b)) = (
            principal_angle_residual((&x1, &x2), (&y1, &y2)),
            principal_angle_svd((&x1, &x2), (&y1, &y2)),
        ) else {
            return Err(TestCaseError::reject("degenerate plane"));
        };
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&a));
        // acos loses half the digits near zero, so compare sines there
        prop_assert!((a - b).abs() < 1e-8 || (a.sin() - b.sin()).abs() < 1e-8, "{} vs {}", a, b);
    }

    #[test]
    fn principal_angle_ignores_basis_choice(
        (x1, x2, y1, y2) in (3usize..9).prop_flat_map(|n| (vec_f64(n), vec_f64(n), vec_f64(n), vec_f64(n))),
        (s, t) in (0.5f64..2.0, -2.0f64..2.0),
    ) {
        let Ok(a) = principal_angle_residual((&x1, &x2), (&y1, &y2)) else {
            return Err(TestCaseError::reject("degenerate plane"));
        };
        let y2b = combine(&y1, &y2, t, s);
        let b = principal_angle_residual((&x1, &x2), (&y1, &y2b)).unwrap();
        prop_assert!((a - b).abs() < 1e-6, "{} vs {}", a, b);
        let same = principal_angle_residual((&x1, &x2), (&x2, &x1)).unwrap();
        prop_assert!(same < 1e-6);
    }

    #[test]
    fn validated_period_spans_the_same_plane(
        p in prop::collection::vec(0.5f64..3.0, 4),
        noise in vec_f64(4),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        // H ⊕ H: e_i + f_i are positive, e_i - f_i negative
        let l = make_standard("Hpow", Some(2)).unwrap();
        let g = gram_f64(l.gram());
        let plus = [[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]];
        let minus = [[1.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, -1.0]];
        let small = |k: usize| combine(&minus[0], &minus[1], 0.05 * noise[k], 0.05 * noise[k + 1]);
        let x = combine(&combine(&plus[0], &plus[1], p[0], p[1]), &small(0), 1.0, 1.0);
        let y = combine(&combine(&plus[0], &plus[1], -p[2], p[3]), &small(2), 1.0, 1.0);
        let r = validate_period(l.gram(), &x, &y).unwrap();
        let (xx, xy, yy) = (form(&g, &r.x, &r.x), form(&g, &r.x, &r.y), form(&g, &r.y, &r.y));
        prop_assert!(xy.abs() < 1e-9 * xx);
        prop_assert!((xx - yy).abs() < 1e-9 * xx);
        prop_assert!(principal_angle_residual((&x, &y), (&r.x, &r.y)).unwrap() < 1e-7);
        // rotating the input within the plane gives the same plane back
        let (c, s) = (theta.cos(), theta.sin());
        let r2 = validate_period(l.gram(), &combine(&r.x, &r.y, c, s), &combine(&r.x, &r.y, -s, c)).unwrap();
        prop_assert!(principal_angle_residual((&r.x, &r.y), (&r2.x, &r2.y)).unwrap() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn perturbation_is_certified(
        seed in 0u64..10_000,
        n in 2i64..8,
        kind in prop::sample::select(vec![Kind::Hilbert, Kind::Kummer]),
        k in prop::sample::select(vec![1u64, 2, 3, 4, 8]),
    ) {
        let model = Model::new(n, kind).unwrap();
        let cfg = ExperimentConfig::new(n, kind, 1, 0.01, seed);
        let (u1, u2, _) = sample_plane(&model, &cfg, &mut trial_rng(seed, 0)).unwrap();
        let (a1, a2) = (model.embed(&u1).unwrap(), model.embed(&u2).unwrap());
        let amb = &model.ambient;
        let p = perturb_to_saturated(amb, &model.v, &a1, &a2, k).unwrap();
        prop_assert!(check_certificate(amb, &model.v, &p.u1p, &p.u2p, &p.certificate).unwrap());
        prop_assert!(is_saturated_snf(&p.u1p, &p.u2p, &model.v).unwrap());
        prop_assert!(p.k2.is_multiple_of(&BigInt::from(k)));
        for (u, up, e, m) in [(&a1, &p.u1p, &p.e1, BigInt::from(k)), (&a2, &p.u2p, &p.e2, p.k2.clone())] {
            prop_assert!(amb.norm(e).unwrap().is_zero());
            prop_assert!(amb.inner(up, &model.v).unwrap().is_zero());
            let expect: Vec<BigInt> = u.iter().zip(e).map(|(a, b)| &m * a + b).collect();
            prop_assert_eq!(up, &expect);
        }
        prop_assert!((p.angle - p.angle_svd).abs() < 1e-8 || (p.angle.sin() - p.angle_svd.sin()).abs() < 1e-8);
    }
}
