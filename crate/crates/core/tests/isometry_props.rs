use latdense::isometry::{reflection, Isometry};
use latdense::{make_standard, Lattice};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

// A vector of norm `target` with a hyperbolic coordinate pair (h, h+1), so
// it has divisibility 1 and its reflection is integral when target = ±2.
fn root(l: &Lattice, h: usize, z: &[i64], target: i64) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = z.iter().map(|&x| BigInt::from(x)).collect();
    d[h] = BigInt::zero();
    d[h + 1] = BigInt::zero();
    let rest = l.norm(&d).unwrap();
    d[h] = BigInt::one();
    d[h + 1] = (BigInt::from(target) - rest) / 2;
    d
}

fn lattices() -> Vec<(Lattice, usize)> {
    vec![
        (make_standard("Lambda", Some(2)).unwrap(), 16),
        (make_standard("Lambda", Some(5)).unwrap(), 18),
        (make_standard("KummerLambda", Some(3)).unwrap(), 0),
        (make_standard("KummerLambda", Some(4)).unwrap(), 2),
    ]
}

fn root_strategy() -> impl Strategy<Value = (usize, Vec<i64>, i64)> {
    (0..4usize, prop::collection::vec(-2i64..=2, 23), prop::sample::select(vec![-2i64, 2]))
}

fn negate(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn reflection_is_an_involution((which, z, target) in root_strategy()) {
        let (l, h) = &lattices()[which];
        let d = root(l, *h, &z[..l.rank()], target);
        prop_assert_eq!(l.norm(&d).unwrap(), BigInt::from(target));
        let r = reflection(l, &d).unwrap();
        prop_assert!(r.compose(&r).unwrap().is_identity());
        prop_assert_eq!(r.apply(&d).unwrap(), negate(&d));
        // Isometry::new rejects matrices that do not preserve the form
        prop_assert!(Isometry::new(l, r.matrix().clone()).is_ok());
        prop_assert_eq!(r.det_char(), -1);
        prop_assert_eq!(r.chi().unwrap(), 1);
        // a root reverses exactly the cone of its own sign
        let (pos, neg) = if target > 0 { (-1, 1) } else { (1, -1) };
        prop_assert_eq!(r.orientation_char(), pos);
        prop_assert_eq!(r.orientation_char_negative(), neg);
    }

    #[test]
    fn characters_are_multiplicative(
        which in 0..4usize,
        roots in prop::collection::vec((prop::collection::vec(-2i64..=2, 23), prop::sample::select(vec![-2i64, 2])), 2..5),
    ) {
        let (l, h) = &lattices()[which];
        let rs: Vec<Isometry> = roots
            .iter()
            .map(|(z, t)| reflection(l, &root(l, *h, &z[..l.rank()], *t)).unwrap())
            .collect();
        let mut g = Isometry::identity(l);
        for r in &rs {
            g = g.compose(r).unwrap();
        }
        let prod = |f: &dyn Fn(&Isometry) -> i32| rs.iter().map(f).product::<i32>();
        prop_assert_eq!(g.det_char(), prod(&|r| r.det_char()));
        prop_assert_eq!(g.chi().unwrap(), prod(&|r| r.chi().unwrap()));
        prop_assert_eq!(g.orientation_char(), prod(&|r| r.orientation_char()));
        prop_assert_eq!(g.orientation_char_negative(), prod(&|r| r.orientation_char_negative()));
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
    }
}

#[test]
fn minus_identity_characters() {
    // signature (3, 20) and discriminant Z/8: -1 reverses the positive cone only
    let l = make_standard("Lambda", Some(5)).unwrap();
    let m = Isometry::minus_identity(&l);
    assert_eq!(m.det_char(), -1);
    assert_eq!(m.chi().unwrap(), -1);
    assert_eq!(m.orientation_char(), -1);
    assert_eq!(m.orientation_char_negative(), 1);
}
