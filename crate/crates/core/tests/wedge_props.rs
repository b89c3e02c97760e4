use latdense::isometry::Isometry;
use latdense::linalg::IntMatrix;
use latdense::wedge::{prime_power_unit_check, psi, tau_report, wedge_gram, wedge_sq_of};
use num_bigint::BigInt;
use proptest::prelude::*;

// Product of elementary matrices I + c·E_ij, i != j, so det = 1.
fn sl4(steps: &[(usize, usize, i64)]) -> IntMatrix {
    let mut a = IntMatrix::identity(4);
    for &(i, j, c) in steps {
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(4);
        e[(i, j)] = BigInt::from(c);
        a = a.checked_mul(&e).unwrap();
    }
    a
}

fn steps() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0..4usize, 0..4usize, prop::sample::select(vec![-2i64, -1, 1, 2])), 1..12)
}

// Oracle: factor by trial division.
fn is_prime_power(m: u64) -> bool {
    let mut m = m;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            primes += 1;
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes += 1;
    }
    primes == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wedge_square_of_sl4_is_special_isometry(s in steps(), sign in prop::sample::select(vec![-1i32, 1])) {
        let a = sl4(&s);
        let w = wedge_gram(sign).unwrap();
        let m = wedge_sq_of(&a).unwrap();
        let g = Isometry::new(&w.lattice, m).unwrap();
        prop_assert_eq!(g.det_char(), 1);
        prop_assert_eq!(g.orientation_char(), 1);
        prop_assert_eq!(g.orientation_char_negative(), 1);
    }

    #[test]
    fn wedge_square_is_functorial(s in steps(), t in steps()) {
        let (a, b) = (sl4(&s), sl4(&t));
        let ab = wedge_sq_of(&a.checked_mul(&b).unwrap()).unwrap();
        let prod = wedge_sq_of(&a).unwrap().checked_mul(&wedge_sq_of(&b).unwrap()).unwrap();
        prop_assert_eq!(ab, prod);
    }

    #[test]
    fn tau_is_an_involution_with_det_chi_minus_one(n in 2i64..60, sign in prop::sample::select(vec![-1i32, 1])) {
        let r = tau_report(n, sign).unwrap();
        prop_assert!(r.involution);
        prop_assert_eq!(r.det, -1);
        prop_assert_eq!(r.det_chi, -1);
    }
}

#[test]
fn psi_is_an_involutive_isometry_of_both_conventions() {
    let p = psi();
    assert_eq!(p.checked_mul(&p).unwrap(), IntMatrix::identity(6));
    assert_eq!(p.det().unwrap(), BigInt::from(-1));
    for sign in [-1, 1] {
        let w = wedge_gram(sign).unwrap();
        let g = Isometry::new(&w.lattice, p.clone()).unwrap();
        assert_eq!(g.det_char(), -1);
    }
}

#[test]
fn unit_count_detects_prime_powers() {
    for n in 2..=500 {
        let c = prime_power_unit_check(n).unwrap();
        assert_eq!(c.count == 2, is_prime_power(n as u64 + 1), "n = {n}");
        assert!(c.agree);
    }
}
