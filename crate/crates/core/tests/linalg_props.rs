use latdense::linalg::{
    bezout, hnf, kernel_basis, saturation_basis, smith, solve_integer, unimodular_inverse, IntMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    IntMatrix::from_i64(&refs)
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

// Oracle: cofactor expansion over i128.
fn det_small(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_small(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

// Oracle: invariant factors from determinantal divisors d_k = gcd of k-minors.
fn invariant_factors_oracle(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let (r, c) = (rows.len(), rows[0].len());
    let mut prev: i128 = 1;
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g: i128 = 0;
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                g = g.gcd(&det_small(&m));
            }
        }
        if g == 0 {
            break;
        }
        out.push(BigInt::from(g / prev));
        prev = g;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_matches_determinantal_divisors(rows in matrix_strategy(4, 4)) {
        let m = to_matrix(&rows);
        let s = smith(&m);
        prop_assert_eq!(s.u.checked_mul(&m).unwrap().checked_mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.det().unwrap().abs().is_one());
        prop_assert!(s.v.det().unwrap().abs().is_one());
        prop_assert_eq!(s.v.checked_mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert_eq!(f, invariant_factors_oracle(&rows));
    }

    #[test]
    fn hermite_form_shape(rows in matrix_strategy(4, 5)) {
        let m = to_matrix(&rows);
        let (h, u) = hnf(&m);
        prop_assert_eq!(u.checked_mul(&m).unwrap(), h.clone());
        prop_assert!(u.det().unwrap().abs().is_one());
        let mut last_pivot: Option<usize> = None;
        for i in 0..h.rows() {
            let Some(p) = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) else {
                // zero rows come last
                for k in i..h.rows() {
                    prop_assert!(h.row(k).iter().all(Zero::is_zero));
                }
                break;
            };
            prop_assert!(last_pivot.is_none_or(|q| p > q));
            prop_assert!(h[(i, p)].is_positive());
            for k in 0..i {
                prop_assert!(!h[(k, p)].is_negative() && h[(k, p)] < h[(i, p)]);
            }
            last_pivot = Some(p);
        }
    }

    #[test]
    fn kernel_is_saturated_and_complete(rows in matrix_strategy(3, 5)) {
        let m = to_matrix(&rows);
        let k = kernel_basis(&m);
        let rank = invariant_factors_oracle(&rows).len();
        prop_assert_eq!(k.rows(), m.cols() - rank);
        for i in 0..k.rows() {
            prop_assert!(m.mul_vec(k.row(i)).unwrap().iter().all(Zero::is_zero));
        }
        if k.rows() > 0 {
            prop_assert!(smith(&k).invariant_factors().iter().all(One::is_one));
        }
    }

    #[test]
    fn saturation_contains_rows(rows in matrix_strategy(3, 4)) {
        let m = to_matrix(&rows);
        let s = saturation_basis(&m);
        prop_assert_eq!(s.rows(), invariant_factors_oracle(&rows).len());
        for i in 0..m.rows() {
            // each original row is an integer combination of the saturation basis
            let x = solve_integer(&s.transpose(), m.row(i)).unwrap();
            prop_assert!(x.is_some());
        }
    }

    #[test]
    fn integer_solve_round_trip(rows in matrix_strategy(3, 4), x in prop::collection::vec(-5i64..=5, 4)) {
        let m = to_matrix(&rows);
        let x: Vec<BigInt> = x[..m.cols()].iter().map(|&t| BigInt::from(t)).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = solve_integer(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn bezout_identity(a in prop::collection::vec(-1000i64..=1000, 1..6)) {
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        let (g, c) = bezout(&a);
        let expected = a.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        prop_assert_eq!(&g, &expected);
        let sum: BigInt = a.iter().zip(&c).map(|(x, y)| x * y).sum();
        prop_assert_eq!(sum, g);
    }
}

#[test]
fn smith_of_known_matrix() {
    // diag(2, 6, 12) up to unimodular changes
    let rows = [vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
    let expected = vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)];
    assert_eq!(invariant_factors_oracle(&rows), expected);
    assert_eq!(smith(&to_matrix(&rows)).invariant_factors(), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unimodular_inverse_of_transform(rows in matrix_strategy(4, 4)) {
        let u = smith(&to_matrix(&rows)).u;
        let inv = unimodular_inverse(&u).expect("transform is unimodular");
        prop_assert_eq!(u.checked_mul(&inv).unwrap(), IntMatrix::identity(u.rows()));
    }
}
