use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::Lattice;
use crate::linalg::smith;
use crate::rational::{dot_q, mat_vec_q, q, reduce_mod};

/// The discriminant group `L*/L` with its quadratic and bilinear forms.
///
/// Generator lifts live in `L ⊗ Q` in ambient coordinates. Form values are
/// exact fractions reduced into `[0, 2)` (quadratic) and `[0, 1)` (bilinear).
#[derive(Clone, Debug, PartialEq)]
pub struct DiscGroup {
    pub invariant_factors: Vec<BigInt>,
    pub generator_lifts: Vec<Vec<BigRational>>,
    pub qform: Vec<BigRational>,
    pub bform: Vec<Vec<BigRational>>,
}

impl DiscGroup {
    /// With `D = U G V`, the columns of `V` divided by the diagonal entries
    /// lift generators of `L*/L`.
    pub fn of(lattice: &Lattice) -> DiscGroup {
        let s = smith(lattice.gram());
        let mut invariant_factors = Vec::new();
        let mut generator_lifts = Vec::new();
        for i in 0..s.rank {
            let d = s.d[(i, i)].clone();
            if d.is_one() {
                continue;
            }
            let lift: Vec<BigRational> = s
                .v
                .col(i)
                .iter()
                .map(|x| BigRational::new(x.clone(), d.clone()))
                .collect();
            invariant_factors.push(d);
            generator_lifts.push(lift);
        }
        let two = q(&BigInt::from(2));
        let one = BigRational::one();
        let pair = |a: &[BigRational], b: &[BigRational]| dot_q(a, &mat_vec_q(lattice.gram(), b));
        let qform = generator_lifts
            .iter()
            .map(|g| reduce_mod(&pair(g, g), &two))
            .collect();
        let bform = generator_lifts
            .iter()
            .map(|a| {
                generator_lifts
                    .iter()
                    .map(|b| reduce_mod(&pair(a, b), &one))
                    .collect()
            })
            .collect();
        DiscGroup {
            invariant_factors,
            generator_lifts,
            qform,
            bform,
        }
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;
    use num_traits::Signed;

    #[test]
    fn unimodular_is_trivial() {
        assert!(make_standard("H", None).unwrap().disc_group().is_trivial());
        assert!(make_standard("LambdaK3", None).unwrap().disc_group().is_trivial());
    }

    #[test]
    fn lambda_is_cyclic() {
        for n in 2..8 {
            let d = make_standard("Lambda", Some(n)).unwrap().disc_group();
            assert_eq!(d.invariant_factors, vec![BigInt::from(2 * n - 2)]);
        }
    }

    #[test]
    fn kummer_discriminant_form() {
        for n in 2..8i64 {
            let l = make_standard("KummerLambda", Some(n)).unwrap();
            let d = l.disc_group();
            assert_eq!(d.invariant_factors, vec![BigInt::from(2 * n + 2)]);
            // q(w / (2n+2)) = -1/(2n+2) mod 2
            let expected = reduce_mod(
                &BigRational::new(BigInt::from(-1), BigInt::from(2 * n + 2)),
                &q(&BigInt::from(2)),
            );
            assert_eq!(d.qform[0], expected);
            assert_eq!(d.order(), l.det().abs());
        }
    }
}
