use num_bigint::BigInt;

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// The named lattices used throughout the crate.
///
/// Summands are always laid out in the order written: for `LambdaK3` that is
/// E8(-1), E8(-1), H, H, H, so the three hyperbolic planes occupy
/// coordinates 16..22 and the extra summand of `Lambda(n)` sits at index 22.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardLattice {
    H,
    E8Minus,
    Rank1(i64),
    LambdaK3,
    Lambda(i64),
    Mukai,
    KummerLambda(i64),
    KummerTilde,
    HPow(usize),
}

/// Bourbaki labelling: chain 1-3-4-5-6-7-8 with node 2 attached to node 4.
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

fn e8_minus() -> IntMatrix {
    let mut g = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        g[(i, i)] = BigInt::from(-2);
    }
    for &(a, b) in &E8_EDGES {
        g[(a, b)] = BigInt::from(1);
        g[(b, a)] = BigInt::from(1);
    }
    g
}

fn h() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 1], &[1, 0]])
}

fn h_pow(k: usize) -> IntMatrix {
    (0..k).fold(IntMatrix::zeros(0, 0), |acc, _| acc.direct_sum(&h()))
}

/// Rows `e_i + f_i` for hyperbolic planes starting at the given coordinates.
fn hyperbolic_reference(rank: usize, starts: &[usize], extra: &[usize]) -> IntMatrix {
    let mut rows = Vec::new();
    for &s in starts {
        let mut r = vec![BigInt::from(0); rank];
        r[s] = BigInt::from(1);
        r[s + 1] = BigInt::from(1);
        rows.push(r);
    }
    for &s in extra {
        let mut r = vec![BigInt::from(0); rank];
        r[s] = BigInt::from(1);
        rows.push(r);
    }
    IntMatrix::from_rows(&rows, rank).expect("reference rows")
}

fn check_n(n: i64) -> Result<i64> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    Ok(n)
}

impl StandardLattice {
    pub fn parse(name: &str, param: Option<i64>) -> Result<Self> {
        let need = |p: Option<i64>| p.ok_or_else(|| Error::Precondition(format!("`{name}` needs a parameter")));
        Ok(match name {
            "H" => StandardLattice::H,
            "E8m" | "E8(-1)" => StandardLattice::E8Minus,
            "rank1" => StandardLattice::Rank1(need(param)?),
            "LambdaK3" => StandardLattice::LambdaK3,
            "Lambda" => StandardLattice::Lambda(check_n(need(param)?)?),
            "Mukai" => StandardLattice::Mukai,
            "KummerLambda" => StandardLattice::KummerLambda(check_n(need(param)?)?),
            "KummerTilde" => StandardLattice::KummerTilde,
            "Hpow" => {
                let k = need(param)?;
                if k < 1 {
                    return Err(Error::Precondition("Hpow needs k >= 1".into()));
                }
                StandardLattice::HPow(k as usize)
            }
            other => return Err(Error::UnknownLattice(other.to_string())),
        })
    }

    pub fn build(self) -> Result<Lattice> {
        let k3 = || {
            e8_minus().direct_sum(&e8_minus()).direct_sum(&h_pow(3))
        };
        let one = |d: i64| IntMatrix::from_i64(&[&[d]]);
        let (gram, reference) = match self {
            StandardLattice::H => (h(), Some(hyperbolic_reference(2, &[0], &[]))),
            StandardLattice::E8Minus => (e8_minus(), None),
            StandardLattice::Rank1(d) => {
                if d == 0 || d % 2 != 0 {
                    return Err(Error::InvalidLattice(format!("<{d}> is not a nondegenerate even lattice")));
                }
                (one(d), None)
            }
            StandardLattice::LambdaK3 => (k3(), Some(hyperbolic_reference(22, &[16, 18, 20], &[]))),
            StandardLattice::Lambda(n) => {
                check_n(n)?;
                (
                    k3().direct_sum(&one(2 - 2 * n)),
                    Some(hyperbolic_reference(23, &[16, 18, 20], &[])),
                )
            }
            StandardLattice::Mukai => (
                k3().direct_sum(&h()),
                Some(hyperbolic_reference(24, &[16, 18, 20, 22], &[])),
            ),
            StandardLattice::KummerLambda(n) => {
                check_n(n)?;
                (
                    h_pow(3).direct_sum(&one(-2 - 2 * n)),
                    Some(hyperbolic_reference(7, &[0, 2, 4], &[])),
                )
            }
            StandardLattice::KummerTilde => (h_pow(4), Some(hyperbolic_reference(8, &[0, 2, 4, 6], &[]))),
            StandardLattice::HPow(k) => {
                let starts: Vec<usize> = (0..k).map(|i| 2 * i).collect();
                (h_pow(k), Some(hyperbolic_reference(2 * k, &starts, &[])))
            }
        };
        let lat = Lattice::new(gram)?;
        match reference {
            Some(r) => lat.with_positive_reference(r),
            None => Ok(lat),
        }
    }

    /// Coordinates of the hyperbolic planes `(e_i, f_i)` (index of `e_i`).
    pub fn hyperbolic_starts(self) -> Vec<usize> {
        match self {
            StandardLattice::H => vec![0],
            StandardLattice::LambdaK3 | StandardLattice::Lambda(_) => vec![16, 18, 20],
            StandardLattice::Mukai => vec![16, 18, 20, 22],
            StandardLattice::KummerLambda(_) => vec![0, 2, 4],
            StandardLattice::KummerTilde => vec![0, 2, 4, 6],
            StandardLattice::HPow(k) => (0..k).map(|i| 2 * i).collect(),
            StandardLattice::E8Minus | StandardLattice::Rank1(_) => vec![],
        }
    }
}

/// Builds a standard lattice by name: `H`, `E8m`, `rank1` (param d),
/// `LambdaK3`, `Lambda` (param n), `Mukai`, `KummerLambda` (param n),
/// `KummerTilde`, `Hpow` (param k).
pub fn make_standard(name: &str, param: Option<i64>) -> Result<Lattice> {
    StandardLattice::parse(name, param)?.build()
}
