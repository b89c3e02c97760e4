//! Small helpers for exact rational vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::IntMatrix;

pub fn q(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(q).collect()
}

/// Scales a rational vector by the lcm of its denominators and divides out
/// the content, returning a primitive integer vector on the same ray.
pub fn primitive_multiple(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * q(&l)).to_integer()).collect();
    let g = crate::linalg::content(&ints);
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Returns the integer vector if all entries are integral.
pub fn to_integral(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

/// Reduces `x` into `[0, m)`.
pub fn reduce_mod(x: &BigRational, m: &BigRational) -> BigRational {
    let k = (x / m).floor();
    x - k * m
}

pub fn mat_vec_q(m: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .map(|(a, b)| q(a) * b)
                .fold(BigRational::zero(), |s, t| s + t)
        })
        .collect()
}

pub fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(BigRational::zero(), |s, t| s + t)
}

/// Inverse over the rationals (rows), or `None` for singular input.
pub fn inverse_q(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.rows();
    if !m.is_square() {
        return None;
    }
    let mut a: Vec<Vec<BigRational>> = m.to_rows().iter().map(|r| to_rational(r)).collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &piv;
            inv[col][j] = &inv[col][j] / &piv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Symmetric (congruence) diagonalization over the rationals.
///
/// Returns the diagonal entries and the change-of-basis rows `C` with
/// `C * G * C^T = diag`. Zero diagonal entries only occur for degenerate forms.
pub fn diagonalize(gram: &IntMatrix) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = gram.rows();
    let mut a: Vec<Vec<BigRational>> = gram.to_rows().iter().map(|r| to_rational(r)).collect();
    let mut c: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();

    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
                c.swap(i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // basis_i += basis_j; the new diagonal is 2 a_ij + a_jj = 2 a_ij
                for k in 0..n {
                    let t = a[j][k].clone();
                    a[i][k] += t;
                }
                for row in a.iter_mut() {
                    let t = row[j].clone();
                    row[i] += t;
                }
                let cj = c[j].clone();
                for (x, y) in c[i].iter_mut().zip(cj) {
                    *x += y;
                }
            } else {
                continue;
            }
        }
        let pivot = a[i][i].clone();
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &pivot;
            for k in 0..n {
                let t = &f * &a[i][k];
                a[j][k] -= t;
            }
            for row in a.iter_mut() {
                let t = &f * &row[i];
                row[j] -= t;
            }
            let ci = c[i].clone();
            for (x, y) in c[j].iter_mut().zip(ci) {
                *x -= &f * y;
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    (diag, c)
}

pub fn count_signs(diag: &[BigRational]) -> (usize, usize, usize) {
    let pos = diag.iter().filter(|x| x.is_positive()).count();
    let neg = diag.iter().filter(|x| x.is_negative()).count();
    (pos, neg, diag.len() - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalize_hyperbolic_plane() {
        let g = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let (d, c) = diagonalize(&g);
        assert_eq!(count_signs(&d), (1, 1, 0));
        // C G C^T is diagonal with the reported entries
        for i in 0..2 {
            for j in 0..2 {
                let gi = mat_vec_q(&g, &c[j]);
                let v = dot_q(&c[i], &gi);
                if i == j {
                    assert_eq!(v, d[i]);
                } else {
                    assert!(v.is_zero());
                }
            }
        }
    }

    #[test]
    fn primitive_multiple_clears_denominators() {
        let v = vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
        ];
        assert_eq!(primitive_multiple(&v), vec![BigInt::from(2), BigInt::from(-3)]);
    }
}
