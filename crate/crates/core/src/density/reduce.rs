//! Basis reduction and hyperbolic pairs in sublattices.
//!
//! Orthogonal complements come out of the Hermite normal form with large
//! entries. LLL reduction (Euclidean metric on coordinates, Gram-Schmidt in
//! `f64`, basis updates exact) shortens them; isotropic vectors are then
//! found by enumerating short lattice vectors (Fincke-Pohst) in rounds of
//! growing radius, shortest first. The enumeration metric is
//! `‖x‖² − λ (x, x)`, which is positive definite for small enough `λ > 0`
//! and makes vectors of positive norm cheap; without it, short vectors in a
//! lattice with a large negative definite part are all negative.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Result;
use crate::lattice::{is_definite, Lattice};
use crate::linalg::{bezout, dot, kernel_basis, IntMatrix};
use crate::rational::{inverse_q, to_rational};
use crate::search::{big, small_gram, small_inner};

const LLL_DELTA: f64 = 0.99;

fn gs(rows: &[Vec<BigInt>], ip: &impl Fn(&[BigInt], &[BigInt]) -> f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = rows.len();
    let g: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| ip(&rows[i], &rows[j])).collect()).collect();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * b[k];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i];
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * b[k];
        }
        b[i] = s;
    }
    (mu, b)
}

/// LLL-reduced basis (rows) of the lattice spanned by independent rows.
pub fn lll(basis: &IntMatrix) -> IntMatrix {
    let rows = lll_with(basis.to_rows(), &|x, y| dot(x, y).to_f64().unwrap_or(f64::MAX));
    IntMatrix::from_rows(&rows, basis.cols()).expect("same shape")
}

fn lll_with(mut rows: Vec<Vec<BigInt>>, ip: &impl Fn(&[BigInt], &[BigInt]) -> f64) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    if n < 2 {
        return rows;
    }
    let (mut mu, mut b) = gs(&rows, ip);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                let rb = BigInt::from(r as i64);
                let (lo, hi) = rows.split_at_mut(k);
                for (x, y) in hi[0].iter_mut().zip(&lo[j]) {
                    *x -= &rb * y;
                }
                for i in 0..j {
                    mu[k][i] -= r * mu[j][i];
                }
                mu[k][j] -= r;
            }
        }
        if b[k] >= (LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            rows.swap(k, k - 1);
            let fresh = gs(&rows, ip);
            mu = fresh.0;
            b = fresh.1;
            k = (k - 1).max(1);
        }
    }
    rows
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |a, &b| a.gcd(&b));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// Squared radius of the last enumeration round.
pub const MAX_RADIUS_SQ: f64 = (1u64 << 40) as f64;
const METRIC_LAMBDAS: [f64; 4] = [0.9, 0.6, 0.3, 0.0];
/// Vectors enumerated per round before the search gives up.
const ROUND_CAP: usize = 400_000;

/// Coefficient vectors `c` (up to sign) with `0 < cᵀ a c ≤ r2`. `None` when
/// `a` is not positive definite or more than `cap` vectors qualify.
fn short_vectors(a: &[Vec<f64>], r2: f64, cap: usize) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    // Q(x) = Σ q[i][i] (x_i + Σ_{j>i} q[i][j] x_j)²
    let mut q = a.to_vec();
    for i in 0..n {
        if q[i][i] <= 1e-9 {
            return None;
        }
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let eps = 1e-6 * (1.0 + r2);
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut rem = vec![0.0f64; n + 1];
    rem[n] = r2 + eps;
    fn center(q: &[Vec<f64>], x: &[i64], i: usize) -> f64 {
        -(i + 1..x.len()).map(|j| q[i][j] * x[j] as f64).sum::<f64>()
    }
    fn rec(q: &[Vec<f64>], x: &mut [i64], rem: &mut [f64], i: usize, out: &mut Vec<Vec<i64>>, cap: usize) -> bool {
        let c = center(q, x, i);
        let w = (rem[i + 1] / q[i][i]).max(0.0).sqrt();
        let (lo, hi) = ((c - w).ceil() as i64, (c + w).floor() as i64);
        // the top nonzero coordinate is positive, so each ± pair appears once
        let top = x[i + 1..].iter().all(|&t| t == 0);
        for xi in lo.max(if top { 0 } else { i64::MIN })..=hi {
            x[i] = xi;
            let d = xi as f64 - c;
            rem[i] = rem[i + 1] - q[i][i] * d * d;
            if rem[i] < 0.0 {
                continue;
            }
            if i == 0 {
                if x.iter().any(|&t| t != 0) {
                    out.push(x.to_vec());
                    if out.len() > cap {
                        return false;
                    }
                }
            } else if !rec(q, x, rem, i - 1, out, cap) {
                return false;
            }
        }
        x[i] = 0;
        true
    }
    if n == 0 {
        return Some(out);
    }
    rec(&q, &mut x, &mut rem, n - 1, &mut out, cap).then_some(out)
}

/// Coordinates of the indefinite orthogonal blocks of the ambient Gram
/// matrix (connected components of its nonzero pattern).
fn indefinite_support(ambient: &Lattice) -> Vec<usize> {
    let g = ambient.gram();
    let n = g.rows();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut block = vec![s];
        comp[s] = s;
        let mut i = 0;
        while i < block.len() {
            let a = block[i];
            for b in 0..n {
                if comp[b] == usize::MAX && !g[(a, b)].is_zero() {
                    comp[b] = s;
                    block.push(b);
                }
            }
            i += 1;
        }
        block.sort_unstable();
        let sub = g.select_rows(block.iter().copied()).select_cols(&block);
        if !is_definite(&sub, true) && !is_definite(&sub, false) {
            out.extend(block);
        }
    }
    out.sort_unstable();
    out
}

/// Calls `accept` on primitive isotropic vectors (ambient coordinates) of
/// the sublattice with basis rows `basis`, shortest first, until it returns
/// a value. Vectors supported on the indefinite blocks of the ambient
/// lattice are tried first; those are far more likely to be isotropic than
/// short vectors with a large negative definite component.
pub fn search_isotropic<T>(
    ambient: &Lattice,
    basis: &IntMatrix,
    mut accept: impl FnMut(Vec<BigInt>) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if basis.rows() < 2 {
        return Ok(None);
    }
    let support = indefinite_support(ambient);
    if support.len() < ambient.rank() {
        let rest: Vec<usize> = (0..ambient.rank()).filter(|i| !support.contains(i)).collect();
        let k = kernel_basis(&basis.select_cols(&rest).transpose());
        if k.rows() >= 2 {
            if let Some(t) = isotropic_in(ambient, &k.checked_mul(basis)?, &mut accept)? {
                return Ok(Some(t));
            }
        }
    }
    isotropic_in(ambient, basis, &mut accept)
}

fn isotropic_in<T>(
    ambient: &Lattice,
    sub: &IntMatrix,
    accept: &mut impl FnMut(Vec<BigInt>) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let red = lll(sub);
    let Some(g) = small_gram(&ambient.gram_of(&red)?) else {
        return Ok(None);
    };
    let Some(eu) = small_gram(&red.checked_mul(&red.transpose())?) else {
        return Ok(None);
    };
    let metric = |lam: f64| -> Vec<Vec<f64>> {
        (0..eu.len())
            .map(|i| (0..eu.len()).map(|j| eu[i][j] as f64 - lam * g[i][j] as f64).collect())
            .collect()
    };
    let Some(a) = METRIC_LAMBDAS
        .iter()
        .map(|&l| metric(l))
        .find(|a| short_vectors(a, 0.0, 0).is_some())
    else {
        return Ok(None);
    };
    let bt = red.transpose();
    let n = g.len();
    // Solve along the basis vector `j` of largest norm: for x in the span of
    // the others, `A x + (−p ± √(p² − A Q(x))) b_j` is isotropic whenever the
    // discriminant is a square, where `A = Q(b_j)` and `p = (x, b_j)`.
    let j = (0..n).max_by_key(|&i| (g[i][i], std::cmp::Reverse(i))).expect("rank >= 2");
    let big_a = g[j][j];
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let sub: Vec<Vec<f64>> = others.iter().map(|&i| others.iter().map(|&k| a[i][k]).collect()).collect();
    let mut seen = std::collections::HashSet::new();
    let mut r2 = 1.0;
    let mut best: Option<(i128, T)> = None;
    while r2 <= MAX_RADIUS_SQ {
        let Some(xs) = short_vectors(&sub, r2, ROUND_CAP) else {
            break;
        };
        let mut cands = Vec::new();
        for xs in std::iter::once(vec![0i64; n - 1]).chain(xs) {
            let mut x = vec![0i64; n];
            for (k, &i) in others.iter().enumerate() {
                x[i] = xs[k];
            }
            let p: i128 = (0..n).map(|i| x[i] as i128 * g[i][j]).sum();
            let qx = small_inner(&g, &x, &x);
            let roots: Vec<(i128, i128)> = if big_a == 0 {
                // isotropic b_j: (x + c b_j)² = Q(x) + 2cp
                if x.iter().all(|&t| t == 0) {
                    vec![(0, 1)]
                } else if p != 0 {
                    vec![(2 * p, -qx)]
                } else if qx == 0 {
                    vec![(1, 0)]
                } else {
                    vec![]
                }
            } else {
                match isqrt(p * p - big_a * qx) {
                    Some(sq) => vec![(big_a, -p + sq), (big_a, -p - sq)],
                    None => vec![],
                }
            };
            for (sx, sb) in roots {
                let mut c: Vec<i64> = x.iter().map(|&t| (t as i128 * sx) as i64).collect();
                c[j] += sb as i64;
                if c.iter().all(|&t| t == 0) {
                    continue;
                }
                let mut c = primitive(c);
                if c.iter().rev().find(|&&t| t != 0).is_some_and(|&t| t < 0) {
                    c.iter_mut().for_each(|t| *t = -*t);
                }
                debug_assert_eq!(small_inner(&g, &c, &c), 0);
                if seen.insert(c.clone()) {
                    cands.push(c);
                }
            }
        }
        cands.sort_by_key(|c| (small_inner(&eu, c, c), c.clone()));
        // After the first hit, one more round may still reveal shorter vectors
        // the enumeration metric ranked later.
        let bound = best.as_ref().map(|(s, _)| *s);
        for c in cands {
            let size = small_inner(&eu, &c, &c);
            if bound.is_some_and(|b| size >= b) {
                break;
            }
            if let Some(t) = accept(bt.mul_vec(&big(&c))?)? {
                best = Some((size, t));
                break;
            }
        }
        if bound.is_some() {
            break;
        }
        r2 *= 2.0;
    }
    Ok(best.map(|(_, t)| t))
}

fn isqrt(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let s = x.isqrt();
    (s * s == x).then_some(s)
}

fn quad(a: &[Vec<f64>], c: &[i64]) -> f64 {
    (0..c.len())
        .map(|i| c[i] as f64 * (0..c.len()).map(|j| a[i][j] * c[j] as f64).sum::<f64>())
        .sum()
}

/// A pair `(e, f)` of isotropic vectors with `(e, f) = 1` inside the
/// sublattice with basis rows `basis`, as ambient vectors; `e` is the first
/// vector of [`search_isotropic`] with divisibility 1 in the sublattice.
pub fn find_hyperbolic_pair(ambient: &Lattice, basis: &IntMatrix) -> Result<Option<(Vec<BigInt>, Vec<BigInt>)>> {
    let pairings = basis.checked_mul(ambient.gram())?;
    search_isotropic(ambient, basis, |e| {
        let (d, coeffs) = bezout(&pairings.mul_vec(&e)?);
        if !d.is_one() {
            return Ok(None);
        }
        let u = basis.transpose().mul_vec(&coeffs)?;
        let half = ambient.norm(&u)? / BigInt::from(2);
        let f: Vec<BigInt> = u.iter().zip(&e).map(|(x, y)| x - &half * y).collect();
        debug_assert!(ambient.norm(&e)?.is_zero() && ambient.norm(&f)?.is_zero());
        debug_assert!(ambient.inner(&e, &f)?.is_one());
        Ok(Some((e, f)))
    })
}

/// Up to `count` nonzero vectors (ambient coordinates, one of each `±`
/// pair) of the sublattice with basis rows `basis`, by Euclidean length.
pub fn short_vectors_of(basis: &IntMatrix, count: usize) -> Vec<Vec<BigInt>> {
    let red = lll(basis);
    let Some(eu) = small_gram(&red.checked_mul(&red.transpose()).expect("shape")) else {
        return Vec::new();
    };
    let a: Vec<Vec<f64>> = eu.iter().map(|r| r.iter().map(|&t| t as f64).collect()).collect();
    let mut r2 = 1.0;
    let mut best = Vec::new();
    while r2 <= MAX_RADIUS_SQ {
        match short_vectors(&a, r2, count.max(1) * 4) {
            Some(vs) => {
                best = vs;
                if best.len() >= count {
                    break;
                }
            }
            None => break,
        }
        r2 *= 2.0;
    }
    best.sort_by(|x, y| quad(&a, x).total_cmp(&quad(&a, y)).then_with(|| x.cmp(y)));
    best.truncate(count);
    let bt = red.transpose();
    best.iter().map(|c| bt.mul_vec(&big(c)).expect("shape")).collect()
}

/// A vector of `y + span(basis)` close to the origin (exact Babai rounding
/// in an LLL-reduced basis).
pub fn reduce_modulo(y: &[BigInt], basis: &IntMatrix) -> Vec<BigInt> {
    let red = lll(basis);
    if red.rows() == 0 {
        return y.to_vec();
    }
    let Some(inv) = inverse_q(&red.checked_mul(&red.transpose()).expect("shape")) else {
        return y.to_vec();
    };
    let rhs = to_rational(&red.mul_vec(y).expect("shape"));
    let coeffs: Vec<BigInt> = inv
        .iter()
        .map(|row| row.iter().zip(&rhs).map(|(p, q)| p * q).sum::<BigRational>().round().to_integer())
        .collect();
    let shift = red.transpose().mul_vec(&coeffs).expect("shape");
    y.iter().zip(&shift).map(|(p, q)| p - q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;

    #[test]
    fn lll_shortens() {
        let b = IntMatrix::from_i64(&[&[1, 0, 0], &[1000, 1, 0], &[3000, 7, 1]]);
        let r = lll(&b);
        assert!(r.entries().iter().all(|x| x.magnitude() <= &2u32.into()));
        assert_eq!(r.det().unwrap().magnitude(), &1u32.into());
    }

    #[test]
    fn pair_in_complement() {
        let m = make_standard("Mukai", None).unwrap();
        let mut rows = Vec::new();
        for (i, j) in [(16, 17), (18, 19)] {
            let mut v = vec![BigInt::zero(); 24];
            v[i] = BigInt::from(3);
            v[j] = BigInt::from(5);
            rows.push(v);
        }
        let mut v = vec![BigInt::zero(); 24];
        v[22] = BigInt::one();
        v[23] = BigInt::from(4);
        rows.push(v);
        let s = IntMatrix::from_rows(&rows, 24).unwrap();
        let k = m.orth_complement_of(&s).unwrap();
        let (e, f) = find_hyperbolic_pair(&m, k.basis()).unwrap().unwrap();
        assert!(m.norm(&e).unwrap().is_zero());
        assert!(m.norm(&f).unwrap().is_zero());
        assert_eq!(m.inner(&e, &f).unwrap(), BigInt::one());
        for r in &rows {
            assert!(m.inner(r, &e).unwrap().is_zero());
            assert!(m.inner(r, &f).unwrap().is_zero());
        }
    }
}
