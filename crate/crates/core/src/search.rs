//! Deterministic enumeration of small integer vectors.
//!
//! Vectors are visited by height (largest absolute coordinate), then
//! lexicographically with coordinate values ordered `0, 1, -1, 2, -2, ...`.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::linalg::IntMatrix;

/// Values of absolute value at most `h` in search order.
pub(crate) fn value_order(h: i64) -> Vec<i64> {
    let mut v = vec![0];
    for k in 1..=h {
        v.push(k);
        v.push(-k);
    }
    v
}

/// Calls `f` on every vector of length `dim` with height exactly `h`.
pub(crate) fn for_each_of_height<B>(
    dim: usize,
    h: i64,
    mut f: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if dim == 0 {
        return if h == 0 { f(&[]) } else { ControlFlow::Continue(()) };
    }
    let vals = value_order(h);
    let mut idx = vec![0usize; dim];
    let mut x = vec![0i64; dim];
    loop {
        if x.iter().any(|v| v.abs() == h) {
            f(&x)?;
        }
        let mut pos = dim;
        loop {
            if pos == 0 {
                return ControlFlow::Continue(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < vals.len() {
                x[pos] = vals[idx[pos]];
                break;
            }
            idx[pos] = 0;
            x[pos] = 0;
        }
    }
}

/// Calls `f` on every nonzero vector of height at most `bound`, lowest
/// height first.
pub(crate) fn for_each_up_to<B>(
    dim: usize,
    bound: i64,
    mut f: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    for h in 1..=bound {
        for_each_of_height(dim, h, &mut f)?;
    }
    ControlFlow::Continue(())
}

/// Gram matrix in machine integers, when every entry fits.
pub(crate) fn small_gram(g: &IntMatrix) -> Option<Vec<Vec<i128>>> {
    (0..g.rows())
        .map(|i| g.row(i).iter().map(|x| x.to_i128()).collect())
        .collect()
}

pub(crate) fn small_inner(g: &[Vec<i128>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let row = &g[i];
        let mut t = 0i128;
        for (j, &yj) in y.iter().enumerate() {
            if yj != 0 {
                t += row[j] * yj as i128;
            }
        }
        s += xi as i128 * t;
    }
    s
}

pub(crate) fn big(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&v| BigInt::from(v)).collect()
}
