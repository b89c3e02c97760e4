//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! solving and integer kernels.
//!
//! Every routine works on [`IntMatrix`], a dense row-major matrix of
//! arbitrary-precision integers. Pivot selection is deterministic, so two runs
//! on the same input always return the same transforms.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(rows * cols, data.len()));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    /// `cols` is needed to describe a matrix with zero rows.
    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::dims(cols, r.len()));
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<BigInt> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged literal matrix");
                r.iter().map(|&x| BigInt::from(x))
            })
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::dims(self.cols, v.len()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::dims(self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        IntMatrix::from_rows(&rows, self.cols).expect("rows share the column count")
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::dims("square matrix", format!("{}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = -x;
        }
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let t = &self.data[src * self.cols + k] * c;
            self.data[dst * self.cols + k] += t;
        }
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = &self.data[r * self.cols + src] * c;
            self.data[r * self.cols + dst] += t;
        }
    }

    /// Replaces rows (i, j) by (a*ri + b*rj, c*ri + d*rj).
    fn combine_rows(&mut self, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
        for k in 0..self.cols {
            let x = self.data[i * self.cols + k].clone();
            let y = self.data[j * self.cols + k].clone();
            self.data[i * self.cols + k] = a * &x + b * &y;
            self.data[j * self.cols + k] = c * &x + d * &y;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Non-negative gcd of all entries (0 for the empty or zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Row-style Hermite normal form. Returns `(H, U)` with `U * M = H`,
/// `U` unimodular, `H` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !h[(i, c)].is_zero()) else {
            continue;
        };
        h.swap_rows(r, p);
        u.swap_rows(r, p);
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            let a = h[(r, c)].clone();
            let b = h[(i, c)].clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let c2 = -(&b / &g);
            let d2 = &a / &g;
            h.combine_rows(r, i, &s, &t, &c2, &d2);
            u.combine_rows(r, i, &s, &t, &c2, &d2);
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                let nq = -q;
                h.add_row(i, r, &nq);
                u.add_row(i, r, &nq);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Result of a Smith normal form computation: `D = U * M * V`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, maintained alongside it.
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries, in order (each divides the next).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form with both transforms. Pivot choice is the
/// smallest-magnitude entry of the active block, first in row-major order.
pub fn smith(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let mut t = 0;
    'outer: while t < rows.min(cols) {
        loop {
            // smallest nonzero entry in the active block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_row(i, t, &nq);
                u.add_row(i, t, &nq);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let nq = -q.clone();
                a.add_col(j, t, &nq);
                v.add_col(j, t, &nq);
                // V <- V E, V^-1 <- E^-1 V^-1: row t of V^-1 gains q * row j
                v_inv.add_row(t, j, &q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find_map(|i| {
                (t + 1..cols)
                    .any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)]))
                    .then_some(i)
            });
            if let Some(i) = bad {
                let one = BigInt::one();
                a.add_row(t, i, &one);
                u.add_row(t, i, &one);
                continue;
            }
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
        t += 1;
    }
    Smith {
        d: a,
        u,
        v,
        v_inv,
        rank: t,
    }
}

/// Smith normal form `(D, U, V)` with `D = U * M * V`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith(m);
    (s.d, s.u, s.v)
}

/// Integer solution of `M x = b`, or `None` when only rational solutions
/// (or none at all) exist.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::dims(m.rows(), b.len()));
    }
    let s = smith(m);
    let c = s.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let d = &s.d[(i, i)];
            if !ci.is_multiple_of(d) {
                return Ok(None);
            }
            y[i] = ci / d;
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(s.v.mul_vec(&y)?))
}

/// Basis (as rows, in Hermite normal form) of the integer kernel
/// `{x : M x = 0}`. The result is saturated.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith(m);
    let idx: Vec<usize> = (s.rank..m.cols()).collect();
    let k = s.v.select_cols(&idx).transpose();
    hnf(&k).0
}

/// Basis (rows, Hermite normal form) of the saturation of the row span of
/// `b`, i.e. its rational span intersected with `Z^n`.
pub fn saturation_basis(b: &IntMatrix) -> IntMatrix {
    let s = smith(b);
    let sat = s.v_inv.select_rows(0..s.rank);
    hnf(&sat).0
}

/// Inverse of a square matrix with determinant ±1 (`V U` from the Smith
/// form, whose diagonal is then the identity).
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if !m.is_square() {
        return None;
    }
    let s = smith(m);
    if s.rank != m.rows() || !s.invariant_factors().iter().all(One::is_one) {
        return None;
    }
    Some(s.v.checked_mul(&s.u).expect("square"))
}

/// Bezout coefficients: `(g, c)` with `g = gcd(a) >= 0` and `sum c_i a_i = g`.
pub fn bezout(a: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut c = vec![BigInt::zero(); a.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let e = g.extended_gcd(x);
        for ci in c.iter_mut().take(i) {
            *ci *= &e.x;
        }
        c[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for ci in &mut c {
            *ci = -&*ci;
        }
    }
    (g, c)
}

/// Drops zero rows.
pub fn nonzero_rows(m: &IntMatrix) -> IntMatrix {
    m.select_rows((0..m.rows()).filter(|&i| m.row(i).iter().any(|x| !x.is_zero())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bezout_identity() {
        let a = to_bigints(&[6, 10, 15]);
        let (g, c) = bezout(&a);
        assert_eq!(g, BigInt::one());
        assert_eq!(dot(&a, &c), g);
        let a = to_bigints(&[0, -4, 6]);
        let (g, c) = bezout(&a);
        assert_eq!(g, BigInt::from(2));
        assert_eq!(dot(&a, &c), g);
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn hnf_identity_and_zero() {
        let id = IntMatrix::identity(2);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
        let z = IntMatrix::zeros(2, 2);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_small_example() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[1, 3]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(&u * &m, h);
        assert_eq!(u.det().unwrap().abs(), b(1));
    }

    #[test]
    fn snf_examples() {
        let (d, u, v) = snf(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
        assert_eq!(&(&u * &IntMatrix::from_i64(&[&[2, 0], &[0, 3]])) * &v, d);
        let (d, _, _) = snf(&IntMatrix::from_i64(&[&[2, 0], &[0, 2]]));
        assert_eq!(d, IntMatrix::from_i64(&[&[2, 0], &[0, 2]]));
        let (d, u, v) = snf(&IntMatrix::identity(3));
        assert_eq!(d, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
        assert_eq!(v, IntMatrix::identity(3));
    }

    #[test]
    fn smith_tracks_inverse() {
        let m = IntMatrix::from_i64(&[&[4, 6, 2], &[2, 9, -3], &[0, 12, 6]]);
        let s = smith(&m);
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(3));
        assert_eq!(&(&s.u * &m) * &s.v, s.d);
    }

    #[test]
    fn solve_examples() {
        let m = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(solve_integer(&m, &[b(4)]).unwrap(), Some(vec![b(2)]));
        assert_eq!(solve_integer(&m, &[b(3)]).unwrap(), None);
        let m = IntMatrix::from_i64(&[&[1, 1]]);
        let x = solve_integer(&m, &[b(5)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![b(5)]);
        assert!(solve_integer(&m, &[b(1), b(2)]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, IntMatrix::from_i64(&[&[1, -1]]));
        let k = kernel_basis(&IntMatrix::identity(3));
        assert_eq!(k.rows(), 0);
        let k = kernel_basis(&IntMatrix::from_i64(&[&[2, 4]]));
        assert_eq!(k, IntMatrix::from_i64(&[&[2, -1]]));
    }

    #[test]
    fn kernel_of_empty_matrix_is_everything() {
        let m = IntMatrix::zeros(0, 3);
        assert_eq!(kernel_basis(&m), IntMatrix::identity(3));
    }

    #[test]
    fn saturation_removes_index() {
        let m = IntMatrix::from_i64(&[&[1, -6], &[1, 6]]);
        assert_eq!(saturation_basis(&m), IntMatrix::identity(2));
        let m = IntMatrix::from_i64(&[&[2, 0]]);
        assert_eq!(saturation_basis(&m), IntMatrix::from_i64(&[&[1, 0]]));
    }

    #[test]
    fn bareiss_det() {
        let m = IntMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.det().unwrap(), b(-2));
        assert_eq!(IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).det().unwrap(), b(0));
    }
}
