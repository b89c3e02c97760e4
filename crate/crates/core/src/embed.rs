//! Bounded searches for primitive embeddings and for extensions of partial
//! isometries.
//!
//! Both searches assign images to basis vectors one at a time, pruning as
//! soon as a pairing with an earlier image disagrees with the target Gram
//! matrix. Candidates for a single image are visited by height, then by
//! number of nonzero coordinates, then by the positions of those
//! coordinates, then by their values in the order `1, -1, 2, -2, ...`.
//! Heights are searched by iterative deepening, so the first result has the
//! smallest possible height.

use std::collections::HashMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::lattice::Lattice;
use crate::linalg::{kernel_basis, smith, IntMatrix};
use crate::rational::{inverse_q, q, to_integral};
use crate::search::{big, for_each_up_to, small_gram};

/// A primitive embedding: image basis rows with their saturation certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Embedding {
    #[serde(serialize_with = "crate::json::ser")]
    pub basis: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "crate::json::ser")]
    pub gram: Vec<Vec<BigInt>>,
    /// Invariant factors of the coordinate matrix; all ones iff saturated.
    #[serde(serialize_with = "crate::json::ser")]
    pub invariant_factors: Vec<BigInt>,
    pub saturated: bool,
    pub height: i64,
}

impl Embedding {
    pub fn basis_matrix(&self) -> IntMatrix {
        let cols = self.basis.first().map_or(0, Vec::len);
        IntMatrix::from_rows(&self.basis, cols).expect("rectangular basis")
    }
}

struct Cand {
    x: Vec<i64>,
    gx: Vec<i128>,
}

fn cand_key(x: &[i64]) -> (i64, usize, Vec<usize>, Vec<i64>) {
    let height = x.iter().map(|v| v.abs()).max().unwrap_or(0);
    let positions: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0).collect();
    let pattern = positions
        .iter()
        .map(|&i| if x[i] > 0 { 2 * x[i] - 1 } else { -2 * x[i] })
        .collect();
    (height, positions.len(), positions, pattern)
}

/// All vectors of the given norm and height at most `h`, in candidate order.
fn candidates(gram: &[Vec<i128>], norm: i128, h: i64) -> Vec<Cand> {
    let dim = gram.len();
    let mut out: Vec<Cand> = Vec::new();
    let _ = for_each_up_to::<()>(dim, h, |x| {
        let gx: Vec<i128> = (0..dim)
            .map(|i| (0..dim).map(|j| gram[i][j] * x[j] as i128).sum())
            .collect();
        let nn: i128 = gx.iter().zip(x).map(|(a, &b)| a * b as i128).sum();
        if nn == norm {
            out.push(Cand { x: x.to_vec(), gx });
        }
        ControlFlow::Continue(())
    });
    out.sort_by_cached_key(|c| cand_key(&c.x));
    out
}

/// Backtracking over images of `target.len()` basis vectors in the
/// coordinate space with Gram `gram`, each of height at most `h`.
fn backtrack(
    gram: &[Vec<i128>],
    target: &[Vec<i128>],
    h: i64,
    leaf: &mut dyn FnMut(&[&[i64]]) -> Result<bool>,
) -> Result<Option<Vec<Vec<i64>>>> {
    let r = target.len();
    let mut by_norm: HashMap<i128, Vec<Cand>> = HashMap::new();
    for i in 0..r {
        by_norm
            .entry(target[i][i])
            .or_insert_with(|| candidates(gram, target[i][i], h));
    }
    let lists: Vec<&Vec<Cand>> = (0..r).map(|i| &by_norm[&target[i][i]]).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    let mut next = vec![0usize; r + 1];
    loop {
        let depth = chosen.len();
        if depth == r {
            let xs: Vec<&[i64]> = (0..r).map(|i| lists[i][chosen[i]].x.as_slice()).collect();
            if leaf(&xs)? {
                return Ok(Some(xs.iter().map(|x| x.to_vec()).collect()));
            }
            let Some(last) = chosen.pop() else {
                return Ok(None);
            };
            next[r - 1] = last + 1;
            continue;
        }
        let list = lists[depth];
        let mut found = None;
        for idx in next[depth]..list.len() {
            let c = &list[idx];
            let ok = (0..depth).all(|j| {
                let prev = &lists[j][chosen[j]];
                let p: i128 = prev.gx.iter().zip(&c.x).map(|(a, &b)| a * b as i128).sum();
                p == target[j][depth]
            });
            if ok {
                found = Some(idx);
                break;
            }
        }
        match found {
            Some(idx) => {
                chosen.push(idx);
                next[depth + 1] = 0;
            }
            None => {
                let Some(last) = chosen.pop() else {
                    return Ok(None);
                };
                next[depth - 1] = last + 1;
            }
        }
    }
}

fn small(g: &IntMatrix, what: &str) -> Result<Vec<Vec<i128>>> {
    small_gram(g).ok_or_else(|| Error::Precondition(format!("{what} Gram entries too large for search")))
}

fn check_support(l: &Lattice, support: Option<&[usize]>) -> Result<Vec<usize>> {
    let s: Vec<usize> = match support {
        Some(s) => s.to_vec(),
        None => (0..l.rank()).collect(),
    };
    if s.iter().any(|&i| i >= l.rank()) {
        return Err(Error::Precondition("support index out of range".into()));
    }
    Ok(s)
}

fn lift(support: &[usize], rank: usize, x: &[i64]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); rank];
    for (k, &i) in support.iter().enumerate() {
        v[i] = BigInt::from(x[k]);
    }
    v
}

/// Primitive embedding of the lattice with Gram `source` into `target`,
/// with image coordinates of height at most `bound`.
pub fn find_primitive_embedding(source: &Lattice, target: &Lattice, bound: i64) -> Result<Option<Embedding>> {
    find_primitive_embedding_in(source.gram(), target, bound, None)
}

/// As [`find_primitive_embedding`], with images restricted to the given
/// coordinates (all others zero). The search is exhaustive within the
/// restriction and the bound.
pub fn find_primitive_embedding_in(
    source: &IntMatrix,
    target: &Lattice,
    bound: i64,
    support: Option<&[usize]>,
) -> Result<Option<Embedding>> {
    if bound < 1 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    if !source.is_square() || source.rows() > target.rank() {
        return Err(Error::Precondition("source rank exceeds target rank".into()));
    }
    let support = check_support(target, support)?;
    let sub = target.gram().select_rows(support.iter().copied()).select_cols(&support);
    let gram = small(&sub, "target")?;
    let want = small(source, "source")?;
    let rank = target.rank();
    for h in 1..=bound {
        let mut leaf = |xs: &[&[i64]]| -> Result<bool> {
            let rows: Vec<Vec<BigInt>> = xs.iter().map(|x| lift(&support, rank, x)).collect();
            let b = IntMatrix::from_rows(&rows, rank)?;
            Ok(smith(&b).invariant_factors().iter().all(One::is_one))
        };
        if let Some(xs) = backtrack(&gram, &want, h, &mut leaf)? {
            let rows: Vec<Vec<BigInt>> = xs.iter().map(|x| lift(&support, rank, x)).collect();
            let b = IntMatrix::from_rows(&rows, rank)?;
            let inv = smith(&b).invariant_factors();
            let g = target.gram_of(&b)?;
            debug_assert_eq!(&g, source);
            return Ok(Some(Embedding {
                basis: rows,
                gram: g.to_rows(),
                saturated: inv.iter().all(One::is_one),
                invariant_factors: inv,
                height: h,
            }));
        }
    }
    Ok(None)
}

/// Outcome of [`extend_isometry`].
#[derive(Clone, Debug, PartialEq)]
pub enum Extension {
    Found(Isometry),
    /// The complements cannot be glued (diagnostic attached).
    Incompatible(String),
    /// Nothing within the bound.
    NotFound { bound: i64 },
}

impl Extension {
    pub fn found(self) -> Option<Isometry> {
        match self {
            Extension::Found(g) => Some(g),
            _ => None,
        }
    }
}

/// Extends the map sending the rows of `s1` to the rows of `s2` to an
/// isometry of `ltilde`.
///
/// The work happens inside `support`, a set of coordinates spanning an
/// orthogonal unimodular summand that contains both sublattices; outside it
/// the result is the identity. The orthogonal complements `K1`, `K2` of
/// `s1`, `s2` in the summand are computed, and isometries `K1 → K2` are
/// searched in coordinates of a basis of `K2`; a candidate is accepted when
/// the glued map is integral.
pub fn extend_isometry(
    ltilde: &Lattice,
    s1: &IntMatrix,
    s2: &IntMatrix,
    bound: i64,
    support: Option<&[usize]>,
) -> Result<Extension> {
    let rank = ltilde.rank();
    if s1.cols() != rank || s2.cols() != rank || s1.rows() != s2.rows() {
        return Err(Error::dims(format!("{}x{rank}", s1.rows()), format!("{}x{}", s2.rows(), s2.cols())));
    }
    if ltilde.gram_of(s1)? != ltilde.gram_of(s2)? {
        return Err(Error::Precondition("the basis map does not preserve the Gram matrix".into()));
    }
    for s in [s1, s2] {
        if !smith(s).invariant_factors().iter().all(One::is_one) || smith(s).rank != s.rows() {
            return Err(Error::Precondition("sublattices must be saturated with independent rows".into()));
        }
    }
    let support = check_support(ltilde, support)?;
    let outside: Vec<usize> = (0..rank).filter(|i| !support.contains(i)).collect();
    let g = ltilde.gram();
    if support.iter().any(|&i| outside.iter().any(|&j| !g[(i, j)].is_zero())) {
        return Err(Error::Precondition("support is not an orthogonal summand".into()));
    }
    for s in [s1, s2] {
        if (0..s.rows()).any(|r| outside.iter().any(|&j| !s[(r, j)].is_zero())) {
            return Err(Error::Precondition("sublattice leaves the support".into()));
        }
    }
    let gu = g.select_rows(support.iter().copied()).select_cols(&support);
    if gu.det()?.magnitude() != &num_bigint::BigUint::one() {
        return Err(Error::Precondition("support summand is not unimodular".into()));
    }
    let a1 = s1.select_cols(&support);
    let a2 = s2.select_cols(&support);
    let k1 = kernel_basis(&a1.checked_mul(&gu)?);
    let k2 = kernel_basis(&a2.checked_mul(&gu)?);
    let gk1 = k1.checked_mul(&gu)?.checked_mul(&k1.transpose())?;
    let gk2 = k2.checked_mul(&gu)?.checked_mul(&k2.transpose())?;
    let f1 = smith(&gk1).invariant_factors();
    let f2 = smith(&gk2).invariant_factors();
    if f1 != f2 {
        return Ok(Extension::Incompatible(format!(
            "complements have different discriminant groups: {f1:?} vs {f2:?}"
        )));
    }
    let a = a1.stack(&k1)?;
    let a_t_inv = inverse_q(&a.transpose()).ok_or_else(|| Error::Invariant("singular frame".into()))?;
    let kg = small(&gk2, "complement")?;
    let want = small(&gk1, "complement")?;
    let k = support.len();

    let assemble = |images: &[&[i64]]| -> Result<Option<IntMatrix>> {
        let mut b = a2.clone();
        if !images.is_empty() {
            let rows: Vec<Vec<BigInt>> = images
                .iter()
                .map(|y| k2.transpose().mul_vec(&big(y)))
                .collect::<Result<_>>()?;
            b = b.stack(&IntMatrix::from_rows(&rows, k)?)?;
        }
        // g_U Aᵀ = Bᵀ
        let bt = b.transpose();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let s = (0..k)
                    .map(|t| q(&bt[(i, t)]) * &a_t_inv[t][j])
                    .fold(num_rational::BigRational::zero(), |x, y| x + y);
                match to_integral(&[s]) {
                    Some(v) => m[(i, j)] = v[0].clone(),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(m))
    };
    let full = |m: &IntMatrix| -> IntMatrix {
        let mut out = IntMatrix::identity(rank);
        for (ii, &i) in support.iter().enumerate() {
            for (jj, &j) in support.iter().enumerate() {
                out[(i, j)] = m[(ii, jj)].clone();
            }
        }
        out
    };

    if k1.rows() == 0 {
        return Ok(match assemble(&[])? {
            Some(m) => Extension::Found(Isometry::new(ltilde, full(&m))?),
            None => Extension::Incompatible("map on the sublattice is not integral".into()),
        });
    }
    for h in 1..=bound {
        let mut hit: Option<IntMatrix> = None;
        let mut leaf = |xs: &[&[i64]]| -> Result<bool> {
            if let Some(m) = assemble(xs)? {
                hit = Some(m);
                return Ok(true);
            }
            Ok(false)
        };
        if backtrack(&kg, &want, h, &mut leaf)?.is_some() {
            let m = hit.expect("leaf recorded the matrix");
            return Ok(Extension::Found(Isometry::new(ltilde, full(&m))?));
        }
    }
    Ok(Extension::NotFound { bound })
}
