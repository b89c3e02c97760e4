//! Realizing every orbit class orthogonal to a given positive plane.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::reduce::{reduce_modulo, search_isotropic, short_vectors_of};
use crate::embed::{extend_isometry, find_primitive_embedding_in, Extension};
use crate::error::{Error, Result};
use crate::lattice::{is_definite, Lattice};
use crate::linalg::{bezout, kernel_basis, smith, solve_integer, IntMatrix};
use crate::orbits::{f_invariant_in, scan_sigma, sigma_check_in, Kind, Model, OrbitClass};
use crate::search::big;

/// A positive-definite even rank-2 lattice `T` with a saturated embedding
/// into `Lambda(n)` (resp. `KummerLambda(n)`).
#[derive(Clone, Debug)]
pub struct PeriodData {
    pub model: Model,
    pub t: Lattice,
    /// Image basis rows in lattice coordinates.
    pub emb: IntMatrix,
}

impl PeriodData {
    pub fn new(n: i64, kind: Kind, emb: IntMatrix) -> Result<Self> {
        Self::from_model(Model::new(n, kind)?, emb)
    }

    pub fn from_model(model: Model, emb: IntMatrix) -> Result<Self> {
        if emb.rows() != 2 {
            return Err(Error::Precondition("period data needs a rank-2 embedding".into()));
        }
        let g = model.lattice.gram_of(&emb)?;
        if !is_definite(&g, true) {
            return Err(Error::NotPositive(format!("{g:?}")));
        }
        let s = smith(&emb);
        if s.rank != 2 || !s.invariant_factors().iter().all(One::is_one) {
            return Err(Error::Precondition("embedding is not saturated".into()));
        }
        let t = Lattice::new(g)?;
        Ok(PeriodData { model, t, emb })
    }

    /// `T = diag(2, 2)` spanned by `e1 + f1` and `e2 + f2` of the first two
    /// hyperbolic planes.
    pub fn standard(n: i64, kind: Kind) -> Result<Self> {
        let model = Model::new(n, kind)?;
        let r = model.lattice.rank();
        let s = model.h3_start();
        let mut rows = vec![vec![BigInt::zero(); r]; 2];
        for (i, row) in rows.iter_mut().enumerate() {
            row[s + 2 * i] = BigInt::one();
            row[s + 2 * i + 1] = BigInt::one();
        }
        let emb = IntMatrix::from_rows(&rows, r)?;
        Self::from_model(model, emb)
    }

    pub fn n(&self) -> i64 {
        self.model.n
    }

    pub fn kind(&self) -> Kind {
        self.model.kind
    }

    /// `ι(T)` as ambient rows.
    pub fn embedded(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = (0..2)
            .map(|i| self.model.embed(self.emb.row(i)).expect("lattice width"))
            .collect();
        IntMatrix::from_rows(&rows, self.model.ambient.rank()).expect("ambient width")
    }

    /// Whether `ι(T) ⊕ Z v` is saturated in the ambient lattice.
    pub fn in_a(&self) -> bool {
        let m = self.embedded().stack(&IntMatrix::from_rows(std::slice::from_ref(&self.model.v), self.model.ambient.rank()).expect("width")).expect("width");
        smith(&m).invariant_factors().iter().all(One::is_one)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Embed `T ⊕ H`, then extend the isometry matching `T ⊕ Z v1` with
    /// `ι(T) ⊕ Z v`.
    Pipeline,
    /// Build the hyperbolic plane directly inside `ι(T)^⊥`.
    Direct,
}

#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub class: OrbitClass,
    #[serde(serialize_with = "crate::json::ser")]
    pub delta: Vec<BigInt>,
    pub strategy: Strategy,
}

/// Default search height for [`realize_orbit`].
pub fn default_realize_bound(n: i64) -> i64 {
    2 * n + 2
}

/// Coordinates of the hyperbolic planes of the ambient lattice.
fn hyperbolic_pairs(model: &Model) -> Vec<(usize, usize)> {
    let start = model.h3_start();
    (0..4).map(|i| (start + 2 * i, start + 2 * i + 1)).collect()
}

fn supported_on(x: &[BigInt], coords: &[usize]) -> bool {
    x.iter().enumerate().all(|(i, t)| t.is_zero() || coords.contains(&i))
}

/// A class `δ ⊥ T` with `f(δ) = c`; the result is re-verified.
pub fn realize_orbit(pd: &PeriodData, c: &OrbitClass, bound: i64) -> Result<Realization> {
    if c.kind != pd.kind() || c.n != pd.n() {
        return Err(Error::Precondition(format!("class {c} belongs to another lattice")));
    }
    if !pd.in_a() {
        return Err(Error::Precondition("ι(T) ⊕ Zv is not saturated".into()));
    }
    let pairs = hyperbolic_pairs(&pd.model);
    let hcoords: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let it = pd.embedded();
    // The pipeline searches for an embedding of T ⊕ H, which is only
    // practical when the plane has small coordinates.
    let use_pipeline = (0..2).all(|i| supported_on(it.row(i), &hcoords) && height(it.row(i)) <= BigInt::from(bound));
    let pipeline = if use_pipeline {
        match realize_pipeline(pd, c, bound, &pairs, &hcoords) {
            Ok(d) => Some(d),
            Err(Error::SearchExhausted { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (delta, strategy) = match pipeline {
        Some(d) => (d, Strategy::Pipeline),
        None => (realize_direct(pd, c)?, Strategy::Direct),
    };
    verify(pd, c, &delta)?;
    Ok(Realization {
        class: *c,
        delta,
        strategy,
    })
}

fn verify(pd: &PeriodData, c: &OrbitClass, delta: &[BigInt]) -> Result<()> {
    let l = &pd.model.lattice;
    for i in 0..2 {
        if !l.inner(delta, pd.emb.row(i))?.is_zero() {
            return Err(Error::Invariant("realized class is not orthogonal to T".into()));
        }
    }
    if !sigma_check_in(&pd.model, delta)? {
        return Err(Error::Invariant("realized class is not exceptional".into()));
    }
    let got = f_invariant_in(&pd.model, delta)?;
    if got != *c {
        return Err(Error::Invariant(format!("realized class has f = {got}, wanted {c}")));
    }
    Ok(())
}

fn realize_pipeline(
    pd: &PeriodData,
    c: &OrbitClass,
    bound: i64,
    pairs: &[(usize, usize)],
    hcoords: &[usize],
) -> Result<Vec<BigInt>> {
    let ambient = &pd.model.ambient;
    let rank = ambient.rank();
    let source = pd.t.gram().direct_sum(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]]));
    let emb = find_primitive_embedding_in(&source, ambient, bound, Some(hcoords))?.ok_or_else(|| {
        Error::SearchExhausted {
            stage: "find_primitive_embedding of T ⊕ H".into(),
            bound,
        }
    })?;
    let rows = emb.basis;
    let (ep, fp) = (&rows[2], &rows[3]);
    let (a, b) = (BigInt::from(c.a), BigInt::from(c.b));
    let v1: Vec<BigInt> = ep.iter().zip(fp).map(|(x, y)| &a * x - &b * y).collect();
    let dt: Vec<BigInt> = ep.iter().zip(fp).map(|(x, y)| &a * x + &b * y).collect();
    let it = pd.embedded();
    let v = &pd.model.v;

    let same_t = rows[0] == it.row(0) && rows[1] == it.row(1);
    let free: Vec<usize> = pairs
        .iter()
        .filter(|&&(p, q)| (0..2).all(|i| it[(i, p)].is_zero() && it[(i, q)].is_zero()))
        .flat_map(|&(p, q)| [p, q])
        .collect();
    let ext = if same_t && supported_on(&v1, &free) && supported_on(v, &free) {
        let s1 = IntMatrix::from_rows(std::slice::from_ref(&v1), rank)?;
        let s2 = IntMatrix::from_rows(std::slice::from_ref(v), rank)?;
        extend_isometry(ambient, &s1, &s2, bound, Some(&free))?
    } else {
        let s1 = IntMatrix::from_rows(&[rows[0].clone(), rows[1].clone(), v1.clone()], rank)?;
        let s2 = it.stack(&IntMatrix::from_rows(std::slice::from_ref(v), rank)?)?;
        extend_isometry(ambient, &s1, &s2, bound, Some(hcoords))?
    };
    let g = match ext {
        Extension::Found(g) => g,
        Extension::Incompatible(why) => {
            return Err(Error::Invariant(format!("extend_isometry: {why}")));
        }
        Extension::NotFound { bound } => {
            return Err(Error::SearchExhausted {
                stage: "extend_isometry".into(),
                bound,
            })
        }
    };
    let y = g.apply(&dt)?;
    pd.model
        .pull_back(&y)?
        .ok_or_else(|| Error::Invariant("g(δ̃) is not in the image of ι".into()))
}

/// Direct construction of a hyperbolic plane `H' ⊥ ι(T)` containing `v`
/// as `a E' - b F'`; then `δ̃ = a E' + b F'`.
///
/// With `a a* = 1 + t b`, any `y ⊥ ι(T)` with `(y, v) = 1 + 2tb` and
/// `(y, y) = -2 a* t` gives `E' = a* v + b y` and `F' = t v + a y`. Such a
/// `y` is assembled from a solution of `(y1, ι(T)) = 0, (y1, v) = 1` and a
/// hyperbolic pair `(P, Q)` in `(ι(T) ⊕ Z v)^⊥`.
/// Number of short complement vectors tried by [`realize_direct`].
const DIRECT_SHIFTS: usize = 400;
/// Window of multiples of the divisibility vector tried per shift.
const DIRECT_WINDOW: i64 = 24;

/// Builds `δ̃ = aE' + bF'` with `E' = a*·v + b·y` and `F' = t·v + a·y`, where
/// `a·a* = 1 + t·b`. These span a hyperbolic plane through `v` as soon as
/// `y ⊥ ι(T)`, `(y, v) = 1 + 2tb` and `(y, y) = −2a*t`.
fn realize_direct(pd: &PeriodData, c: &OrbitClass) -> Result<Vec<BigInt>> {
    let ambient = &pd.model.ambient;
    let rank = ambient.rank();
    let v = &pd.model.v;
    let it = pd.embedded();
    let frame = it.stack(&IntMatrix::from_rows(std::slice::from_ref(v), rank)?)?;
    let comp = ambient.orth_complement_of(&frame)?;
    let y1 = solve_integer(&frame.checked_mul(ambient.gram())?, &big(&[0, 0, 1]))?
        .ok_or_else(|| Error::Invariant("no y with (y, T) = 0 and (y, v) = 1".into()))?;

    let (a, b) = (BigInt::from(c.a), BigInt::from(c.b));
    let (a_star, t) = if b.abs().is_one() {
        // a = 1, b = -1: a* = 1, t = 0
        (BigInt::one(), BigInt::zero())
    } else {
        let e = a.extended_gcd(&b);
        // a x + b y = 1, so a* = x and t = -y
        (e.x, -e.y)
    };
    debug_assert_eq!(&a * &a_star, BigInt::one() + &t * &b);
    let two = BigInt::from(2);
    let s = BigInt::one() + &two * &t * &b;
    let target = -&two * &a_star * &t;
    let ys: Vec<BigInt> = y1.iter().map(|x| x * &s).collect();
    let ys = reduce_modulo(&ys, comp.basis());
    let y = vector_of_norm(ambient, comp.basis(), &ys, &target)?.ok_or_else(|| Error::SearchExhausted {
        stage: "vector of prescribed norm orthogonal to T and v".into(),
        bound: DIRECT_SHIFTS as i64,
    })?;
    let e: Vec<BigInt> = (0..rank).map(|i| &a_star * &v[i] + &b * &y[i]).collect();
    let f: Vec<BigInt> = (0..rank).map(|i| &t * &v[i] + &a * &y[i]).collect();
    debug_assert!(ambient.norm(&e)?.is_zero() && ambient.norm(&f)?.is_zero());
    debug_assert!(ambient.inner(&e, &f)?.is_one());
    let dt: Vec<BigInt> = (0..rank).map(|i| &a * &e[i] + &b * &f[i]).collect();
    pd.model
        .pull_back(&dt)?
        .ok_or_else(|| Error::Invariant("δ̃ is not in the image of ι".into()))
}

/// A vector `y ∈ y0 + C` with `(y, y) = target`, where `C` has basis rows
/// `comp`. With `e ∈ C` isotropic and `z ∈ C`, the vector
/// `y0 + z + λe` has norm `(y0 + z)² + 2λ(y0 + z, e)`, so it suffices that
/// `m = (y0 + z, e)` divides `(target − (y0 + z)²) / 2`; `z` runs over
/// short vectors plus multiples of a vector `w` with `(w, e)` minimal.
fn vector_of_norm(ambient: &Lattice, comp: &IntMatrix, y0: &[BigInt], target: &BigInt) -> Result<Option<Vec<BigInt>>> {
    let pairings = comp.checked_mul(ambient.gram())?;
    let shifts: Vec<Vec<BigInt>> = std::iter::once(vec![BigInt::zero(); y0.len()])
        .chain(short_vectors_of(comp, DIRECT_SHIFTS))
        .collect();
    let two = BigInt::from(2);
    search_isotropic(ambient, comp, |e| {
        let (d, coeffs) = bezout(&pairings.mul_vec(&e)?);
        if d.is_zero() {
            return Ok(None);
        }
        let w = comp.transpose().mul_vec(&coeffs)?;
        // only (w, e) matters, so w may be shifted by C ∩ e^⊥
        let ker = kernel_basis(&IntMatrix::from_rows(&[pairings.mul_vec(&e)?], comp.rows())?);
        let w = reduce_modulo(&w, &ker.checked_mul(comp)?);
        let r0 = ambient.inner(y0, &e)?;
        let x0 = -r0.div_floor(&d);
        for z in &shifts {
            let ze = ambient.inner(z, &e)?;
            for j in std::iter::once(0).chain((1..=DIRECT_WINDOW).flat_map(|j| [j, -j])) {
                let x = &x0 + j;
                let m = &r0 + &x * &d + &ze;
                if m.is_zero() {
                    continue;
                }
                let base: Vec<BigInt> = (0..y0.len()).map(|i| &y0[i] + &z[i] + &x * &w[i]).collect();
                let q = target - ambient.norm(&base)?;
                let den = &two * &m;
                if !(&q % &den).is_zero() {
                    continue;
                }
                let lam = q / den;
                let y: Vec<BigInt> = base.iter().zip(&e).map(|(p, q)| p + &lam * q).collect();
                debug_assert_eq!(&ambient.norm(&y)?, target);
                return Ok(Some(y));
            }
        }
        Ok(None)
    })
}

/// Exhaustive scan (see [`scan_sigma`]) for an exceptional class orthogonal
/// to `T` with invariant `c` and coordinates at most `coord_bound`.
pub fn brute_delta_search(pd: &PeriodData, c: &OrbitClass, coord_bound: i64) -> Result<Option<Vec<BigInt>>> {
    let orth: Vec<Vec<BigInt>> = pd.emb.to_rows();
    let mut err = None;
    let hit = scan_sigma(&pd.model, coord_bound, &orth, |d| match f_invariant_in(&pd.model, &d) {
        Ok(got) if got == *c => ControlFlow::Break(d),
        Ok(_) => ControlFlow::Continue(()),
        Err(e) => {
            err = Some(e);
            ControlFlow::Break(Vec::new())
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(hit)
}

/// Largest absolute coordinate.
pub fn height(x: &[BigInt]) -> BigInt {
    x.iter().map(|t| t.abs()).max().unwrap_or_default()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::enumerate_classes;

    #[test]
    fn pipeline_small_n() {
        for kind in [Kind::Hilbert, Kind::Kummer] {
            for n in [2, 3, 4] {
                let pd = PeriodData::standard(n, kind).unwrap();
                for c in enumerate_classes(n, kind).unwrap() {
                    let r = realize_orbit(&pd, &c, default_realize_bound(n)).unwrap();
                    assert_eq!(r.strategy, Strategy::Pipeline);
                }
            }
        }
    }

    #[test]
    fn kummer_n3_norm_and_divisibility() {
        let pd = PeriodData::standard(3, Kind::Kummer).unwrap();
        let c = enumerate_classes(3, Kind::Kummer).unwrap()[0];
        let r = realize_orbit(&pd, &c, 8).unwrap();
        let l = &pd.model.lattice;
        assert_eq!(l.norm(&r.delta).unwrap(), BigInt::from(-8));
        assert_eq!(l.divisibility(&r.delta).unwrap(), BigInt::from(8));
    }

    #[test]
    fn direct_matches_class() {
        for kind in [Kind::Hilbert, Kind::Kummer] {
            for n in [2, 7, 13] {
                let pd = PeriodData::standard(n, kind).unwrap();
                for c in enumerate_classes(n, kind).unwrap() {
                    let d = realize_direct(&pd, &c).unwrap();
                    verify(&pd, &c, &d).unwrap();
                }
            }
        }
    }

    #[test]
    fn brute_force_agrees() {
        let pd = PeriodData::standard(7, Kind::Hilbert).unwrap();
        for c in enumerate_classes(7, Kind::Hilbert).unwrap() {
            let d = brute_delta_search(&pd, &c, 21).unwrap().unwrap();
            assert_eq!(f_invariant_in(&pd.model, &d).unwrap(), c);
        }
        let c = enumerate_classes(2, Kind::Hilbert).unwrap()[0];
        let pd = PeriodData::standard(2, Kind::Hilbert).unwrap();
        assert!(brute_delta_search(&pd, &c, 0).unwrap().is_none());
    }
}
