//! Exceptional classes and their orbit invariant.
//!
//! For the Hilbert-type lattice `Lambda(n)` the exceptional classes are the
//! primitive `δ` with `(δ,δ) = 2-2n` and `(δ,Λ) ⊂ (2n-2)Z`; for the Kummer
//! type `KummerLambda(n)` the norm is `-2-2n` and the divisibility `2n+2`.
//! The invariant `f(δ)` is the class of `ι(δ)` inside the saturation of
//! `span{ι(δ), v}`, a copy of the hyperbolic plane, up to `O(H)`.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{make_standard, Lattice, Sublattice};
use crate::linalg::{content, solve_integer, IntMatrix};
use crate::search::{for_each_of_height, small_gram, small_inner};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hilbert,
    Kummer,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Hilbert => "hilbert",
            Kind::Kummer => "kummer",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert" | "hilb" => Ok(Kind::Hilbert),
            "kummer" => Ok(Kind::Kummer),
            other => Err(Error::Parse(format!("unknown kind `{other}`"))),
        }
    }
}

impl Kind {
    /// `n-1` or `n+1`: the product `-ab` of an orbit class.
    pub fn half_m(self, n: i64) -> i64 {
        match self {
            Kind::Hilbert => n - 1,
            Kind::Kummer => n + 1,
        }
    }

    /// Divisibility `2n-2` or `2n+2` of an exceptional class.
    pub fn m(self, n: i64) -> i64 {
        2 * self.half_m(n)
    }
}

/// An `O(H)`-orbit of primitive vectors `a e + b f` in the hyperbolic plane,
/// stored with `a > 0 > b` and `a <= |b|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitClass {
    pub a: i64,
    pub b: i64,
    pub kind: Kind,
    pub n: i64,
}

impl OrbitClass {
    /// Canonical representative of the class of `a e + b f`.
    pub fn canonical(a: i64, b: i64, kind: Kind, n: i64) -> Result<Self> {
        if a.gcd(&b) != 1 {
            return Err(Error::Precondition(format!("({a}, {b}) is not primitive")));
        }
        if a * b != -kind.half_m(n) {
            return Err(Error::Precondition(format!(
                "({a}, {b}) has ab = {} but {kind} n = {n} needs {}",
                a * b,
                -kind.half_m(n)
            )));
        }
        // the orbit is {(a,b), (b,a), (-a,-b), (-b,-a)}
        let (p, q) = if a > 0 { (a, b) } else { (-a, -b) };
        let (p, q) = if p <= -q { (p, q) } else { (-q, -p) };
        Ok(OrbitClass { a: p, b: q, kind, n })
    }

    pub fn norm(&self) -> i64 {
        2 * self.a * self.b
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

fn check_n(n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    Ok(())
}

/// All orbit classes, sorted by `a`.
pub fn enumerate_classes(n: i64, kind: Kind) -> Result<Vec<OrbitClass>> {
    check_n(n)?;
    let k = kind.half_m(n);
    let mut out = Vec::new();
    let mut a = 1;
    while a * a <= k {
        if k % a == 0 && a.gcd(&(k / a)) == 1 {
            out.push(OrbitClass { a, b: -(k / a), kind, n });
        }
        a += 1;
    }
    Ok(out)
}

/// Number of distinct prime factors.
pub fn distinct_primes(mut k: u64) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            count += 1;
            while k.is_multiple_of(p) {
                k /= p;
            }
        }
        p += 1;
    }
    if k > 1 {
        count += 1;
    }
    count
}

/// `2^(ρ-1)` with `ρ` the number of distinct primes of `n-1`; `1` when
/// `n-1 = 1`.
pub fn orbit_count_formula(n: i64) -> Result<u64> {
    orbit_count_formula_for(n, Kind::Hilbert)
}

/// The same count for either kind (`n+1` in place of `n-1` for Kummer).
pub fn orbit_count_formula_for(n: i64, kind: Kind) -> Result<u64> {
    check_n(n)?;
    let rho = distinct_primes(kind.half_m(n) as u64);
    Ok(if rho == 0 { 1 } else { 1 << (rho - 1) })
}

/// The lattice of a kind together with the default primitive embedding
/// `ι` into the unimodular ambient lattice (Mukai, resp. `H^4`) and the
/// vector `v` spanning `ι(Λ)^⊥`.
#[derive(Clone, Debug)]
pub struct Model {
    pub n: i64,
    pub kind: Kind,
    pub lattice: Lattice,
    pub ambient: Lattice,
    /// Columns are the images of the basis vectors.
    pub iota: IntMatrix,
    pub v: Vec<BigInt>,
}

impl Model {
    pub fn new(n: i64, kind: Kind) -> Result<Self> {
        check_n(n)?;
        let (lattice, ambient) = match kind {
            Kind::Hilbert => (make_standard("Lambda", Some(n))?, make_standard("Mukai", None)?),
            Kind::Kummer => (
                make_standard("KummerLambda", Some(n))?,
                make_standard("KummerTilde", None)?,
            ),
        };
        let r = lattice.rank();
        let big_r = ambient.rank();
        let k = BigInt::from(kind.half_m(n));
        let mut iota = IntMatrix::zeros(big_r, r);
        for i in 0..r - 1 {
            iota[(i, i)] = BigInt::one();
        }
        // w ↦ e - k f, v = e + k f in the extra hyperbolic plane
        iota[(r - 1, r - 1)] = BigInt::one();
        iota[(r, r - 1)] = -k.clone();
        let mut v = vec![BigInt::zero(); big_r];
        v[r - 1] = BigInt::one();
        v[r] = k;
        Ok(Model {
            n,
            kind,
            lattice,
            ambient,
            iota,
            v,
        })
    }

    /// Divisibility of exceptional classes.
    pub fn m(&self) -> i64 {
        self.kind.m(self.n)
    }

    /// Generator of the rank-one summand.
    pub fn w(&self) -> Vec<BigInt> {
        let mut w = vec![BigInt::zero(); self.lattice.rank()];
        w[self.lattice.rank() - 1] = BigInt::one();
        w
    }

    /// First coordinate of the three hyperbolic planes.
    pub fn h3_start(&self) -> usize {
        match self.kind {
            Kind::Hilbert => 16,
            Kind::Kummer => 0,
        }
    }

    pub fn embed(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.iota.mul_vec(x)
    }

    /// Preimage under `ι`, if `y` lies in the image.
    pub fn pull_back(&self, y: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        solve_integer(&self.iota, y)
    }

    /// Images of the basis vectors (rows).
    pub fn image_rows(&self) -> IntMatrix {
        self.iota.transpose()
    }
}

/// Result of the three tests defining an exceptional class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaReport {
    pub primitive: bool,
    #[serde(serialize_with = "crate::json::ser")]
    pub norm: BigInt,
    pub expected_norm: i64,
    #[serde(serialize_with = "crate::json::ser")]
    pub divisibility: BigInt,
    pub required_divisor: i64,
    pub is_sigma: bool,
}

pub fn sigma_report(n: i64, kind: Kind, d: &[BigInt]) -> Result<SigmaReport> {
    let model = Model::new(n, kind)?;
    sigma_report_in(&model, d)
}

pub fn sigma_report_in(model: &Model, d: &[BigInt]) -> Result<SigmaReport> {
    let l = &model.lattice;
    let primitive = l.is_primitive(d)?;
    let norm = l.norm(d)?;
    let divisibility = l.divisibility(d)?;
    let m = model.m();
    let expected_norm = -m;
    let is_sigma = primitive
        && norm == BigInt::from(expected_norm)
        && divisibility.is_multiple_of(&BigInt::from(m));
    Ok(SigmaReport {
        primitive,
        norm,
        expected_norm,
        divisibility,
        required_divisor: m,
        is_sigma,
    })
}

pub fn sigma_check_in(model: &Model, d: &[BigInt]) -> Result<bool> {
    Ok(sigma_report_in(model, d)?.is_sigma)
}

pub fn sigma_check(n: i64, kind: Kind, d: &[BigInt]) -> Result<bool> {
    Ok(sigma_report(n, kind, d)?.is_sigma)
}

/// Basis `(e', f')` (rows, in the coordinates of `gram`) of an even
/// unimodular indefinite rank-2 lattice with `(e',f') = 1` and both
/// isotropic.
///
/// With `gram = [[p, q], [q, r]]` and `pr - q^2 = -1`, the isotropic
/// directions are `(1, 0)` when `p = 0`, and otherwise `(1 - q, p)` up to
/// scaling. `f'` is obtained from any `u` with `(e', u) = 1` as
/// `u - ((u,u)/2) e'`.
pub fn hyperbolic_basis_of_gram(gram: &IntMatrix) -> Result<IntMatrix> {
    if gram.rows() != 2 || !gram.is_symmetric() {
        return Err(Error::Precondition("hyperbolic basis needs a symmetric 2x2 Gram".into()));
    }
    let (p, q, r) = (&gram[(0, 0)], &gram[(0, 1)], &gram[(1, 1)]);
    if p.is_odd() || r.is_odd() || p * r - q * q != BigInt::from(-1) {
        return Err(Error::Precondition(
            "hyperbolic basis needs an even unimodular form of signature (1,1)".into(),
        ));
    }
    let x = if p.is_zero() {
        vec![BigInt::one(), BigInt::zero()]
    } else {
        let raw = vec![BigInt::one() - q, p.clone()];
        let c = content(&raw);
        raw.iter().map(|t| t / &c).collect()
    };
    let gx = gram.mul_vec(&x)?;
    // (x, u) = gx . u = 1
    let e = gx[0].extended_gcd(&gx[1]);
    if !e.gcd.abs().is_one() {
        return Err(Error::Invariant("isotropic vector is not primitive in a unimodular lattice".into()));
    }
    let sign = e.gcd.signum();
    let u = vec![&e.x * &sign, &e.y * &sign];
    let uu = crate::linalg::dot(&u, &gram.mul_vec(&u)?);
    let half = uu / BigInt::from(2);
    let f: Vec<BigInt> = u.iter().zip(&x).map(|(ui, xi)| ui - &half * xi).collect();
    let basis = IntMatrix::from_rows(&[x, f], 2)?;
    debug_assert_eq!(
        basis.checked_mul(gram)?.checked_mul(&basis.transpose())?,
        IntMatrix::from_i64(&[&[0, 1], &[1, 0]])
    );
    Ok(basis)
}

/// Hyperbolic basis `(e', f')` of a rank-2 sublattice isometric to `H`,
/// returned as ambient vectors (rows).
pub fn hyperbolic_basis(k: &Sublattice<'_>) -> Result<IntMatrix> {
    let local = hyperbolic_basis_of_gram(&k.gram())?;
    local.checked_mul(k.basis())
}

/// Intermediate data of an `f` computation.
#[derive(Clone, Debug, Serialize)]
pub struct FTrace {
    #[serde(serialize_with = "crate::json::ser")]
    pub iota_delta: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser")]
    pub v: Vec<BigInt>,
    /// Basis rows of the saturation `K`.
    #[serde(serialize_with = "crate::json::ser")]
    pub k_basis: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "crate::json::ser")]
    pub k_gram: Vec<Vec<BigInt>>,
    /// Index of `span{ι(δ), v}` in `K`.
    #[serde(serialize_with = "crate::json::ser")]
    pub index: BigInt,
    #[serde(serialize_with = "crate::json::ser")]
    pub e_prime: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser")]
    pub f_prime: Vec<BigInt>,
    /// `ι(δ) = a' e' + b' f'`
    #[serde(serialize_with = "crate::json::ser")]
    pub coords: (BigInt, BigInt),
    pub class: OrbitClass,
}

pub fn f_invariant(n: i64, kind: Kind, d: &[BigInt]) -> Result<OrbitClass> {
    Ok(f_trace(&Model::new(n, kind)?, d)?.class)
}

pub fn f_invariant_in(model: &Model, d: &[BigInt]) -> Result<OrbitClass> {
    Ok(f_trace(model, d)?.class)
}

pub fn f_trace(model: &Model, d: &[BigInt]) -> Result<FTrace> {
    let report = sigma_report_in(model, d)?;
    if !report.is_sigma {
        return Err(Error::Precondition(format!(
            "vector is not an exceptional class: {report:?}"
        )));
    }
    let id = model.embed(d)?;
    let span = Sublattice::new(
        &model.ambient,
        IntMatrix::from_rows(&[id.clone(), model.v.clone()], model.ambient.rank())?,
    )?;
    let k = span.saturate();
    let kg = k.gram();
    if kg.det()? != BigInt::from(-1) {
        return Err(Error::Invariant(format!("saturation has Gram {kg:?}, not a hyperbolic plane")));
    }
    let hb = hyperbolic_basis(&k)?;
    let sub = Sublattice::new(&model.ambient, hb.clone())?;
    let c = sub
        .coords_of(&id)?
        .ok_or_else(|| Error::Invariant("ι(δ) is not in its saturation".into()))?;
    let (a, b) = (
        c[0].to_i64().ok_or_else(|| Error::Invariant("coordinate overflow".into()))?,
        c[1].to_i64().ok_or_else(|| Error::Invariant("coordinate overflow".into()))?,
    );
    let class = OrbitClass::canonical(a, b, model.kind, model.n)?;
    Ok(FTrace {
        iota_delta: id,
        v: model.v.clone(),
        k_basis: k.basis().to_rows(),
        k_gram: kg.to_rows(),
        index: span.index_in_saturation(),
        e_prime: hb.row(0).to_vec(),
        f_prime: hb.row(1).to_vec(),
        coords: (c[0].clone(), c[1].clone()),
        class,
    })
}

/// Scans exceptional classes of the form `z w + m μ` with `μ` supported on
/// the three hyperbolic planes, every coordinate of absolute value at most
/// `height`, and `δ ⊥ orth_to`. Every exceptional class has this shape with
/// `μ` in `Λ_K3` (resp. `H^3`) and `z^2 - 1 = m (μ,μ)`; the restriction is
/// that the `E8` coordinates vanish.
///
/// Candidates are visited by height of `δ`, then lexicographically in the
/// order `0, 1, -1, 2, -2, ...` of coordinates, `z > 0` first.
pub fn scan_sigma<B>(
    model: &Model,
    height: i64,
    orth_to: &[Vec<BigInt>],
    mut visit: impl FnMut(Vec<BigInt>) -> ControlFlow<B>,
) -> Result<Option<B>> {
    let m = model.m();
    let r = model.lattice.rank();
    let start = model.h3_start();
    let g = small_gram(model.lattice.gram())
        .ok_or_else(|| Error::Precondition("Gram too large for search".into()))?;
    let h3: Vec<Vec<i128>> = (0..6)
        .map(|i| (0..6).map(|j| g[start + i][start + j]).collect())
        .collect();
    // pairings of the constraint vectors with μ-coordinates and with w
    let rows: Vec<(Vec<i128>, i128)> = orth_to
        .iter()
        .map(|t| -> Result<(Vec<i128>, i128)> {
            let gt = model.lattice.pairing_row(t)?;
            let to = |x: &BigInt| x.to_i128().ok_or_else(|| Error::Precondition("constraint too large".into()));
            Ok((
                (0..6).map(|i| to(&gt[start + i])).collect::<Result<_>>()?,
                to(&gt[r - 1])?,
            ))
        })
        .collect::<Result<_>>()?;

    let mut cands: Vec<(i64, Vec<i64>, i64)> = Vec::new();
    let mu_bound = height / m;
    for h in 0..=mu_bound {
        let _ = for_each_of_height::<()>(6, h, |mu| {
            let mm = small_inner(&h3, mu, mu);
            let z2 = 1 + m as i128 * mm;
            if z2 < 1 {
                return ControlFlow::Continue(());
            }
            let z = z2.isqrt();
            if z * z != z2 || z > height as i128 {
                return ControlFlow::Continue(());
            }
            let z = z as i64;
            if (mu.iter().fold(0i64, |acc, &x| acc.gcd(&x)) * m).gcd(&z) != 1 {
                return ControlFlow::Continue(());
            }
            for zz in [z, -z] {
                let ok = rows.iter().all(|(gm, gw)| {
                    let s: i128 = gm.iter().zip(mu).map(|(a, &b)| a * (m as i128 * b as i128)).sum();
                    s + gw * zz as i128 == 0
                });
                if ok {
                    let ht = (h * m).max(z);
                    cands.push((ht, mu.to_vec(), zz));
                }
                if z == 0 {
                    break;
                }
            }
            ControlFlow::Continue(())
        });
    }
    let key = |x: i64| if x > 0 { 2 * x - 1 } else { -2 * x };
    cands.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.iter().map(|&x| key(x)).cmp(b.1.iter().map(|&x| key(x))))
            .then_with(|| key(a.2).cmp(&key(b.2)))
    });
    for (_, mu, z) in cands {
        let mut d = vec![BigInt::zero(); r];
        for i in 0..6 {
            d[start + i] = BigInt::from(mu[i] * m);
        }
        d[r - 1] = BigInt::from(z);
        if let ControlFlow::Break(b) = visit(d) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// For each class, the first exceptional class (in [`scan_sigma`] order)
/// with that invariant and coordinates bounded by `height`.
pub fn surjectivity_witnesses(n: i64, kind: Kind, height: i64) -> Result<Vec<(OrbitClass, Option<Vec<BigInt>>)>> {
    let model = Model::new(n, kind)?;
    let classes = enumerate_classes(n, kind)?;
    let mut found: Vec<Option<Vec<BigInt>>> = vec![None; classes.len()];
    let mut err = None;
    scan_sigma(&model, height, &[], |d| {
        match f_invariant_in(&model, &d) {
            Ok(c) => {
                if let Some(i) = classes.iter().position(|x| *x == c) {
                    if found[i].is_none() {
                        found[i] = Some(d);
                    }
                }
            }
            Err(e) => err = Some(e),
        }
        if err.is_some() || found.iter().all(Option::is_some) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(classes.into_iter().zip(found).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_bigints;

    fn pairs(v: &[OrbitClass]) -> Vec<(i64, i64)> {
        v.iter().map(|c| (c.a, c.b)).collect()
    }

    // Oracle: brute-force coprime factorizations modulo swap and negation.
    fn brute_classes(k: i64) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::new();
        for a in -k..=k {
            for b in -k..=k {
                if a * b == -k && a.gcd(&b) == 1 {
                    let orbit = [(a, b), (b, a), (-a, -b), (-b, -a)];
                    let rep = *orbit.iter().filter(|(x, y)| *x > 0 && *y < 0 && *x <= -*y).min().unwrap();
                    if !out.contains(&rep) {
                        out.push(rep);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(pairs(&enumerate_classes(7, Kind::Hilbert).unwrap()), vec![(1, -6), (2, -3)]);
        assert_eq!(pairs(&enumerate_classes(2, Kind::Hilbert).unwrap()), vec![(1, -1)]);
        assert_eq!(pairs(&enumerate_classes(3, Kind::Kummer).unwrap()), vec![(1, -4)]);
        assert_eq!(enumerate_classes(1, Kind::Hilbert), Err(Error::BadN(1)));
        for n in 2..60 {
            assert_eq!(pairs(&enumerate_classes(n, Kind::Hilbert).unwrap()), brute_classes(n - 1));
            assert_eq!(pairs(&enumerate_classes(n, Kind::Kummer).unwrap()), brute_classes(n + 1));
        }
    }

    #[test]
    fn formula_examples() {
        assert_eq!(orbit_count_formula(7).unwrap(), 2);
        assert_eq!(orbit_count_formula(31).unwrap(), 4);
        assert_eq!(orbit_count_formula(2).unwrap(), 1);
    }

    #[test]
    fn canonical_form() {
        let c = OrbitClass::canonical(-3, 2, Kind::Hilbert, 7).unwrap();
        assert_eq!((c.a, c.b), (2, -3));
        let c = OrbitClass::canonical(6, -1, Kind::Hilbert, 7).unwrap();
        assert_eq!((c.a, c.b), (1, -6));
        assert!(OrbitClass::canonical(2, -2, Kind::Kummer, 3).is_err());
    }

    #[test]
    fn sigma_examples() {
        for kind in [Kind::Hilbert, Kind::Kummer] {
            let model = Model::new(4, kind).unwrap();
            let w = model.w();
            assert!(sigma_check(4, kind, &w).unwrap());
            let mut e = vec![BigInt::zero(); w.len()];
            e[model.h3_start()] = BigInt::one();
            assert!(!sigma_check(4, kind, &e).unwrap());
            let w2: Vec<BigInt> = w.iter().map(|x| x * 2).collect();
            assert!(!sigma_check(4, kind, &w2).unwrap());
            let zero = vec![BigInt::zero(); w.len()];
            assert_eq!(sigma_check(4, kind, &zero), Err(Error::ZeroVector));
        }
    }

    #[test]
    fn hyperbolic_basis_examples() {
        let h = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(hyperbolic_basis_of_gram(&h).unwrap(), IntMatrix::identity(2));
        let g = IntMatrix::from_i64(&[&[2, 1], &[1, 0]]);
        let b = hyperbolic_basis_of_gram(&g).unwrap();
        assert_eq!(b.row(0), to_bigints(&[0, 1]).as_slice());
        assert_eq!(b.checked_mul(&g).unwrap().checked_mul(&b.transpose()).unwrap(), h);
        let g = IntMatrix::from_i64(&[&[-2, 3], &[3, -4]]);
        let b = hyperbolic_basis_of_gram(&g).unwrap();
        assert_eq!(b.checked_mul(&g).unwrap().checked_mul(&b.transpose()).unwrap(), h);
        assert!(hyperbolic_basis_of_gram(&IntMatrix::from_i64(&[&[2, 0], &[0, -2]])).is_err());
    }

    #[test]
    fn f_of_w() {
        assert_eq!(
            f_invariant(2, Kind::Hilbert, &Model::new(2, Kind::Hilbert).unwrap().w()).unwrap(),
            OrbitClass { a: 1, b: -1, kind: Kind::Hilbert, n: 2 }
        );
        let c = f_invariant(7, Kind::Hilbert, &Model::new(7, Kind::Hilbert).unwrap().w()).unwrap();
        assert_eq!((c.a, c.b), (1, -6));
        let c = f_invariant(3, Kind::Kummer, &Model::new(3, Kind::Kummer).unwrap().w()).unwrap();
        assert_eq!((c.a, c.b), (1, -4));
    }

    #[test]
    fn f_rejects_non_sigma() {
        let model = Model::new(3, Kind::Hilbert).unwrap();
        let mut e = vec![BigInt::zero(); 23];
        e[16] = BigInt::one();
        assert!(matches!(f_invariant_in(&model, &e), Err(Error::Precondition(_))));
    }

    #[test]
    fn witnesses_for_n7() {
        let w = surjectivity_witnesses(7, Kind::Hilbert, 21).unwrap();
        for (c, d) in w {
            let d = d.unwrap_or_else(|| panic!("no witness for {c}"));
            assert_eq!(f_invariant(7, Kind::Hilbert, &d).unwrap(), c);
        }
    }
}
