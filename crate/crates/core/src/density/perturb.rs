//! Perturbation of a positive plane to one whose span with `v` is saturated.
//!
//! With `M = span{u1, u2, v}` and an isotropic `e1` in `M^⊥`, set
//! `u1' = k u1 + e1` and look for `f1 ⊥ v` with `(f1, u1') = 1`; repeating
//! with `M' = span{u1', u2, v}` gives `u2' = k2 u2 + e2` and `f2 ⊥ v, u1'`
//! with `(f2, u2') = 1`. The matrix `((f_i, u_j'))` is then upper triangular
//! with ones on the diagonal, which certifies that `span{u1', u2'} ⊕ Z v` is
//! saturated. When `e1` lies in a hyperbolic pair `(e1, f)` of `M^⊥`, `f`
//! itself serves as `f1`; any isotropic `e_i` whose `u_i'` admits such an
//! `f_i` is accepted.
//!
//! `M'^⊥` depends on `k`, and its isotropic vectors grow with it, so the
//! second multiplier is `k2 = m k` with `m >= 1` chosen to keep
//! `|e2| / (k2 |u2|)` no larger than `|e1| / (k |u1|)`; the angle is then
//! `O(1/k)`. Since `e_i ⊥ u_i` are isotropic, `e1 ⊥ u2` and `e2 ⊥ u1'`, the
//! new Gram matrix is `D G D` with `D = diag(k, k2)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::plane::{principal_angle_residual, principal_angle_svd, to_f64};
use super::reduce::{search_isotropic, MAX_RADIUS_SQ};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{bezout, smith, IntMatrix};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaturationCertificate {
    #[serde(serialize_with = "crate::json::ser")]
    pub f1: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser")]
    pub f2: Vec<BigInt>,
    /// `((f_i, u_j'))`
    #[serde(serialize_with = "crate::json::ser")]
    pub pairing: [[BigInt; 2]; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct Perturbation {
    pub k: u64,
    /// Multiplier of `u2`, a multiple of `k`.
    #[serde(serialize_with = "crate::json::ser")]
    pub k2: BigInt,
    #[serde(serialize_with = "crate::json::ser")]
    pub u1p: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser")]
    pub u2p: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser")]
    pub e1: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser")]
    pub e2: Vec<BigInt>,
    pub certificate: SaturationCertificate,
    /// Largest principal angle between the input and output planes.
    pub angle: f64,
    /// The same angle computed from singular values.
    pub angle_svd: f64,
}

fn check_plane(ambient: &Lattice, v: &[BigInt], u1: &[BigInt], u2: &[BigInt]) -> Result<()> {
    for u in [u1, u2] {
        if !ambient.inner(u, v)?.is_zero() {
            return Err(Error::Precondition("plane vectors must be orthogonal to v".into()));
        }
    }
    let (a, b, c) = (ambient.norm(u1)?, ambient.inner(u1, u2)?, ambient.norm(u2)?);
    if !a.is_positive() || !(&a * &c - &b * &b).is_positive() {
        return Err(Error::NotPositive(format!("Gram [[{a}, {b}], [{b}, {c}]]")));
    }
    Ok(())
}

/// Perturbs `u1`, `u2` (ambient coordinates, orthogonal to `v`) with
/// parameter `k >= 1`.
pub fn perturb_to_saturated(
    ambient: &Lattice,
    v: &[BigInt],
    u1: &[BigInt],
    u2: &[BigInt],
    k: u64,
) -> Result<Perturbation> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    check_plane(ambient, v, u1, u2)?;
    let rank = ambient.rank();
    let rows = |vs: &[&[BigInt]]| IntMatrix::from_rows(&vs.iter().map(|x| x.to_vec()).collect::<Vec<_>>(), rank);
    // isotropic e ⊥ `orth`, with u' = k u + e of divisibility 1 in `cert`^⊥
    let step = |u: &[BigInt], kk: &BigInt, orth: &[&[BigInt]], cert: &[&[BigInt]]| -> Result<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>)> {
        let comp = ambient.orth_complement_of(&rows(orth)?)?;
        let d = ambient.orth_complement_of(&rows(cert)?)?;
        let pairings = d.basis().checked_mul(ambient.gram())?;
        search_isotropic(ambient, comp.basis(), |e| {
            let up: Vec<BigInt> = u.iter().zip(&e).map(|(a, b)| kk * a + b).collect();
            let (g, coeffs) = bezout(&pairings.mul_vec(&up)?);
            if !g.is_one() {
                return Ok(None);
            }
            let f = d.basis().transpose().mul_vec(&coeffs)?;
            Ok(Some((e, up, f)))
        })?
        .ok_or_else(|| Error::SearchExhausted {
            stage: "isotropic vector in the orthogonal complement".into(),
            bound: MAX_RADIUS_SQ as i64,
        })
    };
    let kk = BigInt::from(k);
    let (e1, u1p, f1) = step(u1, &kk, &[u1, u2, v], &[v])?;
    let first = step(u2, &kk, &[&u1p, u2, v], &[v, &u1p])?;
    let rel = |e: &[BigInt], u: &[BigInt]| euclid(e) / euclid(u);
    let m = (rel(&first.0, u2) / rel(&e1, u1)).ceil();
    let (k2, (e2, u2p, f2)) = if m > 1.0 {
        let k2 = &kk * BigInt::from(m as u64);
        match step(u2, &k2, &[&u1p, u2, v], &[v, &u1p]) {
            Ok(r) => (k2, r),
            Err(Error::SearchExhausted { .. }) => (kk, first),
            Err(e) => return Err(e),
        }
    } else {
        (kk, first)
    };
    check_plane(ambient, v, &u1p, &u2p)?;
    let pairing = [
        [ambient.inner(&f1, &u1p)?, ambient.inner(&f1, &u2p)?],
        [ambient.inner(&f2, &u1p)?, ambient.inner(&f2, &u2p)?],
    ];
    let (x1, x2, y1, y2) = (to_f64(u1), to_f64(u2), to_f64(&u1p), to_f64(&u2p));
    let angle = principal_angle_residual((&x1, &x2), (&y1, &y2))?;
    let angle_svd = principal_angle_svd((&x1, &x2), (&y1, &y2))?;
    Ok(Perturbation {
        k,
        k2,
        u1p,
        u2p,
        e1,
        e2,
        certificate: SaturationCertificate { f1, f2, pairing },
        angle,
        angle_svd,
    })
}

fn euclid(x: &[BigInt]) -> f64 {
    to_f64(x).iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Recomputes the certificate: `(f_i, v) = 0` and `((f_i, u_j'))` upper
/// triangular with unit diagonal.
pub fn check_certificate(
    ambient: &Lattice,
    v: &[BigInt],
    u1p: &[BigInt],
    u2p: &[BigInt],
    cert: &SaturationCertificate,
) -> Result<bool> {
    let fs = [&cert.f1, &cert.f2];
    let us = [u1p, u2p];
    for f in fs {
        if !ambient.inner(f, v)?.is_zero() {
            return Ok(false);
        }
    }
    let p = |i: usize, j: usize| ambient.inner(fs[i], us[j]);
    Ok(p(0, 0)?.is_one() && p(1, 1)?.is_one() && p(1, 0)?.is_zero())
}

/// Independent check: `span{u1', u2', v}` is saturated (Smith form).
pub fn is_saturated_snf(u1p: &[BigInt], u2p: &[BigInt], v: &[BigInt]) -> Result<bool> {
    let m = IntMatrix::from_rows(&[u1p.to_vec(), u2p.to_vec(), v.to_vec()], v.len())?;
    let s = smith(&m);
    Ok(s.rank == 3 && s.invariant_factors().iter().all(One::is_one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{Kind, Model};

    fn std_plane(model: &Model) -> (Vec<BigInt>, Vec<BigInt>) {
        let s = model.h3_start();
        let mut u1 = vec![BigInt::zero(); model.ambient.rank()];
        let mut u2 = u1.clone();
        u1[s] = BigInt::one();
        u1[s + 1] = BigInt::one();
        u2[s + 2] = BigInt::one();
        u2[s + 3] = BigInt::one();
        (u1, u2)
    }

    #[test]
    fn standard_plane_k1() {
        for kind in [Kind::Hilbert, Kind::Kummer] {
            let model = Model::new(2, kind).unwrap();
            let (u1, u2) = std_plane(&model);
            let p = perturb_to_saturated(&model.ambient, &model.v, &u1, &u2, 1).unwrap();
            assert!(check_certificate(&model.ambient, &model.v, &p.u1p, &p.u2p, &p.certificate).unwrap());
            assert!(is_saturated_snf(&p.u1p, &p.u2p, &model.v).unwrap());
            assert!((p.angle - p.angle_svd).abs() < 1e-8);
        }
    }

    #[test]
    fn gram_scales_by_multipliers() {
        let model = Model::new(3, Kind::Hilbert).unwrap();
        let (u1, u2) = std_plane(&model);
        let u1: Vec<BigInt> = u1.iter().zip(&u2).map(|(a, b)| a * 3 + b).collect();
        let p = perturb_to_saturated(&model.ambient, &model.v, &u1, &u2, 5).unwrap();
        let a = &model.ambient;
        assert_eq!(&p.k2 % 5, BigInt::zero());
        assert_eq!(a.norm(&p.u1p).unwrap(), a.norm(&u1).unwrap() * 25);
        assert_eq!(a.inner(&p.u1p, &p.u2p).unwrap(), a.inner(&u1, &u2).unwrap() * 5 * &p.k2);
        assert_eq!(a.norm(&p.u2p).unwrap(), a.norm(&u2).unwrap() * &p.k2 * &p.k2);
    }

    #[test]
    fn rejects_non_orthogonal() {
        let model = Model::new(2, Kind::Hilbert).unwrap();
        let (u1, _) = std_plane(&model);
        let v = model.v.clone();
        assert!(perturb_to_saturated(&model.ambient, &model.v, &u1, &v, 1).is_err());
    }
}
