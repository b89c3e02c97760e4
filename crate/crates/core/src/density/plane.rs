//! Real positive 2-planes and principal angles.
//!
//! Floating point is confined to this file and to sampling; lattice
//! assertions elsewhere are exact.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Positivity tolerance for real planes.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// An oriented positive 2-plane given by `x`, `y` with `(x,x) = (y,y) > 0`
/// and `(x,y) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealPlane {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn to_f64(v: &[BigInt]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

pub fn gram_f64(g: &IntMatrix) -> Vec<Vec<f64>> {
    g.to_rows().iter().map(|r| to_f64(r)).collect()
}

pub fn form(g: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0.0 {
            continue;
        }
        let t: f64 = g[i].iter().zip(y).map(|(a, b)| a * b).sum();
        s += xi * t;
    }
    s
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks that `span{x, y}` is positive definite for the form `g` and
/// rotates `y` within the plane so that the pair is orthogonal with equal
/// norms. Pairs that already satisfy this are returned unchanged.
pub fn validate_period(g: &IntMatrix, x: &[f64], y: &[f64]) -> Result<RealPlane> {
    let n = g.rows();
    if x.len() != n || y.len() != n {
        return Err(Error::dims(n, x.len().max(y.len())));
    }
    let gf = gram_f64(g);
    let (xx, xy, yy) = (form(&gf, x, x), form(&gf, x, y), form(&gf, y, y));
    let scale = xx.abs().max(yy.abs()).max(1.0);
    if xx <= POSITIVITY_TOL * scale || xx * yy - xy * xy <= POSITIVITY_TOL * scale * scale {
        return Err(Error::NotPositive(format!(
            "Gram [[{xx}, {xy}], [{xy}, {yy}]] is not positive definite"
        )));
    }
    if xy.abs() <= POSITIVITY_TOL * scale && (xx - yy).abs() <= POSITIVITY_TOL * scale {
        return Ok(RealPlane { x: x.to_vec(), y: y.to_vec() });
    }
    let c = xy / xx;
    let mut y2: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - c * a).collect();
    let n2 = form(&gf, &y2, &y2);
    let s = (xx / n2).sqrt();
    for t in &mut y2 {
        *t *= s;
    }
    Ok(RealPlane { x: x.to_vec(), y: y2 })
}

/// Euclidean orthonormal basis (two columns) of the span of `a`, `b`.
fn orthonormal(a: &[f64], b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let na = dot(a, a).sqrt();
    if na == 0.0 {
        return Err(Error::Precondition("degenerate plane".into()));
    }
    let q1: Vec<f64> = a.iter().map(|t| t / na).collect();
    let p = dot(&q1, b);
    let r: Vec<f64> = b.iter().zip(&q1).map(|(x, y)| x - p * y).collect();
    let nr = dot(&r, &r).sqrt();
    if nr <= 1e-12 * dot(b, b).sqrt() {
        return Err(Error::Precondition("degenerate plane".into()));
    }
    Ok((q1, r.iter().map(|t| t / nr).collect()))
}

/// Singular values of a 2x2 matrix, largest first.
fn singular_values_2x2(m: [[f64; 2]; 2]) -> (f64, f64) {
    let [[a, b], [c, d]] = m;
    let s1 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (s1 * s1 - 4.0 * det * det).max(0.0).sqrt();
    let hi = ((s1 + disc) / 2.0).sqrt();
    let lo = if hi > 0.0 { det.abs() / hi } else { 0.0 };
    (hi, lo)
}

/// Largest principal angle between two planes (Euclidean coordinate
/// metric), from the residual of one orthonormal basis against the other:
/// `sin θ = ‖(I - P_X) Q_Y‖`.
pub fn principal_angle_residual(x: (&[f64], &[f64]), y: (&[f64], &[f64])) -> Result<f64> {
    let (x1, x2) = orthonormal(x.0, x.1)?;
    let (y1, y2) = orthonormal(y.0, y.1)?;
    let resid = |v: &[f64]| -> Vec<f64> {
        let (p, q) = (dot(&x1, v), dot(&x2, v));
        v.iter().zip(x1.iter().zip(&x2)).map(|(t, (a, b))| t - p * a - q * b).collect()
    };
    let (r1, r2) = (resid(&y1), resid(&y2));
    let m = [[dot(&r1, &r1), dot(&r1, &r2)], [dot(&r2, &r1), dot(&r2, &r2)]];
    // largest eigenvalue of the symmetric 2x2 RᵀR
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let lam = tr / 2.0 + ((tr * tr / 4.0 - det).max(0.0)).sqrt();
    Ok(lam.sqrt().min(1.0).asin())
}

/// Largest principal angle from the smallest singular value of the overlap
/// matrix `Q_Xᵀ Q_Y`: `cos θ = σ_min`.
pub fn principal_angle_svd(x: (&[f64], &[f64]), y: (&[f64], &[f64])) -> Result<f64> {
    let (x1, x2) = orthonormal(x.0, x.1)?;
    let (y1, y2) = orthonormal(y.0, y.1)?;
    let m = [[dot(&x1, &y1), dot(&x1, &y2)], [dot(&x2, &y1), dot(&x2, &y2)]];
    let (_, lo) = singular_values_2x2(m);
    Ok(lo.min(1.0).acos())
}
