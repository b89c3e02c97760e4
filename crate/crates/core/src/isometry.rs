//! Isometries of a lattice and their characters.
//!
//! A matrix `M` acts on coordinate columns, `g(x) = M x`, and is an isometry
//! when `Mᵀ G M = G`.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{content, unimodular_inverse, IntMatrix};
use crate::rational::{mat_vec_q, to_integral};
use crate::search::{big, for_each_up_to, small_gram, small_inner};

/// Default coordinate height for the norm -2 search in [`adjust_to_n`].
pub const DEFAULT_ADJUST_BOUND: i64 = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    lattice: Lattice,
    matrix: IntMatrix,
}

impl Isometry {
    pub fn new(lattice: &Lattice, matrix: IntMatrix) -> Result<Self> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::dims(
                format!("{n}x{n}"),
                format!("{}x{}", matrix.rows(), matrix.cols()),
            ));
        }
        let g = lattice.gram();
        if &matrix.transpose().checked_mul(g)?.checked_mul(&matrix)? != g {
            return Err(Error::NotIsometry);
        }
        Ok(Isometry {
            lattice: lattice.clone(),
            matrix,
        })
    }

    pub fn identity(lattice: &Lattice) -> Self {
        Isometry {
            lattice: lattice.clone(),
            matrix: IntMatrix::identity(lattice.rank()),
        }
    }

    pub fn minus_identity(lattice: &Lattice) -> Self {
        Isometry {
            lattice: lattice.clone(),
            matrix: -&IntMatrix::identity(lattice.rank()),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.lattice.gram() != other.lattice.gram() {
            return Err(Error::Precondition("isometries of different lattices".into()));
        }
        Ok(Isometry {
            lattice: self.lattice.clone(),
            matrix: self.matrix.checked_mul(&other.matrix)?,
        })
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            lattice: self.lattice.clone(),
            matrix: unimodular_inverse(&self.matrix).expect("isometries are unimodular"),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.lattice.rank())
    }

    /// Sign of the determinant.
    pub fn det_char(&self) -> i32 {
        if self.matrix.det().expect("square").is_positive() {
            1
        } else {
            -1
        }
    }

    /// The multiplier `u` (in `0..order`) by which the isometry acts on the
    /// cyclic discriminant group, together with the group order.
    pub fn disc_action(&self) -> Result<(BigInt, BigInt)> {
        let disc = self.lattice.disc_group();
        if !disc.is_cyclic() {
            return Err(Error::NotCyclic(disc.invariant_factors.clone()));
        }
        let order = disc.order();
        let Some(y) = disc.generator_lifts.first() else {
            return Ok((BigInt::zero(), order));
        };
        let my = mat_vec_q(&self.matrix, y);
        let mut u = BigInt::zero();
        while u < order {
            let diff: Vec<_> = my
                .iter()
                .zip(y)
                .map(|(a, b)| a - b * num_rational::BigRational::from_integer(u.clone()))
                .collect();
            if to_integral(&diff).is_some() {
                return Ok((u, order));
            }
            u += 1;
        }
        Err(Error::Invariant("no discriminant multiplier found".into()))
    }

    /// `+1` when the discriminant action is trivial, `-1` when it is `-1`.
    pub fn chi(&self) -> Result<i32> {
        let (u, order) = self.disc_action()?;
        chi_of(&u, &order)
    }

    /// Orientation character of the positive cone, relative to the
    /// lattice's positive reference basis `P`: the sign of
    /// `det(P G M Pᵀ)`, which is the sign of the determinant of the
    /// projection of `g(P)` back onto `span P` along its orthogonal complement.
    pub fn orientation_char(&self) -> i32 {
        orientation(&self.lattice, self.lattice.positive_reference(), &self.matrix)
    }

    /// Orientation character of the negative cone.
    pub fn orientation_char_negative(&self) -> i32 {
        orientation(&self.lattice, self.lattice.negative_reference(), &self.matrix)
    }

    /// Orientation-preserving on the positive cone and acting by `±1` on the
    /// discriminant group.
    pub fn in_w(&self) -> Result<bool> {
        if self.orientation_char() != 1 {
            return Ok(false);
        }
        let (u, order) = self.disc_action()?;
        Ok(chi_of(&u, &order).is_ok())
    }

    /// `in_w` and in the kernel of `det · chi`.
    pub fn in_n(&self) -> Result<bool> {
        if !self.in_w()? {
            return Ok(false);
        }
        Ok(self.det_char() * self.chi()? == 1)
    }
}

fn chi_of(u: &BigInt, order: &BigInt) -> Result<i32> {
    let u = u.mod_floor(order);
    let one = BigInt::one().mod_floor(order);
    let minus_one = (-BigInt::one()).mod_floor(order);
    if u == one {
        Ok(1)
    } else if u == minus_one {
        Ok(-1)
    } else {
        Err(Error::ChiUndefined {
            u,
            order: order.clone(),
        })
    }
}

fn orientation(lattice: &Lattice, reference: &IntMatrix, m: &IntMatrix) -> i32 {
    let pg = reference.checked_mul(lattice.gram()).expect("reference width");
    let a = pg
        .checked_mul(m)
        .and_then(|x| x.checked_mul(&reference.transpose()))
        .expect("shapes agree");
    let b = pg.checked_mul(&reference.transpose()).expect("shapes agree");
    let da = a.det().expect("square");
    let db = b.det().expect("square");
    assert!(!da.is_zero(), "projection of an isometry is nondegenerate");
    if da.is_positive() == db.is_positive() {
        1
    } else {
        -1
    }
}

/// Reflection `x ↦ x - 2 (x,d)/(d,d) d`.
pub fn reflection(lattice: &Lattice, d: &[BigInt]) -> Result<Isometry> {
    let n = lattice.rank();
    if d.len() != n {
        return Err(Error::dims(n, d.len()));
    }
    if d.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    // reflections in d and its primitive part coincide
    let c = content(d);
    let d0: Vec<BigInt> = d.iter().map(|x| x / &c).collect();
    let norm = lattice.norm(&d0)?;
    if norm.is_zero() {
        return Err(Error::IsotropicReflection);
    }
    let gd = lattice.pairing_row(&d0)?;
    let div = content(&gd);
    let twice_div = &div * BigInt::from(2);
    if !twice_div.is_multiple_of(&norm) {
        return Err(Error::NonIntegralReflection {
            vector: format!("{d:?}"),
            norm,
            twice_div,
        });
    }
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        if d0[i].is_zero() {
            continue;
        }
        for j in 0..n {
            m[(i, j)] -= &d0[i] * &gd[j] * BigInt::from(2) / &norm;
        }
    }
    Ok(Isometry {
        lattice: lattice.clone(),
        matrix: m,
    })
}

/// Composes `w` with the reflection in a norm `-2` vector `e ⊥ d`, found by
/// a height-ordered search in coordinates of a basis of `d⊥`. For `w` in
/// `W` but not in `N` the result lies in `N` and agrees with `w` on `d`.
pub fn adjust_to_n(w: &Isometry, d: &[BigInt], bound: i64) -> Result<(Isometry, Vec<BigInt>)> {
    if !w.in_w()? || w.in_n()? {
        return Err(Error::Precondition("adjust_to_n needs w in W but not in N".into()));
    }
    let lattice = w.lattice();
    let dperp = lattice.orth_complement_of(&IntMatrix::from_rows(&[d.to_vec()], lattice.rank())?)?;
    let basis = dperp.basis().clone();
    let gram = small_gram(&dperp.gram())
        .ok_or_else(|| Error::Precondition("complement Gram too large for search".into()))?;
    let found = for_each_up_to(basis.rows(), bound, |c: &[i64]| {
        if small_inner(&gram, c, c) == -2 {
            ControlFlow::Break(c.to_vec())
        } else {
            ControlFlow::Continue(())
        }
    });
    let ControlFlow::Break(coeffs) = found else {
        return Err(Error::SearchExhausted {
            stage: "norm -2 vector in d-perp".into(),
            bound,
        });
    };
    let e = basis.transpose().mul_vec(&big(&coeffs))?;
    let g = w.compose(&reflection(lattice, &e)?)?;
    debug_assert!(g.in_n().unwrap_or(false));
    Ok((g, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;
    use crate::linalg::to_bigints;

    fn unit(n: usize, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        v
    }

    #[test]
    fn rank_one_reflection() {
        let l = make_standard("rank1", Some(-2)).unwrap();
        let r = reflection(&l, &to_bigints(&[1])).unwrap();
        assert_eq!(r.matrix(), &IntMatrix::from_i64(&[&[-1]]));
    }

    #[test]
    fn reflection_in_e_plus_f() {
        let h = make_standard("H", None).unwrap();
        let r = reflection(&h, &to_bigints(&[1, 1])).unwrap();
        assert_eq!(r.apply(&to_bigints(&[1, 0])).unwrap(), to_bigints(&[0, -1]));
        assert_eq!(r.apply(&to_bigints(&[0, 1])).unwrap(), to_bigints(&[-1, 0]));
        assert_eq!(r.orientation_char(), -1);
        assert_eq!(r.det_char(), -1);
    }

    #[test]
    fn reflection_in_w() {
        for n in 2..6 {
            let l = make_standard("Lambda", Some(n)).unwrap();
            let w = unit(23, 22);
            let r = reflection(&l, &w).unwrap();
            let mut expected = IntMatrix::identity(23);
            expected[(22, 22)] = BigInt::from(-1);
            assert_eq!(r.matrix(), &expected);
            assert_eq!(r.orientation_char(), 1);
        }
    }

    #[test]
    fn reflection_errors() {
        let h = make_standard("H", None).unwrap();
        assert_eq!(reflection(&h, &to_bigints(&[1, 0])), Err(Error::IsotropicReflection));
        assert_eq!(reflection(&h, &to_bigints(&[0, 0])), Err(Error::ZeroVector));
        // e + 2f has norm 4, divisibility 1
        assert!(matches!(
            reflection(&h, &to_bigints(&[1, 2])),
            Err(Error::NonIntegralReflection { .. })
        ));
    }

    #[test]
    fn kummer_characters() {
        for n in 2..6 {
            let l = make_standard("KummerLambda", Some(n)).unwrap();
            let id = Isometry::identity(&l);
            assert_eq!(id.disc_action().unwrap().0, BigInt::one());
            assert!(id.in_n().unwrap());
            let r = reflection(&l, &unit(7, 6)).unwrap();
            assert_eq!(r.disc_action().unwrap().0, BigInt::from(2 * n + 1));
            assert_eq!(r.chi().unwrap(), -1);
            assert!(r.in_n().unwrap());
            let m = Isometry::minus_identity(&l);
            assert_eq!(m.chi().unwrap(), -1);
            assert_eq!(m.orientation_char(), -1);
            assert!(!m.in_w().unwrap());
        }
    }

    #[test]
    fn rejects_non_isometry() {
        let h = make_standard("H", None).unwrap();
        assert_eq!(
            Isometry::new(&h, IntMatrix::from_i64(&[&[1, 1], &[0, 1]])),
            Err(Error::NotIsometry)
        );
        assert!(Isometry::new(&h, IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).is_ok());
    }

    #[test]
    fn adjust_lands_in_n() {
        let n = 3;
        let l = make_standard("KummerLambda", Some(n)).unwrap();
        let d = unit(7, 6);
        // reflection in e1 + f1: orientation -1; compose with -id to fix it
        let rb = reflection(&l, &to_bigints(&[1, 1, 0, 0, 0, 0, 0])).unwrap();
        let w = Isometry::minus_identity(&l).compose(&rb).unwrap();
        assert!(w.in_w().unwrap());
        assert!(!w.in_n().unwrap());
        let (g, e) = adjust_to_n(&w, &d, DEFAULT_ADJUST_BOUND).unwrap();
        assert!(g.in_n().unwrap());
        assert_eq!(l.norm(&e).unwrap(), BigInt::from(-2));
        assert_eq!(g.apply(&d).unwrap(), w.apply(&d).unwrap());
        let r = reflection(&l, &e).unwrap();
        assert_eq!(g.compose(&r).unwrap(), w);
        assert!(adjust_to_n(&g, &d, 3).is_err());
    }
}
