use num_bigint::BigInt;
use num_traits::One;

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::{hnf, kernel_basis, nonzero_rows, saturation_basis, smith, solve_integer, IntMatrix};

/// A sublattice given by basis rows in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Sublattice<'a> {
    ambient: &'a Lattice,
    basis: IntMatrix,
}

impl<'a> Sublattice<'a> {
    /// Basis rows must be linearly independent over the rationals.
    pub fn new(ambient: &'a Lattice, basis: IntMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::dims(ambient.rank(), basis.cols()));
        }
        if smith(&basis).rank != basis.rows() {
            return Err(Error::Precondition("sublattice basis rows are dependent".into()));
        }
        Ok(Sublattice { ambient, basis })
    }

    /// Spans of possibly dependent generators; zero rows and dependencies are
    /// removed through the Hermite normal form.
    pub fn spanned_by(ambient: &'a Lattice, generators: &IntMatrix) -> Result<Self> {
        if generators.cols() != ambient.rank() {
            return Err(Error::dims(ambient.rank(), generators.cols()));
        }
        let basis = nonzero_rows(&hnf(generators).0);
        Ok(Sublattice { ambient, basis })
    }

    pub fn ambient(&self) -> &'a Lattice {
        self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn gram(&self) -> IntMatrix {
        self.ambient.gram_of(&self.basis).expect("basis has ambient width")
    }

    /// Rational span intersected with the ambient lattice.
    pub fn saturate(&self) -> Sublattice<'a> {
        Sublattice {
            ambient: self.ambient,
            basis: saturation_basis(&self.basis),
        }
    }

    /// Index in the saturation (product of the invariant factors of the basis).
    pub fn index_in_saturation(&self) -> BigInt {
        smith(&self.basis)
            .invariant_factors()
            .into_iter()
            .fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_saturated(&self) -> bool {
        self.index_in_saturation().is_one()
    }

    /// Coordinates of `x` in this basis, if `x` lies in the sublattice.
    pub fn coords_of(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        solve_integer(&self.basis.transpose(), x)
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.coords_of(x)?.is_some())
    }

    /// Same group, canonical (Hermite) basis.
    pub fn canonical_basis(&self) -> IntMatrix {
        nonzero_rows(&hnf(&self.basis).0)
    }

    pub fn same_as(&self, other: &Sublattice<'_>) -> bool {
        self.canonical_basis() == other.canonical_basis()
    }
}

pub(super) fn orth_complement<'a>(ambient: &'a Lattice, vectors: &IntMatrix) -> Sublattice<'a> {
    let a = vectors.checked_mul(ambient.gram()).expect("ambient width");
    Sublattice {
        ambient,
        basis: kernel_basis(&a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_standard;

    #[test]
    fn saturation_examples() {
        let h = make_standard("H", None).unwrap();
        let s = h.sublattice(IntMatrix::from_i64(&[&[2, 0]])).unwrap();
        assert_eq!(s.saturate().basis(), &IntMatrix::from_i64(&[&[1, 0]]));
        assert!(!s.is_saturated());
        // e - 6f, e + 6f: index 12 in H, saturation is H
        let s = h.sublattice(IntMatrix::from_i64(&[&[1, -6], &[1, 6]])).unwrap();
        assert_eq!(s.index_in_saturation(), BigInt::from(12));
        assert!(s.saturate().same_as(&h.whole()));
        let s = h.sublattice(IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        assert!(s.is_saturated());
        assert!(s.saturate().same_as(&s));
    }

    #[test]
    fn orthogonal_complements() {
        let h = make_standard("H", None).unwrap();
        let e = h.sublattice(IntMatrix::from_i64(&[&[1, 0]])).unwrap();
        assert!(h.orth_complement(&e).same_as(&e));
        assert_eq!(h.orth_complement(&h.whole()).rank(), 0);

        let k = make_standard("KummerLambda", Some(3)).unwrap();
        let w = k.sublattice(IntMatrix::from_i64(&[&[0, 0, 0, 0, 0, 0, 1]])).unwrap();
        let c = k.orth_complement(&w);
        let h3: Vec<Vec<i64>> = (0..6)
            .map(|i| (0..7).map(|j| i64::from(i == j)).collect())
            .collect();
        let h3 = IntMatrix::from_i64(&h3.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
        assert_eq!(c.basis(), &h3);
    }

    #[test]
    fn dependent_basis_rejected() {
        let h = make_standard("H", None).unwrap();
        assert!(h.sublattice(IntMatrix::from_i64(&[&[1, 1], &[2, 2]])).is_err());
        let s = Sublattice::spanned_by(&h, &IntMatrix::from_i64(&[&[1, 1], &[2, 2]])).unwrap();
        assert_eq!(s.rank(), 1);
    }
}
