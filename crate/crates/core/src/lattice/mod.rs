//! Even integral lattices given by a Gram matrix, the standard lattices used
//! throughout the crate, and basic vector invariants.

mod disc;
mod mukai;
mod standard;
mod sublattice;

pub use disc::DiscGroup;
pub use mukai::{mukai_vperp_structure, MukaiVector, VperpReport};
pub use standard::{make_standard, StandardLattice};
pub use sublattice::Sublattice;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{content, dot, IntMatrix};
use crate::rational::{count_signs, diagonalize, primitive_multiple};

/// A nondegenerate even lattice.
///
/// Besides the Gram matrix, a lattice carries reference bases of a maximal
/// positive-definite and a maximal negative-definite subspace; these fix the
/// orientation characters computed in [`crate::isometry`].
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    gram: IntMatrix,
    signature: (usize, usize),
    positive_reference: IntMatrix,
    negative_reference: IntMatrix,
}

impl Lattice {
    /// Validates the Gram matrix (square, symmetric, even, nondegenerate) and
    /// computes the signature by exact diagonalization.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::InvalidLattice("gram matrix is not square".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidLattice("gram matrix is not symmetric".into()));
        }
        if (0..gram.rows()).any(|i| gram[(i, i)].is_odd()) {
            return Err(Error::InvalidLattice("lattice is not even".into()));
        }
        let (diag, basis) = diagonalize(&gram);
        let (pos, neg, zero) = count_signs(&diag);
        if zero > 0 {
            return Err(Error::InvalidLattice("gram matrix is degenerate".into()));
        }
        let pick = |positive: bool| -> IntMatrix {
            let rows: Vec<Vec<BigInt>> = diag
                .iter()
                .zip(&basis)
                .filter(|(d, _)| d.is_positive() == positive)
                .map(|(_, c)| primitive_multiple(c))
                .collect();
            IntMatrix::from_rows(&rows, gram.rows()).expect("rank-sized rows")
        };
        let positive_reference = pick(true);
        let negative_reference = pick(false);
        Ok(Lattice {
            gram,
            signature: (pos, neg),
            positive_reference,
            negative_reference,
        })
    }

    /// Replaces the positive reference basis. The rows must span a
    /// positive-definite subspace of maximal dimension.
    pub fn with_positive_reference(mut self, rows: IntMatrix) -> Result<Self> {
        let g = self.gram_of(&rows)?;
        if rows.rows() != self.signature.0 || !is_definite(&g, true) {
            return Err(Error::Precondition(
                "positive reference must span a maximal positive-definite subspace".into(),
            ));
        }
        self.positive_reference = rows;
        Ok(self)
    }

    pub fn with_negative_reference(mut self, rows: IntMatrix) -> Result<Self> {
        let g = self.gram_of(&rows)?;
        if rows.rows() != self.signature.1 || !is_definite(&g, false) {
            return Err(Error::Precondition(
                "negative reference must span a maximal negative-definite subspace".into(),
            ));
        }
        self.negative_reference = rows;
        Ok(self)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// (positive index, negative index)
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn positive_reference(&self) -> &IntMatrix {
        &self.positive_reference
    }

    pub fn negative_reference(&self) -> &IntMatrix {
        &self.negative_reference
    }

    pub fn det(&self) -> BigInt {
        self.gram.det().expect("gram is square")
    }

    /// The same group with the form negated; the reference subspaces swap.
    pub fn negated(&self) -> Lattice {
        Lattice {
            gram: -&self.gram,
            signature: (self.signature.1, self.signature.0),
            positive_reference: self.negative_reference.clone(),
            negative_reference: self.positive_reference.clone(),
        }
    }

    /// Orthogonal direct sum; reference subspaces are concatenated.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let pad = |a: &IntMatrix, b: &IntMatrix| {
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for i in 0..a.rows() {
                let mut r = a.row(i).to_vec();
                r.extend(std::iter::repeat_n(BigInt::zero(), other.rank()));
                rows.push(r);
            }
            for i in 0..b.rows() {
                let mut r = vec![BigInt::zero(); self.rank()];
                r.extend(b.row(i).iter().cloned());
                rows.push(r);
            }
            IntMatrix::from_rows(&rows, self.rank() + other.rank()).expect("padded rows")
        };
        Lattice {
            gram: self.gram.direct_sum(&other.gram),
            signature: (
                self.signature.0 + other.signature.0,
                self.signature.1 + other.signature.1,
            ),
            positive_reference: pad(&self.positive_reference, &other.positive_reference),
            negative_reference: pad(&self.negative_reference, &other.negative_reference),
        }
    }

    fn check_dim(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::dims(self.rank(), x.len()));
        }
        Ok(())
    }

    /// `G x`: the pairings of `x` with the basis vectors.
    pub fn pairing_row(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_dim(x)?;
        self.gram.mul_vec(x)
    }

    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check_dim(y)?;
        Ok(dot(&self.pairing_row(x)?, y))
    }

    pub fn norm(&self, x: &[BigInt]) -> Result<BigInt> {
        self.inner(x, x)
    }

    /// Positive generator of the ideal `(x, L)`.
    pub fn divisibility(&self, x: &[BigInt]) -> Result<BigInt> {
        self.check_dim(x)?;
        if x.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(content(&self.pairing_row(x)?))
    }

    pub fn is_primitive(&self, x: &[BigInt]) -> Result<bool> {
        self.check_dim(x)?;
        if x.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(content(x) == BigInt::from(1))
    }

    /// `B G B^T` for basis rows `B`.
    pub fn gram_of(&self, basis: &IntMatrix) -> Result<IntMatrix> {
        if basis.cols() != self.rank() {
            return Err(Error::dims(self.rank(), basis.cols()));
        }
        let bg = basis.checked_mul(&self.gram)?;
        bg.checked_mul(&basis.transpose())
    }

    pub fn sublattice(&self, basis: IntMatrix) -> Result<Sublattice<'_>> {
        Sublattice::new(self, basis)
    }

    pub fn whole(&self) -> Sublattice<'_> {
        Sublattice::new(self, IntMatrix::identity(self.rank())).expect("identity basis")
    }

    /// Saturated sublattice of vectors orthogonal to all of `s`.
    pub fn orth_complement(&self, s: &Sublattice<'_>) -> Sublattice<'_> {
        sublattice::orth_complement(self, s.basis())
    }

    pub fn orth_complement_of(&self, vectors: &IntMatrix) -> Result<Sublattice<'_>> {
        if vectors.cols() != self.rank() {
            return Err(Error::dims(self.rank(), vectors.cols()));
        }
        Ok(sublattice::orth_complement(self, vectors))
    }

    pub fn disc_group(&self) -> DiscGroup {
        DiscGroup::of(self)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == BigInt::from(1)
    }
}

/// Sylvester's criterion on leading minors (sign-adjusted for negative).
pub fn is_definite(g: &IntMatrix, positive: bool) -> bool {
    if !g.is_square() {
        return false;
    }
    (1..=g.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        let minor = g.select_rows(0..k).select_cols(&idx);
        let d = minor.det().expect("square");
        if positive || k % 2 == 0 {
            d.is_positive()
        } else {
            d.is_negative()
        }
    })
}
