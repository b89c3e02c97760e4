use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{make_standard, Lattice, Sublattice};
use crate::error::{Error, Result};
use crate::linalg::{dot, IntMatrix};

/// A class `(r, c, s)` of the Mukai lattice: rank, a class of `LambdaK3`,
/// and the degree-four component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiVector {
    #[serde(serialize_with = "crate::json::ser", deserialize_with = "crate::json::de_big")]
    pub r: BigInt,
    #[serde(serialize_with = "crate::json::ser", deserialize_with = "crate::json::de_vector")]
    pub c: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser", deserialize_with = "crate::json::de_big")]
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, c: Vec<BigInt>, s: impl Into<BigInt>) -> Result<Self> {
        if c.len() != 22 {
            return Err(Error::dims(22, c.len()));
        }
        Ok(MukaiVector { r: r.into(), c, s: s.into() })
    }

    pub fn with_zero_middle(r: impl Into<BigInt>, s: impl Into<BigInt>) -> Self {
        MukaiVector {
            r: r.into(),
            c: vec![BigInt::zero(); 22],
            s: s.into(),
        }
    }

    /// `-r s' + (c, c') - s r'`
    pub fn pairing(&self, other: &MukaiVector) -> BigInt {
        let k3 = k3_gram();
        let cc = dot(&self.c, &k3.mul_vec(&other.c).expect("rank 22"));
        -(&self.r * &other.s) + cc - &self.s * &other.r
    }

    /// `(r, -c, s)`
    pub fn dual(&self) -> MukaiVector {
        MukaiVector {
            r: self.r.clone(),
            c: self.c.iter().map(|x| -x).collect(),
            s: self.s.clone(),
        }
    }

    /// Coordinates in the `Mukai` standard lattice `LambdaK3 ⊕ H`: the class
    /// `(r, c, s)` is `c + r e - s f`, which turns the Mukai pairing into the
    /// Gram pairing.
    pub fn to_coords(&self) -> Vec<BigInt> {
        let mut v = self.c.clone();
        v.push(self.r.clone());
        v.push(-&self.s);
        v
    }

    pub fn from_coords(x: &[BigInt]) -> Result<Self> {
        if x.len() != 24 {
            return Err(Error::dims(24, x.len()));
        }
        Ok(MukaiVector {
            r: x[22].clone(),
            c: x[..22].to_vec(),
            s: -&x[23],
        })
    }
}

fn k3_gram() -> IntMatrix {
    make_standard("LambdaK3", None)
        .expect("standard lattice")
        .gram()
        .clone()
}

#[derive(Clone, Debug, Serialize)]
pub struct VperpReport {
    pub n: i64,
    pub v: MukaiVector,
    pub delta_tilde: MukaiVector,
    #[serde(serialize_with = "crate::json::ser")]
    pub delta_dot_v: BigInt,
    #[serde(serialize_with = "crate::json::ser")]
    pub delta_norm: BigInt,
    #[serde(serialize_with = "crate::json::ser")]
    pub v_norm: BigInt,
    /// Index of `H^2 ⊕ Z δ̃` in `v⊥`.
    #[serde(serialize_with = "crate::json::ser")]
    pub index: BigInt,
    pub check: bool,
}

/// Checks that `v⊥` for `v = (1, 0, 1-n)` is the orthogonal sum of the
/// `LambdaK3` classes and `Z δ̃` with `δ̃ = (1, 0, n-1)`.
pub fn mukai_vperp_structure(n: i64) -> Result<VperpReport> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let mukai: Lattice = make_standard("Mukai", None)?;
    let v = MukaiVector::with_zero_middle(1, 1 - n);
    let delta = MukaiVector::with_zero_middle(1, n - 1);
    let delta_dot_v = delta.pairing(&v);
    let delta_norm = delta.pairing(&delta);
    let v_norm = v.pairing(&v);

    let vperp = mukai.orth_complement_of(&IntMatrix::from_rows(&[v.to_coords()], 24)?)?;
    let mut gens: Vec<Vec<BigInt>> = (0..22)
        .map(|i| {
            let mut c = vec![BigInt::zero(); 22];
            c[i] = BigInt::one();
            MukaiVector { r: 0.into(), c, s: 0.into() }.to_coords()
        })
        .collect();
    gens.push(delta.to_coords());
    let span = Sublattice::new(&mukai, IntMatrix::from_rows(&gens, 24)?)?;
    let inside = gens.iter().all(|g| vperp.contains(g).unwrap_or(false));
    let same = span.saturate().same_as(&vperp);
    let index = span.index_in_saturation();
    let check = delta_dot_v.is_zero()
        && delta_norm == BigInt::from(2 - 2 * n)
        && v_norm == BigInt::from(2 * n - 2)
        && inside
        && same
        && span.rank() == vperp.rank();
    Ok(VperpReport {
        n,
        v,
        delta_tilde: delta,
        delta_dot_v,
        delta_norm,
        v_norm,
        index,
        check,
    })
}
