//! Exact computations with even integral lattices: normal forms over the
//! integers, standard lattices of hyperkähler type, isometries and their
//! characters, orbit invariants of vectors, primitive embeddings, density
//! experiments for period planes, and the wedge-square isometry.

pub mod acceptance;
pub mod density;
pub mod embed;
pub mod error;
pub mod isometry;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod orbits;
pub mod rational;
mod search;
pub mod wedge;

pub use error::{Error, Result};
pub use isometry::{reflection, Isometry};
pub use lattice::{make_standard, Lattice, Sublattice};
pub use linalg::IntMatrix;
pub use orbits::{Kind, OrbitClass};
