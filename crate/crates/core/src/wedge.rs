//! The wedge square of a rank-4 lattice `V` with basis `e1..e4`.
//!
//! `∧²V` has basis `(e12, e34, e13, e24, e14, e23)` and pairing
//! `(a, b) = s · ω*(a ∧ b)` with `ω = e1 ∧ e2 ∧ e3 ∧ e4` and a sign
//! convention `s = ±1`. `ψ` is the pairing map `∧²V → ∧²V*` followed by
//! `e_i* ↦ e_i`; it does not depend on `s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::{reflection, Isometry};
use crate::lattice::Lattice;
use crate::linalg::{to_bigints, IntMatrix};
use crate::orbits::distinct_primes;

/// Index pairs of the basis, in order.
pub const BASIS: [(usize, usize); 6] = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)];

/// Default sign convention.
pub const DEFAULT_SIGN: i32 = -1;

/// `α = e12 − e34`, `β = e13 + e24`, `γ = e14 − e23`.
pub const ALPHA: [i64; 6] = [1, -1, 0, 0, 0, 0];
pub const BETA: [i64; 6] = [0, 0, 1, 1, 0, 0];
pub const GAMMA: [i64; 6] = [0, 0, 0, 0, 1, -1];

/// The fixed space of `ψ`: `e12 + e34`, `e13 − e24`, `e14 + e23`.
pub const PSI_PLUS: [[i64; 6]; 3] = [[1, 1, 0, 0, 0, 0], [0, 0, 1, -1, 0, 0], [0, 0, 0, 0, 1, 1]];

#[derive(Clone, Debug, PartialEq)]
pub struct WedgeSquareLattice {
    pub sign: i32,
    pub lattice: Lattice,
}

impl WedgeSquareLattice {
    pub fn gram(&self) -> &IntMatrix {
        self.lattice.gram()
    }
}

fn check_sign(s: i32) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("sign convention must be +1 or -1, got {s}")))
    }
}

/// Sign of the permutation taking `idx` to sorted order, or 0 on a repeat.
fn parity(idx: [usize; 4]) -> i64 {
    let mut sign = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `ω*(a ∧ b)` on basis elements.
fn omega_star(a: usize, b: usize) -> i64 {
    let ((i, j), (k, l)) = (BASIS[a], BASIS[b]);
    parity([i, j, k, l])
}

fn omega_matrix() -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..6).map(|a| (0..6).map(|b| omega_star(a, b)).collect()).collect();
    from_i64_rows(&rows)
}

fn from_i64_rows(rows: &[Vec<i64>]) -> IntMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    IntMatrix::from_i64(&refs)
}

fn rows_of(vs: &[[i64; 6]]) -> IntMatrix {
    from_i64_rows(&vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>())
}

/// The wedge pairing under convention `s`, with the eigenspaces of `ψ` as
/// reference bases of the definite subspaces.
pub fn wedge_gram(s: i32) -> Result<WedgeSquareLattice> {
    check_sign(s)?;
    let gram = omega_matrix().scale(&BigInt::from(s));
    let plus = rows_of(&PSI_PLUS);
    let minus = rows_of(&[ALPHA, BETA, GAMMA]);
    let (pos, neg) = if s == 1 { (plus, minus) } else { (minus, plus) };
    let lattice = Lattice::new(gram)?
        .with_positive_reference(pos)?
        .with_negative_reference(neg)?;
    Ok(WedgeSquareLattice { sign: s, lattice })
}

/// `φ` in the bases `(e_ij)` and `(e_ij*)`: column `b` holds the functional
/// `ω*(e_b ∧ ·)`.
pub fn phi() -> IntMatrix {
    omega_matrix().transpose()
}

/// `ψ = (∧²f) φ` with `f(e_i*) = e_i`; column `b` is `ψ(e_b)`.
pub fn psi() -> IntMatrix {
    // ∧²f sends the dual basis (e_ij*) to (e_ij) index by index
    phi()
}

/// `∧²A` in the basis order: entry `(kl, ij)` is the minor of `A` on rows
/// `k, l` and columns `i, j`.
pub fn wedge_sq_of(a: &IntMatrix) -> Result<IntMatrix> {
    if a.rows() != 4 || a.cols() != 4 {
        return Err(Error::dims("4x4", format!("{}x{}", a.rows(), a.cols())));
    }
    if !a.det()?.abs().is_one() {
        return Err(Error::Precondition("wedge square needs |det A| = 1".into()));
    }
    let mut m = IntMatrix::zeros(6, 6);
    for (c, &(i, j)) in BASIS.iter().enumerate() {
        for (r, &(k, l)) in BASIS.iter().enumerate() {
            m[(r, c)] = &a[(k, i)] * &a[(l, j)] - &a[(k, j)] * &a[(l, i)];
        }
    }
    Ok(m)
}

/// Renders a wedge vector as a signed sum of basis elements.
pub fn format_wedge(x: &[BigInt]) -> String {
    let mut out = String::new();
    for (c, &(i, j)) in x.iter().zip(&BASIS) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { mag.to_string() };
        out.push_str(&format!("{sign}{coef}e{}∧e{}", i + 1, j + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionReport {
    pub sign: i32,
    /// `(α,α)`, `(β,β)`, `(γ,γ)`
    pub norms: [i64; 3],
    /// The values stated alongside the table: `−2, 2, −2`.
    pub stated_norms: [i64; 3],
    /// Which of the stated norms disagree with the computation.
    pub norm_discrepancies: Vec<String>,
    pub reflections_match_other_convention: bool,
    pub decomposition_holds: bool,
    pub orientation_positive: i32,
    pub orientation_negative: i32,
    /// `ψ` is `+1` on one definite 3-space and `−1` on the other.
    pub block_structure_holds: bool,
    /// `"positive"` or `"negative"`: the definite subspace fixed by `ψ`.
    pub fixed_subspace: String,
    /// `ψ` preserves the negative cone orientation and reverses the positive.
    pub reverses_positive_preserves_negative: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    /// `(α, ψ(α))` for each basis element, as text.
    pub table: Vec<(String, String)>,
    pub table_matches: bool,
    #[serde(serialize_with = "crate::json::ser")]
    pub psi_matrix: Vec<Vec<BigInt>>,
    pub psi_squared_is_identity: bool,
    #[serde(serialize_with = "crate::json::ser")]
    pub det_psi: BigInt,
    pub conventions: Vec<ConventionReport>,
}

/// The table of `ψ` images on the basis, as stated.
pub fn stated_psi_table() -> [[i64; 6]; 6] {
    [
        [0, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0],
        [0, 0, -1, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0],
    ]
}

fn basis_vector(i: usize) -> Vec<BigInt> {
    (0..6).map(|j| BigInt::from((i == j) as i64)).collect()
}

fn convention_report(s: i32, psi_m: &IntMatrix) -> Result<ConventionReport> {
    let w = wedge_gram(s)?;
    let l = &w.lattice;
    let (a, b, g) = (to_bigints(&ALPHA), to_bigints(&BETA), to_bigints(&GAMMA));
    let norm = |x: &[BigInt]| -> Result<i64> {
        l.norm(x)?.try_into().map_err(|_| Error::Invariant("norm overflow".into()))
    };
    let norms = [norm(&a)?, norm(&b)?, norm(&g)?];
    let stated_norms = [-2, 2, -2];
    let norm_discrepancies = ["alpha", "beta", "gamma"]
        .iter()
        .zip(norms.iter().zip(&stated_norms))
        .filter(|(_, (c, p))| c != p)
        .map(|(name, (c, p))| format!("({name},{name}) computed {c}, stated {p}"))
        .collect();
    let refl = |x: &[BigInt], lat: &Lattice| reflection(lat, x).map(|r| r.matrix().clone());
    let product = refl(&a, l)?.checked_mul(&refl(&b, l)?)?.checked_mul(&refl(&g, l)?)?;
    let other = wedge_gram(-s)?;
    let reflections_match_other_convention = [&a, &b, &g]
        .iter()
        .map(|x| Ok(refl(x, l)? == refl(x, &other.lattice)?))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|t| t);
    let iso = Isometry::new(l, psi_m.clone())?;
    let acts_as = |vs: &[[i64; 6]], sign: i64| -> Result<bool> {
        for v in vs {
            let x = to_bigints(v);
            let y: Vec<BigInt> = x.iter().map(|t| t * sign).collect();
            if iso.apply(&x)? != y {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let block_structure_holds = acts_as(&PSI_PLUS, 1)? && acts_as(&[ALPHA, BETA, GAMMA], -1)?;
    let plus_norms = PSI_PLUS
        .iter()
        .map(|v| l.norm(&to_bigints(v)))
        .collect::<Result<Vec<_>>>()?;
    let fixed_subspace = if plus_norms.iter().all(Signed::is_positive) { "positive" } else { "negative" };
    let (op, on) = (iso.orientation_char(), iso.orientation_char_negative());
    Ok(ConventionReport {
        sign: s,
        norms,
        stated_norms,
        norm_discrepancies,
        reflections_match_other_convention,
        decomposition_holds: &product == psi_m,
        orientation_positive: op,
        orientation_negative: on,
        block_structure_holds,
        fixed_subspace: fixed_subspace.into(),
        reverses_positive_preserves_negative: op == -1 && on == 1,
    })
}

/// Checks the table of `ψ`, `ψ = R_α R_β R_γ`, `det ψ = −1` and the effect
/// on both cones, under both sign conventions. Discrepancies are reported.
pub fn verify_psi_decomposition() -> Result<PsiReport> {
    let p = psi();
    let stated = stated_psi_table();
    let mut table = Vec::new();
    let mut table_matches = true;
    for (i, row) in stated.iter().enumerate() {
        let image = p.col(i);
        table_matches &= image == to_bigints(row);
        table.push((format_wedge(&basis_vector(i)), format_wedge(&image)));
    }
    let conventions = [1, -1]
        .iter()
        .map(|&s| convention_report(s, &p))
        .collect::<Result<Vec<_>>>()?;
    Ok(PsiReport {
        table,
        table_matches,
        psi_matrix: p.to_rows(),
        psi_squared_is_identity: p.checked_mul(&p)? == IntMatrix::identity(6),
        det_psi: p.det()?,
        conventions,
    })
}

/// `∧²V ⊕ ⟨−2−2n⟩` with the wedge pairing under convention `s`.
pub fn kummer_wedge_model(n: i64, s: i32) -> Result<Lattice> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let w = wedge_gram(s)?;
    let l = Lattice::new(IntMatrix::from_i64(&[&[-2 - 2 * n]]))?;
    let sum = w.lattice.direct_sum(&l);
    let pad = |m: &IntMatrix| -> Result<IntMatrix> {
        let rows: Vec<Vec<BigInt>> = m
            .to_rows()
            .into_iter()
            .map(|mut r| {
                r.push(BigInt::zero());
                r
            })
            .collect();
        IntMatrix::from_rows(&rows, 7)
    };
    let mut neg = pad(w.lattice.negative_reference())?.to_rows();
    let mut last = vec![BigInt::zero(); 7];
    last[6] = BigInt::one();
    neg.push(last);
    sum.with_positive_reference(pad(w.lattice.positive_reference())?)?
        .with_negative_reference(IntMatrix::from_rows(&neg, 7)?)
}

/// `−ψ` on the wedge block and the identity on the `⟨−2−2n⟩` generator.
pub fn tau(n: i64, s: i32) -> Result<Isometry> {
    let l = kummer_wedge_model(n, s)?;
    let m = (-&psi()).direct_sum(&IntMatrix::identity(1));
    Isometry::new(&l, m)
}

#[derive(Clone, Debug, Serialize)]
pub struct TauReport {
    pub n: i64,
    pub sign: i32,
    pub det: i32,
    pub chi: i32,
    pub det_chi: i32,
    pub orientation_positive: i32,
    pub orientation_negative: i32,
    pub in_w: bool,
    pub in_n: bool,
    pub involution: bool,
}

pub fn tau_report(n: i64, s: i32) -> Result<TauReport> {
    let t = tau(n, s)?;
    let (det, chi) = (t.det_char(), t.chi()?);
    Ok(TauReport {
        n,
        sign: s,
        det,
        chi,
        det_chi: det * chi,
        orientation_positive: t.orientation_char(),
        orientation_negative: t.orientation_char_negative(),
        in_w: t.in_w()?,
        in_n: t.in_n()?,
        involution: t.compose(&t)?.is_identity(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitCheck {
    pub n: i64,
    /// Units `u` mod `2n+2` with `u² ≡ 1 mod 4(n+1)`.
    pub units: Vec<u64>,
    pub count: usize,
    pub is_prime_power: bool,
    pub agree: bool,
}

/// Counts the units acting on the discriminant form of `⟨−2−2n⟩`, i.e.
/// `u² ≡ 1 mod 4(n+1)`, and compares `count == 2` with `n+1` being a prime
/// power.
pub fn prime_power_unit_check(n: i64) -> Result<UnitCheck> {
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let m = 2 * n as u64 + 2;
    let units: Vec<u64> = (1..m)
        .filter(|&u| u.gcd(&m) == 1 && (u as u128 * u as u128) % (2 * m as u128) == 1)
        .collect();
    let count = units.len();
    let is_prime_power = distinct_primes(n as u64 + 1) == 1;
    Ok(UnitCheck {
        n,
        units,
        count,
        is_prime_power,
        agree: (count == 2) == is_prime_power,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitSweep {
    pub from: i64,
    pub to: i64,
    pub all_agree: bool,
    pub disagreements: Vec<UnitCheck>,
}

pub fn unit_sweep(from: i64, to: i64) -> Result<UnitSweep> {
    let disagreements = (from..=to)
        .map(prime_power_unit_check)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|c| !c.agree)
        .collect::<Vec<_>>();
    Ok(UnitSweep {
        from,
        to,
        all_agree: disagreements.is_empty(),
        disagreements,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeReport {
    pub sign: i32,
    pub psi: PsiReport,
    pub tau: Vec<TauReport>,
    pub unit_check: UnitSweep,
}

/// Everything above in one report, with `τ` for `2 <= n <= 10` under `s`.
pub fn wedge_report(s: i32) -> Result<WedgeReport> {
    check_sign(s)?;
    Ok(WedgeReport {
        sign: s,
        psi: verify_psi_decomposition()?,
        tau: (2..=10).map(|n| tau_report(n, s)).collect::<Result<_>>()?,
        unit_check: unit_sweep(2, 200)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(l: &Lattice, a: usize, b: usize) -> BigInt {
        l.inner(&basis_vector(a), &basis_vector(b)).unwrap()
    }

    #[test]
    fn gram_signs() {
        let w = wedge_gram(1).unwrap();
        assert_eq!(pair(&w.lattice, 0, 1), BigInt::from(1));
        assert_eq!(pair(&w.lattice, 2, 3), BigInt::from(-1));
        assert_eq!(pair(&w.lattice, 4, 5), BigInt::from(1));
        assert_eq!(pair(&w.lattice, 0, 0), BigInt::zero());
        assert_eq!(w.lattice.signature(), (3, 3));
        let m = wedge_gram(-1).unwrap();
        assert_eq!(m.gram(), &w.gram().scale(&BigInt::from(-1)));
        assert!(wedge_gram(2).is_err());
    }

    #[test]
    fn psi_images() {
        let p = psi();
        assert_eq!(format_wedge(&p.col(0)), "e3∧e4");
        assert_eq!(format_wedge(&p.col(2)), "-e2∧e4");
        assert_eq!(p.checked_mul(&p).unwrap(), IntMatrix::identity(6));
    }

    #[test]
    fn minors_of_diagonal() {
        let a = IntMatrix::diagonal(&to_bigints(&[1, 1, 1, -1]));
        let w = wedge_sq_of(&a).unwrap();
        assert_eq!(w, IntMatrix::diagonal(&to_bigints(&[1, -1, 1, -1, -1, 1])));
        assert_eq!(w.det().unwrap(), BigInt::from(-1));
        assert_eq!(wedge_sq_of(&IntMatrix::identity(4)).unwrap(), IntMatrix::identity(6));
        assert!(wedge_sq_of(&IntMatrix::diagonal(&to_bigints(&[2, 1, 1, 1]))).is_err());
    }

    #[test]
    fn shear_is_isometry() {
        let mut a = IntMatrix::identity(4);
        a[(1, 0)] = BigInt::one();
        let w = wedge_gram(DEFAULT_SIGN).unwrap();
        let g = Isometry::new(&w.lattice, wedge_sq_of(&a).unwrap()).unwrap();
        assert_eq!(g.det_char(), 1);
        assert_eq!(g.orientation_char(), 1);
        assert_eq!(g.orientation_char_negative(), 1);
    }

    #[test]
    fn decomposition_report() {
        let r = verify_psi_decomposition().unwrap();
        assert!(r.table_matches);
        assert_eq!(r.det_psi, BigInt::from(-1));
        for c in &r.conventions {
            assert!(c.decomposition_holds && c.block_structure_holds);
            assert!(c.reflections_match_other_convention);
        }
        let plus = &r.conventions[0];
        assert_eq!(plus.norms, [-2, -2, -2]);
        assert_eq!(plus.norm_discrepancies.len(), 1);
        assert_eq!(plus.fixed_subspace, "positive");
        let minus = &r.conventions[1];
        assert!(minus.reverses_positive_preserves_negative);
        assert!(!plus.reverses_positive_preserves_negative);
    }

    #[test]
    fn tau_characters() {
        for n in 2..=6 {
            let r = tau_report(n, -1).unwrap();
            assert_eq!((r.det, r.chi, r.det_chi), (-1, 1, -1));
            assert_eq!(r.orientation_positive, 1);
            assert!(r.in_w && !r.in_n && r.involution);
        }
        let r = tau_report(3, 1).unwrap();
        assert_eq!(r.orientation_positive, -1);
    }

    #[test]
    fn unit_examples() {
        let c = prime_power_unit_check(3).unwrap();
        assert_eq!((c.units.clone(), c.is_prime_power, c.agree), (vec![1, 7], true, true));
        let c = prime_power_unit_check(5).unwrap();
        assert_eq!((c.units.clone(), c.is_prime_power), (vec![1, 5, 7, 11], false));
        assert_eq!(prime_power_unit_check(7).unwrap().units, vec![1, 15]);
        assert!(prime_power_unit_check(1).is_err());
    }
}
