//! Python bindings. Integers cross the boundary as Python ints, vectors as
//! lists and matrices as lists of rows; reports are returned as JSON text.

use latdense::density::experiment::to_csv_string;
use latdense::density::{
    check_certificate, density_experiment, is_saturated_snf, perturb_to_saturated, realize_orbit,
    ExperimentConfig, PeriodData,
};
use latdense::linalg::IntMatrix;
use latdense::orbits::{self, Kind, Model, OrbitClass};
use latdense::{acceptance, isometry, wedge, Error};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(latdense_py, LatticeError, PyException);

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::Precondition(_) | Error::BadN(_) | Error::DimensionMismatch { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => LatticeError::new_err(e.to_string()),
    }
}

fn kind(s: &str) -> PyResult<Kind> {
    s.parse().map_err(err)
}

fn matrix(rows: Vec<Vec<BigInt>>) -> PyResult<IntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    IntMatrix::from_rows(&rows, cols).map_err(err)
}

fn json(x: &impl serde::Serialize) -> String {
    serde_json::to_string(x).expect("reports serialize")
}

/// An even nondegenerate lattice given by its Gram matrix.
#[pyclass(frozen)]
struct Lattice {
    inner: latdense::Lattice,
}

#[pymethods]
impl Lattice {
    #[new]
    fn new(gram: Vec<Vec<BigInt>>) -> PyResult<Self> {
        Ok(Lattice {
            inner: latdense::Lattice::new(matrix(gram)?).map_err(err)?,
        })
    }

    /// A named standard lattice such as `Lambda`, `KummerLambda` or `Mukai`.
    #[staticmethod]
    #[pyo3(signature = (name, n=None))]
    fn standard(name: &str, n: Option<i64>) -> PyResult<Self> {
        Ok(Lattice {
            inner: latdense::make_standard(name, n).map_err(err)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn signature(&self) -> (usize, usize) {
        self.inner.signature()
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<BigInt>> {
        self.inner.gram().to_rows()
    }

    fn det(&self) -> BigInt {
        self.inner.det()
    }

    /// Invariant factors of the discriminant group.
    fn disc(&self) -> Vec<BigInt> {
        self.inner.disc_group().invariant_factors
    }

    fn inner_product(&self, x: Vec<BigInt>, y: Vec<BigInt>) -> PyResult<BigInt> {
        self.inner.inner(&x, &y).map_err(err)
    }

    fn norm(&self, x: Vec<BigInt>) -> PyResult<BigInt> {
        self.inner.norm(&x).map_err(err)
    }

    fn divisibility(&self, x: Vec<BigInt>) -> PyResult<BigInt> {
        self.inner.divisibility(&x).map_err(err)
    }

    /// Matrix of the reflection in `d`, acting on columns.
    fn reflection(&self, d: Vec<BigInt>) -> PyResult<Vec<Vec<BigInt>>> {
        Ok(isometry::reflection(&self.inner, &d).map_err(err)?.matrix().to_rows())
    }

    /// `(det, chi, orientation on the positive cone, on the negative cone)`
    /// of the isometry with matrix `m`.
    fn characters(&self, m: Vec<Vec<BigInt>>) -> PyResult<(i32, i32, i32, i32)> {
        let g = isometry::Isometry::new(&self.inner, matrix(m)?).map_err(err)?;
        Ok((
            g.det_char(),
            g.chi().map_err(err)?,
            g.orientation_char(),
            g.orientation_char_negative(),
        ))
    }

    fn __repr__(&self) -> String {
        let (p, q) = self.inner.signature();
        format!("Lattice(rank={}, signature=({p}, {q}))", self.inner.rank())
    }
}

/// Orbit classes `(a, b)` for `n` and kind `hilbert` or `kummer`.
#[pyfunction]
#[pyo3(signature = (n, kind_name="hilbert"))]
fn enumerate_classes(n: i64, kind_name: &str) -> PyResult<Vec<(i64, i64)>> {
    Ok(orbits::enumerate_classes(n, kind(kind_name)?)
        .map_err(err)?
        .into_iter()
        .map(|c| (c.a, c.b))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (n, kind_name="hilbert"))]
fn orbit_count_formula(n: i64, kind_name: &str) -> PyResult<u64> {
    orbits::orbit_count_formula_for(n, kind(kind_name)?).map_err(err)
}

#[pyfunction]
fn sigma_check(n: i64, kind_name: &str, vector: Vec<BigInt>) -> PyResult<bool> {
    orbits::sigma_check(n, kind(kind_name)?, &vector).map_err(err)
}

#[pyfunction]
fn f_invariant(n: i64, kind_name: &str, vector: Vec<BigInt>) -> PyResult<(i64, i64)> {
    let c = orbits::f_invariant(n, kind(kind_name)?, &vector).map_err(err)?;
    Ok((c.a, c.b))
}

/// An exceptional class with invariant `(a, b)` orthogonal to the standard
/// plane `T = diag(2, 2)`.
#[pyfunction]
#[pyo3(signature = (n, kind_name, a, b, bound=None))]
fn realize_standard(n: i64, kind_name: &str, a: i64, b: i64, bound: Option<i64>) -> PyResult<Vec<BigInt>> {
    let k = kind(kind_name)?;
    let pd = PeriodData::standard(n, k).map_err(err)?;
    let c = OrbitClass::canonical(a, b, k, n).map_err(err)?;
    let bound = bound.unwrap_or_else(|| latdense::density::default_realize_bound(n));
    Ok(realize_orbit(&pd, &c, bound).map_err(err)?.delta)
}

/// Perturbation of the plane `u1, u2` (lattice coordinates) with parameter
/// `k`, as JSON; includes both saturation checks.
#[pyfunction]
fn perturb(n: i64, kind_name: &str, u1: Vec<BigInt>, u2: Vec<BigInt>, k: u64) -> PyResult<String> {
    let model = Model::new(n, kind(kind_name)?).map_err(err)?;
    let (a1, a2) = (model.embed(&u1).map_err(err)?, model.embed(&u2).map_err(err)?);
    let p = perturb_to_saturated(&model.ambient, &model.v, &a1, &a2, k).map_err(err)?;
    let cert = check_certificate(&model.ambient, &model.v, &p.u1p, &p.u2p, &p.certificate).map_err(err)?;
    let snf = is_saturated_snf(&p.u1p, &p.u2p, &model.v).map_err(err)?;
    let mut v = serde_json::to_value(&p).expect("serializes");
    v["certificate_ok"] = cert.into();
    v["snf_saturated"] = snf.into();
    Ok(v.to_string())
}

/// The density experiment as CSV text.
#[pyfunction]
#[pyo3(signature = (n, kind_name, trials, epsilon, seed, timing=false))]
fn density_run(n: i64, kind_name: &str, trials: usize, epsilon: f64, seed: u64, timing: bool) -> PyResult<String> {
    let mut cfg = ExperimentConfig::new(n, kind(kind_name)?, trials, epsilon, seed);
    cfg.timing = timing;
    to_csv_string(&density_experiment(&cfg).map_err(err)?).map_err(err)
}

/// The matrix of `ψ` (columns are images of `e12, e34, e13, e24, e14, e23`).
#[pyfunction]
fn psi() -> Vec<Vec<BigInt>> {
    wedge::psi().to_rows()
}

#[pyfunction]
#[pyo3(signature = (sign=wedge::DEFAULT_SIGN))]
fn wedge_report(sign: i32) -> PyResult<String> {
    Ok(json(&wedge::wedge_report(sign).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (n, sign=wedge::DEFAULT_SIGN))]
fn tau_report(n: i64, sign: i32) -> PyResult<String> {
    Ok(json(&wedge::tau_report(n, sign).map_err(err)?))
}

/// `(count, is_prime_power, agree)`.
#[pyfunction]
fn prime_power_unit_check(n: i64) -> PyResult<(usize, bool, bool)> {
    let c = wedge::prime_power_unit_check(n).map_err(err)?;
    Ok((c.count, c.is_prime_power, c.agree))
}

/// `(id, passed, line)` for the selected acceptance criteria (all by default).
#[pyfunction]
#[pyo3(signature = (only=None))]
fn selftest(only: Option<Vec<u32>>) -> PyResult<Vec<(u32, bool, String)>> {
    let ids = only.unwrap_or_else(|| acceptance::CRITERIA.iter().map(|c| c.0).collect());
    ids.into_iter()
        .map(|id| {
            let r = acceptance::run_criterion(id).ok_or_else(|| PyValueError::new_err(format!("no criterion {id}")))?;
            Ok((r.id, r.pass, r.line()))
        })
        .collect()
}

#[pymodule]
pub fn latdense_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LatticeError", m.py().get_type::<LatticeError>())?;
    m.add_class::<Lattice>()?;
    m.add_function(wrap_pyfunction!(enumerate_classes, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_count_formula, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_check, m)?)?;
    m.add_function(wrap_pyfunction!(f_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(realize_standard, m)?)?;
    m.add_function(wrap_pyfunction!(perturb, m)?)?;
    m.add_function(wrap_pyfunction!(density_run, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(wedge_report, m)?)?;
    m.add_function(wrap_pyfunction!(tau_report, m)?)?;
    m.add_function(wrap_pyfunction!(prime_power_unit_check, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
