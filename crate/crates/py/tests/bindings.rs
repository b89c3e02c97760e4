use latdense_py::latdense_py as bindings;
use pyo3::prelude::*;
use pyo3::types::PyList;

#[test]
fn module_through_interpreter() {
    pyo3::append_to_inittab!(bindings);
    Python::initialize();
    Python::attach(|py| -> PyResult<()> {
        let m = py.import("latdense_py")?;
        let classes: Vec<(i64, i64)> = m.getattr("enumerate_classes")?.call1((7,))?.extract()?;
        assert_eq!(classes, vec![(1, -6), (2, -3)]);

        let lattice = m.getattr("Lattice")?.call_method1("standard", ("Lambda", 5))?;
        let disc: Vec<i64> = lattice.call_method0("disc")?.extract()?;
        assert_eq!(disc, vec![8]);
        let sig: (usize, usize) = lattice.getattr("signature")?.extract()?;
        assert_eq!(sig, (3, 20));

        let big = PyList::new(py, [[0i64, 1], [1, 0]])?;
        let h = m.getattr("Lattice")?.call1((big,))?;
        let det: i64 = h.call_method0("det")?.extract()?;
        assert_eq!(det, -1);

        let odd = m.getattr("Lattice")?.call1((vec![vec![1i64]],));
        assert!(odd.unwrap_err().is_instance(py, &m.getattr("LatticeError")?.cast_into()?));
        let bad_n = m.getattr("enumerate_classes")?.call1((1,));
        assert!(bad_n.unwrap_err().is_instance_of::<pyo3::exceptions::PyValueError>(py));

        let unit: (usize, bool, bool) = m.getattr("prime_power_unit_check")?.call1((7,))?.extract()?;
        assert_eq!(unit, (2, true, true));
        Ok(())
    })
    .unwrap();
}
