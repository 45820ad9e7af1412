//! Python bindings: groups, functors and the poset/ideal/verify entry points.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use ::green_ideals::green::{dominates, is_mc_group, AlgebraPresentation, FunctorSpec, GreenFunctor, IdempotentRef};
use ::green_ideals::grp::{catalog, catalog_up_to, parse_group_spec, GroupRef};
use ::green_ideals::labels::{class_labels, display_name, slice_labels};
use ::green_ideals::lattice::{build_poset, closed_sets, psi, CLOSED_SET_LIMIT};
use ::green_ideals::qburnside::is_b_group;
use ::green_ideals::slice::t_slices;
use ::green_ideals::{verify, Error};

create_exception!(green_ideals, ResourceError, PyException, "A configured size cap was exceeded.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Usage(m) | Error::Validation(m) => PyValueError::new_err(m),
        e @ Error::Resource { .. } => ResourceError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

#[pyclass(name = "Group", frozen, module = "green_ideals", skip_from_py_object)]
#[derive(Clone)]
struct PyGroup {
    inner: GroupRef,
}

#[pymethods]
impl PyGroup {
    /// Parses a catalog-style name such as `S3`, `C2xC4` or `Q8`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(PyGroup { inner: parse_group_spec(name).map_err(py_err)? })
    }

    /// Catalog groups, optionally only those of order at most `max_order`.
    #[staticmethod]
    #[pyo3(signature = (max_order=None))]
    fn catalog(max_order: Option<usize>) -> Vec<PyGroup> {
        let groups = match max_order {
            Some(n) => catalog_up_to(n),
            None => catalog().to_vec(),
        };
        groups.into_iter().map(|inner| PyGroup { inner }).collect()
    }

    #[getter]
    fn name(&self) -> String {
        display_name(&self.inner)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    /// Labels of the conjugacy classes of subgroups, smallest first.
    fn subgroup_classes(&self) -> Vec<String> {
        class_labels(&self.inner).to_vec()
    }

    fn is_b_group(&self) -> bool {
        is_b_group(&self.inner).is_b_group
    }

    /// Slices `(G,S)` that are T-slices.
    fn t_slices(&self) -> Vec<String> {
        let g = &self.inner;
        let full = g.lattice().full();
        let labels = slice_labels(g);
        t_slices(g).into_iter().filter_map(|s| g.slice_classes().class_of(full, s)).map(|c| labels[c].clone()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.name())
    }

    fn __eq__(&self, other: &PyGroup) -> bool {
        *self.inner == *other.inner
    }
}

#[pyclass(name = "Functor", frozen, module = "green_ideals")]
struct PyFunctor {
    spec: FunctorSpec,
    inner: Arc<dyn GreenFunctor>,
}

impl PyFunctor {
    fn check(&self, g: &PyGroup, i: usize) -> PyResult<()> {
        let n = self.inner.dim(&g.inner);
        if i >= n {
            return Err(PyIndexError::new_err(format!("{} has {n} idempotents", g.name())));
        }
        Ok(())
    }
}

#[pymethods]
impl PyFunctor {
    /// `burnside`, `slice` or `shifted:<K>`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let spec: FunctorSpec = spec.parse().map_err(py_err)?;
        let inner = spec.instance().map_err(py_err)?;
        Ok(PyFunctor { spec, inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.spec.to_string()
    }

    fn dim(&self, g: &PyGroup) -> PyResult<usize> {
        self.inner.admit(&g.inner).map_err(py_err)?;
        Ok(self.inner.dim(&g.inner))
    }

    fn basis(&self, g: &PyGroup) -> PyResult<Vec<String>> {
        self.inner.admit(&g.inner).map_err(py_err)?;
        Ok(self.inner.basis_labels(&g.inner))
    }

    fn idempotent_labels(&self, g: &PyGroup) -> PyResult<Vec<String>> {
        self.inner.admit(&g.inner).map_err(py_err)?;
        Ok(self.inner.idempotent_labels(&g.inner))
    }

    /// The `i`-th primitive idempotent as `{basis label: "p/q"}`.
    fn idempotent<'py>(&self, py: Python<'py>, g: &PyGroup, i: usize) -> PyResult<Bound<'py, PyAny>> {
        self.check(g, i)?;
        to_py(py, &self.inner.to_json(&g.inner, &self.inner.idempotent(&g.inner, i)))
    }

    /// The `i`-th primitive idempotent as a readable linear combination.
    fn format_idempotent(&self, g: &PyGroup, i: usize) -> PyResult<String> {
        self.check(g, i)?;
        Ok(self.inner.format(&g.inner, &self.inner.idempotent(&g.inner, i)))
    }

    /// Whether the idempotents are orthogonal, idempotent, complete and
    /// diagonalized by the species.
    fn verify_idempotents(&self, g: &PyGroup) -> PyResult<bool> {
        self.inner.admit(&g.inner).map_err(py_err)?;
        let p = AlgebraPresentation::build(self.inner.as_ref(), &g.inner);
        Ok(p.verify(self.inner.as_ref()).map_err(py_err)?.all())
    }

    /// Labels of the idempotents witnessing that `g` is an MC-group; empty if it is not.
    fn mc_witnesses(&self, g: &PyGroup) -> PyResult<Vec<String>> {
        let labels = self.inner.idempotent_labels(&g.inner);
        let r = is_mc_group(self.inner.as_ref(), &g.inner).map_err(py_err)?;
        Ok(r.witnesses.into_iter().map(|i| labels[i].clone()).collect())
    }

    fn is_mc_group(&self, g: &PyGroup) -> PyResult<bool> {
        Ok(is_mc_group(self.inner.as_ref(), &g.inner).map_err(py_err)?.is_mc)
    }

    /// `(h, e_i) ≫ (k, e_j)`.
    fn dominates(&self, h: &PyGroup, i: usize, k: &PyGroup, j: usize) -> PyResult<bool> {
        self.check(h, i)?;
        self.check(k, j)?;
        dominates(self.inner.as_ref(), &IdempotentRef::new(&h.inner, i), &IdempotentRef::new(&k.inner, j)).map_err(py_err)
    }

    /// `{nodes, edges, bound}` for catalog groups up to `max_order`.
    fn poset<'py>(&self, py: Python<'py>, max_order: usize) -> PyResult<Bound<'py, PyAny>> {
        let p = build_poset(self.inner.as_ref(), max_order).map_err(py_err)?;
        to_py(py, &p.to_json())
    }

    /// Every idempotent-generated ideal, with its generating closed set.
    fn ideals<'py>(&self, py: Python<'py>, max_order: usize) -> PyResult<Bound<'py, PyAny>> {
        let inst = self.inner.as_ref();
        let p = build_poset(inst, max_order).map_err(py_err)?;
        let mut out = Vec::new();
        for b in closed_sets(&p, CLOSED_SET_LIMIT).map_err(py_err)? {
            let ideal = psi(inst, &p, &b).map_err(py_err)?;
            out.push(serde_json::json!({"generators": b.labels(&p), "ideal": ideal.to_json(inst)}));
        }
        to_py(py, &Value::Array(out))
    }

    /// The self-check suites; each entry has `suite`, `cases` and `failures`.
    fn verify<'py>(&self, py: Python<'py>, max_order: usize) -> PyResult<Bound<'py, PyAny>> {
        let reports = match &self.spec {
            FunctorSpec::Shifted(k) => verify::run_shifted(&parse_group_spec(k).map_err(py_err)?, max_order),
            _ => verify::run(self.inner.as_ref(), None, max_order),
        }
        .map_err(py_err)?;
        to_py(py, &serde_json::to_value(reports).expect("reports serialize"))
    }

    fn __repr__(&self) -> String {
        format!("Functor({:?})", self.name())
    }
}

/// Names of the B-groups in the catalog up to `max_order`.
#[pyfunction]
fn bgroups(max_order: usize) -> Vec<String> {
    catalog_up_to(max_order).iter().filter(|g| is_b_group(g).is_b_group).map(display_name).collect()
}

#[pymodule]
fn green_ideals(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyFunctor>()?;
    m.add_function(wrap_pyfunction!(bgroups, m)?)?;
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    Ok(())
}
