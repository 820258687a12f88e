//! Python module `critval`.
//!
//! Multi-indices may be passed as a `MultiIndex`, a list of ints or a string
//! like `"2,3"`. Points are lists of Python complex numbers.

use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use critval_core::cli::sweep_instance;
use critval_core::critical_map::{self, build_bundle, factored_closed_form, SizeGuard, ThetaMap};
use critval_core::dyson::dyson_constant_term;
use critval_core::multi_index::{multinomial, sweep_range};
use critval_core::stratify::{self, CertifyOptions, LiftOptions};
use critval_core::{Complex64, ComplexPath, ComplexPoint, Error};

fn to_py(e: Error) -> PyErr {
    if e.is_numeric() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(
    name = "MultiIndex",
    frozen,
    eq,
    hash,
    skip_from_py_object,
    module = "critval"
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyMultiIndex {
    inner: critval_core::MultiIndex,
}

#[pymethods]
impl PyMultiIndex {
    #[new]
    fn new(a: IndexArg<'_>) -> PyResult<Self> {
        Ok(Self {
            inner: a.resolve()?,
        })
    }

    #[getter]
    fn parts(&self) -> Vec<u32> {
        self.inner.parts().to_vec()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn multinomial(&self) -> BigInt {
        multinomial(self.inner.n(), &self.inner).unwrap().into()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MultiIndex({:?})", self.inner.parts())
    }
}

#[derive(FromPyObject)]
enum IndexArg<'py> {
    Obj(Bound<'py, PyMultiIndex>),
    Text(String),
    Parts(Vec<u32>),
}

impl IndexArg<'_> {
    fn resolve(self) -> PyResult<critval_core::MultiIndex> {
        match self {
            IndexArg::Obj(o) => Ok(o.get().inner.clone()),
            IndexArg::Text(s) => s.parse().map_err(to_py),
            IndexArg::Parts(p) => critval_core::MultiIndex::new(p).map_err(to_py),
        }
    }
}

#[pyclass(
    name = "SetPartition",
    frozen,
    eq,
    skip_from_py_object,
    module = "critval"
)]
#[derive(Clone, PartialEq)]
struct PySetPartition {
    inner: stratify::SetPartition,
}

#[pymethods]
impl PySetPartition {
    /// Blocks of 0-based indices, e.g. `[[0, 2], [1]]`.
    #[new]
    fn new(blocks: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Self {
            inner: stratify::SetPartition::new(blocks).map_err(to_py)?,
        })
    }

    /// 1-based text form, e.g. `"{{1,3},{2}}"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: text.parse().map_err(to_py)?,
        })
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<usize>> {
        self.inner.blocks().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn ell(&self) -> usize {
        self.inner.ell()
    }

    fn multiplicities(&self) -> PyMultiIndex {
        PyMultiIndex {
            inner: stratify::multiplicities_of(&self.inner),
        }
    }

    fn refines(&self, other: &PySetPartition) -> PyResult<bool> {
        stratify::refines(&self.inner, &other.inner).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SetPartition.parse({:?})", self.inner.to_string())
    }
}

fn point(z: Vec<Complex64>) -> PyResult<ComplexPoint> {
    ComplexPoint::new(z).map_err(to_py)
}

/// Compare `det J_a` with its factored closed form.
#[pyfunction]
fn verify_identity<'py>(py: Python<'py>, a: IndexArg<'py>) -> PyResult<Bound<'py, PyDict>> {
    let a = a.resolve()?;
    let rec = critical_map::verify_identity(&a, &SizeGuard::default())
        .map_err(to_py)?
        .record();
    let d = PyDict::new(py);
    d.set_item("a", a.parts().to_vec())?;
    d.set_item("equal", rec.equal)?;
    d.set_item("determinant", rec.lhs_text)?;
    d.set_item("closed_form", rec.rhs_text)?;
    d.set_item("factored", rec.factored)?;
    d.set_item("wall_time_ms", rec.wall_time_ms)?;
    Ok(d)
}

/// `p_a` as text, with `z` printed as the extra last variable.
#[pyfunction]
fn p_a(a: IndexArg<'_>) -> PyResult<String> {
    Ok(critical_map::build_p_a(&a.resolve()?)
        .to_multi()
        .to_string())
}

/// Entries of `J_a` as text; `[i][j]` is `∂/∂z_{i+1} p_a(z_{j+1})`.
#[pyfunction]
fn jacobian(a: IndexArg<'_>) -> PyResult<Vec<Vec<String>>> {
    let a = a.resolve()?;
    SizeGuard::default().check(&a).map_err(to_py)?;
    let b = build_bundle(&a);
    Ok((0..a.m())
        .map(|i| (0..a.m()).map(|j| b.entry(i, j).to_string()).collect())
        .collect())
}

#[pyfunction]
fn determinant(a: IndexArg<'_>) -> PyResult<String> {
    let a = a.resolve()?;
    SizeGuard::default().check(&a).map_err(to_py)?;
    Ok(build_bundle(&a).determinant().to_string())
}

#[pyfunction]
fn factored(a: IndexArg<'_>) -> PyResult<String> {
    Ok(factored_closed_form(&a.resolve()?))
}

#[pyfunction]
fn dyson(a: IndexArg<'_>) -> PyResult<BigInt> {
    dyson_constant_term(&a.resolve()?, &SizeGuard::dyson()).map_err(to_py)
}

#[pyfunction]
fn eval_theta(a: IndexArg<'_>, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    ThetaMap::new(&a.resolve()?).eval(&z).map_err(to_py)
}

/// Numeric `J_a`; `[i][j]` is `∂θ_j/∂z_i`.
#[pyfunction]
fn eval_jacobian(a: IndexArg<'_>, z: Vec<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(ThetaMap::new(&a.resolve()?)
        .jacobian(&z)
        .map_err(to_py)?
        .rows())
}

#[pyfunction]
fn closed_form_det(a: IndexArg<'_>, z: Vec<Complex64>) -> PyResult<Complex64> {
    ThetaMap::new(&a.resolve()?)
        .closed_form_det(&z)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (z, tol = stratify::COINCIDENCE_TOL))]
fn part_of(z: Vec<Complex64>, tol: f64) -> PyResult<PySetPartition> {
    Ok(PySetPartition {
        inner: stratify::part_of(&point(z)?, tol),
    })
}

#[pyfunction]
#[pyo3(signature = (partition, z, tol = stratify::COINCIDENCE_TOL))]
fn theta_lambda(
    partition: &PySetPartition,
    z: Vec<Complex64>,
    tol: f64,
) -> PyResult<Vec<Complex64>> {
    Ok(stratify::theta_lambda(&partition.inner, &point(z)?, tol)
        .map_err(to_py)?
        .into_coords())
}

#[pyfunction]
fn certify<'py>(
    py: Python<'py>,
    partition: &PySetPartition,
    z: Vec<Complex64>,
) -> PyResult<Bound<'py, PyDict>> {
    let c = stratify::certify_local_homeo(&partition.inner, &point(z)?, &CertifyOptions::default())
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("certified", c.certified)?;
    d.set_item("det", c.det)?;
    d.set_item("jacobian_det", c.jacobian_det)?;
    d.set_item("condition_estimate", c.condition_estimate)?;
    Ok(d)
}

/// Lift a target path (list of points) starting at `z0`.
#[pyfunction]
#[pyo3(signature = (partition, z0, target, residual_tol = LiftOptions::default().residual_tol))]
fn lift_path(
    partition: &PySetPartition,
    z0: Vec<Complex64>,
    target: Vec<Vec<Complex64>>,
    residual_tol: f64,
) -> PyResult<Vec<Vec<Complex64>>> {
    let target =
        ComplexPath::new(target.into_iter().map(point).collect::<PyResult<_>>()?).map_err(to_py)?;
    let opts = LiftOptions {
        residual_tol,
        ..LiftOptions::default()
    };
    let path = stratify::lift_path(&partition.inner, &point(z0)?, &target, &opts).map_err(to_py)?;
    Ok(path.samples().iter().map(|p| p.coords().to_vec()).collect())
}

/// Run every exact check for all compositions with `n <= n_max`,
/// `m <= m_max`; returns one dict per instance in enumeration order.
#[pyfunction]
fn sweep<'py>(py: Python<'py>, n_max: u32, m_max: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let guard = SizeGuard::new(m_max, n_max);
    sweep_range(n_max, m_max)
        .iter()
        .map(|a| {
            let r = sweep_instance(a, &guard).map_err(to_py)?;
            let d = PyDict::new(py);
            d.set_item("a", r.a.parts().to_vec())?;
            d.set_item("passed", r.passed())?;
            d.set_item("first_failure", r.first_failure())?;
            d.set_item("wall_time_ms", r.wall_time_ms)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn critval(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMultiIndex>()?;
    m.add_class::<PySetPartition>()?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(p_a, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(factored, m)?)?;
    m.add_function(wrap_pyfunction!(dyson, m)?)?;
    m.add_function(wrap_pyfunction!(eval_theta, m)?)?;
    m.add_function(wrap_pyfunction!(eval_jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_det, m)?)?;
    m.add_function(wrap_pyfunction!(part_of, m)?)?;
    m.add_function(wrap_pyfunction!(theta_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(lift_path, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
