//! Python bindings: fields, problems, point and spectral solvers, the kernel
//! checks and the configuration harness.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

use wavecauchy::geometry::{self, Dimension, GeomConstants, Profile};
use wavecauchy::harness::{self, Command, DataSpec, RunConfig};
use wavecauchy::kernel::{self, BallRoute, KernelQuery, BASE_POINTS};
use wavecauchy::solvers::{self, io};
use wavecauchy::WaveError;

create_exception!(wavecauchy, WaveCauchyError, PyException);

fn to_py(e: WaveError) -> PyErr {
    WaveCauchyError::new_err(e.to_string())
}

fn dim(n: usize) -> PyResult<Dimension> {
    Dimension::new(n).map_err(to_py)
}

#[pyclass(name = "ScalarField", module = "wavecauchy", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyScalarField {
    inner: solvers::ScalarField,
    spec: String,
}

#[pymethods]
impl PyScalarField {
    /// Built-in field from a spec such as `gaussian(0.5)` or `harmonic(saddle)`.
    #[staticmethod]
    fn parse(n: usize, spec: &str) -> PyResult<Self> {
        let data = DataSpec::parse(spec).map_err(PyValueError::new_err)?;
        Ok(PyScalarField {
            inner: data.build(dim(n)?).map_err(to_py)?,
            spec: data.to_string(),
        })
    }

    #[staticmethod]
    fn zero(n: usize) -> PyResult<Self> {
        Self::parse(n, "zero")
    }

    #[staticmethod]
    fn constant(n: usize, c: f64) -> PyResult<Self> {
        Self::parse(n, &DataSpec::Constant(c).to_string())
    }

    #[staticmethod]
    #[pyo3(signature = (n, sigma, center = None))]
    fn gaussian(n: usize, sigma: f64, center: Option<Vec<f64>>) -> PyResult<Self> {
        Self::parse(n, &DataSpec::Gaussian { sigma, center }.to_string())
    }

    #[staticmethod]
    #[pyo3(signature = (n, radius, center = None))]
    fn bump(n: usize, radius: f64, center: Option<Vec<f64>>) -> PyResult<Self> {
        Self::parse(n, &DataSpec::Bump { radius, center }.to_string())
    }

    #[staticmethod]
    fn harmonic(n: usize, name: &str) -> PyResult<Self> {
        Self::parse(n, &format!("harmonic({name})"))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim.n()
    }

    #[getter]
    fn support_radius(&self) -> Option<f64> {
        self.inner.support_radius()
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.dim.n() {
            return Err(PyValueError::new_err(format!("expected {} components", self.inner.dim.n())));
        }
        Ok(self.inner.eval(&x))
    }

    fn __repr__(&self) -> String {
        format!("ScalarField({}, n={})", self.spec, self.inner.dim.n())
    }
}

#[pyclass(name = "SolutionSample", module = "wavecauchy", frozen, get_all)]
struct PySolutionSample {
    x: Vec<f64>,
    t: f64,
    u: f64,
    method: String,
    error_estimate: f64,
}

impl From<solvers::SolutionSample> for PySolutionSample {
    fn from(s: solvers::SolutionSample) -> Self {
        PySolutionSample {
            x: s.x,
            t: s.t,
            u: s.u,
            method: s.method.name().to_string(),
            error_estimate: s.error_estimate,
        }
    }
}

#[pymethods]
impl PySolutionSample {
    fn __repr__(&self) -> String {
        format!(
            "SolutionSample(x={:?}, t={}, u={}, method={}, error_estimate={:e})",
            self.x, self.t, self.u, self.method, self.error_estimate
        )
    }
}

#[pyclass(name = "CauchyProblem", module = "wavecauchy", frozen)]
struct PyCauchyProblem {
    inner: solvers::CauchyProblem,
}

#[pymethods]
impl PyCauchyProblem {
    #[new]
    fn new(phi: &PyScalarField, psi: &PyScalarField) -> PyResult<Self> {
        Ok(PyCauchyProblem {
            inner: solvers::CauchyProblem::new(phi.inner.clone(), psi.inner.clone()).map_err(to_py)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim.n()
    }

    /// Point solve with the method the dimension calls for.
    fn solve(&self, py: Python<'_>, x: Vec<f64>, t: f64) -> PyResult<PySolutionSample> {
        let solver = solvers::PointSolver::new(self.inner.clone()).map_err(to_py)?;
        py.detach(|| solver.solve(&x, t)).map(Into::into).map_err(to_py)
    }

    /// Many points at one time, sharing the quadrature.
    fn solve_many(&self, py: Python<'_>, points: Vec<Vec<f64>>, t: f64) -> PyResult<Vec<PySolutionSample>> {
        let solver = solvers::PointSolver::new(self.inner.clone()).map_err(to_py)?;
        let samples = py.detach(|| points.iter().map(|x| solver.solve(x, t)).collect::<wavecauchy::Result<Vec<_>>>());
        Ok(samples.map_err(to_py)?.into_iter().map(Into::into).collect())
    }

    #[getter]
    fn method(&self) -> String {
        solvers::Method::for_dim(self.inner.dim).name().to_string()
    }
}

#[pyclass(name = "PeriodicGrid", module = "wavecauchy", frozen)]
struct PyPeriodicGrid {
    inner: solvers::PeriodicGrid,
}

#[pymethods]
impl PyPeriodicGrid {
    #[new]
    fn new(n: usize, points: usize, half_width: f64) -> PyResult<Self> {
        Ok(PyPeriodicGrid {
            inner: solvers::PeriodicGrid::new(dim(n)?, points, half_width).map_err(to_py)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn point(&self, index: usize) -> PyResult<Vec<f64>> {
        if index >= self.inner.len() {
            return Err(PyValueError::new_err("grid index out of range"));
        }
        Ok(self.inner.point(index))
    }

    /// Coordinates of the node nearest to `x`.
    fn snap(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.inner.point(self.inner.nearest(&x).map_err(to_py)?))
    }
}

#[pyclass(name = "SolutionGrid", module = "wavecauchy", frozen)]
struct PySolutionGrid {
    inner: solvers::SolutionGrid,
}

#[pymethods]
impl PySolutionGrid {
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values.clone()
    }

    #[getter]
    fn error_estimate(&self) -> f64 {
        self.inner.error_estimate
    }

    /// Value at the node nearest to `x`.
    fn at(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.at(&x).map_err(to_py)
    }

    /// Raw binary layout (`WAVE` header, little-endian floats).
    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        let file = std::fs::File::create(&path).map_err(|e| to_py(e.into()))?;
        io::write_grid_binary(std::io::BufWriter::new(file), &self.inner).map_err(to_py)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let file = std::fs::File::open(&path).map_err(|e| to_py(e.into()))?;
        Ok(PySolutionGrid {
            inner: io::read_grid_binary(std::io::BufReader::new(file)).map_err(to_py)?,
        })
    }
}

#[pyclass(name = "SpectralState", module = "wavecauchy", frozen)]
struct PySpectralState {
    inner: solvers::SpectralState,
}

#[pymethods]
impl PySpectralState {
    #[new]
    fn new(problem: &PyCauchyProblem, grid: &PyPeriodicGrid) -> PyResult<Self> {
        Ok(PySpectralState {
            inner: solvers::SpectralState::new(&problem.inner, grid.inner.clone()).map_err(to_py)?,
        })
    }

    fn energy(&self, t: f64) -> f64 {
        self.inner.energy(t)
    }

    fn hermitian_defect(&self) -> f64 {
        self.inner.hermitian_defect()
    }
}

#[pyfunction]
fn spectral_solve(py: Python<'_>, problem: &PyCauchyProblem, grid: &PyPeriodicGrid, t: f64) -> PyResult<PySolutionGrid> {
    let inner = py
        .detach(|| solvers::spectral_solve(&problem.inner, &grid.inner, t))
        .map_err(to_py)?;
    Ok(PySolutionGrid { inner })
}

#[pyfunction]
fn unit_sphere_area(n: usize) -> PyResult<f64> {
    geometry::unit_sphere_area(n).map_err(to_py)
}

#[pyfunction]
fn unit_ball_volume(n: usize) -> PyResult<f64> {
    geometry::unit_ball_volume(n).map_err(to_py)
}

fn profile(name: &str) -> PyResult<Profile> {
    Profile::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown profile `{name}`; use one, s2 or cos")))
}

/// `∫_{B(0,R)} f(x_n) dx` for a named profile `f`.
#[pyfunction]
fn reduce_ball_integral(name: &str, radius: f64, n: usize) -> PyResult<f64> {
    let p = profile(name)?;
    geometry::reduce_ball_integral(|s| p.eval(s), radius, n).map_err(to_py)
}

/// `∫_{∂B(0,R)} f(x_n) dσ` for a named profile `f`.
#[pyfunction]
fn reduce_sphere_integral(name: &str, radius: f64, n: usize) -> PyResult<f64> {
    let p = profile(name)?;
    geometry::reduce_sphere_integral(|s| p.eval(s), radius, n).map_err(to_py)
}

/// `c_n` for odd `n`, `d_n` for even `n`.
#[pyfunction]
fn kernel_constant(n: usize) -> PyResult<f64> {
    GeomConstants::new(dim(n)?).kernel_constant().map_err(to_py)
}

#[pyfunction]
fn normalized_kernel_constant(n: usize) -> PyResult<f64> {
    kernel::normalized_kernel_constant(dim(n)?).map_err(to_py)
}

#[pyfunction]
fn sinc_kernel(xi: Vec<f64>, radius: f64) -> f64 {
    kernel::sinc_kernel(&xi, radius)
}

#[pyfunction]
fn sphere_exponential_average<'py>(py: Python<'py>, xi: Vec<f64>, radius: f64) -> PyResult<Bound<'py, PyComplex>> {
    let q = KernelQuery::new(xi, radius).map_err(to_py)?;
    let v = kernel::sphere_exponential_average(&q).map_err(to_py)?;
    Ok(PyComplex::from_doubles(py, v.re, v.im))
}

#[pyfunction]
#[pyo3(signature = (xi, radius, route = "descent"))]
fn ball_weighted_exponential_average<'py>(
    py: Python<'py>,
    xi: Vec<f64>,
    radius: f64,
    route: &str,
) -> PyResult<Bound<'py, PyComplex>> {
    let route = match route {
        "descent" => BallRoute::Descent,
        "direct" => BallRoute::Direct,
        other => return Err(PyValueError::new_err(format!("unknown route `{other}`"))),
    };
    let q = KernelQuery::new(xi, radius).map_err(to_py)?;
    let v = kernel::ball_weighted_exponential_average_via(&q, route, BASE_POINTS).map_err(to_py)?;
    Ok(PyComplex::from_doubles(py, v.re, v.im))
}

/// Residual of the parity-matched kernel identity at `(ξ, R)`.
#[pyfunction]
fn verify_identity<'py>(py: Python<'py>, xi: Vec<f64>, radius: f64) -> PyResult<Bound<'py, PyDict>> {
    let q = KernelQuery::new(xi, radius).map_err(to_py)?;
    let r = kernel::verify_identity(&q).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("radius", r.radius)?;
    d.set_item("xi_norm", r.xi_norm)?;
    d.set_item("lhs", r.lhs)?;
    d.set_item("rhs", PyComplex::from_doubles(py, r.rhs.re, r.rhs.im))?;
    d.set_item("residual_real", r.residual_real)?;
    d.set_item("residual_imag", r.residual_imag)?;
    d.set_item("h", r.h)?;
    d.set_item("ill_conditioned", r.ill_conditioned)?;
    Ok(d)
}

#[pyclass(name = "Report", module = "wavecauchy", frozen)]
struct PyReport {
    inner: harness::Report,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn all_passed(&self) -> bool {
        self.inner.all_passed()
    }

    #[getter]
    fn csv(&self) -> String {
        self.inner.to_csv_string()
    }

    #[getter]
    fn columns(&self) -> Vec<String> {
        self.inner
            .columns
            .iter()
            .cloned()
            .chain(harness::CHECK_COLUMNS.iter().map(|c| c.to_string()))
            .collect()
    }

    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = self.inner.summary();
        let d = PyDict::new(py);
        d.set_item("cases", s.cases)?;
        d.set_item("passed", s.passed)?;
        d.set_item("failed", s.failed)?;
        d.set_item("max_residual", s.max_residual)?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }
}

/// Run a configuration given as text; `command` may replace `[run] command`.
#[pyfunction]
#[pyo3(signature = (text, command = None))]
fn run_config(py: Python<'_>, text: &str, command: Option<&str>) -> PyResult<PyReport> {
    let cfg = match command {
        Some(c) => {
            let c = Command::parse(c).ok_or_else(|| PyValueError::new_err(format!("unknown command `{c}`")))?;
            RunConfig::parse_for(text, c)
        }
        None => RunConfig::parse(text),
    }
    .map_err(to_py)?;
    let inner = py.detach(|| harness::run(&cfg)).map_err(to_py)?;
    Ok(PyReport { inner })
}

#[pymodule]
#[pyo3(name = "wavecauchy")]
fn wavecauchy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WaveCauchyError", m.py().get_type::<WaveCauchyError>())?;
    m.add_class::<PyScalarField>()?;
    m.add_class::<PyCauchyProblem>()?;
    m.add_class::<PySolutionSample>()?;
    m.add_class::<PyPeriodicGrid>()?;
    m.add_class::<PySolutionGrid>()?;
    m.add_class::<PySpectralState>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(spectral_solve, m)?)?;
    m.add_function(wrap_pyfunction!(unit_sphere_area, m)?)?;
    m.add_function(wrap_pyfunction!(unit_ball_volume, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_ball_integral, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_sphere_integral, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_constant, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_kernel_constant, m)?)?;
    m.add_function(wrap_pyfunction!(sinc_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_exponential_average, m)?)?;
    m.add_function(wrap_pyfunction!(ball_weighted_exponential_average, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
