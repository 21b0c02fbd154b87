//! Python bindings for the `dirac-qrw` crate.

use nalgebra::Matrix2;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use qrw::{DiracError, Helicity};

fn to_py(err: DiracError) -> PyErr {
    if err.is_numerical() {
        PyArithmeticError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn branch(name: &str) -> PyResult<Helicity> {
    name.parse().map_err(to_py)
}

fn matrix(m: Matrix2<Complex64>) -> Vec<Vec<Complex64>> {
    (0..2).map(|r| (0..2).map(|c| m[(r, c)]).collect()).collect()
}

/// A walk state on the lattice `x0 + m dt`.
#[pyclass(name = "LatticeState", module = "dirac_qrw", skip_from_py_object)]
#[derive(Clone)]
struct PyLatticeState {
    inner: qrw::LatticeState,
    helicity: Helicity,
}

#[pymethods]
impl PyLatticeState {
    /// Discretized Gaussian positive-energy state.
    #[staticmethod]
    #[pyo3(signature = (nu, dt, branch_name = "plus"))]
    fn gaussian(nu: f64, dt: f64, branch_name: &str) -> PyResult<Self> {
        let helicity = branch(branch_name)?;
        let profile = qrw::gaussian_profile(nu).map_err(to_py)?;
        let config = qrw::WalkInitConfig::new(nu, dt, helicity).map_err(to_py)?;
        let inner = qrw::initial_lattice_state(&profile, &config).map_err(to_py)?;
        Ok(PyLatticeState { inner, helicity })
    }

    /// Exactly evolved Gaussian state sampled on sites `first..=last`.
    #[staticmethod]
    #[pyo3(signature = (nu, dt, t, first, last, branch_name = "plus"))]
    fn exact(nu: f64, dt: f64, t: f64, first: i64, last: i64, branch_name: &str) -> PyResult<Self> {
        let helicity = branch(branch_name)?;
        let profile = qrw::gaussian_profile(nu).map_err(to_py)?;
        let inner =
            qrw::exact::exact_lattice_state(&profile, dt, 0.0, (first, last), t, helicity).map_err(to_py)?;
        Ok(PyLatticeState { inner, helicity })
    }

    /// Applies `n` coin-and-shift steps; returns the largest norm drift.
    fn evolve(&mut self, n: usize) -> PyResult<f64> {
        let report = qrw::evolve(&mut self.inner, &qrw::WalkConfig::new(n, self.helicity)).map_err(to_py)?;
        Ok(report.max_drift)
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.inner.dt()
    }

    #[getter]
    fn first_site(&self) -> i64 {
        self.inner.first_site()
    }

    #[getter]
    fn last_site(&self) -> i64 {
        self.inner.last_site()
    }

    #[getter]
    fn branch(&self) -> &'static str {
        self.helicity.name()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn norm(&self) -> f64 {
        self.inner.norm_sqr()
    }

    fn positions(&self) -> Vec<f64> {
        self.inner.sites().map(|m| self.inner.position(m)).collect()
    }

    fn distribution(&self) -> Vec<f64> {
        qrw::position_distribution(&self.inner)
    }

    fn amplitudes(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (self.inner.plus().to_vec(), self.inner.minus().to_vec())
    }

    fn moment(&self, k: u32) -> f64 {
        qrw::empirical_moment(&self.inner, k)
    }

    fn energy_leakage(&self) -> PyResult<f64> {
        qrw::energy_leakage(&self.inner, self.helicity).map_err(to_py)
    }

    /// Limit probability of `y1 <= X_n/(n dt) <= y2` from this state.
    fn limit_cdf(&self, y1: f64, y2: f64) -> PyResult<f64> {
        let g = qrw::spectral_coefficients(&self.inner, self.helicity).map_err(to_py)?;
        qrw::limit_cdf(y1, y2, &g).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "LatticeState(dt={}, sites={}..={}, branch={})",
            self.inner.dt(),
            self.inner.first_site(),
            self.inner.last_site(),
            self.helicity
        )
    }
}

/// `(l1, l2, sup)` between the normalized site distributions.
#[pyfunction]
fn compare_densities(a: &PyLatticeState, b: &PyLatticeState) -> PyResult<(f64, f64, f64)> {
    let r = qrw::compare_densities(&a.inner, &b.inner).map_err(to_py)?;
    Ok((r.l1, r.l2, r.sup))
}

#[pyfunction]
fn energy(p: f64) -> PyResult<f64> {
    qrw::energy(p).map_err(to_py)
}

#[pyfunction]
fn propagator_matrix(p: f64, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
    qrw::propagator_matrix(p, t).map(matrix).map_err(to_py)
}

#[pyfunction]
fn positive_energy_projector(p: f64) -> PyResult<Vec<Vec<Complex64>>> {
    qrw::positive_energy_projector(p).map(matrix).map_err(to_py)
}

#[pyfunction]
fn group_velocity(phi: f64, dt: f64) -> PyResult<f64> {
    qrw::group_velocity(phi, dt).map_err(to_py)
}

#[pyfunction]
fn gaussian_g_approx(phi: f64, nu: f64, dt: f64) -> PyResult<(Complex64, Complex64)> {
    qrw::gaussian_g_approx(phi, nu, dt).map_err(to_py)
}

#[pyfunction]
fn limit_density(y: f64, nu: f64) -> PyResult<f64> {
    qrw::limit_density(y, nu).map_err(to_py)
}

#[pyfunction]
fn limit_moment(k: u32, nu: f64) -> PyResult<f64> {
    qrw::limit_moment(k, nu).map_err(to_py)
}

#[pyfunction]
fn horn_location(nu: f64) -> PyResult<f64> {
    qrw::horn_location(nu).map_err(to_py)
}

#[pymodule]
fn dirac_qrw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLatticeState>()?;
    m.add_function(wrap_pyfunction!(compare_densities, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(propagator_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(positive_energy_projector, m)?)?;
    m.add_function(wrap_pyfunction!(group_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_g_approx, m)?)?;
    m.add_function(wrap_pyfunction!(limit_density, m)?)?;
    m.add_function(wrap_pyfunction!(limit_moment, m)?)?;
    m.add_function(wrap_pyfunction!(horn_location, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
