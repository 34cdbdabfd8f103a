//! Python bindings: surfaces, group elements, zeta evaluation, resonances and
//! the orbit and inclusion data behind them.

use hecke_zeta::domains::{inclusion_report, E2Variant};
use hecke_zeta::moebius::{GroupElement, SurfaceParams};
use hecke_zeta::resonances::{find_delta, locate_zeros, scan_grid, winding_number, GridFlag, Rect};
use hecke_zeta::symbolic::{BranchSystem, OrbitClass, SystemKind};
use hecke_zeta::transferop::{residue_rank, Method};
use hecke_zeta::zeta::{trace_series, zeta_euler, Which, ZetaOperator, ZetaValue};
use hecke_zeta::{Error, C64};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;

create_exception!(hecke_zeta, NumericalError, PyArithmeticError, "A numerical precondition failed.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidLambda(_) | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => NumericalError::new_err(e.to_string()),
    }
}

fn which(name: &str) -> PyResult<Which> {
    name.parse().map_err(to_py)
}

fn system(name: &str) -> PyResult<SystemKind> {
    match name {
        "P" => Ok(SystemKind::P),
        "R" => Ok(SystemKind::R),
        "I" => Ok(SystemKind::I),
        "IJ+" => Ok(SystemKind::IJPlus),
        "IJ-" => Ok(SystemKind::IJMinus),
        _ => Err(PyValueError::new_err(format!("unknown system {name:?} (use P, R, I, IJ+ or IJ-)"))),
    }
}

fn method(name: &str, tol: f64) -> PyResult<Method> {
    match name {
        "continued" | "auto" => Ok(Method::Continued),
        "direct" => Ok(Method::Direct { tol }),
        _ => Err(PyValueError::new_err(format!("unknown method {name:?} (use direct, continued or auto)"))),
    }
}

fn rect(re: (f64, f64), im: (f64, f64)) -> PyResult<Rect> {
    Rect::new(re.0, re.1, im.0, im.1).map_err(to_py)
}

fn pair(v: ZetaValue) -> (C64, f64) {
    (v.value, v.error_estimate)
}

/// Hecke triangle surface of width `lambda > 2`.
#[pyclass(name = "Surface", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PySurface(SurfaceParams);

#[pymethods]
impl PySurface {
    #[new]
    fn new(lambda_: f64) -> PyResult<Self> {
        SurfaceParams::new(lambda_).map(Self).map_err(to_py)
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda()
    }

    /// Named generator, one of S, T, J, C, tau, g1..g3, h1..h3.
    fn generator(&self, name: &str) -> PyResult<PyGroupElement> {
        let g = self.0.generators();
        let e = match name {
            "S" => g.s,
            "T" => g.t,
            "J" => g.j,
            "C" => g.c,
            "tau" => g.tau,
            "g1" => g.g1,
            "g2" => g.g2,
            "g3" => g.g3,
            "h1" => g.h1,
            "h2" => g.h2,
            "h3" => g.h3,
            _ => return Err(PyValueError::new_err(format!("unknown generator {name:?}"))),
        };
        Ok(PyGroupElement(e))
    }

    fn __repr__(&self) -> String {
        format!("Surface({})", self.0.lambda())
    }
}

/// Element of GL2(R) acting by Moebius transformations.
#[pyclass(name = "GroupElement", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyGroupElement(GroupElement);

#[pymethods]
impl PyGroupElement {
    #[new]
    fn new(a: f64, b: f64, c: f64, d: f64) -> PyResult<Self> {
        GroupElement::new(a, b, c, d).map(Self).map_err(to_py)
    }

    fn entries(&self) -> [f64; 4] {
        self.0.entries()
    }

    #[getter]
    fn trace(&self) -> f64 {
        self.0.trace()
    }

    #[getter]
    fn det_sign(&self) -> i8 {
        self.0.det_sign()
    }

    /// Squared larger eigenvalue of a hyperbolic element.
    fn norm(&self) -> PyResult<f64> {
        self.0.norm().map_err(to_py)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn apply(&self, z: C64) -> C64 {
        self.0.apply_c(z)
    }

    fn derivative(&self, z: C64) -> C64 {
        self.0.derivative(z)
    }

    /// `exp(-s Log((cz+d)^2))`.
    fn cocycle(&self, s: C64, z: C64) -> PyResult<C64> {
        self.0.cocycle_j(s, z).map_err(to_py)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    fn __pow__(&self, n: i64, _modulo: Option<i64>) -> Self {
        Self(self.0.pow(n))
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.0.entries();
        format!("GroupElement({a}, {b}, {c}, {d})")
    }
}

/// Discretised transfer operators of a surface; `Z = det(1 - L)`.
#[pyclass(name = "ZetaOperator", frozen, skip_from_py_object)]
struct PyZetaOperator(ZetaOperator);

#[pymethods]
impl PyZetaOperator {
    #[new]
    #[pyo3(signature = (lambda_, basis = 32, method = "continued", tol = 1e-12))]
    fn new(lambda_: f64, basis: usize, method: &str, tol: f64) -> PyResult<Self> {
        let m = self::method(method, tol)?;
        let p = SurfaceParams::new(lambda_).map_err(to_py)?;
        Ok(Self(ZetaOperator::new(p, basis).map_err(to_py)?.with_method(m)))
    }

    #[getter]
    fn basis(&self) -> usize {
        self.0.basis()
    }

    /// `Z(s)` at the configured basis size.
    fn z(&self, py: Python<'_>, s: C64) -> PyResult<C64> {
        py.detach(|| self.0.z(s)).map_err(to_py)
    }

    /// `(Z+(s), Z-(s))`.
    fn factors(&self, py: Python<'_>, s: C64) -> PyResult<(C64, C64)> {
        py.detach(|| self.0.factors(s)).map_err(to_py)
    }

    /// `(value, error estimate)` of `Z`, `Z+` or `Z-`.
    #[pyo3(signature = (s, which = "Z"))]
    fn eval(&self, py: Python<'_>, s: C64, which: &str) -> PyResult<(C64, f64)> {
        let w = self::which(which)?;
        py.detach(|| self.0.eval(s, w)).map(pair).map_err(to_py)
    }

    /// `(delta, lambda_max - 1, |Z(delta)|)`.
    #[pyo3(signature = (tol = 1e-10))]
    fn delta(&self, py: Python<'_>, tol: f64) -> PyResult<(f64, f64, f64)> {
        let d = py.detach(|| find_delta(&self.0, tol)).map_err(to_py)?;
        Ok((d.delta, d.eigen_residual, d.zeta_residual))
    }

    /// `(s, Z(s), flag)` on the grid covering the box, real part outermost.
    fn scan(&self, py: Python<'_>, re: (f64, f64), im: (f64, f64), step: f64) -> PyResult<Vec<(C64, C64, String)>> {
        let r = rect(re, im)?;
        let grid = py.detach(|| scan_grid(&self.0, r, step)).map_err(to_py)?;
        Ok(grid
            .into_iter()
            .map(|p| {
                let flag = match p.flag {
                    GridFlag::Ok => "ok",
                    GridFlag::NearPole => "pole",
                    GridFlag::Error => "error",
                };
                (p.s, p.z, flag.to_string())
            })
            .collect())
    }

    /// Number of zeros of `Z` inside the box.
    fn winding_number(&self, py: Python<'_>, re: (f64, f64), im: (f64, f64)) -> PyResult<i64> {
        let r = rect(re, im)?;
        py.detach(|| winding_number(&self.0, r)).map_err(to_py)
    }

    /// `(s, |Z(s)|)` for each zero inside the box.
    fn zeros(&self, py: Python<'_>, re: (f64, f64), im: (f64, f64)) -> PyResult<Vec<(C64, f64)>> {
        let r = rect(re, im)?;
        let z = py.detach(|| locate_zeros(&self.0, r)).map_err(to_py)?;
        Ok(z.into_iter().map(|z| (z.s, z.residual)).collect())
    }
}

/// Periodic orbit class of a coded system.
#[pyclass(name = "OrbitClass", frozen, get_all, skip_from_py_object)]
struct PyOrbitClass {
    word: String,
    word_length: usize,
    trace: f64,
    norm: f64,
    det_sign: i8,
    weight: i8,
    primitive: bool,
    multiplier: usize,
    periodic_point: f64,
}

impl PyOrbitClass {
    fn new(sys: &BranchSystem, c: &OrbitClass) -> Self {
        Self {
            word: sys.format_word(&c.word),
            word_length: c.word_length,
            trace: c.trace,
            norm: c.norm,
            det_sign: c.det_sign,
            weight: c.weight,
            primitive: c.primitive,
            multiplier: c.multiplier,
            periodic_point: c.periodic_point,
        }
    }
}

#[pymethods]
impl PyOrbitClass {
    fn __repr__(&self) -> String {
        format!("OrbitClass({:?}, norm={})", self.word, self.norm)
    }
}

/// Periodic classes with word length at most `max_word_len` and norm at most
/// `bound`, ordered by norm.
#[pyfunction]
#[pyo3(signature = (lambda_, system = "I", max_word_len = 12, bound = 100.0))]
fn orbit_classes(lambda_: f64, system: &str, max_word_len: usize, bound: f64) -> PyResult<Vec<PyOrbitClass>> {
    let sys = BranchSystem::build(self::system(system)?, SurfaceParams::new(lambda_).map_err(to_py)?);
    Ok(sys.periodic_classes(max_word_len, bound).iter().map(|c| PyOrbitClass::new(&sys, c)).collect())
}

/// `(norm, det sign, multiplicity)` of primitive classes up to `bound`.
#[pyfunction]
#[pyo3(signature = (lambda_, system = "I", bound = 100.0))]
fn length_spectrum(lambda_: f64, system: &str, bound: f64) -> PyResult<Vec<(f64, i8, usize)>> {
    let sys = BranchSystem::build(self::system(system)?, SurfaceParams::new(lambda_).map_err(to_py)?);
    Ok(sys.length_spectrum(bound).into_iter().map(|e| (e.norm, e.det_sign, e.multiplicity)).collect())
}

/// `(value, error estimate)` of the Euler product, `Re s > 1`.
#[pyfunction]
#[pyo3(signature = (lambda_, s, which = "Z", max_word_len = 12, k_max = 25))]
fn euler_product(py: Python<'_>, lambda_: f64, s: C64, which: &str, max_word_len: usize, k_max: usize) -> PyResult<(C64, f64)> {
    let p = SurfaceParams::new(lambda_).map_err(to_py)?;
    let w = self::which(which)?;
    py.detach(|| zeta_euler(p, s, w, max_word_len, k_max)).map(pair).map_err(to_py)
}

/// `(value, error estimate)` of `exp(-sum Tr M^n / n)`.
#[pyfunction]
#[pyo3(signature = (lambda_, s, basis = 32, n_max = 40))]
fn trace_series_value(py: Python<'_>, lambda_: f64, s: C64, basis: usize, n_max: usize) -> PyResult<(C64, f64)> {
    let p = SurfaceParams::new(lambda_).map_err(to_py)?;
    py.detach(|| trace_series(p, s, basis, n_max, 0)).map(|t| pair(t.value)).map_err(to_py)
}

/// `(condition, margin)` for every disc inclusion up to parabolic index
/// `n_max`; `variant` is working, prose or displayed.
#[pyfunction]
#[pyo3(signature = (lambda_, n_max = 50, variant = "working"))]
fn inclusions(lambda_: f64, n_max: u32, variant: &str) -> PyResult<Vec<(String, f64)>> {
    let v = match variant {
        "working" => E2Variant::Working,
        "prose" => E2Variant::Prose,
        "displayed" => E2Variant::Displayed,
        _ => return Err(PyValueError::new_err(format!("unknown variant {variant:?}"))),
    };
    let p = SurfaceParams::new(lambda_).map_err(to_py)?;
    Ok(inclusion_report(p, n_max, v).checks.into_iter().map(|c| (c.condition, c.margin)).collect())
}

/// Rank of the parabolic residues at `s0 = (1-k)/2`, per block.
#[pyfunction]
#[pyo3(signature = (lambda_, s0, basis = 24))]
fn residue_ranks(py: Python<'_>, lambda_: f64, s0: f64, basis: usize) -> PyResult<Vec<usize>> {
    let p = SurfaceParams::new(lambda_).map_err(to_py)?;
    py.detach(|| residue_rank(p, s0, basis)).map(|r| r.per_block).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "hecke_zeta")]
pub fn hecke_zeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySurface>()?;
    m.add_class::<PyGroupElement>()?;
    m.add_class::<PyZetaOperator>()?;
    m.add_class::<PyOrbitClass>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(orbit_classes, m)?)?;
    m.add_function(wrap_pyfunction!(length_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(euler_product, m)?)?;
    m.add_function(wrap_pyfunction!(trace_series_value, m)?)?;
    m.add_function(wrap_pyfunction!(inclusions, m)?)?;
    m.add_function(wrap_pyfunction!(residue_ranks, m)?)?;
    Ok(())
}
