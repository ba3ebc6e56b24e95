//! Python bindings for `framesplit`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use framesplit::gen::{self, GenConfig};
use framesplit::inequalities::{self, IdentityReport, LambdaFamily};
use framesplit::linalg::PSD_TOLERANCE;
use framesplit::splitting::{self, LemmaOutcome};
use framesplit::{
    CVector, ComplexMatrix, Frame, HermitianOperator, IndexSubset, MarginReport, QuadraticCertificate, SplitPair, C64,
};

fn err(e: framesplit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(name: &str) -> PyResult<LambdaFamily> {
    match name {
        "complement_quadratic" | "t22" => Ok(LambdaFamily::ComplementQuadratic),
        "defect" | "t27" => Ok(LambdaFamily::Defect),
        "quadratic_sum" | "t210" => Ok(LambdaFamily::QuadraticSum),
        _ => Err(PyValueError::new_err(format!(
            "unknown family {name:?}; expected complement_quadratic, defect or quadratic_sum"
        ))),
    }
}

fn matrix(rows: Vec<Vec<C64>>) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("matrix rows must have equal length"));
    }
    let flat: Vec<C64> = rows.into_iter().flatten().collect();
    ComplexMatrix::from_row_major(r, c, &flat).map_err(err)
}

fn hermitian(rows: Vec<Vec<C64>>) -> PyResult<HermitianOperator> {
    HermitianOperator::new(matrix(rows)?).map_err(err)
}

fn vector(v: Vec<C64>) -> CVector {
    CVector::from_vec(v)
}

fn subset(fr: &Frame, members: Vec<usize>) -> PyResult<IndexSubset> {
    IndexSubset::new(fr.count(), members).map_err(err)
}

fn report<'py>(py: Python<'py>, r: &MarginReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("relation", r.relation.as_str())?;
    d.set_item("margin", r.margin)?;
    d.set_item("scale", r.scale)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("passed", r.passed)?;
    d.set_item("lambda", r.lambda)?;
    Ok(d)
}

fn outcome<'py>(py: Python<'py>, o: &LemmaOutcome) -> PyResult<Bound<'py, PyDict>> {
    match o {
        LemmaOutcome::Checked(r) => {
            let d = report(py, r)?;
            d.set_item("outcome", if r.passed { "passed" } else { "failed" })?;
            Ok(d)
        }
        LemmaOutcome::Inapplicable {
            relation,
            certificate_min,
            ..
        } => {
            let d = PyDict::new(py);
            d.set_item("relation", relation.as_str())?;
            d.set_item("margin", py.None())?;
            d.set_item("passed", false)?;
            d.set_item("outcome", "inapplicable")?;
            d.set_item("certificate_min", *certificate_min)?;
            Ok(d)
        }
    }
}

fn identity<'py>(py: Python<'py>, r: &IdentityReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("left", r.left)?;
    d.set_item("right", r.right)?;
    d.set_item("bound", r.bound)?;
    let reports = r
        .reports()
        .iter()
        .map(|x| report(py, x))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("reports", reports)?;
    d.set_item("passed", r.all_passed())?;
    Ok(d)
}

#[pyclass(name = "Frame", module = "framesplit", frozen)]
struct PyFrame {
    inner: Frame,
}

#[pymethods]
impl PyFrame {
    /// Frame from a list of vectors (complex or real entries).
    #[new]
    #[pyo3(signature = (vectors, label=None))]
    fn new(vectors: Vec<Vec<C64>>, label: Option<String>) -> PyResult<Self> {
        Ok(Self {
            inner: Frame::new(&vectors, label).map_err(err)?,
        })
    }

    /// One of `onb2`, `double_onb2`, `mb3`, `weighted_onb`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: gen::named_frame(name).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (dim, count, seed, condition_cap=gen::DEFAULT_CONDITION_CAP))]
    fn random(dim: usize, count: usize, seed: u64, condition_cap: f64) -> PyResult<Self> {
        let cfg = GenConfig::with_condition_cap(dim, count, seed, condition_cap).map_err(err)?;
        Ok(Self {
            inner: gen::random_frame(&cfg).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: Frame::from_json_str(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn count(&self) -> usize {
        self.inner.count()
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.inner.label().map(str::to_string)
    }

    fn vectors(&self) -> Vec<Vec<C64>> {
        self.inner.vectors()
    }

    /// `(A, B)`, the extreme eigenvalues of the frame operator.
    fn bounds(&self) -> (f64, f64) {
        let b = self.inner.frame_bounds();
        (b.lower, b.upper)
    }

    fn parseval_deviation(&self) -> PyResult<f64> {
        self.inner.parseval_deviation().map_err(err)
    }

    fn to_parseval(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.to_parseval().map_err(err)?,
        })
    }

    fn canonical_dual(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.canonical_dual().map_err(err)?.dual,
        })
    }

    /// Coefficients `⟨f, fᵢ⟩`.
    fn analysis(&self, f: Vec<C64>) -> PyResult<Vec<C64>> {
        Ok(self
            .inner
            .analysis_coefficients(&vector(f))
            .map_err(err)?
            .iter()
            .copied()
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Frame(label={:?}, dim={}, count={})",
            self.inner.label().unwrap_or("-"),
            self.inner.dim(),
            self.inner.count()
        )
    }
}

#[pyclass(name = "SplitPair", module = "framesplit", frozen)]
struct PySplitPair {
    inner: SplitPair,
}

#[pymethods]
impl PySplitPair {
    /// `S = S₁ + S₂` from three Hermitian matrices given as row lists.
    #[new]
    fn new(total: Vec<Vec<C64>>, part1: Vec<Vec<C64>>, part2: Vec<Vec<C64>>) -> PyResult<Self> {
        Ok(Self {
            inner: SplitPair::new(hermitian(total)?, hermitian(part1)?, hermitian(part2)?).map_err(err)?,
        })
    }

    /// `S = S_J + S_{J^c}` for a frame and the members of `J`.
    #[staticmethod]
    fn from_subset(frame: &PyFrame, members: Vec<usize>) -> PyResult<Self> {
        let j = subset(&frame.inner, members)?;
        Ok(Self {
            inner: splitting::split_from_subset(&frame.inner, &j).map_err(err)?,
        })
    }

    #[staticmethod]
    fn random(dim: usize, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: gen::random_split_pair(dim, seed).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn scale(&self) -> f64 {
        self.inner.scale()
    }

    /// One part (1–7) of the splitting lemma; parts 5–7 need `p` and `q`.
    #[pyo3(signature = (part, p=None, q=None, tolerance=PSD_TOLERANCE))]
    fn check_part<'py>(
        &self,
        py: Python<'py>,
        part: u8,
        p: Option<f64>,
        q: Option<f64>,
        tolerance: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let o = splitting::check_lemma_part(&self.inner, part, p, q, tolerance).map_err(err)?;
        outcome(py, &o)
    }

    /// All reports of one λ-family.
    #[pyo3(signature = (family_name, lam, tolerance=PSD_TOLERANCE))]
    fn verify_family<'py>(
        &self,
        py: Python<'py>,
        family_name: &str,
        lam: f64,
        tolerance: f64,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let r = inequalities::verify_family(&self.inner, family(family_name)?, lam, tolerance).map_err(err)?;
        r.reports.iter().map(|x| report(py, x)).collect()
    }
}

#[pyfunction]
fn lambda_coefficients(family_name: &str, lam: f64) -> PyResult<(f64, f64)> {
    Ok(family(family_name)?.coefficients(lam))
}

/// Whether `c2·a² + c1·a + c0 ≥ 0` on `[0, 1]`.
#[pyfunction]
fn certificate_nonneg(c2: f64, c1: f64, c0: f64) -> bool {
    splitting::certificate_nonneg(&QuadraticCertificate::new(c2, c1, c0))
}

#[pyfunction]
fn scalar_breakdown<'py>(
    py: Python<'py>,
    frame: &PyFrame,
    members: Vec<usize>,
    f: Vec<C64>,
) -> PyResult<Bound<'py, PyDict>> {
    let b = inequalities::scalar_breakdown(&frame.inner, &subset(&frame.inner, members)?, &vector(f)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("sum_j", b.sum_j)?;
    d.set_item("sum_jc", b.sum_jc)?;
    d.set_item("sum_total", b.sum_total)?;
    d.set_item("dual_energy_j", b.dual_energy_j)?;
    d.set_item("dual_energy_jc", b.dual_energy_jc)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (frame, members, f, family_name, lam, tolerance=PSD_TOLERANCE))]
fn verify_scalar_family<'py>(
    py: Python<'py>,
    frame: &PyFrame,
    members: Vec<usize>,
    f: Vec<C64>,
    family_name: &str,
    lam: f64,
    tolerance: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let j = subset(&frame.inner, members)?;
    let r = inequalities::verify_scalar_family(&frame.inner, &j, &vector(f), family(family_name)?, lam, tolerance)
        .map_err(err)?;
    r.reports().iter().map(|x| report(py, x)).collect()
}

#[pyfunction]
#[pyo3(signature = (frame, members, f, tolerance=PSD_TOLERANCE))]
fn verify_parseval_identity<'py>(
    py: Python<'py>,
    frame: &PyFrame,
    members: Vec<usize>,
    f: Vec<C64>,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let j = subset(&frame.inner, members)?;
    identity(
        py,
        &inequalities::verify_parseval_identity(&frame.inner, &j, &vector(f), tolerance).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (frame, members, f, tolerance=PSD_TOLERANCE))]
fn verify_canonical_identity<'py>(
    py: Python<'py>,
    frame: &PyFrame,
    members: Vec<usize>,
    f: Vec<C64>,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let j = subset(&frame.inner, members)?;
    identity(
        py,
        &inequalities::verify_canonical_identity(&frame.inner, &j, &vector(f), tolerance).map_err(err)?,
    )
}

/// `λ_min(U*U + λ(V* + V) − λ(2 − λ)I)` for `U + V = I`.
#[pyfunction]
#[pyo3(signature = (u, v, lam, tolerance=PSD_TOLERANCE))]
fn resolution_margin<'py>(
    py: Python<'py>,
    u: Vec<Vec<C64>>,
    v: Vec<Vec<C64>>,
    lam: f64,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    report(
        py,
        &inequalities::resolution_margin(&matrix(u)?, &matrix(v)?, lam, tolerance).map_err(err)?,
    )
}

/// Dual inequality for the frame and a seeded alternate dual
/// (`perturbation = 0` gives the canonical dual).
#[pyfunction]
#[pyo3(signature = (frame, members, f, lam, seed=0, perturbation=1.0, tolerance=PSD_TOLERANCE))]
#[allow(clippy::too_many_arguments)]
fn verify_dual_inequality<'py>(
    py: Python<'py>,
    frame: &PyFrame,
    members: Vec<usize>,
    f: Vec<C64>,
    lam: f64,
    seed: u64,
    perturbation: f64,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let pair = frame.inner.random_alternate_dual(seed, perturbation).map_err(err)?;
    let j = subset(&frame.inner, members)?;
    let r = inequalities::verify_dual_inequality(&pair, &j, &vector(f), lam, tolerance).map_err(err)?;
    let d = report(py, &r.report)?;
    d.set_item("lhs", r.lhs)?;
    d.set_item("rhs", r.rhs)?;
    d.set_item("re_j", r.quantities.re_j)?;
    d.set_item("re_jc", r.quantities.re_jc)?;
    d.set_item("norm_sq_j", r.quantities.norm_sq_j)?;
    d.set_item("norm_sq_jc", r.quantities.norm_sq_jc)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (frame, weights, f, lam, seed=0, perturbation=1.0, tolerance=PSD_TOLERANCE))]
#[allow(clippy::too_many_arguments)]
fn verify_weighted_dual_inequality<'py>(
    py: Python<'py>,
    frame: &PyFrame,
    weights: Vec<C64>,
    f: Vec<C64>,
    lam: f64,
    seed: u64,
    perturbation: f64,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let pair = frame.inner.random_alternate_dual(seed, perturbation).map_err(err)?;
    let r = inequalities::verify_weighted_dual_inequality(&pair, &weights, &vector(f), lam, tolerance).map_err(err)?;
    let d = report(py, &r.report)?;
    d.set_item("lhs", r.lhs)?;
    d.set_item("rhs", r.rhs)?;
    Ok(d)
}

#[pymodule(name = "framesplit")]
fn framesplit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFrame>()?;
    m.add_class::<PySplitPair>()?;
    m.add_function(wrap_pyfunction!(lambda_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(certificate_nonneg, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_breakdown, m)?)?;
    m.add_function(wrap_pyfunction!(verify_scalar_family, m)?)?;
    m.add_function(wrap_pyfunction!(verify_parseval_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_canonical_identity, m)?)?;
    m.add_function(wrap_pyfunction!(resolution_margin, m)?)?;
    m.add_function(wrap_pyfunction!(verify_dual_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(verify_weighted_dual_inequality, m)?)?;
    m.add("PSD_TOLERANCE", PSD_TOLERANCE)?;
    Ok(())
}
