//! Python bindings: PL elements, tabular elements, witnesses, characters and the acceptance suite.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ht_core::characters::{self, Character};
use ht_core::exactnum::Rational;
use ht_core::plgroup::{self, Family, GroupDescriptor, PLMap};
use ht_core::sft::{self, Graph, TabularElement};
use ht_core::witness::{self, BaseSet, WitnessError};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn witness_error(e: WitnessError) -> PyErr {
    match e {
        WitnessError::SearchExhausted(_) | WitnessError::ClosuresIntersect(..) => PyRuntimeError::new_err(e.to_string()),
        other => value_error(other),
    }
}

fn rational(text: &str) -> PyResult<Rational> {
    text.parse().map_err(value_error)
}

fn base_set(n: u32, r: u32, interval: (String, String)) -> PyResult<BaseSet> {
    BaseSet::new(n, r, rational(&interval.0)?, rational(&interval.1)?).map_err(witness_error)
}

fn character(text: &str) -> PyResult<Character> {
    text.parse().map_err(value_error)
}

/// Element of F, F0 or G in canonical form.
#[pyclass(name = "Element", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyElement {
    inner: PLMap,
}

#[pymethods]
impl PyElement {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        PLMap::from_json(text).map(|inner| PyElement { inner }).map_err(PyValueError::new_err)
    }

    #[staticmethod]
    fn identity(n: u32, r: u32, family: &str) -> PyResult<Self> {
        let family: Family = family.parse().map_err(value_error)?;
        let d = GroupDescriptor::new(n, r, family).map_err(value_error)?;
        Ok(PyElement { inner: PLMap::identity(d) })
    }

    #[staticmethod]
    #[pyo3(signature = (n, r, family, seed=0, complexity=3))]
    fn random(n: u32, r: u32, family: &str, seed: u64, complexity: usize) -> PyResult<Self> {
        let family: Family = family.parse().map_err(value_error)?;
        let d = GroupDescriptor::new(n, r, family).map_err(value_error)?;
        plgroup::random_element(d, seed, complexity).map(|inner| PyElement { inner }).map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.descriptor().n
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.descriptor().r
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family().to_string()
    }

    /// `self ∘ other`, applying `other` first.
    fn compose(&self, other: &PyElement) -> PyResult<Self> {
        self.inner.compose(&other.inner).map(|inner| PyElement { inner }).map_err(value_error)
    }

    fn inverse(&self) -> Self {
        PyElement { inner: self.inner.inverse() }
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn __call__(&self, x: &str) -> PyResult<String> {
        Ok(self.inner.evaluate(&rational(x)?).map_err(value_error)?.to_string())
    }

    fn support(&self) -> String {
        self.inner.support().to_string()
    }

    fn fix_measure(&self) -> String {
        self.inner.fix_measure().to_string()
    }

    fn endpoint_slopes(&self) -> PyResult<(i64, i64)> {
        let v = self.inner.endpoint_slopes().map_err(value_error)?;
        Ok((v.k0, v.k1))
    }

    fn sign(&self) -> PyResult<i8> {
        plgroup::sign_invariant(&self.inner).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.inner)
    }
}

/// Full-group element of a shift of finite type.
#[pyclass(name = "Tabular", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyTabular {
    inner: TabularElement,
}

#[pymethods]
impl PyTabular {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        TabularElement::from_json(text).map(|inner| PyTabular { inner }).map_err(PyValueError::new_err)
    }

    /// Image of a PL element of `G_{n,1}` in the full group of the full n-shift.
    #[staticmethod]
    fn from_thompson(element: &PyElement) -> PyResult<Self> {
        let graph = Graph::full_shift(element.inner.descriptor().n as usize).map_err(value_error)?;
        sft::from_thompson(&element.inner, &graph).map(|inner| PyTabular { inner }).map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn compose(&self, other: &PyTabular) -> PyResult<Self> {
        self.inner.compose(&other.inner).map(|inner| PyTabular { inner }).map_err(value_error)
    }

    fn inverse(&self) -> Self {
        PyTabular { inner: self.inner.inverse() }
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn support(&self) -> String {
        self.inner.support().display(self.inner.graph())
    }

    fn to_thompson(&self) -> PyResult<PyElement> {
        sft::to_thompson(&self.inner).map(|inner| PyElement { inner }).map_err(value_error)
    }
}

/// Element of `F0_{n,r}` mapping `source` into `target`; returns the element and the branch used.
#[pyfunction]
fn map_interval(n: u32, r: u32, source: (String, String), target: (String, String)) -> PyResult<(PyElement, String)> {
    let w = witness::map_interval(&base_set(n, r, source)?, &base_set(n, r, target)?).map_err(witness_error)?;
    let branch = serde_json::to_value(w.branch).expect("branch serializes");
    Ok((PyElement { inner: w.element }, branch.as_str().unwrap_or_default().to_string()))
}

#[pyfunction]
fn cover(element: &PyElement) -> PyResult<(String, String)> {
    let u = witness::covering_neighborhood(&element.inner).map_err(witness_error)?;
    Ok((u.a().to_string(), u.b().to_string()))
}

#[pyfunction]
fn join(n: u32, r: u32, u1: (String, String), u2: (String, String)) -> PyResult<(String, String)> {
    let u = witness::join(&base_set(n, r, u1)?, &base_set(n, r, u2)?).map_err(witness_error)?;
    Ok((u.a().to_string(), u.b().to_string()))
}

/// Runs the four condition witnesses; returns whether all passed and the reports as JSON.
#[pyfunction]
#[pyo3(signature = (n, r, samples=50, seed=0))]
fn verify_base(n: u32, r: u32, samples: usize, seed: u64) -> PyResult<(bool, String)> {
    let d = GroupDescriptor::new(n, r, Family::F0).map_err(value_error)?;
    let reports = witness::verify_base(d, samples, seed);
    let json = serde_json::to_string(&reports).expect("reports serialize");
    Ok((reports.iter().all(|r| r.passed()), json))
}

/// Exact value of a character, printed in the cyclotomic basis.
#[pyfunction]
fn char_eval(chi: &str, element: &PyElement) -> PyResult<String> {
    Ok(character(chi)?.eval(&element.inner).map_err(value_error)?.to_string())
}

/// Gram matrix entries as strings and the minimum eigenvalue.
#[pyfunction]
fn gram(chi: &str, elements: Vec<PyElement>) -> PyResult<(Vec<Vec<String>>, f64)> {
    let elements: Vec<PLMap> = elements.into_iter().map(|e| e.inner).collect();
    let g = characters::gram(&character(chi)?, &elements).map_err(value_error)?;
    let entries = g.entries.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
    Ok((entries, g.verdict.min_eigenvalue))
}

#[pyfunction]
fn axioms(chi: &str, elements: Vec<PyElement>) -> PyResult<String> {
    let elements: Vec<PLMap> = elements.into_iter().map(|e| e.inner).collect();
    let report = characters::axiom_report(&character(chi)?, &elements).map_err(value_error)?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

/// `(pass, χ(gh), χ(g)χ(h))`.
#[pyfunction]
fn multiplicativity(chi: &str, g: &PyElement, h: &PyElement) -> PyResult<(bool, String, String)> {
    let check = characters::multiplicativity_check(&character(chi)?, &g.inner, &h.inner).map_err(value_error)?;
    Ok((check.pass, check.value_of_product.to_string(), check.product_of_values.to_string()))
}

/// `(id, title, pass, detail)` for each acceptance criterion.
#[pyfunction]
#[pyo3(signature = (seed=0))]
fn acceptance(seed: u64) -> Vec<(u8, String, bool, String)> {
    ht_core::suite::acceptance(seed)
        .into_iter()
        .map(|o| (o.id, o.title.to_string(), o.pass, o.detail))
        .collect()
}

#[pymodule]
fn ht_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add_class::<PyTabular>()?;
    m.add_function(wrap_pyfunction!(map_interval, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(join, m)?)?;
    m.add_function(wrap_pyfunction!(verify_base, m)?)?;
    m.add_function(wrap_pyfunction!(char_eval, m)?)?;
    m.add_function(wrap_pyfunction!(gram, m)?)?;
    m.add_function(wrap_pyfunction!(axioms, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicativity, m)?)?;
    m.add_function(wrap_pyfunction!(acceptance, m)?)?;
    Ok(())
}
