use std::collections::HashMap;
use std::path::Path;

use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

use qand_core::circuit::Circuit as CoreCircuit;
use qand_core::codes::{self, StabilizerCode};
use qand_core::cyclo::{CycloNum, Ring};
use qand_core::error::Error;
use qand_core::protocols;
use qand_core::report;
use qand_core::sim;
use qand_core::synth::{self, AndVariant, QubitGate};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ring(dim: u32) -> PyResult<Ring> {
    Ring::for_dim(dim).map_err(err)
}

/// An exact element of the qutrit or qubit cyclotomic ring.
#[pyclass(name = "Cyclo", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyCyclo(CycloNum);

#[pymethods]
impl PyCyclo {
    #[new]
    #[pyo3(signature = (value, dim = 3))]
    fn new(value: &Bound<'_, PyAny>, dim: u32) -> PyResult<Self> {
        if let Ok(v) = value.extract::<i64>() {
            return Ok(PyCyclo(CycloNum::from_int(ring(dim)?, v)));
        }
        if let Ok(s) = value.extract::<String>() {
            return s.parse().map(PyCyclo).map_err(err);
        }
        Err(PyTypeError::new_err("expected an int or a cyclotomic literal"))
    }

    /// `ζ^k` for the ring's primitive root of unity.
    #[staticmethod]
    #[pyo3(signature = (k, dim = 3))]
    fn zeta(k: i64, dim: u32) -> PyResult<Self> {
        Ok(PyCyclo(CycloNum::zeta(ring(dim)?, k)))
    }

    #[staticmethod]
    #[pyo3(signature = (dim = 3))]
    fn inv_sqrt_dim(dim: u32) -> PyResult<Self> {
        Ok(PyCyclo(CycloNum::inv_sqrt_dim(ring(dim)?)))
    }

    fn __add__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_add(&o.0).map(PyCyclo).map_err(err)
    }

    fn __sub__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_sub(&o.0).map(PyCyclo).map_err(err)
    }

    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_mul(&o.0).map(PyCyclo).map_err(err)
    }

    fn __neg__(&self) -> Self {
        PyCyclo(-&self.0)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        PyCyclo(self.0.pow(e))
    }

    fn conj(&self) -> Self {
        PyCyclo(self.0.conj())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn in_clifford_t_ring(&self) -> bool {
        self.0.in_clifford_t_ring()
    }

    /// Nearest complex double.
    fn approx(&self) -> (f64, f64) {
        self.0.approx()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cyclo('{}')", self.0)
    }
}

#[pyclass(name = "Circuit", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCircuit(CoreCircuit);

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        CoreCircuit::parse(text).map(PyCircuit).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| err(Error::Io(format!("{path}: {e}"))))?;
        Self::parse(&text)
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.0.dim()
    }

    #[getter]
    fn n_wires(&self) -> usize {
        self.0.n_wires()
    }

    fn adjoint(&self) -> Self {
        PyCircuit(self.0.adjoint())
    }

    fn counts(&self) -> HashMap<&'static str, usize> {
        let c = self.0.counts();
        HashMap::from([
            ("T", c.t_count),
            ("R", c.r_count),
            ("CX", c.cx_count),
            ("2Q", c.two_qudit_count),
            ("raw2Q", c.raw_two_qudit_count),
            ("depth", c.depth),
            ("T-depth", c.t_depth),
        ])
    }

    /// Rows `(inputs, outputs)` of the classical action on basis inputs.
    fn truth_table(&self) -> PyResult<Vec<(Vec<u8>, Vec<u8>)>> {
        Ok(sim::truth_table(&self.0).map_err(err)?.rows)
    }

    /// Matrix entries as cyclotomic literals, row-major.
    fn unitary(&self) -> PyResult<Vec<Vec<String>>> {
        let m = sim::unitary_of(&self.0).map_err(err)?;
        Ok((0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect()).collect())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "Code", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCode(StabilizerCode);

#[pymethods]
impl PyCode {
    /// Parses code text; `base` resolves the encoder path.
    #[staticmethod]
    #[pyo3(signature = (text, base = None))]
    fn parse(text: &str, base: Option<String>) -> PyResult<Self> {
        StabilizerCode::parse(text, base.as_deref().map(Path::new)).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| err(Error::Io(format!("{path}: {e}"))))?;
        StabilizerCode::parse(&text, Path::new(path).parent()).map(PyCode).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn dim(&self) -> u8 {
        self.0.dim
    }

    fn is_valid(&self) -> bool {
        self.0.validate().is_valid()
    }

    /// `(weight, witness)` of the lightest logical up to `max_weight`, or `None`.
    fn distance(&self, py: Python<'_>, max_weight: usize) -> PyResult<Option<(usize, String)>> {
        let code = self.0.clone();
        let w = py.detach(move || code.distance(max_weight)).map_err(err)?;
        Ok(w.map(|w| (w.weight, w.operator.to_string())))
    }

    /// Whether `layer` implements `logical` on the encoder isometry up to phase.
    fn transversal(&self, layer: &PyCircuit, logical: &PyCircuit) -> PyResult<bool> {
        let u = sim::unitary_of(&logical.0).map_err(err)?;
        Ok(codes::transversal_check(&self.0, &layer.0, &u, false).map_err(err)?.holds)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyfunction]
fn concatenate(outer: &PyCode, inner: &PyCode) -> PyResult<PyCode> {
    codes::concatenate(&outer.0, &inner.0).map(PyCode).map_err(err)
}

/// Builds a named gate; `n` is the arity for the n-ary families.
#[pyfunction]
#[pyo3(signature = (gate, n = None))]
fn synthesize(gate: &str, n: Option<usize>) -> PyResult<PyCircuit> {
    let need = || n.ok_or_else(|| PyValueError::new_err(format!("`{gate}` needs n")));
    let c = match gate {
        "and" => synth::build_and(AndVariant::Eq5),
        "and-eq6" => synth::build_and(AndVariant::Eq6),
        "or" => synth::build_or(),
        "nary-and" => synth::build_nary_and(need()?),
        "qubit-plus" => synth::qubit_plus(),
        "qubit-minus" => synth::qubit_minus(),
        other => {
            let g = match other {
                "x" => QubitGate::X,
                "z" => QubitGate::Z,
                "s" => QubitGate::S,
                "cx" => QubitGate::CX,
                "cz" => QubitGate::CZ,
                "ccx" => QubitGate::CCX,
                "ccz" => QubitGate::CCZ,
                "cnx-linear" => QubitGate::CnXLinear(need()?),
                "cnx-log" => QubitGate::CnXLog(need()?),
                "cnz-linear" => QubitGate::CnZLinear(need()?),
                "cnz-log" => QubitGate::CnZLog(need()?),
                _ => return Err(PyValueError::new_err(format!("unknown gate `{other}`"))),
            };
            synth::build_qubit_gate(g).map(|s| s.circuit)
        }
    };
    c.map(PyCircuit).map_err(err)
}

/// `(passed, text)` of `table1` or `table2`.
#[pyfunction]
fn reproduce(py: Python<'_>, which: &str) -> PyResult<(bool, String)> {
    let which = which.to_string();
    let r = py
        .detach(move || match which.as_str() {
            "table1" => report::table1(),
            "table2" => report::table2(),
            other => Err(Error::Invalid(format!("unknown report `{other}`"))),
        })
        .map_err(err)?;
    Ok((r.passed(), r.text))
}

/// `(passed, certificate text)` of a named protocol verifier.
#[pyfunction]
fn verify_protocol(py: Python<'_>, name: &str) -> PyResult<(bool, String)> {
    let name = name.to_string();
    let cert = py.detach(move || protocols::run_named(&name, None)).map_err(err)?;
    Ok((cert.passed(), cert.to_string()))
}

#[pyfunction]
fn protocol_names() -> Vec<&'static str> {
    protocols::PROTOCOL_NAMES.to_vec()
}

#[pymodule]
fn qand(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCyclo>()?;
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(concatenate, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(verify_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(protocol_names, m)?)?;
    Ok(())
}
