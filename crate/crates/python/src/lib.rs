//! Python bindings: model functions, the atom catalog, channel solves and
//! the table constructions.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pseudoatom::bspline::{KnotFamily, DEFAULT_R_FIRST};
use pseudoatom::model::{self, SymmetryChannel};
use pseudoatom::reference::{golden, ReferenceRecord};
use pseudoatom::spectra::{BasisConfig, LabeledState, RadialSolver};
use pseudoatom::{AtomSpec, PseudopotentialModel, UnitSystem};

fn to_py(e: pseudoatom::Error) -> PyErr {
    use pseudoatom::Error::*;
    match e {
        InvalidInput(_) | ModelDomain(_) | UnknownAtom(_) | Config(_) | DimensionMismatch(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = pseudoatom::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

/// Neutral or ionic atom: nuclear charge, electron count, valence subshell and m.
#[pyclass(name = "Atom", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyAtom {
    inner: AtomSpec,
}

#[pymethods]
impl PyAtom {
    /// Aufbau configuration for `electrons` around charge `z`; m defaults to n.
    #[new]
    #[pyo3(signature = (name, z, electrons, m=None))]
    fn new(name: String, z: u32, electrons: u32, m: Option<u32>) -> PyResult<Self> {
        let inner = AtomSpec::aufbau(name, z, electrons, m.unwrap_or(electrons)).map_err(to_py)?;
        Ok(PyAtom { inner })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }
    #[getter]
    fn z(&self) -> u32 {
        self.inner.z
    }
    #[getter]
    fn electrons(&self) -> u32 {
        self.inner.n_electrons
    }
    #[getter]
    fn m(&self) -> u32 {
        self.inner.m_permutations
    }
    #[getter]
    fn valence(&self) -> String {
        self.inner.valence_label()
    }
    #[getter]
    fn configuration(&self) -> String {
        self.inner.config_string()
    }
    fn mn_ratio(&self) -> f64 {
        self.inner.mn_ratio()
    }
    fn __repr__(&self) -> String {
        format!("Atom({}, Z={}, n={}, m={}, {})", self.inner.name, self.inner.z, self.inner.n_electrons, self.inner.m_permutations, self.inner.config_string())
    }
}

#[pyclass(name = "State", frozen)]
pub struct PyState {
    #[pyo3(get)]
    nu: u32,
    #[pyo3(get)]
    l: u32,
    #[pyo3(get)]
    raw_energy: f64,
    #[pyo3(get)]
    scaled_energy: f64,
    #[pyo3(get)]
    label: String,
}

impl From<LabeledState> for PyState {
    fn from(s: LabeledState) -> Self {
        PyState { nu: s.nu, l: s.l, raw_energy: s.raw_energy, scaled_energy: s.scaled_energy, label: s.label() }
    }
}

#[pymethods]
impl PyState {
    fn __repr__(&self) -> String {
        format!("State({}, raw={:.10}, scaled={:.10})", self.label, self.raw_energy, self.scaled_energy)
    }
}

/// B-spline radial solver. Defaults match the reference grid (600 splines,
/// order 10, r_max 200, exp-linear knots).
#[pyclass(name = "Solver", frozen)]
pub struct PySolver {
    inner: RadialSolver,
}

#[pymethods]
impl PySolver {
    #[new]
    #[pyo3(signature = (splines=600, order=10, rmax=200.0, knots="exp-linear", rfirst=DEFAULT_R_FIRST, quad_nodes=None))]
    fn new(splines: usize, order: usize, rmax: f64, knots: &str, rfirst: f64, quad_nodes: Option<usize>) -> PyResult<Self> {
        let family: KnotFamily = parse(knots)?;
        let config = BasisConfig {
            n_splines: splines,
            order,
            r_max: rmax,
            knots: family.with_r_first(rfirst),
            nodes_per_interval: quad_nodes,
        };
        Ok(PySolver { inner: RadialSolver::new(&config).map_err(to_py)? })
    }

    /// Lowest `count` states of channel l, labelled ν = l+1, l+2, ...
    #[pyo3(signature = (atom, l, count, model="symmetry"))]
    fn solve_channel(&self, py: Python<'_>, atom: &PyAtom, l: u32, count: usize, model: &str) -> PyResult<Vec<PyState>> {
        let model: PseudopotentialModel = parse(model)?;
        let states = py.detach(|| self.inner.solve_channel(&atom.inner, model, l, count)).map_err(to_py)?;
        Ok(states.into_iter().map(PyState::from).collect())
    }

    /// Ionization potential of the valence electron, eV.
    #[pyo3(signature = (atom, model="symmetry", units="paper"))]
    fn ionization_potential(&self, py: Python<'_>, atom: &PyAtom, model: &str, units: &str) -> PyResult<f64> {
        let (model, units): (PseudopotentialModel, UnitSystem) = (parse(model)?, parse(units)?);
        py.detach(|| self.inner.ionization_potential(&atom.inner, model, units)).map_err(to_py)
    }

    /// Helium ground and excited binding energies as (label, eV) pairs.
    #[pyo3(signature = (model="symmetry", units="paper"))]
    fn helium_binding_table(&self, py: Python<'_>, model: &str, units: &str) -> PyResult<Vec<(String, f64)>> {
        let (model, units): (PseudopotentialModel, UnitSystem) = (parse(model)?, parse(units)?);
        let rows = py.detach(|| self.inner.helium_binding_table(model, units)).map_err(to_py)?;
        Ok(rows.into_iter().map(|r| (r.label, r.value_ev)).collect())
    }

    /// Scaled lithium levels as (label, eV) pairs.
    #[pyo3(signature = (model="symmetry", units="paper"))]
    fn lithium_spectrum(&self, py: Python<'_>, model: &str, units: &str) -> PyResult<Vec<(String, f64)>> {
        let (model, units): (PseudopotentialModel, UnitSystem) = (parse(model)?, parse(units)?);
        let rows = py.detach(|| self.inner.lithium_spectrum(model, units)).map_err(to_py)?;
        Ok(rows.into_iter().map(|r| (r.label, r.value_ev)).collect())
    }
}

#[pyfunction]
fn partition_alpha(l: u32, electrons: u32) -> PyResult<f64> {
    model::partition_alpha(SymmetryChannel::new(l, electrons).map_err(to_py)?).map_err(to_py)
}

#[pyfunction]
fn effective_charge(z: f64, electrons: u32, l: u32) -> PyResult<f64> {
    model::effective_charge(z, electrons, l).map_err(to_py)
}

#[pyfunction]
fn hydrogenic_energy(z_eff: f64, nu: u32) -> PyResult<f64> {
    model::hydrogenic_energy(z_eff, nu).map_err(to_py)
}

#[pyfunction]
fn fhat(r: f64, z: f64) -> PyResult<f64> {
    model::fhat(r, z).map_err(to_py)
}

/// Radial potential of `model` for `atom` in channel l at radius r, hartree.
#[pyfunction]
#[pyo3(signature = (atom, r, l, model="symmetry"))]
fn potential_value(atom: &PyAtom, r: f64, l: u32, model: &str) -> PyResult<f64> {
    model::potential_value(parse(model)?, r, &atom.inner, l).map_err(to_py)
}

#[pyfunction]
fn atom_catalog() -> Vec<PyAtom> {
    model::atom_catalog().into_iter().map(|inner| PyAtom { inner }).collect()
}

#[pyfunction]
fn catalog_atom(name: &str) -> PyResult<PyAtom> {
    Ok(PyAtom { inner: model::catalog_atom(name).map_err(to_py)? })
}

/// Printed reference rows as (table, label, model_a_ev, model_b_ev, reference_ev, reference_alt_ev).
#[pyfunction]
fn reference_rows() -> Vec<(String, String, f64, f64, Option<f64>, Option<f64>)> {
    golden()
        .iter()
        .map(|r: &ReferenceRecord| (r.table.to_string(), r.label.clone(), r.present1_ev, r.present2_ev, r.reference_ev, r.reference_alt_ev))
        .collect()
}

#[pymodule]
fn pseudoatom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAtom>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PySolver>()?;
    m.add_function(wrap_pyfunction!(partition_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(effective_charge, m)?)?;
    m.add_function(wrap_pyfunction!(hydrogenic_energy, m)?)?;
    m.add_function(wrap_pyfunction!(fhat, m)?)?;
    m.add_function(wrap_pyfunction!(potential_value, m)?)?;
    m.add_function(wrap_pyfunction!(atom_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_atom, m)?)?;
    m.add_function(wrap_pyfunction!(reference_rows, m)?)?;
    m.add("EV_PER_HARTREE_PAPER", UnitSystem::PaperCompat.ev_per_hartree())?;
    m.add("EV_PER_HARTREE_CODATA", UnitSystem::Codata.ev_per_hartree())?;
    Ok(())
}
