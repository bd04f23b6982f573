//! Python bindings for the `qrde` model crate.
//!
//! `Dilemma` wraps a validated `(d_g, d_r)` point and exposes the model
//! operations as methods. Results come back as plain dicts, tuples and
//! floats. Invalid input raises `ValueError`. Angles are in radians unless
//! `degrees=True`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

use model::*;

fn value_error(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn angle(gamma: f64, degrees: bool) -> PyResult<EntanglementAngle> {
    if degrees {
        EntanglementAngle::from_degrees(gamma)
    } else {
        EntanglementAngle::new(gamma)
    }
    .map_err(value_error)
}

fn strategy(t: f64) -> PyResult<QuantumStrategyParam> {
    QuantumStrategyParam::new(t).map_err(value_error)
}

fn cell_name(matrix: &PayoffMatrix2x2, row: Action, col: Action) -> String {
    format!("{}{}", matrix.label(row), matrix.label(col))
}

fn kind_label(kind: EquilibriumKind) -> &'static str {
    match kind {
        EquilibriumKind::Pure => "pure",
        EquilibriumKind::Mixed => "mixed",
    }
}

/// `{"kind", "cell", "p", "q", "payoff_a", "payoff_b"}`; `cell` is None when mixed.
fn profile_dict<'py>(
    py: Python<'py>,
    matrix: &PayoffMatrix2x2,
    kind: EquilibriumKind,
    cell: Option<(Action, Action)>,
    profile: StrategyProfile,
    payoffs: Payoffs,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", kind_label(kind))?;
    d.set_item("cell", cell.map(|(r, c)| cell_name(matrix, r, c)))?;
    d.set_item("p", profile.p())?;
    d.set_item("q", profile.q())?;
    d.set_item("payoff_a", payoffs.a)?;
    d.set_item("payoff_b", payoffs.b)?;
    Ok(d)
}

fn records<'py>(
    py: Python<'py>,
    matrix: &PayoffMatrix2x2,
    list: &[NashEquilibriumRecord],
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    list.iter()
        .map(|r| profile_dict(py, matrix, r.kind, r.cell(), r.profile, r.payoffs))
        .collect()
}

/// A point of the dilemma family, with `d_g` and `d_r` in `[-1, 1]`.
#[pyclass(frozen, module = "qrde")]
struct Dilemma {
    params: DilemmaParams,
}

#[pymethods]
impl Dilemma {
    #[new]
    fn new(d_g: f64, d_r: f64) -> PyResult<Self> {
        Ok(Self {
            params: DilemmaParams::new(d_g, d_r).map_err(value_error)?,
        })
    }

    #[getter]
    fn d_g(&self) -> f64 {
        self.params.d_g()
    }

    #[getter]
    fn d_r(&self) -> f64 {
        self.params.d_r()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dilemma(d_g={}, d_r={})",
            self.params.d_g(),
            self.params.d_r()
        )
    }

    /// `(class, boundary)` with class one of PD, CH, SH, TRIVIAL.
    fn classify(&self) -> (&'static str, bool) {
        let c = classify_dilemma(self.params);
        (c.kind.code(), c.boundary)
    }

    /// Row-player and column-player payoffs as two 2x2 nested lists over (C, D).
    fn matrix(&self) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
        let m = build_dilemma_matrix(self.params);
        let e = m.entries();
        (
            [[e[0][0].0, e[0][1].0], [e[1][0].0, e[1][1].0]],
            [[e[0][0].1, e[0][1].1], [e[1][0].1, e[1][1].1]],
        )
    }

    /// Pure Nash equilibria of the classical game.
    fn pure_ne<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let m = build_dilemma_matrix(self.params);
        records(py, &m, &enumerate_pure_ne(&m))
    }

    /// Expected payoffs when the players cooperate with probabilities `p`, `q`.
    fn expected_payoff(&self, p: f64, q: f64) -> PyResult<(f64, f64)> {
        let profile = StrategyProfile::new(p, q).map_err(value_error)?;
        let pay = expected_payoff_classical(self.params, profile);
        Ok((pay.a, pay.b))
    }

    /// Whether `(p, q)` is a Nash equilibrium of the classical game.
    fn is_ne(&self, p: f64, q: f64) -> PyResult<bool> {
        let profile = StrategyProfile::new(p, q).map_err(value_error)?;
        Ok(verify_mixed_ne_default(self.params, profile))
    }

    /// Phase thresholds `(gamma1, gamma2, gamma_star)`; None where undefined.
    fn thresholds(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        let t = thresholds(self.params);
        (t.gamma1, t.gamma2, t.gamma_star)
    }

    /// Expected payoffs of `U(p) ⊗ U(q)` at angle `gamma`.
    #[pyo3(signature = (p, q, gamma, degrees = false))]
    fn quantum_payoff(&self, p: f64, q: f64, gamma: f64, degrees: bool) -> PyResult<(f64, f64)> {
        let pay = expected_payoff_quantum(
            self.params,
            strategy(p)?,
            strategy(q)?,
            angle(gamma, degrees)?,
        );
        Ok((pay.a, pay.b))
    }

    /// Off-diagonal payoffs `(pi_q, pi_d)` of the pure quantum game.
    #[pyo3(signature = (gamma, degrees = false))]
    fn quantum_matrix(&self, gamma: f64, degrees: bool) -> PyResult<(f64, f64)> {
        let m = pure_quantum_matrix(self.params, angle(gamma, degrees)?);
        Ok((m.pi_q, m.pi_d))
    }

    /// `{"phase", "equilibria"}` for the pure quantum game.
    #[pyo3(signature = (gamma, degrees = false))]
    fn quantum_ne<'py>(
        &self,
        py: Python<'py>,
        gamma: f64,
        degrees: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let y = angle(gamma, degrees)?;
        let report = classify_quantum_ne(self.params, y).map_err(value_error)?;
        let m = pure_quantum_matrix(self.params, y).matrix;
        let d = PyDict::new(py);
        d.set_item("phase", report.phase.label())?;
        d.set_item("equilibria", records(py, &m, &report.equilibria)?)?;
        Ok(d)
    }

    /// Risk-dominant selection; classical without `gamma`, quantum with it.
    #[pyo3(signature = (gamma = None, degrees = false))]
    fn rde<'py>(
        &self,
        py: Python<'py>,
        gamma: Option<f64>,
        degrees: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let (outcome, matrix) = match gamma {
            None => (
                rde_classical(self.params).map_err(value_error)?,
                build_dilemma_matrix(self.params),
            ),
            Some(g) => {
                let y = angle(g, degrees)?;
                (
                    rde_quantum(self.params, y).map_err(value_error)?,
                    pure_quantum_matrix(self.params, y).matrix,
                )
            }
        };
        profile_dict(
            py,
            &matrix,
            outcome.kind,
            outcome.cell(),
            outcome.profile,
            outcome.payoffs,
        )
    }

    /// Sensitivity of the transitional selection `p*`.
    #[pyo3(signature = (gamma, degrees = false))]
    fn sensitivity<'py>(
        &self,
        py: Python<'py>,
        gamma: f64,
        degrees: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let s = sensitivity_indices(self.params, angle(gamma, degrees)?).map_err(value_error)?;
        let c = sensitivity_critical_angles(self.params).map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("p_star", s.p_star)?;
        d.set_item("dp_ddg", s.partials.d_g)?;
        d.set_item("dp_ddr", s.partials.d_r)?;
        d.set_item("dp_dgamma", s.partials.gamma)?;
        d.set_item("s_dg", s.index_dg)?;
        d.set_item("s_dr", s.index_dr)?;
        d.set_item("s_gamma", s.index_gamma)?;
        d.set_item("semi_elasticity_gamma", s.semi_elasticity_gamma)?;
        d.set_item("gamma_g", c.gamma_g)?;
        d.set_item("gamma_r", c.gamma_r)?;
        Ok(d)
    }
}

/// Closed-form outcome probabilities over (CC, CD, DC, DD).
#[pyfunction]
#[pyo3(name = "joint_distribution", signature = (p, q, gamma, degrees = false))]
fn py_joint_distribution(p: f64, q: f64, gamma: f64, degrees: bool) -> PyResult<[f64; 4]> {
    Ok(joint_distribution(strategy(p)?, strategy(q)?, angle(gamma, degrees)?).as_array())
}

/// Final state amplitudes over (CC, CD, DC, DD) from the state-vector simulation.
#[pyfunction]
#[pyo3(name = "final_state", signature = (p, q, gamma, degrees = false))]
fn py_final_state<'py>(
    py: Python<'py>,
    p: f64,
    q: f64,
    gamma: f64,
    degrees: bool,
) -> PyResult<Vec<Bound<'py, PyComplex>>> {
    let state = final_state(strategy(p)?, strategy(q)?, angle(gamma, degrees)?);
    Ok(state
        .amplitudes()
        .iter()
        .map(|a| PyComplex::from_doubles(py, a.re, a.im))
        .collect())
}

#[pymodule]
fn qrde(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dilemma>()?;
    m.add_function(wrap_pyfunction!(py_joint_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(py_final_state, m)?)?;
    Ok(())
}
