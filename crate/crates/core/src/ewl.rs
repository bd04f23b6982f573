//! Eisert–Wilkens–Lewenstein quantization of the dilemma with the
//! one-parameter strategy family
//!
//! ```text
//! U(t) = [[ i sqrt(t),       sqrt(1 - t) ],
//!         [ -sqrt(1 - t),   -i sqrt(t)   ]],    0 <= t <= 1
//! ```
//!
//! where `U(1)` is quantum-cooperate (Q) and `U(0)` is defect (D).
//!
//! Two independent routes compute the outcome distribution. The closed forms
//! ([`joint_distribution`], [`expected_payoff_quantum`]) are used by the rest
//! of the crate. The state-vector pipeline ([`final_state`]) is the oracle the
//! closed forms are checked against. Basis order is `(CC, CD, DC, DD)`
//! everywhere, and angles are radians.

use std::f64::consts::FRAC_PI_2;
use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    check_range, Action, DilemmaParams, NashEquilibriumRecord, PayoffMatrix2x2, Payoffs,
    QUANTUM_LABELS,
};
use crate::tol;

use Action::{First as Q, Second as D};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Entanglement measure `gamma` in `[0, pi/2]`: 0 is separable, `pi/2` maximal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct EntanglementAngle(f64);

impl EntanglementAngle {
    pub const SEPARABLE: EntanglementAngle = EntanglementAngle(0.0);
    pub const MAXIMAL: EntanglementAngle = EntanglementAngle(FRAC_PI_2);

    pub fn new(gamma: f64) -> Result<Self> {
        check_range("gamma", gamma, 0.0, FRAC_PI_2)?;
        Ok(Self(gamma))
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        check_range("gamma (degrees)", degrees, 0.0, 90.0)?;
        Self::new(degrees.to_radians().min(FRAC_PI_2))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn sin_sq(self) -> f64 {
        self.0.sin().powi(2)
    }
}

/// Weight `t` on quantum-cooperate within the one-parameter family.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct QuantumStrategyParam(f64);

impl QuantumStrategyParam {
    pub const DEFECT: QuantumStrategyParam = QuantumStrategyParam(0.0);
    pub const HALF: QuantumStrategyParam = QuantumStrategyParam(0.5);
    pub const QUANTUM_COOPERATE: QuantumStrategyParam = QuantumStrategyParam(1.0);

    pub fn new(t: f64) -> Result<Self> {
        check_range("t", t, 0.0, 1.0)?;
        Ok(Self(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[Complex64; 2]; 2],
}

impl Unitary2 {
    pub fn from_entries(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn identity() -> Self {
        Self {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[j][i].conj();
            }
        }
        Self { m }
    }

    /// Largest entrywise deviation of `U U†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = *self * self.adjoint();
        max_identity_defect(prod.m.iter().map(|r| r.as_slice()))
    }

    /// Kronecker product `self ⊗ other`, with `self` acting on player A's qubit.
    pub fn kron(&self, other: &Unitary2) -> Gate4 {
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.m[r / 2][c / 2] * other.m[r % 2][c % 2];
            }
        }
        Gate4 { m }
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..2).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        Unitary2 { m }
    }
}

/// Dense two-qubit operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate4 {
    m: [[Complex64; 4]; 4],
}

impl Gate4 {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self { m }
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[j][i].conj();
            }
        }
        Self { m }
    }

    pub fn apply(&self, state: &StateVector4) -> StateVector4 {
        let mut amps = [ZERO; 4];
        for (i, out) in amps.iter_mut().enumerate() {
            *out = (0..4).map(|k| self.m[i][k] * state.amps[k]).sum();
        }
        StateVector4 { amps }
    }

    pub fn unitarity_defect(&self) -> f64 {
        let prod = *self * self.adjoint();
        max_identity_defect(prod.m.iter().map(|r| r.as_slice()))
    }

    fn linear_combination(a: Complex64, x: &Gate4, b: Complex64, y: &Gate4) -> Gate4 {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a * x.m[i][j] + b * y.m[i][j];
            }
        }
        Gate4 { m }
    }
}

impl Mul for Gate4 {
    type Output = Gate4;

    fn mul(self, rhs: Gate4) -> Gate4 {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        Gate4 { m }
    }
}

fn max_identity_defect<'a>(rows: impl Iterator<Item = &'a [Complex64]>) -> f64 {
    rows.enumerate()
        .flat_map(|(i, row)| {
            row.iter().enumerate().map(move |(j, v)| {
                let target = if i == j { ONE } else { ZERO };
                (v - target).norm()
            })
        })
        .fold(0.0, f64::max)
}

/// Amplitudes over `(|CC>, |CD>, |DC>, |DD>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector4 {
    amps: [Complex64; 4],
}

impl StateVector4 {
    pub fn new(amps: [Complex64; 4]) -> Self {
        Self { amps }
    }

    pub fn basis_cc() -> Self {
        Self {
            amps: [ONE, ZERO, ZERO, ZERO],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.amps.map(|a| a.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.probabilities().iter().sum()
    }
}

/// Choice of two-qubit operator inside the entangling gate
/// `J = cos(gamma/2) I⊗I - i sin(gamma/2) S⊗S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GateConvention {
    /// `S = sigma_y`; equals `exp(i gamma D⊗D / 2)` with `D = U(0)`.
    #[default]
    SigmaY,
    /// `S = sigma_x`. Does not reproduce the closed-form distribution; kept
    /// only as a negative control for the oracle check.
    SigmaX,
}

impl GateConvention {
    fn pauli(self) -> Unitary2 {
        match self {
            GateConvention::SigmaY => Unitary2::from_entries([[ZERO, -I], [I, ZERO]]),
            GateConvention::SigmaX => Unitary2::from_entries([[ZERO, ONE], [ONE, ZERO]]),
        }
    }
}

pub fn initial_state(gamma: EntanglementAngle) -> StateVector4 {
    let half = gamma.radians() / 2.0;
    StateVector4 {
        amps: [
            Complex64::new(half.cos(), 0.0),
            ZERO,
            ZERO,
            Complex64::new(0.0, half.sin()),
        ],
    }
}

pub fn strategy_operator(t: QuantumStrategyParam) -> Unitary2 {
    let c = t.value().sqrt();
    let s = (1.0 - t.value()).sqrt();
    Unitary2::from_entries([
        [Complex64::new(0.0, c), Complex64::new(s, 0.0)],
        [Complex64::new(-s, 0.0), Complex64::new(0.0, -c)],
    ])
}

pub fn entangling_gate(gamma: EntanglementAngle) -> Gate4 {
    entangling_gate_with(gamma, GateConvention::SigmaY)
}

pub fn entangling_gate_with(gamma: EntanglementAngle, convention: GateConvention) -> Gate4 {
    let half = gamma.radians() / 2.0;
    let pauli = convention.pauli();
    Gate4::linear_combination(
        Complex64::new(half.cos(), 0.0),
        &Gate4::identity(),
        Complex64::new(0.0, -half.sin()),
        &pauli.kron(&pauli),
    )
}

/// `J† (U(p) ⊗ U(q)) J |CC>` by dense matrix-vector arithmetic.
pub fn final_state(
    p: QuantumStrategyParam,
    q: QuantumStrategyParam,
    gamma: EntanglementAngle,
) -> StateVector4 {
    final_state_with(p, q, gamma, GateConvention::SigmaY)
}

pub fn final_state_with(
    p: QuantumStrategyParam,
    q: QuantumStrategyParam,
    gamma: EntanglementAngle,
    convention: GateConvention,
) -> StateVector4 {
    let j = entangling_gate_with(gamma, convention);
    let local = strategy_operator(p).kron(&strategy_operator(q));
    let psi = j.apply(&StateVector4::basis_cc());
    j.adjoint().apply(&local.apply(&psi))
}

/// Outcome probabilities over `(CC, CD, DC, DD)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDistribution {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub eps4: f64,
}

impl JointDistribution {
    pub fn as_array(&self) -> [f64; 4] {
        [self.eps1, self.eps2, self.eps3, self.eps4]
    }

    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }

    /// Expectation of a bimatrix game under this distribution.
    pub fn weigh(&self, matrix: &PayoffMatrix2x2) -> Payoffs {
        let cells = [(Q, Q), (Q, D), (D, Q), (D, D)];
        cells
            .iter()
            .zip(self.as_array())
            .fold(Payoffs::new(0.0, 0.0), |acc, (&(r, c), w)| {
                Payoffs::new(acc.a + w * matrix.a(r, c), acc.b + w * matrix.b(r, c))
            })
    }
}

pub fn joint_distribution(
    p: QuantumStrategyParam,
    q: QuantumStrategyParam,
    gamma: EntanglementAngle,
) -> JointDistribution {
    let (p, q) = (p.value(), q.value());
    let cos2 = gamma.radians().cos().powi(2);
    let sin2 = gamma.sin_sq();
    JointDistribution {
        eps1: p * q,
        eps2: p * (1.0 - q) * cos2 + (1.0 - p) * q * sin2,
        eps3: (1.0 - p) * q * cos2 + p * (1.0 - q) * sin2,
        eps4: (1.0 - p) * (1.0 - q),
    }
}

pub fn expected_payoff_quantum(
    params: DilemmaParams,
    p: QuantumStrategyParam,
    q: QuantumStrategyParam,
    gamma: EntanglementAngle,
) -> Payoffs {
    let (g, r) = (params.d_g(), params.d_r());
    let (p, q) = (p.value(), q.value());
    let cross = (r - g) * p * q;
    let entangled = params.entanglement_weight() * (p - q) * gamma.sin_sq();
    Payoffs::new(
        cross - r * p + (1.0 + g) * q + entangled,
        cross - r * q + (1.0 + g) * p - entangled,
    )
}

/// Pure-strategy game over `{Q, D}` with the off-diagonal payoffs
/// `pi_q = -d_r + w sin^2(gamma)` and `pi_d = 1 + d_g - w sin^2(gamma)`,
/// `w = 1 + d_r + d_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumPayoffMatrix {
    pub matrix: PayoffMatrix2x2,
    pub pi_q: f64,
    pub pi_d: f64,
}

pub fn pure_quantum_matrix(params: DilemmaParams, gamma: EntanglementAngle) -> QuantumPayoffMatrix {
    let shift = params.entanglement_weight() * gamma.sin_sq();
    let pi_q = -params.d_r() + shift;
    let pi_d = 1.0 + params.d_g() - shift;
    let matrix = PayoffMatrix2x2::new(
        [[(1.0, 1.0), (pi_q, pi_d)], [(pi_d, pi_q), (0.0, 0.0)]],
        QUANTUM_LABELS,
    )
    .expect("finite payoffs from validated parameters");
    QuantumPayoffMatrix { matrix, pi_q, pi_d }
}

/// Entanglement angles separating the equilibrium phases. A value is `None`
/// when its defining radicand falls outside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseThresholds {
    /// `sin^2(gamma1) (1 + d_r + d_g) = d_r`
    pub gamma1: Option<f64>,
    /// `sin^2(gamma2) (1 + d_r + d_g) = d_g`
    pub gamma2: Option<f64>,
    /// `sin^2(gamma*) = (d_g + d_r) / (2 (1 + d_g + d_r))`: deviation losses
    /// of `D⊗D` and `Q⊗Q` coincide in the coexistence phase, and the
    /// transitional mixed selection sits at `p* = 1/2`.
    pub gamma_star: Option<f64>,
    #[serde(skip)]
    params: DilemmaParams,
}

impl PhaseThresholds {
    fn require(&self, name: &'static str, value: Option<f64>) -> Result<f64> {
        value.ok_or(Error::UndefinedThreshold {
            name,
            d_g: self.params.d_g(),
            d_r: self.params.d_r(),
        })
    }

    pub fn gamma1(&self) -> Result<f64> {
        self.require("gamma1", self.gamma1)
    }

    pub fn gamma2(&self) -> Result<f64> {
        self.require("gamma2", self.gamma2)
    }

    pub fn gamma_star(&self) -> Result<f64> {
        self.require("gamma_star", self.gamma_star)
    }
}

pub(crate) fn arcsin_sqrt(numerator: f64, denominator: f64) -> Option<f64> {
    if denominator <= 0.0 {
        return None;
    }
    let radicand = numerator / denominator;
    (0.0..=1.0)
        .contains(&radicand)
        .then(|| radicand.sqrt().asin())
}

pub fn thresholds(params: DilemmaParams) -> PhaseThresholds {
    let w = params.entanglement_weight();
    let (g, r) = (params.d_g(), params.d_r());
    PhaseThresholds {
        gamma1: arcsin_sqrt(r, w),
        gamma2: arcsin_sqrt(g, w),
        gamma_star: arcsin_sqrt(g + r, 2.0 * w),
        params,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantumPhase {
    /// Below both thresholds: only mutual defection.
    ClassicalLike,
    /// `d_g > d_r`, between the thresholds: the two asymmetric equilibria.
    Transitional,
    /// `d_g < d_r`, between the thresholds: `D⊗D` and `Q⊗Q` together.
    Coexistence,
    /// Above both thresholds: only mutual quantum cooperation.
    FullyQuantum,
    /// At a threshold (within [`tol::THRESHOLD_MEMBERSHIP`]).
    Boundary,
}

impl QuantumPhase {
    pub fn label(self) -> &'static str {
        match self {
            QuantumPhase::ClassicalLike => "classical-like",
            QuantumPhase::Transitional => "transitional",
            QuantumPhase::Coexistence => "coexistence",
            QuantumPhase::FullyQuantum => "fully-quantum",
            QuantumPhase::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumNeReport {
    pub phase: QuantumPhase,
    pub equilibria: Vec<NashEquilibriumRecord>,
}

impl QuantumNeReport {
    pub fn cells(&self) -> Vec<(Action, Action)> {
        self.equilibria.iter().filter_map(|r| r.cell()).collect()
    }
}

pub(crate) fn require_qpd(params: DilemmaParams) -> Result<()> {
    if params.d_g() > 0.0 && params.d_r() > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRegime {
            d_g: params.d_g(),
            d_r: params.d_r(),
        })
    }
}

/// Pure quantum equilibria by phase. Intervals are closed, so an angle at a
/// threshold reports the union of the neighbouring sets, with payoffs
/// evaluated at the threshold itself.
pub fn classify_quantum_ne(
    params: DilemmaParams,
    gamma: EntanglementAngle,
) -> Result<QuantumNeReport> {
    require_qpd(params)?;
    let t = thresholds(params);
    let (g1, g2) = (t.gamma1()?, t.gamma2()?);

    let below: &[(Action, Action)] = &[(D, D)];
    let above: &[(Action, Action)] = &[(Q, Q)];
    let (lo, hi, middle, middle_phase): (f64, f64, &[(Action, Action)], _) =
        if params.d_g() > params.d_r() {
            (g1, g2, &[(D, Q), (Q, D)], QuantumPhase::Transitional)
        } else if params.d_g() < params.d_r() {
            (g2, g1, &[(D, D), (Q, Q)], QuantumPhase::Coexistence)
        } else {
            (g1, g1, &[], QuantumPhase::Boundary)
        };

    let x = gamma.radians();
    let near = |edge: f64| (x - edge).abs() <= tol::THRESHOLD_MEMBERSHIP;
    let (phase, at, sets): (_, f64, Vec<&[(Action, Action)]>) = if near(lo) {
        let upper = if lo == hi { above } else { middle };
        (QuantumPhase::Boundary, lo, vec![below, upper])
    } else if near(hi) {
        (QuantumPhase::Boundary, hi, vec![middle, above])
    } else if x < lo {
        (QuantumPhase::ClassicalLike, x, vec![below])
    } else if x > hi {
        (QuantumPhase::FullyQuantum, x, vec![above])
    } else {
        (middle_phase, x, vec![middle])
    };

    let mut cells: Vec<(Action, Action)> = sets.concat();
    cells.sort();
    cells.dedup();

    let angle = EntanglementAngle::new(at.clamp(0.0, FRAC_PI_2))?;
    let quantum = pure_quantum_matrix(params, angle);
    let equilibria = cells
        .into_iter()
        .map(|(row, col)| NashEquilibriumRecord::pure(&quantum.matrix, row, col))
        .collect();
    Ok(QuantumNeReport { phase, equilibria })
}
