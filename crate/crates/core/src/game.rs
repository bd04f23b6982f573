//! Symmetric 2x2 dilemmas in the (D_g, D_r) parametrization.
//!
//! Payoffs are normalized so that mutual cooperation pays R = 1 and mutual
//! defection pays P = 0. The gamble-intending strength `d_g` is the extra
//! gain from defecting on a cooperator; the risk-averting strength `d_r` is
//! the loss from cooperating with a defector.
//!
//! ```text
//!            B: C               B: D
//! A: C   (1, 1)             (-d_r, 1 + d_g)
//! A: D   (1 + d_g, -d_r)    (0, 0)
//! ```

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

pub const REWARD: f64 = 1.0;
pub const PUNISHMENT: f64 = 0.0;

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    check_finite(name, value)?;
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}

/// The two dilemma strengths, each in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilemmaParams {
    d_g: f64,
    d_r: f64,
}

impl DilemmaParams {
    pub fn new(d_g: f64, d_r: f64) -> Result<Self> {
        check_range("d_g", d_g, -1.0, 1.0)?;
        check_range("d_r", d_r, -1.0, 1.0)?;
        Ok(Self { d_g, d_r })
    }

    pub fn d_g(&self) -> f64 {
        self.d_g
    }

    pub fn d_r(&self) -> f64 {
        self.d_r
    }

    /// `1 + d_r + d_g`, the coefficient of `sin^2(gamma)` in every quantum payoff.
    pub fn entanglement_weight(&self) -> f64 {
        1.0 + self.d_r + self.d_g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Action {
    First,
    Second,
}

impl Action {
    pub const BOTH: [Action; 2] = [Action::First, Action::Second];

    pub fn index(self) -> usize {
        match self {
            Action::First => 0,
            Action::Second => 1,
        }
    }

    pub fn other(self) -> Action {
        match self {
            Action::First => Action::Second,
            Action::Second => Action::First,
        }
    }

    /// Probability weight a pure profile puts on the first action.
    fn weight(self) -> f64 {
        match self {
            Action::First => 1.0,
            Action::Second => 0.0,
        }
    }
}

pub const CLASSICAL_LABELS: [&str; 2] = ["C", "D"];
pub const QUANTUM_LABELS: [&str; 2] = ["Q", "D"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Payoffs {
    pub a: f64,
    pub b: f64,
}

impl Payoffs {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn sum(&self) -> f64 {
        self.a + self.b
    }
}

/// General bimatrix game: `entries[row][col] = (a_ij, b_ij)`, rows are player
/// A's actions and columns player B's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffMatrix2x2 {
    entries: [[(f64, f64); 2]; 2],
    labels: [&'static str; 2],
}

impl PayoffMatrix2x2 {
    pub fn new(entries: [[(f64, f64); 2]; 2], labels: [&'static str; 2]) -> Result<Self> {
        for row in &entries {
            for &(a, b) in row {
                check_finite("a_ij", a)?;
                check_finite("b_ij", b)?;
            }
        }
        Ok(Self { entries, labels })
    }

    pub fn entries(&self) -> &[[(f64, f64); 2]; 2] {
        &self.entries
    }

    pub fn labels(&self) -> [&'static str; 2] {
        self.labels
    }

    pub fn label(&self, action: Action) -> &'static str {
        self.labels[action.index()]
    }

    pub fn a(&self, row: Action, col: Action) -> f64 {
        self.entries[row.index()][col.index()].0
    }

    pub fn b(&self, row: Action, col: Action) -> f64 {
        self.entries[row.index()][col.index()].1
    }

    pub fn cell(&self, row: Action, col: Action) -> Payoffs {
        let (a, b) = self.entries[row.index()][col.index()];
        Payoffs::new(a, b)
    }

    /// Expected payoffs when A plays the first action with probability `p`
    /// and B with probability `q`.
    pub fn expected_payoff(&self, profile: StrategyProfile) -> Payoffs {
        let row_w = [profile.p(), 1.0 - profile.p()];
        let col_w = [profile.q(), 1.0 - profile.q()];
        let mut out = Payoffs::new(0.0, 0.0);
        for (i, wi) in row_w.iter().enumerate() {
            for (j, wj) in col_w.iter().enumerate() {
                let (a, b) = self.entries[i][j];
                out.a += wi * wj * a;
                out.b += wi * wj * b;
            }
        }
        out
    }

    /// Best-response test for a pure cell, with ties (up to `tol`) admitted.
    pub fn is_pure_ne_within(&self, row: Action, col: Action, tol: f64) -> bool {
        let a_ok = self.a(row, col) + tol >= self.a(row.other(), col);
        let b_ok = self.b(row, col) + tol >= self.b(row, col.other());
        a_ok && b_ok
    }

    /// The same game with both players' action labels exchanged.
    pub fn swap_actions(&self) -> Self {
        let e = &self.entries;
        Self {
            entries: [[e[1][1], e[1][0]], [e[0][1], e[0][0]]],
            labels: [self.labels[1], self.labels[0]],
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut entries = self.entries;
        for row in entries.iter_mut() {
            for cell in row.iter_mut() {
                *cell = (cell.0 * k, cell.1 * k);
            }
        }
        Self {
            entries,
            labels: self.labels,
        }
    }

    pub fn cell_name(&self, row: Action, col: Action) -> String {
        format!("({},{})", self.label(row), self.label(col))
    }
}

/// `p` (resp. `q`) is the probability that A (resp. B) plays the first action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrategyProfile {
    p: f64,
    q: f64,
}

impl StrategyProfile {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        check_range("p", p, 0.0, 1.0)?;
        check_range("q", q, 0.0, 1.0)?;
        Ok(Self { p, q })
    }

    pub fn pure(row: Action, col: Action) -> Self {
        Self {
            p: row.weight(),
            q: col.weight(),
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn as_pure(&self) -> Option<(Action, Action)> {
        let pick = |x: f64| {
            if x == 1.0 {
                Some(Action::First)
            } else if x == 0.0 {
                Some(Action::Second)
            } else {
                None
            }
        };
        Some((pick(self.p)?, pick(self.q)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DilemmaKind {
    #[serde(rename = "PD")]
    PrisonersDilemma,
    #[serde(rename = "CH")]
    Chicken,
    #[serde(rename = "SH")]
    StagHunt,
    #[serde(rename = "TRIVIAL")]
    Trivial,
}

impl DilemmaKind {
    pub fn code(self) -> &'static str {
        match self {
            DilemmaKind::PrisonersDilemma => "PD",
            DilemmaKind::Chicken => "CH",
            DilemmaKind::StagHunt => "SH",
            DilemmaKind::Trivial => "TRIVIAL",
        }
    }
}

impl fmt::Display for DilemmaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DilemmaClass {
    pub kind: DilemmaKind,
    /// Set when `d_g == 0` or `d_r == 0`.
    pub boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NashEquilibriumRecord {
    pub profile: StrategyProfile,
    pub payoffs: Payoffs,
    pub kind: EquilibriumKind,
}

impl NashEquilibriumRecord {
    pub fn pure(matrix: &PayoffMatrix2x2, row: Action, col: Action) -> Self {
        Self {
            profile: StrategyProfile::pure(row, col),
            payoffs: matrix.cell(row, col),
            kind: EquilibriumKind::Pure,
        }
    }

    pub fn cell(&self) -> Option<(Action, Action)> {
        self.profile.as_pure()
    }
}

pub fn build_dilemma_matrix(params: DilemmaParams) -> PayoffMatrix2x2 {
    let (g, r) = (params.d_g(), params.d_r());
    PayoffMatrix2x2 {
        entries: [
            [(REWARD, REWARD), (-r, 1.0 + g)],
            [(1.0 + g, -r), (PUNISHMENT, PUNISHMENT)],
        ],
        labels: CLASSICAL_LABELS,
    }
}

/// Classes follow the signs of `(d_g, d_r)`. A zero strength sets the
/// boundary flag and resolves to the adjacent dilemma whose equilibria the
/// boundary game still has.
pub fn classify_dilemma(params: DilemmaParams) -> DilemmaClass {
    use std::cmp::Ordering::*;
    use DilemmaKind::*;

    let sign = |x: f64| x.partial_cmp(&0.0).unwrap_or(Equal);
    let kind = match (sign(params.d_g()), sign(params.d_r())) {
        (Greater, Greater) => PrisonersDilemma,
        (Greater, Less) => Chicken,
        (Less, Greater) => StagHunt,
        (Less, Less) => Trivial,
        (Equal, Greater) => StagHunt,
        (Equal, Less) => Chicken,
        (Greater, Equal) => Chicken,
        (Less, Equal) => StagHunt,
        (Equal, Equal) => PrisonersDilemma,
    };
    DilemmaClass {
        kind,
        boundary: params.d_g() == 0.0 || params.d_r() == 0.0,
    }
}

/// Weighted sum over the four cells, so pure profiles return the matrix
/// entries bit for bit.
pub fn expected_payoff_classical(params: DilemmaParams, profile: StrategyProfile) -> Payoffs {
    build_dilemma_matrix(params).expected_payoff(profile)
}

/// Pure equilibria, in row-major cell order. Exact ties count as best responses.
pub fn enumerate_pure_ne(matrix: &PayoffMatrix2x2) -> Vec<NashEquilibriumRecord> {
    enumerate_pure_ne_within(matrix, 0.0)
}

pub fn enumerate_pure_ne_within(matrix: &PayoffMatrix2x2, tol: f64) -> Vec<NashEquilibriumRecord> {
    let mut found = Vec::new();
    for row in Action::BOTH {
        for col in Action::BOTH {
            if matrix.is_pure_ne_within(row, col, tol) {
                found.push(NashEquilibriumRecord::pure(matrix, row, col));
            }
        }
    }
    found
}

/// Payoffs are affine in each player's own probability, so the two pure
/// deviations bound every mixed deviation.
pub fn verify_mixed_ne(params: DilemmaParams, profile: StrategyProfile, tol: f64) -> bool {
    let here = expected_payoff_classical(params, profile);
    let a_ok = [0.0, 1.0].iter().all(|&p| {
        let dev = StrategyProfile { p, q: profile.q() };
        expected_payoff_classical(params, dev).a <= here.a + tol
    });
    let b_ok = [0.0, 1.0].iter().all(|&q| {
        let dev = StrategyProfile { p: profile.p(), q };
        expected_payoff_classical(params, dev).b <= here.b + tol
    });
    a_ok && b_ok
}

pub fn verify_mixed_ne_default(params: DilemmaParams, profile: StrategyProfile) -> bool {
    verify_mixed_ne(params, profile, tol::NE_CHECK)
}
