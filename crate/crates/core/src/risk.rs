//! Harsanyi–Selten risk dominance between two pure equilibria of a 2x2 game.
//!
//! At each candidate equilibrium the loss a player suffers when the opponent
//! deviates is measured, and the equilibrium with the larger product of the
//! two losses risk-dominates. When the products tie, the mixed profile built
//! from the component losses is selected.
//!
//! Only risk dominance is implemented. Payoff dominance and the full tracing
//! procedure are not.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    build_dilemma_matrix, classify_dilemma, Action, DilemmaKind, DilemmaParams, EquilibriumKind,
    PayoffMatrix2x2, Payoffs, StrategyProfile,
};
use crate::tol;

use Action::{First, Second};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationLossPair {
    pub loss_a: f64,
    pub loss_b: f64,
    pub product: f64,
}

impl DeviationLossPair {
    pub fn new(loss_a: f64, loss_b: f64) -> Self {
        Self {
            loss_a,
            loss_b,
            product: loss_a * loss_b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RdeOutcome {
    pub kind: EquilibriumKind,
    pub profile: StrategyProfile,
    pub payoffs: Payoffs,
}

impl RdeOutcome {
    pub fn pure(matrix: &PayoffMatrix2x2, row: Action, col: Action) -> Self {
        Self {
            kind: EquilibriumKind::Pure,
            profile: StrategyProfile::pure(row, col),
            payoffs: matrix.cell(row, col),
        }
    }

    pub fn mixed(matrix: &PayoffMatrix2x2, p: f64, q: f64) -> Result<Self> {
        let profile = StrategyProfile::new(p, q)?;
        Ok(Self {
            kind: EquilibriumKind::Mixed,
            profile,
            payoffs: matrix.expected_payoff(profile),
        })
    }

    pub fn is_mixed(&self) -> bool {
        self.kind == EquilibriumKind::Mixed
    }

    pub fn cell(&self) -> Option<(Action, Action)> {
        match self.kind {
            EquilibriumKind::Pure => self.profile.as_pure(),
            EquilibriumKind::Mixed => None,
        }
    }
}

fn require_ne(matrix: &PayoffMatrix2x2, row: Action, col: Action) -> Result<()> {
    if matrix.is_pure_ne_within(row, col, tol::TIE_EPS) {
        Ok(())
    } else {
        Err(Error::NotAnEquilibrium {
            row: matrix.label(row),
            col: matrix.label(col),
        })
    }
}

fn mixing_ratio(numerator: f64, other: f64) -> Result<f64> {
    let denominator = numerator + other;
    if denominator.abs() <= tol::TIE_EPS {
        return Err(Error::DegenerateDenominator { value: denominator });
    }
    // ratios that overshoot [0, 1] by round-off are pulled back in
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// Losses at `(first, first)` and `(second, second)`.
pub fn deviation_losses_symmetric(
    matrix: &PayoffMatrix2x2,
) -> Result<(DeviationLossPair, DeviationLossPair)> {
    require_ne(matrix, First, First)?;
    require_ne(matrix, Second, Second)?;
    let at_first = DeviationLossPair::new(
        matrix.a(First, First) - matrix.a(Second, First),
        matrix.b(First, First) - matrix.b(First, Second),
    );
    let at_second = DeviationLossPair::new(
        matrix.a(Second, Second) - matrix.a(First, Second),
        matrix.b(Second, Second) - matrix.b(Second, First),
    );
    Ok((at_first, at_second))
}

/// Losses at `(first, second)` and `(second, first)`.
pub fn deviation_losses_asymmetric(
    matrix: &PayoffMatrix2x2,
) -> Result<(DeviationLossPair, DeviationLossPair)> {
    require_ne(matrix, First, Second)?;
    require_ne(matrix, Second, First)?;
    let at_first_second = DeviationLossPair::new(
        matrix.a(First, Second) - matrix.a(Second, Second),
        matrix.b(First, Second) - matrix.b(First, First),
    );
    let at_second_first = DeviationLossPair::new(
        matrix.a(Second, First) - matrix.a(First, First),
        matrix.b(Second, First) - matrix.b(Second, Second),
    );
    Ok((at_first_second, at_second_first))
}

pub fn select_rde_symmetric(matrix: &PayoffMatrix2x2) -> Result<RdeOutcome> {
    let (first, second) = deviation_losses_symmetric(matrix)?;
    let gap = first.product - second.product;
    if gap > tol::TIE_EPS {
        Ok(RdeOutcome::pure(matrix, First, First))
    } else if gap < -tol::TIE_EPS {
        Ok(RdeOutcome::pure(matrix, Second, Second))
    } else {
        let p = mixing_ratio(second.loss_b, first.loss_b)?;
        let q = mixing_ratio(second.loss_a, first.loss_a)?;
        RdeOutcome::mixed(matrix, p, q)
    }
}

pub fn select_rde_asymmetric(matrix: &PayoffMatrix2x2) -> Result<RdeOutcome> {
    let (first_second, second_first) = deviation_losses_asymmetric(matrix)?;
    let gap = first_second.product - second_first.product;
    if gap > tol::TIE_EPS {
        Ok(RdeOutcome::pure(matrix, First, Second))
    } else if gap < -tol::TIE_EPS {
        Ok(RdeOutcome::pure(matrix, Second, First))
    } else {
        let p = mixing_ratio(second_first.loss_b, first_second.loss_b)?;
        let q = mixing_ratio(first_second.loss_a, second_first.loss_a)?;
        RdeOutcome::mixed(matrix, p, q)
    }
}

fn require_class(params: DilemmaParams, expected: DilemmaKind) -> Result<()> {
    let found = classify_dilemma(params).kind;
    if found == expected {
        Ok(())
    } else {
        Err(Error::WrongClass {
            expected: expected.code(),
            found: found.code(),
        })
    }
}

/// Chicken always ties (`Δ = -d_r d_g` at both asymmetric equilibria), so the
/// selection is the mixed profile `p* = q* = -d_r / (d_g - d_r)`.
pub fn rde_chicken(params: DilemmaParams) -> Result<RdeOutcome> {
    require_class(params, DilemmaKind::Chicken)?;
    let (g, r) = (params.d_g(), params.d_r());
    let p = mixing_ratio(-r, g)?;
    RdeOutcome::mixed(&build_dilemma_matrix(params), p, p)
}

/// Stag hunt: `Δ(C,C) = d_g^2` against `Δ(D,D) = d_r^2`.
pub fn rde_staghunt(params: DilemmaParams) -> Result<RdeOutcome> {
    require_class(params, DilemmaKind::StagHunt)?;
    let matrix = build_dilemma_matrix(params);
    let (g, r) = (params.d_g(), params.d_r());
    let gap = g * g - r * r;
    if gap > tol::TIE_EPS {
        Ok(RdeOutcome::pure(&matrix, First, First))
    } else if gap < -tol::TIE_EPS {
        Ok(RdeOutcome::pure(&matrix, Second, Second))
    } else {
        let p = mixing_ratio(r, -g)?;
        RdeOutcome::mixed(&matrix, p, p)
    }
}

/// Classical selection for any class. A single equilibrium is selected as is:
/// `D⊗D` in the prisoner's dilemma and `C⊗C` in the trivial game.
pub fn rde_classical(params: DilemmaParams) -> Result<RdeOutcome> {
    let matrix = build_dilemma_matrix(params);
    match classify_dilemma(params).kind {
        DilemmaKind::PrisonersDilemma => Ok(RdeOutcome::pure(&matrix, Second, Second)),
        DilemmaKind::Trivial => Ok(RdeOutcome::pure(&matrix, First, First)),
        DilemmaKind::Chicken => rde_chicken(params),
        DilemmaKind::StagHunt => rde_staghunt(params),
    }
}
