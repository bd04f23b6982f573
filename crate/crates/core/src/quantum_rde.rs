//! Equilibrium selection inside the two multi-equilibrium phases of the
//! quantum prisoner's dilemma.
//!
//! Write `x = (1 + d_r + d_g) sin^2(gamma)`. Then `pi_q = x - d_r` and
//! `pi_d = 1 + d_g - x`.
//!
//! * Transitional phase (`d_g > d_r > 0`, `gamma1 <= gamma <= gamma2`): the
//!   equilibria `D⊗Q` and `Q⊗D` always tie on the deviation-loss product, so the
//!   risk-dominant equilibrium is the symmetric mixed profile
//!   `p* = (x - d_r) / (d_g - d_r)`.
//! * Coexistence phase (`d_r > d_g > 0`, `gamma2 <= gamma <= gamma1`):
//!   `D⊗D` and `Q⊗Q` compete with products `(d_r - x)^2` and `(x - d_g)^2`,
//!   and the winner switches at `gamma*`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ewl::{
    expected_payoff_quantum, pure_quantum_matrix, require_qpd, thresholds, EntanglementAngle,
    QuantumStrategyParam,
};
use crate::game::{Action, DilemmaParams, Payoffs};
use crate::risk::{DeviationLossPair, RdeOutcome};
use crate::tol;

use Action::{First as Q, Second as D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiEquilibriumPhase {
    Transitional,
    Coexistence,
}

impl MultiEquilibriumPhase {
    pub fn label(self) -> &'static str {
        match self {
            MultiEquilibriumPhase::Transitional => "transitional",
            MultiEquilibriumPhase::Coexistence => "coexistence",
        }
    }

    /// The closed phase interval for these parameters, or `None` when the
    /// parameters never produce this phase.
    pub fn interval(self, params: DilemmaParams) -> Option<(f64, f64)> {
        let (g, r) = (params.d_g(), params.d_r());
        let t = thresholds(params);
        match self {
            MultiEquilibriumPhase::Transitional if g > r && r > 0.0 => Some((t.gamma1?, t.gamma2?)),
            MultiEquilibriumPhase::Coexistence if r > g && g > 0.0 => Some((t.gamma2?, t.gamma1?)),
            _ => None,
        }
    }

    /// Angles within [`tol::TIE_EPS`] of an endpoint count as inside.
    pub fn contains(self, params: DilemmaParams, gamma: EntanglementAngle) -> bool {
        self.check(params, gamma).is_ok()
    }

    fn check(self, params: DilemmaParams, gamma: EntanglementAngle) -> Result<(f64, f64)> {
        let x = gamma.radians();
        let interval = self.interval(params);
        match interval {
            Some((lo, hi)) if x >= lo - tol::TIE_EPS && x <= hi + tol::TIE_EPS => Ok((lo, hi)),
            _ => Err(Error::OutOfPhase {
                phase: self.label(),
                gamma: x,
                interval,
            }),
        }
    }
}

/// Which multi-equilibrium phase, if any, `(params, gamma)` falls in.
pub fn phase_of(params: DilemmaParams, gamma: EntanglementAngle) -> Option<MultiEquilibriumPhase> {
    [
        MultiEquilibriumPhase::Transitional,
        MultiEquilibriumPhase::Coexistence,
    ]
    .into_iter()
    .find(|phase| phase.contains(params, gamma))
}

fn shift(params: DilemmaParams, gamma: EntanglementAngle) -> f64 {
    params.entanglement_weight() * gamma.sin_sq()
}

/// Largest loss each player at an equilibrium can suffer when the opponent
/// deviates anywhere in the one-parameter family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SituRisk {
    pub risk_a: f64,
    pub risk_b: f64,
}

/// Payoffs are affine in the deviating parameter, so the supremum of the
/// loss is attained at `t = 0` or `t = 1`.
pub fn situ_risk_at(
    params: DilemmaParams,
    gamma: EntanglementAngle,
    row: Action,
    col: Action,
) -> SituRisk {
    let param = |a: Action| match a {
        Q => QuantumStrategyParam::QUANTUM_COOPERATE,
        D => QuantumStrategyParam::DEFECT,
    };
    let (p, q) = (param(row), param(col));
    let here = expected_payoff_quantum(params, p, q, gamma);
    let endpoints = [
        QuantumStrategyParam::DEFECT,
        QuantumStrategyParam::QUANTUM_COOPERATE,
    ];
    let risk_a = endpoints
        .iter()
        .map(|&dev| here.a - expected_payoff_quantum(params, p, dev, gamma).a)
        .fold(f64::NEG_INFINITY, f64::max);
    let risk_b = endpoints
        .iter()
        .map(|&dev| here.b - expected_payoff_quantum(params, dev, q, gamma).b)
        .fold(f64::NEG_INFINITY, f64::max);
    SituRisk { risk_a, risk_b }
}

/// Risks at `D⊗Q` and at `Q⊗D`.
pub fn situ_risk_transitional(
    params: DilemmaParams,
    gamma: EntanglementAngle,
) -> Result<(SituRisk, SituRisk)> {
    MultiEquilibriumPhase::Transitional.check(params, gamma)?;
    Ok((
        situ_risk_at(params, gamma, D, Q),
        situ_risk_at(params, gamma, Q, D),
    ))
}

/// Risks at `D⊗D` and at `Q⊗Q`.
pub fn situ_risk_coexistence(
    params: DilemmaParams,
    gamma: EntanglementAngle,
) -> Result<(SituRisk, SituRisk)> {
    MultiEquilibriumPhase::Coexistence.check(params, gamma)?;
    Ok((
        situ_risk_at(params, gamma, D, D),
        situ_risk_at(params, gamma, Q, Q),
    ))
}

/// Deviation losses in closed form: `(D⊗Q, Q⊗D)` in the transitional phase,
/// `(Q⊗Q, D⊗D)` in the coexistence phase.
pub fn deviation_losses_quantum(
    params: DilemmaParams,
    gamma: EntanglementAngle,
    phase: MultiEquilibriumPhase,
) -> Result<(DeviationLossPair, DeviationLossPair)> {
    phase.check(params, gamma)?;
    let x = shift(params, gamma);
    let (g, r) = (params.d_g(), params.d_r());
    Ok(match phase {
        MultiEquilibriumPhase::Transitional => (
            DeviationLossPair::new(g - x, x - r),
            DeviationLossPair::new(x - r, g - x),
        ),
        MultiEquilibriumPhase::Coexistence => (
            DeviationLossPair::new(x - g, x - g),
            DeviationLossPair::new(r - x, r - x),
        ),
    })
}

fn p_star_unchecked(params: DilemmaParams, gamma: EntanglementAngle) -> f64 {
    (shift(params, gamma) - params.d_r()) / (params.d_g() - params.d_r())
}

pub fn rde_transitional(params: DilemmaParams, gamma: EntanglementAngle) -> Result<RdeOutcome> {
    MultiEquilibriumPhase::Transitional.check(params, gamma)?;
    let p = p_star_unchecked(params, gamma).clamp(0.0, 1.0);
    RdeOutcome::mixed(&pure_quantum_matrix(params, gamma).matrix, p, p)
}

/// `D⊗D` below `gamma*`, `Q⊗Q` above, and the tie-breaking mixed profile
/// (which is `U(1/2)⊗U(1/2)` at `gamma*`) when the products agree within
/// [`tol::TIE_EPS`].
pub fn rde_coexistence(params: DilemmaParams, gamma: EntanglementAngle) -> Result<RdeOutcome> {
    let (qq, dd) = deviation_losses_quantum(params, gamma, MultiEquilibriumPhase::Coexistence)?;
    let matrix = pure_quantum_matrix(params, gamma).matrix;
    let gap = qq.product - dd.product;
    if gap > tol::TIE_EPS {
        Ok(RdeOutcome::pure(&matrix, Q, Q))
    } else if gap < -tol::TIE_EPS {
        Ok(RdeOutcome::pure(&matrix, D, D))
    } else {
        let p = (dd.loss_b / (qq.loss_b + dd.loss_b)).clamp(0.0, 1.0);
        RdeOutcome::mixed(&matrix, p, p)
    }
}

/// Risk-dominant selection wherever the pure quantum game has several
/// equilibria; the unique equilibrium otherwise.
pub fn rde_quantum(params: DilemmaParams, gamma: EntanglementAngle) -> Result<RdeOutcome> {
    require_qpd(params)?;
    match phase_of(params, gamma) {
        Some(MultiEquilibriumPhase::Transitional) => rde_transitional(params, gamma),
        Some(MultiEquilibriumPhase::Coexistence) => rde_coexistence(params, gamma),
        None => {
            let t = thresholds(params);
            let matrix = pure_quantum_matrix(params, gamma).matrix;
            let upper = t.gamma1()?.max(t.gamma2()?);
            if gamma.radians() > upper {
                Ok(RdeOutcome::pure(&matrix, Q, Q))
            } else {
                Ok(RdeOutcome::pure(&matrix, D, D))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityPartials {
    pub d_g: f64,
    pub d_r: f64,
    pub gamma: f64,
}

pub fn sensitivity_partials(
    params: DilemmaParams,
    gamma: EntanglementAngle,
) -> Result<SensitivityPartials> {
    MultiEquilibriumPhase::Transitional.check(params, gamma)?;
    let (g, r) = (params.d_g(), params.d_r());
    let s2 = gamma.sin_sq();
    let spread = g - r;
    let x = gamma.radians();
    Ok(SensitivityPartials {
        d_g: (r - (1.0 + 2.0 * r) * s2) / (spread * spread),
        d_r: (-g + (1.0 + 2.0 * g) * s2) / (spread * spread),
        gamma: 2.0 * params.entanglement_weight() * x.sin() * x.cos() / spread,
    })
}

/// Angles at which `∂p*/∂d_g` and `∂p*/∂d_r` change sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalAngles {
    pub gamma_g: f64,
    pub gamma_r: f64,
}

pub fn sensitivity_critical_angles(params: DilemmaParams) -> Result<CriticalAngles> {
    require_qpd(params)?;
    let (g, r) = (params.d_g(), params.d_r());
    let angle = |num: f64| (num / (1.0 + 2.0 * num)).sqrt().asin();
    Ok(CriticalAngles {
        gamma_g: angle(r),
        gamma_r: angle(g),
    })
}

/// Elasticities `S_x = (∂p*/∂x) x / p*`.
///
/// `semi_elasticity_gamma` is `(∂p*/∂gamma) / p*` without the factor `gamma`.
/// Reference sensitivity tables list this quantity in the gamma column, so it
/// is reported next to the elasticity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub p_star: f64,
    pub partials: SensitivityPartials,
    pub index_dg: f64,
    pub index_dr: f64,
    pub index_gamma: f64,
    pub semi_elasticity_gamma: f64,
}

pub fn sensitivity_indices(
    params: DilemmaParams,
    gamma: EntanglementAngle,
) -> Result<SensitivityReport> {
    let partials = sensitivity_partials(params, gamma)?;
    let p_star = p_star_unchecked(params, gamma);
    if p_star <= tol::TIE_EPS {
        return Err(Error::DegenerateBase { p_star });
    }
    Ok(SensitivityReport {
        p_star,
        partials,
        index_dg: partials.d_g * params.d_g() / p_star,
        index_dr: partials.d_r * params.d_r() / p_star,
        index_gamma: partials.gamma * gamma.radians() / p_star,
        semi_elasticity_gamma: partials.gamma / p_star,
    })
}

/// Each player's payoff at the transitional selection `U(p*)⊗U(p*)`.
pub fn rde_expected_payoff(params: DilemmaParams, gamma: EntanglementAngle) -> Result<Payoffs> {
    let outcome = rde_transitional(params, gamma)?;
    let p = outcome.profile.p();
    let (g, r) = (params.d_g(), params.d_r());
    let each = (r - g) * p * p + (1.0 - r + g) * p;
    Ok(Payoffs::new(each, each))
}

/// Smallest transitional angle with
/// `sin(2 gamma) > sqrt(2 (d_r + 2 d_r d_g + d_g)) / (1 + d_r + d_g)`.
///
/// The inequality holds exactly when the selection's group benefit
/// `2 $*` exceeds 1. Returns `None` if no transitional angle satisfies it.
pub fn group_benefit_threshold(params: DilemmaParams) -> Result<Option<EntanglementAngle>> {
    let Some((lo, hi)) = MultiEquilibriumPhase::Transitional.interval(params) else {
        return Err(Error::OutOfPhase {
            phase: "transitional",
            gamma: f64::NAN,
            interval: None,
        });
    };
    let (g, r) = (params.d_g(), params.d_r());
    // (1 + d_r + d_g)^2 - 2 (d_r + d_g + 2 d_r d_g) = 1 + (d_r - d_g)^2, so bound < 1
    let bound = (2.0 * (r + 2.0 * r * g + g)).sqrt() / params.entanglement_weight();
    // sin(2 gamma) > bound on the open interval (c, pi/2 - c)
    let crossing = bound.asin() / 2.0;
    let start = lo.max(crossing);
    let end = hi.min(std::f64::consts::FRAC_PI_2 - crossing);
    if start < end {
        Ok(Some(EntanglementAngle::new(start)?))
    } else {
        Ok(None)
    }
}

/// Combined payoff `$A + $B` at the transitional selection.
pub fn rde_group_benefit(params: DilemmaParams, gamma: EntanglementAngle) -> Result<f64> {
    Ok(rde_expected_payoff(params, gamma)?.sum())
}

/// Transitional angle above which the selection's group benefit beats the
/// group benefit `1 + d_g - d_r` of either asymmetric pure equilibrium.
pub fn group_benefit_crossing(params: DilemmaParams) -> Result<EntanglementAngle> {
    let (lo, _) =
        MultiEquilibriumPhase::Transitional
            .interval(params)
            .ok_or(Error::OutOfPhase {
                phase: "transitional",
                gamma: f64::NAN,
                interval: None,
            })?;
    let spread = params.d_g() - params.d_r();
    // 2 p ((1 + c) - c p) = 1 + c  =>  lower root in p
    let c = spread;
    let p = ((1.0 + c) - ((1.0 + c) * (1.0 - c)).sqrt()) / (2.0 * c);
    let x = params.d_r() + spread * p;
    let gamma = (x / params.entanglement_weight()).sqrt().asin();
    EntanglementAngle::new(gamma.max(lo))
}

/// A's fixed strategy in a unilateral-deviation curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedStrategy {
    Defect,
    QuantumCooperate,
    /// `U(1/2)`
    Half,
}

impl FixedStrategy {
    pub fn param(self) -> QuantumStrategyParam {
        match self {
            FixedStrategy::Defect => QuantumStrategyParam::DEFECT,
            FixedStrategy::QuantumCooperate => QuantumStrategyParam::QUANTUM_COOPERATE,
            FixedStrategy::Half => QuantumStrategyParam::HALF,
        }
    }
}

/// Payoffs when A holds `fixed` and B plays `U(q)`; every curve is affine in `q`.
pub fn unilateral_deviation_payoffs(
    params: DilemmaParams,
    gamma: EntanglementAngle,
    fixed: FixedStrategy,
    q: QuantumStrategyParam,
) -> Payoffs {
    let x = shift(params, gamma);
    let (g, r) = (params.d_g(), params.d_r());
    let q = q.value();
    match fixed {
        FixedStrategy::Defect => Payoffs::new((1.0 + g - x) * q, (x - r) * q),
        FixedStrategy::QuantumCooperate => {
            Payoffs::new((1.0 + r - x) * q - r + x, (x - g) * q + 1.0 + g - x)
        }
        FixedStrategy::Half => {
            let base = (r - g) / 2.0;
            Payoffs::new(
                (base + 1.0 + g - x) * q + (x - r) / 2.0,
                (base - r + x) * q + (1.0 + g - x) / 2.0,
            )
        }
    }
}
