//! Nash equilibria and risk-dominant equilibrium selection for symmetric 2x2
//! dilemmas and their Eisert–Wilkens–Lewenstein quantum extension.
//!
//! * [`game`]: the `(d_g, d_r)` dilemma family, classification, classical
//!   payoffs and equilibria.
//! * [`risk`]: risk dominance between two pure equilibria of any 2x2 game.
//! * [`ewl`]: the quantum game, with closed forms alongside a state-vector
//!   simulation, phase thresholds and pure quantum equilibria.
//! * [`quantum_rde`]: selection in the transitional and coexistence phases,
//!   risk measures, sensitivity analysis and group benefit.

pub mod error;
pub mod ewl;
pub mod game;
pub mod quantum_rde;
pub mod risk;
pub mod tol;

pub use error::{Error, Result};
pub use ewl::{
    classify_quantum_ne, entangling_gate, entangling_gate_with, expected_payoff_quantum,
    final_state, final_state_with, initial_state, joint_distribution, pure_quantum_matrix,
    strategy_operator, thresholds, EntanglementAngle, Gate4, GateConvention, JointDistribution,
    PhaseThresholds, QuantumNeReport, QuantumPayoffMatrix, QuantumPhase, QuantumStrategyParam,
    StateVector4, Unitary2,
};
pub use game::{
    build_dilemma_matrix, classify_dilemma, enumerate_pure_ne, enumerate_pure_ne_within,
    expected_payoff_classical, verify_mixed_ne, verify_mixed_ne_default, Action, DilemmaClass,
    DilemmaKind, DilemmaParams, EquilibriumKind, NashEquilibriumRecord, PayoffMatrix2x2, Payoffs,
    StrategyProfile,
};
pub use quantum_rde::{
    deviation_losses_quantum, group_benefit_crossing, group_benefit_threshold, phase_of,
    rde_coexistence, rde_expected_payoff, rde_group_benefit, rde_quantum, rde_transitional,
    sensitivity_critical_angles, sensitivity_indices, sensitivity_partials, situ_risk_at,
    situ_risk_coexistence, situ_risk_transitional, unilateral_deviation_payoffs, CriticalAngles,
    FixedStrategy, MultiEquilibriumPhase, SensitivityPartials, SensitivityReport, SituRisk,
};
pub use risk::{
    deviation_losses_asymmetric, deviation_losses_symmetric, rde_chicken, rde_classical,
    rde_staghunt, select_rde_asymmetric, select_rde_symmetric, DeviationLossPair, RdeOutcome,
};
