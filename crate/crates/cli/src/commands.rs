//! Single-point subcommands and the oracle self-check.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrde::*;
use std::result::Result;

use crate::report::{ReportRow, Value};
use crate::{CliError, Outcome};

use Action::{First, Second};

/// Action pair as a two-letter name such as `DQ`.
pub fn cell_name(matrix: &PayoffMatrix2x2, row: Action, col: Action) -> String {
    format!("{}{}", matrix.label(row), matrix.label(col))
}

fn point(params: DilemmaParams) -> ReportRow {
    ReportRow::new()
        .with("d_g", Value::num(params.d_g()))
        .with("d_r", Value::num(params.d_r()))
}

fn point_at(params: DilemmaParams, gamma: Option<EntanglementAngle>) -> ReportRow {
    point(params).with("gamma", Value::opt(gamma.map(|g| g.radians())))
}

pub fn classify(params: DilemmaParams) -> Vec<ReportRow> {
    let class = classify_dilemma(params);
    let matrix = build_dilemma_matrix(params);
    enumerate_pure_ne(&matrix)
        .iter()
        .filter_map(|ne| ne.cell().map(|cell| (cell, ne.payoffs)))
        .map(|((row, col), pay)| {
            point(params)
                .with("class", Value::text(class.kind.code()))
                .with("boundary", Value::Bool(class.boundary))
                .with("ne", Value::text(cell_name(&matrix, row, col)))
                .with("payoff_a", Value::num(pay.a))
                .with("payoff_b", Value::num(pay.b))
        })
        .collect()
}

fn equilibrium_row(
    base: ReportRow,
    regime: &str,
    matrix: &PayoffMatrix2x2,
    record: &NashEquilibriumRecord,
) -> ReportRow {
    let name = record
        .cell()
        .map_or(Value::Null, |(r, c)| Value::text(cell_name(matrix, r, c)));
    base.with("regime", Value::text(regime))
        .with("kind", Value::text(kind_label(record.kind)))
        .with("ne", name)
        .with("p", Value::num(record.profile.p()))
        .with("q", Value::num(record.profile.q()))
        .with("payoff_a", Value::num(record.payoffs.a))
        .with("payoff_b", Value::num(record.payoffs.b))
}

fn kind_label(kind: EquilibriumKind) -> &'static str {
    match kind {
        EquilibriumKind::Pure => "pure",
        EquilibriumKind::Mixed => "mixed",
    }
}

/// The interior mixed equilibrium of the classical game, when there is one.
/// Each player mixes so the opponent is indifferent, which gives
/// `p = q = -d_r / (d_g - d_r)`.
pub fn classical_mixed_ne(params: DilemmaParams) -> Option<NashEquilibriumRecord> {
    let (g, r) = (params.d_g(), params.d_r());
    if g == r {
        return None;
    }
    let p = -r / (g - r);
    if p <= 0.0 || p >= 1.0 {
        return None;
    }
    let profile = StrategyProfile::new(p, p).ok()?;
    verify_mixed_ne_default(params, profile).then(|| NashEquilibriumRecord {
        profile,
        payoffs: expected_payoff_classical(params, profile),
        kind: EquilibriumKind::Mixed,
    })
}

pub fn ne(
    params: DilemmaParams,
    gamma: Option<EntanglementAngle>,
) -> Result<Vec<ReportRow>, CliError> {
    let base = point_at(params, gamma);
    match gamma {
        None => {
            let matrix = build_dilemma_matrix(params);
            let code = classify_dilemma(params).kind.code();
            let mut records = enumerate_pure_ne(&matrix);
            records.extend(classical_mixed_ne(params));
            Ok(records
                .iter()
                .map(|r| equilibrium_row(base.clone(), code, &matrix, r))
                .collect())
        }
        Some(gamma) => {
            let report = classify_quantum_ne(params, gamma)?;
            let matrix = pure_quantum_matrix(params, gamma).matrix;
            Ok(report
                .equilibria
                .iter()
                .map(|r| equilibrium_row(base.clone(), report.phase.label(), &matrix, r))
                .collect())
        }
    }
}

struct Deltas {
    cells: String,
    first: f64,
    second: f64,
}

impl Deltas {
    fn new(
        matrix: &PayoffMatrix2x2,
        cells: [(Action, Action); 2],
        pairs: (DeviationLossPair, DeviationLossPair),
    ) -> Self {
        let names: Vec<String> = cells
            .iter()
            .map(|&(r, c)| cell_name(matrix, r, c))
            .collect();
        Self {
            cells: names.join(";"),
            first: pairs.0.product,
            second: pairs.1.product,
        }
    }
}

fn classical_rde(params: DilemmaParams) -> Result<(RdeOutcome, Option<Deltas>), CliError> {
    let matrix = build_dilemma_matrix(params);
    let deltas = match classify_dilemma(params).kind {
        DilemmaKind::Chicken => Some(Deltas::new(
            &matrix,
            [(First, Second), (Second, First)],
            deviation_losses_asymmetric(&matrix)?,
        )),
        DilemmaKind::StagHunt => Some(Deltas::new(
            &matrix,
            [(First, First), (Second, Second)],
            deviation_losses_symmetric(&matrix)?,
        )),
        DilemmaKind::PrisonersDilemma | DilemmaKind::Trivial => None,
    };
    Ok((rde_classical(params)?, deltas))
}

fn quantum_rde(
    params: DilemmaParams,
    gamma: EntanglementAngle,
) -> Result<(RdeOutcome, Option<Deltas>), CliError> {
    let outcome = rde_quantum(params, gamma)?;
    let matrix = pure_quantum_matrix(params, gamma).matrix;
    let deltas = match phase_of(params, gamma) {
        Some(phase @ MultiEquilibriumPhase::Transitional) => Some(Deltas::new(
            &matrix,
            [(Second, First), (First, Second)],
            deviation_losses_quantum(params, gamma, phase)?,
        )),
        Some(phase @ MultiEquilibriumPhase::Coexistence) => Some(Deltas::new(
            &matrix,
            [(First, First), (Second, Second)],
            deviation_losses_quantum(params, gamma, phase)?,
        )),
        None => None,
    };
    Ok((outcome, deltas))
}

pub fn rde(params: DilemmaParams, gamma: Option<EntanglementAngle>) -> Result<ReportRow, CliError> {
    let (outcome, deltas, regime, labels) = match gamma {
        None => {
            let (o, d) = classical_rde(params)?;
            (
                o,
                d,
                classify_dilemma(params).kind.code(),
                build_dilemma_matrix(params),
            )
        }
        Some(g) => {
            let (o, d) = quantum_rde(params, g)?;
            let phase = classify_quantum_ne(params, g)?.phase.label();
            (o, d, phase, pure_quantum_matrix(params, g).matrix)
        }
    };
    let selection = match outcome.cell() {
        Some((r, c)) => cell_name(&labels, r, c),
        None => "mixed".to_string(),
    };
    let mut row = point_at(params, gamma)
        .with("regime", Value::text(regime))
        .with("kind", Value::text(kind_label(outcome.kind)))
        .with("selection", Value::text(selection))
        .with("p", Value::num(outcome.profile.p()))
        .with("q", Value::num(outcome.profile.q()))
        .with("payoff_a", Value::num(outcome.payoffs.a))
        .with("payoff_b", Value::num(outcome.payoffs.b))
        .with(
            "delta_cells",
            deltas
                .as_ref()
                .map_or(Value::Null, |d| Value::text(d.cells.clone())),
        )
        .with("delta_1", Value::opt(deltas.as_ref().map(|d| d.first)))
        .with("delta_2", Value::opt(deltas.as_ref().map(|d| d.second)));
    let th = gamma.map(|_| thresholds(params));
    row.push("gamma1", Value::opt(th.and_then(|t| t.gamma1)));
    row.push("gamma2", Value::opt(th.and_then(|t| t.gamma2)));
    row.push("gamma_star", Value::opt(th.and_then(|t| t.gamma_star)));
    Ok(row)
}

pub fn sensitivity(params: DilemmaParams, gamma: EntanglementAngle) -> Result<ReportRow, CliError> {
    let s = sensitivity_indices(params, gamma)?;
    let c = sensitivity_critical_angles(params)?;
    Ok(point_at(params, Some(gamma))
        .with("p_star", Value::num(s.p_star))
        .with("dp_ddg", Value::num(s.partials.d_g))
        .with("dp_ddr", Value::num(s.partials.d_r))
        .with("dp_dgamma", Value::num(s.partials.gamma))
        .with("s_dg", Value::num(s.index_dg))
        .with("s_dr", Value::num(s.index_dr))
        .with("s_gamma", Value::num(s.index_gamma))
        .with("semi_elasticity_gamma", Value::num(s.semi_elasticity_gamma))
        .with("gamma_g", Value::num(c.gamma_g))
        .with("gamma_r", Value::num(c.gamma_r)))
}

pub const ORACLE_BOUND: f64 = 1e-12;
pub const ORACLE_RANDOM_POINTS: usize = 1000;

fn axis(n: usize, hi: f64) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| (hi * i as f64 / (n - 1) as f64).min(hi))
}

/// Compares `|amplitude|^2` of the state-vector pipeline with the closed-form
/// distribution on a `grid^3` lattice plus seeded random points.
pub fn oracle_check(grid: usize, seed: u64, tampered: bool) -> Result<Outcome, CliError> {
    if grid < 2 {
        return Err(CliError::Usage(format!(
            "--grid must be at least 2, got {grid}"
        )));
    }
    let convention = if tampered {
        GateConvention::SigmaX
    } else {
        GateConvention::SigmaY
    };
    let mut points = Vec::with_capacity(grid.pow(3) + ORACLE_RANDOM_POINTS);
    for p in axis(grid, 1.0) {
        for q in axis(grid, 1.0) {
            for y in axis(grid, FRAC_PI_2) {
                points.push((p, q, y));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ORACLE_RANDOM_POINTS {
        points.push((
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=FRAC_PI_2),
        ));
    }

    let mut worst = [0.0f64; 4];
    let mut norm = 0.0f64;
    for &(p, q, y) in &points {
        let (p, q, y) = (
            QuantumStrategyParam::new(p)?,
            QuantumStrategyParam::new(q)?,
            EntanglementAngle::new(y)?,
        );
        let sim = final_state_with(p, q, y, convention).probabilities();
        let closed = joint_distribution(p, q, y);
        for (w, (a, b)) in worst.iter_mut().zip(sim.iter().zip(closed.as_array())) {
            *w = w.max((a - b).abs());
        }
        let sim_sum: f64 = sim.iter().sum();
        norm = norm
            .max((sim_sum - 1.0).abs())
            .max((closed.sum() - 1.0).abs());
    }

    let names = ["eps1", "eps2", "eps3", "eps4", "normalization"];
    let values = [worst[0], worst[1], worst[2], worst[3], norm];
    let rows: Vec<ReportRow> = names
        .iter()
        .zip(values)
        .map(|(name, v)| {
            ReportRow::new()
                .with("check", Value::text(*name))
                .with(
                    "gate",
                    Value::text(if tampered { "sigma_x" } else { "sigma_y" }),
                )
                .with("points", Value::num(points.len() as f64))
                .with("max_deviation", Value::num(v))
                .with("bound", Value::num(ORACLE_BOUND))
                .with(
                    "status",
                    Value::text(if v <= ORACLE_BOUND { "PASS" } else { "FAIL" }),
                )
        })
        .collect();
    let passed = values.iter().all(|&v| v <= ORACLE_BOUND);
    Ok(Outcome { rows, passed })
}
