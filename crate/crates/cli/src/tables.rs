//! Recomputes the reference tables (dilemma classes, quantum equilibrium
//! phases, sensitivity indices) and compares them with the printed values.
//!
//! Status per row is `PASS`, `FAIL`, or `DOCUMENTED-DEVIATION` for printed
//! values known to disagree with exact evaluation. A documented deviation
//! counts as a pass only when the recomputed value agrees with an independent
//! finite-difference oracle.

use std::f64::consts::PI;

use qrde::*;

use crate::commands::cell_name;
use crate::report::{round_sig, ReportRow, Value};
use crate::Outcome;

use Action::{First, Second};

type Cell = (Action, Action);
/// Angle with the equilibria printed for it.
type Listing = (f64, Vec<Cell>);

pub const PASS: &str = "PASS";
pub const FAIL: &str = "FAIL";
pub const DOCUMENTED_DEVIATION: &str = "DOCUMENTED-DEVIATION";

fn row(table: &str, item: String, computed: String, printed: String, status: &str) -> ReportRow {
    ReportRow::new()
        .with("table", Value::text(table))
        .with("item", Value::text(item))
        .with("computed", Value::text(computed))
        .with("printed", Value::text(printed))
        .with("status", Value::text(status))
}

fn status(ok: bool) -> &'static str {
    if ok {
        PASS
    } else {
        FAIL
    }
}

fn fmt_num(x: f64) -> String {
    round_sig(x).map_or_else(|| "nan".to_string(), |v| v.to_string())
}

fn params(g: f64, r: f64) -> DilemmaParams {
    DilemmaParams::new(g, r).expect("table parameters are in range")
}

fn describe(matrix: &PayoffMatrix2x2, cells: &[((Action, Action), Payoffs)]) -> String {
    let parts: Vec<String> = cells
        .iter()
        .map(|&((r, c), p)| {
            format!(
                "{}({} {})",
                cell_name(matrix, r, c),
                fmt_num(p.a),
                fmt_num(p.b)
            )
        })
        .collect();
    parts.join(";")
}

fn table2() -> Vec<ReportRow> {
    let cases: [(f64, f64, &str, Vec<Cell>); 3] = [
        (0.5, 0.5, "PD", vec![(Second, Second)]),
        (0.5, -0.5, "CH", vec![(Second, First), (First, Second)]),
        (-0.5, 0.5, "SH", vec![(Second, Second), (First, First)]),
    ];
    let mut rows = Vec::new();
    for (g, r, class, mut cells) in cases {
        let pr = params(g, r);
        let matrix = build_dilemma_matrix(pr);
        let computed_class = classify_dilemma(pr).kind.code();
        rows.push(row(
            "2",
            format!("class at d_g={g} d_r={r}"),
            computed_class.into(),
            class.into(),
            status(computed_class == class),
        ));

        // printed payoffs: (D,C) -> (1 + d_g, -d_r), (C,D) -> (-d_r, 1 + d_g)
        let printed_pay = |cell: (Action, Action)| match cell {
            (Second, Second) => Payoffs::new(0.0, 0.0),
            (First, First) => Payoffs::new(1.0, 1.0),
            (Second, First) => Payoffs::new(1.0 + g, -r),
            (First, Second) => Payoffs::new(-r, 1.0 + g),
        };
        cells.sort();
        let printed: Vec<_> = cells.iter().map(|&c| (c, printed_pay(c))).collect();
        let computed: Vec<_> = enumerate_pure_ne(&matrix)
            .iter()
            .filter_map(|ne| ne.cell().map(|c| (c, ne.payoffs)))
            .collect();
        rows.push(row(
            "2",
            format!("NE at d_g={g} d_r={r}"),
            describe(&matrix, &computed),
            describe(&matrix, &printed),
            status(computed == printed),
        ));
    }
    rows
}

/// Best response of each player against 1001 deviations in the
/// one-parameter family, with payoffs from the state-vector simulation.
pub fn certified_by_grid(
    pr: DilemmaParams,
    y: EntanglementAngle,
    row: Action,
    col: Action,
) -> bool {
    let m = build_dilemma_matrix(pr);
    let t = |x: f64| QuantumStrategyParam::new(x).expect("grid point in [0, 1]");
    let pay = |p: f64, q: f64| {
        let probs = final_state(t(p), t(q), y).probabilities();
        [
            (First, First),
            (First, Second),
            (Second, First),
            (Second, Second),
        ]
        .iter()
        .zip(probs)
        .fold((0.0, 0.0), |acc, (&(r, c), w)| {
            (acc.0 + w * m.a(r, c), acc.1 + w * m.b(r, c))
        })
    };
    let weight = |a: Action| if a == First { 1.0 } else { 0.0 };
    let (p, q) = (weight(row), weight(col));
    let here = pay(p, q);
    (0..=1000).all(|i| {
        let d = i as f64 / 1000.0;
        pay(d, q).0 <= here.0 + 1e-12 && pay(p, d).1 <= here.1 + 1e-12
    })
}

fn table5() -> Vec<ReportRow> {
    let dd = (Second, Second);
    let qq = (First, First);
    let dq = (Second, First);
    let qd = (First, Second);
    let cases: [(f64, f64, Vec<Listing>); 3] = [
        (
            0.9,
            0.2,
            vec![(0.15, vec![dd]), (0.5, vec![dq, qd]), (1.2, vec![qq])],
        ),
        (0.5, 0.5, vec![(0.3, vec![dd]), (1.0, vec![qq])]),
        (
            0.2,
            0.9,
            vec![(0.15, vec![dd]), (0.5, vec![dd, qq]), (1.2, vec![qq])],
        ),
    ];
    let mut rows = Vec::new();
    for (g, r, angles) in cases {
        let pr = params(g, r);
        for (y, mut printed) in angles {
            let angle = EntanglementAngle::new(y).expect("table angle in range");
            let matrix = pure_quantum_matrix(pr, angle).matrix;
            let report = classify_quantum_ne(pr, angle).expect("quantum regime");
            let listed = report.cells();
            printed.sort();
            let mut grid = Vec::new();
            for a in Action::BOTH {
                for b in Action::BOTH {
                    if certified_by_grid(pr, angle, a, b) {
                        grid.push((a, b));
                    }
                }
            }
            let names = |cells: &[(Action, Action)]| {
                let v: Vec<String> = cells
                    .iter()
                    .map(|&(a, b)| cell_name(&matrix, a, b))
                    .collect();
                v.join(";")
            };
            rows.push(row(
                "5",
                format!("NE at d_g={g} d_r={r} gamma={y} ({})", report.phase.label()),
                names(&listed),
                names(&printed),
                status(listed == printed && grid == printed),
            ));
        }
    }
    rows
}

/// `p*` from its definition, kept separate from the crate's closed forms.
fn p_star(g: f64, r: f64, y: f64) -> f64 {
    ((1.0 + g + r) * y.sin().powi(2) - r) / (g - r)
}

fn central(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-6;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[derive(Clone, Copy)]
enum Index {
    DGain,
    DRisk,
    GammaSemi,
}

fn table6() -> Vec<ReportRow> {
    let (g, r) = (0.9, 0.2);
    let pr = params(g, r);
    // (index, angle label, angle, printed, tolerance, documented deviation)
    let cases = [
        (Index::DGain, "pi/9", PI / 9.0, 1.029, 0.005, true),
        (Index::DGain, "pi/6", PI / 6.0, -0.593, 0.005, false),
        (Index::DRisk, "pi/6", PI / 6.0, -0.173, 0.001, true),
        (Index::DRisk, "pi/5", PI / 5.0, 0.037, 0.001, false),
        (Index::GammaSemi, "pi/6", PI / 6.0, 5.596, 0.01, false),
    ];
    cases
        .iter()
        .map(|&(index, label, y, printed, tol, documented)| {
            let report = sensitivity_indices(pr, EntanglementAngle::new(y).expect("in range"))
                .expect("transitional angle");
            let base = p_star(g, r, y);
            let (name, computed, oracle) = match index {
                Index::DGain => (
                    "S_dg",
                    report.index_dg,
                    central(|v| p_star(v, r, y), g) * g / base,
                ),
                Index::DRisk => (
                    "S_dr",
                    report.index_dr,
                    central(|v| p_star(g, v, y), r) * r / base,
                ),
                Index::GammaSemi => (
                    "(dp*/dgamma)/p*",
                    report.semi_elasticity_gamma,
                    central(|v| p_star(g, r, v), y) / base,
                ),
            };
            let oracle_ok = ((computed - oracle) / oracle).abs() <= 1e-6;
            let close = (computed - printed).abs() <= tol;
            let verdict = match (close, documented, oracle_ok) {
                (true, _, true) => PASS,
                (false, true, true) => DOCUMENTED_DEVIATION,
                _ => FAIL,
            };
            row(
                "6",
                format!("{name} at gamma={label}"),
                format!("{:.6}", computed),
                printed.to_string(),
                verdict,
            )
        })
        .collect()
}

pub fn run() -> Outcome {
    let mut rows = table2();
    rows.extend(table5());
    rows.extend(table6());
    let passed = rows
        .iter()
        .all(|r| !matches!(r.get("status"), Some(Value::Text(s)) if s == FAIL));
    Outcome { rows, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn status_of(rows: &[ReportRow], item_prefix: &str) -> String {
        let row = rows
            .iter()
            .find(|r| matches!(r.get("item"), Some(Value::Text(s)) if s.starts_with(item_prefix)))
            .unwrap();
        match row.get("status") {
            Some(Value::Text(s)) => s.clone(),
            _ => panic!(),
        }
    }

    #[test]
    fn every_row_passes() {
        let out = run();
        assert!(out.passed, "{:#?}", out.rows);
        assert_eq!(out.rows.len(), 6 + 8 + 5);
    }

    #[test]
    fn documented_deviations_are_flagged() {
        let rows = table6();
        assert_eq!(status_of(&rows, "S_dg at gamma=pi/9"), DOCUMENTED_DEVIATION);
        assert_eq!(status_of(&rows, "S_dr at gamma=pi/6"), DOCUMENTED_DEVIATION);
        assert_eq!(status_of(&rows, "S_dg at gamma=pi/6"), PASS);
    }
}
