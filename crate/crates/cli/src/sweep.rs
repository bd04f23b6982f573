//! Grid sweeps over `(d_g, d_r, gamma)`.
//!
//! Points are evaluated in parallel and collected in grid order: `d_g`
//! outermost, then `d_r`, then `gamma`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use rayon::prelude::*;

use qrde::*;
use std::result::Result;

use crate::commands;
use crate::report::{ReportRow, Value};
use crate::{angle_from, CliError};

/// `start:stop:steps`, or a single value (one step).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            steps: 1,
        }
    }

    /// Evenly spaced, both ends included; the last point is exactly `stop`.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }

    fn check(&self, name: &str, lo: f64, hi: f64) -> Result<(), CliError> {
        for (label, x) in [("start", self.start), ("stop", self.stop)] {
            if !(lo..=hi).contains(&x) {
                return Err(CliError::Usage(format!(
                    "{name} range {label} {x} is outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |part: &str| {
            part.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{part}` is not a finite number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Range::single(parse(x)?)),
            [a, b, n] => {
                let steps: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("`{n}` is not a step count"))?;
                if steps == 0 {
                    return Err("steps must be at least 1".into());
                }
                Ok(Range {
                    start: parse(a)?,
                    stop: parse(b)?,
                    steps,
                })
            }
            _ => Err(format!("`{s}` is neither VALUE nor START:STOP:STEPS")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Quantity {
    Class,
    Ne,
    Rde,
    Payoffs,
    Sensitivity,
    Thresholds,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Class,
        Quantity::Ne,
        Quantity::Rde,
        Quantity::Payoffs,
        Quantity::Sensitivity,
        Quantity::Thresholds,
    ];
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let value = self.to_possible_value().expect("no skipped variants");
        f.write_str(value.get_name())
    }
}

/// Validated sweep. Angles are stored in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    d_g: Vec<f64>,
    d_r: Vec<f64>,
    gamma: Option<Vec<EntanglementAngle>>,
    quantities: Vec<Quantity>,
}

impl SweepConfig {
    pub fn new(
        d_g: Range,
        d_r: Range,
        gamma: Option<Range>,
        degrees: bool,
        mut quantities: Vec<Quantity>,
    ) -> Result<Self, CliError> {
        d_g.check("--dg", -1.0, 1.0)?;
        d_r.check("--dr", -1.0, 1.0)?;
        let gamma = match gamma {
            Some(range) => {
                let hi = if degrees { 90.0 } else { FRAC_PI_2 };
                range.check("--gamma", 0.0, hi)?;
                let angles: Result<Vec<_>, _> = range
                    .points()
                    .into_iter()
                    .map(|g| angle_from(g, degrees))
                    .collect();
                Some(angles?)
            }
            None => None,
        };
        // column order follows the declaration order, not the flag order
        quantities.sort();
        quantities.dedup();
        Ok(Self {
            d_g: d_g.points(),
            d_r: d_r.points(),
            gamma,
            quantities,
        })
    }

    pub fn len(&self) -> usize {
        self.d_g.len() * self.d_r.len() * self.gamma.as_ref().map_or(1, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn grid(&self) -> Vec<(f64, f64, Option<EntanglementAngle>)> {
        let angles: Vec<Option<EntanglementAngle>> = match &self.gamma {
            Some(v) => v.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let mut out = Vec::with_capacity(self.len());
        for &g in &self.d_g {
            for &r in &self.d_r {
                for &y in &angles {
                    out.push((g, r, y));
                }
            }
        }
        out
    }
}

fn copy(row: &mut ReportRow, from: Option<&ReportRow>, pairs: &[(&'static str, &str)]) {
    for &(to, column) in pairs {
        let value = from
            .and_then(|r| r.get(column))
            .cloned()
            .unwrap_or(Value::Null);
        row.push(to, value);
    }
}

fn point_row(
    params: DilemmaParams,
    gamma: Option<EntanglementAngle>,
    quantities: &[Quantity],
) -> ReportRow {
    let mut row = ReportRow::new()
        .with("d_g", Value::num(params.d_g()))
        .with("d_r", Value::num(params.d_r()))
        .with("gamma", Value::opt(gamma.map(|g| g.radians())));
    for quantity in quantities {
        match quantity {
            Quantity::Class => {
                let class = classify_dilemma(params);
                row.push("class", Value::text(class.kind.code()));
                row.push("boundary", Value::Bool(class.boundary));
            }
            Quantity::Ne => {
                let rows = commands::ne(params, gamma).ok();
                let regime = rows
                    .as_ref()
                    .and_then(|r| r.first())
                    .and_then(|r| r.get("regime").cloned())
                    .unwrap_or(Value::Null);
                let names = rows.map_or(Value::Null, |rows| {
                    let names: Vec<String> = rows
                        .iter()
                        .map(|r| match r.get("ne") {
                            Some(Value::Text(s)) => s.clone(),
                            _ => "mixed".to_string(),
                        })
                        .collect();
                    Value::text(names.join(";"))
                });
                row.push("ne_regime", regime);
                row.push("ne", names);
            }
            Quantity::Rde => {
                let rde = commands::rde(params, gamma).ok();
                copy(
                    &mut row,
                    rde.as_ref(),
                    &[
                        ("rde_selection", "selection"),
                        ("rde_p", "p"),
                        ("rde_q", "q"),
                        ("rde_payoff_a", "payoff_a"),
                        ("rde_payoff_b", "payoff_b"),
                    ],
                );
            }
            Quantity::Payoffs => {
                let m = pure_quantum_matrix(params, gamma.unwrap_or(EntanglementAngle::SEPARABLE));
                row.push("pi_q", Value::num(m.pi_q));
                row.push("pi_d", Value::num(m.pi_d));
            }
            Quantity::Sensitivity => {
                let s = gamma.and_then(|g| commands::sensitivity(params, g).ok());
                copy(
                    &mut row,
                    s.as_ref(),
                    &[
                        ("p_star", "p_star"),
                        ("s_dg", "s_dg"),
                        ("s_dr", "s_dr"),
                        ("s_gamma", "s_gamma"),
                        ("semi_elasticity_gamma", "semi_elasticity_gamma"),
                    ],
                );
            }
            Quantity::Thresholds => {
                let t = thresholds(params);
                row.push("gamma1", Value::opt(t.gamma1));
                row.push("gamma2", Value::opt(t.gamma2));
                row.push("gamma_star", Value::opt(t.gamma_star));
            }
        }
    }
    row
}

/// Quantities that are undefined at a point (for example sensitivity outside
/// the transitional phase) are reported as missing values.
pub fn run(config: &SweepConfig) -> Vec<ReportRow> {
    config
        .grid()
        .into_par_iter()
        .map(|(g, r, y)| {
            let params = DilemmaParams::new(g, r).expect("validated range");
            point_row(params, y, &config.quantities)
        })
        .collect()
}
