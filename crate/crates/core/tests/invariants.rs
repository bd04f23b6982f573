//! Property checks over the public API. Counted draws use a seeded ChaCha
//! stream so failures reproduce; open-ended properties use proptest.

use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use qrde::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use Action::{First, Second};

fn params(g: f64, r: f64) -> DilemmaParams {
    DilemmaParams::new(g, r).unwrap()
}

fn angle(x: f64) -> EntanglementAngle {
    EntanglementAngle::new(x).unwrap()
}

fn t(x: f64) -> QuantumStrategyParam {
    QuantumStrategyParam::new(x).unwrap()
}

fn profile(p: f64, q: f64) -> StrategyProfile {
    StrategyProfile::new(p, q).unwrap()
}

fn strength() -> impl Strategy<Value = f64> {
    -1.0..=1.0f64
}

fn prob() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn gamma() -> impl Strategy<Value = f64> {
    0.0..=FRAC_PI_2
}

/// `(d_g, d_r)` with both strengths positive and at least `gap` apart.
fn ordered_pd(rng: &mut ChaCha8Rng, gap: f64) -> (f64, f64) {
    loop {
        let a: f64 = rng.random_range(0.01..1.0);
        let b: f64 = rng.random_range(0.01..1.0);
        if (a - b).abs() >= gap {
            return (a.max(b), a.min(b));
        }
    }
}

fn in_interval(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..=hi)
}

proptest! {
    #[test]
    fn classical_symmetry(g in strength(), r in strength(), p in prob(), q in prob()) {
        let pr = params(g, r);
        let ab = expected_payoff_classical(pr, profile(p, q));
        let ba = expected_payoff_classical(pr, profile(q, p));
        prop_assert!((ab.a - ba.b).abs() <= 1e-12);
    }

    #[test]
    fn classical_bilinearity(g in strength(), r in strength(), p in prob(), q in prob(), h in 0.0..0.5f64) {
        let pr = params(g, r);
        let pay = |p: f64, q: f64| expected_payoff_classical(pr, profile(p, q)).a;
        let (p0, p2) = ((p - h).max(0.0), (p + h).min(1.0));
        let pm = (p0 + p2) / 2.0;
        prop_assert!((pay(p0, q) - 2.0 * pay(pm, q) + pay(p2, q)).abs() <= 1e-12);
        let (q0, q2) = ((q - h).max(0.0), (q + h).min(1.0));
        let qm = (q0 + q2) / 2.0;
        prop_assert!((pay(p, q0) - 2.0 * pay(p, qm) + pay(p, q2)).abs() <= 1e-12);
    }

    #[test]
    fn classical_matrix_consistency(g in strength(), r in strength()) {
        let pr = params(g, r);
        let m = build_dilemma_matrix(pr);
        for row in Action::BOTH {
            for col in Action::BOTH {
                prop_assert_eq!(
                    expected_payoff_classical(pr, StrategyProfile::pure(row, col)),
                    m.cell(row, col)
                );
            }
        }
    }

    #[test]
    fn classification_is_total(g in strength(), r in strength()) {
        let class = classify_dilemma(params(g, r));
        let expected = match (g > 0.0, r > 0.0, g < 0.0, r < 0.0) {
            (true, true, _, _) => Some(DilemmaKind::PrisonersDilemma),
            (true, _, _, true) => Some(DilemmaKind::Chicken),
            (_, true, true, _) => Some(DilemmaKind::StagHunt),
            (_, _, true, true) => Some(DilemmaKind::Trivial),
            _ => None,
        };
        if let Some(kind) = expected {
            prop_assert_eq!(class.kind, kind);
            prop_assert!(!class.boundary);
        } else {
            prop_assert!(class.boundary);
        }
    }

    #[test]
    fn scaling_preserves_selection(g in 0.05..1.0f64, r in 0.05..1.0f64, k in 0.1..10.0f64) {
        // stag hunt with both pure equilibria
        let m = build_dilemma_matrix(params(-g, r));
        let scaled = m.scaled(k);
        let (f, s) = deviation_losses_symmetric(&m).unwrap();
        let (fk, sk) = deviation_losses_symmetric(&scaled).unwrap();
        prop_assert!((fk.product - k * k * f.product).abs() <= 1e-12 * (1.0 + k * k));
        prop_assert!((sk.product - k * k * s.product).abs() <= 1e-12 * (1.0 + k * k));
        let base = select_rde_symmetric(&m).unwrap();
        let other = select_rde_symmetric(&scaled).unwrap();
        if (f.product - s.product).abs() > 1e-6 {
            prop_assert_eq!(base.cell(), other.cell());
        }
    }

    #[test]
    fn scaling_preserves_mixing(g in 0.05..1.0f64, r in -1.0..-0.05f64, k in 0.1..10.0f64) {
        // chicken always ties, so the mixed profile is compared directly
        let m = build_dilemma_matrix(params(g, r));
        let base = select_rde_asymmetric(&m).unwrap();
        let other = select_rde_asymmetric(&m.scaled(k)).unwrap();
        prop_assert!((base.profile.p() - other.profile.p()).abs() <= 1e-12);
        prop_assert!((base.profile.q() - other.profile.q()).abs() <= 1e-12);
    }

    #[test]
    fn mixing_in_unit_interval(g in 0.0..1.0f64, r in -1.0..0.0f64) {
        let m = build_dilemma_matrix(params(g, r));
        if let Ok(out) = select_rde_asymmetric(&m) {
            prop_assert!((0.0..=1.0).contains(&out.profile.p()));
            prop_assert!((0.0..=1.0).contains(&out.profile.q()));
        }
    }

    #[test]
    fn label_swap_equivariance(g in -1.0..-0.01f64, r in 0.01..1.0f64) {
        let m = build_dilemma_matrix(params(g, r));
        let base = select_rde_symmetric(&m).unwrap();
        let swapped = select_rde_symmetric(&m.swap_actions()).unwrap();
        match base.cell() {
            Some((a, b)) => prop_assert_eq!(swapped.cell(), Some((a.other(), b.other()))),
            None => {
                prop_assert!((swapped.profile.p() - (1.0 - base.profile.p())).abs() <= 1e-12);
                prop_assert!((swapped.profile.q() - (1.0 - base.profile.q())).abs() <= 1e-12);
            }
        }
        prop_assert_eq!(base.payoffs, swapped.payoffs);
    }

    #[test]
    fn strategy_operators_are_unitary(x in prob(), y in gamma()) {
        prop_assert!(strategy_operator(t(x)).unitarity_defect() <= 1e-12);
        prop_assert!(entangling_gate(angle(y)).unitarity_defect() <= 1e-12);
    }

    #[test]
    fn state_vector_matches_closed_form(p in prob(), q in prob(), y in gamma()) {
        let probs = final_state(t(p), t(q), angle(y)).probabilities();
        let closed = joint_distribution(t(p), t(q), angle(y)).as_array();
        for (a, b) in probs.iter().zip(closed) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert!((closed.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn quantum_payoff_is_weighted_table(g in strength(), r in strength(), p in prob(), q in prob(), y in gamma()) {
        let pr = params(g, r);
        let closed = expected_payoff_quantum(pr, t(p), t(q), angle(y));
        let weighted = joint_distribution(t(p), t(q), angle(y)).weigh(&build_dilemma_matrix(pr));
        prop_assert!((closed.a - weighted.a).abs() <= 1e-12);
        prop_assert!((closed.b - weighted.b).abs() <= 1e-12);
    }

    #[test]
    fn entanglement_term_is_antisymmetric(g in strength(), r in strength(), p in prob(), q in prob(), y in gamma()) {
        let pr = params(g, r);
        let on = expected_payoff_quantum(pr, t(p), t(q), angle(y));
        let off = expected_payoff_quantum(pr, t(p), t(q), EntanglementAngle::SEPARABLE);
        prop_assert!(((on.a - off.a) + (on.b - off.b)).abs() <= 1e-12);
    }

    #[test]
    fn classical_reduction(g in strength(), r in strength(), p in prob(), q in prob()) {
        let pr = params(g, r);
        let quantum = expected_payoff_quantum(pr, t(p), t(q), EntanglementAngle::SEPARABLE);
        let classical = expected_payoff_classical(pr, profile(p, q));
        prop_assert!((quantum.a - classical.a).abs() <= 1e-12);
        prop_assert!((quantum.b - classical.b).abs() <= 1e-12);
    }
}

#[test]
fn pure_enumeration_matches_mixed_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let pr = params(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        let listed: Vec<_> = enumerate_pure_ne(&build_dilemma_matrix(pr))
            .iter()
            .filter_map(|r| r.cell())
            .collect();
        for row in Action::BOTH {
            for col in Action::BOTH {
                let certified = verify_mixed_ne(pr, StrategyProfile::pure(row, col), 0.0);
                assert_eq!(
                    listed.contains(&(row, col)),
                    certified,
                    "{pr:?} {row:?} {col:?}"
                );
            }
        }
    }
}

#[test]
fn chicken_specialization_matches_generic() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let pr = params(
            rng.random_range(0.001..=1.0),
            rng.random_range(-1.0..-0.001),
        );
        let special = rde_chicken(pr).unwrap();
        let generic = select_rde_asymmetric(&build_dilemma_matrix(pr)).unwrap();
        assert!((special.profile.p() - generic.profile.p()).abs() <= 1e-12);
        assert!((special.profile.q() - generic.profile.q()).abs() <= 1e-12);
    }
}

#[test]
fn staghunt_specialization_matches_generic() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10_000 {
        let pr = params(
            rng.random_range(-1.0..-0.001),
            rng.random_range(0.001..=1.0),
        );
        let special = rde_staghunt(pr).unwrap();
        let generic = select_rde_symmetric(&build_dilemma_matrix(pr)).unwrap();
        assert_eq!(special.cell(), generic.cell());
        assert!((special.profile.p() - generic.profile.p()).abs() <= 1e-12);
        assert!((special.profile.q() - generic.profile.q()).abs() <= 1e-12);
    }
}

/// Best-response check for a pure quantum cell against 1001 deviations of
/// each player, with payoffs taken from the state-vector simulation.
fn survives_grid(pr: DilemmaParams, y: EntanglementAngle, row: Action, col: Action) -> bool {
    let m = build_dilemma_matrix(pr);
    let pay = |p: f64, q: f64| {
        let probs = final_state(t(p), t(q), y).probabilities();
        let weights = [
            (First, First),
            (First, Second),
            (Second, First),
            (Second, Second),
        ];
        weights
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

#[test]
fn quantum_equilibria_certified_by_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let (g, r) = ordered_pd(&mut rng, 0.05);
        let (g, r) = if rng.random_bool(0.5) { (g, r) } else { (r, g) };
        let pr = params(g, r);
        let th = thresholds(pr);
        let (lo, hi) = {
            let (a, b) = (th.gamma1.unwrap(), th.gamma2.unwrap());
            (a.min(b), a.max(b))
        };
        // one angle strictly inside each of the three intervals
        for y in [lo / 2.0, (lo + hi) / 2.0, (hi + FRAC_PI_2) / 2.0] {
            let y = angle(y);
            let listed = classify_quantum_ne(pr, y).unwrap().cells();
            for row in Action::BOTH {
                for col in Action::BOTH {
                    assert_eq!(
                        listed.contains(&(row, col)),
                        survives_grid(pr, y, row, col),
                        "{pr:?} {y:?} {row:?} {col:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn transitional_matches_generic_selector() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..10_000 {
        let (g, r) = ordered_pd(&mut rng, 1e-3);
        let pr = params(g, r);
        let (lo, hi) = MultiEquilibriumPhase::Transitional.interval(pr).unwrap();
        let y = angle(in_interval(&mut rng, lo, hi));
        let closed = rde_transitional(pr, y).unwrap();
        let generic = select_rde_asymmetric(&pure_quantum_matrix(pr, y).matrix).unwrap();
        assert!(generic.is_mixed());
        assert!((closed.profile.p() - generic.profile.p()).abs() <= 1e-12);
        assert!((closed.profile.q() - generic.profile.q()).abs() <= 1e-12);
    }
}

#[test]
fn coexistence_matches_generic_selector() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10_000 {
        let (r, g) = ordered_pd(&mut rng, 1e-3);
        let pr = params(g, r);
        let (lo, hi) = MultiEquilibriumPhase::Coexistence.interval(pr).unwrap();
        let y = angle(in_interval(&mut rng, lo, hi));
        let closed = rde_coexistence(pr, y).unwrap();
        let generic = select_rde_symmetric(&pure_quantum_matrix(pr, y).matrix).unwrap();
        assert_eq!(closed.cell(), generic.cell());
        assert!((closed.profile.p() - generic.profile.p()).abs() <= 1e-12);
        assert!((closed.profile.q() - generic.profile.q()).abs() <= 1e-12);
    }
}

/// `p*` written out from its definition, independent of the crate.
fn p_star(g: f64, r: f64, y: f64) -> f64 {
    ((1.0 + g + r) * y.sin().powi(2) - r) / (g - r)
}

fn central(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-6;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[test]
fn partials_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let (g, r) = ordered_pd(&mut rng, 0.05);
        let pr = params(g, r);
        let (lo, hi) = MultiEquilibriumPhase::Transitional.interval(pr).unwrap();
        let y = in_interval(&mut rng, lo, hi);
        let d = sensitivity_partials(pr, angle(y)).unwrap();
        let fd = [
            (d.d_g, central(|v| p_star(v, r, y), g)),
            (d.d_r, central(|v| p_star(g, v, y), r)),
            (d.gamma, central(|v| p_star(g, r, v), y)),
        ];
        for (analytic, numeric) in fd {
            // relative to the derivative's size, floored at 1 so that
            // near-zero partials are compared absolutely
            let err = (analytic - numeric).abs() / analytic.abs().max(1.0);
            assert!(err <= 1e-6, "{pr:?} {y} {analytic} {numeric}");
        }
    }
}

#[test]
fn critical_angles_bracket_sign_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..100 {
        let (g, r) = ordered_pd(&mut rng, 0.05);
        let pr = params(g, r);
        let c = sensitivity_critical_angles(pr).unwrap();
        let at = |y: f64| sensitivity_partials(pr, angle(y)).unwrap();
        let h = 1e-4;
        assert!(at(c.gamma_g - h).d_g > 0.0 && at(c.gamma_g + h).d_g < 0.0);
        assert!(at(c.gamma_r - h).d_r < 0.0 && at(c.gamma_r + h).d_r > 0.0);
    }
}

#[test]
fn transitional_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..20 {
        let (g, r) = ordered_pd(&mut rng, 0.05);
        let pr = params(g, r);
        let (lo, hi) = MultiEquilibriumPhase::Transitional.interval(pr).unwrap();
        let grid: Vec<f64> = (0..=1000)
            .map(|i| lo + (hi - lo) * i as f64 / 1000.0)
            .collect();
        let ps: Vec<f64> = grid
            .iter()
            .map(|&y| rde_transitional(pr, angle(y)).unwrap().profile.p())
            .collect();
        assert!(ps.windows(2).all(|w| w[1] > w[0]));
        let pays: Vec<f64> = grid
            .iter()
            .map(|&y| rde_expected_payoff(pr, angle(y)).unwrap().a)
            .collect();
        assert!(pays.windows(2).all(|w| w[1] > w[0]));
        assert!(ps[0].abs() <= 1e-9 && (ps[1000] - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn coexistence_switch_is_single_and_at_gamma_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..100 {
        let (r, g) = ordered_pd(&mut rng, 0.05);
        let pr = params(g, r);
        let (lo, hi) = MultiEquilibriumPhase::Coexistence.interval(pr).unwrap();
        let gap = |y: f64| {
            let (qq, dd) =
                deviation_losses_quantum(pr, angle(y), MultiEquilibriumPhase::Coexistence).unwrap();
            qq.product - dd.product
        };
        let signs: Vec<bool> = (1..1000)
            .map(|i| gap(lo + (hi - lo) * i as f64 / 1000.0) > 0.0)
            .collect();
        assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 1);
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = (a + b) / 2.0;
            if gap(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let star = thresholds(pr).gamma_star().unwrap();
        assert!(((a + b) / 2.0 - star).abs() <= 1e-9);
    }
}

#[test]
fn situ_risk_matches_grid_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let (g, r) = ordered_pd(&mut rng, 0.05);
        for (pr, phase) in [
            (params(g, r), MultiEquilibriumPhase::Transitional),
            (params(r, g), MultiEquilibriumPhase::Coexistence),
        ] {
            let (lo, hi) = phase.interval(pr).unwrap();
            let y = angle(in_interval(&mut rng, lo, hi));
            let cells = match phase {
                MultiEquilibriumPhase::Transitional => [(Second, First), (First, Second)],
                MultiEquilibriumPhase::Coexistence => [(Second, Second), (First, First)],
            };
            for (row, col) in cells {
                let w = |a: Action| if a == First { 1.0 } else { 0.0 };
                let (p, q) = (w(row), w(col));
                let here = expected_payoff_quantum(pr, t(p), t(q), y);
                let (mut ra, mut rb) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
                for i in 0..=1000 {
                    let d = i as f64 / 1000.0;
                    ra = ra.max(here.a - expected_payoff_quantum(pr, t(p), t(d), y).a);
                    rb = rb.max(here.b - expected_payoff_quantum(pr, t(d), t(q), y).b);
                }
                let closed = situ_risk_at(pr, y, row, col);
                assert!((closed.risk_a - ra).abs() <= 1e-9 && (closed.risk_b - rb).abs() <= 1e-9);
            }
        }
    }
}
