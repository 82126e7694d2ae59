//! Acceptance suite: one PASS/FAIL line per primary criterion.

use std::time::Instant;

use orlicz_radius::bounds::{evaluate_bound, BoundId, Instance, Variant, DEFAULT_TOL};
use orlicz_radius::harness::{random_instance, run_campaign, CampaignConfig, ExampleFixtures, WeightMode};
use orlicz_radius::oracle::{oracle_a_numerical_radius, oracle_a_seminorm, OracleConfig};
use orlicz_radius::orlicz::{complementary, young_grid_check, DensityTable};
use orlicz_radius::{a_numerical_radius, a_seminorm, ComplexMatrix, OrliczFn, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn criterion(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    let outcome = Outcome {
        name,
        passed,
        detail: format!("{detail} [{:.2}s]", start.elapsed().as_secs_f64()),
    };
    println!(
        "{} {}: {}",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.name,
        outcome.detail
    );
    outcome
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn example_one() -> (bool, String) {
    let start = Instant::now();
    let fx = ExampleFixtures::default();
    let mut inst = Instance::with_identity(2).with("x", fx.t).with("y", fx.s);
    inst.n = 3;
    let sum2 = evaluate_bound(BoundId::Sum2, &inst, DEFAULT_TOL).unwrap();
    let hhnn = evaluate_bound(BoundId::Hhnn, &inst, DEFAULT_TOL).unwrap();
    let fast = start.elapsed().as_secs_f64() < 1.0;
    let ok = close(hhnn.rhs, 0.59375, 1e-9) && close(sum2.rhs, 0.5625, 1e-9) && close(sum2.lhs, 0.5625, 1e-9);
    (
        ok && fast,
        format!("hhnn rhs {:.12}, sum2 rhs {:.12}, w²(T+S) {:.12}", hhnn.rhs, sum2.rhs, sum2.lhs),
    )
}

fn example_two() -> (bool, String) {
    let start = Instant::now();
    let fx = ExampleFixtures::default();
    let identity = ComplexMatrix::identity(2);
    let mut inst = Instance::with_identity(2)
        .with("p", fx.a)
        .with("x", fx.b)
        .with("q", identity.clone())
        .with("r", fx.c)
        .with("y", fx.d)
        .with("s", identity);
    inst.alpha = 1.0;
    inst.n = 3;
    let report = evaluate_bound(BoundId::Kit28, &inst, DEFAULT_TOL).unwrap();
    let expected = (65.0 + 40.0 * 5f64.sqrt()) / 12.0;
    let fast = start.elapsed().as_secs_f64() < 1.0;
    let ok = close(report.rhs, expected, 1e-9) && close(report.lhs, 3.0, 1e-9);
    (
        ok && fast,
        format!("kit28 rhs {:.12} (expected {expected:.12}), w(AB+CD) {:.12}", report.rhs, report.lhs),
    )
}

fn soundness() -> (bool, String) {
    let cfg = CampaignConfig {
        lemma_ids: Vec::new(),
        n_instances: 10_000,
        seed: 2024,
        ..CampaignConfig::default()
    };
    let start = Instant::now();
    let report = run_campaign(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let unmet: usize = report.bounds.iter().map(|b| b.count - b.preconditions_met).sum();
    let worst = report
        .bounds
        .iter()
        .filter_map(|b| b.slack.as_ref().map(|s| (s.min_relative, b.id.as_str())))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    for b in &report.bounds {
        if let Some(v) = b.violations.first() {
            println!("  violation {}: seed {} slack {:e}", b.id, v.seed, v.report.slack);
        }
        if let Some(e) = b.errors.first() {
            println!("  error {}: seed {} {}", b.id, e.seed, e.message);
        }
    }
    let ok = report.is_clean() && unmet == 0 && secs < 600.0;
    (
        ok,
        format!(
            "{} bounds × {} instances, violations {}, errors {}, unmet preconditions {}, oracle checks {} (max gap {:.1e}), tightest relative slack {:.2e} ({}), {:.0}s",
            report.bounds.len(),
            cfg.n_instances,
            report.violation_count(),
            report.error_count(),
            unmet,
            report.oracle.checked,
            report.oracle.max_relative_gap,
            worst.0,
            worst.1,
            secs
        ),
    )
}

fn oracle_equivalence() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let cfg = OracleConfig::full();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let g = ComplexMatrix::random_gaussian(n, &mut rng);
        let mut a = g.cogram();
        let eps = 1e-3 * orlicz_radius::linalg::max_eigenvalue(&a);
        a = &a + &ComplexMatrix::identity(n).scale(eps);
        let w = Weight::new(a).unwrap();
        let x = ComplexMatrix::random_gaussian(n, &mut rng);
        let v = a_numerical_radius(&x, &w, 1e-12).unwrap();
        let ov = oracle_a_numerical_radius(&x, &w, &cfg, &mut rng).unwrap();
        let s = a_seminorm(&x, &w).unwrap();
        let os = oracle_a_seminorm(&x, &w, &cfg, &mut rng).unwrap();
        worst = worst.max((v - ov).abs() / v.max(1.0)).max((s - os).abs() / s.max(1.0));
    }
    (worst <= 1e-6, format!("100 instances, n ≤ 6, worst relative gap {worst:.2e}"))
}

fn coincidences() -> (bool, String) {
    let cfg = CampaignConfig::default();
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let mut inst = random_instance(&cfg, BoundId::Mz3, seed).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / 1f64.max(a.abs()).max(b.abs());
        let rhs = |id: BoundId, inst: &Instance| evaluate_bound(id, inst, DEFAULT_TOL).unwrap().rhs;

        inst.alpha = 0.5;
        worst = worst.max(rel(rhs(BoundId::Th1a, &inst), rhs(BoundId::Mz3, &inst)));
        inst.phi = OrliczFn::power(1.0);
        worst = worst.max(rel(rhs(BoundId::Ramm, &inst), rhs(BoundId::Mz4, &inst)));

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        inst.r = rng.random_range(1.0..=3.0);
        inst.alpha = rng.random_range(0.0..=1.0);
        inst.phi = OrliczFn::power(inst.r);
        worst = worst.max(rel(rhs(BoundId::Re02, &inst), rhs(BoundId::Ramm, &inst)));
        worst = worst.max(rel(rhs(BoundId::CccI, &inst), rhs(BoundId::Th2bI, &inst)));
        worst = worst.max(rel(rhs(BoundId::CccII, &inst), rhs(BoundId::Th2bII, &inst)));
    }
    (worst <= 1e-12, format!("5 identities × 100 instances, worst relative disagreement {worst:.2e}"))
}

/// Density table for `t^p/p` with nodes `t_i = u_i^{1/(p−1)}`, where the
/// density values `u_i` are graded cubically towards 0 so the interpolated
/// inverse `u^{1/(p−1)}` stays accurate near its singular end.
fn power_table(p: f64, u_max: f64, nodes: usize) -> DensityTable {
    let grid: Vec<f64> = (0..nodes)
        .map(|i| (u_max * (i as f64 / (nodes - 1) as f64).powi(3)).powf(1.0 / (p - 1.0)))
        .collect();
    DensityTable::from_fn(grid, |t| t.powf(p - 1.0)).unwrap()
}

fn orlicz_complement() -> (bool, String) {
    let mut details = Vec::new();
    let mut ok = true;
    for p in [1.5, 2.0, 3.0, 4.0] {
        let q = p / (p - 1.0);
        let phi = OrliczFn::table(power_table(p, 11.0, 60_001));
        let pair = complementary(&phi, 10.0, 1e-11).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=1000 {
            let s = 10.0 * k as f64 / 1000.0;
            let exact = s.powf(q) / q;
            worst = worst.max((pair.psi.eval(s) - exact).abs());
        }
        let young = young_grid_check(&pair, 10.0, 101);
        ok &= worst <= 1e-6 && young.is_none();
        details.push(format!("p={p}: max abs err {worst:.1e}, young {}", if young.is_none() { "ok" } else { "FAILED" }));
    }
    for p in [1.5, 2.0, 3.0, 4.0] {
        let pair = complementary(&OrliczFn::power_scaled(p), 10.0, 1e-11).unwrap();
        ok &= young_grid_check(&pair, 10.0, 101).is_none();
    }
    (ok, details.join("; "))
}

fn tightness() -> (bool, String) {
    let cfg = CampaignConfig {
        weight_mode: WeightMode::RandomPd,
        ..CampaignConfig::default()
    };
    let mut exceptions = 0;
    let mut worst = f64::INFINITY;
    for seed in 0..1000u64 {
        let inst = random_instance(&cfg, BoundId::Mz3, seed).unwrap();
        let mz3 = evaluate_bound(BoundId::Mz3, &inst, DEFAULT_TOL).unwrap().rhs;
        let mz4 = evaluate_bound(BoundId::Mz4, &inst, DEFAULT_TOL).unwrap().rhs;
        let scale = 1f64.max(mz3.abs()).max(mz4.abs());
        worst = worst.min((mz3 - mz4) / scale);
        if mz4 > mz3 + 1e-10 * scale {
            exceptions += 1;
        }
    }
    (
        exceptions == 0,
        format!("1000 instances, exceptions {exceptions}, smallest relative margin {worst:.2e}"),
    )
}

fn dra_fixture() -> (bool, String) {
    let one = ComplexMatrix::identity(1);
    let mut inst = Instance::with_identity(1)
        .with("x", one.clone())
        .with("w", one.clone())
        .with("y", one.clone())
        .with("z", one);
    inst.phi = OrliczFn::power(1.0);
    inst.variant = Variant::Literal;
    let literal = evaluate_bound(BoundId::Dra, &inst, DEFAULT_TOL).unwrap();
    inst.variant = Variant::Proof;
    let proof = evaluate_bound(BoundId::Dra, &inst, DEFAULT_TOL).unwrap();
    let ok = close(literal.lhs, 2.0, 1e-12)
        && close(literal.rhs, 1.0, 1e-12)
        && !literal.holds
        && close(proof.lhs, 1.0, 1e-12)
        && close(proof.rhs, 1.0, 1e-12)
        && proof.holds;
    (
        ok,
        format!(
            "literal lhs {} rhs {} holds={}; proof lhs {} rhs {} holds={}",
            literal.lhs, literal.rhs, literal.holds, proof.lhs, proof.rhs, proof.holds
        ),
    )
}

#[test]
fn primary_acceptance_criteria() {
    let outcomes = [
        criterion("example 1 (sum2 / hhnn)", example_one),
        criterion("example 2 (kit28)", example_two),
        criterion("dra discrepancy fixture", dra_fixture),
        criterion("coincidence identities", coincidences),
        criterion("orlicz complementary construction", orlicz_complement),
        criterion("tightness mz4 <= mz3", tightness),
        criterion("oracle equivalence", oracle_equivalence),
        criterion("soundness suite", soundness),
    ];
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
