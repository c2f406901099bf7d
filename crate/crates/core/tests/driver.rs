//! Growth loops on small molecules and the invariants every record keeps.

mod common;

use common::*;
use vqe_core::driver::*;
use vqe_core::optimizer::{group_gradients, minimize, pool_gradients, prepare_state, Ansatz};
use vqe_core::record::{RunRecord, Termination};
use vqe_core::*;

/// Monotone energies, variational bound, exit rule and resource tallies.
fn check_invariants(rec: &RunRecord, epsilon: Option<f64>) {
    let mut prev = rec.e_hf;
    let mut elements = Vec::new();
    let mut slots = Vec::new();
    for it in &rec.iterations {
        assert!(it.energy <= prev + MONOTONE_SLACK, "m={} rose from {prev} to {}", it.m, it.energy);
        assert!(it.energy >= rec.e_fci - 1e-10, "m={} below the exact energy", it.m);
        for c in &it.chosen {
            elements.push(c.generator().unwrap());
            slots.push(c.slot);
        }
        assert_eq!(ansatz_resources(&elements, Some(&slots)), (it.n_cnots, it.n_params));
        prev = it.energy;
    }
    if let (Termination::EpsilonReached, Some(eps)) = (rec.termination, epsilon) {
        assert!(rec.final_delta_e.unwrap() < eps);
    }
}

#[test]
fn h2_iqeb_reaches_exact_energy() {
    let p = problem("h2_0.735");
    let rec = iqeb_run(&p, &GrowthConfig::iqeb(1e-8)).unwrap();
    assert_eq!(rec.termination, Termination::EpsilonReached);
    assert!(rec.iterations.len() <= 4);
    assert!(rec.final_error().abs() <= 1e-8);
    check_invariants(&rec, Some(1e-8));
    assert!((replay_energy(&p, &rec).unwrap() - rec.final_energy()).abs() < 1e-12);
}

#[test]
fn h2_stretched_runs_keep_invariants() {
    let p = problem("h2_2.000");
    for sc in [true, false] {
        let mut cfg = GrowthConfig::iqeb(1e-8);
        cfg.spin_complement_append = sc;
        let rec = iqeb_run(&p, &cfg).unwrap();
        check_invariants(&rec, Some(1e-8));
        assert!(rec.final_error() < 1e-6);
    }
    for kind in [PoolKind::Qubit, PoolKind::Fermionic, PoolKind::FermionicSpinComplementPairs, PoolKind::PauliExponential] {
        let rec = gradient_greedy_run(&p, &GrowthConfig::greedy(kind, 1e-6), "greedy").unwrap();
        check_invariants(&rec, Some(1e-6));
        assert!(rec.final_error() < 1e-6, "{kind:?}: {}", rec.final_error());
    }
}

#[test]
fn pair_pool_uses_one_parameter_per_iteration() {
    let p = problem("lih_1.546");
    let mut cfg = GrowthConfig::greedy(PoolKind::FermionicSpinComplementPairs, 1e-6);
    cfg.max_iterations = 6;
    let rec = gradient_greedy_run(&p, &cfg, "adapt").unwrap();
    check_invariants(&rec, None);
    for it in &rec.iterations {
        assert_eq!(it.n_params, it.m);
    }
}

#[test]
fn lih_iqeb_bookkeeping_and_selection() {
    let p = problem("lih_1.546");
    let mut cfg = GrowthConfig::iqeb(1e-6);
    cfg.max_iterations = 4;
    let rec = iqeb_run(&p, &cfg).unwrap();
    check_invariants(&rec, None);
    assert!((replay_energy(&p, &rec).unwrap() - rec.final_energy()).abs() < 1e-10);

    // every complemented pick adds exactly one extra parameter
    let mut extra = 0;
    for it in &rec.iterations {
        let first = it.chosen[0].generator().unwrap();
        extra += usize::from(!first.is_self_complement());
        assert_eq!(it.n_params - it.m, extra);
        assert!(it.n_params <= 2 * it.m);
    }

    // the chosen ΔE beats the largest-gradient candidate's, rebuilt independently
    let pool = ExcitationPool::build(PoolKind::Qubit, p.n_qubits).unwrap();
    let mut a = Ansatz::new(p.n_qubits, p.reference).unwrap();
    let mut theta = Vec::new();
    let mut e_prev = p.e_hf;
    for it in &rec.iterations {
        let psi = prepare_state(&a, &theta).unwrap();
        let grads = group_gradients(&pool, &pool_gradients(&psi, &p.compiled, &pool).unwrap());
        let top = (0..grads.len()).fold(0, |b, i| if grads[i].abs() > grads[b].abs() { i } else { b });
        let mut cand = a.clone();
        cand.push(pool.elements()[top].clone()).unwrap();
        let mut t = theta.clone();
        t.push(0.0);
        let greedy = minimize(&cand, &t, &p.compiled, &cfg.optimizer).unwrap();
        assert!(it.delta_e >= e_prev - greedy.energy - 1e-9, "m={}", it.m);
        assert!((it.max_gradient - grads[top].abs()).abs() < 1e-9);

        for c in &it.chosen {
            a.push_shared(c.generator().unwrap(), c.slot).unwrap();
        }
        let start: Vec<f64> = (0..a.n_params()).map(|s| theta.get(s).copied().unwrap_or(0.0)).collect();
        theta = minimize(&a, &start, &p.compiled, &cfg.optimizer).unwrap().theta;
        e_prev = it.energy;
    }
}

#[test]
fn target_error_stops_early() {
    let p = problem("h2_1.500");
    let mut cfg = GrowthConfig::greedy(PoolKind::Fermionic, 1e-10);
    cfg.target_error = Some(1e-3);
    let rec = gradient_greedy_run(&p, &cfg, "greedy").unwrap();
    assert_eq!(rec.termination, Termination::TargetErrorReached);
    assert!(rec.final_error() <= 1e-3);
}

#[test]
fn invalid_configs_are_rejected() {
    let p = problem("h2_0.735");
    let mut cfg = GrowthConfig::iqeb(1e-6);
    cfg.n = 0;
    assert!(matches!(iqeb_run(&p, &cfg), Err(Error::InvalidArgument(_))));
    assert!(gradient_greedy_run(&p, &GrowthConfig::greedy(PoolKind::Qubit, -1.0), "x").is_err());
}

#[test]
fn h2_uccsd_is_exact_with_three_parameters() {
    let p = problem("h2_0.735");
    let u = uccsd_baseline(&p, &Default::default()).unwrap();
    assert_eq!(u.parameter_count, 3);
    assert!((u.energy - p.e_fci).abs() <= 1e-6);
    let rec = uccsd_record(&p, &Default::default()).unwrap();
    assert_eq!(rec.termination, Termination::Optimized);
    assert!((replay_energy(&p, &rec).unwrap() - u.energy).abs() < 1e-12);
}

#[test]
fn records_round_trip_through_json_and_csv() {
    let p = problem("h2_2.000");
    let rec = iqeb_run(&p, &GrowthConfig::iqeb(1e-8)).unwrap().rounded();
    let back = RunRecord::from_json(&rec.to_json()).unwrap();
    assert_eq!(back, rec);
    let rows = RunRecord::iterations_from_csv(&rec.to_csv()).unwrap();
    assert_eq!(rows, rec.iterations);
}

#[test]
fn rounded_records_keep_tight_thresholds() {
    let p = problem("h2_0.735");
    let rec = iqeb_run(&p, &GrowthConfig::iqeb(1e-8)).unwrap();
    let r = rec.clone().rounded();
    assert!((r.final_energy() - rec.final_energy()).abs() < 1e-10);
    assert!((r.e_fci - rec.e_fci).abs() < 1e-10);
}
