mod common;

use common::*;
use dualblind::admm::{
    self, lagrangian_eval, run, split_objective, update_channel, update_signal, update_z_prox, AdmmConfig,
    AdmmState, BlindInstance, SplitProblem,
};
use dualblind::jrc::JrcInstance;
use dualblind::matkit::gram_condition;
use dualblind::regularizers::RegularizerSpec;
use dualblind::{Complex, ZMode};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn variant(i: usize) -> RegularizerSpec<f64> {
    match i {
        0 => RegularizerSpec::zero(),
        1 => RegularizerSpec::squared_frobenius(0.3),
        2 => RegularizerSpec::l1(0.2),
        3 => RegularizerSpec::frobenius_ball(2.0),
        _ => RegularizerSpec::power_ball(3.0),
    }
}

#[test]
fn scalar_updates_match_grid_search() {
    let cases = [
        (c(1.0, 0.5), c(0.8, -0.3), c(0.2, 0.1), c(-0.3, 0.4), 1.0, 2.0),
        (c(-0.4, 1.1), c(0.3, 0.9), c(-0.5, -0.2), c(0.1, 0.0), 0.5, 1.0),
        (c(0.0, 0.0), c(1.5, 0.0), c(0.7, -0.7), c(0.2, 0.2), 2.0, 0.5),
    ];
    for (y, x, z, mu, rho, w) in cases {
        let coupling = |u: Complex| (mu.conj() * (u - z)).re + 0.5 * rho * (u - z).norm_sqr();

        let g = update_channel(&scalar(y), &scalar(x), &scalar(z), &scalar(mu), rho, w).unwrap()[(0, 0)];
        let brute = grid_argmin(|u| 0.5 * w * (y - u * x).norm_sqr() + coupling(u), 2.5, 1e-3);
        assert!((g - brute).norm() <= 5e-3, "channel {g} vs {brute}");

        let s = update_signal(&scalar(x), &scalar(y), &scalar(z), &scalar(mu), rho, w).unwrap()[(0, 0)];
        let brute = grid_argmin(|u| 0.5 * w * (y - x * u).norm_sqr() + coupling(u), 2.5, 1e-3);
        assert!((s - brute).norm() <= 5e-3, "signal {s} vs {brute}");
    }
}

#[test]
fn scalar_prox_z_update_matches_grid_search() {
    let anchor = c(0.9, -0.6);
    let mu = c(0.4, 0.3);
    let rho = 1.5;
    for which in 0..5 {
        let spec = variant(which);
        let lambda = spec.weight;
        let z = update_z_prox(&scalar(anchor), &scalar(mu), &spec, lambda, rho)[(0, 0)];
        let f = |u: Complex| {
            lambda * spec.eval(&scalar(u)) - (mu.conj() * u).re + 0.5 * rho * (u - anchor).norm_sqr()
        };
        let brute = grid_argmin(f, 2.0, 1e-3);
        assert!((z - brute).norm() <= 5e-3, "{}: {z} vs {brute}", spec.name());
    }
}

fn lagrangian_oracle(y: &M, w: f64, state: &AdmmState<f64>, rc: &RegularizerSpec<f64>, rs: &RegularizerSpec<f64>, rho: f64) -> f64 {
    let (h, x) = (to_grid(&state.channel), to_grid(&state.signal));
    fit(w, &to_grid(y), &h, &x)
        + rc.weight * rc.eval(&state.z1)
        + rs.weight * rs.eval(&state.z2)
        + coupling(&h, &to_grid(&state.z1), &to_grid(&state.mu1), rho)
        + coupling(&x, &to_grid(&state.z2), &to_grid(&state.mu2), rho)
}

fn random_state(nr: usize, nt: usize, t: usize, seed: u64) -> AdmmState<f64> {
    AdmmState {
        channel: randn(nr, nt, seed),
        signal: randn(nt, t, seed + 1),
        z1: randn(nr, nt, seed + 2).scale(0.3),
        z2: randn(nt, t, seed + 3).scale(0.3),
        mu1: randn(nr, nt, seed + 4),
        mu2: randn(nt, t, seed + 5),
        iter: 0,
    }
}

#[test]
fn lagrangian_and_objective_match_oracle() {
    let mut r = rng(3);
    for case in 0..30u64 {
        let (nr, nt, t) = (dims(&mut r, 6), dims(&mut r, 6), dims(&mut r, 6));
        let mut inst = BlindInstance::new(randn(nr, t, 10 * case), nt);
        inst.fidelity_weight = 0.5 + r.uniform();
        inst.reg_channel = variant(case as usize % 3);
        inst.reg_signal = variant((case as usize + 1) % 3);
        let state = random_state(nr, nt, t, 10 * case + 1);
        let rho = 0.3 + r.uniform();
        let want = lagrangian_oracle(&inst.y, inst.fidelity_weight, &state, &inst.reg_channel, &inst.reg_signal, rho);
        let got = lagrangian_eval(&inst, &state, rho);
        assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()), "{got} vs {want}");

        let obj = split_objective(&inst, &state);
        let want = fit(inst.fidelity_weight, &to_grid(&inst.y), &to_grid(&state.channel), &to_grid(&state.signal))
            + inst.reg_channel.weight * inst.reg_channel.eval(&state.z1)
            + inst.reg_signal.weight * inst.reg_signal.eval(&state.z2);
        assert!((obj - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }
}

#[test]
fn jrc_objective_matches_oracle() {
    for seed in 0..10u64 {
        let g0 = randn(4, 8, 100 + seed);
        let inst = JrcInstance {
            y_radar: randn(4, 16, seed),
            y_comm: randn(2, 16, 20 + seed),
            h_comm: randn(2, 8, 40 + seed),
            g_nominal: Some(g0.clone()),
            lambda_radar: 0.7,
            lambda_comm: 1.3,
            reg_channel: RegularizerSpec::squared_frobenius(0.01),
            reg_signal: RegularizerSpec::l1(0.05),
            noise_var: 1e-3,
            channel_radius: None,
            ground_truth: None,
        };
        let g = randn(4, 8, 60 + seed);
        let x = randn(8, 16, 80 + seed);
        let (gg, xg) = (to_grid(&g), to_grid(&x));
        let delta = sub(&gg, &to_grid(&g0));
        let l1: f64 = x.as_slice().iter().map(|z| z.norm()).sum();
        let want = fit(0.7, &to_grid(&inst.y_radar), &gg, &xg)
            + fit(1.3, &to_grid(&inst.y_comm), &to_grid(&inst.h_comm), &xg)
            + 0.01 * 0.5 * norm_sq(&delta)
            + 0.05 * l1;
        let got = inst.objective(&g, &x);
        assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()), "{got} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn each_primal_update_lowers_the_lagrangian(
        seed in any::<u64>(),
        nr in 1usize..=6, nt in 1usize..=6, t in 1usize..=6,
        rc in 0usize..5, rs in 0usize..5,
        rho in 0.2f64..3.0,
    ) {
        let seed = seed % (1 << 40);
        let mut inst = BlindInstance::new(randn(nr, t, seed), nt);
        inst.reg_channel = variant(rc);
        inst.reg_signal = variant(rs);
        let mut state = random_state(nr, nt, t, seed + 7);
        let close = |before: f64, after: f64| after <= before + 1e-10 * (1.0 + before.abs());
        for _sweep in 0..3 {
            let mut prev = lagrangian_eval(&inst, &state, rho);
            state.channel = inst.update_channel(&state.signal, &state.z1, &state.mu1, rho).unwrap();
            let now = lagrangian_eval(&inst, &state, rho);
            prop_assert!(close(prev, now), "channel {prev} -> {now}");
            prev = now;
            state.signal = inst.update_signal(&state.channel, &state.z2, &state.mu2, rho).unwrap();
            let now = lagrangian_eval(&inst, &state, rho);
            prop_assert!(close(prev, now), "signal {prev} -> {now}");
            prev = now;
            state.z1 = update_z_prox(&state.channel, &state.mu1, &inst.reg_channel, inst.reg_channel.weight, rho);
            let now = lagrangian_eval(&inst, &state, rho);
            prop_assert!(close(prev, now), "z1 {prev} -> {now}");
            prev = now;
            state.z2 = update_z_prox(&state.signal, &state.mu2, &inst.reg_signal, inst.reg_signal.weight, rho);
            let now = lagrangian_eval(&inst, &state, rho);
            prop_assert!(now.is_finite() && close(prev, now), "z2 {prev} -> {now}");
            state.mu1 = admm::update_duals(&state.mu1, &(&state.channel - &state.z1), rho).unwrap();
            state.mu2 = admm::update_duals(&state.mu2, &(&state.signal - &state.z2), rho).unwrap();
        }
    }

    #[test]
    fn permuting_receivers_permutes_the_channel(seed in any::<u64>(), nr in 2usize..=6, nt in 1usize..=5, shift in 1usize..6) {
        let seed = seed % (1 << 40);
        let t = 2 * nt + 2;
        let y = randn(nr, nt, seed).matmul(&randn(nt, t, seed + 1));
        let perm: Vec<usize> = (0..nr).map(|i| (i + shift) % nr).collect();
        let mut a = BlindInstance::new(y.clone(), nt);
        a.reg_channel = RegularizerSpec::squared_frobenius(0.05);
        a.reg_signal = RegularizerSpec::squared_frobenius(0.05);
        let mut b = a.clone();
        b.y = y.permute_rows(&perm);
        let cfg = AdmmConfig { max_iter: 20, ..AdmmConfig::default() };
        let init = a.initial_state(&cfg).with_channel(randn(nr, nt, seed + 2));
        let init_b = init.clone().with_channel(init.channel.permute_rows(&perm));
        let ra = run(&a, &cfg, init, |_| {}).unwrap();
        let rb = run(&b, &cfg, init_b, |_| {}).unwrap();
        let scale = 1.0 + ra.state.channel.frob_norm();
        prop_assert!(ra.state.channel.permute_rows(&perm).max_abs_diff(&rb.state.channel) <= 1e-9 * scale);
        prop_assert!(ra.state.signal.max_abs_diff(&rb.state.signal) <= 1e-9 * (1.0 + ra.state.signal.frob_norm()));
    }

    #[test]
    fn smooth_mode_with_default_step_tracks_prox_for_squared_frobenius(seed in any::<u64>(), lambda in 0.0f64..1.0) {
        let seed = seed % (1 << 40);
        let mut inst = BlindInstance::new(randn(3, 12, seed), 4);
        inst.reg_channel = RegularizerSpec::squared_frobenius(lambda);
        inst.reg_signal = RegularizerSpec::squared_frobenius(lambda);
        let prox = AdmmConfig { max_iter: 15, ..AdmmConfig::default() };
        let smooth = AdmmConfig { z_mode: ZMode::Smooth, ..prox.clone() };
        let a = admm::solve(&inst, &prox, |_| {}).unwrap();
        let b = admm::solve(&inst, &smooth, |_| {}).unwrap();
        prop_assert_eq!(a.trace.len(), b.trace.len());
        prop_assert!(a.state.channel.max_abs_diff(&b.state.channel) <= 1e-9);
        prop_assert!(a.state.signal.max_abs_diff(&b.state.signal) <= 1e-9);
    }
}

#[test]
fn primal_residuals_shrink_on_well_conditioned_noiseless_data() {
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 20 {
        seed += 1;
        let h = randn(4, 3, 1_000 + seed);
        let x = randn(3, 12, 2_000 + seed);
        if gram_condition(&x.hermitian()) > 10.0 {
            continue;
        }
        checked += 1;
        let mut inst = BlindInstance::new(h.matmul(&x), 3);
        inst.reg_channel = RegularizerSpec::squared_frobenius(0.01);
        inst.reg_signal = RegularizerSpec::squared_frobenius(0.01);
        let cfg = AdmmConfig {
            tol: f64::MIN_POSITIVE,
            init_seed: seed,
            ..AdmmConfig::default()
        };
        let out = admm::solve(&inst, &cfg, |_| {}).unwrap();
        let (first, last) = (&out.trace[0], &out.trace[49]);
        let ratio = (last.r1 + last.r2) / (first.r1 + first.r2);
        assert!(ratio <= 1e-2, "seed {seed}: r1+r2 ratio {ratio:.3e}");
    }
}

#[test]
fn known_signal_scale_converges() {
    let h = M::from_rows(&[&[(1.0, 0.0), (0.3, -0.2)], &[(-0.4, 0.1), (0.9, 0.5)]]).unwrap();
    let x = randn(2, 4, 12);
    let mut inst = BlindInstance::new(h.matmul(&x), 2);
    inst.reg_signal = RegularizerSpec::power_ball(100.0 * x.frob_norm_sq());
    let out = admm::solve(&inst, &AdmmConfig::default(), |_| {}).unwrap();
    let last = out.trace.last().unwrap();
    assert!(out.trace.len() <= 50);
    assert!(last.r1 < 1e-4 && last.r2 < 1e-4, "r1 {} r2 {}", last.r1, last.r2);
}
