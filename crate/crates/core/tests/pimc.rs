mod common;

use common::*;
use proptest::prelude::*;
use skat_core::infoset::{consistent, count_deals, enumerate_deals};
use skat_core::pimc::{
    build_distribution, expected_move_values, legal_moves, sampled_move_values, select, MoveValue,
    Objective,
};
use skat_core::solver::{PerfectState, Solver};
use skat_core::{
    choose_move, GameDecl, GameKind, Models, Network, PlayerConfig, PlayerKind, Variant,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn zero_models() -> Models {
    let mut m = Models::new();
    for k in GameKind::ALL {
        m.insert(Network::zeros(k, Variant::Bdci));
    }
    m
}

/// Chi-square goodness of fit; bins expecting fewer than five draws are
/// pooled.
fn chi_square_p(observed: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    let (mut stat, mut bins) = (0.0, 0usize);
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * n as f64;
        if e < 5.0 {
            pool_o += o as f64;
            pool_e += e;
            continue;
        }
        stat += (o as f64 - e).powi(2) / e;
        bins += 1;
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e.max(1e-12);
        bins += 1;
    }
    1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(stat)
}

/// Value of each legal move by full enumeration with uniform weights.
fn enumerated_values(obs: &skat_core::Observation) -> Vec<MoveValue> {
    let deals = enumerate_deals(obs);
    let legal = legal_moves(obs);
    let p = 1.0 / deals.len() as f64;
    let mut out: Vec<MoveValue> = legal
        .iter()
        .map(|card| MoveValue {
            card,
            total: 0.0,
            wins: 0.0,
            count: 0.0,
        })
        .collect();
    for d in &deals {
        let mut g = skat_core::GameState::new(*d, obs.decl, obs.soloist);
        for &(_, c) in &obs.history {
            g.play(c).unwrap();
        }
        let state = PerfectState::from_game(&g);
        let mut solver = Solver::new(obs.decl, obs.soloist);
        for (mv, (card, v)) in out.iter_mut().zip(solver.move_values(&state)) {
            assert_eq!(mv.card, card);
            mv.total += p * v.as_f64();
            mv.wins += p * v.soloist_wins() as u8 as f64;
            mv.count += p;
        }
    }
    out
}

#[test]
fn twelve_deal_endgame_is_uniform_under_ni() {
    let (_, obs) = twelve_deal_endgame(3);
    let dist = build_distribution(&obs, &PlayerConfig::ni(10, 0));
    assert_eq!(dist.len(), 12);
    assert!(dist.is_uniform());
    for i in 0..12 {
        assert_eq!(dist.prob(i), 1.0 / 12.0);
        assert!(consistent(&dist.deal(i), &obs));
    }
}

#[test]
fn sampling_frequencies_fit_the_distribution() {
    let positions = find_positions(21, 6, 15..=23, 2, |o| (8..=100).contains(&count_deals(o)));
    for (k, (_, obs)) in positions.iter().enumerate() {
        let logits = random_logits(100 + k as u64, 1.5);
        let configs = [
            PlayerConfig::ni(1, 0),
            PlayerConfig::new(PlayerKind::Bdci, 1, 0)
                .with_models(constant_models(Variant::Bdci, &logits)),
        ];
        for config in &configs {
            let dist = build_distribution(obs, config);
            let mut r = rng(7 + k as u64);
            let mut counts = vec![0u64; dist.len()];
            for i in dist.sample(10_000, &mut r) {
                counts[i] += 1;
            }
            let p = chi_square_p(&counts, &dist.probabilities());
            assert!(
                p > 0.001,
                "{} on {} deals: p = {p}",
                config.kind,
                dist.len()
            );
        }
    }
}

#[test]
fn zero_probability_deals_are_never_drawn() {
    let (g, obs) = find_positions(5, 1, 15..=20, 2, |o| (8..=100).contains(&count_deals(o)))
        .pop()
        .unwrap();
    let card = skat_core::infoset::InfoSet::new(&obs).unknown_cards()[0];
    let mut logits = vec![0.0f32; 128];
    // rule the card out of the skat column
    logits[card.index() * 4 + 3] = f32::NEG_INFINITY;
    let config = PlayerConfig::new(PlayerKind::Bdci, 1, 0)
        .with_models(constant_models(Variant::Bdci, &logits));
    let dist = build_distribution(&obs, &config);
    let mut banned = 0;
    for i in 0..dist.len() {
        if dist.deal(i).skat.contains(card) {
            banned += 1;
            assert_eq!(dist.prob(i), 0.0);
        }
    }
    assert!(banned > 0, "position {g:?} never puts the card in the skat");
    let mut r = rng(1);
    assert!(dist
        .sample(5000, &mut r)
        .iter()
        .all(|&i| !dist.deal(i).skat.contains(card)));
}

#[test]
fn exact_expectation_equals_enumeration() {
    for seed in 0..4 {
        let (_, obs) = twelve_deal_decision(seed);
        let exact = enumerated_values(&obs);
        let got = expected_move_values(&obs, &PlayerConfig::ni(1, 0));
        assert_eq!(got.len(), exact.len());
        for (a, b) in got.iter().zip(&exact) {
            assert_eq!(a.card, b.card);
            assert!((a.mean() - b.mean()).abs() < 1e-9, "{a:?} vs {b:?}");
            assert!((a.win_rate() - b.win_rate()).abs() < 1e-9);
        }
    }
}

#[test]
fn sampled_values_converge_to_the_expectation() {
    let (_, obs) = twelve_deal_decision(11);
    let deals = enumerate_deals(&obs);
    let exact = enumerated_values(&obs);
    let n = 1200;
    let sampled = sampled_move_values(&obs, &PlayerConfig::ni(n, 99));
    for (m, e) in sampled.iter().zip(&exact) {
        // per-deal spread of this move's value
        let vals: Vec<f64> = deals
            .iter()
            .map(|d| {
                let mut g = skat_core::GameState::new(*d, obs.decl, obs.soloist);
                for &(_, c) in &obs.history {
                    g.play(c).unwrap();
                }
                Solver::new(obs.decl, obs.soloist)
                    .perfect_info_val(&PerfectState::from_game(&g), m.card)
                    .as_f64()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        assert!((mean - e.mean()).abs() < 1e-9);
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64).sqrt();
        let tol = 3.0 * sd / (n as f64).sqrt();
        assert_eq!(m.count, n as f64);
        assert!(
            (m.mean() - e.mean()).abs() <= tol + 1e-9,
            "{}: sampled {} exact {} tol {tol}",
            m.card,
            m.mean(),
            e.mean()
        );
    }
}

#[test]
fn singleton_sets_play_the_solver_move() {
    let positions = find_positions(8, 60, 21..=27, 2, |o| count_deals(o) == 1);
    for (g, obs) in &positions {
        let state = PerfectState::from_game(g);
        let values = Solver::new(obs.decl, obs.soloist).move_values(&state);
        let maximize = obs.is_soloist();
        let objective = if obs.decl == GameDecl::Null {
            Objective::WinProb
        } else {
            Objective::Points
        };
        let as_mv: Vec<MoveValue> = values
            .iter()
            .map(|&(card, v)| MoveValue {
                card,
                total: v.as_f64(),
                wins: v.soloist_wins() as u8 as f64,
                count: 1.0,
            })
            .collect();
        let best = select(&as_mv, maximize, objective);
        let chosen = choose_move(obs, &PlayerConfig::ni(3, 5));
        assert_eq!(chosen.card, best, "at {g:?}");
    }
}

#[test]
fn forced_moves_skip_evaluation() {
    let mut g = random_game(0, GameDecl::Grand, skat_core::Seat::new(0), 0);
    for _ in 0..29 {
        let m = g.legal_moves().first().unwrap();
        g.play(m).unwrap();
    }
    let obs = skat_core::Observation::from_game(&g, g.to_move(), [0; 3], None);
    let choice = choose_move(&obs, &PlayerConfig::ni(4, 0));
    assert!(choice.values.is_empty());
    assert_eq!(choice.card, g.legal_moves().first().unwrap());
}

#[test]
fn state_cap_draws_a_consistent_subset() {
    let (_, obs) = find_positions(4, 1, 0..=0, 2, |o| !o.is_soloist())
        .pop()
        .unwrap();
    assert_eq!(count_deals(&obs), 42_678_636);
    let config = PlayerConfig::ni(10, 3).with_state_cap(500);
    let dist = build_distribution(&obs, &config);
    assert_eq!(dist.len(), 500);
    assert!(!dist.is_complete());
    let mut seen = std::collections::HashSet::new();
    for d in dist.deals() {
        assert!(consistent(&d, &obs));
        assert!(seen.insert(d.to_location_string()));
    }
    assert_eq!(build_distribution(&obs, &config).deals(), dist.deals());
}

#[test]
fn zero_weight_bdci_equals_ni() {
    let models = zero_models();
    let mut positions = find_positions(30, 6, 0..=22, 2, |_| true);
    positions.extend(find_positions(31, 3, 12..=20, 2, |o| count_deals(o) <= 400));
    for (_, obs) in &positions {
        let ni = PlayerConfig::ni(6, 17).with_state_cap(300);
        let bdci = PlayerConfig::new(PlayerKind::Bdci, 6, 17)
            .with_state_cap(300)
            .with_models(models.clone());
        let (a, b) = (build_distribution(obs, &ni), build_distribution(obs, &bdci));
        assert_eq!(a.deals(), b.deals());
        assert_eq!(a.probabilities(), b.probabilities());
        assert_eq!(
            sampled_move_values(obs, &ni),
            sampled_move_values(obs, &bdci)
        );
        assert_eq!(choose_move(obs, &ni), choose_move(obs, &bdci));
    }
}

#[test]
fn weighted_distribution_matches_direct_products() {
    let (_, obs) = find_positions(12, 1, 12..=20, 2, |o| (20..=200).contains(&count_deals(o)))
        .pop()
        .unwrap();
    let logits = random_logits(4, 2.0);
    let models = constant_models(Variant::Bdci, &logits);
    let l = models.location_matrix(&obs);
    let dist = build_distribution(
        &obs,
        &PlayerConfig::new(PlayerKind::Bdci, 1, 0).with_models(models),
    );
    let raw: Vec<f64> = dist
        .deals()
        .iter()
        .map(|d| skat_core::deal_weight(&l, d))
        .collect();
    let total: f64 = raw.iter().sum();
    for (i, w) in raw.iter().enumerate() {
        assert!((dist.prob(i) - w / total).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn choices_are_legal_and_deterministic(seed in any::<u64>(), plies in 0usize..25) {
        let (_, obs) = find_positions(seed, 1, plies..=plies + 2, 2, |_| true).pop().unwrap();
        let config = PlayerConfig::ni(3, seed).with_state_cap(200);
        let a = choose_move(&obs, &config);
        prop_assert!(legal_moves(&obs).contains(a.card));
        prop_assert_eq!(a, choose_move(&obs, &config));
    }

    #[test]
    fn probabilities_sum_to_one(seed in any::<u64>(), plies in 9usize..24) {
        let (_, obs) = find_positions(seed, 1, plies..=plies, 2, |o| count_deals(o) <= 5000).pop().unwrap();
        let config = PlayerConfig::new(PlayerKind::Bdci, 1, 0)
            .with_models(constant_models(Variant::Bdci, &random_logits(seed, 3.0)));
        let dist = build_distribution(&obs, &config);
        let s: f64 = dist.probabilities().iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-9);
        prop_assert!(dist.probabilities().iter().all(|&p| (0.0..=1.0).contains(&p)));
    }
}
