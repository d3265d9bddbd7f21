mod common;

use common::*;
use skat_core::eval::{
    run_match, run_tournament, summarize_tssr, tournament_csv, tssr, tssr_samples, welch, Method,
    Role, Side,
};
use skat_core::features::relative_seat;
use skat_core::selfplay::generate_game;
use skat_core::{count_deals, enumerate_deals, GameRecord, Models, PlayerConfig, Variant};

fn records(seed: u64, n: usize) -> Vec<GameRecord> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let mut rec = generate_game(&mut r);
            let g = skat_core::pimc::play_game(
                rec.deal,
                rec.decl,
                rec.soloist,
                rec.bids,
                rec.original_skat,
                &[&PlayerConfig::ni(1, 0).with_state_cap(20); 3],
            );
            rec.moves = g.history().iter().map(|&(_, c)| c).collect();
            rec
        })
        .collect()
}

#[test]
fn uniform_and_oracle_identities() {
    for (g, obs) in find_positions(3, 40, 0..=26, 1, |_| true) {
        let n = count_deals(&obs);
        assert_eq!(tssr(&obs, g.deal(), &Method::Uniform).tssr, 1.0);
        let oracle = tssr(&obs, g.deal(), &Method::Oracle);
        assert_eq!(oracle.tssr, n as f64);
        assert_eq!(oracle.n_states, n);
    }
}

#[test]
fn two_deal_set_with_nine_to_one_odds() {
    let (g, obs) = find_positions(6, 1, 12..=23, 1, |o| count_deals(o) == 2)
        .pop()
        .unwrap();
    let deals = enumerate_deals(&obs);
    let truth = *g.deal();
    let other = deals.into_iter().find(|d| *d != truth).unwrap();
    // one card sits in location a in the true deal and b in the other
    let card = skat_core::Card::all()
        .find(|&c| truth.location(c) != other.location(c))
        .unwrap();
    let column = |loc: usize| {
        if loc == 3 {
            3
        } else {
            relative_seat(obs.viewer, skat_core::Seat::new(loc))
        }
    };
    let mut logits = vec![0.0f32; 128];
    logits[card.index() * 4 + column(truth.location(card))] = 9f32.ln();
    let models = constant_models(Variant::Bdci, &logits);
    let s = tssr(&obs, &truth, &Method::Network(models));
    assert!((s.tssr - 1.8).abs() < 1e-6, "{}", s.tssr);
}

#[test]
fn zero_networks_give_uniform_tssr() {
    let models = constant_models(Variant::Bdci, &[0.0; 128]);
    for (g, obs) in find_positions(8, 30, 0..=23, 1, |_| true) {
        assert_eq!(
            tssr(&obs, g.deal(), &Method::Network(models.clone())).tssr,
            1.0
        );
    }
}

#[test]
fn network_tssr_is_bounded_by_the_oracle() {
    let recs = records(1, 6);
    let models = constant_models(Variant::Bdci, &random_logits(2, 2.0));
    let net = tssr_samples(&recs, &Method::Network(models), 8, 1000);
    let oracle = tssr_samples(&recs, &Method::Oracle, 8, 1000);
    assert_eq!(net.len(), oracle.len());
    assert!(!net.is_empty());
    for (a, b) in net.iter().zip(&oracle) {
        assert!(
            a.tssr > 0.0 && a.tssr <= b.tssr * (1.0 + 1e-9),
            "{a:?} vs {b:?}"
        );
    }
}

#[test]
fn samples_are_capped_per_cell_and_summarized() {
    let recs = records(2, 5);
    let samples = tssr_samples(&recs, &Method::Uniform, 4, 3);
    let cells = summarize_tssr(&samples);
    for c in &cells {
        assert!((1..=3).contains(&c.samples), "{c:?}");
        assert!((1..=4).contains(&c.trick));
        assert_eq!(c.mean, 1.0);
    }
    assert!(cells.iter().any(|c| c.role == Role::Defender));
    let csv = skat_core::eval::tssr_csv(&cells);
    assert_eq!(csv.lines().count(), cells.len() + 1);
}

#[test]
fn welch_matches_reference_values() {
    let (t, df, p) = welch(&[1.0, 2.0, 3.0, 4.0], &[2.0, 4.0, 6.0, 8.0]);
    assert!((t + 1.7320508075688774).abs() < 1e-9);
    assert!((df - 4.411764705882353).abs() < 1e-9);
    assert!((p - 0.15158050484530383).abs() < 1e-6);
    let (t, df, p) = welch(
        &[3.1, -2.0, 5.0, 7.0, 0.5, 9.0, -4.0],
        &[1.0, 1.5, 2.0, -3.0, 0.0],
    );
    assert!((t - 1.1764126513734496).abs() < 1e-9);
    assert!((df - 8.531830859845163).abs() < 1e-9);
    assert!((p - 0.2712084705857739).abs() < 1e-6);
}

#[test]
fn matches_swap_roles_and_replay() {
    let rec = records(4, 1).pop().unwrap().without_moves();
    let a = PlayerConfig::ni(1, 1).with_state_cap(30);
    let b = PlayerConfig::new(skat_core::PlayerKind::Bdci, 1, 2)
        .with_state_cap(30)
        .with_models(Models::trump_prior(Variant::Bdci, 1.0));
    let m = run_match(&rec, 0, &a, &b);
    assert_eq!(m.games[0].soloist_side, Side::A);
    assert_eq!(m.games[1].soloist_side, Side::B);
    for g in &m.games {
        let replay = skat_core::game::replay(rec.deal, rec.decl, rec.soloist, &g.moves).unwrap();
        let s = replay.summary().unwrap();
        assert_eq!(s.soloist_points, g.soloist_points);
        let sol = s.scores[rec.soloist.index()];
        let def: i32 = (0..3)
            .filter(|&i| i != rec.soloist.index())
            .map(|i| s.scores[i])
            .sum();
        let (sa, sb) = match g.soloist_side {
            Side::A => (sol, def),
            Side::B => (def, sol),
        };
        assert_eq!(g.points, [sa, sb]);
    }
    assert_eq!(run_match(&rec, 0, &a, &b), m);
}

#[test]
fn tournaments_are_reproducible() {
    let recs = records(5, 2);
    let p = PlayerConfig::ni(1, 3).with_state_cap(20);
    let s1 = run_tournament(&recs, &p, &p, 2).unwrap();
    let s2 = run_tournament(&recs, &p, &p, 2).unwrap();
    assert_eq!(s1.results, s2.results);
    assert_eq!(
        (s1.mean_a, s1.delta, s1.welch_p),
        (s2.mean_a, s2.delta, s2.welch_p)
    );
    assert_eq!(s1.games, 4);
    let csv = tournament_csv("ni", "ni", &s1);
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("ni,ni,2,4,"));
    assert!(run_tournament(&[], &p, &p, 1).is_err());
    assert!(s1
        .win_rate_a
        .iter()
        .all(|r| r.is_nan() || (0.0..=1.0).contains(r)));
}
