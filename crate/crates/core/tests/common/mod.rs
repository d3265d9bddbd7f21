//! Shared helpers for integration tests: random games and a plain minimax
//! oracle that only uses the game state machine.
#![allow(dead_code)]

use rand::seq::IteratorRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::features::{HISTORY_LEN, STATE_LEN};
use skat_core::infoset::{count_deals, Observation};
use skat_core::network::{Dense, OUTPUTS};
use skat_core::{Deal, GameDecl, GameKind, GameState, Models, Network, Seat, Variant};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random deal played randomly for `moves` plies.
pub fn random_game(seed: u64, decl: GameDecl, soloist: Seat, moves: usize) -> GameState {
    let mut r = rng(seed);
    let deal = Deal::random(&mut r);
    let mut g = GameState::new(deal, decl, soloist);
    for _ in 0..moves {
        let m = g.legal_moves().iter().choose(&mut r).unwrap();
        g.play(m).unwrap();
    }
    g
}

/// Unpruned minimax over the full move tree. Suit/grand: soloist card
/// points at the end (skat included). Null: 1 if the soloist wins.
pub fn minimax(g: &GameState) -> u32 {
    if g.is_finished() {
        let s = g.summary().unwrap();
        return match g.decl() {
            GameDecl::Null => s.outcome.won as u32,
            _ => s.soloist_points,
        };
    }
    let maximize = g.to_move() == g.soloist();
    let vals = g.legal_moves().iter().map(|m| {
        let mut next = g.clone();
        next.play(m).unwrap();
        minimax(&next)
    });
    if maximize {
        vals.max().unwrap()
    } else {
        vals.min().unwrap()
    }
}

/// Decision points of randomly played games where the player to move has
/// at least `min_legal` legal moves and `keep` accepts the observation.
pub fn find_positions(
    seed: u64,
    want: usize,
    plies: std::ops::RangeInclusive<usize>,
    min_legal: usize,
    mut keep: impl FnMut(&Observation) -> bool,
) -> Vec<(GameState, Observation)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < want {
        tries += 1;
        assert!(tries < 2_000_000, "position search exhausted");
        let decl = GameDecl::all()[r.gen_range(0..6)];
        let soloist = Seat::new(r.gen_range(0..3));
        let target = r.gen_range(plies.clone());
        let mut g = GameState::new(Deal::random(&mut r), decl, soloist);
        for _ in 0..target {
            let m = g.legal_moves().iter().choose(&mut r).unwrap();
            g.play(m).unwrap();
        }
        if g.legal_moves().len() < min_legal {
            continue;
        }
        let obs = Observation::from_game(&g, g.to_move(), [0; 3], None);
        if keep(&obs) {
            out.push((g, obs));
        }
    }
    out
}

/// A defender on lead to the last trick with nothing ruled out by voids:
/// one unknown card in each other hand and two in the skat, 12 deals.
pub fn twelve_deal_endgame(seed: u64) -> (GameState, Observation) {
    find_positions(seed, 1, 27..=27, 1, |o| {
        !o.is_soloist() && count_deals(o) == 12
    })
    .pop()
    .unwrap()
}

/// A decision with at least two legal moves and exactly 12 consistent
/// deals.
pub fn twelve_deal_decision(seed: u64) -> (GameState, Observation) {
    find_positions(seed, 1, 21..=26, 2, |o| count_deals(o) == 12)
        .pop()
        .unwrap()
}

/// Network whose output ignores the input: `logits` are card-major,
/// four viewer-relative locations per card.
pub fn constant_network(kind: GameKind, variant: Variant, logits: Vec<f32>) -> Network {
    let tower = vec![Dense::zeros(1, HISTORY_LEN)];
    let mut out = Dense::zeros(OUTPUTS, 1 + STATE_LEN);
    out.bias = logits;
    Network::new(kind, variant, tower, vec![out]).unwrap()
}

pub fn random_logits(seed: u64, spread: f32) -> Vec<f32> {
    let mut r = rng(seed);
    (0..OUTPUTS).map(|_| r.gen_range(-spread..spread)).collect()
}

/// The same constant network for all three game kinds.
pub fn constant_models(variant: Variant, logits: &[f32]) -> Models {
    let mut m = Models::new();
    for k in GameKind::ALL {
        m.insert(constant_network(k, variant, logits.to_vec()));
    }
    m
}
