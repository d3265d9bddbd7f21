//! Duplicate-style matches between a trump-prior BDCI player and NI on
//! generated deals; each deal is played twice with the roles swapped.
//!
//!     cargo run --release --example tournament -- [matches] [samples]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::eval::{run_tournament, tournament_table};
use skat_core::selfplay::generate_game;
use skat_core::{Models, PlayerConfig, PlayerKind, Variant};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let matches: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let samples: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let deals: Vec<_> = (0..matches).map(|_| generate_game(&mut rng)).collect();
    let bdci = PlayerConfig::new(PlayerKind::Bdci, samples, 1)
        .with_state_cap(20_000)
        .with_models(Models::trump_prior(Variant::Bdci, 2.0));
    let ni = PlayerConfig::ni(samples, 2).with_state_cap(20_000);
    let summary = run_tournament(&deals, &bdci, &ni, matches).unwrap();
    print!("{}", tournament_table("bdci-prior", "ni", &summary));
}
