//! Information-set sizes from both roles along a randomly played game,
//! with the time taken to count them and a few enumerated deals at the end.
//!
//!     cargo run --release --example count_infosets -- [seed]

use std::time::Instant;

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::{count_deals, enumerate_deals, Deal, GameDecl, GameState, Observation, Seat, Suit};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = GameState::new(
        Deal::random(&mut rng),
        GameDecl::Suit(Suit::Hearts),
        Seat::new(0),
    );
    println!("ply  trick  soloist view  defender view  time");
    while !g.is_finished() {
        let t = Instant::now();
        let solo = count_deals(&Observation::from_game(&g, Seat::new(0), [0; 3], None));
        let def = count_deals(&Observation::from_game(&g, Seat::new(1), [0; 3], None));
        println!(
            "{:3}  {:5}  {:12}  {:13}  {:.1?}",
            g.history().len(),
            g.trick_number(),
            solo,
            def,
            t.elapsed()
        );
        if def <= 3 {
            for d in enumerate_deals(&Observation::from_game(&g, Seat::new(1), [0; 3], None)) {
                println!("     candidate {}", d.to_location_string());
            }
            break;
        }
        let m = g.legal_moves().iter().choose(&mut rng).unwrap();
        g.play(m).unwrap();
    }
    println!("true deal      {}", g.deal().to_location_string());
}
