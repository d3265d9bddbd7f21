//! Generate a deal with the scripted bidder and play it out with PIMC
//! players, printing each decision and its time.
//!
//!     cargo run --release --example play_game -- [samples] [seed]

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::io::serialize_record;
use skat_core::pimc::{choose_move, observation_at, PlayerConfig};
use skat_core::selfplay::generate_game;
use skat_core::GameState;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let samples: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = generate_game(&mut rng);
    println!(
        "{} played by seat {}, bids {:?}, soloist holds {}",
        rec.decl,
        rec.soloist,
        rec.bids,
        rec.deal.hand(rec.soloist)
    );
    let player = PlayerConfig::ni(samples, seed);
    let mut g = GameState::new(rec.deal, rec.decl, rec.soloist);
    while !g.is_finished() {
        let obs = observation_at(&g, rec.bids, rec.original_skat);
        let t = Instant::now();
        let choice = choose_move(&obs, &player);
        let values: Vec<String> = choice
            .values
            .iter()
            .map(|v| format!("{}={:.1}", v.card, v.mean()))
            .collect();
        println!(
            "trick {:2} seat {} plays {}  [{:>9.2?}]  {}",
            g.trick_number(),
            g.to_move(),
            choice.card,
            t.elapsed(),
            values.join(" ")
        );
        g.play(choice.card).unwrap();
    }
    rec.moves = g.history().iter().map(|&(_, c)| c).collect();
    print!("{}", serialize_record(&rec));
}
