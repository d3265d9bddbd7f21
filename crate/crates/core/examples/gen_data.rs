//! Self-play corpus: scripted bidding and discarding, cheap NI cardplay,
//! written as a game-record file.
//!
//!     cargo run --release --example gen_data -- [games] [out file]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::io::serialize_records;
use skat_core::pimc::play_game;
use skat_core::selfplay::generate_game;
use skat_core::PlayerConfig;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let games: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let player = PlayerConfig::ni(2, 1).with_state_cap(1000);
    let records: Vec<_> = (0..games)
        .map(|_| {
            let mut rec = generate_game(&mut rng);
            let g = play_game(
                rec.deal,
                rec.decl,
                rec.soloist,
                rec.bids,
                rec.original_skat,
                &[&player; 3],
            );
            rec.moves = g.history().iter().map(|&(_, c)| c).collect();
            rec
        })
        .collect();
    let text = serialize_records(&records);
    match args.get(2) {
        Some(path) => {
            std::fs::write(path, &text).unwrap();
            println!("{games} records written to {path}");
        }
        None => print!("{text}"),
    }
}
