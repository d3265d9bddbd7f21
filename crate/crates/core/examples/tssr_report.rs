//! True-state sampling ratio of the uniform, oracle and trump-prior
//! methods over self-play records, one row per (trick, role, kind) cell.
//!
//!     cargo run --release --example tssr_report -- [games] [seed]

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::eval::{summarize_tssr, tssr_samples, Method};
use skat_core::selfplay::generate_game;
use skat_core::{Models, Variant};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let games: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records: Vec<_> = (0..games)
        .map(|_| {
            let mut rec = generate_game(&mut rng);
            let mut g = rec.replay().unwrap();
            while !g.is_finished() {
                let c = g.legal_moves().iter().choose(&mut rng).unwrap();
                g.play(c).unwrap();
                rec.moves.push(c);
            }
            rec
        })
        .collect();
    let oracle = summarize_tssr(&tssr_samples(&records, &Method::Oracle, 8, usize::MAX));
    let prior = summarize_tssr(&tssr_samples(
        &records,
        &Method::Network(Models::trump_prior(Variant::Bdci, 2.0)),
        8,
        usize::MAX,
    ));
    println!("trick  role      kind   samples  oracle        trump prior   mean states");
    for (o, p) in oracle.iter().zip(&prior) {
        println!(
            "{:5}  {:8}  {:5}  {:7}  {:12.1}  {:6.2} ± {:4.2}  {:.0}",
            o.trick,
            o.role.name(),
            o.kind.name(),
            o.samples,
            o.mean,
            p.mean,
            p.std_err,
            o.mean_states
        );
    }
}
