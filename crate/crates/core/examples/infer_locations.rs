//! Card-location inference: save and reload a network, predict the
//! location matrix for a defender early in a suit game and weight the
//! deals of a small information set by it.
//!
//!     cargo run --release --example infer_locations -- [prior strength]

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::io::{load_weights, save_weights};
use skat_core::{
    count_deals, enumerate_deals, weight_distribution, Deal, GameDecl, GameKind, GameState, Models,
    Network, Observation, Seat, Suit, Variant,
};

fn main() {
    let strength: f32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2.0);
    let path = std::env::temp_dir().join("skat-suit-prior.bin");
    save_weights(
        &Network::trump_prior(GameKind::Suit, Variant::Bdci, strength),
        &path,
    )
    .unwrap();
    let net = load_weights(&path).unwrap();
    println!(
        "{} parameters reloaded from {}",
        net.param_count(),
        path.display()
    );
    let models = Models::new().with(net);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut g = GameState::new(
        Deal::random(&mut rng),
        GameDecl::Suit(Suit::Spades),
        Seat::new(2),
    );
    for _ in 0..3 {
        let m = g.legal_moves().iter().choose(&mut rng).unwrap();
        g.play(m).unwrap();
    }
    let obs = Observation::from_game(&g, g.to_move(), [0; 3], None);
    let l = models.location_matrix(&obs);
    println!("viewer seat {}, soloist seat {}", obs.viewer, obs.soloist);
    println!("card   seat0  seat1  seat2  skat");
    for c in obs.unknown_cards() {
        let r = l.row(c);
        println!("{c}     {:.3}  {:.3}  {:.3}  {:.3}", r[0], r[1], r[2], r[3]);
    }

    // a later position whose set is small enough to list and where an
    // unknown trump makes the weights differ
    let (g, deals, probs) = (0..)
        .find_map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = GameState::new(
                Deal::random(&mut rng),
                GameDecl::Suit(Suit::Spades),
                Seat::new(2),
            );
            while g.trick_number() <= 6 {
                let obs = Observation::from_game(&g, g.to_move(), [0; 3], None);
                if !obs.is_soloist() && count_deals(&obs) <= 12 {
                    let deals = enumerate_deals(&obs);
                    let probs = weight_distribution(
                        &models.location_matrix(&obs),
                        &deals,
                    );
                    if probs.iter().any(|&p| (p - probs[0]).abs() > 1e-9) {
                        return Some((g, deals, probs));
                    }
                }
                let m = g.legal_moves().iter().choose(&mut rng).unwrap();
                g.play(m).unwrap();
            }
            None
        })
        .unwrap();
    println!(
        "\nafter {} plies, {} deals remain for seat {}:",
        g.history().len(),
        deals.len(),
        g.to_move()
    );
    for (d, p) in deals.iter().zip(&probs) {
        let mark = if d == g.deal() { "  <- true deal" } else { "" };
        println!("{}  {p:.4}{mark}", d.to_location_string());
    }
}
