//! Game-record text format: parse a hand-written record, replay it, score
//! it and print the canonical serialization.
//!
//!     cargo run --example records

use skat_core::io::{parse_record, serialize_record};
use skat_core::Seat;

const RECORD: &str = "\
# every diamond with seat 0, hearts with seat 1, spades with seat 2
deal 00000000111111112222222200112233
soloist 0
game suit:C
bids 20 0 18
skat 7C 8C
trick 0 7D 9C 7S
trick 1 7H KC 8D
";

fn main() {
    let rec = parse_record(RECORD).unwrap();
    let g = rec.replay().unwrap();
    println!(
        "{} after {} cards, seat {} to move",
        rec.decl,
        rec.moves.len(),
        g.to_move()
    );
    println!(
        "soloist {} points, defenders {}",
        g.soloist_trick_points(),
        g.defender_trick_points()
    );
    let obs = rec.observation(Seat::new(1), rec.moves.len());
    println!(
        "seat 1 sees hand {} and {} unknown cards",
        obs.own_hand(),
        obs.unknown_cards().len()
    );
    let text = serialize_record(&rec);
    assert_eq!(parse_record(&text).unwrap(), rec);
    print!("{text}");
    match parse_record("deal 0000\nsoloist 0\n") {
        Err(e) => println!("malformed input is rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
