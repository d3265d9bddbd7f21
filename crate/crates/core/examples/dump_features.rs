//! Golden feature vectors for a record file: one tab-separated line per
//! decision point and viewer in tricks 1 to 8, holding the record index,
//! the ply, the viewer seat, the indices of the non-zero features (all
//! features are 0/1) and the 32 location labels.
//!
//!     cargo run --release --example dump_features -- <records file>

use skat_core::features::{extract_features, targets, MAX_TRICK};
use skat_core::io::parse_records;
use skat_core::Seat;

fn main() {
    let path = std::env::args()
        .nth(1)
        .expect("usage: dump_features <records file>");
    let records = parse_records(&std::fs::read_to_string(path).unwrap()).unwrap();
    for (r, rec) in records.iter().enumerate() {
        for ply in 0..rec.moves.len().min(3 * MAX_TRICK) {
            for viewer in Seat::ALL {
                let f = extract_features(&rec.observation(viewer, ply)).unwrap();
                let active: Vec<String> = f
                    .values()
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(i, _)| i.to_string())
                    .collect();
                let labels: String = targets(viewer, &rec.deal)
                    .iter()
                    .map(|t| char::from(b'0' + t))
                    .collect();
                println!("{r}\t{ply}\t{viewer}\t{}\t{labels}", active.join(" "));
            }
        }
    }
}
