//! Solve random deals with all cards visible and report the value, the
//! value of every legal move, node counts and timings.
//!
//!     cargo run --release --example solve_deal -- [deals] [seed] [random plies first]

use std::time::{Duration, Instant};

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skat_core::solver::{PerfectState, Solver};
use skat_core::{Deal, GameDecl, GameState, Seat};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let plies: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = Duration::ZERO;
    let mut nodes = 0;
    for i in 0..n {
        let decl = GameDecl::all()[i % 6];
        let soloist = Seat::new(i % 3);
        let mut g = GameState::new(Deal::random(&mut rng), decl, soloist);
        for _ in 0..plies {
            let m = g.legal_moves().iter().choose(&mut rng).unwrap();
            g.play(m).unwrap();
        }
        let state = PerfectState::from_game(&g);
        let mut solver = Solver::new(decl, soloist);
        let t = Instant::now();
        let value = solver.solve(&state);
        let moves = solver.move_values(&state);
        let elapsed = t.elapsed();
        total += elapsed;
        nodes += solver.nodes();
        let pv = solver.principal_variation(&state);
        println!(
            "{decl:8} soloist {soloist}: {value:?} in {elapsed:.2?}, {} nodes",
            solver.nodes()
        );
        let mv: Vec<String> = moves
            .iter()
            .map(|(c, v)| format!("{c}={}", v.as_f64()))
            .collect();
        println!("    moves: {}", mv.join(" "));
        let line: Vec<String> = pv.iter().map(|c| c.to_string()).collect();
        println!("    line: {}", line.join(" "));
    }
    println!("total {total:.2?} over {n} positions, {nodes} nodes");
}
