//! Skat cardplay engine built around Perfect Information Monte Carlo search
//! with learned state inference.
//!
//! Deals in an information set are weighted by a product of per-card
//! location probabilities predicted by a small dense network, deals are
//! sampled from that distribution, and each sample is solved exactly with
//! all cards visible.

pub mod cards;
pub mod deal;
pub mod error;
pub mod eval;
pub mod features;
pub mod game;
pub mod inference;
pub mod infoset;
pub mod io;
pub mod network;
pub mod pimc;
pub mod rules;
pub mod selfplay;
pub mod solver;

pub use cards::{card_points, Card, CardSet, Rank, Suit};
pub use deal::Deal;
pub use error::{Result, SkatError};
pub use features::{extract_features, Features};
pub use game::GameState;
pub use inference::{deal_weight, weight_distribution, Models};
pub use infoset::{
    consistent, count_deals, enumerate_deals, sample_uniform_subset, InfoSet, Observation,
};
pub use io::GameRecord;
pub use network::{LocationMatrix, Network, Variant};
pub use pimc::{choose_move, PlayerConfig, PlayerKind};
pub use rules::{GameDecl, GameKind, Seat, Trick};
pub use solver::{PerfectState, SolveValue, Solver};
