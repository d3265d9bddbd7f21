//! Perfect Information Monte Carlo with state inference.
//!
//! The deals of the viewer's information set are weighted by the inference
//! network, deals are drawn from that distribution, and every legal move is
//! evaluated on each drawn deal by the perfect-information solver. The
//! soloist picks the move with the highest mean soloist value, defenders
//! the lowest.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cards::{Card, CardSet};
use crate::deal::Deal;
use crate::error::SkatError;
use crate::game::GameState;
use crate::inference::{normalize_log_weights, Models};
use crate::infoset::{InfoSet, Observation};
use crate::rules::{GameDecl, Rules, Seat};
use crate::solver::{PerfectState, SolveValue, Solver};

pub const DEFAULT_STATE_CAP: usize = 2_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlayerKind {
    /// Uniform over the information set.
    Ni,
    /// Weighted by bidding and declaration.
    Bdi,
    /// Weighted by bidding, declaration and cardplay.
    Bdci,
}

impl fmt::Display for PlayerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayerKind::Ni => "ni",
            PlayerKind::Bdi => "bdi",
            PlayerKind::Bdci => "bdci",
        })
    }
}

impl FromStr for PlayerKind {
    type Err = SkatError;

    fn from_str(s: &str) -> Result<PlayerKind, SkatError> {
        match s.to_ascii_lowercase().as_str() {
            "ni" => Ok(PlayerKind::Ni),
            "bdi" => Ok(PlayerKind::Bdi),
            "bdci" => Ok(PlayerKind::Bdci),
            _ => Err(SkatError::InvalidObservation(format!(
                "unknown player kind `{s}`"
            ))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Mean soloist card points.
    Points,
    /// Mean soloist win rate, ties broken by mean points.
    WinProb,
}

#[derive(Clone, Debug)]
pub struct PlayerConfig {
    pub kind: PlayerKind,
    pub n_samples: usize,
    pub state_cap: usize,
    pub seed: u64,
    pub objective: Objective,
    /// Networks used by BDI and BDCI players.
    pub models: Models,
}

impl PlayerConfig {
    pub fn new(kind: PlayerKind, n_samples: usize, seed: u64) -> PlayerConfig {
        PlayerConfig {
            kind,
            n_samples,
            state_cap: DEFAULT_STATE_CAP.max(n_samples),
            seed,
            objective: Objective::Points,
            models: Models::new(),
        }
    }

    pub fn ni(n_samples: usize, seed: u64) -> PlayerConfig {
        PlayerConfig::new(PlayerKind::Ni, n_samples, seed)
    }

    pub fn with_models(mut self, models: Models) -> PlayerConfig {
        self.models = models;
        self
    }

    pub fn with_state_cap(mut self, cap: usize) -> PlayerConfig {
        self.state_cap = cap;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> PlayerConfig {
        self.objective = objective;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> PlayerConfig {
        self.seed = seed;
        self
    }

    pub fn validate(&self) {
        assert!(self.n_samples >= 1, "need at least one sample");
        assert!(
            self.state_cap >= self.n_samples,
            "state cap below sample count"
        );
    }

    fn objective_for(&self, decl: GameDecl) -> Objective {
        match decl {
            GameDecl::Null => Objective::WinProb,
            _ => self.objective,
        }
    }
}

/// Seed for one decision: mixes the player seed with the decision point so
/// that successive moves use fresh randomness.
fn decision_seed(seed: u64, obs: &Observation, stream: u64) -> u64 {
    let mut x = seed ^ 0x5851_F42D_4C95_7F2D;
    for v in [obs.viewer.index() as u64, obs.history.len() as u64, stream] {
        x = (x ^ v).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        x ^= x >> 32;
    }
    x
}

#[derive(Clone, Debug)]
enum Support {
    /// Every deal of the information set, by rank.
    All(u64),
    /// A uniform subset, ascending ranks.
    Ranks(Vec<u64>),
}

/// Probability distribution over a set of deals of one information set.
#[derive(Clone, Debug)]
pub struct DealDistribution {
    set: InfoSet,
    support: Support,
    /// `None` means uniform.
    probs: Option<Vec<f64>>,
}

impl DealDistribution {
    pub fn info_set(&self) -> &InfoSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        match &self.support {
            Support::All(n) => *n as usize,
            Support::Ranks(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the support covers the whole information set.
    pub fn is_complete(&self) -> bool {
        matches!(self.support, Support::All(_))
    }

    pub fn is_uniform(&self) -> bool {
        self.probs.is_none()
    }

    pub fn rank(&self, i: usize) -> u64 {
        match &self.support {
            Support::All(_) => i as u64,
            Support::Ranks(r) => r[i],
        }
    }

    pub fn deal(&self, i: usize) -> Deal {
        self.set.unrank(self.rank(i))
    }

    pub fn prob(&self, i: usize) -> f64 {
        match &self.probs {
            Some(p) => p[i],
            None => 1.0 / self.len() as f64,
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.prob(i)).collect()
    }

    pub fn deals(&self) -> Vec<Deal> {
        (0..self.len()).map(|i| self.deal(i)).collect()
    }

    /// Position of `deal` in the support, if present.
    pub fn index_of(&self, deal: &Deal) -> Option<usize> {
        let r = self.set.rank(deal)?;
        match &self.support {
            Support::All(_) => Some(r as usize),
            Support::Ranks(ranks) => ranks.binary_search(&r).ok(),
        }
    }

    /// Probability the distribution gives `deal`; 0 outside the support.
    pub fn prob_of(&self, deal: &Deal) -> f64 {
        self.index_of(deal).map_or(0.0, |i| self.prob(i))
    }

    /// Draws `n` support indices with replacement.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        match &self.probs {
            None => (0..n).map(|_| rng.gen_range(0..self.len())).collect(),
            Some(p) => {
                let w = WeightedIndex::new(p).expect("probabilities are finite and sum to one");
                (0..n).map(|_| w.sample(rng)).collect()
            }
        }
    }
}

/// Deals and probabilities a player of `config.kind` samples from. Above
/// the state cap a uniform subset of `state_cap` deals is drawn first and
/// weighted afterwards.
pub fn build_distribution(obs: &Observation, config: &PlayerConfig) -> DealDistribution {
    let set = InfoSet::new(obs);
    let count = set.count();
    assert!(count > 0, "observation admits no deal");
    let support = if count > config.state_cap as u64 {
        Support::Ranks(
            set.sample_subset_ranks(config.state_cap, decision_seed(config.seed, obs, 1)),
        )
    } else {
        Support::All(count)
    };
    let probs = match config.kind {
        PlayerKind::Ni => None,
        PlayerKind::Bdi | PlayerKind::Bdci => {
            let l = config.models.location_matrix(obs);
            let lf = l.log_factors();
            let log_w: Vec<f64> = match &support {
                Support::All(n) => {
                    let mut v = Vec::with_capacity(*n as usize);
                    set.for_each_log_weight(&lf, |_, w| v.push(w));
                    v
                }
                Support::Ranks(ranks) => ranks
                    .iter()
                    .map(|&r| set.log_weight(&set.unrank(r), &lf))
                    .collect(),
            };
            let first = log_w[0];
            if log_w.iter().all(|&w| w == first) {
                None
            } else {
                Some(normalize_log_weights(&log_w))
            }
        }
    };
    DealDistribution {
        set,
        support,
        probs,
    }
}

/// Accumulated evaluation of one move.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MoveValue {
    pub card: Card,
    /// Sum of soloist values (points, or the null win flag).
    pub total: f64,
    /// Sum of soloist win indicators.
    pub wins: f64,
    /// Total weight or sample count behind the sums.
    pub count: f64,
}

impl MoveValue {
    pub fn mean(&self) -> f64 {
        self.total / self.count
    }

    pub fn win_rate(&self) -> f64 {
        self.wins / self.count
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoveChoice {
    pub card: Card,
    /// Per legal move in ascending card order; empty when the move was
    /// forced.
    pub values: Vec<MoveValue>,
}

thread_local! {
    static SOLVER: RefCell<Option<Solver>> = const { RefCell::new(None) };
}

/// Soloist values of every legal move of the deal's position, using this
/// thread's cached solver.
fn solve_moves(deal: &Deal, obs: &Observation) -> Vec<(Card, SolveValue)> {
    let mut g = GameState::new(*deal, obs.decl, obs.soloist);
    for &(_, c) in &obs.history {
        g.play(c)
            .expect("sampled deal is consistent with the history");
    }
    let state = PerfectState::from_game(&g);
    SOLVER.with(|cell| {
        let mut slot = cell.borrow_mut();
        let reuse = slot
            .as_ref()
            .is_some_and(|s| s.decl() == obs.decl && s.soloist() == obs.soloist);
        if !reuse {
            *slot = Some(Solver::new(obs.decl, obs.soloist));
        }
        slot.as_mut().unwrap().move_values(&state)
    })
}

/// Legal moves of the viewer at the observation.
pub fn legal_moves(obs: &Observation) -> CardSet {
    let trick = obs.current_trick();
    Rules::new(obs.decl).legal_moves(obs.own_hand(), trick.led())
}

/// Evaluates `(index, weight)` pairs and sums per-move values in the order
/// given, so results do not depend on thread scheduling.
fn evaluate(
    dist: &DealDistribution,
    obs: &Observation,
    items: &[(usize, f64)],
    legal: CardSet,
) -> Vec<MoveValue> {
    let per_deal: Vec<Vec<(Card, SolveValue)>> = items
        .par_iter()
        .map(|&(i, _)| solve_moves(&dist.deal(i), obs))
        .collect();
    let mut values: Vec<MoveValue> = legal
        .iter()
        .map(|card| MoveValue {
            card,
            total: 0.0,
            wins: 0.0,
            count: 0.0,
        })
        .collect();
    for (vals, &(_, w)) in per_deal.iter().zip(items) {
        for (mv, &(card, v)) in values.iter_mut().zip(vals) {
            debug_assert_eq!(mv.card, card);
            mv.total += w * v.as_f64();
            mv.wins += w * v.soloist_wins() as u8 as f64;
            mv.count += w;
        }
    }
    values
}

/// Sampled move values: `n_samples` deals drawn with replacement, each
/// evaluated for every legal move.
pub fn sampled_move_values(obs: &Observation, config: &PlayerConfig) -> Vec<MoveValue> {
    config.validate();
    let legal = legal_moves(obs);
    let dist = build_distribution(obs, config);
    let mut rng = ChaCha8Rng::seed_from_u64(decision_seed(config.seed, obs, 2));
    let mut draws = dist.sample(config.n_samples, &mut rng);
    draws.sort_unstable();
    let mut items: Vec<(usize, f64)> = Vec::new();
    for i in draws {
        match items.last_mut() {
            Some((j, w)) if *j == i => *w += 1.0,
            _ => items.push((i, 1.0)),
        }
    }
    evaluate(&dist, obs, &items, legal)
}

/// Exact expectation: every deal of the distribution evaluated once and
/// weighted by its probability.
pub fn expected_move_values(obs: &Observation, config: &PlayerConfig) -> Vec<MoveValue> {
    let legal = legal_moves(obs);
    let dist = build_distribution(obs, config);
    let items: Vec<(usize, f64)> = (0..dist.len()).map(|i| (i, dist.prob(i))).collect();
    evaluate(&dist, obs, &items, legal)
}

/// Best move for the side to move: highest mean for the soloist, lowest
/// for a defender, lowest card on ties.
pub fn select(values: &[MoveValue], maximize: bool, objective: Objective) -> Card {
    let key = |m: &MoveValue| match objective {
        Objective::Points => (m.mean(), 0.0),
        Objective::WinProb => (m.win_rate(), m.mean()),
    };
    let mut best = &values[0];
    for m in &values[1..] {
        let (a, b) = (key(m), key(best));
        let better = if maximize { a > b } else { a < b };
        if better {
            best = m;
        }
    }
    best.card
}

/// Chooses the viewer's move. Deterministic given the configuration.
pub fn choose_move(obs: &Observation, config: &PlayerConfig) -> MoveChoice {
    assert_eq!(obs.to_move(), obs.viewer, "viewer is not to move");
    let legal = legal_moves(obs);
    assert!(!legal.is_empty(), "no legal moves");
    if legal.len() == 1 {
        return MoveChoice {
            card: legal.first().unwrap(),
            values: Vec::new(),
        };
    }
    let values = sampled_move_values(obs, config);
    let card = select(
        &values,
        obs.viewer == obs.soloist,
        config.objective_for(obs.decl),
    );
    MoveChoice { card, values }
}

/// Viewer of a decision point in a game in progress.
pub fn observation_at(
    game: &GameState,
    bids: [u32; 3],
    original_skat: Option<CardSet>,
) -> Observation {
    Observation::from_game(game, game.to_move(), bids, original_skat)
}

/// Plays a game to the end with `players[seat]` choosing for each seat.
pub fn play_game(
    deal: Deal,
    decl: GameDecl,
    soloist: Seat,
    bids: [u32; 3],
    original_skat: Option<CardSet>,
    players: &[&PlayerConfig; 3],
) -> GameState {
    let mut g = GameState::new(deal, decl, soloist);
    while !g.is_finished() {
        let obs = observation_at(&g, bids, original_skat);
        let c = choose_move(&obs, players[g.to_move().index()]).card;
        g.play(c).expect("chosen move is legal");
    }
    g
}
