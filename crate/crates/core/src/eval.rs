//! Inference quality and playing strength.
//!
//! The true state sampling ratio of a method at a decision point is the
//! probability it gives the true deal times the size of the information
//! set: 1 for uniform sampling and the full set size for an oracle that
//! always knows the deal. Tournaments play every deal twice with the
//! soloist and defender roles swapped between the two players.

use std::fmt::Write as _;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::deal::Deal;
use crate::error::{Result, SkatError};
use crate::inference::Models;
use crate::infoset::{consistent, InfoSet, Observation};
use crate::io::GameRecord;
use crate::pimc::{self, PlayerConfig};
use crate::rules::{GameKind, Seat};

/// How a method distributes probability over the information set.
#[derive(Clone, Debug)]
pub enum Method {
    /// Every consistent deal equally likely.
    Uniform,
    /// Deals weighted by the networks' location probabilities.
    Network(Models),
    /// All probability on the true deal.
    Oracle,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Soloist,
    Defender,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Soloist => "soloist",
            Role::Defender => "defender",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TssrSample {
    pub trick: usize,
    pub role: Role,
    pub kind: GameKind,
    pub tssr: f64,
    pub n_states: u64,
}

/// Whether every unknown card has the same factor in each location it may
/// occupy, so that all deals of the set weigh the same.
fn constant_weights(set: &InfoSet, lf: &[[f64; 4]; 32]) -> bool {
    set.unknown_cards()
        .iter()
        .zip(set.allowed())
        .all(|(c, &allowed)| {
            let row = lf[c.index()];
            let mut vals = (0..4).filter(|l| allowed & (1 << l) != 0).map(|l| row[l]);
            let first = vals.next();
            vals.all(|v| Some(v) == first)
        })
}

/// Probability of the true deal under the method, times the number of
/// deals consistent with the observation. Exact: the normalizer is summed
/// over the whole information set.
pub fn tssr(obs: &Observation, true_deal: &Deal, method: &Method) -> TssrSample {
    assert!(
        consistent(true_deal, obs),
        "true deal contradicts the observation"
    );
    let set = InfoSet::new(obs);
    let n = set.count();
    let value = match method {
        Method::Uniform => 1.0,
        Method::Oracle => n as f64,
        Method::Network(models) => {
            let lf = models.location_matrix(obs).log_factors();
            if constant_weights(&set, &lf) {
                1.0
            } else {
                let log_z = set.log_partition(&lf);
                let log_w = set.log_weight(true_deal, &lf);
                if log_z == f64::NEG_INFINITY {
                    1.0
                } else {
                    n as f64 * (log_w - log_z).min(0.0).exp()
                }
            }
        }
    };
    TssrSample {
        trick: obs.trick_number(),
        role: if obs.is_soloist() {
            Role::Soloist
        } else {
            Role::Defender
        },
        kind: obs.decl.kind(),
        tssr: value,
        n_states: n,
    }
}

/// TSSR at every decision point of tricks `1..=max_trick` of the records,
/// seen by the player to move; at most `per_cell` samples for each
/// (trick, role, kind) cell.
pub fn tssr_samples(
    records: &[GameRecord],
    method: &Method,
    max_trick: usize,
    per_cell: usize,
) -> Vec<TssrSample> {
    let mut points: Vec<(usize, usize)> = Vec::new();
    let mut counts = std::collections::HashMap::new();
    for (r, rec) in records.iter().enumerate() {
        let g = match rec.replay() {
            Ok(g) => g,
            Err(_) => continue,
        };
        let soloist = rec.soloist;
        for (m, &(seat, _)) in g.history().iter().enumerate().take(3 * max_trick) {
            let role = if seat == soloist {
                Role::Soloist
            } else {
                Role::Defender
            };
            let key = (m / 3 + 1, role, rec.decl.kind());
            let c = counts.entry(key).or_insert(0usize);
            if *c < per_cell {
                *c += 1;
                points.push((r, m));
            }
        }
    }
    points
        .par_iter()
        .map(|&(r, m)| {
            let rec = &records[r];
            let g = rec.state_after(m);
            let obs = Observation::from_game(&g, g.to_move(), rec.bids, rec.original_skat);
            tssr(&obs, &rec.deal, method)
        })
        .collect()
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub trick: usize,
    pub role: Role,
    pub kind: GameKind,
    pub samples: usize,
    pub mean: f64,
    pub std_err: f64,
    pub mean_states: f64,
}

pub fn summarize_tssr(samples: &[TssrSample]) -> Vec<CellSummary> {
    let mut cells: std::collections::BTreeMap<(usize, Role, u8), Vec<&TssrSample>> =
        Default::default();
    for s in samples {
        cells
            .entry((s.trick, s.role, s.kind.tag()))
            .or_default()
            .push(s);
    }
    cells
        .into_iter()
        .map(|((trick, role, kind), v)| {
            let xs: Vec<f64> = v.iter().map(|s| s.tssr).collect();
            let (mean, sd) = mean_sd(&xs);
            CellSummary {
                trick,
                role,
                kind: GameKind::from_tag(kind).unwrap(),
                samples: xs.len(),
                mean,
                std_err: sd / (xs.len() as f64).sqrt(),
                mean_states: v.iter().map(|s| s.n_states as f64).sum::<f64>() / v.len() as f64,
            }
        })
        .collect()
}

pub fn tssr_csv(cells: &[CellSummary]) -> String {
    let mut out = String::from("trick,role,kind,samples,mean_tssr,std_err,mean_states\n");
    for c in cells {
        writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.1}",
            c.trick,
            c.role.name(),
            c.kind.name(),
            c.samples,
            c.mean,
            c.std_err,
            c.mean_states
        )
        .unwrap();
    }
    out
}

/// Sample mean and standard deviation (n - 1 denominator).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameResult {
    pub soloist_side: Side,
    pub kind: GameKind,
    pub value: u32,
    pub won: bool,
    pub soloist_points: u32,
    /// Tournament points of side A and side B; the defender side gets the
    /// sum over its two seats.
    pub points: [i32; 2],
    pub moves: Vec<crate::cards::Card>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult {
    pub match_id: u64,
    pub games: [GameResult; 2],
}

fn game_seed(seed: u64, match_id: u64, game: u64) -> u64 {
    let mut x = seed;
    for v in [match_id, game] {
        x = (x ^ v.wrapping_add(0x632B_E59B_D9B4_E019)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        x ^= x >> 29;
    }
    x
}

/// Plays the record's deal twice: A as soloist against two copies of B,
/// then B as soloist against two copies of A.
pub fn run_match(
    record: &GameRecord,
    match_id: u64,
    a: &PlayerConfig,
    b: &PlayerConfig,
) -> MatchResult {
    let play = |game: u64, soloist_side: Side| {
        let (sol, def) = match soloist_side {
            Side::A => (a, b),
            Side::B => (b, a),
        };
        let sol = sol.clone().with_seed(game_seed(sol.seed, match_id, game));
        let def = def.clone().with_seed(game_seed(def.seed, match_id, game));
        let mut players = [&def, &def, &def];
        players[record.soloist.index()] = &sol;
        let g = pimc::play_game(
            record.deal,
            record.decl,
            record.soloist,
            record.bids,
            record.original_skat,
            &players,
        );
        let s = g.summary().expect("game finished");
        let soloist_score = s.scores[record.soloist.index()];
        let defender_score: i32 = Seat::ALL
            .iter()
            .filter(|&&x| x != record.soloist)
            .map(|x| s.scores[x.index()])
            .sum();
        let points = match soloist_side {
            Side::A => [soloist_score, defender_score],
            Side::B => [defender_score, soloist_score],
        };
        GameResult {
            soloist_side,
            kind: record.decl.kind(),
            value: s.value,
            won: s.outcome.won,
            soloist_points: s.soloist_points,
            points,
            moves: g.history().iter().map(|&(_, c)| c).collect(),
        }
    };
    MatchResult {
        match_id,
        games: [play(0, Side::A), play(1, Side::B)],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TournamentSummary {
    pub matches: usize,
    pub games: usize,
    pub mean_a: f64,
    pub sd_a: f64,
    pub mean_b: f64,
    pub sd_b: f64,
    /// Mean of A's minus B's points per game.
    pub delta: f64,
    /// Standard error of `delta` from the per-match differences.
    pub delta_se: f64,
    pub welch_t: f64,
    pub welch_df: f64,
    pub welch_p: f64,
    /// Soloist win rate per game kind with A, then B, as soloist; NaN when
    /// no game of that kind was played.
    pub win_rate_a: [f64; 3],
    pub win_rate_b: [f64; 3],
    pub results: Vec<MatchResult>,
}

/// Plays `n_matches` matches over the records, cycling through them.
pub fn run_tournament(
    records: &[GameRecord],
    a: &PlayerConfig,
    b: &PlayerConfig,
    n_matches: usize,
) -> Result<TournamentSummary> {
    if records.is_empty() {
        return Err(SkatError::InvalidDeal(
            "tournament needs at least one record".into(),
        ));
    }
    let results: Vec<MatchResult> = (0..n_matches)
        .into_par_iter()
        .map(|i| run_match(&records[i % records.len()].without_moves(), i as u64, a, b))
        .collect();
    Ok(summarize(results))
}

pub fn summarize(results: Vec<MatchResult>) -> TournamentSummary {
    let games: Vec<&GameResult> = results.iter().flat_map(|m| m.games.iter()).collect();
    let pa: Vec<f64> = games.iter().map(|g| g.points[0] as f64).collect();
    let pb: Vec<f64> = games.iter().map(|g| g.points[1] as f64).collect();
    let (mean_a, sd_a) = mean_sd(&pa);
    let (mean_b, sd_b) = mean_sd(&pb);
    // per-match difference per game: both games of a match share a deal
    let diffs: Vec<f64> = results
        .iter()
        .map(|m| {
            m.games
                .iter()
                .map(|g| (g.points[0] - g.points[1]) as f64)
                .sum::<f64>()
                / 2.0
        })
        .collect();
    let (delta, sd_d) = mean_sd(&diffs);
    let delta_se = sd_d / (diffs.len() as f64).sqrt();
    let (welch_t, welch_df, welch_p) = welch(&pa, &pb);
    let rate = |side: Side| {
        let mut out = [f64::NAN; 3];
        for k in GameKind::ALL {
            let v: Vec<bool> = games
                .iter()
                .filter(|g| g.soloist_side == side && g.kind == k)
                .map(|g| g.won)
                .collect();
            if !v.is_empty() {
                out[k.tag() as usize] = v.iter().filter(|&&w| w).count() as f64 / v.len() as f64;
            }
        }
        out
    };
    TournamentSummary {
        matches: results.len(),
        games: games.len(),
        mean_a,
        sd_a,
        mean_b,
        sd_b,
        delta,
        delta_se,
        welch_t,
        welch_df,
        welch_p,
        win_rate_a: rate(Side::A),
        win_rate_b: rate(Side::B),
        results,
    }
}

/// Two-sided Welch test of equal means: (t, degrees of freedom, p).
pub fn welch(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let (mx, sx) = mean_sd(x);
    let (my, sy) = mean_sd(y);
    let (vx, vy) = (sx * sx / x.len() as f64, sy * sy / y.len() as f64);
    let se = (vx + vy).sqrt();
    if se == 0.0 || !se.is_finite() {
        let t = if mx == my { 0.0 } else { f64::INFINITY };
        return (t, f64::NAN, if mx == my { 1.0 } else { 0.0 });
    }
    let t = (mx - my) / se;
    let df =
        (vx + vy).powi(2) / (vx * vx / (x.len() as f64 - 1.0) + vy * vy / (y.len() as f64 - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    let p = 2.0 * (1.0 - dist.cdf(t.abs()));
    (t, df, p)
}

pub fn tournament_csv(label_a: &str, label_b: &str, s: &TournamentSummary) -> String {
    let mut out = String::from(
        "player_a,player_b,matches,games,mean_a,sd_a,mean_b,sd_b,delta,delta_se,welch_t,welch_df,welch_p,\
         a_soloist_win_suit,a_soloist_win_grand,a_soloist_win_null,\
         b_soloist_win_suit,b_soloist_win_grand,b_soloist_win_null\n",
    );
    write!(
        out,
        "{label_a},{label_b},{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.2},{:.6}",
        s.matches,
        s.games,
        s.mean_a,
        s.sd_a,
        s.mean_b,
        s.sd_b,
        s.delta,
        s.delta_se,
        s.welch_t,
        s.welch_df,
        s.welch_p
    )
    .unwrap();
    for r in s.win_rate_a.iter().chain(&s.win_rate_b) {
        write!(out, ",{r:.4}").unwrap();
    }
    out.push('\n');
    out
}

/// Human-readable summary table.
pub fn tournament_table(label_a: &str, label_b: &str, s: &TournamentSummary) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{label_a} vs {label_b}: {} matches, {} games",
        s.matches, s.games
    )
    .unwrap();
    writeln!(
        out,
        "  {label_a:>6}: {:8.2} points/game (sd {:.2})",
        s.mean_a, s.sd_a
    )
    .unwrap();
    writeln!(
        out,
        "  {label_b:>6}: {:8.2} points/game (sd {:.2})",
        s.mean_b, s.sd_b
    )
    .unwrap();
    writeln!(
        out,
        "  delta {:+.2} (se {:.2}), Welch t {:.3}, p {:.4}",
        s.delta, s.delta_se, s.welch_t, s.welch_p
    )
    .unwrap();
    for k in GameKind::ALL {
        let i = k.tag() as usize;
        writeln!(
            out,
            "  soloist wins {:5}: {label_a} {:.3}  {label_b} {:.3}",
            k.name(),
            s.win_rate_a[i],
            s.win_rate_b[i]
        )
        .unwrap();
    }
    out
}
