//! Command-line front end: solving, single decisions, information-set
//! counts, self-play corpora, TSSR measurement and tournaments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use skat_core::eval::{self, Method};
use skat_core::io::{load_weights, parse_records, serialize_record};
use skat_core::pimc::{self, observation_at, Objective, DEFAULT_STATE_CAP};
use skat_core::selfplay::generate_game;
use skat_core::solver::{PerfectState, Solver};
use skat_core::{
    count_deals, Deal, GameDecl, GameKind, GameRecord, InfoSet, Models, Observation, PlayerConfig,
    PlayerKind, Result, Seat, SkatError, Variant,
};

#[derive(Parser)]
#[command(
    name = "skat",
    version,
    about = "Skat cardplay engine with PIMC search and card-location inference"
)]
struct Cli {
    /// Seed for every random choice; equal seeds give equal output.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a position with all cards visible.
    Solve(SolveArgs),
    /// Choose the next move of a recorded game prefix.
    PlayMove(PlayMoveArgs),
    /// Count the deals consistent with what a seat has seen.
    Count(CountArgs),
    /// Generate a self-play corpus of game records.
    GenData(GenDataArgs),
    /// True state sampling ratio over recorded games.
    Tssr(TssrArgs),
    /// Paired matches between two players.
    Tournament(TournamentArgs),
}

/// A position: a record file, or a deal given inline, or a random deal.
#[derive(Args)]
struct PositionArgs {
    /// Game record file; the first record is used unless --index is given.
    #[arg(long)]
    record: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Use only the first N recorded moves.
    #[arg(long)]
    moves: Option<usize>,
    /// 32-digit location string (0-2 hands, 3 skat) instead of a record.
    #[arg(long)]
    deal: Option<String>,
    /// Declaration for --deal or a random deal: suit:D|H|S|C, grand, null.
    #[arg(long)]
    game: Option<String>,
    #[arg(long, default_value_t = 0)]
    soloist: usize,
}

#[derive(Args)]
struct PlayerArgs {
    /// Weight file; repeat for several game kinds or variants.
    #[arg(long)]
    weights: Vec<PathBuf>,
    /// Sampled deals per decision.
    #[arg(long, default_value_t = 160)]
    samples: usize,
    /// Largest set weighted in full; larger sets are subsampled uniformly.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// Trump-location prior strength for inference players without
    /// weight files.
    #[arg(long)]
    prior: Option<f32>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    position: PositionArgs,
}

#[derive(Args)]
struct PlayMoveArgs {
    #[command(flatten)]
    position: PositionArgs,
    #[command(flatten)]
    player_args: PlayerArgs,
    #[arg(long, default_value = "ni")]
    player: PlayerKind,
    /// Rank moves by win probability instead of mean card points.
    #[arg(long)]
    win_prob: bool,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    position: PositionArgs,
    /// Seat whose view is counted; default the seat to move.
    #[arg(long)]
    viewer: Option<usize>,
    /// Count at every decision point of the record.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct GenDataArgs {
    #[arg(long, default_value_t = 100)]
    games: usize,
    /// Only keep games of this kind: suit, grand or null.
    #[arg(long)]
    kind: Option<String>,
    /// Deal and bid only; do not play the cards.
    #[arg(long)]
    no_play: bool,
    #[command(flatten)]
    player_args: PlayerArgs,
    #[arg(long, default_value = "ni")]
    player: PlayerKind,
    /// Record file to write; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TssrArgs {
    /// Game records to measure on.
    #[arg(long)]
    records: PathBuf,
    #[command(flatten)]
    player_args: PlayerArgs,
    #[arg(long, default_value = "ni")]
    player: PlayerKind,
    /// Measure the oracle that knows the true deal.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 8)]
    max_trick: usize,
    /// Decision points per (trick, role, kind) cell.
    #[arg(long, default_value_t = 1000)]
    per_cell: usize,
    /// CSV file for the per-cell table.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TournamentArgs {
    /// Deals to play; generated from the seed if absent.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Player A, then player B.
    #[arg(long, num_args = 1, default_values = ["ni", "ni"])]
    player: Vec<PlayerKind>,
    #[command(flatten)]
    player_args: PlayerArgs,
    #[arg(long, default_value_t = 100)]
    matches: usize,
    /// Only generated deals of this kind: suit, grand or null.
    #[arg(long)]
    kind: Option<String>,
    /// CSV file for the summary row.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let seed = cli.seed;
    let result = match cli.command {
        Command::Solve(a) => solve(&a, seed),
        Command::PlayMove(a) => play_move(&a, seed),
        Command::Count(a) => count(&a, seed),
        Command::GenData(a) => gen_data(&a, seed),
        Command::Tssr(a) => tssr(&a, seed),
        Command::Tournament(a) => tournament(&a, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn usage(msg: impl Into<String>) -> SkatError {
    SkatError::InvalidObservation(msg.into())
}

fn parse_kind(s: &str) -> Result<GameKind> {
    GameKind::ALL
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| usage(format!("unknown game kind `{s}`")))
}

fn read_records(path: &Path) -> Result<Vec<GameRecord>> {
    let recs = parse_records(&fs::read_to_string(path)?)?;
    if recs.is_empty() {
        return Err(usage(format!("{} holds no records", path.display())));
    }
    Ok(recs)
}

impl PositionArgs {
    /// Record holding the position; its moves end at the position.
    fn load(&self, seed: u64) -> Result<GameRecord> {
        let mut rec = if let Some(path) = &self.record {
            let recs = read_records(path)?;
            recs.into_iter()
                .nth(self.index)
                .ok_or_else(|| usage(format!("record index {} out of range", self.index)))?
        } else {
            let decl: GameDecl = self.game.as_deref().unwrap_or("grand").parse()?;
            if self.soloist > 2 {
                return Err(usage("soloist must be 0, 1 or 2"));
            }
            let deal = match &self.deal {
                Some(s) => {
                    let d = Deal::from_location_string(s)?;
                    d.validate()?;
                    d
                }
                None => Deal::random(&mut ChaCha8Rng::seed_from_u64(seed)),
            };
            GameRecord::new(deal, decl, Seat::new(self.soloist), [0; 3], None)
        };
        if let Some(n) = self.moves {
            if n > rec.moves.len() {
                return Err(usage(format!("record has only {} moves", rec.moves.len())));
            }
            rec.moves.truncate(n);
        }
        rec.replay()?;
        Ok(rec)
    }
}

impl PlayerArgs {
    /// Networks per variant from the weight files, or the trump prior.
    fn models(&self, variant: Variant) -> Result<Models> {
        let mut models = match self.prior {
            Some(strength) => Models::trump_prior(variant, strength),
            None => Models::new(),
        };
        for path in &self.weights {
            let net = load_weights(path)?;
            if net.variant == variant {
                models.insert(net);
            }
        }
        Ok(models)
    }

    fn config(&self, kind: PlayerKind, seed: u64) -> Result<PlayerConfig> {
        if self.samples == 0 {
            return Err(usage("--samples must be at least 1"));
        }
        let mut c = PlayerConfig::new(kind, self.samples, seed)
            .with_state_cap(self.state_cap.max(self.samples));
        match kind {
            PlayerKind::Ni => {}
            PlayerKind::Bdi => c = c.with_models(self.models(Variant::Bdi)?),
            PlayerKind::Bdci => c = c.with_models(self.models(Variant::Bdci)?),
        }
        if kind != PlayerKind::Ni {
            for k in GameKind::ALL {
                if c.models.get(k).is_none() {
                    log::warn!(
                        "{kind} player has no network for {} games; it samples uniformly there",
                        k.name()
                    );
                }
            }
        }
        Ok(c)
    }
}

fn format_value(decl: GameDecl, v: f64) -> String {
    match decl {
        GameDecl::Null if v == 1.0 => "soloist wins".into(),
        GameDecl::Null => "soloist loses".into(),
        _ => format!("{v} soloist card points"),
    }
}

fn solve(a: &SolveArgs, seed: u64) -> Result<()> {
    let rec = a.position.load(seed)?;
    let g = rec.replay()?;
    if g.is_finished() {
        return Err(usage("the game is already over"));
    }
    println!("deal {}", rec.deal.to_location_string());
    println!(
        "game {} soloist {} after {} moves",
        rec.decl,
        rec.soloist,
        rec.moves.len()
    );
    let state = PerfectState::from_game(&g);
    let mut solver = Solver::new(rec.decl, rec.soloist);
    let t = Instant::now();
    let value = solver.solve(&state);
    let moves = solver.move_values(&state);
    let pv = solver.principal_variation(&state);
    println!(
        "value {} ({:.2?}, {} nodes)",
        format_value(rec.decl, value.as_f64()),
        t.elapsed(),
        solver.nodes()
    );
    for (c, v) in moves {
        println!("  {c}  {}", format_value(rec.decl, v.as_f64()));
    }
    let line: Vec<String> = pv.iter().map(|c| c.to_string()).collect();
    println!("line {}", line.join(" "));
    Ok(())
}

fn play_move(a: &PlayMoveArgs, seed: u64) -> Result<()> {
    let rec = a.position.load(seed)?;
    let g = rec.replay()?;
    if g.is_finished() {
        return Err(usage("the game is already over"));
    }
    let mut config = a.player_args.config(a.player, seed)?;
    if a.win_prob {
        config = config.with_objective(Objective::WinProb);
    }
    let obs = observation_at(&g, rec.bids, rec.original_skat);
    let t = Instant::now();
    let choice = pimc::choose_move(&obs, &config);
    println!(
        "seat {} ({}) at trick {}: {} in {:.2?}",
        obs.viewer,
        if obs.is_soloist() {
            "soloist"
        } else {
            "defender"
        },
        obs.trick_number(),
        choice.card,
        t.elapsed()
    );
    for v in &choice.values {
        println!(
            "  {}  mean {:7.3}  win {:.3}  weight {}",
            v.card,
            v.mean(),
            v.win_rate(),
            v.count
        );
    }
    Ok(())
}

fn count_one(obs: &Observation) -> (u64, std::time::Duration) {
    let t = Instant::now();
    let n = count_deals(obs);
    (n, t.elapsed())
}

fn count(a: &CountArgs, seed: u64) -> Result<()> {
    let rec = a.position.load(seed)?;
    let viewer = match a.viewer {
        Some(v) if v > 2 => return Err(usage("viewer must be 0, 1 or 2")),
        Some(v) => Some(Seat::new(v)),
        None => None,
    };
    let points: Vec<usize> = if a.all {
        (0..=rec.moves.len()).collect()
    } else {
        vec![rec.moves.len()]
    };
    println!("moves,viewer,role,deals,unknown_cards,micros");
    for n in points {
        let g = rec.state_after(n);
        if g.is_finished() {
            continue;
        }
        let v = viewer.unwrap_or(g.to_move());
        let obs = Observation::from_game(&g, v, rec.bids, rec.original_skat);
        let (count, took) = count_one(&obs);
        let unknown = InfoSet::new(&obs).unknown_cards().len();
        let role = if obs.is_soloist() {
            "soloist"
        } else {
            "defender"
        };
        println!("{n},{v},{role},{count},{unknown},{}", took.as_micros());
    }
    Ok(())
}

/// Deals from the seed, optionally restricted to one game kind.
fn generated_deals(n: usize, kind: Option<GameKind>, seed: u64) -> Vec<GameRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let rec = generate_game(&mut rng);
        if kind.is_none_or(|k| rec.decl.kind() == k) {
            out.push(rec);
        }
    }
    out
}

fn gen_data(a: &GenDataArgs, seed: u64) -> Result<()> {
    let kind = a.kind.as_deref().map(parse_kind).transpose()?;
    let deals = generated_deals(a.games, kind, seed);
    let player = a.player_args.config(a.player, seed)?;
    let t = Instant::now();
    let records: Vec<GameRecord> = if a.no_play {
        deals
    } else {
        deals
            .into_par_iter()
            .enumerate()
            .map(|(i, mut rec)| {
                let p = player
                    .clone()
                    .with_seed(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let g = pimc::play_game(
                    rec.deal,
                    rec.decl,
                    rec.soloist,
                    rec.bids,
                    rec.original_skat,
                    &[&p, &p, &p],
                );
                rec.moves = g.history().iter().map(|&(_, c)| c).collect();
                rec
            })
            .collect()
    };
    let mut text = String::new();
    for r in &records {
        text.push_str(&serialize_record(r));
    }
    match &a.out {
        Some(path) => {
            fs::write(path, text)?;
            eprintln!(
                "wrote {} records to {} in {:.1?}",
                records.len(),
                path.display(),
                t.elapsed()
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn tssr(a: &TssrArgs, seed: u64) -> Result<()> {
    let records = read_records(&a.records)?;
    let (label, method) = if a.oracle {
        ("oracle".to_string(), Method::Oracle)
    } else {
        match a.player {
            PlayerKind::Ni => ("ni".to_string(), Method::Uniform),
            kind => {
                let c = a.player_args.config(kind, seed)?;
                (kind.to_string(), Method::Network(c.models))
            }
        }
    };
    let t = Instant::now();
    let samples = eval::tssr_samples(&records, &method, a.max_trick, a.per_cell);
    let cells = eval::summarize_tssr(&samples);
    println!(
        "{label}: {} decision points in {:.1?}",
        samples.len(),
        t.elapsed()
    );
    println!(
        "{:>5} {:>8} {:>5} {:>7} {:>10} {:>9} {:>12}",
        "trick", "role", "kind", "n", "tssr", "se", "states"
    );
    for c in &cells {
        println!(
            "{:>5} {:>8} {:>5} {:>7} {:>10.4} {:>9.4} {:>12.0}",
            c.trick,
            c.role.name(),
            c.kind.name(),
            c.samples,
            c.mean,
            c.std_err,
            c.mean_states
        );
    }
    if let Some(path) = &a.out {
        fs::write(path, eval::tssr_csv(&cells))?;
    }
    Ok(())
}

fn tournament(a: &TournamentArgs, seed: u64) -> Result<()> {
    let [pa, pb] = match a.player.as_slice() {
        [x] => [*x, PlayerKind::Ni],
        [x, y] => [*x, *y],
        _ => return Err(usage("give --player once or twice")),
    };
    let kind = a.kind.as_deref().map(parse_kind).transpose()?;
    let records = match &a.records {
        Some(path) => read_records(path)?
            .into_iter()
            .filter(|r| kind.is_none_or(|k| r.decl.kind() == k))
            .collect(),
        None => generated_deals(a.matches, kind, seed),
    };
    let ca = a.player_args.config(pa, seed)?;
    let cb = a.player_args.config(pb, seed.wrapping_add(1))?;
    let t = Instant::now();
    let summary = eval::run_tournament(&records, &ca, &cb, a.matches)?;
    let (la, lb) = (pa.to_string(), pb.to_string());
    print!("{}", eval::tournament_table(&la, &lb, &summary));
    println!("  {:.1?}", t.elapsed());
    if let Some(path) = &a.out {
        fs::write(path, eval::tournament_csv(&la, &lb, &summary))?;
    }
    Ok(())
}
