//! Line-oriented text game records.
//!
//! ```text
//! deal 01201201...            32 digits, location of each card (3 = skat)
//! soloist 1
//! game suit:C                 suit:D|H|S|C, grand or null
//! bids 0 18 20                highest bid per seat, 0 = passed
//! skat JC 7D                  skat as dealt before pickup, `-` if unknown
//! trick 0 7D 8D 9D            leader, then cards in play order
//! ...
//! result points 71 tricks 6 won value 36 scores 86 0 0
//! ```
//!
//! The deal is the position at the start of cardplay, so its skat holds the
//! cards the soloist put away. A record may stop mid-game; the result line
//! is only written for finished games and is checked against the replay.
//! Blank lines and lines starting with `#` are ignored, and a file may hold
//! several records, each starting with its `deal` line.

use std::fmt::Write as _;

use crate::cards::{Card, CardSet};
use crate::deal::Deal;
use crate::error::{Result, SkatError};
use crate::game::{GameState, GameSummary};
use crate::infoset::Observation;
use crate::rules::{GameDecl, Seat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRecord {
    pub deal: Deal,
    pub soloist: Seat,
    pub decl: GameDecl,
    pub bids: [u32; 3],
    pub original_skat: Option<CardSet>,
    pub moves: Vec<Card>,
}

impl GameRecord {
    /// A record with no cards played yet.
    pub fn new(
        deal: Deal,
        decl: GameDecl,
        soloist: Seat,
        bids: [u32; 3],
        original_skat: Option<CardSet>,
    ) -> GameRecord {
        GameRecord {
            deal,
            soloist,
            decl,
            bids,
            original_skat,
            moves: Vec::new(),
        }
    }

    pub fn replay(&self) -> Result<GameState> {
        crate::game::replay(self.deal, self.decl, self.soloist, &self.moves)
    }

    /// Game state after the first `n` moves; panics if the record does not
    /// replay.
    pub fn state_after(&self, n: usize) -> GameState {
        crate::game::replay(self.deal, self.decl, self.soloist, &self.moves[..n])
            .expect("record replays")
    }

    pub fn is_complete(&self) -> bool {
        self.moves.len() == 30
    }

    pub fn summary(&self) -> Option<GameSummary> {
        self.replay().ok()?.summary()
    }

    /// What `viewer` knows after the first `n` moves.
    pub fn observation(&self, viewer: Seat, n: usize) -> Observation {
        Observation::from_game(&self.state_after(n), viewer, self.bids, self.original_skat)
    }

    /// The same deal and declaration with the cardplay removed.
    pub fn without_moves(&self) -> GameRecord {
        GameRecord {
            moves: Vec::new(),
            ..self.clone()
        }
    }
}

pub fn result_line(s: &GameSummary) -> String {
    format!(
        "result points {} tricks {} {} value {} scores {} {} {}",
        s.soloist_points,
        s.soloist_tricks,
        if s.outcome.won { "won" } else { "lost" },
        s.value,
        s.scores[0],
        s.scores[1],
        s.scores[2]
    )
}

pub fn serialize_record(rec: &GameRecord) -> String {
    let mut out = String::new();
    writeln!(out, "deal {}", rec.deal.to_location_string()).unwrap();
    writeln!(out, "soloist {}", rec.soloist).unwrap();
    writeln!(out, "game {}", rec.decl).unwrap();
    writeln!(out, "bids {} {} {}", rec.bids[0], rec.bids[1], rec.bids[2]).unwrap();
    match rec.original_skat {
        Some(s) => writeln!(out, "skat {s}").unwrap(),
        None => writeln!(out, "skat -").unwrap(),
    }
    let game = rec.replay().expect("record replays");
    for (i, chunk) in rec.moves.chunks(3).enumerate() {
        let leader = match game.completed_tricks().get(i) {
            Some(t) => t.leader,
            None => game.current_trick().leader,
        };
        write!(out, "trick {leader}").unwrap();
        for c in chunk {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    if let Some(s) = game.summary() {
        out.push_str(&result_line(&s));
        out.push('\n');
    }
    out
}

pub fn serialize_records(recs: &[GameRecord]) -> String {
    recs.iter()
        .map(serialize_record)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses exactly one record.
pub fn parse_record(text: &str) -> Result<GameRecord> {
    let mut recs = parse_records(text)?;
    match recs.len() {
        1 => Ok(recs.pop().unwrap()),
        n => Err(SkatError::Record {
            line: 1,
            msg: format!("expected one record, found {n}"),
        }),
    }
}

pub fn parse_records(text: &str) -> Result<Vec<GameRecord>> {
    let mut out = Vec::new();
    let mut cur: Option<Builder> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        if key == "deal" {
            if let Some(b) = cur.take() {
                out.push(b.finish()?);
            }
            cur = Some(Builder::new(line));
        }
        let err = |msg: String| SkatError::Record { line, msg };
        let b = cur
            .as_mut()
            .ok_or_else(|| err("record must start with a `deal` line".into()))?;
        b.line(line, key, rest)?;
    }
    if let Some(b) = cur.take() {
        out.push(b.finish()?);
    }
    Ok(out)
}

struct Builder {
    start: usize,
    deal: Option<Deal>,
    soloist: Option<Seat>,
    decl: Option<GameDecl>,
    bids: Option<[u32; 3]>,
    skat: Option<Option<CardSet>>,
    game: Option<GameState>,
    partial_trick: bool,
    result: Option<(usize, String)>,
}

impl Builder {
    fn new(start: usize) -> Builder {
        Builder {
            start,
            deal: None,
            soloist: None,
            decl: None,
            bids: None,
            skat: None,
            game: None,
            partial_trick: false,
            result: None,
        }
    }

    fn line(&mut self, line: usize, key: &str, rest: &str) -> Result<()> {
        let err = |msg: String| SkatError::Record { line, msg };
        if self.result.is_some() {
            return Err(err("nothing may follow the result line".into()));
        }
        let header_done = self.game.is_some();
        match key {
            "deal" | "soloist" | "game" | "bids" | "skat" if header_done => {
                Err(err(format!("`{key}` line after the first trick")))
            }
            "deal" => {
                let deal = Deal::from_location_string(rest).map_err(|e| err(e.to_string()))?;
                deal.validate().map_err(|e| err(e.to_string()))?;
                set_once(&mut self.deal, deal, key, line)
            }
            "soloist" => {
                let seat = match rest {
                    "0" => Seat(0),
                    "1" => Seat(1),
                    "2" => Seat(2),
                    _ => return Err(err(format!("bad soloist seat `{rest}`"))),
                };
                set_once(&mut self.soloist, seat, key, line)
            }
            "game" => {
                let decl: GameDecl = rest.parse().map_err(|e: SkatError| err(e.to_string()))?;
                set_once(&mut self.decl, decl, key, line)
            }
            "bids" => {
                let v: Vec<u32> = rest
                    .split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|_| err(format!("bad bid `{t}`"))))
                    .collect::<Result<_>>()?;
                let bids: [u32; 3] = v
                    .try_into()
                    .map_err(|_| err("expected three bids".into()))?;
                set_once(&mut self.bids, bids, key, line)
            }
            "skat" => {
                let skat = if rest == "-" {
                    None
                } else {
                    let s: CardSet = rest.parse().map_err(|e: SkatError| err(e.to_string()))?;
                    if s.len() != 2 {
                        return Err(err(format!("skat has {} cards, expected 2", s.len())));
                    }
                    Some(s)
                };
                set_once(&mut self.skat, skat, key, line)
            }
            "trick" => self.trick(line, rest),
            "result" => {
                if self.game.as_ref().is_none_or(|g| !g.is_finished()) {
                    return Err(err("result line for an unfinished game".into()));
                }
                self.result = Some((
                    line,
                    format!(
                        "result {}",
                        rest.split_whitespace().collect::<Vec<_>>().join(" ")
                    ),
                ));
                Ok(())
            }
            other => Err(err(format!("unknown line type `{other}`"))),
        }
    }

    fn header(&self, line: usize) -> Result<(Deal, Seat, GameDecl)> {
        let missing = |what: &str| SkatError::Record {
            line,
            msg: format!(
                "record starting at line {} has no `{what}` line",
                self.start
            ),
        };
        let deal = self.deal.ok_or_else(|| missing("deal"))?;
        let soloist = self.soloist.ok_or_else(|| missing("soloist"))?;
        let decl = self.decl.ok_or_else(|| missing("game"))?;
        self.bids.ok_or_else(|| missing("bids"))?;
        let skat = self.skat.ok_or_else(|| missing("skat"))?;
        if let Some(s) = skat {
            if !s.is_subset(deal.hand(soloist).union(deal.skat)) {
                return Err(SkatError::Record {
                    line,
                    msg: "dealt skat is not among the soloist's cards".into(),
                });
            }
        }
        Ok((deal, soloist, decl))
    }

    fn trick(&mut self, line: usize, rest: &str) -> Result<()> {
        let err = |msg: String| SkatError::Record { line, msg };
        if self.game.is_none() {
            let (deal, soloist, decl) = self.header(line)?;
            self.game = Some(GameState::new(deal, decl, soloist));
        }
        if self.partial_trick {
            return Err(err("only the last trick may be incomplete".into()));
        }
        let game = self.game.as_mut().unwrap();
        let mut toks = rest.split_whitespace();
        let leader = toks
            .next()
            .ok_or_else(|| err("trick line without leader".into()))?;
        let expected = game.current_trick().leader;
        if leader != expected.to_string() {
            return Err(err(format!(
                "trick led by `{leader}`, but seat {expected} is on lead"
            )));
        }
        let cards: Vec<Card> = toks
            .map(|t| t.parse::<Card>().map_err(|e| err(e.to_string())))
            .collect::<Result<_>>()?;
        if cards.is_empty() || cards.len() > 3 {
            return Err(err(format!("trick has {} cards", cards.len())));
        }
        if game.is_finished() {
            return Err(err("more than ten tricks".into()));
        }
        for &c in &cards {
            game.play(c)?;
        }
        self.partial_trick = cards.len() < 3;
        Ok(())
    }

    fn finish(self) -> Result<GameRecord> {
        let end_line = self.result.as_ref().map(|r| r.0).unwrap_or(self.start);
        let (deal, soloist, decl) = self.header(end_line)?;
        let moves = self
            .game
            .as_ref()
            .map(|g| g.history().iter().map(|&(_, c)| c).collect())
            .unwrap_or_default();
        if let (Some((line, text)), Some(g)) = (&self.result, &self.game) {
            let expected = result_line(&g.summary().expect("finished game"));
            if *text != expected {
                return Err(SkatError::Record {
                    line: *line,
                    msg: format!("result does not match the replay, expected `{expected}`"),
                });
            }
        }
        Ok(GameRecord {
            deal,
            soloist,
            decl,
            bids: self.bids.unwrap(),
            original_skat: self.skat.unwrap(),
            moves,
        })
    }
}

fn set_once<T>(slot: &mut Option<T>, v: T, key: &str, line: usize) -> Result<()> {
    if slot.is_some() {
        return Err(SkatError::Record {
            line,
            msg: format!("duplicate `{key}` line"),
        });
    }
    *slot = Some(v);
    Ok(())
}
