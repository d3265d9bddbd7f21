//! Cardplay state machine used for replay, self-play and records.

use crate::cards::{Card, CardSet};
use crate::deal::Deal;
use crate::error::{Result, SkatError};
use crate::rules::{game_outcome, game_value, GameDecl, Outcome, Rules, Seat, Trick};

/// Final tallies of a finished game, skat points counted for the soloist.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GameSummary {
    pub soloist_points: u32,
    pub defender_points: u32,
    pub soloist_tricks: u32,
    pub outcome: Outcome,
    pub value: u32,
    pub scores: [i32; 3],
}

#[derive(Clone, Debug)]
pub struct GameState {
    rules: Rules,
    deal: Deal,
    soloist: Seat,
    /// Soloist's twelve cards (hand at cardplay plus the skat) for matadors.
    soloist_cards: CardSet,
    hands: [CardSet; 3],
    trick: Trick,
    completed: Vec<Trick>,
    history: Vec<(Seat, Card)>,
    soloist_trick_points: u32,
    defender_trick_points: u32,
    soloist_tricks: u32,
}

impl GameState {
    /// Cardplay begins with seat 0 leading.
    pub fn new(deal: Deal, decl: GameDecl, soloist: Seat) -> GameState {
        GameState {
            rules: Rules::new(decl),
            deal,
            soloist,
            soloist_cards: deal.hand(soloist).union(deal.skat),
            hands: deal.hands,
            trick: Trick::new(Seat(0)),
            completed: Vec::with_capacity(10),
            history: Vec::with_capacity(30),
            soloist_trick_points: 0,
            defender_trick_points: 0,
            soloist_tricks: 0,
        }
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    pub fn decl(&self) -> GameDecl {
        self.rules.decl
    }

    pub fn deal(&self) -> &Deal {
        &self.deal
    }

    pub fn soloist(&self) -> Seat {
        self.soloist
    }

    pub fn hand(&self, seat: Seat) -> CardSet {
        self.hands[seat.index()]
    }

    pub fn hands(&self) -> [CardSet; 3] {
        self.hands
    }

    pub fn current_trick(&self) -> &Trick {
        &self.trick
    }

    pub fn completed_tricks(&self) -> &[Trick] {
        &self.completed
    }

    pub fn history(&self) -> &[(Seat, Card)] {
        &self.history
    }

    pub fn to_move(&self) -> Seat {
        self.trick.to_move()
    }

    /// 1-based number of the trick being played (11 once finished).
    pub fn trick_number(&self) -> usize {
        self.completed.len() + 1
    }

    pub fn is_finished(&self) -> bool {
        self.completed.len() == 10
    }

    pub fn soloist_trick_points(&self) -> u32 {
        self.soloist_trick_points
    }

    pub fn defender_trick_points(&self) -> u32 {
        self.defender_trick_points
    }

    pub fn soloist_tricks(&self) -> u32 {
        self.soloist_tricks
    }

    pub fn defender_tricks(&self) -> u32 {
        self.completed.len() as u32 - self.soloist_tricks
    }

    pub fn legal_moves(&self) -> CardSet {
        self.rules
            .legal_moves(self.hands[self.to_move().index()], self.trick.led())
    }

    pub fn play(&mut self, card: Card) -> Result<()> {
        let index = self.history.len();
        if self.is_finished() {
            return Err(SkatError::IllegalMove {
                index,
                reason: "game already finished".into(),
            });
        }
        let seat = self.to_move();
        if !self.hands[seat.index()].contains(card) {
            return Err(SkatError::IllegalMove {
                index,
                reason: format!("seat {seat} does not hold {card}"),
            });
        }
        if !self.legal_moves().contains(card) {
            return Err(SkatError::IllegalMove {
                index,
                reason: format!("seat {seat} must follow suit, {card} is a revoke"),
            });
        }
        self.play_unchecked(card);
        Ok(())
    }

    pub(crate) fn play_unchecked(&mut self, card: Card) {
        let seat = self.to_move();
        self.hands[seat.index()].remove(card);
        self.history.push((seat, card));
        self.trick.push(card);
        if self.trick.is_complete() {
            let winner = self
                .trick
                .seat_at(self.rules.winning_position(self.trick.cards()));
            let pts = self.trick.points();
            if winner == self.soloist {
                self.soloist_trick_points += pts;
                self.soloist_tricks += 1;
            } else {
                self.defender_trick_points += pts;
            }
            self.completed.push(self.trick);
            self.trick = Trick::new(winner);
        }
    }

    /// Soloist card points including the skat, at any point of the game.
    pub fn soloist_points_with_skat(&self) -> u32 {
        self.soloist_trick_points + self.deal.skat.points()
    }

    pub fn summary(&self) -> Option<GameSummary> {
        if !self.is_finished() {
            return None;
        }
        let decl = self.decl();
        let soloist_points = self.soloist_points_with_skat();
        let outcome = game_outcome(decl, soloist_points, self.soloist_tricks);
        let value = game_value(decl, self.soloist_cards, outcome.schneider, outcome.schwarz);
        let per_role = crate::rules::tournament_points(value, outcome);
        let mut scores = [0i32; 3];
        let mut def = 1;
        for seat in Seat::ALL {
            if seat == self.soloist {
                scores[seat.index()] = per_role[0];
            } else {
                scores[seat.index()] = per_role[def];
                def += 1;
            }
        }
        Some(GameSummary {
            soloist_points,
            defender_points: self.defender_trick_points,
            soloist_tricks: self.soloist_tricks,
            outcome,
            value,
            scores,
        })
    }
}

/// Replays a move list from the start of cardplay.
pub fn replay(deal: Deal, decl: GameDecl, soloist: Seat, moves: &[Card]) -> Result<GameState> {
    let mut g = GameState::new(deal, decl, soloist);
    for &m in moves {
        g.play(m)?;
    }
    Ok(g)
}
