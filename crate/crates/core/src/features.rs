//! Network input encoding of an observation.
//!
//! The state block has 360 values: own hand, skat, played cards (viewer and
//! both opponents), lead and sloughed cards of the opponents, void flags,
//! bid type and magnitude guesses, the current trick, the soloist and the
//! trump suit. The history block holds the first 24 plays as one-hot cards.
//! Seats are relative to the viewer: opponent 1 is the next seat in play
//! order, opponent 2 the one after.

use crate::cards::{Card, CardSet};
use crate::deal::Deal;
use crate::error::{Result, SkatError};
use crate::infoset::Observation;
use crate::rules::{GameDecl, Rules, Seat, TRUMP_GROUP};

pub const HAND: usize = 0;
pub const SKAT: usize = 32;
pub const PLAYED: usize = 64;
pub const LEAD: usize = 160;
pub const SLOUGHED: usize = 224;
pub const VOID: usize = 288;
pub const BID_TYPE: usize = 298;
pub const BID_MAGNITUDE: usize = 310;
pub const CURRENT_TRICK: usize = 320;
pub const SOLOIST: usize = 352;
pub const TRUMP: usize = 355;
pub const STATE_LEN: usize = 360;
pub const HISTORY_MOVES: usize = 24;
pub const HISTORY_LEN: usize = HISTORY_MOVES * 32;
pub const FEATURE_LEN: usize = STATE_LEN + HISTORY_LEN;

/// Last trick the network is trained and queried for.
pub const MAX_TRICK: usize = 8;

/// Bid-type slots: the four suits in index order, then grand, then null.
pub const BID_TYPE_GRAND: usize = 4;
pub const BID_TYPE_NULL: usize = 5;

/// Null game values a bid can name.
const NULL_VALUES: [u32; 4] = [23, 35, 46, 59];

#[derive(Clone, Debug, PartialEq)]
pub struct Features {
    values: Vec<f32>,
}

impl Features {
    pub fn zeros() -> Features {
        Features {
            values: vec![0.0; FEATURE_LEN],
        }
    }

    pub fn from_values(values: Vec<f32>) -> Result<Features> {
        if values.len() != FEATURE_LEN {
            return Err(SkatError::Shape(format!(
                "feature vector has {} values, expected {FEATURE_LEN}",
                values.len()
            )));
        }
        Ok(Features { values })
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn state(&self) -> &[f32] {
        &self.values[..STATE_LEN]
    }

    pub fn history(&self) -> &[f32] {
        &self.values[STATE_LEN..]
    }

    /// Keeps only what is known before the first card is played: hand,
    /// skat, bids, soloist and trump. Every block derived from cardplay is
    /// zeroed.
    pub fn mask_cardplay(&mut self) {
        self.values[PLAYED..BID_TYPE]
            .iter_mut()
            .for_each(|v| *v = 0.0);
        self.values[CURRENT_TRICK..SOLOIST]
            .iter_mut()
            .for_each(|v| *v = 0.0);
        self.values[STATE_LEN..].iter_mut().for_each(|v| *v = 0.0);
    }

    fn set_cards(&mut self, offset: usize, cards: CardSet) {
        for c in cards {
            self.values[offset + c.index()] = 1.0;
        }
    }
}

/// Guess of the game an opponent was bidding for: the slot of the largest
/// base value dividing the bid at least twice, or null for a null value.
pub fn bid_type(bid: u32) -> Option<usize> {
    if bid == 0 {
        return None;
    }
    if NULL_VALUES.contains(&bid) {
        return Some(BID_TYPE_NULL);
    }
    let bases = [(24, BID_TYPE_GRAND), (12, 3), (11, 2), (10, 1), (9, 0)];
    bases
        .iter()
        .find(|&&(base, _)| bid.is_multiple_of(base) && bid / base >= 2)
        .map(|&(_, slot)| slot)
}

/// Magnitude bucket: 18..24, 27..36, 40..48, 50..72, above 72.
pub fn bid_bucket(bid: u32) -> Option<usize> {
    match bid {
        0 => None,
        1..=24 => Some(0),
        25..=36 => Some(1),
        37..=48 => Some(2),
        49..=72 => Some(3),
        _ => Some(4),
    }
}

/// Encodes the observation from the viewer's side. Observations after
/// trick 8 are rejected.
pub fn extract_features(obs: &Observation) -> Result<Features> {
    if obs.trick_number() > MAX_TRICK {
        return Err(SkatError::InvalidObservation(format!(
            "trick {} is beyond the inference horizon of {MAX_TRICK} tricks",
            obs.trick_number()
        )));
    }
    let rules = Rules::new(obs.decl);
    let viewer = obs.viewer;
    let opponents = [viewer.next(), viewer.next().next()];
    let mut f = Features::zeros();

    f.set_cards(HAND, obs.own_hand());
    if let Some(s) = obs.known_skat {
        f.set_cards(SKAT, s);
    }
    for (k, seat) in [viewer, opponents[0], opponents[1]].into_iter().enumerate() {
        f.set_cards(PLAYED + 32 * k, obs.played_by(seat));
    }

    let mut led: Option<Card> = None;
    for (i, &(seat, c)) in obs.history.iter().enumerate() {
        if i < HISTORY_MOVES {
            f.values[STATE_LEN + 32 * i + c.index()] = 1.0;
        }
        let Some(k) = opponents.iter().position(|&o| o == seat) else {
            if i % 3 == 0 {
                led = Some(c);
            }
            continue;
        };
        if i % 3 == 0 {
            led = Some(c);
            f.values[LEAD + 32 * k + c.index()] = 1.0;
            continue;
        }
        let led_suit = rules.effective_suit(led.expect("trick has a lead"));
        let suit = rules.effective_suit(c);
        if suit != led_suit {
            f.values[VOID + 5 * k + led_suit] = 1.0;
            if suit != TRUMP_GROUP {
                f.values[SLOUGHED + 32 * k + c.index()] = 1.0;
            }
        }
    }

    for (k, seat) in opponents.iter().enumerate() {
        let bid = obs.bids[seat.index()];
        if let Some(t) = bid_type(bid) {
            f.values[BID_TYPE + 6 * k + t] = 1.0;
        }
        if let Some(b) = bid_bucket(bid) {
            f.values[BID_MAGNITUDE + 5 * k + b] = 1.0;
        }
    }

    f.set_cards(CURRENT_TRICK, obs.current_trick().card_set());
    f.values[SOLOIST + relative_seat(viewer, obs.soloist)] = 1.0;
    match obs.decl {
        GameDecl::Suit(s) => f.values[TRUMP + s.index()] = 1.0,
        GameDecl::Grand => f.values[TRUMP + 4] = 1.0,
        GameDecl::Null => {}
    }
    Ok(f)
}

/// Position of `seat` counted from `viewer` in play order (0 = viewer).
pub fn relative_seat(viewer: Seat, seat: Seat) -> usize {
    (seat.index() + 3 - viewer.index()) % 3
}

/// Training labels: the viewer-relative output column of every card's
/// location in `deal` (3 for the skat). Played cards keep the label of the
/// hand they were dealt to.
pub fn targets(viewer: Seat, deal: &Deal) -> [u8; 32] {
    let mut out = [0u8; 32];
    for c in Card::all() {
        out[c.index()] = match deal.location(c) {
            3 => 3,
            seat => relative_seat(viewer, Seat::new(seat)) as u8,
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bid_guesses() {
        assert_eq!(bid_bucket(36), Some(1));
        assert_eq!(bid_bucket(18), Some(0));
        assert_eq!(bid_bucket(72), Some(3));
        assert_eq!(bid_bucket(96), Some(4));
        assert_eq!(bid_bucket(0), None);
        assert_eq!(bid_type(18), Some(0));
        assert_eq!(bid_type(20), Some(1));
        assert_eq!(bid_type(22), Some(2));
        assert_eq!(bid_type(24), Some(3));
        assert_eq!(bid_type(48), Some(BID_TYPE_GRAND));
        assert_eq!(bid_type(36), Some(3));
        assert_eq!(bid_type(23), Some(BID_TYPE_NULL));
        assert_eq!(bid_type(0), None);
        assert_eq!(bid_type(19), None);
    }

    #[test]
    fn block_widths_add_up() {
        assert_eq!(SKAT - HAND, 32);
        assert_eq!(LEAD - PLAYED, 96);
        assert_eq!(SLOUGHED - LEAD, 64);
        assert_eq!(VOID - SLOUGHED, 64);
        assert_eq!(BID_TYPE - VOID, 10);
        assert_eq!(BID_MAGNITUDE - BID_TYPE, 12);
        assert_eq!(CURRENT_TRICK - BID_MAGNITUDE, 10);
        assert_eq!(SOLOIST - CURRENT_TRICK, 32);
        assert_eq!(TRUMP - SOLOIST, 3);
        assert_eq!(STATE_LEN - TRUMP, 5);
        assert_eq!(FEATURE_LEN, 1128);
    }
}
