//! Full card assignments: three hands plus the skat.

use std::fmt;

use crate::cards::{Card, CardSet, FULL_DECK};
use crate::error::{Result, SkatError};
use crate::rules::Seat;

/// Location index of the skat; hands are `0..3`.
pub const SKAT: usize = 3;

/// Every card placed in one of four locations: hand 0, 1, 2 or the skat.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct Deal {
    pub hands: [CardSet; 3],
    pub skat: CardSet,
}

impl Deal {
    pub fn new(hands: [CardSet; 3], skat: CardSet) -> Deal {
        Deal { hands, skat }
    }

    /// Builds a deal from per-card location indices (0..3 hands, 3 skat).
    pub fn from_locations(locs: &[u8; 32]) -> Deal {
        let mut d = Deal::default();
        for (i, &l) in locs.iter().enumerate() {
            let bit = 1u32 << i;
            match l as usize {
                SKAT => d.skat.0 |= bit,
                h if h < 3 => d.hands[h].0 |= bit,
                other => panic!("location {other} out of range"),
            }
        }
        d
    }

    pub fn hand(&self, seat: Seat) -> CardSet {
        self.hands[seat.index()]
    }

    /// Location of a card; panics if the deal does not contain it.
    #[inline]
    pub fn location(&self, card: Card) -> usize {
        let bit = card.bit();
        if self.hands[0].0 & bit != 0 {
            0
        } else if self.hands[1].0 & bit != 0 {
            1
        } else if self.hands[2].0 & bit != 0 {
            2
        } else if self.skat.0 & bit != 0 {
            SKAT
        } else {
            panic!("card {card} missing from deal")
        }
    }

    pub fn locations(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for c in Card::all() {
            out[c.index()] = self.location(c) as u8;
        }
        out
    }

    pub fn is_partition(&self) -> bool {
        let sets = [self.hands[0], self.hands[1], self.hands[2], self.skat];
        let total: usize = sets.iter().map(|s| s.len()).sum();
        let union = sets.iter().fold(CardSet::EMPTY, |a, &b| a.union(b));
        total == 32 && union == FULL_DECK
    }

    /// Checks the cardplay-start shape: a partition with 10/10/10/2 cards.
    pub fn validate(&self) -> Result<()> {
        if !self.is_partition() {
            return Err(SkatError::InvalidDeal(
                "locations do not partition the deck".into(),
            ));
        }
        if self.hands.iter().any(|h| h.len() != 10) || self.skat.len() != 2 {
            return Err(SkatError::InvalidDeal(
                "hand sizes must be 10/10/10 with 2 in skat".into(),
            ));
        }
        Ok(())
    }

    /// 32-character location string, one digit per card index.
    pub fn to_location_string(&self) -> String {
        self.locations()
            .iter()
            .map(|&l| (b'0' + l) as char)
            .collect()
    }

    pub fn from_location_string(s: &str) -> Result<Deal> {
        let bytes = s.as_bytes();
        if bytes.len() != 32 {
            return Err(SkatError::InvalidDeal(format!(
                "location string has {} cards, expected 32",
                bytes.len()
            )));
        }
        let mut locs = [0u8; 32];
        for (i, &b) in bytes.iter().enumerate() {
            if !(b'0'..=b'3').contains(&b) {
                return Err(SkatError::InvalidDeal(format!(
                    "bad location `{}` for card {i}",
                    b as char
                )));
            }
            locs[i] = b - b'0';
        }
        Ok(Deal::from_locations(&locs))
    }

    /// Uniformly random 10/10/10/2 deal.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R) -> Deal {
        use rand::seq::SliceRandom;
        let mut cards: Vec<Card> = Card::all().collect();
        cards.shuffle(rng);
        let mut d = Deal::default();
        for (i, c) in cards.into_iter().enumerate() {
            match i / 10 {
                h @ 0..=2 => d.hands[h].insert(c),
                _ => d.skat.insert(c),
            }
        }
        d
    }
}

impl fmt::Debug for Deal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Deal[0: {} | 1: {} | 2: {} | skat: {}]",
            self.hands[0], self.hands[1], self.hands[2], self.skat
        )
    }
}
