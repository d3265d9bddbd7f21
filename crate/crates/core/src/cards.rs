//! Cards and card sets for the 32-card Skat deck.
//!
//! A card is an index `0..32` laid out as `suit * 8 + rank`, suits ordered
//! diamonds, hearts, spades, clubs and ranks ordered 7, 8, 9, Q, K, 10, A, J.
//! Within a suit this is the non-trump strength order of suit and grand
//! games, so most comparisons reduce to comparing indices.

use std::fmt;
use std::str::FromStr;

use crate::error::SkatError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suit {
    Diamonds = 0,
    Hearts = 1,
    Spades = 2,
    Clubs = 3,
}

impl Suit {
    pub const ALL: [Suit; 4] = [Suit::Diamonds, Suit::Hearts, Suit::Spades, Suit::Clubs];

    pub fn from_index(i: usize) -> Suit {
        Suit::ALL[i & 3]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        ['D', 'H', 'S', 'C'][self as usize]
    }

    /// All eight cards printed with this suit, jack included.
    pub fn cards(self) -> CardSet {
        CardSet(0xFF << (8 * self as u32))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Seven = 0,
    Eight = 1,
    Nine = 2,
    Queen = 3,
    King = 4,
    Ten = 5,
    Ace = 6,
    Jack = 7,
}

impl Rank {
    pub const ALL: [Rank; 8] = [
        Rank::Seven,
        Rank::Eight,
        Rank::Nine,
        Rank::Queen,
        Rank::King,
        Rank::Ten,
        Rank::Ace,
        Rank::Jack,
    ];

    pub fn symbol(self) -> char {
        ['7', '8', '9', 'Q', 'K', 'T', 'A', 'J'][self as usize]
    }

    pub fn points(self) -> u32 {
        [0, 0, 0, 3, 4, 10, 11, 2][self as usize]
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card(u8);

impl Card {
    pub fn new(suit: Suit, rank: Rank) -> Card {
        Card((suit as u8) * 8 + rank as u8)
    }

    pub fn from_index(index: usize) -> Card {
        assert!(index < 32, "card index {index} out of range");
        Card(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn suit(self) -> Suit {
        Suit::from_index(self.0 as usize / 8)
    }

    pub fn rank(self) -> Rank {
        Rank::ALL[self.0 as usize % 8]
    }

    pub fn bit(self) -> u32 {
        1u32 << self.0
    }

    pub fn points(self) -> u32 {
        self.rank().points()
    }

    pub fn all() -> impl Iterator<Item = Card> {
        (0..32).map(|i| Card(i as u8))
    }
}

/// Card points of a single card: A=11, 10=10, K=4, Q=3, J=2, others 0.
pub fn card_points(card: Card) -> u32 {
    card.points()
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.rank().symbol(), self.suit().letter())
    }
}

impl fmt::Debug for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Card {
    type Err = SkatError;

    fn from_str(s: &str) -> Result<Card, SkatError> {
        let bad = || SkatError::BadCard(s.to_string());
        let mut chars = s.chars();
        let (r, su) = match (chars.next(), chars.next(), chars.next()) {
            (Some(r), Some(su), None) => (r.to_ascii_uppercase(), su.to_ascii_uppercase()),
            _ => return Err(bad()),
        };
        let rank = Rank::ALL
            .iter()
            .copied()
            .find(|x| x.symbol() == r)
            .ok_or_else(bad)?;
        let suit = Suit::ALL
            .iter()
            .copied()
            .find(|x| x.letter() == su)
            .ok_or_else(bad)?;
        Ok(Card::new(suit, rank))
    }
}

/// Set of cards as a 32-bit mask; bit `i` is card `i`.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CardSet(pub u32);

pub const JACKS: CardSet = CardSet(0x8080_8080);
pub const FULL_DECK: CardSet = CardSet(u32::MAX);

impl CardSet {
    pub const EMPTY: CardSet = CardSet(0);

    pub fn single(card: Card) -> CardSet {
        CardSet(card.bit())
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, card: Card) -> bool {
        self.0 & card.bit() != 0
    }

    pub fn insert(&mut self, card: Card) {
        self.0 |= card.bit();
    }

    pub fn remove(&mut self, card: Card) {
        self.0 &= !card.bit();
    }

    pub fn with(self, card: Card) -> CardSet {
        CardSet(self.0 | card.bit())
    }

    pub fn without(self, card: Card) -> CardSet {
        CardSet(self.0 & !card.bit())
    }

    pub fn union(self, other: CardSet) -> CardSet {
        CardSet(self.0 | other.0)
    }

    pub fn intersect(self, other: CardSet) -> CardSet {
        CardSet(self.0 & other.0)
    }

    pub fn minus(self, other: CardSet) -> CardSet {
        CardSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: CardSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: CardSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self) -> CardSet {
        CardSet(!self.0)
    }

    /// Lowest-index card, if any.
    pub fn first(self) -> Option<Card> {
        (self.0 != 0).then(|| Card(self.0.trailing_zeros() as u8))
    }

    /// Highest-index card, if any.
    pub fn last(self) -> Option<Card> {
        (self.0 != 0).then(|| Card(31 - self.0.leading_zeros() as u8))
    }

    pub fn points(self) -> u32 {
        self.iter().map(Card::points).sum()
    }

    pub fn iter(self) -> CardIter {
        CardIter(self.0)
    }
}

impl FromIterator<Card> for CardSet {
    fn from_iter<I: IntoIterator<Item = Card>>(iter: I) -> CardSet {
        let mut set = CardSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl IntoIterator for CardSet {
    type Item = Card;
    type IntoIter = CardIter;

    fn into_iter(self) -> CardIter {
        self.iter()
    }
}

/// Ascending iteration over the cards of a set.
#[derive(Clone)]
pub struct CardIter(u32);

impl Iterator for CardIter {
    type Item = Card;

    #[inline]
    fn next(&mut self) -> Option<Card> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Card(i as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for CardIter {}

impl fmt::Display for CardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for CardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for CardSet {
    type Err = SkatError;

    /// Whitespace- or comma-separated card names.
    fn from_str(s: &str) -> Result<CardSet, SkatError> {
        let mut set = CardSet::EMPTY;
        for tok in s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let card: Card = tok.parse()?;
            if set.contains(card) {
                return Err(SkatError::DuplicateCard(card.to_string()));
            }
            set.insert(card);
        }
        Ok(set)
    }
}
