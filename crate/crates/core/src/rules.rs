//! Skat rules: declarations, follow-suit, trick resolution and scoring.

use std::fmt;
use std::str::FromStr;

use crate::cards::{Card, CardSet, Rank, Suit, JACKS};
use crate::error::SkatError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    Suit,
    Grand,
    Null,
}

impl GameKind {
    pub const ALL: [GameKind; 3] = [GameKind::Suit, GameKind::Grand, GameKind::Null];

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Option<GameKind> {
        GameKind::ALL.get(tag as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            GameKind::Suit => "suit",
            GameKind::Grand => "grand",
            GameKind::Null => "null",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A game declaration. Hand, ouvert and announcements are not modeled.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GameDecl {
    Suit(Suit),
    Grand,
    Null,
}

impl GameDecl {
    pub fn kind(self) -> GameKind {
        match self {
            GameDecl::Suit(_) => GameKind::Suit,
            GameDecl::Grand => GameKind::Grand,
            GameDecl::Null => GameKind::Null,
        }
    }

    pub fn base_value(self) -> u32 {
        match self {
            GameDecl::Suit(s) => [9, 10, 11, 12][s.index()],
            GameDecl::Grand => 24,
            GameDecl::Null => 23,
        }
    }

    pub fn trumps(self) -> CardSet {
        match self {
            GameDecl::Suit(s) => JACKS.union(s.cards()),
            GameDecl::Grand => JACKS,
            GameDecl::Null => CardSet::EMPTY,
        }
    }

    /// Trumps from highest to lowest. Empty for null.
    pub fn trump_order(self) -> Vec<Card> {
        let mut order: Vec<Card> = match self {
            GameDecl::Null => return Vec::new(),
            _ => [Suit::Clubs, Suit::Spades, Suit::Hearts, Suit::Diamonds]
                .iter()
                .map(|&s| Card::new(s, Rank::Jack))
                .collect(),
        };
        if let GameDecl::Suit(s) = self {
            order.extend((0..7).rev().map(|r| Card::new(s, Rank::ALL[r])));
        }
        order
    }

    pub fn all() -> [GameDecl; 6] {
        [
            GameDecl::Suit(Suit::Diamonds),
            GameDecl::Suit(Suit::Hearts),
            GameDecl::Suit(Suit::Spades),
            GameDecl::Suit(Suit::Clubs),
            GameDecl::Grand,
            GameDecl::Null,
        ]
    }
}

impl fmt::Display for GameDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameDecl::Suit(s) => write!(f, "suit:{}", s.letter()),
            GameDecl::Grand => f.write_str("grand"),
            GameDecl::Null => f.write_str("null"),
        }
    }
}

impl FromStr for GameDecl {
    type Err = SkatError;

    fn from_str(s: &str) -> Result<GameDecl, SkatError> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "grand" => Ok(GameDecl::Grand),
            "null" => Ok(GameDecl::Null),
            _ => {
                let letter = lower
                    .strip_prefix("suit:")
                    .ok_or_else(|| SkatError::BadDecl(s.to_string()))?;
                let suit = match letter {
                    "d" => Suit::Diamonds,
                    "h" => Suit::Hearts,
                    "s" => Suit::Spades,
                    "c" => Suit::Clubs,
                    _ => return Err(SkatError::BadDecl(s.to_string())),
                };
                Ok(GameDecl::Suit(suit))
            }
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seat(pub u8);

impl Seat {
    pub const ALL: [Seat; 3] = [Seat(0), Seat(1), Seat(2)];

    pub fn new(i: usize) -> Seat {
        assert!(i < 3, "seat {i} out of range");
        Seat(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn next(self) -> Seat {
        Seat((self.0 + 1) % 3)
    }

    pub fn offset(self, k: usize) -> Seat {
        Seat(((self.0 as usize + k) % 3) as u8)
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of the trump group among effective suits.
pub const TRUMP_GROUP: usize = 4;

/// Per-declaration lookup tables: effective suits, follow masks, strengths.
#[derive(Clone, Debug)]
pub struct Rules {
    pub decl: GameDecl,
    trumps: u32,
    eff_suit: [u8; 32],
    follow: [u32; 5],
    strength: [u8; 32],
}

impl Rules {
    pub fn new(decl: GameDecl) -> Rules {
        let trumps = decl.trumps().mask();
        let mut eff_suit = [0u8; 32];
        let mut follow = [0u32; 5];
        let mut strength = [0u8; 32];
        for c in Card::all() {
            let i = c.index();
            let trump = trumps & c.bit() != 0;
            let e = if trump { TRUMP_GROUP } else { c.suit().index() };
            eff_suit[i] = e as u8;
            follow[e] |= c.bit();
            strength[i] = match decl {
                GameDecl::Null => [0, 1, 2, 5, 6, 3, 7, 4][c.rank() as usize],
                _ if c.rank() == Rank::Jack => 32 + c.suit().index() as u8,
                _ if trump => 16 + c.rank() as u8,
                _ => c.rank() as u8,
            };
        }
        Rules {
            decl,
            trumps,
            eff_suit,
            follow,
            strength,
        }
    }

    pub fn trumps(&self) -> CardSet {
        CardSet(self.trumps)
    }

    pub fn is_trump(&self, c: Card) -> bool {
        self.trumps & c.bit() != 0
    }

    /// Follow-suit class of a card: 0..4 natural suit, 4 for trump.
    #[inline]
    pub fn effective_suit(&self, c: Card) -> usize {
        self.eff_suit[c.index()] as usize
    }

    /// All cards of an effective suit.
    #[inline]
    pub fn suit_mask(&self, eff: usize) -> CardSet {
        CardSet(self.follow[eff])
    }

    /// Strength used for trick resolution; only comparable within the
    /// same effective suit, with trumps above everything.
    #[inline]
    pub fn strength(&self, c: Card) -> u8 {
        self.strength[c.index()]
    }

    #[inline]
    pub fn legal_moves(&self, hand: CardSet, led: Option<Card>) -> CardSet {
        match led {
            None => hand,
            Some(l) => {
                let same = hand.mask() & self.follow[self.eff_suit[l.index()] as usize];
                if same != 0 {
                    CardSet(same)
                } else {
                    hand
                }
            }
        }
    }

    /// Position (0..3) within the trick of the winning card.
    #[inline]
    pub fn winning_position(&self, cards: &[Card]) -> usize {
        let led = self.eff_suit[cards[0].index()];
        let key = |c: Card| -> i32 {
            let i = c.index();
            if self.trumps & c.bit() != 0 {
                64 + self.strength[i] as i32
            } else if self.eff_suit[i] == led {
                self.strength[i] as i32
            } else {
                -1
            }
        };
        let mut best = 0;
        for (pos, &c) in cards.iter().enumerate().skip(1) {
            if key(c) > key(cards[best]) {
                best = pos;
            }
        }
        best
    }
}

/// A trick in progress or complete: leader and up to three cards in play order.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Trick {
    pub leader: Seat,
    cards: [Card; 3],
    len: u8,
}

impl Trick {
    pub fn new(leader: Seat) -> Trick {
        Trick {
            leader,
            cards: [Card::from_index(0); 3],
            len: 0,
        }
    }

    pub fn from_cards(leader: Seat, cards: &[Card]) -> Trick {
        assert!(cards.len() <= 3, "a trick has at most three cards");
        let mut t = Trick::new(leader);
        for &c in cards {
            t.push(c);
        }
        t
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_complete(&self) -> bool {
        self.len == 3
    }

    pub fn led(&self) -> Option<Card> {
        (self.len > 0).then(|| self.cards[0])
    }

    pub fn push(&mut self, c: Card) {
        assert!(self.len < 3, "trick already complete");
        assert!(!self.cards().contains(&c), "card {c} already in trick");
        self.cards[self.len as usize] = c;
        self.len += 1;
    }

    /// Seat that plays next (or that played position `pos`).
    pub fn seat_at(&self, pos: usize) -> Seat {
        self.leader.offset(pos)
    }

    pub fn to_move(&self) -> Seat {
        self.seat_at(self.len())
    }

    pub fn card_set(&self) -> CardSet {
        self.cards().iter().copied().collect()
    }

    pub fn points(&self) -> u32 {
        self.cards().iter().map(|c| c.points()).sum()
    }

    /// (seat, card) pairs in play order.
    pub fn plays(&self) -> impl Iterator<Item = (Seat, Card)> + '_ {
        self.cards()
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.seat_at(i), c))
    }
}

impl fmt::Debug for Trick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trick[{}:", self.leader)?;
        for c in self.cards() {
            write!(f, " {c}")?;
        }
        f.write_str("]")
    }
}

/// Cards of `hand` that may legally be played onto `trick`.
pub fn legal_moves(hand: CardSet, trick: &Trick, decl: GameDecl) -> CardSet {
    assert!(!hand.is_empty(), "legal_moves on an empty hand");
    assert!(!trick.is_complete(), "trick already complete");
    debug_assert!(hand.is_disjoint(trick.card_set()));
    Rules::new(decl).legal_moves(hand, trick.led())
}

/// Seat that wins a complete trick.
pub fn trick_winner(trick: &Trick, decl: GameDecl) -> Seat {
    assert!(trick.is_complete(), "trick_winner needs three cards");
    let pos = Rules::new(decl).winning_position(trick.cards());
    trick.seat_at(pos)
}

/// Length of the unbroken run of top trumps held ("with") or missing
/// ("against") in the soloist's twelve cards.
pub fn matador_count(decl: GameDecl, soloist_cards: CardSet) -> u32 {
    assert!(decl != GameDecl::Null, "null games have no matadors");
    let order = decl.trump_order();
    let with = soloist_cards.contains(order[0]);
    order
        .iter()
        .take_while(|&&c| soloist_cards.contains(c) == with)
        .count() as u32
}

pub fn game_value(decl: GameDecl, soloist_cards: CardSet, schneider: bool, schwarz: bool) -> u32 {
    match decl {
        GameDecl::Null => 23,
        _ => {
            let mult = matador_count(decl, soloist_cards) + 1 + schneider as u32 + schwarz as u32;
            decl.base_value() * mult
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub won: bool,
    pub schneider: bool,
    pub schwarz: bool,
}

/// Win/schneider/schwarz from the soloist's final tallies (skat counted for
/// the soloist).
pub fn game_outcome(decl: GameDecl, soloist_card_points: u32, soloist_tricks_won: u32) -> Outcome {
    assert!(soloist_card_points <= 120, "card points out of range");
    assert!(soloist_tricks_won <= 10, "trick count out of range");
    match decl {
        GameDecl::Null => Outcome {
            won: soloist_tricks_won == 0,
            schneider: false,
            schwarz: false,
        },
        _ => {
            let won = soloist_card_points >= 61;
            let (loser_points, loser_tricks) = if won {
                (120 - soloist_card_points, 10 - soloist_tricks_won)
            } else {
                (soloist_card_points, soloist_tricks_won)
            };
            Outcome {
                won,
                schneider: loser_points <= 30,
                schwarz: loser_tricks == 0,
            }
        }
    }
}

/// Seeger–Fabian tournament points as (soloist, defender, defender).
pub fn tournament_points(game_value: u32, outcome: Outcome) -> [i32; 3] {
    let v = game_value as i32;
    if outcome.won {
        [v + 50, 0, 0]
    } else {
        [-(2 * v + 50), 40, 40]
    }
}
