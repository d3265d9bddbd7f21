//! Scripted bidding and declaration for generated test games.
//!
//! Each seat scores its ten cards for every declaration and bids the value
//! of its best game when the score clears a threshold. The highest bidder
//! picks up the skat, settles on the declaration that scores best over all
//! twelve cards, and puts away two cards. Deals where everyone passes are
//! dealt again.

use rand::Rng;

use crate::cards::{Card, CardSet, Rank, Suit, JACKS};
use crate::deal::Deal;
use crate::io::GameRecord;
use crate::rules::{matador_count, GameDecl, Seat};

/// Scores below these make a seat pass on that declaration.
const SUIT_THRESHOLD: i32 = 17;
const GRAND_THRESHOLD: i32 = 22;
const NULL_THRESHOLD: i32 = 15;

/// Static strength of `cards` for `decl`; larger is better.
pub fn hand_score(cards: CardSet, decl: GameDecl) -> i32 {
    match decl {
        GameDecl::Null => null_score(cards),
        GameDecl::Grand => {
            let mut s = 4 * cards.intersect(JACKS).len() as i32;
            for suit in Suit::ALL {
                s += side_suit_score(cards, suit, 3);
            }
            s
        }
        GameDecl::Suit(trump) => {
            let trumps = cards.intersect(decl.trumps());
            let mut s = 3 * cards.intersect(JACKS).len() as i32;
            for c in trumps.minus(JACKS) {
                s += 2 + matches!(c.rank(), Rank::Ace | Rank::Ten) as i32;
            }
            for suit in Suit::ALL.into_iter().filter(|&x| x != trump) {
                s += side_suit_score(cards, suit, 2);
            }
            s
        }
    }
}

fn side_suit_score(cards: CardSet, suit: Suit, ace: i32) -> i32 {
    let held = cards.intersect(suit.cards()).minus(JACKS);
    let has_ace = held.contains(Card::new(suit, Rank::Ace));
    let mut s = 0;
    if has_ace {
        s += ace;
        if held.contains(Card::new(suit, Rank::Ten)) {
            s += ace - 1;
        }
    }
    s
}

/// Null ranks 7 8 9 10 J Q K A as 0..7; a card is safe when enough
/// lower cards of its suit are held to duck under any lead.
fn null_score(cards: CardSet) -> i32 {
    const NULL_RANK: [i32; 8] = [0, 1, 2, 5, 6, 3, 7, 4];
    let mut s = 20;
    for suit in Suit::ALL {
        let held: Vec<i32> = cards
            .intersect(suit.cards())
            .iter()
            .map(|c| NULL_RANK[c.rank() as usize])
            .collect();
        let mut sorted = held.clone();
        sorted.sort_unstable();
        for (i, r) in sorted.iter().enumerate() {
            // a card with `r` lower cards outstanding needs that many
            // smaller companions to stay safe
            let exposed = (r - 2 * i as i32).max(0);
            s -= exposed;
        }
    }
    s
}

/// Value a seat can bid for `decl` from its own ten cards.
pub fn bid_value(cards: CardSet, decl: GameDecl) -> u32 {
    match decl {
        GameDecl::Null => 23,
        _ => decl.base_value() * (matador_count(decl, cards) + 1),
    }
}

fn threshold(decl: GameDecl) -> i32 {
    match decl {
        GameDecl::Null => NULL_THRESHOLD,
        GameDecl::Grand => GRAND_THRESHOLD,
        GameDecl::Suit(_) => SUIT_THRESHOLD,
    }
}

/// Game a seat would play: grand if it qualifies, else the suit with the
/// widest margin over its threshold, else null. `None` when nothing
/// qualifies.
pub fn preferred_game(cards: CardSet) -> Option<GameDecl> {
    let margin = |d: GameDecl| hand_score(cards, d) - threshold(d);
    if margin(GameDecl::Grand) >= 0 {
        return Some(GameDecl::Grand);
    }
    let suit = Suit::ALL
        .into_iter()
        .map(GameDecl::Suit)
        .max_by_key(|&d| (margin(d), d.base_value()))
        .unwrap();
    if margin(suit) >= 0 {
        return Some(suit);
    }
    (margin(GameDecl::Null) >= 0).then_some(GameDecl::Null)
}

/// Highest bid `cards` supports, 0 to pass.
pub fn max_bid(cards: CardSet) -> u32 {
    preferred_game(cards).map_or(0, |d| bid_value(cards, d))
}

/// Declaration over the soloist's twelve cards; the widest margin wins
/// when no game qualifies.
pub fn choose_declaration(cards: CardSet) -> GameDecl {
    preferred_game(cards).unwrap_or_else(|| {
        GameDecl::all()
            .into_iter()
            .max_by_key(|&d| (hand_score(cards, d) - threshold(d), d.base_value()))
            .unwrap()
    })
}

/// Two cards to put away from twelve. Points games keep trumps and aces
/// and bank the highest remaining points from the shortest suits; null
/// sheds the most exposed cards.
pub fn choose_discard(cards: CardSet, decl: GameDecl) -> CardSet {
    let mut best: Option<(i32, CardSet)> = None;
    let all: Vec<Card> = cards.iter().collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let pair = CardSet::single(all[i]).with(all[j]);
            let keep = cards.minus(pair);
            let mut score = hand_score(keep, decl) * 4;
            if decl != GameDecl::Null {
                if !pair.is_disjoint(decl.trumps()) {
                    continue;
                }
                score += pair.points() as i32;
                for suit in Suit::ALL {
                    if keep.intersect(suit.cards()).minus(decl.trumps()).is_empty() {
                        score += 3;
                    }
                }
            }
            if best.is_none_or(|(b, _)| score > b) {
                best = Some((score, pair));
            }
        }
    }
    best.map(|(_, p)| p).unwrap_or_else(|| {
        // twelve trumps cannot happen; any two cards will do
        all[..2].iter().copied().collect()
    })
}

/// Deals until some seat bids, then runs the scripted pickup and
/// declaration. Returns the record at the start of cardplay.
pub fn generate_game<R: Rng + ?Sized>(rng: &mut R) -> GameRecord {
    loop {
        let dealt = Deal::random(rng);
        let bids = [0, 1, 2].map(|s| max_bid(dealt.hands[s]));
        let top = *bids.iter().max().unwrap();
        if top == 0 {
            continue;
        }
        let soloist = Seat::new(bids.iter().position(|&b| b == top).unwrap());
        let twelve = dealt.hand(soloist).union(dealt.skat);
        let decl = choose_declaration(twelve);
        let discard = choose_discard(twelve, decl);
        let mut deal = dealt;
        deal.hands[soloist.index()] = twelve.minus(discard);
        deal.skat = discard;
        return GameRecord::new(deal, decl, soloist, bids, Some(dealt.skat));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_games_are_valid_and_varied() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut kinds = [0usize; 3];
        for _ in 0..600 {
            let rec = generate_game(&mut rng);
            rec.deal.validate().unwrap();
            assert!(rec.bids[rec.soloist.index()] >= 18);
            kinds[rec.decl.kind().tag() as usize] += 1;
        }
        assert!(kinds.iter().all(|&k| k > 0), "{kinds:?}");
    }
}
