//! Information sets: what one seat knows, and every deal consistent with it.
//!
//! Cards the viewer cannot place are assigned to the remaining locations by
//! a constrained assignment. A completion table `completions[depth][caps]`
//! counts the ways to place the unknown cards from `depth` on given the
//! remaining capacity of each location. It drives counting, canonical
//! enumeration without dead ends, unranking, and uniform subset sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cards::{Card, CardSet, FULL_DECK};
use crate::deal::{Deal, SKAT};
use crate::error::{Result, SkatError};
use crate::game::GameState;
use crate::rules::{GameDecl, Rules, Seat, Trick};

/// Everything one seat knows at a decision point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub viewer: Seat,
    /// Viewer's ten cards at the start of cardplay.
    pub own_initial_hand: CardSet,
    pub decl: GameDecl,
    pub soloist: Seat,
    /// The two cards put away by the soloist; present iff the viewer is soloist.
    pub known_skat: Option<CardSet>,
    /// The skat as dealt, before the soloist picked it up.
    pub original_skat: Option<CardSet>,
    /// Highest bid of each seat, 0 for a seat that passed without bidding.
    pub bids: [u32; 3],
    pub history: Vec<(Seat, Card)>,
}

/// Number of consistent deals and the cards the viewer cannot place.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct InfoSetStats {
    pub count: u64,
    pub viewer_unknown_cards: CardSet,
}

impl Observation {
    /// Observation of `viewer` at the current point of a game in progress.
    pub fn from_game(
        game: &GameState,
        viewer: Seat,
        bids: [u32; 3],
        original_skat: Option<CardSet>,
    ) -> Observation {
        let soloist = game.soloist();
        let is_soloist = viewer == soloist;
        Observation {
            viewer,
            own_initial_hand: game.deal().hand(viewer),
            decl: game.decl(),
            soloist,
            known_skat: is_soloist.then(|| game.deal().skat),
            original_skat: if is_soloist { original_skat } else { None },
            bids,
            history: game.history().to_vec(),
        }
    }

    pub fn is_soloist(&self) -> bool {
        self.viewer == self.soloist
    }

    /// Completed tricks and the trick in progress, replayed from history.
    pub fn tricks(&self) -> (Vec<Trick>, Trick) {
        let rules = Rules::new(self.decl);
        let mut done = Vec::new();
        let mut cur = Trick::new(Seat(0));
        for &(_, c) in &self.history {
            cur.push(c);
            if cur.is_complete() {
                let w = cur.seat_at(rules.winning_position(cur.cards()));
                done.push(cur);
                cur = Trick::new(w);
            }
        }
        (done, cur)
    }

    pub fn current_trick(&self) -> Trick {
        self.tricks().1
    }

    /// 1-based trick number of the decision point.
    pub fn trick_number(&self) -> usize {
        self.history.len() / 3 + 1
    }

    pub fn to_move(&self) -> Seat {
        self.current_trick().to_move()
    }

    pub fn played_by(&self, seat: Seat) -> CardSet {
        self.history
            .iter()
            .filter(|(s, _)| *s == seat)
            .map(|&(_, c)| c)
            .collect()
    }

    pub fn played(&self) -> CardSet {
        self.history.iter().map(|&(_, c)| c).collect()
    }

    /// Viewer's remaining cards.
    pub fn own_hand(&self) -> CardSet {
        self.own_initial_hand.minus(self.played())
    }

    /// Per-seat bitmask over effective suits (bit 4 = trump) shown void.
    pub fn void_constraints(&self) -> [u8; 3] {
        let rules = Rules::new(self.decl);
        let mut voids = [0u8; 3];
        let mut led: Option<usize> = None;
        for (i, &(seat, c)) in self.history.iter().enumerate() {
            match i % 3 {
                0 => led = Some(rules.effective_suit(c)),
                _ => {
                    let e = led.unwrap();
                    if rules.effective_suit(c) != e {
                        voids[seat.index()] |= 1 << e;
                    }
                }
            }
        }
        voids
    }

    /// Cards whose location the viewer does not know.
    pub fn unknown_cards(&self) -> CardSet {
        let mut known = self.own_initial_hand.union(self.played());
        if let Some(s) = self.known_skat {
            known = known.union(s);
        }
        FULL_DECK.minus(known)
    }

    /// Structural checks: seats in turn order, no card twice, the viewer's
    /// own plays legal and from the own hand, skat knowledge matching role.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SkatError::InvalidObservation(m));
        if self.own_initial_hand.len() != 10 {
            return bad(format!(
                "own hand has {} cards",
                self.own_initial_hand.len()
            ));
        }
        match (self.is_soloist(), self.known_skat) {
            (true, None) => return bad("soloist view without skat".into()),
            (false, Some(_)) => return bad("defender view with known skat".into()),
            (true, Some(s)) if s.len() != 2 || !s.is_disjoint(self.own_initial_hand) => {
                return bad("known skat must be two cards outside the hand".into())
            }
            _ => {}
        }
        if self.history.len() > 30 {
            return bad("history longer than a game".into());
        }
        let rules = Rules::new(self.decl);
        let mut seen = CardSet::EMPTY;
        let mut cur = Trick::new(Seat(0));
        let mut own = self.own_initial_hand;
        for (i, &(seat, c)) in self.history.iter().enumerate() {
            if seat != cur.to_move() {
                return bad(format!("move {i}: seat {seat} out of turn"));
            }
            if seen.contains(c) {
                return bad(format!("move {i}: {c} played twice"));
            }
            if seat == self.viewer {
                if !own.contains(c) {
                    return bad(format!("move {i}: viewer does not hold {c}"));
                }
                if !rules.legal_moves(own, cur.led()).contains(c) {
                    return bad(format!("move {i}: viewer revoke with {c}"));
                }
                own.remove(c);
            } else if self.own_initial_hand.contains(c)
                || self.known_skat.is_some_and(|s| s.contains(c))
            {
                return bad(format!("move {i}: {c} is known to be elsewhere"));
            }
            seen.insert(c);
            cur.push(c);
            if cur.is_complete() {
                let w = cur.seat_at(rules.winning_position(cur.cards()));
                cur = Trick::new(w);
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> InfoSetStats {
        InfoSetStats {
            count: count_deals(self),
            viewer_unknown_cards: self.unknown_cards(),
        }
    }
}

/// True iff `deal` could have produced `obs`: the viewer's cards match, the
/// soloist's skat matches, and the history replays legally from the deal.
pub fn consistent(deal: &Deal, obs: &Observation) -> bool {
    if deal.validate().is_err() || deal.hand(obs.viewer) != obs.own_initial_hand {
        return false;
    }
    if let Some(s) = obs.known_skat {
        if deal.skat != s {
            return false;
        }
    }
    let mut g = GameState::new(*deal, obs.decl, obs.soloist);
    for &(seat, c) in &obs.history {
        if g.to_move() != seat || g.play(c).is_err() {
            return false;
        }
    }
    true
}

const CAP_STRIDE: [usize; 4] = [11 * 11 * 3, 11 * 3, 3, 1];
const CAP_SLOTS: usize = 11 * 11 * 11 * 3;

#[inline]
fn cap_index(caps: &[u8; 4]) -> usize {
    caps[0] as usize * CAP_STRIDE[0]
        + caps[1] as usize * CAP_STRIDE[1]
        + caps[2] as usize * CAP_STRIDE[2]
        + caps[3] as usize
}

/// The set of deals consistent with an observation, in canonical order.
///
/// Canonical order is lexicographic in the location vector of the unknown
/// cards taken in ascending card index.
#[derive(Clone, Debug)]
pub struct InfoSet {
    fixed: Deal,
    unknown: Vec<Card>,
    /// Bitmask over locations 0..4 each unknown card may occupy.
    allowed: Vec<u8>,
    caps: [u8; 4],
    completions: Vec<u64>,
}

impl InfoSet {
    pub fn new(obs: &Observation) -> InfoSet {
        let rules = Rules::new(obs.decl);
        let mut fixed = Deal::default();
        fixed.hands[obs.viewer.index()] = obs.own_initial_hand;
        if let Some(s) = obs.known_skat {
            fixed.skat = s;
        }
        for &(seat, c) in &obs.history {
            if seat != obs.viewer {
                fixed.hands[seat.index()].insert(c);
            }
        }
        let mut caps = [0u8; 4];
        for seat in Seat::ALL {
            if seat != obs.viewer {
                caps[seat.index()] = 10u8.saturating_sub(fixed.hand(seat).len() as u8);
            }
        }
        if obs.known_skat.is_none() {
            caps[SKAT] = 2;
        }
        let voids = obs.void_constraints();
        let unknown: Vec<Card> = obs.unknown_cards().iter().collect();
        let allowed = unknown
            .iter()
            .map(|&c| {
                let e = rules.effective_suit(c);
                let mut m = 0u8;
                for seat in Seat::ALL {
                    if seat != obs.viewer && voids[seat.index()] & (1 << e) == 0 {
                        m |= 1 << seat.index();
                    }
                }
                if obs.known_skat.is_none() {
                    m |= 1 << SKAT;
                }
                m
            })
            .collect();
        let mut set = InfoSet {
            fixed,
            unknown,
            allowed,
            caps,
            completions: Vec::new(),
        };
        set.build_completions();
        set
    }

    fn build_completions(&mut self) {
        let n = self.unknown.len();
        let mut table = vec![0u64; (n + 1) * CAP_SLOTS];
        table[n * CAP_SLOTS] = 1;
        for depth in (0..n).rev() {
            let allowed = self.allowed[depth];
            let (cur, next) = table.split_at_mut((depth + 1) * CAP_SLOTS);
            let cur = &mut cur[depth * CAP_SLOTS..];
            let next = &next[..CAP_SLOTS];
            for (idx, slot) in cur.iter_mut().enumerate() {
                let caps = decode_caps(idx);
                let remaining: usize = caps.iter().map(|&c| c as usize).sum();
                if remaining != n - depth {
                    continue;
                }
                let mut total = 0u64;
                for loc in 0..4 {
                    if allowed & (1 << loc) != 0 && caps[loc] > 0 {
                        total += next[idx - CAP_STRIDE[loc]];
                    }
                }
                *slot = total;
            }
        }
        self.completions = table;
    }

    #[inline]
    fn completions_at(&self, depth: usize, caps: &[u8; 4]) -> u64 {
        self.completions[depth * CAP_SLOTS + cap_index(caps)]
    }

    pub fn count(&self) -> u64 {
        if self.caps.iter().map(|&c| c as usize).sum::<usize>() != self.unknown.len() {
            return 0;
        }
        self.completions_at(0, &self.caps)
    }

    pub fn unknown_cards(&self) -> &[Card] {
        &self.unknown
    }

    /// Placement of every card the viewer knows; unknown cards absent.
    pub fn fixed(&self) -> &Deal {
        &self.fixed
    }

    /// Allowed-location bitmask of each unknown card.
    pub fn allowed(&self) -> &[u8] {
        &self.allowed
    }

    pub fn capacities(&self) -> [u8; 4] {
        self.caps
    }

    fn deal_from(&self, locs: &[u8]) -> Deal {
        let mut d = self.fixed;
        for (&c, &l) in self.unknown.iter().zip(locs) {
            match l as usize {
                SKAT => d.skat.insert(c),
                h => d.hands[h].insert(c),
            }
        }
        d
    }

    /// Location vector of the deal with canonical rank `rank`.
    #[allow(clippy::needless_range_loop)]
    fn unrank_locs(&self, mut rank: u64, locs: &mut [u8]) {
        let mut caps = self.caps;
        for depth in 0..self.unknown.len() {
            let allowed = self.allowed[depth];
            let mut chosen = None;
            for loc in 0..4 {
                if allowed & (1 << loc) == 0 || caps[loc] == 0 {
                    continue;
                }
                caps[loc] -= 1;
                let c = self.completions_at(depth + 1, &caps);
                if rank < c {
                    chosen = Some(loc);
                    break;
                }
                rank -= c;
                caps[loc] += 1;
            }
            locs[depth] = chosen.expect("rank out of range") as u8;
        }
    }

    pub fn unrank(&self, rank: u64) -> Deal {
        assert!(rank < self.count(), "rank {rank} out of range");
        let mut locs = vec![0u8; self.unknown.len()];
        self.unrank_locs(rank, &mut locs);
        self.deal_from(&locs)
    }

    /// Canonical rank of a consistent deal, or `None` if the deal is not
    /// in this set.
    pub fn rank(&self, deal: &Deal) -> Option<u64> {
        for seat in 0..3 {
            if !self.fixed.hands[seat].is_subset(deal.hands[seat]) {
                return None;
            }
        }
        if !self.fixed.skat.is_subset(deal.skat) {
            return None;
        }
        let mut caps = self.caps;
        let mut rank = 0u64;
        for (depth, &c) in self.unknown.iter().enumerate() {
            let target = deal.location(c);
            if self.allowed[depth] & (1 << target) == 0 || caps[target] == 0 {
                return None;
            }
            for loc in 0..target {
                if self.allowed[depth] & (1 << loc) != 0 && caps[loc] > 0 {
                    caps[loc] -= 1;
                    rank += self.completions_at(depth + 1, &caps);
                    caps[loc] += 1;
                }
            }
            caps[target] -= 1;
        }
        Some(rank)
    }

    /// Streams every deal in canonical order.
    pub fn iter(&self) -> DealIter<'_> {
        self.iter_range(0, self.count())
    }

    /// Deals with canonical rank in `start..end`; disjoint ranges partition
    /// the set for parallel workers.
    pub fn iter_range(&self, start: u64, end: u64) -> DealIter<'_> {
        let end = end.min(self.count());
        let mut locs = vec![0u8; self.unknown.len()];
        if start < end {
            self.unrank_locs(start, &mut locs);
        }
        DealIter {
            set: self,
            locs,
            next_rank: start,
            end,
        }
    }

    /// Calls `f(rank, log_weight)` for every deal, where the weight is the
    /// product of `factor(card, location)` over unknown cards only.
    pub fn for_each_log_weight<F: FnMut(u64, f64)>(&self, log_factors: &[[f64; 4]], mut f: F) {
        let n = self.unknown.len();
        let lf: Vec<[f64; 4]> = self
            .unknown
            .iter()
            .map(|c| log_factors[c.index()])
            .collect();
        let mut caps = self.caps;
        let mut rank = 0u64;
        if self.count() == 0 {
            return;
        }
        #[allow(clippy::too_many_arguments)]
        fn rec<F: FnMut(u64, f64)>(
            set: &InfoSet,
            lf: &[[f64; 4]],
            depth: usize,
            n: usize,
            caps: &mut [u8; 4],
            acc: f64,
            rank: &mut u64,
            f: &mut F,
        ) {
            if depth == n {
                f(*rank, acc);
                *rank += 1;
                return;
            }
            let allowed = set.allowed[depth];
            for loc in 0..4 {
                if allowed & (1 << loc) == 0 || caps[loc] == 0 {
                    continue;
                }
                caps[loc] -= 1;
                if set.completions_at(depth + 1, caps) > 0 {
                    rec(set, lf, depth + 1, n, caps, acc + lf[depth][loc], rank, f);
                }
                caps[loc] += 1;
            }
        }
        rec(self, &lf, 0, n, &mut caps, 0.0, &mut rank, &mut f);
    }

    /// Log of the sum over all deals of the product of `exp(log_factors)`
    /// over unknown cards, by dynamic programming over the completion table.
    pub fn log_partition(&self, log_factors: &[[f64; 4]]) -> f64 {
        let n = self.unknown.len();
        let mut next = vec![f64::NEG_INFINITY; CAP_SLOTS];
        next[0] = 0.0;
        let mut cur = vec![f64::NEG_INFINITY; CAP_SLOTS];
        for depth in (0..n).rev() {
            let allowed = self.allowed[depth];
            let lf = log_factors[self.unknown[depth].index()];
            for (idx, slot) in cur.iter_mut().enumerate() {
                *slot = f64::NEG_INFINITY;
                if self.completions[depth * CAP_SLOTS + idx] == 0 {
                    continue;
                }
                let caps = decode_caps(idx);
                let mut terms = [f64::NEG_INFINITY; 4];
                for loc in 0..4 {
                    if allowed & (1 << loc) != 0 && caps[loc] > 0 {
                        terms[loc] = lf[loc] + next[idx - CAP_STRIDE[loc]];
                    }
                }
                *slot = log_sum_exp(&terms);
            }
            std::mem::swap(&mut cur, &mut next);
        }
        if self.count() == 0 {
            return f64::NEG_INFINITY;
        }
        next[cap_index(&self.caps)]
    }

    /// Draws `min(k, count)` distinct deals uniformly without replacement,
    /// returned in canonical order.
    pub fn sample_uniform_subset(&self, k: usize, seed: u64) -> Vec<Deal> {
        let mut locs = vec![0u8; self.unknown.len()];
        self.sample_subset_ranks(k, seed)
            .into_iter()
            .map(|r| {
                self.unrank_locs(r, &mut locs);
                self.deal_from(&locs)
            })
            .collect()
    }

    /// Ranks of `min(k, count)` distinct deals drawn uniformly without
    /// replacement, ascending.
    pub fn sample_subset_ranks(&self, k: usize, seed: u64) -> Vec<u64> {
        let count = self.count();
        if k as u64 >= count {
            return (0..count).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ranks: Vec<u64> = sample_distinct(&mut rng, count, k);
        ranks.sort_unstable();
        ranks
    }

    /// Log weight of one deal of the set: the sum of `log_factors` over the
    /// unknown cards at their locations in `deal`.
    pub fn log_weight(&self, deal: &Deal, log_factors: &[[f64; 4]]) -> f64 {
        self.unknown
            .iter()
            .map(|&c| log_factors[c.index()][deal.location(c)])
            .sum()
    }
}

/// `k` distinct values from `0..n`, uniformly.
fn sample_distinct<R: rand::Rng>(rng: &mut R, n: u64, k: usize) -> Vec<u64> {
    if n <= u32::MAX as u64 {
        rand::seq::index::sample(rng, n as usize, k)
            .into_iter()
            .map(|i| i as u64)
            .collect()
    } else {
        let mut seen = std::collections::HashSet::with_capacity(k);
        while seen.len() < k {
            seen.insert(rng.gen_range(0..n));
        }
        seen.into_iter().collect()
    }
}

fn decode_caps(mut idx: usize) -> [u8; 4] {
    let mut caps = [0u8; 4];
    for (k, stride) in CAP_STRIDE.iter().enumerate() {
        caps[k] = (idx / stride) as u8;
        idx %= stride;
    }
    caps
}

pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

pub struct DealIter<'a> {
    set: &'a InfoSet,
    locs: Vec<u8>,
    next_rank: u64,
    end: u64,
}

impl DealIter<'_> {
    /// Advances `locs` to the next canonical assignment.
    fn advance(&mut self) {
        let set = self.set;
        let n = set.unknown.len();
        // capacities remaining after assigning the whole vector are all 0;
        // walk back restoring capacity until a larger location fits.
        let mut caps = [0u8; 4];
        let mut depth = n;
        while depth > 0 {
            depth -= 1;
            let cur = self.locs[depth] as usize;
            caps[cur] += 1;
            let allowed = set.allowed[depth];
            for loc in cur + 1..4 {
                if allowed & (1 << loc) == 0 || caps[loc] == 0 {
                    continue;
                }
                caps[loc] -= 1;
                if set.completions_at(depth + 1, &caps) > 0 {
                    self.locs[depth] = loc as u8;
                    // fill the suffix with its smallest completion
                    for d in depth + 1..n {
                        let allowed = set.allowed[d];
                        for l in 0..4 {
                            if allowed & (1 << l) == 0 || caps[l] == 0 {
                                continue;
                            }
                            caps[l] -= 1;
                            if set.completions_at(d + 1, &caps) > 0 {
                                self.locs[d] = l as u8;
                                break;
                            }
                            caps[l] += 1;
                        }
                    }
                    return;
                }
                caps[loc] += 1;
            }
        }
    }
}

impl Iterator for DealIter<'_> {
    type Item = Deal;

    fn next(&mut self) -> Option<Deal> {
        if self.next_rank >= self.end {
            return None;
        }
        let deal = self.set.deal_from(&self.locs);
        self.next_rank += 1;
        if self.next_rank < self.end {
            self.advance();
        }
        Some(deal)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next_rank) as usize;
        (n, Some(n))
    }
}

pub fn count_deals(obs: &Observation) -> u64 {
    InfoSet::new(obs).count()
}

/// All consistent deals in canonical order.
pub fn enumerate_deals(obs: &Observation) -> Vec<Deal> {
    InfoSet::new(obs).iter().collect()
}

pub fn sample_uniform_subset(obs: &Observation, k: usize, seed: u64) -> Vec<Deal> {
    assert!(k >= 1, "sample size must be positive");
    InfoSet::new(obs).sample_uniform_subset(k, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::Suit;
    use rand::seq::IteratorRandom;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }

    fn random_game(seed: u64, decl: GameDecl, moves: usize) -> GameState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deal = Deal::random(&mut rng);
        let mut g = GameState::new(deal, decl, Seat::new(seed as usize % 3));
        for _ in 0..moves {
            let m = g.legal_moves().iter().choose(&mut rng).unwrap();
            g.play(m).unwrap();
        }
        g
    }

    /// Independent oracle: try every location for every unknown card and
    /// keep the assignments that replay legally.
    fn brute_force(obs: &Observation) -> Vec<Deal> {
        let unknown: Vec<Card> = obs.unknown_cards().iter().collect();
        let n = unknown.len();
        assert!(n <= 9, "brute force only for small sets");
        let mut base = Deal::default();
        base.hands[obs.viewer.index()] = obs.own_initial_hand;
        if let Some(s) = obs.known_skat {
            base.skat = s;
        }
        for &(s, c) in &obs.history {
            if s != obs.viewer {
                base.hands[s.index()].insert(c);
            }
        }
        let mut out = Vec::new();
        for code in 0..4usize.pow(n as u32) {
            let mut d = base;
            let mut x = code;
            let mut locs = vec![0; n];
            for i in (0..n).rev() {
                locs[i] = x % 4;
                x /= 4;
            }
            for (i, &c) in unknown.iter().enumerate() {
                match locs[i] {
                    SKAT => d.skat.insert(c),
                    h => d.hands[h].insert(c),
                }
            }
            if consistent(&d, obs) {
                out.push(d);
            }
        }
        out
    }

    fn obs_of(g: &GameState, viewer: Seat) -> Observation {
        Observation::from_game(g, viewer, [0; 3], None)
    }

    #[test]
    fn root_counts_match_closed_form() {
        let g = random_game(11, GameDecl::Suit(Suit::Clubs), 0);
        let soloist = g.soloist();
        let defender = soloist.next();
        assert_eq!(
            count_deals(&obs_of(&g, defender)),
            binom(22, 10) * binom(12, 10)
        );
        assert_eq!(count_deals(&obs_of(&g, defender)), 42_678_636);
        assert_eq!(count_deals(&obs_of(&g, soloist)), binom(20, 10));
        assert_eq!(count_deals(&obs_of(&g, soloist)), 184_756);
    }

    #[test]
    fn endgame_counts_match_brute_force() {
        let mut found_twelve = false;
        for seed in 0..60 {
            let decl = GameDecl::all()[seed as usize % 6];
            let g = random_game(seed, decl, 24 + (seed as usize % 4));
            for viewer in Seat::ALL {
                let obs = obs_of(&g, viewer);
                let oracle = brute_force(&obs);
                let set = InfoSet::new(&obs);
                assert_eq!(
                    set.count(),
                    oracle.len() as u64,
                    "seed {seed} viewer {viewer}"
                );
                let listed: Vec<Deal> = set.iter().collect();
                assert_eq!(listed.len(), oracle.len());
                let mut a: Vec<[u8; 32]> = listed.iter().map(|d| d.locations()).collect();
                let mut b: Vec<[u8; 32]> = oracle.iter().map(|d| d.locations()).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b);
                assert!(set.rank(g.deal()).is_some(), "true deal missing");
                if g.history().len() == 27 && !obs.is_soloist() && obs.void_constraints() == [0; 3]
                {
                    assert_eq!(set.count(), 12);
                    found_twelve = true;
                }
            }
        }
        assert!(
            found_twelve,
            "no unconstrained final-trick defender position found"
        );
    }

    #[test]
    fn multinomial_oracle_without_voids() {
        // counts with no void constraints equal a direct multinomial
        for seed in 100..140 {
            let g = random_game(seed, GameDecl::Grand, (seed as usize) % 20);
            for viewer in Seat::ALL {
                let obs = obs_of(&g, viewer);
                if obs.void_constraints() != [0; 3] {
                    continue;
                }
                let set = InfoSet::new(&obs);
                let caps = set.capacities();
                let mut left = obs.unknown_cards().len() as u64;
                let mut expect = 1u64;
                for &c in &caps {
                    expect *= binom(left, c as u64);
                    left -= c as u64;
                }
                assert_eq!(set.count(), expect);
            }
        }
    }

    #[test]
    fn canonical_order_and_ranks() {
        let g = random_game(5, GameDecl::Suit(Suit::Hearts), 18);
        let obs = obs_of(&g, g.soloist().next());
        let set = InfoSet::new(&obs);
        let all: Vec<Deal> = set.iter().collect();
        assert_eq!(all.len() as u64, set.count());
        let keys: Vec<Vec<u8>> = all
            .iter()
            .map(|d| {
                set.unknown_cards()
                    .iter()
                    .map(|&c| d.location(c) as u8)
                    .collect()
            })
            .collect();
        assert!(
            keys.windows(2).all(|w| w[0] < w[1]),
            "not strictly increasing"
        );
        for (r, d) in all.iter().enumerate() {
            assert_eq!(set.rank(d), Some(r as u64));
            assert_eq!(set.unrank(r as u64), *d);
        }
        // disjoint ranges cover the set
        let n = set.count();
        let mut joined: Vec<Deal> = Vec::new();
        for k in 0..4 {
            joined.extend(set.iter_range(n * k / 4, n * (k + 1) / 4));
        }
        assert_eq!(joined, all);
    }

    #[test]
    fn log_partition_matches_enumeration() {
        let g = random_game(9, GameDecl::Null, 15);
        let obs = obs_of(&g, g.soloist().offset(2));
        let set = InfoSet::new(&obs);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lf: Vec<[f64; 4]> = (0..32)
            .map(|_| {
                let mut r = [0.0; 4];
                for x in r.iter_mut() {
                    *x = rand::Rng::gen_range(&mut rng, -3.0..0.0);
                }
                r
            })
            .collect();
        let mut direct = 0.0f64;
        for d in set.iter() {
            let s: f64 = set
                .unknown_cards()
                .iter()
                .map(|&c| lf[c.index()][d.location(c)])
                .sum();
            direct += s.exp();
        }
        let dp = set.log_partition(&lf).exp();
        assert!((dp - direct).abs() <= 1e-9 * direct, "{dp} vs {direct}");
        let mut streamed = Vec::new();
        set.for_each_log_weight(&lf, |r, w| streamed.push((r, w)));
        assert_eq!(streamed.len() as u64, set.count());
        let total: f64 = streamed.iter().map(|(_, w)| w.exp()).sum();
        assert!((total - direct).abs() <= 1e-9 * direct);
    }

    #[test]
    fn uniform_subset_sampling() {
        let g = random_game(21, GameDecl::Suit(Suit::Spades), 0);
        let obs = obs_of(&g, g.soloist().next());
        let a = sample_uniform_subset(&obs, 1000, 1);
        let b = sample_uniform_subset(&obs, 1000, 2);
        assert_eq!(a.len(), 1000);
        assert_ne!(a, b);
        assert_eq!(a, sample_uniform_subset(&obs, 1000, 1));
        let distinct: std::collections::HashSet<_> = a.iter().map(|d| d.locations()).collect();
        assert_eq!(distinct.len(), 1000);
        assert!(a.iter().all(|d| consistent(d, &obs)));
        assert!(b.iter().all(|d| consistent(d, &obs)));

        let small = random_game(4, GameDecl::Grand, 26);
        let obs = obs_of(&small, small.to_move());
        let n = count_deals(&obs) as usize;
        let mut all = sample_uniform_subset(&obs, n + 5, 3);
        let mut full = enumerate_deals(&obs);
        all.sort_by_key(|d| d.locations());
        full.sort_by_key(|d| d.locations());
        assert_eq!(all, full);
    }

    #[test]
    fn single_draw_frequency_is_uniform() {
        // find a 12-deal set
        let obs = (0..200)
            .map(|s| random_game(s, GameDecl::Suit(Suit::Diamonds), 27))
            .flat_map(|g| Seat::ALL.map(|v| obs_of(&g, v)))
            .find(|o| count_deals(o) == 12)
            .expect("a 12-deal endgame");
        let set = InfoSet::new(&obs);
        let target = set.unrank(5);
        let trials = 6000;
        let hits = (0..trials)
            .filter(|&s| set.sample_uniform_subset(1, s as u64)[0] == target)
            .count() as f64;
        let p = 1.0 / 12.0;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (hits - trials as f64 * p).abs() < 3.0 * sigma,
            "hits {hits}"
        );
    }

    #[test]
    fn consistency_examples() {
        let g = random_game(31, GameDecl::Suit(Suit::Clubs), 6);
        let viewer = g.soloist().next();
        let obs = obs_of(&g, viewer);
        assert!(consistent(g.deal(), &obs));
        // swap a card the viewer holds with one an opponent already played
        let (opp_seat, opp_card) = *obs.history.iter().find(|(s, _)| *s != viewer).unwrap();
        let mine = obs.own_hand().first().unwrap();
        let mut d = *g.deal();
        d.hands[viewer.index()] = d.hands[viewer.index()].without(mine).with(opp_card);
        d.hands[opp_seat.index()] = d.hands[opp_seat.index()].without(opp_card).with(mine);
        assert!(!consistent(&d, &obs));
    }

    #[test]
    fn slough_reveals_void() {
        // seat 1 sloughs a diamond on a heart lead in a clubs game while
        // a deal that gives seat 1 7H is inconsistent
        let d = Deal::from_location_string("11111111000000002222222200112233").unwrap();
        let mut g = GameState::new(d, GameDecl::Suit(Suit::Clubs), Seat(0));
        g.play("8H".parse().unwrap()).unwrap();
        g.play("7D".parse().unwrap()).unwrap();
        g.play("7S".parse().unwrap()).unwrap();
        let obs = obs_of(&g, Seat(2));
        assert!(consistent(g.deal(), &obs));
        assert_eq!(obs.void_constraints()[1], 1 << Suit::Hearts.index());
        // move 7H from seat 0 to seat 1 in exchange for a diamond
        let mut bad = *g.deal();
        let h7: Card = "7H".parse().unwrap();
        let d8: Card = "8D".parse().unwrap();
        bad.hands[0] = bad.hands[0].without(h7).with(d8);
        bad.hands[1] = bad.hands[1].without(d8).with(h7);
        assert!(!consistent(&bad, &obs));
        assert_eq!(InfoSet::new(&obs).rank(&bad), None);
    }
}
