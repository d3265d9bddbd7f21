//! Perfect-information solver: exact minimax value of a fully revealed deal.
//!
//! Suit and grand games are solved for the soloist's card points with the
//! two defenders minimizing jointly; null games for the soloist's win flag.
//! The search is alpha-beta over an integer window with a transposition
//! table probed at trick starts, move ordering, and a rank-equivalence
//! reduction that searches one representative of interchangeable cards.

use crate::cards::{Card, CardSet};
use crate::deal::Deal;
use crate::game::GameState;
use crate::rules::{GameDecl, Rules, Seat, Trick};

/// A fully revealed position during cardplay.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PerfectState {
    pub hands: [CardSet; 3],
    pub skat: CardSet,
    pub decl: GameDecl,
    pub soloist: Seat,
    pub trick: Trick,
    /// Trick points captured by the soloist so far, skat excluded.
    pub soloist_points_so_far: u32,
    pub soloist_tricks_won: u32,
    pub defender_tricks_won: u32,
}

impl PerfectState {
    /// Start of cardplay, seat 0 leading.
    pub fn new(deal: &Deal, decl: GameDecl, soloist: Seat) -> PerfectState {
        PerfectState {
            hands: deal.hands,
            skat: deal.skat,
            decl,
            soloist,
            trick: Trick::new(Seat(0)),
            soloist_points_so_far: 0,
            soloist_tricks_won: 0,
            defender_tricks_won: 0,
        }
    }

    pub fn from_game(g: &GameState) -> PerfectState {
        PerfectState {
            hands: g.hands(),
            skat: g.deal().skat,
            decl: g.decl(),
            soloist: g.soloist(),
            trick: *g.current_trick(),
            soloist_points_so_far: g.soloist_trick_points(),
            soloist_tricks_won: g.soloist_tricks(),
            defender_tricks_won: g.defender_tricks(),
        }
    }

    pub fn to_move(&self) -> Seat {
        self.trick.to_move()
    }

    pub fn legal_moves(&self) -> CardSet {
        Rules::new(self.decl).legal_moves(self.hands[self.to_move().index()], self.trick.led())
    }

    pub fn is_terminal(&self) -> bool {
        self.hands.iter().all(|h| h.is_empty())
    }

    /// Points still in hands or on the table.
    pub fn points_in_play(&self) -> u32 {
        self.hands.iter().map(|h| h.points()).sum::<u32>() + self.trick.points()
    }

    /// Successor after `card`, resolving the trick when it completes.
    pub fn apply(&self, card: Card) -> PerfectState {
        let rules = Rules::new(self.decl);
        self.apply_with(&rules, card)
    }

    fn apply_with(&self, rules: &Rules, card: Card) -> PerfectState {
        let mut s = *self;
        let seat = s.to_move();
        s.hands[seat.index()].remove(card);
        s.trick.push(card);
        if s.trick.is_complete() {
            let winner = s.trick.seat_at(rules.winning_position(s.trick.cards()));
            if winner == s.soloist {
                s.soloist_points_so_far += s.trick.points();
                s.soloist_tricks_won += 1;
            } else {
                s.defender_tricks_won += 1;
            }
            s.trick = Trick::new(winner);
        }
        s
    }

    /// Checks card counts against the trick position.
    pub fn is_well_formed(&self) -> bool {
        let lens: Vec<usize> = Seat::ALL
            .iter()
            .map(|&s| {
                let played_this_trick = (0..self.trick.len()).any(|p| self.trick.seat_at(p) == s);
                self.hands[s.index()].len() + played_this_trick as usize
            })
            .collect();
        let all = self.hands.iter().fold(self.trick.card_set(), |a, &h| {
            if a.is_disjoint(h) {
                a.union(h)
            } else {
                CardSet(u32::MAX)
            }
        });
        lens.iter().all(|&l| l == lens[0])
            && self.soloist_points_so_far <= 120
            && all.is_disjoint(self.skat)
            && !self.trick.is_complete()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SolveValue {
    /// Soloist card points at game end, skat included (suit and grand).
    Points(u32),
    /// Whether the soloist wins under optimal play (null).
    NullWin(bool),
}

impl SolveValue {
    pub fn points(self) -> Option<u32> {
        match self {
            SolveValue::Points(p) => Some(p),
            SolveValue::NullWin(_) => None,
        }
    }

    pub fn null_win(self) -> Option<bool> {
        match self {
            SolveValue::NullWin(w) => Some(w),
            SolveValue::Points(_) => None,
        }
    }

    /// Points, or 1/0 for a null win/loss.
    pub fn as_f64(self) -> f64 {
        match self {
            SolveValue::Points(p) => p as f64,
            SolveValue::NullWin(w) => w as u8 as f64,
        }
    }

    /// Soloist wins the game on this value.
    pub fn soloist_wins(self) -> bool {
        match self {
            SolveValue::Points(p) => p >= 61,
            SolveValue::NullWin(w) => w,
        }
    }
}

#[derive(Copy, Clone, Default)]
struct TtEntry {
    key: u64,
    key2: u64,
    lower: u8,
    upper: u8,
    best: u8,
    /// Cards left in the position; 0 marks an empty slot.
    depth: u8,
}

#[derive(Copy, Clone, Debug)]
pub struct SolverOptions {
    pub transposition_table: bool,
    pub equivalence: bool,
    /// log2 of the number of table slots.
    pub table_bits: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            transposition_table: true,
            equivalence: true,
            table_bits: 20,
        }
    }
}

const NO_MOVE: u8 = 0xFF;

/// Solver for one (declaration, soloist) pair. Table entries only depend
/// on the remaining hands and the leader, so the table stays valid across
/// different deals of the same game.
pub struct Solver {
    rules: Rules,
    soloist: u8,
    null: bool,
    opts: SolverOptions,
    tt: Vec<TtEntry>,
    tt_mask: usize,
    /// Strength-ordered cards of each effective suit, strongest first.
    suit_order: [Vec<u8>; 5],
    points: [u8; 32],
    nodes: u64,
}

impl Solver {
    pub fn new(decl: GameDecl, soloist: Seat) -> Solver {
        Solver::with_options(decl, soloist, SolverOptions::default())
    }

    pub fn with_options(decl: GameDecl, soloist: Seat, opts: SolverOptions) -> Solver {
        let rules = Rules::new(decl);
        let mut suit_order: [Vec<u8>; 5] = Default::default();
        for c in Card::all() {
            suit_order[rules.effective_suit(c)].push(c.index() as u8);
        }
        for o in suit_order.iter_mut() {
            o.sort_by_key(|&i| std::cmp::Reverse(rules.strength(Card::from_index(i as usize))));
        }
        let mut points = [0u8; 32];
        for c in Card::all() {
            points[c.index()] = c.points() as u8;
        }
        let size = if opts.transposition_table {
            1usize << opts.table_bits
        } else {
            0
        };
        Solver {
            rules,
            soloist: soloist.0,
            null: decl == GameDecl::Null,
            opts,
            tt: vec![TtEntry::default(); size],
            tt_mask: size.wrapping_sub(1),
            suit_order,
            points,
            nodes: 0,
        }
    }

    pub fn decl(&self) -> GameDecl {
        self.rules.decl
    }

    pub fn soloist(&self) -> Seat {
        Seat(self.soloist)
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn clear(&mut self) {
        self.tt.iter_mut().for_each(|e| *e = TtEntry::default());
    }

    fn check(&self, state: &PerfectState) {
        assert_eq!(
            state.decl, self.rules.decl,
            "solver built for another declaration"
        );
        assert_eq!(
            state.soloist.0, self.soloist,
            "solver built for another soloist"
        );
        assert!(state.is_well_formed(), "illegal solver state");
    }

    /// Exact value of the position under optimal play by all sides.
    pub fn solve(&mut self, state: &PerfectState) -> SolveValue {
        self.check(state);
        if self.null {
            if state.soloist_tricks_won > 0 {
                return SolveValue::NullWin(false);
            }
            let v = self.search_root(state, 0, 1);
            SolveValue::NullWin(v == 1)
        } else {
            let fut = self.zero_window_solve(state, None);
            SolveValue::Points(state.soloist_points_so_far + state.skat.points() + fut as u32)
        }
    }

    /// Whether the soloist reaches 61 points (suit/grand) or wins the null,
    /// using a null-window search.
    pub fn solve_win(&mut self, state: &PerfectState) -> bool {
        self.check(state);
        if self.null {
            return state.soloist_tricks_won == 0 && self.search_root(state, 0, 1) == 1;
        }
        let need = 61i32 - (state.soloist_points_so_far + state.skat.points()) as i32;
        if need <= 0 {
            return true;
        }
        self.search_root(state, need - 1, need) >= need
    }

    /// Value after playing `card` from `state`.
    pub fn perfect_info_val(&mut self, state: &PerfectState, card: Card) -> SolveValue {
        self.check(state);
        assert!(state.legal_moves().contains(card), "illegal move {card}");
        let next = state.apply_with(&self.rules, card);
        self.solve(&next)
    }

    /// Values of every legal move, in ascending card order.
    pub fn move_values(&mut self, state: &PerfectState) -> Vec<(Card, SolveValue)> {
        self.check(state);
        let legal = state.legal_moves();
        let live = self.live_mask(state.hands, &state.trick);
        let mut out: Vec<(Card, SolveValue)> = Vec::with_capacity(legal.len());
        let mut done: Vec<(CardSet, SolveValue)> = Vec::new();
        let mut guess: Option<u32> = None;
        for c in legal {
            if let Some(&(_, v)) = done.iter().find(|(g, _)| g.contains(c)) {
                out.push((c, v));
                continue;
            }
            let next = state.apply_with(&self.rules, c);
            let v = match (self.null, guess) {
                (false, Some(g)) => {
                    let base = next.soloist_points_so_far + next.skat.points();
                    let fut = self.zero_window_solve(&next, Some(g as i32 - base as i32));
                    SolveValue::Points(base + fut as u32)
                }
                _ => self.solve(&next),
            };
            guess = v.points();
            let group = if self.opts.equivalence {
                self.equivalence_group(legal, live, c)
            } else {
                CardSet::single(c)
            };
            done.push((group, v));
            out.push((c, v));
        }
        out
    }

    /// Principal variation from `state` to the end of the game.
    pub fn principal_variation(&mut self, state: &PerfectState) -> Vec<Card> {
        let mut s = *state;
        let mut line = Vec::new();
        while !s.is_terminal() {
            let maximize = s.to_move() == s.soloist;
            let vals = self.move_values(&s);
            let pick = vals
                .iter()
                .copied()
                .reduce(|a, b| {
                    let better = if maximize {
                        b.1.as_f64() > a.1.as_f64()
                    } else {
                        b.1.as_f64() < a.1.as_f64()
                    };
                    if better {
                        b
                    } else {
                        a
                    }
                })
                .unwrap()
                .0;
            line.push(pick);
            s = s.apply_with(&self.rules, pick);
        }
        line
    }

    fn live_mask(&self, hands: [CardSet; 3], trick: &Trick) -> u32 {
        hands[0].0 | hands[1].0 | hands[2].0 | trick.card_set().0
    }

    /// Cards of `legal` interchangeable with `c`: same effective suit, no
    /// live card between them in strength order, and equal card points
    /// (any points in null).
    fn equivalence_group(&self, legal: CardSet, live: u32, c: Card) -> CardSet {
        let order = &self.suit_order[self.rules.effective_suit(c)];
        let mut group = CardSet::single(c);
        let pos = order.iter().position(|&x| x as usize == c.index()).unwrap();
        let cp = self.points[c.index()];
        for dir in [-1i32, 1] {
            let mut i = pos as i32 + dir;
            while i >= 0 && (i as usize) < order.len() {
                let x = order[i as usize] as usize;
                if live & (1 << x) != 0 {
                    if legal.0 & (1 << x) != 0 && (self.null || self.points[x] == cp) {
                        group.insert(Card::from_index(x));
                    } else {
                        break;
                    }
                }
                i += dir;
            }
        }
        group
    }

    /// Exact future points by repeated null-window searches. With a guess
    /// each probe tests just past the last returned bound; without one the
    /// interval is bisected. The table keeps the bounds of earlier probes.
    fn zero_window_solve(&mut self, state: &PerfectState, guess: Option<i32>) -> i32 {
        let (mut lo, mut hi) = (0i32, state.points_in_play() as i32);
        let mut g = guess;
        while lo < hi {
            let mid = match g {
                Some(g) => g.clamp(lo + 1, hi),
                None => (lo + hi + 1) / 2,
            };
            let v = self.search_root(state, mid - 1, mid);
            if v >= mid {
                lo = v;
            } else {
                hi = v;
            }
            g = g.map(|_| v);
        }
        lo
    }

    /// Strongest card of each run of interchangeable legal cards: runs are
    /// split by live cards outside `legal` and, in points games, by a change
    /// of card points.
    fn representatives(&self, legal: CardSet, live: u32) -> CardSet {
        let mut reps = CardSet::EMPTY;
        for (e, order) in self.suit_order.iter().enumerate() {
            if legal.0 & self.rules.suit_mask(e).0 == 0 {
                continue;
            }
            let mut run: Option<u8> = None;
            for &x in order {
                let bit = 1u32 << x;
                if live & bit == 0 {
                    continue;
                }
                if legal.0 & bit == 0 {
                    run = None;
                    continue;
                }
                let p = self.points[x as usize];
                match run {
                    Some(rp) if self.null || rp == p => {}
                    _ => {
                        reps.0 |= bit;
                        run = Some(p);
                    }
                }
            }
        }
        reps
    }

    fn search_root(&mut self, state: &PerfectState, alpha: i32, beta: i32) -> i32 {
        let hands = [state.hands[0].0, state.hands[1].0, state.hands[2].0];
        let mut buf = [0u8; 3];
        for (i, c) in state.trick.cards().iter().enumerate() {
            buf[i] = c.index() as u8;
        }
        self.search(
            hands,
            state.trick.leader.0,
            buf,
            state.trick.len() as u8,
            alpha,
            beta,
        )
    }

    #[inline]
    fn tt_slot(&self, h: &[u32; 3], leader: u8) -> (usize, u64, u64) {
        let k1 = (h[0] as u64) | ((h[1] as u64) << 32);
        let k2 = (h[2] as u64) | ((leader as u64) << 32);
        let mut x = k1.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k2.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        x ^= x >> 31;
        x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x ^= x >> 29;
        ((x as usize) & self.tt_mask & !1, k1, k2)
    }

    /// Returns the soloist's future value from this node: trick points still
    /// to be captured (points games) or 1/0 for the null win flag.
    fn search(
        &mut self,
        hands: [u32; 3],
        leader: u8,
        trick: [u8; 3],
        n: u8,
        mut alpha: i32,
        mut beta: i32,
    ) -> i32 {
        self.nodes += 1;
        let mut tt_idx = usize::MAX;
        let mut tt_best = NO_MOVE;
        if n == 0 {
            let all = hands[0] | hands[1] | hands[2];
            if all == 0 {
                return if self.null { 1 } else { 0 };
            }
            if !self.null {
                let remaining = CardSet(all).points() as i32;
                if alpha >= remaining {
                    return remaining;
                }
                if beta <= 0 {
                    return 0;
                }
            }
            if self.opts.transposition_table {
                let (idx, k1, k2) = self.tt_slot(&hands, leader);
                tt_idx = idx;
                if let Some(e) = self.tt[idx..idx + 2]
                    .iter()
                    .find(|e| e.depth != 0 && e.key == k1 && e.key2 == k2)
                {
                    let (lo, hi) = (e.lower as i32, e.upper as i32);
                    if lo >= beta {
                        return lo;
                    }
                    if hi <= alpha {
                        return hi;
                    }
                    if lo == hi {
                        return lo;
                    }
                    alpha = alpha.max(lo);
                    beta = beta.min(hi);
                    tt_best = e.best;
                }
            }
        }
        let (alpha0, beta0) = (alpha, beta);

        let seat = (leader + n) % 3;
        let hand = hands[seat as usize];
        let led = (n > 0).then(|| Card::from_index(trick[0] as usize));
        let legal = self.rules.legal_moves(CardSet(hand), led);
        let maximize = seat == self.soloist;

        let mut moves = [0u8; 10];
        let count = self.order_moves(legal, hands, &trick, n, leader, tt_best, &mut moves);

        let mut best = if maximize { i32::MIN } else { i32::MAX };
        let mut best_move = NO_MOVE;
        for &m in &moves[..count] {
            let mut h = hands;
            h[seat as usize] &= !(1u32 << m);
            let mut t = trick;
            t[n as usize] = m;
            let v = if n == 2 {
                let cards = [
                    Card::from_index(t[0] as usize),
                    Card::from_index(t[1] as usize),
                    Card::from_index(t[2] as usize),
                ];
                let winner = (leader + self.rules.winning_position(&cards) as u8) % 3;
                if self.null {
                    if winner == self.soloist {
                        0
                    } else {
                        self.search(h, winner, [0; 3], 0, alpha, beta)
                    }
                } else {
                    let gain = if winner == self.soloist {
                        (self.points[t[0] as usize]
                            + self.points[t[1] as usize]
                            + self.points[t[2] as usize]) as i32
                    } else {
                        0
                    };
                    gain + self.search(h, winner, [0; 3], 0, alpha - gain, beta - gain)
                }
            } else {
                self.search(h, leader, t, n + 1, alpha, beta)
            };
            if maximize {
                if v > best {
                    best = v;
                    best_move = m;
                }
                alpha = alpha.max(v);
            } else {
                if v < best {
                    best = v;
                    best_move = m;
                }
                beta = beta.min(v);
            }
            if alpha >= beta {
                break;
            }
        }

        if tt_idx != usize::MAX {
            self.store(tt_idx, &hands, leader, best, alpha0, beta0, best_move);
        }
        best
    }

    /// Records a search result in the two-slot bucket at `idx`: the first
    /// slot keeps the deepest position seen, the second always takes the
    /// newest.
    #[allow(clippy::too_many_arguments)]
    fn store(
        &mut self,
        idx: usize,
        hands: &[u32; 3],
        leader: u8,
        best: i32,
        alpha: i32,
        beta: i32,
        best_move: u8,
    ) {
        let (_, k1, k2) = self.tt_slot(hands, leader);
        let depth = (hands[0] | hands[1] | hands[2]).count_ones() as u8;
        let hit = (idx..idx + 2).find(|&i| {
            let e = &self.tt[i];
            e.depth != 0 && e.key == k1 && e.key2 == k2
        });
        let (mut lo, mut hi) = match hit {
            Some(i) => (self.tt[i].lower as i32, self.tt[i].upper as i32),
            None => (0, 120),
        };
        if best <= alpha {
            hi = hi.min(best);
        } else if best >= beta {
            lo = lo.max(best);
        } else {
            lo = best;
            hi = best;
        }
        let lower = lo.max(0) as u8;
        let entry = TtEntry {
            key: k1,
            key2: k2,
            lower,
            upper: (hi.min(120) as u8).max(lower),
            best: best_move,
            depth,
        };
        let slot = match hit {
            Some(i) => i,
            None if depth >= self.tt[idx].depth => {
                self.tt[idx + 1] = self.tt[idx];
                idx
            }
            None => idx + 1,
        };
        self.tt[slot] = entry;
    }

    /// Fills `out` with representatives of the legal moves in search order;
    /// returns how many.
    #[allow(clippy::too_many_arguments)]
    fn order_moves(
        &self,
        legal: CardSet,
        hands: [u32; 3],
        trick: &[u8; 3],
        n: u8,
        leader: u8,
        tt_best: u8,
        out: &mut [u8; 10],
    ) -> usize {
        let reps = if self.opts.equivalence {
            let mut live = hands[0] | hands[1] | hands[2];
            for &c in &trick[..n as usize] {
                live |= 1 << c;
            }
            self.representatives(legal, live)
        } else {
            legal
        };

        let seat = (leader + n) % 3;
        let soloist_moving = seat == self.soloist;
        let mut played = [Card::from_index(0); 3];
        for i in 0..n as usize {
            played[i] = Card::from_index(trick[i] as usize);
        }
        let ahead = if n > 0 {
            let w = (leader + self.rules.winning_position(&played[..n as usize]) as u8) % 3;
            (w == self.soloist) == soloist_moving
        } else {
            false
        };
        let others = (hands[0] | hands[1] | hands[2]) & !hands[seat as usize];
        let mut scored: [(i32, u8); 10] = [(0, 0); 10];
        let mut k = 0;
        for c in reps {
            let s = self.rules.strength(c) as i32;
            let p = self.points[c.index()] as i32;
            let mut score = if self.null {
                // the soloist ducks low, defenders try to force high
                if soloist_moving {
                    -s
                } else {
                    s
                }
            } else if n == 0 {
                let eff = self.rules.effective_suit(c);
                let mut higher = others & self.rules.suit_mask(eff).0;
                let mut master = true;
                while higher != 0 {
                    let x = higher.trailing_zeros() as usize;
                    higher &= higher - 1;
                    if self.rules.strength(Card::from_index(x)) as i32 > s {
                        master = false;
                        break;
                    }
                }
                let trump = self.rules.is_trump(c) as i32;
                match (master, soloist_moving) {
                    (true, _) => 300 + trump * 50 + p,
                    (false, true) => trump * 100 + s * 4 + p,
                    (false, false) => -trump * 100 - p * 4 - s,
                }
            } else {
                played[n as usize] = c;
                let beats = self.rules.winning_position(&played[..=n as usize]) == n as usize;
                match (n, ahead, beats) {
                    (2, true, _) => p * 8 - s,
                    (_, _, true) if !ahead => 1000 + p * 8 - s,
                    _ => -p * 8 - s,
                }
            };
            if c.index() as u8 == tt_best {
                score += 10_000;
            }
            scored[k] = (score, c.index() as u8);
            k += 1;
        }
        let slice = &mut scored[..k];
        slice.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (i, &(_, c)) in slice.iter().enumerate() {
            out[i] = c;
        }
        k
    }
}

/// Convenience wrapper building a fresh solver.
pub fn solve(state: &PerfectState) -> SolveValue {
    Solver::new(state.decl, state.soloist).solve(state)
}

pub fn perfect_info_val(state: &PerfectState, card: Card) -> SolveValue {
    Solver::new(state.decl, state.soloist).perfect_info_val(state, card)
}
