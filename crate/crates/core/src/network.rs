//! Dense card-location network and its 32×4 output matrix.
//!
//! The history block runs through a tower of dense layers; the tower output
//! is concatenated with the state block and fed through the trunk. The last
//! trunk layer is linear and yields 128 logits, four per card, turned into
//! per-card location probabilities by a softmax. Hidden layers use ELU.
//! Output columns are relative to the viewer: own hand, opponent 1,
//! opponent 2, skat.

use crate::cards::Card;
use crate::error::{Result, SkatError};
use crate::features::{Features, HISTORY_LEN, SOLOIST, STATE_LEN, TRUMP};
use crate::rules::{GameDecl, GameKind, Seat};

pub const OUTPUTS: usize = 128;
pub const DEFAULT_TOWER: [usize; 5] = [HISTORY_LEN, 512, 256, 128, 32];
pub const DEFAULT_TRUNK: [usize; 5] = [32 + STATE_LEN, 1024, 1024, 512, OUTPUTS];

/// Which features a network was trained on.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Bidding, declaration and cardplay.
    Bdci,
    /// Bidding and declaration only; cardplay blocks are masked.
    Bdi,
}

impl Variant {
    pub fn tag(self) -> u8 {
        match self {
            Variant::Bdci => 0,
            Variant::Bdi => 1,
        }
    }

    pub fn from_tag(t: u8) -> Option<Variant> {
        match t {
            0 => Some(Variant::Bdci),
            1 => Some(Variant::Bdi),
            _ => None,
        }
    }
}

/// Fully connected layer, `rows` outputs by `cols` inputs, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f32>,
    pub bias: Vec<f32>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Dense {
        Dense {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            bias: vec![0.0; rows],
        }
    }

    pub fn param_count(&self) -> usize {
        self.rows * self.cols + self.rows
    }

    fn check(&self) -> Result<()> {
        if self.weights.len() != self.rows * self.cols || self.bias.len() != self.rows {
            return Err(SkatError::Shape(format!(
                "layer {}x{} holds {} weights and {} biases",
                self.rows,
                self.cols,
                self.weights.len(),
                self.bias.len()
            )));
        }
        Ok(())
    }

    fn apply(&self, input: &[f32], elu: bool, out: &mut Vec<f32>) {
        out.clear();
        out.extend(
            self.weights
                .chunks_exact(self.cols)
                .zip(&self.bias)
                .map(|(row, &b)| {
                    let z = row.iter().zip(input).fold(b, |acc, (&w, &x)| acc + w * x);
                    if elu {
                        elu_f32(z)
                    } else {
                        z
                    }
                }),
        );
    }
}

fn elu_f32(x: f32) -> f32 {
    if x > 0.0 {
        x
    } else {
        x.exp_m1()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    pub kind: GameKind,
    pub variant: Variant,
    pub tower: Vec<Dense>,
    pub trunk: Vec<Dense>,
}

impl Network {
    /// Checks that layer shapes chain from the feature blocks to 128 logits.
    pub fn new(
        kind: GameKind,
        variant: Variant,
        tower: Vec<Dense>,
        trunk: Vec<Dense>,
    ) -> Result<Network> {
        let net = Network {
            kind,
            variant,
            tower,
            trunk,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn validate(&self) -> Result<()> {
        let mut width = HISTORY_LEN;
        for (i, l) in self.tower.iter().enumerate() {
            l.check()?;
            if l.cols != width {
                return Err(SkatError::Shape(format!(
                    "tower layer {i} takes {} inputs, expected {width}",
                    l.cols
                )));
            }
            width = l.rows;
        }
        width += STATE_LEN;
        if self.trunk.is_empty() {
            return Err(SkatError::Shape("trunk has no layers".into()));
        }
        for (i, l) in self.trunk.iter().enumerate() {
            l.check()?;
            if l.cols != width {
                return Err(SkatError::Shape(format!(
                    "trunk layer {i} takes {} inputs, expected {width}",
                    l.cols
                )));
            }
            width = l.rows;
        }
        if width != OUTPUTS {
            return Err(SkatError::Shape(format!(
                "network emits {width} logits, expected {OUTPUTS}"
            )));
        }
        Ok(())
    }

    /// All-zero network with the default layer widths: every card is
    /// equally likely in each location.
    pub fn zeros(kind: GameKind, variant: Variant) -> Network {
        let layers = |w: &[usize]| w.windows(2).map(|p| Dense::zeros(p[1], p[0])).collect();
        Network {
            kind,
            variant,
            tower: layers(&DEFAULT_TOWER),
            trunk: layers(&DEFAULT_TRUNK),
        }
    }

    /// Hand-set network encoding the declaration prior that the soloist
    /// holds trumps: every trump card gets logit `strength` in the
    /// soloist's column and 0 elsewhere. Only the soloist and trump-suit
    /// inputs are read.
    pub fn trump_prior(kind: GameKind, variant: Variant, strength: f32) -> Network {
        const GATE: f32 = 30.0;
        let tower = vec![Dense::zeros(1, HISTORY_LEN)];
        let inputs = 1 + STATE_LEN;
        // one unit per (relative soloist seat, trump slot)
        let mut hidden = Dense::zeros(15, inputs);
        let mut out = Dense::zeros(OUTPUTS, 15);
        for seat in 0..3 {
            for slot in 0..5 {
                let u = seat * 5 + slot;
                hidden.weights[u * inputs + 1 + SOLOIST + seat] = GATE;
                hidden.weights[u * inputs + 1 + TRUMP + slot] = GATE;
                hidden.bias[u] = 1.0 - 2.0 * GATE;
                let decl = match slot {
                    4 => GameDecl::Grand,
                    s => GameDecl::Suit(crate::cards::Suit::ALL[s]),
                };
                for c in decl.trumps() {
                    let o = c.index() * 4 + seat;
                    // ELU sends idle units to -1, so each unit adds
                    // strength/2 * (h + 1)
                    out.weights[o * 15 + u] = strength / 2.0;
                    out.bias[o] += strength / 2.0;
                }
            }
        }
        Network {
            kind,
            variant,
            tower,
            trunk: vec![hidden, out],
        }
    }

    pub fn param_count(&self) -> usize {
        self.tower
            .iter()
            .chain(&self.trunk)
            .map(Dense::param_count)
            .sum()
    }

    /// Location probabilities with viewer-relative columns. A BDI network
    /// masks the cardplay blocks of its input first.
    pub fn forward(&self, features: &Features) -> LocationMatrix {
        let masked;
        let features = if self.variant == Variant::Bdi {
            let mut f = features.clone();
            f.mask_cardplay();
            masked = f;
            &masked
        } else {
            features
        };
        let mut a = features.history().to_vec();
        let mut b = Vec::new();
        for l in &self.tower {
            l.apply(&a, true, &mut b);
            std::mem::swap(&mut a, &mut b);
        }
        a.extend_from_slice(features.state());
        let last = self.trunk.len() - 1;
        for (i, l) in self.trunk.iter().enumerate() {
            l.apply(&a, i != last, &mut b);
            std::mem::swap(&mut a, &mut b);
        }
        LocationMatrix::from_logits(&a)
    }
}

/// Per-card location probabilities; each row sums to one.
#[derive(Clone, Debug, PartialEq)]
pub struct LocationMatrix {
    pub probs: [[f64; 4]; 32],
}

impl LocationMatrix {
    pub fn uniform() -> LocationMatrix {
        LocationMatrix {
            probs: [[0.25; 4]; 32],
        }
    }

    /// Row-wise softmax of 128 card-major logits.
    pub fn from_logits(logits: &[f32]) -> LocationMatrix {
        assert_eq!(logits.len(), OUTPUTS, "expected {OUTPUTS} logits");
        let mut probs = [[0.0; 4]; 32];
        for (row, z) in probs.iter_mut().zip(logits.chunks_exact(4)) {
            let m = z.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v as f64));
            let e: Vec<f64> = z.iter().map(|&v| (v as f64 - m).exp()).collect();
            let s: f64 = e.iter().sum();
            for (p, v) in row.iter_mut().zip(e) {
                *p = v / s;
            }
        }
        LocationMatrix { probs }
    }

    pub fn row(&self, card: Card) -> [f64; 4] {
        self.probs[card.index()]
    }

    /// Reorders viewer-relative columns into seat order: column `j` of the
    /// input is seat `viewer + j`, the skat column stays last.
    pub fn to_seats(&self, viewer: Seat) -> LocationMatrix {
        let mut probs = [[0.0; 4]; 32];
        for (dst, src) in probs.iter_mut().zip(&self.probs) {
            for j in 0..3 {
                dst[(viewer.index() + j) % 3] = src[j];
            }
            dst[3] = src[3];
        }
        LocationMatrix { probs }
    }

    /// Natural logarithms of the entries, `-inf` for zeros.
    pub fn log_factors(&self) -> [[f64; 4]; 32] {
        let mut out = [[0.0; 4]; 32];
        for (dst, src) in out.iter_mut().zip(&self.probs) {
            for (d, &p) in dst.iter_mut().zip(src) {
                *d = p.ln();
            }
        }
        out
    }
}
