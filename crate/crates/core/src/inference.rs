//! Deal weighting: the probability of a deal is the product over all 32
//! cards of the predicted probability of that card's location.

use std::sync::Arc;

use crate::deal::Deal;
use crate::features::{extract_features, MAX_TRICK};
use crate::infoset::{log_sum_exp, Observation};
use crate::network::{LocationMatrix, Network, Variant};
use crate::rules::GameKind;

/// Log of the product of `L[c, location(c)]` over all 32 cards.
pub fn log_deal_weight(l: &LocationMatrix, deal: &Deal) -> f64 {
    crate::cards::Card::all()
        .map(|c| l.probs[c.index()][deal.location(c)].ln())
        .sum()
}

pub fn deal_weight(l: &LocationMatrix, deal: &Deal) -> f64 {
    log_deal_weight(l, deal).exp()
}

/// Normalizes log weights into probabilities with log-sum-exp. If every
/// weight is zero the result is uniform.
pub fn normalize_log_weights(log_w: &[f64]) -> Vec<f64> {
    assert!(!log_w.is_empty(), "cannot normalize an empty weight list");
    let z = log_sum_exp(log_w);
    if z == f64::NEG_INFINITY || !z.is_finite() {
        log::warn!(
            "all {} deal weights vanished, falling back to uniform",
            log_w.len()
        );
        return vec![1.0 / log_w.len() as f64; log_w.len()];
    }
    log_w.iter().map(|&w| (w - z).exp()).collect()
}

pub fn weight_distribution(l: &LocationMatrix, deals: &[Deal]) -> Vec<f64> {
    let log_w: Vec<f64> = deals.iter().map(|d| log_deal_weight(l, d)).collect();
    normalize_log_weights(&log_w)
}

/// One network per game kind; kinds without a network fall back to
/// uniform location probabilities.
#[derive(Clone, Debug, Default)]
pub struct Models {
    nets: [Option<Arc<Network>>; 3],
}

impl Models {
    pub fn new() -> Models {
        Models::default()
    }

    pub fn with(mut self, net: Network) -> Models {
        self.insert(net);
        self
    }

    pub fn insert(&mut self, net: Network) {
        let k = net.kind.tag() as usize;
        self.nets[k] = Some(Arc::new(net));
    }

    pub fn get(&self, kind: GameKind) -> Option<&Network> {
        self.nets[kind.tag() as usize].as_deref()
    }

    /// Same hand-set trump prior for suit and grand games, nothing for null.
    pub fn trump_prior(variant: Variant, strength: f32) -> Models {
        Models::new()
            .with(Network::trump_prior(GameKind::Suit, variant, strength))
            .with(Network::trump_prior(GameKind::Grand, variant, strength))
    }

    /// Location matrix in seat order for the observation. Past the
    /// inference horizon, or without a network for the game kind, every
    /// location is equally likely.
    pub fn location_matrix(&self, obs: &Observation) -> LocationMatrix {
        let Some(net) = self.get(obs.decl.kind()) else {
            return LocationMatrix::uniform();
        };
        if obs.trick_number() > MAX_TRICK {
            return LocationMatrix::uniform();
        }
        let f = extract_features(obs).expect("observation within the inference horizon");
        net.forward(&f).to_seats(obs.viewer)
    }
}
