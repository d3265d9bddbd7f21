mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use skat_core::features::{extract_features, Features, FEATURE_LEN, HISTORY_LEN, STATE_LEN};
use skat_core::inference::{log_deal_weight, normalize_log_weights};
use skat_core::io::weights::{from_bytes, to_bytes};
use skat_core::io::{load_weights, load_weights_for, save_weights};
use skat_core::network::{Dense, OUTPUTS};
use skat_core::{
    deal_weight, enumerate_deals, weight_distribution, GameKind, InfoSet, LocationMatrix, Models,
    Network, SkatError, Variant,
};

fn random_dense(r: &mut impl Rng, rows: usize, cols: usize, scale: f32) -> Dense {
    Dense {
        rows,
        cols,
        weights: (0..rows * cols)
            .map(|_| r.gen_range(-scale..scale))
            .collect(),
        bias: (0..rows).map(|_| r.gen_range(-scale..scale)).collect(),
    }
}

/// Small network with the real input and output widths.
fn small_network(seed: u64, kind: GameKind, variant: Variant) -> Network {
    let mut r = rng(seed);
    let tower = vec![
        random_dense(&mut r, 8, HISTORY_LEN, 0.3),
        random_dense(&mut r, 4, 8, 0.5),
    ];
    let trunk = vec![
        random_dense(&mut r, 16, 4 + STATE_LEN, 0.3),
        random_dense(&mut r, OUTPUTS, 16, 1.0),
    ];
    Network::new(kind, variant, tower, trunk).unwrap()
}

fn random_matrix(seed: u64) -> LocationMatrix {
    LocationMatrix::from_logits(&random_logits(seed, 3.0))
}

/// Encodes a weight file field by field.
fn hand_encoded(kind: u8, variant: u8, layers: &[(u32, u32, Vec<f32>)], n_tower: u32) -> Vec<u8> {
    let mut b = b"SKATNET1".to_vec();
    b.push(kind);
    b.push(variant);
    b.extend([0, 0]);
    b.extend(n_tower.to_le_bytes());
    b.extend((layers.len() as u32 - n_tower).to_le_bytes());
    for (rows, cols, _) in layers {
        b.extend(rows.to_le_bytes());
        b.extend(cols.to_le_bytes());
    }
    for (_, _, params) in layers {
        for p in params {
            b.extend(p.to_le_bytes());
        }
    }
    b
}

#[test]
fn hand_encoded_file_decodes() {
    let tower_params: Vec<f32> = (0..HISTORY_LEN + 1).map(|i| i as f32 * 0.001).collect();
    let trunk_params: Vec<f32> = (0..OUTPUTS * (1 + STATE_LEN) + OUTPUTS)
        .map(|i| -(i as f32))
        .collect();
    let bytes = hand_encoded(
        1,
        1,
        &[
            (1, HISTORY_LEN as u32, tower_params.clone()),
            (OUTPUTS as u32, (1 + STATE_LEN) as u32, trunk_params.clone()),
        ],
        1,
    );
    let net = from_bytes(&bytes).unwrap();
    assert_eq!(net.kind, GameKind::Grand);
    assert_eq!(net.variant, Variant::Bdi);
    assert_eq!(net.tower[0].weights, tower_params[..HISTORY_LEN]);
    assert_eq!(net.tower[0].bias, [HISTORY_LEN as f32 * 0.001]);
    assert_eq!(net.trunk[0].weights[5], -5.0);
    assert_eq!(
        *net.trunk[0].bias.last().unwrap(),
        -((trunk_params.len() - 1) as f32)
    );
    assert_eq!(to_bytes(&net), bytes);
}

#[test]
fn files_roundtrip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    for (i, kind) in GameKind::ALL.into_iter().enumerate() {
        for variant in [Variant::Bdci, Variant::Bdi] {
            let net = small_network(i as u64, kind, variant);
            let path = dir
                .path()
                .join(format!("{}-{}.bin", kind.name(), variant.tag()));
            save_weights(&net, &path).unwrap();
            assert_eq!(load_weights(&path).unwrap(), net);
            assert_eq!(load_weights_for(&path, kind).unwrap(), net);
        }
    }
}

#[test]
fn default_sized_zero_network_roundtrips() {
    let net = Network::zeros(GameKind::Suit, Variant::Bdci);
    let bytes = to_bytes(&net);
    assert_eq!(bytes.len(), 20 + 8 * 8 + 4 * net.param_count());
    assert_eq!(from_bytes(&bytes).unwrap(), net);
}

#[test]
fn load_errors_are_typed() {
    let net = small_network(3, GameKind::Null, Variant::Bdci);
    let bytes = to_bytes(&net);

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(from_bytes(&bad), Err(SkatError::BadMagic)));
    assert!(matches!(from_bytes(b"SKAT"), Err(SkatError::BadMagic)));

    match from_bytes(&bytes[..bytes.len() - 4]) {
        Err(SkatError::PayloadLength { expected, actual }) => assert_eq!(expected, actual + 4),
        other => panic!("{other:?}"),
    }
    assert!(matches!(from_bytes(&bytes[..14]), Err(SkatError::Shape(_))));

    let mut bad_kind = bytes.clone();
    bad_kind[8] = 7;
    assert!(matches!(from_bytes(&bad_kind), Err(SkatError::Shape(_))));
    let mut bad_variant = bytes.clone();
    bad_variant[9] = 2;
    assert!(matches!(from_bytes(&bad_variant), Err(SkatError::Shape(_))));

    // a trunk emitting 127 logits
    let short = hand_encoded(
        0,
        0,
        &[(127, (STATE_LEN) as u32, vec![0.0; 127 * STATE_LEN + 127])],
        0,
    );
    assert!(matches!(from_bytes(&short), Err(SkatError::Shape(_))));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("null.bin");
    save_weights(&net, &path).unwrap();
    assert!(matches!(
        load_weights_for(&path, GameKind::Suit),
        Err(SkatError::WrongKind { .. })
    ));
    assert!(matches!(
        load_weights(dir.path().join("missing.bin")),
        Err(SkatError::Io(_))
    ));
}

#[test]
fn trump_prior_favours_the_soloist() {
    let positions = find_positions(14, 20, 0..=20, 2, |o| o.decl.kind() != GameKind::Null);
    let models = Models::trump_prior(Variant::Bdci, 2.0);
    for (_, obs) in &positions {
        let l = models.location_matrix(obs);
        for c in obs.decl.trumps() {
            let row = l.row(c);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let expected = 2f64.exp() / (2f64.exp() + 3.0);
            assert!(
                (row[obs.soloist.index()] - expected).abs() < 1e-6,
                "{c}: {row:?}"
            );
        }
        for c in obs.decl.trumps().complement() {
            assert_eq!(l.row(c), [0.25; 4]);
        }
    }
}

#[test]
fn models_fall_back_to_uniform() {
    let models = Models::new().with(small_network(1, GameKind::Suit, Variant::Bdci));
    let late = find_positions(2, 1, 24..=26, 2, |o| o.decl.kind() == GameKind::Suit)
        .pop()
        .unwrap()
        .1;
    assert_eq!(models.location_matrix(&late), LocationMatrix::uniform());
    let grand = find_positions(3, 1, 0..=10, 2, |o| o.decl.kind() == GameKind::Grand)
        .pop()
        .unwrap()
        .1;
    assert_eq!(models.location_matrix(&grand), LocationMatrix::uniform());
    let suit = find_positions(4, 1, 0..=10, 2, |o| o.decl.kind() == GameKind::Suit)
        .pop()
        .unwrap()
        .1;
    assert_ne!(models.location_matrix(&suit), LocationMatrix::uniform());
}

#[test]
fn bdi_networks_ignore_cardplay() {
    let bdci = small_network(9, GameKind::Suit, Variant::Bdci);
    let bdi = Network {
        variant: Variant::Bdi,
        ..bdci.clone()
    };
    for (_, obs) in find_positions(10, 10, 3..=20, 2, |_| true) {
        let f = extract_features(&obs).unwrap();
        let mut masked = f.clone();
        masked.mask_cardplay();
        assert_eq!(bdi.forward(&f), bdci.forward(&masked));
    }
}

#[test]
fn known_card_rows_cancel() {
    let (_, obs) = find_positions(5, 1, 12..=20, 2, |o| {
        (10..=300).contains(&skat_core::count_deals(o))
    })
    .pop()
    .unwrap();
    let deals = enumerate_deals(&obs);
    let unknown = InfoSet::new(&obs).unknown_cards().to_vec();
    let l = random_matrix(1);
    let mut altered = random_matrix(2);
    for c in &unknown {
        altered.probs[c.index()] = l.probs[c.index()];
    }
    let a = weight_distribution(&l, &deals);
    let b = weight_distribution(&altered, &deals);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn outputs_are_row_stochastic(seed in any::<u64>(), plies in 0usize..24) {
        let net = small_network(seed, GameKind::Suit, Variant::Bdci);
        let (_, obs) = find_positions(seed, 1, plies..=plies, 1, |_| true).pop().unwrap();
        let l = net.forward(&extract_features(&obs).unwrap());
        for row in &l.probs {
            prop_assert!(row.iter().all(|p| (0.0..=1.0).contains(p)));
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn random_feature_vectors_give_distributions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let net = small_network(seed ^ 1, GameKind::Null, Variant::Bdi);
        let values: Vec<f32> = (0..FEATURE_LEN).map(|_| r.gen_range(0.0..1.0)).collect();
        let l = net.forward(&Features::from_values(values).unwrap());
        for row in &l.probs {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn log_weights_equal_direct_products(seed in any::<u64>()) {
        let l = random_matrix(seed);
        let deal = skat_core::Deal::random(&mut rng(seed));
        let mut direct = 1.0f64;
        for c in skat_core::Card::all() {
            direct *= l.probs[c.index()][deal.location(c)];
        }
        let w = deal_weight(&l, &deal);
        prop_assert!(((w - direct) / direct).abs() < 1e-9, "{} vs {}", w, direct);
        prop_assert!((log_deal_weight(&l, &deal) - direct.ln()).abs() < 1e-9);
    }

    #[test]
    fn set_weights_equal_direct_products(seed in any::<u64>()) {
        let (_, obs) = find_positions(seed, 1, 15..=23, 2, |o| skat_core::count_deals(o) <= 500).pop().unwrap();
        let set = InfoSet::new(&obs);
        let l = random_matrix(seed);
        let lf = l.log_factors();
        let deals = enumerate_deals(&obs);
        let mut via_set = Vec::new();
        set.for_each_log_weight(&lf, |_, w| via_set.push(w));
        prop_assert_eq!(via_set.len(), deals.len());
        let direct: Vec<f64> = deals.iter().map(|d| deal_weight(&l, d)).collect();
        let total: f64 = direct.iter().sum();
        let probs = normalize_log_weights(&via_set);
        for (i, deal) in deals.iter().enumerate() {
            prop_assert!((probs[i] - direct[i] / total).abs() < 1e-12);
            prop_assert_eq!(set.log_weight(deal, &lf), via_set[i]);
        }
    }
}
