//! Binary weight files.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! magic     8 bytes  "SKATNET1"
//! kind      u8       0 suit, 1 grand, 2 null
//! variant   u8       0 bidding+declaration+cardplay, 1 bidding+declaration
//! reserved  u16      0
//! tower     u32      number of history tower layers
//! trunk     u32      number of trunk layers, output layer included
//! shapes    (u32 rows, u32 cols) per layer, tower first
//! payload   f32 per parameter; per layer the row-major weights, then the bias
//! ```

use std::path::Path;

use crate::error::{Result, SkatError};
use crate::network::{Dense, Network, Variant};
use crate::rules::GameKind;

pub const MAGIC: &[u8; 8] = b"SKATNET1";
const FIXED_HEADER: usize = 20;

pub fn to_bytes(net: &Network) -> Vec<u8> {
    let layers: Vec<&Dense> = net.tower.iter().chain(&net.trunk).collect();
    let mut out = Vec::with_capacity(FIXED_HEADER + 8 * layers.len() + 4 * net.param_count());
    out.extend_from_slice(MAGIC);
    out.push(net.kind.tag());
    out.push(net.variant.tag());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&(net.tower.len() as u32).to_le_bytes());
    out.extend_from_slice(&(net.trunk.len() as u32).to_le_bytes());
    for l in &layers {
        out.extend_from_slice(&(l.rows as u32).to_le_bytes());
        out.extend_from_slice(&(l.cols as u32).to_le_bytes());
    }
    for l in &layers {
        for v in l.weights.iter().chain(&l.bias) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<Network> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(SkatError::BadMagic);
    }
    if bytes.len() < FIXED_HEADER {
        return Err(SkatError::Shape("weight file header is truncated".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let kind = GameKind::from_tag(bytes[8])
        .ok_or_else(|| SkatError::Shape(format!("unknown game kind tag {}", bytes[8])))?;
    let variant = Variant::from_tag(bytes[9])
        .ok_or_else(|| SkatError::Shape(format!("unknown variant tag {}", bytes[9])))?;
    let (n_tower, n_trunk) = (u32_at(12), u32_at(16));
    let n_layers = n_tower
        .checked_add(n_trunk)
        .filter(|&n| n <= 1024)
        .ok_or_else(|| SkatError::Shape("implausible layer count".into()))?;
    let payload_start = FIXED_HEADER + 8 * n_layers;
    if bytes.len() < payload_start {
        return Err(SkatError::Shape(
            "weight file shape table is truncated".into(),
        ));
    }
    let shapes: Vec<(usize, usize)> = (0..n_layers)
        .map(|i| {
            (
                u32_at(FIXED_HEADER + 8 * i),
                u32_at(FIXED_HEADER + 8 * i + 4),
            )
        })
        .collect();
    let params: usize = shapes.iter().map(|&(r, c)| r * c + r).sum();
    let expected = 4 * params;
    let actual = bytes.len() - payload_start;
    if expected != actual {
        return Err(SkatError::PayloadLength { expected, actual });
    }
    let mut floats = bytes[payload_start..]
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()));
    let mut layers: Vec<Dense> = shapes
        .iter()
        .map(|&(rows, cols)| Dense {
            rows,
            cols,
            weights: floats.by_ref().take(rows * cols).collect(),
            bias: floats.by_ref().take(rows).collect(),
        })
        .collect();
    let trunk = layers.split_off(n_tower);
    Network::new(kind, variant, layers, trunk)
}

pub fn save_weights(net: &Network, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_bytes(net))?;
    Ok(())
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<Network> {
    from_bytes(&std::fs::read(path)?)
}

/// Loads a network and checks it was trained for `kind`.
pub fn load_weights_for(path: impl AsRef<Path>, kind: GameKind) -> Result<Network> {
    let net = load_weights(path)?;
    if net.kind != kind {
        return Err(SkatError::WrongKind {
            expected: kind.name().into(),
            found: net.kind.name().into(),
        });
    }
    Ok(net)
}
