//! File formats: binary network weights and text game records.

pub mod record;
pub mod weights;

pub use record::{parse_record, parse_records, serialize_record, serialize_records, GameRecord};
pub use weights::{load_weights, load_weights_for, save_weights};
