//! Shipped noise presets.
//!
//! * `ideal`: no noise.
//! * `calibrated`: tuned with `cargo run --release -p analogq-cli --example calibrate`
//!   so that the Deutsch experiment succeeds about 96% of the time.
//! * `heavy`: noise far above signal level; measurement outcomes are close to coin flips.

use analogq::NoiseModel;

use crate::error::{CliError, Result};

pub const PRESETS: [(&str, &str); 3] = [
    ("ideal", include_str!("../presets/ideal.json")),
    ("calibrated", include_str!("../presets/calibrated.json")),
    ("heavy", include_str!("../presets/heavy.json")),
];

pub fn noise_preset(name: &str) -> Result<NoiseModel> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            CliError::Config(format!("unknown noise preset {name:?} (available: {})", names.join(", ")))
        })?;
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("preset {name}: {e}")))
}
