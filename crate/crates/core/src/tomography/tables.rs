//! Measurement records and their JSON wire format.
//!
//! Pauli mean table:
//!
//! ```json
//! { "kind": "pauli-means", "qubits": 2, "shots": 10000, "seed": 7, "noise": {...},
//!   "settings": [ { "setting": "XZ", "mean": 0.12 }, ... ] }
//! ```
//!
//! Setting labels list the Pauli factor of qubit n-1 first. `shots` is `null` for
//! infinite-shot (exact) tables; `seed` and `noise` echo how the data were produced
//! and are `null` for external data.
//!
//! Process-tomography counts:
//!
//! ```json
//! { "kind": "qpt-counts", "shots": 1000, "seed": 7, "noise": {...},
//!   "inputs": ["0","1","+","+i"], "settings": ["0","1","+","+i"],
//!   "counts": [[1000, 0, 503, 498], ...] }
//! ```
//!
//! `counts[α][β]` is the number of successes of the projective test onto state β
//! after preparing state α and running the channel, out of `shots` trials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::pauli::{pauli_strings, Pauli};
use crate::signal::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub noise: Option<NoiseModel>,
}

/// Mean values `B̄` of the scaled Pauli strings `P/2^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PauliMeanWire", try_from = "PauliMeanWire")]
pub struct PauliMeanTable {
    qubits: usize,
    /// `None` for exact (infinite-shot) tables.
    shots_per_setting: Option<u64>,
    means: Vec<Option<f64>>,
    pub provenance: Provenance,
}

/// Position of a Pauli string in lexicographic order (qubit n-1 most significant).
pub fn setting_index(setting: &[Pauli]) -> usize {
    setting.iter().fold(0, |acc, p| acc * 4 + (p.index() as usize - 1))
}

pub fn setting_label(setting: &[Pauli]) -> String {
    setting.iter().map(|p| p.label()).collect()
}

pub fn parse_setting(label: &str) -> Result<Vec<Pauli>> {
    label.chars().map(Pauli::from_label).collect()
}

impl PauliMeanTable {
    /// Empty table; only the identity entry (fixed at `1/2^n`) is populated.
    pub fn new(qubits: usize, shots_per_setting: Option<u64>) -> Result<Self> {
        if qubits == 0 || qubits > 2 {
            return Err(Error::UnsupportedConfiguration(format!(
                "state tomography supports 1 or 2 qubits, got {qubits}"
            )));
        }
        if shots_per_setting == Some(0) {
            return Err(Error::Domain("shots per setting must be at least 1".into()));
        }
        let mut means = vec![None; 1 << (2 * qubits)];
        means[0] = Some(1.0 / (1u64 << qubits) as f64);
        Ok(Self {
            qubits,
            shots_per_setting,
            means,
            provenance: Provenance::default(),
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn shots_per_setting(&self) -> Option<u64> {
        self.shots_per_setting
    }

    pub fn set(&mut self, setting: &[Pauli], mean: f64) -> Result<()> {
        if setting.len() != self.qubits {
            return Err(Error::Domain(format!("setting {} has wrong length", setting_label(setting))));
        }
        if !mean.is_finite() {
            return Err(Error::Domain(format!("mean for {} is not finite", setting_label(setting))));
        }
        let k = setting_index(setting);
        if k == 0 {
            return Err(Error::Domain("the identity entry is fixed at 1/2^n".into()));
        }
        self.means[k] = Some(mean);
        Ok(())
    }

    pub fn get(&self, setting: &[Pauli]) -> Option<f64> {
        if setting.len() != self.qubits {
            return None;
        }
        self.means[setting_index(setting)]
    }

    pub fn is_complete(&self) -> bool {
        self.means.iter().all(Option::is_some)
    }

    /// All `(setting, mean)` pairs; fails on a missing entry.
    pub fn entries(&self) -> Result<Vec<(Vec<Pauli>, f64)>> {
        pauli_strings(self.qubits)
            .into_iter()
            .map(|s| {
                let k = setting_index(&s);
                self.means[k]
                    .map(|m| (s.clone(), m))
                    .ok_or_else(|| Error::Domain(format!("table is missing setting {}", setting_label(&s))))
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SettingMean {
    setting: String,
    mean: f64,
}

#[derive(Serialize, Deserialize)]
struct PauliMeanWire {
    kind: String,
    qubits: usize,
    shots: Option<u64>,
    seed: Option<u64>,
    noise: Option<NoiseModel>,
    settings: Vec<SettingMean>,
}

impl From<PauliMeanTable> for PauliMeanWire {
    fn from(t: PauliMeanTable) -> Self {
        let settings = pauli_strings(t.qubits)
            .into_iter()
            .filter_map(|s| {
                t.means[setting_index(&s)].map(|mean| SettingMean {
                    setting: setting_label(&s),
                    mean,
                })
            })
            .collect();
        Self {
            kind: "pauli-means".into(),
            qubits: t.qubits,
            shots: t.shots_per_setting,
            seed: t.provenance.seed,
            noise: t.provenance.noise,
            settings,
        }
    }
}

impl TryFrom<PauliMeanWire> for PauliMeanTable {
    type Error = Error;

    fn try_from(w: PauliMeanWire) -> Result<Self> {
        if w.kind != "pauli-means" {
            return Err(Error::Domain(format!("expected kind \"pauli-means\", got {:?}", w.kind)));
        }
        let mut t = PauliMeanTable::new(w.qubits, w.shots)?;
        for s in w.settings {
            let setting = parse_setting(&s.setting)?;
            if setting_index(&setting) == 0 {
                let expect = 1.0 / (1u64 << w.qubits) as f64;
                if (s.mean - expect).abs() > 1e-12 {
                    return Err(Error::Domain(format!("identity mean must be {expect}, got {}", s.mean)));
                }
                continue;
            }
            t.set(&setting, s.mean)?;
        }
        t.provenance = Provenance {
            seed: w.seed,
            noise: w.noise,
        };
        Ok(t)
    }
}

/// The four single-qubit probe states used as inputs and as measurement settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeState {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "+i")]
    PlusI,
}

impl ProbeState {
    pub const ALL: [ProbeState; 4] = [ProbeState::Zero, ProbeState::One, ProbeState::Plus, ProbeState::PlusI];

    pub fn label(self) -> &'static str {
        match self {
            ProbeState::Zero => "0",
            ProbeState::One => "1",
            ProbeState::Plus => "+",
            ProbeState::PlusI => "+i",
        }
    }
}

/// Success counts `N[α][β]` out of `shots` per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CountsWire", try_from = "CountsWire")]
pub struct CountsTable {
    shots: u64,
    counts: [[u64; 4]; 4],
    pub provenance: Provenance,
}

impl CountsTable {
    pub fn new(shots: u64, counts: [[u64; 4]; 4]) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Domain("counts table needs at least one shot per cell".into()));
        }
        for (a, row) in counts.iter().enumerate() {
            for (b, &n) in row.iter().enumerate() {
                if n > shots {
                    return Err(Error::Domain(format!("count {n} in cell ({a},{b}) exceeds {shots} shots")));
                }
            }
        }
        Ok(Self {
            shots,
            counts,
            provenance: Provenance::default(),
        })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &[[u64; 4]; 4] {
        &self.counts
    }

    pub fn frequency(&self, input: usize, setting: usize) -> f64 {
        self.counts[input][setting] as f64 / self.shots as f64
    }
}

#[derive(Serialize, Deserialize)]
struct CountsWire {
    kind: String,
    shots: u64,
    seed: Option<u64>,
    noise: Option<NoiseModel>,
    inputs: Vec<ProbeState>,
    settings: Vec<ProbeState>,
    counts: Vec<Vec<u64>>,
}

impl From<CountsTable> for CountsWire {
    fn from(t: CountsTable) -> Self {
        Self {
            kind: "qpt-counts".into(),
            shots: t.shots,
            seed: t.provenance.seed,
            noise: t.provenance.noise,
            inputs: ProbeState::ALL.to_vec(),
            settings: ProbeState::ALL.to_vec(),
            counts: t.counts.iter().map(|r| r.to_vec()).collect(),
        }
    }
}

impl TryFrom<CountsWire> for CountsTable {
    type Error = Error;

    fn try_from(w: CountsWire) -> Result<Self> {
        if w.kind != "qpt-counts" {
            return Err(Error::Domain(format!("expected kind \"qpt-counts\", got {:?}", w.kind)));
        }
        if w.inputs.len() != 4 || w.settings.len() != 4 || w.counts.len() != 4 || w.counts.iter().any(|r| r.len() != 4) {
            return Err(Error::Domain("counts table must be 4x4 over the four probe states".into()));
        }
        // reorder to the canonical probe order
        let pos = |list: &[ProbeState], p: ProbeState| list.iter().position(|&q| q == p);
        let mut counts = [[0u64; 4]; 4];
        for (a, pa) in ProbeState::ALL.iter().enumerate() {
            let ra = pos(&w.inputs, *pa).ok_or_else(|| Error::Domain(format!("missing input {}", pa.label())))?;
            for (b, pb) in ProbeState::ALL.iter().enumerate() {
                let rb = pos(&w.settings, *pb).ok_or_else(|| Error::Domain(format!("missing setting {}", pb.label())))?;
                counts[a][b] = w.counts[ra][rb];
            }
        }
        let mut t = CountsTable::new(w.shots, counts)?;
        t.provenance = Provenance {
            seed: w.seed,
            noise: w.noise,
        };
        Ok(t)
    }
}
