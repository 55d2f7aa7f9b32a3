//! Plain state-vector reference simulator and random test data.
//!
//! Deliberately independent of the library: amplitudes live in a `Vec`, gates
//! are applied by index arithmetic, and random unitaries come from normalized
//! Gaussian quaternions.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C = Complex64;
pub type Gate = [[C; 2]; 2];

pub fn cx(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Haar-random element of U(2).
pub fn random_gate<R: Rng>(rng: &mut R) -> Gate {
    let q: Vec<f64> = (0..4).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a = cx(q[0] / n, q[1] / n);
    let b = cx(q[2] / n, q[3] / n);
    let phase = C::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    [[a * phase, -b.conj() * phase], [b * phase, a.conj() * phase]]
}

/// Uniformly random pure state on `qubits` qubits.
pub fn random_state<R: Rng>(rng: &mut R, qubits: usize) -> Vec<C> {
    let v: Vec<C> = (0..1 << qubits)
        .map(|_| cx(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Single-qubit gate on little-endian qubit `q`.
pub fn apply_single(state: &mut [C], g: &Gate, q: usize) {
    let bit = 1 << q;
    for i in 0..state.len() {
        if i & bit == 0 {
            let (a, b) = (state[i], state[i | bit]);
            state[i] = g[0][0] * a + g[0][1] * b;
            state[i | bit] = g[1][0] * a + g[1][1] * b;
        }
    }
}

/// Controlled gate, control qubit 0, target qubit 1.
pub fn apply_controlled(state: &mut [C], g: &Gate) {
    for i in 0..state.len() {
        if i & 1 == 1 && i & 2 == 0 {
            let (a, b) = (state[i], state[i | 2]);
            state[i] = g[0][0] * a + g[0][1] * b;
            state[i | 2] = g[1][0] * a + g[1][1] * b;
        }
    }
}

#[derive(Clone, Debug)]
pub enum Op {
    Single(Gate, usize),
    Controlled(Gate),
}

pub fn random_circuit<R: Rng>(rng: &mut R, qubits: usize, depth: usize) -> Vec<Op> {
    (0..depth)
        .map(|_| {
            if qubits == 2 && rng.random::<f64>() < 0.3 {
                Op::Controlled(random_gate(rng))
            } else {
                Op::Single(random_gate(rng), rng.random_range(0..qubits))
            }
        })
        .collect()
}

pub fn run(ops: &[Op], qubits: usize) -> Vec<C> {
    let mut s = vec![cx(0.0, 0.0); 1 << qubits];
    s[0] = cx(1.0, 0.0);
    for op in ops {
        match op {
            Op::Single(g, q) => apply_single(&mut s, g, *q),
            Op::Controlled(g) => apply_controlled(&mut s, g),
        }
    }
    s
}

pub fn to_matrix(g: &Gate) -> analogq::CMatrix {
    analogq::CMatrix::from_row_slice(2, 2, &[g[0][0], g[0][1], g[1][0], g[1][1]])
}

/// The same program as a library circuit.
pub fn to_circuit(ops: &[Op]) -> analogq::signal::Circuit {
    let mut c = analogq::signal::Circuit::new();
    for op in ops {
        c = match op {
            Op::Single(g, q) => c.single(to_matrix(g), *q),
            Op::Controlled(g) => c.controlled(to_matrix(g)),
        };
    }
    c
}

/// Random single-qubit channel: Kraus operators from a Gaussian 4×2 isometry
/// (`rank` Kraus operators stacked).
pub fn random_kraus<R: Rng>(rng: &mut R, rank: usize) -> Vec<Gate> {
    let rows = 2 * rank;
    let mut m: Vec<[C; 2]> = (0..rows)
        .map(|_| {
            [
                cx(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                cx(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            ]
        })
        .collect();
    // Gram-Schmidt on the two columns
    let dot = |m: &[[C; 2]], a: usize, b: usize| m.iter().map(|r| r[a].conj() * r[b]).sum::<C>();
    let n0 = dot(&m, 0, 0).re.sqrt();
    for r in m.iter_mut() {
        r[0] /= n0;
    }
    let p = dot(&m, 0, 1);
    for r in m.iter_mut() {
        r[1] -= r[0] * p;
    }
    let n1 = dot(&m, 1, 1).re.sqrt();
    for r in m.iter_mut() {
        r[1] /= n1;
    }
    (0..rank).map(|k| [m[2 * k], m[2 * k + 1]]).collect()
}

/// `⟨ψ|Σ_k K φφ† K†|ψ⟩`
pub fn kraus_probability(kraus: &[Gate], phi: [C; 2], psi: [C; 2]) -> f64 {
    kraus
        .iter()
        .map(|k| {
            let out = [k[0][0] * phi[0] + k[0][1] * phi[1], k[1][0] * phi[0] + k[1][1] * phi[1]];
            (psi[0].conj() * out[0] + psi[1].conj() * out[1]).norm_sqr()
        })
        .sum()
}

/// The four probe states |0⟩, |1⟩, |+⟩, |+i⟩.
pub fn probes() -> [[C; 2]; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        [cx(1.0, 0.0), cx(0.0, 0.0)],
        [cx(0.0, 0.0), cx(1.0, 0.0)],
        [cx(h, 0.0), cx(h, 0.0)],
        [cx(h, 0.0), cx(0.0, h)],
    ]
}

/// Exact counts at `shots` per cell for a Kraus channel.
pub fn kraus_counts(kraus: &[Gate], shots: u64) -> [[u64; 4]; 4] {
    let p = probes();
    let mut out = [[0u64; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = (kraus_probability(kraus, p[a], p[b]) * shots as f64).round() as u64;
        }
    }
    out
}

/// χ of a Kraus channel by expanding each operator in the Pauli basis by hand.
pub fn kraus_chi(kraus: &[Gate]) -> analogq::CMatrix {
    let mut chi = analogq::CMatrix::zeros(4, 4);
    for k in kraus {
        // K = a I + b X + c Y + d Z
        let a = (k[0][0] + k[1][1]) / 2.0;
        let d = (k[0][0] - k[1][1]) / 2.0;
        let b = (k[0][1] + k[1][0]) / 2.0;
        let c = (k[1][0] - k[0][1]) / (2.0 * cx(0.0, 1.0));
        let v = [a, b, c, d];
        for i in 0..4 {
            for j in 0..4 {
                chi[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    chi
}
