//! Reference computations written independently of the library kernels.

#![allow(dead_code)]

use competing_sir::network::Layer;

/// Listed (non-self) transitions of one base state, transcribed from the
/// transition table as (successor label, probability).
pub fn listed_transitions(
    state: &str,
    q: f64,
    q_sa: f64,
    q_ia: f64,
    delta_a: f64,
    delta_b: f64,
    kappa: f64,
) -> Vec<(&'static str, f64)> {
    let (da, db, k) = (delta_a, delta_b, kappa);
    match state {
        "SS" => vec![
            ("SI", q * (1.0 - q_sa) * (1.0 - k)),
            ("IS", (1.0 - q) * q_ia),
            ("II", q * (1.0 - q_sa) * k + (1.0 - q) * (1.0 - q_ia)),
        ],
        "SI" => vec![
            ("SR", q * (1.0 - k) * db),
            ("II", (1.0 - q * (1.0 - k)) * (1.0 - db)),
            ("IR", (1.0 - q * (1.0 - k)) * db),
        ],
        "SR" => vec![("IR", 1.0 - q)],
        "IS" => vec![
            ("II", (1.0 - da) * (1.0 - q_ia) + da * (1.0 - q_ia) * k),
            ("RS", da * q_ia),
            ("RI", da * (1.0 - q_ia) * (1.0 - k)),
        ],
        "II" => vec![
            ("IR", (1.0 - da) * db),
            ("RI", da * (1.0 - db) * (1.0 - k)),
            ("RR", da * db),
        ],
        "IR" => vec![("RR", da)],
        "RS" => vec![("II", (1.0 - q_ia) * k), ("RI", (1.0 - q_ia) * (1.0 - k))],
        "RI" => vec![("II", (1.0 - db) * k), ("RR", db)],
        "RR" => vec![],
        other => panic!("unknown state {other}"),
    }
}

/// Single-layer discrete-time SIR on probabilities (S, I, R) per node.
pub struct PlainSir<'a> {
    layer: &'a Layer,
    beta: f64,
    delta: f64,
    pub s: Vec<f64>,
    pub i: Vec<f64>,
    pub r: Vec<f64>,
}

impl<'a> PlainSir<'a> {
    pub fn new(layer: &'a Layer, beta: f64, delta: f64, seeds: &[usize]) -> Self {
        let n = layer.node_count();
        let mut s = vec![1.0; n];
        let mut i = vec![0.0; n];
        for &v in seeds {
            s[v] = 0.0;
            i[v] = 1.0;
        }
        Self {
            layer,
            beta,
            delta,
            s,
            i,
            r: vec![0.0; n],
        }
    }

    pub fn step(&mut self) {
        let n = self.s.len();
        let mut s = vec![0.0; n];
        let mut i = vec![0.0; n];
        let mut r = vec![0.0; n];
        for v in 0..n {
            let mut escape = 1.0;
            for &u in self.layer.neighbors(v) {
                escape *= 1.0 - self.beta * self.i[u];
            }
            s[v] = self.s[v] * escape;
            i[v] = self.s[v] * (1.0 - escape) + self.i[v] * (1.0 - self.delta);
            r[v] = self.r[v] + self.i[v] * self.delta;
        }
        self.s = s;
        self.i = i;
        self.r = r;
    }
}

/// Largest adjacency eigenvalue by power iteration on `A + I`; the shift
/// keeps bipartite components from oscillating.
pub fn spectral_radius(layer: &Layer) -> f64 {
    let n = layer.node_count();
    let mut x: Vec<f64> = (0..n).map(|v| 1.0 + (v % 7) as f64 * 1e-3).collect();
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let mut y = x.clone();
        for v in 0..n {
            for &u in layer.neighbors(v) {
                y[v] += x[u];
            }
        }
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in &mut y {
            *a /= norm;
        }
        let mut ay = y.clone();
        for v in 0..n {
            for &u in layer.neighbors(v) {
                ay[v] += y[u];
            }
        }
        let next: f64 = y.iter().zip(&ay).map(|(a, b)| a * b).sum();
        x = y;
        if (next - lambda).abs() < 1e-12 * next.abs() {
            return next - 1.0;
        }
        lambda = next;
    }
    lambda - 1.0
}

/// Standard error of a Bernoulli frequency estimated from `trials` draws.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
