//! Seeded random instances for property suites and demos.
//!
//! The seed is read from `KSW_SEED` when set, so failures can be replayed.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nalgebra::DMatrix;

use crate::clifford::{boost, build_clifford, rotation};
use crate::graphs::{Edge, WeightedDigraph};
use crate::linalg::Operator;
use crate::splitdirac::{build_split, compatible_gamma_minus, SplitDiracStructure};

pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

/// The seed in effect: `KSW_SEED` if it parses, else [`DEFAULT_SEED`].
pub fn seed() -> u64 {
    std::env::var("KSW_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// An independent stream for each consumer, derived from [`seed`].
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

/// Random simple digraph with `2..=max_vertices` vertices, at most `max_edges` edges and
/// weights `p/q` with `1 ≤ p ≤ 20`, `1 ≤ q ≤ 6`. Vertex labels are `v0, v1, …`.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> WeightedDigraph {
    let n = rng.random_range(2..=max_vertices.max(2));
    let target = rng.random_range(0..=max_edges.min(n * (n - 1) / 2));
    random_graph_with(rng, n, target)
}

/// Random simple digraph with exactly `n` vertices and `m` edges.
pub fn random_graph_with<R: Rng>(rng: &mut R, n: usize, m: usize) -> WeightedDigraph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    for k in (1..pairs.len()).rev() {
        let j = rng.random_range(0..=k);
        pairs.swap(k, j);
    }
    let edges = pairs
        .into_iter()
        .take(m)
        .map(|(a, b)| {
            let (src, dst) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            Edge { src, dst, weight: random_weight(rng), phase: None, label: None }
        })
        .collect();
    WeightedDigraph::new((0..n).map(|k| format!("v{k}")).collect(), edges).expect("generated graph is simple")
}

/// Random connected simple digraph: a random spanning tree plus `extra` edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize) -> WeightedDigraph {
    let mut pairs = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        pairs.insert((u, v));
    }
    let mut attempts = 0;
    while pairs.len() < (n - 1 + extra).min(n * (n - 1) / 2) && attempts < 1000 {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
        attempts += 1;
    }
    let edges = pairs
        .into_iter()
        .map(|(a, b)| {
            let (src, dst) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            Edge { src, dst, weight: random_weight(rng), phase: None, label: None }
        })
        .collect();
    WeightedDigraph::new((0..n).map(|k| format!("v{k}")).collect(), edges).expect("generated graph is simple")
}

pub fn random_weight<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.random_range(1..=20)), BigInt::from(rng.random_range(1..=6)))
}

/// Random reorientation of every edge.
pub fn random_orientation<R: Rng>(rng: &mut R, g: &WeightedDigraph) -> WeightedDigraph {
    let flips: Vec<usize> = (0..g.edge_count()).filter(|_| rng.random_bool(0.5)).collect();
    g.with_reversed(&flips)
}

/// A proper orthochronous Lorentz matrix: boosts along each spatial axis interleaved
/// with rotations of neighbouring axes.
pub fn random_lorentz<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(n, n);
    for axis in 1..n {
        m = boost(n, axis, rng.random_range(-1.0..1.0)) * m;
        if axis + 1 < n {
            m = rotation(n, axis, axis + 1, rng.random_range(-3.0..3.0)) * m;
        }
    }
    m
}

/// A vectorial split structure over a random connected graph: spin-lifted random
/// transports and `γ_e^+ = ρ(v_e)` for random non-null `v_e`, with `γ_e^-` derived.
pub fn random_spin_structure<R: Rng>(rng: &mut R, n: usize, vertices: usize) -> SplitDiracStructure {
    let g = random_connected_graph(rng, vertices, 2);
    let rep = build_clifford(n).expect("even n in range");
    let (mut hs, mut plus, mut minus): (Vec<Operator>, Vec<Operator>, Vec<Operator>) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..g.edge_count() {
        let h = rep.spin_lift(&random_lorentz(rng, n)).expect("proper orthochronous");
        let v: Vec<f64> = loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            if rep.metric(&v, &v).abs() > 0.1 {
                break v;
            }
        };
        let gp = rep.vector(&v);
        minus.push(compatible_gamma_minus(&rep, &h, &gp).expect("invertible transport"));
        plus.push(gp);
        hs.push(h);
    }
    build_split(&g, &rep, hs, plus, minus, None).expect("consistent data")
}
