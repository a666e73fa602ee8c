//! Node sets on the d-dimensional torus.
//!
//! Coordinates live in `[0, 1)` with identification modulo 1; the metric is
//! the wrap-around distance (max-norm minimized over integer shifts). A
//! [`NodeSet`] caches its minimal separation after the first computation.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of nodes a generator may produce.
pub const DEFAULT_CARDINALITY_CAP: usize = 4096;

/// Default dart-throwing attempt cap per requested node count.
pub const DART_ATTEMPTS_PER_NODE: usize = 10_000;

/// A set of `M` points on the d-torus with cached separation metadata.
#[derive(Debug)]
pub struct NodeSet {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    cached_separation: OnceLock<f64>,
}

impl Clone for NodeSet {
    fn clone(&self) -> Self {
        let cached = OnceLock::new();
        if let Some(&q) = self.cached_separation.get() {
            let _ = cached.set(q);
        }
        NodeSet {
            dim: self.dim,
            nodes: self.nodes.clone(),
            cached_separation: cached,
        }
    }
}

/// Reduce a coordinate to the canonical representative in `[0, 1)`.
fn reduce(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    // rem_euclid can return 1.0 for tiny negative inputs.
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Per-coordinate circular distance, `min(|δ|, 1 − |δ|)`.
fn circ(delta: f64) -> f64 {
    let a = delta.abs();
    a.min(1.0 - a)
}

/// Wrap-around distance between two coordinate vectors in `[0,1)^d`:
/// the max over coordinates of the per-coordinate circular distance.
pub fn wrap_distance(t: &[f64], t_prime: &[f64]) -> Result<f64> {
    if t.len() != t_prime.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            got: t_prime.len(),
        });
    }
    Ok(t.iter()
        .zip(t_prime)
        .map(|(&a, &b)| circ(a - b))
        .fold(0.0, f64::max))
}

impl NodeSet {
    /// Build a node set, reducing all coordinates to `[0, 1)` and rejecting
    /// coincident nodes.
    pub fn new(dim: usize, nodes: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let nodes: Vec<Vec<f64>> = nodes
            .into_iter()
            .map(|n| n.into_iter().map(reduce).collect())
            .collect();
        for n in &nodes {
            if n.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: n.len(),
                });
            }
        }
        if nodes.is_empty() {
            return Err(Error::InvalidParameter("node set must be nonempty".into()));
        }
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                if wrap_distance(&nodes[i], &nodes[j])? == 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "nodes {i} and {j} coincide on the torus"
                    )));
                }
            }
        }
        Ok(NodeSet {
            dim,
            nodes,
            cached_separation: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nodes M.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j]
    }

    /// Minimal separation q: the smallest wrap-around distance over distinct
    /// pairs. Cached after the first call. Undefined (error) for M < 2.
    pub fn separation(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::NotEnoughNodes);
        }
        if let Some(&q) = self.cached_separation.get() {
            return Ok(q);
        }
        let mut q = f64::INFINITY;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let d = wrap_distance(&self.nodes[i], &self.nodes[j])?;
                if d < q {
                    q = d;
                }
            }
        }
        let _ = self.cached_separation.set(q);
        Ok(q)
    }

    /// Separation if defined (M ≥ 2), else `None`.
    pub fn separation_opt(&self) -> Option<f64> {
        self.separation().ok()
    }

    /// JSON serialization: `{"dim": d, "nodes": [[...], ...]}`.
    pub fn to_json(&self) -> String {
        let repr = NodeSetRepr {
            dim: self.dim,
            nodes: self.nodes.clone(),
        };
        serde_json::to_string(&repr).expect("NodeSet serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let repr: NodeSetRepr = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("NodeSet JSON parse error: {e}")))?;
        NodeSet::new(repr.dim, repr.nodes)
    }

    /// Plain-text format: one whitespace-separated node per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let parts: Vec<String> = n.iter().map(|x| format!("{x:.17e}")).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let coords: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse::<f64>).collect();
            let coords = coords
                .map_err(|e| Error::InvalidParameter(format!("node parse error: {e}")))?;
            nodes.push(coords);
        }
        let dim = nodes.first().map(|n| n.len()).unwrap_or(0);
        NodeSet::new(dim, nodes)
    }
}

#[derive(Serialize, Deserialize)]
struct NodeSetRepr {
    dim: usize,
    nodes: Vec<Vec<f64>>,
}

/// Full grid `(1/M){0,…,M−1}^d` of `M^d` equispaced nodes with q = 1/M.
pub fn gen_equispaced(m: usize, d: usize) -> Result<NodeSet> {
    gen_equispaced_capped(m, d, DEFAULT_CARDINALITY_CAP)
}

pub fn gen_equispaced_capped(m: usize, d: usize, cap: usize) -> Result<NodeSet> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParameter("m and d must be positive".into()));
    }
    let total = m
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidParameter("M^d overflows".into()))?;
    if total > cap {
        return Err(Error::CardinalityCap {
            requested: total,
            cap,
        });
    }
    let mut nodes = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    loop {
        nodes.push(idx.iter().map(|&k| k as f64 / m as f64).collect());
        // lexicographic advance, last coordinate fastest
        let mut s = d;
        loop {
            if s == 0 {
                return NodeSet::new(d, nodes);
            }
            s -= 1;
            idx[s] += 1;
            if idx[s] < m {
                break;
            }
            idx[s] = 0;
        }
    }
}

/// Node set in which every distinct pair differs by a nonzero multiple of
/// `1/N` in the first coordinate: N nodes with first coordinates on the
/// `1/N` lattice and the remaining coordinates drawn uniformly at random.
///
/// Such a set is never a full grid (for d ≥ 2) yet its Vandermonde matrix of
/// degree N is perfectly conditioned.
pub fn gen_quasi_grid(n: usize, d: usize, layout_seed: u64) -> Result<NodeSet> {
    if d < 2 {
        return Err(Error::InvalidParameter(
            "quasi-grid requires dimension >= 2".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(layout_seed);
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let mut node = Vec::with_capacity(d);
        node.push(i as f64 / n as f64);
        for _ in 1..d {
            node.push(rng.gen::<f64>());
        }
        nodes.push(node);
    }
    NodeSet::new(d, nodes)
}

/// Seeded dart throwing: M nodes with pairwise wrap-around distance at least
/// `q_target`. Deterministic for a fixed seed.
pub fn gen_random_separated(m: usize, d: usize, q_target: f64, seed: u64) -> Result<NodeSet> {
    gen_random_separated_capped(m, d, q_target, seed, DART_ATTEMPTS_PER_NODE * m.max(1))
}

pub fn gen_random_separated_capped(
    m: usize,
    d: usize,
    q_target: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<NodeSet> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParameter("m and d must be positive".into()));
    }
    if !(q_target > 0.0 && q_target <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "q_target must lie in (0, 1/2], got {q_target}"
        )));
    }
    // Density guard: each accepted node blocks a max-norm ball of volume q^d.
    if m > 1 && m as f64 * q_target.powi(d as i32) > 0.5 {
        return Err(Error::Infeasible(format!(
            "density M*q^d = {} exceeds 0.5",
            m as f64 * q_target.powi(d as i32)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut attempts = 0usize;
    while nodes.len() < m {
        if attempts >= max_attempts {
            return Err(Error::GenerationFailed {
                attempts,
                q_target,
            });
        }
        attempts += 1;
        let candidate: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        let ok = nodes
            .iter()
            .all(|n| wrap_distance(n, &candidate).unwrap() >= q_target);
        if ok {
            nodes.push(candidate);
        }
    }
    NodeSet::new(d, nodes)
}
