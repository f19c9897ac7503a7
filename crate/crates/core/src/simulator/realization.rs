use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::NetworkConfig;
use crate::channel::{ChannelModel, OrientedNode};
use crate::error::{Error, Result};

/// Largest node count a single realization may hold.
pub const MAX_NODES: usize = 5_000_000;

/// Smallest value the per-pair uniform variate can take.
const ZETA_MIN: f64 = 1.0 / (1u64 << 53) as f64;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform variate on (0, 1] owned by the unordered pair `i < j` of a trial.
/// Depends only on its arguments, so links do not depend on the order in
/// which candidate pairs are visited.
pub(crate) fn pair_uniform(seed: u64, trial: u64, i: u32, j: u32) -> f64 {
    let k = splitmix(splitmix(splitmix(seed) ^ trial) ^ ((i as u64) << 32 | j as u64));
    ((k >> 11) + 1) as f64 * ZETA_MIN
}

/// A sampled network: oriented nodes, undirected links in compressed
/// adjacency form, and the interior mask.
#[derive(Debug, Clone)]
pub struct Realization {
    pub seed: u64,
    pub trial: u64,
    nodes: Vec<OrientedNode>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    interior: Vec<bool>,
}

impl Realization {
    /// Builds a realization from an explicit edge list. Edges must join
    /// distinct nodes and appear once.
    pub fn from_edges(
        seed: u64,
        trial: u64,
        nodes: Vec<OrientedNode>,
        edges: &[(u32, u32)],
        interior: Vec<bool>,
    ) -> Result<Self> {
        let n = nodes.len();
        if interior.len() != n {
            return Err(Error::config("interior mask length differs from node count"));
        }
        let mut degree = vec![0usize; n + 1];
        for &(a, b) in edges {
            if a == b || a as usize >= n || b as usize >= n {
                return Err(Error::Invariant(format!("bad edge ({a}, {b}) for {n} nodes")));
            }
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(a, b) in edges {
            neighbors[fill[a as usize]] = b;
            fill[a as usize] += 1;
            neighbors[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        let real = Realization {
            seed,
            trial,
            nodes,
            offsets,
            neighbors,
            interior,
        };
        real.check_simple()?;
        Ok(real)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[OrientedNode] {
        &self.nodes
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn interior_mask(&self) -> &[bool] {
        &self.interior
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Links as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.len() {
            for &j in self.neighbors(i) {
                if (i as u32) < j {
                    out.push((i as u32, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).contains(&(j as u32))
    }

    /// No self loops, no repeated links. Symmetry holds by construction.
    fn check_simple(&self) -> Result<()> {
        let mut seen = vec![u32::MAX; self.len()];
        for i in 0..self.len() {
            for &j in self.neighbors(i) {
                if j as usize == i || seen[j as usize] == i as u32 {
                    return Err(Error::Invariant(format!("node {i} has a self loop or repeated link to {j}")));
                }
                seen[j as usize] = i as u32;
            }
        }
        Ok(())
    }

    pub fn to_dump(&self) -> RealizationDump {
        RealizationDump {
            seed: self.seed,
            trial: self.trial,
            nodes: self.nodes.iter().map(|n| [n.x, n.y, n.orientation]).collect(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// One line of a realization dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationDump {
    pub seed: u64,
    pub trial: u64,
    pub nodes: Vec<[f64; 3]>,
    pub edges: Vec<[u32; 2]>,
}

fn node_count(config: &NetworkConfig, rng: &mut ChaCha8Rng) -> Result<usize> {
    let mean = config.density * std::f64::consts::PI * config.domain_radius * config.domain_radius;
    let n = if config.poisson_nodes {
        if mean == 0.0 {
            0.0
        } else {
            Poisson::new(mean)
                .map_err(|e| Error::config(format!("cannot draw a Poisson node count with mean {mean}: {e}")))?
                .sample(rng)
        }
    } else {
        mean.floor()
    };
    if n > MAX_NODES as f64 {
        return Err(Error::Budget {
            estimated: n as u64,
            cap: MAX_NODES as u64,
            hint: "reduce the density or the domain radius".into(),
        });
    }
    Ok(n as usize)
}

/// Draws trial `trial` of `config`. Positions are uniform on the disk,
/// orientations uniform on [0, 2π), and each pair is linked iff its own
/// uniform variate is at most the connection probability.
pub fn sample_realization(config: &NetworkConfig, trial: u64) -> Result<Realization> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    let n = node_count(config, &mut rng)?;
    let radius = config.domain_radius;
    let nodes: Vec<OrientedNode> = (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let phi = TAU * rng.random::<f64>();
            let o = TAU * rng.random::<f64>();
            OrientedNode::new(r * phi.cos(), r * phi.sin(), o)
        })
        .collect();
    let inner = radius - config.margin();
    let interior = nodes.iter().map(|p| p.x.hypot(p.y) <= inner).collect();
    let edges = sample_links(&config.channel, &nodes, radius, config.seed, trial);
    Realization::from_edges(config.seed, trial, nodes, &edges, interior)
}

/// Distance beyond which no pair can be linked: the variate never drops
/// below 2⁻⁵³, and past this radius every connection probability does.
fn link_cutoff(channel: &ChannelModel) -> f64 {
    match channel {
        ChannelModel::HardDisk { r0 } => *r0,
        ChannelModel::RayleighDirectional { .. } => channel.effective_range(ZETA_MIN) * (1.0 + 1e-9),
    }
}

fn sample_links(channel: &ChannelModel, nodes: &[OrientedNode], radius: f64, seed: u64, trial: u64) -> Vec<(u32, u32)> {
    let n = nodes.len();
    if n < 2 {
        return Vec::new();
    }
    let cutoff = link_cutoff(channel);
    // square grid of cells at least `cutoff` wide covering [-R, R]²
    let side = ((2.0 * radius / cutoff).floor() as usize).clamp(1, 2048);
    let width = 2.0 * radius / side as f64;
    let cell_of = |p: &OrientedNode| {
        let cx = (((p.x + radius) / width) as usize).min(side - 1);
        let cy = (((p.y + radius) / width) as usize).min(side - 1);
        (cx, cy)
    };
    let mut start = vec![0usize; side * side + 1];
    let cells: Vec<(usize, usize)> = nodes.iter().map(cell_of).collect();
    for &(cx, cy) in &cells {
        start[cy * side + cx + 1] += 1;
    }
    for c in 0..side * side {
        start[c + 1] += start[c];
    }
    let mut fill = start.clone();
    let mut members = vec![0u32; n];
    for (i, &(cx, cy)) in cells.iter().enumerate() {
        let c = cy * side + cx;
        members[fill[c]] = i as u32;
        fill[c] += 1;
    }

    let trig: Vec<(f64, f64)> = nodes.iter().map(|p| p.orientation.sin_cos()).collect();
    let mut edges = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        let (cx, cy) = cells[i];
        let (sa, ca) = trig[i];
        for ny in cy.saturating_sub(1)..=(cy + 1).min(side - 1) {
            for nx in cx.saturating_sub(1)..=(cx + 1).min(side - 1) {
                let c = ny * side + nx;
                for &j in &members[start[c]..start[c + 1]] {
                    if (j as usize) <= i {
                        continue;
                    }
                    let b = &nodes[j as usize];
                    let dx = b.x - a.x;
                    let dy = b.y - a.y;
                    let r = dx.hypot(dy);
                    if r > cutoff {
                        continue;
                    }
                    let (sb, cb) = trig[j as usize];
                    let h = channel.link_probability(dx, dy, r, ca, sa, cb, sb);
                    if h > 0.0 && pair_uniform(seed, trial, i as u32, j) <= h {
                        edges.push((i as u32, j));
                    }
                }
            }
        }
    }
    edges
}
