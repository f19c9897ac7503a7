use std::sync::atomic::{AtomicU64, Ordering};

use super::Realization;
use crate::error::{Error, Result};

static IDENTITY_CHECKS: AtomicU64 = AtomicU64::new(0);

/// Number of per-node degree identities verified so far in this process.
pub fn degree_identity_checks() -> u64 {
    IDENTITY_CHECKS.load(Ordering::Relaxed)
}

/// Hop-count profile of one source node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopCounts {
    /// `by_hop[k - 1]` nodes lie exactly `k` hops away.
    pub by_hop: Vec<u32>,
    pub unreachable: u32,
}

impl HopCounts {
    pub fn degree(&self, k: usize) -> u32 {
        if k == 0 {
            return 0;
        }
        self.by_hop.get(k - 1).copied().unwrap_or(0)
    }
}

/// Reusable breadth-first search state.
pub(crate) struct Bfs {
    dist: Vec<u32>,
    queue: Vec<u32>,
}

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            dist: vec![u32::MAX; n],
            queue: Vec::with_capacity(n),
        }
    }

    /// Counts nodes per hop distance from `source` into `levels` (cleared
    /// first) and returns the unreachable count after checking that the
    /// counts partition the other `N − 1` nodes.
    pub(crate) fn run(&mut self, real: &Realization, source: usize, levels: &mut Vec<u32>) -> Result<u32> {
        levels.clear();
        self.queue.clear();
        self.dist[source] = 0;
        self.queue.push(source as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            let du = self.dist[u];
            for &v in real.neighbors(u) {
                let v = v as usize;
                if self.dist[v] == u32::MAX {
                    self.dist[v] = du + 1;
                    self.queue.push(v as u32);
                    let k = du as usize;
                    if levels.len() <= k {
                        levels.push(0);
                    }
                    levels[k] += 1;
                }
            }
        }
        for &v in &self.queue {
            self.dist[v as usize] = u32::MAX;
        }
        let n = real.len() as u64;
        let reached = self.queue.len() as u64 - 1;
        let unreachable = n - 1 - reached;
        let total: u64 = levels.iter().map(|&c| c as u64).sum::<u64>() + unreachable;
        if total != n - 1 {
            return Err(Error::Invariant(format!(
                "trial {} node {source}: hop counts sum to {total}, expected {}",
                real.trial,
                n - 1
            )));
        }
        IDENTITY_CHECKS.fetch_add(1, Ordering::Relaxed);
        Ok(unreachable as u32)
    }
}

/// Breadth-first search from every node.
pub fn khop_degrees(real: &Realization) -> Result<Vec<HopCounts>> {
    let mut bfs = Bfs::new(real.len());
    let mut levels = Vec::new();
    (0..real.len())
        .map(|s| {
            let unreachable = bfs.run(real, s, &mut levels)?;
            Ok(HopCounts {
                by_hop: levels.clone(),
                unreachable,
            })
        })
        .collect()
}
