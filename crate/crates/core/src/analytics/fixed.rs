//! Path probabilities on a fixed node configuration (no spatial averaging).

use crate::channel::{ChannelModel, OrientedNode};
use crate::error::{Error, Result};

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::config("need at least two nodes"));
    }
    if i >= n || j >= n {
        return Err(Error::config(format!("node index out of range: ({i}, {j}) with {n} nodes")));
    }
    if i == j {
        return Err(Error::config("source and target must differ"));
    }
    Ok(())
}

fn link_matrix(nodes: &[OrientedNode], channel: &ChannelModel) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut h = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let p = channel.connection_probability(&nodes[a], &nodes[b]);
            h[a][b] = p;
            h[b][a] = p;
        }
    }
    h
}

/// Probability that `i` and `j` share at least one neighbour:
/// `1 − Π_{k≠i,j} (1 − H_ik H_kj)`.
///
/// Exact for independent links, since paths through different relays use
/// disjoint link pairs.
pub fn h2_exact_fixed(nodes: &[OrientedNode], channel: &ChannelModel, i: usize, j: usize) -> Result<f64> {
    check_pair(nodes.len(), i, j)?;
    let mut none = 1.0;
    for (k, relay) in nodes.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let via = channel.connection_probability(&nodes[i], relay) * channel.connection_probability(relay, &nodes[j]);
        none *= 1.0 - via;
    }
    Ok(1.0 - none)
}

/// Nested product recursion for the probability that `j` is adjacent to a
/// node lying exactly `m − 1` hops from `i`:
///
/// ```text
/// H⁽ᵐ⁾_ij = 1 − Π_{k≠i,j} [1 − H⁽ᵐ⁻¹⁾_ik H_kj Π_{n=1}^{m−2} (1 − H⁽ⁿ⁾_ik)]
/// ```
///
/// `m = 1` returns the link probability and `m = 2` coincides with
/// [`h2_exact_fixed`]. For `m ≥ 3` the recursion treats events through
/// different relays as independent even though longer paths can share
/// links, so it is an approximation.
pub fn hm_approx_fixed(nodes: &[OrientedNode], channel: &ChannelModel, i: usize, j: usize, m: usize) -> Result<f64> {
    check_pair(nodes.len(), i, j)?;
    if m == 0 {
        return Err(Error::config("hop count must be at least 1"));
    }
    let n = nodes.len();
    let h1 = link_matrix(nodes, channel);
    if m == 1 {
        return Ok(h1[i][j]);
    }
    // levels[l] holds H^(l+1) for every ordered pair
    let mut levels: Vec<Vec<Vec<f64>>> = vec![h1];
    for level in 2..=m {
        let prev = &levels[level - 2];
        let mut next = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let mut none = 1.0;
                for k in 0..n {
                    if k == a || k == b {
                        continue;
                    }
                    let mut not_closer = 1.0;
                    for lower in &levels[..level - 2] {
                        not_closer *= 1.0 - lower[a][k];
                    }
                    none *= 1.0 - prev[a][k] * levels[0][k][b] * not_closer;
                }
                next[a][b] = 1.0 - none;
            }
        }
        levels.push(next);
    }
    Ok(levels[m - 1][i][j])
}
