//! Exact chromatic number for small graphs by branch and bound.

use crate::graph::{Graph, GraphError};

/// Default vertex limit for [`chromatic_number_small`].
pub const DEFAULT_VERTEX_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chromatic {
    Exact(u32),
    /// Not colourable with `cap` colours.
    AboveCap(u32),
}

/// Exact χ(g), searching up to `cap` colours. Graphs above `limit` vertices
/// (at most 64) are rejected.
pub fn chromatic_number_small(g: &Graph, cap: u32, limit: usize) -> Result<Chromatic, GraphError> {
    let limit = limit.min(64);
    if g.order() > limit {
        return Err(GraphError::TooLarge {
            order: g.order(),
            limit,
        });
    }
    let ids: Vec<_> = g.vertices().collect();
    let adj: Vec<u64> = ids
        .iter()
        .map(|v| {
            g.neighbors(v)
                .unwrap()
                .iter()
                .map(|w| 1u64 << ids.binary_search(&w).unwrap())
                .fold(0, |m, b| m | b)
        })
        .collect();
    if ids.is_empty() {
        return Ok(Chromatic::Exact(0));
    }
    let lower = if g.size() == 0 {
        1
    } else if g.is_bipartite() {
        2
    } else {
        3
    };
    for k in lower..=cap {
        if colourable(&adj, k) {
            return Ok(Chromatic::Exact(k));
        }
    }
    Ok(Chromatic::AboveCap(cap))
}

fn colourable(adj: &[u64], k: u32) -> bool {
    let mut colour = vec![u32::MAX; adj.len()];
    dsatur(adj, k, &mut colour, 0)
}

// DSATUR branching: colour the vertex whose neighbours use the most colours.
fn dsatur(adj: &[u64], k: u32, colour: &mut [u32], done: usize) -> bool {
    if done == adj.len() {
        return true;
    }
    let used = |v: usize, colour: &[u32]| -> u64 {
        let mut m = 0u64;
        let mut nb = adj[v];
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if colour[w] != u32::MAX {
                m |= 1 << colour[w];
            }
        }
        m
    };
    let (v, mask) = (0..adj.len())
        .filter(|&v| colour[v] == u32::MAX)
        .map(|v| (v, used(v, colour)))
        .max_by_key(|&(v, m)| (m.count_ones(), adj[v].count_ones(), std::cmp::Reverse(v)))
        .unwrap();
    // Symmetry: never open more than one new colour at a time.
    let max_used = colour
        .iter()
        .filter(|&&c| c != u32::MAX)
        .max()
        .map_or(0, |&c| c + 1);
    for c in 0..k.min(max_used + 1) {
        if mask & (1 << c) == 0 {
            colour[v] = c;
            if dsatur(adj, k, colour, done + 1) {
                return true;
            }
            colour[v] = u32::MAX;
        }
    }
    false
}
