//! Exact minimum zero forcing set search.
//!
//! Subsets are enumerated by increasing size; inside one size, combinations
//! follow lexicographic order of the vertex ids sorted as strings, so the
//! first hit is the canonical answer. Each size level is split by its
//! smallest member across rayon workers and merged by that member, so the
//! parallel result equals the serial one.
//!
//! Pruning: isolated vertices are mandatory, the search starts at the
//! minimum degree (the first forcing vertex has at most one white neighbor),
//! and a candidate without any vertex able to force is skipped without
//! computing its closure.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, VertexId, VertexSet};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

/// Closure masks are `u64`, which also bounds any configured limit.
const MASK_BITS: usize = 64;

pub fn minimum_zero_forcing_set(graph: &ColoredGraph) -> Result<VertexSet> {
    minimum_zero_forcing_set_with_limit(graph, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn minimum_zero_forcing_set_with_limit(graph: &ColoredGraph, limit: usize) -> Result<VertexSet> {
    let n = graph.len();
    let limit = limit.min(MASK_BITS);
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "exhaustive zero forcing search",
            limit,
            found: n,
        });
    }
    if n == 0 {
        return Ok(VertexSet::new());
    }

    // Work in id-sorted positions: bit i is the i-th vertex by name.
    let mut order: Vec<VertexId> = graph.vertices().collect();
    order.sort_by(|a, b| graph.name(*a).cmp(graph.name(*b)));
    let mut position = vec![0usize; n];
    for (i, v) in order.iter().enumerate() {
        position[v.0] = i;
    }
    let nbr: Vec<u64> = order
        .iter()
        .map(|&v| graph.neighbors(v).iter().fold(0u64, |m, w| m | (1u64 << position[w.0])))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    let mandatory: u64 = (0..n).filter(|&i| nbr[i] == 0).fold(0, |m, i| m | 1 << i);
    let free: Vec<usize> = (0..n).filter(|&i| mandatory >> i & 1 == 0).collect();
    let min_degree = nbr.iter().map(|m| m.count_ones() as usize).min().unwrap_or(0);
    let fixed = mandatory.count_ones() as usize;
    let start = min_degree.max(fixed);

    let search = Closure { nbr: &nbr, full };
    for size in start..=n {
        let k = size - fixed;
        if k > free.len() {
            break;
        }
        if let Some(mask) = search.first_at_size(&free, k, mandatory) {
            return Ok((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| order[i]).collect());
        }
    }
    unreachable!("the full vertex set is always a zero forcing set")
}

struct Closure<'a> {
    nbr: &'a [u64],
    full: u64,
}

impl Closure<'_> {
    fn forces_all(&self, start: u64) -> bool {
        let mut black = start;
        loop {
            let mut changed = false;
            let mut rest = black;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let white = self.nbr[i] & !black;
                if white != 0 && white & (white - 1) == 0 {
                    black |= white;
                    changed = true;
                }
            }
            if black == self.full {
                return true;
            }
            if !changed {
                return false;
            }
        }
    }

    fn can_start(&self, set: u64) -> bool {
        if set == self.full {
            return true;
        }
        let mut rest = set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.nbr[i] & !set).count_ones() == 1 {
                return true;
            }
        }
        false
    }

    fn accepts(&self, set: u64) -> bool {
        self.can_start(set) && self.forces_all(set)
    }

    /// Lexicographically first `k`-subset of `free` (joined with `base`)
    /// that forces everything.
    fn first_at_size(&self, free: &[usize], k: usize, base: u64) -> Option<u64> {
        if k == 0 {
            return self.accepts(base).then_some(base);
        }
        (0..=free.len() - k)
            .into_par_iter()
            .filter_map(|head| {
                let mut picks = vec![head];
                let with_head = base | 1 << free[head];
                self.first_from(free, k - 1, head + 1, with_head, &mut picks)
            })
            .find_first(|_| true)
    }

    fn first_from(
        &self,
        free: &[usize],
        remaining: usize,
        from: usize,
        set: u64,
        picks: &mut Vec<usize>,
    ) -> Option<u64> {
        if remaining == 0 {
            return self.accepts(set).then_some(set);
        }
        for next in from..=free.len() - remaining {
            picks.push(next);
            let found = self.first_from(free, remaining - 1, next + 1, set | 1 << free[next], picks);
            picks.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}
