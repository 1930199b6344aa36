use std::collections::VecDeque;

use super::{interval_cost, pair_cost, Matching};
use crate::persistence::Interval;

const FREE: usize = usize::MAX;

/// Exact bottleneck distance and an optimal matching.
///
/// Each side is padded with one diagonal copy per interval of the other side,
/// so that leaving an interval unmatched becomes an edge to its own copy. A
/// matching of cost at most `δ` exists iff the graph of edges with cost
/// `≤ δ` has a perfect matching; the optimum is one of the edge costs, found
/// by binary search.
pub fn bottleneck_intervals(a: &[Interval], b: &[Interval]) -> (f64, Matching) {
    let (na, nb) = (a.len(), b.len());
    let side = na + nb;
    if side == 0 {
        return (0.0, empty_matching(0.0));
    }
    // Left: a[0..na], then diagonal copies of b. Right: b[0..nb], then
    // diagonal copies of a.
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            edges.push((i, j, pair_cost(x, y)));
        }
        edges.push((i, nb + i, interval_cost(x)));
    }
    for (j, y) in b.iter().enumerate() {
        edges.push((na + j, j, interval_cost(y)));
    }
    let mut candidates: Vec<f64> = edges
        .iter()
        .map(|e| e.2)
        .filter(|c| c.is_finite())
        .chain(std::iter::once(0.0))
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let solve = |delta: f64| -> Option<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); side];
        for &(l, r, c) in &edges {
            if c <= delta {
                adj[l].push(r);
            }
        }
        // Diagonal to diagonal costs nothing.
        for row in &mut adj[na..side] {
            row.extend(nb..side);
        }
        hopcroft_karp(&adj, side)
    };

    let (mut lo, mut hi) = (0usize, candidates.len());
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match solve(candidates[mid]) {
            Some(m) => {
                best = Some((candidates[mid], m));
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let Some((delta, mate)) = best else {
        // Infinite intervals cannot be matched up: every matching costs ∞.
        return (f64::INFINITY, infinite_matching(a, b));
    };
    let mut matching = empty_matching(delta);
    for (l, &r) in mate.iter().enumerate().take(na) {
        if r < nb {
            matching.pairs.push((l, r));
        } else {
            matching.unmatched_first.push(l);
        }
    }
    for (j, &l) in inverse(&mate, side).iter().enumerate().take(nb) {
        if l >= na {
            matching.unmatched_second.push(j);
        }
    }
    (delta, matching)
}

fn empty_matching(cost: f64) -> Matching {
    Matching {
        pairs: Vec::new(),
        unmatched_first: Vec::new(),
        unmatched_second: Vec::new(),
        cost,
    }
}

/// A matching for the infinite case: infinite intervals paired in order,
/// everything else unmatched.
fn infinite_matching(a: &[Interval], b: &[Interval]) -> Matching {
    let inf_a: Vec<usize> = (0..a.len()).filter(|&i| a[i].is_infinite()).collect();
    let inf_b: Vec<usize> = (0..b.len()).filter(|&j| b[j].is_infinite()).collect();
    let pairs: Vec<(usize, usize)> = inf_a.iter().copied().zip(inf_b.iter().copied()).collect();
    Matching {
        unmatched_first: (0..a.len())
            .filter(|i| !pairs.iter().any(|p| p.0 == *i))
            .collect(),
        unmatched_second: (0..b.len())
            .filter(|j| !pairs.iter().any(|p| p.1 == *j))
            .collect(),
        pairs,
        cost: f64::INFINITY,
    }
}

fn inverse(mate: &[usize], side: usize) -> Vec<usize> {
    let mut inv = vec![FREE; side];
    for (l, &r) in mate.iter().enumerate() {
        if r != FREE {
            inv[r] = l;
        }
    }
    inv
}

/// Perfect matching of a bipartite graph with `n` nodes per side, or `None`.
fn hopcroft_karp(adj: &[Vec<usize>], n: usize) -> Option<Vec<usize>> {
    let mut mate_l = vec![FREE; n];
    let mut mate_r = vec![FREE; n];
    let mut dist = vec![0usize; n];
    let mut matched = 0;
    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..n {
            if mate_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mate_r[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut iter = vec![0usize; n];
        for l in 0..n {
            if mate_l[l] == FREE && augment(l, adj, &mut mate_l, &mut mate_r, &mut dist, &mut iter)
            {
                matched += 1;
            }
        }
    }
    (matched == n).then_some(mate_l)
}

/// Iterative DFS along BFS layers looking for an augmenting path from `root`.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
    iter: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&l) = stack.last() {
        if iter[l] == adj[l].len() {
            dist[l] = usize::MAX;
            stack.pop();
            continue;
        }
        let r = adj[l][iter[l]];
        iter[l] += 1;
        let next = mate_r[r];
        if next == FREE {
            // Flip the path recorded on the stack.
            let mut r = r;
            while let Some(l) = stack.pop() {
                let prev = mate_l[l];
                mate_l[l] = r;
                mate_r[r] = l;
                r = prev;
            }
            return true;
        }
        if dist[next] == dist[l] + 1 {
            stack.push(next);
        }
    }
    false
}
