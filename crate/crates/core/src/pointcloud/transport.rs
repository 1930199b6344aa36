//! Exact optimal transport between finitely supported measures.
//!
//! The transportation problem is solved with a primal network simplex on
//! the complete bipartite graph sources × sinks. The basis is a spanning
//! tree of `m + n - 1` cells; the starting tree comes from the north-west
//! corner rule and entering cells are chosen by block pricing.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{euclidean, EmpiricalMeasure, PointCloudError};

const REDUCED_COST_TOL: f64 = 1e-12;

/// Optimal coupling γ between two measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    /// `(source index, target index) → mass`; zero entries are omitted.
    pub entries: BTreeMap<(usize, usize), f64>,
    pub cost: f64,
}

impl TransportPlan {
    pub fn row_marginals(&self, rows: usize) -> Vec<f64> {
        let mut out = vec![0.0; rows];
        for (&(i, _), &w) in &self.entries {
            out[i] += w;
        }
        out
    }

    pub fn col_marginals(&self, cols: usize) -> Vec<f64> {
        let mut out = vec![0.0; cols];
        for (&(_, j), &w) in &self.entries {
            out[j] += w;
        }
        out
    }
}

/// Knobs for [`wasserstein_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WassersteinOptions {
    /// Measures with more support points than this are replaced by an
    /// i.i.d. resample of this many points (drawn proportionally to the
    /// weights, uniform weights on the result). `None` disables resampling.
    pub max_support_size: Option<usize>,
    pub seed: u64,
}

/// Exact 1-Wasserstein distance with Euclidean ground cost.
pub fn wasserstein(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
) -> Result<(f64, TransportPlan), PointCloudError> {
    wasserstein_with(a, b, WassersteinOptions::default())
}

pub fn wasserstein_with(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    options: WassersteinOptions,
) -> Result<(f64, TransportPlan), PointCloudError> {
    if a.dim() != b.dim() {
        return Err(PointCloudError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if let Some(cap) = options.max_support_size {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let a = resample(a, cap, &mut rng)?;
        let b = resample(b, cap, &mut rng)?;
        let plan = solve(&a, &b)?;
        return Ok((plan.cost, plan));
    }
    let plan = solve(a, b)?;
    Ok((plan.cost, plan))
}

fn resample(
    m: &EmpiricalMeasure,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<EmpiricalMeasure, PointCloudError> {
    if m.len() <= cap || cap == 0 {
        return Ok(m.clone());
    }
    let dist =
        WeightedIndex::new(m.weights()).map_err(|_| PointCloudError::InvalidWeight(f64::NAN))?;
    let mut coords = Vec::with_capacity(cap * m.dim());
    for _ in 0..cap {
        coords.extend_from_slice(m.point(dist.sample(rng)));
    }
    EmpiricalMeasure::from_flat(m.dim(), coords, vec![1.0 / cap as f64; cap])
}

#[derive(Clone, Copy)]
struct Cell {
    src: usize,
    dst: usize,
    flow: f64,
}

struct Simplex<'a> {
    rows: usize,
    cols: usize,
    cost: &'a [f64],
    cells: Vec<Cell>,
    /// Basic cells incident to each node (sources first, then sinks).
    adjacency: Vec<Vec<usize>>,
    potential: Vec<f64>,
    parent_cell: Vec<usize>,
    depth: Vec<usize>,
}

fn solve(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> Result<TransportPlan, PointCloudError> {
    let (rows, cols) = (a.len(), b.len());
    let mut cost = vec![0.0; rows * cols];
    for (i, x) in a.points().enumerate() {
        for (j, y) in b.points().enumerate() {
            cost[i * cols + j] = euclidean(x, y);
        }
    }
    let mut simplex = Simplex::north_west(a.weights(), b.weights(), &cost);
    simplex.run()?;

    let mut entries = BTreeMap::new();
    let mut total = 0.0;
    for c in &simplex.cells {
        if c.flow > 0.0 {
            *entries.entry((c.src, c.dst)).or_insert(0.0) += c.flow;
            total += c.flow * cost[c.src * cols + c.dst];
        }
    }
    Ok(TransportPlan {
        entries,
        cost: total,
    })
}

impl<'a> Simplex<'a> {
    fn north_west(supply: &[f64], demand: &[f64], cost: &'a [f64]) -> Self {
        let (rows, cols) = (supply.len(), demand.len());
        let mut ra = supply.to_vec();
        let mut rb = demand.to_vec();
        let mut cells = Vec::with_capacity(rows + cols - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let f = ra[i].min(rb[j]).max(0.0);
            ra[i] -= f;
            rb[j] -= f;
            cells.push(Cell {
                src: i,
                dst: j,
                flow: f,
            });
            if i + 1 == rows && j + 1 == cols {
                break;
            }
            if i + 1 == rows {
                j += 1;
            } else if j + 1 == cols || ra[i] <= rb[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        let nodes = rows + cols;
        let mut s = Self {
            rows,
            cols,
            cost,
            cells,
            adjacency: vec![Vec::new(); nodes],
            potential: vec![0.0; nodes],
            parent_cell: vec![usize::MAX; nodes],
            depth: vec![0; nodes],
        };
        for (k, c) in s.cells.iter().enumerate() {
            s.adjacency[c.src].push(k);
            s.adjacency[rows + c.dst].push(k);
        }
        s
    }

    fn cell_cost(&self, c: &Cell) -> f64 {
        self.cost[c.src * self.cols + c.dst]
    }

    /// Recomputes dual potentials (u on sources, v on sinks) and the rooted
    /// tree structure by a traversal from source 0.
    fn refresh_tree(&mut self) {
        let nodes = self.rows + self.cols;
        self.parent_cell.iter_mut().for_each(|p| *p = usize::MAX);
        let mut seen = vec![false; nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        self.potential[0] = 0.0;
        self.depth[0] = 0;
        while let Some(node) = stack.pop() {
            for &k in &self.adjacency[node] {
                let c = self.cells[k];
                let other = if node < self.rows {
                    self.rows + c.dst
                } else {
                    c.src
                };
                if seen[other] {
                    continue;
                }
                seen[other] = true;
                let cc = self.cell_cost(&c);
                self.potential[other] = cc - self.potential[node];
                self.parent_cell[other] = k;
                self.depth[other] = self.depth[node] + 1;
                stack.push(other);
            }
        }
    }

    fn parent_of(&self, node: usize) -> usize {
        let c = self.cells[self.parent_cell[node]];
        if node < self.rows {
            self.rows + c.dst
        } else {
            c.src
        }
    }

    fn run(&mut self) -> Result<(), PointCloudError> {
        let total = self.rows * self.cols;
        let block = ((total as f64).sqrt() as usize)
            .max(self.rows + self.cols)
            .min(total);
        let max_iter = 1000 + 50 * total.max(self.rows + self.cols);
        let mut cursor = 0usize;
        for _ in 0..max_iter {
            self.refresh_tree();
            let Some((src, dst)) = self.price(block, &mut cursor) else {
                return Ok(());
            };
            self.pivot(src, dst);
        }
        Err(PointCloudError::TransportDidNotConverge)
    }

    /// Block search: scans cells in blocks starting at `cursor` and returns
    /// the most violating cell of the first block that has one.
    fn price(&self, block: usize, cursor: &mut usize) -> Option<(usize, usize)> {
        let total = self.rows * self.cols;
        let mut best: Option<(usize, f64)> = None;
        let mut scanned = 0;
        let mut in_block = 0;
        while scanned < total {
            let idx = *cursor;
            *cursor = (*cursor + 1) % total;
            scanned += 1;
            in_block += 1;
            let (i, j) = (idx / self.cols, idx % self.cols);
            let r = self.cost[idx] - self.potential[i] - self.potential[self.rows + j];
            if r < -REDUCED_COST_TOL && best.is_none_or(|(_, b)| r < b) {
                best = Some((idx, r));
            }
            if in_block >= block {
                if best.is_some() {
                    break;
                }
                in_block = 0;
            }
        }
        best.map(|(idx, _)| (idx / self.cols, idx % self.cols))
    }

    fn pivot(&mut self, src: usize, dst: usize) {
        // Tree path from the sink back to the source closes the cycle.
        let mut up_w = Vec::new();
        let mut up_u = Vec::new();
        let (mut u, mut w) = (src, self.rows + dst);
        while self.depth[w] > self.depth[u] {
            up_w.push(self.parent_cell[w]);
            w = self.parent_of(w);
        }
        while self.depth[u] > self.depth[w] {
            up_u.push(self.parent_cell[u]);
            u = self.parent_of(u);
        }
        while u != w {
            up_w.push(self.parent_cell[w]);
            w = self.parent_of(w);
            up_u.push(self.parent_cell[u]);
            u = self.parent_of(u);
        }
        let cycle: Vec<usize> = up_w.into_iter().chain(up_u.into_iter().rev()).collect();

        // Even positions along the path lose mass, odd positions gain it.
        let mut leave = usize::MAX;
        let mut theta = f64::INFINITY;
        for (pos, &k) in cycle.iter().enumerate() {
            if pos % 2 == 0 && self.cells[k].flow < theta {
                theta = self.cells[k].flow;
                leave = k;
            }
        }
        let theta = theta.max(0.0);
        for (pos, &k) in cycle.iter().enumerate() {
            if pos % 2 == 0 {
                self.cells[k].flow = (self.cells[k].flow - theta).max(0.0);
            } else {
                self.cells[k].flow += theta;
            }
        }

        let old = self.cells[leave];
        self.adjacency[old.src].retain(|&k| k != leave);
        self.adjacency[self.rows + old.dst].retain(|&k| k != leave);
        self.cells[leave] = Cell {
            src,
            dst,
            flow: theta,
        };
        self.adjacency[src].push(leave);
        self.adjacency[self.rows + dst].push(leave);
    }
}
