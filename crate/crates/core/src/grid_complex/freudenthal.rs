use std::cmp::Ordering;
use std::collections::HashMap;

use super::GridError;

/// Default cap on the total number of stored simplices.
pub const DEFAULT_SIMPLEX_CAP: usize = 1 << 27;

const NO_SIMPLEX: u32 = u32::MAX;

/// Snap distance for fractional cell coordinates during point location.
const SNAP: f64 = 1e-12;

/// A Freudenthal (Kuhn) simplex is a base vertex `v` plus a strictly
/// increasing chain of coordinate masks `C1 ⊂ ... ⊂ Ck`; its vertices are
/// `v, v + e(C1), ..., v + e(Ck)`. Every simplex has exactly one such
/// description, which gives O(1) face lookup through per-dimension slot
/// tables indexed by `(base, chain)`.
#[derive(Debug, Clone)]
struct ChainTable {
    /// `chains[c]` lists the masks of chain `c`.
    chains: Vec<Vec<u32>>,
    /// Vertex offsets `0, off(C1), ..., off(Ck)` per chain.
    offsets: Vec<Vec<u32>>,
    /// Per chain and removed vertex: base shift and chain code of the facet.
    facets: Vec<Vec<(u32, u32)>>,
}

/// The Freudenthal triangulation `K_m` of `[-1, 1]^n` on the lattice
/// `(2/m)·ℤ^n`, possibly truncated to its `top_dim`-skeleton.
#[derive(Debug, Clone)]
pub struct FreudenthalComplex {
    dim: usize,
    resolution: usize,
    vertex_count: usize,
    strides: Vec<u32>,
    tables: Vec<ChainTable>,
    /// `slots[k][base * chains + code]` → simplex id, for `k ≥ 1`.
    slots: Vec<Vec<u32>>,
    bases: Vec<Vec<u32>>,
    codes: Vec<Vec<u32>>,
}

/// The minimal simplex containing a point, with barycentric coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub dim: usize,
    pub id: usize,
    pub vertices: Vec<usize>,
    pub weights: Vec<f64>,
}

/// Builds the full triangulation of `[-1, 1]^n` with `m` cells per axis.
pub fn build_freudenthal(n: usize, m: usize) -> Result<FreudenthalComplex, GridError> {
    FreudenthalComplex::skeleton(n, m, n, DEFAULT_SIMPLEX_CAP)
}

impl FreudenthalComplex {
    /// Builds all simplices of dimension at most `top_dim`, refusing once the
    /// count would exceed `cap`.
    pub fn skeleton(n: usize, m: usize, top_dim: usize, cap: usize) -> Result<Self, GridError> {
        if n == 0 {
            return Err(GridError::ZeroDimension);
        }
        if m == 0 {
            return Err(GridError::ZeroResolution);
        }
        if n > 16 {
            return Err(GridError::ResourceLimit {
                requested: usize::MAX,
                cap,
            });
        }
        let top_dim = top_dim.min(n);
        let side = m + 1;
        let vertex_count = checked_pow(side, n).filter(|v| *v < NO_SIMPLEX as usize);
        let Some(vertex_count) = vertex_count else {
            return Err(GridError::ResourceLimit {
                requested: usize::MAX,
                cap,
            });
        };
        let strides: Vec<u32> = (0..n).map(|i| side.pow(i as u32) as u32).collect();
        let tables = chain_tables(n, top_dim, &strides);

        let mut requested = vertex_count;
        for table in &tables[1..] {
            for chain in &table.chains {
                let u = chain.last().unwrap().count_ones() as usize;
                let count = checked_pow(m, u)
                    .and_then(|a| checked_pow(side, n - u).and_then(|b| a.checked_mul(b)));
                requested = count
                    .and_then(|c| requested.checked_add(c))
                    .unwrap_or(usize::MAX);
            }
        }
        if requested > cap {
            return Err(GridError::ResourceLimit { requested, cap });
        }

        let mut slots = vec![Vec::new()];
        let mut bases = vec![(0..vertex_count as u32).collect::<Vec<_>>()];
        let mut codes = vec![vec![0u32; vertex_count]];
        let mut coord = vec![0usize; n];
        for table in &tables[1..] {
            let nch = table.chains.len();
            let mut slot = vec![NO_SIMPLEX; vertex_count * nch];
            let mut base_k = Vec::new();
            let mut code_k = Vec::new();
            coord.iter_mut().for_each(|c| *c = 0);
            for v in 0..vertex_count {
                // Mask of axes along which v can step forward.
                let room = coord
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c < m)
                    .fold(0u32, |acc, (i, _)| acc | 1 << i);
                for (c, chain) in table.chains.iter().enumerate() {
                    if chain.last().unwrap() & !room == 0 {
                        slot[v * nch + c] = base_k.len() as u32;
                        base_k.push(v as u32);
                        code_k.push(c as u32);
                    }
                }
                advance(&mut coord, side);
            }
            slots.push(slot);
            bases.push(base_k);
            codes.push(code_k);
        }
        Ok(Self {
            dim: n,
            resolution: m,
            vertex_count,
            strides,
            tables,
            slots,
            bases,
            codes,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Highest simplex dimension stored.
    pub fn top_dim(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of `k`-simplices (0 above the stored skeleton).
    pub fn count(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    pub fn total_count(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    /// `Σ_k (−1)^k · #k-simplices`.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.top_dim())
            .map(|k| if k % 2 == 0 { 1 } else { -1 } * self.count(k) as i64)
            .sum()
    }

    /// Lattice coordinates of a vertex, coordinate 0 varying fastest.
    pub fn vertex_lattice(&self, v: usize) -> Vec<usize> {
        let side = self.resolution + 1;
        let mut rest = v;
        (0..self.dim)
            .map(|_| {
                let c = rest % side;
                rest /= side;
                c
            })
            .collect()
    }

    pub fn vertex_coords(&self, v: usize) -> Vec<f64> {
        let m = self.resolution as f64;
        self.vertex_lattice(v)
            .into_iter()
            .map(|c| lattice_coord(c, m))
            .collect()
    }

    /// All vertex coordinates, row-major in vertex order.
    pub fn vertex_coords_flat(&self) -> Vec<f64> {
        let side = self.resolution + 1;
        let m = self.resolution as f64;
        let axis: Vec<f64> = (0..side).map(|c| lattice_coord(c, m)).collect();
        let mut out = Vec::with_capacity(self.vertex_count * self.dim);
        let mut coord = vec![0usize; self.dim];
        for _ in 0..self.vertex_count {
            out.extend(coord.iter().map(|c| axis[*c]));
            advance(&mut coord, side);
        }
        out
    }

    /// Writes the ascending vertex tuple of simplex `(k, id)` into `out`.
    pub fn vertices_into(&self, k: usize, id: usize, out: &mut Vec<usize>) {
        out.clear();
        let base = self.bases[k][id] as usize;
        let offsets = &self.tables[k].offsets[self.codes[k][id] as usize];
        out.extend(offsets.iter().map(|o| base + *o as usize));
    }

    pub fn simplex(&self, k: usize, id: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(k + 1);
        self.vertices_into(k, id, &mut out);
        out
    }

    /// Calls `f(j)` with the id of each facet of `(k, id)`, the `j`-th
    /// vertex removed in turn.
    pub fn for_each_facet(&self, k: usize, id: usize, mut f: impl FnMut(usize)) {
        if k == 0 {
            return;
        }
        let base = self.bases[k][id];
        let facets = &self.tables[k].facets[self.codes[k][id] as usize];
        if k == 1 {
            for &(shift, _) in facets {
                f((base + shift) as usize);
            }
            return;
        }
        let nch = self.tables[k - 1].chains.len();
        let slot = &self.slots[k - 1];
        for &(shift, code) in facets {
            let fid = slot[(base + shift) as usize * nch + code as usize];
            debug_assert_ne!(fid, NO_SIMPLEX);
            f(fid as usize);
        }
    }

    pub fn facets(&self, k: usize, id: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(k + 1);
        self.for_each_facet(k, id, |f| out.push(f));
        out
    }

    /// Lexicographic comparison of the vertex tuples of two `k`-simplices.
    pub fn cmp_lex(&self, k: usize, a: usize, b: usize) -> Ordering {
        let (ba, bb) = (self.bases[k][a], self.bases[k][b]);
        if ba != bb || k == 0 {
            return ba.cmp(&bb);
        }
        let oa = &self.tables[k].offsets[self.codes[k][a] as usize];
        let ob = &self.tables[k].offsets[self.codes[k][b] as usize];
        oa.cmp(ob)
    }

    /// Id of the simplex with base vertex `base` and chain `masks`.
    fn lookup(&self, base: usize, masks: &[u32]) -> Option<usize> {
        let k = masks.len();
        if k == 0 {
            return Some(base);
        }
        let table = self.tables.get(k)?;
        let code = table.chains.iter().position(|c| c == masks)?;
        let id = self.slots[k][base * table.chains.len() + code];
        (id != NO_SIMPLEX).then_some(id as usize)
    }

    /// Finds the unique simplex of minimal dimension containing `x`, with
    /// barycentric coordinates `x = Σ α_i v_i`.
    pub fn locate(&self, x: &[f64]) -> Result<Location, GridError> {
        if x.len() != self.dim {
            return Err(GridError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if let Some(&bad) = x.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
            return Err(GridError::OutOfDomain(bad));
        }
        let m = self.resolution;
        let mut base = 0usize;
        let mut frac: Vec<(f64, usize)> = Vec::with_capacity(self.dim);
        for (i, &xi) in x.iter().enumerate() {
            let scaled = (xi + 1.0) * m as f64 / 2.0;
            let mut cell = (scaled.floor() as usize).min(m - 1);
            let mut f = scaled - cell as f64;
            if f < SNAP {
                f = 0.0;
            } else if f > 1.0 - SNAP {
                // Snap up to the next lattice plane, staying in the last cell.
                if cell + 1 < m {
                    cell += 1;
                    f = 0.0;
                } else {
                    f = 1.0;
                }
            }
            base += cell * self.strides[i] as usize;
            frac.push((f, i));
        }
        // Descending fractions; ties by axis so the result is deterministic.
        frac.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let n = self.dim;
        let mut alphas = Vec::with_capacity(n + 1);
        alphas.push(1.0 - frac[0].0);
        for j in 1..n {
            alphas.push(frac[j - 1].0 - frac[j].0);
        }
        alphas.push(frac[n - 1].0);

        // Vertex j of the Kuhn simplex is base + e(π_1..π_j). Keep those
        // with positive weight and rewrite them as (base', chain).
        let mut mask = 0u32;
        let mut kept: Vec<(u32, f64)> = Vec::new();
        for (j, &a) in alphas.iter().enumerate() {
            if j > 0 {
                mask |= 1 << frac[j - 1].1;
            }
            if a > 0.0 {
                kept.push((mask, a));
            }
        }
        let first = kept[0].0;
        let vbase = base + self.offset(first) as usize;
        let chain: Vec<u32> = kept[1..].iter().map(|(mk, _)| mk & !first).collect();
        let k = chain.len();
        let id = self
            .lookup(vbase, &chain)
            .ok_or(GridError::SkeletonTooSmall { needed: k })?;
        let vertices = self.simplex(k, id);
        let total: f64 = kept.iter().map(|(_, a)| a).sum();
        Ok(Location {
            dim: k,
            id,
            vertices,
            weights: kept.iter().map(|(_, a)| a / total).collect(),
        })
    }

    fn offset(&self, mask: u32) -> u32 {
        offset_of(mask, &self.strides)
    }
}

fn lattice_coord(c: usize, m: f64) -> f64 {
    (2.0 * c as f64 - m) / m
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

fn advance(coord: &mut [usize], side: usize) {
    for c in coord.iter_mut() {
        *c += 1;
        if *c < side {
            return;
        }
        *c = 0;
    }
}

fn offset_of(mask: u32, strides: &[u32]) -> u32 {
    strides
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, s)| s)
        .sum()
}

/// Chains of nonempty, strictly increasing masks in `2^[n]`, by length.
fn chain_tables(n: usize, top_dim: usize, strides: &[u32]) -> Vec<ChainTable> {
    let full = (1u32 << n) - 1;
    let mut by_len: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
    for k in 1..=top_dim {
        let mut next = Vec::new();
        for chain in &by_len[k - 1] {
            let last = chain.last().copied().unwrap_or(0);
            for mask in 1..=full {
                if mask & last == last && mask != last {
                    let mut c = chain.clone();
                    c.push(mask);
                    next.push(c);
                }
            }
        }
        by_len.push(next);
    }
    let index: Vec<HashMap<&[u32], u32>> = by_len
        .iter()
        .map(|chains| {
            chains
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_slice(), i as u32))
                .collect()
        })
        .collect();
    by_len
        .iter()
        .enumerate()
        .map(|(k, chains)| {
            let offsets = chains
                .iter()
                .map(|c| {
                    std::iter::once(0)
                        .chain(c.iter().map(|m| offset_of(*m, strides)))
                        .collect()
                })
                .collect();
            let facets = chains
                .iter()
                .map(|c| {
                    if k == 0 {
                        return Vec::new();
                    }
                    (0..=k)
                        .map(|j| {
                            if j == 0 {
                                // Drop the base: the next vertex becomes the base.
                                let head = c[0];
                                let rest: Vec<u32> = c[1..].iter().map(|m| m & !head).collect();
                                (offset_of(head, strides), index[k - 1][rest.as_slice()])
                            } else {
                                let mut rest = c.clone();
                                rest.remove(j - 1);
                                (0, index[k - 1][rest.as_slice()])
                            }
                        })
                        .collect()
                })
                .collect();
            ChainTable {
                chains: chains.clone(),
                offsets,
                facets,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let c = build_freudenthal(2, 3).unwrap();
        assert_eq!((c.count(0), c.count(1), c.count(2)), (16, 33, 18));
        let c = build_freudenthal(1, 4).unwrap();
        assert_eq!((c.count(0), c.count(1)), (5, 4));
        let c = build_freudenthal(3, 2).unwrap();
        assert_eq!((c.count(0), c.count(3)), (27, 48));
    }

    #[test]
    fn tuples_are_sorted_and_facets_are_faces() {
        let c = build_freudenthal(3, 2).unwrap();
        for k in 1..=3 {
            for id in 0..c.count(k) {
                let s = c.simplex(k, id);
                assert!(s.windows(2).all(|w| w[0] < w[1]));
                for (j, f) in c.facets(k, id).into_iter().enumerate() {
                    let mut want = s.clone();
                    want.remove(j);
                    assert_eq!(c.simplex(k - 1, f), want);
                }
            }
        }
    }

    #[test]
    fn locate_vertex_and_diagonal() {
        let c = build_freudenthal(2, 1).unwrap();
        let at = c.locate(&[1.0, -1.0]).unwrap();
        assert_eq!(
            (at.dim, at.vertices.clone(), at.weights.clone()),
            (0, vec![1], vec![1.0])
        );
        let mid = c.locate(&[0.0, 0.0]).unwrap();
        assert_eq!(mid.dim, 1);
        assert_eq!(mid.vertices, vec![0, 3]);
        assert_eq!(mid.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn locate_rejects_outside_points() {
        let c = build_freudenthal(2, 4).unwrap();
        assert!(matches!(
            c.locate(&[1.5, 0.0]),
            Err(GridError::OutOfDomain(_))
        ));
        assert!(matches!(
            c.locate(&[0.0]),
            Err(GridError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn resource_cap_is_enforced() {
        assert!(matches!(
            FreudenthalComplex::skeleton(3, 50, 3, 1000),
            Err(GridError::ResourceLimit { .. })
        ));
        assert!(matches!(
            build_freudenthal(0, 3),
            Err(GridError::ZeroDimension)
        ));
        assert!(matches!(
            build_freudenthal(2, 0),
            Err(GridError::ZeroResolution)
        ));
    }

    #[test]
    fn skeleton_omits_higher_simplices() {
        let c = FreudenthalComplex::skeleton(3, 3, 1, DEFAULT_SIMPLEX_CAP).unwrap();
        assert_eq!(c.top_dim(), 1);
        assert_eq!(c.count(2), 0);
        assert_eq!(c.count(1), build_freudenthal(3, 3).unwrap().count(1));
    }
}
