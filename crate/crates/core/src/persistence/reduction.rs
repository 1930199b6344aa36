use super::PersistenceError;
use crate::grid_complex::Filtration;

const NONE: u32 = u32::MAX;

/// Boundary matrix over ℤ/2 of a filtered complex, columns in filtration
/// order. Column `j` lists the positions of the facets of simplex `j`,
/// ascending, all smaller than `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatrix {
    dims: Vec<u8>,
    values: Vec<f64>,
    offsets: Vec<usize>,
    rows: Vec<u32>,
}

/// Result of a reduction: persistence pairs `(birth, death)` and unpaired
/// positive columns, all as column indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub essential: Vec<usize>,
}

impl BoundaryMatrix {
    /// Checks and stores an explicit filtered complex.
    pub fn new(
        dims: Vec<u8>,
        values: Vec<f64>,
        columns: Vec<Vec<usize>>,
    ) -> Result<Self, PersistenceError> {
        let n = dims.len();
        if values.len() != n || columns.len() != n || n >= NONE as usize {
            return Err(PersistenceError::InvalidFiltration(format!(
                "{} dims, {} values, {} columns",
                n,
                values.len(),
                columns.len()
            )));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut rows = Vec::new();
        offsets.push(0);
        for (j, mut col) in columns.into_iter().enumerate() {
            col.sort_unstable();
            col.dedup();
            let expected = if dims[j] == 0 {
                0
            } else {
                dims[j] as usize + 1
            };
            if col.len() != expected {
                return Err(PersistenceError::InvalidFiltration(format!(
                    "column {j} of dimension {} has {} facets",
                    dims[j],
                    col.len()
                )));
            }
            for &r in &col {
                if r >= j {
                    return Err(PersistenceError::InvalidFiltration(format!(
                        "face {r} follows coface {j}"
                    )));
                }
                if dims[r] + 1 != dims[j] || values[r] > values[j] {
                    return Err(PersistenceError::InvalidFiltration(format!(
                        "face {r} of column {j} has wrong dimension or larger value"
                    )));
                }
                rows.push(r as u32);
            }
            offsets.push(rows.len());
        }
        Ok(Self {
            dims,
            values,
            offsets,
            rows,
        })
    }

    /// Boundary matrix of all simplices of dimension at most `top_dim`.
    pub fn from_filtration(filtration: &Filtration<'_>, top_dim: usize) -> Self {
        let complex = filtration.complex();
        let top_dim = top_dim.min(complex.top_dim());
        // Position of each kept simplex among kept simplices.
        let mut index: Vec<Vec<u32>> = (0..=top_dim)
            .map(|k| vec![NONE; complex.count(k)])
            .collect();
        let mut dims = Vec::new();
        let mut values = Vec::new();
        for &(k, id) in filtration.order() {
            if (k as usize) <= top_dim {
                index[k as usize][id as usize] = dims.len() as u32;
                dims.push(k);
                values.push(filtration.value(k as usize, id as usize));
            }
        }
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        let mut rows = Vec::new();
        offsets.push(0);
        for &(k, id) in filtration.order() {
            let k = k as usize;
            if k > top_dim {
                continue;
            }
            if k > 0 {
                let start = rows.len();
                complex.for_each_facet(k, id as usize, |f| rows.push(index[k - 1][f]));
                rows[start..].sort_unstable();
            }
            offsets.push(rows.len());
        }
        Self {
            dims,
            values,
            offsets,
            rows,
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, j: usize) -> usize {
        self.dims[j] as usize
    }

    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.rows[self.offsets[j]..self.offsets[j + 1]]
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0) as usize
    }

    /// Column reduction with clearing: dimensions are processed from the top
    /// down, and every pivot row found in dimension `k + 1` marks a
    /// dimension-`k` column that would reduce to zero, so it is skipped.
    /// Edge columns are paired by union-find.
    pub fn reduce(&self) -> Pairing {
        let n = self.len();
        let top = self.max_dim();
        let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
        for j in 0..n {
            by_dim[self.dims[j] as usize].push(j as u32);
        }
        let mut owner = vec![NONE; n];
        let mut store: Vec<Vec<u32>> = Vec::new();
        let mut cleared = vec![false; n];
        let mut pairs = Vec::new();
        let mut work = Vec::new();
        let mut scratch = Vec::new();
        for k in (2..=top).rev() {
            for &j in &by_dim[k] {
                let j = j as usize;
                if cleared[j] {
                    continue;
                }
                work.clear();
                work.extend_from_slice(self.column(j));
                while let Some(&low) = work.last() {
                    let o = owner[low as usize];
                    if o == NONE {
                        break;
                    }
                    symmetric_difference(&work, &store[o as usize], &mut scratch);
                    std::mem::swap(&mut work, &mut scratch);
                }
                if let Some(&low) = work.last() {
                    owner[low as usize] = store.len() as u32;
                    store.push(work.clone());
                    cleared[low as usize] = true;
                    pairs.push((low as usize, j));
                }
            }
        }
        if top >= 1 {
            self.pair_edges(&by_dim[1], &cleared, &mut owner, &mut pairs);
        }
        self.finish(pairs, &owner)
    }

    /// Degree-0 pairing by union-find. An edge joining two components pairs
    /// with the younger of their oldest vertices, which is exactly the pivot
    /// its reduced column would have.
    fn pair_edges(
        &self,
        edges: &[u32],
        cleared: &[bool],
        owner: &mut [u32],
        pairs: &mut Vec<(usize, usize)>,
    ) {
        let n = self.len();
        // parent[v] for vertices; a root is the oldest vertex of its component.
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut v: u32) -> u32 {
            while parent[v as usize] != v {
                let up = parent[parent[v as usize] as usize];
                parent[v as usize] = up;
                v = up;
            }
            v
        }
        for &j in edges {
            if cleared[j as usize] {
                continue;
            }
            let col = self.column(j as usize);
            let (a, b) = (find(&mut parent, col[0]), find(&mut parent, col[1]));
            if a == b {
                continue;
            }
            let (old, young) = if a < b { (a, b) } else { (b, a) };
            parent[young as usize] = old;
            owner[young as usize] = j;
            pairs.push((young as usize, j as usize));
        }
    }

    /// Plain left-to-right reduction without clearing; the reference oracle.
    pub fn reduce_naive(&self) -> Pairing {
        let n = self.len();
        let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(n);
        let mut owner = vec![NONE; n];
        let mut pairs = Vec::new();
        let mut scratch = Vec::new();
        for j in 0..n {
            let mut col = self.column(j).to_vec();
            while let Some(&low) = col.last() {
                let o = owner[low as usize];
                if o == NONE {
                    break;
                }
                symmetric_difference(&col, &reduced[o as usize], &mut scratch);
                std::mem::swap(&mut col, &mut scratch);
            }
            if let Some(&low) = col.last() {
                owner[low as usize] = j as u32;
                pairs.push((low as usize, j));
            }
            reduced.push(col);
        }
        self.finish(pairs, &owner)
    }

    fn finish(&self, mut pairs: Vec<(usize, usize)>, owner: &[u32]) -> Pairing {
        let mut is_death = vec![false; self.len()];
        for &(_, d) in &pairs {
            is_death[d] = true;
        }
        let essential = (0..self.len())
            .filter(|&j| owner[j] == NONE && !is_death[j])
            .collect();
        pairs.sort_unstable();
        Pairing { pairs, essential }
    }
}

/// `out ← a Δ b` for ascending index lists.
fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut k) = (0, 0);
    while i < a.len() && k < b.len() {
        match a[i].cmp(&b[k]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[k]);
                k += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                k += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[k..]);
}
