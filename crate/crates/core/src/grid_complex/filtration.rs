use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;

use super::{FreudenthalComplex, GridError};

/// Lower-star filtration of a Freudenthal complex: each simplex enters at the
/// maximum of its vertex values. Simplices are totally ordered by
/// `(value, dimension, vertex tuple)`, so faces always precede cofaces.
#[derive(Debug, Clone)]
pub struct Filtration<'c> {
    complex: &'c FreudenthalComplex,
    values: Vec<Vec<f64>>,
    order: Vec<(u8, u32)>,
    position: Vec<Vec<u32>>,
}

/// Builds the lower-star filtration of one value per vertex.
pub fn lower_star<'c>(
    complex: &'c FreudenthalComplex,
    vertex_values: &[f64],
) -> Result<Filtration<'c>, GridError> {
    if vertex_values.len() != complex.vertex_count() {
        return Err(GridError::ValueCount {
            expected: complex.vertex_count(),
            found: vertex_values.len(),
        });
    }
    if let Some(index) = vertex_values.iter().position(|v| !v.is_finite()) {
        return Err(GridError::NonFiniteValue { index });
    }
    let top = complex.top_dim();
    let mut values = vec![vertex_values.to_vec()];
    for k in 1..=top {
        let vals: Vec<f64> = (0..complex.count(k))
            .into_par_iter()
            .map_init(Vec::new, |buf, id| {
                complex.vertices_into(k, id, buf);
                buf.iter()
                    .map(|v| vertex_values[*v])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        values.push(vals);
    }
    let mut order: Vec<(u8, u32)> = (0..=top)
        .flat_map(|k| (0..complex.count(k) as u32).map(move |id| (k as u8, id)))
        .collect();
    order.par_sort_unstable_by(|a, b| {
        values[a.0 as usize][a.1 as usize]
            .total_cmp(&values[b.0 as usize][b.1 as usize])
            .then(a.0.cmp(&b.0))
            .then_with(|| complex.cmp_lex(a.0 as usize, a.1 as usize, b.1 as usize))
    });
    let mut position: Vec<Vec<u32>> = (0..=top).map(|k| vec![0; complex.count(k)]).collect();
    for (pos, &(k, id)) in order.iter().enumerate() {
        position[k as usize][id as usize] = pos as u32;
    }
    Ok(Filtration {
        complex,
        values,
        order,
        position,
    })
}

impl<'c> Filtration<'c> {
    pub fn complex(&self) -> &'c FreudenthalComplex {
        self.complex
    }

    pub fn vertex_values(&self) -> &[f64] {
        &self.values[0]
    }

    pub fn value(&self, k: usize, id: usize) -> f64 {
        self.values[k][id]
    }

    /// `(dimension, id)` of each simplex in filtration order.
    pub fn order(&self) -> &[(u8, u32)] {
        &self.order
    }

    pub fn position(&self, k: usize, id: usize) -> usize {
        self.position[k][id] as usize
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Barycentric interpolation `Σ α_i f(v_i)` of the vertex values.
    pub fn interpolate(&self, x: &[f64]) -> Result<f64, GridError> {
        let loc = self.complex.locate(x)?;
        Ok(loc
            .vertices
            .iter()
            .zip(&loc.weights)
            .map(|(v, a)| a * self.values[0][*v])
            .sum())
    }

    /// Writes one `dim,value,v0,...,vk` line per simplex in filtration order.
    pub fn export_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut buf = Vec::new();
        for &(k, id) in &self.order {
            let (k, id) = (k as usize, id as usize);
            self.complex.vertices_into(k, id, &mut buf);
            write!(out, "{k},{}", self.values[k][id])?;
            for v in &buf {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    }

    /// Sublevel complex Euler characteristic `Σ_k (−1)^k #{σ : f(σ) ≤ t}`.
    pub fn euler_characteristic_at(&self, t: f64) -> i64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, vals)| {
                let c = vals
                    .iter()
                    .filter(|v| v.total_cmp(&t) != Ordering::Greater)
                    .count() as i64;
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }
}

/// Barycentric interpolation of the vertex values of `filtration` at `x`.
pub fn pl_interpolate(filtration: &Filtration<'_>, x: &[f64]) -> Result<f64, GridError> {
    filtration.interpolate(x)
}
