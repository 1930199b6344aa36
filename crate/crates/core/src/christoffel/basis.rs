use serde::{Deserialize, Serialize};

use super::ChristoffelError;

/// Dimension `s(n, d) = C(n + d, d)` of the space of n-variate polynomials of
/// total degree at most `d`.
pub fn basis_size(n: usize, d: usize) -> Result<usize, ChristoffelError> {
    if n == 0 {
        return Err(ChristoffelError::ZeroDimension);
    }
    let k = n.min(d);
    let top = n
        .checked_add(d)
        .ok_or(ChristoffelError::Overflow { n, d })?;
    // C(top, k) built as a running product of exact binomials.
    let mut acc: usize = 1;
    for i in 1..=k {
        acc = acc
            .checked_mul(top - k + i)
            .ok_or(ChristoffelError::Overflow { n, d })?
            / i;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BasisFamily {
    Monomial,
    #[default]
    ChebyshevTensor,
}

impl std::str::FromStr for BasisFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "monomial" => Ok(Self::Monomial),
            "chebyshev" | "chebyshev-tensor" => Ok(Self::ChebyshevTensor),
            other => Err(format!("unknown basis family {other:?}")),
        }
    }
}

/// A basis of `ℝ[x]_d` indexed by exponent vectors in graded order (total
/// degree ascending, then lexicographically ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSpec {
    dim: usize,
    degree: usize,
    family: BasisFamily,
    multi_indices: Vec<Vec<u16>>,
}

impl BasisSpec {
    pub fn new(dim: usize, degree: usize, family: BasisFamily) -> Result<Self, ChristoffelError> {
        let size = basis_size(dim, degree)?;
        if degree > u16::MAX as usize {
            return Err(ChristoffelError::Overflow { n: dim, d: degree });
        }
        let mut multi_indices = Vec::with_capacity(size);
        let mut buf = vec![0u16; dim];
        for total in 0..=degree {
            push_compositions(&mut buf, 0, total as u16, &mut multi_indices);
        }
        debug_assert_eq!(multi_indices.len(), size);
        Ok(Self {
            dim,
            degree,
            family,
            multi_indices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn len(&self) -> usize {
        self.multi_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multi_indices.is_empty()
    }

    pub fn multi_indices(&self) -> &[Vec<u16>] {
        &self.multi_indices
    }

    /// `(b_α(x))_α` in basis order.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        let mut table = vec![0.0; self.dim * (self.degree + 1)];
        self.eval_into(x, &mut table, &mut out);
        out
    }

    /// Allocation-free evaluation. `table` needs `dim * (degree + 1)` slots.
    pub fn eval_into(&self, x: &[f64], table: &mut [f64], out: &mut [f64]) {
        let stride = self.degree + 1;
        for (i, &xi) in x.iter().enumerate().take(self.dim) {
            let row = &mut table[i * stride..(i + 1) * stride];
            univariate(self.family, xi, row);
        }
        for (o, alpha) in out.iter_mut().zip(&self.multi_indices) {
            let mut v = 1.0;
            for (i, &a) in alpha.iter().enumerate() {
                if a != 0 {
                    v *= table[i * stride + a as usize];
                }
            }
            *o = v;
        }
    }

    pub(crate) fn table_len(&self) -> usize {
        self.dim * (self.degree + 1)
    }
}

/// Appends all exponent vectors of `buf[pos..]` summing to `remaining`, in
/// ascending lexicographic order.
fn push_compositions(buf: &mut [u16], pos: usize, remaining: u16, out: &mut Vec<Vec<u16>>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(buf.to_vec());
        return;
    }
    for head in 0..=remaining {
        buf[pos] = head;
        push_compositions(buf, pos + 1, remaining - head, out);
    }
    buf[pos] = 0;
}

/// Values `p_0(x), ..., p_d(x)` of the univariate family.
fn univariate(family: BasisFamily, x: f64, row: &mut [f64]) {
    row[0] = 1.0;
    if row.len() == 1 {
        return;
    }
    row[1] = x;
    match family {
        BasisFamily::Monomial => {
            for k in 2..row.len() {
                row[k] = row[k - 1] * x;
            }
        }
        BasisFamily::ChebyshevTensor => {
            for k in 2..row.len() {
                row[k] = 2.0 * x * row[k - 1] - row[k - 2];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_size_examples() {
        for d in 0..20 {
            assert_eq!(basis_size(1, d).unwrap(), d + 1);
        }
        for n in 1..10 {
            assert_eq!(basis_size(n, 0).unwrap(), 1);
        }
        assert_eq!(basis_size(2, 10).unwrap(), 66);
        assert_eq!(basis_size(3, 6).unwrap(), 84);
        assert_eq!(basis_size(2, 12).unwrap(), 91);
    }

    #[test]
    fn basis_size_overflow() {
        assert!(matches!(
            basis_size(usize::MAX / 2, usize::MAX / 2),
            Err(ChristoffelError::Overflow { .. })
        ));
    }

    #[test]
    fn graded_lex_order() {
        let b = BasisSpec::new(2, 2, BasisFamily::Monomial).unwrap();
        let expected: Vec<Vec<u16>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 2],
            vec![1, 1],
            vec![2, 0],
        ];
        assert_eq!(b.multi_indices(), expected.as_slice());
    }

    #[test]
    fn univariate_examples() {
        let mono = BasisSpec::new(1, 2, BasisFamily::Monomial).unwrap();
        assert_eq!(mono.eval(&[0.5]), vec![1.0, 0.5, 0.25]);
        let cheb = BasisSpec::new(1, 2, BasisFamily::ChebyshevTensor).unwrap();
        assert_eq!(cheb.eval(&[0.5]), vec![1.0, 0.5, -0.5]);
        let b = BasisSpec::new(3, 3, BasisFamily::Monomial).unwrap();
        let at_zero = b.eval(&[0.0; 3]);
        assert_eq!(at_zero[0], 1.0);
        assert!(at_zero[1..].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn chebyshev_matches_cosine_form() {
        let b = BasisSpec::new(1, 12, BasisFamily::ChebyshevTensor).unwrap();
        for &x in &[-1.0, -0.7, -0.1, 0.0, 0.33, 0.9, 1.0] {
            let theta = f64::acos(x);
            for (k, v) in b.eval(&[x]).iter().enumerate() {
                assert!((v - (k as f64 * theta).cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tensor_products() {
        let b = BasisSpec::new(2, 3, BasisFamily::ChebyshevTensor).unwrap();
        let (x, y) = (0.3, -0.6);
        let t = |k: u16, z: f64| (k as f64 * f64::acos(z)).cos();
        for (v, a) in b.eval(&[x, y]).iter().zip(b.multi_indices()) {
            assert!((v - t(a[0], x) * t(a[1], y)).abs() < 1e-12);
        }
    }
}
