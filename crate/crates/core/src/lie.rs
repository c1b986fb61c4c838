//! Structure constants of a finite-dimensional Lie algebra in a fixed basis.

use num_traits::Zero;

use crate::exactlin::{axpy, zero_vec, Matrix, Rational};

/// Sparse table `[e_a, e_b] = Σ_c c(a,b)_c e_c`.
///
/// The table stores whatever it is given; antisymmetry and the Jacobi
/// identity are properties to be checked, not assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    entries: Vec<Vec<(usize, Rational)>>,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants {
            dim,
            entries: vec![Vec::new(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `[e_a, e_b]` only; the caller decides about `[e_b, e_a]`.
    pub fn set(&mut self, a: usize, b: usize, value: &[Rational]) {
        assert_eq!(value.len(), self.dim);
        self.entries[a * self.dim + b] = value
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
    }

    /// Sets `[e_a, e_b] = value` and `[e_b, e_a] = -value`.
    pub fn set_antisymmetric(&mut self, a: usize, b: usize, value: &[Rational]) {
        self.set(a, b, value);
        let neg: Vec<Rational> = value.iter().map(|x| -x).collect();
        self.set(b, a, &neg);
    }

    pub fn is_set(&self, a: usize, b: usize) -> bool {
        !self.entries[a * self.dim + b].is_empty()
    }

    /// Nonzero coefficients of `[e_a, e_b]`.
    pub fn sparse(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.entries[a * self.dim + b]
    }

    pub fn basis_bracket(&self, a: usize, b: usize) -> Vec<Rational> {
        let mut v = zero_vec(self.dim);
        for (c, x) in self.sparse(a, b) {
            v[*c] = x.clone();
        }
        v
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vec(self.dim);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let entries = self.sparse(a, b);
                if entries.is_empty() {
                    continue;
                }
                let c = xa * yb;
                for (k, v) in entries {
                    out[*k] += &c * v;
                }
            }
        }
        out
    }

    /// `[e_a, y]`
    pub fn bracket_basis_vec(&self, a: usize, y: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vec(self.dim);
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            for (k, v) in self.sparse(a, b) {
                out[*k] += yb * v;
            }
        }
        out
    }

    /// Matrix of `ad(x)`: column `b` holds `[x, e_b]`.
    pub fn ad(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for b in 0..self.dim {
                for (c, v) in self.sparse(a, b) {
                    m[(*c, b)] += xa * v;
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, a: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for b in 0..self.dim {
            for (c, v) in self.sparse(a, b) {
                m[(*c, b)] = v.clone();
            }
        }
        m
    }

    /// Basis pairs `(a, b)` with `[e_a, e_b] ≠ -[e_b, e_a]`.
    pub fn antisymmetry_failures(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in a..self.dim {
                let ab = self.basis_bracket(a, b);
                let ba = self.basis_bracket(b, a);
                if ab.iter().zip(&ba).any(|(x, y)| !(x + y).is_zero()) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Jacobiator `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]` of basis elements.
    pub fn jacobiator(&self, a: usize, b: usize, c: usize) -> Vec<Rational> {
        let mut out = zero_vec(self.dim);
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            for (k, v) in self.sparse(y, z) {
                for (m, w) in self.sparse(x, *k) {
                    out[*m] += v * w;
                }
            }
        }
        out
    }

    /// Basis triples `a < b < c` on which the Jacobi identity fails. Assumes
    /// antisymmetry, so only strictly increasing triples are examined.
    pub fn jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                for c in b + 1..self.dim {
                    if self.jacobiator(a, b, c).iter().any(|x| !x.is_zero()) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Exhaustive Jacobi check over every ordered basis triple.
    pub fn jacobi_holds_all_triples(&self) -> bool {
        (0..self.dim).all(|a| {
            (0..self.dim).all(|b| (0..self.dim).all(|c| self.jacobiator(a, b, c).iter().all(Zero::is_zero)))
        })
    }

    /// Span of all brackets `[e_a, e_b]`, as vectors.
    pub fn derived_spanning_set(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                if self.is_set(a, b) {
                    out.push(self.basis_bracket(a, b));
                }
            }
        }
        out
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &StructureConstants) -> StructureConstants {
        let n = self.dim + other.dim;
        let mut t = StructureConstants::zero(n);
        for a in 0..self.dim {
            for b in 0..self.dim {
                t.entries[a * n + b] = self.sparse(a, b).to_vec();
            }
        }
        let off = self.dim;
        for a in 0..other.dim {
            for b in 0..other.dim {
                t.entries[(a + off) * n + b + off] = other
                    .sparse(a, b)
                    .iter()
                    .map(|(c, v)| (c + off, v.clone()))
                    .collect();
            }
        }
        t
    }

    /// `Σ coeffs[i] · vectors[i]`
    pub fn combine(dim: usize, coeffs: &[Rational], vectors: &[Vec<Rational>]) -> Vec<Rational> {
        let mut v = zero_vec(dim);
        for (c, x) in coeffs.iter().zip(vectors) {
            axpy(&mut v, c, x);
        }
        v
    }
}

/// A Lie algebra with a basis of homogeneous elements for a `Z`-grading and
/// a distinguished grading element `H` with `ad(H) = -k` on degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    pub table: StructureConstants,
    /// Degree of each basis vector, nondecreasing.
    pub degrees: Vec<i32>,
    /// Coordinates of the grading element.
    pub h: Vec<Rational>,
}

impl GradedLieAlgebra {
    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn min_degree(&self) -> i32 {
        self.degrees.first().copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i32 {
        self.degrees.last().copied().unwrap_or(0)
    }

    /// Basis indices of degree `d`.
    pub fn piece(&self, d: i32) -> std::ops::Range<usize> {
        let start = self.degrees.partition_point(|&x| x < d);
        let end = self.degrees.partition_point(|&x| x <= d);
        start..end
    }

    pub fn piece_dims(&self) -> std::collections::BTreeMap<i32, usize> {
        let mut m = std::collections::BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// Degree-`d` component of `v`, as an ambient vector.
    pub fn project(&self, v: &[Rational], d: i32) -> Vec<Rational> {
        let r = self.piece(d);
        let mut out = zero_vec(self.dim());
        out[r.clone()].clone_from_slice(&v[r]);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, ints, unit_vec};

    fn sl2() -> StructureConstants {
        // e, h, f with [h,e]=2e, [h,f]=-2f, [e,f]=h
        let mut t = StructureConstants::zero(3);
        t.set_antisymmetric(1, 0, &ints(&[2, 0, 0]));
        t.set_antisymmetric(1, 2, &ints(&[0, 0, -2]));
        t.set_antisymmetric(0, 2, &ints(&[0, 1, 0]));
        t
    }

    #[test]
    fn sl2_is_a_lie_algebra() {
        let t = sl2();
        assert!(t.antisymmetry_failures().is_empty());
        assert!(t.jacobi_failures().is_empty());
        assert!(t.jacobi_holds_all_triples());
        assert_eq!(t.bracket(&unit_vec(3, 0), &unit_vec(3, 2)), unit_vec(3, 1));
    }

    #[test]
    fn ad_matrix_columns() {
        let t = sl2();
        let ad_h = t.ad(&unit_vec(3, 1));
        assert_eq!(ad_h, Matrix::diagonal(&[int(2), int(0), int(-2)]));
        assert_eq!(ad_h, t.ad_basis(1));
    }

    #[test]
    fn broken_jacobi_is_reported() {
        let mut t = StructureConstants::zero(3);
        t.set_antisymmetric(0, 1, &ints(&[0, 0, 1]));
        t.set_antisymmetric(0, 2, &ints(&[1, 0, 0]));
        assert_eq!(t.jacobi_failures(), vec![(0, 1, 2)]);
    }

    #[test]
    fn one_sided_entry_breaks_antisymmetry() {
        let mut t = StructureConstants::zero(2);
        t.set(0, 1, &ints(&[1, 0]));
        assert_eq!(t.antisymmetry_failures(), vec![(0, 1)]);
    }
}
