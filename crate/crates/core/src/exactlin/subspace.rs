use num_traits::Zero;

use super::matrix::Matrix;
use super::rational::{axpy, Rational};
use super::reduce::{nullspace, RowReducer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ambient dimension mismatch: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// A linear subspace of `Qⁿ`, held as its reduced row-echelon basis so that
/// equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        let mut red = RowReducer::new(ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector outside ambient space");
            red.push(v);
            if red.is_full() {
                break;
            }
        }
        Subspace {
            ambient,
            basis: red.rref_rows(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient).row_vecs(),
        }
    }

    /// The span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let vecs: Vec<_> = indices
            .into_iter()
            .map(|i| super::rational::unit_vec(ambient, i))
            .collect();
        Self::span(ambient, &vecs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.ambient);
        for v in &self.basis {
            red.push(v);
        }
        red
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        self.reducer().contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let red = self.reducer();
        other.basis.iter().all(|v| red.contains(v))
    }

    fn check(&self, other: &Subspace) -> Result<(), DimensionMismatch> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            })
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, DimensionMismatch> {
        self.check(other)?;
        let all: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::span(self.ambient, &all))
    }

    /// Solves `Σ xᵢ aᵢ = Σ yⱼ bⱼ` and maps the solutions back through the `a`s.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, DimensionMismatch> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|b| b.iter().map(|x| -x).collect()));
        let system = Matrix::from_cols(&cols, self.ambient);
        let vecs: Vec<_> = nullspace(&system)
            .into_iter()
            .map(|sol| {
                let mut v = vec![Rational::zero(); self.ambient];
                for (c, a) in sol.iter().zip(&self.basis) {
                    axpy(&mut v, c, a);
                }
                v
            })
            .collect();
        Ok(Subspace::span(self.ambient, &vecs))
    }
}
