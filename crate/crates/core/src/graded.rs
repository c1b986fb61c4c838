//! Degree-homogeneous linear maps out of a stratified algebra.

use num_traits::Zero;

use crate::algebra::StratifiedAlgebra;
use crate::exactlin::{Matrix, Rational};

/// A linear map of degree `k` on `g = ⊕ g₋ₚ`.
///
/// `blocks[p - 1]` is the matrix of the restriction to `g₋ₚ`, with values in
/// the piece of degree `k - p`. For `k = 0` that piece is `g₋ₚ` itself; for
/// prolongation elements it may be a nonnegative layer of the prolongation,
/// in whose basis the rows are expressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    degree: i32,
    blocks: Vec<Matrix>,
}

impl GradedMap {
    pub fn new(degree: i32, blocks: Vec<Matrix>) -> Self {
        GradedMap { degree, blocks }
    }

    pub fn block_scalar(alg: &StratifiedAlgebra, scalars: &[Rational]) -> Self {
        assert_eq!(scalars.len(), alg.step());
        let blocks = alg
            .layer_dims()
            .iter()
            .zip(scalars)
            .map(|(&d, c)| Matrix::identity(d).scale(c))
            .collect();
        GradedMap { degree: 0, blocks }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// Restriction to `g₋ₚ`.
    pub fn block(&self, p: usize) -> &Matrix {
        &self.blocks[p - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// All block entries, concatenated; linear in the map.
    pub fn flatten(&self) -> Vec<Rational> {
        self.blocks
            .iter()
            .flat_map(|b| b.entries().iter().cloned())
            .collect()
    }

    pub fn linear_combination(coeffs: &[Rational], maps: &[GradedMap]) -> GradedMap {
        assert_eq!(coeffs.len(), maps.len());
        let first = maps.first().expect("at least one map");
        let mut blocks: Vec<Matrix> = first
            .blocks
            .iter()
            .map(|b| Matrix::zeros(b.rows(), b.cols()))
            .collect();
        for (c, m) in coeffs.iter().zip(maps) {
            if c.is_zero() {
                continue;
            }
            for (acc, b) in blocks.iter_mut().zip(&m.blocks) {
                *acc = acc.add(&b.scale(c));
            }
        }
        GradedMap {
            degree: first.degree,
            blocks,
        }
    }

    /// Block-diagonal `n × n` matrix of a degree-0 map.
    pub fn to_dense(&self, alg: &StratifiedAlgebra) -> Matrix {
        assert_eq!(self.degree, 0, "only degree-0 maps act within g");
        let mut m = Matrix::zeros(alg.dim(), alg.dim());
        for (p, b) in self.blocks.iter().enumerate() {
            let off = alg.layer_range(p + 1).start;
            m.set_block(off, off, b);
        }
        m
    }

    /// The degree-0 map with the given dense matrix, if it is block diagonal.
    pub fn from_dense(alg: &StratifiedAlgebra, m: &Matrix) -> Option<GradedMap> {
        let n = alg.dim();
        assert_eq!((m.rows(), m.cols()), (n, n));
        for a in 0..n {
            for b in 0..n {
                if alg.layer_of(a) != alg.layer_of(b) && !m[(a, b)].is_zero() {
                    return None;
                }
            }
        }
        let blocks = (1..=alg.step())
            .map(|p| {
                let r = alg.layer_range(p);
                m.block(r.start, r.start, r.len(), r.len())
            })
            .collect();
        Some(GradedMap { degree: 0, blocks })
    }

    pub fn apply(&self, alg: &StratifiedAlgebra, x: &[Rational]) -> Vec<Rational> {
        self.to_dense(alg).mul_vec(x)
    }

    /// `self ∘ other` for degree-0 maps.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!((self.degree, other.degree), (0, 0));
        GradedMap {
            degree: 0,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    /// `self ∘ other − other ∘ self` for degree-0 maps.
    pub fn commutator(&self, other: &GradedMap) -> GradedMap {
        assert_eq!((self.degree, other.degree), (0, 0));
        GradedMap {
            degree: 0,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.mul(b).sub(&b.mul(a)))
                .collect(),
        }
    }

    pub fn transpose_blocks(&self) -> GradedMap {
        GradedMap {
            degree: self.degree,
            blocks: self.blocks.iter().map(Matrix::transpose).collect(),
        }
    }
}
