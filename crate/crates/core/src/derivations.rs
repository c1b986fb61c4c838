//! Strata-preserving, isometric and conformal derivations.

use num_traits::Zero;

use crate::algebra::StratifiedAlgebra;
use crate::exactlin::{is_zero_vec, nullspace, unit_vec, Matrix, Rational, Subspace};
use crate::graded::GradedMap;
use crate::metric::InnerProductAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivationKind {
    /// `Der(g)`: derivations preserving every layer.
    StrataPreserving,
    /// Derivations skew-symmetric on `g₋₁`.
    Isometric,
    /// `ℝH + IsoDer(g)`.
    Conformal,
    /// A user-supplied subalgebra of `Der(g)`.
    Custom,
}

impl DerivationKind {
    pub fn name(self) -> &'static str {
        match self {
            DerivationKind::StrataPreserving => "der",
            DerivationKind::Isometric => "iso",
            DerivationKind::Conformal => "conf",
            DerivationKind::Custom => "custom",
        }
    }
}

/// A Lie algebra of degree-0 derivations, given by a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    pub kind: DerivationKind,
    pub basis: Vec<GradedMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivationError {
    #[error("basis element {index} is not a degree-0 map with blocks matching the layers")]
    Shape { index: usize },
    #[error("basis element {index} fails the derivation identity on basis pair ({}, {})", .pair.0, .pair.1)]
    NotDerivation { index: usize, pair: (usize, usize) },
    #[error("basis elements are linearly dependent")]
    Dependent,
    #[error("bracket of basis elements {0} and {1} leaves the span")]
    NotClosed(usize, usize),
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn span(&self) -> Subspace {
        let flat: Vec<_> = self.basis.iter().map(GradedMap::flatten).collect();
        let ambient = flat.first().map_or(0, Vec::len);
        Subspace::span(ambient, &flat)
    }

    pub fn contains(&self, d: &GradedMap) -> bool {
        if self.basis.is_empty() {
            return d.is_zero();
        }
        self.span().contains(&d.flatten())
    }

    /// Coordinates of `d` in the basis, if it lies in the span.
    pub fn coordinates(&self, d: &GradedMap) -> Option<Vec<Rational>> {
        if self.basis.is_empty() {
            return if d.is_zero() { Some(Vec::new()) } else { None };
        }
        let cols: Vec<_> = self.basis.iter().map(GradedMap::flatten).collect();
        let m = Matrix::from_cols(&cols, cols[0].len());
        crate::exactlin::solve(&m, &d.flatten())
    }

    /// First pair of basis elements whose commutator leaves the span.
    pub fn closure_defect(&self) -> Option<(usize, usize)> {
        let span = self.span();
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let c = self.basis[i].commutator(&self.basis[j]);
                if !span.contains(&c.flatten()) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Checks that this is a Lie subalgebra of `Der(g)` with independent basis.
    pub fn check(&self, alg: &StratifiedAlgebra) -> Result<(), DerivationError> {
        for (index, d) in self.basis.iter().enumerate() {
            let shape_ok = d.degree() == 0
                && d.blocks().len() == alg.step()
                && d.blocks()
                    .iter()
                    .zip(alg.layer_dims())
                    .all(|(b, &dim)| b.rows() == dim && b.cols() == dim);
            if !shape_ok {
                return Err(DerivationError::Shape { index });
            }
            if let Some(pair) = alg.derivation_defect(&d.to_dense(alg)) {
                return Err(DerivationError::NotDerivation { index, pair });
            }
        }
        if self.span().dim() != self.basis.len() {
            return Err(DerivationError::Dependent);
        }
        if let Some((i, j)) = self.closure_defect() {
            return Err(DerivationError::NotClosed(i, j));
        }
        Ok(())
    }
}

/// `D[e_a, e_b] − [De_a, e_b] − [e_a, De_b]` over all pairs `a < b`, concatenated.
fn derivation_residual(alg: &StratifiedAlgebra, d: &Matrix) -> Vec<Rational> {
    let n = alg.dim();
    let cols = d.col_vecs();
    let mut out = Vec::with_capacity(n * n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            let lhs = d.mul_vec(&alg.table().basis_bracket(a, b));
            let r1 = alg.bracket(&cols[a], &unit_vec(n, b));
            let r2 = alg.table().bracket_basis_vec(a, &cols[b]);
            out.extend(
                lhs.into_iter()
                    .zip(r1.iter().zip(&r2))
                    .map(|(l, (x, y))| l - x - y),
            );
        }
    }
    out
}

/// Elementary block-diagonal maps, one per block entry, in flatten order.
fn elementary_maps(alg: &StratifiedAlgebra) -> Vec<GradedMap> {
    let mut out = Vec::new();
    for (p, &dp) in alg.layer_dims().iter().enumerate() {
        for r in 0..dp {
            for c in 0..dp {
                let blocks = alg
                    .layer_dims()
                    .iter()
                    .enumerate()
                    .map(|(q, &dq)| {
                        let mut m = Matrix::zeros(dq, dq);
                        if q == p {
                            m[(r, c)] = Rational::from_integer(1.into());
                        }
                        m
                    })
                    .collect();
                out.push(GradedMap::new(0, blocks));
            }
        }
    }
    out
}

/// Solves for the block-diagonal maps whose residual columns vanish.
fn solve_block_diagonal(
    alg: &StratifiedAlgebra,
    extra: impl Fn(&GradedMap) -> Vec<Rational>,
) -> Vec<GradedMap> {
    let unknowns = elementary_maps(alg);
    let columns: Vec<Vec<Rational>> = unknowns
        .iter()
        .map(|e| {
            let mut col = derivation_residual(alg, &e.to_dense(alg));
            col.extend(extra(e));
            col
        })
        .collect();
    let rows = columns[0].len();
    let system = Matrix::from_cols(&columns, rows);
    nullspace(&system)
        .into_iter()
        .map(|x| GradedMap::linear_combination(&x, &unknowns))
        .collect()
}

pub fn strata_preserving_derivations(alg: &StratifiedAlgebra) -> DerivationSpace {
    DerivationSpace {
        kind: DerivationKind::StrataPreserving,
        basis: solve_block_diagonal(alg, |_| Vec::new()),
    }
}

/// `Gᵀ D + Dᵀ G` on one layer, upper triangle.
fn skew_defect(gram: &Matrix, block: &Matrix) -> Vec<Rational> {
    let s = gram.mul(block).add(&block.transpose().mul(gram));
    let d = s.rows();
    (0..d)
        .flat_map(|i| (i..d).map(move |j| (i, j)))
        .map(|(i, j)| s[(i, j)].clone())
        .collect()
}

pub fn iso_derivations(alg: &StratifiedAlgebra, metric: &InnerProductAssignment) -> DerivationSpace {
    let g1 = metric.gram(1).matrix().clone();
    DerivationSpace {
        kind: DerivationKind::Isometric,
        basis: solve_block_diagonal(alg, |e| skew_defect(&g1, e.block(1))),
    }
}

pub fn conf_derivations(alg: &StratifiedAlgebra, metric: &InnerProductAssignment) -> DerivationSpace {
    let iso = iso_derivations(alg, metric);
    let h = alg.grading_derivation();
    debug_assert!(!iso.contains(&h), "H is symmetric on g₋₁, never skew");
    let mut basis = vec![h];
    basis.extend(iso.basis);
    DerivationSpace {
        kind: DerivationKind::Conformal,
        basis,
    }
}

/// Whether `D` is skew with respect to the induced Gram on every layer.
pub fn is_skew_on_all_layers(d: &GradedMap, metric: &InnerProductAssignment) -> bool {
    d.blocks()
        .iter()
        .enumerate()
        .all(|(p, b)| is_zero_vec(&skew_defect(metric.gram(p + 1).matrix(), b)))
}

/// Splits a conformal derivation as `D = sH + M` with `M` skew on `g₋₁`,
/// where `s = tr(D|g₋₁) / dim g₋₁`. `None` if the remainder is not skew.
pub fn conformal_split(
    alg: &StratifiedAlgebra,
    metric: &InnerProductAssignment,
    d: &GradedMap,
) -> Option<(Rational, GradedMap)> {
    let d1 = alg.layer_dim(1);
    let s = d.block(1).trace() / Rational::from_integer((d1 as i64).into());
    let h = alg.grading_derivation();
    let m = GradedMap::linear_combination(&[Rational::from_integer(1.into()), -s.clone()], &[d.clone(), h]);
    let defect = skew_defect(metric.gram(1).matrix(), m.block(1));
    defect.iter().all(Zero::is_zero).then_some((s, m))
}
