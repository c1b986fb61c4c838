//! Canonical inner products on the layers of a stratified algebra.
//!
//! The supplied basis of `g₋₁` is taken to be orthonormal. Each higher layer
//! `g₋ⱼ` receives the inner product transported from the orthogonal
//! complement of `ker Pⱼ` in `g₋₁^{⊗j}`, where
//! `Pⱼ(X₁ ⊗ … ⊗ Xⱼ) = [… [X₁, X₂] …, Xⱼ]`. In coordinates the Gram matrix is
//! `(Pⱼ Pⱼᵀ)⁻¹`; the minimal-norm lift gives the same numbers and is kept as
//! an independent route.

use crate::algebra::StratifiedAlgebra;
use crate::exactlin::{
    dot, inverse, min_norm_preimage, rank, unit_vec, Matrix, Rational, Signature, SymmetricForm,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("tensor degree {j} is outside 1..={step}")]
    DegreeOutOfRange { j: usize, step: usize },
    #[error("projection onto layer {j} has rank {rank}, expected {expected}; the stratification is broken")]
    RankDeficient { j: usize, rank: usize, expected: usize },
}

/// Matrix of `Pⱼ : g₋₁^{⊗j} → g₋ⱼ`, columns indexed by `(i₁, …, iⱼ)` in
/// lexicographic order.
pub fn tensor_projection_matrix(alg: &StratifiedAlgebra, j: usize) -> Result<Matrix, MetricError> {
    if j == 0 || j > alg.step() {
        return Err(MetricError::DegreeOutOfRange { j, step: alg.step() });
    }
    let n = alg.dim();
    let d1 = alg.layer_dim(1);
    let firsts: Vec<Vec<Rational>> = (0..d1).map(|i| unit_vec(n, i)).collect();
    let mut nested = firsts.clone();
    for _ in 1..j {
        let mut next = Vec::with_capacity(nested.len() * d1);
        for v in &nested {
            for e in &firsts {
                next.push(alg.bracket(v, e));
            }
        }
        nested = next;
    }
    let cols: Vec<Vec<Rational>> = nested.iter().map(|v| alg.component(v, j)).collect();
    let p = Matrix::from_cols(&cols, alg.layer_dim(j));
    let r = rank(&p);
    if r != alg.layer_dim(j) {
        return Err(MetricError::RankDeficient {
            j,
            rank: r,
            expected: alg.layer_dim(j),
        });
    }
    Ok(p)
}

/// Gram matrix of the canonical inner product on `g₋ⱼ`, `(Pⱼ Pⱼᵀ)⁻¹`.
pub fn induced_gram(alg: &StratifiedAlgebra, j: usize) -> Result<SymmetricForm, MetricError> {
    let p = tensor_projection_matrix(alg, j)?;
    let inv = inverse(&p.mul(&p.transpose())).ok_or(MetricError::RankDeficient {
        j,
        rank: rank(&p),
        expected: alg.layer_dim(j),
    })?;
    Ok(SymmetricForm::new(inv).expect("inverse of a symmetric matrix"))
}

/// The tensor of least norm mapped by `Pⱼ` onto the layer vector `w`.
pub fn minimal_lift(alg: &StratifiedAlgebra, j: usize, w: &[Rational]) -> Result<Vec<Rational>, MetricError> {
    let p = tensor_projection_matrix(alg, j)?;
    Ok(min_norm_preimage(&p, w).expect("Pⱼ is onto"))
}

/// Gram matrix of the lifts of the basis of `g₋ⱼ`.
pub fn lift_gram(alg: &StratifiedAlgebra, j: usize) -> Result<SymmetricForm, MetricError> {
    let dj = alg.layer_dim(j);
    let lifts = (0..dj)
        .map(|a| minimal_lift(alg, j, &unit_vec(dj, a)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut g = Matrix::zeros(dj, dj);
    for a in 0..dj {
        for b in 0..dj {
            g[(a, b)] = dot(&lifts[a], &lifts[b]);
        }
    }
    Ok(SymmetricForm::new(g).expect("Gram matrices are symmetric"))
}

/// One Gram matrix per layer; distinct layers are orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProductAssignment {
    grams: Vec<SymmetricForm>,
}

impl InnerProductAssignment {
    pub fn canonical(alg: &StratifiedAlgebra) -> Result<Self, MetricError> {
        let grams = (1..=alg.step())
            .map(|j| induced_gram(alg, j))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InnerProductAssignment { grams })
    }

    pub fn grams(&self) -> &[SymmetricForm] {
        &self.grams
    }

    /// Gram matrix on `g₋ⱼ`.
    pub fn gram(&self, j: usize) -> &SymmetricForm {
        &self.grams[j - 1]
    }

    pub fn signatures(&self) -> Vec<Signature> {
        self.grams.iter().map(SymmetricForm::signature).collect()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.grams
            .iter()
            .all(|g| g.signature() == Signature::new(g.dim(), 0, 0))
    }

    /// Block-diagonal Gram matrix on all of `g`.
    pub fn total_gram(&self) -> SymmetricForm {
        let n: usize = self.grams.iter().map(SymmetricForm::dim).sum();
        let mut m = Matrix::zeros(n, n);
        let mut off = 0;
        for g in &self.grams {
            m.set_block(off, off, g.matrix());
            off += g.dim();
        }
        SymmetricForm::new(m).expect("block diagonal of symmetric blocks")
    }

    pub fn inner(&self, alg: &StratifiedAlgebra, x: &[Rational], y: &[Rational]) -> Rational {
        (1..=alg.step())
            .map(|j| self.gram(j).eval(&alg.component(x, j), &alg.component(y, j)))
            .sum()
    }

    pub fn norm_squared(&self, alg: &StratifiedAlgebra, x: &[Rational]) -> Rational {
        self.inner(alg, x, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, ints, rat};

    fn heisenberg() -> StratifiedAlgebra {
        let mut g = StratifiedAlgebra::with_layers(vec![2, 1]);
        g.set_bracket(0, 1, &ints(&[0, 0, 1]));
        g
    }

    fn engel() -> StratifiedAlgebra {
        let mut g = StratifiedAlgebra::with_layers(vec![2, 1, 1]);
        g.set_bracket(0, 1, &ints(&[0, 0, 1, 0]));
        g.set_bracket(0, 2, &ints(&[0, 0, 0, 1]));
        g
    }

    #[test]
    fn projection_examples() {
        let p = tensor_projection_matrix(&heisenberg(), 2).unwrap();
        assert_eq!(p, Matrix::from_i64(1, 4, &[0, 1, -1, 0]));

        let a = StratifiedAlgebra::with_layers(vec![3]);
        assert_eq!(tensor_projection_matrix(&a, 1).unwrap(), Matrix::identity(3));

        // column of X₁⊗X₂⊗X₁ is index 0·4 + 1·2 + 0 = 2
        let p3 = tensor_projection_matrix(&engel(), 3).unwrap();
        assert_eq!(p3[(0, 2)], int(-1));
        assert_eq!(p3.cols(), 8);

        assert_eq!(
            tensor_projection_matrix(&heisenberg(), 3),
            Err(MetricError::DegreeOutOfRange { j: 3, step: 2 })
        );
        assert!(matches!(
            tensor_projection_matrix(&StratifiedAlgebra::with_layers(vec![2, 1]), 2),
            Err(MetricError::RankDeficient { .. })
        ));
    }

    #[test]
    fn gram_examples() {
        let g = heisenberg();
        assert_eq!(induced_gram(&g, 2).unwrap().matrix()[(0, 0)], rat(1, 2));
        assert_eq!(lift_gram(&g, 2).unwrap(), induced_gram(&g, 2).unwrap());
        assert_eq!(
            minimal_lift(&g, 2, &[int(1)]).unwrap(),
            vec![int(0), rat(1, 2), rat(-1, 2), int(0)]
        );

        let a = StratifiedAlgebra::with_layers(vec![3]);
        assert_eq!(induced_gram(&a, 1).unwrap(), SymmetricForm::identity(3));
    }

    #[test]
    fn norms() {
        let g = heisenberg();
        let m = InnerProductAssignment::canonical(&g).unwrap();
        assert_eq!(m.norm_squared(&g, &ints(&[1, 0, 0])), int(1));
        assert_eq!(m.norm_squared(&g, &ints(&[0, 0, 1])), rat(1, 2));
        assert_eq!(m.norm_squared(&g, &ints(&[1, 0, 1])), rat(3, 2));
        assert!(m.is_positive_definite());
    }

    #[test]
    fn engel_grams_agree_with_lifts() {
        let g = engel();
        for j in 1..=3 {
            assert_eq!(induced_gram(&g, j).unwrap(), lift_gram(&g, j).unwrap());
        }
    }
}
