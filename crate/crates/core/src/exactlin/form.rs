use num_traits::Zero;

use super::matrix::Matrix;
use super::rational::{sign, Rational};

/// Inertia of a real symmetric bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(plus: usize, minus: usize, zero: usize) -> Self {
        Signature { plus, minus, zero }
    }

    pub fn dim(&self) -> usize {
        self.plus + self.minus + self.zero
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("matrix is not symmetric")]
pub struct NotSymmetric;

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricForm {
    matrix: Matrix,
}

impl SymmetricForm {
    pub fn new(matrix: Matrix) -> Result<Self, NotSymmetric> {
        if matrix.is_symmetric() {
            Ok(SymmetricForm { matrix })
        } else {
            Err(NotSymmetric)
        }
    }

    pub fn identity(n: usize) -> Self {
        SymmetricForm {
            matrix: Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        super::rational::dot(x, &self.matrix.mul_vec(y))
    }

    /// The form `Sᵀ·F·S`.
    pub fn congruent(&self, s: &Matrix) -> SymmetricForm {
        SymmetricForm {
            matrix: s.transpose().mul(&self.matrix).mul(s),
        }
    }

    /// Restriction to the span of the given vectors (Gram matrix in that basis).
    pub fn restrict(&self, basis: &[Vec<Rational>]) -> SymmetricForm {
        let n = basis.len();
        let mut g = Matrix::zeros(n, n);
        let images: Vec<_> = basis.iter().map(|v| self.matrix.mul_vec(v)).collect();
        for i in 0..n {
            for j in i..n {
                let v = super::rational::dot(&basis[i], &images[j]);
                g[(j, i)] = v.clone();
                g[(i, j)] = v;
            }
        }
        SymmetricForm { matrix: g }
    }

    /// Counts of positive, negative and zero squares in a diagonalization by
    /// congruence (Sylvester's law of inertia).
    pub fn signature(&self) -> Signature {
        let n = self.dim();
        let mut a = self.matrix.clone();
        let mut plus = 0;
        let mut minus = 0;
        let mut k = 0;
        while k < n {
            let diag = (k..n).find(|&i| !a[(i, i)].is_zero());
            let p = match diag {
                Some(i) => i,
                None => {
                    // Zero diagonal: replace e_i by e_i + e_j for an off-diagonal
                    // nonzero a_ij, which makes the new diagonal entry 2·a_ij.
                    let off = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !a[(i, j)].is_zero());
                    let Some((i, j)) = off else { break };
                    add_congruent(&mut a, i, j);
                    i
                }
            };
            swap_congruent(&mut a, k, p);
            let piv = a[(k, k)].clone();
            match sign(&piv) {
                1 => plus += 1,
                _ => minus += 1,
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &piv;
                for j in k..n {
                    let d = &f * &a[(k, j)];
                    a[(i, j)] -= d;
                }
                for j in k..n {
                    let d = &f * &a[(j, k)];
                    a[(j, i)] -= d;
                }
            }
            k += 1;
        }
        Signature::new(plus, minus, n - plus - minus)
    }
}

fn swap_congruent(a: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for c in 0..n {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

/// Row and column `i` += row and column `j`.
fn add_congruent(a: &mut Matrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a[(j, c)].clone();
        a[(i, c)] += v;
    }
    for r in 0..n {
        let v = a[(r, j)].clone();
        a[(r, i)] += v;
    }
}
