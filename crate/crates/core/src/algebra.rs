//! Stratified Lie algebras `g = g₋₁ ⊕ … ⊕ g₋ₛ` and their structural checks.
//!
//! Basis vectors are indexed layer by layer: the `i`-th vector of `g₋ⱼ` has
//! label `(j, i)` (both 1-based) and flat index `offset(j) + i - 1`.

use std::fmt;
use std::ops::Range;

use num_traits::{One, Signed, Zero};

use crate::exactlin::{is_zero_vec, nullspace, rank, zero_vec, Matrix, Rational, Subspace};
use crate::graded::GradedMap;
use crate::lie::StructureConstants;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedAlgebra {
    layer_dims: Vec<usize>,
    offsets: Vec<usize>,
    table: StructureConstants,
}

/// One broken requirement, with basis labels `(layer, index)` as in the file format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoLayers,
    EmptyLayer {
        layer: usize,
    },
    Dimension {
        dim: usize,
    },
    Antisymmetry {
        left: (usize, usize),
        right: (usize, usize),
    },
    Jacobi {
        triple: [(usize, usize); 3],
    },
    Grading {
        left: (usize, usize),
        right: (usize, usize),
        component: (usize, usize),
    },
    Stratification {
        layer: usize,
        expected: usize,
        spanned: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = |x: &(usize, usize)| format!("({},{})", x.0, x.1);
        match self {
            Violation::NoLayers => write!(f, "dimension: no layers given"),
            Violation::EmptyLayer { layer } => write!(f, "dimension: layer {layer} is empty"),
            Violation::Dimension { dim } => {
                write!(f, "dimension: total dimension {dim} is below 3")
            }
            Violation::Antisymmetry { left, right } => {
                write!(f, "antisymmetry: [{}, {}] != -[{}, {}]", l(left), l(right), l(right), l(left))
            }
            Violation::Jacobi { triple } => write!(
                f,
                "jacobi: identity fails on {}, {}, {}",
                l(&triple[0]),
                l(&triple[1]),
                l(&triple[2])
            ),
            Violation::Grading { left, right, component } => write!(
                f,
                "grading: [{}, {}] has a component along {}",
                l(left),
                l(right),
                l(component)
            ),
            Violation::Stratification { layer, expected, spanned } => write!(
                f,
                "stratification: brackets with layer 1 span {spanned} of the {expected} dimensions of layer {layer}"
            ),
        }
    }
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::NoLayers | Violation::EmptyLayer { .. } | Violation::Dimension { .. } => "dimension",
            Violation::Antisymmetry { .. } => "antisymmetry",
            Violation::Jacobi { .. } => "jacobi",
            Violation::Grading { .. } => "grading",
            Violation::Stratification { .. } => "stratification",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidationOptions {
    /// Accept total dimension 1 or 2. These algebras fall outside the
    /// setting where the classification results apply.
    pub allow_small_dimension: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dilation parameter must be positive, got {0}")]
    NonPositiveDilation(Rational),
    #[error("basis label ({0},{1}) is out of range")]
    BadLabel(usize, usize),
    #[error("change of basis must be an invertible {0}x{0} matrix")]
    BadBasisChange(usize),
}

impl StratifiedAlgebra {
    /// Wraps a raw table; nothing is checked until [`StratifiedAlgebra::validate`].
    pub fn from_table(layer_dims: Vec<usize>, table: StructureConstants) -> Self {
        let mut offsets = Vec::with_capacity(layer_dims.len() + 1);
        let mut acc = 0;
        for d in &layer_dims {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        assert_eq!(table.dim(), acc, "table dimension does not match layers");
        StratifiedAlgebra {
            layer_dims,
            offsets,
            table,
        }
    }

    /// An algebra with all brackets zero; fill it with [`StratifiedAlgebra::set_bracket`].
    pub fn with_layers(layer_dims: Vec<usize>) -> Self {
        let n = layer_dims.iter().sum();
        Self::from_table(layer_dims, StructureConstants::zero(n))
    }

    /// Sets `[e_a, e_b] = value` and `[e_b, e_a] = -value` on flat indices.
    pub fn set_bracket(&mut self, a: usize, b: usize, value: &[Rational]) {
        self.table.set_antisymmetric(a, b, value);
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    /// `dim g₋ⱼ`, zero outside `1..=s`.
    pub fn layer_dim(&self, j: usize) -> usize {
        if j == 0 || j > self.step() {
            0
        } else {
            self.layer_dims[j - 1]
        }
    }

    /// Flat index range of `g₋ⱼ`.
    pub fn layer_range(&self, j: usize) -> Range<usize> {
        assert!(j >= 1 && j <= self.step(), "layer {j} out of range");
        self.offsets[j - 1]..self.offsets[j]
    }

    pub fn layer_of(&self, index: usize) -> usize {
        assert!(index < self.dim());
        self.offsets.partition_point(|&o| o <= index)
    }

    /// `(j, i)` label of a flat index.
    pub fn label(&self, index: usize) -> (usize, usize) {
        let j = self.layer_of(index);
        (j, index - self.offsets[j - 1] + 1)
    }

    pub fn index(&self, j: usize, i: usize) -> Result<usize, AlgebraError> {
        if j == 0 || j > self.step() || i == 0 || i > self.layer_dims[j - 1] {
            return Err(AlgebraError::BadLabel(j, i));
        }
        Ok(self.offsets[j - 1] + i - 1)
    }

    pub fn table(&self) -> &StructureConstants {
        &self.table
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.table.bracket(x, y)
    }

    /// Coordinates of `x` in `g₋ⱼ`.
    pub fn component(&self, x: &[Rational], j: usize) -> Vec<Rational> {
        x[self.layer_range(j)].to_vec()
    }

    /// Ambient vector from coordinates in `g₋ⱼ`.
    pub fn embed(&self, j: usize, coords: &[Rational]) -> Vec<Rational> {
        let mut v = zero_vec(self.dim());
        let r = self.layer_range(j);
        assert_eq!(coords.len(), r.len());
        v[r].clone_from_slice(coords);
        v
    }

    /// `g₋ⱼ` as a subspace.
    pub fn layer_subspace(&self, j: usize) -> Subspace {
        Subspace::coordinate(self.dim(), self.layer_range(j))
    }

    /// `Σ_{k ≥ j} g₋ₖ`
    pub fn upper_sum(&self, j: usize) -> Subspace {
        if j > self.step() {
            return Subspace::zero(self.dim());
        }
        Subspace::coordinate(self.dim(), self.offsets[j - 1]..self.dim())
    }

    pub fn validate(&self, opts: ValidationOptions) -> ValidationReport {
        let mut v = Vec::new();
        if self.layer_dims.is_empty() {
            v.push(Violation::NoLayers);
            return ValidationReport { violations: v };
        }
        for (j, d) in self.layer_dims.iter().enumerate() {
            if *d == 0 {
                v.push(Violation::EmptyLayer { layer: j + 1 });
            }
        }
        if self.dim() < 3 && !opts.allow_small_dimension {
            v.push(Violation::Dimension { dim: self.dim() });
        }
        for (a, b) in self.table.antisymmetry_failures() {
            v.push(Violation::Antisymmetry {
                left: self.label(a),
                right: self.label(b),
            });
        }
        let n = self.dim();
        let s = self.step();
        for a in 0..n {
            for b in 0..n {
                let target = self.layer_of(a) + self.layer_of(b);
                for (c, _) in self.table.sparse(a, b) {
                    if target > s || self.layer_of(*c) != target {
                        v.push(Violation::Grading {
                            left: self.label(a),
                            right: self.label(b),
                            component: self.label(*c),
                        });
                    }
                }
            }
        }
        for (a, b, c) in self.table.jacobi_failures() {
            v.push(Violation::Jacobi {
                triple: [self.label(a), self.label(b), self.label(c)],
            });
        }
        for j in 1..s {
            if self.layer_dim(j + 1) == 0 {
                continue;
            }
            let target = self.layer_range(j + 1);
            let mut rows = Vec::new();
            for a in self.layer_range(j) {
                for b in self.layer_range(1) {
                    let br = self.table.basis_bracket(a, b);
                    rows.push(br[target.clone()].to_vec());
                }
            }
            let spanned = if rows.is_empty() {
                0
            } else {
                rank(&Matrix::from_rows(&rows))
            };
            if spanned != target.len() {
                v.push(Violation::Stratification {
                    layer: j + 1,
                    expected: target.len(),
                    spanned,
                });
            }
        }
        ValidationReport { violations: v }
    }

    /// `g⁽¹⁾ = g`, `g⁽ʲ⁺¹⁾ = [g, g⁽ʲ⁾]`, ending with the zero subspace.
    pub fn descending_central_series(&self) -> Vec<Subspace> {
        let n = self.dim();
        let mut series = vec![Subspace::full(n)];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let mut vecs = Vec::new();
            for a in 0..n {
                for w in last.basis() {
                    let br = self.table.bracket_basis_vec(a, w);
                    if !is_zero_vec(&br) {
                        vecs.push(br);
                    }
                }
            }
            let next = Subspace::span(n, &vecs);
            if next.dim() == last.dim() {
                // not nilpotent; stop rather than loop forever
                series.push(next);
                break;
            }
            series.push(next);
        }
        series
    }

    /// `{ X : [X, g] = 0 }`
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut m = Matrix::zeros(n * n, n);
        for a in 0..n {
            for b in 0..n {
                for (c, v) in self.table.sparse(a, b) {
                    m[(b * n + c, a)] = v.clone();
                }
            }
        }
        Subspace::span(n, &nullspace(&m))
    }

    /// `δ_t`, acting by `tʲ` on `g₋ⱼ`.
    pub fn dilation(&self, t: &Rational) -> Result<GradedMap, AlgebraError> {
        if !t.is_positive() {
            return Err(AlgebraError::NonPositiveDilation(t.clone()));
        }
        let mut scalars = Vec::with_capacity(self.step());
        let mut p = Rational::one();
        for _ in 0..self.step() {
            p *= t;
            scalars.push(p.clone());
        }
        Ok(GradedMap::block_scalar(self, &scalars))
    }

    /// The grading derivation `H`, acting by `j` on `g₋ⱼ`.
    pub fn grading_derivation(&self) -> GradedMap {
        let scalars: Vec<Rational> = (1..=self.step())
            .map(|j| Rational::from_integer((j as i64).into()))
            .collect();
        GradedMap::block_scalar(self, &scalars)
    }

    /// `T[e_a, e_b] = [T e_a, T e_b]` on all basis pairs.
    pub fn is_automorphism(&self, map: &GradedMap) -> bool {
        let t = map.to_dense(self);
        let cols = t.col_vecs();
        let n = self.dim();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let lhs = t.mul_vec(&self.table.basis_bracket(a, b));
                lhs == self.bracket(&cols[a], &cols[b])
            })
        }) && crate::exactlin::rank(&t) == n
    }

    /// `D[e_a, e_b] = [D e_a, e_b] + [e_a, D e_b]` on all basis pairs.
    pub fn is_derivation(&self, map: &GradedMap) -> bool {
        self.derivation_defect(&map.to_dense(self)).is_none()
    }

    /// First basis pair on which a dense map fails the derivation identity.
    pub fn derivation_defect(&self, d: &Matrix) -> Option<(usize, usize)> {
        let cols = d.col_vecs();
        let n = self.dim();
        for a in 0..n {
            for b in a + 1..n {
                let lhs = d.mul_vec(&self.table.basis_bracket(a, b));
                let r1 = self.table.bracket(&cols[a], &crate::exactlin::unit_vec(n, b));
                let r2 = self.table.bracket_basis_vec(a, &cols[b]);
                if lhs
                    .iter()
                    .zip(r1.iter().zip(&r2))
                    .any(|(l, (x, y))| !(l - x - y).is_zero())
                {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// The same algebra written in a new basis of `g₋₁` whose `i`-th vector is
    /// column `i` of `q`; the bases of the higher layers are unchanged.
    pub fn change_first_layer_basis(&self, q: &Matrix) -> Result<StratifiedAlgebra, AlgebraError> {
        let d1 = self.layer_dim(1);
        if q.rows() != d1 || q.cols() != d1 || rank(q) != d1 {
            return Err(AlgebraError::BadBasisChange(d1));
        }
        let n = self.dim();
        let mut change = Matrix::identity(n);
        change.set_block(0, 0, q);
        let inv = crate::exactlin::inverse(&change).expect("invertible");
        let cols = change.col_vecs();
        let mut table = StructureConstants::zero(n);
        for a in 0..n {
            for b in 0..n {
                let br = inv.mul_vec(&self.bracket(&cols[a], &cols[b]));
                if !is_zero_vec(&br) {
                    table.set(a, b, &br);
                }
            }
        }
        Ok(StratifiedAlgebra::from_table(self.layer_dims.clone(), table))
    }
}
