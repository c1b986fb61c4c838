//! Tanaka prolongation `Prol(g, g₀)`, built one positive degree at a time.
//!
//! An element `u` of degree `k ≥ 1` is determined by its component
//! `u₁ : g₋₁ → g_{k-1}`. The remaining components follow from
//! `u_p([X, Z]) = [u₁X, Z] + [X, u_{p-1}Z]` for `X ∈ g₋₁`, `Z ∈ g₋₍ₚ₋₁₎`, and
//! the admissible `u₁` are exactly those for which this recursion is
//! consistent with every linear relation `Σ [Xᵢ, Zᵢ] = 0`, including the
//! brackets of `g₋₁` with the top layer, which all vanish.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::StratifiedAlgebra;
use crate::derivations::{
    conf_derivations, strata_preserving_derivations, DerivationError, DerivationKind, DerivationSpace,
};
use crate::exactlin::{
    is_zero_vec, min_norm_preimage, nullspace, rank, unit_vec, zero_vec, Matrix, Rational,
};
use crate::graded::GradedMap;
use crate::lie::{GradedLieAlgebra, StructureConstants};
use crate::metric::{InnerProductAssignment, MetricError};

pub const DEFAULT_MAX_DEGREE: usize = 12;

/// Which degree-0 algebra to prolong.
#[derive(Debug, Clone)]
pub enum G0Choice {
    Conformal,
    StrataPreserving,
    Custom(Vec<GradedMap>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProlongError {
    #[error("the grading derivation H is not in g0")]
    HNotInG0,
    #[error("invalid g0: {0}")]
    InvalidG0(#[from] DerivationError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("degree cap {0} exceeded before the prolongation terminated")]
    DegreeCapExceeded(usize),
    #[error("bracket of degrees {left} and {right} escapes the computed layer of degree {}", .left + .right)]
    BracketEscapes { left: i32, right: i32 },
}

/// Basis of the degree-`k` piece of the prolongation, `k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongationLayer {
    pub degree: usize,
    pub basis: Vec<GradedMap>,
}

impl ProlongationLayer {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of `u ↦ u₁` on this layer; equals [`ProlongationLayer::dim`]
    /// when no element annihilates `g₋₁`.
    pub fn first_component_rank(&self) -> usize {
        if self.basis.is_empty() {
            return 0;
        }
        let cols: Vec<_> = self.basis.iter().map(|u| u.block(1).entries().to_vec()).collect();
        rank(&Matrix::from_cols(&cols, cols[0].len()))
    }
}

/// Relations among `[X_i, Z_j]` and chosen preimages, for one layer `p ≥ 2`.
#[derive(Debug, Clone)]
struct LayerRelations {
    /// kernel of `g₋₁ ⊗ g₋₍ₚ₋₁₎ → g₋ₚ`, pairs indexed `i·d_{p-1} + j`
    relations: Vec<Vec<Rational>>,
    /// one preimage per basis vector of `g₋ₚ`
    preimages: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct Prolongation {
    base: StratifiedAlgebra,
    g0: DerivationSpace,
    positive: Vec<ProlongationLayer>,
    truncated: bool,
    max_degree: usize,
    relations: Vec<LayerRelations>,
    table: Option<GradedLieAlgebra>,
}

impl Prolongation {
    /// Starts a prolongation with no positive layers yet.
    pub fn start(
        base: StratifiedAlgebra,
        g0: DerivationSpace,
        max_degree: usize,
    ) -> Result<Self, ProlongError> {
        g0.check(&base)?;
        if !g0.contains(&base.grading_derivation()) {
            return Err(ProlongError::HNotInG0);
        }
        let relations = (2..=base.step() + 1).map(|p| layer_relations(&base, p)).collect();
        Ok(Prolongation {
            base,
            g0,
            positive: Vec::new(),
            truncated: false,
            max_degree,
            relations,
            table: None,
        })
    }

    pub fn base(&self) -> &StratifiedAlgebra {
        &self.base
    }

    pub fn g0(&self) -> &DerivationSpace {
        &self.g0
    }

    pub fn positive_layers(&self) -> &[ProlongationLayer] {
        &self.positive
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Synthesized bracket table; `None` when truncated.
    pub fn algebra(&self) -> Option<&GradedLieAlgebra> {
        self.table.as_ref()
    }

    /// Dimension of the degree-`d` piece (zero beyond the computed range).
    pub fn piece_dim(&self, d: i32) -> usize {
        match d {
            d if d < 0 => self.base.layer_dim((-d) as usize),
            0 => self.g0.dim(),
            d => self
                .positive
                .get(d as usize - 1)
                .map_or(0, ProlongationLayer::dim),
        }
    }

    pub fn layer_dims(&self) -> BTreeMap<i32, usize> {
        let s = self.base.step() as i32;
        (-s..=self.positive.len() as i32)
            .map(|d| (d, self.piece_dim(d)))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.layer_dims().values().sum()
    }

    /// Basis of a nonnegative piece, as maps on `g`.
    pub fn nonnegative_basis(&self, d: usize) -> &[GradedMap] {
        if d == 0 {
            &self.g0.basis
        } else {
            self.positive.get(d - 1).map_or(&[], |l| &l.basis)
        }
    }

    /// `[w, Z]` for `w` of degree `d ≥ 0` (coordinates in that piece) and
    /// `Z ∈ g₋ₚ`; the result has degree `d − p`.
    pub fn act(&self, d: usize, w: &[Rational], p: usize, z: &[Rational]) -> Vec<Rational> {
        let out_dim = self.piece_dim(d as i32 - p as i32);
        let mut out = zero_vec(out_dim);
        if out_dim == 0 {
            return out;
        }
        for (c, u) in w.iter().zip(self.nonnegative_basis(d)) {
            if c.is_zero() {
                continue;
            }
            let v = u.block(p).mul_vec(z);
            for (o, x) in out.iter_mut().zip(&v) {
                *o += c * x;
            }
        }
        out
    }

    /// Bracket of two elements of `g` given by layer coordinates.
    fn base_bracket(&self, i: usize, x: &[Rational], j: usize, y: &[Rational]) -> Vec<Rational> {
        let target = i + j;
        if target > self.base.step() {
            return Vec::new();
        }
        let xv = self.base.embed(i, x);
        let yv = self.base.embed(j, y);
        self.base.component(&self.base.bracket(&xv, &yv), target)
    }

    /// Runs the extension recursion for one candidate `u₁`, returning the
    /// component family and the consistency residuals.
    fn extend(&self, k: usize, u1: &Matrix) -> (Vec<Matrix>, Vec<Rational>) {
        let s = self.base.step();
        let d1 = self.base.layer_dim(1);
        let k = k as i32;
        let mut blocks = vec![u1.clone()];
        let mut residual = Vec::new();
        let u1_cols = u1.col_vecs();
        for p in 2..=s + 1 {
            let prev = blocks[p - 2].col_vecs();
            let dprev = self.base.layer_dim(p - 1);
            let out_deg = k - p as i32;
            let out_dim = self.piece_dim(out_deg);
            let mut terms = Vec::with_capacity(d1 * dprev);
            for (i, u1x) in u1_cols.iter().enumerate() {
                let xi = unit_vec(d1, i);
                for (j, uz) in prev.iter().enumerate() {
                    let zj = unit_vec(dprev, j);
                    let mut t = self.act((k - 1) as usize, u1x, p - 1, &zj);
                    let w_deg = out_deg + 1;
                    let second = if w_deg >= 0 {
                        self.act(w_deg as usize, uz, 1, &xi)
                            .into_iter()
                            .map(|x| -x)
                            .collect()
                    } else {
                        self.base_bracket(1, &xi, (-w_deg) as usize, uz)
                    };
                    if out_dim > 0 {
                        for (a, b) in t.iter_mut().zip(&second) {
                            *a += b;
                        }
                    }
                    terms.push(t);
                }
            }
            let rel = &self.relations[p - 2];
            for r in &rel.relations {
                residual.extend(StructureConstants::combine(out_dim, r, &terms));
            }
            if p <= s {
                let cols: Vec<_> = rel
                    .preimages
                    .iter()
                    .map(|c| StructureConstants::combine(out_dim, c, &terms))
                    .collect();
                blocks.push(Matrix::from_cols(&cols, out_dim));
            }
        }
        (blocks, residual)
    }

    /// Computes the degree-`k` layer from the layers of degree `< k`.
    /// Degrees past the last stored layer are treated as zero.
    pub fn prolong_step(&self, k: usize) -> ProlongationLayer {
        assert!(k >= 1);
        assert!(
            k <= self.positive.len() + 2,
            "layers below degree {k} are missing"
        );
        let d1 = self.base.layer_dim(1);
        let tgt = self.piece_dim(k as i32 - 1);
        let m = d1 * tgt;
        if m == 0 {
            return ProlongationLayer {
                degree: k,
                basis: Vec::new(),
            };
        }
        let mut candidates = Vec::with_capacity(m);
        let mut columns = Vec::with_capacity(m);
        for q in 0..m {
            let mut u1 = Matrix::zeros(tgt, d1);
            u1[(q / d1, q % d1)] = Rational::from_integer(1.into());
            let (blocks, residual) = self.extend(k, &u1);
            candidates.push(GradedMap::new(k as i32, blocks));
            columns.push(residual);
        }
        let rows = columns[0].len();
        let system = Matrix::from_cols(&columns, rows);
        let basis = nullspace(&system)
            .into_iter()
            .map(|x| GradedMap::linear_combination(&x, &candidates))
            .collect();
        ProlongationLayer { degree: k, basis }
    }

    /// Adds layers until one vanishes or the degree cap is reached.
    fn build(&mut self) {
        for k in 1..=self.max_degree {
            let layer = self.prolong_step(k);
            if layer.dim() == 0 {
                return;
            }
            self.positive.push(layer);
        }
        self.truncated = true;
    }

    /// The degree-`d` piece coordinates of `v` placed in the global basis.
    fn offsets(&self) -> BTreeMap<i32, usize> {
        let mut off = BTreeMap::new();
        let mut acc = 0;
        for (d, dim) in self.layer_dims() {
            off.insert(d, acc);
            acc += dim;
        }
        off
    }

    /// A vector of `g` in the basis of the synthesized table.
    pub fn embed_base(&self, v: &[Rational]) -> Vec<Rational> {
        let off = self.offsets();
        let mut out = zero_vec(self.total_dim());
        for (a, x) in v.iter().enumerate() {
            let (j, i) = self.base.label(a);
            out[off[&-(j as i32)] + i - 1] = x.clone();
        }
        out
    }

    /// Fills in the bracket table of `g₋ₛ ⊕ … ⊕ g_t`, basis ordered by degree.
    pub fn synthesize_brackets(&self) -> Result<GradedLieAlgebra, ProlongError> {
        let dims = self.layer_dims();
        let off = self.offsets();
        let n: usize = dims.values().sum();
        let global = |d: i32, coords: &[Rational]| -> Vec<Rational> {
            let mut v = zero_vec(n);
            if !coords.is_empty() {
                let o = off[&d];
                v[o..o + coords.len()].clone_from_slice(coords);
            }
            v
        };
        let local = |d: i32, v: &[Rational]| -> Vec<Rational> {
            let o = off[&d];
            v[o..o + dims[&d]].to_vec()
        };
        let degrees: Vec<i32> = dims
            .iter()
            .flat_map(|(&d, &k)| std::iter::repeat_n(d, k))
            .collect();
        let s = self.base.step();
        let mut table = StructureConstants::zero(n);

        // g × g
        for a in 0..self.base.dim() {
            for b in 0..self.base.dim() {
                let br = self.base.table().basis_bracket(a, b);
                if is_zero_vec(&br) {
                    continue;
                }
                let (ja, ia) = self.base.label(a);
                let (jb, ib) = self.base.label(b);
                let target = ja + jb;
                let g = global(-(target as i32), &self.base.component(&br, target));
                table.set(off[&-(ja as i32)] + ia - 1, off[&-(jb as i32)] + ib - 1, &g);
            }
        }
        // nonnegative × g
        let top = self.positive.len();
        for d in 0..=top {
            for i in 0..self.piece_dim(d as i32) {
                let u = unit_vec(self.piece_dim(d as i32), i);
                let ui = off[&(d as i32)] + i;
                for p in 1..=s {
                    for b in 0..self.base.layer_dim(p) {
                        let z = unit_vec(self.base.layer_dim(p), b);
                        let out_deg = d as i32 - p as i32;
                        let val = self.act(d, &u, p, &z);
                        if is_zero_vec(&val) {
                            continue;
                        }
                        let g = global(out_deg, &val);
                        table.set_antisymmetric(ui, off[&-(p as i32)] + b, &g);
                    }
                }
            }
        }
        // nonnegative × nonnegative, by increasing total degree
        let first_layer: Vec<Vec<Rational>> = (0..self.base.layer_dim(1))
            .map(|i| global(-1, &unit_vec(self.base.layer_dim(1), i)))
            .collect();
        let solvers: Vec<Matrix> = (0..=top)
            .map(|d| {
                let basis = self.nonnegative_basis(d);
                let cols: Vec<_> = basis.iter().map(|u| u.block(1).entries().to_vec()).collect();
                let rows = self.piece_dim(d as i32 - 1) * self.base.layer_dim(1);
                Matrix::from_cols(&cols, rows)
            })
            .collect();
        for total in 0..=2 * top {
            for j in 0..=top.min(total) {
                let k = total - j;
                if k > top || k < j {
                    continue;
                }
                for a in 0..self.piece_dim(j as i32) {
                    let start_b = if j == k { a + 1 } else { 0 };
                    for b in start_b..self.piece_dim(k as i32) {
                        let ga = off[&(j as i32)] + a;
                        let gb = off[&(k as i32)] + b;
                        let ea = unit_vec(n, ga);
                        let eb = unit_vec(n, gb);
                        // action of [u, v] on g₋₁: [u,[v,X]] − [v,[u,X]]
                        let rows = self.piece_dim(total as i32 - 1);
                        let mut w1 = Matrix::zeros(rows, self.base.layer_dim(1));
                        for (c, x) in first_layer.iter().enumerate() {
                            let vx = table.bracket_basis_vec(gb, x);
                            let ux = table.bracket_basis_vec(ga, x);
                            let mut val = table.bracket(&ea, &vx);
                            let other = table.bracket(&eb, &ux);
                            for (p, q) in val.iter_mut().zip(&other) {
                                *p -= q;
                            }
                            if rows > 0 {
                                let loc = local(total as i32 - 1, &val);
                                for r in 0..rows {
                                    w1[(r, c)] = loc[r].clone();
                                }
                            } else if !is_zero_vec(&val) {
                                return Err(ProlongError::BracketEscapes {
                                    left: j as i32,
                                    right: k as i32,
                                });
                            }
                        }
                        if w1.is_zero() {
                            continue;
                        }
                        let escapes = ProlongError::BracketEscapes {
                            left: j as i32,
                            right: k as i32,
                        };
                        let m = solvers.get(total).ok_or(escapes.clone())?;
                        let coeffs = crate::exactlin::solve(m, w1.entries()).ok_or(escapes)?;
                        let g = global(total as i32, &coeffs);
                        table.set_antisymmetric(ga, gb, &g);
                    }
                }
            }
        }
        let h_coords = self
            .g0
            .coordinates(&self.base.grading_derivation())
            .ok_or(ProlongError::HNotInG0)?;
        Ok(GradedLieAlgebra {
            table,
            degrees,
            h: global(0, &h_coords),
        })
    }

    /// `Err(DegreeCapExceeded)` if the run stopped at the cap.
    pub fn require_complete(&self) -> Result<&GradedLieAlgebra, ProlongError> {
        match &self.table {
            Some(t) if !self.truncated => Ok(t),
            _ => Err(ProlongError::DegreeCapExceeded(self.max_degree)),
        }
    }
}

fn layer_relations(alg: &StratifiedAlgebra, p: usize) -> LayerRelations {
    let d1 = alg.layer_dim(1);
    let dprev = alg.layer_dim(p - 1);
    let dp = alg.layer_dim(p);
    let mut cols = Vec::with_capacity(d1 * dprev);
    for i in 0..d1 {
        for j in 0..dprev {
            let x = alg.embed(1, &unit_vec(d1, i));
            let z = alg.embed(p - 1, &unit_vec(dprev, j));
            let br = alg.bracket(&x, &z);
            cols.push(if dp > 0 { alg.component(&br, p) } else { Vec::new() });
        }
    }
    let bmap = Matrix::from_cols(&cols, dp);
    let relations = nullspace(&bmap);
    let preimages = (0..dp)
        .map(|c| min_norm_preimage(&bmap, &unit_vec(dp, c)).expect("layer is generated by brackets with g₋₁"))
        .collect();
    LayerRelations { relations, preimages }
}

/// The degree-0 algebra for a choice.
pub fn g0_for(alg: &StratifiedAlgebra, choice: &G0Choice) -> Result<DerivationSpace, ProlongError> {
    Ok(match choice {
        G0Choice::Conformal => {
            let metric = InnerProductAssignment::canonical(alg)?;
            conf_derivations(alg, &metric)
        }
        G0Choice::StrataPreserving => strata_preserving_derivations(alg),
        G0Choice::Custom(basis) => DerivationSpace {
            kind: DerivationKind::Custom,
            basis: basis.clone(),
        },
    })
}

/// Prolongs `alg` with the chosen `g₀` up to `max_degree`, synthesizing the
/// bracket table when a zero layer is reached first.
pub fn prolong(
    alg: &StratifiedAlgebra,
    choice: &G0Choice,
    max_degree: usize,
) -> Result<Prolongation, ProlongError> {
    let g0 = g0_for(alg, choice)?;
    let mut p = Prolongation::start(alg.clone(), g0, max_degree)?;
    p.build();
    if !p.truncated {
        p.table = Some(p.synthesize_brackets()?);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ints;

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
    fn heisenberg_profile() {
        let p = prolong(&heisenberg(), &G0Choice::Conformal, DEFAULT_MAX_DEGREE).unwrap();
        assert!(!p.is_truncated());
        assert_eq!(
            p.layer_dims().values().copied().collect::<Vec<_>>(),
            vec![1, 2, 2, 2, 1]
        );
        assert_eq!(p.total_dim(), 8);
        let l = p.algebra().unwrap();
        assert!(l.table.jacobi_holds_all_triples());
    }

    #[test]
    fn engel_has_no_positive_part() {
        let p = prolong(&engel(), &G0Choice::Conformal, DEFAULT_MAX_DEGREE).unwrap();
        assert!(p.positive_layers().is_empty());
        assert_eq!(p.total_dim(), 4 + p.g0().dim());
    }

    #[test]
    fn abelian_plane_with_gl2_is_truncated() {
        let g = StratifiedAlgebra::with_layers(vec![2]);
        let p = prolong(&g, &G0Choice::StrataPreserving, 5).unwrap();
        assert!(p.is_truncated());
        assert!(p.algebra().is_none());
        assert_eq!(p.require_complete(), Err(ProlongError::DegreeCapExceeded(5)));
        // V ⊗ S^{k+1}V* has dimension 2(k+2)
        let dims: Vec<_> = p.positive_layers().iter().map(ProlongationLayer::dim).collect();
        assert_eq!(dims, vec![6, 8, 10, 12, 14]);
    }

    #[test]
    fn custom_g0_must_contain_h() {
        let g = heisenberg();
        let metric = InnerProductAssignment::canonical(&g).unwrap();
        let iso = crate::derivations::iso_derivations(&g, &metric);
        let err = prolong(&g, &G0Choice::Custom(iso.basis), 4).unwrap_err();
        assert_eq!(err, ProlongError::HNotInG0);
    }

    #[test]
    fn custom_g0_spanned_by_h_alone() {
        let g = heisenberg();
        let p = prolong(&g, &G0Choice::Custom(vec![g.grading_derivation()]), 4).unwrap();
        assert!(!p.is_truncated());
        assert_eq!(p.total_dim(), 4);
    }
}
