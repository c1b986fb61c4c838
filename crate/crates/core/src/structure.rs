//! Killing form, solvable radical, centroid and the rank-one test, and the
//! classifier built from them.
//!
//! A finite-dimensional conformal prolongation is either `g + g₀` (every
//! conformal map is affine) or a noncompact simple algebra of real rank one
//! (the algebra is the nilradical of a parabolic in it). The classifier
//! computes the prolongation and certifies whichever case occurs.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::StratifiedAlgebra;
use crate::exactlin::{nullspace, rank, Matrix, Rational, RowReducer, Signature, Subspace, SymmetricForm};
use crate::lie::{GradedLieAlgebra, StructureConstants};
use crate::prolong::{prolong, G0Choice, ProlongError, Prolongation, DEFAULT_MAX_DEGREE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("derived series of the computed radical does not reach zero")]
    RadicalNotSolvable,
    #[error("the prolongation is not finite within the degree cap; no structure theory applies")]
    NotApplicable,
    #[error("degree-1 piece is zero; the rank-one test does not apply")]
    NoPositivePart,
    #[error(transparent)]
    Prolong(#[from] ProlongError),
}

/// `B(x, y) = tr(ad x ∘ ad y)` in the table's basis.
pub fn killing_form(l: &StructureConstants) -> SymmetricForm {
    let n = l.dim();
    let ads: Vec<Matrix> = (0..n).map(|a| l.ad_basis(a)).collect();
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (x, y) = (&ads[i], &ads[j]);
            let mut tr = Rational::zero();
            for r in 0..n {
                for c in 0..n {
                    let u = &x[(r, c)];
                    if u.is_zero() {
                        continue;
                    }
                    let v = &y[(c, r)];
                    if !v.is_zero() {
                        tr += u * v;
                    }
                }
            }
            b[(j, i)] = tr.clone();
            b[(i, j)] = tr;
        }
    }
    SymmetricForm::new(b).expect("trace form is symmetric")
}

/// Span of `[L, L]`.
pub fn derived_algebra(l: &StructureConstants) -> Subspace {
    Subspace::span(l.dim(), &l.derived_spanning_set())
}

/// Span of `[S, S]` for a subspace `S`.
fn derived_of(l: &StructureConstants, s: &Subspace) -> Subspace {
    let mut vecs = Vec::new();
    let b = s.basis();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            vecs.push(l.bracket(&b[i], &b[j]));
        }
    }
    Subspace::span(l.dim(), &vecs)
}

/// The solvable radical, computed as the Killing-orthogonal of `[L, L]` and
/// checked to be solvable.
pub fn solvable_radical(l: &StructureConstants) -> Result<Subspace, StructureError> {
    let n = l.dim();
    let b = killing_form(l);
    let derived = derived_algebra(l);
    let rows: Vec<Vec<Rational>> = derived.basis().iter().map(|y| b.matrix().mul_vec(y)).collect();
    let radical = if rows.is_empty() {
        Subspace::full(n)
    } else {
        Subspace::span(n, &nullspace(&Matrix::from_rows(&rows)))
    };
    let mut term = radical.clone();
    while !term.is_zero() {
        let next = derived_of(l, &term);
        if next.dim() == term.dim() {
            return Err(StructureError::RadicalNotSolvable);
        }
        term = next;
    }
    Ok(radical)
}

/// Whether every homogeneous component of every vector of `s` lies in `s`.
pub fn is_h_graded(l: &GradedLieAlgebra, s: &Subspace) -> bool {
    let degrees: Vec<i32> = l.piece_dims().keys().copied().collect();
    s.basis()
        .iter()
        .all(|v| degrees.iter().all(|&d| s.contains(&l.project(v, d))))
}

/// Dimension of `{ φ ∈ End(L) : φ ∘ ad x = ad x ∘ φ for all x }`.
pub fn centroid_dim(l: &StructureConstants) -> usize {
    let n = l.dim();
    let mut red = RowReducer::new(n * n);
    for x in 0..n {
        let ad = l.ad_basis(x);
        for i in 0..n {
            for j in 0..n {
                // (φ ad_x − ad_x φ)_{ij} = Σ_k φ_ik ad_x[k][j] − ad_x[i][k] φ_kj
                let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                for k in 0..n {
                    let a = &ad[(k, j)];
                    if !a.is_zero() {
                        *row.entry(i * n + k).or_insert_with(Rational::zero) += a;
                    }
                    let b = &ad[(i, k)];
                    if !b.is_zero() {
                        *row.entry(k * n + j).or_insert_with(Rational::zero) -= b;
                    }
                }
                let sparse: Vec<(usize, Rational)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if !sparse.is_empty() {
                    red.push_sparse(&sparse);
                }
            }
        }
    }
    n * n - red.rank()
}

/// The smallest ideal containing `v`.
pub fn ideal_generated_by(l: &StructureConstants, v: &[Rational]) -> Subspace {
    let n = l.dim();
    let mut ideal = Subspace::span(n, &[v.to_vec()]);
    loop {
        let mut vecs: Vec<Vec<Rational>> = ideal.basis().to_vec();
        for w in ideal.basis() {
            for a in 0..n {
                vecs.push(l.bracket_basis_vec(a, w));
            }
        }
        let next = Subspace::span(n, &vecs);
        if next.dim() == ideal.dim() {
            return ideal;
        }
        ideal = next;
    }
}

/// A proper nonzero ideal generated by one homogeneous basis vector, if any.
/// Every ideal of a finite-dimensional prolongation is graded, so on a
/// semisimple prolongation this search decides simplicity.
pub fn graded_ideal_search(l: &GradedLieAlgebra) -> Option<Subspace> {
    let n = l.dim();
    (0..n)
        .map(|a| ideal_generated_by(&l.table, &crate::exactlin::unit_vec(n, a)))
        .find(|ideal| ideal.dim() < n)
}

/// `Z_L(x)`
pub fn centralizer(l: &StructureConstants, x: &[Rational]) -> Subspace {
    Subspace::span(l.dim(), &nullspace(&l.ad(x)))
}

/// `dim ker(ad x)` restricted to the span of the basis vectors of positive degree.
pub fn positive_part_kernel_dim(l: &GradedLieAlgebra, x: &[Rational]) -> usize {
    let pos: Vec<usize> = (0..l.dim()).filter(|&i| l.degrees[i] > 0).collect();
    if pos.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<Rational>> = pos.iter().map(|&b| l.table.bracket_basis_vec(b, x)).collect();
    pos.len() - rank(&Matrix::from_cols(&cols, l.dim()))
}

/// Certificate that a simple graded prolongation has real rank one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankOneCertificate {
    pub centralizer_dim: usize,
    /// The centralizer of `H` lies in degree 0.
    pub centralizer_in_degree_zero: bool,
    /// `B(H, H)`, as `"p/q"`.
    #[serde(serialize_with = "crate::iface::report::ser_rational")]
    pub h_norm: Rational,
    pub h_norm_positive: bool,
    pub centralizer_signature: Signature,
    /// Signature on the centralizer is `(1, dim − 1, 0)`.
    pub negative_on_complement: bool,
    pub holds: bool,
}

pub fn rank_one_certificate(l: &GradedLieAlgebra, killing: &SymmetricForm) -> RankOneCertificate {
    let z = centralizer(&l.table, &l.h);
    let zero_piece = Subspace::coordinate(l.dim(), l.piece(0));
    let in_zero = zero_piece.contains_subspace(&z);
    let h_norm = killing.eval(&l.h, &l.h);
    let h_pos = h_norm.is_positive();
    let sig = killing.restrict(z.basis()).signature();
    let neg = z.dim() >= 1 && sig == Signature::new(1, z.dim() - 1, 0);
    RankOneCertificate {
        centralizer_dim: z.dim(),
        centralizer_in_degree_zero: in_zero,
        h_norm,
        h_norm_positive: h_pos,
        centralizer_signature: sig,
        negative_on_complement: neg,
        holds: in_zero && h_pos && neg,
    }
}

/// The rank-one certificate of a completed prolongation with nonzero
/// degree-1 piece.
pub fn certify_rank_one(p: &Prolongation) -> Result<RankOneCertificate, StructureError> {
    if p.piece_dim(1) == 0 {
        return Err(StructureError::NoPositivePart);
    }
    let l = p.require_complete()?;
    Ok(rank_one_certificate(l, &killing_form(&l.table)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// The prolongation is `g + g₀`: all conformal maps are affine.
    Rigid,
    /// The prolongation is simple of real rank one.
    Iwasawa,
    /// A certificate failed.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Rigid => "RIGID",
            Verdict::Iwasawa => "IWASAWA",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub layer_dims: BTreeMap<i32, usize>,
    pub total_dim: usize,
    pub base_dim: usize,
    pub g0_dim: usize,
    pub killing_signature: Signature,
    pub radical_dim: usize,
    pub radical_h_graded: bool,
    pub centroid_dim: usize,
    pub rank_one_certificate: Option<RankOneCertificate>,
    pub notes: Vec<String>,
}

/// Structure data of a completed prolongation.
pub fn analyze(p: &Prolongation) -> Result<ClassificationReport, StructureError> {
    let l = p.algebra().ok_or(StructureError::NotApplicable)?;
    let killing = killing_form(&l.table);
    let sig = killing.signature();
    let radical = solvable_radical(&l.table)?;
    let graded = is_h_graded(l, &radical);
    let centroid = centroid_dim(&l.table);
    let g1 = p.piece_dim(1);
    let mut notes = Vec::new();
    let base_dim = p.base().dim();
    let g0_dim = p.g0().dim();

    let (verdict, cert) = if g1 == 0 {
        if p.total_dim() == base_dim + g0_dim {
            notes.push(format!(
                "prolongation is g + g0: {} = {} + {}",
                p.total_dim(),
                base_dim,
                g0_dim
            ));
            (Verdict::Rigid, None)
        } else {
            notes.push("degree-1 piece vanishes but higher pieces do not".to_string());
            (Verdict::Inconclusive, None)
        }
    } else {
        let cert = rank_one_certificate(l, &killing);
        let mut ok = true;
        if !sig.is_nondegenerate() {
            notes.push(format!(
                "Killing form is degenerate: {} null directions",
                sig.zero
            ));
            ok = false;
        }
        if !radical.is_zero() {
            notes.push(format!("solvable radical has dimension {}", radical.dim()));
            ok = false;
        }
        if centroid != 1 {
            notes.push(format!("centroid has dimension {centroid}"));
            if sig.is_nondegenerate() {
                match graded_ideal_search(l) {
                    Some(ideal) => {
                        notes.push(format!("proper graded ideal of dimension {} found", ideal.dim()))
                    }
                    None => {
                        notes.push("no proper graded ideal; simple but not absolutely simple".to_string())
                    }
                }
            }
            ok = false;
        }
        if !cert.holds {
            notes.push(format!(
                "rank-one certificate failed: centralizer in degree 0 = {}, B(H,H) > 0 = {}, signature on centralizer = ({}, {}, {})",
                cert.centralizer_in_degree_zero,
                cert.h_norm_positive,
                cert.centralizer_signature.plus,
                cert.centralizer_signature.minus,
                cert.centralizer_signature.zero
            ));
            ok = false;
        }
        if ok {
            notes.push(
                "simple (nondegenerate Killing form, centroid of dimension 1) with rank-one certificate"
                    .to_string(),
            );
        }
        (
            if ok {
                Verdict::Iwasawa
            } else {
                Verdict::Inconclusive
            },
            Some(cert),
        )
    };
    if p.g0().kind == crate::derivations::DerivationKind::Custom {
        notes.push(
            "custom g0: splittability not verified, structural conclusions are conditional".to_string(),
        );
    }

    Ok(ClassificationReport {
        verdict,
        layer_dims: p.layer_dims(),
        total_dim: p.total_dim(),
        base_dim,
        g0_dim,
        killing_signature: sig,
        radical_dim: radical.dim(),
        radical_h_graded: graded,
        centroid_dim: centroid,
        rank_one_certificate: cert,
        notes,
    })
}

/// Prolongs with `g₀ = ConfDer(g)` and classifies the result.
pub fn classify(alg: &StratifiedAlgebra) -> Result<ClassificationReport, StructureError> {
    classify_with_cap(alg, DEFAULT_MAX_DEGREE)
}

pub fn classify_with_cap(
    alg: &StratifiedAlgebra,
    max_degree: usize,
) -> Result<ClassificationReport, StructureError> {
    let p = prolong(alg, &G0Choice::Conformal, max_degree)?;
    p.require_complete()?;
    analyze(&p)
}
