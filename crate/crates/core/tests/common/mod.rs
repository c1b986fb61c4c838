//! Shared fixtures, random generators, an independent prolongation solver,
//! and one check per acceptance criterion. Each check returns a one-line
//! summary on success and the first failure otherwise.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use carnot::algebra::{StratifiedAlgebra, ValidationOptions};
use carnot::derivations::{conf_derivations, is_skew_on_all_layers, iso_derivations, DerivationSpace};
use carnot::exactlin::{
    dot, int, is_zero_vec, nullspace, rat, unit_vec, zero_vec, Matrix, Rational, Signature,
};
use carnot::graded::GradedMap;
use carnot::iface::catalog::{catalog, Fixture};
use carnot::lie::GradedLieAlgebra;
use carnot::metric::{induced_gram, minimal_lift, tensor_projection_matrix, InnerProductAssignment};
use carnot::prolong::{prolong, G0Choice, Prolongation, DEFAULT_MAX_DEGREE};
use carnot::structure::{
    centroid_dim, classify, is_h_graded, killing_form, positive_part_kernel_dim, rank_one_certificate,
    solvable_radical, Verdict,
};

pub type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=7))
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng)).collect()
}

/// A rational orthogonal matrix: Givens rotations with Pythagorean angles
/// followed by a signed permutation.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut q = Matrix::identity(n);
    if n >= 2 {
        for _ in 0..3 * n {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let t = rat(rng.random_range(-6..=6), rng.random_range(1..=6));
            let d = Rational::one() + &t * &t;
            let c = (Rational::one() - &t * &t) / &d;
            let s = (int(2) * &t) / &d;
            let mut g = Matrix::identity(n);
            g[(a, a)] = c.clone();
            g[(b, b)] = c;
            g[(a, b)] = -s.clone();
            g[(b, a)] = s;
            q = g.mul(&q);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut p = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = if rng.random_bool(0.5) { int(1) } else { int(-1) };
    }
    let q = p.mul(&q);
    assert_eq!(q.transpose().mul(&q), Matrix::identity(n));
    q
}

pub fn conformal(alg: &StratifiedAlgebra) -> DerivationSpace {
    conf_derivations(alg, &InnerProductAssignment::canonical(alg).unwrap())
}

pub fn conformal_prolongation(alg: &StratifiedAlgebra) -> Prolongation {
    prolong(alg, &G0Choice::Conformal, DEFAULT_MAX_DEGREE).unwrap()
}

/// Layer dimensions of `Prol(g, g₀)` by a different route: every block of a
/// degree-`k` map is an unknown, and the derivation identity is imposed on
/// all basis pairs of `g`. Stops at the first zero layer or after `cap`
/// positive layers.
pub fn oracle_positive_dims(alg: &StratifiedAlgebra, g0: &[GradedMap], cap: usize) -> Vec<usize> {
    let s = alg.step();
    let n = alg.dim();
    // pieces[d] for d ≥ 0: basis of degree-d maps
    let mut pieces: Vec<Vec<GradedMap>> = vec![g0.to_vec()];
    let piece_dim = |pieces: &Vec<Vec<GradedMap>>, d: i32| -> usize {
        if d < 0 {
            if (-d) as usize <= s {
                alg.layer_dim((-d) as usize)
            } else {
                0
            }
        } else {
            pieces.get(d as usize).map_or(0, Vec::len)
        }
    };
    let mut dims = Vec::new();
    for k in 1..=cap as i32 {
        // unknown layout: block p (1..=s) is piece_dim(k-p) x d_p, row-major
        let shapes: Vec<(usize, usize)> = (1..=s)
            .map(|p| (piece_dim(&pieces, k - p as i32), alg.layer_dim(p)))
            .collect();
        let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
        if total == 0 {
            dims.push(0);
            break;
        }
        let unknown_map = |q: usize| -> GradedMap {
            let mut blocks: Vec<Matrix> = shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
            let mut rest = q;
            for (p, &(r, c)) in shapes.iter().enumerate() {
                if rest < r * c {
                    blocks[p][(rest / c, rest % c)] = Rational::one();
                    break;
                }
                rest -= r * c;
            }
            GradedMap::new(k, blocks)
        };
        // [w, e] for w of degree d given by coordinates, e a basis vector of g
        let bracket_with =
            |pieces: &Vec<Vec<GradedMap>>, d: i32, w: &[Rational], e: usize| -> (i32, Vec<Rational>) {
                let (q, i) = alg.label(e);
                if d >= 0 {
                    let out = d - q as i32;
                    let mut v = zero_vec(piece_dim(pieces, out));
                    for (c, u) in w.iter().zip(&pieces[d as usize]) {
                        if c.is_zero() || v.is_empty() {
                            continue;
                        }
                        let col = u.block(q).col(i - 1);
                        for (a, b) in v.iter_mut().zip(&col) {
                            *a += c * b;
                        }
                    }
                    (out, v)
                } else {
                    let p = (-d) as usize;
                    let x = alg.embed(p, w);
                    let br = alg.bracket(&x, &unit_vec(n, e));
                    let out = p + q;
                    if out > s {
                        (-(out as i32), Vec::new())
                    } else {
                        (-(out as i32), alg.component(&br, out))
                    }
                }
            };
        let residual = |u: &GradedMap| -> Vec<Rational> {
            let mut res = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    let (p, _) = alg.label(a);
                    let (q, _) = alg.label(b);
                    let target = k - (p + q) as i32;
                    let tdim = piece_dim(&pieces, target);
                    if tdim == 0 {
                        continue;
                    }
                    let mut lhs = zero_vec(tdim);
                    if p + q <= s {
                        let br = alg.component(&alg.table().basis_bracket(a, b), p + q);
                        lhs = u.block(p + q).mul_vec(&br);
                    }
                    let ua = u.block(p).col(a - alg.layer_range(p).start);
                    let ub = u.block(q).col(b - alg.layer_range(q).start);
                    // [u a, b] + [a, u b] = [u a, b] − [u b, a]
                    let (_, t1) = bracket_with(&pieces, k - p as i32, &ua, b);
                    let (_, t2) = bracket_with(&pieces, k - q as i32, &ub, a);
                    for (i, l) in lhs.iter().enumerate() {
                        let x = t1.get(i).cloned().unwrap_or_else(Rational::zero);
                        let y = t2.get(i).cloned().unwrap_or_else(Rational::zero);
                        res.push(l - x + y);
                    }
                }
            }
            res
        };
        let candidates: Vec<GradedMap> = (0..total).map(unknown_map).collect();
        let cols: Vec<Vec<Rational>> = candidates.iter().map(&residual).collect();
        let rows = cols[0].len();
        let layer: Vec<GradedMap> = if rows == 0 {
            candidates.clone()
        } else {
            nullspace(&Matrix::from_cols(&cols, rows))
                .iter()
                .map(|x| GradedMap::linear_combination(x, &candidates))
                .collect()
        };
        dims.push(layer.len());
        if layer.is_empty() {
            break;
        }
        pieces.push(layer);
    }
    dims
}

pub fn killing_block_zero(l: &GradedLieAlgebra) -> Result<(), String> {
    let b = killing_form(&l.table);
    for x in 0..l.dim() {
        for y in 0..l.dim() {
            if l.degrees[x] + l.degrees[y] != 0 && !b.matrix()[(x, y)].is_zero() {
                return Err(format!(
                    "B(e{x}, e{y}) = {} with degrees {} and {}",
                    b.matrix()[(x, y)],
                    l.degrees[x],
                    l.degrees[y]
                ));
            }
        }
    }
    Ok(())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

pub const DICHOTOMY: [(Fixture, Verdict); 6] = [
    (Fixture::Abelian(3), Verdict::Iwasawa),
    (Fixture::Heisenberg(1), Verdict::Iwasawa),
    (Fixture::Heisenberg(2), Verdict::Iwasawa),
    (Fixture::QuaternionicHeisenberg, Verdict::Iwasawa),
    (Fixture::FreeNilpotent(3, 2), Verdict::Rigid),
    (Fixture::Engel, Verdict::Rigid),
];

pub fn criterion_dichotomy() -> Outcome {
    let mut slowest = Duration::ZERO;
    for (f, expected) in DICHOTOMY {
        let (r, t) = timed(|| classify(&f.build()));
        let r = r.map_err(|e| format!("{f}: {e}"))?;
        ensure!(
            r.verdict == expected,
            "{f}: verdict {:?}, expected {:?}",
            r.verdict,
            expected
        );
        ensure!(t < Duration::from_secs(10), "{f}: took {t:?}");
        slowest = slowest.max(t);
    }
    Ok(format!("6 fixtures, slowest {slowest:.2?}"))
}

pub fn criterion_dimensions() -> Outcome {
    // dim so(n+1,1) = (n+1)(n+2)/2, dim su(n+1,1) = (n+2)² − 1, dim sp(n+1,1) = (n+2)(2n+5)
    let so = |n: usize| (n + 1) * (n + 2) / 2;
    let su = |n: usize| (n + 2) * (n + 2) - 1;
    let sp = |n: usize| (n + 2) * (2 * n + 5);
    let cases = [
        (Fixture::Abelian(3), so(3)),
        (Fixture::Heisenberg(1), su(1)),
        (Fixture::QuaternionicHeisenberg, sp(1)),
    ];
    for (f, want) in cases {
        let p = conformal_prolongation(&f.build());
        ensure!(!p.is_truncated(), "{f}: truncated");
        ensure!(
            p.total_dim() == want,
            "{f}: total dim {}, expected {want}",
            p.total_dim()
        );
    }
    let p = conformal_prolongation(&Fixture::Heisenberg(1).build());
    let profile: Vec<usize> = p.layer_dims().values().copied().collect();
    ensure!(profile == [1, 2, 2, 2, 1], "heisenberg(1) profile {profile:?}");
    Ok("10, 8 [1,2,2,2,1], 21".to_string())
}

pub fn metric_fixtures() -> Vec<Fixture> {
    catalog()
}

/// `‖Pⱼτ‖ ≤ ‖τ‖` on random tensors and `‖lift(W)‖ = ‖W‖` on basis vectors.
pub fn check_metric_contraction(f: Fixture, samples: usize, seed: u64) -> Result<usize, String> {
    let alg = f.build();
    let mut rng = rng(seed);
    let mut count = 0;
    for j in 1..=alg.step() {
        let p = tensor_projection_matrix(&alg, j).unwrap();
        let g = induced_gram(&alg, j).unwrap();
        for _ in 0..samples {
            let tau = random_vec(&mut rng, p.cols());
            let w = p.mul_vec(&tau);
            let lhs = g.eval(&w, &w);
            let rhs = dot(&tau, &tau);
            ensure!(lhs <= rhs, "{f}, layer {j}: ‖Pτ‖² = {lhs} > ‖τ‖² = {rhs}");
            count += 1;
        }
        for b in 0..alg.layer_dim(j) {
            let e = unit_vec(alg.layer_dim(j), b);
            let lift = minimal_lift(&alg, j, &e).unwrap();
            ensure!(
                p.mul_vec(&lift) == e,
                "{f}, layer {j}: lift of basis vector {b} misses"
            );
            ensure!(
                dot(&lift, &lift) == g.eval(&e, &e),
                "{f}, layer {j}: ‖lift‖² = {} but ‖W‖² = {}",
                dot(&lift, &lift),
                g.eval(&e, &e)
            );
        }
    }
    Ok(count)
}

/// The Gram matrices do not change under an orthogonal change of basis of `g₋₁`.
pub fn check_base_change(f: Fixture, changes: usize, seed: u64) -> Result<(), String> {
    let alg = f.build();
    let reference = InnerProductAssignment::canonical(&alg).unwrap();
    let mut rng = rng(seed);
    for _ in 0..changes {
        let q = random_orthogonal(&mut rng, alg.layer_dim(1));
        let changed = alg.change_first_layer_basis(&q).unwrap();
        ensure!(
            changed.validate(ValidationOptions::default()).is_valid(),
            "{f}: changed algebra invalid"
        );
        let m = InnerProductAssignment::canonical(&changed).unwrap();
        ensure!(m == reference, "{f}: Gram matrices changed under {q:?}");
    }
    Ok(())
}

pub fn criterion_metric() -> Outcome {
    let h = Fixture::Heisenberg(1).build();
    let m = InnerProductAssignment::canonical(&h).unwrap();
    let z = m.norm_squared(&h, &unit_vec(3, 2));
    ensure!(z == rat(1, 2), "heisenberg ⟨Z,Z⟩ = {z}");
    let mut tensors = 0;
    for (i, f) in metric_fixtures().into_iter().enumerate() {
        let per_layer = 200;
        tensors += check_metric_contraction(f, per_layer, 100 + i as u64)?;
        check_base_change(f, 20, 200 + i as u64)?;
    }
    Ok(format!(
        "⟨Z,Z⟩ = 1/2, {tensors} tensors, 20 base changes per fixture"
    ))
}

pub fn check_derivations(f: Fixture) -> Result<usize, String> {
    let alg = f.build();
    let metric = InnerProductAssignment::canonical(&alg).unwrap();
    let iso = iso_derivations(&alg, &metric);
    for (i, d) in iso.basis.iter().enumerate() {
        ensure!(
            is_skew_on_all_layers(d, &metric),
            "{f}: IsoDer element {i} is not skew on every layer"
        );
    }
    let conf = conf_derivations(&alg, &metric);
    let h = alg.grading_derivation();
    for (i, d) in conf.basis.iter().enumerate() {
        ensure!(h.commutator(d).is_zero(), "{f}: [H, D{i}] ≠ 0");
    }
    ensure!(conf.closure_defect().is_none(), "{f}: ConfDer not closed");
    ensure!(conf.check(&alg).is_ok(), "{f}: ConfDer check failed");
    Ok(conf.dim())
}

pub fn criterion_derivations() -> Outcome {
    let expected = [
        (Fixture::Heisenberg(1), 2),
        (Fixture::Abelian(3), 4),
        (Fixture::FreeNilpotent(3, 2), 4),
    ];
    for f in catalog() {
        let dim = check_derivations(f)?;
        if let Some((_, want)) = expected.iter().find(|(g, _)| *g == f) {
            ensure!(dim == *want, "{f}: ConfDer dimension {dim}, expected {want}");
        }
    }
    Ok("skew on all layers, [H, ConfDer] = 0, dims 2, 4, 4".to_string())
}

/// Structural checks on one completed conformal prolongation.
pub fn check_prolongation(f: Fixture) -> Result<(), String> {
    let p = conformal_prolongation(&f.build());
    let l = p.require_complete().map_err(|e| format!("{f}: {e}"))?;
    ensure!(
        l.table.antisymmetry_failures().is_empty(),
        "{f}: bracket not antisymmetric"
    );
    ensure!(l.table.jacobi_holds_all_triples(), "{f}: Jacobi fails");
    let ad_h = l.table.ad(&l.h);
    let mut expected = Matrix::zeros(l.dim(), l.dim());
    for (i, &d) in l.degrees.iter().enumerate() {
        expected[(i, i)] = int(-(d as i64));
    }
    ensure!(ad_h == expected, "{f}: ad(H) is not −k on degree k");
    for layer in p.positive_layers() {
        ensure!(
            layer.first_component_rank() == layer.dim(),
            "{f}: degree {} has elements killing g₋₁",
            layer.degree
        );
    }
    let g0_cols: Vec<Vec<Rational>> = p
        .g0()
        .basis
        .iter()
        .map(|d| d.block(1).entries().to_vec())
        .collect();
    if !g0_cols.is_empty() {
        let r = carnot::exactlin::rank(&Matrix::from_cols(&g0_cols, g0_cols[0].len()));
        ensure!(r == p.g0().dim(), "{f}: g0 has elements killing g₋₁");
    }
    let top = p.positive_layers().len();
    for k in [top + 1, top + 2] {
        ensure!(p.prolong_step(k).dim() == 0, "{f}: degree {k} does not vanish");
    }
    killing_block_zero(l).map_err(|e| format!("{f}: {e}"))?;
    Ok(())
}

pub fn criterion_prolongation() -> Outcome {
    let (r, t) = timed(|| catalog().into_iter().try_for_each(check_prolongation));
    r?;
    ensure!(t < Duration::from_secs(120), "suite took {t:?}");
    Ok(format!("{} prolongations in {t:.2?}", catalog().len()))
}

pub fn criterion_structure() -> Outcome {
    let (mut iwasawa, mut rigid) = (0, 0);
    for f in catalog() {
        let alg = f.build();
        let p = conformal_prolongation(&alg);
        let l = p.require_complete().map_err(|e| format!("{f}: {e}"))?;
        let b = killing_form(&l.table);
        let radical = solvable_radical(&l.table).map_err(|e| format!("{f}: {e}"))?;
        match f.expected() {
            Verdict::Iwasawa => {
                let sig = b.signature();
                ensure!(
                    sig.zero == 0,
                    "{f}: Killing form has {} null directions",
                    sig.zero
                );
                ensure!(radical.is_zero(), "{f}: radical of dimension {}", radical.dim());
                let c = centroid_dim(&l.table);
                ensure!(c == 1, "{f}: centroid dimension {c}");
                let cert = rank_one_certificate(l, &b);
                let z = cert.centralizer_dim;
                ensure!(
                    cert.centralizer_signature == Signature::new(1, z - 1, 0),
                    "{f}: signature on centralizer {:?}",
                    cert.centralizer_signature
                );
                ensure!(cert.holds, "{f}: rank-one certificate fails: {cert:?}");
                iwasawa += 1;
            }
            Verdict::Rigid | Verdict::Inconclusive => {
                let conf = conformal(&alg);
                ensure!(
                    p.total_dim() == alg.dim() + conf.dim(),
                    "{f}: dim p = {} but dim g + dim ConfDer = {}",
                    p.total_dim(),
                    alg.dim() + conf.dim()
                );
                ensure!(is_h_graded(l, &radical), "{f}: radical not H-graded");
                rigid += 1;
            }
        }
    }
    Ok(format!(
        "{iwasawa} IWASAWA certified, {rigid} RIGID dimension and radical checks"
    ))
}

/// `ad X` is injective on the positive part for central `X`.
pub fn check_central_injectivity(f: Fixture, random: usize, seed: u64) -> Result<usize, String> {
    let alg = f.build();
    let p = conformal_prolongation(&alg);
    let l = p.require_complete().map_err(|e| format!("{f}: {e}"))?;
    let center = alg.center();
    let mut checked = 0;
    for (i, v) in center.basis().iter().enumerate() {
        let k = positive_part_kernel_dim(l, &p.embed_base(v));
        ensure!(k == 0, "{f}: central direction {i} has kernel of dimension {k}");
        checked += 1;
    }
    let mut rng = rng(seed);
    let mut done = 0;
    while done < random {
        let coeffs = random_vec(&mut rng, center.dim());
        let x = carnot::lie::StructureConstants::combine(alg.dim(), &coeffs, center.basis());
        if is_zero_vec(&x) {
            continue;
        }
        let k = positive_part_kernel_dim(l, &p.embed_base(&x));
        ensure!(k == 0, "{f}: central X = {x:?} has kernel of dimension {k}");
        done += 1;
    }
    Ok(checked + done)
}

pub fn criterion_central_injectivity() -> Outcome {
    let mut total = 0;
    for (i, f) in catalog()
        .into_iter()
        .filter(|f| f.expected() == Verdict::Iwasawa)
        .enumerate()
    {
        total += check_central_injectivity(f, 100, 300 + i as u64)?;
    }
    Ok(format!("{total} central elements, all injective"))
}

pub fn criterion_negative_control() -> Outcome {
    let alg = Fixture::Abelian(3).build();
    let p = prolong(&alg, &G0Choice::StrataPreserving, 3).map_err(|e| e.to_string())?;
    ensure!(p.is_truncated(), "not truncated");
    ensure!(p.algebra().is_none(), "a bracket table was produced");
    let dims: BTreeMap<i32, usize> = p.layer_dims();
    for k in 1..=3 {
        ensure!(dims.get(&k).copied().unwrap_or(0) > 0, "degree {k} is zero");
    }

    let path = std::env::temp_dir().join(format!("carnot-negative-control-{}.json", std::process::id()));
    let file = carnot::iface::format::AlgebraFile::from_algebra("abelian(3)", &alg);
    std::fs::write(&path, file.to_json()).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = [
        "carnot",
        "--format",
        "json",
        "prolong",
        path.to_str().unwrap(),
        "--g0",
        "der",
        "--max-degree",
        "3",
    ];
    let code = carnot::iface::cli::run(args, &mut out, &mut err);
    let _ = std::fs::remove_file(&path);
    ensure!(code == 2, "exit code {code}");
    let json: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure!(
        json["truncated"] == serde_json::Value::Bool(true),
        "report not marked truncated"
    );
    ensure!(json.get("verdict").is_none(), "report carries a verdict");
    Ok(format!(
        "layers 1..3 of dims {:?}, exit 2",
        [dims[&1], dims[&2], dims[&3]]
    ))
}
