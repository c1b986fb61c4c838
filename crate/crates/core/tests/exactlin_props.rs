use num_traits::Zero;
use proptest::prelude::*;

use carnot::exactlin::{
    dot, inverse, min_norm_preimage, nullspace, rank, rat, rref, solve, Matrix, Rational, Subspace,
    SymmetricForm,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Sparse-ish entries so that rank deficiency actually occurs.
fn entry() -> impl Strategy<Value = Rational> {
    prop_oneof![2 => Just(Rational::zero()), 3 => rational()]
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(entry(), r * c).prop_map(move |v| Matrix::from_entries(r, c, v))
    })
}

fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(entry(), n * n).prop_map(move |v| Matrix::from_entries(n, n, v))
    })
}

fn symmetric(max: usize) -> impl Strategy<Value = Matrix> {
    square(max).prop_map(|m| m.add(&m.transpose()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rref_is_idempotent(m in matrix(5, 6)) {
        let (r, pivots) = rref(&m);
        let (rr, pivots2) = rref(&r);
        prop_assert_eq!(&r, &rr);
        prop_assert_eq!(pivots.len(), rank(&m));
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn rref_keeps_row_space(m in matrix(5, 6)) {
        let (r, _) = rref(&m);
        let a = Subspace::span(m.cols(), &m.row_vecs());
        let b = Subspace::span(m.cols(), &r.row_vecs());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn nullspace_is_kernel(m in matrix(5, 6)) {
        let ns = nullspace(&m);
        prop_assert_eq!(ns.len(), m.cols() - rank(&m));
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(Subspace::span(m.cols(), &ns).dim(), ns.len());
    }

    #[test]
    fn solve_and_min_norm(m in matrix(4, 6), x in proptest::collection::vec(rational(), 6)) {
        let x = &x[..m.cols()];
        let b = m.mul_vec(x);
        let y = solve(&m, &b).expect("b is in the column space");
        prop_assert_eq!(m.mul_vec(&y), b.clone());
        let z = min_norm_preimage(&m, &b).unwrap();
        prop_assert_eq!(m.mul_vec(&z), b);
        // orthogonal to the kernel, hence no longer than any other preimage
        for k in nullspace(&m) {
            prop_assert!(dot(&z, &k).is_zero());
        }
        prop_assert!(dot(&z, &z) <= dot(x, x));
    }

    #[test]
    fn inverse_when_full_rank(m in square(5)) {
        match inverse(&m) {
            Some(inv) => {
                prop_assert_eq!(rank(&m), m.rows());
                prop_assert_eq!(m.mul(&inv), Matrix::identity(m.rows()));
            }
            None => prop_assert!(rank(&m) < m.rows()),
        }
    }

    #[test]
    fn signature_is_a_congruence_invariant(a in symmetric(5), s in square(5)) {
        let n = a.rows();
        prop_assume!(s.rows() == n && rank(&s) == n);
        let form = SymmetricForm::new(a).unwrap();
        let sig = form.signature();
        prop_assert_eq!(sig.dim(), n);
        prop_assert_eq!(form.congruent(&s).signature(), sig);
    }

    #[test]
    fn signature_zero_count_is_corank(a in symmetric(5)) {
        let r = rank(&a);
        let sig = SymmetricForm::new(a).unwrap().signature();
        prop_assert_eq!(sig.plus + sig.minus, r);
    }
}
