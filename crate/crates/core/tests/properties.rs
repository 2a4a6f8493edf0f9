use std::sync::OnceLock;

use proptest::prelude::*;
use quadalg::presets::{Preset, Sl3Block};
use quadalg::series::{invert_series, PolyMatrix};
use quadalg::sparse::SparseVec;
use quadalg::{DenseMatrix, Field, GradedAlgebra};

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(5)), Just(Field::Prime(7))]
}

fn matrix() -> impl Strategy<Value = (Field, Vec<Vec<i64>>)> {
    (fields(), 1usize..6, 1usize..6).prop_flat_map(|(f, r, c)| {
        (Just(f), prop::collection::vec(prop::collection::vec(-4i64..5, c), r))
    })
}

fn sl3() -> &'static GradedAlgebra {
    static ALG: OnceLock<GradedAlgebra> = OnceLock::new();
    ALG.get_or_init(|| GradedAlgebra::build(&Sl3Block.presentation(Field::Rationals).unwrap(), 8).unwrap())
}

proptest! {
    #[test]
    fn rref_is_idempotent((field, rows) in matrix()) {
        let m = DenseMatrix::from_i64_rows(field, &rows);
        let once = m.rref().unwrap();
        let twice = once.reduced.rref().unwrap();
        prop_assert_eq!(&once.reduced, &twice.reduced);
        prop_assert_eq!(once.rank, m.rank());
    }

    #[test]
    fn rank_plus_nullity((field, rows) in matrix()) {
        let m = DenseMatrix::from_i64_rows(field, &rows);
        let k = m.kernel_basis().unwrap();
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        for r in 0..k.rows() {
            prop_assert!(m.apply(k.row(r)).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn series_inverse_truncates(
        entries in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 4),
        order in 0usize..8,
    ) {
        // Unipotent constant term, so the inverse exists.
        let cell = |i: usize| {
            let mut c = entries[i].clone();
            c[0] = if i == 0 || i == 3 { 1 } else { 0 };
            c
        };
        let labels = vec!["a".to_string(), "b".to_string()];
        let pm = PolyMatrix::from_i64s(labels, vec![vec![cell(0), cell(1)], vec![cell(2), cell(3)]]);
        let long = invert_series(&pm, order + 4).unwrap();
        let short = invert_series(&pm, order).unwrap();
        prop_assert_eq!(long.truncate(order), short.clone());
        prop_assert!(short.left_mul_poly(&pm).is_identity());
    }

    #[test]
    fn sl3_multiplication_is_associative(a in 0usize..72, b in 0usize..72, c in 0usize..72) {
        let alg = sl3();
        let (a, b, c) = (a % alg.dim(), b % alg.dim(), c % alg.dim());
        let unit = |i| SparseVec::unit(i, alg.field());
        let left = alg.mul_coords(&alg.mul_basis(a, b).unwrap(), &unit(c)).unwrap();
        let right = alg.mul_coords(&unit(a), &alg.mul_basis(b, c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sl3_products_respect_grading(a in 0usize..48, b in 0usize..48) {
        let alg = sl3();
        let (a, b) = (a % alg.dim(), b % alg.dim());
        let p = alg.mul_basis(a, b).unwrap();
        let degree = alg.basis()[a].degree + alg.basis()[b].degree;
        prop_assert!(p.indices().all(|i| alg.basis()[i].degree == degree));
    }
}
