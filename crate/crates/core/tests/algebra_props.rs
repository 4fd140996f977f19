use nlho_gcs::{Ladder, LadderPolynomial64, LadderWord};
use num_complex::Complex64;
use proptest::prelude::*;

const DIM: usize = 14;

fn word() -> impl Strategy<Value = LadderWord> {
    prop::collection::vec(prop_oneof![Just(Ladder::Raise), Just(Ladder::Lower)], 0..=4)
        .prop_map(LadderWord::new)
}

fn polynomial() -> impl Strategy<Value = LadderPolynomial64> {
    prop::collection::vec((word(), -2.0..2.0f64, -2.0..2.0f64), 1..6).prop_map(|terms| {
        let mut p = LadderPolynomial64::zero();
        for (w, re, im) in terms {
            p.add_term(w, Complex64::new(re, im));
        }
        p
    })
}

fn interior_gap(a: &LadderPolynomial64, b: &LadderPolynomial64) -> f64 {
    a.to_matrix(DIM)
        .max_abs_diff_block(&b.to_matrix(DIM), DIM - 4)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_order_preserves_the_operator(p in polynomial()) {
        let n = p.normal_order();
        prop_assert!(n.is_normal_ordered());
        prop_assert!(interior_gap(&p, &n) < 1e-12);
    }

    #[test]
    fn weyl_order_is_idempotent(p in polynomial()) {
        let w = p.weyl_order();
        prop_assert!(w.weyl_order().max_coefficient_diff(&w) < 1e-12);
    }

    #[test]
    fn normal_order_is_idempotent(p in polynomial()) {
        let n = p.normal_order();
        prop_assert!(n.normal_order().max_coefficient_diff(&n) < 1e-12);
    }

    #[test]
    fn adjoint_matches_matrix_adjoint(p in polynomial()) {
        let gap = p
            .adjoint()
            .to_matrix(DIM)
            .max_abs_diff_block(&p.to_matrix(DIM).adjoint(), DIM - 4)
            .unwrap();
        prop_assert_eq!(gap, 0.0);
        prop_assert!(p.adjoint().adjoint().max_coefficient_diff(&p) == 0.0);
    }

    #[test]
    fn product_matches_matrix_product(p in polynomial(), q in polynomial()) {
        // degree 8 words need a wider margin than 4 rows
        let dim = 24;
        let lhs = (&p * &q).to_matrix(dim);
        let rhs = p.to_matrix(dim).matmul(&q.to_matrix(dim)).unwrap();
        prop_assert!(lhs.max_abs_diff_block(&rhs, dim - 8).unwrap() < 1e-9);
    }

    #[test]
    fn weyl_symmetrization_is_self_adjoint_for_real_coefficients(r in 0usize..3, l in 0usize..3, c in -3.0..3.0f64) {
        let mut letters = vec![Ladder::Raise; r];
        letters.extend(vec![Ladder::Lower; l]);
        let mut p = LadderPolynomial64::term(LadderWord::new(letters.clone()), Complex64::new(c, 0.0));
        letters.reverse();
        let swapped: Vec<Ladder> = letters.iter().map(|x| x.adjoint()).collect();
        p.add_term(LadderWord::new(swapped), Complex64::new(c, 0.0));
        let w = p.weyl_order();
        prop_assert!(w.adjoint().max_coefficient_diff(&w) < 1e-12);
    }
}
