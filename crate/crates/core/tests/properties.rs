//! Property-based checks of the algebraic laws that must hold for all
//! inputs, not just the hand-picked examples: Koszul signs, derivations,
//! and the decomposition round trip.

use std::sync::Arc;

use proptest::prelude::*;

use symfilt::exterior::{Form, MultiIndex};
use symfilt::lefschetz::LefschetzOps;
use symfilt::model::{iw6, kt4, LieModel};
use symfilt::scalar::int;

fn homogeneous_form(dim: usize, degree: usize) -> impl Strategy<Value = Form> {
    let monomials = MultiIndex::all(dim, degree);
    let len = monomials.len();
    prop::collection::vec(-3i64..=3, len).prop_map(move |coeffs| {
        let mut form = Form::zero();
        for (ix, c) in monomials.iter().zip(coeffs) {
            if c != 0 {
                form.add_term(ix.clone(), int(c));
            }
        }
        form
    })
}

fn model_choice() -> impl Strategy<Value = LieModel> {
    prop_oneof![Just(kt4()), Just(iw6())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative(
        model in model_choice(),
        ka in 0usize..=3,
        kb in 0usize..=3,
        seeds in prop::collection::vec(-3i64..=3, 64),
    ) {
        let dim = model.dim();
        let take = |range: std::ops::Range<usize>, degree: usize| {
            let monomials = MultiIndex::all(dim, degree);
            let mut form = Form::zero();
            for (ix, c) in monomials.iter().zip(&seeds[range.start..range.end.min(seeds.len())]) {
                if *c != 0 {
                    form.add_term(ix.clone(), int(*c));
                }
            }
            form
        };
        let a = take(0..MultiIndex::all(dim, ka).len(), ka);
        let b = take(20..20 + MultiIndex::all(dim, kb).len(), kb);
        let forward = a.wedge(&b);
        let mut backward = b.wedge(&a);
        if (ka * kb) % 2 == 1 {
            backward = -&backward;
        }
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn wedge_is_associative(
        a in homogeneous_form(4, 1),
        b in homogeneous_form(4, 1),
        c in homogeneous_form(4, 2),
    ) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn differential_squares_to_zero(
        model in model_choice(),
        k in 0usize..=4,
        seeds in prop::collection::vec(-3i64..=3, 20),
    ) {
        let dim = model.dim();
        let monomials = MultiIndex::all(dim, k.min(dim));
        let mut a = Form::zero();
        for (i, ix) in monomials.iter().enumerate() {
            let c = seeds.get(i).copied().unwrap_or(0);
            if c != 0 {
                a.add_term(ix.clone(), int(c));
            }
        }
        prop_assert!(model.d(&model.d(&a)).is_zero());
    }

    #[test]
    fn leibniz_rule(
        model in model_choice(),
        ka in 0usize..=2,
        kb in 0usize..=2,
        seeds in prop::collection::vec(-2i64..=2, 40),
    ) {
        let dim = model.dim();
        let build = |offset: usize, degree: usize| {
            let monomials = MultiIndex::all(dim, degree);
            let mut form = Form::zero();
            for (i, ix) in monomials.iter().enumerate() {
                let c = seeds.get(offset + i).copied().unwrap_or(0);
                if c != 0 {
                    form.add_term(ix.clone(), int(c));
                }
            }
            form
        };
        let a = build(0, ka);
        let b = build(17, kb);
        let lhs = model.d(&a.wedge(&b));
        let mut rhs = model.d(&a).wedge(&b);
        let second = a.wedge(&model.d(&b));
        rhs = if ka % 2 == 0 { &rhs + &second } else { &rhs - &second };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decomposition_round_trip(
        model in model_choice(),
        k in 0usize..=6,
        seeds in prop::collection::vec(-3i64..=3, 20),
    ) {
        let dim = model.dim();
        let k = k.min(dim);
        let monomials = MultiIndex::all(dim, k);
        let mut a = Form::zero();
        for (i, ix) in monomials.iter().enumerate() {
            let c = seeds.get(i).copied().unwrap_or(0);
            if c != 0 {
                a.add_term(ix.clone(), int(c));
            }
        }
        let ops = LefschetzOps::new(Arc::new(model));
        let decomposition = ops.decompose(&a);
        let mut reassembled = Form::zero();
        for (j, beta) in decomposition.components() {
            // every component is primitive
            prop_assert!(ops.poisson_contract(beta).is_zero());
            reassembled = &reassembled + &ops.omega_pow_wedge(j, beta);
        }
        prop_assert_eq!(reassembled, a);
    }

    #[test]
    fn reflection_is_an_involution(
        model in model_choice(),
        k in 0usize..=6,
        seeds in prop::collection::vec(-3i64..=3, 20),
    ) {
        let dim = model.dim();
        let k = k.min(dim);
        let monomials = MultiIndex::all(dim, k);
        let mut a = Form::zero();
        for (i, ix) in monomials.iter().enumerate() {
            let c = seeds.get(i).copied().unwrap_or(0);
            if c != 0 {
                a.add_term(ix.clone(), int(c));
            }
        }
        let ops = LefschetzOps::new(Arc::new(model));
        prop_assert_eq!(ops.reflect(&ops.reflect(&a)), a);
    }
}
