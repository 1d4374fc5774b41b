use proptest::prelude::*;

use cybe_forge::lie::{build_lie_algebra, LieAlgebra};
use cybe_forge::rmatrix::{apply_gauge, is_unitary, standard_r3, verify_cybe, GaugeFactor};
use cybe_forge::roots::{build_root_system, CartanType};
use cybe_forge::uq::algebra::Gen;
use cybe_forge::uq::rewrite::{is_normal, measure, normal_word_direct, normal_word_stepwise, rewrite_step};
use cybe_forge::Scalar;

fn algebra(kind: CartanType, n: usize) -> LieAlgebra {
    build_lie_algebra(&build_root_system(kind, n).unwrap()).unwrap()
}

fn gauge_factors(dim: usize, rank: usize) -> impl Strategy<Value = Vec<GaugeFactor>> {
    let exp = (-2i64..=2, 0u32..=1, rank..dim).prop_map(|(c, degree, basis_index)| GaugeFactor::Exp {
        coeff: Scalar::from_int(c),
        degree,
        basis_index,
    });
    let torus = prop::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(3)], rank)
        .prop_map(|t| GaugeFactor::Torus(t.into_iter().map(Scalar::from_int).collect()));
    prop::collection::vec(prop_oneof![exp, torus], 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_preserves_unitarity_and_cybe_sl2(factors in gauge_factors(3, 1)) {
        let g = algebra(CartanType::A, 1);
        let y = apply_gauge(&g, &standard_r3(&g), &factors).unwrap();
        prop_assert!(is_unitary(&g, &y));
        prop_assert!(verify_cybe(&g, &y));
    }

    #[test]
    fn gauge_preserves_unitarity_sl3(factors in gauge_factors(8, 2)) {
        let g = algebra(CartanType::A, 2);
        let y = apply_gauge(&g, &standard_r3(&g), &factors).unwrap();
        prop_assert!(is_unitary(&g, &y));
    }
}

fn quantum_letter(rank: usize) -> impl Strategy<Value = Gen> {
    (0..8usize, 0..rank).prop_map(|(k, i)| match k {
        0 => Gen::E(i),
        1 => Gen::F(i),
        2 => Gen::Ed,
        3 => Gen::K(i),
        4 => Gen::KInv(i),
        5 => Gen::Kd,
        6 => Gen::KdInv,
        _ => Gen::K(i),
    })
}

proptest! {
    #[test]
    fn normal_forms_agree_and_are_stable(word in prop::collection::vec(quantum_letter(2), 0..7)) {
        let rs = build_root_system(CartanType::B, 2).unwrap();
        let (c, nf) = normal_word_direct(&rs, &word);
        prop_assert_eq!(normal_word_stepwise(&rs, &word), (c, nf.clone()));
        prop_assert!(is_normal(&nf));
        let (c2, again) = normal_word_direct(&rs, &nf);
        prop_assert_eq!(again, nf);
        prop_assert_eq!(c2, cybe_forge::uq::QScalar::one());
    }

    #[test]
    fn rewrite_steps_lower_the_measure(word in prop::collection::vec(quantum_letter(2), 1..7)) {
        let rs = build_root_system(CartanType::A, 2).unwrap();
        let mut cur = word;
        while let Some((_, next)) = rewrite_step(&rs, &cur) {
            prop_assert!(measure(&next) < measure(&cur));
            cur = next;
        }
    }
}
