use circ16_core::circulant::{cyclic_convolve, det_bareiss, det_via_norms, CoeffVector};
use circ16_core::classifier::{classify, verify_verdict};
use circ16_core::error::WitnessError;
use circ16_core::number_theory::FactorConfig;
use circ16_core::witness::build_witness;
use num_bigint::BigInt;
use proptest::prelude::*;

fn cfg() -> FactorConfig {
    FactorConfig::default()
}

fn witness_for(v: &BigInt) -> CoeffVector {
    let verdict = classify(v, &cfg()).unwrap();
    assert!(verdict.member, "{v}");
    build_witness(&verdict).unwrap().vector
}

#[test]
fn large_members_have_witnesses() {
    let p = BigInt::from(1_000_000_021i64);
    let values = [
        BigInt::from(64) * &p,
        (BigInt::from(1) << 127) - 1,
        BigInt::from(-128) * BigInt::from(1_000_003),
        BigInt::from(64) * BigInt::from(1_000_003) * BigInt::from(1_000_003),
        BigInt::from(64 * 5 * 7 * 7 * 23),
    ];
    for v in values {
        assert_eq!(det_bareiss(&witness_for(&v)), v);
    }
}

#[test]
fn obstructed_values_refuse_witnesses() {
    for v in [64i64, -64, 192, 448, 64 * 49, 64 * 7 * 23, 7232, 64 * 3 * 11] {
        let verdict = classify(&BigInt::from(v), &cfg()).unwrap();
        assert!(!verdict.member, "{v}");
        verify_verdict(&verdict).unwrap();
        assert!(matches!(build_witness(&verdict), Err(WitnessError::NotMember(_))), "{v}");
    }
}

#[test]
fn verdicts_do_not_depend_on_seed() {
    for v in [-7232i64, 2880, 64 * 97, 1 << 20, 64 * 113, 999_999] {
        let v = BigInt::from(v);
        let a = classify(&v, &FactorConfig::with_seed(1)).unwrap();
        let b = classify(&v, &FactorConfig::with_seed(99)).unwrap();
        assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn every_member_round_trips(v in -200_000i64..200_000) {
        let v = BigInt::from(v);
        let verdict = classify(&v, &cfg()).unwrap();
        match build_witness(&verdict) {
            Ok(w) => {
                prop_assert!(verdict.member);
                prop_assert_eq!(det_bareiss(&w.vector), v);
            }
            Err(e) => {
                prop_assert!(!verdict.member);
                prop_assert!(matches!(e, WitnessError::NotMember(_)));
            }
        }
    }

    #[test]
    fn members_are_closed_under_products(x in -3000i64..3000, y in -3000i64..3000) {
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        let (vx, vy) = (classify(&x, &cfg()).unwrap(), classify(&y, &cfg()).unwrap());
        prop_assume!(vx.member && vy.member);
        let product = cyclic_convolve(&witness_for(&x), &witness_for(&y)).unwrap();
        let xy = &x * &y;
        prop_assert_eq!(det_bareiss(&product), xy.clone());
        prop_assert!(classify(&xy, &cfg()).unwrap().member);
    }

    #[test]
    fn norm_route_matches_elimination(a in prop::collection::vec(-1000i64..1000, 16)) {
        let v = CoeffVector::from_i64s(&a);
        prop_assert_eq!(det_via_norms(&v).unwrap(), det_bareiss(&v));
    }
}
