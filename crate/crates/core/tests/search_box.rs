use circ16_core::circulant::{det_bareiss, CoeffVector};
use circ16_core::search::{det_fast, find_value, spectrum, spectrum_sequential, SearchBox, SearchConfig};
use num_bigint::BigInt;
use proptest::prelude::*;

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

#[test]
fn parallel_and_sequential_spectra_agree() {
    for (n, lo, hi) in [(8, -1, 1), (16, 0, 1), (4, -3, 3)] {
        let bx = SearchBox::new(n, lo, hi).unwrap();
        assert_eq!(spectrum(&bx, &cfg()).unwrap(), spectrum_sequential(&bx, &cfg()).unwrap());
    }
}

#[test]
fn recorded_witnesses_are_first_hits() {
    let bx = SearchBox::new(8, -1, 1).unwrap();
    let report = spectrum(&bx, &cfg()).unwrap();
    let mut seen = std::collections::BTreeMap::new();
    for i in 0..bx.count() {
        let v = bx.vector_at(i);
        seen.entry(det_fast(&v)).or_insert(v);
    }
    assert_eq!(report.witnesses, seen);
}

#[test]
fn find_agrees_with_spectrum() {
    let bx = SearchBox::new(16, 0, 1).unwrap();
    let report = spectrum(&bx, &cfg()).unwrap();
    for (v, w) in report.witnesses.iter().take(40) {
        assert_eq!(find_value(&BigInt::from(*v), &bx, &cfg()).unwrap().as_ref(), Some(w));
    }
    assert_eq!(find_value(&BigInt::from(2), &bx, &cfg()).unwrap(), None);
}

#[test]
fn single_job_matches_default() {
    let bx = SearchBox::new(8, -1, 1).unwrap();
    let one = SearchConfig { jobs: Some(1), ..cfg() };
    assert_eq!(spectrum(&bx, &one).unwrap(), spectrum(&bx, &cfg()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn fast_determinant_is_exact(a in prop::collection::vec(-2i64..=2, 16)) {
        prop_assert_eq!(BigInt::from(det_fast(&a)), det_bareiss(&CoeffVector::from_i64s(&a)));
    }

    #[test]
    fn vector_at_stays_in_box(i in 0u128..43_046_721) {
        let bx = SearchBox::new(16, -1, 1).unwrap();
        let v = bx.vector_at(i);
        prop_assert_eq!(v.len(), 16);
        prop_assert!(v.iter().all(|x| (-1..=1).contains(x)));
        let back = v.iter().rev().fold(0u128, |acc, x| acc * 3 + (x + 1) as u128);
        prop_assert_eq!(back, i);
    }
}
