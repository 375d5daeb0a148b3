use num_traits::ToPrimitive;
use pathcensus::analysis::tt_count;
use pathcensus::{compositions, BigCount, Engine, Engine128, Engine64, Tournament};
use proptest::prelude::*;

#[test]
fn fixed_width_engines_agree_with_big() {
    let big = Engine::new();
    let wide = Engine128::new();
    let narrow = Engine64::new();
    for p in 1..=14 {
        for c in compositions(p) {
            let b = big.value(&c).unwrap();
            assert_eq!(b.to_u128(), Some(wide.value(&c).unwrap()), "{c}");
            assert_eq!(b.to_u64(), Some(narrow.value(&c).unwrap()), "{c}");
        }
    }
}

#[test]
fn u64_overflow_is_reported_not_wrapped() {
    let narrow = Engine64::new();
    let c = pathcensus::Composition::ones(25);
    assert!(narrow.value(&c).is_err());
    assert!(Engine::new().value(&c).unwrap().to_u64().is_none());
}

#[test]
fn cache_file_round_trip_preserves_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo");
    let first = Engine::new();
    first.fill_to_total(11).unwrap();
    first.save_cache(&path).unwrap();

    let second = Engine::new();
    second.load_cache(&path).unwrap();
    assert_eq!(first.snapshot(), second.snapshot());
    for c in compositions(11) {
        assert_eq!(first.value(&c).unwrap(), second.value(&c).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_census_is_complement_invariant(n in 3usize..=7, seed in any::<u64>()) {
        let t = Tournament::random(n, seed).unwrap();
        let a = t.census::<BigCount>().unwrap();
        let b = t.complement().census::<BigCount>().unwrap();
        prop_assert_eq!(&a, &b);
        let total: u64 = (1..=n as u64).product();
        prop_assert_eq!(a.total(), BigCount::from(total / 2));
    }

    #[test]
    fn census_text_round_trip(n in 2usize..=9, seed in any::<u64>()) {
        let t = Tournament::random(n, seed).unwrap();
        let back: Tournament = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn transitive_census_matches_prediction(bits in 0u64..(1 << 8)) {
        let n = 9;
        let signs: Vec<bool> = (0..n - 1).map(|i| bits >> i & 1 == 1).collect();
        let a = pathcensus::SignedType::from_signs(&signs).unwrap();
        let f = Engine::new();
        let t = Tournament::transitive(n).unwrap();
        prop_assert_eq!(t.count_type::<BigCount>(&a).unwrap(), tt_count(&f, n, &a).unwrap());
    }
}
