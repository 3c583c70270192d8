use proptest::prelude::*;

use mekr::bijection::{forward_map, inverse_map};
use mekr::Multiset;

fn subset(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), k)
}

fn case() -> impl Strategy<Value = (usize, usize, Vec<usize>, Vec<usize>)> {
    (1usize..=12, 1usize..=8).prop_flat_map(|(m, k)| {
        let n = m + k - 1;
        (Just(m), Just(k), subset(n, k), subset(n, k))
    })
}

proptest! {
    #[test]
    fn round_trip_and_support((m, k, a, _b) in case()) {
        let f = forward_map(m, k, &a).unwrap();
        prop_assert_eq!(f.cardinality(), k);
        let low: Vec<usize> = a.iter().copied().filter(|&x| x <= m).collect();
        prop_assert_eq!(f.support(), low);
        prop_assert_eq!(inverse_map(&f).unwrap(), a);
    }

    #[test]
    fn intersecting_images_have_intersecting_preimages((m, k, a, b) in case()) {
        let fa = forward_map(m, k, &a).unwrap();
        let fb = forward_map(m, k, &b).unwrap();
        let common = fa.intersection(&fb).unwrap().support().len();
        let pre = a.iter().filter(|x| b.contains(x)).count();
        prop_assert!(pre >= common);
    }

    #[test]
    fn inverse_of_any_multiset(m in 1usize..=10, mult in proptest::collection::vec(0u32..4, 10)) {
        let mult: Vec<u32> = mult.into_iter().take(m).collect();
        let k: u32 = mult.iter().sum();
        prop_assume!(k > 0);
        let f = Multiset::from_multiplicities(mult).unwrap();
        let s = inverse_map(&f).unwrap();
        prop_assert_eq!(s.len(), k as usize);
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(*s.last().unwrap() < m + k as usize);
        prop_assert_eq!(forward_map(m, k as usize, &s).unwrap(), f);
    }
}
