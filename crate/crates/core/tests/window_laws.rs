use proptest::prelude::*;
use ramlab::WindowSet;

fn window_set() -> impl Strategy<Value = WindowSet> {
    (1u64..200).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n as usize)
            .prop_map(move |bits| WindowSet::from_predicate(n, |m| bits[m as usize - 1]).unwrap())
    })
}

fn pair() -> impl Strategy<Value = (WindowSet, WindowSet)> {
    (1u64..200).prop_flat_map(|n| {
        let v = proptest::collection::vec(any::<bool>(), n as usize);
        (v.clone(), v).prop_map(move |(a, b)| {
            (
                WindowSet::from_predicate(n, |m| a[m as usize - 1]).unwrap(),
                WindowSet::from_predicate(n, |m| b[m as usize - 1]).unwrap(),
            )
        })
    })
}

proptest! {
    #[test]
    fn de_morgan((a, b) in pair()) {
        prop_assert_eq!(a.union(&b).unwrap().complement(), a.complement().intersection(&b.complement()).unwrap());
        prop_assert_eq!(a.intersection(&b).unwrap().complement(), a.complement().union(&b.complement()).unwrap());
        prop_assert_eq!(a.difference(&b).unwrap(), a.intersection(&b.complement()).unwrap());
        prop_assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn translate_preimage_matches_definition(a in window_set(), t in 1u64..50) {
        prop_assume!(t < a.window_max());
        let p = a.translate_preimage(t).unwrap();
        prop_assert_eq!(p.window_max(), a.window_max() - t);
        for y in 1..=p.window_max() {
            prop_assert_eq!(p.contains(y), a.contains(y + t));
        }
    }

    #[test]
    fn translate_preimages_compose(a in window_set(), s in 1u64..30, t in 1u64..30) {
        prop_assume!(s + t < a.window_max());
        let twice = a.translate_preimage(s).unwrap().translate_preimage(t).unwrap();
        prop_assert_eq!(twice, a.translate_preimage(s + t).unwrap());
    }

    #[test]
    fn dilation_round_trip(a in window_set(), n in 1u64..6) {
        let back = a.dilate(n).unwrap().dilate_preimage(n);
        let w = a.window_max() / n;
        if w == 0 {
            prop_assert!(back.is_err());
        } else {
            prop_assert_eq!(back.unwrap(), a.restrict(w).unwrap());
        }
        prop_assert_eq!(a.dilate_scaled(n).unwrap().dilate_preimage(n).unwrap(), a.clone());
        let d = a.dilate(n).unwrap();
        prop_assert_eq!(d.truncated(), a.iter().any(|x| x * n > a.window_max()));
    }

    #[test]
    fn text_and_json_round_trip(a in window_set()) {
        prop_assert_eq!(WindowSet::from_text(&a.to_text()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<WindowSet>(&json).unwrap(), a.clone());
        prop_assert_eq!(a.len(), a.iter().count());
        prop_assert_eq!(a.count_upto(a.window_max()), a.len());
    }
}

#[test]
fn de_morgan_exhaustive_on_large_window() {
    let n = 10_000;
    let a = WindowSet::from_predicate(n, |m| m % 3 == 0 || m % 7 == 1).unwrap();
    let b = WindowSet::from_predicate(n, |m| (m * m) % 11 < 4).unwrap();
    assert_eq!(a.union(&b).unwrap().complement(), a.complement().intersection(&b.complement()).unwrap());
    assert_eq!(a.intersection(&b).unwrap().complement(), a.complement().union(&b.complement()).unwrap());
}
