use proptest::prelude::*;
use ramlab::semigroup::{FreeMon, NatAdd, NatMul};
use ramlab::structures::{ap_generate, arrangement_count, fp_generate, fs_generate, sum_subsystem, BlockSystem};

fn increasing(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::btree_set(1u64..500, 1..=max_len).prop_map(|s| s.into_iter().collect())
}

fn blocks(len: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(any::<bool>(), len * 2).prop_map(move |bits| {
        // bits[2i]: index i+1 used; bits[2i+1]: close the block after it
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut cur = Vec::new();
        for i in 0..len {
            if bits[2 * i] {
                cur.push(i + 1);
            }
            if bits[2 * i + 1] && !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        out
    })
}

proptest! {
    #[test]
    fn subsystem_sums_stay_inside(x in increasing(8), raw in blocks(8)) {
        prop_assume!(!raw.is_empty());
        let raw: Vec<Vec<usize>> = raw.into_iter().filter(|b| b.iter().all(|&t| t <= x.len())).collect();
        prop_assume!(!raw.is_empty());
        let bs = BlockSystem::new(raw).unwrap();
        let y = sum_subsystem(&x, &bs, &NatAdd::default()).unwrap();
        let fs_y = fs_generate(&y, &NatAdd::default()).unwrap();
        let fs_x = fs_generate(&x, &NatAdd::default()).unwrap();
        for v in fs_y.values() {
            prop_assert!(fs_x.contains(v));
        }
    }

    #[test]
    fn provenance_rederives(x in increasing(6)) {
        let fs = fs_generate(&x, &NatAdd::default()).unwrap();
        prop_assert!(fs.rederive(&NatAdd::default()).unwrap());
        prop_assert_eq!(fs.term_count(), (1 << x.len()) - 1);
        let small: Vec<u64> = x.iter().map(|v| v % 9 + 1).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let fp = fp_generate(&small, &NatMul).unwrap();
        prop_assert!(fp.rederive(&NatMul).unwrap());
        let ap = ap_generate(&small[..small.len().min(5)], &NatMul).unwrap();
        prop_assert!(ap.rederive(&NatMul).unwrap());
        // in a commutative semigroup AP and FP have the same values
        let fp5 = fp_generate(&small[..small.len().min(5)], &NatMul).unwrap();
        prop_assert_eq!(ap.values().collect::<Vec<_>>(), fp5.values().collect::<Vec<_>>());
    }
}

#[test]
fn ap_counts_on_distinct_letters() {
    for (k, expected) in [(1, 1), (2, 4), (3, 15), (4, 64), (5, 325)] {
        let letters: Vec<String> = ('a'..).take(k).map(String::from).collect();
        let ap = ap_generate(&letters, &FreeMon::default()).unwrap();
        assert_eq!(ap.elements.len(), expected);
        assert_eq!(ap.term_count(), expected);
        assert_eq!(arrangement_count(k), expected as u64);
    }
}

#[test]
fn blocks_reject_bad_order() {
    assert!(BlockSystem::new(vec![vec![2], vec![1]]).is_err());
    assert!(BlockSystem::new(vec![vec![1, 3], vec![2]]).is_err());
    assert!(BlockSystem::new(vec![vec![1], vec![]]).is_err());
    let json = serde_json::to_string(&BlockSystem::new(vec![vec![3, 1], vec![4]]).unwrap()).unwrap();
    assert_eq!(json, "[[1,3],[4]]");
    assert!(serde_json::from_str::<BlockSystem>("[[2],[1]]").is_err());
}
