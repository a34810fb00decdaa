use ramlab::family::{all_families, dual_family, is_filter, is_ramsey, Family};

#[test]
fn ramsey_iff_dual_is_filter() {
    let families = all_families(4).unwrap();
    assert_eq!(families.len(), 166);
    let mut ramsey = 0;
    for f in &families {
        let r = is_ramsey(f, false).unwrap().ramsey;
        let d = dual_family(f).unwrap();
        assert_eq!(r, is_filter(&d).filter, "{f}");
        ramsey += r as usize;
    }
    // exactly the families {E : E meets M} for the 15 nonempty M
    assert_eq!(ramsey, 15);
}

#[test]
fn double_dual() {
    for n in 1..=4 {
        for f in all_families(n).unwrap() {
            let dd = dual_family(&dual_family(&f).unwrap()).unwrap();
            assert!(f.is_subfamily(&dd));
            assert_eq!(dd, f);
        }
    }
}

#[test]
fn filter_check_matches_member_enumeration() {
    for f in all_families(4).unwrap() {
        let members = f.members().unwrap();
        let closed = members.iter().all(|&a| members.iter().all(|&b| f.contains(a & b)));
        assert_eq!(is_filter(&f).filter, closed, "{f}");
    }
}

#[test]
fn dual_matches_definition() {
    for f in all_families(4).unwrap() {
        let d = dual_family(&f).unwrap();
        let members = f.members().unwrap();
        for e in 1..16u32 {
            assert_eq!(d.contains(e), members.iter().all(|&a| a & e != 0), "{f} at {e:b}");
        }
    }
}

#[test]
fn canonical_form_is_idempotent() {
    for f in all_families(4).unwrap() {
        let again = Family::upward_closure(f.universe(), f.minimal_sets()).unwrap();
        assert_eq!(again, f);
        assert_eq!(Family::from_text(&f.to_text()).unwrap(), f);
    }
}
