use ramlab::{Error, SetExpr};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn parse_print_identity_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let e = SetExpr::random(&mut rng, 6);
        assert!(e.depth() <= 6);
        let text = e.to_string();
        let back = SetExpr::parse(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
        assert_eq!(back, e, "{text}");
        assert_eq!(back.to_string(), text);
    }
}

#[test]
fn eval_agrees_with_pointwise_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut evaluated = 0;
    for _ in 0..400 {
        let e = SetExpr::random(&mut rng, 5);
        let oracle = e.compile().unwrap();
        match e.eval(300) {
            Ok(w) => {
                evaluated += 1;
                for m in 1..=w.window_max() {
                    assert_eq!(w.contains(m), oracle.contains(m), "{e} at {m}");
                }
            }
            Err(Error::EmptyWindow(_)) => {}
            Err(other) => panic!("{e}: {other}"),
        }
    }
    assert!(evaluated > 300);
}

#[test]
fn windows_agree_on_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let e = SetExpr::random(&mut rng, 4);
        let (Ok(small), Ok(big)) = (e.eval(120), e.eval(400)) else { continue };
        assert!(small.window_max() <= big.window_max());
        for m in 1..=small.window_max() {
            assert_eq!(small.contains(m), big.contains(m), "{e} at {m}");
        }
    }
}

#[test]
fn whitespace_is_insignificant() {
    let a = SetExpr::parse("inter( mod(2 ,0),\n\tpow2blocks )").unwrap();
    assert_eq!(a, SetExpr::parse("inter(mod(2,0),pow2blocks)").unwrap());
}
