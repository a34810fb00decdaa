//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ramlab::builder::{brute_force, build, verify_certificate, BuildOutcome, BuildRequest, Structure, XRule};
use ramlab::chain::{dilate_chain, verify_chain, Carrier, ChainCertificate, FPred};
use ramlab::family::{all_families, dual_family, is_filter, is_ramsey};
use ramlab::properties::{
    check_jset_commutative, check_jset_noncommutative, check_piecewise_syndetic, check_syndetic, check_thick,
    verify_jset, verify_jset_product, verify_piecewise_syndetic, verify_thick, ProductSearch, ProductWitness, Query,
    SeqRule, Status, Witness,
};
use ramlab::semigroup::{FreeMon, NatAdd, NatRing};
use ramlab::structures::ap_generate;
use ramlab::{SetExpr, WindowSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit_ms: u64, what: &str) -> Result<(), String> {
    ensure(t <= Duration::from_millis(limit_ms), || format!("{what} took {t:?}, limit {limit_ms} ms"))
}

fn set(expr: &str, n: u64) -> WindowSet {
    SetExpr::parse(expr).unwrap().eval(n).unwrap()
}

fn duality_sweep() -> Outcome {
    let start = Instant::now();
    let fams = all_families(4).map_err(|e| e.to_string())?;
    let mut ramsey = 0;
    for f in &fams {
        let r = is_ramsey(f, false).map_err(|e| e.to_string())?.ramsey;
        let filt = is_filter(&dual_family(f).map_err(|e| e.to_string())?).filter;
        ensure(r == filt, || format!("{f}: ramsey {r}, dual filter {filt}"))?;
        ramsey += r as usize;
    }
    within(start.elapsed(), 5000, "sweep")?;
    ensure(fams.len() == 166, || format!("{} families on 4 elements, expected 166", fams.len()))?;
    Ok(format!("{} families, {ramsey} Ramsey, 0 exceptions", fams.len()))
}

fn worked_examples() -> Outcome {
    let mut parts = Vec::new();

    let t = Instant::now();
    let blocks = set("pow2blocks", 10_000);
    let f: Vec<u64> = (0..=5).collect();
    let v = check_thick(&blocks, &f).map_err(|e| e.to_string())?;
    let Some(Witness::Translate { x }) = v.witness else { return Err(format!("thick: {:?}", v.status)) };
    ensure(verify_thick(&blocks, &f, x), || format!("thick witness {x} does not verify"))?;
    within(t.elapsed(), 1000, "thick")?;
    parts.push(format!("thick x={x}"));

    let t = Instant::now();
    let evens = set("mod(2,0)", 10_000);
    let v = check_syndetic(&evens, &[1, 2]).map_err(|e| e.to_string())?;
    ensure(v.status == Status::HoldsWithWitness && Query::Syndetic { g: vec![1, 2] }.reverify(&evens, &v), || {
        format!("syndetic: {:?}", v.status)
    })?;
    within(t.elapsed(), 1000, "syndetic")?;
    parts.push("syndetic covered".to_string());

    let t = Instant::now();
    let inter = set("inter(mod(2,0),pow2blocks)", 10_000);
    let v = check_piecewise_syndetic(&inter, &[1, 2], &[0, 1, 2]).map_err(|e| e.to_string())?;
    let Some(Witness::Translate { x }) = v.witness else { return Err(format!("ps: {:?}", v.status)) };
    ensure(verify_piecewise_syndetic(&inter, &[1, 2], &[0, 1, 2], x), || format!("ps witness {x} does not verify"))?;
    within(t.elapsed(), 1000, "ps")?;
    parts.push(format!("ps x={x}"));
    Ok(parts.join(", "))
}

fn ap_counts() -> Outcome {
    let t = Instant::now();
    let letters = ['a', 'b', 'c', 'd', 'e'];
    let inst = FreeMon { alphabet: letters.to_vec(), allow_identity: false };
    let mut got = Vec::new();
    for k in 1..=5 {
        let x: Vec<String> = letters[..k].iter().map(|c| c.to_string()).collect();
        got.push(ap_generate(&x, &inst).map_err(|e| e.to_string())?.elements.len());
    }
    within(t.elapsed(), 1000, "ap")?;
    ensure(got == [1, 4, 15, 64, 325], || format!("counts {got:?}"))?;
    Ok(format!("counts {got:?}"))
}

fn builder() -> Outcome {
    let t = Instant::now();
    let ring = NatRing::default();
    let evens = |v: &u64| v.is_multiple_of(2);
    let req = BuildRequest {
        ring: &ring,
        x_rule: "pow2".into(),
        x: XRule::Pow2.nat_prefix(12).map_err(|e| e.to_string())?,
        member: &evens,
        set: "mod(2,0)".into(),
        k: 5,
        structure: Structure::FsFp,
        budget: 100_000,
        seed: 0,
        exhaustive: false,
    };
    let BuildOutcome::Built { certificate, .. } = build(&req).map_err(|e| e.to_string())? else {
        return Err("k=5 build failed".into());
    };
    let check = verify_certificate(&certificate, &req).map_err(|e| e.to_string())?;
    ensure(check.ok && certificate.all_verified, || format!("certificate check: {:?}", check.first_violation))?;
    ensure(certificate.fs_terms == 31 && certificate.fp_or_ap_terms == 31, || {
        format!("{} sums, {} products", certificate.fs_terms, certificate.fp_or_ap_terms)
    })?;
    ensure(certificate.fs_elements.iter().chain(&certificate.fp_or_ap_elements).all(|v| v % 2 == 0), || {
        "odd element in certificate".into()
    })?;
    within(t.elapsed(), 1000, "build")?;

    let odds = |v: &u64| v % 2 == 1;
    let neg = BuildRequest {
        x: XRule::Pow2.nat_prefix(6).map_err(|e| e.to_string())?,
        member: &odds,
        set: "mod(2,1)".into(),
        k: 2,
        exhaustive: true,
        ..req
    };
    let BuildOutcome::Failed(f) = build(&neg).map_err(|e| e.to_string())? else {
        return Err("negative control built a certificate".into());
    };
    ensure(f.nonexistence, || "negative control did not prove nonexistence".into())?;
    let oracle = brute_force(&neg).map_err(|e| e.to_string())?;
    ensure(oracle.is_none(), || format!("brute force found {oracle:?}"))?;
    Ok(format!("y={:?}, 31 sums and 31 products even; odd control refuted by both", certificate.y))
}

fn super_increasing(rng: &mut ChaCha8Rng, k: usize) -> Vec<u64> {
    let mut x = Vec::new();
    let mut sum = 0;
    for _ in 0..k {
        let v = sum + rng.gen_range(1..=6);
        x.push(v);
        sum += v;
    }
    x
}

fn passing_fixture(rng: &mut ChaCha8Rng) -> ChainCertificate {
    if rng.gen_bool(0.7) {
        let k = rng.gen_range(3..=6);
        let x = super_increasing(rng, k);
        let fpred = ["nonempty", "ip 1", "thick 0", "ap 1"][rng.gen_range(0..4)].parse().unwrap();
        ChainCertificate::fs_tails(&x, x.iter().sum(), fpred).unwrap()
    } else {
        let m = rng.gen_range(2..=30u64);
        let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
        let d = divisors[rng.gen_range(0..divisors.len())];
        let g: Vec<u64> = (0..m).filter(|v| v % d == 0).collect();
        ChainCertificate::constant(Carrier::Cyclic { modulus: m }, g, rng.gen_range(1..=4), FPred::Nonempty).unwrap()
    }
}

fn chains() -> Outcome {
    let sub = ChainCertificate::constant(Carrier::Cyclic { modulus: 12 }, vec![0, 3, 6, 9], 4, FPred::Nonempty)
        .map_err(|e| e.to_string())?;
    let r = verify_chain(&sub);
    ensure(r.verified, || format!("subgroup: {:?}", r.failure))?;
    let x: Vec<u64> = (1..=12).map(|n| 1 << n).collect();
    let tail = ChainCertificate::fs_tails(&x, 8192, FPred::Nonempty).map_err(|e| e.to_string())?;
    let r = verify_chain(&tail);
    ensure(r.verified, || format!("fs tails: {:?}", r.failure))?;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..100 {
        let c = passing_fixture(&mut rng);
        let r = verify_chain(&c);
        ensure(r.verified, || format!("fixture {i}: {:?}", r.failure))?;
        for n in [2, 3, 5] {
            let d = dilate_chain(&c, n).map_err(|e| e.to_string())?;
            let r = verify_chain(&d);
            ensure(r.verified, || format!("fixture {i} dilated by {n}: {:?}", r.failure))?;
        }
    }
    Ok("subgroup, fs tails and 100 fixtures x {2,3,5} verify".into())
}

fn jset_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inst = NatAdd { with_zero: true };
    let mut passes = 0;
    for i in 0..200 {
        let n = rng.gen_range(8..=16);
        let density = rng.gen_range(0.05..0.5);
        let set = WindowSet::from_predicate(n, |_| rng.gen_bool(density)).unwrap();
        let rules: Vec<SeqRule> = (0..rng.gen_range(1..=2))
            .map(|_| SeqRule::Affine { mul: rng.gen_range(0..=3), add: rng.gen_range(0..=2) })
            .collect();
        let bound = rng.gen_range(1..=3);
        let comm = check_jset_commutative(&set, &rules, Some(n), bound, 1_000_000).map_err(|e| e.to_string())?;
        let closures: Vec<Box<dyn Fn(usize) -> u64>> = rules
            .iter()
            .cloned()
            .map(|r| Box::new(move |t: usize| r.at(t).unwrap()) as Box<dyn Fn(usize) -> u64>)
            .collect();
        let fseqs: Vec<&dyn Fn(usize) -> u64> = closures.iter().map(|b| b.as_ref()).collect();
        let search = ProductSearch {
            m_bound: bound,
            t_bound: bound,
            a_domain: (1..=n).collect(),
            allow_identity: true,
            budget: 10_000_000,
        };
        let member = |v: &u64| set.contains(*v);
        let prod = check_jset_noncommutative(&inst, member, &fseqs, &search).map_err(|e| e.to_string())?;
        ensure(comm.status == prod.status, || format!("instance {i}: {:?} vs {:?}", comm.status, prod.status))?;
        ensure(comm.status != Status::Inconclusive, || format!("instance {i} inconclusive"))?;
        if comm.status == Status::HoldsWithWitness {
            passes += 1;
            let Some(Witness::JSet { a, h }) = &comm.witness else { return Err(format!("instance {i}: no witness")) };
            let w = prod.witness.as_ref().ok_or_else(|| format!("instance {i}: no product witness"))?;
            let mut padded = vec![*a];
            padded.resize(h.len() + 1, 0);
            let as_product = ProductWitness { m: h.len(), a: padded, t: h.clone() };
            ensure(
                verify_jset(&set, &rules, *a, h)
                    && verify_jset_product(&inst, member, &fseqs, w)
                    && verify_jset_product(&inst, member, &fseqs, &as_product)
                    && verify_jset(&set, &rules, w.a.iter().sum(), &w.t),
                || format!("instance {i}: witnesses do not cross-verify"),
            )?;
        }
    }
    Ok(format!("200 instances agree ({passes} passes cross-verified)"))
}

fn parser_and_golden() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let e = SetExpr::random(&mut rng, 6);
        let text = e.to_string();
        let back = SetExpr::parse(&text).map_err(|err| format!("{text}: {err}"))?;
        ensure(back == e && e.depth() <= 6, || format!("round trip changed {text}"))?;
    }
    let cases = common::cases().len();
    let bad = common::mismatches(false);
    ensure(bad.is_empty(), || format!("golden mismatches: {bad:?}"))?;
    Ok(format!("500 ASTs round-trip, {cases} golden invocations byte-identical"))
}

fn offsets(rng: &mut ChaCha8Rng, zero: bool, max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (if zero { 0 } else { 1 }..=max).filter(|_| rng.gen_bool(0.5)).collect();
    if v.is_empty() {
        v.push(if zero { 0 } else { 1 });
    }
    v
}

fn random_query(rng: &mut ChaCha8Rng) -> Query {
    match rng.gen_range(0..6) {
        0 => Query::Thick { f: offsets(rng, true, 6) },
        1 => Query::Syndetic { g: offsets(rng, false, 5) },
        2 => Query::PiecewiseSyndetic { g: offsets(rng, false, 4), f: offsets(rng, true, 4) },
        3 => Query::Ip { k: rng.gen_range(1..=4), search_bound: None, budget: 20_000 },
        4 => {
            let rules = ["n", "2n", "3n+1", "[1,2,3,4,5,6]", "n+2"];
            let fseqs =
                (0..rng.gen_range(1..=2)).map(|_| rules[rng.gen_range(0..rules.len())].parse().unwrap()).collect();
            Query::JSet { fseqs, a_bound: Some(rng.gen_range(1..=40)), h_bound: 6, budget: 20_000 }
        }
        _ => Query::Ap { k: rng.gen_range(1..=5) },
    }
}

fn witness_honesty() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut holds, mut holes, mut ran) = (0, 0, 0);
    for i in 0..1000 {
        let set = loop {
            if let Ok(w) = SetExpr::random(&mut rng, 3).eval(rng.gen_range(40..200)) {
                if w.window_max() > 12 {
                    break w;
                }
            }
        };
        let q = random_query(&mut rng);
        let Ok(v) = q.run(&set) else { continue };
        ran += 1;
        ensure(q.reverify(&set, &v), || format!("query {i}: {q:?} on {set}"))?;
        match (&q, v.status, &v.witness) {
            (_, Status::HoldsWithWitness, Some(_)) => holds += 1,
            (_, Status::HoldsWithWitness, None) => return Err(format!("query {i}: pass without witness")),
            (Query::Syndetic { g }, Status::FailsOnWindow, Some(Witness::Uncovered { point })) => {
                ensure(g.iter().all(|t| !set.contains(point + t)), || format!("query {i}: point {point} is covered"))?;
                holes += 1;
            }
            _ => {}
        }
    }
    Ok(format!("{ran} queries, {holds} witnesses and {holes} holes re-verified"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("duality sweep", duality_sweep),
        ("worked examples", worked_examples),
        ("AP cardinalities", ap_counts),
        ("sum subsystem builder", builder),
        ("chain certificates", chains),
        ("J-set cross-oracle", jset_cross_check),
        ("parser and golden corpus", parser_and_golden),
        ("witness honesty", witness_honesty),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = run();
        let ms = t.elapsed().as_millis();
        match res {
            Ok(detail) => println!("PASS {} {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
