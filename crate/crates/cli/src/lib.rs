//! `ramlab` command-line front end.
//!
//! Every invocation prints exactly one result document on stdout and maps
//! the result status to an exit code: 0 holds, 1 fails, 2 inconclusive or
//! out of budget, 3 usage or input error.

pub mod args;
mod render;

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use ramlab::builder::{self, BuildOutcome, BuildRequest, Structure, XRule};
use ramlab::chain::{self, ChainCertificate, TreeCertificate};
use ramlab::family::{self, Family, FiniteSemigroup, Side};
use ramlab::properties::{self, Query, SeqRule, Status};
use ramlab::semigroup::{
    check_laws, Additive, FreeMon, Mat2Ring, Multiplicative, NatRing, Semigroup, Tropical, WeakRing, ZnRing,
};
use ramlab::structures::{self, StructuredSet};
use ramlab::{Error, SetExpr, WindowSet};
use serde_json::{json, Value};

use args::*;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// What one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Doc {
    code: i32,
    body: Value,
}

fn doc(code: i32, body: Value) -> Doc {
    Doc { code, body }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::HoldsWithWitness => EXIT_HOLDS,
        Status::FailsOnWindow => EXIT_FAILS,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn verdict_code(ok: bool) -> i32 {
    if ok {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

/// Input problems that are not core errors (unreadable files and the like).
#[derive(Debug)]
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Res<T> = std::result::Result<T, InputError>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

/// Shallow merge: fields of `b` are appended to object `a`.
fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn load_expr(s: &SetArgs) -> Res<SetExpr> {
    let text = match (&s.set, &s.set_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => return Err(InputError("one of --set or --set-file is required".into())),
    };
    Ok(SetExpr::parse(text.trim()).map_err(Error::from)?)
}

fn load_set(s: &SetArgs) -> Res<(SetExpr, WindowSet)> {
    let e = load_expr(s)?;
    let w = e.eval(s.window)?;
    Ok((e, w))
}

/// Run `ramlab` on `argv` (including the program name) without exiting.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let format =
        if argv.windows(2).any(|w| w[0] == "--format" && w[1] == "text") || argv.iter().any(|a| a == "--format=text") {
            Format::Text
        } else {
            Format::Json
        };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome { code: EXIT_HOLDS, stdout: e.to_string(), stderr: String::new() };
        }
        Err(e) => {
            let detail = e.to_string();
            let first = detail
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect::<Vec<_>>()
                .join(" ")
                .trim_start_matches("error: ")
                .to_string();
            let body = json!({ "error": { "kind": "usage", "message": first } });
            return Outcome { code: EXIT_USAGE, stdout: render::render(&body, format), stderr: detail };
        }
    };
    match dispatch(&cli.command) {
        Ok(d) => Outcome { code: d.code, stdout: render::render(&d.body, cli.format), stderr: String::new() },
        Err(InputError(m)) => {
            let body = json!({ "error": { "kind": "input", "message": m } });
            Outcome { code: EXIT_USAGE, stdout: render::render(&body, cli.format), stderr: format!("error: {m}\n") }
        }
    }
}

fn dispatch(cmd: &Command) -> Res<Doc> {
    match cmd {
        Command::Eval(s) => eval(s),
        Command::Check { property } => check(property),
        Command::Gen(g) => gen(g),
        Command::Family(f) => family_cmd(f),
        Command::Verify(v) => verify(v),
        Command::Build(b) => build(b),
        Command::Laws(l) => laws(l),
    }
}

fn eval(s: &SetArgs) -> Res<Doc> {
    let (e, w) = load_set(s)?;
    let runs: Vec<[u64; 2]> = w.runs().into_iter().map(|(a, b)| [a, b]).collect();
    Ok(doc(
        EXIT_HOLDS,
        json!({
            "expr": e.to_string(),
            "window": w.window_max(),
            "count": w.len(),
            "runs": runs,
            "members": w.members_text(),
        }),
    ))
}

fn check(cmd: &CheckCmd) -> Res<Doc> {
    let (set, query) = match cmd {
        CheckCmd::Thick { set, f } => (set, Query::Thick { f: f.clone() }),
        CheckCmd::Syndetic { set, g } => (set, Query::Syndetic { g: g.clone() }),
        CheckCmd::Ps { set, g, f } => (set, Query::PiecewiseSyndetic { g: g.clone(), f: f.clone() }),
        CheckCmd::Ip { set, k, search_bound, budget } => {
            (set, Query::Ip { k: *k, search_bound: *search_bound, budget: *budget })
        }
        CheckCmd::Jset { set, fseqs, a_bound, h_bound, budget } => {
            let fseqs = fseqs.iter().map(|s| s.parse::<SeqRule>()).collect::<Result<Vec<_>, _>>()?;
            (set, Query::JSet { fseqs, a_bound: *a_bound, h_bound: *h_bound, budget: *budget })
        }
        CheckCmd::Ap { set, k } => (set, Query::Ap { k: *k }),
        CheckCmd::Density { set, n } => {
            let (e, w) = load_set(set)?;
            let r = properties::upper_density_prefix(&w, n.unwrap_or(w.window_max()))?;
            let head = json!({ "property": "density", "expr": e.to_string(), "window": w.window_max() });
            return Ok(doc(EXIT_HOLDS, merge(head, to_value(&r))));
        }
        CheckCmd::Harmonic { set, n } => {
            let (e, w) = load_set(set)?;
            let r = properties::harmonic_partial_sum(&w, n.unwrap_or(w.window_max()))?;
            let head = json!({ "property": "harmonic", "expr": e.to_string(), "window": w.window_max() });
            return Ok(doc(EXIT_HOLDS, merge(head, to_value(&r))));
        }
    };
    let (e, w) = load_set(set)?;
    let v = query.run(&w)?;
    if !query.reverify(&w, &v) {
        return Err(InputError(format!("internal error: witness for {} did not re-verify", v.property)));
    }
    let mut body = to_value(&v);
    body["params"]["expr"] = json!(e.to_string());
    Ok(doc(status_code(v.status), body))
}

fn gen_doc<S: Semigroup>(set: StructuredSet<S::Elem>, inst: &S) -> Res<Doc> {
    let rederived = set.rederive(inst)?;
    let body = merge(to_value(&set), json!({ "term_count": set.term_count(), "rederived": rederived }));
    Ok(doc(verdict_code(rederived), body))
}

fn gen_with<S: Semigroup>(kind: GenKind, xs: &[S::Elem], inst: &S) -> Res<Doc> {
    let set = match kind {
        GenKind::Fs => structures::fs_generate(xs, inst)?,
        GenKind::Fp => structures::fp_generate(xs, inst)?,
        GenKind::Ap => structures::ap_generate(xs, inst)?,
    };
    gen_doc(set, inst)
}

fn gen_ring<R: WeakRing>(kind: GenKind, xs: &[R::Elem], ring: &R) -> Res<Doc> {
    match kind {
        GenKind::Fs => gen_with(kind, xs, &Additive(ring)),
        _ => gen_with(kind, xs, &Multiplicative(ring)),
    }
}

fn gen(g: &GenArgs) -> Res<Doc> {
    if g.ring == GenRing::Freemon {
        let words: Vec<String> = g.seq.split(',').map(|w| w.trim().to_string()).collect();
        if words.iter().any(|w| w.is_empty() || !w.chars().all(|c| c.is_ascii_lowercase())) {
            return Err(InputError(format!("freemon generators are lowercase words, got `{}`", g.seq)));
        }
        let mut alphabet: Vec<char> = words.iter().flat_map(|w| w.chars()).collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        return gen_with(g.kind, &words, &FreeMon { alphabet, allow_identity: false });
    }
    let rule: XRule = g.seq.parse()?;
    match g.ring {
        GenRing::Nat => gen_ring(g.kind, &rule.nat_prefix(g.len)?, &NatRing::default()),
        GenRing::Tropical => gen_ring(g.kind, &rule.nat_prefix(g.len)?, &Tropical::default()),
        GenRing::Mat2 => gen_ring(g.kind, &rule.mat2_prefix(g.len)?, &Mat2Ring::default()),
        GenRing::Freemon => unreachable!(),
    }
}

fn semigroup(name: &Option<String>) -> Res<FiniteSemigroup> {
    let name = name.as_deref().ok_or_else(|| InputError("--semigroup is required for this operation".into()))?;
    Ok(FiniteSemigroup::parse(name)?)
}

fn family_cmd(a: &FamilyArgs) -> Res<Doc> {
    let f = Family::from_text(&read(&a.file)?)?;
    let head = json!({ "op": format!("{:?}", a.op).to_lowercase(), "family": f.to_string() });
    Ok(match a.op {
        FamilyOp::Ramsey => {
            let (r, code) = match a.samples {
                Some(n) => {
                    let r = family::is_ramsey_sampled(&f, n, a.seed);
                    let code = if r.ramsey { EXIT_INCONCLUSIVE } else { EXIT_FAILS };
                    (r, code)
                }
                None => {
                    let r = family::is_ramsey(&f, a.disjoint_only)?;
                    let code = verdict_code(r.ramsey);
                    (r, code)
                }
            };
            let seed = if a.samples.is_some() { json!({ "seed": a.seed }) } else { json!({}) };
            doc(code, merge(merge(head, to_value(&r)), seed))
        }
        FamilyOp::Dual => {
            let d = family::dual_family(&f)?;
            doc(EXIT_HOLDS, merge(head, json!({ "dual": d.to_string(), "dual_family": d, "dual_text": d.to_text() })))
        }
        FamilyOp::Filter => {
            let r = family::is_filter(&f);
            doc(verdict_code(r.filter), merge(head, to_value(&r)))
        }
        FamilyOp::Shift => {
            let s = semigroup(&a.semigroup)?;
            let side = match a.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let r = family::check_shift_invariance(&f, &s, side, a.inverse)?;
            doc(verdict_code(r.invariant), merge(merge(head, json!({ "semigroup": s.name })), to_value(&r)))
        }
        FamilyOp::Cond => {
            let s = semigroup(&a.semigroup)?;
            let r = family::check_subsemigroup_condition(&f, &s)?;
            doc(verdict_code(r.holds), merge(merge(head, json!({ "semigroup": s.name })), to_value(&r)))
        }
    })
}

/// Supply or cross-check the carrier line of a certificate file.
fn with_window(text: String, window: Option<u64>) -> Res<String> {
    let Some(n) = window else { return Ok(text) };
    let carrier = text.lines().map(str::trim).find_map(|l| l.strip_prefix("carrier "));
    match carrier {
        None => Ok(format!("carrier nat {n}\n{text}")),
        Some(c) if c.split('#').next().unwrap_or("").split_whitespace().eq(["nat", &n.to_string()]) => Ok(text),
        Some(c) => Err(InputError(format!("--window {n} does not match `carrier {}`", c.trim()))),
    }
}

fn verify(v: &VerifyArgs) -> Res<Doc> {
    let text = with_window(read(&v.file)?, v.window)?;
    match v.kind {
        VerifyKind::Chain => {
            let mut cert = ChainCertificate::from_text(&text)?;
            if let Some(n) = v.dilate {
                cert = chain::dilate_chain(&cert, n)?;
            }
            let r = chain::verify_chain(&cert);
            let head = json!({ "certificate": "chain", "dilated_by": v.dilate });
            Ok(doc(status_code(r.status), merge(head, to_value(&r))))
        }
        VerifyKind::Tree => {
            if v.dilate.is_some() {
                return Err(InputError("--dilate applies to chain certificates only".into()));
            }
            let cert = TreeCertificate::from_text(&text)?;
            let r = chain::verify_tree(&cert)?;
            let head = json!({ "certificate": "tree", "carrier": cert.carrier, "depth": cert.depth });
            Ok(doc(status_code(r.status), merge(head, to_value(&r))))
        }
    }
}

fn build_with<R: WeakRing>(
    b: &BuildArgs,
    ring: &R,
    x: Vec<R::Elem>,
    member: &dyn Fn(&R::Elem) -> bool,
    set: String,
    structure: Structure,
) -> Res<Doc> {
    let req = BuildRequest {
        ring,
        x_rule: b.seq.clone(),
        x,
        member,
        set,
        k: b.k,
        structure,
        budget: b.budget,
        seed: b.seed,
        exhaustive: b.exhaustive,
    };
    let out = builder::build(&req)?;
    let code = match &out {
        BuildOutcome::Built { certificate, .. } => verdict_code(certificate.all_verified),
        BuildOutcome::Failed(f) if f.nonexistence => EXIT_FAILS,
        BuildOutcome::Failed(_) => EXIT_INCONCLUSIVE,
    };
    let mut body = to_value(&out);
    if let BuildOutcome::Failed(_) = out {
        body["seed"] = json!(b.seed);
    }
    Ok(doc(code, body))
}

fn build(b: &BuildArgs) -> Res<Doc> {
    let structure: Structure = b.structure.parse()?;
    let rule: XRule = b.seq.parse()?;
    let expr = SetExpr::parse(b.set.trim()).map_err(Error::from)?;
    let m = expr.compile()?;
    let bound = b.index_bound.unwrap_or(if b.exhaustive {
        builder::MAX_EXHAUSTIVE_INDEX
    } else {
        builder::DEFAULT_INDEX_BOUND
    });
    let set = expr.to_string();
    match b.ring {
        BuildRing::Nat => {
            build_with(b, &NatRing::default(), rule.nat_prefix(bound)?, &|v| m.contains(*v), set, structure)
        }
        BuildRing::Tropical => {
            build_with(b, &Tropical::default(), rule.nat_prefix(bound)?, &|v| m.contains(*v), set, structure)
        }
        BuildRing::Mat2 => build_with(
            b,
            &Mat2Ring::default(),
            rule.mat2_prefix(bound)?,
            &|v| v.trace().is_ok_and(|t| m.contains(t)),
            format!("trace in {set}"),
            structure,
        ),
    }
}

fn laws_doc<R: WeakRing>(ring: &R, l: &LawsArgs) -> Res<Doc> {
    let r = check_laws(ring, l.samples, l.seed)?;
    Ok(doc(verdict_code(r.declared_laws_hold()), to_value(&r)))
}

fn laws(l: &LawsArgs) -> Res<Doc> {
    match l.ring.as_str() {
        "nat" => laws_doc(&NatRing::default(), l),
        "tropical" => laws_doc(&Tropical::default(), l),
        "mat2" => laws_doc(&Mat2Ring::default(), l),
        z => match z.strip_prefix('z').and_then(|n| n.parse::<u64>().ok()) {
            Some(modulus) if modulus >= 1 => laws_doc(&ZnRing { modulus }, l),
            _ => Err(InputError(format!("unknown ring `{z}` (nat, tropical, mat2 or zN)"))),
        },
    }
}
