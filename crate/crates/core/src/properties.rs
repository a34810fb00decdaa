//! Window-relative checks for thick, syndetic, piecewise syndetic, IP,
//! J-set and arithmetic-progression properties, plus exact density and
//! harmonic partial sums.
//!
//! Every search scans candidates in a fixed order and reports the least
//! witness in that order:
//!
//! - thick / piecewise syndetic: least translate `x`;
//! - syndetic: least uncovered point;
//! - IP: lexicographically least `x_1 < ... < x_k`;
//! - J-set: least `a`, then least `H` in lexicographic order of its sorted
//!   index list (`{1} < {1,2} < {1,2,3} < {1,3} < {2}`);
//! - noncommutative J-set: least `m`, then `t` lexicographic, then `a`
//!   lexicographic over the candidate list (identity first when allowed);
//! - progressions: least `a`, then least `d`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::json;

use crate::error::{Error, Result};
use crate::semigroup::{x_product, Semigroup};
use crate::window::WindowSet;

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_H_BOUND: usize = 20;
pub const DEFAULT_M_BOUND: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    HoldsWithWitness,
    FailsOnWindow,
    Inconclusive,
}

/// Which verdict direction transfers from the window to ℕ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Soundness {
    /// A pass is a proof for these parameters; a failure only speaks for the window.
    PassSound,
    /// A failure is a proof (a hole is a hole); a pass only speaks for the window.
    FailSound,
}

impl Soundness {
    pub fn note(self) -> &'static str {
        match self {
            Soundness::PassSound => {
                "pass is globally sound for these parameters; failure is only relative to the window and budget"
            }
            Soundness::FailSound => {
                "failure is globally sound (the uncovered point is a hole); pass is only relative to the window"
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub limit: Option<u64>,
    pub explored: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict<W> {
    pub property: &'static str,
    pub params: serde_json::Value,
    pub status: Status,
    pub witness: Option<W>,
    pub soundness: Soundness,
    pub note: &'static str,
    pub budget: Budget,
}

impl<W> Verdict<W> {
    fn new(property: &'static str, params: serde_json::Value, soundness: Soundness) -> Self {
        Verdict {
            property,
            params,
            status: Status::Inconclusive,
            witness: None,
            soundness,
            note: soundness.note(),
            budget: Budget { limit: None, explored: 0 },
        }
    }

    fn finish(mut self, status: Status, witness: Option<W>, explored: u64) -> Self {
        self.status = status;
        self.witness = witness;
        self.budget.explored = explored;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Translate { x: u64 },
    Covered { checked_upto: u64 },
    Uncovered { point: u64 },
    Sequence { terms: Vec<u64> },
    JSet { a: u64, h: Vec<usize> },
    Progression { a: u64, d: u64 },
}

/// A sequence `f: ℕ → ℕ` given by an affine rule `f(n) = mul·n + add`
/// or an explicit prefix `f(1), f(2), ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqRule {
    Affine { mul: u64, add: u64 },
    Explicit(Vec<u64>),
}

impl SeqRule {
    /// `f(n)` for `n >= 1`, or `None` past an explicit prefix / on overflow.
    pub fn at(&self, n: usize) -> Option<u64> {
        match self {
            SeqRule::Affine { mul, add } => mul.checked_mul(n as u64)?.checked_add(*add),
            SeqRule::Explicit(v) => v.get(n.checked_sub(1)?).copied(),
        }
    }

    /// Number of defined terms, if finite.
    pub fn defined_len(&self) -> Option<usize> {
        match self {
            SeqRule::Affine { .. } => None,
            SeqRule::Explicit(v) => Some(v.len()),
        }
    }
}

impl fmt::Display for SeqRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqRule::Affine { mul, add } => {
                match mul {
                    0 => return write!(f, "{add}"),
                    1 => write!(f, "n")?,
                    m => write!(f, "{m}n")?,
                }
                if *add > 0 {
                    write!(f, "+{add}")?;
                }
                Ok(())
            }
            SeqRule::Explicit(v) => {
                write!(f, "[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

impl FromStr for SeqRule {
    type Err = Error;

    /// Accepts `n`, `3n`, `2n+1`, `7` (constant) or `[1,4,9]`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Malformed(format!("`{s}` is not a sequence rule (try `2n+1` or `[1,4,9]`)"));
        if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let v = body.split(',').map(|t| t.parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
            return Ok(SeqRule::Explicit(v));
        }
        let (lin, add) = match s.split_once('+') {
            Some((l, a)) => (l.to_string(), a.parse::<u64>().map_err(|_| bad())?),
            None => (s.clone(), 0),
        };
        match lin.strip_suffix('n') {
            Some("") => Ok(SeqRule::Affine { mul: 1, add }),
            Some(m) => Ok(SeqRule::Affine { mul: m.parse().map_err(|_| bad())?, add }),
            None if add == 0 => Ok(SeqRule::Affine { mul: 0, add: lin.parse().map_err(|_| bad())? }),
            None => Err(bad()),
        }
    }
}

impl Serialize for SeqRule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A property query over a window of ℕ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Thick { f: Vec<u64> },
    Syndetic { g: Vec<u64> },
    PiecewiseSyndetic { g: Vec<u64>, f: Vec<u64> },
    Ip { k: usize, search_bound: Option<u64>, budget: u64 },
    JSet { fseqs: Vec<SeqRule>, a_bound: Option<u64>, h_bound: usize, budget: u64 },
    Ap { k: usize },
}

impl Query {
    pub fn run(&self, a: &WindowSet) -> Result<Verdict<Witness>> {
        match self {
            Query::Thick { f } => check_thick(a, f),
            Query::Syndetic { g } => check_syndetic(a, g),
            Query::PiecewiseSyndetic { g, f } => check_piecewise_syndetic(a, g, f),
            Query::Ip { k, search_bound, budget } => check_ip_depth(a, *k, *search_bound, *budget),
            Query::JSet { fseqs, a_bound, h_bound, budget } => {
                check_jset_commutative(a, fseqs, *a_bound, *h_bound, *budget)
            }
            Query::Ap { k } => check_ap_length(a, *k),
        }
    }

    /// Re-check a verdict's witness by direct membership tests.
    /// Verdicts without a witness re-verify trivially.
    pub fn reverify(&self, a: &WindowSet, v: &Verdict<Witness>) -> bool {
        let Some(w) = &v.witness else { return true };
        match (self, w) {
            (Query::Thick { f }, Witness::Translate { x }) => verify_thick(a, f, *x),
            (Query::Syndetic { g }, Witness::Uncovered { point }) => verify_uncovered(a, g, *point),
            (Query::Syndetic { g }, Witness::Covered { checked_upto }) => verify_covered(a, g, *checked_upto),
            (Query::PiecewiseSyndetic { g, f }, Witness::Translate { x }) => verify_piecewise_syndetic(a, g, f, *x),
            (Query::Ip { k, .. }, Witness::Sequence { terms }) => terms.len() == *k && verify_ip(a, terms),
            (Query::JSet { fseqs, .. }, Witness::JSet { a: base, h }) => verify_jset(a, fseqs, *base, h),
            (Query::Ap { k }, Witness::Progression { a: start, d }) => verify_ap(a, *k, *start, *d),
            _ => false,
        }
    }
}

fn nonempty(name: &str, v: &[u64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Domain(format!("{name} must be nonempty")));
    }
    Ok(())
}

fn check_offsets(name: &str, v: &[u64], window: u64) -> Result<u64> {
    nonempty(name, v)?;
    let max = *v.iter().max().unwrap();
    if max >= window {
        return Err(Error::Domain(format!("max {name} = {max} must be below the window size {window}")));
    }
    Ok(max)
}

fn check_shifts(v: &[u64], window: u64) -> Result<u64> {
    if v.contains(&0) {
        return Err(Error::Domain("G must contain positive shifts only".into()));
    }
    check_offsets("G", v, window)
}

/// `F + x ⊆ A` by direct membership.
pub fn verify_thick(a: &WindowSet, f: &[u64], x: u64) -> bool {
    x >= 1 && f.iter().all(|&o| o.checked_add(x).is_some_and(|m| a.contains(m)))
}

fn first_translate(a: &WindowSet, f: &[u64], max_f: u64) -> (Option<u64>, u64) {
    let last = a.window_max() - max_f;
    let mut explored = 0;
    for x in 1..=last {
        explored += 1;
        if verify_thick(a, f, x) {
            return (Some(x), explored);
        }
    }
    (None, explored)
}

/// Is there `x` with `F + x ⊆ A` inside the window?
pub fn check_thick(a: &WindowSet, f: &[u64]) -> Result<Verdict<Witness>> {
    let max_f = check_offsets("F", f, a.window_max())?;
    let v = Verdict::new("thick", json!({ "F": f, "window": a.window_max() }), Soundness::PassSound);
    let (x, explored) = first_translate(a, f, max_f);
    Ok(match x {
        Some(x) => v.finish(Status::HoldsWithWitness, Some(Witness::Translate { x }), explored),
        None => v.finish(Status::FailsOnWindow, None, explored),
    })
}

fn covered(a: &WindowSet, g: &[u64], n: u64) -> bool {
    g.iter().any(|&t| a.contains(n + t))
}

pub fn verify_uncovered(a: &WindowSet, g: &[u64], point: u64) -> bool {
    let max_g = g.iter().copied().max().unwrap_or(0);
    point >= 1 && point + max_g <= a.window_max() && !covered(a, g, point)
}

pub fn verify_covered(a: &WindowSet, g: &[u64], upto: u64) -> bool {
    let max_g = g.iter().copied().max().unwrap_or(0);
    upto + max_g <= a.window_max() && (1..=upto).all(|n| covered(a, g, n))
}

/// Does `⋃_{t∈G} (-t + A)` cover `[1..N - max G]`?
pub fn check_syndetic(a: &WindowSet, g: &[u64]) -> Result<Verdict<Witness>> {
    let max_g = check_shifts(g, a.window_max())?;
    let v = Verdict::new("syndetic", json!({ "G": g, "window": a.window_max() }), Soundness::FailSound);
    let upto = a.window_max() - max_g;
    for n in 1..=upto {
        if !covered(a, g, n) {
            return Ok(v.finish(Status::FailsOnWindow, Some(Witness::Uncovered { point: n }), n));
        }
    }
    Ok(v.finish(Status::HoldsWithWitness, Some(Witness::Covered { checked_upto: upto }), upto))
}

/// `⋃_{t∈G} (-t + A)` on the window `[1..N - max G]`.
pub fn shifted_union(a: &WindowSet, g: &[u64]) -> Result<WindowSet> {
    let max_g = check_shifts(g, a.window_max())?;
    let w = a.window_max() - max_g;
    WindowSet::from_predicate(w, |n| covered(a, g, n))
}

pub fn verify_piecewise_syndetic(a: &WindowSet, g: &[u64], f: &[u64], x: u64) -> bool {
    let max_g = g.iter().copied().max().unwrap_or(0);
    f.iter().all(|&o| {
        let n = o + x;
        n >= 1 && n + max_g <= a.window_max() && covered(a, g, n)
    })
}

/// Is there `x` with `F + x ⊆ ⋃_{t∈G} (-t + A)` inside the window?
pub fn check_piecewise_syndetic(a: &WindowSet, g: &[u64], f: &[u64]) -> Result<Verdict<Witness>> {
    let u = shifted_union(a, g)?;
    let max_f = check_offsets("F", f, u.window_max())?;
    let v =
        Verdict::new("piecewise-syndetic", json!({ "G": g, "F": f, "window": a.window_max() }), Soundness::PassSound);
    let (x, explored) = first_translate(&u, f, max_f);
    Ok(match x {
        Some(x) => v.finish(Status::HoldsWithWitness, Some(Witness::Translate { x }), explored),
        None => v.finish(Status::FailsOnWindow, None, explored),
    })
}

/// Strictly increasing terms whose finite sums all lie in `A`.
pub fn verify_ip(a: &WindowSet, terms: &[u64]) -> bool {
    if terms.is_empty() || terms.windows(2).any(|w| w[0] >= w[1]) || terms[0] == 0 {
        return false;
    }
    let mut sums: Vec<u64> = Vec::new();
    for &x in terms {
        let mut next = vec![x];
        next.extend(sums.iter().filter_map(|s| s.checked_add(x)));
        if !next.iter().all(|&v| a.contains(v)) {
            return false;
        }
        sums.extend(next);
    }
    true
}

/// Search `x_1 < ... < x_k <= search_bound` with `FS(x) ⊆ A` on the window.
pub fn check_ip_depth(a: &WindowSet, k: usize, search_bound: Option<u64>, budget: u64) -> Result<Verdict<Witness>> {
    if k == 0 {
        return Err(Error::Domain("depth k must be ≥ 1".into()));
    }
    let bound = search_bound.unwrap_or(a.window_max()).min(a.window_max());
    let mut v =
        Verdict::new("ip", json!({ "k": k, "search_bound": bound, "window": a.window_max() }), Soundness::PassSound);
    v.budget.limit = Some(budget);

    struct Search<'a> {
        a: &'a WindowSet,
        k: usize,
        bound: u64,
        budget: u64,
        explored: u64,
        terms: Vec<u64>,
        sums: Vec<u64>,
    }

    enum Outcome {
        Found,
        Exhausted,
        OutOfBudget,
    }

    impl Search<'_> {
        fn go(&mut self) -> Outcome {
            if self.terms.len() == self.k {
                return Outcome::Found;
            }
            let start = self.terms.last().map_or(1, |t| t + 1);
            for c in start..=self.bound {
                if self.explored >= self.budget {
                    return Outcome::OutOfBudget;
                }
                self.explored += 1;
                if !self.a.contains(c) || !self.sums.iter().all(|s| self.a.contains(s + c)) {
                    continue;
                }
                let mark = self.sums.len();
                let new: Vec<u64> = self.sums.iter().map(|s| s + c).collect();
                self.sums.push(c);
                self.sums.extend(new);
                self.terms.push(c);
                match self.go() {
                    Outcome::Exhausted => {}
                    other => return other,
                }
                self.terms.pop();
                self.sums.truncate(mark);
            }
            Outcome::Exhausted
        }
    }

    let mut s = Search { a, k, bound, budget, explored: 0, terms: Vec::new(), sums: Vec::new() };
    let outcome = s.go();
    Ok(match outcome {
        Outcome::Found => v.finish(Status::HoldsWithWitness, Some(Witness::Sequence { terms: s.terms }), s.explored),
        Outcome::Exhausted => v.finish(Status::FailsOnWindow, None, s.explored),
        Outcome::OutOfBudget => v.finish(Status::Inconclusive, None, s.explored),
    })
}

/// `a + ∑_{t∈H} f(t) ∈ A` for every `f`.
pub fn verify_jset(a: &WindowSet, fseqs: &[SeqRule], base: u64, h: &[usize]) -> bool {
    if base == 0 || h.is_empty() || h.windows(2).any(|w| w[0] >= w[1]) || h[0] == 0 {
        return false;
    }
    fseqs.iter().all(|f| h.iter().try_fold(base, |acc, &t| acc.checked_add(f.at(t)?)).is_some_and(|v| a.contains(v)))
}

/// Search `a <= a_bound`, nonempty `H ⊆ [1..h_bound]` with
/// `a + ∑_{t∈H} f(t) ∈ A` for every `f` in `fseqs`.
pub fn check_jset_commutative(
    a: &WindowSet,
    fseqs: &[SeqRule],
    a_bound: Option<u64>,
    h_bound: usize,
    budget: u64,
) -> Result<Verdict<Witness>> {
    if fseqs.is_empty() {
        return Err(Error::Domain("need at least one sequence".into()));
    }
    if h_bound == 0 || a_bound == Some(0) {
        return Err(Error::Domain("bounds must be ≥ 1".into()));
    }
    let a_bound = a_bound.unwrap_or(a.window_max());
    let h_bound = fseqs.iter().filter_map(SeqRule::defined_len).fold(h_bound, usize::min);
    let mut v = Verdict::new(
        "jset",
        json!({
            "fseqs": fseqs,
            "a_bound": a_bound,
            "H_bound": h_bound,
            "window": a.window_max(),
        }),
        Soundness::PassSound,
    );
    v.budget.limit = Some(budget);
    let n = a.window_max();

    struct Search<'a> {
        a: &'a WindowSet,
        fseqs: &'a [SeqRule],
        h_bound: usize,
        n: u64,
        budget: u64,
        explored: u64,
        h: Vec<usize>,
    }

    impl Search<'_> {
        // sums[i] = base + ∑_{t∈H} f_i(t); H nonempty on entry.
        fn go(&mut self, sums: &[u64]) -> Option<bool> {
            if self.explored >= self.budget {
                return None;
            }
            self.explored += 1;
            if sums.iter().all(|&s| self.a.contains(s)) {
                return Some(true);
            }
            let start = *self.h.last().unwrap() + 1;
            for t in start..=self.h_bound {
                if let Some(next) = self.extend(sums, t) {
                    self.h.push(t);
                    match self.go(&next) {
                        Some(false) => {}
                        other => return other,
                    }
                    self.h.pop();
                }
            }
            Some(false)
        }

        // None when some sum leaves the window; supersets only grow.
        fn extend(&self, sums: &[u64], t: usize) -> Option<Vec<u64>> {
            sums.iter().zip(self.fseqs).map(|(&s, f)| s.checked_add(f.at(t)?).filter(|&v| v <= self.n)).collect()
        }
    }

    let mut s = Search { a, fseqs, h_bound, n, budget, explored: 0, h: Vec::new() };
    for base in 1..=a_bound.min(n) {
        let start = vec![base; fseqs.len()];
        for t in 1..=h_bound {
            let Some(sums) = s.extend(&start, t) else { continue };
            s.h = vec![t];
            match s.go(&sums) {
                Some(true) => {
                    let w = Witness::JSet { a: base, h: std::mem::take(&mut s.h) };
                    return Ok(v.finish(Status::HoldsWithWitness, Some(w), s.explored));
                }
                Some(false) => {}
                None => return Ok(v.finish(Status::Inconclusive, None, s.explored)),
            }
        }
    }
    Ok(v.finish(Status::FailsOnWindow, None, s.explored))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness<E> {
    pub m: usize,
    pub a: Vec<E>,
    pub t: Vec<usize>,
}

/// Search bounds for the noncommutative J-set check.
#[derive(Clone, Debug)]
pub struct ProductSearch<E> {
    pub m_bound: usize,
    pub t_bound: usize,
    /// Candidates for each entry of `a`.
    pub a_domain: Vec<E>,
    /// Also try the semigroup identity (if any) in each position of `a`.
    /// The all-identity vector is never tried.
    pub allow_identity: bool,
    pub budget: u64,
}

/// `x(m, a, t, f) ∈ A` for every `f`.
pub fn verify_jset_product<S, P>(
    inst: &S,
    member: P,
    fseqs: &[&dyn Fn(usize) -> S::Elem],
    w: &ProductWitness<S::Elem>,
) -> bool
where
    S: Semigroup,
    P: Fn(&S::Elem) -> bool,
{
    fseqs.iter().all(|f| x_product(inst, w.m, &w.a, &w.t, f).is_ok_and(|v| member(&v)))
}

fn next_combination(t: &mut [usize], n: usize) -> bool {
    let m = t.len();
    for i in (0..m).rev() {
        if t[i] < n - (m - 1 - i) {
            t[i] += 1;
            for j in i + 1..m {
                t[j] = t[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Search `m <= m_bound`, `a ∈ S^{m+1}` from the candidate domain and
/// `t ∈ J_m` with `t(m) <= t_bound` such that `x(m, a, t, f) ∈ A` for every
/// `f` in `fseqs`. Evaluation goes through [`x_product`].
pub fn check_jset_noncommutative<S, P>(
    inst: &S,
    member: P,
    fseqs: &[&dyn Fn(usize) -> S::Elem],
    search: &ProductSearch<S::Elem>,
) -> Result<Verdict<ProductWitness<S::Elem>>>
where
    S: Semigroup,
    P: Fn(&S::Elem) -> bool,
{
    if fseqs.is_empty() {
        return Err(Error::Domain("need at least one sequence".into()));
    }
    if search.m_bound == 0 || search.t_bound == 0 {
        return Err(Error::Domain("bounds must be ≥ 1".into()));
    }
    let identity = if search.allow_identity { inst.identity() } else { None };
    let mut domain: Vec<S::Elem> = identity.iter().cloned().collect();
    domain.extend(search.a_domain.iter().filter(|e| Some(*e) != identity.as_ref()).cloned());
    if domain.is_empty() {
        return Err(Error::Domain("empty candidate domain for a".into()));
    }
    let mut v = Verdict::new(
        "jset-noncommutative",
        json!({
            "semigroup": inst.name(),
            "m_bound": search.m_bound,
            "t_bound": search.t_bound,
            "a_domain_size": domain.len(),
            "allow_identity": identity.is_some(),
        }),
        Soundness::PassSound,
    );
    v.budget.limit = Some(search.budget);
    let mut explored = 0u64;
    let d = domain.len();
    for m in 1..=search.m_bound.min(search.t_bound) {
        let mut t: Vec<usize> = (1..=m).collect();
        loop {
            let mut idx = vec![0usize; m + 1];
            'a: loop {
                let trivial = identity.is_some() && idx.iter().all(|&i| i == 0);
                if !trivial {
                    if explored >= search.budget {
                        return Ok(v.finish(Status::Inconclusive, None, explored));
                    }
                    explored += 1;
                    let w = ProductWitness { m, a: idx.iter().map(|&i| domain[i].clone()).collect(), t: t.clone() };
                    if verify_jset_product(inst, &member, fseqs, &w) {
                        return Ok(v.finish(Status::HoldsWithWitness, Some(w), explored));
                    }
                }
                for pos in (0..=m).rev() {
                    idx[pos] += 1;
                    if idx[pos] < d {
                        continue 'a;
                    }
                    idx[pos] = 0;
                }
                break;
            }
            if !next_combination(&mut t, search.t_bound) {
                break;
            }
        }
    }
    Ok(v.finish(Status::FailsOnWindow, None, explored))
}

pub fn verify_ap(a: &WindowSet, k: usize, start: u64, d: u64) -> bool {
    d >= 1 && (0..k as u64).all(|i| d.checked_mul(i).and_then(|s| s.checked_add(start)).is_some_and(|m| a.contains(m)))
}

/// Least `(a, d)`, `d >= 1`, with `a, a+d, ..., a+(k-1)d ∈ A`.
pub fn check_ap_length(a: &WindowSet, k: usize) -> Result<Verdict<Witness>> {
    if k == 0 {
        return Err(Error::Domain("length k must be ≥ 1".into()));
    }
    let v = Verdict::new("ap", json!({ "k": k, "window": a.window_max() }), Soundness::PassSound);
    let n = a.window_max();
    let mut explored = 0;
    for start in a.iter() {
        let max_d = if k == 1 { 1 } else { (n - start) / (k as u64 - 1) };
        for d in 1..=max_d {
            explored += 1;
            if verify_ap(a, k, start, d) {
                return Ok(v.finish(Status::HoldsWithWitness, Some(Witness::Progression { a: start, d }), explored));
            }
        }
    }
    Ok(v.finish(Status::FailsOnWindow, None, explored))
}

fn ser_ratio<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn ser_big<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub n: u64,
    pub count: u64,
    /// `|A ∩ [1..n]| / n`, reduced.
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: Ratio<u64>,
    /// `max_{1<=m<=n} |A ∩ [1..m]| / m`, the finite stand-in for the limsup.
    #[serde(serialize_with = "ser_ratio")]
    pub running_max: Ratio<u64>,
    pub running_max_at: u64,
}

pub fn upper_density_prefix(a: &WindowSet, n: u64) -> Result<DensityReport> {
    if n == 0 || n > a.window_max() {
        return Err(Error::Domain(format!("prefix length {n} must lie in [1..{}]", a.window_max())));
    }
    let mut count = 0u64;
    let mut best = Ratio::new(0u64, 1);
    let mut best_at = 1;
    for m in 1..=n {
        if a.contains(m) {
            count += 1;
        }
        let r = Ratio::new(count, m);
        if r > best {
            best = r;
            best_at = m;
        }
    }
    Ok(DensityReport { n, count, ratio: Ratio::new(count, n), running_max: best, running_max_at: best_at })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarmonicReport {
    pub n: u64,
    pub terms: u64,
    /// `∑_{m∈A, m<=n} 1/m`, reduced. No divergence verdict is implied.
    #[serde(serialize_with = "ser_big")]
    pub sum: BigRational,
}

pub fn harmonic_partial_sum(a: &WindowSet, n: u64) -> Result<HarmonicReport> {
    if n > a.window_max() {
        return Err(Error::Domain(format!("prefix length {n} exceeds window {}", a.window_max())));
    }
    let mut sum = BigRational::zero();
    let mut terms = 0;
    for m in a.iter().take_while(|&m| m <= n) {
        sum += BigRational::new(BigInt::from(1), BigInt::from(m));
        terms += 1;
    }
    Ok(HarmonicReport { n, terms, sum })
}
