//! Backtracking construction of sum subsystems `y` of a sequence `x` with
//! `FS(y) ∪ FP(y) ⊆ A` or `FS(y) ∪ AP(y) ⊆ A`.
//!
//! Blocks `H_{m+1}` (with `min H_{m+1} > max H_m`) are tried in order of
//! (max index, size, lexicographic). A candidate `y = ∑_{t∈H} x_t` is admitted
//! when it keeps the finite constraints on the prefix:
//!
//! - `y ∈ A` and `s + y ∈ A` for `s ∈ FS(prefix)`;
//! - FS-FP: `p·y ∈ A` for `p ∈ FP(prefix)`;
//! - FS-AP: `s·y ∈ A`, and with both distributive laws also `y·s` and
//!   `s·y·t`, for `s, t ∈ AP(prefix)`.
//!
//! Every leaf is re-verified with [`verify_certificate`] before it is
//! returned; a leaf that fails sends the search back.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::semigroup::{Additive, Mat2, Multiplicative, Semigroup, WeakRing};
use crate::structures::{ap_generate, fp_generate, fs_generate, sum_subsystem, BlockSystem, Kind};

/// Largest index bound for exhaustive mode.
pub const MAX_EXHAUSTIVE_INDEX: usize = 10;
pub const DEFAULT_INDEX_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    FsFp,
    FsAp,
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fs-fp" => Ok(Structure::FsFp),
            "fs-ap" => Ok(Structure::FsAp),
            _ => Err(Error::Malformed(format!("unknown structure `{s}` (fs-fp or fs-ap)"))),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::FsFp => "fs-fp",
            Structure::FsAp => "fs-ap",
        })
    }
}

/// A source sequence: `pow2` (`x_n = 2^n`), `id` (`x_n = n`) or an explicit
/// list. Over `mat2`, integers `n` stand for `[[1,n],[0,1]]` and `a;b;c;d`
/// gives the entries row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XRule {
    Pow2,
    Id,
    List(Vec<XItem>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XItem {
    Int(u64),
    Matrix(Mat2),
}

impl FromStr for XRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pow2" => return Ok(XRule::Pow2),
            "id" => return Ok(XRule::Id),
            _ => {}
        }
        let bad = |t: &str| Error::Malformed(format!("bad sequence term `{t}` (try `pow2`, `id` or `3,5,8`)"));
        let items = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.contains(';') {
                    let e: Vec<u64> =
                        t.split(';').map(|v| v.trim().parse().map_err(|_| bad(t))).collect::<Result<_>>()?;
                    match e.as_slice() {
                        [a, b, c, d] => Ok(XItem::Matrix(Mat2([[*a, *b], [*c, *d]]))),
                        _ => Err(bad(t)),
                    }
                } else {
                    t.parse().map(XItem::Int).map_err(|_| bad(t))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(XRule::List(items))
    }
}

impl fmt::Display for XRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XRule::Pow2 => f.write_str("pow2"),
            XRule::Id => f.write_str("id"),
            XRule::List(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        XItem::Int(n) => n.to_string(),
                        XItem::Matrix(Mat2([[a, b], [c, d]])) => format!("{a};{b};{c};{d}"),
                    })
                    .collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl XRule {
    fn int_at(&self, n: usize) -> Result<u64> {
        match self {
            XRule::Pow2 => 1u64.checked_shl(n as u32).filter(|_| n < 64).ok_or(Error::Overflow("2^n")),
            XRule::Id => Ok(n as u64),
            XRule::List(_) => unreachable!(),
        }
    }

    fn len(&self, bound: usize) -> usize {
        match self {
            XRule::List(items) => items.len().min(bound),
            _ => bound,
        }
    }

    /// `x_1, ..., x_len` over `ℕ`.
    pub fn nat_prefix(&self, bound: usize) -> Result<Vec<u64>> {
        match self {
            XRule::List(items) => items
                .iter()
                .take(bound)
                .map(|i| match i {
                    XItem::Int(0) => Err(Error::Domain("sequence terms must be positive".into())),
                    XItem::Int(n) => Ok(*n),
                    XItem::Matrix(_) => Err(Error::Domain("matrix term in a sequence over nat".into())),
                })
                .collect(),
            _ => (1..=self.len(bound)).map(|n| self.int_at(n)).collect(),
        }
    }

    /// `x_1, ..., x_len` over 2×2 matrices.
    pub fn mat2_prefix(&self, bound: usize) -> Result<Vec<Mat2>> {
        match self {
            XRule::List(items) => Ok(items
                .iter()
                .take(bound)
                .map(|i| match i {
                    XItem::Int(n) => Mat2::unipotent(*n),
                    XItem::Matrix(m) => *m,
                })
                .collect()),
            _ => (1..=self.len(bound)).map(|n| self.int_at(n).map(Mat2::unipotent)).collect(),
        }
    }
}

pub struct BuildRequest<'a, R: WeakRing> {
    pub ring: &'a R,
    /// How `x` was described, recorded in the certificate.
    pub x_rule: String,
    /// `x_1, ..., x_L`; `L` is the index bound.
    pub x: Vec<R::Elem>,
    pub member: &'a dyn Fn(&R::Elem) -> bool,
    /// How `A` was described, recorded in reports.
    pub set: String,
    pub k: usize,
    pub structure: Structure,
    pub budget: u64,
    /// Recorded only; the search is deterministic.
    pub seed: u64,
    /// Use necessary-and-sufficient constraints and allow a nonexistence
    /// claim when the search completes. Needs `x.len() <= MAX_EXHAUSTIVE_INDEX`.
    pub exhaustive: bool,
}

impl<R: WeakRing> BuildRequest<'_, R> {
    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::Domain("budget must be at least 1".into()));
        }
        if self.x.is_empty() {
            return Err(Error::Domain("source sequence is empty".into()));
        }
        if self.exhaustive && self.x.len() > MAX_EXHAUSTIVE_INDEX {
            return Err(Error::TooLarge {
                what: "index bound for exhaustive mode",
                limit: MAX_EXHAUSTIVE_INDEX as u64,
                got: self.x.len() as u64,
            });
        }
        Ok(())
    }

    fn two_sided(&self) -> bool {
        self.ring.left_distributive() && self.ring.right_distributive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsystemCertificate<E> {
    pub ring: String,
    pub x_rule: String,
    pub structure: Structure,
    pub blocks: Vec<Vec<usize>>,
    pub y: Vec<E>,
    /// Distinct values of `FS(y)`, ascending.
    pub fs_elements: Vec<E>,
    /// Distinct values of `FP(y)` or `AP(y)`, ascending.
    pub fp_or_ap_elements: Vec<E>,
    pub fs_terms: usize,
    pub fp_or_ap_terms: usize,
    pub all_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck<E> {
    pub ok: bool,
    /// The first element (FS ascending, then FP/AP ascending) outside `A`.
    pub first_violation: Option<E>,
    pub checked: usize,
}

/// Recompute `y` from the blocks, regenerate `FS(y)` and `FP(y)`/`AP(y)`
/// and test every element against `A`.
pub fn verify_certificate<R: WeakRing>(
    cert: &SubsystemCertificate<R::Elem>,
    req: &BuildRequest<'_, R>,
) -> Result<CertificateCheck<R::Elem>> {
    let blocks = BlockSystem::new(cert.blocks.clone())?;
    let y = sum_subsystem(&req.x, &blocks, &Additive(req.ring))?;
    if y != cert.y {
        return Err(Error::Malformed("certificate terms do not match the blocks".into()));
    }
    if cert.structure != req.structure {
        return Err(Error::Malformed("certificate structure does not match the request".into()));
    }
    let (fs, other) = generate(&y, req.ring, cert.structure)?;
    let mut checked = 0;
    for v in fs.iter().chain(other.iter()) {
        checked += 1;
        if !(req.member)(v) {
            return Ok(CertificateCheck { ok: false, first_violation: Some(v.clone()), checked });
        }
    }
    Ok(CertificateCheck { ok: true, first_violation: None, checked })
}

type Generated<E> = (Vec<E>, Vec<E>);

fn generate<R: WeakRing>(y: &[R::Elem], ring: &R, structure: Structure) -> Result<Generated<R::Elem>> {
    let fs = fs_generate(y, &Additive(ring))?;
    let other = match structure {
        Structure::FsFp => fp_generate(y, &Multiplicative(ring))?,
        Structure::FsAp => ap_generate(y, &Multiplicative(ring))?,
    };
    debug_assert!(other.kind == Kind::Fp || other.kind == Kind::Ap);
    Ok((fs.values().cloned().collect(), other.values().cloned().collect()))
}

fn certificate<R: WeakRing>(
    req: &BuildRequest<'_, R>,
    blocks: Vec<Vec<usize>>,
    y: Vec<R::Elem>,
) -> Result<SubsystemCertificate<R::Elem>> {
    let fs = fs_generate(&y, &Additive(req.ring))?;
    let other = match req.structure {
        Structure::FsFp => fp_generate(&y, &Multiplicative(req.ring))?,
        Structure::FsAp => ap_generate(&y, &Multiplicative(req.ring))?,
    };
    Ok(SubsystemCertificate {
        ring: req.ring.name(),
        x_rule: req.x_rule.clone(),
        structure: req.structure,
        blocks,
        fs_terms: fs.term_count(),
        fp_or_ap_terms: other.term_count(),
        fs_elements: fs.values().cloned().collect(),
        fp_or_ap_elements: other.values().cloned().collect(),
        y,
        all_verified: false,
    })
}

fn ser_elems<E: Serialize, S: Serializer>(v: &[E], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildFailure<E: Serialize> {
    pub set: String,
    pub k: usize,
    pub index_bound: usize,
    pub explored: u64,
    pub budget: u64,
    /// The search stopped on the budget, not on exhaustion.
    pub budget_exhausted: bool,
    /// Only ever true in exhaustive mode with a complete search.
    pub nonexistence: bool,
    #[serde(serialize_with = "ser_elems")]
    pub deepest_prefix: Vec<E>,
    pub deepest_blocks: Vec<Vec<usize>>,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum BuildOutcome<E: Serialize> {
    Built { certificate: SubsystemCertificate<E>, explored: u64, seed: u64 },
    Failed(BuildFailure<E>),
}

/// Blocks after `prev_max` within `bound`, by (max index, size, lexicographic).
pub fn candidate_blocks(prev_max: usize, bound: usize) -> impl Iterator<Item = Vec<usize>> {
    (prev_max + 1..=bound).flat_map(move |top| {
        let pool: Vec<usize> = (prev_max + 1..top).collect();
        (0..=pool.len()).flat_map(move |extra| {
            combinations(pool.clone(), extra).map(move |mut c| {
                c.push(top);
                c
            })
        })
    })
}

fn combinations(pool: Vec<usize>, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let n = pool.len();
    let mut idx: Option<Vec<usize>> = if r <= n { Some((0..r).collect()) } else { None };
    std::iter::from_fn(move || {
        let cur = idx.take()?;
        let out: Vec<usize> = cur.iter().map(|&i| pool[i]).collect();
        let mut next = cur;
        let mut i = r;
        while i > 0 {
            i -= 1;
            if next[i] < n - r + i {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
                idx = Some(next);
                break;
            }
        }
        Some(out)
    })
}

// Finite data of the current prefix.
#[derive(Clone)]
struct Frame<E> {
    fs: Vec<E>,
    fp: Vec<E>,
    // (value, index mask) for every arrangement
    ap: Vec<(E, u32)>,
}

struct Search<'r, 'a, R: WeakRing> {
    req: &'r BuildRequest<'a, R>,
    explored: u64,
    out_of_budget: bool,
    overflowed: bool,
    blocks: Vec<Vec<usize>>,
    y: Vec<R::Elem>,
    deepest: (Vec<R::Elem>, Vec<Vec<usize>>),
}

impl<R: WeakRing> Search<'_, '_, R> {
    fn add(&mut self, a: &R::Elem, b: &R::Elem) -> Option<R::Elem> {
        let v = self.req.ring.add(a, b).ok();
        self.overflowed |= v.is_none();
        v
    }

    fn mul(&mut self, a: &R::Elem, b: &R::Elem) -> Option<R::Elem> {
        let v = self.req.ring.mul(a, b).ok();
        self.overflowed |= v.is_none();
        v
    }

    fn ok(&mut self, v: Option<R::Elem>) -> bool {
        v.is_some_and(|v| (self.req.member)(&v))
    }

    fn admissible(&mut self, frame: &Frame<R::Elem>, y: &R::Elem) -> bool {
        if !(self.req.member)(y) {
            return false;
        }
        for s in &frame.fs {
            let v = self.add(s, y);
            if !self.ok(v) {
                return false;
            }
        }
        match self.req.structure {
            Structure::FsFp => {
                for p in &frame.fp {
                    let v = self.mul(p, y);
                    if !self.ok(v) {
                        return false;
                    }
                }
            }
            Structure::FsAp => {
                let two_sided = self.req.exhaustive || self.req.two_sided();
                for (s, _) in &frame.ap {
                    let v = self.mul(s, y);
                    if !self.ok(v) {
                        return false;
                    }
                    if two_sided {
                        let v = self.mul(y, s);
                        if !self.ok(v) {
                            return false;
                        }
                    }
                }
                if two_sided {
                    for (s, ms) in &frame.ap {
                        for (t, mt) in &frame.ap {
                            if self.req.exhaustive && ms & mt != 0 {
                                continue;
                            }
                            let v = self.mul(s, y).and_then(|sy| self.mul(&sy, t));
                            if !self.ok(v) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn extend(&mut self, frame: &Frame<R::Elem>, y: &R::Elem, bit: u32) -> Option<Frame<R::Elem>> {
        let mut next = frame.clone();
        next.fs.push(y.clone());
        for s in &frame.fs {
            let v = self.add(s, y)?;
            next.fs.push(v);
        }
        match self.req.structure {
            Structure::FsFp => {
                next.fp.push(y.clone());
                for p in &frame.fp {
                    let v = self.mul(p, y)?;
                    next.fp.push(v);
                }
            }
            Structure::FsAp => {
                // every arrangement containing y: u·y·v with u, v disjoint
                next.ap.push((y.clone(), bit));
                for (u, mu) in &frame.ap {
                    let v = self.mul(u, y)?;
                    next.ap.push((v, mu | bit));
                    let v = self.mul(y, u)?;
                    next.ap.push((v, mu | bit));
                }
                for (u, mu) in &frame.ap {
                    for (w, mw) in &frame.ap {
                        if mu & mw == 0 {
                            let v = self.mul(u, y).and_then(|uy| self.mul(&uy, w))?;
                            next.ap.push((v, mu | mw | bit));
                        }
                    }
                }
            }
        }
        Some(next)
    }

    // Some(cert) on success, None when this subtree has nothing.
    fn go(&mut self, frame: &Frame<R::Elem>) -> Result<Option<SubsystemCertificate<R::Elem>>> {
        if self.y.len() > self.deepest.0.len() {
            self.deepest = (self.y.clone(), self.blocks.clone());
        }
        if self.y.len() == self.req.k {
            let mut cert = certificate(self.req, self.blocks.clone(), self.y.clone())?;
            if verify_certificate(&cert, self.req)?.ok {
                cert.all_verified = true;
                return Ok(Some(cert));
            }
            return Ok(None);
        }
        let prev = self.blocks.last().map_or(0, |b| *b.last().unwrap());
        let remaining = self.req.k - self.y.len();
        let bound = self.req.x.len() - (remaining - 1);
        if prev >= bound {
            return Ok(None);
        }
        for h in candidate_blocks(prev, bound) {
            if self.explored >= self.req.budget {
                self.out_of_budget = true;
                return Ok(None);
            }
            self.explored += 1;
            let terms: Vec<R::Elem> = h.iter().map(|&t| self.req.x[t - 1].clone()).collect();
            let Ok(y) = Additive(self.req.ring).product(&terms) else {
                self.overflowed = true;
                continue;
            };
            if !self.admissible(frame, &y) {
                continue;
            }
            let Some(next) = self.extend(frame, &y, 1 << self.y.len()) else { continue };
            self.blocks.push(h);
            self.y.push(y);
            if let Some(c) = self.go(&next)? {
                return Ok(Some(c));
            }
            self.blocks.pop();
            self.y.pop();
            if self.out_of_budget {
                return Ok(None);
            }
        }
        Ok(None)
    }
}

pub fn build<R: WeakRing>(req: &BuildRequest<'_, R>) -> Result<BuildOutcome<R::Elem>> {
    req.validate()?;
    let mut s = Search {
        req,
        explored: 0,
        out_of_budget: false,
        overflowed: false,
        blocks: Vec::new(),
        y: Vec::new(),
        deepest: (Vec::new(), Vec::new()),
    };
    let root = Frame { fs: Vec::new(), fp: Vec::new(), ap: Vec::new() };
    if let Some(certificate) = s.go(&root)? {
        return Ok(BuildOutcome::Built { certificate, explored: s.explored, seed: req.seed });
    }
    let nonexistence = req.exhaustive && !s.out_of_budget && !s.overflowed;
    let note = if s.out_of_budget {
        "budget exhausted; this is not a nonexistence claim"
    } else if nonexistence {
        "exhaustive search over every block system within the index bound found no subsystem"
    } else {
        "no subsystem found within the index bound; this is not a nonexistence claim"
    };
    Ok(BuildOutcome::Failed(BuildFailure {
        set: req.set.clone(),
        k: req.k,
        index_bound: req.x.len(),
        explored: s.explored,
        budget: req.budget,
        budget_exhausted: s.out_of_budget,
        nonexistence,
        deepest_prefix: s.deepest.0,
        deepest_blocks: s.deepest.1,
        note,
    }))
}

/// Every block system of `k` blocks within the index bound, in search order.
pub fn all_block_systems(k: usize, bound: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(k: usize, bound: usize, prev: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for h in candidate_blocks(prev, bound) {
            let top = *h.last().unwrap();
            cur.push(h);
            rec(k, bound, top, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, bound, 0, &mut Vec::new(), &mut out);
    out
}

/// Brute-force oracle: the first block system (in search order) whose
/// certificate verifies, ignoring the incremental constraints entirely.
pub fn brute_force<R: WeakRing>(req: &BuildRequest<'_, R>) -> Result<Option<Vec<Vec<usize>>>> {
    for blocks in all_block_systems(req.k, req.x.len()) {
        let bs = BlockSystem::new(blocks.clone())?;
        let Ok(y) = sum_subsystem(&req.x, &bs, &Additive(req.ring)) else { continue };
        let Ok((fs, other)) = generate(&y, req.ring, req.structure) else { continue };
        if fs.iter().chain(other.iter()).all(|v| (req.member)(v)) {
            return Ok(Some(blocks));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{Mat2Ring, NatRing};
    use crate::setexpr::SetExpr;

    fn nat_req<'a>(member: &'a dyn Fn(&u64) -> bool, x: Vec<u64>, k: usize, s: Structure) -> BuildRequest<'a, NatRing> {
        static RING: NatRing = NatRing { sample_max: 1000 };
        BuildRequest {
            ring: &RING,
            x_rule: "test".into(),
            x,
            member,
            set: "test".into(),
            k,
            structure: s,
            budget: 100_000,
            seed: 0,
            exhaustive: false,
        }
    }

    #[test]
    fn block_order() {
        let b: Vec<Vec<usize>> = candidate_blocks(0, 3).collect();
        assert_eq!(b, vec![vec![1], vec![2], vec![1, 2], vec![3], vec![1, 3], vec![2, 3], vec![1, 2, 3]]);
        assert_eq!(candidate_blocks(2, 4).collect::<Vec<_>>(), vec![vec![3], vec![4], vec![3, 4]]);
        assert_eq!(candidate_blocks(4, 4).count(), 0);
    }

    #[test]
    fn evens_from_powers() {
        let evens = SetExpr::parse("mod(2,0)").unwrap().compile().unwrap();
        let m = move |v: &u64| evens.contains(*v);
        let x = XRule::Pow2.nat_prefix(12).unwrap();
        let req = nat_req(&m, x, 3, Structure::FsFp);
        let BuildOutcome::Built { certificate: c, .. } = build(&req).unwrap() else { panic!() };
        assert_eq!(c.y, vec![2, 4, 8]);
        assert_eq!(c.blocks, vec![vec![1], vec![2], vec![3]]);
        assert!(c.all_verified);
        assert!(verify_certificate(&c, &req).unwrap().ok);

        // an alternative certificate with y = (2, 4, 16) also verifies
        let mut alt = certificate(&req, vec![vec![1], vec![2], vec![4]], vec![2, 4, 16]).unwrap();
        assert_eq!(alt.fs_elements, vec![2, 4, 6, 16, 18, 20, 22]);
        assert_eq!(alt.fp_or_ap_elements, vec![2, 4, 8, 16, 32, 64, 128]);
        assert!(verify_certificate(&alt, &req).unwrap().ok);

        let odd = |v: &u64| v % 2 == 1;
        let odd_req = nat_req(&odd, req.x.clone(), 3, Structure::FsFp);
        let check = verify_certificate(&c, &odd_req).unwrap();
        assert_eq!(check.first_violation, Some(2));

        alt.blocks = vec![vec![2], vec![1], vec![4]];
        assert!(matches!(verify_certificate(&alt, &req), Err(Error::InvalidBlocks(_))));
    }

    #[test]
    fn odds_fail() {
        let odd = |v: &u64| v % 2 == 1;
        let mut req = nat_req(&odd, XRule::Id.nat_prefix(6).unwrap(), 2, Structure::FsFp);
        let BuildOutcome::Failed(f) = build(&req).unwrap() else { panic!() };
        assert!(!f.nonexistence);
        assert!(!f.budget_exhausted);
        req.exhaustive = true;
        let BuildOutcome::Failed(f) = build(&req).unwrap() else { panic!() };
        assert!(f.nonexistence);
        assert_eq!(f.deepest_prefix, vec![1]);
        assert_eq!(brute_force(&req).unwrap(), None);
    }

    #[test]
    fn budget_failure_is_not_a_claim() {
        let odd = |v: &u64| v % 2 == 1;
        let mut req = nat_req(&odd, XRule::Id.nat_prefix(6).unwrap(), 2, Structure::FsFp);
        req.exhaustive = true;
        req.budget = 3;
        let BuildOutcome::Failed(f) = build(&req).unwrap() else { panic!() };
        assert!(f.budget_exhausted);
        assert!(!f.nonexistence);
    }

    #[test]
    fn matrices_with_even_trace() {
        let ring = Mat2Ring::default();
        let even = |m: &Mat2| m.trace().is_ok_and(|t| t % 2 == 0);
        let req = BuildRequest {
            ring: &ring,
            x_rule: "id".into(),
            x: XRule::Id.mat2_prefix(8).unwrap(),
            member: &even,
            set: "trace even".into(),
            k: 3,
            structure: Structure::FsAp,
            budget: 100_000,
            seed: 0,
            exhaustive: false,
        };
        let BuildOutcome::Built { certificate: c, .. } = build(&req).unwrap() else { panic!() };
        assert_eq!(c.blocks, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(c.fp_or_ap_terms, 15);
        assert!(verify_certificate(&c, &req).unwrap().ok);
    }

    #[test]
    fn x_rules() {
        assert_eq!(XRule::Pow2.nat_prefix(3).unwrap(), vec![2, 4, 8]);
        assert_eq!("3, 5".parse::<XRule>().unwrap().nat_prefix(10).unwrap(), vec![3, 5]);
        let r: XRule = "1;2;0;1,3".parse().unwrap();
        assert_eq!(r.mat2_prefix(5).unwrap(), vec![Mat2([[1, 2], [0, 1]]), Mat2::unipotent(3)]);
        assert!(r.nat_prefix(5).is_err());
        assert_eq!(r.to_string(), "1;2;0;1,3");
        assert!(XRule::Pow2.nat_prefix(64).is_err());
        assert!("x".parse::<XRule>().is_err());
    }
}
