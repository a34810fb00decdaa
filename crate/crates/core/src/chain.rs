//! Depth-truncated verification of decreasing-chain and tree certificates
//! for essential sets, and their transport under dilation.
//!
//! A chain `A ⊇ C_1 ⊇ ... ⊇ C_d` passes when every `C_n` satisfies the
//! named predicate and, for each `n` and each tested `x ∈ C_n`, some `m`
//! has `∅ ≠ C_m ⊆ -x + C_n` on the shrunken window.
//!
//! Over a window `[1..N]` only `x <= threshold` is tested (default: `2x < N`).
//! Over `ℤ_n` every `x` is tested.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::properties::{Query, Status, DEFAULT_BUDGET};
use crate::setexpr::SetExpr;
use crate::window::WindowSet;

/// Largest tree produced by [`chain_to_tree`].
pub const MAX_TREE_NODES: usize = 200_000;
/// Largest number of non-frontier nodes for the full collection.
pub const MAX_FULL_COLLECTION_NODES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Carrier {
    /// `(ℕ, +)` seen through the window `[1..window]`.
    Nat { window: u64 },
    /// `(ℤ_n, +)`.
    Cyclic { modulus: u64 },
}

impl Carrier {
    fn capacity(self) -> usize {
        match self {
            Carrier::Nat { window } => window as usize + 1,
            Carrier::Cyclic { modulus } => modulus as usize,
        }
    }

    fn admits(self, e: u64) -> bool {
        match self {
            Carrier::Nat { window } => e >= 1 && e <= window,
            Carrier::Cyclic { modulus } => e < modulus,
        }
    }

    /// `x + y` if it is still inside the carrier's window.
    fn shift(self, x: u64, y: u64) -> Option<u64> {
        match self {
            Carrier::Nat { window } => x.checked_add(y).filter(|&s| s <= window),
            Carrier::Cyclic { modulus } => Some((x + y) % modulus),
        }
    }

    fn default_threshold(self) -> u64 {
        match self {
            Carrier::Nat { window } => (window - 1) / 2,
            Carrier::Cyclic { modulus } => modulus,
        }
    }

    fn set(self, members: impl IntoIterator<Item = u64>) -> Result<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(self.capacity());
        for e in members {
            if !self.admits(e) {
                return Err(Error::OutOfWindow { element: e, window: self.capacity() as u64 });
            }
            bits.insert(e as usize);
        }
        Ok(bits)
    }

    fn check(self) -> Result<()> {
        match self {
            Carrier::Nat { window: 0 } => Err(Error::EmptyWindow("window must be at least 1".into())),
            Carrier::Cyclic { modulus: 0 } => Err(Error::Domain("modulus must be at least 1".into())),
            Carrier::Nat { window } if window > 1 << 26 => {
                Err(Error::TooLarge { what: "certificate window", limit: 1 << 26, got: window })
            }
            Carrier::Cyclic { modulus } if modulus > 1 << 26 => {
                Err(Error::TooLarge { what: "certificate modulus", limit: 1 << 26, got: modulus })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Nat { window } => write!(f, "nat {window}"),
            Carrier::Cyclic { modulus } => write!(f, "cyclic {modulus}"),
        }
    }
}

impl FromStr for Carrier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split_whitespace();
        let kind = it.next();
        let n = it.next().and_then(|n| n.parse::<u64>().ok());
        let c = match (kind, n, it.next()) {
            (Some("nat"), Some(window), None) => Carrier::Nat { window },
            (Some("cyclic"), Some(modulus), None) => Carrier::Cyclic { modulus },
            _ => return Err(Error::Malformed(format!("bad carrier `{s}` (try `nat 1000` or `cyclic 12`)"))),
        };
        c.check()?;
        Ok(c)
    }
}

/// The predicate each chain set (or tree intersection) must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FPred {
    Nonempty,
    Thick { f: Vec<u64> },
    Syndetic { g: Vec<u64> },
    PiecewiseSyndetic { g: Vec<u64>, f: Vec<u64> },
    Ip { k: usize },
    Ap { k: usize },
}

fn list(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Malformed(format!("bad integer list `{s}`"))))
        .collect()
}

impl fmt::Display for FPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FPred::Nonempty => f.write_str("nonempty"),
            FPred::Thick { f: o } => write!(f, "thick {}", list(o)),
            FPred::Syndetic { g } => write!(f, "syndetic {}", list(g)),
            FPred::PiecewiseSyndetic { g, f: o } => write!(f, "ps {} {}", list(g), list(o)),
            FPred::Ip { k } => write!(f, "ip {k}"),
            FPred::Ap { k } => write!(f, "ap {k}"),
        }
    }
}

impl FromStr for FPred {
    type Err = Error;

    /// `nonempty`, `thick 0,1,2`, `syndetic 1,2`, `ps 1,2 0,1`, `ip 2`, `ap 3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::Malformed(format!("bad count `{t}`")));
        Ok(match parts.as_slice() {
            ["nonempty"] => FPred::Nonempty,
            ["thick", f] => FPred::Thick { f: parse_list(f)? },
            ["syndetic", g] => FPred::Syndetic { g: parse_list(g)? },
            ["ps", g, f] => FPred::PiecewiseSyndetic { g: parse_list(g)?, f: parse_list(f)? },
            ["ip", k] => FPred::Ip { k: num(k)? },
            ["ap", k] => FPred::Ap { k: num(k)? },
            _ => return Err(Error::Malformed(format!("unknown set predicate `{s}`"))),
        })
    }
}

impl Serialize for FPred {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FPred {
    fn supports(&self, carrier: Carrier) -> Result<()> {
        match (self, carrier) {
            (FPred::Nonempty, _) | (_, Carrier::Nat { .. }) => Ok(()),
            (p, c) => Err(Error::Unsupported(format!("predicate `{p}` is only available over nat, not {c}"))),
        }
    }

    fn query(&self) -> Option<Query> {
        Some(match self {
            FPred::Nonempty => return None,
            FPred::Thick { f } => Query::Thick { f: f.clone() },
            FPred::Syndetic { g } => Query::Syndetic { g: g.clone() },
            FPred::PiecewiseSyndetic { g, f } => Query::PiecewiseSyndetic { g: g.clone(), f: f.clone() },
            FPred::Ip { k } => Query::Ip { k: *k, search_bound: None, budget: DEFAULT_BUDGET },
            FPred::Ap { k } => Query::Ap { k: *k },
        })
    }

    /// Evaluate on a set of the carrier. Parameter errors (for example an
    /// offset that does not fit the window) count as a failure.
    pub fn eval(&self, carrier: Carrier, set: &FixedBitSet) -> Status {
        let Some(q) = self.query() else {
            return if set.is_clear() { Status::FailsOnWindow } else { Status::HoldsWithWitness };
        };
        let Carrier::Nat { window } = carrier else { return Status::Inconclusive };
        let Ok(w) = WindowSet::from_members(window, set.ones().map(|i| i as u64)) else {
            return Status::FailsOnWindow;
        };
        match q.run(&w) {
            Ok(v) if v.status == Status::HoldsWithWitness && q.reverify(&w, &v) => Status::HoldsWithWitness,
            Ok(v) if v.status == Status::Inconclusive => Status::Inconclusive,
            _ => Status::FailsOnWindow,
        }
    }

    /// The predicate satisfied by `nC` whenever `C` satisfies `self`.
    pub fn dilated(&self, n: u64) -> Result<FPred> {
        Ok(match self {
            FPred::Nonempty => FPred::Nonempty,
            FPred::Thick { f } => FPred::Thick {
                f: f.iter()
                    .map(|o| o.checked_mul(n).ok_or(Error::Overflow("dilated offsets")))
                    .collect::<Result<_>>()?,
            },
            FPred::Ip { k } => FPred::Ip { k: *k },
            FPred::Ap { k } => FPred::Ap { k: *k },
            p => return Err(Error::Unsupported(format!("predicate `{p}` has no dilation transport"))),
        })
    }
}

fn ser_bits<S: Serializer>(b: &FixedBitSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(b.ones())
}

fn ser_chain<S: Serializer>(v: &[FixedBitSet], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.ones().collect::<Vec<_>>()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCertificate {
    pub carrier: Carrier,
    #[serde(serialize_with = "ser_bits")]
    target: FixedBitSet,
    #[serde(serialize_with = "ser_chain")]
    chain: Vec<FixedBitSet>,
    pub fpred: FPred,
    /// Largest `x` for which the link condition is demanded (nat only).
    pub threshold: Option<u64>,
}

fn members(b: &FixedBitSet) -> Vec<u64> {
    b.ones().map(|i| i as u64).collect()
}

/// Parse `{1,2,3}` / `{}` as an explicit member list.
fn parse_braced(s: &str) -> Option<Result<Vec<u64>>> {
    let body = s.trim().strip_prefix('{')?.strip_suffix('}')?;
    if body.trim().is_empty() {
        return Some(Ok(Vec::new()));
    }
    Some(parse_list(body))
}

fn parse_set(carrier: Carrier, text: &str) -> Result<FixedBitSet> {
    if let Some(m) = parse_braced(text) {
        return carrier.set(m?);
    }
    match carrier {
        Carrier::Nat { window } => {
            let w = SetExpr::parse(text)?.eval(window)?;
            if w.window_max() != window {
                return Err(Error::Domain(format!(
                    "`{text}` only has exact membership on [1..{}], not the certificate window",
                    w.window_max()
                )));
            }
            carrier.set(w.iter())
        }
        Carrier::Cyclic { .. } => {
            Err(Error::Malformed(format!("sets over a cyclic carrier are written `{{0,3}}`, found `{text}`")))
        }
    }
}

/// Split `key rest` lines, skipping blanks and `#` comments.
fn keyed_lines(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        if l.is_empty() {
            return None;
        }
        let (k, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        Some((i + 1, k, rest.trim()))
    })
}

fn missing(what: &str) -> Error {
    Error::Malformed(format!("certificate is missing a `{what}` line"))
}

impl ChainCertificate {
    pub fn new(
        carrier: Carrier,
        target: Vec<u64>,
        chain: Vec<Vec<u64>>,
        fpred: FPred,
        threshold: Option<u64>,
    ) -> Result<Self> {
        carrier.check()?;
        fpred.supports(carrier)?;
        if chain.is_empty() {
            return Err(Error::Domain("chain must have at least one set".into()));
        }
        Ok(ChainCertificate {
            carrier,
            target: carrier.set(target)?,
            chain: chain.into_iter().map(|c| carrier.set(c)).collect::<Result<_>>()?,
            fpred,
            threshold,
        })
    }

    /// A chain over `ℕ` from window sets sharing one window.
    pub fn from_window_sets(
        target: &WindowSet,
        chain: &[WindowSet],
        fpred: FPred,
        threshold: Option<u64>,
    ) -> Result<Self> {
        let window = target.window_max();
        if let Some(c) = chain.iter().find(|c| c.window_max() != window) {
            return Err(Error::WindowMismatch { left: window, right: c.window_max() });
        }
        Self::new(
            Carrier::Nat { window },
            target.iter().collect(),
            chain.iter().map(|c| c.iter().collect()).collect(),
            fpred,
            threshold,
        )
    }

    /// Text format:
    ///
    /// ```text
    /// carrier nat 8192        # or: carrier cyclic 12
    /// target mod(2,0)         # set expression or {..}
    /// fpred nonempty
    /// threshold 100           # optional
    /// chain fs(4,8,16)
    /// chain {8,16,24}
    /// ```
    pub fn from_text(text: &str) -> Result<Self> {
        let (mut carrier, mut target, mut fpred, mut threshold) = (None, None, None, None);
        let mut chain = Vec::new();
        for (line, key, rest) in keyed_lines(text) {
            match key {
                "carrier" => carrier = Some(rest.parse::<Carrier>()?),
                "target" => target = Some(rest.to_string()),
                "fpred" => fpred = Some(rest.parse::<FPred>()?),
                "threshold" => {
                    threshold =
                        Some(rest.parse::<u64>().map_err(|_| Error::Malformed(format!("line {line}: bad threshold"))))
                }
                "chain" => chain.push(rest.to_string()),
                other => return Err(Error::Malformed(format!("line {line}: unknown key `{other}`"))),
            }
        }
        let carrier = carrier.ok_or_else(|| missing("carrier"))?;
        let fpred = fpred.ok_or_else(|| missing("fpred"))?;
        let target = target.ok_or_else(|| missing("target"))?;
        carrier.check()?;
        fpred.supports(carrier)?;
        if chain.is_empty() {
            return Err(missing("chain"));
        }
        Ok(ChainCertificate {
            carrier,
            target: parse_set(carrier, &target)?,
            chain: chain.iter().map(|c| parse_set(carrier, c)).collect::<Result<_>>()?,
            fpred,
            threshold: threshold.transpose()?,
        })
    }

    /// Target `FS(x_1, ..., x_k)` and chain `C_i = FS(x_{i+1}, ..., x_k)`
    /// for `i = 1..k-1`, over the window `[1..window]`.
    pub fn fs_tails(x: &[u64], window: u64, fpred: FPred) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::Domain("need at least two generators".into()));
        }
        let fs = |xs: &[u64]| -> Result<Vec<u64>> { Ok(SetExpr::Fs(xs.to_vec()).eval(window)?.iter().collect()) };
        let chain = (1..x.len()).map(|i| fs(&x[i..])).collect::<Result<Vec<_>>>()?;
        Self::new(Carrier::Nat { window }, fs(x)?, chain, fpred, None)
    }

    /// `d` copies of one set as the target and every chain link.
    pub fn constant(carrier: Carrier, set: Vec<u64>, depth: usize, fpred: FPred) -> Result<Self> {
        Self::new(carrier, set.clone(), vec![set; depth], fpred, None)
    }

    pub fn to_text(&self) -> String {
        let braced = |b: &FixedBitSet| format!("{{{}}}", list(&members(b)));
        let mut out = format!("carrier {}\ntarget {}\nfpred {}\n", self.carrier, braced(&self.target), self.fpred);
        if let Some(t) = self.threshold {
            out.push_str(&format!("threshold {t}\n"));
        }
        for c in &self.chain {
            out.push_str(&format!("chain {}\n", braced(c)));
        }
        out
    }

    pub fn depth(&self) -> usize {
        self.chain.len()
    }

    pub fn target(&self) -> Vec<u64> {
        members(&self.target)
    }

    pub fn link(&self, n: usize) -> Vec<u64> {
        members(&self.chain[n - 1])
    }

    pub fn effective_threshold(&self) -> u64 {
        match self.carrier {
            Carrier::Nat { .. } => self.threshold.unwrap_or(self.carrier.default_threshold()),
            Carrier::Cyclic { modulus } => modulus,
        }
    }

    /// Least `m` with `∅ ≠ C_m ⊆ -x + C_n` on the shrunken window.
    pub fn link_witness(&self, n: usize, x: u64) -> Option<usize> {
        let cn = &self.chain[n - 1];
        (1..=self.depth()).find(|&m| contained_in_shift(self.carrier, &self.chain[m - 1], x, cn))
    }
}

/// `∅ ≠ B ∩ window ⊆ -x + C`, where the window for `ℕ` is `[1..N-x]`.
fn contained_in_shift(carrier: Carrier, b: &FixedBitSet, x: u64, c: &FixedBitSet) -> bool {
    let mut any = false;
    for y in b.ones() {
        match carrier.shift(x, y as u64) {
            Some(s) => {
                if !c.contains(s as usize) {
                    return false;
                }
                any = true;
            }
            None => break,
        }
    }
    any
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkWitness {
    pub n: usize,
    pub x: u64,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub n: usize,
    /// Elements of `C_n` above the threshold, whose link was not demanded.
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChainFailure {
    /// `element ∈ C_n` but not in `C_{n-1}` (or the target when `n = 1`).
    NotDecreasing {
        n: usize,
        element: u64,
    },
    /// No `m` has `∅ ≠ C_m ⊆ -x + C_n`.
    Link {
        n: usize,
        x: u64,
    },
    Fpred {
        n: usize,
        status: Status,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub verified: bool,
    pub status: Status,
    pub carrier: Carrier,
    pub depth: usize,
    pub fpred: FPred,
    pub threshold: u64,
    pub links: Vec<LinkWitness>,
    pub skipped: Vec<Skipped>,
    pub fpred_checked: usize,
    pub failure: Option<ChainFailure>,
}

pub fn verify_chain(cert: &ChainCertificate) -> ChainReport {
    let threshold = cert.effective_threshold();
    let mut report = ChainReport {
        verified: false,
        status: Status::FailsOnWindow,
        carrier: cert.carrier,
        depth: cert.depth(),
        fpred: cert.fpred.clone(),
        threshold,
        links: Vec::new(),
        skipped: Vec::new(),
        fpred_checked: 0,
        failure: None,
    };
    let mut outer = &cert.target;
    for (i, c) in cert.chain.iter().enumerate() {
        if let Some(e) = c.ones().find(|&e| !outer.contains(e)) {
            report.failure = Some(ChainFailure::NotDecreasing { n: i + 1, element: e as u64 });
            return report;
        }
        outer = c;
    }
    for n in 1..=cert.depth() {
        let mut skipped = 0;
        for x in cert.chain[n - 1].ones().map(|x| x as u64) {
            if x > threshold {
                skipped += 1;
                continue;
            }
            match cert.link_witness(n, x) {
                Some(m) => report.links.push(LinkWitness { n, x, m }),
                None => {
                    report.failure = Some(ChainFailure::Link { n, x });
                    return report;
                }
            }
        }
        if skipped > 0 {
            report.skipped.push(Skipped { n, count: skipped });
        }
    }
    for n in 1..=cert.depth() {
        report.fpred_checked += 1;
        let status = cert.fpred.eval(cert.carrier, &cert.chain[n - 1]);
        if status != Status::HoldsWithWitness {
            report.status = status;
            report.failure = Some(ChainFailure::Fpred { n, status });
            return report;
        }
    }
    report.verified = true;
    report.status = Status::HoldsWithWitness;
    report
}

/// Target `nA` and chain `nC_1 ⊇ ... ⊇ nC_d` with the predicate transported.
/// Over `ℕ` the window becomes `[1..n·N]`, so no element is lost.
pub fn dilate_chain(cert: &ChainCertificate, n: u64) -> Result<ChainCertificate> {
    if n == 0 {
        return Err(Error::Domain("dilation factor must be at least 1".into()));
    }
    let (carrier, scale): (Carrier, Box<dyn Fn(u64) -> u64>) = match cert.carrier {
        Carrier::Nat { window } => {
            let window = window.checked_mul(n).ok_or(Error::Overflow("dilated window"))?;
            (Carrier::Nat { window }, Box::new(move |a| a * n))
        }
        Carrier::Cyclic { modulus } => (cert.carrier, Box::new(move |a| a * (n % modulus) % modulus)),
    };
    carrier.check()?;
    let dil = |b: &FixedBitSet| carrier.set(b.ones().map(|a| scale(a as u64)));
    Ok(ChainCertificate {
        carrier,
        target: dil(&cert.target)?,
        chain: cert.chain.iter().map(dil).collect::<Result<_>>()?,
        fpred: cert.fpred.dilated(n)?,
        threshold: match cert.carrier {
            Carrier::Nat { .. } => cert.threshold.map(|t| t.saturating_mul(n)),
            Carrier::Cyclic { .. } => cert.threshold,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Collection {
    /// Every non-frontier node alone, and paired with the root.
    Default,
    /// Every nonempty set of non-frontier nodes.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeCertificate {
    pub carrier: Carrier,
    #[serde(serialize_with = "ser_bits")]
    target: FixedBitSet,
    pub depth: usize,
    pub fpred: FPred,
    pub nodes: BTreeSet<Vec<u64>>,
    pub collection: Collection,
    pub threshold: Option<u64>,
}

impl TreeCertificate {
    pub fn new(
        carrier: Carrier,
        target: Vec<u64>,
        depth: usize,
        fpred: FPred,
        nodes: BTreeSet<Vec<u64>>,
        collection: Collection,
        threshold: Option<u64>,
    ) -> Result<Self> {
        carrier.check()?;
        fpred.supports(carrier)?;
        let cert =
            TreeCertificate { carrier, target: carrier.set(target)?, depth, fpred, nodes, collection, threshold };
        cert.well_formed()?;
        Ok(cert)
    }

    fn well_formed(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::Domain("tree depth must be at least 1".into()));
        }
        if !self.nodes.contains(&Vec::new()) {
            return Err(Error::Malformed("tree must contain the empty sequence".into()));
        }
        for f in &self.nodes {
            if f.len() > self.depth {
                return Err(Error::Malformed(format!("node {f:?} is longer than depth {}", self.depth)));
            }
            if let Some(&e) = f.iter().find(|&&e| !self.carrier.admits(e)) {
                return Err(Error::OutOfWindow { element: e, window: self.carrier.capacity() as u64 });
            }
            if let Some((_, prefix)) = f.split_last() {
                if !self.nodes.contains(prefix) {
                    return Err(Error::Malformed(format!("tree is not prefix-closed: {f:?} lacks prefix {prefix:?}")));
                }
            }
        }
        Ok(())
    }

    /// Text format:
    ///
    /// ```text
    /// carrier cyclic 2
    /// target {0,1}
    /// depth 2
    /// fpred nonempty
    /// node                    # the empty sequence
    /// node 0
    /// node 0 1
    /// collection full         # optional
    /// ```
    pub fn from_text(text: &str) -> Result<Self> {
        let (mut carrier, mut target, mut depth, mut fpred, mut threshold) = (None, None, None, None, None);
        let mut collection = Collection::Default;
        let mut nodes = BTreeSet::new();
        for (line, key, rest) in keyed_lines(text) {
            let bad = |what: &str| Error::Malformed(format!("line {line}: bad {what}"));
            match key {
                "carrier" => carrier = Some(rest.parse::<Carrier>()?),
                "target" => target = Some(rest.to_string()),
                "depth" => depth = Some(rest.parse::<usize>().map_err(|_| bad("depth"))?),
                "fpred" => fpred = Some(rest.parse::<FPred>()?),
                "threshold" => threshold = Some(rest.parse::<u64>().map_err(|_| bad("threshold"))?),
                "collection" => {
                    collection = match rest {
                        "default" => Collection::Default,
                        "full" => Collection::Full,
                        _ => return Err(bad("collection")),
                    }
                }
                "node" => {
                    let f = rest
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse::<u64>().map_err(|_| bad("node")))
                        .collect::<Result<Vec<_>>>()?;
                    nodes.insert(f);
                }
                other => return Err(Error::Malformed(format!("line {line}: unknown key `{other}`"))),
            }
        }
        let carrier = carrier.ok_or_else(|| missing("carrier"))?;
        let target = parse_set(carrier, &target.ok_or_else(|| missing("target"))?)?;
        Self::new(
            carrier,
            members(&target),
            depth.ok_or_else(|| missing("depth"))?,
            fpred.ok_or_else(|| missing("fpred"))?,
            nodes,
            collection,
            threshold,
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "carrier {}\ntarget {{{}}}\ndepth {}\nfpred {}\n",
            self.carrier,
            list(&members(&self.target)),
            self.depth,
            self.fpred
        );
        if let Some(t) = self.threshold {
            out.push_str(&format!("threshold {t}\n"));
        }
        if self.collection == Collection::Full {
            out.push_str("collection full\n");
        }
        for f in &self.nodes {
            let f: Vec<String> = f.iter().map(|e| e.to_string()).collect();
            out.push_str(format!("node {}", f.join(" ")).trim_end());
            out.push('\n');
        }
        out
    }

    fn effective_threshold(&self) -> u64 {
        match self.carrier {
            Carrier::Nat { .. } => self.threshold.unwrap_or(self.carrier.default_threshold()),
            Carrier::Cyclic { modulus } => modulus,
        }
    }

    /// `B_f(T) = {x : f⌢x ∈ T}`.
    pub fn branch(&self, f: &[u64]) -> Vec<u64> {
        self.branches().remove(f).map(|b| members(&b)).unwrap_or_default()
    }

    fn branches(&self) -> BTreeMap<Vec<u64>, FixedBitSet> {
        let mut out: BTreeMap<Vec<u64>, FixedBitSet> = self
            .nodes
            .iter()
            .filter(|f| f.len() < self.depth)
            .map(|f| (f.clone(), FixedBitSet::with_capacity(self.carrier.capacity())))
            .collect();
        for f in &self.nodes {
            if let Some((&x, prefix)) = f.split_last() {
                if let Some(b) = out.get_mut(prefix) {
                    b.insert(x as usize);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TreeFailure {
    /// A node uses an element outside the target.
    Range {
        node: Vec<u64>,
        element: u64,
    },
    /// `y ∈ B_{f⌢x}` on the window but `x + y ∉ B_f`.
    Link {
        node: Vec<u64>,
        x: u64,
        y: u64,
    },
    Fpred {
        nodes: Vec<Vec<u64>>,
        status: Status,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeReport {
    pub verified: bool,
    pub status: Status,
    pub nodes: usize,
    pub non_frontier: usize,
    pub links_checked: u64,
    pub skipped: u64,
    pub collection: Collection,
    pub collection_checked: u64,
    pub failure: Option<TreeFailure>,
}

pub fn verify_tree(cert: &TreeCertificate) -> Result<TreeReport> {
    cert.well_formed()?;
    let branches = cert.branches();
    let mut report = TreeReport {
        verified: false,
        status: Status::FailsOnWindow,
        nodes: cert.nodes.len(),
        non_frontier: branches.len(),
        links_checked: 0,
        skipped: 0,
        collection: cert.collection,
        collection_checked: 0,
        failure: None,
    };
    for f in &cert.nodes {
        if let Some(&e) = f.iter().find(|&&e| !cert.target.contains(e as usize)) {
            report.failure = Some(TreeFailure::Range { node: f.clone(), element: e });
            return Ok(report);
        }
    }
    let threshold = cert.effective_threshold();
    let empty = FixedBitSet::with_capacity(cert.carrier.capacity());
    for (f, bf) in &branches {
        for x in bf.ones().map(|x| x as u64) {
            if x > threshold {
                report.skipped += 1;
                continue;
            }
            report.links_checked += 1;
            let mut child = f.clone();
            child.push(x);
            let bc = branches.get(&child).unwrap_or(&empty);
            for y in bc.ones().map(|y| y as u64) {
                let Some(s) = cert.carrier.shift(x, y) else { break };
                if !bf.contains(s as usize) {
                    report.failure = Some(TreeFailure::Link { node: f.clone(), x, y });
                    return Ok(report);
                }
            }
        }
    }
    let keys: Vec<&Vec<u64>> = branches.keys().collect();
    let groups: Vec<Vec<usize>> = match cert.collection {
        Collection::Default => {
            let mut g: Vec<Vec<usize>> = (0..keys.len()).map(|i| vec![i]).collect();
            // keys are sorted, so the root is index 0
            g.extend((1..keys.len()).map(|i| vec![0, i]));
            g
        }
        Collection::Full => {
            if keys.len() > MAX_FULL_COLLECTION_NODES {
                return Err(Error::TooLarge {
                    what: "non-frontier nodes for the full collection",
                    limit: MAX_FULL_COLLECTION_NODES as u64,
                    got: keys.len() as u64,
                });
            }
            (1u32..1 << keys.len()).map(|m| (0..keys.len()).filter(|i| m >> i & 1 == 1).collect()).collect()
        }
    };
    for g in groups {
        report.collection_checked += 1;
        let mut inter = branches[keys[g[0]]].clone();
        for &i in &g[1..] {
            inter.intersect_with(&branches[keys[i]]);
        }
        let status = cert.fpred.eval(cert.carrier, &inter);
        if status != Status::HoldsWithWitness {
            report.status = status;
            report.failure = Some(TreeFailure::Fpred { nodes: g.iter().map(|&i| keys[i].clone()).collect(), status });
            return Ok(report);
        }
    }
    report.verified = true;
    report.status = Status::HoldsWithWitness;
    Ok(report)
}

/// Unfold a chain into a tree of the given depth. Each node carries a chain
/// index: the root gets 1, and the child `f⌢x` of a node with index `n`
/// gets the link witness `m(n, x)`, or `n` itself when `x` is above the
/// threshold. Then `B_f = C_{index(f)}` for every non-frontier `f`.
pub fn chain_to_tree(cert: &ChainCertificate, depth: usize) -> Result<TreeCertificate> {
    if depth == 0 {
        return Err(Error::Domain("tree depth must be at least 1".into()));
    }
    let threshold = cert.effective_threshold();
    let mut nodes = BTreeSet::new();
    let mut frontier = vec![(Vec::new(), 1usize)];
    nodes.insert(Vec::new());
    for _ in 0..depth {
        let mut next = Vec::new();
        for (f, n) in frontier {
            for x in cert.chain[n - 1].ones().map(|x| x as u64) {
                let m = if x > threshold {
                    n
                } else {
                    cert.link_witness(n, x)
                        .ok_or_else(|| Error::Domain(format!("chain has no link witness for n = {n}, x = {x}")))?
                };
                let mut child = f.clone();
                child.push(x);
                nodes.insert(child.clone());
                if nodes.len() > MAX_TREE_NODES {
                    return Err(Error::TooLarge {
                        what: "tree nodes",
                        limit: MAX_TREE_NODES as u64,
                        got: nodes.len() as u64,
                    });
                }
                next.push((child, m));
            }
        }
        frontier = next;
    }
    TreeCertificate::new(
        cert.carrier,
        cert.target(),
        depth,
        cert.fpred.clone(),
        nodes,
        Collection::Default,
        cert.threshold,
    )
}

/// Convenience for predicates over window sets.
pub fn fpred_holds(fpred: &FPred, set: &WindowSet) -> bool {
    let Ok(bits) = Carrier::Nat { window: set.window_max() }.set(set.iter()) else { return false };
    fpred.eval(Carrier::Nat { window: set.window_max() }, &bits) == Status::HoldsWithWitness
}
