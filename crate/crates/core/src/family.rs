//! Upward-closed families on a finite universe `{0, ..., n-1}`.
//!
//! Subsets are `u32` bitmasks (bit `i` = element `i`). A family is stored
//! by its minimal antichain; membership of `B` means `B` contains some
//! minimal set.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::semigroup::Cyclic;
use crate::semigroup::Semigroup;

pub type Mask = u32;

/// Largest universe for closure and membership.
pub const MAX_UNIVERSE: usize = 20;
/// Largest universe for the exhaustive Ramsey check.
pub const MAX_RAMSEY_EXHAUSTIVE: usize = 5;
/// Largest universe for dual computation.
pub const MAX_DUAL: usize = 16;
/// Largest carrier for the subsemigroup condition check.
pub const MAX_COND_CARRIER: usize = 5;

fn elements(m: Mask) -> Vec<usize> {
    (0..32).filter(|i| m >> i & 1 == 1).collect()
}

fn ser_sets<S: Serializer>(v: &[Mask], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|&m| elements(m)))
}

fn ser_set<S: Serializer>(m: &Mask, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(elements(*m))
}

/// Format a mask as `{0,2,3}`.
pub fn show(m: Mask) -> String {
    let e: Vec<String> = elements(m).iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", e.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    universe: usize,
    #[serde(serialize_with = "ser_sets")]
    minimal: Vec<Mask>,
}

fn subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

fn full_mask(n: usize) -> Mask {
    if n == 32 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

fn minimal_elements(mut base: Vec<Mask>) -> Vec<Mask> {
    base.sort_by_key(|m| (m.count_ones(), *m));
    base.dedup();
    let mut out: Vec<Mask> = Vec::new();
    for m in base {
        if !out.iter().any(|&k| subset(k, m)) {
            out.push(m);
        }
    }
    out.sort_unstable();
    out
}

impl Family {
    /// The family of all supersets of the base sets.
    pub fn upward_closure(universe: usize, base: &[Mask]) -> Result<Self> {
        if universe == 0 || universe > MAX_UNIVERSE {
            return Err(Error::TooLarge { what: "family universe", limit: MAX_UNIVERSE as u64, got: universe as u64 });
        }
        if base.is_empty() {
            return Err(Error::Domain("a family needs at least one generating set".into()));
        }
        let full = full_mask(universe);
        for &m in base {
            if m == 0 {
                return Err(Error::Domain("the empty set cannot belong to a family".into()));
            }
            if m & !full != 0 {
                return Err(Error::Domain(format!("{} is not a subset of the universe of size {universe}", show(m))));
            }
        }
        Ok(Family { universe, minimal: minimal_elements(base.to_vec()) })
    }

    /// Build from element lists, e.g. `[[0], [1, 2]]`.
    pub fn from_sets(universe: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let base = sets
            .iter()
            .map(|s| {
                s.iter().try_fold(0 as Mask, |acc, &e| {
                    if e >= universe {
                        Err(Error::Domain(format!("element {e} outside universe of size {universe}")))
                    } else {
                        Ok(acc | 1 << e)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::upward_closure(universe, &base)
    }

    /// All nonempty subsets.
    pub fn all_nonempty(universe: usize) -> Result<Self> {
        let base: Vec<Mask> = (0..universe).map(|i| 1 << i).collect();
        Self::upward_closure(universe, &base)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn full(&self) -> Mask {
        full_mask(self.universe)
    }

    pub fn minimal_sets(&self) -> &[Mask] {
        &self.minimal
    }

    pub fn contains(&self, b: Mask) -> bool {
        self.minimal.iter().any(|&m| subset(m, b))
    }

    /// All members in increasing mask order. Only for small universes.
    pub fn members(&self) -> Result<Vec<Mask>> {
        if self.universe > MAX_DUAL {
            return Err(Error::TooLarge {
                what: "member enumeration universe",
                limit: MAX_DUAL as u64,
                got: self.universe as u64,
            });
        }
        Ok((1..=self.full()).filter(|&b| self.contains(b)).collect())
    }

    /// Parse the text format: universe size on the first line, then one
    /// minimal set per line as space- or comma-separated elements.
    /// Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty());
        let head = lines.next().ok_or_else(|| Error::Malformed("empty family file".into()))?;
        let universe: usize = head
            .strip_prefix("universe")
            .unwrap_or(head)
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("expected universe size, found `{head}`")))?;
        let sets = lines
            .map(|l| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| Error::Malformed(format!("bad element `{t}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if sets.iter().any(|s| s.is_empty()) {
            return Err(Error::Domain("the empty set cannot belong to a family".into()));
        }
        Self::from_sets(universe, &sets)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.universe);
        for &m in &self.minimal {
            let e: Vec<String> = elements(m).iter().map(|e| e.to_string()).collect();
            out.push_str(&e.join(" "));
            out.push('\n');
        }
        out
    }

    /// `F ⊆ G` (as upward-closed families on the same universe).
    pub fn is_subfamily(&self, other: &Family) -> bool {
        self.universe == other.universe && self.minimal.iter().all(|&m| other.contains(m))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.minimal.iter().map(|&m| show(m)).collect();
        write!(f, "up({}) on {} elements", sets.join(","), self.universe)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    #[serde(serialize_with = "ser_set")]
    pub set: Mask,
    #[serde(serialize_with = "ser_set")]
    pub part1: Mask,
    #[serde(serialize_with = "ser_set")]
    pub part2: Mask,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamseyReport {
    pub ramsey: bool,
    pub mode: &'static str,
    pub disjoint_only: bool,
    pub checked: u64,
    pub counterexample: Option<Partition>,
}

/// Every member `A` and every `A = A_1 ∪ A_2` has some `A_i ∈ F`.
/// Pairs are ordered and may overlap unless `disjoint_only`.
/// The counterexample is the first in order of `A`, then `A_1`, then `A_2`.
pub fn is_ramsey(f: &Family, disjoint_only: bool) -> Result<RamseyReport> {
    if f.universe > MAX_RAMSEY_EXHAUSTIVE {
        return Err(Error::TooLarge {
            what: "exhaustive Ramsey universe (use the sampled check)",
            limit: MAX_RAMSEY_EXHAUSTIVE as u64,
            got: f.universe as u64,
        });
    }
    let mut checked = 0;
    for a in f.members()? {
        let mut a1: Mask = 0;
        loop {
            let rest = a & !a1;
            let mut extra: Mask = 0;
            loop {
                let a2 = rest | extra;
                checked += 1;
                if !f.contains(a1) && !f.contains(a2) {
                    return Ok(RamseyReport {
                        ramsey: false,
                        mode: "exhaustive",
                        disjoint_only,
                        checked,
                        counterexample: Some(Partition { set: a, part1: a1, part2: a2 }),
                    });
                }
                if disjoint_only || extra == a1 {
                    break;
                }
                extra = (extra.wrapping_sub(a1)) & a1;
            }
            if a1 == a {
                break;
            }
            a1 = (a1.wrapping_sub(a)) & a;
        }
    }
    Ok(RamseyReport { ramsey: true, mode: "exhaustive", disjoint_only, checked, counterexample: None })
}

/// Random members and random splits; a pass is not a proof.
pub fn is_ramsey_sampled(f: &Family, samples: u64, seed: u64) -> RamseyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = f.full();
    for i in 0..samples {
        let m = f.minimal[rng.gen_range(0..f.minimal.len())];
        let a = m | (rng.gen::<Mask>() & full);
        let a1 = rng.gen::<Mask>() & a;
        let a2 = a & !a1;
        if !f.contains(a1) && !f.contains(a2) {
            return RamseyReport {
                ramsey: false,
                mode: "sampled",
                disjoint_only: true,
                checked: i + 1,
                counterexample: Some(Partition { set: a, part1: a1, part2: a2 }),
            };
        }
    }
    RamseyReport { ramsey: true, mode: "sampled", disjoint_only: true, checked: samples, counterexample: None }
}

/// `F* = {E : E ∩ A ≠ ∅ for every A ∈ F}`, as its minimal hitting sets.
pub fn dual_family(f: &Family) -> Result<Family> {
    if f.universe > MAX_DUAL {
        return Err(Error::TooLarge { what: "dual universe", limit: MAX_DUAL as u64, got: f.universe as u64 });
    }
    let hits = |e: Mask| f.minimal.iter().all(|&m| m & e != 0);
    let minimal: Vec<Mask> =
        (1..=f.full()).filter(|&e| hits(e) && elements(e).iter().all(|&i| !hits(e & !(1 << i)))).collect();
    Ok(Family { universe: f.universe, minimal })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub filter: bool,
    /// Two members whose intersection is not a member.
    pub counterexample: Option<[Vec<usize>; 3]>,
}

/// Closed under pairwise intersection. It suffices to test pairs of
/// minimal sets: `A ⊇ m_1`, `B ⊇ m_2` gives `A ∩ B ⊇ m_1 ∩ m_2`.
pub fn is_filter(f: &Family) -> FilterReport {
    for (i, &a) in f.minimal.iter().enumerate() {
        for &b in &f.minimal[i + 1..] {
            if !f.contains(a & b) {
                return FilterReport {
                    filter: false,
                    counterexample: Some([elements(a), elements(b), elements(a & b)]),
                };
            }
        }
    }
    FilterReport { filter: true, counterexample: None }
}

/// A finite semigroup given by its Cayley table on `{0, ..., n-1}`.
#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    pub name: String,
    table: Vec<Vec<usize>>,
}

impl FiniteSemigroup {
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > MAX_UNIVERSE || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::Domain("Cayley table must be square with entries in the carrier".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Domain(format!("operation is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(FiniteSemigroup { name: name.into(), table })
    }

    /// `(ℤ_n, +)`.
    pub fn cyclic(n: u64) -> Result<Self> {
        let c = Cyclic::new(n)?;
        let el = c.elements();
        let table =
            el.iter().map(|a| el.iter().map(|b| c.op(a, b).map(|v| v as usize)).collect()).collect::<Result<_>>()?;
        Self::new(c.name(), table)
    }

    /// `(ℤ_n, ·)`.
    pub fn cyclic_mul(n: u64) -> Result<Self> {
        if n == 0 || n as usize > MAX_UNIVERSE {
            return Err(Error::Domain(format!("modulus must lie in [1..{MAX_UNIVERSE}]")));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a * b % n) as usize).collect()).collect();
        Self::new(format!("z{n}-mul"), table)
    }

    /// Parse `z4` (additive) or `z4-mul`.
    pub fn parse(name: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("unknown finite semigroup `{name}` (try `z4` or `z4-mul`)"));
        let body = name.strip_prefix('z').ok_or_else(bad)?;
        match body.strip_suffix("-mul") {
            Some(n) => Self::cyclic_mul(n.parse().map_err(|_| bad())?),
            None => Self::cyclic(body.parse().map_err(|_| bad())?),
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// `sE`.
    pub fn left_image(&self, s: usize, e: Mask) -> Mask {
        elements(e).iter().fold(0, |acc, &x| acc | 1 << self.op(s, x))
    }

    /// `Es`.
    pub fn right_image(&self, s: usize, e: Mask) -> Mask {
        elements(e).iter().fold(0, |acc, &x| acc | 1 << self.op(x, s))
    }

    /// `s^{-1}E = {x : sx ∈ E}`.
    pub fn left_preimage(&self, s: usize, e: Mask) -> Mask {
        (0..self.size()).filter(|&x| e >> self.op(s, x) & 1 == 1).fold(0, |acc, x| acc | 1 << x)
    }

    /// `Es^{-1} = {x : xs ∈ E}`.
    pub fn right_preimage(&self, s: usize, e: Mask) -> Mask {
        (0..self.size()).filter(|&x| e >> self.op(x, s) & 1 == 1).fold(0, |acc, x| acc | 1 << x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftViolation {
    pub s: usize,
    #[serde(serialize_with = "ser_set")]
    pub member: Mask,
    #[serde(serialize_with = "ser_set")]
    pub shifted: Mask,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub side: Side,
    pub inverse: bool,
    pub invariant: bool,
    pub checked: u64,
    pub violation_count: u64,
    /// The first violations in order of `s`, then member.
    pub violations: Vec<ShiftViolation>,
}

pub const MAX_REPORTED_VIOLATIONS: usize = 32;

/// Test `sE ∈ F` (or `Es`, `s^{-1}E`, `Es^{-1}`) for every `s` and member `E`.
pub fn check_shift_invariance(f: &Family, s: &FiniteSemigroup, side: Side, inverse: bool) -> Result<ShiftReport> {
    if f.universe != s.size() {
        return Err(Error::Domain(format!(
            "family universe has {} elements but the semigroup has {}",
            f.universe,
            s.size()
        )));
    }
    let members = f.members()?;
    let mut report =
        ShiftReport { side, inverse, invariant: true, checked: 0, violation_count: 0, violations: Vec::new() };
    for x in 0..s.size() {
        for &e in &members {
            let shifted = match (side, inverse) {
                (Side::Left, false) => s.left_image(x, e),
                (Side::Right, false) => s.right_image(x, e),
                (Side::Left, true) => s.left_preimage(x, e),
                (Side::Right, true) => s.right_preimage(x, e),
            };
            report.checked += 1;
            if !f.contains(shifted) {
                report.invariant = false;
                report.violation_count += 1;
                if report.violations.len() < MAX_REPORTED_VIOLATIONS {
                    report.violations.push(ShiftViolation { s: x, member: e, shifted });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondViolation {
    #[serde(serialize_with = "ser_set")]
    pub e: Mask,
    #[serde(serialize_with = "ser_set")]
    pub a: Mask,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondReport {
    pub holds: bool,
    pub checked: u64,
    pub empty_h_convention: &'static str,
    pub violation: Option<CondViolation>,
}

/// For every `E ⊆ S`: if some `A ∈ F` has `⋂_{x∈H} x^{-1}E ∈ F` for every
/// finite `H ⊆ A`, then `E ∈ F`. The empty intersection is `S`.
/// Reports the first `(E, A)` with the premise true and `E ∉ F`.
pub fn check_subsemigroup_condition(f: &Family, s: &FiniteSemigroup) -> Result<CondReport> {
    let n = s.size();
    if n > MAX_COND_CARRIER {
        return Err(Error::TooLarge {
            what: "carrier for the subsemigroup condition",
            limit: MAX_COND_CARRIER as u64,
            got: n as u64,
        });
    }
    if f.universe != n {
        return Err(Error::Domain(format!("family universe has {} elements but the semigroup has {n}", f.universe)));
    }
    let full = f.full();
    let members = f.members()?;
    let mut checked = 0;
    for e in 0..=full {
        if f.contains(e) {
            continue;
        }
        let pre: Vec<Mask> = (0..n).map(|x| s.left_preimage(x, e)).collect();
        for &a in &members {
            checked += 1;
            let premise = subsets(a).all(|h| {
                let inter = elements(h).iter().fold(full, |acc, &x| acc & pre[x]);
                f.contains(inter)
            });
            if premise {
                return Ok(CondReport {
                    holds: false,
                    checked,
                    empty_h_convention: "empty H contributes the whole carrier",
                    violation: Some(CondViolation { e, a }),
                });
            }
        }
    }
    Ok(CondReport {
        holds: true,
        checked,
        empty_h_convention: "empty H contributes the whole carrier",
        violation: None,
    })
}

/// Submasks of `a`, including `0` and `a`, in increasing order.
fn subsets(a: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0 as Mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == a { None } else { Some((cur.wrapping_sub(a)) & a) };
        Some(cur)
    })
}

/// Every upward-closed, ∅-free, nonempty family on `n <= 4` elements.
pub fn all_families(n: usize) -> Result<Vec<Family>> {
    if n == 0 || n > 4 {
        return Err(Error::TooLarge { what: "family sweep universe", limit: 4, got: n as u64 });
    }
    let sets = 1usize << n;
    let mut out = Vec::new();
    // choose which of the 2^n subsets are members; bit 0 (the empty set) stays off
    for choice in (2u64..1 << sets).step_by(2) {
        let member = |b: usize| choice >> b & 1 == 1;
        let upward = (0..sets).filter(|&b| member(b)).all(|b| (0..n).all(|i| member(b | 1 << i)));
        if upward {
            let base: Vec<Mask> = (0..sets).filter(|&b| member(b)).map(|b| b as Mask).collect();
            out.push(Family::upward_closure(n, &base)?);
        }
    }
    Ok(out)
}
