//! Exact subsets of a finite window `[1..N]`.
//!
//! Operators that pull a set back along a map (translation preimage,
//! dilation preimage) shrink the window instead of guessing membership
//! past `N`, so every membership answer stays exact.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset of `{1, ..., window_max}` with exact membership.
#[derive(Clone, Debug)]
pub struct WindowSet {
    window_max: u64,
    // bit i <=> i is a member; bit 0 is never set
    bits: FixedBitSet,
    truncated: bool,
}

impl PartialEq for WindowSet {
    fn eq(&self, other: &Self) -> bool {
        self.window_max == other.window_max && self.bits == other.bits
    }
}

impl Eq for WindowSet {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
    Complement,
}

fn check_window(n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::EmptyWindow("window_max must be at least 1".into()));
    }
    usize::try_from(n).ok().and_then(|n| n.checked_add(1)).ok_or(Error::TooLarge {
        what: "window",
        limit: usize::MAX as u64 - 1,
        got: n,
    })
}

impl WindowSet {
    pub fn empty(window_max: u64) -> Result<Self> {
        let len = check_window(window_max)?;
        Ok(WindowSet { window_max, bits: FixedBitSet::with_capacity(len), truncated: false })
    }

    pub fn full(window_max: u64) -> Result<Self> {
        let mut s = Self::empty(window_max)?;
        s.bits.insert_range(1..);
        Ok(s)
    }

    pub fn from_members<I: IntoIterator<Item = u64>>(window_max: u64, members: I) -> Result<Self> {
        let mut s = Self::empty(window_max)?;
        for m in members {
            s.insert(m)?;
        }
        Ok(s)
    }

    pub fn from_predicate<F: FnMut(u64) -> bool>(window_max: u64, mut pred: F) -> Result<Self> {
        let mut s = Self::empty(window_max)?;
        for m in 1..=window_max {
            if pred(m) {
                s.bits.insert(m as usize);
            }
        }
        Ok(s)
    }

    fn insert(&mut self, m: u64) -> Result<()> {
        if m == 0 || m > self.window_max {
            return Err(Error::OutOfWindow { element: m, window: self.window_max });
        }
        self.bits.insert(m as usize);
        Ok(())
    }

    pub fn window_max(&self) -> u64 {
        self.window_max
    }

    /// Set when an operation dropped elements that fell past the window.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Exact membership for `1 <= m <= window_max`; `false` outside.
    pub fn contains(&self, m: u64) -> bool {
        m >= 1 && m <= self.window_max && self.bits.contains(m as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.ones().map(|i| i as u64)
    }

    pub fn min(&self) -> Option<u64> {
        self.bits.minimum().map(|i| i as u64)
    }

    pub fn max(&self) -> Option<u64> {
        self.bits.maximum().map(|i| i as u64)
    }

    /// `|A ∩ [1..n]|` for `n <= window_max`.
    pub fn count_upto(&self, n: u64) -> usize {
        let n = n.min(self.window_max) as usize;
        self.bits.count_ones(..n + 1)
    }

    /// The same set seen on the smaller window `[1..n]`.
    pub fn restrict(&self, n: u64) -> Result<Self> {
        if n > self.window_max {
            return Err(Error::WindowMismatch { left: n, right: self.window_max });
        }
        let mut out = Self::empty(n)?;
        for m in self.iter().take_while(|&m| m <= n) {
            out.bits.insert(m as usize);
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.same_window(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    fn same_window(&self, other: &Self) -> Result<()> {
        if self.window_max != other.window_max {
            return Err(Error::WindowMismatch { left: self.window_max, right: other.window_max });
        }
        Ok(())
    }

    /// `-t + A = {y : t + y ∈ A}` on the shrunken window `[1..N-t]`.
    pub fn translate_preimage(&self, t: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::Domain("translation must be at least 1".into()));
        }
        if t >= self.window_max {
            return Err(Error::EmptyWindow(format!(
                "translation by {t} leaves nothing of window [1..{}]",
                self.window_max
            )));
        }
        let n = self.window_max - t;
        let mut out = Self::empty(n)?;
        for m in self.iter().filter(|&m| m > t) {
            out.bits.insert((m - t) as usize);
        }
        Ok(out)
    }

    /// `nA` on the same window; elements with `n·a > N` are dropped and
    /// flagged via [`WindowSet::truncated`].
    pub fn dilate(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dilation factor must be at least 1".into()));
        }
        let mut out = Self::empty(self.window_max)?;
        out.truncated = self.truncated;
        for a in self.iter() {
            match a.checked_mul(n) {
                Some(p) if p <= self.window_max => out.bits.insert(p as usize),
                _ => out.truncated = true,
            }
        }
        Ok(out)
    }

    /// `nA` on the window `[1..n·N]`. Nothing is lost: `n·a <= n·N` iff
    /// `a <= N`, so membership on the scaled window is exact.
    pub fn dilate_scaled(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dilation factor must be at least 1".into()));
        }
        let scaled = self.window_max.checked_mul(n).ok_or(Error::Overflow("dilate_scaled"))?;
        Self::from_members(scaled, self.iter().map(|a| a * n))
    }

    /// `n⁻¹A = {y : n·y ∈ A}` on the window `[1..⌊N/n⌋]`.
    pub fn dilate_preimage(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dilation factor must be at least 1".into()));
        }
        let w = self.window_max / n;
        if w == 0 {
            return Err(Error::EmptyWindow(format!(
                "dilation preimage by {n} leaves nothing of window [1..{}]",
                self.window_max
            )));
        }
        let mut out = Self::empty(w)?;
        for m in self.iter().filter(|m| m % n == 0) {
            out.bits.insert((m / n) as usize);
        }
        Ok(out)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_window(other)?;
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out.truncated |= other.truncated;
        Ok(out)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_window(other)?;
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        out.truncated |= other.truncated;
        Ok(out)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.same_window(other)?;
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out.truncated |= other.truncated;
        Ok(out)
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.bits.toggle_range(1..);
        out
    }

    /// Apply a boolean operation; `complement` ignores `other`.
    pub fn set_algebra(op: SetOp, a: &Self, b: Option<&Self>) -> Result<Self> {
        let need_b = || b.ok_or_else(|| Error::Domain(format!("{op:?} needs two operands")));
        match op {
            SetOp::Union => a.union(need_b()?),
            SetOp::Intersect => a.intersection(need_b()?),
            SetOp::Difference => a.difference(need_b()?),
            SetOp::Complement => Ok(a.complement()),
        }
    }

    /// Maximal runs `[lo, hi]` of consecutive members.
    pub fn runs(&self) -> Vec<(u64, u64)> {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for m in self.iter() {
            match runs.last_mut() {
                Some((_, hi)) if *hi + 1 == m => *hi = m,
                _ => runs.push((m, m)),
            }
        }
        runs
    }

    /// The run-length member list, e.g. `2-6 8 10-12`.
    pub fn members_text(&self) -> String {
        self.runs()
            .iter()
            .map(|&(lo, hi)| if lo == hi { lo.to_string() } else { format!("{lo}-{hi}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Two-line text form: `window N` then the run-length member list.
    pub fn to_text(&self) -> String {
        format!("window {}\n{}\n", self.window_max, self.members_text())
    }

    pub fn parse_members(window_max: u64, text: &str) -> Result<Self> {
        let mut out = Self::empty(window_max)?;
        let mut last = 0u64;
        for tok in text.split_whitespace() {
            let (lo, hi) = match tok.split_once('-') {
                Some((a, b)) => (parse_u64(a)?, parse_u64(b)?),
                None => {
                    let v = parse_u64(tok)?;
                    (v, v)
                }
            };
            if lo > hi || lo <= last {
                return Err(Error::Malformed(format!("run `{tok}` is not sorted/disjoint")));
            }
            if hi > window_max {
                return Err(Error::OutOfWindow { element: hi, window: window_max });
            }
            out.bits.insert_range(lo as usize..hi as usize + 1);
            last = hi;
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Malformed("missing `window N` header".into()))?;
        let n = header.strip_prefix("window ").ok_or_else(|| Error::Malformed(format!("bad header `{header}`")))?;
        let n = parse_u64(n.trim())?;
        let body = lines.next().unwrap_or("");
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Malformed("trailing content after member list".into()));
        }
        Self::parse_members(n, body)
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse::<u64>().map_err(|_| Error::Malformed(format!("`{s}` is not a decimal integer")))
}

impl fmt::Display for WindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for WindowSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_text(s)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowSetRepr {
    window: u64,
    members: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    truncated: bool,
}

impl Serialize for WindowSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WindowSetRepr { window: self.window_max, members: self.members_text(), truncated: self.truncated }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WindowSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = WindowSetRepr::deserialize(d)?;
        let mut set = WindowSet::parse_members(repr.window, &repr.members).map_err(serde::de::Error::custom)?;
        set.truncated = repr.truncated;
        Ok(set)
    }
}
