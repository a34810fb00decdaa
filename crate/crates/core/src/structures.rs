//! Finite sums, finite products, all-order products and sum subsystems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::Semigroup;

/// Largest generator prefix accepted by FS/FP generation.
pub const MAX_PREFIX: usize = 20;
/// Largest number of arrangements AP generation will enumerate.
pub const MAX_ARRANGEMENTS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Fs,
    Fp,
    Ap,
}

/// Blocks `H_1 < H_2 < ... < H_k` of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct BlockSystem {
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    /// Each block is sorted; duplicates, empty blocks, index 0 and blocks
    /// with `max H_i >= min H_{i+1}` are rejected.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for (i, mut b) in blocks.into_iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidBlocks(format!("block {} is empty", i + 1)));
            }
            b.sort_unstable();
            if b[0] == 0 {
                return Err(Error::InvalidBlocks("indices start at 1".into()));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidBlocks(format!("block {} repeats an index", i + 1)));
            }
            out.push(b);
        }
        for (i, w) in out.windows(2).enumerate() {
            let (hi, lo) = (*w[0].last().unwrap(), w[1][0]);
            if hi >= lo {
                return Err(Error::InvalidBlocks(format!(
                    "max H_{} = {hi} is not below min H_{} = {lo}",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(BlockSystem { blocks: out })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.blocks.last().and_then(|b| b.last().copied()).unwrap_or(0)
    }
}

impl TryFrom<Vec<Vec<usize>>> for BlockSystem {
    type Error = Error;

    fn try_from(v: Vec<Vec<usize>>) -> Result<Self> {
        BlockSystem::new(v)
    }
}

impl From<BlockSystem> for Vec<Vec<usize>> {
    fn from(b: BlockSystem) -> Self {
        b.blocks
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuredElement<E> {
    pub value: E,
    /// Index sets (FS/FP, increasing) or arrangements (AP, in product order)
    /// that produce `value`; all of them are kept.
    pub provenance: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuredSet<E> {
    pub kind: Kind,
    pub semigroup: String,
    pub generators: Vec<E>,
    /// Distinct values in ascending order.
    pub elements: Vec<StructuredElement<E>>,
}

impl<E: Clone + Ord> StructuredSet<E> {
    pub fn values(&self) -> impl Iterator<Item = &E> {
        self.elements.iter().map(|e| &e.value)
    }

    pub fn contains(&self, v: &E) -> bool {
        self.elements.binary_search_by(|e| e.value.cmp(v)).is_ok()
    }

    /// Number of index sets/arrangements, counting collisions separately.
    pub fn term_count(&self) -> usize {
        self.elements.iter().map(|e| e.provenance.len()).sum()
    }

    /// Recompute every element from each recorded provenance.
    pub fn rederive<S: Semigroup<Elem = E>>(&self, inst: &S) -> Result<bool> {
        for el in &self.elements {
            for p in &el.provenance {
                let factors: Vec<E> = p
                    .iter()
                    .map(|&i| {
                        self.generators
                            .get(i.wrapping_sub(1))
                            .cloned()
                            .ok_or_else(|| Error::Malformed(format!("provenance index {i} out of range")))
                    })
                    .collect::<Result<_>>()?;
                if self.kind != Kind::Ap && p.windows(2).any(|w| w[0] >= w[1]) {
                    return Ok(false);
                }
                if inst.product(&factors)? != el.value {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_prefix<E>(x: &[E], limit: usize) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Domain("generator prefix must be nonempty".into()));
    }
    if x.len() > limit {
        return Err(Error::TooLarge { what: "generator prefix", limit: limit as u64, got: x.len() as u64 });
    }
    Ok(())
}

fn collect<E: Ord>(kind: Kind, semigroup: String, generators: Vec<E>, pairs: Vec<(E, Vec<usize>)>) -> StructuredSet<E> {
    let mut map: BTreeMap<E, Vec<Vec<usize>>> = BTreeMap::new();
    for (v, p) in pairs {
        map.entry(v).or_default().push(p);
    }
    StructuredSet {
        kind,
        semigroup,
        generators,
        elements: map.into_iter().map(|(value, provenance)| StructuredElement { value, provenance }).collect(),
    }
}

// Products over every nonempty index set, factors in increasing index order.
fn subset_products<S: Semigroup>(x: &[S::Elem], inst: &S) -> Result<Vec<(S::Elem, Vec<usize>)>> {
    let k = x.len();
    let mut vals: Vec<Option<S::Elem>> = vec![None; 1 << k];
    let mut out = Vec::with_capacity((1 << k) - 1);
    for mask in 1usize..(1 << k) {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let v = match &vals[rest] {
            None => x[top].clone(),
            Some(prev) => inst.op(prev, &x[top])?,
        };
        let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        out.push((v.clone(), idx));
        vals[mask] = Some(v);
    }
    Ok(out)
}

/// `FS(x)`: all sums over nonempty index sets, indices increasing.
pub fn fs_generate<S: Semigroup>(x: &[S::Elem], inst: &S) -> Result<StructuredSet<S::Elem>> {
    check_prefix(x, MAX_PREFIX)?;
    Ok(collect(Kind::Fs, inst.name(), x.to_vec(), subset_products(x, inst)?))
}

/// `FP(x)`: all products over nonempty index sets, factors in increasing
/// index order.
pub fn fp_generate<S: Semigroup>(x: &[S::Elem], inst: &S) -> Result<StructuredSet<S::Elem>> {
    check_prefix(x, MAX_PREFIX)?;
    Ok(collect(Kind::Fp, inst.name(), x.to_vec(), subset_products(x, inst)?))
}

/// `∑_{j=1..k} k!/(k-j)!`, saturating.
pub fn arrangement_count(k: usize) -> u64 {
    let mut total = 0u64;
    let mut falling = 1u64;
    for j in 0..k {
        falling = falling.saturating_mul((k - j) as u64);
        total = total.saturating_add(falling);
    }
    total
}

/// `AP(x)`: products of every nonempty subset of terms in every order,
/// without repetition.
pub fn ap_generate<S: Semigroup>(x: &[S::Elem], inst: &S) -> Result<StructuredSet<S::Elem>> {
    check_prefix(x, MAX_PREFIX)?;
    let count = arrangement_count(x.len());
    if count > MAX_ARRANGEMENTS {
        return Err(Error::TooLarge { what: "AP arrangement count", limit: MAX_ARRANGEMENTS, got: count });
    }
    let mut pairs = Vec::with_capacity(count as usize);
    let mut used = vec![false; x.len()];
    let mut order = Vec::with_capacity(x.len());
    fn rec<S: Semigroup>(
        x: &[S::Elem],
        inst: &S,
        acc: Option<&S::Elem>,
        used: &mut [bool],
        order: &mut Vec<usize>,
        pairs: &mut Vec<(S::Elem, Vec<usize>)>,
    ) -> Result<()> {
        for i in 0..x.len() {
            if used[i] {
                continue;
            }
            let v = match acc {
                None => x[i].clone(),
                Some(a) => inst.op(a, &x[i])?,
            };
            used[i] = true;
            order.push(i + 1);
            pairs.push((v.clone(), order.clone()));
            rec(x, inst, Some(&v), used, order, pairs)?;
            order.pop();
            used[i] = false;
        }
        Ok(())
    }
    rec(x, inst, None, &mut used, &mut order, &mut pairs)?;
    Ok(collect(Kind::Ap, inst.name(), x.to_vec(), pairs))
}

/// `y_i = ∑_{t ∈ H_i} x_t` (the semigroup operation over each block, in
/// increasing index order).
pub fn sum_subsystem<S: Semigroup>(x: &[S::Elem], blocks: &BlockSystem, inst: &S) -> Result<Vec<S::Elem>> {
    if blocks.max_index() > x.len() {
        return Err(Error::InvalidBlocks(format!(
            "block index {} exceeds prefix length {}",
            blocks.max_index(),
            x.len()
        )));
    }
    blocks
        .blocks()
        .iter()
        .map(|h| {
            let terms: Vec<S::Elem> = h.iter().map(|&t| x[t - 1].clone()).collect();
            inst.product(&terms)
        })
        .collect()
}
