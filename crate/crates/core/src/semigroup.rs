//! Semigroups and weak rings used across the crate.
//!
//! Arithmetic is checked everywhere: an overflowing sum or product is an
//! error, never a wrapped value, since wraparound would manufacture
//! identities that do not hold.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Element: Clone + Eq + Ord + Hash + Debug + Serialize {}

impl<T: Clone + Eq + Ord + Hash + Debug + Serialize> Element for T {}

pub trait Semigroup {
    type Elem: Element;

    fn name(&self) -> String;

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn identity(&self) -> Option<Self::Elem> {
        None
    }

    fn is_commutative(&self) -> bool;

    /// Fold `op` over a nonempty slice, left to right.
    fn product(&self, xs: &[Self::Elem]) -> Result<Self::Elem> {
        let (first, rest) = xs.split_first().ok_or_else(|| Error::Domain("empty product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, x| self.op(&acc, x))
    }
}

/// `(ℕ, +)`; with `with_zero` the carrier is `ℕ ∪ {0}` and 0 is the identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct NatAdd {
    pub with_zero: bool,
}

impl Semigroup for NatAdd {
    type Elem = u64;

    fn name(&self) -> String {
        if self.with_zero { "nat0-add" } else { "nat-add" }.into()
    }

    fn op(&self, a: &u64, b: &u64) -> Result<u64> {
        a.checked_add(*b).ok_or(Error::Overflow("natural addition"))
    }

    fn identity(&self) -> Option<u64> {
        self.with_zero.then_some(0)
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NatMul;

impl Semigroup for NatMul {
    type Elem = u64;

    fn name(&self) -> String {
        "nat-mul".into()
    }

    fn op(&self, a: &u64, b: &u64) -> Result<u64> {
        a.checked_mul(*b).ok_or(Error::Overflow("natural multiplication"))
    }

    fn identity(&self) -> Option<u64> {
        Some(1)
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Max;

impl Semigroup for Max {
    type Elem = u64;

    fn name(&self) -> String {
        "max".into()
    }

    fn op(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(*a.max(b))
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

/// Words over a fixed alphabet under concatenation.
#[derive(Clone, Debug)]
pub struct FreeMon {
    pub alphabet: Vec<char>,
    pub allow_identity: bool,
}

impl Default for FreeMon {
    fn default() -> Self {
        FreeMon { alphabet: vec!['a', 'b', 'c'], allow_identity: false }
    }
}

impl Semigroup for FreeMon {
    type Elem = String;

    fn name(&self) -> String {
        "freemon".into()
    }

    fn op(&self, a: &String, b: &String) -> Result<String> {
        Ok(format!("{a}{b}"))
    }

    fn identity(&self) -> Option<String> {
        self.allow_identity.then(String::new)
    }

    fn is_commutative(&self) -> bool {
        self.alphabet.len() <= 1
    }
}

/// `(ℤ_n, +)` with elements `0..n`.
#[derive(Clone, Copy, Debug)]
pub struct Cyclic {
    pub modulus: u64,
}

impl Cyclic {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("cyclic group order must be ≥ 1".into()));
        }
        Ok(Cyclic { modulus })
    }

    pub fn elements(&self) -> Vec<u64> {
        (0..self.modulus).collect()
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
}

impl Semigroup for Cyclic {
    type Elem = u64;

    fn name(&self) -> String {
        format!("z{}", self.modulus)
    }

    fn op(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(((*a as u128 + *b as u128) % self.modulus as u128) as u64)
    }

    fn identity(&self) -> Option<u64> {
        Some(0)
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

/// 2×2 matrix over ℕ ∪ {0}, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [[u64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    /// `[[1, n], [0, 1]]`.
    pub fn unipotent(n: u64) -> Self {
        Mat2([[1, n], [0, 1]])
    }

    pub fn trace(&self) -> Result<u64> {
        self.0[0][0].checked_add(self.0[1][1]).ok_or(Error::Overflow("trace"))
    }

    pub fn checked_add(&self, o: &Mat2) -> Result<Mat2> {
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[i][j].checked_add(o.0[i][j]).ok_or(Error::Overflow("matrix addition"))?;
            }
        }
        Ok(Mat2(out))
    }

    pub fn checked_mul(&self, o: &Mat2) -> Result<Mat2> {
        let ov = || Error::Overflow("matrix multiplication");
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let l = self.0[i][0].checked_mul(o.0[0][j]).ok_or_else(ov)?;
                let r = self.0[i][1].checked_mul(o.0[1][j]).ok_or_else(ov)?;
                *v = l.checked_add(r).ok_or_else(ov)?;
            }
        }
        Ok(Mat2(out))
    }

    pub fn is_unipotent_upper(&self) -> bool {
        self.0[0][0] == 1 && self.0[1][1] == 1 && self.0[1][0] == 0
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Mat2Add;

impl Semigroup for Mat2Add {
    type Elem = Mat2;

    fn name(&self) -> String {
        "mat2-add".into()
    }

    fn op(&self, a: &Mat2, b: &Mat2) -> Result<Mat2> {
        a.checked_add(b)
    }

    fn identity(&self) -> Option<Mat2> {
        Some(Mat2([[0, 0], [0, 0]]))
    }

    fn is_commutative(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Mat2Mul;

impl Semigroup for Mat2Mul {
    type Elem = Mat2;

    fn name(&self) -> String {
        "mat2-mul".into()
    }

    fn op(&self, a: &Mat2, b: &Mat2) -> Result<Mat2> {
        a.checked_mul(b)
    }

    fn identity(&self) -> Option<Mat2> {
        Some(Mat2::IDENTITY)
    }

    fn is_commutative(&self) -> bool {
        false
    }
}

/// A carrier with two semigroup operations and declared distributive laws.
pub trait WeakRing {
    type Elem: Element;

    fn name(&self) -> String;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Declared: `x·(y+z) = x·y + x·z`.
    fn left_distributive(&self) -> bool;
    /// Declared: `(x+y)·z = x·z + y·z`.
    fn right_distributive(&self) -> bool;
    fn mul_commutative(&self) -> bool;
    fn sample<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    /// The whole carrier, when it is finite and small.
    fn finite_carrier(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// `(S, +)` of a weak ring as a semigroup.
pub struct Additive<'a, R>(pub &'a R);

/// `(S, ·)` of a weak ring as a semigroup.
pub struct Multiplicative<'a, R>(pub &'a R);

impl<R: WeakRing> Semigroup for Additive<'_, R> {
    type Elem = R::Elem;

    fn name(&self) -> String {
        format!("{}/+", self.0.name())
    }

    fn op(&self, a: &R::Elem, b: &R::Elem) -> Result<R::Elem> {
        self.0.add(a, b)
    }

    fn is_commutative(&self) -> bool {
        false
    }
}

impl<R: WeakRing> Semigroup for Multiplicative<'_, R> {
    type Elem = R::Elem;

    fn name(&self) -> String {
        format!("{}/·", self.0.name())
    }

    fn op(&self, a: &R::Elem, b: &R::Elem) -> Result<R::Elem> {
        self.0.mul(a, b)
    }

    fn is_commutative(&self) -> bool {
        self.0.mul_commutative()
    }
}

/// `(ℕ, +, ·)`; samples are drawn from `1..=sample_max`.
#[derive(Clone, Copy, Debug)]
pub struct NatRing {
    pub sample_max: u64,
}

impl Default for NatRing {
    fn default() -> Self {
        NatRing { sample_max: 1000 }
    }
}

impl WeakRing for NatRing {
    type Elem = u64;

    fn name(&self) -> String {
        "nat".into()
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        NatAdd::default().op(a, b)
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        NatMul.op(a, b)
    }
    fn left_distributive(&self) -> bool {
        true
    }
    fn right_distributive(&self) -> bool {
        true
    }
    fn mul_commutative(&self) -> bool {
        true
    }
    fn sample<G: Rng>(&self, rng: &mut G) -> u64 {
        rng.gen_range(1..=self.sample_max)
    }
}

/// `(ℕ, max, +)`: max plays addition, + plays multiplication.
#[derive(Clone, Copy, Debug)]
pub struct Tropical {
    pub sample_max: u64,
}

impl Default for Tropical {
    fn default() -> Self {
        Tropical { sample_max: 1000 }
    }
}

impl WeakRing for Tropical {
    type Elem = u64;

    fn name(&self) -> String {
        "tropical".into()
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        Max.op(a, b)
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        NatAdd::default().op(a, b)
    }
    fn left_distributive(&self) -> bool {
        true
    }
    fn right_distributive(&self) -> bool {
        true
    }
    fn mul_commutative(&self) -> bool {
        true
    }
    fn sample<G: Rng>(&self, rng: &mut G) -> u64 {
        rng.gen_range(1..=self.sample_max)
    }
}

/// 2×2 matrices with entrywise addition and matrix multiplication.
#[derive(Clone, Copy, Debug)]
pub struct Mat2Ring {
    pub sample_max: u64,
}

impl Default for Mat2Ring {
    fn default() -> Self {
        Mat2Ring { sample_max: 20 }
    }
}

impl WeakRing for Mat2Ring {
    type Elem = Mat2;

    fn name(&self) -> String {
        "mat2".into()
    }
    fn add(&self, a: &Mat2, b: &Mat2) -> Result<Mat2> {
        a.checked_add(b)
    }
    fn mul(&self, a: &Mat2, b: &Mat2) -> Result<Mat2> {
        a.checked_mul(b)
    }
    fn left_distributive(&self) -> bool {
        true
    }
    fn right_distributive(&self) -> bool {
        true
    }
    fn mul_commutative(&self) -> bool {
        false
    }
    fn sample<G: Rng>(&self, rng: &mut G) -> Mat2 {
        let mut e = || rng.gen_range(0..=self.sample_max);
        Mat2([[e(), e()], [e(), e()]])
    }
}

/// `(ℤ_n, +, ·)`, small enough for exhaustive law checks.
#[derive(Clone, Copy, Debug)]
pub struct ZnRing {
    pub modulus: u64,
}

impl WeakRing for ZnRing {
    type Elem = u64;

    fn name(&self) -> String {
        format!("z{}-ring", self.modulus)
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok((a + b) % self.modulus)
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(((*a as u128 * *b as u128) % self.modulus as u128) as u64)
    }
    fn left_distributive(&self) -> bool {
        true
    }
    fn right_distributive(&self) -> bool {
        true
    }
    fn mul_commutative(&self) -> bool {
        true
    }
    fn sample<G: Rng>(&self, rng: &mut G) -> u64 {
        rng.gen_range(0..self.modulus)
    }
    fn finite_carrier(&self) -> Option<Vec<u64>> {
        Some((0..self.modulus).collect())
    }
}

/// The same carrier with the roles of the two operations exchanged.
/// No distributive law is declared.
#[derive(Clone, Copy, Debug)]
pub struct Swapped<R>(pub R);

impl<R: WeakRing> WeakRing for Swapped<R> {
    type Elem = R::Elem;

    fn name(&self) -> String {
        format!("swapped-{}", self.0.name())
    }
    fn add(&self, a: &R::Elem, b: &R::Elem) -> Result<R::Elem> {
        self.0.mul(a, b)
    }
    fn mul(&self, a: &R::Elem, b: &R::Elem) -> Result<R::Elem> {
        self.0.add(a, b)
    }
    fn left_distributive(&self) -> bool {
        false
    }
    fn right_distributive(&self) -> bool {
        false
    }
    fn mul_commutative(&self) -> bool {
        true
    }
    fn sample<G: Rng>(&self, rng: &mut G) -> R::Elem {
        self.0.sample(rng)
    }
    fn finite_carrier(&self) -> Option<Vec<R::Elem>> {
        self.0.finite_carrier()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    AddAssociative,
    MulAssociative,
    LeftDistributive,
    RightDistributive,
}

impl Law {
    pub const ALL: [Law; 4] = [Law::AddAssociative, Law::MulAssociative, Law::LeftDistributive, Law::RightDistributive];

    fn holds<R: WeakRing>(self, r: &R, x: &R::Elem, y: &R::Elem, z: &R::Elem) -> Result<bool> {
        Ok(match self {
            Law::AddAssociative => r.add(&r.add(x, y)?, z)? == r.add(x, &r.add(y, z)?)?,
            Law::MulAssociative => r.mul(&r.mul(x, y)?, z)? == r.mul(x, &r.mul(y, z)?)?,
            Law::LeftDistributive => r.mul(x, &r.add(y, z)?)? == r.add(&r.mul(x, y)?, &r.mul(x, z)?)?,
            Law::RightDistributive => r.mul(&r.add(x, y)?, z)? == r.add(&r.mul(x, z)?, &r.mul(y, z)?)?,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawResult<E> {
    pub law: Law,
    pub declared: bool,
    pub holds: bool,
    pub checked: u64,
    /// Triples skipped because evaluation overflowed.
    pub skipped: u64,
    pub counterexample: Option<[E; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport<E> {
    pub ring: String,
    pub mode: &'static str,
    pub samples: u64,
    pub seed: u64,
    pub laws: Vec<LawResult<E>>,
}

impl<E> LawReport<E> {
    /// Every declared law held on the checked triples.
    pub fn declared_laws_hold(&self) -> bool {
        self.laws
            .iter()
            .filter(|l| l.declared || matches!(l.law, Law::AddAssociative | Law::MulAssociative))
            .all(|l| l.holds)
    }
}

/// Largest finite carrier checked exhaustively over all triples.
pub const EXHAUSTIVE_CARRIER_MAX: usize = 12;

/// Check associativity and both distributive laws on `samples` seeded
/// random triples, or on every triple when the carrier is finite and small.
pub fn check_laws<R: WeakRing>(ring: &R, samples: u64, seed: u64) -> Result<LawReport<R::Elem>> {
    if samples == 0 {
        return Err(Error::Domain("samples must be ≥ 1".into()));
    }
    let triples: Vec<[R::Elem; 3]> = match ring.finite_carrier() {
        Some(c) if c.len() <= EXHAUSTIVE_CARRIER_MAX => {
            let mut out = Vec::with_capacity(c.len().pow(3));
            for x in &c {
                for y in &c {
                    for z in &c {
                        out.push([x.clone(), y.clone(), z.clone()]);
                    }
                }
            }
            out
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| [ring.sample(&mut rng), ring.sample(&mut rng), ring.sample(&mut rng)]).collect()
        }
    };
    let exhaustive = ring.finite_carrier().is_some_and(|c| c.len() <= EXHAUSTIVE_CARRIER_MAX);
    let laws = Law::ALL
        .iter()
        .map(|&law| {
            let declared = match law {
                Law::LeftDistributive => ring.left_distributive(),
                Law::RightDistributive => ring.right_distributive(),
                _ => true,
            };
            let mut res = LawResult { law, declared, holds: true, checked: 0, skipped: 0, counterexample: None };
            for [x, y, z] in &triples {
                match law.holds(ring, x, y, z) {
                    Ok(true) => res.checked += 1,
                    Ok(false) => {
                        res.checked += 1;
                        res.holds = false;
                        res.counterexample = Some([x.clone(), y.clone(), z.clone()]);
                        break;
                    }
                    Err(_) => res.skipped += 1,
                }
            }
            res
        })
        .collect();
    Ok(LawReport {
        ring: ring.name(),
        mode: if exhaustive { "exhaustive" } else { "sampled" },
        samples: triples.len() as u64,
        seed,
        laws,
    })
}

/// `(∏_{j=1..m} a(j)·f(t(j))) · a(m+1)` with factors in exactly that order.
pub fn x_product<S: Semigroup, F: Fn(usize) -> S::Elem>(
    inst: &S,
    m: usize,
    a: &[S::Elem],
    t: &[usize],
    f: F,
) -> Result<S::Elem> {
    if m == 0 {
        return Err(Error::Domain("m must be ≥ 1".into()));
    }
    if a.len() != m + 1 {
        return Err(Error::Domain(format!("a must have m+1 = {} entries, got {}", m + 1, a.len())));
    }
    if t.len() != m {
        return Err(Error::Domain(format!("t must have m = {m} entries, got {}", t.len())));
    }
    if t[0] == 0 || t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("t = {t:?} is not a strictly increasing tuple of positive indices")));
    }
    let mut acc = a[0].clone();
    acc = inst.op(&acc, &f(t[0]))?;
    for j in 1..m {
        acc = inst.op(&acc, &a[j])?;
        acc = inst.op(&acc, &f(t[j]))?;
    }
    inst.op(&acc, &a[m])
}
