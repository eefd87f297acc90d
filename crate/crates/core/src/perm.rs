//! Permutations, functions, keys and transcripts on `n`-bit strings, plus the
//! Even-Mansour cipher and every reprogramming construction built on them.
//!
//! Values are `u64` at the API boundary and stored as `u32` tables, which is
//! enough for the 28-bit ceiling.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported bit width.
pub const MAX_WIDTH: usize = 28;

fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_WIDTH {
        return Err(Error::WidthOutOfRange(n));
    }
    Ok(())
}

fn mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// A bijection on `{0, …, 2^n − 1}`. Both directions are tabulated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    n: usize,
    forward: Vec<u32>,
    backward: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        let forward: Vec<u32> = (0..1u32 << n).collect();
        Ok(Self {
            n,
            backward: forward.clone(),
            forward,
        })
    }

    /// Uniform permutation by Fisher-Yates.
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_width(n)?;
        let mut forward: Vec<u32> = (0..1u32 << n).collect();
        forward.shuffle(rng);
        Ok(Self::with_inverse(n, forward))
    }

    /// Validates that `table` is a bijection on `n` bits.
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        check_width(n)?;
        if table.len() != 1 << n {
            return Err(Error::TableSize {
                expected: 1 << n,
                got: table.len(),
            });
        }
        let mut seen = vec![false; table.len()];
        for &v in &table {
            let slot = seen.get_mut(v as usize).ok_or(Error::NotBijective)?;
            if *slot {
                return Err(Error::NotBijective);
            }
            *slot = true;
        }
        Ok(Self::with_inverse(n, table))
    }

    fn with_inverse(n: usize, forward: Vec<u32>) -> Self {
        let mut backward = vec![0u32; forward.len()];
        for (x, &y) in forward.iter().enumerate() {
            backward[y as usize] = x as u32;
        }
        Self {
            n,
            forward,
            backward,
        }
    }

    /// The transposition `swap_{a,b}`; the identity when `a == b`.
    pub fn swap(n: usize, a: u64, b: u64) -> Result<Self> {
        let mut p = Self::identity(n)?;
        p.check_value(a)?;
        p.check_value(b)?;
        p.forward.swap(a as usize, b as usize);
        p.backward.swap(a as usize, b as usize);
        Ok(p)
    }

    fn check_value(&self, v: u64) -> Result<()> {
        if v > mask(self.n) {
            return Err(Error::TableEntryTooWide {
                value: v,
                width: self.n,
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u32] {
        &self.forward
    }

    pub fn inverse_table(&self) -> &[u32] {
        &self.backward
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        self.forward[x as usize] as u64
    }

    #[inline]
    pub fn apply_inverse(&self, y: u64) -> u64 {
        self.backward[y as usize] as u64
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.n != inner.n {
            return Err(Error::WidthMismatch(outer.n, inner.n));
        }
        let forward = inner
            .forward
            .iter()
            .map(|&v| outer.forward[v as usize])
            .collect();
        Ok(Self::with_inverse(outer.n, forward))
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `self ∘ swap_{a,b}`, i.e. exchanges the images of `a` and `b`.
    pub fn swap_inputs(&mut self, a: u64, b: u64) {
        let (ya, yb) = (self.forward[a as usize], self.forward[b as usize]);
        self.forward.swap(a as usize, b as usize);
        self.backward[ya as usize] = b as u32;
        self.backward[yb as usize] = a as u32;
    }

    /// `swap_{a,b} ∘ self`, i.e. exchanges the outputs `a` and `b`.
    pub fn swap_outputs(&mut self, a: u64, b: u64) {
        let (xa, xb) = (self.backward[a as usize], self.backward[b as usize]);
        self.backward.swap(a as usize, b as usize);
        self.forward[xa as usize] = b as u32;
        self.forward[xb as usize] = a as u32;
    }

    /// One lowercase hex line per table entry.
    pub fn to_hex(&self) -> String {
        hex_lines(&self.forward)
    }

    pub fn from_hex(n: usize, dump: &str) -> Result<Self> {
        Self::from_table(n, parse_hex_lines(dump)?)
    }
}

/// A function `{0,1}^m → {0,1}^n` stored as a table of `2^m` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    m: usize,
    n: usize,
    table: Vec<u32>,
}

impl FunctionTable {
    pub fn sample<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        check_width(m)?;
        check_width(n)?;
        let bound = 1u32 << n;
        let table = (0..1usize << m)
            .map(|_| rng.random_range(0..bound))
            .collect();
        Ok(Self { m, n, table })
    }

    pub fn from_table(m: usize, n: usize, table: Vec<u32>) -> Result<Self> {
        check_width(m)?;
        check_width(n)?;
        if table.len() != 1 << m {
            return Err(Error::TableSize {
                expected: 1 << m,
                got: table.len(),
            });
        }
        if let Some(&v) = table.iter().find(|&&v| v as u64 > mask(n)) {
            return Err(Error::TableEntryTooWide {
                value: v as u64,
                width: n,
            });
        }
        Ok(Self { m, n, table })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        self.table[x as usize] as u64
    }

    /// `F^{(B)}`: `y` where `(x, y) ∈ B`, `F(x)` elsewhere.
    pub fn reprogram_set(&self, set: &ReprogramSet) -> Result<Self> {
        let mut out = self.clone();
        for &(x, y) in set.pairs() {
            out.set(x, y)?;
        }
        Ok(out)
    }

    /// `F_{s↦y}`.
    pub fn reprogram_point(&self, s: u64, y: u64) -> Result<Self> {
        let mut out = self.clone();
        out.set(s, y)?;
        Ok(out)
    }

    fn set(&mut self, x: u64, y: u64) -> Result<()> {
        if x > mask(self.m) {
            return Err(Error::TableEntryTooWide {
                value: x,
                width: self.m,
            });
        }
        if y > mask(self.n) {
            return Err(Error::TableEntryTooWide {
                value: y,
                width: self.n,
            });
        }
        self.table[x as usize] = y as u32;
        Ok(())
    }

    pub fn to_hex(&self) -> String {
        hex_lines(&self.table)
    }
}

/// Key pair for the two-key cipher. The one-key variant has `k1 == k2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Key {
    pub k1: u64,
    pub k2: u64,
}

impl Key {
    pub fn new(k1: u64, k2: u64) -> Self {
        Self { k1, k2 }
    }

    /// Two lines: `k1` then `k2`.
    pub fn to_hex(&self) -> String {
        format!("{:x}\n{:x}\n", self.k1, self.k2)
    }

    pub fn from_hex(dump: &str) -> Result<Self> {
        match parse_hex_lines(dump)?.as_slice() {
            [k1, k2] => Ok(Self::new(*k1 as u64, *k2 as u64)),
            other => Err(Error::HexDump(format!(
                "expected 2 key lines, found {}",
                other.len()
            ))),
        }
    }
}

/// How `(k1, k2)` is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyDistribution {
    TwoKeyUniform,
    OneKey,
}

impl KeyDistribution {
    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Key {
        let k1 = rng.random_range(0..1u64 << n);
        Key::new(k1, self.second_given_first(k1, n, rng))
    }

    /// Draws `k2` from the distribution conditioned on `k1`.
    pub fn second_given_first<R: Rng + ?Sized>(self, k1: u64, n: usize, rng: &mut R) -> u64 {
        match self {
            Self::TwoKeyUniform => rng.random_range(0..1u64 << n),
            Self::OneKey => k1,
        }
    }

    /// Draws `k1` from the distribution conditioned on `k2`.
    pub fn first_given_second<R: Rng + ?Sized>(self, k2: u64, n: usize, rng: &mut R) -> u64 {
        // both variants are symmetric in k1, k2
        self.second_given_first(k2, n, rng)
    }
}

pub fn sample_key<R: Rng + ?Sized>(dist: KeyDistribution, n: usize, rng: &mut R) -> Key {
    dist.sample(n, rng)
}

/// `E_k[P](x) = P(x ⊕ k1) ⊕ k2`.
#[inline]
pub fn em_forward(p: &Permutation, k: Key, x: u64) -> u64 {
    p.apply(x ^ k.k1) ^ k.k2
}

/// `E_k[P]^{-1}(y) = P^{-1}(y ⊕ k2) ⊕ k1`.
#[inline]
pub fn em_inverse(p: &Permutation, k: Key, y: u64) -> u64 {
    p.apply_inverse(y ^ k.k2) ^ k.k1
}

/// Forward-only variant `E_k[F](x) = F(x ⊕ k)`.
#[inline]
pub fn em_forward_fn(f: &FunctionTable, k: u64, x: u64) -> u64 {
    f.apply(x ^ k)
}

/// Ordered classical query/response pairs.
///
/// Strict transcripts (the default) require distinct inputs and distinct
/// outputs. Relaxed ones only require distinct inputs, which is what a
/// random function can produce.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Transcript {
    entries: Vec<(u64, u64)>,
    relaxed: bool,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn relaxed() -> Self {
        Self {
            entries: Vec::new(),
            relaxed: true,
        }
    }

    pub fn from_entries(entries: &[(u64, u64)]) -> Result<Self> {
        let mut t = Self::new();
        for &(x, y) in entries {
            t.push(x, y)?;
        }
        Ok(t)
    }

    pub fn relaxed_from_entries(entries: &[(u64, u64)]) -> Result<Self> {
        let mut t = Self::relaxed();
        for &(x, y) in entries {
            t.push(x, y)?;
        }
        Ok(t)
    }

    pub fn push(&mut self, x: u64, y: u64) -> Result<()> {
        if self.contains_input(x) {
            return Err(Error::DuplicateTranscriptInput(x));
        }
        if !self.relaxed && self.contains_output(y) {
            return Err(Error::DuplicateTranscriptOutput(y));
        }
        self.entries.push((x, y));
        Ok(())
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_input(&self, x: u64) -> bool {
        self.entries.iter().any(|&(a, _)| a == x)
    }

    pub fn contains_output(&self, y: u64) -> bool {
        self.entries.iter().any(|&(_, b)| b == y)
    }

    /// The first `t` entries.
    pub fn prefix(&self, t: usize) -> Self {
        Self {
            entries: self.entries[..t.min(self.entries.len())].to_vec(),
            relaxed: self.relaxed,
        }
    }
}

/// Pairs `(x, y)` with each `x` appearing at most once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReprogramSet {
    pairs: Vec<(u64, u64)>,
}

impl ReprogramSet {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        for (i, &(x, _)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|&(a, _)| a == x) {
                return Err(Error::DuplicateReprogramInput(x));
            }
        }
        Ok(Self { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn contains_input(&self, x: u64) -> bool {
        self.pairs.iter().any(|&(a, _)| a == x)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `P_{T,k} = swap_{a_1,b_1} ∘ ⋯ ∘ swap_{a_t,b_t} ∘ P` with
/// `a_i = P(x_i ⊕ k1)` and `b_i = y_i ⊕ k2`.
///
/// The swaps are composed verbatim; when two transcript entries collide
/// internally the programmed points may not all hold, and that is not an
/// error.
pub fn perm_reprogram(p: &Permutation, t: &Transcript, k: Key) -> Result<Permutation> {
    if t.relaxed {
        // re-validate output distinctness for transcripts built relaxed
        Transcript::from_entries(t.entries())?;
    }
    let mut out = p.clone();
    for &(x, y) in t.entries().iter().rev() {
        let a = p.apply(x ^ k.k1);
        let b = y ^ k.k2;
        out.swap_outputs(a, b);
    }
    Ok(out)
}

/// Forward-only `F_{T,k}`: `y` where `(x ⊕ k, y) ∈ T`, `F(x)` elsewhere.
pub fn fwd_only_reprogram(f: &FunctionTable, t: &Transcript, k: u64) -> Result<FunctionTable> {
    let mut out = f.clone();
    for &(x, y) in t.entries() {
        out.set(x ^ k, y)?;
    }
    Ok(out)
}

pub fn fn_reprogram_set(f: &FunctionTable, set: &ReprogramSet) -> Result<FunctionTable> {
    f.reprogram_set(set)
}

pub fn fn_reprogram_point(f: &FunctionTable, s: u64, y: u64) -> Result<FunctionTable> {
    f.reprogram_point(s, y)
}

fn hex_lines(values: &[u32]) -> String {
    let mut out = String::with_capacity(values.len() * 4);
    for v in values {
        let _ = writeln!(out, "{v:x}");
    }
    out
}

fn parse_hex_lines(dump: &str) -> Result<Vec<u32>> {
    if !dump.is_empty() && !dump.ends_with('\n') {
        return Err(Error::HexDump("missing trailing newline".into()));
    }
    dump.lines()
        .enumerate()
        .map(|(i, line)| {
            if line.is_empty()
                || line
                    .bytes()
                    .any(|b| !matches!(b, b'0'..=b'9' | b'a'..=b'f'))
            {
                return Err(Error::HexDump(format!("line {}: {line:?}", i + 1)));
            }
            u32::from_str_radix(line, 16)
                .map_err(|e| Error::HexDump(format!("line {}: {e}", i + 1)))
        })
        .collect()
}
