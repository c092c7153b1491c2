//! Boolean functions on `m` variables: truth tables, algebraic normal forms,
//! and the homogeneous-form indexing used by the coset machinery.
//!
//! Point convention: the truth-table bit at index `idx = Σ x_i·2^(i-1)` holds
//! `f(x_1, ..., x_m)`, so variable 1 is the least significant coordinate and
//! splitting on the last variable splits the table into two contiguous halves.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 16;

const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

pub(crate) fn word_count(m: usize) -> usize {
    if m <= 6 {
        1
    } else {
        1 << (m - 6)
    }
}

pub(crate) fn tail_mask(m: usize) -> u64 {
    if m >= 6 {
        !0
    } else {
        (1u64 << (1u32 << m)) - 1
    }
}

/// In-place binary Moebius transform. It is an involution and maps a truth
/// table to its ANF coefficient vector (coefficient of monomial mask `u` at
/// bit `u`) and back.
pub(crate) fn moebius(words: &mut [u64], m: usize) {
    for (i, mask) in LOW_MASKS.iter().enumerate().take(m.min(6)) {
        let shift = 1u32 << i;
        for w in words.iter_mut() {
            *w ^= (*w & mask) << shift;
        }
    }
    for i in 6..m {
        let stride = 1usize << (i - 6);
        for block in words.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h ^= *l;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Dimension of R(r, m): the number of monomials of degree at most `r`.
pub fn rm_dimension(r: usize, m: usize) -> usize {
    (0..=r.min(m)).map(|i| binomial(m, i) as usize).sum()
}

pub(crate) fn check_vars(m: usize) -> Result<()> {
    if m > MAX_VARS {
        Err(Error::TooManyVariables(m))
    } else {
        Ok(())
    }
}

/// Evaluation table of a Boolean function on `m` variables, bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    m: usize,
    words: Vec<u64>,
}

impl TruthTable {
    /// The zero function. Panics if `m > 16`.
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        TruthTable {
            m,
            words: vec![0; word_count(m)],
        }
    }

    pub fn ones(m: usize) -> Self {
        let mut t = Self::zero(m);
        t.words.iter_mut().for_each(|w| *w = !0);
        t.words[0] &= tail_mask(m);
        t
    }

    pub fn from_fn(m: usize, f: impl Fn(u32) -> bool) -> Self {
        let mut t = Self::zero(m);
        for x in 0..(1u32 << m) {
            if f(x) {
                t.set(x, true);
            }
        }
        t
    }

    pub fn from_words(m: usize, words: Vec<u64>) -> Result<Self> {
        check_vars(m)?;
        if words.len() != word_count(m) {
            return Err(Error::DimensionMismatch {
                expected: word_count(m),
                actual: words.len(),
            });
        }
        if words[0] & !tail_mask(m) != 0 {
            return Err(Error::InvalidArgument(
                "bits set beyond the end of the table".into(),
            ));
        }
        Ok(TruthTable { m, words })
    }

    /// Table of the coordinate function `x_i` (1-based).
    pub fn variable(m: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= m);
        Self::from_fn(m, |x| (x >> (i - 1)) & 1 == 1)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of points, `2^m`.
    pub fn len(&self) -> usize {
        1 << self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, idx: u32) -> bool {
        let idx = idx as usize;
        (self.words[idx >> 6] >> (idx & 63)) & 1 == 1
    }

    pub fn set(&mut self, idx: u32, value: bool) {
        let idx = idx as usize;
        let bit = 1u64 << (idx & 63);
        if value {
            self.words[idx >> 6] |= bit;
        } else {
            self.words[idx >> 6] &= !bit;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn xor_assign(&mut self, other: &TruthTable) {
        assert_eq!(self.m, other.m);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &TruthTable) -> TruthTable {
        assert_eq!(self.m, other.m);
        TruthTable {
            m: self.m,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Reinterpret as a function of `m_new >= m` variables that ignores the
    /// added ones.
    pub fn extend(&self, m_new: usize) -> TruthTable {
        assert!(m_new >= self.m && m_new <= MAX_VARS);
        let mut out = TruthTable::zero(m_new);
        let n = self.len();
        for x in 0..(1u32 << m_new) {
            if self.get(x % n as u32) {
                out.set(x, true);
            }
        }
        out
    }
}

impl BitXor for &TruthTable {
    type Output = TruthTable;

    fn bitxor(self, rhs: &TruthTable) -> TruthTable {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(m={}, ", self.m)?;
        for x in 0..self.len() as u32 {
            write!(f, "{}", self.get(x) as u8)?;
        }
        write!(f, ")")
    }
}

/// A monomial `x_{i_1}...x_{i_k}` stored as a variable mask (bit `i-1` for `x_i`).
///
/// Ordered by degree, then lexicographically by the sorted index tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_vars(vars: &[usize]) -> Monomial {
        Monomial(vars.iter().fold(0, |acc, &v| acc | 1 << (v - 1)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn vars(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| (self.0 >> i) & 1 == 1).map(|i| i + 1)
    }

    pub fn contains(self, var: usize) -> bool {
        (self.0 >> (var - 1)) & 1 == 1
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                std::cmp::Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                // the lowest differing variable belongs to self
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "()");
        }
        for v in self.vars() {
            if v <= 9 {
                write!(f, "{v}")?;
            } else {
                write!(f, "({v})")?;
            }
        }
        Ok(())
    }
}

/// Algebraic normal form: a set of monomials over `m` variables, summed over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Anf {
    m: usize,
    monomials: BTreeSet<Monomial>,
}

impl Anf {
    pub fn zero(m: usize) -> Self {
        Anf {
            m,
            monomials: BTreeSet::new(),
        }
    }

    /// GF(2) sum of the given monomials: repeated monomials cancel.
    pub fn from_monomials(m: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        check_vars(m)?;
        let mut set = BTreeSet::new();
        for mono in monomials {
            if m < 32 && mono.0 >> m != 0 {
                return Err(Error::VariableOutOfRange {
                    index: 32 - mono.0.leading_zeros() as usize,
                    m,
                });
            }
            if !set.insert(mono) {
                set.remove(&mono);
            }
        }
        Ok(Anf { m, monomials: set })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.monomials.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, mono: Monomial) -> bool {
        self.monomials.contains(&mono)
    }

    /// Largest monomial size; 0 for both the zero function and constants.
    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// `Some(d)` if every monomial has size `d`; `None` for the zero form or
    /// mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.monomials.iter().map(|m| m.degree());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// True for the zero form and for forms whose monomials all have size `d`.
    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.monomials.iter().all(|m| m.degree() == d)
    }

    /// The same polynomial viewed over `m_new >= m` variables.
    pub fn extend(&self, m_new: usize) -> Anf {
        assert!(m_new >= self.m);
        Anf {
            m: m_new,
            monomials: self.monomials.clone(),
        }
    }

    /// Multiply by the variable `x_var`.
    pub fn times_var(&self, var: usize) -> Anf {
        assert!(var >= 1 && var <= self.m);
        let bit = 1u32 << (var - 1);
        Anf::from_monomials(self.m, self.monomials.iter().map(|mono| Monomial(mono.0 | bit)))
            .expect("variables stay in range")
    }
}

impl BitXor for &Anf {
    type Output = Anf;

    fn bitxor(self, rhs: &Anf) -> Anf {
        assert_eq!(self.m, rhs.m, "variable counts differ");
        Anf {
            m: self.m,
            monomials: self
                .monomials
                .symmetric_difference(&rhs.monomials)
                .copied()
                .collect(),
        }
    }
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_anf(self))
    }
}

/// Formats in the "+"-separated digit-run notation, highest degree first,
/// e.g. `2367+4567+123`. The zero form prints as `0`.
pub fn format_anf(a: &Anf) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let mut monos: Vec<Monomial> = a.monomials().collect();
    monos.sort_by(|x, y| y.degree().cmp(&x.degree()).then(x.cmp(y)));
    monos
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

/// Parses monomial strings such as `1235+1345` or `0`.
///
/// Each token is a run of variable digits `1`-`9`; indices above 9 are
/// written in parentheses, `(12)`, and the constant monomial is `()`.
pub fn parse_anf(s: &str, m: usize) -> Result<Anf> {
    check_vars(m)?;
    let s = s.trim();
    if s == "0" {
        return Ok(Anf::zero(m));
    }
    let err = |token: &str, reason: &str| Error::AnfParse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let mut monomials = BTreeSet::new();
    for raw in s.split('+') {
        let token = raw.trim();
        if token.is_empty() {
            return Err(err(raw, "empty monomial"));
        }
        let mut mask = 0u32;
        let mut chars = token.chars().peekable();
        let mut any = false;
        while let Some(c) = chars.next() {
            let var = match c {
                '1'..='9' => c as usize - '0' as usize,
                '0' => return Err(err(token, "variable index 0")),
                '(' => {
                    let mut digits = String::new();
                    loop {
                        match chars.next() {
                            Some(')') => break,
                            Some(d) if d.is_ascii_digit() => digits.push(d),
                            _ => return Err(err(token, "unterminated or invalid '(' group")),
                        }
                    }
                    if digits.is_empty() {
                        any = true;
                        continue;
                    }
                    let v: usize = digits.parse().map_err(|_| err(token, "bad index"))?;
                    if v == 0 {
                        return Err(err(token, "variable index 0"));
                    }
                    v
                }
                _ => return Err(err(token, "unexpected character")),
            };
            any = true;
            if var > m {
                return Err(Error::VariableOutOfRange { index: var, m });
            }
            let bit = 1u32 << (var - 1);
            if mask & bit != 0 {
                return Err(err(token, "repeated variable within a monomial"));
            }
            mask |= bit;
        }
        if !any {
            return Err(err(token, "empty monomial"));
        }
        if !monomials.insert(Monomial(mask)) {
            return Err(err(token, "duplicate monomial"));
        }
    }
    Ok(Anf { m, monomials })
}

pub fn truth_table_from_anf(a: &Anf) -> TruthTable {
    let mut t = TruthTable::zero(a.m);
    for mono in a.monomials() {
        t.set(mono.0, true);
    }
    moebius(&mut t.words, a.m);
    t
}

pub fn anf_from_truth_table(t: &TruthTable) -> Anf {
    let mut words = t.words.clone();
    moebius(&mut words, t.m);
    let mut monomials = BTreeSet::new();
    for (wi, &w) in words.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            monomials.insert(Monomial((wi * 64 + b) as u32));
            bits &= bits - 1;
        }
    }
    Anf { m: t.m, monomials }
}

/// Monomials of `a` of size exactly `d`.
pub fn homogeneous_part(a: &Anf, d: usize) -> Anf {
    Anf {
        m: a.m,
        monomials: a.monomials().filter(|mono| mono.degree() == d).collect(),
    }
}

/// Splits a homogeneous `p` on `m+1` variables as `p = e + f·x_{m+1}`, with
/// `e` and `f` on the first `m` variables.
pub fn decompose_top(p: &Anf) -> Result<(Anf, Anf)> {
    if p.m == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    if !p.is_zero() && p.homogeneous_degree().is_none() {
        return Err(Error::NotHomogeneous {
            degree: p.degree(),
            anf: format_anf(p),
        });
    }
    let m = p.m - 1;
    let top = 1u32 << m;
    let mut e = Anf::zero(m);
    let mut f = Anf::zero(m);
    for mono in p.monomials() {
        if mono.0 & top != 0 {
            f.monomials.insert(Monomial(mono.0 & !top));
        } else {
            e.monomials.insert(mono);
        }
    }
    Ok((e, f))
}

pub fn weight(t: &TruthTable) -> u64 {
    t.weight()
}

/// Index of an element of H^(d)(m): bit `i` is the coefficient of the `i`-th
/// degree-`d` monomial in canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct HomogeneousIndex(pub u64);

/// Canonical basis of the homogeneous forms of degree `d` on `m` variables.
#[derive(Clone, Debug)]
pub struct HomogeneousBasis {
    m: usize,
    degree: usize,
    monomials: Vec<Monomial>,
    rank: Vec<u32>,
}

impl HomogeneousBasis {
    /// Fails when `C(m, d) > 64`, beyond what an index word can hold.
    pub fn new(m: usize, degree: usize) -> Result<Self> {
        check_vars(m)?;
        let count = binomial(m, degree);
        if count > 64 {
            return Err(Error::InvalidArgument(format!(
                "H^({degree})({m}) has {count} monomials; at most 64 are indexable"
            )));
        }
        let mut monomials: Vec<Monomial> = (0u32..(1u32 << m))
            .filter(|x| x.count_ones() as usize == degree)
            .map(Monomial)
            .collect();
        monomials.sort();
        let mut rank = vec![u32::MAX; 1 << m];
        for (i, mono) in monomials.iter().enumerate() {
            rank[mono.0 as usize] = i as u32;
        }
        Ok(HomogeneousBasis {
            m,
            degree,
            monomials,
            rank,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis monomials, `C(m, d)`.
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Number of forms, `2^C(m,d)`. Panics when that does not fit in a `u64`.
    pub fn size(&self) -> u64 {
        assert!(self.len() < 64);
        1u64 << self.len()
    }

    pub fn position(&self, mono: Monomial) -> Option<usize> {
        match self.rank.get(mono.0 as usize) {
            Some(&r) if r != u32::MAX => Some(r as usize),
            _ => None,
        }
    }

    pub fn index_of(&self, a: &Anf) -> Result<HomogeneousIndex> {
        if a.m != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: a.m,
            });
        }
        let mut idx = 0u64;
        for mono in a.monomials() {
            let pos = self.position(mono).ok_or_else(|| Error::NotHomogeneous {
                degree: self.degree,
                anf: format_anf(a),
            })?;
            idx |= 1 << pos;
        }
        Ok(HomogeneousIndex(idx))
    }

    pub fn anf_of(&self, idx: HomogeneousIndex) -> Anf {
        let monomials = self
            .monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| (idx.0 >> i) & 1 == 1)
            .map(|(_, &m)| m)
            .collect();
        Anf {
            m: self.m,
            monomials,
        }
    }

    /// Truth tables of the basis monomials, in basis order.
    pub fn monomial_tables(&self) -> Vec<TruthTable> {
        self.monomials
            .iter()
            .map(|&mono| {
                truth_table_from_anf(&Anf {
                    m: self.m,
                    monomials: [mono].into_iter().collect(),
                })
            })
            .collect()
    }
}
