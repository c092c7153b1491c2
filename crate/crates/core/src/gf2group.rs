//! GL(m,2) and GA(m) acting on Boolean functions by substitution.
//!
//! Row `k` of a [`Gf2Matrix`] is the linear form substituted for `x_{k+1}`:
//! bit `j` of the row is the coefficient of `x_{j+1}`. Acting on a function,
//! `(f∘A)(x) = f(Ax + b)`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::Rng;

use crate::boolfn::{
    anf_from_truth_table, check_vars, truth_table_from_anf, Anf, Monomial, TruthTable,
};
use crate::error::{Error, Result};

pub const DEFAULT_EQUIVALENCE_BUDGET: u64 = 10_000_000;

#[inline]
fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gf2Matrix {
    m: usize,
    rows: Vec<u32>,
}

impl Gf2Matrix {
    pub fn identity(m: usize) -> Self {
        Gf2Matrix {
            m,
            rows: (0..m).map(|k| 1 << k).collect(),
        }
    }

    pub fn from_rows(m: usize, rows: Vec<u32>) -> Result<Self> {
        check_vars(m)?;
        if rows.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: rows.len(),
            });
        }
        if rows.iter().any(|&r| m < 32 && r >> m != 0) {
            return Err(Error::MatrixParse(format!("row wider than {m} columns")));
        }
        Ok(Gf2Matrix { m, rows })
    }

    /// Parses `m` whitespace-separated bit strings of length `m`; character
    /// `j` of row `k` is the coefficient of `x_{j+1}` in the form for `x_{k+1}`.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == '[' || c == ']')
            .filter(|t| !t.is_empty())
            .collect();
        let m = tokens.len();
        let mut rows = Vec::with_capacity(m);
        for t in &tokens {
            if t.len() != m {
                return Err(Error::MatrixParse(format!(
                    "row {t:?} has length {}, expected {m}",
                    t.len()
                )));
            }
            let mut row = 0u32;
            for (j, c) in t.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => row |= 1 << j,
                    _ => return Err(Error::MatrixParse(format!("bad character {c:?} in {t:?}"))),
                }
            }
            rows.push(row);
        }
        Self::from_rows(m, rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(k, &r)| r == 1 << k)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.m {
            let bit = 1u32 << col;
            if let Some(p) = (rank..self.m).find(|&i| rows[i] & bit != 0) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (i, r) in rows.iter_mut().enumerate() {
                    if i != rank && *r & bit != 0 {
                        *r ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.m
    }

    /// Image of the point `x` (bit `j` = coordinate `x_{j+1}`).
    #[inline]
    pub fn image(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &r)| acc | (parity(r & x) << k))
    }

    /// Column `j` is the image of the unit vector `e_{j+1}`.
    pub fn columns(&self) -> Vec<u32> {
        (0..self.m)
            .map(|j| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (k, &r)| acc | (((r >> j) & 1) << k))
            })
            .collect()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        Gf2Matrix {
            m: self.m,
            rows: self.columns(),
        }
    }

    /// Matrix product: `(self * other)(x) = self(other(x))`.
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.m, other.m);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                (0..self.m)
                    .filter(|j| (r >> j) & 1 == 1)
                    .fold(0, |acc, j| acc ^ other.rows[j])
            })
            .collect();
        Gf2Matrix { m: self.m, rows }
    }

    pub fn inverse(&self) -> Result<Gf2Matrix> {
        let m = self.m;
        let mut left = self.rows.clone();
        let mut right: Vec<u32> = (0..m).map(|k| 1 << k).collect();
        for col in 0..m {
            let bit = 1u32 << col;
            let p = (col..m).find(|&i| left[i] & bit != 0).ok_or(Error::SingularMatrix)?;
            left.swap(col, p);
            right.swap(col, p);
            for i in 0..m {
                if i != col && left[i] & bit != 0 {
                    left[i] ^= left[col];
                    right[i] ^= right[col];
                }
            }
        }
        Ok(Gf2Matrix { m, rows: right })
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &r) in self.rows.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            for j in 0..self.m {
                f.write_str(if (r >> j) & 1 == 1 { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// `x ↦ Mx + b` with `M` invertible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineMap {
    matrix: Gf2Matrix,
    translation: u32,
}

impl AffineMap {
    pub fn new(matrix: Gf2Matrix, translation: u32) -> Result<Self> {
        if !matrix.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        if matrix.m < 32 && translation >> matrix.m != 0 {
            return Err(Error::InvalidArgument("translation wider than m".into()));
        }
        Ok(AffineMap {
            matrix,
            translation,
        })
    }

    pub fn linear(matrix: Gf2Matrix) -> Result<Self> {
        Self::new(matrix, 0)
    }

    pub fn identity(m: usize) -> Self {
        AffineMap {
            matrix: Gf2Matrix::identity(m),
            translation: 0,
        }
    }

    pub fn translation_by(m: usize, b: u32) -> Self {
        assert!(m >= 32 || b >> m == 0);
        AffineMap {
            matrix: Gf2Matrix::identity(m),
            translation: b,
        }
    }

    pub fn m(&self) -> usize {
        self.matrix.m
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    pub fn translation(&self) -> u32 {
        self.translation
    }

    #[inline]
    pub fn point(&self, x: u32) -> u32 {
        self.matrix.image(x) ^ self.translation
    }
}

/// The map with `apply(f, compose(a, b)) == apply(apply(f, b), a)`, i.e. the
/// point map `x ↦ b(a(x))`.
pub fn compose(a: &AffineMap, b: &AffineMap) -> Result<AffineMap> {
    if a.m() != b.m() {
        return Err(Error::DimensionMismatch {
            expected: a.m(),
            actual: b.m(),
        });
    }
    Ok(AffineMap {
        matrix: b.matrix.mul(&a.matrix),
        translation: b.matrix.image(a.translation) ^ b.translation,
    })
}

pub fn invert(a: &AffineMap) -> Result<AffineMap> {
    let inv = a.matrix.inverse()?;
    let translation = inv.image(a.translation);
    Ok(AffineMap {
        matrix: inv,
        translation,
    })
}

/// `(f∘A)(x) = f(Mx + b)`.
pub fn apply(f: &TruthTable, a: &AffineMap) -> Result<TruthTable> {
    if f.m() != a.m() {
        return Err(Error::DimensionMismatch {
            expected: a.m(),
            actual: f.m(),
        });
    }
    let m = f.m();
    let cols = a.matrix.columns();
    let mut out = TruthTable::zero(m);
    // walk points in Gray order so each image differs from the last by a column
    let mut y = a.translation;
    if f.get(y) {
        out.set(0, true);
    }
    for t in 1u32..(1u32 << m) {
        let j = t.trailing_zeros() as usize;
        y ^= cols[j];
        if f.get(y) {
            out.set(t ^ (t >> 1), true);
        }
    }
    Ok(out)
}

pub fn transform_anf(a: &Anf, map: &AffineMap) -> Result<Anf> {
    Ok(anf_from_truth_table(&apply(&truth_table_from_anf(a), map)?))
}

/// Degree-`d` part of `x_S ∘ M` for a single monomial of size `d`: the sum
/// over choices of distinct variables, one from each substituted form.
fn monomial_top_image(mono: Monomial, matrix: &Gf2Matrix, out: &mut HashSet<u32>) {
    let mut cur: HashSet<u32> = HashSet::from([0]);
    for var in mono.vars() {
        let row = matrix.rows[var - 1];
        let mut next = HashSet::with_capacity(cur.len() * 2);
        for &t in &cur {
            let mut bits = row & !t;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                if !next.insert(t | b) {
                    next.remove(&(t | b));
                }
                bits ^= b;
            }
        }
        cur = next;
    }
    for t in cur {
        if !out.insert(t) {
            out.remove(&t);
        }
    }
}

/// Degree-`d` part of `e∘M` for a form `e` homogeneous of degree `d`.
/// Translations never touch this part, so only the matrix is needed.
pub fn top_image(e: &Anf, matrix: &Gf2Matrix) -> Result<Anf> {
    if e.m() != matrix.m {
        return Err(Error::DimensionMismatch {
            expected: matrix.m,
            actual: e.m(),
        });
    }
    if e.is_zero() {
        return Ok(e.clone());
    }
    if e.homogeneous_degree().is_none() {
        return Err(Error::NotHomogeneous {
            degree: e.degree(),
            anf: e.to_string(),
        });
    }
    let mut acc = HashSet::new();
    for mono in e.monomials() {
        monomial_top_image(mono, matrix, &mut acc);
    }
    Anf::from_monomials(e.m(), acc.into_iter().map(Monomial))
}

/// Uniform element of GL(m,2) by rejection sampling.
pub fn random_invertible<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Gf2Matrix {
    let mask = if m >= 32 { !0 } else { (1u32 << m) - 1 };
    loop {
        let rows = (0..m).map(|_| rng.gen::<u32>() & mask).collect();
        let candidate = Gf2Matrix { m, rows };
        if candidate.is_invertible() {
            return candidate;
        }
    }
}

/// Two generators of GL(m,2): the transvection `x_1 ← x_1 + x_2` and the
/// cyclic shift `x_k ← x_{k+1}`. Empty for `m <= 1`.
pub fn gl_generators(m: usize) -> Vec<Gf2Matrix> {
    if m <= 1 {
        return Vec::new();
    }
    let mut transvection = Gf2Matrix::identity(m);
    transvection.rows[0] |= 1 << 1;
    let shift = Gf2Matrix {
        m,
        rows: (0..m).map(|k| 1 << ((k + 1) % m)).collect(),
    };
    vec![transvection, shift]
}

/// GL(m,2) generators plus translations by every unit vector.
pub fn ga_generators(m: usize) -> Vec<AffineMap> {
    gl_generators(m)
        .into_iter()
        .map(|g| AffineMap {
            matrix: g,
            translation: 0,
        })
        .chain((0..m).map(|j| AffineMap::translation_by(m, 1 << j)))
        .collect()
}

/// True iff the top-degree part of `e∘A` is `e` again.
pub fn stabilizer_check(e: &Anf, a: &AffineMap) -> bool {
    if e.is_zero() {
        return true;
    }
    match top_image(e, &a.matrix) {
        Ok(img) => img == *e,
        Err(_) => false,
    }
}

fn check_same_degree(e1: &Anf, e2: &Anf) -> Result<Option<usize>> {
    if e1.m() != e2.m() {
        return Err(Error::DimensionMismatch {
            expected: e1.m(),
            actual: e2.m(),
        });
    }
    for e in [e1, e2] {
        if !e.is_zero() && e.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous {
                degree: e.degree(),
                anf: e.to_string(),
            });
        }
    }
    match (e1.homogeneous_degree(), e2.homogeneous_degree()) {
        (Some(a), Some(b)) if a != b => Err(Error::DegreeMismatch(a, b)),
        (a, b) => Ok(a.or(b)),
    }
}

/// Random search for `A ∈ GL(m,2)` with `e1∘A ∈ e2 + R(r_low, m)`.
///
/// `Ok(None)` means the budget ran out; it is not a proof of inequivalence.
pub fn find_equivalence<R: Rng + ?Sized>(
    e1: &Anf,
    e2: &Anf,
    r_low: usize,
    budget: u64,
    rng: &mut R,
) -> Result<Option<Gf2Matrix>> {
    if let Some(d) = check_same_degree(e1, e2)? {
        if r_low + 1 != d {
            return Err(Error::InvalidArgument(format!(
                "r_low must be {} for degree-{d} forms",
                d.saturating_sub(1)
            )));
        }
    }
    Ok(find_equivalence_any(e1, std::slice::from_ref(e2), budget, rng)?.map(|(_, a)| a))
}

/// Random search against several targets at once; returns the index of the
/// target hit and the matrix.
pub fn find_equivalence_any<R: Rng + ?Sized>(
    e1: &Anf,
    targets: &[Anf],
    budget: u64,
    rng: &mut R,
) -> Result<Option<(usize, Gf2Matrix)>> {
    let mut lookup: HashMap<&Anf, usize> = HashMap::new();
    for (i, t) in targets.iter().enumerate() {
        check_same_degree(e1, t)?;
        lookup.entry(t).or_insert(i);
    }
    let m = e1.m();
    if let Some(&i) = lookup.get(e1) {
        return Ok(Some((i, Gf2Matrix::identity(m))));
    }
    if e1.is_zero() {
        // the zero form is only equivalent to itself
        return Ok(None);
    }
    for attempt in 1..=budget {
        let a = random_invertible(m, rng);
        if let Some(&i) = lookup.get(&top_image(e1, &a)?) {
            log::debug!("equivalence for {e1} found after {attempt} attempts");
            return Ok(Some((i, a)));
        }
        if attempt % 1_000_000 == 0 {
            log::info!("equivalence search for {e1}: {attempt}/{budget} attempts");
        }
    }
    Ok(None)
}
