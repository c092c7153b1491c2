//! Ground truth: brute-force distributions, the minimum-weight codeword count,
//! and identity checks for reference tables.
//!
//! The brute-force sweep here is deliberately separate from
//! [`crate::cosetenum`]: basis tables are built by direct evaluation and the
//! walk keeps its own state.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::boolfn::{rm_dimension, TruthTable};
use crate::error::{Error, Result};
use crate::wenum::{validate_code_enumerator, Report, WeightEnumerator};

pub const BRUTE_FORCE_CAP_LOG2: usize = 28;

const SEGMENTS_LOG2: usize = 10;

fn monomial_table(m: usize, mask: u32) -> Vec<u64> {
    let n = 1usize << m;
    let mut words = vec![0u64; n.div_ceil(64)];
    for x in 0..n as u32 {
        if x & mask == mask {
            words[(x >> 6) as usize] |= 1 << (x & 63);
        }
    }
    words
}

/// Weight distribution of R(r,m) by enumerating all `2^dim` codewords.
pub fn brute_force_distribution(r: usize, m: usize) -> Result<WeightEnumerator> {
    brute_force_coset_distribution(&TruthTable::zero(m), r)
}

/// Weight distribution of `f + R(r,m)` by enumerating all its words.
pub fn brute_force_coset_distribution(f: &TruthTable, r: usize) -> Result<WeightEnumerator> {
    let m = f.m();
    let dim = rm_dimension(r, m);
    if dim > BRUTE_FORCE_CAP_LOG2 {
        return Err(Error::CapExceeded {
            dim,
            cap: BRUTE_FORCE_CAP_LOG2,
        });
    }
    let n = 1usize << m;
    let basis: Vec<Vec<u64>> = (0u32..(1u32 << m))
        .filter(|x| x.count_ones() as usize <= r)
        .map(|mask| monomial_table(m, mask))
        .collect();
    let offset = f.words().to_vec();
    let seg_log2 = dim.min(SEGMENTS_LOG2);
    let seg_len = 1u64 << (dim - seg_log2);

    let hist = (0..(1u64 << seg_log2))
        .into_par_iter()
        .map(|seg| {
            let start = seg * seg_len;
            let mut word = offset.clone();
            let gray = start ^ (start >> 1);
            for (k, b) in basis.iter().enumerate() {
                if (gray >> k) & 1 == 1 {
                    word.iter_mut().zip(b).for_each(|(w, x)| *w ^= x);
                }
            }
            let mut hist = vec![0u64; n + 1];
            for t in start..start + seg_len {
                let wt: u32 = word.iter().map(|w| w.count_ones()).sum();
                hist[wt as usize] += 1;
                let next = t + 1;
                if next < start + seg_len {
                    let b = &basis[next.trailing_zeros() as usize];
                    word.iter_mut().zip(b).for_each(|(w, x)| *w ^= x);
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(WeightEnumerator::from_counts(&hist))
}

/// Number of minimum-weight (`2^(m-r)`) codewords of R(r,m):
/// `2^r · Π_{i=0}^{m-r-1} (2^(m-i) - 1) / (2^(m-r-i) - 1)`.
pub fn min_weight_count(r: usize, m: usize) -> BigUint {
    assert!(r <= m);
    let one = BigUint::one();
    let mut num = BigUint::one() << r;
    let mut den = BigUint::one();
    for i in 0..(m - r) {
        num *= (&one << (m - i)) - &one;
        den *= (&one << (m - r - i)) - &one;
    }
    let (q, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "minimum-weight count must divide exactly");
    q
}

/// Enumerator of the dual of a linear `[n, k]` code with enumerator `w`:
/// `B_j = 2^-k · Σ_i A_i·K_j(i)`, where `Σ_j K_j(i) z^j = (1-z)^i (1+z)^(n-i)`.
/// Since R(r,m) and R(m-r-1,m) are dual, this checks one distribution
/// against another.
pub fn macwilliams_dual(w: &WeightEnumerator, k: usize) -> Result<WeightEnumerator> {
    let n = w.n();
    let mut acc = vec![BigInt::zero(); n + 1];
    for (i, a) in w.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let a = BigInt::from_biguint(Sign::Plus, a.clone());
        // (1-z)^i (1+z)^(n-i) by repeated multiplication by linear factors
        let mut kraw = vec![BigInt::zero(); n + 1];
        kraw[0] = BigInt::one();
        for step in 0..n {
            let sign = if step < i { -1 } else { 1 };
            for j in (1..=step + 1).rev() {
                let prev = kraw[j - 1].clone();
                if sign < 0 {
                    kraw[j] -= prev;
                } else {
                    kraw[j] += prev;
                }
            }
        }
        for (b, kj) in acc.iter_mut().zip(&kraw) {
            *b += &a * kj;
        }
    }
    let size = BigInt::one() << k;
    let coeffs = acc
        .into_iter()
        .map(|b| {
            let (q, rem) = b.div_rem(&size);
            if !rem.is_zero() || q.is_negative() {
                return Err(Error::InvalidArgument(
                    "not the enumerator of a linear code of this dimension".into(),
                ));
            }
            Ok(q.to_biguint().expect("nonnegative"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightEnumerator::from_coeffs(coeffs))
}

/// Exponent `e` such that every weight of R(r,m) is divisible by `2^e`:
/// `⌈m/r⌉ - 1`, and `m` for the repetition code R(0,m).
pub fn divisibility_exponent(r: usize, m: usize) -> usize {
    if r == 0 {
        m
    } else {
        m.div_ceil(r) - 1
    }
}

/// All identities a weight distribution of R(r,m) must satisfy.
pub fn validate_distribution(w: &WeightEnumerator, r: usize, m: usize) -> Report {
    let n = 1usize << m;
    let k = rm_dimension(r, m);
    let mut report = validate_code_enumerator(w, k, n);
    if w.n() != n {
        return report;
    }
    report.push("W_n", w.coeff(n).is_one(), format!("W_{n} = {}", w.coeff(n)));

    let dmin = 1usize << (m - r);
    let expected = min_weight_count(r, m);
    let min_ok = w.min_nonzero_weight() == Some(dmin) && *w.coeff(dmin) == expected;
    report.push(
        "minimum weight",
        min_ok,
        match w.min_nonzero_weight() {
            Some(i) => format!(
                "min nonzero weight {i} with count {}, expected {dmin} with {expected}",
                w.coeff(i)
            ),
            None => format!("no nonzero weight, expected {dmin} with {expected}"),
        },
    );

    let e = divisibility_exponent(r, m);
    let step = 1usize << e;
    let bad = (0..=n).find(|&i| i % step != 0 && !w.coeff(i).is_zero());
    report.push(
        "divisibility",
        bad.is_none(),
        match bad {
            None => format!("all weights divisible by {step}"),
            Some(i) => format!("W_{i} = {} but {i} is not divisible by {step}", w.coeff(i)),
        },
    );
    report
}

/// Parses a two- or three-column distribution file and validates it as R(r,m).
pub fn validate_reference(text: &str, r: usize, m: usize) -> Result<Report> {
    if r > m {
        return Err(Error::InvalidArgument(format!("order {r} exceeds {m} variables")));
    }
    let w = WeightEnumerator::from_text(text, 1 << m)?;
    Ok(validate_distribution(&w, r, m))
}
