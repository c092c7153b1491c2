//! Coset weight enumerators `W[z; f + R(r,m)]` by exhaustive Gray-code
//! traversal of R(r,m), batched over many coset representatives.
//!
//! The sweep walks the reflected binary Gray code over the coefficient
//! vector of the monomial basis, so each step XORs one basis truth table into
//! the running codeword. The sequence is cut into a fixed number of segments
//! (independent of the thread count) whose histograms are summed, so results
//! do not depend on scheduling.

use rayon::prelude::*;

use crate::boolfn::{rm_dimension, word_count, Anf, Monomial, TruthTable};
use crate::boolfn::truth_table_from_anf;
use crate::error::{Error, Result};
use crate::wenum::WeightEnumerator;

pub const DEFAULT_CAP_LOG2: usize = 30;

const MAX_SEGMENTS_LOG2: usize = 8;
const REP_CHUNK: usize = 256;

/// Truth tables of the monomials of degree at most `r`, in canonical order.
pub fn rm_basis(r: usize, m: usize) -> Vec<TruthTable> {
    let mut monos: Vec<Monomial> = (0u32..(1u32 << m))
        .filter(|x| x.count_ones() as usize <= r)
        .map(Monomial)
        .collect();
    monos.sort();
    monos
        .into_iter()
        .map(|mono| truth_table_from_anf(&Anf::from_monomials(m, [mono]).expect("in range")))
        .collect()
}

pub fn coset_enumerator(f: &TruthTable, r: usize, m: usize) -> Result<WeightEnumerator> {
    coset_enumerator_with_cap(f, r, m, DEFAULT_CAP_LOG2)
}

pub fn coset_enumerator_with_cap(
    f: &TruthTable,
    r: usize,
    m: usize,
    cap_log2: usize,
) -> Result<WeightEnumerator> {
    Ok(batch_coset_enumerators_with_cap(std::slice::from_ref(f), r, m, cap_log2)?.remove(0))
}

pub fn batch_coset_enumerators(
    reps: &[TruthTable],
    r: usize,
    m: usize,
) -> Result<Vec<WeightEnumerator>> {
    batch_coset_enumerators_with_cap(reps, r, m, DEFAULT_CAP_LOG2)
}

/// One sweep over R(r,m) serving every representative.
pub fn batch_coset_enumerators_with_cap(
    reps: &[TruthTable],
    r: usize,
    m: usize,
    cap_log2: usize,
) -> Result<Vec<WeightEnumerator>> {
    if let Some(bad) = reps.iter().find(|t| t.m() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: bad.m(),
        });
    }
    let dim = rm_dimension(r, m);
    if dim > cap_log2 || dim >= 64 {
        return Err(Error::CapExceeded { dim, cap: cap_log2 });
    }
    let w = word_count(m);
    let n = 1usize << m;
    let basis: Vec<u64> = rm_basis(r, m)
        .iter()
        .flat_map(|t| t.words().to_vec())
        .collect();
    let total = 1u64 << dim;
    let seg_log2 = dim.min(MAX_SEGMENTS_LOG2);
    let seg_len = total >> seg_log2;

    let chunks: Vec<&[TruthTable]> = reps.chunks(REP_CHUNK).collect();
    let per_chunk: Vec<Vec<u64>> = chunks
        .par_iter()
        .map(|chunk| {
            let flat: Vec<u64> = chunk.iter().flat_map(|t| t.words().to_vec()).collect();
            let slots = chunk.len() * (n + 1);
            (0..(1u64 << seg_log2))
                .into_par_iter()
                .fold(
                    || vec![0u64; slots],
                    |mut hist, seg| {
                        let start = seg * seg_len;
                        sweep(&basis, w, &flat, start, start + seg_len, n, &mut hist);
                        hist
                    },
                )
                .reduce(
                    || vec![0u64; slots],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                )
        })
        .collect();

    Ok(per_chunk
        .into_iter()
        .flat_map(|hist| {
            hist.chunks(n + 1)
                .map(WeightEnumerator::from_counts)
                .collect::<Vec<_>>()
        })
        .collect())
}

/// Histogram the weights of `rep ⊕ c` for the codewords at Gray positions
/// `start..end`.
fn sweep(basis: &[u64], w: usize, reps: &[u64], start: u64, end: u64, n: usize, hist: &mut [u64]) {
    let nreps = reps.len() / w;
    let mut cw = vec![0u64; w];
    let mut g = start ^ (start >> 1);
    while g != 0 {
        let k = g.trailing_zeros() as usize;
        for (c, b) in cw.iter_mut().zip(&basis[k * w..(k + 1) * w]) {
            *c ^= b;
        }
        g &= g - 1;
    }
    if w == 1 {
        let mut c = cw[0];
        for t in start..end {
            for (i, rep) in reps.iter().enumerate() {
                hist[i * (n + 1) + (rep ^ c).count_ones() as usize] += 1;
            }
            let next = t + 1;
            if next < end {
                c ^= basis[next.trailing_zeros() as usize];
            }
        }
        return;
    }
    for t in start..end {
        for i in 0..nreps {
            let rep = &reps[i * w..(i + 1) * w];
            let wt: u32 = rep.iter().zip(&cw).map(|(a, b)| (a ^ b).count_ones()).sum();
            hist[i * (n + 1) + wt as usize] += 1;
        }
        let next = t + 1;
        if next < end {
            let k = next.trailing_zeros() as usize;
            for (c, b) in cw.iter_mut().zip(&basis[k * w..(k + 1) * w]) {
                *c ^= b;
            }
        }
    }
}
