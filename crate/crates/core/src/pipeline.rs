//! The recursion end to end.
//!
//! A target R(R,M) is assembled from the classes `p_i` of H^(R)(M-1):
//! `W[R(R,M)] = Σ L_i W²[p_i + R(R-1,M-1)]`. Each coset enumerator on the
//! right comes from splitting `p = e + f·x_{M-1}` and summing products of
//! enumerators of cosets of R(R-3,M-2), either over every `g` directly or
//! block by block over the merged stabilizer partition of `e`.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boolfn::{
    binomial, decompose_top, format_anf, truth_table_from_anf, Anf, HomogeneousBasis,
    HomogeneousIndex,
};
use crate::classify::{
    classify_quotient, merge_with_enumerators, orbit_partition, ClassRecord, Classification,
    Partition, MAX_CLASSIFY_BITS, MAX_PARTITION_BITS,
};
use crate::cosetenum::batch_coset_enumerators;
use crate::dataio::{read_checkpoint, write_checkpoint, CheckpointHeader};
use crate::error::{Error, Result};
use crate::gf2group::{find_equivalence_any, top_image, AffineMap, Gf2Matrix, DEFAULT_EQUIVALENCE_BUDGET};
use crate::wenum::WeightEnumerator;

/// Largest `C(m, r+1)` for which every coset enumerator is tabulated.
pub const MAX_TABLE_BITS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Sum over every `g` with a full enumerator table.
    Direct,
    /// Block-factored sum over the merged stabilizer partition.
    #[default]
    Blocks,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Strategy::Direct),
            "blocks" => Ok(Strategy::Blocks),
            _ => Err(Error::InvalidArgument(format!("unknown strategy {s:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Direct => "direct",
            Strategy::Blocks => "blocks",
        })
    }
}

fn check_form(a: &Anf, degree: usize, m: usize) -> Result<()> {
    if a.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: a.m(),
        });
    }
    if !a.is_homogeneous_of(degree) {
        return Err(Error::NotHomogeneous {
            degree,
            anf: format_anf(a),
        });
    }
    Ok(())
}

/// Enumerators of `e + g + R(r,m)` for every `g ∈ H^(r+1)(m)`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    e: Anf,
    r: usize,
    basis: HomogeneousBasis,
    enums: Vec<WeightEnumerator>,
}

impl CosetTable {
    pub fn new(e: &Anf, r: usize, m: usize) -> Result<Self> {
        check_form(e, r + 2, m)?;
        let bits = binomial(m, r + 1) as usize;
        if bits > MAX_TABLE_BITS {
            return Err(Error::CapExceeded {
                dim: bits,
                cap: MAX_TABLE_BITS,
            });
        }
        let basis = HomogeneousBasis::new(m, r + 1)?;
        let reps: Vec<_> = (0..basis.size())
            .map(|g| truth_table_from_anf(&(e ^ &basis.anf_of(HomogeneousIndex(g)))))
            .collect();
        let enums = batch_coset_enumerators(&reps, r, m)?;
        Ok(CosetTable {
            e: e.clone(),
            r,
            basis,
            enums,
        })
    }

    pub fn e(&self) -> &Anf {
        &self.e
    }

    pub fn get(&self, g: HomogeneousIndex) -> &WeightEnumerator {
        &self.enums[g.0 as usize]
    }

    /// `Σ_g W[e+g+R(r,m)]·W[e+g+f+R(r,m)]`, the enumerator of
    /// `e + f·x_{m+1} + R(r+1,m+1)`.
    pub fn theorem2(&self, f: &Anf) -> Result<WeightEnumerator> {
        check_form(f, self.r + 1, self.basis.m())?;
        let fi = self.basis.index_of(f)?.0 as usize;
        let n = self.enums[0].n();
        let mut u = WeightEnumerator::zero(2 * n);
        for (g, w) in self.enums.iter().enumerate() {
            u.add_assign(&w.mul(&self.enums[g ^ fi]))?;
        }
        Ok(u)
    }

    /// Multiplications one call to [`CosetTable::theorem2`] performs.
    pub fn multiplications(&self) -> u64 {
        self.enums.len() as u64
    }
}

/// Enumerator of `C(p) = p + R(r+1,m+1)` for `p = e + f·x_{m+1}`, by the
/// direct sum over all `g ∈ H^(r+1)(m)`.
pub fn theorem2_direct(e: &Anf, f: &Anf, r: usize, m: usize) -> Result<WeightEnumerator> {
    CosetTable::new(e, r, m)?.theorem2(f)
}

/// The merged partition Δ′(e) with one enumerator per block.
#[derive(Clone, Debug)]
pub struct Blocks {
    pub merged: Partition,
    pub enums: Vec<WeightEnumerator>,
    /// `|Δ(e)|`, the block count before merging.
    pub raw_blocks: usize,
}

impl Blocks {
    /// `s(e) = |Δ′(e)|`.
    pub fn s(&self) -> usize {
        self.merged.len()
    }
}

/// Orbits of the stabilizer (T1), one enumerator per orbit (T2), and the
/// merge by enumerator (T3).
pub fn prepare_blocks(e: &Anf, gens: &[AffineMap], r: usize, m: usize) -> Result<Blocks> {
    let raw = orbit_partition(e, gens, r, m)?;
    let basis = HomogeneousBasis::new(m, r + 1)?;
    let reps: Vec<_> = (0..raw.len())
        .map(|i| truth_table_from_anf(&(e ^ &basis.anf_of(raw.representative(i)))))
        .collect();
    let raw_enums = batch_coset_enumerators(&reps, r, m)?;
    let (merged, enums) = merge_with_enumerators(&raw, &raw_enums)?;
    log::debug!("e = {e}: |Δ| = {}, |Δ′| = {}", raw.len(), merged.len());
    Ok(Blocks {
        merged,
        enums,
        raw_blocks: raw.len(),
    })
}

/// Block-factored Theorem 2: for each block `i`, gather the partner blocks
/// of `g + f` over `g ∈ δ_i` as counts, form `UU = Σ cnt_j·w_j`, and add
/// `w_i·UU`. Returns the enumerator and the number of polynomial
/// multiplications, which is always `s(e)`.
pub fn algorithm1(
    e: &Anf,
    f: &Anf,
    merged: &Partition,
    block_enums: &[WeightEnumerator],
) -> Result<(WeightEnumerator, u64)> {
    if merged.len() != block_enums.len() {
        return Err(Error::PartitionMismatch {
            blocks: merged.len(),
            enums: block_enums.len(),
        });
    }
    if merged.e() != e {
        return Err(Error::InvalidArgument(format!(
            "partition belongs to {}, not {}",
            merged.e(),
            e
        )));
    }
    let (r, m) = (merged.r(), merged.m());
    check_form(f, r + 1, m)?;
    let fi = HomogeneousBasis::new(m, r + 1)?.index_of(f)?.0;
    let n = block_enums[0].n();
    let mut u = WeightEnumerator::zero(2 * n);
    let mut counts = vec![0u64; merged.len()];
    let mut mults = 0;
    for (block, w) in merged.blocks().iter().zip(block_enums) {
        counts.iter_mut().for_each(|c| *c = 0);
        for &g in block {
            counts[merged.find_block(HomogeneousIndex(g ^ fi))] += 1;
        }
        let mut uu = WeightEnumerator::zero(n);
        for (j, &c) in counts.iter().enumerate() {
            if c > 0 {
                uu.add_scaled(&block_enums[j], c)?;
            }
        }
        u.add_assign(&w.mul(&uu))?;
        mults += 1;
    }
    Ok((u, mults))
}

/// `L·W²`, one class's contribution.
pub fn class_term(w: &WeightEnumerator, orbit_size: &BigUint) -> WeightEnumerator {
    w.square().scale(orbit_size)
}

fn check_classes(classes: &[ClassRecord], d: usize, m1: usize) -> Result<()> {
    if classes.is_empty() {
        return Err(Error::InvalidArgument("empty class list".into()));
    }
    for c in classes {
        check_form(&c.representative, d, m1)?;
    }
    let total: BigUint = classes.iter().map(|c| &c.orbit_size).sum();
    let expected = BigUint::one() << binomial(m1, d);
    if total != expected {
        return Err(Error::OrbitSumMismatch {
            expected: expected.to_string(),
            actual: total.to_string(),
        });
    }
    Ok(())
}

/// `Σ L_i·W²[p_i + R(d-1, m1)]` over classes of H^(d)(m1), with
/// `enum_fn(i, class)` supplying each coset enumerator. Classes run in
/// parallel; the sum is taken in class order.
pub fn algorithm2<F>(classes: &[ClassRecord], d: usize, m1: usize, enum_fn: F) -> Result<WeightEnumerator>
where
    F: Fn(usize, &ClassRecord) -> Result<WeightEnumerator> + Sync,
{
    sum_terms(classes, d, m1, |i, c| {
        Ok((class_term(&enum_fn(i, c)?, &c.orbit_size), 0))
    })
    .map(|(w, _)| w)
}

fn sum_terms<F>(classes: &[ClassRecord], d: usize, m1: usize, term_fn: F) -> Result<(WeightEnumerator, u64)>
where
    F: Fn(usize, &ClassRecord) -> Result<(WeightEnumerator, u64)> + Sync,
{
    check_classes(classes, d, m1)?;
    let terms = classes
        .par_iter()
        .enumerate()
        .map(|(i, c)| term_fn(i, c))
        .collect::<Result<Vec<_>>>()?;
    let mut v = WeightEnumerator::zero(2 << m1);
    let mut mults = 0;
    for (t, k) in &terms {
        v.add_assign(t)?;
        mults += k;
    }
    Ok((v, mults))
}

/// Class list rewritten onto a fixed set of top parts.
#[derive(Clone, Debug)]
pub struct Rebased {
    pub records: Vec<ClassRecord>,
    /// Target index of each record.
    pub target_of: Vec<usize>,
    /// `n(e)` per target.
    pub buckets: Vec<usize>,
}

fn extend_linear(a: &Gf2Matrix) -> Gf2Matrix {
    let m = a.m();
    let mut rows = a.rows().to_vec();
    rows.push(1 << m);
    Gf2Matrix::from_rows(m + 1, rows).expect("valid block matrix")
}

/// Rewrites every representative `p′ = e′ + f′·x_{m+1}` as `e + f·x_{m+1}`
/// with `e` taken from `targets`: find `A` with `[e′∘A] = e`, then
/// `f = [f′∘A]_{r+1}`. Extending `A` by `x_{m+1} ↦ x_{m+1}` maps the old
/// coset onto the new one, so enumerators and orbit sizes are unchanged;
/// stabilizer generators are conjugated along.
pub fn rebase_representatives<R: Rng + ?Sized>(
    classes: &[ClassRecord],
    targets: &[Anf],
    budget: u64,
    rng: &mut R,
) -> Result<Rebased> {
    let mut records = Vec::with_capacity(classes.len());
    let mut target_of = Vec::with_capacity(classes.len());
    let mut buckets = vec![0; targets.len()];
    for c in classes {
        let (e_old, f_old) = decompose_top(&c.representative)?;
        let (t, a) = find_equivalence_any(&e_old, targets, budget, rng)?
            .ok_or_else(|| Error::NotFound(format_anf(&e_old), budget))?;
        let e = &targets[t];
        let f = top_image(&f_old, &a)?;
        let m1 = e.m() + 1;
        let representative = &e.extend(m1) ^ &f.extend(m1).times_var(m1);
        let hat = AffineMap::linear(extend_linear(&a))?;
        let hat_inv = AffineMap::linear(hat.matrix().inverse()?)?;
        let stabilizer_gens = c
            .stabilizer_gens
            .iter()
            .map(|s| {
                let conj = hat_inv.matrix().mul(s.matrix()).mul(hat.matrix());
                AffineMap::linear(conj)
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(ClassRecord {
            representative,
            orbit_size: c.orbit_size.clone(),
            stabilizer_gens,
        });
        target_of.push(t);
        buckets[t] += 1;
    }
    Ok(Rebased {
        records,
        target_of,
        buckets,
    })
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Target order: the output is W[R(r,m)].
    pub r: usize,
    pub m: usize,
    pub strategy: Strategy,
    pub seed: u64,
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub checkpoint: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(r: usize, m: usize) -> Self {
        PipelineConfig {
            r,
            m,
            strategy: Strategy::default(),
            seed: 0,
            budget: DEFAULT_EQUIVALENCE_BUDGET,
            jobs: None,
            checkpoint: None,
        }
    }
}

/// Per-target statistics of a block-factored run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketStats {
    pub e: Anf,
    /// `n(e)`, classes whose top part is `e`.
    pub classes: usize,
    /// `|Δ(e)|`.
    pub raw_blocks: usize,
    /// `s(e) = |Δ′(e)|`.
    pub merged_blocks: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub enumerator: WeightEnumerator,
    /// Polynomial multiplications inside the coset enumerators of classes
    /// computed in this run (resumed classes count zero).
    pub multiplications: u64,
    pub resumed: usize,
    pub buckets: Vec<BucketStats>,
}

/// Checks a target R(r,m) and returns the Theorem 2 parameters `(r-2, m-2)`.
pub fn split_parameters(r: usize, m: usize) -> Result<(usize, usize)> {
    if r < 2 || r > m || m > 17 {
        return Err(Error::InvalidArgument(format!(
            "pipeline targets R(r,m) with 2 <= r <= m <= 17, got R({r},{m})"
        )));
    }
    Ok((r - 2, m - 2))
}

/// W[R(cfg.r, cfg.m)] from a classification of H^(cfg.r)(cfg.m - 1).
pub fn run_pipeline(classes: &Classification, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let (r, m) = split_parameters(cfg.r, cfg.m)?;
    if classes.d != cfg.r || classes.m != cfg.m - 1 {
        return Err(Error::InvalidArgument(format!(
            "R({},{}) needs classes of H^({})({}), got H^({})({})",
            cfg.r,
            cfg.m,
            cfg.r,
            cfg.m - 1,
            classes.d,
            classes.m
        )));
    }
    classes.verify()?;
    if let Some(dir) = &cfg.checkpoint {
        std::fs::create_dir_all(dir)?;
    }
    match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| run_inner(classes, cfg, r, m)),
        None => run_inner(classes, cfg, r, m),
    }
}

enum Engine {
    Direct(HashMap<Anf, CosetTable>),
    Blocks(Vec<Blocks>),
}

fn run_inner(classes: &Classification, cfg: &PipelineConfig, r: usize, m: usize) -> Result<PipelineOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (records, target_of, engine, buckets) = match cfg.strategy {
        Strategy::Direct => {
            let mut tops: Vec<Anf> = Vec::new();
            for c in &classes.records {
                let (e, _) = decompose_top(&c.representative)?;
                if !tops.contains(&e) {
                    tops.push(e);
                }
            }
            let tables = tops
                .par_iter()
                .map(|e| Ok((e.clone(), CosetTable::new(e, r, m)?)))
                .collect::<Result<HashMap<_, _>>>()?;
            (classes.records.clone(), Vec::new(), Engine::Direct(tables), Vec::new())
        }
        Strategy::Blocks => {
            let (targets, gens) = block_targets(classes, r, m, &mut rng)?;
            let rebased = rebase_representatives(&classes.records, &targets, cfg.budget, &mut rng)?;
            let used: Vec<usize> = (0..targets.len()).filter(|&t| rebased.buckets[t] > 0).collect();
            let prepared = used
                .par_iter()
                .map(|&t| prepare_blocks(&targets[t], &gens[t], r, m))
                .collect::<Result<Vec<_>>>()?;
            let mut slot = vec![usize::MAX; targets.len()];
            for (k, &t) in used.iter().enumerate() {
                slot[t] = k;
            }
            let buckets = used
                .iter()
                .zip(&prepared)
                .map(|(&t, b)| BucketStats {
                    e: targets[t].clone(),
                    classes: rebased.buckets[t],
                    raw_blocks: b.raw_blocks,
                    merged_blocks: b.s(),
                })
                .collect();
            let target_of = rebased.target_of.iter().map(|&t| slot[t]).collect();
            (rebased.records, target_of, Engine::Blocks(prepared), buckets)
        }
    };

    let resumed = std::sync::atomic::AtomicUsize::new(0);
    let (enumerator, multiplications) = sum_terms(&classes.records, cfg.r, m + 1, |i, original| {
        let header = CheckpointHeader {
            id: i,
            representative: original.representative.clone(),
            orbit_size: original.orbit_size.clone(),
            r: cfg.r,
            m: cfg.m,
        };
        if let Some(dir) = &cfg.checkpoint {
            if let Some(term) = read_checkpoint(dir, &header)? {
                resumed.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                return Ok((term, 0));
            }
        }
        let rec = &records[i];
        let (e, f) = decompose_top(&rec.representative)?;
        let (w, mults) = match &engine {
            Engine::Direct(tables) => {
                let table = &tables[&e];
                (table.theorem2(&f)?, table.multiplications())
            }
            Engine::Blocks(prepared) => {
                let b = &prepared[target_of[i]];
                algorithm1(&e, &f, &b.merged, &b.enums)?
            }
        };
        let term = class_term(&w, &rec.orbit_size);
        if let Some(dir) = &cfg.checkpoint {
            write_checkpoint(dir, &header, &term)?;
        }
        Ok((term, mults))
    })?;
    Ok(PipelineOutput {
        enumerator,
        multiplications,
        resumed: resumed.into_inner(),
        buckets,
    })
}

/// Targets for the top parts with their stabilizer generators: a
/// self-classification of H^(r+2)(m) when it fits, otherwise the distinct
/// top parts as they come with translations only (Δ(e) is then finer, never
/// wrong).
fn block_targets<R: Rng + ?Sized>(
    classes: &Classification,
    r: usize,
    m: usize,
    rng: &mut R,
) -> Result<(Vec<Anf>, Vec<Vec<AffineMap>>)> {
    if binomial(m, r + 1) as usize > MAX_PARTITION_BITS {
        return Err(Error::CapExceeded {
            dim: binomial(m, r + 1) as usize,
            cap: MAX_PARTITION_BITS,
        });
    }
    if binomial(m, r + 2) as usize <= MAX_CLASSIFY_BITS {
        let tc = classify_quotient(r + 2, m, rng)?;
        let gens = tc.records.iter().map(|c| c.stabilizer_gens.clone()).collect();
        let targets = tc.records.into_iter().map(|c| c.representative).collect();
        return Ok((targets, gens));
    }
    log::warn!("H^({})({m}) too large to classify; partitions use translations only", r + 2);
    let mut targets: Vec<Anf> = Vec::new();
    for c in &classes.records {
        let (e, _) = decompose_top(&c.representative)?;
        if !targets.contains(&e) {
            targets.push(e);
        }
    }
    let gens = vec![Vec::new(); targets.len()];
    Ok((targets, gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{parse_anf, HomogeneousBasis};
    use crate::classify::classify_quotient;
    use crate::cosetenum::coset_enumerator;
    use crate::gf2group::stabilizer_check;
    use crate::oracle::{brute_force_coset_distribution, brute_force_distribution};
    use crate::wenum::validate_code_enumerator;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn p_of(e: &Anf, f: &Anf) -> Anf {
        let m1 = e.m() + 1;
        &e.extend(m1) ^ &f.extend(m1).times_var(m1)
    }

    fn random_form<R: Rng>(m: usize, d: usize, rng: &mut R) -> Anf {
        let basis = HomogeneousBasis::new(m, d).unwrap();
        basis.anf_of(HomogeneousIndex(rng.gen::<u64>() & (basis.size() - 1)))
    }

    #[test]
    fn theorem2_small_examples() {
        let zero = Anf::zero(2);
        let w = theorem2_direct(&zero, &zero, 0, 2).unwrap();
        assert_eq!(w.to_string(), "1 + 14z^4 + z^8");

        // p = x1x2x3 needs f of degree 2, so r = 1: the coset of R(2,3)
        let f = parse_anf("12", 2).unwrap();
        let w = theorem2_direct(&zero, &f, 1, 2).unwrap();
        assert_eq!(w.total(), BigUint::from(128u32));
        let p = truth_table_from_anf(&p_of(&zero, &f));
        assert_eq!(w, brute_force_coset_distribution(&p, 2).unwrap());
    }

    #[test]
    fn theorem2_matches_brute_force() {
        let mut r = rng(1);
        for _ in 0..5 {
            let e = random_form(4, 3, &mut r);
            let f = random_form(4, 2, &mut r);
            let p = truth_table_from_anf(&p_of(&e, &f));
            assert_eq!(
                theorem2_direct(&e, &f, 1, 4).unwrap(),
                brute_force_coset_distribution(&p, 2).unwrap()
            );
        }
    }

    #[test]
    fn theorem2_rejects_wrong_degrees() {
        let e = parse_anf("12", 4).unwrap();
        assert!(matches!(
            theorem2_direct(&e, &Anf::zero(4), 1, 4),
            Err(Error::NotHomogeneous { .. })
        ));
    }

    #[test]
    fn algorithm1_matches_direct() {
        let mut r = rng(2);
        let zero = Anf::zero(2);
        let b = prepare_blocks(&zero, &crate::gf2group::gl_generators(2)
            .into_iter()
            .map(|g| AffineMap::linear(g).unwrap())
            .collect::<Vec<_>>(), 0, 2)
            .unwrap();
        for f in ["0", "1", "2"] {
            let f = parse_anf(f, 2).unwrap();
            let (w, k) = algorithm1(&zero, &f, &b.merged, &b.enums).unwrap();
            assert_eq!(w, theorem2_direct(&zero, &f, 0, 2).unwrap());
            assert_eq!(k as usize, b.s());
        }

        // 1234 has degree 4, so it sits at r = 2
        let e = parse_anf("1234", 4).unwrap();
        let b = prepare_blocks(&e, &[], 2, 4).unwrap();
        let table = CosetTable::new(&e, 2, 4).unwrap();
        for _ in 0..10 {
            let f = random_form(4, 3, &mut r);
            let (w, k) = algorithm1(&e, &f, &b.merged, &b.enums).unwrap();
            assert_eq!(w, table.theorem2(&f).unwrap());
            assert_eq!(k as usize, b.s());
        }
    }

    #[test]
    fn algorithm1_with_schreier_generators() {
        let mut r = rng(3);
        let tc = classify_quotient(3, 5, &mut r).unwrap();
        for rec in &tc.records {
            let e = &rec.representative;
            let b = prepare_blocks(e, &rec.stabilizer_gens, 1, 5).unwrap();
            assert!(b.s() <= b.raw_blocks);
            let table = CosetTable::new(e, 1, 5).unwrap();
            for _ in 0..4 {
                let f = random_form(5, 2, &mut r);
                let (w, k) = algorithm1(e, &f, &b.merged, &b.enums).unwrap();
                assert_eq!(w, table.theorem2(&f).unwrap());
                assert_eq!(k as usize, b.s());
            }
        }
    }

    #[test]
    fn algorithm1_rejects_mismatch() {
        let e = parse_anf("123", 4).unwrap();
        let b = prepare_blocks(&e, &[], 1, 4).unwrap();
        let f = Anf::zero(4);
        assert!(matches!(
            algorithm1(&e, &f, &b.merged, &b.enums[1..]),
            Err(Error::PartitionMismatch { .. })
        ));
        let other = parse_anf("234", 4).unwrap();
        assert!(algorithm1(&other, &f, &b.merged, &b.enums).is_err());
    }

    #[test]
    fn algorithm2_small_case() {
        let classes = classify_quotient(2, 2, &mut rng(4)).unwrap();
        let w = algorithm2(&classes.records, 2, 2, |_, c| {
            let (e, f) = decompose_top(&c.representative)?;
            theorem2_direct(&e, &f, 0, 1)
        })
        .unwrap();
        assert_eq!(w, brute_force_distribution(2, 3).unwrap());
        assert!(validate_code_enumerator(&w, 7, 8).passed());
        assert_eq!(w.min_nonzero_weight(), Some(2));
    }

    #[test]
    fn algorithm2_rejects_incomplete_classes() {
        let classes = classify_quotient(2, 2, &mut rng(4)).unwrap();
        let err = algorithm2(&classes.records[..1], 2, 2, |_, _| Ok(WeightEnumerator::zero(4)));
        assert!(matches!(err, Err(Error::OrbitSumMismatch { .. })));
    }

    #[test]
    fn rebase_identity_and_equivalent() {
        let mut r = rng(5);
        let rec = ClassRecord {
            representative: parse_anf("1234+1256", 6).unwrap(),
            orbit_size: BigUint::one(),
            stabilizer_gens: Vec::new(),
        };
        let same = rebase_representatives(
            std::slice::from_ref(&rec),
            &[parse_anf("1234", 5).unwrap()],
            1000,
            &mut r,
        )
        .unwrap();
        assert_eq!(same.records[0].representative, rec.representative);

        let single = ClassRecord {
            representative: parse_anf("123+246", 6).unwrap(),
            orbit_size: BigUint::one(),
            stabilizer_gens: Vec::new(),
        };
        let target = parse_anf("145", 5).unwrap();
        let out = rebase_representatives(std::slice::from_ref(&single), std::slice::from_ref(&target), 100_000, &mut r).unwrap();
        let new_rep = &out.records[0].representative;
        let (e, _) = decompose_top(new_rep).unwrap();
        assert_eq!(e, target);
        assert_eq!(out.buckets, vec![1]);
        let before = coset_enumerator(&truth_table_from_anf(&single.representative), 2, 6).unwrap();
        let after = coset_enumerator(&truth_table_from_anf(new_rep), 2, 6).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn rebase_conjugates_stabilizers_and_counts_buckets() {
        let mut r = rng(6);
        let classes = classify_quotient(3, 5, &mut r).unwrap();
        let targets = classify_quotient(3, 4, &mut r).unwrap();
        let target_reps: Vec<Anf> = targets.records.iter().map(|c| c.representative.clone()).collect();
        let out = rebase_representatives(&classes.records, &target_reps, 100_000, &mut r).unwrap();
        assert_eq!(out.buckets.iter().sum::<usize>(), classes.len());
        let mut recount = vec![0; target_reps.len()];
        for (old, new) in classes.records.iter().zip(&out.records) {
            assert_eq!(old.orbit_size, new.orbit_size);
            let (e, _) = decompose_top(&new.representative).unwrap();
            recount[target_reps.iter().position(|t| *t == e).unwrap()] += 1;
            for g in &new.stabilizer_gens {
                assert!(stabilizer_check(&new.representative, g));
            }
            let a = coset_enumerator(&truth_table_from_anf(&old.representative), 2, 5).unwrap();
            let b = coset_enumerator(&truth_table_from_anf(&new.representative), 2, 5).unwrap();
            assert_eq!(a, b);
        }
        assert_eq!(recount, out.buckets);
    }

    #[test]
    fn pipeline_small_targets_match_brute_force() {
        for (rr, mm) in [(2, 3), (2, 4), (3, 4), (4, 4), (2, 5)] {
            let classes = classify_quotient(rr, mm - 1, &mut rng(7)).unwrap();
            let mut outs = Vec::new();
            for strategy in [Strategy::Direct, Strategy::Blocks] {
                let mut cfg = PipelineConfig::new(rr, mm);
                cfg.strategy = strategy;
                outs.push(run_pipeline(&classes, &cfg).unwrap().enumerator);
            }
            let brute = brute_force_distribution(rr, mm).unwrap();
            assert_eq!(outs[0], brute, "direct R({rr},{mm})");
            assert_eq!(outs[1], brute, "blocks R({rr},{mm})");
        }
    }

    #[test]
    fn pipeline_counts_multiplications() {
        let classes = classify_quotient(3, 4, &mut rng(8)).unwrap();
        let out = run_pipeline(&classes, &PipelineConfig::new(3, 5)).unwrap();
        let expected: usize = out.buckets.iter().map(|b| b.classes * b.merged_blocks).sum();
        assert_eq!(out.multiplications as usize, expected);
        assert_eq!(out.buckets.iter().map(|b| b.classes).sum::<usize>(), classes.len());
    }

    #[test]
    fn pipeline_rejects_mismatched_classes() {
        let classes = classify_quotient(2, 4, &mut rng(9)).unwrap();
        assert!(run_pipeline(&classes, &PipelineConfig::new(3, 5)).is_err());
        assert!(split_parameters(1, 5).is_err());
    }

    #[test]
    fn checkpoint_resume_reproduces_output() {
        let dir = tempfile::tempdir().unwrap();
        let classes = classify_quotient(2, 5, &mut rng(10)).unwrap();
        let mut cfg = PipelineConfig::new(2, 6);
        cfg.checkpoint = Some(dir.path().to_path_buf());
        let first = run_pipeline(&classes, &cfg).unwrap();
        assert_eq!(first.resumed, 0);
        let second = run_pipeline(&classes, &cfg).unwrap();
        assert_eq!(second.resumed, classes.len());
        assert_eq!(first.enumerator, second.enumerator);
        assert_eq!(second.multiplications, 0);
    }
}
