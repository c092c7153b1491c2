//! Orbit machinery over homogeneous-form indices.
//!
//! For `e ∈ H^(r+2)(m)` and `A` in its stabilizer, `(e+g)∘A ∈ e + g' + R(r,m)`
//! with `g' = [e∘A]_{r+1} ⊕ [g∘A]_{r+1}`. The map `g ↦ g'` is affine over
//! GF(2) on the index space of H^(r+1)(m), so each generator is precomputed
//! once as a constant plus a column matrix and evaluated with byte tables.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::boolfn::{
    binomial, format_anf, homogeneous_part, parse_anf, Anf, HomogeneousBasis, HomogeneousIndex,
};
use crate::error::{Error, Result};
use crate::gf2group::{
    gl_generators, stabilizer_check, top_image, transform_anf, AffineMap, Gf2Matrix,
};
use crate::wenum::WeightEnumerator;

/// Largest index space (in bits) for dense orbit partitions.
pub const MAX_PARTITION_BITS: usize = 26;
/// Largest index space (in bits) for self-classification.
pub const MAX_CLASSIFY_BITS: usize = 25;
pub const DEFAULT_SCHREIER_CAP: usize = 64;

/// `g ↦ constant ⊕ L·g` on an index space of at most 64 bits.
#[derive(Clone, Debug)]
pub struct IndexAction {
    constant: u64,
    tables: Vec<[u64; 256]>,
}

impl IndexAction {
    fn from_columns(constant: u64, columns: &[u64]) -> Self {
        let tables = columns
            .chunks(8)
            .map(|cols| {
                let mut table = [0u64; 256];
                for byte in 1..(1usize << cols.len()) {
                    let low = byte & byte.wrapping_neg();
                    table[byte] = table[byte ^ low] ^ cols[low.trailing_zeros() as usize];
                }
                table
            })
            .collect();
        IndexAction { constant, tables }
    }

    #[inline]
    pub fn apply(&self, g: u64) -> u64 {
        let mut out = self.constant;
        for (i, table) in self.tables.iter().enumerate() {
            out ^= table[((g >> (8 * i)) & 0xff) as usize];
        }
        out
    }
}

fn check_top_form(e: &Anf, degree: usize, m: usize) -> Result<()> {
    if e.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: e.m(),
        });
    }
    if !e.is_homogeneous_of(degree) {
        return Err(Error::NotHomogeneous {
            degree,
            anf: format_anf(e),
        });
    }
    Ok(())
}

/// The action of `a` on cosets `e + g + R(r,m)` where `basis` spans
/// H^(r+1)(m) and `e` is zero or homogeneous of degree `r+2`.
pub fn index_action(e: &Anf, basis: &HomogeneousBasis, a: &AffineMap) -> Result<IndexAction> {
    let m = basis.m();
    check_top_form(e, basis.degree() + 1, m)?;
    if a.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: a.m(),
        });
    }
    if !stabilizer_check(e, a) {
        return Err(Error::NotInStabilizer(format_anf(e)));
    }
    let constant = if e.is_zero() {
        0
    } else {
        let image = transform_anf(e, a)?;
        basis.index_of(&homogeneous_part(&image, basis.degree()))?.0
    };
    let columns = basis
        .monomials()
        .iter()
        .map(|&mono| {
            let single = Anf::from_monomials(m, [mono])?;
            Ok(basis.index_of(&top_image(&single, a.matrix())?)?.0)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(IndexAction::from_columns(constant, &columns))
}

/// Index of the coset `(e+g)∘A` modulo `e + R(r,m)`, computed by expanding
/// the transformed function in full.
pub fn coset_action(
    e: &Anf,
    g: HomogeneousIndex,
    a: &AffineMap,
    r: usize,
    m: usize,
) -> Result<HomogeneousIndex> {
    check_top_form(e, r + 2, m)?;
    if !stabilizer_check(e, a) {
        return Err(Error::NotInStabilizer(format_anf(e)));
    }
    let basis = HomogeneousBasis::new(m, r + 1)?;
    if basis.len() < 64 && g.0 >> basis.len() != 0 {
        return Err(Error::InvalidArgument(format!("index {} out of range", g.0)));
    }
    let image = transform_anf(&(e ^ &basis.anf_of(g)), a)?;
    debug_assert_eq!(homogeneous_part(&image, r + 2), *e);
    basis.index_of(&homogeneous_part(&image, r + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    /// Orbits of the stabilizer.
    Raw,
    /// Orbits merged by identical coset enumerator.
    Merged,
}

/// A partition of H^(r+1)(m) (by index) into blocks, relative to a fixed `e`.
///
/// Block ids are ordered by least member and every block's member list is
/// sorted, so partitions compare equal regardless of how they were built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    e: Anf,
    r: usize,
    m: usize,
    kind: PartitionKind,
    block_of: Vec<u32>,
    blocks: Vec<Vec<u64>>,
}

impl Partition {
    /// The partition into singletons.
    pub fn singletons(e: &Anf, r: usize, m: usize) -> Result<Partition> {
        check_top_form(e, r + 2, m)?;
        let bits = index_bits(r, m)?;
        let size = 1u64 << bits;
        Ok(Partition {
            e: e.clone(),
            r,
            m,
            kind: PartitionKind::Raw,
            block_of: (0..size as u32).collect(),
            blocks: (0..size).map(|g| vec![g]).collect(),
        })
    }

    pub fn e(&self) -> &Anf {
        &self.e
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &[u64] {
        &self.blocks[id]
    }

    /// Number of indexed cosets, `2^C(m, r+1)`.
    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    /// Least member of a block.
    pub fn representative(&self, id: usize) -> HomogeneousIndex {
        HomogeneousIndex(self.blocks[id][0])
    }

    #[inline]
    pub fn find_block(&self, g: HomogeneousIndex) -> usize {
        self.block_of[g.0 as usize] as usize
    }
}

pub fn find_block(p: &Partition, g: HomogeneousIndex) -> usize {
    p.find_block(g)
}

fn index_bits(r: usize, m: usize) -> Result<usize> {
    let bits = binomial(m, r + 1) as usize;
    if bits > MAX_PARTITION_BITS {
        return Err(Error::CapExceeded {
            dim: bits,
            cap: MAX_PARTITION_BITS,
        });
    }
    Ok(bits)
}

/// Orbits of the group generated by `gens` and all unit translations on the
/// cosets `e + g + R(r,m)`, `g ∈ H^(r+1)(m)`.
pub fn orbit_partition(e: &Anf, gens: &[AffineMap], r: usize, m: usize) -> Result<Partition> {
    check_top_form(e, r + 2, m)?;
    let bits = index_bits(r, m)?;
    let basis = HomogeneousBasis::new(m, r + 1)?;
    let actions = gens
        .iter()
        .cloned()
        .chain((0..m).map(|j| AffineMap::translation_by(m, 1 << j)))
        .map(|a| index_action(e, &basis, &a))
        .collect::<Result<Vec<_>>>()?;

    let size = 1usize << bits;
    let mut block_of = vec![u32::MAX; size];
    let mut blocks = Vec::new();
    let mut stack = Vec::new();
    for start in 0..size {
        if block_of[start] != u32::MAX {
            continue;
        }
        let id = blocks.len() as u32;
        block_of[start] = id;
        let mut members = vec![start as u64];
        stack.push(start as u64);
        while let Some(p) = stack.pop() {
            for act in &actions {
                let q = act.apply(p) as usize;
                if block_of[q] == u32::MAX {
                    block_of[q] = id;
                    members.push(q as u64);
                    stack.push(q as u64);
                }
            }
        }
        members.sort_unstable();
        blocks.push(members);
    }
    Ok(Partition {
        e: e.clone(),
        r,
        m,
        kind: PartitionKind::Raw,
        block_of,
        blocks,
    })
}

/// Unions blocks whose enumerators are coefficient-identical.
pub fn merge_by_enumerator(p: &Partition, enums: &[WeightEnumerator]) -> Result<Partition> {
    Ok(merge_with_enumerators(p, enums)?.0)
}

/// Like [`merge_by_enumerator`], also returning one enumerator per merged block.
pub fn merge_with_enumerators(
    p: &Partition,
    enums: &[WeightEnumerator],
) -> Result<(Partition, Vec<WeightEnumerator>)> {
    if enums.len() != p.len() {
        return Err(Error::PartitionMismatch {
            blocks: p.len(),
            enums: enums.len(),
        });
    }
    // HashMap hashes the full coefficient vector and confirms with exact Eq
    let mut ids: HashMap<&WeightEnumerator, u32> = HashMap::new();
    let mut remap = Vec::with_capacity(p.len());
    let mut merged_enums = Vec::new();
    for w in enums {
        let next = ids.len() as u32;
        let id = *ids.entry(w).or_insert_with(|| {
            merged_enums.push(w.clone());
            next
        });
        remap.push(id);
    }
    let mut blocks: Vec<Vec<u64>> = vec![Vec::new(); merged_enums.len()];
    for (raw, members) in p.blocks.iter().enumerate() {
        blocks[remap[raw] as usize].extend_from_slice(members);
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    let block_of = p.block_of.iter().map(|&b| remap[b as usize]).collect();
    Ok((
        Partition {
            e: p.e.clone(),
            r: p.r,
            m: p.m,
            kind: PartitionKind::Merged,
            block_of,
            blocks,
        },
        merged_enums,
    ))
}

/// One orbit of a quotient-space classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub representative: Anf,
    pub orbit_size: BigUint,
    pub stabilizer_gens: Vec<AffineMap>,
}

/// Orbits of H^(d)(m) under `g ↦ [g∘A]_d`, `A ∈ GL(m,2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub d: usize,
    pub m: usize,
    pub seed: Option<u64>,
    pub records: Vec<ClassRecord>,
}

impl Classification {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_size(&self) -> BigUint {
        self.records.iter().map(|r| &r.orbit_size).sum()
    }

    /// `2^C(m,d)`, the number of forms.
    pub fn expected_total(&self) -> BigUint {
        BigUint::one() << binomial(self.m, self.d)
    }

    /// Checks orbit sizes, representative degrees, and generators.
    pub fn verify(&self) -> Result<()> {
        for rec in &self.records {
            check_top_form(&rec.representative, self.d, self.m)?;
            for g in &rec.stabilizer_gens {
                if g.m() != self.m || !stabilizer_check(&rec.representative, g) {
                    return Err(Error::NotInStabilizer(format_anf(&rec.representative)));
                }
            }
        }
        let total = self.total_size();
        if total != self.expected_total() {
            return Err(Error::OrbitSumMismatch {
                expected: self.expected_total().to_string(),
                actual: total.to_string(),
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# quotient d={} m={}\n", self.d, self.m);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "# seed {seed}");
        }
        for (id, rec) in self.records.iter().enumerate() {
            s.push('\n');
            let _ = writeln!(
                s,
                "class {id} rep {} size {}",
                format_anf(&rec.representative),
                rec.orbit_size
            );
            for g in &rec.stabilizer_gens {
                let _ = writeln!(s, "gen {}", g.matrix());
            }
        }
        s
    }

    /// Parses the classification text format and verifies it.
    pub fn parse(text: &str) -> Result<Classification> {
        let mut params: Option<(usize, usize)> = None;
        let mut seed = None;
        let mut records: Vec<ClassRecord> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let fail = |reason: &str| Error::Format {
                line: lineno + 1,
                reason: reason.to_string(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let words: Vec<&str> = comment.split_whitespace().collect();
                match words.as_slice() {
                    ["quotient", d, m] => {
                        let d = d.strip_prefix("d=").and_then(|x| x.parse().ok());
                        let m = m.strip_prefix("m=").and_then(|x| x.parse().ok());
                        match (d, m) {
                            (Some(d), Some(m)) => params = Some((d, m)),
                            _ => return Err(fail("expected '# quotient d=<d> m=<m>'")),
                        }
                    }
                    ["seed", s] => seed = s.parse().ok(),
                    _ => {}
                }
                continue;
            }
            let (d, m) = params.ok_or_else(|| fail("missing '# quotient d=<d> m=<m>' header"))?;
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["class", id, "rep", rep, "size", size] => {
                    id.parse::<u64>().map_err(|_| fail("bad class id"))?;
                    let representative = parse_anf(rep, m)?;
                    if !representative.is_homogeneous_of(d) {
                        return Err(fail(&format!("representative {rep} is not of degree {d}")));
                    }
                    let orbit_size: BigUint = size.parse().map_err(|_| fail("bad orbit size"))?;
                    records.push(ClassRecord {
                        representative,
                        orbit_size,
                        stabilizer_gens: Vec::new(),
                    });
                }
                ["gen", rows @ ..] => {
                    let rec = records.last_mut().ok_or_else(|| fail("gen before any class"))?;
                    let matrix = Gf2Matrix::parse(&rows.join(" "))?;
                    if matrix.m() != m {
                        return Err(fail("generator dimension mismatch"));
                    }
                    rec.stabilizer_gens.push(AffineMap::linear(matrix)?);
                }
                _ => return Err(fail("unrecognized line")),
            }
        }
        let (d, m) = params.ok_or(Error::Format {
            line: 0,
            reason: "missing '# quotient d=<d> m=<m>' header".into(),
        })?;
        let c = Classification { d, m, seed, records };
        c.verify()?;
        Ok(c)
    }
}

pub fn ingest_classification(text: &str) -> Result<Classification> {
    Classification::parse(text)
}

pub fn classify_quotient<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Classification> {
    classify_quotient_with_cap(d, m, DEFAULT_SCHREIER_CAP, rng)
}

/// Orbits of H^(d)(m) under GL(m,2) by closure from the two-element
/// generating set. Each class gets its least index as representative, its
/// exact orbit size, and up to `schreier_cap` random Schreier generators of
/// its stabilizer.
pub fn classify_quotient_with_cap<R: Rng + ?Sized>(
    d: usize,
    m: usize,
    schreier_cap: usize,
    rng: &mut R,
) -> Result<Classification> {
    let basis = HomogeneousBasis::new(m, d)?;
    let bits = basis.len();
    if bits > MAX_CLASSIFY_BITS {
        return Err(Error::CapExceeded {
            dim: bits,
            cap: MAX_CLASSIFY_BITS,
        });
    }
    let gens = gl_generators(m);
    let zero = Anf::zero(m);
    let actions = gens
        .iter()
        .map(|g| index_action(&zero, &basis, &AffineMap::linear(g.clone())?))
        .collect::<Result<Vec<_>>>()?;

    let size = 1usize << bits;
    let mut visited = vec![false; size];
    // Schreier tree: parent point and the generator that reached each point
    let mut parent = vec![0u32; size];
    let mut via = vec![0u8; size];
    let mut records = Vec::new();

    for start in 0..size {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut members = vec![start as u32];
        let mut head = 0;
        while head < members.len() {
            let p = members[head];
            head += 1;
            for (gi, act) in actions.iter().enumerate() {
                let q = act.apply(p as u64) as usize;
                if !visited[q] {
                    visited[q] = true;
                    parent[q] = p;
                    via[q] = gi as u8;
                    members.push(q as u32);
                }
            }
        }

        let representative = basis.anf_of(HomogeneousIndex(start as u64));
        let transversal = |p: u32| -> Gf2Matrix {
            let mut word = Vec::new();
            let mut cur = p;
            while cur as usize != start {
                word.push(via[cur as usize]);
                cur = parent[cur as usize];
            }
            word.iter()
                .rev()
                .fold(Gf2Matrix::identity(m), |acc, &gi| acc.mul(&gens[gi as usize]))
        };
        let mut stabilizer_gens: Vec<AffineMap> = Vec::new();
        if !gens.is_empty() {
            for _ in 0..schreier_cap * 8 {
                if stabilizer_gens.len() >= schreier_cap {
                    break;
                }
                let p = members[rng.gen_range(0..members.len())];
                let gi = rng.gen_range(0..gens.len());
                let q = actions[gi].apply(p as u64) as u32;
                let s = transversal(p)
                    .mul(&gens[gi])
                    .mul(&transversal(q).inverse()?);
                if s.is_identity() {
                    continue;
                }
                let s = AffineMap::linear(s)?;
                if stabilizer_gens.contains(&s) {
                    continue;
                }
                if !stabilizer_check(&representative, &s) {
                    return Err(Error::NotInStabilizer(format_anf(&representative)));
                }
                stabilizer_gens.push(s);
            }
        }
        records.push(ClassRecord {
            representative,
            orbit_size: BigUint::from(members.len() as u64),
            stabilizer_gens,
        });
    }

    Ok(Classification {
        d,
        m,
        seed: None,
        records,
    })
}

/// Orbit size of a single form, for cross-checks: the closure of `e` under
/// the GL(m,2) generators.
pub fn orbit_size_of(e: &Anf) -> Result<u64> {
    let d = match e.homogeneous_degree() {
        Some(d) => d,
        None if e.is_zero() => return Ok(1),
        None => {
            return Err(Error::NotHomogeneous {
                degree: e.degree(),
                anf: format_anf(e),
            })
        }
    };
    let m = e.m();
    let gens = gl_generators(m);
    let mut seen = std::collections::HashSet::from([e.clone()]);
    let mut stack = vec![e.clone()];
    while let Some(f) = stack.pop() {
        for g in &gens {
            let img = top_image(&f, g)?;
            debug_assert!(img.is_homogeneous_of(d));
            if seen.insert(img.clone()) {
                stack.push(img);
            }
        }
    }
    Ok(seen.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::truth_table_from_anf;
    use crate::cosetenum::batch_coset_enumerators;
    use crate::gf2group::{compose, ga_generators, random_invertible};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Rank-based oracle for quadratic forms: the alternating matrix of a
    /// quadratic form determines its class, so counting forms by rank gives
    /// the orbit sizes independently of any group closure.
    fn quadratic_rank_counts(m: usize) -> Vec<u64> {
        let basis = HomogeneousBasis::new(m, 2).unwrap();
        let mut counts = vec![0u64; m + 1];
        for idx in 0..basis.size() {
            let mut rows = vec![0u32; m];
            for (i, mono) in basis.monomials().iter().enumerate() {
                if (idx >> i) & 1 == 1 {
                    let vars: Vec<usize> = mono.vars().collect();
                    let (a, b) = (vars[0] - 1, vars[1] - 1);
                    rows[a] ^= 1 << b;
                    rows[b] ^= 1 << a;
                }
            }
            counts[Gf2Matrix::from_rows(m, rows).unwrap().rank()] += 1;
        }
        counts.into_iter().filter(|&c| c > 0).collect()
    }

    #[test]
    fn index_action_matches_coset_action() {
        let mut r = rng(1);
        let e = parse_anf("1234+2345", 5).unwrap();
        let basis = HomogeneousBasis::new(5, 3).unwrap();
        // stabilizer elements: translations and a symmetric relabeling
        let mut maps = vec![AffineMap::translation_by(5, 0b10001)];
        let swap15 = Gf2Matrix::from_rows(5, vec![1 << 4, 1 << 1, 1 << 2, 1 << 3, 1]).unwrap();
        maps.push(AffineMap::new(swap15, 0b00110).unwrap());
        for a in &maps {
            let act = index_action(&e, &basis, a).unwrap();
            for _ in 0..50 {
                let g = HomogeneousIndex(r.gen::<u64>() & 1023);
                assert_eq!(act.apply(g.0), coset_action(&e, g, a, 2, 5).unwrap().0);
            }
        }
    }

    #[test]
    fn coset_action_examples() {
        let e = parse_anf("1234", 5).unwrap();
        let basis = HomogeneousBasis::new(5, 3).unwrap();
        let g = basis.index_of(&parse_anf("125+345", 5).unwrap()).unwrap();
        assert_eq!(coset_action(&e, g, &AffineMap::identity(5), 2, 5).unwrap(), g);

        // translation by e_5 leaves 1234 untouched
        let t5 = AffineMap::translation_by(5, 1 << 4);
        assert_eq!(coset_action(&e, g, &t5, 2, 5).unwrap(), g);

        // translation by e_1: (x1+1)x2x3x4 = 1234 + 234, and g(x+e_1) only
        // changes in degree < 3
        let t1 = AffineMap::translation_by(5, 1);
        let expected = g.0 ^ basis.index_of(&parse_anf("234", 5).unwrap()).unwrap().0;
        assert_eq!(coset_action(&e, g, &t1, 2, 5).unwrap().0, expected);

        // e = 0: pure form action
        let mut r = rng(2);
        let zero = Anf::zero(5);
        let a = AffineMap::new(random_invertible(5, &mut r), 3).unwrap();
        let img = coset_action(&zero, g, &a, 2, 5).unwrap();
        assert_eq!(basis.anf_of(img), top_image(&basis.anf_of(g), a.matrix()).unwrap());

        let bad = AffineMap::linear(Gf2Matrix::parse("00001 01000 00100 00010 10000").unwrap()).unwrap();
        assert!(matches!(
            coset_action(&e, g, &bad, 2, 5),
            Err(Error::NotInStabilizer(_))
        ));
    }

    #[test]
    fn delta_zero_r1_m5_has_three_blocks() {
        let p = orbit_partition(&Anf::zero(5), &ga_generators(5), 1, 5).unwrap();
        assert_eq!(p.len(), 3);
        let mut sizes: Vec<u64> = p.blocks().iter().map(|b| b.len() as u64).collect();
        sizes.sort_unstable();
        let mut oracle = quadratic_rank_counts(5);
        oracle.sort_unstable();
        assert_eq!(sizes, oracle);
    }

    #[test]
    fn partition_axioms() {
        let c = classify_quotient(3, 5, &mut rng(3)).unwrap();
        for rec in &c.records {
            let p = orbit_partition(&rec.representative, &rec.stabilizer_gens, 1, 5).unwrap();
            let mut seen = vec![false; p.universe()];
            for (id, block) in p.blocks().iter().enumerate() {
                assert!(block.windows(2).all(|w| w[0] < w[1]));
                for &g in block {
                    assert!(!std::mem::replace(&mut seen[g as usize], true));
                    assert_eq!(p.find_block(HomogeneousIndex(g)), id);
                }
            }
            assert!(seen.iter().all(|&x| x));
            assert_eq!(p.find_block(HomogeneousIndex(0)), 0);
        }
    }

    #[test]
    fn find_block_respects_stabilizer_words() {
        let mut r = rng(4);
        let c = classify_quotient(3, 5, &mut r).unwrap();
        let rec = c.records.last().unwrap();
        let p = orbit_partition(&rec.representative, &rec.stabilizer_gens, 1, 5).unwrap();
        for _ in 0..30 {
            let mut word = AffineMap::identity(5);
            for _ in 0..5 {
                let g = &rec.stabilizer_gens[r.gen_range(0..rec.stabilizer_gens.len())];
                word = compose(&word, g).unwrap();
            }
            let word = compose(&word, &AffineMap::translation_by(5, r.gen::<u32>() & 31)).unwrap();
            let g = HomogeneousIndex(r.gen::<u64>() & 1023);
            let img = coset_action(&rec.representative, g, &word, 1, 5).unwrap();
            assert_eq!(p.find_block(g), p.find_block(img));
        }
    }

    #[test]
    fn orbit_partition_rejects_bad_generator() {
        let e = parse_anf("1234", 5).unwrap();
        let bad = AffineMap::linear(Gf2Matrix::parse("00001 01000 00100 00010 10000").unwrap()).unwrap();
        assert!(matches!(
            orbit_partition(&e, &[bad], 2, 5),
            Err(Error::NotInStabilizer(_))
        ));
    }

    #[test]
    fn blocks_share_coset_enumerators() {
        let mut r = rng(5);
        let c = classify_quotient(3, 5, &mut r).unwrap();
        for rec in &c.records {
            let e = &rec.representative;
            let p = orbit_partition(e, &rec.stabilizer_gens, 1, 5).unwrap();
            let basis = HomogeneousBasis::new(5, 2).unwrap();
            let reps: Vec<_> = (0..1024u64)
                .map(|g| truth_table_from_anf(&(e ^ &basis.anf_of(HomogeneousIndex(g)))))
                .collect();
            let enums = batch_coset_enumerators(&reps, 1, 5).unwrap();
            for block in p.blocks() {
                for &g in block {
                    assert_eq!(enums[g as usize], enums[block[0] as usize]);
                }
            }
            let block_enums: Vec<_> =
                (0..p.len()).map(|i| enums[p.representative(i).0 as usize].clone()).collect();
            let merged = merge_by_enumerator(&p, &block_enums).unwrap();
            assert_eq!(merged.kind(), PartitionKind::Merged);
            assert!(merged.len() <= p.len());
            for block in merged.blocks() {
                for &g in block {
                    assert_eq!(enums[g as usize], enums[block[0] as usize]);
                }
            }
        }
    }

    #[test]
    fn merge_with_distinct_enumerators_is_identity() {
        let p = orbit_partition(&Anf::zero(5), &ga_generators(5), 1, 5).unwrap();
        let enums: Vec<_> = (0..p.len() as u64)
            .map(|i| WeightEnumerator::from_counts(&[i, 1]))
            .collect();
        let merged = merge_by_enumerator(&p, &enums).unwrap();
        assert_eq!(merged.blocks(), p.blocks());
        assert!(matches!(
            merge_by_enumerator(&p, &enums[..1]),
            Err(Error::PartitionMismatch { .. })
        ));
    }

    #[test]
    fn classify_top_degree() {
        for m in 1..=4 {
            let c = classify_quotient(m, m, &mut rng(6)).unwrap();
            assert_eq!(c.len(), 2);
            assert!(c.records.iter().all(|r| r.orbit_size == BigUint::one()));
        }
    }

    #[test]
    fn classify_quadratic_forms_against_rank_oracle() {
        for m in [4, 5] {
            let c = classify_quotient(2, m, &mut rng(7)).unwrap();
            let sizes: Vec<u64> = c
                .records
                .iter()
                .map(|r| r.orbit_size.to_string().parse().unwrap())
                .collect();
            let mut sorted = sizes.clone();
            sorted.sort_unstable();
            let mut oracle = quadratic_rank_counts(m);
            oracle.sort_unstable();
            assert_eq!(sorted, oracle);
            assert_eq!(c.total_size(), c.expected_total());
        }
        let c = classify_quotient(2, 4, &mut rng(7)).unwrap();
        let reps: Vec<String> = c.records.iter().map(|r| format_anf(&r.representative)).collect();
        assert_eq!(reps, ["0", "12", "14+23"]);
    }

    #[test]
    fn schreier_generators_stabilize_and_are_reproducible() {
        let a = classify_quotient(3, 5, &mut rng(8)).unwrap();
        let b = classify_quotient(3, 5, &mut rng(8)).unwrap();
        assert_eq!(a, b);
        a.verify().unwrap();
        for rec in &a.records {
            assert!(!rec.stabilizer_gens.is_empty());
            for g in &rec.stabilizer_gens {
                assert!(stabilizer_check(&rec.representative, g));
            }
            assert_eq!(
                rec.orbit_size,
                BigUint::from(orbit_size_of(&rec.representative).unwrap())
            );
        }
    }

    #[test]
    fn cubic_inequivalence_confirmed_by_orbits() {
        let m = 5;
        let single = parse_anf("123", m).unwrap();
        let mut orbit = std::collections::HashSet::from([single.clone()]);
        let mut stack = vec![single.clone()];
        while let Some(f) = stack.pop() {
            for g in gl_generators(m) {
                let img = top_image(&f, &g).unwrap();
                if orbit.insert(img.clone()) {
                    stack.push(img);
                }
            }
        }
        assert!(orbit.contains(&parse_anf("145", m).unwrap()));
        assert!(!orbit.contains(&parse_anf("123+145", m).unwrap()));
        let found = crate::gf2group::find_equivalence(
            &single,
            &parse_anf("123+145", m).unwrap(),
            2,
            20_000,
            &mut rng(9),
        )
        .unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn schreier_cap_doubling_is_stable() {
        let small = classify_quotient_with_cap(3, 6, 64, &mut rng(10)).unwrap();
        let large = classify_quotient_with_cap(3, 6, 128, &mut rng(11)).unwrap();
        let rec_s = small.records.last().unwrap();
        let rec_l = large.records.last().unwrap();
        assert_eq!(rec_s.representative, rec_l.representative);
        let ps = orbit_partition(&rec_s.representative, &rec_s.stabilizer_gens, 1, 6).unwrap();
        let pl = orbit_partition(&rec_l.representative, &rec_l.stabilizer_gens, 1, 6).unwrap();
        assert_eq!(ps.len(), pl.len());
    }

    #[test]
    fn classification_text_round_trip() {
        let mut c = classify_quotient(2, 4, &mut rng(12)).unwrap();
        c.seed = Some(12);
        let text = c.to_text();
        assert!(text.starts_with("# quotient d=2 m=4\n# seed 12\n"));
        assert_eq!(ingest_classification(&text).unwrap(), c);
    }

    #[test]
    fn ingest_rejects_bad_sums_and_lines() {
        let bad_sum = "# quotient d=2 m=4\nclass 0 rep 0 size 1\nclass 1 rep 12 size 35\n";
        assert!(matches!(
            ingest_classification(bad_sum),
            Err(Error::OrbitSumMismatch { .. })
        ));
        let bad_line = "# quotient d=2 m=4\nclass 0 rep 0 size\n";
        assert!(matches!(ingest_classification(bad_line), Err(Error::Format { line: 2, .. })));
        let no_header = "class 0 rep 0 size 1\n";
        assert!(matches!(ingest_classification(no_header), Err(Error::Format { .. })));
        let bad_gen = "# quotient d=2 m=4\nclass 0 rep 12 size 64\ngen 0100 1000 0010 0001\ngen 0010 0100 1000 0001\n";
        assert!(matches!(ingest_classification(bad_gen), Err(Error::NotInStabilizer(_))));
    }
}
