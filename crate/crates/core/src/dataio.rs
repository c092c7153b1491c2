//! Text formats: shipped reference tables, checkpoints, and file helpers.
//!
//! Every format is line-oriented; lines starting with `#` are comments
//! unless a format gives them meaning.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use crate::boolfn::{format_anf, parse_anf, Anf, Monomial};
use crate::error::{Error, Result};
use crate::gf2group::{top_image, Gf2Matrix};
use crate::wenum::WeightEnumerator;

/// Weight distribution of R(4,9), folded three-column layout.
pub const RM_4_9: &str = include_str!("../data/rm_4_9.txt");
/// `sha256sum` line for [`RM_4_9`].
pub const RM_4_9_SHA256: &str = include_str!("../data/rm_4_9.txt.sha256");
/// `|Δ(e)|` and `|Δ′(e)|` for the twelve classes of R(4,7)/R(3,7).
pub const TABLE1: &str = include_str!("../data/table1_partitions.txt");
/// Matching between two representative sets of R(4,7)/R(3,7).
pub const TABLE2: &str = include_str!("../data/table2_transitions.txt");

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: std::str::FromStr>(word: Option<&str>, line: usize, what: &str) -> Result<T> {
    word.and_then(|w| w.parse().ok()).ok_or(Error::Format {
        line,
        reason: format!("missing or malformed {what}"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSizes {
    pub e: Anf,
    pub raw_blocks: u64,
    pub merged_blocks: u64,
}

/// Rows `<e> <|Δ(e)|> <|Δ′(e)|>` over `m` variables.
pub fn parse_partition_sizes(text: &str, m: usize) -> Result<Vec<PartitionSizes>> {
    data_lines(text)
        .map(|(line, l)| {
            let mut words = l.split_whitespace();
            let e = parse_anf(words.next().unwrap_or(""), m)?;
            let raw_blocks = field(words.next(), line, "|Δ(e)|")?;
            let merged_blocks = field(words.next(), line, "|Δ′(e)|")?;
            if merged_blocks > raw_blocks {
                return Err(Error::Format {
                    line,
                    reason: "merged partition larger than raw partition".into(),
                });
            }
            Ok(PartitionSizes {
                e,
                raw_blocks,
                merged_blocks,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    /// Number of classes whose top part is `e`.
    pub count: u64,
    pub dual_source: Anf,
    pub dual_target: Anf,
    pub matrix: Gf2Matrix,
}

impl Transition {
    pub fn source(&self) -> Anf {
        dual_form(&self.dual_source)
    }

    pub fn target(&self) -> Anf {
        dual_form(&self.dual_target)
    }

    /// Whether `[source∘A] = target` on the primal forms.
    pub fn holds(&self) -> Result<bool> {
        Ok(top_image(&self.source(), &self.matrix)? == self.target())
    }
}

/// Rows `<n(e)> <dual e′> <dual e> <m matrix rows>`.
pub fn parse_transitions(text: &str, m: usize) -> Result<Vec<Transition>> {
    data_lines(text)
        .map(|(line, l)| {
            let words: Vec<&str> = l.split_whitespace().collect();
            if words.len() != 3 + m {
                return Err(Error::Format {
                    line,
                    reason: format!("expected {} fields, found {}", 3 + m, words.len()),
                });
            }
            Ok(Transition {
                count: field(Some(words[0]), line, "count")?,
                dual_source: parse_anf(words[1], m)?,
                dual_target: parse_anf(words[2], m)?,
                matrix: Gf2Matrix::parse(&words[3..].join(" "))?,
            })
        })
        .collect()
}

/// Complement of every monomial within `{1..m}`; the zero form maps to itself.
pub fn dual_form(a: &Anf) -> Anf {
    let full = if a.m() == 0 { 0 } else { u32::MAX >> (32 - a.m()) };
    Anf::from_monomials(a.m(), a.monomials().map(|mono| Monomial(full & !mono.0)))
        .expect("complements stay in range")
}

/// Identifies a per-class checkpoint file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointHeader {
    pub id: usize,
    pub representative: Anf,
    pub orbit_size: BigUint,
    /// Target code R(r,m).
    pub r: usize,
    pub m: usize,
}

impl CheckpointHeader {
    fn lines(&self) -> String {
        format!(
            "# class {} rep {} size {}\n# target r={} m={}\n",
            self.id,
            format_anf(&self.representative),
            self.orbit_size,
            self.r,
            self.m
        )
    }
}

pub fn checkpoint_path(dir: &Path, id: usize) -> PathBuf {
    dir.join(format!("class-{id}.txt"))
}

/// Writes `L·W²` for one class via a temporary file and rename.
pub fn write_checkpoint(dir: &Path, header: &CheckpointHeader, term: &WeightEnumerator) -> Result<()> {
    let text = header.lines() + &term.to_text(false);
    write_atomic(&checkpoint_path(dir, header.id), &text)
}

/// The stored term for `header`, `None` if absent. A file whose header
/// disagrees is an error, never silently replaced.
pub fn read_checkpoint(dir: &Path, header: &CheckpointHeader) -> Result<Option<WeightEnumerator>> {
    let path = checkpoint_path(dir, header.id);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if !text.starts_with(&header.lines()) {
        return Err(Error::Format {
            line: 1,
            reason: format!("checkpoint {} does not match class {}", path.display(), header.id),
        });
    }
    Ok(Some(WeightEnumerator::from_text(&text, 1 << header.m)?))
}

pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// A distribution file: `#` header lines, then the enumerator body.
pub fn distribution_text(header: &[String], w: &WeightEnumerator, folded: bool) -> String {
    let mut s: String = header.iter().map(|h| format!("# {h}\n")).collect();
    s.push_str(&w.to_text(folded));
    s
}

/// Non-comment lines of a text file, for comparing bodies across headers.
pub fn body_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}
