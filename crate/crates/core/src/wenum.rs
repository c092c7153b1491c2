//! Exact weight enumerators `W[z;C] = Σ W_i z^i` with arbitrary-precision
//! coefficients.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense coefficient vector of length `n + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeightEnumerator {
    coeffs: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn zero(n: usize) -> Self {
        WeightEnumerator {
            coeffs: vec![BigUint::zero(); n + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigUint>) -> Self {
        assert!(!coeffs.is_empty(), "an enumerator has at least one coefficient");
        WeightEnumerator { coeffs }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self::from_coeffs(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Code length `n`.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigUint {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Σ W_i`, the number of words.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Smallest nonzero weight that occurs.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.coeffs.len()).find(|&i| !self.coeffs[i].is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::LengthMismatch(self.n(), other.n()));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
        Ok(())
    }

    /// `self += scalar * other`.
    pub fn add_scaled(&mut self, other: &Self, scalar: u64) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::LengthMismatch(self.n(), other.n()));
        }
        if scalar == 0 {
            return Ok(());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * scalar;
            }
        }
        Ok(())
    }

    /// Polynomial product; lengths `n1 + 1` and `n2 + 1` give `n1 + n2 + 1`.
    pub fn mul(&self, other: &Self) -> Self {
        if let Some(out) = mul_u128(&self.coeffs, &other.coeffs) {
            return out;
        }
        mul_schoolbook(&self.coeffs, &other.coeffs)
    }

    pub fn square(&self) -> Self {
        let a = &self.coeffs;
        if fits_u128(a, a) {
            let small: Vec<u128> = a.iter().map(|c| c.to_u128().unwrap_or(0)).collect();
            let mut out = vec![0u128; 2 * a.len() - 1];
            for i in 0..small.len() {
                let ai = small[i];
                if ai == 0 {
                    continue;
                }
                out[2 * i] += ai * ai;
                for j in (i + 1)..small.len() {
                    out[i + j] += 2 * ai * small[j];
                }
            }
            return Self::from_coeffs(out.into_iter().map(BigUint::from).collect());
        }
        let nz: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
        let mut out = vec![BigUint::zero(); 2 * a.len() - 1];
        for (pos, &i) in nz.iter().enumerate() {
            out[2 * i] += &a[i] * &a[i];
            let twice = &a[i] << 1usize;
            for &j in &nz[pos + 1..] {
                out[i + j] += &twice * &a[j];
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, factor: &BigUint) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Two-column text: one `weight count` line per nonzero coefficient, or,
    /// when `folded`, `w n-w count` lines for the lower half plus the middle.
    /// Folding requires a symmetric distribution.
    pub fn to_text(&self, folded: bool) -> String {
        let n = self.n();
        let mut s = String::new();
        if folded {
            assert!(self.is_symmetric(), "only symmetric distributions fold");
            for w in 0..=n / 2 {
                let c = &self.coeffs[w];
                if c.is_zero() {
                    continue;
                }
                if 2 * w == n {
                    s.push_str(&format!("{w} {c}\n"));
                } else {
                    s.push_str(&format!("{w} {} {c}\n", n - w));
                }
            }
        } else {
            for (w, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    s.push_str(&format!("{w} {c}\n"));
                }
            }
        }
        s
    }

    /// Parses the text written by [`Self::to_text`]; `#` lines are ignored.
    /// Three-column lines assign the count to both weights.
    pub fn from_text(text: &str, n: usize) -> Result<Self> {
        let mut coeffs = vec![BigUint::zero(); n + 1];
        let mut seen = vec![false; n + 1];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fail = |reason: String| Error::Format {
                line: lineno + 1,
                reason,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let (weights, count) = match fields.as_slice() {
                [w, c] => (vec![*w], *c),
                [w1, w2, c] => (vec![*w1, *w2], *c),
                _ => return Err(fail(format!("expected 2 or 3 fields, got {}", fields.len()))),
            };
            let count: BigUint = count
                .parse()
                .map_err(|_| fail(format!("bad count {count:?}")))?;
            let mut ws: Vec<usize> = Vec::new();
            for w in weights {
                let w: usize = w.parse().map_err(|_| fail(format!("bad weight {w:?}")))?;
                if w > n {
                    return Err(fail(format!("weight {w} exceeds length {n}")));
                }
                ws.push(w);
            }
            if ws.len() == 2 && ws[0] + ws[1] != n {
                return Err(fail(format!("paired weights {} and {} do not sum to {n}", ws[0], ws[1])));
            }
            ws.dedup();
            for w in ws {
                if seen[w] {
                    return Err(fail(format!("weight {w} listed twice")));
                }
                seen[w] = true;
                coeffs[w] = count.clone();
            }
        }
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..=n / 2).all(|i| self.coeffs[i] == self.coeffs[n - i])
    }
}

fn max_bits(a: &[BigUint]) -> u64 {
    a.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn fits_u128(a: &[BigUint], b: &[BigUint]) -> bool {
    let terms = a.len().min(b.len()) as u64;
    let log_terms = 64 - terms.leading_zeros() as u64;
    // +1 leaves room for the doubled cross terms of squaring
    max_bits(a) + max_bits(b) + log_terms < 127
}

fn mul_u128(a: &[BigUint], b: &[BigUint]) -> Option<WeightEnumerator> {
    if !fits_u128(a, b) {
        return None;
    }
    let sa: Vec<u128> = a.iter().map(|c| c.to_u128().unwrap_or(0)).collect();
    let sb: Vec<(usize, u128)> = b
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, c.to_u128().unwrap_or(0)))
        .collect();
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in sa.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for &(j, y) in &sb {
            out[i + j] += x * y;
        }
    }
    Some(WeightEnumerator::from_coeffs(
        out.into_iter().map(BigUint::from).collect(),
    ))
}

fn mul_schoolbook(a: &[BigUint], b: &[BigUint]) -> WeightEnumerator {
    let nb: Vec<usize> = (0..b.len()).filter(|&j| !b[j].is_zero()).collect();
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for &j in &nb {
            out[i + j] += x * &b[j];
        }
    }
    WeightEnumerator::from_coeffs(out)
}

impl fmt::Display for WeightEnumerator {
    /// Polynomial notation, e.g. `1 + 14z^4 + z^8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{c}z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{c}z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of a list of identity checks, in evaluation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Identities every enumerator of a dimension-`k` linear code of length `n`
/// containing the all-ones word must satisfy.
pub fn validate_code_enumerator(a: &WeightEnumerator, k: usize, n: usize) -> Report {
    let mut r = Report::default();
    let len_ok = a.n() == n;
    r.push("length", len_ok, format!("n = {}, expected {n}", a.n()));
    if !len_ok {
        return r;
    }
    let total = a.total();
    let expected = BigUint::one() << k;
    r.push(
        "sum",
        total == expected,
        format!("sum of W_i = {total}, expected 2^{k}"),
    );
    r.push(
        "W_0",
        a.coeff(0).is_one(),
        format!("W_0 = {}", a.coeff(0)),
    );
    let asym = (0..=n).find(|&i| a.coeff(i) != a.coeff(n - i));
    r.push(
        "symmetry",
        asym.is_none(),
        match asym {
            None => "W_i = W_(n-i) for all i".to_string(),
            Some(i) => format!("W_{i} = {} but W_{} = {}", a.coeff(i), n - i, a.coeff(n - i)),
        },
    );
    // coefficients are unsigned by construction
    r.push("nonnegative", true, "all W_i >= 0");
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn we(v: &[u64]) -> WeightEnumerator {
        WeightEnumerator::from_counts(v)
    }

    fn rm13() -> WeightEnumerator {
        we(&[1, 0, 0, 0, 14, 0, 0, 0, 1])
    }

    #[test]
    fn add_examples() {
        let a = we(&[1, 2, 3]);
        assert_eq!(a.add(&WeightEnumerator::zero(2)).unwrap(), a);
        let ends = we(&[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let mid = we(&[0, 0, 0, 0, 14, 0, 0, 0, 0]);
        assert_eq!(ends.add(&mid).unwrap(), rm13());
        assert_eq!(a.add(&we(&[1])), Err(Error::LengthMismatch(2, 0)));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(we(&[1, 1]).mul(&we(&[1, 1])), we(&[1, 2, 1]));
        let sq = rm13().mul(&rm13());
        // direct convolution: z^8 collects 1·1 twice and 14·14 once
        assert_eq!(*sq.coeff(8), BigUint::from(2u32 + 196));
        assert_eq!(sq.n(), 16);
        assert_eq!(sq.total(), BigUint::from(256u32));
    }

    #[test]
    fn square_and_scale() {
        assert_eq!(we(&[1, 1]).square(), we(&[1, 2, 1]));
        assert!(rm13().scale(&BigUint::zero()).is_zero());
        let a = we(&[3, 0, 7, 11]);
        let s = a.scale(&BigUint::from(999u32));
        for i in 0..4 {
            assert_eq!(*s.coeff(i), a.coeff(i) * 999u32);
        }
    }

    #[test]
    fn big_coefficients_take_the_exact_path() {
        let huge = BigUint::one() << 200usize;
        let a = WeightEnumerator::from_coeffs(vec![huge.clone(), BigUint::one(), huge.clone()]);
        let sq = a.square();
        assert_eq!(*sq.coeff(0), &huge * &huge);
        assert_eq!(*sq.coeff(2), (&huge * &huge) * 2u32 + 1u32);
        assert_eq!(sq, a.mul(&a));
    }

    #[test]
    fn display_polynomial() {
        assert_eq!(rm13().to_string(), "1 + 14z^4 + z^8");
        assert_eq!(we(&[0, 1, 2]).to_string(), "z + 2z^2");
        assert_eq!(WeightEnumerator::zero(3).to_string(), "0");
    }

    #[test]
    fn text_round_trip_and_folding() {
        let a = rm13();
        assert_eq!(a.to_text(false), "0 1\n4 14\n8 1\n");
        assert_eq!(a.to_text(true), "0 8 1\n4 14\n");
        assert_eq!(WeightEnumerator::from_text(&a.to_text(false), 8).unwrap(), a);
        assert_eq!(WeightEnumerator::from_text(&a.to_text(true), 8).unwrap(), a);
        assert!(WeightEnumerator::from_text("0 1\n0 1\n", 8).is_err());
        assert!(WeightEnumerator::from_text("9 1\n", 8).is_err());
        assert!(WeightEnumerator::from_text("1 2 1\n", 8).is_err());
        assert!(WeightEnumerator::from_text("x 1\n", 8).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(validate_code_enumerator(&rm13(), 4, 8).passed());
        let bad = we(&[2, 0, 0, 0, 14, 0, 0, 0, 1]);
        let report = validate_code_enumerator(&bad, 4, 8);
        assert!(!report.passed());
        assert!(!report.checks.iter().find(|c| c.name == "W_0").unwrap().passed);
    }

    fn arb_we(max_len: usize) -> impl Strategy<Value = WeightEnumerator> {
        proptest::collection::vec(
            prop_oneof![3 => 0u64..1000, 1 => any::<u64>()],
            1..max_len,
        )
        .prop_map(|v| WeightEnumerator::from_counts(&v))
    }

    fn arb_big(max_len: usize) -> impl Strategy<Value = WeightEnumerator> {
        proptest::collection::vec(proptest::collection::vec(any::<u32>(), 0..6), 1..max_len)
            .prop_map(|v| {
                WeightEnumerator::from_coeffs(v.into_iter().map(BigUint::new).collect())
            })
    }

    proptest! {
        #[test]
        fn add_commutes(a in arb_we(10)) {
            let b = a.scale(&BigUint::from(3u32)).add(&a).unwrap();
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        }

        #[test]
        fn ring_axioms(a in arb_big(8), b in arb_big(8), c in arb_big(8)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            let bc = if b.n() == c.n() { Some(b.add(&c).unwrap()) } else { None };
            if let Some(bc) = bc {
                prop_assert_eq!(a.mul(&bc), a.mul(&b).add(&a.mul(&c)).unwrap());
            }
        }

        #[test]
        fn mul_preserves_totals(a in arb_we(20), b in arb_we(20)) {
            let p = a.mul(&b);
            prop_assert_eq!(p.n(), a.n() + b.n());
            prop_assert_eq!(p.total(), a.total() * b.total());
        }

        #[test]
        fn square_fast_path_matches_schoolbook(a in prop_oneof![arb_we(40), arb_big(20)]) {
            let reference = mul_schoolbook(a.coeffs(), a.coeffs());
            prop_assert_eq!(a.square(), reference.clone());
            prop_assert_eq!(a.mul(&a), reference);
        }

        #[test]
        fn text_round_trip(a in arb_big(30)) {
            prop_assert_eq!(WeightEnumerator::from_text(&a.to_text(false), a.n()).unwrap(), a);
        }
    }
}
