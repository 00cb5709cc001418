//! Exponent vectors, the lexicographic order with `x0 > x1 > ... > xn`, and
//! enumeration and ranking of the degree-`d` monomials in `n + 1` variables.
//!
//! A [`MultiIndex`] plays two roles: it is the exponent vector of a monomial
//! `x^m` and the subscript of the homogeneous coordinate `z_m` of `P^N`. The
//! flat position of `z_m` among the coordinates is its lex rank.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent vector `(i0, ..., in)` with cached total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Self { exps, degree }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    /// `d * e_i`, the exponent vector of the pure power `x_i^d`.
    pub fn pure_power(nvars: usize, i: usize, d: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = d;
        Self { exps, degree: d }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of variables, `n + 1`.
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.exps[i]
    }

    /// Multiply the monomial by `x_i`.
    pub fn plus_unit(&self, i: usize) -> Self {
        let mut exps = self.exps.clone();
        exps[i] += 1;
        Self {
            exps,
            degree: self.degree + 1,
        }
    }

    /// Divide the monomial by `x_i`, if it is divisible.
    pub fn minus_unit(&self, i: usize) -> Option<Self> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        Some(Self {
            exps,
            degree: self.degree - 1,
        })
    }

    /// Replace one factor `x_from` by `x_to`; `None` if `x_from` does not divide.
    pub fn exchange(&self, from: usize, to: usize) -> Option<Self> {
        self.minus_unit(from).map(|m| m.plus_unit(to))
    }

    /// Componentwise sum (product of monomials).
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "multi-index length mismatch");
        Self::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// True when a single variable carries the whole degree.
    pub fn is_pure_power(&self) -> bool {
        self.exps.iter().filter(|&&e| e > 0).count() <= 1
    }

    /// Index of the first variable with nonzero exponent.
    pub fn first_support(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    /// Index of the last variable with nonzero exponent.
    pub fn last_support(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    /// Coordinate name form, e.g. `z_{2,1,0}`.
    pub fn coord_name(&self) -> String {
        format!("z_{{{}}}", self.joined())
    }

    /// Monomial form, e.g. `x0^2*x1`; the constant monomial renders as `1`.
    pub fn monomial_string(&self) -> String {
        let factors: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| match e {
                1 => format!("x{i}"),
                _ => format!("x{i}^{e}"),
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    /// Parse either `(2,1,0)` or `z_{2,1,0}`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = if let Some(rest) = s.strip_prefix("z_{") {
            rest.strip_suffix('}')
        } else if let Some(rest) = s.strip_prefix('(') {
            rest.strip_suffix(')')
        } else {
            None
        }
        .ok_or_else(|| Error::Parse(format!("malformed multi-index {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        let exps = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(exps))
    }

    fn joined(&self) -> String {
        self.exps
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Lexicographic order on exponent vectors of equal length: the vector with
/// the larger exponent at the first differing position is the larger monomial.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.joined())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`MultiIndex`] in coordinate name form `z_{..}`.
pub mod coord_name {
    use super::MultiIndex;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &MultiIndex, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&m.coord_name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MultiIndex, D::Error> {
        let s = String::deserialize(d)?;
        MultiIndex::parse(&s).map_err(serde::de::Error::custom)
    }

    /// The same adapter for a sequence of multi-indices.
    pub mod seq {
        use super::MultiIndex;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(ms: &[MultiIndex], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(ms.len()))?;
            for m in ms {
                seq.serialize_element(&m.coord_name())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<MultiIndex>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| MultiIndex::parse(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// Compare `x^a` with `x^b` in lex order; both must have equal length and degree.
pub fn lex_compare(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::Contract(format!(
            "cannot compare {a} and {b}: lengths {} and {}",
            a.nvars(),
            b.nvars()
        )));
    }
    if a.degree() != b.degree() {
        return Err(Error::Contract(format!(
            "cannot compare {a} and {b}: degrees {} and {}",
            a.degree(),
            b.degree()
        )));
    }
    Ok(a.cmp(b))
}

/// Binomial coefficient `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binom(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for k in 0..b {
        acc *= a - k;
        acc /= k + 1;
    }
    acc
}

/// Number of monomials of degree `deg` in `nvars` variables, if it fits in `usize`.
pub(crate) fn count_monomials(nvars: usize, deg: u32) -> Option<usize> {
    if nvars == 0 {
        return Some(usize::from(deg == 0));
    }
    // C(nvars - 1 + deg, nvars - 1), multiplicative form keeps every partial
    // product an exact binomial coefficient.
    let top = (nvars - 1) as u128 + deg as u128;
    let k = ((nvars - 1) as u128).min(deg as u128);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(top - i)? / (i + 1);
    }
    usize::try_from(acc).ok()
}

/// The pair `(n, d)` with the derived dimensions of `P^N` and of the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawContext", into = "RawContext")]
pub struct VeroneseContext {
    n: usize,
    d: u32,
    num_coords: usize,
    num_cols: usize,
}

#[derive(Serialize, Deserialize)]
struct RawContext {
    n: usize,
    d: u32,
}

impl TryFrom<RawContext> for VeroneseContext {
    type Error = Error;
    fn try_from(raw: RawContext) -> Result<Self> {
        Self::new(raw.n, raw.d)
    }
}

impl From<VeroneseContext> for RawContext {
    fn from(ctx: VeroneseContext) -> Self {
        Self { n: ctx.n, d: ctx.d }
    }
}

impl VeroneseContext {
    /// Validate that `C(n + d, n)` coordinates can be indexed in memory.
    pub fn new(n: usize, d: u32) -> Result<Self> {
        let nvars = n
            .checked_add(1)
            .ok_or_else(|| Error::TooLarge(format!("n = {n}")))?;
        let num_coords = count_monomials(nvars, d).ok_or_else(|| {
            Error::TooLarge(format!("C({}, {n}) coordinates", n as u128 + d as u128))
        })?;
        let num_cols = match d {
            0 => 0,
            _ => count_monomials(nvars, d - 1).expect("smaller than the coordinate count"),
        };
        Ok(Self {
            n,
            d,
            num_coords,
            num_cols,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    /// `N = C(n + d, n) - 1`, the dimension of the target projective space.
    pub fn ambient_dim(&self) -> usize {
        self.num_coords - 1
    }

    /// `N + 1`, the number of degree-`d` monomials.
    pub fn num_coords(&self) -> usize {
        self.num_coords
    }

    /// `C(n + d - 1, n)`, the column count of the matrix.
    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    /// Index of the pure-power coordinate `z_{d e_i}`.
    pub fn pure_power(&self, i: usize) -> MultiIndex {
        MultiIndex::pure_power(self.nvars(), i, self.d)
    }

    pub fn monomials(&self) -> Monomials {
        Monomials::new(self.n, self.d)
    }
}

/// Iterator over degree-`d` multi-indices in `n + 1` variables, strictly
/// decreasing in lex order.
#[derive(Debug, Clone)]
pub struct Monomials {
    next: Option<Vec<u32>>,
}

impl Monomials {
    pub fn new(n: usize, d: u32) -> Self {
        let mut first = vec![0; n + 1];
        first[0] = d;
        Self { next: Some(first) }
    }
}

impl Iterator for Monomials {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let last = current.len() - 1;
        // Successor: move one unit out of the rightmost nonzero non-final slot
        // and gather everything behind it into the slot just after.
        if let Some(j) = current[..last].iter().rposition(|&e| e > 0) {
            let mut succ = current.clone();
            let tail: u32 = succ[j + 1..].iter().sum();
            succ[j] -= 1;
            succ[j + 1..].iter_mut().for_each(|e| *e = 0);
            succ[j + 1] = tail + 1;
            self.next = Some(succ);
        }
        Some(MultiIndex::new(current))
    }
}

/// All degree-`d` multi-indices in `n + 1` variables, lex-descending.
pub fn enumerate_monomials(n: usize, d: u32) -> Vec<MultiIndex> {
    Monomials::new(n, d).collect()
}

/// 0-based position of `m` in [`enumerate_monomials`] for its own length and degree.
pub fn rank(m: &MultiIndex) -> usize {
    let nvars = m.nvars();
    let mut remaining = m.degree();
    let mut pos = 0usize;
    for (j, &e) in m
        .exponents()
        .iter()
        .enumerate()
        .take(nvars.saturating_sub(1))
    {
        // monomials sharing the prefix but with a larger exponent at j
        let rest = nvars - j - 1;
        for larger in e + 1..=remaining {
            pos += count_monomials(rest, remaining - larger).expect("rank overflow");
        }
        remaining -= e;
    }
    pos
}

/// Inverse of [`rank`]: the `k`-th degree-`d` multi-index in `n + 1` variables.
pub fn unrank(k: usize, n: usize, d: u32) -> Result<MultiIndex> {
    let total = count_monomials(n + 1, d)
        .ok_or_else(|| Error::TooLarge(format!("monomial count for n = {n}, d = {d}")))?;
    if k >= total {
        return Err(Error::OutOfRange {
            index: k as u128,
            bound: total.to_string(),
        });
    }
    let mut k = k;
    let mut remaining = d;
    let mut exps = vec![0u32; n + 1];
    for (j, slot) in exps.iter_mut().take(n).enumerate() {
        let rest = n - j;
        let mut e = remaining;
        loop {
            let block = count_monomials(rest, remaining - e).expect("bounded by total");
            if k < block {
                break;
            }
            k -= block;
            e -= 1;
        }
        *slot = e;
        remaining -= e;
    }
    exps[n] = remaining;
    Ok(MultiIndex::new(exps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    /// Pascal-triangle oracle, independent of the multiplicative formula.
    fn pascal(a: usize, b: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 0..a {
            let mut next = vec![1u64; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        row.get(b).copied().unwrap_or(0)
    }

    /// Recursive generation: choose the exponent of x0 from high to low, recurse.
    fn recursive_monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
        if nvars == 1 {
            return vec![vec![d]];
        }
        let mut out = Vec::new();
        for e in (0..=d).rev() {
            for mut tail in recursive_monomials(nvars - 1, d - e) {
                tail.insert(0, e);
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(
            lex_compare(&mi(&[2, 1, 0]), &mi(&[2, 0, 1])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            lex_compare(&mi(&[1, 1, 1]), &mi(&[1, 1, 1])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            lex_compare(&mi(&[0, 3, 0]), &mi(&[1, 0, 2])).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn lex_compare_rejects_mismatch() {
        assert!(matches!(
            lex_compare(&mi(&[1, 0]), &mi(&[1, 0, 0])),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            lex_compare(&mi(&[2, 0]), &mi(&[1, 0])),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn enumerate_nu3_order() {
        let got = enumerate_monomials(2, 3);
        let want: Vec<MultiIndex> = [
            [3, 0, 0],
            [2, 1, 0],
            [2, 0, 1],
            [1, 2, 0],
            [1, 1, 1],
            [1, 0, 2],
            [0, 3, 0],
            [0, 2, 1],
            [0, 1, 2],
            [0, 0, 3],
        ]
        .iter()
        .map(|e| mi(e))
        .collect();
        assert_eq!(got, want);
        assert_eq!(enumerate_monomials(1, 1), vec![mi(&[1, 0]), mi(&[0, 1])]);
    }

    #[test]
    fn enumerate_matches_recursive_oracle() {
        let got = enumerate_monomials(3, 2);
        assert_eq!(got.len(), 10);
        let oracle = recursive_monomials(4, 2);
        assert_eq!(
            got.iter()
                .map(|m| m.exponents().to_vec())
                .collect::<Vec<_>>(),
            oracle
        );
        for w in got.windows(2) {
            assert_eq!(lex_compare(&w[0], &w[1]).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn degenerate_enumerations() {
        assert_eq!(enumerate_monomials(2, 0), vec![mi(&[0, 0, 0])]);
        assert_eq!(enumerate_monomials(0, 4), vec![mi(&[4])]);
    }

    #[test]
    fn enumeration_lengths_small_grid() {
        for n in 0..=6usize {
            for d in 0..=6u32 {
                let ms = enumerate_monomials(n, d);
                assert_eq!(ms.len() as u64, pascal(n + d as usize, n), "n={n} d={d}");
                assert!(ms.iter().all(|m| m.degree() == d));
            }
        }
    }

    #[test]
    fn rank_unrank_examples() {
        assert_eq!(rank(&mi(&[1, 1, 1])), 4);
        assert_eq!(rank(&mi(&[3, 0, 0])), 0);
        assert_eq!(unrank(9, 2, 3).unwrap(), mi(&[0, 0, 3]));
        assert!(matches!(unrank(10, 2, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn rank_is_enumeration_position() {
        for n in 0..=4 {
            for d in 0..=5 {
                for (k, m) in enumerate_monomials(n, d).iter().enumerate() {
                    assert_eq!(rank(m), k);
                    assert_eq!(&unrank(k, n, d).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 2), BigUint::from(10u32));
        for k in 0..20 {
            assert_eq!(binom(k, 0), BigUint::one());
        }
        assert_eq!(binom(7, 3), BigUint::from(pascal(7, 3)));
        assert_eq!(pascal(7, 3), 35);
        assert_eq!(binom(3, -1), BigUint::zero());
        assert_eq!(binom(3, 4), BigUint::zero());
        for a in 0..40u64 {
            for b in 0..=a {
                assert_eq!(
                    binom(a, b as i64),
                    BigUint::from(pascal(a as usize, b as usize))
                );
            }
        }
    }

    #[test]
    fn binom_is_arbitrary_precision() {
        // C(200, 100) has 59 decimal digits
        assert_eq!(binom(200, 100).to_string().len(), 59);
    }

    #[test]
    fn context_dimensions() {
        let ctx = VeroneseContext::new(2, 3).unwrap();
        assert_eq!(ctx.ambient_dim(), 9);
        assert_eq!(ctx.num_cols(), 6);
        assert!(VeroneseContext::new(200, 200).is_err());
    }

    #[test]
    fn textual_forms() {
        let m = mi(&[2, 1, 0]);
        assert_eq!(m.to_string(), "(2,1,0)");
        assert_eq!(m.coord_name(), "z_{2,1,0}");
        assert_eq!(m.monomial_string(), "x0^2*x1");
        assert_eq!("z_{2,1,0}".parse::<MultiIndex>().unwrap(), m);
        assert_eq!(" (2, 1, 0) ".parse::<MultiIndex>().unwrap(), m);
        assert!("[2,1,0]".parse::<MultiIndex>().is_err());
        assert!("(2,x)".parse::<MultiIndex>().is_err());
    }
}
