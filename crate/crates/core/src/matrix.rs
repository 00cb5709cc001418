//! The symbolic matrix whose row `i` lists every degree-`d` monomial divisible
//! by `x_i`, and the canonical binomial quadrics given by its 2-minors.
//!
//! One grid of [`MultiIndex`] entries stands for both readings of the matrix:
//! as monomials `x^m` (the matrix `L`) and as coordinates `z_m` (the matrix `M`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::multiindex::{enumerate_monomials, MultiIndex, VeroneseContext};

/// `(n + 1) x C(n + d - 1, n)` grid of multi-indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    ctx: VeroneseContext,
    rows: Vec<Vec<MultiIndex>>,
}

impl SymbolicMatrix {
    pub fn ctx(&self) -> &VeroneseContext {
        &self.ctx
    }

    pub fn rows(&self) -> &[Vec<MultiIndex>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, row: usize, col: usize) -> &MultiIndex {
        &self.rows[row][col]
    }

    /// Column `k`, read top to bottom.
    pub fn column(&self, col: usize) -> Vec<MultiIndex> {
        self.rows.iter().map(|r| r[col].clone()).collect()
    }

    /// Index of the column whose base monomial is `x_i^{d-1}`; it holds the
    /// pure power `z_{d e_i}` in row `i`.
    pub fn pure_power_column(&self, i: usize) -> usize {
        let target = self.ctx.pure_power(i);
        self.rows[i]
            .iter()
            .position(|m| *m == target)
            .expect("row i contains x_i^d")
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            n: self.ctx.n(),
            d: self.ctx.d(),
            rows: self.rows.clone(),
        }
    }
}

/// Serialized form `{n, d, rows}` of a [`SymbolicMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub d: u32,
    pub rows: Vec<Vec<MultiIndex>>,
}

impl TryFrom<MatrixDocument> for SymbolicMatrix {
    type Error = Error;

    /// Rebuilds the matrix and checks the document against the construction.
    fn try_from(doc: MatrixDocument) -> Result<Self> {
        let ctx = VeroneseContext::new(doc.n, doc.d)?;
        let built = build_matrix(&ctx)?;
        if built.rows != doc.rows {
            return Err(Error::Contract(format!(
                "matrix document does not match the construction for n = {}, d = {}",
                doc.n, doc.d
            )));
        }
        Ok(built)
    }
}

/// Row `i` is every degree-`d` monomial with `x_i` as a factor, lex-descending.
pub fn build_matrix(ctx: &VeroneseContext) -> Result<SymbolicMatrix> {
    if ctx.d() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let monomials = enumerate_monomials(ctx.n(), ctx.d());
    let rows = (0..ctx.nvars())
        .map(|i| {
            monomials
                .iter()
                .filter(|m| m.get(i) >= 1)
                .cloned()
                .collect()
        })
        .collect();
    Ok(SymbolicMatrix {
        ctx: ctx.clone(),
        rows,
    })
}

/// Column `k` is the `k`-th degree-`(d-1)` monomial times each variable.
pub fn build_matrix_by_columns(ctx: &VeroneseContext) -> Result<SymbolicMatrix> {
    if ctx.d() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let bases = enumerate_monomials(ctx.n(), ctx.d() - 1);
    let rows = (0..ctx.nvars())
        .map(|i| bases.iter().map(|b| b.plus_unit(i)).collect())
        .collect();
    Ok(SymbolicMatrix {
        ctx: ctx.clone(),
        rows,
    })
}

/// The binomial quadric `z_a z_b - z_c z_e` with `a + b = c + e`, stored in
/// canonical form: each pair ordered larger-first, and the pair with the
/// lex-larger leading index in `pos`. A binomial and its negation share one
/// representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Binomial2 {
    pos: [MultiIndex; 2],
    neg: [MultiIndex; 2],
}

fn ordered_pair(a: MultiIndex, b: MultiIndex) -> [MultiIndex; 2] {
    if a >= b {
        [a, b]
    } else {
        [b, a]
    }
}

impl Binomial2 {
    /// Canonicalize `z_a z_b - z_c z_e`. Returns `Ok(None)` for the identically
    /// zero binomial and an error when the two products are not balanced.
    pub fn new(a: MultiIndex, b: MultiIndex, c: MultiIndex, e: MultiIndex) -> Result<Option<Self>> {
        let nvars = a.nvars();
        if [&b, &c, &e].iter().any(|m| m.nvars() != nvars) {
            return Err(Error::Contract("binomial factors differ in length".into()));
        }
        if a.add(&b) != c.add(&e) {
            return Err(Error::Contract(format!(
                "unbalanced binomial {} {} - {} {}",
                a.coord_name(),
                b.coord_name(),
                c.coord_name(),
                e.coord_name()
            )));
        }
        let left = ordered_pair(a, b);
        let right = ordered_pair(c, e);
        Ok(match left.cmp(&right) {
            Ordering::Equal => None,
            Ordering::Greater => Some(Self {
                pos: left,
                neg: right,
            }),
            Ordering::Less => Some(Self {
                pos: right,
                neg: left,
            }),
        })
    }

    pub fn pos(&self) -> &[MultiIndex; 2] {
        &self.pos
    }

    pub fn neg(&self) -> &[MultiIndex; 2] {
        &self.neg
    }

    /// Both sides as unordered pairs.
    pub fn sides(&self) -> [&[MultiIndex; 2]; 2] {
        [&self.pos, &self.neg]
    }

    /// The common exponent sum `a + b = c + e`.
    pub fn weight(&self) -> MultiIndex {
        self.pos[0].add(&self.pos[1])
    }

    /// Whether `{x, y}` (as a multiset) is one side of the binomial, and if so
    /// the other side.
    pub fn other_side(&self, x: &MultiIndex, y: &MultiIndex) -> Option<&[MultiIndex; 2]> {
        let pair = ordered_pair(x.clone(), y.clone());
        if pair == self.pos {
            Some(&self.neg)
        } else if pair == self.neg {
            Some(&self.pos)
        } else {
            None
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed binomial {s:?}"));
        let (l, r) = s.split_once(" - ").ok_or_else(bad)?;
        let [a, b] = parse_product(l)?;
        let [c, e] = parse_product(r)?;
        Self::new(a, b, c, e)?.ok_or_else(|| Error::Parse(format!("{s:?} is identically zero")))
    }
}

fn parse_product(s: &str) -> Result<[MultiIndex; 2]> {
    let s = s.trim();
    if let Some(base) = s.strip_suffix("^2") {
        let m = MultiIndex::parse(base)?;
        return Ok([m.clone(), m]);
    }
    let mut it = s.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(x), Some(y), None) => Ok([MultiIndex::parse(x)?, MultiIndex::parse(y)?]),
        _ => Err(Error::Parse(format!("expected two factors in {s:?}"))),
    }
}

impl Ord for Binomial2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.pos, &self.neg)
            .cmp(&(&other.pos, &other.neg))
            .reverse()
    }
}

impl PartialOrd for Binomial2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_product(f: &mut fmt::Formatter<'_>, pair: &[MultiIndex; 2]) -> fmt::Result {
    if pair[0] == pair[1] {
        write!(f, "{}^2", pair[0].coord_name())
    } else {
        write!(f, "{} {}", pair[0].coord_name(), pair[1].coord_name())
    }
}

impl fmt::Display for Binomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_product(f, &self.pos)?;
        f.write_str(" - ")?;
        write_product(f, &self.neg)
    }
}

impl fmt::Debug for Binomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Binomial2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for Binomial2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Binomial2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The 2x2 minor on rows `i < j` and columns `k < l`, or `None` if it is
/// identically zero.
pub fn minor_at(m: &SymbolicMatrix, i: usize, j: usize, k: usize, l: usize) -> Option<Binomial2> {
    Binomial2::new(
        m.entry(i, k).clone(),
        m.entry(j, l).clone(),
        m.entry(i, l).clone(),
        m.entry(j, k).clone(),
    )
    .expect("minors of the matrix are balanced")
}

/// Canonical, deduplicated set of nonzero 2-minors. Sorted so that the
/// binomial with the lex-largest leading term comes first.
pub fn minors2(m: &SymbolicMatrix) -> BTreeSet<Binomial2> {
    let (rows, cols) = (m.num_rows(), m.num_cols());
    let mut out = BTreeSet::new();
    for i in 0..rows {
        for j in i + 1..rows {
            for k in 0..cols {
                for l in k + 1..cols {
                    if let Some(b) = minor_at(m, i, j, k, l) {
                        out.insert(b);
                    }
                }
            }
        }
    }
    out
}

/// Every nonzero balanced quadric `z_a z_b - z_c z_e` on the degree-`d`
/// coordinates: the quadric generators of the rank-1 catalecticant locus.
pub fn toric_quadrics(ctx: &VeroneseContext) -> BTreeSet<Binomial2> {
    let monomials = enumerate_monomials(ctx.n(), ctx.d());
    let mut by_weight: BTreeMap<MultiIndex, Vec<[MultiIndex; 2]>> = BTreeMap::new();
    for (p, a) in monomials.iter().enumerate() {
        for b in &monomials[p..] {
            by_weight
                .entry(a.add(b))
                .or_default()
                .push([a.clone(), b.clone()]);
        }
    }
    let mut out = BTreeSet::new();
    for pairs in by_weight.values() {
        for (s, x) in pairs.iter().enumerate() {
            for y in &pairs[s + 1..] {
                let b = Binomial2::new(x[0].clone(), x[1].clone(), y[0].clone(), y[1].clone())
                    .expect("same weight")
                    .expect("distinct pairs");
                out.insert(b);
            }
        }
    }
    out
}
