//! Exact scalar fields and projective points with equality up to scalar.
//!
//! Two backends implement [`Field`]: [`Rationals`] (arbitrary-precision
//! `BigRational`) and [`PrimeField`] (residues modulo a prime `p < 2^32`).
//! Nothing here uses floating point.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A field whose elements are plain values and whose operations need the
/// field context (the modulus for `F_p`).
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Decimal residue for `F_p`, `p/q` or an integer for rationals.
    fn render(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// `"rational"` or `"fp:<p>"`.
    fn name(&self) -> String;

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(num, den))
    }

    fn name(&self) -> String {
        "rational".to_string()
    }
}

/// The prime field `F_p`, elements stored as residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

impl PrimeField {
    /// Validates that `p` is prime and small enough that products of two
    /// residues fit in 64 bits.
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::TooLarge(format!("modulus {p} exceeds 32 bits")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Every element, `0..p`.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *a;
        let mut e = self.p - 2;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let q = Rationals.parse(s)?;
        let reduce = |x: &BigInt| -> u64 {
            let p = BigInt::from(self.p);
            let r = ((x % &p) + &p) % &p;
            r.to_string().parse().expect("residue below p")
        };
        let num = reduce(q.numer());
        let den = reduce(q.denom());
        let inv = self
            .inv(&den)
            .ok_or_else(|| Error::Parse(format!("denominator of {s:?} vanishes mod {}", self.p)))?;
        Ok(self.mul(&num, &inv))
    }

    fn name(&self) -> String {
        format!("fp:{}", self.p)
    }
}

/// A point of `P^m` in canonical form: the first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint<E> {
    coords: Vec<E>,
}

impl<E: Clone> ProjectivePoint<E> {
    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<E> {
        self.coords
    }

    /// Ambient dimension `m` of `P^m`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Scale `coords` so the first nonzero entry is 1.
pub fn normalize<F: Field>(field: &F, coords: &[F::Elem]) -> Result<ProjectivePoint<F::Elem>> {
    let lead = coords
        .iter()
        .position(|c| !field.is_zero(c))
        .ok_or(Error::ZeroPoint)?;
    let inv = field.inv(&coords[lead]).expect("nonzero");
    let mut out = Vec::with_capacity(coords.len());
    out.extend(coords[..lead].iter().cloned());
    out.push(field.one());
    out.extend(coords[lead + 1..].iter().map(|c| field.mul(c, &inv)));
    Ok(ProjectivePoint { coords: out })
}

/// Renormalize an existing point; the identity on canonical points.
pub fn renormalize<F: Field>(field: &F, p: &ProjectivePoint<F::Elem>) -> ProjectivePoint<F::Elem> {
    normalize(field, &p.coords).expect("canonical points are nonzero")
}

/// Equality of canonical points; errors when the ambient dimensions differ.
pub fn proj_eq<E: Clone + PartialEq>(
    p: &ProjectivePoint<E>,
    q: &ProjectivePoint<E>,
) -> Result<bool> {
    if p.coords.len() != q.coords.len() {
        return Err(Error::Contract(format!(
            "points live in P^{} and P^{}",
            p.dim(),
            q.dim()
        )));
    }
    Ok(p.coords == q.coords)
}

/// Whether two raw coordinate vectors are proportional (all 2x2 cross
/// products vanish) and both nonzero.
pub fn proportional<F: Field>(field: &F, u: &[F::Elem], v: &[F::Elem]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::Contract("vectors differ in length".into()));
    }
    if u.iter().all(|x| field.is_zero(x)) || v.iter().all(|x| field.is_zero(x)) {
        return Err(Error::ZeroPoint);
    }
    for a in 0..u.len() {
        for b in a + 1..u.len() {
            let lhs = field.mul(&u[a], &v[b]);
            let rhs = field.mul(&u[b], &v[a]);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Parse `"[a0 : a1 : ... : am]"` and normalize.
pub fn parse_point<F: Field>(field: &F, s: &str) -> Result<ProjectivePoint<F::Elem>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("point must be written [a0 : ... : am], got {s:?}")))?;
    let coords = inner
        .split(':')
        .map(|t| field.parse(t))
        .collect::<Result<Vec<_>>>()?;
    normalize(field, &coords)
}

/// Render as `"[a0 : a1 : ... : am]"`.
pub fn render_point<F: Field>(field: &F, p: &ProjectivePoint<F::Elem>) -> String {
    render_coords(field, p.coords())
}

pub fn render_coords<F: Field>(field: &F, coords: &[F::Elem]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| field.render(c)).collect();
    format!("[{}]", parts.join(" : "))
}

/// Number of points of `P^m(F_q)`, `(q^{m+1} - 1) / (q - 1)`.
pub fn projective_point_count(m: usize, q: u64) -> u128 {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..=m {
        total = total.saturating_add(power);
        power = power.saturating_mul(q as u128);
    }
    total
}

/// Canonical points of `P^m(F_q)`, each exactly once, in lexicographic order
/// of their coordinate tuples: grouped by the position of the leading one,
/// latest position first, and lexicographic within a group.
///
/// Points can be addressed by their position in this order, so any index
/// range can be walked independently with [`PointEnumerator::range`].
#[derive(Debug, Clone)]
pub struct PointEnumerator {
    field: PrimeField,
    m: usize,
    total: u128,
}

impl PointEnumerator {
    pub fn new(field: PrimeField, m: usize) -> Self {
        let total = projective_point_count(m, field.modulus());
        Self { field, m, total }
    }

    pub fn len(&self) -> u128 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The point at position `index` in enumeration order.
    pub fn point_at(&self, index: u128) -> Option<Vec<u64>> {
        if index >= self.total {
            return None;
        }
        let q = self.field.modulus() as u128;
        let mut offset = index;
        // group for leading position L has q^(m - L) points; L runs m, m-1, ..., 0
        let mut lead = self.m;
        let mut size: u128 = 1;
        while offset >= size {
            offset -= size;
            lead -= 1;
            size *= q;
        }
        let mut coords = vec![0u64; self.m + 1];
        coords[lead] = 1;
        for pos in (lead + 1..=self.m).rev() {
            coords[pos] = (offset % q) as u64;
            offset /= q;
        }
        Some(coords)
    }

    /// Points with positions in `start..end`.
    pub fn range(&self, start: u128, end: u128) -> PointRange {
        let end = end.min(self.total);
        PointRange {
            q: self.field.modulus(),
            current: if start < end {
                self.point_at(start)
            } else {
                None
            },
            remaining: end.saturating_sub(start),
        }
    }

    pub fn iter(&self) -> PointRange {
        self.range(0, self.total)
    }
}

/// Sequential walk over a contiguous range of [`PointEnumerator`] positions.
#[derive(Debug, Clone)]
pub struct PointRange {
    q: u64,
    current: Option<Vec<u64>>,
    remaining: u128,
}

impl Iterator for PointRange {
    type Item = ProjectivePoint<u64>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let point = self.current.take()?;
        self.remaining -= 1;
        if self.remaining > 0 {
            self.current = Some(successor(&point, self.q));
        }
        Some(ProjectivePoint { coords: point })
    }
}

fn successor(point: &[u64], q: u64) -> Vec<u64> {
    let mut next = point.to_vec();
    let lead = next.iter().position(|&c| c != 0).expect("canonical point");
    // odometer over the tail after the leading one
    for pos in (lead + 1..next.len()).rev() {
        if next[pos] + 1 < q {
            next[pos] += 1;
            return next;
        }
        next[pos] = 0;
    }
    // tail exhausted: the group with the leading one one step to the left
    next.iter_mut().for_each(|c| *c = 0);
    next[lead - 1] = 1;
    next
}

/// All canonical points of `P^m(F_q)`.
pub fn enumerate_projective_points(m: usize, q: u64) -> Result<PointRange> {
    let field = PrimeField::new(q)?;
    Ok(PointEnumerator::new(field, m).iter())
}
