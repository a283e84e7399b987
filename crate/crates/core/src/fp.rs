//! Arithmetic in F_p and linear algebra over finitely supported vectors.
//!
//! Vectors are sparse maps from coordinate index to a nonzero residue, so
//! structural equality is vector equality. Subspaces are kept in reduced
//! row-echelon form with least-coordinate pivots, which makes equality of
//! subspaces structural as well.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{usage, Error, Result};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);
    pub const FIVE: Prime = Prime(5);

    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(usage(format!("{p} is not prime")));
        }
        let mut d = 2u64;
        while d * d <= p as u64 {
            if p as u64 % d == 0 {
                return Err(usage(format!("{p} is not prime ({d} divides it)")));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `p^e`, saturating at `u128::MAX`.
    pub fn pow_saturating(self, e: u64) -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = match acc.checked_mul(self.0 as u128) {
                Some(v) => v,
                None => return u128::MAX,
            };
        }
        acc
    }

    #[inline]
    pub(crate) fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub(crate) fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub(crate) fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub(crate) fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse of a nonzero residue (Fermat).
    pub(crate) fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0, "inverse of zero");
        let mut base = a as u64 % self.0 as u64;
        let mut exp = self.0 as u64 - 2;
        let m = self.0 as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp {
    value: u32,
    p: Prime,
}

impl Fp {
    /// Reduces `value` modulo `p`.
    pub fn new(value: u64, p: Prime) -> Self {
        Fp {
            value: (value % p.get() as u64) as u32,
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        Fp { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        Fp { value: 1, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// The inverse, or `None` for zero.
    pub fn inverse(self) -> Option<Fp> {
        (!self.is_zero()).then(|| Fp {
            value: self.p.inv(self.value),
            p: self.p,
        })
    }

    fn same_prime(self, other: Fp) {
        assert_eq!(self.p, other.p, "F_p arithmetic across different primes");
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.same_prime(rhs);
        Fp {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.same_prime(rhs);
        Fp {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.same_prime(rhs);
        Fp {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

/// A finitely supported sequence over F_p, stored without zero entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    p: Prime,
    entries: BTreeMap<usize, u32>,
}

impl Vector {
    pub fn zero(p: Prime) -> Self {
        Vector {
            p,
            entries: BTreeMap::new(),
        }
    }

    /// The standard basis vector `e_i`.
    pub fn unit(p: Prime, i: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(i, 1);
        Vector { p, entries }
    }

    /// Builds a vector from `(index, value)` pairs; values are reduced mod p
    /// and repeated indices accumulate.
    pub fn from_entries(p: Prime, entries: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut v = Vector::zero(p);
        for (i, c) in entries {
            v.add_at(i, (c % p.get() as u64) as u32);
        }
        v
    }

    /// Builds a vector from a dense list of residues starting at coordinate 0.
    pub fn from_dense(p: Prime, coords: &[u64]) -> Self {
        Vector::from_entries(p, coords.iter().copied().enumerate())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    /// Nonzero `(index, residue)` pairs in ascending index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().map(|(&i, &c)| (i, c))
    }

    /// Indices carrying a nonzero entry.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Least index with a nonzero entry.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    /// Greatest index with a nonzero entry.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Errors unless every nonzero coordinate lies below `horizon`.
    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        match self.max_index() {
            Some(i) if i >= horizon => Err(Error::HorizonExceeded { index: i, horizon }),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_prime(&self, p: Prime) -> Result<()> {
        if self.p == p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch {
                left: p.get(),
                right: self.p.get(),
            })
        }
    }

    fn add_at(&mut self, i: usize, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.p;
        let next = p.add(self.get(i), c);
        if next == 0 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, next);
        }
    }

    /// `self += c * other`.
    pub(crate) fn add_scaled(&mut self, c: u32, other: &Vector) {
        debug_assert_eq!(self.p, other.p);
        if c == 0 {
            return;
        }
        for (i, x) in other.entries() {
            self.add_at(i, self.p.mul(c, x));
        }
    }

    pub fn scale(&self, c: Fp) -> Vector {
        assert_eq!(self.p, c.prime(), "scaling across different primes");
        if c.is_zero() {
            return Vector::zero(self.p);
        }
        Vector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .map(|(&i, &x)| (i, self.p.mul(x, c.value())))
                .collect(),
        }
    }

    /// Vector sum. Panics on mismatched primes; use [`vector_combine`] for
    /// a checked linear combination.
    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.p, other.p, "vector sum across different primes");
        let mut out = self.clone();
        out.add_scaled(1, other);
        out
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.p, other.p, "vector difference across different primes");
        let mut out = self.clone();
        out.add_scaled(self.p.neg(1), other);
        out
    }

    /// Parses the `index:value,...` format. The empty string and `∅` are the
    /// zero vector. Values are reduced mod p but must not be zero.
    pub fn parse(s: &str, p: Prime) -> Result<Vector> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(Vector::zero(p));
        }
        let mut v = Vector::zero(p);
        let mut last: Option<usize> = None;
        for part in s.split(',') {
            let (i, c) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected index:value, got {part:?}")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad index {i:?}: {e}")))?;
            let c: u64 = c
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad value {c:?}: {e}")))?;
            if last.is_some_and(|l| l >= i) {
                return Err(Error::Parse(format!(
                    "indices must be strictly ascending in {s:?}"
                )));
            }
            if c % p.get() as u64 == 0 {
                return Err(Error::Parse(format!("zero entry at index {i} in {s:?}")));
            }
            last = Some(i);
            v.add_at(i, (c % p.get() as u64) as u32);
        }
        Ok(v)
    }

    /// Report rendering: like `Display`, but the zero vector shows as `∅`.
    pub fn to_report_string(&self) -> String {
        if self.is_zero() {
            "∅".to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.entries() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{i}:{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector[F{}]({})", self.p, self.to_report_string())
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A subspace of W held as a reduced row-echelon basis.
///
/// Each basis vector has leading coefficient 1 at its pivot (its least
/// nonzero coordinate), every pivot is zero in the other basis vectors, and
/// the basis is sorted by pivot. Equal subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: Prime,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(p: Prime) -> Self {
        Subspace {
            p,
            basis: Vec::new(),
        }
    }

    /// The whole space of vectors supported below `horizon`.
    pub fn full(p: Prime, horizon: usize) -> Self {
        Subspace {
            p,
            basis: (0..horizon).map(|i| Vector::unit(p, i)).collect(),
        }
    }

    /// The span of `gens`.
    pub fn span<'a>(p: Prime, gens: impl IntoIterator<Item = &'a Vector>) -> Result<Self> {
        let mut s = Subspace::zero(p);
        for g in gens {
            g.check_prime(p)?;
            s.insert(g);
        }
        Ok(s)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis
            .iter()
            .map(|b| b.leading_index().expect("basis vectors are nonzero"))
    }

    /// Number of elements, `p^dim`, saturating.
    pub fn size(&self) -> u128 {
        self.p.pow_saturating(self.dim() as u64)
    }

    /// Reduces `v` modulo the subspace. The result is zero iff `v` lies in it.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for b in &self.basis {
            let q = b.leading_index().expect("basis vectors are nonzero");
            let c = r.get(q);
            if c != 0 {
                r.add_scaled(self.p.neg(c), b);
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        v.p == self.p && self.reduce(v).is_zero()
    }

    /// Adds `v` to the spanning set. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let mut r = self.reduce(v);
        let Some(q) = r.leading_index() else {
            return false;
        };
        let lead = r.get(q);
        if lead != 1 {
            r = r.scale(Fp {
                value: self.p.inv(lead),
                p: self.p,
            });
        }
        for b in &mut self.basis {
            let c = b.get(q);
            if c != 0 {
                b.add_scaled(self.p.neg(c), &r);
            }
        }
        let at = self
            .basis
            .partition_point(|b| b.leading_index().expect("nonzero") < q);
        self.basis.insert(at, r);
        true
    }

    /// Whether every vector of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        Subspace::span(self.p, self.basis.iter().chain(other.basis.iter()))
    }

    /// The element with base-p digit expansion `index` over the basis,
    /// least significant digit on the first basis vector.
    pub fn element_at(&self, mut index: u128) -> Vector {
        let mut v = Vector::zero(self.p);
        let p = self.p.get() as u128;
        for b in &self.basis {
            let digit = (index % p) as u32;
            index /= p;
            v.add_scaled(digit, b);
        }
        v
    }

    /// All elements in basis-combination order, refusing more than `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<Vector>> {
        let n = self.checked_size(cap, "subspace enumeration")?;
        Ok((0..n as u128).map(|i| self.element_at(i)).collect())
    }

    /// `p^dim` as a `usize` if it does not exceed `cap`.
    pub fn checked_size(&self, cap: u128, what: &'static str) -> Result<usize> {
        let n = self.size();
        if n > cap || n > usize::MAX as u128 {
            return Err(Error::Resource {
                what,
                needed: n,
                cap,
            });
        }
        Ok(n as usize)
    }

    /// Errors unless every basis vector is supported below `horizon`.
    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        self.basis.iter().try_for_each(|b| b.check_horizon(horizon))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Span{")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            f.write_str(&b.to_report_string())?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// `Σ coeffs[i] · vecs[i]`.
pub fn vector_combine(coeffs: &[Fp], vecs: &[Vector]) -> Result<Vector> {
    if coeffs.len() != vecs.len() {
        return Err(usage(format!(
            "{} coefficients for {} vectors",
            coeffs.len(),
            vecs.len()
        )));
    }
    let Some(p) = coeffs
        .first()
        .map(|c| c.prime())
        .or_else(|| vecs.first().map(|v| v.prime()))
    else {
        return Err(usage("empty linear combination has no prime"));
    };
    let mut out = Vector::zero(p);
    for (c, v) in coeffs.iter().zip(vecs) {
        if c.prime() != p {
            return Err(Error::PrimeMismatch {
                left: p.get(),
                right: c.prime().get(),
            });
        }
        v.check_prime(p)?;
        out.add_scaled(c.value(), v);
    }
    Ok(out)
}

/// Canonical echelon basis of the span of `gens`.
pub fn span_of<'a>(p: Prime, gens: impl IntoIterator<Item = &'a Vector>) -> Result<Subspace> {
    Subspace::span(p, gens)
}

pub fn in_span(v: &Vector, s: &Subspace) -> Result<bool> {
    v.check_prime(s.prime())?;
    Ok(s.contains(v))
}

/// A complement of `s` inside the space of vectors supported below
/// `horizon`: the standard vectors at the non-pivot coordinates.
pub fn complement_within(s: &Subspace, horizon: usize) -> Result<Subspace> {
    s.check_horizon(horizon)?;
    let pivots: Vec<usize> = s.pivots().collect();
    let basis = (0..horizon)
        .filter(|i| !pivots.contains(i))
        .map(|i| Vector::unit(s.prime(), i))
        .collect();
    Ok(Subspace {
        p: s.prime(),
        basis,
    })
}

/// `pr_k`: zero every coordinate at or beyond `k`.
pub fn project_prefix(v: &Vector, k: usize) -> Vector {
    Vector {
        p: v.p,
        entries: v.entries.range(..k).map(|(&i, &c)| (i, c)).collect(),
    }
}
