//! Atoms `U = F_p × W`, horizon-truncated elements of the product group G,
//! and the action `(a, w)g = (a + Σ wᵢgᵢ, w)` extended to hereditarily
//! finite objects.
//!
//! At a fixed horizon `k`, G is the elementary abelian group F_p^k. Its
//! subgroups are carried as [`Subspace`]s of coordinate vectors supported
//! below `k`; [`GroupElement::from_vector`] converts between the two views.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{usage, Error, Result};
use crate::exec::Exec;
use crate::fp::{Fp, Prime, Subspace, Vector};

/// Default cap on group enumerations.
pub const DEFAULT_ENUM_CAP: u128 = 1_000_000;

/// An atom `(a, w)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    a: u32,
    w: Vector,
}

impl Atom {
    pub fn new(a: Fp, w: Vector) -> Result<Self> {
        w.check_prime(a.prime())?;
        Ok(Atom { a: a.value(), w })
    }

    /// Atom with scalar `a` reduced modulo `w`'s prime.
    pub fn with_scalar(a: u64, w: Vector) -> Self {
        let a = Fp::new(a, w.prime()).value();
        Atom { a, w }
    }

    pub fn scalar(&self) -> Fp {
        Fp::new(self.a as u64, self.w.prime())
    }

    pub fn index(&self) -> &Vector {
        &self.w
    }

    pub fn prime(&self) -> Prime {
        self.w.prime()
    }

    /// Parses `(a|w)`.
    pub fn parse(s: &str, p: Prime) -> Result<Atom> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("atom must look like (a|w): {s:?}")))?;
        let (a, w) = inner
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("atom is missing '|': {s:?}")))?;
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad atom scalar {a:?}: {e}")))?;
        if a >= p.get() as u64 {
            return Err(Error::Parse(format!("atom scalar {a} is not a residue mod {p}")));
        }
        Ok(Atom::with_scalar(a, Vector::parse(w, p)?))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.a, self.w)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The partition cell `U_w = {(a, w) : a ∈ F_p}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionCell {
    w: Vector,
}

impl PartitionCell {
    pub fn new(w: Vector) -> Self {
        PartitionCell { w }
    }

    pub fn index(&self) -> &Vector {
        &self.w
    }

    pub fn members(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.w.prime().get() as u64).map(|a| Atom::with_scalar(a, self.w.clone()))
    }

    /// The cell as a set object.
    pub fn to_hf(&self) -> Hf {
        Hf::set(self.members().map(Hf::Atom))
    }
}

/// A group element truncated to coordinates below its horizon.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    p: Prime,
    coords: Vec<u32>,
}

impl GroupElement {
    pub fn identity(p: Prime, horizon: usize) -> Self {
        GroupElement {
            p,
            coords: vec![0; horizon],
        }
    }

    /// The element with coordinates `coords` (reduced mod p).
    pub fn from_coords(p: Prime, coords: &[u64]) -> Self {
        GroupElement {
            p,
            coords: coords.iter().map(|&c| (c % p.get() as u64) as u32).collect(),
        }
    }

    /// The element that is 1 at coordinate `i` and 0 elsewhere.
    pub fn unit(p: Prime, horizon: usize, i: usize) -> Result<Self> {
        if i >= horizon {
            return Err(Error::HorizonExceeded { index: i, horizon });
        }
        let mut g = GroupElement::identity(p, horizon);
        g.coords[i] = 1;
        Ok(g)
    }

    /// Reads a coordinate vector supported below `horizon` as a group element.
    pub fn from_vector(v: &Vector, horizon: usize) -> Result<Self> {
        v.check_horizon(horizon)?;
        let mut g = GroupElement::identity(v.prime(), horizon);
        for (i, c) in v.entries() {
            g.coords[i] = c;
        }
        Ok(g)
    }

    pub fn to_vector(&self) -> Vector {
        Vector::from_entries(
            self.p,
            self.coords.iter().enumerate().map(|(i, &c)| (i, c as u64)),
        )
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn horizon(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// `Σ wᵢ gᵢ`: the amount `g` shifts the scalar of any atom over `w`.
    pub fn pairing(&self, w: &Vector) -> Result<Fp> {
        w.check_prime(self.p)?;
        w.check_horizon(self.horizon())?;
        Ok(Fp::new(self.pairing_unchecked(w) as u64, self.p))
    }

    fn pairing_unchecked(&self, w: &Vector) -> u32 {
        w.entries().fold(0, |acc, (i, c)| {
            self.p.add(acc, self.p.mul(c, self.coords[i]))
        })
    }

    /// Group operation: coordinatewise sum.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        if self.horizon() != other.horizon() {
            return Err(usage(format!(
                "cannot compose group elements of horizons {} and {}",
                self.horizon(),
                other.horizon()
            )));
        }
        Ok(GroupElement {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| self.p.add(a, b))
                .collect(),
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            p: self.p,
            coords: self.coords.iter().map(|&c| self.p.neg(c)).collect(),
        }
    }

    /// `g` composed with itself `n` times.
    pub fn pow(&self, n: u64) -> GroupElement {
        let c = Fp::new(n, self.p).value();
        GroupElement {
            p: self.p,
            coords: self.coords.iter().map(|&x| self.p.mul(x, c)).collect(),
        }
    }

    /// Parses the dense `c0,c1,...` form.
    pub fn parse(s: &str, p: Prime) -> Result<GroupElement> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(GroupElement::identity(p, 0));
        }
        let coords = s
            .split(',')
            .map(|c| {
                let c: u64 = c
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad coordinate {c:?}: {e}")))?;
                if c >= p.get() as u64 {
                    return Err(Error::Parse(format!("{c} is not a residue mod {p}")));
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupElement::from_coords(p, &coords))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g[{self}]")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A hereditarily finite object over atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hf {
    Atom(Atom),
    Set(BTreeSet<Hf>),
    Tuple(Vec<Hf>),
}

impl Hf {
    pub fn atom(a: u64, w: Vector) -> Hf {
        Hf::Atom(Atom::with_scalar(a, w))
    }

    pub fn set(items: impl IntoIterator<Item = Hf>) -> Hf {
        Hf::Set(items.into_iter().collect())
    }

    pub fn tuple(items: impl IntoIterator<Item = Hf>) -> Hf {
        Hf::Tuple(items.into_iter().collect())
    }

    pub fn empty_set() -> Hf {
        Hf::Set(BTreeSet::new())
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Hf>> {
        match self {
            Hf::Set(s) => Some(s),
            _ => None,
        }
    }

    /// Visits every atom occurring in the object.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Hf::Atom(a) => f(a),
            Hf::Set(s) => s.iter().for_each(|x| x.for_each_atom(f)),
            Hf::Tuple(t) => t.iter().for_each(|x| x.for_each_atom(f)),
        }
    }

    /// Greatest coordinate index used by any atom.
    pub fn max_index(&self) -> Option<usize> {
        let mut m: Option<usize> = None;
        self.for_each_atom(&mut |a| {
            if let Some(i) = a.index().max_index() {
                m = Some(m.map_or(i, |m| m.max(i)));
            }
        });
        m
    }

    /// Errors unless every atom lives over `p` and below `horizon`.
    pub fn check_atoms(&self, p: Prime, horizon: usize) -> Result<()> {
        let mut err = None;
        self.for_each_atom(&mut |a| {
            if err.is_none() {
                err = a
                    .index()
                    .check_prime(p)
                    .and_then(|_| a.index().check_horizon(horizon))
                    .err();
            }
        });
        err.map_or(Ok(()), Err)
    }

    pub fn depth(&self) -> usize {
        match self {
            Hf::Atom(_) => 0,
            Hf::Set(s) => 1 + s.iter().map(Hf::depth).max().unwrap_or(0),
            Hf::Tuple(t) => 1 + t.iter().map(Hf::depth).max().unwrap_or(0),
        }
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        match self {
            Hf::Atom(_) => 1,
            Hf::Set(s) => 1 + s.iter().map(Hf::node_count).sum::<usize>(),
            Hf::Tuple(t) => 1 + t.iter().map(Hf::node_count).sum::<usize>(),
        }
    }

    /// JSON form: `{"atom": "(a|w)"}`, `{"set": [...]}` or `{"tuple": [...]}`;
    /// set members come out in canonical order.
    pub fn to_json(&self) -> Value {
        match self {
            Hf::Atom(a) => json!({ "atom": a.to_string() }),
            Hf::Set(s) => json!({ "set": s.iter().map(Hf::to_json).collect::<Vec<_>>() }),
            Hf::Tuple(t) => json!({ "tuple": t.iter().map(Hf::to_json).collect::<Vec<_>>() }),
        }
    }

    pub fn from_json(v: &Value, p: Prime) -> Result<Hf> {
        let obj = v
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| Error::Parse(format!("expected a one-key object, got {v}")))?;
        let (key, body) = obj.iter().next().expect("one key");
        let list = || {
            body.as_array()
                .ok_or_else(|| Error::Parse(format!("{key} body must be an array")))?
                .iter()
                .map(|x| Hf::from_json(x, p))
                .collect::<Result<Vec<_>>>()
        };
        match key.as_str() {
            "atom" => {
                let s = body
                    .as_str()
                    .ok_or_else(|| Error::Parse("atom body must be a string".into()))?;
                Ok(Hf::Atom(Atom::parse(s, p)?))
            }
            "set" => Ok(Hf::set(list()?)),
            "tuple" => Ok(Hf::Tuple(list()?)),
            other => Err(Error::Parse(format!("unknown object kind {other:?}"))),
        }
    }

    fn act_unchecked(&self, g: &GroupElement) -> Hf {
        match self {
            Hf::Atom(a) => Hf::Atom(act_atom_unchecked(a, g)),
            Hf::Set(s) => Hf::Set(s.iter().map(|x| x.act_unchecked(g)).collect()),
            Hf::Tuple(t) => Hf::Tuple(t.iter().map(|x| x.act_unchecked(g)).collect()),
        }
    }
}

impl fmt::Display for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hf::Atom(a) => write!(f, "{a}"),
            Hf::Set(s) => {
                f.write_str("{")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
            Hf::Tuple(t) => {
                f.write_str("<")?;
                for (i, x) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(">")
            }
        }
    }
}

impl fmt::Debug for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Hf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn act_atom_unchecked(x: &Atom, g: &GroupElement) -> Atom {
    Atom {
        a: g.p.add(x.a, g.pairing_unchecked(&x.w)),
        w: x.w.clone(),
    }
}

/// `(a, w)g = (a + Σ wᵢgᵢ, w)`.
pub fn act_atom(x: &Atom, g: &GroupElement) -> Result<Atom> {
    x.index().check_prime(g.prime())?;
    x.index().check_horizon(g.horizon())?;
    Ok(act_atom_unchecked(x, g))
}

pub fn compose(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    g.compose(h)
}

/// Whether `g` fixes every atom of every cell `U_w` with `w ∈ a`.
pub fn fixes_at<'a>(g: &GroupElement, a: impl IntoIterator<Item = &'a Vector>) -> Result<bool> {
    for w in a {
        if !g.pairing(w)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `G_(A)` at horizon `k`: the annihilator of `Span(A)` in F_p^k, as a
/// subspace of coordinate vectors.
pub fn pointwise_stabilizer<'a>(
    p: Prime,
    a: impl IntoIterator<Item = &'a Vector>,
    horizon: usize,
) -> Result<Subspace> {
    let a: Vec<&Vector> = a.into_iter().collect();
    for w in &a {
        w.check_prime(p)?;
        w.check_horizon(horizon)?;
    }
    let span = Subspace::span(p, a)?;
    annihilator(&span, horizon)
}

/// The subspace of F_p^k pairing to zero with every vector of `s`.
///
/// For an echelon basis, each non-pivot coordinate `j` yields the
/// annihilating vector `e_j - Σ b[j]·e_pivot(b)`.
pub fn annihilator(s: &Subspace, horizon: usize) -> Result<Subspace> {
    s.check_horizon(horizon)?;
    let p = s.prime();
    let pivots: Vec<usize> = s.pivots().collect();
    let gens: Vec<Vector> = (0..horizon)
        .filter(|j| !pivots.contains(j))
        .map(|j| {
            let mut v = Vector::unit(p, j);
            for (b, &q) in s.basis().iter().zip(&pivots) {
                let c = b.get(j);
                if c != 0 {
                    v.add_scaled(p.neg(c), &Vector::unit(p, q));
                }
            }
            v
        })
        .collect();
    let out = Subspace::span(p, &gens)?;
    debug_assert_eq!(out.dim(), horizon - s.dim());
    Ok(out)
}

/// Applies `g` to every atom of `x`, re-canonicalizing sets.
pub fn act_hf(x: &Hf, g: &GroupElement) -> Result<Hf> {
    x.check_atoms(g.prime(), g.horizon())?;
    Ok(x.act_unchecked(g))
}

fn group_elements(h: &Subspace, horizon: usize, cap: u128) -> Result<(usize, Vec<GroupElement>)> {
    h.check_horizon(horizon)?;
    let n = h.checked_size(cap, "group enumeration")?;
    let elems = (0..n)
        .map(|i| GroupElement::from_vector(&h.element_at(i as u128), horizon))
        .collect::<Result<Vec<_>>>()?;
    Ok((n, elems))
}

/// `{ x·g : g ∈ H }`.
pub fn orbit(x: &Hf, h: &Subspace, horizon: usize, cap: u128) -> Result<BTreeSet<Hf>> {
    orbit_with(x, h, horizon, cap, Exec::default())
}

pub fn orbit_with(
    x: &Hf,
    h: &Subspace,
    horizon: usize,
    cap: u128,
    exec: Exec,
) -> Result<BTreeSet<Hf>> {
    x.check_atoms(h.prime(), horizon)?;
    let (_, elems) = group_elements(h, horizon, cap)?;
    Ok(exec
        .map_slice(&elems, |g| x.act_unchecked(g))
        .into_iter()
        .collect())
}

/// `{ g ∈ H : x·g = x }` as a subspace of `H`.
pub fn stabilizer_in(x: &Hf, h: &Subspace, horizon: usize, cap: u128) -> Result<Subspace> {
    stabilizer_in_with(x, h, horizon, cap, Exec::default())
}

pub fn stabilizer_in_with(
    x: &Hf,
    h: &Subspace,
    horizon: usize,
    cap: u128,
    exec: Exec,
) -> Result<Subspace> {
    x.check_atoms(h.prime(), horizon)?;
    let (_, elems) = group_elements(h, horizon, cap)?;
    let fixing: Vec<Vector> = exec
        .map_slice(&elems, |g| (x.act_unchecked(g) == *x).then(|| g.to_vector()))
        .into_iter()
        .flatten()
        .collect();
    let stab = Subspace::span(h.prime(), &fixing)?;
    // The fixing set is a subgroup, so it is exactly its own span.
    debug_assert_eq!(
        stab.size(),
        fixing.len() as u128,
        "stabilizer of {x} is not closed under composition"
    );
    Ok(stab)
}

/// Kuratowski pair `{{a}, {a, b}}`.
pub fn kuratowski_pair(a: Hf, b: Hf) -> Hf {
    Hf::set([Hf::set([a.clone()]), Hf::set([a, b])])
}

/// Replaces every tuple, recursively, by nested Kuratowski pairs:
/// `<> ↦ ∅` and `<x, rest..> ↦ (x, <rest..>)`.
pub fn kuratowski_encode(x: &Hf) -> Hf {
    match x {
        Hf::Atom(_) => x.clone(),
        Hf::Set(s) => Hf::set(s.iter().map(kuratowski_encode)),
        Hf::Tuple(t) => t
            .iter()
            .rev()
            .fold(Hf::empty_set(), |rest, item| {
                kuratowski_pair(kuratowski_encode(item), rest)
            }),
    }
}

/// Inverts [`kuratowski_pair`].
pub fn kuratowski_decode_pair(x: &Hf) -> Result<(Hf, Hf)> {
    let bad = || Error::Parse(format!("not a Kuratowski pair: {x}"));
    let s = x.as_set().ok_or_else(bad)?;
    let parts: Vec<&BTreeSet<Hf>> = s.iter().map(|m| m.as_set().ok_or_else(bad)).collect::<Result<_>>()?;
    match parts.as_slice() {
        [only] if only.len() == 1 => {
            let a = only.iter().next().expect("len 1").clone();
            Ok((a.clone(), a))
        }
        [u, v] => {
            let (single, double) = match (u.len(), v.len()) {
                (1, 2) => (u, v),
                (2, 1) => (v, u),
                _ => return Err(bad()),
            };
            let a = single.iter().next().expect("len 1");
            if !double.contains(a) {
                return Err(bad());
            }
            let b = double.iter().find(|m| *m != a).expect("len 2");
            Ok((a.clone(), b.clone()))
        }
        _ => Err(bad()),
    }
}

/// Undoes the top tuple level of [`kuratowski_encode`] for a tuple of
/// length `arity`. Components stay in encoded form.
pub fn kuratowski_decode_tuple(x: &Hf, arity: usize) -> Result<Vec<Hf>> {
    let mut out = Vec::with_capacity(arity);
    let mut rest = x.clone();
    for _ in 0..arity {
        let (head, tail) = kuratowski_decode_pair(&rest)?;
        out.push(head);
        rest = tail;
    }
    if rest != Hf::empty_set() {
        return Err(Error::Parse(format!("tuple encoding longer than {arity}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P2: Prime = Prime::TWO;
    const P3: Prime = Prime::THREE;

    fn e(p: Prime, i: usize) -> Vector {
        Vector::unit(p, i)
    }

    fn g(p: Prime, c: &[u64]) -> GroupElement {
        GroupElement::from_coords(p, c)
    }

    /// All elements of F_p^k listed directly, independent of `Subspace`.
    fn all_elements(p: Prime, k: usize) -> Vec<GroupElement> {
        let n = (p.get() as usize).pow(k as u32);
        (0..n)
            .map(|mut m| {
                let coords: Vec<u64> = (0..k)
                    .map(|_| {
                        let c = m % p.get() as usize;
                        m /= p.get() as usize;
                        c as u64
                    })
                    .collect();
                g(p, &coords)
            })
            .collect()
    }

    fn parallel_matching(p: Prime) -> Hf {
        Hf::set((0..p.get() as u64).map(|j| Hf::tuple([Hf::atom(j, e(p, 0)), Hf::atom(j, e(p, 1))])))
    }

    #[test]
    fn act_atom_examples() {
        let x = Atom::with_scalar(0, e(P2, 0));
        assert_eq!(act_atom(&x, &g(P2, &[1, 0])).unwrap(), Atom::with_scalar(1, e(P2, 0)));

        for c in all_elements(P3, 2) {
            let x = Atom::with_scalar(2, Vector::zero(P3));
            assert_eq!(act_atom(&x, &c).unwrap(), x);
        }

        let x = Atom::with_scalar(1, e(P3, 1).scale(Fp::new(2, P3)));
        let y = act_atom(&x, &g(P3, &[0, 2])).unwrap();
        assert_eq!(y.scalar().value(), 2);
        assert_eq!(y.index(), x.index());
    }

    #[test]
    fn act_atom_refuses_to_truncate() {
        let x = Atom::with_scalar(0, e(P2, 3));
        assert_eq!(
            act_atom(&x, &GroupElement::identity(P2, 3)),
            Err(Error::HorizonExceeded { index: 3, horizon: 3 })
        );
    }

    #[test]
    fn compose_examples() {
        for x in all_elements(P2, 3) {
            assert!(compose(&x, &x).unwrap().is_identity());
            assert_eq!(compose(&x, &GroupElement::identity(P2, 3)).unwrap(), x);
        }
        let x = g(P3, &[1, 0]);
        let x3 = compose(&compose(&x, &x).unwrap(), &x).unwrap();
        assert!(x3.is_identity());
        assert!(compose(&g(P2, &[1]), &g(P2, &[1, 0])).is_err());
        assert!(compose(&g(P2, &[1]), &g(P3, &[1])).is_err());
    }

    #[test]
    fn fixes_at_examples() {
        let x = g(P2, &[1, 0]);
        assert!(fixes_at(&x, &[e(P2, 1)]).unwrap());
        assert!(!fixes_at(&x, &[e(P2, 0)]).unwrap());
        assert!(fixes_at(&g(P2, &[1, 1]), &[e(P2, 0).add(&e(P2, 1))]).unwrap());
        assert!(fixes_at(&x, &[e(P2, 2)]).is_err());
    }

    #[test]
    fn pointwise_stabilizer_examples() {
        let s = pointwise_stabilizer(P2, &[e(P2, 0)], 2).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis(), &[e(P2, 1)]);
        assert_eq!(pointwise_stabilizer(P2, &[], 2).unwrap().dim(), 2);
        assert_eq!(pointwise_stabilizer(P2, &[e(P2, 0), e(P2, 1)], 2).unwrap().dim(), 0);
        assert!(pointwise_stabilizer(P2, &[e(P2, 2)], 2).is_err());
    }

    #[test]
    fn pointwise_stabilizer_matches_brute_force() {
        for p in [P2, P3] {
            let a = vec![
                Vector::from_dense(p, &[1, 1, 0, 1]),
                Vector::from_dense(p, &[0, 1, 2, 0]),
            ];
            let stab = pointwise_stabilizer(p, &a, 4).unwrap();
            for x in all_elements(p, 4) {
                let fixes = a.iter().all(|w| {
                    w.entries()
                        .map(|(i, c)| c as u64 * x.coords()[i] as u64)
                        .sum::<u64>()
                        % p.get() as u64
                        == 0
                });
                assert_eq!(stab.contains(&x.to_vector()), fixes);
            }
        }
    }

    #[test]
    fn act_hf_examples() {
        let cell = PartitionCell::new(e(P2, 0)).to_hf();
        for x in all_elements(P2, 2) {
            assert_eq!(act_hf(&cell, &x).unwrap(), cell);
        }
        let t = Hf::tuple([Hf::atom(0, e(P2, 0)), Hf::atom(0, e(P2, 1))]);
        assert_eq!(
            act_hf(&t, &g(P2, &[1, 0])).unwrap(),
            Hf::tuple([Hf::atom(1, e(P2, 0)), Hf::atom(0, e(P2, 1))])
        );
        let a = Atom::with_scalar(1, e(P3, 0));
        let x = g(P3, &[2, 1]);
        assert_eq!(act_hf(&Hf::Atom(a.clone()), &x).unwrap(), Hf::Atom(act_atom(&a, &x).unwrap()));
    }

    #[test]
    fn orbit_examples() {
        let x = Hf::atom(0, e(P2, 0));
        let full = Subspace::full(P2, 2);
        let o = orbit(&x, &full, 2, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(Hf::Set(o), PartitionCell::new(e(P2, 0)).to_hf());

        let o = orbit(&x, &Subspace::zero(P2), 2, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(o.into_iter().collect::<Vec<_>>(), vec![x]);

        let t = Hf::tuple([Hf::atom(0, e(P2, 0)), Hf::atom(0, e(P2, 1))]);
        let o = orbit(&t, &full, 2, DEFAULT_ENUM_CAP).unwrap();
        let expected: BTreeSet<Hf> = (0..4)
            .map(|m| Hf::tuple([Hf::atom(m & 1, e(P2, 0)), Hf::atom(m >> 1, e(P2, 1))]))
            .collect();
        assert_eq!(o, expected);
    }

    #[test]
    fn orbit_cap() {
        let x = Hf::atom(0, e(P3, 0));
        assert!(matches!(
            orbit(&x, &Subspace::full(P3, 5), 5, 100),
            Err(Error::Resource { needed: 243, .. })
        ));
    }

    #[test]
    fn stabilizer_examples() {
        let full = Subspace::full(P2, 2);
        let s = stabilizer_in(&Hf::atom(0, e(P2, 0)), &full, 2, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(s, pointwise_stabilizer(P2, &[e(P2, 0)], 2).unwrap());

        assert_eq!(stabilizer_in(&Hf::empty_set(), &full, 2, DEFAULT_ENUM_CAP).unwrap(), full);

        // Exhaustively, (0,0) and (1,1) fix the parallel matching; the others swap it.
        let m = parallel_matching(P2);
        let s = stabilizer_in(&m, &full, 2, DEFAULT_ENUM_CAP).unwrap();
        let fixing: Vec<_> = all_elements(P2, 2)
            .into_iter()
            .filter(|x| act_hf(&m, x).unwrap() == m)
            .map(|x| x.to_vector())
            .collect();
        assert_eq!(fixing.len(), 2);
        assert_eq!(s, Subspace::span(P2, &fixing).unwrap());
        assert_eq!(s.basis(), &[e(P2, 0).add(&e(P2, 1))]);
    }

    #[test]
    fn kuratowski_round_trip() {
        let a = Hf::atom(1, e(P2, 0));
        let b = Hf::atom(0, e(P2, 1));
        let pair = kuratowski_pair(a.clone(), b.clone());
        assert_eq!(kuratowski_decode_pair(&pair).unwrap(), (a.clone(), b.clone()));
        let diag = kuratowski_pair(a.clone(), a.clone());
        assert_eq!(kuratowski_decode_pair(&diag).unwrap(), (a.clone(), a.clone()));

        let t = Hf::tuple([a.clone(), b.clone(), a.clone()]);
        let enc = kuratowski_encode(&t);
        assert_eq!(kuratowski_decode_tuple(&enc, 3).unwrap(), vec![a.clone(), b, a]);
        assert!(kuratowski_decode_tuple(&enc, 2).is_err());
        assert!(kuratowski_decode_pair(&Hf::empty_set()).is_err());
    }

    #[test]
    fn json_round_trip_and_text_forms() {
        let x = Hf::tuple([
            Hf::atom(2, Vector::from_dense(P3, &[1, 0, 2])),
            Hf::set([Hf::atom(0, Vector::zero(P3)), Hf::empty_set()]),
        ]);
        let j = x.to_json();
        assert_eq!(Hf::from_json(&j, P3).unwrap(), x);
        assert_eq!(
            j.to_string(),
            r#"{"tuple":[{"atom":"(2|0:1,2:2)"},{"set":[{"atom":"(0|)"},{"set":[]}]}]}"#
        );
        assert_eq!(Atom::parse("(1|0:1,1:1)", P2).unwrap().to_string(), "(1|0:1,1:1)");
        assert!(Atom::parse("(2|0:1)", P2).is_err());
        assert_eq!(GroupElement::parse("1,0,1", P2).unwrap().to_string(), "1,0,1");
        assert!(GroupElement::parse("1,2", P2).is_err());
        assert!(Hf::from_json(&json!({"bag": []}), P2).is_err());
    }
}
