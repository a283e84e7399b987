//! Supports of objects and the reduction of a finite support `A ∪ B` of an
//! element of a p-element set down to `A ∪ {b}`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::action::{
    act_hf, pointwise_stabilizer, stabilizer_in, GroupElement, Hf,
};
use crate::error::{usage, Error, Result};
use crate::fp::{Fp, Prime, Subspace, Vector};

/// A claim that `support` supports `object` at `horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportClaim {
    pub support: BTreeSet<Vector>,
    pub object: Hf,
    pub horizon: usize,
}

impl SupportClaim {
    pub fn holds(&self, p: Prime) -> Result<bool> {
        is_support(p, &self.support, &self.object, self.horizon)
    }
}

/// Whether every group element fixing at `a` fixes `x`.
///
/// Only a basis of `G_(A)` is tested: the set of elements fixing `x` is
/// closed under composition, so it contains `G_(A)` once it contains a basis.
pub fn is_support<'a>(
    p: Prime,
    a: impl IntoIterator<Item = &'a Vector>,
    x: &Hf,
    horizon: usize,
) -> Result<bool> {
    x.check_atoms(p, horizon)?;
    let stab = pointwise_stabilizer(p, a, horizon)?;
    for b in stab.basis() {
        let g = GroupElement::from_vector(b, horizon)?;
        if act_hf(x, &g)? != *x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One application of the reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    #[serde(rename = "B_before")]
    pub b_before: Vec<Vector>,
    #[serde(rename = "B_after")]
    pub b_after: Vec<Vector>,
    /// The element of `H ∖ G'_(b₁,b₂)` used; absent for shortcut steps.
    pub h: Option<GroupElement>,
    pub m: Option<Fp>,
    pub n: Option<Fp>,
    /// The new support vector; absent for shortcut steps.
    pub b: Option<Vector>,
    /// True when a proper subset of `B` already supported `x`.
    pub shortcut: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Outcome of [`find_small_support`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallSupport {
    /// `A ∪ B_final`.
    pub support: BTreeSet<Vector>,
    /// `B` after echelon normalization against `Span(A)`.
    pub normalized_b: Vec<Vector>,
    pub b_final: Vec<Vector>,
    pub trace: ReductionTrace,
}

/// Shared inputs of the reduction.
#[derive(Debug, Clone)]
pub struct ReductionInput<'a> {
    pub p: Prime,
    pub x: &'a Hf,
    pub big_x: &'a Hf,
    pub a: &'a [Vector],
    pub horizon: usize,
    pub cap: u128,
}

impl ReductionInput<'_> {
    fn validate(&self) -> Result<()> {
        let members = self
            .big_x
            .as_set()
            .ok_or_else(|| usage("X must be a finite set"))?;
        if members.len() != self.p.get() as usize {
            return Err(usage(format!(
                "X has {} elements; the reduction needs exactly p = {}",
                members.len(),
                self.p
            )));
        }
        if !members.contains(self.x) {
            return Err(usage("x is not an element of X"));
        }
        self.big_x.check_atoms(self.p, self.horizon)?;
        for w in self.a {
            w.check_prime(self.p)?;
            w.check_horizon(self.horizon)?;
        }
        Ok(())
    }

    fn supports_with(&self, extra: &[Vector]) -> Result<bool> {
        is_support(self.p, self.a.iter().chain(extra), self.x, self.horizon)
    }
}

/// One reduction step: from `A ∪ B` supporting `x` with `|B| ≥ 2` to
/// `A ∪ B'` with `|B'| = |B| - 1`.
///
/// `B` must be linearly independent and meet `Span(A)` only in zero.
pub fn reduce_support_step(input: &ReductionInput<'_>, b: &[Vector]) -> Result<ReductionStep> {
    input.validate()?;
    reduce_step_validated(input, b)
}

fn reduce_step_validated(input: &ReductionInput<'_>, b: &[Vector]) -> Result<ReductionStep> {
    let p = input.p;
    if b.len() < 2 {
        return Err(usage(format!("B has {} elements; a step needs at least 2", b.len())));
    }
    for v in b {
        v.check_prime(p)?;
        v.check_horizon(input.horizon)?;
    }
    let span_a = Subspace::span(p, input.a)?;
    let span_ab = Subspace::span(p, input.a.iter().chain(b))?;
    if span_ab.dim() != span_a.dim() + b.len() {
        return Err(usage(
            "B must be linearly independent and disjoint from Span(A)",
        ));
    }
    if !input.supports_with(b)? {
        return Err(usage("A ∪ B does not support x"));
    }

    // Some B minus one element may already do.
    for skip in 0..b.len() {
        let rest: Vec<Vector> = b
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, v)| v.clone())
            .collect();
        if input.supports_with(&rest)? {
            return Ok(ReductionStep {
                b_before: b.to_vec(),
                b_after: rest,
                h: None,
                m: None,
                n: None,
                b: None,
                shortcut: true,
            });
        }
    }

    let (b1, b2, tail) = (&b[0], &b[1], &b[2..]);
    let g_prime = pointwise_stabilizer(p, input.a.iter().chain(tail), input.horizon)?;
    let h_sub = stabilizer_in(input.x, &g_prime, input.horizon, input.cap)?;
    let both = pointwise_stabilizer(p, input.a.iter().chain(b), input.horizon)?;

    if !both.is_subspace_of(&h_sub) {
        return Err(Error::Consistency(
            "G'_(b1,b2) is not contained in the stabilizer of x".into(),
        ));
    }
    if h_sub.dim() != both.dim() + 1 {
        return Err(Error::Consistency(format!(
            "[H : G'_(b1,b2)] = p^{} instead of p; X is not a p-element orbit situation",
            h_sub.dim() as isize - both.dim() as isize
        )));
    }

    let n_h = h_sub.checked_size(input.cap, "stabilizer enumeration")?;
    let h_vec = (1..n_h as u128)
        .map(|i| h_sub.element_at(i))
        .find(|v| !both.contains(v))
        .ok_or_else(|| Error::Consistency("H ∖ G'_(b1,b2) is empty".into()))?;
    let h = GroupElement::from_vector(&h_vec, input.horizon)?;

    // (0, b_i)h = (m_i, b_i) where m_i is the pairing of b_i with h.
    let m = h.pairing(b1)?;
    let n = h.pairing(b2)?;
    let new_b = match (m.inverse(), n.inverse()) {
        (None, _) => b1.clone(),
        (_, None) => b2.clone(),
        (Some(mi), Some(ni)) => b1.scale(mi).sub(&b2.scale(ni)),
    };

    let mut b_after = vec![new_b.clone()];
    b_after.extend(tail.iter().cloned());

    // H = G'_(b), checked as two inclusions.
    let target = pointwise_stabilizer(p, input.a.iter().chain(&b_after), input.horizon)?;
    if target != h_sub {
        return Err(Error::Consistency(format!(
            "G'_(b) differs from the stabilizer of x for b = {}",
            new_b.to_report_string()
        )));
    }
    if !input.supports_with(&b_after)? {
        return Err(Error::Consistency("A ∪ B' fails to support x".into()));
    }

    Ok(ReductionStep {
        b_before: b.to_vec(),
        b_after,
        h: Some(h),
        m: Some(m),
        n: Some(n),
        b: Some(new_b),
        shortcut: false,
    })
}

/// Reduces `b` modulo `Span(A)` and drops dependent vectors, keeping order.
pub fn normalize_against(p: Prime, a: &[Vector], b: &[Vector]) -> Result<Vec<Vector>> {
    let span_a = Subspace::span(p, a)?;
    let mut seen = span_a.clone();
    let mut out = Vec::new();
    for v in b {
        v.check_prime(p)?;
        let r = span_a.reduce(v);
        if seen.insert(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Shrinks `B` until at most one vector remains, so that `A ∪ {b}` (or `A`
/// alone) supports `x`.
pub fn find_small_support(input: &ReductionInput<'_>, b: &[Vector]) -> Result<SmallSupport> {
    input.validate()?;
    let normalized = normalize_against(input.p, input.a, b)?;
    if !input.supports_with(&normalized)? {
        return Err(usage("A ∪ B does not support x"));
    }
    let mut current = normalized.clone();
    let mut trace = ReductionTrace::default();
    while current.len() >= 2 {
        let step = reduce_step_validated(input, &current)?;
        debug_assert_eq!(step.b_after.len() + 1, current.len());
        current = step.b_after.clone();
        trace.steps.push(step);
    }
    if current.len() == 1 && input.supports_with(&[])? {
        trace.steps.push(ReductionStep {
            b_before: current.clone(),
            b_after: Vec::new(),
            h: None,
            m: None,
            n: None,
            b: None,
            shortcut: true,
        });
        current.clear();
    }
    Ok(SmallSupport {
        support: input.a.iter().chain(&current).cloned().collect(),
        normalized_b: normalized,
        b_final: current,
        trace,
    })
}
