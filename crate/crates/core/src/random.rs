//! Seeded generators for the randomized suites. Every generator takes an
//! explicit RNG; [`rng_for`] derives independent per-instance streams from a
//! single seed so results do not depend on execution order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{orbit, pointwise_stabilizer, GroupElement, Hf, PartitionCell};
use crate::error::{Error, Result};
use crate::fp::{Prime, Subspace, Vector};

/// RNG for instance `index` of the stream labelled `label` under `seed`.
pub fn rng_for(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    // FNV-1a over the label, then splitmix64 over the combination.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// A vector supported below `horizon`, each coordinate nonzero with
/// probability one half.
pub fn random_vector(rng: &mut impl Rng, p: Prime, horizon: usize) -> Vector {
    Vector::from_entries(
        p,
        (0..horizon).filter_map(|i| {
            rng.gen_bool(0.5)
                .then(|| (i, rng.gen_range(1..p.get()) as u64))
        }),
    )
}

/// A nonzero vector supported below `horizon`.
pub fn random_nonzero_vector(rng: &mut impl Rng, p: Prime, horizon: usize) -> Vector {
    loop {
        let v = random_vector(rng, p, horizon);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_group_element(rng: &mut impl Rng, p: Prime, horizon: usize) -> GroupElement {
    let coords: Vec<u64> = (0..horizon).map(|_| rng.gen_range(0..p.get()) as u64).collect();
    GroupElement::from_coords(p, &coords)
}

pub fn random_atom(rng: &mut impl Rng, p: Prime, horizon: usize) -> Hf {
    Hf::atom(rng.gen_range(0..p.get()) as u64, random_vector(rng, p, horizon))
}

/// A random object of depth at most `depth`, with at most three children
/// per node.
pub fn random_hf(rng: &mut impl Rng, p: Prime, horizon: usize, depth: usize) -> Hf {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng, p, horizon);
    }
    let width = rng.gen_range(0..=3);
    let as_set = rng.gen_bool(0.5);
    let children: Vec<Hf> = (0..width).map(|_| random_hf(rng, p, horizon, depth - 1)).collect();
    if as_set {
        Hf::set(children)
    } else {
        Hf::tuple(children)
    }
}

/// A random tuple of `2..=4` components, each of depth at most 2.
pub fn random_tuple(rng: &mut impl Rng, p: Prime, horizon: usize) -> Hf {
    let n = rng.gen_range(2..=4);
    Hf::tuple((0..n).map(|_| random_hf(rng, p, horizon, 2)))
}

/// A randomized input for the support reduction: `x ∈ X`, `|X| = p`, `A`
/// supports `X`, `A ∪ B` supports `x`, `B` has two vectors independent
/// over `Span(A)`.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub p: Prime,
    pub horizon: usize,
    pub x: Hf,
    pub big_x: Hf,
    pub a: Vec<Vector>,
    pub b: Vec<Vector>,
}

/// Builds an instance around a "line" object
/// `{ <(jα + c₁, b₁), (jβ + c₂, b₂)> : j ∈ F_p }`, which `g` moves by the
/// shift `(g·b₁, g·b₂)`. Its stabilizer in `G_(A)` is the set of shifts
/// parallel to `(α, β)`, of index p. The line is paired with filler that
/// `G_(A)` fixes and the whole object is moved by a random group element.
pub fn random_reduction_instance(
    rng: &mut impl Rng,
    p: Prime,
    horizon: usize,
    cap: u128,
) -> Result<ReductionInstance> {
    if horizon < 3 {
        return Err(Error::Usage("reduction instances need horizon ≥ 3".into()));
    }
    let n_a = rng.gen_range(0..=horizon.saturating_sub(3).min(2));
    let a: Vec<Vector> = (0..n_a).map(|_| random_nonzero_vector(rng, p, horizon)).collect();
    let span_a = Subspace::span(p, &a)?;

    let b = loop {
        let b1 = random_nonzero_vector(rng, p, horizon);
        let b2 = random_nonzero_vector(rng, p, horizon);
        let joint = span_a.join(&Subspace::span(p, [&b1, &b2])?)?;
        if joint.dim() == span_a.dim() + 2 {
            break vec![b1, b2];
        }
    };

    let pick = |rng: &mut dyn rand::RngCore| rng.gen_range(0..p.get()) as u64;
    let (alpha, beta) = loop {
        let ab = (pick(rng), pick(rng));
        if ab != (0, 0) {
            break ab;
        }
    };
    let (c1, c2) = (pick(rng), pick(rng));
    let line = Hf::set((0..p.get() as u64).map(|j| {
        Hf::tuple([
            Hf::atom(j * alpha + c1, b[0].clone()),
            Hf::atom(j * beta + c2, b[1].clone()),
        ])
    }));

    // Filler fixed by G_(A): atoms over Span(A) and whole cells.
    let span_elems = span_a.elements(cap)?;
    let n_fill = rng.gen_range(0..=3);
    let filler = Hf::set((0..n_fill).map(|_| {
        if rng.gen_bool(0.5) {
            let w = span_elems.choose(rng).expect("span has 0").clone();
            Hf::atom(pick(rng), w)
        } else {
            PartitionCell::new(random_vector(rng, p, horizon)).to_hf()
        }
    }));

    let x0 = if rng.gen_bool(0.5) {
        Hf::tuple([line, filler])
    } else {
        Hf::set([line, filler])
    };
    let x = crate::action::act_hf(&x0, &random_group_element(rng, p, horizon))?;
    let g_a = pointwise_stabilizer(p, &a, horizon)?;
    let big_x = Hf::Set(orbit(&x, &g_a, horizon, cap)?);
    if big_x.as_set().map(|s| s.len()) != Some(p.get() as usize) {
        return Err(Error::Consistency(format!(
            "generated orbit has {} elements instead of {p}",
            big_x.as_set().map_or(0, |s| s.len())
        )));
    }

    // Perturb B by elements of Span(A) so normalization has work to do.
    let b = b
        .into_iter()
        .map(|v| v.add(span_elems.choose(rng).expect("span has 0")))
        .collect();
    Ok(ReductionInstance {
        p,
        horizon,
        x,
        big_x,
        a,
        b,
    })
}

/// A finite prefix of a stream with pairwise distinct elements whose
/// coordinates each settle: element `n` is a fixed base, plus a marker at
/// coordinate `r + n`, plus noise on coordinates `[n/2, n/2 + r)`.
pub fn random_stabilizing_stream(rng: &mut impl Rng, p: Prime, len: usize) -> Vec<Vector> {
    let r = rng.gen_range(1..=4);
    let base = random_vector(rng, p, 6);
    (0..len)
        .map(|n| {
            let mut v = base.add(&Vector::unit(p, r + n));
            let lo = n / 2;
            for j in lo..lo + r {
                if rng.gen_bool(0.5) {
                    let c = rng.gen_range(1..p.get()) as u64;
                    v = v.add(&Vector::from_entries(p, [(j, c)]));
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::DEFAULT_ENUM_CAP;
    use crate::supports::is_support;

    #[test]
    fn per_instance_rngs_are_reproducible_and_distinct() {
        let a: u64 = rng_for(42, "x", 3).gen();
        let b: u64 = rng_for(42, "x", 3).gen();
        let c: u64 = rng_for(42, "x", 4).gen();
        let d: u64 = rng_for(42, "y", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn reduction_instances_meet_their_contract() {
        for p in [Prime::TWO, Prime::THREE, Prime::FIVE] {
            for i in 0..20 {
                let mut rng = rng_for(7, "inst", i);
                let inst = random_reduction_instance(&mut rng, p, 4, DEFAULT_ENUM_CAP).unwrap();
                assert!(inst.big_x.as_set().unwrap().contains(&inst.x));
                assert!(is_support(p, &inst.a, &inst.big_x, 4).unwrap());
                assert!(is_support(p, inst.a.iter().chain(&inst.b), &inst.x, 4).unwrap());
            }
        }
    }

    #[test]
    fn streams_are_distinct_and_settle() {
        let mut rng = rng_for(1, "stream", 0);
        let xs = random_stabilizing_stream(&mut rng, Prime::THREE, 80);
        let uniq: std::collections::BTreeSet<_> = xs.iter().collect();
        assert_eq!(uniq.len(), xs.len());
        // Coordinates below 10 are constant from index 2·10 on.
        for n in 20..80 {
            for j in 0..10 {
                assert_eq!(xs[n].get(j), xs[20].get(j));
            }
        }
    }
}
