//! Brute-force reference computations used to cross-check the fast paths.
//!
//! Nothing here goes through echelon forms, annihilators or stabilizer
//! bases: group elements are listed coordinate by coordinate, spans are
//! listed as all coefficient combinations, and fixing is evaluated from the
//! raw sums.

use std::collections::BTreeSet;

use crate::action::{act_hf, GroupElement, Hf};
use crate::fp::{project_prefix, Prime, Vector};

/// Every element of F_p^k, in counter order.
pub fn dense_group(p: Prime, horizon: usize) -> Vec<GroupElement> {
    let q = p.get() as u64;
    let n = q.pow(horizon as u32);
    (0..n)
        .map(|mut m| {
            let coords: Vec<u64> = (0..horizon)
                .map(|_| {
                    let c = m % q;
                    m /= q;
                    c
                })
                .collect();
            GroupElement::from_coords(p, &coords)
        })
        .collect()
}

/// Every vector supported below `horizon`.
pub fn dense_vectors(p: Prime, horizon: usize) -> Vec<Vector> {
    dense_group(p, horizon).iter().map(|g| g.to_vector()).collect()
}

/// `Σ wᵢ gᵢ = 0` for every `w`, evaluated directly.
pub fn fixes_at(g: &GroupElement, a: &[Vector]) -> bool {
    let q = g.prime().get() as u64;
    a.iter().all(|w| {
        w.entries()
            .map(|(i, c)| c as u64 * g.coords().get(i).copied().unwrap_or(0) as u64)
            .sum::<u64>()
            % q
            == 0
    })
}

/// Whether every element of F_p^k fixing at `a` fixes `x`.
pub fn is_support(p: Prime, a: &[Vector], x: &Hf, horizon: usize) -> bool {
    dense_group(p, horizon)
        .iter()
        .filter(|g| fixes_at(g, a))
        .all(|g| act_hf(x, g).map(|y| y == *x).unwrap_or(false))
}

/// All `p^|gens|` linear combinations of `gens`.
pub fn span_elements(p: Prime, gens: &[Vector]) -> BTreeSet<Vector> {
    let q = p.get() as u64;
    let n = q.pow(gens.len() as u32);
    (0..n)
        .map(|mut m| {
            let mut v = Vector::zero(p);
            for g in gens {
                let c = m % q;
                m /= q;
                for _ in 0..c {
                    v = v.add(g);
                }
            }
            v
        })
        .collect()
}

/// `log*_p` by iterating `n ↦ ⌈log_p n⌉` (least `m` with `p^m ≥ n`) until
/// the value is at most 1.
pub fn log_star_iterated(n: u64, p: Prime) -> u32 {
    assert!(n >= 1);
    let q = p.get() as u128;
    let mut n = n as u128;
    let mut k = 0;
    while n > 1 {
        let mut m = 0u128;
        let mut pw = 1u128;
        while pw < n {
            pw *= q;
            m += 1;
        }
        n = m;
        k += 1;
    }
    k
}

/// Independently re-checks an extraction over the window `xs`: `n_0 = 0`,
/// each `n_{i+1}` is the least index above `n_i` meeting both selection
/// conditions, and `d_{n_i}` over `x_{n_0..=n_i}` is at most `i + 1`.
pub fn check_extraction(p: Prime, xs: &[Vector], indices: &[usize]) -> Result<(), String> {
    if indices.first() != Some(&0) {
        return Err("n_0 must be 0".into());
    }
    let valid = |i: usize, ni: usize, n: usize| -> bool {
        log_star_iterated(n as u64, p) as usize > i + 1
            && xs[n..]
                .iter()
                .all(|x| project_prefix(x, ni) == project_prefix(&xs[n], ni))
    };
    for i in 0..indices.len().saturating_sub(1) {
        let (ni, next) = (indices[i], indices[i + 1]);
        if next >= xs.len() || next <= ni {
            return Err(format!("n_{} = {next} out of order or range", i + 1));
        }
        if !valid(i, ni, next) {
            return Err(format!("n_{} = {next} violates a selection condition", i + 1));
        }
        if let Some(smaller) = (ni + 1..next).find(|&n| valid(i, ni, n)) {
            return Err(format!("n_{} = {next} is not least; {smaller} also works", i + 1));
        }
    }
    for (i, &ni) in indices.iter().enumerate() {
        let prefixes: BTreeSet<Vector> = indices[..=i]
            .iter()
            .map(|&n| project_prefix(&xs[n], ni))
            .collect();
        if prefixes.len() > i + 1 {
            return Err(format!("d_{{n_{i}}} = {} exceeds {}", prefixes.len(), i + 1));
        }
    }
    Ok(())
}
