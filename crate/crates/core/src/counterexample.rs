//! The pair tower `X_0 = A_0`, `X_{i+1} = P(X_i, A_{i+1})` over the cells
//! `A_i = U_{e_i}` with p = 2, and the refutation of small-support partial
//! choice functions on it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::action::{act_hf, GroupElement, Hf, PartitionCell};
use crate::error::{usage, Error, Result};
use crate::exec::Exec;
use crate::fp::{Prime, Vector};
use crate::supports::is_support;

/// Default tower height cap.
pub const DEFAULT_TOWER_CAP: usize = 12;

/// The bijections from `from` onto `to`, each encoded as the set of its
/// graph pairs `<a, f(a)>`.
pub fn bijections(from: &BTreeSet<Hf>, to: &BTreeSet<Hf>) -> Result<BTreeSet<Hf>> {
    if from.len() != to.len() {
        return Err(usage("bijections need sets of equal size"));
    }
    if from.len() > 8 {
        return Err(Error::Resource {
            what: "bijection enumeration",
            needed: from.len() as u128,
            cap: 8,
        });
    }
    let src: Vec<&Hf> = from.iter().collect();
    let mut targets: Vec<&Hf> = to.iter().collect();
    let mut out = BTreeSet::new();
    permute(&mut targets, 0, &mut |perm| {
        out.insert(Hf::set(
            src.iter()
                .zip(perm)
                .map(|(a, b)| Hf::tuple([(*a).clone(), (*b).clone()])),
        ));
    });
    Ok(out)
}

fn permute<'a>(items: &mut Vec<&'a Hf>, at: usize, f: &mut impl FnMut(&[&'a Hf])) {
    if at == items.len() {
        f(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, f);
        items.swap(at, i);
    }
}

/// The tower of two-element sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTower {
    cells: Vec<Hf>,
    levels: Vec<[Hf; 2]>,
}

impl PairTower {
    pub const PRIME: Prime = Prime::TWO;

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// The cell `A_i = U_{e_i}`.
    pub fn cell(&self, i: usize) -> &Hf {
        &self.cells[i]
    }

    /// The two elements of `X_i`, in canonical order.
    pub fn level(&self, i: usize) -> &[Hf; 2] {
        &self.levels[i]
    }

    pub fn level_set(&self, i: usize) -> Hf {
        Hf::set(self.levels[i].iter().cloned())
    }

    pub fn levels(&self) -> impl Iterator<Item = &[Hf; 2]> {
        self.levels.iter()
    }
}

/// Builds `X_0, …, X_{n-1}` and checks that the empty set supports each level.
pub fn build_tower(n: usize, cap: usize) -> Result<PairTower> {
    if n == 0 {
        return Err(usage("tower height must be at least 1"));
    }
    if n > cap {
        return Err(Error::Resource {
            what: "tower height",
            needed: n as u128,
            cap: cap as u128,
        });
    }
    let p = PairTower::PRIME;
    let cells: Vec<Hf> = (0..n)
        .map(|i| PartitionCell::new(Vector::unit(p, i)).to_hf())
        .collect();
    let mut levels: Vec<[Hf; 2]> = Vec::with_capacity(n);
    let mut current = cells[0].as_set().expect("cell is a set").clone();
    for i in 0..n {
        if i > 0 {
            current = bijections(&current, cells[i].as_set().expect("cell is a set"))?;
        }
        let pair: Vec<Hf> = current.iter().cloned().collect();
        let pair: [Hf; 2] = pair.try_into().map_err(|v: Vec<Hf>| {
            Error::Consistency(format!("level {i} has {} elements, not 2", v.len()))
        })?;
        if !is_support(p, &[], &Hf::set(pair.iter().cloned()), n)? {
            return Err(Error::Consistency(format!("level {i} is not supported by ∅")));
        }
        levels.push(pair);
    }
    Ok(PairTower { cells, levels })
}

/// What a group element does to one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelEffect {
    pub n: usize,
    pub swapped: bool,
}

/// The element swapping the two atoms of `A_i` and fixing all others.
pub fn level_swap(t: &PairTower, i: usize) -> Result<GroupElement> {
    GroupElement::unit(PairTower::PRIME, t.height(), i)
}

/// Per-level effect of `g`. Errors if `g` neither fixes nor exchanges the
/// elements of some level.
pub fn swap_effect_of(t: &PairTower, g: &GroupElement) -> Result<Vec<LevelEffect>> {
    t.levels
        .iter()
        .enumerate()
        .map(|(n, [u, v])| {
            let (gu, gv) = (act_hf(u, g)?, act_hf(v, g)?);
            if gu == *u && gv == *v {
                Ok(LevelEffect { n, swapped: false })
            } else if gu == *v && gv == *u {
                Ok(LevelEffect { n, swapped: true })
            } else {
                Err(Error::Consistency(format!("g = {g} does not preserve level {n}")))
            }
        })
        .collect()
}

/// Effect of the canonical swap at level `i`.
pub fn swap_effect(t: &PairTower, i: usize) -> Result<Vec<LevelEffect>> {
    if i >= t.height() {
        return Err(usage(format!("level {i} is outside a tower of height {}", t.height())));
    }
    swap_effect_of(t, &level_swap(t, i)?)
}

/// A finite partial choice function on the tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChoiceSelection {
    pub picks: BTreeMap<usize, Hf>,
}

impl ChoiceSelection {
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.picks.keys().copied()
    }

    pub fn is_valid_for(&self, t: &PairTower) -> bool {
        self.picks
            .iter()
            .all(|(&i, x)| i < t.height() && t.level(i).contains(x))
    }

    pub fn act(&self, g: &GroupElement) -> Result<ChoiceSelection> {
        Ok(ChoiceSelection {
            picks: self
                .picks
                .iter()
                .map(|(&i, x)| Ok((i, act_hf(x, g)?)))
                .collect::<Result<_>>()?,
        })
    }
}

/// Witness that both elements of a level move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelWitness {
    pub n: usize,
    pub moved: bool,
    pub before: [Hf; 2],
    pub after: [Hf; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationReport {
    #[serde(rename = "S")]
    pub s: BTreeSet<usize>,
    pub i: usize,
    pub g: GroupElement,
    pub levels: Vec<LevelWitness>,
    /// Number of selections checked, all of which `g` moves.
    #[serde(skip)]
    pub selections_checked: u64,
}

/// Shows that no selection whose domain covers levels `i..N` is fixed by the
/// swap at `i = min({0..N} ∖ S)`, where that swap fixes at `S`.
pub fn refute_pcf(t: &PairTower, s: &BTreeSet<usize>) -> Result<RefutationReport> {
    refute_pcf_with(t, s, Exec::default())
}

pub fn refute_pcf_with(t: &PairTower, s: &BTreeSet<usize>, exec: Exec) -> Result<RefutationReport> {
    let n = t.height();
    if let Some(&bad) = s.iter().find(|&&j| j >= n) {
        return Err(usage(format!("level {bad} is outside a tower of height {n}")));
    }
    let i = (0..n)
        .find(|j| !s.contains(j))
        .ok_or_else(|| usage("S covers every level; no refuting level exists at this height"))?;
    let g = level_swap(t, i)?;
    let p = PairTower::PRIME;
    let s_vecs: Vec<Vector> = s.iter().map(|&j| Vector::unit(p, j)).collect();
    if !crate::action::fixes_at(&g, &s_vecs)? {
        return Err(Error::Consistency(format!("swap at {i} does not fix at S")));
    }

    // images[level][k] = g applied to the k-th element of the level.
    let images: Vec<[Hf; 2]> = t
        .levels
        .iter()
        .map(|[u, v]| Ok([act_hf(u, &g)?, act_hf(v, &g)?]))
        .collect::<Result<_>>()?;
    let moved: Vec<[bool; 2]> = t
        .levels
        .iter()
        .zip(&images)
        .map(|(l, im)| [im[0] != l[0], im[1] != l[1]])
        .collect();

    // Levels below i: absent or either element (3 options each); levels
    // i.. are always present with either element.
    let below = 3u64.pow(i as u32);
    let above = 1u64 << (n - i);
    let total = below * above;
    if total > usize::MAX as u64 {
        return Err(Error::Resource {
            what: "selection enumeration",
            needed: total as u128,
            cap: usize::MAX as u128,
        });
    }
    let all_moved = exec.all_range(total as usize, |idx| {
        let idx = idx as u64;
        let (mut lo, mut hi) = (idx % below, idx / below);
        let mut any = false;
        for (level, m) in moved.iter().enumerate() {
            let choice = if level < i {
                let c = lo % 3;
                lo /= 3;
                if c == 2 {
                    continue;
                }
                c
            } else {
                let c = hi & 1;
                hi >>= 1;
                c
            };
            any |= m[choice as usize];
        }
        any
    });
    if !all_moved {
        return Err(Error::Consistency(format!(
            "some selection covering levels {i}..{n} is fixed by the swap at {i}"
        )));
    }

    let levels = (i..n)
        .map(|lvl| LevelWitness {
            n: lvl,
            moved: moved[lvl][0] && moved[lvl][1],
            before: t.levels[lvl].clone(),
            after: images[lvl].clone(),
        })
        .collect::<Vec<_>>();
    if let Some(w) = levels.iter().find(|w| !w.moved) {
        return Err(Error::Consistency(format!("level {} is not moved", w.n)));
    }
    Ok(RefutationReport {
        s: s.clone(),
        i,
        g,
        levels,
        selections_checked: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let t = build_tower(1, DEFAULT_TOWER_CAP).unwrap();
        let p = PairTower::PRIME;
        assert_eq!(
            t.level_set(0),
            Hf::set([Hf::atom(0, Vector::unit(p, 0)), Hf::atom(1, Vector::unit(p, 0))])
        );

        let t = build_tower(2, DEFAULT_TOWER_CAP).unwrap();
        assert_eq!(t.level_set(1).as_set().unwrap().len(), 2);
        // Each element of X_1 is a bijection A_0 → A_1.
        for f in t.level(1) {
            let graph = f.as_set().unwrap();
            assert_eq!(graph.len(), 2);
        }

        let t = build_tower(4, DEFAULT_TOWER_CAP).unwrap();
        for i in 0..4 {
            assert!(is_support(p, &[], &t.level_set(i), 4).unwrap());
        }

        assert!(build_tower(0, DEFAULT_TOWER_CAP).is_err());
        assert!(matches!(build_tower(13, DEFAULT_TOWER_CAP), Err(Error::Resource { .. })));
    }

    #[test]
    fn bijections_of_pairs_and_triples() {
        let p = Prime::THREE;
        let a = PartitionCell::new(Vector::unit(p, 0)).to_hf();
        let b = PartitionCell::new(Vector::unit(p, 1)).to_hf();
        let bs = bijections(a.as_set().unwrap(), b.as_set().unwrap()).unwrap();
        assert_eq!(bs.len(), 6);
        assert!(bijections(a.as_set().unwrap(), &BTreeSet::new()).is_err());
    }

    #[test]
    fn swap_examples() {
        let t = build_tower(3, DEFAULT_TOWER_CAP).unwrap();
        let swapped = |fx: Vec<LevelEffect>| fx.into_iter().map(|l| l.swapped).collect::<Vec<_>>();
        assert_eq!(swapped(swap_effect(&t, 0).unwrap()), vec![true, true, true]);
        assert_eq!(swapped(swap_effect(&t, 1).unwrap()), vec![false, true, true]);
        let id = GroupElement::identity(PairTower::PRIME, 3);
        assert_eq!(swapped(swap_effect_of(&t, &id).unwrap()), vec![false, false, false]);
        assert!(swap_effect(&t, 3).is_err());
    }

    #[test]
    fn refute_examples() {
        let t = build_tower(4, DEFAULT_TOWER_CAP).unwrap();
        let r = refute_pcf(&t, &BTreeSet::from([0, 2])).unwrap();
        assert_eq!(r.i, 1);
        assert_eq!(r.g.to_string(), "0,1,0,0");
        assert_eq!(r.levels.iter().map(|l| l.n).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(r.selections_checked, 3 * 8);

        let t2 = build_tower(2, DEFAULT_TOWER_CAP).unwrap();
        let r = refute_pcf(&t2, &BTreeSet::new()).unwrap();
        assert_eq!(r.i, 0);
        assert_eq!(r.selections_checked, 4);

        let t1 = build_tower(1, DEFAULT_TOWER_CAP).unwrap();
        let r = refute_pcf(&t1, &BTreeSet::new()).unwrap();
        assert_eq!(r.levels[0].after, [r.levels[0].before[1].clone(), r.levels[0].before[0].clone()]);

        assert!(matches!(refute_pcf(&t2, &BTreeSet::from([0, 1])), Err(Error::Usage(_))));
        assert!(matches!(refute_pcf(&t2, &BTreeSet::from([5])), Err(Error::Usage(_))));
    }

    #[test]
    fn selections_are_moved_when_acted_on_directly() {
        // Cross-check the index arithmetic in refute_pcf by acting on
        // explicit selections for N = 4, S = {0, 2}.
        let t = build_tower(4, DEFAULT_TOWER_CAP).unwrap();
        let g = level_swap(&t, 1).unwrap();
        for lo in 0..3 {
            for hi in 0..8u32 {
                let mut picks = BTreeMap::new();
                if lo < 2 {
                    picks.insert(0, t.level(0)[lo].clone());
                }
                for (k, lvl) in (1..4).enumerate() {
                    picks.insert(lvl, t.level(lvl)[((hi >> k) & 1) as usize].clone());
                }
                let c = ChoiceSelection { picks };
                assert!(c.is_valid_for(&t));
                let moved = c.act(&g).unwrap();
                assert!(moved.is_valid_for(&t));
                assert_ne!(moved, c);
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let t = build_tower(2, DEFAULT_TOWER_CAP).unwrap();
        let r = refute_pcf(&t, &BTreeSet::from([0])).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["S"], serde_json::json!([0]));
        assert_eq!(j["i"], 1);
        assert_eq!(j["g"], "0,1");
        assert_eq!(j["levels"][0]["n"], 1);
        assert_eq!(j["levels"][0]["moved"], true);
        assert!(j["levels"][0]["before"].is_array());
        assert!(j.get("selectionsChecked").is_none());
    }
}
