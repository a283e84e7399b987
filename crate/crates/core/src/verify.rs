//! Property suites run by `permlab verify-all`.
//!
//! Each suite owns its state and derives randomness from the configured
//! seed through [`rng_for`], so reports are byte-identical across runs and
//! across sequential or parallel execution.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::action::{
    act_atom, act_hf, compose, fixes_at, kuratowski_decode_tuple, kuratowski_encode, orbit,
    pointwise_stabilizer, stabilizer_in, Atom, GroupElement, Hf, PartitionCell,
};
use crate::counterexample::{build_tower, level_swap, refute_pcf_with, swap_effect};
use crate::error::Result;
use crate::exec::Exec;
use crate::fp::{complement_within, project_prefix, Prime, Subspace, Vector};
use crate::oracle;
use crate::random::{
    random_hf, random_nonzero_vector, random_reduction_instance, random_stabilizing_stream,
    random_tuple, random_vector, rng_for,
};
use crate::supports::{find_small_support, is_support, ReductionInput};
use crate::thin::{
    certify_thin, check_span_density_bound, density, extract_thin_subsequence, log_star,
    prefix_sum_stream, ThinCertificate, VectorStream,
};

/// Settings shared by every suite.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub p: Prime,
    pub horizon: usize,
    pub seed: u64,
    pub cap_enum: u128,
    pub cap_tower: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            p: Prime::TWO,
            horizon: 3,
            seed: 42,
            cap_enum: crate::action::DEFAULT_ENUM_CAP,
            cap_tower: crate::counterexample::DEFAULT_TOWER_CAP,
            exec: Exec::default(),
        }
    }
}

impl VerifyConfig {
    /// `base` plus the configured prime, deduplicated and sorted.
    fn primes(&self, base: &[Prime]) -> Vec<Prime> {
        let mut ps: BTreeSet<Prime> = base.iter().copied().collect();
        ps.insert(self.p);
        ps.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

struct Suite {
    name: &'static str,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records a check whose computation may fail; errors count as failures.
    fn check_result(&mut self, name: impl Into<String>, r: Result<(bool, String)>) {
        match r {
            Ok((ok, d)) => self.check(name, ok, d),
            Err(e) => self.check(name, false, format!("error: {e}")),
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
        }
    }
}

pub type SuiteFn = fn(&VerifyConfig) -> SuiteReport;

/// All suites, sorted by name.
pub fn suites() -> Vec<(&'static str, SuiteFn)> {
    let mut v: Vec<(&'static str, SuiteFn)> = vec![
        ("ac1-action-laws", action_laws),
        ("ac2-stabilizers-and-spans", stabilizers_and_spans),
        ("ac3-support-reduction", support_reduction),
        ("ac4-thin-ideal", thin_ideal),
        ("ac5-extraction", extraction),
        ("ac6-counterexample", counterexample),
        ("ac7-kuratowski", kuratowski),
        ("fp-core", fp_core),
        ("supports-properties", supports_properties),
    ];
    v.sort_by_key(|(n, _)| *n);
    v
}

/// Runs every suite (concurrently under [`Exec::Parallel`]).
pub fn verify_all(cfg: &VerifyConfig) -> VerifyReport {
    let all = suites();
    let suites = cfg.exec.map_slice(&all, |(_, f)| f(cfg));
    VerifyReport {
        config: cfg.clone(),
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}

fn count_true(v: &[bool]) -> usize {
    v.iter().filter(|&&b| b).count()
}

/// Every subspace of F_p^k, found as spans of up to `k` dense vectors.
fn all_subspaces(p: Prime, k: usize) -> Vec<Subspace> {
    let vs = oracle::dense_vectors(p, k);
    let mut seen: BTreeSet<Vec<Vector>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![Subspace::zero(p)];
    seen.insert(Vec::new());
    out.push(Subspace::zero(p));
    while let Some(s) = frontier.pop() {
        for v in &vs {
            let mut t = s.clone();
            if t.insert(v) && seen.insert(t.basis().to_vec()) {
                out.push(t.clone());
                frontier.push(t);
            }
        }
    }
    out.sort_by(|a, b| (a.dim(), a.basis()).cmp(&(b.dim(), b.basis())));
    out
}

fn fp_core(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("fp-core");
    let primes = cfg.primes(&[Prime::TWO, Prime::THREE, Prime::FIVE]);

    for &p in &primes {
        let ok = cfg.exec.map_range(100, |t| {
            let mut rng = rng_for(cfg.seed, "fp-canon", p.get() as u64 * 1000 + t as u64);
            let n = rng.gen_range(1..=6);
            let mut gens: Vec<Vector> = (0..n).map(|_| random_vector(&mut rng, p, 6)).collect();
            let a = Subspace::span(p, &gens).expect("same prime");
            gens.shuffle(&mut rng);
            let b = Subspace::span(p, &gens).expect("same prime");
            a == b && a.dim() <= n
        });
        s.check(
            format!("echelon canonicity p={p}"),
            ok.iter().all(|&b| b),
            format!("{}/100 shuffled generator lists gave identical bases", count_true(&ok)),
        );
    }

    for p in [Prime::TWO, Prime::THREE] {
        let vs = oracle::dense_vectors(p, 4);
        let ok = cfg.exec.all_range(vs.len(), |i| {
            vs.iter().all(|v| {
                (0..=4).all(|k| {
                    project_prefix(&vs[i].add(v), k)
                        == project_prefix(&vs[i], k).add(&project_prefix(v, k))
                })
            })
        });
        s.check(
            format!("project_prefix linear p={p}"),
            ok,
            format!("{} vector pairs, k = 0..=4", vs.len() * vs.len()),
        );
    }

    let p = Prime::TWO;
    let subs = all_subspaces(p, 4);
    let all = oracle::dense_vectors(p, 4);
    let ok = cfg.exec.map_slice(&subs, |sub| {
        let t = complement_within(sub, 4).expect("within horizon");
        let meet_zero = all
            .iter()
            .filter(|v| sub.contains(v) && t.contains(v))
            .all(|v| v.is_zero());
        let sum = sub.join(&t).expect("same prime");
        meet_zero && all.iter().all(|v| sum.contains(v))
    });
    s.check(
        "complement_within over every subspace of F_2^4",
        subs.len() == 67 && ok.iter().all(|&b| b),
        format!("{} subspaces, {} complements valid", subs.len(), count_true(&ok)),
    );

    for &p in &primes {
        let ok = cfg.exec.map_range(30, |t| {
            let mut rng = rng_for(cfg.seed, "fp-span", p.get() as u64 * 1000 + t as u64);
            let n = rng.gen_range(0..=3);
            let gens: Vec<Vector> = (0..n).map(|_| random_vector(&mut rng, p, 4)).collect();
            let span = Subspace::span(p, &gens).expect("same prime");
            let brute = oracle::span_elements(p, &gens);
            oracle::dense_vectors(p, 4)
                .iter()
                .all(|v| span.contains(v) == brute.contains(v))
        });
        s.check(
            format!("in_span matches enumeration p={p}"),
            ok.iter().all(|&b| b),
            format!("{}/30 generator sets agree on all of F_{p}^4", count_true(&ok)),
        );
    }
    s.finish()
}

fn action_laws(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("ac1-action-laws");
    let k = cfg.horizon;
    const OBJECTS: usize = 500;
    for p in [Prime::TWO, Prime::THREE] {
        let group = oracle::dense_group(p, k);
        let objects: Vec<Hf> = (0..OBJECTS)
            .map(|i| random_hf(&mut rng_for(cfg.seed, "ac1-obj", p.get() as u64 * 10_000 + i as u64), p, k, 3))
            .collect();
        let id = GroupElement::identity(p, k);
        let ok = cfg.exec.map_slice(&objects, |x| {
            if act_hf(x, &id).ok().as_ref() != Some(x) {
                return false;
            }
            let images: Vec<Hf> = group.iter().map(|g| act_hf(x, g).expect("in horizon")).collect();
            group.iter().enumerate().all(|(gi, g)| {
                group.iter().all(|h| {
                    let gh = compose(g, h).expect("same shape");
                    let lhs = act_hf(&images[gi], h).expect("in horizon");
                    lhs == act_hf(x, &gh).expect("in horizon")
                        && lhs == act_hf(&act_hf(x, h).expect("in horizon"), g).expect("in horizon")
                })
            })
        });
        s.check(
            format!("identity, composition and commutation of the action p={p} k={k}"),
            ok.iter().all(|&b| b),
            format!(
                "{}/{OBJECTS} random objects over all {} ordered pairs of group elements",
                count_true(&ok),
                group.len() * group.len()
            ),
        );
        let commutes = group
            .iter()
            .all(|g| group.iter().all(|h| compose(g, h).ok() == compose(h, g).ok()));
        s.check(
            format!("group is abelian p={p} k={k}"),
            commutes,
            format!("{} pairs", group.len() * group.len()),
        );
    }
    for p in [Prime::TWO, Prime::THREE, Prime::FIVE] {
        let group = oracle::dense_group(p, k);
        let ok = group.iter().all(|g| {
            let mut acc = GroupElement::identity(p, k);
            for j in 1..=p.get() {
                acc = compose(&acc, g).expect("same shape");
                let is_id = acc.is_identity();
                let expect_id = j == p.get() || g.is_identity();
                if is_id != expect_id {
                    return false;
                }
            }
            true
        });
        s.check(
            format!("non-identity elements have order p, p={p} k={k}"),
            ok,
            format!("{} elements", group.len()),
        );
    }
    s.finish()
}

fn stabilizers_and_spans(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("ac2-stabilizers-and-spans");
    let k = cfg.horizon;
    for p in [Prime::TWO, Prime::THREE] {
        let group = oracle::dense_group(p, k);
        let ws = oracle::dense_vectors(p, k);
        let ok = cfg.exec.map_slice(&ws, |w| {
            let cell: Vec<Atom> = PartitionCell::new(w.clone()).members().collect();
            group.iter().all(|g| {
                let fa = fixes_at(g, [w]).expect("in horizon");
                let fixes_zero = act_atom(&cell[0], g).expect("in horizon") == cell[0];
                let fixes_all = cell.iter().all(|a| act_atom(a, g).expect("in horizon") == *a);
                let fixes_any = cell.iter().any(|a| act_atom(a, g).expect("in horizon") == *a);
                fa == fixes_zero && fa == fixes_all && fa == fixes_any
            })
        });
        s.check(
            format!("fixing one atom of U_w iff fixing all, p={p} k={k}"),
            ok.iter().all(|&b| b),
            format!("{} cells × {} group elements", ws.len(), group.len()),
        );

        let full = Subspace::full(p, k);
        let ok = cfg.exec.map_slice(&ws, |w| {
            let target = pointwise_stabilizer(p, [w], k).expect("in horizon");
            PartitionCell::new(w.clone()).members().all(|a| {
                stabilizer_in(&Hf::Atom(a), &full, k, cfg.cap_enum).ok().as_ref() == Some(&target)
            })
        });
        s.check(
            format!("G_(w) is the stabilizer of each atom of U_w, p={p} k={k}"),
            ok.iter().all(|&b| b),
            format!("{} cells", ws.len()),
        );

        // Over every subspace, a random generating set, its
        // echelon basis and its full element list give the same verdict.
        let subs = all_subspaces(p, k);
        let ok = cfg.exec.map_range(subs.len() * 8, |t| {
            let sub = &subs[t / 8];
            let mut rng = rng_for(cfg.seed, "ac2-r1", p.get() as u64 * 100_000 + t as u64);
            let elems = sub.elements(cfg.cap_enum).expect("small");
            // A generating set: the basis mixed with random combinations.
            let mut gens: Vec<Vector> = sub.basis().to_vec();
            for _ in 0..rng.gen_range(0..3) {
                gens.push(elems.choose(&mut rng).expect("has 0").clone());
            }
            for i in 0..gens.len() {
                let j = rng.gen_range(0..gens.len());
                if i != j {
                    let c = rng.gen_range(1..p.get()) as u64;
                    let add = gens[j].scale(crate::fp::Fp::new(c, p));
                    gens[i] = gens[i].add(&add);
                }
            }
            if Subspace::span(p, &gens).ok().as_ref() != Some(sub) {
                return false;
            }
            let x = random_hf(&mut rng, p, k, 2);
            let v_gens = is_support(p, &gens, &x, k).expect("in horizon");
            let v_basis = is_support(p, sub.basis(), &x, k).expect("in horizon");
            let v_all = is_support(p, &elems, &x, k).expect("in horizon");
            let v_brute = oracle::is_support(p, &gens, &x, k);
            v_gens == v_basis && v_basis == v_all && v_all == v_brute
        });
        s.check(
            format!("A supports x iff Span(A) does, p={p} k={k}"),
            ok.iter().all(|&b| b),
            format!("{} subspaces × 8 random objects", subs.len()),
        );
    }
    s.finish()
}

/// The worked matching example: `x = {<(j+s, e0), (j, e1)>}` with `s = 0`
/// and `X` the set of all shifts.
pub fn matching_fixture(p: Prime) -> (Hf, Hf) {
    let e = |i| Vector::unit(p, i);
    let m = |shift: u64| {
        Hf::set((0..p.get() as u64).map(|j| Hf::tuple([Hf::atom(j + shift, e(0)), Hf::atom(j, e(1))])))
    };
    (m(0), Hf::set((0..p.get() as u64).map(m)))
}

fn support_reduction(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("ac3-support-reduction");
    const INSTANCES: usize = 100;
    const HORIZON: usize = 4;
    for p in cfg.primes(&[Prime::TWO, Prime::THREE, Prime::FIVE]) {
        let results = cfg.exec.map_range(INSTANCES, |t| -> Result<(bool, usize)> {
            let mut rng = rng_for(cfg.seed, "ac3", p.get() as u64 * 1000 + t as u64);
            let inst = random_reduction_instance(&mut rng, p, HORIZON, cfg.cap_enum)?;
            let input = ReductionInput {
                p,
                x: &inst.x,
                big_x: &inst.big_x,
                a: &inst.a,
                horizon: HORIZON,
                cap: cfg.cap_enum,
            };
            let out = find_small_support(&input, &inst.b)?;
            let sup: Vec<Vector> = out.support.iter().cloned().collect();
            let ok = out.b_final.len() <= 1
                && is_support(p, &sup, &inst.x, HORIZON)?
                && oracle::is_support(p, &sup, &inst.x, HORIZON);
            let main_steps = out.trace.steps.iter().filter(|st| !st.shortcut).count();
            Ok((ok, main_steps))
        });
        let passed = results.iter().filter(|r| matches!(r, Ok((true, _)))).count();
        let main_steps: usize = results.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.1).sum();
        let first_err = results.iter().find_map(|r| r.as_ref().err()).map(|e| e.to_string());
        s.check(
            format!("reduced supports pass the full-enumeration oracle p={p}"),
            passed == INSTANCES && first_err.is_none(),
            format!(
                "{passed}/{INSTANCES} instances, {main_steps} main-branch steps{}",
                first_err.map(|e| format!("; first error: {e}")).unwrap_or_default()
            ),
        );
    }

    for (p, expected) in [(Prime::TWO, "0:1,1:1"), (Prime::THREE, "0:1,1:2")] {
        let (x, big_x) = matching_fixture(p);
        let input = ReductionInput { p, x: &x, big_x: &big_x, a: &[], horizon: 2, cap: cfg.cap_enum };
        let r = find_small_support(&input, &[Vector::unit(p, 0), Vector::unit(p, 1)]).map(|out| {
            let got: Vec<String> = out.b_final.iter().map(|b| b.to_string()).collect();
            (got == [expected], format!("b = {}", got.join(";")))
        });
        s.check_result(format!("matching fixture p={p} gives b = {expected}"), r);
    }
    s.finish()
}

fn supports_properties(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("supports-properties");
    let k = cfg.horizon;
    for p in [Prime::TWO, Prime::THREE] {
        let ok = cfg.exec.map_range(200, |t| {
            let mut rng = rng_for(cfg.seed, "sp-mono", p.get() as u64 * 1000 + t as u64);
            let a: Vec<Vector> = (0..rng.gen_range(0..3)).map(|_| random_vector(&mut rng, p, k)).collect();
            let mut a2 = a.clone();
            a2.extend((0..rng.gen_range(1..3)).map(|_| random_vector(&mut rng, p, k)));
            let x = random_hf(&mut rng, p, k, 2);
            !is_support(p, &a, &x, k).expect("in horizon") || is_support(p, &a2, &x, k).expect("in horizon")
        });
        s.check(
            format!("supports are upward closed p={p}"),
            ok.iter().all(|&b| b),
            format!("{}/200 random (A ⊆ A', x)", count_true(&ok)),
        );

        // Orbits of G_(A) have p-power size; orbits of size ≤ p padded with
        // G_(A)-fixed objects give p-element sets supported by A, inside
        // which every orbit has size 1 or p.
        let outcomes = cfg.exec.map_range(300, |t| -> Option<bool> {
            let mut rng = rng_for(cfg.seed, "sp-orbit", p.get() as u64 * 1000 + t as u64);
            let a: Vec<Vector> = (0..rng.gen_range(0..3)).map(|_| random_nonzero_vector(&mut rng, p, k)).collect();
            let g_a = pointwise_stabilizer(p, &a, k).expect("in horizon");
            let y = random_hf(&mut rng, p, k, 2);
            let o = orbit(&y, &g_a, k, cfg.cap_enum).expect("small");
            let is_p_power = (0..=k as u32).any(|e| o.len() == (p.get() as usize).pow(e));
            if !is_p_power {
                return Some(false);
            }
            if o.len() > p.get() as usize {
                return None;
            }
            let mut members: BTreeSet<Hf> = o;
            let mut tries = 0;
            while members.len() < p.get() as usize && tries < 50 {
                members.insert(PartitionCell::new(random_vector(&mut rng, p, k)).to_hf());
                tries += 1;
            }
            if members.len() != p.get() as usize {
                return None;
            }
            let big_x = Hf::Set(members.clone());
            if !is_support(p, &a, &big_x, k).expect("in horizon") {
                return Some(false);
            }
            Some(members.iter().all(|x| {
                let n = orbit(x, &g_a, k, cfg.cap_enum).expect("small").len();
                n == 1 || n == p.get() as usize
            }))
        });
        let exercised = outcomes.iter().filter(|o| o.is_some()).count();
        let failures = outcomes.iter().filter(|o| **o == Some(false)).count();
        s.check(
            format!("orbit dichotomy inside p-element supported sets p={p} k={k}"),
            failures == 0 && exercised > 0,
            format!("{exercised} p-element sets examined, {failures} failures"),
        );
    }
    s.finish()
}

fn thin_ideal(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("ac4-thin-ideal");
    const SETS: usize = 500;
    for p in [Prime::TWO, Prime::THREE] {
        let results = cfg.exec.map_range(SETS, |t| -> Result<[bool; 4]> {
            let mut rng = rng_for(cfg.seed, "ac4", p.get() as u64 * 10_000 + t as u64);
            let n = rng.gen_range(1..=5);
            let a: Vec<Vector> = (0..n).map(|_| random_vector(&mut rng, p, 10)).collect();
            let b: Vec<Vector> = (0..rng.gen_range(1..=5)).map(|_| random_vector(&mut rng, p, 10)).collect();
            let union: Vec<Vector> = a.iter().chain(&b).cloned().collect();
            let span_brute = oracle::span_elements(p, &a);
            let mut flags = [true; 4];
            let mut prev = 0;
            for k in 0..=8 {
                let dk = density(&a, k);
                flags[0] &= density(&union, k) <= dk + density(&b, k);
                flags[3] &= dk >= prev;
                prev = dk;
                let c = check_span_density_bound(p, &a, k, cfg.cap_enum)?;
                flags[1] &= c.ok && c.lhs == density(&span_brute, k) as u128;
                flags[2] &= log_star(c.lhs, p)? <= 1 + log_star(dk as u128, p)?;
            }
            Ok(flags)
        });
        let names = [
            "d_k(A ∪ B) ≤ d_k(A) + d_k(B)",
            "d_k(Span A) ≤ p^{d_k(A)}",
            "log*(d_k(Span A)) ≤ 1 + log*(d_k(A))",
            "d_k(A) non-decreasing in k",
        ];
        for (j, name) in names.iter().enumerate() {
            let good = results.iter().filter(|r| matches!(r, Ok(f) if f[j])).count();
            s.check(
                format!("{name}, p={p}"),
                good == SETS,
                format!("{good}/{SETS} random sets, k = 0..=8"),
            );
        }
    }

    for p in [Prime::TWO, Prime::THREE, Prime::FIVE] {
        const N: u64 = 1_000_000;
        let bad = cfg
            .exec
            .map_range(N as usize, |i| {
                let n = i as u64 + 1;
                log_star(n as u128, p).ok() != Some(oracle::log_star_iterated(n, p))
            })
            .into_iter()
            .filter(|&b| b)
            .count();
        let monotone = (1..N).all(|n| {
            log_star(n as u128, p).unwrap_or(u32::MAX) <= log_star(n as u128 + 1, p).unwrap_or(0)
        });
        s.check(
            format!("tower log* equals iterated log* for n ≤ 10^6, p={p}"),
            bad == 0 && monotone,
            format!("{bad} disagreements, monotone = {monotone}"),
        );
    }
    s.finish()
}

fn extraction(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("ac5-extraction");
    for (p, count, expected) in [
        (Prime::TWO, 3, vec![0, 3, 5]),
        (Prime::TWO, 4, vec![0, 3, 5, 17]),
        (Prime::THREE, 3, vec![0, 4, 28]),
    ] {
        let mut stream = VectorStream::new(p, prefix_sum_stream(p), 4096);
        let r = extract_thin_subsequence(&mut stream, count, 128).map(|ex| {
            let valid = certify_thin(&ex.certificate).valid;
            (ex.indices == expected && valid, format!("indices {:?}, certificate valid = {valid}", ex.indices))
        });
        s.check_result(format!("canonical stream p={p} count={count} gives {expected:?}"), r);
    }

    const STREAMS: usize = 100;
    const WINDOW: usize = 200;
    let results = cfg.exec.map_range(STREAMS, |t| -> Result<bool> {
        let mut rng = rng_for(cfg.seed, "ac5", t as u64);
        let (p, count) = if t % 2 == 0 { (Prime::TWO, 4) } else { (Prime::THREE, 3) };
        let xs = random_stabilizing_stream(&mut rng, p, WINDOW);
        let mut stream = VectorStream::new(p, xs.clone().into_iter(), WINDOW);
        let ex = extract_thin_subsequence(&mut stream, count, WINDOW)?;
        let cert_ok = certify_thin(&ex.certificate).valid;
        let bound_ok = match &ex.certificate {
            ThinCertificate::ExtractedStream { checkpoints, .. } => {
                checkpoints.iter().enumerate().all(|(i, c)| c.d <= i + 1)
            }
            _ => false,
        };
        Ok(cert_ok && bound_ok && oracle::check_extraction(p, &xs, &ex.indices).is_ok())
    });
    let good = results.iter().filter(|r| matches!(r, Ok(true))).count();
    let first_err = results.iter().find_map(|r| r.as_ref().err()).map(|e| e.to_string());
    s.check(
        "random stabilizing streams: certificates valid with d_{n_i} ≤ i+1",
        good == STREAMS,
        format!(
            "{good}/{STREAMS} streams re-verified by independent scan{}",
            first_err.map(|e| format!("; first error: {e}")).unwrap_or_default()
        ),
    );
    s.finish()
}

fn counterexample(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("ac6-counterexample");
    let max_n = 8.min(cfg.cap_tower);
    let towers: Vec<_> = (1..=max_n).map(|n| build_tower(n, cfg.cap_tower)).collect();

    let sizes_ok = towers.iter().all(|t| {
        t.as_ref().is_ok_and(|t| {
            (0..t.height()).all(|i| t.level_set(i).as_set().is_some_and(|x| x.len() == 2))
        })
    });
    s.check(
        format!("|X_i| = 2 and ∅ supports X_i for N ≤ {max_n}"),
        sizes_ok,
        format!("{} towers", towers.len()),
    );

    let mut swaps = 0;
    let swap_ok = towers.iter().all(|t| {
        let Ok(t) = t else { return false };
        (0..t.height()).all(|i| {
            swaps += 1;
            swap_effect(t, i).is_ok_and(|fx| fx.iter().all(|l| l.swapped == (l.n >= i)))
        })
    });
    s.check(
        format!("swap at level i exchanges exactly the levels n ≥ i, N ≤ {max_n}"),
        swap_ok,
        format!("{swaps} (N, i) pairs"),
    );

    let mut refuted = 0;
    let mut failed = Vec::new();
    for t in towers.iter().take(5).flatten() {
        let n = t.height();
        for mask in 0u32..(1 << n) - 1 {
            let set: BTreeSet<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            match refute_pcf_with(t, &set, cfg.exec) {
                Ok(r) if r.levels.iter().all(|l| l.moved) => refuted += 1,
                Ok(_) => failed.push(format!("N={n} S={set:?}: unmoved level")),
                Err(e) => failed.push(format!("N={n} S={set:?}: {e}")),
            }
        }
    }
    s.check(
        "refute_pcf succeeds for every proper S, N ≤ 5",
        failed.is_empty() && refuted > 0,
        format!("{refuted} sets refuted{}", failed.first().map(|f| format!("; {f}")).unwrap_or_default()),
    );

    let comp_ok = towers.iter().take(5).flatten().all(|t| {
        let n = t.height();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (gi, gj) = (level_swap(t, i).expect("in range"), level_swap(t, j).expect("in range"));
                let gij = compose(&gi, &gj).expect("same shape");
                t.levels().flatten().all(|x| {
                    let stepwise = act_hf(&act_hf(x, &gi).expect("ok"), &gj).expect("ok");
                    stepwise == act_hf(x, &gij).expect("ok")
                })
            })
        })
    });
    s.check("swapping at i then j equals acting by the composite", comp_ok, "N ≤ 5, all i, j");
    s.finish()
}

fn kuratowski(cfg: &VerifyConfig) -> SuiteReport {
    let mut s = Suite::new("ac7-kuratowski");
    const TUPLES: usize = 200;
    let k = cfg.horizon;
    let ok = cfg.exec.map_range(TUPLES, |t| {
        let p = if t % 2 == 0 { Prime::TWO } else { Prime::THREE };
        let mut rng = rng_for(cfg.seed, "ac7", t as u64);
        let tup = random_tuple(&mut rng, p, k);
        let g = crate::random::random_group_element(&mut rng, p, k);
        let moved = act_hf(&tup, &g).expect("in horizon");
        let enc = kuratowski_encode(&tup);
        let equivariant = kuratowski_encode(&moved) == act_hf(&enc, &g).expect("in horizon");
        let Hf::Tuple(parts) = &moved else { return false };
        let decoded = kuratowski_decode_tuple(&act_hf(&enc, &g).expect("in horizon"), parts.len());
        let expected: Vec<Hf> = parts.iter().map(kuratowski_encode).collect();
        equivariant && decoded.ok() == Some(expected)
    });
    s.check(
        "act_hf commutes with the Kuratowski encoder and decoder",
        ok.iter().all(|&b| b),
        format!("{}/{TUPLES} random tuples", count_true(&ok)),
    );
    s.finish()
}

/// Per-suite pass/fail summary keyed by suite name.
pub fn summary(report: &VerifyReport) -> BTreeMap<String, bool> {
    report.suites.iter().map(|s| (s.name.clone(), s.passed)).collect()
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<SuiteReport> {
    suites().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: F_2^4 has 1+15+35+15+1, F_3^3 has 1+13+13+1.
        assert_eq!(all_subspaces(Prime::TWO, 4).len(), 67);
        assert_eq!(all_subspaces(Prime::THREE, 3).len(), 28);
    }

    #[test]
    fn suites_are_sorted_and_unique() {
        let names: Vec<_> = suites().into_iter().map(|(n, _)| n).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
    }

    #[test]
    fn subset_sums_use_order_independent_rngs() {
        let cfg = VerifyConfig::default();
        let seq = VerifyConfig { exec: Exec::Sequential, ..cfg.clone() };
        let a = serde_json::to_string(&kuratowski(&cfg)).unwrap();
        let b = serde_json::to_string(&kuratowski(&seq)).unwrap();
        assert_eq!(a, b);
    }
}
