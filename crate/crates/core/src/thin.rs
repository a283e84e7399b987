//! Iterated logarithms, prefix densities `d_k`, and finite certificates of
//! thinness.
//!
//! Thinness is a limit statement and is never decided from finite data.
//! Certificates only cover the closed-form classes: finite sets, finite
//! unions, spans of finite sets, and subsequences extracted from a
//! coordinatewise stabilizing stream.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::fp::{project_prefix, Prime, Subspace, Vector};

/// `log*_p(n)`: the least `k` with `tower(p, k) ≥ n`, where `tower(p, 0) = 1`
/// and `tower(p, k+1) = p^tower(p, k)`. This is the least `k` for which the
/// `k`-fold iterated base-p logarithm of `n` is at most 1.
pub fn log_star(n: u128, p: Prime) -> Result<u32> {
    if n == 0 {
        return Err(usage("log* is undefined at 0"));
    }
    let mut tower: u128 = 1;
    let mut k = 0;
    while tower < n {
        tower = p.pow_saturating(tower.min(u64::MAX as u128) as u64);
        k += 1;
    }
    Ok(k)
}

/// `d_k(A) = |{ pr_k(w) : w ∈ A }|`.
pub fn density<'a>(a: impl IntoIterator<Item = &'a Vector>, k: usize) -> usize {
    a.into_iter()
        .map(|w| project_prefix(w, k))
        .collect::<BTreeSet<_>>()
        .len()
}

/// `d_k` of a subspace, by enumerating it.
pub fn subspace_density(s: &Subspace, k: usize, cap: u128) -> Result<usize> {
    Ok(density(&s.elements(cap)?, k))
}

/// One row of a [`DensityProfile`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    pub k: usize,
    pub d_k: usize,
    /// `log*_p(d_k)`; absent when `d_k = 0`.
    pub logstar_dk: Option<u32>,
    /// `log*_p(k)`; absent when `k = 0`.
    pub logstar_k: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityProfile {
    pub p: Prime,
    pub rows: Vec<DensityRow>,
}

impl DensityProfile {
    /// Profile of a finite set at the given (strictly increasing) checkpoints.
    pub fn of(p: Prime, a: &[Vector], ks: &[usize]) -> Result<Self> {
        if ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(usage("density checkpoints must be strictly increasing"));
        }
        let rows = ks
            .iter()
            .map(|&k| {
                let d_k = density(a, k);
                Ok(DensityRow {
                    k,
                    d_k,
                    logstar_dk: (d_k > 0).then(|| log_star(d_k as u128, p)).transpose()?,
                    logstar_k: (k > 0).then(|| log_star(k as u128, p)).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityProfile { p, rows })
    }

    /// CSV with columns `k,d_k,logstar_dk,logstar_k`; undefined cells are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "d_k", "logstar_dk", "logstar_k"]).map_err(io)?;
        let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.k.to_string(),
                r.d_k.to_string(),
                opt(r.logstar_dk),
                opt(r.logstar_k),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Both sides of `d_k(Span A) ≤ p^{d_k(A)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpanDensityCheck {
    pub lhs: u128,
    /// Saturates at `u128::MAX`, which keeps the comparison sound.
    pub rhs: u128,
    pub ok: bool,
}

pub fn check_span_density_bound(
    p: Prime,
    a: &[Vector],
    k: usize,
    cap: u128,
) -> Result<SpanDensityCheck> {
    let span = Subspace::span(p, a)?;
    let lhs = subspace_density(&span, k, cap)? as u128;
    let rhs = p.pow_saturating(density(a, k) as u64);
    Ok(SpanDensityCheck {
        lhs,
        rhs,
        ok: lhs <= rhs,
    })
}

/// A source of pairwise distinct vectors whose coordinates are each
/// eventually constant. Single consumer.
pub struct VectorStream<I> {
    inner: I,
    p: Prime,
    seen: HashSet<Vector>,
    order: VecDeque<Vector>,
    window: usize,
}

impl<I: Iterator<Item = Vector>> VectorStream<I> {
    /// Wraps `inner`, checking distinctness against the last `seen_window`
    /// vectors produced.
    pub fn new(p: Prime, inner: I, seen_window: usize) -> Self {
        VectorStream {
            inner,
            p,
            seen: HashSet::new(),
            order: VecDeque::new(),
            window: seen_window.max(1),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// The next vector, or an error if it repeats a recent one.
    pub fn next_checked(&mut self) -> Option<Result<Vector>> {
        let v = self.inner.next()?;
        if let Err(e) = v.check_prime(self.p) {
            return Some(Err(e));
        }
        if !self.seen.insert(v.clone()) {
            return Some(Err(usage(format!(
                "stream repeated vector {}",
                v.to_report_string()
            ))));
        }
        self.order.push_back(v.clone());
        if self.order.len() > self.window {
            let old = self.order.pop_front().expect("non-empty");
            self.seen.remove(&old);
        }
        Some(Ok(v))
    }

    /// Pulls up to `n` vectors.
    pub fn take_window(&mut self, n: usize) -> Result<Vec<Vector>> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            match self.next_checked() {
                Some(v) => out.push(v?),
                None => break,
            }
        }
        Ok(out)
    }
}

/// `x_n = e_0 + … + e_n`.
pub fn prefix_sum_stream(p: Prime) -> impl Iterator<Item = Vector> {
    (0usize..).map(move |n| Vector::from_entries(p, (0..=n).map(|i| (i, 1))))
}

/// One extraction checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// The selected stream index `n_i`.
    pub n: usize,
    /// `d_{n_i}` over the chosen elements `x_{n_0}, …, x_{n_i}`.
    pub d: usize,
    /// `d_{n_i}` over every chosen element, including those after `n_i`.
    pub d_all: usize,
}

/// Finite evidence that a described set is thin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThinCertificate {
    FiniteSet {
        p: Prime,
        vectors: Vec<Vector>,
    },
    FiniteUnion(Vec<ThinCertificate>),
    SpanOfFinite {
        p: Prime,
        generators: Vec<Vector>,
    },
    ExtractedStream {
        p: Prime,
        /// Lookahead window over which stabilization was verified.
        window: usize,
        checkpoints: Vec<Checkpoint>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawCertificate {
    FiniteSet {
        p: u32,
        vectors: Vec<String>,
    },
    FiniteUnion {
        children: Vec<RawCertificate>,
    },
    SpanOfFinite {
        p: u32,
        generators: Vec<String>,
    },
    ExtractedStream {
        p: u32,
        window: usize,
        /// `[n_i, d_bound]`, the bound being `d_{n_i}` over chosen elements.
        checkpoints: Vec<[usize; 2]>,
        /// `[n_i, d]` with `d` counted over every chosen element.
        tail_checkpoints: Vec<[usize; 2]>,
    },
}

impl ThinCertificate {
    fn to_raw(&self) -> RawCertificate {
        let strs = |vs: &[Vector]| vs.iter().map(|v| v.to_string()).collect();
        match self {
            ThinCertificate::FiniteSet { p, vectors } => RawCertificate::FiniteSet {
                p: p.get(),
                vectors: strs(vectors),
            },
            ThinCertificate::FiniteUnion(cs) => RawCertificate::FiniteUnion {
                children: cs.iter().map(|c| c.to_raw()).collect(),
            },
            ThinCertificate::SpanOfFinite { p, generators } => RawCertificate::SpanOfFinite {
                p: p.get(),
                generators: strs(generators),
            },
            ThinCertificate::ExtractedStream {
                p,
                window,
                checkpoints,
            } => RawCertificate::ExtractedStream {
                p: p.get(),
                window: *window,
                checkpoints: checkpoints.iter().map(|c| [c.n, c.d]).collect(),
                tail_checkpoints: checkpoints.iter().map(|c| [c.n, c.d_all]).collect(),
            },
        }
    }

    fn from_raw(raw: RawCertificate) -> Result<Self> {
        let vecs = |p: Prime, vs: Vec<String>| {
            vs.iter()
                .map(|s| Vector::parse(s, p))
                .collect::<Result<Vec<_>>>()
        };
        Ok(match raw {
            RawCertificate::FiniteSet { p, vectors } => {
                let p = Prime::new(p)?;
                ThinCertificate::FiniteSet {
                    p,
                    vectors: vecs(p, vectors)?,
                }
            }
            RawCertificate::FiniteUnion { children } => ThinCertificate::FiniteUnion(
                children
                    .into_iter()
                    .map(ThinCertificate::from_raw)
                    .collect::<Result<_>>()?,
            ),
            RawCertificate::SpanOfFinite { p, generators } => {
                let p = Prime::new(p)?;
                ThinCertificate::SpanOfFinite {
                    p,
                    generators: vecs(p, generators)?,
                }
            }
            RawCertificate::ExtractedStream {
                p,
                window,
                checkpoints,
                tail_checkpoints,
            } => {
                if checkpoints.len() != tail_checkpoints.len()
                    || checkpoints
                        .iter()
                        .zip(&tail_checkpoints)
                        .any(|(a, b)| a[0] != b[0])
                {
                    return Err(Error::Parse(
                        "checkpoints and tail_checkpoints disagree on indices".into(),
                    ));
                }
                ThinCertificate::ExtractedStream {
                    p: Prime::new(p)?,
                    window,
                    checkpoints: checkpoints
                        .iter()
                        .zip(&tail_checkpoints)
                        .map(|(c, t)| Checkpoint {
                            n: c[0],
                            d: c[1],
                            d_all: t[1],
                        })
                        .collect(),
                }
            }
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_raw()).expect("certificate serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: RawCertificate = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("certificate: {e}")))?;
        ThinCertificate::from_raw(raw)
    }
}

impl Serialize for ThinCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

/// Result of [`certify_thin`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub valid: bool,
    pub failures: Vec<String>,
}

/// Checks a certificate's internal arithmetic.
pub fn certify_thin(c: &ThinCertificate) -> Certification {
    let mut failures = Vec::new();
    certify_into(c, "root", &mut failures);
    Certification {
        valid: failures.is_empty(),
        failures,
    }
}

fn certify_into(c: &ThinCertificate, path: &str, failures: &mut Vec<String>) {
    match c {
        ThinCertificate::FiniteSet { p, vectors } | ThinCertificate::SpanOfFinite { p, generators: vectors } => {
            // Finite generating data: d_k is bounded by |A| (or p^|A|).
            if let Some(v) = vectors.iter().find(|v| v.prime() != *p) {
                failures.push(format!("{path}: vector {v:?} is not over F_{p}"));
            }
        }
        ThinCertificate::FiniteUnion(children) => {
            if children.is_empty() {
                failures.push(format!("{path}: empty union"));
            }
            for (i, ch) in children.iter().enumerate() {
                certify_into(ch, &format!("{path}.children[{i}]"), failures);
            }
        }
        ThinCertificate::ExtractedStream { p, checkpoints, .. } => {
            if checkpoints.is_empty() {
                failures.push(format!("{path}: no checkpoints"));
                return;
            }
            if checkpoints[0].n != 0 {
                failures.push(format!("{path}: n_0 = {} must be 0", checkpoints[0].n));
            }
            for (i, c) in checkpoints.iter().enumerate() {
                if c.d > i + 1 {
                    failures.push(format!(
                        "{path}: checkpoint {i}: d_{{n_{i}}} = {} exceeds {}",
                        c.d,
                        i + 1
                    ));
                }
                if c.d_all > i + 2 {
                    failures.push(format!(
                        "{path}: checkpoint {i}: tail density {} exceeds {}",
                        c.d_all,
                        i + 2
                    ));
                }
                if c.d_all < c.d {
                    failures.push(format!(
                        "{path}: checkpoint {i}: tail density {} below chosen density {}",
                        c.d_all, c.d
                    ));
                }
                if i > 0 {
                    let prev = checkpoints[i - 1].n;
                    if c.n <= prev {
                        failures.push(format!(
                            "{path}: checkpoint {i}: n = {} does not exceed {prev}",
                            c.n
                        ));
                    }
                    let ls = log_star(c.n.max(1) as u128, *p).unwrap_or(0) as usize;
                    if c.n == 0 || ls <= i {
                        failures.push(format!(
                            "{path}: checkpoint {i}: log*_{p}({}) = {ls} is not > {i}",
                            c.n
                        ));
                    }
                }
            }
        }
    }
}

/// Output of [`extract_thin_subsequence`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub indices: Vec<usize>,
    pub selected: Vec<Vector>,
    pub certificate: ThinCertificate,
}

/// Selects `n_0 = 0 < n_1 < …` from the first `window` stream elements so
/// that each `n_{i+1}` is the least index with
/// `log*_p(n_{i+1}) > i + 1` and `pr_{n_i}(x_m)` constant for all
/// `m ≥ n_{i+1}` inside the window.
pub fn extract_thin_subsequence<I: Iterator<Item = Vector>>(
    stream: &mut VectorStream<I>,
    count: usize,
    window: usize,
) -> Result<Extraction> {
    if count == 0 {
        return Err(usage("count must be at least 1"));
    }
    let p = stream.prime();
    let xs = stream.take_window(window)?;
    if xs.is_empty() {
        return Err(Error::WindowExhausted {
            checkpoint: 0,
            window,
            coordinate: None,
            reason: "stream is empty".into(),
        });
    }
    let len = xs.len();
    let mut indices = vec![0usize];
    while indices.len() < count {
        let i = indices.len() - 1;
        let ni = indices[i];
        // Least s such that pr_{n_i}(x_m) is the same for every m in [s, len).
        let last = project_prefix(&xs[len - 1], ni);
        let mut stable_from = len - 1;
        while stable_from > 0 && project_prefix(&xs[stable_from - 1], ni) == last {
            stable_from -= 1;
        }
        let mut log_from = ni + 1;
        while log_star(log_from as u128, p)? as usize <= i + 1 {
            log_from += 1;
            if log_from >= len {
                break;
            }
        }
        let next = stable_from.max(log_from).max(ni + 1);
        // The stable tail must extend past the candidate for the check to mean anything.
        if next + 1 >= len {
            let coordinate = (stable_from > 0).then(|| {
                let a = project_prefix(&xs[stable_from - 1], ni);
                (0..ni).find(|&j| a.get(j) != last.get(j)).expect("prefixes differ")
            });
            let reason = if stable_from >= log_from {
                match coordinate {
                    Some(c) => format!("coordinate {c} still changes at stream index {}", stable_from - 1),
                    None => "stable tail too short".into(),
                }
            } else {
                format!("no index in the window has log*_{p} above {}", i + 1)
            };
            return Err(Error::WindowExhausted {
                checkpoint: i + 1,
                window,
                coordinate: if stable_from >= log_from { coordinate } else { None },
                reason,
            });
        }
        indices.push(next);
    }
    let selected: Vec<Vector> = indices.iter().map(|&n| xs[n].clone()).collect();
    let checkpoints = indices
        .iter()
        .enumerate()
        .map(|(i, &n)| Checkpoint {
            n,
            d: density(&selected[..=i], n),
            d_all: density(&selected, n),
        })
        .collect();
    Ok(Extraction {
        indices,
        selected,
        certificate: ThinCertificate::ExtractedStream {
            p,
            window: len,
            checkpoints,
        },
    })
}

/// Greedy pigeonhole pass over a finite batch: keeps, coordinate by
/// coordinate below `depth`, the most common value among surviving indices
/// (ties to the smaller residue). On the returned indices every coordinate
/// below `depth` is constant.
pub fn pigeonhole_stabilize(batch: &[Vector], depth: usize) -> Vec<usize> {
    let mut alive: Vec<usize> = (0..batch.len()).collect();
    for j in 0..depth {
        let mut counts: std::collections::BTreeMap<u32, usize> = Default::default();
        for &i in &alive {
            *counts.entry(batch[i].get(j)).or_default() += 1;
        }
        let Some((&best, _)) = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        else {
            break;
        };
        alive.retain(|&i| batch[i].get(j) == best);
    }
    alive
}
