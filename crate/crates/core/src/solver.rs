//! Bounded exhaustive search for existence certificates.
//!
//! The lemma-side search assigns `f^i_j` position by position (pairs first,
//! then parts) in ascending order, so the first certificate it meets is the
//! lexicographically smallest one. Each assignment is one node; a search
//! that would need more than `budget` nodes stops with [`Outcome::Aborted`].
//!
//! Pruning never discards a feasible completion: every part of `f^i − t^i`
//! is at most `A_1`, every part of `d^i − f^i` at most `B_1`, the committed
//! parts bound the prefix sums of the final unions from below, and the
//! remaining positions bound the reachable totals `|A|` and `|B|`.

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::chain::{interlace_check, sigma_degree_sequence, PolyChain};
use crate::translation::{
    f_to_beta, theorem_to_lemma, verify_theorem_conclusion, BetaCertificate, FCertificate,
    LemmaInstance, TheoremInstance, TranslationError,
};
use crate::Partition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<C> {
    Found(C),
    NoSolution,
    /// The node budget ran out before the search space was exhausted.
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport<C> {
    pub outcome: Outcome<C>,
    pub nodes_explored: u64,
    pub search_bound: u64,
}

impl<C> SolveReport<C> {
    pub fn is_found(&self) -> bool {
        matches!(self.outcome, Outcome::Found(_))
    }

    pub fn certificate(&self) -> Option<&C> {
        match &self.outcome {
            Outcome::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn map<D>(self, f: impl FnOnce(C) -> D) -> SolveReport<D> {
        SolveReport {
            outcome: match self.outcome {
                Outcome::Found(c) => Outcome::Found(f(c)),
                Outcome::NoSolution => Outcome::NoSolution,
                Outcome::Aborted => Outcome::Aborted,
            },
            nodes_explored: self.nodes_explored,
            search_bound: self.search_bound,
        }
    }

    pub fn outcome_name(&self) -> &'static str {
        match self.outcome {
            Outcome::Found(_) => "found",
            Outcome::NoSolution => "none",
            Outcome::Aborted => "aborted",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawReport<C> {
    outcome: String,
    #[serde(default = "none")]
    certificate: Option<C>,
    nodes: u64,
    budget: u64,
}

fn none<C>() -> Option<C> {
    None
}

impl<C: Serialize + Clone> Serialize for SolveReport<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawReport {
            outcome: self.outcome_name().to_owned(),
            certificate: self.certificate().cloned(),
            nodes: self.nodes_explored,
            budget: self.search_bound,
        }
        .serialize(serializer)
    }
}

impl<'de, C: DeserializeOwned> Deserialize<'de> for SolveReport<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawReport::<C>::deserialize(deserializer)?;
        let outcome = match (raw.outcome.as_str(), raw.certificate) {
            ("found", Some(c)) => Outcome::Found(c),
            ("found", None) => {
                return Err(D::Error::custom("outcome \"found\" without a certificate"))
            }
            ("none", _) => Outcome::NoSolution,
            ("aborted", _) => Outcome::Aborted,
            (other, _) => return Err(D::Error::custom(format!("unknown outcome {other:?}"))),
        };
        Ok(SolveReport {
            outcome,
            nodes_explored: raw.nodes,
            search_bound: raw.budget,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    Aborted,
}

fn prefix_sums(p: &Partition) -> Vec<u64> {
    p.parts()
        .iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Sorted (descending) multiset of committed parts.
#[derive(Clone, Default)]
struct Committed {
    parts: Vec<u64>,
    sum: u64,
}

impl Committed {
    fn insert(&mut self, v: u64) {
        self.sum += v;
        if v > 0 {
            let at = self.parts.partition_point(|&x| x >= v);
            self.parts.insert(at, v);
        }
    }

    fn remove(&mut self, v: u64) {
        self.sum -= v;
        if v > 0 {
            let at = self.parts.partition_point(|&x| x > v);
            self.parts.remove(at);
        }
    }

    /// Every prefix sum stays within the target's prefix sums.
    fn fits_under(&self, target_prefix: &[u64], target_total: u64) -> bool {
        let mut acc = 0;
        for (j, &x) in self.parts.iter().enumerate() {
            acc += x;
            if acc > target_prefix.get(j).copied().unwrap_or(target_total) {
                return false;
            }
        }
        true
    }

    fn majorized_by(&self, target_prefix: &[u64], target_total: u64) -> bool {
        self.sum == target_total && self.fits_under(target_prefix, target_total)
    }
}

struct LemmaSearch {
    /// flat position -> (pair index, part index)
    width: usize,
    d: Vec<u64>,
    t: Vec<u64>,
    lo: Vec<u64>,
    hi: Vec<u64>,
    a_prefix: Vec<u64>,
    a_total: u64,
    b_prefix: Vec<u64>,
    b_total: u64,
    // Suffix sums of the least / greatest contribution of positions q.. to
    // the lower (f - t) and upper (d - f) unions.
    lower_min_rest: Vec<u64>,
    lower_max_rest: Vec<u64>,
    upper_min_rest: Vec<u64>,
    upper_max_rest: Vec<u64>,
    f: Vec<u64>,
    lower: Committed,
    upper: Committed,
    nodes: u64,
    budget: u64,
    trace: Option<Sha256>,
}

impl LemmaSearch {
    fn new(inst: &LemmaInstance, budget: u64) -> Self {
        let width = inst.s();
        let (a1, b1) = (inst.a().largest(), inst.b().largest());
        let mut d = Vec::new();
        let mut t = Vec::new();
        for (di, ti) in inst.pairs() {
            d.extend(di.padded(width));
            t.extend(ti.padded(width));
        }
        let total = d.len();
        let lo: Vec<u64> = (0..total)
            .map(|q| t[q].max(d[q].saturating_sub(b1)))
            .collect();
        let hi: Vec<u64> = (0..total).map(|q| d[q].min(t[q] + a1)).collect();
        let suffix = |g: &dyn Fn(usize) -> u64| -> Vec<u64> {
            let mut out = vec![0; total + 1];
            for q in (0..total).rev() {
                out[q] = out[q + 1] + g(q);
            }
            out
        };
        let lower_min_rest = suffix(&|q| lo[q].saturating_sub(t[q]));
        let lower_max_rest = suffix(&|q| hi[q].saturating_sub(t[q]));
        let upper_min_rest = suffix(&|q| d[q].saturating_sub(hi[q]));
        let upper_max_rest = suffix(&|q| d[q].saturating_sub(lo[q]));
        Self {
            width,
            a_prefix: prefix_sums(inst.a()),
            a_total: inst.a().weight(),
            b_prefix: prefix_sums(inst.b()),
            b_total: inst.b().weight(),
            f: vec![0; total],
            d,
            t,
            lo,
            hi,
            lower_min_rest,
            lower_max_rest,
            upper_min_rest,
            upper_max_rest,
            lower: Committed::default(),
            upper: Committed::default(),
            nodes: 0,
            budget,
            trace: None,
        }
    }

    fn positions(&self) -> usize {
        self.f.len()
    }

    /// Admissible values at `q` given the committed prefix.
    fn range(&self, q: usize) -> (u64, u64) {
        let mut hi = self.hi[q];
        if !q.is_multiple_of(self.width) {
            hi = hi.min(self.f[q - 1]);
        }
        (self.lo[q], hi)
    }

    fn feasible(&self, next: usize) -> bool {
        let (ls, us) = (self.lower.sum, self.upper.sum);
        ls + self.lower_min_rest[next] <= self.a_total
            && ls + self.lower_max_rest[next] >= self.a_total
            && us + self.upper_min_rest[next] <= self.b_total
            && us + self.upper_max_rest[next] >= self.b_total
            && self.lower.fits_under(&self.a_prefix, self.a_total)
            && self.upper.fits_under(&self.b_prefix, self.b_total)
    }

    fn leaf(&self) -> bool {
        self.lower.majorized_by(&self.a_prefix, self.a_total)
            && self.upper.majorized_by(&self.b_prefix, self.b_total)
    }

    fn try_value(&mut self, q: usize, v: u64) -> Step {
        if self.nodes >= self.budget {
            return Step::Aborted;
        }
        self.nodes += 1;
        if let Some(h) = self.trace.as_mut() {
            h.update((q as u64).to_le_bytes());
            h.update(v.to_le_bytes());
        }
        self.f[q] = v;
        let (low, up) = (v - self.t[q], self.d[q] - v);
        self.lower.insert(low);
        self.upper.insert(up);
        let step = if self.feasible(q + 1) {
            self.descend(q + 1)
        } else {
            Step::Exhausted
        };
        if step != Step::Found {
            self.lower.remove(low);
            self.upper.remove(up);
        }
        step
    }

    fn descend(&mut self, q: usize) -> Step {
        if q == self.positions() {
            return if self.leaf() {
                Step::Found
            } else {
                Step::Exhausted
            };
        }
        let (lo, hi) = self.range(q);
        for v in lo..=hi {
            match self.try_value(q, v) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }

    fn certificate(&self) -> FCertificate {
        let fs = if self.width == 0 {
            Vec::new()
        } else {
            self.f
                .chunks(self.width)
                .map(|c| Partition::new(c.to_vec()).expect("search keeps parts non-increasing"))
                .collect()
        };
        FCertificate { fs }
    }

    fn report(&self, step: Step) -> SolveReport<FCertificate> {
        SolveReport {
            outcome: match step {
                Step::Found => Outcome::Found(self.certificate()),
                Step::Exhausted => Outcome::NoSolution,
                Step::Aborted => Outcome::Aborted,
            },
            nodes_explored: self.nodes,
            search_bound: self.budget,
        }
    }
}

fn empty_lemma_certificate(inst: &LemmaInstance) -> FCertificate {
    FCertificate {
        fs: vec![Partition::empty(); inst.k()],
    }
}

/// Searches `f^1, …, f^k` with `t^i ≤ f^i ≤ d^i`,
/// `∪(f^i − t^i) ≺ A` and `∪(d^i − f^i) ≺ B`. A found certificate is the
/// lexicographically smallest one (parts of `f^1`, then `f^2`, …).
pub fn solve_lemma(inst: &LemmaInstance, budget: u64) -> SolveReport<FCertificate> {
    let mut search = LemmaSearch::new(inst, budget);
    let step = search.descend(0);
    let mut report = search.report(step);
    if search.positions() == 0 {
        report = report.map(|_| empty_lemma_certificate(inst));
    }
    report
}

/// [`solve_lemma`] with the first position's values searched on `workers`
/// threads. The report, node count included, equals the sequential one.
pub fn solve_lemma_parallel(
    inst: &LemmaInstance,
    budget: u64,
    workers: usize,
) -> SolveReport<FCertificate> {
    let probe = LemmaSearch::new(inst, budget);
    if workers <= 1 || probe.positions() == 0 {
        return solve_lemma(inst, budget);
    }
    let (lo, hi) = probe.range(0);
    let branch = |v: u64| {
        let mut search = LemmaSearch::new(inst, budget);
        let step = search.try_value(0, v);
        let cert = (step == Step::Found).then(|| search.certificate());
        (step, search.nodes, cert)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool");
    let branches: Vec<_> = pool.install(|| (lo..=hi).into_par_iter().map(branch).collect());

    let mut nodes = 0u64;
    for (step, branch_nodes, cert) in branches {
        if step == Step::Aborted || nodes + branch_nodes > budget {
            return SolveReport {
                outcome: Outcome::Aborted,
                nodes_explored: budget,
                search_bound: budget,
            };
        }
        nodes += branch_nodes;
        if let Some(cert) = cert {
            return SolveReport {
                outcome: Outcome::Found(cert),
                nodes_explored: nodes,
                search_bound: budget,
            };
        }
    }
    SolveReport {
        outcome: Outcome::NoSolution,
        nodes_explored: nodes,
        search_bound: budget,
    }
}

/// SHA-256 over the sequence of `(position, value)` nodes the sequential
/// search visits, hex encoded.
pub fn lemma_search_trace_digest(inst: &LemmaInstance, budget: u64) -> String {
    let mut search = LemmaSearch::new(inst, budget);
    search.trace = Some(Sha256::new());
    search.descend(0);
    let digest = search.trace.take().expect("trace enabled").finalize();
    hex::encode(digest.as_slice())
}

/// Translate, solve on the partition side and map the witness back to a chain.
pub fn solve_theorem(
    inst: &TheoremInstance,
    budget: u64,
) -> Result<SolveReport<BetaCertificate>, TranslationError> {
    solve_theorem_parallel(inst, budget, 1)
}

pub fn solve_theorem_parallel(
    inst: &TheoremInstance,
    budget: u64,
    workers: usize,
) -> Result<SolveReport<BetaCertificate>, TranslationError> {
    let lemma = theorem_to_lemma(inst)?;
    let report = solve_lemma_parallel(&lemma, budget, workers);
    let beta = match &report.outcome {
        Outcome::Found(fs) => Some(f_to_beta(inst, fs)?),
        _ => None,
    };
    Ok(report.map(|_| beta.expect("found certificate was translated")))
}

/// Enumerates witness chains `β` of length `n + m` directly: exponents are
/// bounded by both divisibility sandwiches and the two σ-majorizations are
/// checked on each complete chain. Independent of the partition route.
pub fn solve_theorem_direct(inst: &TheoremInstance, budget: u64) -> SolveReport<BetaCertificate> {
    let mut search = DirectSearch::new(inst, budget);
    let step = search.descend(0);
    SolveReport {
        outcome: match step {
            Step::Found => Outcome::Found(search.certificate()),
            Step::Exhausted => Outcome::NoSolution,
            Step::Aborted => Outcome::Aborted,
        },
        nodes_explored: search.nodes,
        search_bound: budget,
    }
}

struct DirectSearch<'a> {
    inst: &'a TheoremInstance,
    len: usize,
    alpha: Vec<Vec<u64>>,
    gamma: Vec<Vec<u64>>,
    beta: Vec<Vec<u64>>,
    nodes: u64,
    budget: u64,
}

impl<'a> DirectSearch<'a> {
    fn new(inst: &'a TheoremInstance, budget: u64) -> Self {
        let len = inst.n() + inst.m();
        let gamma_chain = inst.gamma();
        let alpha_chain = inst.alpha();
        let factors = gamma_chain.factors();
        let alpha = factors
            .iter()
            .map(|f| match alpha_chain.factor_index(&f.label) {
                Some(i) => alpha_chain.exponents(i).to_vec(),
                None => vec![0; inst.n()],
            })
            .collect();
        let gamma = (0..factors.len())
            .map(|i| gamma_chain.exponents(i).to_vec())
            .collect();
        Self {
            inst,
            len,
            alpha,
            gamma,
            beta: vec![vec![0; len]; factors.len()],
            nodes: 0,
            budget,
        }
    }

    /// Bounds for factor `f` at 1-based position `i`, from
    /// `γ_i | β_i | γ_{i+p}`, `β_i | α_i`, `α_{i-m} | β_i` and monotonicity.
    fn range(&self, f: usize, i: usize) -> (u64, u64) {
        let (n, m, p) = (self.inst.n(), self.inst.m(), self.inst.p());
        let mut lo = self.gamma[f][i - 1];
        if i > 1 {
            lo = lo.max(self.beta[f][i - 2]);
        }
        if i > m {
            lo = lo.max(self.alpha[f][i - m - 1]);
        }
        let mut hi = self.gamma[f][i + p - 1];
        if i <= n {
            hi = hi.min(self.alpha[f][i - 1]);
        }
        (lo, hi)
    }

    fn chain(&self) -> PolyChain {
        let rows = self
            .inst
            .gamma()
            .factors()
            .iter()
            .cloned()
            .zip(self.beta.iter().cloned())
            .collect();
        PolyChain::new(self.len, rows).expect("aligned with gamma")
    }

    fn leaf(&self) -> bool {
        let beta = self.chain();
        let (m, p) = (self.inst.m(), self.inst.p());
        let ok = |delta: &PolyChain, eps: &PolyChain, y: usize, target: &Partition| {
            interlace_check(delta, eps, y).unwrap_or(false)
                && sigma_degree_sequence(delta, eps, y).is_ok_and(|s| target.is_majorized_by(&s))
        };
        ok(self.inst.alpha(), &beta, m, &self.inst.shifted_c())
            && ok(&beta, self.inst.gamma(), p, &self.inst.shifted_r())
    }

    fn descend(&mut self, q: usize) -> Step {
        let k = self.beta.len();
        if q == k * self.len {
            return if self.leaf() {
                Step::Found
            } else {
                Step::Exhausted
            };
        }
        let (f, i) = (q / self.len, q % self.len + 1);
        let (lo, hi) = self.range(f, i);
        for v in lo..=hi {
            if self.nodes >= self.budget {
                return Step::Aborted;
            }
            self.nodes += 1;
            self.beta[f][i - 1] = v;
            match self.descend(q + 1) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }

    fn certificate(&self) -> BetaCertificate {
        let cert = BetaCertificate { beta: self.chain() };
        debug_assert!(verify_theorem_conclusion(self.inst, &cert).unwrap_or(false));
        cert
    }
}

/// `w · (d − t) ≺ A + B`, the premise of the weighted single-factor variant.
pub fn scaled_premise_holds(
    d: &Partition,
    t: &Partition,
    a: &Partition,
    b: &Partition,
    weight: u64,
) -> bool {
    d.diff_sorted(t)
        .is_ok_and(|diff| diff.scaled(weight).is_majorized_by(&a.plus(b)))
}

/// Plain enumeration of `f` with `t ≤ f ≤ d`, `w·(f − t) ≺ A` and
/// `w·(d − f) ≺ B`. With `w = 1` this is the single-pair lemma search,
/// implemented without any pruning so the two can cross-check.
pub fn solve_scaled_k1(
    d: &Partition,
    t: &Partition,
    a: &Partition,
    b: &Partition,
    weight: u64,
    budget: u64,
) -> Result<SolveReport<FCertificate>, TranslationError> {
    if weight == 0 {
        return Err(TranslationError::Structure(
            "weight must be positive".into(),
        ));
    }
    d.diff_sorted(t)
        .map_err(|e| TranslationError::Structure(format!("d is not componentwise >= t ({e})")))?;
    let width = d.len();
    let mut scaled = ScaledSearch {
        d: d.padded(width),
        t: t.padded(width),
        a,
        b,
        weight,
        f: vec![0; width],
        nodes: 0,
        budget,
    };
    let step = scaled.descend(0);
    Ok(SolveReport {
        outcome: match step {
            Step::Found => Outcome::Found(FCertificate {
                fs: vec![Partition::new(scaled.f.clone()).expect("non-increasing")],
            }),
            Step::Exhausted => Outcome::NoSolution,
            Step::Aborted => Outcome::Aborted,
        },
        nodes_explored: scaled.nodes,
        search_bound: budget,
    })
}

struct ScaledSearch<'a> {
    d: Vec<u64>,
    t: Vec<u64>,
    a: &'a Partition,
    b: &'a Partition,
    weight: u64,
    f: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl ScaledSearch<'_> {
    fn leaf(&self) -> bool {
        let w = self.weight;
        let lower = Partition::from_unsorted(self.f.iter().zip(&self.t).map(|(f, t)| w * (f - t)));
        let upper = Partition::from_unsorted(self.d.iter().zip(&self.f).map(|(d, f)| w * (d - f)));
        lower.is_majorized_by(self.a) && upper.is_majorized_by(self.b)
    }

    fn descend(&mut self, j: usize) -> Step {
        if j == self.f.len() {
            return if self.leaf() {
                Step::Found
            } else {
                Step::Exhausted
            };
        }
        let hi = if j == 0 {
            self.d[0]
        } else {
            self.d[j].min(self.f[j - 1])
        };
        for v in self.t[j]..=hi {
            if self.nodes >= self.budget {
                return Step::Aborted;
            }
            self.nodes += 1;
            self.f[j] = v;
            match self.descend(j + 1) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }
}
