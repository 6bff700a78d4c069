//! Completion instances over divisibility chains and their equivalent
//! multi-partition majorization instances.
//!
//! A [`TheoremInstance`] is the data `(α, γ, c, r)` of the pencil completion
//! problem: a chain `α` of length `n`, a chain `γ` of length `n + m + p`,
//! and column/row indices `c_1 ≥ … ≥ c_m`, `r_1 ≥ … ≥ r_p`. A
//! [`LemmaInstance`] is `k` pairs `(d^i, t^i)` with `d^i ≥ t^i` together
//! with partitions `A`, `B`. Conjugation of elementary-divisor partitions
//! moves instances and certificates between the two sides; every
//! translation here is paired with a verifier for the conditions it is
//! supposed to transport.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{interlace_check, sigma_degree_sequence, ChainError, Factor, PolyChain};
use crate::partition::PartitionError;
use crate::Partition;

/// Largest column/row index accepted in an instance.
const MAX_INDEX: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslationError {
    #[error("instance premise does not hold: {0}")]
    PremiseViolation(String),
    #[error("factor {label:?} has degree {degree}; the translation needs linear factors")]
    NonLinearFactor { label: String, degree: u64 },
    #[error("certificate does not satisfy the conclusion: {0}")]
    ConclusionViolation(String),
    #[error("certificate has {found} entries, instance has {expected} factors")]
    CertificateSize { expected: usize, found: usize },
    #[error("malformed instance: {0}")]
    Structure(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// One checked condition with the two objects that were compared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub statement: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ConditionCheck {
    fn new(condition: &str, statement: &str, holds: bool) -> Self {
        Self {
            condition: condition.to_owned(),
            statement: statement.to_owned(),
            holds,
            left: None,
            right: None,
            detail: None,
        }
    }

    fn compared(mut self, left: Partition, right: Option<Partition>) -> Self {
        self.left = Some(left);
        self.right = right;
        self
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Ordered list of condition checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub checks: Vec<ConditionCheck>,
}

impl Transcript {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, condition: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

#[derive(Serialize, Deserialize)]
struct RawTheoremInstance {
    alpha: PolyChain,
    gamma: PolyChain,
    c: Vec<u64>,
    r: Vec<u64>,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    m: Option<usize>,
    #[serde(default)]
    p: Option<usize>,
}

/// Data of the completion problem. `n`, `m`, `p` are the lengths of
/// `alpha`, `c` and `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTheoremInstance", into = "RawTheoremInstance")]
pub struct TheoremInstance {
    alpha: PolyChain,
    gamma: PolyChain,
    c: Vec<u64>,
    r: Vec<u64>,
}

impl TryFrom<RawTheoremInstance> for TheoremInstance {
    type Error = TranslationError;

    fn try_from(raw: RawTheoremInstance) -> Result<Self, Self::Error> {
        let declared = [
            ("n", raw.n, raw.alpha.len()),
            ("m", raw.m, raw.c.len()),
            ("p", raw.p, raw.r.len()),
        ];
        for (name, given, actual) in declared {
            if given.is_some_and(|g| g != actual) {
                return Err(TranslationError::Structure(format!(
                    "declared {name} = {} but the data implies {actual}",
                    given.unwrap_or_default()
                )));
            }
        }
        TheoremInstance::new(raw.alpha, raw.gamma, raw.c, raw.r)
    }
}

impl From<TheoremInstance> for RawTheoremInstance {
    fn from(inst: TheoremInstance) -> Self {
        RawTheoremInstance {
            n: Some(inst.n()),
            m: Some(inst.m()),
            p: Some(inst.p()),
            alpha: inst.alpha,
            gamma: inst.gamma,
            c: inst.c,
            r: inst.r,
        }
    }
}

fn check_index_list(name: &str, values: &[u64]) -> Result<(), TranslationError> {
    if let Some(i) = (1..values.len()).find(|&i| values[i] > values[i - 1]) {
        return Err(TranslationError::Structure(format!(
            "{name}[{i}] = {} is larger than {name}[{}] = {}",
            values[i],
            i - 1,
            values[i - 1]
        )));
    }
    if let Some(v) = values.iter().find(|&&v| v > MAX_INDEX) {
        return Err(TranslationError::Structure(format!(
            "{name} entry {v} exceeds the supported maximum {MAX_INDEX}"
        )));
    }
    Ok(())
}

/// `(x_1 + 1, …, x_len + 1)`; every part is positive so the length is kept.
fn shifted(values: &[u64]) -> Partition {
    Partition::new(values.iter().map(|v| v + 1).collect()).expect("shift keeps order")
}

impl TheoremInstance {
    pub fn new(
        alpha: PolyChain,
        gamma: PolyChain,
        c: Vec<u64>,
        r: Vec<u64>,
    ) -> Result<Self, TranslationError> {
        check_index_list("c", &c)?;
        check_index_list("r", &r)?;
        let expected = alpha.len() + c.len() + r.len();
        if gamma.len() != expected {
            return Err(ChainError::LengthMismatch {
                expected,
                found: gamma.len(),
            }
            .into());
        }
        for f in alpha.factors() {
            match gamma.factors().iter().find(|g| g.label == f.label) {
                None => {
                    return Err(TranslationError::Structure(format!(
                        "factor {:?} of alpha does not occur in gamma",
                        f.label
                    )))
                }
                Some(g) if g.degree != f.degree => {
                    return Err(ChainError::DegreeMismatch {
                        label: f.label.clone(),
                        left: f.degree,
                        right: g.degree,
                    }
                    .into())
                }
                Some(_) => {}
            }
        }
        for (name, chain) in [("alpha", &alpha), ("gamma", &gamma)] {
            if !chain.is_divisibility_chain() {
                return Err(TranslationError::Structure(format!(
                    "{name} exponents are not non-decreasing along the chain"
                )));
            }
        }
        Ok(Self { alpha, gamma, c, r })
    }

    pub fn alpha(&self) -> &PolyChain {
        &self.alpha
    }

    pub fn gamma(&self) -> &PolyChain {
        &self.gamma
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    pub fn r(&self) -> &[u64] {
        &self.r
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn m(&self) -> usize {
        self.c.len()
    }

    pub fn p(&self) -> usize {
        self.r.len()
    }

    /// Number of irreducible factors, i.e. factors listed for `gamma`.
    pub fn k(&self) -> usize {
        self.gamma.factors().len()
    }

    /// `(c_1 + 1, …, c_m + 1)`.
    pub fn shifted_c(&self) -> Partition {
        shifted(&self.c)
    }

    /// `(r_1 + 1, …, r_p + 1)`.
    pub fn shifted_r(&self) -> Partition {
        shifted(&self.r)
    }

    /// `(a^ψ, g^ψ)` for every factor `ψ` of `gamma`, in `gamma`'s order.
    pub fn factor_partitions(&self) -> Result<Vec<(Factor, Partition, Partition)>, ChainError> {
        self.gamma
            .factors()
            .iter()
            .map(|f| {
                Ok((
                    f.clone(),
                    self.alpha.factor_partition(&f.label)?,
                    self.gamma.factor_partition(&f.label)?,
                ))
            })
            .collect()
    }

    /// Relabels factors `psi1, psi2, …` after sorting them by
    /// `(degree, g-partition, a-partition)`; equal canonical forms mean the
    /// instances agree up to a degree-preserving relabeling.
    pub fn canonical(&self) -> Result<Self, TranslationError> {
        let mut rows = self.factor_partitions()?;
        rows.sort_by(|x, y| (x.0.degree, &x.2, &x.1).cmp(&(y.0.degree, &y.2, &y.1)));
        let mut alpha_rows = Vec::with_capacity(rows.len());
        let mut gamma_rows = Vec::with_capacity(rows.len());
        for (i, (f, a, g)) in rows.into_iter().enumerate() {
            let factor = Factor::new(format!("psi{}", i + 1), f.degree);
            alpha_rows.push((factor.clone(), a));
            gamma_rows.push((factor, g));
        }
        Self::new(
            PolyChain::from_factor_partitions(self.n(), alpha_rows)?,
            PolyChain::from_factor_partitions(self.gamma.len(), gamma_rows)?,
            self.c.clone(),
            self.r.clone(),
        )
    }

    pub fn equivalent(&self, other: &Self) -> Result<bool, TranslationError> {
        Ok(self.canonical()? == other.canonical()?)
    }
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    d: Partition,
    t: Partition,
}

#[derive(Serialize, Deserialize)]
struct RawLemmaInstance {
    pairs: Vec<RawPair>,
    #[serde(rename = "A")]
    a: Partition,
    #[serde(rename = "B")]
    b: Partition,
}

/// `k` pairs `(d^i, t^i)` with `d^i ≥ t^i` componentwise, and partitions
/// `A`, `B`. Whether the majorization premise holds is computed once at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLemmaInstance", into = "RawLemmaInstance")]
pub struct LemmaInstance {
    pairs: Vec<(Partition, Partition)>,
    a: Partition,
    b: Partition,
    premise: bool,
}

impl TryFrom<RawLemmaInstance> for LemmaInstance {
    type Error = TranslationError;

    fn try_from(raw: RawLemmaInstance) -> Result<Self, Self::Error> {
        LemmaInstance::new(
            raw.pairs.into_iter().map(|p| (p.d, p.t)).collect(),
            raw.a,
            raw.b,
        )
    }
}

impl From<LemmaInstance> for RawLemmaInstance {
    fn from(inst: LemmaInstance) -> Self {
        RawLemmaInstance {
            pairs: inst
                .pairs
                .into_iter()
                .map(|(d, t)| RawPair { d, t })
                .collect(),
            a: inst.a,
            b: inst.b,
        }
    }
}

impl LemmaInstance {
    pub fn new(
        pairs: Vec<(Partition, Partition)>,
        a: Partition,
        b: Partition,
    ) -> Result<Self, TranslationError> {
        let mut union = Partition::empty();
        for (i, (d, t)) in pairs.iter().enumerate() {
            let diff = d.diff_sorted(t).map_err(|e| {
                TranslationError::Structure(format!("pair {i}: d is not componentwise >= t ({e})"))
            })?;
            union = union.union(&diff);
        }
        let premise = union.is_majorized_by(&a.plus(&b));
        Ok(Self {
            pairs,
            a,
            b,
            premise,
        })
    }

    pub fn pairs(&self) -> &[(Partition, Partition)] {
        &self.pairs
    }

    pub fn a(&self) -> &Partition {
        &self.a
    }

    pub fn b(&self) -> &Partition {
        &self.b
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// Common padded length of the pairs.
    pub fn s(&self) -> usize {
        self.pairs.iter().map(|(d, _)| d.len()).max().unwrap_or(0)
    }

    /// `(d^1 − t^1) ∪ … ∪ (d^k − t^k)`.
    pub fn difference_union(&self) -> Partition {
        let diffs: Vec<Partition> = self
            .pairs
            .iter()
            .map(|(d, t)| d.diff_sorted(t).expect("checked at construction"))
            .collect();
        Partition::union_all(&diffs)
    }

    /// The difference union is majorized by `A + B`.
    pub fn premise_holds(&self) -> bool {
        self.premise
    }

    pub fn premise_transcript(&self) -> Transcript {
        let union = self.difference_union();
        let sum = self.a.plus(&self.b);
        Transcript {
            checks: vec![
                ConditionCheck::new("pairs-ordered", "d^i_j >= t^i_j for all i, j", true),
                ConditionCheck::new(
                    "difference-majorization",
                    "(d^1 - t^1) u ... u (d^k - t^k) < A + B",
                    self.premise,
                )
                .compared(union, Some(sum)),
            ],
        }
    }

    /// Pairs sorted; equal canonical forms mean equal up to reordering the factors.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        out.pairs.sort();
        out
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Witness chain `β` of length `n + m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaCertificate {
    pub beta: PolyChain,
}

/// Witness partitions `f^1, …, f^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FCertificate {
    pub fs: Vec<Partition>,
}

pub fn theorem_premise_transcript(inst: &TheoremInstance) -> Transcript {
    let y = inst.m() + inst.p();
    let interlaced = interlace_check(&inst.alpha, &inst.gamma, y).unwrap_or(false);
    let lhs = inst.shifted_c().union(&inst.shifted_r());
    let sigma = if interlaced {
        sigma_degree_sequence(&inst.alpha, &inst.gamma, y).ok()
    } else {
        None
    };
    let majorized = sigma.as_ref().is_some_and(|s| lhs.is_majorized_by(s));
    Transcript {
        checks: vec![
            ConditionCheck::new(
                "alpha-gamma-interlacing",
                "gamma_i | alpha_i | gamma_{i+m+p}, i = 1..n",
                interlaced,
            ),
            ConditionCheck::new(
                "index-majorization",
                "(c+1) u (r+1) < (d(sigma_{m+p}(alpha,gamma)), ..., d(sigma_1(alpha,gamma)))",
                majorized,
            )
            .compared(lhs, sigma),
        ],
    }
}

/// Both premises: the interlacing of `α` inside `γ` and the majorization of
/// the shifted indices by the σ-degree sequence of `(α, γ)`.
pub fn verify_theorem_premises(inst: &TheoremInstance) -> bool {
    theorem_premise_transcript(inst).all_hold()
}

pub fn theorem_conclusion_transcript(
    inst: &TheoremInstance,
    cert: &BetaCertificate,
) -> Result<Transcript, TranslationError> {
    let beta = &cert.beta;
    let expected = inst.n() + inst.m();
    if beta.len() != expected {
        return Err(ChainError::LengthMismatch {
            expected,
            found: beta.len(),
        }
        .into());
    }
    let is_chain = beta.is_divisibility_chain();
    let beta_alpha = is_chain && interlace_check(&inst.alpha, beta, inst.m())?;
    let gamma_beta = is_chain && interlace_check(beta, &inst.gamma, inst.p())?;
    let column_sigma = if beta_alpha {
        Some(sigma_degree_sequence(&inst.alpha, beta, inst.m())?)
    } else {
        None
    };
    let row_sigma = if gamma_beta {
        Some(sigma_degree_sequence(beta, &inst.gamma, inst.p())?)
    } else {
        None
    };
    let (c1, r1) = (inst.shifted_c(), inst.shifted_r());
    let column_ok = column_sigma.as_ref().is_some_and(|s| c1.is_majorized_by(s));
    let row_ok = row_sigma.as_ref().is_some_and(|s| r1.is_majorized_by(s));
    Ok(Transcript {
        checks: vec![
            ConditionCheck::new("beta-chain", "beta_1 | beta_2 | ... | beta_{n+m}", is_chain),
            ConditionCheck::new(
                "beta-alpha-interlacing",
                "beta_i | alpha_i | beta_{i+m}, i = 1..n",
                beta_alpha,
            ),
            ConditionCheck::new(
                "gamma-beta-interlacing",
                "gamma_i | beta_i | gamma_{i+p}, i = 1..n+m",
                gamma_beta,
            ),
            ConditionCheck::new(
                "column-majorization",
                "(c+1) < (d(sigma_m(alpha,beta)), ..., d(sigma_1(alpha,beta)))",
                column_ok,
            )
            .compared(c1, column_sigma),
            ConditionCheck::new(
                "row-majorization",
                "(r+1) < (d(sigma_p(beta,gamma)), ..., d(sigma_1(beta,gamma)))",
                row_ok,
            )
            .compared(r1, row_sigma),
        ],
    })
}

/// All completion conclusions for the witness chain `β`.
pub fn verify_theorem_conclusion(
    inst: &TheoremInstance,
    cert: &BetaCertificate,
) -> Result<bool, TranslationError> {
    Ok(theorem_conclusion_transcript(inst, cert)?.all_hold())
}

pub fn lemma_conclusion_transcript(inst: &LemmaInstance, cert: &FCertificate) -> Transcript {
    if cert.fs.len() != inst.k() {
        return Transcript {
            checks: vec![
                ConditionCheck::new("f-count", "one f^i per pair", false).with_detail(format!(
                    "{} partitions for {} pairs",
                    cert.fs.len(),
                    inst.k()
                )),
            ],
        };
    }
    let mut bounds_ok = true;
    let mut detail = None;
    let mut lower = Vec::with_capacity(inst.k());
    let mut upper = Vec::with_capacity(inst.k());
    for (i, ((d, t), f)) in inst.pairs.iter().zip(&cert.fs).enumerate() {
        match (f.diff_sorted(t), d.diff_sorted(f)) {
            (Ok(lo), Ok(hi)) => {
                lower.push(lo);
                upper.push(hi);
            }
            _ => {
                bounds_ok = false;
                detail.get_or_insert_with(|| format!("pair {i}: need {d} >= {f} >= {t}"));
            }
        }
    }
    let mut bounds = ConditionCheck::new(
        "f-bounds",
        "d^i_j >= f^i_j >= t^i_j for all i, j",
        bounds_ok,
    );
    if let Some(d) = detail {
        bounds = bounds.with_detail(d);
    }
    let mut checks = vec![bounds];
    if bounds_ok {
        let lower = Partition::union_all(&lower);
        let upper = Partition::union_all(&upper);
        let lower_ok = lower.is_majorized_by(&inst.a);
        let upper_ok = upper.is_majorized_by(&inst.b);
        checks.push(
            ConditionCheck::new(
                "lower-majorization",
                "(f^1 - t^1) u ... u (f^k - t^k) < A",
                lower_ok,
            )
            .compared(lower, Some(inst.a.clone())),
        );
        checks.push(
            ConditionCheck::new(
                "upper-majorization",
                "(d^1 - f^1) u ... u (d^k - f^k) < B",
                upper_ok,
            )
            .compared(upper, Some(inst.b.clone())),
        );
    } else {
        checks.push(ConditionCheck::new(
            "lower-majorization",
            "(f^1 - t^1) u ... u (f^k - t^k) < A",
            false,
        ));
        checks.push(ConditionCheck::new(
            "upper-majorization",
            "(d^1 - f^1) u ... u (d^k - f^k) < B",
            false,
        ));
    }
    Transcript { checks }
}

/// Bounds `t^i ≤ f^i ≤ d^i` and both majorizations for the witness list.
pub fn verify_lemma_conclusion(inst: &LemmaInstance, cert: &FCertificate) -> bool {
    lemma_conclusion_transcript(inst, cert).all_hold()
}

fn require_linear(chain: &PolyChain) -> Result<(), TranslationError> {
    match chain.factors().iter().find(|f| f.degree != 1) {
        Some(f) => Err(TranslationError::NonLinearFactor {
            label: f.label.clone(),
            degree: f.degree,
        }),
        None => Ok(()),
    }
}

/// `d^ψ = dual(g^ψ)`, `t^ψ = dual(a^ψ)`, `A = dual(c+1)`, `B = dual(r+1)`,
/// one pair per factor of `γ` in `γ`'s order.
pub fn theorem_to_lemma(inst: &TheoremInstance) -> Result<LemmaInstance, TranslationError> {
    require_linear(&inst.gamma)?;
    let premises = theorem_premise_transcript(inst);
    if let Some(failed) = premises.checks.iter().find(|c| !c.holds) {
        return Err(TranslationError::PremiseViolation(failed.condition.clone()));
    }
    let pairs = inst
        .factor_partitions()?
        .into_iter()
        .map(|(_, a, g)| (g.dual(), a.dual()))
        .collect();
    LemmaInstance::new(pairs, inst.shifted_c().dual(), inst.shifted_r().dual())
}

/// Inverse construction: `m = A_1`, `p = B_1`, `c + 1 = dual(A)`,
/// `r + 1 = dual(B)`, `n = max_i t^i_1`, fresh linear factors
/// `psi1..psik` with `a^i = dual(t^i)` and `g^i = dual(d^i)`.
pub fn lemma_to_theorem(inst: &LemmaInstance) -> Result<TheoremInstance, TranslationError> {
    if !inst.premise_holds() {
        return Err(TranslationError::PremiseViolation(
            "difference-majorization".into(),
        ));
    }
    let unshift = |p: &Partition| -> Vec<u64> { p.dual().parts().iter().map(|v| v - 1).collect() };
    let c = unshift(&inst.a);
    let r = unshift(&inst.b);
    let n = inst
        .pairs
        .iter()
        .map(|(_, t)| t.largest())
        .max()
        .unwrap_or(0) as usize;
    let total = n + c.len() + r.len();
    let mut alpha_rows = Vec::with_capacity(inst.k());
    let mut gamma_rows = Vec::with_capacity(inst.k());
    for (i, (d, t)) in inst.pairs.iter().enumerate() {
        let factor = Factor::linear(format!("psi{}", i + 1));
        alpha_rows.push((factor.clone(), t.dual()));
        gamma_rows.push((factor, d.dual()));
    }
    TheoremInstance::new(
        PolyChain::from_factor_partitions(n, alpha_rows)?,
        PolyChain::from_factor_partitions(total, gamma_rows)?,
        c,
        r,
    )
}

/// `b^ψ = dual(f^ψ)` assembled into a chain of length `n + m` over `γ`'s factors.
pub fn f_to_beta(
    inst: &TheoremInstance,
    cert: &FCertificate,
) -> Result<BetaCertificate, TranslationError> {
    let factors = inst.gamma.factors();
    if cert.fs.len() != factors.len() {
        return Err(TranslationError::CertificateSize {
            expected: factors.len(),
            found: cert.fs.len(),
        });
    }
    let rows = factors
        .iter()
        .cloned()
        .zip(cert.fs.iter().map(Partition::dual))
        .collect();
    Ok(BetaCertificate {
        beta: PolyChain::from_factor_partitions(inst.n() + inst.m(), rows)?,
    })
}

/// `f^ψ = dual(b^ψ)` for a verified witness chain.
pub fn beta_to_f(
    inst: &TheoremInstance,
    cert: &BetaCertificate,
) -> Result<FCertificate, TranslationError> {
    let transcript = theorem_conclusion_transcript(inst, cert)?;
    if let Some(failed) = transcript.checks.iter().find(|c| !c.holds) {
        return Err(TranslationError::ConclusionViolation(
            failed.condition.clone(),
        ));
    }
    let fs = inst
        .gamma
        .factors()
        .iter()
        .map(|f| cert.beta.factor_partition(&f.label).map(|b| b.dual()))
        .collect::<Result<_, _>>()?;
    Ok(FCertificate { fs })
}
