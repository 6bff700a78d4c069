//! Divisibility chains of homogeneous polynomials, stored as exponent data.
//!
//! A chain `δ_1 | δ_2 | … | δ_L` is never represented by coefficients. Each
//! irreducible factor carries a label, a degree and its exponent at every
//! chain position; divisibility is a componentwise comparison of exponents
//! and lcm is a componentwise maximum.
//!
//! Positions are 1-based. Position `i <= 0` reads as the constant `1`
//! (every exponent zero) and position `i > L` as the formal zero polynomial,
//! whose degree is `+∞`.

use std::collections::HashSet;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::PartitionError;
use crate::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (maximum {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("degree sequence {0:?} is not non-increasing")]
    NotAPartition(Vec<i128>),
    #[error("chains do not satisfy the interlacing divisibility condition")]
    NotInterlaced,
    #[error("internal invariant failure: lcm product touched the zero polynomial")]
    InfiniteDegree,
    #[error("duplicate factor label {0:?}")]
    DuplicateLabel(String),
    #[error("factor {0:?} has degree 0; degrees must be positive")]
    ZeroDegree(String),
    #[error("factor {label:?} has {found} exponents, chain length is {expected}")]
    ExponentCount {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("factor {label:?} has degree {left} in one chain and {right} in the other")]
    DegreeMismatch {
        label: String,
        left: u64,
        right: u64,
    },
    #[error("partition for factor {label:?} has {parts} parts, chain length is only {length}")]
    LengthOverflow {
        label: String,
        parts: usize,
        length: usize,
    },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// An irreducible homogeneous factor `ψ` with its degree `d(ψ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub degree: u64,
}

impl Factor {
    pub fn new(label: impl Into<String>, degree: u64) -> Self {
        Self {
            label: label.into(),
            degree,
        }
    }

    /// Degree-one factor, the only kind over an algebraically closed field.
    pub fn linear(label: impl Into<String>) -> Self {
        Self::new(label, 1)
    }
}

/// Degree of a polynomial, `+∞` for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedDegree {
    Finite(u64),
    Infinite,
}

impl ExtendedDegree {
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedDegree::Finite(d) => Some(d),
            ExtendedDegree::Infinite => None,
        }
    }
}

impl Add for ExtendedDegree {
    type Output = ExtendedDegree;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedDegree::Finite(a), ExtendedDegree::Finite(b)) => ExtendedDegree::Finite(a + b),
            _ => ExtendedDegree::Infinite,
        }
    }
}

impl fmt::Display for ExtendedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDegree::Finite(d) => write!(f, "{d}"),
            ExtendedDegree::Infinite => f.write_str("+inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawFactor {
    label: String,
    degree: u64,
    exponents: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawChain {
    length: usize,
    factors: Vec<RawFactor>,
}

/// A finite chain of homogeneous polynomials in factor/exponent form.
///
/// Construction checks only the structure (labels, degrees, exponent
/// counts); the divisibility property itself is reported by
/// [`PolyChain::is_divisibility_chain`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawChain", into = "RawChain")]
pub struct PolyChain {
    length: usize,
    factors: Vec<Factor>,
    exponents: Vec<Vec<u64>>,
}

impl TryFrom<RawChain> for PolyChain {
    type Error = ChainError;

    fn try_from(raw: RawChain) -> Result<Self, ChainError> {
        PolyChain::new(
            raw.length,
            raw.factors
                .into_iter()
                .map(|f| (Factor::new(f.label, f.degree), f.exponents))
                .collect(),
        )
    }
}

impl From<PolyChain> for RawChain {
    fn from(chain: PolyChain) -> Self {
        RawChain {
            length: chain.length,
            factors: chain
                .factors
                .into_iter()
                .zip(chain.exponents)
                .map(|(f, exponents)| RawFactor {
                    label: f.label,
                    degree: f.degree,
                    exponents,
                })
                .collect(),
        }
    }
}

impl PolyChain {
    pub fn new(length: usize, entries: Vec<(Factor, Vec<u64>)>) -> Result<Self, ChainError> {
        let mut seen = HashSet::new();
        let mut factors = Vec::with_capacity(entries.len());
        let mut exponents = Vec::with_capacity(entries.len());
        for (factor, exps) in entries {
            if !seen.insert(factor.label.clone()) {
                return Err(ChainError::DuplicateLabel(factor.label));
            }
            if factor.degree == 0 {
                return Err(ChainError::ZeroDegree(factor.label));
            }
            if exps.len() != length {
                return Err(ChainError::ExponentCount {
                    label: factor.label,
                    expected: length,
                    found: exps.len(),
                });
            }
            factors.push(factor);
            exponents.push(exps);
        }
        Ok(Self {
            length,
            factors,
            exponents,
        })
    }

    /// The chain of `length` ones.
    pub fn trivial(length: usize) -> Self {
        Self {
            length,
            factors: Vec::new(),
            exponents: Vec::new(),
        }
    }

    /// Assembles a chain from elementary-divisor partitions: position `j`
    /// of factor `f` gets exponent `b_{L+1-j}` where `b` is `f`'s partition.
    pub fn from_factor_partitions(
        length: usize,
        entries: Vec<(Factor, Partition)>,
    ) -> Result<Self, ChainError> {
        let mut rows = Vec::with_capacity(entries.len());
        for (factor, partition) in entries {
            if partition.len() > length {
                return Err(ChainError::LengthOverflow {
                    label: factor.label,
                    parts: partition.len(),
                    length,
                });
            }
            let exps = (1..=length).map(|j| partition.get(length - j)).collect();
            rows.push((factor, exps));
        }
        Self::new(length, rows)
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor_index(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.label == label)
    }

    /// Exponent sequence of the factor at `index`, positions `1..=L`.
    pub fn exponents(&self, index: usize) -> &[u64] {
        &self.exponents[index]
    }

    /// Exponent of `label` at 1-based `position`; `None` past the end, where
    /// the chain reads as the zero polynomial. Absent labels read as 0.
    pub fn exponent(&self, label: &str, position: isize) -> Option<u64> {
        if position > self.length as isize {
            return None;
        }
        if position <= 0 {
            return Some(0);
        }
        Some(
            self.factor_index(label)
                .map_or(0, |i| self.exponents[i][position as usize - 1]),
        )
    }

    /// `d(δ_position)`: 0 for positions `<= 0`, `+∞` past the end.
    pub fn degree_at(&self, position: isize) -> ExtendedDegree {
        if position > self.length as isize {
            return ExtendedDegree::Infinite;
        }
        if position <= 0 {
            return ExtendedDegree::Finite(0);
        }
        let p = position as usize - 1;
        ExtendedDegree::Finite(
            self.factors
                .iter()
                .zip(&self.exponents)
                .map(|(f, e)| f.degree * e[p])
                .sum(),
        )
    }

    /// Every exponent sequence is non-decreasing, i.e. `δ_1 | δ_2 | … | δ_L`.
    pub fn is_divisibility_chain(&self) -> bool {
        self.exponents
            .iter()
            .all(|e| e.windows(2).all(|w| w[0] <= w[1]))
    }

    /// Elementary-divisor partition of `label`: the exponent sequence read
    /// from the last position backwards. Empty for absent labels.
    pub fn factor_partition(&self, label: &str) -> Result<Partition, ChainError> {
        match self.factor_index(label) {
            Some(i) => Ok(Partition::new(
                self.exponents[i].iter().rev().copied().collect(),
            )?),
            None => Ok(Partition::empty()),
        }
    }

    /// Drops factors whose exponents are all zero.
    pub fn without_trivial_factors(&self) -> Self {
        let (factors, exponents) = self
            .factors
            .iter()
            .zip(&self.exponents)
            .filter(|(_, e)| e.iter().any(|&x| x > 0))
            .map(|(f, e)| (f.clone(), e.clone()))
            .unzip();
        Self {
            length: self.length,
            factors,
            exponents,
        }
    }
}

impl fmt::Display for PolyChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for pos in 0..self.length {
            if pos > 0 {
                f.write_str(", ")?;
            }
            let mut wrote = false;
            for (factor, e) in self.factors.iter().zip(&self.exponents) {
                match e[pos] {
                    0 => {}
                    1 => {
                        write!(f, "{}", factor.label)?;
                        wrote = true;
                    }
                    x => {
                        write!(f, "{}^{x}", factor.label)?;
                        wrote = true;
                    }
                }
            }
            if !wrote {
                f.write_str("1")?;
            }
        }
        f.write_str(")")
    }
}

/// Factors appearing in either chain, first chain's order first.
pub fn merged_factors(a: &PolyChain, b: &PolyChain) -> Result<Vec<Factor>, ChainError> {
    let mut out: Vec<Factor> = a.factors.clone();
    for f in &b.factors {
        match out.iter().find(|g| g.label == f.label) {
            Some(g) if g.degree != f.degree => {
                return Err(ChainError::DegreeMismatch {
                    label: f.label.clone(),
                    left: g.degree,
                    right: f.degree,
                });
            }
            Some(_) => {}
            None => out.push(f.clone()),
        }
    }
    Ok(out)
}

fn check_lengths(delta: &PolyChain, epsilon: &PolyChain, y: usize) -> Result<(), ChainError> {
    if epsilon.length != delta.length + y {
        return Err(ChainError::LengthMismatch {
            expected: delta.length + y,
            found: epsilon.length,
        });
    }
    Ok(())
}

/// Exponent rows of both chains over the merged factor list.
struct AlignedPair<'a> {
    degrees: Vec<u64>,
    delta: Vec<Option<&'a [u64]>>,
    epsilon: Vec<Option<&'a [u64]>>,
    x: usize,
    total: usize,
}

impl<'a> AlignedPair<'a> {
    fn new(delta: &'a PolyChain, epsilon: &'a PolyChain) -> Result<Self, ChainError> {
        let factors = merged_factors(delta, epsilon)?;
        let row = |c: &'a PolyChain, label: &str| {
            c.factor_index(label).map(|i| c.exponents[i].as_slice())
        };
        Ok(Self {
            degrees: factors.iter().map(|f| f.degree).collect(),
            delta: factors.iter().map(|f| row(delta, &f.label)).collect(),
            epsilon: factors.iter().map(|f| row(epsilon, &f.label)).collect(),
            x: delta.length,
            total: epsilon.length,
        })
    }

    fn read(row: Option<&[u64]>, len: usize, position: isize) -> Option<u64> {
        if position > len as isize {
            None
        } else if position <= 0 {
            Some(0)
        } else {
            Some(row.map_or(0, |r| r[position as usize - 1]))
        }
    }

    fn delta_at(&self, f: usize, position: isize) -> Option<u64> {
        Self::read(self.delta[f], self.x, position)
    }

    fn epsilon_at(&self, f: usize, position: isize) -> Option<u64> {
        Self::read(self.epsilon[f], self.total, position)
    }

    fn interlaced(&self, y: usize) -> bool {
        (0..self.degrees.len()).all(|f| {
            (1..=self.x as isize).all(|i| {
                let d = self.delta_at(f, i).expect("in range");
                self.epsilon_at(f, i).expect("in range") <= d
                    && d <= self.epsilon_at(f, i + y as isize).expect("in range")
            })
        })
    }

    fn pi(&self, i: usize) -> ExtendedDegree {
        let mut total = ExtendedDegree::Finite(0);
        for j in 1..=(self.x + i) as isize {
            for (f, &degree) in self.degrees.iter().enumerate() {
                total = total
                    + match (self.delta_at(f, j - i as isize), self.epsilon_at(f, j)) {
                        (Some(a), Some(b)) => ExtendedDegree::Finite(degree * a.max(b)),
                        _ => ExtendedDegree::Infinite,
                    };
            }
        }
        total
    }
}

/// `ε_i | δ_i | ε_{i+y}` for `i = 1..=len(δ)`.
pub fn interlace_check(
    delta: &PolyChain,
    epsilon: &PolyChain,
    y: usize,
) -> Result<bool, ChainError> {
    check_lengths(delta, epsilon, y)?;
    Ok(AlignedPair::new(delta, epsilon)?.interlaced(y))
}

/// `d(π_i(δ, ε))` where `π_i = ∏_{j=1}^{x+i} lcm(δ_{j-i}, ε_j)`, `x = len(δ)`.
pub fn pi_degree(
    i: usize,
    delta: &PolyChain,
    epsilon: &PolyChain,
) -> Result<ExtendedDegree, ChainError> {
    if epsilon.length < delta.length {
        return Err(ChainError::LengthMismatch {
            expected: delta.length,
            found: epsilon.length,
        });
    }
    let y = epsilon.length - delta.length;
    if i > y {
        return Err(ChainError::IndexOutOfRange { index: i, max: y });
    }
    match AlignedPair::new(delta, epsilon)?.pi(i) {
        ExtendedDegree::Infinite => Err(ChainError::InfiniteDegree),
        finite => Ok(finite),
    }
}

/// `(d(σ_y), d(σ_{y-1}), …, d(σ_1))` with `σ_i = π_i / π_{i-1}`, as a
/// partition. Requires the pair to be interlaced.
pub fn sigma_degree_sequence(
    delta: &PolyChain,
    epsilon: &PolyChain,
    y: usize,
) -> Result<Partition, ChainError> {
    check_lengths(delta, epsilon, y)?;
    let pair = AlignedPair::new(delta, epsilon)?;
    if !pair.interlaced(y) {
        return Err(ChainError::NotInterlaced);
    }
    let pis = (0..=y)
        .map(|i| {
            pair.pi(i)
                .finite()
                .map(i128::from)
                .ok_or(ChainError::InfiniteDegree)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let increments: Vec<i128> = (1..=y).rev().map(|i| pis[i] - pis[i - 1]).collect();
    let sorted = increments.windows(2).all(|w| w[0] >= w[1]);
    if !sorted || increments.last().is_some_and(|&d| d < 0) {
        return Err(ChainError::NotAPartition(increments));
    }
    Ok(Partition::new(
        increments.into_iter().map(|d| d as u64).collect(),
    )?)
}

/// `Σ_ψ d(ψ) · dual(dual(g^ψ) − dual(a^ψ))`, where `g^ψ` and `a^ψ` are the
/// elementary-divisor partitions of `ε` and `δ`. Equals
/// [`sigma_degree_sequence`] on every interlaced pair.
pub fn sigma_identity_rhs(
    delta: &PolyChain,
    epsilon: &PolyChain,
    y: usize,
) -> Result<Partition, ChainError> {
    check_lengths(delta, epsilon, y)?;
    if !interlace_check(delta, epsilon, y)? {
        return Err(ChainError::NotInterlaced);
    }
    let mut total = Partition::empty();
    for f in merged_factors(delta, epsilon)? {
        let g = epsilon.factor_partition(&f.label)?;
        let a = delta.factor_partition(&f.label)?;
        let term = g.dual().diff_sorted(&a.dual())?.dual().scaled(f.degree);
        total = total.plus(&term);
    }
    Ok(total)
}
