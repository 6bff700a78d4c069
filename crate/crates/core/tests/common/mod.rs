#![allow(dead_code)]

use std::collections::BTreeMap;

use majorize::{Partition, PolyChain};
use rand::Rng;

pub fn p(parts: &[u64]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Conjugate by counting: entry `i` is the number of parts `>= i`.
pub fn dual_oracle(parts: &[u64]) -> Vec<u64> {
    let top = parts.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|i| parts.iter().filter(|&&v| v >= i).count() as u64)
        .collect()
}

/// `a ≺ b` via the convex-function criterion: equal sums and
/// `Σ (a_i − x)^+ <= Σ (b_i − x)^+` for every threshold `x`.
pub fn majorized_oracle(a: &[u64], b: &[u64]) -> bool {
    let sa: u64 = a.iter().sum();
    let sb: u64 = b.iter().sum();
    if sa != sb {
        return false;
    }
    let top = a.iter().chain(b).copied().max().unwrap_or(0);
    (0..=top).all(|x| {
        let excess = |v: &[u64]| v.iter().map(|&u| u.saturating_sub(x)).sum::<u64>();
        excess(a) <= excess(b)
    })
}

pub fn sorted_desc(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn random_partition<R: Rng>(rng: &mut R, max_len: usize, max_part: u64) -> Partition {
    let len = rng.gen_range(0..=max_len);
    Partition::from_unsorted((0..len).map(|_| rng.gen_range(0..=max_part)))
}

/// One random Dalton transfer that changes the partition, or `None` when no
/// part exceeds another by 2 or more (counting a fresh zero part).
pub fn dalton_step<R: Rng>(rng: &mut R, parts: &[u64]) -> Option<Vec<u64>> {
    let mut e = parts.to_vec();
    let donors: Vec<usize> = (0..e.len()).filter(|&i| e[i] >= 2).collect();
    if donors.is_empty() {
        return None;
    }
    let donor = donors[rng.gen_range(0..donors.len())];
    let receivers: Vec<usize> = (0..=e.len())
        .filter(|&j| j != donor && e.get(j).copied().unwrap_or(0) + 1 < e[donor])
        .collect();
    if receivers.is_empty() {
        return None;
    }
    let receiver = receivers[rng.gen_range(0..receivers.len())];
    e[donor] -= 1;
    if receiver == e.len() {
        e.push(1);
    } else {
        e[receiver] += 1;
    }
    Some(sorted_desc(e))
}

pub fn dalton_walk<R: Rng>(rng: &mut R, start: &[u64], steps: usize) -> Vec<u64> {
    let mut cur = start.to_vec();
    for _ in 0..steps {
        match dalton_step(rng, &cur) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

/// All non-decreasing sequences of length `len` with entries in `0..=max`.
pub fn nondecreasing(len: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(len: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            go(len, v, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, max, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing sequences with `lo[i] <= v[i] <= hi[i]`.
pub fn sandwiched(lo: &[u64], hi: &[u64]) -> Vec<Vec<u64>> {
    fn go(lo: &[u64], hi: &[u64], cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let i = cur.len();
        if i == lo.len() {
            out.push(cur.clone());
            return;
        }
        let start = lo[i].max(cur.last().copied().unwrap_or(0));
        for v in start..=hi[i] {
            cur.push(v);
            go(lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(lo, hi, &mut Vec::new(), &mut out);
    out
}

/// Every partition fitting in a `len × max` box (trailing zeros dropped).
pub fn partitions_in_box(len: usize, max: u64) -> Vec<Partition> {
    nondecreasing(len, max)
        .into_iter()
        .map(|mut v| {
            v.reverse();
            Partition::from_unsorted(v)
        })
        .collect()
}

/// Pairs `(d, t)` with `t <= d` componentwise inside the box.
pub fn nested_pairs(len: usize, max: u64) -> Vec<(Partition, Partition)> {
    let all = partitions_in_box(len, max);
    let mut out = Vec::new();
    for d in &all {
        for t in &all {
            if d.contains(t) {
                out.push((d.clone(), t.clone()));
            }
        }
    }
    out
}

/// Polynomials as exponent maps; `None` is the zero polynomial.
type Poly = Option<BTreeMap<String, u64>>;

fn poly_at(c: &PolyChain, position: isize) -> Poly {
    if position > c.len() as isize {
        return None;
    }
    let mut m = BTreeMap::new();
    if position >= 1 {
        for (i, f) in c.factors().iter().enumerate() {
            let e = c.exponents(i)[position as usize - 1];
            if e > 0 {
                m.insert(f.label.clone(), e);
            }
        }
    }
    Some(m)
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let (a, b) = (a.as_ref()?, b.as_ref()?);
    let mut out = a.clone();
    for (k, &v) in b {
        let e = out.entry(k.clone()).or_insert(0);
        *e = (*e).max(v);
    }
    Some(out)
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let (a, b) = (a.as_ref()?, b.as_ref()?);
    let mut out = a.clone();
    for (k, &v) in b {
        *out.entry(k.clone()).or_insert(0) += v;
    }
    Some(out)
}

/// `σ` degrees computed symbolically: build each `π_i` as an exponent map,
/// divide consecutive ones and take degrees.
pub fn sigma_oracle(delta: &PolyChain, eps: &PolyChain) -> Option<Vec<i64>> {
    let x = delta.len() as isize;
    let y = (eps.len() - delta.len()) as isize;
    let mut degree = BTreeMap::new();
    for c in [delta, eps] {
        for f in c.factors() {
            degree.insert(f.label.clone(), f.degree);
        }
    }
    let pis: Vec<BTreeMap<String, u64>> = (0..=y)
        .map(|i| {
            let mut acc: Poly = Some(BTreeMap::new());
            for j in 1..=x + i {
                acc = mul(&acc, &lcm(&poly_at(delta, j - i), &poly_at(eps, j)));
            }
            acc
        })
        .collect::<Option<_>>()?;
    let mut seq = Vec::new();
    for i in (1..=y as usize).rev() {
        let mut d = 0i64;
        for (label, &deg) in &degree {
            let hi = pis[i].get(label).copied().unwrap_or(0) as i64;
            let lo = pis[i - 1].get(label).copied().unwrap_or(0) as i64;
            d += deg as i64 * (hi - lo);
        }
        seq.push(d);
    }
    Some(seq)
}

/// Right-hand side of the identity with the partition operations done by
/// the counting oracle.
pub fn identity_oracle(delta: &PolyChain, eps: &PolyChain) -> Vec<u64> {
    let mut total: Vec<u64> = Vec::new();
    for (i, f) in eps.factors().iter().enumerate() {
        let g = sorted_desc(eps.exponents(i).to_vec());
        let a = match delta.factor_index(&f.label) {
            Some(j) => sorted_desc(delta.exponents(j).to_vec()),
            None => Vec::new(),
        };
        let (gd, ad) = (dual_oracle(&g), dual_oracle(&a));
        let diff: Vec<u64> = (0..gd.len())
            .map(|j| gd[j] - ad.get(j).copied().unwrap_or(0))
            .collect();
        let term = dual_oracle(&sorted_desc(diff));
        if total.len() < term.len() {
            total.resize(term.len(), 0);
        }
        for (j, v) in term.iter().enumerate() {
            total[j] += f.degree * v;
        }
    }
    sorted_desc(total)
}
