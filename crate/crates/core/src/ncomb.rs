//! Noncrossing partitions: enumeration, crossing test, type counts, weight
//! sums and the Kreweras complement.

use crate::charparams::TSeries;
use crate::error::{Error, Result};
use crate::fps::{qi, Q};
use num_bigint::BigUint;
use num_traits::One;
use std::fmt;

/// Largest ground set accepted by [`enumerate_nc`].
pub const MAX_ENUM_K: usize = 12;

/// A set partition of `{1..k}`; blocks sorted internally and by minimum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and normalizes the block order.
    pub fn new(k: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k + 1];
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::InvalidParams("empty block".into()));
            }
            b.sort_unstable();
            for &e in b.iter() {
                if e == 0 || e > k || seen[e] {
                    return Err(Error::InvalidParams(format!("element {e} invalid or repeated")));
                }
                seen[e] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::InvalidParams("blocks do not cover the ground set".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { k, blocks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Sorted block sizes.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    }

    /// Relabels `i -> i - 1`, with `1 -> k`.
    pub fn rotated(&self) -> SetPartition {
        let k = self.k;
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&e| if e == 1 { k } else { e - 1 }).collect())
            .collect();
        SetPartition::new(k, blocks).expect("rotation preserves validity")
    }

    fn labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.k + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &e in b {
                lab[e] = i;
            }
        }
        lab
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let s: Vec<String> = b.iter().map(|e| e.to_string()).collect();
            write!(f, "{{{}}}", s.join(","))?;
        }
        Ok(())
    }
}

/// True iff no `a < b < c < d` has `a, c` in one block and `b, d` in another.
///
/// Scans left to right with a stack of open blocks: a block can only be
/// revisited when every block opened after it has already closed.
pub fn is_noncrossing(p: &SetPartition) -> bool {
    let lab = p.labels();
    let last: Vec<usize> = p.blocks.iter().map(|b| *b.last().unwrap()).collect();
    let first: Vec<usize> = p.blocks.iter().map(|b| b[0]).collect();
    let mut stack: Vec<usize> = Vec::new();
    for e in 1..=p.k {
        let b = lab[e];
        if e != first[b] && stack.last() != Some(&b) {
            return false;
        }
        if e == first[b] && e != last[b] {
            stack.push(b);
        } else if e != first[b] && e == last[b] {
            stack.pop();
        }
    }
    true
}

/// Noncrossing partitions of `{lo..hi-1}` as block lists.
///
/// The block of `lo` either is `{lo}` alone with the rest free, or continues
/// at some `j`: the gap `(lo, j)` is partitioned independently and `lo`
/// joins the block of `j` in a partition of `{j..hi-1}`.
fn nc_interval(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo >= hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mut rest in nc_interval(lo + 1, hi) {
        rest.push(vec![lo]);
        out.push(rest);
    }
    for j in lo + 1..hi {
        let inner = nc_interval(lo + 1, j);
        let outer = nc_interval(j, hi);
        for p2 in &outer {
            let mut p2 = p2.clone();
            let bj = p2.iter().position(|b| b.contains(&j)).unwrap();
            p2[bj].insert(0, lo);
            for p1 in &inner {
                let mut p = p2.clone();
                p.extend(p1.iter().cloned());
                out.push(p);
            }
        }
    }
    out
}

/// All of `NC_k`, sorted lexicographically by blocks ordered by minima.
pub fn enumerate_nc(k: usize) -> Result<Vec<SetPartition>> {
    if k == 0 || k > MAX_ENUM_K {
        return Err(Error::OrderOutOfRange { requested: k, available: MAX_ENUM_K });
    }
    let mut v: Vec<SetPartition> = nc_interval(1, k + 1)
        .into_iter()
        .map(|b| SetPartition::new(k, b).expect("generated partitions are valid"))
        .collect();
    v.sort();
    Ok(v)
}

/// Number of noncrossing partitions of `[k]` of type `1^{s_1} 2^{s_2} ...`:
/// `k (k-1) ... (k - l + 2) / (s_1! s_2! ...)` with `l = sum s_i`.
///
/// `s[i]` is the number of blocks of size `i + 1`.
pub fn count_by_type(k: usize, s: &[u64]) -> Result<BigUint> {
    let total: u64 = s.iter().enumerate().map(|(i, &m)| (i as u64 + 1) * m).sum();
    if total != k as u64 || k == 0 {
        return Err(Error::InvalidParams(format!("type sums to {total}, expected {k}")));
    }
    let l: u64 = s.iter().sum();
    let mut num = BigUint::one();
    for i in 0..l.saturating_sub(1) {
        num *= BigUint::from(k as u64 - i);
    }
    let mut den = BigUint::one();
    for &m in s {
        for j in 2..=m {
            den *= BigUint::from(j);
        }
    }
    Ok(num / den)
}

/// `sum over NC_k of t_{|B_1|} ... t_{|B_p|}` by explicit enumeration.
pub fn weight_sum(k: usize, t: &TSeries) -> Result<Q> {
    if t.len() < k {
        return Err(Error::OrderOutOfRange { requested: k, available: t.len() });
    }
    let mut total = qi(0);
    for p in enumerate_nc(k)? {
        let mut w = qi(1);
        for b in p.blocks() {
            w *= t.t(b.len());
        }
        total += w;
    }
    Ok(total)
}

/// Kreweras complement, computed as the permutation `pi^{-1} c` where `pi`
/// cycles each block in increasing order and `c = (1 2 ... k)`.
pub fn kreweras_complement(p: &SetPartition) -> Result<SetPartition> {
    if !is_noncrossing(p) {
        return Err(Error::InvalidParams(format!("{p} is crossing")));
    }
    let k = p.k;
    let mut pi_inv = vec![0; k + 1];
    for b in &p.blocks {
        for i in 0..b.len() {
            let next = b[(i + 1) % b.len()];
            pi_inv[next] = b[i];
        }
    }
    let kr = |x: usize| pi_inv[if x == k { 1 } else { x + 1 }];
    let mut seen = vec![false; k + 1];
    let mut blocks = Vec::new();
    for s in 1..=k {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = kr(x);
        }
        blocks.push(cyc);
    }
    SetPartition::new(k, blocks)
}
