//! Integer partitions: enumeration in canonical order, ranking, class counts,
//! signs, multiset joins and the refinement matrix.
//!
//! The canonical order on partitions of `n` is decreasing lexicographic on
//! the part sequences, so for `n = 4` the order is
//! `4, 3+1, 2+2, 2+1+1, 1+1+1+1`. Every partition-indexed matrix in this
//! crate uses that order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::BigMatrix;

/// A partition of a non-negative integer: positive parts, non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts that are already canonical.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} contains a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not non-increasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts the entries non-increasingly and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub(crate) fn from_canonical_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition { parts }
    }

    /// The partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `[n]`.
    pub fn single(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// `[1, ..., 1]` with `n` ones.
    pub fn ones(n: u32) -> Self {
        Partition {
            parts: vec![1; n as usize],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> Option<u32> {
        self.parts.first().copied()
    }

    pub fn smallest(&self) -> Option<u32> {
        self.parts.last().copied()
    }

    /// Distinct part values with their multiplicities, largest value first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn is_all_ones(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"2+1+1"`. The empty string is the partition of 0. Parts may
    /// come in any order; the result is canonical.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split('+') {
            let v: u32 = tok
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPartition(format!("bad part {tok:?} in {s:?}")))?;
            if v == 0 {
                return Err(Error::InvalidPartition(format!("zero part in {s:?}")));
            }
            parts.push(v);
        }
        Ok(Partition::from_unsorted(parts))
    }
}

/// Number of partitions of `n`.
pub fn partition_count(n: u32) -> u64 {
    PartitionRanker::new(n).count(n)
}

/// Ranks partitions of any `m <= max` within the canonical order of `m`,
/// without hashing.
///
/// `fewer[m][k]` is the number of partitions of `m` with all parts `<= k`;
/// `lead[m][j]` is the number of partitions of `m` whose first part is `<= j`.
#[derive(Clone, Debug)]
pub struct PartitionRanker {
    max: u32,
    fewer: Vec<Vec<u64>>,
    lead: Vec<Vec<u64>>,
}

impl PartitionRanker {
    pub fn new(max: u32) -> Self {
        let m = max as usize;
        let mut fewer = vec![vec![0u64; m + 1]; m + 1];
        fewer[0].fill(1);
        for s in 1..=m {
            for k in 1..=m {
                let without = fewer[s][k - 1];
                let with = if k <= s { fewer[s - k][k] } else { 0 };
                fewer[s][k] = without + with;
            }
        }
        let mut lead = vec![vec![0u64; m + 1]; m + 1];
        for s in 1..=m {
            for j in 1..=m {
                let exact = if j <= s { fewer[s - j][j] } else { 0 };
                lead[s][j] = lead[s][j - 1] + exact;
            }
        }
        PartitionRanker { max, fewer, lead }
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    /// Number of partitions of `rest` whose first part is at most `j`.
    #[inline]
    pub(crate) fn lead(&self, rest: usize, j: usize) -> usize {
        self.lead[rest][j] as usize
    }

    /// p(m).
    pub fn count(&self, m: u32) -> u64 {
        self.fewer[m as usize][m as usize]
    }

    /// Position of a canonical partition (given as parts) among all
    /// partitions of its sum, in canonical order.
    #[inline]
    pub fn rank(&self, parts: &[u32]) -> usize {
        let mut rest: usize = parts.iter().map(|&p| p as usize).sum();
        debug_assert!(rest <= self.max as usize);
        let mut cap = rest;
        let mut r = 0u64;
        for &p in parts {
            let p = p as usize;
            let top = cap.min(rest);
            r += self.lead[rest][top] - self.lead[rest][p];
            rest -= p;
            cap = p;
        }
        r as usize
    }
}

/// All partitions of a fixed `n` in canonical order, with fast lookup.
#[derive(Clone, Debug)]
pub struct PartitionIndex {
    n: u32,
    partitions: Vec<Partition>,
    ranker: PartitionRanker,
}

impl PartitionIndex {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.partitions[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Partition> {
        self.partitions.iter()
    }

    /// Position of `p`, or `None` if it is not a partition of `n`.
    pub fn position(&self, p: &Partition) -> Option<usize> {
        if p.n() != self.n {
            return None;
        }
        Some(self.ranker.rank(p.parts()))
    }

    pub fn ranker(&self) -> &PartitionRanker {
        &self.ranker
    }

    /// Labels in the `"+"`-joined form, in index order.
    pub fn labels(&self) -> Vec<String> {
        self.partitions.iter().map(|p| p.to_string()).collect()
    }
}

/// Lists every partition of `n` in canonical (decreasing lexicographic) order.
pub fn enumerate_partitions(n: u32) -> PartitionIndex {
    let mut partitions = Vec::new();
    let mut current = Vec::new();
    generate(n, n, &mut current, &mut partitions);
    PartitionIndex {
        n,
        partitions,
        ranker: PartitionRanker::new(n),
    }
}

fn generate(rest: u32, cap: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::from_canonical_unchecked(current.clone()));
        return;
    }
    for first in (1..=cap.min(rest)).rev() {
        current.push(first);
        generate(rest - first, first, current, out);
        current.pop();
    }
}

/// `(-1)^(n - r)` for a partition of `n` with `r` parts.
pub fn sign(alpha: &Partition) -> i32 {
    if (alpha.n() as usize - alpha.len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of atom subsets of partition type `alpha`: the number of distinct
/// orderings of its parts, `r! / (m_1! ... m_k!)`.
pub fn class_count(alpha: &Partition) -> BigUint {
    let mut num = factorial(alpha.len() as u32);
    for (_, m) in alpha.multiplicities() {
        num /= factorial(m as u32);
    }
    num
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Multiset union of the parts of two partitions.
pub fn join(partial: &Partition, addition: &Partition) -> Partition {
    let mut parts = Vec::with_capacity(partial.len() + addition.len());
    parts.extend_from_slice(partial.parts());
    parts.extend_from_slice(addition.parts());
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::from_canonical_unchecked(parts)
}

/// A multiset of partitions with arbitrary-precision multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionMultiset {
    counts: HashMap<Partition, BigUint>,
}

impl PartitionMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{{ [] }}`, the neutral element for [`PartitionMultiset::join_with`].
    pub fn unit() -> Self {
        let mut m = Self::new();
        m.insert(Partition::empty(), BigUint::one());
        m
    }

    /// Every partition `γ` of `m`, with multiplicity `class_count(γ)`.
    pub fn classes_of(m: u32) -> Self {
        let mut out = Self::new();
        for gamma in enumerate_partitions(m).partitions {
            let c = class_count(&gamma);
            out.insert(gamma, c);
        }
        out
    }

    pub fn insert(&mut self, p: Partition, multiplicity: BigUint) {
        if multiplicity.is_zero() {
            return;
        }
        *self.counts.entry(p).or_insert_with(BigUint::zero) += multiplicity;
    }

    pub fn multiplicity(&self, p: &Partition) -> BigUint {
        self.counts.get(p).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &BigUint)> {
        self.counts.iter()
    }

    /// The image of `self × other` under joining of partitions.
    pub fn join_with(&self, other: &PartitionMultiset) -> PartitionMultiset {
        let mut out = PartitionMultiset::new();
        for (a, ma) in &self.counts {
            for (b, mb) in &other.counts {
                out.insert(join(a, b), ma * mb);
            }
        }
        out
    }
}

/// Sparse rows of the refinement matrix: `rows[i]` lists `(j, M[i][j])` for
/// the non-zero entries, `j` increasing.
pub fn refinement_rows(n: u32) -> Vec<Vec<(usize, BigUint)>> {
    let index = enumerate_partitions(n);
    let mut rows = vec![Vec::new(); index.len()];
    let classes: Vec<PartitionMultiset> = (0..=n).map(PartitionMultiset::classes_of).collect();
    // Depth-first over part sequences: partitions sharing a prefix share the
    // partial product of class multisets.
    let mut stack = vec![PartitionMultiset::unit()];
    let mut prefix = Vec::new();
    refine_dfs(n, n, &mut prefix, &mut stack, &classes, &index, &mut rows);
    for row in &mut rows {
        row.sort_unstable_by_key(|(j, _)| *j);
    }
    rows
}

fn refine_dfs(
    rest: u32,
    cap: u32,
    prefix: &mut Vec<u32>,
    stack: &mut Vec<PartitionMultiset>,
    classes: &[PartitionMultiset],
    index: &PartitionIndex,
    rows: &mut [Vec<(usize, BigUint)>],
) {
    if rest == 0 {
        let row = index.ranker.rank(prefix);
        let top = stack.last().expect("non-empty stack");
        rows[row] = top
            .iter()
            .map(|(beta, m)| (index.ranker.rank(beta.parts()), m.clone()))
            .collect();
        return;
    }
    for part in (1..=cap.min(rest)).rev() {
        let next = stack
            .last()
            .expect("non-empty stack")
            .join_with(&classes[part as usize]);
        stack.push(next);
        prefix.push(part);
        refine_dfs(rest - part, part, prefix, stack, classes, index, rows);
        prefix.pop();
        stack.pop();
    }
}

/// `M[α][β]`: the number of subsets of a fixed atom subset of type `α` that
/// have type `β`, built from products of class multisets.
pub fn refinement_matrix(n: u32) -> Result<BigMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "refinement matrix needs n >= 1".into(),
        ));
    }
    let index = enumerate_partitions(n);
    let p = index.len();
    let mut entries = vec![0i128; p * p];
    for (i, row) in refinement_rows(n).into_iter().enumerate() {
        for (j, m) in row {
            entries[i * p + j] = i128::try_from(m).map_err(|_| {
                Error::InvariantViolation("refinement count exceeds 128 bits".into())
            })?;
        }
    }
    let labels = index.labels();
    BigMatrix::from_i128(p, p, entries)?.with_labels(Some(labels.clone()), Some(labels))
}
