//! Counting simple vertex-labelled bipartite graphs with prescribed degree
//! sequences.
//!
//! `N(A, B)` depends only on the multisets of non-zero entries of `A` and `B`
//! and is symmetric, so every query is first reduced to a [`CountKey`] of two
//! partitions. Values are computed with the recurrence that removes one
//! vertex of degree `b` from one side and distributes its `b` edges over
//! distinct vertices of the other side. Terms of that sum that leave the same
//! multiset behind are grouped, weighted by a product of binomials.
//!
//! [`CountCache`] keeps two stores: complete dense tables for whole levels
//! (every pair of partitions of one sum), used when building transfer
//! matrices, and a sparse map for one-off queries.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, factorial, Partition, PartitionRanker};

/// Largest level stored densely. Every count at level `m` is at most `m!`,
/// and `34! < 2^128`.
pub const DENSE_LIMIT: u32 = 34;

/// Default sum bound for [`brute_force_count`].
pub const BRUTE_FORCE_THRESHOLD: u64 = 8;

/// An ordered list of vertex degrees; zeros allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DegreeSequence {
    entries: Vec<u32>,
}

impl DegreeSequence {
    pub fn new(entries: Vec<u32>) -> Self {
        DegreeSequence { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_unsorted(self.entries.clone())
    }
}

impl From<&Partition> for DegreeSequence {
    fn from(p: &Partition) -> Self {
        DegreeSequence::new(p.parts().to_vec())
    }
}

impl FromStr for DegreeSequence {
    type Err = Error;

    /// Comma-separated non-negative integers; the empty string is `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DegreeSequence::default());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad degree {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DegreeSequence::new)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

/// Canonical unordered pair of partitions with equal sums; the
/// lexicographically larger one comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountKey {
    first: Partition,
    second: Partition,
}

impl CountKey {
    pub fn new(a: Partition, b: Partition) -> Result<Self> {
        let (sa, sb) = (a.n() as u64, b.n() as u64);
        if sa != sb {
            return Err(Error::SumMismatch {
                first: sa,
                second: sb,
            });
        }
        Ok(if a >= b {
            CountKey {
                first: a,
                second: b,
            }
        } else {
            CountKey {
                first: b,
                second: a,
            }
        })
    }

    pub fn first(&self) -> &Partition {
        &self.first
    }

    pub fn second(&self) -> &Partition {
        &self.second
    }

    /// The common sum (number of edges).
    pub fn level(&self) -> u32 {
        self.first.n()
    }
}

impl fmt::Display for CountKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.first, self.second)
    }
}

/// Sorts both sequences, drops zeros and orders the pair.
pub fn canonicalize(a: &DegreeSequence, b: &DegreeSequence) -> Result<CountKey> {
    if a.total() != b.total() {
        return Err(Error::SumMismatch {
            first: a.total(),
            second: b.total(),
        });
    }
    CountKey::new(a.to_partition(), b.to_partition())
}

/// Which side of the key has a vertex removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotEnd {
    Smallest,
    Largest,
}

/// One step of the recurrence: the `expand` side has its vertices chosen as
/// the neighbours of a removed vertex of degree `value`, taken from the
/// `consume` end of the other side. `terms` is the ungrouped number of
/// subsets, `C(|expand|, value)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub expand: Side,
    pub consume: PivotEnd,
    pub value: u32,
    pub terms: u128,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Exact at every step: acc * (n - k + i) is divisible by i.
        acc = match acc.checked_mul((n - k + i) as u128) {
            Some(v) => v / i as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Picks the cheapest of the four expansions by comparing
/// `C(|A|, min B)`, `C(|A|, max B)`, `C(|B|, min A)`, `C(|B|, max A)`;
/// ties go to the earlier one in that list.
pub fn choose_pivot(a: &Partition, b: &Partition) -> Pivot {
    pivot_for(a.parts(), b.parts())
}

fn pivot_for(a: &[u32], b: &[u32]) -> Pivot {
    debug_assert!(!a.is_empty() && !b.is_empty());
    let (amin, amax) = (*a.last().unwrap(), a[0]);
    let (bmin, bmax) = (*b.last().unwrap(), b[0]);
    let options = [
        (
            Side::First,
            PivotEnd::Smallest,
            bmin,
            binomial(a.len() as u64, bmin as u64),
        ),
        (
            Side::First,
            PivotEnd::Largest,
            bmax,
            binomial(a.len() as u64, bmax as u64),
        ),
        (
            Side::Second,
            PivotEnd::Smallest,
            amin,
            binomial(b.len() as u64, amin as u64),
        ),
        (
            Side::Second,
            PivotEnd::Largest,
            amax,
            binomial(b.len() as u64, amax as u64),
        ),
    ];
    let mut best = options[0];
    for o in &options[1..] {
        if o.3 < best.3 {
            best = *o;
        }
    }
    Pivot {
        expand: best.0,
        consume: best.1,
        value: best.2,
        terms: best.3,
    }
}

/// Small exact binomials for grouping weights.
struct Binomials {
    table: Vec<Vec<u128>>,
}

impl Binomials {
    fn new(max: usize) -> Self {
        let mut table = vec![vec![0u128; max + 1]; max + 1];
        for n in 0..=max {
            table[n][0] = 1;
            for k in 1..=n {
                table[n][k] = table[n - 1][k - 1].saturating_add(table[n - 1][k]);
            }
        }
        Binomials { table }
    }

    #[inline]
    fn get(&self, n: usize, k: usize) -> u128 {
        self.table[n][k]
    }
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

/// Memo of graph counts.
#[derive(Clone, Debug, Default)]
pub struct CountCache {
    dense: Vec<Option<Vec<u128>>>,
    sparse: HashMap<CountKey, BigUint>,
    ranker: Option<PartitionRanker>,
}

impl CountCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of stored values, dense and sparse.
    pub fn len(&self) -> usize {
        self.dense.iter().flatten().map(|t| t.len()).sum::<usize>() + self.sparse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest level whose dense table is complete, together with all below.
    pub fn dense_through(&self) -> Option<u32> {
        let filled = self.dense.iter().take_while(|t| t.is_some()).count();
        (filled > 0).then(|| filled as u32 - 1)
    }

    fn is_dense(&self, level: u32) -> bool {
        matches!(self.dense.get(level as usize), Some(Some(_)))
    }

    fn ensure_ranker(&mut self, max: u32) {
        if self.ranker.as_ref().is_none_or(|r| r.max() < max) {
            self.ranker = Some(PartitionRanker::new(max));
        }
    }

    /// Looks up a stored value without computing anything.
    pub fn get(&self, key: &CountKey) -> Option<BigUint> {
        let level = key.level();
        if self.is_dense(level) {
            let r = self
                .ranker
                .as_ref()
                .expect("ranker exists for dense levels");
            let i = r.rank(key.first.parts());
            let j = r.rank(key.second.parts());
            let table = self.dense[level as usize].as_ref().unwrap();
            return Some(BigUint::from(table[tri(i, j)]));
        }
        self.sparse.get(key).cloned()
    }

    /// Stores a value (used by the cache file loader).
    pub fn insert(&mut self, key: CountKey, value: BigUint) {
        self.sparse.insert(key, value);
    }

    /// The dense value for partitions of `level` at positions `i`, `j` of the
    /// canonical order. The level must have been filled.
    pub(crate) fn dense_value(&self, level: u32, i: usize, j: usize) -> u128 {
        self.dense[level as usize].as_ref().expect("level filled")[tri(i, j)]
    }

    /// Fills complete dense tables for every level up to `n`, bottom-up.
    pub fn fill_through(&mut self, n: u32) -> Result<()> {
        if n > DENSE_LIMIT {
            return Err(Error::BoundExceeded {
                n,
                bound: DENSE_LIMIT,
            });
        }
        self.ensure_ranker(n);
        if self.dense.len() <= n as usize {
            self.dense.resize(n as usize + 1, None);
        }
        let binomials = Binomials::new(n as usize + 1);
        for level in 0..=n {
            if self.is_dense(level) {
                continue;
            }
            let table = self.compute_level(level, &binomials);
            self.dense[level as usize] = Some(table);
        }
        Ok(())
    }

    fn compute_level(&self, level: u32, binomials: &Binomials) -> Vec<u128> {
        let index = enumerate_partitions(level);
        let parts: Vec<&[u32]> = index.iter().map(|p| p.parts()).collect();
        let p = parts.len();
        let ranker = self.ranker.as_ref().expect("ranker");
        let mut table = vec![0u128; p * (p + 1) / 2];
        let mut scratch = Scratch::default();
        for j in 0..p {
            for i in 0..=j {
                let value = if self.sparse.is_empty() {
                    None
                } else {
                    let key = CountKey {
                        first: index.get(i).clone(),
                        second: index.get(j).clone(),
                    };
                    self.sparse.get(&key).and_then(|v| v.to_u128())
                };
                table[tri(i, j)] = match value {
                    Some(v) => v,
                    None => {
                        self.dense_recurrence(parts[i], parts[j], ranker, binomials, &mut scratch)
                    }
                };
            }
        }
        table
    }

    /// One entry of a level from the complete tables below it.
    fn dense_recurrence(
        &self,
        a: &[u32],
        b: &[u32],
        ranker: &PartitionRanker,
        binomials: &Binomials,
        scratch: &mut Scratch,
    ) -> u128 {
        if a.is_empty() && b.is_empty() {
            return 1;
        }
        if let Some(v) = trivial_value(a, b, binomials) {
            return v;
        }
        let pivot = pivot_for(a, b);
        let (expand, other) = match pivot.expand {
            Side::First => (a, b),
            Side::Second => (b, a),
        };
        let rest_other: &[u32] = match pivot.consume {
            PivotEnd::Smallest => &other[..other.len() - 1],
            PivotEnd::Largest => &other[1..],
        };
        let c = pivot.value;
        let sub_level = a.iter().sum::<u32>() - c;
        let table = self.dense[sub_level as usize]
            .as_ref()
            .expect("lower level filled");
        let other_rank = ranker.rank(rest_other);

        scratch.groups.clear();
        for &v in expand {
            match scratch.groups.last_mut() {
                Some((gv, gm)) if *gv == v => *gm += 1,
                _ => scratch.groups.push((v, 1)),
            }
        }
        let mut total: u128 = 0;
        let state = RankState {
            rest: sub_level as usize,
            cap: sub_level as usize,
            rank: 0,
        };
        distribute(
            &scratch.groups,
            0,
            c as usize,
            1,
            state,
            ranker,
            binomials,
            &mut |rank, weight| {
                total += weight * table[tri(rank, other_rank)];
            },
        );
        total
    }

    /// `N` for a canonical key, using and extending the memo.
    fn count_key(&mut self, key: &CountKey) -> BigUint {
        if let Some(v) = self.get(key) {
            return v;
        }
        let value = self.sparse_recurrence(key);
        self.sparse.insert(key.clone(), value.clone());
        value
    }

    fn sparse_recurrence(&mut self, key: &CountKey) -> BigUint {
        let (a, b) = (key.first.parts(), key.second.parts());
        if a.is_empty() {
            return BigUint::one();
        }
        if a[0] as usize > b.len() || b[0] as usize > a.len() {
            return BigUint::zero();
        }
        if b[0] == 1 {
            return multinomial(a);
        }
        if a[0] == 1 {
            return multinomial(b);
        }
        let pivot = pivot_for(a, b);
        let (expand, other) = match pivot.expand {
            Side::First => (a, b),
            Side::Second => (b, a),
        };
        let rest_other = match pivot.consume {
            PivotEnd::Smallest => other[..other.len() - 1].to_vec(),
            PivotEnd::Largest => other[1..].to_vec(),
        };
        let rest_other = Partition::from_canonical_unchecked(rest_other);
        let groups = Partition::from_canonical_unchecked(expand.to_vec()).multiplicities();
        let mut terms: Vec<(Vec<u32>, BigUint)> = Vec::new();
        collect_terms(
            &groups,
            0,
            pivot.value as usize,
            BigUint::one(),
            &mut Vec::new(),
            &mut terms,
        );
        let mut total = BigUint::zero();
        for (parts, weight) in terms {
            let sub = CountKey::new(
                Partition::from_canonical_unchecked(parts),
                rest_other.clone(),
            )
            .expect("equal sums by construction");
            total += weight * self.count_key(&sub);
        }
        total
    }

    /// Writes every stored value as `first;second;count`, one per line.
    pub fn save<W: Write>(&self, mut w: W) -> Result<()> {
        for (level, table) in self.dense.iter().enumerate() {
            let Some(table) = table else { continue };
            let index = enumerate_partitions(level as u32);
            for j in 0..index.len() {
                for i in 0..=j {
                    writeln!(w, "{};{};{}", index.get(i), index.get(j), table[tri(i, j)])?;
                }
            }
        }
        let mut sparse: Vec<_> = self
            .sparse
            .iter()
            .filter(|(k, _)| !self.is_dense(k.level()))
            .collect();
        sparse.sort_by(|x, y| (x.0.level(), x.0).cmp(&(y.0.level(), y.0)));
        for (k, v) in sparse {
            writeln!(w, "{k};{v}")?;
        }
        Ok(())
    }

    /// Reads a file written by [`CountCache::save`]. Blank lines are skipped.
    pub fn load<R: BufRead>(r: R) -> Result<Self> {
        let mut cache = CountCache::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(';').collect();
            if fields.len() != 3 {
                return Err(Error::CacheFormat {
                    line: lineno,
                    reason: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let bad = |reason: String| Error::CacheFormat {
                line: lineno,
                reason,
            };
            let a: Partition = fields[0].parse().map_err(|e: Error| bad(e.to_string()))?;
            let b: Partition = fields[1].parse().map_err(|e: Error| bad(e.to_string()))?;
            let value: BigUint = fields[2]
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad count {:?}", fields[2])))?;
            let key = CountKey::new(a, b).map_err(|e| bad(e.to_string()))?;
            cache.insert(key, value);
        }
        Ok(cache)
    }
}

#[derive(Default)]
struct Scratch {
    groups: Vec<(u32, usize)>,
}

/// Partial rank of a partition being emitted part by part.
#[derive(Clone, Copy)]
struct RankState {
    rest: usize,
    cap: usize,
    rank: usize,
}

impl RankState {
    #[inline]
    fn push(self, ranker: &PartitionRanker, part: usize, copies: usize) -> RankState {
        let mut s = self;
        for _ in 0..copies {
            s.rank += ranker.lead(s.rest, s.cap.min(s.rest)) - ranker.lead(s.rest, part);
            s.rest -= part;
            s.cap = part;
        }
        s
    }
}

/// Enumerates how `remaining` decrements spread over the multiplicity
/// groups, calling `emit(rank, weight)` for every resulting partition.
#[allow(clippy::too_many_arguments)]
fn distribute(
    groups: &[(u32, usize)],
    g: usize,
    remaining: usize,
    weight: u128,
    state: RankState,
    ranker: &PartitionRanker,
    binomials: &Binomials,
    emit: &mut impl FnMut(usize, u128),
) {
    if g == groups.len() {
        if remaining == 0 {
            emit(state.rank, weight);
        }
        return;
    }
    let (value, mult) = groups[g];
    let value = value as usize;
    // Capacity of the groups after this one.
    let later: usize = groups[g + 1..].iter().map(|&(_, m)| m).sum();
    let lo = remaining.saturating_sub(later);
    let hi = remaining.min(mult);
    for k in lo..=hi {
        let mut s = state.push(ranker, value, mult - k);
        if value > 1 {
            s = s.push(ranker, value - 1, k);
        }
        distribute(
            groups,
            g + 1,
            remaining - k,
            weight * binomials.get(mult, k),
            s,
            ranker,
            binomials,
            emit,
        );
    }
}

fn collect_terms(
    groups: &[(u32, usize)],
    g: usize,
    remaining: usize,
    weight: BigUint,
    parts: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, BigUint)>,
) {
    if g == groups.len() {
        if remaining == 0 {
            out.push((parts.clone(), weight));
        }
        return;
    }
    let (value, mult) = groups[g];
    let later: usize = groups[g + 1..].iter().map(|&(_, m)| m).sum();
    for k in remaining.saturating_sub(later)..=remaining.min(mult) {
        let len = parts.len();
        parts.extend(std::iter::repeat_n(value, mult - k));
        if value > 1 {
            parts.extend(std::iter::repeat_n(value - 1, k));
        }
        let w = &weight * binomial(mult as u64, k as u64);
        collect_terms(groups, g + 1, remaining - k, w, parts, out);
        parts.truncate(len);
    }
}

/// Zero when a degree exceeds the number of vertices on the other side;
/// the multinomial when one side is all ones.
#[inline]
fn trivial_value(a: &[u32], b: &[u32], binomials: &Binomials) -> Option<u128> {
    if a[0] as usize > b.len() || b[0] as usize > a.len() {
        return Some(0);
    }
    let ones_side = if b[0] == 1 {
        a
    } else if a[0] == 1 {
        b
    } else {
        return None;
    };
    let mut rest: usize = ones_side.iter().map(|&x| x as usize).sum();
    let mut acc: u128 = 1;
    for &x in ones_side {
        acc *= binomials.get(rest, x as usize);
        rest -= x as usize;
    }
    Some(acc)
}

/// `(Σ a)! / Π a_i!`.
fn multinomial(a: &[u32]) -> BigUint {
    let total: u32 = a.iter().sum();
    let mut v = factorial(total);
    for &x in a {
        v /= factorial(x);
    }
    v
}

/// `N(A, B)`, the number of simple bipartite graphs on labelled vertex
/// sides with degree sequences `A` and `B`.
pub fn count_graphs(
    a: &DegreeSequence,
    b: &DegreeSequence,
    cache: &mut CountCache,
) -> Result<BigUint> {
    let key = canonicalize(a, b)?;
    Ok(count_for_key(&key, cache))
}

/// `N` for an already canonical key.
pub fn count_for_key(key: &CountKey, cache: &mut CountCache) -> BigUint {
    cache.count_key(key)
}

/// Independent count by direct enumeration: each vertex of `B` picks a set
/// of distinct neighbours in `A`, and complete assignments that exhaust
/// every degree of `A` are counted.
pub fn brute_force_count(a: &DegreeSequence, b: &DegreeSequence) -> Result<BigUint> {
    brute_force_count_with(a, b, BRUTE_FORCE_THRESHOLD)
}

pub fn brute_force_count_with(
    a: &DegreeSequence,
    b: &DegreeSequence,
    threshold: u64,
) -> Result<BigUint> {
    if a.total() != b.total() {
        return Err(Error::SumMismatch {
            first: a.total(),
            second: b.total(),
        });
    }
    if a.total() > threshold {
        return Err(Error::ThresholdExceeded {
            sum: a.total(),
            threshold,
        });
    }
    let mut left: Vec<u32> = a.entries().to_vec();
    let mut count = 0u64;
    assign(&mut left, b.entries(), &mut count);
    Ok(BigUint::from(count))
}

fn assign(left: &mut [u32], right: &[u32], count: &mut u64) {
    match right.split_first() {
        None => {
            if left.iter().all(|&d| d == 0) {
                *count += 1;
            }
        }
        Some((&deg, rest)) => choose(left, 0, deg, rest, count),
    }
}

/// Chooses `k` distinct left vertices from index `from` on.
fn choose(left: &mut [u32], from: usize, k: u32, rest: &[u32], count: &mut u64) {
    if k == 0 {
        assign(left, rest, count);
        return;
    }
    for i in from..left.len() {
        if left[i] > 0 {
            left[i] -= 1;
            choose(left, i + 1, k - 1, rest, count);
            left[i] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec())
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn count(a: &[u32], b: &[u32]) -> BigUint {
        count_graphs(&seq(a), &seq(b), &mut CountCache::new()).unwrap()
    }

    #[test]
    fn canonical_keys() {
        let k = canonicalize(&seq(&[1, 2, 0, 1]), &seq(&[2, 2])).unwrap();
        assert_eq!((k.first(), k.second()), (&part("2+2"), &part("2+1+1")));
        let k = canonicalize(&seq(&[3]), &seq(&[1, 1, 1])).unwrap();
        assert_eq!((k.first(), k.second()), (&part("3"), &part("1+1+1")));
        let k = canonicalize(&seq(&[]), &seq(&[])).unwrap();
        assert!(k.first().is_empty() && k.second().is_empty());
        assert!(matches!(
            canonicalize(&seq(&[2]), &seq(&[1])),
            Err(Error::SumMismatch {
                first: 2,
                second: 1
            })
        ));
    }

    #[test]
    fn known_counts() {
        assert_eq!(count(&[2, 1, 1], &[1, 1, 1, 1]), 12u32.into());
        assert_eq!(count(&[2, 2], &[2, 1, 1]), 2u32.into());
        assert_eq!(count(&[1], &[1]), 1u32.into());
        for n in 2..8 {
            assert_eq!(count(&[n], &[n]), 0u32.into());
        }
        assert_eq!(count(&[], &[]), 1u32.into());
        assert_eq!(count(&[0, 0], &[0]), 1u32.into());
    }

    #[test]
    fn brute_force_matches_on_frozen_value() {
        // Frozen from the brute-force oracle.
        let oracle = brute_force_count(&seq(&[3, 2, 1]), &seq(&[2, 2, 1, 1])).unwrap();
        assert_eq!(oracle, 8u32.into());
        assert_eq!(count(&[3, 2, 1], &[2, 2, 1, 1]), oracle);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_count(&seq(&[1, 1, 1, 1]), &seq(&[1, 1, 1, 1])).unwrap(),
            24u32.into()
        );
        assert_eq!(
            brute_force_count(&seq(&[2]), &seq(&[1, 1])).unwrap(),
            1u32.into()
        );
        assert_eq!(
            brute_force_count(&seq(&[2, 2]), &seq(&[2, 2])).unwrap(),
            1u32.into()
        );
        assert!(matches!(
            brute_force_count(&seq(&[9]), &seq(&[9])),
            Err(Error::ThresholdExceeded {
                sum: 9,
                threshold: 8
            })
        ));
        assert!(brute_force_count_with(&seq(&[9]), &seq(&[9]), 9).is_ok());
    }

    #[test]
    fn pivots() {
        let p = choose_pivot(&part("1+1+1+1"), &part("2+1+1"));
        assert_eq!(p.expand, Side::Second);
        assert_eq!(p.consume, PivotEnd::Smallest);
        assert_eq!((p.value, p.terms), (1, 3));
        let p = choose_pivot(&part("2+2"), &part("2+2"));
        assert_eq!(p.terms, 1);
        let p = choose_pivot(&part("5"), &part("5"));
        assert!(p.terms <= 1);
    }

    #[test]
    fn base_identity_against_multinomial() {
        let mut cache = CountCache::new();
        for n in 1..=10u32 {
            for a in enumerate_partitions(n).iter() {
                let got =
                    count_graphs(&a.into(), &(&Partition::ones(n)).into(), &mut cache).unwrap();
                assert_eq!(got, multinomial(a.parts()), "{a}");
            }
            let ones = Partition::ones(n);
            let got = count_graphs(&(&ones).into(), &(&ones).into(), &mut cache).unwrap();
            assert_eq!(got, factorial(n));
        }
    }

    #[test]
    fn oracle_equivalence_up_to_eight() {
        let mut cache = CountCache::new();
        for n in 0..=8u32 {
            let idx = enumerate_partitions(n);
            for a in idx.iter() {
                for b in idx.iter() {
                    let fast = count_graphs(&a.into(), &b.into(), &mut cache).unwrap();
                    let slow = brute_force_count(&a.into(), &b.into()).unwrap();
                    assert_eq!(fast, slow, "N({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn dense_and_sparse_agree() {
        let mut dense = CountCache::new();
        dense.fill_through(14).unwrap();
        assert_eq!(dense.dense_through(), Some(14));
        let mut sparse = CountCache::new();
        for n in [9u32, 12, 14] {
            let idx = enumerate_partitions(n);
            for (i, a) in idx.iter().enumerate().step_by(3) {
                for (j, b) in idx.iter().enumerate().step_by(5) {
                    let s = count_graphs(&a.into(), &b.into(), &mut sparse).unwrap();
                    assert_eq!(BigUint::from(dense.dense_value(n, i, j)), s, "N({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn dense_limit_enforced() {
        assert!(matches!(
            CountCache::new().fill_through(DENSE_LIMIT + 1),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn large_counts_are_exact() {
        // Past the dense limit the sparse path keeps full precision.
        let ones = Partition::ones(36);
        let mut cache = CountCache::new();
        let v = count_graphs(&(&ones).into(), &(&ones).into(), &mut cache).unwrap();
        assert_eq!(v, factorial(36));
    }

    #[test]
    fn cache_file_round_trip() {
        let mut cache = CountCache::new();
        cache.fill_through(5).unwrap();
        count_graphs(&seq(&[4, 3, 2]), &seq(&[3, 3, 3]), &mut cache).unwrap();
        let mut buf = Vec::new();
        cache.save(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().any(|l| l == "2+1+1;1+1+1+1;12"));
        let loaded = CountCache::load(&buf[..]).unwrap();
        assert_eq!(loaded.len(), text.lines().count());
        let key = canonicalize(&seq(&[4, 3, 2]), &seq(&[3, 3, 3])).unwrap();
        assert_eq!(loaded.get(&key), cache.get(&key));
        // A loaded cache seeds later dense fills.
        let mut seeded = loaded;
        seeded.fill_through(6).unwrap();
        assert_eq!(
            seeded.get(&canonicalize(&seq(&[3, 3]), &seq(&[2, 2, 2])).unwrap()),
            Some(1u32.into())
        );
    }

    #[test]
    fn cache_file_errors_name_the_line() {
        let bad = "2+1;1+1+1;3\n\n3;2+1\n";
        match CountCache::load(bad.as_bytes()) {
            Err(Error::CacheFormat { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match CountCache::load("2+1;1+1;3\n".as_bytes()) {
            Err(Error::CacheFormat { line: 1, reason }) => assert!(reason.contains("sums")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(CountCache::load("2+1;1+1+1;x\n".as_bytes()).is_err());
        assert!(CountCache::load("2+q;1+1+1;3\n".as_bytes()).is_err());
    }

    fn sequence_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (1u32..=10).prop_flat_map(|n| (composition(n), composition(n)))
    }

    fn composition(n: u32) -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0u32..=n, 0..=12).prop_map(move |mut v| {
            // Force the sum to n by trimming and topping up the last entry.
            let mut total = 0;
            for x in v.iter_mut() {
                let room = n - total;
                *x = (*x).min(room);
                total += *x;
            }
            v.push(n - total);
            v
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_permutation_invariant((a, b) in sequence_pair(), seed in any::<u64>()) {
            let mut cache = CountCache::new();
            let ab = count_graphs(&seq(&a), &seq(&b), &mut cache).unwrap();
            let ba = count_graphs(&seq(&b), &seq(&a), &mut cache).unwrap();
            prop_assert_eq!(&ab, &ba);
            let mut shuffled = a.clone();
            let shift = (seed as usize) % shuffled.len().max(1);
            shuffled.rotate_left(shift);
            shuffled.push(0);
            shuffled.insert(0, 0);
            let fresh = count_graphs(&seq(&shuffled), &seq(&b), &mut CountCache::new()).unwrap();
            prop_assert_eq!(ab, fresh);
        }
    }
}
