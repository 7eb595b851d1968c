//! Ground truth at small `n`: permutation braids, the full finishing-set
//! automaton on all `2^(n-1)` atom subsets, the explicit reduction matrices
//! and direct enumeration of normal forms.
//!
//! Subsets are encoded in binary with bit `i - 1` for `σ_i`; matrices over
//! subsets use that order. Braid products compose permutations left to
//! right: `x · y` maps `i` to `π_y(π_x(i))`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bipartite::{CountCache, DegreeSequence};
use crate::error::{Error, Result};
use crate::growth::{build_reduced_system, growth_coefficients, ReducedSystem};
use crate::linalg::{BigMatrix, BigVector};
use crate::partitions::{enumerate_partitions, factorial, Partition};

/// Default largest `n` for the full automaton (cost `n! · 2^(n-1)`).
pub const AUTOMATON_BOUND: u32 = 8;
/// Default bounds for [`enumerate_normal_forms`].
pub const ENUMERATION_MAX_N: u32 = 6;
pub const ENUMERATION_MAX_LEN: usize = 5;

/// A simple element, given by its permutation of `1..=n` as an image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationBraid {
    perm: Vec<u32>,
}

impl PermutationBraid {
    pub fn new(perm: Vec<u32>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n + 1];
        for &x in &perm {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[x as usize] = true;
        }
        Ok(PermutationBraid { perm })
    }

    pub fn identity(n: u32) -> Self {
        PermutationBraid {
            perm: (1..=n).collect(),
        }
    }

    /// The half twist `Δ`, permutation `w₀`.
    pub fn longest(n: u32) -> Self {
        PermutationBraid {
            perm: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.perm.len() as u32
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    /// `π(i)` for `1 <= i <= n`.
    pub fn image(&self, i: u32) -> u32 {
        self.perm[i as usize - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &x) in self.perm.iter().enumerate() {
            inv[x as usize - 1] = i as u32 + 1;
        }
        PermutationBraid { perm: inv }
    }

    /// The product `self · other`.
    pub fn then(&self, other: &PermutationBraid) -> Self {
        PermutationBraid {
            perm: self.perm.iter().map(|&x| other.image(x)).collect(),
        }
    }

    /// `∂x`, the simple with `x · ∂x = Δ`.
    pub fn right_complement(&self) -> Self {
        self.inverse().then(&PermutationBraid::longest(self.n()))
    }

    pub fn is_identity(&self) -> bool {
        self.perm
            .iter()
            .enumerate()
            .all(|(i, &x)| x as usize == i + 1)
    }
}

/// All permutations of `1..=n` in lexicographic order of image lists.
pub fn all_simples(n: u32) -> Vec<PermutationBraid> {
    let mut perm: Vec<u32> = (1..=n).collect();
    let mut out = vec![PermutationBraid { perm: perm.clone() }];
    loop {
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return out;
        };
        let j = (i..perm.len())
            .rev()
            .find(|&j| perm[j] > perm[i - 1])
            .unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
        out.push(PermutationBraid { perm: perm.clone() });
    }
}

/// A subset of the atoms `σ_1, …, σ_{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSubset {
    n: u32,
    bits: u64,
}

impl AtomSubset {
    pub fn new(n: u32, bits: u64) -> Result<Self> {
        if n == 0 || n > 64 || bits >> (n - 1) != 0 {
            return Err(Error::InvalidArgument(format!(
                "bits {bits:#b} do not describe atoms of B_{n}"
            )));
        }
        Ok(AtomSubset { n, bits })
    }

    pub fn empty(n: u32) -> Self {
        AtomSubset { n, bits: 0 }
    }

    /// `𝒜`.
    pub fn full(n: u32) -> Self {
        AtomSubset {
            n,
            bits: (1u64 << (n - 1)) - 1,
        }
    }

    pub fn from_atoms(n: u32, atoms: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in atoms {
            if i == 0 || i >= n {
                return Err(Error::InvalidArgument(format!(
                    "σ{i} is not an atom of B_{n}"
                )));
            }
            bits |= 1 << (i - 1);
        }
        Ok(AtomSubset { n, bits })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, i: u32) -> bool {
        i >= 1 && i < self.n && self.bits >> (i - 1) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &AtomSubset) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn complement(&self) -> Self {
        AtomSubset {
            n: self.n,
            bits: AtomSubset::full(self.n).bits & !self.bits,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn atoms(&self) -> Vec<u32> {
        (1..self.n).filter(|&i| self.contains(i)).collect()
    }

    /// All subsets in binary order.
    pub fn all(n: u32) -> impl Iterator<Item = AtomSubset> {
        (0..1u64 << (n - 1)).map(move |bits| AtomSubset { n, bits })
    }
}

impl fmt::Display for AtomSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atoms().iter().map(|i| format!("s{i}")).collect();
        write!(f, "{{{}}}", atoms.join(","))
    }
}

/// `S(s)`: the descent set of `π_s`.
pub fn starting_set(b: &PermutationBraid) -> AtomSubset {
    descents(b.perm())
}

/// `F(s)`: the descent set of `π_s⁻¹`.
pub fn finishing_set(b: &PermutationBraid) -> AtomSubset {
    descents(b.inverse().perm())
}

fn descents(perm: &[u32]) -> AtomSubset {
    let n = perm.len() as u32;
    let mut bits = 0u64;
    for i in 1..perm.len() {
        if perm[i - 1] > perm[i] {
            bits |= 1 << (i - 1);
        }
    }
    AtomSubset { n, bits }
}

/// Sizes of the orbits of the parabolic subgroup generated by `X`, left to
/// right. Orbits are maximal runs of points joined by atoms of `X`.
pub fn orbits_and_degree(x: &AtomSubset) -> DegreeSequence {
    let mut sizes = Vec::new();
    let mut run = 1u32;
    for i in 1..x.n() {
        if x.contains(i) {
            run += 1;
        } else {
            sizes.push(run);
            run = 1;
        }
    }
    sizes.push(run);
    DegreeSequence::new(sizes)
}

/// The unique subset whose orbit sizes, left to right, are `parts`.
pub fn subset_from_composition(n: u32, parts: &[u32]) -> Result<AtomSubset> {
    if parts.iter().sum::<u32>() != n || parts.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "{parts:?} is not a composition of {n}"
        )));
    }
    let mut bits = 0u64;
    let mut start = 1u32;
    for &a in parts {
        for i in start..start + a - 1 {
            bits |= 1 << (i - 1);
        }
        start += a;
    }
    Ok(AtomSubset { n, bits })
}

/// The partition read as a composition, left to right.
pub fn subset_from_partition(n: u32, alpha: &Partition) -> Result<AtomSubset> {
    subset_from_composition(n, alpha.parts())
}

/// `τ(X)`, the partition type of `X`.
pub fn tau(x: &AtomSubset) -> Partition {
    orbits_and_degree(x).to_partition()
}

/// `φ(X) = τ(𝒜 ∖ X)`.
pub fn phi(x: &AtomSubset) -> Partition {
    tau(&x.complement())
}

/// `ψ(α)`: the member of `φ⁻¹(α)` with the smallest binary encoding. Its
/// complement has the parts of `α` in increasing order.
pub fn psi(n: u32, alpha: &Partition) -> Result<AtomSubset> {
    let mut increasing = alpha.parts().to_vec();
    increasing.reverse();
    Ok(subset_from_composition(n, &increasing)?.complement())
}

/// The finishing-set automaton with its start and accept vectors.
#[derive(Clone, Debug)]
pub struct FullAutomaton {
    pub n: u32,
    pub t: BigMatrix,
    pub u: BigVector,
    pub v: BigVector,
}

fn check_bound(n: u32, bound: u32) -> Result<()> {
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "the automaton needs n >= 2, got {n}"
        )));
    }
    Ok(())
}

fn subset_labels(n: u32) -> Vec<String> {
    AtomSubset::all(n).map(|x| x.to_string()).collect()
}

pub fn full_transition_matrix(n: u32) -> Result<FullAutomaton> {
    full_transition_matrix_with_bound(n, AUTOMATON_BOUND)
}

/// `T[Y][X]` counts the simples `s` taking state `X` to `Y`: to `F(s)` when
/// `S(s) ⊆ X`, to the failure state `∅` otherwise.
pub fn full_transition_matrix_with_bound(n: u32, bound: u32) -> Result<FullAutomaton> {
    check_bound(n, bound)?;
    let states = 1usize << (n - 1);
    let simples: Vec<(u64, u64)> = all_simples(n)
        .iter()
        .map(|s| (starting_set(s).bits, finishing_set(s).bits))
        .collect();
    let mut t = vec![0i128; states * states];
    for x in 0..states as u64 {
        for &(start, finish) in &simples {
            let y = if start & !x == 0 { finish } else { 0 };
            t[y as usize * states + x as usize] += 1;
        }
    }
    let labels = subset_labels(n);
    let t = BigMatrix::from_i128(states, states, t)?
        .with_labels(Some(labels.clone()), Some(labels.clone()))?;
    let u = BigVector::unit(states, states - 1).with_labels(Some(labels.clone()))?;
    let mut v = vec![BigInt::one(); states];
    v[0] = BigInt::zero();
    let v = BigVector::new(v).with_labels(Some(labels))?;
    Ok(FullAutomaton { n, t, u, v })
}

/// `P`, `Q`, `C`, `S` and `S⁻¹` over subsets in binary order and partitions
/// in canonical order.
#[derive(Clone, Debug)]
pub struct ReductionMatrices {
    pub p: BigMatrix,
    pub q: BigMatrix,
    pub c: BigMatrix,
    pub s: BigMatrix,
    pub s_inv: BigMatrix,
}

pub fn reduction_matrices(n: u32) -> Result<ReductionMatrices> {
    reduction_matrices_with_bound(n, AUTOMATON_BOUND)
}

pub fn reduction_matrices_with_bound(n: u32, bound: u32) -> Result<ReductionMatrices> {
    check_bound(n, bound)?;
    let index = enumerate_partitions(n);
    let states = 1usize << (n - 1);
    let subsets: Vec<AtomSubset> = AtomSubset::all(n).collect();
    let types: Vec<usize> = subsets
        .iter()
        .map(|x| index.position(&phi(x)).expect("φ(X) is a partition of n"))
        .collect();
    let chosen: Vec<u64> = index
        .iter()
        .map(|a| psi(n, a).map(|x| x.bits))
        .collect::<Result<_>>()?;
    let indicator = |b: bool| BigInt::from(b as i32);
    let p = BigMatrix::from_fn(index.len(), states, |a, x| indicator(types[x] == a));
    let q = BigMatrix::from_fn(states, index.len(), |x, a| indicator(chosen[a] == x as u64));
    let c = BigMatrix::from_fn(states, states, |x, y| {
        indicator(subsets[x] == subsets[y].complement())
    });
    let s = BigMatrix::from_fn(states, states, |x, y| {
        indicator(subsets[x].is_subset_of(&subsets[y]))
    });
    let s_inv = BigMatrix::from_fn(states, states, |x, y| {
        let (x, y) = (subsets[x], subsets[y]);
        if !x.is_subset_of(&y) {
            BigInt::zero()
        } else if (y.len() - x.len()) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        }
    });
    let pl = Some(index.labels());
    let sl = Some(subset_labels(n));
    Ok(ReductionMatrices {
        p: p.with_labels(pl.clone(), sl.clone())?,
        q: q.with_labels(sl.clone(), pl)?,
        c: c.with_labels(sl.clone(), sl.clone())?,
        s: s.with_labels(sl.clone(), sl.clone())?,
        s_inv: s_inv.with_labels(sl.clone(), sl)?,
    })
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub identity: String,
    pub n: u32,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("report serializes")
    }

    fn push(&mut self, identity: &str, n: u32, pass: bool, detail: impl Into<String>) {
        self.entries.push(ReportEntry {
            identity: identity.into(),
            n,
            pass,
            detail: detail.into(),
        });
    }

    fn check_eq(&mut self, identity: &str, n: u32, lhs: Result<BigMatrix>, rhs: &BigMatrix) {
        match lhs {
            Ok(m) if m == *rhs => self.push(identity, n, true, "exact match"),
            Ok(m) => self.push(identity, n, false, first_difference(&m, rhs)),
            Err(e) => self.push(identity, n, false, e.to_string()),
        }
    }
}

fn first_difference(a: &BigMatrix, b: &BigMatrix) -> String {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return format!(
            "shape {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        );
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j) != b.get(i, j) {
                return format!("entry ({i}, {j}): {} vs {}", a.get(i, j), b.get(i, j));
            }
        }
    }
    "equal".into()
}

/// The oracle pieces for one `n`, built once and shared by the checks.
pub struct OracleContext {
    pub automaton: FullAutomaton,
    pub reduction: ReductionMatrices,
    pub system: ReducedSystem,
}

impl OracleContext {
    pub fn new(n: u32, bound: u32, cache: &mut CountCache) -> Result<Self> {
        Ok(OracleContext {
            automaton: full_transition_matrix_with_bound(n, bound)?,
            reduction: reduction_matrices_with_bound(n, bound)?,
            system: build_reduced_system(n, cache)?,
        })
    }
}

pub fn verify_identities(n: u32) -> Result<VerificationReport> {
    let ctx = OracleContext::new(n, AUTOMATON_BOUND, &mut CountCache::new())?;
    Ok(check_identities(&ctx))
}

/// Every matrix identity relating the automaton to the reduced system.
pub fn check_identities(ctx: &OracleContext) -> VerificationReport {
    let n = ctx.automaton.n;
    let t = &ctx.automaton.t;
    let r = &ctx.reduction;
    let sys = &ctx.system;
    let mut report = VerificationReport::default();

    let pt = r.p.transpose();
    let s_inv_c_pt = r.s_inv.mat_mul(&r.c).and_then(|m| m.mat_mul(&pt));
    report.check_eq(
        "T = S^-1 C P^t Ntilde P",
        n,
        s_inv_c_pt
            .as_ref()
            .map_err(clone_err)
            .and_then(|m| m.mat_mul(sys.ntilde()))
            .and_then(|m| m.mat_mul(&r.p)),
        t,
    );
    report.check_eq(
        "Ttilde = P T Q",
        n,
        r.p.mat_mul(t).and_then(|m| m.mat_mul(&r.q)),
        sys.ttilde(),
    );
    report.check_eq(
        "T Q P = T",
        n,
        t.mat_mul(&r.q).and_then(|m| m.mat_mul(&r.p)),
        t,
    );
    report.check_eq(
        "P Q = I",
        n,
        r.p.mat_mul(&r.q),
        &BigMatrix::identity(sys.index().len()),
    );
    report.check_eq(
        "S S^-1 = I",
        n,
        r.s.mat_mul(&r.s_inv),
        &BigMatrix::identity(t.rows()),
    );
    report.check_eq(
        "core = P S^-1 C P^t",
        n,
        s_inv_c_pt.and_then(|m| r.p.mat_mul(&m)),
        sys.core(),
    );

    let (pass, detail) = columns_agree_on_type(t, n);
    report.push("columns of T agree when phi agrees", n, pass, detail);

    let nfact = BigInt::from(factorial(n));
    let bad = t.column_sums().iter().position(|s| *s != nfact);
    report.push(
        "columns of T sum to n!",
        n,
        bad.is_none(),
        match bad {
            None => format!("all {} columns sum to {nfact}", t.cols()),
            Some(j) => format!("column {j} sums to {}", t.column_sums()[j]),
        },
    );
    report
}

fn clone_err(e: &Error) -> Error {
    Error::InvariantViolation(e.to_string())
}

fn columns_agree_on_type(t: &BigMatrix, n: u32) -> (bool, String) {
    let subsets: Vec<AtomSubset> = AtomSubset::all(n).collect();
    let mut first_of_type: Vec<(Partition, usize)> = Vec::new();
    for (x, sx) in subsets.iter().enumerate() {
        let ty = phi(sx);
        match first_of_type.iter().find(|(p, _)| *p == ty) {
            Some(&(_, y)) => {
                if t.column(x) != t.column(y) {
                    return (false, format!("columns {sx} and {} differ", subsets[y]));
                }
            }
            None => first_of_type.push((ty, x)),
        }
    }
    (
        true,
        format!(
            "{} columns in {} classes",
            subsets.len(),
            first_of_type.len()
        ),
    )
}

/// `v T^k u` for `k = 0..=max_len`.
pub fn automaton_coefficients(automaton: &FullAutomaton, max_len: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(max_len + 1);
    let mut x = automaton.u.clone();
    for k in 0..=max_len {
        if k > 0 {
            x = automaton.t.mat_vec(&x).expect("square automaton");
        }
        let a = automaton.v.dot(&x).expect("equal lengths");
        out.push(a.to_biguint().expect("counts are non-negative"));
    }
    out
}

/// Identities plus coefficient agreement between the automaton, the
/// reduced system and, within its bounds, direct enumeration.
pub fn verify_all(
    n: u32,
    max_len: usize,
    bound: u32,
    cache: &mut CountCache,
) -> Result<VerificationReport> {
    let ctx = OracleContext::new(n, bound, cache)?;
    let mut report = check_identities(&ctx);
    let full = automaton_coefficients(&ctx.automaton, max_len);
    let reduced = growth_coefficients(&ctx.system, max_len).coefficients;
    for (l, (a, b)) in full.iter().zip(&reduced).enumerate() {
        report.push(
            "v T^l u = vtilde Ttilde^l utilde",
            n,
            a == b,
            format!("l = {l}: {a} vs {b}"),
        );
    }
    if n <= ENUMERATION_MAX_N {
        for (l, b) in reduced.iter().enumerate().take(ENUMERATION_MAX_LEN + 1) {
            let direct = enumerate_normal_forms(n, l)?;
            report.push(
                "normal forms of length l",
                n,
                direct == *b,
                format!("l = {l}: {direct} enumerated vs {b}"),
            );
        }
    }
    Ok(report)
}

pub fn enumerate_normal_forms(n: u32, len: usize) -> Result<BigUint> {
    enumerate_normal_forms_with_bounds(n, len, ENUMERATION_MAX_N, ENUMERATION_MAX_LEN)
}

/// Counts words `x_1 ⋯ x_len` of non-trivial simples with
/// `S(x_{i+1}) ⊆ F(x_i)` by walking every such word, except that the last
/// letter is counted from a table of simples per starting set.
pub fn enumerate_normal_forms_with_bounds(
    n: u32,
    len: usize,
    max_n: u32,
    max_len: usize,
) -> Result<BigUint> {
    if n > max_n {
        return Err(Error::BoundExceeded { n, bound: max_n });
    }
    if len > max_len {
        return Err(Error::BoundExceeded {
            n: len as u32,
            bound: max_len as u32,
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if len == 0 {
        return Ok(BigUint::one());
    }
    let letters: Vec<(u64, u64)> = all_simples(n)
        .iter()
        .filter(|s| !s.is_identity())
        .map(|s| (starting_set(s).bits, finishing_set(s).bits))
        .collect();
    // Number of non-trivial simples whose starting set lies inside each subset.
    let states = 1usize << n.saturating_sub(1);
    let fits: Vec<u64> = (0..states as u64)
        .map(|f| letters.iter().filter(|&&(s, _)| s & !f == 0).count() as u64)
        .collect();
    let mut total: u128 = 0;
    let full = (states - 1) as u64;
    walk(&letters, &fits, full, len, &mut total);
    Ok(BigUint::from(total))
}

fn walk(letters: &[(u64, u64)], fits: &[u64], finish: u64, remaining: usize, total: &mut u128) {
    if remaining == 1 {
        *total += fits[finish as usize] as u128;
        return;
    }
    for &(s, f) in letters {
        if s & !finish == 0 {
            walk(letters, fits, f, remaining - 1, total);
        }
    }
}
