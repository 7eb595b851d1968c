//! The reduced transfer system on partitions of `n` and the growth series it
//! produces.
//!
//! States of the finishing-set automaton are merged by the partition type of
//! their complement, giving a `p(n) × p(n)` matrix `T̃ = core · Ñ` where
//! `Ñ` holds bipartite graph counts and `core` is a signed sum over the
//! refinement matrix `M`:
//!
//! ```text
//! core[α][β] = sgn(α) sgn(β) Σ_γ sgn(γ) N_γ M[γ][α] M[γ][β]
//! ```
//!
//! with `N_γ` the number of atom subsets of type `γ`. Coefficients are then
//! `a_k = ṽ · T̃^k ũ`, streamed one matrix-vector product at a time.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bipartite::CountCache;
use crate::error::{Error, Result};
use crate::linalg::{BigMatrix, BigVector};
use crate::partitions::{
    class_count, enumerate_partitions, factorial, refinement_rows, sign, PartitionIndex,
};

/// Largest `n` for the reduced system: every entry of `T̃` lies in
/// `[0, n!]` and `33! < 2^127`.
pub const REDUCED_LIMIT: u32 = 33;

/// Up to this many partitions `T̃ = core · Ñ` and the symmetry of `core` are
/// checked entry by entry; above it by random projections and samples.
const EXACT_CHECK_LIMIT: usize = 400;
const FREIVALDS_ROUNDS: usize = 2;
const SYMMETRY_SAMPLES: usize = 4096;
const TILE: usize = 256;

/// Everything needed to stream coefficients for one `n`.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    n: u32,
    index: PartitionIndex,
    ntilde: BigMatrix,
    core: BigMatrix,
    ttilde: BigMatrix,
    u_tilde: BigVector,
    v_tilde: BigVector,
}

impl ReducedSystem {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn index(&self) -> &PartitionIndex {
        &self.index
    }

    pub fn ntilde(&self) -> &BigMatrix {
        &self.ntilde
    }

    pub fn core(&self) -> &BigMatrix {
        &self.core
    }

    pub fn ttilde(&self) -> &BigMatrix {
        &self.ttilde
    }

    pub fn u_tilde(&self) -> &BigVector {
        &self.u_tilde
    }

    pub fn v_tilde(&self) -> &BigVector {
        &self.v_tilde
    }
}

/// `a_0, …, a_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSeries {
    pub n: u32,
    pub coefficients: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct SeriesDocument {
    n: u32,
    generators: String,
    coefficients: Vec<String>,
}

impl GrowthSeries {
    pub fn to_json(&self) -> String {
        let doc = SeriesDocument {
            n: self.n,
            generators: "simple-elements".into(),
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
        };
        serde_json::to_string(&doc).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SeriesDocument =
            serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let coefficients = doc
            .coefficients
            .iter()
            .map(|c| {
                c.parse::<BigUint>()
                    .map_err(|_| Error::InvalidArgument(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(GrowthSeries {
            n: doc.n,
            coefficients,
        })
    }

    /// Header `l,a`, then one row per coefficient.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("l,a\n");
        for (l, a) in self.coefficients.iter().enumerate() {
            writeln!(s, "{l},{a}").unwrap();
        }
        s
    }

    /// One coefficient per line.
    pub fn to_plain(&self) -> String {
        let mut s = String::new();
        for a in &self.coefficients {
            writeln!(s, "{a}").unwrap();
        }
        s
    }
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "the reduced system needs n >= 2, got {n}"
        )));
    }
    if n > REDUCED_LIMIT {
        return Err(Error::BoundExceeded {
            n,
            bound: REDUCED_LIMIT,
        });
    }
    Ok(())
}

/// `Ñ[α][β] = N(α, β)`, except that the row of `[1,…,1]` is constant `n!`.
pub fn build_ntilde(n: u32, cache: &mut CountCache) -> Result<BigMatrix> {
    check_n(n)?;
    let index = enumerate_partitions(n);
    let ntilde = ntilde_entries(n, &index, cache)?;
    labelled(index.len(), ntilde, &index)
}

fn ntilde_entries(n: u32, index: &PartitionIndex, cache: &mut CountCache) -> Result<Vec<i128>> {
    cache.fill_through(n)?;
    let p = index.len();
    let nfact = factorial(n)
        .to_i128()
        .expect("n! fits for n within the limit");
    let mut out = vec![0i128; p * p];
    for i in 0..p - 1 {
        for j in 0..p {
            out[i * p + j] = cache.dense_value(n, i, j) as i128;
        }
    }
    out[(p - 1) * p..].fill(nfact);
    Ok(out)
}

fn labelled(p: usize, entries: Vec<i128>, index: &PartitionIndex) -> Result<BigMatrix> {
    let labels = index.labels();
    BigMatrix::from_i128(p, p, entries)?.with_labels(Some(labels.clone()), Some(labels))
}

/// `M` in compressed sparse rows with machine-word entries.
struct Refinement {
    p: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<u64>,
}

impl Refinement {
    fn new(n: u32) -> Self {
        let rows = refinement_rows(n);
        let p = rows.len();
        let mut offsets = Vec::with_capacity(p + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        offsets.push(0);
        for row in rows {
            for (j, m) in row {
                cols.push(j as u32);
                vals.push(m.to_u64().expect("refinement counts are below 2^(n-1)"));
            }
            offsets.push(cols.len());
        }
        Refinement {
            p,
            offsets,
            cols,
            vals,
        }
    }

    #[inline]
    fn row(&self, g: usize) -> (&[u32], &[u64]) {
        let r = self.offsets[g]..self.offsets[g + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    /// Column lists `(γ, M[γ][α])`, `γ` increasing.
    fn columns(&self) -> Vec<Vec<(u32, u64)>> {
        let mut out = vec![Vec::new(); self.p];
        for g in 0..self.p {
            let (cols, vals) = self.row(g);
            for (&a, &m) in cols.iter().zip(vals) {
                out[a as usize].push((g as u32, m));
            }
        }
        out
    }
}

/// Per-partition data shared by `core` and `T̃`.
struct Weights {
    signs: Vec<i128>,
    /// `sgn(γ) N_γ`.
    signed_classes: Vec<i128>,
}

impl Weights {
    fn new(index: &PartitionIndex) -> Self {
        let signs: Vec<i128> = index.iter().map(|a| sign(a) as i128).collect();
        let signed_classes = index
            .iter()
            .zip(&signs)
            .map(|(a, &s)| s * class_count(a).to_i128().expect("at most 2^(n-1) subsets"))
            .collect();
        Weights {
            signs,
            signed_classes,
        }
    }
}

/// The partition-level core matrix, computed without enumerating subsets.
pub fn build_core(n: u32) -> Result<BigMatrix> {
    check_n(n)?;
    let index = enumerate_partitions(n);
    let m = Refinement::new(n);
    let w = Weights::new(&index);
    let core = core_entries(&m, &w);
    check_core_symmetry(&m, &w, &core)?;
    labelled(index.len(), core, &index)
}

/// Upper triangle by scattering each row of `M` into its outer product,
/// then signs and mirroring.
fn core_entries(m: &Refinement, w: &Weights) -> Vec<i128> {
    let p = m.p;
    let mut core = vec![0i128; p * p];
    for g in 0..p {
        let (cols, vals) = m.row(g);
        let d = w.signed_classes[g];
        for (k, (&a, &ma)) in cols.iter().zip(vals).enumerate() {
            let f = d * ma as i128;
            let out = &mut core[a as usize * p..(a as usize + 1) * p];
            for (&b, &mb) in cols[k..].iter().zip(&vals[k..]) {
                out[b as usize] += f * mb as i128;
            }
        }
    }
    for a in 0..p {
        for b in a..p {
            let v = core[a * p + b] * w.signs[a] * w.signs[b];
            core[a * p + b] = v;
            core[b * p + a] = v;
        }
    }
    core
}

/// One entry from the column lists of `M`, independent of the scatter.
fn core_entry_by_columns(cols: &[Vec<(u32, u64)>], w: &Weights, a: usize, b: usize) -> i128 {
    let (x, y) = (&cols[a], &cols[b]);
    let (mut i, mut j) = (0, 0);
    let mut acc = 0i128;
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let g = x[i].0 as usize;
                acc += w.signed_classes[g] * x[i].1 as i128 * y[j].1 as i128;
                i += 1;
                j += 1;
            }
        }
    }
    acc * w.signs[a] * w.signs[b]
}

/// Compares lower-triangle entries, evaluated column-wise, with the
/// mirrored upper triangle: all of them for small `p`, a seeded sample
/// otherwise.
fn check_core_symmetry(m: &Refinement, w: &Weights, core: &[i128]) -> Result<()> {
    let p = m.p;
    let cols = m.columns();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if p <= EXACT_CHECK_LIMIT {
        for a in 0..p {
            for b in 0..a {
                pairs.push((a, b));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        for _ in 0..SYMMETRY_SAMPLES {
            let a = rng.gen_range(1..p);
            pairs.push((a, rng.gen_range(0..a)));
        }
    }
    for (a, b) in pairs {
        let lower = core_entry_by_columns(&cols, w, a, b);
        if lower != core[b * p + a] || core[a * p + b] != core[b * p + a] {
            return Err(Error::InvariantViolation(format!(
                "core is not symmetric at ({a}, {b})"
            )));
        }
    }
    Ok(())
}

/// `T̃ = S_s Mᵗ D M S_s Ñ` with `S_s = diag(sgn)` and `D = diag(sgn(γ) N_γ)`,
/// evaluated in column tiles without forming `core · Ñ` directly.
///
/// Intermediate values can exceed 128 bits, so the products run in wrapping
/// arithmetic modulo `2^128`; every final entry lies in `[0, n!]`, which
/// fits, so the residues are the exact values.
fn ttilde_entries(m: &Refinement, w: &Weights, ntilde: &[i128]) -> Vec<i128> {
    let p = m.p;
    let mut out = vec![0i128; p * p];
    let mut k = vec![0i128; p * TILE];
    for c0 in (0..p).step_by(TILE) {
        let wt = TILE.min(p - c0);
        k.fill(0);
        // K = M · (S_s Ñ) restricted to this tile.
        for g in 0..p {
            let (cols, vals) = m.row(g);
            let krow = &mut k[g * TILE..g * TILE + wt];
            for (&d, &mv) in cols.iter().zip(vals) {
                let f = (mv as i128).wrapping_mul(w.signs[d as usize]);
                let nrow = &ntilde[d as usize * p + c0..d as usize * p + c0 + wt];
                for (o, &x) in krow.iter_mut().zip(nrow) {
                    *o = o.wrapping_add(f.wrapping_mul(x));
                }
            }
        }
        // T̃ += S_s Mᵗ D K.
        for g in 0..p {
            let (cols, vals) = m.row(g);
            let krow = &k[g * TILE..g * TILE + wt];
            let d = w.signed_classes[g];
            for (&a, &mv) in cols.iter().zip(vals) {
                let f = d.wrapping_mul(mv as i128).wrapping_mul(w.signs[a as usize]);
                let trow = &mut out[a as usize * p + c0..a as usize * p + c0 + wt];
                for (o, &x) in trow.iter_mut().zip(krow) {
                    *o = o.wrapping_add(f.wrapping_mul(x));
                }
            }
        }
    }
    out
}

/// Builds `Ñ`, `core`, `T̃`, `ũ`, `ṽ` and checks: every entry of `T̃` in
/// `[0, n!]`, every column sum `n!`, `core` symmetric, and `T̃ = core · Ñ`
/// (exactly for small `p`, by seeded random projections otherwise).
pub fn build_reduced_system(n: u32, cache: &mut CountCache) -> Result<ReducedSystem> {
    check_n(n)?;
    let index = enumerate_partitions(n);
    let p = index.len();
    let ntilde = ntilde_entries(n, &index, cache)?;
    let m = Refinement::new(n);
    let w = Weights::new(&index);
    let core = core_entries(&m, &w);
    check_core_symmetry(&m, &w, &core)?;
    let ttilde = ttilde_entries(&m, &w, &ntilde);
    drop(m);
    check_column_sums(n, p, &ttilde)?;

    let ntilde = labelled(p, ntilde, &index)?;
    let core = labelled(p, core, &index)?;
    let ttilde = labelled(p, ttilde, &index)?;
    check_product(n, &core, &ntilde, &ttilde)?;

    let labels = Some(index.labels());
    let u_tilde = BigVector::unit(p, p - 1).with_labels(labels.clone())?;
    let mut v = vec![BigInt::from(1); p];
    v[0] = BigInt::zero();
    let v_tilde = BigVector::new(v).with_labels(labels)?;
    Ok(ReducedSystem {
        n,
        index,
        ntilde,
        core,
        ttilde,
        u_tilde,
        v_tilde,
    })
}

fn check_column_sums(n: u32, p: usize, ttilde: &[i128]) -> Result<()> {
    let nfact = factorial(n).to_i128().expect("n! fits");
    let mut sums = vec![0i128; p];
    for row in ttilde.chunks_exact(p) {
        for (s, &x) in sums.iter_mut().zip(row) {
            if !(0..=nfact).contains(&x) {
                return Err(Error::InvariantViolation(format!(
                    "T̃ entry {x} outside [0, {nfact}]"
                )));
            }
            *s += x;
        }
    }
    if let Some(j) = sums.iter().position(|&s| s != nfact) {
        return Err(Error::InvariantViolation(format!(
            "column {j} of T̃ sums to {}, expected {nfact}",
            sums[j]
        )));
    }
    Ok(())
}

fn check_product(n: u32, core: &BigMatrix, ntilde: &BigMatrix, ttilde: &BigMatrix) -> Result<()> {
    let p = core.rows();
    if p <= EXACT_CHECK_LIMIT {
        if core.mat_mul(ntilde)? != *ttilde {
            return Err(Error::InvariantViolation(format!(
                "T̃ differs from core · Ñ for n = {n}"
            )));
        }
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    for round in 0..FREIVALDS_ROUNDS {
        let x = BigVector::new((0..p).map(|_| BigInt::from(rng.gen::<u32>())).collect());
        let direct = ttilde.mat_vec(&x)?;
        let factored = core.mat_vec(&ntilde.mat_vec(&x)?)?;
        if direct.entries() != factored.entries() {
            return Err(Error::InvariantViolation(format!(
                "T̃ x differs from core (Ñ x) for n = {n} in round {round}"
            )));
        }
    }
    Ok(())
}

/// `a_k = ṽ · T̃^k ũ` for `k = 0..=terms`.
pub fn growth_coefficients(system: &ReducedSystem, terms: usize) -> GrowthSeries {
    let mut coefficients = Vec::with_capacity(terms + 1);
    let mut x = system.u_tilde.clone();
    for k in 0..=terms {
        if k > 0 {
            x = system.ttilde.mat_vec(&x).expect("square system");
        }
        let a = system.v_tilde.dot(&x).expect("equal lengths");
        coefficients.push(a.to_biguint().expect("coefficients are non-negative"));
    }
    GrowthSeries {
        n: system.n,
        coefficients,
    }
}

/// The full pipeline for one `n`; `n = 1` is the trivial monoid.
pub fn growth_series(n: u32, terms: usize) -> Result<GrowthSeries> {
    growth_series_with_cache(n, terms, &mut CountCache::new())
}

pub fn growth_series_with_cache(
    n: u32,
    terms: usize,
    cache: &mut CountCache,
) -> Result<GrowthSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n == 1 {
        let mut coefficients = vec![BigUint::zero(); terms + 1];
        coefficients[0] = BigUint::from(1u32);
        return Ok(GrowthSeries { n, coefficients });
    }
    let system = build_reduced_system(n, cache)?;
    Ok(growth_coefficients(&system, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::refinement_matrix;

    fn m(rows: &[Vec<i64>]) -> BigMatrix {
        BigMatrix::from_rows(rows)
    }

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn two_strands() {
        let mut cache = CountCache::new();
        let s = build_reduced_system(2, &mut cache).unwrap();
        assert_eq!(*s.ntilde(), m(&[vec![0, 1], vec![2, 2]]));
        assert_eq!(*s.core(), m(&[vec![-1, 1], vec![1, 0]]));
        assert_eq!(*s.ttilde(), m(&[vec![2, 1], vec![0, 1]]));
        let series = growth_coefficients(&s, 50);
        assert!(series
            .coefficients
            .iter()
            .all(|c| *c == BigUint::from(1u32)));
    }

    #[test]
    fn four_strands() {
        let mut cache = CountCache::new();
        let s = build_reduced_system(4, &mut cache).unwrap();
        assert_eq!(
            *s.ntilde(),
            m(&[
                vec![0, 0, 0, 0, 1],
                vec![0, 0, 0, 1, 4],
                vec![0, 0, 1, 2, 6],
                vec![0, 1, 2, 5, 12],
                vec![24, 24, 24, 24, 24],
            ])
        );
        assert_eq!(
            *s.core(),
            m(&[
                vec![-1, 2, 1, -3, 1],
                vec![2, -2, -2, 2, 0],
                vec![1, -2, 0, 1, 0],
                vec![-3, 2, 1, 0, 0],
                vec![1, 0, 0, 0, 0],
            ])
        );
        assert_eq!(
            *s.ttilde(),
            m(&[
                vec![24, 21, 19, 13, 1],
                vec![0, 2, 2, 4, 6],
                vec![0, 1, 2, 3, 5],
                vec![0, 0, 1, 4, 11],
                vec![0, 0, 0, 0, 1],
            ])
        );
        assert_eq!(s.ttilde().row_labels().unwrap()[1], "3+1");
        assert_eq!(growth_coefficients(&s, 2).coefficients, nums(&[1, 23, 187]));
    }

    #[test]
    fn core_matches_product_of_factors() {
        // core = S_s Mᵗ D M S_s, assembled with generic matrix products.
        for n in 2..=9 {
            let index = enumerate_partitions(n);
            let p = index.len();
            let mm = refinement_matrix(n).unwrap();
            let w = Weights::new(&index);
            let diag = |v: &[i128]| {
                BigMatrix::from_fn(p, p, |i, j| {
                    if i == j {
                        BigInt::from(v[i])
                    } else {
                        BigInt::zero()
                    }
                })
            };
            let s = diag(&w.signs);
            let d = diag(&w.signed_classes);
            let expected = s
                .mat_mul(&mm.transpose())
                .and_then(|x| x.mat_mul(&d))
                .and_then(|x| x.mat_mul(&mm))
                .and_then(|x| x.mat_mul(&s))
                .unwrap();
            assert_eq!(build_core(n).unwrap(), expected, "n = {n}");
        }
    }

    #[test]
    fn column_sums_and_product_up_to_twelve() {
        let mut cache = CountCache::new();
        for n in 2..=12 {
            let s = build_reduced_system(n, &mut cache).unwrap();
            let nfact = BigInt::from(factorial(n));
            assert!(s.ttilde().column_sums().iter().all(|c| *c == nfact));
            assert_eq!(s.core().mat_mul(s.ntilde()).unwrap(), *s.ttilde());
            assert!(s.core().is_symmetric());
        }
    }

    #[test]
    fn ntilde_last_row_is_factorial() {
        let mut cache = CountCache::new();
        for n in 2..=10 {
            let nt = build_ntilde(n, &mut cache).unwrap();
            let last = nt.row(nt.rows() - 1);
            assert!(last.iter().all(|x| *x == BigInt::from(factorial(n))));
        }
    }

    #[test]
    fn small_series_facts() {
        assert_eq!(
            growth_series(1, 3).unwrap().coefficients,
            nums(&[1, 0, 0, 0])
        );
        assert_eq!(
            growth_series(2, 3).unwrap().coefficients,
            nums(&[1, 1, 1, 1])
        );
        assert_eq!(
            growth_series(4, 2).unwrap().coefficients,
            nums(&[1, 23, 187])
        );
        // Strictly increasing for n >= 3.
        for n in 3..=7 {
            let c = growth_series(n, 6).unwrap().coefficients;
            assert_eq!(c[1], factorial(n) - 1u32);
            assert!(c.windows(2).all(|w| w[0] < w[1]), "n = {n}");
        }
    }

    #[test]
    fn bounds() {
        let mut cache = CountCache::new();
        assert!(matches!(build_core(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            build_reduced_system(REDUCED_LIMIT + 1, &mut cache),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(growth_series(0, 1).is_err());
    }

    #[test]
    fn series_formats() {
        let s = growth_series(4, 2).unwrap();
        assert_eq!(s.to_csv(), "l,a\n0,1\n1,23\n2,187\n");
        assert_eq!(s.to_plain(), "1\n23\n187\n");
        let json = s.to_json();
        assert_eq!(
            json,
            r#"{"n":4,"generators":"simple-elements","coefficients":["1","23","187"]}"#
        );
        assert_eq!(GrowthSeries::from_json(&json).unwrap(), s);
    }

    #[test]
    fn sampled_checks_agree_with_exact_ones() {
        // n = 19 has 490 partitions, above the exact-check size.
        let mut cache = CountCache::new();
        let s = build_reduced_system(19, &mut cache).unwrap();
        assert!(s.index().len() > EXACT_CHECK_LIMIT);
        let product = s.core().mat_mul(s.ntilde()).unwrap();
        assert_eq!(product, *s.ttilde());
    }
}
