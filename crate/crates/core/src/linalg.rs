//! Dense exact integer matrices and vectors.
//!
//! Entries are arbitrary-precision integers, but storage adapts to the data:
//! a matrix whose entries all fit in 64 (or 128) bits is stored as a flat
//! machine-word grid, row-major. Products pick a 128-bit accumulator when a
//! magnitude bound proves it cannot overflow and fall back to `BigInt`
//! otherwise, so every result is exact.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Storage {
    Small(Vec<i64>),
    Wide(Vec<i128>),
    Big(Vec<BigInt>),
}

impl Storage {
    fn narrowed_i128(values: Vec<i128>) -> Storage {
        if values.iter().all(|&v| i64::try_from(v).is_ok()) {
            Storage::Small(values.into_iter().map(|v| v as i64).collect())
        } else {
            Storage::Wide(values)
        }
    }

    fn narrowed_big(values: Vec<BigInt>) -> Storage {
        if values.iter().all(|v| v.to_i128().is_some()) {
            Storage::narrowed_i128(values.iter().map(|v| v.to_i128().unwrap()).collect())
        } else {
            Storage::Big(values)
        }
    }
}

/// A dense `rows × cols` matrix of exact integers with optional axis labels.
#[derive(Clone, Debug)]
pub struct BigMatrix {
    rows: usize,
    cols: usize,
    data: Storage,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl PartialEq for BigMatrix {
    /// Compares shape and entries; labels are metadata and are ignored.
    fn eq(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        match (self.i128_view(), other.i128_view()) {
            (Some(a), Some(b)) => a == b,
            _ => (0..self.rows * self.cols).all(|k| self.flat(k) == other.flat(k)),
        }
    }
}

impl Eq for BigMatrix {}

fn bits_i128(v: i128) -> u32 {
    128 - v.unsigned_abs().leading_zeros()
}

fn bits_usize(v: usize) -> u32 {
    usize::BITS - v.leading_zeros()
}

impl BigMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigMatrix {
            rows,
            cols,
            data: Storage::Small(vec![0; rows * cols]),
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut v = vec![0i64; n * n];
        for i in 0..n {
            v[i * n + i] = 1;
        }
        BigMatrix {
            rows: n,
            cols: n,
            data: Storage::Small(v),
            row_labels: None,
            col_labels: None,
        }
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        BigMatrix {
            rows: r,
            cols: c,
            data: Storage::Small(rows.concat()),
            row_labels: None,
            col_labels: None,
        }
    }

    /// Row-major entries; storage narrows to 64 bits when possible.
    pub fn from_i128(rows: usize, cols: usize, entries: Vec<i128>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(BigMatrix {
            rows,
            cols,
            data: Storage::narrowed_i128(entries),
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_bigints(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(BigMatrix {
            rows,
            cols,
            data: Storage::narrowed_big(entries),
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut v = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                v.push(f(i, j));
            }
        }
        BigMatrix {
            rows,
            cols,
            data: Storage::narrowed_big(v),
            row_labels: None,
            col_labels: None,
        }
    }

    /// Attaches labels. Each axis' labels must match its length and be unique.
    pub fn with_labels(
        mut self,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        check_labels(&row_labels, self.rows, "row")?;
        check_labels(&col_labels, self.cols, "column")?;
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    fn flat(&self, k: usize) -> BigInt {
        match &self.data {
            Storage::Small(v) => BigInt::from(v[k]),
            Storage::Wide(v) => BigInt::from(v[k]),
            Storage::Big(v) => v[k].clone(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of range"
        );
        self.flat(i * self.cols + j)
    }

    /// The entry as `i128`, if it fits.
    pub fn get_i128(&self, i: usize, j: usize) -> Option<i128> {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of range"
        );
        let k = i * self.cols + j;
        match &self.data {
            Storage::Small(v) => Some(v[k] as i128),
            Storage::Wide(v) => Some(v[k]),
            Storage::Big(v) => v[k].to_i128(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// All entries as a row-major `i128` grid, when every entry fits.
    pub fn i128_view(&self) -> Option<std::borrow::Cow<'_, [i128]>> {
        use std::borrow::Cow;
        match &self.data {
            Storage::Small(v) => Some(Cow::Owned(v.iter().map(|&x| x as i128).collect())),
            Storage::Wide(v) => Some(Cow::Borrowed(v)),
            Storage::Big(v) => v
                .iter()
                .map(|x| x.to_i128())
                .collect::<Option<Vec<_>>>()
                .map(Cow::Owned),
        }
    }

    /// Bit length of the largest absolute entry.
    pub fn max_bits(&self) -> u64 {
        match &self.data {
            Storage::Small(v) => v
                .iter()
                .map(|&x| bits_i128(x as i128) as u64)
                .max()
                .unwrap_or(0),
            Storage::Wide(v) => v.iter().map(|&x| bits_i128(x) as u64).max().unwrap_or(0),
            Storage::Big(v) => v.iter().map(|x| x.bits()).max().unwrap_or(0),
        }
    }

    pub fn transpose(&self) -> BigMatrix {
        let (r, c) = (self.rows, self.cols);
        let data = match &self.data {
            Storage::Small(v) => Storage::Small(transpose_vec(v, r, c)),
            Storage::Wide(v) => Storage::Wide(transpose_vec(v, r, c)),
            Storage::Big(v) => Storage::Big(transpose_vec(v, r, c)),
        };
        BigMatrix {
            rows: c,
            cols: r,
            data,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        if let Some(v) = self.i128_view() {
            let n = self.rows;
            return (0..n).all(|i| (0..i).all(|j| v[i * n + j] == v[j * n + i]));
        }
        (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn column_sums(&self) -> Vec<BigInt> {
        let mut sums = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            for (j, s) in sums.iter_mut().enumerate() {
                *s += self.get(i, j);
            }
        }
        sums
    }

    /// Exact product `self · other`. Labels: rows of `self`, columns of `other`.
    pub fn mat_mul(&self, other: &BigMatrix) -> Result<BigMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (r, k, c) = (self.rows, self.cols, other.cols);
        let narrow = self.max_bits() + other.max_bits() + bits_usize(k) as u64 <= 126;
        let data = match (narrow, self.i128_view(), other.i128_view()) {
            (true, Some(a), Some(b)) => {
                let mut out = vec![0i128; r * c];
                for i in 0..r {
                    let orow = &mut out[i * c..(i + 1) * c];
                    for t in 0..k {
                        let x = a[i * k + t];
                        if x == 0 {
                            continue;
                        }
                        for (o, &y) in orow.iter_mut().zip(&b[t * c..(t + 1) * c]) {
                            *o += x * y;
                        }
                    }
                }
                Storage::narrowed_i128(out)
            }
            _ => {
                let mut out = vec![BigInt::zero(); r * c];
                for i in 0..r {
                    for t in 0..k {
                        let x = self.get(i, t);
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..c {
                            out[i * c + j] += &x * other.get(t, j);
                        }
                    }
                }
                Storage::narrowed_big(out)
            }
        };
        Ok(BigMatrix {
            rows: r,
            cols: c,
            data,
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
        })
    }

    /// Exact product `self · x`.
    pub fn mat_vec(&self, x: &BigVector) -> Result<BigVector> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let entries = match &self.data {
            Storage::Small(v) => limb_mat_vec(self.rows, self.cols, |k| v[k] as i128, x),
            Storage::Wide(v) => limb_mat_vec(self.rows, self.cols, |k| v[k], x),
            Storage::Big(v) => (0..self.rows)
                .map(|i| {
                    v[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(x.iter())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        };
        Ok(BigVector {
            entries,
            labels: self.row_labels.clone(),
        })
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            rows: self.rows,
            cols: self.cols,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: MatrixDocument) -> Result<Self> {
        if doc.entries.len() != doc.rows || doc.entries.iter().any(|r| r.len() != doc.cols) {
            return Err(Error::MatrixFormat(format!(
                "entry grid does not match {}x{}",
                doc.rows, doc.cols
            )));
        }
        let mut v = Vec::with_capacity(doc.rows * doc.cols);
        for s in doc.entries.iter().flatten() {
            v.push(
                s.parse::<BigInt>()
                    .map_err(|_| Error::MatrixFormat(format!("bad entry {s:?}")))?,
            );
        }
        BigMatrix::from_bigints(doc.rows, doc.cols, v)?.with_labels(doc.row_labels, doc.col_labels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MatrixDocument =
            serde_json::from_str(s).map_err(|e| Error::MatrixFormat(e.to_string()))?;
        Self::from_document(doc)
    }
}

/// The JSON shape of a matrix: entries are decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<String>>,
    pub entries: Vec<Vec<String>>,
}

fn check_labels(labels: &Option<Vec<String>>, len: usize, axis: &str) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{} {axis} labels for {len} {axis}s",
                l.len()
            )));
        }
        let unique: HashSet<&String> = l.iter().collect();
        if unique.len() != l.len() {
            return Err(Error::InvalidArgument(format!("duplicate {axis} labels")));
        }
    }
    Ok(())
}

fn transpose_vec<T: Clone>(v: &[T], r: usize, c: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len());
    for j in 0..c {
        for i in 0..r {
            out.push(v[i * c + j].clone());
        }
    }
    out
}

/// `acc += x · c · 2^(64·offset)` on little-endian u64 limbs.
#[inline]
fn mac_limbs(acc: &mut Vec<u64>, x: &[u64], c: u64, offset: usize) {
    if c == 0 || x.is_empty() {
        return;
    }
    let need = offset + x.len() + 1;
    if acc.len() < need {
        acc.resize(need, 0);
    }
    let mut carry: u64 = 0;
    for (slot, &xi) in acc[offset..].iter_mut().zip(x) {
        let t = *slot as u128 + xi as u128 * c as u128 + carry as u128;
        *slot = t as u64;
        carry = (t >> 64) as u64;
    }
    let mut k = offset + x.len();
    while carry != 0 {
        if k == acc.len() {
            acc.push(0);
        }
        let (s, o) = acc[k].overflowing_add(carry);
        acc[k] = s;
        carry = o as u64;
        k += 1;
    }
}

fn biguint_from_limbs(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

/// Row-by-row product of a machine-word matrix with a big vector, using
/// separate positive and negative limb accumulators so the inner loop never
/// allocates.
fn limb_mat_vec(
    rows: usize,
    cols: usize,
    entry: impl Fn(usize) -> i128,
    x: &BigVector,
) -> Vec<BigInt> {
    let xs: Vec<(Sign, Vec<u64>)> = x
        .iter()
        .map(|v| (v.sign(), v.magnitude().iter_u64_digits().collect()))
        .collect();
    let mut pos: Vec<u64> = Vec::new();
    let mut neg: Vec<u64> = Vec::new();
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        pos.clear();
        neg.clear();
        for (j, (xsign, xl)) in xs.iter().enumerate() {
            let a = entry(i * cols + j);
            if a == 0 || *xsign == Sign::NoSign {
                continue;
            }
            let negative = (a < 0) != (*xsign == Sign::Minus);
            let mag = a.unsigned_abs();
            let acc = if negative { &mut neg } else { &mut pos };
            mac_limbs(acc, xl, mag as u64, 0);
            mac_limbs(acc, xl, (mag >> 64) as u64, 1);
        }
        let p = BigInt::from_biguint(Sign::Plus, biguint_from_limbs(&pos));
        let n = BigInt::from_biguint(Sign::Plus, biguint_from_limbs(&neg));
        out.push(p - n);
    }
    out
}

/// A vector of exact integers with optional labels.
#[derive(Clone, Debug, Default)]
pub struct BigVector {
    entries: Vec<BigInt>,
    labels: Option<Vec<String>>,
}

impl PartialEq for BigVector {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for BigVector {}

impl BigVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        BigVector {
            entries,
            labels: None,
        }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![BigInt::zero(); len])
    }

    /// The standard basis vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.entries[i] = BigInt::from(1);
        v
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        check_labels(&labels, self.entries.len(), "vector")?;
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.entries.iter()
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.entries
    }

    /// Exact inner product.
    pub fn dot(&self, other: &BigVector) -> Result<BigInt> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "dot of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self.iter().zip(other.iter()).map(|(a, b)| a * b).sum())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }
}

pub fn mat_mul(a: &BigMatrix, b: &BigMatrix) -> Result<BigMatrix> {
    a.mat_mul(b)
}

pub fn mat_vec(a: &BigMatrix, x: &BigVector) -> Result<BigVector> {
    a.mat_vec(x)
}

pub fn dot(v: &BigVector, w: &BigVector) -> Result<BigInt> {
    v.dot(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(r: usize, c: usize) -> impl Strategy<Value = BigMatrix> {
        proptest::collection::vec(-50i64..50, r * c).prop_map(move |v| {
            BigMatrix::from_rows(&v.chunks(c).map(|ch| ch.to_vec()).collect::<Vec<_>>())
        })
    }

    /// Schoolbook product on BigInt, no width tricks.
    fn reference_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
        BigMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).map(|t| a.get(i, t) * b.get(t, j)).sum()
        })
    }

    #[test]
    fn identity_times_x() {
        let x = BigMatrix::from_rows(&[vec![1, -2, 3], vec![4, 5, -6]]);
        assert_eq!(BigMatrix::identity(2).mat_mul(&x).unwrap(), x);
        let v = BigVector::from_i64(&[7, -8, 9]);
        assert_eq!(BigMatrix::identity(3).mat_vec(&v).unwrap(), v);
    }

    #[test]
    fn one_by_one() {
        let a = BigMatrix::from_rows(&[vec![2]]);
        let b = BigMatrix::from_rows(&[vec![3]]);
        assert_eq!(a.mat_mul(&b).unwrap(), BigMatrix::from_rows(&[vec![6]]));
    }

    #[test]
    fn dimension_mismatch() {
        let a = BigMatrix::zeros(2, 3);
        assert!(matches!(a.mat_mul(&a), Err(Error::DimensionMismatch(_))));
        assert!(a.mat_vec(&BigVector::zeros(2)).is_err());
        assert!(BigVector::zeros(2).dot(&BigVector::zeros(3)).is_err());
        assert!(BigMatrix::from_i128(2, 2, vec![0; 3]).is_err());
    }

    #[test]
    fn zero_matrix_times_x() {
        let v = BigVector::from_i64(&[1, 2, 3]);
        assert_eq!(
            BigMatrix::zeros(2, 3).mat_vec(&v).unwrap(),
            BigVector::zeros(2)
        );
    }

    #[test]
    fn dots() {
        let e1 = BigVector::unit(3, 0);
        let e2 = BigVector::unit(3, 1);
        assert_eq!(e1.dot(&e2).unwrap(), BigInt::zero());
        let x = BigVector::from_i64(&[3, -4, 5]);
        assert_eq!(x.dot(&x).unwrap(), BigInt::from(50));
    }

    #[test]
    fn wide_entries_stay_exact() {
        // 2^100 entries force the BigInt product path.
        let big: BigInt = BigInt::from(1) << 100;
        let a = BigMatrix::from_fn(
            2,
            2,
            |i, j| if i == j { big.clone() } else { BigInt::from(3) },
        );
        let prod = a.mat_mul(&a).unwrap();
        assert_eq!(prod, reference_mul(&a, &a));
        assert_eq!(prod.get(0, 0), &big * &big + 9);
        let v = BigVector::new(vec![big.clone(), -BigInt::from(5)]);
        let av = a.mat_vec(&v).unwrap();
        assert_eq!(av.get(0), &(&big * &big - 15));
        assert_eq!(av.get(1), &(BigInt::from(3) * &big - &big * 5));
    }

    #[test]
    fn mat_vec_handles_signs_and_wide_words() {
        let w = (1i128 << 100) + 12345;
        let a = BigMatrix::from_i128(2, 3, vec![w, -w, 0, -1, 2, -(1i128 << 90)]).unwrap();
        let x = BigVector::new(vec![
            BigInt::from(1) << 200,
            -(BigInt::from(7)),
            BigInt::from(-3) << 70,
        ]);
        let expected: Vec<BigInt> = (0..2)
            .map(|i| (0..3).map(|j| a.get(i, j) * x.get(j)).sum())
            .collect();
        assert_eq!(a.mat_vec(&x).unwrap().into_entries(), expected);
    }

    #[test]
    fn json_round_trip_with_labels() {
        let m = BigMatrix::from_fn(2, 2, |i, j| (BigInt::from(1) << (90 * i)) - j)
            .with_labels(
                Some(vec!["2".into(), "1+1".into()]),
                Some(vec!["a".into(), "b".into()]),
            )
            .unwrap();
        let s = m.to_json();
        assert!(s.contains("\"entries\":[[\"1\",\"0\"]"));
        let back = BigMatrix::from_json(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.row_labels().unwrap(), m.row_labels().unwrap());
        assert!(BigMatrix::from_json(r#"{"rows":1,"cols":2,"entries":[["1"]]}"#).is_err());
        assert!(BigMatrix::from_json(r#"{"rows":1,"cols":1,"entries":[["x"]]}"#).is_err());
    }

    #[test]
    fn labels_must_be_unique_and_sized() {
        let m = BigMatrix::zeros(2, 2);
        assert!(m.clone().with_labels(Some(vec!["a".into()]), None).is_err());
        assert!(m
            .with_labels(Some(vec!["a".into(), "a".into()]), None)
            .is_err());
    }

    #[test]
    fn labels_propagate_through_products() {
        let a = BigMatrix::identity(2)
            .with_labels(Some(vec!["r0".into(), "r1".into()]), None)
            .unwrap();
        let b = BigMatrix::identity(2)
            .with_labels(None, Some(vec!["c0".into(), "c1".into()]))
            .unwrap();
        let p = a.mat_mul(&b).unwrap();
        assert_eq!(p.row_labels().unwrap()[1], "r1");
        assert_eq!(p.col_labels().unwrap()[0], "c0");
    }

    proptest! {
        #[test]
        fn product_is_associative(a in small_matrix(3, 4), b in small_matrix(4, 2), c in small_matrix(2, 3)) {
            let left = a.mat_mul(&b).unwrap().mat_mul(&c).unwrap();
            let right = a.mat_mul(&b.mat_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn product_matches_reference(a in small_matrix(3, 3), b in small_matrix(3, 2)) {
            prop_assert_eq!(a.mat_mul(&b).unwrap(), reference_mul(&a, &b));
        }

        #[test]
        fn mat_vec_of_unit_is_column(a in small_matrix(4, 3), i in 0usize..3) {
            let col = a.mat_vec(&BigVector::unit(3, i)).unwrap();
            prop_assert_eq!(col.into_entries(), a.column(i));
        }

        #[test]
        fn self_dot_is_nonnegative(v in proptest::collection::vec(any::<i64>(), 0..8)) {
            let x = BigVector::from_i64(&v);
            prop_assert!(!x.dot(&x).unwrap().is_negative());
        }
    }
}
