//! Packed F₃ vectors and matrices.
//!
//! A trit occupies two bits (`0 → 00`, `1 → 01`, `2 → 10`), 32 per word,
//! least significant first. Addition works on whole words with bitwise
//! logic, so the hot loops never branch on trit values.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};

pub const TRITS_PER_WORD: usize = 32;
const LOW: u64 = 0x5555_5555_5555_5555;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(TRITS_PER_WORD)
}

#[inline]
fn add_word(a: u64, b: u64) -> u64 {
    let (a0, a1) = (a & LOW, (a >> 1) & LOW);
    let (b0, b1) = (b & LOW, (b >> 1) & LOW);
    let az = !(a0 | a1) & LOW;
    let bz = !(b0 | b1) & LOW;
    let r0 = (a0 & bz) | (az & b0) | (a1 & b1);
    let r1 = (a1 & bz) | (az & b1) | (a0 & b0);
    r0 | (r1 << 1)
}

/// `−a`: swaps the two bit planes.
#[inline]
fn neg_word(a: u64) -> u64 {
    ((a & LOW) << 1) | ((a >> 1) & LOW)
}

/// `dst += k · src` for a trit `k`.
#[inline]
fn axpy(dst: &mut [u64], src: &[u64], k: u8) {
    match k {
        1 => dst.iter_mut().zip(src).for_each(|(d, &s)| *d = add_word(*d, s)),
        2 => dst.iter_mut().zip(src).for_each(|(d, &s)| *d = add_word(*d, neg_word(s))),
        _ => {}
    }
}

fn valid_word(w: u64) -> bool {
    // A field equal to 3 has both bits set.
    w & (w >> 1) & LOW == 0
}

/// A vector over F₃.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TritVec {
    len: usize,
    words: Vec<u64>,
}

impl TritVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn from_trits(trits: &[u8]) -> Result<Self> {
        let mut v = Self::zeros(trits.len());
        for (i, &t) in trits.iter().enumerate() {
            if t > 2 {
                return Err(Error::InvalidParameter("trit out of range"));
            }
            v.set(i, t);
        }
        Ok(v)
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        fill_random(&mut v.words, len, rng);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len);
        ((self.words[i / TRITS_PER_WORD] >> (2 * (i % TRITS_PER_WORD))) & 3) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, t: u8) {
        assert!(i < self.len && t < 3);
        let shift = 2 * (i % TRITS_PER_WORD);
        let w = &mut self.words[i / TRITS_PER_WORD];
        *w = (*w & !(3 << shift)) | (u64::from(t) << shift);
    }

    pub fn to_trits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|&w| ((w | (w >> 1)) & LOW).count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, other: &TritVec) {
        assert_eq!(self.len, other.len);
        axpy(&mut self.words, &other.words, 1);
    }

    pub fn sub_assign(&mut self, other: &TritVec) {
        assert_eq!(self.len, other.len);
        axpy(&mut self.words, &other.words, 2);
    }

    pub fn neg(&self) -> TritVec {
        Self { len: self.len, words: self.words.iter().map(|&w| neg_word(w)).collect() }
    }

    /// Coordinates `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> TritVec {
        assert!(start <= end && end <= self.len);
        let mut out = Self::zeros(end - start);
        for i in start..end {
            out.set(i - start, self.get(i));
        }
        out
    }

    /// `self ∥ other`.
    pub fn concat(&self, other: &TritVec) -> TritVec {
        let mut out = Self::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in 0..other.len {
            out.set(self.len + i, other.get(i));
        }
        out
    }

    /// Four trits per byte, least significant first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len.div_ceil(4));
        write_packed(&self.words, self.len, &mut out);
        out
    }

    /// Inverse of [`TritVec::to_bytes`]; rejects the field value 3 and
    /// nonzero padding.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(4) {
            return Err(Error::DimensionMismatch { expected: len.div_ceil(4), got: bytes.len() });
        }
        let mut v = Self::zeros(len);
        read_packed(bytes, len, &mut v.words)?;
        Ok(v)
    }
}

fn fill_random<R: RngCore + ?Sized>(words: &mut [u64], len: usize, rng: &mut R) {
    const POW3_40: u64 = 12_157_665_459_056_928_801;
    let mut i = 0;
    while i < len {
        // A draw below 3^40 is 40 independent uniform trits.
        let mut x = rng.next_u64();
        if x >= POW3_40 {
            continue;
        }
        for _ in 0..40.min(len - i) {
            words[i / TRITS_PER_WORD] |= (x % 3) << (2 * (i % TRITS_PER_WORD));
            x /= 3;
            i += 1;
        }
    }
}

fn write_packed(words: &[u64], len: usize, out: &mut Vec<u8>) {
    for b in 0..len.div_ceil(4) {
        out.push((words[b / 8] >> (8 * (b % 8))) as u8);
    }
}

fn read_packed(bytes: &[u8], len: usize, words: &mut [u64]) -> Result<()> {
    for (b, &byte) in bytes.iter().enumerate() {
        words[b / 8] |= u64::from(byte) << (8 * (b % 8));
    }
    let tail = len % TRITS_PER_WORD;
    if tail != 0 {
        if let Some(&last) = words.last() {
            if last >> (2 * tail) != 0 {
                return Err(Error::MalformedSignature);
            }
        }
    }
    if words.iter().all(|&w| valid_word(w)) {
        Ok(())
    } else {
        Err(Error::MalformedSignature)
    }
}

/// A row-major matrix over F₃; each row is padded to whole words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl TernaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        Self { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn random<R: RngCore + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let wpr = m.wpr;
        for r in 0..rows {
            fill_random(&mut m.data[r * wpr..(r + 1) * wpr], cols, rng);
        }
        m
    }

    pub fn from_rows(rows: &[TritVec]) -> Result<Self> {
        let cols = rows.first().map_or(0, TritVec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            m.data[i * m.wpr..(i + 1) * m.wpr].copy_from_slice(&r.words);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        assert!(r < self.rows && c < self.cols);
        ((self.data[r * self.wpr + c / TRITS_PER_WORD] >> (2 * (c % TRITS_PER_WORD))) & 3) as u8
    }

    pub fn set(&mut self, r: usize, c: usize, t: u8) {
        assert!(r < self.rows && c < self.cols && t < 3);
        let shift = 2 * (c % TRITS_PER_WORD);
        let w = &mut self.data[r * self.wpr + c / TRITS_PER_WORD];
        *w = (*w & !(3 << shift)) | (u64::from(t) << shift);
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    pub fn row(&self, r: usize) -> TritVec {
        TritVec { len: self.cols, words: self.row_words(r).to_vec() }
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_range(&self, start: usize, end: usize) -> TernaryMatrix {
        assert!(start <= end && end <= self.rows);
        Self { rows: end - start, cols: self.cols, wpr: self.wpr, data: self.data[start * self.wpr..end * self.wpr].to_vec() }
    }

    /// Stacks `self` above `below`.
    pub fn vstack(&self, below: &TernaryMatrix) -> Result<TernaryMatrix> {
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: below.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(Self { rows: self.rows + below.rows, cols: self.cols, wpr: self.wpr, data })
    }

    /// `acc += Σ_i v_i · row_{offset + i}`, accumulating into packed words.
    pub(crate) fn accumulate_rows(&self, v: &TritVec, offset: usize, acc: &mut [u64]) {
        debug_assert!(offset + v.len() <= self.rows && acc.len() == self.wpr);
        for i in 0..v.len() {
            axpy(acc, self.row_words(offset + i), v.get(i));
        }
    }

    /// Rank over F₃ by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u8>> = (0..self.rows).map(|r| self.row(r).to_trits()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = rows[rank][c]; // 1 and 2 are their own inverses.
            let pivot: Vec<u8> = rows[rank].iter().map(|&x| x * inv % 3).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let f = row[c];
                    for (x, &p) in row.iter_mut().zip(&pivot) {
                        *x = (*x + 3 - f * p % 3) % 3;
                    }
                }
            }
            rows[rank] = pivot;
            rank += 1;
        }
        rank
    }

    /// `self · other`.
    pub fn mul(&self, other: &TernaryMatrix) -> Result<TernaryMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: other.rows, got: self.cols });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let wpr = out.wpr;
        for r in 0..self.rows {
            let v = self.row(r);
            other.accumulate_rows(&v, 0, &mut out.data[r * wpr..(r + 1) * wpr]);
        }
        Ok(out)
    }

    /// `⌈cols/4⌉` bytes per row, four trits per byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.rows * self.cols.div_ceil(4));
        for r in 0..self.rows {
            write_packed(self.row_words(r), self.cols, &mut out);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], rows: usize, cols: usize) -> Result<Self> {
        let per_row = cols.div_ceil(4);
        if bytes.len() != rows * per_row {
            return Err(Error::DimensionMismatch { expected: rows * per_row, got: bytes.len() });
        }
        let mut m = Self::zeros(rows, cols);
        let wpr = m.wpr;
        for r in 0..rows {
            read_packed(&bytes[r * per_row..(r + 1) * per_row], cols, &mut m.data[r * wpr..(r + 1) * wpr])
                .map_err(|_| Error::MalformedKey("invalid trit encoding"))?;
        }
        Ok(m)
    }

    pub fn serialized_len(&self) -> usize {
        self.rows * self.cols.div_ceil(4)
    }
}

/// `v · M` for a row vector `v` of length `M.rows()`.
pub fn f3_matvec(v: &TritVec, m: &TernaryMatrix) -> Result<TritVec> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: v.len() });
    }
    let mut out = TritVec::zeros(m.cols());
    m.accumulate_rows(v, 0, &mut out.words);
    Ok(out)
}
