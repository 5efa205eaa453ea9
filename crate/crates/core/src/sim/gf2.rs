use std::fmt;

use rand::Rng;

/// Dense matrix over GF(2), rows packed into `u64` words (bit `j % 64` of
/// word `j / 64` is column `j`).
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// Uniformly random entries.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let tail = cols % 64;
        for r in 0..rows {
            let row = m.row_mut(r);
            for w in row.iter_mut() {
                *w = rng.random();
            }
            if tail != 0 {
                row[row.len() - 1] &= (1u64 << tail) - 1;
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {r} has the wrong width");
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.words..(r + 1) * self.words]
    }

    /// Matrix-vector product; `v` holds one bit per column.
    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).filter(|&c| v[c] && self.get(r, c)).count() % 2 == 1)
            .collect()
    }

    /// Keeps the listed rows, in order.
    pub fn select_rows(&self, keep: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = Vec::new();
        let mut rows = 0;
        for r in keep {
            bits.extend_from_slice(self.row(r));
            rows += 1;
        }
        Self {
            rows,
            cols: self.cols,
            words: self.words,
            bits,
        }
    }

    /// `[self | other]` side by side.
    pub fn hstack(&self, other: &Gf2Matrix) -> Self {
        let all = vec![true; self.rows];
        self.hstack_masked(other, &all, &all)
    }

    /// `[D(left) self | D(right) other]` where `D(mask)` zeroes the rows whose
    /// mask entry is false. Rows zeroed on both sides are dropped since they
    /// carry no equation.
    pub fn hstack_masked(&self, other: &Gf2Matrix, left: &[bool], right: &[bool]) -> Self {
        assert_eq!(self.rows, other.rows);
        assert!(left.len() == self.rows && right.len() == self.rows);
        let cols = self.cols + other.cols;
        let words = cols.div_ceil(64);
        let (shift, base) = (self.cols % 64, self.cols / 64);
        let mut bits = Vec::new();
        let mut rows = 0;
        for r in 0..self.rows {
            if !left[r] && !right[r] {
                continue;
            }
            let start = bits.len();
            bits.resize(start + words, 0);
            let dst = &mut bits[start..];
            if left[r] {
                dst[..self.words].copy_from_slice(self.row(r));
            }
            if right[r] {
                for (i, &w) in other.row(r).iter().enumerate() {
                    dst[base + i] |= w << shift;
                    if shift != 0 && base + i + 1 < words {
                        dst[base + i + 1] |= w >> (64 - shift);
                    }
                }
            }
            rows += 1;
        }
        Self {
            rows,
            cols,
            words,
            bits,
        }
    }

    /// Pivot columns found by left-to-right Gaussian elimination. The number
    /// of pivots below column `j` is the rank of the first `j` columns.
    pub fn rank_profile(&self) -> Vec<usize> {
        let mut m = self.bits.clone();
        let w = self.words;
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            if top == self.rows {
                break;
            }
            let (word, mask) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (top..self.rows).find(|&r| m[r * w + word] & mask != 0) else {
                continue;
            };
            if p != top {
                for k in word..w {
                    m.swap(p * w + k, top * w + k);
                }
            }
            let (head, tail) = m.split_at_mut((top + 1) * w);
            let pivot_row = &head[top * w..];
            for row in tail.chunks_exact_mut(w) {
                if row[word] & mask != 0 {
                    row[word..]
                        .iter_mut()
                        .zip(&pivot_row[word..])
                        .for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(c);
            top += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rank_profile().len()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn identity_and_zero() {
        for k in [1, 5, 64, 65, 130] {
            assert_eq!(Gf2Matrix::identity(k).rank(), k);
            assert_eq!(Gf2Matrix::zeros(k, k + 3).rank(), 0);
        }
    }

    #[test]
    fn dependent_rows() {
        let m = Gf2Matrix::from_rows(
            3,
            &[
                vec![true, true, false],
                vec![false, true, true],
                vec![true, false, true],
            ],
        );
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_profile(), vec![0, 1]);
    }

    #[test]
    fn random_tall_matrices_have_full_column_rank() {
        let mut rng = seeded(11);
        let failures = (0..1000)
            .filter(|_| Gf2Matrix::random(100, 80, &mut rng).rank() != 80)
            .count();
        assert_eq!(failures, 0);
    }

    #[test]
    fn select_and_stack() {
        let mut rng = seeded(2);
        let a = Gf2Matrix::random(10, 70, &mut rng);
        let b = Gf2Matrix::random(10, 3, &mut rng);
        let ab = a.hstack(&b);
        assert_eq!(ab.cols(), 73);
        assert!((0..10).all(|r| (0..3).all(|c| ab.get(r, 70 + c) == b.get(r, c))));
        let s = a.select_rows([7, 2]);
        assert_eq!(s.row(0), a.row(7));
        assert_eq!(s.row(1), a.row(2));
    }
}
