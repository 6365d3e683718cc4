use std::fmt;

use super::{Prime, Subspace};
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(p). Entries are always reduced into `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// In-place reduced row echelon form of a row-major `rows x cols` block.
/// Pivots are the smallest available column index and are normalized to 1.
/// Returns the pivot columns, one per nonzero row.
pub(crate) fn rref_in_place(p: Prime, data: &mut [u8], rows: usize, cols: usize) -> Vec<usize> {
    debug_assert_eq!(data.len(), rows * cols);
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        if top == rows {
            break;
        }
        let Some(pr) = (top..rows).find(|&r| data[r * cols + c] != 0) else {
            continue;
        };
        if pr != top {
            for k in 0..cols {
                data.swap(pr * cols + k, top * cols + k);
            }
        }
        let inv = p.inv(data[top * cols + c]);
        for k in c..cols {
            data[top * cols + k] = p.mul(data[top * cols + k], inv);
        }
        for r in 0..rows {
            if r == top {
                continue;
            }
            let f = data[r * cols + c];
            if f == 0 {
                continue;
            }
            let nf = p.neg(f);
            for k in c..cols {
                let v = data[top * cols + k];
                if v != 0 {
                    data[r * cols + k] = p.mul_add(data[r * cols + k], nf, v);
                }
            }
        }
        pivots.push(c);
        top += 1;
    }
    pivots
}

/// Rank of a row-major block without keeping the echelon form.
pub(crate) fn rank_of(p: Prime, data: &[u8], rows: usize, cols: usize) -> usize {
    let mut scratch = data.to_vec();
    rref_in_place(p, &mut scratch, rows, cols).len()
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<FpMatrix> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(FpMatrix::from_fn(p, rows.len(), cols, |i, j| rows[i].as_ref()[j]))
    }

    pub fn from_fn(p: Prime, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> FpMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(p.reduce(f(i, j)));
            }
        }
        FpMatrix { p, rows, cols, data }
    }

    /// Takes ownership of already-reduced row-major data.
    pub fn from_vec(p: Prime, rows: usize, cols: usize, data: Vec<u8>) -> Result<FpMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x % p.get()).collect();
        Ok(FpMatrix { p, rows, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, n: usize, columns: &[Vec<u8>]) -> FpMatrix {
        FpMatrix::from_fn(p, n, columns.len(), |i, j| columns[j][i] as i64)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = self.p.reduce(v);
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// `M^T = -M` with zero diagonal.
    pub fn is_alternating(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i) == 0 && (i + 1..self.cols).all(|j| self.get(j, i) == self.p.neg(self.get(i, j)))
            })
    }

    pub fn transpose(&self) -> FpMatrix {
        FpMatrix::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i) as i64)
    }

    fn same_field(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[i * other.cols + j] += a * other.get(k, j) as u32;
                }
            }
            for j in 0..other.cols {
                out[i * other.cols + j] %= p.value();
            }
        }
        Ok(FpMatrix {
            p,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u8).collect(),
        })
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("shapes differ in add".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.p.add(a, b)).collect();
        Ok(FpMatrix { data, ..*self })
    }

    pub fn scale(&self, c: u8) -> FpMatrix {
        let data = self.data.iter().map(|&a| self.p.mul(a, c)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s: u32 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                (s % self.p.value()) as u8
            })
            .collect()
    }

    /// Row vector times matrix: `v^T M`.
    pub fn vec_mul(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.rows);
        let mut acc = vec![0u32; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, a) in acc.iter_mut().enumerate() {
                *a += vi as u32 * self.get(i, j) as u32;
            }
        }
        acc.into_iter().map(|x| (x % self.p.value()) as u8).collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut data = self.data.clone();
        let pivots = rref_in_place(self.p, &mut data, self.rows, self.cols);
        (FpMatrix { data, ..*self }, pivots)
    }

    pub fn rank(&self) -> usize {
        rank_of(self.p, &self.data, self.rows, self.cols)
    }

    /// Right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u8; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.p.neg(r.get(row, f));
                }
                v
            })
            .collect::<Vec<_>>();
        Subspace::span(self.p, self.cols, &basis)
    }

    /// Solves `M x = rhs`. Returns a particular solution and a kernel basis,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[u8]) -> Option<(Vec<u8>, Vec<Vec<u8>>)> {
        assert_eq!(rhs.len(), self.rows);
        let w = self.cols + 1;
        let mut aug = Vec::with_capacity(self.rows * w);
        for i in 0..self.rows {
            aug.extend_from_slice(self.row(i));
            aug.push(rhs[i] % self.p.get());
        }
        let pivots = rref_in_place(self.p, &mut aug, self.rows, w);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[row * w + self.cols];
        }
        let kernel = (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![0u8; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.p.neg(aug[row * w + f]);
                }
                v
            })
            .collect();
        Some((x, kernel))
    }

    pub fn invert(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("cannot invert {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let w = 2 * n;
        let mut aug = vec![0u8; n * w];
        for i in 0..n {
            aug[i * w..i * w + n].copy_from_slice(self.row(i));
            aug[i * w + n + i] = 1;
        }
        let pivots = rref_in_place(self.p, &mut aug, n, w);
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return Err(Error::Singular);
        }
        let data = (0..n).flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec()).collect();
        Ok(FpMatrix {
            p: self.p,
            rows: n,
            cols: n,
            data,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &FpMatrix) -> FpMatrix {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        FpMatrix::from_fn(self.p, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j) as i64
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols) as i64
            } else {
                0
            }
        })
    }

    /// Characteristic polynomial `det(xI - M)`, coefficients from the constant term up
    /// (monic, length n + 1). Uses a Hessenberg reduction.
    pub fn char_poly(&self) -> Vec<u8> {
        assert!(self.is_square());
        let p = self.p;
        let n = self.rows;
        let mut h = self.data.clone();
        let at = |i: usize, j: usize| i * n + j;
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h[at(i, j)] != 0) else {
                continue;
            };
            if piv != j + 1 {
                for k in 0..n {
                    h.swap(at(piv, k), at(j + 1, k));
                }
                for k in 0..n {
                    h.swap(at(k, piv), at(k, j + 1));
                }
            }
            let inv = p.inv(h[at(j + 1, j)]);
            for i in j + 2..n {
                let f = p.mul(h[at(i, j)], inv);
                if f == 0 {
                    continue;
                }
                let nf = p.neg(f);
                for k in 0..n {
                    h[at(i, k)] = p.mul_add(h[at(i, k)], nf, h[at(j + 1, k)]);
                }
                for k in 0..n {
                    h[at(k, j + 1)] = p.mul_add(h[at(k, j + 1)], f, h[at(k, i)]);
                }
            }
        }
        // polys[k] = char poly of the leading k x k block
        let mut polys: Vec<Vec<u8>> = vec![vec![1]];
        for k in 1..=n {
            let m = k - 1;
            let prev = &polys[k - 1];
            let mut next = vec![0u8; k + 1];
            for (e, &c) in prev.iter().enumerate() {
                next[e + 1] = p.add(next[e + 1], c);
                next[e] = p.sub(next[e], p.mul(h[at(m, m)], c));
            }
            let mut prod = 1u8;
            for i in 1..k {
                let row = m - i;
                prod = p.mul(prod, h[at(row + 1, row)]);
                let coeff = p.mul(h[at(row, m)], prod);
                if coeff == 0 {
                    continue;
                }
                for (e, &c) in polys[k - i - 1].iter().enumerate() {
                    next[e] = p.sub(next[e], p.mul(coeff, c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{})[", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
