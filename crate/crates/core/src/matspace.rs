//! Dense matrices over GF(p), matrix tuples and matrix spaces.
//!
//! Row reduction always picks the leftmost pivot column and, within it, the
//! first nonzero row at or below the current position, so echelon forms,
//! ranks, kernels and determinants are reproducible bit for bit.
//!
//! Group enumeration (GL, monomial, symmetric) is budgeted: callers pass an
//! explicit element budget and get [`Error::Budget`] naming the required count
//! when the group is too large.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::gf::GF;

/// Default number of group elements a decider may enumerate.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// A dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    f: GF,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(fm, "Mat {}x{} over GF({})", self.rows, self.cols, self.f.p())?;
        for r in 0..self.rows {
            writeln!(fm, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(f: GF, rows: usize, cols: usize) -> Mat {
        Mat {
            f,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(f: GF, n: usize) -> Mat {
        let mut m = Mat::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % f.p();
        }
        m
    }

    /// Builds a matrix from row-major residues; entries are reduced mod p.
    pub fn from_vec(f: GF, rows: usize, cols: usize, data: Vec<u32>) -> Result<Mat> {
        if data.len() != rows * cols {
            return dim_err(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            ));
        }
        let data = data.into_iter().map(|v| v % f.p()).collect();
        Ok(Mat {
            f,
            rows,
            cols,
            data,
        })
    }

    /// Convenience constructor from signed rows; panics on ragged input.
    pub fn from_rows(f: GF, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| f.from_i64(v)));
        }
        Mat {
            f,
            rows: r,
            cols: c,
            data,
        }
    }

    /// The elementary matrix with a single 1 at `(i, j)`.
    pub fn unit(f: GF, rows: usize, cols: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(f, rows, cols);
        m.set(i, j, 1);
        m
    }

    pub fn diag(f: GF, d: &[u32]) -> Mat {
        let mut m = Mat::zeros(f, d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Permutation matrix with a 1 at `(i, perm[i])`.
    pub fn permutation(f: GF, perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zeros(f, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    #[inline]
    pub fn field(&self) -> GF {
        self.f
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.f.p();
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.f, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Matrix product; panics on incompatible shapes (use [`Mat::try_mul`]
    /// when the shapes come from user input).
    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let f = self.f;
        let p = f.p() as u64;
        let mut out = vec![0u32; self.rows * o.cols];
        let mut acc = vec![0u64; o.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (x, &b) in acc.iter_mut().zip(orow) {
                    *x += a * b as u64;
                }
            }
            for (j, x) in acc.iter().enumerate() {
                out[i * o.cols + j] = (x % p) as u32;
            }
        }
        Mat {
            f,
            rows: self.rows,
            cols: o.cols,
            data: out,
        }
    }

    pub fn try_mul(&self, o: &Mat) -> Result<Mat> {
        if self.cols != o.rows || self.f != o.f {
            return dim_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            ));
        }
        Ok(self.mul(o))
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = self.f;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        self.with_data(data)
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = self.f;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        self.with_data(data)
    }

    pub fn scale(&self, c: u32) -> Mat {
        let f = self.f;
        let data = self.data.iter().map(|&a| f.mul(a, c % f.p())).collect();
        self.with_data(data)
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.f.neg(1))
    }

    fn with_data(&self, data: Vec<u32>) -> Mat {
        Mat {
            f: self.f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.f.p() as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    /// `v · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let p = self.f.p() as u64;
        let mut acc = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (x, &b) in acc.iter_mut().zip(self.row(i)) {
                *x += a as u64 * b as u64;
            }
        }
        acc.into_iter().map(|x| (x % p) as u32).collect()
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.f, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        let mut m = Mat::zeros(self.f, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.data[(i - r0) * (c1 - c0) + (j - c0)] = self.get(i, j);
            }
        }
        m
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn block_diag(f: GF, blocks: &[&Mat]) -> Mat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(f, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let f = self.f;
        let mut m = Mat::zeros(f, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, f.mul(a, o.get(k, l)));
                    }
                }
            }
        }
        m
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Mat {
            f: self.f,
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let mut m = Mat::zeros(self.f, self.rows, self.cols + o.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, o);
        m
    }

    /// Alternating in the characteristic-free sense: `A = -Aᵗ` with zero
    /// diagonal.
    pub fn is_alternating(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i) == 0
                    && (0..i).all(|j| self.get(i, j) == self.f.neg(self.get(j, i)))
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn rref(&self) -> Rref {
        Rref::of(self)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Determinant via the row-reduction pipeline.
    pub fn det(&self) -> Result<u32> {
        if !self.is_square() {
            return dim_err("determinant of a non-square matrix");
        }
        let f = self.f;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1 % f.p();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return Ok(0);
            };
            if piv != c {
                for j in 0..n {
                    a.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[c * n + c];
            det = f.mul(det, pv);
            let inv = f.inv_nz(pv);
            for r in c + 1..n {
                let x = a[r * n + c];
                if x == 0 {
                    continue;
                }
                let factor = f.mul(x, inv);
                for j in c..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[c * n + j]));
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.det().map(|d| d != 0).unwrap_or(false)
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return dim_err("inverse of a non-square matrix");
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hstack(&Mat::identity(self.f, n));
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.mat.submatrix(0, n, n, 2 * n))
    }

    /// Basis of `{v : self · v = 0}`, one basis vector per row.
    pub fn right_kernel(&self) -> Mat {
        let r = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.f, free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            k.set(bi, fc, 1);
            for (pi, &pc) in r.pivots.iter().enumerate() {
                k.set(bi, pc, self.f.neg(r.mat.get(pi, fc)));
            }
        }
        k
    }

    /// Basis of `{u : u · self = 0}`, one basis vector per row.
    pub fn left_kernel(&self) -> Mat {
        self.transpose().right_kernel()
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn of(m: &Mat) -> Rref {
        let f = m.f;
        let (rows, cols) = (m.rows, m.cols);
        let mut a = m.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    a.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv_nz(a[r * cols + c]);
            for j in 0..cols {
                a[r * cols + j] = f.mul(a[r * cols + j], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let x = a[i * cols + c];
                if x == 0 {
                    continue;
                }
                for j in 0..cols {
                    a[i * cols + j] = f.sub(a[i * cols + j], f.mul(x, a[r * cols + j]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            mat: Mat {
                f,
                rows,
                cols,
                data: a,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Result of [`solve`]: a distinguished value rather than an error when the
/// system is inconsistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    NoSolution,
    /// One solution `x` (one column per right-hand side) plus a basis of the
    /// right kernel of the coefficient matrix (one vector per row).
    Solved { particular: Mat, nullspace: Mat },
}

/// Solves `m · x = rhs` where `rhs` may have several columns.
pub fn solve(m: &Mat, rhs: &Mat) -> Result<Solution> {
    if m.rows != rhs.rows {
        return dim_err("right-hand side has the wrong number of rows");
    }
    let aug = m.hstack(rhs);
    let r = aug.rref();
    if r.pivots.iter().any(|&c| c >= m.cols) {
        return Ok(Solution::NoSolution);
    }
    let mut x = Mat::zeros(m.f, m.cols, rhs.cols);
    for (i, &c) in r.pivots.iter().enumerate() {
        for t in 0..rhs.cols {
            x.set(c, t, r.mat.get(i, m.cols + t));
        }
    }
    Ok(Solution::Solved {
        particular: x,
        nullspace: m.right_kernel(),
    })
}

/// Column-reduction transform: an invertible `N` with `x·N = [B | 0]`, where
/// the columns of `B` are the reduced row echelon basis of the column space.
fn column_normalizer(x: &Mat) -> Mat {
    let m = x.cols;
    let aug = x.transpose().hstack(&Mat::identity(x.f, m)).rref().mat;
    aug.submatrix(0, m, x.rows, x.rows + m).transpose()
}

/// Invertible `R` with `x·R = y`, if one exists. Such an `R` exists exactly
/// when `x` and `y` have the same shape and the same column space.
pub fn column_transport(x: &Mat, y: &Mat) -> Option<Mat> {
    if x.rows != y.rows || x.cols != y.cols || x.f != y.f {
        return None;
    }
    let nx = column_normalizer(x);
    let ny = column_normalizer(y);
    if x.mul(&nx) != y.mul(&ny) {
        return None;
    }
    let r = nx.mul(&ny.inverse().expect("normalizer is invertible"));
    debug_assert_eq!(x.mul(&r), *y);
    Some(r)
}

/// A subspace of GF(p)^dim kept in reduced echelon form, remembering how each
/// echelon row was built from the original generators.
#[derive(Clone, Debug)]
pub struct VecSpace {
    f: GF,
    dim: usize,
    ngens: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u32>>,
    independent: bool,
}

impl VecSpace {
    pub fn new(f: GF, dim: usize, gens: &[Vec<u32>]) -> VecSpace {
        let ngens = gens.len();
        let mut m = Mat::zeros(f, ngens, dim + ngens);
        for (i, g) in gens.iter().enumerate() {
            assert_eq!(g.len(), dim);
            for (j, &v) in g.iter().enumerate() {
                m.set(i, j, v);
            }
            m.set(i, dim + i, 1);
        }
        let r = m.rref();
        let rank = r.pivots.iter().take_while(|&&c| c < dim).count();
        let rows = (0..rank).map(|i| r.mat.row(i)[..dim].to_vec()).collect();
        let combos = (0..rank).map(|i| r.mat.row(i)[dim..].to_vec()).collect();
        VecSpace {
            f,
            dim,
            ngens,
            rows,
            pivots: r.pivots[..rank].to_vec(),
            combos,
            independent: rank == ngens,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Whether the generators were linearly independent.
    pub fn generators_independent(&self) -> bool {
        self.independent
    }

    /// Canonical echelon rows; two spaces are equal iff these agree.
    pub fn echelon(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Coefficients expressing `v` in terms of the generators, if `v` lies
    /// in the span. Only meaningful as unique coordinates when the generators
    /// are independent.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        let f = self.f;
        let mut w = v.to_vec();
        let mut c = vec![0u32; self.ngens];
        for (i, &pc) in self.pivots.iter().enumerate() {
            let x = w[pc];
            if x == 0 {
                continue;
            }
            for (a, &b) in w.iter_mut().zip(&self.rows[i]) {
                *a = f.sub(*a, f.mul(x, b));
            }
            for (a, &b) in c.iter_mut().zip(&self.combos[i]) {
                *a = f.add(*a, f.mul(x, b));
            }
        }
        if w.iter().all(|&x| x == 0) {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let f = self.f;
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let x = w[pc];
            if x == 0 {
                continue;
            }
            for (a, &b) in w.iter_mut().zip(&self.rows[i]) {
                *a = f.sub(*a, f.mul(x, b));
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn same_space(&self, o: &VecSpace) -> bool {
        self.dim == o.dim && self.rows == o.rows
    }
}

/// An ordered tuple of equally shaped matrices (the frontal slices of a
/// 3-way array).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixTuple {
    f: GF,
    rows: usize,
    cols: usize,
    slices: Vec<Mat>,
}

impl MatrixTuple {
    pub fn new(f: GF, rows: usize, cols: usize, slices: Vec<Mat>) -> Result<MatrixTuple> {
        for s in &slices {
            if s.rows != rows || s.cols != cols || s.f != f {
                return dim_err(format!(
                    "slice of shape {}x{} in a {}x{} tuple",
                    s.rows, s.cols, rows, cols
                ));
            }
        }
        Ok(MatrixTuple {
            f,
            rows,
            cols,
            slices,
        })
    }

    pub fn field(&self) -> GF {
        self.f
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn len(&self) -> usize {
        self.slices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }
    pub fn slices(&self) -> &[Mat] {
        &self.slices
    }
    pub fn slice(&self, k: usize) -> &Mat {
        &self.slices[k]
    }
    pub fn into_slices(self) -> Vec<Mat> {
        self.slices
    }

    pub fn is_alternating(&self) -> bool {
        self.slices.iter().all(Mat::is_alternating)
    }

    pub fn is_symmetric(&self) -> bool {
        self.slices.iter().all(Mat::is_symmetric)
    }

    pub fn span(&self) -> VecSpace {
        let gens: Vec<Vec<u32>> = self.slices.iter().map(Mat::flatten).collect();
        VecSpace::new(self.f, self.rows * self.cols, &gens)
    }

    /// `Σ_k c_k A_k`.
    pub fn combination(&self, c: &[u32]) -> Mat {
        assert_eq!(c.len(), self.slices.len());
        let mut acc = Mat::zeros(self.f, self.rows, self.cols);
        for (s, &x) in self.slices.iter().zip(c) {
            if x != 0 {
                acc = acc.add(&s.scale(x));
            }
        }
        acc
    }

    /// Mixes slices by `r` with the column convention: slice `c` of the
    /// result is `Σ_k r[k][c] A_k`.
    pub fn mix(&self, r: &Mat) -> Result<MatrixTuple> {
        if r.rows != self.len() {
            return dim_err("mixing matrix does not match the tuple length");
        }
        let slices = (0..r.cols).map(|c| self.combination(&r.col(c))).collect();
        MatrixTuple::new(self.f, self.rows, self.cols, slices)
    }

    /// `Xᵗ A_k Y` for every slice (no mixing).
    pub fn transform(&self, x: &Mat, y: &Mat) -> Result<MatrixTuple> {
        if x.rows != self.rows || y.rows != self.cols {
            return dim_err("transformation shape does not match the tuple");
        }
        let xt = x.transpose();
        let slices = self.slices.iter().map(|a| xt.mul(a).mul(y)).collect();
        MatrixTuple::new(self.f, x.cols, y.cols, slices)
    }

    /// Multiset of slice ranks, sorted.
    pub fn rank_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.slices.iter().map(Mat::rank).collect();
        v.sort_unstable();
        v
    }
}

/// A matrix space given by a basis (linearly independent slices).
#[derive(Clone, Debug)]
pub struct MatrixSpace {
    basis: MatrixTuple,
    span: VecSpace,
}

impl MatrixSpace {
    pub fn new(basis: MatrixTuple) -> Result<MatrixSpace> {
        let span = basis.span();
        if !span.generators_independent() {
            return Err(Error::InvalidInput(
                "matrix space basis is linearly dependent".into(),
            ));
        }
        Ok(MatrixSpace { basis, span })
    }

    /// The span of an arbitrary tuple, with the basis chosen by keeping the
    /// first independent slices.
    pub fn spanned_by(t: &MatrixTuple) -> MatrixSpace {
        let mut keep = Vec::new();
        let mut gens: Vec<Vec<u32>> = Vec::new();
        for s in t.slices() {
            let mut trial = gens.clone();
            trial.push(s.flatten());
            if VecSpace::new(t.f, t.rows * t.cols, &trial).generators_independent() {
                gens = trial;
                keep.push(s.clone());
            }
        }
        MatrixSpace::new(MatrixTuple::new(t.f, t.rows, t.cols, keep).expect("same shape"))
            .expect("independent by construction")
    }

    pub fn basis(&self) -> &MatrixTuple {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn is_alternating(&self) -> bool {
        self.basis.is_alternating()
    }
    pub fn is_symmetric(&self) -> bool {
        self.basis.is_symmetric()
    }

    pub fn contains(&self, m: &Mat) -> Result<bool> {
        if m.rows != self.basis.rows || m.cols != self.basis.cols {
            return dim_err("matrix shape differs from the space");
        }
        Ok(self.span.contains(m.data()))
    }

    /// Coordinates of `m` in the basis, if `m` lies in the space.
    pub fn coords(&self, m: &Mat) -> Option<Vec<u32>> {
        self.span.coords(m.data())
    }

    pub fn span_equal(&self, o: &MatrixSpace) -> Result<bool> {
        if self.basis.rows != o.basis.rows || self.basis.cols != o.basis.cols {
            return dim_err("matrix spaces of different shapes");
        }
        Ok(self.span.same_space(&o.span))
    }
}

/// Span membership as a free function.
pub fn span_membership(space: &MatrixSpace, m: &Mat) -> Result<bool> {
    space.contains(m)
}

/// Span equality as a free function.
pub fn span_equal(a: &MatrixSpace, b: &MatrixSpace) -> Result<bool> {
    a.span_equal(b)
}

/// A monomial matrix: row `i` holds `scalars[i]` in column `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    f: GF,
    perm: Vec<usize>,
    scalars: Vec<u32>,
}

impl MonomialMatrix {
    pub fn new(f: GF, perm: Vec<usize>, scalars: Vec<u32>) -> Result<MonomialMatrix> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &j in &perm {
            if j >= n || seen[j] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[j] = true;
        }
        if scalars.len() != n || scalars.iter().any(|&a| a % f.p() == 0) {
            return Err(Error::InvalidInput("monomial scalars must be nonzero".into()));
        }
        Ok(MonomialMatrix { f, perm, scalars })
    }

    /// Reads a monomial matrix back from its dense form.
    pub fn from_mat(m: &Mat) -> Option<MonomialMatrix> {
        if !m.is_square() {
            return None;
        }
        let n = m.rows;
        let mut perm = Vec::with_capacity(n);
        let mut scalars = Vec::with_capacity(n);
        for i in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&j| m.get(i, j) != 0).collect();
            if nz.len() != 1 {
                return None;
            }
            perm.push(nz[0]);
            scalars.push(m.get(i, nz[0]));
        }
        MonomialMatrix::new(m.f, perm, scalars).ok()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
    pub fn scalars(&self) -> &[u32] {
        &self.scalars
    }

    pub fn to_mat(&self) -> Mat {
        let n = self.perm.len();
        let mut m = Mat::zeros(self.f, n, n);
        for i in 0..n {
            m.set(i, self.perm[i], self.scalars[i]);
        }
        m
    }

    /// Splits `M = D · P` into a diagonal and a permutation matrix.
    pub fn diag_perm(&self) -> (Mat, Mat) {
        (
            Mat::diag(self.f, &self.scalars),
            Mat::permutation(self.f, &self.perm),
        )
    }
}

/// `∏_{i<n} (p^n − p^i)`, saturating at `u128::MAX` so that budget checks
/// refuse instead of overflowing.
pub fn gl_order(n: usize, p: u32) -> u128 {
    let q = p as u128;
    let Some(pn) = q.checked_pow(n as u32) else {
        return u128::MAX;
    };
    (0..n).fold(1u128, |acc, i| acc.saturating_mul(pn - q.pow(i as u32)))
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// `n! (p−1)^n`, saturating.
pub fn monomial_order(n: usize, p: u32) -> u128 {
    factorial(n).saturating_mul(((p - 1) as u128).saturating_pow(n as u32))
}

pub fn check_budget(what: &str, required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::Budget {
            what: what.to_string(),
            required,
            budget,
        });
    }
    Ok(())
}

/// Decodes the `code`-th matrix of the full matrix algebra in lexicographic
/// order over row-major entries (first entry most significant).
pub fn matrix_at(f: GF, n: usize, mut code: u128) -> Mat {
    let p = f.p() as u128;
    let mut data = vec![0u32; n * n];
    for slot in data.iter_mut().rev() {
        *slot = (code % p) as u32;
        code /= p;
    }
    Mat {
        f,
        rows: n,
        cols: n,
        data,
    }
}

/// Iterator over GL(n, p) in lexicographic row-major order.
pub struct GlIter {
    f: GF,
    n: usize,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for GlIter {
    type Item = Mat;
    fn next(&mut self) -> Option<Mat> {
        let p = self.f.p();
        while !self.done {
            let m = Mat {
                f: self.f,
                rows: self.n,
                cols: self.n,
                data: self.digits.clone(),
            };
            // advance
            let mut i = self.digits.len();
            loop {
                if i == 0 {
                    self.done = true;
                    break;
                }
                i -= 1;
                self.digits[i] += 1;
                if self.digits[i] < p {
                    break;
                }
                self.digits[i] = 0;
            }
            if m.det().map(|d| d != 0).unwrap_or(false) {
                return Some(m);
            }
        }
        None
    }
}

/// Streams GL(n, p), refusing when its order exceeds `budget`.
pub fn enumerate_gl(n: usize, f: GF, budget: u128) -> Result<GlIter> {
    check_budget(&format!("GL({n},{})", f.p()), gl_order(n, f.p()), budget)?;
    Ok(GlIter {
        f,
        n,
        digits: vec![0; n * n],
        done: false,
    })
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn enumerate_permutations(n: usize, budget: u128) -> Result<Vec<Vec<usize>>> {
    check_budget(&format!("S_{n}"), factorial(n), budget)?;
    Ok(permutations(n))
}

/// Mon(n, p): permutations in lexicographic order, and for each one the
/// scalar vectors in lexicographic order over `1..p`.
pub fn enumerate_monomial(n: usize, f: GF, budget: u128) -> Result<Vec<MonomialMatrix>> {
    check_budget(
        &format!("Mon({n},{})", f.p()),
        monomial_order(n, f.p()),
        budget,
    )?;
    let p = f.p();
    let mut out = Vec::new();
    for perm in permutations(n) {
        let mut sc = vec![1u32; n];
        loop {
            out.push(MonomialMatrix {
                f,
                perm: perm.clone(),
                scalars: sc.clone(),
            });
            let mut i = n;
            let mut carry = true;
            while carry && i > 0 {
                i -= 1;
                sc[i] += 1;
                if sc[i] < p {
                    carry = false;
                } else {
                    sc[i] = 1;
                }
            }
            if carry {
                break;
            }
        }
    }
    Ok(out)
}

/// Searches GL(n, p) for the first element (in enumeration order) on which
/// `test` returns `Some`, splitting the index range across rayon workers.
/// The result is independent of the number of workers.
pub fn search_gl<T, F>(n: usize, f: GF, budget: u128, test: F) -> Result<Option<T>>
where
    T: Send,
    F: Fn(&Mat) -> Option<T> + Sync,
{
    check_budget(&format!("GL({n},{})", f.p()), gl_order(n, f.p()), budget)?;
    let total = (f.p() as u128).pow((n * n) as u32);
    const CHUNK: u128 = 4096;
    let chunks = total.div_ceil(CHUNK);
    if chunks <= 1 {
        return Ok((0..total).find_map(|c| {
            let m = matrix_at(f, n, c);
            if m.is_invertible() {
                test(&m)
            } else {
                None
            }
        }));
    }
    let res = (0..chunks as u64).into_par_iter().find_map_first(|ch| {
        let lo = ch as u128 * CHUNK;
        let hi = (lo + CHUNK).min(total);
        (lo..hi).find_map(|c| {
            let m = matrix_at(f, n, c);
            if m.is_invertible() {
                test(&m)
            } else {
                None
            }
        })
    });
    Ok(res)
}

/// Random square matrix with uniform entries.
pub fn random_mat<R: Rng>(rng: &mut R, f: GF, rows: usize, cols: usize) -> Mat {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..f.p())).collect();
    Mat {
        f,
        rows,
        cols,
        data,
    }
}

/// Uniform element of GL(n, p) by rejection on the determinant.
pub fn random_gl<R: Rng>(rng: &mut R, f: GF, n: usize) -> Mat {
    loop {
        let m = random_mat(rng, f, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Uniform element of Mon(n, p).
pub fn random_monomial<R: Rng>(rng: &mut R, f: GF, n: usize) -> MonomialMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let scalars = (0..n).map(|_| rng.gen_range(1..f.p())).collect();
    MonomialMatrix { f, perm, scalars }
}

/// Seeded uniform element of GL(n, p).
pub fn sample_gl(n: usize, f: GF, seed: u64) -> Mat {
    random_gl(&mut ChaCha8Rng::seed_from_u64(seed), f, n)
}

/// Seeded uniform element of Mon(n, p).
pub fn sample_monomial(n: usize, f: GF, seed: u64) -> MonomialMatrix {
    random_monomial(&mut ChaCha8Rng::seed_from_u64(seed), f, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf(p: u32) -> GF {
        GF::new(p).unwrap()
    }

    #[test]
    fn spec_examples() {
        let f2 = gf(2);
        assert_eq!(Mat::identity(f2, 3).rank(), 3);
        let k = Mat::from_rows(f2, &[&[1, 1], &[0, 0]]).right_kernel();
        assert_eq!(k, Mat::from_rows(f2, &[&[1, 1]]));

        // x + 2y = 1, 2x + y = 1 over GF(3): the second row is twice the
        // first but the right-hand side is not, and x = y = 1 gives 0.
        let f3 = gf(3);
        let a = Mat::from_rows(f3, &[&[1, 2], &[2, 1]]);
        let b = Mat::from_rows(f3, &[&[1], &[1]]);
        assert_eq!(a.mul(&Mat::from_rows(f3, &[&[1], &[1]])), Mat::zeros(f3, 2, 1));
        assert_eq!(solve(&a, &b).unwrap(), Solution::NoSolution);
        // with right-hand side (0, 0) the same system is solved by x = y = 1
        match solve(&a, &Mat::zeros(f3, 2, 1)).unwrap() {
            Solution::Solved { particular, nullspace } => {
                let ones = Mat::from_rows(f3, &[&[1], &[1]]);
                assert!(particular.is_zero());
                assert_eq!(nullspace.rows(), 1);
                assert!(a.mul(&ones).is_zero());
            }
            Solution::NoSolution => panic!("homogeneous system is consistent"),
        }
    }

    #[test]
    fn inconsistent_system_is_distinguished() {
        let f = gf(5);
        let a = Mat::from_rows(f, &[&[1, 1], &[2, 2]]);
        let b = Mat::from_rows(f, &[&[1], &[3]]);
        assert_eq!(solve(&a, &b).unwrap(), Solution::NoSolution);
    }

    #[test]
    fn span_examples() {
        let f5 = gf(5);
        let s1 = MatrixSpace::new(
            MatrixTuple::new(f5, 2, 2, vec![Mat::identity(f5, 2)]).unwrap(),
        )
        .unwrap();
        let s2 = MatrixSpace::new(
            MatrixTuple::new(f5, 2, 2, vec![Mat::identity(f5, 2).scale(2)]).unwrap(),
        )
        .unwrap();
        assert!(span_equal(&s1, &s2).unwrap());

        let f3 = gf(3);
        let alt = Mat::from_rows(f3, &[&[0, 1], &[-1, 0]]);
        let s = MatrixSpace::new(MatrixTuple::new(f3, 2, 2, vec![alt]).unwrap()).unwrap();
        assert!(!span_membership(&s, &Mat::identity(f3, 2)).unwrap());
        assert!(s.contains(&Mat::zeros(f3, 3, 3)).is_err());
    }

    #[test]
    fn random_change_of_basis_preserves_span() {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_mat(&mut rng, f, 3, 3);
            let b = random_mat(&mut rng, f, 3, 3);
            let t = MatrixTuple::new(f, 3, 3, vec![a, b]).unwrap();
            if !t.span().generators_independent() {
                continue;
            }
            let g = random_gl(&mut rng, f, 2);
            let t2 = t.mix(&g).unwrap();
            let s1 = MatrixSpace::new(t).unwrap();
            let s2 = MatrixSpace::new(t2).unwrap();
            assert!(s1.span_equal(&s2).unwrap());
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_gl(2, gf(2), DEFAULT_BUDGET).unwrap().count(), 6);
        assert_eq!(enumerate_gl(3, gf(2), DEFAULT_BUDGET).unwrap().count(), 168);
        assert_eq!(gl_order(3, 2), 168);
        assert_eq!(gl_order(40, 5), u128::MAX);
        assert_eq!(monomial_order(60, 2), u128::MAX);
        assert_eq!(
            enumerate_gl(2, gf(3), DEFAULT_BUDGET).unwrap().count() as u128,
            gl_order(2, 3)
        );
        assert_eq!(enumerate_monomial(2, gf(3), DEFAULT_BUDGET).unwrap().len(), 8);
        assert_eq!(enumerate_permutations(4, DEFAULT_BUDGET).unwrap().len(), 24);
    }

    #[test]
    fn budget_refusal_names_the_count() {
        match enumerate_gl(3, gf(2), 100) {
            Err(Error::Budget { required, .. }) => assert_eq!(required, 168),
            other => panic!("expected refusal, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn gl_enumeration_is_lexicographic_and_distinct() {
        let f = gf(3);
        let all: Vec<Mat> = enumerate_gl(2, f, DEFAULT_BUDGET).unwrap().collect();
        let set: HashSet<Vec<u32>> = all.iter().map(|m| m.data().to_vec()).collect();
        assert_eq!(set.len(), all.len());
        for w in all.windows(2) {
            assert!(w[0].data() < w[1].data());
        }
        assert_eq!(all[0], Mat::from_rows(f, &[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn closure_spot_check() {
        let f = gf(3);
        let all: HashSet<Mat> = enumerate_gl(2, f, DEFAULT_BUDGET).unwrap().collect();
        let v: Vec<&Mat> = all.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a = v[rng.gen_range(0..v.len())];
            let b = v[rng.gen_range(0..v.len())];
            assert!(all.contains(&a.mul(b)));
            assert!(all.contains(&a.inverse().unwrap()));
        }
        let mon: HashSet<Mat> = enumerate_monomial(3, f, DEFAULT_BUDGET)
            .unwrap()
            .iter()
            .map(MonomialMatrix::to_mat)
            .collect();
        let mv: Vec<&Mat> = mon.iter().collect();
        for _ in 0..100 {
            let a = mv[rng.gen_range(0..mv.len())];
            let b = mv[rng.gen_range(0..mv.len())];
            assert!(mon.contains(&a.mul(b)));
            assert!(mon.contains(&a.inverse().unwrap()));
        }
    }

    #[test]
    fn search_gl_matches_sequential_first_hit() {
        let f = gf(2);
        let target = Mat::from_rows(f, &[&[1, 1, 0], &[0, 1, 1], &[1, 1, 1]]);
        let first_seq = enumerate_gl(3, f, DEFAULT_BUDGET)
            .unwrap()
            .find(|m| m.mul(m).det().unwrap() == 1 && m.get(0, 0) == 1)
            .unwrap();
        let first_par = search_gl(3, f, DEFAULT_BUDGET, |m| {
            (m.mul(m).det().unwrap() == 1 && m.get(0, 0) == 1).then(|| m.clone())
        })
        .unwrap()
        .unwrap();
        assert_eq!(first_seq, first_par);
        let hit = search_gl(3, f, DEFAULT_BUDGET, |m| (m == &target).then_some(()))
            .unwrap();
        assert!(hit.is_some());
    }

    #[test]
    fn sampling() {
        assert_eq!(sample_gl(1, gf(2), 3), Mat::identity(gf(2), 1));
        for s in 0..1000 {
            assert_ne!(sample_gl(4, gf(3), s).det().unwrap(), 0);
        }
        assert_eq!(sample_gl(3, gf(5), 9), sample_gl(3, gf(5), 9));
        let m = sample_monomial(4, gf(5), 1);
        assert_eq!(MonomialMatrix::from_mat(&m.to_mat()), Some(m));
    }

    #[test]
    fn sampling_uniform_over_gl22() {
        // Chi-square of 6000 draws against the 6 elements of GL(2,2).
        let f = gf(2);
        let elems: Vec<Mat> = enumerate_gl(2, f, DEFAULT_BUDGET).unwrap().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = vec![0usize; elems.len()];
        for _ in 0..6000 {
            let g = random_gl(&mut rng, f, 2);
            counts[elems.iter().position(|e| *e == g).unwrap()] += 1;
        }
        for c in counts {
            // expected 1000, sd ≈ 28.9
            assert!((c as f64 - 1000.0).abs() < 5.0 * 28.9, "count {c}");
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = random_mat(&mut rng, f, 3, 3);
            let b = random_mat(&mut rng, f, 3, 3);
            let dab = a.mul(&b).det().unwrap();
            assert_eq!(dab, f.mul(a.det().unwrap(), b.det().unwrap()));
            if a.is_invertible() {
                assert!(a.mul(&a.inverse().unwrap()).is_identity());
            } else {
                assert_eq!(a.inverse(), Err(Error::Singular));
            }
        }
    }

    #[test]
    fn kernels_are_kernels() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = random_mat(&mut rng, f, 3, 5);
            let k = a.right_kernel();
            assert_eq!(k.rows() + a.rank(), 5);
            assert!(a.mul(&k.transpose()).is_zero());
            let l = a.left_kernel();
            assert!(l.mul(&a).is_zero());
            assert_eq!(l.rows() + a.rank(), 3);
        }
    }

    #[test]
    fn alternating_flag_char2() {
        let f = gf(2);
        assert!(Mat::from_rows(f, &[&[0, 1], &[1, 0]]).is_alternating());
        // symmetric with nonzero diagonal is not alternating even though A = -Aᵗ
        assert!(!Mat::from_rows(f, &[&[1, 1], &[1, 0]]).is_alternating());
    }
}
