//! Dense linear algebra over prime fields `F_p`.
//!
//! Everything downstream (Hom-spaces, kernels, cokernels, divisibility) is
//! phrased as a linear system over `F_p` and lands here. Matrices are tiny
//! (dimension at most a few dozen), so the representation is a flat
//! row-major `Vec<u8>` and elimination is plain Gauss-Jordan.

use std::fmt;

use crate::error::{Error, Result};

/// Primes the engine accepts.
pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

pub fn check_prime(p: u8) -> Result<()> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::Usage(format!("unsupported prime {p}; expected one of 2, 3, 5, 7")))
    }
}

#[inline]
pub fn add(p: u8, a: u8, b: u8) -> u8 {
    ((a as u16 + b as u16) % p as u16) as u8
}

#[inline]
pub fn sub(p: u8, a: u8, b: u8) -> u8 {
    ((a as u16 + p as u16 - b as u16) % p as u16) as u8
}

#[inline]
pub fn mul(p: u8, a: u8, b: u8) -> u8 {
    ((a as u16 * b as u16) % p as u16) as u8
}

#[inline]
pub fn neg(p: u8, a: u8) -> u8 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn inv(p: u8, a: u8) -> u8 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    (1..p).find(|&x| mul(p, a, x) == 1).expect("nonzero residue is invertible")
}

/// Reduces an arbitrary integer into `[0, p)`.
pub fn residue(p: u8, v: i64) -> u8 {
    v.rem_euclid(p as i64) as u8
}

/// `y += c * x` on vectors.
pub fn axpy(p: u8, y: &mut [u8], c: u8, x: &[u8]) {
    if c == 0 {
        return;
    }
    let (p16, c16) = (p as u16, c as u16);
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = ((*yi as u16 + c16 * xi as u16) % p16) as u8;
    }
}

pub fn scale_vec(p: u8, v: &mut [u8], c: u8) {
    for x in v.iter_mut() {
        *x = mul(p, *x, c);
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<F_{}>[", self.p)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(p: u8, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u8, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(p: u8, n: usize, c: u8) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % p;
        }
        m
    }

    /// Builds a matrix from raw row-major data, reducing every entry mod `p`.
    pub fn from_data(p: u8, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        let data = data.into_iter().map(|x| x % p).collect();
        Self { p, rows, cols, data }
    }

    /// Builds a matrix from integer rows. All rows must have the same length;
    /// `cols` is needed for the zero-row case.
    pub fn from_rows(p: u8, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Usage(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&v| residue(p, v)));
        }
        Ok(Self { p, rows: rows.len(), cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u8, rows: usize, columns: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for (r, &x) in v.iter().enumerate() {
                m.data[r * m.cols + c] = x;
            }
        }
        m
    }

    pub fn p(&self) -> u8 {
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u8>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as u8))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = Matrix::zeros(p, self.rows, other.cols);
        for r in 0..self.rows {
            let orow = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a != 0 {
                    axpy(p, orow, a, other.row(k));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let p = self.p as u32;
        (0..self.rows)
            .map(|r| {
                let s: u32 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
                (s % p) as u8
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add(p, a, b)).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape mismatch");
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub(p, a, b)).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u8) -> Matrix {
        let p = self.p;
        let data = self.data.iter().map(|&a| mul(p, a, c)).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: u8, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        axpy(self.p, &mut self.data, c, &other.data);
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product; row index `(i, k) -> i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let p = self.p;
        let (r2, c2) = (other.rows, other.cols);
        let mut out = Matrix::zeros(p, self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out.data[(i * r2 + k) * out.cols + j * c2 + l] = mul(p, a, other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(p: u8, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.write_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn hstack(p: u8, rows: usize, blocks: &[Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.write_block(0, c0, b);
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(p: u8, cols: usize, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let mut r0 = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            out.write_block(r0, 0, b);
            r0 += b.rows;
        }
        out
    }

    pub fn write_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.p, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == self.rows {
                break;
            }
            let Some(piv) = (lead..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if piv != lead {
                for k in 0..cols {
                    self.data.swap(piv * cols + k, lead * cols + k);
                }
            }
            let iv = inv(p, self.data[lead * cols + c]);
            scale_vec(p, &mut self.data[lead * cols..(lead + 1) * cols], iv);
            let pivot_row = self.data[lead * cols..(lead + 1) * cols].to_vec();
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let f = self.data[r * cols + c];
                if f != 0 {
                    axpy(p, &mut self.data[r * cols..(r + 1) * cols], neg(p, f), &pivot_row);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut e = Eliminator::new(self.p, self.cols);
        for r in 0..self.rows {
            e.push(self.row(r).to_vec());
        }
        e.rank()
    }

    /// Basis of `{x : self * x = 0}` in canonical order (one vector per free column,
    /// free variable set to 1, others to 0).
    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let mut e = Eliminator::new(self.p, self.cols);
        for r in 0..self.rows {
            e.push(self.row(r).to_vec());
        }
        e.nullspace()
    }

    /// Canonical solution of `self * x = target`: free variables set to zero.
    pub fn solve(&self, target: &[u8]) -> Result<Option<Vec<u8>>> {
        if target.len() != self.rows {
            return Err(Error::Usage(format!(
                "solve: target has length {}, matrix has {} rows",
                target.len(),
                self.rows
            )));
        }
        let p = self.p;
        let mut aug = Matrix::zeros(p, self.rows, self.cols + 1);
        for (r, &t) in target.iter().enumerate() {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols].copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = t % p;
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u8; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hstack(self.p, n, &[self.clone(), Matrix::identity(self.p, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows.max(1) as u64).is_zero()
    }

    /// Row-major flattening.
    pub fn to_vec(&self) -> Vec<u8> {
        self.data.clone()
    }

    pub fn column_space(&self) -> Subspace {
        Subspace::from_spanning(self.p, self.rows, &self.columns())
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::from_spanning(self.p, self.cols, &self.nullspace())
    }

    /// Integer rows for serialization.
    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|&x| x as i64).collect()).collect()
    }
}

/// Incremental Gaussian elimination: rows are pushed one by one and kept in
/// reduced echelon form. Used wherever a large system is assembled equation
/// by equation (intertwiner systems for Hom-spaces).
#[derive(Clone, Debug)]
pub struct Eliminator {
    p: u8,
    width: usize,
    /// Rows with leading 1 at `pivots[i]`, fully reduced against each other.
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Eliminator {
    pub fn new(p: u8, width: usize) -> Self {
        Self { p, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `v` against the current rows. Returns the residue.
    pub fn reduce(&self, mut v: Vec<u8>) -> Vec<u8> {
        let p = self.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                axpy(p, &mut v, neg(p, f), row);
            }
        }
        v
    }

    /// Adds a row; returns true if it increased the rank.
    pub fn push(&mut self, v: Vec<u8>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        if self.rows.len() == self.width {
            return false;
        }
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let iv = inv(p, v[pc]);
        scale_vec(p, &mut v, iv);
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                axpy(p, row, neg(p, f), &v);
            }
        }
        let pos = self.pivots.partition_point(|&x| x < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, v);
        true
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let p = self.p;
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.width];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        for free in (0..self.width).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u8; self.width];
            x[free] = 1;
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                x[pc] = neg(p, row[free]);
            }
            out.push(x);
        }
        out
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace { p: self.p, ambient: self.width, basis: self.rows, pivots: self.pivots }
    }
}

/// A subspace of `F_p^n` stored as its reduced row echelon basis, which is
/// canonical: equal subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u8,
    ambient: usize,
    basis: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

/// Result of [`Subspace::combine`].
#[derive(Clone, Debug)]
pub struct SubspaceOps {
    pub sum: Subspace,
    pub intersection: Subspace,
    /// Whether the second argument is contained in the first.
    pub contains: bool,
}

impl Subspace {
    pub fn zero(p: u8, ambient: usize) -> Self {
        Self { p, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u8, ambient: usize) -> Self {
        Self::from_spanning(p, ambient, &Matrix::identity(p, ambient).to_rows())
    }

    pub fn from_spanning(p: u8, ambient: usize, vectors: &[Vec<u8>]) -> Self {
        let mut e = Eliminator::new(p, ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "spanning vector has wrong length");
            e.push(v.clone());
            if e.is_full() {
                break;
            }
        }
        e.into_subspace()
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    fn eliminator(&self) -> Eliminator {
        Eliminator { p: self.p, width: self.ambient, rows: self.basis.clone(), pivots: self.pivots.clone() }
    }

    /// Residue of `v` modulo the subspace (zero iff `v` lies in it).
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut v = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                axpy(p, &mut v, neg(p, f), row);
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u8]) -> Option<Vec<u8>> {
        let coords: Vec<u8> = self.pivots.iter().map(|&c| v[c]).collect();
        let mut recon = vec![0u8; self.ambient];
        for (row, &c) in self.basis.iter().zip(&coords) {
            axpy(self.p, &mut recon, c, row);
        }
        (recon == v).then_some(coords)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut e = self.eliminator();
        for v in &other.basis {
            e.push(v.clone());
        }
        Ok(e.into_subspace())
    }

    /// Zassenhaus intersection.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient;
        let mut e = Eliminator::new(self.p, 2 * n);
        for v in &self.basis {
            let mut row = v.clone();
            row.extend_from_slice(v);
            e.push(row);
        }
        for v in &other.basis {
            let mut row = v.clone();
            row.extend(std::iter::repeat_n(0, n));
            e.push(row);
        }
        let vecs: Vec<Vec<u8>> = e
            .rows()
            .iter()
            .zip(e.pivots())
            .filter(|(_, &pc)| pc >= n)
            .map(|(row, _)| row[n..].to_vec())
            .collect();
        Ok(Subspace::from_spanning(self.p, n, &vecs))
    }

    pub fn combine(&self, other: &Subspace) -> Result<SubspaceOps> {
        Ok(SubspaceOps {
            sum: self.sum(other)?,
            intersection: self.intersection(other)?,
            contains: self.contains(other),
        })
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.p != other.p || self.ambient != other.ambient {
            return Err(Error::Usage(format!(
                "subspace mismatch: F_{}^{} vs F_{}^{}",
                self.p, self.ambient, other.p, other.ambient
            )));
        }
        Ok(())
    }

    /// Image of the subspace under a linear map.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let vecs: Vec<Vec<u8>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_spanning(self.p, m.rows(), &vecs)
    }

    /// Extends the echelon basis to a basis of `bigger` (which must contain `self`),
    /// returning only the added vectors, taken from `bigger`'s canonical basis.
    pub fn complement_in(&self, bigger: &Subspace) -> Vec<Vec<u8>> {
        let mut e = self.eliminator();
        let mut added = Vec::new();
        for v in &bigger.basis {
            if e.push(v.clone()) {
                added.push(v.clone());
            }
        }
        added
    }
}

/// `V / W` with the canonical complement spanned by the unit vectors at the
/// non-pivot columns of `W`'s echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    sub: Subspace,
    free: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let mut is_pivot = vec![false; sub.ambient];
        for &c in &sub.pivots {
            is_pivot[c] = true;
        }
        let free = (0..sub.ambient).filter(|&c| !is_pivot[c]).collect();
        Self { sub, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.sub.ambient
    }

    pub fn relations(&self) -> &Subspace {
        &self.sub
    }

    pub fn project(&self, v: &[u8]) -> Vec<u8> {
        let r = self.sub.reduce(v);
        self.free.iter().map(|&c| r[c]).collect()
    }

    /// Canonical representative of a quotient class.
    pub fn lift(&self, coords: &[u8]) -> Vec<u8> {
        let mut v = vec![0u8; self.sub.ambient];
        for (&c, &x) in self.free.iter().zip(coords) {
            v[c] = x;
        }
        v
    }

    /// Matrix of the projection `V -> V/W`.
    pub fn projection_matrix(&self) -> Matrix {
        let p = self.sub.p;
        let n = self.sub.ambient;
        let cols: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut e = vec![0u8; n];
                e[i] = 1;
                self.project(&e)
            })
            .collect();
        Matrix::from_columns(p, self.dim(), &cols)
    }

    /// Matrix of the canonical section `V/W -> V`.
    pub fn section_matrix(&self) -> Matrix {
        let p = self.sub.p;
        let n = self.sub.ambient;
        let mut m = Matrix::zeros(p, n, self.dim());
        for (j, &c) in self.free.iter().enumerate() {
            m.set(c, j, 1);
        }
        m
    }

    /// The map `V/W -> V'/W'` induced by `m: V -> V'`. Caller guarantees `m(W) ⊆ W'`.
    pub fn induced(&self, target: &Quotient, m: &Matrix) -> Matrix {
        let p = self.sub.p;
        let cols: Vec<Vec<u8>> = self
            .free
            .iter()
            .map(|&c| {
                let mut e = vec![0u8; self.sub.ambient];
                e[c] = 1;
                target.project(&m.mul_vec(&e))
            })
            .collect();
        Matrix::from_columns(p, target.dim(), &cols)
    }
}

/// Enumerates every vector of `F_p^n` in lexicographic order.
pub fn all_vectors(p: u8, n: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut k| {
        let mut v = vec![0u8; n];
        for x in v.iter_mut().rev() {
            *x = (k % p as u64) as u8;
            k /= p as u64;
        }
        v
    })
}

/// `p^n`, saturating.
pub fn field_power(p: u8, n: usize) -> u64 {
    (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX)
}

/// Linear combination of matrices.
pub fn combine_matrices(p: u8, rows: usize, cols: usize, coeffs: &[u8], mats: &[Matrix]) -> Matrix {
    let mut acc = Matrix::zeros(p, rows, cols);
    for (&c, m) in coeffs.iter().zip(mats) {
        acc.add_scaled(c, m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u8, cols: usize, rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Matrix::from_rows(p, cols, &rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(2, 2).rank(), 2);
        assert_eq!(Matrix::zeros(2, 3, 3).rank(), 0);
        assert_eq!(m(2, 2, &[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let v = vec![1, 0, 2];
        assert_eq!(Matrix::identity(3, 3).solve(&v).unwrap(), Some(v));
        assert_eq!(Matrix::zeros(2, 2, 2).solve(&[1, 0]).unwrap(), None);
        assert_eq!(m(2, 2, &[&[1, 1]]).solve(&[1]).unwrap(), Some(vec![1, 0]));
        assert!(Matrix::identity(2, 2).solve(&[1]).is_err());
    }

    #[test]
    fn subspace_examples() {
        let whole = Subspace::full(2, 3);
        let b = Subspace::from_spanning(2, 3, &[vec![1, 1, 0]]);
        assert!(whole.combine(&b).unwrap().contains);

        let l1 = Subspace::from_spanning(2, 2, &[vec![1, 0]]);
        let l2 = Subspace::from_spanning(2, 2, &[vec![1, 1]]);
        let ops = l1.combine(&l2).unwrap();
        assert_eq!(ops.intersection.dim(), 0);
        assert_eq!(ops.sum.dim(), 2);

        let a = Subspace::from_spanning(2, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::from_spanning(2, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersection(&b).unwrap();
        assert_eq!(i, Subspace::from_spanning(2, 3, &[vec![0, 1, 0]]));

        assert!(a.sum(&Subspace::zero(2, 4)).is_err());
    }

    #[test]
    fn inverse_and_kron() {
        let a = m(3, 2, &[&[1, 2], &[0, 1]]);
        let ai = a.inverse().unwrap();
        assert!(a.mul(&ai).is_identity());
        assert!(m(2, 2, &[&[1, 1], &[1, 1]]).inverse().is_none());
        let k = Matrix::identity(2, 2).kron(&m(2, 2, &[&[0, 1], &[0, 0]]));
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(2, 3), 1);
        assert_eq!(k.get(0, 1), 1);
    }

    #[test]
    fn quotient_projection_kills_relations() {
        let w = Subspace::from_spanning(2, 3, &[vec![1, 1, 0]]);
        let q = Quotient::new(w);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&[1, 1, 0]), vec![0, 0]);
        let v = q.lift(&[1, 1]);
        assert_eq!(q.project(&v), vec![1, 1]);
    }
}
