//! Exact linear algebra over `Z/n` and over the integers.
//!
//! Everything here uses the row-vector convention: a matrix `M` acts on row
//! vectors by `v ↦ vM`, the row span of `M` is the image, and kernels are left
//! kernels `{v : vM = 0}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices over different rings (Z/{0} vs Z/{1})")]
    RingMismatch(u64, u64),
    #[error("integer matrix too large for Smith form ({rows}x{cols}, limit {limit})")]
    TooLarge { rows: usize, cols: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// The residue ring `Z/n` with `n ≥ 2`. Values are canonical representatives in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    modulus: u64,
}

impl ResidueRing {
    pub fn new(modulus: u64) -> Result<Self, LinAlgError> {
        if modulus < 2 {
            return Err(LinAlgError::BadModulus(modulus));
        }
        Ok(ResidueRing { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.modulus as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.modulus;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a.gcd(&self.modulus) == 1
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let eg = (a as i128).extended_gcd(&(self.modulus as i128));
        if eg.gcd != 1 {
            return None;
        }
        Some(self.reduce(eg.x))
    }

    /// A unit `u` with `u·a ≡ gcd(a, n) (mod n)`.
    fn normalizing_unit(&self, a: u64) -> u64 {
        let n = self.modulus;
        let g = a.gcd(&n);
        let (a1, n1) = (a / g, n / g);
        let u0 = if n1 == 1 {
            1
        } else {
            let eg = (a1 as i128).extended_gcd(&(n1 as i128));
            eg.x.rem_euclid(n1 as i128) as u64
        };
        let mut u = u0;
        while u.gcd(&n) != 1 {
            u += n1;
        }
        u % n
    }
}

impl fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus)
    }
}

/// Dense row-major matrix over `Z/n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    ring: ResidueRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl RMatrix {
    pub fn zeros(ring: ResidueRing, rows: usize, cols: usize) -> Self {
        RMatrix { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: ResidueRing, dim: usize) -> Self {
        let mut m = Self::zeros(ring, dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows<R: AsRef<[i64]>>(ring: ResidueRing, rows: &[R]) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&v| ring.reduce(v as i128)));
        }
        Ok(RMatrix { ring, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from already-canonical row vectors; `cols` is needed for the empty case.
    pub fn from_residue_rows(ring: ResidueRing, cols: usize, rows: Vec<Vec<u64>>) -> Result<Self, LinAlgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.into_iter().map(|v| v % ring.modulus));
        }
        Ok(RMatrix { ring, rows: nrows, cols, data })
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.ring.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix, LinAlgError> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = self.ring.modulus as u128;
        let mut out = RMatrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u128;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = ((*d as u128 + a * b as u128) % n) as u64;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RMatrix) -> Result<RMatrix, LinAlgError> {
        self.check_ring(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinAlgError::DimensionMismatch("shape differs in addition".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.ring.add(a, b)).collect();
        Ok(RMatrix { ring: self.ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &RMatrix) -> Result<RMatrix, LinAlgError> {
        self.add(&other.scale_signed(-1))
    }

    pub fn scale(&self, c: u64) -> RMatrix {
        let data = self.data.iter().map(|&a| self.ring.mul(a, c)).collect();
        RMatrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_signed(&self, c: i64) -> RMatrix {
        self.scale(self.ring.reduce(c as i128))
    }

    /// `v ↦ vM`.
    pub fn vec_mul(&self, v: &[u64]) -> Result<Vec<u64>, LinAlgError> {
        if v.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let n = self.ring.modulus as u128;
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (d, &b) in out.iter_mut().zip(self.row(i)) {
                *d = ((*d as u128 + a as u128 * b as u128) % n) as u64;
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &RMatrix) -> Result<RMatrix, LinAlgError> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(LinAlgError::DimensionMismatch("hstack needs equal row counts".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(RMatrix { ring: self.ring, rows: self.rows, cols, data })
    }

    pub fn vstack(&self, other: &RMatrix) -> Result<RMatrix, LinAlgError> {
        self.check_ring(other)?;
        if self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RMatrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Entry-wise reduction into a smaller residue ring `Z/d` with `d | n`.
    pub fn reduce_mod(&self, target: ResidueRing) -> Result<RMatrix, LinAlgError> {
        if !self.ring.modulus.is_multiple_of(target.modulus) {
            return Err(LinAlgError::InvalidArgument(format!(
                "Z/{} does not surject onto Z/{}",
                self.ring.modulus, target.modulus
            )));
        }
        let data = self.data.iter().map(|&a| a % target.modulus).collect();
        Ok(RMatrix { ring: target, rows: self.rows, cols: self.cols, data })
    }

    fn check_ring(&self, other: &RMatrix) -> Result<(), LinAlgError> {
        if self.ring != other.ring {
            return Err(LinAlgError::RingMismatch(self.ring.modulus, other.ring.modulus));
        }
        Ok(())
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone)]
struct WorkRow {
    entries: Vec<u64>,
    coeffs: Vec<u64>,
}

impl WorkRow {
    fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn scaled(&self, ring: &ResidueRing, c: u64) -> WorkRow {
        WorkRow {
            entries: self.entries.iter().map(|&v| ring.mul(v, c)).collect(),
            coeffs: self.coeffs.iter().map(|&v| ring.mul(v, c)).collect(),
        }
    }

    /// `a·self + b·other`
    fn combine(&self, ring: &ResidueRing, a: u64, other: &WorkRow, b: u64) -> WorkRow {
        let mix = |x: &[u64], y: &[u64]| -> Vec<u64> {
            x.iter().zip(y).map(|(&p, &q)| ring.add(ring.mul(p, a), ring.mul(q, b))).collect()
        };
        WorkRow { entries: mix(&self.entries, &other.entries), coeffs: mix(&self.coeffs, &other.coeffs) }
    }
}

/// Howell normal form of a matrix over `Z/n`, with a transform expressing each
/// row of the form as a combination of input rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HowellForm {
    matrix: RMatrix,
    pivots: Vec<usize>,
    transform: RMatrix,
}

impl HowellForm {
    /// The canonical matrix (nonzero rows only).
    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Row `k` of the transform gives coefficients over the input rows producing row `k` of `H`.
    pub fn transform(&self) -> &RMatrix {
        &self.transform
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the form. Returns the remainder and the coefficients
    /// (over rows of `H`) that were subtracted; `v` is in the span iff the
    /// remainder is zero.
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let ring = self.matrix.ring;
        let mut rem: Vec<u64> = v.iter().map(|&x| x % ring.modulus).collect();
        let mut coeffs = vec![0u64; self.pivots.len()];
        for (k, &j) in self.pivots.iter().enumerate() {
            let g = self.matrix.get(k, j);
            let q = rem[j] / g;
            if q == 0 {
                continue;
            }
            coeffs[k] = q % ring.modulus;
            for (r, &h) in rem.iter_mut().zip(self.matrix.row(k)) {
                *r = ring.sub(*r, ring.mul(q, h));
            }
        }
        (rem, coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.matrix.cols && self.reduce(v).0.iter().all(|&x| x == 0)
    }

    /// Number of elements of the row span.
    pub fn span_size(&self) -> BigUint {
        let n = self.matrix.ring.modulus;
        self.pivots
            .iter()
            .enumerate()
            .map(|(k, &j)| BigUint::from(n / self.matrix.get(k, j)))
            .product()
    }

    /// Whether the row span of `self` contains the row span of `other`.
    pub fn contains_span(&self, other: &HowellForm) -> bool {
        (0..other.matrix.rows).all(|i| self.contains(other.matrix.row(i)))
    }
}

/// Computes the Howell normal form: rows sorted by pivot column, each pivot the
/// divisor of `n` generating the ideal of its entry, entries above a pivot
/// reduced below it, and the Howell property (rows with leading zeros span the
/// full intersection of the row span with that coordinate subspace).
pub fn howell_form(m: &RMatrix) -> HowellForm {
    let ring = m.ring;
    let n = ring.modulus;
    let nrows = m.rows;
    let mut pending: Vec<WorkRow> = (0..nrows)
        .map(|i| {
            let mut coeffs = vec![0u64; nrows];
            coeffs[i] = 1;
            WorkRow { entries: m.row(i).to_vec(), coeffs }
        })
        .filter(|r| !r.is_zero())
        .collect();
    let mut result: Vec<WorkRow> = Vec::new();
    let mut pivots = Vec::new();

    for j in 0..m.cols {
        let mut pivot: Option<WorkRow> = None;
        let mut rest = Vec::with_capacity(pending.len());
        for row in pending.drain(..) {
            if row.entries[j] == 0 {
                rest.push(row);
                continue;
            }
            pivot = Some(match pivot {
                None => row,
                Some(p) => {
                    let a = p.entries[j] as i128;
                    let b = row.entries[j] as i128;
                    let eg = a.extended_gcd(&b);
                    let g = eg.gcd;
                    let new_p = p.combine(&ring, ring.reduce(eg.x), &row, ring.reduce(eg.y));
                    let new_r = p.combine(&ring, ring.reduce(b / g), &row, ring.reduce(-(a / g)));
                    debug_assert_eq!(new_r.entries[j], 0);
                    if !new_r.is_zero() {
                        rest.push(new_r);
                    }
                    new_p
                }
            });
        }
        pending = rest;
        if let Some(p) = pivot {
            let u = ring.normalizing_unit(p.entries[j]);
            let p = p.scaled(&ring, u);
            let g = p.entries[j];
            debug_assert_eq!(n % g, 0);
            let ann = p.scaled(&ring, n / g);
            if !ann.is_zero() {
                pending.push(ann);
            }
            result.push(p);
            pivots.push(j);
        }
    }

    for k in 0..result.len() {
        let j = pivots[k];
        let g = result[k].entries[j];
        let (head, tail) = result.split_at_mut(k);
        let prow = &tail[0];
        for row in head.iter_mut() {
            let q = row.entries[j] / g;
            if q != 0 {
                *row = row.combine(&ring, 1, prow, ring.neg(q % n));
            }
        }
    }

    let cols = m.cols;
    let matrix = RMatrix::from_residue_rows(ring, cols, result.iter().map(|r| r.entries.clone()).collect())
        .expect("row lengths are uniform");
    let transform = RMatrix::from_residue_rows(ring, nrows, result.into_iter().map(|r| r.coeffs).collect())
        .expect("row lengths are uniform");
    HowellForm { matrix, pivots, transform }
}

/// Generators of the left kernel `{v : vM = 0}`, one per row of the result.
pub fn kernel_basis(m: &RMatrix) -> RMatrix {
    let aug = m.hstack(&RMatrix::identity(m.ring, m.rows)).expect("same ring and row count");
    let h = howell_form(&aug);
    let rows = h
        .pivots
        .iter()
        .enumerate()
        .filter(|(_, &j)| j >= m.cols)
        .map(|(k, _)| h.matrix.row(k)[m.cols..].to_vec())
        .collect();
    RMatrix::from_residue_rows(m.ring, m.rows, rows).expect("row lengths are uniform")
}

/// Outcome of solving `xM = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    /// One solution, when the system is feasible.
    pub particular: Option<Vec<u64>>,
    /// Generators of the homogeneous solution module; all solutions are `particular + span(kernel)`.
    pub kernel: RMatrix,
}

impl LinearSolution {
    pub fn is_feasible(&self) -> bool {
        self.particular.is_some()
    }
}

pub fn solve_linear(m: &RMatrix, b: &[u64]) -> Result<LinearSolution, LinAlgError> {
    if b.len() != m.cols {
        return Err(LinAlgError::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} columns",
            b.len(),
            m.cols
        )));
    }
    let ring = m.ring;
    let h = howell_form(m);
    let (rem, coeffs) = h.reduce(b);
    let particular = if rem.iter().all(|&v| v == 0) {
        let x = h.transform.vec_mul(&coeffs).expect("coefficient length matches the form");
        debug_assert_eq!(m.vec_mul(&x).unwrap(), b.iter().map(|&v| v % ring.modulus).collect::<Vec<_>>());
        Some(x)
    } else {
        None
    };
    Ok(LinearSolution { particular, kernel: kernel_basis(m) })
}

/// `p`-adic valuation of a nonzero integer.
pub fn ord_p(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut n = n.abs();
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Generator of `ker(ñ· : Z/ℓ^σ → Z/ℓ^σ)`, namely `ℓ^(σ − min(ord_ℓ(ñ), σ))` reduced mod `ℓ^σ`.
pub fn scalar_kernel(n_tilde: i64, ell: u64, sigma: u32) -> Result<u64, LinAlgError> {
    if n_tilde == 0 {
        return Err(LinAlgError::InvalidArgument("ñ must be nonzero".into()));
    }
    if sigma == 0 {
        return Err(LinAlgError::InvalidArgument("σ must be positive".into()));
    }
    if !is_prime(ell) {
        return Err(LinAlgError::InvalidArgument(format!("{ell} is not prime")));
    }
    let modulus = ell
        .checked_pow(sigma)
        .ok_or_else(|| LinAlgError::InvalidArgument("ℓ^σ overflows".into()))?;
    let ord = ord_p(n_tilde as i128, ell).min(sigma);
    Ok(ell.pow(sigma - ord) % modulus)
}

/// Integer matrix, arbitrary precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Result<Self, LinAlgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            *self.at(dst, j) -= v;
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            *self.at(i, dst) -= v;
        }
    }
}

pub const SMITH_DIM_LIMIT: usize = 64;

/// Smith normal form data of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | …`, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Free rank of the cokernel `Z^cols / rowspan`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Invariant factors greater than one (the torsion of the cokernel).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form_int(m: &IntMatrix) -> Result<SmithForm, LinAlgError> {
    if m.rows > SMITH_DIM_LIMIT || m.cols > SMITH_DIM_LIMIT {
        return Err(LinAlgError::TooLarge { rows: m.rows, cols: m.cols, limit: SMITH_DIM_LIMIT });
    }
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                a.row_axpy(i, t, &q);
                if !a.get(i, t).is_zero() {
                    a.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                a.col_axpy(j, t, &q);
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = a.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(a.get(i, j) % &p).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    a.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        diag.push(a.get(t, t).abs());
        t += 1;
    }
    Ok(SmithForm { invariant_factors: diag, rows, cols })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: u64) -> ResidueRing {
        ResidueRing::new(n).unwrap()
    }

    /// Every vector in the row span, by enumerating all coefficient combinations.
    fn span_oracle(m: &RMatrix) -> std::collections::BTreeSet<Vec<u64>> {
        let n = m.modulus();
        let mut out = std::collections::BTreeSet::new();
        let total = (n as usize).pow(m.rows() as u32);
        for code in 0..total {
            let mut c = code;
            let coeffs: Vec<u64> = (0..m.rows())
                .map(|_| {
                    let d = (c % n as usize) as u64;
                    c /= n as usize;
                    d
                })
                .collect();
            out.insert(m.vec_mul(&coeffs).unwrap());
        }
        out
    }

    fn all_vectors(n: u64, len: usize) -> Vec<Vec<u64>> {
        let total = (n as usize).pow(len as u32);
        (0..total)
            .map(|code| {
                let mut c = code;
                (0..len)
                    .map(|_| {
                        let d = (c % n as usize) as u64;
                        c /= n as usize;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn canonical_single_entry() {
        let m = RMatrix::from_rows(zn(4), &[[2]]).unwrap();
        let h = howell_form(&m);
        assert_eq!(h.matrix(), &m);
    }

    #[test]
    fn idempotent_on_small_example() {
        let m = RMatrix::from_rows(zn(4), &[[1, 1], [0, 2]]).unwrap();
        let h = howell_form(&m);
        let again = howell_form(h.matrix());
        assert_eq!(again.matrix(), h.matrix());
        assert_eq!(span_oracle(&m), span_oracle(h.matrix()));
    }

    #[test]
    fn unit_entry_normalizes_to_one() {
        let m = RMatrix::from_rows(zn(9), &[[5, 3]]).unwrap();
        let h = howell_form(&m);
        assert_eq!(h.matrix().get(0, 0), 1);
    }

    #[test]
    fn annihilator_row_is_added() {
        // span of (2,1) over Z/4 contains (0,2); Howell form must show it
        let m = RMatrix::from_rows(zn(4), &[[2, 1]]).unwrap();
        let h = howell_form(&m);
        assert_eq!(h.matrix().rows(), 2);
        assert_eq!(h.matrix().row(1), &[0, 2]);
    }

    #[test]
    fn span_matches_enumeration_on_fixed_3x3_over_z9() {
        let m = RMatrix::from_rows(zn(9), &[[3, 6, 1], [0, 3, 4], [6, 0, 2]]).unwrap();
        let h = howell_form(&m);
        assert_eq!(span_oracle(&m), span_oracle(h.matrix()));
        assert_eq!(h.span_size(), BigUint::from(span_oracle(&m).len()));
    }

    #[test]
    fn transform_reproduces_rows() {
        let m = RMatrix::from_rows(zn(8), &[[2, 4, 6], [4, 1, 0], [6, 6, 6]]).unwrap();
        let h = howell_form(&m);
        assert_eq!(&h.transform().mul(&m).unwrap(), h.matrix());
    }

    #[test]
    fn kernel_of_multiplication_by_three_mod_nine() {
        let m = RMatrix::from_rows(zn(9), &[[3]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), &[3]);
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        let k = kernel_basis(&RMatrix::identity(zn(4), 3));
        assert_eq!(k.rows(), 0);
    }

    #[test]
    fn kernel_of_row_two_two_mod_four() {
        // 1x2 matrix: left kernel in (Z/4)^1 is {v : 2v = 0} = {0, 2}
        let m = RMatrix::from_rows(zn(4), &[[2, 2]]).unwrap();
        let oracle: Vec<Vec<u64>> = all_vectors(4, 1)
            .into_iter()
            .filter(|v| m.vec_mul(v).unwrap().iter().all(|&x| x == 0))
            .collect();
        assert_eq!(oracle, vec![vec![0], vec![2]]);
        let k = kernel_basis(&m);
        assert_eq!(span_oracle(&k).into_iter().collect::<Vec<_>>(), oracle);
    }

    #[test]
    fn solve_two_x_eq_two_mod_four() {
        let m = RMatrix::from_rows(zn(4), &[[2]]).unwrap();
        let sol = solve_linear(&m, &[2]).unwrap();
        let x = sol.particular.clone().unwrap();
        assert_eq!(m.vec_mul(&x).unwrap(), vec![2]);
        let mut all: Vec<u64> = span_oracle(&sol.kernel).into_iter().map(|k| (k[0] + x[0]) % 4).collect();
        all.sort();
        assert_eq!(all, vec![1, 3]);
    }

    #[test]
    fn solve_two_x_eq_one_mod_four_is_infeasible() {
        let m = RMatrix::from_rows(zn(4), &[[2]]).unwrap();
        assert!(!solve_linear(&m, &[1]).unwrap().is_feasible());
    }

    #[test]
    fn solve_identity_system() {
        let m = RMatrix::identity(zn(9), 3);
        let sol = solve_linear(&m, &[4, 0, 8]).unwrap();
        assert_eq!(sol.particular, Some(vec![4, 0, 8]));
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = RMatrix::identity(zn(9), 3);
        assert!(matches!(solve_linear(&m, &[1, 2]), Err(LinAlgError::DimensionMismatch(_))));
    }

    #[test]
    fn smith_examples() {
        let z = IntMatrix::zeros(1, 4);
        let s = smith_normal_form_int(&z).unwrap();
        assert!(s.invariant_factors.is_empty());
        assert_eq!(s.cokernel_free_rank(), 4);

        let m = IntMatrix::from_rows(&[[2, 0], [0, 3]], 2).unwrap();
        let s = smith_normal_form_int(&m).unwrap();
        assert_eq!(s.invariant_factors, vec![BigInt::from(1), BigInt::from(6)]);

        let one = IntMatrix::from_rows(&[[1]], 1).unwrap();
        let s = smith_normal_form_int(&one).unwrap();
        assert_eq!(s.invariant_factors, vec![BigInt::from(1)]);
        assert!(s.torsion().is_empty());
        assert_eq!(s.cokernel_free_rank(), 0);
    }

    #[test]
    fn smith_rejects_oversized_input() {
        let m = IntMatrix::zeros(65, 2);
        assert!(matches!(smith_normal_form_int(&m), Err(LinAlgError::TooLarge { .. })));
    }

    #[test]
    fn scalar_kernel_examples() {
        assert_eq!(scalar_kernel(3, 3, 2).unwrap(), 3);
        assert_eq!(scalar_kernel(5, 3, 2).unwrap(), 0);
        assert_eq!(scalar_kernel(6, 2, 3).unwrap(), 4);
        let oracle: Vec<u64> = (0..8).filter(|x| (6 * x) % 8 == 0).collect();
        assert_eq!(oracle, vec![0, 4]);
        assert!(scalar_kernel(0, 3, 2).is_err());
    }

    #[test]
    fn bad_modulus_rejected() {
        assert_eq!(ResidueRing::new(1), Err(LinAlgError::BadModulus(1)));
    }
}
