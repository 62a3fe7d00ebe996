//! Exact integer and rational matrix kernels.
//!
//! Everything here works over arbitrary-precision integers. Determinants use
//! fraction-free Bareiss elimination, characteristic polynomials use the
//! division-free Berkowitz recurrence, and lattices are normalised to a
//! row-style Hermite normal form (upper triangular, positive pivots, entries
//! above a pivot reduced into `[0, pivot)`), so two lattices are equal exactly
//! when their HNF matrices are equal.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("exterior power index k = {k} out of range for order {n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("matrix must have at least one row and one column")]
    Empty,
}

/// Dense matrix over arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        IntMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics on ragged or empty input; meant for constants and tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("literal matrix must be rectangular and non-empty")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &IntMatrix,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<IntMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("shape mismatch".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * &self[(i, j)];
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Result<IntMatrix, LinalgError> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self[(i, j)].clone()))
            .collect();
        IntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt, LinalgError> {
        self.require_square()?;
        Ok(bareiss_det(self.clone()))
    }

    /// `det(xI - self)` via the Berkowitz recurrence; stays inside the integers.
    pub fn charpoly(&self) -> Result<IntPoly, LinalgError> {
        self.require_square()?;
        Ok(berkowitz(self))
    }

    /// The k-th exterior power: the matrix of k x k minors, rows and columns
    /// indexed by k-subsets of `0..n` in ascending lexicographic order.
    pub fn exterior_power(&self, k: usize) -> Result<IntMatrix, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        if k == 0 || k > n {
            return Err(LinalgError::KOutOfRange { k, n });
        }
        let subsets = k_subsets(n, k);
        let m = subsets.len();
        let mut out = IntMatrix::zeros(m, m);
        for (a, rs) in subsets.iter().enumerate() {
            for (b, cs) in subsets.iter().enumerate() {
                out[(a, b)] = bareiss_det(self.submatrix(rs, cs));
            }
        }
        Ok(out)
    }

    /// Adjugate (transpose of the cofactor matrix).
    pub fn adjugate(&self) -> Result<IntMatrix, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rs: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cs: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = bareiss_det(self.submatrix(&rs, &cs));
                adj[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
            }
        }
        Ok(adj)
    }

    /// Exact inverse of a matrix in GL(n, Z); fails unless det = ±1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, LinalgError> {
        let d = self.det()?;
        if d.is_one() {
            self.adjugate()
        } else if (-&d).is_one() {
            Ok(self.adjugate()?.scale(&BigInt::from(-1)))
        } else {
            Err(LinalgError::NotUnimodular(d))
        }
    }

    /// Row Hermite normal form with a unimodular transform.
    pub fn hnf(&self) -> HnfResult {
        hnf_with_transform(self)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// One row per line, whitespace separated.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// All k-subsets of `0..n`, ascending lexicographic.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn bareiss_det(mut m: IntMatrix) -> BigInt {
    let n = m.rows;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

fn berkowitz(a: &IntMatrix) -> IntPoly {
    let n = a.rows;
    // descending coefficients of the charpoly of the trailing principal block
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    for k in (0..n).rev() {
        let m = n - k - 1;
        let diag = &a[(k, k)];
        let mut t: Vec<BigInt> = Vec::with_capacity(m + 2);
        t.push(BigInt::one());
        t.push(-diag.clone());
        if m > 0 {
            // column C = a[k+1.., k], row R = a[k, k+1..], S = trailing block
            let mut v: Vec<BigInt> = (k + 1..n).map(|i| a[(i, k)].clone()).collect();
            for _ in 0..m {
                let rv: BigInt = (k + 1..n).zip(&v).map(|(j, x)| &a[(k, j)] * x).sum();
                t.push(-rv);
                v = (k + 1..n)
                    .map(|i| (k + 1..n).zip(&v).map(|(j, x)| &a[(i, j)] * x).sum())
                    .collect();
            }
        }
        let mut next = vec![BigInt::zero(); m + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate().take(i + 1) {
                *slot += &t[i - j] * pj;
            }
        }
        p = next;
    }
    p.reverse();
    IntPoly::new(p)
}

/// Result of a row Hermite normal form computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    /// Canonical HNF, same shape as the input; zero rows at the bottom.
    pub hnf: IntMatrix,
    /// Unimodular `U` with `U * input = hnf`.
    pub transform: IntMatrix,
    pub rank: usize,
}

impl HnfResult {
    /// The nonzero rows of the HNF, i.e. a canonical basis of the row lattice.
    pub fn basis(&self) -> Option<IntMatrix> {
        if self.rank == 0 {
            return None;
        }
        let rows: Vec<usize> = (0..self.rank).collect();
        let cols: Vec<usize> = (0..self.hnf.cols).collect();
        Some(self.hnf.submatrix(&rows, &cols))
    }
}

fn combine_rows(m: &mut IntMatrix, r: usize, i: usize, coeffs: [&BigInt; 4]) {
    // row r <- a*row r + b*row i ; row i <- c*row r + d*row i
    let [a, b, c, d] = coeffs;
    for j in 0..m.cols {
        let x = m[(r, j)].clone();
        let y = m[(i, j)].clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m[(r, j)] = a * &x + b * &y;
        m[(i, j)] = c * &x + d * &y;
    }
}

fn sub_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..m.cols {
        let v = &m[(src, j)] * q;
        if !v.is_zero() {
            m[(dst, j)] -= v;
        }
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for x in m.row_mut(r) {
        *x = -std::mem::take(x);
    }
}

fn hnf_with_transform(input: &IntMatrix) -> HnfResult {
    let mut h = input.clone();
    let mut u = IntMatrix::identity(input.rows);
    let (m, n) = (h.rows, h.cols);
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        if h[(row, col)].is_zero() {
            if let Some(i) = (row + 1..m).find(|&i| !h[(i, col)].is_zero()) {
                h.swap_rows(row, i);
                u.swap_rows(row, i);
            } else {
                continue;
            }
        }
        for i in row + 1..m {
            if h[(i, col)].is_zero() {
                continue;
            }
            let a = h[(row, col)].clone();
            let b = h[(i, col)].clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let c = -(&b / &g);
            let d = &a / &g;
            combine_rows(&mut h, row, i, [&s, &t, &c, &d]);
            combine_rows(&mut u, row, i, [&s, &t, &c, &d]);
        }
        if h[(row, col)].is_negative() {
            negate_row(&mut h, row);
            negate_row(&mut u, row);
        }
        let piv = h[(row, col)].clone();
        for i in 0..row {
            let q = h[(i, col)].div_floor(&piv);
            if !q.is_zero() {
                sub_row_multiple(&mut h, i, row, &q);
                sub_row_multiple(&mut u, i, row, &q);
            }
        }
        row += 1;
    }
    HnfResult { hnf: h, transform: u, rank: row }
}

/// Canonical HNF basis (nonzero rows only) of the lattice spanned by `gens`,
/// without tracking the transform.
pub fn hnf_basis(gens: &IntMatrix) -> Option<IntMatrix> {
    hnf_with_transform(gens).basis()
}

/// HNF of a full-rank lattice in `Z^n` that is known to contain `modulus * Z^n`.
///
/// `gens` need not include the `modulus * e_i`; they are added implicitly.
/// Entries stay bounded by `modulus` throughout. The result is the same
/// canonical matrix [`IntMatrix::hnf`] would produce for the lattice.
pub fn hnf_modular(gens: &[Vec<BigInt>], n: usize, modulus: &BigInt) -> IntMatrix {
    let d = modulus.abs();
    assert!(!d.is_zero(), "modulus must be nonzero");
    let mut b = IntMatrix::identity(n).scale(&d);
    for g in gens {
        assert_eq!(g.len(), n);
        let mut v: Vec<BigInt> = g.iter().map(|x| x.mod_floor(&d)).collect();
        for j in 0..n {
            if v[j].is_zero() {
                continue;
            }
            let a = b[(j, j)].clone();
            let eg = a.extended_gcd(&v[j]);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let c = -(&v[j] / &g);
            let e = &a / &g;
            for k in j..n {
                let x = b[(j, k)].clone();
                let y = v[k].clone();
                b[(j, k)] = (&s * &x + &t * &y).mod_floor(&d);
                v[k] = (&c * &x + &e * &y).mod_floor(&d);
            }
            // pivot is g (a divisor of d); the reduction above maps d to 0
            if b[(j, j)].is_zero() {
                b[(j, j)] = d.clone();
            }
        }
    }
    // Pivots divide d, so d*e_j is generated by the rows; make sure every row
    // carries the information lost by the reductions mod d: re-add d*e_j.
    let mut gens2: Vec<Vec<BigInt>> = b.row_vecs();
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = d.clone();
        gens2.push(e);
    }
    finish_triangular(gens2, n)
}

/// Canonicalize a small generating set of a full-rank lattice (used after the
/// modular pass, so entries are already small).
fn finish_triangular(gens: Vec<Vec<BigInt>>, n: usize) -> IntMatrix {
    let m = IntMatrix::from_rows(gens).expect("non-empty generator list");
    let h = hnf_with_transform_no_u(&m);
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    h.submatrix(&rows, &cols)
}

fn hnf_with_transform_no_u(input: &IntMatrix) -> IntMatrix {
    let mut h = input.clone();
    let (m, n) = (h.rows, h.cols);
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        if h[(row, col)].is_zero() {
            if let Some(i) = (row + 1..m).find(|&i| !h[(i, col)].is_zero()) {
                h.swap_rows(row, i);
            } else {
                continue;
            }
        }
        for i in row + 1..m {
            if h[(i, col)].is_zero() {
                continue;
            }
            let a = h[(row, col)].clone();
            let b = h[(i, col)].clone();
            let eg = a.extended_gcd(&b);
            let c = -(&b / &eg.gcd);
            let d = &a / &eg.gcd;
            combine_rows(&mut h, row, i, [&eg.x, &eg.y, &c, &d]);
        }
        if h[(row, col)].is_negative() {
            negate_row(&mut h, row);
        }
        let piv = h[(row, col)].clone();
        for i in 0..row {
            let q = h[(i, col)].div_floor(&piv);
            if !q.is_zero() {
                sub_row_multiple(&mut h, i, row, &q);
            }
        }
        row += 1;
    }
    h
}

/// Solve `m * x = rhs` over the integers. Returns one solution or `None`.
pub fn solve_integer(m: &IntMatrix, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    if rhs.len() != m.rows {
        return None;
    }
    // U * m^T = H  =>  m = H^T * U^{-T}; with x = U^T y we need H^T y = rhs.
    let res = m.transpose().hnf();
    let h = &res.hnf;
    let mut residual = rhs.to_vec();
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, yi) in y.iter_mut().enumerate().take(res.rank) {
        let p = (0..h.cols).find(|&j| !h[(i, j)].is_zero())?;
        let (q, r) = residual[p].div_rem(&h[(i, p)]);
        if !r.is_zero() {
            return None;
        }
        for (j, res_j) in residual.iter_mut().enumerate() {
            *res_j -= &q * &h[(i, j)];
        }
        *yi = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(res.transform.transpose().mul_vec(&y))
}

/// Z-basis of the integer kernel `{x : m * x = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLattice {
    /// Rows form a basis; `None` when the kernel is trivial.
    pub basis: Option<IntMatrix>,
}

impl KernelLattice {
    pub fn dim(&self) -> usize {
        self.basis.as_ref().map_or(0, IntMatrix::rows)
    }
}

pub fn kernel_lattice(m: &IntMatrix) -> KernelLattice {
    let res = m.transpose().hnf();
    let k = m.cols - res.rank;
    if k == 0 {
        return KernelLattice { basis: None };
    }
    let rows: Vec<usize> = (res.rank..m.cols).collect();
    let cols: Vec<usize> = (0..m.cols).collect();
    let raw = res.transform.submatrix(&rows, &cols);
    KernelLattice { basis: hnf_basis(&raw) }
}

/// `{ y in Z^k : y * (basis * c) ≡ 0 (mod modulus) }` expressed back in the
/// ambient space, i.e. returns rows `u * basis`.
///
/// `basis` is k x n, `c` is n x m.
pub fn congruence_sublattice(basis: &IntMatrix, c: &IntMatrix, modulus: &BigInt) -> IntMatrix {
    let w = basis.mul(c).expect("shape checked by caller");
    let (k, m) = (w.rows, w.cols);
    let d = modulus.abs();
    let mut gens = Vec::with_capacity(k + m);
    for i in 0..k {
        let mut row: Vec<BigInt> = w.row(i).to_vec();
        row.extend((0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        gens.push(row);
    }
    let h = hnf_modular(&gens, m + k, &d);
    // rows whose first m entries vanish: after the triangular form, these are
    // the last k rows (pivots in columns >= m).
    let mut sub = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            sub[(i, j)] = h[(m + i, m + j)].clone();
        }
    }
    hnf_basis(&sub.mul(basis).expect("k x k times k x n")).expect("full rank")
}

/// Exact-rational LLL reduction with δ = 3/4.
pub fn lll_reduce(basis: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let mut b = basis.row_vecs();
    let n = b.len();
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));

    let gram_schmidt = |b: &Vec<Vec<BigInt>>| -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>), LinalgError> {
        let n = b.len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut bn = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<BigRational> =
                b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            for j in 0..i {
                let num: BigRational = b[i]
                    .iter()
                    .zip(&bstar[j])
                    .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
                    .sum();
                let m = num / &bn[j];
                for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                    *vk -= &m * bk;
                }
                mu[i][j] = m;
            }
            let norm: BigRational = v.iter().map(|x| x * x).sum();
            if norm.is_zero() {
                return Err(LinalgError::DependentRows);
            }
            bn.push(norm);
            bstar.push(v);
        }
        Ok((mu, bn))
    };

    let (mut mu, mut bn) = gram_schmidt(&b)?;
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if !q.is_zero() {
                let qi = q.to_integer();
                for t in 0..b[k].len() {
                    let v = &qi * &b[j][t];
                    b[k][t] -= v;
                }
                for t in 0..=j {
                    let v = if t == j { q.clone() } else { &q * &mu[j][t] };
                    mu[k][t] -= v;
                }
            }
        }
        let lhs = &bn[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bn[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (m2, b2) = gram_schmidt(&b)?;
            mu = m2;
            bn = b2;
            k = k.saturating_sub(1).max(1);
        }
    }
    IntMatrix::from_rows(b)
}

/// Dense matrix over exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * &other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            inv[(i, i)] = BigRational::one();
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(LinalgError::Singular)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let x = &f * &a[(col, j)];
                    a[(r, j)] -= x;
                    let y = &f * &inv[(col, j)];
                    inv[(r, j)] -= y;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Returns the integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().any(|x| !x.is_integer()) {
            return None;
        }
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let rs: Vec<usize> = (1..n).collect();
            let cs: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let term = &m[(0, j)] * cofactor_det(&m.submatrix(&rs, &cs));
            if j % 2 == 0 { acc += term } else { acc -= term }
        }
        acc
    }

    fn companion_f8() -> IntMatrix {
        IntMatrix::from_i64(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 9, -14, 8]])
    }

    fn second_f8() -> IntMatrix {
        IntMatrix::from_i64(&[&[2, 3, 0, 0], &[2, 4, 1, 0], &[0, 1, 1, 1], &[1, 2, 0, 1]])
    }

    #[test]
    fn det_examples() {
        assert_eq!(IntMatrix::identity(4).det().unwrap(), BigInt::one());
        assert_eq!(companion_f8().det().unwrap(), BigInt::one());
        assert_eq!(cofactor_det(&second_f8()), BigInt::one());
        assert_eq!(second_f8().det().unwrap(), BigInt::one());
        assert!(matches!(
            IntMatrix::from_i64(&[&[1, 2]]).det(),
            Err(LinalgError::NonSquare { .. })
        ));
    }

    #[test]
    fn charpoly_examples() {
        let f = IntPoly::from_i64(&[1, -9, 14, -8, 1]);
        assert_eq!(companion_f8().charpoly().unwrap(), f);
        assert_eq!(second_f8().charpoly().unwrap(), f);
        assert_eq!(
            IntMatrix::identity(3).charpoly().unwrap(),
            IntPoly::from_i64(&[-1, 3, -3, 1])
        );
    }

    #[test]
    fn exterior_power_examples() {
        let a = second_f8();
        assert_eq!(a.exterior_power(1).unwrap(), a);
        assert_eq!(IntMatrix::identity(5).exterior_power(2).unwrap(), IntMatrix::identity(10));
        let w = companion_f8().exterior_power(2).unwrap();
        assert_eq!(w.rows(), 6);
        // direct minor oracle for one entry: rows {0,3}, cols {1,2}
        let c = companion_f8();
        let minor = &c[(0, 1)] * &c[(3, 2)] - &c[(0, 2)] * &c[(3, 1)];
        let subsets = k_subsets(4, 2);
        let r = subsets.iter().position(|s| s == &vec![0, 3]).unwrap();
        let cc = subsets.iter().position(|s| s == &vec![1, 2]).unwrap();
        assert_eq!(w[(r, cc)], minor);
        let d = IntMatrix::identity(6).sub(&w).unwrap().det().unwrap();
        assert_eq!(d.abs(), BigInt::one());
        assert!(matches!(c.exterior_power(5), Err(LinalgError::KOutOfRange { .. })));
    }

    #[test]
    fn k_subsets_lex() {
        let s = k_subsets(4, 2);
        assert_eq!(s, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(k_subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn hnf_examples() {
        let r = IntMatrix::identity(3).hnf();
        assert_eq!(r.hnf, IntMatrix::identity(3));
        assert_eq!(r.transform, IntMatrix::identity(3));
        let r = IntMatrix::from_i64(&[&[2, 0], &[1, 1]]).hnf();
        assert_eq!(r.hnf, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(r.transform.mul(&IntMatrix::from_i64(&[&[2, 0], &[1, 1]])).unwrap(), r.hnf);
        assert_eq!(r.transform.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn hnf_modular_matches_plain() {
        let gens = IntMatrix::from_i64(&[&[6, 4, 2], &[3, 9, 12], &[0, 5, 7], &[30, 0, 0]]);
        let plain = hnf_basis(&gens).unwrap();
        let det = plain.det().unwrap();
        let modular = hnf_modular(&gens.row_vecs(), 3, &det);
        assert_eq!(plain, modular);
    }

    #[test]
    fn solve_examples() {
        let v = vec![BigInt::from(3), BigInt::from(-7)];
        assert_eq!(solve_integer(&IntMatrix::identity(2), &v), Some(v.clone()));
        let two = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(solve_integer(&two, &[BigInt::one(), BigInt::zero()]), None);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_lattice(&IntMatrix::identity(3)).dim(), 0);
        let k = kernel_lattice(&IntMatrix::from_i64(&[&[2, 4]]));
        assert_eq!(k.basis, Some(IntMatrix::from_i64(&[&[2, -1]])));
    }

    #[test]
    fn lll_examples() {
        assert_eq!(lll_reduce(&IntMatrix::identity(3)).unwrap(), IntMatrix::identity(3));
        let b = IntMatrix::from_i64(&[&[1, 0], &[100, 1]]);
        let r = lll_reduce(&b).unwrap();
        assert!(r.max_abs() <= b.max_abs());
        assert_eq!(hnf_basis(&r), hnf_basis(&b));
        assert_eq!(r.max_abs(), BigInt::one());
        assert_eq!(
            lll_reduce(&IntMatrix::from_i64(&[&[1, 2], &[2, 4]])),
            Err(LinalgError::DependentRows)
        );
    }

    #[test]
    fn congruence_lattice_small() {
        // y in Z^2 with y0 + 3 y1 ≡ 0 mod 6
        let c = IntMatrix::from_i64(&[&[1], &[3]]);
        let l = congruence_sublattice(&IntMatrix::identity(2), &c, &BigInt::from(6));
        for i in 0..2 {
            let v = l.row(i);
            assert!(((&v[0] + BigInt::from(3) * &v[1]) % BigInt::from(6)).is_zero());
        }
        assert_eq!(l.det().unwrap().abs(), BigInt::from(6));
    }

    #[test]
    fn unimodular_inverse() {
        let a = second_f8();
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert!(IntMatrix::from_i64(&[&[2, 0], &[0, 1]]).inverse_unimodular().is_err());
    }
}
