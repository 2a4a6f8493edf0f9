//! Dense exact linear algebra over a [`Field`].
//!
//! Pivoting is deterministic: the first nonzero entry in column order, taken
//! from the topmost available row. Bases produced here are therefore stable
//! across runs.

use std::fmt;

use crate::error::LinalgError;
use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: DenseMatrix,
    pub pivot_cols: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every entry must belong to `field`.
    pub fn from_rows(
        field: Field,
        cols: usize,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for s in row {
                if s.field() != field {
                    return Err(LinalgError::FieldMismatch(field, s.field()));
                }
                entries.push(s);
            }
        }
        Ok(DenseMatrix {
            rows: nrows,
            cols,
            field,
            entries,
        })
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("well-formed integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        debug_assert_eq!(value.field(), self.field);
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    fn check_field(&self, other: &DenseMatrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    fn check_entries(&self) -> Result<(), LinalgError> {
        match self.entries.iter().find(|s| s.field() != self.field) {
            Some(s) => Err(LinalgError::FieldMismatch(self.field, s.field())),
            None => Ok(()),
        }
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::Shape("addition of differently shaped matrices".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(DenseMatrix { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> DenseMatrix {
        DenseMatrix {
            entries: self.entries.iter().map(|e| e * s).collect(),
            ..self.clone()
        }
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "column mismatch {} vs {}",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DenseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    pub fn hstack(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.transpose().vstack(&other.transpose()).map(|m| m.transpose())
    }

    pub fn rref(&self) -> Result<Rref, LinalgError> {
        self.check_entries()?;
        let mut rows = self.row_vecs();
        let pivot_cols = reduce_rows(&mut rows, self.cols);
        let rank = pivot_cols.len();
        let reduced = DenseMatrix::from_rows(self.field, self.cols, rows)?;
        Ok(Rref {
            rank,
            reduced,
            pivot_cols,
        })
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        reduce_rows(&mut rows, self.cols).len()
    }

    /// Rows form a basis of the right null space `{x : self·x = 0}`.
    pub fn kernel_basis(&self) -> Result<DenseMatrix, LinalgError> {
        self.check_entries()?;
        let mut rows = self.row_vecs();
        let pivots = reduce_rows(&mut rows, self.cols);
        Ok(kernel_from_reduced(self.field, &rows, &pivots, self.cols))
    }

    /// One solution `x` of `self·x = rhs` (column by column), or `None` if
    /// some column of `rhs` is inconsistent.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<Option<DenseMatrix>, LinalgError> {
        self.check_field(rhs)?;
        if rhs.rows != self.rows {
            return Err(LinalgError::Shape(format!(
                "rhs has {} rows, system has {}",
                rhs.rows, self.rows
            )));
        }
        let aug = self.hstack(rhs)?;
        let Rref {
            reduced,
            pivot_cols,
            ..
        } = aug.rref()?;
        if pivot_cols.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = DenseMatrix::zeros(self.field, self.cols, rhs.cols);
        for (r, &pc) in pivot_cols.iter().enumerate() {
            for k in 0..rhs.cols {
                x.set(pc, k, reduced.get(r, self.cols + k).clone());
            }
        }
        Ok(Some(x))
    }

    /// Basis (in reduced echelon form) of the row space.
    pub fn row_space_basis(&self) -> DenseMatrix {
        let mut rows = self.row_vecs();
        let rank = reduce_rows(&mut rows, self.cols).len();
        rows.truncate(rank);
        DenseMatrix::from_rows(self.field, self.cols, rows).expect("same field")
    }

    /// Rows spanning the intersection of the row spaces of `self` and `other`.
    pub fn intersect_rowspaces(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "column mismatch {} vs {}",
                self.cols, other.cols
            )));
        }
        let a = self.row_space_basis();
        let b = other.row_space_basis();
        // x·A = y·B  <=>  (x, -y) in the left kernel of [A; B].
        let stacked = a.vstack(&b)?;
        let left_kernel = stacked.transpose().kernel_basis()?;
        let mut out = Vec::new();
        for k in 0..left_kernel.rows() {
            let coeffs = &left_kernel.row(k)[..a.rows()];
            let mut v = vec![self.field.zero(); self.cols];
            for (c, row) in coeffs.iter().zip(0..a.rows()) {
                if c.is_zero() {
                    continue;
                }
                for (j, e) in a.row(row).iter().enumerate() {
                    v[j] += &(c * e);
                }
            }
            out.push(v);
        }
        let m = DenseMatrix::from_rows(self.field, self.cols, out)?;
        Ok(m.row_space_basis())
    }

    pub fn row_space_contains(&self, v: &[Scalar]) -> bool {
        let mut basis = EchelonBasis::new(self.field, self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r).to_vec());
        }
        basis.contains(v)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// In-place Gauss-Jordan on a row list. Returns pivot columns; nonzero rows
/// end up first, in pivot order.
pub(crate) fn reduce_rows(rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][c].inverse().expect("nonzero pivot");
        if !inv.is_one() {
            for e in rows[next][c..].iter_mut() {
                if !e.is_zero() {
                    *e *= &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(next);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row");
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for (e, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *e -= &(&factor * p);
                }
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

pub(crate) fn kernel_from_reduced(
    field: Field,
    rows: &[Vec<Scalar>],
    pivots: &[usize],
    cols: usize,
) -> DenseMatrix {
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            let e = &rows[r][free];
            if !e.is_zero() {
                v[pc] = -e;
            }
        }
        basis.push(v);
    }
    DenseMatrix::from_rows(field, cols, basis).expect("same field")
}

/// Incrementally maintained reduced echelon basis of a subspace of `F^cols`.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: Field, cols: usize) -> Self {
        EchelonBasis {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after clearing every pivot column of the basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let factor = v[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (e, p) in v.iter_mut().zip(row) {
                if !p.is_zero() {
                    *e -= &(&factor * p);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span. Returns `false` if it was already contained.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut r = self.reduce(&v);
        let Some(pc) = r.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = r[pc].inverse().expect("nonzero");
        for e in r.iter_mut() {
            if !e.is_zero() {
                *e *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (e, p) in row.iter_mut().zip(&r) {
                if !p.is_zero() {
                    *e -= &(&factor * p);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_rows(self.field, self.cols, self.rows.clone()).expect("same field")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn rref_identity() {
        let id = DenseMatrix::identity(q(), 2);
        let r = id.rref().unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let z = DenseMatrix::zeros(q(), 3, 4);
        assert_eq!(z.rref().unwrap().rank, 0);
        assert_eq!(z.kernel_basis().unwrap().rows(), 4);
    }

    #[test]
    fn rref_rejects_mixed_fields() {
        let mut m = DenseMatrix::zeros(q(), 1, 2);
        m.entries[0] = Field::Prime(5).one();
        assert!(matches!(m.rref(), Err(LinalgError::FieldMismatch(..))));
        assert!(DenseMatrix::from_rows(q(), 1, vec![vec![Field::Prime(5).one()]]).is_err());
    }

    #[test]
    fn kernel_of_identity_and_zero_row() {
        assert_eq!(DenseMatrix::identity(q(), 3).kernel_basis().unwrap().rows(), 0);
        let z = DenseMatrix::zeros(q(), 1, 3);
        assert_eq!(z.kernel_basis().unwrap().rows(), 3);
        let row = DenseMatrix::from_i64_rows(q(), &[vec![1, 2, 3]]);
        let k = row.kernel_basis().unwrap();
        assert_eq!(k.rows(), 2);
        assert!(row.mul(&k.transpose()).unwrap().is_zero());
    }

    #[test]
    fn solve_cases() {
        let id = DenseMatrix::identity(q(), 2);
        let rhs = DenseMatrix::from_i64_rows(q(), &[vec![3], vec![-4]]);
        assert_eq!(id.solve(&rhs).unwrap().unwrap(), rhs);
        let sing = DenseMatrix::from_i64_rows(q(), &[vec![1, 1], vec![1, 1]]);
        let bad = DenseMatrix::from_i64_rows(q(), &[vec![1], vec![2]]);
        assert!(sing.solve(&bad).unwrap().is_none());
        let short = DenseMatrix::from_i64_rows(q(), &[vec![1]]);
        assert!(sing.solve(&short).is_err());
    }

    #[test]
    fn intersections() {
        let e1 = DenseMatrix::from_i64_rows(q(), &[vec![1, 0, 0]]);
        let e12 = DenseMatrix::from_i64_rows(q(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        let e2 = DenseMatrix::from_i64_rows(q(), &[vec![0, 1, 0]]);
        assert_eq!(e1.intersect_rowspaces(&e12).unwrap(), e1);
        assert_eq!(e1.intersect_rowspaces(&e2).unwrap().rows(), 0);
        let short = DenseMatrix::from_i64_rows(q(), &[vec![1, 0]]);
        assert!(e1.intersect_rowspaces(&short).is_err());
    }

    #[test]
    fn echelon_basis_membership() {
        let mut b = EchelonBasis::new(q(), 3);
        assert!(b.insert(DenseMatrix::from_i64_rows(q(), &[vec![1, 1, 0]]).row(0).to_vec()));
        assert!(b.insert(DenseMatrix::from_i64_rows(q(), &[vec![0, 1, 1]]).row(0).to_vec()));
        let sum = DenseMatrix::from_i64_rows(q(), &[vec![1, 2, 1]]);
        assert!(b.contains(sum.row(0)));
        assert!(!b.insert(sum.row(0).to_vec()));
        assert_eq!(b.dim(), 2);
    }
}
