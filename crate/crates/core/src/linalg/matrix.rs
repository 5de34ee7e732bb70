use std::fmt;

use super::reduce::ColumnReducer;
use super::{CoeffRing, LinalgError, Scalar, SparseVec};

/// A matrix over a [`CoeffRing`], stored column by column.
///
/// Entries are kept in canonical form with no explicit zeros, so `==` is
/// exact equality of linear maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zeros(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        ExactMatrix { ring, rows: n, cols: n, columns: (0..n).map(SparseVec::unit).collect() }
    }

    /// Builds a matrix from integer rows; `cols` is needed for the 0-row case.
    pub fn from_rows(ring: CoeffRing, rows: &[Vec<i64>], cols: usize) -> Result<Self, LinalgError> {
        let mut m = ExactMatrix::zeros(ring, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.add_entry(i, j, &ring.from_i64(v));
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows of arbitrary scalars, reducing them into `ring`.
    pub fn from_scalar_rows(
        ring: CoeffRing,
        rows: &[Vec<Scalar>],
        cols: usize,
    ) -> Result<Self, LinalgError> {
        let mut m = ExactMatrix::zeros(ring, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.add_entry(i, j, &ring.reduce(v)?);
            }
        }
        Ok(m)
    }

    pub fn from_columns(ring: CoeffRing, rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.low().map_or(true, |(i, _)| i < rows)));
        ExactMatrix { ring, rows, cols: columns.len(), columns }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(i)
    }

    /// Adds `v` into entry `(i, j)`.
    pub fn add_entry(&mut self, i: usize, j: usize, v: &Scalar) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        self.columns[j].add_at(self.ring, i, v);
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.axpy(self.ring, c, &self.columns[*j]);
        }
        out
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        Ok(ExactMatrix { ring: self.ring, rows: self.rows, cols: other.cols, columns })
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.combine(other, &Scalar::ONE)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.combine(other, &self.ring.from_i64(-1))
    }

    fn combine(&self, other: &ExactMatrix, c: &Scalar) -> Result<ExactMatrix, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.columns.iter_mut().zip(&other.columns) {
            a.axpy(self.ring, c, b);
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> ExactMatrix {
        ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|col| col.scaled(self.ring, c)).collect(),
        }
    }

    pub fn neg(&self) -> ExactMatrix {
        self.scaled(&self.ring.from_i64(-1))
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.ring, self.cols, self.rows);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col.iter() {
                t.columns[*i].add_at(self.ring, j, v);
            }
        }
        t
    }

    /// The submatrix on the given rows and columns, in the given orders.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (new, &old) in rows.iter().enumerate() {
            row_pos[old] = new;
        }
        let columns = cols
            .iter()
            .map(|&j| {
                let entries = self.columns[j]
                    .iter()
                    .filter(|(i, _)| row_pos[*i] != usize::MAX)
                    .map(|(i, v)| (row_pos[*i], v.clone()))
                    .collect();
                SparseVec::from_entries(self.ring, entries)
            })
            .collect();
        ExactMatrix { ring: self.ring, rows: rows.len(), cols: cols.len(), columns }
    }

    /// Writes `block` into this matrix with its top-left corner at `(r0, c0)`, adding to existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for (j, col) in block.columns.iter().enumerate() {
            let shifted = col.shifted(r0);
            self.columns[c0 + j].axpy(self.ring, &Scalar::ONE, &shifted);
        }
    }

    /// Reinterprets the entries in another ring (integers into a prime field, say).
    pub fn change_ring(&self, ring: CoeffRing) -> Result<ExactMatrix, LinalgError> {
        let mut out = ExactMatrix::zeros(ring, self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col.iter() {
                out.columns[j].add_at(ring, *i, &ring.reduce(v)?);
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut rows = vec![vec![Scalar::ZERO; self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col.iter() {
                rows[*i][j] = v.clone();
            }
        }
        rows
    }

    /// Rank over the ring's field of fractions.
    pub fn rank(&self) -> usize {
        let ring = self.ring.rank_field();
        let mut red = ColumnReducer::new(ring, false);
        for col in &self.columns {
            red.insert(col.clone());
        }
        red.rank()
    }

    /// A basis of the kernel, as the columns of a `cols x nullity` matrix.
    pub fn kernel_basis(&self) -> Result<ExactMatrix, LinalgError> {
        if !self.ring.is_field() {
            return Err(LinalgError::RequiresField("kernel_basis"));
        }
        let mut red = ColumnReducer::new(self.ring, true);
        let mut kernel = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            if let Some(k) = red.insert_tracked(col.clone(), SparseVec::unit(j)) {
                kernel.push(k);
            }
        }
        Ok(ExactMatrix::from_columns(self.ring, self.cols, kernel))
    }

    pub fn hstack(parts: &[&ExactMatrix]) -> Result<ExactMatrix, LinalgError> {
        let first = parts.first().ok_or_else(|| LinalgError::Shape("empty hstack".into()))?;
        if parts.iter().any(|p| p.rows != first.rows) {
            return Err(LinalgError::Shape("hstack row mismatch".into()));
        }
        let columns = parts.iter().flat_map(|p| p.columns.iter().cloned()).collect();
        Ok(ExactMatrix::from_columns(first.ring, first.rows, columns))
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
