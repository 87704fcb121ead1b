//! Deterministic sparse linear algebra over an exact field.
//!
//! Matrices are stored row-wise with sorted column indices and no explicit
//! zeros, so structural equality is semantic equality. All eliminations are
//! plain Gaussian elimination with a fixed, documented insertion order —
//! identical inputs give identical outputs, bit for bit, on every run.
//!
//! Beyond the usual rank / kernel / solve kit, this module provides the
//! tensor-calculus helpers the cohomology engines are built from:
//! Kronecker products, tensor-factor permutations, and the "hom operator"
//! maps that act on a linear map `α` by composition, expressed as matrices in
//! the row-major flattening [`vec_of_matrix`].

use crate::field::{Field, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A sparse vector: sorted indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseVec {
    field: Field,
    dim: usize,
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn zero(field: Field, dim: usize) -> SparseVec {
        SparseVec {
            field,
            dim,
            entries: Vec::new(),
        }
    }

    /// The standard basis vector `e_i`.
    pub fn unit(field: Field, dim: usize, i: usize) -> SparseVec {
        assert!(i < dim, "unit index out of range");
        SparseVec {
            field,
            dim,
            entries: vec![(i, field.one())],
        }
    }

    /// Build from (index, value) pairs in any order; duplicates are summed.
    pub fn from_entries(
        field: Field,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, v) in entries {
            assert!(i < dim, "entry index {i} out of range for dimension {dim}");
            assert_eq!(v.field(), field, "field mismatch");
            match acc.remove(&i) {
                Some(old) => {
                    let s = old.add(&v);
                    if !s.is_zero() {
                        acc.insert(i, s);
                    }
                }
                None => {
                    if !v.is_zero() {
                        acc.insert(i, v);
                    }
                }
            }
        }
        SparseVec {
            field,
            dim,
            entries: acc.into_iter().collect(),
        }
    }

    pub fn from_dense(field: Field, values: &[Scalar]) -> SparseVec {
        SparseVec::from_entries(
            field,
            values.len(),
            values
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.clone()))
                .collect::<Vec<_>>(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero(self.field, self.dim);
        }
        SparseVec {
            field: self.field,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, v.mul(c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        self.scale(&self.field.from_i64(-1))
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        SparseVec {
            field: self.field,
            dim: self.dim,
            entries: merge_axpy(&self.field, &self.entries, c, &other.entries),
        }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&self.field.one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&self.field.from_i64(-1), other)
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    /// The same vector inside a larger space, with indices shifted by `offset`.
    pub fn shifted(&self, offset: usize, new_dim: usize) -> SparseVec {
        assert!(offset + self.dim <= new_dim, "shifted vector does not fit");
        SparseVec {
            field: self.field,
            dim: new_dim,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (i + offset, v.clone()))
                .collect(),
        }
    }
}

/// Merge two sorted entry lists as `a + c·b`, dropping zeros.
fn merge_axpy(
    field: &Field,
    a: &[(usize, Scalar)],
    c: &Scalar,
    b: &[(usize, Scalar)],
) -> Vec<(usize, Scalar)> {
    let _ = field;
    if c.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, c.mul(&b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a[i].1.add_mul(c, &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (idx, v) in &b[j..] {
        out.push((*idx, c.mul(v)));
    }
    out
}

/// A sparse matrix in row-major storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn zero(field: Field, nrows: usize, ncols: usize) -> SparseMatrix {
        SparseMatrix {
            field,
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(field: Field, n: usize) -> SparseMatrix {
        let rows = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix {
            field,
            nrows: n,
            ncols: n,
            rows,
        }
    }

    /// Build from (row, col, value) triplets in any order; duplicates are summed.
    pub fn from_triplets(
        field: Field,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> SparseMatrix {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) out of range");
            assert_eq!(v.field(), field, "field mismatch");
            let row = &mut acc[r];
            match row.remove(&c) {
                Some(old) => {
                    let s = old.add(&v);
                    if !s.is_zero() {
                        row.insert(c, s);
                    }
                }
                None => {
                    if !v.is_zero() {
                        row.insert(c, v);
                    }
                }
            }
        }
        SparseMatrix {
            field,
            nrows,
            ncols,
            rows: acc.into_iter().map(|m| m.into_iter().collect()).collect(),
        }
    }

    /// Build from dense integer rows — handy in tests and structure tables.
    pub fn from_rows_i64(field: Field, rows: &[Vec<i64>]) -> SparseMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                if *v != 0 {
                    triplets.push((r, c, field.from_i64(*v)));
                }
            }
        }
        SparseMatrix::from_triplets(field, nrows, ncols, triplets)
    }

    /// Stack row vectors into a matrix (each vector becomes one row).
    pub fn from_row_vecs(field: Field, ncols: usize, rows: &[SparseVec]) -> SparseMatrix {
        for v in rows {
            assert_eq!(v.dim(), ncols, "row length mismatch");
            assert_eq!(v.field(), field, "field mismatch");
        }
        SparseMatrix {
            field,
            nrows: rows.len(),
            ncols,
            rows: rows.iter().map(|v| v.entries.clone()).collect(),
        }
    }

    /// Lay column vectors side by side into a matrix.
    pub fn from_col_vecs(field: Field, nrows: usize, cols: &[SparseVec]) -> SparseMatrix {
        let mut triplets = Vec::new();
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.dim(), nrows, "column length mismatch");
            assert_eq!(v.field(), field, "field mismatch");
            for (r, val) in v.entries() {
                triplets.push((*r, c, val.clone()));
            }
        }
        SparseMatrix::from_triplets(field, nrows, cols.len(), triplets)
    }

    /// Build column `j` as `f(j)`; the workhorse for assembling differentials.
    pub fn from_columns_fn(
        field: Field,
        nrows: usize,
        ncols: usize,
        mut f: impl FnMut(usize) -> SparseVec,
    ) -> SparseMatrix {
        let cols: Vec<SparseVec> = (0..ncols).map(&mut f).collect();
        SparseMatrix::from_col_vecs(field, nrows, &cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn row(&self, r: usize) -> &[(usize, Scalar)] {
        &self.rows[r]
    }

    pub fn row_vec(&self, r: usize) -> SparseVec {
        SparseVec {
            field: self.field,
            dim: self.ncols,
            entries: self.rows[r].clone(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// All columns as sparse vectors, in one pass.
    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        cols.into_iter()
            .map(|entries| SparseVec {
                field: self.field,
                dim: self.nrows,
                entries,
            })
            .collect()
    }

    pub fn column(&self, c: usize) -> SparseVec {
        let mut entries = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            if let Ok(k) = row.binary_search_by_key(&c, |e| e.0) {
                entries.push((r, row[k].1.clone()));
            }
        }
        SparseVec {
            field: self.field,
            dim: self.nrows,
            entries,
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            field: self.field,
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(
            self.ncols, rhs.nrows,
            "shape mismatch in mul: {}x{} times {}x{}",
            self.nrows, self.ncols, rhs.nrows, rhs.ncols
        );
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            let mut acc: Vec<(usize, Scalar)> = Vec::new();
            for (k, v) in row {
                acc = merge_axpy(&self.field, &acc, v, &rhs.rows[*k]);
            }
            rows.push(acc);
        }
        SparseMatrix {
            field: self.field,
            nrows: self.nrows,
            ncols: rhs.ncols,
            rows,
        }
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        assert_eq!(self.field, v.field, "field mismatch");
        assert_eq!(self.ncols, v.dim, "shape mismatch in apply");
        // Accumulate column combinations: result = Σ v_c · col_c, computed
        // row-wise to stay cache-friendly on our row storage.
        let mut entries = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut s = self.field.zero();
            let (mut i, mut j) = (0, 0);
            while i < row.len() && j < v.entries.len() {
                match row[i].0.cmp(&v.entries[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        s = s.add_mul(&row[i].1, &v.entries[j].1);
                        i += 1;
                        j += 1;
                    }
                }
            }
            if !s.is_zero() {
                entries.push((r, s));
            }
        }
        SparseVec {
            field: self.field,
            dim: self.nrows,
            entries,
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        if c.is_zero() {
            return SparseMatrix::zero(self.field, self.nrows, self.ncols);
        }
        SparseMatrix {
            field: self.field,
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(c0, v)| (*c0, v.mul(c))).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&self.field.one(), rhs)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&self.field.from_i64(-1), rhs)
    }

    /// `self + c · rhs`.
    pub fn add_scaled(&self, c: &Scalar, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(
            (self.nrows, self.ncols),
            (rhs.nrows, rhs.ncols),
            "shape mismatch in add"
        );
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(a, b)| merge_axpy(&self.field, a, c, b))
            .collect();
        SparseMatrix {
            field: self.field,
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    /// Kronecker product, in the row-major convention: the rightmost tensor
    /// factor varies fastest, so `kron(A, B)` acts on `x ⊗ y` as `Ax ⊗ By`.
    pub fn kron(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let nrows = self.nrows * rhs.nrows;
        let ncols = self.ncols * rhs.ncols;
        let mut rows = Vec::with_capacity(nrows);
        for ra in &self.rows {
            for rb in &rhs.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ca, va) in ra {
                    for (cb, vb) in rb {
                        row.push((ca * rhs.ncols + cb, va.mul(vb)));
                    }
                }
                rows.push(row);
            }
        }
        SparseMatrix {
            field: self.field,
            nrows,
            ncols,
            rows,
        }
    }

    /// Kronecker product of a list of factors, leftmost slowest.
    pub fn kron_list(factors: &[&SparseMatrix]) -> SparseMatrix {
        assert!(!factors.is_empty(), "kron_list of nothing");
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = acc.kron(f);
        }
        acc
    }

    /// Stack matrices vertically (same column count).
    pub fn vstack(blocks: &[&SparseMatrix]) -> SparseMatrix {
        assert!(!blocks.is_empty(), "vstack of nothing");
        let field = blocks[0].field;
        let ncols = blocks[0].ncols;
        let mut rows = Vec::new();
        for b in blocks {
            assert_eq!(b.field, field, "field mismatch");
            assert_eq!(b.ncols, ncols, "column count mismatch in vstack");
            rows.extend(b.rows.iter().cloned());
        }
        SparseMatrix {
            field,
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    /// Lay matrices side by side (same row count).
    pub fn hstack(blocks: &[&SparseMatrix]) -> SparseMatrix {
        assert!(!blocks.is_empty(), "hstack of nothing");
        let field = blocks[0].field;
        let nrows = blocks[0].nrows;
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); nrows];
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.field, field, "field mismatch");
            assert_eq!(b.nrows, nrows, "row count mismatch in hstack");
            for (r, row) in b.rows.iter().enumerate() {
                rows[r].extend(row.iter().map(|(c, v)| (c + offset, v.clone())));
            }
            offset += b.ncols;
        }
        SparseMatrix {
            field,
            nrows,
            ncols: offset,
            rows,
        }
    }

    /// Assemble a block matrix from a grid of blocks.
    pub fn from_blocks(grid: &[Vec<&SparseMatrix>]) -> SparseMatrix {
        assert!(!grid.is_empty(), "empty block grid");
        let strips: Vec<SparseMatrix> = grid.iter().map(|row| SparseMatrix::hstack(row)).collect();
        let refs: Vec<&SparseMatrix> = strips.iter().collect();
        SparseMatrix::vstack(&refs)
    }

    /// Rank by Gaussian elimination. Vectors are inserted sparsest-first from
    /// the shorter side of the matrix, and elimination stops as soon as the
    /// rank bound `min(nrows, ncols)` is reached.
    pub fn rank(&self) -> usize {
        let cap = self.nrows.min(self.ncols);
        if cap == 0 {
            return 0;
        }
        let (vectors, ambient) = if self.ncols <= self.nrows {
            // Insert rows into an ncols-dimensional ambient space.
            let v: Vec<SparseVec> = (0..self.nrows).map(|r| self.row_vec(r)).collect();
            (v, self.ncols)
        } else {
            (self.columns(), self.nrows)
        };
        let mut order: Vec<usize> = (0..vectors.len()).collect();
        order.sort_by_key(|&i| (vectors[i].nnz(), i));
        let mut ech = Echelon::new(self.field, ambient, false);
        for &i in &order {
            if vectors[i].is_zero() {
                continue;
            }
            ech.insert(&vectors[i], i);
            if ech.rank() == cap {
                break;
            }
        }
        ech.rank()
    }

    /// A basis of the right kernel `{v : self · v = 0}`, in the reduced
    /// echelon convention: each basis vector has coefficient 1 on its own
    /// free column and support only on that column and earlier pivot columns.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        stacked_kernel(&[self]).expect("single-matrix kernel cannot mismatch")
    }

    /// One solution of `self · x = b`, if any.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        assert_eq!(b.dim(), self.nrows, "right-hand side dimension mismatch");
        let mut solver = SpanSolver::new(self.field, self.nrows);
        for col in self.columns() {
            solver.push(&col);
        }
        solver.express(b)
    }

    /// The inverse of a square matrix.
    pub fn inverse(&self) -> Result<SparseMatrix> {
        if self.nrows != self.ncols {
            return Err(Error::NotInvertible);
        }
        let mut solver = SpanSolver::new(self.field, self.nrows);
        for col in self.columns() {
            solver.push(&col);
        }
        if solver.rank() < self.nrows {
            return Err(Error::NotInvertible);
        }
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            let e = SparseVec::unit(self.field, self.nrows, i);
            let x = solver.express(&e).ok_or(Error::NotInvertible)?;
            for (j, v) in x.entries() {
                triplets.push((*j, i, v.clone()));
            }
        }
        Ok(SparseMatrix::from_triplets(
            self.field, self.nrows, self.ncols, triplets,
        ))
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.nrows).map(|r| self.row_vec(r).to_dense()).collect()
    }
}

/// Flatten a matrix row-major into a vector: entry `(r, c)` lands at
/// `r · ncols + c`. This is the convention every hom operator below uses.
pub fn vec_of_matrix(m: &SparseMatrix) -> SparseVec {
    let dim = m.nrows() * m.ncols();
    let mut entries = Vec::with_capacity(m.nnz());
    for r in 0..m.nrows() {
        for (c, v) in m.row(r) {
            entries.push((r * m.ncols() + c, v.clone()));
        }
    }
    SparseVec {
        field: m.field(),
        dim,
        entries,
    }
}

/// Inverse of [`vec_of_matrix`].
pub fn matrix_of_vec(v: &SparseVec, nrows: usize, ncols: usize) -> SparseMatrix {
    assert_eq!(v.dim(), nrows * ncols, "flattened dimension mismatch");
    SparseMatrix::from_triplets(
        v.field(),
        nrows,
        ncols,
        v.entries()
            .iter()
            .map(|(i, val)| (i / ncols, i % ncols, val.clone()))
            .collect::<Vec<_>>(),
    )
}

/// The operator `α ↦ p ∘ α` on flattened maps, for `α` with `source_dim` columns.
pub fn hom_post(p: &SparseMatrix, source_dim: usize) -> SparseMatrix {
    p.kron(&SparseMatrix::identity(p.field(), source_dim))
}

/// The operator `α ↦ α ∘ q` on flattened maps, for `α` with `target_dim` rows.
pub fn hom_pre(q: &SparseMatrix, target_dim: usize) -> SparseMatrix {
    SparseMatrix::identity(q.field(), target_dim).kron(&q.transpose())
}

/// The operator `α ↦ p ∘ (1_dl ⊗ α ⊗ 1_dr) ∘ q` on flattened maps, where `α`
/// is `alpha_rows × alpha_cols`. Built column by column: the image of the
/// elementary matrix `E_{rc}` is computed by two sparse products.
pub fn hom_sandwich(
    p: &SparseMatrix,
    dl: usize,
    dr: usize,
    q: &SparseMatrix,
    alpha_rows: usize,
    alpha_cols: usize,
) -> SparseMatrix {
    let field = p.field();
    assert_eq!(field, q.field(), "field mismatch");
    assert_eq!(
        p.ncols(),
        dl * alpha_rows * dr,
        "post factor does not match the sandwich target"
    );
    assert_eq!(
        q.nrows(),
        dl * alpha_cols * dr,
        "pre factor does not match the sandwich source"
    );
    let out_dim = p.nrows() * q.ncols();
    SparseMatrix::from_columns_fn(field, out_dim, alpha_rows * alpha_cols, |idx| {
        let (r, c) = (idx / alpha_cols, idx % alpha_cols);
        // 1_dl ⊗ E_{rc} ⊗ 1_dr, with dl·dr entries.
        let mid = SparseMatrix::from_triplets(
            field,
            dl * alpha_rows * dr,
            dl * alpha_cols * dr,
            (0..dl)
                .flat_map(|a| {
                    (0..dr).map(move |b| {
                        (
                            (a * alpha_rows + r) * dr + b,
                            (a * alpha_cols + c) * dr + b,
                        )
                    })
                })
                .map(|(row, col)| (row, col, field.one()))
                .collect::<Vec<_>>(),
        );
        vec_of_matrix(&p.mul(&mid).mul(q))
    })
}

/// Decompose `idx` in the mixed-radix system given by `dims` (rightmost digit
/// fastest).
pub fn mixed_radix_decompose(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (k, d) in dims.iter().enumerate().rev() {
        digits[k] = idx % d;
        idx /= d;
    }
    debug_assert_eq!(idx, 0, "index out of range for dims");
    digits
}

/// Compose mixed-radix digits back into a flat index (rightmost fastest).
pub fn mixed_radix_compose(digits: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0;
    for (d, dim) in digits.iter().zip(dims) {
        debug_assert!(d < dim);
        idx = idx * dim + d;
    }
    idx
}

/// The permutation matrix reordering tensor factors: output slot `j` receives
/// input factor `perm[j]`, so on decomposable tensors
/// `x_0 ⊗ … ⊗ x_{k-1} ↦ x_{perm[0]} ⊗ … ⊗ x_{perm[k-1]}`.
pub fn tensor_permutation(field: Field, dims: &[usize], perm: &[usize]) -> SparseMatrix {
    assert_eq!(dims.len(), perm.len(), "permutation length mismatch");
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        assert!(p < perm.len() && !seen[p], "not a permutation");
        seen[p] = true;
    }
    let total: usize = dims.iter().product();
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut triplets = Vec::with_capacity(total);
    for input in 0..total {
        let digits = mixed_radix_decompose(input, dims);
        let out_digits: Vec<usize> = perm.iter().map(|&p| digits[p]).collect();
        let output = mixed_radix_compose(&out_digits, &out_dims);
        triplets.push((output, input, field.one()));
    }
    SparseMatrix::from_triplets(field, total, total, triplets)
}

/// Outcome of feeding one vector to an [`Echelon`].
pub enum Insert {
    /// The vector enlarged the span.
    Independent,
    /// The vector was already in the span; when tracking is on, the
    /// combination lists tags (with the new vector's own tag at coefficient 1)
    /// summing to zero.
    Dependent(Vec<(usize, Scalar)>),
}

/// Incremental Gaussian elimination with optional combination tracking.
///
/// Rows are kept normalized (leading coefficient 1) and indexed by leading
/// position. When `track` is on, each stored row remembers how it was built
/// from the inserted vectors, which is what powers kernels and solving.
pub struct Echelon {
    field: Field,
    dim: usize,
    track: bool,
    pivots: BTreeMap<usize, EchRow>,
}

struct EchRow {
    entries: Vec<(usize, Scalar)>,
    comb: Vec<(usize, Scalar)>,
}

impl Echelon {
    pub fn new(field: Field, dim: usize, track: bool) -> Echelon {
        Echelon {
            field,
            dim,
            track,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduce `v` against the current rows. Returns the residual entries and,
    /// when tracking, the combination of previously inserted tags that was
    /// subtracted: `v = residual + Σ c_t · inserted_t`.
    fn reduce_entries(
        &self,
        mut entries: Vec<(usize, Scalar)>,
    ) -> (Vec<(usize, Scalar)>, Vec<(usize, Scalar)>) {
        let mut comb: Vec<(usize, Scalar)> = Vec::new();
        loop {
            let lead = match entries.first() {
                Some((i, _)) => *i,
                None => break,
            };
            let Some(row) = self.pivots.get(&lead) else {
                break;
            };
            let c = entries[0].1.clone();
            let neg_c = c.neg();
            entries = merge_axpy(&self.field, &entries, &neg_c, &row.entries);
            if self.track {
                comb = merge_axpy(&self.field, &comb, &c, &row.comb);
            }
        }
        (entries, comb)
    }

    /// Insert a vector with an identifying tag.
    pub fn insert(&mut self, v: &SparseVec, tag: usize) -> Insert {
        assert_eq!(v.dim(), self.dim, "ambient dimension mismatch");
        assert_eq!(v.field(), self.field, "field mismatch");
        let (residual, comb) = self.reduce_entries(v.entries.clone());
        if residual.is_empty() {
            // v − Σ c_t·inserted_t = 0, so the kernel combination is
            // e_tag − Σ c_t·e_t.
            let dependency = if self.track {
                merge_axpy(
                    &self.field,
                    &[(tag, self.field.one())],
                    &self.field.from_i64(-1),
                    &comb,
                )
            } else {
                Vec::new()
            };
            return Insert::Dependent(dependency);
        }
        let lead = residual[0].0;
        let lead_inv = residual[0].1.inv().expect("nonzero leading coefficient");
        let entries: Vec<(usize, Scalar)> = residual
            .iter()
            .map(|(i, val)| (*i, val.mul(&lead_inv)))
            .collect();
        let comb = if self.track {
            // row = (v − Σ c_t·inserted_t) / lead
            let raw = merge_axpy(
                &self.field,
                &[(tag, self.field.one())],
                &self.field.from_i64(-1),
                &comb,
            );
            raw.iter().map(|(t, val)| (*t, val.mul(&lead_inv))).collect()
        } else {
            Vec::new()
        };
        self.pivots.insert(lead, EchRow { entries, comb });
        Insert::Independent
    }

    /// Reduce an arbitrary vector: returns the residual and the tag
    /// combination such that `v = residual + Σ c_t · inserted_t`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, Vec<(usize, Scalar)>) {
        assert_eq!(v.dim(), self.dim, "ambient dimension mismatch");
        let (entries, comb) = self.reduce_entries(v.entries.clone());
        (
            SparseVec {
                field: self.field,
                dim: self.dim,
                entries,
            },
            comb,
        )
    }
}

/// A growing span with the ability to express vectors in terms of the pushed
/// generators.
pub struct SpanSolver {
    ech: Echelon,
    count: usize,
}

impl SpanSolver {
    pub fn new(field: Field, ambient_dim: usize) -> SpanSolver {
        SpanSolver {
            ech: Echelon::new(field, ambient_dim, true),
            count: 0,
        }
    }

    /// Add a generator; returns true if it enlarged the span. Generators are
    /// numbered 0, 1, 2, … in push order.
    pub fn push(&mut self, v: &SparseVec) -> bool {
        let tag = self.count;
        self.count += 1;
        matches!(self.ech.insert(v, tag), Insert::Independent)
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn generator_count(&self) -> usize {
        self.count
    }

    pub fn ambient_dim(&self) -> usize {
        self.ech.dim()
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.reduce(v).0.is_zero()
    }

    /// Coefficients expressing `v` as a combination of the pushed generators,
    /// or `None` if `v` is outside the span. The result has one coordinate per
    /// pushed generator.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (residual, comb) = self.ech.reduce(v);
        if !residual.is_zero() {
            return None;
        }
        Some(SparseVec {
            field: residual.field,
            dim: self.count,
            entries: comb,
        })
    }
}

/// A basis for the joint kernel `{v : m·v = 0 for every m}` of matrices with a
/// common column count. Columns are processed in ascending order, so the
/// result is the reduced-echelon kernel basis of the stacked matrix.
pub fn stacked_kernel(mats: &[&SparseMatrix]) -> Result<Vec<SparseVec>> {
    assert!(!mats.is_empty(), "stacked_kernel of nothing");
    let field = mats[0].field();
    let ncols = mats[0].ncols();
    for m in mats {
        if m.field() != field {
            return Err(Error::AlgebraMismatch);
        }
        if m.ncols() != ncols {
            return Err(Error::DimensionMismatch {
                context: "stacked_kernel".into(),
                expected: ncols,
                got: m.ncols(),
            });
        }
    }
    let total_rows: usize = mats.iter().map(|m| m.nrows()).sum();
    // Column streams for every block, computed in one pass each.
    let block_cols: Vec<Vec<SparseVec>> = mats.iter().map(|m| m.columns()).collect();
    let offsets: Vec<usize> = mats
        .iter()
        .scan(0usize, |acc, m| {
            let off = *acc;
            *acc += m.nrows();
            Some(off)
        })
        .collect();
    let mut ech = Echelon::new(field, total_rows.max(1), true);
    let mut kernel = Vec::new();
    for j in 0..ncols {
        let mut entries = Vec::new();
        for (b, cols) in block_cols.iter().enumerate() {
            entries.extend(
                cols[j]
                    .entries()
                    .iter()
                    .map(|(r, v)| (r + offsets[b], v.clone())),
            );
        }
        let stacked = SparseVec {
            field,
            dim: total_rows.max(1),
            entries,
        };
        if let Insert::Dependent(comb) = ech.insert(&stacked, j) {
            kernel.push(SparseVec {
                field,
                dim: ncols,
                entries: comb,
            });
        }
    }
    Ok(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn random_matrix(
        rng: &mut ChaCha8Rng,
        field: Field,
        nrows: usize,
        ncols: usize,
        density_pct: u32,
    ) -> SparseMatrix {
        let mut triplets = Vec::new();
        for r in 0..nrows {
            for c in 0..ncols {
                if rng.gen_range(0..100) < density_pct {
                    let v = field.from_i64(rng.gen_range(-4..=4));
                    triplets.push((r, c, v));
                }
            }
        }
        SparseMatrix::from_triplets(field, nrows, ncols, triplets)
    }

    #[test]
    fn rank_of_proportional_rows() {
        let m = SparseMatrix::from_rows_i64(f(5), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_small_system_mod_2() {
        let m = SparseMatrix::from_rows_i64(f(2), &[vec![1, 1, 0], vec![0, 0, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(
            k[0].to_dense(),
            vec![f(2).one(), f(2).one(), f(2).zero()]
        );
        assert!(m.apply(&k[0]).is_zero());
    }

    #[test]
    fn solve_exactly_over_the_rationals() {
        let q = Field::rationals();
        let m = SparseMatrix::from_rows_i64(q, &[vec![1, 2], vec![3, 4]]);
        let b = SparseVec::from_dense(q, &[q.from_i64(5), q.from_i64(6)]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert_eq!(x.get(0), q.from_i64(-4));
        assert_eq!(x.get(1), q.parse("9/2").unwrap());
    }

    #[test]
    fn solve_reports_inconsistency() {
        let q = Field::rationals();
        let m = SparseMatrix::from_rows_i64(q, &[vec![1, 1], vec![2, 2]]);
        let b = SparseVec::from_dense(q, &[q.from_i64(0), q.from_i64(1)]);
        assert!(m.solve(&b).is_none());
    }

    #[test]
    fn stacked_kernel_intersects() {
        let q = Field::rationals();
        let a = SparseMatrix::from_rows_i64(q, &[vec![1, 0, 0]]);
        let b = SparseMatrix::from_rows_i64(q, &[vec![0, 1, 0]]);
        let k = stacked_kernel(&[&a, &b]).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(
            k[0].to_dense(),
            vec![q.zero(), q.zero(), q.one()]
        );
    }

    #[test]
    fn kernel_of_zero_and_empty_matrices() {
        let q = Field::rationals();
        let zero = SparseMatrix::zero(q, 0, 3);
        assert_eq!(zero.kernel_basis().len(), 3);
        assert_eq!(zero.rank(), 0);
        let empty = SparseMatrix::zero(q, 3, 0);
        assert_eq!(empty.kernel_basis().len(), 0);
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn inverse_of_unitriangular() {
        let q = Field::rationals();
        let m = SparseMatrix::from_rows_i64(q, &[vec![1, 1], vec![0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SparseMatrix::identity(q, 2));
        assert_eq!(inv.get(0, 1), q.from_i64(-1));
        let sing = SparseMatrix::from_rows_i64(f(5), &[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn kron_convention_rightmost_fastest() {
        let q = Field::rationals();
        let swap = SparseMatrix::from_rows_i64(q, &[vec![0, 1], vec![1, 0]]);
        let diag = SparseMatrix::from_rows_i64(q, &[vec![1, 0], vec![0, 2]]);
        let k = swap.kron(&diag);
        // (swap ⊗ diag)(e_i ⊗ e_j) = swap(e_i) ⊗ diag(e_j), index 2i + j.
        let e01 = SparseVec::unit(q, 4, 1); // e_0 ⊗ e_1
        let out = k.apply(&e01);
        // goes to e_1 ⊗ 2·e_1 = 2·e_{2+1}
        assert_eq!(out.to_dense(), vec![q.zero(), q.zero(), q.zero(), q.from_i64(2)]);
        let triple = SparseMatrix::kron_list(&[&swap, &diag, &swap]);
        assert_eq!(triple.nrows(), 8);
    }

    #[test]
    fn tensor_permutation_moves_factors() {
        let q = Field::rationals();
        // dims [2, 3], swap the two factors.
        let p = tensor_permutation(q, &[2, 3], &[1, 0]);
        // e_{i=1, j=2} has index 1*3 + 2 = 5; image e_{j=2, i=1} has index 2*2 + 1 = 5 in [3,2].
        let v = SparseVec::unit(q, 6, 5);
        assert_eq!(p.apply(&v), SparseVec::unit(q, 6, 5));
        // e_{i=1, j=0}: index 3 ↦ e_{j=0, i=1}: index 1.
        let v = SparseVec::unit(q, 6, 3);
        assert_eq!(p.apply(&v), SparseVec::unit(q, 6, 1));
        // Permutations compose to the identity.
        let p_inv = tensor_permutation(q, &[3, 2], &[1, 0]);
        assert_eq!(p_inv.mul(&p), SparseMatrix::identity(q, 6));
    }

    #[test]
    fn flatten_round_trip() {
        let q = Field::rationals();
        let m = SparseMatrix::from_rows_i64(q, &[vec![1, 0, 2], vec![0, -1, 0]]);
        let v = vec_of_matrix(&m);
        assert_eq!(v.dim(), 6);
        assert_eq!(v.get(2), q.from_i64(2)); // entry (0,2) at 0*3+2
        assert_eq!(matrix_of_vec(&v, 2, 3), m);
    }

    #[test]
    fn hom_operators_match_direct_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let field = f(7);
        for _ in 0..20 {
            let alpha = random_matrix(&mut rng, field, 3, 2, 60);
            let p = random_matrix(&mut rng, field, 4, 3, 60);
            let q = random_matrix(&mut rng, field, 2, 3, 60);
            // post: p ∘ α
            let lhs = hom_post(&p, 2).apply(&vec_of_matrix(&alpha));
            assert_eq!(lhs, vec_of_matrix(&p.mul(&alpha)));
            // pre: α ∘ q
            let lhs = hom_pre(&q, 3).apply(&vec_of_matrix(&alpha));
            assert_eq!(lhs, vec_of_matrix(&alpha.mul(&q)));
            // sandwich: p' ∘ (1_2 ⊗ α ⊗ 1_2) ∘ q'
            let pp = random_matrix(&mut rng, field, 3, 2 * 3 * 2, 30);
            let qq = random_matrix(&mut rng, field, 2 * 2 * 2, 3, 30);
            let op = hom_sandwich(&pp, 2, 2, &qq, 3, 2);
            let lhs = op.apply(&vec_of_matrix(&alpha));
            let id2 = SparseMatrix::identity(field, 2);
            let mid = SparseMatrix::kron_list(&[&id2, &alpha, &id2]);
            let rhs = vec_of_matrix(&pp.mul(&mid).mul(&qq));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rank_nullity_holds_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for field in [f(5), Field::rationals()] {
            for _ in 0..15 {
                let m = random_matrix(&mut rng, field, 6, 8, 40);
                let k = m.kernel_basis();
                assert_eq!(m.rank() + k.len(), 8);
                for v in &k {
                    assert!(m.apply(v).is_zero());
                }
                // Kernel vectors are independent: each has a distinct free column.
                let mut solver = SpanSolver::new(field, 8);
                for v in &k {
                    assert!(solver.push(v));
                }
            }
        }
    }

    #[test]
    fn rank_is_transpose_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..15 {
            let m = random_matrix(&mut rng, f(3), 7, 5, 35);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn product_rank_bound_and_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let q = Field::rationals();
        for _ in 0..10 {
            let a = random_matrix(&mut rng, q, 4, 5, 50);
            let b = random_matrix(&mut rng, q, 5, 3, 50);
            let c = random_matrix(&mut rng, q, 3, 6, 50);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert!(a.mul(&b).rank() <= a.rank().min(b.rank()));
            // apply agrees with mul against a column matrix
            let v = random_matrix(&mut rng, q, 5, 1, 80);
            let as_vec = v.column(0);
            assert_eq!(a.apply(&as_vec), a.mul(&v).column(0));
        }
    }

    #[test]
    fn span_solver_expresses_members_only() {
        let q = Field::rationals();
        let mut solver = SpanSolver::new(q, 3);
        let v1 = SparseVec::from_dense(q, &[q.from_i64(1), q.from_i64(1), q.zero()]);
        let v2 = SparseVec::from_dense(q, &[q.zero(), q.from_i64(1), q.from_i64(1)]);
        assert!(solver.push(&v1));
        assert!(solver.push(&v2));
        assert!(!solver.push(&v1.add(&v2)));
        let target = v1.scale(&q.from_i64(3)).add(&v2.scale(&q.from_i64(-2)));
        let coeffs = solver.express(&target).unwrap();
        assert_eq!(coeffs.dim(), 3); // three generators were pushed
        assert_eq!(coeffs.get(0), q.from_i64(3));
        assert_eq!(coeffs.get(1), q.from_i64(-2));
        assert_eq!(coeffs.get(2), q.zero());
        let outside = SparseVec::unit(q, 3, 0);
        assert!(solver.express(&outside).is_none());
        assert!(!solver.contains(&outside));
    }

    #[test]
    fn block_assembly() {
        let q = Field::rationals();
        let a = SparseMatrix::from_rows_i64(q, &[vec![1]]);
        let b = SparseMatrix::from_rows_i64(q, &[vec![2]]);
        let c = SparseMatrix::from_rows_i64(q, &[vec![3]]);
        let d = SparseMatrix::from_rows_i64(q, &[vec![4]]);
        let m = SparseMatrix::from_blocks(&[vec![&a, &b], vec![&c, &d]]);
        assert_eq!(
            m,
            SparseMatrix::from_rows_i64(q, &[vec![1, 2], vec![3, 4]])
        );
        let tall = SparseMatrix::vstack(&[&m, &SparseMatrix::zero(q, 1, 2)]);
        assert_eq!(tall.nrows(), 3);
        assert_eq!(tall.rank(), 2);
    }
}
