//! Exact linear algebra over F_p for p < 2^16: sparse column-major matrices
//! and rank computation.
//!
//! Rank is computed by sparse Gaussian elimination with Markowitz-style pivot
//! selection, switching to a dense row-echelon kernel once the active
//! submatrix is small or has filled in past a density threshold. Matrices
//! that start small or dense go straight to the dense kernel. Pivot ties are
//! always broken toward the lowest row and column index, so ranks and echelon
//! traces are deterministic for a given matrix.

use crate::arith::is_prime;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {0} is not supported (a prime below 2^16 is required)")]
    UnsupportedModulus(u64),
}

/// Density above which elimination continues on a dense copy.
const DENSE_DENSITY_THRESHOLD: f64 = 0.20;
/// Dimension at or below which the dense kernel is used outright.
const DENSE_DIMENSION_THRESHOLD: usize = 256;
/// Upper bound on dense working-set bytes; larger active submatrices stay
/// on the sparse path even past the density threshold.
const DENSE_BYTE_CAP: usize = 800 << 20;
/// Minimum number of updated cells per pivot before row updates fan out to
/// the thread pool.
const PARALLEL_CELL_THRESHOLD: usize = 1 << 22;

/// Sparse matrix over F_p, stored as per-column `(row, value)` entry lists.
#[derive(Debug, Clone)]
pub struct SparseMatrixModP {
    nrows: usize,
    ncols: usize,
    p: u64,
    columns: Vec<Vec<(u32, u16)>>,
    nnz: usize,
}

impl SparseMatrixModP {
    pub fn new(nrows: usize, ncols: usize, p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 16 || !is_prime(p) {
            return Err(LinalgError::UnsupportedModulus(p));
        }
        Ok(SparseMatrixModP {
            nrows,
            ncols,
            p,
            columns: vec![Vec::new(); ncols],
            nnz: 0,
        })
    }

    /// Identity matrix of the given size.
    pub fn identity(n: usize, p: u64) -> Result<Self, LinalgError> {
        let mut m = Self::new(n, n, p)?;
        for i in 0..n {
            m.push(i, i, 1);
        }
        Ok(m)
    }

    /// Records `value mod p` at `(row, col)`. Zero residues are dropped.
    /// Each position may be pushed at most once.
    pub fn push(&mut self, row: usize, col: usize, value: u64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        let v = (value % self.p) as u16;
        if v == 0 {
            return;
        }
        self.columns[col].push((row as u32, v));
        self.nnz += 1;
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn density(&self) -> f64 {
        if self.nrows == 0 || self.ncols == 0 {
            return 0.0;
        }
        self.nnz as f64 / (self.nrows as f64 * self.ncols as f64)
    }

    /// Matrix-vector product `A * v` over F_p.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.ncols);
        let mut out = vec![0u64; self.nrows];
        for (col, entries) in self.columns.iter().enumerate() {
            let x = v[col] % self.p;
            if x == 0 {
                continue;
            }
            for &(row, val) in entries {
                let cell = &mut out[row as usize];
                *cell = (*cell + val as u64 * x) % self.p;
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrixModP {
        let mut t = SparseMatrixModP::new(self.ncols, self.nrows, self.p)
            .expect("modulus already validated");
        for (col, entries) in self.columns.iter().enumerate() {
            for &(row, val) in entries {
                t.columns[row as usize].push((col as u32, val));
            }
        }
        for column in &mut t.columns {
            column.sort_unstable_by_key(|&(r, _)| r);
        }
        t.nnz = self.nnz;
        t
    }

    pub fn rank(&self) -> u64 {
        match self.rank_impl(RankGoal::Exact) {
            RankOutcome::Rank(r) => r,
            RankOutcome::Deficient => unreachable!("exact rank never aborts"),
        }
    }

    /// Whether the columns are linearly independent. May abort elimination
    /// early on the first dependent column.
    pub fn has_full_column_rank(&self) -> bool {
        match self.rank_impl(RankGoal::FullColumnRank) {
            RankOutcome::Rank(r) => r == self.ncols as u64,
            RankOutcome::Deficient => false,
        }
    }

    fn rank_impl(&self, goal: RankGoal) -> RankOutcome {
        if self.nrows == 0 || self.ncols == 0 || self.nnz == 0 {
            return match goal {
                RankGoal::FullColumnRank if self.ncols > 0 && self.nnz == 0 => {
                    RankOutcome::Deficient
                }
                _ => RankOutcome::Rank(0),
            };
        }
        let small = self.nrows.min(self.ncols) <= DENSE_DIMENSION_THRESHOLD;
        let dense_fits = dense_bytes(self.nrows, self.ncols, self.p) <= DENSE_BYTE_CAP;
        if dense_fits && (small || self.density() > DENSE_DENSITY_THRESHOLD) {
            let field = Field::new(self.p);
            let mut dense = DenseStore::from_sparse(self);
            dense_rank(&mut dense, self.nrows, self.ncols, &field, goal)
        } else {
            sparse_rank(self, goal)
        }
    }

    /// Row-major copy: per-row sorted `(col, value)` lists.
    fn to_rows(&self) -> Vec<Vec<(u32, u16)>> {
        let mut rows = vec![Vec::new(); self.nrows];
        for (col, entries) in self.columns.iter().enumerate() {
            for &(row, val) in entries {
                rows[row as usize].push((col as u32, val));
            }
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(c, _)| c);
        }
        rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RankGoal {
    Exact,
    /// Abort as soon as some column is known to be dependent.
    FullColumnRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RankOutcome {
    Rank(u64),
    Deficient,
}

/// Modular arithmetic context: inverse table plus a Barrett constant for the
/// byte-sized kernel.
struct Field {
    p: u32,
    /// `floor(2^16 / p) + 1`; exact quotients for values below 2^8.
    barrett16: u32,
    inverse: Vec<u16>,
}

impl Field {
    fn new(p: u64) -> Field {
        let p32 = p as u32;
        let mut inverse = vec![0u16; p as usize];
        for v in 1..p {
            inverse[v as usize] = pow_mod_small(v, p - 2, p) as u16;
        }
        Field {
            p: p32,
            barrett16: (1u32 << 16) / p32 + 1,
            inverse,
        }
    }

    #[inline]
    fn inv(&self, v: u16) -> u16 {
        self.inverse[v as usize]
    }

    #[inline]
    fn mul(&self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.p) as u16
    }

    #[inline]
    fn sub(&self, a: u16, b: u16) -> u16 {
        let p = self.p as u16;
        if a >= b {
            a - b
        } else {
            a + (p - b)
        }
    }
}

fn pow_mod_small(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn dense_bytes(nrows: usize, ncols: usize, p: u64) -> usize {
    let cell = if p <= 16 { 1 } else { 4 };
    nrows.saturating_mul(ncols).saturating_mul(cell)
}

/// Dense row-major storage; byte cells for p <= 16 (the hot kernels), word
/// cells otherwise.
enum DenseStore {
    Bytes(Vec<u8>),
    Words(Vec<u32>),
}

impl DenseStore {
    fn zeros(cells: usize, p: u64) -> DenseStore {
        if p <= 16 {
            DenseStore::Bytes(vec![0u8; cells])
        } else {
            DenseStore::Words(vec![0u32; cells])
        }
    }

    fn from_sparse(m: &SparseMatrixModP) -> DenseStore {
        let mut store = DenseStore::zeros(m.nrows * m.ncols, m.p);
        for (col, entries) in m.columns.iter().enumerate() {
            for &(row, val) in entries {
                store.set(row as usize * m.ncols + col, val);
            }
        }
        store
    }

    #[inline]
    fn set(&mut self, idx: usize, val: u16) {
        match self {
            DenseStore::Bytes(d) => d[idx] = val as u8,
            DenseStore::Words(d) => d[idx] = val as u32,
        }
    }
}

/// Row echelon elimination on a dense row-major store. Returns the rank of
/// the stored matrix; the caller adds any pivots found before switching
/// representations.
fn dense_rank(
    store: &mut DenseStore,
    nrows: usize,
    ncols: usize,
    field: &Field,
    goal: RankGoal,
) -> RankOutcome {
    match store {
        DenseStore::Bytes(data) => dense_rank_bytes(data, nrows, ncols, field, goal),
        DenseStore::Words(data) => dense_rank_words(data, nrows, ncols, field, goal),
    }
}

/// Byte kernel for p <= 16. The update `t + c*s` stays below 2^8 for any
/// residues t, s, c < p, and the Barrett quotient `(v * barrett16) >> 16` is
/// exact for v < 2^8, so each cell needs one widening multiply, one high
/// multiply, and one fused subtract.
fn dense_rank_bytes(
    data: &mut [u8],
    nrows: usize,
    ncols: usize,
    field: &Field,
    goal: RankGoal,
) -> RankOutcome {
    let p16 = field.p as u16;
    let barrett = field.barrett16;
    let mut rank = 0usize;
    let mut pivot_buf = vec![0u8; ncols];
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| data[r * ncols + col] != 0);
        let Some(pivot_row) = pivot else {
            if goal == RankGoal::FullColumnRank {
                return RankOutcome::Deficient;
            }
            continue;
        };
        if pivot_row != rank {
            let (a, b) = data.split_at_mut(pivot_row * ncols);
            a[rank * ncols + col..rank * ncols + ncols].swap_with_slice(&mut b[col..ncols]);
        }
        let inv = field.inv(data[rank * ncols + col] as u16);
        pivot_buf[col..ncols].copy_from_slice(&data[rank * ncols + col..rank * ncols + ncols]);
        let pivot_slice = &pivot_buf[col..ncols];
        let tail = &mut data[(rank + 1) * ncols..];
        let update = |row: &mut [u8]| {
            let lead = row[col] as u32;
            if lead == 0 {
                return;
            }
            // c = -lead / pivot, so adding c * pivot_row clears the column.
            let c = (field.p - (lead * inv as u32) % field.p) % field.p;
            let c16 = c as u16;
            for (t, &s) in row[col..ncols].iter_mut().zip(pivot_slice) {
                let v = *t as u16 + c16 * s as u16;
                let q = ((v as u32 * barrett) >> 16) as u16;
                *t = (v - q * p16) as u8;
            }
        };
        let remaining_rows = nrows - rank - 1;
        if remaining_rows * (ncols - col) >= PARALLEL_CELL_THRESHOLD {
            tail.par_chunks_mut(ncols).for_each(update);
        } else {
            tail.chunks_mut(ncols).for_each(update);
        }
        rank += 1;
        if rank == nrows {
            if goal == RankGoal::FullColumnRank && col + 1 < ncols {
                return RankOutcome::Deficient;
            }
            break;
        }
    }
    RankOutcome::Rank(rank as u64)
}

/// Word kernel for 16 < p < 2^16. `t + c*s` stays below 2^32.
fn dense_rank_words(
    data: &mut [u32],
    nrows: usize,
    ncols: usize,
    field: &Field,
    goal: RankGoal,
) -> RankOutcome {
    let p = field.p;
    let mut rank = 0usize;
    let mut pivot_buf = vec![0u32; ncols];
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| data[r * ncols + col] != 0);
        let Some(pivot_row) = pivot else {
            if goal == RankGoal::FullColumnRank {
                return RankOutcome::Deficient;
            }
            continue;
        };
        if pivot_row != rank {
            let (a, b) = data.split_at_mut(pivot_row * ncols);
            a[rank * ncols + col..rank * ncols + ncols].swap_with_slice(&mut b[col..ncols]);
        }
        let inv = field.inv(data[rank * ncols + col] as u16) as u32;
        pivot_buf[col..ncols].copy_from_slice(&data[rank * ncols + col..rank * ncols + ncols]);
        let pivot_slice = &pivot_buf[col..ncols];
        let tail = &mut data[(rank + 1) * ncols..];
        let update = |row: &mut [u32]| {
            let lead = row[col];
            if lead == 0 {
                return;
            }
            let c = (p - (lead * inv) % p) % p;
            for (t, &s) in row[col..ncols].iter_mut().zip(pivot_slice) {
                *t = (*t + c * s) % p;
            }
        };
        let remaining_rows = nrows - rank - 1;
        if remaining_rows * (ncols - col) >= PARALLEL_CELL_THRESHOLD {
            tail.par_chunks_mut(ncols).for_each(update);
        } else {
            tail.chunks_mut(ncols).for_each(update);
        }
        rank += 1;
        if rank == nrows {
            if goal == RankGoal::FullColumnRank && col + 1 < ncols {
                return RankOutcome::Deficient;
            }
            break;
        }
    }
    RankOutcome::Rank(rank as u64)
}

/// Sparse elimination state: live row-major rows plus per-column live entry
/// counts. Pivots prefer the sparsest live column and, within it, the
/// sparsest live row.
fn sparse_rank(matrix: &SparseMatrixModP, goal: RankGoal) -> RankOutcome {
    let field = Field::new(matrix.p);
    let mut rows = matrix.to_rows();
    let mut row_alive = vec![true; matrix.nrows];
    let mut col_alive = vec![true; matrix.ncols];
    let mut col_count = vec![0u32; matrix.ncols];
    for row in &rows {
        for &(c, _) in row {
            col_count[c as usize] += 1;
        }
    }
    if goal == RankGoal::FullColumnRank && col_count.iter().any(|&c| c == 0) {
        return RankOutcome::Deficient;
    }
    let mut live_rows = matrix.nrows;
    let mut live_cols = matrix.ncols;
    let mut nnz = matrix.nnz;
    let mut rank = 0u64;
    let mut scratch: Vec<(u32, u16)> = Vec::new();

    loop {
        if live_rows == 0 || live_cols == 0 || nnz == 0 {
            break;
        }
        // Switch to the dense kernel once the live submatrix has filled in.
        let density = nnz as f64 / (live_rows as f64 * live_cols as f64);
        let small = live_rows.min(live_cols) <= DENSE_DIMENSION_THRESHOLD;
        if (density > DENSE_DENSITY_THRESHOLD || small)
            && dense_bytes(live_rows, live_cols, matrix.p) <= DENSE_BYTE_CAP
        {
            let col_map: Vec<usize> = (0..matrix.ncols).filter(|&c| col_alive[c]).collect();
            let col_pos: Vec<usize> = {
                let mut pos = vec![usize::MAX; matrix.ncols];
                for (i, &c) in col_map.iter().enumerate() {
                    pos[c] = i;
                }
                pos
            };
            let mut store = DenseStore::zeros(live_rows * live_cols, matrix.p);
            let mut r = 0usize;
            for (row_idx, row) in rows.iter().enumerate() {
                if !row_alive[row_idx] {
                    continue;
                }
                for &(c, v) in row {
                    store.set(r * live_cols + col_pos[c as usize], v);
                }
                r += 1;
            }
            return match dense_rank(&mut store, live_rows, live_cols, &field, goal) {
                RankOutcome::Rank(sub) => finish_rank(rank + sub, matrix, goal),
                RankOutcome::Deficient => RankOutcome::Deficient,
            };
        }

        // Markowitz-style pivot: sparsest live column, lowest index on ties.
        let Some(pivot_col) = (0..matrix.ncols)
            .filter(|&c| col_alive[c] && col_count[c] > 0)
            .min_by_key(|&c| col_count[c])
        else {
            break;
        };
        // Sparsest live row with an entry in that column, lowest index on ties.
        let pivot_row = (0..matrix.nrows)
            .filter(|&r| row_alive[r])
            .filter(|&r| row_entry(&rows[r], pivot_col).is_some())
            .min_by_key(|&r| rows[r].len())
            .expect("positive column count implies a live row");

        let pivot_val = row_entry(&rows[pivot_row], pivot_col).expect("entry just located");
        let pivot_inv = field.inv(pivot_val);
        // Retire the pivot row and column from the live submatrix.
        row_alive[pivot_row] = false;
        col_alive[pivot_col] = false;
        live_rows -= 1;
        live_cols -= 1;
        rank += 1;
        for &(c, _) in &rows[pivot_row] {
            col_count[c as usize] -= 1;
            nnz -= 1;
        }
        let pivot_entries = std::mem::take(&mut rows[pivot_row]);

        for r in 0..matrix.nrows {
            if !row_alive[r] {
                continue;
            }
            let Some(lead) = row_entry(&rows[r], pivot_col) else {
                continue;
            };
            let c = field.sub(0, field.mul(lead, pivot_inv));
            merge_row(
                &rows[r],
                &pivot_entries,
                c,
                &field,
                &mut scratch,
            );
            for &(col, _) in &rows[r] {
                col_count[col as usize] -= 1;
            }
            nnz -= rows[r].len();
            std::mem::swap(&mut rows[r], &mut scratch);
            for &(col, _) in &rows[r] {
                col_count[col as usize] += 1;
            }
            nnz += rows[r].len();
        }
        if goal == RankGoal::FullColumnRank {
            // Entry counts can only have dropped in the pivot row's columns,
            // and a live column with no live entries left is dependent.
            for &(col, _) in &pivot_entries {
                if col_alive[col as usize] && col_count[col as usize] == 0 {
                    return RankOutcome::Deficient;
                }
            }
        }
    }
    finish_rank(rank, matrix, goal)
}

fn finish_rank(rank: u64, matrix: &SparseMatrixModP, goal: RankGoal) -> RankOutcome {
    if goal == RankGoal::FullColumnRank && rank < matrix.ncols as u64 {
        RankOutcome::Deficient
    } else {
        RankOutcome::Rank(rank)
    }
}

fn row_entry(row: &[(u32, u16)], col: usize) -> Option<u16> {
    row.binary_search_by_key(&(col as u32), |&(c, _)| c)
        .ok()
        .map(|i| row[i].1)
}

/// `out = row + c * pivot`, merging two sorted sparse rows. The pivot column
/// itself cancels exactly and is skipped.
fn merge_row(
    row: &[(u32, u16)],
    pivot: &[(u32, u16)],
    c: u16,
    field: &Field,
    out: &mut Vec<(u32, u16)>,
) {
    out.clear();
    out.reserve(row.len() + pivot.len());
    let mut i = 0;
    let mut j = 0;
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some(&(rc, rv)), Some(&(pc, pv))) if rc == pc => {
                let v = (rv as u32 + c as u32 * pv as u32) % field.p;
                if v != 0 {
                    out.push((rc, v as u16));
                }
                i += 1;
                j += 1;
            }
            (Some(&(rc, rv)), Some(&(pc, _))) if rc < pc => {
                out.push((rc, rv));
                i += 1;
            }
            (Some(_), Some(&(pc, pv))) => {
                let v = field.mul(c, pv);
                if v != 0 {
                    out.push((pc, v));
                }
                j += 1;
            }
            (Some(&(rc, rv)), None) => {
                out.push((rc, rv));
                i += 1;
            }
            (None, Some(&(pc, pv))) => {
                let v = field.mul(c, pv);
                if v != 0 {
                    out.push((pc, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
}
