//! Smith normal form over the integers.
//!
//! The reduction runs on a sparse working copy so that the presentations
//! harvested from move traces (hundreds of generators, mostly two-term
//! relations) stay cheap. Pivots are chosen by smallest absolute value and
//! every finished pivot divides all entries that remain, which yields the
//! divisibility chain without a separate fix-up pass.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Row-sparse integer matrix used for the transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SparseRows {
    rows: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseRows {
    pub(crate) fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| BTreeMap::from([(i, BigInt::one())])).collect() }
    }

    pub(crate) fn row(&self, i: usize) -> &BTreeMap<usize, BigInt> {
        &self.rows[i]
    }

    /// row[dst] += q * row[src]
    fn add_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        debug_assert_ne!(dst, src);
        if q.is_zero() {
            return;
        }
        let src_row: Vec<(usize, BigInt)> = self.rows[src].iter().map(|(j, x)| (*j, x.clone())).collect();
        let dst_row = &mut self.rows[dst];
        for (j, x) in src_row {
            let entry = dst_row.entry(j).or_insert_with(BigInt::zero);
            *entry += q * x;
            if entry.is_zero() {
                dst_row.remove(&j);
            }
        }
    }

    fn negate(&mut self, i: usize) {
        for x in self.rows[i].values_mut() {
            *x = -std::mem::take(x);
        }
    }

    fn permuted(&self, order: &[usize]) -> Self {
        Self { rows: order.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    pub(crate) fn to_dense(&self, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows.len(), cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                m.set(i, *j, x.clone());
            }
        }
        m
    }

    /// Dense form of the transpose, for matrices stored transposed.
    pub(crate) fn to_dense_transposed(&self, rows: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, self.rows.len());
        for (j, r) in self.rows.iter().enumerate() {
            for (i, x) in r {
                m.set(*i, j, x.clone());
            }
        }
        m
    }
}

/// Sparse working matrix with a column index.
struct Work {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Work {
    fn get(&self, i: usize, j: usize) -> BigInt {
        self.rows[i].get(&j).cloned().unwrap_or_default()
    }

    fn set(&mut self, i: usize, j: usize, x: BigInt) {
        if x.is_zero() {
            self.rows[i].remove(&j);
            self.cols[j].remove(&i);
        } else {
            self.rows[i].insert(j, x);
            self.cols[j].insert(i);
        }
    }

    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        let src_row: Vec<(usize, BigInt)> = self.rows[src].iter().map(|(j, x)| (*j, x.clone())).collect();
        for (j, x) in src_row {
            let y = self.get(dst, j) + q * x;
            self.set(dst, j, y);
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        let src_col: Vec<usize> = self.cols[src].iter().copied().collect();
        for i in src_col {
            let y = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, y);
        }
    }
}

/// Smith decomposition `U * A * V = D` with the transforms kept sparse.
#[derive(Clone, Debug)]
pub(crate) struct SparseSmith {
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) u: SparseRows,
    /// Transpose of `U^{-1}`: row `i` is column `i` of the inverse.
    pub(crate) u_inv_t: SparseRows,
    /// Transpose of `V`.
    pub(crate) v_t: SparseRows,
    /// Positive diagonal entries, in chain order; entries past the end are zero.
    pub(crate) diag: Vec<BigInt>,
}

impl SparseSmith {
    /// Decomposes the `rank x columns.len()` matrix whose columns are `columns`.
    pub(crate) fn from_columns(rank: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut work = Work { rows: vec![BTreeMap::new(); rank], cols: vec![BTreeSet::new(); columns.len()] };
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    work.set(i, j, x.clone());
                }
            }
        }
        Self::reduce(work, rank, columns.len())
    }

    pub(crate) fn from_matrix(a: &IntMatrix) -> Self {
        let mut work = Work { rows: vec![BTreeMap::new(); a.rows()], cols: vec![BTreeSet::new(); a.cols()] };
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if !a.get(i, j).is_zero() {
                    work.set(i, j, a.get(i, j).clone());
                }
            }
        }
        Self::reduce(work, a.rows(), a.cols())
    }

    fn reduce(mut work: Work, nrows: usize, ncols: usize) -> Self {
        let mut u = SparseRows::identity(nrows);
        let mut u_inv_t = SparseRows::identity(nrows);
        let mut v_t = SparseRows::identity(ncols);
        let mut row_active = vec![true; nrows];
        let mut col_active = vec![true; ncols];
        let mut pivots: Vec<(usize, usize)> = Vec::new();

        // row i += q * row p, mirrored on the transforms
        let row_op = |work: &mut Work, u: &mut SparseRows, u_inv_t: &mut SparseRows, i: usize, p: usize, q: &BigInt| {
            work.row_add(i, p, q);
            u.add_multiple(i, p, q);
            u_inv_t.add_multiple(p, i, &-q);
        };
        // col j += q * col p
        let col_op = |work: &mut Work, v_t: &mut SparseRows, j: usize, p: usize, q: &BigInt| {
            work.col_add(j, p, q);
            v_t.add_multiple(j, p, q);
        };

        while let Some((mut p, mut q)) = smallest_entry(&work, &row_active, &col_active) {
            loop {
                let piv = work.get(p, q);
                let mut remainder = false;
                let others: Vec<usize> = work.cols[q].iter().copied().filter(|&i| i != p).collect();
                for i in others {
                    let x = work.get(i, q);
                    let quot = &x / &piv;
                    if !(&x % &piv).is_zero() {
                        remainder = true;
                    }
                    row_op(&mut work, &mut u, &mut u_inv_t, i, p, &-quot);
                }
                if remainder {
                    p = argmin(work.cols[q].iter().map(|&i| (i, work.get(i, q))));
                    continue;
                }
                let others: Vec<usize> = work.rows[p].keys().copied().filter(|&j| j != q).collect();
                for j in others {
                    let x = work.get(p, j);
                    let quot = &x / &piv;
                    if !(&x % &piv).is_zero() {
                        remainder = true;
                    }
                    col_op(&mut work, &mut v_t, j, q, &-quot);
                }
                if remainder {
                    q = argmin(work.rows[p].iter().map(|(&j, x)| (j, x.clone())));
                    continue;
                }
                if !piv.abs().is_one() {
                    let offender = (0..nrows).filter(|&i| row_active[i] && i != p).find(|&i| {
                        work.rows[i].iter().any(|(&j, x)| col_active[j] && !(x % &piv).is_zero())
                    });
                    if let Some(i) = offender {
                        row_op(&mut work, &mut u, &mut u_inv_t, p, i, &BigInt::one());
                        continue;
                    }
                }
                break;
            }
            if work.get(p, q).is_negative() {
                let x = work.get(p, q);
                work.set(p, q, -x);
                u.negate(p);
                u_inv_t.negate(p);
            }
            row_active[p] = false;
            col_active[q] = false;
            pivots.push((p, q));
        }

        let diag: Vec<BigInt> = pivots.iter().map(|&(p, q)| work.get(p, q)).collect();
        let row_order: Vec<usize> = pivots
            .iter()
            .map(|&(p, _)| p)
            .chain((0..nrows).filter(|&i| row_active[i]))
            .collect();
        let col_order: Vec<usize> = pivots
            .iter()
            .map(|&(_, q)| q)
            .chain((0..ncols).filter(|&j| col_active[j]))
            .collect();

        Self {
            rows: nrows,
            cols: ncols,
            u: u.permuted(&row_order),
            u_inv_t: u_inv_t.permuted(&row_order),
            v_t: v_t.permuted(&col_order),
            diag,
        }
    }

    pub(crate) fn to_dense(&self) -> SmithForm {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (k, x) in self.diag.iter().enumerate() {
            d.set(k, k, x.clone());
        }
        SmithForm {
            u: self.u.to_dense(self.rows),
            d,
            v: self.v_t.to_dense_transposed(self.cols),
        }
    }
}

fn smallest_entry(work: &Work, row_active: &[bool], col_active: &[bool]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in work.rows.iter().enumerate() {
        if !row_active[i] {
            continue;
        }
        for (&j, x) in row {
            if !col_active[j] {
                continue;
            }
            let a = x.abs();
            if a.is_one() {
                return Some((i, j));
            }
            if best.as_ref().is_none_or(|(_, _, b)| &a < b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn argmin(entries: impl Iterator<Item = (usize, BigInt)>) -> usize {
    entries
        .min_by(|(_, a), (_, b)| a.abs().cmp(&b.abs()))
        .map(|(k, _)| k)
        .expect("nonempty line")
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal in chain form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    SparseSmith::from_matrix(a).to_dense()
}
