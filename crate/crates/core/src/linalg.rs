//! Exact sparse row reduction over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

pub type SparseRow<K> = BTreeMap<K, Rational>;

/// Incrementally maintained reduced row echelon form.
///
/// Every stored row has leading (smallest) key as its pivot with coefficient
/// 1, and no pivot column appears in any other row. Rows are kept sorted by
/// pivot, so the result depends only on the span, not on insertion order.
#[derive(Clone, Debug)]
pub struct RowEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseRow<K>>,
}

impl<K: Ord + Clone> Default for RowEchelon<K> {
    fn default() -> Self {
        RowEchelon {
            rows: BTreeMap::new(),
        }
    }
}

fn axpy<K: Ord + Clone>(target: &mut SparseRow<K>, scale: &Rational, row: &SparseRow<K>) {
    for (k, c) in row {
        let entry = target.entry(k.clone()).or_insert_with(Rational::zero);
        *entry -= scale * c;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}

impl<K: Ord + Clone> RowEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow<K>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Residue of `v` modulo the span.
    pub fn reduce(&self, v: &SparseRow<K>) -> SparseRow<K> {
        let mut out = v.clone();
        for (pivot, row) in &self.rows {
            if let Some(c) = out.get(pivot).cloned() {
                axpy(&mut out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseRow<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank went up.
    pub fn insert(&mut self, v: &SparseRow<K>) -> bool {
        let mut r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / lead;
        for c in r.values_mut() {
            *c *= &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &c, &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    /// Coordinates of `v` in the stored basis (rows in pivot order), or
    /// `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &SparseRow<K>) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.rows
                .keys()
                .map(|p| v.get(p).cloned().unwrap_or_else(Rational::zero))
                .collect(),
        )
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]` (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, c) in col.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut ech = RowEchelon::new();
        for i in 0..self.rows {
            let row: SparseRow<usize> = (0..self.cols)
                .filter(|&j| !self.get(i, j).is_zero())
                .map(|j| (j, self.get(i, j).clone()))
                .collect();
            ech.insert(&row);
        }
        ech.rank()
    }

    /// Rows of the matrix as canonical rational strings.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| rational::to_text(self.get(i, j)))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| rational::display(self.get(i, j)))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
