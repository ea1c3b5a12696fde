//! Exact row reduction over the rationals with leftmost pivoting.

use num_traits::{One, Zero};

use crate::rational::Rat;

/// Reduced row echelon form of the span of a set of row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn new(ncols: usize, rows: Vec<Vec<Rat>>) -> Self {
        let mut out = Rref { ncols, rows: Vec::new(), pivots: Vec::new() };
        for r in rows {
            out.insert(r);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds a row, keeping the form reduced with pivots sorted.
    pub fn insert(&mut self, v: Vec<Rat>) {
        assert_eq!(v.len(), self.ncols);
        let mut r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = Rat::one() / &r[p];
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
    }

    /// Basis of `{x : row·x = 0 for all rows}`, one vector per free column,
    /// itself returned in reduced form.
    pub fn nullspace(&self) -> Rref {
        let mut basis = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.binary_search(&f).is_ok() {
                continue;
            }
            let mut x = vec![Rat::zero(); self.ncols];
            x[f] = Rat::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                x[p] = -row[f].clone();
            }
            basis.push(x);
        }
        Rref::new(self.ncols, basis)
    }
}
