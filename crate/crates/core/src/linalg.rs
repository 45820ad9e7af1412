//! Exact row reduction over ℚ.

use num_traits::Zero;

use crate::rational::Q;

/// A subspace of ℚⁿ kept as a fully reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(dim: usize) -> RowSpace {
        RowSpace { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<'a>(dim: usize, rows: impl IntoIterator<Item = &'a [Q]>) -> RowSpace {
        let mut s = RowSpace::new(dim);
        for r in rows {
            s.insert(r.to_vec());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, v: &mut [Q]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Q>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match the ambient dimension");
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut().filter(|x| !x.is_zero()) {
            *x /= &lead;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &RowSpace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let dim = rows.first().map_or(0, Vec::len);
    RowSpace::from_rows(dim, rows.iter().map(Vec::as_slice)).rank()
}
