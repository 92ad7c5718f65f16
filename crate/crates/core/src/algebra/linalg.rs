//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::Rational;

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Builds from row vectors, which must all have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        RatMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = Rational::from_integer(1.into()) / self.get(r, c);
            for k in c..self.cols {
                let v = self.get(r, k) * &inv;
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for k in c..self.cols {
                    if self.get(r, k).is_zero() {
                        continue;
                    }
                    let v = self.get(i, k) - &f * self.get(r, k);
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::from_integer(1.into());
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Solves `self · v = rhs`. Returns a particular solution and a
    /// nullspace basis, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols).clone();
        }
        Some((x, self.nullspace()))
    }
}

/// Sparse row: column index -> nonzero entry.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Incremental sparse Gaussian elimination for `M·v = rhs`.
///
/// Rows are reduced against the stored pivot rows as they arrive, so tall
/// sparse systems never need a dense matrix.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    ncols: usize,
    // pivot column -> (row normalized to 1 at the pivot, rhs)
    pivots: BTreeMap<usize, (SparseRow, Rational)>,
    inconsistent: bool,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem {
            ncols,
            ..Default::default()
        }
    }

    pub fn push(&mut self, mut row: SparseRow, mut rhs: Rational) {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
                return;
            };
            assert!(lead < self.ncols, "column out of range");
            match self.pivots.get(&lead) {
                Some((prow, prhs)) => {
                    let f = lead_val.clone();
                    for (c, v) in prow {
                        let entry = row.entry(*c).or_insert_with(Rational::zero);
                        *entry -= &f * v;
                        if entry.is_zero() {
                            row.remove(c);
                        }
                    }
                    rhs -= &f * prhs;
                }
                None => {
                    let inv = Rational::one() / lead_val;
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    rhs *= &inv;
                    self.pivots.insert(lead, (row, rhs));
                    return;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    fn back_substitute(&self, mut x: Vec<Rational>, homogeneous: bool) -> Vec<Rational> {
        for (&c, (row, rhs)) in self.pivots.iter().rev() {
            let mut val = if homogeneous { Rational::zero() } else { rhs.clone() };
            for (&k, v) in row.range(c + 1..) {
                if !x[k].is_zero() {
                    val -= v * &x[k];
                }
            }
            x[c] = val;
        }
        x
    }

    /// Particular solution (free variables zero) and nullspace basis, or
    /// `None` if inconsistent.
    pub fn solution(&self) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
        if self.inconsistent {
            return None;
        }
        let zeros = vec![Rational::zero(); self.ncols];
        let particular = self.back_substitute(zeros.clone(), false);
        let basis = (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|f| {
                let mut x = zeros.clone();
                x[f] = Rational::one();
                self.back_substitute(x, true)
            })
            .collect();
        Some((particular, basis))
    }
}

/// Right nullspace basis of a matrix.
pub fn nullspace_exact(matrix: &RatMatrix) -> Vec<Vec<Rational>> {
    matrix.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        let cols = rows[0].len();
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(), cols)
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        assert!(m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).nullspace().is_empty());
    }

    #[test]
    fn rank_one_two_by_two() {
        let ns = m(&[&[1, 1], &[2, 2]]).nullspace();
        assert_eq!(ns, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn zero_row() {
        assert_eq!(m(&[&[0, 0]]).nullspace().len(), 2);
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[1, 2, 0, 1], &[2, 4, 1, 0], &[3, 6, 1, 1], &[0, 0, 0, 0]]);
        let rhs = [int(1), int(2), int(3), int(0)];
        let mut sys = SparseSystem::new(4);
        for r in 0..a.rows() {
            let row: SparseRow = a.row(r).iter().cloned().enumerate().collect();
            sys.push(row, rhs[r].clone());
        }
        assert_eq!(sys.rank(), a.rank());
        let (x, ns) = sys.solution().unwrap();
        assert_eq!(a.mul_vec(&x), rhs.to_vec());
        assert_eq!(ns.len(), 4 - a.rank());
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|e| e.is_zero()));
        }
        sys.push([(0, int(1)), (1, int(2)), (3, int(1))].into_iter().collect(), int(5));
        assert!(!sys.is_consistent());
        assert!(sys.solution().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 2], &[2, 4]]);
        let (x, ns) = a.solve(&[int(3), int(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(3), int(6)]);
        assert_eq!(ns.len(), 1);
        assert!(a.solve(&[int(3), int(7)]).is_none());
    }
}
